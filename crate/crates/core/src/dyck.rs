//! Maximal Dyck paths and cyclic subpath queries.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Orientation {
    Horizontal,
    Vertical,
}

/// An edge of a maximal Dyck path.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub orientation: Orientation,
    /// 1-based label: `u_index` for horizontal, `v_index` for vertical edges.
    pub index: usize,
    /// 0-based position along the path.
    pub position: usize,
    /// Left endpoint of a horizontal edge, top endpoint of a vertical edge.
    pub anchor: (i64, i64),
}

impl Edge {
    pub fn is_horizontal(&self) -> bool {
        self.orientation == Orientation::Horizontal
    }

    pub fn is_vertical(&self) -> bool {
        self.orientation == Orientation::Vertical
    }

    /// Index of the anchor among the path vertices `0..=m+n`.
    pub fn anchor_vertex(&self) -> usize {
        match self.orientation {
            Orientation::Horizontal => self.position,
            Orientation::Vertical => self.position + 1,
        }
    }

    pub fn label(&self) -> String {
        match self.orientation {
            Orientation::Horizontal => format!("u{}", self.index),
            Orientation::Vertical => format!("v{}", self.index),
        }
    }
}

/// The maximal Dyck path from `(0,0)` to `(m,n)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DyckPath {
    m: usize,
    n: usize,
    edges: Vec<Edge>,
    horizontal: Vec<usize>,
    vertical: Vec<usize>,
}

impl DyckPath {
    /// Builds the path whose height after `i` east steps is `floor(i n / m)`.
    pub fn maximal(m: usize, n: usize) -> DyckPath {
        let mut edges = Vec::with_capacity(m + n);
        let (mut x, mut y) = (0usize, 0usize);
        let push = |o: Orientation, x: &mut usize, y: &mut usize, edges: &mut Vec<Edge>| {
            let position = edges.len();
            let (index, anchor) = match o {
                Orientation::Horizontal => {
                    let a = (*x as i64, *y as i64);
                    *x += 1;
                    (*x, a)
                }
                Orientation::Vertical => {
                    *y += 1;
                    (*y, (*x as i64, *y as i64))
                }
            };
            edges.push(Edge {
                orientation: o,
                index,
                position,
                anchor,
            });
        };
        if m == 0 {
            for _ in 0..n {
                push(Orientation::Vertical, &mut x, &mut y, &mut edges);
            }
        } else {
            for i in 0..=m {
                let target = i * n / m;
                while y < target {
                    push(Orientation::Vertical, &mut x, &mut y, &mut edges);
                }
                if i < m {
                    push(Orientation::Horizontal, &mut x, &mut y, &mut edges);
                }
            }
        }
        let horizontal = edges
            .iter()
            .filter(|e| e.is_horizontal())
            .map(|e| e.position)
            .collect();
        let vertical = edges
            .iter()
            .filter(|e| e.is_vertical())
            .map(|e| e.position)
            .collect();
        DyckPath {
            m,
            n,
            edges,
            horizontal,
            vertical,
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, position: usize) -> &Edge {
        &self.edges[position]
    }

    /// `u_i`, 1-based.
    pub fn u(&self, i: usize) -> &Edge {
        &self.edges[self.horizontal[i - 1]]
    }

    /// `v_j`, 1-based.
    pub fn v(&self, j: usize) -> &Edge {
        &self.edges[self.vertical[j - 1]]
    }

    /// Positions of the horizontal edges, left to right.
    pub fn horizontal_positions(&self) -> &[usize] {
        &self.horizontal
    }

    /// Positions of the vertical edges, bottom to top.
    pub fn vertical_positions(&self) -> &[usize] {
        &self.vertical
    }

    /// Lattice points visited by the path, `m + n + 1` of them.
    pub fn vertices(&self) -> Vec<(i64, i64)> {
        let mut out = vec![(0, 0)];
        for e in &self.edges {
            let (x, y) = *out.last().unwrap();
            out.push(if e.is_horizontal() {
                (x + 1, y)
            } else {
                (x, y + 1)
            });
        }
        out
    }

    /// Compact word over `E` (east) and `N` (north).
    pub fn word(&self) -> String {
        self.edges
            .iter()
            .map(|e| if e.is_horizontal() { 'E' } else { 'N' })
            .collect()
    }

    fn check(&self, e: &Edge) -> Result<()> {
        match self.edges.get(e.position) {
            Some(f) if f == e => Ok(()),
            _ => Err(Error::EdgeNotOnPath),
        }
    }

    /// Edges traversed walking forward from `p_e` to `p_f`, wrapping from
    /// `(m,n)` to `(0,0)` when `p_e` lies beyond `p_f`.
    pub fn cyclic_subpath(&self, e: &Edge, f: &Edge) -> Result<Vec<Edge>> {
        self.check(e)?;
        self.check(f)?;
        let (i, j) = (e.anchor_vertex(), f.anchor_vertex());
        let n = self.edges.len();
        let positions: Vec<usize> = if i <= j {
            (i..j).collect()
        } else {
            (i..n).chain(0..j).collect()
        };
        Ok(positions.into_iter().map(|p| self.edges[p]).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_paths() {
        assert_eq!(DyckPath::maximal(3, 1).word(), "EEEN");
        assert_eq!(DyckPath::maximal(5, 2).word(), "EEENEEN");
        assert!(DyckPath::maximal(0, 0).is_empty());
        assert_eq!(DyckPath::maximal(0, 3).word(), "NNN");
        assert_eq!(DyckPath::maximal(2, 0).word(), "EE");
    }

    #[test]
    fn maximal_path_six_four_vertices() {
        let want = vec![
            (0, 0),
            (1, 0),
            (2, 0),
            (2, 1),
            (3, 1),
            (3, 2),
            (4, 2),
            (5, 2),
            (5, 3),
            (6, 3),
            (6, 4),
        ];
        assert_eq!(DyckPath::maximal(6, 4).vertices(), want);
    }

    #[test]
    fn anchors() {
        let p = DyckPath::maximal(3, 1);
        assert_eq!(p.u(1).anchor, (0, 0));
        assert_eq!(p.v(1).anchor, (3, 1));
    }

    #[test]
    fn subpath_examples() {
        let p = DyckPath::maximal(7, 4);
        let labels = |es: Vec<Edge>| es.iter().map(Edge::label).collect::<Vec<_>>().join(",");
        let s = p.cyclic_subpath(p.u(2), p.v(4)).unwrap();
        assert_eq!(labels(s.clone()), "u2,v1,u3,u4,v2,u5,u6,v3,u7,v4");
        assert_eq!(s.iter().filter(|e| e.is_horizontal()).count(), 6);
        let s = p.cyclic_subpath(p.u(4), p.v(3)).unwrap();
        assert_eq!(labels(s), "u4,v2,u5,u6,v3");
        assert!(p.cyclic_subpath(p.u(1), p.u(1)).unwrap().is_empty());
    }

    #[test]
    fn foreign_edge_rejected() {
        let p = DyckPath::maximal(7, 4);
        let q = DyckPath::maximal(3, 1);
        assert_eq!(p.cyclic_subpath(q.v(1), p.u(1)), Err(Error::EdgeNotOnPath));
    }
}
