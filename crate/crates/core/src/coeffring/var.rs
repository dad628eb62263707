use std::fmt;

/// A coefficient variable.
///
/// `P { side, degree }` is `p_{side,degree}`, the coefficient of `z^degree`
/// in the initial wall-function on side 1 (the x-axis) or side 2 (the
/// y-axis). Sides beyond 2 label the functions of additional initial lines. `p_{i,0}` is the constant 1 and is never a variable. `S` and `T`
/// are the specialization parameters of `(1 + s x)^l1` and `(1 + t y)^l2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    P { side: u8, degree: u32 },
    S,
    T,
}

impl Var {
    /// `p_{side,degree}`. Panics for side 0 or degree 0.
    pub fn p(side: u8, degree: u32) -> Var {
        assert!(side >= 1, "sides are numbered from 1");
        assert!(degree >= 1, "p_{{i,0}} is the constant 1, not a variable");
        Var::P { side, degree }
    }

    /// Grading weight: `deg p_{i,j} = j`, `deg s = deg t = 1`.
    pub fn weight(self) -> i64 {
        match self {
            Var::P { degree, .. } => degree as i64,
            Var::S | Var::T => 1,
        }
    }

    pub fn side(self) -> Option<u8> {
        match self {
            Var::P { side, .. } => Some(side),
            Var::S => Some(1),
            Var::T => Some(2),
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::P { side, degree } => write!(f, "p[{side},{degree}]"),
            Var::S => f.write_str("s"),
            Var::T => f.write_str("t"),
        }
    }
}
