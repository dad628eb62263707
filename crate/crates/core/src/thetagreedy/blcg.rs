use crate::coeffring::CoeffPolynomial;
use crate::data::InitialData;
use crate::error::{Error, Result};
use crate::grading::{compatible_weight_sum, CompatibleRequest, OutsideShadow, TightParams};
use crate::scattering::ScatteringDiagram;

use super::broken::{enumerate_broken_lines, generic_endpoint, BrokenLineQuery};

/// Both sides of the broken-line / compatible-grading count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlCgCount {
    pub broken_lines: CoeffPolynomial,
    pub gradings: CoeffPolynomial,
}

impl BlCgCount {
    pub fn is_equal(&self) -> bool {
        self.broken_lines == self.gradings
    }
}

/// Compares the weighted count of broken lines for `(-m, -n)` with final
/// exponent `(ka - m, kb - n)` and x-axis bend multiplicity `t`, ending just
/// below the final direction, against the weighted count of
/// compatible gradings on the `(m, n)` path with vertical total `ka`,
/// horizontal total `kb` and weight `t` outside the shadow selected by `which`.
///
/// `d` must be the completed diagram of `data` at order at least `ka + kb`, and
/// `(m, n)` a valid domain for `(ka, kb)` with `epsilon = -1`, `m > ka`, `n > kb`.
pub fn bl_cg_count(
    d: &ScatteringDiagram,
    data: &InitialData,
    (m, n): (u64, u64),
    (ka, kb): (u64, u64),
    t: u64,
    which: OutsideShadow,
) -> Result<BlCgCount> {
    if ka == 0 && kb == 0 {
        let one = if t == 0 {
            CoeffPolynomial::one()
        } else {
            CoeffPolynomial::zero()
        };
        return Ok(BlCgCount {
            broken_lines: one.clone(),
            gradings: one,
        });
    }
    TightParams::with_domain(ka, kb, -1, m as usize, n as usize)?;
    if m <= ka || n <= kb {
        return Err(Error::Precondition(format!(
            "need (m, n) = ({}, {}) > ({}, {})",
            m, n, ka, kb
        )));
    }
    if (d.order() as u64) < ka + kb {
        return Err(Error::Precondition(format!(
            "diagram order {} is below {}",
            d.order(),
            ka + kb
        )));
    }
    let (mi, ni, kai, kbi) = (m as i64, n as i64, ka as i64, kb as i64);
    let target = (kai - mi, kbi - ni);
    let q = generic_endpoint((ni - kbi, mi - kai), -1);
    let lines = enumerate_broken_lines(
        d,
        (-mi, -ni),
        &q,
        &BrokenLineQuery {
            final_exponent: Some(target),
        },
    )?;
    let mut broken_lines = CoeffPolynomial::zero();
    for l in lines
        .iter()
        .filter(|l| l.multiplicity_at((1, 0)) as u64 == t)
    {
        broken_lines += l.weight();
    }
    let req = CompatibleRequest::new(m as usize, n as usize, data.bounds())
        .with_totals(ka, kb)
        .with_outside(which, t);
    let gradings = compatible_weight_sum(&req, data)?
        .into_values()
        .fold(CoeffPolynomial::zero(), |acc, w| &acc + &w);
    Ok(BlCgCount {
        broken_lines,
        gradings,
    })
}

/// [`bl_cg_count`] with the completed diagram built here, true on equality.
pub fn bl_cg_count_check(
    data: &InitialData,
    (m, n): (u64, u64),
    (ka, kb): (u64, u64),
    t: u64,
) -> Result<bool> {
    let d = ScatteringDiagram::two_line(data, (ka + kb).max(1) as u32)?.ks_complete()?;
    Ok(bl_cg_count(
        &d,
        data,
        (m, n),
        (ka, kb),
        t,
        OutsideShadow::VerticalOutsideSh1,
    )?
    .is_equal())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_agree_on_small_cases() {
        let data = InitialData::symbolic(2, 2);
        for (ka, kb) in [(1, 1), (1, 2), (2, 1), (2, 3)] {
            let p = TightParams::domains(ka, kb, -1, 4)
                .unwrap()
                .into_iter()
                .find(|p| p.m as u64 > ka && p.n as u64 > kb)
                .unwrap();
            for t in 0..=ka.max(kb) {
                assert!(bl_cg_count_check(&data, (p.m as u64, p.n as u64), (ka, kb), t).unwrap());
            }
        }
    }

    #[test]
    fn rejects_small_domain() {
        let data = InitialData::symbolic(2, 2);
        assert!(bl_cg_count_check(&data, (1, 1), (1, 1), 0).is_err());
    }
}
