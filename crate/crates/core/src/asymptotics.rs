//! Exact density of the residue-class candidate set inside {0..d}^n.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::arith::{fmt_rational, to_fixed, to_scientific};
use crate::error::{Error, Result};

pub const MAX_N: u32 = 2000;

/// Significant digits used when printing deviations.
pub const DIGITS: usize = 30;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DensityRow {
    pub n: u32,
    pub d: u32,
    pub k: u32,
    /// |B| = #{x : |x| = floor(nd/2) mod dk+1}
    pub count: String,
    /// (d+1)^n
    pub total: String,
    #[serde(skip)]
    pub ratio: BigRational,
    #[serde(skip)]
    pub deviation: BigRational,
    /// |B|/(d+1)^n as "p/q"
    pub ratio_exact: String,
    /// 1/(dk+1)
    pub target: String,
    /// |ratio - target|, scientific notation
    pub deviation_sci: String,
    /// |ratio - target| with DIGITS places after the point
    pub deviation_fixed: String,
}

/// Counts points per level residue mod q with a rolling convolution.
fn residue_counts(n: u32, d: u32, q: u32) -> Vec<BigInt> {
    let q = q as usize;
    let mut counts = vec![BigInt::zero(); q];
    counts[0] = BigInt::from(1);
    for _ in 0..n {
        let mut next = vec![BigInt::zero(); q];
        for (r, v) in counts.iter().enumerate() {
            for j in 0..=d as usize {
                next[(r + j) % q] += v;
            }
        }
        counts = next;
    }
    counts
}

pub fn density_row(n: u32, d: u32, k: u32) -> Result<DensityRow> {
    if n > MAX_N {
        return Err(Error::OutOfRange(format!("n={n} exceeds {MAX_N}")));
    }
    if d < 1 || k < 1 {
        return Err(Error::OutOfRange("need d >= 1 and k >= 1".into()));
    }
    let q = d * k + 1;
    let residue = (n * d / 2) % q;
    let count = residue_counts(n, d, q).swap_remove(residue as usize);
    let total = BigInt::from(d + 1).pow(n);
    let ratio = BigRational::new(count.clone(), total.clone());
    let target = BigRational::new(BigInt::from(1), BigInt::from(q));
    let deviation = (&ratio - &target).abs();
    Ok(DensityRow {
        n,
        d,
        k,
        count: count.to_string(),
        total: total.to_string(),
        ratio_exact: fmt_rational(&ratio),
        target: fmt_rational(&target),
        deviation_sci: to_scientific(&deviation, DIGITS),
        deviation_fixed: to_fixed(&deviation, DIGITS),
        ratio,
        deviation,
    })
}

pub fn asymptotics(d: u32, k: u32, ns: &[u32]) -> Result<Vec<DensityRow>> {
    ns.iter().map(|&n| density_row(n, d, k)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{candidate_size, Variant};

    #[test]
    fn k1_is_exactly_a_third() {
        let r = density_row(3, 2, 1).unwrap();
        assert_eq!(r.count, "9");
        assert_eq!(r.ratio, BigRational::new(1.into(), 3.into()));
        assert!(r.deviation.is_zero());
        assert_eq!(r.deviation_sci, "0");
    }

    #[test]
    fn deviation_shrinks() {
        let a = density_row(10, 2, 2).unwrap();
        let b = density_row(20, 2, 2).unwrap();
        assert!(b.deviation < a.deviation);
        let c = density_row(100, 2, 2).unwrap();
        assert!(c.deviation < BigRational::new(1.into(), BigInt::from(10).pow(10)));
    }

    #[test]
    fn matches_candidate_size() {
        for n in 1..12 {
            for k in 1..=n {
                let r = density_row(n, 2, k).unwrap();
                assert_eq!(
                    r.count,
                    candidate_size(n, 2, k, Variant::Theorem)
                        .unwrap()
                        .to_string()
                );
            }
        }
    }

    #[test]
    fn rejects_large_n() {
        assert!(density_row(2001, 2, 1).is_err());
    }
}
