//! Weighted plane curve quadruples `(w0, w1, w2, d)`.
//!
//! A quadruple is *good* when the weights are pairwise coprime, the degree
//! exceeds every weight, and the monomial support of a general degree-`d`
//! polynomial satisfies the two quasismoothness conditions on every axis:
//!
//! 1. some monomial `x_i^k * x_j` with `k >= 1` has degree `d`;
//! 2. some monomial of degree `d` avoids `x_i`.
//!
//! A good quadruple is *g-good* when the genus formula evaluates to `g`.

use std::fmt;

use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{gcd, lcm, Rational};
use crate::error::{Error, Result};
use crate::D_MAX_CAP;

/// Three positive weights and a positive degree, kept in the order given.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "[i64; 4]", try_from = "[i64; 4]")]
pub struct Quadruple {
    pub weights: [i64; 3],
    pub d: i64,
}

impl Quadruple {
    pub fn new(w0: i64, w1: i64, w2: i64, d: i64) -> Result<Self> {
        if [w0, w1, w2, d].iter().any(|&x| x < 1) {
            return Err(Error::InvalidInput(format!(
                "quadruple entries must be positive, got ({w0},{w1},{w2},{d})"
            )));
        }
        if d > D_MAX_CAP {
            return Err(Error::InvalidInput(format!(
                "degree {d} exceeds cap {D_MAX_CAP}"
            )));
        }
        Ok(Quadruple {
            weights: [w0, w1, w2],
            d,
        })
    }

    pub fn w(&self, i: usize) -> i64 {
        self.weights[i]
    }

    pub fn weight_sum(&self) -> i64 {
        self.weights.iter().sum()
    }

    /// Weights sorted ascending, followed by the degree. Used to identify
    /// quadruples that differ only by a permutation of the weights.
    pub fn normalized_key(&self) -> [i64; 4] {
        let mut w = self.weights;
        w.sort_unstable();
        [w[0], w[1], w[2], self.d]
    }

    /// Same degree, weights permuted so that new axis `i` is old axis `perm[i]`.
    pub fn permuted(&self, perm: [usize; 3]) -> Quadruple {
        Quadruple {
            weights: perm.map(|i| self.weights[i]),
            d: self.d,
        }
    }
}

impl From<Quadruple> for [i64; 4] {
    fn from(q: Quadruple) -> Self {
        [q.weights[0], q.weights[1], q.weights[2], q.d]
    }
}

impl TryFrom<[i64; 4]> for Quadruple {
    type Error = Error;

    fn try_from(v: [i64; 4]) -> Result<Self> {
        Quadruple::new(v[0], v[1], v[2], v[3])
    }
}

impl fmt::Display for Quadruple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.weights;
        write!(f, "({a},{b},{c},{})", self.d)
    }
}

/// Witness for the first monomial condition on one axis: `k*w_i + w_j = d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxisWitness {
    pub k: i64,
    pub j: usize,
}

/// Witness for the second monomial condition on axis `i`: a monomial in the
/// two other variables. `exponents` follow the ascending order of those axes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AvoidingWitness {
    pub axes: [usize; 2],
    pub exponents: [i64; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidityReport {
    pub quadruple: Quadruple,
    pub is_good: bool,
    pub pairwise_coprime: bool,
    pub degree_dominates: bool,
    pub condition_i: [Option<AxisWitness>; 3],
    pub condition_ii: [Option<AvoidingWitness>; 3],
    pub divides: [bool; 3],
    pub genus: Option<u64>,
}

/// Reduces weights to a well-formed triple: each weight is divided by the lcm
/// of the gcds of the pairs that contain it.
pub fn reduce_weights(w: [i64; 3]) -> Result<[i64; 3]> {
    if w.iter().any(|&x| x < 1) {
        return Err(Error::InvalidInput(format!(
            "weights must be positive, got {w:?}"
        )));
    }
    // pair_gcd[i] = gcd of the two weights other than w[i]
    let pair_gcd = [gcd(w[1], w[2]), gcd(w[0], w[2]), gcd(w[0], w[1])];
    let a = [
        lcm(pair_gcd[1], pair_gcd[2]),
        lcm(pair_gcd[0], pair_gcd[2]),
        lcm(pair_gcd[0], pair_gcd[1]),
    ];
    Ok([w[0] / a[0], w[1] / a[1], w[2] / a[2]])
}

/// True when every pair of weights is coprime.
pub fn is_well_formed(w: [i64; 3]) -> bool {
    gcd(w[1], w[2]) == 1 && gcd(w[0], w[2]) == 1 && gcd(w[0], w[1]) == 1
}

fn condition_i(q: &Quadruple, i: usize) -> Option<AxisWitness> {
    let wi = q.w(i);
    // j = i first: the pure power x_i^(k+1)
    let mut rest = [(i + 1) % 3, (i + 2) % 3];
    rest.sort_unstable();
    [i, rest[0], rest[1]].into_iter().find_map(|j| {
        let r = q.d - q.w(j);
        (r >= wi && r % wi == 0).then(|| AxisWitness { k: r / wi, j })
    })
}

fn condition_ii(q: &Quadruple, i: usize) -> Option<AvoidingWitness> {
    let mut axes = [(i + 1) % 3, (i + 2) % 3];
    axes.sort_unstable();
    let (wa, wb) = (q.w(axes[0]), q.w(axes[1]));
    (0..=q.d / wa).find_map(|b| {
        let r = q.d - b * wa;
        (r % wb == 0).then(|| AvoidingWitness {
            axes,
            exponents: [b, r / wb],
        })
    })
}

pub fn validate(q: &Quadruple) -> ValidityReport {
    let pairwise_coprime = is_well_formed(q.weights);
    let degree_dominates = q.weights.iter().all(|&w| q.d > w);
    let condition_i = [0, 1, 2].map(|i| condition_i(q, i));
    let condition_ii = [0, 1, 2].map(|i| condition_ii(q, i));
    let divides = q.weights.map(|w| q.d % w == 0);
    let is_good = pairwise_coprime
        && degree_dominates
        && condition_i.iter().all(Option::is_some)
        && condition_ii.iter().all(Option::is_some);
    let genus = if is_good {
        let g = raw_genus(q);
        if g.is_integer() && *g.numer() >= 0 {
            g.numer().to_u64()
        } else {
            None
        }
    } else {
        None
    };
    ValidityReport {
        quadruple: *q,
        is_good,
        pairwise_coprime,
        degree_dominates,
        condition_i,
        condition_ii,
        divides,
        genus,
    }
}

/// The genus formula evaluated without any validity gate.
pub fn raw_genus(q: &Quadruple) -> Rational {
    let w = q.weights.map(i128::from);
    let d = i128::from(q.d);
    let prod = w[0] * w[1] * w[2];
    let mut s = Rational::new(d * (d - w.iter().sum::<i128>()), prod);
    for wi in w {
        s += Rational::new(i128::from(gcd(wi as i64, q.d)), wi);
    }
    (s - 1) / 2
}

/// Genus of a smooth curve of degree `d` in the weighted plane.
pub fn genus(q: &Quadruple) -> Result<u64> {
    let report = validate(q);
    if !report.is_good {
        return Err(Error::precondition(format!("{q} is not a good quadruple")));
    }
    let g = raw_genus(q);
    if !g.is_integer() || g < Rational::zero() {
        return Err(Error::invariant(format!(
            "genus formula gives {} for good quadruple {q}",
            crate::arith::fmt_rational(&g)
        )));
    }
    g.numer()
        .to_u64()
        .ok_or_else(|| Error::invariant("genus out of range"))
}

/// The member of the infinite family `d = (2g+2)m - 1`,
/// `(1, (d-1)/2, (d+1)/(2g+2), d)`, which is g-good for every `m >= 1`.
pub fn family_quadruple(g: u64, m: u64) -> Result<Quadruple> {
    if g == 0 || m == 0 {
        return Err(Error::precondition("family needs g >= 1 and m >= 1"));
    }
    let g = g as i64;
    let d = (2 * g + 2)
        .checked_mul(m as i64)
        .and_then(|x| x.checked_sub(1))
        .ok_or(Error::Overflow("family degree"))?;
    Quadruple::new(1, (d - 1) / 2, (d + 1) / (2 * g + 2), d)
}

/// All g-good quadruples with `w0 <= w1 <= w2 < d <= d_max`, sorted by
/// `(d, w0, w1, w2)`.
pub fn enumerate_g_good(g: u64, d_max: i64) -> Result<Vec<Quadruple>> {
    if g == 0 {
        return Err(Error::precondition("enumeration needs g >= 1"));
    }
    if d_max > D_MAX_CAP {
        return Err(Error::InvalidInput(format!(
            "d_max {d_max} exceeds cap {D_MAX_CAP}"
        )));
    }
    let target = Rational::from_integer(g as i128);
    let per_degree: Vec<Vec<Quadruple>> = (3..=d_max.max(2))
        .into_par_iter()
        .map(|d| {
            let mut out = Vec::new();
            for w0 in 1..d {
                for w1 in w0..d {
                    if gcd(w0, w1) != 1 {
                        continue;
                    }
                    for w2 in w1..d {
                        if gcd(w0, w2) != 1 || gcd(w1, w2) != 1 {
                            continue;
                        }
                        let q = Quadruple {
                            weights: [w0, w1, w2],
                            d,
                        };
                        if raw_genus(&q) == target && validate(&q).is_good {
                            out.push(q);
                        }
                    }
                }
            }
            out
        })
        .collect();
    Ok(per_degree.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(w0: i64, w1: i64, w2: i64, d: i64) -> Quadruple {
        Quadruple::new(w0, w1, w2, d).unwrap()
    }

    #[test]
    fn rejects_nonpositive_entries() {
        assert!(Quadruple::new(0, 1, 1, 3).is_err());
        assert!(Quadruple::new(1, 1, 1, -3).is_err());
        assert!(Quadruple::new(1, 1, 1, D_MAX_CAP + 1).is_err());
    }

    #[test]
    fn reduce_weights_examples() {
        assert_eq!(reduce_weights([1, 1, 1]).unwrap(), [1, 1, 1]);
        assert_eq!(reduce_weights([2, 2, 3]).unwrap(), [1, 1, 3]);
        assert_eq!(reduce_weights([6, 10, 15]).unwrap(), [1, 1, 1]);
        assert!(reduce_weights([0, 1, 1]).is_err());
    }

    #[test]
    fn validate_examples() {
        let r = validate(&q(1, 3, 2, 7));
        assert!(r.is_good);
        assert_eq!(r.genus, Some(1));

        let r = validate(&q(1, 2, 5, 8));
        assert!(!r.is_good);
        assert!(r.pairwise_coprime && r.degree_dominates);
        assert_eq!(r.condition_i[2], None);
        assert!(r.condition_i[0].is_some() && r.condition_i[1].is_some());

        let r = validate(&q(1, 1, 1, 3));
        assert!(r.is_good);
        assert_eq!(r.genus, Some(1));
        assert_eq!(r.divides, [true; 3]);

        let r = validate(&q(2, 3, 5, 4));
        assert!(!r.is_good);
        assert!(!r.degree_dominates);
        assert_eq!(r.genus, None);
    }

    #[test]
    fn condition_i_witness_prefers_pure_power() {
        let r = validate(&q(1, 3, 2, 7));
        assert_eq!(r.condition_i[0], Some(AxisWitness { k: 6, j: 0 }));
        assert_eq!(r.condition_i[1], Some(AxisWitness { k: 2, j: 0 }));
        assert_eq!(r.condition_i[2], Some(AxisWitness { k: 3, j: 0 }));
        let w = r.condition_ii[0].unwrap();
        assert_eq!(w.axes, [1, 2]);
        assert_eq!(3 * w.exponents[0] + 2 * w.exponents[1], 7);
    }

    #[test]
    fn non_coprime_weights_are_not_good() {
        let r = validate(&q(2, 2, 3, 12));
        assert!(!r.pairwise_coprime);
        assert!(!r.is_good);
    }

    #[test]
    fn genus_examples() {
        assert_eq!(genus(&q(1, 1, 1, 3)).unwrap(), 1);
        assert_eq!(genus(&q(1, 3, 2, 7)).unwrap(), 1);
        assert_eq!(genus(&q(1, 1, 1, 4)).unwrap(), 3);
        assert_eq!(genus(&q(1, 2, 1, 5)).unwrap(), 2);
        assert!(matches!(genus(&q(1, 2, 5, 8)), Err(Error::Precondition(_))));
    }

    #[test]
    fn raw_genus_examples() {
        assert_eq!(raw_genus(&q(1, 1, 1, 3)), Rational::from_integer(1));
        // 1/2 * (0 + 1 + 1 + 1/3 - 1)
        assert_eq!(raw_genus(&q(1, 1, 3, 5)), Rational::new(2, 3));
        assert_eq!(raw_genus(&q(1, 1, 1, 1)), Rational::from_integer(0));
    }

    #[test]
    fn family_examples() {
        assert_eq!(family_quadruple(1, 2).unwrap(), q(1, 3, 2, 7));
        assert_eq!(family_quadruple(1, 1).unwrap(), q(1, 1, 1, 3));
        assert_eq!(family_quadruple(2, 1).unwrap(), q(1, 2, 1, 5));
        assert!(family_quadruple(0, 1).is_err());
        assert!(family_quadruple(1, 0).is_err());
    }

    #[test]
    fn family_is_g_good() {
        for g in 1..=10u64 {
            for m in 1..=50u64 {
                let fq = family_quadruple(g, m).unwrap();
                assert!(validate(&fq).is_good, "{fq}");
                assert_eq!(genus(&fq).unwrap(), g, "{fq}");
            }
        }
    }

    #[test]
    fn enumerate_examples() {
        assert_eq!(enumerate_g_good(1, 3).unwrap(), vec![q(1, 1, 1, 3)]);
        assert!(enumerate_g_good(1, 2).unwrap().is_empty());
        assert_eq!(
            enumerate_g_good(1, 7).unwrap(),
            vec![q(1, 1, 1, 3), q(1, 1, 2, 4), q(1, 2, 3, 6), q(1, 2, 3, 7)]
        );
        assert!(enumerate_g_good(0, 7).is_err());
    }

    #[test]
    fn serde_as_array() {
        let s = serde_json::to_string(&q(1, 3, 2, 7)).unwrap();
        assert_eq!(s, "[1,3,2,7]");
        let back: Quadruple = serde_json::from_str(&s).unwrap();
        assert_eq!(back, q(1, 3, 2, 7));
        assert!(serde_json::from_str::<Quadruple>("[0,1,1,3]").is_err());
    }
}
