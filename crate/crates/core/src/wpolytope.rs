//! The lattice polytope of a quadruple.
//!
//! Every monomial `x0^a x1^b x2^c` of weighted degree `d` is a lattice point
//! `(a, b, c)` on the plane `a*w0 + b*w1 + c*w2 = d` in the positive octant.
//! The rows of `M(P)` are those points in ascending lexicographic order.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::det3;
use crate::error::{Error, Result};
use crate::quadruples::{genus, validate, Quadruple};

pub type Point3 = [i64; 3];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedPolytope {
    pub quadruple: Quadruple,
    /// Rows of `M(P)`, sorted ascending.
    pub points: Vec<Point3>,
    /// Points with every coordinate at least one.
    pub interior: Vec<Point3>,
}

impl WeightedPolytope {
    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn degree_of(&self, v: &Point3) -> i64 {
        weighted_degree(&self.quadruple, v)
    }

    pub fn contains(&self, v: &Point3) -> bool {
        self.points.binary_search(v).is_ok()
    }
}

pub fn weighted_degree(q: &Quadruple, v: &Point3) -> i64 {
    v[0] * q.w(0) + v[1] * q.w(1) + v[2] * q.w(2)
}

/// All nonnegative `(a, b, c)` with `a*w0 + b*w1 + c*w2 = degree`, sorted.
pub fn monomials_of_degree(weights: [i64; 3], degree: i64) -> Vec<Point3> {
    let mut out = Vec::new();
    if degree < 0 {
        return out;
    }
    for a in 0..=degree / weights[0] {
        let ra = degree - a * weights[0];
        for b in 0..=ra / weights[1] {
            let rb = ra - b * weights[1];
            if rb % weights[2] == 0 {
                out.push([a, b, rb / weights[2]]);
            }
        }
    }
    // the loops already emit ascending (a, b) and c is determined by them
    debug_assert!(out.windows(2).all(|w| w[0] < w[1]));
    out
}

pub fn build(q: &Quadruple) -> Result<WeightedPolytope> {
    if !validate(q).is_good {
        return Err(Error::precondition(format!("{q} is not a good quadruple")));
    }
    let points = monomials_of_degree(q.weights, q.d);
    let interior = points
        .iter()
        .copied()
        .filter(|p| p.iter().all(|&x| x >= 1))
        .collect();
    Ok(WeightedPolytope {
        quadruple: *q,
        points,
        interior,
    })
}

/// Number of interior lattice points, counted twice: as points of `P` off the
/// coordinate planes, and as monomials of degree `d - w0 - w1 - w2`.
pub fn interior_count(p: &WeightedPolytope) -> Result<usize> {
    let q = &p.quadruple;
    let direct = p
        .points
        .iter()
        .filter(|v| v.iter().all(|&x| x >= 1))
        .count();
    let shifted = monomials_of_degree(q.weights, q.d - q.weight_sum()).len();
    if direct != shifted {
        return Err(Error::invariant(format!(
            "{q}: {direct} interior points but {shifted} monomials of degree d - |w|"
        )));
    }
    Ok(direct)
}

pub fn minor_det(v1: &Point3, v2: &Point3, v3: &Point3) -> Result<i128> {
    det3([*v1, *v2, *v3])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinorReport {
    pub triples: usize,
    pub nonzero: usize,
    pub violations: usize,
}

/// Checks every 3x3 minor of `M(P)` for divisibility by `d`.
pub fn check_all_minors(p: &WeightedPolytope) -> Result<MinorReport> {
    let d = i128::from(p.quadruple.d);
    let pts = &p.points;
    let mut report = MinorReport {
        triples: 0,
        nonzero: 0,
        violations: 0,
    };
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            for k in j + 1..pts.len() {
                let det = minor_det(&pts[i], &pts[j], &pts[k])?;
                report.triples += 1;
                if det != 0 {
                    report.nonzero += 1;
                }
                if det % d != 0 {
                    report.violations += 1;
                }
            }
        }
    }
    if report.violations > 0 {
        return Err(Error::invariant(format!(
            "{}: {} minors not divisible by d",
            p.quadruple, report.violations
        )));
    }
    Ok(report)
}

/// The first triple of rows (by row index) whose minor is `±d`.
pub fn find_unimodular_triple(p: &WeightedPolytope) -> Result<[Point3; 3]> {
    let d = i128::from(p.quadruple.d);
    let pts = &p.points;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            for k in j + 1..pts.len() {
                if minor_det(&pts[i], &pts[j], &pts[k])?.abs() == d {
                    return Ok([pts[i], pts[j], pts[k]]);
                }
            }
        }
    }
    Err(Error::invariant(format!(
        "{}: no minor with determinant ±d",
        p.quadruple
    )))
}

/// Every triple of rows with minor `±d`, in row-index order.
pub fn unimodular_triples(p: &WeightedPolytope) -> Result<Vec<[Point3; 3]>> {
    let d = i128::from(p.quadruple.d);
    let pts = &p.points;
    let mut out = Vec::new();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            for k in j + 1..pts.len() {
                if minor_det(&pts[i], &pts[j], &pts[k])?.abs() == d {
                    out.push([pts[i], pts[j], pts[k]]);
                }
            }
        }
    }
    Ok(out)
}

/// Lattice-point count bound status. The plane-curve cubic `(1,1,1,3)` has
/// `n = 3g + 7`; every other tested quadruple satisfies `n <= 3g + 6`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundStatus {
    Within,
    ExceptionalBound,
    Exceeded,
}

pub fn bound_status(n: usize, g: u64) -> BoundStatus {
    let g = g as usize;
    if n <= 3 * g + 6 {
        BoundStatus::Within
    } else if n == 3 * g + 7 {
        BoundStatus::ExceptionalBound
    } else {
        BoundStatus::Exceeded
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CaseTag {
    /// No weight divides `d`; rows form a 3-cycle.
    #[serde(rename = "a.i")]
    AI,
    /// No weight divides `d`; a 2-cycle with a tail.
    #[serde(rename = "a.ii")]
    AII,
    /// One weight divides `d`; the other two point at each other.
    #[serde(rename = "b.i")]
    BI,
    /// One weight divides `d`; a chain ending at the dividing axis.
    #[serde(rename = "b.ii")]
    BII,
    /// One weight divides `d`; both others point at it.
    #[serde(rename = "b.iii")]
    BIII,
    #[serde(rename = "c")]
    C,
    #[serde(rename = "d")]
    D,
}

impl CaseTag {
    pub const ALL: [CaseTag; 7] = [
        CaseTag::AI,
        CaseTag::AII,
        CaseTag::BI,
        CaseTag::BII,
        CaseTag::BIII,
        CaseTag::C,
        CaseTag::D,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            CaseTag::AI => "a.i",
            CaseTag::AII => "a.ii",
            CaseTag::BI => "b.i",
            CaseTag::BII => "b.ii",
            CaseTag::BIII => "b.iii",
            CaseTag::C => "c",
            CaseTag::D => "d",
        }
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The three distinguished rows of `M(P)`, one per axis.
///
/// Row `i` has the form `alpha*e_i` or `alpha*e_i + e_j`; `partners[i]` is
/// that `j`, absent for a pure power. `permutation[r]` is the actual axis
/// playing the role of axis `r` in the case's reference matrix, so the
/// reference matrix entry `(r, s)` equals `rows[permutation[r]][permutation[s]]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistinguishedTriangle {
    pub rows: [Point3; 3],
    pub partners: [Option<usize>; 3],
    pub case_tag: CaseTag,
    pub permutation: [usize; 3],
    pub k: Option<i64>,
    pub l: Option<i64>,
    pub predicted_det: i128,
}

impl DistinguishedTriangle {
    /// Entry `(r, s)` of the reference matrix of the case.
    pub fn case_entry(&self, r: usize, s: usize) -> i64 {
        self.rows[self.permutation[r]][self.permutation[s]]
    }

    /// Weight of the axis playing reference axis `r`.
    pub fn case_weight(&self, q: &Quadruple, r: usize) -> i64 {
        q.w(self.permutation[r])
    }
}

/// Picks the distinguished row of each axis, preferring a pure power, then a
/// unit in the lowest-index other coordinate.
fn distinguished_rows(p: &WeightedPolytope) -> Result<([Point3; 3], [Option<usize>; 3])> {
    let mut rows = [[0; 3]; 3];
    let mut partners = [None; 3];
    for i in 0..3 {
        let mut others = [(i + 1) % 3, (i + 2) % 3];
        others.sort_unstable();
        let pure = p
            .points
            .iter()
            .find(|v| v[i] >= 1 && v[others[0]] == 0 && v[others[1]] == 0);
        if let Some(v) = pure {
            rows[i] = *v;
            continue;
        }
        let mut found = false;
        for (idx, &j) in others.iter().enumerate() {
            let other = others[1 - idx];
            if let Some(v) = p
                .points
                .iter()
                .find(|v| v[i] >= 1 && v[j] == 1 && v[other] == 0)
            {
                rows[i] = *v;
                partners[i] = Some(j);
                found = true;
                break;
            }
        }
        if !found {
            return Err(Error::invariant(format!(
                "{}: no distinguished point on axis {i}",
                p.quadruple
            )));
        }
    }
    Ok((rows, partners))
}

fn exact_div(num: i64, den: i64, what: &str) -> Result<i64> {
    if den == 0 || num % den != 0 {
        return Err(Error::invariant(format!(
            "{what}: {num} is not divisible by {den}"
        )));
    }
    Ok(num / den)
}

/// Classifies the pattern of partners and aligns it with the reference
/// matrix of the matching case.
fn match_case(partners: &[Option<usize>; 3]) -> (CaseTag, [usize; 3]) {
    let none: Vec<usize> = (0..3).filter(|&i| partners[i].is_none()).collect();
    let some: Vec<usize> = (0..3).filter(|&i| partners[i].is_some()).collect();
    let to = |i: usize| partners[i].expect("axis has a partner");
    match none.len() {
        3 => (CaseTag::D, [0, 1, 2]),
        2 => {
            // reference: rows (a,0,0), (0,b,0), (1,0,c)
            let x = some[0];
            let target = to(x);
            let other = none.iter().copied().find(|&i| i != target).unwrap();
            (CaseTag::C, [target, other, x])
        }
        1 => {
            let r = none[0];
            let (x, y) = (some[0], some[1]);
            if to(x) == y && to(y) == x {
                (CaseTag::BI, [r, x, y])
            } else if to(x) == r && to(y) == r {
                (CaseTag::BIII, [r, x, y])
            } else {
                // chain start -> mid -> r
                let (mid, start) = if to(x) == r { (x, y) } else { (y, x) };
                (CaseTag::BII, [r, mid, start])
            }
        }
        _ => {
            if to(to(to(0))) == 0 {
                (CaseTag::AI, [0, to(0), to(to(0))])
            } else {
                let tail = (0..3)
                    .find(|&i| partners.iter().all(|p| *p != Some(i)))
                    .unwrap();
                (CaseTag::AII, [tail, to(tail), to(to(tail))])
            }
        }
    }
}

pub fn distinguished_triangle(p: &WeightedPolytope) -> Result<DistinguishedTriangle> {
    let q = &p.quadruple;
    let g = i128::from(genus(q)? as i64);
    let (rows, partners) = distinguished_rows(p)?;
    let (case_tag, permutation) = match_case(&partners);
    let e = |r: usize, s: usize| rows[permutation[r]][permutation[s]];
    let w = |r: usize| q.w(permutation[r]);
    let (a, b) = (e(0, 0), e(1, 1));
    let d = i128::from(q.d);
    let (k, l, predicted_det) = match case_tag {
        CaseTag::AI => (None, None, (2 * g + 1) * d),
        CaseTag::AII => {
            let k = exact_div(b - 1, w(2), "a.ii: b - 1 = k*w2")?;
            let l = exact_div(a, w(2), "a.ii: a = l*w2")?;
            (
                Some(k),
                Some(l),
                (2 * g + 1 + i128::from(k) - i128::from(l)) * d,
            )
        }
        CaseTag::BI => {
            let k = exact_div(b - 1, w(2), "b.i: b - 1 = k*w2")?;
            (Some(k), None, (2 * g + i128::from(k)) * d)
        }
        CaseTag::BII => {
            let k = exact_div(a - 1, w(1), "b.ii: a - 1 = k*w1")?;
            (Some(k), None, (2 * g + i128::from(k)) * d)
        }
        CaseTag::BIII => {
            let k = exact_div(a - 1, w(1) * w(2), "b.iii: a - 1 = k*w1*w2")?;
            (Some(k), None, i128::from(k) * d * (d - i128::from(w(0))))
        }
        CaseTag::C => {
            let k = exact_div(a, w(1), "c: a = k*w1")?;
            let l = exact_div(a - 1, w(2), "c: a - 1 = l*w2")?;
            (
                Some(k),
                Some(l),
                (2 * g + i128::from(k) + i128::from(l) - 1) * d,
            )
        }
        CaseTag::D => {
            let k = exact_div(a, w(1) * w(2), "d: a = k*w1*w2")?;
            (Some(k), None, i128::from(k) * d * d)
        }
    };
    Ok(DistinguishedTriangle {
        rows,
        partners,
        case_tag,
        permutation,
        k,
        l,
        predicted_det,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseReport {
    pub case_tag: CaseTag,
    pub actual_det: i128,
    pub predicted_det: i128,
    /// The genus relation specific to the case, both sides evaluated.
    pub identity: String,
    pub identity_lhs: i128,
    pub identity_rhs: i128,
}

impl CaseReport {
    pub fn det_matches(&self) -> bool {
        self.actual_det == self.predicted_det
    }

    pub fn identity_holds(&self) -> bool {
        self.identity_lhs == self.identity_rhs
    }
}

/// Evaluates the distinguished determinant directly and through the case
/// formula, together with the genus relation of the case.
pub fn case_report(p: &WeightedPolytope) -> Result<(DistinguishedTriangle, CaseReport)> {
    let q = &p.quadruple;
    let tri = distinguished_triangle(p)?;
    let g = i128::from(genus(q)? as i64);
    let actual_det = det3(tri.rows)?;
    let e = |r: usize, s: usize| i128::from(tri.case_entry(r, s));
    let w = |r: usize| i128::from(tri.case_weight(q, r));
    let (a, c) = (e(0, 0), e(2, 2));
    let d = i128::from(q.d);
    let k = tri.k.map(i128::from).unwrap_or(0);
    let l = tri.l.map(i128::from).unwrap_or(0);
    let (identity, lhs, rhs) = match tri.case_tag {
        CaseTag::AI => (
            "d(d-w0-w1-w2) + w0w1 + w0w2 + w1w2 = (2g+1)w0w1w2",
            d * (d - w(0) - w(1) - w(2)) + w(0) * w(1) + w(0) * w(2) + w(1) * w(2),
            (2 * g + 1) * w(0) * w(1) * w(2),
        ),
        CaseTag::AII => ("2g+1 = ak + l - k", 2 * g + 1, a * k + l - k),
        CaseTag::BI => ("2g = k(a-1)", 2 * g, k * (a - 1)),
        CaseTag::BII => ("2g = k(c-1)", 2 * g, k * (c - 1)),
        CaseTag::BIII => ("2g = k(d-w1-w2)", 2 * g, k * (d - w(1) - w(2))),
        CaseTag::C => ("2g+l+k-1 = klw0", 2 * g + l + k - 1, k * l * w(0)),
        CaseTag::D => (
            "2g-2 + k(w0+w1+w2) = kd",
            2 * g - 2 + k * (w(0) + w(1) + w(2)),
            k * d,
        ),
    };
    let report = CaseReport {
        case_tag: tri.case_tag,
        actual_det,
        predicted_det: tri.predicted_det,
        identity: identity.to_string(),
        identity_lhs: lhs,
        identity_rhs: rhs,
    };
    Ok((tri, report))
}

/// Like [`case_report`], but a failed determinant or genus relation is an
/// invariant violation.
pub fn verify_case_identities(p: &WeightedPolytope) -> Result<CaseReport> {
    let (_, report) = case_report(p)?;
    if !report.det_matches() {
        return Err(Error::invariant(format!(
            "{} case {}: distinguished det {} but case formula gives {}",
            p.quadruple, report.case_tag, report.actual_det, report.predicted_det
        )));
    }
    if !report.identity_holds() {
        return Err(Error::invariant(format!(
            "{} case {}: {} fails ({} vs {})",
            p.quadruple, report.case_tag, report.identity, report.identity_lhs, report.identity_rhs
        )));
    }
    Ok(report)
}

/// Integer coordinates of a point in the basis of a unimodular triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub alphas: [i128; 3],
}

/// Solves `target = a1*v1 + a2*v2 + a3*v3` by Cramer's rule. The triple must
/// have determinant `±d` and the target a degree that is a positive multiple
/// of `d`; the coefficients are then integers.
pub fn decompose(
    p: &WeightedPolytope,
    triple: &[Point3; 3],
    target: &Point3,
) -> Result<Decomposition> {
    let q = &p.quadruple;
    let d = q.d;
    let det = det3(*triple)?;
    if det.abs() != i128::from(d) {
        return Err(Error::precondition(format!(
            "triple has determinant {det}, not ±{d}"
        )));
    }
    if target.iter().any(|&x| x < 0) {
        return Err(Error::precondition(
            "target must have nonnegative exponents",
        ));
    }
    let deg = weighted_degree(q, target);
    if deg < d || deg % d != 0 {
        return Err(Error::precondition(format!(
            "target degree {deg} is not a positive multiple of {d}"
        )));
    }
    let mut alphas = [0i128; 3];
    for (i, alpha) in alphas.iter_mut().enumerate() {
        let mut m = *triple;
        m[i] = *target;
        let num = det3(m)?;
        if num % det != 0 {
            return Err(Error::invariant(format!(
                "{q}: coefficient {i} of {target:?} is {num}/{det}, not an integer"
            )));
        }
        *alpha = num / det;
    }
    for c in 0..3 {
        let s: i128 = (0..3).map(|i| alphas[i] * i128::from(triple[i][c])).sum();
        if s != i128::from(target[c]) {
            return Err(Error::invariant(format!(
                "{q}: decomposition of {target:?} does not reconstruct"
            )));
        }
    }
    Ok(Decomposition { alphas })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(w0: i64, w1: i64, w2: i64, d: i64) -> WeightedPolytope {
        build(&Quadruple::new(w0, w1, w2, d).unwrap()).unwrap()
    }

    /// Points by a different route: filter the whole box.
    fn brute_points(q: &Quadruple) -> Vec<Point3> {
        let mut out = Vec::new();
        for a in 0..=q.d {
            for b in 0..=q.d {
                for c in 0..=q.d {
                    if weighted_degree(q, &[a, b, c]) == q.d {
                        out.push([a, b, c]);
                    }
                }
            }
        }
        out
    }

    #[test]
    fn build_examples() {
        assert_eq!(poly(1, 1, 1, 3).n(), 10);
        assert_eq!(
            poly(1, 3, 2, 7).points,
            vec![
                [0, 1, 2],
                [1, 0, 3],
                [1, 2, 0],
                [2, 1, 1],
                [3, 0, 2],
                [4, 1, 0],
                [5, 0, 1],
                [7, 0, 0]
            ]
        );
        assert_eq!(poly(1, 2, 1, 5).n(), 12);
        let bad = Quadruple::new(1, 1, 3, 5).unwrap();
        assert!(matches!(build(&bad), Err(Error::Precondition(_))));
    }

    #[test]
    fn build_matches_brute_force() {
        for (w0, w1, w2, d) in [(1, 3, 2, 7), (1, 2, 1, 5), (2, 3, 5, 19), (1, 1, 2, 4)] {
            let q = Quadruple::new(w0, w1, w2, d).unwrap();
            assert_eq!(monomials_of_degree(q.weights, d), brute_points(&q));
        }
    }

    #[test]
    fn interior_examples() {
        let p = poly(1, 1, 1, 3);
        assert_eq!(interior_count(&p).unwrap(), 1);
        assert_eq!(p.interior, vec![[1, 1, 1]]);
        let p = poly(1, 3, 2, 7);
        assert_eq!(interior_count(&p).unwrap(), 1);
        assert_eq!(p.interior, vec![[2, 1, 1]]);
        let p = poly(1, 2, 1, 5);
        assert_eq!(interior_count(&p).unwrap(), 2);
        assert_eq!(p.interior, vec![[1, 1, 2], [2, 1, 1]]);
    }

    #[test]
    fn minor_examples() {
        assert_eq!(minor_det(&[7, 0, 0], &[1, 2, 0], &[1, 0, 3]).unwrap(), 42);
        assert_eq!(minor_det(&[4, 1, 0], &[2, 1, 1], &[1, 2, 0]).unwrap(), -7);
        assert_eq!(minor_det(&[2, 1, 1], &[2, 1, 1], &[7, 0, 0]).unwrap(), 0);
        let r = check_all_minors(&poly(1, 3, 2, 7)).unwrap();
        assert_eq!(r.triples, 56);
        assert_eq!(r.violations, 0);
    }

    #[test]
    fn unimodular_triple_examples() {
        let t = find_unimodular_triple(&poly(1, 3, 2, 7)).unwrap();
        assert_eq!(minor_det(&t[0], &t[1], &t[2]).unwrap().abs(), 7);
        assert_eq!(t, [[0, 1, 2], [1, 0, 3], [1, 2, 0]]);
        let t = find_unimodular_triple(&poly(1, 1, 1, 3)).unwrap();
        assert_eq!(t, [[0, 0, 3], [0, 1, 2], [1, 0, 2]]);
        assert_eq!(minor_det(&t[0], &t[1], &t[2]).unwrap(), -3);
        for d in 3..9 {
            let t = find_unimodular_triple(&poly(1, 1, 1, d)).unwrap();
            assert_eq!(minor_det(&t[0], &t[1], &t[2]).unwrap().abs(), d as i128);
        }
    }

    #[test]
    fn distinguished_examples() {
        let t = distinguished_triangle(&poly(1, 1, 1, 3)).unwrap();
        assert_eq!(t.rows, [[3, 0, 0], [0, 3, 0], [0, 0, 3]]);
        assert_eq!(t.case_tag, CaseTag::D);
        assert_eq!(t.k, Some(3));

        let t = distinguished_triangle(&poly(1, 3, 2, 7)).unwrap();
        assert_eq!(t.rows, [[7, 0, 0], [1, 2, 0], [1, 0, 3]]);
        assert_eq!(t.case_tag, CaseTag::BIII);
        assert_eq!(t.k, Some(1));
        assert_eq!(t.l, None);

        let t = distinguished_triangle(&poly(1, 2, 1, 5)).unwrap();
        assert_eq!(t.rows, [[5, 0, 0], [1, 2, 0], [0, 0, 5]]);
        assert_eq!(t.case_tag, CaseTag::C);
        assert_eq!(t.permutation, [0, 2, 1]);
        assert_eq!((t.k, t.l), (Some(5), Some(2)));
    }

    #[test]
    fn case_identity_examples() {
        let r = verify_case_identities(&poly(1, 1, 1, 3)).unwrap();
        assert_eq!((r.actual_det, r.predicted_det), (27, 27));

        let r = verify_case_identities(&poly(1, 3, 2, 7)).unwrap();
        assert_eq!((r.actual_det, r.predicted_det), (42, 42));
        assert_eq!((r.identity_lhs, r.identity_rhs), (2, 2));

        let r = verify_case_identities(&poly(1, 2, 1, 5)).unwrap();
        assert_eq!((r.actual_det, r.predicted_det), (50, 50));
        assert_eq!((r.identity_lhs, r.identity_rhs), (10, 10));
    }

    #[test]
    fn b_iii_with_k_two() {
        // (1,2,3,13) has genus 8 and k = 2 in the b.iii pattern
        let p = poly(1, 2, 3, 13);
        let r = verify_case_identities(&p).unwrap();
        assert_eq!(r.case_tag, CaseTag::BIII);
        assert_eq!(r.actual_det, 13 * 6 * 4);
        assert_eq!(r.actual_det, 2 * 13 * 12);
    }

    #[test]
    fn match_case_covers_every_partner_pattern() {
        // enumerate all fixed-point-free partial maps on three axes
        let choices = |i: usize| -> Vec<Option<usize>> {
            let mut v = vec![None];
            v.extend((0..3).filter(|&j| j != i).map(Some));
            v
        };
        for p0 in choices(0) {
            for p1 in choices(1) {
                for p2 in choices(2) {
                    let partners = [p0, p1, p2];
                    let (tag, perm) = match_case(&partners);
                    let mut sorted = perm;
                    sorted.sort_unstable();
                    assert_eq!(sorted, [0, 1, 2]);
                    // reference partner pattern in case coordinates
                    let reference: [Option<usize>; 3] = match tag {
                        CaseTag::AI => [Some(1), Some(2), Some(0)],
                        CaseTag::AII => [Some(1), Some(2), Some(1)],
                        CaseTag::BI => [None, Some(2), Some(1)],
                        CaseTag::BII => [None, Some(0), Some(1)],
                        CaseTag::BIII => [None, Some(0), Some(0)],
                        CaseTag::C => [None, None, Some(0)],
                        CaseTag::D => [None, None, None],
                    };
                    for r in 0..3 {
                        assert_eq!(
                            partners[perm[r]],
                            reference[r].map(|s| perm[s]),
                            "{partners:?}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn decompose_examples() {
        let p = poly(1, 3, 2, 7);
        let triple = [[4, 1, 0], [2, 1, 1], [1, 2, 0]];
        assert_eq!(
            decompose(&p, &triple, &[4, 1, 0]).unwrap().alphas,
            [1, 0, 0]
        );
        assert_eq!(
            decompose(&p, &triple, &[7, 0, 0]).unwrap().alphas,
            [2, 0, -1]
        );

        let p = poly(1, 1, 1, 3);
        let triple = [[0, 0, 3], [0, 1, 2], [1, 0, 2]];
        assert_eq!(
            decompose(&p, &triple, &[2, 2, 2]).unwrap().alphas,
            [-2, 2, 2]
        );
    }

    #[test]
    fn decompose_rejects_bad_inputs() {
        let p = poly(1, 3, 2, 7);
        let triple = [[4, 1, 0], [2, 1, 1], [1, 2, 0]];
        assert!(matches!(
            decompose(&p, &triple, &[1, 1, 0]),
            Err(Error::Precondition(_))
        ));
        let singular = [[7, 0, 0], [7, 0, 0], [1, 2, 0]];
        assert!(matches!(
            decompose(&p, &singular, &[7, 0, 0]),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn bound_status_cases() {
        assert_eq!(bound_status(10, 1), BoundStatus::ExceptionalBound);
        assert_eq!(bound_status(9, 1), BoundStatus::Within);
        assert_eq!(bound_status(11, 1), BoundStatus::Exceeded);
    }
}
