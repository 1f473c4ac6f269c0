//! Polygon classes of g-good quadruples, abstract polygon classification, and
//! the basis change between quadruples in one class.

use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{fmt_rational, inverse3, parse_rational, Rational};
use crate::error::{Error, Result};
use crate::polygon2d::{
    all_equivalences, canonical_form, convex_hull, cross, hull_stats, project_points,
    LatticePolygon, Point2, UnimodularAffineMap,
};
use crate::quadruples::{enumerate_g_good, Quadruple};
use crate::wpolytope::{build, find_unimodular_triple, weighted_degree, Point3, WeightedPolytope};

pub const ATLAS_VERSION: u32 = 1;

/// Largest grid side accepted by the box method; the grid must fit a `u128` mask.
pub const MAX_BOX: i64 = 10;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AtlasClass {
    /// Canonical vertex cycle, starting at the origin.
    pub canonical: Vec<Point2>,
    pub n: usize,
    pub members: Vec<Quadruple>,
    /// Unimodular triple used to project each member, aligned with `members`.
    pub triples: Vec<[Point3; 3]>,
}

/// Quadruples grouped by the class of their projected polygon. Class counts
/// are upper bounds on the number of loci: equal classes give equal loci, not
/// conversely.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassAtlas {
    pub version: u32,
    pub g: u64,
    pub d_max: i64,
    pub classes: Vec<AtlasClass>,
}

impl ClassAtlas {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Index of the class containing `q`.
    pub fn class_of(&self, q: &Quadruple) -> Option<usize> {
        self.classes.iter().position(|c| c.members.contains(q))
    }

    /// Stable JSON text, one class per line, with a trailing newline.
    pub fn to_json(&self) -> String {
        let classes: Vec<String> = self
            .classes
            .iter()
            .map(|c| {
                format!(
                    "    {}",
                    serde_json::to_string(c).expect("class serializes")
                )
            })
            .collect();
        let body = if classes.is_empty() {
            String::new()
        } else {
            format!("\n{}\n  ", classes.join(",\n"))
        };
        format!(
            "{{\n  \"version\": {},\n  \"g\": {},\n  \"d_max\": {},\n  \"classes\": [{body}]\n}}\n",
            self.version, self.g, self.d_max
        )
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let atlas: ClassAtlas = serde_json::from_str(text)
            .map_err(|e| Error::InvalidInput(format!("atlas JSON: {e}")))?;
        if atlas.version != ATLAS_VERSION {
            return Err(Error::InvalidInput(format!(
                "unsupported atlas version {}",
                atlas.version
            )));
        }
        Ok(atlas)
    }
}

/// A quadruple's polytope with the triple used to flatten it.
#[derive(Debug, Clone)]
pub struct Projection {
    pub polytope: WeightedPolytope,
    pub triple: [Point3; 3],
    pub polygon: LatticePolygon,
    pub images: Vec<(Point3, Point2)>,
}

pub fn projection_with(
    q: &Quadruple,
    pick: impl Fn(&WeightedPolytope) -> Result<[Point3; 3]>,
) -> Result<Projection> {
    let polytope = build(q)?;
    let triple = pick(&polytope)?;
    let images = project_points(&polytope, &triple)?;
    let pts: Vec<Point2> = images.iter().map(|(_, x)| *x).collect();
    let polygon = convex_hull(&pts)?;
    if polygon.n() != polytope.n() || polygon.interior() != polytope.interior.len() {
        return Err(Error::invariant(format!(
            "{q}: projection changes the lattice-point counts"
        )));
    }
    Ok(Projection {
        polytope,
        triple,
        polygon,
        images,
    })
}

/// Projection through the first unimodular triple.
pub fn projection(q: &Quadruple) -> Result<Projection> {
    projection_with(q, find_unimodular_triple)
}

pub fn group_by_class(g: u64, d_max: i64) -> Result<ClassAtlas> {
    if g < 1 {
        return Err(Error::precondition("genus must be at least 1"));
    }
    let quads = enumerate_g_good(g, d_max)?;
    let keyed: Vec<(usize, Vec<Point2>, Quadruple, [Point3; 3])> = quads
        .par_iter()
        .map(|q| {
            let p = projection(q)?;
            let canon = canonical_form(&p.polygon);
            Ok((canon.n(), canon.vertices().to_vec(), *q, p.triple))
        })
        .collect::<Result<_>>()?;
    let mut groups: BTreeMap<(usize, Vec<Point2>), AtlasClass> = BTreeMap::new();
    for (n, canonical, q, triple) in keyed {
        let entry = groups
            .entry((n, canonical.clone()))
            .or_insert_with(|| AtlasClass {
                canonical,
                n,
                members: Vec::new(),
                triples: Vec::new(),
            });
        entry.members.push(q);
        entry.triples.push(triple);
    }
    Ok(ClassAtlas {
        version: ATLAS_VERSION,
        g,
        d_max,
        classes: groups.into_values().collect(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Grow classes one lattice point at a time up to `n_max` points.
    Inductive { n_max: Option<usize> },
    /// Convex lattice subsets of the grid `[0, bound]^2`.
    Box { bound: Option<i64> },
}

/// `3g + 7`, the largest lattice-point count of a polygon with `g >= 1`
/// interior points.
pub fn default_n_max(g: u64) -> Option<usize> {
    (g >= 1).then(|| 3 * g as usize + 7)
}

/// `2g + 2`, the longest edge among polygons with `g` interior points, e.g.
/// the triangle `(0,0), (2g+2,0), (0,2)`.
pub fn default_box_bound(g: u64) -> i64 {
    2 * g as i64 + 2
}

/// Canonical forms of all polygon classes with exactly `g` interior points,
/// sorted by `(n, vertex cycle)`.
pub fn enumerate_classes(g: u64, method: Method) -> Result<Vec<LatticePolygon>> {
    let mut out = match method {
        Method::Inductive { n_max } => {
            let n_max = n_max.or_else(|| default_n_max(g)).ok_or_else(|| {
                Error::precondition("genus 0 has infinitely many classes; give n_max")
            })?;
            inductive_classes(g, n_max)?
        }
        Method::Box { bound } => box_classes(g, bound.unwrap_or_else(|| default_box_bound(g)))?,
    };
    out.sort_by(|a, b| (a.n(), a.vertices()).cmp(&(b.n(), b.vertices())));
    Ok(out)
}

/// False when `q` lies at lattice distance two or more beyond some edge; such
/// a point always drags a second new lattice point into the hull.
fn near_every_edge(vertices: &[Point2], q: Point2) -> bool {
    let n = vertices.len();
    (0..n).all(|i| {
        let (s, e) = (vertices[i], vertices[(i + 1) % n]);
        let g = crate::arith::gcd(e[0] - s[0], e[1] - s[1]);
        let prim = [s[0] + (e[0] - s[0]) / g, s[1] + (e[1] - s[1]) / g];
        cross(s, prim, q) >= -1
    })
}

/// Extensions of `p` by one lattice point `q` whose hull gains only `q`.
fn extensions(p: &LatticePolygon, g: u64) -> Vec<LatticePolygon> {
    let v = p.vertices();
    let (x0, x1) = (
        v.iter().map(|a| a[0]).min().unwrap() - 2,
        v.iter().map(|a| a[0]).max().unwrap() + 2,
    );
    let (y0, y1) = (
        v.iter().map(|a| a[1]).min().unwrap() - 2,
        v.iter().map(|a| a[1]).max().unwrap() + 2,
    );
    let mut out = Vec::new();
    let mut pts = v.to_vec();
    for x in x0..=x1 {
        for y in y0..=y1 {
            let q = [x, y];
            if p.contains(&q) || !near_every_edge(v, q) {
                continue;
            }
            pts.push(q);
            if let Some(st) = hull_stats(&pts) {
                if st.n() == p.n() + 1 && st.interior as u64 <= g {
                    let grown = convex_hull(&st.vertices).expect("nondegenerate hull");
                    out.push(canonical_form(&grown));
                }
            }
            pts.pop();
        }
    }
    out
}

fn inductive_classes(g: u64, n_max: usize) -> Result<Vec<LatticePolygon>> {
    let unit = convex_hull(&[[0, 0], [1, 0], [0, 1]])?;
    let mut level = vec![canonical_form(&unit)];
    let mut out = Vec::new();
    let mut n = 3;
    while !level.is_empty() && n <= n_max {
        out.extend(level.iter().filter(|p| p.interior() as u64 == g).cloned());
        if n == n_max {
            break;
        }
        let grown: Vec<Vec<LatticePolygon>> = level.par_iter().map(|p| extensions(p, g)).collect();
        let mut next: BTreeMap<Vec<Point2>, LatticePolygon> = BTreeMap::new();
        for p in grown.into_iter().flatten() {
            next.entry(p.vertices().to_vec()).or_insert(p);
        }
        level = next.into_values().collect();
        n += 1;
    }
    Ok(out)
}

struct Grid {
    side: i64,
    points: Vec<Point2>,
}

impl Grid {
    fn new(bound: i64) -> Self {
        let side = bound + 1;
        let points = (0..side)
            .flat_map(|x| (0..side).map(move |y| [x, y]))
            .collect();
        Grid { side, points }
    }

    fn bit(&self, p: Point2) -> u128 {
        1u128 << (p[0] * self.side + p[1])
    }

    fn members(&self, mask: u128) -> Vec<Point2> {
        self.points
            .iter()
            .copied()
            .filter(|&p| mask & self.bit(p) != 0)
            .collect()
    }
}

/// Grows every convex lattice subset of the grid from its empty triangles,
/// adding one point at a time, with subsets tracked as bitmasks. Any convex
/// lattice set shrinks to an empty triangle by deleting vertices, and the
/// interior count never grows along the way, so pruning at `g` is safe.
fn box_classes(g: u64, bound: i64) -> Result<Vec<LatticePolygon>> {
    if !(1..=MAX_BOX).contains(&bound) {
        return Err(Error::precondition(format!(
            "box bound must be in 1..={MAX_BOX}, got {bound}"
        )));
    }
    let grid = Grid::new(bound);
    let pts = &grid.points;
    let mut frontier: Vec<u128> = (0..pts.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            let grid = &grid;
            (i + 1..pts.len()).flat_map(move |j| {
                (j + 1..pts.len()).filter_map(move |k| {
                    let (a, b, c) = (grid.points[i], grid.points[j], grid.points[k]);
                    (cross(a, b, c).abs() == 1).then(|| grid.bit(a) | grid.bit(b) | grid.bit(c))
                })
            })
        })
        .collect();
    frontier.sort_unstable();
    frontier.dedup();
    let mut found: BTreeMap<Vec<Point2>, LatticePolygon> = BTreeMap::new();
    while !frontier.is_empty() {
        let step: Vec<(Option<LatticePolygon>, Vec<u128>)> = frontier
            .par_iter()
            .map(|&mask| {
                let mut members = grid.members(mask);
                let st = hull_stats(&members).expect("grown sets are two-dimensional");
                let class = (st.interior as u64 == g).then(|| {
                    canonical_form(&convex_hull(&st.vertices).expect("nondegenerate hull"))
                });
                let mut children = Vec::new();
                for &q in pts {
                    if mask & grid.bit(q) != 0 || !near_every_edge(&st.vertices, q) {
                        continue;
                    }
                    members.push(q);
                    let grown = hull_stats(&members).expect("superset of a polygon");
                    members.pop();
                    if grown.n() == members.len() + 1 && grown.interior as u64 <= g {
                        children.push(mask | grid.bit(q));
                    }
                }
                (class, children)
            })
            .collect();
        let mut next = Vec::new();
        for (class, children) in step {
            if let Some(c) = class {
                found.entry(c.vertices().to_vec()).or_insert(c);
            }
            next.extend(children);
        }
        next.sort_unstable();
        next.dedup();
        frontier = next;
    }
    Ok(found.into_values().collect())
}

/// `M(P) T = M(P')`, with the row correspondence induced by a polygon map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisChange {
    pub source: Quadruple,
    pub target: Quadruple,
    pub t: [[Rational; 3]; 3],
    /// `(row of M(P), row of M(P'))`, in the row order of `M(P)`.
    pub row_map: Vec<(Point3, Point3)>,
}

#[derive(Serialize, Deserialize)]
struct BasisChangeJson {
    source: Quadruple,
    target: Quadruple,
    t: [[String; 3]; 3],
    row_map: Vec<[Point3; 2]>,
}

impl Serialize for BasisChange {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        BasisChangeJson {
            source: self.source,
            target: self.target,
            t: self.t.map(|row| row.map(|x| fmt_rational(&x))),
            row_map: self.row_map.iter().map(|&(a, b)| [a, b]).collect(),
        }
        .serialize(s)
    }
}

impl BasisChange {
    /// Applies `T` to a row vector.
    pub fn apply(&self, v: &Point3) -> [Rational; 3] {
        let mut out = [Rational::zero(); 3];
        for (c, o) in out.iter_mut().enumerate() {
            *o = (0..3)
                .map(|i| Rational::from(i128::from(v[i])) * self.t[i][c])
                .sum();
        }
        out
    }

    pub fn denominator_lcm(&self) -> i128 {
        self.t.iter().flatten().fold(1, |acc, x| acc.lcm(x.denom()))
    }

    pub fn is_identity(&self) -> bool {
        (0..3).all(|i| (0..3).all(|j| self.t[i][j] == Rational::from(i128::from(i == j))))
    }

    /// Ordering key used to pick among witnesses: small denominators, few
    /// off-diagonal entries, small entries, then lexicographic.
    fn score(&self) -> (i128, usize, Rational, [[Rational; 3]; 3]) {
        let off = (0..3)
            .flat_map(|i| (0..3).map(move |j| (i, j)))
            .filter(|&(i, j)| i != j && !self.t[i][j].is_zero());
        let size: Rational = self.t.iter().flatten().map(|x| x.abs()).sum();
        (self.denominator_lcm(), off.count(), size, self.t)
    }
}

/// Basis change between two projections along a polygon map `witness`
/// sending the first projected polygon onto the second.
pub fn basis_change_between(
    from: &Projection,
    to: &Projection,
    witness: &UnimodularAffineMap,
) -> Result<BasisChange> {
    let (q, q2) = (from.polytope.quadruple, to.polytope.quadruple);
    let by_alpha: BTreeMap<Point2, Point3> = to.images.iter().map(|&(row, a)| (a, row)).collect();
    let row_map: Vec<(Point3, Point3)> = from
        .images
        .iter()
        .map(|&(row, a)| {
            by_alpha
                .get(&witness.apply(a))
                .map(|&r| (row, r))
                .ok_or_else(|| {
                    Error::precondition(format!(
                        "witness does not carry the polygon of {q} onto that of {q2}"
                    ))
                })
        })
        .collect::<Result<_>>()?;
    if row_map.iter().map(|x| x.1).collect::<BTreeSet<_>>().len() != to.images.len() {
        return Err(Error::precondition(format!(
            "witness does not carry the polygon of {q} onto that of {q2}"
        )));
    }
    let image_of = |v: &Point3| row_map.iter().find(|(r, _)| r == v).unwrap().1;
    let ainv = inverse3(from.triple)?
        .ok_or_else(|| Error::invariant(format!("{q}: projection triple is singular")))?;
    let b = from.triple.map(|v| image_of(&v));
    let mut t = [[Rational::zero(); 3]; 3];
    for (i, row) in t.iter_mut().enumerate() {
        for (c, x) in row.iter_mut().enumerate() {
            *x = (0..3)
                .map(|k| ainv[i][k] * Rational::from(i128::from(b[k][c])))
                .sum();
        }
    }
    let bc = BasisChange {
        source: q,
        target: q2,
        t,
        row_map,
    };
    for (row, image) in &bc.row_map {
        let got = bc.apply(row);
        if got != image.map(|x| Rational::from(i128::from(x))) {
            return Err(Error::invariant(format!(
                "{q} -> {q2}: row {row:?} maps to {got:?}, expected {image:?}"
            )));
        }
    }
    let d = i128::from(q.d);
    if bc.t.iter().flatten().any(|x| d % x.denom() != 0) {
        return Err(Error::invariant(format!(
            "{q} -> {q2}: a denominator of T does not divide {d}"
        )));
    }
    Ok(bc)
}

/// Basis change using the first unimodular triple of each quadruple.
pub fn basis_change(
    q: &Quadruple,
    q2: &Quadruple,
    witness: &UnimodularAffineMap,
) -> Result<BasisChange> {
    basis_change_between(&projection(q)?, &projection(q2)?, witness)
}

/// The best basis change over all polygon maps between the two projections,
/// or `None` when the polygons are not equivalent.
pub fn find_basis_change(q: &Quadruple, q2: &Quadruple) -> Result<Option<BasisChange>> {
    let (from, to) = (projection(q)?, projection(q2)?);
    let mut best: Option<BasisChange> = None;
    for w in all_equivalences(&from.polygon, &to.polygon)? {
        let bc = basis_change_between(&from, &to, &w)?;
        if best.as_ref().is_none_or(|b| bc.score() < b.score()) {
            best = Some(bc);
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveTerm {
    pub coefficient: Rational,
    pub exponents: Point3,
}

/// A weighted-homogeneous polynomial of degree `d`, by its terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedCurve {
    quadruple: Quadruple,
    terms: Vec<CurveTerm>,
}

impl WeightedCurve {
    pub fn new(quadruple: Quadruple, terms: Vec<CurveTerm>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidInput("curve has no terms".into()));
        }
        let mut seen = BTreeSet::new();
        for t in &terms {
            if t.exponents.iter().any(|&e| e < 0)
                || weighted_degree(&quadruple, &t.exponents) != quadruple.d
            {
                return Err(Error::InvalidInput(format!(
                    "monomial {:?} does not have weighted degree {} for {quadruple}",
                    t.exponents, quadruple.d
                )));
            }
            if t.coefficient.is_zero() {
                return Err(Error::InvalidInput(format!(
                    "zero coefficient on {:?}",
                    t.exponents
                )));
            }
            if !seen.insert(t.exponents) {
                return Err(Error::InvalidInput(format!(
                    "repeated monomial {:?}",
                    t.exponents
                )));
            }
        }
        Ok(WeightedCurve { quadruple, terms })
    }

    pub fn quadruple(&self) -> Quadruple {
        self.quadruple
    }

    pub fn terms(&self) -> &[CurveTerm] {
        &self.terms
    }

    pub fn support(&self) -> BTreeSet<Point3> {
        self.terms.iter().map(|t| t.exponents).collect()
    }

    /// Every monomial of degree `d` with coefficient one.
    pub fn generic(q: &Quadruple) -> Result<Self> {
        let p = build(q)?;
        let terms = p
            .points
            .iter()
            .map(|&e| CurveTerm {
                coefficient: Rational::from(1),
                exponents: e,
            })
            .collect();
        WeightedCurve::new(*q, terms)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum CoefficientText {
    Int(i64),
    Text(String),
}

#[derive(Serialize, Deserialize)]
struct CurveTermJson {
    coefficient: CoefficientText,
    exponents: Point3,
}

#[derive(Serialize, Deserialize)]
struct WeightedCurveJson {
    quadruple: Quadruple,
    terms: Vec<CurveTermJson>,
}

impl Serialize for WeightedCurve {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        WeightedCurveJson {
            quadruple: self.quadruple,
            terms: self
                .terms
                .iter()
                .map(|t| CurveTermJson {
                    coefficient: CoefficientText::Text(fmt_rational(&t.coefficient)),
                    exponents: t.exponents,
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for WeightedCurve {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = WeightedCurveJson::deserialize(de)?;
        let terms = raw
            .terms
            .into_iter()
            .map(|t| {
                let coefficient = match t.coefficient {
                    CoefficientText::Int(i) => Rational::from(i128::from(i)),
                    CoefficientText::Text(s) => parse_rational(&s).map_err(D::Error::custom)?,
                };
                Ok(CurveTerm {
                    coefficient,
                    exponents: t.exponents,
                })
            })
            .collect::<std::result::Result<Vec<_>, D::Error>>()?;
        WeightedCurve::new(raw.quadruple, terms).map_err(D::Error::custom)
    }
}

/// Monomial conditions read off a support: per axis, a monomial
/// `x_i^k x_j` with `k >= 1`, and a monomial free of `x_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SupportConditions {
    pub condition_i: [bool; 3],
    pub condition_ii: [bool; 3],
}

impl SupportConditions {
    pub fn of(support: &BTreeSet<Point3>) -> Self {
        let condition_i = [0, 1, 2].map(|i| {
            support
                .iter()
                .any(|e| e[i] >= 1 && e.iter().sum::<i64>() - e[i] <= 1)
        });
        let condition_ii = [0, 1, 2].map(|i| support.iter().any(|e| e[i] == 0));
        SupportConditions {
            condition_i,
            condition_ii,
        }
    }

    pub fn holds(&self) -> bool {
        self.condition_i
            .iter()
            .chain(&self.condition_ii)
            .all(|&b| b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SupportReport {
    pub source: SupportConditions,
    pub image: SupportConditions,
    /// The source support satisfies the conditions and the image does not.
    pub regression: bool,
}

/// Pushes each exponent through `T`. Coefficients are carried unchanged.
pub fn map_curve(
    curve: &WeightedCurve,
    bc: &BasisChange,
    q2: &Quadruple,
) -> Result<(WeightedCurve, SupportReport)> {
    if curve.quadruple != bc.source || *q2 != bc.target {
        return Err(Error::precondition(format!(
            "basis change goes {} -> {}, curve is on {} and target is {q2}",
            bc.source, bc.target, curve.quadruple
        )));
    }
    let mut terms = Vec::with_capacity(curve.terms.len());
    for t in &curve.terms {
        let img = bc.apply(&t.exponents);
        if img.iter().any(|x| !x.is_integer()) {
            return Err(Error::invariant(format!(
                "image of {:?} is not integral: {img:?}",
                t.exponents
            )));
        }
        let e = img.map(|x| *x.numer() as i64);
        if e.iter().any(|&x| x < 0) || weighted_degree(q2, &e) != q2.d {
            return Err(Error::invariant(format!(
                "image {e:?} of {:?} does not have degree {}",
                t.exponents, q2.d
            )));
        }
        terms.push(CurveTerm {
            coefficient: t.coefficient,
            exponents: e,
        });
    }
    let image = WeightedCurve::new(*q2, terms)?;
    let source = SupportConditions::of(&curve.support());
    let image_cond = SupportConditions::of(&image.support());
    let report = SupportReport {
        source,
        image: image_cond,
        regression: source.holds() && !image_cond.holds(),
    };
    Ok((image, report))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StabilizationStep {
    pub d_max: i64,
    pub classes: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StabilizationReport {
    pub g: u64,
    pub steps: Vec<StabilizationStep>,
    /// The class count at the last step exceeds the one before it.
    pub grew_at_last_step: bool,
}

/// Class counts at each degree bound, from one atlas at the largest bound.
pub fn stabilization_report(g: u64, d_steps: &[i64]) -> Result<StabilizationReport> {
    if d_steps.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::precondition(
            "degree steps must be strictly increasing",
        ));
    }
    let Some(&last) = d_steps.last() else {
        return Ok(StabilizationReport {
            g,
            steps: Vec::new(),
            grew_at_last_step: false,
        });
    };
    let atlas = group_by_class(g, last)?;
    Ok(stabilization_from_atlas(&atlas, d_steps))
}

pub fn stabilization_from_atlas(atlas: &ClassAtlas, d_steps: &[i64]) -> StabilizationReport {
    let first_d: Vec<i64> = atlas
        .classes
        .iter()
        .map(|c| c.members.iter().map(|q| q.d).min().unwrap_or(i64::MAX))
        .collect();
    let steps: Vec<StabilizationStep> = d_steps
        .iter()
        .map(|&d_max| StabilizationStep {
            d_max,
            classes: first_d.iter().filter(|&&d| d <= d_max).count(),
        })
        .collect();
    let grew_at_last_step =
        steps.len() >= 2 && steps[steps.len() - 1].classes > steps[steps.len() - 2].classes;
    StabilizationReport {
        g: atlas.g,
        steps,
        grew_at_last_step,
    }
}

/// Atlas classes missing from an abstract classification.
pub fn missing_classes(atlas: &ClassAtlas, classes: &[LatticePolygon]) -> Vec<Vec<Point2>> {
    let known: BTreeSet<&[Point2]> = classes.iter().map(|c| c.vertices()).collect();
    atlas
        .classes
        .iter()
        .filter(|c| !known.contains(c.canonical.as_slice()))
        .map(|c| c.canonical.clone())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polygon2d::{counts, equivalent};
    use crate::quadruples::family_quadruple;
    use crate::wpolytope::unimodular_triples;

    fn q(w0: i64, w1: i64, w2: i64, d: i64) -> Quadruple {
        Quadruple::new(w0, w1, w2, d).unwrap()
    }

    fn canon(pts: &[Point2]) -> Vec<Point2> {
        canonical_form(&convex_hull(pts).unwrap())
            .vertices()
            .to_vec()
    }

    /// Hulls of every subset of the grid, deduplicated by canonical form.
    fn brute_box(g: u64, bound: i64) -> BTreeSet<Vec<Point2>> {
        let grid = Grid::new(bound);
        let m = grid.points.len();
        assert!(m <= 20);
        (0u32..1 << m)
            .into_par_iter()
            .filter_map(|mask| {
                let pts: Vec<Point2> = (0..m)
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| grid.points[i])
                    .collect();
                let p = convex_hull(&pts).ok()?;
                (p.interior() as u64 == g).then(|| canonical_form(&p).vertices().to_vec())
            })
            .collect::<Vec<_>>()
            .into_iter()
            .collect()
    }

    fn keys(v: &[LatticePolygon]) -> BTreeSet<Vec<Point2>> {
        v.iter().map(|p| p.vertices().to_vec()).collect()
    }

    #[test]
    fn atlas_small_bounds() {
        let a = group_by_class(1, 3).unwrap();
        assert_eq!(a.len(), 1);
        assert_eq!(a.classes[0].canonical, canon(&[[0, 0], [3, 0], [0, 3]]));
        assert_eq!(a.classes[0].members, vec![q(1, 1, 1, 3)]);

        let a = group_by_class(1, 7).unwrap();
        let ns: Vec<usize> = a.classes.iter().map(|c| c.n).collect();
        assert_eq!(ns, vec![7, 8, 9, 10]);
        let members: Vec<Quadruple> = a.classes.iter().map(|c| c.members[0]).collect();
        assert_eq!(
            members,
            vec![q(1, 2, 3, 6), q(1, 2, 3, 7), q(1, 1, 2, 4), q(1, 1, 1, 3)]
        );
        assert!(group_by_class(0, 10).is_err());
    }

    #[test]
    fn family_members_split() {
        let a = group_by_class(1, 10).unwrap();
        let (m1, m2) = (
            family_quadruple(1, 1).unwrap(),
            family_quadruple(1, 2).unwrap(),
        );
        assert_ne!(a.class_of(&m1), a.class_of(&m2));
    }

    #[test]
    fn class_key_ignores_triple_choice() {
        for quad in enumerate_g_good(2, 20).unwrap() {
            let first = canonical_form(&projection(&quad).unwrap().polygon);
            let last =
                projection_with(&quad, |p| Ok(*unimodular_triples(p)?.last().unwrap())).unwrap();
            assert_eq!(canonical_form(&last.polygon), first, "{quad}");
        }
    }

    #[test]
    fn atlas_json_round_trip() {
        let a = group_by_class(1, 7).unwrap();
        let text = a.to_json();
        assert_eq!(ClassAtlas::from_json(&text).unwrap(), a);
        assert!(
            text.starts_with("{\n  \"version\": 1,\n  \"g\": 1,\n  \"d_max\": 7,\n  \"classes\"")
        );
        assert_eq!(group_by_class(1, 7).unwrap().to_json(), text);
    }

    #[test]
    fn box_growth_matches_subset_oracle() {
        for (g, bound) in [(0, 2), (1, 2), (1, 3), (2, 3)] {
            let grown = keys(&enumerate_classes(g, Method::Box { bound: Some(bound) }).unwrap());
            assert_eq!(grown, brute_box(g, bound), "g={g} B={bound}");
        }
        assert_eq!(brute_box(1, 3).len(), 15);
    }

    #[test]
    fn genus_one_classes() {
        let b = enumerate_classes(1, Method::Box { bound: None }).unwrap();
        let i = enumerate_classes(1, Method::Inductive { n_max: None }).unwrap();
        assert_eq!(b.len(), 16);
        assert_eq!(b, i);
        // the long triangle needs the larger grid
        let long = canon(&[[0, 0], [4, 0], [0, 2]]);
        assert!(keys(&b).contains(&long));
        assert!(!brute_box(1, 3).contains(&long));
        for p in &b {
            assert_eq!(counts(p).unwrap().0, 1);
            assert!(p.n() <= 10);
        }
    }

    #[test]
    fn genus_zero_slice() {
        let cls = enumerate_classes(0, Method::Inductive { n_max: Some(4) }).unwrap();
        let four: BTreeSet<Vec<Point2>> = cls
            .iter()
            .filter(|p| p.n() == 4)
            .map(|p| p.vertices().to_vec())
            .collect();
        let expected: BTreeSet<Vec<Point2>> = [
            canon(&[[0, 0], [2, 0], [0, 1]]),
            canon(&[[0, 0], [1, 0], [1, 1], [0, 1]]),
        ]
        .into_iter()
        .collect();
        assert_eq!(four, expected);
        assert!(enumerate_classes(0, Method::Inductive { n_max: None }).is_err());
        assert!(enumerate_classes(1, Method::Box { bound: Some(11) }).is_err());
    }

    #[test]
    fn atlas_within_classification() {
        let atlas = group_by_class(1, 30).unwrap();
        let cls = enumerate_classes(1, Method::Inductive { n_max: None }).unwrap();
        assert!(missing_classes(&atlas, &cls).is_empty());
    }

    #[test]
    fn identity_basis_change() {
        let a = q(1, 3, 2, 7);
        let bc = basis_change(&a, &a, &UnimodularAffineMap::IDENTITY).unwrap();
        assert!(bc.is_identity());
        assert!(find_basis_change(&a, &a).unwrap().unwrap().is_identity());
        let curve = WeightedCurve::generic(&a).unwrap();
        let (img, report) = map_curve(&curve, &bc, &a).unwrap();
        assert_eq!(img, curve);
        assert!(!report.regression);
    }

    #[test]
    fn swapped_weights_give_permutation() {
        let (a, b) = (q(1, 3, 2, 7), q(1, 2, 3, 7));
        let bc = find_basis_change(&a, &b).unwrap().unwrap();
        let one = Rational::from(1);
        let zero = Rational::zero();
        assert_eq!(
            bc.t,
            [[one, zero, zero], [zero, zero, one], [zero, one, zero]]
        );
        let curve = WeightedCurve::generic(&a).unwrap();
        let (img, _) = map_curve(&curve, &bc, &b).unwrap();
        for (s, t) in curve.terms().iter().zip(img.terms()) {
            assert_eq!(
                t.exponents,
                [s.exponents[0], s.exponents[2], s.exponents[1]]
            );
        }
    }

    #[test]
    fn inequivalent_pair() {
        assert_eq!(
            find_basis_change(&q(1, 1, 1, 3), &q(1, 2, 3, 7)).unwrap(),
            None
        );
        let err = basis_change(
            &q(1, 1, 1, 3),
            &q(1, 2, 3, 7),
            &UnimodularAffineMap::IDENTITY,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
    }

    #[test]
    fn same_class_pairs_genus_two() {
        let atlas = group_by_class(2, 30).unwrap();
        for c in &atlas.classes {
            for pair in c.members.windows(2) {
                let bc = find_basis_change(&pair[0], &pair[1]).unwrap().unwrap();
                let d = i128::from(pair[0].d);
                assert_eq!(d % bc.denominator_lcm(), 0);
                let from = projection(&pair[0]).unwrap().polygon;
                let to = projection(&pair[1]).unwrap().polygon;
                assert!(equivalent(&from, &to).unwrap().is_some());
            }
        }
    }

    #[test]
    fn curve_validation() {
        let a = q(1, 3, 2, 7);
        let bad = vec![CurveTerm {
            coefficient: Rational::from(1),
            exponents: [1, 1, 1],
        }];
        assert!(WeightedCurve::new(a, bad).is_err());
        assert!(WeightedCurve::new(a, Vec::new()).is_err());
        let json = r#"{"quadruple":[1,3,2,7],"terms":[{"coefficient":"3/2","exponents":[7,0,0]},{"coefficient":-2,"exponents":[1,2,0]}]}"#;
        let c: WeightedCurve = serde_json::from_str(json).unwrap();
        assert_eq!(c.terms()[0].coefficient, Rational::new(3, 2));
        let back = serde_json::to_string(&c).unwrap();
        assert!(back.contains(r#""coefficient":"-2""#));
    }

    #[test]
    fn stabilization() {
        let r = stabilization_report(1, &[3, 7]).unwrap();
        assert_eq!(
            r.steps.iter().map(|s| s.classes).collect::<Vec<_>>(),
            vec![1, 4]
        );
        assert!(r.grew_at_last_step);
        assert!(stabilization_report(1, &[]).unwrap().steps.is_empty());
        assert!(stabilization_report(1, &[7, 3]).is_err());
    }
}
