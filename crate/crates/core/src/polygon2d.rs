//! Convex lattice polygons in the plane and their affine unimodular classes.
//!
//! Everything here is exact integer geometry. Orientation tests use `i128`
//! cross products; lattice points are enumerated row by row with exact
//! floor/ceil bounds and cross-checked against Pick's formula.

use std::collections::BTreeSet;

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::{div_floor, ext_gcd, gcd};
use crate::error::{Error, Result};
use crate::wpolytope::{decompose, Point3, WeightedPolytope};

pub type Point2 = [i64; 2];

/// Twice the signed area of the triangle `o, a, b`; positive when CCW.
pub fn cross(o: Point2, a: Point2, b: Point2) -> i128 {
    let (ax, ay) = (i128::from(a[0] - o[0]), i128::from(a[1] - o[1]));
    let (bx, by) = (i128::from(b[0] - o[0]), i128::from(b[1] - o[1]));
    ax * by - ay * bx
}

/// Monotone-chain hull. Returns the strictly convex CCW vertex cycle starting
/// at the lexicographically least point; collinear boundary points are dropped.
pub fn hull_vertices(points: &[Point2]) -> Vec<Point2> {
    let mut pts: Vec<Point2> = points.to_vec();
    pts.sort_unstable();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<Point2> = Vec::with_capacity(pts.len());
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Point2> = Vec::with_capacity(pts.len());
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Twice the area of a CCW vertex cycle.
pub fn twice_area(vertices: &[Point2]) -> i128 {
    let n = vertices.len();
    (0..n)
        .map(|i| {
            let (a, b) = (vertices[i], vertices[(i + 1) % n]);
            i128::from(a[0]) * i128::from(b[1]) - i128::from(b[0]) * i128::from(a[1])
        })
        .sum()
}

/// Lattice points on the boundary of a vertex cycle, via edge gcds.
pub fn boundary_points(vertices: &[Point2]) -> usize {
    let n = vertices.len();
    (0..n)
        .map(|i| {
            let (a, b) = (vertices[i], vertices[(i + 1) % n]);
            gcd(b[0] - a[0], b[1] - a[1]) as usize
        })
        .sum()
}

/// Hull plus Pick counts, without enumerating lattice points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HullStats {
    pub vertices: Vec<Point2>,
    pub twice_area: i128,
    pub boundary: usize,
    pub interior: usize,
}

impl HullStats {
    pub fn n(&self) -> usize {
        self.boundary + self.interior
    }
}

/// `None` for fewer than three non-collinear points.
pub fn hull_stats(points: &[Point2]) -> Option<HullStats> {
    let vertices = hull_vertices(points);
    if vertices.len() < 3 {
        return None;
    }
    let area2 = twice_area(&vertices);
    let boundary = boundary_points(&vertices);
    let interior = ((area2 - boundary as i128 + 2) / 2) as usize;
    Some(HullStats {
        vertices,
        twice_area: area2,
        boundary,
        interior,
    })
}

fn floor_div(a: i128, b: i128) -> i128 {
    Integer::div_floor(&a, &b)
}

fn ceil_div(a: i128, b: i128) -> i128 {
    -Integer::div_floor(&-a, &b)
}

/// Lattice points of a convex CCW cycle, row by row. With `strict`, only
/// points off the boundary.
fn scan_lattice_points(vertices: &[Point2], strict: bool) -> Vec<Point2> {
    let n = vertices.len();
    let ymin = vertices.iter().map(|v| v[1]).min().unwrap();
    let ymax = vertices.iter().map(|v| v[1]).max().unwrap();
    let xmin = i128::from(vertices.iter().map(|v| v[0]).min().unwrap());
    let xmax = i128::from(vertices.iter().map(|v| v[0]).max().unwrap());
    let mut out = Vec::new();
    for y in ymin..=ymax {
        let (mut lo, mut hi) = (xmin, xmax);
        let yy = i128::from(y);
        for i in 0..n {
            let (s, e) = (vertices[i], vertices[(i + 1) % n]);
            let (ex, ey) = (i128::from(e[0] - s[0]), i128::from(e[1] - s[1]));
            // left of edge: ey*x <= ex*(y - sy) + ey*sx  (strict: <)
            let r = ex * (yy - i128::from(s[1])) + ey * i128::from(s[0]);
            match ey.signum() {
                1 => {
                    hi = hi.min(if strict {
                        ceil_div(r, ey) - 1
                    } else {
                        floor_div(r, ey)
                    })
                }
                -1 => {
                    lo = lo.max(if strict {
                        floor_div(r, ey) + 1
                    } else {
                        ceil_div(r, ey)
                    })
                }
                _ => {
                    let side = ex * (yy - i128::from(s[1]));
                    if side < 0 || (strict && side == 0) {
                        hi = lo - 1;
                    }
                }
            }
        }
        for x in lo..=hi {
            out.push([x as i64, y]);
        }
    }
    out.sort_unstable();
    out
}

/// A convex lattice polygon with its lattice points.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatticePolygon {
    vertices: Vec<Point2>,
    lattice_points: Vec<Point2>,
    interior: usize,
    boundary: usize,
}

impl LatticePolygon {
    /// CCW, strictly convex vertex cycle.
    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    /// All lattice points of the closed polygon, sorted.
    pub fn lattice_points(&self) -> &[Point2] {
        &self.lattice_points
    }

    pub fn interior(&self) -> usize {
        self.interior
    }

    pub fn boundary(&self) -> usize {
        self.boundary
    }

    pub fn n(&self) -> usize {
        self.lattice_points.len()
    }

    pub fn twice_area(&self) -> i128 {
        twice_area(&self.vertices)
    }

    pub fn interior_points(&self) -> Vec<Point2> {
        scan_lattice_points(&self.vertices, true)
    }

    pub fn contains(&self, p: &Point2) -> bool {
        self.lattice_points.binary_search(p).is_ok()
    }

    /// Builds from a strictly convex CCW cycle, keeping its rotation.
    fn from_cycle(vertices: Vec<Point2>) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            return Err(Error::Degenerate("fewer than three vertices".into()));
        }
        for i in 0..n {
            if cross(vertices[i], vertices[(i + 1) % n], vertices[(i + 2) % n]) <= 0 {
                return Err(Error::Degenerate(format!(
                    "vertex cycle is not strictly convex and counterclockwise at {:?}",
                    vertices[(i + 1) % n]
                )));
            }
        }
        let lattice_points = scan_lattice_points(&vertices, false);
        let interior = scan_lattice_points(&vertices, true).len();
        let poly = LatticePolygon {
            boundary: lattice_points.len() - interior,
            vertices,
            lattice_points,
            interior,
        };
        counts(&poly)?;
        Ok(poly)
    }

    /// Same polygon with the vertex cycle rotated to start at `start`.
    fn rotated_to(&self, start: usize) -> LatticePolygon {
        let mut p = self.clone();
        p.vertices.rotate_left(start);
        p
    }
}

/// Wire form of a polygon: `{"vertices": [[x, y], ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolygonJson {
    pub vertices: Vec<Point2>,
}

impl Serialize for LatticePolygon {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolygonJson {
            vertices: self.vertices.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LatticePolygon {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let raw = PolygonJson::deserialize(de)?;
        convex_hull(&raw.vertices).map_err(serde::de::Error::custom)
    }
}

pub fn convex_hull(points: &[Point2]) -> Result<LatticePolygon> {
    let vertices = hull_vertices(points);
    if vertices.len() < 3 {
        return Err(Error::Degenerate(format!(
            "{} distinct points with collinear hull",
            vertices.len()
        )));
    }
    LatticePolygon::from_cycle(vertices)
}

/// Interior and boundary counts. The boundary comes from edge gcds and the
/// interior from Pick's formula; both must agree with direct enumeration.
pub fn counts(poly: &LatticePolygon) -> Result<(usize, usize)> {
    let b = boundary_points(&poly.vertices);
    let area2 = poly.twice_area();
    let pick_interior2 = area2 - b as i128 + 2;
    if b != poly.boundary || pick_interior2 != 2 * poly.interior as i128 {
        return Err(Error::invariant(format!(
            "lattice count mismatch for {:?}: enumerated (i={}, b={}), gcd/Pick (2i={}, b={})",
            poly.vertices, poly.interior, poly.boundary, pick_interior2, b
        )));
    }
    Ok((poly.interior, poly.boundary))
}

/// `x -> linear * x + translation` with `det(linear) = ±1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct UnimodularAffineMap {
    linear: [[i64; 2]; 2],
    translation: [i64; 2],
}

impl UnimodularAffineMap {
    pub const IDENTITY: UnimodularAffineMap = UnimodularAffineMap {
        linear: [[1, 0], [0, 1]],
        translation: [0, 0],
    };

    pub fn new(linear: [[i64; 2]; 2], translation: [i64; 2]) -> Result<Self> {
        let det = linear[0][0] * linear[1][1] - linear[0][1] * linear[1][0];
        if det.abs() != 1 {
            return Err(Error::InvalidInput(format!(
                "linear part {linear:?} has determinant {det}"
            )));
        }
        Ok(UnimodularAffineMap {
            linear,
            translation,
        })
    }

    pub fn linear(&self) -> [[i64; 2]; 2] {
        self.linear
    }

    pub fn translation(&self) -> [i64; 2] {
        self.translation
    }

    pub fn det(&self) -> i64 {
        let m = self.linear;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn translate(t: Point2) -> Self {
        UnimodularAffineMap {
            linear: [[1, 0], [0, 1]],
            translation: t,
        }
    }

    fn linear_only(linear: [[i64; 2]; 2]) -> Self {
        UnimodularAffineMap {
            linear,
            translation: [0, 0],
        }
    }

    pub fn apply(&self, p: Point2) -> Point2 {
        let m = self.linear;
        [
            m[0][0] * p[0] + m[0][1] * p[1] + self.translation[0],
            m[1][0] * p[0] + m[1][1] * p[1] + self.translation[1],
        ]
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &UnimodularAffineMap) -> UnimodularAffineMap {
        let (a, b) = (self.linear, other.linear);
        let linear = [
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ],
        ];
        let t = self.apply(other.translation);
        UnimodularAffineMap {
            linear,
            translation: t,
        }
    }

    pub fn inverse(&self) -> UnimodularAffineMap {
        let m = self.linear;
        let det = self.det();
        let linear = [
            [det * m[1][1], -det * m[0][1]],
            [-det * m[1][0], det * m[0][0]],
        ];
        let inv = UnimodularAffineMap::linear_only(linear);
        let t = inv.apply(self.translation);
        UnimodularAffineMap {
            linear,
            translation: [-t[0], -t[1]],
        }
    }

    pub fn apply_polygon(&self, poly: &LatticePolygon) -> Result<LatticePolygon> {
        let pts: Vec<Point2> = poly.vertices.iter().map(|&v| self.apply(v)).collect();
        convex_hull(&pts)
    }
}

/// Which maps count as equivalences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EquivalenceGroup {
    /// Linear part of determinant ±1, plus translations.
    #[default]
    Unimodular,
    /// Linear part of determinant +1 only.
    Special,
}

const MIRROR: UnimodularAffineMap = UnimodularAffineMap {
    linear: [[-1, 0], [0, 1]],
    translation: [0, 0],
};

/// One normal-form candidate per directed edge (and per mirrored edge), with
/// the map sending the polygon onto it.
fn anchored_candidates(
    poly: &LatticePolygon,
    group: EquivalenceGroup,
) -> Vec<(Vec<Point2>, UnimodularAffineMap)> {
    let mut bases = vec![UnimodularAffineMap::IDENTITY];
    if group == EquivalenceGroup::Unimodular {
        bases.push(MIRROR);
    }
    let mut out = Vec::with_capacity(bases.len() * poly.vertices.len());
    for base in bases {
        let mut verts: Vec<Point2> = poly.vertices.iter().map(|&v| base.apply(v)).collect();
        if base.det() < 0 {
            verts.reverse();
        }
        let n = verts.len();
        for i in 0..n {
            let (s, e) = (verts[i], verts[(i + 1) % n]);
            let (dx, dy) = (e[0] - s[0], e[1] - s[1]);
            let g = gcd(dx, dy);
            let (p, q) = (dx / g, dy / g);
            let (_, u, w) = ext_gcd(p, q);
            // sends (p, q) to (1, 0) with determinant u*p + w*q = 1
            let rot = UnimodularAffineMap::linear_only([[u, w], [-q, p]]);
            let anchor = rot.compose(&UnimodularAffineMap::translate([-s[0], -s[1]]));
            let placed: Vec<Point2> = verts.iter().map(|&v| anchor.apply(v)).collect();
            let h = placed.iter().map(|v| v[1]).max().unwrap();
            let top_x = placed
                .iter()
                .filter(|v| v[1] == h)
                .map(|v| v[0])
                .min()
                .unwrap();
            let t = -div_floor(top_x, h);
            let shear = UnimodularAffineMap::linear_only([[1, t], [0, 1]]);
            let map = shear.compose(&anchor).compose(&base);
            let mut cycle: Vec<Point2> = placed.iter().map(|&v| shear.apply(v)).collect();
            cycle.rotate_left(i);
            out.push((cycle, map));
        }
    }
    out
}

/// Normal form together with a map taking `poly` onto it.
pub fn canonicalize(
    poly: &LatticePolygon,
    group: EquivalenceGroup,
) -> (LatticePolygon, UnimodularAffineMap) {
    let (cycle, map) = anchored_candidates(poly, group)
        .into_iter()
        .min()
        .expect("polygon has at least three edges");
    let canon = map
        .apply_polygon(poly)
        .expect("unimodular image of a polygon is a polygon");
    let start = canon.vertices.iter().position(|v| *v == cycle[0]).unwrap();
    let canon = canon.rotated_to(start);
    debug_assert_eq!(canon.vertices, cycle);
    (canon, map)
}

/// Edge-anchored normal form under the full affine unimodular group. The
/// vertex cycle starts at the origin.
pub fn canonical_form(poly: &LatticePolygon) -> LatticePolygon {
    canonicalize(poly, EquivalenceGroup::Unimodular).0
}

pub fn canonical_form_in(poly: &LatticePolygon, group: EquivalenceGroup) -> LatticePolygon {
    canonicalize(poly, group).0
}

fn verify_witness(map: &UnimodularAffineMap, from: &LatticePolygon, to: &LatticePolygon) -> bool {
    let mut img: Vec<Point2> = from.lattice_points.iter().map(|&p| map.apply(p)).collect();
    img.sort_unstable();
    img == to.lattice_points
}

/// A map `f` with `f(p1) = p2`, if the polygons are equivalent.
pub fn equivalent(p1: &LatticePolygon, p2: &LatticePolygon) -> Result<Option<UnimodularAffineMap>> {
    equivalent_in(p1, p2, EquivalenceGroup::Unimodular)
}

pub fn equivalent_in(
    p1: &LatticePolygon,
    p2: &LatticePolygon,
    group: EquivalenceGroup,
) -> Result<Option<UnimodularAffineMap>> {
    let (c1, a1) = canonicalize(p1, group);
    let (c2, a2) = canonicalize(p2, group);
    if c1.vertices != c2.vertices {
        return Ok(None);
    }
    let witness = a2.inverse().compose(&a1);
    if !verify_witness(&witness, p1, p2) {
        return Err(Error::invariant(
            "equal normal forms but the composed map is not an equivalence",
        ));
    }
    Ok(Some(witness))
}

/// Every map `f` with `f(p1) = p2`, sorted. Two witnesses differ by a lattice
/// symmetry of the polygon.
pub fn all_equivalences(
    p1: &LatticePolygon,
    p2: &LatticePolygon,
) -> Result<Vec<UnimodularAffineMap>> {
    let group = EquivalenceGroup::Unimodular;
    let c1 = anchored_candidates(p1, group);
    let c2 = anchored_candidates(p2, group);
    let best1 = c1.iter().map(|c| &c.0).min().unwrap();
    let best2 = c2.iter().map(|c| &c.0).min().unwrap();
    if best1 != best2 {
        return Ok(Vec::new());
    }
    let a2 = c2.iter().find(|c| &c.0 == best2).unwrap().1;
    let inv2 = a2.inverse();
    let mut out = BTreeSet::new();
    for (cycle, a1) in &c1 {
        if cycle == best1 {
            let w = inv2.compose(a1);
            if !verify_witness(&w, p1, p2) {
                return Err(Error::invariant(
                    "tied normal-form candidates do not give an equivalence",
                ));
            }
            out.insert(w);
        }
    }
    Ok(out.into_iter().collect())
}

/// Splits the polygon into lattice triangles containing no lattice points
/// other than their vertices. Starts from a fan at the first vertex, then
/// inserts the remaining boundary points in cycle order and the interior
/// points in lexicographic order. A point inside a triangle splits it in
/// three; a point on an edge splits each triangle sharing that edge in two.
pub fn triangulate(poly: &LatticePolygon) -> Result<Vec<[Point2; 3]>> {
    let v = &poly.vertices;
    let n = v.len();
    let mut tris: Vec<[Point2; 3]> = (1..n - 1).map(|i| [v[0], v[i], v[i + 1]]).collect();
    let mut order = Vec::new();
    for i in 0..n {
        let (s, e) = (v[i], v[(i + 1) % n]);
        let g = gcd(e[0] - s[0], e[1] - s[1]);
        let step = [(e[0] - s[0]) / g, (e[1] - s[1]) / g];
        order.extend((1..g).map(|t| [s[0] + t * step[0], s[1] + t * step[1]]));
    }
    order.extend(poly.interior_points());
    for p in order {
        insert_point(&mut tris, p)?;
    }
    let expected = 2 * poly.interior + poly.boundary - 2;
    if tris.len() != expected {
        return Err(Error::invariant(format!(
            "triangulation has {} pieces, expected {expected}",
            tris.len()
        )));
    }
    if let Some(t) = tris.iter().find(|t| cross(t[0], t[1], t[2]) != 1) {
        return Err(Error::invariant(format!("triangle {t:?} is not primitive")));
    }
    Ok(tris)
}

fn insert_point(tris: &mut Vec<[Point2; 3]>, p: Point2) -> Result<()> {
    let mut replaced = Vec::new();
    let mut keep = Vec::with_capacity(tris.len() + 2);
    for &t in tris.iter() {
        let [a, b, c] = t;
        let s = [cross(a, b, p), cross(b, c, p), cross(c, a, p)];
        if s.iter().any(|&x| x < 0) || t.contains(&p) {
            keep.push(t);
            continue;
        }
        match s.iter().filter(|&&x| x == 0).count() {
            0 => replaced.extend([[a, b, p], [b, c, p], [c, a, p]]),
            1 => {
                let (x, y, z) = if s[0] == 0 {
                    (a, b, c)
                } else if s[1] == 0 {
                    (b, c, a)
                } else {
                    (c, a, b)
                };
                replaced.extend([[x, p, z], [p, y, z]]);
            }
            _ => {
                return Err(Error::invariant(format!(
                    "point {p:?} coincides with a vertex"
                )))
            }
        }
    }
    if replaced.is_empty() {
        return Err(Error::invariant(format!("point {p:?} lies in no triangle")));
    }
    keep.extend(replaced);
    *tris = keep;
    Ok(())
}

/// Deterministic fuzzing map: a product of `size` elementary factors. The
/// first factor is a shear; later ones are shears or reflections. A
/// translation in `[-3(size-1), 3(size-1)]^2` is appended, so `size = 0` is
/// the identity and `size = 1` is a single shear about the origin.
pub fn random_unimodular_map(seed: u64, size: usize) -> UnimodularAffineMap {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut map = UnimodularAffineMap::IDENTITY;
    for i in 0..size {
        let kind = if i == 0 {
            rng.gen_range(0..2)
        } else {
            rng.gen_range(0..4)
        };
        let mut t = rng.gen_range(1..=3i64);
        if rng.gen_bool(0.5) {
            t = -t;
        }
        let factor = match kind {
            0 => [[1, t], [0, 1]],
            1 => [[1, 0], [t, 1]],
            2 => [[-1, 0], [0, 1]],
            _ => [[0, 1], [1, 0]],
        };
        map = UnimodularAffineMap::linear_only(factor).compose(&map);
    }
    if size > 1 {
        let r = 3 * (size as i64 - 1);
        let t = [rng.gen_range(-r..=r), rng.gen_range(-r..=r)];
        map = UnimodularAffineMap::translate(t).compose(&map);
    }
    map
}

/// Image of every row of `M(P)` in the basis of the triple, as `(row, (a1, a2))`.
pub fn project_points(p: &WeightedPolytope, triple: &[Point3; 3]) -> Result<Vec<(Point3, Point2)>> {
    p.points
        .iter()
        .map(|row| {
            let a = decompose(p, triple, row)?.alphas;
            let x = i64::try_from(a[0]).map_err(|_| Error::Overflow("projection"))?;
            let y = i64::try_from(a[1]).map_err(|_| Error::Overflow("projection"))?;
            Ok((*row, [x, y]))
        })
        .collect()
}

/// Sends `v1 -> (1,0)`, `v2 -> (0,1)`, `v3 -> (0,0)` and takes the hull of the
/// images. The lattice-point and interior counts must survive the map.
pub fn project(p: &WeightedPolytope, triple: &[Point3; 3]) -> Result<LatticePolygon> {
    let images: Vec<Point2> = project_points(p, triple)?
        .into_iter()
        .map(|(_, x)| x)
        .collect();
    let poly = convex_hull(&images)?;
    if poly.n() != p.n() || poly.interior() != p.interior.len() {
        return Err(Error::invariant(format!(
            "{}: projection has n={}, i={} but the polytope has n={}, i={}",
            p.quadruple,
            poly.n(),
            poly.interior(),
            p.n(),
            p.interior.len()
        )));
    }
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadruples::Quadruple;
    use crate::wpolytope::{build, find_unimodular_triple};

    fn poly(pts: &[Point2]) -> LatticePolygon {
        convex_hull(pts).unwrap()
    }

    /// Point-in-polygon over the bounding box, independent of the scanline.
    fn brute_counts(p: &LatticePolygon) -> (usize, usize) {
        let v = p.vertices();
        let (mut i, mut b) = (0, 0);
        let xs = v.iter().map(|p| p[0]);
        let ys = v.iter().map(|p| p[1]);
        let (x0, x1) = (xs.clone().min().unwrap(), xs.max().unwrap());
        let (y0, y1) = (ys.clone().min().unwrap(), ys.max().unwrap());
        for x in x0..=x1 {
            for y in y0..=y1 {
                let s: Vec<i128> = (0..v.len())
                    .map(|k| cross(v[k], v[(k + 1) % v.len()], [x, y]))
                    .collect();
                if s.iter().all(|&c| c > 0) {
                    i += 1;
                } else if s.iter().all(|&c| c >= 0) {
                    b += 1;
                }
            }
        }
        (i, b)
    }

    #[test]
    fn hull_examples() {
        let sq = poly(&[[0, 0], [1, 0], [0, 1], [1, 1]]);
        assert_eq!(sq.vertices(), &[[0, 0], [1, 0], [1, 1], [0, 1]]);
        assert!(matches!(
            convex_hull(&[[0, 0], [1, 0], [2, 0]]),
            Err(Error::Degenerate(_))
        ));
        assert!(convex_hull(&[[0, 0], [1, 1]]).is_err());
        // collinear boundary points are not vertices
        let t = poly(&[[0, 0], [1, 0], [2, 0], [0, 2], [1, 1]]);
        assert_eq!(t.vertices(), &[[0, 0], [2, 0], [0, 2]]);
    }

    #[test]
    fn counts_examples() {
        assert_eq!(counts(&poly(&[[0, 0], [1, 0], [0, 1]])).unwrap(), (0, 3));
        assert_eq!(counts(&poly(&[[0, 0], [3, 0], [0, 3]])).unwrap(), (1, 9));
        assert_eq!(
            counts(&poly(&[[0, 0], [2, 0], [2, 2], [0, 2]])).unwrap(),
            (1, 8)
        );
        for pts in [
            vec![[0, 0], [7, 3], [-2, 5]],
            vec![[-6, 4], [0, 0], [1, 0], [0, 1]],
            vec![[0, 0], [1000, 1], [1, 0]],
        ] {
            let p = poly(&pts);
            assert_eq!(counts(&p).unwrap(), brute_counts(&p));
        }
    }

    #[test]
    fn triangulate_examples() {
        assert_eq!(
            triangulate(&poly(&[[0, 0], [1, 0], [0, 1]])).unwrap().len(),
            1
        );
        assert_eq!(
            triangulate(&poly(&[[0, 0], [3, 0], [0, 3]])).unwrap().len(),
            9
        );
        assert_eq!(
            triangulate(&poly(&[[0, 0], [2, 0], [1, 1], [0, 1]]))
                .unwrap()
                .len(),
            3
        );
    }

    #[test]
    fn map_algebra() {
        let f = UnimodularAffineMap::new([[2, 1], [1, 1]], [3, -1]).unwrap();
        let g = UnimodularAffineMap::new([[0, 1], [1, 0]], [5, 2]).unwrap();
        for p in [[0, 0], [1, 2], [-3, 7]] {
            assert_eq!(f.inverse().apply(f.apply(p)), p);
            assert_eq!(f.compose(&g).apply(p), f.apply(g.apply(p)));
        }
        assert!(UnimodularAffineMap::new([[2, 0], [0, 1]], [0, 0]).is_err());
    }

    #[test]
    fn canonical_examples() {
        let unit = poly(&[[0, 0], [1, 0], [0, 1]]);
        assert_eq!(canonical_form(&unit).vertices(), unit.vertices());
        let sheared = poly(&[[0, 0], [1, 0], [1, 1]]);
        assert_eq!(canonical_form(&sheared), canonical_form(&unit));
        let big = poly(&[[0, 0], [3, 0], [0, 3]]);
        let moved = poly(&[[5, 7], [8, 7], [5, 10]]);
        assert_eq!(canonical_form(&moved), canonical_form(&big));
        assert_eq!(
            canonical_form(&canonical_form(&moved)),
            canonical_form(&big)
        );
        assert_eq!(canonical_form(&big).vertices()[0], [0, 0]);
    }

    #[test]
    fn special_group_separates_mirror_images() {
        // a chiral quadrilateral and its reflection
        let c = poly(&[[0, 0], [3, 0], [4, 1], [2, 3], [0, 1]]);
        let cm = MIRROR.apply_polygon(&c).unwrap();
        let full = equivalent(&c, &cm).unwrap().unwrap();
        assert_eq!(full.det(), -1);
        assert_eq!(
            equivalent_in(&c, &cm, EquivalenceGroup::Special).unwrap(),
            None
        );
        // a symmetric polygon is its own mirror image in either group
        let sq = poly(&[[0, 0], [1, 0], [1, 1], [0, 1]]);
        let sqm = MIRROR.apply_polygon(&sq).unwrap();
        assert_eq!(
            equivalent_in(&sq, &sqm, EquivalenceGroup::Special)
                .unwrap()
                .unwrap()
                .det(),
            1
        );
    }

    #[test]
    fn equivalence_examples() {
        let p = poly(&[[0, 0], [2, 0], [1, 3], [0, 1]]);
        let t = UnimodularAffineMap::translate([4, -9])
            .apply_polygon(&p)
            .unwrap();
        let w = equivalent(&p, &t).unwrap().unwrap();
        assert_eq!(w.apply_polygon(&p).unwrap(), t);

        let unit = poly(&[[0, 0], [1, 0], [0, 1]]);
        let two = poly(&[[0, 0], [2, 0], [0, 2]]);
        assert_eq!(equivalent(&unit, &two).unwrap(), None);
    }

    #[test]
    fn automorphisms_of_the_unit_square() {
        let sq = poly(&[[0, 0], [1, 0], [1, 1], [0, 1]]);
        assert_eq!(all_equivalences(&sq, &sq).unwrap().len(), 8);
        let tri = poly(&[[0, 0], [1, 0], [0, 1]]);
        assert_eq!(all_equivalences(&tri, &tri).unwrap().len(), 6);
    }

    #[test]
    fn random_map_examples() {
        assert_eq!(random_unimodular_map(0, 0), UnimodularAffineMap::IDENTITY);
        let m = random_unimodular_map(1, 1);
        let l = m.linear();
        assert_eq!(m.translation(), [0, 0]);
        assert_eq!((l[0][0], l[1][1]), (1, 1));
        assert!(
            (l[0][1] == 0) != (l[1][0] == 0),
            "{l:?} is not a single shear"
        );
        for seed in 0..200 {
            assert_eq!(random_unimodular_map(seed, 6).det().abs(), 1);
            assert_eq!(
                random_unimodular_map(seed, 6),
                random_unimodular_map(seed, 6)
            );
        }
    }

    #[test]
    fn projection_examples() {
        let p = build(&Quadruple::new(1, 3, 2, 7).unwrap()).unwrap();
        let triple = [[4, 1, 0], [2, 1, 1], [1, 2, 0]];
        let imgs = project_points(&p, &triple).unwrap();
        let img = |v: Point3| imgs.iter().find(|(r, _)| *r == v).unwrap().1;
        assert_eq!(img([4, 1, 0]), [1, 0]);
        assert_eq!(img([2, 1, 1]), [0, 1]);
        assert_eq!(img([1, 2, 0]), [0, 0]);
        assert_eq!(img([7, 0, 0]), [2, 0]);
        let poly = project(&p, &triple).unwrap();
        assert_eq!(poly.n(), 8);
        assert_eq!(poly.interior(), 1);
        // vertex count is an affine invariant
        assert_eq!(poly.vertices().len(), 4);

        let p = build(&Quadruple::new(1, 1, 1, 3).unwrap()).unwrap();
        let t = find_unimodular_triple(&p).unwrap();
        let proj = project(&p, &t).unwrap();
        assert_eq!((proj.n(), proj.interior()), (10, 1));
        let big = convex_hull(&[[0, 0], [3, 0], [0, 3]]).unwrap();
        assert!(equivalent(&proj, &big).unwrap().is_some());
    }

    #[test]
    fn polygon_json() {
        let p: LatticePolygon =
            serde_json::from_str(r#"{"vertices": [[0,0],[0,2],[2,0]]}"#).unwrap();
        assert_eq!(
            serde_json::to_string(&p).unwrap(),
            r#"{"vertices":[[0,0],[2,0],[0,2]]}"#
        );
        assert!(serde_json::from_str::<LatticePolygon>(r#"{"vertices": [[0,0],[1,1]]}"#).is_err());
    }
}
