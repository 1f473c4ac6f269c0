use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::io::Read;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;
use wpc_core::arith::fmt_rational;
use wpc_core::classify::{
    enumerate_classes, find_basis_change, group_by_class, map_curve, stabilization_from_atlas,
    stabilization_report, ClassAtlas, Method, WeightedCurve,
};
use wpc_core::polygon2d::{
    all_equivalences, canonicalize, counts, equivalent, random_unimodular_map, triangulate,
    EquivalenceGroup,
};
use wpc_core::quadruples::{validate, AvoidingWitness, AxisWitness};
use wpc_core::wpolytope::{
    bound_status, build, case_report, check_all_minors, find_unimodular_triple, interior_count,
    minor_det, verify_case_identities, BoundStatus, CaseReport, DistinguishedTriangle, MinorReport,
};
use wpc_core::{LatticePolygon, Point2, Point3, Quadruple, UnimodularAffineMap};

use crate::config::{Config, Format};
use crate::{
    svg, AnalyzeArgs, CanonicalArgs, ClassifyArgs, CliError, Command, EnumArgs, EquivArgs,
    FuzzArgs, MapCurveArgs, MethodArg, PolyCommand, PolygonsCommand, QuadArgs, QuadCommand,
};

pub fn dispatch(cmd: Command, config: &Config) -> Result<(), CliError> {
    let out = match cmd {
        Command::Quad(QuadCommand::Check(a)) => quad_check(&a, config)?,
        Command::Poly(PolyCommand::Analyze(a)) => poly_analyze(&a, config)?,
        Command::Classify(a) => classify(&a, config)?,
        Command::Polygons(PolygonsCommand::Enum(a)) => polygons_enum(&a)?,
        Command::Polygons(PolygonsCommand::Canonical(a)) => polygons_canonical(&a, config)?,
        Command::Polygons(PolygonsCommand::Equiv(a)) => polygons_equiv(&a, config)?,
        Command::Polygons(PolygonsCommand::Fuzz(a)) => polygons_fuzz(&a, config)?,
        Command::MapCurve(a) => map_curve_cmd(&a, config)?,
    };
    print!("{out}");
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

fn quadruple(a: &QuadArgs, config: &Config) -> Result<Quadruple, CliError> {
    let q = Quadruple::new(a.w0, a.w1, a.w2, a.d)?;
    if q.d > config.d_max_cap {
        return Err(CliError::usage(format!(
            "d = {} exceeds the configured cap {}",
            q.d, config.d_max_cap
        )));
    }
    Ok(q)
}

fn power(i: usize, e: i64) -> String {
    if e == 1 {
        format!("x{i}")
    } else {
        format!("x{i}^{e}")
    }
}

fn axis_monomial(i: usize, w: &AxisWitness) -> String {
    if w.j == i {
        power(i, w.k + 1)
    } else {
        format!("{} {}", power(i, w.k), power(w.j, 1))
    }
}

fn avoiding_monomial(w: &AvoidingWitness) -> String {
    let parts: Vec<String> = (0..2)
        .filter(|&t| w.exponents[t] > 0)
        .map(|t| power(w.axes[t], w.exponents[t]))
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join(" ")
    }
}

fn classes(n: usize) -> String {
    format!("{n} {}", if n == 1 { "class" } else { "classes" })
}

fn quad_check(a: &QuadArgs, config: &Config) -> Result<String, CliError> {
    let q = quadruple(a, config)?;
    let r = validate(&q);
    if config.format == Format::Json {
        return Ok(to_json(&r));
    }
    let mut s = String::new();
    writeln!(s, "quadruple: {q}").unwrap();
    writeln!(s, "good: {}", r.is_good).unwrap();
    writeln!(s, "pairwise coprime: {}", r.pairwise_coprime).unwrap();
    writeln!(s, "d exceeds every weight: {}", r.degree_dominates).unwrap();
    for i in 0..3 {
        let c1 = r.condition_i[i]
            .as_ref()
            .map_or("none".into(), |w| axis_monomial(i, w));
        let c2 = r.condition_ii[i]
            .as_ref()
            .map_or("none".into(), avoiding_monomial);
        writeln!(
            s,
            "axis {i}: x{i}-monomial {c1}; monomial without x{i}: {c2}"
        )
        .unwrap();
    }
    match r.genus {
        Some(g) => writeln!(s, "genus: {g}").unwrap(),
        None => writeln!(s, "genus: n/a").unwrap(),
    }
    Ok(s)
}

#[derive(Serialize)]
struct Analysis {
    quadruple: Quadruple,
    genus: u64,
    n: usize,
    interior: usize,
    bound_status: BoundStatus,
    minors: MinorReport,
    distinguished: DistinguishedTriangle,
    case: CaseReport,
    unimodular_triple: [Point3; 3],
    unimodular_det: i128,
    polygon: LatticePolygon,
    polygon_interior: usize,
    polygon_boundary: usize,
    canonical: LatticePolygon,
}

fn poly_analyze(a: &AnalyzeArgs, config: &Config) -> Result<String, CliError> {
    let q = quadruple(&a.quad, config)?;
    let r = validate(&q);
    if !r.is_good {
        return Err(CliError::usage(format!("{q} is not a good quadruple")));
    }
    let genus = wpc_core::quadruples::genus(&q)?;
    let p = build(&q)?;
    let interior = interior_count(&p)?;
    if interior as u64 != genus {
        return Err(CliError::invariant(format!(
            "{q}: {interior} interior points but genus {genus}"
        )));
    }
    let minors = check_all_minors(&p)?;
    verify_case_identities(&p)?;
    let (distinguished, case) = case_report(&p)?;
    let triple = find_unimodular_triple(&p)?;
    let unimodular_det = minor_det(&triple[0], &triple[1], &triple[2])?;
    let polygon = wpc_core::polygon2d::project(&p, &triple)?;
    let (polygon_interior, polygon_boundary) = counts(&polygon)?;
    let canonical = wpc_core::polygon2d::canonical_form(&polygon);
    let report = Analysis {
        quadruple: q,
        genus,
        n: p.n(),
        interior,
        bound_status: bound_status(p.n(), genus),
        minors,
        distinguished,
        case,
        unimodular_triple: triple,
        unimodular_det,
        polygon,
        polygon_interior,
        polygon_boundary,
        canonical,
    };
    if let Some(path) = &a.svg {
        std::fs::write(path, svg::render(&report.polygon))?;
    }
    if let Some(path) = &a.polygon_json {
        std::fs::write(path, to_json(&report.polygon))?;
    }
    if config.format == Format::Json {
        return Ok(to_json(&report));
    }
    let c = &report.case;
    let status = match report.bound_status {
        BoundStatus::Within => "within 3g+6",
        BoundStatus::ExceptionalBound => "exceptional: n = 3g+7",
        BoundStatus::Exceeded => "exceeds 3g+7",
    };
    let mut s = String::new();
    writeln!(s, "quadruple: {q}").unwrap();
    writeln!(s, "genus: {genus}").unwrap();
    writeln!(s, "lattice points: {}", report.n).unwrap();
    writeln!(s, "interior points: {interior}").unwrap();
    writeln!(s, "bound: {status}").unwrap();
    writeln!(
        s,
        "minors: {} triples, {} nonzero, {} not divisible by d",
        minors.triples, minors.nonzero, minors.violations
    )
    .unwrap();
    writeln!(s, "case: {}", c.case_tag).unwrap();
    writeln!(s, "distinguished rows: {:?}", report.distinguished.rows).unwrap();
    writeln!(
        s,
        "distinguished det: {} (predicted {})",
        c.actual_det, c.predicted_det
    )
    .unwrap();
    writeln!(
        s,
        "case identity: {} ({} = {})",
        c.identity, c.identity_lhs, c.identity_rhs
    )
    .unwrap();
    writeln!(s, "unimodular triple: {:?} (det {unimodular_det})", triple).unwrap();
    writeln!(
        s,
        "projected polygon: {:?} (n={}, interior={polygon_interior}, boundary={polygon_boundary})",
        report.polygon.vertices(),
        report.polygon.n()
    )
    .unwrap();
    writeln!(s, "canonical form: {:?}", report.canonical.vertices()).unwrap();
    Ok(s)
}

fn atlas_path(dir: &Path, g: u64, d_max: i64) -> PathBuf {
    dir.join(format!("atlas-g{g}-d{d_max}.json"))
}

/// Writes through a sibling temporary file so readers never see a partial atlas.
fn write_replace(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    std::fs::write(&tmp, contents)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

#[derive(Serialize)]
struct MemberRow {
    w0: i64,
    w1: i64,
    w2: i64,
    d: i64,
    n: usize,
    class_index: usize,
}

fn write_csv(atlas: &ClassAtlas, path: &Path) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for (class_index, c) in atlas.classes.iter().enumerate() {
        for q in &c.members {
            let [w0, w1, w2] = q.weights;
            w.serialize(MemberRow {
                w0,
                w1,
                w2,
                d: q.d,
                n: c.n,
                class_index,
            })
            .map_err(|e| CliError::usage(e.to_string()))?;
        }
    }
    let bytes = w.into_inner().map_err(|e| CliError::usage(e.to_string()))?;
    write_replace(path, &bytes)
}

#[derive(Serialize)]
struct ClassifySummary {
    g: u64,
    d_max: i64,
    classes: usize,
    atlas: PathBuf,
    stabilization: Option<wpc_core::classify::StabilizationReport>,
}

fn classify(a: &ClassifyArgs, config: &Config) -> Result<String, CliError> {
    let too_big = a
        .steps
        .iter()
        .chain([&a.dmax])
        .find(|&&d| d > config.d_max_cap);
    if let Some(d) = too_big {
        return Err(CliError::usage(format!(
            "degree bound {d} exceeds the configured cap {}",
            config.d_max_cap
        )));
    }
    let atlas = group_by_class(a.genus, a.dmax)?;
    std::fs::create_dir_all(&config.atlas_dir)?;
    let path = atlas_path(&config.atlas_dir, a.genus, a.dmax);
    write_replace(&path, atlas.to_json().as_bytes())?;
    if let Some(csv) = &a.csv {
        write_csv(&atlas, csv)?;
    }
    let stabilization = if a.steps.is_empty() {
        None
    } else if a.steps.iter().all(|&d| d <= a.dmax) && a.steps.windows(2).all(|w| w[0] < w[1]) {
        Some(stabilization_from_atlas(&atlas, &a.steps))
    } else {
        Some(stabilization_report(a.genus, &a.steps)?)
    };
    if config.format == Format::Json {
        return Ok(to_json(&ClassifySummary {
            g: a.genus,
            d_max: a.dmax,
            classes: atlas.len(),
            atlas: path,
            stabilization,
        }));
    }
    let mut s = String::new();
    writeln!(
        s,
        "genus {}, d <= {}: {} (an upper bound on the number of loci)",
        a.genus,
        a.dmax,
        classes(atlas.len())
    )
    .unwrap();
    writeln!(s, "atlas: {}", path.display()).unwrap();
    if let Some(r) = stabilization {
        for step in &r.steps {
            writeln!(s, "d <= {}: {}", step.d_max, classes(step.classes)).unwrap();
        }
        if r.grew_at_last_step {
            writeln!(s, "class count still growing at the last step").unwrap();
        }
    }
    Ok(s)
}

#[derive(Serialize)]
struct EnumLine<'a> {
    vertices: &'a [Point2],
    n: usize,
    interior: usize,
}

fn polygons_enum(a: &EnumArgs) -> Result<String, CliError> {
    let inductive = Method::Inductive { n_max: a.nmax };
    let boxed = Method::Box { bound: a.bound };
    let classes = if a.cross_check {
        let i = enumerate_classes(a.genus, inductive)?;
        let b = enumerate_classes(a.genus, boxed)?;
        let ki: BTreeSet<&[Point2]> = i.iter().map(|p| p.vertices()).collect();
        let kb: BTreeSet<&[Point2]> = b.iter().map(|p| p.vertices()).collect();
        if ki != kb {
            let mut msg = format!(
                "methods disagree: inductive {} classes, box {} classes",
                ki.len(),
                kb.len()
            );
            for v in ki.difference(&kb) {
                write!(msg, "\n  inductive only: {v:?}").unwrap();
            }
            for v in kb.difference(&ki) {
                write!(msg, "\n  box only: {v:?}").unwrap();
            }
            return Err(CliError::invariant(msg));
        }
        eprintln!("inductive and box methods agree on {} classes", i.len());
        i
    } else {
        enumerate_classes(
            a.genus,
            if a.method == MethodArg::Box {
                boxed
            } else {
                inductive
            },
        )?
    };
    let mut s = String::new();
    for p in &classes {
        let line = EnumLine {
            vertices: p.vertices(),
            n: p.n(),
            interior: p.interior(),
        };
        writeln!(s, "{}", serde_json::to_string(&line).unwrap()).unwrap();
    }
    Ok(s)
}

fn read_polygon(path: &Path) -> Result<LatticePolygon, CliError> {
    let text = if path.as_os_str() == "-" {
        let mut t = String::new();
        std::io::stdin().read_to_string(&mut t)?;
        t
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?
    };
    serde_json::from_str(&text).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

#[derive(Serialize)]
struct CanonicalOut {
    canonical: LatticePolygon,
    map: UnimodularAffineMap,
}

fn polygons_canonical(a: &CanonicalArgs, config: &Config) -> Result<String, CliError> {
    let p = read_polygon(&a.polygon)?;
    let group = if a.special {
        EquivalenceGroup::Special
    } else {
        EquivalenceGroup::Unimodular
    };
    let (canonical, map) = canonicalize(&p, group);
    if config.format == Format::Json {
        return Ok(to_json(&CanonicalOut { canonical, map }));
    }
    Ok(format!("{}\n", serde_json::to_string(&canonical).unwrap()))
}

#[derive(Serialize)]
struct EquivOut {
    equivalent: bool,
    witnesses: Vec<UnimodularAffineMap>,
}

fn polygons_equiv(a: &EquivArgs, config: &Config) -> Result<String, CliError> {
    let (p1, p2) = (read_polygon(&a.first)?, read_polygon(&a.second)?);
    let witnesses = if a.all {
        all_equivalences(&p1, &p2)?
    } else {
        equivalent(&p1, &p2)?.into_iter().collect()
    };
    let out = EquivOut {
        equivalent: !witnesses.is_empty(),
        witnesses,
    };
    if config.format == Format::Json {
        return Ok(to_json(&out));
    }
    let mut s = format!(
        "equivalent: {}\n",
        if out.equivalent { "yes" } else { "no" }
    );
    for w in &out.witnesses {
        writeln!(
            s,
            "witness: linear {:?}, translation {:?}",
            w.linear(),
            w.translation()
        )
        .unwrap();
    }
    Ok(s)
}

fn mix(seed: u64, a: u64, b: u64) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        ^ a.wrapping_mul(0xBF58_476D_1CE4_E5B9)
        ^ b.wrapping_mul(0x94D0_49BB_1331_11EB)
}

#[derive(Serialize)]
struct FuzzOut {
    genus: u64,
    seed: u64,
    classes: usize,
    samples: usize,
    maps_per_sample: usize,
    failures: Vec<String>,
}

/// Checks for one polygon sampled from `class`; returns failure messages.
fn fuzz_one(class: &LatticePolygon, seed: u64, index: usize, maps: usize) -> Vec<String> {
    let mut failures = Vec::new();
    let sample = match random_unimodular_map(mix(seed, index as u64, 0), 4).apply_polygon(class) {
        Ok(p) => p,
        Err(e) => return vec![format!("sample {index}: {e}")],
    };
    match counts(&sample) {
        Ok((i, b)) if sample.twice_area() == (2 * i + b) as i128 - 2 => {}
        Ok(_) => failures.push(format!("sample {index}: Pick's formula fails")),
        Err(e) => failures.push(format!("sample {index}: {e}")),
    }
    match triangulate(&sample) {
        Ok(t) if t.len() as i128 == sample.twice_area() => {}
        Ok(t) => failures.push(format!(
            "sample {index}: {} triangles for twice-area {}",
            t.len(),
            sample.twice_area()
        )),
        Err(e) => failures.push(format!("sample {index}: {e}")),
    }
    let canonical = wpc_core::polygon2d::canonical_form(&sample);
    if &canonical != class {
        failures.push(format!(
            "sample {index}: canonical form differs from its class"
        ));
    }
    if wpc_core::polygon2d::canonical_form(&canonical) != canonical {
        failures.push(format!("sample {index}: canonical form is not idempotent"));
    }
    for m in 0..maps {
        let f = random_unimodular_map(mix(seed, index as u64, m as u64 + 1), 1 + m % 8);
        match f.apply_polygon(&sample) {
            Ok(img) if wpc_core::polygon2d::canonical_form(&img) == canonical => {}
            Ok(_) => failures.push(format!("sample {index}, map {m}: canonical form changed")),
            Err(e) => failures.push(format!("sample {index}, map {m}: {e}")),
        }
    }
    failures
}

fn polygons_fuzz(a: &FuzzArgs, config: &Config) -> Result<String, CliError> {
    let classes = enumerate_classes(a.genus, Method::Inductive { n_max: a.nmax })?;
    if classes.is_empty() {
        return Err(CliError::usage("no classes to sample from"));
    }
    let seed = config.seed;
    let failures: Vec<String> = (0..a.samples)
        .into_par_iter()
        .flat_map_iter(|i| fuzz_one(&classes[i % classes.len()], seed, i, a.maps))
        .collect();
    let out = FuzzOut {
        genus: a.genus,
        seed,
        classes: classes.len(),
        samples: a.samples,
        maps_per_sample: a.maps,
        failures,
    };
    let text = if config.format == Format::Json {
        to_json(&out)
    } else {
        format!(
            "genus {}, seed {}: {} samples from {} classes, {} maps each, {} failures\n",
            out.genus,
            out.seed,
            out.samples,
            out.classes,
            out.maps_per_sample,
            out.failures.len()
        )
    };
    if !out.failures.is_empty() {
        print!("{text}");
        return Err(CliError::invariant(out.failures.join("\n")));
    }
    Ok(text)
}

#[derive(Serialize)]
struct MapCurveOut {
    basis_change: wpc_core::classify::BasisChange,
    curve: WeightedCurve,
    support: wpc_core::classify::SupportReport,
}

fn map_curve_cmd(a: &MapCurveArgs, config: &Config) -> Result<String, CliError> {
    let curve = match &a.curve {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
            serde_json::from_str::<WeightedCurve>(&text)
                .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?
        }
        None => WeightedCurve::generic(&a.from)?,
    };
    if curve.quadruple() != a.from {
        return Err(CliError::usage(format!(
            "curve is on {}, not {}",
            curve.quadruple(),
            a.from
        )));
    }
    let bc = find_basis_change(&a.from, &a.to)?.ok_or_else(|| {
        CliError::usage(format!(
            "{} and {} are in different polygon classes",
            a.from, a.to
        ))
    })?;
    let (image, support) = map_curve(&curve, &bc, &a.to)?;
    if support.regression {
        eprintln!("warning: the image support no longer satisfies the monomial conditions");
    }
    if config.format == Format::Json {
        return Ok(to_json(&MapCurveOut {
            basis_change: bc,
            curve: image,
            support,
        }));
    }
    let mut s = String::new();
    writeln!(s, "T:").unwrap();
    for row in &bc.t {
        let cells: Vec<String> = row.iter().map(fmt_rational).collect();
        writeln!(s, "  {}", cells.join(" ")).unwrap();
    }
    writeln!(s, "curve on {}:", a.to).unwrap();
    for t in image.terms() {
        writeln!(s, "  {} {:?}", fmt_rational(&t.coefficient), t.exponents).unwrap();
    }
    Ok(s)
}
