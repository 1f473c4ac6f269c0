use std::fmt::Write;

use wpc_core::LatticePolygon;

pub const UNIT: i64 = 24;

/// Lattice dots, the polygon outline, its boundary points as rings and its
/// interior points filled.
pub fn render(poly: &LatticePolygon) -> String {
    let v = poly.vertices();
    let x0 = v.iter().map(|p| p[0]).min().unwrap() - 1;
    let x1 = v.iter().map(|p| p[0]).max().unwrap() + 1;
    let y0 = v.iter().map(|p| p[1]).min().unwrap() - 1;
    let y1 = v.iter().map(|p| p[1]).max().unwrap() + 1;
    let (w, h) = ((x1 - x0) * UNIT, (y1 - y0) * UNIT);
    let px = |x: i64| (x - x0) * UNIT;
    let py = |y: i64| (y1 - y) * UNIT;

    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    )
    .unwrap();
    writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#).unwrap();
    for x in x0 + 1..x1 {
        for y in y0 + 1..y1 {
            writeln!(
                s,
                r##"<circle cx="{}" cy="{}" r="1.5" fill="#b0b0b0"/>"##,
                px(x),
                py(y)
            )
            .unwrap();
        }
    }
    let pts: Vec<String> = v
        .iter()
        .map(|p| format!("{},{}", px(p[0]), py(p[1])))
        .collect();
    writeln!(
        s,
        r#"<polygon points="{}" fill="none" stroke="black" stroke-width="2"/>"#,
        pts.join(" ")
    )
    .unwrap();
    let interior = poly.interior_points();
    for p in poly.lattice_points() {
        if interior.binary_search(p).is_ok() {
            writeln!(
                s,
                r##"<circle cx="{}" cy="{}" r="5" fill="#c0392b"/>"##,
                px(p[0]),
                py(p[1])
            )
            .unwrap();
        } else {
            writeln!(
                s,
                r#"<circle cx="{}" cy="{}" r="4" fill="white" stroke="black" stroke-width="1.5"/>"#,
                px(p[0]),
                py(p[1])
            )
            .unwrap();
        }
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use wpc_core::polygon2d::convex_hull;

    #[test]
    fn unit_triangle_figure() {
        let p = convex_hull(&[[0, 0], [1, 0], [0, 1]]).unwrap();
        let s = render(&p);
        assert!(s.starts_with(r#"<svg xmlns="http://www.w3.org/2000/svg" width="72" height="72""#));
        assert!(s.contains(r#"<polygon points="24,48 48,48 24,24""#));
        assert_eq!(s.matches("r=\"1.5\"").count(), 4);
        assert_eq!(s.matches("r=\"4\"").count(), 3);
        assert_eq!(s.matches("r=\"5\"").count(), 0);
        let big = convex_hull(&[[0, 0], [3, 0], [0, 3]]).unwrap();
        assert_eq!(render(&big).matches("r=\"5\"").count(), 1);
    }
}
