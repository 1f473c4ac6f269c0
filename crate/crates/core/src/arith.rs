//! Small exact-arithmetic helpers shared by the geometry modules.

use num_integer::Integer;
use num_rational::Ratio;

use crate::error::{Error, Result};

pub type Rational = Ratio<i128>;

pub fn gcd(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

pub fn lcm(a: i64, b: i64) -> i64 {
    a.lcm(&b)
}

/// Returns `(g, s, t)` with `s*a + t*b = g = gcd(a, b) >= 0`.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let e = a.extended_gcd(&b);
    if e.gcd < 0 {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// Floor division for a positive divisor.
pub fn div_floor(a: i64, b: i64) -> i64 {
    Integer::div_floor(&a, &b)
}

pub fn div_ceil(a: i64, b: i64) -> i64 {
    -Integer::div_floor(&-a, &b)
}

fn mul(a: i128, b: i128) -> Result<i128> {
    a.checked_mul(b).ok_or(Error::Overflow("determinant"))
}

fn add(a: i128, b: i128) -> Result<i128> {
    a.checked_add(b).ok_or(Error::Overflow("determinant"))
}

fn sub(a: i128, b: i128) -> Result<i128> {
    a.checked_sub(b).ok_or(Error::Overflow("determinant"))
}

/// Overflow-checked 2x2 determinant.
pub fn det2(a: i128, b: i128, c: i128, d: i128) -> Result<i128> {
    sub(mul(a, d)?, mul(b, c)?)
}

/// Overflow-checked determinant of the 3x3 matrix with the given rows,
/// by cofactor expansion along the first row.
pub fn det3(rows: [[i64; 3]; 3]) -> Result<i128> {
    let m = rows.map(|r| r.map(i128::from));
    let c0 = det2(m[1][1], m[1][2], m[2][1], m[2][2])?;
    let c1 = det2(m[1][0], m[1][2], m[2][0], m[2][2])?;
    let c2 = det2(m[1][0], m[1][1], m[2][0], m[2][1])?;
    add(
        sub(mul(m[0][0], c0)?, mul(m[0][1], c1)?)?,
        mul(m[0][2], c2)?,
    )
}

/// Exact inverse of an integer 3x3 matrix, or `None` if singular.
pub fn inverse3(rows: [[i64; 3]; 3]) -> Result<Option<[[Rational; 3]; 3]>> {
    let det = det3(rows)?;
    if det == 0 {
        return Ok(None);
    }
    let m = rows.map(|r| r.map(i128::from));
    let mut inv = [[Rational::from_integer(0); 3]; 3];
    for (i, row) in inv.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            // adjugate: inv[i][j] = cofactor(j, i) / det
            let (r0, r1) = others(j);
            let (c0, c1) = others(i);
            let minor = det2(m[r0][c0], m[r0][c1], m[r1][c0], m[r1][c1])?;
            let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
            *entry = Rational::new(sign * minor, det);
        }
    }
    Ok(Some(inv))
}

fn others(i: usize) -> (usize, usize) {
    match i {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    }
}

/// Formats a rational as `p` or `p/q`.
pub fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::InvalidInput(format!("not a rational number: {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: i128 = p.trim().parse().map_err(|_| bad())?;
            let q: i128 = q.trim().parse().map_err(|_| bad())?;
            if q == 0 {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ext_gcd_bezout() {
        for (a, b) in [(3, 5), (-4, 6), (0, -7), (12, 0), (-9, -6)] {
            let (g, s, t) = ext_gcd(a, b);
            assert_eq!(g, gcd(a, b));
            assert_eq!(s * a + t * b, g);
        }
    }

    #[test]
    fn det3_by_hand() {
        assert_eq!(det3([[7, 0, 0], [1, 2, 0], [1, 0, 3]]).unwrap(), 42);
        assert_eq!(det3([[4, 1, 0], [2, 1, 1], [1, 2, 0]]).unwrap(), -7);
        assert_eq!(det3([[1, 2, 3], [1, 2, 3], [0, 1, 1]]).unwrap(), 0);
    }

    #[test]
    fn det3_overflow_is_reported() {
        let big = i64::MAX;
        let m = [[big, big, 0], [0, big, big], [big, 0, big]];
        assert_eq!(det3(m), Err(Error::Overflow("determinant")));
    }

    #[test]
    fn inverse_times_matrix_is_identity() {
        let m = [[4, 1, 0], [2, 1, 1], [1, 2, 0]];
        let inv = inverse3(m).unwrap().unwrap();
        for (i, row) in m.iter().enumerate() {
            for j in 0..3 {
                let s: Rational = row
                    .iter()
                    .zip(&inv)
                    .map(|(&a, inv_row)| Rational::from_integer(a as i128) * inv_row[j])
                    .sum();
                assert_eq!(s, Rational::from_integer((i == j) as i128));
            }
        }
        assert!(inverse3([[1, 1, 1], [2, 2, 2], [0, 1, 0]])
            .unwrap()
            .is_none());
    }

    #[test]
    fn rational_text_round_trip() {
        for s in ["7", "-3/4", "0"] {
            assert_eq!(fmt_rational(&parse_rational(s).unwrap()), s);
        }
        assert_eq!(fmt_rational(&parse_rational("6/4").unwrap()), "3/2");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}
