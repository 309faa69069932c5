//! Integer and rational helpers: residues, Gauss carries, Bezout data and
//! reduction modulo 1.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{AtlasError, Result};

pub type Int = BigInt;
pub type Rat = BigRational;

pub fn int(v: i64) -> Int {
    Int::from(v)
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

pub fn rat_int(v: &Int) -> Rat {
    Rat::from_integer(v.clone())
}

/// Parses `"n/d"`, `"n"` or `"-n/d"`.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let bad = || AtlasError::Input(format!("malformed rational {s:?}"));
    let t = s.trim();
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: Int = n.parse().map_err(|_| bad())?;
    let d: Int = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rat::new(n, d))
}

/// Canonical `"n/d"` rendering (always with an explicit denominator).
pub fn fmt_rat(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn is_integer(r: &Rat) -> bool {
    r.denom().is_one()
}

/// Representative of `r` in `[0, m)`.
pub fn reduce_mod(r: &Rat, m: &Rat) -> Rat {
    let q = (r / m).floor();
    r - q * m
}

pub fn frac(r: &Rat) -> Rat {
    r - r.floor()
}

/// `{i}_p`, the Euclidean remainder in `0..p`.
pub fn residue(i: &Int, p: &Int) -> Int {
    i.mod_floor(p)
}

pub fn gauss_residue(i: &Int, p: &Int) -> Result<Int> {
    if *p < int(2) {
        return Err(AtlasError::Domain(format!("gauss_residue needs p >= 2, got {p}")));
    }
    Ok(residue(i, p))
}

/// Carry `{i}_p + {j}_p - {i+j}_p`, which is `0` or `p`. Valid for `p >= 1`.
pub fn carry(i: &Int, j: &Int, p: &Int) -> Int {
    residue(i, p) + residue(j, p) - residue(&(i + j), p)
}

pub fn gauss_cocycle(i: &Int, j: &Int, p: &Int) -> Result<Int> {
    if *p < int(2) {
        return Err(AtlasError::Domain(format!("gauss_cocycle needs p >= 2, got {p}")));
    }
    Ok(carry(i, j, p))
}

/// Extended gcd: `(g, x, y)` with `a x + b y = g`, `g >= 0`.
pub fn xgcd(a: &Int, b: &Int) -> (Int, Int, Int) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// `(d, u, v)` with `d = gcd(p, q)` and `p u - q v = d`. The solution is
/// made unique by taking the least `u >= 1` (so `u = 1` when `q | p`).
pub fn euclid_pair(p: &Int, q: &Int) -> Result<(Int, Int, Int)> {
    if *p < Int::one() || q.is_negative() {
        return Err(AtlasError::Domain(format!("euclid_pair needs p >= 1, q >= 0, got ({p}, {q})")));
    }
    let (d, x, y) = xgcd(p, q);
    // p x + q y = d; all solutions are (x + k q/d, -y + k p/d).
    let step = q / &d;
    let (mut u, mut v) = (x, -y);
    if step.is_zero() {
        return Ok((d, Int::one(), Int::zero()));
    }
    let k = (&u - Int::one()).div_floor(&step);
    u -= &k * &step;
    v -= &k * (p / &d);
    Ok((d, u, v))
}

pub fn gcd(a: &Int, b: &Int) -> Int {
    a.gcd(b)
}

pub fn gcd_all<'a>(xs: impl IntoIterator<Item = &'a Int>) -> Int {
    xs.into_iter().fold(Int::zero(), |g, x| g.gcd(x))
}

pub fn lcm(a: &Int, b: &Int) -> Int {
    a.lcm(b)
}

pub fn to_usize(v: &Int) -> Option<usize> {
    v.to_usize()
}

/// Binomial `C(x, k)` for an integer `x`, any sign.
pub fn binom(x: &Int, k: u32) -> Int {
    let mut num = Int::one();
    for t in 0..k {
        num *= x - Int::from(t);
    }
    let mut den = Int::one();
    for t in 2..=k {
        den *= Int::from(t);
    }
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residues_and_carries() {
        assert_eq!(gauss_residue(&int(7), &int(5)).unwrap(), int(2));
        assert_eq!(gauss_residue(&int(0), &int(5)).unwrap(), int(0));
        assert_eq!(gauss_residue(&int(-1), &int(5)).unwrap(), int(4));
        assert!(gauss_residue(&int(3), &int(1)).is_err());
        assert_eq!(gauss_cocycle(&int(3), &int(4), &int(5)).unwrap(), int(5));
        assert_eq!(gauss_cocycle(&int(1), &int(2), &int(5)).unwrap(), int(0));
        assert_eq!(gauss_cocycle(&int(0), &int(9), &int(5)).unwrap(), int(0));
    }

    #[test]
    fn euclid_examples() {
        assert_eq!(euclid_pair(&int(4), &int(2)).unwrap(), (int(2), int(1), int(1)));
        assert_eq!(euclid_pair(&int(7), &int(0)).unwrap(), (int(7), int(1), int(0)));
        assert_eq!(euclid_pair(&int(3), &int(2)).unwrap(), (int(1), int(1), int(1)));
        assert!(euclid_pair(&int(0), &int(2)).is_err());
    }

    #[test]
    fn euclid_least_positive_u_by_search() {
        for p in 1..=9i64 {
            for q in 0..=9i64 {
                let (d, u, v) = euclid_pair(&int(p), &int(q)).unwrap();
                assert_eq!(int(p) * &u - int(q) * &v, d);
                let d = d.to_i64().unwrap();
                let best = (1i64..=20)
                    .find(|uu| {
                        let rest = p * uu - d;
                        if q == 0 { rest == 0 } else { rest % q == 0 }
                    })
                    .unwrap();
                assert_eq!(u, int(best), "p={p} q={q}");
            }
        }
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rat("-2/4").unwrap(), rat(-1, 2));
        assert_eq!(parse_rat("3").unwrap(), rat(3, 1));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
        assert_eq!(fmt_rat(&rat(6, 3)), "2/1");
        assert_eq!(reduce_mod(&rat(-1, 2), &rat(2, 1)), rat(3, 2));
    }

    #[test]
    fn binomials() {
        assert_eq!(binom(&int(5), 2), int(10));
        assert_eq!(binom(&int(-1), 2), int(1));
        assert_eq!(binom(&int(3), 0), int(1));
    }
}
