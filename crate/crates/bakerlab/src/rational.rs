//! Small helpers on exact rationals.
//!
//! All lattice geometry in this crate (comb spacings, offsets, step phases,
//! θ components) is exact `Rational64` arithmetic; floats appear only in
//! amplitudes and kernel evaluations.

use crate::error::BakerError;
use num_rational::Rational64;
use num_traits::{Signed, Zero};

pub type Rat = Rational64;

/// Shorthand constructor. Panics on a zero denominator.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(n, d)
}

/// Reduce into `[0, 1)`.
pub fn mod_one(r: Rat) -> Rat {
    r - r.floor()
}

/// Reduce into `[0, m)` for `m > 0`.
pub fn rat_mod(r: Rat, m: Rat) -> Rat {
    r - (r / m).floor() * m
}

/// Nonnegative gcd with the convention `gcd(x, 0) = |x|`.
///
/// For `a = p1/q1`, `b = p2/q2` this is `gcd(p1*q2, p2*q1) / (q1*q2)`:
/// the largest rational `g` with `a/g` and `b/g` both integers.
pub fn rat_gcd(a: Rat, b: Rat) -> Rat {
    let a = a.abs();
    let b = b.abs();
    if a.is_zero() {
        return b;
    }
    if b.is_zero() {
        return a;
    }
    let q = a.denom() * b.denom();
    let g = gcd_i64(a.numer() * b.denom(), b.numer() * a.denom());
    Rat::new(g, q)
}

pub fn rat_lcm(a: Rat, b: Rat) -> Rat {
    if a.is_zero() || b.is_zero() {
        return Rat::zero();
    }
    (a * b).abs() / rat_gcd(a, b)
}

pub fn gcd_i64(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Extended gcd: returns `(g, u, v)` with `u*a + v*b = g = gcd(a, b)`, `g >= 0`.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        if a < 0 {
            return (-a, -1, 0);
        }
        return (a, 1, 0);
    }
    let (g, u, v) = ext_gcd(b, a % b);
    (g, v, u - (a / b) * v)
}

pub fn rat_to_f64(r: Rat) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Parse `"p/q"` or a bare integer `"p"`.
pub fn parse_rat(s: &str) -> Result<Rat, BakerError> {
    let s = s.trim();
    let bad = || BakerError::Parse(format!("invalid rational {s:?}, expected \"p/q\""));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: i64 = n.trim().parse().map_err(|_| bad())?;
            let d: i64 = d.trim().parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(BakerError::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Rat::new(n, d))
        }
        None => {
            let n: i64 = s.parse().map_err(|_| bad())?;
            Ok(Rat::from_integer(n))
        }
    }
}

/// Canonical `"p/q"` string (reduced, denominator always printed).
pub fn rat_to_string(r: Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// All positive divisors of `n`, ascending.
pub fn divisors(n: i64) -> Vec<i64> {
    let n = n.abs().max(1);
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mod_one_negative() {
        assert_eq!(mod_one(rat(-1, 4)), rat(3, 4));
        assert_eq!(mod_one(rat(9, 4)), rat(1, 4));
        assert_eq!(mod_one(rat(0, 1)), rat(0, 1));
    }

    #[test]
    fn gcd_of_rationals() {
        assert_eq!(rat_gcd(rat(1, 2), rat(2, 1)), rat(1, 2));
        assert_eq!(rat_gcd(rat(1, 4), rat(1, 6)), rat(1, 12));
        assert_eq!(rat_gcd(rat(3, 4), rat(0, 1)), rat(3, 4));
        // both arguments divisible by the gcd
        let g = rat_gcd(rat(5, 6), rat(3, 8));
        assert!((rat(5, 6) / g).is_integer());
        assert!((rat(3, 8) / g).is_integer());
    }

    #[test]
    fn ext_gcd_identity() {
        for a in -12..=12i64 {
            for b in -12..=12i64 {
                let (g, u, v) = ext_gcd(a, b);
                assert_eq!(g, gcd_i64(a, b));
                assert_eq!(u * a + v * b, g);
            }
        }
    }

    #[test]
    fn parse_and_print() {
        assert_eq!(parse_rat("3/4").unwrap(), rat(3, 4));
        assert_eq!(parse_rat("2").unwrap(), rat(2, 1));
        assert_eq!(parse_rat("-1/2").unwrap(), rat(-1, 2));
        assert_eq!(rat_to_string(rat(2, 4)), "1/2");
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
    }

    #[test]
    fn divisors_of_12() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
    }
}
