//! Exact-arithmetic helpers: rationalization of measured ratios, rational
//! lcm/gcd and the integer Chinese remainder map.

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

/// Largest denominator accepted when rationalizing a configuration ratio.
pub const MAX_DENOMINATOR: i64 = 1000;

/// Absolute tolerance between a float and its rational representative.
pub const RATIONAL_TOLERANCE: f64 = 1e-9;

/// Best rational approximation of `x` by continued fractions with a bounded
/// denominator. Fails unless some convergent lies within `tolerance` of `x`.
pub fn rationalize(x: f64, max_denominator: i64, tolerance: f64) -> Result<Rational64> {
    if !x.is_finite() {
        return Err(Error::config(format!("cannot rationalize non-finite value {x}")));
    }
    if x.abs() > (i64::MAX / 4) as f64 {
        return Err(Error::config(format!("value {x} too large to rationalize")));
    }
    // convergents h/k
    let (mut h_prev, mut h) = (1i128, x.floor() as i128);
    let (mut k_prev, mut k) = (0i128, 1i128);
    let mut frac = x - x.floor();
    loop {
        let approx = h as f64 / k as f64;
        if (approx - x).abs() < tolerance {
            return Ok(Rational64::new(h as i64, k as i64));
        }
        if frac.abs() < 1e-15 {
            break;
        }
        let inv = 1.0 / frac;
        let a = inv.floor();
        frac = inv - a;
        let a = a as i128;
        let h_next = a * h + h_prev;
        let k_next = a * k + k_prev;
        if k_next > max_denominator as i128 {
            break;
        }
        (h_prev, h, k_prev, k) = (h, h_next, k, k_next);
    }
    Err(Error::config(format!("{x} is not within {tolerance:e} of a rational with denominator <= {max_denominator}")))
}

/// `rationalize` with the crate-wide denominator and tolerance limits.
pub fn to_exact(x: f64) -> Result<Rational64> {
    rationalize(x, MAX_DENOMINATOR, RATIONAL_TOLERANCE)
}

/// Greatest common divisor of positive rationals: the largest rational of
/// which every input is an integer multiple.
pub fn gcd_rational(values: &[Rational64]) -> Result<Rational64> {
    let (num, den) = fold_positive(values, "gcd")?;
    Ok(Rational64::new(num.iter().fold(0, |g, n| g.gcd(n)), den.iter().fold(1, |l, d| l.lcm(d))))
}

/// Least positive rational that is an integer multiple of every input.
pub fn lcm_rational(values: &[Rational64]) -> Result<Rational64> {
    let (num, den) = fold_positive(values, "lcm")?;
    let mut l = 1i64;
    for n in num {
        let g = l.gcd(&n);
        l = (l / g).checked_mul(n).ok_or_else(|| Error::domain("lcm overflows i64"))?;
    }
    Ok(Rational64::new(l, den.iter().fold(0, |g, d| g.gcd(d))))
}

fn fold_positive(values: &[Rational64], what: &str) -> Result<(Vec<i64>, Vec<i64>)> {
    if values.is_empty() {
        return Err(Error::domain(format!("{what} of an empty list")));
    }
    if let Some(v) = values.iter().find(|v| !v.is_positive()) {
        return Err(Error::domain(format!("{what} requires positive values, got {v}")));
    }
    Ok(values.iter().map(|v| (*v.numer(), *v.denom())).unzip())
}

/// Modular inverse of `a` modulo `m` (`m > 1`), if it exists.
pub fn mod_inverse(a: i128, m: i128) -> Option<i128> {
    let e = a.rem_euclid(m).extended_gcd(&m);
    (e.gcd == 1).then(|| e.x.rem_euclid(m))
}

/// Solve `x = residues[i] (mod moduli[i])` for pairwise-coprime positive
/// moduli. Returns `x` in `[0, prod)` together with `prod`.
pub fn crt(residues: &[i128], moduli: &[i128]) -> Result<(i128, i128)> {
    if residues.len() != moduli.len() || moduli.is_empty() {
        return Err(Error::domain("crt needs one residue per modulus"));
    }
    let mut x = 0i128;
    let mut prod = 1i128;
    for (&r, &m) in residues.iter().zip(moduli) {
        if m <= 0 {
            return Err(Error::domain(format!("crt modulus must be positive, got {m}")));
        }
        // x + prod * t = r (mod m)
        let inv = if m == 1 {
            0
        } else {
            mod_inverse(prod, m).ok_or_else(|| Error::config(format!("moduli not pairwise coprime at {m}")))?
        };
        let t = ((r - x).rem_euclid(m) * inv).rem_euclid(m);
        x += prod * t;
        prod = prod.checked_mul(m).ok_or_else(|| Error::domain("crt modulus product overflows"))?;
        x = x.rem_euclid(prod);
    }
    debug_assert!(!prod.is_zero());
    Ok((x, prod))
}
