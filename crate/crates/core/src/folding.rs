//! Modular operators and the forward cascaded fold.
//!
//! All remainders live in the half-open interval `[-b/2, b/2)`. The
//! corresponding Doppler interval `(-f_p/2, f_p/2]` follows from
//! `f = -2 v / lambda`.

use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[inline]
fn two<S: Scalar>() -> S {
    S::one() + S::one()
}

fn check_args<S: Scalar>(a: S, b: S) -> Result<()> {
    if b.partial_cmp(&S::zero()) != Some(Ordering::Greater) {
        return Err(Error::domain(format!("modulus must be positive, got {b:?}")));
    }
    if !a.to_f64().is_some_and(f64::is_finite) || !b.to_f64().is_some_and(f64::is_finite) {
        return Err(Error::domain(format!("non-finite operands {a:?} mod {b:?}")));
    }
    Ok(())
}

/// Quotient and absolutely least remainder, with float rounding pushed back
/// inside the principal interval. Caller guarantees `b > 0`.
fn split<S: Scalar>(a: S, b: S) -> (S, S) {
    let mut n = a.floor_div(b);
    let mut r = a - n * b;
    if r < S::zero() {
        n = n - S::one();
        r = r + b;
    } else if r >= b {
        n = n + S::one();
        r = r - b;
    }
    if r + r >= b {
        n = n + S::one();
        r = r - b;
    }
    (n, r)
}

fn to_integer<S: Scalar>(n: S) -> Result<i64> {
    n.to_i64().ok_or_else(|| Error::domain(format!("folding integer {n:?} does not fit in i64")))
}

/// Ambiguous integer `[a]_b`: `floor(a/b)`, plus one when the nonnegative
/// remainder reaches `b/2`.
pub fn bracket_fold<S: Scalar>(a: S, b: S) -> Result<i64> {
    check_args(a, b)?;
    to_integer(split(a, b).0)
}

/// Absolutely least remainder `<a>_b` in `[-b/2, b/2)`, so that
/// `a = [a]_b * b + <a>_b`.
pub fn centered_remainder<S: Scalar>(a: S, b: S) -> Result<S> {
    check_args(a, b)?;
    Ok(split(a, b).1)
}

/// Time- and space-domain blind speeds of one carrier.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModulusPair<S> {
    v_t: S,
    v_s: S,
}

impl<S: Scalar> ModulusPair<S> {
    pub fn new(v_t: S, v_s: S) -> Result<Self> {
        if !(v_t > S::zero() && v_s > S::zero()) {
            return Err(Error::domain(format!("blind speeds must be positive, got v_t={v_t:?}, v_s={v_s:?}")));
        }
        Ok(Self { v_t, v_s })
    }

    /// Time-domain blind speed `lambda * f_p / 2`.
    pub fn v_t(&self) -> S {
        self.v_t
    }

    /// Space-domain blind speed `lambda * v_a / d`.
    pub fn v_s(&self) -> S {
        self.v_s
    }
}

/// `v_t = lambda * f_p / 2`, `v_s = lambda * v_a / d`.
pub fn blind_speeds<S: Scalar>(lambda: S, f_p: S, v_a: S, d: S) -> Result<ModulusPair<S>> {
    for (name, value) in [("lambda", lambda), ("f_p", f_p), ("v_a", v_a), ("d", d)] {
        if value.partial_cmp(&S::zero()) != Some(Ordering::Greater) {
            return Err(Error::domain(format!("{name} must be positive, got {value:?}")));
        }
    }
    ModulusPair::new(lambda * f_p / two(), lambda * v_a / d)
}

/// Outcome of folding a true radial velocity through TDDA then SDDA.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FoldResult<S> {
    /// Velocity after the time-domain fold, in `[-v_t/2, v_t/2)`.
    pub v_time: S,
    /// Velocity after the space-domain fold, in `[-v_s/2, v_s/2)`.
    pub v_space: S,
    pub n_t: i64,
    pub n_s: i64,
}

impl<S: Scalar> FoldResult<S> {
    /// `v_space + n_s * v_s + n_t * v_t`.
    pub fn reconstruct(&self, moduli: &ModulusPair<S>) -> S {
        self.v_space + S::from_i64(self.n_s) * moduli.v_s + S::from_i64(self.n_t) * moduli.v_t
    }
}

/// Cascaded fold: the time-domain remainder is folded again by `v_s`.
pub fn forward_fold<S: Scalar>(v_r: S, moduli: &ModulusPair<S>) -> Result<FoldResult<S>> {
    check_args(v_r, moduli.v_t)?;
    let (n_t, v_time) = split(v_r, moduli.v_t);
    let (n_s, v_space) = split(v_time, moduli.v_s);
    Ok(FoldResult { v_time, v_space, n_t: to_integer(n_t)?, n_s: to_integer(n_s)? })
}

/// Doppler frequency `-2 v_r / lambda` of a radial velocity.
pub fn doppler_of(v_r: f64, lambda: f64) -> f64 {
    -2.0 * v_r / lambda
}
