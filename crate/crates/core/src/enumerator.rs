//! Determinable velocity size of a multi-carrier system by exhaustive walk.
//!
//! Velocities and blind speeds are scaled to integers by the lcm of their
//! denominators, so residue vectors are compared exactly.

use std::collections::HashMap;

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::folding::{forward_fold, ModulusPair};
use crate::system::RadarConfig;

pub use crate::number::lcm_rational;

fn as_f64<S: Serializer>(v: &Rational64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(v.to_f64().unwrap_or(f64::NAN))
}

fn pair_as_f64<S: Serializer>(v: &(Rational64, Rational64), s: S) -> Result<S::Ok, S::Error> {
    let pair = (v.0.to_f64().unwrap_or(f64::NAN), v.1.to_f64().unwrap_or(f64::NAN));
    pair.serialize(s)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnumerationReport {
    #[serde(serialize_with = "as_f64")]
    pub size: Rational64,
    /// `lcm(V_S) / q`.
    #[serde(serialize_with = "as_f64")]
    pub v_lb: Rational64,
    /// `lcm(V_T)`.
    #[serde(serialize_with = "as_f64")]
    pub v_ub: Rational64,
    /// The first velocity whose residue vector repeats, and the earlier
    /// velocity it repeats.
    #[serde(serialize_with = "pair_as_f64")]
    pub collision_pair: (Rational64, Rational64),
}

/// Walks `0, -s, s, -2s, 2s, ...` until two velocities share a residue
/// vector; the determinable size is twice the magnitude of the later one,
/// capped at the residue period `lcm(V_T)` (reached first when that period
/// is an odd number of steps).
pub fn determinable_size(v_t: &[Rational64], v_s: &[Rational64], step: Rational64) -> Result<EnumerationReport> {
    if v_t.len() != v_s.len() || v_t.is_empty() {
        return Err(Error::domain("need one (V_T, V_S) pair per carrier"));
    }
    if step <= Rational64::from_integer(0) {
        return Err(Error::domain(format!("step must be positive, got {step}")));
    }
    let ratio = v_t[0] / v_s[0];
    if v_t.iter().zip(v_s).any(|(t, s)| *t / *s != ratio) {
        return Err(Error::domain("carriers do not share a common V_T/V_S ratio"));
    }
    let v_ub = lcm_rational(v_t)?;
    let v_lb = lcm_rational(v_s)? / *ratio.denom();

    let scale = v_t.iter().chain(v_s).chain(std::iter::once(&step)).fold(1i64, |l, r| l.lcm(r.denom()));
    let int = |r: &Rational64| -> i128 { (*r.numer() as i128) * (scale / *r.denom()) as i128 };
    let moduli = v_t.iter().zip(v_s).map(|(t, s)| ModulusPair::new(int(t), int(s))).collect::<Result<Vec<_>>>()?;
    let step_i = int(&step);
    let residues = |k: i64| -> Result<Vec<i128>> {
        moduli.iter().map(|m| forward_fold(k as i128 * step_i, m).map(|f| f.v_space)).collect()
    };

    let cap = ((v_ub / step) / 2).ceil().to_integer() + 1;
    let mut seen: HashMap<Vec<i128>, i64> = HashMap::new();
    seen.insert(residues(0)?, 0);
    for n in 1..=cap {
        for k in [-n, n] {
            if let Some(&earlier) = seen.get(&residues(k)?) {
                return Ok(EnumerationReport {
                    size: (step * (2 * n)).min(v_ub),
                    v_lb,
                    v_ub,
                    collision_pair: (step * k, step * earlier),
                });
            }
            seen.insert(residues(k)?, k);
        }
    }
    Err(Error::domain(format!("no residue collision within {cap} steps")))
}

/// Enumeration with a 1 m/s step over the exact blind speeds of `cfg`.
pub fn determinable_size_of(cfg: &RadarConfig) -> Result<EnumerationReport> {
    let moduli = cfg.exact_moduli()?;
    let v_t: Vec<_> = moduli.iter().map(|m| m.v_t()).collect();
    let v_s: Vec<_> = moduli.iter().map(|m| m.v_s()).collect();
    determinable_size(&v_t, &v_s, Rational64::from_integer(1))
}

/// One row of a wavelength-pair sweep, in CSV column order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub lambda1: f64,
    pub lambda2: f64,
    pub vt1: f64,
    pub vs1: f64,
    pub vt2: f64,
    pub vs2: f64,
    pub v_lb: f64,
    pub size: f64,
    pub v_ub: f64,
}

pub fn size_sweep(cfg: &RadarConfig, lambda_pairs: &[(f64, f64)]) -> Result<Vec<SweepRow>> {
    lambda_pairs
        .par_iter()
        .map(|&(l1, l2)| {
            let pair_cfg = cfg.with_lambdas(vec![l1, l2]);
            pair_cfg.validate()?;
            let moduli = pair_cfg.exact_moduli()?;
            let report = determinable_size_of(&pair_cfg)?;
            let f = |r: Rational64| r.to_f64().unwrap_or(f64::NAN);
            Ok(SweepRow {
                lambda1: l1,
                lambda2: l2,
                vt1: f(moduli[0].v_t()),
                vs1: f(moduli[0].v_s()),
                vt2: f(moduli[1].v_t()),
                vs2: f(moduli[1].v_s()),
                v_lb: f(report.v_lb),
                size: f(report.size),
                v_ub: f(report.v_ub),
            })
        })
        .collect()
}

/// The ten wavelength pairs `(0.02, 0.03) ... (0.11, 0.12)`.
pub fn standard_pairs() -> Vec<(f64, f64)> {
    (2..=11).map(|i| (i as f64 / 100.0, (i + 1) as f64 / 100.0)).collect()
}
