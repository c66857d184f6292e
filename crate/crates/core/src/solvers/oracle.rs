//! Exhaustive-scan reference solver.

use rayon::prelude::*;

use super::{integer_ranges, AmbiguityIntegers, FoldedObservation, Method, RetrievalResult, WavelengthIntegers};
use crate::error::{Error, Result};
use crate::folding::{centered_remainder, forward_fold, ModulusPair};
use crate::system::RadarConfig;

const GOLDEN_ITERATIONS: usize = 80;

fn score(v: f64, obs: &[f64], moduli: &[ModulusPair<f64>]) -> f64 {
    obs.iter()
        .zip(moduli)
        .map(|(&o, m)| {
            let folded = forward_fold(v, m).map(|f| f.v_space).unwrap_or(f64::NAN);
            centered_remainder(folded - o, m.v_s()).map_or(f64::INFINITY, f64::abs)
        })
        .fold(0.0, f64::max)
}

/// Golden-section minimization of `f` on `[a, b]`.
fn golden<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..GOLDEN_ITERATIONS {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Scans `[-v_range/2, v_range/2)` on a `step` grid for the velocity whose
/// cascaded folds best match every observation (worst-carrier circular
/// distance), then refines the best grid point locally.
///
/// Folding integers are the labels that place each observation closest to
/// the estimate; `residual` is the attained score.
pub fn brute_force_oracle(
    obs: &FoldedObservation,
    cfg: &RadarConfig,
    v_range: f64,
    step: f64,
) -> Result<RetrievalResult> {
    cfg.validate()?;
    obs.check(cfg.lambdas.len())?;
    if !(step.is_finite() && step > 0.0) {
        return Err(Error::domain(format!("step must be positive, got {step}")));
    }
    if !(v_range.is_finite() && v_range > 0.0) {
        return Err(Error::domain(format!("v_range must be positive, got {v_range}")));
    }
    let moduli = cfg.moduli()?;
    let lo = -v_range / 2.0;
    let hi = v_range / 2.0;
    let n = (v_range / step).ceil() as usize;
    let (_, best) = (0..n)
        .into_par_iter()
        .map(|j| (score(lo + j as f64 * step, &obs.v_space, &moduli), j))
        .reduce(|| (f64::INFINITY, usize::MAX), |a, b| if b.0 < a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a });
    let center = lo + best as f64 * step;
    let refined = golden(
        |v| score(v, &obs.v_space, &moduli),
        (center - step).max(lo),
        (center + step).min(hi - hi.abs().max(1.0) * 1e-12),
    );
    let (v_hat, residual) = {
        let (s_c, s_r) = (score(center, &obs.v_space, &moduli), score(refined, &obs.v_space, &moduli));
        if s_r <= s_c {
            (refined, s_r)
        } else {
            (center, s_c)
        }
    };

    let mut ints = Vec::with_capacity(moduli.len());
    let mut v_time = Vec::with_capacity(moduli.len());
    for (m, &o) in moduli.iter().zip(&obs.v_space) {
        let (nt_range, ns_range) = integer_ranges(m, v_range)?;
        let mut best: Option<(f64, i64, i64)> = None;
        for n_t in nt_range {
            for n_s in ns_range.clone() {
                let dist = (o + n_s as f64 * m.v_s() + n_t as f64 * m.v_t() - v_hat).abs();
                if best.is_none_or(|(d, _, _)| dist < d) {
                    best = Some((dist, n_t, n_s));
                }
            }
        }
        let (_, n_t, n_s) = best.expect("integer ranges are never empty");
        ints.push(WavelengthIntegers { n_t, n_s, n_st: None });
        v_time.push(v_hat - n_t as f64 * m.v_t());
    }
    Ok(RetrievalResult { v_hat, integers: AmbiguityIntegers(ints), method: Method::Oracle, residual, v_time })
}
