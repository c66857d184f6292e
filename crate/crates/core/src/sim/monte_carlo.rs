use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::enumerator::determinable_size_of;
use crate::error::{Error, Result};
use crate::folding::forward_fold;
use crate::solvers::{search_retrieve, FoldedObservation};
use crate::system::RadarConfig;
use num_traits::ToPrimitive;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RmsePoint {
    pub xi_e: f64,
    /// RMSE over the trials the solver resolved (m/s).
    pub rmse: f64,
    pub trials: usize,
    /// Trials reported as unresolvable (no solution or ambiguous).
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RmseCurve {
    pub points: Vec<RmsePoint>,
}

impl RmseCurve {
    /// CSV with header `xi_e,rmse,trials,failures`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("xi_e,rmse,trials,failures\n");
        for p in &self.points {
            out.push_str(&format!("{},{},{},{}\n", p.xi_e, p.rmse, p.trials, p.failures));
        }
        out
    }
}

/// `start, start - step, ..., 0` (or up to `start` when `step` is negative).
pub fn xi_grid(start: f64, step: f64) -> Vec<f64> {
    let n = (start / step.abs()).round() as usize;
    (0..=n).map(|i| ((n - i) as f64 * step.abs() * 1e9).round() / 1e9).collect()
}

fn trial_rng(seed: u64, point: usize, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((point as u64) << 32) | trial as u64);
    rng
}

/// Retrieval accuracy of the searching solver under uniform remainder
/// errors in `[-xi_e, xi_e]`, with true velocities drawn uniformly over
/// the determinable range. Deterministic for a given seed.
pub fn monte_carlo_rmse(cfg: &RadarConfig, xi_grid: &[f64], trials: usize, seed: u64) -> Result<RmseCurve> {
    cfg.validate()?;
    if trials == 0 {
        return Err(Error::domain("need at least one trial"));
    }
    if let Some(x) = xi_grid.iter().find(|x| !(x.is_finite() && **x >= 0.0)) {
        return Err(Error::domain(format!("error bounds must be non-negative, got {x}")));
    }
    let v_range = determinable_size_of(cfg)?.size.to_f64().unwrap_or(f64::NAN);
    let moduli = cfg.moduli()?;

    let points = xi_grid
        .iter()
        .enumerate()
        .map(|(point, &xi)| {
            let outcomes = (0..trials)
                .into_par_iter()
                .map(|trial| {
                    let mut rng = trial_rng(seed, point, trial);
                    let v_r = rng.random_range(-v_range / 2.0..v_range / 2.0);
                    let v_space = moduli
                        .iter()
                        .map(|m| {
                            let e = if xi > 0.0 { rng.random_range(-xi..=xi) } else { 0.0 };
                            forward_fold(v_r, m).map(|f| f.v_space + e)
                        })
                        .collect::<Result<Vec<_>>>()?;
                    let obs = FoldedObservation::new(v_space).with_xi_e(xi);
                    Ok(match search_retrieve(&obs, cfg, v_range) {
                        Ok(r) => Some((r.v_hat - v_r).powi(2)),
                        Err(Error::NoSolution { .. } | Error::Ambiguous { .. }) => None,
                        Err(e) => return Err(e),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let (sum, ok) = outcomes.iter().flatten().fold((0.0, 0usize), |(s, n), e| (s + e, n + 1));
            Ok(RmsePoint {
                xi_e: xi,
                rmse: if ok > 0 { (sum / ok as f64).sqrt() } else { f64::NAN },
                trials,
                failures: trials - ok,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RmseCurve { points })
}
