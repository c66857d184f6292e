//! Radial-velocity retrieval from multi-wavelength ambiguous measurements.

mod crt;
mod oracle;
mod search;

use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::folding::{bracket_fold, forward_fold, ModulusPair};

pub use crt::{robust_crt, solve_case1, solve_case2, theorem1_bound, theorem1_solve};
pub use oracle::brute_force_oracle;
pub use search::search_retrieve;

/// Error bound assumed when an observation does not state one (m/s).
pub const DEFAULT_XI_E: f64 = 0.5;

/// Measured space-domain velocities, one per carrier, with a common error
/// bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FoldedObservation {
    pub v_space: Vec<f64>,
    #[serde(default = "default_xi_e")]
    pub xi_e: f64,
}

fn default_xi_e() -> f64 {
    DEFAULT_XI_E
}

impl FoldedObservation {
    pub fn new(v_space: Vec<f64>) -> Self {
        Self { v_space, xi_e: DEFAULT_XI_E }
    }

    pub fn with_xi_e(mut self, xi_e: f64) -> Self {
        self.xi_e = xi_e;
        self
    }

    pub(crate) fn check(&self, carriers: usize) -> Result<()> {
        if self.v_space.len() != carriers {
            return Err(Error::domain(format!("expected {carriers} observations, got {}", self.v_space.len())));
        }
        if let Some(v) = self.v_space.iter().find(|v| !v.is_finite()) {
            return Err(Error::domain(format!("non-finite observation {v}")));
        }
        if !(self.xi_e.is_finite() && self.xi_e >= 0.0) {
            return Err(Error::domain(format!("xi_e must be non-negative, got {}", self.xi_e)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedFormCrt,
    Theorem1Crt,
    Search,
    Oracle,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::ClosedFormCrt => "closed_form_crt",
            Method::Theorem1Crt => "theorem1_crt",
            Method::Search => "search",
            Method::Oracle => "oracle",
        })
    }
}

/// Folding integers of one carrier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WavelengthIntegers {
    pub n_t: i64,
    pub n_s: i64,
    /// `n_s + k n_t`, defined when `V_T = k V_S`.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n_st: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AmbiguityIntegers(pub Vec<WavelengthIntegers>);

impl AmbiguityIntegers {
    /// `(n_t, n_s)` per carrier, flattened in carrier order.
    pub fn flat(&self) -> Vec<i64> {
        self.0.iter().flat_map(|w| [w.n_t, w.n_s]).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RetrievalResult {
    pub v_hat: f64,
    pub integers: AmbiguityIntegers,
    pub method: Method,
    /// Largest per-carrier disagreement with `v_hat` (m/s).
    pub residual: f64,
    /// Velocity after the time-domain fold for each carrier, used for
    /// image relocation.
    pub v_time: Vec<f64>,
}

/// Admissible `(N_T, N_S)` ranges of one carrier for true velocities in
/// `[-v_range/2, v_range/2)`.
pub fn integer_ranges(moduli: &ModulusPair<f64>, v_range: f64) -> Result<(RangeInclusive<i64>, RangeInclusive<i64>)> {
    if !(v_range.is_finite() && v_range > 0.0) {
        return Err(Error::domain(format!("v_range must be positive, got {v_range}")));
    }
    let (v_t, v_s) = (moduli.v_t(), moduli.v_s());
    let nt = bracket_fold(-v_range / 2.0, v_t)?..=bracket_fold(below(v_range / 2.0), v_t)?;
    let ns = bracket_fold(-v_t / 2.0, v_s)?..=bracket_fold(below(v_t / 2.0), v_s)?;
    Ok((nt, ns))
}

/// Largest representable float strictly below `x` on the scale of `x`.
fn below(x: f64) -> f64 {
    x - x.abs().max(1.0) * 1e-12
}

/// Integers and time-domain remainders obtained by folding an estimate.
fn fold_estimate(v_hat: f64, moduli: &[ModulusPair<f64>], k: Option<i64>) -> Result<(AmbiguityIntegers, Vec<f64>)> {
    let mut ints = Vec::with_capacity(moduli.len());
    let mut v_time = Vec::with_capacity(moduli.len());
    for m in moduli {
        let f = forward_fold(v_hat, m)?;
        ints.push(WavelengthIntegers { n_t: f.n_t, n_s: f.n_s, n_st: k.map(|k| f.n_s + k * f.n_t) });
        v_time.push(f.v_time);
    }
    Ok((AmbiguityIntegers(ints), v_time))
}
