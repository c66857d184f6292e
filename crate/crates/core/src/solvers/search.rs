//! Searching solver for the double-remainder problem.

use std::collections::BTreeSet;

use super::{integer_ranges, AmbiguityIntegers, FoldedObservation, Method, RetrievalResult, WavelengthIntegers};
use crate::error::{Error, IntegerSet, Result};
use crate::folding::ModulusPair;
use crate::system::{classify_case, RadarConfig};

/// Objective values within this distance of the minimum are ties (m/s).
pub const TIE_TOLERANCE: f64 = 1e-6;

fn slack(scale: f64) -> f64 {
    1e-9 * scale.abs().max(1.0)
}

#[derive(Debug, Clone, Copy)]
struct Tuple {
    nt1: i64,
    ns1: i64,
    nti: i64,
    nsi: i64,
    recon1: f64,
    reconi: f64,
    objective: f64,
}

struct Carrier {
    obs: f64,
    v_t: f64,
    v_s: f64,
    nt: Vec<i64>,
    ns: Vec<i64>,
}

impl Carrier {
    /// `(n_t, n_s, reconstruction)` for every integer pair whose
    /// time-domain remainder is consistent with the error bound.
    fn admissible(&self, xi: f64) -> Vec<(i64, i64, f64)> {
        let eps = slack(self.v_t);
        let (lo, hi) = (-self.v_t / 2.0 - xi - eps, self.v_t / 2.0 + xi + eps);
        let mut out = Vec::new();
        for &ns in &self.ns {
            let v_time = self.obs + ns as f64 * self.v_s;
            if v_time < lo || v_time >= hi {
                continue;
            }
            for &nt in &self.nt {
                out.push((nt, ns, v_time + nt as f64 * self.v_t));
            }
        }
        out
    }

    /// Velocities whose time-domain fold uses `n_t`.
    fn time_window(&self, n_t: i64) -> (f64, f64) {
        let c = n_t as f64 * self.v_t;
        (c - self.v_t / 2.0, c + self.v_t / 2.0)
    }
}

/// Smallest worst-case distance to the reconstructions over velocities in
/// the common time window: the exact error a tuple needs to be explained.
fn minimax(windows: &[(f64, f64)], recons: &[f64]) -> f64 {
    let lo = windows.iter().map(|w| w.0).fold(f64::NEG_INFINITY, f64::max);
    let hi = windows.iter().map(|w| w.1).fold(f64::INFINITY, f64::min);
    if lo >= hi + slack(hi) {
        return f64::INFINITY;
    }
    let r_lo = recons.iter().copied().fold(f64::INFINITY, f64::min);
    let r_hi = recons.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let v = (0.5 * (r_lo + r_hi)).clamp(lo, hi);
    (v - r_lo).abs().max((r_hi - v).abs())
}

#[derive(Debug, Clone, Copy, Default)]
struct Filter {
    /// Drop tuples whose pairwise estimate leaves `[-h, h)`.
    half_range: Option<f64>,
    /// Rank tuples by the exact bounded-error score instead of the
    /// reconstruction disagreement, keeping only those within the bound.
    exact: bool,
}

/// Argmin set between carrier 1 and `ci`.
fn argmin_set(c1: &Carrier, ci: &Carrier, xi: f64, filter: Filter) -> Vec<Tuple> {
    let first = c1.admissible(xi);
    let other = ci.admissible(xi);
    let mut tuples = Vec::with_capacity(first.len() * other.len());
    for &(nt1, ns1, recon1) in &first {
        for &(nti, nsi, reconi) in &other {
            if let Some(h) = filter.half_range {
                let mid = 0.5 * (recon1 + reconi);
                if mid < -h || mid >= h {
                    continue;
                }
            }
            let objective = if filter.exact {
                let score = minimax(&[c1.time_window(nt1), ci.time_window(nti)], &[recon1, reconi]);
                if score > xi + slack(xi) {
                    continue;
                }
                score
            } else {
                (reconi - recon1).abs()
            };
            tuples.push(Tuple { nt1, ns1, nti, nsi, recon1, reconi, objective });
        }
    }
    let best = tuples.iter().map(|t| t.objective).fold(f64::INFINITY, f64::min);
    tuples.retain(|t| t.objective <= best + TIE_TOLERANCE);
    tuples.sort_by_key(|t| (t.nt1, t.ns1, t.nti, t.nsi));
    tuples
}

struct Resolved {
    first: (i64, i64),
    rest: Vec<Tuple>,
}

impl Resolved {
    fn recons(&self) -> Vec<f64> {
        std::iter::once(self.rest[0].recon1).chain(self.rest.iter().map(|t| t.reconi)).collect()
    }

    fn time_integers(&self) -> Vec<i64> {
        std::iter::once(self.first.0).chain(self.rest.iter().map(|t| t.nti)).collect()
    }

    fn estimate(&self) -> f64 {
        let r = self.recons();
        r.iter().sum::<f64>() / r.len() as f64
    }

    /// The averaged estimate folds with its own time integers and lies
    /// within the error bound of every reconstruction.
    fn self_consistent(&self, carriers: &[Carrier], xi: f64) -> bool {
        let v = self.estimate();
        let in_windows = self.time_integers().iter().zip(carriers).all(|(&nt, c)| {
            let (lo, hi) = c.time_window(nt);
            v >= lo - slack(lo) && v < hi + slack(hi)
        });
        in_windows && self.recons().iter().all(|r| (r - v).abs() <= xi + slack(xi))
    }

    /// Some single velocity explains every carrier within the error bound.
    fn feasible(&self, carriers: &[Carrier], xi: f64) -> bool {
        let windows: Vec<_> = self.time_integers().iter().zip(carriers).map(|(&nt, c)| c.time_window(nt)).collect();
        minimax(&windows, &self.recons()) <= xi + slack(xi)
    }
}

fn resolve(carriers: &[Carrier], xi: f64, filter: Filter) -> Result<Resolved> {
    let sets: Vec<Vec<Tuple>> = carriers[1..].iter().map(|c| argmin_set(&carriers[0], c, xi, filter)).collect();

    let intersect = |key: fn(&Tuple) -> i64| {
        sets.iter()
            .map(|s| s.iter().map(key).collect::<BTreeSet<_>>())
            .reduce(|a, b| a.intersection(&b).copied().collect())
            .unwrap_or_default()
    };
    let s_t = intersect(|t| t.nt1);
    let s_s = intersect(|t| t.ns1);
    if s_t.is_empty() {
        return Err(Error::NoSolution {
            set: IntegerSet::Time,
            detail: "no first-carrier time integer is shared by all argmin sets".into(),
        });
    }
    if s_s.is_empty() {
        return Err(Error::NoSolution {
            set: IntegerSet::Space,
            detail: "no first-carrier space integer is shared by all argmin sets".into(),
        });
    }
    let ambiguous = || Error::Ambiguous { s_t: s_t.iter().copied().collect(), s_s: s_s.iter().copied().collect() };
    if s_t.len() > 1 || s_s.len() > 1 {
        return Err(ambiguous());
    }
    let first = (*s_t.first().unwrap(), *s_s.first().unwrap());

    let mut rest = Vec::with_capacity(sets.len());
    for set in &sets {
        let mut matching = set.iter().filter(|t| (t.nt1, t.ns1) == first);
        let Some(pick) = matching.next() else {
            return Err(Error::NoSolution {
                set: IntegerSet::Space,
                detail: format!("first-carrier integers {first:?} do not pair within every argmin set"),
            });
        };
        if matching.any(|t| (t.nti, t.nsi) != (pick.nti, pick.nsi)) {
            return Err(ambiguous());
        }
        rest.push(*pick);
    }
    Ok(Resolved { first, rest })
}

/// Resolves with the given ranking, retrying with the range filter when
/// the first-carrier integers are ambiguous. The unfiltered error is kept.
fn resolve_ranked(carriers: &[Carrier], xi: f64, half_range: f64, exact: bool) -> Result<Resolved> {
    let base = Filter { half_range: None, exact };
    match resolve(carriers, xi, base) {
        Err(err @ Error::Ambiguous { .. }) => {
            resolve(carriers, xi, Filter { half_range: Some(half_range), ..base }).map_err(|_| err)
        }
        other => other,
    }
}

fn resolve_with_fallback(carriers: &[Carrier], xi: f64, half_range: f64) -> Result<Resolved> {
    let first_error = match resolve_ranked(carriers, xi, half_range, false) {
        Ok(r) if r.self_consistent(carriers, xi) => return Ok(r),
        Ok(_) => Error::NoSolution {
            set: IntegerSet::Time,
            detail: "selected integers are inconsistent with their own estimate".into(),
        },
        Err(e) => e,
    };
    match resolve_ranked(carriers, xi, half_range, true) {
        Ok(r) if r.feasible(carriers, xi) => Ok(r),
        Ok(_) => Err(first_error),
        Err(e @ Error::Ambiguous { .. }) if !matches!(first_error, Error::Ambiguous { .. }) => Err(e),
        Err(_) => Err(first_error),
    }
}

/// Search over the folding integers of every carrier against carrier 1,
/// for true velocities in `[-v_range/2, v_range/2)`.
///
/// Each argmin set collects the tuples minimizing the disagreement between
/// the two reconstructions, subject to the error-widened time-domain
/// intervals. If the first-carrier integers come out ambiguous, tuples whose
/// pairwise estimate falls outside the search range are dropped and the sets
/// are rebuilt. If the result is still unresolved, or its averaged estimate
/// contradicts its own time integers or the error bound, the tuples are
/// re-ranked by the smallest error that explains them with one velocity.
/// Unresolved outcomes are reported, never guessed.
pub fn search_retrieve(obs: &FoldedObservation, cfg: &RadarConfig, v_range: f64) -> Result<RetrievalResult> {
    cfg.validate()?;
    if cfg.lambdas.len() < 2 {
        return Err(Error::config("search_retrieve needs at least two carriers"));
    }
    obs.check(cfg.lambdas.len())?;
    let moduli = cfg.moduli()?;
    search_with_moduli(obs, &moduli, v_range, classify_case(cfg)?.k)
}

pub(crate) fn search_with_moduli(
    obs: &FoldedObservation,
    moduli: &[ModulusPair<f64>],
    v_range: f64,
    k: Option<i64>,
) -> Result<RetrievalResult> {
    let carriers = moduli
        .iter()
        .zip(&obs.v_space)
        .map(|(m, &v)| {
            let (nt, ns) = integer_ranges(m, v_range)?;
            Ok(Carrier { obs: v, v_t: m.v_t(), v_s: m.v_s(), nt: nt.collect(), ns: ns.collect() })
        })
        .collect::<Result<Vec<_>>>()?;

    let resolved = resolve_with_fallback(&carriers, obs.xi_e, v_range / 2.0)?;
    let recons = resolved.recons();
    let v_hat = resolved.estimate();
    let residual = recons.iter().map(|r| (r - v_hat).abs()).fold(0.0, f64::max);

    let pairs = std::iter::once(resolved.first).chain(resolved.rest.iter().map(|t| (t.nti, t.nsi)));
    let integers =
        pairs.map(|(n_t, n_s)| WavelengthIntegers { n_t, n_s, n_st: k.map(|k| n_s + k * n_t) }).collect::<Vec<_>>();
    let v_time = integers.iter().zip(moduli).map(|(w, m)| v_hat - w.n_t as f64 * m.v_t()).collect();
    Ok(RetrievalResult { v_hat, integers: AmbiguityIntegers(integers), method: Method::Search, residual, v_time })
}
