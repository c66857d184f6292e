//! Closed-form robust CRT and the case-specific solvers built on it.

use std::cmp::Ordering;
use std::f64::consts::TAU;

use num_integer::Integer;

use super::{fold_estimate, AmbiguityIntegers, FoldedObservation, Method, RetrievalResult, WavelengthIntegers};
use crate::error::{Error, IntegerSet, Result};
use crate::folding::centered_remainder;
use crate::number::{crt, to_exact};
use crate::system::{classify_case, CaseId, Interval, RadarConfig};

/// Moduli written as `m * gamma_i` with pairwise-coprime integers `gamma_i`.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Commensurate {
    pub m: f64,
    pub gamma: Vec<i128>,
}

impl Commensurate {
    pub fn new(moduli: &[f64]) -> Result<Self> {
        let first = *moduli.first().ok_or_else(|| Error::domain("robust CRT needs at least one modulus"))?;
        if let Some(m) = moduli.iter().find(|m| !(m.is_finite() && **m > 0.0)) {
            return Err(Error::domain(format!("moduli must be positive, got {m}")));
        }
        let ratios = moduli
            .iter()
            .map(|&m| to_exact(m / first))
            .collect::<Result<Vec<_>>>()
            .map_err(|_| Error::config(format!("moduli {moduli:?} are not commensurable")))?;
        let den = ratios.iter().fold(1i128, |l, r| l.lcm(&(*r.denom() as i128)));
        let scaled: Vec<i128> = ratios.iter().map(|r| *r.numer() as i128 * (den / *r.denom() as i128)).collect();
        let g = scaled.iter().fold(0i128, |g, c| g.gcd(c));
        let gamma: Vec<i128> = scaled.iter().map(|c| c / g).collect();
        for (i, a) in gamma.iter().enumerate() {
            for b in &gamma[i + 1..] {
                if a.gcd(b) != 1 {
                    return Err(Error::config(format!(
                        "moduli {moduli:?} reduce to {gamma:?}, which are not pairwise coprime"
                    )));
                }
            }
        }
        Ok(Self { m: first * g as f64 / den as f64, gamma })
    }

    pub fn lcm(&self) -> f64 {
        self.m * self.gamma.iter().product::<i128>() as f64
    }
}

struct CrtSolution {
    v_hat: f64,
    quotients: Vec<i64>,
    residual: f64,
}

fn solve(remainders: &[f64], moduli: &[f64], range: Interval, set: IntegerSet) -> Result<CrtSolution> {
    if remainders.len() != moduli.len() {
        return Err(Error::domain(format!("{} remainders for {} moduli", remainders.len(), moduli.len())));
    }
    if let Some(r) = remainders.iter().find(|r| !r.is_finite()) {
        return Err(Error::domain(format!("non-finite remainder {r}")));
    }
    let cm = Commensurate::new(moduli)?;
    let lcm = cm.lcm();
    let width = range.width();
    if width.partial_cmp(&0.0) != Some(Ordering::Greater) || width > lcm * (1.0 + 1e-9) {
        return Err(Error::domain(format!("search range {range} must be non-empty and at most {lcm} wide")));
    }
    let m = cm.m;

    // common residue on the m-torus
    let (s, c) = remainders.iter().fold((0.0, 0.0), |(s, c), r| {
        let a = TAU * r / m;
        (s + a.sin(), c + a.cos())
    });
    if s.hypot(c) < 1e-9 * remainders.len() as f64 {
        return Err(Error::Ambiguous { s_t: Vec::new(), s_s: Vec::new() });
    }
    let common = m * s.atan2(c) / TAU;

    let residues: Vec<i128> =
        remainders.iter().zip(&cm.gamma).map(|(r, g)| (((r - common) / m).round() as i128).rem_euclid(*g)).collect();
    let (k, _) = crt(&residues, &cm.gamma)?;
    let v0 = range.lo + (k as f64 * m + common - range.lo).rem_euclid(lcm);
    if v0 >= range.hi {
        return Err(Error::NoSolution { set, detail: format!("closed-form candidate {v0} lies outside {range}") });
    }

    let mut unfolded: Vec<f64> =
        remainders.iter().zip(moduli).map(|(r, mi)| r + ((v0 - r) / mi).round() * mi).collect();
    let mut v_hat = unfolded.iter().sum::<f64>() / unfolded.len() as f64;
    // keep the average inside a full-period range
    if width >= lcm * (1.0 - 1e-9) {
        let shift = lcm * ((v_hat - range.lo) / lcm).floor();
        if shift != 0.0 {
            v_hat -= shift;
            unfolded.iter_mut().for_each(|u| *u -= shift);
        }
    }
    let quotients =
        unfolded.iter().zip(remainders.iter().zip(moduli)).map(|(u, (r, mi))| ((u - r) / mi).round() as i64).collect();
    let residual = unfolded.iter().map(|u| (u - v_hat).abs()).fold(0.0, f64::max);
    Ok(CrtSolution { v_hat, quotients, residual })
}

/// Robust CRT for real moduli `m * gamma_i` with pairwise-coprime `gamma_i`.
///
/// The result carries one quotient per modulus in `n_s` (`n_t` is zero)
/// and no time-domain remainders; the case solvers replace both.
pub fn robust_crt(remainders: &[f64], moduli: &[f64], search_range: Interval) -> Result<RetrievalResult> {
    let sol = solve(remainders, moduli, search_range, IntegerSet::Space)?;
    let integers = sol.quotients.iter().map(|&n| WavelengthIntegers { n_t: 0, n_s: n, n_st: None }).collect();
    Ok(RetrievalResult {
        v_hat: sol.v_hat,
        integers: AmbiguityIntegers(integers),
        method: Method::ClosedFormCrt,
        residual: sol.residual,
        v_time: Vec::new(),
    })
}

fn require_case(cfg: &RadarConfig, allowed: &[CaseId], what: &str) -> Result<crate::system::SystemCase> {
    cfg.validate()?;
    let case = classify_case(cfg)?;
    if !allowed.contains(&case.case_id) {
        return Err(Error::config(format!("{what} does not apply to a {case} system")));
    }
    Ok(case)
}

/// Case I: the space measurement equals the time-domain remainder, so the
/// moduli are the time blind speeds.
pub fn solve_case1(obs: &FoldedObservation, cfg: &RadarConfig) -> Result<RetrievalResult> {
    require_case(cfg, &[CaseId::I], "solve_case1")?;
    obs.check(cfg.lambdas.len())?;
    let moduli = cfg.moduli()?;
    let v_t: Vec<f64> = moduli.iter().map(|m| m.v_t()).collect();
    let range = Interval::centered(Commensurate::new(&v_t)?.lcm());
    let sol = solve(&obs.v_space, &v_t, range, IntegerSet::Time)?;
    let (integers, v_time) = fold_estimate(sol.v_hat, &moduli, None)?;
    Ok(RetrievalResult { v_hat: sol.v_hat, integers, method: Method::ClosedFormCrt, residual: sol.residual, v_time })
}

/// Case II: `V_T = k V_S`, so the aggregate integer `n_s + k n_t` is a plain
/// CRT unknown over the space blind speeds.
pub fn solve_case2(obs: &FoldedObservation, cfg: &RadarConfig) -> Result<RetrievalResult> {
    let case = require_case(cfg, &[CaseId::II], "solve_case2")?;
    obs.check(cfg.lambdas.len())?;
    let moduli = cfg.moduli()?;
    let v_s: Vec<f64> = moduli.iter().map(|m| m.v_s()).collect();
    let range = Interval::centered(Commensurate::new(&v_s)?.lcm());
    let sol = solve(&obs.v_space, &v_s, range, IntegerSet::Space)?;
    let (integers, v_time) = fold_estimate(sol.v_hat, &moduli, case.k)?;
    Ok(RetrievalResult { v_hat: sol.v_hat, integers, method: Method::ClosedFormCrt, residual: sol.residual, v_time })
}

/// Reduction of the double-remainder problem to a single CRT over the
/// moduli `V_S,i / q`. Valid only for true velocities in
/// `[-v_lb/2, v_lb/2)`, `v_lb = lcm(V_S) / q`; outside it the answer is a
/// wrapped, wrong velocity.
pub fn theorem1_solve(obs: &FoldedObservation, cfg: &RadarConfig) -> Result<RetrievalResult> {
    let case = require_case(cfg, &[CaseId::II, CaseId::III], "theorem1_solve")?;
    obs.check(cfg.lambdas.len())?;
    let q = case.q().unwrap_or(1) as f64;
    let moduli = cfg.moduli()?;
    let reduced: Vec<f64> = moduli.iter().map(|m| m.v_s() / q).collect();
    let zeta = obs.v_space.iter().zip(&reduced).map(|(&v, &b)| centered_remainder(v, b)).collect::<Result<Vec<_>>>()?;
    let range = Interval::centered(Commensurate::new(&reduced)?.lcm());
    let sol = solve(&zeta, &reduced, range, IntegerSet::Space)?;
    let (integers, v_time) = fold_estimate(sol.v_hat, &moduli, case.k)?;
    Ok(RetrievalResult { v_hat: sol.v_hat, integers, method: Method::Theorem1Crt, residual: sol.residual, v_time })
}

/// Theorem 1 lower bound `lcm(V_S) / q` of a Case II/III configuration.
pub fn theorem1_bound(cfg: &RadarConfig) -> Result<f64> {
    let case = require_case(cfg, &[CaseId::II, CaseId::III], "theorem1_bound")?;
    let q = case.q().unwrap_or(1) as f64;
    let reduced: Vec<f64> = cfg.moduli()?.iter().map(|m| m.v_s() / q).collect();
    Ok(Commensurate::new(&reduced)?.lcm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn commensurate_decomposition() {
        let c = Commensurate::new(&[5.0, 6.0]).unwrap();
        assert_eq!((c.m, c.gamma.clone(), c.lcm()), (1.0, vec![5, 6], 30.0));
        let c = Commensurate::new(&[12.0, 16.0]).unwrap();
        assert_eq!((c.m, c.gamma.clone(), c.lcm()), (4.0, vec![3, 4], 48.0));
        let c = Commensurate::new(&[1.5, 2.5]).unwrap();
        assert_abs_diff_eq!(c.m, 0.5);
        assert_eq!(c.gamma, vec![3, 5]);
        assert!(matches!(Commensurate::new(&[1.0, std::f64::consts::SQRT_2]), Err(Error::Config(_))));
        // 4, 6, 9 share pairwise factors after removing the common gcd
        assert!(matches!(Commensurate::new(&[4.0, 6.0, 9.0]), Err(Error::Config(_))));
    }

    #[test]
    fn robust_crt_examples() {
        let r = robust_crt(&[1.8270, -0.7979], &[5.0, 6.0], Interval::centered(30.0)).unwrap();
        assert_abs_diff_eq!(r.v_hat, -12.9855, epsilon = 1e-4);
        let z1 = centered_remainder(-6.5791, 5.0).unwrap();
        let z2 = centered_remainder(8.3173, 6.0).unwrap();
        let r = robust_crt(&[z1, z2], &[5.0, 6.0], Interval::centered(30.0)).unwrap();
        assert_abs_diff_eq!(r.v_hat, 8.3691, epsilon = 1e-4);
        let r = robust_crt(&[0.0, 0.0], &[5.0, 6.0], Interval::centered(30.0)).unwrap();
        assert_eq!(r.v_hat, 0.0);
        assert_eq!(r.residual, 0.0);
    }

    #[test]
    fn robust_crt_recovers_every_grid_point() {
        let moduli = [12.0, 16.0];
        for i in -240..240 {
            let v = i as f64 * 0.1;
            let rem: Vec<f64> = moduli.iter().map(|&m| centered_remainder(v, m).unwrap()).collect();
            let r = robust_crt(&rem, &moduli, Interval::centered(48.0)).unwrap();
            assert_abs_diff_eq!(r.v_hat, v, epsilon = 1e-9);
        }
    }

    #[test]
    fn narrow_range_rejects_candidate() {
        let err = robust_crt(&[-1.0, 2.0], &[5.0, 6.0], Interval::centered(10.0)).unwrap_err();
        assert!(matches!(err, Error::NoSolution { .. }));
        let err = robust_crt(&[0.0, 0.0], &[5.0, 6.0], Interval::centered(60.0)).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
    }
}
