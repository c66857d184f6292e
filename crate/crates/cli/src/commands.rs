use std::fmt::Write as _;
use std::path::Path;

use anyhow::{Context, Result};
use ctsda::sim::{monte_carlo_rmse, simulate_echo, vsar_estimate_vspace, xi_grid, Noise};
use ctsda::solvers::{theorem1_bound, FoldedObservation};
use ctsda::system::SweepParameter;
use ctsda::{
    azimuth_shift, brute_force_oracle, classify_case, determinable_size_of, forward_fold, max_azimuth_shift,
    search_retrieve, size_sweep, solve_case1, solve_case2, sweep_determinable_size, theorem1_solve, unambiguous_range,
    CaseId, Error, RadarConfig, RetrievalResult, TargetMotion,
};
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::output::{csv_of, emit, list, num, Rendered};
use crate::{Command, GlobalOpts, MethodArg, RetrieveArgs, Vary};

pub fn run(command: &Command, opts: &GlobalOpts) -> Result<()> {
    match command {
        Command::Classify { config } => {
            let cfg = load(Some(config))?;
            emit(opts, "classify", &cfg, None, classify(&cfg)?)
        }
        Command::Fold { config, v, v_min, v_max, step } => {
            let cfg = load(Some(config))?;
            emit(opts, "fold", &cfg, None, fold(&cfg, *v, *v_min, *v_max, *step)?)
        }
        Command::Retrieve(args) => {
            let cfg = load(Some(&args.config))?;
            let obs = observations(args, &cfg)?;
            let (result, warnings) = retrieve(&cfg, &obs, args.method, args.v_range, args.step)?;
            for w in &warnings {
                eprintln!("warning: {w}");
            }
            emit(opts, "retrieve", &cfg, None, render_retrieval(&cfg, &result, &warnings)?)
        }
        Command::Sweep { config, lambda, vary, from, to, points } => {
            let cfg = load(config.as_deref())?;
            emit(opts, "sweep", &cfg, None, sweep(&cfg, *lambda, *vary, *from, *to, *points)?)
        }
        Command::Enumerate { config, pairs } => {
            let cfg = load(config.as_deref())?;
            let pairs = if pairs.is_empty() { ctsda::enumerator::standard_pairs() } else { pairs.clone() };
            let rows = size_sweep(&cfg, &pairs)?;
            let mut text = String::from("lambda1  lambda2  V_T1    V_S1    V_T2    V_S2    v_lb     size     v_ub\n");
            for r in &rows {
                writeln!(
                    text,
                    "{:<8} {:<8} {:<7} {:<7} {:<7} {:<7} {:<8} {:<8} {}",
                    r.lambda1,
                    r.lambda2,
                    num(r.vt1),
                    num(r.vs1),
                    num(r.vt2),
                    num(r.vs2),
                    num(r.v_lb),
                    num(r.size),
                    num(r.v_ub)
                )?;
            }
            let csv = csv_of(&rows)?;
            emit(opts, "enumerate", &cfg, None, Rendered::new(text, &rows)?.with_csv(csv))
        }
        Command::Simulate { config, v_r, y0, snr_db, seed, pulses, zero_pad } => {
            let cfg = load(Some(config))?;
            let noise = snr_db.map(|snr_db| Noise { snr_db, seed: *seed });
            let y0 = y0.unwrap_or(0.8 * cfg.r_0);
            if !(y0 > 0.0 && y0 <= cfg.r_0) {
                return Err(Error::Config(format!("ground range must lie in (0, R_0], got {y0}")).into());
            }
            let out = simulate(&cfg, *v_r, y0, noise, pulses.unwrap_or_else(|| cfg.pulse_count()), *zero_pad)?;
            emit(opts, "simulate", &cfg, Some(*seed), out)
        }
        Command::Montecarlo { config, trials, seed, xi_max, xi_step } => {
            let cfg = load(config.as_deref())?;
            let curve = monte_carlo_rmse(&cfg, &xi_grid(*xi_max, *xi_step), *trials, *seed)?;
            let csv = curve.to_csv();
            emit(opts, "montecarlo", &cfg, Some(*seed), Rendered::new(csv.clone(), &curve)?.with_csv(csv))
        }
    }
}

fn load(path: Option<&Path>) -> Result<RadarConfig> {
    match path {
        Some(p) => Ok(RadarConfig::load(p)?),
        None => Ok(RadarConfig::two_carrier_case3()),
    }
}

fn classify(cfg: &RadarConfig) -> Result<Rendered> {
    let case = classify_case(cfg)?;
    let moduli = cfg.moduli()?;
    let mut text =
        format!("{case}, V_T={}, V_S={}\n", list(moduli.iter().map(|m| m.v_t())), list(moduli.iter().map(|m| m.v_s())));
    let mut carriers = Vec::new();
    for (&lambda, m) in cfg.lambdas.iter().zip(&moduli) {
        let range = unambiguous_range(cfg, lambda)?;
        let shift = max_azimuth_shift(cfg, lambda);
        writeln!(
            text,
            "lambda {lambda} m: V_T {} m/s, V_S {} m/s, unambiguous [{}, {}) m/s, max azimuth shift {} m",
            num(m.v_t()),
            num(m.v_s()),
            num(range.lo),
            num(range.hi),
            num(shift)
        )?;
        carriers.push(json!({
            "lambda": lambda,
            "v_t": m.v_t(),
            "v_s": m.v_s(),
            "unambiguous_range": range,
            "max_azimuth_shift": shift,
        }));
    }
    Rendered::new(text, json!({ "case": case, "carriers": carriers }))
}

#[derive(Serialize)]
struct FoldRow {
    v_r: f64,
    lambda: f64,
    v_time: f64,
    v_space: f64,
    n_t: i64,
    n_s: i64,
}

fn fold(cfg: &RadarConfig, v: Option<f64>, v_min: f64, v_max: f64, step: f64) -> Result<Rendered> {
    let velocities: Vec<f64> = match v {
        Some(v) => vec![v],
        None => {
            if !(step > 0.0 && v_max >= v_min) {
                return Err(Error::Domain(format!("bad grid [{v_min}, {v_max}] step {step}")).into());
            }
            let n = ((v_max - v_min) / step).round() as usize;
            (0..=n).map(|i| v_min + i as f64 * step).collect()
        }
    };
    let moduli = cfg.moduli()?;
    let mut rows = Vec::with_capacity(velocities.len() * moduli.len());
    for &v_r in &velocities {
        for (&lambda, m) in cfg.lambdas.iter().zip(&moduli) {
            let f = forward_fold(v_r, m)?;
            rows.push(FoldRow { v_r, lambda, v_time: f.v_time, v_space: f.v_space, n_t: f.n_t, n_s: f.n_s });
        }
    }
    let csv = csv_of(&rows)?;
    let text = if v.is_some() {
        let mut t = String::new();
        for r in &rows {
            writeln!(
                t,
                "lambda {} m: v_time {} (N_T {}), v_space {} (N_S {})",
                r.lambda,
                num(r.v_time),
                r.n_t,
                num(r.v_space),
                r.n_s
            )?;
        }
        t
    } else {
        csv.clone()
    };
    Ok(Rendered::new(text, &rows)?.with_csv(csv))
}

#[derive(Deserialize)]
struct ObsRow {
    lambda: f64,
    v_space: f64,
}

fn observations(args: &RetrieveArgs, cfg: &RadarConfig) -> Result<FoldedObservation> {
    let n = cfg.lambdas.len();
    let mut slots: Vec<Option<f64>> = vec![None; n];
    let mut place = |i: usize, v: f64, what: String| -> Result<()> {
        let slot =
            slots.get_mut(i).ok_or_else(|| Error::Config(format!("{what} does not match a configured carrier")))?;
        if slot.replace(v).is_some() {
            return Err(Error::Config(format!("{what} given twice")).into());
        }
        Ok(())
    };
    if let Some(path) = &args.obs_csv {
        let mut reader =
            csv::Reader::from_path(path).map_err(|e| Error::Config(format!("reading {}: {e}", path.display())))?;
        for row in reader.deserialize::<ObsRow>() {
            let row = row.map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
            let i = cfg
                .lambdas
                .iter()
                .position(|&l| (l - row.lambda).abs() <= 1e-12 * l.abs().max(1.0))
                .unwrap_or(usize::MAX);
            place(i, row.v_space, format!("wavelength {}", row.lambda))?;
        }
    } else {
        for &(i, v) in &args.obs {
            place(i - 1, v, format!("carrier {i}"))?;
        }
    }
    let v_space = slots
        .into_iter()
        .enumerate()
        .map(|(i, v)| v.ok_or_else(|| Error::Config(format!("missing observation for carrier {}", i + 1))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(FoldedObservation::new(v_space).with_xi_e(args.xi_e))
}

/// Runs the requested solver; `auto` picks the closed form for Cases I and
/// II, Theorem 1 when its range covers the determinable size, and the
/// search otherwise.
pub fn retrieve(
    cfg: &RadarConfig,
    obs: &FoldedObservation,
    method: MethodArg,
    v_range: Option<f64>,
    step: f64,
) -> Result<(RetrievalResult, Vec<String>)> {
    let case = classify_case(cfg)?;
    let size = || -> Result<f64> {
        match v_range {
            Some(r) => Ok(r),
            None => Ok(determinable_size_of(cfg)?.size.to_f64().unwrap_or(f64::NAN)),
        }
    };
    let mut warnings = Vec::new();
    let result = match (method, case.case_id) {
        (MethodArg::Auto | MethodArg::Crt, CaseId::I) => solve_case1(obs, cfg)?,
        (MethodArg::Auto | MethodArg::Crt, CaseId::II) => solve_case2(obs, cfg)?,
        (MethodArg::Auto, CaseId::III) => {
            let report = determinable_size_of(cfg)?;
            if v_range.is_none() && report.size == report.v_lb {
                theorem1_solve(obs, cfg)?
            } else {
                search_retrieve(obs, cfg, size()?)?
            }
        }
        (MethodArg::Crt | MethodArg::Theorem1, _) => {
            let bound = theorem1_bound(cfg)?;
            let full = determinable_size_of(cfg)?.size.to_f64().unwrap_or(f64::NAN);
            if full > bound + 1e-9 {
                warnings.push(format!(
                    "the closed form is only valid for true velocities in [{}, {}); the truth may lie outside it",
                    num(-bound / 2.0),
                    num(bound / 2.0)
                ));
            }
            theorem1_solve(obs, cfg)?
        }
        (MethodArg::Search, _) => search_retrieve(obs, cfg, size()?)?,
        (MethodArg::Oracle, _) => brute_force_oracle(obs, cfg, size()?, step)?,
    };
    Ok((result, warnings))
}

fn render_retrieval(cfg: &RadarConfig, r: &RetrievalResult, warnings: &[String]) -> Result<Rendered> {
    // `+ 0.0` turns a negative zero into zero
    let shifts: Vec<f64> = r.v_time.iter().map(|&v| azimuth_shift(v, cfg) + 0.0).collect();
    let mut text = format!("v_r = {:.4} m/s ({})\n", r.v_hat, r.method);
    for (i, w) in r.integers.0.iter().enumerate() {
        write!(text, "carrier {} (lambda {} m): N_T {}, N_S {}", i + 1, cfg.lambdas[i], w.n_t, w.n_s)?;
        if let Some(n_st) = w.n_st {
            write!(text, ", N_ST {n_st}")?;
        }
        if let (Some(v_time), Some(shift)) = (r.v_time.get(i), shifts.get(i)) {
            write!(text, ", v_time {v_time:.4} m/s, azimuth shift {shift:.4} m")?;
        }
        text.push('\n');
    }
    writeln!(text, "residual = {:.4} m/s", r.residual)?;
    Rendered::new(text, json!({ "result": r, "azimuth_shifts": shifts, "warnings": warnings }))
}

fn sweep(cfg: &RadarConfig, lambda: Option<f64>, vary: Vary, from: f64, to: f64, points: usize) -> Result<Rendered> {
    let lambda = match lambda.or_else(|| cfg.lambdas.first().copied()) {
        Some(l) => l,
        None => return Err(Error::Config("no wavelength given".into()).into()),
    };
    if points < 2 {
        return Err(Error::Domain("a sweep needs at least two points".into()).into());
    }
    let (parameter, column) = match vary {
        Vary::Prf => (SweepParameter::Prf, "f_p"),
        Vary::Spacing => (SweepParameter::Spacing, "d"),
        Vary::PlatformVelocity => (SweepParameter::PlatformVelocity, "v_a"),
    };
    let grid: Vec<f64> = (0..points).map(|i| from + (to - from) * i as f64 / (points - 1) as f64).collect();
    let curve = sweep_determinable_size(cfg, lambda, parameter, &grid)?;
    let mut csv = format!("{column},size\n");
    for (value, size) in &curve {
        writeln!(csv, "{value},{size}")?;
    }
    let rows: Vec<_> = curve.iter().map(|(value, size)| json!({ column: value, "size": size })).collect();
    Ok(Rendered::new(csv.clone(), json!({ "lambda": lambda, "rows": rows }))?.with_csv(csv))
}

fn simulate(
    cfg: &RadarConfig,
    v_r: f64,
    y0: f64,
    noise: Option<Noise>,
    pulses: usize,
    zero_pad: usize,
) -> Result<Rendered> {
    let motion = TargetMotion::radial(v_r, y0, cfg.r_0);
    let moduli = cfg.moduli()?;
    let mut estimates = Vec::with_capacity(cfg.lambdas.len());
    let mut truths = Vec::with_capacity(cfg.lambdas.len());
    for (i, (&lambda, m)) in cfg.lambdas.iter().zip(&moduli).enumerate() {
        // independent noise per carrier, still fixed by the seed
        let noise = noise.map(|n| Noise { seed: n.seed.wrapping_add(i as u64), ..n });
        let cube = simulate_echo(cfg, &motion, lambda, pulses, noise)?;
        let est = vsar_estimate_vspace(&cube, cfg, zero_pad).with_context(|| format!("carrier {}", i + 1))?;
        estimates.push(est);
        truths.push(forward_fold(v_r, m)?.v_space);
    }
    let obs = FoldedObservation::new(estimates.clone());
    let (result, warnings) = retrieve(cfg, &obs, MethodArg::Auto, None, 0.01)?;
    let mut text = String::new();
    for (i, (est, truth)) in estimates.iter().zip(&truths).enumerate() {
        writeln!(
            text,
            "carrier {} (lambda {} m): v_space estimate {est:.4} m/s, exact fold {truth:.4} m/s",
            i + 1,
            cfg.lambdas[i]
        )?;
    }
    let retrieval = render_retrieval(cfg, &result, &warnings)?;
    text.push_str(&retrieval.text);
    let json = json!({
        "v_r": v_r,
        "y0": y0,
        "pulses": pulses,
        "noise": noise,
        "v_space_estimates": estimates,
        "v_space_exact": truths,
        "retrieval": retrieval.json,
    });
    Rendered::new(text, json)
}
