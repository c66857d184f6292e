//! Radar configuration and the system-level quantities derived from it.

use std::path::Path;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::folding::{blind_speeds, ModulusPair};
use crate::number::to_exact;

/// Speed of light (m/s).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Platform, antenna and waveform parameters of a multichannel,
/// multi-frequency SAR. All quantities are SI.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RadarConfig {
    /// Channel spacing (m).
    pub d: f64,
    /// Platform velocity (m/s).
    pub v_a: f64,
    /// Pulse repetition frequency (Hz).
    pub f_p: f64,
    /// Center range (m).
    pub r_0: f64,
    /// Number of receive channels.
    pub m_ch: usize,
    /// Carrier wavelengths (m), strictly increasing.
    pub lambdas: Vec<f64>,
    /// Target illumination time (s).
    pub t_s: f64,
    /// Pulse bandwidth (Hz).
    pub b_w: f64,
    /// Pulse duration (s).
    pub t_pulse: f64,
    /// Range sampling frequency (Hz).
    pub f_s: f64,
}

impl RadarConfig {
    /// The two-carrier Case III system used throughout the numerical
    /// experiments. Illumination time is not part of the reference parameter
    /// set; one second (800 pulses) is assumed.
    pub fn two_carrier_case3() -> Self {
        Self {
            d: 0.4,
            v_a: 120.0,
            f_p: 800.0,
            r_0: 10_000.0,
            m_ch: 8,
            lambdas: vec![0.05, 0.06],
            t_s: 1.0,
            b_w: 80e6,
            t_pulse: 2.25e-6,
            f_s: 100e6,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref())?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        let scalars = [
            ("d", self.d),
            ("v_a", self.v_a),
            ("f_p", self.f_p),
            ("r_0", self.r_0),
            ("t_s", self.t_s),
            ("b_w", self.b_w),
            ("t_pulse", self.t_pulse),
            ("f_s", self.f_s),
        ];
        for (name, value) in scalars {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::config(format!("{name} must be positive and finite, got {value}")));
            }
        }
        if self.m_ch < 2 {
            return Err(Error::config(format!("m_ch must be at least 2, got {}", self.m_ch)));
        }
        if self.lambdas.is_empty() {
            return Err(Error::config("lambdas must not be empty"));
        }
        if let Some(l) = self.lambdas.iter().find(|l| !(l.is_finite() && **l > 0.0)) {
            return Err(Error::config(format!("wavelengths must be positive, got {l}")));
        }
        if self.lambdas.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::config("lambdas must be strictly increasing"));
        }
        // Case I systems never need the exact ratio.
        if self.ratio() >= 1.0 {
            self.exact_ratio()?;
        }
        Ok(())
    }

    /// Copy of this configuration with a different carrier set.
    pub fn with_lambdas(&self, lambdas: Vec<f64>) -> Self {
        Self { lambdas, ..self.clone() }
    }

    /// `d f_p / (2 v_a)`, which equals `V_T / V_S` for every carrier.
    pub fn ratio(&self) -> f64 {
        self.d * self.f_p / (2.0 * self.v_a)
    }

    /// The ratio `V_T / V_S` as a reduced fraction `p/q`.
    pub fn exact_ratio(&self) -> Result<Rational64> {
        to_exact(self.ratio()).map_err(|_| {
            Error::config(format!(
                "d*f_p/(2*v_a) = {} is not a rational with denominator <= {}",
                self.ratio(),
                crate::number::MAX_DENOMINATOR
            ))
        })
    }

    pub fn blind_speeds(&self, lambda: f64) -> Result<ModulusPair<f64>> {
        blind_speeds(lambda, self.f_p, self.v_a, self.d)
    }

    /// Blind speeds for every configured carrier.
    pub fn moduli(&self) -> Result<Vec<ModulusPair<f64>>> {
        self.lambdas.iter().map(|&l| self.blind_speeds(l)).collect()
    }

    /// Blind speeds as exact rationals. Each speed is rationalized
    /// independently and the pair must reproduce the exact `p/q` ratio.
    pub fn exact_moduli(&self) -> Result<Vec<ModulusPair<Rational64>>> {
        let ratio = self.exact_ratio()?;
        self.moduli()?
            .into_iter()
            .map(|m| {
                let v_t = to_exact(m.v_t())?;
                let v_s = to_exact(m.v_s())?;
                if v_t / v_s != ratio {
                    return Err(Error::config(format!("blind speeds {v_t}/{v_s} do not reproduce the ratio {ratio}")));
                }
                ModulusPair::new(v_t, v_s)
            })
            .collect()
    }

    /// Slow-time span that holds `n` pulses, used when simulating echoes.
    pub fn pulse_count(&self) -> usize {
        ((self.t_s * self.f_p).round() as usize).max(2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CaseId {
    I,
    II,
    III,
}

impl std::fmt::Display for CaseId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            CaseId::I => "I",
            CaseId::II => "II",
            CaseId::III => "III",
        })
    }
}

/// Classification of a system by the relation between its time and space
/// blind speeds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemCase {
    pub case_id: CaseId,
    /// Integer multiple `V_T = k V_S` (Case II only).
    pub k: Option<i64>,
    /// Reduced ratio `V_T / V_S` (Cases II and III).
    #[serde(with = "ratio_string")]
    pub p_over_q: Option<Rational64>,
}

impl SystemCase {
    /// Denominator `q` of the reduced blind-speed ratio, if defined.
    pub fn q(&self) -> Option<i64> {
        self.p_over_q.map(|r| *r.denom())
    }
}

impl std::fmt::Display for SystemCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Case {}", self.case_id)?;
        match (self.case_id, self.k, self.p_over_q) {
            (CaseId::II, Some(k), _) => write!(f, ", k={k}"),
            (CaseId::III, _, Some(r)) => write!(f, ", p/q={}/{}", r.numer(), r.denom()),
            _ => Ok(()),
        }
    }
}

mod ratio_string {
    use num_rational::Rational64;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<Rational64>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(r) => s.serialize_str(&format!("{}/{}", r.numer(), r.denom())),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational64>, D::Error> {
        let text: Option<String> = Option::deserialize(d)?;
        text.map(|t| t.parse::<Rational64>().map_err(serde::de::Error::custom)).transpose()
    }
}

pub fn classify_case(cfg: &RadarConfig) -> Result<SystemCase> {
    let ratio = cfg.ratio();
    let exact = if ratio < 1.0 { cfg.exact_ratio().ok() } else { Some(cfg.exact_ratio()?) };
    let case = match exact {
        Some(r) if r < Rational64::from_integer(1) => SystemCase { case_id: CaseId::I, k: None, p_over_q: None },
        None => SystemCase { case_id: CaseId::I, k: None, p_over_q: None },
        Some(r) if *r.denom() == 1 => SystemCase { case_id: CaseId::II, k: Some(*r.numer()), p_over_q: Some(r) },
        Some(r) => SystemCase { case_id: CaseId::III, k: None, p_over_q: Some(r) },
    };
    Ok(case)
}

/// Half-open interval `[lo, hi)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    /// `[-width/2, width/2)`.
    pub fn centered(width: f64) -> Self {
        Self { lo: -width / 2.0, hi: width / 2.0 }
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo && x < self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

impl std::fmt::Display for Interval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}, {})", self.lo, self.hi)
    }
}

/// Single-carrier unambiguous velocity range.
pub fn unambiguous_range(cfg: &RadarConfig, lambda: f64) -> Result<Interval> {
    let m = cfg.blind_speeds(lambda)?;
    Ok(match classify_case(cfg)?.case_id {
        CaseId::I => Interval::centered(m.v_t()),
        CaseId::II | CaseId::III => Interval::centered(m.v_s()),
    })
}

/// Image-domain azimuth displacement `-v_time R_0 / v_a` (m).
pub fn azimuth_shift(v_time: f64, cfg: &RadarConfig) -> f64 {
    -v_time * cfg.r_0 / cfg.v_a
}

/// `lambda f_p R_0 / (4 v_a)` (m).
pub fn max_azimuth_shift(cfg: &RadarConfig, lambda: f64) -> f64 {
    lambda * cfg.f_p * cfg.r_0 / (4.0 * cfg.v_a)
}

/// Motion of a point target, in the ground-range geometry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TargetMotion {
    /// Cross-range (along-track) velocity (m/s).
    pub v_x: f64,
    /// Range velocity (m/s).
    pub v_y: f64,
    /// Ground-range coordinate at t = 0 (m).
    pub y_0: f64,
}

impl TargetMotion {
    /// Purely range-moving target at ground range `y_0` with radial velocity `v_r`.
    pub fn radial(v_r: f64, y_0: f64, r_0: f64) -> Self {
        Self { v_x: 0.0, v_y: v_r * r_0 / y_0, y_0 }
    }

    /// `v_y y_0 / R_0`.
    pub fn radial_velocity(&self, r_0: f64) -> f64 {
        self.v_y * self.y_0 / r_0
    }
}

/// Image-domain response class of a moving target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TargetType {
    /// Well focused, no TDDA.
    TypeI,
    /// Defocused (time-bandwidth product far above one).
    TypeII,
    /// Focused along a skewed line, with TDDA.
    TypeIII,
}

/// Thresholds behind [`classify_target_type`], exposed for diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TypeThresholds {
    pub delta: f64,
    pub v_0: f64,
    pub rho_1: f64,
    pub rho_2: Option<f64>,
}

pub fn type_thresholds(cfg: &RadarConfig, lambda: f64, motion: &TargetMotion, n_t: i64) -> Result<TypeThresholds> {
    if motion.v_y.abs() >= cfg.v_a {
        return Err(Error::domain(format!(
            "|v_y| = {} must be below the platform velocity {}",
            motion.v_y.abs(),
            cfg.v_a
        )));
    }
    let root = (cfg.v_a * cfg.v_a - motion.v_y * motion.v_y).sqrt();
    let rho_2 = (n_t != 0).then(|| {
        let x = SPEED_OF_LIGHT / (lambda * cfg.b_w * n_t as f64 * cfg.f_p);
        x * x
    });
    Ok(TypeThresholds { delta: 4.0 * root / (lambda * cfg.r_0), v_0: cfg.v_a - root, rho_1: cfg.t_s * cfg.t_s, rho_2 })
}

pub fn classify_target_type(cfg: &RadarConfig, lambda: f64, motion: &TargetMotion, n_t: i64) -> Result<TargetType> {
    let th = type_thresholds(cfg, lambda, motion, n_t)?;
    let offset = (motion.v_x - th.v_0).abs();
    Ok(match th.rho_2 {
        None if offset <= 1.0 / (th.delta * th.rho_1) => TargetType::TypeI,
        None => TargetType::TypeII,
        Some(rho_2) if offset <= 1.0 / (th.delta * rho_2) => TargetType::TypeIII,
        Some(_) => TargetType::TypeII,
    })
}

/// Parameter varied by [`sweep_determinable_size`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepParameter {
    Prf,
    Spacing,
    PlatformVelocity,
}

/// Single-carrier determinable velocity size as one parameter varies.
pub fn sweep_determinable_size(
    cfg: &RadarConfig,
    lambda: f64,
    vary: SweepParameter,
    grid: &[f64],
) -> Result<Vec<(f64, f64)>> {
    grid.iter()
        .map(|&value| {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::domain(format!("sweep values must be positive, got {value}")));
            }
            let (mut d, mut v_a, mut f_p) = (cfg.d, cfg.v_a, cfg.f_p);
            match vary {
                SweepParameter::Prf => f_p = value,
                SweepParameter::Spacing => d = value,
                SweepParameter::PlatformVelocity => v_a = value,
            }
            let size = if d < 2.0 * v_a / f_p { lambda * f_p / 2.0 } else { lambda * v_a / d };
            Ok((value, size))
        })
        .collect()
}

/// Interferometric velocity resolution `V_S / (M - 1)`.
pub fn velocity_resolution(cfg: &RadarConfig, lambda: f64) -> f64 {
    lambda * cfg.v_a / (cfg.d * (cfg.m_ch as f64 - 1.0))
}
