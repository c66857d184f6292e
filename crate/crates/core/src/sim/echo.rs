use std::f64::consts::PI;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::system::{RadarConfig, TargetMotion};

/// Complex white Gaussian noise relative to a unit-amplitude echo.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Noise {
    pub snr_db: f64,
    pub seed: u64,
}

/// Point-target echoes after range compression, one row per channel.
#[derive(Debug, Clone, PartialEq)]
pub struct SlowTimeCube {
    /// Row-major `(channel, pulse)`.
    pub samples: Vec<Complex64>,
    pub m_ch: usize,
    pub n_pulses: usize,
    pub f_p: f64,
    pub lambda: f64,
    /// Static-scene Doppler rate `-2 v_a^2 / (lambda R_0)` (Hz/s).
    pub f_r: f64,
}

impl SlowTimeCube {
    pub fn channel(&self, m: usize) -> &[Complex64] {
        &self.samples[m * self.n_pulses..(m + 1) * self.n_pulses]
    }

    /// Slow time of pulse `n`, centered on the aperture.
    pub fn time(&self, n: usize) -> f64 {
        (n as f64 - (self.n_pulses as f64 - 1.0) / 2.0) / self.f_p
    }
}

/// Second-order slant-range history of each channel, sampled at the PRF.
pub fn simulate_echo(
    cfg: &RadarConfig,
    motion: &TargetMotion,
    lambda: f64,
    n_pulses: usize,
    noise: Option<Noise>,
) -> Result<SlowTimeCube> {
    cfg.validate()?;
    if n_pulses < 2 {
        return Err(Error::domain(format!("need at least two pulses, got {n_pulses}")));
    }
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::domain(format!("wavelength must be positive, got {lambda}")));
    }
    let (r0, d) = (cfg.r_0, cfg.d);
    let v_r = motion.radial_velocity(r0);
    let v_rel = cfg.v_a - motion.v_x;
    let f_rt = -2.0 * (v_rel * v_rel + motion.v_y * motion.v_y) / (lambda * r0);

    let mut cube = SlowTimeCube {
        samples: Vec::with_capacity(cfg.m_ch * n_pulses),
        m_ch: cfg.m_ch,
        n_pulses,
        f_p: cfg.f_p,
        lambda,
        f_r: -2.0 * cfg.v_a * cfg.v_a / (lambda * r0),
    };
    for m in 0..cfg.m_ch {
        let mf = m as f64;
        let f_dm = -2.0 * v_r / lambda + v_rel * mf * d / (lambda * r0);
        let phi = mf * mf * d * d / (2.0 * r0);
        for n in 0..n_pulses {
            let t = cube.time(n);
            let range = 2.0 * r0 - lambda * f_dm * t - 0.5 * lambda * f_rt * t * t + phi;
            // reduce before scaling to keep the phase well conditioned
            let cycles = (range / lambda).rem_euclid(1.0);
            cube.samples.push(Complex64::from_polar(1.0, -2.0 * PI * cycles));
        }
    }

    if let Some(noise) = noise {
        let sigma = (10f64.powf(-noise.snr_db / 10.0) / 2.0).sqrt();
        let normal = Normal::new(0.0, sigma).map_err(|e| Error::domain(e.to_string()))?;
        let mut rng = ChaCha8Rng::seed_from_u64(noise.seed);
        for s in &mut cube.samples {
            *s += Complex64::new(normal.sample(&mut rng), normal.sample(&mut rng));
        }
    }
    Ok(cube)
}
