use std::cmp::Ordering;
use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use super::SlowTimeCube;
use crate::error::{Error, Result};
use crate::system::RadarConfig;

/// Zero-padding factor of the cross-channel transform.
pub const DEFAULT_ZERO_PAD: usize = 1000;

/// Index and power of the strongest bin, if it clears three times the mean.
fn peak(spectrum: &[Complex64]) -> Result<usize> {
    let power: Vec<f64> = spectrum.iter().map(|c| c.norm_sqr()).collect();
    let mean = power.iter().sum::<f64>() / power.len() as f64;
    let (idx, max) =
        power.iter().enumerate().fold((0, f64::NEG_INFINITY), |acc, (i, &p)| if p > acc.1 { (i, p) } else { acc });
    if max.partial_cmp(&(3.0 * mean)) != Some(Ordering::Greater) {
        return Err(Error::Estimation(format!("no spectral peak above 3x the mean power ({max:e} vs {mean:e})")));
    }
    Ok(idx)
}

fn padded_spectrum(signal: &[Complex64], len: usize) -> Vec<Complex64> {
    let mut buf = signal.to_vec();
    buf.resize(len, Complex64::new(0.0, 0.0));
    FftPlanner::new().plan_fft_forward(len).process(&mut buf);
    buf
}

/// Maps DFT bin `k` of `len` onto `(-rate/2, rate/2]`.
fn bin_frequency(k: usize, len: usize, rate: f64) -> f64 {
    let f = k as f64 * rate / len as f64;
    if f > rate / 2.0 {
        f - rate
    } else {
        f
    }
}

fn check_zero_pad(zero_pad: usize) -> Result<()> {
    if zero_pad == 0 {
        return Err(Error::domain("zero-padding factor must be at least 1"));
    }
    Ok(())
}

fn dechirp(cube: &SlowTimeCube, m: usize) -> Vec<Complex64> {
    cube.channel(m)
        .iter()
        .enumerate()
        .map(|(n, s)| {
            let t = cube.time(n);
            s * Complex64::from_polar(1.0, -PI * cube.f_r * t * t)
        })
        .collect()
}

/// Ambiguous Doppler centroid of channel 0 in `(-f_p/2, f_p/2]`, after
/// removing the static-scene Doppler rate.
///
/// The zero-padded spectrum must show a peak; the estimate is then its
/// circular power centroid, which stays at the aperture-center Doppler when
/// the target's own Doppler rate leaves a residual chirp.
pub fn estimate_doppler(cube: &SlowTimeCube, zero_pad: usize) -> Result<f64> {
    check_zero_pad(zero_pad)?;
    let len = cube.n_pulses * zero_pad;
    let y = dechirp(cube, 0);
    let spectrum = padded_spectrum(&y, len);
    let k = peak(&spectrum)?;
    // power-weighted mean of exp(j 2 pi f / f_p) equals the lag-one
    // autocorrelation of the zero-padded sequence
    let acf: Complex64 = y.windows(2).map(|w| w[1] * w[0].conj()).sum();
    if acf.norm() == 0.0 {
        return Ok(bin_frequency(k, len, cube.f_p));
    }
    let f = acf.arg() / (2.0 * PI) * cube.f_p;
    Ok(if f <= -cube.f_p / 2.0 { f + cube.f_p } else { f })
}

/// Co-registered, compensated channel values at the estimated Doppler,
/// multiplied by the conjugate of channel 0. Their phase grows linearly in
/// the channel index with slope `-2 pi d v_time / (lambda v_a)`.
pub fn cross_channel_vector(cube: &SlowTimeCube, cfg: &RadarConfig, zero_pad: usize) -> Result<Vec<Complex64>> {
    check_zero_pad(zero_pad)?;
    if cube.m_ch < 2 {
        return Err(Error::domain("VSAR needs at least two channels"));
    }
    let (lambda, d, v_a, r0) = (cube.lambda, cfg.d, cfg.v_a, cfg.r_0);
    let f_hat = estimate_doppler(cube, zero_pad)?;
    let f_0 = v_a * d / (lambda * r0);

    let z: Vec<Complex64> = (0..cube.m_ch)
        .map(|m| {
            let mf = m as f64;
            let tau = mf * d / (2.0 * v_a);
            let w = dechirp(cube, m)
                .iter()
                .enumerate()
                .map(|(n, y)| {
                    let t = cube.time(n);
                    y * Complex64::from_polar(1.0, 2.0 * PI * (cube.f_r * tau - f_hat) * t)
                })
                .sum::<Complex64>();
            let registration = 2.0 * PI * (f_hat + mf * f_0) * tau + PI * cube.f_r * tau * tau;
            let compensation = PI * mf * mf * d * d / (2.0 * lambda * r0);
            w * Complex64::from_polar(1.0, registration + compensation)
        })
        .collect();
    let reference = z[0].conj();
    Ok(z.iter().map(|zm| zm * reference).collect())
}

/// Space-domain velocity in `[-V_S/2, V_S/2)` from the peak of the
/// zero-padded transform of [`cross_channel_vector`].
pub fn vsar_estimate_vspace(cube: &SlowTimeCube, cfg: &RadarConfig, zero_pad: usize) -> Result<f64> {
    let cross = cross_channel_vector(cube, cfg, zero_pad)?;
    let len = cube.m_ch * zero_pad;
    let f_s = 2.0 * cfg.v_a / cfg.d;
    let f_space = bin_frequency(peak(&padded_spectrum(&cross, len))?, len, f_s);
    Ok(-cube.lambda * f_space / 2.0)
}
