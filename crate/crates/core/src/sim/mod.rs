//! Slow-time phase simulation, Doppler/VSAR estimation and Monte Carlo
//! accuracy curves.

mod echo;
mod estimate;
mod monte_carlo;

pub use echo::{simulate_echo, Noise, SlowTimeCube};
pub use estimate::{cross_channel_vector, estimate_doppler, vsar_estimate_vspace, DEFAULT_ZERO_PAD};
pub use monte_carlo::{monte_carlo_rmse, xi_grid, RmseCurve, RmsePoint};
