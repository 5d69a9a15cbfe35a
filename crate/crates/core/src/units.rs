//! Energies are carried as frequencies (E/h, in Hz) and durations in seconds.
//! The dynamical phase of an energy `e_hz` held for `t_s` is `2π·e_hz·t_s`.

use std::f64::consts::PI;

/// Parking frequency used throughout the benchmarks, ε₀/h.
pub const DEFAULT_EPS0_HZ: f64 = 5.5e9;
/// Maximum coupler strength, g_max/h.
pub const DEFAULT_GMAX_HZ: f64 = 50.0e6;

pub const MHZ: f64 = 1.0e6;
pub const GHZ: f64 = 1.0e9;
pub const NS: f64 = 1.0e-9;

/// Phase in radians accumulated by an energy `e_hz` over `t_s` seconds (E·t/ħ).
#[inline]
pub fn phase(e_hz: f64, t_s: f64) -> f64 {
    2.0 * PI * e_hz * t_s
}

/// Time in seconds needed to accumulate `angle` radians at energy `e_hz` (ħ·θ/E).
#[inline]
pub fn time_for_angle(angle: f64, e_hz: f64) -> f64 {
    angle / (2.0 * PI * e_hz)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_angle_at_50_mhz() {
        let t = time_for_angle(1.0, DEFAULT_GMAX_HZ);
        assert!((t - 3.183_098_861_837_907e-9).abs() < 1e-21);
        assert!((phase(DEFAULT_GMAX_HZ, t) - 1.0).abs() < 1e-15);
    }
}
