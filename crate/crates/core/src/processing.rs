//! ICI-aware coherent gain, Mode A / Mode B processing and CPI sizing.

use crate::error::{Error, Result};
use crate::link::SystemParams;
use crate::num::{sinc, Real};

/// Two-way Doppler shift `2 v f_c / c`.
pub fn doppler_shift<T: Real>(v_rel: T, params: &SystemParams<T>) -> T {
    T::lit(2.0) * v_rel * params.carrier_hz / T::c()
}

/// Coherent processing efficiency relative to `N M`: `sinc^2(f_d / delta_f) eta_impl`.
pub fn ici_efficiency<T: Real>(v_rel: T, delta_f: T, params: &SystemParams<T>) -> T {
    let s = sinc(doppler_shift(v_rel, params) / delta_f);
    s * s * params.eta_impl
}

/// Active subcarriers keeping `f_d / delta_f` below 0.2 in Mode B.
pub fn mode_b_subcarriers<T: Real>(v_rel: T, params: &SystemParams<T>) -> usize {
    let fd = doppler_shift(v_rel, params);
    let n = params.subcarriers;
    if !(fd > T::zero()) {
        return n;
    }
    let limit = (T::lit(0.2) * params.bandwidth_hz / fd).floor();
    if limit >= T::from_count(n) {
        n
    } else {
        limit.to_usize().unwrap_or(0).max(1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Full-band 2D-FFT.
    A,
    /// Keystone transform with reduced subcarriers.
    B,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::A => "A",
            Mode::B => "B",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProcessingMode<T> {
    pub mode: Mode,
    pub subcarriers: usize,
    pub gain: T,
    pub subcarrier_spacing: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeGains<T> {
    pub gain_a: T,
    pub gain_b: T,
    pub best: ProcessingMode<T>,
}

impl<T: Real> ModeGains<T> {
    pub fn best_gain(&self) -> T {
        self.best.gain
    }
}

/// Processing gains of both modes for `symbols` OFDM symbols per CPI; ties go to Mode A.
pub fn mode_gains<T: Real>(v_rel: T, symbols: usize, params: &SystemParams<T>) -> ModeGains<T> {
    let m = T::from_count(symbols);
    let n = params.subcarriers;
    let df_a = params.subcarrier_spacing();
    let gain_a = T::from_count(n) * m * ici_efficiency(v_rel, df_a, params);
    let n_b = mode_b_subcarriers(v_rel, params);
    let df_b = params.bandwidth_hz / T::from_count(n_b);
    let gain_b = T::from_count(n_b) * m * ici_efficiency(v_rel, df_b, params) * params.eta_kt;
    let best = if gain_b > gain_a {
        ProcessingMode { mode: Mode::B, subcarriers: n_b, gain: gain_b, subcarrier_spacing: df_b }
    } else {
        ProcessingMode { mode: Mode::A, subcarriers: n, gain: gain_a, subcarrier_spacing: df_a }
    };
    ModeGains { gain_a, gain_b, best }
}

/// Mode A at the configured `M`, as used by snapshot tables.
pub fn mode_a<T: Real>(v_rel: T, params: &SystemParams<T>) -> ProcessingMode<T> {
    let g = mode_gains(v_rel, params.symbols_per_cpi, params);
    ProcessingMode {
        mode: Mode::A,
        subcarriers: params.subcarriers,
        gain: g.gain_a,
        subcarrier_spacing: params.subcarrier_spacing(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CpiPlan<T> {
    pub cpi_duration: T,
    pub symbols: usize,
    pub cpis: u32,
    /// Range-migration limit `c / (2 B v)`; infinite at `v = 0`.
    pub migration_limit: T,
}

/// Longest CPI free of range migration and the number of CPIs that fit the sensing budget.
pub fn optimal_cpi<T: Real>(v_rel: T, t_obs: T, rho: T, params: &SystemParams<T>) -> Result<CpiPlan<T>> {
    if !(t_obs > T::zero()) {
        return Err(Error::Domain(format!("observation time must be positive, got {t_obs}")));
    }
    if !(rho > T::zero() && rho <= T::one()) {
        return Err(Error::Domain(format!("duty cycle must lie in (0, 1], got {rho}")));
    }
    if v_rel < T::zero() {
        return Err(Error::Domain(format!("relative velocity must be non-negative, got {v_rel}")));
    }
    let migration_limit = if v_rel > T::zero() {
        T::c() / (T::lit(2.0) * params.bandwidth_hz * v_rel)
    } else {
        T::infinity()
    };
    let budget = rho * t_obs;
    let t = migration_limit.min(t_obs).min(budget);
    let t_sym = params.symbol_duration();
    let symbols = (t / t_sym).floor().to_usize().unwrap_or(0).max(1);
    let cpis = (budget / t).floor().to_u32().unwrap_or(1).max(1);
    Ok(CpiPlan { cpi_duration: t, symbols, cpis, migration_limit })
}

/// Largest radial speed free of slow-time Doppler aliasing, `c / (4 f_c T_sym)`.
pub fn unambiguous_velocity<T: Real>(params: &SystemParams<T>) -> T {
    T::c() / (T::lit(4.0) * params.carrier_hz * params.symbol_duration())
}

pub fn is_ambiguous<T: Real>(v_rel: T, params: &SystemParams<T>) -> bool {
    v_rel > unambiguous_velocity(params)
}

/// Velocities in `[lo, hi]` where `G_B - G_A` changes sign between scan points
/// spaced `step` apart, each refined by bisection.
///
/// The integer subcarrier count makes `G_B` a staircase, so scans much finer than
/// 1 m/s can resolve several sign changes inside the same sub-m/s interval.
pub fn mode_crossovers<T: Real>(symbols: usize, lo: T, hi: T, step: T, params: &SystemParams<T>) -> Vec<T> {
    let diff = |v: T| {
        let g = mode_gains(v, symbols, params);
        g.gain_b - g.gain_a
    };
    let steps = ((hi - lo) / step).ceil().to_usize().unwrap_or(1).max(1);
    let h = (hi - lo) / T::from_count(steps);
    let mut out = Vec::new();
    let mut a = lo;
    let mut fa = diff(a);
    for i in 1..=steps {
        let b = lo + h * T::from_count(i);
        let fb = diff(b);
        if (fa <= T::zero()) != (fb <= T::zero()) {
            let (mut x0, mut x1) = (a, b);
            let s0 = fa <= T::zero();
            for _ in 0..80 {
                let mid = T::lit(0.5) * (x0 + x1);
                if (diff(mid) <= T::zero()) == s0 {
                    x0 = mid;
                } else {
                    x1 = mid;
                }
            }
            out.push(T::lit(0.5) * (x0 + x1));
        }
        a = b;
        fa = fb;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::to_db;
    use proptest::prelude::*;

    fn p() -> SystemParams<f64> {
        SystemParams::default()
    }

    #[test]
    fn ici_examples() {
        let p = p();
        assert_eq!(ici_efficiency(0.0, p.subcarrier_spacing(), &p), 0.56);
        let x = doppler_shift(500.0, &p) / p.subcarrier_spacing();
        assert!((x - 0.9222).abs() < 1e-3);
        let loss = -to_db(ici_efficiency(500.0, 97.66e3, &p) / p.eta_impl);
        assert!((loss - 21.57).abs() < 0.02, "{loss}");
        let x10 = doppler_shift(10.0, &p) / p.subcarrier_spacing();
        assert!((x10 - 0.0184).abs() < 5e-4);
        assert!(-to_db(ici_efficiency(10.0, p.subcarrier_spacing(), &p) / p.eta_impl) < 0.01);
    }

    #[test]
    fn subcarrier_counts() {
        let p = p();
        assert_eq!(mode_b_subcarriers(500.0, &p), 222);
        assert_eq!(mode_b_subcarriers(0.0, &p), 1024);
        assert_eq!(mode_b_subcarriers(1e-3, &p), 1024);
        assert_eq!(mode_b_subcarriers(1e6, &p), 1);
    }

    #[test]
    fn gains_at_500() {
        let p = p();
        let g = mode_gains(500.0, 64, &p);
        assert!((to_db(g.gain_a) - 24.08).abs() < 0.02);
        assert!((to_db(g.gain_b) - 37.46).abs() < 0.02);
        assert_eq!(g.best.mode, Mode::B);
        assert_eq!(g.best.subcarriers, 222);
        let g10 = mode_gains(10.0, 64, &p);
        assert_eq!(g10.best.mode, Mode::A);
        assert!((to_db(g10.best_gain()) - to_db(65536.0 * 0.56)).abs() < 0.05);
    }

    #[test]
    fn tie_goes_to_mode_a() {
        let mut p = p();
        p.eta_kt = 1.0;
        let g = mode_gains(0.0, 64, &p);
        assert_eq!(g.gain_a, g.gain_b);
        assert_eq!(g.best.mode, Mode::A);
    }

    #[test]
    fn unique_crossover() {
        let p = p();
        let x = mode_crossovers(64, 1.0, 2000.0, 1.0, &p);
        assert_eq!(x.len(), 1, "{x:?}");
        assert!((x[0] - 337.5).abs() < 1.0, "{}", x[0]);
        let fine = mode_crossovers(64, 1.0, 2000.0, 0.01, &p);
        assert!(fine.len() > 1);
        assert!(fine.iter().all(|v| (v - x[0]).abs() < 0.5), "{fine:?}");
    }

    #[test]
    fn mode_b_residual_ici_bounded_by_design_rule() {
        let p = p();
        let bound = -to_db(sinc(0.2_f64).powi(2));
        for i in 1..4000 {
            let v = i as f64 * 0.5;
            let n = mode_b_subcarriers(v, &p);
            let x = doppler_shift(v, &p) / (p.bandwidth_hz / n as f64);
            let loss = -to_db(sinc(x).powi(2));
            if n > 1 {
                assert!(x <= 0.2 + 1e-12 && loss <= bound + 1e-12, "v={v} loss={loss}");
            }
        }
        assert!((bound - 0.579).abs() < 1e-3);
    }

    #[test]
    fn cpi_examples() {
        let p = p();
        let a = optimal_cpi(10.0, 60.0, 0.6, &p).unwrap();
        assert!((a.cpi_duration - 0.1499).abs() < 1e-4);
        assert_eq!(a.symbols, (a.cpi_duration / p.symbol_duration()).floor() as usize);
        assert_eq!(a.cpis, 240);
        let b = optimal_cpi(500.0, 60.0, 0.6, &p).unwrap();
        assert!((b.cpi_duration - 3.0e-3).abs() < 1e-5);
        let z = optimal_cpi(0.0, 60.0, 1.0, &p).unwrap();
        assert_eq!(z.cpi_duration, 60.0);
        assert_eq!(z.cpis, 1);
        let zc = optimal_cpi(0.0, 60.0, 0.5, &p).unwrap();
        assert_eq!(zc.cpi_duration, 30.0);
        assert_eq!(zc.cpis, 1);
        assert!(optimal_cpi(10.0, 0.0, 0.5, &p).is_err());
        assert!(optimal_cpi(10.0, 1.0, 0.0, &p).is_err());
    }

    #[test]
    fn ambiguity() {
        let p = p();
        assert!((unambiguous_velocity(&p) - 240.96).abs() < 0.01);
        let mut q = p;
        q.subcarriers = p.subcarriers / 2;
        let half_tsym = p.symbol_duration() / 2.0;
        assert!((q.symbol_duration() - half_tsym).abs() < 1e-18);
        assert!((unambiguous_velocity(&q) / unambiguous_velocity(&p) - 2.0).abs() < 1e-12);
        assert!(is_ambiguous(250.0, &p) && !is_ambiguous(240.0, &p));
    }

    proptest! {
        #[test]
        fn gain_a_non_increasing_in_first_lobe(a in 0.0f64..1.0, b in 0.0f64..1.0) {
            let p = p();
            let vmax = 299_792_458.0 * p.subcarrier_spacing() / (2.0 * p.carrier_hz);
            let (lo, hi) = if a < b { (a * vmax, b * vmax) } else { (b * vmax, a * vmax) };
            prop_assert!(mode_gains(hi, 64, &p).gain_a <= mode_gains(lo, 64, &p).gain_a * (1.0 + 1e-12));
        }

        #[test]
        fn ordering_around_crossover(v in 1.0f64..2000.0) {
            let p = p();
            let g = mode_gains(v, 64, &p);
            if v > 338.0 { prop_assert!(g.gain_b >= g.gain_a); }
            if v < 337.0 { prop_assert!(g.gain_b <= g.gain_a); }
            prop_assert!(g.best.subcarriers >= 1 && g.best.subcarriers <= 1024);
        }

        #[test]
        fn efficiency_in_range(v in 0.0f64..1e5) {
            let p = p();
            let e = ici_efficiency(v, p.subcarrier_spacing(), &p);
            prop_assert!(e >= 0.0 && e <= p.eta_impl);
        }
    }
}
