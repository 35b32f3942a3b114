//! Swerling-I thresholds, the exact K-pulse oracle, the `K^kappa` fit and the
//! maximum-range fixed point with beam-dwell cap.

use crate::error::{Error, Result};
use crate::link::{raw_snr, SystemParams, Target};
use crate::num::{to_db, Real};
use crate::processing::{is_ambiguous, mode_a, mode_gains, optimal_cpi, CpiPlan, ProcessingMode};
use crate::roots::brent;
use crate::stats::gamma::{gamma_pq, inverse_regularized_upper_gamma, ln_gamma, lower_series_sum};

/// Single-CPI threshold `ln(P_fa)/ln(P_d) - 1` for a Swerling-I target.
pub fn swerling_threshold<T: Real>(pd: T, pfa: T) -> Result<T> {
    check_probabilities(pd, pfa)?;
    Ok(pfa.ln() / pd.ln() - T::one())
}

fn check_probabilities<T: Real>(pd: T, pfa: T) -> Result<()> {
    if !(pfa > T::zero() && pfa < pd && pd < T::one()) {
        return Err(Error::Domain(format!("need 0 < P_fa < P_d < 1, got P_fa = {pfa}, P_d = {pd}")));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectionSpec<T> {
    pub pd: T,
    pub pfa: T,
    pub threshold: T,
    pub kappa: T,
}

impl<T: Real> DetectionSpec<T> {
    pub fn new(pd: T, pfa: T, kappa: T) -> Result<Self> {
        Ok(Self { pd, pfa, threshold: swerling_threshold(pd, pfa)?, kappa })
    }

    pub fn from_params(params: &SystemParams<T>) -> Result<Self> {
        Self::new(params.pd, params.pfa, params.kappa)
    }
}

/// Square-law threshold on the sum of `K` unit-mean noise powers, i.e. the Gamma(K,1)
/// quantile at `1 - P_fa`.
pub fn noise_threshold<T: Real>(cpis: u32, pfa: T) -> Result<T> {
    if cpis == 0 {
        return Err(Error::Domain("CPI count must be at least 1".into()));
    }
    inverse_regularized_upper_gamma(T::lit(cpis as f64), pfa)
}

/// Exact detection probability of a Swerling-I target (constant over the `K` CPIs)
/// after square-law integration, for a given noise-only threshold.
pub fn swerling1_pd_at_threshold<T: Real>(snr: T, cpis: u32, threshold: T) -> T {
    let t = threshold;
    if cpis == 1 {
        return (-t / (T::one() + snr)).exp();
    }
    let k = T::lit(cpis as f64);
    let a = k - T::one();
    let tail = gamma_pq(k, t).1;
    if !(snr > T::zero()) {
        return tail;
    }
    let ks = k * snr;
    let r = T::one() + T::one() / ks;
    let y = t / r;
    let q_small = gamma_pq(a, t).1;
    // r^{K-1} e^{-T/(1+Ks)} P(K-1, T/r), rearranged so that nothing overflows.
    let term = if y < a + T::one() {
        (-t + a * t.ln() - ln_gamma(a)).exp() * lower_series_sum(a, y)
    } else {
        (a * r.ln() - t / (T::one() + ks)).exp() * gamma_pq(a, y).0
    };
    (q_small + term).min(T::one()).max(T::zero())
}

/// Exact Swerling-I `K`-CPI detection probability at per-CPI mean SNR `snr`.
pub fn swerling1_pd_exact<T: Real>(snr: T, cpis: u32, pfa: T) -> Result<T> {
    Ok(swerling1_pd_at_threshold(snr, cpis, noise_threshold(cpis, pfa)?))
}

/// Per-CPI SNR at which the exact `K`-CPI detection probability equals `pd`.
pub fn required_snr_exact<T: Real>(pd: T, pfa: T, cpis: u32) -> Result<T> {
    check_probabilities(pd, pfa)?;
    let t = noise_threshold(cpis, pfa)?;
    let f = |u: T| swerling1_pd_at_threshold(u.exp(), cpis, t) - pd;
    let (mut lo, mut hi) = (T::lit(-12.0), T::lit(12.0));
    while f(lo) > T::zero() {
        lo -= T::lit(8.0);
    }
    while f(hi) < T::zero() {
        hi += T::lit(8.0);
        if hi > T::lit(200.0) {
            return Err(Error::NotBracketed { lo: lo.as_f64(), hi: hi.as_f64() });
        }
    }
    Ok(brent(f, lo, hi, T::lit(1e-13), 200)?.exp())
}

#[derive(Debug, Clone, PartialEq)]
pub struct KappaPoint<T> {
    pub cpis: u32,
    pub required_snr: T,
    /// Exact required-SNR reduction relative to one CPI, dB.
    pub exact_gain_db: T,
    /// `kappa 10 log10 K - exact_gain_db`.
    pub residual_db: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KappaFit<T> {
    pub kappa: T,
    pub max_residual_db: T,
    pub points: Vec<KappaPoint<T>>,
}

/// Least-squares `kappa` in the log domain: minimizes `sum (kappa ln K - ln g_K)^2`,
/// where `g_K` is the exact reduction in required per-CPI SNR.
pub fn fit_kappa<T: Real>(pd: T, pfa: T, cpis: &[u32]) -> Result<KappaFit<T>> {
    if cpis.iter().any(|&k| k == 0 || k > 500) {
        return Err(Error::Domain("CPI counts must lie in [1, 500]".into()));
    }
    let s1 = required_snr_exact(pd, pfa, 1)?;
    let mut num = T::zero();
    let mut den = T::zero();
    let mut pts = Vec::with_capacity(cpis.len());
    for &k in cpis {
        let s = required_snr_exact(pd, pfa, k)?;
        let lk = T::lit(k as f64).ln();
        let lg = (s1 / s).ln();
        num += lk * lg;
        den += lk * lk;
        pts.push(KappaPoint { cpis: k, required_snr: s, exact_gain_db: to_db(s1 / s), residual_db: T::zero() });
    }
    if !(den > T::zero()) {
        return Err(Error::Degenerate("need at least one CPI count above 1".into()));
    }
    let kappa = num / den;
    let mut worst = T::zero();
    for p in &mut pts {
        p.residual_db = kappa * T::lit(10.0) * T::lit(p.cpis as f64).log10() - p.exact_gain_db;
        worst = worst.max(p.residual_db.abs());
    }
    Ok(KappaFit { kappa, max_residual_db: worst, points: pts })
}

/// How the `K` CPIs and `M` symbols are chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Sensing<T> {
    /// Fixed `M` symbols per CPI and `K` CPIs.
    Snapshot { symbols: usize, cpis: u32 },
    /// Migration-limited CPI and duty-cycled budget over an observation window.
    Session { t_obs: T, rho: T },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Integration {
    /// `K^kappa` law with the single-CPI threshold.
    Kappa,
    /// Exact Swerling-I `K`-pulse requirement.
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModePolicy {
    /// Higher-gain mode from the processing module.
    Adaptive,
    /// Always full-band 2D-FFT.
    ForceA,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DwellChord {
    /// Full beam diameter at range: `2 R tan(theta/2)`.
    Diametric,
    /// Mean chord of a disc, `pi/4` of the diameter.
    Average,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions<T> {
    pub dwell_cap: bool,
    pub chord: DwellChord,
    pub integration: Integration,
    pub mode: ModePolicy,
    /// Allow fractional `K` (relaxation); integer CPIs otherwise.
    pub continuous_k: bool,
    pub rel_tol: T,
    pub max_iter: usize,
}

impl<T: Real> Default for SolverOptions<T> {
    fn default() -> Self {
        Self {
            dwell_cap: true,
            chord: DwellChord::Diametric,
            integration: Integration::Kappa,
            mode: ModePolicy::Adaptive,
            continuous_k: false,
            rel_tol: T::lit(1e-3),
            max_iter: 50,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WarningTime<T> {
    Finite(T),
    Unbounded,
}

impl<T: Real> WarningTime<T> {
    pub fn seconds(&self) -> T {
        match *self {
            WarningTime::Finite(s) => s,
            WarningTime::Unbounded => T::infinity(),
        }
    }
}

/// `r_max / v_rel`; unbounded when the debris is not closing.
pub fn warning_time<T: Real>(r_max: T, v_rel: T) -> WarningTime<T> {
    if v_rel > T::zero() {
        WarningTime::Finite(r_max / v_rel)
    } else {
        WarningTime::Unbounded
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DetectionOutcome<T> {
    pub r_max: T,
    pub cpis_used: T,
    pub cpis_budget: T,
    pub cpi_duration: T,
    pub symbols: usize,
    /// `None` when the dwell cap is disabled or `v_rel = 0`.
    pub dwell_time: Option<T>,
    pub dwell_limited: bool,
    pub warning_time: WarningTime<T>,
    pub mode: ProcessingMode<T>,
    pub plan: Option<CpiPlan<T>>,
    pub iterations: usize,
    pub damped: bool,
    pub history: Vec<T>,
    pub ambiguous: bool,
}

/// Closed-form maximum range with `K` CPIs of `M = symbols` under the `K^kappa` law,
/// Mode A processing and no dwell cap.
pub fn rmax_closed_form<T: Real>(rcs: T, v_rel: T, symbols: usize, cpis: u32, params: &SystemParams<T>) -> Result<T> {
    let th = swerling_threshold(params.pd, params.pfa)?;
    let g = mode_gains(v_rel, symbols, params).gain_a;
    let k = T::lit(cpis as f64).powf(params.kappa);
    Ok((raw_snr(T::one(), rcs, params) * g * k / th).powf(T::lit(0.25)))
}

fn dwell_time<T: Real>(r: T, v: T, chord: DwellChord, params: &SystemParams<T>) -> T {
    let d = T::lit(2.0) * r * (params.beamwidth_rad / T::lit(2.0)).tan();
    let d = match chord {
        DwellChord::Diametric => d,
        DwellChord::Average => d * T::FRAC_PI_4(),
    };
    d / v
}

/// Maximum detection range with the beam-dwell cap resolved by fixed-point iteration.
pub fn solve_rmax<T: Real>(
    target: &Target<T>,
    v_rel: T,
    sensing: Sensing<T>,
    params: &SystemParams<T>,
    opts: &SolverOptions<T>,
) -> Result<DetectionOutcome<T>> {
    if v_rel < T::zero() || !v_rel.is_finite() {
        return Err(Error::Domain(format!("relative velocity must be finite and non-negative, got {v_rel}")));
    }
    let spec = DetectionSpec::from_params(params)?;
    let (symbols, budget, t_cpi, plan) = match sensing {
        Sensing::Snapshot { symbols, cpis } => {
            if symbols == 0 || cpis == 0 {
                return Err(Error::Domain("snapshot needs M >= 1 and K >= 1".into()));
            }
            let t = T::from_count(symbols) * params.symbol_duration();
            (symbols, T::lit(cpis as f64), t, None)
        }
        Sensing::Session { t_obs, rho } => {
            let plan = optimal_cpi(v_rel, t_obs, rho, params)?;
            let budget = if opts.continuous_k {
                (rho * t_obs / plan.cpi_duration).max(T::one())
            } else {
                T::lit(plan.cpis as f64)
            };
            (plan.symbols, budget, plan.cpi_duration, Some(plan))
        }
    };
    let mode = match opts.mode {
        ModePolicy::Adaptive => mode_gains(v_rel, symbols, params).best,
        ModePolicy::ForceA => {
            let mut m = mode_a(v_rel, params);
            m.gain = mode_gains(v_rel, symbols, params).gain_a;
            m
        }
    };
    let numerator = raw_snr(T::one(), target.rcs_m2, params) * mode.gain;
    let range_for = |k: T| -> Result<T> {
        let need = match opts.integration {
            Integration::Kappa => spec.threshold / k.powf(spec.kappa),
            Integration::Exact => {
                let kk = k.floor().to_u32().unwrap_or(1).max(1);
                required_snr_exact(spec.pd, spec.pfa, kk)?
            }
        };
        Ok((numerator / need).powf(T::lit(0.25)))
    };
    let cap = opts.dwell_cap && v_rel > T::zero();
    let k_at = |r: T| -> (T, Option<T>) {
        if !cap {
            return (budget, None);
        }
        let td = dwell_time(r, v_rel, opts.chord, params);
        let mut k = budget.min(td / t_cpi);
        if !opts.continuous_k {
            k = k.floor();
        }
        (k.max(T::one()), Some(td))
    };

    let mut r = range_for(budget)?;
    let mut history = vec![r];
    let mut damped = false;
    let mut last_step = T::zero();
    for it in 1..=opts.max_iter {
        let (k, _) = k_at(r);
        let target_r = range_for(k)?;
        let step = target_r - r;
        let next = if it > 1 && step * last_step < T::zero() {
            damped = true;
            r + T::lit(0.5) * step
        } else {
            target_r
        };
        last_step = next - r;
        let mut converged = (next - r).abs() <= opts.rel_tol * r;
        r = next;
        history.push(r);
        let (k_final, td) = k_at(r);
        if !opts.continuous_k && k_final != k {
            converged = false;
        }
        if converged {
            let k = k_final;
            return Ok(DetectionOutcome {
                r_max: r,
                cpis_used: k,
                cpis_budget: budget,
                cpi_duration: t_cpi,
                symbols,
                dwell_time: td,
                dwell_limited: k < budget,
                warning_time: warning_time(r, v_rel),
                mode,
                plan,
                iterations: it,
                damped,
                history,
                ambiguous: is_ambiguous(v_rel, params),
            });
        }
    }
    Err(Error::NonConvergence { history: history.iter().map(|x| x.as_f64()).collect() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::link::rcs_from_diameter;
    use proptest::prelude::*;

    fn p() -> SystemParams<f64> {
        SystemParams::default()
    }

    fn snapshot(d: f64, v: f64, k: u32) -> DetectionOutcome<f64> {
        let p = p();
        let t = Target::from_diameter(d, &p).unwrap();
        solve_rmax(&t, v, Sensing::Snapshot { symbols: 64, cpis: k }, &p, &SolverOptions::default()).unwrap()
    }

    #[test]
    fn threshold_values() {
        let t = swerling_threshold(0.9, 1e-6_f64).unwrap();
        assert!((t - 130.1261).abs() < 1e-3);
        assert!((to_db(t) - 21.144).abs() < 1e-3);
        let h = swerling_threshold(0.5, 1e-6_f64).unwrap();
        assert!((h - 18.9316).abs() < 1e-3 && (to_db(h) - 12.772).abs() < 1e-3);
        assert!(swerling_threshold(1e-6 * 1.000_001, 1e-6_f64).unwrap() < 1e-5);
        assert!(swerling_threshold(0.4, 0.5).is_err());
        assert!(swerling_threshold(1.0, 1e-6_f64).is_err());
    }

    #[test]
    fn exact_single_cpi_matches_closed_form() {
        let t = swerling_threshold(0.9, 1e-6_f64).unwrap();
        let pd = swerling1_pd_exact(t, 1, 1e-6_f64).unwrap();
        assert!((pd - 0.9).abs() < 1e-12);
        for &s in &[0.0, 1.0, 10.0, 300.0] {
            let pd = swerling1_pd_exact(s, 1, 1e-6_f64).unwrap();
            assert!((pd - 1e-6_f64.powf(1.0 / (1.0 + s))).abs() < 1e-14);
        }
    }

    #[test]
    fn zero_snr_gives_false_alarm_rate() {
        for k in [1, 2, 16, 256] {
            let pd = swerling1_pd_exact(0.0, k, 1e-6_f64).unwrap();
            assert!((pd / 1e-6 - 1.0).abs() < 1e-8, "K={k}: {pd}");
        }
    }

    #[test]
    fn exact_pd_frozen_values() {
        // Quadrature of the noncentral chi-square tail over the exponential target power.
        let cases = [(16, 16.30, 0.899_987_4), (2, 40.0, 0.823_981_4), (256, 0.1, 0.050_432_7), (16, 5.0, 0.711_924_9)];
        for (k, s, want) in cases {
            let got = swerling1_pd_exact(s, k, 1e-6_f64).unwrap();
            assert!((got - want).abs() < 2e-5, "K={k} s={s}: {got} vs {want}");
        }
    }

    #[test]
    fn exact_pd_small_snr_is_finite() {
        for k in [2, 16, 128, 500] {
            for &s in &[1e-9, 1e-5, 1e-3, 0.05] {
                let pd = swerling1_pd_exact(s, k, 1e-6_f64).unwrap();
                assert!(pd.is_finite() && (1e-6..1.0).contains(&pd), "K={k} s={s} pd={pd}");
            }
        }
    }

    #[test]
    fn required_snr_at_16_within_a_db_and_a_quarter() {
        let exact = required_snr_exact(0.9, 1e-6, 16).unwrap();
        let approx = swerling_threshold(0.9, 1e-6_f64).unwrap() / 16f64.powf(0.85);
        let offset = to_db(exact / approx);
        assert!((offset - 1.21).abs() < 0.02, "{offset}");
    }

    #[test]
    fn kappa_fit_needs_two_points() {
        assert!(matches!(fit_kappa(0.9, 1e-6, &[1]), Err(Error::Degenerate(_))));
        assert!(fit_kappa::<f64>(0.9, 1e-6, &[0, 2]).is_err());
    }

    #[test]
    fn kappa_fit_small_range() {
        let f = fit_kappa(0.9, 1e-6, &[1, 2, 4, 8]).unwrap();
        assert!(f.kappa > 0.7 && f.kappa < 0.85, "{}", f.kappa);
        assert_eq!(f.points[0].exact_gain_db, 0.0);
    }

    #[test]
    fn table_rows() {
        let want = [(0.3, 52.9), (0.5, 68.3), (1.0, 96.6), (2.0, 136.6), (5.0, 216.0)];
        for (d, km) in want {
            let o = snapshot(d, 10.0, 16);
            assert!((o.r_max / 1e3 - km).abs() < 0.1, "d={d}: {}", o.r_max);
            assert!(!o.dwell_limited && o.iterations < 10);
            assert_eq!(o.cpis_used, 16.0);
        }
    }

    #[test]
    fn k_sweep_and_high_velocity() {
        assert!((snapshot(1.0, 10.0, 1).r_max / 1e3 - 53.59).abs() < 0.05);
        assert!((snapshot(1.0, 10.0, 256).r_max / 1e3 - 174.1).abs() < 0.1);
        let p = p();
        let t = Target::from_diameter(1.0, &p).unwrap();
        let opts = SolverOptions { mode: ModePolicy::ForceA, ..SolverOptions::default() };
        let o = solve_rmax(&t, 500.0, Sensing::Snapshot { symbols: 64, cpis: 16 }, &p, &opts).unwrap();
        assert!((o.r_max / 1e3 - 27.9).abs() < 0.1, "{}", o.r_max);
        assert!(o.ambiguous);
    }

    #[test]
    fn no_cap_equals_closed_form() {
        let p = p();
        let t = Target::from_diameter(1.0, &p).unwrap();
        let opts = SolverOptions { dwell_cap: false, ..SolverOptions::default() };
        for k in [1, 16, 256] {
            let o = solve_rmax(&t, 10.0, Sensing::Snapshot { symbols: 64, cpis: k }, &p, &opts).unwrap();
            let c = rmax_closed_form(t.rcs_m2, 10.0, 64, k, &p).unwrap();
            assert!((o.r_max / c - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn session_example() {
        let p = p();
        let t = Target::from_diameter(1.0, &p).unwrap();
        let o = solve_rmax(&t, 10.0, Sensing::Session { t_obs: 60.0, rho: 0.6 }, &p, &SolverOptions::default()).unwrap();
        assert_eq!(o.cpis_used, 240.0);
        assert!((o.r_max / 1e3 - 649.0).abs() < 2.0, "{}", o.r_max);
        assert!(!o.dwell_limited);
    }

    #[test]
    fn dwell_cap_binds_at_high_velocity_session() {
        let p = p();
        let t = Target::from_diameter(1.0, &p).unwrap();
        let o = solve_rmax(&t, 1500.0, Sensing::Session { t_obs: 60.0, rho: 1.0 }, &p, &SolverOptions::default())
            .unwrap();
        assert!(o.dwell_limited && o.cpis_used < o.cpis_budget);
        let td = o.dwell_time.unwrap();
        assert!((td - 2.0 * o.r_max * (p.beamwidth_rad / 2.0).tan() / 1500.0).abs() < 1e-9 * td);
        assert!(o.cpis_used <= (td / o.cpi_duration).floor());
        let avg = SolverOptions { chord: DwellChord::Average, ..SolverOptions::default() };
        let oa = solve_rmax(&t, 1500.0, Sensing::Session { t_obs: 60.0, rho: 1.0 }, &p, &avg).unwrap();
        assert!(oa.r_max < o.r_max);
    }

    #[test]
    fn zero_velocity_disables_cap() {
        let o = snapshot(1.0, 0.0, 16);
        assert!(o.dwell_time.is_none() && !o.dwell_limited);
        assert_eq!(o.warning_time, WarningTime::Unbounded);
    }

    #[test]
    fn warning_times() {
        assert_eq!(warning_time(97e3, 10.0), WarningTime::Finite(9700.0));
        assert!((warning_time(217e3_f64, 10.0).seconds() / 60.0 - 361.67).abs() < 0.01);
        assert_eq!(warning_time(1e5, 20.0).seconds() * 2.0, warning_time(1e5, 10.0).seconds());
    }

    #[test]
    fn exact_integration_mode() {
        let p = p();
        let t = Target::from_diameter(1.0, &p).unwrap();
        let opts = SolverOptions { integration: Integration::Exact, ..SolverOptions::default() };
        let o = solve_rmax(&t, 10.0, Sensing::Snapshot { symbols: 64, cpis: 16 }, &p, &opts).unwrap();
        let k = snapshot(1.0, 10.0, 16);
        let ratio = o.r_max / k.r_max;
        assert!((to_db(ratio) * 4.0 + 1.21).abs() < 0.05, "{ratio}");
    }

    #[test]
    fn generic_f32_threshold() {
        let t = swerling_threshold(0.9_f32, 1e-6).unwrap();
        assert!((to_db(t) - 21.144).abs() < 1e-3);
    }

    proptest! {
        #[test]
        fn rmax_non_decreasing_in_k(k in 1u32..400, v in 0.0f64..3000.0) {
            let p = p();
            let t = Target::from_diameter(1.0, &p).unwrap();
            let o = SolverOptions::default();
            let a = solve_rmax(&t, v, Sensing::Snapshot { symbols: 64, cpis: k }, &p, &o).unwrap();
            let b = solve_rmax(&t, v, Sensing::Snapshot { symbols: 64, cpis: k + 1 }, &p, &o).unwrap();
            prop_assert!(b.r_max >= a.r_max * (1.0 - 1e-3));
        }

        #[test]
        fn scaling_laws(f in 0.25f64..4.0) {
            let p = p();
            let base = rmax_closed_form(1.0, 10.0, 64, 16, &p).unwrap();
            prop_assert!((rmax_closed_form(f, 10.0, 64, 16, &p).unwrap() / base - f.powf(0.25)).abs() < 1e-12);
            let mut q = p;
            q.system_temp_k *= f;
            prop_assert!((rmax_closed_form(1.0, 10.0, 64, 16, &q).unwrap() / base - f.powf(-0.25)).abs() < 1e-12);
            let mut e = p;
            e.tx_power_w *= f;
            prop_assert!((rmax_closed_form(1.0, 10.0, 64, 16, &e).unwrap() / base - f.powf(0.25)).abs() < 1e-12);
        }

        #[test]
        fn diameter_scaling(d in 0.05f64..10.0) {
            let p = p();
            let a = rmax_closed_form(rcs_from_diameter(d, &p).unwrap(), 10.0, 64, 16, &p).unwrap();
            let b = rmax_closed_form(rcs_from_diameter(1.0, &p).unwrap(), 10.0, 64, 16, &p).unwrap();
            prop_assert!((a / b - d.sqrt()).abs() < 1e-12);
        }

        #[test]
        fn pd_monotone_in_snr(k in 1u32..64, s in 0.01f64..100.0) {
            let a = swerling1_pd_exact(s, k, 1e-6_f64).unwrap();
            let b = swerling1_pd_exact(s * 1.1, k, 1e-6_f64).unwrap();
            prop_assert!(b >= a && (0.0..=1.0).contains(&a));
        }
    }
}
