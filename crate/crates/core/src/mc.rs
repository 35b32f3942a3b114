//! Monte Carlo check of Swerling-I K-CPI square-law detection.
//!
//! Trial `i` draws from its own ChaCha8 stream (`seed`, stream `i`), so estimates are
//! bit-identical for any thread partition. Every grid point reuses the same trial streams.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};
use rayon::prelude::*;

use crate::detect::{noise_threshold, swerling1_pd_exact, swerling_threshold, ModePolicy};
use crate::error::{Error, Result};
use crate::link::{raw_snr, SystemParams, Target};
use crate::num::{from_db, to_db};
use crate::processing::mode_gains;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McScenario {
    pub range_m: f64,
    pub diameter_m: f64,
    pub v_rel: f64,
    pub mode: ModePolicy,
    pub symbols: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McConfig {
    pub trials: usize,
    pub seed: u64,
    pub cpis: u32,
    pub pfa: f64,
    pub scenario: McScenario,
}

impl McConfig {
    pub fn new(trials: usize, seed: u64, cpis: u32, scenario: McScenario) -> Self {
        Self { trials, seed, cpis, pfa: 1e-6, scenario }
    }

    fn check(&self) -> Result<()> {
        if self.trials == 0 || self.cpis == 0 {
            return Err(Error::Domain("trials and CPI count must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub pd: f64,
    /// Binomial standard error.
    pub se: f64,
    pub detections: usize,
    pub trials: usize,
}

impl McEstimate {
    fn from_counts(detections: usize, trials: usize) -> Self {
        let pd = detections as f64 / trials as f64;
        Self { pd, se: (pd * (1.0 - pd) / trials as f64).sqrt(), detections, trials }
    }
}

/// Per-CPI mean SNR of the scenario, ICI factor included.
pub fn per_cpi_snr(s: &McScenario, params: &SystemParams<f64>) -> Result<f64> {
    let t = Target::from_diameter(s.diameter_m, params)?;
    let g = mode_gains(s.v_rel, s.symbols, params);
    let gain = match s.mode {
        ModePolicy::Adaptive => g.best_gain(),
        ModePolicy::ForceA => g.gain_a,
    };
    Ok(raw_snr(s.range_m, t.rcs_m2, params) * gain)
}

fn trial_rng(base: &ChaCha8Rng, trial: usize) -> ChaCha8Rng {
    let mut r = base.clone();
    r.set_stream(trial as u64);
    r.set_word_pos(0);
    r
}

fn cn(rng: &mut ChaCha8Rng) -> (f64, f64) {
    let a: f64 = rng.sample(StandardNormal);
    let b: f64 = rng.sample(StandardNormal);
    (a * std::f64::consts::FRAC_1_SQRT_2, b * std::f64::consts::FRAC_1_SQRT_2)
}

/// Target power for one trial (exponential, mean `snr`) and the K per-CPI square-law outputs.
fn draw(rng: &mut ChaCha8Rng, snr: f64, cpis: u32) -> (f64, f64) {
    let e: f64 = rng.sample(Exp1);
    let power = snr * e;
    let amp = power.sqrt();
    let mut stat = 0.0;
    for _ in 0..cpis {
        let (nr, ni) = cn(rng);
        let re = amp + nr;
        stat += re * re + ni * ni;
    }
    (power, stat)
}

/// Detection rate over `trials` at per-CPI mean SNR `snr` against a fixed noise threshold.
pub fn simulate_pd(snr: f64, cpis: u32, threshold: f64, trials: usize, seed: u64) -> McEstimate {
    let base = ChaCha8Rng::seed_from_u64(seed);
    let hits: usize = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(&base, i);
            (draw(&mut rng, snr, cpis).1 > threshold) as usize
        })
        .sum();
    McEstimate::from_counts(hits, trials)
}

pub fn mc_detection_probability(cfg: &McConfig, params: &SystemParams<f64>) -> Result<McEstimate> {
    cfg.check()?;
    let snr = per_cpi_snr(&cfg.scenario, params)?;
    let th = noise_threshold(cfg.cpis, cfg.pfa)?;
    Ok(simulate_pd(snr, cfg.cpis, th, cfg.trials, cfg.seed))
}

/// Per-CPI signal powers of `trials` consecutive trials (rows) for correlation checks.
pub fn signal_powers(snr: f64, cpis: u32, trials: usize, seed: u64) -> Vec<Vec<f64>> {
    let base = ChaCha8Rng::seed_from_u64(seed);
    (0..trials)
        .map(|i| {
            let p = draw(&mut trial_rng(&base, i), snr, cpis).0;
            vec![p; cpis as usize]
        })
        .collect()
}

/// Pearson correlation.
pub fn correlation(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let (ma, mb) = (a.iter().sum::<f64>() / n, b.iter().sum::<f64>() / n);
    let mut s = [0.0; 3];
    for (x, y) in a.iter().zip(b) {
        s[0] += (x - ma) * (y - mb);
        s[1] += (x - ma).powi(2);
        s[2] += (y - mb).powi(2);
    }
    s[0] / (s[1] * s[2]).sqrt()
}

/// `P_fa^{1/(1 + s K^kappa)}`: the single-CPI Swerling-I law with `K^kappa` integration gain.
pub fn pd_kappa(snr: f64, cpis: u32, pfa: f64, kappa: f64) -> f64 {
    pfa.powf(1.0 / (1.0 + snr * (cpis as f64).powf(kappa)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub range_km: f64,
    pub snr: f64,
    pub pd_kappa: f64,
    pub pd_exact: f64,
    pub pd_mc: f64,
    pub se: f64,
}

/// MC and closed-form `P_d` over a range grid (km) for the configured scenario.
pub fn mc_pd_vs_range_curve(cfg: &McConfig, ranges_km: &[f64], params: &SystemParams<f64>) -> Result<Vec<CurvePoint>> {
    cfg.check()?;
    if ranges_km.is_empty() {
        return Err(Error::Domain("range grid is empty".into()));
    }
    let th = noise_threshold(cfg.cpis, cfg.pfa)?;
    ranges_km
        .iter()
        .map(|r| {
            let sc = McScenario { range_m: r * 1000.0, ..cfg.scenario };
            let snr = per_cpi_snr(&sc, params)?;
            let est = simulate_pd(snr, cfg.cpis, th, cfg.trials, cfg.seed);
            Ok(CurvePoint {
                range_km: *r,
                snr,
                pd_kappa: pd_kappa(snr, cfg.cpis, cfg.pfa, params.kappa),
                pd_exact: swerling1_pd_exact(snr, cfg.cpis, cfg.pfa)?,
                pd_mc: est.pd,
                se: est.se,
            })
        })
        .collect()
}

/// First abscissa where `y` crosses `level`, linearly interpolated.
pub fn crossing(x: &[f64], y: &[f64], level: f64) -> Option<f64> {
    for i in 1..x.len() {
        let (a, b) = (y[i - 1] - level, y[i] - level);
        if a == 0.0 {
            return Some(x[i - 1]);
        }
        if a * b < 0.0 || b == 0.0 {
            return Some(x[i - 1] + (x[i] - x[i - 1]) * a / (a - b));
        }
    }
    None
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnrOffset {
    /// Per-CPI SNR (dB) where the MC estimate crosses `P_d`.
    pub mc_db: f64,
    /// Per-CPI SNR (dB) required by the `K^kappa` closed form.
    pub kappa_db: f64,
}

impl SnrOffset {
    pub fn offset_db(&self) -> f64 {
        self.mc_db - self.kappa_db
    }
}

/// Sweeps per-CPI SNR on a dB grid and locates the MC `P_d` crossing against the `K^kappa` requirement.
pub fn crossing_snr_offset(
    cpis: u32,
    pd: f64,
    pfa: f64,
    kappa: f64,
    snr_db: &[f64],
    trials: usize,
    seed: u64,
) -> Result<SnrOffset> {
    let th = noise_threshold(cpis, pfa)?;
    let pds: Vec<f64> = snr_db.iter().map(|s| simulate_pd(from_db(*s), cpis, th, trials, seed).pd).collect();
    let mc_db = crossing(snr_db, &pds, pd).ok_or_else(|| Error::Domain("MC curve does not cross the target P_d".into()))?;
    let kappa_db = to_db(swerling_threshold(pd, pfa)? / (cpis as f64).powf(kappa));
    Ok(SnrOffset { mc_db, kappa_db })
}

pub fn write_curve_csv<W: Write>(points: &[CurvePoint], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["range_km", "snr_per_cpi_db", "pd_kappa", "pd_exact", "pd_mc", "pd_mc_se"])?;
    for p in points {
        out.write_record([
            format!("{:.4}", p.range_km),
            format!("{:.4}", to_db(p.snr)),
            format!("{:.6}", p.pd_kappa),
            format!("{:.6}", p.pd_exact),
            format!("{:.6}", p.pd_mc),
            format!("{:.6}", p.se),
        ])?;
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detect::swerling1_pd_exact;

    #[test]
    fn k1_at_threshold_snr() {
        let th = noise_threshold(1, 1e-6).unwrap();
        let e = simulate_pd(130.1, 1, th, 20_000, 7);
        assert!((e.pd - 0.9).abs() < 0.01, "{e:?}");
    }

    #[test]
    fn noise_only_calibration() {
        let th = noise_threshold(1, 0.05).unwrap();
        let e = simulate_pd(0.0, 1, th, 20_000, 11);
        assert!((e.pd - 0.05).abs() < 0.005, "{e:?}");
        for k in [1, 4, 16] {
            let th = noise_threshold(k, 1e-3).unwrap();
            let e = simulate_pd(0.0, k, th, 40_000, 3);
            let se = (1e-3 * (1.0 - 1e-3) / 40_000.0_f64).sqrt();
            assert!((e.pd - 1e-3).abs() < 3.0 * se, "K={k} {e:?}");
        }
    }

    #[test]
    fn seed_determinism_and_partition_independence() {
        let a = simulate_pd(50.0, 8, noise_threshold(8, 1e-3).unwrap(), 5000, 42);
        let b = simulate_pd(50.0, 8, noise_threshold(8, 1e-3).unwrap(), 5000, 42);
        assert_eq!(a, b);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let c = pool.install(|| simulate_pd(50.0, 8, noise_threshold(8, 1e-3).unwrap(), 5000, 42));
        assert_eq!(a, c);
        let d = simulate_pd(50.0, 8, noise_threshold(8, 1e-3).unwrap(), 5000, 43);
        assert_ne!(a.detections, d.detections);
    }

    #[test]
    fn within_trial_powers_are_constant() {
        let rows = signal_powers(10.0, 4, 20_000, 5);
        let c0: Vec<f64> = rows.iter().map(|r| r[0]).collect();
        let c3: Vec<f64> = rows.iter().map(|r| r[3]).collect();
        assert!(correlation(&c0, &c3) > 0.99);
        let (x, y): (Vec<f64>, Vec<f64>) = rows.windows(2).map(|w| (w[0][0], w[1][0])).unzip();
        let c = correlation(&x, &y);
        assert!(c.abs() < 0.05, "{c}");
    }

    #[test]
    fn k16_matches_exact_within_binomial_bounds() {
        let th = noise_threshold(16, 1e-6).unwrap();
        for s_db in [8.0, 11.0, 13.0] {
            let s = from_db(s_db);
            let e = simulate_pd(s, 16, th, 20_000, 9);
            let p = swerling1_pd_exact(s, 16, 1e-6).unwrap();
            assert!((e.pd - p).abs() < 4.0 * e.se.max(1e-3), "{s_db} dB: {} vs {p}", e.pd);
        }
    }

    #[test]
    fn crossing_interpolation() {
        let x = [1.0, 2.0, 3.0];
        assert_eq!(crossing(&x, &[1.0, 0.8, 0.2], 0.9), Some(1.5));
        assert_eq!(crossing(&x, &[1.0, 0.95, 0.92], 0.9), None);
    }

    #[test]
    fn empty_grid_rejected() {
        let sc = McScenario { range_m: 1e5, diameter_m: 1.0, v_rel: 10.0, mode: ModePolicy::ForceA, symbols: 64 };
        let cfg = McConfig::new(100, 1, 16, sc);
        assert!(mc_pd_vs_range_curve(&cfg, &[], &SystemParams::default()).is_err());
        assert!(mc_detection_probability(&McConfig { trials: 0, ..cfg }, &SystemParams::default()).is_err());
    }
}
