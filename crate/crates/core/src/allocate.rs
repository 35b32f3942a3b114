//! Sensing/relay duty-cycle allocation over the orbit.

use std::f64::consts::TAU;
use std::io::Write;

use rayon::prelude::*;

use crate::detect::{solve_rmax, swerling_threshold, Sensing, SolverOptions};
use crate::error::{Error, Result};
use crate::link::{raw_snr, SystemParams, Target};
use crate::orbits::campaign::EncounterProfile;
use crate::orbits::nrho::{phase_grid, OrbitSolution};
use crate::processing::{mode_gains, optimal_cpi, CpiPlan};
use crate::roots::brent;

/// Relay rate at apolune and perilune, Mbps.
pub const RATE_APOLUNE_MBPS: f64 = 104.0;
pub const RATE_PERILUNE_MBPS: f64 = 116.0;
pub const RATE_MIN_MBPS: f64 = 40.0;
/// Nominal Earth distances bounding the relay path-loss swing, km.
pub const EARTH_FAR_KM: f64 = 456_000.0;
pub const EARTH_NEAR_KM: f64 = 381_000.0;

/// One-way free-space path-loss difference between two distances, dB.
pub fn path_loss_span_db(far_km: f64, near_km: f64) -> f64 {
    20.0 * (far_km / near_km).log10()
}

#[derive(Debug, Clone, PartialEq)]
pub struct RelayModel {
    pub theta: Vec<f64>,
    /// Full-duty relay rate, Mbps.
    pub r_full: Vec<f64>,
    pub r_min: f64,
    pub d_earth_km: Vec<f64>,
}

impl RelayModel {
    /// Rate interpolated linearly in path-loss dB between the apolune and perilune endpoints.
    pub fn from_orbit(orbit: &OrbitSolution, n: usize, r_apo: f64, r_peri: f64, r_min: f64) -> Self {
        let theta = phase_grid(n);
        let pl = |d: f64| 20.0 * d.log10();
        let (pl_apo, pl_peri) = (pl(orbit.d_earth(0.0)), pl(orbit.d_earth(std::f64::consts::PI)));
        let d_earth_km: Vec<f64> = theta.iter().map(|t| orbit.d_earth(*t)).collect();
        let r_full =
            d_earth_km.iter().map(|d| r_apo + (r_peri - r_apo) * (pl_apo - pl(*d)) / (pl_apo - pl_peri)).collect();
        Self { theta, r_full, r_min, d_earth_km }
    }

    pub fn phases(&self) -> usize {
        self.theta.len()
    }
}

/// Default relay profile on an `n`-bin grid.
pub fn relay_throughput_profile(orbit: &OrbitSolution, n: usize) -> RelayModel {
    RelayModel::from_orbit(orbit, n, RATE_APOLUNE_MBPS, RATE_PERILUNE_MBPS, RATE_MIN_MBPS)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TargetProfile {
    pub r_base_km: f64,
    pub r_risk_km: f64,
}

impl Default for TargetProfile {
    fn default() -> Self {
        Self { r_base_km: 200.0, r_risk_km: 300.0 }
    }
}

impl TargetProfile {
    /// `R_base + R_risk n(θ)/n_max`, km.
    pub fn ranges(&self, density: &[f64]) -> Vec<f64> {
        let peak = density.iter().cloned().fold(0.0, f64::max);
        density
            .iter()
            .map(|n| self.r_base_km + if peak > 0.0 { self.r_risk_km * n / peak } else { 0.0 })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AllocationSettings {
    /// Relay session length, s.
    pub t_obs: f64,
    pub target_diameter_m: f64,
}

impl Default for AllocationSettings {
    fn default() -> Self {
        Self { t_obs: 60.0, target_diameter_m: 1.0 }
    }
}

/// Single-CPI figure of merit `C = R_max(K=1)^4` (m⁴) with the CPI used for it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseMerit {
    pub v_rel: f64,
    pub merit: f64,
    pub plan: CpiPlan<f64>,
}

pub fn phase_merit(v_rel: f64, settings: &AllocationSettings, params: &SystemParams<f64>) -> Result<PhaseMerit> {
    let target = Target::from_diameter(settings.target_diameter_m, params)?;
    let plan = optimal_cpi(v_rel, settings.t_obs, 1.0, params)?;
    let g = mode_gains(v_rel, plan.symbols, params).best_gain();
    let th = swerling_threshold(params.pd, params.pfa)?;
    Ok(PhaseMerit { v_rel, merit: raw_snr(1.0, target.rcs_m2, params) * g / th, plan })
}

impl PhaseMerit {
    /// Relaxed (continuous-K, no dwell cap) detection range at duty cycle `rho`, km.
    pub fn r_max_km(&self, rho: f64, t_obs: f64, kappa: f64) -> f64 {
        let k = rho * t_obs / self.plan.cpi_duration;
        (self.merit * k.powf(kappa)).powf(0.25) / 1000.0
    }

    /// Duty cycle at which the relaxed range equals `r_target_km`; unclipped.
    pub fn required_rho(&self, r_target_km: f64, t_obs: f64, kappa: f64) -> f64 {
        let r = r_target_km * 1000.0;
        self.plan.cpi_duration / t_obs * (r.powi(4) / self.merit).powf(1.0 / kappa)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AllocationResult {
    pub theta: Vec<f64>,
    pub rho: Vec<f64>,
    pub throughput: Vec<f64>,
    pub r_target_km: Vec<f64>,
    pub r_max_km: Vec<f64>,
    pub feasible: Vec<bool>,
    pub mean_rho: f64,
    pub mean_throughput: f64,
}

fn weighted_mean(x: &[f64], w: &[f64]) -> f64 {
    let dtheta = TAU / x.len() as f64;
    x.iter().zip(w).map(|(a, b)| a * b).sum::<f64>() * dtheta
}

impl AllocationResult {
    fn assemble(
        relay: &RelayModel,
        weights: &[f64],
        rho: Vec<f64>,
        r_target_km: Vec<f64>,
        r_max_km: Vec<f64>,
        feasible: Vec<bool>,
    ) -> Self {
        let throughput: Vec<f64> = rho.iter().zip(&relay.r_full).map(|(r, f)| (1.0 - r) * f).collect();
        Self {
            theta: relay.theta.clone(),
            mean_rho: weighted_mean(&rho, weights),
            mean_throughput: weighted_mean(&throughput, weights),
            rho,
            throughput,
            r_target_km,
            r_max_km,
            feasible,
        }
    }

    pub fn infeasible_phases(&self) -> Vec<usize> {
        self.feasible.iter().enumerate().filter(|(_, f)| !**f).map(|(i, _)| i).collect()
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["theta_rad", "rho", "throughput_mbps", "r_target_km", "r_max_km", "feasible"])?;
        for i in 0..self.theta.len() {
            out.write_record([
                format!("{:.6}", self.theta[i]),
                format!("{:.6}", self.rho[i]),
                format!("{:.4}", self.throughput[i]),
                format!("{:.3}", self.r_target_km[i]),
                format!("{:.3}", self.r_max_km[i]),
                (self.feasible[i] as u8).to_string(),
            ])?;
        }
        out.flush()?;
        Ok(())
    }
}

fn check_grid(relay: &RelayModel, encounter: &EncounterProfile, v_rel: &[f64]) -> Result<()> {
    let n = relay.phases();
    if encounter.theta_grid.len() != n || v_rel.len() != n {
        return Err(Error::Domain(format!(
            "phase grids differ: relay {n}, encounter {}, velocity {}",
            encounter.theta_grid.len(),
            v_rel.len()
        )));
    }
    Ok(())
}

/// Constant duty cycle applied at every phase; ranges are left at zero.
pub fn constant_allocation(relay: &RelayModel, weights: &[f64], rho: f64) -> AllocationResult {
    let n = relay.phases();
    AllocationResult::assemble(relay, weights, vec![rho; n], vec![0.0; n], vec![0.0; n], vec![true; n])
}

#[derive(Debug, Clone, PartialEq)]
pub struct SequentialPlan {
    pub rho: f64,
    /// Per-phase CPI configuration at the constant duty cycle.
    pub plans: Vec<CpiPlan<f64>>,
}

/// Constant duty cycle from the worst-case relay rate, `1 − R_min / min R_full`, then per-phase CPI.
pub fn sequential_allocation(
    relay: &RelayModel,
    v_rel: &[f64],
    t_obs: f64,
    params: &SystemParams<f64>,
) -> Result<SequentialPlan> {
    let bad: Vec<usize> =
        relay.r_full.iter().enumerate().filter(|(_, r)| relay.r_min >= **r).map(|(i, _)| i).collect();
    if !bad.is_empty() {
        return Err(Error::Infeasible { phases: bad });
    }
    let worst = relay.r_full.iter().cloned().fold(f64::INFINITY, f64::min);
    let rho = 1.0 - relay.r_min / worst;
    let plans = v_rel.iter().map(|v| optimal_cpi(*v, t_obs, rho, params)).collect::<Result<Vec<_>>>()?;
    Ok(SequentialPlan { rho, plans })
}

fn merits(v_rel: &[f64], settings: &AllocationSettings, params: &SystemParams<f64>) -> Result<Vec<PhaseMerit>> {
    v_rel.par_iter().map(|v| phase_merit(*v, settings, params)).collect()
}

/// Pointwise duty cycle that makes the relaxed detection range meet `R_target(θ)`.
pub fn adaptive_allocation(
    relay: &RelayModel,
    targets: &TargetProfile,
    encounter: &EncounterProfile,
    v_rel: &[f64],
    settings: &AllocationSettings,
    params: &SystemParams<f64>,
) -> Result<AllocationResult> {
    check_grid(relay, encounter, v_rel)?;
    let r_target = targets.ranges(&encounter.density);
    let m = merits(v_rel, settings, params)?;
    let kappa = params.kappa;
    let mut rho = Vec::with_capacity(m.len());
    let mut feasible = Vec::with_capacity(m.len());
    let mut r_max = Vec::with_capacity(m.len());
    for (pm, rt) in m.iter().zip(&r_target) {
        let need = pm.required_rho(*rt, settings.t_obs, kappa);
        let ok = need <= 1.0;
        let r = need.clamp(0.0, 1.0);
        rho.push(r);
        feasible.push(ok);
        r_max.push(pm.r_max_km(r, settings.t_obs, kappa));
    }
    Ok(AllocationResult::assemble(relay, &encounter.dwell_weight, rho, r_target, r_max, feasible))
}

/// Smallest constant duty cycle meeting every phase's target (bisection to 1e-4) and its weighted throughput.
pub fn best_constant_rho(
    relay: &RelayModel,
    targets: &TargetProfile,
    encounter: &EncounterProfile,
    v_rel: &[f64],
    settings: &AllocationSettings,
    params: &SystemParams<f64>,
) -> Result<(f64, f64)> {
    check_grid(relay, encounter, v_rel)?;
    let r_target = targets.ranges(&encounter.density);
    let m = merits(v_rel, settings, params)?;
    let violators = |rho: f64| -> Vec<usize> {
        m.iter()
            .zip(&r_target)
            .enumerate()
            .filter(|(_, (pm, rt))| pm.r_max_km(rho, settings.t_obs, params.kappa) < **rt)
            .map(|(i, _)| i)
            .collect()
    };
    let bad = violators(1.0);
    if !bad.is_empty() {
        return Err(Error::Infeasible { phases: bad });
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    if violators(0.0).is_empty() {
        hi = 0.0;
    }
    while hi - lo > 1e-4 {
        let mid = 0.5 * (lo + hi);
        if violators(mid).is_empty() {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let tp = constant_allocation(relay, &encounter.dwell_weight, hi).mean_throughput;
    Ok((hi, tp))
}

/// Integer-K allocation with the beam-dwell cap: the smallest whole number of CPIs that meets each target.
pub fn discrete_allocation(
    relay: &RelayModel,
    targets: &TargetProfile,
    encounter: &EncounterProfile,
    v_rel: &[f64],
    settings: &AllocationSettings,
    params: &SystemParams<f64>,
) -> Result<AllocationResult> {
    check_grid(relay, encounter, v_rel)?;
    let r_target = targets.ranges(&encounter.density);
    let m = merits(v_rel, settings, params)?;
    let target = Target::from_diameter(settings.target_diameter_m, params)?;
    let opts = SolverOptions::default();
    let rows: Vec<(f64, f64, bool)> = m
        .par_iter()
        .zip(r_target.par_iter())
        .map(|(pm, rt)| -> Result<(f64, f64, bool)> {
            let t_cpi = pm.plan.cpi_duration;
            let k_cont = pm.required_rho(*rt, settings.t_obs, params.kappa) * settings.t_obs / t_cpi;
            let mut k = k_cont.ceil().max(1.0);
            loop {
                let rho = (k * t_cpi / settings.t_obs * (1.0 + 1e-12)).min(1.0);
                let out = solve_rmax(&target, pm.v_rel, Sensing::Session { t_obs: settings.t_obs, rho }, params, &opts)?;
                let r = out.r_max / 1000.0;
                if r >= *rt * (1.0 - 1e-9) {
                    return Ok((rho, r, true));
                }
                if rho >= 1.0 || out.dwell_limited {
                    return Ok((1.0, r, false));
                }
                k += 1.0;
            }
        })
        .collect::<Result<_>>()?;
    let rho = rows.iter().map(|r| r.0).collect();
    let r_max = rows.iter().map(|r| r.1).collect();
    let feasible = rows.iter().map(|r| r.2).collect();
    Ok(AllocationResult::assemble(relay, &encounter.dwell_weight, rho, r_target, r_max, feasible))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub r_base_km: f64,
    pub r_risk_km: f64,
    pub mean_rho: f64,
    pub mean_throughput: f64,
}

/// Adaptive allocation over a grid of target-profile parameters.
pub fn robustness_sweep(
    relay: &RelayModel,
    encounter: &EncounterProfile,
    v_rel: &[f64],
    bases_km: &[f64],
    risks_km: &[f64],
    settings: &AllocationSettings,
    params: &SystemParams<f64>,
) -> Result<Vec<SweepPoint>> {
    let mut out = Vec::new();
    for &b in bases_km {
        for &r in risks_km {
            let t = TargetProfile { r_base_km: b, r_risk_km: r };
            let a = adaptive_allocation(relay, &t, encounter, v_rel, settings, params)?;
            out.push(SweepPoint { r_base_km: b, r_risk_km: r, mean_rho: a.mean_rho, mean_throughput: a.mean_throughput });
        }
    }
    Ok(out)
}

/// Duty cycle at which a phase's relaxed range equals `r_target_km`, found by root search; cross-checks the closed form.
pub fn required_rho_numeric(pm: &PhaseMerit, r_target_km: f64, t_obs: f64, kappa: f64) -> Result<f64> {
    brent(|rho| pm.r_max_km(rho, t_obs, kappa) - r_target_km, 1e-9, 1.0, 1e-14, 200)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbits::campaign::{CampaignConfig, Encounter};
    use crate::orbits::nrho::reference_orbit;
    use std::sync::OnceLock;

    fn orbit() -> &'static OrbitSolution {
        static O: OnceLock<OrbitSolution> = OnceLock::new();
        O.get_or_init(|| reference_orbit().unwrap())
    }

    fn synthetic_profile() -> EncounterProfile {
        let enc: Vec<Encounter> = (0..60)
            .map(|i| Encounter {
                event: 0,
                time_s: 0.0,
                theta: (0.1 * i as f64).rem_euclid(TAU),
                v_rel: 2.0 + (i % 5) as f64,
                distance_km: 100.0,
            })
            .collect();
        EncounterProfile::from_encounters(&enc, orbit(), &CampaignConfig::default(), 360)
    }

    #[test]
    fn relay_endpoints_and_span() {
        let r = relay_throughput_profile(orbit(), 360);
        let o = orbit();
        let at = |th: f64| {
            let pl = |d: f64| 20.0 * d.log10();
            let (a, p) = (pl(o.d_earth(0.0)), pl(o.d_earth(std::f64::consts::PI)));
            104.0 + 12.0 * (a - pl(o.d_earth(th))) / (a - p)
        };
        assert!((at(0.0) - 104.0).abs() < 1e-12 && (at(std::f64::consts::PI) - 116.0).abs() < 1e-12);
        let mut idx: Vec<usize> = (0..360).collect();
        idx.sort_by(|a, b| r.d_earth_km[*b].total_cmp(&r.d_earth_km[*a]));
        assert!(idx.windows(2).all(|w| r.r_full[w[0]] <= r.r_full[w[1]] + 1e-12));
        assert!((path_loss_span_db(EARTH_FAR_KM, EARTH_NEAR_KM) - 1.5605).abs() < 1e-3);
    }

    #[test]
    fn sequential_rule() {
        let mut relay = relay_throughput_profile(orbit(), 36);
        let v = vec![10.0; 36];
        let p = SystemParams::default();
        let s = sequential_allocation(&relay, &v, 60.0, &p).unwrap();
        let worst = relay.r_full.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!((s.rho - (1.0 - 40.0 / worst)).abs() < 1e-12);
        assert!((s.rho - 0.615).abs() < 0.005);
        relay.r_min = 0.0;
        assert_eq!(sequential_allocation(&relay, &v, 60.0, &p).unwrap().rho, 1.0);
        relay.r_min = 120.0;
        assert!(matches!(sequential_allocation(&relay, &v, 60.0, &p), Err(Error::Infeasible { .. })));
    }

    #[test]
    fn adaptive_binds_and_dominates() {
        let relay = relay_throughput_profile(orbit(), 360);
        let prof = synthetic_profile();
        let v = vec![40.0; 360];
        let (s, p) = (AllocationSettings::default(), SystemParams::default());
        let t = TargetProfile::default();
        let a = adaptive_allocation(&relay, &t, &prof, &v, &s, &p).unwrap();
        for i in 0..360 {
            assert!((0.0..=1.0).contains(&a.rho[i]));
            assert!((a.throughput[i] - (1.0 - a.rho[i]) * relay.r_full[i]).abs() < 1e-12);
            if a.feasible[i] {
                assert!((a.r_max_km[i] - a.r_target_km[i]).abs() / a.r_target_km[i] < 0.02);
            }
        }
        let (rc, tc) = best_constant_rho(&relay, &t, &prof, &v, &s, &p).unwrap();
        let worst = a.rho.iter().cloned().fold(0.0, f64::max);
        assert!((rc - worst).abs() < 2e-4);
        let base = constant_allocation(&relay, &prof.dwell_weight, 0.6);
        assert!(a.mean_throughput >= tc && tc >= base.mean_throughput);
        let r = required_rho_numeric(&phase_merit(40.0, &s, &p).unwrap(), 400.0, 60.0, 0.85).unwrap();
        let m = phase_merit(40.0, &s, &p).unwrap();
        assert!((r - m.required_rho(400.0, 60.0, 0.85)).abs() < 1e-9);
    }

    #[test]
    fn zero_targets_and_no_risk() {
        let relay = relay_throughput_profile(orbit(), 360);
        let prof = synthetic_profile();
        let v: Vec<f64> = (0..360).map(|i| 5.0 + i as f64 * 0.1).collect();
        let (s, p) = (AllocationSettings::default(), SystemParams::default());
        let zero = TargetProfile { r_base_km: 0.0, r_risk_km: 0.0 };
        assert_eq!(best_constant_rho(&relay, &zero, &prof, &v, &s, &p).unwrap().0, 0.0);
        let flat = TargetProfile { r_base_km: 300.0, r_risk_km: 0.0 };
        let a = adaptive_allocation(&relay, &flat, &prof, &v, &s, &p).unwrap();
        for (i, vi) in v.iter().enumerate() {
            let m = phase_merit(*vi, &s, &p).unwrap();
            assert!((a.rho[i] - m.required_rho(300.0, 60.0, p.kappa)).abs() < 1e-15);
        }
    }

    #[test]
    fn infeasible_phases_flagged() {
        let relay = relay_throughput_profile(orbit(), 360);
        let prof = synthetic_profile();
        let v = vec![40.0; 360];
        let (s, p) = (AllocationSettings::default(), SystemParams::default());
        let far = TargetProfile { r_base_km: 5000.0, r_risk_km: 0.0 };
        let a = adaptive_allocation(&relay, &far, &prof, &v, &s, &p).unwrap();
        assert_eq!(a.infeasible_phases().len(), 360);
        assert!(a.rho.iter().all(|r| *r == 1.0));
        assert!(matches!(best_constant_rho(&relay, &far, &prof, &v, &s, &p), Err(Error::Infeasible { .. })));
    }

    #[test]
    fn discrete_close_to_relaxed() {
        let relay = relay_throughput_profile(orbit(), 72);
        let enc: Vec<Encounter> = (0..30)
            .map(|i| Encounter { event: 0, time_s: 0.0, theta: 0.2 * i as f64, v_rel: 20.0, distance_km: 1.0 })
            .collect();
        let prof = EncounterProfile::from_encounters(&enc, orbit(), &CampaignConfig::default(), 72);
        let v = vec![30.0; 72];
        let (s, p) = (AllocationSettings::default(), SystemParams::default());
        let t = TargetProfile::default();
        let a = adaptive_allocation(&relay, &t, &prof, &v, &s, &p).unwrap();
        let d = discrete_allocation(&relay, &t, &prof, &v, &s, &p).unwrap();
        assert!(d.feasible.iter().all(|f| *f));
        assert!(d.rho.iter().zip(&a.rho).all(|(x, y)| x >= y));
        assert!((a.mean_throughput - d.mean_throughput) / a.mean_throughput < 0.02);
    }
}
