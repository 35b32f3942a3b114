//! Experiment orchestration: each kind writes CSV tables, then plots rendered from those files.

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use nrho_isac::allocate::{
    adaptive_allocation, best_constant_rho, constant_allocation, discrete_allocation, robustness_sweep,
    AllocationResult, RelayModel, TargetProfile,
};
use nrho_isac::detect::{
    fit_kappa, rmax_closed_form, solve_rmax, swerling_threshold, Integration, ModePolicy, Sensing, SolverOptions,
};
use nrho_isac::link::{advantage_ledger, ground_reference_range, Target};
use nrho_isac::mc::{crossing, crossing_snr_offset, mc_pd_vs_range_curve, write_curve_csv, McConfig, McScenario};
use nrho_isac::num::to_db;
use nrho_isac::orbits::campaign::{
    cache_key, run_separation_campaign, standard_events, CampaignResult, Direction, EncounterProfile,
    APOLUNE_WINDOW,
};
use nrho_isac::orbits::nrho::{phase_bin, phase_grid, reference_orbit, PHASE_BINS};
use nrho_isac::processing::{mode_b_subcarriers, mode_crossovers, mode_gains};
use nrho_isac::stats::{outage_probability, reliable_range_ratio, write_outage_csv, OutageCurve};
use nrho_isac::{OrbitSolution, SystemParams};

use crate::plot::{render, Chart};
use crate::scenario::{Experiment, Scenario, VelocitySource};

fn fx(x: f64, digits: usize) -> String {
    if x.is_finite() {
        format!("{x:.digits$}")
    } else if x > 0.0 {
        "inf".into()
    } else if x < 0.0 {
        "-inf".into()
    } else {
        "nan".into()
    }
}

/// File-name tag for a speed: `0.5` → `0p5`.
fn tag(v: f64) -> String {
    format!("{v}").replace('.', "p").replace('-', "m")
}

pub struct Runner<'a> {
    sc: &'a Scenario,
    out: PathBuf,
    cache: Option<PathBuf>,
    no_cache: bool,
    orbit: Option<OrbitSolution>,
    campaign: Option<CampaignResult>,
    /// Artifact file names relative to the output directory, in emission order.
    pub artifacts: Vec<String>,
}

impl<'a> Runner<'a> {
    pub fn new(sc: &'a Scenario, out: &Path, cache: Option<PathBuf>, no_cache: bool) -> Self {
        Self { sc, out: out.to_path_buf(), cache, no_cache, orbit: None, campaign: None, artifacts: Vec::new() }
    }

    fn params(&self) -> &SystemParams {
        &self.sc.params
    }

    fn solver(&self) -> SolverOptions<f64> {
        let d = &self.sc.detection;
        SolverOptions {
            dwell_cap: d.dwell_cap,
            chord: d.chord,
            integration: d.integration,
            mode: ModePolicy::Adaptive,
            ..SolverOptions::default()
        }
    }

    fn table(&mut self, name: &str, header: &[&str], rows: Vec<Vec<String>>) -> Result<()> {
        let path = self.out.join(name);
        let mut w = csv::Writer::from_path(&path).with_context(|| format!("creating {}", path.display()))?;
        w.write_record(header)?;
        for r in rows {
            w.write_record(&r)?;
        }
        w.flush()?;
        self.artifacts.push(name.to_string());
        Ok(())
    }

    fn emit<F>(&mut self, name: &str, write: F) -> Result<()>
    where
        F: FnOnce(BufWriter<File>) -> nrho_isac::Result<()>,
    {
        let path = self.out.join(name);
        let f = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
        write(BufWriter::new(f)).with_context(|| format!("writing {}", path.display()))?;
        self.artifacts.push(name.to_string());
        Ok(())
    }

    fn plot(&mut self, csv_name: &str, chart: Chart) -> Result<()> {
        let svg = csv_name.replace(".csv", ".svg");
        render(&self.out.join(csv_name), &self.out.join(&svg), &chart)?;
        self.artifacts.push(svg);
        Ok(())
    }

    pub fn run(&mut self, x: Experiment) -> Result<()> {
        match x {
            Experiment::Table3 => self.table3(),
            Experiment::Advantage => self.advantage(),
            Experiment::Campaign => self.campaign_artifacts(),
            Experiment::RmaxProfile => self.rmax_profile(),
            Experiment::Modes => self.modes(),
            Experiment::Allocation => self.allocation(),
            Experiment::Outage => self.outage(),
            Experiment::MonteCarlo => self.montecarlo(),
        }
        .with_context(|| format!("experiment {}", x.name()))
    }

    fn table3(&mut self) -> Result<()> {
        let t = self.sc.table3.clone();
        let p = *self.params();
        let opts = self.solver();
        let mut rows = Vec::new();
        for &d in &t.diameters {
            let target = Target::from_diameter(d, &p)?;
            let o = solve_rmax(&target, t.v_rel, Sensing::Snapshot { symbols: t.symbols, cpis: t.cpis }, &p, &opts)?;
            rows.push(vec![
                fx(d, 3),
                fx(target.rcs_m2, 6),
                fx(o.r_max / 1000.0, 3),
                fx(o.warning_time.seconds() / 60.0, 2),
                fx(o.cpis_used, 3),
                o.mode.mode.to_string(),
                (o.dwell_limited as u8).to_string(),
            ]);
        }
        self.table(
            "table3.csv",
            &["diameter_m", "rcs_m2", "r_max_km", "warning_min", "cpis_used", "mode", "dwell_limited"],
            rows,
        )?;

        let target = Target::from_diameter(t.sweep_diameter, &p)?;
        let mut rows = Vec::new();
        for &k in &t.k_sweep {
            let sense = Sensing::Snapshot { symbols: t.symbols, cpis: k };
            let rk = solve_rmax(&target, t.v_rel, sense, &p, &SolverOptions { integration: Integration::Kappa, ..opts })?;
            let re = solve_rmax(&target, t.v_rel, sense, &p, &SolverOptions { integration: Integration::Exact, ..opts })?;
            let closed = rmax_closed_form(target.rcs_m2, t.v_rel, t.symbols, k, &p)?;
            rows.push(vec![
                k.to_string(),
                fx(rk.r_max / 1000.0, 3),
                fx(re.r_max / 1000.0, 3),
                fx(closed / 1000.0, 3),
                fx(100.0 * (rk.r_max / re.r_max - 1.0), 3),
            ]);
        }
        self.table(
            "k_sweep.csv",
            &["cpis", "r_max_kappa_km", "r_max_exact_km", "r_max_closed_form_km", "kappa_vs_exact_pct"],
            rows,
        )?;
        self.plot(
            "k_sweep.csv",
            Chart::new("Snapshot detection range vs CPI count", "cpis", &["r_max_kappa_km", "r_max_exact_km"]),
        )?;

        let ks: Vec<u32> = (1..=t.kappa_fit_max).collect();
        let fit = fit_kappa(p.pd, p.pfa, &ks)?;
        let rows = fit
            .points
            .iter()
            .map(|q| {
                vec![
                    q.cpis.to_string(),
                    fx(to_db(q.required_snr), 6),
                    fx(q.exact_gain_db, 6),
                    fx(q.exact_gain_db + q.residual_db, 6),
                    fx(q.residual_db, 6),
                ]
            })
            .collect();
        self.table(
            "kappa_fit.csv",
            &["cpis", "required_snr_db", "exact_gain_db", "kappa_gain_db", "residual_db"],
            rows,
        )?;
        self.plot("kappa_fit.csv", Chart::new("Non-coherent integration gain", "cpis", &["exact_gain_db", "kappa_gain_db"]))?;
        let th = swerling_threshold(p.pd, p.pfa)?;
        self.table(
            "detection_summary.csv",
            &["quantity", "value"],
            vec![
                vec!["swerling_threshold_db".into(), fx(to_db(th), 6)],
                vec!["kappa_fit".into(), fx(fit.kappa, 6)],
                vec!["kappa_fit_max_residual_db".into(), fx(fit.max_residual_db, 6)],
                vec!["kappa_configured".into(), fx(p.kappa, 6)],
            ],
        )
    }

    fn advantage(&mut self) -> Result<()> {
        let p = *self.params();
        let t = self.sc.table3.clone();
        let l = advantage_ledger::<f64>();
        let terms = [
            ("atmospheric", l.atmospheric_db),
            ("ionospheric", l.ionospheric_db),
            ("clutter", l.clutter_db),
            ("thermal", l.thermal_db),
            ("total", l.total_db()),
        ];
        let rows = terms.iter().map(|(n, g)| vec![n.to_string(), fx(*g, 4), fx(10f64.powf(g / 40.0), 4)]).collect();
        self.table("advantage.csv", &["term", "gain_db", "range_factor"], rows)?;
        let mut rows = Vec::new();
        for &d in &t.diameters {
            let target = Target::from_diameter(d, &p)?;
            let isac = rmax_closed_form(target.rcs_m2, t.v_rel, t.symbols, t.cpis, &p)?;
            let ground = ground_reference_range(target.rcs_m2, t.v_rel, t.cpis, &p, &l)?;
            rows.push(vec![fx(d, 3), fx(isac / 1000.0, 3), fx(ground / 1000.0, 3), fx(isac / ground, 4)]);
        }
        self.table("ground_reference.csv", &["diameter_m", "isac_r_max_km", "ground_r_max_km", "range_ratio"], rows)?;
        self.plot(
            "ground_reference.csv",
            Chart::new("Cislunar vs ground-reference detection range", "diameter_m", &["isac_r_max_km", "ground_r_max_km"]),
        )
    }

    fn orbit(&mut self) -> Result<&OrbitSolution> {
        if self.orbit.is_none() {
            self.orbit = Some(reference_orbit().context("correcting the reference orbit")?);
        }
        Ok(self.orbit.as_ref().unwrap())
    }

    fn campaign(&mut self) -> Result<&CampaignResult> {
        if self.campaign.is_none() {
            let c = &self.sc.campaign;
            let events = standard_events(c.phases, &c.delta_v)?;
            let cfg = c.config;
            let orbit = self.orbit()?.clone();
            let key = cache_key(&orbit, &events, &cfg);
            let paths = self.cache.as_ref().map(|d| (d.join(format!("{key}.events.csv")), d.join(format!("{key}.encounters.csv"))));
            let cached = match &paths {
                Some((ev, en)) if !self.no_cache && ev.exists() && en.exists() => {
                    CampaignResult::read_csv(cfg, File::open(ev)?, File::open(en)?).ok()
                }
                _ => None,
            };
            let result = match cached {
                Some(r) => r,
                None => {
                    let r = run_separation_campaign(&orbit, &events, &cfg)?;
                    if let Some((ev, en)) = &paths {
                        store(ev, |w| r.write_events_csv(w))?;
                        store(en, |w| r.write_encounters_csv(w))?;
                    }
                    r
                }
            };
            self.campaign = Some(result);
        }
        Ok(self.campaign.as_ref().unwrap())
    }

    fn campaign_artifacts(&mut self) -> Result<()> {
        let orbit = self.orbit()?.clone();
        self.emit("orbit.csv", |w| orbit.write_csv(w, PHASE_BINS))?;
        self.plot("orbit.csv", Chart::new("Selenocentric radius over one period", "theta_rad", &["r_km"]))?;
        self.table(
            "orbit_summary.csv",
            &["quantity", "value"],
            vec![
                vec!["period_d".into(), fx(orbit.period_days(), 6)],
                vec!["perilune_radius_km".into(), fx(orbit.perilune_radius, 3)],
                vec!["apolune_radius_km".into(), fx(orbit.apolune_radius, 3)],
                vec!["v_gw_apolune_m_per_s".into(), fx(orbit.v_gw(0.0), 3)],
                vec!["v_gw_perilune_m_per_s".into(), fx(orbit.v_gw(std::f64::consts::PI), 3)],
                vec!["residence_below_200_m_per_s".into(), fx(orbit.residence_fraction(200.0, PHASE_BINS), 6)],
                vec!["jacobi_drift".into(), format!("{:.3e}", orbit.jacobi_drift(1e-12)?)],
            ],
        )?;
        let delta_v = self.sc.campaign.delta_v.clone();
        let result = self.campaign()?.clone();
        self.emit("campaign_events.csv", |w| result.write_events_csv(w))?;
        self.emit("campaign_encounters.csv", |w| result.write_encounters_csv(w))?;
        let mut rows = Vec::new();
        for &dv in &delta_v {
            let rc = |d| result.recontacts(dv, d).to_string();
            rows.push(vec![
                fx(dv, 3),
                result.encounters_for(dv).len().to_string(),
                result.escaped(dv).to_string(),
                result.max_v_rel(dv).map_or(String::new(), |v| fx(v, 3)),
                result.apolune_median(dv, APOLUNE_WINDOW).map_or(String::new(), |v| fx(v, 3)),
                rc(Direction::V),
                rc(Direction::N),
                rc(Direction::B),
            ]);
            let profile = EncounterProfile::from_campaign(&result, &orbit, dv);
            let name = format!("encounter_profile_dv{}.csv", tag(dv));
            self.emit(&name, |w| profile.write_csv(w))?;
            if profile.encounters > 0 {
                self.plot(
                    &name,
                    Chart::new("Encounter relative speed by phase", "theta_rad", &["v_rel_p50_m_per_s", "v_rel_p95_m_per_s"]),
                )?;
            }
        }
        self.table(
            "campaign_summary.csv",
            &[
                "delta_v_m_per_s",
                "encounters",
                "escapes",
                "max_v_rel_m_per_s",
                "apolune_median_v_rel_m_per_s",
                "recontacts_v",
                "recontacts_n",
                "recontacts_b",
            ],
            rows,
        )?;
        if result.failed() > 0 {
            bail!("{} separation events failed to propagate; see campaign_events.csv", result.failed());
        }
        Ok(())
    }

    /// Debris speed on an `n`-bin phase grid.
    fn velocities(&mut self, source: VelocitySource, delta_v: f64, n: usize) -> Result<Vec<f64>> {
        let grid = phase_grid(n);
        Ok(match source {
            VelocitySource::Constant(v) => vec![v; n],
            VelocitySource::External(f) => {
                let orbit = self.orbit()?;
                grid.iter().map(|t| f * orbit.v_gw(*t)).collect()
            }
            VelocitySource::Campaign(stat) => {
                let profile = self.encounter_profile(delta_v)?;
                let v = profile
                    .velocity_profile(stat)
                    .ok_or_else(|| anyhow!("no encounters at delta_v = {delta_v} m/s"))?;
                grid.iter().map(|t| v[phase_bin(*t, PHASE_BINS)]).collect()
            }
        })
    }

    fn encounter_profile(&mut self, delta_v: f64) -> Result<EncounterProfile> {
        if !self.sc.campaign.delta_v.contains(&delta_v) {
            bail!("delta_v = {delta_v} m/s is not part of the campaign");
        }
        let orbit = self.orbit()?.clone();
        Ok(EncounterProfile::from_campaign(self.campaign()?, &orbit, delta_v))
    }

    fn rmax_profile(&mut self) -> Result<()> {
        let r = self.sc.rmax.clone();
        let p = *self.params();
        let opts = self.solver();
        let v = self.velocities(r.velocity, r.delta_v, r.bins)?;
        let target = Target::from_diameter(r.diameter, &p)?;
        let mut rows = Vec::new();
        for (theta, v) in phase_grid(r.bins).into_iter().zip(v) {
            let o = solve_rmax(&target, v, Sensing::Session { t_obs: r.t_obs, rho: r.rho }, &p, &opts)?;
            rows.push(vec![
                fx(theta, 6),
                fx(v, 4),
                fx(o.r_max / 1000.0, 3),
                fx(o.warning_time.seconds() / 60.0, 2),
                fx(o.cpis_used, 3),
                o.symbols.to_string(),
                o.mode.mode.to_string(),
                (o.dwell_limited as u8).to_string(),
            ]);
        }
        self.table(
            "rmax_profile.csv",
            &["theta_rad", "v_rel_m_per_s", "r_max_km", "warning_min", "cpis_used", "symbols", "mode", "dwell_limited"],
            rows,
        )?;
        self.plot("rmax_profile.csv", Chart::new("Detection range along the orbit", "theta_rad", &["r_max_km"]))
    }

    fn modes(&mut self) -> Result<()> {
        let m = self.sc.modes.clone();
        let p = *self.params();
        let steps = (m.v_max / m.step).floor() as usize;
        let rows = (0..=steps)
            .map(|i| {
                let v = i as f64 * m.step;
                let g = mode_gains(v, m.symbols, &p);
                vec![
                    fx(v, 3),
                    fx(to_db(g.gain_a), 4),
                    fx(to_db(g.gain_b), 4),
                    fx(to_db(g.gain_b / g.gain_a), 4),
                    mode_b_subcarriers(v, &p).to_string(),
                    g.best.mode.to_string(),
                ]
            })
            .collect();
        self.table(
            "modes.csv",
            &["v_rel_m_per_s", "gain_a_db", "gain_b_db", "gain_b_minus_a_db", "mode_b_subcarriers", "best_mode"],
            rows,
        )?;
        self.plot("modes.csv", Chart::new("Processing gain by mode", "v_rel_m_per_s", &["gain_a_db", "gain_b_db"]))?;
        let rows = mode_crossovers(m.symbols, 0.0, m.v_max, m.step, &p).into_iter().map(|v| vec![fx(v, 4)]).collect();
        self.table("mode_crossovers.csv", &["crossover_m_per_s"], rows)
    }

    fn allocation(&mut self) -> Result<()> {
        let a = self.sc.allocation.clone();
        let p = *self.params();
        let orbit = self.orbit()?.clone();
        let relay = RelayModel::from_orbit(&orbit, PHASE_BINS, a.rate_apolune, a.rate_perilune, a.r_min);
        let encounter = self.encounter_profile(a.delta_v)?;
        let v = self.velocities(a.velocity, a.delta_v, PHASE_BINS)?;
        let targets = TargetProfile { r_base_km: a.r_base_km, r_risk_km: a.r_risk_km };
        let settings = nrho_isac::allocate::AllocationSettings { t_obs: a.t_obs, target_diameter_m: a.diameter };

        let adaptive = adaptive_allocation(&relay, &targets, &encounter, &v, &settings, &p)?;
        self.emit("allocation_adaptive.csv", |w| adaptive.write_csv(w))?;
        self.plot("allocation_adaptive.csv", Chart::new("Adaptive duty cycle", "theta_rad", &["rho"]))?;
        let bad = adaptive.infeasible_phases();
        if !bad.is_empty() {
            let deg: Vec<String> = bad.iter().map(|&i| format!("{:.1}", adaptive.theta[i].to_degrees())).collect();
            bail!("allocation infeasible at {} phase bins: theta = [{}] deg", bad.len(), deg.join(", "));
        }
        let discrete = discrete_allocation(&relay, &targets, &encounter, &v, &settings, &p)?;
        self.emit("allocation_discrete.csv", |w| discrete.write_csv(w))?;
        let baseline = constant_allocation(&relay, &encounter.dwell_weight, a.baseline_rho);
        self.emit("allocation_baseline.csv", |w| baseline.write_csv(w))?;
        let (rho_c, tp_c) = best_constant_rho(&relay, &targets, &encounter, &v, &settings, &p)?;
        let summary = |name: &str, rho: Option<f64>, r: &AllocationResult| {
            vec![name.to_string(), rho.map_or(String::new(), |x| fx(x, 4)), fx(r.mean_rho, 6), fx(r.mean_throughput, 4)]
        };
        let best = constant_allocation(&relay, &encounter.dwell_weight, rho_c);
        debug_assert!((best.mean_throughput - tp_c).abs() < 1e-9);
        self.table(
            "allocation_summary.csv",
            &["strategy", "constant_rho", "mean_rho", "mean_throughput_mbps"],
            vec![
                summary("adaptive", None, &adaptive),
                summary("discrete", None, &discrete),
                summary("best_constant", Some(rho_c), &best),
                summary("baseline", Some(a.baseline_rho), &baseline),
            ],
        )?;
        let sweep = robustness_sweep(&relay, &encounter, &v, &a.sweep_base_km, &a.sweep_risk_km, &settings, &p)?;
        let rows = sweep
            .iter()
            .map(|s| vec![fx(s.r_base_km, 3), fx(s.r_risk_km, 3), fx(s.mean_rho, 6), fx(s.mean_throughput, 4)])
            .collect();
        self.table("allocation_sweep.csv", &["r_base_km", "r_risk_km", "mean_rho", "mean_throughput_mbps"], rows)
    }

    fn outage(&mut self) -> Result<()> {
        let o = self.sc.outage.clone();
        let n = (o.ratio_max / o.ratio_step).floor() as usize;
        let ratios: Vec<f64> = (1..=n).map(|i| i as f64 * o.ratio_step).collect();
        let curves = o.cpis.iter().map(|&k| OutageCurve::new(k, &ratios)).collect::<nrho_isac::Result<Vec<_>>>()?;
        self.emit("outage.csv", |w| write_outage_csv(&curves, w))?;
        let cols: Vec<String> = o.cpis.iter().map(|k| format!("p_out_k{k}")).collect();
        let cols: Vec<&str> = cols.iter().map(String::as_str).collect();
        self.plot("outage.csv", Chart::new("Sensing outage vs required range", "range_ratio", &cols).log_y())?;
        let rows = o
            .cpis
            .iter()
            .map(|&k| Ok(vec![k.to_string(), fx(o.epsilon, 4), fx(reliable_range_ratio(o.epsilon, k)?, 6)]))
            .collect::<nrho_isac::Result<Vec<_>>>()?;
        self.table("outage_reliable.csv", &["cpis", "epsilon", "reliable_range_ratio"], rows)?;
        let p = outage_probability(o.case_target_km, o.case_rmax_km, o.case_cpis)?;
        self.table(
            "outage_case.csv",
            &["r_target_km", "r_max_km", "cpis", "p_out"],
            vec![vec![fx(o.case_target_km, 3), fx(o.case_rmax_km, 3), o.case_cpis.to_string(), fx(p, 6)]],
        )
    }

    fn montecarlo(&mut self) -> Result<()> {
        let m = self.sc.mc.clone();
        let p = *self.params();
        let seed = self.sc.seed;
        let n = ((m.range_max_km - m.range_min_km) / m.range_step_km).round() as usize;
        let ranges: Vec<f64> = (0..=n).map(|i| m.range_min_km + i as f64 * m.range_step_km).collect();
        let mut rows = Vec::new();
        for &v in &m.velocities {
            let scenario = McScenario { range_m: 0.0, diameter_m: m.diameter, v_rel: v, mode: m.mode, symbols: m.symbols };
            let mut cfg = McConfig::new(m.trials, seed, m.cpis, scenario);
            cfg.pfa = p.pfa;
            let curve = mc_pd_vs_range_curve(&cfg, &ranges, &p)?;
            let name = format!("mc_curve_v{}.csv", tag(v));
            self.emit(&name, |w| write_curve_csv(&curve, w))?;
            self.plot(&name, Chart::new("Detection probability vs range", "range_km", &["pd_kappa", "pd_exact", "pd_mc"]))?;
            let x: Vec<f64> = curve.iter().map(|c| c.range_km).collect();
            let cross = |f: fn(&nrho_isac::mc::CurvePoint) -> f64| {
                crossing(&x, &curve.iter().map(f).collect::<Vec<_>>(), p.pd).map_or(String::new(), |r| fx(r, 3))
            };
            rows.push(vec![fx(v, 3), cross(|c| c.pd_mc), cross(|c| c.pd_exact), cross(|c| c.pd_kappa)]);
        }
        self.table(
            "mc_crossings.csv",
            &["v_rel_m_per_s", "crossing_mc_km", "crossing_exact_km", "crossing_kappa_km"],
            rows,
        )?;
        let k = ((m.snr_max_db - m.snr_min_db) / m.snr_step_db).round() as usize;
        let grid: Vec<f64> = (0..=k).map(|i| m.snr_min_db + i as f64 * m.snr_step_db).collect();
        let off = crossing_snr_offset(m.cpis, p.pd, p.pfa, p.kappa, &grid, m.trials, seed)?;
        self.table(
            "mc_snr_offset.csv",
            &["cpis", "crossing_snr_mc_db", "crossing_snr_kappa_db", "offset_db"],
            vec![vec![m.cpis.to_string(), fx(off.mc_db, 4), fx(off.kappa_db, 4), fx(off.offset_db(), 4)]],
        )
    }
}

/// Writes through a temporary sibling so a crashed run never leaves a truncated cache entry.
fn store<F>(path: &Path, write: F) -> Result<()>
where
    F: FnOnce(BufWriter<File>) -> nrho_isac::Result<()>,
{
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    let tmp = path.with_extension("tmp");
    write(BufWriter::new(File::create(&tmp)?))?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}
