//! Scenario files: `[section]` key-value documents resolved against defaults.

use std::fmt::Write as _;
use std::path::PathBuf;

use nrho_isac::detect::{DwellChord, Integration, ModePolicy};
use nrho_isac::kv::{self, parse_si, Entry};
use nrho_isac::orbits::campaign::{CampaignConfig, VelocityStatistic};
use nrho_isac::{Error, SystemParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Table3,
    Advantage,
    Campaign,
    RmaxProfile,
    Modes,
    Allocation,
    Outage,
    MonteCarlo,
}

impl Experiment {
    pub const ALL: [Experiment; 8] = [
        Experiment::Table3,
        Experiment::Advantage,
        Experiment::Campaign,
        Experiment::RmaxProfile,
        Experiment::Modes,
        Experiment::Allocation,
        Experiment::Outage,
        Experiment::MonteCarlo,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Table3 => "table3",
            Experiment::Advantage => "advantage",
            Experiment::Campaign => "campaign",
            Experiment::RmaxProfile => "rmax_profile",
            Experiment::Modes => "modes",
            Experiment::Allocation => "allocation",
            Experiment::Outage => "outage",
            Experiment::MonteCarlo => "montecarlo",
        }
    }
}

/// Debris velocity fed to per-phase sensing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum VelocitySource {
    Campaign(VelocityStatistic),
    /// Fraction of the Gateway's inertial speed.
    External(f64),
    Constant(f64),
}

impl VelocitySource {
    fn parse(s: &str) -> Result<Self, String> {
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h.trim(), Some(a.trim())),
            None => (s.trim(), None),
        };
        let num = |d: f64| arg.map(parse_si).unwrap_or(Ok(d));
        match head {
            "p95" if arg.is_none() => Ok(Self::Campaign(VelocityStatistic::P95)),
            "median" if arg.is_none() => Ok(Self::Campaign(VelocityStatistic::Median)),
            "external" => Ok(Self::External(num(0.3)?)),
            "constant" if arg.is_some() => Ok(Self::Constant(num(0.0)?)),
            _ => Err(format!("expected p95, median, external[:fraction] or constant:<m/s>, got `{s}`")),
        }
    }

    fn render(&self) -> String {
        match self {
            Self::Campaign(VelocityStatistic::P95) => "p95".into(),
            Self::Campaign(VelocityStatistic::Median) => "median".into(),
            Self::External(f) => format!("external:{f:?}"),
            Self::Constant(v) => format!("constant:{v:?}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DetectionSettings {
    pub integration: Integration,
    pub chord: DwellChord,
    pub dwell_cap: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table3Settings {
    pub diameters: Vec<f64>,
    pub v_rel: f64,
    pub cpis: u32,
    pub symbols: usize,
    pub k_sweep: Vec<u32>,
    pub sweep_diameter: f64,
    pub kappa_fit_max: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CampaignSettings {
    pub config: CampaignConfig,
    pub phases: usize,
    pub delta_v: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RmaxSettings {
    pub diameter: f64,
    pub t_obs: f64,
    pub rho: f64,
    pub bins: usize,
    pub velocity: VelocitySource,
    pub delta_v: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModesSettings {
    pub v_max: f64,
    pub step: f64,
    pub symbols: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AllocationSettings {
    pub t_obs: f64,
    pub diameter: f64,
    pub r_base_km: f64,
    pub r_risk_km: f64,
    pub r_min: f64,
    pub rate_apolune: f64,
    pub rate_perilune: f64,
    pub baseline_rho: f64,
    pub velocity: VelocitySource,
    pub delta_v: f64,
    pub sweep_base_km: Vec<f64>,
    pub sweep_risk_km: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutageSettings {
    pub cpis: Vec<u32>,
    pub epsilon: f64,
    pub ratio_max: f64,
    pub ratio_step: f64,
    pub case_target_km: f64,
    pub case_rmax_km: f64,
    pub case_cpis: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct McSettings {
    pub trials: usize,
    pub cpis: u32,
    pub velocities: Vec<f64>,
    pub diameter: f64,
    pub symbols: usize,
    pub range_min_km: f64,
    pub range_max_km: f64,
    pub range_step_km: f64,
    pub snr_min_db: f64,
    pub snr_max_db: f64,
    pub snr_step_db: f64,
    pub mode: ModePolicy,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub experiments: Vec<Experiment>,
    pub seed: u64,
    pub out: Option<PathBuf>,
    /// Relative tolerance used by `compare`.
    pub tolerance: f64,
    pub params: SystemParams,
    pub detection: DetectionSettings,
    pub table3: Table3Settings,
    pub campaign: CampaignSettings,
    pub rmax: RmaxSettings,
    pub modes: ModesSettings,
    pub allocation: AllocationSettings,
    pub outage: OutageSettings,
    pub mc: McSettings,
}

impl Default for Scenario {
    fn default() -> Self {
        Self {
            name: "default".into(),
            experiments: Vec::new(),
            seed: 1,
            out: None,
            tolerance: 1e-9,
            params: SystemParams::default(),
            detection: DetectionSettings {
                integration: Integration::Kappa,
                chord: DwellChord::Diametric,
                dwell_cap: true,
            },
            table3: Table3Settings {
                diameters: vec![0.3, 0.5, 1.0, 2.0, 5.0],
                v_rel: 10.0,
                cpis: 16,
                symbols: 64,
                k_sweep: vec![1, 2, 4, 8, 16, 32, 64, 128, 256],
                sweep_diameter: 1.0,
                kappa_fit_max: 500,
            },
            campaign: CampaignSettings { config: CampaignConfig::default(), phases: 24, delta_v: vec![1.0, 5.0] },
            rmax: RmaxSettings {
                diameter: 1.0,
                t_obs: 60.0,
                rho: 0.6,
                bins: 360,
                velocity: VelocitySource::Campaign(VelocityStatistic::P95),
                delta_v: 1.0,
            },
            modes: ModesSettings { v_max: 1000.0, step: 1.0, symbols: 64 },
            allocation: AllocationSettings {
                t_obs: 60.0,
                diameter: 1.0,
                r_base_km: 200.0,
                r_risk_km: 300.0,
                r_min: 40.0,
                rate_apolune: 104.0,
                rate_perilune: 116.0,
                baseline_rho: 0.6,
                velocity: VelocitySource::Campaign(VelocityStatistic::P95),
                delta_v: 1.0,
                sweep_base_km: vec![150.0, 200.0, 250.0],
                sweep_risk_km: vec![200.0, 300.0, 400.0],
            },
            outage: OutageSettings {
                cpis: vec![1, 4, 16, 64, 256],
                epsilon: 0.1,
                ratio_max: 1.5,
                ratio_step: 0.01,
                case_target_km: 400.0,
                case_rmax_km: 420.0,
                case_cpis: 16,
            },
            mc: McSettings {
                trials: 20_000,
                cpis: 16,
                velocities: vec![10.0, 50.0, 500.0],
                diameter: 1.0,
                symbols: 64,
                range_min_km: 5.0,
                range_max_km: 150.0,
                range_step_km: 1.0,
                snr_min_db: 5.0,
                snr_max_db: 20.0,
                snr_step_db: 0.1,
                mode: ModePolicy::ForceA,
            },
        }
    }
}

/// Sections carried by manifests that a scenario load skips.
const MANIFEST_SECTIONS: &[&str] = &["manifest", "artifacts"];

fn km(e: &Entry) -> Result<f64, Error> {
    Ok(e.number()? / 1000.0)
}

fn days(e: &Entry) -> Result<f64, Error> {
    Ok(e.number()? / 86_400.0)
}

fn numbers(e: &Entry) -> Result<Vec<f64>, Error> {
    e.list().iter().map(|s| parse_si(s).map_err(|m| e.err(m))).collect()
}

fn counts(e: &Entry) -> Result<Vec<u32>, Error> {
    numbers(e)?
        .into_iter()
        .map(|x| {
            if x >= 1.0 && x.fract() == 0.0 && x <= u32::MAX as f64 {
                Ok(x as u32)
            } else {
                Err(e.err(format!("expected positive integers, got {}", e.value)))
            }
        })
        .collect()
}

fn flag(e: &Entry) -> Result<bool, Error> {
    match e.value.as_str() {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        v => Err(e.err(format!("expected true/false, got `{v}`"))),
    }
}

fn velocity(e: &Entry) -> Result<VelocitySource, Error> {
    VelocitySource::parse(&e.value).map_err(|m| e.err(m))
}

fn u32_of(e: &Entry) -> Result<u32, Error> {
    let n = e.count()?;
    u32::try_from(n).map_err(|_| e.err("value too large"))
}

fn unknown(e: &Entry) -> Error {
    e.err("unknown key")
}

impl Scenario {
    /// Parses and resolves a scenario, collecting every entry-level error.
    pub fn parse(text: &str) -> Result<Self, Vec<Error>> {
        let entries = kv::parse(text).map_err(|e| vec![e])?;
        let mut s = Scenario::default();
        let mut errors = Vec::new();
        for e in &entries {
            if MANIFEST_SECTIONS.contains(&e.section.as_str()) {
                continue;
            }
            if let Err(err) = s.apply(e) {
                errors.push(err);
            }
        }
        if errors.is_empty() {
            Ok(s)
        } else {
            Err(errors)
        }
    }

    fn apply(&mut self, e: &Entry) -> Result<(), Error> {
        let k = e.key.as_str();
        match e.section.as_str() {
            "scenario" => match k {
                "name" => self.name = e.value.clone(),
                "experiments" => {
                    let mut out = Vec::new();
                    for item in e.list() {
                        if item == "full" {
                            out.extend(Experiment::ALL);
                            continue;
                        }
                        let x = Experiment::ALL
                            .into_iter()
                            .find(|x| x.name() == item)
                            .ok_or_else(|| e.err(format!("unknown experiment `{item}`")))?;
                        out.push(x);
                    }
                    let mut seen = Vec::new();
                    out.retain(|x| {
                        let fresh = !seen.contains(x);
                        seen.push(*x);
                        fresh
                    });
                    self.experiments = out;
                }
                "seed" => {
                    self.seed = e.value.parse().map_err(|_| e.err("expected an unsigned 64-bit integer"))?
                }
                "out" => self.out = Some(PathBuf::from(&e.value)),
                "tolerance" => self.tolerance = e.number()?,
                _ => return Err(unknown(e)),
            },
            "system" => self.params.set(e)?,
            "detection" => match k {
                "integration" => {
                    self.detection.integration = match e.value.as_str() {
                        "kappa" => Integration::Kappa,
                        "exact" => Integration::Exact,
                        v => return Err(e.err(format!("expected kappa or exact, got `{v}`"))),
                    }
                }
                "chord" => {
                    self.detection.chord = match e.value.as_str() {
                        "diametric" => DwellChord::Diametric,
                        "average" => DwellChord::Average,
                        v => return Err(e.err(format!("expected diametric or average, got `{v}`"))),
                    }
                }
                "dwell_cap" => self.detection.dwell_cap = flag(e)?,
                _ => return Err(unknown(e)),
            },
            "table3" => {
                let t = &mut self.table3;
                match k {
                    "diameters" => t.diameters = numbers(e)?,
                    "v_rel" => t.v_rel = e.number()?,
                    "cpis" => t.cpis = u32_of(e)?,
                    "symbols" => t.symbols = e.count()?,
                    "k_sweep" => t.k_sweep = counts(e)?,
                    "sweep_diameter" => t.sweep_diameter = e.number()?,
                    "kappa_fit_max" => t.kappa_fit_max = u32_of(e)?,
                    _ => return Err(unknown(e)),
                }
            }
            "campaign" => {
                let c = &mut self.campaign;
                match k {
                    "horizon" => c.config.horizon_days = days(e)?,
                    "recontact_radius" => c.config.recontact_radius_km = km(e)?,
                    "escape_radius" => c.config.escape_radius_km = km(e)?,
                    "sample" => c.config.sample_s = e.number()?,
                    "tol" => c.config.tol = e.number()?,
                    "require_exit" => c.config.require_exit = flag(e)?,
                    "density_bins" => c.config.density_bins = e.count()?,
                    "smoothing_bins" => c.config.smoothing_bins = e.count()?,
                    "phases" => c.phases = e.count()?,
                    "delta_v" => c.delta_v = numbers(e)?,
                    _ => return Err(unknown(e)),
                }
            }
            "rmax_profile" => {
                let r = &mut self.rmax;
                match k {
                    "diameter" => r.diameter = e.number()?,
                    "t_obs" => r.t_obs = e.number()?,
                    "rho" => r.rho = e.number()?,
                    "bins" => r.bins = e.count()?,
                    "velocity" => r.velocity = velocity(e)?,
                    "delta_v" => r.delta_v = e.number()?,
                    _ => return Err(unknown(e)),
                }
            }
            "modes" => match k {
                "v_max" => self.modes.v_max = e.number()?,
                "step" => self.modes.step = e.number()?,
                "symbols" => self.modes.symbols = e.count()?,
                _ => return Err(unknown(e)),
            },
            "allocation" => {
                let a = &mut self.allocation;
                match k {
                    "t_obs" => a.t_obs = e.number()?,
                    "diameter" => a.diameter = e.number()?,
                    "r_base" => a.r_base_km = km(e)?,
                    "r_risk" => a.r_risk_km = km(e)?,
                    "r_min" => a.r_min = e.number()? / 1e6,
                    "rate_apolune" => a.rate_apolune = e.number()? / 1e6,
                    "rate_perilune" => a.rate_perilune = e.number()? / 1e6,
                    "baseline_rho" => a.baseline_rho = e.number()?,
                    "velocity" => a.velocity = velocity(e)?,
                    "delta_v" => a.delta_v = e.number()?,
                    "sweep_base" => a.sweep_base_km = numbers(e)?.into_iter().map(|x| x / 1000.0).collect(),
                    "sweep_risk" => a.sweep_risk_km = numbers(e)?.into_iter().map(|x| x / 1000.0).collect(),
                    _ => return Err(unknown(e)),
                }
            }
            "outage" => {
                let o = &mut self.outage;
                match k {
                    "cpis" => o.cpis = counts(e)?,
                    "epsilon" => o.epsilon = e.number()?,
                    "ratio_max" => o.ratio_max = e.number()?,
                    "ratio_step" => o.ratio_step = e.number()?,
                    "case_target" => o.case_target_km = km(e)?,
                    "case_rmax" => o.case_rmax_km = km(e)?,
                    "case_cpis" => o.case_cpis = u32_of(e)?,
                    _ => return Err(unknown(e)),
                }
            }
            "montecarlo" => {
                let m = &mut self.mc;
                match k {
                    "trials" => m.trials = e.count()?,
                    "cpis" => m.cpis = u32_of(e)?,
                    "velocities" => m.velocities = numbers(e)?,
                    "diameter" => m.diameter = e.number()?,
                    "symbols" => m.symbols = e.count()?,
                    "range_min" => m.range_min_km = km(e)?,
                    "range_max" => m.range_max_km = km(e)?,
                    "range_step" => m.range_step_km = km(e)?,
                    "snr_min" => m.snr_min_db = e.number()?,
                    "snr_max" => m.snr_max_db = e.number()?,
                    "snr_step" => m.snr_step_db = e.number()?,
                    "mode" => {
                        m.mode = match e.value.as_str() {
                            "adaptive" => ModePolicy::Adaptive,
                            "a" | "A" => ModePolicy::ForceA,
                            v => return Err(e.err(format!("expected adaptive or A, got `{v}`"))),
                        }
                    }
                    _ => return Err(unknown(e)),
                }
            }
            "" => return Err(e.err("keys must appear inside a [section]")),
            other => return Err(e.err(format!("unknown section [{other}]"))),
        }
        Ok(())
    }

    /// Physical-range and ordering checks beyond parsing.
    pub fn violations(&self) -> Vec<String> {
        let mut v: Vec<String> =
            self.params.validate().into_iter().map(|x| format!("system.{}: {}", x.key, x.message)).collect();
        if let Err(e) = self.campaign.config.validate() {
            v.push(format!("campaign: {e}"));
        }
        let t = &self.table3;
        let r = &self.rmax;
        let a = &self.allocation;
        let o = &self.outage;
        let m = &self.mc;
        let in_campaign = |dv: f64| self.campaign.delta_v.contains(&dv);
        let uses = |x: Experiment| self.experiments.contains(&x);
        let checks = [
            (t.diameters.iter().all(|d| *d > 0.0), "table3.diameters: must be positive"),
            (t.v_rel >= 0.0, "table3.v_rel: must be non-negative"),
            (t.cpis >= 1 && t.symbols >= 1, "table3.cpis/symbols: must be at least 1"),
            (t.kappa_fit_max >= 2 && t.kappa_fit_max <= 500, "table3.kappa_fit_max: must lie in [2, 500]"),
            (self.campaign.phases >= 1, "campaign.phases: must be at least 1"),
            (
                !self.campaign.delta_v.is_empty() && self.campaign.delta_v.iter().all(|d| *d > 0.0),
                "campaign.delta_v: must be a non-empty list of positive speeds",
            ),
            (r.rho > 0.0 && r.rho <= 1.0, "rmax_profile.rho: must lie in (0, 1]"),
            (r.t_obs > 0.0 && r.bins >= 1 && r.diameter > 0.0, "rmax_profile: t_obs, bins and diameter must be positive"),
            (
                !uses(Experiment::RmaxProfile)
                    || !matches!(r.velocity, VelocitySource::Campaign(_))
                    || in_campaign(r.delta_v),
                "rmax_profile.delta_v: must be one of campaign.delta_v",
            ),
            (self.modes.v_max > 0.0 && self.modes.step > 0.0, "modes: v_max and step must be positive"),
            (a.t_obs > 0.0 && a.diameter > 0.0, "allocation: t_obs and diameter must be positive"),
            (a.r_base_km >= 0.0 && a.r_risk_km >= 0.0, "allocation: target ranges must be non-negative"),
            (a.rate_perilune > a.rate_apolune, "allocation.rate_perilune: must exceed rate_apolune"),
            (a.r_min >= 0.0, "allocation.r_min: must be non-negative"),
            ((0.0..=1.0).contains(&a.baseline_rho), "allocation.baseline_rho: must lie in [0, 1]"),
            (!uses(Experiment::Allocation) || in_campaign(a.delta_v), "allocation.delta_v: must be one of campaign.delta_v"),
            (o.epsilon > 0.0 && o.epsilon < 1.0, "outage.epsilon: must lie in (0, 1)"),
            (o.ratio_max > 0.0 && o.ratio_step > 0.0, "outage: ratio_max and ratio_step must be positive"),
            (o.case_rmax_km > 0.0 && o.case_target_km > 0.0, "outage: case ranges must be positive"),
            (m.trials >= 1 && m.cpis >= 1, "montecarlo: trials and cpis must be at least 1"),
            (
                m.range_min_km > 0.0 && m.range_max_km > m.range_min_km && m.range_step_km > 0.0,
                "montecarlo: range grid must be increasing and positive",
            ),
            (m.snr_max_db > m.snr_min_db && m.snr_step_db > 0.0, "montecarlo: SNR grid must be increasing"),
            (self.tolerance >= 0.0, "scenario.tolerance: must be non-negative"),
        ];
        v.extend(checks.into_iter().filter(|c| !c.0).map(|c| c.1.to_string()));
        v
    }

    /// Fully resolved scenario as a key-value document; parses back to an equal scenario.
    pub fn render(&self) -> String {
        let mut s = String::new();
        let f = |x: f64| format!("{x:?}");
        let list = |xs: &[f64]| xs.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(", ");
        let ulist = |xs: &[u32]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
        let mut sec = |name: &str, rows: Vec<(&str, String)>| {
            let _ = writeln!(s, "[{name}]");
            for (k, v) in rows {
                let _ = writeln!(s, "{k} = {v}");
            }
            s.push('\n');
        };
        let mut head = vec![
            ("name", self.name.clone()),
            ("experiments", self.experiments.iter().map(|x| x.name()).collect::<Vec<_>>().join(", ")),
            ("seed", self.seed.to_string()),
            ("tolerance", f(self.tolerance)),
        ];
        if let Some(o) = &self.out {
            head.push(("out", o.display().to_string()));
        }
        sec("scenario", head);
        sec("system", self.params.resolved().into_iter().map(|(k, v)| (k, f(v))).collect());
        let d = &self.detection;
        sec(
            "detection",
            vec![
                ("integration", if d.integration == Integration::Exact { "exact" } else { "kappa" }.into()),
                ("chord", if d.chord == DwellChord::Average { "average" } else { "diametric" }.into()),
                ("dwell_cap", d.dwell_cap.to_string()),
            ],
        );
        let t = &self.table3;
        sec(
            "table3",
            vec![
                ("diameters", list(&t.diameters)),
                ("v_rel", f(t.v_rel)),
                ("cpis", t.cpis.to_string()),
                ("symbols", t.symbols.to_string()),
                ("k_sweep", ulist(&t.k_sweep)),
                ("sweep_diameter", f(t.sweep_diameter)),
                ("kappa_fit_max", t.kappa_fit_max.to_string()),
            ],
        );
        let c = &self.campaign;
        sec(
            "campaign",
            vec![
                ("horizon", format!("{:?}d", c.config.horizon_days)),
                ("recontact_radius", format!("{:?}km", c.config.recontact_radius_km)),
                ("escape_radius", format!("{:?}km", c.config.escape_radius_km)),
                ("sample", f(c.config.sample_s)),
                ("tol", f(c.config.tol)),
                ("require_exit", c.config.require_exit.to_string()),
                ("density_bins", c.config.density_bins.to_string()),
                ("smoothing_bins", c.config.smoothing_bins.to_string()),
                ("phases", c.phases.to_string()),
                ("delta_v", list(&c.delta_v)),
            ],
        );
        let r = &self.rmax;
        sec(
            "rmax_profile",
            vec![
                ("diameter", f(r.diameter)),
                ("t_obs", f(r.t_obs)),
                ("rho", f(r.rho)),
                ("bins", r.bins.to_string()),
                ("velocity", r.velocity.render()),
                ("delta_v", f(r.delta_v)),
            ],
        );
        let m = &self.modes;
        sec("modes", vec![("v_max", f(m.v_max)), ("step", f(m.step)), ("symbols", m.symbols.to_string())]);
        let a = &self.allocation;
        let kms = |xs: &[f64]| xs.iter().map(|x| format!("{x:?}km")).collect::<Vec<_>>().join(", ");
        sec(
            "allocation",
            vec![
                ("t_obs", f(a.t_obs)),
                ("diameter", f(a.diameter)),
                ("r_base", format!("{:?}km", a.r_base_km)),
                ("r_risk", format!("{:?}km", a.r_risk_km)),
                ("r_min", format!("{:?}Mbps", a.r_min)),
                ("rate_apolune", format!("{:?}Mbps", a.rate_apolune)),
                ("rate_perilune", format!("{:?}Mbps", a.rate_perilune)),
                ("baseline_rho", f(a.baseline_rho)),
                ("velocity", a.velocity.render()),
                ("delta_v", f(a.delta_v)),
                ("sweep_base", kms(&a.sweep_base_km)),
                ("sweep_risk", kms(&a.sweep_risk_km)),
            ],
        );
        let o = &self.outage;
        sec(
            "outage",
            vec![
                ("cpis", ulist(&o.cpis)),
                ("epsilon", f(o.epsilon)),
                ("ratio_max", f(o.ratio_max)),
                ("ratio_step", f(o.ratio_step)),
                ("case_target", format!("{:?}km", o.case_target_km)),
                ("case_rmax", format!("{:?}km", o.case_rmax_km)),
                ("case_cpis", o.case_cpis.to_string()),
            ],
        );
        let mc = &self.mc;
        sec(
            "montecarlo",
            vec![
                ("trials", mc.trials.to_string()),
                ("cpis", mc.cpis.to_string()),
                ("velocities", list(&mc.velocities)),
                ("diameter", f(mc.diameter)),
                ("symbols", mc.symbols.to_string()),
                ("range_min", format!("{:?}km", mc.range_min_km)),
                ("range_max", format!("{:?}km", mc.range_max_km)),
                ("range_step", format!("{:?}km", mc.range_step_km)),
                ("snr_min", f(mc.snr_min_db)),
                ("snr_max", f(mc.snr_max_db)),
                ("snr_step", f(mc.snr_step_db)),
                ("mode", if mc.mode == ModePolicy::Adaptive { "adaptive" } else { "A" }.into()),
            ],
        );
        s
    }
}
