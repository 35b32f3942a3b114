//! Debris-separation recontact campaign around the reference NRHO.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use super::nrho::{dwell_weight, phase_bin, phase_grid, OrbitSolution, PHASE_BINS};
use super::{flow, Dop853, RotatingState};
use crate::error::{Error, Result};
use crate::roots::golden_min;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    V,
    N,
    B,
}

impl Direction {
    pub const ALL: [Direction; 3] = [Direction::V, Direction::N, Direction::B];
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::V => "V",
            Direction::N => "N",
            Direction::B => "B",
        })
    }
}

impl FromStr for Direction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "V" => Ok(Direction::V),
            "N" => Ok(Direction::N),
            "B" => Ok(Direction::B),
            _ => Err(Error::Domain(format!("unknown separation direction {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeparationEvent {
    pub separation_phase: f64,
    pub direction: Direction,
    /// m/s
    pub delta_v: f64,
}

impl SeparationEvent {
    pub fn new(separation_phase: f64, direction: Direction, delta_v: f64) -> Result<Self> {
        if !(delta_v > 0.0 && delta_v.is_finite()) {
            return Err(Error::Domain(format!("delta_v must be positive, got {delta_v}")));
        }
        Ok(Self { separation_phase: separation_phase.rem_euclid(TAU), direction, delta_v })
    }
}

/// `phases` equally spaced separation phases from apolune × {V, N, B} × each Δv.
pub fn standard_events(phases: usize, delta_vs: &[f64]) -> Result<Vec<SeparationEvent>> {
    let mut out = Vec::with_capacity(phases * 3 * delta_vs.len());
    for &dv in delta_vs {
        for d in Direction::ALL {
            for k in 0..phases {
                out.push(SeparationEvent::new(TAU * k as f64 / phases as f64, d, dv)?);
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CampaignConfig {
    pub horizon_days: f64,
    pub recontact_radius_km: f64,
    pub escape_radius_km: f64,
    pub tol: f64,
    pub sample_s: f64,
    /// Count a minimum only after the separation distance has once exceeded the recontact radius.
    pub require_exit: bool,
    pub density_bins: usize,
    pub smoothing_bins: usize,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        Self {
            horizon_days: 45.0,
            recontact_radius_km: 1000.0,
            escape_radius_km: 150_000.0,
            tol: 1e-12,
            sample_s: 60.0,
            require_exit: true,
            density_bins: 72,
            smoothing_bins: 3,
        }
    }
}

impl CampaignConfig {
    pub fn validate(&self) -> Result<()> {
        if !(30.0..=45.0).contains(&self.horizon_days) {
            return Err(Error::Domain(format!("horizon must lie in [30, 45] days, got {}", self.horizon_days)));
        }
        if !(self.recontact_radius_km > 0.0) {
            return Err(Error::Domain("recontact radius must be positive".into()));
        }
        if !(self.escape_radius_km > self.recontact_radius_km) {
            return Err(Error::Domain("escape radius must exceed the recontact radius".into()));
        }
        if !(self.sample_s > 0.0) {
            return Err(Error::Domain("sampling interval must be positive".into()));
        }
        if self.density_bins == 0 || self.smoothing_bins == 0 || self.smoothing_bins.is_multiple_of(2) {
            return Err(Error::Domain("density bins must be positive and the smoothing window odd".into()));
        }
        Dop853::new(self.tol).map(|_| ())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Encounter {
    pub event: usize,
    /// Seconds after separation.
    pub time_s: f64,
    /// Gateway phase at closest approach.
    pub theta: f64,
    /// Inertial relative speed at closest approach, m/s.
    pub v_rel: f64,
    pub distance_km: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum EventStatus {
    Nominal,
    /// Selenocentric distance passed the escape bound; no encounters kept.
    Escaped { after_s: f64 },
    Failed { reason: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct EventResult {
    pub index: usize,
    pub event: SeparationEvent,
    pub status: EventStatus,
    pub encounters: Vec<Encounter>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CampaignResult {
    pub config: CampaignConfig,
    pub events: Vec<EventResult>,
}

/// Unit V, N, B vectors in the rotating frame at a Gateway state.
pub fn vnb_frame(s: &RotatingState<f64>, moon: [f64; 3]) -> [[f64; 3]; 3] {
    let r = [s.position[0] - moon[0], s.position[1] - moon[1], s.position[2] - moon[2]];
    let v = unit(s.velocity);
    let b = unit(cross(r, s.velocity));
    let n = cross(b, v);
    [v, n, b]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn unit(a: [f64; 3]) -> [f64; 3] {
    let n = (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt();
    [a[0] / n, a[1] / n, a[2] / n]
}

fn norm(a: &[f64]) -> f64 {
    a.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn relative(debris: &[f64; 6], gw: &RotatingState<f64>) -> ([f64; 3], [f64; 3]) {
    let dr = [debris[0] - gw.position[0], debris[1] - gw.position[1], debris[2] - gw.position[2]];
    let dv = [debris[3] - gw.velocity[0] - dr[1], debris[4] - gw.velocity[1] + dr[0], debris[5] - gw.velocity[2]];
    (dr, dv)
}

fn propagate_event(index: usize, ev: &SeparationEvent, orbit: &OrbitSolution, cfg: &CampaignConfig) -> EventResult {
    let sys = &orbit.sys;
    let t0 = orbit.period_nd * ev.separation_phase / TAU;
    let gw0 = orbit.state_at_time_nd(t0);
    let frame = vnb_frame(&gw0, sys.moon_position());
    let u = frame[match ev.direction {
        Direction::V => 0,
        Direction::N => 1,
        Direction::B => 2,
    }];
    let dv = ev.delta_v / sys.velocity_unit();
    let mut y0 = gw0.to_array();
    for i in 0..3 {
        y0[3 + i] += dv * u[i];
    }
    let horizon = cfg.horizon_days * 86_400.0 / sys.time_unit;
    let result = |status, encounters| EventResult { index, event: *ev, status, encounters };
    let traj = match Dop853::new(cfg.tol).and_then(|d| d.integrate(|_, s| flow(s, sys), t0, y0, t0 + horizon)) {
        Ok(t) => t,
        Err(e) => return result(EventStatus::Failed { reason: e.to_string() }, Vec::new()),
    };
    let dt = cfg.sample_s / sys.time_unit;
    let n = (horizon / dt).floor() as usize + 1;
    let l = sys.length_unit;
    let escape = cfg.escape_radius_km / l;
    let dist_at = |t: f64| {
        let (dr, _) = relative(&traj.eval(t), &orbit.state_at_time_nd(t));
        norm(&dr)
    };
    let mut d = Vec::with_capacity(n);
    for k in 0..n {
        let t = t0 + dt * k as f64;
        let y = traj.eval(t);
        if sys.moon_distance(&[y[0], y[1], y[2]]) > escape {
            return result(EventStatus::Escaped { after_s: (t - t0) * sys.time_unit }, Vec::new());
        }
        d.push(dist_at(t));
    }
    let radius = cfg.recontact_radius_km / l;
    let mut exited = !cfg.require_exit;
    let mut encounters = Vec::new();
    for i in 1..n.saturating_sub(1) {
        exited |= d[i - 1] > radius;
        if !(d[i] < d[i - 1] && d[i] <= d[i + 1] && d[i] < radius && exited) {
            continue;
        }
        let (a, b) = (t0 + dt * (i - 1) as f64, t0 + dt * (i + 1) as f64);
        let (tm, dm) = golden_min(dist_at, a, b, 1e-12);
        let (_, dvr) = relative(&traj.eval(tm), &orbit.state_at_time_nd(tm));
        encounters.push(Encounter {
            event: index,
            time_s: (tm - t0) * sys.time_unit,
            theta: orbit.phase_of(tm * sys.time_unit),
            v_rel: norm(&dvr) * sys.velocity_unit(),
            distance_km: dm * l,
        });
    }
    result(EventStatus::Nominal, encounters)
}

/// Propagates every event in parallel; results stay in event order.
pub fn run_separation_campaign(
    orbit: &OrbitSolution,
    events: &[SeparationEvent],
    cfg: &CampaignConfig,
) -> Result<CampaignResult> {
    cfg.validate()?;
    let events = events.par_iter().enumerate().map(|(i, e)| propagate_event(i, e, orbit, cfg)).collect();
    Ok(CampaignResult { config: *cfg, events })
}

impl CampaignResult {
    pub fn encounters(&self) -> impl Iterator<Item = (&SeparationEvent, &Encounter)> {
        self.events.iter().flat_map(|e| e.encounters.iter().map(move |c| (&e.event, c)))
    }

    pub fn encounters_for(&self, delta_v: f64) -> Vec<Encounter> {
        self.encounters().filter(|(e, _)| e.delta_v == delta_v).map(|(_, c)| *c).collect()
    }

    pub fn escaped(&self, delta_v: f64) -> usize {
        self.events
            .iter()
            .filter(|e| e.event.delta_v == delta_v && matches!(e.status, EventStatus::Escaped { .. }))
            .count()
    }

    pub fn failed(&self) -> usize {
        self.events.iter().filter(|e| matches!(e.status, EventStatus::Failed { .. })).count()
    }

    pub fn max_v_rel(&self, delta_v: f64) -> Option<f64> {
        self.encounters_for(delta_v).iter().map(|c| c.v_rel).reduce(f64::max)
    }

    pub fn recontacts(&self, delta_v: f64, direction: Direction) -> usize {
        self.encounters().filter(|(e, _)| e.delta_v == delta_v && e.direction == direction).count()
    }

    /// Median v_rel of encounters within `half_width` of apolune.
    pub fn apolune_median(&self, delta_v: f64, half_width: f64) -> Option<f64> {
        let mut v: Vec<f64> = self
            .encounters_for(delta_v)
            .iter()
            .filter(|c| c.theta.min(TAU - c.theta) < half_width)
            .map(|c| c.v_rel)
            .collect();
        if v.is_empty() {
            return None;
        }
        v.sort_by(f64::total_cmp);
        Some(percentile(&v, 50.0))
    }

    pub fn write_events_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["event", "separation_phase_rad", "direction", "delta_v_m_per_s", "status", "escape_after_s", "reason"])?;
        for e in &self.events {
            let (status, after, reason) = match &e.status {
                EventStatus::Nominal => ("nominal", String::new(), String::new()),
                EventStatus::Escaped { after_s } => ("escaped", format!("{after_s:?}"), String::new()),
                EventStatus::Failed { reason } => ("failed", String::new(), reason.clone()),
            };
            out.write_record([
                e.index.to_string(),
                format!("{:?}", e.event.separation_phase),
                e.event.direction.to_string(),
                format!("{:?}", e.event.delta_v),
                status.to_string(),
                after,
                reason,
            ])?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn write_encounters_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["event", "delta_v_m_per_s", "direction", "time_s", "theta_rad", "v_rel_m_per_s", "distance_km"])?;
        for (e, c) in self.encounters() {
            out.write_record([
                c.event.to_string(),
                format!("{:?}", e.delta_v),
                e.direction.to_string(),
                format!("{:?}", c.time_s),
                format!("{:?}", c.theta),
                format!("{:?}", c.v_rel),
                format!("{:?}", c.distance_km),
            ])?;
        }
        out.flush()?;
        Ok(())
    }

    /// Inverse of the two writers; floats round-trip exactly.
    pub fn read_csv<R1: Read, R2: Read>(config: CampaignConfig, events: R1, encounters: R2) -> Result<Self> {
        let bad = |m: &str| Error::Csv(m.to_string());
        let num = |s: &str| s.parse::<f64>().map_err(|_| bad(&format!("bad number {s:?}")));
        let mut out = Vec::new();
        for rec in csv::Reader::from_reader(events).records() {
            let r = rec?;
            let index: usize = r[0].parse().map_err(|_| bad("bad event index"))?;
            if index != out.len() {
                return Err(bad("events out of order"));
            }
            let event = SeparationEvent::new(num(&r[1])?, r[2].parse()?, num(&r[3])?)?;
            let status = match &r[4] {
                "nominal" => EventStatus::Nominal,
                "escaped" => EventStatus::Escaped { after_s: num(&r[5])? },
                "failed" => EventStatus::Failed { reason: r[6].to_string() },
                s => return Err(bad(&format!("unknown status {s:?}"))),
            };
            out.push(EventResult { index, event, status, encounters: Vec::new() });
        }
        for rec in csv::Reader::from_reader(encounters).records() {
            let r = rec?;
            let event: usize = r[0].parse().map_err(|_| bad("bad event index"))?;
            let slot = out.get_mut(event).ok_or_else(|| bad("encounter refers to unknown event"))?;
            slot.encounters.push(Encounter {
                event,
                time_s: num(&r[3])?,
                theta: num(&r[4])?,
                v_rel: num(&r[5])?,
                distance_km: num(&r[6])?,
            });
        }
        Ok(Self { config, events: out })
    }
}

/// Linear-interpolation percentile of sorted data, `q` in percent.
pub fn percentile(sorted: &[f64], q: f64) -> f64 {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let pos = q / 100.0 * (n - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = (lo + 1).min(n - 1);
    sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo])
}

pub const PERCENTILES: [f64; 6] = [5.0, 25.0, 50.0, 75.0, 95.0, 100.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VelocityStatistic {
    Median,
    P95,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EncounterProfile {
    pub theta_grid: Vec<f64>,
    /// {5, 25, 50, 75, 95, max} per bin, pooled over the smoothing window; `None` where no encounter falls.
    pub v_rel_percentiles: Vec<Option<[f64; 6]>>,
    /// Smoothed encounter count, max = 1.
    pub density: Vec<f64>,
    /// Time-in-bin dwell density, integrates to 1.
    pub dwell_weight: Vec<f64>,
    pub r2_proxy: Vec<f64>,
    pub encounters: usize,
}

impl EncounterProfile {
    /// Bins encounters on the coarse density grid and expands onto an `n`-bin phase grid.
    pub fn from_encounters(encounters: &[Encounter], orbit: &OrbitSolution, cfg: &CampaignConfig, n: usize) -> Self {
        let nb = cfg.density_bins;
        let half = cfg.smoothing_bins / 2;
        let mut counts = vec![0.0; nb];
        let mut members: Vec<Vec<f64>> = vec![Vec::new(); nb];
        for c in encounters {
            let b = phase_bin(c.theta, nb);
            counts[b] += 1.0;
            members[b].push(c.v_rel);
        }
        let window = |b: usize| (0..cfg.smoothing_bins).map(move |j| (b + nb + j - half) % nb);
        let smooth: Vec<f64> = (0..nb).map(|b| window(b).map(|j| counts[j]).sum::<f64>() / cfg.smoothing_bins as f64).collect();
        let peak = smooth.iter().cloned().fold(0.0, f64::max);
        let coarse_pct: Vec<Option<[f64; 6]>> = (0..nb)
            .map(|b| {
                let mut v: Vec<f64> = window(b).flat_map(|j| members[j].iter().copied()).collect();
                if v.is_empty() {
                    return None;
                }
                v.sort_by(f64::total_cmp);
                Some(PERCENTILES.map(|q| percentile(&v, q)))
            })
            .collect();
        let w = dwell_weight(orbit, n);
        let theta_grid = phase_grid(n);
        let coarse = |th: f64| phase_bin(th, nb);
        Self {
            v_rel_percentiles: theta_grid.iter().map(|t| coarse_pct[coarse(*t)]).collect(),
            density: theta_grid.iter().map(|t| if peak > 0.0 { smooth[coarse(*t)] / peak } else { 0.0 }).collect(),
            theta_grid,
            dwell_weight: w.exact,
            r2_proxy: w.r2_proxy,
            encounters: encounters.len(),
        }
    }

    pub fn from_campaign(result: &CampaignResult, orbit: &OrbitSolution, delta_v: f64) -> Self {
        Self::from_encounters(&result.encounters_for(delta_v), orbit, &result.config, PHASE_BINS)
    }

    /// Per-bin statistic with empty bins filled by circular linear interpolation; `None` if no bin is populated.
    pub fn velocity_profile(&self, stat: VelocityStatistic) -> Option<Vec<f64>> {
        let idx = match stat {
            VelocityStatistic::Median => 2,
            VelocityStatistic::P95 => 4,
        };
        let n = self.theta_grid.len();
        let known: Vec<(usize, f64)> =
            self.v_rel_percentiles.iter().enumerate().filter_map(|(i, p)| p.map(|p| (i, p[idx]))).collect();
        if known.is_empty() {
            return None;
        }
        Some(
            (0..n)
                .map(|i| {
                    if let Some(p) = self.v_rel_percentiles[i] {
                        return p[idx];
                    }
                    let next = known.iter().find(|(j, _)| *j > i).copied().unwrap_or((known[0].0 + n, known[0].1));
                    let prev = known.iter().rev().find(|(j, _)| *j < i).copied();
                    let prev = prev.map(|(j, v)| (j as f64, v)).unwrap_or_else(|| {
                        let (j, v) = *known.last().unwrap();
                        (j as f64 - n as f64, v)
                    });
                    let (jn, vn) = (next.0 as f64, next.1);
                    if jn == prev.0 {
                        return vn;
                    }
                    prev.1 + (i as f64 - prev.0) / (jn - prev.0) * (vn - prev.1)
                })
                .collect(),
        )
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record([
            "theta_rad",
            "v_rel_p5_m_per_s",
            "v_rel_p25_m_per_s",
            "v_rel_p50_m_per_s",
            "v_rel_p75_m_per_s",
            "v_rel_p95_m_per_s",
            "v_rel_max_m_per_s",
            "density",
            "dwell_weight_per_rad",
            "r2_proxy_per_rad",
        ])?;
        for i in 0..self.theta_grid.len() {
            let mut row = vec![format!("{:.6}", self.theta_grid[i])];
            match self.v_rel_percentiles[i] {
                Some(p) => row.extend(p.iter().map(|v| format!("{v:.4}"))),
                None => row.extend(std::iter::repeat_n(String::new(), 6)),
            }
            row.push(format!("{:.6}", self.density[i]));
            row.push(format!("{:.9}", self.dwell_weight[i]));
            row.push(format!("{:.9}", self.r2_proxy[i]));
            out.write_record(&row)?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Content hash identifying a campaign: orbit system and initial state, events, configuration.
pub fn cache_key(orbit: &OrbitSolution, events: &[SeparationEvent], cfg: &CampaignConfig) -> String {
    let mut h = Sha256::new();
    let mut put = |x: f64| h.update(x.to_le_bytes());
    for x in [orbit.sys.mu, orbit.sys.length_unit, orbit.sys.time_unit, orbit.period_nd] {
        put(x);
    }
    orbit.initial.to_array().into_iter().for_each(&mut put);
    for x in [cfg.horizon_days, cfg.recontact_radius_km, cfg.escape_radius_km, cfg.tol, cfg.sample_s] {
        put(x);
    }
    put(cfg.require_exit as u8 as f64);
    put(cfg.density_bins as f64);
    put(cfg.smoothing_bins as f64);
    for e in events {
        put(e.separation_phase);
        put(e.delta_v);
        put(e.direction as u8 as f64);
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// Apolune window half-width used for the Δv comparison.
pub const APOLUNE_WINDOW: f64 = PI / 6.0;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbits::nrho::reference_orbit;
    use std::sync::OnceLock;

    fn orbit() -> &'static OrbitSolution {
        static O: OnceLock<OrbitSolution> = OnceLock::new();
        O.get_or_init(|| reference_orbit().unwrap())
    }

    #[test]
    fn percentile_matches_linear_rule() {
        let v = [1.0, 2.0, 3.0, 4.0, 10.0];
        assert_eq!(percentile(&v, 50.0), 3.0);
        assert_eq!(percentile(&v, 100.0), 10.0);
        assert!((percentile(&v, 95.0) - 8.8).abs() < 1e-12);
        assert_eq!(percentile(&[7.0], 5.0), 7.0);
    }

    #[test]
    fn events_and_config_validation() {
        assert!(SeparationEvent::new(0.0, Direction::V, 0.0).is_err());
        assert_eq!(standard_events(24, &[1.0, 5.0]).unwrap().len(), 144);
        let bad = CampaignConfig { horizon_days: 60.0, ..Default::default() };
        assert!(bad.validate().is_err());
        let bad = CampaignConfig { recontact_radius_km: 0.0, ..Default::default() };
        assert!(bad.validate().is_err());
        assert!(CampaignConfig::default().validate().is_ok());
    }

    #[test]
    fn vnb_is_orthonormal() {
        let o = orbit();
        for th in [0.0, 1.0, PI] {
            let f = vnb_frame(&o.state_at(th), o.sys.moon_position());
            for i in 0..3 {
                for j in 0..3 {
                    let d: f64 = (0..3).map(|k| f[i][k] * f[j][k]).sum();
                    assert!((d - if i == j { 1.0 } else { 0.0 }).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn small_campaign_deterministic_and_cached_round_trip() {
        let o = orbit();
        let cfg = CampaignConfig { horizon_days: 30.0, sample_s: 300.0, tol: 1e-10, ..Default::default() };
        let events = standard_events(2, &[1.0]).unwrap();
        let a = run_separation_campaign(o, &events, &cfg).unwrap();
        let b = run_separation_campaign(o, &events, &cfg).unwrap();
        assert_eq!(a, b);
        let (mut ev, mut en) = (Vec::new(), Vec::new());
        a.write_events_csv(&mut ev).unwrap();
        a.write_encounters_csv(&mut en).unwrap();
        let back = CampaignResult::read_csv(cfg, ev.as_slice(), en.as_slice()).unwrap();
        assert_eq!(back, a);
        for (_, c) in a.encounters() {
            assert!(c.distance_km < cfg.recontact_radius_km && c.theta < TAU && c.v_rel > 0.0);
        }
        let k1 = cache_key(o, &events, &cfg);
        let k2 = cache_key(o, &events, &CampaignConfig { recontact_radius_km: 900.0, ..cfg });
        assert_ne!(k1, k2);
        assert_eq!(k1.len(), 64);
    }

    #[test]
    fn profile_invariants() {
        let o = orbit();
        let cfg = CampaignConfig::default();
        let enc: Vec<Encounter> = (0..40)
            .map(|i| Encounter {
                event: 0,
                time_s: 0.0,
                theta: (i as f64 * 0.37).rem_euclid(TAU),
                v_rel: 1.0 + (i % 7) as f64,
                distance_km: 10.0,
            })
            .collect();
        let p = EncounterProfile::from_encounters(&enc, o, &cfg, 360);
        assert_eq!(p.theta_grid.len(), 360);
        assert!((p.density.iter().cloned().fold(0.0, f64::max) - 1.0).abs() < 1e-15);
        assert!(p.density.iter().all(|d| *d >= 0.0));
        for q in p.v_rel_percentiles.iter().flatten() {
            assert!(q.windows(2).all(|w| w[0] <= w[1]));
        }
        let d = TAU / 360.0;
        assert!((p.dwell_weight.iter().sum::<f64>() * d - 1.0).abs() < 1e-9);
        let v = p.velocity_profile(VelocityStatistic::P95).unwrap();
        assert!(v.iter().all(|x| (1.0..=7.0).contains(x)));
        let empty = EncounterProfile::from_encounters(&[], o, &cfg, 360);
        assert!(empty.velocity_profile(VelocityStatistic::Median).is_none());
        assert!(empty.density.iter().all(|d| *d == 0.0));
    }
}
