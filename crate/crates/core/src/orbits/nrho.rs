//! Differential correction of the southern L2 9:2 NRHO and its phase profiles.

use std::f64::consts::{PI, TAU};
use std::io::Write;

use super::{flow, integrate, variational_flow, Cr3bpSystem, Dop853, RotatingState, Trajectory, GM_MOON};
use crate::error::{Error, Result};
use crate::num::Real;

/// Default number of phase bins for downstream profiles.
pub const PHASE_BINS: usize = 360;
/// Perilune radius of the reference orbit, km.
pub const REFERENCE_PERILUNE_KM: f64 = 3371.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrectionOptions {
    pub tol: f64,
    pub max_iter: usize,
    /// Target on max(|vx|, |vz|) at the half-period crossing.
    pub residual_tol: f64,
    /// Crossings earlier than this (nondimensional) are ignored.
    pub min_half_period: f64,
    pub max_half_period: f64,
}

impl Default for CorrectionOptions {
    fn default() -> Self {
        Self { tol: 1e-12, max_iter: 30, residual_tol: 1e-11, min_half_period: 0.05, max_half_period: 3.0 }
    }
}

/// Apolune state near the 9:2 member, below the Moon (southern family).
pub fn default_guess<T: Real>() -> RotatingState<T> {
    RotatingState::new([T::lit(1.0221), T::zero(), T::lit(-0.1821)], [T::zero(), T::lit(-0.1033), T::zero()])
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfPeriod<T> {
    pub time: T,
    pub state: [T; 6],
    pub iterations: usize,
    pub residual: T,
}

fn first_crossing<T: Real>(
    s0: &RotatingState<T>,
    sys: &Cr3bpSystem<T>,
    opts: &CorrectionOptions,
) -> Result<(T, [T; 42])> {
    let mut a0 = [T::zero(); 42];
    a0[..6].copy_from_slice(&s0.to_array());
    for i in 0..6 {
        a0[6 + 7 * i] = T::one();
    }
    let d = Dop853::new(T::lit(opts.tol))?;
    let mut t_end = T::lit(opts.max_half_period.min(1.0));
    loop {
        let tr = d.integrate(|_, s| variational_flow(s, sys), T::zero(), a0, t_end)?;
        let min_t = T::lit(opts.min_half_period);
        if let Some(t) = tr.crossings(|s| s[1], 0).into_iter().find(|t| *t > min_t) {
            return Ok((t, tr.eval(t)));
        }
        if t_end >= T::lit(opts.max_half_period) {
            return Err(Error::Domain("guess does not return to the x-z plane".into()));
        }
        t_end = (t_end * T::lit(2.0)).min(T::lit(opts.max_half_period));
    }
}

/// Single shooting with x0 fixed: adjusts (z0, vy0) until the next x–z plane crossing is perpendicular.
pub fn correct_half_period<T: Real>(
    guess: &RotatingState<T>,
    sys: &Cr3bpSystem<T>,
    opts: &CorrectionOptions,
) -> Result<(RotatingState<T>, HalfPeriod<T>)> {
    if guess.position[1] != T::zero() {
        return Err(Error::Domain("guess must lie on the x-z plane (y = 0)".into()));
    }
    let mut s = RotatingState::new(
        [guess.position[0], T::zero(), guess.position[2]],
        [T::zero(), guess.velocity[1], T::zero()],
    );
    let mut residual = T::infinity();
    for it in 0..opts.max_iter {
        let (t, a) = first_crossing(&s, sys, opts)?;
        let st: [T; 6] = a[..6].try_into().unwrap();
        residual = st[3].abs().max(st[5].abs());
        if residual < T::lit(opts.residual_tol) {
            return Ok((s, HalfPeriod { time: t, state: st, iterations: it, residual }));
        }
        let d = flow(&st, sys)?;
        let phi = |r: usize, c: usize| a[6 + 6 * r + c];
        let row = |r: usize, c: usize| phi(r, c) - d[r] / st[4] * phi(1, c);
        let (j11, j12, j21, j22) = (row(3, 2), row(3, 4), row(5, 2), row(5, 4));
        let det = j11 * j22 - j12 * j21;
        if det == T::zero() || !det.is_finite() {
            break;
        }
        let (f1, f2) = (-st[3], -st[5]);
        s.position[2] += (j22 * f1 - j12 * f2) / det;
        s.velocity[1] += (-j21 * f1 + j11 * f2) / det;
        if !s.is_finite() {
            break;
        }
    }
    Err(Error::Correction { iterations: opts.max_iter, residual: residual.as_f64() })
}

/// Corrects `guess` with x0 held fixed and builds the periodic orbit.
pub fn correct_nrho(guess: &RotatingState<f64>, sys: &Cr3bpSystem<f64>) -> Result<OrbitSolution> {
    let opts = CorrectionOptions::default();
    let (s0, half) = correct_half_period(guess, sys, &opts)?;
    OrbitSolution::from_corrected(s0, half, sys, &opts)
}

/// Secant continuation in x0 until the perilune radius equals `perilune_km`.
pub fn correct_nrho_to_perilune(
    guess: &RotatingState<f64>,
    sys: &Cr3bpSystem<f64>,
    perilune_km: f64,
) -> Result<OrbitSolution> {
    let opts = CorrectionOptions::default();
    let mut current = *guess;
    let eval = |x0: f64, seed: &mut RotatingState<f64>| -> Result<(f64, RotatingState<f64>, HalfPeriod<f64>)> {
        seed.position[0] = x0;
        let (s, h) = correct_half_period(seed, sys, &opts)?;
        *seed = s;
        let rp = sys.moon_distance(&[h.state[0], h.state[1], h.state[2]]) * sys.length_unit;
        Ok((rp - perilune_km, s, h))
    };
    let mut xa = guess.position[0];
    let (mut fa, _, _) = eval(xa, &mut current)?;
    let mut xb = xa + 1e-3;
    let (mut fb, mut sb, mut hb) = eval(xb, &mut current)?;
    for _ in 0..40 {
        if fb.abs() < 1e-6 {
            return OrbitSolution::from_corrected(sb, hb, sys, &opts);
        }
        if fb == fa {
            break;
        }
        let xc = xb - fb * (xb - xa) / (fb - fa);
        (xa, fa) = (xb, fb);
        xb = xc;
        (fb, sb, hb) = eval(xb, &mut current)?;
    }
    Err(Error::Correction { iterations: 40, residual: fb.abs() })
}

/// Reference orbit: the default guess continued to the 3371 km perilune.
pub fn reference_orbit() -> Result<OrbitSolution> {
    correct_nrho_to_perilune(&default_guess(), &Cr3bpSystem::earth_moon(), REFERENCE_PERILUNE_KM)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseSample {
    pub theta: f64,
    pub time_s: f64,
    pub r_km: f64,
    pub v_gw: f64,
    pub d_earth_km: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrbitSolution {
    pub sys: Cr3bpSystem<f64>,
    /// Apolune state on the x–z plane; `t = 0`.
    pub initial: RotatingState<f64>,
    /// One-period samples on the default phase grid.
    pub states: Vec<RotatingState<f64>>,
    pub period_nd: f64,
    pub period: f64,
    pub perilune_radius: f64,
    pub apolune_radius: f64,
    pub iterations: usize,
    pub correction_residual: f64,
    trajectory: Trajectory<f64, 6>,
}

impl OrbitSolution {
    fn from_corrected(
        s0: RotatingState<f64>,
        half: HalfPeriod<f64>,
        sys: &Cr3bpSystem<f64>,
        opts: &CorrectionOptions,
    ) -> Result<Self> {
        let period_nd = 2.0 * half.time;
        let trajectory = integrate(&s0, period_nd, sys, opts.tol)?;
        let states = (0..PHASE_BINS)
            .map(|k| RotatingState::from_array(&trajectory.eval(period_nd * k as f64 / PHASE_BINS as f64)))
            .collect();
        let l = sys.length_unit;
        Ok(Self {
            sys: *sys,
            initial: s0,
            states,
            period_nd,
            period: period_nd * sys.time_unit,
            perilune_radius: sys.moon_distance(&[half.state[0], half.state[1], half.state[2]]) * l,
            apolune_radius: sys.moon_distance(&s0.position) * l,
            iterations: half.iterations,
            correction_residual: half.residual,
            trajectory,
        })
    }

    pub fn period_days(&self) -> f64 {
        self.period / 86_400.0
    }

    /// Time-phase in [0, 2π) of `t` seconds after apolune.
    pub fn phase_of(&self, t: f64) -> f64 {
        let f = (t / self.period).rem_euclid(1.0);
        (TAU * f).rem_euclid(TAU)
    }

    /// Seconds after apolune for phase `theta`, in [0, T).
    pub fn time_of(&self, theta: f64) -> f64 {
        self.period * theta.rem_euclid(TAU) / TAU
    }

    /// Rotating-frame state at nondimensional time `t` (wrapped into one period).
    pub fn state_at_time_nd(&self, t: f64) -> RotatingState<f64> {
        RotatingState::from_array(&self.trajectory.eval(t.rem_euclid(self.period_nd)))
    }

    pub fn state_at(&self, theta: f64) -> RotatingState<f64> {
        self.state_at_time_nd(self.period_nd * theta.rem_euclid(TAU) / TAU)
    }

    /// Selenocentric radius, km.
    pub fn r(&self, theta: f64) -> f64 {
        self.sys.moon_distance(&self.state_at(theta).position) * self.sys.length_unit
    }

    /// Geocentric distance, km.
    pub fn d_earth(&self, theta: f64) -> f64 {
        self.sys.earth_distance(&self.state_at(theta).position) * self.sys.length_unit
    }

    /// Moon-centred inertial speed, m/s.
    pub fn v_gw(&self, theta: f64) -> f64 {
        moon_inertial_speed(&self.state_at(theta), &self.sys) * self.sys.velocity_unit()
    }

    pub fn sample(&self, theta: f64) -> PhaseSample {
        let s = self.state_at(theta);
        PhaseSample {
            theta,
            time_s: self.time_of(theta),
            r_km: self.sys.moon_distance(&s.position) * self.sys.length_unit,
            v_gw: moon_inertial_speed(&s, &self.sys) * self.sys.velocity_unit(),
            d_earth_km: self.sys.earth_distance(&s.position) * self.sys.length_unit,
        }
    }

    /// Bin-centre samples on an `n`-bin phase grid.
    pub fn grid(&self, n: usize) -> Vec<PhaseSample> {
        phase_grid(n).into_iter().map(|th| self.sample(th)).collect()
    }

    /// Max-norm return error after one period integrated at `tol`.
    pub fn periodicity_residual(&self, tol: f64) -> Result<f64> {
        let end = integrate(&self.initial, self.period_nd, &self.sys, tol)?.final_state();
        Ok(end.iter().zip(self.initial.to_array().iter()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
    }

    /// Relative Jacobi-constant change over one period at `tol`.
    pub fn jacobi_drift(&self, tol: f64) -> Result<f64> {
        let tr = integrate(&self.initial, self.period_nd, &self.sys, tol)?;
        let c0 = self.sys.jacobi_constant(&self.initial);
        let mut worst = 0.0f64;
        for y in &tr.y {
            let c = self.sys.jacobi_constant(&RotatingState::from_array(y));
            worst = worst.max(((c - c0) / c0).abs());
        }
        Ok(worst)
    }

    /// Fraction of the period spent with `v_gw` below `v_threshold` (m/s), from `n` uniform time samples.
    pub fn residence_fraction(&self, v_threshold: f64, n: usize) -> f64 {
        let below = phase_grid(n).into_iter().filter(|th| self.v_gw(*th) < v_threshold).count();
        below as f64 / n as f64
    }

    /// Two-body vis-viva speed (m/s) on the (r_p, r_a) ellipse, with `theta` read as true anomaly from apolune.
    pub fn keplerian_speed(&self, theta: f64) -> f64 {
        let (rp, ra) = (self.perilune_radius, self.apolune_radius);
        let a = 0.5 * (rp + ra);
        let e = (ra - rp) / (ra + rp);
        let r = a * (1.0 - e * e) / (1.0 + e * (theta - PI).cos());
        (GM_MOON * (2.0 / r - 1.0 / a)).sqrt() * 1000.0
    }

    /// Largest two-body/CR3BP speed ratio (either way up) over an `n`-bin grid.
    pub fn keplerian_max_ratio(&self, n: usize) -> f64 {
        phase_grid(n)
            .into_iter()
            .map(|th| {
                let (k, v) = (self.keplerian_speed(th), self.v_gw(th));
                (k / v).max(v / k)
            })
            .fold(0.0, f64::max)
    }

    pub fn write_csv<W: Write>(&self, w: W, n: usize) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["theta_rad", "time_s", "r_km", "v_gw_m_per_s", "d_earth_km"])?;
        for s in self.grid(n) {
            out.write_record(&[
                format!("{:.6}", s.theta),
                format!("{:.3}", s.time_s),
                format!("{:.3}", s.r_km),
                format!("{:.4}", s.v_gw),
                format!("{:.3}", s.d_earth_km),
            ])?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Speed relative to the Moon in a non-rotating frame, nondimensional.
pub fn moon_inertial_speed<T: Real>(s: &RotatingState<T>, sys: &Cr3bpSystem<T>) -> T {
    let rel = [s.position[0] - sys.moon_position()[0], s.position[1], s.position[2]];
    let v = [s.velocity[0] - rel[1], s.velocity[1] + rel[0], s.velocity[2]];
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

/// Bin centres of an `n`-bin grid on [0, 2π).
pub fn phase_grid(n: usize) -> Vec<f64> {
    (0..n).map(|k| TAU * (k as f64 + 0.5) / n as f64).collect()
}

/// Phase-bin index of `theta` on an `n`-bin grid.
pub fn phase_bin(theta: f64, n: usize) -> usize {
    ((theta.rem_euclid(TAU) / TAU * n as f64) as usize).min(n - 1)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DwellWeight {
    pub theta: Vec<f64>,
    /// Time spent per phase bin, as a density in θ (1/rad).
    pub exact: Vec<f64>,
    /// `r(θ)²`, normalized the same way.
    pub r2_proxy: Vec<f64>,
    /// Time spent per bin of selenocentric angle measured from apolune, same normalization.
    pub anomaly: Vec<f64>,
    /// Pearson correlation of `exact` and `r2_proxy`; `None` when either is constant.
    pub correlation: Option<f64>,
}

impl DwellWeight {
    pub fn integral(&self) -> f64 {
        let d = TAU / self.theta.len() as f64;
        self.exact.iter().sum::<f64>() * d
    }

    /// w(0)/w(π) for the exact weight.
    pub fn apolune_perilune_ratio(&self) -> f64 {
        let n = self.exact.len();
        self.exact[0] / self.exact[n / 2]
    }
}

fn normalize_density(v: &mut [f64]) {
    let d = TAU / v.len() as f64;
    let s: f64 = v.iter().sum::<f64>() * d;
    v.iter_mut().for_each(|x| *x /= s);
}

fn pearson(a: &[f64], b: &[f64]) -> Option<f64> {
    let n = a.len() as f64;
    let (ma, mb) = (a.iter().sum::<f64>() / n, b.iter().sum::<f64>() / n);
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        sab += (x - ma) * (y - mb);
        saa += (x - ma) * (x - ma);
        sbb += (y - mb) * (y - mb);
    }
    let den = (saa * sbb).sqrt();
    if den <= 1e-300 * n || saa <= 1e-24 * ma * ma * n || sbb <= 1e-24 * mb * mb * n {
        None
    } else {
        Some(sab / den)
    }
}

/// Dwell weight on an `n`-bin phase grid from time-in-bin, with the r² proxy alongside.
pub fn dwell_weight(orbit: &OrbitSolution, n: usize) -> DwellWeight {
    let theta = phase_grid(n);
    let sub = 64usize;
    let mut exact = vec![0.0; n];
    let mut anomaly = vec![0.0; n];
    let samples = n * sub;
    let moon = orbit.sys.moon_position();
    let angle = |s: &RotatingState<f64>| (s.position[0] - moon[0]).atan2(-s.position[2]);
    let a0 = angle(&orbit.initial);
    let mut prev = 0.0;
    let mut unwrapped = 0.0f64;
    for j in 0..samples {
        let tf = (j as f64 + 0.5) / samples as f64;
        exact[phase_bin(TAU * tf, n)] += 1.0;
        let raw = angle(&orbit.state_at_time_nd(tf * orbit.period_nd)) - a0;
        let mut step = raw - prev;
        step -= TAU * (step / TAU).round();
        unwrapped += step;
        prev = raw;
        anomaly[phase_bin(unwrapped.abs(), n)] += 1.0;
    }
    let mut r2_proxy: Vec<f64> = theta.iter().map(|t| orbit.r(*t).powi(2)).collect();
    normalize_density(&mut exact);
    normalize_density(&mut anomaly);
    normalize_density(&mut r2_proxy);
    let correlation = pearson(&exact, &r2_proxy);
    DwellWeight { theta, exact, r2_proxy, anomaly, correlation }
}

/// Perilune phase on the time-phase convention.
pub const PERILUNE_PHASE: f64 = PI;
