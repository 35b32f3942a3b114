//! Earth–Moon circular restricted three-body dynamics and the orbit-phase profiles built on it.

pub mod campaign;
pub mod dop853;
pub mod nrho;

use crate::error::{Error, Result};
use crate::num::Real;

pub use dop853::{DenseStep, Dop853, Trajectory};

/// Sidereal month in days; sets the time unit `1/n`.
pub const SIDEREAL_MONTH_DAYS: f64 = 27.321661;
/// Lunar gravitational parameter, km³/s².
pub const GM_MOON: f64 = 4902.800066;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cr3bpSystem<T> {
    pub mu: T,
    pub length_unit: T,
    pub time_unit: T,
}

impl<T: Real> Cr3bpSystem<T> {
    pub fn new(mu: T, length_unit: T, time_unit: T) -> Result<Self> {
        if !(mu > T::zero() && mu < T::lit(0.5)) {
            return Err(Error::Domain(format!("mass ratio must lie in (0, 0.5), got {mu}")));
        }
        if !(length_unit > T::zero() && time_unit > T::zero()) {
            return Err(Error::Domain("length and time units must be positive".into()));
        }
        Ok(Self { mu, length_unit, time_unit })
    }

    pub fn earth_moon() -> Self {
        Self {
            mu: T::lit(0.01215),
            length_unit: T::lit(384_400.0),
            time_unit: T::lit(SIDEREAL_MONTH_DAYS * 86_400.0 / std::f64::consts::TAU),
        }
    }

    /// Velocity unit in m/s.
    pub fn velocity_unit(&self) -> T {
        self.length_unit * T::lit(1000.0) / self.time_unit
    }

    pub fn earth_position(&self) -> [T; 3] {
        [-self.mu, T::zero(), T::zero()]
    }

    pub fn moon_position(&self) -> [T; 3] {
        [T::one() - self.mu, T::zero(), T::zero()]
    }

    pub fn jacobi_constant(&self, s: &RotatingState<T>) -> T {
        let [x, y, _] = s.position;
        let (r1, r2) = self.primary_distances(&s.position);
        let v2 = s.velocity.iter().map(|v| *v * *v).sum::<T>();
        x * x + y * y + T::lit(2.0) * (T::one() - self.mu) / r1 + T::lit(2.0) * self.mu / r2 - v2
    }

    fn primary_distances(&self, p: &[T; 3]) -> (T, T) {
        let [x, y, z] = *p;
        let r1 = ((x + self.mu).powi(2) + y * y + z * z).sqrt();
        let r2 = ((x - T::one() + self.mu).powi(2) + y * y + z * z).sqrt();
        (r1, r2)
    }

    /// x-coordinates of L1, L2, L3.
    pub fn collinear_points(&self) -> Result<[T; 3]> {
        let mu = self.mu;
        let g = |x: T| {
            let d1 = x + mu;
            let d2 = x - T::one() + mu;
            x - (T::one() - mu) * d1 / d1.abs().powi(3) - mu * d2 / d2.abs().powi(3)
        };
        let eps = T::lit(1e-9);
        let tol = T::lit(1e-15);
        let moon = T::one() - mu;
        let l1 = crate::roots::brent(g, -mu + T::lit(0.01), moon - eps, tol, 200)?;
        let l2 = crate::roots::brent(g, moon + eps, T::lit(2.0), tol, 200)?;
        let l3 = crate::roots::brent(g, T::lit(-2.0), -mu - T::lit(0.01), tol, 200)?;
        Ok([l1, l2, l3])
    }

    /// Selenocentric distance of a nondimensional position.
    pub fn moon_distance(&self, p: &[T; 3]) -> T {
        self.primary_distances(p).1
    }

    pub fn earth_distance(&self, p: &[T; 3]) -> T {
        self.primary_distances(p).0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RotatingState<T> {
    pub position: [T; 3],
    pub velocity: [T; 3],
}

impl<T: Real> RotatingState<T> {
    pub fn new(position: [T; 3], velocity: [T; 3]) -> Self {
        Self { position, velocity }
    }

    pub fn from_array(a: &[T; 6]) -> Self {
        Self { position: [a[0], a[1], a[2]], velocity: [a[3], a[4], a[5]] }
    }

    pub fn to_array(&self) -> [T; 6] {
        let (p, v) = (self.position, self.velocity);
        [p[0], p[1], p[2], v[0], v[1], v[2]]
    }

    pub fn is_finite(&self) -> bool {
        self.position.iter().chain(self.velocity.iter()).all(|v| v.is_finite())
    }

    /// Image under the x–z plane symmetry (pair with time reversal).
    pub fn mirrored(&self) -> Self {
        let (p, v) = (self.position, self.velocity);
        Self { position: [p[0], -p[1], p[2]], velocity: [-v[0], v[1], -v[2]] }
    }
}

const SINGULAR_RADIUS: f64 = 1e-10;

fn accel<T: Real>(s: &[T; 6], sys: &Cr3bpSystem<T>) -> Result<[T; 3]> {
    let [x, y, z, vx, vy, _] = *s;
    let (r1, r2) = sys.primary_distances(&[x, y, z]);
    let lim = T::lit(SINGULAR_RADIUS);
    if !(r1 > lim) {
        return Err(Error::Singularity { primary: "earth", distance: r1.as_f64() });
    }
    if !(r2 > lim) {
        return Err(Error::Singularity { primary: "moon", distance: r2.as_f64() });
    }
    let mu = sys.mu;
    let m1 = (T::one() - mu) / (r1 * r1 * r1);
    let m2 = mu / (r2 * r2 * r2);
    let two = T::lit(2.0);
    Ok([
        two * vy + x - m1 * (x + mu) - m2 * (x - T::one() + mu),
        -two * vx + y - m1 * y - m2 * y,
        -m1 * z - m2 * z,
    ])
}

/// Flat-array right-hand side used by the integrators.
pub fn flow<T: Real>(s: &[T; 6], sys: &Cr3bpSystem<T>) -> Result<[T; 6]> {
    if !s.iter().all(|v| v.is_finite()) {
        return Err(Error::Domain("non-finite state".into()));
    }
    let a = accel(s, sys)?;
    Ok([s[3], s[4], s[5], a[0], a[1], a[2]])
}

/// Time derivative of a rotating-frame state: velocity and acceleration, Coriolis and centrifugal terms included.
pub fn cr3bp_derivative<T: Real>(state: &RotatingState<T>, sys: &Cr3bpSystem<T>) -> Result<RotatingState<T>> {
    flow(&state.to_array(), sys).map(|d| RotatingState::from_array(&d))
}

/// State plus row-major 6×6 state transition matrix.
pub fn variational_flow<T: Real>(s: &[T; 42], sys: &Cr3bpSystem<T>) -> Result<[T; 42]> {
    let head: [T; 6] = s[..6].try_into().unwrap();
    let d = flow(&head, sys)?;
    let [x, y, z] = [s[0], s[1], s[2]];
    let mu = sys.mu;
    let mut h = [[T::zero(); 3]; 3];
    h[0][0] = T::one();
    h[1][1] = T::one();
    for (m, c) in [(T::one() - mu, [x + mu, y, z]), (mu, [x - T::one() + mu, y, z])] {
        let r2 = c[0] * c[0] + c[1] * c[1] + c[2] * c[2];
        let r = r2.sqrt();
        let r3 = r2 * r;
        let r5 = r3 * r2;
        for i in 0..3 {
            for j in 0..3 {
                let delta = if i == j { T::one() / r3 } else { T::zero() };
                h[i][j] += m * (T::lit(3.0) * c[i] * c[j] / r5 - delta);
            }
        }
    }
    let mut out = [T::zero(); 42];
    out[..6].copy_from_slice(&d);
    let phi = |r: usize, c: usize| s[6 + 6 * r + c];
    let two = T::lit(2.0);
    for c in 0..6 {
        for r in 0..3 {
            out[6 + 6 * r + c] = phi(3 + r, c);
        }
        for r in 0..3 {
            let mut acc = T::zero();
            for (k, hk) in h[r].iter().enumerate() {
                acc += *hk * phi(k, c);
            }
            out[6 + 6 * (3 + r) + c] = acc;
        }
        out[6 + 6 * 3 + c] += two * phi(4, c);
        out[6 + 6 * 4 + c] -= two * phi(3, c);
    }
    Ok(out)
}

/// Propagates `state0` over `t_span` nondimensional time units at equal relative and absolute tolerance.
pub fn integrate<T: Real>(
    state0: &RotatingState<T>,
    t_span: T,
    sys: &Cr3bpSystem<T>,
    tol: T,
) -> Result<Trajectory<T, 6>> {
    if !state0.is_finite() {
        return Err(Error::Domain("initial state is not finite".into()));
    }
    Dop853::new(tol)?.integrate(|_, s| flow(s, sys), T::zero(), state0.to_array(), t_span)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn libration_points_are_equilibria() {
        let sys = Cr3bpSystem::<f64>::earth_moon();
        let l = sys.collinear_points().unwrap();
        assert!(l[0] > 0.83 && l[0] < 0.84);
        assert!(l[1] > 1.15 && l[1] < 1.16);
        assert!(l[2] < -1.0 && l[2] > -1.01);
        for x in l {
            let d = cr3bp_derivative(&RotatingState::new([x, 0.0, 0.0], [0.0; 3]), &sys).unwrap();
            assert!(d.velocity.iter().all(|a| a.abs() < 1e-13));
        }
    }

    #[test]
    fn singularity_detected() {
        let sys = Cr3bpSystem::<f64>::earth_moon();
        let s = RotatingState::new(sys.moon_position(), [0.0; 3]);
        assert!(matches!(cr3bp_derivative(&s, &sys), Err(Error::Singularity { primary: "moon", .. })));
        let s = RotatingState::new(sys.earth_position(), [0.0; 3]);
        assert!(matches!(cr3bp_derivative(&s, &sys), Err(Error::Singularity { primary: "earth", .. })));
    }

    #[test]
    fn system_validation_and_units() {
        assert!(Cr3bpSystem::new(0.6, 1.0, 1.0).is_err());
        assert!(Cr3bpSystem::new(0.01, -1.0, 1.0).is_err());
        let sys = Cr3bpSystem::<f64>::earth_moon();
        assert!((sys.time_unit - 375_699.0).abs() < 1.0);
        assert!((sys.velocity_unit() - 1023.16).abs() < 0.1);
    }

    #[test]
    fn mirror_symmetry_of_flow() {
        let sys = Cr3bpSystem::<f64>::earth_moon();
        let s0 = RotatingState::new([1.05, 0.02, -0.1], [0.01, -0.2, 0.03]);
        let fwd = integrate(&s0, 0.7, &sys, 1e-12).unwrap().final_state();
        let m = RotatingState::from_array(&fwd).mirrored();
        let back = integrate(&m, 0.7, &sys, 1e-12).unwrap().final_state();
        let back = RotatingState::from_array(&back).mirrored().to_array();
        for (a, b) in back.iter().zip(s0.to_array().iter()) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn stm_matches_finite_differences() {
        let sys = Cr3bpSystem::<f64>::earth_moon();
        let s0 = [1.02, 0.0, -0.18, 0.0, -0.1, 0.0];
        let mut a0 = [0.0; 42];
        a0[..6].copy_from_slice(&s0);
        for i in 0..6 {
            a0[6 + 7 * i] = 1.0;
        }
        let d = Dop853::new(1e-12).unwrap();
        let t = 0.5;
        let end = d.integrate(|_, s| variational_flow(s, &sys), 0.0, a0, t).unwrap().final_state();
        let eps = 1e-7;
        for c in 0..6 {
            let mut p = s0;
            p[c] += eps;
            let mut m = s0;
            m[c] -= eps;
            let fp = integrate(&RotatingState::from_array(&p), t, &sys, 1e-12).unwrap().final_state();
            let fm = integrate(&RotatingState::from_array(&m), t, &sys, 1e-12).unwrap().final_state();
            for r in 0..6 {
                let fd = (fp[r] - fm[r]) / (2.0 * eps);
                let an = end[6 + 6 * r + c];
                assert!((fd - an).abs() < 1e-5 * an.abs().max(1.0), "({r},{c}) {fd} vs {an}");
            }
        }
    }

    #[test]
    fn jacobi_conserved_f32() {
        let sys = Cr3bpSystem::<f32>::earth_moon();
        let s0 = RotatingState::new([0.9f32, 0.0, 0.05], [0.0, 0.3, 0.0]);
        let c0 = sys.jacobi_constant(&s0);
        let tr = integrate(&s0, 0.5, &sys, 1e-6).unwrap();
        let c1 = sys.jacobi_constant(&RotatingState::from_array(&tr.final_state()));
        assert!(((c1 - c0) / c0).abs() < 1e-4);
    }
}
