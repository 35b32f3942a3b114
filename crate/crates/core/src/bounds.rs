//! Fisher information and Cramér–Rao bounds for joint delay/Doppler estimation.

use crate::error::{Error, Result};
use crate::link::{raw_snr, SystemParams, Target};
use crate::num::Real;
use crate::processing::{doppler_shift, ici_efficiency};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EchoParameters<T> {
    pub tau: T,
    pub doppler: T,
    /// Per-resource-element SNR; noise is referred to the full band so that the
    /// sensing SNR after processing is `N M G gamma_sc`.
    pub gamma_sc: T,
}

impl<T: Real> EchoParameters<T> {
    pub fn from_geometry(range_m: T, rcs: T, v_rel: T, params: &SystemParams<T>) -> Self {
        Self {
            tau: T::lit(2.0) * range_m / T::c(),
            doppler: doppler_shift(v_rel, params),
            gamma_sc: raw_snr(range_m, rcs, params),
        }
    }
}

/// RMS bandwidth `(N^2 - 1) delta_f^2 / 12`.
pub fn beta_rms_sq<T: Real>(params: &SystemParams<T>) -> T {
    let n = T::from_count(params.subcarriers);
    let df = params.subcarrier_spacing();
    (n * n - T::one()) * df * df / T::lit(12.0)
}

/// RMS slow-time extent `(M^2 - 1) T_sym^2 / 12`.
pub fn gamma_rms_sq<T: Real>(params: &SystemParams<T>) -> T {
    let m = T::from_count(params.symbols_per_cpi);
    let ts = params.symbol_duration();
    (m * m - T::one()) * ts * ts / T::lit(12.0)
}

/// FIM for `(tau, f_d)`; diagonal by separability.
pub fn fim<T: Real>(params: &SystemParams<T>, echo: &EchoParameters<T>) -> Result<[[T; 2]; 2]> {
    if !(echo.gamma_sc > T::zero()) {
        return Err(Error::Domain(format!("per-subcarrier SNR must be positive, got {}", echo.gamma_sc)));
    }
    let w = T::lit(2.0) * params.coherent_gain() * echo.gamma_sc * T::lit(4.0) * T::PI() * T::PI();
    Ok([[w * beta_rms_sq(params), T::zero()], [T::zero(), w * gamma_rms_sq(params)]])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrbForm {
    /// Ideal processor, SNR `N M gamma_sc`.
    Information,
    /// ICI- and implementation-degraded SNR `N M G gamma_sc`.
    Processor,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrbResult<T> {
    pub crb_range: T,
    pub crb_velocity: T,
    pub beta_rms_sq: T,
    pub gamma_rms_sq: T,
    pub snr: T,
    pub form: CrbForm,
    /// `beta^2 / (B^2/12) - 1`.
    pub beta_approx_error: T,
    /// `gamma^2 / (T_CPI^2/12) - 1`.
    pub gamma_approx_error: T,
}

impl<T: Real> CrbResult<T> {
    pub fn range_rmse(&self) -> T {
        self.crb_range.sqrt()
    }

    pub fn velocity_rmse(&self) -> T {
        self.crb_velocity.sqrt()
    }
}

/// Range and velocity CRBs. `cpis = Some(K)` scales the SNR by `K^kappa`; the default
/// `None` bounds a single CPI.
pub fn crb<T: Real>(
    range_m: T,
    target: &Target<T>,
    v_rel: T,
    cpis: Option<u32>,
    params: &SystemParams<T>,
    form: CrbForm,
) -> Result<CrbResult<T>> {
    if !(range_m > T::zero()) || !range_m.is_finite() {
        return Err(Error::Domain(format!("range must be positive and finite, got {range_m}")));
    }
    let echo = EchoParameters::from_geometry(range_m, target.rcs_m2, v_rel, params);
    let mut snr = params.coherent_gain() * echo.gamma_sc;
    if form == CrbForm::Processor {
        snr *= ici_efficiency(v_rel, params.subcarrier_spacing(), params);
    }
    if let Some(k) = cpis {
        snr *= T::lit(k as f64).powf(params.kappa);
    }
    let b2 = beta_rms_sq(params);
    let g2 = gamma_rms_sq(params);
    let c2 = T::c() * T::c();
    let k = T::lit(32.0) * T::PI() * T::PI() * snr;
    let fc = params.carrier_hz;
    let bw = params.bandwidth_hz;
    let tc = params.cpi_duration();
    Ok(CrbResult {
        crb_range: c2 / (k * b2),
        crb_velocity: c2 / (k * fc * fc * g2),
        beta_rms_sq: b2,
        gamma_rms_sq: g2,
        snr,
        form,
        beta_approx_error: b2 / (bw * bw / T::lit(12.0)) - T::one(),
        gamma_approx_error: g2 / (tc * tc / T::lit(12.0)) - T::one(),
    })
}

/// Range/velocity CRBs obtained by inverting [`fim`] and mapping `tau -> R`, `f_d -> v`.
pub fn crb_from_fim<T: Real>(params: &SystemParams<T>, echo: &EchoParameters<T>) -> Result<(T, T)> {
    let j = fim(params, echo)?;
    let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
    let inv_tt = j[1][1] / det;
    let inv_ff = j[0][0] / det;
    let half_c = T::c() / T::lit(2.0);
    let dv = T::c() / (T::lit(2.0) * params.carrier_hz);
    Ok((half_c * half_c * inv_tt, dv * dv * inv_ff))
}
