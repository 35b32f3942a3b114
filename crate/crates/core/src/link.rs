//! Monostatic link budget, optical-regime RCS and the cislunar advantage ledger.

use crate::error::{Error, Result};
use crate::kv::Entry;
use crate::num::{from_db, to_db, Real};
use crate::processing::ici_efficiency;

/// Radar/OFDM constants of the relay terminal plus sensing policy constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams<T> {
    pub carrier_hz: T,
    pub bandwidth_hz: T,
    pub antenna_diameter_m: T,
    pub aperture_efficiency: T,
    pub tx_power_w: T,
    pub system_temp_k: T,
    pub subcarriers: usize,
    pub symbols_per_cpi: usize,
    pub cp_ratio: T,
    pub eta_impl: T,
    pub eta_kt: T,
    pub beamwidth_rad: T,
    pub pd: T,
    pub pfa: T,
    pub kappa: T,
    pub symbol_power: T,
}

impl<T: Real> Default for SystemParams<T> {
    fn default() -> Self {
        Self {
            carrier_hz: T::lit(27e9),
            bandwidth_hz: T::lit(100e6),
            antenna_diameter_m: T::lit(1.25),
            aperture_efficiency: T::lit(0.55),
            tx_power_w: T::lit(35.0),
            system_temp_k: T::lit(200.0),
            subcarriers: 1024,
            symbols_per_cpi: 64,
            cp_ratio: T::lit(0.125),
            eta_impl: T::lit(0.56),
            eta_kt: T::lit(0.8),
            beamwidth_rad: T::lit(0.62_f64.to_radians()),
            pd: T::lit(0.9),
            pfa: T::lit(1e-6),
            kappa: T::lit(0.85),
            symbol_power: T::one(),
        }
    }
}

/// A single failed physical-range or ordering check.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub key: &'static str,
    pub message: String,
}

/// Config keys understood by [`SystemParams::set`].
pub const PARAM_KEYS: &[&str] = &[
    "carrier_frequency",
    "bandwidth",
    "antenna_diameter",
    "aperture_efficiency",
    "tx_power",
    "system_temperature",
    "subcarriers",
    "symbols_per_cpi",
    "cp_ratio",
    "eta_impl",
    "eta_kt",
    "beamwidth",
    "pd",
    "pfa",
    "kappa",
    "symbol_power",
];

impl<T: Real> SystemParams<T> {
    pub fn wavelength(&self) -> T {
        T::c() / self.carrier_hz
    }

    /// Boresight gain `eta (pi D / lambda)^2`, used for both transmit and receive.
    pub fn antenna_gain(&self) -> T {
        let x = T::PI() * self.antenna_diameter_m / self.wavelength();
        self.aperture_efficiency * x * x
    }

    pub fn subcarrier_spacing(&self) -> T {
        self.bandwidth_hz / T::from_count(self.subcarriers)
    }

    pub fn symbol_duration(&self) -> T {
        (T::one() + self.cp_ratio) / self.subcarrier_spacing()
    }

    pub fn cpi_duration(&self) -> T {
        T::from_count(self.symbols_per_cpi) * self.symbol_duration()
    }

    pub fn eirp(&self) -> T {
        self.tx_power_w * self.antenna_gain()
    }

    /// Thermal noise power over the full band, `k_B T_sys B`.
    pub fn noise_power(&self) -> T {
        T::k_b() * self.system_temp_k * self.bandwidth_hz
    }

    /// Ideal coherent gain `N M`.
    pub fn coherent_gain(&self) -> T {
        T::from_count(self.subcarriers) * T::from_count(self.symbols_per_cpi)
    }

    /// Lists every violated range or ordering constraint.
    pub fn validate(&self) -> Vec<Violation> {
        let mut v = Vec::new();
        let mut pos = |key: &'static str, x: T| {
            if !(x > T::zero()) || !x.is_finite() {
                v.push(Violation { key, message: format!("must be positive and finite, got {x}") });
            }
        };
        pos("carrier_frequency", self.carrier_hz);
        pos("bandwidth", self.bandwidth_hz);
        pos("antenna_diameter", self.antenna_diameter_m);
        pos("tx_power", self.tx_power_w);
        pos("system_temperature", self.system_temp_k);
        pos("beamwidth", self.beamwidth_rad);
        pos("kappa", self.kappa);
        pos("symbol_power", self.symbol_power);
        let mut unit = |key: &'static str, x: T, open_low: bool| {
            let ok = if open_low { x > T::zero() } else { x >= T::zero() } && x <= T::one();
            if !ok {
                v.push(Violation { key, message: format!("must lie in (0, 1], got {x}") });
            }
        };
        unit("aperture_efficiency", self.aperture_efficiency, true);
        unit("eta_impl", self.eta_impl, true);
        unit("eta_kt", self.eta_kt, true);
        if !(self.cp_ratio >= T::zero() && self.cp_ratio < T::one()) {
            v.push(Violation { key: "cp_ratio", message: format!("must lie in [0, 1), got {}", self.cp_ratio) });
        }
        if self.subcarriers == 0 {
            v.push(Violation { key: "subcarriers", message: "must be at least 1".into() });
        }
        if self.symbols_per_cpi == 0 {
            v.push(Violation { key: "symbols_per_cpi", message: "must be at least 1".into() });
        }
        for (key, p) in [("pd", self.pd), ("pfa", self.pfa)] {
            if !(p > T::zero() && p < T::one()) {
                v.push(Violation { key, message: format!("probability must lie in (0, 1), got {p}") });
            }
        }
        if !(self.pfa < self.pd) {
            v.push(Violation {
                key: "pfa",
                message: format!("ordering violated: pfa ({}) must be below pd ({})", self.pfa, self.pd),
            });
        }
        v
    }

    /// Sets one parameter from a config entry; unknown keys are rejected.
    pub fn set(&mut self, e: &Entry) -> Result<()> {
        let x = || e.number().map(T::lit);
        match e.key.as_str() {
            "carrier_frequency" => self.carrier_hz = x()?,
            "bandwidth" => self.bandwidth_hz = x()?,
            "antenna_diameter" => self.antenna_diameter_m = x()?,
            "aperture_efficiency" => self.aperture_efficiency = x()?,
            "tx_power" => self.tx_power_w = x()?,
            "system_temperature" => self.system_temp_k = x()?,
            "subcarriers" => self.subcarriers = e.count()?,
            "symbols_per_cpi" => self.symbols_per_cpi = e.count()?,
            "cp_ratio" => self.cp_ratio = x()?,
            "eta_impl" => self.eta_impl = x()?,
            "eta_kt" => self.eta_kt = x()?,
            "beamwidth" => self.beamwidth_rad = x()?,
            "pd" => self.pd = x()?,
            "pfa" => self.pfa = x()?,
            "kappa" => self.kappa = x()?,
            "symbol_power" => self.symbol_power = x()?,
            _ => return Err(e.err(format!("unknown parameter (expected one of {})", PARAM_KEYS.join(", ")))),
        }
        Ok(())
    }

    /// Defaults overridden by every entry of a key-value document.
    pub fn from_config(text: &str) -> Result<Self> {
        let mut p = Self::default();
        for e in crate::kv::parse(text)? {
            p.set(&e)?;
        }
        Ok(p)
    }

    /// Resolved values as `(key, value)` pairs in [`PARAM_KEYS`] order.
    pub fn resolved(&self) -> Vec<(&'static str, f64)> {
        vec![
            ("carrier_frequency", self.carrier_hz.as_f64()),
            ("bandwidth", self.bandwidth_hz.as_f64()),
            ("antenna_diameter", self.antenna_diameter_m.as_f64()),
            ("aperture_efficiency", self.aperture_efficiency.as_f64()),
            ("tx_power", self.tx_power_w.as_f64()),
            ("system_temperature", self.system_temp_k.as_f64()),
            ("subcarriers", self.subcarriers as f64),
            ("symbols_per_cpi", self.symbols_per_cpi as f64),
            ("cp_ratio", self.cp_ratio.as_f64()),
            ("eta_impl", self.eta_impl.as_f64()),
            ("eta_kt", self.eta_kt.as_f64()),
            ("beamwidth", self.beamwidth_rad.as_f64()),
            ("pd", self.pd.as_f64()),
            ("pfa", self.pfa.as_f64()),
            ("kappa", self.kappa.as_f64()),
            ("symbol_power", self.symbol_power.as_f64()),
        ]
    }
}

/// Debris target with optical-regime sphere-equivalent cross section.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Target<T> {
    pub diameter_m: T,
    pub rcs_m2: T,
}

impl<T: Real> Target<T> {
    pub fn from_diameter(d: T, params: &SystemParams<T>) -> Result<Self> {
        Ok(Self { diameter_m: d, rcs_m2: rcs_from_diameter(d, params)? })
    }

    pub fn rcs_dbsm(&self) -> T {
        to_db(self.rcs_m2)
    }
}

/// `sigma = pi d^2 / 4`, valid only for `pi d / lambda >= 10`.
pub fn rcs_from_diameter<T: Real>(d: T, params: &SystemParams<T>) -> Result<T> {
    if !(d > T::zero()) {
        return Err(Error::Domain(format!("diameter must be positive, got {d}")));
    }
    let ka = T::PI() * d / params.wavelength();
    if ka < T::lit(10.0) {
        return Err(Error::Regime { what: format!("diameter {d} m"), ka: ka.as_f64() });
    }
    Ok(T::PI() * d * d / T::lit(4.0))
}

/// Round-trip echo power relative to transmit power.
pub fn echo_power_ratio<T: Real>(range_m: T, rcs_m2: T, params: &SystemParams<T>) -> T {
    let g = params.antenna_gain();
    let lam = params.wavelength();
    let four_pi = T::lit(4.0) * T::PI();
    g * g * lam * lam * rcs_m2 / (four_pi.powi(3) * range_m.powi(4))
}

/// Echo SNR before any processing gain, `|alpha|^2 P_s / (k_B T B)`.
pub fn raw_snr<T: Real>(range_m: T, rcs_m2: T, params: &SystemParams<T>) -> T {
    params.tx_power_w * echo_power_ratio(range_m, rcs_m2, params) * params.symbol_power / params.noise_power()
}

/// Non-coherent gain of `K` CPIs under the `K^kappa` law.
pub fn integration_gain<T: Real>(cpis: T, kappa: T) -> T {
    cpis.powf(kappa)
}

/// Sensing SNR after 2D-FFT processing and `K`-CPI integration (Mode A, `M` from params).
pub fn detection_snr<T: Real>(range_m: T, rcs_m2: T, v_rel: T, cpis: u32, params: &SystemParams<T>) -> T {
    let g = params.coherent_gain() * ici_efficiency(v_rel, params.subcarrier_spacing(), params);
    raw_snr(range_m, rcs_m2, params) * g * integration_gain(T::lit(cpis as f64), params.kappa)
}

/// Environmental terms separating the cislunar link from a ground-based radar.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdvantageLedger<T> {
    pub atmospheric_db: T,
    pub ionospheric_db: T,
    pub clutter_db: T,
    pub thermal_db: T,
}

impl<T: Real> Default for AdvantageLedger<T> {
    fn default() -> Self {
        Self {
            atmospheric_db: T::lit(6.0),
            ionospheric_db: T::lit(3.0),
            clutter_db: T::lit(25.0),
            thermal_db: to_db(T::lit(290.0 / 200.0)),
        }
    }
}

impl<T: Real> AdvantageLedger<T> {
    pub fn total_db(&self) -> T {
        self.atmospheric_db + self.ionospheric_db + self.clutter_db + self.thermal_db
    }

    /// Detection-range improvement implied by the total, `10^(total/40)`.
    pub fn range_factor(&self) -> T {
        T::lit(10.0).powf(self.total_db() / T::lit(40.0))
    }
}

pub fn advantage_ledger<T: Real>() -> AdvantageLedger<T> {
    AdvantageLedger::default()
}

/// Same geometry as [`detection_snr`] seen from a co-located ground radar.
pub fn ground_reference_snr<T: Real>(
    range_m: T,
    rcs_m2: T,
    v_rel: T,
    cpis: u32,
    params: &SystemParams<T>,
    ledger: &AdvantageLedger<T>,
) -> T {
    detection_snr(range_m, rcs_m2, v_rel, cpis, params) / from_db(ledger.total_db())
}

/// Range at which [`ground_reference_snr`] meets the single-CPI Swerling threshold.
pub fn ground_reference_range<T: Real>(
    rcs_m2: T,
    v_rel: T,
    cpis: u32,
    params: &SystemParams<T>,
    ledger: &AdvantageLedger<T>,
) -> Result<T> {
    let th = crate::detect::swerling_threshold(params.pd, params.pfa)?;
    Ok((ground_reference_snr(T::one(), rcs_m2, v_rel, cpis, params, ledger) / th).powf(T::lit(0.25)))
}
