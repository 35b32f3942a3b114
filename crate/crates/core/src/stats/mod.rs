//! K-CPI sensing outage under Swerling-I fluctuation.

pub mod gamma;

pub use gamma::{
    gamma_pq, inverse_regularized_lower_gamma, inverse_regularized_upper_gamma, ln_gamma, regularized_lower_gamma,
    regularized_upper_gamma,
};

use crate::error::{Error, Result};
use crate::num::Real;
use std::io::Write;

/// Probability that the instantaneous detection range falls short of `r_target`:
/// `F_Gamma(K (R_target / R_max,det)^4; K, 1)`.
pub fn outage_probability<T: Real>(r_target: T, r_max_det: T, cpis: u32) -> Result<T> {
    if !(r_max_det > T::zero()) {
        return Err(Error::Domain(format!("detection range must be positive, got {r_max_det}")));
    }
    if cpis == 0 {
        return Err(Error::Domain("CPI count must be at least 1".into()));
    }
    if r_target < T::zero() {
        return Err(Error::Domain(format!("target range must be non-negative, got {r_target}")));
    }
    let k = T::lit(cpis as f64);
    Ok(regularized_lower_gamma(k, k * (r_target / r_max_det).powi(4)))
}

/// Fraction of `R_max,det` at which the outage probability equals `epsilon`.
pub fn reliable_range_ratio<T: Real>(epsilon: T, cpis: u32) -> Result<T> {
    if !(epsilon > T::zero() && epsilon < T::one()) {
        return Err(Error::Domain(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    if cpis == 0 {
        return Err(Error::Domain("CPI count must be at least 1".into()));
    }
    let k = T::lit(cpis as f64);
    Ok((inverse_regularized_lower_gamma(k, epsilon)? / k).powf(T::lit(0.25)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutageCurve<T> {
    pub cpis: u32,
    pub range_ratio: Vec<T>,
    pub p_out: Vec<T>,
}

impl<T: Real> OutageCurve<T> {
    pub fn new(cpis: u32, range_ratio: &[T]) -> Result<Self> {
        let p_out = range_ratio
            .iter()
            .map(|&r| outage_probability(r, T::one(), cpis))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { cpis, range_ratio: range_ratio.to_vec(), p_out })
    }

    pub fn reliable_ratio(&self, epsilon: T) -> Result<T> {
        reliable_range_ratio(epsilon, self.cpis)
    }
}

/// Writes one row per range ratio with a `p_out_k<K>` column per curve.
pub fn write_outage_csv<W: Write>(curves: &[OutageCurve<f64>], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["range_ratio".to_string()];
    header.extend(curves.iter().map(|c| format!("p_out_k{}", c.cpis)));
    w.write_record(&header)?;
    if let Some(first) = curves.first() {
        for (i, r) in first.range_ratio.iter().enumerate() {
            let mut row = vec![r.to_string()];
            row.extend(curves.iter().map(|c| c.p_out[i].to_string()));
            w.write_record(&row)?;
        }
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn single_cpi_closed_form() {
        for i in 0..=300 {
            let r = i as f64 / 100.0;
            let p = outage_probability(r, 1.0, 1).unwrap();
            assert!((p - (1.0 - (-r.powi(4)).exp())).abs() < 1e-12, "r={r}");
        }
    }

    #[test]
    fn at_detection_range_tends_to_half_from_above() {
        // Gamma(K,1) has median below its mean K, so F(K) > 1/2.
        let p256 = outage_probability(1.0_f64, 1.0, 256).unwrap();
        assert!((p256 - 0.508_311_476_3).abs() < 1e-9);
        let p16 = outage_probability(1.0_f64, 1.0, 16).unwrap();
        assert!(p16 > p256 && p256 > 0.5);
    }

    #[test]
    fn perilune_external_threat_case() {
        let p = outage_probability(400.0_f64, 420.0, 16).unwrap();
        assert!((p - 0.251_012_898_1).abs() < 1e-9);
    }

    #[test]
    fn reliable_ratios() {
        let want = [0.5697, 0.8127, 0.9134, 0.9584, 0.9796];
        for (k, w) in [1, 4, 16, 64, 256].into_iter().zip(want) {
            let r = reliable_range_ratio(0.1_f64, k).unwrap();
            assert!((r - w).abs() < 1e-4, "K={k}: {r}");
        }
        assert!(reliable_range_ratio(0.99_f64, 1).unwrap() > 1.0);
        assert!((reliable_range_ratio(0.5_f64, 4096).unwrap() - 1.0).abs() < 1e-3);
        assert!(reliable_range_ratio(0.0_f64, 4).is_err());
    }

    #[test]
    fn curve_limits_and_csv() {
        let grid: Vec<f64> = (0..=40).map(|i| i as f64 * 0.05).collect();
        let c = OutageCurve::new(16, &grid).unwrap();
        assert_eq!(c.p_out[0], 0.0);
        assert!(c.p_out.windows(2).all(|w| w[1] >= w[0]));
        assert!(c.p_out.last().unwrap() > &0.999_999);
        let mut buf = Vec::new();
        write_outage_csv(&[OutageCurve::new(1, &grid).unwrap(), c], &mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert!(s.starts_with("range_ratio,p_out_k1,p_out_k16\n"));
        assert_eq!(s.lines().count(), 42);
    }

    proptest! {
        #[test]
        fn ratio_inverts_outage(eps in 0.001f64..0.999, k in 1u32..300) {
            let r = reliable_range_ratio(eps, k).unwrap();
            let p = outage_probability(r * 250e3, 250e3, k).unwrap();
            prop_assert!((p - eps).abs() < 1e-8);
        }

        #[test]
        fn monotone_in_k(ratio in 0.3f64..1.7, k in 1u32..200) {
            // Just above 1 the first few K still decrease (median below mean).
            prop_assume!(!(0.999..=1.08).contains(&ratio));
            let a = outage_probability(ratio, 1.0, k).unwrap();
            let b = outage_probability(ratio, 1.0, k + 1).unwrap();
            if ratio < 1.0 {
                prop_assert!(b < a);
            } else if b < 1.0 - 1e-12 {
                prop_assert!(b > a);
            } else {
                prop_assert!(b >= a);
            }
        }

        #[test]
        fn reliable_ratio_increasing_in_k(eps in 0.01f64..0.4, k in 1u32..200) {
            prop_assert!(reliable_range_ratio(eps, k + 1).unwrap() > reliable_range_ratio(eps, k).unwrap());
        }
    }
}
