//! Opportunistic OFDM radar sensing of debris around a lunar near-rectilinear halo orbit.
//!
//! The chain runs orbit dynamics → link budget → ICI-aware processing → detection
//! range → duty-cycle allocation → outage statistics, with a Monte Carlo check of the
//! detection model. Numeric routines are generic over [`Real`] (`f32`/`f64`); the
//! aliases below fix the common `f64` instantiations.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod allocate;
pub mod bounds;
pub mod detect;
pub mod error;
pub mod kv;
pub mod link;
pub mod mc;
pub mod num;
pub mod orbits;
pub mod processing;
pub mod roots;
pub mod stats;

pub use error::{Error, Result};
pub use num::Real;

pub type SystemParams = link::SystemParams<f64>;
pub type SystemParamsF32 = link::SystemParams<f32>;
pub type Target = link::Target<f64>;
pub type AdvantageLedger = link::AdvantageLedger<f64>;
pub type ProcessingMode = processing::ProcessingMode<f64>;
pub type CpiPlan = processing::CpiPlan<f64>;
pub type DetectionSpec = detect::DetectionSpec<f64>;
pub type DetectionOutcome = detect::DetectionOutcome<f64>;
pub type CrbResult = bounds::CrbResult<f64>;
pub type Cr3bpSystem = orbits::Cr3bpSystem<f64>;
pub type RotatingState = orbits::RotatingState<f64>;
pub type OrbitSolution = orbits::nrho::OrbitSolution;
pub type EncounterProfile = orbits::campaign::EncounterProfile;
pub type OutageCurve = stats::OutageCurve<f64>;
