//! Exact simulation of classical light in the path ⊗ polarization space of a
//! Mach-Zehnder bench, with correlation, CHSH-type and Kochen-Specker checks.
//!
//! Every numeric module is generic over [`Real`] (`f32` or `f64`). The
//! `*64` aliases below fix the scalar to `f64`, which is what the CLI and the
//! acceptance suite use.
//!
//! State vectors use the path-major basis `a⊗V, a⊗H, b⊗V, b⊗H`.

pub mod bench;
pub mod chsh;
pub mod elements;
pub mod export;
pub mod kochen_specker;
pub mod linalg;
pub mod measurement;
pub mod scalar;
pub mod search;
pub mod states;

pub use scalar::Real;

pub type CVec64 = linalg::CVec<f64>;
pub type CMat64 = linalg::CMat<f64>;
pub type BeamState64 = states::BeamState<f64>;
pub type ProductStateParams64 = states::ProductStateParams<f64>;
pub type OpticalOperator64 = elements::OpticalOperator<f64>;
pub type AnalyzerAngles64 = measurement::AnalyzerAngles<f64>;
pub type IntensityQuad64 = measurement::IntensityQuad<f64>;
pub type AngleSet64 = chsh::AngleSet<f64>;
pub type ChshResult64 = chsh::ChshResult<f64>;
pub type BoundSampleReport64 = chsh::BoundSampleReport<f64>;
pub type KsReport64 = kochen_specker::KsReport<f64>;
pub type CompiledBench64 = bench::CompiledBench<f64>;

pub type CVec32 = linalg::CVec<f32>;
pub type CMat32 = linalg::CMat<f32>;
pub type BeamState32 = states::BeamState<f32>;
