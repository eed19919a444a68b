//! Exact exponential sums, large-sieve harnesses, oscillatory quadrature and
//! numerical checks of stationary-phase, Airy, Bessel-transform and
//! approximate-functional-equation leading terms against brute-force oracles.
//!
//! Analytic kernels are generic over [`scalar::Real`]; the aliases below fix
//! the scalar to `f64`. Coefficient tables and sieve harnesses are `f64` only.

pub mod afe;
pub mod arith;
pub mod coeffs;
pub mod oscquad;
pub mod scalar;
pub mod sieve;
pub mod spectral;
pub mod special;
pub mod stphase;

pub use scalar::Real;

pub type ExactSum = arith::ExactSumValue<f64>;
pub type Quadrature = oscquad::QuadratureResult<f64>;
pub type QuadSettings = oscquad::QuadConfig<f64>;
pub type QuadFailure = oscquad::QuadError<f64>;
pub type PhaseFn = oscquad::Phase<f64>;
pub type Window = oscquad::SmoothWindow<f64>;
pub type StationaryPair = stphase::PhasePair<f64>;
pub type StPhaseFailure = stphase::StPhaseError<f64>;
pub type VoronoiParams = stphase::VoronoiWeightParams<f64>;
pub type KuznetsovWeight = spectral::SpectralWeight<f64>;
pub type SpectralFailure = spectral::SpectralError<f64>;
pub type GammaParams = afe::LanglandsParams<f64>;
pub type Conductor = afe::ConductorValue<f64>;
