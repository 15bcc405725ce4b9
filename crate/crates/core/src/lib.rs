//! Finite-dimensional truncations of a polynomially bounded operator that is
//! not similar to a contraction, with matrix-free norm certification.
//!
//! * [`car`]: canonical anticommutation generators on `(C^2)^{⊗n}`;
//! * [`hardy`]: truncated Hardy spaces, shifts, the lacunary Hankel operator
//!   and the block operator `T_m`;
//! * [`calculus`]: functional calculus on `T_m`, spectral and sup norms, and
//!   the lower/upper bound experiments;
//! * [`fejer`]: Fejér kernels, the symbol identity, multiplier bounds and the
//!   discrete BMO estimate.
//!
//! All numerics are generic over [`Real`] (`f32` or `f64`); the `*F64`
//! aliases below fix the usual double-precision instantiation.

pub mod calculus;
pub mod calibration;
pub mod car;
pub mod dense;
pub mod error;
pub mod fejer;
pub mod hardy;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::{Cx, Real};

pub type CoeffGridF64 = hardy::CoeffGrid<f64>;
pub type ConjCoeffGridF64 = hardy::ConjCoeffGrid<f64>;
pub type PisierStateF64 = hardy::PisierState<f64>;
pub type HardyOperatorF64 = hardy::HardyOperator<f64>;
pub type ScalarPolyF64 = calculus::ScalarPoly<f64>;
pub type NormEstimateF64 = calculus::NormEstimate<f64>;
pub type CarCombinationF64 = car::CarCombination<f64>;
pub type TrigVectorF64 = fejer::TrigVector<f64>;
pub type FourierSeriesF64 = fejer::FourierSeries<f64>;

pub type CoeffGridF32 = hardy::CoeffGrid<f32>;
pub type ConjCoeffGridF32 = hardy::ConjCoeffGrid<f32>;
pub type PisierStateF32 = hardy::PisierState<f32>;
pub type ScalarPolyF32 = calculus::ScalarPoly<f32>;
