//! Functional calculus on `T_m`, norm engines, and the experiments built on them.

pub mod experiments;
pub mod functional;
pub mod poly;
pub mod spectral;
pub mod supnorm;

pub use experiments::{
    bound_table, lacunary_test_norms, pb_probe, BoundRow, BoundTable, Family, LacunaryNorms,
    LacunaryTensorOperator, ProbeConfig, ProbeReport, ProbeTrial,
};
pub use functional::{block_poly_apply, operator_poly_apply, BlockPolyOperator, OffDiagonalOperator};
pub use poly::{LacunaryMatrixPoly, ScalarPoly};
pub use spectral::{spectral_norm, spectral_norm_from, LinearOperator, NormEstimate};
pub use supnorm::poly_sup_norm;

/// Formal derivative.
pub fn poly_derivative<T: crate::scalar::Real>(p: &ScalarPoly<T>) -> ScalarPoly<T> {
    p.derivative()
}
