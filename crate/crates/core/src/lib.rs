//! Spectral geometry of planar annuli: Dirichlet spectra from Bessel
//! cross products, capacity energy and deficit, finite-difference spectra
//! of conformally perturbed flat cylinders, and checks of the eigenvalue
//! and energy evolution laws under curve shortening flow.

// `!(x > 0.0)` is the NaN-rejecting form used for argument checks.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod annulus;
pub mod cylinder;
pub mod flow;
pub mod linalg;
pub mod quadrature;
pub mod reference;
pub mod special;

pub use annulus::{AnnulusError, AnnulusGeometry, AnnulusSpectrum, BesselEigenmode, Boundary, CapacityProfile};
pub use cylinder::{ConformalPerturbation, CylinderError, CylinderGrid, DeficitRule, FdEigenResult, SineCosineProfile};
pub use flow::{
    CsfSnapshot, CsfTrajectory, DeficitRegime, FdScheme, FlowError, Identity, IdentityResidualReport, SpectralReport,
};
pub use linalg::{DiagonalWeightMatrix, EigenOptions, EigenPair, InnerSolver, LinalgError, SymmetricSparseMatrix};
pub use special::{BesselOrder, SpecialError};

/// Version string written into every generated artifact.
pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");
