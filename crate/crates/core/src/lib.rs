//! Simulation and metrology toolkit for a magnon–cavity–magnon system
//! driven to a PT-symmetric exceptional point.
//!
//! The cavity is eliminated adiabatically, leaving two magnon modes with a
//! purely dissipative coupling `Γ = g²/κ` balanced by gain `γ = Γ`. The crate
//! evolves their Gaussian moments analytically, derives the cavity photon
//! statistics, and builds frequency and field estimation bounds on top.

pub mod dynamics;
pub mod entanglement;
pub mod error;
pub mod export;
pub mod figures;
pub mod metrology;
pub mod model;
pub mod sensing;
pub mod special;
pub mod sweep;
pub mod validation;

pub use dynamics::{
    evolve_moments, photon_number, photon_number_closed_form, photon_number_slope, InitialCondition, MomentState,
    OccupationDependence,
};
pub use entanglement::{log_negativity, nu_minus, quadrature_covariance, QuadratureCovariance};
pub use error::{Error, Result};
pub use export::{Format, Table};
pub use metrology::{precision_error_propagation, qfi_gaussian, DerivativeMethod, PrecisionResult};
pub use model::{
    eigenvalues, reduce, splitting, susceptibility, EffectiveModel, Phase, PhysicalParams, TaggedParams, Units,
};
pub use sensing::{field_precision, FrequencyConvention, MagnetometerConfig, MagnetometerSpec};
pub use sweep::{sweep_precision, Grid, SweepResult, SweepSpec};
