//! Time evolution of the reduced two-mode model.

pub mod closed_form;
pub mod moments;
pub mod noise;
pub mod ode;
pub mod oracle;
pub mod propagator;

pub use closed_form::{
    occupation_weight, photon_number_closed_form, photon_number_slope, vacuum_photon_number, OccupationDependence,
};
pub use moments::{bose_occupation, evolve_from, evolve_moments, photon_number, InitialCondition, MomentState};
pub use noise::NoiseCorrelators;
pub use ode::{Stats, StepControl};
pub use oracle::{oracle_integrate_effective, oracle_integrate_effective_from, oracle_integrate_full, FullMomentState};
pub use propagator::{propagator, Propagator};
