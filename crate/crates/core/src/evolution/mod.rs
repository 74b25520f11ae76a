//! Time integration of the cubic front equation with diagnostics and
//! analyticity-strip singularity detection.

pub mod config;
pub mod conservation;
pub mod diagnostics;
pub mod rhs;
pub mod run;
pub mod stepper;
pub mod strip;

pub use config::{DiagnosticsSpec, InitialData, InitialKind, SimulationConfig, ViscosityKind, ViscositySpec};
pub use conservation::{conservation_check, ConservationReport, ConservationSpec, Drift};
pub use diagnostics::{diagnostics, hamiltonian, max_slope, momentum, sobolev_norm, DiagnosticsRecord};
pub use rhs::{rhs_approx, rhs_approx_nonlinear, Evaluator};
pub use run::{run, run_in_memory, RunSink, RunSummary, Simulation, StopReason};
pub use stepper::{step, Stepper};
pub use strip::{estimate_strip_width, estimate_strip_width_with, singularity_location, StripEstimate, StripFitConfig};
