//! Time integration of the Galerkin system, initial data and forcing.

mod config;
mod convergence;
mod energy;
mod forcing;
mod initial;
mod integrate;
mod trajectory;

pub use config::{InitialSpec, InterpolantKind, QuadratureSpec, ScenarioConfig};
pub use convergence::{convergence_study, ConvergencePoint, ConvergenceStudy};
pub use energy::{energy_balance, EnergyBalance};
pub use forcing::{BoundForcing, ForcingMode, ForcingSpec};
pub use initial::{initial_natural, make_initial, taylor_green};
pub use integrate::{galerkin_rhs, integrate, integrate_from, BLOWUP_GUARD, INTEGRATOR_TAG};
pub use trajectory::{interpolant, Segment, SegmentSample, Trajectory, TrajectoryMeta};
