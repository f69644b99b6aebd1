//! The Riccati comparison lemma, the robustness condition, the a-posteriori
//! test on computed trajectories and the refinement loop built on it.

mod certify;
mod quadrature;
mod regularity;
mod riccati;
mod robustness;
mod sampling;
mod verify;

pub use certify::{certify, Caveat, CertificateReport, Verdict};
pub use quadrature::{gauss_legendre, refinement_error, CompositeRule, QuadratureInfo};
pub use regularity::{regularity_diagnostic, RegularityReport, REGULARITY_FLAG_TOL};
pub use riccati::{riccati_bound, riccati_feasible, RiccatiInput};
pub use robustness::{robustness_bound, robustness_report, BoundCurve, RobustnessReport};
pub use sampling::{
    exponent_alpha, galerkin_residual_norms, norm_series, residual_norms, weighted_sum, AlphaEstimate, NodeSample, NodeSamples,
};
pub use verify::{verify_strong_solution, verify_strong_solution_parallel, Budget, CutoffStep, TrailEntry, VerifyOutcome};
