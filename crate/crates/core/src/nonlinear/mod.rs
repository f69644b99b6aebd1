//! The projected convection term `B(u, v) = Pi[(u . grad) v]` and the
//! constants of its standard `V^m` bounds.

mod bilinear;
mod constants;
mod diagnostics;
mod direct;

pub use bilinear::{bilinear_b, min_grid_size, NonlinearWorkspace};
pub use constants::{estimate_cm, estimate_cm_empirical, lattice_zeta_upper, ConstantEstimate, ConstantMethod};
pub use diagnostics::{inequality_diagnostics, InequalityReport, Ratio};
pub use direct::bilinear_b_direct;
