use serde::Serialize;

use super::bilinear::NonlinearWorkspace;
use super::constants::ConstantEstimate;
use crate::spectral::SpectralField;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Ratio {
    /// `None` when the denominator vanishes or the inequality does not apply.
    pub value: Option<f64>,
    pub flagged: bool,
}

impl Ratio {
    fn evaluate(num: f64, den: f64, threshold: f64) -> Self {
        if den > 0.0 {
            let r = num / den;
            Ratio {
                value: Some(r),
                flagged: r > threshold,
            }
        } else {
            Ratio {
                value: None,
                flagged: false,
            }
        }
    }

    fn not_applicable() -> Self {
        Ratio {
            value: None,
            flagged: false,
        }
    }
}

/// Observed ratios for the three nonlinear inequalities, each compared with `c_m`.
#[derive(Clone, Debug, Serialize)]
pub struct InequalityReport {
    pub m: u32,
    pub constant: ConstantEstimate,
    /// `||B(u,v)||_m / (||u||_m ||v||_{m+1})`
    pub product: Ratio,
    /// `|(B(u,v), A^m u)| / (||v||_{m+1} ||u||_m^2)`
    pub transport_high: Ratio,
    /// `|(B(v,u), A^m u)| / (||v||_m ||u||_m^2)`; only for `m >= 3`.
    pub transport_commutator: Ratio,
}

impl InequalityReport {
    pub fn any_flagged(&self) -> bool {
        self.product.flagged || self.transport_high.flagged || self.transport_commutator.flagged
    }
}

/// Evaluates the three inequalities with `w = u` in the two energy-type forms.
///
/// `ws` must keep the full product band so that `||B||_m` is exact.
pub fn inequality_diagnostics(
    u: &SpectralField,
    v: &SpectralField,
    m: u32,
    c: &ConstantEstimate,
    ws: &mut NonlinearWorkspace,
) -> Result<InequalityReport> {
    if m < 2 {
        return Err(Error::InvalidArgument(format!("inequality diagnostics need m >= 2, got {m}")));
    }
    if ws.extended_k() < 2 * ws.lattice().k_max() {
        return Err(Error::InvalidArgument("diagnostics need a full-band workspace".into()));
    }
    let mf = m as f64;
    let threshold = c.c_m;
    let u_m = u.sobolev_norm(mf);
    let v_m = v.sobolev_norm(mf);
    let v_m1 = v.sobolev_norm(mf + 1.0);

    let buv = ws.bilinear(u, v)?;
    let product = Ratio::evaluate(buv.sobolev_norm(mf), u_m * v_m1, threshold);
    let transport_high = Ratio::evaluate(buv.inner_product(u, mf)?.abs(), v_m1 * u_m * u_m, threshold);
    let transport_commutator = if m >= 3 {
        let bvu = ws.bilinear(v, u)?;
        Ratio::evaluate(bvu.inner_product(u, mf)?.abs(), v_m * u_m * u_m, threshold)
    } else {
        Ratio::not_applicable()
    };
    Ok(InequalityReport {
        m,
        constant: *c,
        product,
        transport_high,
        transport_commutator,
    })
}
