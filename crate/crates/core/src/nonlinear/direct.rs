use std::sync::Arc;

use num_complex::Complex64;

use crate::spectral::{Lattice, Mode, SpectralField, ZERO_MODE};
use crate::{Error, Result};

/// `B(u, v)` by direct convolution `sum_{p+q=k} i (u(p) . kappa(q)) v(q)`
/// followed by the Leray projection, kept on every mode of `out`.
///
/// Cost is quadratic in the number of nonzero modes; intended as an oracle
/// for small lattices (K <= 4).
pub fn bilinear_b_direct(u: &SpectralField, v: &SpectralField, out: &Arc<Lattice>) -> Result<SpectralField> {
    let (lu, lv) = (u.lattice(), v.lattice());
    if !lu.same_box(lv) || !lu.same_box(out) {
        return Err(Error::LatticeMismatch("direct convolution needs one box length".into()));
    }
    let nonzero = |f: &SpectralField| -> Vec<([i32; 3], [f64; 3], Mode)> {
        f.coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != ZERO_MODE)
            .map(|(i, c)| (f.lattice().wavevector(i), f.lattice().kappa(i), *c))
            .collect()
    };
    let us = nonzero(u);
    let vs = nonzero(v);
    let mut acc = vec![ZERO_MODE; out.len()];
    let iu = Complex64::new(0.0, 1.0);
    for (p, _, cu) in &us {
        for (q, kq, cv) in &vs {
            let k = [p[0] + q[0], p[1] + q[1], p[2] + q[2]];
            let Some(idx) = out.index_of(k) else { continue };
            let s = iu * (cu[0] * kq[0] + cu[1] * kq[1] + cu[2] * kq[2]);
            let a = &mut acc[idx];
            a[0] += s * cv[0];
            a[1] += s * cv[1];
            a[2] += s * cv[2];
        }
    }
    for (i, a) in acc.iter_mut().enumerate() {
        let kap = out.kappa(i);
        let k2 = out.lambda(i);
        let dot = a[0] * kap[0] + a[1] * kap[1] + a[2] * kap[2];
        for j in 0..3 {
            a[j] -= dot * (kap[j] / k2);
        }
    }
    Ok(SpectralField::from_parts_unchecked(out.clone(), acc))
}
