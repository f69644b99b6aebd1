#![allow(dead_code)]

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use ns_certify::nonlinear::ConstantEstimate;
use ns_certify::solver::{InitialSpec, ScenarioConfig};
use ns_certify::spectral::{leray_project, make_lattice, Lattice, RawModes, SpectralField};

pub const TWO_PI: f64 = 2.0 * PI;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `2a cos(x) e_2`: amplitude `a e_2` on `+-(1,0,0)`.
pub fn shear(lattice: &Arc<Lattice>, a: f64) -> SpectralField {
    let mut raw = RawModes::zeros(lattice.clone());
    raw.set_pair([1, 0, 0], [c(0.0, 0.0), c(a, 0.0), c(0.0, 0.0)]).unwrap();
    leray_project(raw).unwrap()
}

pub fn user_constant(m: u32, c_m: f64) -> ConstantEstimate {
    ConstantEstimate::user_supplied(m, c_m).unwrap()
}

pub fn provided(field: SpectralField) -> InitialSpec {
    InitialSpec::Provided { field: Arc::new(field) }
}

pub fn shear_config(k: u32, nu: f64, a: f64, t_end: f64, dt: f64) -> ScenarioConfig {
    let lat = make_lattice(TWO_PI, k).unwrap();
    ScenarioConfig::new(TWO_PI, k, nu, 3, t_end, dt, provided(shear(&lat, a)), user_constant(3, 1.0))
}

pub fn taylor_green_config(k: u32, amplitude: f64, t_end: f64, dt: f64) -> ScenarioConfig {
    ScenarioConfig::new(
        TWO_PI,
        k,
        1.0,
        3,
        t_end,
        dt,
        InitialSpec::TaylorGreen { amplitude },
        user_constant(3, 1.0),
    )
}

pub fn max_rel_diff(a: &SpectralField, b: &SpectralField) -> f64 {
    let scale = a.max_abs().max(b.max_abs()).max(f64::MIN_POSITIVE);
    a.difference(b).unwrap().max_abs() / scale
}

pub mod riccati;
pub mod cli;
