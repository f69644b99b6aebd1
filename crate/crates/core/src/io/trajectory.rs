//! A trajectory on disk: `index.json` plus one snapshot file per time.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::snapshot::{read_snapshot, write_snapshot};
use crate::solver::{Trajectory, TrajectoryMeta};
use crate::{Error, Result};

#[derive(Serialize, Deserialize)]
struct Index {
    nu: f64,
    lambda_cut: f64,
    dt: f64,
    stride: usize,
    integrator: String,
    times: Vec<f64>,
    files: Vec<String>,
}

pub fn write_trajectory(traj: &Trajectory, dir: impl AsRef<Path>) -> Result<()> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir)?;
    let mut files = Vec::with_capacity(traj.times().len());
    for (j, (t, u)) in traj.times().iter().zip(traj.snapshots()).enumerate() {
        let name = format!("snap_{j:06}.nscf");
        write_snapshot(u, *t, dir.join(&name))?;
        files.push(name);
    }
    let meta = traj.meta();
    let index = Index {
        nu: meta.nu,
        lambda_cut: meta.lambda_cut,
        dt: meta.dt,
        stride: meta.stride,
        integrator: meta.integrator.clone(),
        times: traj.times().to_vec(),
        files,
    };
    fs::write(dir.join("index.json"), serde_json::to_string_pretty(&index)?)?;
    Ok(())
}

pub fn read_trajectory(dir: impl AsRef<Path>) -> Result<Trajectory> {
    let dir = dir.as_ref();
    let text = fs::read_to_string(dir.join("index.json"))
        .map_err(|e| Error::Snapshot(format!("{}: {e}", dir.join("index.json").display())))?;
    let index: Index = serde_json::from_str(&text)?;
    if index.times.len() != index.files.len() {
        return Err(Error::Snapshot("trajectory index lists unequal numbers of times and files".into()));
    }
    let mut snaps = Vec::with_capacity(index.files.len());
    for (name, t) in index.files.iter().zip(&index.times) {
        let (u, time) = read_snapshot(dir.join(name))?;
        if time.to_bits() != t.to_bits() {
            return Err(Error::Snapshot(format!("{name} holds t = {time}, index says {t}")));
        }
        snaps.push(u);
    }
    Trajectory::new(
        index.times,
        snaps,
        TrajectoryMeta {
            nu: index.nu,
            lambda_cut: index.lambda_cut,
            dt: index.dt,
            stride: index.stride,
            integrator: index.integrator,
        },
    )
}
