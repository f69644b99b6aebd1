//! Exit-code matrix for the command-line tool.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ns_certify::io::write_snapshot;
use ns_certify::spectral::make_lattice;

use super::{shear, TWO_PI};

pub fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_ns-certify")
}

pub fn run(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(bin());
    cmd.args(args).env_remove("NS_CERTIFY_THREADS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

pub fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn scenario(init: &str, k: u32, nu: f64, c_m: f64, t_end: f64, dt: f64) -> String {
    format!(
        "[box]\nL = \"2pi\"\nK = {k}\n[fluid]\nnu = {nu:?}\n[cert]\nm = 3\nc_m = {c_m:?}\n\
         [time]\nT = {t_end:?}\ndt = {dt:?}\n[init]\n{init}\n"
    )
}

/// Scenario files used by the matrix, written under `dir`.
pub struct Fixtures {
    pub dir: PathBuf,
    pub shear: PathBuf,
    pub small_tg: PathBuf,
    pub large_tg: PathBuf,
    pub corrupt: PathBuf,
    pub m2: PathBuf,
    pub blowup: PathBuf,
    pub snapshot: PathBuf,
}

impl Fixtures {
    pub fn new(dir: &Path) -> Self {
        let lat = make_lattice(TWO_PI, 2).unwrap();
        let snapshot = dir.join("shear.nscf");
        write_snapshot(&shear(&lat, 0.5), 0.0, &snapshot).unwrap();
        let mut bad = fs::read(&snapshot).unwrap();
        bad.truncate(bad.len() - 7);
        fs::write(dir.join("corrupt.nscf"), bad).unwrap();

        let write = |name: &str, text: String| {
            let p = dir.join(name);
            fs::write(&p, text).unwrap();
            p
        };
        let snap_init = "kind = \"snapshot\"\npath = \"shear.nscf\"";
        let tg = |a: f64| format!("kind = \"taylor-green\"\namplitude = {a:?}");
        Self {
            dir: dir.to_path_buf(),
            shear: write("shear.toml", scenario(snap_init, 2, 1.0, 1.0, 1.0, 0.05)),
            small_tg: write("small.toml", scenario(&tg(0.05), 2, 1.0, 1.0, 0.5, 0.05)),
            large_tg: write("large.toml", scenario(&tg(1.0), 2, 1.0, 1.0, 0.5, 0.05)),
            corrupt: write(
                "corrupt.toml",
                scenario("kind = \"snapshot\"\npath = \"corrupt.nscf\"", 2, 1.0, 1.0, 1.0, 0.05),
            ),
            m2: write("m2.toml", scenario(&tg(0.05), 2, 1.0, 1.0, 0.5, 0.05).replace("m = 3", "m = 2")),
            blowup: write("blowup.toml", scenario(&tg(1e6), 4, 0.0, 1.0, 1.0, 0.1)),
            snapshot,
        }
    }

    pub fn out(&self, name: &str) -> String {
        self.dir.join(name).display().to_string()
    }
}

pub struct Case {
    pub name: &'static str,
    pub expected: i32,
    pub got: i32,
}

/// Runs every documented exit path once.
pub fn exit_code_matrix(dir: &Path) -> Vec<Case> {
    let fx = Fixtures::new(dir);
    let p = |x: &PathBuf| x.display().to_string();
    let (shear, small, large, corrupt, m2, blowup, snap) = (
        p(&fx.shear),
        p(&fx.small_tg),
        p(&fx.large_tg),
        p(&fx.corrupt),
        p(&fx.m2),
        p(&fx.blowup),
        p(&fx.snapshot),
    );
    let table: Vec<(&'static str, i32, Vec<String>, Vec<(&str, &str)>)> = vec![
        ("help", 0, vec!["--help".into()], vec![]),
        ("version", 0, vec!["--version".into()], vec![]),
        ("solve shear", 0, vec!["solve".into(), "--config".into(), shear.clone(), "--out".into(), fx.out("o1")], vec![]),
        ("certify shear decay", 0, vec!["certify".into(), "--config".into(), shear.clone(), "--out".into(), fx.out("o2")], vec![]),
        ("certify large data", 1, vec!["certify".into(), "--config".into(), large.clone(), "--out".into(), fx.out("o3")], vec![]),
        ("robustness small eps", 0, vec!["robustness".into(), "--config".into(), small.clone(), "--out".into(), fx.out("o4"), "--perturb".into(), "1e-6".into()], vec![]),
        ("robustness large eps", 1, vec!["robustness".into(), "--config".into(), small.clone(), "--out".into(), fx.out("o5"), "--perturb".into(), "10".into()], vec![]),
        ("verify budget 0", 2, vec!["verify".into(), "--config".into(), small.clone(), "--out".into(), fx.out("o6"), "--cutoff-schedule".into(), "2,3".into(), "--max-steps".into(), "0".into()], vec![]),
        ("verify passes", 0, vec!["verify".into(), "--config".into(), small.clone(), "--out".into(), fx.out("o7"), "--cutoff-schedule".into(), "1,2".into()], vec![("NS_CERTIFY_THREADS", "2")]),
        ("verify exhausted", 2, vec!["verify".into(), "--config".into(), large.clone(), "--out".into(), fx.out("o8"), "--cutoff-schedule".into(), "1,2".into()], vec![]),
        ("convergence", 0, vec!["convergence".into(), "--config".into(), small.clone(), "--out".into(), fx.out("o9"), "--ks".into(), "1,2".into()], vec![]),
        ("estimate-constants", 0, vec!["estimate-constants".into(), "--config".into(), small.clone(), "--out".into(), fx.out("o10"), "--samples".into(), "5".into()], vec![]),
        ("snapshot-dump", 0, vec!["snapshot-dump".into(), "--input".into(), snap, "--out".into(), fx.out("dump.csv")], vec![]),
        ("solve blow-up", 2, vec!["solve".into(), "--config".into(), blowup, "--out".into(), fx.out("o11")], vec![]),
        ("solve corrupt snapshot", 3, vec!["solve".into(), "--config".into(), corrupt, "--out".into(), fx.out("o12")], vec![]),
        ("snapshot-dump corrupt", 3, vec!["snapshot-dump".into(), "--input".into(), p(&fx.dir.join("corrupt.nscf"))], vec![]),
        ("m = 2", 3, vec!["certify".into(), "--config".into(), m2, "--out".into(), fx.out("o13")], vec![]),
        ("missing config file", 3, vec!["solve".into(), "--config".into(), p(&fx.dir.join("nope.toml")), "--out".into(), fx.out("o14")], vec![]),
        ("missing --config", 3, vec!["solve".into(), "--out".into(), fx.out("o15")], vec![]),
        ("unknown subcommand", 3, vec!["frobnicate".into()], vec![]),
        ("unknown flag", 3, vec!["certify".into(), "--config".into(), small.clone(), "--out".into(), fx.out("o16"), "--bogus".into()], vec![]),
        ("bad schedule", 3, vec!["verify".into(), "--config".into(), small.clone(), "--out".into(), fx.out("o17"), "--cutoff-schedule".into(), "3,2".into()], vec![]),
        ("bad thread count", 3, vec!["verify".into(), "--config".into(), small, "--out".into(), fx.out("o18"), "--cutoff-schedule".into(), "2".into()], vec![("NS_CERTIFY_THREADS", "zero")]),
        ("no subcommand", 3, vec![], vec![]),
    ];
    table
        .into_iter()
        .map(|(name, expected, args, env)| {
            let args: Vec<&str> = args.iter().map(String::as_str).collect();
            Case {
                name,
                expected,
                got: code(&run(&args, &env)),
            }
        })
        .collect()
}
