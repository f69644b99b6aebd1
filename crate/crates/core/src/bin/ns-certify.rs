//! Command-line front end.
//!
//! Exit codes: 0 pass/success, 1 condition not met, 2 inconclusive (including
//! solver aborts), 3 usage, configuration or I/O errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Duration;

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use ns_certify::certificate::{
    certify, norm_series, regularity_diagnostic, robustness_report, verify_strong_solution_parallel, Budget, Caveat,
    CutoffStep, RegularityReport, RobustnessReport, Verdict,
};
use ns_certify::io::{
    parse_config, read_snapshot, read_trajectory, snapshot_to_csv, write_norm_table_file, write_trajectory, RunReport,
};
use ns_certify::nonlinear::{
    estimate_cm, estimate_cm_empirical, inequality_diagnostics, ConstantEstimate, NonlinearWorkspace,
};
use ns_certify::solver::{
    convergence_study, energy_balance, initial_natural, integrate, integrate_from, EnergyBalance, InitialSpec,
    ScenarioConfig, Trajectory,
};
use ns_certify::spectral::{random_solenoidal, SpectralField};
use ns_certify::{Error, Result};

const EXIT_PASS: u8 = 0;
const EXIT_FAIL: u8 = 1;
const EXIT_INCONCLUSIVE: u8 = 2;
const EXIT_USAGE: u8 = 3;

#[derive(Parser)]
#[command(name = "ns-certify", version, about = "Galerkin Navier-Stokes solver with a-posteriori certificates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Common {
    /// Scenario file (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Output directory, created if missing.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate the Galerkin system and store the trajectory.
    Solve {
        #[command(flatten)]
        common: Common,
    },
    /// Run the a-posteriori test on a trajectory.
    Certify {
        #[command(flatten)]
        common: Common,
        /// Previously stored trajectory; integrates from the config if absent.
        #[arg(long)]
        trajectory: Option<PathBuf>,
    },
    /// Test whether perturbed initial data stays regular, and compare with a perturbed run.
    Robustness {
        #[command(flatten)]
        common: Common,
        /// V^m size of the initial perturbation.
        #[arg(long)]
        perturb: f64,
        /// Seed of the random perturbation direction.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Compare runs at several K against a run at twice the largest K.
    Convergence {
        #[command(flatten)]
        common: Common,
        /// Comma-separated K values.
        #[arg(long, value_delimiter = ',', required = true)]
        ks: Vec<u32>,
    },
    /// Refine the Galerkin cutoff until the a-posteriori test passes.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Comma-separated entries `K` or `K:lambda_cut`.
        #[arg(long, value_delimiter = ',', required = true)]
        cutoff_schedule: Vec<String>,
        /// Total time steps allowed across all attempts.
        #[arg(long)]
        max_steps: Option<u64>,
        /// Wall-clock limit in seconds, checked before each attempt.
        #[arg(long)]
        max_seconds: Option<f64>,
    },
    /// Bound and sample the constant of the nonlinear inequalities.
    EstimateConstants {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Convert a snapshot file to CSV.
    SnapshotDump {
        #[arg(long)]
        input: PathBuf,
        /// CSV file; standard output if absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e @ (Error::BlowUp { .. } | Error::NonFinite { .. })) => {
            eprintln!("ns-certify: solver aborted: {e}");
            ExitCode::from(EXIT_INCONCLUSIVE)
        }
        Err(e) => {
            eprintln!("ns-certify: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn threads() -> Result<usize> {
    match std::env::var("NS_CERTIFY_THREADS") {
        Err(_) => Ok(1),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(n),
            _ => Err(Error::Config(format!("NS_CERTIFY_THREADS must be a positive integer, got '{s}'"))),
        },
    }
}

fn load(common: &Common) -> Result<ScenarioConfig> {
    let cfg = parse_config(&common.config)?;
    fs::create_dir_all(&common.out)?;
    Ok(cfg)
}

fn verdict_code(v: Verdict) -> u8 {
    match v {
        Verdict::Pass => EXIT_PASS,
        Verdict::FailCondition => EXIT_FAIL,
        Verdict::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

fn initial_data(cfg: &ScenarioConfig) -> Result<SpectralField> {
    initial_natural(&cfg.init, cfg.box_len)
}

fn base_caveats(cfg: &ScenarioConfig) -> Vec<Caveat> {
    let mut c = vec![Caveat::FloatingPointQuadrature];
    if cfg.nu == 0.0 {
        c.push(Caveat::InviscidMode);
    }
    if cfg.stride > 1 {
        c.push(Caveat::SubsampledSnapshots);
    }
    c.sort();
    c
}

#[derive(Serialize)]
struct SolveResult {
    steps: usize,
    snapshots: usize,
    final_norm_m: f64,
    energy: EnergyBalance,
    regularity: Vec<RegularityReport>,
}

fn solve(common: &Common) -> Result<u8> {
    let cfg = load(common)?;
    let traj = integrate(&cfg)?;
    write_trajectory(&traj, common.out.join("trajectory"))?;
    let series = norm_series(&traj, &cfg.forcing, &cfg)?;
    write_norm_table_file(&series, common.out.join("norms.csv"))?;
    let mut regularity = Vec::new();
    if cfg.nu > 0.0 {
        for k in 2..=cfg.m {
            let c = estimate_cm(k, cfg.box_len)?;
            regularity.push(regularity_diagnostic(&traj, &cfg.forcing, k, &cfg, &c)?);
        }
    }
    let result = SolveResult {
        steps: cfg.steps(),
        snapshots: traj.times().len(),
        final_norm_m: traj.last().sobolev_norm(cfg.m as f64),
        energy: energy_balance(&traj, &cfg)?,
        regularity,
    };
    RunReport::new("solve", &cfg, base_caveats(&cfg), result).write(common.out.join("report.json"))?;
    println!("solve: {} steps, trajectory in {}", cfg.steps(), common.out.join("trajectory").display());
    Ok(EXIT_PASS)
}

fn certify_cmd(common: &Common, trajectory: Option<&Path>) -> Result<u8> {
    let cfg = load(common)?;
    let traj = match trajectory {
        Some(dir) => read_trajectory(dir)?,
        None => integrate(&cfg)?,
    };
    let v0 = initial_data(&cfg)?;
    let report = certify(&traj, &v0, &cfg.forcing, &cfg)?;
    write_norm_table_file(&report.samples, common.out.join("norms.csv"))?;
    println!(
        "certify: lhs = {:e}, rhs = {:e}, margin = {:e}, verdict = {}",
        report.lhs, report.rhs, report.margin, report.verdict
    );
    let code = verdict_code(report.verdict);
    let caveats = report.caveats.clone();
    RunReport::new("certify", &cfg, caveats, report).write(common.out.join("report.json"))?;
    Ok(code)
}

#[derive(Serialize)]
struct RobustnessResult {
    perturbation: f64,
    seed: u64,
    bound: RobustnessReport,
    /// `max_t ||u(t) - v(t)||_m / bound(t)` over nodes where the bound is defined.
    max_bound_ratio: Option<f64>,
    bound_respected: Option<bool>,
}

fn unit_direction(traj: &Trajectory, cfg: &ScenarioConfig, seed: u64) -> Result<SpectralField> {
    let lat = traj.lattice();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shell = ((cfg.lambda_cut / lat.eigenvalue_scale()).floor() as u32).clamp(1, 2);
    let e = random_solenoidal(lat, shell, &mut rng).project_low(cfg.cutoff());
    let n = e.sobolev_norm(cfg.m as f64);
    if !(n > 0.0) {
        return Err(Error::Config("no Galerkin modes available for a perturbation".into()));
    }
    Ok(e.scaled(1.0 / n))
}

fn robustness_cmd(common: &Common, eps: f64, seed: u64) -> Result<u8> {
    if !(eps >= 0.0) || !eps.is_finite() {
        return Err(Error::Config(format!("--perturb must be finite and non-negative, got {eps}")));
    }
    let cfg = load(common)?;
    let traj = integrate(&cfg)?;
    let e = unit_direction(&traj, &cfg, seed)?;
    let v0 = &traj.initial().clone() + &e.scaled(eps);
    let report = robustness_report(&traj, &v0, &cfg.forcing, &cfg)?;

    let mut perturbed = cfg.clone();
    perturbed.init = InitialSpec::Provided { field: Arc::new(v0.clone()) };
    let (max_bound_ratio, bound_respected) = match integrate_from(&perturbed, &v0) {
        Ok(vtraj) => {
            let m = cfg.m as f64;
            let mut worst: Option<f64> = None;
            for ((u, v), b) in traj.snapshots().iter().zip(vtraj.snapshots()).zip(&report.curve.bound) {
                if let Some(b) = b {
                    let d = u.difference(v)?.sobolev_norm(m);
                    let r = if *b > 0.0 { d / b } else if d == 0.0 { 0.0 } else { f64::INFINITY };
                    worst = Some(worst.map_or(r, |w: f64| w.max(r)));
                }
            }
            (worst, worst.map(|w| w <= 1.0 + 1e-6))
        }
        Err(Error::BlowUp { .. } | Error::NonFinite { .. }) => (None, None),
        Err(e) => return Err(e),
    };
    let code = verdict_code(report.verdict);
    println!(
        "robustness: eta = {:e}, threshold = {:e}, verdict = {}",
        report.eta, report.threshold, report.verdict
    );
    let caveats = report.caveats.clone();
    let result = RobustnessResult {
        perturbation: eps,
        seed,
        bound: report,
        max_bound_ratio,
        bound_respected,
    };
    RunReport::new("robustness", &cfg, caveats, result).write(common.out.join("report.json"))?;
    Ok(code)
}

fn convergence_cmd(common: &Common, ks: &[u32]) -> Result<u8> {
    let cfg = load(common)?;
    let study = convergence_study(&cfg, ks)?;
    let mut w = csv::Writer::from_path(common.out.join("convergence.csv"))?;
    w.write_record(["K", "lambda_cut", "sup_error_m"])?;
    for p in &study.points {
        w.write_record([p.k_max.to_string(), format!("{:e}", p.lambda_cut), format!("{:e}", p.sup_error)])?;
    }
    w.flush()?;
    for p in &study.points {
        println!("convergence: K = {}, sup error = {:e}", p.k_max, p.sup_error);
    }
    let code = if study.monotone { EXIT_PASS } else { EXIT_FAIL };
    RunReport::new("convergence", &cfg, base_caveats(&cfg), study).write(common.out.join("report.json"))?;
    Ok(code)
}

fn parse_schedule(entries: &[String]) -> Result<Vec<CutoffStep>> {
    entries
        .iter()
        .map(|s| {
            let bad = || Error::Config(format!("bad cutoff schedule entry '{s}' (expected K or K:lambda_cut)"));
            let (k, lc) = match s.split_once(':') {
                Some((k, l)) => (k, Some(l.trim().parse::<f64>().map_err(|_| bad())?)),
                None => (s.as_str(), None),
            };
            let k_max = k.trim().parse::<u32>().map_err(|_| bad())?;
            Ok(CutoffStep { k_max, lambda_cut: lc })
        })
        .collect()
}

fn verify_cmd(common: &Common, schedule: &[String], max_steps: Option<u64>, max_seconds: Option<f64>) -> Result<u8> {
    let cfg = load(common)?;
    let schedule = parse_schedule(schedule)?;
    let wall_clock = match max_seconds {
        Some(s) if s >= 0.0 && s.is_finite() => Some(Duration::from_secs_f64(s)),
        Some(s) => return Err(Error::Config(format!("--max-seconds must be non-negative, got {s}"))),
        None => None,
    };
    let v0 = initial_data(&cfg)?;
    let budget = Budget { max_steps, wall_clock };
    let outcome = verify_strong_solution_parallel(&cfg, &v0, &cfg.forcing, &schedule, budget, threads()?)?;
    for t in &outcome.trail {
        println!(
            "verify: K = {}, lambda_cut = {}, lhs = {}, rhs = {}, {}",
            t.k_max,
            t.lambda_cut,
            t.lhs.map_or("-".into(), |x| format!("{x:e}")),
            t.rhs.map_or("-".into(), |x| format!("{x:e}")),
            t.verdict
        );
    }
    println!("verify: {}", outcome.verdict);
    if let Some(r) = &outcome.report {
        write_norm_table_file(&r.samples, common.out.join("norms.csv"))?;
    }
    let code = verdict_code(outcome.verdict);
    let caveats = outcome.report.as_ref().map_or_else(|| base_caveats(&cfg), |r| r.caveats.clone());
    RunReport::new("verify", &cfg, caveats, outcome).write(common.out.join("report.json"))?;
    Ok(code)
}

#[derive(Serialize)]
struct ConstantsResult {
    lattice_sum: ConstantEstimate,
    empirical: ConstantEstimate,
    samples: usize,
    seed: u64,
    /// Random pairs on which some ratio exceeded the lattice-sum value.
    flagged_pairs: usize,
    max_ratio: f64,
}

fn estimate_cmd(common: &Common, samples: usize, seed: u64) -> Result<u8> {
    let cfg = load(common)?;
    let lat = cfg.lattice()?;
    let bound = estimate_cm(cfg.m, cfg.box_len)?;
    let empirical = estimate_cm_empirical(cfg.m, &lat, samples, seed)?;
    let mut ws = NonlinearWorkspace::full_band(lat.clone())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let shell = 3 * lat.k_max() * lat.k_max();
    let (mut flagged, mut max_ratio) = (0, 0.0_f64);
    for _ in 0..samples {
        let u = random_solenoidal(&lat, shell, &mut rng);
        let v = random_solenoidal(&lat, shell, &mut rng);
        let r = inequality_diagnostics(&u, &v, cfg.m, &bound, &mut ws)?;
        for x in [r.product, r.transport_high, r.transport_commutator].iter().filter_map(|x| x.value) {
            max_ratio = max_ratio.max(x);
        }
        if r.any_flagged() {
            flagged += 1;
        }
    }
    println!(
        "estimate-constants: m = {}, lattice-sum bound = {:e}, empirical max = {:e}",
        cfg.m, bound.c_m, empirical.c_m
    );
    let result = ConstantsResult {
        lattice_sum: bound,
        empirical,
        samples,
        seed,
        flagged_pairs: flagged,
        max_ratio,
    };
    RunReport::new("estimate-constants", &cfg, base_caveats(&cfg), result).write(common.out.join("report.json"))?;
    Ok(EXIT_PASS)
}

fn dump_cmd(input: &Path, out: Option<&Path>) -> Result<u8> {
    let (field, _) = read_snapshot(input)?;
    match out {
        Some(p) => snapshot_to_csv(&field, fs::File::create(p)?)?,
        None => snapshot_to_csv(&field, std::io::stdout().lock())?,
    }
    Ok(EXIT_PASS)
}

fn run(command: Command) -> Result<u8> {
    match command {
        Command::Solve { common } => solve(&common),
        Command::Certify { common, trajectory } => certify_cmd(&common, trajectory.as_deref()),
        Command::Robustness { common, perturb, seed } => robustness_cmd(&common, perturb, seed),
        Command::Convergence { common, ks } => convergence_cmd(&common, &ks),
        Command::Verify {
            common,
            cutoff_schedule,
            max_steps,
            max_seconds,
        } => verify_cmd(&common, &cutoff_schedule, max_steps, max_seconds),
        Command::EstimateConstants { common, samples, seed } => estimate_cmd(&common, samples, seed),
        Command::SnapshotDump { input, out } => dump_cmd(&input, out.as_deref()),
    }
}
