use std::sync::Arc;
use std::time::{Duration, Instant};

use serde::Serialize;

use super::certify::{certify, CertificateReport, Verdict};
use crate::solver::{integrate_from, ForcingSpec, InitialSpec, ScenarioConfig};
use crate::spectral::SpectralField;
use crate::{Error, Result};

/// One entry of a cutoff schedule; `lambda_cut = None` is the inscribed cutoff of `K`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CutoffStep {
    pub k_max: u32,
    pub lambda_cut: Option<f64>,
}

impl CutoffStep {
    pub fn inscribed(k_max: u32) -> Self {
        Self { k_max, lambda_cut: None }
    }
}

/// Limits on the refinement loop. A cutoff is only attempted if its full
/// integration fits the remaining step budget; the wall-clock limit is checked
/// before each attempt.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct Budget {
    pub max_steps: Option<u64>,
    pub wall_clock: Option<Duration>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Self::default()
    }

    pub fn steps(n: u64) -> Self {
        Self {
            max_steps: Some(n),
            wall_clock: None,
        }
    }

    pub fn wall_clock(d: Duration) -> Self {
        Self {
            max_steps: None,
            wall_clock: Some(d),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TrailEntry {
    pub k_max: u32,
    pub lambda_cut: f64,
    pub steps: u64,
    pub lhs: Option<f64>,
    pub rhs: Option<f64>,
    pub verdict: Verdict,
    /// Integration failure (blow-up guard, non-finite values).
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyOutcome {
    /// `Pass` or `Inconclusive`; the loop never reports a disproof.
    pub verdict: Verdict,
    pub report: Option<CertificateReport>,
    pub trail: Vec<TrailEntry>,
    pub steps_used: u64,
    pub budget_exhausted: bool,
}

fn resolve(base: &ScenarioConfig, schedule: &[CutoffStep]) -> Result<Vec<ScenarioConfig>> {
    if schedule.is_empty() {
        return Err(Error::InvalidArgument("cutoff schedule is empty".into()));
    }
    let cfgs: Vec<ScenarioConfig> = schedule
        .iter()
        .map(|s| base.with_resolution(s.k_max, s.lambda_cut))
        .collect();
    for c in &cfgs {
        c.validate()?;
    }
    if cfgs.windows(2).any(|w| !(w[1].lambda_cut > w[0].lambda_cut)) {
        return Err(Error::InvalidArgument("cutoff schedule must increase strictly".into()));
    }
    Ok(cfgs)
}

fn attempt(cfg: &ScenarioConfig, v0: &SpectralField, forcing: &ForcingSpec) -> Result<(TrailEntry, Option<CertificateReport>)> {
    let mut entry = TrailEntry {
        k_max: cfg.k_max,
        lambda_cut: cfg.lambda_cut,
        steps: cfg.steps() as u64,
        lhs: None,
        rhs: None,
        verdict: Verdict::Inconclusive,
        error: None,
    };
    let traj = match integrate_from(cfg, v0) {
        Ok(t) => t,
        Err(e @ (Error::BlowUp { .. } | Error::NonFinite { .. })) => {
            entry.error = Some(e.to_string());
            return Ok((entry, None));
        }
        Err(e) => return Err(e),
    };
    let report = certify(&traj, v0, forcing, cfg)?;
    entry.lhs = Some(report.lhs);
    entry.rhs = Some(report.rhs);
    entry.verdict = report.verdict;
    Ok((entry, Some(report)))
}

/// Integrates and certifies along an increasing cutoff schedule until the
/// a-posteriori test passes or the budget runs out.
pub fn verify_strong_solution(
    base: &ScenarioConfig,
    v0: &SpectralField,
    forcing: &ForcingSpec,
    schedule: &[CutoffStep],
    budget: Budget,
) -> Result<VerifyOutcome> {
    verify_strong_solution_parallel(base, v0, forcing, schedule, budget, 1)
}

/// As [`verify_strong_solution`], running up to `threads` cutoffs at a time.
/// The outcome is the same as the sequential one except for wall-clock limits,
/// which are checked per batch.
pub fn verify_strong_solution_parallel(
    base: &ScenarioConfig,
    v0: &SpectralField,
    forcing: &ForcingSpec,
    schedule: &[CutoffStep],
    budget: Budget,
    threads: usize,
) -> Result<VerifyOutcome> {
    let start = Instant::now();
    let mut cfgs = resolve(base, schedule)?;
    for c in &mut cfgs {
        c.forcing = forcing.clone();
        c.init = InitialSpec::Provided { field: Arc::new(v0.clone()) };
    }

    // cutoffs that fit the step budget, in order
    let mut planned = 0u64;
    let mut admissible = 0;
    for c in &cfgs {
        let s = c.steps() as u64;
        if budget.max_steps.is_some_and(|max| planned + s > max) {
            break;
        }
        planned += s;
        admissible += 1;
    }

    let threads = threads.max(1);
    let mut trail = Vec::new();
    let mut steps_used = 0;
    let mut idx = 0;
    while idx < admissible {
        if budget.wall_clock.is_some_and(|limit| start.elapsed() >= limit) {
            break;
        }
        let end = (idx + threads).min(admissible);
        let batch = &cfgs[idx..end];
        let results: Vec<Result<(TrailEntry, Option<CertificateReport>)>> = if batch.len() == 1 {
            vec![attempt(&batch[0], v0, forcing)]
        } else {
            std::thread::scope(|s| {
                let handles: Vec<_> = batch.iter().map(|c| s.spawn(move || attempt(c, v0, forcing))).collect();
                handles.into_iter().map(|h| h.join().expect("verify worker panicked")).collect()
            })
        };
        for r in results {
            let (entry, report) = r?;
            steps_used += entry.steps;
            let passed = entry.verdict.is_pass();
            trail.push(entry);
            if passed {
                return Ok(VerifyOutcome {
                    verdict: Verdict::Pass,
                    report,
                    trail,
                    steps_used,
                    budget_exhausted: false,
                });
            }
        }
        idx = end;
    }
    Ok(VerifyOutcome {
        verdict: Verdict::Inconclusive,
        report: None,
        trail,
        steps_used,
        budget_exhausted: idx < cfgs.len(),
    })
}
