//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Run with `cargo test -p ns-certify --test acceptance`.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::riccati::Instance;
use common::{shear, shear_config, taylor_green_config, user_constant, TWO_PI};
use ns_certify::certificate::*;
use ns_certify::io::{decode_snapshot, encode_snapshot};
use ns_certify::nonlinear::{bilinear_b, bilinear_b_direct, estimate_cm, NonlinearWorkspace};
use ns_certify::solver::*;
use ns_certify::spectral::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn rel_err(fast: &SpectralField, slow: &SpectralField) -> f64 {
    fast.difference(slow).unwrap().max_abs() / slow.max_abs().max(f64::MIN_POSITIVE)
}

fn nonlinear_oracle() -> Outcome {
    let start = Instant::now();
    let lat = make_lattice(TWO_PI, 3).unwrap();
    let mut ws = NonlinearWorkspace::full_band(lat.clone()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let u = random_solenoidal(&lat, 27, &mut rng);
        let v = random_solenoidal(&lat, 27, &mut rng);
        let fast = bilinear_b(&u, &v, &mut ws).unwrap();
        let slow = bilinear_b_direct(&u, &v, ws.out_lattice()).unwrap();
        worst = worst.max(rel_err(&fast, &slow));
    }
    let lat2 = make_lattice(TWO_PI, 2).unwrap();
    let tg = taylor_green(&lat2, 1.0);
    let mut ws2 = NonlinearWorkspace::full_band(lat2).unwrap();
    let fast = bilinear_b(&tg, &tg, &mut ws2).unwrap();
    let slow = bilinear_b_direct(&tg, &tg, ws2.out_lattice()).unwrap();
    worst = worst.max(rel_err(&fast, &slow));
    let elapsed = start.elapsed();
    check(
        worst <= 1e-12 && elapsed < Duration::from_secs(60),
        format!("max relative error {worst:.2e} (<= 1e-12), {:.1} s (< 60 s)", elapsed.as_secs_f64()),
    )
}

fn structural_invariants() -> Outcome {
    let cfg = taylor_green_config(4, 1.0, 1.0, 1e-3);
    let traj = integrate(&cfg).map_err(|e| e.to_string())?;
    let steps = traj.intervals();
    let div = traj.snapshots().iter().map(|u| u.divergence_residual()).fold(0.0, f64::max);
    let real = traj.snapshots().iter().all(|u| u.is_exactly_real());
    let eb = energy_balance(&traj, &cfg).map_err(|e| e.to_string())?;
    check(
        steps == 1000 && div <= 1e-12 && real && eb.residual.abs() <= 1e-6,
        format!(
            "{steps} steps, divergence {div:.2e} (<= 1e-12), bitwise real {real}, energy residual {:.2e} (<= 1e-6)",
            eb.residual.abs()
        ),
    )
}

fn riccati_soundness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut worst_excess: f64 = f64::NEG_INFINITY;
    let mut worst_closed: f64 = 0.0;
    for i in 0..200 {
        let product = rng.gen_range(0.01..0.95);
        let zero_delta = i % 4 == 0;
        let inst = Instance::random(&mut rng, product, zero_delta);
        let input = RiccatiInput::new(inst.y0, inst.delta_integral(), inst.alpha, inst.t_end).unwrap();
        for (t, y) in inst.rk4(4000) {
            let Some(b) = riccati_bound(&input, t) else {
                return Err(format!("instance {i}: bound undefined at t = {t}"));
            };
            if b > 0.0 {
                worst_excess = worst_excess.max(y / b - 1.0);
            }
            if zero_delta {
                let closed = inst.y0 / (1.0 - inst.alpha * inst.y0 * t);
                worst_closed = worst_closed.max((b - closed).abs() / closed);
                worst_closed = worst_closed.max((y - closed).abs() / closed);
            }
        }
    }
    check(
        worst_excess <= 1e-8 && worst_closed <= 1e-10,
        format!(
            "200 instances, max y/bound - 1 = {worst_excess:.2e} (<= 1e-8), delta = 0 closed-form error {worst_closed:.2e} (<= 1e-10)"
        ),
    )
}

fn closed_form_reproduction() -> Outcome {
    let a = 0.5;
    let cfg = shear_config(2, 1.0, a, 1.0, 0.01);
    let traj = integrate(&cfg).map_err(|e| e.to_string())?;
    let exact = shear(traj.lattice(), a * (-1.0f64).exp());
    let err = traj.last().difference(&exact).unwrap().max_abs() / a;
    let r = residual_norms(&traj, &ForcingSpec::Zero, &cfg, &cfg.quad).map_err(|e| e.to_string())?;
    let rmax = r.iter().map(|x| x.2).fold(0.0, f64::max);
    check(
        err <= 1e-12 && rmax <= 1e-10,
        format!("heat decay error {err:.2e} (<= 1e-12), max residual {rmax:.2e} (<= 1e-10)"),
    )
}

fn certificate_lemma_identity() -> Outcome {
    let mut count = 0;
    let mut passes = 0;
    let lattice_sum = estimate_cm(3, TWO_PI).unwrap();
    let scenarios: Vec<ScenarioConfig> = {
        let mut v = Vec::new();
        for (amp, c) in [(0.05, 1.0), (0.5, 1.0), (1.0, 1.0), (0.05, 30.0)] {
            let mut cfg = taylor_green_config(3, amp, 0.5, 0.05);
            cfg.constant = user_constant(3, c);
            v.push(cfg);
        }
        let mut ls = taylor_green_config(2, 0.05, 0.5, 0.05);
        ls.constant = lattice_sum;
        v.push(ls);
        let mut inviscid = taylor_green_config(2, 0.1, 0.3, 0.05);
        inviscid.nu = 0.0;
        v.push(inviscid);
        let mut linear = taylor_green_config(2, 0.05, 0.5, 0.05);
        linear.quad.interpolant = InterpolantKind::Linear;
        v.push(linear);
        v.push(shear_config(2, 1.0, 0.5, 1.0, 0.05));
        v
    };
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for cfg in &scenarios {
        let traj = integrate(cfg).map_err(|e| e.to_string())?;
        let alpha = exponent_alpha(&traj, cfg.m, &cfg.constant, &cfg.quad).map_err(|e| e.to_string())?.alpha;
        for j in 0..4 {
            let mut v0 = traj.initial().clone();
            if j > 0 {
                let e = random_solenoidal(traj.lattice(), 2, &mut rng);
                v0.axpy(10f64.powi(-(j as i32)) / e.sobolev_norm(3.0), &e).unwrap();
            }
            let rep = certify(&traj, &v0, &ForcingSpec::Zero, cfg).map_err(|e| e.to_string())?;
            let input = RiccatiInput::new(rep.lhs, 0.0, alpha, rep.t_end).unwrap();
            if rep.alpha.to_bits() != alpha.to_bits() || rep.verdict.is_pass() != riccati_feasible(&input) {
                return Err(format!("report {count} disagrees with the lemma"));
            }
            count += 1;
            passes += rep.verdict.is_pass() as usize;
        }
    }
    check(
        passes > 0 && passes < count,
        format!("{count} reports ({passes} pass, {} fail), verdict == riccati_feasible on all", count - passes),
    )
}

fn refinement_behavior() -> Outcome {
    let start = Instant::now();
    let base = ScenarioConfig::new(
        TWO_PI,
        2,
        1.0,
        3,
        1.0,
        0.01,
        InitialSpec::TaylorGreen { amplitude: 0.05 },
        user_constant(3, 1.0),
    );
    let v0 = initial_natural(&base.init, TWO_PI).unwrap();
    let ks = [2u32, 4, 6, 8];
    let mut lhs = Vec::new();
    for &k in &ks {
        let cfg = base.with_resolution(k, None);
        let traj = integrate(&cfg).map_err(|e| e.to_string())?;
        lhs.push(certify(&traj, &v0, &ForcingSpec::Zero, &cfg).map_err(|e| e.to_string())?.lhs);
    }
    let monotone = lhs.windows(2).all(|w| w[1] <= 1.1 * w[0]);
    let schedule: Vec<CutoffStep> = ks.iter().map(|&k| CutoffStep::inscribed(k)).collect();
    let out = verify_strong_solution(&base, &v0, &ForcingSpec::Zero, &schedule, Budget::unlimited())
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let lhs_text: Vec<String> = lhs.iter().map(|x| format!("{x:.2e}")).collect();
    check(
        monotone && out.verdict == Verdict::Pass && elapsed < Duration::from_secs(600),
        format!(
            "lhs along K = 2,4,6,8: [{}] (monotone within 1.1: {monotone}), verify {} after {} cutoff(s), {:.1} s (< 600 s)",
            lhs_text.join(", "),
            out.verdict.as_str(),
            out.trail.len(),
            elapsed.as_secs_f64()
        ),
    )
}

fn robustness_check() -> Outcome {
    let start = Instant::now();
    let cfg = ScenarioConfig::new(
        TWO_PI,
        4,
        1.0,
        3,
        0.5,
        0.01,
        InitialSpec::TaylorGreen { amplitude: 0.05 },
        estimate_cm(3, TWO_PI).unwrap(),
    );
    cfg.validate().map_err(|e| e.to_string())?;
    let u = integrate(&cfg).map_err(|e| e.to_string())?;
    let threshold = robustness_report(&u, u.initial(), &ForcingSpec::Zero, &cfg)
        .map_err(|e| e.to_string())?
        .threshold;
    let eps = 0.5 * threshold;
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let e = random_solenoidal(u.lattice(), 2, &mut rng);
    let mut v0 = u.initial().clone();
    v0.axpy(eps / e.sobolev_norm(3.0), &e).unwrap();
    let rep = robustness_report(&u, &v0, &ForcingSpec::Zero, &cfg).map_err(|e| e.to_string())?;
    if rep.verdict != Verdict::Pass {
        return Err(format!("robustness condition failed at eps = {eps:.2e}"));
    }
    let v = integrate_from(&cfg, &v0).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    for (j, b) in rep.curve.bound.iter().enumerate() {
        let Some(b) = b else {
            return Err(format!("bound undefined at t = {}", rep.curve.times[j]));
        };
        let d = u.snapshots()[j].difference(&v.snapshots()[j]).unwrap().sobolev_norm(3.0);
        worst = worst.max(d / b);
    }
    let elapsed = start.elapsed();
    check(
        worst <= 1.0 + 1e-6 && elapsed < Duration::from_secs(120),
        format!(
            "eps = {eps:.2e} (threshold/2), max ||u - v||_3 / bound = {worst:.6} (<= 1 + 1e-6) over {} nodes, {:.1} s (< 120 s)",
            rep.curve.times.len(),
            elapsed.as_secs_f64()
        ),
    )
}

fn temporal_order() -> Outcome {
    let mut finals = Vec::new();
    for dt in [0.05, 0.025, 0.0125] {
        finals.push(integrate(&taylor_green_config(4, 1.0, 0.5, dt)).map_err(|e| e.to_string())?.last().clone());
    }
    let e1 = finals[0].difference(&finals[1]).unwrap().sobolev_norm(0.0);
    let e2 = finals[1].difference(&finals[2]).unwrap().sobolev_norm(0.0);
    let order = (e1 / e2).log2();
    check(order >= 3.8, format!("observed order {order:.3} (>= 3.8)"))
}

fn io_contract() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for k in 1..=4u32 {
        let lat = make_lattice(TWO_PI, k).unwrap();
        let u = random_solenoidal(&lat, 3 * k * k, &mut rng);
        let (back, t) = decode_snapshot(&encode_snapshot(&u, 0.375)).map_err(|e| e.to_string())?;
        let same = t == 0.375
            && back
                .coeffs()
                .iter()
                .flatten()
                .zip(u.coeffs().iter().flatten())
                .all(|(a, b)| a.re.to_bits() == b.re.to_bits() && a.im.to_bits() == b.im.to_bits());
        if !same {
            return Err(format!("snapshot round trip not bitwise at K = {k}"));
        }
    }
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cases = common::cli::exit_code_matrix(dir.path());
    let wrong: Vec<String> = cases
        .iter()
        .filter(|c| c.got != c.expected)
        .map(|c| format!("{} expected {} got {}", c.name, c.expected, c.got))
        .collect();
    check(
        wrong.is_empty(),
        if wrong.is_empty() {
            format!("bitwise snapshot round trip K = 1..4, {} CLI exit-code cases match", cases.len())
        } else {
            wrong.join("; ")
        },
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("nonlinear oracle equivalence", nonlinear_oracle),
        ("structural invariants", structural_invariants),
        ("Riccati soundness", riccati_soundness),
        ("closed-form reproduction", closed_form_reproduction),
        ("certificate/lemma identity", certificate_lemma_identity),
        ("refinement behavior", refinement_behavior),
        ("robustness bound", robustness_check),
        ("temporal convergence", temporal_order),
        ("IO contract", io_contract),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(d) => println!("[PASS] {}: {name}: {d} [{secs:.1} s]", i + 1),
            Err(d) => {
                failed += 1;
                println!("[FAIL] {}: {name}: {d} [{secs:.1} s]", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
