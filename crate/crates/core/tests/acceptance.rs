//! Acceptance run: one line per criterion, nonzero exit when any fails.

mod common;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use reinhardt_core::coeureloeb::{run_counterexample, scaled_resolution, solve_gh, CLParams, ScanGrid, DEFAULT_R_LIST};
use reinhardt_core::convexlog::{Cone2, PhiSpec, PsiSpec, Sign};
use reinhardt_core::intmat::{eigensystem, Direction2, EigenDirections, Mat2Z, QuadraticSurd};
use reinhardt_core::models;
use reinhardt_core::rat::{q, qf, to_f64, Q};
use reinhardt_core::serreclass::{classify_serre, find_hyperbolic_matrix, random_equivalence, Certificate, DEFAULT_ENTRY_BOUND};
use reinhardt_core::stehle::{check_psh, run_suite, u_tilde_invariance, ExhaustionFn, SuiteConfig};
use rand::Rng;
use std::time::{Duration, Instant};

struct Outcome {
    pass: bool,
    detail: String,
}

fn run(id: &str, title: &str, budget: Option<Duration>, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let out = f();
    let took = start.elapsed();
    let in_time = budget.map_or(true, |b| took <= b);
    let pass = out.pass && in_time;
    let timing = match budget {
        Some(b) => format!("{:.2}s of {:.0}s", took.as_secs_f64(), b.as_secs_f64()),
        None => format!("{:.2}s", took.as_secs_f64()),
    };
    println!("[{}] {id} {title}: {} ({timing})", if pass { "PASS" } else { "FAIL" }, out.detail);
    pass
}

fn ac1() -> Outcome {
    let expected = [
        ("coeure_loeb", false),
        ("model4", true),
        ("model5", true),
        ("model6", true),
        ("parabolic_k1", true),
        ("parabolic_k2", true),
        ("parabolic_k3", true),
        ("bounded_origin", true),
    ];
    let mut wrong = Vec::new();
    for (name, member) in expected {
        let v = classify_serre(&models::get(name).unwrap()).unwrap();
        if v.member != member {
            wrong.push(name);
        }
    }
    Outcome { pass: wrong.is_empty(), detail: format!("{}/8 verdicts reproduced {wrong:?}", 8 - wrong.len()) }
}

fn ac2() -> Outcome {
    let (checked, bad) = common::spectral_sweep(10);
    Outcome {
        pass: bad.is_empty(),
        detail: format!("{}/{checked} unimodular matrices agree with the brute-force oracle", checked - bad.len()),
    }
}

fn ac3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut bad = 0;
    for i in 0..50 {
        bad += if i % 2 == 0 { common::hyperbolic_case(&mut rng, 60) } else { common::parabolic_case(&mut rng, 60) };
    }
    Outcome { pass: bad == 0, detail: format!("50 cases (25 hyperbolic, 25 parabolic), k <= 60, {bad} nonzero residuals") }
}

fn ac4() -> Outcome {
    let lambda = QuadraticSurd::new(qf(3, 2), qf(1, 2), &5.into()).unwrap();
    let lf = lambda.to_f64();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut exact_failures = 0;
    let mut table_worst: f64 = 0.0;
    let rq = |rng: &mut ChaCha8Rng, lo: i64, hi: i64| qf(rng.gen_range(lo * 89..=hi * 89), 89);

    for phi in [PhiSpec::Zero, PhiSpec::AOverT { a: qf(7, 4) }] {
        for _ in 0..1000 {
            let t = QuadraticSurd::rational(rq(&mut rng, 0, 50)).add_rational(&qf(1, 500));
            let lhs = &lambda * &phi.eval_exact(&lambda, &(&lambda * &t)).unwrap();
            exact_failures += usize::from(lhs != phi.eval_exact(&lambda, &t).unwrap());
        }
    }
    let phi_table = PhiSpec::Table { knots: vec![[q(1), q(3)], [qf(3, 2), q(2)], [q(2), qf(3, 2)]] };
    for _ in 0..1000 {
        let t = lf.powf(rng.gen_range(-8.0..8.0));
        let rhs = phi_table.eval_f64(lf, t);
        table_worst = table_worst.max((lf * phi_table.eval_f64(lf, lf * t) - rhs).abs() / rhs.abs().max(1.0));
    }

    for beta in [q(2), qf(-3, 2)] {
        let bs = QuadraticSurd::rational(beta.clone());
        for _ in 0..1000 {
            let t = QuadraticSurd::rational(rq(&mut rng, -30, 30));
            let lhs = PsiSpec::Canonical.eval_exact(&beta, &(&t + &bs)).unwrap();
            exact_failures += usize::from(lhs != &PsiSpec::Canonical.eval_exact(&beta, &t).unwrap() + &t);
        }
    }
    let psi_tables: [(Q, PsiSpec); 2] = [
        (q(1), PsiSpec::Table { knots: vec![[q(0), q(0)], [qf(1, 2), qf(-1, 4)]] }),
        (q(-1), PsiSpec::Table { knots: vec![[qf(-1, 2), qf(1, 4)], [q(0), q(0)]] }),
    ];
    for (beta, psi) in &psi_tables {
        let bf = to_f64(beta);
        for _ in 0..1000 {
            let t: f64 = rng.gen_range(-20.0..20.0);
            table_worst = table_worst.max((psi.eval_f64(beta, t + bf) - psi.eval_f64(beta, t) - t).abs());
        }
    }
    Outcome {
        pass: exact_failures == 0 && table_worst <= 1e-12,
        detail: format!("{exact_failures} exact failures over 4000 closed-form reductions, table residual {table_worst:.2e} over 3000"),
    }
}

fn ac5() -> Outcome {
    let worst = u_tilde_invariance(10_000, 10, reinhardt_core::DEFAULT_SEED).unwrap();
    Outcome { pass: worst <= 1e-10, detail: format!("max |u~(Phi(z)) - u~(z)| = {worst:.2e} over 10^4 samples x 10 maps") }
}

fn ac6() -> Outcome {
    let cfg = SuiteConfig::default();
    let mut parts = Vec::new();
    let mut pass = true;
    for name in ["model4", "model5", "model6", "parabolic_k1"] {
        let v = classify_serre(&models::get(name).unwrap()).unwrap();
        let Certificate::Exhaustion { function, normal_form } = v.certificate else {
            return Outcome { pass: false, detail: format!("{name} has no exhaustion certificate") };
        };
        let rep = run_suite(&function, &normal_form, None, &cfg).unwrap();
        let stable = rep.bounded.iter().all(|b| b.sups.len() == 3 && b.sups[0].0 == 1000 && b.sups[2].0 == 100_000);
        let ok = rep.pass && stable && rep.psh_min_eigen >= -cfg.psh_tol;
        pass &= ok;
        parts.push(format!("{} min-eigen {:.1e} {}", function.name(), rep.psh_min_eigen, if ok { "ok" } else { "FAILED" }));
    }
    let control = check_psh(&ExhaustionFn::NegSquare, &models::get("model6").unwrap(), &cfg.grid, cfg.psh_tol).unwrap();
    pass &= !control.pass;
    parts.push(format!("control min-eigen {:.2} {}", control.min_eigen, if control.pass { "MISSED" } else { "detected" }));
    Outcome { pass, detail: parts.join(", ") }
}

fn ac7() -> Outcome {
    let base = CLParams::from_model(&models::get("coeure_loeb").unwrap()).unwrap();
    let mut parts = Vec::new();
    let mut pass = true;
    for sign in [Sign::Plus, Sign::Minus] {
        let p = base.with_sign(sign);
        let tag = if sign == Sign::Plus { "+" } else { "-" };
        match run_counterexample(&p, &DEFAULT_R_LIST, Some(4096), &ScanGrid::default()) {
            Ok((rep, _)) => {
                let ok = rep.pass && rep.blowup.max_center_g > 10.0;
                pass &= ok;
                parts.push(format!("sign {tag}: max s*Im g(0) = {:.4}", rep.blowup.max_center_g));
            }
            Err(e) => {
                pass = false;
                parts.push(format!("sign {tag} at N = 4096: {e}"));
            }
        }
    }
    // What adaptive resolution reaches at the smallest radius.
    let r = *DEFAULT_R_LIST.last().unwrap();
    if let Ok(sol) = solve_gh(&base, r, scaled_resolution(r)) {
        let g0 = sol.g.eval(num::complex::Complex64::new(0.0, 0.0)).im;
        parts.push(format!("adaptive N = {} gives Im g(0) = {g0:.4} at R = {r}, below 10", scaled_resolution(r)));
    }
    Outcome { pass, detail: parts.join("; ") }
}

fn ac8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut total = 0;
    let mut same = 0;
    for (_, m) in models::all() {
        let base = classify_serre(&m).unwrap();
        for _ in 0..20 {
            let (a, b) = random_equivalence(&m, &mut rng);
            let v = classify_serre(&m.apply_monomial(&a, &b).unwrap()).unwrap();
            total += 1;
            same += usize::from(v.member == base.member && v.case_label == base.case_label);
        }
    }
    Outcome { pass: same == total, detail: format!("{same}/{total} verdicts unchanged") }
}

fn ac9() -> Outcome {
    let golden = Mat2Z::new(2, 1, 1, 1);
    let EigenDirections::Distinct { v, w } = eigensystem(&golden).unwrap().directions else {
        return Outcome { pass: false, detail: "no eigen-wedge".into() };
    };
    let found = find_hyperbolic_matrix(&Cone2::wedge(v, w).unwrap(), DEFAULT_ENTRY_BOUND);
    let rational = Cone2::wedge(Direction2::from_ints(1, 0).unwrap(), Direction2::from_ints(1, 2).unwrap()).unwrap();
    let none = find_hyperbolic_matrix(&rational, DEFAULT_ENTRY_BOUND);
    let ok = found.matrix() == Some(&golden) && none.matrix().is_none();
    Outcome {
        pass: ok,
        detail: format!(
            "eigen-wedge gives {}, rational wedge gives {}",
            found.matrix().map_or("nothing".to_string(), |m| format!("{m}")),
            serde_json::to_string(&none).unwrap()
        ),
    }
}

fn main() {
    let secs = |s: u64| Some(Duration::from_secs(s));
    let results = [
        run("AC1", "classification goldens", secs(5), ac1),
        run("AC2", "exhaustive spectral suite", None, ac2),
        run("AC3", "orbit closed forms", None, ac3),
        run("AC4", "functional equations", None, ac4),
        run("AC5", "u~ invariance", secs(10), ac5),
        run("AC6", "exhaustion suites and control", secs(60), ac6),
        run("AC7", "counterexample harness", secs(120), ac7),
        run("AC8", "equivalence invariance", None, ac8),
        run("AC9", "hyperbolic-matrix search", secs(5), ac9),
    ];
    let failed = results.iter().filter(|p| !**p).count();
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
