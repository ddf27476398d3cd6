//! Subcommand implementations. Each returns the process exit code.

use crate::args::{Cli, Command, CounterexampleArgs, FnName, Format, SignArg, StehleArgs};
use crate::error::{invalid, CliError};
use crate::output::{blowup_svg, emit, reduction_csv, write_atomic};
use crate::schema::{self, load};
use reinhardt_core::autgroup::{classify_aut_structure, model_generator, noncompactness_witness, AutError};
use reinhardt_core::coeureloeb::{run_counterexample, CLParams, CoeureLoebError, CounterexampleReport, ReductionRow, ScanGrid};
use reinhardt_core::convexlog::{LogDomainModel, Shape, Sign};
use reinhardt_core::models;
use reinhardt_core::serreclass::{classify_serre, find_hyperbolic_matrix, verify_certificate, Certificate, CertificateReport, Verdict};
use reinhardt_core::stehle::{check_psh, run_suite, ExhaustionFn, GridSpec, HoloAut, SuiteConfig};
use serde::Serialize;
use serde_json::{json, Value};
use std::path::Path;

pub fn run(cli: &Cli) -> Result<i32, CliError> {
    let out = cli.output.as_deref();
    match &cli.command {
        Command::Classify { model, verify } => classify(model, *verify, cli.seed, out),
        Command::Cone { model, entry_bound } => cone(model, *entry_bound, out),
        Command::Aut { model } => aut(model, out),
        Command::Stehle(a) => stehle(a, cli.seed, out),
        Command::Counterexample(a) => counterexample(a, out),
        Command::Selftest { quick } => selftest(*quick, cli.seed, out),
    }
}

fn pretty<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("reports serialize")
}

fn load_model(path: &Path) -> Result<LogDomainModel, CliError> {
    let m: LogDomainModel = load(path, schema::MODEL)?;
    m.validate().map_err(invalid)?;
    Ok(m)
}

fn suite_config(seed: u64) -> SuiteConfig {
    let mut cfg = SuiteConfig { seed, ..SuiteConfig::default() };
    cfg.grid.seed = seed;
    cfg
}

#[derive(Serialize)]
struct VerifiedVerdict<'a> {
    verdict: &'a Verdict,
    verification: CertificateReport,
}

fn classify(path: &Path, verify: bool, seed: u64, out: Option<&Path>) -> Result<i32, CliError> {
    let model = load_model(path)?;
    let verdict = classify_serre(&model).map_err(invalid)?;
    let verdict_code = if verdict.member { 0 } else { 3 };
    if !verify {
        emit(out, &pretty(&verdict))?;
        return Ok(verdict_code);
    }
    let verification = verify_certificate(&verdict, &model, &suite_config(seed)).map_err(invalid)?;
    let pass = verification.pass;
    emit(out, &pretty(&VerifiedVerdict { verdict: &verdict, verification }))?;
    Ok(if pass { verdict_code } else { 2 })
}

fn cone(path: &Path, bound: u64, out: Option<&Path>) -> Result<i32, CliError> {
    let model = load_model(path)?;
    let cone = model.recession_cone().map_err(invalid)?;
    let report = json!({
        "kind": model.kind(),
        "axes": model.axes(),
        "t": model.axis_count().map_err(invalid)?,
        "hyperbolic_domain": model.is_hyperbolic_domain(),
        "recession_cone": cone,
        "hyperbolic_matrix": find_hyperbolic_matrix(&cone, bound),
    });
    emit(out, &pretty(&report))?;
    Ok(0)
}

fn aut(path: &Path, out: Option<&Path>) -> Result<i32, CliError> {
    let model = load_model(path)?;
    let t = model.axis_count().map_err(invalid)?;
    let mut report = json!({ "kind": model.kind(), "t": t });
    match classify_aut_structure(&model) {
        Ok(class) => {
            report["structure"] = json!(class);
            report["generator"] = json!(model_generator(&model));
            report["witness"] = json!(noncompactness_witness(&model).map_err(invalid)?);
        }
        Err(e @ (AutError::AxisMet(_) | AutError::NotHyperbolicDomain)) => {
            report["structure"] = Value::Null;
            report["note"] = json!(e.to_string());
        }
        Err(e) => return Err(invalid(e)),
    }
    emit(out, &pretty(&report))?;
    Ok(0)
}

/// Builds the named function from the model's parameters.
fn function_named(name: FnName, model: &LogDomainModel) -> Result<ExhaustionFn, CliError> {
    let mismatch = || invalid(format!("{name:?} does not apply to a {} model", model.kind()));
    Ok(match (name, &model.shape) {
        (FnName::U4, Shape::Model4 { r }) => ExhaustionFn::U4 { r: *r },
        (FnName::U5, Shape::Model5 { p }) => ExhaustionFn::U5 { p: *p },
        (FnName::U5Rho, Shape::Model5 { p }) => ExhaustionFn::U5Rho { p: *p },
        (FnName::UTilde6, Shape::Model6 {}) => ExhaustionFn::UTilde6,
        (FnName::RhoUTilde6, Shape::Model6 {}) => ExhaustionFn::RhoUTilde6,
        (FnName::U6, Shape::Model6 {}) => ExhaustionFn::U6,
        (FnName::UParabolic, Shape::ParabolicModel { matrix, beta2, psi }) => {
            ExhaustionFn::UParabolic { matrix: matrix.clone(), beta2: beta2.clone(), psi: psi.clone() }
        }
        (FnName::NegSquare, _) => ExhaustionFn::NegSquare,
        _ => return Err(mismatch()),
    })
}

fn stehle(a: &StehleArgs, seed: u64, out: Option<&Path>) -> Result<i32, CliError> {
    let input = load_model(&a.model)?;
    let (f, model) = match a.function {
        Some(name) => {
            let f = function_named(name, &input)?;
            let m = f.model().unwrap_or(input);
            (f, m)
        }
        None => match classify_serre(&input).map_err(invalid)?.certificate {
            Certificate::Exhaustion { function, normal_form } => (function, normal_form),
            _ => return Err(invalid("the model's certificate has no exhaustion function; pass --fn")),
        },
    };
    let auts = match &a.aut_file {
        Some(p) => Some(load::<Vec<HoloAut>>(p, schema::AUTOMORPHISMS)?),
        None => None,
    };
    let cfg = SuiteConfig {
        seed,
        grid: GridSpec { radial: a.radial, angular: a.angular, seed, ..GridSpec::default() },
        psh_tol: a.psh_tol,
        exhaustion_samples: a.exhaustion_samples,
        bounded_samples: a.bounded_samples,
        automorphisms: a.automorphisms,
        ..SuiteConfig::default()
    };
    let report = run_suite(&f, &model, auts, &cfg).map_err(invalid)?;
    emit(out, &pretty(&report))?;
    Ok(if report.pass { 0 } else { 2 })
}

fn cl_error(sign: Sign, e: CoeureLoebError) -> CliError {
    let s = if sign == Sign::Plus { "+" } else { "-" };
    let record = match &e {
        CoeureLoebError::NotHyperbolic | CoeureLoebError::InvalidRadius(_) | CoeureLoebError::InvalidResolution(_) => {
            return invalid(e)
        }
        CoeureLoebError::ResolutionTooLow { n, r, tail } => json!({"sign": s, "n": n, "R": r, "tail_energy": tail}),
        CoeureLoebError::CrossValidation(d) => json!({"sign": s, "difference": d}),
        CoeureLoebError::MarginViolation { re, im, margin } => json!({"sign": s, "zeta": [re, im], "margin": margin}),
        CoeureLoebError::IntervalViolation { theta, what, value } => {
            json!({"sign": s, "theta": theta, "quantity": what, "value": value})
        }
    };
    CliError::Check { message: e.to_string(), record }
}

fn counterexample(a: &CounterexampleArgs, out: Option<&Path>) -> Result<i32, CliError> {
    let model = match &a.params {
        Some(p) => load_model(p)?,
        None => models::get("coeure_loeb").expect("bundled"),
    };
    let base = CLParams::from_model(&model).map_err(invalid)?;
    let signs = match a.sign {
        SignArg::Plus => vec![Sign::Plus],
        SignArg::Minus => vec![Sign::Minus],
        SignArg::Both => vec![Sign::Plus, Sign::Minus],
    };
    let grid = ScanGrid { radial: a.scan_radial, angular: a.scan_angular };
    let mut reports: Vec<CounterexampleReport> = Vec::new();
    let mut rows: Vec<Vec<Vec<ReductionRow>>> = Vec::new();
    for &sign in &signs {
        let (rep, r) = run_counterexample(&base.with_sign(sign), &a.r_list, a.n, &grid).map_err(|e| cl_error(sign, e))?;
        reports.push(rep);
        rows.push(r);
    }
    let pass = reports.iter().all(|r| r.pass);
    let label = |s: &Sign| if *s == Sign::Plus { "+" } else { "-" };

    let mut blocks = Vec::new();
    for (i, sign) in signs.iter().enumerate() {
        for (j, r) in a.r_list.iter().enumerate() {
            blocks.push((label(sign), *r, rows[i][j].as_slice()));
        }
    }
    let csv = reduction_csv(&blocks);
    let series: Vec<(&str, &_)> = signs.iter().zip(&reports).map(|(s, r)| (label(s), &r.blowup)).collect();
    let svg = blowup_svg(&series);
    let summary = pretty(&json!({ "branches": reports, "pass": pass }));

    if let Some(p) = &a.csv {
        write_atomic(p, &csv)?;
    }
    if let Some(p) = &a.svg {
        write_atomic(p, &svg)?;
    }
    let main = match a.format {
        Format::Json => summary,
        Format::Csv => csv,
        Format::Svg => svg,
    };
    emit(out, &main)?;
    Ok(if pass { 0 } else { 2 })
}

/// Expected verdicts of the bundled models.
fn expected_member(name: &str) -> bool {
    !matches!(name, "coeure_loeb" | "hyperbolic_a_over_t")
}

fn selftest(quick: bool, seed: u64, out: Option<&Path>) -> Result<i32, CliError> {
    let cfg = suite_config(seed);
    let mut entries = Vec::new();
    let mut pass = true;
    for (name, model) in models::all() {
        let verdict = classify_serre(&model).map_err(invalid)?;
        let verdict_ok = verdict.member == expected_member(name);
        let certificate = if quick {
            None
        } else {
            Some(verify_certificate(&verdict, &model, &cfg).map_err(invalid)?.pass)
        };
        pass &= verdict_ok && certificate.unwrap_or(true);
        entries.push(json!({
            "model": name,
            "case_label": verdict.case_label,
            "member": verdict.member,
            "expected_member": expected_member(name),
            "certificate_pass": certificate,
        }));
    }
    let m6 = models::get("model6").expect("bundled");
    let grid = GridSpec { radial: 6, angular: 4, seed, ..GridSpec::default() };
    let control = check_psh(&ExhaustionFn::NegSquare, &m6, &grid, cfg.psh_tol).map_err(invalid)?;
    pass &= !control.pass;
    let report = json!({
        "models": entries,
        "control": { "function": "neg_square", "psh_min_eigen": control.min_eigen, "detected": !control.pass },
        "pass": pass,
    });
    emit(out, &pretty(&report))?;
    Ok(if pass { 0 } else { 2 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn functions_follow_the_model() {
        let m4 = models::get("model4").unwrap();
        assert_eq!(function_named(FnName::U4, &m4).unwrap(), ExhaustionFn::U4 { r: 0.25 });
        assert!(function_named(FnName::U6, &m4).is_err());
        assert_eq!(function_named(FnName::NegSquare, &m4).unwrap(), ExhaustionFn::NegSquare);
        let p = models::get("parabolic_k1").unwrap();
        assert!(matches!(function_named(FnName::UParabolic, &p).unwrap(), ExhaustionFn::UParabolic { .. }));
    }

    #[test]
    fn violations_become_check_failures() {
        let e = cl_error(Sign::Minus, CoeureLoebError::MarginViolation { re: 0.1, im: 0.2, margin: -1e-3 });
        assert_eq!(e.exit_code(), 2);
        assert!(e.to_json().contains("\"margin\""));
        assert_eq!(cl_error(Sign::Plus, CoeureLoebError::InvalidResolution(3)).exit_code(), 1);
    }
}
