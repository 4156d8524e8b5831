use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::Serialize;
use serde_json::json;

use super::config::{Operator, OperatorConfig};
use super::report::Report;
use super::{ClassifyArgs, CliError, FdMode, ProbeArgs, ProbeName, ProfileArg, ShadowArgs};
use crate::classifier::{
    classify_expansive_forward, classify_positively_expansive, classify_uniformly_expansive_forward,
    classify_uniformly_positively_expansive, frequent_hc_check, hypercyclicity_check, irregular_vector_probe,
    is_hyperbolic_shift, ne0_growth_probe, supercyclicity_check, ClassifierConfig, Verdict, VerdictValue, Witness,
};
use crate::error::{Error, Result};
use crate::matrix_lab::{
    expansion_exponent, fd1_counterexample, is_hyperbolic_matrix, normal_expansive, CVector, Fd1Mode, MatrixOp,
    DEFAULT_BAND,
};
use crate::sequence_space::{orbit_norms, BiVector, Direction, ShiftOperator, Support};
use crate::shadowing::{
    generate_pseudotrajectory, generate_with_rule, linear_growth_orbit, positive_shadowing_decision_normal,
    refute_shadowing, shadow, shadow_profile, write_csv, DecisionConfig, DefectProfile, DefectRule,
    LinearOperator, PseudoJson, PseudoTrajectory, SparseCoords, Splittable,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_UNCERTIFIED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_REFUTED: i32 = 3;
pub const EXIT_INAPPLICABLE: i32 = 4;

/// Errors meaning "this operation does not apply to this operator".
fn inapplicable(e: &Error) -> bool {
    matches!(
        e,
        Error::Unilateral
            | Error::NotInvertible(_)
            | Error::NotPeriodic(_)
            | Error::NotSplittable(_)
            | Error::NoUnimodularEigenvalue
            | Error::NotNormal(_)
            | Error::NotHyperbolic(_)
            | Error::OrbitOutOfBand { .. }
    )
}

fn runtime(e: Error) -> CliError {
    let code = if inapplicable(&e) {
        EXIT_INAPPLICABLE
    } else if matches!(e, Error::InvalidArgument(_) | Error::ProfileViolated(_)) {
        EXIT_CONFIG
    } else {
        EXIT_UNCERTIFIED
    };
    CliError { code, error: e }
}

fn config_error(e: Error) -> CliError {
    CliError { code: EXIT_CONFIG, error: e }
}

fn classifier_config(horizon: u64, threshold: f64) -> std::result::Result<ClassifierConfig, CliError> {
    let mut cfg = ClassifierConfig::default().with_horizon(horizon);
    cfg.threshold_c = threshold;
    cfg.burn_in = cfg.burn_in.min(horizon.saturating_sub(1));
    cfg.validate().map_err(config_error)?;
    Ok(cfg)
}

fn record(report: &mut Report, key: &str, v: Result<Verdict>) -> std::result::Result<(), CliError> {
    match v {
        Ok(v) => {
            report.verdicts.insert(key.into(), v);
            Ok(())
        }
        Err(e) if inapplicable(&e) => {
            report.skipped.insert(key.into(), e.to_string());
            Ok(())
        }
        Err(e) => Err(runtime(e)),
    }
}

fn to_value<T: Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).unwrap_or(serde_json::Value::Null)
}

fn artifact(report: &mut Report, out: Option<&Path>, name: &str) -> Option<PathBuf> {
    let dir = out?;
    let path = dir.join(name);
    report.artifacts.push(path.display().to_string());
    Some(path)
}

fn finish(report: Report, out: Option<&Path>) -> std::result::Result<Report, CliError> {
    if let Some(dir) = out {
        report.write(dir).map_err(runtime)?;
    }
    Ok(report)
}

fn create_dir(out: Option<&Path>) -> std::result::Result<(), CliError> {
    if let Some(dir) = out {
        std::fs::create_dir_all(dir).map_err(|e| runtime(e.into()))?;
    }
    Ok(())
}

/// Every applicable classifier on the configured operator.
pub fn cmd_classify(config: &OperatorConfig, args: &ClassifyArgs) -> std::result::Result<Report, CliError> {
    let op = config.build().map_err(config_error)?;
    let cfg = classifier_config(args.horizon, args.threshold)?;
    let mut report = Report::new(&config.label, "classify");
    report.param("horizon", args.horizon);
    report.param("threshold", args.threshold);
    match &op {
        Operator::Shift(s) => classify_shift(s, &cfg, &mut report)?,
        Operator::Matrix(m) => classify_matrix(m, &cfg, &mut report)?,
    }
    finish(report, args.out.as_deref())
}

fn classify_shift(op: &ShiftOperator, cfg: &ClassifierConfig, report: &mut Report) -> std::result::Result<(), CliError> {
    let w = &op.weights;
    let forward_only = "classified for the forward shift F_w";
    let backward_only = "classified for the backward shift B_w";
    match op.direction {
        Direction::Forward => {
            record(report, "expansive", classify_expansive_forward(w, cfg))?;
            match classify_uniformly_expansive_forward(w, cfg) {
                Ok(u) => {
                    report.details = json!({ "uniform_branches": to_value(&u.branches), "primary_branch": to_value(&u.primary) });
                    report.verdicts.insert("uniformly_expansive".into(), u.verdict);
                }
                Err(e) => record(report, "uniformly_expansive", Err(e))?,
            }
            record(report, "pos_expansive", classify_positively_expansive(w, cfg, Direction::Forward))?;
            record(report, "unif_pos_expansive", classify_uniformly_positively_expansive(w, cfg, Direction::Forward))?;
            record(report, "hyperbolic", is_hyperbolic_shift(w, cfg))?;
            record(report, "fhc", frequent_hc_check(w, cfg))?;
            for key in ["hypercyclic", "supercyclic"] {
                report.skipped.insert(key.into(), backward_only.into());
            }
        }
        Direction::Backward => {
            record(report, "pos_expansive", classify_positively_expansive(w, cfg, Direction::Backward))?;
            record(report, "unif_pos_expansive", classify_uniformly_positively_expansive(w, cfg, Direction::Backward))?;
            record(report, "hypercyclic", hypercyclicity_check(w, cfg))?;
            record(report, "supercyclic", supercyclicity_check(w, cfg))?;
            for key in ["expansive", "uniformly_expansive", "hyperbolic", "fhc"] {
                report.skipped.insert(key.into(), forward_only.into());
            }
        }
    }
    Ok(())
}

fn classify_matrix(op: &MatrixOp, cfg: &ClassifierConfig, report: &mut Report) -> std::result::Result<(), CliError> {
    report.verdicts.insert("hyperbolic".into(), is_hyperbolic_matrix(op, DEFAULT_BAND));
    match normal_expansive(op, DEFAULT_BAND) {
        Ok(ne) => {
            report.verdicts.insert("expansive".into(), ne.expansive);
            report.verdicts.insert("pos_expansive".into(), ne.positively_expansive);
            report.verdicts.insert("unif_pos_expansive".into(), ne.uniformly_positively_expansive);
            report.verdicts.insert("uniformly_expansive".into(), ne.uniformly_expansive);
            let decision = positive_shadowing_decision_normal(op, &DecisionConfig::default()).map_err(runtime)?;
            report.details = json!({
                "shadowing_certificate": to_value(&decision.certificate),
                "shadowing_refutation": to_value(&decision.refutation),
            });
            report.verdicts.insert("positive_shadowing".into(), decision.verdict);
        }
        Err(e @ Error::NotNormal(_)) => {
            let reason = e.to_string();
            for key in ["expansive", "pos_expansive", "uniformly_expansive", "positive_shadowing"] {
                report.skipped.insert(key.into(), reason.clone());
            }
            let v = match expansion_exponent(op, cfg.threshold_c, cfg.horizon) {
                Some(n) => Verdict::witnessed(
                    Witness::Note { text: format!("s_min(A^{n}) > {}", cfg.threshold_c) },
                    cfg.horizon,
                ),
                None => Verdict::searched_out(cfg.horizon),
            };
            report.verdicts.insert("unif_pos_expansive".into(), v);
        }
        Err(e) => return Err(runtime(e)),
    }
    Ok(())
}

fn shift_x0(op: &ShiftOperator) -> BiVector {
    BiVector::basis(if op.weights.support == Support::Unilateral { 1 } else { 0 })
}

fn matrix_x0(op: &MatrixOp) -> CVector {
    let mut x = CVector::zeros(op.dim());
    x[0] = Complex64::new(1.0, 0.0);
    x
}

/// Shadow a pseudotrajectory read from `--pseudo` or generated from the seed.
pub fn cmd_shadow(config: &OperatorConfig, args: &ShadowArgs) -> std::result::Result<Report, CliError> {
    let op = config.build().map_err(config_error)?;
    if args.window < 1 {
        return Err(config_error(Error::InvalidArgument("--window must be at least 1".into())));
    }
    if !(args.tol > 0.0) {
        return Err(config_error(Error::InvalidArgument("--tol must be positive".into())));
    }
    let mut report = Report::new(&config.label, "shadow");
    report.param("window", args.window);
    report.param("delta", args.delta);
    report.param("tol", args.tol);
    report.param("refute", args.refute);
    if let Some(p) = &args.pseudo {
        report.param("pseudo", p.display().to_string());
    }
    report.seed = args.seed;
    create_dir(args.out.as_deref())?;
    match &op {
        Operator::Shift(s) => {
            let x0 = shift_x0(s);
            shadow_any(s, x0, args, &mut report, None)?
        }
        Operator::Matrix(m) => {
            let x0 = matrix_x0(m);
            shadow_any(m, x0, args, &mut report, Some(m))?
        }
    }
    finish(report, args.out.as_deref())
}

fn shadow_any<O: Splittable>(
    op: &O,
    x0: O::Vector,
    args: &ShadowArgs,
    report: &mut Report,
    matrix: Option<&MatrixOp>,
) -> std::result::Result<(), CliError> {
    let s = match op.build_splitting() {
        Ok(s) => s,
        Err(e) if inapplicable(&e) => {
            let Some(m) = matrix.filter(|_| args.refute) else {
                return Err(if args.refute {
                    CliError { code: EXIT_INAPPLICABLE, error: Error::NotSplittable(format!("{e}; refutation is available for matrices only")) }
                } else {
                    runtime(e)
                });
            };
            let r = refute_shadowing(m, (0, args.window), DEFAULT_BAND).map_err(runtime)?;
            report.verdicts.insert(
                "shadowing".into(),
                Verdict::exact(false, Some(Witness::Refutation { window: args.window, lower_bound: r.lower_bound })),
            );
            report.details = json!({ "refutation": to_value(&r), "splitting_error": e.to_string() });
            report.exit_code = EXIT_REFUTED;
            return Ok(());
        }
        Err(e) => return Err(runtime(e)),
    };
    let window = if op.is_invertible() { (-args.window, args.window) } else { (0, args.window) };
    let rule = args.profile.map(|_| DefectRule { amplitude: args.delta, decay_exponent: args.decay });
    let pt: PseudoTrajectory<O::Vector> = match &args.pseudo {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| config_error(e.into()))?;
            let raw: PseudoJson = serde_json::from_str(&text).map_err(|e| config_error(e.into()))?;
            PseudoTrajectory::from_json(op, &raw).map_err(config_error)?
        }
        None => {
            let seed = args.seed.ok_or_else(|| {
                config_error(Error::InvalidArgument("--seed is required when generating a pseudotrajectory".into()))
            })?;
            match &rule {
                Some(rule) => generate_with_rule(op, &x0, rule, window, seed),
                None => generate_pseudotrajectory(op, &x0, args.delta, window, seed),
            }
            .map_err(runtime)?
        }
    };
    let (result, profile) = match (args.profile, &rule) {
        (Some(p), Some(rule)) => {
            let profile = match p {
                ProfileArg::Decaying => DefectProfile::Decaying,
                ProfileArg::Psummable => DefectProfile::PSummable { p: args.p },
            };
            let (r, c) = shadow_profile(op, &s, rule, profile, &pt, args.tol).map_err(runtime)?;
            (r, Some(c))
        }
        _ => (shadow(op, &s, &pt, args.tol).map_err(runtime)?, None),
    };
    let passed = result.certified && profile.as_ref().is_none_or(|c| c.passed());
    let verdict = if passed {
        Verdict::witnessed(Witness::ShadowConstant { k: result.bound_k }, (pt.n_max - pt.n_min) as u64)
    } else {
        Verdict {
            value: VerdictValue::Undetermined,
            provenance: crate::classifier::Provenance::Witnessed,
            witness: Some(Witness::Note { text: format!("sup error {} exceeds K delta", result.sup_error()) }),
            horizon: Some((pt.n_max - pt.n_min) as u64),
        }
    };
    report.verdicts.insert("shadowing".into(), verdict);
    report.details = json!({
        "splitting": to_value(&s),
        "window": [pt.n_min, pt.n_max],
        "delta": pt.delta,
        "bound_k": result.bound_k,
        "sup_error": result.sup_error(),
        "residual_max": result.residual_max,
        "certified": result.certified,
        "profile": to_value(&profile),
    });
    if let Some(path) = artifact(report, args.out.as_deref(), "shadow.json") {
        let text = serde_json::to_string_pretty(&result.to_json(op)).map_err(|e| runtime(e.into()))?;
        std::fs::write(path, text + "\n").map_err(|e| runtime(e.into()))?;
    }
    if let Some(path) = artifact(report, args.out.as_deref(), "shadow.csv") {
        let f = std::fs::File::create(path).map_err(|e| runtime(e.into()))?;
        write_csv(&result, f).map_err(runtime)?;
    }
    if let Some(path) = artifact(report, args.out.as_deref(), "pseudo.json") {
        let text = serde_json::to_string(&pt.to_json(op)).map_err(|e| runtime(e.into()))?;
        std::fs::write(path, text + "\n").map_err(|e| runtime(e.into()))?;
    }
    report.exit_code = if passed { EXIT_OK } else { EXIT_UNCERTIFIED };
    Ok(())
}

fn write_rows(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Single-purpose probes on the configured operator.
pub fn cmd_probe(config: &OperatorConfig, args: &ProbeArgs) -> std::result::Result<Report, CliError> {
    let op = config.build().map_err(config_error)?;
    let cfg = classifier_config(args.horizon, args.threshold)?;
    if args.window < 1 {
        return Err(config_error(Error::InvalidArgument("--window must be at least 1".into())));
    }
    let name = args.name.as_str();
    let mut report = Report::new(&config.label, &format!("probe {name}"));
    report.param("horizon", args.horizon);
    report.param("threshold", args.threshold);
    report.param("window", args.window);
    report.param("index", args.index);
    create_dir(args.out.as_deref())?;
    let out = args.out.clone();
    let out = out.as_deref();
    match (args.name, &op) {
        (ProbeName::Orbit, Operator::Shift(s)) => {
            let n_min = if s.is_invertible() { -args.window } else { 0 };
            let norms = orbit_norms(&s.weights, &BiVector::basis(args.index), s.space, s.direction, n_min, args.window)
                .map_err(runtime)?;
            let rows: Vec<(i64, f64, f64)> = norms.iter().map(|(n, m)| (*n, m.ln(), m.value())).collect();
            orbit_report(&mut report, out, &rows)?;
        }
        (ProbeName::Orbit, Operator::Matrix(m)) => {
            let x = basis_vector(m, args.index)?;
            let mut rows = Vec::new();
            let mut v = x.clone();
            for n in 0..=args.window {
                rows.push((n, v.norm().ln(), v.norm()));
                v = m.apply(&v).map_err(runtime)?;
            }
            if m.is_invertible() {
                let mut v = x;
                for n in 1..=args.window {
                    v = m.apply_inverse(&v).map_err(runtime)?;
                    rows.push((-n, v.norm().ln(), v.norm()));
                }
            }
            rows.sort_by_key(|r| r.0);
            orbit_report(&mut report, out, &rows)?;
        }
        (ProbeName::Irregular, Operator::Shift(s)) => {
            let first = s.weights.first_index();
            let mut idx: Vec<i64> = (-args.window..=args.window).filter(|&k| k >= first).collect();
            idx.sort_by_key(|&k| (k.unsigned_abs(), k < 0));
            let cands: Vec<BiVector> = idx.iter().map(|&k| BiVector::basis(k)).collect();
            let wit = irregular_vector_probe(s, &cands, &cfg).map_err(runtime)?;
            irregular_report(&mut report, &cfg, wit.map(|w| (idx[w.candidate], to_value(&w))));
        }
        (ProbeName::Irregular, Operator::Matrix(m)) => {
            let cands: Vec<CVector> = (0..m.dim() as i64).map(|k| basis_vector(m, k)).collect::<std::result::Result<_, _>>()?;
            let wit = irregular_vector_probe(m, &cands, &cfg).map_err(runtime)?;
            irregular_report(&mut report, &cfg, wit.map(|w| (w.candidate as i64, to_value(&w))));
        }
        (ProbeName::Ne0, Operator::Shift(s)) => {
            let g = ne0_growth_probe(&s.weights, &cfg).map_err(runtime)?;
            report.details = to_value(&g);
        }
        (ProbeName::LinearGrowth, Operator::Shift(s)) => {
            let y = match &args.point {
                Some(path) => s.from_sparse(&read_point(path)?).map_err(config_error)?,
                None => BiVector::from_entries((-60..=60i64).map(|k| (k, Complex64::new(2.0 * 0.5f64.powi(k.abs() as i32), 0.0)))),
            };
            linear_growth_report(s, &y, args, &mut report)?;
        }
        (ProbeName::LinearGrowth, Operator::Matrix(m)) => {
            let y = match &args.point {
                Some(path) => m.from_sparse(&read_point(path)?).map_err(config_error)?,
                None => matrix_x0(m) * Complex64::new(2.0, 0.0),
            };
            linear_growth_report(m, &y, args, &mut report)?;
        }
        (ProbeName::Fd1 | ProbeName::Fd2, Operator::Matrix(m)) => {
            let mode = match (args.name, args.mode) {
                (ProbeName::Fd2, _) => Fd1Mode::Positive { delta: args.delta },
                (_, FdMode::Lp) => Fd1Mode::Lp { p: args.p },
                (_, FdMode::L1) => Fd1Mode::L1,
            };
            let cert = fd1_counterexample(m, mode, args.window as u64, DEFAULT_BAND).map_err(runtime)?;
            if let Some(path) = artifact(&mut report, out, &format!("{name}.csv")) {
                let rows: Vec<Vec<String>> = cert
                    .profile
                    .iter()
                    .enumerate()
                    .map(|(n, a)| {
                        let d = cert.defect_norms.get(n).map_or(String::new(), |d| d.to_string());
                        vec![n.to_string(), d, a.to_string()]
                    })
                    .collect();
                write_rows(&path, &["n", "defect_norm", "profile"], &rows).map_err(runtime)?;
            }
            report.details = to_value(&cert);
            report.exit_code = if cert.verified { EXIT_OK } else { EXIT_UNCERTIFIED };
        }
        (_, Operator::Shift(_)) => {
            return Err(CliError {
                code: EXIT_INAPPLICABLE,
                error: Error::InvalidArgument(format!("probe {name} needs a matrix operator")),
            })
        }
        (_, Operator::Matrix(_)) => {
            return Err(CliError {
                code: EXIT_INAPPLICABLE,
                error: Error::InvalidArgument(format!("probe {name} needs a shift operator")),
            })
        }
    }
    finish(report, out)
}

fn basis_vector(m: &MatrixOp, k: i64) -> std::result::Result<CVector, CliError> {
    if k < 0 || k as usize >= m.dim() {
        return Err(config_error(Error::InvalidArgument(format!("--index {k} outside 0..{}", m.dim()))));
    }
    let mut x = CVector::zeros(m.dim());
    x[k as usize] = Complex64::new(1.0, 0.0);
    Ok(x)
}

fn read_point(path: &Path) -> std::result::Result<SparseCoords, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| config_error(e.into()))?;
    serde_json::from_str(&text).map_err(|e| config_error(e.into()))
}

fn orbit_report(report: &mut Report, out: Option<&Path>, rows: &[(i64, f64, f64)]) -> std::result::Result<(), CliError> {
    if let Some(path) = artifact(report, out, "orbit.csv") {
        let rows: Vec<Vec<String>> = rows.iter().map(|(n, l, v)| vec![n.to_string(), l.to_string(), v.to_string()]).collect();
        write_rows(&path, &["n", "log_norm", "norm"], &rows).map_err(runtime)?;
    }
    let norms: BTreeMap<String, f64> = rows.iter().map(|(n, _, v)| (n.to_string(), *v)).collect();
    report.details = json!({ "log_norms": rows.iter().map(|r| [r.0 as f64, r.1]).collect::<Vec<_>>(), "norms": norms });
    Ok(())
}

fn irregular_report(report: &mut Report, cfg: &ClassifierConfig, found: Option<(i64, serde_json::Value)>) {
    let v = match found {
        Some((index, wit)) => {
            report.details = json!({ "vector_index": index, "witness": wit });
            Verdict::witnessed(Witness::Note { text: format!("e_{index} is irregular") }, cfg.horizon)
        }
        None => Verdict::searched_out(cfg.horizon),
    };
    report.verdicts.insert("irregular_vector".into(), v);
}

fn linear_growth_report<O: Splittable>(
    op: &O,
    y: &O::Vector,
    args: &ProbeArgs,
    report: &mut Report,
) -> std::result::Result<(), CliError> {
    let s = op.build_splitting().map_err(runtime)?;
    let g = linear_growth_orbit(op, &s, y, args.delta, args.window, args.tol).map_err(runtime)?;
    report.param("delta", args.delta);
    report.param("tol", args.tol);
    report.details = json!({
        "delta": g.delta,
        "eps": g.eps,
        "holds": g.holds,
        "norms": g.norms,
        "base_point": op.to_sparse(&g.base_point),
    });
    report.exit_code = if g.holds { EXIT_OK } else { EXIT_UNCERTIFIED };
    Ok(())
}
