// SPDX-License-Identifier: Apache-2.0

//! The `urysohn` command line.
//!
//! [`run`] parses arguments, executes one subcommand and returns the exit
//! code together with everything that would be printed.

pub mod document;
pub mod report;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::admissibility::{check_admissible, realize, universality_audit, AuditParams};
use crate::builder::{grow, parse_stages, GrowthMode, GrowthSchedule, Stage};
use crate::equivariant::{key_inequality_check, orbit_extension};
use crate::error::Error;
use crate::globalization::{globalize, verify_certificate, GlobalizeConfig};
use crate::isometry::{hall_stage, isometry_group, left_regular_image, lex_rank, partial_isometries, Permutation};
use crate::metric::{validate_metric, FiniteMetricSpace};
use crate::rational::{parse_list, Rational};
use crate::toeplitz::{billiard_chain_with, build_toeplitz_universal, ladder_bound, phi_of, ChainOptions, PhiExtraction, ToeplitzOptions};

use document::{CertificateDocument, Loaded, MatrixDocument};
use report::{Report, Status};

#[derive(Parser, Debug)]
#[command(name = "urysohn", version, about = "Exact rational finite metric spaces and Urysohn-type constructions")]
struct Cli {
    /// Print the structured report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Also write the structured report to FILE.
    #[arg(long, global = true, value_name = "FILE")]
    report: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the metric axioms of a matrix document.
    Validate { file: PathBuf },
    /// Compute the full isometry group.
    Isogroup { file: PathBuf },
    /// Count the partial isometries.
    Pisocount { file: PathBuf },
    /// Add one point with the given distance profile.
    Extend {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        vector: String,
        #[arg(long, default_value = "x")]
        label: String,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Add the orbit of a profile under the isometry group.
    OrbitExtend {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        vector: String,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Grow a space realizing every staged admissible vector.
    Build {
        /// Comma-separated stages `n:D:B`.
        #[arg(long)]
        stages: String,
        #[arg(long)]
        seed: Option<u64>,
        /// `deterministic` or `random`; defaults to `random` when a seed is given.
        #[arg(long)]
        mode: Option<String>,
        /// Maximum number of added points.
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Check that every admissible vector of a prefix is realized.
    Audit {
        file: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        den: u64,
        #[arg(long)]
        bound: String,
        /// Candidate points are `n..depth`; defaults to all points.
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Build a universal shift-invariant metric.
    Toeplitz {
        #[arg(long)]
        stages: String,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        always_insert: bool,
        /// Maximum number of appended values.
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Connect two admissible vectors of a Toeplitz matrix by a chain.
    Billiard {
        file: PathBuf,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long)]
        always_insert: bool,
    },
    /// Extend a space so that every partial isometry becomes global.
    Globalize {
        file: PathBuf,
        #[arg(long, default_value_t = 12)]
        budget: usize,
        #[arg(long, default_value_t = 3)]
        exhaustive_depth: usize,
        #[arg(long, default_value_t = 20_000)]
        node_limit: usize,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Independently check a globalization certificate.
    VerifyCert { file: PathBuf },
    /// Check the left regular embedding of S_n, or map one element.
    Hall {
        #[arg(long)]
        n: usize,
        /// Permutation as 0-based images, for example `1,0,2`.
        #[arg(long)]
        element: Option<String>,
    },
}

/// What a run produced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Outcome {
    status: Status,
    result: Value,
    text: String,
    seed: Option<u64>,
}

impl Outcome {
    fn new(status: Status, result: Value, text: String) -> Self {
        Outcome { status, result, text, seed: None }
    }

    fn error(e: &Error) -> Self {
        let status = status_of(e);
        let mut result = json!({ "error": e.to_string() });
        match e {
            Error::InvalidMetric(r) => result["validation"] = json!(r),
            Error::NotAdmissible(v) => result["violation"] = json!(v),
            Error::BudgetExceeded(b) => {
                result["budget"] = json!(b.budget);
                result["points_reached"] = json!(b.space.len());
                result["detail"] = json!(b.detail);
            }
            _ => {}
        }
        Outcome::new(status, result, format!("error: {e}\n"))
    }
}

fn status_of(e: &Error) -> Status {
    match e {
        Error::BudgetExceeded(_) => Status::BudgetExceeded,
        Error::Parse(_) | Error::Shape(_) | Error::Index(_) | Error::Parameter(_) | Error::DuplicateLabel(_) => Status::Error,
        _ => Status::Failure,
    }
}

type Step<T> = std::result::Result<T, Outcome>;

fn lift<T>(r: crate::error::Result<T>) -> Step<T> {
    r.map_err(|e| Outcome::error(&e))
}

fn read(path: &Path) -> Step<String> {
    std::fs::read_to_string(path).map_err(|e| {
        let msg = format!("cannot read {}: {e}", path.display());
        Outcome::new(Status::Error, json!({ "error": msg }), format!("error: {msg}\n"))
    })
}

fn write(path: &Path, contents: &str) -> Step<()> {
    std::fs::write(path, contents).map_err(|e| {
        let msg = format!("cannot write {}: {e}", path.display());
        Outcome::new(Status::Error, json!({ "error": msg }), format!("error: {msg}\n"))
    })
}

fn invalid(report: &crate::metric::ValidationReport) -> Outcome {
    Outcome::new(Status::Failure, json!({ "valid": false, "validation": report }), format!("{report}\n"))
}

fn load_space(path: &Path) -> Step<FiniteMetricSpace> {
    let doc = lift(MatrixDocument::parse(&read(path)?))?;
    match lift(doc.load())? {
        Loaded::Space(s) => Ok(s),
        Loaded::Invalid(r) => Err(invalid(&r)),
    }
}

fn strings(values: &[Rational]) -> Vec<String> {
    values.iter().map(ToString::to_string).collect()
}

fn joined(values: &[Rational]) -> String {
    strings(values).join(",")
}

fn path_str(p: &Path) -> String {
    p.display().to_string()
}

/// Runs the command line `args` (including the program name).
pub fn run<I, T>(args: I) -> CliOutput
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                CliOutput { code, stdout: text, stderr: String::new() }
            } else {
                CliOutput { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let (name, params) = describe(&cli.command);
    let outcome = execute(&cli.command).unwrap_or_else(|o| o);
    let report = Report::new(name, params, outcome.seed, outcome.status, outcome.result);
    let json = report.to_json();
    let mut stderr = String::new();
    let mut code = report.exit_code;
    if let Some(path) = &cli.report {
        if let Err(e) = std::fs::write(path, &json) {
            let _ = writeln!(stderr, "error: cannot write {}: {e}", path.display());
            code = 3;
        }
    }
    let stdout = if cli.json { json } else { outcome.text };
    CliOutput { code, stdout, stderr }
}

fn describe(cmd: &Command) -> (&'static str, Value) {
    let opt = |p: &Option<PathBuf>| p.as_deref().map(path_str);
    match cmd {
        Command::Validate { file } => ("validate", json!({ "file": path_str(file) })),
        Command::Isogroup { file } => ("isogroup", json!({ "file": path_str(file) })),
        Command::Pisocount { file } => ("pisocount", json!({ "file": path_str(file) })),
        Command::Extend { file, vector, label, out } => {
            ("extend", json!({ "file": path_str(file), "vector": vector, "label": label, "out": opt(out) }))
        }
        Command::OrbitExtend { file, vector, out } => {
            ("orbit-extend", json!({ "file": path_str(file), "vector": vector, "out": opt(out) }))
        }
        Command::Build { stages, seed, mode, budget, out } => (
            "build",
            json!({ "stages": stages, "seed": seed, "mode": mode, "budget": budget, "out": opt(out) }),
        ),
        Command::Audit { file, n, den, bound, depth } => {
            ("audit", json!({ "file": path_str(file), "n": n, "den": den, "bound": bound, "depth": depth }))
        }
        Command::Toeplitz { stages, seed, always_insert, budget, out } => (
            "toeplitz",
            json!({ "stages": stages, "seed": seed, "always_insert": always_insert, "budget": budget, "out": opt(out) }),
        ),
        Command::Billiard { file, from, to, always_insert } => (
            "billiard",
            json!({ "file": path_str(file), "from": from, "to": to, "always_insert": always_insert }),
        ),
        Command::Globalize { file, budget, exhaustive_depth, node_limit, out } => (
            "globalize",
            json!({
                "file": path_str(file), "budget": budget, "exhaustive_depth": exhaustive_depth,
                "node_limit": node_limit, "out": opt(out),
            }),
        ),
        Command::VerifyCert { file } => ("verify-cert", json!({ "file": path_str(file) })),
        Command::Hall { n, element } => ("hall", json!({ "n": n, "element": element })),
    }
}

fn execute(cmd: &Command) -> Step<Outcome> {
    match cmd {
        Command::Validate { file } => cmd_validate(file),
        Command::Isogroup { file } => cmd_isogroup(file),
        Command::Pisocount { file } => cmd_pisocount(file),
        Command::Extend { file, vector, label, out } => cmd_extend(file, vector, label, out.as_deref()),
        Command::OrbitExtend { file, vector, out } => cmd_orbit_extend(file, vector, out.as_deref()),
        Command::Build { stages, seed, mode, budget, out } => cmd_build(stages, *seed, mode.as_deref(), *budget, out.as_deref()),
        Command::Audit { file, n, den, bound, depth } => cmd_audit(file, *n, *den, bound, *depth),
        Command::Toeplitz { stages, seed, always_insert, budget, out } => {
            let options = ToeplitzOptions { seed: *seed, always_insert: *always_insert, budget: *budget };
            cmd_toeplitz(stages, &options, out.as_deref())
        }
        Command::Billiard { file, from, to, always_insert } => cmd_billiard(file, from, to, *always_insert),
        Command::Globalize { file, budget, exhaustive_depth, node_limit, out } => {
            let config = GlobalizeConfig {
                budget: *budget,
                exhaustive_depth: *exhaustive_depth,
                node_limit: *node_limit,
                ..GlobalizeConfig::default()
            };
            cmd_globalize(file, &config, out.as_deref())
        }
        Command::VerifyCert { file } => cmd_verify_cert(file),
        Command::Hall { n, element } => cmd_hall(*n, element.as_deref()),
    }
}

fn cmd_validate(file: &Path) -> Step<Outcome> {
    let doc = lift(MatrixDocument::parse(&read(file)?))?;
    let rows = lift(doc.rows())?;
    let report = lift(validate_metric(&rows))?;
    if !report.valid {
        return Ok(invalid(&report));
    }
    lift(FiniteMetricSpace::new(doc.labels.clone(), rows))?;
    let n = doc.labels.len();
    Ok(Outcome::new(Status::Ok, json!({ "valid": true, "points": n, "validation": report }), format!("valid: {n}-point metric space\n")))
}

fn cmd_isogroup(file: &Path) -> Step<Outcome> {
    let space = load_space(file)?;
    let group = isometry_group(&space);
    let elements: Vec<&[usize]> = group.elements().iter().map(Permutation::images).collect();
    let mut text = format!("isometry group of order {}\n", group.order());
    for g in group.elements() {
        let _ = writeln!(text, "  {g}");
    }
    Ok(Outcome::new(Status::Ok, json!({ "points": space.len(), "order": group.order(), "elements": elements }), text))
}

fn cmd_pisocount(file: &Path) -> Step<Outcome> {
    let space = load_space(file)?;
    let all = partial_isometries(&space);
    let mut by_size = vec![0usize; space.len() + 1];
    for p in &all {
        by_size[p.len()] += 1;
    }
    let idempotents = all.iter().filter(|p| p.is_idempotent()).count();
    let text = format!("{} partial isometries ({} idempotent, {} total)\n", all.len(), idempotents, by_size[space.len()]);
    Ok(Outcome::new(
        Status::Ok,
        json!({ "points": space.len(), "count": all.len(), "idempotents": idempotents, "by_size": by_size }),
        text,
    ))
}

fn cmd_extend(file: &Path, vector: &str, label: &str, out: Option<&Path>) -> Step<Outcome> {
    let space = load_space(file)?;
    let values = lift(parse_list(vector))?;
    if let Some(v) = lift(check_admissible(&space, &values))? {
        return Ok(Outcome::new(
            Status::Failure,
            json!({ "admissible": false, "violation": v }),
            format!("not admissible: {v}\n"),
        ));
    }
    let extended = lift(realize(&space, &values, label))?;
    let doc = MatrixDocument::from_space(&extended);
    if let Some(p) = out {
        write(p, &doc.to_json())?;
    }
    let text = format!("admissible; extended to {} points\n", extended.len());
    Ok(Outcome::new(Status::Ok, json!({ "admissible": true, "points": extended.len(), "matrix": doc }), text))
}

fn cmd_orbit_extend(file: &Path, vector: &str, out: Option<&Path>) -> Step<Outcome> {
    let space = load_space(file)?;
    let values = lift(parse_list(vector))?;
    let group = isometry_group(&space);
    let ext = lift(orbit_extension(&space, &group, &values, None))?;
    let mut key_ok = true;
    for g in group.elements() {
        key_ok &= lift(key_inequality_check(&space, &values, g))?.holds;
    }
    let doc = MatrixDocument::from_space(&ext.extension);
    if let Some(p) = out {
        write(p, &doc.to_json())?;
    }
    let consistent = ext.table_matches() && ext.restricts_to_group() && key_ok;
    let reps: Vec<&[usize]> = ext.coset_reps.iter().map(Permutation::images).collect();
    let result = json!({
        "group_order": group.order(),
        "stabilizer_order": ext.stabilizer.order(),
        "new_points": ext.coset_reps.len(),
        "coset_representatives": reps,
        "key_inequality": key_ok,
        "table_matches": ext.table_matches(),
        "restricts_to_group": ext.restricts_to_group(),
        "matrix": doc,
    });
    let text = format!(
        "group order {}, stabilizer order {}, {} new points, extended to {} points\n",
        group.order(),
        ext.stabilizer.order(),
        ext.coset_reps.len(),
        ext.extension.len()
    );
    Ok(Outcome::new(if consistent { Status::Ok } else { Status::Failure }, result, text))
}

fn stage_audits(space: &FiniteMetricSpace, stages: &[Stage], completed: usize) -> Step<(Vec<Value>, bool)> {
    let mut all = true;
    let mut audits = Vec::new();
    for s in stages.iter().take(completed) {
        if s.n > space.len() {
            continue;
        }
        let r = lift(universality_audit(space, &s.audit_params(space.len())))?;
        all &= r.passed;
        audits.push(json!({ "stage": s.to_string(), "checked": r.checked, "passed": r.passed, "unrealized": r.unrealized }));
    }
    Ok((audits, all))
}

fn cmd_build(stages: &str, seed: Option<u64>, mode: Option<&str>, budget: Option<usize>, out: Option<&Path>) -> Step<Outcome> {
    let stages = lift(parse_stages(stages))?;
    let mode = match mode {
        Some(m) => lift(m.parse::<GrowthMode>())?,
        None if seed.is_some() => GrowthMode::Random,
        None => GrowthMode::Deterministic,
    };
    let mut schedule = match mode {
        GrowthMode::Deterministic => GrowthSchedule::deterministic(stages.clone()),
        GrowthMode::Random => GrowthSchedule::random(stages.clone(), seed.unwrap_or(0)),
    };
    if let Some(b) = budget {
        schedule = schedule.with_budget(b);
    }
    let outcome = lift(grow(&FiniteMetricSpace::empty(), &schedule))?;
    let (audits, passed) = stage_audits(&outcome.space, &stages, outcome.completed_stages)?;
    if let Some(p) = out {
        write(p, &MatrixDocument::from_space(&outcome.space).to_json())?;
    }
    let status = match (outcome.complete, passed) {
        (_, false) => Status::Failure,
        (false, _) => Status::BudgetExceeded,
        _ => Status::Ok,
    };
    let used_seed = (mode == GrowthMode::Random).then_some(schedule.seed);
    let result = json!({
        "mode": mode,
        "points": outcome.space.len(),
        "complete": outcome.complete,
        "completed_stages": outcome.completed_stages,
        "steps": outcome.steps,
        "audits": audits,
    });
    let text = format!(
        "{} points, {}/{} stages complete, audits {}\n",
        outcome.space.len(),
        outcome.completed_stages,
        stages.len(),
        if passed { "passed" } else { "FAILED" }
    );
    Ok(Outcome { status, result, text, seed: used_seed })
}

fn cmd_audit(file: &Path, n: usize, den: u64, bound: &str, depth: Option<usize>) -> Step<Outcome> {
    let space = load_space(file)?;
    let value_bound: Rational = lift(bound.parse())?;
    let params = AuditParams { n, den_bound: den, value_bound, depth: depth.unwrap_or(space.len()) };
    let report = lift(universality_audit(&space, &params))?;
    let text = if report.passed {
        format!("passed: {} admissible vectors realized\n", report.checked)
    } else {
        let mut t = format!("failed: {} of {} admissible vectors unrealized\n", report.unrealized.len(), report.checked);
        for v in &report.unrealized {
            let _ = writeln!(t, "  ({})", joined(v.values()));
        }
        t
    };
    let status = if report.passed { Status::Ok } else { Status::Failure };
    Ok(Outcome::new(status, json!(report), text))
}

fn cmd_toeplitz(stages: &str, options: &ToeplitzOptions, out: Option<&Path>) -> Step<Outcome> {
    let stages = lift(parse_stages(stages))?;
    let outcome = lift(build_toeplitz_universal(&stages, options))?;
    let space = outcome.metric.full_space();
    let (audits, passed) = stage_audits(&space, &stages, outcome.completed_stages)?;
    if let Some(p) = out {
        write(p, &MatrixDocument::from_space(&space).to_json())?;
    }
    let status = if !outcome.unrealized.is_empty() || !passed {
        Status::Failure
    } else if !outcome.complete || outcome.completed_stages < stages.len() {
        Status::BudgetExceeded
    } else {
        Status::Ok
    };
    let result = json!({
        "phi": strings(outcome.metric.values()),
        "points": outcome.metric.points(),
        "complete": outcome.complete,
        "completed_stages": outcome.completed_stages,
        "appended": outcome.appended,
        "fragments": outcome.fragments,
        "strategies": outcome.strategies,
        "unrealized": outcome.unrealized,
        "subadditive": outcome.metric.is_subadditive(),
        "audits": audits,
    });
    let text = format!(
        "phi = ({})\n{} points, {} fragments, {} unrealized, audits {}\n",
        joined(outcome.metric.values()),
        outcome.metric.points(),
        outcome.fragments,
        outcome.unrealized.len(),
        if passed { "passed" } else { "FAILED" }
    );
    Ok(Outcome { status, result, text, seed: options.seed })
}

fn cmd_billiard(file: &Path, from: &str, to: &str, always_insert: bool) -> Step<Outcome> {
    let space = load_space(file)?;
    let metric = match phi_of(&space) {
        PhiExtraction::Toeplitz(m) => m,
        PhiExtraction::NotToeplitz { reference, conflict } => {
            let msg = format!("matrix is not Toeplitz: d{:?} differs from d{:?}", conflict, reference);
            return Ok(Outcome::new(
                Status::Failure,
                json!({ "toeplitz": false, "reference": [reference.0, reference.1], "conflict": [conflict.0, conflict.1] }),
                msg + "\n",
            ));
        }
    };
    let x = lift(parse_list(from))?;
    let y = lift(parse_list(to))?;
    let chain = lift(billiard_chain_with(&metric, &x, &y, ChainOptions { always_insert }))?;
    let bound = ladder_bound(&metric, &x, &y);
    let vectors: Vec<Vec<String>> = chain.vectors.iter().map(|v| strings(v)).collect();
    let mut text = format!("{} vectors via {:?} (ladder bound {bound})\n", chain.len(), chain.strategy);
    for v in &chain.vectors {
        let _ = writeln!(text, "  ({})", joined(v));
    }
    let result = json!({
        "phi": strings(chain.metric.values()),
        "strategy": chain.strategy,
        "length": chain.len(),
        "ladder_bound": bound,
        "within_bound": chain.len() <= bound,
        "vectors": vectors,
    });
    Ok(Outcome::new(Status::Ok, result, text))
}

fn cmd_globalize(file: &Path, config: &GlobalizeConfig, out: Option<&Path>) -> Step<Outcome> {
    let space = load_space(file)?;
    let outcome = lift(globalize(&space, config))?;
    let report = verify_certificate(&outcome.certificate);
    if let Some(p) = out {
        write(p, &CertificateDocument::from_certificate(&outcome.certificate).to_json())?;
    }
    let result = json!({
        "base_points": space.len(),
        "added": outcome.added,
        "extension_points": outcome.certificate.extension.len(),
        "phase": outcome.phase,
        "candidates_tried": outcome.candidates_tried,
        "partial_isometries": outcome.certificate.table.len(),
        "verified": report.valid,
        "violations": report.violations,
    });
    let text = format!(
        "globalized {} points with {} added ({} partial isometries), certificate {}\n",
        space.len(),
        outcome.added,
        outcome.certificate.table.len(),
        if report.valid { "verified" } else { "REJECTED" }
    );
    Ok(Outcome::new(if report.valid { Status::Ok } else { Status::Failure }, result, text))
}

fn cmd_verify_cert(file: &Path) -> Step<Outcome> {
    let doc = lift(CertificateDocument::parse(&read(file)?))?;
    let cert = match lift(doc.to_certificate())? {
        Ok(c) => c,
        Err(r) => return Ok(invalid(&r)),
    };
    let report = verify_certificate(&cert);
    let mut text = format!(
        "certificate {}: {} partial isometries, {} subsets, {} pairs checked\n",
        if report.valid { "valid" } else { "INVALID" },
        report.partial_isometries,
        report.subsets_checked,
        report.pairs_checked
    );
    for v in &report.violations {
        let _ = writeln!(text, "  {}", serde_json::to_string(v).expect("serializable"));
    }
    Ok(Outcome::new(if report.valid { Status::Ok } else { Status::Failure }, json!(report), text))
}

fn cmd_hall(n: usize, element: Option<&str>) -> Step<Outcome> {
    if let Some(e) = element {
        let g = lift(Permutation::parse(e))?;
        if g.degree() != n {
            return Err(Outcome::error(&Error::Shape(format!("element has degree {}, expected {n}", g.degree()))));
        }
        let image = lift(left_regular_image(&g))?;
        let text = format!(
            "rank {} in S_{n}; image in S_{} has cycle type {:?}\n",
            lex_rank(&g),
            image.degree(),
            image.cycle_type()
        );
        let result = json!({
            "n": n,
            "rank": lex_rank(&g),
            "target_degree": image.degree(),
            "cycle_type": image.cycle_type(),
            "image": image.images(),
        });
        return Ok(Outcome::new(Status::Ok, result, text));
    }
    let stage = lift(hall_stage(n))?;
    let check = stage.verify_homomorphism();
    let text = format!(
        "S_{n} -> S_{}: {} pairs checked, {}\n",
        stage.target_degree(),
        check.pairs_checked,
        if check.passed() { "injective homomorphism" } else { "FAILED" }
    );
    let status = if check.passed() { Status::Ok } else { Status::Failure };
    Ok(Outcome::new(status, json!({ "target_degree": stage.target_degree(), "check": check }), text))
}
