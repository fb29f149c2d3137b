//! Command-line front end: builds the exotic generator, runs the cross-positivity
//! and Lie checks, integrates the semigroup, emits the indecomposability certificate
//! and reports derivation dimensions.
//!
//! Reports go to stdout as JSON, a one-line summary goes to stderr.
//! Exit codes: 0 pass, 1 check failed, 2 usage or input error.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use conelab::decompose::{attempt_decomposition_lp, decomposition_pairs, indecomposability_certificate, replay_certificate, Verdict};
use conelab::exotic::{semigroup_orbit, verify_cross_positive, ExoticGenerator, VerifyMode};
use conelab::linmap::{check_lie_condition, check_sv_condition, derivation_dimension_report, ConeMap, DerivationSpace};
use conelab::lp::{LpMode, LpOutcome};
use conelab::sampling::{random_cone_element, rng_for};
use conelab::{Algebra, Error, VERSION};

#[derive(Parser, Debug)]
#[command(name = "conelab", version, about = "Cross-positive maps on symmetric cones of hermitian matrices")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Target {
    /// Matrix size.
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    /// R, C, H or O.
    #[arg(long, default_value = "R", value_parser = parse_algebra)]
    pub algebra: Algebra,
}

#[derive(Args, Debug, Clone)]
pub struct Sampling {
    #[arg(long, default_value_t = 10_000)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = conelab::DEFAULT_EPS)]
    pub eps: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DecomposeMode {
    Certificate,
    Lp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LpArith {
    Exact,
    Float,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Emit the generator B as a map JSON.
    Build {
        #[command(flatten)]
        target: Target,
        /// Write the map here instead of embedding it in the report.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cross-positivity of B, or of a map read from --map (sampled only).
    Verify {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value = "sampled", value_parser = parse_verify_mode)]
        mode: VerifyMode,
        #[command(flatten)]
        sampling: Sampling,
        #[arg(long)]
        map: Option<PathBuf>,
    },
    /// Minimum eigenvalues along e^{tB}X for random cone elements X.
    Exp {
        #[command(flatten)]
        target: Target,
        /// Comma separated, nonnegative and increasing.
        #[arg(long, default_value = "0,0.1,1,10", value_delimiter = ',')]
        t_grid: Vec<f64>,
        #[command(flatten)]
        sampling: Sampling,
        #[arg(long)]
        map: Option<PathBuf>,
    },
    /// Checks Re(v*A(uu*)v) = 0 on orthogonal pairs (B, or --map).
    LieCheck {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        sampling: Sampling,
        #[arg(long)]
        map: Option<PathBuf>,
    },
    /// Indecomposability certificate, or the LP over sampled pairs.
    Decompose {
        #[command(flatten)]
        target: Target,
        #[arg(long, value_enum, default_value_t = DecomposeMode::Certificate)]
        mode: DecomposeMode,
        /// Random pairs added after the structured family.
        #[arg(long, default_value_t = 1000)]
        pairs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = LpArith::Float)]
        lp: LpArith,
    },
    /// Dimension of a derivation algebra: O, H3O, or H<n><alg> such as H3R.
    Dims {
        #[arg(long, value_parser = parse_space)]
        space: DerivationSpace,
    },
}

fn parse_algebra(s: &str) -> Result<Algebra, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_verify_mode(s: &str) -> Result<VerifyMode, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_space(s: &str) -> Result<DerivationSpace, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// The resolved configuration embedded in every report.
#[derive(Clone, Debug, Default, Serialize)]
pub struct RunConfig {
    pub subcommand: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub algebra: Option<Algebra>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_grid: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub space: Option<String>,
}

/// Everything a run produces.
#[derive(Clone, Debug)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Usage(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) | Error::Shape(_) | Error::Domain(_) | Error::Precondition(_) | Error::Unsupported(_) | Error::AlgebraMismatch(..) => Failure::Usage(e.to_string()),
            Error::Numerical(_) => Failure::Check(e.to_string()),
        }
    }
}

struct Done {
    report: Value,
    summary: String,
    pass: bool,
}

fn target_config(sub: &str, t: &Target) -> RunConfig {
    RunConfig { subcommand: sub.into(), n: Some(t.n), algebra: Some(t.algebra), ..Default::default() }
}

fn with_sampling(mut c: RunConfig, s: &Sampling) -> RunConfig {
    c.samples = Some(s.samples);
    c.seed = Some(s.seed);
    c.eps = Some(s.eps);
    c
}

fn validate_exotic(t: &Target) -> Result<(), Failure> {
    if t.n < 3 {
        return Err(Failure::Usage("n must be at least 3".into()));
    }
    if t.algebra == Algebra::O && t.n != 3 {
        return Err(Failure::Usage("algebra O requires n = 3".into()));
    }
    Ok(())
}

fn validate_sampling(s: &Sampling) -> Result<(), Failure> {
    if !(s.eps > 0.0) {
        return Err(Failure::Usage("eps must be positive".into()));
    }
    Ok(())
}

fn read_map(path: &PathBuf) -> Result<ConeMap, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("malformed JSON in {}: {e}", path.display())))?;
    // accept either a bare map or a build report
    let m = v.get("map").unwrap_or(&v);
    ConeMap::from_json(m).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn map_or_b(map: &Option<PathBuf>, t: &Target) -> Result<(ConeMap, String), Failure> {
    match map {
        Some(p) => {
            let m = read_map(p)?;
            if m.alg != t.algebra || m.n != t.n {
                return Err(Failure::Usage(format!("map is over H_{}({}), flags say H_{}({})", m.n, m.alg, t.n, t.algebra)));
            }
            Ok((m, p.display().to_string()))
        }
        None => {
            validate_exotic(t)?;
            Ok((ExoticGenerator::build(t.n, t.algebra)?.as_cone_map(), "B".into()))
        }
    }
}

fn execute_command(cmd: &Command) -> Result<(RunConfig, Done), Failure> {
    match cmd {
        Command::Build { target, out } => {
            validate_exotic(target)?;
            let mut cfg = target_config("build", target);
            cfg.output = out.as_ref().map(|p| p.display().to_string());
            let b = ExoticGenerator::build(target.n, target.algebra)?;
            let map = b.as_cone_map().to_json();
            let mut report = json!({ "generator": b.to_json() });
            if let Some(p) = out {
                let text = serde_json::to_string_pretty(&map).expect("serializable");
                std::fs::write(p, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", p.display())))?;
            } else {
                report["map"] = map;
            }
            let summary = format!("built B on H_{}({}) with p = {}, q = {}", b.n, b.algebra, b.p::<f64>(), b.q::<f64>());
            Ok((cfg, Done { report, summary, pass: true }))
        }
        Command::Verify { target, mode, sampling, map } => {
            validate_sampling(sampling)?;
            let mut cfg = with_sampling(target_config("verify", target), sampling);
            cfg.mode = Some(format!("{mode:?}").to_lowercase());
            if let Some(p) = map {
                if *mode != VerifyMode::Sampled {
                    return Err(Failure::Usage("exact verification applies to B only".into()));
                }
                let (m, name) = map_or_b(&Some(p.clone()), target)?;
                cfg.input = Some(name);
                let r = check_sv_condition(&m, sampling.samples, sampling.seed, sampling.eps)?;
                let summary = format!("{}: min Re(v*A(uu*)v) = {:e} over {} pairs", verdict(r.pass), r.min_value, r.samples);
                return Ok((cfg, Done { pass: r.pass, report: r.to_json(), summary }));
            }
            validate_exotic(target)?;
            let b = ExoticGenerator::build(target.n, target.algebra)?;
            let r = verify_cross_positive(&b, *mode, sampling.samples, sampling.seed, sampling.eps)?;
            let summary = format!("{}: B on H_{}({}), {:?} mode, min value {:e}", verdict(r.pass), r.n, r.algebra, r.mode, r.min_value);
            Ok((cfg, Done { pass: r.pass, report: serde_json::to_value(&r).expect("serializable"), summary }))
        }
        Command::Exp { target, t_grid, sampling, map } => {
            validate_sampling(sampling)?;
            let mut cfg = with_sampling(target_config("exp", target), sampling);
            cfg.t_grid = Some(t_grid.clone());
            let (m, name) = map_or_b(map, target)?;
            cfg.input = Some(name);
            let mut rows = Vec::new();
            let mut worst = f64::INFINITY;
            for i in 0..sampling.samples {
                let mut rng = rng_for(sampling.seed, i);
                let x0 = random_cone_element(target.algebra, target.n, &mut rng);
                let orbit = semigroup_orbit(&m, &x0, t_grid)?;
                for p in &orbit {
                    worst = worst.min(p.min_eigenvalue);
                }
                rows.push(json!({ "index": i, "orbit": orbit }));
            }
            let pass = worst >= -sampling.eps;
            let report = json!({ "check": "semigroup_orbit", "min_eigenvalue": worst, "orbits": rows, "pass": pass });
            let summary = format!("{}: min eigenvalue of e^(tA)X is {:e} over {} starts", verdict(pass), worst, sampling.samples);
            Ok((cfg, Done { report, summary, pass }))
        }
        Command::LieCheck { target, sampling, map } => {
            validate_sampling(sampling)?;
            let mut cfg = with_sampling(target_config("lie-check", target), sampling);
            let (m, name) = map_or_b(map, target)?;
            cfg.input = Some(name);
            let r = check_lie_condition(&m, sampling.samples, sampling.seed, sampling.eps)?;
            let summary = format!("{}: max |Re(v*A(uu*)v)| = {:e} over {} pairs", verdict(r.pass), r.max_abs_value, r.samples);
            Ok((cfg, Done { pass: r.pass, report: r.to_json(), summary }))
        }
        Command::Decompose { target, mode, pairs, seed, lp } => {
            let mut cfg = target_config("decompose", target);
            cfg.mode = Some(format!("{mode:?}").to_lowercase());
            match mode {
                DecomposeMode::Certificate => {
                    if target.n != 2 {
                        validate_exotic(target)?;
                    }
                    let cert = indecomposability_certificate(target.n, target.algebra)?;
                    let replay = replay_certificate(&cert)?;
                    let mut report = cert.to_json();
                    report["replay"] = serde_json::to_value(&replay).expect("serializable");
                    let pass = replay.ok() && cert.verdict == Verdict::Indecomposable;
                    let word = match cert.verdict {
                        Verdict::Indecomposable => "INDECOMPOSABLE",
                        Verdict::Inconclusive => "INCONCLUSIVE",
                    };
                    let summary = format!("{word}: residual {} on H_{}({}), {} steps, replay {}", cert.residual, cert.n, cert.algebra, cert.steps.len(), if replay.ok() { "ok" } else { "FAILED" });
                    Ok((cfg, Done { report, summary, pass }))
                }
                DecomposeMode::Lp => {
                    validate_exotic(target)?;
                    cfg.samples = Some(*pairs as u64);
                    cfg.seed = Some(*seed);
                    cfg.mode = Some(format!("lp-{}", format!("{lp:?}").to_lowercase()));
                    let b = ExoticGenerator::build(target.n, target.algebra)?;
                    let ps = decomposition_pairs(target.n, target.algebra, *pairs, *seed)?;
                    let mode = match lp {
                        LpArith::Exact => LpMode::Exact,
                        LpArith::Float => LpMode::Float,
                    };
                    let r = attempt_decomposition_lp(&b, &ps, mode)?;
                    let pass = matches!(r.outcome, LpOutcome::Infeasible { .. }) && r.replay_ok;
                    let summary = if pass {
                        format!("INFEASIBLE: Farkas witness over {} constraints replays exactly", r.constraints)
                    } else {
                        format!("FEASIBLE: some H satisfies all {} sampled constraints; no refutation", r.constraints)
                    };
                    Ok((cfg, Done { report: r.to_json(target.n, target.algebra), summary, pass }))
                }
            }
        }
        Command::Dims { space } => {
            let cfg = RunConfig { subcommand: "dims".into(), space: Some(space.to_string()), ..Default::default() };
            let r = derivation_dimension_report(*space)?;
            let pass = r.exact().is_some();
            let summary = match r.exact() {
                Some(d) => format!("dim Der({space}) = {d}"),
                None => format!("dim Der({space}) in [{}, {}]", r.lower, r.upper),
            };
            let mut report = serde_json::to_value(&r).expect("serializable");
            report["dimension"] = json!(r.exact());
            Ok((cfg, Done { report, summary, pass }))
        }
    }
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

fn configure_threads() -> Result<(), Failure> {
    if let Ok(v) = std::env::var("CONELAB_THREADS") {
        let k: usize = v.trim().parse().map_err(|_| Failure::Usage(format!("CONELAB_THREADS must be a positive integer, got {v:?}")))?;
        if k == 0 {
            return Err(Failure::Usage("CONELAB_THREADS must be positive".into()));
        }
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(k).build_global();
    }
    Ok(())
}

/// Parses and runs, returning what would be printed.
pub fn execute<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return Output { code, stdout: String::new(), stderr: e.render().to_string() };
        }
    };
    if let Err(Failure::Usage(m) | Failure::Check(m)) = configure_threads() {
        return Output { code: 2, stdout: String::new(), stderr: format!("error: {m}\n") };
    }
    match execute_command(&cli.command) {
        Ok((cfg, done)) => {
            let mut report = json!({ "version": VERSION, "config": cfg, "pass": done.pass });
            report["report"] = done.report;
            Output {
                code: if done.pass { 0 } else { 1 },
                stdout: serde_json::to_string_pretty(&report).expect("serializable") + "\n",
                stderr: done.summary + "\n",
            }
        }
        Err(Failure::Usage(m)) => Output { code: 2, stdout: String::new(), stderr: format!("error: {m}\n") },
        Err(Failure::Check(m)) => {
            let report = json!({ "version": VERSION, "pass": false, "error": m });
            Output { code: 1, stdout: serde_json::to_string_pretty(&report).expect("serializable") + "\n", stderr: format!("FAIL: {m}\n") }
        }
    }
}

/// Entry point used by the binary.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let out = execute(args);
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    out.code
}
