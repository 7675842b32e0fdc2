//! Batch front-end behind the `pesym` binary.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, FromArgMatches, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::fields::{
    sample_points, DerivativeMode, EvalBox, FieldConfig, PhysConsts, Point4, StateField, ZeroHeating,
    DEFAULT_FD_STEP,
};
use crate::liealg::{compute_chain, isomorphism_check_with, Algebra};
use crate::reduction::{assemble_solution, rotating_family, ReductionConfig, BUILTIN_REDUCTIONS};
use crate::residual::{
    defect_scaling, extended_generators, residual_norms, sample_generators, Frame, VectorFieldSpec, DEFAULT_EPS,
    RESIDUAL_NAMES,
};
use crate::transforms::{
    derotation, invert, perturbed_symmetry_map, pushforward_field, GroupMap, Perturbation, SymmetryParams,
};

pub const OUT_DIR_ENV: &str = "PESYM_OUT_DIR";

#[derive(Parser, Debug)]
#[command(name = "pesym", version, about = "Symmetry checks for the primitive equations")]
pub struct Cli {
    /// Run the command described by a JSON file (`{"command": ..., ...}`)
    /// instead of a subcommand.
    #[arg(long)]
    pub config: Option<PathBuf>,

    /// JSON report path [default: $PESYM_OUT_DIR/<command>.json, else ./<command>.json]
    #[arg(long, global = true)]
    pub report: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Subcommand, Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Residual of a field over seeded sample points.
    Residual(ResidualArgs),
    /// Carry a solution between the rotating frame and the frame at rest.
    Derotate(DerotateArgs),
    /// Infinitesimal symmetry sweep over the algebra generators.
    SymmetryCheck(SymmetryCheckArgs),
    /// Compute the megaideal chain of the truncated algebra.
    Megaideals(MegaidealsArgs),
    /// Check that the redefined rotating-frame basis obeys the rest-frame table.
    Isomorphism(IsomorphismArgs),
    /// Build and verify an invariant solution from the reduction family.
    Reduce(ReduceArgs),
    /// Apply finite symmetry transformations to a solution.
    GroupVerify(GroupVerifyArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Residual(_) => "residual",
            Command::Derotate(_) => "derotate",
            Command::SymmetryCheck(_) => "symmetry-check",
            Command::Megaideals(_) => "megaideals",
            Command::Isomorphism(_) => "isomorphism",
            Command::Reduce(_) => "reduce",
            Command::GroupVerify(_) => "group-verify",
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModeArg {
    Exact,
    Fd,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    ToRotating,
    ToRest,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct ResidualArgs {
    /// Built-in field name or path to a field JSON file
    #[arg(long, default_value = "stratified")]
    pub field: String,
    /// Coriolis parameter [default: the field's own]
    #[arg(long)]
    pub f: Option<f64>,
    #[arg(long, default_value_t = 1000)]
    pub points: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    pub mode: ModeArg,
    /// Finite-difference step
    #[arg(long, default_value_t = DEFAULT_FD_STEP)]
    pub h: f64,
    /// Pass threshold [default: 1e-10 exact, 1e-6 fd]
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct DerotateArgs {
    #[arg(long, default_value_t = 1.0)]
    pub f: f64,
    #[arg(long, default_value = "stratified")]
    pub field: String,
    #[arg(long, value_enum, default_value_t = Direction::ToRotating)]
    pub direction: Direction,
    /// Also run a residual sweep on the transformed field
    #[arg(long)]
    pub verify: bool,
    #[arg(long, default_value_t = 1000)]
    pub points: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct SymmetryCheckArgs {
    #[arg(long, default_value = "subsiding-shear")]
    pub field: String,
    /// Use c_p = R (κ = 1)
    #[arg(long)]
    pub kappa_one: bool,
    /// Include R(λ) and Pp(ψ), expected to be symmetries only for κ = 1
    #[arg(long)]
    pub extended: bool,
    #[arg(long, default_value_t = 200)]
    pub points: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct MegaidealsArgs {
    /// Truncation degree N of the γ polynomials
    #[arg(long, default_value_t = 4)]
    pub degree: usize,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct IsomorphismArgs {
    #[arg(long, default_value_t = 1.0)]
    pub f: f64,
    #[arg(long, default_value_t = 100)]
    pub points: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Negative control: omit the −f̂J term of the redefinition
    #[arg(long)]
    pub drop_j_shift: bool,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct ReduceArgs {
    /// Built-in reduction name or path to a reduction JSON file
    #[arg(long, default_value = "rotating-shear")]
    pub spec: String,
    /// Coriolis parameter of the target frame
    #[arg(long, default_value_t = 0.0)]
    pub f: f64,
    /// Check the reduced system and the full residual
    #[arg(long)]
    pub verify: bool,
    /// Write t,x,y,p,u,v,omega,phi,T samples as CSV
    #[arg(long)]
    pub emit_samples: Option<PathBuf>,
    #[arg(long, default_value_t = 200)]
    pub points: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Side of the (t, p) grid for the reduced-system check
    #[arg(long, default_value_t = 50)]
    pub grid: usize,
    #[arg(long, default_value_t = 1e-7)]
    pub reduced_tol: f64,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct GroupVerifyArgs {
    /// JSON file with one parameter block; random blocks when absent
    #[arg(long)]
    pub params: Option<PathBuf>,
    #[arg(long, default_value = "subsiding-shear")]
    pub field: String,
    /// Number of random parameter blocks
    #[arg(long, default_value_t = 20)]
    pub trials: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 200)]
    pub points: usize,
    /// Detune one scale: `omega-scale <factor>` or `temp-scale <factor>`
    #[arg(long, num_args = 2, value_names = ["COMPONENT", "FACTOR"])]
    pub perturb: Vec<String>,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
}

/// Defaults come from the clap attributes so flags and config files agree.
fn clap_defaults<T: Args + FromArgMatches>() -> T {
    let cmd = T::augment_args(clap::Command::new("defaults"));
    T::from_arg_matches(&cmd.get_matches_from(["defaults"])).expect("argument defaults parse")
}

macro_rules! clap_default {
    ($($t:ty),*) => {$(
        impl Default for $t {
            fn default() -> Self {
                clap_defaults()
            }
        }
    )*};
}

clap_default!(
    ResidualArgs,
    DerotateArgs,
    SymmetryCheckArgs,
    MegaidealsArgs,
    IsomorphismArgs,
    ReduceArgs,
    GroupVerifyArgs
);

/// One pass/fail line.
#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub name: String,
    pub metric: f64,
    /// `"<"` when the metric must stay below the tolerance, `">"` when it
    /// must exceed it, `"=="` for exact comparisons.
    pub comparison: &'static str,
    pub tolerance: f64,
    pub pass: bool,
}

impl Verdict {
    pub fn below(name: impl Into<String>, metric: f64, tolerance: f64) -> Self {
        Self { name: name.into(), metric, comparison: "<", tolerance, pass: metric.is_finite() && metric < tolerance }
    }

    pub fn flag(name: impl Into<String>, ok: bool) -> Self {
        Self { name: name.into(), metric: f64::from(u8::from(ok)), comparison: "==", tolerance: 1.0, pass: ok }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub settings: Value,
    pub metrics: BTreeMap<String, f64>,
    pub verdicts: Vec<Verdict>,
    pub details: Value,
    pub wall_time: f64,
}

impl Report {
    fn new(cmd: &Command) -> Self {
        let mut settings = serde_json::to_value(cmd).unwrap_or(Value::Null);
        if let Value::Object(m) = &mut settings {
            m.remove("command");
        }
        Self {
            command: cmd.name().to_string(),
            settings,
            metrics: BTreeMap::new(),
            verdicts: Vec::new(),
            details: Value::Null,
            wall_time: 0.0,
        }
    }

    fn metric(&mut self, name: impl Into<String>, v: f64) {
        self.metrics.insert(name.into(), v);
    }

    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass) && self.metrics.values().all(|m| m.is_finite())
    }

    /// Aligned plain-text summary.
    pub fn table(&self) -> String {
        let mut out = format!("pesym {}\n", self.command);
        let width = self.metrics.keys().chain(self.verdicts.iter().map(|v| &v.name)).map(String::len).max().unwrap_or(0);
        for (k, v) in &self.metrics {
            out += &format!("  {k:<width$}  {v:.6e}\n");
        }
        for v in &self.verdicts {
            let tag = if v.pass { "PASS" } else { "FAIL" };
            out += &format!("  {tag} {:<width$}  {:.3e} {} {:.1e}\n", v.name, v.metric, v.comparison, v.tolerance);
        }
        out += &format!("  {} ({:.2} s)\n", if self.passed() { "all checks passed" } else { "verification failed" }, self.wall_time);
        out
    }
}

/// Exit code for an error: 2 for configuration problems, 3 for domain and
/// parameter errors.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Config(_) | Error::Json(_) | Error::Io(_) => 2,
        _ => 3,
    }
}

/// Resolves the command from `--config` or the subcommand.
pub fn resolve(cli: &Cli) -> Result<Command> {
    match (&cli.config, &cli.command) {
        (Some(_), Some(_)) => Err(Error::Config("give either --config or a subcommand, not both".into())),
        (None, None) => Err(Error::Config("no command given (see --help)".into())),
        (None, Some(c)) => Ok(c.clone()),
        (Some(path), None) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
            serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
        }
    }
}

pub fn report_path(cli_report: Option<&Path>, command: &str) -> PathBuf {
    if let Some(p) = cli_report {
        return p.to_path_buf();
    }
    let dir = std::env::var_os(OUT_DIR_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("."));
    dir.join(format!("{command}.json"))
}

/// Runs one command and returns its report (verification failures are
/// verdicts, not errors).
pub fn run(cmd: &Command) -> Result<Report> {
    let start = Instant::now();
    let mut report = Report::new(cmd);
    match cmd {
        Command::Residual(a) => run_residual(a, &mut report)?,
        Command::Derotate(a) => run_derotate(a, &mut report)?,
        Command::SymmetryCheck(a) => run_symmetry_check(a, &mut report)?,
        Command::Megaideals(a) => run_megaideals(a, &mut report)?,
        Command::Isomorphism(a) => run_isomorphism(a, &mut report)?,
        Command::Reduce(a) => run_reduce(a, &mut report)?,
        Command::GroupVerify(a) => run_group_verify(a, &mut report)?,
    }
    report.wall_time = start.elapsed().as_secs_f64();
    Ok(report)
}

/// Serializes the report; `wall_time` is the only run-dependent field.
pub fn write_report(report: &Report, path: &Path) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, serde_json::to_string_pretty(report)? + "\n")?;
    Ok(())
}

/// Entry point used by the binary; returns the process exit code.
pub fn main_with(cli: Cli) -> i32 {
    let outcome = resolve(&cli).and_then(|cmd| {
        let report = run(&cmd)?;
        let path = report_path(cli.report.as_deref(), cmd.name());
        write_report(&report, &path)?;
        print!("{}", report.table());
        println!("  report: {}", path.display());
        Ok(report.passed())
    });
    match outcome {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("pesym: {e}");
            exit_code(&e)
        }
    }
}

fn load_field(name: &str) -> Result<FieldConfig> {
    match FieldConfig::builtin(name) {
        Ok(cfg) => Ok(cfg),
        Err(_) if Path::new(name).exists() => {
            let text = std::fs::read_to_string(name)?;
            serde_json::from_str(&text).map_err(|e| Error::Config(format!("{name}: {e}")))
        }
        Err(e) => Err(e),
    }
}

fn load_reduction(name: &str) -> Result<ReductionConfig> {
    if BUILTIN_REDUCTIONS.contains(&name) {
        return ReductionConfig::builtin(name);
    }
    if !Path::new(name).exists() {
        return Err(Error::Config(format!(
            "`{name}` is neither a built-in reduction ({}) nor a readable file",
            BUILTIN_REDUCTIONS.join(", ")
        )));
    }
    let text = std::fs::read_to_string(name)?;
    serde_json::from_str(&text).map_err(|e| Error::Config(format!("{name}: {e}")))
}

fn points(seed: u64, n: usize) -> Result<Vec<Point4>> {
    sample_points(seed, n, &EvalBox::default())
}

fn record_residual(report: &mut Report, prefix: &str, field: &dyn StateField, consts: &PhysConsts, pts: &[Point4], mode: DerivativeMode) -> Result<f64> {
    let n = residual_norms(field, consts, &ZeroHeating, pts, mode)?;
    for (name, v) in RESIDUAL_NAMES.iter().zip(n.linf) {
        report.metric(format!("{prefix}linf_{name}"), v);
    }
    report.metric(format!("{prefix}linf"), n.max());
    Ok(n.max())
}

fn run_residual(a: &ResidualArgs, report: &mut Report) -> Result<()> {
    let cfg = load_field(&a.field)?;
    let f = a.f.or(cfg.intended_f()).unwrap_or(0.0);
    let consts = PhysConsts::default().with_f(f);
    let field = cfg.build(&consts)?;
    let (mode, default_tol) = match a.mode {
        ModeArg::Exact => (DerivativeMode::Exact, 1e-10),
        ModeArg::Fd => (DerivativeMode::FiniteDifference { h: a.h }, 1e-6),
    };
    let pts = points(a.seed, a.points)?;
    let linf = record_residual(report, "", field.as_ref(), &consts, &pts, mode)?;
    report.verdicts.push(Verdict::below("residual", linf, a.tol.unwrap_or(default_tol)));
    Ok(())
}

fn roundtrip_error(map: &GroupMap, field: &dyn StateField, pts: &[Point4]) -> f64 {
    pts.iter()
        .map(|pt| {
            let s = field.eval(*pt).to_array();
            let z = [pt.t, pt.x, pt.y, pt.p, s[0], s[1], s[2], s[3], s[4]];
            let back = map.inverse(map.forward(z));
            z.iter().zip(back).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()))
        })
        .fold(0.0, f64::max)
}

fn run_derotate(a: &DerotateArgs, report: &mut Report) -> Result<()> {
    let cfg = load_field(&a.field)?;
    let (source_f, target_f, map) = match a.direction {
        Direction::ToRotating => (0.0, a.f, invert(&derotation(a.f))),
        Direction::ToRest => (a.f, 0.0, derotation(a.f)),
    };
    let field = cfg.build(&PhysConsts::default().with_f(source_f))?;
    let pts = points(a.seed, a.points)?;
    let rt = roundtrip_error(&map, field.as_ref(), &pts);
    report.metric("roundtrip_error", rt);
    report.verdicts.push(Verdict::below("roundtrip", rt, 1e-12));
    if a.verify {
        let consts = PhysConsts::default();
        let source = record_residual(report, "source_", field.as_ref(), &consts.with_f(source_f), &pts, DerivativeMode::Exact)?;
        let moved = pushforward_field(&map, field);
        let target = record_residual(report, "target_", &moved, &consts.with_f(target_f), &pts, DerivativeMode::Exact)?;
        report.verdicts.push(Verdict::below("source_residual", source, a.tol));
        report.verdicts.push(Verdict::below("target_residual", target, a.tol));
    }
    Ok(())
}

fn run_symmetry_check(a: &SymmetryCheckArgs, report: &mut Report) -> Result<()> {
    let cfg = load_field(&a.field)?;
    let f = cfg.intended_f().unwrap_or(0.0);
    let mut consts = if a.kappa_one { PhysConsts::cp_equals_r(f, 1.0)? } else { PhysConsts::default().with_f(f) };
    consts.f = f;
    let field = cfg.build(&consts)?;
    let pts = points(a.seed, a.points)?;
    let frame = if f == 0.0 { Frame::Rest } else { Frame::Rotating { f } };
    let mut gens: Vec<(String, crate::residual::Generator, bool)> =
        sample_generators().into_iter().map(|(n, g)| (n, g, true)).collect();
    if a.extended {
        if f != 0.0 {
            return Err(Error::InvalidParameter(format!(
                "R(λ) and Pp(ψ) are realized in the rest frame; `{}` is a rotating-frame field",
                a.field
            )));
        }
        gens.extend(extended_generators().into_iter().map(|(n, g)| (n, g, a.kappa_one)));
    }
    let mut details = serde_json::Map::new();
    for (name, g, expect_symmetry) in gens {
        let vf = VectorFieldSpec::new(frame, &consts).with(1.0, g);
        let sc = defect_scaling(&vf, field.as_ref(), &consts, &DEFAULT_EPS, &pts)?;
        report.metric(format!("{name}.max_defect"), sc.defects.iter().fold(0.0, |m: f64, d| m.max(*d)));
        let verdict = if expect_symmetry { "symmetry" } else { "not a symmetry" };
        report.verdicts.push(Verdict::flag(format!("{name} ({verdict})"), sc.is_symmetry() == expect_symmetry));
        details.insert(name, serde_json::to_value(&sc)?);
    }
    report.details = Value::Object(details);
    Ok(())
}

fn run_megaideals(a: &MegaidealsArgs, report: &mut Report) -> Result<()> {
    if a.degree < 4 {
        return Err(Error::InvalidParameter(format!("megaideal chain needs --degree ≥ 4 (got {})", a.degree)));
    }
    let alg = Algebra::from_consts(a.degree, &PhysConsts::default())?;
    let chain = compute_chain(&alg);
    report.metric("algebra_dim", alg.dim() as f64);
    report.metric("entries", chain.entries.len() as f64);
    for (i, e) in chain.entries.iter().enumerate() {
        report.verdicts.push(Verdict::flag(format!("{:>2} {}", i + 1, e.label), e.low_degree_match));
    }
    let series = |s: &[crate::liealg::Subspace]| s.iter().map(|x| x.dim()).collect::<Vec<_>>();
    report.details = json!({
        "degree": a.degree,
        "check_degree": chain.check_degree,
        "entries": chain.summaries(),
        "z_series_dims": series(&chain.z_series),
        "x_series_dims": series(&chain.x_series),
    });
    Ok(())
}

fn run_isomorphism(a: &IsomorphismArgs, report: &mut Report) -> Result<()> {
    let r = isomorphism_check_with(&PhysConsts::default().with_f(a.f), a.points, a.seed, a.drop_j_shift)?;
    report.metric("max_defect", r.max_defect);
    report.metric("pairs", r.pairs as f64);
    report.verdicts.push(Verdict::below("commutator_defect", r.max_defect, a.tol));
    report.details = serde_json::to_value(&r)?;
    Ok(())
}

fn run_reduce(a: &ReduceArgs, report: &mut Report) -> Result<()> {
    let consts = PhysConsts::default();
    let spec = load_reduction(&a.spec)?.build(&consts, &EvalBox::default())?;
    let comp = spec.check_compatibility(400);
    report.metric("compatibility_defect", comp.max_defect);
    report.metric("min_delta", comp.min_delta);
    let field: Arc<dyn StateField> =
        if a.f == 0.0 { Arc::new(assemble_solution(&spec)) } else { Arc::new(rotating_family(&spec, a.f)) };
    let pts = points(a.seed, a.points)?;
    if a.verify {
        let reduced = spec.reduced_check(a.grid);
        report.metric("reduced_linf", reduced);
        report.verdicts.push(Verdict::below("reduced_system", reduced, a.reduced_tol));
        let full = record_residual(report, "", field.as_ref(), &consts.with_f(a.f), &pts, DerivativeMode::Exact)?;
        report.verdicts.push(Verdict::below("full_residual", full, a.tol));
    }
    if let Some(path) = &a.emit_samples {
        let mut csv = String::from("t,x,y,p,u,v,omega,phi,T\n");
        for pt in &pts {
            let s = field.eval(*pt).to_array();
            let row: Vec<String> = [pt.t, pt.x, pt.y, pt.p].iter().chain(&s).map(|v| format!("{v:.17e}")).collect();
            csv += &row.join(",");
            csv.push('\n');
        }
        std::fs::write(path, csv)?;
        report.metric("samples", pts.len() as f64);
    }
    Ok(())
}

fn parse_perturbation(words: &[String]) -> Result<Perturbation> {
    let mut p = Perturbation::default();
    match words {
        [] => {}
        [component, factor] => {
            let v: f64 = factor.parse().map_err(|_| Error::Config(format!("perturbation factor `{factor}` is not a number")))?;
            match component.as_str() {
                "omega-scale" => p.omega_scale = v,
                "temp-scale" => p.temp_scale = v,
                other => return Err(Error::Config(format!("unknown perturbation `{other}` (omega-scale, temp-scale)"))),
            }
        }
        _ => return Err(Error::Config("--perturb takes a component and a factor".into())),
    }
    Ok(p)
}

fn run_group_verify(a: &GroupVerifyArgs, report: &mut Report) -> Result<()> {
    let perturb = parse_perturbation(&a.perturb)?;
    let consts = PhysConsts::default();
    let cfg = load_field(&a.field)?;
    if cfg.intended_f() != Some(0.0) {
        return Err(Error::InvalidParameter(format!("group-verify needs a rest-frame solution (got `{}`)", a.field)));
    }
    let field = cfg.build(&consts)?;
    let blocks = match &a.params {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
            vec![serde_json::from_str::<SymmetryParams>(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?]
        }
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
            (0..a.trials).map(|_| SymmetryParams::random(&mut rng)).collect()
        }
    };
    let pts = points(a.seed, a.points)?;
    let mut worst = 0.0f64;
    for (i, params) in blocks.iter().enumerate() {
        let map = perturbed_symmetry_map(params, &consts, perturb)?;
        let moved = pushforward_field(&map, field.clone());
        let n = residual_norms(&moved, &consts, &ZeroHeating, &pts, DerivativeMode::Exact)?;
        report.metric(format!("trial_{i:02}.linf"), n.max());
        worst = worst.max(n.max());
    }
    report.metric("linf", worst);
    report.verdicts.push(Verdict::below("transformed_residual", worst, a.tol));
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_flags() {
        let d = ResidualArgs::default();
        assert_eq!((d.field.as_str(), d.points, d.seed, d.mode), ("stratified", 1000, 42, ModeArg::Exact));
        let cfg: Command = serde_json::from_str(r#"{"command": "residual", "points": 10}"#).unwrap();
        match cfg {
            Command::Residual(r) => assert_eq!((r.points, r.h), (10, DEFAULT_FD_STEP)),
            other => panic!("{other:?}"),
        }
        assert!(serde_json::from_str::<Command>(r#"{"command": "residual", "pionts": 10}"#).is_err());
    }

    #[test]
    fn perturbation_words() {
        let p = parse_perturbation(&["omega-scale".into(), "1.01".into()]).unwrap();
        assert_eq!((p.omega_scale, p.temp_scale), (1.01, 1.0));
        assert!(parse_perturbation(&["pressure".into(), "2".into()]).is_err());
    }

    #[test]
    fn residual_report_passes() {
        let cmd = Command::Residual(ResidualArgs { points: 50, ..Default::default() });
        let r = run(&cmd).unwrap();
        assert!(r.passed(), "{}", r.table());
        assert_eq!(r.settings["points"], 50);
    }

    #[test]
    fn error_codes() {
        assert_eq!(exit_code(&Error::Config("x".into())), 2);
        assert_eq!(exit_code(&Error::Domain("x".into())), 3);
        let cmd = Command::Residual(ResidualArgs { field: "no-such-field".into(), ..Default::default() });
        assert_eq!(exit_code(&run(&cmd).unwrap_err()), 2);
    }
}
