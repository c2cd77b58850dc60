//! `homcolor`: check presentations, run constructions and summarize reports.
//!
//! Exit codes: 0 pass, 1 identity failure, 2 precondition failure,
//! 3 parse or validation error.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use homcolor::constructions::{self, DerivedType};
use homcolor::format::{self, Document};
use homcolor::{
    check_bimodule, check_gi_identities, check_identity, regular_bundle, run_suite, AlgebraPresentation,
    BimoduleKind, CheckOptions, Error, IdentityId, Matrix, MatchedPairData, RoleMap, Scalar, StructureKind,
    SuiteReport, Verdict,
};

#[derive(Parser)]
#[command(name = "homcolor", version, about = "Exact checker for graded Hom-algebra presentations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a structure suite, identity, bimodule or matched-pair check.
    Check(CheckArgs),
    /// Build a new presentation from existing ones.
    Construct(ConstructArgs),
    /// Summarize JSON reports as a table.
    Report(ReportArgs),
}

#[derive(Args)]
struct Common {
    /// Canonical-to-actual role renaming, e.g. `dot=diamond`.
    #[arg(long, value_name = "MAP")]
    role_map: Option<String>,
    /// Parameter substitution, e.g. `lambda1=3/2` (repeatable, or comma separated).
    #[arg(long, value_name = "NAME=VALUE")]
    subst: Vec<String>,
    /// Worker threads for the tuple scan.
    #[arg(long)]
    workers: Option<usize>,
    /// Largest dimension for arity-4 identities.
    #[arg(long, value_name = "DIM")]
    max_arity4_dim: Option<usize>,
    /// Include elapsed times in reports.
    #[arg(long)]
    timings: bool,
    /// Write the JSON report here instead of stdout.
    #[arg(long, value_name = "PATH")]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    input: PathBuf,
    /// Structure kind, bimodule kind, identity tag, `gi` or `multiplicative`.
    #[arg(long)]
    kind: String,
    #[command(flatten)]
    common: Common,
}

#[derive(Clone, Copy, ValueEnum)]
enum Construction {
    Commutator,
    Twist,
    Derived,
    Semidirect,
    Double,
    Tensor,
    Quotient,
    Derivation,
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(value_enum)]
    name: Construction,
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    /// Source role (commutator).
    #[arg(long, default_value = "dot")]
    from: String,
    /// Target role (commutator, derivation).
    #[arg(long)]
    to: Option<String>,
    /// Derived algebra type, 1 or 2.
    #[arg(long = "type", default_value = "1")]
    ty: String,
    /// Derived algebra index.
    #[arg(long, default_value_t = 1)]
    n: u32,
    /// Module kind for semidirect sums and doubles.
    #[arg(long)]
    kind: Option<String>,
    /// Matrix as JSON rows, or a path to a JSON file (twist, derivation).
    #[arg(long, value_name = "MATRIX")]
    map: Option<String>,
    /// Comma-separated basis names spanning the ideal (quotient).
    #[arg(long, value_name = "NAMES")]
    ideal: Option<String>,
    /// Skip precondition checks.
    #[arg(long)]
    force: bool,
    /// Run this suite on the result.
    #[arg(long, value_name = "KIND")]
    verify: Option<String>,
    /// Output path for the constructed presentation.
    #[arg(short = 'o', long = "output", value_name = "PATH")]
    output: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct ReportArgs {
    reports: Vec<PathBuf>,
    /// Fixture manifest used to flag expected discrepancies.
    #[arg(long, value_name = "PATH")]
    manifest: Option<PathBuf>,
}

/// Errors carry their exit code.
struct Failure {
    code: u8,
    message: String,
    report: Option<Value>,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Precondition { reason, report } => Failure {
                code: 2,
                message: format!("precondition failed: {reason}"),
                report: Some(report.to_json(false)),
            },
            other => Failure {
                code: 3,
                message: other.to_string(),
                report: None,
            },
        }
    }
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure {
        code: 3,
        message: message.into(),
        report: None,
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Check(args) => cmd_check(&args),
        Command::Construct(args) => cmd_construct(&args),
        Command::Report(args) => cmd_report(&args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            if let Some(r) = f.report {
                eprint!("{}", format::to_pretty(&r));
            }
            ExitCode::from(f.code)
        }
    }
}

fn exit_code(v: Verdict) -> u8 {
    match v {
        Verdict::Pass => 0,
        Verdict::Fail => 1,
        Verdict::Precondition => 2,
    }
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

fn write(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| invalid(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn in_file(path: &Path) -> impl Fn(Error) -> Failure + '_ {
    move |e| {
        let f = Failure::from(e);
        Failure {
            message: format!("{}: {}", path.display(), f.message),
            ..f
        }
    }
}

impl Common {
    fn roles(&self) -> CliResult<RoleMap> {
        Ok(RoleMap::parse(self.role_map.as_deref().unwrap_or(""))?)
    }

    fn options(&self) -> CheckOptions {
        let mut opts = CheckOptions::default();
        if let Some(w) = self.workers {
            opts = opts.with_workers(w);
        }
        if let Some(d) = self.max_arity4_dim {
            opts = opts.with_max_arity4_dim(d);
        }
        opts
    }

    fn substitutions(&self, a: &AlgebraPresentation) -> CliResult<BTreeMap<String, Scalar>> {
        let mut out = BTreeMap::new();
        for part in self.subst.iter().flat_map(|s| s.split(',')).map(str::trim) {
            if part.is_empty() {
                continue;
            }
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| invalid(format!("substitution `{part}` lacks `=`")))?;
            let value = a
                .scalars()
                .parse(v.trim())
                .map_err(|e| invalid(format!("substitution `{part}`: {e}")))?;
            out.insert(k.trim().to_string(), value);
        }
        Ok(out)
    }

    fn load(&self, path: &Path) -> CliResult<Document> {
        let doc = format::parse_document(&read(path)?).map_err(in_file(path))?;
        let values = self.substitutions(&doc.algebra)?;
        if values.is_empty() {
            return Ok(doc);
        }
        Ok(Document {
            algebra: doc.algebra.substitute(&values).map_err(in_file(path))?,
            module: doc.module.map(|m| m.substitute(&values)),
        })
    }

    fn load_pair(&self, path: &Path, text: &str) -> CliResult<MatchedPairData> {
        let p = format::parse_matched_pair(text).map_err(in_file(path))?;
        let values = self.substitutions(p.a())?;
        if values.is_empty() {
            return Ok(p);
        }
        p.substitute(&values).map_err(in_file(path))
    }

    fn emit(&self, mut report: Value, extra: &[(&str, Value)]) -> CliResult<()> {
        if let Value::Object(obj) = &mut report {
            for (k, v) in extra {
                obj.insert(k.to_string(), v.clone());
            }
        }
        write(self.report.as_deref(), &format::to_pretty(&report))
    }
}

fn is_matched_pair(text: &str) -> bool {
    serde_json::from_str::<Value>(text)
        .map(|v| v.get("a").is_some() && v.get("b").is_some())
        .unwrap_or(false)
}

enum CheckKind {
    Structure(StructureKind),
    Bimodule(BimoduleKind),
    Identity(IdentityId),
    Gi,
    Multiplicative,
}

fn check_kind(s: &str) -> CliResult<CheckKind> {
    let low = s.to_ascii_lowercase();
    if low == "gi" {
        return Ok(CheckKind::Gi);
    }
    if low == "multiplicative" {
        return Ok(CheckKind::Multiplicative);
    }
    if let Ok(k) = s.parse() {
        return Ok(CheckKind::Structure(k));
    }
    if let Ok(k) = s.parse() {
        return Ok(CheckKind::Bimodule(k));
    }
    if let Ok(id) = s.parse() {
        return Ok(CheckKind::Identity(id));
    }
    Err(invalid(format!("unknown check kind `{s}`")))
}

fn cmd_check(args: &CheckArgs) -> CliResult<u8> {
    let c = &args.common;
    let kind = check_kind(&args.kind)?;
    let roles = c.roles()?;
    let opts = c.options();
    let text = read(&args.input)?;
    let path = &args.input;
    let report: SuiteReport = if is_matched_pair(&text) {
        let CheckKind::Bimodule(k) = kind else {
            return Err(invalid("matched-pair documents take a bimodule kind"));
        };
        let p = c.load_pair(path, &text)?;
        constructions::matched_pair_conditions(&p, k, &roles, &opts).map_err(in_file(path))?
    } else {
        let doc = c.load(path)?;
        let a = &doc.algebra;
        match kind {
            CheckKind::Structure(k) => run_suite(a, k, &roles, &opts),
            CheckKind::Gi => check_gi_identities(a, &roles, &opts),
            CheckKind::Multiplicative => constructions::multiplicativity_report(a),
            CheckKind::Identity(id) => {
                let actual: Vec<&str> = id.default_roles().iter().map(|r| roles.resolve(r)).collect();
                check_identity(a, id, &actual, &opts).map(|r| SuiteReport::single(id.tag(), r))
            }
            CheckKind::Bimodule(k) => {
                let m = match &doc.module {
                    Some(m) => m.clone(),
                    None => regular_bundle(a, k, &roles).map_err(in_file(path))?,
                };
                check_bimodule(a, &m, k, &roles, &opts)
            }
        }
        .map_err(in_file(path))?
    };
    let verdict = report.verdict();
    c.emit(
        report.to_json(c.timings),
        &[("input", json!(path.display().to_string()))],
    )?;
    if c.report.is_some() {
        print!("{report}");
    }
    Ok(exit_code(verdict))
}

fn matrix_arg(text: &str, a: &AlgebraPresentation) -> CliResult<Matrix> {
    let body = if Path::new(text).is_file() {
        read(Path::new(text))?
    } else {
        text.to_string()
    };
    let v: Value = serde_json::from_str(&body).map_err(|e| invalid(format!("matrix: {e}")))?;
    let rows = v
        .as_array()
        .ok_or_else(|| invalid("matrix: expected an array of rows"))?
        .iter()
        .enumerate()
        .map(|(r, row)| {
            row.as_array()
                .ok_or_else(|| invalid(format!("matrix[{r}]: expected an array")))?
                .iter()
                .enumerate()
                .map(|(c, x)| {
                    let s = match x {
                        Value::String(s) => s.clone(),
                        Value::Number(n) => n.to_string(),
                        _ => return Err(invalid(format!("matrix[{r}][{c}]: expected a scalar"))),
                    };
                    a.scalars()
                        .parse(&s)
                        .map_err(|e| invalid(format!("matrix[{r}][{c}]: {e}")))
                })
                .collect::<CliResult<Vec<_>>>()
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(Matrix::from_rows(rows)?)
}

fn inputs(args: &ConstructArgs, count: usize) -> CliResult<&[PathBuf]> {
    if args.inputs.len() != count {
        return Err(invalid(format!(
            "this construction takes {count} input(s), got {}",
            args.inputs.len()
        )));
    }
    Ok(&args.inputs)
}

fn required<'a>(value: &'a Option<String>, flag: &str) -> CliResult<&'a str> {
    value.as_deref().ok_or_else(|| invalid(format!("missing --{flag}")))
}

fn cmd_construct(args: &ConstructArgs) -> CliResult<u8> {
    let c = &args.common;
    let roles = c.roles()?;
    let opts = c.options();
    let verify = args
        .verify
        .as_deref()
        .map(|k| k.parse::<StructureKind>())
        .transpose()?;
    let bimodule_kind = || -> CliResult<BimoduleKind> { Ok(required(&args.kind, "kind")?.parse()?) };
    let mut verify = verify;
    if args.force && matches!(args.name, Construction::Semidirect | Construction::Double) && verify.is_none() {
        verify = Some(constructions::structure_for(bimodule_kind()?));
    }
    let out = match args.name {
        Construction::Commutator => {
            let p = &inputs(args, 1)?[0];
            let a = c.load(p)?.algebra;
            let to = args.to.as_deref().unwrap_or("bracket");
            constructions::commutator_bracket(&a, &args.from, to).map_err(in_file(p))?
        }
        Construction::Twist => {
            let p = &inputs(args, 1)?[0];
            let a = c.load(p)?.algebra;
            let m = matrix_arg(required(&args.map, "map")?, &a)?;
            constructions::yau_twist(&a, &m, args.force)?
        }
        Construction::Derived => {
            let p = &inputs(args, 1)?[0];
            let a = c.load(p)?.algebra;
            let ty: DerivedType = args.ty.parse()?;
            constructions::derived_algebra(&a, ty, args.n, args.force)?
        }
        Construction::Semidirect => {
            let p = &inputs(args, 1)?[0];
            let doc = c.load(p)?;
            let kind = bimodule_kind()?;
            let m = match doc.module {
                Some(m) => m,
                None => regular_bundle(&doc.algebra, kind, &roles).map_err(in_file(p))?,
            };
            constructions::semidirect_sum(&doc.algebra, &m, kind, &roles, &opts, args.force)?
        }
        Construction::Double => {
            let p = &inputs(args, 1)?[0];
            let pair = c.load_pair(p, &read(p)?)?;
            constructions::matched_pair_double(&pair, bimodule_kind()?, &roles, &opts, args.force)?
        }
        Construction::Tensor => {
            let ps = inputs(args, 2)?;
            let a1 = c.load(&ps[0])?.algebra;
            let a2 = c.load(&ps[1])?.algebra;
            constructions::tensor_product(&a1, &a2, &roles, &opts, args.force)?
        }
        Construction::Quotient => {
            let p = &inputs(args, 1)?[0];
            let a = c.load(p)?.algebra;
            let ideal = required(&args.ideal, "ideal")?
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|n| {
                    a.space()
                        .index_of(n)
                        .ok_or_else(|| invalid(format!("unknown basis element `{n}`")))
                })
                .collect::<CliResult<Vec<_>>>()?;
            constructions::quotient(&a, &ideal, args.force)?
        }
        Construction::Derivation => {
            let p = &inputs(args, 1)?[0];
            let a = c.load(p)?.algebra;
            let d = matrix_arg(required(&args.map, "map")?, &a)?;
            let to = args.to.as_deref().unwrap_or("diamond");
            constructions::novikov_from_derivation(&a, &d, to, &roles, &opts, args.force)?
        }
    };
    write(
        args.output.as_deref(),
        &format::to_pretty(&format::presentation_to_value(&out)),
    )?;
    let Some(kind) = verify else {
        return Ok(0);
    };
    let report = run_suite(&out, kind, &roles, &opts)?;
    let verdict = report.verdict();
    if c.report.is_some() {
        c.emit(report.to_json(c.timings), &[])?;
    } else {
        eprint!("{report}");
    }
    Ok(exit_code(verdict))
}

struct Row {
    input: String,
    suite: String,
    verdict: Verdict,
    note: String,
}

fn load_manifest(path: &Path) -> CliResult<BTreeMap<(String, String), String>> {
    let v: Value = serde_json::from_str(&read(path)?)
        .map_err(|e| invalid(format!("{}: {e}", path.display())))?;
    let mut out = BTreeMap::new();
    for entry in v.get("fixtures").and_then(Value::as_array).into_iter().flatten() {
        let get = |k: &str| entry.get(k).and_then(Value::as_str).unwrap_or("").to_string();
        let file = Path::new(&get("file"))
            .file_name()
            .map(|f| f.to_string_lossy().into_owned())
            .unwrap_or_default();
        let kind = get("kind").to_ascii_uppercase().replace('-', "_");
        out.insert((file, kind), get("expected"));
    }
    Ok(out)
}

fn cmd_report(args: &ReportArgs) -> CliResult<u8> {
    let manifest = match &args.manifest {
        Some(p) => load_manifest(p)?,
        None => BTreeMap::new(),
    };
    let mut rows = Vec::new();
    for path in &args.reports {
        let bad = |m: &str| invalid(format!("{}: {m}", path.display()));
        let v: Value = serde_json::from_str(&read(path)?).map_err(|e| bad(&e.to_string()))?;
        let suite = v.get("suite").and_then(Value::as_str).ok_or_else(|| bad("missing `suite`"))?;
        let verdict = v
            .get("verdict")
            .and_then(Value::as_str)
            .and_then(Verdict::parse)
            .ok_or_else(|| bad("missing or unknown `verdict`"))?;
        let input = v
            .get("input")
            .and_then(Value::as_str)
            .map(str::to_string)
            .unwrap_or_else(|| path.display().to_string());
        let file = Path::new(&input)
            .file_name()
            .map(|f| f.to_string_lossy().into_owned())
            .unwrap_or_default();
        let mut note = String::new();
        if manifest.get(&(file, suite.to_string())).map(String::as_str) == Some("discrepancy") {
            note.push_str("discrepancy");
        }
        if let Some(first) = v
            .get("checks")
            .and_then(Value::as_array)
            .and_then(|cs| cs.iter().find(|c| c.get("verdict").and_then(Value::as_str) != Some("pass")))
        {
            let label = first.get("check").and_then(Value::as_str).unwrap_or("?");
            let at = first
                .get("witness")
                .and_then(|w| w.get("tuple"))
                .and_then(Value::as_array)
                .map(|t| {
                    t.iter()
                        .filter_map(Value::as_str)
                        .collect::<Vec<_>>()
                        .join(", ")
                })
                .unwrap_or_default();
            if !note.is_empty() {
                note.push_str("; ");
            }
            note.push_str(&format!("{label} ({at})"));
        }
        rows.push(Row {
            input,
            suite: suite.to_string(),
            verdict,
            note,
        });
    }
    let w_in = rows.iter().map(|r| r.input.len()).max().unwrap_or(0).max(5);
    let w_su = rows.iter().map(|r| r.suite.len()).max().unwrap_or(0).max(5);
    println!("{:<w_in$}  {:<w_su$}  {:<12}  note", "input", "suite", "verdict");
    for r in &rows {
        println!(
            "{:<w_in$}  {:<w_su$}  {:<12}  {}",
            r.input,
            r.suite,
            r.verdict.as_str().to_uppercase(),
            r.note
        );
    }
    let worst = rows.iter().map(|r| r.verdict).max().unwrap_or(Verdict::Pass);
    Ok(exit_code(worst))
}
