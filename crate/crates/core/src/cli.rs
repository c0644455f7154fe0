//! Command-line front end. Every command prints a `ReportDocument` unless a
//! raw format (csv, svg, ascii) is requested.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;
use serde_json::{json, Value};

use crate::arith::{binom, fmt_rational};
use crate::asymptotics::asymptotics;
use crate::chain::Family;
use crate::diagram::{render_staircase, DiagramFormat, DiagramSpec};
use crate::error::{Error, Result};
use crate::lemmas::{check_lemma, Lemma};
use crate::oracle::{
    build_conflict_graph, certify_theorem, enumerate_maximum_sets, max_independent_set, Claim,
    OracleBudget, VerdictStatus,
};
use crate::report::{ReportDocument, Status, Timing};
use crate::weights::{
    assign_weights_fast_d1, assign_weights_fast_d2, assign_weights_generic_with, positivity_report,
    sperner_table, verify_induced_with, GenericOptions, InducedMode, PointBudget, TieOrder,
    WeightTable,
};

pub const BUDGET_ENV: &str = "CHAINFORGE_BUDGET";

#[derive(Parser, Debug)]
#[command(
    name = "chainforge",
    version,
    about = "Weighted chain decompositions of {0..d}^n"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: Global,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct Global {
    /// Output format; json wraps the result in a report document.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads for parallel verification.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Cap on (d+1)^n for the oracle and point-level checks.
    #[arg(long, global = true)]
    pub budget: Option<u128>,
    /// Required for --budget values above the default.
    #[arg(long, global = true)]
    pub acknowledge_budget: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Svg,
    Ascii,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Generic,
    Fast,
    Sperner,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyArg {
    Basic,
    AntiBasic,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Family {
        match f {
            FamilyArg::Basic => Family::Basic,
            FamilyArg::AntiBasic => Family::AntiBasic,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    Type,
    Point,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ClaimArg {
    Theorem,
    Conjecture,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiagramKind {
    Types,
    Footprint,
    KeyRecursion,
    StepOne,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct TableArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long, default_value_t = 2)]
    pub d: u32,
    #[arg(long)]
    pub k: u32,
    #[arg(long, value_enum, default_value_t = Method::Generic)]
    pub method: Method,
    #[arg(long, value_enum, default_value_t = FamilyArg::Basic)]
    pub family: FamilyArg,
    /// Shuffle ties within each distance class using --seed.
    #[arg(long)]
    pub shuffle: bool,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct InducedArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long, default_value_t = 2)]
    pub d: u32,
    /// Omit to check every k in 1..=n.
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long, value_enum, default_value_t = ModeArg::Type)]
    pub mode: ModeArg,
    #[arg(long, value_enum, default_value_t = Method::Generic)]
    pub method: Method,
    #[arg(long, value_enum, default_value_t = FamilyArg::Basic)]
    pub family: FamilyArg,
    #[arg(long)]
    pub shuffle: bool,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct LemmaArgs {
    #[arg(long)]
    pub n: u32,
    /// Omit to check every k in 1..=n.
    #[arg(long)]
    pub k: Option<u32>,
    /// A lemma name or "all".
    #[arg(long, default_value = "all")]
    pub lemma: String,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct OracleArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long, default_value_t = 2)]
    pub d: u32,
    #[arg(long)]
    pub k: u32,
    /// Also list every maximum independent set.
    #[arg(long)]
    pub enumerate: bool,
    #[arg(long, default_value_t = 4096)]
    pub cap: usize,
    #[arg(long)]
    pub node_limit: Option<u64>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct CertifyArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long, default_value_t = 2)]
    pub d: u32,
    #[arg(long)]
    pub k: u32,
    #[arg(long, value_enum, default_value_t = ClaimArg::Theorem)]
    pub claim: ClaimArg,
    #[arg(long)]
    pub node_limit: Option<u64>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct ConjectureArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long, default_value_t = 3)]
    pub d: u32,
    #[arg(long)]
    pub k: u32,
    #[arg(long)]
    pub node_limit: Option<u64>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct SpernerArgs {
    #[arg(long)]
    pub n: u32,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct DiagramArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long, value_enum, default_value_t = DiagramKind::Types)]
    pub kind: DiagramKind,
    #[arg(long)]
    pub a: Option<u32>,
    #[arg(long)]
    pub c: Option<u32>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct AsymptoticsArgs {
    #[arg(long, default_value_t = 2)]
    pub d: u32,
    #[arg(long)]
    pub k: u32,
    /// Comma-separated list of n.
    #[arg(long, value_delimiter = ',', required = true)]
    pub n: Vec<u32>,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Compute a weight table.
    Weights(TableArgs),
    /// Check that a weight table induces weight 1 everywhere.
    VerifyInduced(InducedArgs),
    /// Check the closed-form identities.
    VerifyLemmas(LemmaArgs),
    /// Exact maximum independent set of the conflict graph.
    Oracle(OracleArgs),
    /// Compare the predicted maximum set against the oracle.
    Certify(CertifyArgs),
    /// Weighted chains for the Boolean lattice.
    Sperner(SpernerArgs),
    /// Render a staircase diagram.
    Diagram(DiagramArgs),
    /// Density of the residue class against 1/(dk+1).
    Asymptotics(AsymptoticsArgs),
    /// Certify the residue-class guess for d >= 3 on small cases.
    Conjecture(ConjectureArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Weights(_) => "weights",
            Command::VerifyInduced(_) => "verify-induced",
            Command::VerifyLemmas(_) => "verify-lemmas",
            Command::Oracle(_) => "oracle",
            Command::Certify(_) => "certify",
            Command::Sperner(_) => "sperner",
            Command::Diagram(_) => "diagram",
            Command::Asymptotics(_) => "asymptotics",
            Command::Conjecture(_) => "conjecture",
        }
    }

    fn parameters(&self) -> Value {
        let v = match self {
            Command::Weights(a) => serde_json::to_value(a),
            Command::VerifyInduced(a) => serde_json::to_value(a),
            Command::VerifyLemmas(a) => serde_json::to_value(a),
            Command::Oracle(a) => serde_json::to_value(a),
            Command::Certify(a) => serde_json::to_value(a),
            Command::Sperner(a) => serde_json::to_value(a),
            Command::Diagram(a) => serde_json::to_value(a),
            Command::Asymptotics(a) => serde_json::to_value(a),
            Command::Conjecture(a) => serde_json::to_value(a),
        };
        v.unwrap_or(Value::Null)
    }
}

/// What a command produced before formatting.
enum Output {
    Report {
        status: Status,
        payload: Value,
        csv: Option<String>,
    },
    Raw {
        status: Status,
        bytes: Vec<u8>,
    },
}

struct Ctx {
    global: Global,
    /// Cap on (d+1)^n overriding the module defaults.
    budget: Option<u128>,
    /// Set when the cap came from the environment, which counts as explicit.
    from_env: bool,
}

impl Ctx {
    fn cap(&self, default: u128) -> Result<u128> {
        match self.budget {
            None => Ok(default),
            Some(b) if b > default && !self.global.acknowledge_budget && !self.from_env => {
                Err(Error::BudgetExceeded {
                    what: format!(
                        "--budget above the default {default} without --acknowledge-budget"
                    ),
                    needed: b,
                    budget: default,
                })
            }
            Some(b) => Ok(b),
        }
    }

    fn oracle_budget(&self, node_limit: Option<u64>) -> Result<OracleBudget> {
        let default = OracleBudget::default();
        Ok(OracleBudget {
            node_limit,
            max_vertices: self.cap(default.max_vertices)?,
        })
    }

    fn point_budget(&self, d: u32) -> Result<PointBudget> {
        let mut b = PointBudget::default_for(d);
        b.max_points = self.cap(b.max_points)?;
        Ok(b)
    }

    fn tie_order(&self, shuffle: bool) -> TieOrder {
        if shuffle {
            TieOrder::Shuffled(self.global.seed)
        } else {
            TieOrder::Canonical
        }
    }
}

/// The explicit cap, from --budget or else the environment.
fn resolve_budget(global: &Global) -> Result<(Option<u128>, bool)> {
    if let Some(b) = global.budget {
        return Ok((Some(b), false));
    }
    match std::env::var(BUDGET_ENV) {
        Ok(s) => s
            .trim()
            .parse::<u128>()
            .map(|b| (Some(b), true))
            .map_err(|_| Error::Parse(format!("{BUDGET_ENV}={s:?} is not an integer"))),
        Err(_) => Ok((None, false)),
    }
}

fn build_table(
    ctx: &Ctx,
    n: u32,
    d: u32,
    k: u32,
    method: Method,
    family: FamilyArg,
    shuffle: bool,
) -> Result<WeightTable> {
    match method {
        Method::Generic => assign_weights_generic_with(
            n,
            d,
            k,
            GenericOptions {
                family: family.into(),
                tie_order: ctx.tie_order(shuffle),
            },
        ),
        Method::Fast => {
            if family != FamilyArg::Basic {
                return Err(Error::UnsupportedVariant(
                    "fast path covers the basic family only".into(),
                ));
            }
            match d {
                1 => assign_weights_fast_d1(n, k),
                2 => assign_weights_fast_d2(n, k),
                _ => Err(Error::UnsupportedVariant(format!("no fast path for d={d}"))),
            }
        }
        Method::Sperner => sperner_table(n),
    }
}

fn csv_rows<S: Serialize>(rows: &[S]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| Error::Parse(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
}

fn k_range(n: u32, k: Option<u32>) -> Vec<u32> {
    match k {
        Some(k) => vec![k],
        None => (1..=n.max(1)).collect(),
    }
}

fn cmd_weights(ctx: &Ctx, a: &TableArgs) -> Result<Output> {
    let table = build_table(ctx, a.n, a.d, a.k, a.method, a.family, a.shuffle)?;
    let mut payload = table.to_json();
    let negative: Vec<Value> = positivity_report(&table)
        .into_iter()
        .filter(|(_, w)| w < &BigRational::from_integer(BigInt::from(0)))
        .map(|(o, w)| json!({ "owner": o.to_json(), "W": fmt_rational(&w) }))
        .collect();
    payload["negative"] = Value::Array(negative);
    Ok(Output::Report {
        status: Status::Pass,
        payload,
        csv: Some(table.to_csv()?),
    })
}

#[derive(Serialize)]
struct InducedRow {
    n: u32,
    d: u32,
    k: u32,
    mode: InducedMode,
    checked: usize,
    deviations: usize,
    max_abs_deviation: String,
    status: Status,
}

fn cmd_verify_induced(ctx: &Ctx, a: &InducedArgs) -> Result<Output> {
    let modes: &[InducedMode] = match a.mode {
        ModeArg::Type => &[InducedMode::Type],
        ModeArg::Point => &[InducedMode::Point],
        ModeArg::Both => &[InducedMode::Type, InducedMode::Point],
    };
    let mut status = Status::Pass;
    let mut reports = Vec::new();
    let mut rows = Vec::new();
    for k in k_range(a.n, a.k) {
        let table = build_table(ctx, a.n, a.d, k, a.method, a.family, a.shuffle)?;
        for &mode in modes {
            let r = verify_induced_with(&table, mode, ctx.point_budget(a.d)?)?;
            let s = Status::from_bool(r.passed());
            status = status.combine(s);
            rows.push(InducedRow {
                n: r.n,
                d: r.d,
                k: r.k,
                mode: r.mode,
                checked: r.checked,
                deviations: r.deviations.len(),
                max_abs_deviation: fmt_rational(&r.max_abs_deviation),
                status: s,
            });
            let mut v = serde_json::to_value(&r).map_err(|e| Error::Parse(e.to_string()))?;
            v["status"] = json!(s);
            reports.push(v);
        }
    }
    Ok(Output::Report {
        status,
        payload: Value::Array(reports),
        csv: Some(csv_rows(&rows)?),
    })
}

#[derive(Serialize)]
struct LemmaRow {
    lemma: String,
    n: u32,
    k: u32,
    status: Status,
    checked: u64,
    failures: u64,
}

fn cmd_verify_lemmas(a: &LemmaArgs) -> Result<Output> {
    let lemmas: Vec<Lemma> = if a.lemma.eq_ignore_ascii_case("all") {
        Lemma::ALL.to_vec()
    } else {
        vec![a.lemma.parse()?]
    };
    let mut status = Status::Pass;
    let mut reports = Vec::new();
    for k in k_range(a.n, a.k) {
        for &l in &lemmas {
            let r = check_lemma(l, a.n, k)?;
            status = status.combine(r.status);
            reports.push(r);
        }
    }
    let rows: Vec<LemmaRow> = reports
        .iter()
        .map(|r| LemmaRow {
            lemma: r.lemma.clone(),
            n: r.n,
            k: r.k,
            status: r.status,
            checked: r.checked,
            failures: r.failures,
        })
        .collect();
    let payload = serde_json::to_value(&reports).map_err(|e| Error::Parse(e.to_string()))?;
    Ok(Output::Report {
        status,
        payload,
        csv: Some(csv_rows(&rows)?),
    })
}

fn cmd_oracle(ctx: &Ctx, a: &OracleArgs) -> Result<Output> {
    let g = build_conflict_graph(a.n, a.d, a.k, &ctx.oracle_budget(a.node_limit)?)?;
    let mis = max_independent_set(&g, a.node_limit);
    let mut status = if mis.certified {
        Status::Pass
    } else {
        Status::Incomplete
    };
    let mut payload = json!({
        "n": a.n,
        "d": a.d,
        "k": a.k,
        "vertices": g.vertex_count(),
        "edges": g.edge_count(),
        "mis": mis,
    });
    if a.enumerate {
        let sets = enumerate_maximum_sets(&g, a.cap)?;
        if sets.truncated {
            status = status.combine(Status::Incomplete);
        }
        payload["maximum_sets"] =
            serde_json::to_value(&sets).map_err(|e| Error::Parse(e.to_string()))?;
    }
    Ok(Output::Report {
        status,
        payload,
        csv: None,
    })
}

fn verdict_output(v: crate::oracle::Verdict) -> Result<Output> {
    let status = match v.status {
        VerdictStatus::Pass => Status::Pass,
        VerdictStatus::Fail => Status::Fail,
        VerdictStatus::Incomplete => Status::Incomplete,
    };
    let payload = serde_json::to_value(&v).map_err(|e| Error::Parse(e.to_string()))?;
    Ok(Output::Report {
        status,
        payload,
        csv: None,
    })
}

fn cmd_certify(ctx: &Ctx, a: &CertifyArgs) -> Result<Output> {
    let claim = match a.claim {
        ClaimArg::Theorem => Claim::Theorem,
        ClaimArg::Conjecture => Claim::Conjecture,
    };
    verdict_output(certify_theorem(
        a.n,
        a.d,
        a.k,
        claim,
        &ctx.oracle_budget(a.node_limit)?,
    )?)
}

fn cmd_conjecture(ctx: &Ctx, a: &ConjectureArgs) -> Result<Output> {
    verdict_output(certify_theorem(
        a.n,
        a.d,
        a.k,
        Claim::Conjecture,
        &ctx.oracle_budget(a.node_limit)?,
    )?)
}

fn cmd_sperner(ctx: &Ctx, a: &SpernerArgs) -> Result<Output> {
    let n = a.n;
    let table = sperner_table(n)?;
    let total = table.total_weight();
    let middle = BigRational::from_integer(binom(u64::from(n), u64::from(n / 2)));
    let induced = verify_induced_with(&table, InducedMode::Type, ctx.point_budget(1)?)?;
    let generic = assign_weights_generic_with(n, 1, n.max(1), GenericOptions::default())?;
    let agrees = generic.entries() == table.entries();
    let mut status = Status::from_bool(total == middle && induced.passed() && agrees);
    let mut payload = json!({
        "table": table.to_json(),
        "total_weight": fmt_rational(&total),
        "middle_binomial": fmt_rational(&middle),
        "induced": induced,
        "generic_agrees": agrees,
    });
    let budget = ctx.oracle_budget(None)?;
    if n >= 1 && 2u128.pow(n) <= budget.max_vertices {
        let g = build_conflict_graph(n, 1, n, &budget)?;
        let mis = max_independent_set(&g, None);
        status = status.combine(Status::from_bool(
            BigRational::from_integer(BigInt::from(mis.size)) == middle,
        ));
        payload["oracle_mis"] = json!(mis.size);
    }
    Ok(Output::Report {
        status,
        payload,
        csv: Some(table.to_csv()?),
    })
}

fn cmd_diagram(a: &DiagramArgs, format: DiagramFormat) -> Result<DiagramSpec> {
    let need = |v: Option<u32>, name: &str| {
        v.ok_or_else(|| Error::Parse(format!("--{name} is required for this kind")))
    };
    match a.kind {
        DiagramKind::Types => {
            let mut spec = DiagramSpec::types(a.n, format);
            spec.k = a.k;
            Ok(spec)
        }
        DiagramKind::Footprint => DiagramSpec::footprint(
            a.n,
            need(a.k, "k")?,
            need(a.a, "a")?,
            need(a.c, "c")?,
            format,
        ),
        DiagramKind::KeyRecursion => DiagramSpec::key_recursion(
            a.n,
            need(a.k, "k")?,
            need(a.a, "a")?,
            need(a.c, "c")?,
            format,
        ),
        DiagramKind::StepOne => DiagramSpec::step_one(
            a.n,
            need(a.k, "k")?,
            need(a.a, "a")?,
            need(a.c, "c")?,
            format,
        ),
    }
}

fn cmd_asymptotics(a: &AsymptoticsArgs) -> Result<Output> {
    let rows = asymptotics(a.d, a.k, &a.n)?;
    let payload = serde_json::to_value(&rows).map_err(|e| Error::Parse(e.to_string()))?;
    Ok(Output::Report {
        status: Status::Pass,
        payload,
        csv: Some(csv_rows(&rows)?),
    })
}

fn dispatch(ctx: &Ctx, command: &Command) -> Result<Output> {
    let format = ctx.global.format.unwrap_or(match command {
        Command::Diagram(_) => Format::Svg,
        _ => Format::Json,
    });
    let out = match command {
        Command::Weights(a) => cmd_weights(ctx, a)?,
        Command::VerifyInduced(a) => cmd_verify_induced(ctx, a)?,
        Command::VerifyLemmas(a) => cmd_verify_lemmas(a)?,
        Command::Oracle(a) => cmd_oracle(ctx, a)?,
        Command::Certify(a) => cmd_certify(ctx, a)?,
        Command::Conjecture(a) => cmd_conjecture(ctx, a)?,
        Command::Sperner(a) => cmd_sperner(ctx, a)?,
        Command::Asymptotics(a) => cmd_asymptotics(a)?,
        Command::Diagram(a) => {
            let df = if format == Format::Ascii {
                DiagramFormat::Ascii
            } else {
                DiagramFormat::Svg
            };
            let spec = cmd_diagram(a, df)?;
            let bytes = render_staircase(&spec)?;
            if format == Format::Json {
                let payload = json!({
                    "spec": spec,
                    "rendered": String::from_utf8_lossy(&bytes),
                });
                Output::Report {
                    status: Status::Pass,
                    payload,
                    csv: None,
                }
            } else if format == Format::Csv {
                return Err(Error::Parse("diagram supports json, svg and ascii".into()));
            } else {
                Output::Raw {
                    status: Status::Pass,
                    bytes,
                }
            }
        }
    };
    match (&out, format) {
        (Output::Report { .. }, Format::Json) | (Output::Raw { .. }, _) => Ok(out),
        (
            Output::Report {
                status,
                csv: Some(csv),
                ..
            },
            Format::Csv,
        ) => Ok(Output::Raw {
            status: *status,
            bytes: csv.clone().into_bytes(),
        }),
        _ => Err(Error::Parse(format!(
            "format {format:?} is not available for {}",
            command.name()
        ))),
    }
}

fn exit_code(status: Status) -> i32 {
    match status {
        Status::Pass => 0,
        Status::Fail => 1,
        Status::Incomplete => 2,
    }
}

/// Parses `argv` (including the program name), runs the command and writes
/// its output to `--out` or `stdout`. Returns the process exit code.
pub fn run_with<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                stdout.write_all(text.as_bytes())
            } else {
                stderr.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let fail = |stderr: &mut dyn Write, e: &dyn std::fmt::Display| {
        let _ = writeln!(stderr, "error: {e}");
        2
    };
    let (budget, from_env) = match resolve_budget(&cli.global) {
        Ok(b) => b,
        Err(e) => return fail(stderr, &e),
    };
    let ctx = Ctx {
        global: cli.global.clone(),
        budget,
        from_env,
    };
    let start = Instant::now();
    let result = match cli.global.jobs {
        Some(j) => match rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build()
        {
            Ok(pool) => pool.install(|| dispatch(&ctx, &cli.command)),
            Err(e) => return fail(stderr, &e),
        },
        None => dispatch(&ctx, &cli.command),
    };
    let (status, bytes) = match result {
        Ok(Output::Raw { status, bytes }) => (status, bytes),
        Ok(Output::Report {
            status, payload, ..
        }) => {
            let doc = ReportDocument {
                command: cli.command.name().to_string(),
                parameters: cli.command.parameters(),
                status,
                payload,
                timing: Timing {
                    elapsed_ms: start.elapsed().as_millis(),
                },
            };
            let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
            s.push('\n');
            (status, s.into_bytes())
        }
        Err(e) => return fail(stderr, &e),
    };
    let written = match &cli.global.out {
        Some(path) => std::fs::write(path, &bytes),
        None => stdout.write_all(&bytes),
    };
    if let Err(e) = written {
        return fail(stderr, &e);
    }
    exit_code(status)
}

pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(
        argv,
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    )
}
