use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use contingency::capacity::Guard;
use contingency::contingency::{double_coset_count, enumerate_cm};
use contingency::metamatrix::{
    det_metamatrix, total_count, total_positivity, verify_factorizations, MetaMatrix, Method, TotalCountReport,
};
use contingency::partitions::enumerate_ordered_partitions;
use contingency::sheaf::{constant_sheaf, PosetRepresentation, Stratification};
use contingency::strata::{anodyne_classes, classify, meet_check, AnodyneScope, PointConfiguration};
use contingency::topology::{alternating_sum, f_vector, verify_sphericity};
use contingency::{CmFilter, CmPoset, Error, OrderedPartition};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "contingency", version, about = "Exact verification of contingency matrix combinatorics")]
struct Cli {
    /// Omit elapsed_ms so output is byte-identical across runs.
    #[arg(long, global = true)]
    stable: bool,
    /// Render an indented text view instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,
    /// Worker threads for parallel verification.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List contingency matrices, or ordered partitions with --partitions.
    Enumerate {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        p: Option<usize>,
        #[arg(long)]
        q: Option<usize>,
        /// Row margin, e.g. 2,1.
        #[arg(long)]
        alpha: Option<String>,
        /// Column margin, e.g. 1,2.
        #[arg(long)]
        beta: Option<String>,
        /// Ordered partitions of n (into p parts when --p is given).
        #[arg(long)]
        partitions: bool,
    },
    /// Export the contraction order on CM_n.
    Poset {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = PosetFormat::Json)]
        format: PosetFormat,
    },
    /// Homology of every cell boundary of the stochastihedron.
    Sphericity {
        #[arg(long)]
        n: usize,
    },
    /// Cell counts of the stochastihedron by dimension.
    FVector {
        #[arg(long)]
        n: usize,
    },
    /// The metamatrix of weight n.
    Metamatrix {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = MethodArg::Enumeration)]
        method: MethodArg,
        #[arg(long, value_enum, default_value_t = TableFormat::Json)]
        format: TableFormat,
    },
    /// Counting identities, factorizations and the determinant.
    VerifyIdentities {
        #[arg(long)]
        n: usize,
    },
    /// Exhaustive minor scan of the metamatrix.
    TotalPositivity {
        #[arg(long)]
        n: usize,
    },
    /// Labels of a point configuration read from JSON.
    Classify {
        #[arg(long)]
        input: PathBuf,
    },
    /// Classes generated by anodyne contractions against label fibers.
    AnodyneClasses {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = ScopeArg::Both)]
        kind: ScopeArg,
    },
    /// Common refinement and coarsening of the FNF stratification and its transpose.
    MeetJoin {
        #[arg(long)]
        n: usize,
    },
    /// Validate a poset representation and test constructibility.
    SheafCheck {
        #[arg(long)]
        input: PathBuf,
        /// All four when omitted.
        #[arg(long, value_enum)]
        strat: Option<StratArg>,
    },
    /// The constant representation of dimension d on CM_n.
    ConstantSheaf {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        dim: usize,
        /// Also write the representation JSON to this path.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum PosetFormat {
    Json,
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Enumeration,
    InclusionExclusion,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Enumeration => Method::Enumeration,
            MethodArg::InclusionExclusion => Method::InclusionExclusion,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ScopeArg {
    Horizontal,
    Vertical,
    Both,
}

impl From<ScopeArg> for AnodyneScope {
    fn from(s: ScopeArg) -> Self {
        match s {
            ScopeArg::Horizontal => AnodyneScope::Horizontal,
            ScopeArg::Vertical => AnodyneScope::Vertical,
            ScopeArg::Both => AnodyneScope::Both,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum StratArg {
    Cont,
    Fnf,
    Ifnf,
    Complex,
}

impl From<StratArg> for Stratification {
    fn from(s: StratArg) -> Self {
        match s {
            StratArg::Cont => Stratification::Cont,
            StratArg::Fnf => Stratification::Fnf,
            StratArg::Ifnf => Stratification::Ifnf,
            StratArg::Complex => Stratification::Complex,
        }
    }
}

enum Failure {
    Input(String),
    Capacity(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Capacity { .. } => Failure::Capacity(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

/// What a subcommand hands back before the envelope is added.
enum Output {
    Report {
        parameters: BTreeMap<&'static str, Value>,
        pass: bool,
        details: Value,
    },
    /// Non-JSON payloads (DOT, CSV) printed verbatim.
    Raw(String),
}

#[derive(Serialize)]
struct RunReport<'a> {
    command: &'a str,
    parameters: BTreeMap<&'static str, Value>,
    pass: bool,
    details: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    elapsed_ms: Option<u128>,
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports are serializable")
}

fn report(parameters: BTreeMap<&'static str, Value>, pass: bool, details: Value) -> Output {
    Output::Report {
        parameters,
        pass,
        details,
    }
}

fn params<const K: usize>(pairs: [(&'static str, Value); K]) -> BTreeMap<&'static str, Value> {
    pairs.into_iter().filter(|(_, v)| !v.is_null()).collect()
}

fn parse_partition(s: &str) -> Result<OrderedPartition, Failure> {
    let body = s.trim().trim_start_matches('(').trim_end_matches(')');
    let parts = body
        .split(',')
        .map(|x| x.trim().parse::<u32>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| Failure::Input(format!("malformed ordered partition {s:?}")))?;
    Ok(OrderedPartition::new(parts)?)
}

fn read_input(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))
}

fn positive(n: usize) -> Result<(), Failure> {
    if n == 0 {
        Err(Failure::Input("--n must be positive".into()))
    } else {
        Ok(())
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Enumerate { .. } => "enumerate",
        Command::Poset { .. } => "poset",
        Command::Sphericity { .. } => "sphericity",
        Command::FVector { .. } => "f-vector",
        Command::Metamatrix { .. } => "metamatrix",
        Command::VerifyIdentities { .. } => "verify-identities",
        Command::TotalPositivity { .. } => "total-positivity",
        Command::Classify { .. } => "classify",
        Command::AnodyneClasses { .. } => "anodyne-classes",
        Command::MeetJoin { .. } => "meet-join",
        Command::SheafCheck { .. } => "sheaf-check",
        Command::ConstantSheaf { .. } => "constant-sheaf",
    }
}

fn run(command: &Command) -> Result<Output, Failure> {
    match *command {
        Command::Enumerate {
            n,
            p,
            q,
            ref alpha,
            ref beta,
            partitions,
        } => {
            let alpha = alpha.as_deref().map(parse_partition).transpose()?;
            let beta = beta.as_deref().map(parse_partition).transpose()?;
            let parameters = params([
                ("n", json!(n)),
                ("p", json!(p)),
                ("q", json!(q)),
                ("alpha", json!(alpha.as_ref().map(ToString::to_string))),
                ("beta", json!(beta.as_ref().map(ToString::to_string))),
                ("partitions", json!(partitions)),
            ]);
            if partitions {
                let n = n.ok_or_else(|| Failure::Input("--partitions needs --n".into()))?;
                let list = enumerate_ordered_partitions(n, p)?;
                let details = json!({ "count": list.len(), "partitions": list });
                return Ok(report(parameters, true, details));
            }
            let filter = CmFilter {
                n,
                p,
                q,
                alpha: alpha.clone(),
                beta: beta.clone(),
            };
            let matrices = enumerate_cm(&filter)?;
            let mut details = json!({ "count": matrices.len(), "matrices": matrices });
            let mut pass = true;
            if let (Some(a), Some(b), None, None) = (&alpha, &beta, p, q) {
                let cosets = double_coset_count(a, b)?;
                pass = cosets == matrices.len();
                details["double_cosets"] = json!(cosets);
            }
            Ok(report(parameters, pass, details))
        }
        Command::Poset { n, format } => {
            positive(n)?;
            let poset = CmPoset::build(n)?;
            match format {
                PosetFormat::Dot => Ok(Output::Raw(poset.to_dot())),
                PosetFormat::Json => Ok(report(params([("n", json!(n)), ("format", json!("json"))]), true, poset.to_json())),
            }
        }
        Command::Sphericity { n } => {
            positive(n)?;
            let r = verify_sphericity(n)?;
            Ok(report(params([("n", json!(n))]), r.pass, to_value(&r)))
        }
        Command::FVector { n } => {
            positive(n)?;
            Guard::Rational.check(n)?;
            let f = f_vector(n)?;
            let chi = alternating_sum(&f);
            let details = json!({ "f_vector": f, "alternating_sum": chi, "expected_alternating_sum": 1 });
            Ok(report(params([("n", json!(n))]), chi == 1, details))
        }
        Command::Metamatrix { n, method, format } => {
            positive(n)?;
            let m = MetaMatrix::compute(n, method.into())?;
            if let TableFormat::Csv = format {
                return Ok(Output::Raw(m.to_csv()));
            }
            let totals = TotalCountReport::from_metamatrix(&m);
            let pass = m.is_symmetric() && totals.direct == total_count(n);
            let details = json!({ "metamatrix": m, "symmetric": m.is_symmetric(), "totals": totals });
            Ok(report(params([("n", json!(n)), ("method", to_value(&Method::from(method)))]), pass, details))
        }
        Command::VerifyIdentities { n } => {
            positive(n)?;
            let r = verify_factorizations(n)?;
            let det = det_metamatrix(n)?;
            let totals = TotalCountReport::from_metamatrix(&r.metamatrix);
            let pass = r.pass && det.pass();
            let failed: Vec<&str> = r.checks.iter().filter(|c| !c.pass).map(|c| c.name).collect();
            let mut details = to_value(&r);
            details["failed"] = json!(failed);
            details["determinant"] = to_value(&det);
            details["totals"] = to_value(&totals);
            Ok(report(params([("n", json!(n))]), pass, details))
        }
        Command::TotalPositivity { n } => {
            positive(n)?;
            Guard::TotalPositivity.check(n)?;
            let method = if n <= Guard::Enumeration.max() {
                Method::Enumeration
            } else {
                Method::InclusionExclusion
            };
            let m = MetaMatrix::compute(n, method)?;
            let r = total_positivity(&m.to_qmatrix())?;
            let mut details = to_value(&r);
            details["metamatrix"] = to_value(&m);
            Ok(report(params([("n", json!(n))]), r.totally_positive, details))
        }
        Command::Classify { ref input } => {
            let z = PointConfiguration::from_json(&read_input(input)?)?;
            let c = classify(&z)?;
            Ok(report(params([("input", json!(input.display().to_string()))]), true, to_value(&c)))
        }
        Command::AnodyneClasses { n, kind } => {
            positive(n)?;
            let r = anodyne_classes(n, kind.into())?;
            let mut details = to_value(&r);
            if !r.matches_fibers {
                details["witness"] = witness_class(&r, kind.into());
            }
            Ok(report(params([("n", json!(n)), ("kind", to_value(&AnodyneScope::from(kind)))]), r.matches_fibers, details))
        }
        Command::MeetJoin { n } => {
            positive(n)?;
            let meet = meet_check(n)?;
            let mut details = json!({ "meet": meet });
            if let Some(g) = meet.groups.iter().find(|g| g.shapes.len() != 1) {
                details["witness"] = to_value(g);
            }
            let mut pass = meet.pass;
            if n <= Guard::Anodyne.max() {
                let join = anodyne_classes(n, AnodyneScope::Both)?;
                pass &= join.matches_fibers;
                if !join.matches_fibers {
                    details["witness"] = witness_class(&join, AnodyneScope::Both);
                }
                details["join"] = to_value(&join);
            } else {
                details["join"] = json!({ "skipped": format!("anodyne classes support n <= {}", Guard::Anodyne.max()) });
            }
            Ok(report(params([("n", json!(n))]), pass, details))
        }
        Command::SheafCheck { ref input, strat } => {
            let rep = PosetRepresentation::from_json(&read_input(input)?)?;
            let strats: Vec<Stratification> = match strat {
                Some(s) => vec![s.into()],
                None => Stratification::ALL.to_vec(),
            };
            let parameters = params([
                ("input", json!(input.display().to_string())),
                ("strat", json!(strats)),
            ]);
            sheaf_details(parameters, &rep, &strats)
        }
        Command::ConstantSheaf { n, dim, ref output } => {
            positive(n)?;
            let rep = constant_sheaf(n, dim)?;
            if let Some(path) = output {
                let text = serde_json::to_string_pretty(&rep.to_json()).expect("representation is serializable");
                std::fs::write(path, text + "\n")
                    .map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))?;
            }
            let parameters = params([("n", json!(n)), ("dim", json!(dim))]);
            sheaf_details(parameters, &rep, &Stratification::ALL)
        }
    }
}

fn witness_class(r: &contingency::strata::AnodyneReport, scope: AnodyneScope) -> Value {
    r.classes
        .iter()
        .find(|c| c.members.iter().any(|m| scope.label(m) != c.label) || r.classes.iter().filter(|d| d.label == c.label).count() > 1)
        .map_or(Value::Null, to_value)
}

fn sheaf_details(
    parameters: BTreeMap<&'static str, Value>,
    rep: &PosetRepresentation,
    strats: &[Stratification],
) -> Result<Output, Failure> {
    let validation = rep.validate();
    let mut details = json!({ "validation": validation });
    if !validation.valid {
        return Ok(report(parameters, false, details));
    }
    let reports = strats
        .iter()
        .map(|&s| rep.is_constructible(s))
        .collect::<Result<Vec<_>, _>>()?;
    let pass = reports.iter().all(|r| r.constructible);
    details["constructibility"] = to_value(&reports);
    Ok(report(parameters, pass, details))
}

fn render_pretty(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                if is_leaf(x) {
                    let _ = writeln!(out, "{pad}{k}: {}", leaf(x));
                } else {
                    let _ = writeln!(out, "{pad}{k}:");
                    render_pretty(x, indent + 1, out);
                }
            }
        }
        Value::Array(items) => {
            for x in items {
                if is_leaf(x) {
                    let _ = writeln!(out, "{pad}- {}", leaf(x));
                } else {
                    let _ = writeln!(out, "{pad}-");
                    render_pretty(x, indent + 1, out);
                }
            }
        }
        _ => {
            let _ = writeln!(out, "{pad}{}", leaf(v));
        }
    }
}

/// Scalars, and arrays of scalars or of scalar arrays (matrix rows), fit on one line.
fn is_leaf(v: &Value) -> bool {
    match v {
        Value::Array(items) => items
            .iter()
            .all(|x| !x.is_object() && (!x.is_array() || x.as_array().unwrap().iter().all(|y| !y.is_array() && !y.is_object()))),
        Value::Object(_) => false,
        _ => true,
    }
}

fn leaf(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        _ => v.to_string(),
    }
}

/// Writes to standard output, tolerating a closed pipe.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|()| out.flush());
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.jobs.max(1)).build_global() {
        eprintln!("error: cannot start worker pool: {e}");
        return ExitCode::from(2);
    }
    let start = Instant::now();
    let name = command_name(&cli.command);
    match run(&cli.command) {
        Ok(Output::Raw(text)) => {
            emit(&text);
            ExitCode::SUCCESS
        }
        Ok(Output::Report {
            parameters,
            pass,
            details,
        }) => {
            let envelope = RunReport {
                command: name,
                parameters,
                pass,
                details,
                elapsed_ms: (!cli.stable).then(|| start.elapsed().as_millis()),
            };
            if cli.pretty {
                let mut out = String::new();
                render_pretty(&to_value(&envelope), 0, &mut out);
                emit(&out);
            } else {
                emit(&(serde_json::to_string(&envelope).expect("envelope is serializable") + "\n"));
            }
            ExitCode::from(if pass { 0 } else { 1 })
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Capacity(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
