use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use tet_index_core::dehnfill::{fill_many, FillConvention, FillOptions, Slope, DEFAULT_GAMMA_BUDGET};
use tet_index_core::relations::{default_suite, run_suite, Case, Identity, Params, ResidualReport};
use tet_index_core::tetindex::{tet_index, tet_index_via_bessel};
use tet_index_core::triangulation::{index, BoundaryClass, GluingData, GluingMatrix, LatticeSumResult, DEFAULT_SHELL_BUDGET};
use tet_index_core::{Error, IndexTable, QuarterExp, QuarterSeries};

#[derive(Parser)]
#[command(name = "tet-index", version, about = "Tetrahedral index, identity checks, 3D index and Dehn filling")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Pretty, global = true)]
    format: Format,
    /// Worker threads; defaults to the number of CPUs.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Pretty,
}

#[derive(Clone, Copy, ValueEnum)]
enum Convention {
    Corrected,
    AsPrinted,
}

#[derive(Clone, Copy, ValueEnum)]
enum Route {
    Direct,
    Bessel,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Default,
}

#[derive(Subcommand)]
enum Cmd {
    /// The tetrahedral index I(m, e) below q^trunc.
    Eval {
        #[arg(short, allow_negative_numbers = true)]
        m: i64,
        #[arg(short, allow_negative_numbers = true)]
        e: i64,
        /// Truncation order, in whole powers of q.
        #[arg(long)]
        trunc: u32,
        #[arg(long, value_enum, default_value_t = Route::Direct)]
        route: Route,
    },
    /// Check one identity instance or a fixed suite.
    Verify {
        #[arg(long, conflicts_with = "suite", required_unless_present = "suite")]
        identity: Option<String>,
        /// Comma separated k=v pairs.
        #[arg(long, default_value = "", allow_hyphen_values = true)]
        params: String,
        #[arg(long, default_value_t = 10)]
        trunc: u32,
        #[arg(long, value_enum)]
        suite: Option<Suite>,
        /// Flip the sign of one term in every check (should make each fail).
        #[arg(long)]
        perturb: bool,
    },
    /// The 3D index of a triangulation at a boundary class.
    Index {
        #[arg(long)]
        gluing: PathBuf,
        /// Peripheral coefficients, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        omega: String,
        #[arg(long)]
        trunc: u32,
        #[arg(long, default_value_t = DEFAULT_SHELL_BUDGET)]
        shell_budget: u64,
        #[arg(long)]
        require_converged: bool,
    },
    /// The Dehn filled index along one or more slopes.
    Fill {
        #[arg(long)]
        gluing: PathBuf,
        /// Slope p/q; may be repeated.
        #[arg(long, allow_hyphen_values = true, required_unless_present = "table")]
        slope: Vec<String>,
        /// Use the slopes 1/0, 0/1, 1/1, ..., 10/1.
        #[arg(long)]
        table: bool,
        #[arg(long)]
        trunc: u32,
        #[arg(long, default_value_t = DEFAULT_GAMMA_BUDGET)]
        gamma_budget: u64,
        #[arg(long, default_value_t = DEFAULT_SHELL_BUDGET)]
        shell_budget: u64,
        #[arg(long, value_enum, default_value_t = Convention::Corrected)]
        convention: Convention,
        #[arg(long)]
        require_converged: bool,
    },
    /// Pretty-print a stored series, result or gluing file.
    Render { file: PathBuf },
}

enum Failure {
    Usage(String),
    Math(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::UnknownIdentity(_)
            | Error::BadParameter(_)
            | Error::Schema(_)
            | Error::Parse { .. }
            | Error::SlopeNotPrimitive { .. }
            | Error::OmegaOutsideK(_)
            | Error::ExcludedEdgeNonzero(_) => Failure::Usage(e.to_string()),
            _ => Failure::Math(e.to_string()),
        }
    }
}

/// Output plus whether it counts as a mathematical success.
struct Outcome {
    value: Value,
    text: String,
    ok: bool,
}

fn quarters(t: u32) -> QuarterExp {
    QuarterExp::whole(t as i64)
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_gluing(path: &Path) -> Result<GluingData, Failure> {
    Ok(GluingData::parse_json(&read(path)?)?)
}

fn parse_params(s: &str) -> Result<Params, Failure> {
    let mut out = Params::new();
    for kv in s.split(',').map(str::trim).filter(|kv| !kv.is_empty()) {
        let (k, v) = kv.split_once('=').ok_or_else(|| Failure::Usage(format!("parameter {kv:?}: expected k=v")))?;
        let v = v.trim().parse().map_err(|_| Failure::Usage(format!("parameter {k}: {v:?} is not an integer")))?;
        out.insert(k.trim().to_string(), v);
    }
    Ok(out)
}

fn report_line(r: &ResidualReport) -> String {
    let p: Vec<String> = r.parameters.iter().map(|(k, v)| format!("{k}={v}")).collect();
    let verdict = if r.pass { "pass".to_string() } else { format!("FAIL residual {}", r.residual) };
    format!("{} [{}] {verdict}", r.identity_id, p.join(","))
}

fn result_text(label: &str, r: &LatticeSumResult) -> String {
    let mut s = format!("{label}: {}\n  status {:?}, {} rounds, {} terms", r.series, r.status, r.shells_enumerated, r.terms_included);
    if !r.divergent.is_empty() {
        let d: Vec<String> = r.divergent.iter().map(|k| if k.0 % 4 == 0 { format!("q^{}", k.0 / 4) } else { format!("q^({}/4)", k.0) }).collect();
        s += &format!("\n  divergent coefficients at {}", d.join(", "));
    }
    for n in &r.notes {
        s += &format!("\n  note: {n}");
    }
    s
}

fn run(cmd: Cmd) -> Result<Outcome, Failure> {
    let table = IndexTable::new();
    match cmd {
        Cmd::Eval { m, e, trunc, route } => {
            let s = match route {
                Route::Direct => tet_index(m, e, quarters(trunc)),
                Route::Bessel => tet_index_via_bessel(m, e, quarters(trunc))?,
            };
            Ok(Outcome { value: json!({ "m": m, "e": e, "series": s }), text: s.to_string(), ok: true })
        }
        Cmd::Verify { identity, params, trunc, suite, perturb } => {
            let cases = match (identity, suite) {
                (Some(id), _) => vec![Case { identity: id.parse::<Identity>()?, params: parse_params(&params)?, trunc: quarters(trunc) }],
                (None, Some(Suite::Default)) => default_suite(),
                (None, None) => return Err(Failure::Usage("give --identity or --suite".into())),
            };
            let mut reports = Vec::new();
            for r in run_suite(&cases, &table, perturb) {
                reports.extend(r?);
            }
            let ok = reports.iter().all(|r| r.pass);
            let text = reports.iter().map(report_line).collect::<Vec<_>>().join("\n");
            Ok(Outcome { value: serde_json::to_value(&reports).expect("reports serialize"), text, ok })
        }
        Cmd::Index { gluing, omega, trunc, shell_budget, require_converged } => {
            let g = load_gluing(&gluing)?;
            let coeffs = parse_params_list(&omega)?;
            let w = BoundaryClass::new(&g, coeffs.clone())?;
            let r = index(&g, &w, quarters(trunc), shell_budget, &table)?;
            let ok = !require_converged || r.is_converged();
            Ok(Outcome { text: result_text(&format!("I^{coeffs:?}"), &r), value: json!({ "omega": coeffs, "result": r }), ok })
        }
        Cmd::Fill { gluing, slope, table: all, trunc, gamma_budget, shell_budget, convention, require_converged } => {
            let g = load_gluing(&gluing)?;
            let mut slopes: Vec<Slope> = slope.iter().map(|s| s.parse()).collect::<Result<_, _>>()?;
            if all {
                slopes.extend([(1, 0), (0, 1)].into_iter().chain((1..=10).map(|p| (p, 1))).map(|(p, q)| Slope::new(p, q).expect("primitive")));
            }
            let mut opts = FillOptions::new(quarters(trunc));
            opts.gamma_budget = gamma_budget;
            opts.shell_budget = shell_budget;
            opts.convention = match convention {
                Convention::Corrected => FillConvention::Corrected,
                Convention::AsPrinted => FillConvention::AsPrinted,
            };
            let mut values = Vec::new();
            let mut texts = Vec::new();
            let mut ok = true;
            for (a, r) in fill_many(&g, &slopes, &opts, &table) {
                let r = r?;
                ok &= !require_converged || r.is_converged();
                texts.push(result_text(&a.to_string(), &r));
                values.push(json!({ "slope": a.to_string(), "result": r }));
            }
            let value = if values.len() == 1 { values.pop().expect("one value") } else { Value::Array(values) };
            Ok(Outcome { value, text: texts.join("\n"), ok })
        }
        Cmd::Render { file } => render(&read(&file)?),
    }
}

fn parse_params_list(s: &str) -> Result<Vec<i64>, Failure> {
    s.split(',').map(|x| x.trim().parse().map_err(|_| Failure::Usage(format!("omega {s:?}: expected comma separated integers")))).collect()
}

/// Accepts a series, an `eval`/`index`/`fill` JSON output, a list of
/// reports, a gluing JSON file or a gluing matrix in text form.
fn render(text: &str) -> Result<Outcome, Failure> {
    let Ok(v) = serde_json::from_str::<Value>(text) else {
        let m = GluingMatrix::parse_text(text)?;
        let t = m.render_text();
        return Ok(Outcome { value: json!({ "matrix": t }), text: t.trim_end().to_string(), ok: true });
    };
    let bad = |e: serde_json::Error| Failure::Usage(format!("unrecognised JSON: {e}"));
    let text = if let Ok(s) = serde_json::from_value::<QuarterSeries>(v.clone()) {
        s.to_string()
    } else if let Some(s) = v.get("series") {
        serde_json::from_value::<QuarterSeries>(s.clone()).map_err(bad)?.to_string()
    } else if let Some(r) = v.get("result") {
        let label = v.get("slope").or_else(|| v.get("omega")).map(|x| x.to_string()).unwrap_or_default();
        result_text(label.trim_matches('"'), &serde_json::from_value(r.clone()).map_err(bad)?)
    } else if v.is_array() {
        let items: Vec<Value> = serde_json::from_value(v.clone()).map_err(bad)?;
        let mut lines = Vec::new();
        for item in items {
            lines.push(render(&item.to_string())?.text);
        }
        lines.join("\n")
    } else if v.get("identity_id").is_some() {
        report_line(&serde_json::from_value(v.clone()).map_err(bad)?)
    } else {
        GluingData::parse_json(text)?.render_snappy().trim_end().to_string()
    };
    Ok(Outcome { value: v, text, ok: true })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli.cmd) {
        Ok(out) => {
            match cli.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&out.value).expect("json output")),
                Format::Pretty => println!("{}", out.text),
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Math(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
