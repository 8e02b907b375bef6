//! Command-line front end: reproduce the summary table of invariants, run
//! Folner/growth/Kazhdan computations, inspect root-system data, and validate
//! custom fusion documents.

mod render;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use fusionlab_core as core;
use fusionlab_core::{
    Error, Family, FusionModel, GeneratingSet, Label, LieType, QContext, ScanStrategy,
};

use render::{round12, Document};

#[derive(Parser)]
#[command(
    name = "fusionlab",
    version,
    about = "Asymptotic invariants of fusion algebras"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Csv,
    Structured,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModelKind {
    Su,
    So,
    Uf,
    Lie,
    Custom,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Strategy {
    Balls,
    Intervals,
    Exhaustive,
}

#[derive(Args)]
struct OutputArgs {
    /// Output format.
    #[arg(long, value_enum, default_value = "human")]
    format: Format,
    /// Write the output to a file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Summary table of Folner constants, growth rate and Kazhdan constant.
    Table {
        /// Deformation parameter in (0, 1].
        #[arg(long)]
        q: Option<f64>,
        /// Derive q from a quantum-group size N instead: the free orthogonal
        /// family with --model su, the quantum permutation family with
        /// --model so.
        #[arg(long = "N")]
        n: Option<u32>,
        #[arg(long, value_enum)]
        model: Option<ModelKind>,
        /// Derive q from a matrix file (JSON rows; entries are numbers or
        /// [re, im] pairs).
        #[arg(long)]
        f_file: Option<PathBuf>,
        /// Also run the exact free-unitary series cross-check.
        #[arg(long)]
        exact: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Folner-ratio scan for a model and generating set.
    Folner {
        #[arg(long, value_enum)]
        model: ModelKind,
        #[arg(long)]
        q: Option<f64>,
        /// Custom fusion document (required with --model custom).
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "intervals")]
        strategy: Strategy,
        /// Scan limit: interval endpoint, ball radius, or fragment radius.
        #[arg(long, default_value_t = 40)]
        max: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Growth-rate estimation from ball tables or closed forms.
    Growth {
        #[arg(long, value_enum)]
        model: ModelKind,
        #[arg(long)]
        q: Option<f64>,
        #[arg(long, default_value_t = 60)]
        depth: usize,
        /// Simple type for --model lie (A..G, or e.g. E7 with the rank baked in).
        #[arg(long = "type")]
        lie_type: Option<String>,
        #[arg(long)]
        rank: Option<usize>,
        /// Custom fusion document (required with --model custom).
        #[arg(long)]
        file: Option<PathBuf>,
        /// Cross-check float ball sizes against exact arithmetic.
        #[arg(long)]
        exact: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Kazhdan constants: closed form, generator bound and truncated estimate.
    Kazhdan {
        /// su or so.
        #[arg(long, value_enum)]
        model: ModelKind,
        #[arg(long)]
        q: Option<f64>,
        /// Derive q from the family size N (free orthogonal for su, quantum
        /// permutation for so).
        #[arg(long = "N")]
        n: Option<u32>,
        #[arg(long)]
        f_file: Option<PathBuf>,
        /// Generator index.
        #[arg(long, default_value_t = 1)]
        m: u32,
        /// Truncation size of the regular representation.
        #[arg(long, default_value_t = 2000)]
        depth: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Root-system data of a simple type: exact pairings and growth rate.
    Lie {
        /// A..G, or e.g. E7 with the rank baked in.
        #[arg(long = "type")]
        lie_type: String,
        #[arg(long)]
        rank: Option<usize>,
        #[arg(long)]
        q: Option<f64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Free unitary growth: sphere sizes, the cubic and its largest root.
    Uf {
        #[arg(long)]
        q: Option<f64>,
        #[arg(long)]
        f_file: Option<PathBuf>,
        #[arg(long, default_value_t = 30)]
        depth: usize,
        /// Verify the sphere sizes exactly against the series recurrence.
        #[arg(long)]
        exact: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Validate a custom fusion document.
    Validate {
        /// Path to the JSON document.
        file: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
}

enum CliError {
    /// Bad flag combinations: exit 2.
    Usage(String),
    /// Data or validation failure: exit 1.
    Failure(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Failure(e.to_string())
    }
}

fn main() -> ExitCode {
    if let Ok(v) = std::env::var("FUSIONLAB_THREADS") {
        if let Ok(threads) = v.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build_global();
        }
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn emit(output: &OutputArgs, text: String) -> Result<(), CliError> {
    match &output.out {
        Some(path) => fs::write(path, text).map_err(|e| CliError::Failure(e.to_string())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Resolve the deformation parameter from exactly one of the sources.
fn resolve_q(
    q: Option<f64>,
    n: Option<u32>,
    model: Option<ModelKind>,
    f_file: Option<&PathBuf>,
) -> Result<(f64, String), CliError> {
    let given = [q.is_some(), n.is_some(), f_file.is_some()]
        .iter()
        .filter(|&&b| b)
        .count();
    if given > 1 {
        return Err(CliError::Usage(
            "give exactly one of --q, --N, --f-file".into(),
        ));
    }
    if let Some(q) = q {
        QContext::new(q).map_err(CliError::from)?;
        return Ok((q, format!("q = {q}")));
    }
    if let Some(n) = n {
        return match model {
            Some(ModelKind::Su) => {
                let q = core::q_from_trace(n as f64)?;
                Ok((q, format!("free orthogonal family, N = {n}")))
            }
            Some(ModelKind::So) => {
                let q = core::so_param_from_n(n)?;
                Ok((q, format!("quantum permutation family, N = {n}")))
            }
            _ => Err(CliError::Usage(
                "--N needs --model su (free orthogonal) or --model so (quantum permutation)".into(),
            )),
        };
    }
    if let Some(path) = f_file {
        let f = read_matrix(path)?;
        let q = core::q_from_f(&f)?;
        return Ok((q, format!("matrix file {}", path.display())));
    }
    Err(CliError::Usage(
        "no parameter given; use --q, --N or --f-file".into(),
    ))
}

/// JSON matrix file: an array of rows whose entries are numbers or [re, im].
fn read_matrix(path: &PathBuf) -> Result<Vec<Vec<Complex64>>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Failure(e.to_string()))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| CliError::Failure(e.to_string()))?;
    let rows = value
        .as_array()
        .ok_or_else(|| CliError::Failure("matrix file must be a JSON array of rows".into()))?;
    let mut out = Vec::new();
    for row in rows {
        let row = row
            .as_array()
            .ok_or_else(|| CliError::Failure("matrix rows must be arrays".into()))?;
        let mut r = Vec::new();
        for entry in row {
            let c = match entry {
                serde_json::Value::Number(x) => Complex64::new(x.as_f64().unwrap(), 0.0),
                serde_json::Value::Array(pair) if pair.len() == 2 => {
                    let re = pair[0].as_f64();
                    let im = pair[1].as_f64();
                    match (re, im) {
                        (Some(re), Some(im)) => Complex64::new(re, im),
                        _ => return Err(CliError::Failure("bad complex entry".into())),
                    }
                }
                _ => {
                    return Err(CliError::Failure(
                        "matrix entries are numbers or [re, im]".into(),
                    ))
                }
            };
            r.push(c);
        }
        out.push(r);
    }
    Ok(out)
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Table {
            q,
            n,
            model,
            f_file,
            exact,
            output,
        } => {
            let (q, origin) = resolve_q(q, n, model, f_file.as_ref())?;
            let text = run_table(q, &origin, exact, output.format)?;
            emit(&output, text)
        }
        Command::Folner {
            model,
            q,
            file,
            strategy,
            max,
            output,
        } => {
            let text = run_folner(model, q, file, strategy, max, output.format)?;
            emit(&output, text)
        }
        Command::Growth {
            model,
            q,
            depth,
            lie_type,
            rank,
            file,
            exact,
            output,
        } => {
            let text = run_growth(model, q, depth, lie_type, rank, file, exact, output.format)?;
            emit(&output, text)
        }
        Command::Kazhdan {
            model,
            q,
            n,
            f_file,
            m,
            depth,
            output,
        } => {
            let family = match model {
                ModelKind::Su => Family::Su,
                ModelKind::So => Family::So,
                _ => return Err(CliError::Usage("kazhdan supports --model su or so".into())),
            };
            let (q, origin) = resolve_q(q, n, Some(model), f_file.as_ref())?;
            let text = run_kazhdan(family, q, &origin, m, depth, output.format)?;
            emit(&output, text)
        }
        Command::Lie {
            lie_type,
            rank,
            q,
            output,
        } => {
            let (t, r) = parse_lie(&lie_type, rank)?;
            let text = run_lie(t, r, q, output.format)?;
            emit(&output, text)
        }
        Command::Uf {
            q,
            f_file,
            depth,
            exact,
            output,
        } => {
            let (q, origin) = resolve_q(q, None, None, f_file.as_ref())?;
            let text = run_uf(q, &origin, depth, exact, output.format)?;
            emit(&output, text)
        }
        Command::Validate { file, output } => {
            let text = run_validate(&file, output.format)?;
            emit(&output, text)
        }
    }
}

fn parse_lie(type_str: &str, rank: Option<usize>) -> Result<(LieType, usize), CliError> {
    let s = type_str.trim();
    let (letter, digits): (String, String) = s.chars().partition(|c| c.is_ascii_alphabetic());
    let t = LieType::parse(&letter)
        .ok_or_else(|| CliError::Usage(format!("unknown type `{type_str}`; use A..G")))?;
    let embedded: Option<usize> = if digits.is_empty() {
        None
    } else {
        digits.parse().ok()
    };
    match (embedded, rank) {
        (Some(a), Some(b)) if a != b => Err(CliError::Usage(format!(
            "--type {type_str} carries rank {a} but --rank {b} was given"
        ))),
        (Some(a), _) => Ok((t, a)),
        (None, Some(b)) => Ok((t, b)),
        (None, None) => Err(CliError::Usage("missing --rank".into())),
    }
}

// ---------------------------------------------------------------- table

struct TableRow {
    name: &'static str,
    fol: Option<(f64, f64)>,
    fol_inn: Option<(f64, f64)>,
    omega: (f64, f64),
    kaz: Option<(f64, f64)>,
}

fn run_table(q: f64, origin: &str, exact: bool, format: Format) -> Result<String, CliError> {
    let su = core::SuModel::new(QContext::new(q)?);
    let so = core::SoModel::new(QContext::new(q)?);
    let mut rows = Vec::new();

    for (name, model, fol_cf, inn_cf, omega_cf, family) in [
        (
            "R(SU_q(2))",
            &su as &dyn FusionModel,
            q.powi(-2) - q.powi(2),
            1.0 - q * q,
            q.powi(-2),
            Family::Su,
        ),
        (
            "R(SO_q(3))",
            &so as &dyn FusionModel,
            q.powi(-4) - q.powi(4),
            1.0 - q.powi(4),
            q.powi(-4),
            Family::So,
        ),
    ] {
        let x = GeneratingSet::new(model, vec![Label::Int(1)])?;
        let scan = core::folner_scan(model, &x, &ScanStrategy::Intervals, 40)?;
        let table = core::build_balls(model, &x, 60, false)?;
        let est = core::growth_from_balls(&table)?;
        let kaz_cf = core::kazhdan_closed_form(family, q)?;
        let kaz = core::truncated_kazhdan_estimate(family, 1, q, 2000)?;
        let (fol_cf, inn_cf) = if q == 1.0 {
            (0.0, 0.0)
        } else {
            (fol_cf, inn_cf)
        };
        rows.push(TableRow {
            name,
            fol: Some((fol_cf, scan.last().outer_ratio)),
            fol_inn: Some((inn_cf, scan.last().inner_ratio)),
            omega: (if q == 1.0 { 1.0 } else { omega_cf }, est.estimate),
            kaz: Some((kaz_cf, kaz.estimate)),
        });
    }

    let spec = core::uf_rate(q)?;
    let uf_sizes = core::uf_sphere_sizes(q, 30)?;
    let uf_ratio = uf_sizes[30] / uf_sizes[29];
    rows.push(TableRow {
        name: "R(U_F+)",
        fol: None,
        fol_inn: None,
        omega: (spec.root, uf_ratio),
        kaz: None,
    });

    let exact_note = if exact {
        let exact_sizes = core::uf_sphere_sizes_exact(15)?;
        let series = series_coefficients(15);
        let ok = exact_sizes == series;
        if !ok {
            return Err(CliError::Failure("exact series cross-check failed".into()));
        }
        Some("exact series cross-check: ok (first 15 coefficients)")
    } else {
        None
    };

    match format {
        Format::Csv => {
            let mut out = String::from("model,quantity,closed_form,scan,abs_gap\n");
            for r in &rows {
                let mut push = |quantity: &str, pair: Option<(f64, f64)>| {
                    match pair {
                        Some((cf, scan)) => out.push_str(&format!(
                            "{},{},{},{},{}\n",
                            r.name,
                            quantity,
                            core::metric::fmt_sig(cf),
                            core::metric::fmt_sig(scan),
                            core::metric::fmt_sig((cf - scan).abs())
                        )),
                        None => out.push_str(&format!("{},{},-,-,-\n", r.name, quantity)),
                    };
                };
                push("Fol", r.fol);
                push("Fol_inn", r.fol_inn);
                push("omega", Some(r.omega));
                push("Kaz", r.kaz);
            }
            Ok(out)
        }
        Format::Human => {
            let mut out = if origin.starts_with("q = ") {
                format!("Invariants at q = {}:\n\n", round12(q))
            } else {
                format!("Invariants at {origin} (q = {}):\n\n", round12(q))
            };
            out.push_str(&format!(
                "{:<12} {:>24} {:>24} {:>24} {:>24}\n",
                "algebra", "Fol", "Fol_inn", "omega", "Kaz(rho)"
            ));
            let cell = |pair: Option<(f64, f64)>| -> String {
                match pair {
                    Some((cf, _)) => format!("{}", round12(cf)),
                    None => "-".into(),
                }
            };
            for r in &rows {
                out.push_str(&format!(
                    "{:<12} {:>24} {:>24} {:>24} {:>24}\n",
                    r.name,
                    cell(r.fol),
                    cell(r.fol_inn),
                    cell(Some(r.omega)),
                    cell(r.kaz)
                ));
            }
            out.push_str("\nscan cross-checks (value / gap to closed form):\n");
            for r in &rows {
                let mut line = format!("{:<12}", r.name);
                for (label, pair) in [
                    ("Fol", r.fol),
                    ("Fol_inn", r.fol_inn),
                    ("omega", Some(r.omega)),
                    ("Kaz", r.kaz),
                ] {
                    match pair {
                        Some((cf, scan)) => line.push_str(&format!(
                            " {label}={} (gap {:.2e})",
                            round12(scan),
                            (cf - scan).abs()
                        )),
                        None => line.push_str(&format!(" {label}=-")),
                    }
                }
                out.push_str(&line);
                out.push('\n');
            }
            if let Some(note) = exact_note {
                out.push_str(note);
                out.push('\n');
            }
            Ok(out)
        }
        Format::Structured => {
            let mut doc = Document::new("table");
            doc.input("q", round12(q));
            doc.input("origin", origin);
            let mut results = serde_json::Map::new();
            for r in &rows {
                let mut entry = serde_json::Map::new();
                let mut put = |key: &str, pair: Option<(f64, f64)>| {
                    let v = match pair {
                        Some((cf, scan)) => serde_json::json!({
                            "closed_form": round12(cf),
                            "scan": round12(scan),
                            "abs_gap": round12((cf - scan).abs()),
                        }),
                        None => serde_json::Value::Null,
                    };
                    entry.insert(key.into(), v);
                };
                put("fol", r.fol);
                put("fol_inn", r.fol_inn);
                put("omega", Some(r.omega));
                put("kaz", r.kaz);
                results.insert(r.name.replace(' ', "_"), serde_json::Value::Object(entry));
            }
            doc.result("rows", serde_json::Value::Object(results));
            if exact {
                doc.result("exact_series_check", serde_json::json!("ok"));
            }
            Ok(doc.render())
        }
    }
}

/// First `depth + 1` weighted sphere sizes of the free unitary model, from
/// the power-series recurrence of its rational generating function.
fn series_coefficients(depth: usize) -> Vec<core::LaurentPoly> {
    use core::LaurentPoly;
    let a = LaurentPoly::constant(2) * LaurentPoly::q_power(-2)
        + LaurentPoly::constant(3)
        + LaurentPoly::constant(2) * LaurentPoly::q_power(2);
    let b = LaurentPoly::constant(2)
        * (LaurentPoly::q_power(-2) + LaurentPoly::one() + LaurentPoly::q_power(2));
    let two = LaurentPoly::constant(2);
    let mut g: Vec<LaurentPoly> = vec![LaurentPoly::one(), &a + &LaurentPoly::one()];
    for n in 2..=depth {
        let mut next = &a * &g[n - 1] - &b * &g[n - 2];
        if n >= 3 {
            next = &next + &(&two * &g[n - 3]);
        }
        g.push(next);
    }
    g.truncate(depth + 1);
    g
}

// ---------------------------------------------------------------- folner

fn run_folner(
    model: ModelKind,
    q: Option<f64>,
    file: Option<PathBuf>,
    strategy: Strategy,
    max: usize,
    format: Format,
) -> Result<String, CliError> {
    let (boxed, x, name): (Arc<dyn FusionModel>, GeneratingSet, String) = match model {
        ModelKind::Su | ModelKind::So => {
            let q = q.ok_or_else(|| CliError::Usage("--q is required".into()))?;
            let ctx = QContext::new(q)?;
            let m: Arc<dyn FusionModel> = if model == ModelKind::Su {
                Arc::new(core::SuModel::new(ctx))
            } else {
                Arc::new(core::SoModel::new(ctx))
            };
            let x = GeneratingSet::new(&*m, vec![Label::Int(1)])?;
            let name = m.describe();
            (m, x, name)
        }
        ModelKind::Uf => {
            let q = q.ok_or_else(|| CliError::Usage("--q is required".into()))?;
            if max > 14 {
                return Err(CliError::Usage(
                    "word balls double per radius; use --max 14 or less for uf scans".into(),
                ));
            }
            let m: Arc<dyn FusionModel> = Arc::new(core::UfModel::new(QContext::new(q)?));
            let x = GeneratingSet::new(&*m, core::UfModel::canonical_generators())?;
            let name = m.describe();
            (m, x, name)
        }
        ModelKind::Custom => {
            let path = file
                .ok_or_else(|| CliError::Usage("--file is required with --model custom".into()))?;
            let text = fs::read_to_string(&path).map_err(|e| CliError::Failure(e.to_string()))?;
            let m = core::load_custom(&text)?;
            let gens = m.irreducibles();
            let x = GeneratingSet::new(&m, gens)?;
            let name = m.describe();
            (Arc::new(m), x, name)
        }
        ModelKind::Lie => {
            return Err(CliError::Usage(
                "folner scans need enumerable products; simple types expose growth data via `lie`"
                    .into(),
            ))
        }
    };

    let strategy = match strategy {
        Strategy::Balls => ScanStrategy::Balls,
        Strategy::Intervals => {
            if matches!(model, ModelKind::Uf | ModelKind::Custom) {
                return Err(CliError::Usage(
                    "interval scans need integer-labelled models (su, so)".into(),
                ));
            }
            ScanStrategy::Intervals
        }
        Strategy::Exhaustive => {
            let fragment: Vec<Label> = match model {
                ModelKind::Su | ModelKind::So => (0..=max as u32).map(Label::Int).collect(),
                ModelKind::Custom => x.elements().to_vec(),
                _ => {
                    return Err(CliError::Usage(
                        "exhaustive scans support su, so and custom fragments".into(),
                    ))
                }
            };
            ScanStrategy::Exhaustive { fragment }
        }
    };
    let scan = core::folner_scan(&*boxed, &x, &strategy, max)?;

    match format {
        Format::Csv => Ok(scan.to_csv()),
        Format::Human => {
            let mut out = format!("Folner scan of {name}\n\n");
            out.push_str(&scan.to_csv());
            out.push_str(&format!(
                "\nrunning infima: inner {} outer {}\n",
                round12(scan.inf_inner),
                round12(scan.inf_outer)
            ));
            if let Some(a) = scan.argmin_inner.as_ref() {
                out.push_str(&format!("inner infimum attained at {a}\n"));
            }
            if let (Some(i), Some(o)) = (scan.extrapolated_inner, scan.extrapolated_outer) {
                out.push_str(&format!(
                    "geometric extrapolation: inner {} outer {}\n",
                    round12(i),
                    round12(o)
                ));
            }
            Ok(out)
        }
        Format::Structured => {
            let mut doc = Document::new("folner");
            doc.input("model", &name);
            doc.input("max", max as f64);
            let rows: Vec<serde_json::Value> = scan
                .rows
                .iter()
                .map(|r| {
                    serde_json::json!({
                        "set": r.descriptor,
                        "size": round12(r.set_size),
                        "boundary_size": round12(r.boundary_size),
                        "inner_boundary_size": round12(r.inner_boundary_size),
                        "outer_ratio": round12(r.outer_ratio),
                        "inner_ratio": round12(r.inner_ratio),
                    })
                })
                .collect();
            doc.result("rows", serde_json::Value::Array(rows));
            doc.result("inf_inner", serde_json::json!(round12(scan.inf_inner)));
            doc.result("inf_outer", serde_json::json!(round12(scan.inf_outer)));
            if let Some(e) = scan.extrapolated_inner {
                doc.result("extrapolated_inner", serde_json::json!(round12(e)));
            }
            if let Some(e) = scan.extrapolated_outer {
                doc.result("extrapolated_outer", serde_json::json!(round12(e)));
            }
            Ok(doc.render())
        }
    }
}

// ---------------------------------------------------------------- growth

fn build_balls_checked(
    model: &dyn FusionModel,
    x: &GeneratingSet,
    depth: usize,
) -> Result<core::BallTable, CliError> {
    core::build_balls(model, x, depth, false).map_err(CliError::from)
}

fn run_growth(
    model: ModelKind,
    q: Option<f64>,
    depth: usize,
    lie_type: Option<String>,
    rank: Option<usize>,
    file: Option<PathBuf>,
    exact: bool,
    format: Format,
) -> Result<String, CliError> {
    match model {
        ModelKind::Su | ModelKind::So => {
            let q = q.ok_or_else(|| CliError::Usage("--q is required".into()))?;
            let ctx = if exact {
                QContext::exact(q)?
            } else {
                QContext::new(q)?
            };
            let m: Arc<dyn FusionModel> = if model == ModelKind::Su {
                Arc::new(core::SuModel::new(ctx))
            } else {
                Arc::new(core::SoModel::new(ctx))
            };
            let x = GeneratingSet::new(&*m, vec![Label::Int(1)])?;
            let table = core::build_balls(&*m, &x, depth, ctx.is_exact())?;
            if exact {
                for n in 0..=depth {
                    let e = table.exact_ball_size(n).unwrap().eval(q)?;
                    if (e - table.ball_size(n)).abs() > 1e-9 * e.max(1.0) {
                        return Err(CliError::Failure(format!(
                            "exact/float ball size mismatch at radius {n}"
                        )));
                    }
                }
            }
            let est = core::growth_from_balls(&table)?;
            render_growth(&m.describe(), &table, &est, exact, format)
        }
        ModelKind::Uf => {
            let q = q.ok_or_else(|| CliError::Usage("--q is required".into()))?;
            run_uf(q, &format!("q = {q}"), depth.min(200), exact, format)
        }
        ModelKind::Lie => {
            let type_str = lie_type.ok_or_else(|| CliError::Usage("--type is required".into()))?;
            let (t, r) = parse_lie(&type_str, rank)?;
            run_lie(t, r, q, format)
        }
        ModelKind::Custom => {
            let path = file
                .ok_or_else(|| CliError::Usage("--file is required with --model custom".into()))?;
            let text = fs::read_to_string(&path).map_err(|e| CliError::Failure(e.to_string()))?;
            let m = core::load_custom(&text)?;
            let name = m.describe();
            let gens = m.irreducibles();
            let x = GeneratingSet::new(&m, gens)?;
            let table = build_balls_checked(&m, &x, depth)?;
            let est = core::growth_from_balls(&table)?;
            render_growth(&name, &table, &est, false, format)
        }
    }
}

fn render_growth(
    name: &str,
    table: &core::BallTable,
    est: &core::GrowthEstimate,
    exact: bool,
    format: Format,
) -> Result<String, CliError> {
    match format {
        Format::Csv => Ok(core::growth_csv(table, est)),
        Format::Human => {
            let mut out = format!("Growth of {name}\n\n");
            out.push_str(&core::growth_csv(table, est));
            out.push_str(&format!(
                "\nestimate {} (method {}, spread {:.2e}{})\n",
                round12(est.estimate),
                est.method.tag(),
                est.spread,
                if est.flagged { ", flagged" } else { "" }
            ));
            out.push_str(&format!(
                "ball-ratio tail: liminf {} limsup {}\n",
                round12(est.ball_ratio_liminf),
                round12(est.ball_ratio_limsup)
            ));
            if exact {
                out.push_str("exact/float ball sizes agree within 1e-9\n");
            }
            Ok(out)
        }
        Format::Structured => {
            let mut doc = Document::new("growth");
            doc.input("model", name);
            doc.result("estimate", serde_json::json!(round12(est.estimate)));
            doc.result("method", serde_json::json!(est.method.tag()));
            doc.result("spread", serde_json::json!(round12(est.spread)));
            doc.result("flagged", serde_json::json!(est.flagged));
            doc.result(
                "ball_ratio_tail",
                serde_json::json!({
                    "liminf": round12(est.ball_ratio_liminf),
                    "limsup": round12(est.ball_ratio_limsup),
                }),
            );
            let trace: Vec<serde_json::Value> = (1..=est.ball_roots.len())
                .map(|n| {
                    serde_json::json!({
                        "n": n,
                        "ball_size": round12(table.ball_size(n)),
                        "sphere_size": round12(table.sphere_size(n)),
                        "nth_root": round12(est.ball_roots[n - 1]),
                        "ratio": round12(est.ratios[n - 1]),
                    })
                })
                .collect();
            doc.result("trace", serde_json::Value::Array(trace));
            Ok(doc.render())
        }
    }
}

// ---------------------------------------------------------------- kazhdan

fn run_kazhdan(
    family: Family,
    q: f64,
    origin: &str,
    m: u32,
    depth: usize,
    format: Format,
) -> Result<String, CliError> {
    let result = core::truncated_kazhdan_estimate(family, m, q, depth)?;
    match format {
        Format::Csv => Ok(result.trace_csv()),
        Format::Human => {
            let name = match family {
                Family::Su => "SU_q(2)",
                Family::So => "SO_q(3)",
            };
            let mut out =
                format!("Kazhdan constant of the regular representation, {name} at {origin}\n\n");
            out.push_str(&format!(
                "closed form (uniform): {}\n",
                round12(result.closed_form)
            ));
            out.push_str(&format!(
                "generator m = {}: bound {}\n",
                m,
                round12(result.generator_bound)
            ));
            out.push_str(&format!(
                "truncated estimate (N = {}): {}{}\n\n",
                result.truncation,
                round12(result.estimate),
                if result.flagged {
                    " [N too small to resolve]"
                } else {
                    ""
                }
            ));
            out.push_str(&result.trace_csv());
            Ok(out)
        }
        Format::Structured => {
            let mut doc = Document::new("kazhdan");
            doc.input("q", round12(q));
            doc.input("origin", origin);
            doc.input("generator", m as f64);
            doc.input("truncation", depth as f64);
            doc.result(
                "closed_form",
                serde_json::json!(round12(result.closed_form)),
            );
            doc.result(
                "generator_bound",
                serde_json::json!(round12(result.generator_bound)),
            );
            doc.result("estimate", serde_json::json!(round12(result.estimate)));
            doc.result("flagged", serde_json::json!(result.flagged));
            let trace: Vec<serde_json::Value> = result
                .trace
                .iter()
                .map(|&(n, e)| {
                    serde_json::json!({
                        "N": n,
                        "estimate": round12(e),
                        "gap": round12(e - result.generator_bound),
                    })
                })
                .collect();
            doc.result("trace", serde_json::Value::Array(trace));
            Ok(doc.render())
        }
    }
}

// ---------------------------------------------------------------- lie

fn run_lie(t: LieType, rank: usize, q: Option<f64>, format: Format) -> Result<String, CliError> {
    let rs = core::build_root_system(t, rank)?;
    let pairings = core::lie::pairing_strings(&rs);
    let q = q.unwrap_or(0.5);
    let growth = core::uniform_growth(&rs, q)?;
    let canonical: Vec<String> = growth.canonical_set.iter().map(|w| w.to_string()).collect();

    match format {
        Format::Csv => {
            let mut out = String::from("index,pairing,exponent\n");
            for (i, p) in pairings.iter().enumerate() {
                out.push_str(&format!("{},{},{}\n", i + 1, p, growth.exponent));
            }
            Ok(out)
        }
        Format::Human => {
            let mut out = format!(
                "Type {t}{rank}: rank {rank}, {} positive roots\n",
                rs.positive_roots.len()
            );
            out.push_str("fundamental-weight pairings with the Weyl vector:\n");
            for (i, p) in pairings.iter().enumerate() {
                out.push_str(&format!("  <w{}|rho> = {}\n", i + 1, p));
            }
            out.push_str(&format!(
                "growth exponent {}: rate at q = {} is {}\n",
                growth.exponent,
                round12(q),
                round12(growth.rate)
            ));
            out.push_str(&format!(
                "canonical generating set: {}\n",
                canonical.join(" ")
            ));
            if growth.amenable {
                out.push_str("q = 1: amenable, rate 1\n");
            }
            Ok(out)
        }
        Format::Structured => {
            let mut doc = Document::new("lie");
            doc.input("type", &format!("{t}{rank}"));
            doc.input("q", round12(q));
            doc.result("pairings", serde_json::json!(pairings));
            doc.result("exponent", serde_json::json!(growth.exponent));
            doc.result("rate", serde_json::json!(round12(growth.rate)));
            doc.result("canonical_set", serde_json::json!(canonical));
            doc.result("amenable", serde_json::json!(growth.amenable));
            Ok(doc.render())
        }
    }
}

// ---------------------------------------------------------------- uf

fn run_uf(
    q: f64,
    origin: &str,
    depth: usize,
    exact: bool,
    format: Format,
) -> Result<String, CliError> {
    let spec = core::uf_rate(q)?;
    let sizes = core::uf_sphere_sizes(q, depth)?;
    let exact_note = if exact {
        let n = depth.min(15);
        let exact_sizes = core::uf_sphere_sizes_exact(n)?;
        let series = series_coefficients(n);
        if exact_sizes != series {
            return Err(CliError::Failure("exact series cross-check failed".into()));
        }
        true
    } else {
        false
    };

    match format {
        Format::Csv => {
            let mut out = String::from("n,sphere_size,ratio\n");
            for n in 0..=depth {
                let ratio = if n == 0 {
                    String::from("-")
                } else {
                    core::metric::fmt_sig(sizes[n] / sizes[n - 1])
                };
                out.push_str(&format!(
                    "{},{},{}\n",
                    n,
                    core::metric::fmt_sig(sizes[n]),
                    ratio
                ));
            }
            Ok(out)
        }
        Format::Human => {
            let mut out = format!("Free unitary growth at {origin}\n\n");
            out.push_str(&format!(
                "cubic z^3 + ({})z^2 + ({})z + ({}), largest root {} (residual {:.2e})\n",
                round12(spec.c2),
                round12(spec.c1),
                round12(spec.c0),
                round12(spec.root),
                spec.residual
            ));
            out.push_str(&format!("lower bound {}", round12(spec.lower_bound)));
            if let Some(u) = spec.upper_bound {
                out.push_str(&format!(", upper bound {}", round12(u)));
            }
            out.push('\n');
            if depth >= 1 {
                out.push_str(&format!(
                    "sphere ratio at depth {}: {}\n",
                    depth,
                    round12(sizes[depth] / sizes[depth - 1])
                ));
            }
            if exact_note {
                out.push_str("exact series cross-check: ok\n");
            }
            out.push('\n');
            out.push_str("n,sphere_size,ratio\n");
            for n in 0..=depth {
                let ratio = if n == 0 {
                    String::from("-")
                } else {
                    core::metric::fmt_sig(sizes[n] / sizes[n - 1])
                };
                out.push_str(&format!(
                    "{},{},{}\n",
                    n,
                    core::metric::fmt_sig(sizes[n]),
                    ratio
                ));
            }
            Ok(out)
        }
        Format::Structured => {
            let mut doc = Document::new("uf");
            doc.input("q", round12(q));
            doc.input("origin", origin);
            doc.input("depth", depth as f64);
            doc.result("root", serde_json::json!(round12(spec.root)));
            doc.result("residual", serde_json::json!(round12(spec.residual)));
            doc.result(
                "cubic",
                serde_json::json!({
                    "c2": round12(spec.c2),
                    "c1": round12(spec.c1),
                    "c0": round12(spec.c0),
                }),
            );
            doc.result("lower_bound", serde_json::json!(round12(spec.lower_bound)));
            if let Some(u) = spec.upper_bound {
                doc.result("upper_bound", serde_json::json!(round12(u)));
            }
            let trace: Vec<serde_json::Value> = (0..=depth)
                .map(|n| {
                    serde_json::json!({
                        "n": n,
                        "sphere_size": round12(sizes[n]),
                    })
                })
                .collect();
            doc.result("sphere_sizes", serde_json::Value::Array(trace));
            if exact_note {
                doc.result("exact_series_check", serde_json::json!("ok"));
            }
            Ok(doc.render())
        }
    }
}

// ---------------------------------------------------------------- validate

fn run_validate(path: &PathBuf, format: Format) -> Result<String, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Failure(e.to_string()))?;
    let model = core::load_custom(&text)?;
    let report = core::validate_axioms(&model, &model.irreducibles())?;
    debug_assert!(report.is_clean());
    match format {
        Format::Csv => Ok(format!(
            "irreducibles,checked_triples,status\n{},{},ok\n",
            model.irreducibles().len(),
            report.checked_triples
        )),
        Format::Human => Ok(format!(
            "{}: valid ({} reciprocity checks, exact dimension multiplicativity)\n",
            model.describe(),
            report.checked_triples
        )),
        Format::Structured => {
            let mut doc = Document::new("validate");
            doc.input("file", &path.display().to_string());
            doc.result(
                "irreducibles",
                serde_json::json!(model.irreducibles().len()),
            );
            doc.result("checked_triples", serde_json::json!(report.checked_triples));
            doc.result("status", serde_json::json!("ok"));
            Ok(doc.render())
        }
    }
}
