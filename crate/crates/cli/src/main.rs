//! finslerab: invariant (alpha, beta)-metrics on Lie groups from the
//! command line. Loads a model file or a catalog entry, applies overrides,
//! and prints one row per check.
//!
//! Exit codes: 0 the command ran, 1 the input was rejected, 2 `verify`
//! found a failing row.

mod commands;
mod emit;
mod expr;
mod model;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use finsler_core::{catalog, InnerProduct, IpDomain, PhiFunction, Vector};

use commands::SearchMode;
use emit::Format;
use model::ModelBundle;

#[derive(Parser)]
#[command(
    name = "finslerab",
    version,
    about = "Invariant (alpha, beta)-Finsler metrics: checks, geodesic vectors, flag curvature"
)]
struct Cli {
    /// Model file (see models/ for the syntax).
    #[arg(long, global = true, value_name = "FILE")]
    model: Option<PathBuf>,

    /// Built-in algebra: su2, heis3, su2r, so3_so2, so3r_so2, abelian(n).
    #[arg(long, global = true, value_name = "NAME")]
    catalog: Option<String>,

    /// Override the profile: riemannian, randers, or poly:c0,c1,...[@b0].
    #[arg(long, global = true, value_name = "SPEC")]
    phi: Option<String>,

    /// Override the drift vector, e.g. "0.4*e4" or "0.4, 0, 0, 0".
    #[arg(long, global = true, value_name = "EXPR")]
    x: Option<String>,

    /// Override the inner product: identity, diag:1,2,3, or rows:1 0|0 2.
    #[arg(long, global = true, value_name = "SPEC")]
    metric: Option<String>,

    /// Override the predicate tolerance.
    #[arg(long, global = true, value_name = "T")]
    tol: Option<f64>,

    /// Seed for randomized checks and sphere scans.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Table)]
    format: FormatArg,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Table,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Riemannian,
    Finsler,
}

#[derive(Subcommand)]
enum Command {
    /// Structural checks: Jacobi, positive definiteness, invariance, phi.
    Check,
    /// Geodesic vectors.
    #[command(subcommand)]
    Gv(GvCommand),
    /// Flag curvature at a flag spanned by two vectors (orthonormalized).
    Flag { y: String, u: String },
    /// Cross-check closed forms against brute-force references.
    Verify,
    /// Print the model back in canonical form.
    Dump,
}

#[derive(Subcommand)]
enum GvCommand {
    /// Run both geodesic criteria on one vector.
    Test { vector: String },
    /// Scan unit directions for the geodesic set.
    Find {
        #[arg(long, value_enum, default_value_t = ModeArg::Finsler)]
        mode: ModeArg,
        /// Number of scan directions before refinement.
        #[arg(long, default_value_t = 10_000)]
        resolution: usize,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let failed = e.use_stderr();
            let _ = e.print();
            return if failed { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}

/// The `print!` macro panics when the reader goes away (`finslerab ... |
/// head`). A closed pipe just means nobody wants the rest of the rows;
/// stop writing and let the normal exit code stand.
fn write_stdout(text: &str) -> Result<(), String> {
    use std::io::{ErrorKind, Write};
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
        Ok(()) => Ok(()),
        Err(e) if e.kind() == ErrorKind::BrokenPipe => Ok(()),
        Err(e) => Err(format!("cannot write to stdout: {e}")),
    }
}

fn run(cli: &Cli) -> Result<ExitCode, String> {
    let bundle = load_bundle(cli)?;
    let format = match cli.format {
        FormatArg::Table => Format::Table,
        FormatArg::Csv => Format::Csv,
    };

    let rows = match &cli.command {
        Command::Check => commands::check(&bundle)?,
        Command::Gv(GvCommand::Test { vector }) => {
            let y = expr::parse_vector(vector, bundle.algebra.dim())
                .map_err(|e| format!("vector (col {}): {}", e.col, e.message))?;
            commands::gv_test(&bundle, &y)?
        }
        Command::Gv(GvCommand::Find { mode, resolution }) => {
            let mode = match mode {
                ModeArg::Riemannian => SearchMode::Riemannian,
                ModeArg::Finsler => SearchMode::Finsler,
            };
            commands::gv_find(&bundle, mode, *resolution, cli.seed)?
        }
        Command::Flag { y, u } => {
            let dim = bundle.algebra.dim();
            let y = expr::parse_vector(y, dim)
                .map_err(|e| format!("y (col {}): {}", e.col, e.message))?;
            let u = expr::parse_vector(u, dim)
                .map_err(|e| format!("u (col {}): {}", e.col, e.message))?;
            commands::flag(&bundle, &y, &u)?
        }
        Command::Verify => {
            let rows = commands::verify(&bundle, cli.seed)?;
            let failed = rows.iter().any(|r| !r.pass);
            write_stdout(&emit::render(&rows, format))?;
            return Ok(if failed { ExitCode::from(2) } else { ExitCode::SUCCESS });
        }
        Command::Dump => {
            write_stdout(&model::serialize(&bundle))?;
            return Ok(ExitCode::SUCCESS);
        }
    };

    write_stdout(&emit::render(&rows, format))?;
    Ok(ExitCode::SUCCESS)
}

fn load_bundle(cli: &Cli) -> Result<ModelBundle, String> {
    let mut bundle = match (&cli.model, &cli.catalog) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            model::parse_model(&text).map_err(|diags| {
                diags
                    .iter()
                    .map(|d| format!("{}: {d}", path.display()))
                    .collect::<Vec<_>>()
                    .join("\n")
            })?
        }
        (None, Some(name)) => {
            let (algebra, dec) = catalog(name).map_err(|e| e.to_string())?;
            let domain = if dec.is_trivial() {
                IpDomain::Ambient
            } else {
                IpDomain::MRestricted
            };
            let target = if dec.is_trivial() {
                algebra.dim()
            } else {
                dec.m_dim()
            };
            let dim = algebra.dim();
            ModelBundle {
                algebra,
                dec,
                a: InnerProduct::identity(target, domain),
                x: Vector::zero(dim),
                phi: PhiFunction::riemannian(),
                tol: model::DEFAULT_MODEL_TOL,
            }
        }
        (None, None) => return Err("give a model with --model FILE or --catalog NAME".to_string()),
        (Some(_), Some(_)) => {
            return Err("--model and --catalog are mutually exclusive".to_string())
        }
    };

    if let Some(spec) = &cli.metric {
        bundle.a = parse_metric_override(spec, bundle.a.dim(), bundle.a.domain())?;
    }
    if let Some(text) = &cli.x {
        bundle.x = expr::parse_vector(text, bundle.algebra.dim())
            .map_err(|e| format!("--x (col {}): {}", e.col, e.message))?;
    }
    if let Some(spec) = &cli.phi {
        bundle.phi = parse_phi_override(spec)?;
    }
    if let Some(tol) = cli.tol {
        if !(tol.is_finite() && tol > 0.0) {
            return Err(format!("--tol {tol} is not a positive number"));
        }
        bundle.tol = tol;
    }

    // Overrides can break the combination in ways each part cannot see
    // alone, so always revalidate the assembled metric.
    bundle.build_metric().map_err(|e| e.to_string())?;
    Ok(bundle)
}

fn parse_metric_override(spec: &str, dim: usize, domain: IpDomain) -> Result<InnerProduct, String> {
    if spec == "identity" {
        return Ok(InnerProduct::identity(dim, domain));
    }
    if let Some(rest) = spec.strip_prefix("diag:") {
        let entries = parse_float_list(rest)?;
        if entries.len() != dim {
            return Err(format!(
                "--metric diag has {} entries, the form needs {dim}",
                entries.len()
            ));
        }
        return InnerProduct::from_diag(&entries, domain).map_err(|e| e.to_string());
    }
    if let Some(rest) = spec.strip_prefix("rows:") {
        let rows: Vec<Vec<f64>> = rest
            .split('|')
            .map(|row| {
                row.split_whitespace()
                    .map(|t| {
                        t.parse::<f64>()
                            .map_err(|_| format!("`{t}` is not a number"))
                    })
                    .collect()
            })
            .collect::<Result<_, _>>()?;
        if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
            return Err(format!("--metric rows must form a {dim}x{dim} matrix"));
        }
        return InnerProduct::from_rows(&rows, domain).map_err(|e| e.to_string());
    }
    Err(format!(
        "--metric `{spec}` is not identity, diag:..., or rows:..."
    ))
}

fn parse_phi_override(spec: &str) -> Result<PhiFunction, String> {
    match spec {
        "riemannian" => return Ok(PhiFunction::riemannian()),
        "randers" => return Ok(PhiFunction::randers()),
        _ => {}
    }
    if let Some(rest) = spec.strip_prefix("poly:") {
        let (coeff_text, b0) = match rest.split_once('@') {
            Some((c, b)) => (
                c,
                b.parse::<f64>()
                    .map_err(|_| format!("`{b}` is not a number"))?,
            ),
            None => (rest, 1.0),
        };
        let coeffs = parse_float_list(coeff_text)?;
        return PhiFunction::polynomial(coeffs, b0).map_err(|e| e.to_string());
    }
    Err(format!(
        "--phi `{spec}` is not riemannian, randers, or poly:c0,c1,...[@b0]"
    ))
}

fn parse_float_list(text: &str) -> Result<Vec<f64>, String> {
    text.split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<f64>()
                .map_err(|_| format!("`{t}` is not a number"))
        })
        .collect()
}
