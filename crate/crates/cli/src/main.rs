mod grid;
mod output;

use clap::{Args, Parser, Subcommand, ValueEnum};
use grid::Grid;
use serde_json::{json, Value};
use std::process::ExitCode;
use voronoi_core::laplace::{density_table, InversionSpec, Method};
use voronoi_core::profile::QuadratureSpec;
use voronoi_core::series::{expected_zl, f_closed_z1, f_series, Rational};
use voronoi_core::tables::{local_law_rows, profile_rows, scaling_law_rows, to_csv, Row};
use voronoi_core::verify::{self, VerifyOptions};
use voronoi_core::Error;

#[derive(Parser)]
#[command(name = "voronoi", version, about = "Distance and Voronoi-perimeter laws of large random quadrangulations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// rho(S), mu(S) and E[L/N^{1/2}] = mu/rho with its small- and large-S laws.
    Profile {
        /// S grid, within (0, 6].
        #[arg(long, default_value = "0.05:6:120")]
        grid: Grid,
        #[command(flatten)]
        quad: QuadArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// E = rho(S, lambda)/rho(S) on an S x lambda grid, with (1 - E)/S and psi(lambda).
    ScalingLaw {
        /// S grid.
        #[arg(long, default_value = "0.05:2:8")]
        grid: Grid,
        /// lambda grid.
        #[arg(long, default_value = "0:4:41")]
        lambda_grid: Grid,
        #[command(flatten)]
        quad: QuadArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Phi(omega) with its small- and large-omega expansions.
    LocalLaw {
        /// omega grid.
        #[arg(long, default_value = "0.01:100:100:log")]
        grid: Grid,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Density P(l) of l = L/s^2 by numerical Laplace inversion of Phi.
    Density {
        /// l grid, within [1e-3, 200].
        #[arg(long, default_value = "0.001:200:120:log")]
        grid: Grid,
        #[arg(long, value_enum, default_value_t = MethodArg::Talbot)]
        method: MethodArg,
        /// Contour nodes (talbot: 16-32) or functional terms (gaver: 16).
        #[arg(long)]
        nodes: Option<usize>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Exact coefficients of F_s(g, z), the z = 1 identity, and the law of
    /// the number of faces at distance s among maps with N faces.
    Series {
        /// Distance s >= 1.
        #[arg(long)]
        s: usize,
        /// Truncation order in g.
        #[arg(long, default_value_t = 8)]
        order: usize,
        /// Face count N for the normalized z-polynomial.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_enum, default_value_t = TextFormat::Text)]
        format: TextFormat,
        #[arg(long)]
        out: Option<std::path::PathBuf>,
    },
    /// Run every invariant suite and report each check.
    Verify {
        /// Machine-readable report.
        #[arg(long)]
        json: bool,
        #[arg(long)]
        out: Option<std::path::PathBuf>,
        #[arg(long, hide = true)]
        inject_q_corruption: bool,
    },
}

#[derive(Args)]
struct QuadArgs {
    /// Relative quadrature tolerance.
    #[arg(long, default_value_t = QuadratureSpec::default().rel_tol)]
    tol: f64,
    /// Upper end of the t integral.
    #[arg(long, default_value_t = QuadratureSpec::default().t_max)]
    tmax: f64,
}

impl QuadArgs {
    fn spec(&self) -> QuadratureSpec {
        QuadratureSpec {
            t_max: self.tmax,
            rel_tol: self.tol,
            ..QuadratureSpec::default()
        }
    }
}

#[derive(Args)]
struct OutArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write to a file instead of standard output.
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum TextFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Talbot,
    Gaver,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Talbot => Method::Talbot,
            MethodArg::Gaver => Method::Gaver,
        }
    }
}

enum Failure {
    Verification(String),
    Usage(String),
    Numerical(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Verification(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Numerical(_) => 3,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(_) | Error::Grid(_) => Failure::Usage(e.to_string()),
            Error::Io(_) => Failure::Numerical(e.to_string()),
            _ => Failure::Numerical(e.to_string()),
        }
    }
}

fn emit(text: &str, out: &Option<std::path::PathBuf>) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Numerical(format!("writing {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn quad_meta(spec: &QuadratureSpec) -> Value {
    json!({
        "t_max": spec.t_max,
        "abs_tol": spec.abs_tol,
        "rel_tol": spec.rel_tol,
        "max_intervals": spec.max_intervals,
    })
}

fn meta(command: &str, config: Value, tolerances: Value) -> Value {
    json!({
        "command": command,
        "config": config,
        "tolerances": tolerances,
        "versions": { "voronoi": env!("CARGO_PKG_VERSION") },
    })
}

fn grid_meta(g: &Grid) -> Value {
    json!({ "start": g.start, "stop": g.stop, "count": g.count, "log": g.log })
}

fn write_table<R: Row>(rows: &[R], out: &OutArgs, meta: Value) -> Result<(), Failure> {
    let text = match out.format {
        Format::Csv => to_csv(rows),
        Format::Json => output::json_document(meta, output::json_rows(rows)),
    };
    emit(&text, &out.out)
}

fn series_report(s: usize, order: usize, n: Option<usize>, format: TextFormat, out: &Option<std::path::PathBuf>) -> Result<(), Failure> {
    if s == 0 {
        return Err(Failure::Usage("distance 2s >= 2 requires s >= 1".into()));
    }
    let f = f_series(s, order)?;
    let closed = f_closed_z1(s, order)?;
    let one = Rational::from_integer(1.into());
    let identity = f.at_z(&one) == closed;
    let zl = n.map(|n| expected_zl(n, s)).transpose()?;
    let verdict = if identity { "PASS" } else { "FAIL" };
    let text = match format {
        TextFormat::Text => {
            let mut t = format!("F_{s}(g, z) through g^{order}\n");
            for (k, c) in f.coeffs().iter().enumerate() {
                t.push_str(&format!("  g^{k}: {c}\n"));
            }
            t.push_str(&format!("z = 1 closed-form identity: {verdict}\n"));
            if let (Some(n), Some(p)) = (n, &zl) {
                t.push_str(&format!("law of faces at distance {s}, N = {n}: {p}\n"));
            }
            t
        }
        TextFormat::Json => {
            let doc = json!({
                "meta": meta("series", json!({ "s": s, "order": order, "n": n }), json!({ "exact": true })),
                "rows": serde_json::to_value(&f).expect("serializable"),
                "z1_identity": verdict,
                "expected_zl": zl.as_ref().map(|p| serde_json::to_value(p).expect("serializable")),
            });
            let mut t = serde_json::to_string_pretty(&doc).expect("serializable");
            t.push('\n');
            t
        }
    };
    emit(&text, out)?;
    if identity {
        Ok(())
    } else {
        Err(Failure::Verification(format!("z = 1 identity fails for F_{s}")))
    }
}

fn run_verify(json_out: bool, out: &Option<std::path::PathBuf>, corrupt_q: bool) -> Result<(), Failure> {
    let report = verify::run(VerifyOptions { corrupt_q });
    let text = if json_out {
        let doc = json!({
            "meta": meta("verify", json!({ "inject_q_corruption": corrupt_q }), json!({})),
            "passed": report.passed(),
            "checks": serde_json::to_value(&report.checks).expect("serializable"),
        });
        let mut t = serde_json::to_string_pretty(&doc).expect("serializable");
        t.push('\n');
        t
    } else {
        let mut t = String::new();
        for c in &report.checks {
            let status = if c.passed { "PASS" } else { "FAIL" };
            t.push_str(&format!(
                "{status} [{}] {}: measured {:e}, tolerance {:e}",
                c.suite, c.name, c.measured, c.tolerance
            ));
            if let Some(e) = &c.error {
                t.push_str(&format!(" ({e})"));
            }
            t.push('\n');
        }
        t
    };
    emit(&text, out)?;
    match report.first_failure() {
        None => Ok(()),
        Some(c) => Err(Failure::Verification(format!("first failure: [{}] {}", c.suite, c.name))),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Profile { grid, quad, out } => {
            let spec = quad.spec();
            spec.validate()?;
            let rows = profile_rows(&grid.points(), &spec)?;
            let m = meta("profile", json!({ "grid": grid_meta(&grid) }), quad_meta(&spec));
            write_table(&rows, &out, m)
        }
        Command::ScalingLaw { grid, lambda_grid, quad, out } => {
            let spec = quad.spec();
            spec.validate()?;
            let rows = scaling_law_rows(&grid.points(), &lambda_grid.points(), &spec)?;
            let config = json!({ "grid": grid_meta(&grid), "lambda_grid": grid_meta(&lambda_grid) });
            write_table(&rows, &out, meta("scaling-law", config, quad_meta(&spec)))
        }
        Command::LocalLaw { grid, out } => {
            let rows = local_law_rows(&grid.points())?;
            let m = meta("local-law", json!({ "grid": grid_meta(&grid) }), json!({}));
            write_table(&rows, &out, m)
        }
        Command::Density { grid, method, nodes, out } => {
            let method = Method::from(method);
            let spec = InversionSpec::new(method, nodes.unwrap_or(method.default_nodes()))?;
            let table = density_table(&grid.points(), &spec)?;
            let config = json!({ "grid": grid_meta(&grid), "method": method.name(), "nodes": spec.nodes });
            let tolerances = json!({
                "cross_method": "max(1e-4, 1e-3 P)",
                "cross_residual": table.cross_residual,
                "clipped_rows": table.clipped,
            });
            write_table(&table.rows, &out, meta("density", config, tolerances))
        }
        Command::Series { s, order, n, format, out } => series_report(s, order, n, format, &out),
        Command::Verify { json, out, inject_q_corruption } => run_verify(json, &out, inject_q_corruption),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let (Failure::Verification(m) | Failure::Usage(m) | Failure::Numerical(m)) = &f;
            eprintln!("voronoi: {m}");
            ExitCode::from(f.code())
        }
    }
}
