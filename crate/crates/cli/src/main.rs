use std::fmt::Write as _;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use tropmod::json::{
    curve_from_json, curve_to_json, manifest_to_json, position_to_json, quotient_to_json,
    witness_to_json,
};
use tropmod::moduli::ModuliSpace;
use tropmod::tautological::{
    clutch, clutch_xy, cover_boundary, forget, glue, glue_xy, quotient_by_automorphisms, section,
};
use tropmod::verify::{self, Suite, VerifyConfig};
use tropmod::{Curve, Error, Length, Rational};

#[derive(Parser)]
#[command(name = "tropmod", version, about = "Moduli spaces of extended tropical curves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the strata of M̄_{g,n}, ordered by dimension and canonical form.
    Enumerate {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Apply a tautological map to curve JSON read from stdin.
    Map {
        #[arg(value_enum)]
        verb: Verb,
        /// Leg index (from 1) for `section`.
        #[arg(long)]
        i: Option<usize>,
        /// Length on the first curve's side for `clutch-xy` / `glue-xy`.
        #[arg(long)]
        x: Option<String>,
        #[arg(long)]
        y: Option<String>,
        /// With `forget`, also print the position of the forgotten leg.
        #[arg(long)]
        with_point: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run invariant suites on M̄_{g,n}.
    Verify {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "all", value_parser = clap::builder::PossibleValuesParser::new(Suite::NAMES))]
        suite: String,
        /// Largest 3g-3+n accepted; overrides TROPMOD_BOUND.
        #[arg(long)]
        bound: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Hasse diagram of the strata poset in DOT.
    Poset {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Dot,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Verb {
    Forget,
    Section,
    Clutch,
    Glue,
    ClutchXy,
    GlueXy,
    CoverBoundary,
    Quotient,
}

enum Failure {
    Usage(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(report)) => {
            print!("{report}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn emit(out: Option<PathBuf>, text: &str) -> Result<(), Failure> {
    let mut text = text.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match out {
        Some(path) => std::fs::write(&path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display()))),
        None => io::stdout().write_all(text.as_bytes()).map_err(|e| Failure::Usage(e.to_string())),
    }
}

fn pretty(value: &Value) -> String {
    serde_json::to_string_pretty(value).expect("json values serialize")
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Enumerate { g, n, format, out } => {
            let space = ModuliSpace::build(g, n)?;
            let text = match format {
                Format::Json => pretty(&manifest_to_json(&space)),
                Format::Dot => space.poset_dot(),
                Format::Csv => csv(&space),
            };
            emit(out, &text)
        }
        Command::Poset { g, n, out } => emit(out, &ModuliSpace::build(g, n)?.poset_dot()),
        Command::Verify { g, n, suite, bound, out } => {
            let mut config = VerifyConfig::from_env()?;
            if let Some(b) = bound {
                config.bound = b;
            }
            let report = verify::run(g, n, suite.parse()?, &config)?;
            let text = report.to_string();
            if !report.passed() {
                return Err(Failure::Verification(format!("{text}\n")));
            }
            emit(out, &text)
        }
        Command::Map { verb, i, x, y, with_point, out } => {
            let mut input = String::new();
            io::stdin().read_to_string(&mut input).map_err(|e| Failure::Usage(e.to_string()))?;
            let value: Value =
                serde_json::from_str(&input).map_err(|e| Error::Schema(format!("stdin is not JSON: {e}")))?;
            let result = map(verb, &value, i, x.as_deref(), y.as_deref(), with_point)?;
            emit(out, &pretty(&result))
        }
    }
}

fn csv(space: &ModuliSpace) -> String {
    let mut out = String::from("id,dim,vertices,edges,aut_order,monodromy_order,form\n");
    for (id, s) in space.strata().iter().enumerate() {
        let _ = writeln!(
            out,
            "{id},{},{},{},{},{},{}",
            s.dim(),
            s.graph.num_vertices(),
            s.graph.num_edges(),
            s.aut_order,
            s.monodromy.len(),
            s.form.to_hex()
        );
    }
    out
}

fn length_arg(name: &str, value: Option<&str>) -> Result<Length, Failure> {
    let text = value.ok_or_else(|| Failure::Usage(format!("--{name} is required")))?;
    Length::parse_text(text).ok_or_else(|| Failure::Usage(format!("--{name} {text:?} is not a length (p/q or inf)")))
}

fn stable_curve(value: &Value) -> Result<Curve, Failure> {
    let c: Curve = curve_from_json(value)?;
    if !c.is_stable() {
        return Err(Error::NotStable.into());
    }
    Ok(c)
}

fn pair(value: &Value) -> Result<(Curve, Curve), Failure> {
    match value.as_array().map(Vec::as_slice) {
        Some([a, b]) => Ok((stable_curve(a)?, stable_curve(b)?)),
        _ => Err(Error::Schema("expected a JSON array of two curves".into()).into()),
    }
}

fn canonical(c: &Curve) -> Value {
    curve_to_json(&c.canonical().0)
}

fn map(verb: Verb, value: &Value, i: Option<usize>, x: Option<&str>, y: Option<&str>, with_point: bool) -> Result<Value, Failure> {
    Ok(match verb {
        Verb::Forget => {
            let (c, p) = forget(&stable_curve(value)?)?;
            let (canon, iso) = c.canonical();
            if with_point {
                json!({"curve": curve_to_json(&canon), "point": position_to_json(&canon, &p.transport(&iso))})
            } else {
                curve_to_json(&canon)
            }
        }
        Verb::Section => {
            let c = stable_curve(value)?;
            let i = i.ok_or_else(|| Failure::Usage("--i is required".into()))?;
            if i == 0 || i > c.num_legs() {
                return Err(Error::LegOutOfRange { index: i, count: c.num_legs() }.into());
            }
            canonical(&section(&c, i - 1)?)
        }
        Verb::Clutch => {
            let (a, b) = pair(value)?;
            canonical(&clutch(&a, &b)?)
        }
        Verb::ClutchXy => {
            let (a, b) = pair(value)?;
            canonical(&clutch_xy(&a, &b, &length_arg("x", x)?, &length_arg("y", y)?)?)
        }
        Verb::Glue => canonical(&glue(&stable_curve(value)?)?),
        Verb::GlueXy => canonical(&glue_xy(&stable_curve(value)?, &length_arg("x", x)?, &length_arg("y", y)?)?),
        Verb::CoverBoundary => witness_to_json(&cover_boundary(&stable_curve(value)?)?),
        Verb::Quotient => quotient_to_json(&quotient_by_automorphisms::<Rational>(&stable_curve(value)?)),
    })
}
