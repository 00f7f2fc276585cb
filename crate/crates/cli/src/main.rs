mod views;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use bohrspec::algebra::FinCommAlgebra;
use bohrspec::aqft::NetDiagram;
use bohrspec::bohrify::{full_context_poset, BohrSpec};
use bohrspec::bundle::{ContextDiagram, DEFAULT_MAX_OPENS};
use bohrspec::lattice::{build_la, Presentation};
use bohrspec::verify::{self, Suite};
use bohrspec::Error;

use views::Report;

#[derive(Parser, Debug)]
#[command(name = "bohrspec", version, about = "Exact point-free Gelfand spectra over finite posets of contexts")]
struct Cli {
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Upper bound on enumerated opens and lattice sizes.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_OPENS)]
    max_size: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Dot,
    Table,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// A presented lattice or `L_A` for `A = Q[i]^k`.
    Lattice {
        #[command(flatten)]
        source: LatticeSource,
        /// `expr` or `expr <= expr`.
        #[arg(long)]
        query: Option<String>,
    },
    /// Well-inside relation, regular spectrum and rounded ideals of a lattice.
    Spectrum {
        #[command(flatten)]
        source: LatticeSource,
    },
    /// Bohrification over partitions of a finite base set.
    Bohr {
        /// Use every partition of `{1..n}`.
        #[arg(long, conflicts_with = "input")]
        n: Option<usize>,
        /// Bohr context document.
        #[arg(long, required_unless_present = "n")]
        input: Option<PathBuf>,
        #[arg(value_enum, default_value_t = View::Points)]
        view: View,
    },
    /// A context diagram document.
    Diagram {
        #[arg(long)]
        input: PathBuf,
        #[arg(value_enum, default_value_t = View::Points)]
        view: View,
    },
    /// A net of regions with contexts per region.
    Aqft {
        #[arg(long)]
        input: PathBuf,
        #[arg(value_enum, default_value_t = NetView::Points)]
        view: NetView,
    },
    /// Run the property suites.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// DOT drawing of the points under specialization or of the context poset.
    Export {
        #[arg(long, conflicts_with = "input")]
        n: Option<usize>,
        /// Bohr, net or diagram document.
        #[arg(long, required_unless_present = "n")]
        input: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Graph::Points)]
        graph: Graph,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct LatticeSource {
    /// Presentation document.
    #[arg(long)]
    present: Option<PathBuf>,
    /// Number of outcomes `k` of `Q[i]^k`.
    #[arg(long)]
    algebra: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum View {
    Contexts,
    Points,
    Opens,
    Sier,
    Frame,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum NetView {
    Points,
    Generic,
    Check,
    Sigma,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Graph {
    Points,
    Contexts,
}

/// Why a command produced no output; always exit code 1.
enum Failure {
    Invalid(Error),
    Io(PathBuf, std::io::Error),
    Unsupported(&'static str),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Invalid(e)
    }
}

impl Failure {
    /// `origin` names the flag or file the input came from, used when the
    /// error has no path of its own.
    fn to_json(&self, origin: &str) -> serde_json::Value {
        let (kind, path, message) = match self {
            Failure::Invalid(e) => (e.kind(), Some(e.path().filter(|p| !p.is_empty()).unwrap_or(origin).to_string()), e.to_string()),
            Failure::Io(p, e) => ("Io", Some(p.display().to_string()), e.to_string()),
            Failure::Unsupported(m) => ("Unsupported", Some("format".to_string()), m.to_string()),
        };
        json!({ "error": { "kind": kind, "path": path, "message": message } })
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

fn lattice_source(src: &LatticeSource, max: usize) -> Result<views::Lat, Failure> {
    if let Some(p) = &src.present {
        let pres = Presentation::from_json(&read(p)?)?.present()?;
        return Ok(views::Lat::Presented(pres));
    }
    let k = src.algebra.expect("clap enforces one source");
    if k >= 64 || 1usize << k > max {
        return Err(Error::TooLarge { what: "L_A".into(), size: k, max }.into());
    }
    Ok(views::Lat::Algebra(build_la(Arc::new(FinCommAlgebra::standard(k)?))?))
}

/// Reads a Bohr document, a net (`regions` key) or a plain diagram.
fn any_diagram(n: Option<usize>, input: Option<&Path>) -> Result<Arc<ContextDiagram>, Failure> {
    if let Some(n) = n {
        return Ok(full_context_poset(n)?.diagram);
    }
    let path = input.expect("clap enforces one source");
    let text = read(path)?;
    let keys: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| Error::Schema { path: String::new(), message: e.to_string() })?;
    if keys.get("bohr").is_some() {
        Ok(BohrSpec::from_json(&text)?.build()?.diagram)
    } else if keys.get("regions").is_some() {
        Ok(Arc::new(bohrspec::aqft::build_p(&NetDiagram::from_json(&text)?)?))
    } else {
        Ok(Arc::new(ContextDiagram::from_json(&text)?))
    }
}

fn run(cli: &Cli) -> Result<Report, Failure> {
    let max = cli.max_size;
    match &cli.command {
        Command::Lattice { source, query } => {
            let lat = lattice_source(source, max)?;
            match query {
                Some(q) => Ok(views::query(&lat, q)?),
                None => Ok(views::lattice(&lat)),
            }
        }
        Command::Spectrum { source } => Ok(views::spectrum(&lattice_source(source, max)?)?),
        Command::Bohr { n, input, view } => {
            let d = match (n, input) {
                (Some(n), _) => full_context_poset(*n)?.diagram,
                (None, Some(p)) => BohrSpec::from_json(&read(p)?)?.build()?.diagram,
                (None, None) => unreachable!("clap enforces one source"),
            };
            Ok(views::diagram(&d, *view, max)?)
        }
        Command::Diagram { input, view } => {
            let d = Arc::new(ContextDiagram::from_json(&read(input)?)?);
            Ok(views::diagram(&d, *view, max)?)
        }
        Command::Aqft { input, view } => Ok(views::net(&NetDiagram::from_json(&read(input)?)?, *view)?),
        Command::Verify { suite, seed } => {
            let suite: Suite = suite.parse()?;
            Ok(views::checks(&verify::run(suite, *seed)))
        }
        Command::Export { n, input, graph } => {
            let d = any_diagram(*n, input.as_deref())?;
            Ok(views::export(&d, *graph)?)
        }
    }
}

fn origin(c: &Command) -> String {
    let file = |p: &Option<PathBuf>, flag: &str| p.as_ref().map_or_else(|| flag.to_string(), |p| p.display().to_string());
    match c {
        Command::Lattice { source, .. } | Command::Spectrum { source } => file(&source.present, "--algebra"),
        Command::Bohr { input, .. } | Command::Export { input, .. } => file(input, "--n"),
        Command::Diagram { input, .. } | Command::Aqft { input, .. } => input.display().to_string(),
        Command::Verify { .. } => "--suite".to_string(),
    }
}

fn default_format(c: &Command) -> Format {
    match c {
        Command::Verify { .. } => Format::Table,
        Command::Export { .. } => Format::Dot,
        _ => Format::Json,
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var("BOHRSPEC_THREADS") else { return Ok(()) };
    let n: usize = v.trim().parse().map_err(|_| Error::Schema {
        path: "BOHRSPEC_THREADS".into(),
        message: format!("expected a positive integer, got `{v}`"),
    })?;
    if n == 0 {
        return Err(Error::Schema { path: "BOHRSPEC_THREADS".into(), message: "must be at least 1".into() }.into());
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::Schema { path: "BOHRSPEC_THREADS".into(), message: e.to_string() }.into())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = configure_threads().and_then(|()| {
        let report = run(&cli)?;
        let format = cli.format.unwrap_or_else(|| default_format(&cli.command));
        Ok((report.render(format).ok_or(Failure::Unsupported("this command has no output in that format"))?, report.ok))
    });
    match result {
        Ok((text, ok)) => {
            print!("{text}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(f) => {
            eprintln!("{}", f.to_json(&origin(&cli.command)));
            ExitCode::from(1)
        }
    }
}
