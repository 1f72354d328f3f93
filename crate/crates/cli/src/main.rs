use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cosheaf::Ring;

mod commands;
mod examples;
mod report;

use report::{CliError, Report};

/// Exact cosheaf homology on finite Grothendieck sites.
///
/// Exit status: 0 success, 1 unreadable input, 2 malformed input or
/// parameters, 3 violated invariant, 4 a diagnostic answered Unknown or
/// Inconclusive.
#[derive(Parser)]
#[command(name = "cosheaf", version)]
struct Cli {
    /// Emit the report as JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Coefficient ring: Z, Q or Fp:<prime> (default Z).
    #[arg(long, global = true, value_parser = parse_ring)]
    ring: Option<Ring>,

    #[command(subcommand)]
    command: Command,
}

fn parse_ring(s: &str) -> Result<Ring, String> {
    s.parse::<Ring>().map_err(|e| e.to_string())
}

#[derive(Subcommand)]
enum Command {
    /// Check a site description against the Grothendieck-topology axioms.
    Site {
        #[command(subcommand)]
        action: SiteAction,
    },
    /// Čech homology of a precosheaf (or cohomology of a presheaf) at an object.
    Homology {
        /// `cech`: the complex of the initial cover; `roos`: the complex of
        /// the minimal covering sieve.
        route: Route,
        #[command(flatten)]
        input: DiagramInput,
        #[command(flatten)]
        degrees: DegreeArgs,
    },
    /// The plus construction applied twice, with the cosheaf checks.
    Cosheafify {
        #[command(flatten)]
        input: DiagramInput,
        /// Write the cosheafification here as a precosheaf file.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Left satellites of H₀ over the minimal covering sieve.
    Satellite {
        #[command(flatten)]
        input: DiagramInput,
        #[command(flatten)]
        degrees: DegreeArgs,
        /// Length of the free resolution (at least max-degree + 1).
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
    /// The two spectral sequences of a bicomplex.
    Spectral {
        /// Bicomplex file.
        #[arg(long)]
        bicomplex: PathBuf,
        #[arg(long, value_enum, default_value_t = OrientationArg::Both)]
        orientation: OrientationArg,
        /// Also print the pages E^0..E^r.
        #[arg(long)]
        pages: Option<usize>,
    },
    /// Towers of modules.
    Pro {
        #[command(subcommand)]
        action: ProAction,
    },
    /// Run a builtin example, list the registry, or print its input files.
    Example {
        /// Example name; omit to list the registry.
        name: Option<String>,
        /// List the registry.
        #[arg(long)]
        list: bool,
        /// Print one of the example's inputs (site, precosheaf, tower,
        /// bicomplex) as JSON instead of running it.
        #[arg(long)]
        emit: Option<String>,
        #[arg(long, default_value_t = 2)]
        max_degree: usize,
        /// Truncation bound for tower examples.
        #[arg(long, default_value_t = 10)]
        bound: usize,
    },
    /// Parse and check any input file, reporting diagnostics.
    Validate {
        /// File to check.
        file: PathBuf,
        /// Kind of file; guessed from its fields when omitted.
        #[arg(long, value_enum)]
        kind: Option<Kind>,
        /// Site a precosheaf file lives on.
        #[arg(long)]
        site: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum SiteAction {
    /// Parse the site and check the axioms.
    Check {
        #[arg(long)]
        site: PathBuf,
    },
}

#[derive(Subcommand)]
enum ProAction {
    /// Zero, rudimentary and pairing diagnostics up to a bound.
    Check {
        /// Tower file.
        #[arg(long, conflicts_with = "builtin", required_unless_present = "builtin")]
        tower: Option<PathBuf>,
        /// Builtin tower rule.
        #[arg(long, value_enum)]
        builtin: Option<BuiltinTower>,
        /// Coefficients G of a builtin tower (see --constant).
        #[arg(long, default_value = "R")]
        g: String,
        /// Truncation bound.
        #[arg(long, default_value_t = 10)]
        bound: usize,
        /// Module M for the pairing colimit (see --constant).
        #[arg(long, default_value = "R")]
        pairing: String,
    },
}

#[derive(Args)]
pub struct DiagramInput {
    /// Site file.
    #[arg(long)]
    pub site: PathBuf,
    /// Precosheaf or presheaf file.
    #[arg(long, conflicts_with = "constant", required_unless_present = "constant")]
    pub precosheaf: Option<PathBuf>,
    /// Constant coefficients instead of a file: `R` (or Z, Q, F) for the
    /// ring itself, or comma-separated cyclic orders with 0 for a free
    /// summand, e.g. `0,2`. On a space this is the constant cosheaf.
    #[arg(long)]
    pub constant: Option<String>,
    /// Object to evaluate at; defaults to the terminal object.
    #[arg(long)]
    pub object: Option<String>,
}

#[derive(Args)]
pub struct DegreeArgs {
    #[arg(long, default_value_t = 2)]
    pub max_degree: usize,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Route {
    Cech,
    Roos,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OrientationArg {
    Vertical,
    Horizontal,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum BuiltinTower {
    #[value(name = "convergentB")]
    ConvergentB,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Site,
    Precosheaf,
    Tower,
    Bicomplex,
}

fn run(cli: &Cli) -> Result<Report, CliError> {
    let ring = cli.ring;
    match &cli.command {
        Command::Site { action: SiteAction::Check { site } } => commands::site_check(site),
        Command::Homology { route, input, degrees } => commands::homology(*route, input, degrees.max_degree, ring),
        Command::Cosheafify { input, output } => commands::cosheafify(input, output.as_deref(), ring),
        Command::Satellite { input, degrees, depth } => commands::satellite(input, degrees.max_degree, *depth, ring),
        Command::Spectral { bicomplex, orientation, pages } => commands::spectral(bicomplex, *orientation, *pages),
        Command::Pro { action: ProAction::Check { tower, builtin, g, bound, pairing } } => {
            commands::pro_check(tower.as_deref(), *builtin, g, *bound, pairing, ring)
        }
        Command::Example { name, list, emit, max_degree, bound } => match name {
            Some(name) if !list => examples::run(name, emit.as_deref(), *max_degree, *bound, ring),
            _ => Ok(examples::list()),
        },
        Command::Validate { file, kind, site } => commands::validate(file, *kind, site.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let outcome = run(&cli);
    // timing goes to stderr so that reports stay byte-identical
    eprintln!("elapsed: {:.3} s", start.elapsed().as_secs_f64());
    match outcome {
        Ok(report) => {
            print!("{}", if cli.json { report.to_json() } else { report.to_text() });
            ExitCode::from(report.status.exit_code())
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
