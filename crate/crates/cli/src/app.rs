//! Argument parsing and dispatch for the `toric` binary.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use toric_core::error::{Error, Result};
use toric_core::padic::PadicConfig;

use crate::commands;

#[derive(Parser, Debug)]
#[command(name = "toric", version, about = "Toric regulators over p-adic fields")]
pub struct Cli {
    #[command(flatten)]
    pub opts: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalOpts {
    /// Residue characteristic.
    #[arg(long, global = true, default_value_t = 5)]
    pub p: u32,
    /// Relative precision N.
    #[arg(long, short = 'N', global = true, default_value_t = 20)]
    pub precision: u32,
    /// Digits given up in equality tests.
    #[arg(long, global = true, default_value_t = 2)]
    pub slack: u32,
    /// Truncation length (theta products, words).
    #[arg(long = "L", global = true)]
    pub l: Option<usize>,
    /// Largest truncation any iterative product may reach.
    #[arg(long = "L-max", global = true, default_value_t = 64)]
    pub l_max: usize,
    /// Search bound for lattice membership.
    #[arg(long = "bound", short = 'B', global = true, default_value_t = 5)]
    pub bound: u64,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Rank and torsion of H^1 of a graph.
    GraphH1 { graph: PathBuf },
    /// Basis of harmonic integer cochains, optionally projecting a cochain.
    GraphHarmonic {
        graph: PathBuf,
        /// Integer cochain (object keyed by edge id) to project.
        #[arg(long)]
        cochain: Option<PathBuf>,
    },
    /// All nonzero groups T_j^i of stratum data (or of a curve's dual graph).
    Tgroups { data: PathBuf },
    /// Monodromy N: T_j^i -> T_{j-1}^{i+2}, its isogeny and pairing checks.
    Monodromy {
        data: PathBuf,
        #[arg(long, short = 'i', default_value_t = -1, allow_hyphen_values = true)]
        i: i64,
        #[arg(long, short = 'j', default_value_t = 1)]
        j: i64,
    },
    /// Deligne cohomology from the cone of N, with the exact-sequence count.
    Consani {
        data: PathBuf,
        /// Degree k (all of 0..=1 when omitted).
        #[arg(long)]
        k: Option<i64>,
        /// Twist r (all of 0..=2 when omitted).
        #[arg(long)]
        r: Option<i64>,
    },
    /// Normal form of an element of a toric Jacobian.
    JacobianReduce { jacobian: PathBuf, element: PathBuf },
    /// Tame symbol of two split functions at a point.
    SymbolTame {
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        #[arg(long, allow_hyphen_values = true)]
        g: String,
        /// Point: a literal or `inf`.
        #[arg(long, allow_hyphen_values = true)]
        at: String,
    },
    /// Annulus symbol t_e(f, g).
    SymbolAnnulus {
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        #[arg(long, allow_hyphen_values = true)]
        g: String,
        /// Valuation bounds `a,b` of the annulus a < v(z - c) < b.
        #[arg(long)]
        annulus: String,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        center: String,
        /// Orient towards the low-valuation side.
        #[arg(long)]
        reversed: bool,
    },
    /// Product of annulus symbols around removed discs, which must be 1.
    ResidueCheck {
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        #[arg(long, allow_hyphen_values = true)]
        g: String,
        boundary: PathBuf,
    },
    /// Period matrix of a Schottky group.
    MumfordPeriods { schottky: PathBuf },
    /// Residues of theta functions against the Hurewicz map.
    MumfordResidues { schottky: PathBuf },
    /// K_2 regulator cochain of a curve.
    RegK2 { input: PathBuf },
    /// K_1 regulator of a surface with its well-definedness checks.
    RegK1 {
        input: PathBuf,
        /// Scalar used by the normalization check.
        #[arg(long, default_value = "6", allow_hyphen_values = true)]
        scale: String,
    },
    /// Every property check, one line each.
    VerifyAll,
}

/// Result of one command: canonical text, its JSON form and whether a
/// verification failed.
#[derive(Debug, Default)]
pub struct Output {
    pub lines: Vec<String>,
    pub json: Value,
    pub failed: bool,
}

impl Output {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => {
                let mut s = self.lines.join("\n");
                s.push('\n');
                s
            }
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("serializable");
                s.push('\n');
                s
            }
        }
    }
}

impl GlobalOpts {
    pub fn config(&self) -> Result<PadicConfig> {
        Ok(PadicConfig::new(self.p, self.precision)?
            .with_slack(self.slack)?
            .with_max_truncation(self.l_max))
    }
}

pub fn dispatch(cli: &Cli) -> Result<Output> {
    let o = &cli.opts;
    match &cli.command {
        Command::GraphH1 { graph } => commands::graph_h1(graph),
        Command::GraphHarmonic { graph, cochain } => commands::graph_harmonic(graph, cochain.as_deref()),
        Command::Tgroups { data } => commands::tgroups(data),
        Command::Monodromy { data, i, j } => commands::monodromy(data, *i, *j),
        Command::Consani { data, k, r } => commands::consani(data, *k, *r),
        Command::JacobianReduce { jacobian, element } => commands::jacobian_reduce(o, jacobian, element),
        Command::SymbolTame { f, g, at } => commands::symbol_tame(o, f, g, at),
        Command::SymbolAnnulus {
            f,
            g,
            annulus,
            center,
            reversed,
        } => commands::symbol_annulus(o, f, g, annulus, center, *reversed),
        Command::ResidueCheck { f, g, boundary } => commands::residue_check(o, f, g, boundary),
        Command::MumfordPeriods { schottky } => commands::mumford_periods(o, schottky),
        Command::MumfordResidues { schottky } => commands::mumford_residues(o, schottky),
        Command::RegK2 { input } => commands::reg_k2(o, input),
        Command::RegK1 { input, scale } => commands::reg_k1(o, input, scale),
        Command::VerifyAll => Ok(commands::verify_all()),
    }
}

/// Runs a parsed command line; returns the text for stdout, the text for
/// stderr and the exit code.
pub fn run(cli: &Cli) -> (String, String, i32) {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(cli.opts.threads).build();
    let result = match pool {
        Ok(pool) => pool.install(|| dispatch(cli)),
        Err(e) => Err(Error::Contract(format!("thread pool: {e}"))),
    };
    match result {
        Ok(out) => {
            let code = if out.failed { 2 } else { 0 };
            (out.render(cli.opts.format), String::new(), code)
        }
        Err(e) if is_verification_error(&e) => {
            let out = Output {
                lines: vec![format!("FAIL {e}")],
                json: json!({ "status": "FAIL", "error": e.to_string() }),
                failed: true,
            };
            (out.render(cli.opts.format), String::new(), 2)
        }
        Err(e) => (String::new(), format!("error: {e}\n"), 1),
    }
}

/// Errors meaning the input parsed but a mathematical check did not hold.
fn is_verification_error(e: &Error) -> bool {
    matches!(e, Error::Mismatch(_) | Error::NotInK2(_) | Error::InconsistentData(_))
}
