//! Command-line front end.
//!
//! Exit status: 0 on success, 1 when a verification suite fails, 2 on usage,
//! parse or I/O errors.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::engine::{evolve, step};
use crate::gf2::{MatrixFormat, MatrixHeader};
use crate::graph::RuleGraph;
use crate::grid::{Grid, GridFormat};
use crate::rulematrix::build;
use crate::rules::{Fundamental, RuleNumber};
use crate::verify::{self, VerificationReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "linca",
    version,
    about = "Linear two-dimensional cellular automata: grids, rule matrices and color graphs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decomposition, offsets and transpose partner of a rule.
    Info {
        #[arg(value_parser = parse_rule)]
        rule: RuleNumber,
    },
    /// Apply a rule once to a grid file.
    Step {
        #[arg(long, value_parser = parse_rule)]
        rule: RuleNumber,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Apply a rule repeatedly.
    Evolve {
        #[arg(long, value_parser = parse_rule)]
        rule: RuleNumber,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        steps: usize,
        /// Print every generation, separated by blank lines.
        #[arg(long)]
        all: bool,
    },
    /// Print the rule matrix for an m x n grid.
    Matrix {
        #[arg(long, value_parser = parse_rule)]
        rule: RuleNumber,
        #[arg(long)]
        rows: usize,
        #[arg(long)]
        cols: usize,
        #[arg(long, value_enum, default_value_t = FormatArg::Dense)]
        format: FormatArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit the rule graph as DOT.
    Graph {
        #[arg(long, value_parser = parse_rule)]
        rule: RuleNumber,
        #[arg(long)]
        rows: usize,
        #[arg(long)]
        cols: usize,
        #[arg(long)]
        dot: Option<PathBuf>,
        #[arg(long)]
        uncolored: bool,
    },
    /// Graph statistics, popcount and rank of a rule matrix.
    Analyze {
        #[arg(long, value_parser = parse_rule)]
        rule: RuleNumber,
        #[arg(long)]
        rows: usize,
        #[arg(long)]
        cols: usize,
    },
    /// Run verification suites.
    Verify {
        #[arg(long)]
        rows: usize,
        #[arg(long)]
        cols: usize,
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 16)]
        trials: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Dense,
    Coords,
}

impl From<FormatArg> for MatrixFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Dense => MatrixFormat::Dense,
            FormatArg::Coords => MatrixFormat::Coords,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Equivalence,
    Theorems,
    Join,
    Golden,
    All,
}

fn parse_rule(s: &str) -> Result<RuleNumber, String> {
    s.parse().map_err(|e: crate::Error| e.to_string())
}

#[derive(Debug)]
struct CliError(String);

impl<E: std::error::Error> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError(e.to_string())
    }
}

fn read_grid(path: &Path) -> Result<Grid, CliError> {
    let text =
        fs::read_to_string(path).map_err(|e| CliError(format!("{}: {e}", path.display())))?;
    Grid::parse(&text).map_err(|e| CliError(format!("{}: {e}", path.display())))
}

fn emit(text: &str, dest: Option<&Path>, out: &mut dyn Write) -> Result<(), CliError> {
    match dest {
        Some(p) => fs::write(p, text).map_err(|e| CliError(format!("{}: {e}", p.display()))),
        None => Ok(out.write_all(text.as_bytes())?),
    }
}

/// Parses `args` (including the program name) and executes the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(CliError(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
    }
}

fn execute(command: Command, out: &mut dyn Write) -> Result<i32, CliError> {
    match command {
        Command::Info { rule } => {
            out.write_all(info_text(rule).as_bytes())?;
        }
        Command::Step {
            rule,
            input,
            out: dest,
        } => {
            let grid = read_grid(&input)?;
            let next = step(&grid, rule);
            emit(&next.serialize(GridFormat::Plain), dest.as_deref(), out)?;
        }
        Command::Evolve {
            rule,
            input,
            steps,
            all,
        } => {
            let grid = read_grid(&input)?;
            let trajectory = evolve(&grid, rule, steps);
            let text = if all {
                trajectory
                    .iter()
                    .map(|g| g.serialize(GridFormat::Plain))
                    .collect::<Vec<_>>()
                    .join("\n")
            } else {
                trajectory
                    .last()
                    .expect("non-empty")
                    .serialize(GridFormat::Plain)
            };
            out.write_all(text.as_bytes())?;
        }
        Command::Matrix {
            rule,
            rows,
            cols,
            format,
            out: dest,
        } => {
            let m = build(rule, rows, cols)?;
            let header = MatrixHeader::Rule {
                rule: rule.value(),
                rows,
                cols,
            };
            emit(&m.to_text(format.into(), &header), dest.as_deref(), out)?;
        }
        Command::Graph {
            rule,
            rows,
            cols,
            dot,
            uncolored,
        } => {
            let g = if uncolored {
                RuleGraph::from_matrix(&build(rule, rows, cols)?).with_grid_dims(rows, cols)
            } else {
                RuleGraph::colored(rule, rows, cols)?
            };
            emit(&g.to_dot(), dot.as_deref(), out)?;
        }
        Command::Analyze { rule, rows, cols } => {
            out.write_all(analyze_text(rule, rows, cols)?.as_bytes())?;
        }
        Command::Verify {
            rows,
            cols,
            suite,
            trials,
            seed,
        } => {
            let reports = run_suites(rows, cols, suite, trials, seed)?;
            let text: Vec<String> = reports.iter().map(VerificationReport::render).collect();
            out.write_all(text.join("\n").as_bytes())?;
            if reports.iter().any(|r| !r.passed()) {
                return Ok(EXIT_VERIFY_FAILED);
            }
        }
    }
    Ok(EXIT_OK)
}

fn run_suites(
    rows: usize,
    cols: usize,
    suite: SuiteArg,
    trials: u64,
    seed: u64,
) -> Result<Vec<VerificationReport>, CliError> {
    let all_rules: Vec<RuleNumber> = RuleNumber::all().collect();
    let mut reports = Vec::new();
    if matches!(suite, SuiteArg::Equivalence | SuiteArg::All) {
        reports.push(verify::verify_equivalence(
            rows, cols, &all_rules, trials, seed,
        )?);
    }
    if matches!(suite, SuiteArg::Theorems | SuiteArg::All) {
        reports.push(verify::verify_theorems(rows, cols)?);
    }
    if matches!(suite, SuiteArg::Join | SuiteArg::All) {
        reports.push(verify::verify_join_laws(rows, cols)?);
    }
    if matches!(suite, SuiteArg::Golden | SuiteArg::All) {
        reports.push(verify::verify_golden_corpus()?);
    }
    Ok(reports)
}

pub fn info_text(rule: RuleNumber) -> String {
    let mut s = String::new();
    let parts: Vec<String> = rule.fundamentals().map(|f| f.to_string()).collect();
    let _ = writeln!(s, "rule {rule}");
    let _ = writeln!(s, "binary {}", rule.binary());
    if parts.is_empty() {
        let _ = writeln!(s, "{rule} = 0 (no dependency)");
    } else {
        let _ = writeln!(s, "{rule} = {}", parts.join(" + "));
    }
    let _ = writeln!(s, "fundamental  offset (dr, dc)  partner");
    for f in Fundamental::ALL {
        let mark = if rule.contains(f) { '*' } else { ' ' };
        let _ = writeln!(
            s,
            "{mark}{:>10}  {:>15}  {:>7}",
            f.weight(),
            f.offset().to_string(),
            f.transpose_partner()
        );
    }
    let _ = writeln!(s, "transpose partner rule {}", rule.transpose_partner());
    s
}

fn analyze_text(rule: RuleNumber, rows: usize, cols: usize) -> Result<String, CliError> {
    let m = build(rule, rows, cols)?;
    let g = RuleGraph::colored(rule, rows, cols)?;
    let st = g.stats();
    let rank = m.rank();
    let list = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(" ");
    let mut s = String::new();
    let _ = writeln!(s, "rule {rule} rows {rows} cols {cols} dim {}", m.dim());
    let _ = writeln!(s, "vertices {}", g.vertex_count());
    let _ = writeln!(s, "edges {}", g.edges().len());
    let _ = writeln!(s, "self loops {}", st.self_loop_count);
    let _ = writeln!(s, "isolated [{}]", list(&st.isolated));
    let _ = writeln!(s, "weak components {}", st.weak_components.len());
    for c in &st.weak_components {
        let _ = writeln!(s, "  {{{}}}", list(c));
    }
    let _ = writeln!(s, "out degrees [{}]", list(&st.out_degrees));
    let _ = writeln!(s, "in degrees [{}]", list(&st.in_degrees));
    let _ = writeln!(s, "popcount {}", m.popcount());
    let _ = writeln!(s, "rank {rank}");
    let _ = writeln!(
        s,
        "invertible {}",
        if rank == m.dim() { "yes" } else { "no" }
    );
    Ok(s)
}
