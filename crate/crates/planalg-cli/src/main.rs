//! Command-line surface for the planar diagram algebra engine: enumeration,
//! multiplication, relation checks, trace and Gram analysis, quantization
//! scans, tower graphs, tangle evaluation, and the built-in verification
//! suite.
//!
//! Exit codes: 0 on success, 1 on a computation-domain error (reported on
//! stderr), 2 on a usage error (reported by the argument parser). All
//! randomized commands honor `--seed` and rerun byte-identically for a
//! fixed seed.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use planalg::{
    bratteli, check_relations, dimension, enumerate, export_dot, gram_matrix, markov_trace,
    path_counts, positivity_scan, quantization_detect, run_all, run_criterion, AlgebraElement,
    Family, PlanarTangle,
};

#[derive(Parser)]
#[command(
    name = "planalg",
    version,
    about = "Exact engine for planar diagram algebras"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    /// Single-color diagrams (one loop parameter pair a = b contributions)
    Tl,
    /// Two-color diagrams with loop parameters a and b
    Fc,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Family {
        match f {
            FamilyArg::Tl => Family::Tl,
            FamilyArg::Fc => Family::Fc,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Dot,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Print the number of basis diagrams at a level
    Dim {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        n: usize,
    },
    /// List the basis diagrams at a level
    Basis {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Multiply two elements given as JSON files
    Mul {
        lhs: PathBuf,
        rhs: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the generator relations with exact symbolic scalars
    Relations {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        n: usize,
    },
    /// Print the normalized trace of an element (exact, or numeric at a, b)
    Trace {
        element: PathBuf,
        #[arg(long)]
        a: Option<f64>,
        #[arg(long)]
        b: Option<f64>,
    },
    /// Print the Gram matrix of the trace form (exact JSON or numeric CSV)
    Gram {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        a: Option<f64>,
        #[arg(long)]
        b: Option<f64>,
        /// Single-color loop value; shorthand for a = b = sqrt(delta)
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate Gram positivity at the given loop values (single-color)
    Scan {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        n: usize,
        /// Loop value delta; repeat the flag for several points
        #[arg(long, required = true)]
        delta: Vec<f64>,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Locate Gram degeneracies on a grid of single-color loop values
    Quantize {
        #[arg(long)]
        n: usize,
        /// Grid specification: LO HI STEPS
        #[arg(long, num_args = 3, required = true, value_names = ["LO", "HI", "STEPS"])]
        grid: Vec<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the tower graph of inclusions up to a level
    Bratteli {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate a tangle (JSON file) on element JSON files, one per hole
    TangleEval {
        tangle: PathBuf,
        inputs: Vec<PathBuf>,
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the built-in verification suite
    Selftest {
        #[arg(long, default_value_t = 2026)]
        seed: u64,
        /// Run a single criterion (1-9) instead of all of them
        #[arg(long)]
        criterion: Option<usize>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn emit(text: String, out: Option<&Path>) -> Result<()> {
    let text = if text.ends_with('\n') || text.is_empty() {
        text
    } else {
        text + "\n"
    };
    match out {
        Some(path) => fs::write(path, text)
            .with_context(|| format!("cannot write {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn read_element(path: &Path) -> Result<AlgebraElement> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    let element: AlgebraElement = serde_json::from_str(&text)
        .with_context(|| format!("{} is not a valid element", path.display()))?;
    Ok(element)
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Dim { family, n } => {
            println!("{}", dimension(family.into(), n));
            Ok(())
        }
        Command::Basis {
            family,
            n,
            format,
            out,
        } => {
            let basis = enumerate(family.into(), n);
            let text = match format {
                Format::Json => serde_json::to_string(basis.as_slice())?,
                Format::Text => basis
                    .iter()
                    .map(|d| format!("{:?}", d.pairing()))
                    .collect::<Vec<_>>()
                    .join("\n"),
                _ => bail!("basis supports only the json and text formats"),
            };
            emit(text, out.as_deref())
        }
        Command::Mul { lhs, rhs, out } => {
            let x = read_element(&lhs)?;
            let y = read_element(&rhs)?;
            let product = x.multiply(&y)?;
            emit(serde_json::to_string(&product)?, out.as_deref())
        }
        Command::Relations { family, n } => {
            let checks = check_relations(family.into(), n)?;
            for check in &checks {
                println!("{check}");
            }
            let failures = checks.iter().filter(|c| !c.holds).count();
            if failures > 0 {
                bail!("{failures} of {} relation checks failed", checks.len());
            }
            println!("{} checks passed", checks.len());
            Ok(())
        }
        Command::Trace { element, a, b } => {
            let x = read_element(&element)?;
            let trace = markov_trace(&x);
            match (a, b) {
                (Some(a), Some(b)) => println!("{:.8}", trace.eval(a, b)?),
                (None, None) => println!("{trace}"),
                _ => bail!("numeric evaluation needs both --a and --b"),
            }
            Ok(())
        }
        Command::Gram {
            family,
            n,
            format,
            a,
            b,
            delta,
            out,
        } => {
            let family: Family = family.into();
            let gram = gram_matrix(family, n)?;
            match format {
                Format::Json => {
                    let entries: Vec<Vec<String>> = gram
                        .entries
                        .iter()
                        .map(|row| row.iter().map(|s| s.to_string()).collect())
                        .collect();
                    let value = serde_json::json!({
                        "family": family,
                        "n": n,
                        "dim": gram.dim(),
                        "entries": entries,
                    });
                    emit(serde_json::to_string(&value)?, out.as_deref())
                }
                Format::Csv => {
                    let (a_val, b_val) = match (a, b, delta) {
                        (Some(a), Some(b), None) => (a, b),
                        (None, None, Some(d)) => {
                            if family != Family::Tl {
                                bail!("--delta applies to the single-color family; pass --a and --b");
                            }
                            if d <= 0.0 {
                                bail!("--delta must be positive");
                            }
                            (d.sqrt(), d.sqrt())
                        }
                        _ => bail!("csv output needs --a and --b, or --delta"),
                    };
                    let matrix = gram.eval(a_val, b_val)?;
                    let text = (0..matrix.nrows())
                        .map(|i| {
                            (0..matrix.ncols())
                                .map(|j| format!("{:.8}", matrix[(i, j)]))
                                .collect::<Vec<_>>()
                                .join(",")
                        })
                        .collect::<Vec<_>>()
                        .join("\n");
                    emit(text, out.as_deref())
                }
                _ => bail!("gram supports only the json and csv formats"),
            }
        }
        Command::Scan {
            family,
            n,
            delta,
            tol,
            out,
        } => {
            let points = positivity_scan(family.into(), n, &delta, tol)?;
            emit(serde_json::to_string(&points)?, out.as_deref())
        }
        Command::Quantize { n, grid, out } => {
            let steps = grid[2];
            if !(steps.fract() == 0.0 && steps >= 0.0) {
                bail!("STEPS must be a non-negative integer, got {steps}");
            }
            let roots = quantization_detect(n, grid[0], grid[1], steps as usize)?;
            let text = roots
                .iter()
                .map(|r| format!("{r:.8}"))
                .collect::<Vec<_>>()
                .join("\n");
            emit(text, out.as_deref())
        }
        Command::Bratteli {
            family,
            n,
            format,
            out,
        } => {
            let graph = bratteli(family.into(), n);
            path_counts(&graph)?;
            let text = match format {
                Format::Json => serde_json::to_string(&graph)?,
                Format::Dot => export_dot(&graph),
                Format::Text => graph
                    .levels
                    .iter()
                    .enumerate()
                    .map(|(k, level)| {
                        let vertices = level
                            .vertices
                            .iter()
                            .map(|v| format!("{} (dim {})", v.label, v.dim))
                            .collect::<Vec<_>>()
                            .join(", ");
                        format!("level {k}: {vertices}")
                    })
                    .collect::<Vec<_>>()
                    .join("\n"),
                Format::Csv => bail!("bratteli supports only the json, dot, and text formats"),
            };
            emit(text, out.as_deref())
        }
        Command::TangleEval {
            tangle,
            inputs,
            family,
            out,
        } => {
            let text = fs::read_to_string(&tangle)
                .with_context(|| format!("cannot read {}", tangle.display()))?;
            let t: PlanarTangle = serde_json::from_str(&text)
                .with_context(|| format!("{} is not a valid tangle", tangle.display()))?;
            let elements = inputs
                .iter()
                .map(|p| read_element(p))
                .collect::<Result<Vec<_>>>()?;
            let value = t.eval(family.into(), &elements)?;
            emit(serde_json::to_string(&value)?, out.as_deref())
        }
        Command::Selftest { seed, criterion } => {
            let outcomes = match criterion {
                Some(id) => {
                    let outcome = run_criterion(id, seed)
                        .with_context(|| format!("unknown criterion {id}; valid ids are 1-9"))?;
                    vec![outcome]
                }
                None => run_all(seed),
            };
            for outcome in &outcomes {
                println!("{outcome}");
            }
            let failures = outcomes.iter().filter(|o| !o.passed).count();
            if failures > 0 {
                bail!("{failures} of {} criteria failed", outcomes.len());
            }
            Ok(())
        }
    }
}
