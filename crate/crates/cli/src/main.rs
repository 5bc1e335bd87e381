use std::collections::BTreeSet;
use std::fs;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use walkrank_core::graph::{parse_family_spec, Family};
use walkrank_core::report::{self, Format};
use walkrank_core::spectra::{DEFAULT_GROUP_TOL, DEFAULT_PROJ_TOL};
use walkrank_core::verify::{parse_checks, Check};
use walkrank_core::{
    build_w_prime, canonical_partition, count_main_eigenvalues, divisor_matrix, hat_walk_matrix,
    make_extended_dynkin, rank_fraction_free, rank_modular, rank_via_snf, scan, smith_normal_form,
    verify, walk_matrix_square, Error, Graph, IntMatrix,
};

#[derive(Parser)]
#[command(name = "walkrank", version, about = "Exact walk-matrix ranks and Smith normal forms of special graph families")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph family member; prints its adjacency matrix, or its edge list with --edges.
    Gen {
        /// path | dynkin | ext-dynkin
        family: String,
        n: usize,
        #[arg(long)]
        edges: bool,
    },
    /// Walk matrix of a graph given as `family:n` or an edge-list file.
    Walk {
        graph: String,
        /// Print in the `rows cols` matrix text format instead of an aligned table.
        #[arg(long)]
        dump_matrix: bool,
    },
    /// Rank of a matrix file or of a named matrix such as `ext-dynkin:8` or `w-prime:8`.
    Rank {
        matrix: String,
        /// snf | bareiss | mod:<p>
        #[arg(long, default_value = "snf")]
        method: String,
    },
    /// Smith normal form of a matrix file or named matrix.
    Snf { matrix: String },
    /// Characteristic matrix P and divisor matrix B of the canonical partition of D~n.
    Quotient { n: usize },
    /// Adjacency spectrum with main-eigenvalue classification, as JSON.
    Spectrum {
        graph: String,
        #[arg(long, default_value_t = DEFAULT_GROUP_TOL)]
        group_tol: f64,
        #[arg(long, default_value_t = DEFAULT_PROJ_TOL)]
        proj_tol: f64,
    },
    /// Run every check for one n.
    Verify {
        n: usize,
        #[arg(long, default_value = "pretty")]
        format: String,
    },
    /// Run selected checks for every n in a range.
    Scan {
        #[arg(long, default_value_t = 4)]
        from: usize,
        #[arg(long, default_value_t = 64)]
        to: usize,
        /// Comma-separated subset of rank,hat,snf-equiv,hagos,conjecture,eigpairs.
        #[arg(long, default_value = "rank,hat,snf-equiv,hagos,conjecture,eigpairs")]
        checks: String,
        /// pretty | csv | json
        #[arg(long, default_value = "pretty")]
        format: String,
        /// Worker threads; 0 uses every core.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
}

fn load_graph(spec: &str) -> Result<Graph, Error> {
    if let Ok((family, n)) = parse_family_spec(spec) {
        return family.build(n);
    }
    read_file(spec)?.parse()
}

fn read_file(path: &str) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::MalformedInput(format!("cannot read `{path}`: {e}")))
}

/// `family:n` gives the walk matrix of that graph; `hat:n`, `w-prime:n`,
/// `divisor:n` and `divisor-walk:n` give the derived matrices of D~n;
/// anything else is read as a matrix file.
fn load_matrix(spec: &str) -> Result<IntMatrix, Error> {
    if let Some((kind, n)) = spec.split_once(':') {
        if let Ok(n) = n.parse::<usize>() {
            let ext_walk = || -> Result<IntMatrix, Error> {
                walk_matrix_square(&make_extended_dynkin(n)?.adjacency_matrix())
            };
            let divisor = || -> Result<IntMatrix, Error> {
                divisor_matrix(&make_extended_dynkin(n)?, &canonical_partition(n)?)
            };
            match kind {
                "hat" => return hat_walk_matrix(&ext_walk()?),
                "w-prime" => return build_w_prime(&ext_walk()?),
                "divisor" => return divisor(),
                "divisor-walk" => return walk_matrix_square(&divisor()?),
                _ => {
                    if let Ok(family) = Family::from_str(kind) {
                        return walk_matrix_square(&family.build(n)?.adjacency_matrix());
                    }
                }
            }
        }
    }
    read_file(spec)?.parse()
}

fn aligned(m: &IntMatrix) -> String {
    let cells: Vec<Vec<String>> = m
        .to_rows()
        .iter()
        .map(|r| r.iter().map(BigInt::to_string).collect())
        .collect();
    let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
    cells
        .iter()
        .map(|r| {
            r.iter()
                .map(|c| format!("{c:>width$}"))
                .collect::<Vec<_>>()
                .join(" ")
                + "\n"
        })
        .collect()
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Gen { family, n, edges } => {
            let g = family.parse::<Family>()?.build(n)?;
            if edges {
                print!("{}", g.to_edge_list_string());
            } else {
                print!("{}", g.adjacency_matrix());
            }
        }
        Command::Walk { graph, dump_matrix } => {
            let w = walk_matrix_square(&load_graph(&graph)?.adjacency_matrix())?;
            if dump_matrix {
                print!("{w}");
            } else {
                print!("{}", aligned(&w));
            }
        }
        Command::Rank { matrix, method } => {
            let m = load_matrix(&matrix)?;
            let rank = match method.as_str() {
                "snf" => rank_via_snf(&m),
                "bareiss" => rank_fraction_free(&m),
                other => {
                    let p = other
                        .strip_prefix("mod:")
                        .and_then(|p| p.parse::<u64>().ok())
                        .ok_or_else(|| {
                            Error::Usage(format!("unknown method `{other}`; use snf, bareiss or mod:<p>"))
                        })?;
                    rank_modular(&m, p)?
                }
            };
            println!("{rank}");
        }
        Command::Snf { matrix } => {
            let s = smith_normal_form(&load_matrix(&matrix)?);
            println!("{}", s.factors_csv());
            println!("{}", s.diag_string());
        }
        Command::Quotient { n } => {
            let g = make_extended_dynkin(n)?;
            let part = canonical_partition(n)?;
            println!("# P");
            print!("{}", part.characteristic_matrix());
            println!("# B");
            print!("{}", divisor_matrix(&g, &part)?);
        }
        Command::Spectrum {
            graph,
            group_tol,
            proj_tol,
        } => {
            let report = count_main_eigenvalues(&load_graph(&graph)?, group_tol, proj_tol)?;
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            println!(
                "{}",
                serde_json::to_string_pretty(&report).expect("report serializes")
            );
        }
        Command::Verify { n, format } => {
            let r = verify(n)?;
            print!("{}", render(std::slice::from_ref(&r), format.parse()?)?);
            if !r.passed() {
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::Scan {
            from,
            to,
            checks,
            format,
            jobs,
        } => {
            let checks: BTreeSet<Check> = parse_checks(&checks)?;
            let format: Format = format.parse()?;
            let outcome = scan(from, to, &checks, jobs)?;
            print!("{}", render(&outcome.reports, format)?);
            if !outcome.all_passed {
                return Ok(ExitCode::FAILURE);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn render(reports: &[walkrank_core::VerifyReport], format: Format) -> Result<String, Error> {
    let mut out = report::render(reports, format)?;
    if format == Format::Json {
        out.push('\n');
    }
    Ok(out)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("walkrank: {e}");
            ExitCode::from(2)
        }
    }
}
