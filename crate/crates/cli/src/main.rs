//! `subiso` — decide subgraph isomorphism through an exact linear program,
//! cross-check against brute force, and run the TSP/SAT reductions.
//!
//! Exit codes on decision subcommands: 0 = YES, 1 = NO, 2 = error.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use subiso_core::compat::{build_compat, propagate};
use subiso_core::graph::{parse_digraph, parse_weighted_digraph, Digraph};
use subiso_core::harness::{
    decide_lp, run_compare, run_worked_examples, run_sat, run_tsp, CompareParams,
};
use subiso_core::model::{aggregate, build_base_system, emit_lp, zero_constraints};
use subiso_core::oracle::{subgi_brute_force_with_cap, Answer, DEFAULT_SUBGI_CAP};
use subiso_core::rat::parse_rat;
use subiso_core::reductions::parse_cnf;
use subiso_core::solve::{certificate_to_json, OptResult, SolveConfig};

/// Environment variable overriding the solver pivot cap.
const PIVOT_LIMIT_ENV: &str = "SUBISO_PIVOT_LIMIT";

#[derive(Parser)]
#[command(
    name = "subiso",
    about = "Subgraph isomorphism via an exact polynomial-size linear program",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct InstanceArgs {
    /// Input graph file (`digraph <n>` header, `<u> <v> [mult]` lines).
    input: PathBuf,
    /// Pattern graph file (same format; padded with isolated vertices).
    pattern: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Decide an instance by LP feasibility of the aggregated system.
    Check {
        #[command(flatten)]
        instance: InstanceArgs,
        /// Deplete the compatibility matrix by path consistency first.
        #[arg(long)]
        propagate: bool,
        /// Print the feasibility certificate as JSON.
        #[arg(long)]
        emit_certificate: bool,
        /// Also write the aggregated system in LP format to this file.
        #[arg(long, value_name = "PATH")]
        emit_lp: Option<PathBuf>,
    },
    /// Decide an instance by brute-force permutation enumeration.
    Oracle {
        #[command(flatten)]
        instance: InstanceArgs,
        /// Vertex-count cap for the n! enumeration.
        #[arg(long, default_value_t = DEFAULT_SUBGI_CAP)]
        cap: usize,
    },
    /// Run the worked-example suite through both the LP and oracle paths.
    Examples {
        /// Write the machine-readable report to this file.
        #[arg(long, value_name = "PATH")]
        json: Option<PathBuf>,
    },
    /// Randomized LP-vs-oracle agreement audit.
    Compare {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Arc probability for the input graph, as `p/q` or an integer.
        #[arg(long, default_value = "1/2")]
        arc_probability: String,
        /// Arc probability for the pattern graph.
        #[arg(long, default_value = "1/2")]
        pattern_density: String,
        /// Arc multiplicities are uniform in [1, this].
        #[arg(long, default_value_t = 1)]
        max_multiplicity: u64,
        /// Census of all 256 ordered 0/1 pairs instead of seeded trials
        /// (n must be 2).
        #[arg(long)]
        exhaustive: bool,
        /// Write the machine-readable report to this file.
        #[arg(long, value_name = "PATH")]
        json: Option<PathBuf>,
        /// Write disagreeing instances to this directory for replay.
        #[arg(long, value_name = "DIR")]
        out_dir: Option<PathBuf>,
    },
    /// Solve the TSP linear program for a weighted digraph
    /// (`wdigraph <n>` header, `<u> <v> <weight>` lines).
    Tsp {
        graph: PathBuf,
        /// Vertex-count cap for the brute-force tour comparison.
        #[arg(long, default_value_t = 8)]
        brute_cap: usize,
    },
    /// Decide a DIMACS CNF through the SubGI system and by truth table.
    Sat { cnf: PathBuf },
    /// Write the aggregated system of an instance in LP format.
    EmitLp {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long)]
        propagate: bool,
        /// Output path (stdout when omitted).
        #[arg(short, long, value_name = "PATH")]
        output: Option<PathBuf>,
    },
}

fn solve_config() -> Result<SolveConfig, String> {
    let mut config = SolveConfig::default();
    if let Ok(text) = std::env::var(PIVOT_LIMIT_ENV) {
        config.pivot_limit = text
            .parse()
            .map_err(|_| format!("{} must be an integer, got `{}`", PIVOT_LIMIT_ENV, text))?;
    }
    Ok(config)
}

fn read_digraph(path: &Path) -> Result<Digraph, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {}", path.display(), e))?;
    parse_digraph(&text).map_err(|e| format!("{}: {}", path.display(), e))
}

fn write_or_print(path: Option<&Path>, content: &str) -> Result<(), String> {
    match path {
        Some(p) => std::fs::write(p, content).map_err(|e| format!("{}: {}", p.display(), e)),
        None => {
            print!("{}", content);
            Ok(())
        }
    }
}

fn answer_code(answer: Answer) -> ExitCode {
    match answer {
        Answer::Yes => ExitCode::SUCCESS,
        Answer::No => ExitCode::from(1),
    }
}

fn run() -> Result<ExitCode, String> {
    let cli = Cli::parse();
    let config = solve_config()?;
    match cli.command {
        Command::Check {
            instance,
            propagate,
            emit_certificate,
            emit_lp: emit_lp_path,
        } => {
            let input = read_digraph(&instance.input)?;
            let pattern = read_digraph(&instance.pattern)?;
            let decision =
                decide_lp(&input, &pattern, propagate, &config).map_err(|e| e.to_string())?;
            println!("{}", decision.answer);
            if let Some((sys, cert)) = &decision.detail {
                if emit_certificate {
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&certificate_to_json(sys, cert))
                            .expect("certificate serializes")
                    );
                }
                if let Some(path) = &emit_lp_path {
                    let text = emit_lp(sys, None).map_err(|e| e.to_string())?;
                    write_or_print(Some(path), &text)?;
                }
            }
            Ok(answer_code(decision.answer))
        }
        Command::Oracle { instance, cap } => {
            let input = read_digraph(&instance.input)?;
            let pattern = read_digraph(&instance.pattern)?;
            if pattern.n() > input.n() {
                println!("NO");
                return Ok(answer_code(Answer::No));
            }
            let verdict =
                subgi_brute_force_with_cap(&input, &pattern, cap).map_err(|e| e.to_string())?;
            println!("{}", verdict.answer);
            if let Some(grid) = &verdict.witness {
                println!("witness: {}", grid);
            }
            Ok(answer_code(verdict.answer))
        }
        Command::Examples { json } => {
            let report = run_worked_examples(&config).map_err(|e| e.to_string())?;
            print!("{}", report.table());
            if !report.all_certificates_verified() {
                return Err("a certificate failed verification".into());
            }
            if let Some(path) = &json {
                let text =
                    serde_json::to_string_pretty(&report.to_json()).expect("report serializes");
                write_or_print(Some(path), &text)?;
            }
            let ok = report.all_lp_match() && report.all_oracle_match();
            if ok {
                println!("all verdicts match");
                Ok(ExitCode::SUCCESS)
            } else {
                println!("verdict mismatch (see table)");
                Ok(ExitCode::from(1))
            }
        }
        Command::Compare {
            n,
            trials,
            seed,
            arc_probability,
            pattern_density,
            max_multiplicity,
            exhaustive,
            json,
            out_dir,
        } => {
            let params = CompareParams {
                n,
                trials,
                seed,
                arc_probability: parse_rat(&arc_probability).map_err(|e| e.to_string())?,
                pattern_density: parse_rat(&pattern_density).map_err(|e| e.to_string())?,
                max_multiplicity,
                exhaustive_n2: exhaustive,
                oracle_cap: DEFAULT_SUBGI_CAP,
            };
            let report = run_compare(&params, &config).map_err(|e| e.to_string())?;
            print!("{}", report.table());
            if let Some(dir) = &out_dir {
                std::fs::create_dir_all(dir).map_err(|e| format!("{}: {}", dir.display(), e))?;
                for d in &report.disagreements {
                    let base = dir.join(format!("trial-{:05}", d.trial));
                    std::fs::write(base.with_extension("input"), &d.input_text)
                        .map_err(|e| e.to_string())?;
                    std::fs::write(base.with_extension("pattern"), &d.pattern_text)
                        .map_err(|e| e.to_string())?;
                }
                if !report.disagreements.is_empty() {
                    println!(
                        "wrote {} disagreement instance(s) to {}",
                        report.disagreements.len(),
                        dir.display()
                    );
                }
            }
            if let Some(path) = &json {
                let text =
                    serde_json::to_string_pretty(&report.to_json()).expect("report serializes");
                write_or_print(Some(path), &text)?;
            }
            if report.soundness_violated() {
                println!("SOUNDNESS VIOLATION: LP infeasible on an oracle-YES instance");
                Ok(ExitCode::from(1))
            } else {
                Ok(ExitCode::SUCCESS)
            }
        }
        Command::Tsp { graph, brute_cap } => {
            let text = std::fs::read_to_string(&graph)
                .map_err(|e| format!("{}: {}", graph.display(), e))?;
            let w =
                parse_weighted_digraph(&text).map_err(|e| format!("{}: {}", graph.display(), e))?;
            let report = run_tsp(&w, &config, brute_cap).map_err(|e| e.to_string())?;
            match &report.outcome {
                OptResult::Optimal { value, .. } => {
                    println!("optimal value: {}", value);
                    match &report.integral_grid {
                        Some(grid) => println!("optimum is a tour: {}", grid),
                        None => println!("optimum is fractional (not a tour)"),
                    }
                    match &report.brute_force {
                        Some(Some(best)) => println!("brute-force tour optimum: {}", best),
                        Some(None) => println!("brute-force: no Hamiltonian cycle"),
                        None => println!("brute-force: skipped (n over cap)"),
                    }
                    println!("{}", report.to_json());
                    Ok(ExitCode::SUCCESS)
                }
                OptResult::Infeasible(_) => {
                    println!("infeasible: no Hamiltonian cycle in the support");
                    println!("{}", report.to_json());
                    Ok(ExitCode::from(1))
                }
                OptResult::Unbounded { .. } => {
                    Err("TSP program reported unbounded; the model forbids this".into())
                }
            }
        }
        Command::Sat { cnf } => {
            let text =
                std::fs::read_to_string(&cnf).map_err(|e| format!("{}: {}", cnf.display(), e))?;
            let formula = parse_cnf(&text).map_err(|e| format!("{}: {}", cnf.display(), e))?;
            let report = run_sat(&formula, &config).map_err(|e| e.to_string())?;
            println!("lp: {}", report.lp);
            println!("oracle: {}", report.oracle);
            println!("agree: {}", report.agree());
            println!("{}", report.to_json());
            if !report.certificate_verified() {
                return Err("a certificate failed verification".into());
            }
            Ok(answer_code(report.lp))
        }
        Command::EmitLp {
            instance,
            propagate: use_propagation,
            output,
        } => {
            let input = read_digraph(&instance.input)?;
            let pattern = read_digraph(&instance.pattern)?;
            if pattern.n() > input.n() {
                return Err("pattern larger than input; nothing to emit".into());
            }
            let padded = pattern.pad(input.n()).map_err(|e| e.to_string())?;
            let mut compat = build_compat(&input, &padded).map_err(|e| e.to_string())?;
            if use_propagation {
                compat = propagate(&compat);
            }
            let base = build_base_system(input.n()).map_err(|e| e.to_string())?;
            let sys = aggregate(&base, &zero_constraints(&compat), &BTreeSet::new())
                .map_err(|e| e.to_string())?;
            let text = emit_lp(&sys, None).map_err(|e| e.to_string())?;
            write_or_print(output.as_deref(), &text)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {}", message);
            ExitCode::from(2)
        }
    }
}
