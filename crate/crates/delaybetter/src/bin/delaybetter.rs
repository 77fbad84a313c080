use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use delaybetter::format::{
    self, parse_cubic, parse_instance, parse_nae, parse_solution, serialize_back_map, serialize_instance,
    serialize_solution, FormatError, ParsedSolution,
};
use delaybetter::generate::{generate, GenError, GenKind, GenParams};
use delaybetter::parallel::solve_parallel;
use delaybetter::report::RunReport;
use delaybetter_core::model::{Instance, SolveResult, Time};
use delaybetter_core::reach::{compress_lifetime, verify, Violation};
use delaybetter_core::reductions::{
    reduce_cbpepe_to_delta_db, reduce_db_to_delta, reduce_delta_to_db_directed, reduce_delta_to_db_undirected,
    reduce_nae_to_db_directed, reduce_nae_to_db_undirected, solve_cbp_epe_brute, solve_nae3sat_brute, PlanarVariant,
    ReductionError, ReductionOutput,
};
use delaybetter_core::solvers::{Algorithm, SolveError, SolverConfig};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "delaybetter", version, about = "Decide whether delaying edges of a temporal graph can meet every demand")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide an instance and write a solution document.
    Solve(SolveArgs),
    /// Check a solution document against an instance.
    Verify {
        instance: PathBuf,
        solution: PathBuf,
    },
    /// Build an instance from a source problem.
    Reduce(ReduceArgs),
    /// Shrink the times of an instance without changing its answer.
    Compress {
        instance: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Write a seeded random instance.
    Generate(GenerateArgs),
    /// Solve an instance or source problem by exhaustive search.
    Oracle {
        #[arg(long, value_enum, default_value = "instance")]
        problem: OracleProblem,
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SolveArgs {
    instance: PathBuf,
    /// Engine to use; `auto` picks by instance shape.
    #[arg(long, default_value = "auto", value_parser = parse_algo)]
    algo: AlgoChoice,
    #[arg(long, default_value_t = SolverConfig::default().branch_budget)]
    branch_budget: u64,
    #[arg(long, default_value_t = SolverConfig::default().state_budget)]
    state_budget: u64,
    /// Recorded in the report; every engine is deterministic.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads for the FES engine.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy)]
struct AlgoChoice(Option<Algorithm>);

fn parse_algo(s: &str) -> Result<AlgoChoice, String> {
    if s == "auto" {
        return Ok(AlgoChoice(None));
    }
    Algorithm::from_name(s).map(|a| AlgoChoice(Some(a))).ok_or_else(|| {
        let names: Vec<_> = Algorithm::ALL.iter().map(|a| a.name()).collect();
        format!("expected auto or one of {}", names.join(", "))
    })
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SourceKind {
    /// δ-DB instance to plain DB.
    DeltaDb,
    /// DB instance to δ-DB.
    Db,
    Nae3sat,
    CbpEpe,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Variant {
    Constant,
    DeltaTen,
}

#[derive(Args)]
struct ReduceArgs {
    #[arg(long, value_enum)]
    from: SourceKind,
    input: PathBuf,
    #[arg(long, conflicts_with = "undirected")]
    directed: bool,
    #[arg(long)]
    undirected: bool,
    #[arg(long, value_enum, default_value = "delta-ten")]
    variant: Variant,
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Where to write the provenance of every generated object.
    #[arg(long)]
    back_map: Option<PathBuf>,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_enum, default_value = "random")]
    kind: GenKind,
    #[arg(long, default_value_t = 5)]
    n: usize,
    #[arg(long, default_value_t = 6)]
    m: usize,
    #[arg(long, default_value_t = 2)]
    demands: usize,
    #[arg(long, default_value_t = 4)]
    tmax: Time,
    #[arg(long)]
    max_deadline: Option<Time>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    directed: bool,
    #[arg(long)]
    delta: Option<Time>,
    #[arg(long)]
    paths: bool,
    #[arg(long, default_value_t = 2)]
    rho: usize,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OracleProblem {
    Instance,
    Nae3sat,
    CbpEpe,
}

/// A failure with a stable code, reported and mapped to exit status 2.
struct Failure {
    code: &'static str,
    message: String,
}

macro_rules! failure_from {
    ($($t:ty),*) => {$(
        impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                Failure { code: e.code(), message: e.to_string() }
            }
        }
    )*};
}
failure_from!(FormatError, SolveError, ReductionError);

impl From<GenError> for Failure {
    fn from(e: GenError) -> Self {
        Failure {
            code: "INFEASIBLE",
            message: e.to_string(),
        }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure {
        code: "IO",
        message: format!("{}: {e}", path.display()),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| io_failure(path, e))
}

fn write_out(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| io_failure(p, e)),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| io_failure(Path::new("<stdout>"), e)),
    }
}

/// Decision outcome of a successful command.
enum Outcome {
    Yes,
    No,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let echo: Vec<String> = std::env::args().skip(1).collect();
    let mut report = RunReport::new(&echo.join(" "));
    let outcome = match cli.command {
        Command::Solve(a) => cmd_solve(a, &mut report),
        Command::Verify { instance, solution } => cmd_verify(&instance, &solution, &mut report),
        Command::Reduce(a) => cmd_reduce(a, &mut report),
        Command::Compress { instance, output } => cmd_compress(&instance, output.as_deref(), &mut report),
        Command::Generate(a) => cmd_generate(a, &mut report),
        Command::Oracle { problem, input, output } => cmd_oracle(problem, &input, output.as_deref(), &mut report),
    };
    let code = match outcome {
        Ok(Outcome::Yes) => 0,
        Ok(Outcome::No) => 1,
        Err(f) => {
            report.set("error", f.code);
            report.set("message", &f.message);
            eprintln!("error: {}", f.message);
            2
        }
    };
    report.set("exit", code);
    report.emit();
    ExitCode::from(code)
}

fn record_result(report: &mut RunReport, result: &SolveResult) -> Outcome {
    match result {
        SolveResult::Yes { .. } => {
            report.set("answer", "yes");
            Outcome::Yes
        }
        SolveResult::No(r) => {
            report.set("answer", "no");
            report.set("reason", r.code());
            Outcome::No
        }
    }
}

fn cmd_solve(a: SolveArgs, report: &mut RunReport) -> Result<Outcome, Failure> {
    report.set("seed", a.seed);
    report.set("jobs", a.jobs);
    let instance = parse_instance(&read(&a.instance)?)?;
    report.set("kind", instance.kind());
    let config = SolverConfig {
        branch_budget: a.branch_budget,
        state_budget: a.state_budget,
    };
    let solved = solve_parallel(&instance, a.algo.0, &config, a.jobs)?;
    report.set("algorithm", solved.algorithm);
    report.set("branches", solved.stats.branches);
    report.set("states", solved.stats.states);
    write_out(a.output.as_deref(), &serialize_solution(&instance, &solved.result))?;
    if let Some(p) = &a.output {
        report.set("solution", p.display());
    }
    Ok(record_result(report, &solved.result))
}

fn describe(instance: &Instance, v: &Violation) -> String {
    let g = instance.graph();
    let edge = |e: usize| {
        let x = g.edge(e);
        format!("('{}', '{}')", g.name(x.u), g.name(x.v))
    };
    match *v {
        Violation::Advanced { edge: e } => format!("edge {} moved earlier", edge(e)),
        Violation::DelayTooLarge { edge: e, delta } => format!("edge {} delayed by more than {delta}", edge(e)),
        ref other => other.to_string(),
    }
}

fn cmd_verify(instance: &Path, solution: &Path, report: &mut RunReport) -> Result<Outcome, Failure> {
    let instance = parse_instance(&read(instance)?)?;
    match parse_solution(&read(solution)?, &instance)? {
        ParsedSolution::Yes(witness) => {
            let verdict = verify(&instance, &witness);
            let g = instance.graph();
            for (k, (d, r)) in instance.demands().iter().zip(&verdict.demands).enumerate() {
                let arrival = r.arrival.map_or("none".to_string(), |a| a.to_string());
                println!(
                    "demand {k} {} -> {} deadline={} arrival={arrival} {}",
                    g.name(d.source),
                    g.name(d.target),
                    d.deadline,
                    if r.satisfied { "ok" } else { "unmet" }
                );
            }
            report.set("max_delay", witness.max_delay(g));
            match &verdict.violation {
                None => {
                    println!("accepted");
                    report.set("verdict", "accept");
                    Ok(Outcome::Yes)
                }
                Some(v) => {
                    let why = describe(&instance, v);
                    println!("rejected: {why}");
                    report.set("verdict", "reject");
                    report.set("violation", why);
                    Ok(Outcome::No)
                }
            }
        }
        ParsedSolution::No(claimed) => {
            // A no-answer has no certificate; check it by solving.
            let solved = solve_parallel(&instance, None, &SolverConfig::default(), 1)?;
            report.set("algorithm", solved.algorithm);
            let agrees = !solved.result.is_yes();
            println!(
                "claimed no ({}); solver says {}",
                claimed.code(),
                if agrees { "no" } else { "yes" }
            );
            report.set("verdict", if agrees { "accept" } else { "reject" });
            Ok(if agrees { Outcome::Yes } else { Outcome::No })
        }
    }
}

fn cmd_reduce(a: ReduceArgs, report: &mut RunReport) -> Result<Outcome, Failure> {
    let text = read(&a.input)?;
    let orientation = if a.directed {
        Some(true)
    } else if a.undirected {
        Some(false)
    } else {
        None
    };
    let out: ReductionOutput = match a.from {
        SourceKind::DeltaDb | SourceKind::Db => {
            let source = parse_instance(&text)?;
            let directed = source.graph().is_directed();
            match orientation {
                Some(true) if !directed => return Err(ReductionError::UndirectedInput.into()),
                Some(false) if directed => return Err(ReductionError::DirectedInput.into()),
                _ => {}
            }
            if a.from == SourceKind::Db {
                let target = reduce_db_to_delta(&source)?;
                report.set("delta", target.delta().unwrap_or(0));
                finish_reduce(report, &target, a.output.as_deref())?;
                if let Some(p) = &a.back_map {
                    let out = ReductionOutput::identity(target);
                    write_out(Some(p), &serialize_back_map(&out))?;
                }
                return Ok(Outcome::Yes);
            }
            if directed {
                reduce_delta_to_db_directed(&source)?
            } else {
                reduce_delta_to_db_undirected(&source)?
            }
        }
        SourceKind::Nae3sat => {
            let f = parse_nae(&text)?;
            if orientation == Some(true) {
                reduce_nae_to_db_directed(&f)?
            } else {
                reduce_nae_to_db_undirected(&f)?
            }
        }
        SourceKind::CbpEpe => {
            let g = parse_cubic(&text)?;
            let variant = match a.variant {
                Variant::Constant => PlanarVariant::Constant,
                Variant::DeltaTen => PlanarVariant::DeltaTen,
            };
            reduce_cbpepe_to_delta_db(&g, variant, orientation == Some(true))?
        }
    };
    finish_reduce(report, &out.instance, a.output.as_deref())?;
    if let Some(p) = &a.back_map {
        write_out(Some(p), &serialize_back_map(&out))?;
    }
    Ok(Outcome::Yes)
}

fn finish_reduce(report: &mut RunReport, target: &Instance, output: Option<&Path>) -> Result<(), Failure> {
    let g = target.graph();
    report.set("vertices", g.vertex_count());
    report.set("edges", g.edge_count());
    report.set("demands", target.demands().len());
    report.set("lifetime", g.lifetime().max(target.t_max()));
    report.set("max_degree", (0..g.vertex_count()).map(|v| g.degree(v)).max().unwrap_or(0));
    write_out(output, &serialize_instance(target))
}

fn cmd_compress(instance: &Path, output: Option<&Path>, report: &mut RunReport) -> Result<Outcome, Failure> {
    let instance = parse_instance(&read(instance)?)?;
    let c = compress_lifetime(&instance);
    report.set("t_max_before", instance.t_max());
    report.set("t_max_after", c.instance.t_max());
    report.set("edges_kept", c.kept.len());
    write_out(output, &serialize_instance(&c.instance))?;
    Ok(Outcome::Yes)
}

fn cmd_generate(a: GenerateArgs, report: &mut RunReport) -> Result<Outcome, Failure> {
    let params = GenParams {
        kind: a.kind,
        n: a.n,
        m: a.m,
        demands: a.demands,
        tmax: a.tmax,
        max_deadline: a.max_deadline,
        directed: a.directed,
        delta: a.delta,
        paths: a.paths,
        rho: a.rho,
    };
    report.set("seed", a.seed);
    let instance = generate(&params, a.seed)?;
    report.set("edges", instance.graph().edge_count());
    write_out(a.output.as_deref(), &serialize_instance(&instance))?;
    Ok(Outcome::Yes)
}

#[derive(Serialize)]
struct NaeAnswer {
    satisfiable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    assignment: Option<Vec<bool>>,
}

#[derive(Serialize)]
struct CbpAnswer {
    extendable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    coloring: Option<std::collections::BTreeMap<String, String>>,
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("answers always serialize");
    s.push('\n');
    s
}

fn cmd_oracle(problem: OracleProblem, input: &Path, output: Option<&Path>, report: &mut RunReport) -> Result<Outcome, Failure> {
    let text = read(input)?;
    match problem {
        OracleProblem::Instance => {
            let instance = parse_instance(&text)?;
            let solved = solve_parallel(&instance, Some(Algorithm::BruteForce), &SolverConfig::default(), 1)?;
            report.set("states", solved.stats.states);
            write_out(output, &format::serialize_solution(&instance, &solved.result))?;
            Ok(record_result(report, &solved.result))
        }
        OracleProblem::Nae3sat => {
            let f = parse_nae(&text)?;
            let a = solve_nae3sat_brute(&f)?;
            let yes = a.is_some();
            write_out(
                output,
                &json(&NaeAnswer {
                    satisfiable: yes,
                    assignment: a,
                }),
            )?;
            report.set("answer", if yes { "yes" } else { "no" });
            Ok(if yes { Outcome::Yes } else { Outcome::No })
        }
        OracleProblem::CbpEpe => {
            let g = parse_cubic(&text)?;
            let c = solve_cbp_epe_brute(&g)?;
            let yes = c.is_some();
            let coloring = c.map(|c| {
                g.edges()
                    .iter()
                    .zip(c)
                    .map(|(&(a, b), col)| (format!("{}-{}", g.name(a), g.name(b)), col.letter().to_string()))
                    .collect()
            });
            write_out(output, &json(&CbpAnswer { extendable: yes, coloring }))?;
            report.set("answer", if yes { "yes" } else { "no" });
            Ok(if yes { Outcome::Yes } else { Outcome::No })
        }
    }
}
