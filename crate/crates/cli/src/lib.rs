//! Commands behind the `nncp` binary.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use nncp_core::baseline::{solve_spp, MAX_SPP_N};
use nncp_core::circuit::{decompose, parse_real};
use nncp_core::coupling::AutCaps;
use nncp_core::dp::{centers_to_solution, solve_star_dp};
use nncp_core::lp::{build_rspp_scaled, solve_reduced, write_lp, ReducedMethod};
use nncp_core::random::{random_circuit, InstanceClass};
use nncp_core::reconstruct::{reconstruct, verify};
use nncp_core::symmetry::{Caps, QuotientGraph, ReductionStats};
use nncp_core::{Circuit, Coupling, Error, Family, NncpSolution};

pub const EXIT_PARSE: i32 = 1;
pub const EXIT_CAPS: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;
pub const EXIT_MISMATCH: i32 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "nncp",
    version,
    about = "Minimum SWAP insertion for nearest-neighbour compliance"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Solve an instance and print the optimum and schedule.
    Solve(SolveArgs),
    /// Write a random circuit in .real format.
    Random(RandomArgs),
    /// Report model sizes and reductions without solving.
    Stats(StatsArgs),
    /// Print the two-qubit gate sequence of a circuit.
    Decompose(DecomposeArgs),
    /// Check a solution file against a circuit and coupling graph.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Reduced,
    Baseline,
    Dp,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutFormat {
    Json,
    Csv,
    Human,
}

#[derive(Args, Debug, Clone)]
pub struct InstanceArgs {
    /// Circuit in .real format.
    #[arg(long, conflicts_with = "random")]
    pub circuit: Option<PathBuf>,
    /// Generated instance `CLASS:N:M`, e.g. `I:20:40`.
    #[arg(long)]
    pub random: Option<String>,
    /// Seed for `--random`.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// `cycle`, `star`, `biclique:M` or `file:PATH`.
    #[arg(long)]
    pub coupling: String,
    /// Most orbits per layer the quotient may hold.
    #[arg(long, default_value_t = Caps::default().max_nodes)]
    pub max_nodes: usize,
    /// Most locations for automorphism search on general graphs.
    #[arg(long, default_value_t = AutCaps::default().max_general_n)]
    pub max_general_n: usize,
    /// Most automorphisms to enumerate.
    #[arg(long, default_value_t = AutCaps::default().max_elements)]
    pub max_aut_elements: usize,
}

impl InstanceArgs {
    fn caps(&self) -> Caps {
        Caps {
            max_nodes: self.max_nodes,
            aut: AutCaps {
                max_general_n: self.max_general_n,
                max_elements: self.max_aut_elements,
            },
        }
    }
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    #[arg(long, value_enum, default_value_t = Method::Reduced)]
    pub method: Method,
    #[arg(long, value_enum, default_value_t = OutFormat::Human)]
    pub out: OutFormat,
    /// Also write the solution JSON here.
    #[arg(long)]
    pub solution: Option<PathBuf>,
    /// Also write the reduced program in LP text format here.
    #[arg(long)]
    pub lp: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct RandomArgs {
    #[arg(long)]
    pub class: String,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub m: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct StatsArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    #[arg(long, value_enum, default_value_t = OutFormat::Csv)]
    pub out: OutFormat,
}

#[derive(Args, Debug)]
pub struct DecomposeArgs {
    #[arg(long)]
    pub circuit: PathBuf,
    #[arg(long, value_enum, default_value_t = OutFormat::Human)]
    pub out: OutFormat,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long)]
    pub solution: PathBuf,
    #[arg(long)]
    pub circuit: PathBuf,
    #[arg(long)]
    pub coupling: String,
}

/// A failed command: message for stderr and the process exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Cap(_) => EXIT_CAPS,
            Error::Solver(_) | Error::DeadEnd { .. } => EXIT_SOLVER,
            _ => EXIT_PARSE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn failure(code: i32, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
    }
}

/// Runs one command and returns what to print on stdout.
pub fn run(cli: Cli) -> Result<String, Failure> {
    match cli.command {
        Command::Solve(args) => cmd_solve(&args),
        Command::Random(args) => cmd_random(&args),
        Command::Stats(args) => cmd_stats(&args),
        Command::Decompose(args) => cmd_decompose(&args),
        Command::Verify(args) => cmd_verify(&args),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| failure(EXIT_PARSE, format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| failure(EXIT_PARSE, format!("{}: {e}", path.display())))
}

fn load_circuit(path: &Path) -> Result<Circuit, Failure> {
    let raw = parse_real(&read(path)?).map_err(|e| failure(EXIT_PARSE, format!("{}: {e}", path.display())))?;
    Ok(decompose(&raw)?)
}

fn parse_random_spec(spec: &str) -> Result<(InstanceClass, usize, usize), Failure> {
    let bad = || failure(EXIT_PARSE, format!("bad --random {spec:?}; expected CLASS:N:M"));
    let parts: Vec<&str> = spec.split(':').collect();
    let [class, n, m] = parts.as_slice() else {
        return Err(bad());
    };
    let class: InstanceClass = class.parse()?;
    Ok((class, n.parse().map_err(|_| bad())?, m.parse().map_err(|_| bad())?))
}

fn load_instance(args: &InstanceArgs) -> Result<(Circuit, Coupling), Failure> {
    let circuit = match (&args.circuit, &args.random) {
        (Some(path), _) => load_circuit(path)?,
        (None, Some(spec)) => {
            let (class, n, m) = parse_random_spec(spec)?;
            decompose(&random_circuit(class, n, m, args.seed)?)?
        }
        (None, None) => return Err(failure(EXIT_PARSE, "one of --circuit or --random is required")),
    };
    let coupling = Coupling::from_descriptor(&args.coupling, circuit.n(), args.caps().aut).map_err(|e| {
        let mut f = Failure::from(e);
        f.message = format!("coupling {}: {}", args.coupling, f.message);
        f
    })?;
    Ok((circuit, coupling))
}

struct MethodRun {
    method: &'static str,
    solution: NncpSolution,
    seconds: f64,
    detail: String,
}

fn run_reduced(c: &Circuit, coupling: &Coupling, caps: Caps, lp_out: Option<&Path>) -> Result<MethodRun, Failure> {
    let start = Instant::now();
    let q = QuotientGraph::build(c, coupling, caps)?;
    if let Some(path) = lp_out {
        write(path, &write_lp(&build_rspp_scaled(&q)))?;
    }
    let reduced = solve_reduced(&q)?;
    let solution = reconstruct(&q, &reduced)?;
    let route = match reduced.method {
        ReducedMethod::ShortestPath => "shortest path".to_string(),
        ReducedMethod::Simplex => format!(
            "simplex, {} iterations",
            reduced.lp.as_ref().map_or(0, |s| s.iterations)
        ),
    };
    Ok(MethodRun {
        method: "reduced",
        solution,
        seconds: start.elapsed().as_secs_f64(),
        detail: format!(
            "{} orbits and {} orbitals per layer, {route}",
            q.nodes_per_layer(),
            q.arcs_per_layer()
        ),
    })
}

fn run_baseline(c: &Circuit, coupling: &Coupling) -> Result<MethodRun, Failure> {
    let start = Instant::now();
    let solution = solve_spp(c, &coupling.graph)?;
    Ok(MethodRun {
        method: "baseline",
        solution,
        seconds: start.elapsed().as_secs_f64(),
        detail: "explicit layered graph".into(),
    })
}

fn run_dp(c: &Circuit, coupling: &Coupling) -> Result<MethodRun, Failure> {
    if coupling.family() != Family::Star {
        return Err(failure(EXIT_PARSE, "method dp needs the star coupling"));
    }
    let start = Instant::now();
    let (_, centers) = solve_star_dp(c)?;
    Ok(MethodRun {
        method: "dp",
        solution: centers_to_solution(c.n(), &centers),
        seconds: start.elapsed().as_secs_f64(),
        detail: "center dynamic program".into(),
    })
}

pub fn cmd_solve(args: &SolveArgs) -> Result<String, Failure> {
    let (c, coupling) = load_instance(&args.instance)?;
    let caps = args.instance.caps();
    let mut runs = Vec::new();
    match args.method {
        Method::Reduced => runs.push(run_reduced(&c, &coupling, caps, args.lp.as_deref())?),
        Method::Baseline => runs.push(run_baseline(&c, &coupling)?),
        Method::Dp => runs.push(run_dp(&c, &coupling)?),
        Method::All => {
            runs.push(run_reduced(&c, &coupling, caps, args.lp.as_deref())?);
            if c.n() <= MAX_SPP_N {
                runs.push(run_baseline(&c, &coupling)?);
            }
            if coupling.family() == Family::Star && c.fixing_pattern().is_trivial() {
                runs.push(run_dp(&c, &coupling)?);
            }
        }
    }
    let reports: Vec<_> = runs.iter().map(|r| verify(&r.solution, &c, &coupling.graph)).collect();
    if let Some(path) = &args.solution {
        write(path, &runs[0].solution.to_json())?;
    }
    let text = render_solve(args.out, &c, &coupling, &runs, &reports);
    if let Some((run, report)) = runs.iter().zip(&reports).find(|(_, r)| !r.ok) {
        return Err(failure(
            EXIT_MISMATCH,
            format!(
                "{text}\n{} solution failed verification: {}",
                run.method,
                report.violation.as_deref().unwrap_or("")
            ),
        ));
    }
    let opt = runs[0].solution.opt;
    if let Some(other) = runs.iter().find(|r| r.solution.opt != opt) {
        return Err(failure(
            EXIT_MISMATCH,
            format!(
                "{text}\noptima differ: reduced {opt}, {} {}",
                other.method, other.solution.opt
            ),
        ));
    }
    Ok(text)
}

fn render_solve(
    out: OutFormat,
    c: &Circuit,
    coupling: &Coupling,
    runs: &[MethodRun],
    reports: &[nncp_core::VerifyReport],
) -> String {
    match out {
        OutFormat::Json => {
            let results: Vec<Value> = runs
                .iter()
                .zip(reports)
                .map(|(r, v)| {
                    let solution: Value = serde_json::from_str(&r.solution.to_json()).expect("valid JSON");
                    json!({
                        "method": r.method,
                        "opt": r.solution.opt,
                        "seconds": r.seconds,
                        "verified": v.ok,
                        "detail": r.detail,
                        "solution": solution,
                    })
                })
                .collect();
            let doc = json!({
                "schema": 1,
                "n": c.n(),
                "m": c.m(),
                "coupling": coupling.family().to_string(),
                "results": results,
            });
            serde_json::to_string_pretty(&doc).expect("valid JSON")
        }
        OutFormat::Csv => {
            let mut s = String::from("method,n,m,coupling,opt,seconds,verified\n");
            for (r, v) in runs.iter().zip(reports) {
                s.push_str(&format!(
                    "{},{},{},{},{},{:.6},{}\n",
                    r.method,
                    c.n(),
                    c.m(),
                    coupling.family(),
                    r.solution.opt,
                    r.seconds,
                    v.ok
                ));
            }
            s.trim_end().to_string()
        }
        OutFormat::Human => {
            let mut s = format!("n = {}, m = {}, coupling {}\n", c.n(), c.m(), coupling.family());
            for (r, v) in runs.iter().zip(reports) {
                s.push_str(&format!(
                    "{}: opt {} in {:.3}s ({}), verification {}\n",
                    r.method,
                    r.solution.opt,
                    r.seconds,
                    r.detail,
                    if v.ok { "passed" } else { "FAILED" }
                ));
            }
            let sol = &runs[0].solution;
            if let Some(first) = sol.orders.first() {
                s.push_str(&format!("initial order {first}\n"));
            }
            for sw in &sol.swaps {
                s.push_str(&format!("swap {} after gate {}\n", sw.swap, sw.after_gate));
            }
            s.trim_end().to_string()
        }
    }
}

pub fn cmd_random(args: &RandomArgs) -> Result<String, Failure> {
    let class: InstanceClass = args.class.parse()?;
    let text = random_circuit(class, args.n, args.m, args.seed)?.to_real();
    match &args.output {
        Some(path) => {
            write(path, &text)?;
            Ok(String::new())
        }
        None => Ok(text.trim_end().to_string()),
    }
}

pub fn cmd_stats(args: &StatsArgs) -> Result<String, Failure> {
    let (c, coupling) = load_instance(&args.instance)?;
    let q = QuotientGraph::build(&c, &coupling, args.instance.caps())?;
    let stats = ReductionStats::of(&q);
    Ok(match args.out {
        OutFormat::Json => serde_json::to_string_pretty(&stats).expect("valid JSON"),
        OutFormat::Csv => format!("{}\n{}", ReductionStats::CSV_HEADER, stats.csv_row()),
        OutFormat::Human => format!(
            "n = {}, m = {}, coupling {}\n|Aut| = {}, |S_n(F)| = {}\n{} orbits and {} orbitals per layer\nvariables {} of {} ({:.2}% fewer)\nconstraints {} of {} ({:.2}% fewer)",
            stats.n,
            stats.m,
            stats.family,
            stats.aut_order,
            stats.sym_order,
            stats.nodes_per_layer,
            stats.arcs_per_layer,
            stats.variables,
            stats.unreduced_variables,
            stats.variable_reduction_pct,
            stats.constraints,
            stats.unreduced_constraints,
            stats.constraint_reduction_pct
        ),
    })
}

pub fn cmd_decompose(args: &DecomposeArgs) -> Result<String, Failure> {
    let c = load_circuit(&args.circuit)?;
    let names = c.qubit_names();
    Ok(match args.out {
        OutFormat::Json => {
            let gates: Vec<[usize; 2]> = c.gates().iter().map(|g| [g.a() + 1, g.b() + 1]).collect();
            serde_json::to_string_pretty(&json!({
                "schema": 1,
                "n": c.n(),
                "m": c.m(),
                "qubits": names,
                "gates": gates,
            }))
            .expect("valid JSON")
        }
        OutFormat::Csv => {
            let mut s = String::from("gate,a,b");
            for (k, g) in c.gates().iter().enumerate() {
                s.push_str(&format!("\n{},{},{}", k + 1, names[g.a()], names[g.b()]));
            }
            s
        }
        OutFormat::Human => {
            let mut s = format!("{} qubits, {} two-qubit gates", c.n(), c.m());
            for g in c.gates() {
                s.push_str(&format!("\n{} {}", names[g.a()], names[g.b()]));
            }
            s
        }
    })
}

pub fn cmd_verify(args: &VerifyArgs) -> Result<String, Failure> {
    let c = load_circuit(&args.circuit)?;
    let coupling = Coupling::from_descriptor(&args.coupling, c.n(), AutCaps::default())?;
    let sol = NncpSolution::from_json(&read(&args.solution)?)?;
    let report = verify(&sol, &c, &coupling.graph);
    if report.ok {
        Ok(format!("ok: {} swaps", sol.opt))
    } else {
        Err(failure(EXIT_MISMATCH, report.violation.unwrap_or_default()))
    }
}
