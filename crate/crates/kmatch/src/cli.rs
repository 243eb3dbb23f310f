//! Command-line surface behind the `kmatch` binary.
//!
//! Results go to stdout and diagnostics to stderr, so golden files can be
//! diffed. Exit codes: 0 feasible/consistent/verified, 1 infeasible or
//! violation found or verification failed, 2 usage or input error,
//! 3 budget exceeded.

use std::ffi::OsString;
use std::io::Read;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use thiserror::Error;

use crate::certificates::{find_violator, verify_certificate, Certificate};
use crate::generate;
use crate::graph::Multigraph;
use crate::io::{
    parse_graph, parse_solution, write_feasible, write_graph, write_infeasible, ParseError,
};
use crate::oracle::{oracle_solve, OracleError, DEFAULT_WORK_BUDGET};
use crate::solver::{
    check_regular_corollary, solve, verify_perfect, SolveError, SolveOptions, WeightFunction,
    DEFAULT_CERT_BOUND,
};
use crate::transforms::{factor_gadget, multiply_edges, split_bipartite, TransformError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INFEASIBLE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

const ENV_CERT_BOUND: &str = "KMATCH_CERT_BOUND";
const ENV_WORK_BUDGET: &str = "KMATCH_WORK_BUDGET";

#[derive(Debug, Error)]
enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Generate(#[from] generate::GenerateError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("certificate bound {bound} exceeded: the graph has {n} vertices")]
    CertBoundExceeded { n: usize, bound: usize },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Oracle(OracleError::BudgetExceeded(_)) => EXIT_BUDGET,
            CliError::CertBoundExceeded { .. } => EXIT_BUDGET,
            _ => EXIT_USAGE,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "kmatch",
    version,
    about = "Decide, construct and certify perfect k-matchings on multigraphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether the graph has a perfect k-matching
    Decide {
        /// Matching order k
        #[arg(short)]
        k: usize,
        /// Largest n for which infeasible instances get a certificate
        #[arg(long)]
        cert_bound: Option<usize>,
        /// Graph file ('-' for stdin)
        file: String,
    },
    /// Decide and print the weight function when feasible
    Construct {
        #[arg(short)]
        k: usize,
        #[arg(long)]
        cert_bound: Option<usize>,
        file: String,
    },
    /// Search for the canonical violator certificate
    Certify {
        #[arg(short)]
        k: usize,
        #[arg(long)]
        cert_bound: Option<usize>,
        file: String,
    },
    /// Check a solution file (weights or certificate) against a graph
    Verify {
        /// Matching order k; defaults to the solution header's k
        #[arg(short)]
        k: Option<usize>,
        graph: String,
        solution: String,
    },
    /// Brute-force ground truth, optionally counting all solutions
    Oracle {
        #[arg(short)]
        k: usize,
        /// Count perfect weight functions (per normalized edge)
        #[arg(long)]
        count: bool,
        /// Backtracking-node budget
        #[arg(long)]
        work_budget: Option<usize>,
        file: String,
    },
    /// Evaluate the edge-connectivity condition for regular graphs (odd k)
    CheckRegular {
        #[arg(short)]
        k: usize,
        /// Require lambda to equal the threshold instead of meeting it
        #[arg(long)]
        strict_lambda: bool,
        file: String,
    },
    /// Emit a generated graph: cycle N | complete N |
    /// complete-bipartite A B | star LEAVES | petersen | gnp N P |
    /// random-regular N R | random-multigraph N M MAXMULT
    Gen {
        #[arg(required = true)]
        spec: Vec<String>,
        /// RNG seed; required for the randomized families
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Print the reduction graph the solver would use for this k
    DumpReduction {
        #[arg(short)]
        k: usize,
        file: String,
    },
}

/// Parses argv and runs one command, returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok((output, code)) => {
            print!("{output}");
            code
        }
        Err(e) => {
            eprintln!("kmatch: {e}");
            e.exit_code()
        }
    }
}

fn read_input(path: &str) -> Result<String, CliError> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|source| CliError::Io {
                path: "<stdin>".into(),
                source,
            })?;
        Ok(buf)
    } else {
        std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.into(),
            source,
        })
    }
}

fn load_graph(path: &str) -> Result<Multigraph, CliError> {
    parse_graph(&read_input(path)?).map_err(|source| CliError::Parse {
        path: path.into(),
        source,
    })
}

fn env_override(name: &str) -> Result<Option<usize>, CliError> {
    match std::env::var(name) {
        Ok(raw) => raw
            .parse()
            .map(Some)
            .map_err(|_| CliError::Usage(format!("{name} must be a number, got '{raw}'"))),
        Err(_) => Ok(None),
    }
}

fn effective_cert_bound(flag: Option<usize>) -> Result<usize, CliError> {
    Ok(flag
        .or(env_override(ENV_CERT_BOUND)?)
        .unwrap_or(DEFAULT_CERT_BOUND))
}

fn effective_work_budget(flag: Option<usize>) -> Result<usize, CliError> {
    Ok(flag
        .or(env_override(ENV_WORK_BUDGET)?)
        .unwrap_or(DEFAULT_WORK_BUDGET))
}

fn violator_set(cert: &Certificate) -> Option<&crate::graph::VertexSet> {
    match cert {
        Certificate::EvenViolator { s }
        | Certificate::OddViolator { s, .. }
        | Certificate::TutteViolator { s } => Some(s),
        _ => None,
    }
}

fn run_solve(
    g: &Multigraph,
    k: usize,
    cert_bound: Option<usize>,
    with_weights: bool,
) -> Result<(String, i32), CliError> {
    let opts = SolveOptions {
        cert_bound: effective_cert_bound(cert_bound)?,
        two_factor: false,
    };
    let report = solve(g, k, &opts)?;
    eprintln!(
        "kmatch: route {} (reduction {}v/{}e, matching {})",
        report.route,
        report.stats.reduction_vertices,
        report.stats.reduction_edges,
        report.stats.matching_size
    );
    match (&report.outcome, with_weights) {
        (crate::solver::Outcome::Feasible { weights, .. }, true) => {
            Ok((write_feasible(g, weights), EXIT_OK))
        }
        (crate::solver::Outcome::Feasible { .. }, false) => {
            Ok((format!("s kmatch {} {} feasible\n", g.n(), k), EXIT_OK))
        }
        (
            crate::solver::Outcome::Infeasible {
                certificate,
                skipped_reason,
            },
            _,
        ) => {
            if let Some(reason) = skipped_reason {
                eprintln!("kmatch: {reason}");
            }
            let s = certificate.as_ref().and_then(violator_set);
            Ok((write_infeasible(g.n(), k, s), EXIT_INFEASIBLE))
        }
    }
}

fn run_certify(g: &Multigraph, k: usize, cert_bound: Option<usize>) -> Result<(String, i32), CliError> {
    if k == 0 {
        return Err(SolveError::InvalidK.into());
    }
    let bound = effective_cert_bound(cert_bound)?;
    if g.n() > bound {
        return Err(CliError::CertBoundExceeded { n: g.n(), bound });
    }
    match find_violator(g, k, bound) {
        Some(cert) => {
            assert!(verify_certificate(g, &cert).unwrap_or(false));
            Ok((
                write_infeasible(g.n(), k, violator_set(&cert)),
                EXIT_INFEASIBLE,
            ))
        }
        None => Ok((format!("s kmatch {} {} feasible\n", g.n(), k), EXIT_OK)),
    }
}

fn run_verify(
    g: &Multigraph,
    k_flag: Option<usize>,
    solution_text: &str,
    path: &str,
) -> Result<(String, i32), CliError> {
    let sol = parse_solution(solution_text).map_err(|source| CliError::Parse {
        path: path.into(),
        source,
    })?;
    if sol.n != g.n() {
        return Err(CliError::Usage(format!(
            "solution header says n = {}, graph has {}",
            sol.n,
            g.n()
        )));
    }
    let k = match k_flag {
        Some(k) if k != sol.k => {
            return Err(CliError::Usage(format!(
                "-k {} disagrees with the solution header's k = {}",
                k, sol.k
            )))
        }
        Some(k) => k,
        None => sol.k,
    };
    let verdict = if sol.feasible {
        let input_len = g.input_map().len();
        let mut weights = vec![0usize; g.record_count()];
        let mut seen = vec![false; g.record_count()];
        for (pos, w) in &sol.weights {
            if *pos >= input_len {
                return Err(CliError::Usage(format!(
                    "weight line refers to edge {} but the graph has {input_len} edge lines",
                    pos + 1
                )));
            }
            let rec = g.input_map()[*pos];
            if seen[rec] {
                return Err(CliError::Usage(format!(
                    "duplicate weight for edge {}",
                    pos + 1
                )));
            }
            seen[rec] = true;
            weights[rec] = *w;
        }
        let f = WeightFunction::new(g, k, weights)?;
        verify_perfect(g, &f)
    } else {
        let Some(s) = sol.cert_s else {
            return Err(CliError::Usage(
                "infeasible solution has no 'cert S' line to verify".into(),
            ));
        };
        let cert = if k % 2 == 0 {
            Certificate::EvenViolator { s }
        } else {
            Certificate::OddViolator { s, k }
        };
        verify_certificate(g, &cert)
            .map_err(|e| CliError::Usage(format!("certificate does not fit the graph: {e}")))?
    };
    if verdict {
        Ok((format!("s kmatch {} {} verified\n", g.n(), k), EXIT_OK))
    } else {
        Ok((
            format!("s kmatch {} {} failed\n", g.n(), k),
            EXIT_INFEASIBLE,
        ))
    }
}

fn run_oracle(
    g: &Multigraph,
    k: usize,
    count: bool,
    budget: Option<usize>,
) -> Result<(String, i32), CliError> {
    if k == 0 {
        return Err(SolveError::InvalidK.into());
    }
    let budget = effective_work_budget(budget)?;
    let result = oracle_solve(g, k, count, budget)?;
    let mut out = String::new();
    if let Some(c) = result.count {
        out.push_str(&format!("c count {c}\n"));
    }
    if let Some(f) = &result.witness {
        out.push_str(&write_feasible(g, f));
        Ok((out, EXIT_OK))
    } else {
        out.push_str(&write_infeasible(g.n(), k, None));
        Ok((out, EXIT_INFEASIBLE))
    }
}

fn run_check_regular(
    g: &Multigraph,
    k: usize,
    strict: bool,
) -> Result<(String, i32), CliError> {
    let check = check_regular_corollary(g, k, strict)?;
    let fmt_opt = |x: Option<usize>| x.map_or("-".to_string(), |v| v.to_string());
    let line = format!(
        "r kmatch {} {} r={} lambda={} threshold={} parity={} hypothesis={} decision={} verdict={}\n",
        g.n(),
        k,
        fmt_opt(check.r),
        fmt_opt(check.lambda),
        fmt_opt(check.threshold),
        if check.parity_ok { "even" } else { "odd" },
        if check.hypothesis_met { "met" } else { "unmet" },
        if check.feasible { "feasible" } else { "infeasible" },
        if check.violation { "violation" } else { "consistent" },
    );
    let code = if check.violation {
        EXIT_INFEASIBLE
    } else {
        EXIT_OK
    };
    Ok((line, code))
}

fn run_gen(spec: &[String], seed: Option<u64>) -> Result<(String, i32), CliError> {
    fn arg<T: std::str::FromStr>(spec: &[String], i: usize, what: &str) -> Result<T, CliError> {
        spec.get(i)
            .ok_or_else(|| CliError::Usage(format!("missing {what}")))?
            .parse()
            .map_err(|_| CliError::Usage(format!("invalid {what}: '{}'", spec[i])))
    }
    fn need_seed(seed: Option<u64>, family: &str) -> Result<u64, CliError> {
        seed.ok_or_else(|| CliError::Usage(format!("--seed is required for {family}")))
    }
    fn arity(spec: &[String], expected: usize) -> Result<(), CliError> {
        if spec.len() != expected + 1 {
            return Err(CliError::Usage(format!(
                "'{}' takes {} parameter(s), got {}",
                spec[0],
                expected,
                spec.len() - 1
            )));
        }
        Ok(())
    }
    let g = match spec[0].as_str() {
        "cycle" => {
            arity(spec, 1)?;
            generate::cycle(arg(spec, 1, "vertex count")?)?
        }
        "complete" => {
            arity(spec, 1)?;
            generate::complete(arg(spec, 1, "vertex count")?)?
        }
        "complete-bipartite" => {
            arity(spec, 2)?;
            generate::complete_bipartite(arg(spec, 1, "side size")?, arg(spec, 2, "side size")?)?
        }
        "star" => {
            arity(spec, 1)?;
            generate::star(arg(spec, 1, "leaf count")?)?
        }
        "petersen" => {
            arity(spec, 0)?;
            generate::petersen()
        }
        "gnp" => {
            arity(spec, 2)?;
            generate::gnp(
                arg(spec, 1, "vertex count")?,
                arg(spec, 2, "edge probability")?,
                need_seed(seed, "gnp")?,
            )?
        }
        "random-regular" => {
            arity(spec, 2)?;
            generate::random_regular(
                arg(spec, 1, "vertex count")?,
                arg(spec, 2, "degree")?,
                need_seed(seed, "random-regular")?,
            )?
        }
        "random-multigraph" => {
            arity(spec, 3)?;
            generate::random_multigraph(
                arg(spec, 1, "vertex count")?,
                arg(spec, 2, "edge draws")?,
                arg(spec, 3, "max multiplicity")?,
                need_seed(seed, "random-multigraph")?,
            )?
        }
        other => {
            return Err(CliError::Usage(format!("unknown generator '{other}'")));
        }
    };
    Ok((write_graph(&g), EXIT_OK))
}

fn run_dump_reduction(g: &Multigraph, k: usize) -> Result<(String, i32), CliError> {
    if k == 0 {
        return Err(SolveError::InvalidK.into());
    }
    let (comment, reduced) = if k == 1 {
        let pairs = g
            .records()
            .iter()
            .filter(|e| !e.is_loop())
            .map(|e| (e.u, e.v));
        let stripped = Multigraph::from_pairs(g.n(), pairs).expect("indices stay valid");
        ("c reduction direct_matching (loops and parallels stripped)", stripped)
    } else if k % 2 == 0 {
        let split = split_bipartite(g);
        (
            "c reduction even_via_2matching (bipartite split graph)",
            split.graph,
        )
    } else {
        let multiplied = multiply_edges(g, k);
        let gm = factor_gadget(&multiplied.graph, k).map_err(|e| match e {
            TransformError::DegreeTooSmall { vertex, degree, k } => CliError::Usage(format!(
                "reduction unavailable: vertex {} has degree {degree} below k = {k}",
                vertex + 1
            )),
            other => CliError::Usage(other.to_string()),
        })?;
        (
            "c reduction odd_via_kfactor (factor gadget of the k-fold graph)",
            gm.gadget,
        )
    };
    // A comment plus the ordinary graph format keeps the dump parseable.
    Ok((format!("{comment}\n{}", write_graph(&reduced)), EXIT_OK))
}

fn execute(command: Command) -> Result<(String, i32), CliError> {
    match command {
        Command::Decide { k, cert_bound, file } => {
            let g = load_graph(&file)?;
            run_solve(&g, k, cert_bound, false)
        }
        Command::Construct { k, cert_bound, file } => {
            let g = load_graph(&file)?;
            run_solve(&g, k, cert_bound, true)
        }
        Command::Certify { k, cert_bound, file } => {
            let g = load_graph(&file)?;
            run_certify(&g, k, cert_bound)
        }
        Command::Verify { k, graph, solution } => {
            let g = load_graph(&graph)?;
            let text = read_input(&solution)?;
            run_verify(&g, k, &text, &solution)
        }
        Command::Oracle {
            k,
            count,
            work_budget,
            file,
        } => {
            let g = load_graph(&file)?;
            run_oracle(&g, k, count, work_budget)
        }
        Command::CheckRegular {
            k,
            strict_lambda,
            file,
        } => {
            let g = load_graph(&file)?;
            run_check_regular(&g, k, strict_lambda)
        }
        Command::Gen { spec, seed } => run_gen(&spec, seed),
        Command::DumpReduction { k, file } => {
            let g = load_graph(&file)?;
            run_dump_reduction(&g, k)
        }
    }
}
