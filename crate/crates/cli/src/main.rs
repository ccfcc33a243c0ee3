//! Command-line front end: runs the algorithm kernels and the
//! verification suites, emitting human-readable or line-delimited
//! structured reports.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use oraclesim::algorithms::{
    dj_kernel, grover_iterations, grover_kernel, grover_n4, perm_partition, simon_kernel,
    grover_success_closed_form,
};
use oraclesim::report::{Check, Report};
use oraclesim::SimError;

#[derive(Parser)]
#[command(
    name = "oraclesim",
    version,
    about = "Oracle quantum algorithm simulator and query-count verifier"
)]
struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Write the output to this path instead of stdout. The ORACLESIM_OUT
    /// environment variable overrides it.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Subcommand)]
enum Command {
    /// Run the database-search kernel and check it against the closed form.
    Grover {
        /// Number of argument qubits (even, 2..=8).
        #[arg(long, default_value_t = 2)]
        n: usize,
    },
    /// Run the constant-vs-balanced kernel.
    Dj,
    /// Run the period-finding kernel and its measurement loop.
    Simon {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run the permutation-partition kernel.
    Perm,
    /// Check every simulated state against the reference constructions.
    VerifyStates,
    /// Check the entropy ledger: 2 bits, 1 bit after a half projection, 0 after the full one.
    VerifyEntropy,
    /// Check the history counts, the phased sum, and branch interference.
    VerifyHistories,
    /// Compare quantum query counts against the classical baselines.
    #[command(name = "verify-50")]
    Verify50 {
        /// Family id: grover, grover4, dj, simon, or perm. All five when omitted.
        #[arg(long)]
        family: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run every verification suite.
    VerifyAll {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn run_grover(n: usize) -> Result<(String, Report), SimError> {
    let mut report = Report::new(&format!("grover{n}"));
    let (artifact, trace) = if n == 2 {
        let trace = grover_n4()?;
        (trace.export(), trace)
    } else {
        let run = grover_kernel(n)?;
        report.push(Check::info(
            &format!("grover{n}.ideal_fidelity"),
            "overlap with the maximally correlated state (no threshold)",
            &format!("{:.9}", run.ideal_fidelity),
        ));
        (run.trace.export(), run.trace)
    };
    report.push(Check::count(
        &format!("grover{n}.oracle_calls"),
        "oracle calls used by the kernel",
        grover_iterations(n),
        trace.oracle_calls,
    ));
    let closed = grover_success_closed_form(n, grover_iterations(n));
    let worst_dev = trace
        .success
        .values()
        .map(|p| (p - closed).abs())
        .fold(0.0, f64::max);
    report.push(Check::close(
        &format!("grover{n}.success_vs_closed_form"),
        "max deviation of simulated success from the closed form",
        0.0,
        worst_dev,
        1e-9,
    ));
    Ok((artifact, report))
}

fn run_dj() -> Result<(String, Report), SimError> {
    let trace = dj_kernel()?;
    let mut report = Report::new("dj");
    report.push(Check::count(
        "dj.oracle_calls",
        "oracle calls used by the kernel",
        1,
        trace.oracle_calls,
    ));
    report.push(Check::holds(
        "dj.readout_correct",
        "readout identifies constant versus balanced with certainty",
        trace.success.values().all(|&p| (p - 1.0).abs() < 1e-12),
    ));
    Ok((trace.export(), report))
}

fn run_simon(seed: u64) -> Result<(String, Report), SimError> {
    let run = simon_kernel(seed)?;
    let mut artifact = run.trace.export();
    for (label, rec) in &run.recovered {
        artifact.push_str(&format!(
            "recovered: {label} -> {} ({} iterations)\n",
            rec.period, rec.iterations
        ));
    }
    let family = oraclesim::families::simon_family();
    let mut report = Report::new("simon");
    report.push(Check::count(
        "simon.oracle_calls",
        "oracle calls in the traced run",
        1,
        run.trace.oracle_calls,
    ));
    report.push(Check::holds(
        "simon.periods_recovered",
        "GF(2) solving recovers every member's period",
        run.recovered
            .iter()
            .all(|(k, rec)| family.solution(k) == Some(rec.period.to_string().as_str())),
    ));
    report.push(Check::holds(
        "simon.samples_orthogonal",
        "every sampled string is orthogonal to the period",
        run.recovered
            .values()
            .all(|rec| rec.samples.iter().all(|s| s.dot(&rec.period) == 0)),
    ));
    Ok((artifact, report))
}

fn run_perm() -> Result<(String, Report), SimError> {
    let run = perm_partition()?;
    let mut artifact = run.trace.export();
    for (label, outcome) in &run.partition {
        artifact.push_str(&format!("partition: {label} -> {outcome}\n"));
    }
    let mut report = Report::new("perm");
    report.push(Check::count(
        "perm.oracle_calls",
        "oracle calls used by the kernel",
        1,
        run.trace.oracle_calls,
    ));
    let mut sizes = std::collections::BTreeMap::new();
    for outcome in run.partition.values() {
        *sizes.entry(outcome.to_string()).or_insert(0usize) += 1;
    }
    report.push(Check::holds(
        "perm.partition_sizes",
        "the three X outcomes split the members eight/eight/eight",
        sizes.len() == 3 && sizes.values().all(|&c| c == 8),
    ));
    report.push(Check::holds(
        "perm.outcome_never_zero",
        "X outcome is never the all-zero string",
        run.partition.values().all(|x| !x.is_zero()),
    ));
    Ok((artifact, report))
}

fn execute(command: &Command) -> Result<(String, Report), SimError> {
    match command {
        Command::Grover { n } => run_grover(*n),
        Command::Dj => run_dj(),
        Command::Simon { seed } => run_simon(*seed),
        Command::Perm => run_perm(),
        Command::VerifyStates => Ok((String::new(), oraclesim::report::verify_states())),
        Command::VerifyEntropy => Ok((String::new(), oraclesim::report::verify_entropy())),
        Command::VerifyHistories => {
            Ok((String::new(), oraclesim::report::verify_histories()))
        }
        Command::Verify50 { family, seed } => match family {
            Some(id) => Ok((String::new(), oraclesim::report::verify_fifty(id, *seed)?)),
            None => {
                let mut reports = Vec::new();
                for id in ["grover", "grover4", "dj", "simon", "perm"] {
                    reports.push(oraclesim::report::verify_fifty(id, *seed)?);
                }
                Ok((String::new(), Report::merge("fifty", reports)))
            }
        },
        Command::VerifyAll { seed } => {
            Ok((String::new(), oraclesim::report::verify_all(*seed)))
        }
    }
}

fn emit(text: &str, out: Option<&PathBuf>) -> std::io::Result<()> {
    let env_out = std::env::var_os("ORACLESIM_OUT").map(PathBuf::from);
    match env_out.as_ref().or(out) {
        Some(path) => std::fs::write(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (artifact, report) = match execute(&cli.command) {
        Ok(result) => result,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let rendered = match cli.format {
        Format::Text => format!("{artifact}{}", report.render_text()),
        Format::Structured => report.render_structured(),
    };
    if let Err(e) = emit(&rendered, cli.out.as_ref()) {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    if report.overall() {
        ExitCode::SUCCESS
    } else {
        let first = report.first_failure().expect("a failing check exists");
        eprintln!("FAIL: {}", first.id);
        ExitCode::from(1)
    }
}
