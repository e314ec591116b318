use std::fs::File;
use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;

use dynstr_bench::{
    parse_ratio, run_gadget, run_workload, write_csv, Gadget, GadgetSpec, Mode, Model, Problem, WorkloadSpec,
    GADGET_HEADER, WORKLOAD_HEADER,
};

/// Seeded workloads over the dynamic string structures, or reduction
/// gadget runs with --gadget. Writes CSV; exits non-zero when any answer
/// disagrees with the reference.
#[derive(Debug, Parser)]
#[command(name = "dynstr-bench", version)]
struct Args {
    #[arg(long, value_enum, default_value = "hd")]
    problem: Problem,
    /// Text length.
    #[arg(long, default_value_t = 1024)]
    n: usize,
    /// Pattern length.
    #[arg(long, default_value_t = 64)]
    m: usize,
    /// Alphabet size.
    #[arg(long, default_value_t = 2)]
    sigma: u32,
    #[arg(long, value_enum, default_value = "both")]
    model: Model,
    #[arg(long, value_enum, default_value = "deamortized")]
    mode: Mode,
    /// Number of operations.
    #[arg(long, default_value_t = 1000)]
    ops: usize,
    /// Updates to queries, as U:Q.
    #[arg(long, default_value = "1:1", value_parser = parse_ratio)]
    ratio: (u32, u32),
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0.5)]
    epsilon: f64,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<String>,
    /// Run a reduction gadget instead of a workload.
    #[arg(long, value_enum)]
    gadget: Option<Gadget>,
    /// Gadget instance size.
    #[arg(long, default_value_t = 8)]
    r: usize,
    /// Gadget seeds, starting at --seed.
    #[arg(long, default_value_t = 10)]
    seeds: u64,
    /// Trials per vector for randomised gadgets.
    #[arg(long)]
    repetitions: Option<usize>,
    /// Modulus for omv_ip_modc.
    #[arg(long, default_value_t = 3)]
    modulus: u64,
}

fn run(args: Args) -> Result<bool, dynstr_bench::BenchError> {
    let out: Box<dyn Write> = match &args.out {
        Some(path) => Box::new(File::create(path)?),
        None => Box::new(io::stdout().lock()),
    };
    if let Some(gadget) = args.gadget {
        let spec = GadgetSpec {
            gadget,
            r: args.r,
            seeds: args.seeds,
            first_seed: args.seed,
            repetitions: args.repetitions,
            modulus: args.modulus,
            ops: args.ops,
        };
        let rows = run_gadget(&spec)?;
        write_csv(out, &GADGET_HEADER, &rows)?;
        return Ok(rows.iter().all(|r| r.verdict));
    }
    let spec = WorkloadSpec {
        problem: args.problem,
        sigma: args.sigma,
        n: args.n,
        m: args.m,
        model: args.model,
        mode: args.mode,
        count: args.ops,
        ratio: args.ratio,
        seed: args.seed,
        epsilon: args.epsilon,
    };
    let report = run_workload(&spec)?;
    write_csv(out, &WORKLOAD_HEADER, &report.rows)?;
    Ok(report.passed)
}

fn main() -> ExitCode {
    match run(Args::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("dynstr-bench: some answers disagreed with the reference");
            ExitCode::FAILURE
        }
        Err(e) => {
            eprintln!("dynstr-bench: {e}");
            ExitCode::from(2)
        }
    }
}
