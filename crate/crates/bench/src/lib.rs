//! Seeded workloads and reduction-gadget runs for `dynstr`, reported as CSV.

use std::io::Write;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use dynstr::approx::{ApproxError, ApproxHd, MappedExactHd, MappingBank, PatternSketchHd, SketchParams, TextCanonicalHd};
use dynstr::lazy::RebuildMode;
use dynstr::oracle;
use dynstr::problems::{BlockedStructure, DynEm, DynHd, DynIp, ParityStructure, ProblemError, UpdateModel};
use dynstr::reductions::{
    default_repetitions, omv_via_approx_dynip, omv_via_dynem, omv_via_dynip_modc, GridInstance, HdLiftedIp,
    IpBackend, OmvInstance, OmvLayout, PerturbedIp, RangeCountGadget, RangeEmptyGadget, ReductionError,
    TernaryLiftedIp,
};
use dynstr::{Alphabet, DynamicString, StringError, Symbol, Target};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("--{field}: {message}")]
    Spec { field: &'static str, message: String },
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error(transparent)]
    Approx(#[from] ApproxError),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error(transparent)]
    String(#[from] StringError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn invalid(field: &'static str, message: impl Into<String>) -> BenchError {
    BenchError::Spec {
        field,
        message: message.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum Problem {
    Hd,
    Ip,
    Em,
    HdMod2,
    IpMod2,
    ApproxHd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    Pattern,
    Text,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Mode {
    Amortized,
    Deamortized,
}

impl From<Mode> for RebuildMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Amortized => RebuildMode::Amortized,
            Mode::Deamortized => RebuildMode::Deamortized,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WorkloadSpec {
    pub problem: Problem,
    pub sigma: u32,
    pub n: usize,
    pub m: usize,
    pub model: Model,
    pub mode: Mode,
    pub count: usize,
    /// Updates : queries.
    pub ratio: (u32, u32),
    pub seed: u64,
    pub epsilon: f64,
}

impl Default for WorkloadSpec {
    fn default() -> Self {
        WorkloadSpec {
            problem: Problem::Hd,
            sigma: 2,
            n: 1024,
            m: 64,
            model: Model::Both,
            mode: Mode::Deamortized,
            count: 1000,
            ratio: (1, 1),
            seed: 0,
            epsilon: 0.5,
        }
    }
}

/// Parses `U:Q`.
pub fn parse_ratio(s: &str) -> Result<(u32, u32), String> {
    let (u, q) = s.split_once(':').ok_or("expected U:Q")?;
    let u = u.trim().parse().map_err(|e| format!("{e}"))?;
    let q = q.trim().parse().map_err(|e| format!("{e}"))?;
    Ok((u, q))
}

pub fn alphabet_for(sigma: u32) -> Result<Alphabet, StringError> {
    match sigma {
        2 => Ok(Alphabet::binary()),
        3 => Ok(Alphabet::ternary()),
        s if s <= 64 => Alphabet::constant(s),
        s => Alphabet::polynomial(s),
    }
}

impl WorkloadSpec {
    pub fn validate(&self) -> Result<(), BenchError> {
        if self.m == 0 {
            return Err(invalid("m", "must be at least 1"));
        }
        if self.n < self.m {
            return Err(invalid("n", format!("must be at least m = {}", self.m)));
        }
        if self.ratio.0 as u64 + self.ratio.1 as u64 == 0 {
            return Err(invalid("ratio", "U + Q must be positive"));
        }
        if self.sigma < 2 {
            return Err(invalid("sigma", "must be at least 2"));
        }
        if matches!(self.problem, Problem::HdMod2 | Problem::IpMod2) && self.sigma != 2 {
            return Err(invalid("sigma", "modulo 2 problems run on the binary alphabet"));
        }
        if self.problem == Problem::ApproxHd && !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(invalid("epsilon", "must lie in (0, 1)"));
        }
        alphabet_for(self.sigma).map_err(|e| invalid("sigma", e.to_string()))?;
        Ok(())
    }

    fn update_model(&self) -> UpdateModel {
        match self.model {
            Model::Text => UpdateModel::TextOnly,
            _ => UpdateModel::PatternAndText,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub schema_version: u32,
    pub problem: Problem,
    pub alphabet: String,
    pub n: usize,
    pub m: usize,
    pub model: Model,
    pub epsilon: Option<f64>,
    pub op_kind: &'static str,
    pub median_ns: u64,
    pub p99_ns: u64,
    pub work_units_median: u64,
    pub rebuilds: u64,
    pub coverage: Option<f64>,
}

/// Result of one workload: report rows, every answer in order, and whether
/// all checks against the oracle passed.
#[derive(Debug, Clone)]
pub struct WorkloadReport {
    pub rows: Vec<ReportRow>,
    pub answers: Vec<f64>,
    pub passed: bool,
}

enum Subject {
    Exact(BlockedStructure, Problem),
    Parity(ParityStructure),
    Approx(Box<dyn ApproxHd>),
}

impl Subject {
    fn update(&mut self, target: Target, pos: usize, sym: Symbol) -> Result<u64, BenchError> {
        Ok(match self {
            Subject::Exact(s, _) => {
                s.update(target, pos, sym)?;
                s.work_units_last_op()
            }
            Subject::Parity(s) => {
                s.update(target, pos, sym)?;
                s.nodes_touched_last() as u64
            }
            Subject::Approx(s) => {
                s.update(target, pos, sym)?;
                s.work_last_op()
            }
        })
    }

    fn query(&mut self, i: usize) -> Result<(f64, u64), BenchError> {
        Ok(match self {
            Subject::Exact(s, Problem::IpMod2) => (s.mod_query(i, 2)? as f64, s.work_units_last_op()),
            Subject::Exact(s, Problem::Em) => ((s.query_value(i)? == 0) as u8 as f64, s.work_units_last_op()),
            Subject::Exact(s, _) => (s.query_value(i)? as f64, s.work_units_last_op()),
            Subject::Parity(s) => (s.query(i)? as f64, s.nodes_touched_last() as u64),
            Subject::Approx(s) => (s.query(i)?, s.work_last_op()),
        })
    }

    fn rebuilds(&self) -> u64 {
        match self {
            Subject::Exact(s, _) => s.rebuilds_total(),
            _ => 0,
        }
    }
}

fn build_subject(spec: &WorkloadSpec, p: DynamicString, t: DynamicString) -> Result<Subject, BenchError> {
    let (mode, model) = (spec.mode.into(), spec.update_model());
    Ok(match spec.problem {
        Problem::Hd => Subject::Exact(DynHd::new(p, t, mode, model)?.into_inner(), spec.problem),
        Problem::Ip | Problem::IpMod2 => Subject::Exact(DynIp::new(p, t, mode, model)?.into_inner(), spec.problem),
        Problem::Em => Subject::Exact(DynEm::new(p, t, mode, model)?.into_inner(), spec.problem),
        Problem::HdMod2 => Subject::Parity(ParityStructure::new(&p, &t)?),
        Problem::ApproxHd => {
            let params = SketchParams::new(spec.epsilon)?;
            match spec.model {
                Model::Pattern => Subject::Approx(Box::new(PatternSketchHd::build(&p, &t, &params, spec.seed)?)),
                Model::Text => Subject::Approx(Box::new(TextCanonicalHd::build(&p, &t, &params, spec.seed)?)),
                Model::Both => {
                    let bank = if spec.sigma == 2 {
                        MappingBank::identity()
                    } else {
                        MappingBank::for_params(&params, spec.seed)
                    };
                    Subject::Approx(Box::new(MappedExactHd::build(p, t, bank, mode)?))
                }
            }
        }
    })
}

fn expected(problem: Problem, p: &[Symbol], t: &[Symbol], i: usize) -> Result<f64, StringError> {
    Ok(match problem {
        Problem::Hd | Problem::ApproxHd => oracle::naive_hd(p, t, i)? as f64,
        Problem::HdMod2 => (oracle::naive_hd(p, t, i)? % 2) as f64,
        Problem::Ip => oracle::naive_ip(p, t, i)? as f64,
        Problem::IpMod2 => (oracle::naive_ip(p, t, i)? % 2) as f64,
        Problem::Em => oracle::naive_em(p, t, i)?.matches as u8 as f64,
    })
}

fn percentile(sorted: &[u64], q: f64) -> u64 {
    if sorted.is_empty() {
        return 0;
    }
    let k = ((sorted.len() as f64 * q).ceil() as usize).clamp(1, sorted.len());
    sorted[k - 1]
}

fn median(v: &mut [u64]) -> u64 {
    v.sort_unstable();
    percentile(v, 0.5)
}

/// Runs one seeded workload. Identical specs give identical answers.
pub fn run_workload(spec: &WorkloadSpec) -> Result<WorkloadReport, BenchError> {
    spec.validate()?;
    if spec.count == 0 {
        return Ok(WorkloadReport {
            rows: Vec::new(),
            answers: Vec::new(),
            passed: true,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut alphabet = alphabet_for(spec.sigma)?;
    if spec.problem == Problem::Em {
        alphabet = alphabet.with_wildcard();
    }
    let lo = alphabet.has_wildcard() as Symbol;
    let hi = alphabet.max_symbol();
    let gen = |rng: &mut ChaCha8Rng| {
        if alphabet.has_wildcard() && rng.gen_bool(0.1) {
            0
        } else {
            rng.gen_range(lo..=hi)
        }
    };
    let mut p: Vec<Symbol> = (0..spec.m).map(|_| gen(&mut rng)).collect();
    let mut t: Vec<Symbol> = (0..spec.n).map(|_| gen(&mut rng)).collect();
    let mut subject = build_subject(
        spec,
        DynamicString::new(p.clone(), alphabet)?,
        DynamicString::new(t.clone(), alphabet)?,
    )?;

    let (u, q) = spec.ratio;
    let p_update = u as f64 / (u as f64 + q as f64);
    let alignments = spec.n - spec.m + 1;
    let mut times = [Vec::new(), Vec::new()];
    let mut work = [Vec::new(), Vec::new()];
    let mut answers = Vec::new();
    let (mut passed, mut covered, mut approx_queries) = (true, 0usize, 0usize);
    for _ in 0..spec.count {
        if rng.gen_bool(p_update) {
            let target = match spec.model {
                Model::Pattern => Target::Pattern,
                Model::Text => Target::Text,
                Model::Both if rng.gen_bool(0.5) => Target::Pattern,
                Model::Both => Target::Text,
            };
            let (s, len) = match target {
                Target::Pattern => (&mut p, spec.m),
                Target::Text => (&mut t, spec.n),
            };
            let pos = rng.gen_range(1..=len);
            let sym = gen(&mut rng);
            s[pos - 1] = sym;
            let start = Instant::now();
            let w = subject.update(target, pos, sym)?;
            times[0].push(start.elapsed().as_nanos() as u64);
            work[0].push(w);
        } else {
            let i = rng.gen_range(1..=alignments);
            let start = Instant::now();
            let (got, w) = subject.query(i)?;
            times[1].push(start.elapsed().as_nanos() as u64);
            work[1].push(w);
            let want = expected(spec.problem, &p, &t, i)?;
            if spec.problem == Problem::ApproxHd {
                approx_queries += 1;
                if got >= (1.0 - spec.epsilon) * want && got <= (1.0 + spec.epsilon) * want {
                    covered += 1;
                }
                if want == 0.0 && got != 0.0 {
                    passed = false;
                }
            } else if got != want {
                passed = false;
            }
            answers.push(got);
        }
    }

    let approx = spec.problem == Problem::ApproxHd;
    let mut rows = Vec::new();
    for (k, kind) in ["update", "query"].into_iter().enumerate() {
        if times[k].is_empty() {
            continue;
        }
        times[k].sort_unstable();
        rows.push(ReportRow {
            schema_version: SCHEMA_VERSION,
            problem: spec.problem,
            alphabet: alphabet.to_string(),
            n: spec.n,
            m: spec.m,
            model: spec.model,
            epsilon: approx.then_some(spec.epsilon),
            op_kind: kind,
            median_ns: percentile(&times[k], 0.5),
            p99_ns: percentile(&times[k], 0.99),
            work_units_median: median(&mut work[k]),
            rebuilds: subject.rebuilds(),
            coverage: (approx && kind == "query" && approx_queries > 0)
                .then(|| covered as f64 / approx_queries as f64),
        });
    }
    Ok(WorkloadReport { rows, answers, passed })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum Gadget {
    OmvDynem,
    OmvDynemText,
    OmvIpMod2,
    OmvIpMod2Text,
    OmvIpModc,
    OmvApproxIp,
    OmvTernaryLift,
    RangeCount,
    RangeEmpty,
    LiftHd,
    LiftTernary,
}

impl Gadget {
    /// One-sided randomised gadgets; their contract is no false positives.
    pub fn is_randomised(self) -> bool {
        matches!(
            self,
            Gadget::OmvIpMod2 | Gadget::OmvIpMod2Text | Gadget::OmvIpModc | Gadget::OmvTernaryLift
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetSpec {
    pub gadget: Gadget,
    pub r: usize,
    pub seeds: u64,
    pub first_seed: u64,
    /// Trials per vector for randomised gadgets; `None` uses the default.
    pub repetitions: Option<usize>,
    /// Modulus for `omv_ip_modc`.
    pub modulus: u64,
    /// Operations per seed for the grid and lift gadgets.
    pub ops: usize,
}

impl Default for GadgetSpec {
    fn default() -> Self {
        GadgetSpec {
            gadget: Gadget::OmvDynem,
            r: 8,
            seeds: 10,
            first_seed: 0,
            repetitions: None,
            modulus: 3,
            ops: 50,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GadgetRow {
    pub schema_version: u32,
    pub gadget: Gadget,
    pub r: usize,
    pub seed: u64,
    pub repetitions: usize,
    pub backend_updates: u64,
    pub backend_queries: u64,
    pub total_ns: u64,
    /// Answer entries equal to 1 in the reference.
    pub true_ones: u64,
    pub false_negatives: u64,
    pub false_positives: u64,
    /// Every answer equals the reference.
    pub exact: bool,
    /// The gadget met its contract: exact for deterministic gadgets, no
    /// false positives for randomised ones.
    pub verdict: bool,
}

#[derive(Default)]
struct Tally {
    ones: u64,
    fneg: u64,
    fpos: u64,
}

impl Tally {
    fn record(&mut self, got: bool, want: bool) {
        self.ones += want as u64;
        self.fneg += (want && !got) as u64;
        self.fpos += (!want && got) as u64;
    }
}

fn mode_model(layout: OmvLayout) -> UpdateModel {
    match layout {
        OmvLayout::VectorInPattern => UpdateModel::PatternAndText,
        OmvLayout::VectorInText => UpdateModel::TextOnly,
    }
}

fn run_omv(spec: &GadgetSpec, seed: u64, rng: &mut ChaCha8Rng) -> Result<(Tally, usize, u64, u64), BenchError> {
    let inst = OmvInstance::random(spec.r, 0.15, rng);
    let want = oracle::naive_omv(&inst);
    let reps = spec.repetitions.unwrap_or_else(|| default_repetitions(spec.r * spec.r));
    let mode = RebuildMode::Deamortized;
    let out = match spec.gadget {
        Gadget::OmvDynem | Gadget::OmvDynemText => {
            let layout = if spec.gadget == Gadget::OmvDynem {
                OmvLayout::VectorInPattern
            } else {
                OmvLayout::VectorInText
            };
            omv_via_dynem(&inst, layout, |p, t| Ok(DynEm::new(p, t, mode, mode_model(layout))?))?
        }
        Gadget::OmvIpMod2 | Gadget::OmvIpMod2Text | Gadget::OmvIpModc => {
            let layout = if spec.gadget == Gadget::OmvIpMod2Text {
                OmvLayout::VectorInText
            } else {
                OmvLayout::VectorInPattern
            };
            let c = if spec.gadget == Gadget::OmvIpModc { spec.modulus } else { 2 };
            omv_via_dynip_modc(&inst, layout, c, reps, rng, |p, t| {
                Ok(DynIp::new(p, t, mode, mode_model(layout))?)
            })?
        }
        Gadget::OmvTernaryLift => omv_via_dynip_modc(&inst, OmvLayout::VectorInPattern, 2, reps, rng, |p, t| {
            TernaryLiftedIp::new(p, t, mode, UpdateModel::PatternAndText)
        })?,
        Gadget::OmvApproxIp => omv_via_approx_dynip(&inst, OmvLayout::VectorInPattern, |p, t| {
            PerturbedIp::new(DynIp::new(p, t, mode, UpdateModel::PatternAndText)?, 0.5, seed)
        })?,
        _ => unreachable!(),
    };
    let mut tally = Tally::default();
    for (row_got, row_want) in out.product.iter().zip(&want) {
        for (&g, &w) in row_got.iter().zip(row_want) {
            tally.record(g, w);
        }
    }
    let reps = if spec.gadget.is_randomised() { reps } else { 1 };
    Ok((tally, reps, out.counters.updates, out.counters.queries))
}

fn run_grid(spec: &GadgetSpec, rng: &mut ChaCha8Rng) -> Result<(Tally, u64, u64, bool), BenchError> {
    let r = spec.r;
    let mode = RebuildMode::Deamortized;
    let max_weight = 100;
    let mut tally = Tally::default();
    let mut exact = true;
    let point = |rng: &mut ChaCha8Rng| (rng.gen_range(1..=r), rng.gen_range(1..=r));
    let counters = if spec.gadget == Gadget::RangeCount {
        let mut g = RangeCountGadget::new(GridInstance::new(r).map_err(ReductionError::from)?, max_weight, |p, t| {
            Ok(DynIp::new(p, t, mode, UpdateModel::PatternAndText)?)
        })?;
        for _ in 0..spec.ops {
            let (x, y) = point(rng);
            if rng.gen_bool(0.5) {
                let w = if rng.gen_bool(0.3) { 0 } else { rng.gen_range(1..=max_weight) };
                ignore_full(g.set_weight(x, y, w))?;
            } else {
                let (got, want) = (g.query(x, y)?, oracle::naive_dominance(g.grid(), x, y));
                tally.record(got != 0, want != 0);
                exact &= got == want;
            }
        }
        g.counters()
    } else {
        let mut g = RangeEmptyGadget::new(GridInstance::new(r).map_err(ReductionError::from)?, |p, t| {
            Ok(DynEm::new(p, t, mode, UpdateModel::PatternAndText)?)
        })?;
        for _ in 0..spec.ops {
            let (x, y) = point(rng);
            if rng.gen_bool(0.5) {
                ignore_full(g.set_weight(x, y, rng.gen_range(0..=1)))?;
            } else {
                let got = !g.is_empty(x, y)?;
                tally.record(got, oracle::naive_dominance(g.grid(), x, y) != 0);
            }
        }
        g.counters()
    };
    exact &= tally.fneg == 0 && tally.fpos == 0;
    Ok((tally, counters.updates, counters.queries, exact))
}

// A full grid rejects a new point; the workload just skips that update.
fn ignore_full(res: Result<(), ReductionError>) -> Result<(), ReductionError> {
    match res {
        Err(ReductionError::Instance(dynstr::reductions::InstanceError::TooManyPoints { .. })) => Ok(()),
        other => other,
    }
}

fn run_lift(spec: &GadgetSpec, rng: &mut ChaCha8Rng) -> Result<(Tally, u64, u64, bool), BenchError> {
    let (m, n) = (spec.r, 2 * spec.r);
    let b = Alphabet::binary();
    let mut p: Vec<Symbol> = (0..m).map(|_| rng.gen_range(0..2)).collect();
    let mut t: Vec<Symbol> = (0..n).map(|_| rng.gen_range(0..2)).collect();
    let (ps, ts) = (DynamicString::new(p.clone(), b)?, DynamicString::new(t.clone(), b)?);
    let mode = RebuildMode::Deamortized;
    let model = UpdateModel::PatternAndText;
    let (mut backend, c, width): (Box<dyn IpBackend>, u64, u64) = if spec.gadget == Gadget::LiftHd {
        (Box::new(HdLiftedIp::new(ps, ts, mode, model)?), (m + 1) as u64, 3)
    } else {
        (Box::new(TernaryLiftedIp::new(ps, ts, mode, model)?), 2, 2)
    };
    let mut tally = Tally::default();
    let (mut updates, mut queries, mut exact) = (0, 0, true);
    for _ in 0..spec.ops {
        if rng.gen_bool(0.5) {
            let sym = rng.gen_range(0..2);
            let (target, s) = if rng.gen_bool(0.5) { (Target::Pattern, &mut p) } else { (Target::Text, &mut t) };
            let pos = rng.gen_range(1..=s.len());
            s[pos - 1] = sym;
            backend.update(target, pos, sym)?;
            updates += width;
        } else {
            let i = rng.gen_range(1..=n - m + 1);
            let got = backend.ip_mod(i, c)? as i128;
            let want = oracle::naive_ip(&p, &t, i)? % c as i128;
            tally.record(got != 0, want != 0);
            exact &= got == want;
            queries += 1;
        }
    }
    Ok((tally, updates, queries, exact))
}

/// Runs `spec.seeds` seeded instances of one gadget, checked against the oracle.
pub fn run_gadget(spec: &GadgetSpec) -> Result<Vec<GadgetRow>, BenchError> {
    if spec.r == 0 {
        return Err(invalid("r", "must be at least 1"));
    }
    if spec.repetitions == Some(0) {
        return Err(invalid("repetitions", "must be at least 1"));
    }
    if spec.modulus < 2 {
        return Err(invalid("modulus", "must be at least 2"));
    }
    let mut rows = Vec::new();
    for seed in spec.first_seed..spec.first_seed + spec.seeds {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let start = Instant::now();
        let (tally, repetitions, updates, queries, exact) = match spec.gadget {
            Gadget::RangeCount | Gadget::RangeEmpty => {
                let (t, u, q, e) = run_grid(spec, &mut rng)?;
                (t, 1, u, q, e)
            }
            Gadget::LiftHd | Gadget::LiftTernary => {
                let (t, u, q, e) = run_lift(spec, &mut rng)?;
                (t, 1, u, q, e)
            }
            _ => {
                let (t, reps, u, q) = run_omv(spec, seed, &mut rng)?;
                let exact = t.fneg == 0 && t.fpos == 0;
                (t, reps, u, q, exact)
            }
        };
        let total_ns = start.elapsed().as_nanos() as u64;
        let verdict = if spec.gadget.is_randomised() { tally.fpos == 0 } else { exact };
        rows.push(GadgetRow {
            schema_version: SCHEMA_VERSION,
            gadget: spec.gadget,
            r: spec.r,
            seed,
            repetitions,
            backend_updates: updates,
            backend_queries: queries,
            total_ns,
            true_ones: tally.ones,
            false_negatives: tally.fneg,
            false_positives: tally.fpos,
            exact,
            verdict,
        });
    }
    Ok(rows)
}

/// Writes the schema line, the header and `rows`.
pub fn write_csv<W: Write, T: Serialize>(mut out: W, header: &[&str], rows: &[T]) -> Result<(), BenchError> {
    writeln!(out, "# dynstr-bench schema {SCHEMA_VERSION}")?;
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(header)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub const WORKLOAD_HEADER: [&str; 13] = [
    "schema_version",
    "problem",
    "alphabet",
    "n",
    "m",
    "model",
    "epsilon",
    "op_kind",
    "median_ns",
    "p99_ns",
    "work_units_median",
    "rebuilds",
    "coverage",
];

pub const GADGET_HEADER: [&str; 13] = [
    "schema_version",
    "gadget",
    "r",
    "seed",
    "repetitions",
    "backend_updates",
    "backend_queries",
    "total_ns",
    "true_ones",
    "false_negatives",
    "false_positives",
    "exact",
    "verdict",
];
