//! Exact batch solvers: the value of `f(P, T[i..i+m-1])` at every alignment in
//! one pass, via number-theoretic convolution with CRT reconstruction.
//!
//! Every solver is expressed as a resumable [`BatchJob`]. Running a job with
//! an unbounded budget is the monolithic solve; the lazy engine instead feeds
//! it a fixed budget per update.

mod engine;
mod large;
mod ntt;

use std::sync::Arc;

use thiserror::Error;

pub use engine::{ConvolutionEngine, MAX_CAPACITY};

use crate::strings::{DynamicString, Symbol};
use engine::{Channel, CorrelationJob, SymbolMap};
use large::LargeHdJob;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConvError {
    #[error("coefficient bound {bound} exceeds modulus capacity {capacity}")]
    CoefficientBound { bound: u128, capacity: u128 },
    #[error("transform size {size} exceeds the two-adicity of every configured prime")]
    TransformTooLarge { size: usize },
    #[error("alphabet of size {size} is too large for the per-letter solver")]
    AlphabetTooLarge { size: u32 },
    #[error("this solver does not accept wildcards")]
    WildcardUnsupported,
    #[error("this solver requires a wildcard-enabled alphabet")]
    WildcardRequired,
    #[error("pattern length {m} must be between 1 and the text length {n}")]
    BadLengths { m: usize, n: usize },
}

/// Identifies the string versions a table was computed from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SnapshotId {
    pub pattern_version: u64,
    pub text_version: u64,
}

/// `values[i]` (0-based) is `f(P, T[i+1..i+m])` for the snapshot `produced_for`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlignmentTable {
    pub values: Vec<i128>,
    pub produced_for: SnapshotId,
}

impl AlignmentTable {
    /// 1-based lookup.
    pub fn get(&self, i: usize) -> Option<i128> {
        i.checked_sub(1).and_then(|i| self.values.get(i)).copied()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Which batch algorithm a solver runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverKind {
    /// One indicator correlation per letter `0..sigma`.
    HdSmall { sigma: u32 },
    /// Heavy letters by correlation, light letters by occurrence lists.
    HdLarge,
    InnerProduct { max_symbol: Symbol },
    /// Weighted wildcard score `sum p t (p - t)^2`.
    WildcardScore { max_symbol: Symbol },
}

/// A batch solver configured for fixed lengths, with its engine and work
/// declaration.
#[derive(Debug, Clone)]
pub struct BatchSolver {
    kind: SolverKind,
    n: usize,
    m: usize,
    engine: Arc<ConvolutionEngine>,
    declared: u64,
}

fn ceil_log2(x: usize) -> u64 {
    (x.max(2) as u64).next_power_of_two().trailing_zeros() as u64
}

/// Occurrence threshold at or above which a pattern letter is heavy.
pub fn heavy_threshold(n: usize) -> usize {
    ((n as f64) * ceil_log2(n) as f64).sqrt().ceil() as usize
}

impl BatchSolver {
    pub fn new(kind: SolverKind, n: usize, m: usize) -> Result<Self, ConvError> {
        if m == 0 || m > n {
            return Err(ConvError::BadLengths { m, n });
        }
        let mu = m as u128;
        let bound = match kind {
            SolverKind::HdSmall { sigma } => {
                if sigma > 64 {
                    return Err(ConvError::AlphabetTooLarge { size: sigma });
                }
                mu
            }
            SolverKind::HdLarge => mu,
            SolverKind::InnerProduct { max_symbol } => {
                let s = max_symbol as u128;
                mu.saturating_mul(s * s)
            }
            SolverKind::WildcardScore { max_symbol } => {
                let s = max_symbol as u128;
                mu.saturating_mul(s * s).saturating_mul(s * s)
            }
        };
        let engine = Arc::new(ConvolutionEngine::new(n, bound)?);
        let outputs = (n - m + 1) as u64;
        let declared = match kind {
            SolverKind::HdLarge => LargeHdJob::declared(&engine, n, m),
            _ => {
                let channels = Self::channels(kind).len();
                CorrelationJob::cost(engine.size(), channels, engine.prime_count(), n, m)
                    + outputs
            }
        };
        Ok(BatchSolver {
            kind,
            n,
            m,
            engine,
            declared,
        })
    }

    fn channels(kind: SolverKind) -> Vec<Channel> {
        match kind {
            SolverKind::HdSmall { sigma } => (0..sigma).map(Channel::matching).collect(),
            SolverKind::HdLarge => Vec::new(),
            SolverKind::InnerProduct { .. } => vec![Channel {
                text: SymbolMap::Power(1),
                pattern: SymbolMap::Power(1),
                weight: 1,
            }],
            // sum p^3 t - 2 p^2 t^2 + p t^3
            SolverKind::WildcardScore { .. } => vec![
                Channel {
                    text: SymbolMap::Power(1),
                    pattern: SymbolMap::Power(3),
                    weight: 1,
                },
                Channel {
                    text: SymbolMap::Power(2),
                    pattern: SymbolMap::Power(2),
                    weight: -2,
                },
                Channel {
                    text: SymbolMap::Power(3),
                    pattern: SymbolMap::Power(1),
                    weight: 1,
                },
            ],
        }
    }

    pub fn kind(&self) -> SolverKind {
        self.kind
    }

    pub fn text_len(&self) -> usize {
        self.n
    }

    pub fn pattern_len(&self) -> usize {
        self.m
    }

    pub fn engine(&self) -> &ConvolutionEngine {
        &self.engine
    }

    /// Upper bound on the work units of one full solve, independent of content.
    pub fn declared_work(&self) -> u64 {
        self.declared
    }

    pub fn start(&self) -> BatchJob {
        let inner = match self.kind {
            SolverKind::HdLarge => JobInner::Large(Box::new(LargeHdJob::new(
                self.engine.clone(),
                self.n,
                self.m,
            ))),
            kind => JobInner::Correlation {
                job: CorrelationJob::new(self.engine.clone(), Self::channels(kind), self.n, self.m),
                finish: matches!(kind, SolverKind::HdSmall { .. }),
                next: 0,
                values: Vec::new(),
            },
        };
        BatchJob {
            inner,
            m: self.m,
            outputs: self.n - self.m + 1,
            spent: 0,
        }
    }

    /// Monolithic solve over raw symbol slices.
    pub fn solve(&self, pattern: &[Symbol], text: &[Symbol]) -> Vec<i128> {
        let mut job = self.start();
        job.advance(pattern, text, u64::MAX);
        job.into_values()
    }
}

#[derive(Debug)]
enum JobInner {
    Correlation {
        job: CorrelationJob,
        // convert match counts to distances
        finish: bool,
        next: usize,
        values: Vec<i128>,
    },
    Large(Box<LargeHdJob>),
}

/// A batch solve in progress.
#[derive(Debug)]
pub struct BatchJob {
    inner: JobInner,
    m: usize,
    outputs: usize,
    spent: u64,
}

impl BatchJob {
    /// Runs at most `budget` work units against the given snapshot and returns
    /// the units spent. The snapshot must not change between calls.
    pub fn advance(&mut self, pattern: &[Symbol], text: &[Symbol], budget: u64) -> u64 {
        let used = match &mut self.inner {
            JobInner::Large(job) => job.advance(pattern, text, budget),
            JobInner::Correlation {
                job,
                finish,
                next,
                values,
            } => {
                let mut left = budget;
                if !job.is_done() {
                    left -= job.advance(pattern, text, left);
                }
                if job.is_done() && left > 0 && *next < self.outputs {
                    if values.is_empty() {
                        *values = job.take_result();
                    }
                    let end = (*next as u64 + left).min(self.outputs as u64) as usize;
                    if *finish {
                        let m = self.m as i128;
                        for v in &mut values[*next..end] {
                            *v = m - *v;
                        }
                    }
                    left -= (end - *next) as u64;
                    *next = end;
                }
                budget - left
            }
        };
        self.spent += used;
        used
    }

    pub fn is_done(&self) -> bool {
        match &self.inner {
            JobInner::Large(job) => job.is_done(),
            JobInner::Correlation { next, .. } => *next >= self.outputs,
        }
    }

    /// Units consumed so far.
    pub fn spent(&self) -> u64 {
        self.spent
    }

    pub fn into_values(self) -> Vec<i128> {
        assert!(self.is_done(), "batch job consumed before completion");
        match self.inner {
            JobInner::Large(job) => job.into_values(),
            JobInner::Correlation { values, .. } => values,
        }
    }
}

fn check_lengths(p: &DynamicString, t: &DynamicString) -> Result<(), ConvError> {
    if p.len() > t.len() {
        return Err(ConvError::BadLengths {
            m: p.len(),
            n: t.len(),
        });
    }
    Ok(())
}

fn table(values: Vec<i128>, p: &DynamicString, t: &DynamicString) -> AlignmentTable {
    AlignmentTable {
        values,
        produced_for: SnapshotId {
            pattern_version: p.version(),
            text_version: t.version(),
        },
    }
}

/// Exact `out[i] = sum_j b[j] * a[i + j]` for `i in 0..=a.len() - b.len()`.
pub fn cross_correlate(a: &[u64], b: &[u64]) -> Result<Vec<u128>, ConvError> {
    if b.is_empty() || b.len() > a.len() {
        return Err(ConvError::BadLengths {
            m: b.len(),
            n: a.len(),
        });
    }
    let max_a = *a.iter().max().unwrap_or(&0) as u128;
    let max_b = *b.iter().max().unwrap_or(&0) as u128;
    let bound = max_a
        .saturating_mul(max_b)
        .saturating_mul(b.len() as u128);
    let engine = ConvolutionEngine::new(a.len(), bound)?;
    let size = engine.size();
    let outputs = a.len() - b.len() + 1;
    let mut residues = Vec::with_capacity(engine.prime_count());
    for q in 0..engine.prime_count() {
        let tables = engine.tables(q);
        let p = tables.modulus;
        let mut fa = vec![0u64; size];
        let mut fb = vec![0u64; size];
        for (k, &x) in a.iter().enumerate() {
            fa[k] = x % p;
        }
        for (k, &x) in b.iter().rev().enumerate() {
            fb[k] = x % p;
        }
        tables.transform(&mut fa, false);
        tables.transform(&mut fb, false);
        for k in 0..size {
            fa[k] = fa[k] * fb[k] % p;
        }
        tables.transform(&mut fa, true);
        residues.push(fa[b.len() - 1..b.len() - 1 + outputs].to_vec());
    }
    Ok((0..outputs)
        .map(|i| engine.reconstruct(|q| residues[q][i]))
        .collect())
}

/// Hamming distance at every alignment, one correlation per letter.
pub fn batch_hd_small_alphabet(
    pattern: &DynamicString,
    text: &DynamicString,
) -> Result<AlignmentTable, ConvError> {
    check_lengths(pattern, text)?;
    let a = text.alphabet();
    if a.has_wildcard() {
        return Err(ConvError::WildcardUnsupported);
    }
    if !a.is_constant_tier() {
        return Err(ConvError::AlphabetTooLarge { size: a.size() });
    }
    let solver = BatchSolver::new(
        SolverKind::HdSmall { sigma: a.size() },
        text.len(),
        pattern.len(),
    )?;
    Ok(table(
        solver.solve(pattern.symbols(), text.symbols()),
        pattern,
        text,
    ))
}

/// Hamming distance at every alignment for arbitrary integer alphabets.
pub fn batch_hd_large_alphabet(
    pattern: &DynamicString,
    text: &DynamicString,
) -> Result<AlignmentTable, ConvError> {
    check_lengths(pattern, text)?;
    if text.alphabet().has_wildcard() {
        return Err(ConvError::WildcardUnsupported);
    }
    let solver = BatchSolver::new(SolverKind::HdLarge, text.len(), pattern.len())?;
    Ok(table(
        solver.solve(pattern.symbols(), text.symbols()),
        pattern,
        text,
    ))
}

pub fn batch_ip(
    pattern: &DynamicString,
    text: &DynamicString,
) -> Result<AlignmentTable, ConvError> {
    check_lengths(pattern, text)?;
    if text.alphabet().has_wildcard() {
        return Err(ConvError::WildcardUnsupported);
    }
    let max_symbol = text.alphabet().max_symbol().max(pattern.alphabet().max_symbol());
    let solver = BatchSolver::new(
        SolverKind::InnerProduct { max_symbol },
        text.len(),
        pattern.len(),
    )?;
    Ok(table(
        solver.solve(pattern.symbols(), text.symbols()),
        pattern,
        text,
    ))
}

/// Weighted wildcard score `sum p t (p - t)^2`; zero exactly at matches.
pub fn batch_em(
    pattern: &DynamicString,
    text: &DynamicString,
) -> Result<AlignmentTable, ConvError> {
    check_lengths(pattern, text)?;
    if !text.alphabet().has_wildcard() || !pattern.alphabet().has_wildcard() {
        return Err(ConvError::WildcardRequired);
    }
    let max_symbol = text.alphabet().max_symbol().max(pattern.alphabet().max_symbol());
    let solver = BatchSolver::new(
        SolverKind::WildcardScore { max_symbol },
        text.len(),
        pattern.len(),
    )?;
    Ok(table(
        solver.solve(pattern.symbols(), text.symbols()),
        pattern,
        text,
    ))
}
