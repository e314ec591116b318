//! A stale alignment table kept correct by patching it with the updates made
//! since it was computed, rebuilt every `~sqrt(work)` updates.
//!
//! In amortized mode the rebuild runs in full on the update that fills the
//! log. In de-amortized mode a rebuild starts once `h = ceil(sqrt(work)/2)`
//! updates are logged and advances by a fixed budget on each of the next `h`
//! updates, while queries keep using the previous table plus the whole log.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::conv::{AlignmentTable, BatchJob, BatchSolver, ConvError, SnapshotId, SolverKind, MAX_CAPACITY};
use crate::strings::{DynamicString, StringError, Symbol, Target, Update, UpdateLog};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LazyError {
    #[error(transparent)]
    String(#[from] StringError),
    #[error(transparent)]
    Conv(#[from] ConvError),
    #[error("pattern alphabet {pattern} and text alphabet {text} are incompatible with {function:?}")]
    AlphabetMismatch {
        pattern: crate::strings::Alphabet,
        text: crate::strings::Alphabet,
        function: LocalFunction,
    },
    #[error("solver {kind:?} cannot evaluate {function:?}")]
    SolverMismatch {
        kind: SolverKind,
        function: LocalFunction,
    },
    #[error("alignment {i} out of range 1..={alignments}")]
    QueryOutOfRange { i: usize, alignments: usize },
}

/// The pairwise score `g` with `f(P, T_i) = sum_j g(P[j], T[i+j-1])`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LocalFunction {
    Hd,
    Ip,
    /// `a b (a - b)^2`: zero iff either side is the wildcard or `a == b`.
    EmWeighted,
}

impl LocalFunction {
    #[inline]
    pub fn eval(self, a: Symbol, b: Symbol) -> i128 {
        match self {
            LocalFunction::Hd => (a != b) as i128,
            LocalFunction::Ip => a as i128 * b as i128,
            LocalFunction::EmWeighted => {
                let (a, b) = (a as i128, b as i128);
                a * b * (a - b) * (a - b)
            }
        }
    }

    fn accepts(self, kind: SolverKind) -> bool {
        matches!(
            (self, kind),
            (LocalFunction::Hd, SolverKind::HdSmall { .. })
                | (LocalFunction::Hd, SolverKind::HdLarge)
                | (LocalFunction::Ip, SolverKind::InnerProduct { .. })
                | (LocalFunction::EmWeighted, SolverKind::WildcardScore { .. })
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RebuildMode {
    Amortized,
    Deamortized,
}

/// Work and rebuild counters. Work units are the solver's abstract units
/// plus one per symbol copied, log entry replayed or cell patched.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Counters {
    pub rebuilds_total: u64,
    /// Rebuilds that ran to completion inside a single operation.
    pub monolithic_rebuilds: u64,
    pub work_units_last_op: u64,
    pub max_update_work: u64,
    pub max_query_work: u64,
    pub initial_build_work: u64,
    pub updates: u64,
    pub queries: u64,
}

/// Append-only dictionary from symbols to small codes; the wildcard keeps
/// code 0. Used when raw symbols would overflow the wildcard solver.
#[derive(Debug, Clone)]
struct SymbolCodec {
    codes: HashMap<Symbol, Symbol>,
    next: Symbol,
    limit: Symbol,
}

impl SymbolCodec {
    fn new(limit: Symbol) -> Self {
        SymbolCodec {
            codes: HashMap::new(),
            next: 1,
            limit,
        }
    }

    fn encode(&mut self, s: Symbol) -> Option<Symbol> {
        if s == 0 {
            return Some(0);
        }
        if let Some(&c) = self.codes.get(&s) {
            return Some(c);
        }
        if self.next > self.limit {
            return None;
        }
        let c = self.next;
        self.codes.insert(s, c);
        self.next += 1;
        Some(c)
    }

    fn encode_all(&mut self, s: &[Symbol]) -> Option<Vec<Symbol>> {
        s.iter().map(|&x| self.encode(x)).collect()
    }
}

/// Largest code `c` with `m * c^4` below the reconstruction capacity.
fn codec_limit(m: usize) -> Symbol {
    let cap = MAX_CAPACITY / m as u128;
    let mut c = (cap as f64).powf(0.25) as u128 + 2;
    while c > 0 && (c * c).saturating_mul(c * c) >= cap {
        c -= 1;
    }
    c.min(Symbol::MAX as u128) as Symbol
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Phase {
    Copy { next: usize },
    Replay { next: usize },
    Solve,
}

#[derive(Debug)]
struct PendingRebuild {
    phase: Phase,
    new_p: Vec<Symbol>,
    new_t: Vec<Symbol>,
    /// Log entries folded into this rebuild.
    k: usize,
    job: BatchJob,
    produced_for: SnapshotId,
}

/// The dynamic wrapper around one batch solver.
#[derive(Debug)]
pub struct LazyStructure {
    lf: LocalFunction,
    mode: RebuildMode,
    solver: BatchSolver,
    pattern: DynamicString,
    text: DynamicString,
    codec: Option<SymbolCodec>,
    // Solver-space copies of the live strings (codes when a codec is active).
    live_p: Vec<Symbol>,
    live_t: Vec<Symbol>,
    snap_p: Vec<Symbol>,
    snap_t: Vec<Symbol>,
    table: AlignmentTable,
    log: UpdateLog,
    touched_p: BTreeSet<usize>,
    touched_t: BTreeSet<usize>,
    pending: Option<PendingRebuild>,
    batch_work: u64,
    start_at: usize,
    budget: u64,
    counters: Counters,
}

fn ceil_sqrt(x: u64) -> u64 {
    let mut r = (x as f64).sqrt() as u64;
    while r * r < x {
        r += 1;
    }
    while r > 0 && (r - 1) * (r - 1) >= x {
        r -= 1;
    }
    r
}

impl LazyStructure {
    /// Picks the solver from the local function and alphabet.
    pub fn build(
        pattern: DynamicString,
        text: DynamicString,
        lf: LocalFunction,
        mode: RebuildMode,
    ) -> Result<Self, LazyError> {
        let kind = Self::default_kind(&pattern, &text, lf)?;
        Self::build_with_kind(pattern, text, lf, mode, kind)
    }

    pub fn default_kind(
        pattern: &DynamicString,
        text: &DynamicString,
        lf: LocalFunction,
    ) -> Result<SolverKind, LazyError> {
        let (pa, ta) = (pattern.alphabet(), text.alphabet());
        let mismatch = || LazyError::AlphabetMismatch {
            pattern: pa,
            text: ta,
            function: lf,
        };
        let max_symbol = pa.max_symbol().max(ta.max_symbol());
        match lf {
            LocalFunction::Hd => {
                if pa != ta || pa.has_wildcard() {
                    return Err(mismatch());
                }
                Ok(if pa.is_constant_tier() {
                    SolverKind::HdSmall { sigma: pa.size() }
                } else {
                    SolverKind::HdLarge
                })
            }
            LocalFunction::Ip => {
                if pa.has_wildcard() || ta.has_wildcard() {
                    return Err(mismatch());
                }
                Ok(SolverKind::InnerProduct { max_symbol })
            }
            LocalFunction::EmWeighted => {
                if !pa.has_wildcard() || !ta.has_wildcard() {
                    return Err(mismatch());
                }
                Ok(SolverKind::WildcardScore { max_symbol })
            }
        }
    }

    pub fn build_with_kind(
        pattern: DynamicString,
        text: DynamicString,
        lf: LocalFunction,
        mode: RebuildMode,
        kind: SolverKind,
    ) -> Result<Self, LazyError> {
        Self::build_inner(pattern, text, lf, mode, kind, None)
    }

    fn build_inner(
        pattern: DynamicString,
        text: DynamicString,
        lf: LocalFunction,
        mode: RebuildMode,
        kind: SolverKind,
        codec_override: Option<Symbol>,
    ) -> Result<Self, LazyError> {
        if !lf.accepts(kind) {
            return Err(LazyError::SolverMismatch { kind, function: lf });
        }
        if let SolverKind::HdSmall { sigma } = kind {
            let top = pattern.alphabet().max_symbol().max(text.alphabet().max_symbol());
            if top >= sigma {
                return Err(ConvError::AlphabetTooLarge { size: top + 1 }.into());
            }
        }
        let (n, m) = (text.len(), pattern.len());
        let (solver, codec) = match (kind, codec_override) {
            (SolverKind::WildcardScore { .. }, Some(limit)) => (
                BatchSolver::new(SolverKind::WildcardScore { max_symbol: limit }, n, m)?,
                Some(SymbolCodec::new(limit)),
            ),
            (SolverKind::WildcardScore { .. }, None) => match BatchSolver::new(kind, n, m) {
                Ok(s) => (s, None),
                Err(ConvError::CoefficientBound { .. }) => {
                    let limit = codec_limit(m);
                    (
                        BatchSolver::new(SolverKind::WildcardScore { max_symbol: limit }, n, m)?,
                        Some(SymbolCodec::new(limit)),
                    )
                }
                Err(e) => return Err(e.into()),
            },
            _ => (BatchSolver::new(kind, n, m)?, None),
        };
        if let Some(c) = &codec {
            // compaction must always fit every live symbol
            if (c.limit as usize) < n + m {
                return Err(ConvError::CoefficientBound {
                    bound: (n + m) as u128,
                    capacity: c.limit as u128,
                }
                .into());
            }
        }
        let batch_work = solver.declared_work();
        let root = ceil_sqrt(batch_work).max(1);
        let (capacity, start_at) = match mode {
            RebuildMode::Amortized => (root as usize, usize::MAX),
            RebuildMode::Deamortized => {
                let h = root.div_ceil(2).max(1) as usize;
                (2 * h, h)
            }
        };
        let budget = if mode == RebuildMode::Deamortized {
            let h = start_at as u64;
            // solve + copy + replay + the touched-set refresh at the swap
            let job = batch_work + (n + m) as u64 + 2 * h;
            job.div_ceil(h)
        } else {
            0
        };
        let mut s = LazyStructure {
            lf,
            mode,
            solver,
            live_p: Vec::new(),
            live_t: Vec::new(),
            snap_p: Vec::new(),
            snap_t: Vec::new(),
            table: AlignmentTable {
                values: Vec::new(),
                produced_for: SnapshotId::default(),
            },
            pattern,
            text,
            codec,
            log: UpdateLog::new(capacity),
            touched_p: BTreeSet::new(),
            touched_t: BTreeSet::new(),
            pending: None,
            batch_work,
            start_at,
            budget,
            counters: Counters::default(),
        };
        let work = s.rebuild_monolithic();
        s.counters.initial_build_work = work;
        s.counters.rebuilds_total = 0;
        s.counters.monolithic_rebuilds = 0;
        Ok(s)
    }

    /// Recomputes everything from the live strings in one go.
    fn rebuild_monolithic(&mut self) -> u64 {
        let mut work = (self.pattern.len() + self.text.len()) as u64;
        if let Some(codec) = &mut self.codec {
            let mut fresh = SymbolCodec::new(codec.limit);
            // distinct symbols never exceed n + m, which is far below the limit
            self.live_p = fresh.encode_all(self.pattern.symbols()).expect("codec room");
            self.live_t = fresh.encode_all(self.text.symbols()).expect("codec room");
            *codec = fresh;
            work += (self.pattern.len() + self.text.len()) as u64;
        } else {
            self.live_p = self.pattern.symbols().to_vec();
            self.live_t = self.text.symbols().to_vec();
        }
        self.snap_p = self.live_p.clone();
        self.snap_t = self.live_t.clone();
        let mut job = self.solver.start();
        work += job.advance(&self.snap_p, &self.snap_t, u64::MAX);
        self.table = AlignmentTable {
            values: job.into_values(),
            produced_for: self.versions(),
        };
        self.log.clear();
        self.touched_p.clear();
        self.touched_t.clear();
        self.pending = None;
        self.counters.rebuilds_total += 1;
        self.counters.monolithic_rebuilds += 1;
        work
    }

    fn versions(&self) -> SnapshotId {
        SnapshotId {
            pattern_version: self.pattern.version(),
            text_version: self.text.version(),
        }
    }

    pub fn pattern(&self) -> &DynamicString {
        &self.pattern
    }

    pub fn text(&self) -> &DynamicString {
        &self.text
    }

    pub fn local_function(&self) -> LocalFunction {
        self.lf
    }

    pub fn mode(&self) -> RebuildMode {
        self.mode
    }

    pub fn solver_kind(&self) -> SolverKind {
        self.solver.kind()
    }

    /// Declared work units of one batch solve.
    pub fn batch_work(&self) -> u64 {
        self.batch_work
    }

    pub fn log_capacity(&self) -> usize {
        self.log.capacity()
    }

    pub fn log_len(&self) -> usize {
        self.log.len()
    }

    pub fn counters(&self) -> Counters {
        self.counters
    }

    /// True when symbols are stored as dictionary codes, which makes the
    /// wildcard score meaningful only through its zero set.
    pub fn uses_codec(&self) -> bool {
        self.codec.is_some()
    }

    pub fn alignments(&self) -> usize {
        self.text.len() - self.pattern.len() + 1
    }

    /// The table as last rebuilt.
    pub fn table(&self) -> &AlignmentTable {
        &self.table
    }

    /// Substitutes one symbol of the pattern or text.
    pub fn update(
        &mut self,
        target: Target,
        position: usize,
        symbol: Symbol,
    ) -> Result<Update, LazyError> {
        let applied = match target {
            Target::Pattern => self.pattern.apply_update(target, position, symbol)?,
            Target::Text => self.text.apply_update(target, position, symbol)?,
        };
        let mut work = 1;
        let code = match &mut self.codec {
            None => Some(symbol),
            Some(codec) => codec.encode(symbol),
        };
        let Some(code) = code else {
            // dictionary exhausted: compact and start over
            work += self.rebuild_monolithic();
            return Ok(self.finish_update(applied, work));
        };
        let idx = position - 1;
        let live = match target {
            Target::Pattern => &mut self.live_p,
            Target::Text => &mut self.live_t,
        };
        let old = std::mem::replace(&mut live[idx], code);
        if self.log.is_full() {
            work += self.rebuild_monolithic();
            return Ok(self.finish_update(applied, work));
        }
        self.log
            .push(Update {
                target,
                position,
                new_symbol: code,
                old_symbol: old,
            })
            .expect("log has room");
        match target {
            Target::Pattern => self.touched_p.insert(idx),
            Target::Text => self.touched_t.insert(idx),
        };
        match self.mode {
            RebuildMode::Amortized => {
                if self.log.is_full() {
                    work += self.rebuild_monolithic();
                }
            }
            RebuildMode::Deamortized => {
                if self.pending.is_none() && self.log.len() >= self.start_at {
                    self.pending = Some(PendingRebuild {
                        phase: Phase::Copy { next: 0 },
                        new_p: Vec::with_capacity(self.snap_p.len()),
                        new_t: Vec::with_capacity(self.snap_t.len()),
                        k: self.log.len(),
                        job: self.solver.start(),
                        produced_for: self.versions(),
                    });
                }
                if self.pending.is_some() {
                    work += self.advance_pending(self.budget);
                }
            }
        }
        Ok(self.finish_update(applied, work))
    }

    fn finish_update(&mut self, applied: Update, work: u64) -> Update {
        self.counters.updates += 1;
        self.counters.work_units_last_op = work;
        self.counters.max_update_work = self.counters.max_update_work.max(work);
        applied
    }

    fn advance_pending(&mut self, budget: u64) -> u64 {
        let mut p = self.pending.take().expect("pending rebuild");
        let (m, n) = (self.snap_p.len(), self.snap_t.len());
        let mut left = budget;
        while left > 0 {
            match p.phase {
                Phase::Copy { next } => {
                    let end = (next as u64 + left).min((m + n) as u64) as usize;
                    if next < m {
                        p.new_p.extend_from_slice(&self.snap_p[next..end.min(m)]);
                    }
                    if end > m {
                        p.new_t.extend_from_slice(&self.snap_t[next.max(m) - m..end - m]);
                    }
                    left -= (end - next) as u64;
                    p.phase = if end == m + n {
                        Phase::Replay { next: 0 }
                    } else {
                        Phase::Copy { next: end }
                    };
                }
                Phase::Replay { next } => {
                    let end = (next as u64 + left).min(p.k as u64) as usize;
                    for u in &self.log.entries()[next..end] {
                        match u.target {
                            Target::Pattern => p.new_p[u.position - 1] = u.new_symbol,
                            Target::Text => p.new_t[u.position - 1] = u.new_symbol,
                        }
                    }
                    left -= (end - next) as u64;
                    p.phase = if end == p.k {
                        Phase::Solve
                    } else {
                        Phase::Replay { next: end }
                    };
                }
                Phase::Solve => {
                    left -= p.job.advance(&p.new_p, &p.new_t, left);
                    if p.job.is_done() {
                        return budget - left + self.swap_in(p);
                    }
                }
            }
        }
        self.pending = Some(p);
        budget
    }

    /// Installs a finished rebuild; returns the units spent refreshing the
    /// touched sets.
    fn swap_in(&mut self, p: PendingRebuild) -> u64 {
        self.snap_p = p.new_p;
        self.snap_t = p.new_t;
        self.table = AlignmentTable {
            values: p.job.into_values(),
            produced_for: p.produced_for,
        };
        self.log.drain_front(p.k);
        self.touched_p.clear();
        self.touched_t.clear();
        for u in self.log.entries() {
            match u.target {
                Target::Pattern => self.touched_p.insert(u.position - 1),
                Target::Text => self.touched_t.insert(u.position - 1),
            };
        }
        self.counters.rebuilds_total += 1;
        self.log.len() as u64
    }

    /// `f(P, T[i..i+m-1])` on the live strings (1-based `i`), in solver space.
    pub fn patch_query(&mut self, i: usize) -> Result<i128, LazyError> {
        let (value, work) = self.patch_query_ro(i)?;
        self.counters.queries += 1;
        self.counters.work_units_last_op = work;
        self.counters.max_query_work = self.counters.max_query_work.max(work);
        Ok(value)
    }

    /// Same as [`patch_query`](Self::patch_query) without touching counters.
    pub fn peek(&self, i: usize) -> Result<i128, LazyError> {
        self.patch_query_ro(i).map(|(v, _)| v)
    }

    fn patch_query_ro(&self, i: usize) -> Result<(i128, u64), LazyError> {
        let alignments = self.alignments();
        if i == 0 || i > alignments {
            return Err(LazyError::QueryOutOfRange { i, alignments });
        }
        let a = i - 1;
        let m = self.live_p.len();
        let mut cells: Vec<usize> = self.touched_p.iter().copied().collect();
        cells.extend(self.touched_t.range(a..a + m).map(|&t| t - a));
        cells.sort_unstable();
        cells.dedup();
        let mut value = self.table.values[a];
        for &j in &cells {
            value += self.lf.eval(self.live_p[j], self.live_t[a + j])
                - self.lf.eval(self.snap_p[j], self.snap_t[a + j]);
        }
        Ok((value, 1 + cells.len() as u64))
    }
}
