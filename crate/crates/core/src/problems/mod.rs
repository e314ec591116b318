//! DynHD, DynIP and DynEM for texts of any length.
//!
//! The text is cut into blocks of length `2m` starting every `m` positions, so
//! each window lies inside the block chosen by its start. A text update lands
//! in at most two blocks; a pattern update reaches every block.

mod parity;

use std::ops::{Deref, DerefMut};

use thiserror::Error;

pub use parity::ParityStructure;

use crate::conv::SolverKind;
use crate::lazy::{LazyError, LazyStructure, LocalFunction, RebuildMode};
use crate::strings::{DynamicString, StringError, Symbol, Target, Update};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProblemError {
    #[error(transparent)]
    Lazy(#[from] LazyError),
    #[error(transparent)]
    String(#[from] StringError),
    #[error("pattern updates are not allowed in the text-only model")]
    PatternUpdateRejected,
    #[error("alignment {i} out of range 1..={alignments}")]
    QueryOutOfRange { i: usize, alignments: usize },
    #[error("modulus must be at least 2, got {c}")]
    BadModulus { c: u64 },
    #[error("the parity structure needs binary strings")]
    NonBinary,
    #[error("pattern length {m} must be between 1 and the text length {n}")]
    BadLengths { m: usize, n: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UpdateModel {
    TextOnly,
    PatternAndText,
}

/// Number of blocks for a text of length `n` and pattern of length `m`.
pub fn block_count(n: usize, m: usize) -> usize {
    (n.div_ceil(m)).saturating_sub(1).max(1)
}

/// One lazy structure per overlapping text block.
#[derive(Debug)]
pub struct BlockedStructure {
    model: UpdateModel,
    pattern: DynamicString,
    text: DynamicString,
    blocks: Vec<LazyStructure>,
    starts: Vec<usize>,
    blocks_touched_last: usize,
    work_units_last_op: u64,
    max_update_work: u64,
    initial_build_work: u64,
}

impl BlockedStructure {
    pub fn build(
        pattern: DynamicString,
        text: DynamicString,
        lf: LocalFunction,
        mode: RebuildMode,
        model: UpdateModel,
    ) -> Result<Self, ProblemError> {
        let kind = LazyStructure::default_kind(&pattern, &text, lf)?;
        Self::build_with_kind(pattern, text, lf, mode, model, kind)
    }

    pub fn build_with_kind(
        pattern: DynamicString,
        text: DynamicString,
        lf: LocalFunction,
        mode: RebuildMode,
        model: UpdateModel,
        kind: SolverKind,
    ) -> Result<Self, ProblemError> {
        let (n, m) = (text.len(), pattern.len());
        if m == 0 || m > n {
            return Err(ProblemError::BadLengths { m, n });
        }
        let count = block_count(n, m);
        let mut blocks = Vec::with_capacity(count);
        let mut starts = Vec::with_capacity(count);
        for b in 0..count {
            let start = b * m;
            let end = if b + 1 == count { n } else { start + 2 * m };
            let slice = DynamicString::new(text.symbols()[start..end].to_vec(), text.alphabet())?;
            blocks.push(LazyStructure::build_with_kind(
                pattern.clone(),
                slice,
                lf,
                mode,
                kind,
            )?);
            starts.push(start);
        }
        let initial_build_work = blocks.iter().map(|b| b.counters().initial_build_work).sum();
        Ok(BlockedStructure {
            model,
            pattern,
            text,
            blocks,
            starts,
            blocks_touched_last: 0,
            work_units_last_op: 0,
            max_update_work: 0,
            initial_build_work,
        })
    }

    pub fn pattern(&self) -> &DynamicString {
        &self.pattern
    }

    pub fn text(&self) -> &DynamicString {
        &self.text
    }

    pub fn model(&self) -> UpdateModel {
        self.model
    }

    pub fn blocks(&self) -> &[LazyStructure] {
        &self.blocks
    }

    /// `[start, end)` of every block, 0-based.
    pub fn block_ranges(&self) -> Vec<(usize, usize)> {
        self.starts
            .iter()
            .zip(&self.blocks)
            .map(|(&s, b)| (s, s + b.text().len()))
            .collect()
    }

    pub fn alignments(&self) -> usize {
        self.text.len() - self.pattern.len() + 1
    }

    /// Owning block of 1-based alignment `i`.
    pub fn block_of(&self, i: usize) -> usize {
        ((i - 1) / self.pattern.len()).min(self.blocks.len() - 1)
    }

    pub fn blocks_touched_last(&self) -> usize {
        self.blocks_touched_last
    }

    pub fn work_units_last_op(&self) -> u64 {
        self.work_units_last_op
    }

    pub fn max_update_work(&self) -> u64 {
        self.max_update_work
    }

    /// Cost of the tables computed before the first operation.
    pub fn initial_build_work(&self) -> u64 {
        self.initial_build_work
    }

    pub fn rebuilds_total(&self) -> u64 {
        self.blocks.iter().map(|b| b.counters().rebuilds_total).sum()
    }

    pub fn monolithic_rebuilds(&self) -> u64 {
        self.blocks.iter().map(|b| b.counters().monolithic_rebuilds).sum()
    }

    pub fn update(
        &mut self,
        target: Target,
        position: usize,
        symbol: Symbol,
    ) -> Result<Update, ProblemError> {
        let mut work = 0;
        let mut touched = 0;
        let applied = match target {
            Target::Pattern => {
                if self.model == UpdateModel::TextOnly {
                    return Err(ProblemError::PatternUpdateRejected);
                }
                let u = self.pattern.apply_update(target, position, symbol)?;
                for b in &mut self.blocks {
                    b.update(target, position, symbol)?;
                    work += b.counters().work_units_last_op;
                    touched += 1;
                }
                u
            }
            Target::Text => {
                let u = self.text.apply_update(target, position, symbol)?;
                let q = position - 1;
                let first = (q / self.pattern.len()).saturating_sub(1);
                for b in first..self.blocks.len() {
                    let start = self.starts[b];
                    if start > q {
                        break;
                    }
                    if q < start + self.blocks[b].text().len() {
                        self.blocks[b].update(target, q - start + 1, symbol)?;
                        work += self.blocks[b].counters().work_units_last_op;
                        touched += 1;
                    }
                }
                u
            }
        };
        self.blocks_touched_last = touched;
        self.work_units_last_op = work;
        self.max_update_work = self.max_update_work.max(work);
        Ok(applied)
    }

    /// Exact `f` at 1-based alignment `i`, in the owning block's solver space.
    pub fn query_value(&mut self, i: usize) -> Result<i128, ProblemError> {
        let alignments = self.alignments();
        if i == 0 || i > alignments {
            return Err(ProblemError::QueryOutOfRange { i, alignments });
        }
        let b = self.block_of(i);
        let v = self.blocks[b].patch_query(i - self.starts[b])?;
        self.work_units_last_op = self.blocks[b].counters().work_units_last_op;
        Ok(v)
    }

    /// The exact answer reduced modulo `c`.
    pub fn mod_query(&mut self, i: usize, c: u64) -> Result<u64, ProblemError> {
        if c < 2 {
            return Err(ProblemError::BadModulus { c });
        }
        Ok(self.query_value(i)?.rem_euclid(c as i128) as u64)
    }
}

macro_rules! problem {
    ($(#[$doc:meta])* $name:ident) => {
        $(#[$doc])*
        #[derive(Debug)]
        pub struct $name(BlockedStructure);

        impl Deref for $name {
            type Target = BlockedStructure;
            fn deref(&self) -> &BlockedStructure {
                &self.0
            }
        }

        impl DerefMut for $name {
            fn deref_mut(&mut self) -> &mut BlockedStructure {
                &mut self.0
            }
        }

        impl $name {
            pub fn into_inner(self) -> BlockedStructure {
                self.0
            }
        }
    };
}

problem!(
    /// Hamming distance.
    DynHd
);
problem!(
    /// Inner product.
    DynIp
);
problem!(
    /// Exact matching with wildcards (symbol `0`).
    DynEm
);

impl DynHd {
    pub fn new(
        pattern: DynamicString,
        text: DynamicString,
        mode: RebuildMode,
        model: UpdateModel,
    ) -> Result<Self, ProblemError> {
        BlockedStructure::build(pattern, text, LocalFunction::Hd, mode, model).map(DynHd)
    }

    /// Uses the heavy/light solver whatever the alphabet size.
    pub fn with_large_alphabet_solver(
        pattern: DynamicString,
        text: DynamicString,
        mode: RebuildMode,
        model: UpdateModel,
    ) -> Result<Self, ProblemError> {
        BlockedStructure::build_with_kind(
            pattern,
            text,
            LocalFunction::Hd,
            mode,
            model,
            SolverKind::HdLarge,
        )
        .map(DynHd)
    }

    pub fn query(&mut self, i: usize) -> Result<usize, ProblemError> {
        Ok(self.0.query_value(i)? as usize)
    }
}

impl DynIp {
    pub fn new(
        pattern: DynamicString,
        text: DynamicString,
        mode: RebuildMode,
        model: UpdateModel,
    ) -> Result<Self, ProblemError> {
        BlockedStructure::build(pattern, text, LocalFunction::Ip, mode, model).map(DynIp)
    }

    pub fn query(&mut self, i: usize) -> Result<i128, ProblemError> {
        self.0.query_value(i)
    }
}

impl DynEm {
    pub fn new(
        pattern: DynamicString,
        text: DynamicString,
        mode: RebuildMode,
        model: UpdateModel,
    ) -> Result<Self, ProblemError> {
        BlockedStructure::build(pattern, text, LocalFunction::EmWeighted, mode, model).map(DynEm)
    }

    /// Whether the pattern matches the window at `i` under wildcard rules.
    pub fn matches(&mut self, i: usize) -> Result<bool, ProblemError> {
        Ok(self.0.query_value(i)? == 0)
    }
}
