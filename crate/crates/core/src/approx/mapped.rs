//! Updates on both sides: one exact binary DynHD per map of the bank, with the
//! normalised average of their answers as the estimate.

use super::{check_lengths, ApproxError, ApproxHd, MappingBank};
use crate::lazy::RebuildMode;
use crate::problems::{DynHd, UpdateModel};
use crate::strings::{Alphabet, DynamicString, Symbol, Target};

#[derive(Debug)]
pub struct MappedExactHd {
    bank: MappingBank,
    pattern: DynamicString,
    text: DynamicString,
    inner: Vec<DynHd>,
    work_last: u64,
}

impl MappedExactHd {
    pub fn build(
        pattern: DynamicString,
        text: DynamicString,
        bank: MappingBank,
        mode: RebuildMode,
    ) -> Result<Self, ApproxError> {
        check_lengths(pattern.len(), text.len())?;
        if pattern.alphabet().has_wildcard() || text.alphabet().has_wildcard() {
            return Err(ApproxError::Wildcard);
        }
        let b = Alphabet::binary();
        let inner = (0..bank.k())
            .map(|j| {
                let p = DynamicString::new(bank.apply(j, pattern.symbols()), b)?;
                let t = DynamicString::new(bank.apply(j, text.symbols()), b)?;
                Ok(DynHd::new(p, t, mode, UpdateModel::PatternAndText)?)
            })
            .collect::<Result<Vec<_>, ApproxError>>()?;
        Ok(MappedExactHd {
            bank,
            pattern,
            text,
            inner,
            work_last: 0,
        })
    }

    pub fn bank(&self) -> &MappingBank {
        &self.bank
    }

    pub fn structures(&self) -> &[DynHd] {
        &self.inner
    }
}

impl ApproxHd for MappedExactHd {
    fn update(&mut self, target: Target, position: usize, symbol: Symbol) -> Result<(), ApproxError> {
        match target {
            Target::Pattern => self.pattern.apply_update(target, position, symbol)?,
            Target::Text => self.text.apply_update(target, position, symbol)?,
        };
        let mut work = 0;
        for (j, s) in self.inner.iter_mut().enumerate() {
            s.update(target, position, self.bank.map(j, symbol))?;
            work += s.work_units_last_op();
        }
        self.work_last = work;
        Ok(())
    }

    fn query(&mut self, i: usize) -> Result<f64, ApproxError> {
        let mut total = 0usize;
        let mut work = 0;
        for s in &mut self.inner {
            total += s.query(i).map_err(|e| match e {
                crate::problems::ProblemError::QueryOutOfRange { i, alignments } => {
                    ApproxError::QueryOutOfRange { i, alignments }
                }
                e => e.into(),
            })?;
            work += s.work_units_last_op();
        }
        self.work_last = work;
        Ok(self.bank.normalization() * total as f64 / self.bank.k() as f64)
    }

    fn pattern(&self) -> &[Symbol] {
        self.pattern.symbols()
    }

    fn text(&self) -> &[Symbol] {
        self.text.symbols()
    }

    fn work_last_op(&self) -> u64 {
        self.work_last
    }
}
