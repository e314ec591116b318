//! Pattern-only updates: every text window is sketched once up front and the
//! pattern sketch is patched in place.

use super::{check_lengths, ApproxError, ApproxHd, Embedding, SketchFamily, SketchParams};
use crate::strings::{Alphabet, DynamicString, StringError, Symbol, Target};

#[derive(Debug, Clone)]
pub struct PatternSketchHd {
    family: SketchFamily,
    emb: Embedding,
    alphabet: Alphabet,
    pattern: Vec<Symbol>,
    text: Vec<Symbol>,
    p_sketch: Vec<i32>,
    // window i occupies [i*d, (i+1)*d)
    windows: Vec<i32>,
    work_last: u64,
}

impl PatternSketchHd {
    pub fn build(
        pattern: &DynamicString,
        text: &DynamicString,
        params: &SketchParams,
        seed: u64,
    ) -> Result<Self, ApproxError> {
        let emb = Embedding::for_alphabet(pattern.alphabet(), params, seed)?;
        Self::with_embedding(pattern, text, params, seed, emb)
    }

    pub fn with_embedding(
        pattern: &DynamicString,
        text: &DynamicString,
        params: &SketchParams,
        seed: u64,
        emb: Embedding,
    ) -> Result<Self, ApproxError> {
        let (m, n) = (pattern.len(), text.len());
        check_lengths(m, n)?;
        if pattern.alphabet().has_wildcard() || text.alphabet().has_wildcard() {
            return Err(ApproxError::Wildcard);
        }
        let family = SketchFamily::new(params, seed);
        let d = family.rows();
        let t = text.symbols();
        let mut windows = Vec::with_capacity((n - m + 1) * d);
        for i in 0..=n - m {
            windows.extend(family.sketch(&emb, &t[i..i + m]));
        }
        Ok(PatternSketchHd {
            p_sketch: family.sketch(&emb, pattern.symbols()),
            family,
            emb,
            alphabet: pattern.alphabet(),
            pattern: pattern.symbols().to_vec(),
            text: t.to_vec(),
            windows,
            work_last: 0,
        })
    }

    pub fn embedding(&self) -> &Embedding {
        &self.emb
    }

    pub fn family(&self) -> &SketchFamily {
        &self.family
    }

    /// The incrementally maintained pattern sketch.
    pub fn pattern_sketch(&self) -> &[i32] {
        &self.p_sketch
    }

    /// The pattern sketch recomputed from the live pattern.
    pub fn scratch_pattern_sketch(&self) -> Vec<i32> {
        self.family.sketch(&self.emb, &self.pattern)
    }

    fn window(&self, i: usize) -> &[i32] {
        let d = self.family.rows();
        &self.windows[i * d..(i + 1) * d]
    }
}

impl ApproxHd for PatternSketchHd {
    fn update(&mut self, target: Target, position: usize, symbol: Symbol) -> Result<(), ApproxError> {
        if target != Target::Pattern {
            return Err(ApproxError::WrongModel {
                allowed: Target::Pattern,
            });
        }
        let len = self.pattern.len();
        if position == 0 || position > len {
            return Err(StringError::PositionOutOfRange { position, len }.into());
        }
        if !self.alphabet.contains(symbol) {
            return Err(StringError::InvalidSymbol {
                symbol,
                alphabet: self.alphabet,
            }
            .into());
        }
        let k = position - 1;
        let old = std::mem::replace(&mut self.pattern[k], symbol);
        self.work_last = self
            .family
            .substitute(&self.emb, &mut self.p_sketch, k, old, symbol) as u64;
        Ok(())
    }

    fn query(&mut self, i: usize) -> Result<f64, ApproxError> {
        let alignments = self.text.len() - self.pattern.len() + 1;
        if i == 0 || i > alignments {
            return Err(ApproxError::QueryOutOfRange { i, alignments });
        }
        self.work_last = self.family.rows() as u64;
        Ok(self.emb.scale() * self.family.distance(&self.p_sketch, self.window(i - 1)))
    }

    fn pattern(&self) -> &[Symbol] {
        &self.pattern
    }

    fn text(&self) -> &[Symbol] {
        &self.text
    }

    fn work_last_op(&self) -> u64 {
        self.work_last
    }
}
