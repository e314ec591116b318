//! Text-only updates: aligned dyadic blocks of the text are sketched at every
//! level, and so is every same-length piece of the pattern. A window splits
//! into O(log m) such blocks; each is estimated by a median over `r`
//! independent families and the estimates are summed.

use super::{check_lengths, hash3, ApproxError, ApproxHd, Embedding, SketchFamily, SketchParams};
use crate::strings::{Alphabet, DynamicString, StringError, Symbol, Target};

#[derive(Debug, Clone)]
struct Level {
    len: usize,
    families: Vec<SketchFamily>,
    // block b, repetition q at [(b * r + q) * d ..]
    text_blocks: Vec<i32>,
    // pattern offset j, repetition q at [(j * r + q) * d ..]
    pattern_pieces: Vec<i32>,
}

#[derive(Debug, Clone)]
pub struct TextCanonicalHd {
    emb: Embedding,
    alphabet: Alphabet,
    pattern: Vec<Symbol>,
    text: Vec<Symbol>,
    r: usize,
    d: usize,
    levels: Vec<Level>,
    work_last: u64,
}

impl TextCanonicalHd {
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
        let r = params.repetitions(m);
        let top = usize::BITS - 1 - m.leading_zeros();
        let (p, t) = (pattern.symbols(), text.symbols());
        let mut levels = Vec::with_capacity(top as usize + 1);
        let mut d = 0;
        for k in 0..=top {
            let len = 1usize << k;
            let families: Vec<SketchFamily> = (0..r)
                .map(|q| SketchFamily::new(params, hash3(seed, k as u64, q as u64)))
                .collect();
            d = families[0].rows();
            let mut text_blocks = Vec::with_capacity(n / len * r * d);
            for b in 0..n / len {
                for f in &families {
                    text_blocks.extend(f.sketch(&emb, &t[b * len..(b + 1) * len]));
                }
            }
            let mut pattern_pieces = Vec::with_capacity((m - len + 1) * r * d);
            for j in 0..=m - len {
                for f in &families {
                    pattern_pieces.extend(f.sketch(&emb, &p[j..j + len]));
                }
            }
            levels.push(Level {
                len,
                families,
                text_blocks,
                pattern_pieces,
            });
        }
        Ok(TextCanonicalHd {
            emb,
            alphabet: text.alphabet(),
            pattern: p.to_vec(),
            text: t.to_vec(),
            r,
            d,
            levels,
            work_last: 0,
        })
    }

    pub fn repetitions(&self) -> usize {
        self.r
    }

    pub fn level_count(&self) -> usize {
        self.levels.len()
    }

    /// Canonical blocks `(level, 0-based start)` covering the window at `i`.
    pub fn decompose(&self, i: usize) -> Vec<(usize, usize)> {
        let m = self.pattern.len();
        let (mut pos, end) = (i - 1, i - 1 + m);
        let mut out = Vec::new();
        while pos < end {
            let mut k = self.levels.len() - 1;
            while pos % self.levels[k].len != 0 || pos + self.levels[k].len > end {
                k -= 1;
            }
            out.push((k, pos));
            pos += self.levels[k].len;
        }
        out
    }

    /// Maintained sketch of text block `b` at `level`, repetition `q`.
    pub fn text_block_sketch(&self, level: usize, b: usize, q: usize) -> &[i32] {
        let at = (b * self.r + q) * self.d;
        &self.levels[level].text_blocks[at..at + self.d]
    }

    pub fn scratch_text_block_sketch(&self, level: usize, b: usize, q: usize) -> Vec<i32> {
        let l = &self.levels[level];
        l.families[q].sketch(&self.emb, &self.text[b * l.len..(b + 1) * l.len])
    }

    pub fn blocks_at(&self, level: usize) -> usize {
        self.text.len() / self.levels[level].len
    }

    fn block_estimate(&self, level: usize, pos: usize, offset: usize) -> f64 {
        let l = &self.levels[level];
        let b = pos / l.len;
        let mut est: Vec<f64> = (0..self.r)
            .map(|q| {
                let tb = (b * self.r + q) * self.d;
                let pp = (offset * self.r + q) * self.d;
                self.emb.scale()
                    * l.families[q].distance(
                        &l.text_blocks[tb..tb + self.d],
                        &l.pattern_pieces[pp..pp + self.d],
                    )
            })
            .collect();
        est.sort_by(|a, b| a.total_cmp(b));
        let h = est.len() / 2;
        if est.len() % 2 == 1 {
            est[h]
        } else {
            (est[h - 1] + est[h]) / 2.0
        }
    }
}

impl ApproxHd for TextCanonicalHd {
    fn update(&mut self, target: Target, position: usize, symbol: Symbol) -> Result<(), ApproxError> {
        if target != Target::Text {
            return Err(ApproxError::WrongModel {
                allowed: Target::Text,
            });
        }
        let len = self.text.len();
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
        let q = position - 1;
        let old = std::mem::replace(&mut self.text[q], symbol);
        let (r, d, n) = (self.r, self.d, self.text.len());
        let mut work = 0;
        for l in &mut self.levels {
            let b = q / l.len;
            if (b + 1) * l.len > n {
                continue;
            }
            for (rep, f) in l.families.iter().enumerate() {
                let at = (b * r + rep) * d;
                work += f.substitute(&self.emb, &mut l.text_blocks[at..at + d], q - b * l.len, old, symbol);
            }
        }
        self.work_last = work as u64;
        Ok(())
    }

    fn query(&mut self, i: usize) -> Result<f64, ApproxError> {
        let alignments = self.text.len() - self.pattern.len() + 1;
        if i == 0 || i > alignments {
            return Err(ApproxError::QueryOutOfRange { i, alignments });
        }
        let blocks = self.decompose(i);
        let total = blocks
            .iter()
            .map(|&(k, pos)| self.block_estimate(k, pos, pos - (i - 1)))
            .sum();
        self.work_last = (blocks.len() * self.r * self.d) as u64;
        Ok(total)
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
