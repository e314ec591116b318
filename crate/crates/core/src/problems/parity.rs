//! Hamming distance modulo 2 on binary strings: the parity of `P` plus the
//! parity of the window, read off a prefix-parity tree over the text.

use super::ProblemError;
use crate::strings::{AlphabetKind, DynamicString, Symbol, Target};

/// Prefix parities over a bit string. Each node is one word whose bits are
/// the parities of its 64 children, so a point flip or a prefix read visits
/// one node per level.
#[derive(Debug, Clone)]
struct ParityTree {
    len: usize,
    levels: Vec<Vec<u64>>,
}

impl ParityTree {
    fn new(bits: &[bool]) -> Self {
        let mut levels = Vec::new();
        let mut cur: Vec<bool> = bits.to_vec();
        loop {
            let words: Vec<u64> = cur
                .chunks(64)
                .map(|c| {
                    c.iter()
                        .enumerate()
                        .fold(0u64, |w, (k, &b)| w | ((b as u64) << k))
                })
                .collect();
            let next: Vec<bool> = words.iter().map(|w| w.count_ones() % 2 == 1).collect();
            let done = words.len() <= 1;
            levels.push(words);
            if done {
                break;
            }
            cur = next;
        }
        ParityTree {
            len: bits.len(),
            levels,
        }
    }

    fn depth(&self) -> usize {
        self.levels.len()
    }

    fn bit(&self, q: usize) -> bool {
        self.levels[0][q / 64] >> (q % 64) & 1 == 1
    }

    /// Flips bit `q`; returns nodes touched.
    fn flip(&mut self, q: usize) -> usize {
        let mut idx = q;
        for level in &mut self.levels {
            level[idx / 64] ^= 1 << (idx % 64);
            idx /= 64;
        }
        self.levels.len()
    }

    /// Parity of bits `0..i`; returns `(parity, nodes touched)`.
    fn prefix(&self, i: usize) -> (bool, usize) {
        debug_assert!(i <= self.len);
        let mut parity = false;
        let mut idx = i;
        let mut touched = 0;
        for level in &self.levels {
            let (word, off) = (idx / 64, idx % 64);
            if off > 0 {
                parity ^= (level[word] & ((1u64 << off) - 1)).count_ones() % 2 == 1;
                touched += 1;
            }
            idx = word;
            if idx == 0 {
                break;
            }
        }
        (parity, touched)
    }
}

/// Binary Hamming distance modulo 2 under pattern and text flips.
#[derive(Debug, Clone)]
pub struct ParityStructure {
    pattern: Vec<bool>,
    pattern_parity: bool,
    text: ParityTree,
    touched_last: usize,
    max_touched: usize,
}

impl ParityStructure {
    pub fn new(pattern: &DynamicString, text: &DynamicString) -> Result<Self, ProblemError> {
        let binary = |s: &DynamicString| {
            s.alphabet().kind() == AlphabetKind::Binary && !s.alphabet().has_wildcard()
        };
        if !binary(pattern) || !binary(text) {
            return Err(ProblemError::NonBinary);
        }
        if pattern.len() > text.len() {
            return Err(ProblemError::BadLengths {
                m: pattern.len(),
                n: text.len(),
            });
        }
        let pattern: Vec<bool> = pattern.symbols().iter().map(|&s| s == 1).collect();
        let bits: Vec<bool> = text.symbols().iter().map(|&s| s == 1).collect();
        Ok(ParityStructure {
            pattern_parity: pattern.iter().filter(|&&b| b).count() % 2 == 1,
            pattern,
            text: ParityTree::new(&bits),
            touched_last: 0,
            max_touched: 0,
        })
    }

    pub fn pattern_len(&self) -> usize {
        self.pattern.len()
    }

    pub fn text_len(&self) -> usize {
        self.text.len
    }

    /// Levels of the prefix tree.
    pub fn depth(&self) -> usize {
        self.text.depth()
    }

    /// Tree nodes visited by the last operation.
    pub fn nodes_touched_last(&self) -> usize {
        self.touched_last
    }

    pub fn max_nodes_touched(&self) -> usize {
        self.max_touched
    }

    fn record(&mut self, touched: usize) {
        self.touched_last = touched;
        self.max_touched = self.max_touched.max(touched);
    }

    /// Sets 1-based `position` of the pattern or text to `symbol`.
    pub fn update(
        &mut self,
        target: Target,
        position: usize,
        symbol: Symbol,
    ) -> Result<(), ProblemError> {
        let len = match target {
            Target::Pattern => self.pattern.len(),
            Target::Text => self.text.len,
        };
        if position == 0 || position > len {
            return Err(crate::strings::StringError::PositionOutOfRange { position, len }.into());
        }
        if symbol > 1 {
            return Err(ProblemError::NonBinary);
        }
        let bit = symbol == 1;
        let q = position - 1;
        let touched = match target {
            Target::Pattern => {
                if self.pattern[q] != bit {
                    self.pattern[q] = bit;
                    self.pattern_parity ^= true;
                }
                0
            }
            Target::Text => {
                if self.text.bit(q) != bit {
                    self.text.flip(q)
                } else {
                    1
                }
            }
        };
        self.record(touched);
        Ok(())
    }

    /// Hamming distance modulo 2 at 1-based alignment `i`.
    pub fn query(&mut self, i: usize) -> Result<u8, ProblemError> {
        let m = self.pattern.len();
        let alignments = self.text.len - m + 1;
        if i == 0 || i > alignments {
            return Err(ProblemError::QueryOutOfRange { i, alignments });
        }
        let (hi, t1) = self.text.prefix(i - 1 + m);
        let (lo, t2) = self.text.prefix(i - 1);
        self.record(t1 + t2);
        Ok((self.pattern_parity ^ hi ^ lo) as u8)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use crate::strings::Alphabet;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn hand_case() {
        let b = Alphabet::binary();
        let p = DynamicString::from_digits("11", b).unwrap();
        let t = DynamicString::from_digits("0110", b).unwrap();
        let mut s = ParityStructure::new(&p, &t).unwrap();
        assert_eq!(s.query(2).unwrap(), 0);
        assert_eq!(s.query(1).unwrap(), 1);
        let tern = DynamicString::from_digits("12", Alphabet::ternary()).unwrap();
        assert!(matches!(
            ParityStructure::new(&tern, &tern),
            Err(ProblemError::NonBinary)
        ));
    }

    #[test]
    fn tree_prefixes() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let bits: Vec<bool> = (0..5000).map(|_| rng.gen()).collect();
        let mut tree = ParityTree::new(&bits);
        let mut bits = bits;
        for _ in 0..200 {
            let q = rng.gen_range(0..bits.len());
            bits[q] ^= true;
            tree.flip(q);
            let i = rng.gen_range(0..=bits.len());
            let want = bits[..i].iter().filter(|&&b| b).count() % 2 == 1;
            assert_eq!(tree.prefix(i).0, want);
        }
        assert_eq!(tree.prefix(bits.len()).0, bits.iter().filter(|&&b| b).count() % 2 == 1);
    }

    #[test]
    fn random_flips_and_queries() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let b = Alphabet::binary();
        let n = 10_000;
        let m = 777;
        let mut p = DynamicString::new((0..m).map(|_| rng.gen_range(0..2)).collect(), b).unwrap();
        let mut t = DynamicString::new((0..n).map(|_| rng.gen_range(0..2)).collect(), b).unwrap();
        let mut s = ParityStructure::new(&p, &t).unwrap();
        let bound = (n as f64).log2().ceil() as usize + 2;
        for _ in 0..1000 {
            let sym = rng.gen_range(0..2);
            if rng.gen_bool(0.5) {
                let pos = rng.gen_range(1..=m);
                p.apply_update(Target::Pattern, pos, sym).unwrap();
                s.update(Target::Pattern, pos, sym).unwrap();
            } else {
                let pos = rng.gen_range(1..=n);
                t.apply_update(Target::Text, pos, sym).unwrap();
                s.update(Target::Text, pos, sym).unwrap();
            }
            assert!(s.nodes_touched_last() <= bound);
            let i = rng.gen_range(1..=n - m + 1);
            let want = oracle::naive_hd(p.symbols(), t.symbols(), i).unwrap() % 2;
            assert_eq!(s.query(i).unwrap() as usize, want);
            assert!(s.nodes_touched_last() <= bound);
        }
    }
}
