//! (1+ε)-approximate Hamming distance.
//!
//! Strings are embedded position by position into 0/1 vectors whose squared
//! distance is a fixed multiple of the Hamming distance, then compressed by a
//! sparse sign matrix with `s` non-zeros per column. Polynomial alphabets are
//! first folded to bits by a bank of random maps.

mod mapped;
mod pattern;
mod text;

use thiserror::Error;

pub use mapped::MappedExactHd;
pub use pattern::PatternSketchHd;
pub use text::TextCanonicalHd;

use crate::problems::ProblemError;
use crate::strings::{Alphabet, AlphabetKind, StringError, Symbol, Target};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ApproxError {
    #[error(transparent)]
    String(#[from] StringError),
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error("this structure only accepts {allowed:?} updates")]
    WrongModel { allowed: Target },
    #[error("alignment {i} out of range 1..={alignments}")]
    QueryOutOfRange { i: usize, alignments: usize },
    #[error("epsilon must lie in (0, 1), got {epsilon}")]
    BadEpsilon { epsilon: f64 },
    #[error("pattern length {m} must be between 1 and the text length {n}")]
    BadLengths { m: usize, n: usize },
    #[error("wildcard alphabets are not supported")]
    Wildcard,
}

/// Constants behind the Θ(·) sizes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SketchParams {
    pub epsilon: f64,
    /// Maps in a bank: `ceil(c_map / ε²)`.
    pub c_map: f64,
    /// Sketch rows: `ceil(c_d / ε²)`, rounded up to a multiple of `s`.
    pub c_d: f64,
    /// Non-zeros per column: `ceil(c_s / ε)`.
    pub c_s: f64,
    /// Repetitions per canonical block: `ceil(c_r · log2 log2 m)`.
    pub c_r: f64,
}

impl SketchParams {
    pub fn new(epsilon: f64) -> Result<Self, ApproxError> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(ApproxError::BadEpsilon { epsilon });
        }
        Ok(SketchParams {
            epsilon,
            c_map: 4.0,
            c_d: 8.0,
            c_s: 2.0,
            c_r: 3.0,
        })
    }

    pub fn sparsity(&self) -> usize {
        (self.c_s / self.epsilon).ceil().max(1.0) as usize
    }

    pub fn rows(&self) -> usize {
        let s = self.sparsity();
        let d = (self.c_d / (self.epsilon * self.epsilon)).ceil() as usize;
        d.div_ceil(s).max(1) * s
    }

    pub fn bank_size(&self) -> usize {
        (self.c_map / (self.epsilon * self.epsilon)).ceil().max(1.0) as usize
    }

    pub fn repetitions(&self, m: usize) -> usize {
        let ll = (m.max(4) as f64).log2().log2();
        (self.c_r * ll).ceil().max(1.0) as usize
    }
}

/// Error bound of a bank composed with a sketch at the same ε.
pub fn composed_epsilon(epsilon: f64) -> f64 {
    2.0 * epsilon + epsilon * epsilon
}

/// SplitMix64 finaliser, used as a stateless keyed hash.
#[inline]
pub(crate) fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[inline]
pub(crate) fn hash3(seed: u64, a: u64, b: u64) -> u64 {
    mix(mix(mix(seed) ^ a) ^ b.wrapping_mul(0xD6E8_FEB8_6659_FD93))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Maps {
    Random { seed: u64 },
    /// `map(a) = a`, for binary input.
    Identity,
}

/// `k` maps from the alphabet to `{0, 1}` whose normalised average Hamming
/// distance estimates the original distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MappingBank {
    maps: Maps,
    k: usize,
    normalization: f64,
}

impl MappingBank {
    /// Independent uniform maps; a fixed unequal pair is separated by each
    /// with probability 1/2, hence the factor 2.
    pub fn random(k: usize, seed: u64) -> Self {
        MappingBank {
            maps: Maps::Random { seed },
            k: k.max(1),
            normalization: 2.0,
        }
    }

    pub fn for_params(params: &SketchParams, seed: u64) -> Self {
        Self::random(params.bank_size(), seed)
    }

    /// One map, the identity on `{0, 1}`.
    pub fn identity() -> Self {
        MappingBank {
            maps: Maps::Identity,
            k: 1,
            normalization: 1.0,
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    #[inline]
    pub fn map(&self, j: usize, a: Symbol) -> Symbol {
        match self.maps {
            Maps::Random { seed } => (hash3(seed, j as u64, a as u64) & 1) as Symbol,
            Maps::Identity => a & 1,
        }
    }

    pub fn apply(&self, j: usize, s: &[Symbol]) -> Vec<Symbol> {
        s.iter().map(|&a| self.map(j, a)).collect()
    }

    /// Normalised average over the bank of the mapped Hamming distances.
    pub fn estimate(&self, x: &[Symbol], y: &[Symbol]) -> f64 {
        let total: usize = (0..self.k)
            .map(|j| {
                x.iter()
                    .zip(y)
                    .filter(|&(&a, &b)| self.map(j, a) != self.map(j, b))
                    .count()
            })
            .sum();
        self.normalization * total as f64 / self.k as f64
    }
}

/// How one symbol becomes a 0/1 block of `width` coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Embedding {
    /// The bit itself.
    Binary,
    /// One-hot over `sigma` letters; a mismatch costs 2.
    Unary { sigma: u32 },
    /// The bank's `k` bits.
    Mapped(MappingBank),
}

impl Embedding {
    /// Default embedding for an alphabet; polynomial alphabets get a bank.
    pub fn for_alphabet(a: Alphabet, params: &SketchParams, seed: u64) -> Result<Self, ApproxError> {
        if a.has_wildcard() {
            return Err(ApproxError::Wildcard);
        }
        Ok(match a.kind() {
            AlphabetKind::Binary => Embedding::Binary,
            _ if a.is_constant_tier() => Embedding::Unary { sigma: a.size() },
            _ => Embedding::Mapped(MappingBank::for_params(params, seed ^ 0x6B61_726C)),
        })
    }

    pub fn width(&self) -> usize {
        match self {
            Embedding::Binary => 1,
            Embedding::Unary { sigma } => *sigma as usize,
            Embedding::Mapped(bank) => bank.k(),
        }
    }

    /// Converts a squared embedded distance to a Hamming distance estimate.
    pub fn scale(&self) -> f64 {
        match self {
            Embedding::Binary => 1.0,
            Embedding::Unary { .. } => 0.5,
            Embedding::Mapped(bank) => bank.normalization() / bank.k() as f64,
        }
    }

    /// Calls `f(offset)` for every set coordinate of `a`'s block.
    #[inline]
    pub(crate) fn for_each_one(&self, a: Symbol, mut f: impl FnMut(usize)) {
        match self {
            Embedding::Binary => {
                if a == 1 {
                    f(0)
                }
            }
            Embedding::Unary { .. } => f(a as usize),
            Embedding::Mapped(bank) => {
                for j in 0..bank.k() {
                    if bank.map(j, a) == 1 {
                        f(j)
                    }
                }
            }
        }
    }
}

/// A sparse sign matrix with `d` rows split into `s` equal blocks; every
/// column has one `±1` per block, at a hashed row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SketchFamily {
    seed: u64,
    d: usize,
    s: usize,
}

impl SketchFamily {
    pub fn new(params: &SketchParams, seed: u64) -> Self {
        SketchFamily {
            seed,
            d: params.rows(),
            s: params.sparsity(),
        }
    }

    pub fn rows(&self) -> usize {
        self.d
    }

    pub fn sparsity(&self) -> usize {
        self.s
    }

    /// Adds `delta` times column `col` into `v`.
    #[inline]
    pub fn add_column(&self, v: &mut [i32], col: usize, delta: i32) {
        let per = self.d / self.s;
        for b in 0..self.s {
            let h = hash3(self.seed, col as u64, b as u64);
            let row = b * per + (h % per as u64) as usize;
            let sign = if h >> 63 == 1 { delta } else { -delta };
            v[row] += sign;
        }
    }

    /// Sketch of `x` embedded with `emb`, columns starting at position 0.
    pub fn sketch(&self, emb: &Embedding, x: &[Symbol]) -> Vec<i32> {
        let mut v = vec![0; self.d];
        let w = emb.width();
        for (k, &a) in x.iter().enumerate() {
            emb.for_each_one(a, |o| self.add_column(&mut v, k * w + o, 1));
        }
        v
    }

    /// Replaces the symbol at position `k` inside an existing sketch; returns
    /// matrix entries touched.
    pub fn substitute(&self, emb: &Embedding, v: &mut [i32], k: usize, old: Symbol, new: Symbol) -> usize {
        if old == new {
            return 0;
        }
        let w = emb.width();
        let mut touched = 0;
        emb.for_each_one(old, |o| {
            self.add_column(v, k * w + o, -1);
            touched += self.s;
        });
        emb.for_each_one(new, |o| {
            self.add_column(v, k * w + o, 1);
            touched += self.s;
        });
        touched
    }

    /// `‖a − b‖² / s`.
    pub fn distance(&self, a: &[i32], b: &[i32]) -> f64 {
        let sq: i64 = a
            .iter()
            .zip(b)
            .map(|(&x, &y)| {
                let d = (x - y) as i64;
                d * d
            })
            .sum();
        sq as f64 / self.s as f64
    }
}

/// Common interface of the approximate structures.
pub trait ApproxHd {
    fn update(&mut self, target: Target, position: usize, symbol: Symbol) -> Result<(), ApproxError>;
    fn query(&mut self, i: usize) -> Result<f64, ApproxError>;
    fn pattern(&self) -> &[Symbol];
    fn text(&self) -> &[Symbol];
    /// Matrix entries or sub-structure operations used by the last call.
    fn work_last_op(&self) -> u64;
}

pub(crate) fn check_lengths(m: usize, n: usize) -> Result<(), ApproxError> {
    if m == 0 || m > n {
        return Err(ApproxError::BadLengths { m, n });
    }
    Ok(())
}
