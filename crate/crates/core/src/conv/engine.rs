use std::sync::Arc;

use super::ntt::{inv_mod, mul_mod, NttCursor, NttTables, PRIMES};
use super::ConvError;
use crate::strings::Symbol;

/// Largest value CRT reconstruction may produce; keeps results in `i128`.
pub const MAX_CAPACITY: u128 = 1 << 127;

/// A set of NTT primes sized so that every coefficient below `capacity`
/// reconstructs exactly.
#[derive(Debug)]
pub struct ConvolutionEngine {
    size: usize,
    tables: Vec<NttTables>,
    capacity: u128,
    // Garner constants: prefix products and their inverses modulo the next prime.
    prefix: Vec<u128>,
    prefix_inv: Vec<u64>,
}

impl ConvolutionEngine {
    /// Engine for transforms of `size` (rounded up to a power of two) whose
    /// outputs never exceed `bound`.
    pub fn new(size: usize, bound: u128) -> Result<Self, ConvError> {
        let size = size.max(1).next_power_of_two();
        let log = size.trailing_zeros();
        let mut chosen = Vec::new();
        let mut product: u128 = 1;
        for &(p, _) in PRIMES.iter().filter(|&&(_, a)| a >= log) {
            if product > bound {
                break;
            }
            chosen.push(p);
            product = product.saturating_mul(p as u128);
        }
        if chosen.is_empty() {
            return Err(ConvError::TransformTooLarge { size });
        }
        let capacity = product.min(MAX_CAPACITY);
        if bound >= capacity {
            return Err(ConvError::CoefficientBound { bound, capacity });
        }
        let mut prefix = Vec::with_capacity(chosen.len());
        let mut prefix_inv = Vec::with_capacity(chosen.len());
        let mut acc: u128 = 1;
        for &p in &chosen {
            prefix.push(acc);
            prefix_inv.push(inv_mod((acc % p as u128) as u64, p));
            acc = acc.saturating_mul(p as u128);
        }
        Ok(ConvolutionEngine {
            size,
            tables: chosen.iter().map(|&p| NttTables::new(p, size)).collect(),
            capacity,
            prefix,
            prefix_inv,
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn capacity(&self) -> u128 {
        self.capacity
    }

    pub fn moduli(&self) -> Vec<u64> {
        self.tables.iter().map(|t| t.modulus).collect()
    }

    pub(crate) fn prime_count(&self) -> usize {
        self.tables.len()
    }

    pub(crate) fn tables(&self, idx: usize) -> &NttTables {
        &self.tables[idx]
    }

    /// Reconstructs a value from its residues (Garner's mixed radix form).
    pub(crate) fn reconstruct(&self, residues: impl Fn(usize) -> u64) -> u128 {
        let mut x: u128 = residues(0) as u128;
        for i in 1..self.tables.len() {
            let p = self.tables[i].modulus;
            let cur = (x % p as u128) as u64;
            let r = residues(i);
            let diff = if r >= cur { r - cur } else { r + p - cur };
            let t = mul_mod(diff, self.prefix_inv[i], p);
            x += t as u128 * self.prefix[i];
        }
        x
    }
}

/// How a symbol is lifted into the field before correlation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum SymbolMap {
    Indicator(Symbol),
    Power(u32),
}

impl SymbolMap {
    #[inline]
    fn eval(self, s: Symbol, p: u64) -> u64 {
        match self {
            SymbolMap::Indicator(a) => (s == a) as u64,
            SymbolMap::Power(e) => {
                let b = s as u64 % p;
                let mut acc = 1;
                for _ in 0..e {
                    acc = mul_mod(acc, b, p);
                }
                acc
            }
        }
    }
}

/// One term `weight * correlate(text_map(T), pattern_map(P))` of a sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Channel {
    pub(crate) text: SymbolMap,
    pub(crate) pattern: SymbolMap,
    pub(crate) weight: i64,
}

impl Channel {
    pub(crate) fn matching(a: Symbol) -> Self {
        Channel {
            text: SymbolMap::Indicator(a),
            pattern: SymbolMap::Indicator(a),
            weight: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Stage {
    FillText { next: usize },
    NttText(NttCursor),
    FillPattern { next: usize },
    NttPattern(NttCursor),
    MulAcc { next: usize },
    Inverse(NttCursor),
    Extract { next: usize },
    Crt { next: usize },
    Done,
}

/// Computes `sum_c weight_c * sum_j pmap_c(P[j]) * tmap_c(T[i+j])` for every
/// alignment `i`, one bounded slice of work at a time.
#[derive(Debug)]
pub(crate) struct CorrelationJob {
    engine: Arc<ConvolutionEngine>,
    channels: Vec<Channel>,
    n: usize,
    m: usize,
    prime: usize,
    channel: usize,
    stage: Stage,
    buf_text: Vec<u64>,
    buf_pattern: Vec<u64>,
    acc: Vec<u64>,
    residues: Vec<Vec<u64>>,
    result: Vec<i128>,
}

impl CorrelationJob {
    pub(crate) fn new(
        engine: Arc<ConvolutionEngine>,
        channels: Vec<Channel>,
        n: usize,
        m: usize,
    ) -> Self {
        debug_assert!(engine.size() >= n && m <= n && m >= 1);
        let stage = if channels.is_empty() {
            Stage::Done
        } else {
            Stage::FillText { next: 0 }
        };
        let outputs = n - m + 1;
        CorrelationJob {
            result: if channels.is_empty() {
                vec![0; outputs]
            } else {
                Vec::new()
            },
            engine,
            channels,
            n,
            m,
            prime: 0,
            channel: 0,
            stage,
            buf_text: Vec::new(),
            buf_pattern: Vec::new(),
            acc: Vec::new(),
            residues: Vec::new(),
        }
    }

    /// Exact work units the job will consume.
    pub(crate) fn cost(size: usize, channels: usize, primes: usize, n: usize, m: usize) -> u64 {
        if channels == 0 {
            return 0;
        }
        let size_u = size as u64;
        let outputs = (n - m + 1) as u64;
        let per_channel = 3 * size_u + 2 * NttTables::cost(size, false);
        let per_prime =
            channels as u64 * per_channel + NttTables::cost(size, true) + outputs;
        primes as u64 * per_prime + outputs
    }

    pub(crate) fn is_done(&self) -> bool {
        self.stage == Stage::Done
    }

    pub(crate) fn take_result(&mut self) -> Vec<i128> {
        debug_assert!(self.is_done());
        std::mem::take(&mut self.result)
    }

    pub(crate) fn advance(&mut self, pattern: &[Symbol], text: &[Symbol], budget: u64) -> u64 {
        let size = self.engine.size();
        let outputs = self.n - self.m + 1;
        let mut left = budget;
        while left > 0 && self.stage != Stage::Done {
            let tables = self.engine.tables(self.prime);
            let p = tables.modulus;
            let ch = self.channels[self.channel.min(self.channels.len() - 1)];
            match self.stage {
                Stage::FillText { next } => {
                    if next == 0 {
                        self.buf_text.resize(size, 0);
                    }
                    let end = (next as u64 + left).min(size as u64) as usize;
                    for k in next..end {
                        self.buf_text[k] = if k < self.n { ch.text.eval(text[k], p) } else { 0 };
                    }
                    left -= (end - next) as u64;
                    self.stage = if end == size {
                        Stage::NttText(NttCursor::start())
                    } else {
                        Stage::FillText { next: end }
                    };
                }
                Stage::NttText(mut cur) => {
                    left -= tables.advance(&mut self.buf_text, &mut cur, false, left);
                    self.stage = if cur == NttCursor::Done {
                        Stage::FillPattern { next: 0 }
                    } else {
                        Stage::NttText(cur)
                    };
                }
                Stage::FillPattern { next } => {
                    if next == 0 {
                        self.buf_pattern.resize(size, 0);
                    }
                    let end = (next as u64 + left).min(size as u64) as usize;
                    for k in next..end {
                        self.buf_pattern[k] = if k < self.m {
                            ch.pattern.eval(pattern[self.m - 1 - k], p)
                        } else {
                            0
                        };
                    }
                    left -= (end - next) as u64;
                    self.stage = if end == size {
                        Stage::NttPattern(NttCursor::start())
                    } else {
                        Stage::FillPattern { next: end }
                    };
                }
                Stage::NttPattern(mut cur) => {
                    left -= tables.advance(&mut self.buf_pattern, &mut cur, false, left);
                    self.stage = if cur == NttCursor::Done {
                        Stage::MulAcc { next: 0 }
                    } else {
                        Stage::NttPattern(cur)
                    };
                }
                Stage::MulAcc { next } => {
                    let first = self.channel == 0;
                    if first && next == 0 {
                        self.acc.resize(size, 0);
                    }
                    let w = ch.weight.rem_euclid(p as i64) as u64;
                    let end = (next as u64 + left).min(size as u64) as usize;
                    for k in next..end {
                        let term = mul_mod(mul_mod(self.buf_text[k], self.buf_pattern[k], p), w, p);
                        self.acc[k] = if first { term } else { (self.acc[k] + term) % p };
                    }
                    left -= (end - next) as u64;
                    self.stage = if end < size {
                        Stage::MulAcc { next: end }
                    } else if self.channel + 1 < self.channels.len() {
                        self.channel += 1;
                        Stage::FillText { next: 0 }
                    } else {
                        Stage::Inverse(NttCursor::start())
                    };
                }
                Stage::Inverse(mut cur) => {
                    left -= tables.advance(&mut self.acc, &mut cur, true, left);
                    self.stage = if cur == NttCursor::Done {
                        self.residues.push(Vec::with_capacity(outputs));
                        Stage::Extract { next: 0 }
                    } else {
                        Stage::Inverse(cur)
                    };
                }
                Stage::Extract { next } => {
                    let end = (next as u64 + left).min(outputs as u64) as usize;
                    let res = self.residues.last_mut().expect("residue row");
                    res.extend_from_slice(&self.acc[next + self.m - 1..end + self.m - 1]);
                    left -= (end - next) as u64;
                    self.stage = if end < outputs {
                        Stage::Extract { next: end }
                    } else if self.prime + 1 < self.engine.prime_count() {
                        self.prime += 1;
                        self.channel = 0;
                        Stage::FillText { next: 0 }
                    } else {
                        self.buf_text = Vec::new();
                        self.buf_pattern = Vec::new();
                        self.acc = Vec::new();
                        self.result.reserve(outputs);
                        Stage::Crt { next: 0 }
                    };
                }
                Stage::Crt { next } => {
                    let end = (next as u64 + left).min(outputs as u64) as usize;
                    for i in next..end {
                        let v = self.engine.reconstruct(|q| self.residues[q][i]);
                        self.result.push(v as i128);
                    }
                    left -= (end - next) as u64;
                    self.stage = if end < outputs {
                        Stage::Crt { next: end }
                    } else {
                        self.residues = Vec::new();
                        Stage::Done
                    };
                }
                Stage::Done => {}
            }
        }
        budget - left
    }
}
