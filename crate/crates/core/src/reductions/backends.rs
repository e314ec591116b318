use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::lifts::{decode_hd, decode_hd_mod2, hd_block, lifted_alignment, ternary_block};
use super::{ApproxIpBackend, IpBackend, MatchBackend, ReductionError, HD_LIFT_WIDTH, TERNARY_LIFT_WIDTH};
use crate::lazy::RebuildMode;
use crate::problems::{BlockedStructure, DynEm, DynHd, DynIp, ProblemError, UpdateModel};
use crate::strings::{Alphabet, DynamicString, Symbol, Target};

impl MatchBackend for DynEm {
    fn update(&mut self, target: Target, position: usize, symbol: Symbol) -> Result<(), ReductionError> {
        BlockedStructure::update(self, target, position, symbol)?;
        Ok(())
    }

    fn matches(&mut self, i: usize) -> Result<bool, ReductionError> {
        Ok(DynEm::matches(self, i)?)
    }

    fn shape(&self) -> (usize, usize) {
        (self.pattern().len(), self.text().len())
    }
}

impl IpBackend for DynIp {
    fn update(&mut self, target: Target, position: usize, symbol: Symbol) -> Result<(), ReductionError> {
        BlockedStructure::update(self, target, position, symbol)?;
        Ok(())
    }

    fn ip_mod(&mut self, i: usize, c: u64) -> Result<u64, ReductionError> {
        Ok(self.mod_query(i, c)?)
    }

    fn shape(&self) -> (usize, usize) {
        (self.pattern().len(), self.text().len())
    }
}

fn lift_string<const W: usize>(
    s: &DynamicString,
    target: Target,
    block: fn(Target, Symbol) -> [Symbol; W],
    alphabet: Alphabet,
) -> Result<DynamicString, ReductionError> {
    if let Some(&symbol) = s.symbols().iter().find(|&&x| x > 1) {
        return Err(ReductionError::NotBinary { symbol });
    }
    let lifted = s.symbols().iter().flat_map(|&b| block(target, b)).collect();
    Ok(DynamicString::new(lifted, alphabet)?)
}

/// Binary inner product answered by a Hamming distance structure on the
/// `111/010/100` lift. Each update becomes up to three lifted updates.
#[derive(Debug)]
pub struct HdLiftedIp {
    hd: DynHd,
    m: usize,
    n: usize,
}

impl HdLiftedIp {
    pub fn new(
        pattern: DynamicString,
        text: DynamicString,
        mode: RebuildMode,
        model: UpdateModel,
    ) -> Result<Self, ReductionError> {
        let b = Alphabet::binary();
        let p = lift_string(&pattern, Target::Pattern, hd_block, b)?;
        let t = lift_string(&text, Target::Text, hd_block, b)?;
        Ok(HdLiftedIp {
            hd: DynHd::new(p, t, mode, model)?,
            m: pattern.len(),
            n: text.len(),
        })
    }

    pub fn inner(&self) -> &DynHd {
        &self.hd
    }
}

impl IpBackend for HdLiftedIp {
    fn update(&mut self, target: Target, position: usize, symbol: Symbol) -> Result<(), ReductionError> {
        if symbol > 1 {
            return Err(ReductionError::NotBinary { symbol });
        }
        let base = lifted_alignment(position, HD_LIFT_WIDTH);
        for (k, s) in hd_block(target, symbol).into_iter().enumerate() {
            self.hd.update(target, base + k, s)?;
        }
        Ok(())
    }

    fn ip_mod(&mut self, i: usize, c: u64) -> Result<u64, ReductionError> {
        if c < 2 {
            return Err(ReductionError::BadModulus { c });
        }
        let alignments = self.n - self.m + 1;
        if i == 0 || i > alignments {
            return Err(ProblemError::QueryOutOfRange { i, alignments }.into());
        }
        let hd = self.hd.query(lifted_alignment(i, HD_LIFT_WIDTH))?;
        Ok(decode_hd(hd, self.m).rem_euclid(c as i128) as u64)
    }

    fn shape(&self) -> (usize, usize) {
        (self.m, self.n)
    }
}

/// Binary inner product modulo 2 answered by a ternary Hamming distance
/// structure on the `22/01` (pattern) and `11/02` (text) lift.
#[derive(Debug)]
pub struct TernaryLiftedIp {
    hd: DynHd,
    m: usize,
    n: usize,
}

impl TernaryLiftedIp {
    pub fn new(
        pattern: DynamicString,
        text: DynamicString,
        mode: RebuildMode,
        model: UpdateModel,
    ) -> Result<Self, ReductionError> {
        let a = Alphabet::ternary();
        let p = lift_string(&pattern, Target::Pattern, ternary_block, a)?;
        let t = lift_string(&text, Target::Text, ternary_block, a)?;
        Ok(TernaryLiftedIp {
            hd: DynHd::new(p, t, mode, model)?,
            m: pattern.len(),
            n: text.len(),
        })
    }

    pub fn inner(&self) -> &DynHd {
        &self.hd
    }
}

impl IpBackend for TernaryLiftedIp {
    fn update(&mut self, target: Target, position: usize, symbol: Symbol) -> Result<(), ReductionError> {
        if symbol > 1 {
            return Err(ReductionError::NotBinary { symbol });
        }
        let base = lifted_alignment(position, TERNARY_LIFT_WIDTH);
        for (k, s) in ternary_block(target, symbol).into_iter().enumerate() {
            self.hd.update(target, base + k, s)?;
        }
        Ok(())
    }

    fn ip_mod(&mut self, i: usize, c: u64) -> Result<u64, ReductionError> {
        if c != 2 {
            return Err(ReductionError::ModulusUnsupported { c });
        }
        let alignments = self.n - self.m + 1;
        if i == 0 || i > alignments {
            return Err(ProblemError::QueryOutOfRange { i, alignments }.into());
        }
        let parity = self.hd.mod_query(lifted_alignment(i, TERNARY_LIFT_WIDTH), 2)?;
        Ok(decode_hd_mod2(parity as usize, self.m) as u64)
    }

    fn shape(&self) -> (usize, usize) {
        (self.m, self.n)
    }
}

/// A `(1 + eps)`-approximate inner product: the exact answer times a fresh
/// seeded factor from `[1/(1+eps), 1+eps]` on every query.
#[derive(Debug)]
pub struct PerturbedIp {
    ip: DynIp,
    epsilon: f64,
    rng: ChaCha8Rng,
}

impl PerturbedIp {
    pub fn new(ip: DynIp, epsilon: f64, seed: u64) -> Result<Self, ReductionError> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(ReductionError::BadEpsilon { epsilon });
        }
        Ok(PerturbedIp {
            ip,
            epsilon,
            rng: ChaCha8Rng::seed_from_u64(seed),
        })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
}

impl ApproxIpBackend for PerturbedIp {
    fn update(&mut self, target: Target, position: usize, symbol: Symbol) -> Result<(), ReductionError> {
        self.ip.update(target, position, symbol)?;
        Ok(())
    }

    fn estimate(&mut self, i: usize) -> Result<f64, ReductionError> {
        let exact = self.ip.query(i)?;
        let scale = self.rng.gen_range(1.0 / (1.0 + self.epsilon)..=1.0 + self.epsilon);
        Ok(exact as f64 * scale)
    }

    fn shape(&self) -> (usize, usize) {
        (self.ip.pattern().len(), self.ip.text().len())
    }
}
