//! Online Boolean matrix-vector products through dynamic alignment queries.
//!
//! With `m = r^2` and `n = 2r^2`, one side holds the rows of `M` back to back
//! and an `r`-symbol block on the other side holds the current vector. Row
//! `j` meets the vector block at one alignment, and every other non-neutral
//! symbol meets a neutral one there.

use rand::Rng;

use super::{
    check_shape, ApproxIpBackend, GadgetCounters, IpBackend, MatchBackend, OmvInstance,
    ReductionError,
};
use crate::strings::{Alphabet, DynamicString, Symbol, Target, WILDCARD};

/// Estimates above this count as a non-zero inner product.
pub const APPROX_THRESHOLD: f64 = 0.5;

// Wildcard-alphabet codes for the Boolean entries 0 and 1.
const ZERO: Symbol = 1;
const ONE: Symbol = 2;

/// Which string carries the vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OmvLayout {
    /// Matrix in the text, vector in the pattern head; needs pattern updates.
    VectorInPattern,
    /// Matrix in the pattern, vector in text block `r^2-r+1..=r^2`; text
    /// updates only.
    VectorInText,
}

impl OmvLayout {
    fn vector_target(self) -> Target {
        match self {
            OmvLayout::VectorInPattern => Target::Pattern,
            OmvLayout::VectorInText => Target::Text,
        }
    }

    /// 1-based position of the first vector symbol.
    fn vector_base(self, r: usize) -> usize {
        match self {
            OmvLayout::VectorInPattern => 1,
            OmvLayout::VectorInText => r * r - r + 1,
        }
    }

    /// Alignment at which matrix row `j` (0-based) meets the vector.
    pub fn query_index(self, r: usize, j: usize) -> usize {
        match self {
            OmvLayout::VectorInPattern => j * r + 1,
            OmvLayout::VectorInText => (r - 1 - j) * r + 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmvOutcome {
    /// `product[i]` is `M v_i`.
    pub product: Vec<Vec<bool>>,
    pub counters: GadgetCounters,
}

/// `3 * ceil(log2 m)` trials, at least one.
pub fn default_repetitions(m: usize) -> usize {
    (3 * (m.max(1) as f64).log2().ceil() as usize).max(1)
}

/// Writes `block` over the vector block, touching only changed positions.
fn load<F>(
    layout: OmvLayout,
    current: &mut [Symbol],
    block: &[Symbol],
    counters: &mut GadgetCounters,
    mut update: F,
) -> Result<(), ReductionError>
where
    F: FnMut(Target, usize, Symbol) -> Result<(), ReductionError>,
{
    let base = layout.vector_base(current.len());
    let mut issued = 0;
    for (k, (cur, &new)) in current.iter_mut().zip(block).enumerate() {
        if *cur != new {
            update(layout.vector_target(), base + k, new)?;
            *cur = new;
            issued += 1;
        }
    }
    counters.updates += issued;
    counters.max_updates_per_vector = counters.max_updates_per_vector.max(issued);
    Ok(())
}

fn em_strings(inst: &OmvInstance, layout: OmvLayout) -> Result<(DynamicString, DynamicString), ReductionError> {
    let r = inst.r();
    let a = Alphabet::binary().with_wildcard();
    let rows = inst.matrix().iter().flatten();
    let (p, t): (Vec<Symbol>, Vec<Symbol>) = match layout {
        OmvLayout::VectorInPattern => {
            let mut t: Vec<Symbol> = rows.map(|&b| if b { ONE } else { ZERO }).collect();
            t.resize(2 * r * r, ONE);
            (vec![WILDCARD; r * r], t)
        }
        OmvLayout::VectorInText => {
            let p = rows.map(|&b| if b { ZERO } else { WILDCARD }).collect();
            (p, vec![ZERO; 2 * r * r])
        }
    };
    Ok((DynamicString::new(p, a)?, DynamicString::new(t, a)?))
}

fn em_block(layout: OmvLayout, v: &[bool]) -> Vec<Symbol> {
    v.iter()
        .map(|&b| match (layout, b) {
            (OmvLayout::VectorInPattern, true) => ZERO,
            (OmvLayout::VectorInPattern, false) => WILDCARD,
            (OmvLayout::VectorInText, true) => ONE,
            (OmvLayout::VectorInText, false) => ZERO,
        })
        .collect()
}

/// Deterministic: `(M v)[j] = 0` exactly when row `j`'s alignment matches.
pub fn omv_via_dynem<B, F>(
    inst: &OmvInstance,
    layout: OmvLayout,
    build: F,
) -> Result<OmvOutcome, ReductionError>
where
    B: MatchBackend,
    F: FnOnce(DynamicString, DynamicString) -> Result<B, ReductionError>,
{
    let r = inst.r();
    let (p, t) = em_strings(inst, layout)?;
    let mut current = match layout {
        OmvLayout::VectorInPattern => p.symbols()[..r].to_vec(),
        OmvLayout::VectorInText => t.symbols()[r * r - r..r * r].to_vec(),
    };
    let mut backend = build(p, t)?;
    check_shape(backend.shape(), r * r, 2 * r * r)?;
    let mut counters = GadgetCounters::default();
    let mut product = Vec::with_capacity(r);
    for v in inst.vectors() {
        load(layout, &mut current, &em_block(layout, v), &mut counters, |tg, pos, s| {
            backend.update(tg, pos, s)
        })?;
        let mut row = Vec::with_capacity(r);
        for j in 0..r {
            row.push(!backend.matches(layout.query_index(r, j))?);
            counters.queries += 1;
        }
        product.push(row);
    }
    Ok(OmvOutcome { product, counters })
}

fn ip_strings(
    inst: &OmvInstance,
    layout: OmvLayout,
) -> Result<(DynamicString, DynamicString), ReductionError> {
    let r = inst.r();
    let b = Alphabet::binary();
    let rows: Vec<Symbol> = inst.matrix().iter().flatten().map(|&x| x as Symbol).collect();
    let (p, t) = match layout {
        OmvLayout::VectorInPattern => {
            let mut t = rows;
            t.resize(2 * r * r, 0);
            (vec![0; r * r], t)
        }
        OmvLayout::VectorInText => (rows, vec![0; 2 * r * r]),
    };
    Ok((DynamicString::new(p, b)?, DynamicString::new(t, b)?))
}

/// Randomised and one-sided: each trial keeps every set bit of `v` with
/// probability 1/2 and reports 1 for row `j` when the inner product is
/// non-zero modulo `c`. An entry is 1 when any trial says so.
pub fn omv_via_dynip_modc<B, F, R>(
    inst: &OmvInstance,
    layout: OmvLayout,
    c: u64,
    repetitions: usize,
    rng: &mut R,
    build: F,
) -> Result<OmvOutcome, ReductionError>
where
    B: IpBackend,
    F: FnOnce(DynamicString, DynamicString) -> Result<B, ReductionError>,
    R: Rng,
{
    if c < 2 {
        return Err(ReductionError::BadModulus { c });
    }
    if repetitions == 0 {
        return Err(ReductionError::NoRepetitions);
    }
    let r = inst.r();
    let (p, t) = ip_strings(inst, layout)?;
    let mut backend = build(p, t)?;
    check_shape(backend.shape(), r * r, 2 * r * r)?;
    let mut current = vec![0; r];
    let mut counters = GadgetCounters::default();
    let mut product = Vec::with_capacity(r);
    for v in inst.vectors() {
        let mut row = vec![false; r];
        for _ in 0..repetitions {
            let block: Vec<Symbol> = v.iter().map(|&b| (b && rng.gen_bool(0.5)) as Symbol).collect();
            load(layout, &mut current, &block, &mut counters, |tg, pos, s| {
                backend.update(tg, pos, s)
            })?;
            for (j, out) in row.iter_mut().enumerate() {
                if backend.ip_mod(layout.query_index(r, j), c)? != 0 {
                    *out = true;
                }
                counters.queries += 1;
            }
        }
        product.push(row);
    }
    Ok(OmvOutcome { product, counters })
}

/// [`omv_via_dynip_modc`] with `c = 2`.
pub fn omv_via_dynip_mod2<B, F, R>(
    inst: &OmvInstance,
    layout: OmvLayout,
    repetitions: usize,
    rng: &mut R,
    build: F,
) -> Result<OmvOutcome, ReductionError>
where
    B: IpBackend,
    F: FnOnce(DynamicString, DynamicString) -> Result<B, ReductionError>,
    R: Rng,
{
    omv_via_dynip_modc(inst, layout, 2, repetitions, rng, build)
}

/// Deterministic: `(M v)[j] = 1` exactly when the estimate exceeds
/// [`APPROX_THRESHOLD`].
pub fn omv_via_approx_dynip<B, F>(
    inst: &OmvInstance,
    layout: OmvLayout,
    build: F,
) -> Result<OmvOutcome, ReductionError>
where
    B: ApproxIpBackend,
    F: FnOnce(DynamicString, DynamicString) -> Result<B, ReductionError>,
{
    let r = inst.r();
    let (p, t) = ip_strings(inst, layout)?;
    let mut backend = build(p, t)?;
    check_shape(backend.shape(), r * r, 2 * r * r)?;
    let mut current = vec![0; r];
    let mut counters = GadgetCounters::default();
    let mut product = Vec::with_capacity(r);
    for v in inst.vectors() {
        let block: Vec<Symbol> = v.iter().map(|&b| b as Symbol).collect();
        load(layout, &mut current, &block, &mut counters, |tg, pos, s| {
            backend.update(tg, pos, s)
        })?;
        let mut row = Vec::with_capacity(r);
        for j in 0..r {
            row.push(backend.estimate(layout.query_index(r, j))? > APPROX_THRESHOLD);
            counters.queries += 1;
        }
        product.push(row);
    }
    Ok(OmvOutcome { product, counters })
}
