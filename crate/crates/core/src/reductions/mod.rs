//! Encoders that drive dynamic string structures to answer OMv and 2D range
//! problems, plus alphabet lifts between the problems.
//!
//! Gadgets never look inside a backend: they build it through a factory
//! closure from the strings they encode, then talk to it only through
//! [`MatchBackend`], [`IpBackend`] or [`ApproxIpBackend`].

mod backends;
mod grid;
mod instances;
mod lifts;
mod omv;

use thiserror::Error;

use crate::problems::ProblemError;
use crate::strings::{StringError, Symbol, Target};

pub use backends::{HdLiftedIp, PerturbedIp, TernaryLiftedIp};
pub use grid::{RangeCountGadget, RangeEmptyGadget};
pub use instances::{GridInstance, GridSlotChange, InstanceError, OmvInstance};
pub use lifts::{
    decode_hd, decode_hd_mod2, lift_ip_to_hd, lift_ipmod2_to_hdmod2_ternary, lifted_alignment,
    HD_LIFT_WIDTH, TERNARY_LIFT_WIDTH,
};
pub use omv::{
    default_repetitions, omv_via_approx_dynip, omv_via_dynem, omv_via_dynip_mod2,
    omv_via_dynip_modc, OmvLayout, OmvOutcome, APPROX_THRESHOLD,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ReductionError {
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error(transparent)]
    String(#[from] StringError),
    #[error("backend has pattern length {got_m} and text length {got_n}, expected {m} and {n}")]
    BackendShape {
        m: usize,
        n: usize,
        got_m: usize,
        got_n: usize,
    },
    #[error("at least one repetition is needed")]
    NoRepetitions,
    #[error("modulus must be at least 2, got {c}")]
    BadModulus { c: u64 },
    #[error("this backend only answers modulo 2, asked for modulo {c}")]
    ModulusUnsupported { c: u64 },
    #[error("weight {weight} is outside 0..={max}")]
    WeightOutOfRange { weight: i64, max: i64 },
    #[error("lifts need binary strings, found symbol {symbol}")]
    NotBinary { symbol: Symbol },
    #[error("epsilon must lie in (0, 1), got {epsilon}")]
    BadEpsilon { epsilon: f64 },
}

/// Exact matching with wildcards.
pub trait MatchBackend {
    fn update(&mut self, target: Target, position: usize, symbol: Symbol) -> Result<(), ReductionError>;
    fn matches(&mut self, i: usize) -> Result<bool, ReductionError>;
    /// `(pattern length, text length)`.
    fn shape(&self) -> (usize, usize);
}

/// Inner product, read modulo `c`.
pub trait IpBackend {
    fn update(&mut self, target: Target, position: usize, symbol: Symbol) -> Result<(), ReductionError>;
    fn ip_mod(&mut self, i: usize, c: u64) -> Result<u64, ReductionError>;
    fn shape(&self) -> (usize, usize);
}

/// An inner product estimate within a `(1 + eps)` factor; exact zeros stay zero.
pub trait ApproxIpBackend {
    fn update(&mut self, target: Target, position: usize, symbol: Symbol) -> Result<(), ReductionError>;
    fn estimate(&mut self, i: usize) -> Result<f64, ReductionError>;
    fn shape(&self) -> (usize, usize);
}

/// Backend operations issued by a gadget.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GadgetCounters {
    pub updates: u64,
    pub queries: u64,
    /// Most updates issued while loading one vector (one trial).
    pub max_updates_per_vector: u64,
    /// Pattern updates caused by moving a grid slot to a new point.
    pub relocation_updates: u64,
}

fn check_shape(got: (usize, usize), m: usize, n: usize) -> Result<(), ReductionError> {
    if got != (m, n) {
        return Err(ReductionError::BackendShape {
            m,
            n,
            got_m: got.0,
            got_n: got.1,
        });
    }
    Ok(())
}
