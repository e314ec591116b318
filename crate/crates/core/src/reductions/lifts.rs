//! Alphabet lifts: binary inner product instances rewritten as Hamming
//! distance instances.

use super::ReductionError;
use crate::strings::{Symbol, Target};

/// Symbols per lifted position in [`lift_ip_to_hd`].
pub const HD_LIFT_WIDTH: usize = 3;
/// Symbols per lifted position in [`lift_ipmod2_to_hdmod2_ternary`].
pub const TERNARY_LIFT_WIDTH: usize = 2;

pub(crate) fn hd_block(target: Target, bit: Symbol) -> [Symbol; 3] {
    match (target, bit) {
        (_, 1) => [1, 1, 1],
        (Target::Pattern, _) => [0, 1, 0],
        (Target::Text, _) => [1, 0, 0],
    }
}

pub(crate) fn ternary_block(target: Target, bit: Symbol) -> [Symbol; 2] {
    match (target, bit) {
        (Target::Pattern, 1) => [2, 2],
        (Target::Pattern, _) => [0, 1],
        (Target::Text, 1) => [1, 1],
        (Target::Text, _) => [0, 2],
    }
}

fn binary(s: &[Symbol]) -> Result<(), ReductionError> {
    match s.iter().find(|&&x| x > 1) {
        Some(&symbol) => Err(ReductionError::NotBinary { symbol }),
        None => Ok(()),
    }
}

/// `1 -> 111` on both sides, pattern `0 -> 010`, text `0 -> 100`.
pub fn lift_ip_to_hd(
    pattern: &[Symbol],
    text: &[Symbol],
) -> Result<(Vec<Symbol>, Vec<Symbol>), ReductionError> {
    binary(pattern)?;
    binary(text)?;
    let p = pattern.iter().flat_map(|&b| hd_block(Target::Pattern, b)).collect();
    let t = text.iter().flat_map(|&b| hd_block(Target::Text, b)).collect();
    Ok((p, t))
}

/// Inner product from the lifted Hamming distance; `m` is the unlifted
/// pattern length.
pub fn decode_hd(hd: usize, m: usize) -> i128 {
    m as i128 - hd as i128 / 2
}

/// Pattern `1 -> 22`, `0 -> 01`; text `1 -> 11`, `0 -> 02`.
pub fn lift_ipmod2_to_hdmod2_ternary(
    pattern: &[Symbol],
    text: &[Symbol],
) -> Result<(Vec<Symbol>, Vec<Symbol>), ReductionError> {
    binary(pattern)?;
    binary(text)?;
    let p = pattern.iter().flat_map(|&b| ternary_block(Target::Pattern, b)).collect();
    let t = text.iter().flat_map(|&b| ternary_block(Target::Text, b)).collect();
    Ok((p, t))
}

/// Inner product modulo 2 from the ternary-lifted distance.
pub fn decode_hd_mod2(hd: usize, m: usize) -> u8 {
    ((m + hd) % 2) as u8
}

/// Alignment in the lifted instance matching 1-based alignment `i`.
pub fn lifted_alignment(i: usize, width: usize) -> usize {
    (i - 1) * width + 1
}
