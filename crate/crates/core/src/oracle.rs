//! Quadratic-time reference implementations. Nothing here shares code with
//! the fast paths; every structure in the crate is checked against these.

use crate::reductions::{GridInstance, OmvInstance};
use crate::strings::{StringError, Symbol};

/// The three readings of a wildcard alignment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EmReading {
    pub matches: bool,
    pub mismatches: usize,
    pub weighted: i128,
}

fn window<'a>(text: &'a [Symbol], i: usize, m: usize) -> Result<&'a [Symbol], StringError> {
    if i == 0 || m == 0 || i - 1 + m > text.len() {
        return Err(StringError::WindowOutOfBounds {
            start: i,
            len: m,
            text_len: text.len(),
        });
    }
    Ok(&text[i - 1..i - 1 + m])
}

/// Hamming distance of `pattern` against the window at 1-based `i`.
pub fn naive_hd(pattern: &[Symbol], text: &[Symbol], i: usize) -> Result<usize, StringError> {
    let w = window(text, i, pattern.len())?;
    let mut d = 0;
    for j in 0..pattern.len() {
        if pattern[j] != w[j] {
            d += 1;
        }
    }
    Ok(d)
}

pub fn naive_ip(pattern: &[Symbol], text: &[Symbol], i: usize) -> Result<i128, StringError> {
    let w = window(text, i, pattern.len())?;
    let mut s: i128 = 0;
    for j in 0..pattern.len() {
        s += pattern[j] as i128 * w[j] as i128;
    }
    Ok(s)
}

/// Wildcard matching with `0` as the wildcard on both sides.
pub fn naive_em(pattern: &[Symbol], text: &[Symbol], i: usize) -> Result<EmReading, StringError> {
    let w = window(text, i, pattern.len())?;
    let mut mismatches = 0;
    let mut weighted: i128 = 0;
    for j in 0..pattern.len() {
        let (p, t) = (pattern[j], w[j]);
        if p != 0 && t != 0 && p != t {
            mismatches += 1;
        }
        let (p, t) = (p as i128, t as i128);
        weighted += p * t * (p - t) * (p - t);
    }
    Ok(EmReading {
        matches: mismatches == 0,
        mismatches,
        weighted,
    })
}

/// Boolean product `M v` by definition.
pub fn naive_matvec(matrix: &[Vec<bool>], v: &[bool]) -> Vec<bool> {
    matrix
        .iter()
        .map(|row| {
            let mut any = false;
            for k in 0..v.len() {
                if row[k] && v[k] {
                    any = true;
                }
            }
            any
        })
        .collect()
}

/// All products `M v_1, ..., M v_r`.
pub fn naive_omv(inst: &OmvInstance) -> Vec<Vec<bool>> {
    inst.vectors()
        .iter()
        .map(|v| naive_matvec(inst.matrix(), v))
        .collect()
}

/// Sum of weights at grid points `(a, b)` with `a <= x` and `b <= y` (1-based).
pub fn naive_dominance(grid: &GridInstance, x: usize, y: usize) -> i128 {
    let mut total = 0i128;
    for a in 1..=x.min(grid.side()) {
        for b in 1..=y.min(grid.side()) {
            total += grid.weight_at(a, b) as i128;
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_cases() {
        // "ab" vs "ab"
        assert_eq!(naive_hd(&[1, 2], &[1, 2], 1).unwrap(), 0);
        assert_eq!(
            naive_em(&[0, 1], &[2, 1], 1).unwrap(),
            EmReading {
                matches: true,
                mismatches: 0,
                weighted: 0
            }
        );
        assert_eq!(
            naive_em(&[1], &[2], 1).unwrap(),
            EmReading {
                matches: false,
                mismatches: 1,
                weighted: 2
            }
        );
        assert_eq!(naive_ip(&[1, 1], &[0, 1, 1, 0], 2).unwrap(), 2);
        assert!(naive_hd(&[1, 1], &[0, 1, 1], 3).is_err());
    }

    #[test]
    fn matvec_identity_and_ones() {
        let r = 5;
        let id: Vec<Vec<bool>> = (0..r).map(|i| (0..r).map(|j| i == j).collect()).collect();
        let ones = vec![vec![true; r]; r];
        let v = vec![false, true, false, false, true];
        assert_eq!(naive_matvec(&id, &v), v);
        assert_eq!(naive_matvec(&ones, &v), vec![true; r]);
        assert_eq!(naive_matvec(&ones, &[false; 5]), vec![false; r]);
    }

    #[test]
    fn matvec_transpose_consistency() {
        // (M v)_j = OR_k M[j][k] v[k]; entry (j, k) of M is visible from the
        // transpose applied to basis vectors.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let r = 8;
        let m: Vec<Vec<bool>> = (0..r).map(|_| (0..r).map(|_| rng.gen()).collect()).collect();
        let mt: Vec<Vec<bool>> = (0..r).map(|i| (0..r).map(|j| m[j][i]).collect()).collect();
        for k in 0..r {
            let e: Vec<bool> = (0..r).map(|i| i == k).collect();
            let col = naive_matvec(&m, &e);
            for j in 0..r {
                let row_of_t = naive_matvec(&mt, &(0..r).map(|i| i == j).collect::<Vec<_>>());
                assert_eq!(col[j], row_of_t[k]);
            }
        }
    }
}
