//! Number-theoretic transforms over word-sized primes, resumable at
//! butterfly granularity.

/// NTT-friendly primes below 2^31 with their two-adicity, largest first.
pub(crate) const PRIMES: [(u64, u32); 5] = [
    (2013265921, 27),
    (1811939329, 26),
    (1004535809, 21),
    (998244353, 23),
    (754974721, 24),
];

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    a * b % p
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Smallest generator of the multiplicative group modulo prime `p`.
pub(crate) fn primitive_root(p: u64) -> u64 {
    let mut factors = Vec::new();
    let mut x = p - 1;
    let mut d = 2;
    while d * d <= x {
        if x % d == 0 {
            factors.push(d);
            while x % d == 0 {
                x /= d;
            }
        }
        d += 1;
    }
    if x > 1 {
        factors.push(x);
    }
    (2..p)
        .find(|&g| factors.iter().all(|&q| pow_mod(g, (p - 1) / q, p) != 1))
        .expect("prime modulus has a generator")
}

/// Cursor into a transform in progress.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum NttCursor {
    Permute { next: usize },
    Layer { half: usize, next: usize },
    Scale { next: usize },
    Done,
}

impl NttCursor {
    pub(crate) fn start() -> Self {
        NttCursor::Permute { next: 0 }
    }
}

/// Root tables for one prime at one power-of-two size.
#[derive(Debug)]
pub(crate) struct NttTables {
    pub(crate) modulus: u64,
    size: usize,
    log: u32,
    twiddles: Vec<u64>,
    inv_twiddles: Vec<u64>,
    size_inv: u64,
}

impl NttTables {
    pub(crate) fn new(modulus: u64, size: usize) -> Self {
        assert!(size.is_power_of_two());
        let log = size.trailing_zeros();
        let g = primitive_root(modulus);
        let omega = pow_mod(g, (modulus - 1) / size as u64, modulus);
        let omega_inv = inv_mod(omega, modulus);
        let half = size / 2;
        let mut twiddles = Vec::with_capacity(half);
        let mut inv_twiddles = Vec::with_capacity(half);
        let (mut w, mut wi) = (1u64, 1u64);
        for _ in 0..half {
            twiddles.push(w);
            inv_twiddles.push(wi);
            w = mul_mod(w, omega, modulus);
            wi = mul_mod(wi, omega_inv, modulus);
        }
        NttTables {
            modulus,
            size,
            log,
            twiddles,
            inv_twiddles,
            size_inv: inv_mod(size as u64 % modulus, modulus),
        }
    }

    /// Work units of a full forward (or inverse) transform.
    pub(crate) fn cost(size: usize, inverse: bool) -> u64 {
        let log = size.trailing_zeros() as u64;
        let base = size as u64 + (size as u64 / 2) * log;
        if inverse {
            base + size as u64
        } else {
            base
        }
    }

    fn reverse(&self, i: usize) -> usize {
        if self.log == 0 {
            0
        } else {
            i.reverse_bits() >> (usize::BITS - self.log)
        }
    }

    /// Runs at most `budget` units of the transform and returns units spent.
    pub(crate) fn advance(
        &self,
        buf: &mut [u64],
        cursor: &mut NttCursor,
        inverse: bool,
        budget: u64,
    ) -> u64 {
        let n = self.size;
        let p = self.modulus;
        let mut left = budget;
        while left > 0 {
            match *cursor {
                NttCursor::Permute { next } => {
                    let end = (next as u64 + left).min(n as u64) as usize;
                    for i in next..end {
                        let r = self.reverse(i);
                        if i < r {
                            buf.swap(i, r);
                        }
                    }
                    left -= (end - next) as u64;
                    *cursor = if end == n {
                        if n > 1 {
                            NttCursor::Layer { half: 1, next: 0 }
                        } else if inverse {
                            NttCursor::Scale { next: 0 }
                        } else {
                            NttCursor::Done
                        }
                    } else {
                        NttCursor::Permute { next: end }
                    };
                }
                NttCursor::Layer { half, next } => {
                    let total = n / 2;
                    let end = (next as u64 + left).min(total as u64) as usize;
                    let stride = n / (2 * half);
                    let tw = if inverse {
                        &self.inv_twiddles
                    } else {
                        &self.twiddles
                    };
                    let mut b = next;
                    while b < end {
                        let block = b / half;
                        let j0 = b % half;
                        let j1 = (j0 + (end - b)).min(half);
                        let base = block * 2 * half;
                        for j in j0..j1 {
                            let w = tw[j * stride];
                            let u = buf[base + j];
                            let v = mul_mod(buf[base + j + half], w, p);
                            buf[base + j] = if u + v >= p { u + v - p } else { u + v };
                            buf[base + j + half] = if u >= v { u - v } else { u + p - v };
                        }
                        b += j1 - j0;
                    }
                    left -= (end - next) as u64;
                    *cursor = if end < total {
                        NttCursor::Layer { half, next: end }
                    } else if half * 2 < n {
                        NttCursor::Layer {
                            half: half * 2,
                            next: 0,
                        }
                    } else if inverse {
                        NttCursor::Scale { next: 0 }
                    } else {
                        NttCursor::Done
                    };
                }
                NttCursor::Scale { next } => {
                    let end = (next as u64 + left).min(n as u64) as usize;
                    for x in &mut buf[next..end] {
                        *x = mul_mod(*x, self.size_inv, p);
                    }
                    left -= (end - next) as u64;
                    *cursor = if end == n {
                        NttCursor::Done
                    } else {
                        NttCursor::Scale { next: end }
                    };
                }
                NttCursor::Done => break,
            }
        }
        budget - left
    }

    pub(crate) fn transform(&self, buf: &mut [u64], inverse: bool) -> u64 {
        let mut cursor = NttCursor::start();
        self.advance(buf, &mut cursor, inverse, u64::MAX)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_have_declared_two_adicity() {
        for &(p, k) in &PRIMES {
            assert_eq!((p - 1) % (1 << k), 0, "{p}");
            assert_ne!(((p - 1) >> k) % 2, 0, "{p}");
            let g = primitive_root(p);
            assert_ne!(pow_mod(g, (p - 1) / 2, p), 1);
        }
    }

    #[test]
    fn round_trip_and_cost() {
        let t = NttTables::new(998244353, 16);
        let orig: Vec<u64> = (0..16).map(|i| (i * 7 + 3) % 11).collect();
        let mut buf = orig.clone();
        assert_eq!(t.transform(&mut buf, false), NttTables::cost(16, false));
        assert_eq!(t.transform(&mut buf, true), NttTables::cost(16, true));
        assert_eq!(buf, orig);
    }

    #[test]
    fn resumed_transform_matches_monolithic() {
        let t = NttTables::new(1004535809, 64);
        let orig: Vec<u64> = (0..64).map(|i| (i * i * 31 + 5) % 1000).collect();
        let mut whole = orig.clone();
        t.transform(&mut whole, false);
        for budget in [1u64, 3, 7, 32, 100] {
            let mut buf = orig.clone();
            let mut cur = NttCursor::start();
            let mut spent = 0;
            while cur != NttCursor::Done {
                let s = t.advance(&mut buf, &mut cur, false, budget);
                assert!(s <= budget);
                spent += s;
            }
            assert_eq!(spent, NttTables::cost(64, false));
            assert_eq!(buf, whole);
        }
    }

    #[test]
    fn size_one_transform() {
        let t = NttTables::new(998244353, 1);
        let mut buf = vec![42];
        t.transform(&mut buf, false);
        t.transform(&mut buf, true);
        assert_eq!(buf, vec![42]);
    }
}
