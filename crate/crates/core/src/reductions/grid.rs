//! 2D dominance counting and emptiness on an `r x r` grid through one
//! alignment query each.
//!
//! With `m = r^3` and `n = 2m`, grid slot `i` lives at text position
//! `m - r + i`. Query shape `q = (x-1)r + (y-1)` owns pattern positions
//! `qr + 1..=qr + r`, where position `qr + i` says whether slot `i`'s point
//! lies in the quadrant. Aligning at `m - r + 1 - qr` lays that strip over the
//! slots and everything else of the pattern over neutral text.

use super::{check_shape, GadgetCounters, GridInstance, IpBackend, MatchBackend, ReductionError};
use crate::strings::{Alphabet, DynamicString, Symbol, Target, WILDCARD};

const ZERO: Symbol = 1;
const ONE: Symbol = 2;

#[derive(Debug, Clone)]
struct Frame {
    r: usize,
    m: usize,
    points: Vec<Option<(usize, usize)>>,
}

impl Frame {
    fn new(grid: &GridInstance) -> Self {
        let r = grid.side();
        Frame {
            r,
            m: r * r * r,
            points: (0..r).map(|s| grid.slot(s).map(|(p, _)| p)).collect(),
        }
    }

    fn shapes(&self) -> usize {
        self.r * self.r
    }

    fn shape(&self, x: usize, y: usize) -> usize {
        (x - 1) * self.r + (y - 1)
    }

    fn inside(&self, q: usize, point: Option<(usize, usize)>) -> bool {
        let (x, y) = (q / self.r + 1, q % self.r + 1);
        point.is_some_and(|(a, b)| a <= x && b <= y)
    }

    fn pattern_pos(&self, q: usize, slot: usize) -> usize {
        q * self.r + slot + 1
    }

    fn text_pos(&self, slot: usize) -> usize {
        self.m - self.r + slot + 1
    }

    fn alignment(&self, q: usize) -> usize {
        self.m - self.r + 1 - q * self.r
    }

    fn pattern(&self, bit: impl Fn(bool) -> Symbol, filler: Symbol) -> Vec<Symbol> {
        let mut p = vec![filler; self.m];
        for q in 0..self.shapes() {
            for (s, &pt) in self.points.iter().enumerate() {
                p[self.pattern_pos(q, s) - 1] = bit(self.inside(q, pt));
            }
        }
        p
    }

    fn check_query(&self, x: usize, y: usize) -> Result<(), ReductionError> {
        if x == 0 || y == 0 || x > self.r || y > self.r {
            return Err(super::InstanceError::OutOfGrid { x, y, side: self.r }.into());
        }
        Ok(())
    }

    /// Pattern rewrites for moving `slot` to `to`: `(position, inside)`.
    fn relocate(&mut self, slot: usize, to: (usize, usize)) -> Vec<(usize, bool)> {
        let from = self.points[slot].replace(to);
        (0..self.shapes())
            .filter_map(|q| {
                let now = self.inside(q, Some(to));
                (now != self.inside(q, from)).then(|| (self.pattern_pos(q, slot), now))
            })
            .collect()
    }
}

/// Weighted dominance sums through an inner product structure. Weights must
/// lie in `0..=max_weight`.
#[derive(Debug)]
pub struct RangeCountGadget<B> {
    grid: GridInstance,
    frame: Frame,
    max_weight: i64,
    backend: B,
    counters: GadgetCounters,
}

impl<B: IpBackend> RangeCountGadget<B> {
    pub fn new<F>(grid: GridInstance, max_weight: i64, build: F) -> Result<Self, ReductionError>
    where
        F: FnOnce(DynamicString, DynamicString) -> Result<B, ReductionError>,
    {
        if max_weight < 1 || max_weight >= i64::from(u32::MAX) {
            return Err(ReductionError::WeightOutOfRange {
                weight: max_weight,
                max: i64::from(u32::MAX) - 1,
            });
        }
        let frame = Frame::new(&grid);
        let mut t = vec![0; 2 * frame.m];
        for s in 0..frame.r {
            if let Some((_, w)) = grid.slot(s) {
                if !(0..=max_weight).contains(&w) {
                    return Err(ReductionError::WeightOutOfRange { weight: w, max: max_weight });
                }
                t[frame.text_pos(s) - 1] = w as Symbol;
            }
        }
        let alphabet = Alphabet::polynomial(max_weight as u32 + 1)?;
        let p = DynamicString::new(frame.pattern(|b| b as Symbol, 0), alphabet)?;
        let t = DynamicString::new(t, alphabet)?;
        let backend = build(p, t)?;
        check_shape(backend.shape(), frame.m, 2 * frame.m)?;
        Ok(RangeCountGadget {
            grid,
            frame,
            max_weight,
            backend,
            counters: GadgetCounters::default(),
        })
    }

    pub fn grid(&self) -> &GridInstance {
        &self.grid
    }

    pub fn backend(&self) -> &B {
        &self.backend
    }

    pub fn counters(&self) -> GadgetCounters {
        self.counters
    }

    pub fn set_weight(&mut self, x: usize, y: usize, weight: i64) -> Result<(), ReductionError> {
        if !(0..=self.max_weight).contains(&weight) {
            return Err(ReductionError::WeightOutOfRange { weight, max: self.max_weight });
        }
        let Some(change) = self.grid.set_weight(x, y, weight)? else {
            return Ok(());
        };
        if let Some(to) = change.relocated {
            for (pos, inside) in self.frame.relocate(change.slot, to) {
                self.backend.update(Target::Pattern, pos, inside as Symbol)?;
                self.counters.updates += 1;
                self.counters.relocation_updates += 1;
            }
        }
        let pos = self.frame.text_pos(change.slot);
        self.backend.update(Target::Text, pos, weight as Symbol)?;
        self.counters.updates += 1;
        Ok(())
    }

    /// Sum of weights at points `(a, b)` with `a <= x`, `b <= y`.
    pub fn query(&mut self, x: usize, y: usize) -> Result<i128, ReductionError> {
        self.frame.check_query(x, y)?;
        let c = (self.max_weight as u64) * self.frame.r as u64 + 1;
        let a = self.frame.alignment(self.frame.shape(x, y));
        self.counters.queries += 1;
        Ok(self.backend.ip_mod(a, c)? as i128)
    }
}

/// Dominance emptiness for 0/1 weights through exact matching with
/// wildcards: the quadrant is empty exactly when its alignment matches.
#[derive(Debug)]
pub struct RangeEmptyGadget<B> {
    grid: GridInstance,
    frame: Frame,
    backend: B,
    counters: GadgetCounters,
}

fn bit_code(weight: i64) -> Result<Symbol, ReductionError> {
    match weight {
        0 => Ok(ZERO),
        1 => Ok(ONE),
        _ => Err(ReductionError::WeightOutOfRange { weight, max: 1 }),
    }
}

impl<B: MatchBackend> RangeEmptyGadget<B> {
    pub fn new<F>(grid: GridInstance, build: F) -> Result<Self, ReductionError>
    where
        F: FnOnce(DynamicString, DynamicString) -> Result<B, ReductionError>,
    {
        let frame = Frame::new(&grid);
        let mut t = vec![ZERO; 2 * frame.m];
        for s in 0..frame.r {
            if let Some((_, w)) = grid.slot(s) {
                t[frame.text_pos(s) - 1] = bit_code(w)?;
            }
        }
        let alphabet = Alphabet::binary().with_wildcard();
        let p = frame.pattern(|b| if b { ZERO } else { WILDCARD }, WILDCARD);
        let p = DynamicString::new(p, alphabet)?;
        let t = DynamicString::new(t, alphabet)?;
        let backend = build(p, t)?;
        check_shape(backend.shape(), frame.m, 2 * frame.m)?;
        Ok(RangeEmptyGadget {
            grid,
            frame,
            backend,
            counters: GadgetCounters::default(),
        })
    }

    pub fn grid(&self) -> &GridInstance {
        &self.grid
    }

    pub fn backend(&self) -> &B {
        &self.backend
    }

    pub fn counters(&self) -> GadgetCounters {
        self.counters
    }

    pub fn set_weight(&mut self, x: usize, y: usize, weight: i64) -> Result<(), ReductionError> {
        let code = bit_code(weight)?;
        let Some(change) = self.grid.set_weight(x, y, weight)? else {
            return Ok(());
        };
        if let Some(to) = change.relocated {
            for (pos, inside) in self.frame.relocate(change.slot, to) {
                let s = if inside { ZERO } else { WILDCARD };
                self.backend.update(Target::Pattern, pos, s)?;
                self.counters.updates += 1;
                self.counters.relocation_updates += 1;
            }
        }
        self.backend.update(Target::Text, self.frame.text_pos(change.slot), code)?;
        self.counters.updates += 1;
        Ok(())
    }

    /// Whether no point with weight 1 lies at `(a, b)` with `a <= x`, `b <= y`.
    pub fn is_empty(&mut self, x: usize, y: usize) -> Result<bool, ReductionError> {
        self.frame.check_query(x, y)?;
        let a = self.frame.alignment(self.frame.shape(x, y));
        self.counters.queries += 1;
        self.backend.matches(a)
    }
}
