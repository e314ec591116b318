use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InstanceError {
    #[error("matrix must be a non-empty square; row {row} has length {len}, expected {r}")]
    Ragged { row: usize, len: usize, r: usize },
    #[error("expected {r} vectors of length {r}, found vector {index} of length {len}")]
    BadVector { index: usize, len: usize, r: usize },
    #[error("grid side must be positive")]
    EmptyGrid,
    #[error("point ({x}, {y}) is outside the {side}x{side} grid")]
    OutOfGrid { x: usize, y: usize, side: usize },
    #[error("grid already holds {capacity} non-zero weights")]
    TooManyPoints { capacity: usize },
}

/// A Boolean `r x r` matrix with its `r` query vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmvInstance {
    matrix: Vec<Vec<bool>>,
    vectors: Vec<Vec<bool>>,
}

impl OmvInstance {
    pub fn new(matrix: Vec<Vec<bool>>, vectors: Vec<Vec<bool>>) -> Result<Self, InstanceError> {
        let r = matrix.len();
        for (row, v) in matrix.iter().enumerate() {
            if v.len() != r || r == 0 {
                return Err(InstanceError::Ragged { row, len: v.len(), r });
            }
        }
        if r == 0 {
            return Err(InstanceError::Ragged { row: 0, len: 0, r });
        }
        for (index, v) in vectors.iter().enumerate() {
            if v.len() != r {
                return Err(InstanceError::BadVector { index, len: v.len(), r });
            }
        }
        if vectors.len() != r {
            return Err(InstanceError::BadVector {
                index: vectors.len(),
                len: 0,
                r,
            });
        }
        Ok(OmvInstance { matrix, vectors })
    }

    /// Entries set independently with probability `density`.
    pub fn random<R: Rng>(r: usize, density: f64, rng: &mut R) -> Self {
        let gen = |rng: &mut R| -> Vec<Vec<bool>> {
            (0..r)
                .map(|_| (0..r).map(|_| rng.gen_bool(density)).collect())
                .collect()
        };
        let matrix = gen(rng);
        let vectors = gen(rng);
        OmvInstance { matrix, vectors }
    }

    pub fn r(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &[Vec<bool>] {
        &self.matrix
    }

    pub fn vectors(&self) -> &[Vec<bool>] {
        &self.vectors
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
struct Slot {
    pos: Option<(usize, usize)>,
    weight: i64,
}

/// What a weight change did to the slot table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSlotChange {
    pub slot: usize,
    pub weight: i64,
    /// Set when the slot now describes a different point than before.
    pub relocated: Option<(usize, usize)>,
}

/// An `r x r` weighted grid holding at most `r` non-zero weights, each in
/// one of `r` slots. A slot remembers its last point after its weight drops
/// to zero, so re-adding that point does not relocate anything.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridInstance {
    side: usize,
    slots: Vec<Slot>,
}

impl GridInstance {
    pub fn new(side: usize) -> Result<Self, InstanceError> {
        if side == 0 {
            return Err(InstanceError::EmptyGrid);
        }
        Ok(GridInstance {
            side,
            slots: vec![Slot::default(); side],
        })
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn slot_count(&self) -> usize {
        self.slots.len()
    }

    /// `(point, weight)` of slot `s`, if it has ever held a point.
    pub fn slot(&self, s: usize) -> Option<((usize, usize), i64)> {
        let slot = self.slots.get(s)?;
        slot.pos.map(|p| (p, slot.weight))
    }

    pub fn weight_at(&self, x: usize, y: usize) -> i64 {
        self.slots
            .iter()
            .filter(|s| s.pos == Some((x, y)))
            .map(|s| s.weight)
            .sum()
    }

    pub fn nonzero(&self) -> usize {
        self.slots.iter().filter(|s| s.weight != 0).count()
    }

    /// Sets the weight at 1-based point `(x, y)`; `None` when nothing changed.
    pub fn set_weight(
        &mut self,
        x: usize,
        y: usize,
        weight: i64,
    ) -> Result<Option<GridSlotChange>, InstanceError> {
        if x == 0 || y == 0 || x > self.side || y > self.side {
            return Err(InstanceError::OutOfGrid {
                x,
                y,
                side: self.side,
            });
        }
        if let Some(s) = self.slots.iter().position(|s| s.pos == Some((x, y))) {
            if self.slots[s].weight == weight {
                return Ok(None);
            }
            self.slots[s].weight = weight;
            return Ok(Some(GridSlotChange {
                slot: s,
                weight,
                relocated: None,
            }));
        }
        if weight == 0 {
            return Ok(None);
        }
        // prefer never-used slots, then any free one
        let free = self
            .slots
            .iter()
            .position(|s| s.pos.is_none())
            .or_else(|| self.slots.iter().position(|s| s.weight == 0))
            .ok_or(InstanceError::TooManyPoints {
                capacity: self.slots.len(),
            })?;
        self.slots[free] = Slot {
            pos: Some((x, y)),
            weight,
        };
        Ok(Some(GridSlotChange {
            slot: free,
            weight,
            relocated: Some((x, y)),
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omv_validation() {
        assert!(OmvInstance::new(vec![vec![true]], vec![vec![false]]).is_ok());
        assert!(OmvInstance::new(vec![vec![true, false]], vec![vec![false]]).is_err());
        assert!(OmvInstance::new(vec![vec![true]], vec![]).is_err());
    }

    #[test]
    fn grid_slots() {
        let mut g = GridInstance::new(2).unwrap();
        let c = g.set_weight(1, 1, 5).unwrap().unwrap();
        assert_eq!(c.relocated, Some((1, 1)));
        assert_eq!(g.weight_at(1, 1), 5);
        g.set_weight(2, 2, 1).unwrap();
        assert_eq!(
            g.set_weight(1, 2, 1),
            Err(InstanceError::TooManyPoints { capacity: 2 })
        );
        let c = g.set_weight(1, 1, 0).unwrap().unwrap();
        assert_eq!(c.relocated, None);
        assert_eq!(g.set_weight(1, 1, 0).unwrap(), None);
        let c = g.set_weight(1, 2, 3).unwrap().unwrap();
        assert_eq!(c.relocated, Some((1, 2)));
        assert_eq!(g.weight_at(1, 1), 0);
        assert_eq!(g.nonzero(), 2);
        assert!(g.set_weight(3, 1, 1).is_err());
    }
}
