//! Alphabets, fixed-length mutable strings and the update log shared by every
//! dynamic structure in the crate.
//!
//! Positions in the public API are 1-based; storage is 0-based.

use std::fmt;

use thiserror::Error;

/// A symbol value. When the alphabet has wildcards enabled, `0` is the wildcard.
pub type Symbol = u32;

/// The reserved wildcard value.
pub const WILDCARD: Symbol = 0;

const CONSTANT_TIER_MAX: u32 = 64;
const POLYNOMIAL_MAX: u32 = 1 << 31;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StringError {
    #[error("position {position} out of range 1..={len}")]
    PositionOutOfRange { position: usize, len: usize },
    #[error("symbol {symbol} is not valid for {alphabet}")]
    InvalidSymbol { symbol: Symbol, alphabet: Alphabet },
    #[error("window starting at {start} of length {len} exceeds text of length {text_len}")]
    WindowOutOfBounds {
        start: usize,
        len: usize,
        text_len: usize,
    },
    #[error("invalid alphabet size {size} for {kind:?}")]
    InvalidAlphabet { kind: AlphabetKind, size: u32 },
    #[error("strings must be non-empty")]
    Empty,
    #[error("update log is full (capacity {capacity})")]
    LogFull { capacity: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AlphabetKind {
    Binary,
    Ternary,
    Constant,
    Polynomial,
}

/// A declared alphabet: symbols `0..size`, or `1..=size` plus the wildcard `0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Alphabet {
    kind: AlphabetKind,
    size: u32,
    wildcard: bool,
}

impl Alphabet {
    pub fn binary() -> Self {
        Alphabet {
            kind: AlphabetKind::Binary,
            size: 2,
            wildcard: false,
        }
    }

    pub fn ternary() -> Self {
        Alphabet {
            kind: AlphabetKind::Ternary,
            size: 3,
            wildcard: false,
        }
    }

    pub fn constant(size: u32) -> Result<Self, StringError> {
        if size == 0 || size > CONSTANT_TIER_MAX {
            return Err(StringError::InvalidAlphabet {
                kind: AlphabetKind::Constant,
                size,
            });
        }
        Ok(Alphabet {
            kind: AlphabetKind::Constant,
            size,
            wildcard: false,
        })
    }

    pub fn polynomial(size: u32) -> Result<Self, StringError> {
        if size == 0 || size > POLYNOMIAL_MAX {
            return Err(StringError::InvalidAlphabet {
                kind: AlphabetKind::Polynomial,
                size,
            });
        }
        Ok(Alphabet {
            kind: AlphabetKind::Polynomial,
            size,
            wildcard: false,
        })
    }

    /// Reserves `0` for the wildcard and shifts ordinary symbols to `1..=size`.
    pub fn with_wildcard(mut self) -> Self {
        self.wildcard = true;
        self
    }

    pub fn kind(&self) -> AlphabetKind {
        self.kind
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    pub fn has_wildcard(&self) -> bool {
        self.wildcard
    }

    /// Alphabets small enough for the per-letter convolution solver.
    pub fn is_constant_tier(&self) -> bool {
        self.size <= CONSTANT_TIER_MAX
    }

    /// Largest symbol value a string over this alphabet may hold.
    pub fn max_symbol(&self) -> Symbol {
        if self.wildcard {
            self.size
        } else {
            self.size - 1
        }
    }

    pub fn contains(&self, symbol: Symbol) -> bool {
        symbol <= self.max_symbol()
    }

    pub fn is_wildcard(&self, symbol: Symbol) -> bool {
        self.wildcard && symbol == WILDCARD
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            AlphabetKind::Binary => "binary",
            AlphabetKind::Ternary => "ternary",
            AlphabetKind::Constant => "constant",
            AlphabetKind::Polynomial => "polynomial",
        };
        write!(f, "{}({})", kind, self.size)?;
        if self.wildcard {
            write!(f, "+?")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Target {
    Pattern,
    Text,
}

/// A single substitution, with the symbol it displaced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Update {
    pub target: Target,
    /// 1-based.
    pub position: usize,
    pub new_symbol: Symbol,
    pub old_symbol: Symbol,
}

/// A fixed-length string supporting point substitutions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DynamicString {
    symbols: Vec<Symbol>,
    alphabet: Alphabet,
    version: u64,
}

impl DynamicString {
    pub fn new(symbols: Vec<Symbol>, alphabet: Alphabet) -> Result<Self, StringError> {
        if symbols.is_empty() {
            return Err(StringError::Empty);
        }
        if let Some(&bad) = symbols.iter().find(|&&s| !alphabet.contains(s)) {
            return Err(StringError::InvalidSymbol {
                symbol: bad,
                alphabet,
            });
        }
        Ok(DynamicString {
            symbols,
            alphabet,
            version: 0,
        })
    }

    /// Parses a string of decimal digits, one symbol per character.
    pub fn from_digits(digits: &str, alphabet: Alphabet) -> Result<Self, StringError> {
        let symbols = digits
            .chars()
            .map(|c| c.to_digit(10).unwrap_or(u32::MAX))
            .collect();
        DynamicString::new(symbols, alphabet)
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    /// Number of substitutions applied since construction.
    pub fn version(&self) -> u64 {
        self.version
    }

    /// 1-based read.
    pub fn get(&self, position: usize) -> Option<Symbol> {
        position
            .checked_sub(1)
            .and_then(|p| self.symbols.get(p))
            .copied()
    }

    fn check_position(&self, position: usize) -> Result<usize, StringError> {
        if position == 0 || position > self.symbols.len() {
            return Err(StringError::PositionOutOfRange {
                position,
                len: self.symbols.len(),
            });
        }
        Ok(position - 1)
    }

    pub fn check_symbol(&self, symbol: Symbol) -> Result<(), StringError> {
        if self.alphabet.contains(symbol) {
            Ok(())
        } else {
            Err(StringError::InvalidSymbol {
                symbol,
                alphabet: self.alphabet,
            })
        }
    }

    /// Substitutes the symbol at `position` and returns the update record.
    pub fn apply_update(
        &mut self,
        target: Target,
        position: usize,
        new_symbol: Symbol,
    ) -> Result<Update, StringError> {
        let idx = self.check_position(position)?;
        self.check_symbol(new_symbol)?;
        let old_symbol = std::mem::replace(&mut self.symbols[idx], new_symbol);
        self.version += 1;
        Ok(Update {
            target,
            position,
            new_symbol,
            old_symbol,
        })
    }

    /// The `len` symbols starting at 1-based `start`.
    pub fn window(&self, start: usize, len: usize) -> Result<&[Symbol], StringError> {
        let n = self.symbols.len();
        if start == 0 || len == 0 || start - 1 + len > n {
            return Err(StringError::WindowOutOfBounds {
                start,
                len,
                text_len: n,
            });
        }
        Ok(&self.symbols[start - 1..start - 1 + len])
    }
}

/// Updates recorded since the last snapshot, bounded by `capacity`.
#[derive(Debug, Clone)]
pub struct UpdateLog {
    entries: Vec<Update>,
    capacity: usize,
}

impl UpdateLog {
    pub fn new(capacity: usize) -> Self {
        let capacity = capacity.max(1);
        UpdateLog {
            entries: Vec::with_capacity(capacity),
            capacity,
        }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.entries.len() >= self.capacity
    }

    pub fn entries(&self) -> &[Update] {
        &self.entries
    }

    pub fn push(&mut self, update: Update) -> Result<(), StringError> {
        if self.is_full() {
            return Err(StringError::LogFull {
                capacity: self.capacity,
            });
        }
        self.entries.push(update);
        Ok(())
    }

    pub fn clear(&mut self) {
        self.entries.clear();
    }

    /// Drops the oldest `count` entries.
    pub fn drain_front(&mut self, count: usize) {
        self.entries.drain(..count.min(self.entries.len()));
    }

    /// Re-applies every entry, in order, to copies of the snapshot strings.
    pub fn replay(
        &self,
        pattern: &DynamicString,
        text: &DynamicString,
    ) -> Result<(DynamicString, DynamicString), StringError> {
        let mut pattern = pattern.clone();
        let mut text = text.clone();
        for u in &self.entries {
            match u.target {
                Target::Pattern => pattern.apply_update(u.target, u.position, u.new_symbol)?,
                Target::Text => text.apply_update(u.target, u.position, u.new_symbol)?,
            };
        }
        Ok((pattern, text))
    }
}
