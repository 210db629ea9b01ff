//! Located words: finite partial maps from natural-number positions to
//! symbols. A word whose cells are all letters is an ordinary located word;
//! a word containing the star at least once is a located variable word; the
//! empty map is admitted as an explicit unit so that unions have a neutral
//! element and colorings can be total.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::BTreeMap;

/// One cell of a located word. `Star` sorts before every letter, which
/// fixes the canonical enumeration order of variable words.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Cell {
    Star,
    Letter(u8),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WordKind {
    Unit,
    Word,
    VariableWord,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct LocatedWord {
    cells: BTreeMap<u32, Cell>,
}

impl LocatedWord {
    pub fn unit() -> Self {
        LocatedWord { cells: BTreeMap::new() }
    }

    pub fn from_cells(cells: impl IntoIterator<Item = (u32, Cell)>) -> Self {
        LocatedWord { cells: cells.into_iter().collect() }
    }

    pub fn cells(&self) -> impl Iterator<Item = (&u32, &Cell)> {
        self.cells.iter()
    }

    pub fn get(&self, pos: u32) -> Option<Cell> {
        self.cells.get(&pos).copied()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn domain(&self) -> impl Iterator<Item = u32> + '_ {
        self.cells.keys().copied()
    }

    pub fn min_pos(&self) -> Option<u32> {
        self.cells.keys().next().copied()
    }

    pub fn max_pos(&self) -> Option<u32> {
        self.cells.keys().next_back().copied()
    }

    pub fn star_count(&self) -> usize {
        self.cells.values().filter(|c| **c == Cell::Star).count()
    }

    pub fn kind(&self) -> WordKind {
        if self.cells.is_empty() {
            WordKind::Unit
        } else if self.star_count() > 0 {
            WordKind::VariableWord
        } else {
            WordKind::Word
        }
    }

    pub fn is_variable(&self) -> bool {
        self.kind() == WordKind::VariableWord
    }

    pub fn is_plain_word(&self) -> bool {
        self.kind() == WordKind::Word
    }

    /// Count of cells holding the letter of the given rank.
    pub fn letter_count(&self, rank: u8) -> usize {
        self.cells.values().filter(|c| **c == Cell::Letter(rank)).count()
    }

    /// Replaces every star by `x`; the domain is unchanged, and
    /// instantiating by the star is the identity.
    pub fn instantiate(&self, x: Cell) -> LocatedWord {
        if x == Cell::Star {
            return self.clone();
        }
        LocatedWord {
            cells: self
                .cells
                .iter()
                .map(|(&p, &c)| (p, if c == Cell::Star { x } else { c }))
                .collect(),
        }
    }

    /// Whether this word lies entirely below `other`. Errors on the unit,
    /// for which the ordering is undefined.
    pub fn precedes(&self, other: &LocatedWord) -> Result<bool> {
        let (a, b) = (self.max_pos(), other.min_pos());
        match (a, b) {
            (Some(a), Some(b)) => Ok(a < b),
            _ => Err(Error::EmptyOperand),
        }
    }

    /// Ordered disjoint union. The unit is neutral; otherwise one operand
    /// must lie entirely below the other, and interleaved or overlapping
    /// domains are rejected.
    pub fn union(&self, other: &LocatedWord) -> Result<LocatedWord> {
        if self.is_unit() {
            return Ok(other.clone());
        }
        if other.is_unit() {
            return Ok(self.clone());
        }
        let ok = self.precedes(other)? || other.precedes(self)?;
        if !ok {
            return Err(Error::NotSeparated(format!(
                "domains [{:?},{:?}] and [{:?},{:?}] interleave",
                self.min_pos(),
                self.max_pos(),
                other.min_pos(),
                other.max_pos()
            )));
        }
        let mut cells = self.cells.clone();
        cells.extend(other.cells.iter().map(|(&p, &c)| (p, c)));
        Ok(LocatedWord { cells })
    }

    /// Shifts every position by `delta`; the canonical embedding of words
    /// into words living past a given level.
    pub fn translate(&self, delta: u32) -> LocatedWord {
        LocatedWord { cells: self.cells.iter().map(|(&p, &c)| (p + delta, c)).collect() }
    }

    /// Restriction to positions below `bound`.
    pub fn restrict_below(&self, bound: u32) -> LocatedWord {
        LocatedWord {
            cells: self.cells.iter().filter(|(&p, _)| p < bound).map(|(&p, &c)| (p, c)).collect(),
        }
    }
}

/// Positions are compared from the highest down, an absent cell counting
/// as the smallest digit; this agrees with comparing canonical indices in
/// any positional base, so sorted output is stable across window choices.
impl Ord for LocatedWord {
    fn cmp(&self, other: &Self) -> Ordering {
        let mut a = self.cells.iter().rev().peekable();
        let mut b = other.cells.iter().rev().peekable();
        loop {
            match (a.peek(), b.peek()) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some((&pa, &ca)), Some((&pb, &cb))) => match pa.cmp(&pb) {
                    Ordering::Greater => return Ordering::Greater,
                    Ordering::Less => return Ordering::Less,
                    Ordering::Equal => {
                        match ca.cmp(&cb) {
                            Ordering::Equal => {
                                a.next();
                                b.next();
                            }
                            uneq => return uneq,
                        }
                    }
                },
            }
        }
    }
}

impl PartialOrd for LocatedWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical index of a star-free word inside the window `[0, window)`:
/// position `i` contributes digit 0 when absent and `1 + rank` when it
/// holds a letter, in mixed radix base `k + 1`. The unit maps to 0 and the
/// map is a bijection onto `[0, (k+1)^window)`.
pub fn canonical_index(w: &LocatedWord, k: u8, window: u32) -> Result<u64> {
    let base = k as u64 + 1;
    let mut idx: u64 = 0;
    for (&pos, &cell) in w.cells() {
        if pos >= window {
            return Err(Error::OutOfWindow { pos, window });
        }
        let digit = match cell {
            Cell::Letter(r) if r < k => 1 + r as u64,
            Cell::Letter(r) => return Err(Error::UnknownSymbol((b'0' + r) as char)),
            Cell::Star => return Err(Error::UnknownSymbol('*')),
        };
        let place = base
            .checked_pow(pos)
            .ok_or(Error::Overflow("canonical_index"))?;
        idx = idx
            .checked_add(digit.checked_mul(place).ok_or(Error::Overflow("canonical_index"))?)
            .ok_or(Error::Overflow("canonical_index"))?;
    }
    Ok(idx)
}

/// Inverse of [`canonical_index`].
pub fn word_at_index(mut idx: u64, k: u8, window: u32) -> Result<LocatedWord> {
    let base = k as u64 + 1;
    let total = base.checked_pow(window).ok_or(Error::Overflow("word_at_index"))?;
    if idx >= total {
        return Err(Error::IndexOutOfRange { index: idx as usize, len: total as usize });
    }
    let mut cells = BTreeMap::new();
    let mut pos = 0u32;
    while idx > 0 {
        let digit = idx % base;
        if digit > 0 {
            cells.insert(pos, Cell::Letter((digit - 1) as u8));
        }
        idx /= base;
        pos += 1;
    }
    Ok(LocatedWord { cells })
}

/// Number of star-free words (unit included) in the window.
pub fn window_size(k: u8, window: u32) -> Result<u64> {
    (k as u64 + 1).checked_pow(window).ok_or(Error::Overflow("window_size"))
}

/// Index of an arbitrary word (stars allowed) in the window, in mixed
/// radix base `k + 2`: digit 0 absent, 1 the star, `2 + rank` a letter.
pub fn extended_index(w: &LocatedWord, k: u8, window: u32) -> Result<u64> {
    let base = k as u64 + 2;
    let mut idx: u64 = 0;
    for (&pos, &cell) in w.cells() {
        if pos >= window {
            return Err(Error::OutOfWindow { pos, window });
        }
        let digit = match cell {
            Cell::Star => 1,
            Cell::Letter(r) if r < k => 2 + r as u64,
            Cell::Letter(r) => return Err(Error::UnknownSymbol((b'0' + r) as char)),
        };
        let place = base.checked_pow(pos).ok_or(Error::Overflow("extended_index"))?;
        idx = idx
            .checked_add(digit.checked_mul(place).ok_or(Error::Overflow("extended_index"))?)
            .ok_or(Error::Overflow("extended_index"))?;
    }
    Ok(idx)
}

/// Inverse of [`extended_index`].
pub fn word_at_extended_index(mut idx: u64, k: u8, window: u32) -> Result<LocatedWord> {
    let base = k as u64 + 2;
    let total = base.checked_pow(window).ok_or(Error::Overflow("word_at_extended_index"))?;
    if idx >= total {
        return Err(Error::IndexOutOfRange { index: idx as usize, len: total as usize });
    }
    let mut cells = BTreeMap::new();
    let mut pos = 0u32;
    while idx > 0 {
        let digit = idx % base;
        match digit {
            0 => {}
            1 => {
                cells.insert(pos, Cell::Star);
            }
            d => {
                cells.insert(pos, Cell::Letter((d - 2) as u8));
            }
        }
        idx /= base;
        pos += 1;
    }
    Ok(LocatedWord { cells })
}

/// Ascending enumeration of every word over letters and star in the
/// window, unit included; digit 0 is absent, 1 the star, `2 + rank` a
/// letter, so the stream is sorted by the word ordering above.
pub fn all_words(k: u8, window: u32) -> impl Iterator<Item = LocatedWord> {
    let base = k as u64 + 2;
    let total = base.checked_pow(window).expect("window too large to enumerate");
    (0..total).map(move |idx| word_at_extended_index(idx, k, window).expect("index in range"))
}

/// Ascending enumeration of the located variable words in the window.
pub fn variable_words(k: u8, window: u32) -> impl Iterator<Item = LocatedWord> {
    all_words(k, window).filter(|w| w.is_variable())
}

/// Ascending enumeration of the star-free nonempty words `p` with
/// `ell <= min dom p` and `max dom p < bound`.
pub fn words_in_range(k: u8, ell: u32, bound: u32) -> impl Iterator<Item = LocatedWord> {
    let total = window_size(k, bound).expect("range too large to enumerate");
    (1..total)
        .map(move |idx| word_at_index(idx, k, bound).expect("index in range"))
        .filter(move |w| w.min_pos().map_or(false, |p| p >= ell))
}

/// Ascending enumeration of the located variable words `p` with
/// `ell <= min dom p` and `max dom p < bound`.
pub fn variable_words_in_range(k: u8, ell: u32, bound: u32) -> impl Iterator<Item = LocatedWord> {
    variable_words(k, bound).filter(move |w| w.min_pos().map_or(false, |p| p >= ell))
}
