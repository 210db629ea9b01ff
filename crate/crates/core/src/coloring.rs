//! Colorings of located words. A coloring is total on a finite window
//! (table keyed by canonical index, the unit at index 0) and may carry a
//! symbolic rule that extends it to arbitrary positions; predicates that
//! quantify past the window are only meaningful for symbolic colorings.

use crate::alphabet::{Alphabet, ColorSet};
use crate::error::{Error, Result};
use crate::word::{canonical_index, word_at_index, window_size, Cell, LocatedWord};
use serde::{Deserialize, Serialize};
use std::cell::RefCell;
use std::collections::{BTreeSet, HashMap};

pub type Color = u64;

/// Anything that assigns colors to star-free located words (unit
/// included). Searches are generic over this so that derived product
/// colorings plug in beside table-backed ones.
pub trait ColorMap {
    fn color_count(&self) -> u64;
    fn color_of(&self, w: &LocatedWord) -> Result<Color>;
}

/// A named total rule, evaluable at any position.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "kebab-case")]
pub enum SymbolicRule {
    Constant { value: Color },
    DomSizeMod { modulus: u64 },
    LetterCountMod { letter: char, modulus: u64 },
    PosSumMod { modulus: u64 },
    /// 0 when the position is absent, otherwise 1 + rank of its letter.
    LetterAt { pos: u32 },
    HasLetter { letter: char },
}

impl SymbolicRule {
    /// Smallest color count under which every value the rule can produce
    /// is in range.
    pub fn required_colors(&self, alphabet: &Alphabet) -> u64 {
        match self {
            SymbolicRule::Constant { value } => value + 1,
            SymbolicRule::DomSizeMod { modulus } => *modulus,
            SymbolicRule::LetterCountMod { modulus, .. } => *modulus,
            SymbolicRule::PosSumMod { modulus } => *modulus,
            SymbolicRule::LetterAt { .. } => alphabet.k() as u64 + 1,
            SymbolicRule::HasLetter { .. } => 2,
        }
    }

    pub fn eval(&self, alphabet: &Alphabet, w: &LocatedWord) -> Result<Color> {
        if w.star_count() > 0 {
            return Err(Error::UnknownSymbol(alphabet.star()));
        }
        Ok(match self {
            SymbolicRule::Constant { value } => *value,
            SymbolicRule::DomSizeMod { modulus } => w.len() as u64 % modulus,
            SymbolicRule::LetterCountMod { letter, modulus } => {
                let rank = letter_rank(alphabet, *letter)?;
                w.letter_count(rank) as u64 % modulus
            }
            SymbolicRule::PosSumMod { modulus } => {
                w.domain().map(u64::from).sum::<u64>() % modulus
            }
            SymbolicRule::LetterAt { pos } => match w.get(*pos) {
                None => 0,
                Some(Cell::Letter(r)) => 1 + r as u64,
                Some(Cell::Star) => unreachable!("stars rejected above"),
            },
            SymbolicRule::HasLetter { letter } => {
                let rank = letter_rank(alphabet, *letter)?;
                u64::from(w.letter_count(rank) > 0)
            }
        })
    }
}

fn letter_rank(alphabet: &Alphabet, letter: char) -> Result<u8> {
    match alphabet.cell_of(letter)? {
        Cell::Letter(r) => Ok(r),
        Cell::Star => Err(Error::UnknownSymbol(letter)),
    }
}

/// A coloring total on `FIN_A(0, window)` plus the unit. The table is
/// always materialized (it defines the content hash); the rule, when
/// present, agrees with the table on the window and extends the coloring
/// past it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coloring {
    alphabet: Alphabet,
    colors: ColorSet,
    window: u32,
    table: Vec<Color>,
    rule: Option<SymbolicRule>,
}

impl Coloring {
    pub fn from_table(
        alphabet: Alphabet,
        colors: ColorSet,
        window: u32,
        table: Vec<Color>,
    ) -> Result<Self> {
        let expect = window_size(alphabet.k(), window)?;
        if table.len() as u64 != expect {
            return Err(Error::InvalidInput(format!(
                "table length {} does not match window size {expect}",
                table.len()
            )));
        }
        if let Some(&bad) = table.iter().find(|&&c| c >= colors.count()) {
            return Err(Error::InvalidInput(format!(
                "table color {bad} exceeds color count {}",
                colors.count()
            )));
        }
        Ok(Coloring { alphabet, colors, window, table, rule: None })
    }

    pub fn from_rule(
        alphabet: Alphabet,
        colors: ColorSet,
        window: u32,
        rule: SymbolicRule,
    ) -> Result<Self> {
        if rule.required_colors(&alphabet) > colors.count() {
            return Err(Error::InvalidInput(format!(
                "rule needs {} colors, {} declared",
                rule.required_colors(&alphabet),
                colors.count()
            )));
        }
        // rule-backed colorings stay symbolic: no table, flat memory at
        // any window
        Ok(Coloring { alphabet, colors, window, table: Vec::new(), rule: Some(rule) })
    }

    pub fn from_fn(
        alphabet: Alphabet,
        colors: ColorSet,
        window: u32,
        f: impl Fn(&LocatedWord) -> Result<Color>,
    ) -> Result<Self> {
        let k = alphabet.k();
        let table = (0..window_size(k, window)?)
            .map(|idx| {
                let c = f(&word_at_index(idx, k, window)?)?;
                if c >= colors.count() {
                    return Err(Error::InvalidInput(format!(
                        "function color {c} exceeds color count {}",
                        colors.count()
                    )));
                }
                Ok(c)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Coloring { alphabet, colors, window, table, rule: None })
    }

    /// Attaches a rule to a table-backed coloring, checking agreement on
    /// the whole window.
    pub fn with_rule(mut self, rule: SymbolicRule) -> Result<Self> {
        if self.table.is_empty() {
            return Err(Error::InvalidInput(
                "rules attach to table-backed colorings only".into(),
            ));
        }
        let k = self.alphabet.k();
        for (idx, &c) in self.table.iter().enumerate() {
            let w = word_at_index(idx as u64, k, self.window)?;
            if rule.eval(&self.alphabet, &w)? != c {
                return Err(Error::InvalidInput(format!(
                    "rule disagrees with table at index {idx}"
                )));
            }
        }
        self.rule = Some(rule);
        Ok(self)
    }

    pub fn constant(alphabet: Alphabet, colors: ColorSet, window: u32, value: Color) -> Self {
        Coloring::from_rule(alphabet, colors, window, SymbolicRule::Constant { value })
            .expect("constant coloring is always valid")
    }

    /// |dom p| mod 2, the running two-color example.
    pub fn parity(alphabet: Alphabet, window: u32) -> Self {
        Coloring::from_rule(
            alphabet,
            ColorSet::new(2).unwrap(),
            window,
            SymbolicRule::DomSizeMod { modulus: 2 },
        )
        .expect("parity coloring is always valid")
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn colors(&self) -> ColorSet {
        self.colors
    }

    pub fn window(&self) -> u32 {
        self.window
    }

    /// Empty for purely rule-backed colorings.
    pub fn table(&self) -> &[Color] {
        &self.table
    }

    pub fn rule(&self) -> Option<&SymbolicRule> {
        self.rule.as_ref()
    }

    /// Whether the coloring can be evaluated on any word past its window.
    pub fn is_symbolic(&self) -> bool {
        self.rule.is_some()
    }

    /// Stable 64-bit FNV-1a digest over the alphabet, the declared color
    /// count, the window, the canonical table, and the rule when present;
    /// certificates carry it to bind themselves to an instance.
    pub fn content_hash(&self) -> String {
        let mut h = Fnv::new();
        h.bytes(&[self.alphabet.k()]);
        for &l in self.alphabet.letters() {
            h.bytes(&(l as u32).to_le_bytes());
        }
        h.bytes(&(self.alphabet.star() as u32).to_le_bytes());
        h.bytes(&self.colors.count().to_le_bytes());
        h.bytes(&self.window.to_le_bytes());
        for &c in &self.table {
            h.bytes(&c.to_le_bytes());
        }
        if let Some(rule) = &self.rule {
            h.bytes(serde_json::to_string(rule).expect("rule serializes").as_bytes());
        }
        format!("{:016x}", h.finish())
    }
}

impl ColorMap for Coloring {
    fn color_count(&self) -> u64 {
        self.colors.count()
    }

    fn color_of(&self, w: &LocatedWord) -> Result<Color> {
        if w.star_count() > 0 {
            return Err(Error::UnknownSymbol(self.alphabet.star()));
        }
        let inside = w.max_pos().map_or(true, |m| m < self.window);
        if inside && !self.table.is_empty() {
            let idx = canonical_index(w, self.alphabet.k(), self.window)?;
            return Ok(self.table[idx as usize]);
        }
        match &self.rule {
            Some(rule) => rule.eval(&self.alphabet, w),
            None => Err(Error::WindowOverflow(format!(
                "word reaches position {} but table window is {} and no rule is attached",
                w.max_pos().unwrap_or(0),
                self.window
            ))),
        }
    }
}

impl<T: ColorMap + ?Sized> ColorMap for &T {
    fn color_count(&self) -> u64 {
        (**self).color_count()
    }

    fn color_of(&self, w: &LocatedWord) -> Result<Color> {
        (**self).color_of(w)
    }
}

/// Closure-backed color map for derived colorings inside searches.
pub struct FnColorMap<F: Fn(&LocatedWord) -> Result<Color>> {
    count: u64,
    f: F,
}

impl<F: Fn(&LocatedWord) -> Result<Color>> FnColorMap<F> {
    pub fn new(count: u64, f: F) -> Self {
        FnColorMap { count, f }
    }
}

impl<F: Fn(&LocatedWord) -> Result<Color>> ColorMap for FnColorMap<F> {
    fn color_count(&self) -> u64 {
        self.count
    }

    fn color_of(&self, w: &LocatedWord) -> Result<Color> {
        (self.f)(w)
    }
}

/// Assigns dense ids to color tuples in first-seen order, realizing the
/// product colorings of the match machinery without radix overflow.
/// Single-consumer by construction (not Sync); use only on sequential
/// search paths so ids stay deterministic.
#[derive(Debug, Default)]
pub struct ColorInterner {
    map: RefCell<HashMap<Vec<Color>, Color>>,
}

impl ColorInterner {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intern(&self, tuple: Vec<Color>) -> Color {
        let mut map = self.map.borrow_mut();
        let next = map.len() as Color;
        *map.entry(tuple).or_insert(next)
    }

    pub fn count(&self) -> u64 {
        self.map.borrow().len() as u64
    }
}

/// Colorings of finite subsets of `[0, window)`, for the finite-union
/// searches; the table is indexed by bitmask.
pub trait SetColorMap {
    fn color_count(&self) -> u64;
    fn color_of(&self, e: &BTreeSet<u32>) -> Result<Color>;
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetColoring {
    colors: ColorSet,
    window: u32,
    table: Vec<Color>,
}

impl SetColoring {
    pub fn from_table(colors: ColorSet, window: u32, table: Vec<Color>) -> Result<Self> {
        if window >= 26 {
            return Err(Error::Overflow("set coloring window"));
        }
        let expect = 1u64 << window;
        if table.len() as u64 != expect {
            return Err(Error::InvalidInput(format!(
                "set table length {} does not match 2^{window}",
                table.len()
            )));
        }
        if let Some(&bad) = table.iter().find(|&&c| c >= colors.count()) {
            return Err(Error::InvalidInput(format!(
                "set table color {bad} exceeds color count {}",
                colors.count()
            )));
        }
        Ok(SetColoring { colors, window, table })
    }

    pub fn from_fn(
        colors: ColorSet,
        window: u32,
        f: impl Fn(&BTreeSet<u32>) -> Result<Color>,
    ) -> Result<Self> {
        if window >= 26 {
            return Err(Error::Overflow("set coloring window"));
        }
        let table = (0..1u64 << window)
            .map(|mask| {
                let set: BTreeSet<u32> = (0..window).filter(|i| mask >> i & 1 == 1).collect();
                let c = f(&set)?;
                if c >= colors.count() {
                    return Err(Error::InvalidInput(format!(
                        "function color {c} exceeds color count {}",
                        colors.count()
                    )));
                }
                Ok(c)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SetColoring { colors, window, table })
    }

    pub fn window(&self) -> u32 {
        self.window
    }

    pub fn table(&self) -> &[Color] {
        &self.table
    }
}

impl SetColorMap for SetColoring {
    fn color_count(&self) -> u64 {
        self.colors.count()
    }

    fn color_of(&self, e: &BTreeSet<u32>) -> Result<Color> {
        let mut mask = 0u64;
        for &i in e {
            if i >= self.window {
                return Err(Error::OutOfWindow { pos: i, window: self.window });
            }
            mask |= 1 << i;
        }
        Ok(self.table[mask as usize])
    }
}

impl<T: SetColorMap + ?Sized> SetColorMap for &T {
    fn color_count(&self) -> u64 {
        (**self).color_count()
    }

    fn color_of(&self, e: &BTreeSet<u32>) -> Result<Color> {
        (**self).color_of(e)
    }
}

/// Closure-backed set color map.
pub struct FnSetColorMap<F: Fn(&BTreeSet<u32>) -> Result<Color>> {
    count: u64,
    f: F,
}

impl<F: Fn(&BTreeSet<u32>) -> Result<Color>> FnSetColorMap<F> {
    pub fn new(count: u64, f: F) -> Self {
        FnSetColorMap { count, f }
    }
}

impl<F: Fn(&BTreeSet<u32>) -> Result<Color>> SetColorMap for FnSetColorMap<F> {
    fn color_count(&self) -> u64 {
        self.count
    }

    fn color_of(&self, e: &BTreeSet<u32>) -> Result<Color> {
        (self.f)(e)
    }
}

struct Fnv(u64);

impl Fnv {
    fn new() -> Self {
        Fnv(0xcbf29ce484222325)
    }

    fn bytes(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 ^= b as u64;
            self.0 = self.0.wrapping_mul(0x100000001b3);
        }
    }

    fn finish(&self) -> u64 {
        self.0
    }
}
