use crate::error::{Error, Result};
use crate::word::{Cell, LocatedWord, WordKind};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// A finite ordered alphabet together with its reserved variable symbol.
///
/// Letters are ranked by declaration order; all canonical encodings and
/// enumeration orders below derive from that ranking.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Alphabet {
    letters: Vec<char>,
    star: char,
}

impl Alphabet {
    pub fn new(letters: &[char], star: char) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::InvalidInput("alphabet needs at least one letter".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        for &c in letters {
            if !seen.insert(c) {
                return Err(Error::InvalidInput(format!("duplicate letter {c:?}")));
            }
        }
        if seen.contains(&star) {
            return Err(Error::InvalidInput("the star must not be a letter".into()));
        }
        Ok(Alphabet { letters: letters.to_vec(), star })
    }

    /// Two letters `a`, `b` with star `*`: the default desk alphabet.
    pub fn ab() -> Self {
        Alphabet { letters: vec!['a', 'b'], star: '*' }
    }

    /// The first k lowercase letters with star `*`, for searches
    /// parameterized only by alphabet size.
    pub fn synthetic(k: u8) -> Result<Self> {
        if k == 0 || k > 26 {
            return Err(Error::InvalidInput(format!(
                "synthetic alphabet size {k} outside 1..=26"
            )));
        }
        let letters: Vec<char> = (0..k).map(|r| (b'a' + r) as char).collect();
        Alphabet::new(&letters, '*')
    }

    /// Number of letters.
    pub fn k(&self) -> u8 {
        self.letters.len() as u8
    }

    pub fn letters(&self) -> &[char] {
        &self.letters
    }

    pub fn star(&self) -> char {
        self.star
    }

    /// Rank of a letter, if it is one.
    pub fn rank(&self, c: char) -> Option<u8> {
        self.letters.iter().position(|&l| l == c).map(|i| i as u8)
    }

    pub fn cell_of(&self, c: char) -> Result<Cell> {
        if c == self.star {
            Ok(Cell::Star)
        } else {
            self.rank(c).map(Cell::Letter).ok_or(Error::UnknownSymbol(c))
        }
    }

    pub fn char_of(&self, cell: Cell) -> char {
        match cell {
            Cell::Star => self.star,
            Cell::Letter(r) => self.letters[r as usize],
        }
    }

    /// Validates a raw position-to-symbol map and tags which kind of word it is.
    pub fn classify(&self, raw: &BTreeMap<u32, char>) -> Result<(LocatedWord, WordKind)> {
        let mut cells = BTreeMap::new();
        for (&pos, &c) in raw {
            cells.insert(pos, self.cell_of(c)?);
        }
        let w = LocatedWord::from_cells(cells);
        let kind = w.kind();
        Ok((w, kind))
    }

    /// Parses the `{0:a,2:*}` rendering produced by [`Alphabet::render`].
    /// `{}` is the unit.
    pub fn parse_word(&self, s: &str) -> Result<LocatedWord> {
        let s = s.trim();
        let inner = s
            .strip_prefix('{')
            .and_then(|t| t.strip_suffix('}'))
            .ok_or_else(|| Error::Parse(format!("expected {{pos:sym,...}}, got {s:?}")))?;
        let mut cells = BTreeMap::new();
        for part in inner.split(',') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let (pos, sym) = part
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("expected pos:sym, got {part:?}")))?;
            let pos: u32 = pos
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad position {pos:?}")))?;
            let sym = sym.trim();
            let mut chars = sym.chars();
            let c = chars
                .next()
                .ok_or_else(|| Error::Parse(format!("missing symbol at position {pos}")))?;
            if chars.next().is_some() {
                return Err(Error::Parse(format!("symbol {sym:?} is not a single character")));
            }
            if cells.insert(pos, self.cell_of(c)?).is_some() {
                return Err(Error::Parse(format!("position {pos} given twice")));
            }
        }
        Ok(LocatedWord::from_cells(cells))
    }

    pub fn render(&self, w: &LocatedWord) -> String {
        let mut out = String::from("{");
        let mut first = true;
        for (pos, cell) in w.cells() {
            if !first {
                out.push(',');
            }
            first = false;
            out.push_str(&format!("{pos}:{}", self.char_of(*cell)));
        }
        out.push('}');
        out
    }

    /// Parses a classical (non-located) word, one symbol per character.
    pub fn parse_classical(&self, s: &str) -> Result<Vec<Cell>> {
        s.chars().map(|c| self.cell_of(c)).collect()
    }

    pub fn render_classical(&self, w: &[Cell]) -> String {
        w.iter().map(|&c| self.char_of(c)).collect()
    }
}

/// An ordered finite color set; colors are the indices `0..count`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColorSet {
    count: u64,
}

impl ColorSet {
    pub fn new(count: u64) -> Result<Self> {
        if count == 0 {
            return Err(Error::InvalidInput("a color set needs at least one color".into()));
        }
        Ok(ColorSet { count })
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn contains(&self, color: u64) -> bool {
        color < self.count
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_alphabets() {
        assert!(Alphabet::new(&[], '*').is_err());
        assert!(Alphabet::new(&['a', 'a'], '*').is_err());
        assert!(Alphabet::new(&['a', '*'], '*').is_err());
    }

    #[test]
    fn classify_and_parse_roundtrip() {
        let ab = Alphabet::ab();
        let w = ab.parse_word("{0:a,2:*}").unwrap();
        assert_eq!(w.kind(), WordKind::VariableWord);
        assert_eq!(ab.render(&w), "{0:a,2:*}");
        let unit = ab.parse_word("{}").unwrap();
        assert!(unit.is_unit());
        assert!(ab.parse_word("{0:c}").is_err());
        assert!(ab.parse_word("{0:a,0:b}").is_err());
    }
}
