//! Finite Hales-Jewett search over located words: least monochromatic
//! variable word for a given coloring, and exact HJ window numbers for
//! tiny parameters by exhausting the coloring space.

use crate::alphabet::Alphabet;
use crate::coloring::{Color, ColorMap};
use crate::error::{Error, Result};
use crate::word::{variable_words, window_size, Cell, LocatedWord};
use rayon::prelude::*;

/// A variable word all of whose letter instantiations share one color.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HjWitness {
    pub p: LocatedWord,
    pub color: Color,
    pub window: u32,
}

/// Least variable word in the window whose instantiation set is
/// monochromatic, or None when no word in the window qualifies (which
/// refutes only the window, never the theorem).
pub fn hj_witness<F: ColorMap>(
    f: &F,
    alphabet: &Alphabet,
    window: u32,
) -> Result<Option<HjWitness>> {
    hj_witness_where(f, alphabet, window, |_| true)
}

/// As [`hj_witness`], restricted to witnesses whose common color the
/// predicate admits; the refinement inductions search under constraints
/// this way.
pub fn hj_witness_where<F: ColorMap>(
    f: &F,
    alphabet: &Alphabet,
    window: u32,
    admit: impl Fn(Color) -> bool,
) -> Result<Option<HjWitness>> {
    'candidates: for p in variable_words(alphabet.k(), window) {
        let color = f.color_of(&p.instantiate(Cell::Letter(0)))?;
        if !admit(color) {
            continue;
        }
        for r in 1..alphabet.k() {
            if f.color_of(&p.instantiate(Cell::Letter(r)))? != color {
                continue 'candidates;
            }
        }
        return Ok(Some(HjWitness { p, color, window }));
    }
    Ok(None)
}

/// Least window N <= n_max such that every c-coloring of the star-free
/// words on [0, N) admits a witness, by exhausting colorings. A coloring
/// is decoded lazily from its index: the word at canonical index i >= 1
/// gets digit i-1 of the coloring index in base c (the unit's color is
/// irrelevant to witnesses and fixed at 0).
pub fn hj_number(k: u8, c: u64, n_max: u32) -> Result<u32> {
    if k == 0 || c == 0 {
        return Err(Error::InvalidInput("alphabet and color set must be nonempty".into()));
    }
    let alphabet = Alphabet::synthetic(k)?;
    for n in 1..=n_max {
        let cells = window_size(k, n)? - 1;
        let count = c
            .checked_pow(u32::try_from(cells).map_err(|_| Error::Overflow("coloring space"))?)
            .ok_or(Error::Overflow("coloring space"))?;
        let all_admit = (0..count)
            .into_par_iter()
            .try_fold(
                || true,
                |acc, idx| {
                    let f = IndexedColoring { k, c, window: n, index: idx };
                    Ok::<bool, Error>(acc && hj_witness(&f, &alphabet, n)?.is_some())
                },
            )
            .try_reduce(|| true, |a, b| Ok(a && b))?;
        if all_admit {
            return Ok(n);
        }
    }
    Err(Error::ExceedsBound { n_max })
}

/// The coloring at position `index` in the base-c enumeration of all
/// colorings of the window.
struct IndexedColoring {
    k: u8,
    c: u64,
    window: u32,
    index: u64,
}

impl ColorMap for IndexedColoring {
    fn color_count(&self) -> u64 {
        self.c
    }

    fn color_of(&self, w: &LocatedWord) -> Result<Color> {
        let i = crate::word::canonical_index(w, self.k, self.window)?;
        if i == 0 {
            return Ok(0);
        }
        Ok(self.index / self.c.pow((i - 1) as u32) % self.c)
    }
}
