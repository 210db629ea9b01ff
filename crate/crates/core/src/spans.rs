//! Block sequences and the finite span constructions over them: letter
//! spans, variable-word spans, finite sums and unions, and extracted
//! classical words. Every enumeration returns a duplicate-free list in
//! canonical ascending order so downstream artifacts are byte-stable.

use crate::alphabet::Alphabet;
use crate::coloring::{Color, ColorMap, SetColorMap};
use crate::error::{Error, Result};
use crate::word::{Cell, LocatedWord};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::ops::Deref;

/// Bound on how many blocks a span element may combine.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Arity {
    All,
    AtMost(u64),
}

impl Arity {
    pub fn admits(&self, n: usize) -> bool {
        match self {
            Arity::All => true,
            Arity::AtMost(r) => n as u64 <= *r,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Arity::AtMost(0) => Err(Error::InvalidInput("arity must be at least 1".into())),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Arity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Arity::All => write!(f, "all"),
            Arity::AtMost(r) => write!(f, "{r}"),
        }
    }
}

impl Serialize for Arity {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Arity::All => serializer.serialize_str("all"),
            Arity::AtMost(r) => serializer.serialize_u64(*r),
        }
    }
}

impl<'de> Deserialize<'de> for Arity {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct ArityVisitor;

        impl Visitor<'_> for ArityVisitor {
            type Value = Arity;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "\"all\" or a positive integer")
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Arity, E> {
                if v == 0 {
                    return Err(E::custom("arity must be at least 1"));
                }
                Ok(Arity::AtMost(v))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Arity, E> {
                if v == "all" {
                    Ok(Arity::All)
                } else {
                    Err(E::custom(format!("expected \"all\", got {v:?}")))
                }
            }
        }

        deserializer.deserialize_any(ArityVisitor)
    }
}

/// A strictly increasing list of located variable words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockSequence {
    items: Vec<LocatedWord>,
}

impl BlockSequence {
    pub fn new(items: Vec<LocatedWord>) -> Result<Self> {
        for w in &items {
            if !w.is_variable() {
                return Err(Error::InvalidInput(format!(
                    "block sequence element without star: {w:?}"
                )));
            }
        }
        check_increasing(&items)?;
        Ok(BlockSequence { items })
    }

    pub fn items(&self) -> &[LocatedWord] {
        &self.items
    }

    pub fn into_items(self) -> Vec<LocatedWord> {
        self.items
    }

    pub fn prefix(&self, n: usize) -> BlockSequence {
        BlockSequence { items: self.items[..n.min(self.items.len())].to_vec() }
    }
}

impl Deref for BlockSequence {
    type Target = [LocatedWord];

    fn deref(&self) -> &[LocatedWord] {
        &self.items
    }
}

/// A strictly increasing list of star-free nonempty located words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeakBlockSequence {
    items: Vec<LocatedWord>,
}

impl WeakBlockSequence {
    pub fn new(items: Vec<LocatedWord>) -> Result<Self> {
        for w in &items {
            if !w.is_plain_word() {
                return Err(Error::InvalidInput(format!(
                    "weak block sequence element must be a nonempty star-free word: {w:?}"
                )));
            }
        }
        check_increasing(&items)?;
        Ok(WeakBlockSequence { items })
    }

    pub fn items(&self) -> &[LocatedWord] {
        &self.items
    }
}

impl Deref for WeakBlockSequence {
    type Target = [LocatedWord];

    fn deref(&self) -> &[LocatedWord] {
        &self.items
    }
}

fn check_increasing(items: &[LocatedWord]) -> Result<()> {
    for pair in items.windows(2) {
        if !pair[0].precedes(&pair[1])? {
            return Err(Error::NotSeparated(format!(
                "blocks out of order: {:?} not before {:?}",
                pair[0], pair[1]
            )));
        }
    }
    Ok(())
}

/// A block sequence of finite sets: the max of each lies below the min of
/// the next.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinSetSequence {
    items: Vec<BTreeSet<u32>>,
}

impl FinSetSequence {
    pub fn new(items: Vec<BTreeSet<u32>>) -> Result<Self> {
        for pair in items.windows(2) {
            let (a, b) = (&pair[0], &pair[1]);
            match (a.iter().next_back(), b.iter().next()) {
                (Some(ma), Some(mb)) if ma < mb => {}
                (None, _) | (_, None) => return Err(Error::EmptySet),
                _ => {
                    return Err(Error::NotSeparated(format!(
                        "finite sets out of order: {a:?} not below {b:?}"
                    )))
                }
            }
        }
        if items.iter().any(|e| e.is_empty()) {
            return Err(Error::EmptySet);
        }
        Ok(FinSetSequence { items })
    }

    pub fn items(&self) -> &[BTreeSet<u32>] {
        &self.items
    }

    pub fn into_items(self) -> Vec<BTreeSet<u32>> {
        self.items
    }
}

impl Deref for FinSetSequence {
    type Target = [BTreeSet<u32>];

    fn deref(&self) -> &[BTreeSet<u32>] {
        &self.items
    }
}

/// Classical variable words: strings over the letters plus star, star
/// occurring at least once in each.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariableWordList {
    items: Vec<Vec<Cell>>,
}

impl VariableWordList {
    pub fn new(items: Vec<Vec<Cell>>) -> Result<Self> {
        for w in &items {
            if w.is_empty() {
                return Err(Error::EmptyOperand);
            }
            if !w.contains(&Cell::Star) {
                return Err(Error::InvalidInput(
                    "classical variable word must contain the star".into(),
                ));
            }
        }
        Ok(VariableWordList { items })
    }

    pub fn items(&self) -> &[Vec<Cell>] {
        &self.items
    }
}

impl Deref for VariableWordList {
    type Target = [Vec<Cell>];

    fn deref(&self) -> &[Vec<Cell>] {
        &self.items
    }
}

/// Which instantiations a span admits: letters only, or letters plus the
/// star with at least one star surviving.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpanMode {
    Letters,
    WithStar,
}

/// The instantiation set {p[a] : a in A} of a single variable word.
pub fn instantiations(p: &LocatedWord, alphabet: &Alphabet) -> Vec<LocatedWord> {
    (0..alphabet.k()).map(|r| p.instantiate(Cell::Letter(r))).collect()
}

/// The span of a block sequence: all ordered unions of at most `arity`
/// blocks (every block when `All`), each instantiated by a letter
/// (`Letters`) or by a letter or the star with at least one star
/// surviving (`WithStar`). Duplicate-free, canonically sorted.
pub fn span_located(
    x: &[LocatedWord],
    alphabet: &Alphabet,
    mode: SpanMode,
    arity: Arity,
) -> Result<Vec<LocatedWord>> {
    arity.validate()?;
    let mut out = BTreeSet::new();
    // stack of (next block index, word so far, blocks used, stars assigned)
    let mut stack = vec![(0usize, LocatedWord::unit(), 0usize, false)];
    while let Some((i, word, used, starred)) = stack.pop() {
        if i == x.len() {
            let keep = used > 0
                && match mode {
                    SpanMode::Letters => true,
                    SpanMode::WithStar => starred,
                };
            if keep {
                out.insert(word);
            }
            continue;
        }
        let more = arity.admits(used + 1);
        stack.push((i + 1, word.clone(), used, starred));
        if more {
            for r in 0..alphabet.k() {
                let w = word.union(&x[i].instantiate(Cell::Letter(r)))?;
                stack.push((i + 1, w, used + 1, starred));
            }
            if mode == SpanMode::WithStar {
                let w = word.union(&x[i])?;
                stack.push((i + 1, w, used + 1, true));
            }
        }
    }
    Ok(out.into_iter().collect())
}

/// All sums of nonempty subsets of `y` of size at most `arity`.
pub fn finite_sums(y: &BTreeSet<u64>, arity: Arity) -> Result<BTreeSet<u64>> {
    arity.validate()?;
    if y.len() > 24 {
        return Err(Error::Overflow("finite_sums over more than 24 elements"));
    }
    let items: Vec<u64> = y.iter().copied().collect();
    let mut out = BTreeSet::new();
    for mask in 1u64..1 << items.len() {
        let size = mask.count_ones() as usize;
        if !arity.admits(size) {
            continue;
        }
        let mut sum = 0u64;
        for (i, &v) in items.iter().enumerate() {
            if mask >> i & 1 == 1 {
                sum = sum.checked_add(v).ok_or(Error::Overflow("finite_sums"))?;
            }
        }
        out.insert(sum);
    }
    Ok(out)
}

/// All unions of nonempty subsequences of `x` of size at most `arity`.
pub fn finite_unions(x: &FinSetSequence, arity: Arity) -> Result<Vec<BTreeSet<u32>>> {
    arity.validate()?;
    if x.len() > 24 {
        return Err(Error::Overflow("finite_unions over more than 24 blocks"));
    }
    let mut out = BTreeSet::new();
    for mask in 1u64..1 << x.len() {
        let size = mask.count_ones() as usize;
        if !arity.admits(size) {
            continue;
        }
        let mut u = BTreeSet::new();
        for (i, e) in x.items().iter().enumerate() {
            if mask >> i & 1 == 1 {
                u.extend(e.iter().copied());
            }
        }
        out.insert(u);
    }
    Ok(out.into_iter().collect())
}

/// All concatenations w_{j_0}[x_0] ... w_{j_t}[x_t] over index subsets
/// j_0 < ... < j_t of size at most `max_blocks`, instantiated per `mode`.
pub fn extracted_words(
    ws: &VariableWordList,
    alphabet: &Alphabet,
    max_blocks: u64,
    mode: SpanMode,
) -> Result<Vec<Vec<Cell>>> {
    if ws.is_empty() {
        return Err(Error::EmptyOperand);
    }
    let arity = Arity::AtMost(max_blocks);
    arity.validate()?;
    let mut out = BTreeSet::new();
    let mut stack: Vec<(usize, Vec<Cell>, usize, bool)> = vec![(0, Vec::new(), 0, false)];
    while let Some((i, word, used, starred)) = stack.pop() {
        if i == ws.len() {
            let keep = used > 0
                && match mode {
                    SpanMode::Letters => true,
                    SpanMode::WithStar => starred,
                };
            if keep {
                out.insert(word);
            }
            continue;
        }
        stack.push((i + 1, word.clone(), used, starred));
        if arity.admits(used + 1) {
            for r in 0..alphabet.k() {
                let mut w = word.clone();
                w.extend(ws[i].iter().map(|&c| if c == Cell::Star { Cell::Letter(r) } else { c }));
                stack.push((i + 1, w, used + 1, starred));
            }
            if mode == SpanMode::WithStar {
                let mut w = word.clone();
                w.extend(ws[i].iter().copied());
                stack.push((i + 1, w, used + 1, true));
            }
        }
    }
    Ok(out.into_iter().collect())
}

/// The common color of a nonempty family, or None when two members
/// differ; the empty family is an error, distinct from inhomogeneity.
pub fn is_homogeneous<F: ColorMap>(f: &F, family: &[LocatedWord]) -> Result<Option<Color>> {
    let mut iter = family.iter();
    let first = match iter.next() {
        Some(w) => f.color_of(w)?,
        None => return Err(Error::EmptySet),
    };
    for w in iter {
        if f.color_of(w)? != first {
            return Ok(None);
        }
    }
    Ok(Some(first))
}

/// Set-coloring analogue of [`is_homogeneous`].
pub fn is_homogeneous_sets<G: SetColorMap>(
    g: &G,
    family: &[BTreeSet<u32>],
) -> Result<Option<Color>> {
    let mut iter = family.iter();
    let first = match iter.next() {
        Some(e) => g.color_of(e)?,
        None => return Err(Error::EmptySet),
    };
    for e in iter {
        if g.color_of(e)? != first {
            return Ok(None);
        }
    }
    Ok(Some(first))
}

/// Duplicate check used by property tests and the verifier.
pub fn all_distinct<T: std::hash::Hash + Eq>(items: &[T]) -> bool {
    let mut seen = HashSet::with_capacity(items.len());
    items.iter().all(|x| seen.insert(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::ColorSet;
    use crate::coloring::Coloring;

    fn ab() -> Alphabet {
        Alphabet::ab()
    }

    fn blocks(specs: &[&str]) -> BlockSequence {
        BlockSequence::new(specs.iter().map(|s| ab().parse_word(s).unwrap()).collect()).unwrap()
    }

    #[test]
    fn block_sequence_validation() {
        assert!(BlockSequence::new(vec![ab().parse_word("{0:a}").unwrap()]).is_err());
        let out_of_order =
            vec![ab().parse_word("{2:*}").unwrap(), ab().parse_word("{0:*}").unwrap()];
        assert!(BlockSequence::new(out_of_order).is_err());
        assert!(blocks(&["{0:*}", "{1:*}"]).len() == 2);
    }

    #[test]
    fn span_letters_counts_and_content() {
        let x = blocks(&["{0:*}", "{1:*}"]);
        let span = span_located(&x, &ab(), SpanMode::Letters, Arity::All).unwrap();
        assert_eq!(span.len(), 8);
        assert!(all_distinct(&span));
        assert!(span.windows(2).all(|p| p[0] < p[1]));
        let singles = span_located(&x, &ab(), SpanMode::Letters, Arity::AtMost(1)).unwrap();
        assert_eq!(singles.len(), 4);
        let one = blocks(&["{0:*}"]);
        let span1 = span_located(&one, &ab(), SpanMode::Letters, Arity::All).unwrap();
        assert_eq!(
            span1,
            vec![ab().parse_word("{0:a}").unwrap(), ab().parse_word("{0:b}").unwrap()]
        );
    }

    #[test]
    fn span_with_star_is_variable_intersection() {
        let x = blocks(&["{0:*}", "{1:*,2:a}", "{4:*}"]);
        let starred = span_located(&x, &ab(), SpanMode::WithStar, Arity::All).unwrap();
        assert!(starred.iter().all(|w| w.is_variable()));
        // double enumeration: full assignments over letters plus star,
        // then keep the variable words
        let mut oracle = BTreeSet::new();
        let cells = [Cell::Letter(0), Cell::Letter(1), Cell::Star];
        for c0 in 0..4 {
            for c1 in 0..4 {
                for c2 in 0..4 {
                    let choice = [c0, c1, c2];
                    if choice.iter().all(|&c| c == 3) {
                        continue;
                    }
                    let mut w = LocatedWord::unit();
                    for (i, &c) in choice.iter().enumerate() {
                        if c < 3 {
                            w = w.union(&x[i].instantiate(cells[c])).unwrap();
                        }
                    }
                    if w.is_variable() {
                        oracle.insert(w);
                    }
                }
            }
        }
        assert_eq!(starred, oracle.into_iter().collect::<Vec<_>>());
    }

    #[test]
    fn finite_sums_examples() {
        let y: BTreeSet<u64> = [1, 2].into_iter().collect();
        assert_eq!(
            finite_sums(&y, Arity::All).unwrap(),
            [1, 2, 3].into_iter().collect::<BTreeSet<u64>>()
        );
        let y: BTreeSet<u64> = [1, 2, 4].into_iter().collect();
        assert_eq!(
            finite_sums(&y, Arity::All).unwrap(),
            (1..=7).collect::<BTreeSet<u64>>()
        );
        assert_eq!(
            finite_sums(&y, Arity::AtMost(2)).unwrap(),
            [1, 2, 3, 4, 5, 6].into_iter().collect::<BTreeSet<u64>>()
        );
    }

    #[test]
    fn finite_unions_examples() {
        let x = FinSetSequence::new(vec![
            [0].into_iter().collect(),
            [1].into_iter().collect(),
            [2].into_iter().collect(),
        ])
        .unwrap();
        assert_eq!(finite_unions(&x, Arity::All).unwrap().len(), 7);
        assert_eq!(finite_unions(&x, Arity::AtMost(2)).unwrap().len(), 6);
        let pair = FinSetSequence::new(vec![
            [0, 1].into_iter().collect(),
            [3].into_iter().collect(),
        ])
        .unwrap();
        let fu = finite_unions(&pair, Arity::All).unwrap();
        assert_eq!(
            fu,
            vec![
                [0, 1].into_iter().collect::<BTreeSet<u32>>(),
                [0, 1, 3].into_iter().collect(),
                [3].into_iter().collect(),
            ]
        );
        assert!(FinSetSequence::new(vec![
            [0, 3].into_iter().collect(),
            [1].into_iter().collect(),
        ])
        .is_err());
    }

    #[test]
    fn extracted_words_examples() {
        let a_only = Alphabet::new(&['a'], '*').unwrap();
        let ws = VariableWordList::new(vec![
            vec![Cell::Star],
            vec![Cell::Star, Cell::Star],
        ])
        .unwrap();
        let words = extracted_words(&ws, &a_only, 2, SpanMode::Letters).unwrap();
        let rendered: Vec<String> =
            words.iter().map(|w| a_only.render_classical(w)).collect();
        assert_eq!(rendered, vec!["a", "aa", "aaa"]);
        let single = VariableWordList::new(vec![vec![Cell::Star]]).unwrap();
        let starred = extracted_words(&single, &ab(), 1, SpanMode::WithStar).unwrap();
        assert_eq!(starred, vec![vec![Cell::Star]]);
    }

    #[test]
    fn homogeneity_examples() {
        let parity = Coloring::parity(ab(), 3);
        let constant = Coloring::constant(ab(), ColorSet::new(2).unwrap(), 3, 0);
        let s1 = vec![ab().parse_word("{0:a}").unwrap(), ab().parse_word("{1:b}").unwrap()];
        assert_eq!(is_homogeneous(&parity, &s1).unwrap(), Some(1));
        assert_eq!(is_homogeneous(&constant, &s1).unwrap(), Some(0));
        let s2 = vec![
            ab().parse_word("{0:a}").unwrap(),
            ab().parse_word("{0:a,1:b}").unwrap(),
        ];
        assert_eq!(is_homogeneous(&parity, &s2).unwrap(), None);
        assert!(matches!(is_homogeneous(&parity, &[]), Err(Error::EmptySet)));
    }

    #[test]
    fn arity_serde_roundtrip() {
        assert_eq!(serde_json::to_string(&Arity::All).unwrap(), "\"all\"");
        assert_eq!(serde_json::to_string(&Arity::AtMost(2)).unwrap(), "2");
        assert_eq!(serde_json::from_str::<Arity>("\"all\"").unwrap(), Arity::All);
        assert_eq!(serde_json::from_str::<Arity>("3").unwrap(), Arity::AtMost(3));
        assert!(serde_json::from_str::<Arity>("0").is_err());
        assert!(serde_json::from_str::<Arity>("\"some\"").is_err());
    }
}
