//! Thinness, half-matches and full-matches as decidable checkers on
//! finite windows, the bounded refinement searches behind them, a
//! desk-scale Carlson solver emitting verifiable certificates, and the
//! bounded finite-union searches.
//!
//! Every search here is finitized: block sequences have target lengths,
//! quantifiers range over explicit windows, and running out of room is
//! reported as exhaustion, never as a refutation of the theorems.

use crate::alphabet::Alphabet;
use crate::coloring::{Color, ColorInterner, ColorMap, Coloring, FnColorMap, SetColorMap};
use crate::error::{Error, Result};
use crate::hales_jewett::hj_witness_where;
use crate::spans::{
    finite_unions, is_homogeneous, span_located, Arity, BlockSequence, FinSetSequence, SpanMode,
};
use crate::transport::{finset_to_nat, iota_located};
use crate::word::{variable_words, variable_words_in_range, Cell, LocatedWord};
use rayon::prelude::*;
use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet, HashMap};

/// Outcome of a universal check: either it holds, or here is the least
/// violating word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckResult {
    Holds,
    Fails { counterexample: LocatedWord },
}

impl CheckResult {
    pub fn holds(&self) -> bool {
        matches!(self, CheckResult::Holds)
    }
}

/// Which matching property a structure claims.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatchKind {
    /// Every span element of color i is absorbed with color i.
    Half(Color),
    /// Every span element is absorbed with its own color.
    HalfAll,
    /// Every span element is absorbed by some p whose instantiations
    /// already carry the element's color.
    Full,
}

/// A finite absorber set F together with the tail it matches.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchStructure {
    pub f_set: Vec<LocatedWord>,
    pub y: BlockSequence,
    pub kind: MatchKind,
    pub window: u32,
}

impl MatchStructure {
    pub fn new(
        f_set: Vec<LocatedWord>,
        y: BlockSequence,
        kind: MatchKind,
        window: u32,
    ) -> Result<Self> {
        for p in &f_set {
            if !p.is_variable() {
                return Err(Error::InvalidInput("absorber set must hold variable words".into()));
            }
            if let Some(first) = y.items().first() {
                if !p.precedes(first)? {
                    return Err(Error::NotSeparated(format!(
                        "absorber {p:?} does not precede the tail"
                    )));
                }
            }
            if p.max_pos().map_or(false, |m| m >= window) {
                return Err(Error::OutOfWindow { pos: p.max_pos().unwrap(), window });
            }
        }
        if let Some(last) = y.items().last() {
            if last.max_pos().map_or(false, |m| m >= window) {
                return Err(Error::OutOfWindow { pos: last.max_pos().unwrap(), window });
            }
        }
        Ok(MatchStructure { f_set, y, kind, window })
    }
}

/// A block sequence whose letter span is monochromatic, bound to the
/// coloring it certifies by content hash.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CarlsonCertificate {
    pub coloring_id: String,
    pub x: BlockSequence,
    pub color: Color,
    pub arity: Arity,
    pub window: u32,
}

/// Result of the full-match search: the structure itself, or the honest
/// partial progress of a thin reduction that could not be completed
/// within the window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FullMatchOutcome {
    Full(MatchStructure),
    ThinReduction { color: Color, thin: BlockSequence },
}

/// Y is weakly thin for i when every variable span element has an
/// instantiation avoiding i; returns the least violator otherwise.
pub fn is_weakly_thin<F: ColorMap>(
    f: &F,
    y: &BlockSequence,
    i: Color,
    alphabet: &Alphabet,
) -> Result<CheckResult> {
    for p in span_located(y, alphabet, SpanMode::WithStar, Arity::All)? {
        let mut avoids = false;
        for r in 0..alphabet.k() {
            if f.color_of(&p.instantiate(Cell::Letter(r)))? != i {
                avoids = true;
                break;
            }
        }
        if !avoids {
            return Ok(CheckResult::Fails { counterexample: p });
        }
    }
    Ok(CheckResult::Holds)
}

/// Y is thin for i when no letter span element has color i.
pub fn is_thin<F: ColorMap>(
    f: &F,
    y: &BlockSequence,
    i: Color,
    alphabet: &Alphabet,
) -> Result<CheckResult> {
    for p in span_located(y, alphabet, SpanMode::Letters, Arity::All)? {
        if f.color_of(&p)? == i {
            return Ok(CheckResult::Fails { counterexample: p });
        }
    }
    Ok(CheckResult::Holds)
}

/// Builds a block sequence inside the variable span of X that is thin
/// for i, by induction: each round applies Hales-Jewett over the
/// remaining blocks to the tuple coloring recording every extension of
/// the span built so far, restricted to tuples avoiding i throughout.
///
/// Weak thinness of X is not checked up front (the constrained search
/// can succeed without it); it is consulted only to tell a genuine
/// obstruction from a window that is merely too small.
pub fn thin_refine<F: ColorMap>(
    f: &F,
    x: &BlockSequence,
    i: Color,
    target_len: usize,
    alphabet: &Alphabet,
) -> Result<BlockSequence> {
    let mut out: Vec<LocatedWord> = Vec::new();
    let mut used = 0usize;
    while out.len() < target_len {
        let tail = BlockSequence::new(x.items()[used.min(x.len())..].to_vec())?;
        if tail.is_empty() {
            return Err(diagnose_thin_failure(f, x, i, alphabet)?);
        }
        // prefix span plus the unit, in a fixed order defining the tuple
        let mut prefix_span = vec![LocatedWord::unit()];
        prefix_span.extend(span_located(&out, alphabet, SpanMode::Letters, Arity::All)?);

        let interner = ColorInterner::new();
        let admissible: RefCell<Vec<bool>> = RefCell::new(Vec::new());
        let g = FnColorMap::new(0, |p: &LocatedWord| {
            let located = iota_located(&tail, p)?;
            let mut tuple = Vec::with_capacity(prefix_span.len());
            let mut ok = true;
            for q in &prefix_span {
                let c = f.color_of(&q.union(&located)?)?;
                ok &= c != i;
                tuple.push(c);
            }
            let id = interner.intern(tuple);
            let mut adm = admissible.borrow_mut();
            if adm.len() as u64 <= id {
                adm.resize(id as usize + 1, false);
            }
            adm[id as usize] = ok;
            Ok(id)
        });
        let witness = hj_witness_where(&g, alphabet, tail.len() as u32, |c| {
            admissible.borrow().get(c as usize).copied().unwrap_or(false)
        })?;
        match witness {
            Some(w) => {
                let block = iota_located(&tail, &w.p)?;
                used += w.p.max_pos().expect("variable word is nonempty") as usize + 1;
                out.push(block);
            }
            None => return Err(diagnose_thin_failure(f, x, i, alphabet)?),
        }
    }
    let seq = BlockSequence::new(out)?;
    match is_thin(f, &seq, i, alphabet)? {
        CheckResult::Holds => Ok(seq),
        CheckResult::Fails { counterexample } => Err(Error::VerificationFailed(format!(
            "refined sequence is not thin at {counterexample:?}"
        ))),
    }
}

fn diagnose_thin_failure<F: ColorMap>(
    f: &F,
    x: &BlockSequence,
    i: Color,
    alphabet: &Alphabet,
) -> Result<Error> {
    Ok(match is_weakly_thin(f, x, i, alphabet)? {
        CheckResult::Fails { counterexample } => Error::NotWeaklyThin {
            color: i,
            witness: format!("{counterexample:?}"),
        },
        CheckResult::Holds => Error::Exhausted,
    })
}

/// Evaluates the universal statement of the structure's kind over the
/// letter span of its tail, returning the least violating span element.
pub fn check_match<F: ColorMap>(
    f: &F,
    m: &MatchStructure,
    alphabet: &Alphabet,
) -> Result<CheckResult> {
    match full_hits(f, m, alphabet)?.into_iter().next() {
        Some((q, _)) => Ok(CheckResult::Fails { counterexample: q }),
        None => Ok(CheckResult::Holds),
    }
}

/// All tail span elements violating the structure's claim, with their
/// colors, in canonical order.
fn full_hits<F: ColorMap>(
    f: &F,
    m: &MatchStructure,
    alphabet: &Alphabet,
) -> Result<Vec<(LocatedWord, Color)>> {
    let mut bad = Vec::new();
    for q in span_located(&m.y, alphabet, SpanMode::Letters, Arity::All)? {
        let cq = f.color_of(&q)?;
        let target = match m.kind {
            MatchKind::Half(i) => {
                if cq != i {
                    continue;
                }
                i
            }
            MatchKind::HalfAll | MatchKind::Full => cq,
        };
        let mut absorbed = false;
        'absorbers: for p in &m.f_set {
            for r in 0..alphabet.k() {
                let pa = p.instantiate(Cell::Letter(r));
                if f.color_of(&pa.union(&q)?)? != target {
                    continue 'absorbers;
                }
                if m.kind == MatchKind::Full && f.color_of(&pa)? != target {
                    continue 'absorbers;
                }
            }
            absorbed = true;
            break;
        }
        if !absorbed {
            bad.push((q, cq));
        }
    }
    Ok(bad)
}

/// The dichotomy behind the half-match lemma, at finite scale. First a
/// scan for a short prefix F of X that already absorbs everything in
/// color i (the lemma's second case); failing that, the first-case
/// construction: grow p_0 < p_1 < ... where each p_n[a_n] can be avoided
/// against the span built so far, pair them into q_n = p_2n u
/// p_2n+1[a_2n+1], refine the pairs to a thin sequence and return its
/// head against its tail (the half-match is then vacuous). Getting stuck
/// growing the p_n is itself a second-case witness for the stuck prefix.
pub fn find_half_match<F: ColorMap>(
    f: &F,
    x: &BlockSequence,
    i: Color,
    tail_len: usize,
    alphabet: &Alphabet,
) -> Result<MatchStructure> {
    let window = sequence_window(x);
    // second case on prefixes of X itself
    for t in 1..=x.len().saturating_sub(1).min(3) {
        let prefix = BlockSequence::new(x.items()[..t].to_vec())?;
        let rest = BlockSequence::new(x.items()[t..].to_vec())?;
        if absorbs_all(f, &prefix, &rest, i, alphabet)? {
            return MatchStructure::new(
                span_located(&prefix, alphabet, SpanMode::WithStar, Arity::All)?,
                rest,
                MatchKind::Half(i),
                window,
            );
        }
    }

    // first case: grow the avoidance sequence
    let mut ps: Vec<LocatedWord> = Vec::new();
    let mut instantiated: Vec<LocatedWord> = Vec::new(); // p_n[a_n]
    let pairs_needed = 2 * (tail_len + 1).max(2);
    while ps.len() < pairs_needed {
        let past = instantiated.last().map_or(0, |p| p.max_pos().unwrap() + 1);
        let avail: Vec<LocatedWord> = x
            .items()
            .iter()
            .filter(|b| b.min_pos().unwrap() >= past)
            .cloned()
            .collect();
        if avail.is_empty() {
            return Err(Error::Exhausted);
        }
        let avail = BlockSequence::new(avail)?;
        let prefix_span =
            span_located(&ps_sequence(&ps)?, alphabet, SpanMode::WithStar, Arity::All)?;
        let mut found = None;
        'candidates: for q in span_located(&avail, alphabet, SpanMode::WithStar, Arity::All)? {
            for r in 0..alphabet.k() {
                let qa = q.instantiate(Cell::Letter(r));
                let mut all_avoid = true;
                for p in &prefix_span {
                    let mut avoids = false;
                    for rb in 0..alphabet.k() {
                        if f.color_of(&p.instantiate(Cell::Letter(rb)).union(&qa)?)? != i {
                            avoids = true;
                            break;
                        }
                    }
                    if !avoids {
                        all_avoid = false;
                        break;
                    }
                }
                if all_avoid {
                    found = Some((q, qa));
                    break 'candidates;
                }
            }
        }
        match found {
            Some((q, qa)) => {
                ps.push(q);
                instantiated.push(qa);
            }
            None => {
                // stuck: the current prefix is a second-case witness
                if ps.is_empty() {
                    return Err(Error::Exhausted);
                }
                let seq = ps_sequence(&ps)?;
                let past = instantiated.last().unwrap().max_pos().unwrap() + 1;
                let rest: Vec<LocatedWord> = x
                    .items()
                    .iter()
                    .filter(|b| b.min_pos().unwrap() >= past)
                    .cloned()
                    .collect();
                return MatchStructure::new(
                    span_located(&seq, alphabet, SpanMode::WithStar, Arity::All)?,
                    BlockSequence::new(rest)?,
                    MatchKind::Half(i),
                    window,
                );
            }
        }
    }

    // pair up and refine to a thin sequence
    let mut pairs = Vec::new();
    for n in 0..ps.len() / 2 {
        pairs.push(ps[2 * n].union(&instantiated[2 * n + 1])?);
    }
    let thin = thin_refine(f, &BlockSequence::new(pairs)?, i, tail_len + 1, alphabet)?;
    let head = thin.items()[0].clone();
    let tail = BlockSequence::new(thin.items()[1..].to_vec())?;
    MatchStructure::new(vec![head], tail, MatchKind::Half(i), window)
}

fn ps_sequence(ps: &[LocatedWord]) -> Result<BlockSequence> {
    BlockSequence::new(ps.to_vec())
}

/// Second-case predicate: every variable span element of the remainder,
/// under every instantiation, is absorbed into color i by some variable
/// span element of the prefix.
fn absorbs_all<F: ColorMap>(
    f: &F,
    prefix: &BlockSequence,
    rest: &BlockSequence,
    i: Color,
    alphabet: &Alphabet,
) -> Result<bool> {
    let absorbers = span_located(prefix, alphabet, SpanMode::WithStar, Arity::All)?;
    for q in span_located(rest, alphabet, SpanMode::WithStar, Arity::All)? {
        for r in 0..alphabet.k() {
            let qa = q.instantiate(Cell::Letter(r));
            let mut absorbed = false;
            'absorbers: for p in &absorbers {
                for rb in 0..alphabet.k() {
                    if f.color_of(&p.instantiate(Cell::Letter(rb)).union(&qa)?)? != i {
                        continue 'absorbers;
                    }
                }
                absorbed = true;
                break;
            }
            if !absorbed {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Half-matches for every occurring color in sequence, accumulating the
/// absorber sets; the leftover tail is half-matched by the union for
/// every color at once.
fn find_half_match_all<F: ColorMap>(
    f: &F,
    x: &BlockSequence,
    tail_len: usize,
    alphabet: &Alphabet,
) -> Result<MatchStructure> {
    let window = sequence_window(x);
    let mut occurring = BTreeSet::new();
    for q in span_located(x, alphabet, SpanMode::Letters, Arity::All)? {
        occurring.insert(f.color_of(&q)?);
    }
    let mut f_set: Vec<LocatedWord> = Vec::new();
    let mut y = x.clone();
    for i in occurring {
        let m = find_half_match(f, &y, i, tail_len, alphabet)?;
        f_set.extend(m.f_set);
        y = m.y;
    }
    f_set.sort();
    f_set.dedup();
    // absorbers collected from later rounds may sit past the tail's
    // start; keep only the ones preceding the whole tail, as later ones
    // were absorbers for colors already handled
    if let Some(first) = y.items().first() {
        f_set.retain(|p| p.precedes(first).unwrap_or(false));
    }
    MatchStructure::new(f_set, y, MatchKind::HalfAll, window)
}

/// The full-match search: repeated half-match-all rounds against product
/// colorings that record each element's absorber, with an empirical
/// full-match check against the original coloring after every round; if
/// no full match emerges, the most frequent color among the failing span
/// elements is refined away by a thin reduction and the search restarts
/// on the thin sequence (the outer induction on the number of colors).
pub fn find_full_match<F: ColorMap>(
    f: &F,
    x: &BlockSequence,
    tail_len: usize,
    alphabet: &Alphabet,
) -> Result<FullMatchOutcome> {
    let window = sequence_window(x);
    let mut current = x.clone();
    let mut last_thin: Option<(Color, BlockSequence)> = None;
    let attempts = f.color_count().min(8) + 1;
    for _ in 0..attempts {
        match full_match_rounds(f, &current, tail_len, alphabet, window) {
            Ok(structure) => return Ok(FullMatchOutcome::Full(structure)),
            Err(RoundFailure::Obstructed(colors)) => {
                let mut tally: BTreeMap<Color, usize> = BTreeMap::new();
                for c in colors {
                    *tally.entry(c).or_insert(0) += 1;
                }
                let mut by_count: Vec<(usize, Color)> =
                    tally.into_iter().map(|(c, n)| (n, c)).collect();
                by_count.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
                let mut reduced = false;
                for (_, i) in by_count {
                    match thin_refine(f, &current, i, tail_len + 1, alphabet) {
                        Ok(thin) => {
                            last_thin = Some((i, thin.clone()));
                            current = thin;
                            reduced = true;
                            break;
                        }
                        Err(Error::NotWeaklyThin { .. }) | Err(Error::Exhausted) => continue,
                        Err(e) => return Err(e),
                    }
                }
                if !reduced {
                    return match last_thin {
                        Some((color, thin)) => Ok(FullMatchOutcome::ThinReduction { color, thin }),
                        None => Err(Error::Exhausted),
                    };
                }
            }
            Err(RoundFailure::Fatal(e)) => return Err(e),
        }
    }
    match last_thin {
        Some((color, thin)) => Ok(FullMatchOutcome::ThinReduction { color, thin }),
        None => Err(Error::Exhausted),
    }
}

enum RoundFailure {
    /// Colors of the span elements no candidate absorber set could cover.
    Obstructed(Vec<Color>),
    Fatal(Error),
}

impl From<Error> for RoundFailure {
    fn from(e: Error) -> Self {
        RoundFailure::Fatal(e)
    }
}

fn full_match_rounds<F: ColorMap>(
    f: &F,
    x: &BlockSequence,
    tail_len: usize,
    alphabet: &Alphabet,
    window: u32,
) -> std::result::Result<MatchStructure, RoundFailure> {
    const MAX_ROUNDS: usize = 2;
    // f_s as a table over the current span; colors are interner ids
    let mut table: HashMap<LocatedWord, Color> = HashMap::new();
    for q in span_located(x, alphabet, SpanMode::Letters, Arity::All)? {
        let c = f.color_of(&q)?;
        table.insert(q, c);
    }
    let mut y = x.clone();
    let mut round_sets: Vec<Vec<LocatedWord>> = Vec::new();
    let mut obstructions: Vec<Color> = Vec::new();
    let interner = ColorInterner::new();
    for _ in 0..MAX_ROUNDS {
        let fs = FnColorMap::new(0, |q: &LocatedWord| {
            table
                .get(q)
                .copied()
                .ok_or_else(|| Error::WindowOverflow(format!("{q:?} outside the round table")))
        });
        let m = match find_half_match_all(&fs, &y, tail_len, alphabet) {
            Ok(m) => m,
            // the window ran out mid-round; fall back on the
            // obstructions already collected rather than giving up
            Err(Error::Exhausted) if !obstructions.is_empty() => {
                return Err(RoundFailure::Obstructed(obstructions))
            }
            Err(e) => return Err(RoundFailure::Fatal(e)),
        };
        round_sets.push(m.f_set.clone());
        let next_y = m.y.clone();

        // empirical stopping check against the original coloring: the
        // span of every selection of one absorber per round
        let f_cand = selection_span(&round_sets, alphabet)?;
        if !f_cand.is_empty() {
            let candidate =
                MatchStructure::new(f_cand, next_y.clone(), MatchKind::Full, window)?;
            let hits = full_hits(f, &candidate, alphabet)?;
            if hits.is_empty() {
                return Ok(candidate);
            }
            obstructions.extend(hits.into_iter().map(|(_, c)| c));
        }

        // product coloring f_{s+1}(q) = <least absorber, f_s(q)>
        let mut next_table = HashMap::new();
        for q in span_located(&next_y, alphabet, SpanMode::Letters, Arity::All)? {
            let cq = *table
                .get(&q)
                .ok_or_else(|| Error::WindowOverflow(format!("{q:?} outside the round table")))?;
            let mut absorber = None;
            'ps: for p in &m.f_set {
                for r in 0..alphabet.k() {
                    let u = p.instantiate(Cell::Letter(r)).union(&q)?;
                    if table.get(&u).copied() != Some(cq) {
                        continue 'ps;
                    }
                }
                absorber = Some(p.clone());
                break;
            }
            let p = match absorber {
                Some(p) => p,
                None if !obstructions.is_empty() => {
                    return Err(RoundFailure::Obstructed(obstructions))
                }
                None => return Err(RoundFailure::Fatal(Error::Exhausted)),
            };
            let id = interner.intern(vec![
                crate::word::extended_index(&p, alphabet.k(), window)?,
                cq,
            ]);
            next_table.insert(q, id);
        }
        table = next_table;
        y = next_y;
    }
    if obstructions.is_empty() {
        Err(RoundFailure::Fatal(Error::Exhausted))
    } else {
        Err(RoundFailure::Obstructed(obstructions))
    }
}

/// The union over all ways of picking one absorber per round of the
/// variable span of the picked sequence, deduplicated and sorted.
fn selection_span(round_sets: &[Vec<LocatedWord>], alphabet: &Alphabet) -> Result<Vec<LocatedWord>> {
    let mut selections: Vec<Vec<LocatedWord>> = vec![Vec::new()];
    for set in round_sets {
        let mut next = Vec::new();
        for sel in &selections {
            for p in set {
                let ordered = sel.last().map_or(Ok(true), |prev: &LocatedWord| prev.precedes(p));
                if ordered? {
                    let mut s = sel.clone();
                    s.push(p.clone());
                    next.push(s);
                }
            }
        }
        if next.len() > 4096 {
            return Err(Error::Exhausted);
        }
        selections = next;
    }
    let mut out = BTreeSet::new();
    for sel in selections {
        let seq = BlockSequence::new(sel)?;
        out.extend(span_located(&seq, alphabet, SpanMode::WithStar, Arity::All)?);
    }
    Ok(out.into_iter().collect())
}

fn sequence_window(x: &BlockSequence) -> u32 {
    x.items().last().and_then(|b| b.max_pos()).map_or(0, |m| m + 1)
}

/// Searches for m blocks in the window whose arity-bounded letter span
/// is monochromatic, by depth-first search over variable words in
/// canonical order with incremental homogeneity pruning. The first
/// solution in order is the canonical least; parallelism partitions on
/// the first block and keeps the least find. The certificate is
/// re-verified by independent span enumeration before it is returned.
pub fn carlson_search(
    f: &Coloring,
    m: usize,
    arity: Arity,
    window: u32,
) -> Result<CarlsonCertificate> {
    arity.validate()?;
    if m == 0 {
        return Err(Error::InvalidInput("at least one block is required".into()));
    }
    let alphabet = f.alphabet().clone();
    let firsts: Vec<LocatedWord> = variable_words(alphabet.k(), window).collect();
    let found = firsts
        .par_iter()
        .find_map_first(|b| {
            let mut state = DfsState { blocks: Vec::new(), span: Vec::new(), color: None };
            match extend_blocks(f, &alphabet, m, arity, window, b, &mut state) {
                Ok(Some(hit)) => Some(Ok(hit)),
                Ok(None) => None,
                Err(e) => Some(Err(e)),
            }
        })
        .transpose()?;
    let (x, color) = found.ok_or(Error::Exhausted)?;
    let x = BlockSequence::new(x)?;
    let span = span_located(&x, &alphabet, SpanMode::Letters, arity)?;
    match is_homogeneous(f, &span)? {
        Some(c) if c == color => Ok(CarlsonCertificate {
            coloring_id: f.content_hash(),
            x,
            color,
            arity,
            window,
        }),
        other => Err(Error::VerificationFailed(format!(
            "search result disagrees with span enumeration: {other:?} vs {color}"
        ))),
    }
}

struct DfsState {
    blocks: Vec<LocatedWord>,
    /// span elements built so far with their block counts
    span: Vec<(LocatedWord, usize)>,
    color: Option<Color>,
}

/// Tries block as the next choice: extends the tracked span by every
/// union with its instantiations, pruning on the first color mismatch,
/// then recurses over later candidates. State is restored on backtrack.
fn extend_blocks(
    f: &Coloring,
    alphabet: &Alphabet,
    m: usize,
    arity: Arity,
    window: u32,
    block: &LocatedWord,
    state: &mut DfsState,
) -> Result<Option<(Vec<LocatedWord>, Color)>> {
    let saved_color = state.color;
    let mut added = Vec::new();
    let base: Vec<(LocatedWord, usize)> = std::iter::once((LocatedWord::unit(), 0))
        .chain(state.span.iter().cloned())
        .collect();
    for (q, used) in base {
        if !arity.admits(used + 1) {
            continue;
        }
        for r in 0..alphabet.k() {
            let w = q.union(&block.instantiate(Cell::Letter(r)))?;
            let c = f.color_of(&w)?;
            match state.color {
                None => state.color = Some(c),
                Some(existing) if existing != c => {
                    state.color = saved_color;
                    return Ok(None);
                }
                _ => {}
            }
            added.push((w, used + 1));
        }
    }
    state.blocks.push(block.clone());
    state.span.extend(added.iter().cloned());
    let result = if state.blocks.len() == m {
        Ok(Some((state.blocks.clone(), state.color.expect("nonempty span has a color"))))
    } else {
        let start = block.max_pos().expect("variable word is nonempty") + 1;
        let mut found = None;
        for next in variable_words_in_range(alphabet.k(), start, window) {
            if let Some(hit) = extend_blocks(f, alphabet, m, arity, window, &next, state)? {
                found = Some(hit);
                break;
            }
        }
        Ok(found)
    };
    state.span.truncate(state.span.len() - added.len());
    state.blocks.pop();
    state.color = saved_color;
    result
}

/// Finds m pairwise-below finite unions of X whose arity-bounded union
/// span is monochromatic, candidates ordered by their binary encoding.
pub fn fu_homog_search<G: SetColorMap>(
    g: &G,
    x: &FinSetSequence,
    m: usize,
    arity: Arity,
) -> Result<FinSetSequence> {
    arity.validate()?;
    if m == 0 {
        return Err(Error::InvalidInput("at least one block is required".into()));
    }
    let candidates = fu_candidates(x, arity)?;
    let mut chosen: Vec<BTreeSet<u32>> = Vec::new();
    let mut acc: Vec<(BTreeSet<u32>, usize)> = Vec::new();
    if fu_extend(g, &candidates, m, arity, &mut chosen, &mut acc, None)? {
        FinSetSequence::new(chosen)
    } else {
        Err(Error::Exhausted)
    }
}

/// Iterated form: one sequence of m blocks plus, per coloring, the least
/// offset past which the tail's union span is monochromatic.
pub fn fu_homog_search_iterated(
    gs: &[&dyn SetColorMap],
    x: &FinSetSequence,
    m: usize,
    arity: Arity,
) -> Result<(FinSetSequence, Vec<usize>)> {
    arity.validate()?;
    if gs.is_empty() {
        return Err(Error::InvalidInput("at least one coloring is required".into()));
    }
    let candidates = fu_candidates(x, arity)?;
    let mut chosen: Vec<BTreeSet<u32>> = Vec::new();
    if let Some(offsets) = fu_extend_iterated(gs, &candidates, m, arity, &mut chosen)? {
        Ok((FinSetSequence::new(chosen)?, offsets))
    } else {
        Err(Error::Exhausted)
    }
}

fn fu_candidates(x: &FinSetSequence, _arity: Arity) -> Result<Vec<BTreeSet<u32>>> {
    let mut all = finite_unions(x, Arity::All)?;
    all.sort_by_key(|e| finset_to_nat(e).unwrap_or(u64::MAX));
    Ok(all)
}

fn fu_extend<G: SetColorMap>(
    g: &G,
    candidates: &[BTreeSet<u32>],
    m: usize,
    arity: Arity,
    chosen: &mut Vec<BTreeSet<u32>>,
    acc: &mut Vec<(BTreeSet<u32>, usize)>,
    color: Option<Color>,
) -> Result<bool> {
    if chosen.len() == m {
        return Ok(true);
    }
    let past = chosen.last().and_then(|e| e.iter().next_back().copied());
    'candidates: for e in candidates {
        if let Some(p) = past {
            if e.iter().next().copied().map_or(true, |min| min <= p) {
                continue;
            }
        }
        let mut color = color;
        let mut added = Vec::new();
        let base: Vec<(BTreeSet<u32>, usize)> =
            std::iter::once((BTreeSet::new(), 0)).chain(acc.iter().cloned()).collect();
        for (s, used) in base {
            if !arity.admits(used + 1) {
                continue;
            }
            let u: BTreeSet<u32> = s.union(e).copied().collect();
            let c = g.color_of(&u)?;
            match color {
                None => color = Some(c),
                Some(existing) if existing != c => continue 'candidates,
                _ => {}
            }
            added.push((u, used + 1));
        }
        chosen.push(e.clone());
        acc.extend(added.iter().cloned());
        if fu_extend(g, candidates, m, arity, chosen, acc, color)? {
            return Ok(true);
        }
        acc.truncate(acc.len() - added.len());
        chosen.pop();
    }
    Ok(false)
}

fn fu_extend_iterated(
    gs: &[&dyn SetColorMap],
    candidates: &[BTreeSet<u32>],
    m: usize,
    arity: Arity,
    chosen: &mut Vec<BTreeSet<u32>>,
) -> Result<Option<Vec<usize>>> {
    if chosen.len() == m {
        let seq = FinSetSequence::new(chosen.clone())?;
        let mut offsets = Vec::with_capacity(gs.len());
        for g in gs {
            match least_offset(*g, &seq, arity)? {
                Some(o) => offsets.push(o),
                None => return Ok(None),
            }
        }
        return Ok(Some(offsets));
    }
    let past = chosen.last().and_then(|e| e.iter().next_back().copied());
    for e in candidates {
        if let Some(p) = past {
            if e.iter().next().copied().map_or(true, |min| min <= p) {
                continue;
            }
        }
        chosen.push(e.clone());
        if let Some(offsets) = fu_extend_iterated(gs, candidates, m, arity, chosen)? {
            return Ok(Some(offsets));
        }
        chosen.pop();
    }
    Ok(None)
}

/// Least o such that the arity-bounded union span of the tail past o is
/// monochromatic; the tail must stay nonempty.
fn least_offset<G: SetColorMap + ?Sized>(
    g: &G,
    y: &FinSetSequence,
    arity: Arity,
) -> Result<Option<usize>> {
    for o in 0..y.len() {
        let tail = FinSetSequence::new(y.items()[o..].to_vec())?;
        let span = finite_unions(&tail, arity)?;
        let mut iter = span.iter();
        let first = match iter.next() {
            Some(e) => g.color_of(e)?,
            None => continue,
        };
        if iter.map(|e| g.color_of(e)).collect::<Result<Vec<_>>>()?.iter().all(|&c| c == first) {
            return Ok(Some(o));
        }
    }
    Ok(None)
}
