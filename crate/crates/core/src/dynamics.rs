//! Finite-window topological dynamics over located words: factors of a
//! coloring under shift-restriction, the recurrence and proximality
//! hierarchies, bounded orbit trees with Day's minimality sweep, limits
//! along finite-union spans, and the extraction algorithms that turn
//! dynamics witnesses into monochromatic block sequences.
//!
//! Every existential over FIN_A(l, infinity) is bounded to [l, B); a
//! negative answer is refuted-within-bound, never a refutation of the
//! underlying theorem.

use crate::alphabet::Alphabet;
use crate::carlson::{CarlsonCertificate, CheckResult};
use crate::coloring::{Color, ColorMap, Coloring, FnSetColorMap, SetColorMap};
use crate::error::{Error, Result};
use crate::hales_jewett::hj_witness;
use crate::spans::{
    finite_unions, is_homogeneous, span_located, Arity, BlockSequence, FinSetSequence, SpanMode,
    WeakBlockSequence,
};
use crate::word::{
    canonical_index, variable_words_in_range, window_size, word_at_index, words_in_range, Cell,
    LocatedWord,
};
use rayon::prelude::*;
use std::collections::{BTreeSet, HashMap};

/// A total coloring of FIN_A(0, ell) plus the unit, keyed by
/// canonical_index; the value of S^ell_p(f) and the h of factor checks.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Factor {
    ell: u32,
    table: Vec<Color>,
}

impl Factor {
    pub fn new(ell: u32, table: Vec<Color>, k: u8) -> Result<Self> {
        let expect = window_size(k, ell)?;
        if table.len() as u64 != expect {
            return Err(Error::InvalidInput(format!(
                "factor table holds {} entries, window takes {expect}",
                table.len()
            )));
        }
        Ok(Factor { ell, table })
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn table(&self) -> &[Color] {
        &self.table
    }

    pub fn value_at(&self, q: &LocatedWord, k: u8) -> Result<Color> {
        let idx = canonical_index(q, k, self.ell)? as usize;
        Ok(self.table[idx])
    }

    /// Words with domain below ell' occupy exactly the first (k+1)^ell'
    /// indices, so restriction is a table prefix.
    pub fn restrict(&self, ell: u32, k: u8) -> Result<Factor> {
        if ell > self.ell {
            return Err(Error::WindowOverflow(format!(
                "cannot restrict a level-{} factor to level {ell}",
                self.ell
            )));
        }
        let len = window_size(k, ell)? as usize;
        Ok(Factor { ell, table: self.table[..len].to_vec() })
    }

    /// S^ell_q of this factor viewed as a finite coloring; q must fit
    /// between the target level and this factor's window.
    pub fn shift(&self, ell: u32, q: &LocatedWord, k: u8) -> Result<Factor> {
        if let Some(min) = q.min_pos() {
            if min < ell {
                return Err(Error::PreconditionFailed(format!(
                    "shift word begins at {min}, below level {ell}"
                )));
            }
        }
        if q.max_pos().map_or(false, |m| m >= self.ell) {
            return Err(Error::WindowOverflow(format!(
                "shift word exceeds the level-{} window",
                self.ell
            )));
        }
        let len = window_size(k, ell)?;
        let mut table = Vec::with_capacity(len as usize);
        for i in 0..len {
            let r = word_at_index(i, k, ell)?;
            table.push(self.value_at(&r.union(q)?, k)?);
        }
        Ok(Factor { ell, table })
    }
}

/// The factor q -> f(q u p) on FIN_A(0, ell) plus the unit.
pub fn shift_restrict<F: ColorMap>(
    f: &F,
    alphabet: &Alphabet,
    ell: u32,
    p: &LocatedWord,
) -> Result<Factor> {
    if let Some(min) = p.min_pos() {
        if min < ell {
            return Err(Error::PreconditionFailed(format!(
                "shift word begins at {min}, below level {ell}"
            )));
        }
    }
    let k = alphabet.k();
    let len = window_size(k, ell)?;
    let mut table = Vec::with_capacity(len as usize);
    for i in 0..len {
        let q = word_at_index(i, k, ell)?;
        table.push(f.color_of(&q.union(p)?)?);
    }
    Ok(Factor { ell, table })
}

/// Least p in FIN_A(h.ell, bound) plus the unit realizing h as a factor
/// of f, if any lies within the bound.
pub fn is_factor<F: ColorMap>(
    h: &Factor,
    f: &F,
    alphabet: &Alphabet,
    bound: u32,
) -> Result<Option<LocatedWord>> {
    for p in std::iter::once(LocatedWord::unit())
        .chain(words_in_range(alphabet.k(), h.ell, bound))
    {
        if shift_restrict(f, alphabet, h.ell, &p)? == *h {
            return Ok(Some(p));
        }
    }
    Ok(None)
}

/// Which recurrence statement to check at a level.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecurrenceKind {
    /// some word restores the base factor
    Weak,
    /// some variable word restores it under every instantiation
    Plain,
    /// every word past the modulus is corrected by a word below it
    Uniform(u32),
}

/// Which proximality statement to check at a level.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProximalityKind {
    Weak,
    Plain,
    Strong,
}

/// Outcome of a bounded witness search or universal check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoundedOutcome {
    /// weak and plain kinds: the least witness found
    Witness(LocatedWord),
    /// uniform kind: the universal held for every word within the bound
    UniversalHolds,
    /// nothing within the bound; uniform carries the failing word
    Refuted { bound: u32, failing: Option<LocatedWord> },
}

impl BoundedOutcome {
    pub fn witness(&self) -> Option<&LocatedWord> {
        match self {
            BoundedOutcome::Witness(p) => Some(p),
            _ => None,
        }
    }

    pub fn holds(&self) -> bool {
        !matches!(self, BoundedOutcome::Refuted { .. })
    }
}

pub fn check_recurrence<F: ColorMap>(
    f: &F,
    alphabet: &Alphabet,
    ell: u32,
    bound: u32,
    kind: RecurrenceKind,
) -> Result<BoundedOutcome> {
    let k = alphabet.k();
    let base = shift_restrict(f, alphabet, ell, &LocatedWord::unit())?;
    match kind {
        RecurrenceKind::Weak => {
            for p in words_in_range(k, ell, bound) {
                if shift_restrict(f, alphabet, ell, &p)? == base {
                    return Ok(BoundedOutcome::Witness(p));
                }
            }
            Ok(BoundedOutcome::Refuted { bound, failing: None })
        }
        RecurrenceKind::Plain => {
            'candidates: for p in variable_words_in_range(k, ell, bound) {
                for r in 0..k {
                    if shift_restrict(f, alphabet, ell, &p.instantiate(Cell::Letter(r)))? != base
                    {
                        continue 'candidates;
                    }
                }
                return Ok(BoundedOutcome::Witness(p));
            }
            Ok(BoundedOutcome::Refuted { bound, failing: None })
        }
        RecurrenceKind::Uniform(m) => {
            if m <= ell || m > bound {
                return Err(Error::PreconditionFailed(format!(
                    "uniform modulus {m} must lie in ({ell}, {bound}]"
                )));
            }
            'words: for p in words_in_range(k, m, bound) {
                // the unit correction admits words that restore the
                // factor on their own
                for q in std::iter::once(LocatedWord::unit()).chain(words_in_range(k, ell, m)) {
                    if shift_restrict(f, alphabet, ell, &q.union(&p)?)? == base {
                        continue 'words;
                    }
                }
                return Ok(BoundedOutcome::Refuted { bound, failing: Some(p) });
            }
            Ok(BoundedOutcome::UniversalHolds)
        }
    }
}

/// Direct re-evaluation of the defining equation for a claimed
/// recurrence witness; Uniform is not witnessed by a single word.
pub fn verify_recurrence_witness<F: ColorMap>(
    f: &F,
    alphabet: &Alphabet,
    ell: u32,
    p: &LocatedWord,
    kind: RecurrenceKind,
) -> Result<bool> {
    let base = shift_restrict(f, alphabet, ell, &LocatedWord::unit())?;
    match kind {
        RecurrenceKind::Weak => {
            Ok(p.is_plain_word() && shift_restrict(f, alphabet, ell, p)? == base)
        }
        RecurrenceKind::Plain => {
            if !p.is_variable() {
                return Ok(false);
            }
            for r in 0..alphabet.k() {
                if shift_restrict(f, alphabet, ell, &p.instantiate(Cell::Letter(r)))? != base {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        RecurrenceKind::Uniform(_) => Err(Error::InvalidInput(
            "uniform recurrence is a universal statement, not a witnessed one".into(),
        )),
    }
}

pub fn check_proximality<F: ColorMap, G: ColorMap>(
    f: &F,
    g: &G,
    alphabet: &Alphabet,
    ell: u32,
    bound: u32,
    kind: ProximalityKind,
) -> Result<BoundedOutcome> {
    let k = alphabet.k();
    match kind {
        ProximalityKind::Weak => {
            for p in words_in_range(k, ell, bound) {
                if shift_restrict(g, alphabet, ell, &p)? == shift_restrict(f, alphabet, ell, &p)?
                {
                    return Ok(BoundedOutcome::Witness(p));
                }
            }
        }
        ProximalityKind::Plain => {
            'candidates: for p in variable_words_in_range(k, ell, bound) {
                for r in 0..k {
                    let pa = p.instantiate(Cell::Letter(r));
                    if shift_restrict(g, alphabet, ell, &pa)?
                        != shift_restrict(f, alphabet, ell, &pa)?
                    {
                        continue 'candidates;
                    }
                }
                return Ok(BoundedOutcome::Witness(p));
            }
        }
        ProximalityKind::Strong => {
            let base = shift_restrict(g, alphabet, ell, &LocatedWord::unit())?;
            'candidates: for p in variable_words_in_range(k, ell, bound) {
                for r in 0..k {
                    let pa = p.instantiate(Cell::Letter(r));
                    if shift_restrict(g, alphabet, ell, &pa)? != base
                        || shift_restrict(f, alphabet, ell, &pa)? != base
                    {
                        continue 'candidates;
                    }
                }
                return Ok(BoundedOutcome::Witness(p));
            }
        }
    }
    Ok(BoundedOutcome::Refuted { bound, failing: None })
}

pub fn verify_proximality_witness<F: ColorMap, G: ColorMap>(
    f: &F,
    g: &G,
    alphabet: &Alphabet,
    ell: u32,
    p: &LocatedWord,
    kind: ProximalityKind,
) -> Result<bool> {
    match kind {
        ProximalityKind::Weak => Ok(p.is_plain_word()
            && shift_restrict(g, alphabet, ell, p)? == shift_restrict(f, alphabet, ell, p)?),
        ProximalityKind::Plain => {
            if !p.is_variable() {
                return Ok(false);
            }
            for r in 0..alphabet.k() {
                let pa = p.instantiate(Cell::Letter(r));
                if shift_restrict(g, alphabet, ell, &pa)? != shift_restrict(f, alphabet, ell, &pa)?
                {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        ProximalityKind::Strong => {
            if !p.is_variable() {
                return Ok(false);
            }
            let base = shift_restrict(g, alphabet, ell, &LocatedWord::unit())?;
            for r in 0..alphabet.k() {
                let pa = p.instantiate(Cell::Letter(r));
                if shift_restrict(g, alphabet, ell, &pa)? != base
                    || shift_restrict(f, alphabet, ell, &pa)? != base
                {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

/// The constructive content of "uniformly recurrent implies recurrent":
/// color each word past m by the least correction restoring the base
/// factor, take a Hales-Jewett witness for that coloring, and attach the
/// common correction in front of it.
pub fn ur_implies_recurrent_witness<F: ColorMap>(
    f: &F,
    alphabet: &Alphabet,
    ell: u32,
    m: u32,
    bound: u32,
) -> Result<LocatedWord> {
    match check_recurrence(f, alphabet, ell, bound, RecurrenceKind::Uniform(m))? {
        BoundedOutcome::UniversalHolds => {}
        outcome => {
            return Err(Error::PreconditionFailed(format!(
                "not uniformly recurrent at level {ell} with modulus {m}: {outcome:?}"
            )))
        }
    }
    let k = alphabet.k();
    let base = shift_restrict(f, alphabet, ell, &LocatedWord::unit())?;
    let index_window = bound - m;
    let correction_count = window_size(k, m)?;
    let g = crate::coloring::FnColorMap::new(correction_count, |v: &LocatedWord| {
        let shifted = v.translate(m);
        for q in std::iter::once(LocatedWord::unit()).chain(words_in_range(k, ell, m)) {
            if shift_restrict(f, alphabet, ell, &q.union(&shifted)?)? == base {
                return canonical_index(&q, k, m);
            }
        }
        Err(Error::PreconditionFailed(
            "uniform recurrence broke down during the witness search".into(),
        ))
    });
    let witness = hj_witness(&g, alphabet, index_window)?.ok_or(Error::Exhausted)?;
    let q = word_at_index(witness.color, k, m)?;
    let w = q.union(&witness.p.translate(m))?;
    for r in 0..k {
        if shift_restrict(f, alphabet, ell, &w.instantiate(Cell::Letter(r)))? != base {
            return Err(Error::VerificationFailed(format!(
                "assembled witness fails the base-factor equation at letter {r}"
            )));
        }
    }
    Ok(w)
}

/// Bounded materialization of the orbit-closure tree: levels hold the
/// factors reachable by shifts within the bound. Admitted nodes are
/// sound; nodes missing at this bound may reappear at a larger one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitTree {
    pub depth: u32,
    pub bound: u32,
    pub levels: Vec<Vec<Factor>>,
}

pub fn orbit_tree<F: ColorMap + Sync>(
    f: &F,
    alphabet: &Alphabet,
    depth: u32,
    bound: u32,
) -> Result<OrbitTree> {
    if depth > bound {
        return Err(Error::PreconditionFailed(format!(
            "depth {depth} exceeds bound {bound}"
        )));
    }
    let k = alphabet.k();
    let levels = (0..=depth)
        .into_par_iter()
        .map(|ell| -> Result<Vec<Factor>> {
            let mut seen = BTreeSet::new();
            for p in std::iter::once(LocatedWord::unit()).chain(words_in_range(k, ell, bound)) {
                seen.insert(shift_restrict(f, alphabet, ell, &p)?);
            }
            Ok(seen.into_iter().collect())
        })
        .collect::<Result<Vec<_>>>()?;
    let tree = OrbitTree { depth, bound, levels };
    // tree condition: every shifted restriction of an admitted node is
    // realized in f by a witness within the bound
    for (ell, level) in tree.levels.iter().enumerate() {
        for h in level {
            for ell1 in 0..ell as u32 {
                for q in words_in_range(k, ell1, ell as u32) {
                    let target = h.shift(ell1, &q, k)?;
                    if is_factor(&target, f, alphabet, bound)?.is_none() {
                        return Err(Error::VerificationFailed(format!(
                            "level-{ell} node lost its shift by {q:?} within the bound"
                        )));
                    }
                }
            }
        }
    }
    Ok(tree)
}

/// Closure check for explicit level sets: shifting any top node by p
/// must land on an admitted factor at the target level. Returns the
/// first violating factor.
pub fn subshift_check(
    levels: &[Vec<Factor>],
    alphabet: &Alphabet,
    ell: u32,
    p: &LocatedWord,
) -> Result<Option<Factor>> {
    let top = levels.last().ok_or(Error::EmptySet)?;
    let admitted: BTreeSet<&Factor> = levels
        .get(ell as usize)
        .ok_or_else(|| Error::IndexOutOfRange { index: ell as usize, len: levels.len() })?
        .iter()
        .collect();
    for h in top {
        let shifted = h.shift(ell, p, alphabet.k())?;
        if !admitted.contains(&shifted) {
            return Ok(Some(shifted));
        }
    }
    Ok(None)
}

/// Day's refinement sweep: for each factor in canonical order, restrict
/// the top level to the nodes not containing it as a factor, whenever
/// that leaves the class nonempty; lower levels are rederived by
/// downward closure at the end.
pub fn minimal_check(tree: &OrbitTree, alphabet: &Alphabet, budget: u64) -> Result<Vec<Vec<Factor>>> {
    let k = alphabet.k();
    let mut top = tree
        .levels
        .last()
        .cloned()
        .ok_or(Error::EmptySet)?;
    let mut swept = 0u64;
    for level in &tree.levels {
        for h in level {
            swept += 1;
            if swept > budget {
                return Err(Error::BudgetExhausted { pulled: swept - 1 });
            }
            let mut refined = Vec::new();
            for node in &top {
                if !factor_of_node(h, node, k)? {
                    refined.push(node.clone());
                }
            }
            if !refined.is_empty() {
                top = refined;
            }
        }
    }
    let mut levels = Vec::with_capacity(tree.levels.len());
    for ell in 0..tree.levels.len() as u32 {
        let mut seen = BTreeSet::new();
        for node in &top {
            for q in std::iter::once(LocatedWord::unit()).chain(words_in_range(k, ell, tree.depth))
            {
                if q.max_pos().map_or(false, |m| m >= node.ell) {
                    continue;
                }
                seen.insert(node.shift(ell, &q, k)?);
            }
        }
        levels.push(seen.into_iter().collect());
    }
    Ok(levels)
}

/// h occurs inside the finite node via a nonempty shift.
fn factor_of_node(h: &Factor, node: &Factor, k: u8) -> Result<bool> {
    if h.ell >= node.ell {
        return Ok(false);
    }
    for q in words_in_range(k, h.ell, node.ell) {
        if node.shift(h.ell, &q, k)? == *h {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Per-level witnesses indexed by the exact level they serve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessSchedule {
    entries: Vec<(u32, LocatedWord)>,
}

impl WitnessSchedule {
    pub fn new(mut entries: Vec<(u32, LocatedWord)>) -> Result<Self> {
        entries.sort_by_key(|(ell, _)| *ell);
        for pair in entries.windows(2) {
            if pair[0].0 == pair[1].0 {
                return Err(Error::InvalidInput(format!(
                    "two schedule entries for level {}",
                    pair[0].0
                )));
            }
        }
        for (ell, p) in &entries {
            if p.min_pos().map_or(true, |min| min < *ell) {
                return Err(Error::InvalidInput(format!(
                    "schedule witness for level {ell} does not start past it: {p:?}"
                )));
            }
        }
        Ok(WitnessSchedule { entries })
    }

    pub fn entries(&self) -> &[(u32, LocatedWord)] {
        &self.entries
    }

    pub fn witness_for(&self, ell: u32) -> Result<&LocatedWord> {
        self.entries
            .iter()
            .find(|(e, _)| *e == ell)
            .map(|(_, p)| p)
            .ok_or(Error::ScheduleGap { ell })
    }
}

/// Runs the plain-recurrence search at the levels the extraction
/// induction will visit, recording each witness.
pub fn build_recurrent_schedule<F: ColorMap>(
    f: &F,
    alphabet: &Alphabet,
    m: usize,
    bound: u32,
) -> Result<WitnessSchedule> {
    let mut entries = Vec::with_capacity(m);
    let mut ell = 0u32;
    for _ in 0..m {
        match check_recurrence(f, alphabet, ell, bound, RecurrenceKind::Plain)? {
            BoundedOutcome::Witness(p) => {
                ell = 1 + p.max_pos().expect("plain-recurrence witness is nonempty");
                entries.push((ell_of(&p), p));
            }
            _ => return Err(Error::Exhausted),
        }
    }
    WitnessSchedule::new(entries)
}

/// Runs the strong-proximality search at the levels the twin extraction
/// will visit.
pub fn build_proximal_schedule<F: ColorMap, G: ColorMap>(
    f: &F,
    g: &G,
    alphabet: &Alphabet,
    m: usize,
    bound: u32,
) -> Result<WitnessSchedule> {
    let mut entries = Vec::with_capacity(m);
    let mut ell = 0u32;
    for _ in 0..m {
        match check_proximality(f, g, alphabet, ell, bound, ProximalityKind::Strong)? {
            BoundedOutcome::Witness(p) => {
                ell = 1 + p.max_pos().expect("strong-proximality witness is nonempty");
                entries.push((ell_of(&p), p));
            }
            _ => return Err(Error::Exhausted),
        }
    }
    WitnessSchedule::new(entries)
}

fn ell_of(p: &LocatedWord) -> u32 {
    // schedule entries are keyed by the level they were found at; the
    // level a witness serves is bounded by where it starts
    p.min_pos().unwrap_or(0)
}

/// The recurrent-coloring extraction: each round consumes the schedule
/// witness for the current level, verifies the base-factor equation for
/// every instantiation, and appends the block. The final certificate is
/// re-verified by independent span enumeration.
pub fn extract_from_recurrent(
    f: &Coloring,
    sched: &WitnessSchedule,
    m: usize,
) -> Result<CarlsonCertificate> {
    let alphabet = f.alphabet().clone();
    let mut blocks: Vec<LocatedWord> = Vec::with_capacity(m);
    let mut ell = 0u32;
    for _ in 0..m {
        let p = schedule_lookup(sched, ell)?;
        if !verify_recurrence_witness(f, &alphabet, ell, p, RecurrenceKind::Plain)? {
            return Err(Error::VerificationFailed(format!(
                "schedule witness at level {ell} fails the recurrence equation"
            )));
        }
        ell = 1 + p.max_pos().expect("verified witness is nonempty");
        blocks.push(p.clone());
    }
    certify(f, blocks, f.color_of(&LocatedWord::unit())?)
}

/// The strong-proximality extraction; the one block sequence is
/// certified against both colorings for color g(unit).
pub fn extract_from_proximal(
    f: &Coloring,
    g: &Coloring,
    sched: &WitnessSchedule,
    m: usize,
) -> Result<(CarlsonCertificate, CarlsonCertificate)> {
    let alphabet = f.alphabet().clone();
    let mut blocks: Vec<LocatedWord> = Vec::with_capacity(m);
    let mut ell = 0u32;
    for _ in 0..m {
        let p = schedule_lookup(sched, ell)?;
        if !verify_proximality_witness(f, g, &alphabet, ell, p, ProximalityKind::Strong)? {
            return Err(Error::VerificationFailed(format!(
                "schedule witness at level {ell} fails a strong-proximality equation"
            )));
        }
        ell = 1 + p.max_pos().expect("verified witness is nonempty");
        blocks.push(p.clone());
    }
    let color = g.color_of(&LocatedWord::unit())?;
    let f_cert = certify(f, blocks.clone(), color)?;
    let g_cert = certify(g, blocks, color)?;
    Ok((f_cert, g_cert))
}

/// Schedule lookup by the level a round needs: the witness keyed at the
/// least level >= ell works when it starts past ell.
fn schedule_lookup(sched: &WitnessSchedule, ell: u32) -> Result<&LocatedWord> {
    sched
        .entries()
        .iter()
        .find(|(e, _)| *e >= ell)
        .map(|(_, p)| p)
        .ok_or(Error::ScheduleGap { ell })
}

fn certify(f: &Coloring, blocks: Vec<LocatedWord>, color: Color) -> Result<CarlsonCertificate> {
    let alphabet = f.alphabet().clone();
    let window = blocks
        .last()
        .and_then(|b| b.max_pos())
        .map_or(0, |p| p + 1);
    let x = BlockSequence::new(blocks)?;
    let span = span_located(&x, &alphabet, SpanMode::Letters, Arity::All)?;
    match is_homogeneous(f, &span)? {
        Some(c) if c == color => Ok(CarlsonCertificate {
            coloring_id: f.content_hash(),
            x,
            color,
            arity: Arity::All,
            window,
        }),
        other => Err(Error::VerificationFailed(format!(
            "extracted span is not monochromatic for {color}: {other:?}"
        ))),
    }
}

/// The strengthening construction: given uniform recurrence of g at ell
/// with modulus m and weak proximality of g to f past the Hales-Jewett
/// segment, assemble w = q u u u p whose every instantiation pins both
/// colorings to the base factor of g.
pub fn strengthen_proximality<F: ColorMap, G: ColorMap>(
    f: &F,
    g: &G,
    alphabet: &Alphabet,
    ell: u32,
    m: u32,
    bound: u32,
) -> Result<LocatedWord> {
    match check_recurrence(g, alphabet, ell, bound, RecurrenceKind::Uniform(m))? {
        BoundedOutcome::UniversalHolds => {}
        outcome => {
            return Err(Error::PreconditionFailed(format!(
                "g is not uniformly recurrent at level {ell} with modulus {m}: {outcome:?}"
            )))
        }
    }
    let k = alphabet.k();
    let base = shift_restrict(g, alphabet, ell, &LocatedWord::unit())?;
    for n in 1..bound.saturating_sub(m) {
        // p witnesses weak proximality at level m+n
        for p in words_in_range(k, m + n, bound) {
            if shift_restrict(g, alphabet, m + n, &p)? != shift_restrict(f, alphabet, m + n, &p)?
            {
                continue;
            }
            if let Some(w) = strengthen_with(f, g, alphabet, ell, m, n, &p, &base)? {
                return Ok(w);
            }
        }
    }
    Err(Error::PreconditionFailed(format!(
        "no weak-proximality segment below {bound} admits the construction"
    )))
}

#[allow(clippy::too_many_arguments)]
fn strengthen_with<F: ColorMap, G: ColorMap>(
    f: &F,
    g: &G,
    alphabet: &Alphabet,
    ell: u32,
    m: u32,
    n: u32,
    p: &LocatedWord,
    base: &Factor,
) -> Result<Option<LocatedWord>> {
    let k = alphabet.k();
    // h(v) = least correction q with S^ell_{q u v u p}(g) = S^ell(g)
    let correction = |v: &LocatedWord| -> Result<Option<LocatedWord>> {
        for q in std::iter::once(LocatedWord::unit()).chain(words_in_range(k, ell, m)) {
            if shift_restrict(g, alphabet, ell, &q.union(&v.union(p)?)?)? == *base {
                return Ok(Some(q));
            }
        }
        Ok(None)
    };
    'candidates: for u in variable_words_in_range(k, m, m + n) {
        let mut common: Option<LocatedWord> = None;
        for r in 0..k {
            let v = u.instantiate(Cell::Letter(r));
            match (correction(&v)?, &common) {
                (Some(q), None) => common = Some(q),
                (Some(q), Some(c)) if q == *c => {}
                _ => continue 'candidates,
            }
        }
        let q = common.expect("alphabet is nonempty");
        let w = q.union(&u.union(p)?)?;
        let mut ok = true;
        for r in 0..k {
            let wa = w.instantiate(Cell::Letter(r));
            if shift_restrict(g, alphabet, ell, &wa)? != *base
                || shift_restrict(f, alphabet, ell, &wa)? != *base
            {
                ok = false;
                break;
            }
        }
        if ok {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// Universal check for the limit definition: every union of at most two
/// elements of x past the prefix restores h as the shifted factor of f.
pub fn flim_check<F: ColorMap>(
    f: &F,
    h: &Factor,
    x: &WeakBlockSequence,
    prefix_len: usize,
    alphabet: &Alphabet,
) -> Result<CheckResult> {
    let tail = &x.items()[prefix_len.min(x.len())..];
    for (i, p) in tail.iter().enumerate() {
        if p.min_pos().map_or(true, |min| min < h.ell) {
            return Ok(CheckResult::Fails { counterexample: p.clone() });
        }
        if shift_restrict(f, alphabet, h.ell, p)? != *h {
            return Ok(CheckResult::Fails { counterexample: p.clone() });
        }
        for q in &tail[i + 1..] {
            let u = p.union(q)?;
            if shift_restrict(f, alphabet, h.ell, &u)? != *h {
                return Ok(CheckResult::Fails { counterexample: u });
            }
        }
    }
    Ok(CheckResult::Holds)
}

/// The limit found by flim_search: the stabilizing factor at the target
/// level, the refined weak block sequence, and the per-level prefix
/// lengths past which the limit equations hold on y.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlimResult {
    pub g: Factor,
    pub y: WeakBlockSequence,
    pub level_offsets: Vec<usize>,
}

/// The limit construction at finite scale: index x by the domains of its
/// words, color each finite union by whether its shifted factor equals
/// each occurring candidate, run the iterated finite-union search, and
/// keep the unique all-in candidate per level.
pub fn flim_search<F: ColorMap>(
    f: &F,
    x: &WeakBlockSequence,
    target_ell: u32,
    m: usize,
    alphabet: &Alphabet,
) -> Result<FlimResult> {
    let b = FinSetSequence::new(x.items().iter().map(|p| p.domain().collect()).collect())?;
    // pi: finite unions of index blocks -> the letter span of x
    let mut pi: HashMap<BTreeSet<u32>, LocatedWord> = HashMap::new();
    for e in finite_unions(&b, Arity::All)? {
        let mut word = LocatedWord::unit();
        for (item, dom) in x.items().iter().zip(b.items()) {
            if dom.is_subset(&e) {
                word = word.union(item)?;
            }
        }
        if word.domain().collect::<BTreeSet<u32>>() != e {
            return Err(Error::InvalidInput(format!(
                "index set {e:?} does not decompose into sequence domains"
            )));
        }
        pi.insert(e, word);
    }

    // occurring candidate factors per level
    let mut candidates: Vec<(u32, Factor)> = Vec::new();
    for ell in 0..=target_ell {
        let mut seen = BTreeSet::new();
        for (e, word) in &pi {
            if e.iter().next().copied().map_or(true, |min| min < ell) {
                continue;
            }
            seen.insert(shift_restrict(f, alphabet, ell, word)?);
        }
        if seen.is_empty() {
            return Err(Error::Exhausted);
        }
        candidates.extend(seen.into_iter().map(|h| (ell, h)));
    }

    let family: Vec<FnSetColorMap<_>> = candidates
        .iter()
        .map(|(ell, h)| {
            let pi = &pi;
            let ell = *ell;
            let h = h.clone();
            FnSetColorMap::new(2, move |e: &BTreeSet<u32>| {
                if e.iter().next().copied().map_or(true, |min| min < ell) {
                    return Ok(0);
                }
                let word = pi
                    .get(e)
                    .ok_or_else(|| Error::InvalidInput(format!("unknown index set {e:?}")))?;
                Ok((shift_restrict(f, alphabet, ell, word)? == h) as Color)
            })
        })
        .collect();
    let refs: Vec<&dyn SetColorMap> = family.iter().map(|g| g as &dyn SetColorMap).collect();
    let (y_idx, offsets) =
        crate::carlson::fu_homog_search_iterated(&refs, &b, m, Arity::AtMost(2))?;

    // exactly one all-in candidate per level
    let mut per_level: Vec<Option<(Factor, usize)>> = vec![None; target_ell as usize + 1];
    for (((ell, h), g), o) in candidates.iter().zip(&family).zip(&offsets) {
        let tail = FinSetSequence::new(y_idx.items()[*o..].to_vec())?;
        let span = finite_unions(&tail, Arity::AtMost(2))?;
        let mut all_in = !span.is_empty();
        for e in &span {
            if g.color_of(e)? != 1 {
                all_in = false;
                break;
            }
        }
        if all_in {
            match &per_level[*ell as usize] {
                None => per_level[*ell as usize] = Some((h.clone(), *o)),
                Some(_) => return Err(Error::AmbiguousLimit),
            }
        }
    }
    let mut g_factor: Option<Factor> = None;
    let mut level_offsets = Vec::with_capacity(per_level.len());
    for (ell, entry) in per_level.into_iter().enumerate() {
        let (h, o) = entry.ok_or(Error::Exhausted)?;
        if let Some(prev) = &g_factor {
            // limits at successive levels must cohere by restriction
            if h.restrict(ell as u32 - 1, alphabet.k())? != prev.restrict(ell as u32 - 1, alphabet.k())? {
                return Err(Error::AmbiguousLimit);
            }
        }
        level_offsets.push(o);
        g_factor = Some(h);
    }
    let g = g_factor.expect("target level 0 always present");

    let y = WeakBlockSequence::new(
        y_idx
            .items()
            .iter()
            .map(|e| pi.get(e).cloned().ok_or(Error::EmptySet))
            .collect::<Result<Vec<_>>>()?,
    )?;
    for (ell, o) in level_offsets.iter().enumerate() {
        let h = g.restrict(ell as u32, alphabet.k())?;
        if let CheckResult::Fails { counterexample } = flim_check(f, &h, &y, *o, alphabet)? {
            return Err(Error::VerificationFailed(format!(
                "limit equation fails on the refined sequence at {counterexample:?}"
            )));
        }
    }
    Ok(FlimResult { g, y, level_offsets })
}

/// The weak-proximality witness read off a limit: the first element past
/// the level's prefix, validated through the two-step argument (p alone
/// and p u q both restore the limit factor).
pub fn flim_weak_proximal_witness<F: ColorMap>(
    f: &F,
    lim: &FlimResult,
    ell: u32,
    alphabet: &Alphabet,
) -> Result<LocatedWord> {
    let o_ell = *lim
        .level_offsets
        .get(ell as usize)
        .ok_or_else(|| Error::IndexOutOfRange {
            index: ell as usize,
            len: lim.level_offsets.len(),
        })?;
    let p = lim
        .y
        .items()
        .get(o_ell)
        .ok_or(Error::Exhausted)?
        .clone();
    let m = 1 + p.max_pos().expect("weak block sequence holds nonempty words");
    if m > lim.g.ell() {
        return Err(Error::WindowOverflow(format!(
            "witness needs the limit at level {m}, beyond {}",
            lim.g.ell()
        )));
    }
    let o_m = *lim
        .level_offsets
        .get(m as usize)
        .ok_or(Error::ScheduleGap { ell: m })?;
    let q = lim
        .y
        .items()
        .iter()
        .skip(o_m)
        .find(|q| q.min_pos().map_or(false, |min| min > p.max_pos().unwrap()))
        .ok_or(Error::Exhausted)?;
    let h_ell = lim.g.restrict(ell, alphabet.k())?;
    let h_m = lim.g.restrict(m, alphabet.k())?;
    // S^ell_p(f) = h_ell, S^m_q(f) = h_m, and the pair equation
    if shift_restrict(f, alphabet, ell, &p)? != h_ell
        || shift_restrict(f, alphabet, m, q)? != h_m
        || shift_restrict(f, alphabet, ell, &p.union(q)?)? != h_ell
    {
        return Err(Error::VerificationFailed(
            "limit equations fail on the chosen witnesses".into(),
        ));
    }
    // hence S^ell_p(g) = S^m_q(f) evaluated at p = h_ell = S^ell_p(f)
    if h_m.shift(ell, &p, alphabet.k())? != shift_restrict(f, alphabet, ell, &p)? {
        return Err(Error::VerificationFailed(
            "factor transport fails the weak-proximality equation".into(),
        ));
    }
    Ok(p)
}
