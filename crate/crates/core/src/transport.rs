//! Isomorphisms between positive naturals, finite sets, finite-union
//! spaces, located words, and classical words, plus 2-apartness and the
//! constructive normalization of a stream into a 2-apart refinement.
//! Infinite-set arguments become pull-based streams with explicit
//! budgets; running out of budget is reported as such and never as
//! nonexistence.

use crate::error::{Error, Result};
use crate::spans::{BlockSequence, FinSetSequence, VariableWordList};
use crate::word::{Cell, LocatedWord};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

/// Binary expansion profile of a positive natural: `lambda` the least
/// exponent, `mu` the greatest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApartnessProfile {
    pub n: u64,
    pub lambda: u32,
    pub mu: u32,
}

pub fn profile(n: u64) -> Result<ApartnessProfile> {
    if n == 0 {
        return Err(Error::ZeroInput);
    }
    Ok(ApartnessProfile { n, lambda: n.trailing_zeros(), mu: 63 - n.leading_zeros() })
}

/// True iff consecutive elements satisfy mu(a_i) < lambda(a_{i+1}).
/// The input must be strictly increasing and positive.
pub fn is_two_apart(a: &[u64]) -> Result<bool> {
    for pair in a.windows(2) {
        if pair[1] <= pair[0] {
            return Err(Error::NotIncreasing(pair[1]));
        }
    }
    for pair in a.windows(2) {
        if profile(pair[0])?.mu >= profile(pair[1])?.lambda {
            return Ok(false);
        }
    }
    if let Some(&first) = a.first() {
        profile(first)?;
    }
    Ok(true)
}

pub fn nat_to_finset(n: u64) -> Result<BTreeSet<u32>> {
    if n == 0 {
        return Err(Error::ZeroInput);
    }
    Ok((0..64).filter(|i| n >> i & 1 == 1).collect())
}

pub fn finset_to_nat(e: &BTreeSet<u32>) -> Result<u64> {
    if e.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut n = 0u64;
    for &i in e {
        if i >= 64 {
            return Err(Error::Overflow("finset_to_nat exponent"));
        }
        n |= 1 << i;
    }
    Ok(n)
}

/// A pull-based stream of strictly increasing positive naturals with a
/// hard budget. Every pulled value is recorded so refinements can refer
/// to stream elements by position.
pub struct Stream<'a> {
    source: Box<dyn FnMut() -> Option<u64> + 'a>,
    budget: u64,
    record: Vec<u64>,
}

impl<'a> Stream<'a> {
    pub fn new(iter: impl IntoIterator<Item = u64, IntoIter: 'a>, budget: u64) -> Self {
        let mut it = iter.into_iter();
        Stream { source: Box::new(move || it.next()), budget, record: Vec::new() }
    }

    /// Pulls the next element, enforcing the budget and the
    /// strictly-increasing positive contract.
    pub fn pull(&mut self) -> Result<u64> {
        if self.record.len() as u64 >= self.budget {
            return Err(Error::BudgetExhausted { pulled: self.record.len() as u64 });
        }
        let v = (self.source)()
            .ok_or(Error::BudgetExhausted { pulled: self.record.len() as u64 })?;
        if v == 0 {
            return Err(Error::ZeroInput);
        }
        if let Some(&last) = self.record.last() {
            if v <= last {
                return Err(Error::NotIncreasing(v));
            }
        }
        self.record.push(v);
        Ok(v)
    }

    pub fn pulled(&self) -> u64 {
        self.record.len() as u64
    }

    pub fn record(&self) -> &[u64] {
        &self.record
    }

    pub fn into_record(self) -> Vec<u64> {
        self.record
    }
}

/// A block pulled from a stream: positions in pull order, their values,
/// and the sum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StreamBlock {
    pub indices: BTreeSet<u32>,
    pub values: BTreeSet<u64>,
    pub sum: u64,
}

/// Finds a finite block of fresh stream elements whose sum has
/// lambda >= k, by the carry cascade: keep at most one pending block per
/// lambda level and merge whenever two blocks land on the same level,
/// which strictly raises the level (equal lowest bits cancel). Reaching
/// level k costs at most 2^k pulls, like a binary counter.
///
/// Pending blocks left in the cascade when the target is reached are
/// dropped, so a returned block may skip over some pulled elements;
/// successive calls still produce blocks in strictly increasing position
/// order because each call only sees elements pulled after the last.
pub fn find_high_lambda(x: &mut Stream<'_>, k: u32) -> Result<StreamBlock> {
    if k >= 63 {
        return Err(Error::Overflow("lambda target"));
    }
    let mut pending: BTreeMap<u32, StreamBlock> = BTreeMap::new();
    loop {
        let idx = x.pulled() as u32;
        let v = x.pull()?;
        let mut block = StreamBlock {
            indices: [idx].into_iter().collect(),
            values: [v].into_iter().collect(),
            sum: v,
        };
        loop {
            let level = profile(block.sum)?.lambda;
            if level >= k {
                return Ok(block);
            }
            match pending.remove(&level) {
                Some(other) => {
                    block.indices.extend(other.indices);
                    block.values.extend(other.values);
                    block.sum = block
                        .sum
                        .checked_add(other.sum)
                        .ok_or(Error::Overflow("find_high_lambda sum"))?;
                }
                None => {
                    pending.insert(level, block);
                    break;
                }
            }
        }
    }
}

/// A refinement Y of a stream X: `base` is the pulled prefix of X,
/// `blocks` index into it, and `sums[i]` is the sum of the elements of
/// `blocks[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FsRefinement {
    pub base: Vec<u64>,
    pub blocks: FinSetSequence,
    pub sums: Vec<u64>,
}

impl FsRefinement {
    /// Checks the refinement structure: every block sums to its output.
    pub fn validate(&self) -> Result<()> {
        if self.blocks.len() != self.sums.len() {
            return Err(Error::InvalidInput("blocks and sums lengths differ".into()));
        }
        for (block, &sum) in self.blocks.items().iter().zip(&self.sums) {
            let mut total = 0u64;
            for &i in block {
                let v = self
                    .base
                    .get(i as usize)
                    .ok_or(Error::IndexOutOfRange { index: i as usize, len: self.base.len() })?;
                total = total.checked_add(*v).ok_or(Error::Overflow("refinement sum"))?;
            }
            if total != sum {
                return Err(Error::InvalidInput(format!(
                    "block {block:?} sums to {total}, recorded {sum}"
                )));
            }
        }
        Ok(())
    }
}

/// Refines a stream into `count` outputs forming a 2-apart set: the
/// first output is the first element, and each next output is a fresh
/// block whose sum clears the previous output's mu, which is strictly
/// stronger than raising lambda alone and gives the apartness chain
/// directly.
pub fn normalize_two_apart(x: &mut Stream<'_>, count: usize) -> Result<FsRefinement> {
    let mut blocks = Vec::new();
    let mut sums = Vec::new();
    if count > 0 {
        let first = x.pull()?;
        blocks.push([0u32].into_iter().collect::<BTreeSet<u32>>());
        sums.push(first);
        for _ in 1..count {
            let target = profile(*sums.last().expect("nonempty"))?.mu + 1;
            let block = find_high_lambda(x, target)?;
            blocks.push(block.indices);
            sums.push(block.sum);
        }
    }
    let refinement =
        FsRefinement { base: x.record().to_vec(), blocks: FinSetSequence::new(blocks)?, sums };
    refinement.validate()?;
    Ok(refinement)
}

/// Union of the indexed blocks; a morphism from finite index sets into
/// the finite-union space of X.
pub fn iota_fu(x: &FinSetSequence, e: &BTreeSet<u32>) -> Result<BTreeSet<u32>> {
    let mut out = BTreeSet::new();
    for &i in e {
        let block = x
            .items()
            .get(i as usize)
            .ok_or(Error::IndexOutOfRange { index: i as usize, len: x.len() })?;
        out.extend(block.iter().copied());
    }
    Ok(out)
}

/// Instantiates block n of X by q(n) and unites the results; the word
/// whose restriction to dom p_n equals p_n[q(n)].
pub fn iota_located(x: &BlockSequence, q: &LocatedWord) -> Result<LocatedWord> {
    let mut out = LocatedWord::unit();
    for (&n, &cell) in q.cells() {
        let block = x
            .items()
            .get(n as usize)
            .ok_or(Error::IndexOutOfRange { index: n as usize, len: x.len() })?;
        out = out.union(&block.instantiate(cell))?;
    }
    Ok(out)
}

/// Concatenates ws[n] instantiated by p(n) in ascending index order,
/// collapsing located structure into a classical word.
pub fn collapse_to_words(p: &LocatedWord, ws: &VariableWordList) -> Result<Vec<Cell>> {
    let mut out = Vec::new();
    for (&n, &cell) in p.cells() {
        let w = ws
            .items()
            .get(n as usize)
            .ok_or(Error::IndexOutOfRange { index: n as usize, len: ws.len() })?;
        out.extend(w.iter().map(|&c| if c == Cell::Star { cell } else { c }));
    }
    Ok(out)
}

/// The canonical all-star sequence: w_n is the star repeated 2^n times.
pub fn canonical_star_words(count: u32) -> VariableWordList {
    VariableWordList::new(
        (0..count).map(|n| vec![Cell::Star; 1usize << n]).collect(),
    )
    .expect("all-star words are variable words")
}

/// Inverts [`collapse_to_words`] for the canonical all-star sequence:
/// the length's binary expansion fixes the block indices, and each chunk
/// must be constant.
pub fn lift_from_words(u: &[Cell]) -> Result<LocatedWord> {
    let len = u.len() as u64;
    let positions: Vec<u32> = (0..64).filter(|i| len >> i & 1 == 1).collect();
    let mut cells = BTreeMap::new();
    let mut offset = 0usize;
    for n in positions {
        let size = 1usize << n;
        let chunk = &u[offset..offset + size];
        let first = chunk[0];
        if chunk.iter().any(|&c| c != first) {
            return Err(Error::Parse(format!(
                "chunk for block {n} is not constant: {chunk:?}"
            )));
        }
        cells.insert(n, first);
        offset += size;
    }
    Ok(LocatedWord::from_cells(cells))
}
