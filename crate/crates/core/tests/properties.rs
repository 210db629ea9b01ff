//! Property tests for the structural invariants: index bijections,
//! union algebra, span cardinalities, witness soundness, and the
//! search/verify agreement on freshly produced certificates.

use locword::carlson::carlson_search;
use locword::dynamics::{check_recurrence, verify_recurrence_witness};
use locword::hales_jewett::hj_witness;
use locword::spans::{finite_unions, span_located};
use locword::transport::{finset_to_nat, iota_fu, nat_to_finset};
use locword::word::{
    canonical_index, extended_index, window_size, word_at_extended_index, word_at_index,
};
use locword::{
    verify, Alphabet, Arity, Cell, CertificateFile, ColorSet, Coloring, FinSetSequence,
    LocatedWord, RecurrenceKind, SpanMode,
};
use proptest::prelude::*;
use std::collections::BTreeSet;

fn ab() -> Alphabet {
    Alphabet::ab()
}

fn plain_word_strategy(k: u8, window: u32) -> impl Strategy<Value = LocatedWord> {
    prop::collection::vec(prop::option::of(0..k), window as usize).prop_map(|cells| {
        LocatedWord::from_cells(
            cells
                .into_iter()
                .enumerate()
                .filter_map(|(i, c)| c.map(|r| (i as u32, Cell::Letter(r)))),
        )
    })
}

fn table_coloring_strategy(window: u32) -> impl Strategy<Value = Coloring> {
    let len = window_size(2, window).unwrap() as usize;
    prop::collection::vec(0u64..2, len).prop_map(move |table| {
        Coloring::from_table(ab(), ColorSet::new(2).unwrap(), window, table).unwrap()
    })
}

#[test]
fn canonical_index_is_a_bijection_at_small_sizes() {
    for k in 1u8..=3 {
        for window in 0u32..=6 {
            let size = window_size(k, window).unwrap();
            let mut seen = BTreeSet::new();
            for idx in 0..size {
                let w = word_at_index(idx, k, window).unwrap();
                assert_eq!(canonical_index(&w, k, window).unwrap(), idx);
                assert!(seen.insert(w.clone()));
                // indices below (k+1)^l are exactly the words inside [0, l)
                for ell in 0..=window {
                    let inside = w.max_pos().map_or(true, |m| m < ell);
                    let prefix = idx < window_size(k, ell).unwrap();
                    assert_eq!(inside, prefix, "k={k} window={window} idx={idx} ell={ell}");
                }
            }
            assert_eq!(seen.len() as u64, size);
        }
    }
}

#[test]
fn extended_index_is_a_bijection_at_small_sizes() {
    for k in 1u8..=3 {
        for window in 0u32..=5 {
            let size = (u64::from(k) + 2).pow(window);
            let mut seen = BTreeSet::new();
            for idx in 0..size {
                let w = word_at_extended_index(idx, k, window).unwrap();
                assert_eq!(extended_index(&w, k, window).unwrap(), idx);
                assert!(seen.insert(w));
            }
            assert_eq!(seen.len() as u64, size);
        }
    }
}

proptest! {
    #[test]
    fn union_of_separated_words_is_their_concatenation(
        a in plain_word_strategy(2, 5),
        b in plain_word_strategy(2, 5),
    ) {
        let offset = a.max_pos().map_or(0, |m| m + 1);
        let b = b.translate(offset);
        let u = a.union(&b).unwrap();
        prop_assert_eq!(u.len(), a.len() + b.len());
        prop_assert_eq!(b.union(&a).unwrap(), u.clone());
        for (&pos, &cell) in a.cells().chain(b.cells()) {
            prop_assert_eq!(u.get(pos), Some(cell));
        }
    }

    #[test]
    fn unit_is_neutral_for_union(a in plain_word_strategy(2, 5)) {
        let unit = LocatedWord::unit();
        prop_assert_eq!(unit.union(&a).unwrap(), a.clone());
        prop_assert_eq!(a.union(&unit).unwrap(), a);
    }

    #[test]
    fn overlapping_words_refuse_union(a in plain_word_strategy(2, 5)) {
        prop_assume!(!a.is_unit());
        prop_assert!(a.union(&a).is_err());
    }

    #[test]
    fn letter_span_counts_match_the_closed_form(
        n in 1usize..=3,
        fills in prop::collection::vec(prop::option::of(0u8..2), 3),
    ) {
        // block i occupies {2i, 2i+1}: a star plus an optional letter
        let blocks: Vec<LocatedWord> = (0..n)
            .map(|i| {
                let base = 2 * i as u32;
                let mut cells = vec![(base, Cell::Star)];
                if let Some(r) = fills[i] {
                    cells.push((base + 1, Cell::Letter(r)));
                }
                LocatedWord::from_cells(cells)
            })
            .collect();
        let k = 2u64;
        let letters = span_located(&blocks, &ab(), SpanMode::Letters, Arity::All).unwrap();
        prop_assert_eq!(letters.len() as u64, (k + 1).pow(n as u32) - 1);
        let with_star = span_located(&blocks, &ab(), SpanMode::WithStar, Arity::All).unwrap();
        prop_assert_eq!(
            with_star.len() as u64,
            (k + 2).pow(n as u32) - (k + 1).pow(n as u32)
        );
    }

    #[test]
    fn finite_union_counts_match_binomial_sums(n in 1usize..=5, r in 1u64..=5) {
        let x = FinSetSequence::new(
            (0..n).map(|i| [2 * i as u32, 2 * i as u32 + 1].into_iter().collect()).collect(),
        )
        .unwrap();
        let all = finite_unions(&x, Arity::All).unwrap();
        prop_assert_eq!(all.len() as u64, (1u64 << n) - 1);
        let bounded = finite_unions(&x, Arity::AtMost(r)).unwrap();
        let expect: u64 = (1..=r.min(n as u64))
            .map(|i| {
                let mut c = 1u64;
                for j in 0..i {
                    c = c * (n as u64 - j) / (j + 1);
                }
                c
            })
            .sum();
        prop_assert_eq!(bounded.len() as u64, expect);
        for e in &bounded {
            prop_assert!(all.contains(e));
        }
    }

    #[test]
    fn hj_witnesses_at_the_critical_window_are_sound(f in table_coloring_strategy(2)) {
        // two letters, two colors: window 2 always carries a witness
        let w = hj_witness(&f, &ab(), 2).unwrap().expect("window 2 is critical for k = c = 2");
        prop_assert!(w.p.is_variable());
        prop_assert!(w.p.max_pos().unwrap() < 2);
        let file = CertificateFile::from_hj(&w, &f);
        prop_assert!(verify(&file, &f, None).unwrap().ok);
    }

    #[test]
    fn plain_recurrence_witnesses_restrict_to_weak_ones(f in table_coloring_strategy(4)) {
        let outcome = check_recurrence(&f, &ab(), 1, 4, RecurrenceKind::Plain).unwrap();
        if let Some(p) = outcome.witness() {
            prop_assert!(verify_recurrence_witness(&f, &ab(), 1, p, RecurrenceKind::Plain).unwrap());
            for r in 0..2 {
                let pa = p.instantiate(Cell::Letter(r));
                prop_assert!(
                    verify_recurrence_witness(&f, &ab(), 1, &pa, RecurrenceKind::Weak).unwrap()
                );
            }
        }
    }

    #[test]
    fn single_block_carlson_certificates_always_verify(f in table_coloring_strategy(4)) {
        // m = 1 within window 4 is guaranteed: window 2 already suffices
        let cert = carlson_search(&f, 1, Arity::All, 4).unwrap();
        let file = CertificateFile::from_carlson(&cert, &f);
        prop_assert!(verify(&file, &f, None).unwrap().ok);
    }

    #[test]
    fn finset_encoding_roundtrips(n in 0u64..(1 << 20)) {
        prop_assert_eq!(finset_to_nat(&nat_to_finset(n).unwrap()).unwrap(), n);
    }

    #[test]
    fn iota_fu_preserves_unions(
        n in 2usize..=6,
        picks in prop::collection::vec(prop::option::of(prop::bool::ANY), 6),
    ) {
        let x = FinSetSequence::new(
            (0..n).map(|i| [3 * i as u32, 3 * i as u32 + 1].into_iter().collect()).collect(),
        )
        .unwrap();
        // split picked indices into two disjoint halves
        let mut e1 = BTreeSet::new();
        let mut e2 = BTreeSet::new();
        for (i, pick) in picks.iter().take(n).enumerate() {
            match pick {
                Some(true) => {
                    e1.insert(i as u32);
                }
                Some(false) => {
                    e2.insert(i as u32);
                }
                None => {}
            }
        }
        prop_assume!(!e1.is_empty() && !e2.is_empty());
        let joined: BTreeSet<u32> = e1.union(&e2).copied().collect();
        let lhs = iota_fu(&x, &joined).unwrap();
        let rhs: BTreeSet<u32> = iota_fu(&x, &e1)
            .unwrap()
            .union(&iota_fu(&x, &e2).unwrap())
            .copied()
            .collect();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn arity_serialization_roundtrips(r in 1u64..100) {
        let all: Arity = serde_json::from_str("\"all\"").unwrap();
        prop_assert_eq!(all, Arity::All);
        let n: Arity = serde_json::from_str(&r.to_string()).unwrap();
        prop_assert_eq!(n, Arity::AtMost(r));
        prop_assert_eq!(serde_json::to_string(&Arity::AtMost(r)).unwrap(), r.to_string());
        prop_assert_eq!(serde_json::to_string(&Arity::All).unwrap(), "\"all\"");
    }
}
