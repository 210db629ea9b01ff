//! Acceptance gate: one test per criterion, each a single pass/fail
//! line under `cargo test --test acceptance`. Every search artifact is
//! rechecked through the independent verifier, oracle comparisons use
//! enumerators written directly against the definitions, and each
//! criterion enforces its wall-clock budget.

use locword::carlson::{carlson_search, check_match, is_thin, is_weakly_thin};
use locword::coloring::{ColorMap, FnColorMap, FnSetColorMap, SetColorMap};
use locword::dynamics::{
    build_proximal_schedule, build_recurrent_schedule, check_proximality, check_recurrence,
    extract_from_proximal, extract_from_recurrent, flim_check, flim_search,
    flim_weak_proximal_witness, shift_restrict, strengthen_proximality,
    verify_proximality_witness, verify_recurrence_witness,
};
use locword::hales_jewett::{hj_number, hj_witness};
use locword::spans::{is_homogeneous, is_homogeneous_sets};
use locword::transport::{
    canonical_star_words, collapse_to_words, finset_to_nat, iota_fu, iota_located, is_two_apart,
    nat_to_finset, normalize_two_apart, Stream,
};
use locword::word::{all_words, canonical_index, window_size, word_at_index, words_in_range};
use locword::{
    verify, Alphabet, Arity, BlockSequence, Cell, CertificateFile, Color, ColorSet, Coloring,
    Error, FinSetSequence, LocatedWord, MatchKind, MatchStructure, ProximalityKind,
    RecurrenceKind, ScheduleClaim, SetColoring, SymbolicRule, WeakBlockSequence,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;
use std::time::{Duration, Instant};

/// Naive enumerator for the critical Hales-Jewett window with two
/// letters and two colors. Everything is built from raw vectors: words
/// are option arrays over positions, colorings are bitmasks over the
/// word list, instantiation is a map over entries. Nothing in here
/// touches the library's search or word types.
mod naive_hj {
    const ABSENT: u8 = 0;
    const STAR: u8 = 3;

    fn plain_words(n: u32) -> Vec<Vec<u8>> {
        // cells: 0 absent, 1/2 the letters
        let mut out = vec![vec![]];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|w| {
                    (0u8..3).map(move |c| {
                        let mut w = w.clone();
                        w.push(c);
                        w
                    })
                })
                .collect();
        }
        out.retain(|w| w.iter().any(|&c| c != ABSENT));
        out
    }

    fn variable_words(n: u32) -> Vec<Vec<u8>> {
        let mut out = vec![vec![]];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|w| {
                    (0u8..4).map(move |c| {
                        let mut w = w.clone();
                        w.push(c);
                        w
                    })
                })
                .collect();
        }
        out.retain(|w| w.iter().any(|&c| c == STAR));
        out
    }

    fn instantiate(w: &[u8], letter: u8) -> Vec<u8> {
        w.iter().map(|&c| if c == STAR { letter } else { c }).collect()
    }

    /// Least window n <= n_max where every 2-coloring of the nonempty
    /// words inside [0, n) has a variable word with both instantiations
    /// equal in color.
    pub fn v22(n_max: u32) -> Option<u32> {
        'windows: for n in 1..=n_max {
            let words = plain_words(n);
            let variables = variable_words(n);
            assert!(words.len() < 30, "naive enumeration only works at tiny windows");
            for mask in 0u64..1 << words.len() {
                let color_of = |w: &Vec<u8>| -> u64 {
                    let i = words.iter().position(|x| x == w).expect("in window");
                    mask >> i & 1
                };
                let admits = variables
                    .iter()
                    .any(|v| color_of(&instantiate(v, 1)) == color_of(&instantiate(v, 2)));
                if !admits {
                    continue 'windows;
                }
            }
            return Some(n);
        }
        None
    }
}

fn ab() -> Alphabet {
    Alphabet::ab()
}

fn seeded(n: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(n)
}

fn two_colors() -> ColorSet {
    ColorSet::new(2).unwrap()
}

fn finish(criterion: &str, start: Instant, limit: Duration) {
    let elapsed = start.elapsed();
    assert!(elapsed <= limit, "{criterion} took {elapsed:?}, budget {limit:?}");
    println!("{criterion}: pass in {elapsed:?}");
}

/// Random two-color table coloring over the window, sometimes nearly
/// constant so that homogeneous families actually occur in the suites.
fn random_coloring(rng: &mut ChaCha8Rng, window: u32) -> Coloring {
    let len = window_size(2, window).unwrap() as usize;
    let table = random_table(rng, len);
    Coloring::from_table(ab(), two_colors(), window, table).unwrap()
}

fn random_table(rng: &mut ChaCha8Rng, len: usize) -> Vec<Color> {
    if rng.gen_bool(0.3) {
        let base = rng.gen_range(0..2);
        let mut t = vec![base; len];
        for _ in 0..rng.gen_range(0..3) {
            let i = rng.gen_range(0..len);
            t[i] = 1 - t[i];
        }
        t
    } else {
        (0..len).map(|_| rng.gen_range(0..2)).collect()
    }
}

fn random_set_coloring(rng: &mut ChaCha8Rng, window: u32) -> SetColoring {
    let table = random_table(rng, 1 << window);
    SetColoring::from_table(two_colors(), window, table).unwrap()
}

fn all_equal(colors: impl IntoIterator<Item = Color>) -> Option<Color> {
    let mut it = colors.into_iter();
    let first = it.next().expect("nonempty family");
    it.all(|c| c == first).then_some(first)
}

#[test]
fn criterion_1_encoding_roundtrips() {
    let start = Instant::now();
    let mut rng = seeded(1);
    for _ in 0..10_000 {
        let n = rng.gen_range(1..1u64 << 20);
        assert_eq!(finset_to_nat(&nat_to_finset(n).unwrap()).unwrap(), n);
    }
    for k in 1u8..=3 {
        for window in 0u32..=6 {
            let size = window_size(k, window).unwrap();
            let mut seen = BTreeSet::new();
            for idx in 0..size {
                let w = word_at_index(idx, k, window).unwrap();
                assert_eq!(canonical_index(&w, k, window).unwrap(), idx);
                seen.insert(w);
            }
            assert_eq!(seen.len() as u64, size);
        }
    }
    finish("criterion 1 (encoding roundtrips)", start, Duration::from_secs(1));
}

#[test]
fn criterion_2_two_apart_normalization() {
    let start = Instant::now();
    let mut rng = seeded(2);
    for _ in 0..100 {
        let stream_seed = rng.gen::<u64>();
        let mut r = ChaCha8Rng::seed_from_u64(stream_seed);
        let mut v = 0u64;
        let iter = std::iter::from_fn(move || {
            v += r.gen_range(1..=2);
            Some(v)
        });
        let mut stream = Stream::new(iter, 4_000_000);
        let refinement = normalize_two_apart(&mut stream, 20).unwrap();
        assert_eq!(refinement.sums.len(), 20);
        assert!(is_two_apart(&refinement.sums).unwrap());
        refinement.validate().unwrap();
        // every output is the sum of a block of inputs
        for (block, &sum) in refinement.blocks.items().iter().zip(&refinement.sums) {
            let total: u64 = block.iter().map(|&i| refinement.base[i as usize]).sum();
            assert_eq!(total, sum);
        }
        // sampled arity-<=3 sums of outputs are finite sums of distinct
        // inputs: the union of their index blocks realizes the sum
        for _ in 0..5 {
            let arity = rng.gen_range(1..=3usize);
            let mut picks = BTreeSet::new();
            while picks.len() < arity {
                picks.insert(rng.gen_range(0..20usize));
            }
            let claimed: u64 = picks.iter().map(|&i| refinement.sums[i]).sum();
            let mut union = BTreeSet::new();
            let mut total_len = 0usize;
            for &i in &picks {
                let block = &refinement.blocks.items()[i];
                total_len += block.len();
                union.extend(block.iter().copied());
            }
            assert_eq!(union.len(), total_len, "blocks of distinct outputs are disjoint");
            let direct: u64 = union.iter().map(|&i| refinement.base[i as usize]).sum();
            assert_eq!(direct, claimed);
        }
    }
    finish("criterion 2 (2-apart normalization)", start, Duration::from_secs(10));
}

#[test]
fn criterion_3_homogeneity_transport() {
    let start = Instant::now();
    let mut rng = seeded(3);
    for instance in 0..200 {
        match instance % 4 {
            0 => {
                // naturals into finite sets along the binary expansion
                let g = random_set_coloring(&mut rng, 6);
                let family: Vec<u64> = (1..64).collect();
                let images: Vec<BTreeSet<u32>> =
                    family.iter().map(|&n| nat_to_finset(n).unwrap()).collect();
                let lhs = all_equal(
                    family.iter().map(|&n| g.color_of(&nat_to_finset(n).unwrap()).unwrap()),
                );
                let rhs = is_homogeneous_sets(&g, &images).unwrap();
                assert_eq!(lhs, rhs);
            }
            1 => {
                // index sets into the finite-union space of a block sequence
                let g = random_set_coloring(&mut rng, 8);
                let x = FinSetSequence::new(
                    (0..3u32)
                        .map(|i| {
                            let mut b = BTreeSet::new();
                            b.insert(3 * i);
                            if rng.gen_bool(0.5) {
                                b.insert(3 * i + 1);
                            }
                            b
                        })
                        .collect(),
                )
                .unwrap();
                let family: Vec<BTreeSet<u32>> = (1u32..8)
                    .map(|mask| (0..3).filter(|i| mask >> i & 1 == 1).collect())
                    .collect();
                let images: Vec<BTreeSet<u32>> =
                    family.iter().map(|e| iota_fu(&x, e).unwrap()).collect();
                let pulled = FnSetColorMap::new(2, |e| g.color_of(&iota_fu(&x, e)?));
                let lhs = is_homogeneous_sets(&pulled, &family).unwrap();
                let rhs = is_homogeneous_sets(&g, &images).unwrap();
                assert_eq!(lhs, rhs);
            }
            2 => {
                // index words into the letter span of a located block sequence
                let f = random_coloring(&mut rng, 6);
                let x = BlockSequence::new(
                    (0..2u32)
                        .map(|i| {
                            let mut cells = vec![(3 * i, Cell::Star)];
                            if rng.gen_bool(0.5) {
                                cells.push((3 * i + 1, Cell::Letter(rng.gen_range(0..2))));
                            }
                            LocatedWord::from_cells(cells)
                        })
                        .collect(),
                )
                .unwrap();
                let family: Vec<LocatedWord> = words_in_range(2, 0, 2).collect();
                let images: Vec<LocatedWord> =
                    family.iter().map(|q| iota_located(&x, q).unwrap()).collect();
                let pulled = FnColorMap::new(2, |q: &LocatedWord| {
                    f.color_of(&iota_located(&x, q)?)
                });
                let lhs = is_homogeneous(&pulled, &family).unwrap();
                let rhs = is_homogeneous(&f, &images).unwrap();
                assert_eq!(lhs, rhs);
            }
            _ => {
                // located words onto classical words over the all-star blocks
                let ws = canonical_star_words(3);
                let salt = rng.gen::<u64>();
                let classical_color = move |u: &[Cell]| -> Color {
                    let mut h = 0xcbf29ce484222325u64 ^ salt;
                    for c in u {
                        let byte = match c {
                            Cell::Star => 0u8,
                            Cell::Letter(r) => r + 1,
                        };
                        h ^= u64::from(byte);
                        h = h.wrapping_mul(0x100000001b3);
                    }
                    h % 2
                };
                let family: Vec<LocatedWord> =
                    all_words(2, 3).filter(|w| !w.is_unit()).collect();
                let images: Vec<Vec<Cell>> = family
                    .iter()
                    .map(|p| collapse_to_words(p, &ws).unwrap())
                    .collect();
                let pulled = FnColorMap::new(2, |p: &LocatedWord| {
                    Ok(classical_color(&collapse_to_words(p, &ws)?))
                });
                let lhs = is_homogeneous(&pulled, &family).unwrap();
                let rhs = all_equal(images.iter().map(|u| classical_color(u)));
                assert_eq!(lhs, rhs);
            }
        }
    }
    finish("criterion 3 (homogeneity transport)", start, Duration::from_secs(30));
}

#[test]
fn criterion_4_hales_jewett_number_and_witnesses() {
    let start = Instant::now();
    let oracle = naive_hj::v22(3).expect("critical window within the cap");
    assert_eq!(oracle, 2);
    assert_eq!(hj_number(2, 2, 3).unwrap(), oracle);
    let mut rng = seeded(4);
    for _ in 0..1000 {
        let f = random_coloring(&mut rng, oracle);
        let w = hj_witness(&f, &ab(), oracle).unwrap().expect("window is critical");
        let file = CertificateFile::from_hj(&w, &f);
        assert!(verify(&file, &f, None).unwrap().ok);
    }
    finish("criterion 4 (hales-jewett number and witnesses)", start, Duration::from_secs(300));
}

// criterion 5 oracles: spans and matches by direct quantifier
// enumeration over raw cell lists, sharing nothing with the checkers

fn oracle_instantiate(w: &LocatedWord, r: u8) -> LocatedWord {
    LocatedWord::from_cells(
        w.cells().map(|(&p, &c)| (p, if c == Cell::Star { Cell::Letter(r) } else { c })),
    )
}

fn oracle_union(a: &LocatedWord, b: &LocatedWord) -> LocatedWord {
    LocatedWord::from_cells(a.cells().chain(b.cells()).map(|(&p, &c)| (p, c)))
}

/// All unions of letter-instantiated subsets of the blocks; `with_star`
/// additionally lets a chosen block keep its stars, keeping only results
/// where at least one did.
fn oracle_span(blocks: &[LocatedWord], k: u8, with_star: bool) -> Vec<LocatedWord> {
    let n = blocks.len();
    let options = if with_star { k + 1 } else { k };
    let mut out = Vec::new();
    for mask in 1usize..1 << n {
        let chosen: Vec<&LocatedWord> =
            (0..n).filter(|i| mask >> i & 1 == 1).map(|i| &blocks[i]).collect();
        let mut assign = vec![0u8; chosen.len()];
        loop {
            let mut word = LocatedWord::unit();
            let mut starred = false;
            for (b, &r) in chosen.iter().zip(&assign) {
                if r == k {
                    starred = true;
                    word = oracle_union(&word, b);
                } else {
                    word = oracle_union(&word, &oracle_instantiate(b, r));
                }
            }
            if !with_star || starred {
                out.push(word);
            }
            let mut i = 0;
            while i < assign.len() {
                assign[i] += 1;
                if assign[i] < options {
                    break;
                }
                assign[i] = 0;
                i += 1;
            }
            if i == assign.len() {
                break;
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

fn oracle_match(f: &Coloring, m: &MatchStructure) -> bool {
    for q in oracle_span(m.y.items(), 2, false) {
        let cq = f.color_of(&q).unwrap();
        let target = match m.kind {
            MatchKind::Half(i) => {
                if cq != i {
                    continue;
                }
                i
            }
            MatchKind::HalfAll | MatchKind::Full => cq,
        };
        let absorbed = m.f_set.iter().any(|p| {
            (0..2u8).all(|r| {
                let pa = oracle_instantiate(p, r);
                f.color_of(&oracle_union(&pa, &q)).unwrap() == target
                    && (m.kind != MatchKind::Full || f.color_of(&pa).unwrap() == target)
            })
        });
        if !absorbed {
            return false;
        }
    }
    true
}

fn random_variable_word(rng: &mut ChaCha8Rng, lo: u32, width: u32) -> LocatedWord {
    let first = lo + rng.gen_range(0..width);
    let mut cells = vec![(first, Cell::Star)];
    if first + 1 < lo + width && rng.gen_bool(0.6) {
        let cell = match rng.gen_range(0..3) {
            0 => Cell::Star,
            r => Cell::Letter(r - 1),
        };
        cells.push((first + 1, cell));
    }
    LocatedWord::from_cells(cells)
}

#[test]
fn criterion_5_thinness_and_match_oracles() {
    let start = Instant::now();
    let mut rng = seeded(5);
    for instance in 0..1000 {
        let f = random_coloring(&mut rng, 8);
        let m_blocks = rng.gen_range(2..=3usize);
        let y = BlockSequence::new(
            (0..m_blocks)
                .map(|i| random_variable_word(&mut rng, 2 + 2 * i as u32, 2))
                .collect(),
        )
        .unwrap();
        let i_color = rng.gen_range(0..2);
        match instance % 3 {
            0 => {
                let got = is_thin(&f, &y, i_color, &ab()).unwrap().holds();
                let want = oracle_span(y.items(), 2, false)
                    .iter()
                    .all(|p| f.color_of(p).unwrap() != i_color);
                assert_eq!(got, want);
            }
            1 => {
                let got = is_weakly_thin(&f, &y, i_color, &ab()).unwrap().holds();
                let want = oracle_span(y.items(), 2, true).iter().all(|p| {
                    (0..2).any(|r| f.color_of(&oracle_instantiate(p, r)).unwrap() != i_color)
                });
                assert_eq!(got, want);
            }
            _ => {
                let mut f_set = vec![LocatedWord::from_cells([(0, Cell::Star)])];
                if rng.gen_bool(0.5) {
                    f_set.push(LocatedWord::from_cells([(
                        1,
                        if rng.gen_bool(0.5) { Cell::Star } else { Cell::Letter(0) },
                    )]));
                }
                f_set.retain(|p| p.is_variable());
                let kind = match (instance / 3) % 3 {
                    0 => MatchKind::Half(i_color),
                    1 => MatchKind::HalfAll,
                    _ => MatchKind::Full,
                };
                let structure = MatchStructure::new(f_set, y, kind, 8).unwrap();
                let got = check_match(&f, &structure, &ab()).unwrap().holds();
                assert_eq!(got, oracle_match(&f, &structure));
            }
        }
    }
    finish("criterion 5 (thinness and match oracles)", start, Duration::from_secs(60));
}

/// The window-growth policy: search at the smallest window hosting the
/// blocks and widen on exhaustion up to the cap.
fn grow_search(f: &Coloring, m: usize, cap: u32) -> Result<locword::CarlsonCertificate, Error> {
    let mut window = m as u32;
    loop {
        match carlson_search(f, m, Arity::All, window) {
            Err(Error::Exhausted) if window < cap => window += 1,
            other => return other,
        }
    }
}

#[test]
fn criterion_6_carlson_desk_scale() {
    let start = Instant::now();
    let parity = Coloring::parity(ab(), 4);
    let cert = carlson_search(&parity, 2, Arity::All, 4).unwrap();
    assert!(verify(&CertificateFile::from_carlson(&cert, &parity), &parity, None).unwrap().ok);

    let mut rng = seeded(6);
    let mut exhausted = 0usize;
    let mut produced = 0usize;
    let mut verified = 0usize;
    for _ in 0..500 {
        let f = random_coloring(&mut rng, 8);
        match grow_search(&f, 2, 8) {
            Ok(cert) => {
                produced += 1;
                if verify(&CertificateFile::from_carlson(&cert, &f), &f, None).unwrap().ok {
                    verified += 1;
                }
            }
            Err(Error::Exhausted) => exhausted += 1,
            Err(e) => panic!("search failed: {e}"),
        }
    }
    assert_eq!(verified, produced, "every produced certificate must verify");
    println!("criterion 6 counts: {produced} certificates, {exhausted} exhausted");
    finish("criterion 6 (carlson desk scale)", start, Duration::from_secs(600));
}

fn symbolic_suite() -> Vec<(&'static str, Coloring)> {
    let rules = [
        ("constant", SymbolicRule::Constant { value: 0 }),
        ("domain size parity", SymbolicRule::DomSizeMod { modulus: 2 }),
        ("letter count parity", SymbolicRule::LetterCountMod { letter: 'a', modulus: 2 }),
    ];
    rules
        .into_iter()
        .map(|(name, rule)| {
            (name, Coloring::from_rule(ab(), two_colors(), 16, rule).unwrap())
        })
        .collect()
}

#[test]
fn criterion_7_dynamics_hierarchy_soundness() {
    let start = Instant::now();
    let unit = LocatedWord::unit();
    for (name, f) in &symbolic_suite() {
        for ell in 0..=2u32 {
            let outcome = check_recurrence(f, &ab(), ell, 8, RecurrenceKind::Plain).unwrap();
            let p = outcome
                .witness()
                .unwrap_or_else(|| panic!("{name}: no plain witness at level {ell}"))
                .clone();
            for r in 0..2 {
                let pa = p.instantiate(Cell::Letter(r));
                assert!(
                    verify_recurrence_witness(f, &ab(), ell, &pa, RecurrenceKind::Weak).unwrap(),
                    "{name}: instantiation of a plain witness must be a weak witness"
                );
            }
        }

        let w = strengthen_proximality(f, f, &ab(), 1, 2, 10).unwrap();
        assert!(
            verify_proximality_witness(f, f, &ab(), 1, &w, ProximalityKind::Strong).unwrap(),
            "{name}: strengthened witness must pass all three equalities"
        );

        let sched = build_recurrent_schedule(f, &ab(), 2, 12).unwrap();
        let cert = extract_from_recurrent(f, &sched, 2).unwrap();
        assert_eq!(cert.color, f.color_of(&unit).unwrap());
        assert!(verify(&CertificateFile::from_carlson(&cert, f), f, None).unwrap().ok);
        let sfile =
            CertificateFile::from_schedule(&sched, ScheduleClaim::PlainRecurrence, f, None, 12);
        assert!(verify(&sfile, f, None).unwrap().ok);

        let psched = build_proximal_schedule(f, f, &ab(), 2, 12).unwrap();
        let (main, twin) = extract_from_proximal(f, f, &psched, 2).unwrap();
        assert!(verify(&CertificateFile::from_carlson(&main, f), f, None).unwrap().ok);
        assert!(verify(&CertificateFile::from_carlson(&twin, f), f, None).unwrap().ok);
        assert_eq!(twin.color, f.color_of(&unit).unwrap(), "{name}: twin honors g at the unit");
        let pfile = CertificateFile::from_schedule(
            &psched,
            ScheduleClaim::StrongProximality,
            f,
            Some(f),
            12,
        );
        assert!(verify(&pfile, f, Some(f)).unwrap().ok);
    }
    finish("criterion 7 (dynamics hierarchy soundness)", start, Duration::from_secs(60));
}

fn even_pairs(n: u32) -> WeakBlockSequence {
    WeakBlockSequence::new(
        (0..n)
            .map(|i| ab().parse_word(&format!("{{{}:a,{}:a}}", 2 * i, 2 * i + 1)).unwrap())
            .collect(),
    )
    .unwrap()
}

#[test]
fn criterion_8_flim_pipeline() {
    let start = Instant::now();
    let f = Coloring::parity(ab(), 16);
    let lim = flim_search(&f, &even_pairs(6), 4, 4, &ab()).unwrap();
    for ell in 0..=4u32 {
        let h = lim.g.restrict(ell, 2).unwrap();
        let offset = lim.level_offsets[ell as usize];
        assert!(
            flim_check(&f, &h, &lim.y, offset, &ab()).unwrap().holds(),
            "limit factor fails its own check at level {ell}"
        );
    }

    // the limit as a finite coloring is weakly proximal to f at every
    // level the window can express
    let g4 = Coloring::from_table(ab(), two_colors(), 4, lim.g.table().to_vec()).unwrap();
    for ell in 0..4u32 {
        let outcome =
            check_proximality(&f, &g4, &ab(), ell, 4, ProximalityKind::Weak).unwrap();
        let p = outcome.witness().expect("weak proximality witness within the window").clone();
        assert!(verify_proximality_witness(&f, &g4, &ab(), ell, &p, ProximalityKind::Weak)
            .unwrap());
    }

    // constructed witnesses pin the shifted factor to the limit
    for ell in 1..=2u32 {
        let p = flim_weak_proximal_witness(&f, &lim, ell, &ab()).unwrap();
        assert_eq!(
            shift_restrict(&f, &ab(), ell, &p).unwrap(),
            lim.g.restrict(ell, 2).unwrap()
        );
    }

    for (name, f) in &symbolic_suite() {
        let result = flim_search(f, &even_pairs(6), 2, 4, &ab());
        assert!(
            !matches!(result, Err(Error::AmbiguousLimit)),
            "{name}: ambiguity must never fire on the symbolic suite"
        );
        result.unwrap();
    }
    finish("criterion 8 (flim pipeline)", start, Duration::from_secs(60));
}

fn hj_suite_artifacts() -> (u32, String) {
    let v = hj_number(2, 2, 3).unwrap();
    let mut rng = seeded(4);
    let mut bytes = String::new();
    for _ in 0..1000 {
        let f = random_coloring(&mut rng, 2);
        let w = hj_witness(&f, &ab(), 2).unwrap().expect("window is critical");
        bytes.push_str(&CertificateFile::from_hj(&w, &f).to_json());
    }
    (v, bytes)
}

fn carlson_suite_artifacts() -> (usize, String) {
    let mut rng = seeded(6);
    let mut exhausted = 0usize;
    let mut bytes = String::new();
    for _ in 0..500 {
        let f = random_coloring(&mut rng, 8);
        match grow_search(&f, 2, 8) {
            Ok(cert) => bytes.push_str(&CertificateFile::from_carlson(&cert, &f).to_json()),
            Err(Error::Exhausted) => {
                exhausted += 1;
                bytes.push_str("exhausted\n");
            }
            Err(e) => panic!("search failed: {e}"),
        }
    }
    (exhausted, bytes)
}

#[test]
fn criterion_9_parallel_determinism() {
    let start = Instant::now();
    let mut hj_runs = Vec::new();
    let mut carlson_runs = Vec::new();
    for threads in [1usize, 2, 8] {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        hj_runs.push(pool.install(hj_suite_artifacts));
        carlson_runs.push(pool.install(carlson_suite_artifacts));
    }
    assert!(hj_runs.windows(2).all(|w| w[0] == w[1]), "hales-jewett artifacts differ");
    assert!(carlson_runs.windows(2).all(|w| w[0] == w[1]), "carlson artifacts differ");
    println!("criterion 9: byte-identical artifacts across 1, 2, and 8 workers");
    finish("criterion 9 (parallel determinism)", start, Duration::from_secs(1800));
}
