//! Independent certificate verification. Every check re-evaluates the
//! defining universal of the claimed property directly against the
//! coloring, one obligation per quantified instance. Nothing here is
//! shared with the searches that emit certificates, so a search bug
//! cannot hide inside its own verifier.

use crate::alphabet::Alphabet;
use crate::cert::{CertPayload, CertificateFile, ScheduleClaim, ScheduleEntry};
use crate::coloring::{Color, ColorMap, Coloring};
use crate::error::{Error, Result};
use crate::spans::{finite_unions, span_located, Arity, BlockSequence, FinSetSequence, SpanMode};
use crate::word::{window_size, word_at_index, Cell, LocatedWord};

/// One quantified instance of the certificate's defining property.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Obligation {
    pub description: String,
    pub ok: bool,
}

/// Outcome of a verification run: the certificate is valid iff every
/// obligation holds. Structural defects never reach a report; they are
/// raised as errors instead.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub obligations: Vec<Obligation>,
    pub ok: bool,
}

impl Report {
    fn from_obligations(obligations: Vec<Obligation>) -> Self {
        let ok = obligations.iter().all(|o| o.ok);
        Report { obligations, ok }
    }

    pub fn first_failure(&self) -> Option<&Obligation> {
        self.obligations.iter().find(|o| !o.ok)
    }
}

/// Check a certificate against the coloring it names. The instance hash
/// is compared first; a mismatch refuses the pairing outright. Schedule
/// certificates claiming strong proximality also need the second
/// coloring of the pair.
pub fn verify(cert: &CertificateFile, f: &Coloring, g: Option<&Coloring>) -> Result<Report> {
    if cert.instance != f.content_hash() {
        return Err(Error::HashMismatch);
    }
    match &cert.payload {
        CertPayload::Hj { word, color } => verify_hj(f, word, *color),
        CertPayload::Carlson { blocks, color, arity } => verify_carlson(f, blocks, *color, *arity),
        CertPayload::Match { f_set, y, color, full } => verify_match(f, f_set, y, *color, *full),
        CertPayload::Schedule { entries, claim, g_instance } => {
            verify_schedule(f, g, entries, *claim, g_instance.as_deref())
        }
        CertPayload::Fu { sets, color, arity } => verify_fu(f, sets, *color, *arity),
    }
}

fn malformed(e: Error) -> Error {
    Error::MalformedCertificate(e.to_string())
}

fn parse(alphabet: &Alphabet, s: &str) -> Result<LocatedWord> {
    alphabet.parse_word(s).map_err(malformed)
}

fn equality(alphabet: &Alphabet, label: &str, w: &LocatedWord, got: Color, want: Color) -> Obligation {
    Obligation {
        description: format!("{label}({}) = {got}, expected {want}", alphabet.render(w)),
        ok: got == want,
    }
}

fn verify_hj(f: &Coloring, word: &str, color: Color) -> Result<Report> {
    let p = parse(f.alphabet(), word)?;
    if !p.is_variable() {
        return Err(Error::MalformedCertificate(
            "hales-jewett witness carries no star".into(),
        ));
    }
    let mut obligations = Vec::new();
    for r in 0..f.alphabet().k() {
        let pa = p.instantiate(Cell::Letter(r));
        let got = f.color_of(&pa)?;
        obligations.push(equality(f.alphabet(), "f", &pa, got, color));
    }
    Ok(Report::from_obligations(obligations))
}

fn verify_carlson(f: &Coloring, blocks: &[String], color: Color, arity: Arity) -> Result<Report> {
    let items = blocks
        .iter()
        .map(|s| parse(f.alphabet(), s))
        .collect::<Result<Vec<_>>>()?;
    let x = BlockSequence::new(items).map_err(malformed)?;
    let mut obligations = Vec::new();
    for q in span_located(x.items(), f.alphabet(), SpanMode::Letters, arity)? {
        let got = f.color_of(&q)?;
        obligations.push(equality(f.alphabet(), "f", &q, got, color));
    }
    Ok(Report::from_obligations(obligations))
}

fn verify_match(
    f: &Coloring,
    f_set: &[String],
    y: &[String],
    color: Option<Color>,
    full: bool,
) -> Result<Report> {
    let alphabet = f.alphabet();
    let absorbers = f_set
        .iter()
        .map(|s| parse(alphabet, s))
        .collect::<Result<Vec<_>>>()?;
    if absorbers.iter().any(|p| !p.is_variable()) {
        return Err(Error::MalformedCertificate(
            "match absorber carries no star".into(),
        ));
    }
    let tail = BlockSequence::new(
        y.iter().map(|s| parse(alphabet, s)).collect::<Result<Vec<_>>>()?,
    )
    .map_err(malformed)?;
    let mut obligations = Vec::new();
    for q in span_located(tail.items(), alphabet, SpanMode::Letters, Arity::All)? {
        let cq = f.color_of(&q)?;
        let target = match color {
            Some(i) if cq != i => continue,
            Some(i) => i,
            None => cq,
        };
        let mut absorbed = false;
        'absorbers: for p in &absorbers {
            // an absorber must sit strictly below the span element
            match (p.max_pos(), q.min_pos()) {
                (Some(mp), Some(mq)) if mp < mq => {}
                _ => continue,
            }
            for r in 0..alphabet.k() {
                let pa = p.instantiate(Cell::Letter(r));
                if f.color_of(&pa.union(&q)?)? != target {
                    continue 'absorbers;
                }
                if full && f.color_of(&pa)? != target {
                    continue 'absorbers;
                }
            }
            absorbed = true;
            break;
        }
        obligations.push(Obligation {
            description: format!(
                "span element {} of color {target} is absorbed",
                alphabet.render(&q)
            ),
            ok: absorbed,
        });
    }
    Ok(Report::from_obligations(obligations))
}

fn verify_schedule(
    f: &Coloring,
    g: Option<&Coloring>,
    entries: &[ScheduleEntry],
    claim: ScheduleClaim,
    g_instance: Option<&str>,
) -> Result<Report> {
    let g = match claim {
        ScheduleClaim::PlainRecurrence => None,
        ScheduleClaim::StrongProximality => {
            let hash = g_instance.ok_or_else(|| {
                Error::MalformedCertificate("proximality schedule names no second instance".into())
            })?;
            let g = g.ok_or_else(|| {
                Error::InvalidInput(
                    "strong-proximality certificate needs the second coloring".into(),
                )
            })?;
            if g.content_hash() != hash {
                return Err(Error::HashMismatch);
            }
            Some(g)
        }
    };
    if entries.is_empty() {
        return Err(Error::MalformedCertificate("schedule without entries".into()));
    }
    let alphabet = f.alphabet();
    let k = alphabet.k();
    let mut obligations = Vec::new();
    let mut ell = 0u32;
    for entry in entries {
        let p = parse(alphabet, &entry.word)?;
        if !p.is_variable() {
            return Err(Error::MalformedCertificate(format!(
                "schedule witness {} carries no star",
                entry.word
            )));
        }
        let min = p.min_pos().expect("variable words are nonempty");
        if entry.ell != min {
            return Err(Error::MalformedCertificate(format!(
                "schedule key {} disagrees with witness level {min}",
                entry.ell
            )));
        }
        if min < ell {
            return Err(Error::MalformedCertificate(format!(
                "schedule gap: witness at level {min} below required level {ell}"
            )));
        }
        // the defining universal at the level the induction has reached
        for idx in 0..window_size(k, ell)? {
            let r = word_at_index(idx, k, ell)?;
            let base = match g {
                Some(g) => g.color_of(&r)?,
                None => f.color_of(&r)?,
            };
            for a in 0..k {
                let w = r.union(&p.instantiate(Cell::Letter(a)))?;
                if let Some(g) = g {
                    let got_g = g.color_of(&w)?;
                    obligations.push(equality(alphabet, "g", &w, got_g, base));
                }
                let got_f = f.color_of(&w)?;
                obligations.push(equality(alphabet, "f", &w, got_f, base));
            }
        }
        ell = 1 + p.max_pos().expect("variable words are nonempty");
    }
    Ok(Report::from_obligations(obligations))
}

fn verify_fu(f: &Coloring, sets: &[Vec<u32>], color: Color, arity: Arity) -> Result<Report> {
    let items = sets
        .iter()
        .map(|v| v.iter().copied().collect())
        .collect::<Vec<_>>();
    let x = FinSetSequence::new(items).map_err(malformed)?;
    let mut obligations = Vec::new();
    for e in finite_unions(&x, arity).map_err(malformed)? {
        let w = LocatedWord::from_cells(e.iter().map(|&i| (i, Cell::Letter(0))));
        let got = f.color_of(&w)?;
        obligations.push(equality(f.alphabet(), "f", &w, got, color));
    }
    Ok(Report::from_obligations(obligations))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carlson::carlson_search;
    use crate::cert::CertificateFile;
    use crate::coloring::Coloring;
    use crate::dynamics::build_recurrent_schedule;
    use crate::hales_jewett::hj_witness;

    fn parity(window: u32) -> Coloring {
        Coloring::parity(Alphabet::ab(), window)
    }

    #[test]
    fn valid_carlson_certificates_report_every_span_element() {
        let f = parity(4);
        let cert = carlson_search(&f, 2, Arity::All, 4).unwrap();
        let file = CertificateFile::from_carlson(&cert, &f);
        let report = verify(&file, &f, None).unwrap();
        assert!(report.ok);
        // two blocks, letter span: 2k instantiations of each single block
        // plus k*k of the pair over k = 2 letters, deduplicated
        let expect = span_located(
            &[
                Alphabet::ab().parse_word("{0:*,1:*}").unwrap(),
                Alphabet::ab().parse_word("{2:*,3:*}").unwrap(),
            ],
            &Alphabet::ab(),
            SpanMode::Letters,
            Arity::All,
        )
        .unwrap()
        .len();
        assert_eq!(report.obligations.len(), expect);
        assert!(report.first_failure().is_none());
    }

    #[test]
    fn tampered_color_fails_at_the_first_span_element() {
        let f = parity(4);
        let cert = carlson_search(&f, 2, Arity::All, 4).unwrap();
        let mut file = CertificateFile::from_carlson(&cert, &f);
        if let CertPayload::Carlson { color, .. } = &mut file.payload {
            *color += 1;
        }
        let report = verify(&file, &f, None).unwrap();
        assert!(!report.ok);
        let first = report.first_failure().unwrap();
        assert!(first.description.contains("expected 1"));
    }

    #[test]
    fn hash_mismatch_is_refused_before_any_evaluation() {
        let f = parity(4);
        let cert = carlson_search(&f, 2, Arity::All, 4).unwrap();
        let file = CertificateFile::from_carlson(&cert, &f);
        let other = parity(5);
        assert!(matches!(verify(&file, &other, None), Err(Error::HashMismatch)));
    }

    #[test]
    fn hj_certificates_verify_and_detect_tampering() {
        let f = parity(3);
        let w = hj_witness(&f, &Alphabet::ab(), 3).unwrap().unwrap();
        let mut file = CertificateFile::from_hj(&w, &f);
        assert!(verify(&file, &f, None).unwrap().ok);
        if let CertPayload::Hj { word, .. } = &mut file.payload {
            *word = "{0:a}".into();
        }
        assert!(matches!(
            verify(&file, &f, None),
            Err(Error::MalformedCertificate(_))
        ));
    }

    #[test]
    fn schedule_gaps_are_malformed() {
        let f = parity(8);
        let sched = build_recurrent_schedule(&f, &Alphabet::ab(), 2, 8).unwrap();
        let file = CertificateFile::from_schedule(
            &sched,
            ScheduleClaim::PlainRecurrence,
            &f,
            None,
            8,
        );
        let report = verify(&file, &f, None).unwrap();
        assert!(report.ok);

        // repeat the first witness: the induction level has already
        // moved past it, so the walk finds a gap
        let mut gapped = file.clone();
        if let CertPayload::Schedule { entries, .. } = &mut gapped.payload {
            assert!(entries.len() >= 2);
            let first = entries[0].clone();
            entries[1] = first;
        }
        assert!(matches!(
            verify(&gapped, &f, None),
            Err(Error::MalformedCertificate(_))
        ));
    }

    #[test]
    fn fu_certificates_check_all_unions() {
        // domain-size parity: any union of two even-sized sets keeps color
        let f = parity(8);
        let sets = vec![
            [0u32, 1].into_iter().collect::<std::collections::BTreeSet<_>>(),
            [3u32, 4].into_iter().collect(),
        ];
        let file = CertificateFile::from_fu(&sets, 0, Arity::All, &f, 8);
        let report = verify(&file, &f, None).unwrap();
        assert!(report.ok);
        assert_eq!(report.obligations.len(), 3);
    }
}
