//! JSON artifact formats: coloring instances and the certificates the
//! searches emit. Words are rendered in the canonical brace syntax and
//! fields keep a fixed order, so equal inputs produce byte-identical
//! files no matter how many workers ran the search.

use crate::alphabet::{Alphabet, ColorSet};
use crate::carlson::{CarlsonCertificate, MatchKind, MatchStructure};
use crate::coloring::{Color, Coloring, SymbolicRule};
use crate::dynamics::WitnessSchedule;
use crate::error::{Error, Result};
use crate::hales_jewett::HjWitness;
use crate::spans::Arity;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// A coloring instance on disk: a full table in canonical_index order or
/// a symbolic rule, never both.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoringFile {
    pub alphabet: Alphabet,
    pub colors: u64,
    pub window: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<Color>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rule: Option<SymbolicRule>,
}

impl ColoringFile {
    pub fn from_coloring(f: &Coloring) -> Self {
        ColoringFile {
            alphabet: f.alphabet().clone(),
            colors: f.colors().count(),
            window: f.window(),
            table: if f.table().is_empty() { None } else { Some(f.table().to_vec()) },
            rule: f.rule().cloned(),
        }
    }

    pub fn into_coloring(self) -> Result<Coloring> {
        let colors = ColorSet::new(self.colors)?;
        match (self.table, self.rule) {
            (Some(table), None) => {
                Coloring::from_table(self.alphabet, colors, self.window, table)
            }
            (None, Some(rule)) => Coloring::from_rule(self.alphabet, colors, self.window, rule),
            (Some(table), Some(rule)) => {
                Coloring::from_table(self.alphabet, colors, self.window, table)?.with_rule(rule)
            }
            (None, None) => Err(Error::MalformedCertificate(
                "coloring file carries neither table nor rule".into(),
            )),
        }
    }
}

/// How a schedule certificate claims its witnesses behave.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScheduleClaim {
    PlainRecurrence,
    StrongProximality,
}

/// The witness payload of each certificate kind.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CertPayload {
    /// every letter instantiation of the word has the stated color
    Hj { word: String, color: Color },
    /// the letter span of the blocks is monochromatic in the stated color
    Carlson { blocks: Vec<String>, color: Color, arity: Arity },
    /// every span element of y is absorbed by some word of f_set
    Match {
        f_set: Vec<String>,
        y: Vec<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        color: Option<Color>,
        full: bool,
    },
    /// per-level witnesses for an extraction induction
    Schedule {
        entries: Vec<ScheduleEntry>,
        claim: ScheduleClaim,
        /// instance hash of the second coloring for proximality claims
        #[serde(default, skip_serializing_if = "Option::is_none")]
        g_instance: Option<String>,
    },
    /// unions of the sets, read as first-letter words, share the color
    Fu { sets: Vec<Vec<u32>>, color: Color, arity: Arity },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScheduleEntry {
    pub ell: u32,
    pub word: String,
}

/// A certificate bound to the coloring it talks about by content hash.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateFile {
    pub instance: String,
    pub window: u32,
    pub tool_version: String,
    #[serde(flatten)]
    pub payload: CertPayload,
}

impl CertificateFile {
    pub fn from_hj(witness: &HjWitness, f: &Coloring) -> Self {
        CertificateFile {
            instance: f.content_hash(),
            window: witness.window,
            tool_version: TOOL_VERSION.into(),
            payload: CertPayload::Hj {
                word: f.alphabet().render(&witness.p),
                color: witness.color,
            },
        }
    }

    pub fn from_carlson(cert: &CarlsonCertificate, f: &Coloring) -> Self {
        CertificateFile {
            instance: cert.coloring_id.clone(),
            window: cert.window,
            tool_version: TOOL_VERSION.into(),
            payload: CertPayload::Carlson {
                blocks: cert.x.items().iter().map(|b| f.alphabet().render(b)).collect(),
                color: cert.color,
                arity: cert.arity,
            },
        }
    }

    pub fn from_match(m: &MatchStructure, f: &Coloring) -> Self {
        let (color, full) = match m.kind {
            MatchKind::Half(i) => (Some(i), false),
            MatchKind::HalfAll => (None, false),
            MatchKind::Full => (None, true),
        };
        CertificateFile {
            instance: f.content_hash(),
            window: m.window,
            tool_version: TOOL_VERSION.into(),
            payload: CertPayload::Match {
                f_set: m.f_set.iter().map(|p| f.alphabet().render(p)).collect(),
                y: m.y.items().iter().map(|b| f.alphabet().render(b)).collect(),
                color,
                full,
            },
        }
    }

    pub fn from_schedule(
        sched: &WitnessSchedule,
        claim: ScheduleClaim,
        f: &Coloring,
        g: Option<&Coloring>,
        window: u32,
    ) -> Self {
        CertificateFile {
            instance: f.content_hash(),
            window,
            tool_version: TOOL_VERSION.into(),
            payload: CertPayload::Schedule {
                entries: sched
                    .entries()
                    .iter()
                    .map(|(ell, p)| ScheduleEntry { ell: *ell, word: f.alphabet().render(p) })
                    .collect(),
                claim,
                g_instance: g.map(|g| g.content_hash()),
            },
        }
    }

    pub fn from_fu(
        sets: &[BTreeSet<u32>],
        color: Color,
        arity: Arity,
        f: &Coloring,
        window: u32,
    ) -> Self {
        CertificateFile {
            instance: f.content_hash(),
            window,
            tool_version: TOOL_VERSION.into(),
            payload: CertPayload::Fu {
                sets: sets.iter().map(|e| e.iter().copied().collect()).collect(),
                color,
                arity,
            },
        }
    }

    /// Canonical on-disk rendering: pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("certificate serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s)
            .map_err(|e| Error::MalformedCertificate(format!("unreadable certificate: {e}")))
    }
}

impl ColoringFile {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("coloring serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s)
            .map_err(|e| Error::MalformedCertificate(format!("unreadable coloring: {e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carlson::carlson_search;
    use crate::hales_jewett::hj_witness;

    fn parity() -> Coloring {
        Coloring::parity(Alphabet::ab(), 6)
    }

    #[test]
    fn coloring_files_roundtrip_both_flavors() {
        let f = parity();
        let file = ColoringFile::from_coloring(&f);
        assert!(file.table.is_none());
        let back = file.clone().into_coloring().unwrap();
        assert_eq!(back.content_hash(), f.content_hash());
        let json = file.to_json();
        assert_eq!(ColoringFile::from_json(&json).unwrap(), file);

        let t = Coloring::from_table(
            Alphabet::ab(),
            ColorSet::new(2).unwrap(),
            1,
            vec![0, 1, 1],
        )
        .unwrap();
        let tf = ColoringFile::from_coloring(&t);
        assert_eq!(tf.table.as_deref(), Some(&[0, 1, 1][..]));
        assert_eq!(
            tf.into_coloring().unwrap().content_hash(),
            t.content_hash()
        );
    }

    #[test]
    fn certificates_roundtrip_and_stay_canonical() {
        let f = parity();
        let cert = carlson_search(&f, 2, Arity::All, 4).unwrap();
        let file = CertificateFile::from_carlson(&cert, &f);
        let json = file.to_json();
        assert_eq!(CertificateFile::from_json(&json).unwrap(), file);
        assert_eq!(json, CertificateFile::from_json(&json).unwrap().to_json());
        match &file.payload {
            CertPayload::Carlson { blocks, color, .. } => {
                assert_eq!(blocks, &["{0:*,1:*}", "{2:*,3:*}"]);
                assert_eq!(*color, 0);
            }
            other => panic!("wrong payload {other:?}"),
        }
    }

    #[test]
    fn hj_certificates_carry_the_witness_word() {
        let f = parity();
        let w = hj_witness(&f, &Alphabet::ab(), 2).unwrap().unwrap();
        let file = CertificateFile::from_hj(&w, &f);
        match &file.payload {
            CertPayload::Hj { word, color } => {
                assert_eq!(word, "{0:*}");
                assert_eq!(*color, 1);
            }
            other => panic!("wrong payload {other:?}"),
        }
    }

    #[test]
    fn empty_coloring_files_are_rejected() {
        let file = ColoringFile {
            alphabet: Alphabet::ab(),
            colors: 2,
            window: 2,
            table: None,
            rule: None,
        };
        assert!(matches!(
            file.into_coloring(),
            Err(Error::MalformedCertificate(_))
        ));
    }
}
