//! Combinatorics of located words: span calculus, Hales-Jewett and
//! Carlson-style searches emitting verifiable certificates, transport of
//! homogeneity along the standard isomorphisms, and finite-window
//! topological dynamics over the word semigroup.

pub mod alphabet;
pub mod carlson;
pub mod cert;
pub mod coloring;
pub mod dynamics;
pub mod error;
pub mod hales_jewett;
pub mod spans;
pub mod transport;
pub mod verify;
pub mod word;

pub use alphabet::{Alphabet, ColorSet};
pub use cert::{CertPayload, CertificateFile, ColoringFile, ScheduleClaim, TOOL_VERSION};
pub use verify::{verify, Obligation, Report};
pub use carlson::{
    CarlsonCertificate, CheckResult, FullMatchOutcome, MatchKind, MatchStructure,
};
pub use coloring::{Color, ColorMap, Coloring, SetColorMap, SetColoring, SymbolicRule};
pub use dynamics::{
    BoundedOutcome, Factor, FlimResult, OrbitTree, ProximalityKind, RecurrenceKind,
    WitnessSchedule,
};
pub use error::{Error, Result};
pub use spans::{Arity, BlockSequence, FinSetSequence, SpanMode, VariableWordList, WeakBlockSequence};
pub use word::{Cell, LocatedWord, WordKind};
