//! Python bindings: located words, colorings, the searches, and the
//! certificate verifier. Certificates cross the boundary as the same
//! JSON the command line reads and writes.

use std::collections::BTreeSet;

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;

use locword::carlson::{carlson_search, fu_homog_search};
use locword::coloring::FnSetColorMap;
use locword::dynamics::{check_proximality, check_recurrence};
use locword::hales_jewett::{hj_number, hj_witness};
use locword::spans::span_located;
use locword::word::{canonical_index, window_size, word_at_index};
use locword::{
    Alphabet, Arity, Cell, CertificateFile, ColorMap, ColorSet, Coloring, ColoringFile, Error,
    FinSetSequence, LocatedWord, ProximalityKind, RecurrenceKind, SpanMode,
};

create_exception!(
    locword_py,
    Exhausted,
    PyException,
    "The bounded search ended honestly without a result."
);

/// Honest exhaustion surfaces as its own exception class; everything
/// else is a ValueError carrying the library message.
fn to_py(e: Error) -> PyErr {
    match e {
        Error::Exhausted
        | Error::ExceedsBound { .. }
        | Error::BudgetExhausted { .. }
        | Error::AmbiguousLimit => Exhausted::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn arity_of(r: Option<u64>) -> Arity {
    match r {
        None => Arity::All,
        Some(n) => Arity::AtMost(n),
    }
}

#[pyclass(name = "Alphabet", frozen, eq)]
#[derive(PartialEq)]
struct PyAlphabet {
    inner: Alphabet,
}

#[pymethods]
impl PyAlphabet {
    #[new]
    #[pyo3(signature = (letters, star = '*'))]
    fn new(letters: &str, star: char) -> PyResult<Self> {
        let letters: Vec<char> = letters.chars().collect();
        Ok(Self { inner: Alphabet::new(&letters, star).map_err(to_py)? })
    }

    #[getter]
    fn k(&self) -> u8 {
        self.inner.k()
    }

    /// Parse the brace syntax, e.g. "{0:a,2:*}".
    fn parse(&self, text: &str) -> PyResult<PyWord> {
        Ok(PyWord { inner: self.inner.parse_word(text).map_err(to_py)? })
    }

    fn render(&self, word: &PyWord) -> String {
        self.inner.render(&word.inner)
    }

    fn __repr__(&self) -> String {
        format!("Alphabet(k={})", self.inner.k())
    }
}

#[pyclass(name = "Word", frozen, eq, hash, from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyWord {
    inner: LocatedWord,
}

#[pymethods]
impl PyWord {
    #[staticmethod]
    fn unit() -> Self {
        Self { inner: LocatedWord::unit() }
    }

    /// Ordered disjoint union; raises when the domains interleave.
    fn union(&self, other: &PyWord) -> PyResult<PyWord> {
        Ok(PyWord { inner: self.inner.union(&other.inner).map_err(to_py)? })
    }

    /// Replace every star with the letter of this rank.
    fn instantiate(&self, rank: u8) -> PyWord {
        PyWord { inner: self.inner.instantiate(Cell::Letter(rank)) }
    }

    fn precedes(&self, other: &PyWord) -> PyResult<bool> {
        self.inner.precedes(&other.inner).map_err(to_py)
    }

    #[getter]
    fn is_unit(&self) -> bool {
        self.inner.is_unit()
    }

    #[getter]
    fn is_variable(&self) -> bool {
        self.inner.is_variable()
    }

    #[getter]
    fn min_pos(&self) -> Option<u32> {
        self.inner.min_pos()
    }

    #[getter]
    fn max_pos(&self) -> Option<u32> {
        self.inner.max_pos()
    }

    fn domain(&self) -> Vec<u32> {
        self.inner.domain().collect()
    }

    fn __repr__(&self) -> String {
        // canonical a.. letters, independent of any alphabet object
        let cells: Vec<String> = self
            .inner
            .cells()
            .map(|(&p, &c)| match c {
                Cell::Star => format!("{p}:*"),
                Cell::Letter(r) => format!("{p}:{}", (b'a' + r) as char),
            })
            .collect();
        format!("Word({{{}}})", cells.join(","))
    }
}

#[pyclass(name = "Coloring", frozen)]
struct PyColoring {
    inner: Coloring,
}

#[pymethods]
impl PyColoring {
    /// Table in canonical index order, length (k+1)^window.
    #[staticmethod]
    fn from_table(
        alphabet: &PyAlphabet,
        colors: u64,
        window: u32,
        table: Vec<u64>,
    ) -> PyResult<Self> {
        let colors = ColorSet::new(colors).map_err(to_py)?;
        Ok(Self {
            inner: Coloring::from_table(alphabet.inner.clone(), colors, window, table)
                .map_err(to_py)?,
        })
    }

    /// Color by domain size modulo two.
    #[staticmethod]
    fn parity(alphabet: &PyAlphabet, window: u32) -> Self {
        Self { inner: Coloring::parity(alphabet.inner.clone(), window) }
    }

    /// Read the coloring file format.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let file = ColoringFile::from_json(text).map_err(to_py)?;
        Ok(Self { inner: file.into_coloring().map_err(to_py)? })
    }

    fn to_json(&self) -> String {
        ColoringFile::from_coloring(&self.inner).to_json()
    }

    fn color_of(&self, word: &PyWord) -> PyResult<u64> {
        self.inner.color_of(&word.inner).map_err(to_py)
    }

    #[getter]
    fn window(&self) -> u32 {
        self.inner.window()
    }

    #[getter]
    fn colors(&self) -> u64 {
        self.inner.colors().count()
    }

    #[getter]
    fn content_hash(&self) -> String {
        self.inner.content_hash()
    }

    #[getter]
    fn alphabet(&self) -> PyAlphabet {
        PyAlphabet { inner: self.inner.alphabet().clone() }
    }

    fn __repr__(&self) -> String {
        format!(
            "Coloring(window={}, colors={}, hash={})",
            self.inner.window(),
            self.inner.colors().count(),
            self.inner.content_hash()
        )
    }
}

#[pyfunction]
#[pyo3(name = "window_size")]
fn py_window_size(k: u8, window: u32) -> PyResult<u64> {
    window_size(k, window).map_err(to_py)
}

#[pyfunction]
#[pyo3(name = "canonical_index")]
fn py_canonical_index(word: &PyWord, k: u8, window: u32) -> PyResult<u64> {
    canonical_index(&word.inner, k, window).map_err(to_py)
}

#[pyfunction]
#[pyo3(name = "word_at_index")]
fn py_word_at_index(index: u64, k: u8, window: u32) -> PyResult<PyWord> {
    Ok(PyWord { inner: word_at_index(index, k, window).map_err(to_py)? })
}

/// Arity-bounded span of the blocks; with_star keeps variable elements.
#[pyfunction]
#[pyo3(name = "span")]
#[pyo3(signature = (blocks, alphabet, with_star = false, arity = None))]
fn py_span(
    blocks: Vec<PyWord>,
    alphabet: &PyAlphabet,
    with_star: bool,
    arity: Option<u64>,
) -> PyResult<Vec<PyWord>> {
    let words: Vec<LocatedWord> = blocks.into_iter().map(|w| w.inner).collect();
    let mode = if with_star { SpanMode::WithStar } else { SpanMode::Letters };
    let out = span_located(&words, &alphabet.inner, mode, arity_of(arity)).map_err(to_py)?;
    Ok(out.into_iter().map(|inner| PyWord { inner }).collect())
}

#[pyfunction]
#[pyo3(name = "hj_number")]
fn py_hj_number(k: u8, c: u64, max: u32) -> PyResult<u32> {
    hj_number(k, c, max).map_err(to_py)
}

/// Certificate JSON for a monochromatic variable word, or None.
#[pyfunction]
#[pyo3(name = "hj_witness")]
#[pyo3(signature = (f, window = None))]
fn py_hj_witness(f: &PyColoring, window: Option<u32>) -> PyResult<Option<String>> {
    let window = window.unwrap_or_else(|| f.inner.window());
    let found = hj_witness(&f.inner, f.inner.alphabet(), window).map_err(to_py)?;
    Ok(found.map(|w| CertificateFile::from_hj(&w, &f.inner).to_json()))
}

/// Certificate JSON for m pairwise-below blocks with a monochromatic
/// span; raises Exhausted when the window has none.
#[pyfunction]
#[pyo3(name = "carlson_search")]
#[pyo3(signature = (f, blocks, window = None, arity = None))]
fn py_carlson_search(
    f: &PyColoring,
    blocks: usize,
    window: Option<u32>,
    arity: Option<u64>,
) -> PyResult<String> {
    let window = window.unwrap_or_else(|| f.inner.window());
    let cert =
        carlson_search(&f.inner, blocks, arity_of(arity), window).map_err(to_py)?;
    Ok(CertificateFile::from_carlson(&cert, &f.inner).to_json())
}

/// Monochromatic finite unions of singletons under the first-letter
/// embedding, as certificate JSON.
#[pyfunction]
#[pyo3(name = "fu_search")]
#[pyo3(signature = (f, blocks, window = None, arity = None))]
fn py_fu_search(
    f: &PyColoring,
    blocks: usize,
    window: Option<u32>,
    arity: Option<u64>,
) -> PyResult<String> {
    let window = window.unwrap_or_else(|| f.inner.window());
    let ground = FinSetSequence::new((0..window).map(|i| BTreeSet::from([i])).collect())
        .map_err(to_py)?;
    let embed = |e: &BTreeSet<u32>| {
        f.inner.color_of(&LocatedWord::from_cells(e.iter().map(|&i| (i, Cell::Letter(0)))))
    };
    let g = FnSetColorMap::new(f.inner.colors().count(), embed);
    let sets = fu_homog_search(&g, &ground, blocks, arity_of(arity)).map_err(to_py)?;
    let color = embed(sets.items().first().expect("nonempty certificate")).map_err(to_py)?;
    Ok(CertificateFile::from_fu(sets.items(), color, arity_of(arity), &f.inner, window)
        .to_json())
}

/// Recheck certificate JSON against its instance. Returns (ok,
/// obligations) where each obligation is an (ok, description) pair.
#[pyfunction]
#[pyo3(name = "verify")]
#[pyo3(signature = (cert_json, f, g = None))]
fn py_verify(
    cert_json: &str,
    f: &PyColoring,
    g: Option<&PyColoring>,
) -> PyResult<(bool, Vec<(bool, String)>)> {
    let cert = CertificateFile::from_json(cert_json).map_err(to_py)?;
    let report =
        locword::verify(&cert, &f.inner, g.map(|g| &g.inner)).map_err(to_py)?;
    let obligations =
        report.obligations.into_iter().map(|o| (o.ok, o.description)).collect();
    Ok((report.ok, obligations))
}

/// Least witness restoring the level factor, None when refuted within
/// the bound. Kind is "weak" or "plain".
#[pyfunction]
#[pyo3(name = "check_recurrence")]
#[pyo3(signature = (f, level, bound, kind = "plain"))]
fn py_check_recurrence(
    f: &PyColoring,
    level: u32,
    bound: u32,
    kind: &str,
) -> PyResult<Option<PyWord>> {
    let kind = match kind {
        "weak" => RecurrenceKind::Weak,
        "plain" => RecurrenceKind::Plain,
        other => return Err(PyValueError::new_err(format!("unknown kind {other:?}"))),
    };
    let outcome =
        check_recurrence(&f.inner, f.inner.alphabet(), level, bound, kind).map_err(to_py)?;
    Ok(outcome.witness().cloned().map(|inner| PyWord { inner }))
}

/// Least witness carrying f's level factor onto g's, None when refuted
/// within the bound. Kind is "weak", "plain", or "strong".
#[pyfunction]
#[pyo3(name = "check_proximality")]
#[pyo3(signature = (f, g, level, bound, kind = "plain"))]
fn py_check_proximality(
    f: &PyColoring,
    g: &PyColoring,
    level: u32,
    bound: u32,
    kind: &str,
) -> PyResult<Option<PyWord>> {
    let kind = match kind {
        "weak" => ProximalityKind::Weak,
        "plain" => ProximalityKind::Plain,
        "strong" => ProximalityKind::Strong,
        other => return Err(PyValueError::new_err(format!("unknown kind {other:?}"))),
    };
    let outcome = check_proximality(&f.inner, &g.inner, f.inner.alphabet(), level, bound, kind)
        .map_err(to_py)?;
    Ok(outcome.witness().cloned().map(|inner| PyWord { inner }))
}

#[pymodule]
fn locword_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyAlphabet>()?;
    m.add_class::<PyWord>()?;
    m.add_class::<PyColoring>()?;
    m.add("Exhausted", m.py().get_type::<Exhausted>())?;
    m.add_function(wrap_pyfunction!(py_window_size, m)?)?;
    m.add_function(wrap_pyfunction!(py_canonical_index, m)?)?;
    m.add_function(wrap_pyfunction!(py_word_at_index, m)?)?;
    m.add_function(wrap_pyfunction!(py_span, m)?)?;
    m.add_function(wrap_pyfunction!(py_hj_number, m)?)?;
    m.add_function(wrap_pyfunction!(py_hj_witness, m)?)?;
    m.add_function(wrap_pyfunction!(py_carlson_search, m)?)?;
    m.add_function(wrap_pyfunction!(py_fu_search, m)?)?;
    m.add_function(wrap_pyfunction!(py_verify, m)?)?;
    m.add_function(wrap_pyfunction!(py_check_recurrence, m)?)?;
    m.add_function(wrap_pyfunction!(py_check_proximality, m)?)?;
    Ok(())
}
