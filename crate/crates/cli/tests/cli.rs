//! End-to-end runs of the binary: the documented invocations, the exit
//! code contract, and artifact determinism across thread counts.

use std::path::Path;
use std::process::{Command, Output};

use locword::{
    Alphabet, CertPayload, CertificateFile, ColorMap, ColorSet, Coloring, ColoringFile,
    SymbolicRule,
};

fn locword(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_locword"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn parity_file(dir: &Path, window: u32) -> std::path::PathBuf {
    let f = Coloring::parity(Alphabet::ab(), window);
    let path = dir.join("parity.json");
    std::fs::write(&path, ColoringFile::from_coloring(&f).to_json()).unwrap();
    path
}

#[test]
fn documented_invocations_hold() {
    let dir = tempfile::tempdir().unwrap();
    parity_file(dir.path(), 4);

    let out = locword(
        dir.path(),
        &["carlson", "--coloring", "parity.json", "--blocks", "2", "--window", "4", "--out", "cert.json"],
    );
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let cert =
        CertificateFile::from_json(&std::fs::read_to_string(dir.path().join("cert.json")).unwrap())
            .unwrap();
    assert!(matches!(&cert.payload, CertPayload::Carlson { blocks, .. } if blocks.len() == 2));

    let out = locword(dir.path(), &["verify", "cert.json", "--coloring", "parity.json"]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).contains("certificate verifies"));

    let out = locword(dir.path(), &["hj", "number", "-k", "2", "-c", "2", "--max", "3"]);
    assert_eq!(code(&out), 0);
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "2");
}

#[test]
fn honest_exhaustion_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    // the two singleton words get different colors: no witness at window 1
    let f = Coloring::from_table(Alphabet::ab(), ColorSet::new(2).unwrap(), 1, vec![0, 0, 1])
        .unwrap();
    std::fs::write(dir.path().join("split.json"), ColoringFile::from_coloring(&f).to_json())
        .unwrap();

    let out = locword(dir.path(), &["hj", "search", "--coloring", "split.json"]);
    assert_eq!(code(&out), 2);

    let out = locword(dir.path(), &["hj", "number", "-k", "2", "-c", "2", "--max", "1"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn malformed_inputs_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    parity_file(dir.path(), 4);
    let out = locword(
        dir.path(),
        &["carlson", "--coloring", "parity.json", "--blocks", "2", "--out", "cert.json"],
    );
    assert_eq!(code(&out), 0);

    // certificate bound to a different instance
    let other = Coloring::parity(Alphabet::ab(), 5);
    std::fs::write(dir.path().join("other.json"), ColoringFile::from_coloring(&other).to_json())
        .unwrap();
    let out = locword(dir.path(), &["verify", "cert.json", "--coloring", "other.json"]);
    assert_eq!(code(&out), 1);

    std::fs::write(dir.path().join("garbage.json"), "not json").unwrap();
    let out = locword(dir.path(), &["verify", "cert.json", "--coloring", "garbage.json"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn artifacts_are_identical_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let mut runs = Vec::new();
    for threads in ["1", "8"] {
        for run in 0..2 {
            let name = format!("cert-{threads}-{run}.json");
            let out = locword(
                dir.path(),
                &[
                    "carlson", "--seed", "11", "--sample-window", "6", "--blocks", "2",
                    "--window", "6", "--threads", threads, "--out", &name,
                ],
            );
            assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
            runs.push(std::fs::read(dir.path().join(&name)).unwrap());
        }
    }
    assert!(runs.windows(2).all(|w| w[0] == w[1]));
}

#[test]
fn located_transport_pulls_the_table_back() {
    let dir = tempfile::tempdir().unwrap();
    parity_file(dir.path(), 4);
    let out = locword(
        dir.path(),
        &[
            "transport", "--iota", "located", "--coloring", "parity.json",
            "--block", "{0:*}", "--block", "{1:*}", "--out", "pulled.json",
        ],
    );
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let pulled =
        ColoringFile::from_json(&std::fs::read_to_string(dir.path().join("pulled.json")).unwrap())
            .unwrap()
            .into_coloring()
            .unwrap();
    // singleton star blocks at the same positions leave parity unchanged
    let expected = Coloring::parity(Alphabet::ab(), 2);
    for w in locword::word::all_words(2, 2).filter(|w| w.star_count() == 0) {
        assert_eq!(pulled.color_of(&w).unwrap(), expected.color_of(&w).unwrap());
    }
}

#[test]
fn dynamics_extraction_verifies_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    parity_file(dir.path(), 12);
    let out = locword(
        dir.path(),
        &[
            "dynamics", "extract", "--coloring", "parity.json", "--blocks", "2",
            "--bound", "12", "--out", "span.json",
        ],
    );
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let out = locword(dir.path(), &["verify", "span.json", "--coloring", "parity.json"]);
    assert_eq!(code(&out), 0);

    let out = locword(
        dir.path(),
        &[
            "dynamics", "extract", "--coloring", "parity.json", "--blocks", "2",
            "--bound", "12", "--schedule", "--out", "sched.json",
        ],
    );
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let out = locword(dir.path(), &["verify", "sched.json", "--coloring", "parity.json"]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn fu_search_produces_verifiable_certificates() {
    let dir = tempfile::tempdir().unwrap();
    parity_file(dir.path(), 6);
    let out = locword(
        dir.path(),
        &["fut", "--coloring", "parity.json", "--blocks", "2", "--out", "fu.json"],
    );
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let out = locword(dir.path(), &["verify", "fu.json", "--coloring", "parity.json"]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn recurrence_reports_witnesses_and_refutations() {
    let dir = tempfile::tempdir().unwrap();
    parity_file(dir.path(), 8);
    let out = locword(
        dir.path(),
        &[
            "dynamics", "recurrence", "--coloring", "parity.json",
            "--level", "1", "--bound", "8",
        ],
    );
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("witness "));

    // the a-instantiation of any variable word contains the letter, so
    // nothing restores the empty word's color
    let split = Coloring::from_rule(
        Alphabet::ab(),
        ColorSet::new(2).unwrap(),
        8,
        SymbolicRule::HasLetter { letter: 'a' },
    )
    .unwrap();
    std::fs::write(dir.path().join("split.json"), ColoringFile::from_coloring(&split).to_json())
        .unwrap();
    let out = locword(
        dir.path(),
        &[
            "dynamics", "recurrence", "--coloring", "split.json",
            "--level", "0", "--bound", "6",
        ],
    );
    assert_eq!(code(&out), 2, "stdout: {}", String::from_utf8_lossy(&out.stdout));
}
