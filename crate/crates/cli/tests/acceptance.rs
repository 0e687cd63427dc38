//! Acceptance check for study determinism across worker counts.

use std::process::Command;

use tempfile::TempDir;

/// Criterion 9: the full 500-trial study with identical seed but
/// different `--threads` values produces byte-identical CSVs.
#[test]
fn criterion_9_thread_count_invariance() {
    let dir = TempDir::new().unwrap();
    let run = |name: &str, threads: &str| {
        let out = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_mimo-crlb"))
            .args([
                "montecarlo",
                "--trials", "500",
                "--w", "0.1,1,10",
                "--seed", "20240901",
                "--threads", threads,
                "--out", out.to_str().unwrap(),
            ])
            .status()
            .unwrap();
        assert!(status.success());
    };
    run("t2.csv", "2");
    run("t5.csv", "5");

    let records_a = std::fs::read(dir.path().join("t2.csv")).unwrap();
    let records_b = std::fs::read(dir.path().join("t5.csv")).unwrap();
    assert!(!records_a.is_empty());
    assert_eq!(records_a, records_b, "records CSV differs across thread counts");
    assert_eq!(
        std::fs::read(dir.path().join("t2_cdf.csv")).unwrap(),
        std::fs::read(dir.path().join("t5_cdf.csv")).unwrap(),
        "CDF CSV differs across thread counts"
    );
    println!("criterion 9 (byte-identical CSVs for --threads 2 vs 5, 500 trials): PASS");
}
