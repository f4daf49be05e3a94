//! Full validation suite as a test target: runs every criterion at its
//! pinned tolerance and prints one pass/fail line per criterion.

use chordscope::validate::{run, ValidationConfig};

#[test]
fn acceptance_suite() {
    let reports = run(&ValidationConfig::default());
    assert_eq!(reports.len(), 15, "expected all 15 criteria to run");
    let mut failed = Vec::new();
    for r in &reports {
        let status = if r.passed { "PASS" } else { "FAIL" };
        println!(
            "[{status}] {:2}. {:<28} {:>7.2}s  {}",
            r.id, r.name, r.seconds, r.detail
        );
        if !r.passed {
            failed.push(r.id);
        }
    }
    assert!(failed.is_empty(), "criteria failed: {failed:?}");
}
