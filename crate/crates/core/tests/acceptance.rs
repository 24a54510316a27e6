//! Runs every acceptance criterion and prints one status line per criterion.
//! Lines go straight to stderr so they survive the test harness capture.

use std::io::Write;

use excesslab::verify::{Level, Suite};

#[test]
fn acceptance_criteria() {
    let suite = Suite::new();
    let mut failed = Vec::new();
    for criterion in 1..=13u8 {
        let out = suite.run_criterion(criterion).expect("every criterion is registered");
        let status = if out.passed { "PASS" } else { "FAIL" };
        let line = format!(
            "criterion {criterion:>2} {status} {} ({:.1}s): {}",
            out.name, out.seconds, out.detail
        );
        writeln!(std::io::stderr(), "{line}").unwrap();
        if !out.passed {
            failed.push(line);
        }
    }
    assert!(failed.is_empty(), "failed:\n{}", failed.join("\n"));
}

#[test]
fn quick_level_passes_and_excludes_monte_carlo() {
    let names = Suite::names(Level::Quick);
    assert!(names.contains(&"oracle-equivalence"));
    assert!(!names.contains(&"desk-scale-windows"));
    for out in Suite::new().run(Level::Quick) {
        assert!(out.passed, "{}: {}", out.name, out.detail);
    }
}

#[test]
fn corrupted_entry_fails_oracle_equivalence() {
    let suite = Suite::new().with_fault(5, 0);
    let out = suite.run_named("oracle-equivalence").unwrap();
    assert!(!out.passed);
    assert!(out.detail.contains("c(5,5)"), "{}", out.detail);
}
