//! Runs every acceptance criterion at its stated tolerance and prints one
//! line per criterion; fails if any criterion fails.

use maboost_cli::bench;

#[test]
fn acceptance() {
    let mut failed = Vec::new();
    for id in 1..=bench::names().len() {
        let r = bench::run_criterion(id);
        println!(
            "{} C{} {}: expected {}; observed {} [{:.2} s]",
            if r.pass { "PASS" } else { "FAIL" },
            r.id,
            r.name,
            r.expected,
            r.observed,
            r.elapsed.as_secs_f64()
        );
        if !r.pass {
            failed.push(format!("C{} {}", r.id, r.name));
        }
    }
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
