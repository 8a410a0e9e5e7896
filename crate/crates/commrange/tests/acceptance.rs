//! Acceptance criteria 1-10, one `PASS`/`FAIL` line each. Exits nonzero on any failure.

use std::time::{Duration, Instant};

use commrange::io::to_json;
use commrange::parallel::with_workers;
use commrange::suite::{run_criterion, run_suite, CriterionReport};

const SEED: u64 = 20240601;

fn budget(id: u8) -> Duration {
    Duration::from_secs(match id {
        1 | 2 => 1,
        3 => 10,
        4 | 9 => 60,
        5 | 7 | 8 => 120,
        6 => 300,
        _ => 600,
    })
}

fn line(id: u8, name: &str, passed: bool, detail: &str) {
    println!("criterion {id:>2} {name:<28} {} {detail}", if passed { "PASS" } else { "FAIL" });
}

fn criterion(id: u8) -> bool {
    let start = Instant::now();
    let report: CriterionReport = run_criterion(id, SEED).expect("criterion runs");
    let elapsed = start.elapsed();
    let in_budget = elapsed <= budget(id);
    let metrics: Vec<String> = report.metrics.iter().map(|(k, v)| format!("{k}={v:.3e}")).collect();
    line(
        id,
        &report.name,
        report.passed && in_budget,
        &format!("checks={} failures={} {:.2?} {}", report.checks, report.failures, elapsed, metrics.join(" ")),
    );
    for note in &report.failure_notes {
        println!("    {note}");
    }
    if !in_budget {
        println!("    over budget {:?}", budget(id));
    }
    report.passed && in_budget
}

fn determinism() -> bool {
    let start = Instant::now();
    let first = to_json(&run_suite(SEED, 0).unwrap());
    let again = to_json(&run_suite(SEED, 0).unwrap());
    let single = to_json(&with_workers(1, || run_suite(SEED, 1).unwrap()));
    let many = to_json(&run_suite(SEED, 8).unwrap());
    let checks = [("repeat", first == again), ("1 worker", first == single), ("8 workers", first == many)];
    let differing: Vec<&str> = checks.iter().filter(|c| !c.1).map(|c| c.0).collect();
    let passed = differing.is_empty();
    let detail = format!("bytes={} {:.2?} differing=[{}]", first.len(), start.elapsed(), differing.join(", "));
    line(10, "determinism", passed, &detail);
    passed
}

fn main() {
    let mut failed: Vec<u8> = (1..=9).filter(|&id| !criterion(id)).collect();
    if !determinism() {
        failed.push(10);
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
