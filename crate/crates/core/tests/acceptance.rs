//! Runs every acceptance criterion and prints one line per criterion.
//!
//! Lines are written to the process stdout directly so they show up even
//! when the harness captures test output. The tests take a shared lock so
//! that wall-clock budgets are not skewed by each other.

use std::io::Write;
use std::sync::Mutex;

use frobscheme::generators::{andre_spread, spread_scheme};
use frobscheme::par::Execution;
use frobscheme::tcond::{check_t_condition, count_array_type};
use frobscheme::verify::{run_all, run_criterion};

static SERIAL: Mutex<()> = Mutex::new(());

#[test]
fn acceptance_criteria() {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let results = run_all(Execution::Parallel);
    let mut out = std::io::stdout().lock();
    for r in &results {
        writeln!(out, "{r}").unwrap();
    }
    let failed: Vec<u8> = results.iter().filter(|r| !r.passed).map(|r| r.id).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

/// The Hall witness recounted tuple by tuple on both pairs.
#[test]
fn hall_witness_recount() {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let hall = spread_scheme(&andre_spread(3, 1).unwrap()).unwrap();
    let report = check_t_condition(&hall, 4).unwrap();
    let w = report.witness.expect("the Hall scheme fails the 4-condition");
    assert_eq!(hall.relation(w.pair1.0, w.pair1.1), w.relation);
    assert_eq!(hall.relation(w.pair2.0, w.pair2.1), w.relation);
    assert_eq!(count_array_type(&hall, &w.array_type, w.pair1), w.count1);
    assert_eq!(count_array_type(&hall, &w.array_type, w.pair2), w.count2);
    assert_ne!(w.count1, w.count2);
}

/// The single-threaded run of the heaviest criterion stays in its budget.
#[test]
fn desarguesian_vs_hall_sequential() {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let r = run_criterion(3, Execution::Sequential);
    assert!(r.passed, "{r}");
}
