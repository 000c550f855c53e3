use shcoh_acceptance::*;
use std::time::Instant;

fn main() {
    let checks: Vec<Box<dyn Fn() -> Verdict>> = vec![
        Box::new(|| schur_horn(100_000)),
        Box::new(|| squared_schur_horn(100_000)),
        Box::new(|| axioms(coherence_core::MeasureId::RelEnt, 10_000)),
        Box::new(|| axioms(coherence_core::MeasureId::L1, 10_000)),
        Box::new(|| axioms(coherence_core::MeasureId::C2, 10_000)),
        Box::new(|| cross_nonnegative(10_000)),
        Box::new(|| cross_dominance(10_000)),
        Box::new(|| cross_asymmetry(10_000)),
        Box::new(|| diagonal_trace_identity(10_000)),
        Box::new(plane_endpoints),
        Box::new(|| entropy_gap(100_000)),
        Box::new(|| refined_eur(100_000)),
        Box::new(curve_convexity),
        Box::new(|| containment(10_000)),
        Box::new(determinism),
    ];
    let mut failed = 0;
    for check in &checks {
        let start = Instant::now();
        let v = check();
        println!("{}  [{:.1}s]", v.line(), start.elapsed().as_secs_f64());
        if !v.passed {
            failed += 1;
        }
    }
    println!("acceptance: {} passed, {} failed", checks.len() - failed, failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
