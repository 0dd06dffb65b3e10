//! Two algebra structures on span{I, E12, E13, E23} with the same invertible
//! group: the set-identity is an isometry, extends linearly, and is neither
//! multiplicative nor antimultiplicative.

use banalg_lab::gallery::run_dame;

fn main() {
    let report = run_dame();
    for c in &report.diagnostics.checks {
        println!("{:<64} {}", c.name, if c.passed { "ok" } else { "FAILED" });
    }
    let witness = report.witness.expect("witness");
    if let Some(w) = witness.multiplicative {
        println!("T(MN) - T(M)T(N) on M = I+E12, N = I+E23:\n{}", w.defect);
    }
}
