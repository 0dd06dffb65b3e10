//! An isometry between open subsets of C({x, y}) with no affine extension.

use banalg_lab::gallery::run_cx2;

fn main() {
    let report = run_cx2();
    for c in &report.diagnostics.checks {
        println!(
            "{:<48} {:>10.3e}  {}",
            c.name,
            c.residual,
            if c.passed { "ok" } else { "FAILED" }
        );
    }
    if let Some(fit) = report.affine_fit {
        println!(
            "no affine map comes closer than {:.3} on {} probes (least squares: {:.3})",
            fit.certified_lower_bound, fit.probes, fit.least_squares_residual
        );
    }
}
