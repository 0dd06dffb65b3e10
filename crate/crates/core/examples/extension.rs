//! Builds the real-linear extension of a translated isometry on the
//! unitized algebra span{I, E12, E13, E23} and recovers the radical shift.

use std::sync::Arc;

use banalg_lab::engine::build_extension;
use banalg_lab::linalg::{matrix_unit, CMatrix};
use banalg_lab::{AlgebraSpec, IsometryOracle, NormKind};
use num_complex::Complex64;

fn main() {
    let alg = Arc::new(AlgebraSpec::dame_b(NormKind::Spectral));
    let shift: CMatrix = matrix_unit(3, 0, 2) * Complex64::new(0.5, -2.0);
    let oracle = IsometryOracle::identity(alg.clone()).translated(shift.clone());

    let ext = build_extension(&oracle).expect("extension");
    println!("u0[1,3] = {:.6}", ext.u0[(0, 2)]);
    println!("|u0 - shift| = {:.2e}", alg.norm(&(&ext.u0 - &shift)));
    println!(
        "linear map is {}x{} real",
        ext.linear_map.nrows(),
        ext.linear_map.ncols()
    );
    for c in &ext.diagnostics.checks {
        println!(
            "  {:<22} {:.2e} (< {:.0e}) {}",
            c.name,
            c.residual,
            c.tolerance,
            if c.passed { "ok" } else { "FAILED" }
        );
    }
}
