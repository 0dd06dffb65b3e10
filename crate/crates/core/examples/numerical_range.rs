//! Numerical range data from the norm alone: `sup Re W(a)` as the one-sided
//! derivative of `t ↦ ‖e + ta‖` at 0, and the numerical radius.

use banalg_lab::numrange::{mu_sup_re_estimate, numerical_radius_estimate};
use banalg_lab::sampling::{hermitian, rng_from_seed};
use banalg_lab::{AlgebraSpec, NormKind};

fn main() {
    let m3 = AlgebraSpec::full_matrix(3, NormKind::Spectral);
    let mut rng = rng_from_seed(3);
    let h = hermitian(&mut rng, 3);
    let est = mu_sup_re_estimate(&m3, &h);
    let eig = h.clone().symmetric_eigenvalues();
    println!(
        "Hermitian: sup Re W = {:.8} (largest eigenvalue {:.8})",
        est.value,
        eig.max()
    );
    println!("  difference quotients {:?}", est.quotients);

    let m2 = AlgebraSpec::full_matrix(2, NormKind::Spectral);
    let e12 = banalg_lab::linalg::matrix_unit(2, 0, 1);
    let w = numerical_radius_estimate(&m2, &e12);
    println!(
        "E12: numerical radius {:.6} over {} angles",
        w.value, w.angles
    );

    for norm in [NormKind::InducedL1, NormKind::InducedLinf] {
        let alg = AlgebraSpec::full_matrix(3, norm);
        let a = alg.random_element(&mut rng);
        let w = numerical_radius_estimate(&alg, &a).value;
        println!(
            "{norm}: |a| = {:.4}, w(a) = {:.4}, e*w(a) = {:.4}",
            alg.norm(&a),
            w,
            std::f64::consts::E * w
        );
    }
}
