//! Jacobson radicals of a few built-in algebras, by the trace form and by
//! the spectral-radius test `r(f·a) = 0`.

use banalg_lab::algebra::RADICAL_TOL;
use banalg_lab::{AlgebraSpec, NormKind};

fn main() {
    let algebras = [
        AlgebraSpec::full_matrix(3, NormKind::Spectral),
        AlgebraSpec::upper_triangular(2, NormKind::Spectral),
        AlgebraSpec::upper_triangular(3, NormKind::Spectral),
        AlgebraSpec::dame_a(NormKind::Spectral),
        AlgebraSpec::dame_b(NormKind::Spectral),
    ];
    for alg in &algebras {
        let rad = alg.radical().unwrap();
        print!(
            "{:<6} dim {:>2}, radical dim {}",
            alg.name(),
            alg.dim(),
            rad.len()
        );
        let agree = alg.basis().iter().enumerate().all(|(k, b)| {
            alg.in_radical(b, RADICAL_TOL).unwrap()
                == alg.radical_member_sampling(b, 200, k as u64).unwrap()
        });
        println!(", criteria agree: {agree}");
    }
}
