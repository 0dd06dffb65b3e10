//! Midpoint preservation `T((f+g)/2) = (T(f)+T(g))/2` for a canonical
//! isometry of GL_3, and the refusal when the segment leaves the domain.

use banalg_lab::engine::{check_midpoint, EngineError};
use banalg_lab::oracle::{random_gln_oracle, FormTag};
use banalg_lab::sampling::rng_from_seed;
use banalg_lab::NormKind;

fn main() {
    let mut rng = rng_from_seed(7);
    let (oracle, _) = random_gln_oracle(
        FormTag::ConjugateSimilarity,
        3,
        NormKind::Spectral,
        &mut rng,
    );

    let mut worst: f64 = 0.0;
    let mut refused = 0;
    for _ in 0..100 {
        let f = oracle.sample_domain(&mut rng);
        let g = oracle.sample_domain(&mut rng);
        match check_midpoint(&oracle, &f, &g) {
            Ok(r) => worst = worst.max(r),
            Err(EngineError::SegmentLeavesDomain { .. }) => refused += 1,
            Err(e) => panic!("{e}"),
        }
    }
    println!(
        "{}: worst midpoint residual {worst:.2e}, {refused} segments refused",
        oracle.label()
    );

    // the segment from I to -I passes through 0
    let e = oracle.domain().unit().clone();
    match check_midpoint(&oracle, &e, &-&e) {
        Err(err) => println!("I to -I: {err}"),
        Ok(r) => println!("I to -I: residual {r:.2e}"),
    }
}
