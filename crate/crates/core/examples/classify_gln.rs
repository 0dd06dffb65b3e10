//! Hides a random isometry of GL_n behind a closure and recovers its
//! canonical form `M ↦ C·U·φ(M)·U⁻¹` from queries alone.

use banalg_lab::classifier::{classify, normalize_conjugator, phase_distance};
use banalg_lab::oracle::{random_gln_oracle, FormTag};
use banalg_lab::sampling::rng_from_seed;
use banalg_lab::NormKind;

fn main() {
    let mut rng = rng_from_seed(2024);
    for norm in [NormKind::Spectral, NormKind::InducedL1] {
        for tag in FormTag::ALL {
            let (oracle, truth) = random_gln_oracle(tag, 3, norm, &mut rng);
            let found = classify(&oracle, 1).expect("classification");
            println!(
                "{norm:<12} {:<32} -> {:<32} |U - U_true| = {:.1e}, residual {:.1e}",
                tag.as_str(),
                found.tag.as_str(),
                phase_distance(&found.u, &normalize_conjugator(&truth.u)),
                found.residual,
            );
        }
    }
}
