//! End-to-end acceptance suite. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

use std::sync::Arc;
use std::time::Instant;

use banalg_lab::algebra::RADICAL_TOL;
use banalg_lab::classifier::{
    classify, normalize_conjugator, phase_distance, search_product_defects,
};
use banalg_lab::engine::{build_extension, check_midpoint, estimate_u0, EngineError};
use banalg_lab::gallery::{run_cx2, run_dame, AFFINE_LOWER_BOUND};
use banalg_lab::linalg::{self, matrix_unit, CMatrix};
use banalg_lab::numrange::{mu_sup_re_estimate, numerical_radius, numerical_radius_estimate};
use banalg_lab::oracle::{audit, random_gln_oracle, FormTag, AUDIT_PAIRS};
use banalg_lab::sampling::{hermitian, rng_from_seed};
use banalg_lab::{AlgebraSpec, IsometryOracle, NormKind};
use num_complex::Complex64;

struct Outcome {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome {
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn require(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(what());
        }
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }
}

/// Every canonical isometry family on GL_n, over all stock norms.
fn gln_families(n: usize, rng: &mut banalg_lab::sampling::LabRng) -> Vec<(String, IsometryOracle)> {
    let mut out = Vec::new();
    for norm in NormKind::ALL {
        let m = Arc::new(AlgebraSpec::full_matrix(n, norm));
        out.push((
            format!("identity/{norm}/n={n}"),
            IsometryOracle::identity(m),
        ));
        for tag in FormTag::ALL {
            let (oracle, _) = random_gln_oracle(tag, n, norm, rng);
            out.push((format!("{}/{norm}/n={n}", tag.as_str()), oracle));
        }
    }
    out
}

fn midpoint_suite() -> Outcome {
    let mut out = Outcome::new();
    let mut rng = rng_from_seed(101);
    let mut worst: f64 = 0.0;
    let mut families = 0;
    for n in 2..=4 {
        for (label, oracle) in gln_families(n, &mut rng) {
            families += 1;
            let mut valid = 0;
            let mut attempts = 0;
            while valid < 100 && attempts < 1000 {
                attempts += 1;
                let f = oracle.sample_domain(&mut rng);
                let g = oracle.sample_domain(&mut rng);
                match check_midpoint(&oracle, &f, &g) {
                    Ok(r) => {
                        valid += 1;
                        worst = worst.max(r);
                        out.require(r < 1e-8, || format!("{label}: residual {r:.3e}"));
                    }
                    Err(EngineError::SegmentLeavesDomain { .. }) => {}
                    Err(e) => out.require(false, || format!("{label}: {e}")),
                }
            }
            out.require(valid == 100, || {
                format!("{label}: only {valid} segment-valid pairs")
            });
        }
    }
    out.note(format!("{families} families, worst residual {worst:.2e}"));
    out
}

fn extension_oracles(
    rng: &mut banalg_lab::sampling::LabRng,
) -> Vec<(String, IsometryOracle, CMatrix)> {
    let mut out = Vec::new();
    for n in 2..=4 {
        for (label, oracle) in gln_families(n, rng) {
            let zero = oracle.codomain().zero();
            out.push((label, oracle, zero));
        }
    }
    let shift13 = matrix_unit(3, 0, 2);
    for (name, alg) in [
        ("DAME_A", AlgebraSpec::dame_a(NormKind::Spectral)),
        ("DAME_B", AlgebraSpec::dame_b(NormKind::Spectral)),
        (
            "DAME_B/induced-l1",
            AlgebraSpec::dame_b(NormKind::InducedL1),
        ),
    ] {
        let oracle = IsometryOracle::identity(Arc::new(alg)).translated(shift13.clone());
        out.push((
            format!("translation by E13 on {name}"),
            oracle,
            shift13.clone(),
        ));
    }
    let shift12 = matrix_unit(2, 0, 1) * Complex64::new(-0.5, 2.0);
    for norm in NormKind::ALL {
        let t2 = Arc::new(AlgebraSpec::upper_triangular(2, norm));
        let oracle = IsometryOracle::identity(t2).translated(shift12.clone());
        out.push((
            format!("translation by E12 on T_2/{norm}"),
            oracle,
            shift12.clone(),
        ));
    }
    out
}

fn extension_suites() -> (Outcome, Outcome) {
    let mut ext = Outcome::new();
    let mut semisimple = Outcome::new();
    let mut rng = rng_from_seed(202);
    let mut cases = 0;
    let mut into_mn = 0;
    let mut worst_u0: f64 = 0.0;
    for (label, oracle, shift) in extension_oracles(&mut rng) {
        cases += 1;
        let result = match build_extension(&oracle) {
            Ok(r) => r,
            Err(e) => {
                ext.require(false, || format!("{label}: {e}"));
                continue;
            }
        };
        for c in &result.diagnostics.checks {
            ext.require(c.passed, || {
                format!("{label}: {} = {:.3e}", c.name, c.residual)
            });
        }
        let u0_err = oracle.codomain().norm(&(&result.u0 - &shift));
        ext.require(u0_err < 1e-8, || format!("{label}: u0 off by {u0_err:.3e}"));
        if shift.iter().any(|z| z.norm() > 0.0) {
            let sampled = oracle
                .codomain()
                .radical_member_sampling(&result.u0, 200, 7)
                .unwrap_or(false);
            ext.require(sampled, || {
                format!("{label}: u0 fails the sampling criterion")
            });
        }
        if oracle.codomain().name().starts_with("M_") {
            into_mn += 1;
            let norm = oracle.codomain().norm(&result.u0);
            worst_u0 = worst_u0.max(norm);
            semisimple.require(norm < 1e-7, || format!("{label}: |u0| = {norm:.3e}"));
        }
    }

    // u0 from the raw estimator as well, on the DAME_B translation
    let dame_b = Arc::new(AlgebraSpec::dame_b(NormKind::Spectral));
    let e13 = matrix_unit(3, 0, 2);
    match estimate_u0(&IsometryOracle::identity(dame_b.clone()).translated(e13.clone())) {
        Ok(u0) => {
            let err = dame_b.norm(&(&u0 - &e13));
            ext.require(err < 1e-8, || {
                format!("estimate_u0 on DAME_B: error {err:.3e}")
            });
            ext.require(
                dame_b
                    .radical_member_sampling(&u0, 200, 11)
                    .unwrap_or(false),
                || "estimate_u0 on DAME_B: not in the radical by sampling".into(),
            );
        }
        Err(e) => ext.require(false, || format!("estimate_u0 on DAME_B: {e}")),
    }
    ext.note(format!("{cases} oracles"));
    semisimple.note(format!(
        "{into_mn} oracles into M_n, max |u0| {worst_u0:.2e}"
    ));
    (ext, semisimple)
}

fn classifier_suite() -> Outcome {
    let mut out = Outcome::new();
    let mut rng = rng_from_seed(303);
    let mut worst: f64 = 0.0;
    for tag in FormTag::ALL {
        let mut correct = 0;
        for n in 2..=4 {
            for i in 0..20 {
                let norm = NormKind::ALL[i % 4];
                let label = format!("{}/{norm}/n={n}/#{i}", tag.as_str());
                let (oracle, truth) = random_gln_oracle(tag, n, norm, &mut rng);
                match classify(&oracle, i as u64) {
                    Ok(found) => {
                        let d = phase_distance(&found.u, &normalize_conjugator(&truth.u));
                        worst = worst.max(d);
                        out.require(d < 1e-6, || format!("{label}: U off by {d:.3e}"));
                        if found.tag == tag {
                            correct += 1;
                        } else {
                            out.require(false, || {
                                format!("{label}: tagged {}", found.tag.as_str())
                            });
                        }
                    }
                    Err(e) => out.require(false, || format!("{label}: {e}")),
                }

                // the unital normalization C⁻¹·T obeys exactly one product law
                let c_inv = truth.left_factor.clone().try_inverse().unwrap();
                let inner = oracle.clone();
                let unital = IsometryOracle::new(
                    "unital",
                    oracle.domain().clone(),
                    oracle.codomain().clone(),
                    move |m| &c_inv * inner.apply(m),
                );
                let found = search_product_defects(&unital, 50, i as u64);
                let surviving = [
                    found.multiplicative.is_none(),
                    found.antimultiplicative.is_none(),
                ];
                let expected = [!tag.transpose(), tag.transpose()];
                out.require(surviving == expected, || {
                    format!("{label}: surviving laws {surviving:?}")
                });
            }
        }
        out.require(correct == 60, || {
            format!("{}: {correct}/60 correct", tag.as_str())
        });
    }
    out.note(format!("240 instances, worst |U - U_true| {worst:.2e}"));
    out
}

fn radical_suite() -> Outcome {
    let mut out = Outcome::new();
    let algebras = [
        (AlgebraSpec::full_matrix(2, NormKind::Spectral), 0),
        (AlgebraSpec::full_matrix(3, NormKind::Spectral), 0),
        (AlgebraSpec::dame_a(NormKind::Spectral), 3),
        (AlgebraSpec::dame_b(NormKind::Spectral), 3),
        (AlgebraSpec::upper_triangular(2, NormKind::Spectral), 1),
    ];
    for (alg, rad_dim) in &algebras {
        let rad = alg.radical().unwrap();
        out.require(rad.len() == *rad_dim, || {
            format!("{}: radical dimension {}", alg.name(), rad.len())
        });
        for (k, b) in alg.basis().iter().enumerate() {
            let trace = alg.in_radical(b, RADICAL_TOL).unwrap();
            let sampled = alg.radical_member_sampling(b, 200, k as u64).unwrap();
            out.require(trace == sampled, || {
                format!(
                    "{} basis {k}: trace {trace}, sampling {sampled}",
                    alg.name()
                )
            });
        }
    }
    let t2 = &algebras[4].0;
    let e12 = matrix_unit(2, 0, 1);
    out.require(t2.in_radical(&e12, RADICAL_TOL).unwrap(), || {
        "E12 not in rad(T_2)".into()
    });
    let rad = t2.radical().unwrap();
    out.require(
        rad.len() == 1
            && t2
                .snap(&rad[0])
                .iter()
                .enumerate()
                .all(|(k, z)| k == 2 || z.norm() < 1e-12),
        || "rad(T_2) is not span{E12}".into(),
    );
    out.note(format!("{} algebras", algebras.len()));
    out
}

fn numerical_range_suite() -> Outcome {
    let mut out = Outcome::new();
    let mut rng = rng_from_seed(404);
    let mut worst: f64 = 0.0;
    for i in 0..50 {
        let n = 2 + i % 3;
        let alg = AlgebraSpec::full_matrix(n, NormKind::Spectral);
        let h = hermitian(&mut rng, n);
        let lambda_max = h.clone().symmetric_eigenvalues().max();
        let est = mu_sup_re_estimate(&alg, &h);
        let err = (est.value - lambda_max).abs();
        worst = worst.max(err);
        out.require(err < 1e-4, || format!("hermitian #{i}: error {err:.3e}"));
        out.require(est.monotone, || {
            format!("hermitian #{i}: quotients not monotone")
        });
    }
    for i in 0..100 {
        let n = 2 + i % 3;
        let alg = AlgebraSpec::full_matrix(n, NormKind::Spectral);
        let a = alg.random_element(&mut rng);
        let w = numerical_radius_estimate(&alg, &a);
        out.require(w.monotone, || {
            format!("matrix #{i}: quotients not monotone")
        });
        let lhs = std::f64::consts::E * w.value;
        let norm = alg.norm(&a);
        out.require(lhs >= norm - 1e-6, || {
            format!("matrix #{i}: e*w = {lhs:.6} < |a| = {norm:.6}")
        });
    }
    // a non-normal sanity value: w(E12) = 1/2 under the spectral norm
    let m2 = AlgebraSpec::full_matrix(2, NormKind::Spectral);
    let w = numerical_radius(&m2, &matrix_unit(2, 0, 1));
    out.require((w - 0.5).abs() < 1e-4, || format!("w(E12) = {w}"));
    out.note(format!("worst Hermitian error {worst:.2e}"));
    out
}

fn gallery_suite() -> Outcome {
    let mut out = Outcome::new();
    let cx2 = run_cx2();
    for c in cx2.diagnostics.failures() {
        out.require(false, || format!("CX2 {}: {:.3e}", c.name, c.residual));
    }
    let fit = cx2.affine_fit.expect("affine fit");
    out.require(fit.certified_lower_bound >= AFFINE_LOWER_BOUND, || {
        format!("CX2 bound {}", fit.certified_lower_bound)
    });

    let dame = run_dame();
    for c in dame.diagnostics.failures() {
        out.require(false, || format!("DAME {}: {:.3e}", c.name, c.residual));
    }
    let eye = linalg::identity(3);
    let (m, n) = (&eye + matrix_unit(3, 0, 1), &eye + matrix_unit(3, 1, 2));
    match dame.witness.and_then(|w| w.multiplicative) {
        Some(w) => out.require(
            w.m == m && w.n == n && (w.defect_norm - 1.0).abs() < 1e-12,
            || {
                format!(
                    "DAME witness ({:?}) with defect {}",
                    (w.m.clone(), w.n.clone()),
                    w.defect_norm
                )
            },
        ),
        None => out.require(false, || "DAME: no multiplicative witness".into()),
    }
    out.note(format!(
        "CX2 affine bound {:.3}, least squares {:.3}",
        fit.certified_lower_bound, fit.least_squares_residual
    ));
    out
}

fn negative_control() -> Outcome {
    let mut out = Outcome::new();
    let m2 = Arc::new(AlgebraSpec::full_matrix(2, NormKind::Spectral));
    let corrupted = IsometryOracle::identity(m2.clone()).corrupted(1e-3);
    let report = audit(&corrupted, AUDIT_PAIRS, 42);
    out.require(!report.passed, || {
        "corrupted oracle passed the audit".into()
    });
    match classify(&corrupted, 42) {
        Ok(r) => out.require(false, || {
            format!("corrupted oracle classified as {}", r.tag.as_str())
        }),
        Err(e) => out.require(e.stage() == "isometry audit", || {
            format!("failed at {}", e.stage())
        }),
    }
    // non-isometric but linear and multiplicative: M ↦ S M S⁻¹ with S not unitary
    let s = linalg::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]);
    let s_inv = s.clone().try_inverse().unwrap();
    let skewed = IsometryOracle::new("skewed similarity", m2.clone(), m2, move |m| {
        &s * m * &s_inv
    });
    out.require(classify(&skewed, 42).is_err(), || {
        "non-isometric similarity was classified".into()
    });
    out.note(format!("audit deviation {:.2e}", report.max_deviation));
    out
}

fn main() {
    let mut all_pass = true;
    let mut report = |id: usize, name: &str, start: Instant, outcome: Outcome| {
        let pass = outcome.failures.is_empty();
        all_pass &= pass;
        let notes = outcome.notes.join("; ");
        println!(
            "{} criterion {id}: {name} ({notes}; {:.1}s)",
            if pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
        for f in outcome.failures.iter().take(10) {
            println!("    {f}");
        }
    };

    let t = Instant::now();
    report(1, "midpoint preservation", t, midpoint_suite());
    let t = Instant::now();
    let (ext, semisimple) = extension_suites();
    report(2, "real-linear extension", t, ext);
    report(3, "no shift into a semisimple codomain", t, semisimple);
    let t = Instant::now();
    report(4, "GL_n classifier round-trip", t, classifier_suite());
    let t = Instant::now();
    report(5, "radical criteria agree", t, radical_suite());
    let t = Instant::now();
    report(6, "numerical range", t, numerical_range_suite());
    let t = Instant::now();
    report(7, "gallery claims", t, gallery_suite());
    let t = Instant::now();
    report(8, "negative control", t, negative_control());

    if !all_pass {
        std::process::exit(1);
    }
}
