//! Acceptance suite: one test per claim, each printing a pass/fail line.
//!
//! Run with `cargo test -p pmod-core --test acceptance -- --nocapture` to
//! see the per-criterion lines.

mod common;

use std::panic::{catch_unwind, resume_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::*;
use pmod_core::barcode::{decompose, from_barcode, Barcode};
use pmod_core::bridge::compose_fg;
use pmod_core::graded::{graded_to_nat, nat_to_graded};
use pmod_core::interleave::{
    bottleneck_distance, brute_force_interleaving_exists, canonical_fg_interleaving,
    canonical_gf_interleaving, canonical_pixel_interleaving, canonical_shift_interleaving,
    equivalence_report, promote_weak_to_strong, verify_strong, verify_weak, CertificateKind,
    InterleavingCertificate, DEFAULT_BRUTE_BUDGET,
};
use pmod_core::matrix::Matrix;
use pmod_core::module::{IndexKind, TameModule};
use pmod_core::rational::{Extended, Rational};

fn criterion(number: usize, name: &str, deadline: Option<Duration>, body: impl FnOnce()) {
    let started = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(body));
    let elapsed = started.elapsed();
    let state = if outcome.is_ok() { "PASS" } else { "FAIL" };
    println!("criterion {number} ({name}): {state} [{:.2?}]", elapsed);
    if let Err(panic) = outcome {
        resume_unwind(panic);
    }
    if let Some(limit) = deadline {
        assert!(
            elapsed < limit,
            "criterion {number} took {elapsed:.2?}, budget {limit:.2?}"
        );
    }
}

const EPSILONS: [&str; 4] = ["1/3", "1/2", "1", "2"];
const BASEPOINTS: [&str; 3] = ["0", "-1", "1/2"];

#[test]
fn criterion_01_presentation_roundtrip() {
    criterion(1, "graded roundtrip", Some(Duration::from_secs(10)), || {
        let modules = nat_corpus(200);
        assert_eq!(modules.len(), 200);
        for (i, n) in modules.iter().enumerate() {
            let pres = nat_to_graded(n).unwrap();
            let horizon = pres.max_degree() + 1;
            let back = graded_to_nat(&pres, horizon).unwrap();
            assert_eq!(
                back.canonicalize(),
                n.canonicalize(),
                "module roundtrip differs at corpus index {i}"
            );
        }
        for (i, pres) in presentation_corpus(200).iter().enumerate() {
            let horizon = pres.max_degree() + 1;
            let module = graded_to_nat(pres, horizon).unwrap();
            let back = nat_to_graded(&module).unwrap();
            for degree in 0..=horizon {
                assert_eq!(
                    pres.degree_dimension(degree),
                    back.degree_dimension(degree),
                    "presentation {i} dimension differs in degree {degree}"
                );
                assert_eq!(
                    pres.t_action_rank(degree),
                    back.t_action_rank(degree),
                    "presentation {i} t-rank differs in degree {degree}"
                );
            }
        }
    });
}

#[test]
fn criterion_02_shift_interleaving() {
    criterion(
        2,
        "shift certificates",
        Some(Duration::from_secs(30)),
        || {
            let modules = real_corpus(200);
            assert_eq!(modules.len(), 200);
            let mut checked = 0usize;
            for (i, m) in modules.iter().enumerate() {
                for eps in EPSILONS {
                    let cert = canonical_shift_interleaving(m, &r(eps)).unwrap();
                    let verdict = verify_strong(&cert).unwrap();
                    assert!(verdict.accepted(), "module {i}, eps {eps}: {verdict:?}");
                    checked += 1;
                }
            }
            assert_eq!(checked, 800);
        },
    );
}

// Pixel certificates for every stable module, admissible basepoint and
// scale; shared by criteria 3 and 4.
fn pixel_certificates() -> Vec<(usize, &'static str, &'static str, InterleavingCertificate)> {
    let mut out = Vec::new();
    for (i, m) in stable_real_corpus(200).iter().enumerate() {
        for eps in EPSILONS {
            for x0 in BASEPOINTS {
                let x0r = r(x0);
                let admissible = match m.grid().first() {
                    Some(t0) => &x0r <= t0,
                    None => true,
                };
                if !admissible {
                    continue;
                }
                let cert = canonical_pixel_interleaving(m, &x0r, &r(eps)).unwrap();
                out.push((i, eps, x0, cert));
            }
        }
    }
    out
}

#[test]
fn criterion_03_pixel_interleaving() {
    criterion(3, "pixel certificates", None, || {
        let certs = pixel_certificates();
        assert!(certs.len() > 400, "corpus too small: {}", certs.len());
        for (i, eps, x0, cert) in &certs {
            let verdict = verify_weak(cert).unwrap();
            assert!(
                verdict.accepted(),
                "module {i}, eps {eps}, x0 {x0}: {verdict:?}"
            );
        }
    });
}

#[test]
fn criterion_04_promotion() {
    criterion(4, "weak-to-strong promotion", None, || {
        for (i, eps, x0, cert) in &pixel_certificates() {
            let strong = promote_weak_to_strong(cert).unwrap();
            let expected_shift = &r(eps) + &r(eps);
            assert_eq!(strong.shift(), &expected_shift);
            let verdict = verify_strong(&strong).unwrap();
            assert!(
                verdict.accepted(),
                "module {i}, eps {eps}, x0 {x0}: {verdict:?}"
            );
        }
    });
}

#[test]
fn criterion_05_theorem_functors() {
    criterion(5, "composite functor certificates", None, || {
        for (i, m) in stable_real_corpus(200).iter().enumerate() {
            for eps in EPSILONS {
                let cert = canonical_gf_interleaving(m, &r(eps)).unwrap();
                assert_eq!(cert.shift(), &(&r(eps) + &r(eps)));
                assert!(
                    matches!(cert.kind(), CertificateKind::Weak(x0) if x0.is_zero()),
                    "gf certificate must be weak with basepoint 0"
                );
                let verdict = verify_weak(&cert).unwrap();
                assert!(verdict.accepted(), "gf module {i}, eps {eps}: {verdict:?}");
            }
        }
        let two = Rational::from_int(2);
        for (i, n) in nat_corpus(200).iter().enumerate() {
            for eps in EPSILONS {
                let cert = canonical_fg_interleaving(n, &r(eps)).unwrap();
                assert_eq!(cert.shift(), &two);
                let verdict = verify_strong(&cert).unwrap();
                assert!(verdict.accepted(), "fg module {i}, eps {eps}: {verdict:?}");
                let composite = compose_fg(n, &r(eps)).unwrap();
                assert!(
                    composite.canonical_eq(&n.translate(&two).unwrap()),
                    "fg composite is not the 2-shift for module {i}, eps {eps}"
                );
            }
        }
    });
}

#[test]
fn criterion_06_equivalence_reports() {
    criterion(6, "equivalence reports", None, || {
        for (i, m) in stable_real_corpus(200).iter().enumerate() {
            for eps in EPSILONS {
                let report = equivalence_report(m, &r(eps)).unwrap();
                assert!(
                    report.primary.accepted()
                        && report.promoted.accepted()
                        && report.bottleneck_within_bound(),
                    "real module {i}, eps {eps}"
                );
            }
        }
        for (i, n) in nat_corpus(200).iter().enumerate() {
            for eps in EPSILONS {
                let report = equivalence_report(n, &r(eps)).unwrap();
                assert!(
                    report.primary.accepted()
                        && report.promoted.accepted()
                        && report.shift_equality == Some(true)
                        && report.bottleneck_within_bound(),
                    "natural module {i}, eps {eps}"
                );
            }
        }
    });
}

#[test]
fn criterion_07_oracle_agreement() {
    criterion(
        7,
        "oracle agreement",
        Some(Duration::from_secs(300)),
        || {
            // Every interval module with at most 2 bars and endpoints in
            // {0,...,4}: bars [b, d) with 0 <= b < d <= 4.
            let mut bars = Vec::new();
            for b in 0..4i64 {
                for d in b + 1..=4 {
                    bars.push((Rational::from_int(b), Rational::from_int(d)));
                }
            }
            let mut sides: Vec<Barcode> = vec![Barcode::empty(IndexKind::Real)];
            for (i, (b1, d1)) in bars.iter().enumerate() {
                sides.push(
                    Barcode::new(
                        IndexKind::Real,
                        vec![(b1.clone(), Extended::Finite(d1.clone()), 1)],
                    )
                    .unwrap(),
                );
                for (b2, d2) in bars.iter().skip(i) {
                    sides.push(
                        Barcode::new(
                            IndexKind::Real,
                            vec![
                                (b1.clone(), Extended::Finite(d1.clone()), 1),
                                (b2.clone(), Extended::Finite(d2.clone()), 1),
                            ],
                        )
                        .unwrap(),
                    );
                }
            }
            let modules: Vec<(Barcode, TameModule)> = sides
                .into_iter()
                .map(|bc| {
                    let m = from_barcode(&bc, 2).unwrap();
                    (bc, m)
                })
                .collect();
            let mut instances = 0usize;
            for eps in ["0", "1/2", "1", "3/2", "2"] {
                let eps = r(eps);
                for (bc_a, m_a) in &modules {
                    for (bc_b, m_b) in &modules {
                        let exists =
                            brute_force_interleaving_exists(m_a, m_b, &eps, DEFAULT_BRUTE_BUDGET)
                                .unwrap();
                        let distance = bottleneck_distance(bc_a, bc_b).unwrap();
                        let within = match &distance {
                            Extended::Finite(d) => d <= &eps,
                            Extended::Infinity => false,
                        };
                        assert_eq!(
                            exists, within,
                            "oracles disagree: {bc_a:?} vs {bc_b:?} at eps {eps} \
                         (bottleneck {distance})"
                        );
                        instances += 1;
                    }
                }
            }
            assert_eq!(instances, 66 * 66 * 5);
        },
    );
}

#[test]
fn criterion_08_decomposition() {
    criterion(8, "decomposition invariants", None, || {
        let small = exhaustive_small_modules(3, 2);
        assert!(small.len() > 500, "exhaustive set has {}", small.len());
        for m in &small {
            let rebuilt = from_barcode(&decompose(m).unwrap(), 2).unwrap();
            assert!(rank_invariant_eq(m, &rebuilt), "small module {m:?}");
        }
        for i in 0..500 {
            let m =
                pmod_core::generate::random_raw_module(0xdec0 + i as u64, 5, 3, IndexKind::Real, 2)
                    .unwrap();
            let rebuilt = from_barcode(&decompose(&m).unwrap(), 2).unwrap();
            assert!(rank_invariant_eq(&m, &rebuilt), "random module {i}: {m:?}");
        }
    });
}

#[test]
fn criterion_09_rejection_power() {
    criterion(9, "rejection power", None, || {
        let mut rejected = 0usize;
        'outer: for (i, m) in real_corpus(200).iter().enumerate() {
            for eps in EPSILONS {
                let eps_r = r(eps);
                let cert = canonical_shift_interleaving(m, &eps_r).unwrap();
                let Some(corrupted) = corrupt_detectably(&cert) else {
                    continue;
                };
                let verdict = verify_strong(&corrupted).unwrap();
                assert!(
                    verdict.witness().is_some(),
                    "corrupted certificate slipped through for module {i}, eps {eps}"
                );
                rejected += 1;
                if rejected == 100 {
                    break 'outer;
                }
            }
        }
        assert_eq!(rejected, 100, "not enough corruptible certificates");
    });
}

// Zeroes one nonzero f-block that feeds a nonzero composite condition, so
// a sound verifier must reject; returns None when every condition the
// certificate asserts is vacuous (zero maps are then genuinely valid).
fn corrupt_detectably(cert: &InterleavingCertificate) -> Option<InterleavingCertificate> {
    let m = cert.left_module();
    let eps = cert.shift();
    let two_eps = eps + eps;
    let f = cert.f();
    for (k, cell) in f.cells().iter().enumerate() {
        if f.blocks()[k].is_zero() {
            continue;
        }
        let expected = m.structure_map(cell, &(cell + &two_eps)).unwrap();
        if expected.is_zero() {
            continue;
        }
        let mut blocks = f.blocks().to_vec();
        blocks[k] = Matrix::zero(blocks[k].rows(), blocks[k].cols(), m.modulus());
        let bad_f = f.with_blocks(blocks).unwrap();
        let bad =
            InterleavingCertificate::new(bad_f, cert.g().clone(), cert.kind().clone()).unwrap();
        return Some(bad);
    }
    None
}

#[test]
fn criterion_10_bottleneck_consistency() {
    criterion(10, "bottleneck consistency", None, || {
        for (i, m) in stable_real_corpus(200).iter().enumerate() {
            for eps in EPSILONS {
                let eps_r = r(eps);
                let composite = pmod_core::bridge::compose_gf(m, &eps_r).unwrap();
                let d =
                    bottleneck_distance(&decompose(m).unwrap(), &decompose(&composite).unwrap())
                        .unwrap();
                let bound = &eps_r + &eps_r;
                match &d {
                    Extended::Finite(d) => {
                        assert!(d <= &bound, "module {i}, eps {eps}: {d} > {bound}")
                    }
                    Extended::Infinity => panic!("module {i}, eps {eps}: infinite distance"),
                }
            }
        }
    });
}
