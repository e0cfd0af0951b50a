//! Acceptance suite: one line per criterion, exact values, wall-clock budgets.
//!
//! Runs without the libtest harness so the report is always printed.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use fibering::akcert::{
    ak_certificate, b1_total, base_b1, invariant_subspace, lift_variant_survey, parity_filter,
    GeneratorSelection, DEFAULT_WORDS, KAHLER_AXIOM, MINIMAL_WORDS,
};
use fibering::branchedcover::{DoubleCoverModel, LiftVariant, Sign};
use fibering::coverbundle::{cover_certificate, cover_h1_data, ProductCoverSpec, STATEMENT_PROOF_NOTE};
use fibering::exactq::q;
use fibering::homology::{tau_involution, twist, HClass, MappingAction};
use fibering::prodring::{
    classify_zero_divisor_pair, diagonal_class, kunneth_lemma_trials, punctured_pair_trials,
    KunnethRing, PairClass, PuncturedProductRing,
};
use fibering::salter::{no_fifth_fibering_check, MSSpace};
use fibering::surfgroup::{
    mod2_homology_cover, reidemeister_schreier, riemann_hurwitz_genus, SurfacePresentation,
};

fn symplectic_oracle(m: &MappingAction) -> bool {
    let j = m.space().form();
    let a = m.matrix();
    &(&a.transpose() * &j) * a == j
}

fn timed(budget: Duration, f: impl FnOnce()) -> Duration {
    let start = Instant::now();
    f();
    let elapsed = start.elapsed();
    assert!(elapsed <= budget, "took {elapsed:?}, budget {budget:?}");
    elapsed
}

fn criterion_1() {
    let m = DoubleCoverModel::standard();
    timed(Duration::from_secs(1), || {
        let v = invariant_subspace(&GeneratorSelection::default_selection(&m), &m).unwrap();
        assert_eq!(v.dim(), 6);
        assert_eq!(v, m.plus_space());
        assert_eq!(v, m.transfer_image());
    });
}

fn criterion_2() {
    let m = DoubleCoverModel::standard();
    timed(Duration::from_secs(1), || {
        let sel = GeneratorSelection::minimal_selection(&m);
        assert_eq!(sel.texts()[..2], ["a1 a1".to_string(), "b2 a1 b2 a1".to_string()]);
        let v = invariant_subspace(&sel, &m).unwrap();
        assert!(m.plus_space().is_subspace_of(&v));
        let (lower, upper) = (m.plus_space().dim(), v.dim());
        assert_eq!((lower, upper), (6, 7));
        assert_eq!(parity_filter(lower, upper, 258).unwrap(), 6);
    });
    let minimal = ak_certificate(&GeneratorSelection::minimal_selection(&m), &m).unwrap();
    let direct = ak_certificate(&GeneratorSelection::default_selection(&m), &m).unwrap();
    assert_eq!(minimal.dims["invariant"], direct.dims["invariant"]);
    assert_eq!(minimal.fib(), Some(2));
    assert_eq!(direct.fib(), Some(2));
    assert!(minimal.axioms.iter().any(|a| a == KAHLER_AXIOM));
}

fn criterion_3() {
    let pres = SurfacePresentation::closed(3);
    timed(Duration::from_secs(60), || {
        let sub = reidemeister_schreier(&pres, &mod2_homology_cover(3)).unwrap();
        assert_eq!(sub.index, 64);
        assert_eq!(sub.generator_count(), 321);
        assert_eq!(fibering::surfgroup::abelianized_rank(&sub), 258);
    });
    assert_eq!(2 * riemann_hurwitz_genus(3, 64, &[]).unwrap(), 258);
    assert_eq!(base_b1(), 258);
    assert_eq!(b1_total(6).unwrap(), 264);
    let m = DoubleCoverModel::standard();
    let cert = ak_certificate(&GeneratorSelection::default_selection(&m), &m).unwrap();
    assert_eq!(cert.dims["b1_total"], 264);
    assert_eq!(cert.dims["b1_base"] + cert.dims["invariant"], 264);
}

fn criterion_4() {
    let cases: [(usize, usize, Vec<usize>, usize); 3] = [
        (3, 2, vec![2, 2], 6),
        (3, 64, vec![], 129),
        (129, 2, vec![2; 128], 321),
    ];
    for (g, d, branch, expected) in cases {
        let start = Instant::now();
        let genus = riemann_hurwitz_genus(g, d, &branch).unwrap();
        let elapsed = start.elapsed();
        assert_eq!(genus, expected);
        assert!(elapsed < Duration::from_millis(1), "{elapsed:?}");
    }
}

fn criterion_5() {
    timed(Duration::from_secs(5), || {
        for (g1, g2, seed) in [(2, 2, 5), (3, 2, 6)] {
            let report = kunneth_lemma_trials(&KunnethRing::new(g1, g2).unwrap(), 1000, seed);
            assert!(report.failures.is_empty(), "{:?}", report.failures);
            assert_eq!(report.proportional_confirmed, 1000);
            assert_eq!(report.perturbed_nonzero, 1000);
        }
    });
}

fn criterion_6() {
    timed(Duration::from_secs(5), || {
        let ring = PuncturedProductRing::new(2).unwrap();
        let report = punctured_pair_trials(&ring, 500, 9);
        assert!(report.violations.is_empty(), "{:?}", report.violations);
        assert!(report.same_factor > 0 && report.dependent > 0 && report.nonzero_cup > 0);
        let r = ring.ambient();
        let e = |i: usize| {
            let mut v = vec![q(0); 4];
            v[i] = q(1);
            v
        };
        assert_eq!(
            classify_zero_divisor_pair(&r.embed_second(&e(0)), &r.embed_second(&e(2)), &ring).unwrap(),
            PairClass::SameFactor(2)
        );
        for i in 0..4 {
            for j in 0..4 {
                let out = classify_zero_divisor_pair(&r.embed_first(&e(i)), &r.embed_second(&e(j)), &ring).unwrap();
                assert!(matches!(out, PairClass::NonzeroCup(_)), "{i} {j}");
            }
        }
        for g in 1..=3i64 {
            assert_eq!(diagonal_class(g as usize).unwrap().self_intersection(), q(2 - 2 * g));
        }
    });
}

fn criterion_7() {
    timed(Duration::from_secs(30), || {
        for g in 2..=5 {
            let s = MSSpace::new(g).unwrap();
            assert_eq!(s.h1().dim(), 6 * g);
            for (i, p) in s.pullbacks().iter().enumerate() {
                assert_eq!(p.dim(), 2 * g);
                for other in &s.pullbacks()[i + 1..] {
                    assert!(p.intersect(other).unwrap().is_zero());
                }
            }
        }
        for g in [2, 3] {
            let cert = no_fifth_fibering_check(g, 1000, 2024).unwrap();
            assert!(cert.is_certified(), "{:?}", cert.failed_checks());
            assert_eq!(cert.fib(), Some(4));
            let trials = &cert.find_check("randomized_trials").unwrap().data;
            assert_eq!(trials["summary"]["counterexamples"].as_array().unwrap().len(), 0);
        }
    });
}

fn criterion_8() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/covers");
    timed(Duration::from_secs(60), || {
        for (file, expected) in [
            ("trivial.json", (4, 4, 8)),
            ("factor-pullback.json", (34, 4, 38)),
            ("diagonal-z2.json", (4, 4, 8)),
        ] {
            let spec = ProductCoverSpec::load(&dir.join(file)).unwrap();
            let data = cover_h1_data(&spec).unwrap();
            assert_eq!(data.triple(), expected, "{file}");
            assert_eq!(data.b1_total, data.b1_im1 + data.b1_im2);
            let cert = cover_certificate(&spec).unwrap();
            assert!(cert.is_certified(), "{file}: {:?}", cert.failed_checks());
            let notes = &cert.conclusion.as_ref().unwrap().notes;
            assert!(notes.iter().any(|n| n == STATEMENT_PROOF_NOTE));
        }
    });
}

fn criterion_9() {
    timed(Duration::from_secs(120), || {
        let m = DoubleCoverModel::standard();
        let tau = tau_involution(m.base()).unwrap();
        let sigma = m.sigma_star();
        for (inv, dims) in [(sigma, (6, 6)), (&tau, (4, 2))] {
            assert!(symplectic_oracle(inv));
            assert!(inv.compose(inv).unwrap().is_identity());
            assert_eq!((inv.eigenspace(&q(1)).dim(), inv.eigenspace(&q(-1)).dim()), dims);
        }
        let mut actions: Vec<MappingAction> = Vec::new();
        for i in 0..6 {
            actions.push(twist(&HClass::basis(m.base(), i), 1).unwrap());
            actions.push(twist(&HClass::basis(m.cover(), 2 * i), -2).unwrap());
        }
        let sel = GeneratorSelection::parse(&DEFAULT_WORDS, &m).unwrap();
        for w in &sel.words {
            for sign in [Sign::Plus, Sign::Minus] {
                for twisted in [false, true] {
                    let variant = LiftVariant::new(sign, twisted);
                    let lift = m.lifted_push_squared(&w.gamma, variant).unwrap();
                    let phi = m.ak_monodromy_element(&w.gamma, &tau, variant).unwrap();
                    if !twisted {
                        for b in m.plus_space().basis() {
                            let c = HClass::new(m.cover(), b.clone()).unwrap();
                            assert_eq!(lift.apply(&c).unwrap(), c);
                            assert_eq!(phi.apply(&c).unwrap(), c);
                        }
                    }
                    actions.push(lift);
                    actions.push(phi);
                }
            }
        }
        for a in &actions {
            assert!(symplectic_oracle(a), "{}", a.provenance());
        }
        for words in [&DEFAULT_WORDS[..], &MINIMAL_WORDS[..], &["a1 a1"][..]] {
            let plus = GeneratorSelection::parse(words, &m).unwrap();
            let minus = plus.clone().with_variant(LiftVariant::new(Sign::Minus, false));
            assert_eq!(
                invariant_subspace(&plus, &m).unwrap(),
                invariant_subspace(&minus, &m).unwrap()
            );
        }
        let survey = lift_variant_survey(&GeneratorSelection::minimal_selection(&m), &m).unwrap();
        let untwisted: Vec<usize> = survey
            .iter()
            .filter(|r| r.sigma_twisted.is_empty())
            .map(|r| r.invariant_dim)
            .collect();
        assert_eq!(untwisted, vec![7, 7]);
    });
}

fn main() -> ExitCode {
    let criteria: [(&str, fn()); 9] = [
        ("AK invariant subspace is H+ (dim 6)", criterion_1),
        ("AK minimal selection + parity gives 6", criterion_2),
        ("b1(M_AK) = 258 + 6 = 264, two routes", criterion_3),
        ("Riemann-Hurwitz genera 6, 129, 321", criterion_4),
        ("Kunneth zero-divisor lemma trials", criterion_5),
        ("punctured product pairs and diagonal class", criterion_6),
        ("Salter M_S: H1, pullbacks, Fib = 4", criterion_7),
        ("cover bundles: H1 decomposition and certificates", criterion_8),
        ("structural invariants", criterion_9),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run));
        let elapsed = start.elapsed();
        match outcome {
            Ok(()) => println!("criterion {}: PASS  {name} ({elapsed:.2?})", i + 1),
            Err(e) => {
                failed += 1;
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                println!("criterion {}: FAIL  {name} ({elapsed:.2?}): {msg}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
