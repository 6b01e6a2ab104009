use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use z2rep::algebra::{Generator, GradedDegree};
use z2rep::linalg::rank_of;
use z2rep::rational::{frac, int, Rational};
use z2rep::singular::{
    closed_form, closed_form_coefficients, constraint_ms, find_singular, recurrence_solve,
    verify_rtilde_relations, ClosedFormKind, ClosedFormMatch, RecurrenceSystem,
};
use z2rep::verma::{act, enumerate_level, sectors_for_level, ModuleVector, VermaKind};

fn mr(m: u32) -> VermaKind {
    VermaKind::mr(int(-2 * m as i64))
}

/// `(r, (r+2M)²)` with a non-integer `r`, so only one `M` satisfies the constraint.
fn lambda_pair(m: u32, num: i64, den: i64) -> VermaKind {
    let r = frac(num, den);
    let s = &r + int(2 * m as i64);
    VermaKind::mr_lambda(r, &s * &s).unwrap()
}

fn same_line(u: &ModuleVector, v: &ModuleVector, kind: &VermaKind, level: u32) -> bool {
    let basis = enumerate_level(kind, level).basis;
    let a = u.coords(&basis);
    let b = v.coords(&basis);
    rank_of(basis.len(), std::slice::from_ref(&a)) == 1 && rank_of(basis.len(), &[a, b]) == 1
}

fn annihilated(v: &ModuleVector) -> bool {
    [Generator::Am, Generator::Atm, Generator::Lm, Generator::Ltm]
        .iter()
        .all(|g| act(*g, v).is_zero())
}

#[test]
fn mr_closed_forms_span_the_nullspaces() {
    for m in 0..=6 {
        let kind = mr(m);
        for (sector, which) in [
            (GradedDegree::new(0, 1), ClosedFormKind::Chi01),
            (GradedDegree::new(1, 0), ClosedFormKind::Chi10),
        ] {
            let rep = find_singular(&kind, 2 * m + 1, sector).unwrap();
            assert_eq!(rep.nullspace.len(), 1, "M={m} {sector}");
            let chi = closed_form(&kind, which, m).unwrap();
            assert!(same_line(&rep.nullspace[0], &chi, &kind, 2 * m + 1));
            assert!(matches!(rep.closed_form_match, ClosedFormMatch::Exact | ClosedFormMatch::ScalarMultiple));
            assert!(annihilated(&chi));
        }
        let level = 2 * (2 * m + 1);
        let rep = find_singular(&kind, level, GradedDegree::new(1, 1)).unwrap();
        assert_eq!(rep.nullspace.len(), 1);
        let chi = closed_form(&kind, ClosedFormKind::Chi11, m).unwrap();
        assert!(same_line(&rep.nullspace[0], &chi, &kind, level));
        assert!(find_singular(&kind, level, GradedDegree::new(0, 0)).unwrap().is_empty());
    }
}

#[test]
fn mr_lambda_closed_forms_span_the_nullspaces() {
    for m in 0..=5 {
        for (num, den) in [(1, 3), (-7, 2), (5, 4)] {
            let kind = lambda_pair(m, num, den);
            assert_eq!(constraint_ms(&kind), vec![m]);
            for (sector, which) in [
                (GradedDegree::new(0, 1), ClosedFormKind::Chi01),
                (GradedDegree::new(1, 0), ClosedFormKind::Chi10),
            ] {
                let rep = find_singular(&kind, 2 * m + 1, sector).unwrap();
                let chi = closed_form(&kind, which, m).unwrap();
                assert!(annihilated(&chi), "{which} M={m} {kind}");
                assert_eq!(rep.nullspace.len(), 1, "M={m} {sector} {kind}");
                assert!(same_line(&rep.nullspace[0], &chi, &kind, 2 * m + 1));
            }
            for level in (2..=2 * m + 2).step_by(2) {
                for s in sectors_for_level(level) {
                    assert!(find_singular(&kind, level, s).unwrap().is_empty());
                }
            }
        }
    }
}

#[test]
fn nullspace_vectors_are_singular_weight_vectors() {
    for kind in [mr(2), lambda_pair(1, 1, 3)] {
        for level in 1..=10 {
            for s in sectors_for_level(level) {
                for v in find_singular(&kind, level, s).unwrap().nullspace {
                    assert!(annihilated(&v));
                    let r_plus = kind.r() + int(level as i64);
                    assert_eq!(act(Generator::R, &v), v.scale(&r_plus));
                }
            }
        }
    }
}

#[test]
fn generic_parameters_have_no_singular_vectors() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    while checked < 6 {
        let r = frac(rng.gen_range(-50..=50), rng.gen_range(1..=50));
        let kind = VermaKind::mr(r.clone());
        if !constraint_ms(&kind).is_empty() {
            continue;
        }
        for level in 1..=9 {
            for s in sectors_for_level(level) {
                assert!(find_singular(&kind, level, s).unwrap().is_empty(), "r = {r}");
            }
        }
        let l = frac(rng.gen_range(1..=50), rng.gen_range(1..=50));
        let kl = VermaKind::mr_lambda(r, l).unwrap();
        if constraint_ms(&kl).is_empty() {
            for level in 1..=7 {
                for s in sectors_for_level(level) {
                    assert!(find_singular(&kl, level, s).unwrap().is_empty());
                }
            }
        }
        checked += 1;
    }
}

#[test]
fn rtilde_relations_in_mr() {
    for m in 0..=6 {
        let rep = verify_rtilde_relations(&mr(m), m).unwrap();
        assert!(rep.agrees_with_statement(), "{rep:?}");
    }
}

#[test]
fn ansatz_covers_the_sector_basis() {
    for m in 1..=7u32 {
        for sys in RecurrenceSystem::ALL {
            let kind = if sys == RecurrenceSystem::MuNuLambda {
                VermaKind::mr_lambda(int(1), int(1)).unwrap()
            } else {
                mr(0)
            };
            let mut ans: Vec<_> = sys.ansatz(m).concat();
            ans.sort();
            let sector = enumerate_level(&kind, sys.level(m)).sector(sys.sector());
            assert_eq!(ans, sector, "{sys} M={m}");
        }
    }
}

#[test]
fn recurrences_reproduce_closed_forms() {
    for m in 0..=6u32 {
        let kind = mr(m);
        for sys in [RecurrenceSystem::MuNu, RecurrenceSystem::AlphaBeta] {
            let sol = recurrence_solve(sys, m, kind.r(), None);
            assert_eq!(sol.dimension, 1, "{sys} M={m}");
            assert_eq!(Some(sol.families.clone()), closed_form_coefficients(sys, m, &kind), "{sys} M={m}");
        }
        let gd = 2 * m + 1;
        let sol = recurrence_solve(RecurrenceSystem::GammaDelta, gd, kind.r(), None);
        assert_eq!(sol.dimension, 1);
        assert_eq!(Some(sol.families), closed_form_coefficients(RecurrenceSystem::GammaDelta, gd, &kind));

        let kl = lambda_pair(m, 2, 5);
        let sol = recurrence_solve(RecurrenceSystem::MuNuLambda, m, kl.r(), kl.lambda());
        assert_eq!(sol.dimension, 1);
        assert_eq!(Some(sol.families), closed_form_coefficients(RecurrenceSystem::MuNuLambda, m, &kl));
    }
}

#[test]
fn recurrences_vanish_where_the_proof_says() {
    let rs: Vec<Rational> = vec![int(0), int(-2), int(-4), frac(1, 3), int(5)];
    for m in 1..=6u32 {
        for r in &rs {
            assert!(recurrence_solve(RecurrenceSystem::RhoSigma, m, r, None).is_zero());
            assert!(recurrence_solve(RecurrenceSystem::GammaDelta, 2 * m, r, None).is_zero());
        }
    }
    for m in 0..=4u32 {
        assert!(recurrence_solve(RecurrenceSystem::MuNu, m, &int(1 - 2 * m as i64), None).is_zero());
        assert!(recurrence_solve(RecurrenceSystem::MuNuLambda, m, &frac(1, 3), Some(&int(7))).is_zero());
    }
}

#[test]
fn recurrence_solutions_match_nullspaces() {
    // The relations are the full singular-vector conditions on the sector.
    for m in 0..=4u32 {
        for r in [int(-2 * m as i64), frac(1, 3)] {
            let kind = VermaKind::mr(r.clone());
            for sys in [RecurrenceSystem::MuNu, RecurrenceSystem::AlphaBeta, RecurrenceSystem::RhoSigma, RecurrenceSystem::GammaDelta] {
                if m == 0 && sys.level(m) == 0 {
                    continue;
                }
                let sol = recurrence_solve(sys, m, &r, None);
                let rep = find_singular(&kind, sys.level(m), sys.sector()).unwrap();
                assert_eq!(sol.dimension, rep.nullspace.len(), "{sys} M={m} r={r}");
                if sol.dimension == 1 {
                    assert!(same_line(&sol.to_vector(&kind), &rep.nullspace[0], &kind, sys.level(m)));
                }
            }
        }
    }
}

#[test]
fn closed_form_rejections_do_not_depend_on_zero_coefficients() {
    let kind = mr(3);
    let chi = closed_form(&kind, ClosedFormKind::Chi11, 3).unwrap();
    assert!(chi.terms().all(|(_, c)| !c.is_zero()));
}

#[test]
fn rtilde_coefficient_in_mr_lambda_is_one_minus_r() {
    for m in 0..=6 {
        for (num, den) in [(1, 3), (-7, 2), (5, 4), (-1, 1), (1, 1)] {
            let kind = lambda_pair(m, num, den);
            let rep = verify_rtilde_relations(&kind, m).unwrap();
            assert_eq!(rep.chi01_to_chi10.computed, Some(int(1) - kind.r()));
            assert!(rep.agrees_with_statement());
        }
    }
}
