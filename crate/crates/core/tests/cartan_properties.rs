use num_traits::Zero;
use proptest::prelude::*;
use z2rep::cartan::{
    build_h_module, classify, classify_blocks, cyclic_subspace_search, find_invariant_subspace,
    h_module_from_roots, is_invariant, ConstituentKind, HModule, InvariantSubspace,
};
use z2rep::linalg::Matrix;
use z2rep::rational::{frac, int, Rational};

fn rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=3).prop_map(|(p, q)| frac(p, q))
}

fn rooted_module() -> impl Strategy<Value = HModule> {
    (1usize..=8, rational())
        .prop_flat_map(|(n, r)| {
            let h = if n <= 1 { 0 } else if n % 2 == 1 { (n - 1) / 2 } else { n / 2 };
            (Just(n), Just(r), prop::collection::vec(rational(), h))
        })
        .prop_map(|(n, r, roots)| h_module_from_roots(n, r, &roots).unwrap())
}

fn any_module() -> impl Strategy<Value = HModule> {
    (1usize..=8, rational())
        .prop_flat_map(|(n, r)| {
            let h = if n <= 1 { 0 } else if n % 2 == 1 { (n - 1) / 2 } else { n / 2 };
            (Just(n), Just(r), prop::collection::vec(-3i64..=3, h))
        })
        .prop_map(|(n, r, c)| build_h_module(n, r, c.into_iter().map(int).collect()).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn r_is_central(m in any_module()) {
        prop_assert_eq!(m.mat_r.mul(&m.mat_rt), m.mat_rt.mul(&m.mat_r));
    }

    #[test]
    fn rt_flips_parity(m in any_module()) {
        let par = m.parities();
        for i in 0..m.dim {
            for j in 0..m.dim {
                if !m.mat_rt[(i, j)].is_zero() {
                    prop_assert_ne!(par[i], par[j]);
                }
            }
        }
    }

    #[test]
    fn found_subspaces_are_invariant_and_proper(m in any_module()) {
        match find_invariant_subspace(&m) {
            InvariantSubspace::Found { basis, .. } => {
                prop_assert!(!basis.is_empty() && basis.len() < m.dim);
                prop_assert!(is_invariant(&m.mat_rt, &basis));
            }
            InvariantSubspace::Irreducible => {
                prop_assert!(m.dim <= 2);
                prop_assert!(cyclic_subspace_search(&m.mat_rt, &m.parities(), 2).is_none());
            }
            InvariantSubspace::NoRationalSubspace => prop_assert!(m.dim % 2 == 0),
        }
        if m.dim > 1 && m.dim % 2 == 1 {
            let found = matches!(find_invariant_subspace(&m), InvariantSubspace::Found { .. });
            prop_assert!(found);
        }
    }

    #[test]
    fn rooted_modules_split_into_nu_pieces(m in rooted_module()) {
        let blocks = classify_blocks(&m);
        prop_assert_eq!(blocks.iter().map(|b| b.constituent.dim).sum::<usize>(), m.dim);
        for b in &blocks {
            prop_assert_eq!(&b.constituent.r, &m.r);
            match b.constituent.kind {
                ConstituentKind::NuR => prop_assert_eq!(b.constituent.dim, 1),
                ConstituentKind::NuRLambda => {
                    let l = b.constituent.lambda.clone().unwrap();
                    prop_assert!(!l.is_zero());
                    prop_assert_eq!(b.mat_rt.mul(&b.mat_rt), Matrix::identity(2).scale(&l));
                    let nu = b.constituent.irreducible().unwrap().to_h_module();
                    prop_assert_eq!(nu.mat_rt.mul(&nu.mat_rt), Matrix::identity(2).scale(&l));
                }
                ConstituentKind::Unresolved => prop_assert!(false, "rational roots must resolve"),
            }
            prop_assert!(cyclic_subspace_search(&b.mat_rt, &b.parities, 3).is_none());
        }
    }

    #[test]
    fn t_polynomial_roots_are_the_lambdas(m in rooted_module()) {
        prop_assume!(m.dim % 2 == 0);
        let report = classify(&m);
        for c in report.constituents.iter().filter(|c| c.kind == ConstituentKind::NuRLambda) {
            let l = c.lambda.clone().unwrap();
            let p = m.t_polynomial().unwrap();
            let val = p.iter().rev().fold(Rational::zero(), |acc, x| acc * &l + x);
            prop_assert!(val.is_zero());
        }
    }
}

#[test]
fn worked_examples() {
    let report = classify(&build_h_module(2, int(0), vec![int(5)]).unwrap());
    assert_eq!(report.constituents.len(), 1);
    assert_eq!(report.constituents[0].lambda, Some(int(5)));

    let m = build_h_module(4, int(0), vec![int(0), int(1)]).unwrap();
    let report = classify(&m);
    assert!(report.constituents.iter().all(|c| c.dim <= 2));
    assert!(report.fully_resolved());
}
