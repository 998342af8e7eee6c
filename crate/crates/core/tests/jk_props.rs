mod common;

use common::*;
use jkscatter::arrangement::{build_arrangement, enumerate_flags, flag_residue, jk_basis, jk_zeta, ChargeMode, RCharges};
use jkscatter::exact::{frac, int};
use jkscatter::quiver::Quiver;
use jkscatter::quiver_jk::{jk_quiver, jk_tree_expansion, SignMode};
use jkscatter::{LinForm, Rational, RationalExpr};
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn regular_zeta(rng: &mut ChaCha8Rng, elements: &[Vec<Rational>], n: usize) -> Vec<Rational> {
    loop {
        let z = random_zeta(rng, n);
        if sum_regular(&z, elements) {
            return z;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn orientation_independent(seed in any::<u64>(), n in 2usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_arrangement(&mut rng, n);
        let z = regular_zeta(&mut rng, &a.elements, n);
        prop_assert_eq!(
            jk_zeta(&a.f, &a.elements, &z, &identity(n)).unwrap(),
            jk_zeta(&a.f, &a.elements, &z, &flipped(n)).unwrap()
        );
    }

    #[test]
    fn basis_consistency(seed in any::<u64>(), n in 2usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_arrangement(&mut rng, n);
        let basis: Vec<Vec<Rational>> = {
            let mut b: Vec<Vec<Rational>> = Vec::new();
            for e in &a.elements {
                let mut t = b.clone();
                t.push(e.clone());
                if jkscatter::exact::linalg::rank(&t) == t.len() {
                    b = t;
                }
            }
            b
        };
        let f = RationalExpr::from_factors(
            int(1),
            basis.iter().map(|e| (LinForm::from_dense(e), -rng.gen_range(1..=3))),
        )
        .unwrap()
        .mul(&RationalExpr::from_factors(int(1), [(LinForm::var(0).with_constant(int(2)), -1)]).unwrap());
        for _ in 0..10 {
            let z = regular_zeta(&mut rng, &basis, n);
            prop_assert_eq!(jk_zeta(&f, &basis, &z, &identity(n)).unwrap(), jk_basis(&f, &basis, &z).unwrap());
        }
    }

    #[test]
    fn chamber_constancy(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_arrangement(&mut rng, 2);
        let z1 = regular_zeta(&mut rng, &a.elements, 2);
        let mut found = None;
        for _ in 0..200 {
            let z2 = regular_zeta(&mut rng, &a.elements, 2);
            if z2 != z1 && same_chamber_2d(&a.elements, &z1, &z2) {
                found = Some(z2);
                break;
            }
        }
        prop_assume!(found.is_some());
        let z2 = found.unwrap();
        prop_assert_eq!(
            jk_zeta(&a.f, &a.elements, &z1, &identity(2)).unwrap(),
            jk_zeta(&a.f, &a.elements, &z2, &identity(2)).unwrap()
        );
    }

    #[test]
    fn flag_basis_freedom(seed in any::<u64>(), n in 2usize..=3, c in (1i64..=7, 1i64..=7)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_arrangement(&mut rng, n);
        let z = regular_zeta(&mut rng, &a.elements, n);
        let c = frac(c.0, c.1);
        for flag in enumerate_flags(&a.elements, &z, &identity(n)).unwrap() {
            if flag.nu == 0 {
                continue;
            }
            let mut alt = flag.clone();
            alt.basis[0] = alt.basis[0].iter().map(|x| x * &c).collect();
            alt.basis[n - 1] = alt.basis[n - 1].iter().map(|x| x / &c).collect();
            prop_assert_eq!(flag_residue(&a.f, &flag).unwrap(), flag_residue(&a.f, &alt).unwrap());
        }
    }
}

fn corpus() -> Vec<(&'static str, Quiver, Vec<Rational>)> {
    vec![
        ("K(2,1)", Quiver::bipartite(2, 1), ints(&[1, 1, -2])),
        ("K(2,2)", Quiver::bipartite(2, 2), ints(&[3, 1, -2, -2])),
        ("Kronecker-2", Quiver::kronecker(2), ints(&[1, -1])),
        ("A3", Quiver::path(3), ints(&[1, 0, -1])),
        ("A2", Quiver::path(2), ints(&[1, -1])),
    ]
}

#[test]
fn r_independence_on_corpus() {
    for (name, q, th) in corpus() {
        let ones = vec![1; q.vertex_count()];
        let values: Vec<Rational> = (1..=6u64)
            .map(|s| {
                let a = build_arrangement(&q, &ones, None, &RCharges::Seed(s), ChargeMode::Split).unwrap();
                jk_quiver(&q, &ones, &th, &a, SignMode::Paper).unwrap()
            })
            .collect();
        assert!(values.windows(2).all(|w| w[0] == w[1]), "{name}: {values:?}");
    }
}

#[test]
fn stability_filter() {
    for (name, q, th) in corpus() {
        let ones = vec![1; q.vertex_count()];
        let a = build_arrangement(&q, &ones, None, &RCharges::Seed(2), ChargeMode::Split).unwrap();
        let (_, terms) = jk_tree_expansion(&q, &th, &a).unwrap();
        for t in terms {
            if t.stable {
                assert!(t.components.iter().all(|c| c.is_negative()), "{name}");
            } else {
                assert!(t.components.iter().any(|c| c.is_positive()), "{name}");
                assert!(t.value.is_zero(), "{name}");
            }
        }
    }
}
