use proptest::prelude::*;

use alexinv::budget::Budget;
use alexinv::cli::{bb_dims, BbMethod};
use alexinv::fox_alex::{fox_derivative, multiply, twisted_h1_dim, Character, GroupPresentation, GroupRingElement, Word};
use alexinv::free_lie::{lyndon_basis, witt_number, FreeLieAlgebra};
use alexinv::nilpotent_transport::{exp_transport, is_nilpotent, log_transport, FinDimLaurentModule};
use alexinv::quad_lie::random_presentation;
use alexinv::{Rational, RationalMatrix, RationalVec, SparseVec};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn matrix() -> impl Strategy<Value = RationalMatrix> {
    (1usize..7, 1usize..7).prop_flat_map(|(r, c)| {
        proptest::collection::vec(proptest::collection::vec(prop_oneof![3 => Just(0i64), 2 => -4i64..=4], c), r).prop_map(|d| {
            RationalMatrix::from_dense(&d.iter().map(|row| row.iter().map(|&x| Rational::from_integer(x)).collect()).collect::<Vec<_>>())
        })
    })
}

fn word(n: usize, max_len: usize) -> impl Strategy<Value = Word> {
    proptest::collection::vec((1..=n as i32, any::<bool>()).prop_map(|(g, s)| if s { g } else { -g }), 0..=max_len)
}

fn commutator(a: &[i32], b: &[i32]) -> Word {
    let inv = |w: &[i32]| w.iter().rev().map(|x| -x).collect::<Vec<_>>();
    multiply(&multiply(a, b), &multiply(&inv(a), &inv(b)))
}

fn unipotent_family(dim: usize, seeds: &[(Vec<i64>, i64, i64)]) -> Vec<RationalMatrix> {
    // polynomials in one strictly upper triangular matrix commute
    let upper: Vec<i64> = seeds.first().map(|s| s.0.clone()).unwrap_or_default();
    let mut k = 0;
    let n = RationalMatrix::from_dense(
        &(0..dim)
            .map(|i| {
                (0..dim)
                    .map(|j| {
                        if j > i {
                            k += 1;
                            Rational::from_integer(upper[(k - 1) % upper.len().max(1)])
                        } else {
                            Rational::from_integer(0)
                        }
                    })
                    .collect()
            })
            .collect::<Vec<_>>(),
    );
    let id = RationalMatrix::identity(dim);
    seeds
        .iter()
        .map(|(_, a, b)| id.add(&n.scale(&Rational::from_integer(*a))).add(&n.mul(&n).scale(&Rational::new(*b, 2))))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_plus_nullity(m in matrix()) {
        prop_assert_eq!(m.rank() + m.kernel_basis().len(), m.cols());
        prop_assert_eq!(m.rank(), m.transpose().rank());
    }

    #[test]
    fn jacobi_identity(n in 2usize..4, seed in any::<u64>()) {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let alg = FreeLieAlgebra::new(n, 6);
        let mut element = |d: usize| {
            let v: RationalVec = SparseVec::from_pairs(
                (0..alg.dim(d)).map(|i| (i, Rational::from_integer(rng.gen_range(-2..=2)))),
            );
            alg.from_coords(d, &v)
        };
        let (x, y, z) = (element(1), element(2), element(1));
        let a = alg.bracket(&x, &alg.bracket(&y, &z));
        let b = alg.bracket(&y, &alg.bracket(&z, &x));
        let c = alg.bracket(&z, &alg.bracket(&x, &y));
        prop_assert!(a.add(&b).add(&c).is_zero());
        prop_assert!(alg.bracket(&x, &y).add(&alg.bracket(&y, &x)).is_zero());
    }

    #[test]
    fn fundamental_formula_of_fox_calculus(n in 1usize..4, w in word(3, 12)) {
        let w: Word = w.into_iter().map(|x| if x.unsigned_abs() as usize > n { x.signum() } else { x }).collect();
        let mut sum = GroupRingElement::zero();
        for j in 0..n {
            let gen = GroupRingElement::from_word(&[j as i32 + 1]).sub(&GroupRingElement::one());
            sum = sum.add(&fox_derivative(&w, j).mul(&gen));
        }
        prop_assert_eq!(sum, GroupRingElement::from_word(&w).sub(&GroupRingElement::one()));
    }

    #[test]
    fn twisted_h1_is_invariant_under_relator_moves(
        pairs in proptest::collection::vec((word(3, 4), word(3, 4)), 1..4),
        chi in proptest::collection::vec(prop_oneof![Just(1i64), Just(-1), Just(2), Just(3)], 3),
        rot in 0usize..8,
    ) {
        let rels: Vec<Word> = pairs.iter().map(|(a, b)| commutator(a, b)).collect();
        let p = GroupPresentation::new(3, rels.clone()).unwrap();
        let rho: Character = chi.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",").parse().unwrap();
        let base = twisted_h1_dim(&p, &rho).unwrap();
        prop_assert_eq!(twisted_h1_dim(&p.normalized(), &rho).unwrap(), base);
        // cyclic rotation, inversion, and adding a product of relators
        let mut moved = rels.clone();
        if !moved[0].is_empty() {
            let k = rot % moved[0].len();
            moved[0].rotate_left(k);
        }
        moved.push(multiply(&rels[0], &rels[rels.len() - 1]));
        let last = moved.len() - 1;
        moved[last] = moved[last].iter().rev().map(|x| -x).collect();
        prop_assert_eq!(twisted_h1_dim(&GroupPresentation::new(3, moved).unwrap(), &rho).unwrap(), base);
    }

    #[test]
    fn log_exp_round_trip(dim in 1usize..5, seeds in proptest::collection::vec((proptest::collection::vec(-3i64..=3, 1..7), -2i64..=2, -2i64..=2), 1..4)) {
        let actions = unipotent_family(dim, &seeds);
        let m = FinDimLaurentModule::new(dim, actions).unwrap();
        let x = log_transport(&m).unwrap();
        prop_assert_eq!(&exp_transport(&x).unwrap(), &m);
        prop_assert_eq!(x.annihilator_exponent(), is_nilpotent(&m).exponent);
    }

    #[test]
    fn filtration_strictly_decreases(dim in 1usize..5, entries in proptest::collection::vec(-2i64..=2, 16), diag in proptest::collection::vec(prop_oneof![3 => Just(1i64), 1 => Just(2), 1 => Just(-1)], 4)) {
        let t = RationalMatrix::from_dense(
            &(0..dim)
                .map(|i| (0..dim).map(|j| Rational::from_integer(match j.cmp(&i) {
                    std::cmp::Ordering::Greater => entries[i * 4 + j],
                    std::cmp::Ordering::Equal => diag[i],
                    std::cmp::Ordering::Less => 0,
                })).collect())
                .collect::<Vec<_>>(),
        );
        let m = FinDimLaurentModule::new(dim, vec![t.clone()]).unwrap();
        let r = is_nilpotent(&m);
        prop_assert!(r.filtration_dims.windows(2).all(|w| w[1] < w[0]));
        let n = t.sub(&RationalMatrix::identity(dim));
        prop_assert_eq!(r.nilpotent, n.pow(dim as u32).is_zero());
        prop_assert_eq!(r.nilpotent, diag[..dim].iter().all(|&d| d == 1));
    }

    #[test]
    fn lyndon_count_is_witt(n in 1usize..4, q in 1usize..8) {
        prop_assert_eq!(lyndon_basis(n, q).len() as u64, witt_number(n as u64, q as u64));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn three_constructions_agree(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_presentation(&mut rng, 4, 4);
        let b = Budget::unlimited();
        let a = bb_dims(&p, 2, BbMethod::NablaBar, &b).unwrap();
        prop_assert_eq!(&bb_dims(&p, 2, BbMethod::Nabla, &b).unwrap(), &a);
        prop_assert_eq!(&bb_dims(&p, 2, BbMethod::Direct, &b).unwrap(), &a);
        // once zero, stays zero
        if let Some(q) = a.first_vanishing() {
            prop_assert!(a.degrees().filter(|&d| d >= q).all(|d| a.get(d) == Some(0)));
        }
    }
}
