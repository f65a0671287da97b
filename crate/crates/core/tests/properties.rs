use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use formlab_core::analyze::{
    canonical_representatives, classify_low_rank, decide_nullity_geq, nullity_exact, rank, verify_witness,
    DEFAULT_BUDGET,
};
use formlab_core::exactlin::{Field, Matrix, PrimeField, Subspace};
use formlab_core::exterior::{random_form_with, AltForm, AnyForm};
use formlab_core::grassmann::{check_iff, iota_dim, iota_span, plucker, random_subspace, DEFAULT_GRASS_CAP};

fn gf(p: u64) -> PrimeField {
    PrimeField::new(p).unwrap()
}

fn random_matrix(f: &PrimeField, rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Matrix<PrimeField> {
    let data = (0..rows)
        .map(|_| (0..cols).map(|_| rng.gen_range(0..f.p())).collect())
        .collect();
    Matrix::from_rows(f, cols, data).unwrap()
}

fn random_invertible(f: &PrimeField, n: usize, rng: &mut ChaCha8Rng) -> Matrix<PrimeField> {
    loop {
        let g = random_matrix(f, n, n, rng);
        if g.rank() == n {
            return g;
        }
    }
}

fn random_vector(f: &PrimeField, n: usize, rng: &mut ChaCha8Rng) -> Vec<u32> {
    (0..n).map(|_| rng.gen_range(0..f.p())).collect()
}

fn small_prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![3u64, 5, 7, 11])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rref_is_idempotent(p in small_prime(), rows in 1usize..6, cols in 1usize..7, seed: u64) {
        let f = gf(p);
        let m = random_matrix(&f, rows, cols, &mut ChaCha8Rng::seed_from_u64(seed));
        let once = m.rref().matrix;
        prop_assert_eq!(once.rref().matrix, once.clone());
    }

    #[test]
    fn kernel_vectors_are_annihilated(p in small_prime(), rows in 1usize..6, cols in 1usize..7, seed: u64) {
        let f = gf(p);
        let m = random_matrix(&f, rows, cols, &mut ChaCha8Rng::seed_from_u64(seed));
        let ker = m.kernel_basis();
        prop_assert_eq!(ker.dim(), cols - m.rank());
        for v in ker.vectors() {
            prop_assert!(m.mul_vec(&v).unwrap().iter().all(|x| *x == 0));
        }
    }

    #[test]
    fn subspace_representation_is_canonical(p in small_prime(), n in 1usize..7, r in 0usize..5, seed: u64) {
        let f = gf(p);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = r.min(n);
        let w = random_subspace(&f, n, r, &mut rng).unwrap();
        let g = random_invertible(&f, r.max(1), &mut rng);
        let rows = w.vectors();
        let mixed: Vec<Vec<u32>> = (0..r)
            .map(|i| (0..n).map(|c| (0..r).fold(0, |acc, j| f.mul_add(&acc, g.get(i, j), &rows[j][c]))).collect())
            .collect();
        prop_assert_eq!(Subspace::from_vectors(&f, n, mixed).unwrap(), w);
    }

    #[test]
    fn eval_is_alternating_and_multilinear(p in small_prime(), s in 1usize..4, n in 3usize..6, seed: u64) {
        let f = gf(p);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let form = random_form_with(&f, s, n, 2, &mut rng).unwrap();
        let args: Vec<Vec<u32>> = (0..s).map(|_| random_vector(&f, n, &mut rng)).collect();
        let base = form.eval(&args).unwrap();
        if s >= 2 {
            let mut swapped = args.clone();
            swapped.swap(0, 1);
            let neg: Vec<u32> = base.iter().map(|x| f.neg(x)).collect();
            prop_assert_eq!(form.eval(&swapped).unwrap(), neg);
            let mut repeated = args.clone();
            repeated[1] = repeated[0].clone();
            prop_assert!(form.eval(&repeated).unwrap().iter().all(|x| *x == 0));
        }
        let u = random_vector(&f, n, &mut rng);
        let c = rng.gen_range(0..f.p());
        let mut combo = args.clone();
        combo[0] = args[0].iter().zip(&u).map(|(a, b)| f.mul_add(a, &c, b)).collect();
        let mut with_u = args.clone();
        with_u[0] = u;
        let expect: Vec<u32> = base
            .iter()
            .zip(form.eval(&with_u).unwrap())
            .map(|(a, b)| f.mul_add(a, &c, &b))
            .collect();
        prop_assert_eq!(form.eval(&combo).unwrap(), expect);
    }

    #[test]
    fn double_contraction_vanishes(p in small_prime(), s in 2usize..4, n in 3usize..7, seed: u64) {
        let f = gf(p);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let form = random_form_with(&f, s, n, 1, &mut rng).unwrap();
        let v = random_vector(&f, n, &mut rng);
        prop_assert!(form.contract(&v).unwrap().contract(&v).unwrap().is_zero());
    }

    #[test]
    fn text_round_trip(p in small_prime(), s in 1usize..4, n in 3usize..7, m in 1usize..3, seed: u64) {
        let f = gf(p);
        let form = random_form_with(&f, s, n, m, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        prop_assert_eq!(AnyForm::parse(&form.render()).unwrap(), AnyForm::Prime(form.clone()));
        let lifted = form.lift();
        prop_assert_eq!(AnyForm::parse(&lifted.render()).unwrap(), AnyForm::Rational(lifted.clone()));
    }

    #[test]
    fn witnesses_transport_under_gl(p in prop::sample::select(vec![3u64, 5]), n in 4usize..7, seed: u64) {
        let f = gf(p);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let form = random_form_with(&f, 3, n, 1, &mut rng).unwrap();
        let g = random_invertible(&f, n, &mut rng);
        let moved = form.gl_act(&g).unwrap();
        prop_assert_eq!(rank(&moved), rank(&form));
        let res = nullity_exact(&form, 2, DEFAULT_BUDGET).unwrap();
        let w = res.witness.witness.clone().unwrap();
        let gw = w.map(&g).unwrap();
        prop_assert_eq!(gw.dim(), w.dim());
        prop_assert!(verify_witness(&moved, 2, &gw).unwrap());
        prop_assert_eq!(nullity_exact(&moved, 2, DEFAULT_BUDGET).unwrap().value, res.value);
    }

    #[test]
    fn decisions_are_monotone_and_certificates_verify(p in prop::sample::select(vec![3u64, 5]), n in 3usize..7, k in 1usize..4, seed: u64) {
        let f = gf(p);
        let form = random_form_with(&f, 3, n, 1, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let mut seen_false = false;
        for r in 0..=n {
            let d = decide_nullity_geq(&form, k, r, DEFAULT_BUDGET).unwrap();
            prop_assert!(d.certificate.verify(&form));
            prop_assert!(!(seen_false && d.holds));
            seen_false |= !d.holds;
        }
    }

    #[test]
    fn classification_is_conjugation_invariant(idx in 0usize..4, seed: u64) {
        let f = gf(7);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (class, form) = canonical_representatives(&f, 7).unwrap()[idx].clone();
        let g = random_invertible(&f, 7, &mut rng);
        prop_assert_eq!(classify_low_rank(&form.gl_act(&g).unwrap()).unwrap(), class);
    }

    #[test]
    fn wedge_span_dimension_is_independent_of_v(n in 3usize..7, s in 1usize..4, k in 1usize..4, r in 1usize..7, seed: u64) {
        prop_assume!(k <= s && s <= n && k <= r && r <= n);
        let f = gf(5);
        let v = random_subspace(&f, n, r, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let span = iota_span(&v, k, s).unwrap();
        prop_assert_eq!(span.span.dim() as u128, iota_dim(n, s, k, r).unwrap());
    }

    #[test]
    fn plucker_is_canonical(p in small_prime(), n in 2usize..6, d in 1usize..4, seed: u64) {
        prop_assume!(d <= n);
        let f = gf(p);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = random_subspace(&f, n, d, &mut rng).unwrap();
        let g = random_invertible(&f, d, &mut rng);
        let rows = w.vectors();
        let mixed: Vec<Vec<u32>> = (0..d)
            .map(|i| (0..n).map(|c| (0..d).fold(0, |acc, j| f.mul_add(&acc, g.get(i, j), &rows[j][c]))).collect())
            .collect();
        let again = Subspace::from_vectors(&f, n, mixed).unwrap();
        let pw = plucker(&w).unwrap();
        prop_assert_eq!(plucker(&again).unwrap(), pw.clone());
        prop_assert!(pw.satisfies_three_term_relations());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn kernel_criterion_matches_search(n in 3usize..6, r in 2usize..4, seed: u64) {
        let f = gf(3);
        let form: AltForm<PrimeField> = random_form_with(&f, 3, n, 1, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        prop_assume!(r <= n);
        prop_assert_eq!(
            check_iff(&form, 2, r, DEFAULT_GRASS_CAP).unwrap(),
            decide_nullity_geq(&form, 2, r, DEFAULT_BUDGET).unwrap().holds
        );
    }
}
