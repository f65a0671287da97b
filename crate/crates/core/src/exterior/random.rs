use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{AltForm, MultiIndex};
use crate::error::{Error, Result};
use crate::exactlin::enumerate::combinations;
use crate::exactlin::{FieldCtx, PrimeField};

/// Uniformly random form over a prime field, deterministic in `seed`.
pub fn random_form(s: usize, n: usize, m: usize, field: FieldCtx, seed: u64) -> Result<AltForm<PrimeField>> {
    let FieldCtx::PrimeField(p) = field else {
        return Err(Error::InfiniteField);
    };
    let f = PrimeField::new(p as u64)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_form_with(&f, s, n, m, &mut rng)
}

/// Draws one residue per (multi-index, component) in lex order from `rng`.
pub fn random_form_with<R: Rng + ?Sized>(
    field: &PrimeField,
    s: usize,
    n: usize,
    m: usize,
    rng: &mut R,
) -> Result<AltForm<PrimeField>> {
    let mut form = AltForm::zero(field, s, n, m)?;
    let mut coeffs = BTreeMap::new();
    for c in combinations(n, s) {
        let vals: Vec<u32> = (0..m).map(|_| rng.gen_range(0..field.p())).collect();
        if vals.iter().any(|&v| v != 0) {
            coeffs.insert(MultiIndex::from_zero_based(&c), vals);
        }
    }
    form.coeffs = coeffs;
    Ok(form)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_form() {
        let ctx = FieldCtx::PrimeField(5);
        assert_eq!(random_form(3, 6, 2, ctx, 11).unwrap(), random_form(3, 6, 2, ctx, 11).unwrap());
        assert_ne!(random_form(3, 6, 2, ctx, 11).unwrap(), random_form(3, 6, 2, ctx, 12).unwrap());
    }

    #[test]
    fn rationals_are_rejected() {
        assert_eq!(random_form(3, 4, 1, FieldCtx::Rationals, 0), Err(Error::InfiniteField));
    }

    #[test]
    fn full_arity_gives_single_coefficient() {
        for seed in 0..20 {
            let f = random_form(4, 4, 1, FieldCtx::PrimeField(7), seed).unwrap();
            assert!(f.num_terms() <= 1);
        }
    }

    #[test]
    fn coefficients_are_uniform() {
        // 10000 draws of a 20-coefficient form over GF(3)
        let f = PrimeField::new(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let mut hist = [0u64; 3];
        let draws = 10_000 / 20;
        for _ in 0..draws {
            let form = random_form_with(&f, 3, 6, 1, &mut rng).unwrap();
            let nonzero: u64 = form.terms().map(|_| 1).sum();
            hist[0] += 20 - nonzero;
            for (_, v) in form.terms() {
                hist[v[0] as usize] += 1;
            }
        }
        let total: u64 = hist.iter().sum();
        let expected = total as f64 / 3.0;
        let sigma = (total as f64 * (1.0 / 3.0) * (2.0 / 3.0)).sqrt();
        for &h in &hist {
            assert!((h as f64 - expected).abs() < 5.0 * sigma, "{hist:?}");
        }
    }
}
