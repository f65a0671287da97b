//! Rank, k-nullity, certificates, and low-rank classification of forms.

mod certificate;
mod classify;
mod oracle;
mod rational;
mod search;

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exactlin::enumerate::combinations;
use crate::exactlin::{Field, Matrix, Subspace};
use crate::exterior::{AltForm, MultiIndex};

pub use certificate::{elem_json, subspace_json, CertificateKind, NullityCertificate, SearchStats, CERTIFICATE_SCHEMA};
pub use classify::{canonical_representatives, classify_low_rank, rank_six_invariant, RankSixClass};
pub use oracle::{oracle_nullity, oracle_nullity_with_cap, DEFAULT_ORACLE_CAP};
pub use rational::{certify_rational, RationalBoundCertificate, SkippedPrime, Specialization};
pub use search::{decide_nullity_geq, nullity_exact, Decision, NullityResult, DEFAULT_BUDGET};

/// The radical `{v : ι_v f = 0}`.
pub fn radical<F: Field>(f: &AltForm<F>) -> Subspace<F> {
    let field = f.field();
    let n = f.dim();
    if f.arity() == 0 {
        return Subspace::full(field, n);
    }
    // one row per (multi-index of arity s-1, component), one column per basis vector
    let mut rows: BTreeMap<(MultiIndex, usize), Vec<F::Elem>> = BTreeMap::new();
    for i in 1..=n {
        let c = f.contract_basis(i).expect("index in range");
        for (idx, vals) in c.terms() {
            for (comp, v) in vals.iter().enumerate() {
                if field.is_zero(v) {
                    continue;
                }
                rows.entry((idx.clone(), comp))
                    .or_insert_with(|| vec![field.zero(); n])[i - 1] = v.clone();
            }
        }
    }
    if rows.is_empty() {
        return Subspace::full(field, n);
    }
    let m = Matrix::from_rows(field, n, rows.into_values().collect()).expect("rows of length n");
    m.kernel_basis()
}

/// `n − dim radical(f)`.
pub fn rank<F: Field>(f: &AltForm<F>) -> usize {
    f.dim() - radical(f).dim()
}

/// Checks that `f` vanishes whenever `k` of its arguments come from `w`.
pub fn verify_witness<F: Field>(f: &AltForm<F>, k: usize, w: &Subspace<F>) -> Result<bool> {
    if k > f.arity() {
        return Err(Error::InvalidArgument(format!(
            "depth {k} exceeds arity {}",
            f.arity()
        )));
    }
    if w.ambient_dim() != f.dim() {
        return Err(Error::DimensionMismatch(format!(
            "witness in K^{} for a form on K^{}",
            w.ambient_dim(),
            f.dim()
        )));
    }
    let basis = w.vectors();
    for subset in combinations(basis.len(), k) {
        let mut g = f.clone();
        for &i in &subset {
            g = g.contract(&basis[i])?;
            if g.is_zero() {
                break;
            }
        }
        if !g.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::{PrimeField, Rationals};

    fn split6<F: Field>(f: &F) -> AltForm<F> {
        AltForm::from_scalar_terms(f, 3, 6, &[(&[1, 2, 3], 1), (&[4, 5, 6], 1)]).unwrap()
    }

    #[test]
    fn radical_examples() {
        let q = Rationals;
        let e123 = AltForm::from_scalar_terms(&q, 3, 4, &[(&[1, 2, 3], 1)]).unwrap();
        assert_eq!(radical(&e123), Subspace::coordinate(&q, 4, &[4]).unwrap());
        let zero = AltForm::<Rationals>::zero(&q, 3, 5, 1).unwrap();
        assert_eq!(radical(&zero), Subspace::full(&q, 5));
        assert_eq!(radical(&split6(&q)).dim(), 0);
    }

    #[test]
    fn ranks_of_canonical_forms() {
        let q = Rationals;
        let e123 = AltForm::from_scalar_terms(&q, 3, 3, &[(&[1, 2, 3], 1)]).unwrap();
        assert_eq!(rank(&e123), 3);
        assert_eq!(rank(&split6(&q)), 6);
        let five = AltForm::from_scalar_terms(&q, 3, 5, &[(&[1, 2, 3], 1), (&[1, 4, 5], 1)]).unwrap();
        assert_eq!(rank(&five), 5);
        let factored = AltForm::from_scalar_terms(&q, 3, 4, &[(&[1, 2, 3], 1), (&[1, 2, 4], 1)]).unwrap();
        assert_eq!(rank(&factored), 3);
    }

    #[test]
    fn witness_examples() {
        let f = PrimeField::new(3).unwrap();
        let form = split6(&f);
        let w14 = Subspace::coordinate(&f, 6, &[1, 4]).unwrap();
        let w12 = Subspace::coordinate(&f, 6, &[1, 2]).unwrap();
        assert!(verify_witness(&form, 2, &w14).unwrap());
        assert!(!verify_witness(&form, 2, &w12).unwrap());
        assert!(verify_witness(&form, 1, &radical(&form)).unwrap());
        assert!(verify_witness(&form, 4, &w14).is_err());
    }

    #[test]
    fn vector_valued_radical() {
        let f = PrimeField::new(5).unwrap();
        let form = AltForm::from_terms(
            &f,
            2,
            4,
            2,
            vec![(vec![1, 2], vec![1, 0]), (vec![2, 3], vec![0, 1])],
        )
        .unwrap();
        assert_eq!(radical(&form), Subspace::coordinate(&f, 4, &[4]).unwrap());
    }
}
