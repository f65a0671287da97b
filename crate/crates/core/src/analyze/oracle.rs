use super::verify_witness;
use crate::error::{Error, Result};
use crate::exactlin::enumerate::{total_subspace_count, SubspaceIter};
use crate::exactlin::{Field, FieldCtx, PrimeField, Subspace};
use crate::exterior::AltForm;

/// Largest number of subspaces the reference oracle will enumerate.
pub const DEFAULT_ORACLE_CAP: u128 = 200_000;

/// Reference `null_k` by checking every subspace of every dimension.
pub fn oracle_nullity<F: Field>(f: &AltForm<F>, k: usize) -> Result<usize> {
    oracle_nullity_with_cap(f, k, DEFAULT_ORACLE_CAP)
}

pub fn oracle_nullity_with_cap<F: Field>(f: &AltForm<F>, k: usize, cap: u128) -> Result<usize> {
    let FieldCtx::PrimeField(p) = f.field().ctx() else {
        return Err(Error::InfiniteField);
    };
    let n = f.dim();
    let needed = total_subspace_count(n, p as u64);
    if needed > cap {
        return Err(Error::CapExceeded { needed, cap });
    }
    let gf = PrimeField::new(p as u64)?;
    let field = f.field();
    let mut best = 0;
    for r in 1..=n {
        let mut any = false;
        for w in SubspaceIter::new(gf, n, r) {
            let rows = w
                .vectors()
                .into_iter()
                .map(|v| v.into_iter().map(|x| field.from_i64(x as i64)).collect())
                .collect();
            let w = Subspace::from_vectors(field, n, rows)?;
            if verify_witness(f, k, &w)? {
                any = true;
                break;
            }
        }
        if any {
            best = r;
        }
    }
    Ok(best)
}
