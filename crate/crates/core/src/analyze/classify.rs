use super::{radical, rank};
use crate::error::{Error, Result};
use crate::exactlin::{Field, Matrix};
use crate::exterior::{AltForm, MultiIndex};

/// Orbit label of a scalar 3-form of rank at most 6.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RankSixClass {
    Rank0,
    Rank3,
    Rank5,
    /// The class of `e123 + e456`.
    Rank6Split,
    /// The class of `e123 + e345 + e256`.
    Rank6Degenerate,
    RankOther,
}

impl RankSixClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            RankSixClass::Rank0 => "rank0",
            RankSixClass::Rank3 => "rank3",
            RankSixClass::Rank5 => "rank5",
            RankSixClass::Rank6Split => "rank6-split",
            RankSixClass::Rank6Degenerate => "rank6-degenerate",
            RankSixClass::RankOther => "rank-other",
        }
    }
}

/// Orbit representatives of scalar 3-forms of rank at most 6 that fit in
/// `K^n`, paired with their expected class.
///
/// The rank-5 class uses `e123 + e145`; the variant `e123 + e124` factors
/// as `e12 ∧ (e3 + e4)` and has rank 3.
pub fn canonical_representatives<F: Field>(field: &F, n: usize) -> Result<Vec<(RankSixClass, AltForm<F>)>> {
    type Terms = &'static [(&'static [usize], i64)];
    let table: [(RankSixClass, usize, Terms); 4] = [
        (RankSixClass::Rank3, 3, &[(&[1, 2, 3], 1)]),
        (RankSixClass::Rank5, 5, &[(&[1, 2, 3], 1), (&[1, 4, 5], 1)]),
        (RankSixClass::Rank6Split, 6, &[(&[1, 2, 3], 1), (&[4, 5, 6], 1)]),
        (RankSixClass::Rank6Degenerate, 6, &[(&[1, 2, 3], 1), (&[3, 4, 5], 1), (&[2, 5, 6], 1)]),
    ];
    table
        .iter()
        .filter(|(_, need, _)| *need <= n)
        .map(|(class, _, terms)| Ok((*class, AltForm::from_scalar_terms(field, 3, n, terms)?)))
        .collect()
}

pub fn classify_low_rank<F: Field>(f: &AltForm<F>) -> Result<RankSixClass> {
    if f.arity() != 3 || f.codim() != 1 {
        return Err(Error::InvalidArgument(format!(
            "classification needs a scalar 3-form, got arity {} codim {}",
            f.arity(),
            f.codim()
        )));
    }
    match rank(f) {
        0 => Ok(RankSixClass::Rank0),
        3 => Ok(RankSixClass::Rank3),
        5 => Ok(RankSixClass::Rank5),
        6 => {
            let lambda = rank_six_invariant(f)?;
            if f.field().is_zero(&lambda) {
                Ok(RankSixClass::Rank6Degenerate)
            } else {
                Ok(RankSixClass::Rank6Split)
            }
        }
        r @ (1 | 2 | 4) => Err(Error::Internal(format!("a 3-form cannot have rank {r}"))),
        _ => Ok(RankSixClass::RankOther),
    }
}

/// The quartic invariant of a rank-6 scalar 3-form.
///
/// The form is first moved to a 6-dimensional complement of its radical.
/// There, `v ↦ (ι_v f) ∧ f` lands in 5-forms, identified with vectors, and
/// the resulting endomorphism squares to `λ·I`. Normalized so that
/// `λ(e123 + e456) = 1`.
pub fn rank_six_invariant<F: Field>(f: &AltForm<F>) -> Result<F::Elem> {
    if f.arity() != 3 || f.codim() != 1 || rank(f) != 6 {
        return Err(Error::Precondition("invariant needs a scalar 3-form of rank 6".into()));
    }
    let rad = radical(f);
    let keep: Vec<usize> = (1..=f.dim()).filter(|i| !rad.pivots().contains(&(i - 1))).collect();
    let g = f.restrict_coordinates(&keep)?;
    let field = g.field();
    let mut k = Matrix::zeros(field, 6, 6);
    for j in 1..=6 {
        let omega = g.contract_basis(j)?.wedge_scalar(&g)?;
        for i in 1..=6 {
            let rest: Vec<usize> = (1..=6).filter(|&x| x != i).collect();
            let idx = MultiIndex::new(rest, 6)?;
            if let Some(v) = omega.coeff(&idx) {
                let v = if i % 2 == 0 { field.neg(&v[0]) } else { v[0].clone() };
                k.set(i - 1, j - 1, v);
            }
        }
    }
    let sq = k.mul(&k)?;
    let lambda = sq.get(0, 0).clone();
    for a in 0..6 {
        for b in 0..6 {
            let want = if a == b { lambda.clone() } else { field.zero() };
            if *sq.get(a, b) != want {
                return Err(Error::Internal("K^2 is not scalar".into()));
            }
        }
    }
    Ok(lambda)
}
