use std::fmt;

use crate::error::{Error, Result};
use crate::exactlin::field::Field;
use crate::exactlin::matrix::Matrix;

/// A subspace of `K^n`, stored as its reduced row-echelon basis.
///
/// The RREF basis is unique, so two subspaces are equal exactly when their
/// representations are equal.
#[derive(Clone, PartialEq)]
pub struct Subspace<F: Field> {
    basis: Matrix<F>,
    pivots: Vec<usize>,
}

impl<F: Field> Subspace<F> {
    /// Span of the given vectors (which may be dependent).
    pub fn from_vectors(field: &F, n: usize, vectors: Vec<Vec<F::Elem>>) -> Result<Self> {
        let m = Matrix::from_rows(field, n, vectors)?;
        Ok(Self::row_space(&m))
    }

    /// Row space of a matrix.
    pub fn row_space(m: &Matrix<F>) -> Self {
        let r = m.rref();
        let rows = (0..r.rank).map(|i| r.matrix.row(i).to_vec()).collect();
        let basis = Matrix::from_rows(m.field(), m.cols(), rows).expect("rows from rref");
        Subspace {
            basis,
            pivots: r.pivots,
        }
    }

    pub fn zero(field: &F, n: usize) -> Self {
        Subspace {
            basis: Matrix::zeros(field, 0, n),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: &F, n: usize) -> Self {
        Subspace {
            basis: Matrix::identity(field, n),
            pivots: (0..n).collect(),
        }
    }

    /// Span of the standard basis vectors with the given 1-based indices.
    pub fn coordinate(field: &F, n: usize, indices: &[usize]) -> Result<Self> {
        let mut vecs = Vec::new();
        for &i in indices {
            if i == 0 || i > n {
                return Err(Error::InvalidArgument(format!("coordinate {i} outside 1..={n}")));
            }
            let mut v = vec![field.zero(); n];
            v[i - 1] = field.one();
            vecs.push(v);
        }
        Self::from_vectors(field, n, vecs)
    }

    pub fn field(&self) -> &F {
        self.basis.field()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &Matrix<F> {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn vectors(&self) -> Vec<Vec<F::Elem>> {
        self.basis.row_vecs()
    }

    pub fn contains(&self, v: &[F::Elem]) -> bool {
        if v.len() != self.ambient_dim() {
            return false;
        }
        // reduce against the RREF rows using pivot positions
        let f = self.field();
        let mut w = v.to_vec();
        for (i, &p) in self.pivots.iter().enumerate() {
            if f.is_zero(&w[p]) {
                continue;
            }
            let c = f.neg(&w[p]);
            for (j, b) in self.basis.row(i).iter().enumerate() {
                w[j] = f.mul_add(&w[j], &c, b);
            }
        }
        w.iter().all(|x| f.is_zero(x))
    }

    pub fn contains_subspace(&self, other: &Self) -> bool {
        other.ambient_dim() == self.ambient_dim()
            && other.vectors().iter().all(|v| self.contains(v))
    }

    /// `(self ∩ other, self + other)`.
    pub fn intersect_and_sum(&self, other: &Self) -> Result<(Self, Self)> {
        span_intersect_and_sum(self, other)
    }

    /// Image under `x ↦ g x`.
    pub fn map(&self, g: &Matrix<F>) -> Result<Self> {
        let images = self
            .vectors()
            .iter()
            .map(|v| g.mul_vec(v))
            .collect::<Result<Vec<_>>>()?;
        Self::from_vectors(self.field(), g.rows(), images)
    }
}

/// Intersection and sum of two subspaces of the same ambient space.
///
/// The intersection comes from the left kernel of the stacked bases: a
/// relation `a·A = b·B` yields the common vector `a·A`.
pub fn span_intersect_and_sum<F: Field>(
    a: &Subspace<F>,
    b: &Subspace<F>,
) -> Result<(Subspace<F>, Subspace<F>)> {
    let n = a.ambient_dim();
    if b.ambient_dim() != n {
        return Err(Error::DimensionMismatch(format!(
            "ambient dimensions {} and {}",
            n,
            b.ambient_dim()
        )));
    }
    let f = a.field();
    let mut rows = a.vectors();
    rows.extend(b.vectors());
    let stacked = Matrix::from_rows(f, n, rows)?;
    let sum = Subspace::row_space(&stacked);

    let relations = stacked.transpose().kernel_basis();
    let da = a.dim();
    let common: Vec<Vec<F::Elem>> = relations
        .vectors()
        .iter()
        .map(|coef| {
            let mut v = vec![f.zero(); n];
            for (i, c) in coef[..da].iter().enumerate() {
                if f.is_zero(c) {
                    continue;
                }
                for (j, x) in a.basis.row(i).iter().enumerate() {
                    v[j] = f.mul_add(&v[j], c, x);
                }
            }
            v
        })
        .collect();
    let inter = Subspace::from_vectors(f, n, common)?;
    Ok((inter, sum))
}

impl<F: Field> fmt::Debug for Subspace<F> {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let f = self.field();
        let rows: Vec<String> = self
            .vectors()
            .iter()
            .map(|r| {
                let cells: Vec<String> = r.iter().map(|x| f.format_elem(x)).collect();
                format!("[{}]", cells.join(" "))
            })
            .collect();
        write!(
            out,
            "Subspace(dim {} in {}^{}: {})",
            self.dim(),
            f.ctx(),
            self.ambient_dim(),
            rows.join(", ")
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::field::{PrimeField, Rationals};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_subspace(f: &PrimeField, n: usize, r: usize, rng: &mut ChaCha8Rng) -> Subspace<PrimeField> {
        loop {
            let vecs: Vec<Vec<u32>> = (0..r)
                .map(|_| (0..n).map(|_| rng.gen_range(0..f.p())).collect())
                .collect();
            let s = Subspace::from_vectors(f, n, vecs).unwrap();
            if s.dim() == r {
                return s;
            }
        }
    }

    #[test]
    fn coordinate_lines_meet_in_zero() {
        let q = Rationals;
        let a = Subspace::coordinate(&q, 3, &[1]).unwrap();
        let b = Subspace::coordinate(&q, 3, &[2]).unwrap();
        let (i, s) = span_intersect_and_sum(&a, &b).unwrap();
        assert_eq!(i, Subspace::zero(&q, 3));
        assert_eq!(s, Subspace::coordinate(&q, 3, &[1, 2]).unwrap());
    }

    #[test]
    fn intersect_and_sum_is_idempotent() {
        let f = PrimeField::new(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let v = random_subspace(&f, 5, 3, &mut rng);
        let (i, s) = v.intersect_and_sum(&v).unwrap();
        assert_eq!(i, v);
        assert_eq!(s, v);
    }

    #[test]
    fn modular_law_on_random_pairs() {
        let f = PrimeField::new(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for _ in 0..100 {
            let a = random_subspace(&f, 5, 2, &mut rng);
            let b = random_subspace(&f, 5, 3, &mut rng);
            let (i, s) = span_intersect_and_sum(&a, &b).unwrap();
            assert_eq!(i.dim() + s.dim(), a.dim() + b.dim());
            assert!(a.contains_subspace(&i) && b.contains_subspace(&i));
            assert!(s.contains_subspace(&a) && s.contains_subspace(&b));
        }
    }

    #[test]
    fn ambient_mismatch_is_an_error() {
        let q = Rationals;
        let a = Subspace::full(&q, 2);
        let b = Subspace::full(&q, 3);
        assert!(matches!(span_intersect_and_sum(&a, &b), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn shuffled_bases_give_identical_representations() {
        let f = PrimeField::new(7).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let s = random_subspace(&f, 6, 3, &mut rng);
            let mut vecs = s.vectors();
            // random invertible recombination: add multiples and reverse
            let c = rng.gen_range(1..7u32);
            for j in 0..6 {
                vecs[0][j] = f.mul_add(&vecs[0][j], &c, &vecs[2][j]);
            }
            vecs.reverse();
            assert_eq!(Subspace::from_vectors(&f, 6, vecs).unwrap(), s);
        }
    }
}
