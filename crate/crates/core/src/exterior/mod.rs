//! Alternating multilinear forms `⋀^s K^n → K^m` with sparse coefficients.

mod random;
mod text;

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::exactlin::enumerate::combinations;
use crate::exactlin::matrix::det_square;
use crate::exactlin::{Field, Matrix, PrimeField, Rationals};

pub use random::{random_form, random_form_with};
pub use text::AnyForm;

/// Strictly increasing tuple of 1-based coordinate indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(Vec<usize>);

impl MultiIndex {
    /// Validates a strictly increasing tuple with entries in `1..=n`.
    pub fn new(indices: Vec<usize>, n: usize) -> Result<Self> {
        if indices.iter().any(|&i| i == 0 || i > n) {
            return Err(Error::InvalidIndex {
                indices,
                reason: format!("entries must lie in 1..={n}"),
            });
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidIndex {
                indices,
                reason: "entries must be strictly increasing".into(),
            });
        }
        Ok(MultiIndex(indices))
    }

    /// Sorts an arbitrary tuple, returning the index and the permutation sign.
    pub fn sorted(mut indices: Vec<usize>, n: usize) -> Result<(Self, bool)> {
        let mut negative = false;
        for i in 1..indices.len() {
            let mut j = i;
            while j > 0 && indices[j - 1] > indices[j] {
                indices.swap(j - 1, j);
                negative = !negative;
                j -= 1;
            }
        }
        if indices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidIndex {
                indices,
                reason: "repeated index".into(),
            });
        }
        Ok((Self::new(indices, n)?, negative))
    }

    pub(crate) fn from_zero_based(c: &[usize]) -> Self {
        MultiIndex(c.iter().map(|i| i + 1).collect())
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// An alternating `s`-form on `K^n` with values in `K^m`.
#[derive(Clone, PartialEq)]
pub struct AltForm<F: Field> {
    s: usize,
    n: usize,
    m: usize,
    field: F,
    coeffs: BTreeMap<MultiIndex, Vec<F::Elem>>,
}

impl<F: Field> AltForm<F> {
    pub fn zero(field: &F, s: usize, n: usize, m: usize) -> Result<Self> {
        if s > n {
            return Err(Error::InvalidArgument(format!("arity {s} exceeds dimension {n}")));
        }
        if m == 0 {
            return Err(Error::InvalidArgument("codimension must be at least 1".into()));
        }
        Ok(AltForm {
            s,
            n,
            m,
            field: field.clone(),
            coeffs: BTreeMap::new(),
        })
    }

    /// Builds a form from arbitrary-order index tuples, applying permutation
    /// signs and accumulating repeated keys.
    pub fn from_terms(
        field: &F,
        s: usize,
        n: usize,
        m: usize,
        terms: impl IntoIterator<Item = (Vec<usize>, Vec<F::Elem>)>,
    ) -> Result<Self> {
        let mut form = Self::zero(field, s, n, m)?;
        for (idx, vals) in terms {
            form.add_term(idx, vals)?;
        }
        Ok(form)
    }

    /// Scalar-valued form from small integer coefficients.
    pub fn from_scalar_terms(field: &F, s: usize, n: usize, terms: &[(&[usize], i64)]) -> Result<Self> {
        Self::from_terms(
            field,
            s,
            n,
            1,
            terms.iter().map(|(idx, c)| (idx.to_vec(), vec![field.from_i64(*c)])),
        )
    }

    /// Adds `vals · e^{idx}` to the form.
    pub fn add_term(&mut self, idx: Vec<usize>, vals: Vec<F::Elem>) -> Result<()> {
        if idx.len() != self.s {
            return Err(Error::InvalidIndex {
                indices: idx,
                reason: format!("expected {} indices", self.s),
            });
        }
        if vals.len() != self.m {
            return Err(Error::DimensionMismatch(format!(
                "term has {} coefficients, expected {}",
                vals.len(),
                self.m
            )));
        }
        let (key, negative) = MultiIndex::sorted(idx, self.n)?;
        let f = &self.field;
        let vals: Vec<F::Elem> = if negative {
            vals.iter().map(|v| f.neg(v)).collect()
        } else {
            vals
        };
        self.accumulate(key, &vals);
        Ok(())
    }

    fn accumulate(&mut self, key: MultiIndex, vals: &[F::Elem]) {
        let f = &self.field;
        let entry = self
            .coeffs
            .entry(key.clone())
            .or_insert_with(|| vec![f.zero(); vals.len()]);
        for (e, v) in entry.iter_mut().zip(vals) {
            *e = f.add(e, v);
        }
        if entry.iter().all(|x| f.is_zero(x)) {
            self.coeffs.remove(&key);
        }
    }

    fn accumulate_scaled(&mut self, key: MultiIndex, scale: &F::Elem, vals: &[F::Elem]) {
        let f = self.field.clone();
        let scaled: Vec<F::Elem> = vals.iter().map(|v| f.mul(scale, v)).collect();
        self.accumulate(key, &scaled);
    }

    pub fn arity(&self) -> usize {
        self.s
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn codim(&self) -> usize {
        self.m
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    /// Nonzero terms in lexicographic multi-index order.
    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Vec<F::Elem>)> {
        self.coeffs.iter()
    }

    pub fn coeff(&self, idx: &MultiIndex) -> Option<&Vec<F::Elem>> {
        self.coeffs.get(idx)
    }

    fn check_vector(&self, v: &[F::Elem]) -> Result<()> {
        if v.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} for a form on K^{}",
                v.len(),
                self.n
            )));
        }
        Ok(())
    }

    /// Evaluates the form on `s` vectors.
    pub fn eval(&self, vs: &[Vec<F::Elem>]) -> Result<Vec<F::Elem>> {
        if vs.len() != self.s {
            return Err(Error::DimensionMismatch(format!(
                "{} arguments for an {}-form",
                vs.len(),
                self.s
            )));
        }
        for v in vs {
            self.check_vector(v)?;
        }
        let f = &self.field;
        let s = self.s;
        let mut out = vec![f.zero(); self.m];
        for (idx, vals) in &self.coeffs {
            let mut minor = Vec::with_capacity(s * s);
            for v in vs {
                for &i in idx.indices() {
                    minor.push(v[i - 1].clone());
                }
            }
            let d = det_square(f, s, minor);
            if f.is_zero(&d) {
                continue;
            }
            for (o, c) in out.iter_mut().zip(vals) {
                *o = f.mul_add(o, &d, c);
            }
        }
        Ok(out)
    }

    /// Interior product `ι_v f`, of arity `s − 1`.
    pub fn contract(&self, v: &[F::Elem]) -> Result<Self> {
        if self.s == 0 {
            return Err(Error::InvalidArgument("cannot contract a 0-form".into()));
        }
        self.check_vector(v)?;
        let f = self.field.clone();
        let mut out = AltForm {
            s: self.s - 1,
            n: self.n,
            m: self.m,
            field: f.clone(),
            coeffs: BTreeMap::new(),
        };
        for (idx, vals) in &self.coeffs {
            for (pos, &i) in idx.indices().iter().enumerate() {
                let x = &v[i - 1];
                if f.is_zero(x) {
                    continue;
                }
                let scale = if pos % 2 == 1 { f.neg(x) } else { x.clone() };
                let mut rest = idx.0.clone();
                rest.remove(pos);
                out.accumulate_scaled(MultiIndex(rest), &scale, vals);
            }
        }
        Ok(out)
    }

    /// Contraction by the `i`-th standard basis vector (1-based).
    pub fn contract_basis(&self, i: usize) -> Result<Self> {
        let f = &self.field;
        let mut v = vec![f.zero(); self.n];
        if i == 0 || i > self.n {
            return Err(Error::InvalidArgument(format!("basis index {i} outside 1..={}", self.n)));
        }
        v[i - 1] = f.one();
        self.contract(&v)
    }

    /// For a scalar 3-form and a vector `v`, the skew matrix with
    /// `A[i][j] = f(v, e_i, e_j)`.
    pub fn a_matrix(&self, v: &[F::Elem]) -> Result<Matrix<F>> {
        if self.s != 3 || self.m != 1 {
            return Err(Error::InvalidArgument(format!(
                "a_matrix needs a scalar 3-form, got arity {} codim {}",
                self.s, self.m
            )));
        }
        let two = self.contract(v)?;
        let f = &self.field;
        let mut a = Matrix::zeros(f, self.n, self.n);
        for (idx, vals) in &two.coeffs {
            let (i, j) = (idx.0[0] - 1, idx.0[1] - 1);
            a.set(i, j, vals[0].clone());
            a.set(j, i, f.neg(&vals[0]));
        }
        Ok(a)
    }

    /// The action `(g·f)(x_1..x_s) = f(g⁻¹x_1, .., g⁻¹x_s)`.
    pub fn gl_act(&self, g: &Matrix<F>) -> Result<Self> {
        if g.rows() != self.n || g.cols() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix acting on K^{}",
                g.rows(),
                g.cols(),
                self.n
            )));
        }
        let h = g.inverse()?;
        let f = &self.field;
        let s = self.s;
        let mut out = Self::zero(f, s, self.n, self.m)?;
        for c in combinations(self.n, s) {
            let target = MultiIndex::from_zero_based(&c);
            for (src, vals) in &self.coeffs {
                let mut minor = Vec::with_capacity(s * s);
                for &j in src.indices() {
                    for &i in &c {
                        minor.push(h.get(j - 1, i).clone());
                    }
                }
                let d = det_square(f, s, minor);
                if !f.is_zero(&d) {
                    out.accumulate_scaled(target.clone(), &d, vals);
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let f = &self.field;
        let mut out = self.clone();
        if f.is_zero(c) {
            out.coeffs.clear();
            return out;
        }
        for vals in out.coeffs.values_mut() {
            for v in vals.iter_mut() {
                *v = f.mul(c, v);
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if (self.s, self.n, self.m) != (other.s, other.n, other.m) {
            return Err(Error::DimensionMismatch("adding forms of different shapes".into()));
        }
        let mut out = self.clone();
        for (k, v) in &other.coeffs {
            out.accumulate(k.clone(), v);
        }
        Ok(out)
    }

    /// Wedge product of two scalar-valued forms.
    pub fn wedge_scalar(&self, other: &Self) -> Result<Self> {
        if self.m != 1 || other.m != 1 || self.n != other.n {
            return Err(Error::InvalidArgument("wedge needs scalar forms on one space".into()));
        }
        let f = &self.field;
        let mut out = Self::zero(f, self.s + other.s, self.n, 1)?;
        for (a, x) in &self.coeffs {
            for (b, y) in &other.coeffs {
                if a.0.iter().any(|i| b.0.contains(i)) {
                    continue;
                }
                let mut idx = a.0.clone();
                idx.extend_from_slice(&b.0);
                out.add_term(idx, vec![f.mul(&x[0], &y[0])])?;
            }
        }
        Ok(out)
    }

    /// Restriction to the coordinate subspace spanned by `keep` (1-based,
    /// increasing), renumbered as `1..=keep.len()`.
    pub fn restrict_coordinates(&self, keep: &[usize]) -> Result<Self> {
        let mut out = Self::zero(&self.field, self.s, keep.len(), self.m)?;
        for (idx, vals) in &self.coeffs {
            let mapped: Option<Vec<usize>> = idx
                .indices()
                .iter()
                .map(|i| keep.iter().position(|k| k == i).map(|p| p + 1))
                .collect();
            if let Some(mapped) = mapped {
                out.add_term(mapped, vals.clone())?;
            }
        }
        Ok(out)
    }

    /// Restriction along a linear map: `x ↦ f(B x_1, .., B x_s)` where the
    /// columns of `B` are the given vectors in `K^n`.
    pub fn pull_back(&self, columns: &[Vec<F::Elem>]) -> Result<Self> {
        for c in columns {
            self.check_vector(c)?;
        }
        let d = columns.len();
        let mut out = Self::zero(&self.field, self.s, d, self.m)?;
        for c in combinations(d, self.s) {
            let args: Vec<Vec<F::Elem>> = c.iter().map(|&i| columns[i].clone()).collect();
            let vals = self.eval(&args)?;
            out.accumulate(MultiIndex::from_zero_based(&c), &vals);
        }
        Ok(out)
    }

    /// Dense `m × C(n, s)` coefficient matrix, columns in lex multi-index order.
    pub fn coefficient_matrix(&self) -> Matrix<F> {
        let cols = combinations(self.n, self.s);
        let mut mat = Matrix::zeros(&self.field, self.m, cols.len());
        for (j, c) in cols.iter().enumerate() {
            if let Some(vals) = self.coeffs.get(&MultiIndex::from_zero_based(c)) {
                for (i, v) in vals.iter().enumerate() {
                    mat.set(i, j, v.clone());
                }
            }
        }
        mat
    }
}

impl AltForm<Rationals> {
    pub fn is_integral(&self) -> bool {
        self.coeffs.values().flatten().all(|q| q.is_integer())
    }

    /// Reduction modulo `p`; fails when a denominator is divisible by `p`.
    pub fn reduce_mod(&self, field: &PrimeField) -> Result<AltForm<PrimeField>> {
        let mut out = AltForm::zero(field, self.s, self.n, self.m)?;
        for (idx, vals) in &self.coeffs {
            let red = vals
                .iter()
                .map(|q: &BigRational| {
                    field.from_rational(q).ok_or_else(|| {
                        Error::InvalidArgument(format!(
                            "coefficient {q} has a denominator divisible by {}",
                            field.p()
                        ))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            out.accumulate(idx.clone(), &red);
        }
        Ok(out)
    }
}

impl AltForm<PrimeField> {
    /// Lifts residues to their representatives in `[0, p)` over `Q`.
    pub fn lift(&self) -> AltForm<Rationals> {
        let q = Rationals;
        AltForm {
            s: self.s,
            n: self.n,
            m: self.m,
            field: q,
            coeffs: self
                .coeffs
                .iter()
                .map(|(k, v)| (k.clone(), v.iter().map(|&x| q.from_i64(x as i64)).collect()))
                .collect(),
        }
    }
}

impl<F: Field> fmt::Debug for AltForm<F> {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "{}", self.render())
    }
}
