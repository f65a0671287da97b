//! Wedge spans `ι(V) = ⋀^k V ∧ ⋀^{s−k} K^n`, Plücker coordinates, and a
//! direct enumeration test of `k`-vanishing through the kernel of a form.

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exactlin::enumerate::{binomial, combinations, gaussian_binomial, subset_rank, SubspaceIter};
use crate::exactlin::matrix::det_square;
use crate::exactlin::{Field, FieldCtx, PrimeField, Subspace};
use crate::exterior::{AltForm, MultiIndex};

/// Default cap on the number of subspaces [`check_iff`] will enumerate.
pub const DEFAULT_GRASS_CAP: u128 = 2_000_000;

/// `Σ_{i=k}^{r} C(i−1, k−1) · C(n−i, s−k)`, the dimension of `ι(V)` for any
/// `r`-dimensional `V ⊆ K^n`.
pub fn iota_dim(n: usize, s: usize, k: usize, r: usize) -> Result<u128> {
    if !(1 <= k && k <= s && s <= n && k <= r && r <= n) {
        return Err(Error::InvalidArgument(format!(
            "need 1 ≤ k ≤ s ≤ n and k ≤ r ≤ n, got n={n} s={s} k={k} r={r}"
        )));
    }
    Ok((k..=r).map(|i| binomial(i - 1, k - 1) * binomial(n - i, s - k)).sum())
}

/// Coordinates of `v_1 ∧ .. ∧ v_s` in the lex basis of `⋀^s K^n`.
pub fn wedge_coordinates<F: Field>(field: &F, n: usize, vectors: &[&[F::Elem]]) -> Vec<F::Elem> {
    let s = vectors.len();
    combinations(n, s)
        .iter()
        .map(|cols| {
            let mut minor = Vec::with_capacity(s * s);
            for v in vectors {
                minor.extend(cols.iter().map(|&c| v[c].clone()));
            }
            det_square(field, s, minor)
        })
        .collect()
}

/// The subspace `ι(V)` of `⋀^s K^n` together with the data that defines it.
#[derive(Debug, Clone, PartialEq)]
pub struct IotaSpan<F: Field> {
    pub v: Subspace<F>,
    pub k: usize,
    pub s: usize,
    pub span: Subspace<F>,
}

/// Spans all `v_{a_1} ∧ .. ∧ v_{a_k} ∧ e_{b_1} ∧ .. ∧ e_{b_{s−k}}` over basis
/// vectors of `V` and standard basis vectors, then checks the dimension
/// against [`iota_dim`].
pub fn iota_span<F: Field>(v: &Subspace<F>, k: usize, s: usize) -> Result<IotaSpan<F>> {
    let expected = iota_dim(v.ambient_dim(), s, k, v.dim())?;
    let span = wedge_span(v, k, s)?;
    if span.dim() as u128 != expected {
        return Err(Error::Internal(format!(
            "ι(V) has dimension {} but the count formula gives {expected}",
            span.dim()
        )));
    }
    Ok(IotaSpan { v: v.clone(), k, s, span })
}

fn wedge_span<F: Field>(v: &Subspace<F>, k: usize, s: usize) -> Result<Subspace<F>> {
    let field = v.field();
    let n = v.ambient_dim();
    let basis = v.vectors();
    let units: Vec<Vec<F::Elem>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { field.one() } else { field.zero() }).collect())
        .collect();
    let mut gens = Vec::new();
    for a in combinations(v.dim(), k) {
        for b in combinations(n, s - k) {
            let mut args: Vec<&[F::Elem]> = a.iter().map(|&i| basis[i].as_slice()).collect();
            args.extend(b.iter().map(|&j| units[j].as_slice()));
            let w = wedge_coordinates(field, n, &args);
            if w.iter().any(|x| !field.is_zero(x)) {
                gens.push(w);
            }
        }
    }
    Subspace::from_vectors(field, binomial(n, s) as usize, gens)
}

/// Plücker coordinates of a `d`-dimensional subspace of `K^N`, scaled so the
/// first nonzero coordinate is one.
#[derive(Debug, Clone, PartialEq)]
pub struct PluckerVector<F: Field> {
    field: F,
    ambient: usize,
    d: usize,
    coords: Vec<F::Elem>,
}

impl<F: Field> PluckerVector<F> {
    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    /// Coordinates in lex order of `d`-subsets.
    pub fn coords(&self) -> &[F::Elem] {
        &self.coords
    }

    /// `P_{i_1 .. i_d}` for 1-based indices in any order; zero on repeats.
    pub fn get(&self, indices: &[usize]) -> Result<F::Elem> {
        if indices.len() != self.d {
            return Err(Error::DimensionMismatch(format!(
                "{} indices for a {}-plane",
                indices.len(),
                self.d
            )));
        }
        let mut seen = indices.to_vec();
        seen.sort_unstable();
        if seen.windows(2).any(|w| w[0] == w[1]) {
            return Ok(self.field.zero());
        }
        let (idx, negative) = MultiIndex::sorted(indices.to_vec(), self.ambient)?;
        let zero_based: Vec<usize> = idx.indices().iter().map(|i| i - 1).collect();
        let pos = subset_rank(&zero_based, self.ambient);
        let v = self.coords[pos].clone();
        Ok(if negative { self.field.neg(&v) } else { v })
    }

    /// Checks `P_{Sij} P_{Skl} − P_{Sik} P_{Sjl} + P_{Sil} P_{Sjk} = 0` for every
    /// `(d−2)`-subset `S` and every `i < j < k < l` outside it.
    pub fn satisfies_three_term_relations(&self) -> bool {
        if self.d < 2 || self.ambient < self.d + 2 {
            return true;
        }
        let f = &self.field;
        let n = self.ambient;
        for common in combinations(n, self.d - 2) {
            let rest: Vec<usize> = (0..n).filter(|x| !common.contains(x)).collect();
            for quad in combinations(rest.len(), 4) {
                let [i, j, k, l] = [rest[quad[0]], rest[quad[1]], rest[quad[2]], rest[quad[3]]];
                let p = |a: usize, b: usize| {
                    let mut idx: Vec<usize> = common.iter().map(|c| c + 1).collect();
                    idx.push(a + 1);
                    idx.push(b + 1);
                    self.get(&idx).expect("valid index")
                };
                let lhs = f.add(
                    &f.sub(&f.mul(&p(i, j), &p(k, l)), &f.mul(&p(i, k), &p(j, l))),
                    &f.mul(&p(i, l), &p(j, k)),
                );
                if !f.is_zero(&lhs) {
                    return false;
                }
            }
        }
        true
    }
}

/// All `d × d` minors of the canonical basis of `w`.
pub fn plucker<F: Field>(w: &Subspace<F>) -> Result<PluckerVector<F>> {
    let d = w.dim();
    if d == 0 {
        return Err(Error::InvalidArgument("Plücker coordinates of the zero subspace".into()));
    }
    let field = w.field().clone();
    let rows = w.vectors();
    let args: Vec<&[F::Elem]> = rows.iter().map(|r| r.as_slice()).collect();
    let mut coords = wedge_coordinates(&field, w.ambient_dim(), &args);
    let lead = coords
        .iter()
        .find(|x| !field.is_zero(x))
        .cloned()
        .ok_or_else(|| Error::Internal("all Plücker coordinates vanish".into()))?;
    let scale = field.inv(&lead).expect("nonzero lead");
    for c in coords.iter_mut() {
        *c = field.mul(c, &scale);
    }
    Ok(PluckerVector {
        field,
        ambient: w.ambient_dim(),
        d,
        coords,
    })
}

/// Uniformly random `r`-dimensional subspace of `GF(p)^n`, by rejection.
pub fn random_subspace<R: Rng + ?Sized>(field: &PrimeField, n: usize, r: usize, rng: &mut R) -> Result<Subspace<PrimeField>> {
    if r > n {
        return Err(Error::InvalidArgument(format!("dimension {r} exceeds ambient {n}")));
    }
    loop {
        let rows: Vec<Vec<u32>> = (0..r).map(|_| (0..n).map(|_| rng.gen_range(0..field.p())).collect()).collect();
        let w = Subspace::from_vectors(field, n, rows)?;
        if w.dim() == r {
            return Ok(w);
        }
    }
}

/// `Ker f = {ω ∈ ⋀^s K^n : f(ω) = 0}`.
pub fn form_kernel<F: Field>(f: &AltForm<F>) -> Subspace<F> {
    f.coefficient_matrix().kernel_basis()
}

/// Decides `null_k(f) ≥ r` by testing `ι(V) ⊆ Ker f` for every
/// `r`-dimensional `V`. Gives up when `G_r(K^n)` has more than `cap` points.
pub fn check_iff<F: Field>(f: &AltForm<F>, k: usize, r: usize, cap: u128) -> Result<bool> {
    let FieldCtx::PrimeField(p) = f.field().ctx() else {
        return Err(Error::InfiniteField);
    };
    let (n, s) = (f.dim(), f.arity());
    if k == 0 || k > s {
        return Err(Error::InvalidArgument(format!("depth k = {k} must lie in 1..={s}")));
    }
    if r > n {
        return Err(Error::InvalidArgument(format!(
            "subspace dimension {r} exceeds ambient dimension {n}"
        )));
    }
    if r < k {
        return Ok(true);
    }
    let needed = gaussian_binomial(n, r, p as u64);
    if needed > cap {
        return Err(Error::CapExceeded { needed, cap });
    }
    let field = f.field();
    let kernel = form_kernel(f);
    let gf = PrimeField::new(p as u64)?;
    SubspaceIter::new(gf, n, r)
        .par_bridge()
        .map(|v| -> Result<bool> {
            let rows = v
                .vectors()
                .into_iter()
                .map(|row| row.into_iter().map(|x| field.from_i64(x as i64)).collect())
                .collect();
            let v = Subspace::from_vectors(field, n, rows)?;
            Ok(kernel.contains_subspace(&iota_span(&v, k, s)?.span))
        })
        .try_fold(|| false, |acc, hit| hit.map(|h| acc || h))
        .try_reduce(|| false, |a, b| Ok(a || b))
}

/// Outcome of comparing [`iota_dim`] with computed spans over a parameter grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IotaBatch {
    pub q: u32,
    pub samples: usize,
    pub max_n: usize,
    pub max_coords: u128,
    /// `(n, s, k, r)` tuples checked.
    pub cases: usize,
    pub spans: usize,
    /// `(n, s, k, r, computed dim)` for every disagreement.
    pub mismatches: Vec<(usize, usize, usize, usize, usize)>,
}

impl IotaBatch {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// For every `1 ≤ k ≤ s ≤ n ≤ max_n`, `k ≤ r ≤ n` with `C(n, s) ≤ max_coords`,
/// computes `ι(V)` for `samples` random `r`-dimensional `V ⊆ GF(q)^n` and
/// compares its dimension with [`iota_dim`].
pub fn iota_batch(q: u32, max_n: usize, max_coords: u128, samples: usize, seed: u64) -> Result<IotaBatch> {
    use rand::SeedableRng;
    let field = PrimeField::new(q as u64)?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut batch = IotaBatch {
        q,
        samples,
        max_n,
        max_coords,
        cases: 0,
        spans: 0,
        mismatches: Vec::new(),
    };
    for n in 1..=max_n {
        for s in 1..=n {
            if binomial(n, s) > max_coords {
                continue;
            }
            for k in 1..=s {
                for r in k..=n {
                    batch.cases += 1;
                    for _ in 0..samples {
                        let v = random_subspace(&field, n, r, &mut rng)?;
                        batch.spans += 1;
                        let got = wedge_span(&v, k, s)?.dim();
                        if got as u128 != iota_dim(n, s, k, r)? {
                            batch.mismatches.push((n, s, k, r, got));
                        }
                    }
                }
            }
        }
    }
    Ok(batch)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::{Matrix, Rationals};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Counts `s`-subsets of `[n]` meeting `[r]` in at least `k` elements.
    fn meet_count(n: usize, s: usize, k: usize, r: usize) -> u128 {
        combinations(n, s)
            .iter()
            .filter(|c| c.iter().filter(|&&x| x < r).count() >= k)
            .count() as u128
    }

    #[test]
    fn count_formula_matches_subset_count() {
        for n in 1..=8 {
            for s in 1..=n {
                for k in 1..=s {
                    for r in k..=n {
                        assert_eq!(iota_dim(n, s, k, r).unwrap(), meet_count(n, s, k, r), "{n} {s} {k} {r}");
                    }
                }
            }
        }
    }

    #[test]
    fn count_formula_special_values() {
        for n in 4..=12 {
            assert_eq!(iota_dim(n, 3, 2, 3).unwrap(), 3 * n as u128 - 8);
        }
        assert_eq!(iota_dim(5, 3, 2, 3).unwrap(), 7);
        for s in 1..=6 {
            assert_eq!(iota_dim(8, s, s, s).unwrap(), 1);
        }
        assert!(iota_dim(4, 3, 2, 1).is_err());
        assert!(iota_dim(4, 5, 2, 3).is_err());
        assert!(iota_dim(4, 3, 0, 3).is_err());
    }

    #[test]
    fn coordinate_span_has_expected_dimension() {
        let q = Rationals;
        let v = Subspace::coordinate(&q, 6, &[1, 2, 3]).unwrap();
        let span = iota_span(&v, 2, 3).unwrap();
        assert_eq!(span.span.dim(), 10);
        let full = Subspace::full(&q, 5);
        assert_eq!(iota_span(&full, 2, 3).unwrap().span.dim(), 10);
    }

    #[test]
    fn random_spans_have_equal_dimension() {
        let f5 = PrimeField::new(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let v = random_subspace(&f5, 7, 3, &mut rng).unwrap();
            assert_eq!(iota_span(&v, 2, 3).unwrap().span.dim(), 13);
        }
    }

    #[test]
    fn small_batch_agrees() {
        let batch = iota_batch(5, 5, 20, 2, 1).unwrap();
        assert!(batch.passed());
        assert!(batch.cases > 50);
        assert_eq!(batch.spans, batch.cases * 2);
    }

    #[test]
    fn plucker_of_coordinate_plane() {
        let q = Rationals;
        let w = Subspace::coordinate(&q, 4, &[1, 2]).unwrap();
        let p = plucker(&w).unwrap();
        assert_eq!(p.get(&[1, 2]).unwrap(), q.one());
        assert_eq!(p.get(&[2, 1]).unwrap(), q.from_i64(-1));
        assert!(p.coords()[1..].iter().all(|x| q.is_zero(x)));
        assert!(plucker(&Subspace::zero(&q, 4)).is_err());
    }

    #[test]
    fn plucker_is_basis_independent() {
        let f7 = PrimeField::new(7).unwrap();
        for seed in 0..50 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let w = random_subspace(&f7, 6, 3, &mut rng).unwrap();
            let g: Vec<Vec<u32>> = loop {
                let g: Vec<Vec<u32>> = (0..3).map(|_| (0..3).map(|_| rng.gen_range(0..7)).collect()).collect();
                let m = Matrix::from_rows(&f7, 3, g.clone()).unwrap();
                if m.rank() == 3 {
                    break g;
                }
            };
            let rows = w.vectors();
            let mixed: Vec<Vec<u32>> = g
                .iter()
                .map(|coef| {
                    (0..6)
                        .map(|c| (0..3).fold(0, |acc, i| f7.mul_add(&acc, &coef[i], &rows[i][c])))
                        .collect()
                })
                .collect();
            let mixed = Subspace::from_vectors(&f7, 6, mixed.into_iter().rev().collect()).unwrap();
            assert_eq!(plucker(&w).unwrap(), plucker(&mixed).unwrap());
        }
    }

    #[test]
    fn plucker_relations_hold() {
        let f7 = PrimeField::new(7).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..30 {
            let w = random_subspace(&f7, 4, 2, &mut rng).unwrap();
            assert!(plucker(&w).unwrap().satisfies_three_term_relations());
        }
        let w = random_subspace(&f7, 6, 3, &mut rng).unwrap();
        assert!(plucker(&w).unwrap().satisfies_three_term_relations());
    }

    #[test]
    fn kernel_criterion_small_cases() {
        let f3 = PrimeField::new(3).unwrap();
        let e123 = AltForm::from_scalar_terms(&f3, 3, 3, &[(&[1, 2, 3], 1)]).unwrap();
        assert!(!check_iff(&e123, 2, 2, DEFAULT_GRASS_CAP).unwrap());
        assert!(check_iff(&e123, 2, 1, DEFAULT_GRASS_CAP).unwrap());
        let zero = AltForm::<PrimeField>::zero(&f3, 3, 4, 1).unwrap();
        for k in 1..=3 {
            for r in 0..=4 {
                assert!(check_iff(&zero, k, r, DEFAULT_GRASS_CAP).unwrap());
            }
        }
        let split = AltForm::from_scalar_terms(&f3, 3, 6, &[(&[1, 2, 3], 1), (&[4, 5, 6], 1)]).unwrap();
        assert!(check_iff(&split, 2, 2, DEFAULT_GRASS_CAP).unwrap());
        assert!(!check_iff(&split, 2, 3, DEFAULT_GRASS_CAP).unwrap());
        assert!(matches!(check_iff(&split, 2, 3, 10), Err(Error::CapExceeded { .. })));
    }
}
