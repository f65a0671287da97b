//! Counting and enumeration over finite fields: projective points,
//! subspaces in RREF form, and lexicographic subsets.

use crate::error::{Error, Result};
use crate::exactlin::field::PrimeField;
use crate::exactlin::matrix::Matrix;
use crate::exactlin::subspace::Subspace;

/// Number of points of the projective space `P(GF(q)^d)`.
pub fn projective_count(q: u64, d: usize) -> u128 {
    let q = q as u128;
    (0..d).fold(0u128, |acc, _| acc * q + 1)
}

/// The `idx`-th projective point of `GF(p)^d` in canonical order.
///
/// Points are normalized so the first nonzero coordinate is 1. They are
/// ordered by that pivot position (ascending), then by the trailing
/// coordinates read as base-`p` digits with the leftmost most significant.
pub fn projective_point(p: u32, d: usize, idx: u128) -> Vec<u32> {
    let q = p as u128;
    let mut rest = idx;
    let mut v = vec![0u32; d];
    for pivot in 0..d {
        let tail = d - pivot - 1;
        let block = q.pow(tail as u32);
        if rest < block {
            v[pivot] = 1;
            let mut x = rest;
            for j in (pivot + 1..d).rev() {
                v[j] = (x % q) as u32;
                x /= q;
            }
            return v;
        }
        rest -= block;
    }
    panic!("projective index {idx} out of range for dimension {d}");
}

/// Iterates projective points of `GF(p)^d` in canonical order.
pub fn projective_points(p: u32, d: usize) -> impl Iterator<Item = Vec<u32>> {
    let total = projective_count(p as u64, d);
    (0..total).map(move |i| projective_point(p, d, i))
}

/// Number of `r`-dimensional subspaces of `GF(q)^n`.
pub fn gaussian_binomial(n: usize, r: usize, q: u64) -> u128 {
    if r > n {
        return 0;
    }
    let q = q as u128;
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..r {
        num = num.saturating_mul(q.pow((n - i) as u32) - 1);
        den = den.saturating_mul(q.pow((i + 1) as u32) - 1);
    }
    if num == u128::MAX {
        return u128::MAX;
    }
    num / den
}

/// Total number of subspaces of every dimension of `GF(q)^n`.
pub fn total_subspace_count(n: usize, q: u64) -> u128 {
    (0..=n).fold(0u128, |acc, r| acc.saturating_add(gaussian_binomial(n, r, q)))
}

/// Enumerates all `r`-dimensional subspaces of `GF(p)^n` via their RREF
/// bases: for each pivot set in lex order, every assignment of free entries.
pub struct SubspaceIter {
    field: PrimeField,
    n: usize,
    pivots: Option<Vec<usize>>,
    free_slots: Vec<(usize, usize)>,
    counter: Vec<u32>,
    done_pivot: bool,
}

impl SubspaceIter {
    pub fn new(field: PrimeField, n: usize, r: usize) -> Self {
        let pivots = if r <= n { Some((0..r).collect()) } else { None };
        let mut it = SubspaceIter {
            field,
            n,
            pivots,
            free_slots: Vec::new(),
            counter: Vec::new(),
            done_pivot: true,
        };
        it.reset_slots();
        it
    }

    fn reset_slots(&mut self) {
        let Some(piv) = &self.pivots else { return };
        self.free_slots.clear();
        for (row, &pc) in piv.iter().enumerate() {
            for c in pc + 1..self.n {
                if !piv.contains(&c) {
                    self.free_slots.push((row, c));
                }
            }
        }
        self.counter = vec![0; self.free_slots.len()];
        self.done_pivot = false;
    }

    fn build(&self) -> Subspace<PrimeField> {
        let piv = self.pivots.as_ref().expect("active pivot set");
        let r = piv.len();
        let mut m = Matrix::zeros(&self.field, r, self.n);
        for (row, &pc) in piv.iter().enumerate() {
            m.set(row, pc, 1);
        }
        for (&(row, c), &v) in self.free_slots.iter().zip(&self.counter) {
            m.set(row, c, v);
        }
        Subspace::row_space(&m)
    }
}

impl Iterator for SubspaceIter {
    type Item = Subspace<PrimeField>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            let piv = self.pivots.as_mut()?;
            if !self.done_pivot {
                let out = self.build();
                // advance the free-entry odometer
                let p = self.field.p();
                let mut carry = true;
                for d in self.counter.iter_mut().rev() {
                    *d += 1;
                    if *d < p {
                        carry = false;
                        break;
                    }
                    *d = 0;
                }
                if carry {
                    self.done_pivot = true;
                }
                return Some(out);
            }
            if next_combination(piv, self.n) {
                self.reset_slots();
            } else {
                self.pivots = None;
            }
        }
    }
}

/// Advances a strictly increasing 0-based combination of `0..n` in lex order.
pub fn next_combination(c: &mut [usize], n: usize) -> bool {
    let r = c.len();
    for i in (0..r).rev() {
        if c[i] < n - r + i {
            c[i] += 1;
            for j in i + 1..r {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// All `r`-subsets of `0..n` in lex order.
pub fn combinations(n: usize, r: usize) -> Vec<Vec<usize>> {
    if r > n {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut c: Vec<usize> = (0..r).collect();
    loop {
        out.push(c.clone());
        if !next_combination(&mut c, n) {
            return out;
        }
    }
}

/// Binomial coefficient with saturation on overflow.
pub fn binomial(n: usize, r: usize) -> u128 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// Lex rank of a strictly increasing 0-based subset of `0..n`.
pub fn subset_rank(subset: &[usize], n: usize) -> usize {
    let r = subset.len();
    let mut rank = 0usize;
    let mut prev = 0usize;
    for (i, &x) in subset.iter().enumerate() {
        for y in prev..x {
            rank += binomial(n - y - 1, r - i - 1) as usize;
        }
        prev = x + 1;
    }
    rank
}

/// Inverse of [`subset_rank`].
pub fn subset_unrank(mut rank: usize, n: usize, r: usize) -> Result<Vec<usize>> {
    if rank as u128 >= binomial(n, r) {
        return Err(Error::InvalidArgument(format!("subset rank {rank} out of range")));
    }
    let mut out = Vec::with_capacity(r);
    let mut x = 0;
    for i in 0..r {
        loop {
            let c = binomial(n - x - 1, r - i - 1) as usize;
            if rank < c {
                break;
            }
            rank -= c;
            x += 1;
        }
        out.push(x);
        x += 1;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projective_order_starts_with_first_unit_vector() {
        let pts: Vec<_> = projective_points(3, 2).collect();
        assert_eq!(pts, vec![vec![1, 0], vec![1, 1], vec![1, 2], vec![0, 1]]);
    }

    #[test]
    fn projective_points_are_distinct_lines() {
        let f = PrimeField::new(3).unwrap();
        let pts: Vec<_> = projective_points(3, 4).collect();
        assert_eq!(pts.len() as u128, projective_count(3, 4));
        let mut lines: Vec<_> = pts
            .into_iter()
            .map(|v| Subspace::from_vectors(&f, 4, vec![v]).unwrap().vectors())
            .collect();
        lines.sort();
        lines.dedup();
        assert_eq!(lines.len(), 40);
    }

    #[test]
    fn gaussian_binomials_match_small_counts() {
        assert_eq!(gaussian_binomial(6, 2, 3), 11011);
        assert_eq!(gaussian_binomial(6, 3, 3), 33880);
        assert_eq!(gaussian_binomial(4, 2, 2), 35);
        assert_eq!(gaussian_binomial(3, 0, 5), 1);
        assert_eq!(gaussian_binomial(3, 4, 5), 0);
    }

    #[test]
    fn subspace_iter_enumerates_each_subspace_once() {
        let f = PrimeField::new(3).unwrap();
        for (n, r) in [(3, 1), (4, 2), (3, 3), (3, 0)] {
            let mut all: Vec<_> = SubspaceIter::new(f, n, r).map(|s| s.vectors()).collect();
            let count = all.len();
            all.sort();
            all.dedup();
            assert_eq!(all.len(), count);
            assert_eq!(count as u128, gaussian_binomial(n, r, 3));
        }
    }

    #[test]
    fn subset_rank_round_trip() {
        for (i, c) in combinations(7, 3).iter().enumerate() {
            assert_eq!(subset_rank(c, 7), i);
            assert_eq!(&subset_unrank(i, 7, 3).unwrap(), c);
        }
        assert_eq!(combinations(5, 0), vec![Vec::<usize>::new()]);
        assert!(combinations(2, 3).is_empty());
    }
}
