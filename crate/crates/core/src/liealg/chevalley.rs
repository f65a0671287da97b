use std::collections::HashMap;

use num_rational::Rational64;
use num_traits::Zero;

use super::roots::{height, Root, RootSystem};
use crate::error::{Error, Result};

/// Sparse integer vector over the Chevalley basis.
pub type SparseVec = Vec<(usize, i64)>;

/// One element of the Chevalley basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChevalleyElem {
    /// `H_i` for the `i`-th simple root (0-based).
    Cartan(usize),
    /// `X_α` for a root `α` in simple-root coordinates.
    Root(Root),
}

/// A Chevalley basis with integer structure constants and its Killing form.
///
/// Basis order: `H_1..H_r`, then `X_α` for positive `α` in root order, then
/// `X_{−α}` in the same order.
#[derive(Debug, Clone)]
pub struct ChevalleyData {
    roots: RootSystem,
    basis: Vec<ChevalleyElem>,
    /// `brackets[i][j] = [b_i, b_j]`.
    brackets: Vec<Vec<SparseVec>>,
    killing: Vec<Vec<i64>>,
}

/// Root-pair constants `N_{α,β}` for `α + β` a nonzero root.
struct StructureConstants<'a> {
    rs: &'a RootSystem,
    /// Keyed by positive indices `(a, b)` with `a < b`.
    positive: HashMap<(usize, usize), Rational64>,
}

impl<'a> StructureConstants<'a> {
    /// Signs fixed by declaring `N_{γ,δ} = p + 1 > 0` on every extraspecial pair.
    fn build(rs: &'a RootSystem) -> Result<Self> {
        let mut sc = StructureConstants {
            rs,
            positive: HashMap::new(),
        };
        let pos = rs.positive_roots();
        for (xi_idx, xi) in pos.iter().enumerate() {
            if height(xi) < 2 {
                continue;
            }
            // special pairs (a, b), a before b, summing to xi
            let mut pairs = Vec::new();
            for a in 0..xi_idx {
                let rest: Root = xi.iter().zip(&pos[a]).map(|(x, y)| x - y).collect();
                if let Some(b) = rs.positive_index(&rest) {
                    if a < b {
                        pairs.push((a, b));
                    }
                }
            }
            let Some(&(g, d)) = pairs.first() else {
                return Err(Error::Internal(format!("root {xi:?} has no decomposition")));
            };
            let string = string_below(rs, &pos[d], &pos[g]);
            let n_gd = Rational64::from_integer(string + 1);
            sc.positive.insert((g, d), n_gd);
            let xi_norm = Rational64::from_integer(rs.inner(xi, xi));
            let (gamma, delta) = (pos[g].clone(), pos[d].clone());
            for &(a, b) in &pairs[1..] {
                let (alpha, beta) = (pos[a].clone(), pos[b].clone());
                let neg_g = negate(&gamma);
                let neg_d = negate(&delta);
                let mut acc = Rational64::zero();
                let bg = add(&beta, &neg_g);
                if rs.is_root(&bg) {
                    let norm = Rational64::from_integer(rs.inner(&bg, &bg));
                    acc += sc.get(&beta, &neg_g) * sc.get(&alpha, &neg_d) / norm;
                }
                let ag = add(&alpha, &neg_g);
                if rs.is_root(&ag) {
                    let norm = Rational64::from_integer(rs.inner(&ag, &ag));
                    acc += sc.get(&neg_g, &alpha) * sc.get(&beta, &neg_d) / norm;
                }
                let value = xi_norm / n_gd * acc;
                sc.positive.insert((a, b), value);
            }
        }
        Ok(sc)
    }

    /// `N_{x,y}` for arbitrary roots; zero unless `x + y` is a root.
    fn get(&self, x: &[i64], y: &[i64]) -> Rational64 {
        let rs = self.rs;
        let sum = add(x, y);
        if sum.iter().all(|&c| c == 0) || !rs.is_root(&sum) {
            return Rational64::zero();
        }
        let x_pos = height(x) > 0;
        let y_pos = height(y) > 0;
        match (x_pos, y_pos) {
            (true, true) => {
                let a = rs.positive_index(x).expect("positive root");
                let b = rs.positive_index(y).expect("positive root");
                if a < b {
                    self.positive[&(a, b)]
                } else {
                    -self.positive[&(b, a)]
                }
            }
            (false, false) => -self.get(&negate(x), &negate(y)),
            (false, true) => -self.get(y, x),
            (true, false) => {
                let z = negate(&sum);
                let zz = Rational64::from_integer(rs.inner(&z, &z));
                if height(&sum) > 0 {
                    // x + y + z = 0 with z negative
                    let xx = Rational64::from_integer(rs.inner(x, x));
                    -(zz / xx) * self.get(&negate(y), &negate(&z))
                } else {
                    let yy = Rational64::from_integer(rs.inner(y, y));
                    zz / yy * self.get(&z, x)
                }
            }
        }
    }
}

fn add(a: &[i64], b: &[i64]) -> Root {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn negate(a: &[i64]) -> Root {
    a.iter().map(|x| -x).collect()
}

/// Largest `p` with `beta − p·alpha` a root.
fn string_below(rs: &RootSystem, beta: &[i64], alpha: &[i64]) -> i64 {
    let mut p = 0;
    let mut cur: Root = beta.to_vec();
    loop {
        cur = cur.iter().zip(alpha).map(|(c, a)| c - a).collect();
        if rs.is_root(&cur) {
            p += 1;
        } else {
            return p;
        }
    }
}

fn to_integer(q: Rational64, what: &str) -> Result<i64> {
    if q.is_integer() {
        Ok(q.to_integer())
    } else {
        Err(Error::Internal(format!("non-integral {what}: {q}")))
    }
}

impl ChevalleyData {
    pub fn new(rs: &RootSystem) -> Result<Self> {
        let r = rs.rank();
        let pos = rs.positive_roots();
        let np = pos.len();
        let n = r + 2 * np;
        let sc = StructureConstants::build(rs)?;

        let mut basis: Vec<ChevalleyElem> = (0..r).map(ChevalleyElem::Cartan).collect();
        basis.extend(pos.iter().map(|a| ChevalleyElem::Root(a.clone())));
        basis.extend(pos.iter().map(|a| ChevalleyElem::Root(negate(a))));
        let root_index = |v: &[i64]| -> Option<usize> {
            if let Some(i) = rs.positive_index(v) {
                return Some(r + i);
            }
            rs.positive_index(&negate(v)).map(|i| r + np + i)
        };

        let mut brackets = vec![vec![SparseVec::new(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let value: SparseVec = match (&basis[i], &basis[j]) {
                    (ChevalleyElem::Cartan(_), ChevalleyElem::Cartan(_)) => Vec::new(),
                    (ChevalleyElem::Cartan(h), ChevalleyElem::Root(a)) => {
                        let c = 2 * rs.inner(a, &super::roots::unit(r, *h)) / rs.gram()[*h][*h];
                        if c == 0 { Vec::new() } else { vec![(j, c)] }
                    }
                    (ChevalleyElem::Root(a), ChevalleyElem::Cartan(h)) => {
                        let c = 2 * rs.inner(a, &super::roots::unit(r, *h)) / rs.gram()[*h][*h];
                        if c == 0 { Vec::new() } else { vec![(i, -c)] }
                    }
                    (ChevalleyElem::Root(a), ChevalleyElem::Root(b)) => {
                        let sum = add(a, b);
                        if sum.iter().all(|&x| x == 0) {
                            coroot(rs, a)?
                        } else if let Some(k) = root_index(&sum) {
                            let c = to_integer(sc.get(a, b), "structure constant")?;
                            let p = string_below(rs, b, a);
                            if c.abs() != p + 1 {
                                return Err(Error::Internal(format!(
                                    "|N({a:?},{b:?})| = {} but the string gives {}",
                                    c.abs(),
                                    p + 1
                                )));
                            }
                            vec![(k, c)]
                        } else {
                            Vec::new()
                        }
                    }
                };
                brackets[i][j] = value;
            }
        }

        let mut data = ChevalleyData {
            roots: rs.clone(),
            basis,
            brackets,
            killing: vec![vec![0; n]; n],
        };
        data.killing = data.compute_killing();
        Ok(data)
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.roots
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[ChevalleyElem] {
        &self.basis
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> &SparseVec {
        &self.brackets[i][j]
    }

    /// Bracket of two sparse integer vectors.
    pub fn bracket(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        let mut acc: HashMap<usize, i64> = HashMap::new();
        for &(i, a) in x {
            for &(j, b) in y {
                for &(k, c) in &self.brackets[i][j] {
                    *acc.entry(k).or_insert(0) += a * b * c;
                }
            }
        }
        let mut out: SparseVec = acc.into_iter().filter(|&(_, v)| v != 0).collect();
        out.sort_unstable();
        out
    }

    pub fn killing(&self) -> &[Vec<i64>] {
        &self.killing
    }

    /// `κ(b_i, b_j) = tr(ad b_i ∘ ad b_j)`, evaluated only on weight-zero pairs.
    fn compute_killing(&self) -> Vec<Vec<i64>> {
        let n = self.dim();
        let weight = |i: usize| -> Root {
            match &self.basis[i] {
                ChevalleyElem::Cartan(_) => vec![0; self.roots.rank()],
                ChevalleyElem::Root(a) => a.clone(),
            }
        };
        let mut k = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in i..n {
                let s = add(&weight(i), &weight(j));
                if s.iter().any(|&c| c != 0) {
                    continue;
                }
                let mut tr = 0i64;
                for l in 0..n {
                    for &(m, c) in &self.brackets[j][l] {
                        for &(t, d) in &self.brackets[i][m] {
                            if t == l {
                                tr += c * d;
                            }
                        }
                    }
                }
                k[i][j] = tr;
                k[j][i] = tr;
            }
        }
        k
    }

    pub fn killing_sparse(&self, x: &SparseVec, y: &SparseVec) -> i64 {
        let mut s = 0;
        for &(i, a) in x {
            for &(j, b) in y {
                s += a * b * self.killing[i][j];
            }
        }
        s
    }

    /// Exact Jacobi identity on all basis triples.
    pub fn check_jacobi(&self) -> Result<()> {
        let n = self.dim();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let e = |a: usize| vec![(a, 1i64)];
                    let t1 = self.bracket(&e(i), &self.brackets[j][k]);
                    let t2 = self.bracket(&e(j), &self.brackets[k][i]);
                    let t3 = self.bracket(&e(k), &self.brackets[i][j]);
                    let mut acc: HashMap<usize, i64> = HashMap::new();
                    for (idx, v) in t1.into_iter().chain(t2).chain(t3) {
                        *acc.entry(idx).or_insert(0) += v;
                    }
                    if acc.values().any(|&v| v != 0) {
                        return Err(Error::Internal(format!("Jacobi fails on basis triple ({i},{j},{k})")));
                    }
                }
            }
        }
        Ok(())
    }

    /// `κ([x,y],z) = κ(x,[y,z])` on all basis triples.
    pub fn check_killing_invariance(&self) -> Result<()> {
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let lhs = self.killing_sparse(&self.brackets[i][j], &vec![(k, 1)]);
                    let rhs = self.killing_sparse(&vec![(i, 1)], &self.brackets[j][k]);
                    if lhs != rhs {
                        return Err(Error::Internal(format!("Killing form not invariant at ({i},{j},{k})")));
                    }
                }
            }
        }
        Ok(())
    }
}

/// `H_α = Σ m_i (α_i,α_i)/(α,α) H_i` for `α = Σ m_i α_i`.
fn coroot(rs: &RootSystem, a: &[i64]) -> Result<SparseVec> {
    let norm = rs.inner(a, a);
    let mut out = Vec::new();
    for (i, &m) in a.iter().enumerate() {
        if m == 0 {
            continue;
        }
        let num = m * rs.gram()[i][i];
        if num % norm != 0 {
            return Err(Error::Internal(format!("coroot of {a:?} is not integral")));
        }
        out.push((i, num / norm));
    }
    Ok(out)
}
