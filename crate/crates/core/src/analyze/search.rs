//! Exact decision procedure for `null_k(f) ≥ r` over a prime field.
//!
//! The search backtracks over partial bases `b_1, .., b_j` of a candidate
//! subspace. After each step the admissible next vectors form a linear space
//! `C_j = {u : ι_u ι_S f = 0 for every (k−1)-subset S of the basis}`, so all
//! pruning is linear algebra. At depth `j` only the quotient `C_j / ⟨B⟩` is
//! enumerated, and only a coordinate subspace of it of codimension
//! `r − j − 1`: any `(r − j)`-dimensional subspace of the quotient meets it.

use rayon::prelude::*;

use super::certificate::{CertificateKind, NullityCertificate, SearchStats};
use super::radical;
use crate::error::{Error, Result};
use crate::exactlin::enumerate::{binomial, combinations, projective_count, projective_point, subset_rank};
use crate::exactlin::{Field, FieldCtx, Subspace};
use crate::exterior::AltForm;

/// Default limit on projective points visited per decision.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

const CHUNK: u128 = 2048;

/// Outcome of [`decide_nullity_geq`].
#[derive(Debug, Clone, PartialEq)]
pub struct Decision<F: Field> {
    pub holds: bool,
    pub certificate: NullityCertificate<F>,
}

/// Exact `null_k` with a witness at the value and an exhaustion record one above.
#[derive(Debug, Clone, PartialEq)]
pub struct NullityResult<F: Field> {
    pub value: usize,
    pub witness: NullityCertificate<F>,
    /// `None` when the value is the full dimension.
    pub exhausted: Option<NullityCertificate<F>>,
}

/// Decides whether some `r`-dimensional subspace is `k`-vanishing for `f`.
pub fn decide_nullity_geq<F: Field>(f: &AltForm<F>, k: usize, r: usize, budget: u64) -> Result<Decision<F>> {
    let FieldCtx::PrimeField(p) = f.field().ctx() else {
        return Err(Error::InfiniteField);
    };
    if k == 0 || k > f.arity() {
        return Err(Error::InvalidArgument(format!(
            "depth k = {k} must lie in 1..={}",
            f.arity()
        )));
    }
    if r > f.dim() {
        return Err(Error::InvalidArgument(format!(
            "subspace dimension {r} exceeds ambient dimension {}",
            f.dim()
        )));
    }
    let kernel = Kernel::new(f, p, k);
    let root = kernel.root(f);
    let (found, stats) = kernel.run(&root, r, budget)?;
    let field = f.field();
    let certificate = match found {
        Some(vectors) => {
            let rows = vectors
                .into_iter()
                .map(|v| v.into_iter().map(|x| field.from_i64(x as i64)).collect())
                .collect();
            NullityCertificate {
                kind: CertificateKind::Witness,
                k,
                r,
                field: field.ctx(),
                witness: Some(Subspace::from_vectors(field, f.dim(), rows)?),
                stats,
            }
        }
        None => NullityCertificate {
            kind: CertificateKind::Exhausted,
            k,
            r,
            field: field.ctx(),
            witness: None,
            stats,
        },
    };
    Ok(Decision {
        holds: certificate.kind == CertificateKind::Witness,
        certificate,
    })
}

/// Largest `r` with `null_k(f) ≥ r`, probing `r = 1, 2, ..` in turn.
/// The budget applies to each decision separately.
pub fn nullity_exact<F: Field>(f: &AltForm<F>, k: usize, budget: u64) -> Result<NullityResult<F>> {
    let mut best = decide_nullity_geq(f, k, 0, budget)?.certificate;
    for r in 1..=f.dim() {
        let d = decide_nullity_geq(f, k, r, budget)?;
        if !d.holds {
            return Ok(NullityResult {
                value: r - 1,
                witness: best,
                exhausted: Some(d.certificate),
            });
        }
        best = d.certificate;
    }
    Ok(NullityResult {
        value: f.dim(),
        witness: best,
        exhausted: None,
    })
}

type Vector = Vec<u32>;

/// A form of arity `t` stored densely: entry `rank(T) * m + c`.
#[derive(Clone)]
struct Dense {
    arity: usize,
    data: Vec<u32>,
}

struct ContractEntry {
    index: u32,
    sub_rank: u32,
    negate: bool,
}

/// Precomputed contraction tables for one form shape.
struct Kernel {
    n: usize,
    m: usize,
    p: u32,
    k: usize,
    /// `tables[t][T * t + pos]` describes removing position `pos` of subset `T`.
    tables: Vec<Vec<ContractEntry>>,
}

/// A node of the backtracking tree.
#[derive(Clone)]
struct Level {
    basis: Vec<Vector>,
    /// RREF basis of the candidate space; contains the span of `basis`.
    cand: Vec<Vector>,
    /// `ι_S f` for subsets `S` of the basis with `|S| ≤ k − 2`, tagged by `|S|`.
    partials: Vec<(usize, Dense)>,
}

enum Outcome {
    Found(Vec<Vector>),
    Empty,
    Aborted,
}

impl Kernel {
    fn new<F: Field>(f: &AltForm<F>, p: u32, k: usize) -> Self {
        let n = f.dim();
        let tables = (0..=f.arity())
            .map(|t| {
                if t == 0 {
                    return Vec::new();
                }
                let mut tab = Vec::with_capacity(binomial(n, t) as usize * t);
                for c in combinations(n, t) {
                    for pos in 0..t {
                        let mut rest = c.clone();
                        let idx = rest.remove(pos);
                        tab.push(ContractEntry {
                            index: idx as u32,
                            sub_rank: subset_rank(&rest, n) as u32,
                            negate: pos % 2 == 1,
                        });
                    }
                }
                tab
            })
            .collect();
        Kernel {
            n,
            m: f.codim(),
            p,
            k,
            tables,
        }
    }

    fn dense<F: Field>(&self, f: &AltForm<F>) -> Dense {
        let s = f.arity();
        let mut data = vec![0u32; binomial(self.n, s) as usize * self.m];
        for (idx, vals) in f.terms() {
            let zero_based: Vec<usize> = idx.indices().iter().map(|i| i - 1).collect();
            let r = subset_rank(&zero_based, self.n);
            for (c, v) in vals.iter().enumerate() {
                data[r * self.m + c] = f.field().as_residue(v).expect("prime field element");
            }
        }
        Dense { arity: s, data }
    }

    fn contract(&self, g: &Dense, v: &[u32]) -> Dense {
        let t = g.arity;
        let m = self.m;
        let p = self.p as u64;
        let mut out = vec![0u64; binomial(self.n, t - 1) as usize * m];
        let tab = &self.tables[t];
        for (rank, chunk) in g.data.chunks_exact(m).enumerate() {
            if chunk.iter().all(|&x| x == 0) {
                continue;
            }
            for e in &tab[rank * t..(rank + 1) * t] {
                let x = v[e.index as usize] as u64;
                if x == 0 {
                    continue;
                }
                let coef = if e.negate { p - x } else { x };
                let base = e.sub_rank as usize * m;
                for (c, &gv) in chunk.iter().enumerate() {
                    out[base + c] = (out[base + c] + coef * gv as u64) % p;
                }
            }
        }
        Dense {
            arity: t - 1,
            data: out.into_iter().map(|x| x as u32).collect(),
        }
    }

    fn root<F: Field>(&self, f: &AltForm<F>) -> Level {
        let dense = self.dense(f);
        let cand = if self.k == 1 {
            radical(f)
                .vectors()
                .iter()
                .map(|v| v.iter().map(|x| f.field().as_residue(x).expect("residue")).collect())
                .collect()
        } else {
            (0..self.n)
                .map(|i| {
                    let mut e = vec![0; self.n];
                    e[i] = 1;
                    e
                })
                .collect()
        };
        let partials = if self.k >= 2 { vec![(0, dense)] } else { Vec::new() };
        Level {
            basis: Vec::new(),
            cand,
            partials,
        }
    }

    /// Child node after appending `u` to the basis.
    fn extend(&self, level: &Level, u: &[u32]) -> Level {
        let mut partials = level.partials.clone();
        let mut constraints = Vec::new();
        for (size, g) in &level.partials {
            let h = self.contract(g, u);
            if size + 1 == self.k - 1 {
                constraints.push(h);
            } else {
                partials.push((size + 1, h));
            }
        }
        let cand = if constraints.is_empty() {
            level.cand.clone()
        } else {
            self.restrict(&level.cand, &constraints)
        };
        let mut basis = level.basis.clone();
        basis.push(u.to_vec());
        Level {
            basis,
            cand,
            partials,
        }
    }

    /// `{x ∈ span(cand) : ι_x g = 0 for every g}` as an RREF basis.
    fn restrict(&self, cand: &[Vector], constraints: &[Dense]) -> Vec<Vector> {
        let d = cand.len();
        if d == 0 {
            return Vec::new();
        }
        // column a of the system holds ι_{cand[a]} g for all g, stacked
        let columns: Vec<Vec<u32>> = cand
            .iter()
            .map(|c| {
                constraints
                    .iter()
                    .flat_map(|g| self.contract(g, c).data)
                    .collect()
            })
            .collect();
        let rows = columns[0].len();
        let mut mat = vec![0u32; rows * d];
        for (a, col) in columns.iter().enumerate() {
            for (i, &x) in col.iter().enumerate() {
                mat[i * d + a] = x;
            }
        }
        let kernel = kernel_mod(&mut mat, rows, d, self.p);
        let p = self.p as u64;
        let mut vecs: Vec<Vector> = kernel
            .iter()
            .map(|coef| {
                let mut x = vec![0u64; self.n];
                for (c, v) in coef.iter().zip(cand) {
                    if *c == 0 {
                        continue;
                    }
                    for (xi, &vi) in x.iter_mut().zip(v) {
                        *xi = (*xi + *c as u64 * vi as u64) % p;
                    }
                }
                x.into_iter().map(|v| v as u32).collect()
            })
            .collect();
        let len = vecs.len();
        let mut flat: Vec<u32> = vecs.drain(..).flatten().collect();
        let pivots = rref_mod(&mut flat, len, self.n, self.p);
        flat.chunks_exact(self.n.max(1))
            .take(pivots.len())
            .map(|r| r.to_vec())
            .collect()
    }

    /// Vectors of `cand` extending `basis` to a basis of `span(cand)`.
    fn complement(&self, basis: &[Vector], cand: &[Vector]) -> Vec<Vector> {
        let mut echelon = Echelon::new(self.p);
        for b in basis {
            echelon.insert(b.clone());
        }
        cand.iter()
            .filter(|c| echelon.insert((*c).clone()))
            .cloned()
            .collect()
    }

    fn combine(&self, coeffs: &[u32], vectors: &[Vector]) -> Vector {
        let p = self.p as u64;
        let mut x = vec![0u64; self.n];
        for (c, v) in coeffs.iter().zip(vectors) {
            if *c == 0 {
                continue;
            }
            for (xi, &vi) in x.iter_mut().zip(v) {
                *xi = (*xi + *c as u64 * vi as u64) % p;
            }
        }
        x.into_iter().map(|v| v as u32).collect()
    }

    fn search(&self, level: &Level, r: usize, cap: u64, nodes: &mut u64) -> Outcome {
        let j = level.basis.len();
        if j == r {
            return Outcome::Found(level.basis.clone());
        }
        if level.cand.len() < r {
            return Outcome::Empty;
        }
        let comp = self.complement(&level.basis, &level.cand);
        if j + 1 == r {
            let mut b = level.basis.clone();
            b.push(comp[0].clone());
            return Outcome::Found(b);
        }
        let width = comp.len() - (r - j - 1);
        for idx in 0..projective_count(self.p as u64, width) {
            *nodes += 1;
            if *nodes > cap {
                return Outcome::Aborted;
            }
            let coeffs = projective_point(self.p, width, idx);
            let u = self.combine(&coeffs, &comp[..width]);
            match self.search(&self.extend(level, &u), r, cap, nodes) {
                Outcome::Empty => {}
                other => return other,
            }
        }
        Outcome::Empty
    }

    /// Runs the decision, fanning top-level points out in fixed chunks.
    fn run(&self, root: &Level, r: usize, budget: u64) -> Result<(Option<Vec<Vector>>, SearchStats)> {
        let mut stats = SearchStats::default();
        if r == 0 {
            return Ok((Some(Vec::new()), stats));
        }
        if root.cand.len() < r {
            return Ok((None, stats));
        }
        let comp = self.complement(&root.basis, &root.cand);
        if r == 1 {
            return Ok((Some(vec![comp[0].clone()]), stats));
        }
        let width = comp.len() - (r - 1);
        stats.search_dim = width;
        let total = projective_count(self.p as u64, width);
        let mut start = 0u128;
        while start < total {
            let end = (start + CHUNK).min(total);
            let remaining = budget.saturating_sub(stats.nodes);
            let results: Vec<(Outcome, u64)> = (start..end)
                .into_par_iter()
                .map(|idx| {
                    let mut nodes = 1u64;
                    if remaining == 0 {
                        return (Outcome::Aborted, nodes);
                    }
                    let coeffs = projective_point(self.p, width, idx);
                    let u = self.combine(&coeffs, &comp[..width]);
                    let out = self.search(&self.extend(root, &u), r, remaining, &mut nodes);
                    (out, nodes)
                })
                .collect();
            for (out, nodes) in results {
                stats.points += 1;
                stats.nodes += nodes;
                match out {
                    Outcome::Aborted => return Err(Error::BudgetExceeded { budget }),
                    _ if stats.nodes > budget => return Err(Error::BudgetExceeded { budget }),
                    Outcome::Found(b) => return Ok((Some(b), stats)),
                    Outcome::Empty => {}
                }
            }
            start = end;
        }
        Ok((None, stats))
    }
}

/// Incremental row echelon form used to pick complements.
struct Echelon {
    p: u32,
    rows: Vec<(usize, Vector)>,
}

impl Echelon {
    fn new(p: u32) -> Self {
        Echelon { p, rows: Vec::new() }
    }

    /// Reduces `v` and keeps it if independent; returns whether it was kept.
    fn insert(&mut self, mut v: Vector) -> bool {
        let p = self.p as u64;
        for (piv, row) in &self.rows {
            let c = v[*piv] as u64;
            if c == 0 {
                continue;
            }
            for (x, &y) in v.iter_mut().zip(row) {
                *x = ((*x as u64 + (p - c) * y as u64) % p) as u32;
            }
        }
        let Some(piv) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = inv_mod(v[piv], self.p);
        for x in v.iter_mut() {
            *x = ((*x as u64 * inv as u64) % p) as u32;
        }
        self.rows.push((piv, v));
        true
    }
}

fn inv_mod(a: u32, p: u32) -> u32 {
    let (mut t, mut new_t) = (0i64, 1i64);
    let (mut r, mut new_r) = (p as i64, a as i64);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    t.rem_euclid(p as i64) as u32
}

/// Gauss-Jordan over `GF(p)` on a row-major buffer; returns pivot columns.
fn rref_mod(a: &mut [u32], rows: usize, cols: usize, p: u32) -> Vec<usize> {
    let pp = p as u64;
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| a[i * cols + c] != 0) else {
            continue;
        };
        if pr != r {
            for j in 0..cols {
                a.swap(pr * cols + j, r * cols + j);
            }
        }
        let inv = inv_mod(a[r * cols + c], p) as u64;
        for j in c..cols {
            a[r * cols + j] = ((a[r * cols + j] as u64 * inv) % pp) as u32;
        }
        for i in 0..rows {
            let factor = a[i * cols + c] as u64;
            if i == r || factor == 0 {
                continue;
            }
            let neg = pp - factor;
            for j in c..cols {
                let y = a[r * cols + j] as u64;
                a[i * cols + j] = ((a[i * cols + j] as u64 + neg * y) % pp) as u32;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Right kernel of a row-major matrix over `GF(p)`.
fn kernel_mod(a: &mut [u32], rows: usize, cols: usize, p: u32) -> Vec<Vector> {
    let pivots = rref_mod(a, rows, cols, p);
    let mut is_pivot = vec![false; cols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    (0..cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut x = vec![0u32; cols];
            x[free] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                let v = a[i * cols + free];
                x[pc] = if v == 0 { 0 } else { p - v };
            }
            x
        })
        .collect()
}
