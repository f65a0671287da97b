use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Cartan-Killing type of a simple Lie algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LieType {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl LieType {
    fn from_char(c: char) -> Option<Self> {
        Some(match c.to_ascii_uppercase() {
            'A' => LieType::A,
            'B' => LieType::B,
            'C' => LieType::C,
            'D' => LieType::D,
            'E' => LieType::E,
            'F' => LieType::F,
            'G' => LieType::G,
            _ => return None,
        })
    }

    /// Whether `(self, rank)` names a simple algebra.
    pub fn is_valid_rank(&self, r: usize) -> bool {
        match self {
            LieType::A => r >= 1,
            LieType::B | LieType::C => r >= 2,
            LieType::D => r >= 4,
            LieType::E => (6..=8).contains(&r),
            LieType::F => r == 4,
            LieType::G => r == 2,
        }
    }

    /// Closed-form dimension of the algebra of this type and rank.
    pub fn algebra_dim(&self, r: usize) -> usize {
        match self {
            LieType::A => r * (r + 2),
            LieType::B | LieType::C => r * (2 * r + 1),
            LieType::D => r * (2 * r - 1),
            LieType::E => match r {
                6 => 78,
                7 => 133,
                _ => 248,
            },
            LieType::F => 52,
            LieType::G => 14,
        }
    }
}

impl fmt::Display for LieType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            LieType::A => 'A',
            LieType::B => 'B',
            LieType::C => 'C',
            LieType::D => 'D',
            LieType::E => 'E',
            LieType::F => 'F',
            LieType::G => 'G',
        };
        write!(f, "{c}")
    }
}

/// A type label with rank, written like `A2` or `G2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CartanLabel {
    pub ty: LieType,
    pub rank: usize,
}

impl FromStr for CartanLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut chars = s.chars();
        let ty = chars
            .next()
            .and_then(LieType::from_char)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown Lie type `{s}`")))?;
        let rank: usize = chars
            .as_str()
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("bad rank in `{s}`")))?;
        if !ty.is_valid_rank(rank) {
            return Err(Error::InvalidArgument(format!("no simple algebra of type {ty}{rank}")));
        }
        Ok(CartanLabel { ty, rank })
    }
}

impl fmt::Display for CartanLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.ty, self.rank)
    }
}

/// Root coordinates in the basis of simple roots.
pub type Root = Vec<i64>;

/// A reduced irreducible root system with Bourbaki-numbered simple roots.
#[derive(Debug, Clone)]
pub struct RootSystem {
    label: CartanLabel,
    /// Symmetric Gram matrix of the simple roots, short roots of length 2.
    gram: Vec<Vec<i64>>,
    cartan: Vec<Vec<i64>>,
    /// Positive roots sorted by height, then reverse-lexicographically.
    positive: Vec<Root>,
    index: HashMap<Root, usize>,
}

fn simple_gram(ty: LieType, r: usize) -> Vec<Vec<i64>> {
    let mut g = vec![vec![0i64; r]; r];
    let link = |g: &mut Vec<Vec<i64>>, i: usize, j: usize, v: i64| {
        g[i][j] = v;
        g[j][i] = v;
    };
    match ty {
        LieType::A => {
            for i in 0..r {
                g[i][i] = 2;
            }
            for i in 0..r.saturating_sub(1) {
                link(&mut g, i, i + 1, -1);
            }
        }
        LieType::B => {
            for i in 0..r - 1 {
                g[i][i] = 4;
            }
            g[r - 1][r - 1] = 2;
            for i in 0..r - 1 {
                link(&mut g, i, i + 1, -2);
            }
        }
        LieType::C => {
            for i in 0..r - 1 {
                g[i][i] = 2;
            }
            g[r - 1][r - 1] = 4;
            for i in 0..r - 2 {
                link(&mut g, i, i + 1, -1);
            }
            link(&mut g, r - 2, r - 1, -2);
        }
        LieType::D => {
            for i in 0..r {
                g[i][i] = 2;
            }
            for i in 0..r - 2 {
                link(&mut g, i, i + 1, -1);
            }
            link(&mut g, r - 3, r - 1, -1);
        }
        LieType::E => {
            for i in 0..r {
                g[i][i] = 2;
            }
            link(&mut g, 0, 2, -1);
            link(&mut g, 1, 3, -1);
            for i in 2..r - 1 {
                link(&mut g, i, i + 1, -1);
            }
        }
        LieType::F => {
            g[0][0] = 4;
            g[1][1] = 4;
            g[2][2] = 2;
            g[3][3] = 2;
            link(&mut g, 0, 1, -2);
            link(&mut g, 1, 2, -2);
            link(&mut g, 2, 3, -1);
        }
        LieType::G => {
            g[0][0] = 2;
            g[1][1] = 6;
            link(&mut g, 0, 1, -3);
        }
    }
    g
}

impl RootSystem {
    pub fn new(ty: LieType, r: usize) -> Result<Self> {
        if !ty.is_valid_rank(r) {
            return Err(Error::InvalidArgument(format!("no simple algebra of type {ty}{r}")));
        }
        let gram = simple_gram(ty, r);
        let cartan: Vec<Vec<i64>> = (0..r)
            .map(|i| (0..r).map(|j| 2 * gram[i][j] / gram[j][j]).collect())
            .collect();
        let mut rs = RootSystem {
            label: CartanLabel { ty, rank: r },
            gram,
            cartan,
            positive: Vec::new(),
            index: HashMap::new(),
        };
        rs.generate_positive();
        Ok(rs)
    }

    /// Root strings: `β + α_i` is a root iff `p − ⟨β, α_i^∨⟩ > 0`, where `p`
    /// is the length of the `α_i`-string below `β`.
    fn generate_positive(&mut self) {
        let r = self.rank();
        let mut all: Vec<Root> = Vec::new();
        let mut known: HashMap<Root, ()> = HashMap::new();
        let mut layer: Vec<Root> = (0..r)
            .map(|i| {
                let mut v = vec![0; r];
                v[i] = 1;
                v
            })
            .collect();
        while !layer.is_empty() {
            for b in &layer {
                known.insert(b.clone(), ());
            }
            let mut next: Vec<Root> = Vec::new();
            for b in &layer {
                for i in 0..r {
                    let is_simple_i = b.iter().enumerate().all(|(j, &c)| c == if j == i { 1 } else { 0 });
                    if is_simple_i {
                        continue;
                    }
                    let mut p = 0;
                    let mut down = b.clone();
                    loop {
                        down[i] -= 1;
                        if known.contains_key(&down) {
                            p += 1;
                        } else {
                            break;
                        }
                    }
                    let pairing = 2 * self.inner(b, &unit(r, i)) / self.gram[i][i];
                    if p - pairing > 0 {
                        let mut up = b.clone();
                        up[i] += 1;
                        if !next.contains(&up) {
                            next.push(up);
                        }
                    }
                }
            }
            all.extend(layer);
            layer = next;
        }
        all.sort_by(|a, b| {
            height(a)
                .cmp(&height(b))
                .then_with(|| b.cmp(a))
        });
        self.index = all.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
        self.positive = all;
    }

    pub fn label(&self) -> CartanLabel {
        self.label
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    /// `a_ij = ⟨α_i, α_j^∨⟩ = 2 (α_i, α_j) / (α_j, α_j)`.
    pub fn cartan_matrix(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn positive_roots(&self) -> &[Root] {
        &self.positive
    }

    /// All roots: positive ones in order, then their negatives in the same order.
    pub fn roots(&self) -> Vec<Root> {
        let mut out = self.positive.clone();
        out.extend(self.positive.iter().map(|v| v.iter().map(|x| -x).collect::<Root>()));
        out
    }

    pub fn algebra_dim(&self) -> usize {
        self.rank() + 2 * self.positive.len()
    }

    /// Position of a positive root in the sorted list.
    pub fn positive_index(&self, root: &[i64]) -> Option<usize> {
        self.index.get(root).copied()
    }

    pub fn is_root(&self, v: &[i64]) -> bool {
        if self.index.contains_key(v) {
            return true;
        }
        let neg: Root = v.iter().map(|x| -x).collect();
        self.index.contains_key(&neg)
    }

    pub fn inner(&self, a: &[i64], b: &[i64]) -> i64 {
        let r = self.rank();
        let mut s = 0;
        for i in 0..r {
            if a[i] == 0 {
                continue;
            }
            for j in 0..r {
                s += a[i] * self.gram[i][j] * b[j];
            }
        }
        s
    }
}

pub(crate) fn unit(r: usize, i: usize) -> Root {
    let mut v = vec![0; r];
    v[i] = 1;
    v
}

pub(crate) fn height(v: &[i64]) -> i64 {
    v.iter().sum()
}
