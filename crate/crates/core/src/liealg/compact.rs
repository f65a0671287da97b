use std::collections::BTreeMap;
use std::ops::{Add, Mul};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::chevalley::{ChevalleyData, ChevalleyElem};
use crate::error::{Error, Result};
use crate::exactlin::{Rationals, Subspace};
use crate::exterior::AltForm;

/// Exact Gaussian rational `re + i·im`.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Gauss {
    re: BigRational,
    im: BigRational,
}

impl Gauss {
    fn real(v: i64) -> Self {
        Gauss {
            re: BigRational::from_integer(BigInt::from(v)),
            im: BigRational::zero(),
        }
    }

    fn imag(v: i64) -> Self {
        Gauss {
            re: BigRational::zero(),
            im: BigRational::from_integer(BigInt::from(v)),
        }
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl Add for &Gauss {
    type Output = Gauss;
    fn add(self, o: &Gauss) -> Gauss {
        Gauss {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
        }
    }
}

impl Mul for &Gauss {
    type Output = Gauss;
    fn mul(self, o: &Gauss) -> Gauss {
        Gauss {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}

/// Element of the complexified algebra as a sparse Gaussian combination.
type ComplexVec = Vec<(usize, Gauss)>;

/// The integer triple form `κ(x, [y, z])` on the compact real form.
#[derive(Debug, Clone)]
pub struct CompactTripleForm {
    pub form: AltForm<Rationals>,
    /// Span of the `iH_i` coordinates, a 2-vanishing subspace of dimension `rank`.
    pub cartan_witness: Subspace<Rationals>,
    pub labels: Vec<String>,
}

fn root_label(a: &[i64]) -> String {
    let parts: Vec<String> = a.iter().map(|x| x.to_string()).collect();
    format!("X({})", parts.join(","))
}

/// Compact basis: `iH_i`, then per positive root `X_α − X_{−α}` and `i(X_α + X_{−α})`.
fn compact_basis(cd: &ChevalleyData) -> (Vec<ComplexVec>, Vec<String>) {
    let r = cd.root_system().rank();
    let np = cd.root_system().positive_roots().len();
    let mut vecs = Vec::new();
    let mut labels = Vec::new();
    for i in 0..r {
        vecs.push(vec![(i, Gauss::imag(1))]);
        labels.push(format!("iH{}", i + 1));
    }
    for a in 0..np {
        let (pos, neg) = (r + a, r + np + a);
        let (ChevalleyElem::Root(alpha), ChevalleyElem::Root(minus)) = (&cd.basis()[pos], &cd.basis()[neg]) else {
            unreachable!("root block of the Chevalley basis");
        };
        vecs.push(vec![(pos, Gauss::real(1)), (neg, Gauss::real(-1))]);
        labels.push(format!("{}-{}", root_label(alpha), root_label(minus)));
        vecs.push(vec![(pos, Gauss::imag(1)), (neg, Gauss::imag(1))]);
        labels.push(format!("i({}+{})", root_label(alpha), root_label(minus)));
    }
    (vecs, labels)
}

fn complex_bracket(cd: &ChevalleyData, x: &ComplexVec, y: &ComplexVec) -> ComplexVec {
    let mut acc: BTreeMap<usize, Gauss> = BTreeMap::new();
    for (i, a) in x {
        for (j, b) in y {
            let ab = a * b;
            for &(k, c) in cd.bracket_basis(*i, *j) {
                let term = &ab * &Gauss::real(c);
                let slot = acc.entry(k).or_insert_with(|| Gauss::real(0));
                *slot = &*slot + &term;
            }
        }
    }
    acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
}

fn complex_killing(cd: &ChevalleyData, x: &ComplexVec, y: &ComplexVec) -> Gauss {
    let mut acc = Gauss::real(0);
    for (i, a) in x {
        for (j, b) in y {
            let k = cd.killing()[*i][*j];
            if k != 0 {
                acc = &acc + &(&(a * b) * &Gauss::real(k));
            }
        }
    }
    acc
}

/// Builds `Ψ(x, y, z) = κ(x, [y, z])` on the compact basis.
///
/// Fails if any value is non-integral or has a nonzero imaginary part.
pub fn compact_triple(cd: &ChevalleyData) -> Result<CompactTripleForm> {
    let (basis, labels) = compact_basis(cd);
    let n = basis.len();
    let q = Rationals;
    let mut form = AltForm::zero(&q, 3, n, 1)?;
    for b in 0..n {
        for c in b + 1..n {
            let yz = complex_bracket(cd, &basis[b], &basis[c]);
            if yz.is_empty() {
                continue;
            }
            for a in 0..b {
                let v = complex_killing(cd, &basis[a], &yz);
                if !v.im.is_zero() || !v.re.is_integer() {
                    return Err(Error::Internal(format!(
                        "triple ({a},{b},{c}) evaluates to {} + {}i",
                        v.re, v.im
                    )));
                }
                if !v.re.is_zero() {
                    form.add_term(vec![a + 1, b + 1, c + 1], vec![v.re])?;
                }
            }
        }
    }
    let r = cd.root_system().rank();
    let cartan: Vec<usize> = (1..=r).collect();
    let cartan_witness = Subspace::coordinate(&q, n, &cartan)?;
    Ok(CompactTripleForm {
        form,
        cartan_witness,
        labels,
    })
}

/// Checks full alternation of a triple form against direct evaluation of
/// `κ(x,[y,z])` on every ordered basis triple.
pub fn check_alternating(cd: &ChevalleyData, t: &CompactTripleForm) -> Result<()> {
    let (basis, _) = compact_basis(cd);
    let n = basis.len();
    let unit = |i: usize| -> Vec<BigRational> {
        (0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect()
    };
    for a in 0..n {
        for b in 0..n {
            let yz_needed = (0..n).any(|c| c != a && c != b);
            if !yz_needed {
                continue;
            }
            for c in 0..n {
                let yz = complex_bracket(cd, &basis[b], &basis[c]);
                let direct = complex_killing(cd, &basis[a], &yz);
                let stored = t.form.eval(&[unit(a), unit(b), unit(c)])?;
                if !direct.im.is_zero() || direct.re != stored[0] {
                    return Err(Error::Internal(format!("triple form not alternating at ({a},{b},{c})")));
                }
            }
        }
    }
    Ok(())
}
