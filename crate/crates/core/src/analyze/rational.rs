//! Rational nullity bounds from a rational witness and prime reductions.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use super::certificate::{subspace_json, NullityCertificate};
use super::search::nullity_exact;
use super::{rank, verify_witness};
use crate::error::{Error, Result};
use crate::exactlin::field::gcd_all;
use crate::exactlin::{PrimeField, Rationals, Subspace};
use crate::exterior::AltForm;

const SPECIALIZATION_NOTE: &str = "A rational witness of dimension r spans a saturated integer lattice \
whose reduction mod p keeps rank r and still satisfies the vanishing equations, so null over GF(p) \
is at least null over Q for every odd p. Hence null over Q lies between the witness dimension and \
the minimum over the listed primes.";

/// Exact nullity of one prime reduction.
#[derive(Debug, Clone, PartialEq)]
pub struct Specialization {
    pub p: u32,
    pub null: usize,
    pub witness: NullityCertificate<PrimeField>,
    pub exhausted: Option<NullityCertificate<PrimeField>>,
}

/// A prime that was not used, with the reason.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkippedPrime {
    pub p: u64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RationalBoundCertificate {
    pub n: usize,
    pub k: usize,
    /// Gcd of the integer coefficients, divided out before reduction.
    pub content: BigInt,
    pub rank_q: usize,
    pub lower_witness: Subspace<Rationals>,
    pub specializations: Vec<Specialization>,
    pub skipped: Vec<SkippedPrime>,
    pub lower: usize,
    pub upper: usize,
}

impl RationalBoundCertificate {
    /// The exact rational nullity when the bounds meet.
    pub fn value(&self) -> Option<usize> {
        (self.lower == self.upper).then_some(self.lower)
    }

    /// Re-checks the lower witness and every per-prime certificate.
    pub fn verify(&self, f: &AltForm<Rationals>) -> bool {
        if self.lower_witness.dim() != self.lower
            || !verify_witness(f, self.k, &self.lower_witness).unwrap_or(false)
        {
            return false;
        }
        let Ok(primitive) = primitive_part(f) else {
            return false;
        };
        self.specializations.iter().all(|s| {
            let Ok(gf) = PrimeField::new(s.p as u64) else {
                return false;
            };
            let Ok(red) = primitive.0.reduce_mod(&gf) else {
                return false;
            };
            s.witness.verify(&red)
                && s.witness.r == s.null
                && s.exhausted
                    .as_ref()
                    .map_or(s.null == self.n, |c| c.r == s.null + 1 && c.verify(&red))
        }) && self.upper >= self.lower
            && self.upper == self.specializations.iter().map(|s| s.null).min().unwrap_or(self.n)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "schema": "formlab.rational-bound/1",
            "n": self.n,
            "k": self.k,
            "content": self.content.to_string(),
            "rank_q": self.rank_q,
            "witness": subspace_json(&self.lower_witness),
            "specializations": self.specializations.iter().map(|s| json!({
                "p": s.p,
                "null": s.null,
                "witness": s.witness.to_json(),
                "exhausted": s.exhausted.as_ref().map_or(Value::Null, |c| c.to_json()),
            })).collect::<Vec<_>>(),
            "skipped": self.skipped.iter().map(|s| json!({"p": s.p, "reason": s.reason})).collect::<Vec<_>>(),
            "conclusion": {"lower": self.lower, "upper": self.upper},
            "note": SPECIALIZATION_NOTE,
        })
    }
}

/// Divides an integral form by the gcd of its coefficients.
fn primitive_part(f: &AltForm<Rationals>) -> Result<(AltForm<Rationals>, BigInt)> {
    if !f.is_integral() {
        return Err(Error::InvalidArgument("form must have integer coefficients".into()));
    }
    let nums: Vec<BigInt> = f
        .terms()
        .flat_map(|(_, v)| v.iter().map(|q| q.numer().clone()))
        .collect();
    let content = gcd_all(&nums);
    if content.is_zero() || content.is_one() {
        return Ok((f.clone(), content));
    }
    let inv = BigRational::new(BigInt::one(), content.clone());
    Ok((f.scale(&inv), content))
}

/// Brackets `null_k` over `Q` between a rational witness and prime reductions.
///
/// Primes whose reduction drops the rank are reported and skipped; the
/// remaining primes are decided in parallel.
pub fn certify_rational(
    f: &AltForm<Rationals>,
    k: usize,
    primes: &[u64],
    witness: &Subspace<Rationals>,
    budget: u64,
) -> Result<RationalBoundCertificate> {
    let (primitive, content) = primitive_part(f)?;
    if !verify_witness(f, k, witness)? {
        return Err(Error::WitnessFails);
    }
    let rank_q = rank(f);
    let mut skipped = Vec::new();
    let mut usable = Vec::new();
    for &p in primes {
        let gf = match PrimeField::new(p) {
            Ok(gf) => gf,
            Err(e) => return Err(Error::InvalidArgument(format!("prime {p}: {e}"))),
        };
        let red = primitive.reduce_mod(&gf)?;
        let rank_p = rank(&red);
        if rank_p < rank_q {
            skipped.push(SkippedPrime {
                p,
                reason: format!("rank drops from {rank_q} to {rank_p} mod {p}"),
            });
        } else {
            usable.push((gf, red));
        }
    }
    let specializations = usable
        .par_iter()
        .map(|(gf, red)| {
            nullity_exact(red, k, budget).map(|res| Specialization {
                p: gf.p(),
                null: res.value,
                witness: res.witness,
                exhausted: res.exhausted,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let lower = witness.dim();
    let upper = specializations.iter().map(|s| s.null).min().unwrap_or(f.dim());
    if upper < lower {
        return Err(Error::Internal(format!(
            "rational witness of dimension {lower} exceeds a prime nullity of {upper}"
        )));
    }
    Ok(RationalBoundCertificate {
        n: f.dim(),
        k,
        content,
        rank_q,
        lower_witness: witness.clone(),
        specializations,
        skipped,
        lower,
        upper,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analyze::DEFAULT_BUDGET;

    #[test]
    fn su2_form_is_certified_at_one() {
        let q = Rationals;
        let f = AltForm::from_scalar_terms(&q, 3, 3, &[(&[1, 2, 3], -16)]).unwrap();
        let w = Subspace::coordinate(&q, 3, &[1]).unwrap();
        let cert = certify_rational(&f, 2, &[3, 5], &w, DEFAULT_BUDGET).unwrap();
        assert_eq!(cert.value(), Some(1));
        assert_eq!(cert.content, BigInt::from(16));
        assert!(cert.verify(&f));
    }

    #[test]
    fn zero_form_with_full_witness() {
        let q = Rationals;
        let f = AltForm::<Rationals>::zero(&q, 3, 4, 1).unwrap();
        let cert = certify_rational(&f, 2, &[3], &Subspace::full(&q, 4), DEFAULT_BUDGET).unwrap();
        assert_eq!(cert.value(), Some(4));
    }

    #[test]
    fn bad_witness_and_bad_primes() {
        let q = Rationals;
        let f = AltForm::from_scalar_terms(&q, 3, 3, &[(&[1, 2, 3], 1)]).unwrap();
        let w = Subspace::coordinate(&q, 3, &[1, 2]).unwrap();
        assert_eq!(certify_rational(&f, 2, &[3], &w, 100).unwrap_err(), Error::WitnessFails);
        let w1 = Subspace::coordinate(&q, 3, &[1]).unwrap();
        assert!(certify_rational(&f, 2, &[2], &w1, 100).is_err());
        let half = AltForm::from_terms(&q, 3, 3, 1, vec![(vec![1, 2, 3], vec![BigRational::new(1.into(), 2.into())])]).unwrap();
        assert!(certify_rational(&half, 2, &[3], &w1, 100).is_err());
    }

    #[test]
    fn degenerate_prime_is_skipped() {
        // 3·e123 + e456 loses rank mod 3 even after removing content 1
        let q = Rationals;
        let f = AltForm::from_scalar_terms(&q, 3, 6, &[(&[1, 2, 3], 3), (&[4, 5, 6], 1)]).unwrap();
        let w = Subspace::coordinate(&q, 6, &[1, 4]).unwrap();
        let cert = certify_rational(&f, 2, &[3, 5], &w, DEFAULT_BUDGET).unwrap();
        assert_eq!(cert.skipped.len(), 1);
        assert_eq!(cert.skipped[0].p, 3);
        assert_eq!(cert.value(), Some(2));
    }
}
