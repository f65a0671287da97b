//! Exact scalar fields: odd prime fields and arbitrary-precision rationals.

use std::fmt::{self, Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest admissible prime modulus (exclusive).
pub const MAX_PRIME: u64 = 1 << 31;

/// Runtime description of a scalar field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldCtx {
    Rationals,
    PrimeField(u32),
}

impl FieldCtx {
    /// Validated prime field. Rejects 2, composites, and moduli `>= 2^31`.
    pub fn prime(p: u64) -> Result<Self> {
        PrimeField::new(p).map(|f| FieldCtx::PrimeField(f.p()))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, FieldCtx::PrimeField(_))
    }

    /// Parses the command-line spelling: `Q` or `gf:<p>`.
    pub fn parse_flag(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("q") {
            return Ok(FieldCtx::Rationals);
        }
        let digits = t
            .strip_prefix("gf:")
            .or_else(|| t.strip_prefix("GF:"))
            .ok_or_else(|| Error::InvalidField(format!("expected `Q` or `gf:<p>`, got `{s}`")))?;
        let p: u64 = digits
            .parse()
            .map_err(|_| Error::InvalidField(format!("bad modulus `{digits}`")))?;
        FieldCtx::prime(p)
    }

    /// Inverse of [`FieldCtx::parse_flag`].
    pub fn flag(&self) -> String {
        match self {
            FieldCtx::Rationals => "Q".to_string(),
            FieldCtx::PrimeField(p) => format!("gf:{p}"),
        }
    }
}

impl Display for FieldCtx {
    /// File-format spelling: `Q` or `gf <p>`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldCtx::Rationals => write!(f, "Q"),
            FieldCtx::PrimeField(p) => write!(f, "gf {p}"),
        }
    }
}

/// Deterministic primality test by trial division; fine for `p < 2^31`.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p % 2 == 0 {
        return p == 2;
    }
    let mut d = 3u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// A field with exact arithmetic.
///
/// Elements are plain values; all operations go through the field object so
/// that prime-field elements can stay bare `u32` residues.
pub trait Field: Clone + Debug + PartialEq + Send + Sync + 'static {
    type Elem: Clone + Debug + PartialEq + Eq + Hash + Send + Sync;

    fn ctx(&self) -> FieldCtx;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn from_bigint(&self, v: &BigInt) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    /// Canonical text: residues in `[0, p)`, or reduced `a/b` / integers.
    fn format_elem(&self, a: &Self::Elem) -> String;

    /// Accepts an integer or `a/b`.
    fn parse_elem(&self, s: &str) -> Option<Self::Elem>;

    /// The element as a residue in `[0, p)`, for prime fields only.
    fn as_residue(&self, _a: &Self::Elem) -> Option<u32> {
        None
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    /// `acc + a*b`
    fn mul_add(&self, acc: &Self::Elem, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(acc, &self.mul(a, b))
    }
}

/// `GF(p)` for an odd prime `p < 2^31`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p == 2 {
            return Err(Error::InvalidField(
                "characteristic 2 is not supported".to_string(),
            ));
        }
        if p >= MAX_PRIME {
            return Err(Error::InvalidField(format!("modulus {p} must be below 2^31")));
        }
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        Ok(PrimeField { p: p as u32 })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn reduce_i64(&self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    /// Image of a rational; `None` when the denominator vanishes mod `p`.
    pub fn from_rational(&self, q: &BigRational) -> Option<u32> {
        let num = self.from_bigint(q.numer());
        let den = self.from_bigint(q.denom());
        self.div(&num, &den)
    }
}

impl Field for PrimeField {
    type Elem = u32;

    fn ctx(&self) -> FieldCtx {
        FieldCtx::PrimeField(self.p)
    }

    #[inline]
    fn zero(&self) -> u32 {
        0
    }

    #[inline]
    fn one(&self) -> u32 {
        1
    }

    fn from_i64(&self, v: i64) -> u32 {
        self.reduce_i64(v)
    }

    fn from_bigint(&self, v: &BigInt) -> u32 {
        let r = v.mod_floor(&BigInt::from(self.p));
        r.to_u32().expect("residue fits in u32")
    }

    #[inline]
    fn add(&self, a: &u32, b: &u32) -> u32 {
        let s = *a as u64 + *b as u64;
        let p = self.p as u64;
        (if s >= p { s - p } else { s }) as u32
    }

    #[inline]
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        if a >= b {
            a - b
        } else {
            (*a as u64 + self.p as u64 - *b as u64) as u32
        }
    }

    #[inline]
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 * *b as u64) % self.p as u64) as u32
    }

    #[inline]
    fn neg(&self, a: &u32) -> u32 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }

    fn inv(&self, a: &u32) -> Option<u32> {
        if *a == 0 {
            return None;
        }
        // extended Euclid on (a, p)
        let (mut r0, mut r1) = (self.p as i64, *a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        Some(self.reduce_i64(t0))
    }

    #[inline]
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }

    fn format_elem(&self, a: &u32) -> String {
        a.to_string()
    }

    fn as_residue(&self, a: &u32) -> Option<u32> {
        Some(*a)
    }

    fn parse_elem(&self, s: &str) -> Option<u32> {
        let q = parse_rational(s)?;
        self.from_rational(&q)
    }

    #[inline]
    fn mul_add(&self, acc: &u32, a: &u32, b: &u32) -> u32 {
        ((*acc as u64 + *a as u64 * *b as u64) % self.p as u64) as u32
    }
}

/// The rational numbers with arbitrary-precision numerator and denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn ctx(&self) -> FieldCtx {
        FieldCtx::Rationals
    }

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_bigint(&self, v: &BigInt) -> BigRational {
        BigRational::from_integer(v.clone())
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }

    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }

    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }

    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }

    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }

    fn format_elem(&self, a: &BigRational) -> String {
        if a.is_integer() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }

    fn parse_elem(&self, s: &str) -> Option<BigRational> {
        parse_rational(s)
    }
}

/// Parses `n` or `a/b` into a reduced rational with positive denominator.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        None => BigInt::from_str(s).ok().map(BigRational::from_integer),
        Some((a, b)) => {
            let a = BigInt::from_str(a.trim()).ok()?;
            let b = BigInt::from_str(b.trim()).ok()?;
            if b.is_zero() {
                None
            } else {
                Some(BigRational::new(a, b))
            }
        }
    }
}

/// True if every element is an integer.
pub fn all_integral<'a>(vals: impl IntoIterator<Item = &'a BigRational>) -> bool {
    vals.into_iter().all(|q| q.is_integer())
}

/// Non-negative gcd of a list of integers (zero for the empty list).
pub fn gcd_all<'a>(vals: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    vals.into_iter()
        .fold(BigInt::zero(), |g, v| g.gcd(v))
        .abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_characteristic_two_and_composites() {
        assert!(PrimeField::new(2).is_err());
        assert!(PrimeField::new(9).is_err());
        assert!(PrimeField::new(1).is_err());
        assert!(PrimeField::new(1 << 31).is_err());
        assert_eq!(PrimeField::new(2_147_483_647).unwrap().p(), 2_147_483_647);
        assert_eq!(PrimeField::new(3).unwrap().p(), 3);
        assert_eq!(PrimeField::new(2_147_483_629).unwrap().p(), 2_147_483_629);
    }

    #[test]
    fn prime_field_inverses() {
        for p in [3u64, 5, 7, 101, 65_537] {
            let f = PrimeField::new(p).unwrap();
            for a in 1..p.min(500) as u32 {
                let ai = f.inv(&a).unwrap();
                assert_eq!(f.mul(&a, &ai), 1, "p={p} a={a}");
            }
            assert_eq!(f.inv(&0), None);
        }
    }

    #[test]
    fn large_prime_arithmetic_does_not_overflow() {
        let f = PrimeField::new(2_147_483_629).unwrap();
        let a = f.p() - 1;
        assert_eq!(f.mul(&a, &a), 1);
        assert_eq!(f.add(&a, &a), f.p() - 2);
        assert_eq!(f.sub(&0, &a), 1);
        assert_eq!(f.mul_add(&a, &a, &a), 0);
    }

    #[test]
    fn rational_parse_and_format_are_canonical() {
        let q = Rationals;
        let x = q.parse_elem("6/-4").unwrap();
        assert_eq!(q.format_elem(&x), "-3/2");
        assert_eq!(q.format_elem(&q.parse_elem("10/5").unwrap()), "2");
        assert!(q.parse_elem("1/0").is_none());
        assert!(q.parse_elem("x").is_none());
    }

    #[test]
    fn prime_field_parses_fractions() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(f.parse_elem("1/2"), Some(4));
        assert_eq!(f.parse_elem("-1"), Some(6));
        assert_eq!(f.parse_elem("1/7"), None);
    }

    #[test]
    fn field_flag_spellings() {
        assert_eq!(FieldCtx::parse_flag("Q").unwrap(), FieldCtx::Rationals);
        assert_eq!(FieldCtx::parse_flag("gf:5").unwrap(), FieldCtx::PrimeField(5));
        assert!(FieldCtx::parse_flag("gf:2").is_err());
        assert_eq!(FieldCtx::PrimeField(5).to_string(), "gf 5");
    }
}
