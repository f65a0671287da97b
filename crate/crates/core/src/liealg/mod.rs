//! Root systems, Chevalley bases, Killing forms, and the integer triple form
//! of a compact simple Lie algebra.

mod chevalley;
mod compact;
mod roots;

pub use chevalley::{ChevalleyData, ChevalleyElem, SparseVec};
pub use compact::{check_alternating, compact_triple, CompactTripleForm};
pub use roots::{CartanLabel, LieType, Root, RootSystem};

use crate::analyze::{certify_rational, RationalBoundCertificate};
use crate::error::Result;

/// Triple form of the compact algebra of the given type.
pub fn lie_triple_form(label: CartanLabel) -> Result<(ChevalleyData, CompactTripleForm)> {
    let rs = RootSystem::new(label.ty, label.rank)?;
    let cd = ChevalleyData::new(&rs)?;
    let t = compact_triple(&cd)?;
    Ok((cd, t))
}

/// Certifies the rational 2-nullity of a compact triple form using its
/// Cartan witness and the given prime reductions.
pub fn lie_nullity_certificate(
    label: CartanLabel,
    primes: &[u64],
    budget: u64,
) -> Result<(CompactTripleForm, RationalBoundCertificate)> {
    let (_, t) = lie_triple_form(label)?;
    let cert = certify_rational(&t.form, 2, primes, &t.cartan_witness, budget)?;
    Ok((t, cert))
}
