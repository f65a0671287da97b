use serde_json::{json, Value};

use super::verify_witness;
use crate::exactlin::enumerate::projective_count;
use crate::exactlin::{Field, FieldCtx, Subspace};
use crate::exterior::AltForm;

pub const CERTIFICATE_SCHEMA: &str = "formlab.nullity/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertificateKind {
    /// An explicit subspace proving `null_k ≥ r`.
    Witness,
    /// A complete search proving `null_k < r`.
    Exhausted,
}

impl CertificateKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            CertificateKind::Witness => "witness",
            CertificateKind::Exhausted => "exhausted",
        }
    }
}

/// Enumeration counters for a decision run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SearchStats {
    /// Top-level projective points visited.
    pub points: u64,
    /// Projective points visited at every depth.
    pub nodes: u64,
    /// Dimension of the projective space enumerated at the top level.
    pub search_dim: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NullityCertificate<F: Field> {
    pub kind: CertificateKind,
    pub k: usize,
    pub r: usize,
    pub field: FieldCtx,
    pub witness: Option<Subspace<F>>,
    pub stats: SearchStats,
}

impl<F: Field> NullityCertificate<F> {
    /// Re-checks the certificate against `f`.
    ///
    /// A witness is re-verified from scratch. An exhaustion record is checked
    /// for completeness: its top-level count must equal the size of the
    /// projective space it claims to have covered.
    pub fn verify(&self, f: &AltForm<F>) -> bool {
        match self.kind {
            CertificateKind::Witness => self.witness.as_ref().is_some_and(|w| {
                w.dim() == self.r && verify_witness(f, self.k, w).unwrap_or(false)
            }),
            CertificateKind::Exhausted => match self.field {
                FieldCtx::PrimeField(p) => {
                    self.witness.is_none()
                        && self.stats.points as u128 == projective_count(p as u64, self.stats.search_dim)
                }
                FieldCtx::Rationals => false,
            },
        }
    }

    pub fn to_json(&self) -> Value {
        let witness = self.witness.as_ref().map_or(Value::Null, subspace_json);
        json!({
            "schema": CERTIFICATE_SCHEMA,
            "kind": self.kind.as_str(),
            "k": self.k,
            "r": self.r,
            "field": self.field.flag(),
            "witness": witness,
            "stats": {
                "points": self.stats.points,
                "nodes": self.stats.nodes,
                "search_dim": self.stats.search_dim,
            },
        })
    }
}

/// JSON for a field element: numbers for residues, strings for rationals.
pub fn elem_json<F: Field>(f: &F, x: &F::Elem) -> Value {
    let text = f.format_elem(x);
    match f.ctx() {
        FieldCtx::PrimeField(_) => Value::from(text.parse::<u64>().expect("residue")),
        FieldCtx::Rationals => Value::String(text),
    }
}

/// JSON rows of a subspace basis.
pub fn subspace_json<F: Field>(w: &Subspace<F>) -> Value {
    Value::Array(
        w.vectors()
            .iter()
            .map(|row| Value::Array(row.iter().map(|x| elem_json(w.field(), x)).collect()))
            .collect(),
    )
}
