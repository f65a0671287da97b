use serde_json::{json, Value};

use crate::analyze::{certify_rational, RationalBoundCertificate};
use crate::error::{Error, Result};
use crate::exactlin::{Field, Matrix, Rationals, Subspace};
use crate::exterior::AltForm;

/// A maximal 2-vanishing subspace of a scalar 3-form, grown one vector at a
/// time from the first admissible RREF basis vector.
pub fn greedy_vanishing_subspace<F: Field>(f: &AltForm<F>) -> Result<Subspace<F>> {
    if f.arity() != 3 || f.codim() != 1 {
        return Err(Error::InvalidArgument("greedy witness needs a scalar 3-form".into()));
    }
    let field = f.field();
    let n = f.dim();
    let mut chosen: Vec<Vec<F::Elem>> = Vec::new();
    let mut current = Subspace::zero(field, n);
    loop {
        let mut rows = Vec::new();
        for w in &chosen {
            rows.extend(f.a_matrix(w)?.row_vecs());
        }
        let admissible = if rows.is_empty() {
            Subspace::full(field, n)
        } else {
            Matrix::from_rows(field, n, rows)?.kernel_basis()
        };
        let Some(next) = admissible.vectors().into_iter().find(|v| !current.contains(v)) else {
            return Ok(current);
        };
        chosen.push(next);
        current = Subspace::from_vectors(field, n, chosen.clone())?;
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CutBoundReport {
    pub certificate: RationalBoundCertificate,
}

impl CutBoundReport {
    pub fn betti(&self) -> usize {
        self.certificate.n
    }

    pub fn upper(&self) -> usize {
        self.certificate.upper
    }

    /// `b₁ = n, cut number ≤ u`.
    pub fn summary(&self) -> String {
        format!("b₁ = {}, cut number ≤ {}", self.betti(), self.upper())
    }

    pub fn text(&self) -> String {
        format!(
            "{}\nany closed oriented 3-manifold with this cup form has cut number ≤ {}\n",
            self.summary(),
            self.upper()
        )
    }

    pub fn to_json(&self) -> Value {
        json!({
            "schema": "formlab.cut-bound/1",
            "b1": self.betti(),
            "cut_number_upper": self.upper(),
            "summary": self.summary(),
            "certificate": self.certificate.to_json(),
        })
    }
}

/// Bounds the cut number of any 3-manifold with cup form `f` by the certified
/// upper bound on `null_2(f)` over `Q`.
pub fn cut_bound_report(f: &AltForm<Rationals>, primes: &[u64], budget: u64) -> Result<CutBoundReport> {
    let witness = greedy_vanishing_subspace(f)?;
    let certificate = certify_rational(f, 2, primes, &witness, budget)?;
    Ok(CutBoundReport { certificate })
}
