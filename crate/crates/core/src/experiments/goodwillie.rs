use rayon::prelude::*;
use serde_json::{json, Value};

use super::{trial_rng, Exemplar, Stream};
use crate::analyze::nullity_exact;
use crate::error::{Error, Result};
use crate::exactlin::field::is_prime;
use crate::exactlin::PrimeField;
use crate::exterior::random_form_with;

/// Frequencies for one `(q, m)` pair of random `Φ: ⋀²K^n → K^m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoodwillieRow {
    pub q: u32,
    pub m: usize,
    pub trials: usize,
    pub null1: usize,
    pub null_ge2: usize,
    pub budget_exceeded: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GoodwillieReport {
    pub n: usize,
    pub primes: Vec<u32>,
    pub trials: usize,
    pub seed: u64,
    pub budget: u64,
    pub rows: Vec<GoodwillieRow>,
    /// First nullity-1 form found at `m = 2n − 3`, scanning primes in order.
    pub witness: Option<Exemplar>,
}

impl GoodwillieReport {
    pub const CSV_HEADER: &'static str = "n,m,q,trials,null1,null_ge2,budget_exceeded";

    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                self.n, r.m, r.q, r.trials, r.null1, r.null_ge2, r.budget_exceeded
            ));
        }
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "schema": "formlab.goodwillie/1",
            "n": self.n,
            "primes": self.primes,
            "trials": self.trials,
            "seed": self.seed,
            "budget": self.budget,
            "rows": self.rows.iter().map(|r| json!({
                "m": r.m,
                "q": r.q,
                "trials": r.trials,
                "null1": r.null1,
                "null_ge2": r.null_ge2,
                "budget_exceeded": r.budget_exceeded,
            })).collect::<Vec<_>>(),
            "witness": self.witness.as_ref().map_or(Value::Null, Exemplar::to_json),
        })
    }
}

/// Nullity frequencies of random vector-valued 2-forms for `m = 1 ..= 2n − 2`.
///
/// Fails unless some listed prime yields a form with nullity 1 at `m = 2n − 3`.
pub fn goodwillie_table(n: usize, primes: &[u32], trials: usize, seed: u64, budget: u64) -> Result<GoodwillieReport> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("2-forms need n ≥ 2, got {n}")));
    }
    if trials == 0 || primes.is_empty() {
        return Err(Error::InvalidArgument("need at least one prime and one trial".into()));
    }
    if let Some(&q) = primes.iter().find(|&&q| q == 2 || !is_prime(q as u64)) {
        return Err(Error::InvalidArgument(format!("{q} is not an odd prime")));
    }
    let critical = 2 * n - 3;
    let mut rows = Vec::new();
    let mut witness: Option<Exemplar> = None;
    for &q in primes {
        let field = PrimeField::new(q as u64)?;
        for m in 1..=2 * n - 2 {
            let outcomes = (0..trials)
                .into_par_iter()
                .map(|t| -> Result<Option<Exemplar>> {
                    let mut rng = trial_rng(seed, Stream::Goodwillie, n, q, m, t);
                    let form = random_form_with(&field, 2, n, m, &mut rng)?;
                    match nullity_exact(&form, 2, budget) {
                        Ok(result) => Ok(Some(Exemplar { q, trial: t, form, result })),
                        Err(Error::BudgetExceeded { .. }) => Ok(None),
                        Err(e) => Err(e),
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            let mut row = GoodwillieRow {
                q,
                m,
                trials,
                null1: 0,
                null_ge2: 0,
                budget_exceeded: 0,
            };
            for ex in outcomes {
                match ex {
                    None => row.budget_exceeded += 1,
                    Some(ex) if ex.value() >= 2 => row.null_ge2 += 1,
                    Some(ex) => {
                        row.null1 += 1;
                        if m == critical && witness.is_none() {
                            witness = Some(ex);
                        }
                    }
                }
            }
            rows.push(row);
        }
    }
    if witness.is_none() {
        return Err(Error::AssertionFailed(format!(
            "no nullity-1 form ⋀²K^{n} → K^{critical} found over primes {primes:?}"
        )));
    }
    Ok(GoodwillieReport {
        n,
        primes: primes.to_vec(),
        trials,
        seed,
        budget,
        rows,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analyze::DEFAULT_BUDGET;

    #[test]
    fn critical_codimension_has_nullity_one_witness() {
        let report = goodwillie_table(4, &[3, 5, 7], 20, 1, DEFAULT_BUDGET).unwrap();
        let w = report.witness.as_ref().unwrap();
        assert_eq!((w.form.dim(), w.form.codim(), w.value()), (4, 5, 1));
        assert!(w.reverify());
        assert_eq!(report.rows.len(), 3 * 6);
    }

    #[test]
    fn single_two_form_always_has_isotropic_plane() {
        let report = goodwillie_table(4, &[3], 50, 2, DEFAULT_BUDGET).unwrap();
        let m1 = report.rows.iter().find(|r| r.m == 1).unwrap();
        assert_eq!(m1.null_ge2, 50);
    }

    #[test]
    fn table_is_deterministic() {
        let a = goodwillie_table(3, &[3, 5], 10, 8, DEFAULT_BUDGET).unwrap();
        let b = goodwillie_table(3, &[3, 5], 10, 8, DEFAULT_BUDGET).unwrap();
        assert_eq!(a.to_csv(), b.to_csv());
        assert_eq!(a.to_json(), b.to_json());
    }
}
