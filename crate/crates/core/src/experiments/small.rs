use serde_json::{json, Value};

use super::{trial_rng, Exemplar, Stream};
use crate::analyze::nullity_exact;
use crate::error::{Error, Result};
use crate::exactlin::field::is_prime;
use crate::exactlin::PrimeField;
use crate::exterior::{random_form_with, AltForm};

/// Random forms tried before falling back to a fixed construction.
pub const MAX_RANDOM_ATTEMPTS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SmallNullitySource {
    Random,
    /// `e123` for `n = 3` or `e123 + e456` for `n = 6`.
    Construction,
}

impl SmallNullitySource {
    pub fn as_str(&self) -> &'static str {
        match self {
            SmallNullitySource::Random => "random",
            SmallNullitySource::Construction => "construction",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SmallNullity {
    pub target: usize,
    pub attempts: usize,
    pub source: SmallNullitySource,
    pub exemplar: Exemplar,
}

impl SmallNullity {
    pub fn to_json(&self) -> Value {
        json!({
            "schema": "formlab.small-nullity/1",
            "n": self.exemplar.form.dim(),
            "target": self.target,
            "attempts": self.attempts,
            "source": self.source.as_str(),
            "exemplar": self.exemplar.to_json(),
        })
    }
}

fn construction(field: &PrimeField, n: usize) -> Option<AltForm<PrimeField>> {
    let terms: &[(&[usize], i64)] = match n {
        3 => &[(&[1, 2, 3], 1)],
        6 => &[(&[1, 2, 3], 1), (&[4, 5, 6], 1)],
        _ => return None,
    };
    AltForm::from_scalar_terms(field, 3, n, terms).ok()
}

/// Searches for a scalar 3-form on `GF(q)^n` with certified `null_2 ≤ target`.
///
/// Draws up to [`MAX_RANDOM_ATTEMPTS`] seeded random forms, then tries the
/// fixed construction for `n ∈ {3, 6}`. Even `n ≥ 4` with `target < 2` is
/// rejected up front since no such form exists.
pub fn find_small_nullity(n: usize, q: u32, target: usize, seed: u64, budget: u64) -> Result<SmallNullity> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!("3-forms need n ≥ 3, got {n}")));
    }
    if q == 2 || !is_prime(q as u64) {
        return Err(Error::InvalidArgument(format!("{q} is not an odd prime")));
    }
    if n >= 4 && n % 2 == 0 && target < 2 {
        return Err(Error::Precondition(format!(
            "every 3-form in even dimension {n} has nullity at least 2"
        )));
    }
    let field = PrimeField::new(q as u64)?;
    for t in 0..MAX_RANDOM_ATTEMPTS {
        let mut rng = trial_rng(seed, Stream::Small, n, q, target, t);
        let form = random_form_with(&field, 3, n, 1, &mut rng)?;
        let result = match nullity_exact(&form, 2, budget) {
            Ok(r) => r,
            Err(Error::BudgetExceeded { .. }) => continue,
            Err(e) => return Err(e),
        };
        if result.value <= target {
            return Ok(SmallNullity {
                target,
                attempts: t + 1,
                source: SmallNullitySource::Random,
                exemplar: Exemplar { q, trial: t, form, result },
            });
        }
    }
    if let Some(form) = construction(&field, n) {
        let result = nullity_exact(&form, 2, budget)?;
        if result.value <= target {
            return Ok(SmallNullity {
                target,
                attempts: MAX_RANDOM_ATTEMPTS,
                source: SmallNullitySource::Construction,
                exemplar: Exemplar {
                    q,
                    trial: MAX_RANDOM_ATTEMPTS,
                    form,
                    result,
                },
            });
        }
    }
    Err(Error::NotFound(format!(
        "no form with nullity ≤ {target} on GF({q})^{n} after {MAX_RANDOM_ATTEMPTS} attempts"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analyze::DEFAULT_BUDGET;

    #[test]
    fn finds_nullity_two_in_dimension_six() {
        let found = find_small_nullity(6, 3, 2, 0, DEFAULT_BUDGET).unwrap();
        assert_eq!(found.exemplar.value(), 2);
        assert!(found.exemplar.reverify());
    }

    #[test]
    fn constructions_have_expected_nullity() {
        let f3 = PrimeField::new(3).unwrap();
        assert_eq!(nullity_exact(&construction(&f3, 3).unwrap(), 2, DEFAULT_BUDGET).unwrap().value, 1);
        assert_eq!(nullity_exact(&construction(&f3, 6).unwrap(), 2, DEFAULT_BUDGET).unwrap().value, 2);
        assert!(construction(&f3, 5).is_none());
    }

    #[test]
    fn dimension_three_reaches_one() {
        let found = find_small_nullity(3, 3, 1, 2, DEFAULT_BUDGET).unwrap();
        assert_eq!(found.exemplar.value(), 1);
        assert_eq!(found.exemplar.form.num_terms(), 1);
    }

    #[test]
    fn even_dimension_below_two_is_rejected() {
        assert!(matches!(
            find_small_nullity(4, 3, 1, 0, DEFAULT_BUDGET),
            Err(Error::Precondition(_))
        ));
        assert!(find_small_nullity(5, 4, 2, 0, DEFAULT_BUDGET).is_err());
    }

    #[test]
    fn same_seed_same_result() {
        let a = find_small_nullity(7, 5, 2, 9, DEFAULT_BUDGET).unwrap();
        let b = find_small_nullity(7, 5, 2, 9, DEFAULT_BUDGET).unwrap();
        assert_eq!(a.to_json(), b.to_json());
    }
}
