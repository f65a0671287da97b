//! Seeded experiment drivers over random forms. Every report is a pure
//! function of its configuration; worker count only affects wall time.

mod cut;
mod goodwillie;
mod scan;
mod small;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::analyze::NullityResult;
use crate::exactlin::PrimeField;
use crate::exterior::{AltForm, AnyForm};

pub use cut::{cut_bound_report, greedy_vanishing_subspace, CutBoundReport};
pub use goodwillie::{goodwillie_table, GoodwillieReport, GoodwillieRow};
pub use scan::{scan_random, ScanCell, ScanConfig, ScanReport};
pub use small::{find_small_nullity, SmallNullity, SmallNullitySource, MAX_RANDOM_ATTEMPTS};

/// Tags separating the random streams of different experiments.
#[derive(Debug, Clone, Copy)]
enum Stream {
    Scan = 1,
    Small = 2,
    Goodwillie = 3,
}

/// Independent generator for one trial. The stream id packs the experiment,
/// the cell and the trial index, so trials can run in any order.
fn trial_rng(seed: u64, stream: Stream, n: usize, q: u32, extra: usize, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let id = (stream as u64) << 60
        | (n as u64 & 0xff) << 52
        | (extra as u64 & 0xff) << 44
        | (q as u64 & 0xf_ffff) << 24
        | (trial as u64 & 0xff_ffff);
    rng.set_stream(id);
    rng
}

/// A form together with its exact nullity certificates.
#[derive(Debug, Clone, PartialEq)]
pub struct Exemplar {
    pub q: u32,
    pub trial: usize,
    pub form: AltForm<PrimeField>,
    pub result: NullityResult<PrimeField>,
}

impl Exemplar {
    pub fn value(&self) -> usize {
        self.result.value
    }

    /// Re-parses the rendered form and checks both certificates against it.
    pub fn reverify(&self) -> bool {
        let Ok(AnyForm::Prime(parsed)) = AnyForm::parse(&self.form.render()) else {
            return false;
        };
        let witness_ok = self.result.witness.r == self.result.value && self.result.witness.verify(&parsed);
        let exhausted_ok = match &self.result.exhausted {
            Some(c) => c.r == self.result.value + 1 && c.verify(&parsed),
            None => self.result.value == parsed.dim(),
        };
        witness_ok && exhausted_ok
    }

    /// Suggested sidecar file name.
    pub fn file_name(&self, prefix: &str) -> String {
        format!(
            "{prefix}-n{}-m{}-q{}-null{}-t{}.form",
            self.form.dim(),
            self.form.codim(),
            self.q,
            self.result.value,
            self.trial
        )
    }

    pub fn to_json(&self) -> Value {
        json!({
            "q": self.q,
            "trial": self.trial,
            "value": self.result.value,
            "form": self.form.render(),
            "witness": self.result.witness.to_json(),
            "exhausted": self.result.exhausted.as_ref().map_or(Value::Null, |c| c.to_json()),
        })
    }
}
