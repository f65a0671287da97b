use rayon::prelude::*;
use serde_json::{json, Value};

use super::{trial_rng, Exemplar, Stream};
use crate::analyze::{nullity_exact, DEFAULT_BUDGET};
use crate::error::{Error, Result};
use crate::exactlin::field::is_prime;
use crate::exactlin::PrimeField;
use crate::exterior::random_form_with;

const SCAN_NOTE: &str = "Frequencies over finite fields are a proxy only: they carry no \
quantitative statement about generic forms over an algebraically closed field, and any \
thresholds read off them are descriptive.";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanConfig {
    pub dims: Vec<usize>,
    pub primes: Vec<u32>,
    pub trials: usize,
    pub seed: u64,
    pub k: usize,
    pub budget: u64,
}

impl ScanConfig {
    /// `n ∈ 4..=9`, `q ∈ {3, 5}`, 100 trials per cell, `k = 2`.
    pub fn default_grid(seed: u64) -> Self {
        ScanConfig {
            dims: (4..=9).collect(),
            primes: vec![3, 5],
            trials: 100,
            seed,
            k: 2,
            budget: DEFAULT_BUDGET,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidArgument("trials must be at least 1".into()));
        }
        if let Some(&q) = self.primes.iter().find(|&&q| q == 2 || !is_prime(q as u64)) {
            return Err(Error::InvalidArgument(format!("{q} is not an odd prime")));
        }
        if self.primes.is_empty() || self.dims.is_empty() {
            return Err(Error::InvalidArgument("empty grid".into()));
        }
        if let Some(&n) = self.dims.iter().find(|&&n| n < 3) {
            return Err(Error::InvalidArgument(format!("3-forms need n ≥ 3, got {n}")));
        }
        if !(2..=3).contains(&self.k) {
            return Err(Error::InvalidArgument(format!("depth k = {} must be 2 or 3", self.k)));
        }
        Ok(())
    }
}

/// Counts for one `(n, q)` cell and the first trial reaching each value.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanCell {
    pub n: usize,
    pub q: u32,
    pub trials: usize,
    pub null1: usize,
    pub null2: usize,
    pub null_ge3: usize,
    pub budget_exceeded: usize,
    /// Projective points visited over all trials.
    pub nodes: u64,
    pub exemplars: Vec<Exemplar>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanReport {
    pub config: ScanConfig,
    pub cells: Vec<ScanCell>,
}

impl ScanReport {
    pub const CSV_HEADER: &'static str = "n,q,trials,null1,null2,null_ge3,budget_exceeded";

    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for c in &self.cells {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                c.n, c.q, c.trials, c.null1, c.null2, c.null_ge3, c.budget_exceeded
            ));
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let c = &self.config;
        json!({
            "schema": "formlab.scan/1",
            "config": {
                "dims": c.dims,
                "primes": c.primes,
                "trials": c.trials,
                "seed": c.seed,
                "k": c.k,
                "budget": c.budget,
            },
            "note": SCAN_NOTE,
            "cells": self.cells.iter().map(|cell| json!({
                "n": cell.n,
                "q": cell.q,
                "trials": cell.trials,
                "null1": cell.null1,
                "null2": cell.null2,
                "null_ge3": cell.null_ge3,
                "budget_exceeded": cell.budget_exceeded,
                "nodes": cell.nodes,
                "exemplars": cell.exemplars.iter().map(Exemplar::to_json).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })
    }
}

enum Outcome {
    Done(Box<Exemplar>),
    OverBudget,
}

fn run_cell(cfg: &ScanConfig, n: usize, q: u32) -> Result<ScanCell> {
    let field = PrimeField::new(q as u64)?;
    let outcomes = (0..cfg.trials)
        .into_par_iter()
        .map(|t| -> Result<Outcome> {
            let mut rng = trial_rng(cfg.seed, Stream::Scan, n, q, cfg.k, t);
            let form = random_form_with(&field, 3, n, 1, &mut rng)?;
            match nullity_exact(&form, cfg.k, cfg.budget) {
                Ok(result) => Ok(Outcome::Done(Box::new(Exemplar { q, trial: t, form, result }))),
                Err(Error::BudgetExceeded { .. }) => Ok(Outcome::OverBudget),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let mut cell = ScanCell {
        n,
        q,
        trials: cfg.trials,
        null1: 0,
        null2: 0,
        null_ge3: 0,
        budget_exceeded: 0,
        nodes: 0,
        exemplars: Vec::new(),
    };
    for outcome in outcomes {
        let ex = match outcome {
            Outcome::OverBudget => {
                cell.budget_exceeded += 1;
                continue;
            }
            Outcome::Done(ex) => *ex,
        };
        let value = ex.value();
        if n >= 4 && n % 2 == 0 && value < 2 {
            return Err(Error::AssertionFailed(format!(
                "even n = {n}, q = {q}, trial {}: nullity {value} below 2",
                ex.trial
            )));
        }
        match value {
            0 | 1 => cell.null1 += 1,
            2 => cell.null2 += 1,
            _ => cell.null_ge3 += 1,
        }
        cell.nodes += ex.result.witness.stats.nodes
            + ex.result.exhausted.as_ref().map_or(0, |c| c.stats.nodes);
        if !cell.exemplars.iter().any(|e| e.value() == value) {
            cell.exemplars.push(ex);
        }
    }
    cell.exemplars.sort_by_key(|e| e.value());
    if cfg.k == 2 && n >= 4 && cell.null2 == 0 {
        return Err(Error::AssertionFailed(format!(
            "no form with nullity 2 among {} trials for n = {n}, q = {q}",
            cfg.trials
        )));
    }
    Ok(cell)
}

/// Samples random scalar 3-forms on every cell of the grid and records exact
/// `k`-nullities.
///
/// Fails if an even `n ≥ 4` produces nullity below 2, or (for `k = 2`) if a
/// cell with `n ≥ 4` has no nullity-2 example. Budget overruns are counted.
pub fn scan_random(cfg: &ScanConfig) -> Result<ScanReport> {
    cfg.validate()?;
    let mut cells = Vec::new();
    for &n in &cfg.dims {
        for &q in &cfg.primes {
            cells.push(run_cell(cfg, n, q)?);
        }
    }
    Ok(ScanReport { config: cfg.clone(), cells })
}
