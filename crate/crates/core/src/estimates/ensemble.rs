//! Randomized sup-ratio ensembles with a resolution ladder.

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use super::ratio::{estimate_ratio, EstimateId, EstimateInput, Harness};
use crate::data::{random_data_stream, rng_for, DataProfile};
use crate::error::{LabError, Result};

/// Streams reserved per trial: one per input for the data, one per input for the time modulation.
const STREAMS_PER_TRIAL: u64 = 16;
const MODULATION_OFFSET: u64 = 8;

/// Outcome of an ensemble run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioReport {
    pub estimate: EstimateId,
    pub profile: String,
    pub seed: u64,
    pub trials: usize,
    /// Ratio per trial in trial order; `None` records a failed trial.
    pub ratios: Vec<Option<f64>>,
    /// Error text for failed trials, in trial order.
    pub failures: Vec<(usize, String)>,
    pub max_ratio: f64,
    pub argmax: usize,
    /// `(n, ratio)` for the argmax trial at `n`, `2n`, `4n`.
    pub ladder: Vec<(usize, f64)>,
}

impl RatioReport {
    pub fn finite_ratios(&self) -> impl Iterator<Item = f64> + '_ {
        self.ratios.iter().flatten().copied()
    }

    pub fn min_ratio(&self) -> f64 {
        self.finite_ratios().fold(f64::INFINITY, f64::min)
    }

    pub fn mean_ratio(&self) -> f64 {
        let (s, k) = self.finite_ratios().fold((0.0, 0usize), |(s, k), r| (s + r, k + 1));
        s / k as f64
    }

    /// Largest relative change between consecutive ladder rungs.
    pub fn ladder_drift(&self) -> f64 {
        self.ladder
            .windows(2)
            .map(|w| (w[1].1 - w[0].1).abs() / w[0].1.abs().max(f64::MIN_POSITIVE))
            .fold(0.0, f64::max)
    }
}

/// Inputs for trial `trial`, drawn on the harness lattice.
///
/// Data depends only on `(seed, trial, input)`, so refined harnesses see the same functions.
pub fn trial_inputs(
    id: &EstimateId,
    profile: &DataProfile,
    seed: u64,
    trial: usize,
    h: &Harness,
) -> Result<Vec<EstimateInput>> {
    let base = trial as u64 * STREAMS_PER_TRIAL;
    (0..id.tag.arity() as u64)
        .map(|i| {
            let u0 = random_data_stream(profile, seed, base + i, h.grid)?;
            if id.tag.takes_free_data() {
                return Ok(EstimateInput::Data(u0));
            }
            let mut rng = rng_for(seed, base + MODULATION_OFFSET + i);
            let kappa: f64 = rng.random_range(0.0..4.0);
            let phi: f64 = rng.random_range(0.0..2.0 * PI);
            let amp = 0.5;
            let free = h.windowed_free(&u0)?;
            Ok(EstimateInput::Trajectory(
                free.modulated_in_time(|t| Complex64::new(1.0, 0.0) + Complex64::from_polar(amp, kappa * t + phi)),
            ))
        })
        .collect()
}

/// Ensemble on the baseline harness with a three-rung ladder.
pub fn ensemble_sup_ratio(id: &EstimateId, trials: usize, seed: u64, profile: &DataProfile) -> Result<RatioReport> {
    ensemble_sup_ratio_with(id, trials, seed, profile, &Harness::baseline(), 3)
}

/// Ensemble on `h`; the argmax trial is re-evaluated on `rungs` lattices refined by powers of two.
pub fn ensemble_sup_ratio_with(
    id: &EstimateId,
    trials: usize,
    seed: u64,
    profile: &DataProfile,
    h: &Harness,
    rungs: usize,
) -> Result<RatioReport> {
    if trials == 0 {
        return Err(LabError::param("trials", "an ensemble needs at least one trial"));
    }
    id.check_hypotheses()?;
    let outcomes: Vec<Result<f64>> = (0..trials)
        .into_par_iter()
        .map(|k| {
            let inputs = trial_inputs(id, profile, seed, k, h)?;
            let r = estimate_ratio(id, &inputs, h)?;
            if r.is_finite() && r >= 0.0 {
                Ok(r)
            } else {
                Err(LabError::NonFinite { what: "ratio", index: k })
            }
        })
        .collect();
    let mut ratios = Vec::with_capacity(trials);
    let mut failures = Vec::new();
    for (k, o) in outcomes.into_iter().enumerate() {
        match o {
            Ok(r) => ratios.push(Some(r)),
            Err(e) => {
                log::warn!("{} trial {k} failed: {e}", id.tag);
                failures.push((k, e.to_string()));
                ratios.push(None);
            }
        }
    }
    let (argmax, max_ratio) = ratios
        .iter()
        .enumerate()
        .filter_map(|(k, r)| r.map(|r| (k, r)))
        .fold((0, f64::NAN), |(ka, a), (k, r)| if a.is_nan() || r > a { (k, r) } else { (ka, a) });
    let mut ladder = Vec::new();
    if !max_ratio.is_nan() {
        for j in 0..rungs {
            let hj = h.refined(1 << j);
            let r = if j == 0 {
                max_ratio
            } else {
                estimate_ratio(id, &trial_inputs(id, profile, seed, argmax, &hj)?, &hj)?
            };
            ladder.push((hj.grid.points(), r));
        }
    }
    Ok(RatioReport {
        estimate: *id,
        profile: profile.tag().to_string(),
        seed,
        trials,
        ratios,
        failures,
        max_ratio,
        argmax,
        ladder,
    })
}
