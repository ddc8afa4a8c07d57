//! Monte Carlo draws of final configurations from an experiment's
//! outcome distribution.

use rand::distributions::{Distribution, WeightedIndex};

use crate::error::{Error, Result};
use crate::exchange::ExchangeClass;
use crate::experiment::{run_experiment_for, ExperimentSpec, Finals};
use crate::random::seeded;
use crate::sequence::Configuration;

pub const NORMALIZATION_TOLERANCE: f64 = 1e-6;

/// Draws `draws` final configurations for one exchange class. Returns every
/// final configuration in canonical order with its count (zeros included).
pub fn sample_outcomes(
    spec: &ExperimentSpec,
    class: ExchangeClass,
    draws: usize,
    seed: u64,
) -> Result<Vec<(Configuration, usize)>> {
    if !matches!(spec.finals, Finals::All) {
        return Err(Error::Validation("sampling needs finals = \"all\"".into()));
    }
    let table = run_experiment_for(spec, &[class])?;
    let outcomes: Vec<(Configuration, f64)> =
        table.rows.into_iter().map(|r| (r.final_configuration, r.probability)).collect();
    let sum: f64 = outcomes.iter().map(|(_, p)| p).sum();
    if (sum - 1.0).abs() > NORMALIZATION_TOLERANCE {
        return Err(Error::Normalization { sum });
    }
    let mut counts = vec![0usize; outcomes.len()];
    if draws > 0 {
        let dist = WeightedIndex::new(outcomes.iter().map(|(_, p)| *p))
            .map_err(|e| Error::Validation(format!("cannot sample: {e}")))?;
        let mut rng = seeded(seed);
        for _ in 0..draws {
            counts[dist.sample(&mut rng)] += 1;
        }
    }
    Ok(outcomes.into_iter().map(|(c, _)| c).zip(counts).collect())
}
