//! Sampling from discrete probability vectors.

use rand::Rng;

use crate::tol;
use crate::{Error, Result};

/// Draws an index `i` with probability `dist[i]`.
///
/// Entries down to `-1e-12` are clamped to zero, and a total within `1e-6` of
/// one is renormalized. Indices with zero weight are never returned.
pub fn sample_index<R: Rng + ?Sized>(dist: &[f64], rng: &mut R) -> Result<usize> {
    let total = validate(dist)?;
    let u = rng.random::<f64>() * total;
    let mut acc = 0.0;
    let mut last_positive = 0;
    for (i, &w) in dist.iter().enumerate() {
        if w <= 0.0 {
            continue;
        }
        acc += w;
        last_positive = i;
        if u < acc {
            return Ok(i);
        }
    }
    Ok(last_positive)
}

fn validate(dist: &[f64]) -> Result<f64> {
    if dist.is_empty() {
        return Err(Error::InvalidDistribution("empty distribution".into()));
    }
    let mut total = 0.0;
    for (i, &w) in dist.iter().enumerate() {
        if !w.is_finite() || w < -tol::ALGEBRAIC {
            return Err(Error::InvalidDistribution(format!("entry {i} is {w}")));
        }
        total += w.max(0.0);
    }
    if total <= 0.0 {
        return Err(Error::InvalidDistribution("all entries are zero".into()));
    }
    if (total - 1.0).abs() > tol::INPUT {
        return Err(Error::InvalidDistribution(format!("sums to {total}")));
    }
    Ok(total)
}

/// Draws `shots` samples from `dist` and returns the empirical histogram,
/// normalized to frequencies.
pub fn shot_histogram<R: Rng + ?Sized>(dist: &[f64], shots: u32, rng: &mut R) -> Result<Vec<f64>> {
    if shots == 0 {
        return Err(Error::InvalidConfig("shot count must be positive".into()));
    }
    let mut counts = vec![0u32; dist.len()];
    for _ in 0..shots {
        counts[sample_index(dist, rng)?] += 1;
    }
    Ok(counts
        .into_iter()
        .map(|c| c as f64 / shots as f64)
        .collect())
}
