//! Continuous ant lion mechanics: cumulative-sum random walks, trap bounds
//! around an antlion, the shrinking ratio and roulette-wheel selection.
//!
//! The search domain is `[0, 1]` per dimension, so a binary position embeds
//! as its bits read as `0.0` / `1.0`.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Added to each fitness before inversion in [`roulette_select`].
pub const ROULETTE_EPSILON: f64 = 1e-10;

/// `(fraction of max iterations, w)`; `w` applies once `t / T` strictly
/// exceeds the fraction.
pub const W_SCHEDULE: [(f64, i32); 5] = [(0.1, 2), (0.5, 3), (0.75, 4), (0.9, 5), (0.95, 6)];

/// Per-dimension walk interval `[lower, upper]`.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkBounds {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl WalkBounds {
    /// The whole domain `[0, 1]^n`.
    pub fn unit(n: usize) -> Self {
        Self { lower: vec![0.0; n], upper: vec![1.0; n] }
    }

    pub fn len(&self) -> usize {
        self.lower.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lower.is_empty()
    }
}

/// How the shrinking ratio grows once `t / T` passes the first threshold of
/// [`W_SCHEDULE`]. Both give `I = 1` up to `0.1 T`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RatioSchedule {
    /// `1 + 10^w * t / T`.
    #[default]
    Linear,
    /// `10^(w * t / T)`, a much slower shrink.
    Power,
}

impl RatioSchedule {
    pub fn name(self) -> &'static str {
        match self {
            Self::Linear => "linear",
            Self::Power => "power",
        }
    }

    /// The ratio `I` at iteration `t` of `max_t`.
    pub fn ratio(self, t: usize, max_t: usize) -> Result<f64> {
        if t == 0 || t > max_t {
            return Err(Error::IterationOutOfRange { t, max: max_t });
        }
        let frac = t as f64 / max_t as f64;
        let w = W_SCHEDULE.iter().rev().find(|&&(threshold, _)| frac > threshold).map(|&(_, w)| w);
        Ok(match (self, w) {
            (_, None) => 1.0,
            (Self::Linear, Some(w)) => 1.0 + 10f64.powi(w) * frac,
            (Self::Power, Some(w)) => 10f64.powf(f64::from(w) * frac),
        })
    }
}

impl fmt::Display for RatioSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RatioSchedule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "linear" => Ok(Self::Linear),
            "power" => Ok(Self::Power),
            _ => Err(Error::Config(format!("unknown ratio schedule {s:?}; expected linear or power"))),
        }
    }
}

/// Shrinking ratio `I` at iteration `t` of `max_t`: 1 up to `0.1 T`, then
/// `1 + 10^w * t / T` with `w` from [`W_SCHEDULE`].
pub fn ratio_i(t: usize, max_t: usize) -> Result<f64> {
    RatioSchedule::Linear.ratio(t, max_t)
}

/// Divides both bound vectors by the ratio.
pub fn shrink_bounds(lower: &[f64], upper: &[f64], ratio: f64) -> Result<WalkBounds> {
    if !(ratio >= 1.0) {
        return Err(Error::InvalidRatio(ratio));
    }
    if lower.len() != upper.len() {
        return Err(Error::DimensionMismatch { expected: lower.len(), found: upper.len() });
    }
    Ok(WalkBounds {
        lower: lower.iter().map(|c| c / ratio).collect(),
        upper: upper.iter().map(|d| d / ratio).collect(),
    })
}

/// Moves shrunk bounds onto an antlion. One fair coin picks the sign of the
/// lower offset, a second one the sign of the upper offset; the result is
/// clamped to `[0, 1]` and reordered so `lower <= upper`.
pub fn center_bounds<R: Rng + ?Sized>(antlion: &[f64], shrunk: &WalkBounds, rng: &mut R) -> Result<WalkBounds> {
    if antlion.len() != shrunk.len() {
        return Err(Error::DimensionMismatch { expected: shrunk.len(), found: antlion.len() });
    }
    let sign_lower = if rng.random::<f64>() < 0.5 { 1.0 } else { -1.0 };
    let sign_upper = if rng.random::<f64>() < 0.5 { 1.0 } else { -1.0 };
    let mut out = WalkBounds { lower: Vec::with_capacity(antlion.len()), upper: Vec::with_capacity(antlion.len()) };
    for ((&a, &c), &d) in antlion.iter().zip(&shrunk.lower).zip(&shrunk.upper) {
        let lo = (a + sign_lower * c).clamp(0.0, 1.0);
        let hi = (a + sign_upper * d).clamp(0.0, 1.0);
        out.lower.push(lo.min(hi));
        out.upper.push(lo.max(hi));
    }
    Ok(out)
}

/// Cumulative sum of `max_t` unit steps, each `+1` when a fresh uniform is
/// below 0.5 and `-1` otherwise, prefixed by 0.
pub fn random_walk<R: Rng + ?Sized>(max_t: usize, rng: &mut R) -> Vec<f64> {
    let mut walk = Vec::with_capacity(max_t + 1);
    let mut pos = 0.0;
    walk.push(pos);
    for _ in 0..max_t {
        pos += if rng.random::<f64>() < 0.5 { 1.0 } else { -1.0 };
        walk.push(pos);
    }
    walk
}

/// Min-max maps `walk[t]` from the walk's range into `[lower, upper]`. A flat
/// walk maps to the midpoint.
pub fn walk_position(walk: &[f64], t: usize, lower: f64, upper: f64) -> Result<f64> {
    if t == 0 || t >= walk.len() {
        return Err(Error::IterationOutOfRange { t, max: walk.len().saturating_sub(1) });
    }
    let (lo, hi) = walk.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
    if hi == lo {
        return Ok((lower + upper) / 2.0);
    }
    let pos = (walk[t] - lo) * (upper - lower) / (hi - lo) + lower;
    Ok(pos.clamp(lower.min(upper), upper.max(lower)))
}

/// Picks an index with probability proportional to `1 / (f + epsilon)`, so
/// smaller (better) fitness is favored.
pub fn roulette_select<R: Rng + ?Sized>(fitness: &[f64], rng: &mut R) -> Result<usize> {
    if fitness.is_empty() {
        return Err(Error::EmptySelection);
    }
    let weights: Vec<f64> = fitness.iter().map(|f| 1.0 / (f + ROULETTE_EPSILON)).collect();
    let total: f64 = weights.iter().sum();
    let target = rng.random::<f64>() * total;
    let mut acc = 0.0;
    for (i, w) in weights.iter().enumerate() {
        acc += w;
        if target < acc {
            return Ok(i);
        }
    }
    Ok(fitness.len() - 1)
}
