//! S-shaped and V-shaped transfer functions and the two binarization rules
//! built on them.
//!
//! An S-shaped function gives the probability that a bit is set to 1. A
//! V-shaped function gives the probability that the current bit is flipped.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    S,
    V,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TransferFunction {
    /// `1 / (1 + e^-2x)`
    S1,
    /// `1 / (1 + e^(-x/2))`
    S2,
    /// `1 / (1 + e^(-x/3))`
    S3,
    /// `|erf(sqrt(pi)/2 * x)|`
    V1,
    /// `|x / sqrt(1 + x^2)|`
    V2,
    /// `|2/pi * atan(pi/2 * x)|`
    V3,
    /// Classic sigmoid `1 / (1 + e^-x)`.
    S0,
    /// `|tanh(x)|`
    V0,
}

fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

impl TransferFunction {
    pub const ALL: [TransferFunction; 8] = [
        TransferFunction::S1,
        TransferFunction::S2,
        TransferFunction::S3,
        TransferFunction::V1,
        TransferFunction::V2,
        TransferFunction::V3,
        TransferFunction::S0,
        TransferFunction::V0,
    ];

    pub fn family(self) -> Family {
        match self {
            Self::S0 | Self::S1 | Self::S2 | Self::S3 => Family::S,
            Self::V0 | Self::V1 | Self::V2 | Self::V3 => Family::V,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::S1 => "s1",
            Self::S2 => "s2",
            Self::S3 => "s3",
            Self::V1 => "v1",
            Self::V2 => "v2",
            Self::V3 => "v3",
            Self::S0 => "s0",
            Self::V0 => "v0",
        }
    }

    fn raw(self, x: f64) -> f64 {
        match self {
            Self::S1 => sigmoid(2.0 * x),
            Self::S2 => sigmoid(x / 2.0),
            Self::S3 => sigmoid(x / 3.0),
            Self::S0 => sigmoid(x),
            Self::V1 => libm::erf(PI.sqrt() / 2.0 * x).abs(),
            Self::V2 => (x / (1.0 + x * x).sqrt()).abs(),
            Self::V3 => (2.0 / PI * (FRAC_PI_2 * x).atan()).abs(),
            Self::V0 => x.tanh().abs(),
        }
    }

    /// Probability in `[0, 1]` for a finite input.
    pub fn value(self, x: f64) -> Result<f64> {
        if !x.is_finite() {
            return Err(Error::NonFinite(x));
        }
        Ok(self.raw(x).clamp(0.0, 1.0))
    }

    fn require(self, family: Family) -> Result<()> {
        if self.family() == family {
            Ok(())
        } else {
            let expected = match family {
                Family::S => "S",
                Family::V => "V",
            };
            Err(Error::WrongFamily { id: self.name().to_string(), expected })
        }
    }
}

impl fmt::Display for TransferFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TransferFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|t| t.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownTransfer(s.to_string()))
    }
}

/// Sets bit `d` when a fresh uniform draw falls below `T(step[d])`.
pub fn binarize_s<R: Rng + ?Sized>(step: &[f64], id: TransferFunction, rng: &mut R) -> Result<Vec<bool>> {
    id.require(Family::S)?;
    step.iter()
        .map(|&x| {
            let p = id.value(x)?;
            Ok(rng.random::<f64>() < p)
        })
        .collect()
}

/// Flips bit `d` of `current` when a fresh uniform draw falls below
/// `T(step[d])`, keeps it otherwise.
pub fn binarize_v<R: Rng + ?Sized>(
    step: &[f64],
    current: &[bool],
    id: TransferFunction,
    rng: &mut R,
) -> Result<Vec<bool>> {
    id.require(Family::V)?;
    if step.len() != current.len() {
        return Err(Error::DimensionMismatch { expected: current.len(), found: step.len() });
    }
    step.iter()
        .zip(current)
        .map(|(&x, &bit)| {
            let p = id.value(x)?;
            Ok(if rng.random::<f64>() < p { !bit } else { bit })
        })
        .collect()
}

/// Dispatches on the function's family. `current` is only read by V-shaped
/// functions.
pub fn binarize<R: Rng + ?Sized>(
    step: &[f64],
    current: &[bool],
    id: TransferFunction,
    rng: &mut R,
) -> Result<Vec<bool>> {
    match id.family() {
        Family::S => binarize_s(step, id, rng),
        Family::V => binarize_v(step, current, id, rng),
    }
}
