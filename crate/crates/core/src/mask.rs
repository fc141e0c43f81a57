use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Binary solution encoding: bit `d` set means feature `d` is selected.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FeatureMask(Vec<bool>);

impl FeatureMask {
    pub fn new(bits: Vec<bool>) -> Self {
        Self(bits)
    }

    pub fn empty(n: usize) -> Self {
        Self(vec![false; n])
    }

    pub fn full(n: usize) -> Self {
        Self(vec![true; n])
    }

    /// Low `n` bits of `code`, bit `d` of the integer mapping to feature `d`.
    pub fn from_code(code: u64, n: usize) -> Self {
        Self((0..n).map(|d| code >> d & 1 == 1).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn get(&self, d: usize) -> bool {
        self.0[d]
    }

    pub fn count_ones(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }

    pub fn selected(&self) -> Vec<usize> {
        self.0.iter().enumerate().filter_map(|(d, &b)| b.then_some(d)).collect()
    }

    /// Bits as `0.0` / `1.0`, the embedding of the mask in the continuous domain.
    pub fn to_reals(&self) -> Vec<f64> {
        self.0.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect()
    }

    /// Feature 0 is the leftmost character.
    pub fn to_bitstring(&self) -> String {
        self.0.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }
}

impl From<Vec<bool>> for FeatureMask {
    fn from(bits: Vec<bool>) -> Self {
        Self(bits)
    }
}

impl fmt::Display for FeatureMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bitstring())
    }
}

impl FromStr for FeatureMask {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::InvalidMask(s.to_string())),
            })
            .collect::<Result<Vec<_>>>()
            .map(Self)
    }
}
