use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Spatial dimension of the ambient space. Only the plane and space are supported.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub enum Dim {
    Two,
    Three,
}

impl Dim {
    pub fn get(self) -> usize {
        match self {
            Dim::Two => 2,
            Dim::Three => 3,
        }
    }

    /// Bessel order shift `(d - 2) / 2`, so that degree `n` uses `J_{n + shift}`.
    pub fn order_shift(self) -> f64 {
        match self {
            Dim::Two => 0.0,
            Dim::Three => 0.5,
        }
    }

    /// Surface measure of the unit sphere `S^{d-1}`.
    pub fn sphere_area(self) -> f64 {
        match self {
            Dim::Two => 2.0 * PI,
            Dim::Three => 4.0 * PI,
        }
    }

    /// Synthesis constant `sqrt(pi) / (2 pi)^{d/2}`.
    pub fn synthesis_constant(self) -> f64 {
        PI.sqrt() / (2.0 * PI).powf(self.get() as f64 / 2.0)
    }

    /// Prefactor `pi / (2 pi)^{d/2}` of the sphere convolution kernel.
    pub fn kernel_prefactor(self) -> f64 {
        PI / (2.0 * PI).powf(self.get() as f64 / 2.0)
    }
}

impl TryFrom<usize> for Dim {
    type Error = Error;

    fn try_from(d: usize) -> Result<Self> {
        match d {
            2 => Ok(Dim::Two),
            3 => Ok(Dim::Three),
            other => Err(Error::Domain(format!("dimension must be 2 or 3, got {other}"))),
        }
    }
}

impl From<Dim> for usize {
    fn from(d: Dim) -> usize {
        d.get()
    }
}

impl fmt::Display for Dim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.get())
    }
}
