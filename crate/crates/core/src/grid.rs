use core::f64::consts::PI;

use crate::error::{ensure_positive, Error, Result};

/// Uniform periodic grid of `n` points centred on the origin, covering `[-n dx/2, n dx/2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    n: usize,
    dx: f64,
}

pub const MIN_GRID_POINTS: usize = 256;

impl GridSpec {
    pub fn new(n: usize, dx: f64) -> Result<Self> {
        if n < MIN_GRID_POINTS || !n.is_power_of_two() {
            return Err(Error::InvalidGrid("grid size must be a power of two >= 256"));
        }
        let dx = ensure_positive("grid step dx", dx)?;
        Ok(Self { n, dx })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    /// Position of node `j`: `(j - n/2) dx`.
    pub fn x(&self, j: usize) -> f64 {
        (j as f64 - (self.n / 2) as f64) * self.dx
    }

    pub fn half_width(&self) -> f64 {
        0.5 * self.n as f64 * self.dx
    }

    /// Frequency step `2π / (n dx)`.
    pub fn du(&self) -> f64 {
        2.0 * PI / (self.n as f64 * self.dx)
    }

    /// Nyquist frequency `π / dx`.
    pub fn u_max(&self) -> f64 {
        PI / self.dx
    }

    /// Angular frequency of FFT bin `k` (standard ordering; bin `n/2` is `-π/dx`).
    pub fn u(&self, k: usize) -> f64 {
        let signed = if k < self.n / 2 {
            k as f64
        } else {
            k as f64 - self.n as f64
        };
        signed * self.du()
    }

    /// Node index of the mirror point `-x_j`, if it lies on the grid.
    pub fn mirror(&self, j: usize) -> Option<usize> {
        if j == 0 {
            None
        } else {
            Some(self.n - j)
        }
    }
}
