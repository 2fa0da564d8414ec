//! Uniform periodic grid geometry.

use crate::error::{Error, Result};
use std::f64::consts::TAU;

/// Axis selector for the three spatial directions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X1,
    X2,
    X3,
}

impl Axis {
    /// Accepts the 1-based axis index used by the file formats and CLI.
    pub fn from_index(idx: usize) -> Result<Self> {
        match idx {
            1 => Ok(Axis::X1),
            2 => Ok(Axis::X2),
            3 => Ok(Axis::X3),
            _ => Err(Error::invalid(format!("axis must be 1, 2 or 3, got {idx}"))),
        }
    }

    pub fn index(self) -> usize {
        match self {
            Axis::X1 => 1,
            Axis::X2 => 2,
            Axis::X3 => 3,
        }
    }
}

/// Uniform grid on the periodic box [0, L1) x [0, L2) x [0, L3).
///
/// Sample i along an axis sits at x = i * L / n. Resolutions must be even
/// and at least 4 so that the Nyquist mode handling is unambiguous
/// (Nyquist coefficients are zeroed by the differential operators).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid3 {
    n: [usize; 3],
    l: [f64; 3],
}

impl Grid3 {
    pub fn new(n: [usize; 3], l: [f64; 3]) -> Result<Self> {
        for (axis, &ni) in n.iter().enumerate() {
            if ni < 4 || ni % 2 != 0 {
                return Err(Error::invalid(format!(
                    "grid resolution n{} = {} must be even and >= 4",
                    axis + 1,
                    ni
                )));
            }
        }
        for (axis, &li) in l.iter().enumerate() {
            if !(li.is_finite() && li > 0.0) {
                return Err(Error::invalid(format!(
                    "box length L{} = {} must be finite and positive",
                    axis + 1,
                    li
                )));
            }
        }
        Ok(Grid3 { n, l })
    }

    /// Cube grid with n samples per axis on the standard (2*pi)^3 box.
    pub fn cubic(n: usize) -> Result<Self> {
        Grid3::new([n, n, n], [TAU, TAU, TAU])
    }

    pub fn n(&self) -> [usize; 3] {
        self.n
    }

    pub fn lengths(&self) -> [f64; 3] {
        self.l
    }

    pub fn n1(&self) -> usize {
        self.n[0]
    }

    pub fn n2(&self) -> usize {
        self.n[1]
    }

    pub fn n3(&self) -> usize {
        self.n[2]
    }

    /// Number of samples of one scalar component.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.n[0] * self.n[1] * self.n[2]
    }

    /// Complex coefficients of one scalar component in the half-spectrum
    /// layout (conjugate-symmetric along x1).
    pub fn spectral_len(&self) -> usize {
        (self.n[0] / 2 + 1) * self.n[1] * self.n[2]
    }

    pub fn cell_volume(&self) -> f64 {
        self.volume() / self.len() as f64
    }

    pub fn volume(&self) -> f64 {
        self.l[0] * self.l[1] * self.l[2]
    }

    pub fn spacing(&self, axis: Axis) -> f64 {
        let a = axis.index() - 1;
        self.l[a] / self.n[a] as f64
    }

    /// Flat index of the sample (i1, i2, i3); x1 varies fastest.
    pub fn index(&self, i1: usize, i2: usize, i3: usize) -> usize {
        (i3 * self.n[1] + i2) * self.n[0] + i1
    }

    /// Physical coordinates of the sample (i1, i2, i3).
    pub fn coords(&self, i1: usize, i2: usize, i3: usize) -> [f64; 3] {
        [
            i1 as f64 * self.l[0] / self.n[0] as f64,
            i2 as f64 * self.l[1] / self.n[1] as f64,
            i3 as f64 * self.l[2] / self.n[2] as f64,
        ]
    }

    /// Signed integer mode number for bin i of an n-point transform.
    pub fn signed_mode(n: usize, i: usize) -> i64 {
        debug_assert!(i < n);
        if i <= n / 2 {
            i as i64
        } else {
            i as i64 - n as i64
        }
    }

    /// Wavenumber used by the differential operators: 2*pi*m / L with the
    /// Nyquist mode mapped to zero.
    pub fn wavenumber(&self, axis: Axis, i: usize) -> f64 {
        let a = axis.index() - 1;
        let n = self.n[a];
        let m = Self::signed_mode(n, i);
        if m.unsigned_abs() as usize == n / 2 {
            0.0
        } else {
            TAU * m as f64 / self.l[a]
        }
    }

    /// Largest mode kept by the 2/3-rule dealiasing mask along an axis.
    pub fn dealias_cap(&self, axis: Axis) -> usize {
        self.n[axis.index() - 1] / 3
    }
}
