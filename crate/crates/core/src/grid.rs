//! Uniform periodic grids on `[-L, L)^n`.

use crate::error::{HartreeError, Result};
use crate::scalar::{cst, Real};

/// Uniform grid with `points_per_axis` samples on `[-L, L)` along each of `dim` axes.
///
/// Samples are stored row-major with axis 0 slowest. Sample `j` on an axis sits at
/// `-L + j dx`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid<T: Real> {
    dim: usize,
    points: usize,
    half_extent: T,
}

impl<T: Real> Grid<T> {
    /// Builds a grid. `points` must be a power of two no smaller than 16 and `dim` in 1..=3.
    pub fn new(dim: usize, points: usize, half_extent: T) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(HartreeError::InvalidGrid(format!("dimension {dim} not in 1..=3")));
        }
        if points < 16 || !points.is_power_of_two() {
            return Err(HartreeError::InvalidGrid(format!(
                "points per axis {points} must be a power of two >= 16"
            )));
        }
        if !(half_extent > T::zero()) || !half_extent.is_finite() {
            return Err(HartreeError::InvalidGrid(format!("half extent {half_extent} must be positive")));
        }
        Ok(Grid { dim, points, half_extent })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Points per axis.
    pub fn points(&self) -> usize {
        self.points
    }

    pub fn half_extent(&self) -> T {
        self.half_extent
    }

    /// Total number of samples `N^n`.
    pub fn len(&self) -> usize {
        self.points.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Spacing `dx = 2L / N`.
    pub fn spacing(&self) -> T {
        cst::<T>(2.0) * self.half_extent / cst(self.points as f64)
    }

    /// Dual spacing `d xi = pi / L`.
    pub fn dual_spacing(&self) -> T {
        T::PI() / self.half_extent
    }

    /// Largest resolved wavenumber `pi / dx`.
    pub fn nyquist(&self) -> T {
        T::PI() / self.spacing()
    }

    /// Cell volume `dx^n`.
    pub fn cell_volume(&self) -> T {
        self.spacing().powi(self.dim as i32)
    }

    /// Grid carrying the centred frequency lattice: half extent `pi / dx`, spacing `pi / L`.
    pub fn dual(&self) -> Grid<T> {
        Grid { dim: self.dim, points: self.points, half_extent: self.nyquist() }
    }

    /// Coordinate of sample `j` on any axis.
    #[inline]
    pub fn coord(&self, j: usize) -> T {
        -self.half_extent + cst::<T>(j as f64) * self.spacing()
    }

    /// All coordinates along one axis.
    pub fn axis(&self) -> Vec<T> {
        (0..self.points).map(|j| self.coord(j)).collect()
    }

    /// Wavenumber of index `j` in the internal (unshifted FFT) ordering.
    #[inline]
    pub fn fft_wavenumber(&self, j: usize) -> T {
        let k = if j < self.points / 2 { j as f64 } else { j as f64 - self.points as f64 };
        cst::<T>(k) * self.dual_spacing()
    }

    /// Multi-index of flat index `idx`, axis 0 first.
    #[inline]
    pub fn unravel(&self, mut idx: usize) -> [usize; 3] {
        let mut out = [0usize; 3];
        for a in (0..self.dim).rev() {
            out[a] = idx % self.points;
            idx /= self.points;
        }
        out
    }

    /// Flat index of a multi-index.
    #[inline]
    pub fn ravel(&self, m: &[usize]) -> usize {
        m.iter().take(self.dim).fold(0, |acc, &j| acc * self.points + j)
    }

    /// Position of flat index `idx`.
    pub fn position(&self, idx: usize) -> [T; 3] {
        let m = self.unravel(idx);
        let mut x = [T::zero(); 3];
        for a in 0..self.dim {
            x[a] = self.coord(m[a]);
        }
        x
    }

    /// `|x|^2` at every sample.
    pub fn radius_squared(&self) -> Vec<T> {
        (0..self.len())
            .map(|i| {
                let x = self.position(i);
                x.iter().take(self.dim).fold(T::zero(), |s, &v| s + v * v)
            })
            .collect()
    }

    /// `|xi|^2` at every sample in the internal FFT ordering.
    pub fn wavenumber_squared(&self) -> Vec<T> {
        let k2: Vec<T> = (0..self.points).map(|j| self.fft_wavenumber(j).powi(2)).collect();
        (0..self.len())
            .map(|i| {
                let m = self.unravel(i);
                (0..self.dim).fold(T::zero(), |s, a| s + k2[m[a]])
            })
            .collect()
    }

    /// Same lattice geometry as `other` (dimension, points and extent within rounding).
    pub fn same_as(&self, other: &Grid<T>) -> bool {
        self.dim == other.dim
            && self.points == other.points
            && (self.half_extent - other.half_extent).abs() <= cst::<T>(1e-12) * self.half_extent.max(T::one())
    }

    /// Errors unless `self` and `other` describe the same lattice.
    pub fn check_same(&self, other: &Grid<T>) -> Result<()> {
        if self.same_as(other) {
            Ok(())
        } else {
            Err(HartreeError::GridMismatch(format!(
                "({}, {}, {}) vs ({}, {}, {})",
                self.dim, self.points, self.half_extent, other.dim, other.points, other.half_extent
            )))
        }
    }

    /// Casts the grid to another scalar type.
    pub fn cast<U: Real>(&self) -> Grid<U> {
        Grid { dim: self.dim, points: self.points, half_extent: cst(crate::scalar::f64_of(self.half_extent)) }
    }
}

/// Builds a grid; see [`Grid::new`].
pub fn make_grid<T: Real>(dim: usize, points: usize, half_extent: T) -> Result<Grid<T>> {
    Grid::new(dim, points, half_extent)
}
