//! Complex sampled fields.

use num_complex::Complex;

use crate::error::{HartreeError, Result};
use crate::grid::Grid;
use crate::scalar::{cst, Real};

/// Complex samples on a [`Grid`], tagged with the semiclassical parameter and a time label.
#[derive(Debug, Clone, PartialEq)]
pub struct Field<T: Real> {
    pub grid: Grid<T>,
    pub values: Vec<Complex<T>>,
    pub epsilon: T,
    pub time: T,
}

impl<T: Real> Field<T> {
    pub fn zeros(grid: Grid<T>, epsilon: T) -> Self {
        Field { grid, values: vec![Complex::new(T::zero(), T::zero()); grid.len()], epsilon, time: T::zero() }
    }

    /// Wraps existing samples. Fails if the length does not match the grid.
    pub fn from_values(grid: Grid<T>, values: Vec<Complex<T>>, epsilon: T) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(HartreeError::GridMismatch(format!(
                "{} samples for a grid of {}",
                values.len(),
                grid.len()
            )));
        }
        Ok(Field { grid, values, epsilon, time: T::zero() })
    }

    /// Samples `f(x)` at every grid point; `x` has `grid.dim()` components.
    pub fn from_fn<F>(grid: Grid<T>, epsilon: T, mut f: F) -> Self
    where
        F: FnMut(&[T]) -> Complex<T>,
    {
        let dim = grid.dim();
        let values = (0..grid.len())
            .map(|i| {
                let x = grid.position(i);
                f(&x[..dim])
            })
            .collect();
        Field { grid, values, epsilon, time: T::zero() }
    }

    pub fn with_time(mut self, t: T) -> Self {
        self.time = t;
        self
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Same samples with new values, keeping grid, epsilon and time.
    pub fn like(&self, values: Vec<Complex<T>>) -> Self {
        debug_assert_eq!(values.len(), self.values.len());
        Field { grid: self.grid, values, epsilon: self.epsilon, time: self.time }
    }

    pub fn scale(&mut self, c: Complex<T>) {
        self.values.iter_mut().for_each(|v| *v = *v * c);
    }

    pub fn scaled(&self, c: Complex<T>) -> Self {
        let mut out = self.clone();
        out.scale(c);
        out
    }

    /// Pointwise `self - other`.
    pub fn sub(&self, other: &Field<T>) -> Result<Self> {
        self.grid.check_same(&other.grid)?;
        Ok(self.like(self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect()))
    }

    /// Pointwise `self + other`.
    pub fn add(&self, other: &Field<T>) -> Result<Self> {
        self.grid.check_same(&other.grid)?;
        Ok(self.like(self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect()))
    }

    /// Multiplies by a real function of position.
    pub fn mul_real(&mut self, w: &[T]) {
        debug_assert_eq!(w.len(), self.values.len());
        self.values.iter_mut().zip(w).for_each(|(v, &r)| *v = v.scale(r));
    }

    /// Multiplies pointwise by `exp(i phase)`.
    pub fn mul_phase(&mut self, phase: &[T]) {
        debug_assert_eq!(phase.len(), self.values.len());
        self.values.iter_mut().zip(phase).for_each(|(v, &p)| *v = *v * crate::scalar::cis(p));
    }

    /// `|u|^2`.
    pub fn density(&self) -> Vec<T> {
        self.values.iter().map(|v| v.norm_sqr()).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.re.is_finite() && v.im.is_finite())
    }

    /// Errors if any sample is NaN or infinite.
    pub fn check_finite(&self, what: &str) -> Result<()> {
        if self.is_finite() {
            Ok(())
        } else {
            Err(HartreeError::NonFinite(what.to_string()))
        }
    }

    /// Reflection `u(-x)`, exact on the lattice (index `j -> (N - j) mod N`).
    pub fn reflect(&self) -> Self {
        let g = self.grid;
        let n = g.points();
        let mut out = vec![Complex::new(T::zero(), T::zero()); g.len()];
        for (i, o) in out.iter_mut().enumerate() {
            let mut m = g.unravel(i);
            for a in 0..g.dim() {
                m[a] = (n - m[a]) % n;
            }
            *o = self.values[g.ravel(&m)];
        }
        self.like(out)
    }

    /// Casts samples to another scalar type.
    pub fn cast<U: Real>(&self) -> Field<U> {
        let conv = |x: T| -> U { cst(crate::scalar::f64_of(x)) };
        Field {
            grid: self.grid.cast(),
            values: self.values.iter().map(|v| Complex::new(conv(v.re), conv(v.im))).collect(),
            epsilon: conv(self.epsilon),
            time: conv(self.time),
        }
    }
}
