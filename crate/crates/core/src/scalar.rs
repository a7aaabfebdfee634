//! Scalar abstraction shared by every numerical routine in the crate.

use std::cell::RefCell;
use std::fmt::{Debug, Display, LowerExp};
use std::sync::Arc;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumCast, ToPrimitive};
use rustfft::{Fft, FftDirection, FftNum, FftPlanner};

/// Floating point type the solvers can run on (`f32` or `f64`).
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + NumCast + FftNum + Default + Display + LowerExp + Debug + Send + Sync + 'static
{
    /// Cached 1-d FFT plan for this scalar type. Plans are cached per thread.
    fn fft_plan(len: usize, direction: FftDirection) -> Arc<dyn Fft<Self>>;
}

macro_rules! impl_real {
    ($t:ty) => {
        impl Real for $t {
            fn fft_plan(len: usize, direction: FftDirection) -> Arc<dyn Fft<Self>> {
                thread_local! {
                    static PLANNER: RefCell<FftPlanner<$t>> = RefCell::new(FftPlanner::new());
                }
                PLANNER.with(|p| p.borrow_mut().plan_fft(len, direction))
            }
        }
    };
}

impl_real!(f32);
impl_real!(f64);

/// Converts an `f64` literal into `T`.
#[inline]
pub fn cst<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("f64 constant representable")
}

/// Converts `T` into `f64`.
#[inline]
pub fn f64_of<T: Real>(x: T) -> f64 {
    x.to_f64().expect("scalar convertible to f64")
}

/// `exp(i theta)`.
#[inline]
pub fn cis<T: Real>(theta: T) -> Complex<T> {
    let (s, c) = theta.sin_cos();
    Complex::new(c, s)
}
