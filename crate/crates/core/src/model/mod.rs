//! Shifted generator families, the spaces `V_{2,L}(Φ)`, correlation matrices
//! and the reproducing kernel they induce.

mod family;
pub mod io;
mod kernel;
mod signal;

pub use family::{ShiftMode, ShiftedFamily};
pub use kernel::{
    apply_integral_operator, assemble_correlation, build_truncated_kernel, cross_gram, gram, inner_product,
    l2_distance, CorrelationMatrix, TruncatedKernel, UniformGrid,
};
pub(crate) use signal::sin_cos_pi;
pub use signal::{make_test_signal, CoefficientLaw, FriSignal};

/// A real signal that can be evaluated pointwise.
pub trait Evaluable: Sync {
    fn eval(&self, t: f64) -> f64;
}

/// Wraps a closure as an [`Evaluable`].
pub struct FnSignal<F>(pub F);

impl<F: Fn(f64) -> f64 + Sync> Evaluable for FnSignal<F> {
    fn eval(&self, t: f64) -> f64 {
        (self.0)(t)
    }
}

impl<T: Evaluable + ?Sized> Evaluable for &T {
    fn eval(&self, t: f64) -> f64 {
        (**self).eval(t)
    }
}
