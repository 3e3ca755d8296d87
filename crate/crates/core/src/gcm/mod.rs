//! Greatest convex minorant machinery.

mod composite;
mod eval;
mod hull;
mod linear;
mod step;
mod switch;

pub use composite::{composite_points, gcm_left_slope, CompositePoints, Scale};
pub use eval::{lsc_breakpoint_values, Composition, EvalFn, Piecewise};
pub use hull::{left_derivative, lower_hull, Hull};
pub use linear::PwLinear;
pub use step::StepFn;
pub use switch::{switch_check, switch_check_unregularized, GsrOutcome, Piece, PiecewiseAffine};

/// Free-function form of [`StepFn::generalized_inverse`].
pub fn generalized_inverse<T: crate::Scalar>(f: &StepFn<T>, y: T) -> crate::Result<T> {
    f.generalized_inverse(y)
}
