//! Left derivative of `GCM_[lo, u](h o phi^-)` at `phi(x)`.

use crate::error::{Error, Result};
use crate::gcm::{lower_hull, EvalFn, Hull, Piecewise, PwLinear, StepFn};
use crate::scalar::Scalar;

/// The time-change `phi` of a generalized Grenander estimator.
#[derive(Debug, Clone, PartialEq)]
pub enum Scale<T> {
    /// Empirical distribution function: the composite lives on the range
    /// points of the step function.
    Step(StepFn<T>),
    /// Continuous nondecreasing map.
    Linear(PwLinear<T>),
}

impl<T: Scalar> Scale<T> {
    pub fn eval(&self, x: T) -> T {
        match self {
            Scale::Step(s) => s.eval(x),
            Scale::Linear(l) => l.eval(x),
        }
    }

    pub fn domain(&self) -> (T, T) {
        match self {
            Scale::Step(s) => s.domain(),
            Scale::Linear(l) => l.domain(),
        }
    }

    pub fn generalized_inverse(&self, y: T) -> Result<T> {
        match self {
            Scale::Step(s) => s.generalized_inverse(y),
            Scale::Linear(l) => l.generalized_inverse(y),
        }
    }

    /// Value at the upper end of the domain.
    pub fn top(&self) -> T {
        let (_, hi) = self.domain();
        self.eval(hi)
    }
}

/// Evaluation set of the composite and the position of `phi(x)` in it.
#[derive(Debug, Clone, PartialEq)]
pub struct CompositePoints<T> {
    pub points: Vec<(T, T)>,
    pub eval_index: usize,
}

fn boundary<T: Scalar>(what: &str, v: T) -> Error {
    Error::BoundaryEvaluation(format!("{what} = {v}"))
}

/// Points of the lsc-regularized composite `y -> h(phi^-(y))` on
/// `[phi(lo), u_hat]`.
///
/// A step scale uses its range points, which is exact. A continuous scale uses
/// the images of all breakpoints plus, when `h` has a smooth part, a uniform
/// grid of `grid_points` cells.
pub fn composite_points<T: Scalar>(
    h: &EvalFn<T>,
    scale: &Scale<T>,
    u_hat: T,
    x_eval: T,
    grid_points: usize,
) -> Result<CompositePoints<T>> {
    let (lo, hi) = scale.domain();
    if !(x_eval >= lo && x_eval <= hi) {
        return Err(boundary("x outside the domain, x", x_eval));
    }
    let y0 = scale.eval(x_eval);
    let points = match scale {
        Scale::Step(phi) => step_points(h, phi, u_hat),
        Scale::Linear(phi) => linear_points(h, phi, u_hat, x_eval, grid_points)?,
    };
    let first = points[0].0;
    let last = points[points.len() - 1].0;
    if !(y0 > first) || y0 > last {
        return Err(boundary("phi(x)", y0));
    }
    let eval_index = points
        .binary_search_by(|p| p.0.partial_cmp(&y0).expect("finite abscissa"))
        .map_err(|_| boundary("phi(x) not in evaluation set, phi(x)", y0))?;
    Ok(CompositePoints { points, eval_index })
}

fn step_points<T: Scalar>(h: &EvalFn<T>, phi: &StepFn<T>, u_hat: T) -> Vec<(T, T)> {
    let (lo, _) = phi.domain();
    let mut pts = Vec::with_capacity(phi.knots().len() + 1);
    pts.push((phi.left_limit(lo), h.left_limit(lo)));
    for (&k, &v) in phi.knots().iter().zip(phi.values()) {
        if v > u_hat {
            break;
        }
        if v <= pts[pts.len() - 1].0 {
            continue;
        }
        pts.push((v, h.value(k)));
    }
    pts
}

fn linear_points<T: Scalar>(
    h: &EvalFn<T>,
    phi: &PwLinear<T>,
    u_hat: T,
    x_eval: T,
    grid_points: usize,
) -> Result<Vec<(T, T)>> {
    let (lo, _) = phi.domain();
    let y0 = phi.eval(x_eval);
    let y_lo = phi.eval(lo);
    if !(u_hat > y_lo) {
        return Err(boundary("upper limit", u_hat));
    }
    let x_top = phi.generalized_inverse(u_hat)?;
    let mut ys = Vec::with_capacity(h.step.knots().len() + phi.xs().len() + grid_points + 3);
    ys.push(y_lo);
    ys.push(u_hat);
    if y0 > y_lo && y0 < u_hat {
        ys.push(y0);
    }
    for &k in h.step.knots() {
        if k > lo && k < x_top {
            ys.push(phi.eval(k));
        }
    }
    if let Some(lin) = &h.linear {
        for &k in lin.xs() {
            if k > lo && k < x_top {
                ys.push(phi.eval(k));
            }
        }
    }
    for &y in phi.ys() {
        if y > y_lo && y < u_hat {
            ys.push(y);
        }
    }
    if h.has_smooth_part() && grid_points > 1 {
        let span = u_hat - y_lo;
        let g = T::from_count(grid_points);
        for k in 1..grid_points {
            ys.push(y_lo + span * T::from_count(k) / g);
        }
    }
    ys.retain(|&y| y >= y_lo && y <= u_hat);
    ys.sort_by(|a, b| a.partial_cmp(b).expect("finite abscissa"));
    ys.dedup();

    let last = ys.len() - 1;
    let mut pts = Vec::with_capacity(ys.len());
    for (i, &y) in ys.iter().enumerate() {
        let g = if i == 0 {
            h.value(lo)
        } else if i == last {
            h.value(x_top)
        } else {
            let xl = inverse_at(phi, y, y0, x_eval)?;
            let xr = phi.flat_end(xl, y);
            h.left_limit(xl).min(h.value(xl)).min(h.right_limit(xr))
        };
        pts.push((y, g));
    }
    Ok(pts)
}

/// `phi^-(y)`, returning `x_eval` itself at its own image when `phi` is
/// strictly increasing just left of it, so no rounding enters there.
fn inverse_at<T: Scalar>(phi: &PwLinear<T>, y: T, y0: T, x_eval: T) -> Result<T> {
    if y == y0 && phi.left_slope(x_eval) > T::zero() {
        Ok(x_eval)
    } else {
        phi.generalized_inverse(y)
    }
}

/// Left derivative of the GCM of the composite at `phi(x_eval)`.
pub fn gcm_left_slope<T: Scalar>(
    h: &EvalFn<T>,
    scale: &Scale<T>,
    u_hat: T,
    x_eval: T,
    grid_points: usize,
) -> Result<T> {
    let cp = composite_points(h, scale, u_hat, x_eval, grid_points)?;
    let hull = lower_hull(&cp.points)?;
    let y0 = cp.points[cp.eval_index].0;
    let seg = hull.segment_ending_at_or_after(y0)?;
    let chord = hull.slope(seg);
    match scale {
        Scale::Linear(phi) if h.has_smooth_part() => {
            Ok(tangent_refinement(h, phi, &cp, &hull, seg, x_eval).unwrap_or(chord))
        }
        _ => Ok(chord),
    }
}

/// When the hull follows the composite on the last cell before `phi(x)`, the
/// chord slope is replaced by the exact one-sided derivative of the smooth
/// piece, clamped to the slopes of the two adjacent hull segments.
fn tangent_refinement<T: Scalar>(
    h: &EvalFn<T>,
    phi: &PwLinear<T>,
    cp: &CompositePoints<T>,
    hull: &Hull<T>,
    seg: usize,
    x_eval: T,
) -> Option<T> {
    let i0 = cp.eval_index;
    let src = hull.source_indices();
    if i0 == 0 || src[seg + 1] != i0 || src[seg] != i0 - 1 {
        return None;
    }
    let (y0, g0) = cp.points[i0];
    let x0 = inverse_at(phi, y0, y0, x_eval).ok()?;
    if g0 != h.left_limit(x0) {
        return None;
    }
    let dphi = phi.left_slope(x0);
    if !(dphi > T::zero()) {
        return None;
    }
    let tangent = h.smooth_left_derivative(x0) / dphi;
    let lower = hull.slope(seg);
    let upper = if seg + 2 < hull.vertices().len() {
        hull.slope(seg + 1)
    } else {
        T::infinity()
    };
    Some(tangent.min(upper).max(lower))
}
