//! Brute-force checks of the generalized switch relation
//!
//! `theta(x) > t  <=>  sup argmax_{v in phi^-([l,u])} {t phi(v) - Gamma(v)} < phi^-(phi(x))`
//!
//! where `theta = left derivative of GCM_[l,u](Gamma o phi^-) o phi`.

use crate::error::{Error, Result};
use crate::gcm::{lower_hull, lsc_breakpoint_values, Piecewise, StepFn};
use crate::scalar::Scalar;

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidSwitchInstance(msg.into())
}

/// Evaluates both sides of the switch relation for step functions.
///
/// Finite step functions have closed range and closed inverse image, and on
/// the finite candidate set the lower semicontinuous minorant of `gamma` is
/// `gamma` itself. The left side is computed from the hull of the composite on
/// the range points, the right side by enumeration.
pub fn switch_check<T: Scalar>(
    gamma: &StepFn<T>,
    phi: &StepFn<T>,
    l: T,
    u: T,
    x: T,
    t: T,
) -> Result<(bool, bool)> {
    if !phi.is_monotone() {
        return Err(invalid("phi is not monotone"));
    }
    if !(l < u) {
        return Err(invalid("l must be below u"));
    }
    let (lo, hi) = phi.domain();
    let mut range: Vec<T> = Vec::with_capacity(phi.values().len() + 1);
    range.push(phi.eval(lo));
    for (&k, &v) in phi.knots().iter().zip(phi.values()) {
        if k > lo && v > range[range.len() - 1] {
            range.push(v);
        }
    }
    if !range.contains(&l) || !range.contains(&u) {
        return Err(invalid("l and u must be attained by phi"));
    }
    if !(x >= lo && x <= hi) {
        return Err(invalid("x outside the domain"));
    }
    let y0 = phi.eval(x);
    if !(y0 > l && y0 < u) {
        return Err(invalid("phi(x) must lie strictly between l and u"));
    }
    let candidates: Vec<(T, T, T)> = range
        .iter()
        .filter(|&&v| v >= l && v <= u)
        .map(|&v| {
            let xv = phi.generalized_inverse(v).expect("range value");
            (v, xv, gamma.eval(xv))
        })
        .collect();

    let points: Vec<(T, T)> = candidates.iter().map(|&(v, _, g)| (v, g)).collect();
    let hull = lower_hull(&points)?;
    let lhs = hull.left_derivative(y0)? > t;

    let objective: Vec<T> = candidates.iter().map(|&(v, _, g)| t * v - g).collect();
    let best = objective.iter().copied().fold(T::neg_infinity(), T::max);
    let scale = objective.iter().fold(T::one(), |m, o| m.max(o.abs()));
    let tie = T::lit(1e-12) * scale;
    let sup_argmax = candidates
        .iter()
        .zip(&objective)
        .filter(|(_, &o)| o >= best - tie)
        .map(|(c, _)| c.1)
        .fold(T::neg_infinity(), T::max);
    let rhs = sup_argmax < phi.generalized_inverse(y0)?;
    Ok((lhs, rhs))
}

/// One affine piece `intercept + slope * x` on an interval whose endpoints
/// may be open or closed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Piece {
    pub lo: f64,
    pub hi: f64,
    pub lo_closed: bool,
    pub hi_closed: bool,
    pub intercept: f64,
    pub slope: f64,
}

impl Piece {
    pub fn closed(lo: f64, hi: f64, intercept: f64, slope: f64) -> Self {
        Piece { lo, hi, lo_closed: true, hi_closed: true, intercept, slope }
    }

    /// `[lo, hi)`
    pub fn half_open(lo: f64, hi: f64, intercept: f64, slope: f64) -> Self {
        Piece { lo, hi, lo_closed: true, hi_closed: false, intercept, slope }
    }

    fn at(&self, x: f64) -> f64 {
        self.intercept + self.slope * x
    }

    fn contains(&self, x: f64) -> bool {
        (x > self.lo || (self.lo_closed && x == self.lo))
            && (x < self.hi || (self.hi_closed && x == self.hi))
    }
}

/// Piecewise-affine function given by pieces partitioning an interval in order.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseAffine {
    pieces: Vec<Piece>,
}

impl PiecewiseAffine {
    pub fn new(pieces: Vec<Piece>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(invalid("no pieces"));
        }
        for w in pieces.windows(2) {
            if w[0].hi != w[1].lo || w[0].hi_closed == w[1].lo_closed {
                return Err(invalid("pieces must partition an interval"));
            }
        }
        Ok(PiecewiseAffine { pieces })
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    fn bounds(&self) -> (f64, f64) {
        (self.pieces[0].lo, self.pieces[self.pieces.len() - 1].hi)
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self.pieces.iter().find(|p| p.contains(x)) {
            Some(p) => p.at(x),
            None if x <= self.bounds().0 => self.pieces[0].at(x),
            None => self.pieces[self.pieces.len() - 1].at(x),
        }
    }

    /// Limit from the left at an interior point.
    fn left_value(&self, x: f64) -> f64 {
        match self.pieces.iter().find(|p| p.lo < x && x <= p.hi) {
            Some(p) => p.at(x),
            None => self.eval(x),
        }
    }

    /// `inf{u : f(u) >= y}` for a nondecreasing function.
    pub fn generalized_inverse(&self, y: f64) -> f64 {
        for p in &self.pieces {
            let left = p.at(p.lo);
            if left >= y {
                return p.lo;
            }
            let right = p.at(p.hi);
            if right > y || (right == y && p.hi_closed) {
                return if p.slope > 0.0 { (y - p.intercept) / p.slope } else { p.hi };
            }
        }
        self.bounds().1
    }
}

/// `y -> gamma(phi^-(y))` for affine pieces. One-sided limits use a small
/// offset, adequate because the composite is affine between its breakpoints.
struct AffineComposition<'a> {
    gamma: &'a PiecewiseAffine,
    phi: &'a PiecewiseAffine,
}

const LIMIT_OFFSET: f64 = 1e-10;

impl Piecewise<f64> for AffineComposition<'_> {
    fn value(&self, y: f64) -> f64 {
        self.gamma.eval(self.phi.generalized_inverse(y))
    }
    fn left_limit(&self, y: f64) -> f64 {
        self.value(y - LIMIT_OFFSET)
    }
    fn right_limit(&self, y: f64) -> f64 {
        self.value(y + LIMIT_OFFSET)
    }
}

/// Interval with endpoint closure flags.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Span {
    lo: f64,
    hi: f64,
    lo_closed: bool,
    hi_closed: bool,
}

/// `phi^-([l, u])` as a union of spans, for nondecreasing right-continuous
/// `phi` made of increasing or flat pieces.
fn inverse_image(phi: &PiecewiseAffine, l: f64, u: f64) -> Vec<Span> {
    let mut spans = Vec::new();
    let mut attained = f64::NEG_INFINITY;
    for (i, p) in phi.pieces.iter().enumerate() {
        let start = p.at(p.lo);
        if i > 0 {
            let prev_limit = phi.left_value(p.lo);
            // A jump at p.lo sends the gap (prev_limit, start] to p.lo.
            if start > prev_limit && prev_limit < u && start >= l && p.lo_closed {
                spans.push(Span { lo: p.lo, hi: p.lo, lo_closed: true, hi_closed: true });
            }
        }
        if p.slope > 0.0 {
            let a = ((l - p.intercept) / p.slope).max(p.lo);
            let b = ((u - p.intercept) / p.slope).min(p.hi);
            if a <= b {
                let lo_closed = if a == p.lo {
                    p.lo_closed && start > attained
                } else {
                    true
                };
                let hi_closed = if b == p.hi { p.hi_closed } else { true };
                if a < b || (lo_closed && hi_closed) {
                    spans.push(Span { lo: a, hi: b, lo_closed, hi_closed });
                }
            }
        } else if p.lo_closed && start > attained && start >= l && start <= u {
            spans.push(Span { lo: p.lo, hi: p.lo, lo_closed: true, hi_closed: true });
        }
        let top = p.at(p.hi);
        if p.hi_closed || p.slope == 0.0 {
            attained = attained.max(top);
        } else {
            attained = attained.max(start);
        }
    }
    spans.dedup();
    spans
}

/// Outcome of the unregularized check on affine pieces.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GsrOutcome {
    /// Left derivative of the GCM at `phi(x)`.
    pub theta: f64,
    pub lhs: bool,
    pub rhs: bool,
    /// False when the supremum of the objective is approached but not attained.
    pub argmax_nonempty: bool,
}

/// Evaluates the switch relation without lower-semicontinuous regularization
/// or closedness requirements, handling open interval ends exactly.
///
/// An empty argmax has supremum `inf phi^-([l,u])` by convention.
pub fn switch_check_unregularized(
    gamma: &PiecewiseAffine,
    phi: &PiecewiseAffine,
    l: f64,
    u: f64,
    x: f64,
    t: f64,
) -> Result<GsrOutcome> {
    let y0 = phi.eval(x);
    if !(l < u && y0 > l && y0 < u) {
        return Err(invalid("phi(x) must lie strictly between l and u"));
    }
    // Left side: breakpoints of the composite are the images of all piece ends.
    let mut ys = vec![y0];
    for p in phi.pieces.iter().chain(gamma.pieces.iter()) {
        for z in [p.lo, p.hi] {
            ys.push(phi.eval(z));
            ys.push(phi.left_value(z));
        }
    }
    ys.retain(|&y| y > l && y < u);
    ys.sort_by(f64::total_cmp);
    ys.dedup();
    let comp = AffineComposition { gamma, phi };
    let pts = lsc_breakpoint_values(&comp, &ys, l, u)?;
    let hull = lower_hull(&pts)?;
    let theta = hull.left_derivative(y0)?;

    // Right side: exact supremum over each span, split at gamma's piece ends.
    let spans = inverse_image(phi, l, u);
    let mut cuts: Vec<f64> = gamma.pieces.iter().map(|p| p.hi).collect();
    cuts.extend(phi.pieces.iter().map(|p| p.hi));
    let objective = |z: f64| t * phi.eval(z) - gamma.eval(z);
    let tol = 1e-12;
    // (value, abscissa, attained)
    let mut sups: Vec<(f64, f64, bool)> = Vec::new();
    for s in &spans {
        let mut edges = vec![s.lo];
        edges.extend(cuts.iter().copied().filter(|&c| c > s.lo && c < s.hi));
        edges.push(s.hi);
        for w in edges.windows(2) {
            let (a, b) = (w[0], w[1]);
            let a_closed = if a == s.lo { s.lo_closed } else { true };
            let b_closed = if b == s.hi { s.hi_closed } else { false };
            if a_closed {
                sups.push((objective(a), a, true));
            }
            if b_closed {
                sups.push((objective(b), b, true));
            }
            if a == b {
                continue;
            }
            // Affine on the open interval (a, b): recover its end limits.
            let (p, q) = (a + 0.25 * (b - a), 0.5 * (a + b));
            let slope = (objective(q) - objective(p)) / (q - p);
            let va = objective(q) - slope * (q - a);
            let vb = objective(q) + slope * (b - q);
            if slope.abs() <= tol {
                // Every interior point maximizes; the supremum of that set is b.
                sups.push((va, b, true));
            } else if slope > 0.0 {
                sups.push((vb, b, false));
            } else {
                sups.push((va, a, false));
            }
        }
    }
    if sups.is_empty() {
        return Err(invalid("empty inverse image"));
    }
    let best = sups.iter().map(|s| s.0).fold(f64::NEG_INFINITY, f64::max);
    let maximizers: Vec<f64> = sups
        .iter()
        .filter(|s| s.2 && s.0 >= best - tol)
        .map(|s| s.1)
        .collect();
    let argmax_nonempty = !maximizers.is_empty();
    let sup_argmax = if argmax_nonempty {
        maximizers.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    } else {
        spans[0].lo
    };
    let rhs = sup_argmax < phi.generalized_inverse(y0);
    Ok(GsrOutcome { theta, lhs: theta > t, rhs, argmax_nonempty })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example_a1(gamma: f64) -> (PiecewiseAffine, PiecewiseAffine) {
        let g = PiecewiseAffine::new(vec![Piece::closed(0.0, 1.0, 0.0, gamma)]).unwrap();
        let phi = PiecewiseAffine::new(vec![
            Piece::half_open(0.0, 0.5, 0.0, 1.0),
            Piece::closed(0.5, 1.0, 1.0, 0.0),
        ])
        .unwrap();
        (g, phi)
    }

    #[test]
    fn inverse_image_of_example_a1() {
        let (_, phi) = example_a1(-1.0);
        let spans = inverse_image(&phi, 0.0, 1.0);
        assert_eq!(spans.len(), 2);
        assert_eq!((spans[0].lo, spans[0].hi, spans[0].hi_closed), (0.0, 0.5, false));
        assert_eq!((spans[1].lo, spans[1].hi), (0.5, 0.5));
    }

    #[test]
    fn step_instance_agrees() {
        let phi = StepFn::new(vec![1.0, 2.0, 3.0], vec![0.2, 0.5, 1.0], 0.0, 3.0, 0.0).unwrap();
        let gamma = StepFn::new(vec![1.0, 2.0, 3.0], vec![-0.1, 0.4, 0.3], 0.0, 3.0, 0.0).unwrap();
        for &t in &[-2.0, -0.4, 0.1, 0.9, 3.0] {
            let (lhs, rhs) = switch_check(&gamma, &phi, 0.0, 1.0, 1.5, t).unwrap();
            assert_eq!(lhs, rhs, "t = {t}");
        }
    }

    #[test]
    fn invalid_instances() {
        let phi = StepFn::new(vec![1.0, 2.0], vec![0.5, 1.0], 0.0, 3.0, 0.0).unwrap();
        let gamma = phi.clone();
        assert!(switch_check(&gamma, &phi, 0.0, 0.7, 1.5, 0.0).is_err());
        assert!(switch_check(&gamma, &phi, 0.0, 1.0, 0.5, 0.0).is_err());
    }
}
