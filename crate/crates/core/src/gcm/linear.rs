use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Continuous piecewise-linear function through `(xs[i], ys[i])`.
///
/// Outside `[xs[0], xs[last]]` it extends linearly with the slope of the
/// nearest segment. Used for continuous scales such as the identity and the
/// integrated survival function.
#[derive(Debug, Clone, PartialEq)]
pub struct PwLinear<T> {
    xs: Vec<T>,
    ys: Vec<T>,
}

impl<T: Scalar> PwLinear<T> {
    pub fn new(xs: Vec<T>, ys: Vec<T>) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::LengthMismatch(xs.len(), ys.len()));
        }
        if xs.len() < 2 {
            return Err(Error::InsufficientPoints(xs.len()));
        }
        for (i, w) in xs.windows(2).enumerate() {
            if !(w[0] < w[1]) {
                return Err(Error::UnsortedInput(i + 1));
            }
        }
        if let Some(i) = xs.iter().chain(ys.iter()).position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(PwLinear { xs, ys })
    }

    /// Identity map on `[lo, hi]`.
    pub fn identity(lo: T, hi: T) -> Result<Self> {
        Self::new(vec![lo, hi], vec![lo, hi])
    }

    pub fn xs(&self) -> &[T] {
        &self.xs
    }

    pub fn ys(&self) -> &[T] {
        &self.ys
    }

    pub fn domain(&self) -> (T, T) {
        (self.xs[0], *self.xs.last().unwrap())
    }

    pub fn is_monotone(&self) -> bool {
        self.ys.windows(2).all(|w| w[0] <= w[1])
    }

    pub fn is_zero(&self) -> bool {
        self.ys.iter().all(|&y| y == T::zero())
    }

    /// Index of the segment `[xs[i], xs[i+1]]` used for `x`, with the end
    /// segments covering the extrapolation regions.
    fn segment(&self, x: T) -> usize {
        let idx = self.xs.partition_point(|&k| k <= x);
        idx.clamp(1, self.xs.len() - 1) - 1
    }

    fn slope_of(&self, i: usize) -> T {
        (self.ys[i + 1] - self.ys[i]) / (self.xs[i + 1] - self.xs[i])
    }

    pub fn eval(&self, x: T) -> T {
        let i = self.segment(x);
        if x == self.xs[i] {
            return self.ys[i];
        }
        if x == self.xs[i + 1] {
            return self.ys[i + 1];
        }
        self.ys[i] + self.slope_of(i) * (x - self.xs[i])
    }

    /// Slope of the segment immediately to the left of `x`.
    pub fn left_slope(&self, x: T) -> T {
        let idx = self.xs.partition_point(|&k| k < x);
        let i = idx.clamp(1, self.xs.len() - 1) - 1;
        self.slope_of(i)
    }

    /// `inf{u in domain : f(u) >= y}` for a nondecreasing `f`.
    pub fn generalized_inverse(&self, y: T) -> Result<T> {
        if y <= self.ys[0] {
            return Ok(self.xs[0]);
        }
        let idx = self.ys.partition_point(|&v| v < y);
        if idx == self.ys.len() {
            return Err(Error::AboveRange(y.to_f64_lossy()));
        }
        if self.ys[idx] == y {
            return Ok(self.xs[idx]);
        }
        let (x0, y0) = (self.xs[idx - 1], self.ys[idx - 1]);
        let (x1, y1) = (self.xs[idx], self.ys[idx]);
        let x = x0 + (y - y0) * (x1 - x0) / (y1 - y0);
        Ok(x.max(x0).min(x1))
    }

    /// Right end of the level set `{u : f(u) = y}` starting at `x` (or `x`
    /// itself when the function increases immediately after it).
    pub fn flat_end(&self, x: T, y: T) -> T {
        let mut idx = self.xs.partition_point(|&k| k < x);
        if idx < self.xs.len() && self.xs[idx] == x {
            let mut end = x;
            while idx + 1 < self.xs.len() && self.ys[idx + 1] == y && self.ys[idx] == y {
                idx += 1;
                end = self.xs[idx];
            }
            end
        } else {
            x
        }
    }

    /// Pointwise combination of two functions with identical knots.
    pub fn zip_with(&self, other: &PwLinear<T>, f: impl Fn(T, T) -> T) -> Result<PwLinear<T>> {
        if self.xs != other.xs {
            return Err(Error::InvalidArgument("piecewise-linear functions have different knots".into()));
        }
        Ok(PwLinear {
            xs: self.xs.clone(),
            ys: self.ys.iter().zip(&other.ys).map(|(&a, &b)| f(a, b)).collect(),
        })
    }
}
