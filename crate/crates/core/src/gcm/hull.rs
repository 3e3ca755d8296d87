use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Greatest convex minorant of a finite point set, stored as its vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct Hull<T> {
    vertices: Vec<(T, T)>,
    /// Position of each vertex in the input point list.
    source: Vec<usize>,
}

impl<T: Scalar> Hull<T> {
    pub fn vertices(&self) -> &[(T, T)] {
        &self.vertices
    }

    /// Indices of the vertices in the point list the hull was built from.
    pub fn source_indices(&self) -> &[usize] {
        &self.source
    }

    pub fn slopes(&self) -> Vec<T> {
        (0..self.vertices.len() - 1).map(|i| self.slope(i)).collect()
    }

    /// Slope of the segment from vertex `i` to vertex `i + 1`.
    pub fn slope(&self, i: usize) -> T {
        let (y0, g0) = self.vertices[i];
        let (y1, g1) = self.vertices[i + 1];
        (g1 - g0) / (y1 - y0)
    }

    /// Value of the minorant at `y` (linear interpolation between vertices).
    pub fn eval(&self, y: T) -> Result<T> {
        self.check_range(y)?;
        let idx = self.vertices.partition_point(|v| v.0 < y);
        if idx == 0 {
            return Ok(self.vertices[0].1);
        }
        let (y1, g1) = self.vertices[idx];
        if y1 == y {
            return Ok(g1);
        }
        Ok(g1 - self.slope(idx - 1) * (y1 - y))
    }

    fn check_range(&self, y: T) -> Result<()> {
        let lo = self.vertices[0].0;
        let hi = self.vertices[self.vertices.len() - 1].0;
        if !(y >= lo && y <= hi) {
            return Err(Error::OutOfDomain {
                value: y.to_f64_lossy(),
                lo: lo.to_f64_lossy(),
                hi: hi.to_f64_lossy(),
            });
        }
        Ok(())
    }

    /// Index of the segment whose right endpoint is the smallest vertex at or
    /// above `y`; the first segment at the left edge.
    pub fn segment_ending_at_or_after(&self, y: T) -> Result<usize> {
        self.check_range(y)?;
        let idx = self.vertices.partition_point(|v| v.0 < y);
        Ok(idx.max(1) - 1)
    }

    /// Left derivative of the minorant at `y`.
    pub fn left_derivative(&self, y: T) -> Result<T> {
        Ok(self.slope(self.segment_ending_at_or_after(y)?))
    }
}

/// Lower convex hull of points with strictly increasing abscissae.
///
/// Collinear vertices are dropped using a relative tolerance on the cross
/// product, so segment slopes are strictly increasing.
pub fn lower_hull<T: Scalar>(points: &[(T, T)]) -> Result<Hull<T>> {
    if points.len() < 2 {
        return Err(Error::InsufficientPoints(points.len()));
    }
    for (i, &(y, g)) in points.iter().enumerate() {
        if !y.is_finite() || !g.is_finite() {
            return Err(Error::NonFinite(i));
        }
        if i > 0 && !(points[i - 1].0 < y) {
            return Err(Error::UnsortedInput(i));
        }
    }
    let tol = T::slope_tol();
    let mut stack: Vec<usize> = Vec::with_capacity(points.len());
    for (i, &(yp, gp)) in points.iter().enumerate() {
        while stack.len() >= 2 {
            let (ya, ga) = points[stack[stack.len() - 2]];
            let (yb, gb) = points[stack[stack.len() - 1]];
            let lhs = (gb - ga) * (yp - yb);
            let rhs = (gp - gb) * (yb - ya);
            if lhs - rhs >= -tol * (lhs.abs() + rhs.abs()) {
                stack.pop();
            } else {
                break;
            }
        }
        stack.push(i);
    }
    Ok(Hull {
        vertices: stack.iter().map(|&i| points[i]).collect(),
        source: stack,
    })
}

/// Free-function form of [`Hull::left_derivative`].
pub fn left_derivative<T: Scalar>(hull: &Hull<T>, y: T) -> Result<T> {
    hull.left_derivative(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn concave_kink_collapses() {
        let h = lower_hull(&[(0.0, 0.0), (1.0, 1.0), (2.0, 1.0)]).unwrap();
        assert_eq!(h.vertices(), &[(0.0, 0.0), (2.0, 1.0)]);
        assert_eq!(h.slopes(), vec![0.5]);
        assert_eq!(left_derivative(&h, 1.0).unwrap(), 0.5);
    }

    #[test]
    fn convex_input_is_kept() {
        let h = lower_hull(&[(0.0, 0.0), (1.0, 0.2), (2.0, 1.0)]).unwrap();
        assert_eq!(h.vertices().len(), 3);
        assert_relative_eq!(h.left_derivative(1.0).unwrap(), 0.2);
        assert_relative_eq!(h.left_derivative(1.5).unwrap(), 0.8);
        assert_relative_eq!(h.left_derivative(0.0).unwrap(), 0.2);
        assert!(h.left_derivative(2.5).is_err());
        assert!(h.left_derivative(-0.5).is_err());
    }

    #[test]
    fn collinear_points_are_dropped() {
        let h = lower_hull(&[(0.0, 0.0), (1.0, 1.0), (2.0, 2.0), (3.0, 3.0)]).unwrap();
        assert_eq!(h.vertices().len(), 2);
    }

    #[test]
    fn input_errors() {
        assert_eq!(lower_hull(&[(0.0, 0.0)]), Err(Error::InsufficientPoints(1)));
        assert_eq!(
            lower_hull(&[(0.0, 0.0), (0.0, 1.0)]),
            Err(Error::UnsortedInput(1))
        );
    }

    #[test]
    fn works_in_single_precision() {
        let h = lower_hull(&[(0.0f32, 0.0), (1.0, 1.0), (2.0, 1.0)]).unwrap();
        assert_eq!(h.slopes(), vec![0.5f32]);
    }
}
