//! Small dense solvers for the coefficient systems and polynomial fits.

use crate::scalar::Scalar;

/// Solves `a x = b` by Gaussian elimination with partial pivoting.
/// Returns `None` when a pivot is negligible relative to the matrix scale.
pub(crate) fn solve<T: Scalar>(mut a: Vec<Vec<T>>, mut b: Vec<T>) -> Option<Vec<T>> {
    let n = b.len();
    let scale = a
        .iter()
        .flat_map(|r| r.iter())
        .fold(T::zero(), |m, v| m.max(v.abs()));
    if scale == T::zero() {
        return None;
    }
    let tiny = scale * T::epsilon() * T::from_count(n.max(1) * 16);
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| {
            a[i][col]
                .abs()
                .partial_cmp(&a[j][col].abs())
                .unwrap_or(std::cmp::Ordering::Equal)
        })?;
        if !(a[pivot][col].abs() > tiny) {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            if f == T::zero() {
                continue;
            }
            let (upper, lower) = a.split_at_mut(row);
            for (t, &v) in lower[0][col..].iter_mut().zip(&upper[col][col..]) {
                *t = *t - f * v;
            }
            b[row] = b[row] - f * b[col];
        }
    }
    let mut x = vec![T::zero(); n];
    for row in (0..n).rev() {
        let mut s = b[row];
        for k in row + 1..n {
            s = s - a[row][k] * x[k];
        }
        x[row] = s / a[row][row];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

/// Least-squares coefficients of `y` on the columns `u^0, ..., u^degree`.
pub(crate) fn polyfit<T: Scalar>(u: &[T], y: &[T], degree: usize) -> Option<Vec<T>> {
    let p = degree + 1;
    let mut xtx = vec![vec![T::zero(); p]; p];
    let mut xty = vec![T::zero(); p];
    let mut pows = vec![T::one(); p];
    for (&ui, &yi) in u.iter().zip(y) {
        for k in 1..p {
            pows[k] = pows[k - 1] * ui;
        }
        for r in 0..p {
            xty[r] = xty[r] + pows[r] * yi;
            for c in 0..p {
                xtx[r][c] = xtx[r][c] + pows[r] * pows[c];
            }
        }
    }
    solve(xtx, xty)
}
