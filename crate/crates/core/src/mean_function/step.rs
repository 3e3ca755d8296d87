use crate::error::{Error, Result};
use crate::linalg::polyfit;
use crate::mean_function::br_coefficients;
use crate::scalar::Scalar;

/// Leading bias and variance constants of a bias-reduced derivative estimator.
#[derive(Debug, Clone, PartialEq)]
pub struct StepSizeConstants<T> {
    pub bias_const: T,
    pub var_const: T,
    pub s_lower: u32,
    /// Covariance kernel evaluated at all offset pairs.
    pub kernel: Vec<Vec<T>>,
}

impl<T: Scalar> StepSizeConstants<T> {
    /// Exponent `3 + 2 s_lower` of the MSE-optimal rate.
    pub fn exponent(&self) -> u32 {
        3 + 2 * self.s_lower
    }
}

/// Minimizer of `eps^{2(r - j)} B^2 + V / (n eps^{1 + 2j})` where `r` is the
/// order of the leading bias term.
pub fn step_for_bias_order<T: Scalar>(bias: T, var: T, j: u32, order: u32, n: usize) -> Result<T> {
    if bias == T::zero() || !bias.is_finite() {
        return Err(Error::ZeroBiasConstant);
    }
    if !(var > T::zero()) || !var.is_finite() {
        return Err(Error::InvalidArgument("variance constant must be positive".into()));
    }
    if j >= order {
        return Err(Error::InvalidArgument(format!("order j = {j} too large")));
    }
    if n == 0 {
        return Err(Error::EmptyData);
    }
    let num = T::from_count(1 + 2 * j as usize) * var;
    let den = T::from_count(2 * (order - j) as usize) * bias * bias;
    let expo = T::one() / T::from_count(1 + 2 * order as usize);
    Ok((num / den).powf(expo) * T::from_count(n).powf(-expo))
}

/// `((1 + 2j) / (2 (s + 1 - j)) V / B^2)^{1/(3 + 2s)} n^{-1/(3 + 2s)}`.
pub fn mse_optimal_step<T: Scalar>(
    consts: &StepSizeConstants<T>,
    j: u32,
    s_lower: u32,
    n: usize,
) -> Result<T> {
    step_for_bias_order(consts.bias_const, consts.var_const, j, s_lower + 1, n)
}

/// Rule-of-thumb step from constants whose bias enters at order `s_lower + 2`
/// (the `s_lower + 1` term vanishes for symmetric offsets).
pub fn rot_step_from_constants<T: Scalar>(
    consts: &StepSizeConstants<T>,
    j: u32,
    n: usize,
) -> Result<T> {
    step_for_bias_order(consts.bias_const, consts.var_const, j, consts.s_lower + 2, n)
}

/// Step used when the reference fit is unusable: `n^{-1/11}`.
pub fn rot_fallback<T: Scalar>(n: usize) -> T {
    T::from_count(n.max(1)).powf(-T::one() / T::lit(11.0))
}

/// Parametric reference fit behind the rule-of-thumb step.
#[derive(Debug, Clone, PartialEq)]
pub struct RotFit<T> {
    /// `gamma[k]` multiplies `(x - x_eval)^k`, `k = 0..=5`.
    pub gamma: Vec<T>,
    /// Residual variance of the polynomial fit.
    pub sigma2: T,
    pub mean_x: T,
    pub sd_x: T,
}

fn moments<T: Scalar>(x: &[T]) -> (T, T) {
    let n = T::from_count(x.len());
    let mean = x.iter().copied().sum::<T>() / n;
    let var = x.iter().map(|&v| (v - mean) * (v - mean)).sum::<T>() / n;
    (mean, var.sqrt())
}

fn rot_failed<T: Scalar>(reason: &str, n: usize) -> Error {
    Error::RotFitFailed {
        reason: reason.into(),
        fallback: rot_fallback::<T>(n).to_f64_lossy(),
    }
}

/// Degree-5 least-squares fit of `y` on `x - x_eval` and normal moments of `x`.
pub fn rot_fit<T: Scalar>(x: &[T], y: &[T], x_eval: T) -> Result<RotFit<T>> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    let n = x.len();
    if n < 8 {
        return Err(rot_failed::<T>("fewer than 8 observations", n));
    }
    let (mean_x, sd_x) = moments(x);
    if !(sd_x > T::zero()) {
        return Err(rot_failed::<T>("constant design", n));
    }
    let u: Vec<T> = x.iter().map(|&v| (v - x_eval) / sd_x).collect();
    let beta = polyfit(&u, y, 5).ok_or_else(|| rot_failed::<T>("singular design", n))?;
    let gamma: Vec<T> = beta
        .iter()
        .enumerate()
        .map(|(k, &b)| b / sd_x.powi(k as i32))
        .collect();
    let rss: T = u
        .iter()
        .zip(y)
        .map(|(&ui, &yi)| {
            let fit = beta.iter().rev().fold(T::zero(), |acc, &b| acc * ui + b);
            (yi - fit) * (yi - fit)
        })
        .sum();
    let sigma2 = rss / T::from_count(n - 6);
    Ok(RotFit { gamma, sigma2, mean_x, sd_x })
}

/// `m`-th derivative of the normal density at `x`, via Hermite polynomials.
pub(crate) fn normal_pdf_derivative<T: Scalar>(x: T, mean: T, sd: T, m: u32) -> T {
    let z = (x - mean) / sd;
    let (mut h_prev, mut h) = (T::zero(), T::one());
    for k in 0..m {
        let next = z * h - T::from_count(k as usize) * h_prev;
        h_prev = h;
        h = next;
    }
    let pdf = (-(z * z) / T::lit(2.0)).exp() / T::lit((2.0 * std::f64::consts::PI).sqrt());
    let sign = if m.is_multiple_of(2) { T::one() } else { -T::one() };
    sign * h * pdf / sd.powi(m as i32 + 1)
}

fn signed_min_kernel<T: Scalar>(c: &[T], scale: T) -> Vec<Vec<T>> {
    c.iter()
        .map(|&s| {
            c.iter()
                .map(|&t| {
                    if (s > T::zero()) == (t > T::zero()) {
                        scale * s.abs().min(t.abs())
                    } else {
                        T::zero()
                    }
                })
                .collect()
        })
        .collect()
}

fn assemble<T: Scalar>(d6: T, kernel_scale: T, j: u32, c: &[T]) -> Result<StepSizeConstants<T>> {
    let s_lower = c.len() as u32 - 1;
    let lambda = br_coefficients(j, s_lower, c)?;
    let moment6: T = lambda.iter().zip(c).map(|(&l, &ck)| l * ck.powi(6)).sum();
    let kernel = signed_min_kernel(c, kernel_scale);
    let mut var = T::zero();
    for (k, &lk) in lambda.iter().enumerate() {
        for (l, &ll) in lambda.iter().enumerate() {
            var = var + lk * ll * kernel[k][l];
        }
    }
    Ok(StepSizeConstants {
        bias_const: d6 / T::lit(720.0) * moment6,
        var_const: var,
        s_lower,
        kernel,
    })
}

/// Rule-of-thumb constants for regression-type data: polynomial mean of
/// degree 5 and a normal design density.
pub fn rot_constants<T: Scalar>(
    x: &[T],
    y: &[T],
    x_eval: T,
    j: u32,
    c: &[T],
) -> Result<StepSizeConstants<T>> {
    let fit = rot_fit(x, y, x_eval)?;
    let n = x.len();
    let (mean_y, sd_y) = moments(y);
    let scale_y = sd_y * sd_y + mean_y * mean_y;
    if !(sd_y > T::lit(1e-12) * mean_y.abs()) || !(fit.sigma2 > T::lit(1e-12) * scale_y) || !(fit.sigma2 > T::min_positive_value()) {
        return Err(rot_failed::<T>("zero residual variance", n));
    }
    // Sixth derivative of (mu - mu(x_eval)) * f at x_eval by the Leibniz rule.
    let mut d6 = T::zero();
    let mut fact = T::one();
    for k in 1..=5u32 {
        fact = fact * T::from_count(k as usize);
        let binom = T::lit([5.0, 10.0, 10.0, 5.0, 1.0][k as usize - 1]);
        let fder = normal_pdf_derivative(x_eval, fit.mean_x, fit.sd_x, 5 - k);
        d6 = d6 + binom * fact * fit.gamma[k as usize] * fder;
    }
    let f_hat = normal_pdf_derivative(x_eval, fit.mean_x, fit.sd_x, 0);
    assemble(d6, f_hat * fit.sigma2, j, c)
}

fn finish<T: Scalar>(consts: Result<StepSizeConstants<T>>, j: u32, n: usize) -> Result<T> {
    let consts = consts?;
    let scale = consts.var_const.abs().sqrt();
    if !(consts.bias_const.abs() > T::lit(1e-12) * scale) {
        return Err(rot_failed::<T>("negligible bias constant", n));
    }
    match rot_step_from_constants(&consts, j, n) {
        Ok(eps) if eps.is_finite() && eps > T::zero() => Ok(eps),
        Ok(_) | Err(_) => Err(rot_failed::<T>("degenerate constants", n)),
    }
}

/// Rule-of-thumb step for `D_j` with regression-type data and offsets
/// `(1, -1, 2, -2)`. On failure the error carries the `n^{-1/11}` fallback.
pub fn rot_step_size<T: Scalar>(x: &[T], y: &[T], x_eval: T, j: u32) -> Result<T> {
    let c = super::default_offsets::<T>();
    finish(rot_constants(x, y, x_eval, j, &c), j, x.len())
}

/// Density analogue of [`rot_step_size`]: normal reference density, so the
/// sixth derivative of `F - theta x` is the fifth derivative of the density.
pub fn rot_step_size_density<T: Scalar>(samples: &[T], x_eval: T, j: u32) -> Result<T> {
    let n = samples.len();
    if n < 2 {
        return Err(rot_failed::<T>("fewer than 2 observations", n));
    }
    let (mean, sd) = moments(samples);
    if !(sd > T::zero()) {
        return Err(rot_failed::<T>("constant sample", n));
    }
    let c = super::default_offsets::<T>();
    let d6 = normal_pdf_derivative(x_eval, mean, sd, 5);
    let f_hat = normal_pdf_derivative(x_eval, mean, sd, 0);
    finish(assemble(d6, f_hat, j, &c), j, n)
}

/// Step from a rule-of-thumb result, substituting the fallback on failure.
pub fn step_or_fallback<T: Scalar>(res: Result<T>, n: usize) -> Result<T> {
    match res {
        Ok(eps) => Ok(eps),
        Err(Error::RotFitFailed { .. }) => Ok(rot_fallback(n)),
        Err(e) => Err(e),
    }
}
