use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// How the degree of the mean perturbation is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QMode {
    /// Characteristic exponent known: a single monomial of degree `q + 1`.
    Known(u32),
    /// Unknown exponent bounded by `qbar`: even powers `2, 4, ..., qbar + 1`.
    Robust(u32),
}

impl QMode {
    /// Orders `j` whose derivative estimates the perturbation needs.
    pub fn required_orders(&self) -> Vec<u32> {
        match *self {
            QMode::Known(q) => vec![q],
            QMode::Robust(qbar) => (1..=qbar.div_ceil(2)).map(|l| 2 * l - 1).collect(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            QMode::Known(q) if q % 2 == 1 => Ok(()),
            QMode::Robust(qbar) if qbar >= 3 && qbar % 2 == 1 => Ok(()),
            QMode::Known(q) => Err(Error::InvalidArgument(format!("q = {q} must be odd"))),
            QMode::Robust(qbar) => Err(Error::InvalidArgument(format!(
                "qbar = {qbar} must be odd and at least 3"
            ))),
        }
    }
}

/// Estimated mean perturbation `v -> sum_l coef_l v^(2l)` with nonnegative
/// coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationPoly<T> {
    coeffs: BTreeMap<u32, T>,
    q_mode: Option<QMode>,
    d_estimates: BTreeMap<u32, T>,
    floored: Vec<u32>,
}

impl<T: Scalar> PerturbationPoly<T> {
    /// The zero polynomial.
    pub fn zero() -> Self {
        PerturbationPoly {
            coeffs: BTreeMap::new(),
            q_mode: None,
            d_estimates: BTreeMap::new(),
            floored: Vec::new(),
        }
    }

    /// Coefficients keyed by degree.
    pub fn coeffs(&self) -> &BTreeMap<u32, T> {
        &self.coeffs
    }

    pub fn q_mode(&self) -> Option<QMode> {
        self.q_mode
    }

    /// Raw derivative estimates the polynomial was built from.
    pub fn d_estimates(&self) -> &BTreeMap<u32, T> {
        &self.d_estimates
    }

    /// Orders whose estimate was negative and replaced by zero.
    pub fn floored(&self) -> &[u32] {
        &self.floored
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.values().all(|&c| c == T::zero())
    }

    pub fn eval(&self, v: T) -> T {
        self.coeffs
            .iter()
            .fold(T::zero(), |acc, (&d, &c)| acc + c * v.powi(d as i32))
    }

    pub fn derivative(&self, v: T) -> T {
        self.coeffs.iter().fold(T::zero(), |acc, (&d, &c)| {
            acc + c * T::from_count(d as usize) * v.powi(d as i32 - 1)
        })
    }
}

/// Builds the perturbation from derivative estimates `j -> D_j`.
///
/// Negative estimates are floored at zero and reported through
/// [`PerturbationPoly::floored`].
pub fn build_perturbation<T: Scalar>(
    d_estimates: &BTreeMap<u32, T>,
    mode: QMode,
) -> Result<PerturbationPoly<T>> {
    mode.validate()?;
    let mut coeffs = BTreeMap::new();
    let mut floored = Vec::new();
    for j in mode.required_orders() {
        let d = *d_estimates.get(&j).ok_or(Error::IncompleteDEstimates(j))?;
        if !d.is_finite() {
            return Err(Error::InvalidArgument(format!("D_{j} is not finite")));
        }
        if d < T::zero() {
            floored.push(j);
        }
        coeffs.insert(j + 1, d.max(T::zero()));
    }
    Ok(PerturbationPoly {
        coeffs,
        q_mode: Some(mode),
        d_estimates: d_estimates.clone(),
        floored,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(pairs: &[(u32, f64)]) -> BTreeMap<u32, f64> {
        pairs.iter().copied().collect()
    }

    #[test]
    fn known_q_monomial() {
        let p = build_perturbation(&d(&[(1, 1.0)]), QMode::Known(1)).unwrap();
        assert_eq!(p.eval(0.5), 0.25);
        assert_eq!(p.eval(-2.0), 4.0);
    }

    #[test]
    fn robust_floors_negative() {
        let p = build_perturbation(&d(&[(1, -0.2), (3, 0.5)]), QMode::Robust(3)).unwrap();
        assert_eq!(p.eval(1.0), 0.5);
        assert_eq!(p.eval(2.0), 8.0);
        assert_eq!(p.floored(), &[1]);
    }

    #[test]
    fn robust_value_and_slope() {
        let p = build_perturbation(&d(&[(1, 1.0), (3, 1.0)]), QMode::Robust(3)).unwrap();
        assert_eq!(p.eval(1.0), 2.0);
        assert_eq!(p.derivative(0.0), 0.0);
        assert_eq!(p.derivative(1.0), 6.0);
    }

    #[test]
    fn errors() {
        assert_eq!(
            build_perturbation(&d(&[(1, 1.0)]), QMode::Robust(3)),
            Err(Error::IncompleteDEstimates(3))
        );
        assert!(build_perturbation(&d(&[(2, 1.0)]), QMode::Known(2)).is_err());
        assert!(build_perturbation(&d(&[(1, 1.0)]), QMode::Robust(1)).is_err());
    }
}
