use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::survival::RiskSets;
use crate::gcm::{PwLinear, Scale, StepFn};
use crate::scalar::Scalar;

/// Estimator family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Density,
    Isoreg,
    CensoredDensity,
    Hazard,
    CurrentStatus,
}

impl Kind {
    pub fn as_str(&self) -> &'static str {
        match self {
            Kind::Density => "density",
            Kind::Isoreg => "isoreg",
            Kind::CensoredDensity => "censored_density",
            Kind::Hazard => "hazard",
            Kind::CurrentStatus => "current_status",
        }
    }

    /// Regression-type kinds have an empirical distribution function as scale.
    pub fn is_regression(&self) -> bool {
        matches!(self, Kind::Isoreg | Kind::CurrentStatus)
    }
}

impl std::fmt::Display for Kind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Kind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "density" => Ok(Kind::Density),
            "isoreg" => Ok(Kind::Isoreg),
            "censored" | "censored_density" => Ok(Kind::CensoredDensity),
            "hazard" => Ok(Kind::Hazard),
            "current_status" => Ok(Kind::CurrentStatus),
            other => Err(Error::InvalidArgument(format!("unknown kind '{other}'"))),
        }
    }
}

/// Observation-level structure needed to recompute the primitives under
/// bootstrap weights.
#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Components<T> {
    Density {
        knots: Vec<T>,
        slot: Vec<usize>,
        lo: T,
        hi: T,
    },
    Regression {
        knots: Vec<T>,
        slot: Vec<usize>,
        y: Vec<T>,
    },
    Survival {
        risk: RiskSets<T>,
        /// Unit-weight event counts and risk sets.
        d: Vec<T>,
        r: Vec<T>,
        /// Kaplan-Meier values at the distinct times.
        surv: Vec<T>,
        hi: T,
        hazard: bool,
    },
}

impl<T: Scalar> Components<T> {
    pub fn n(&self) -> usize {
        match self {
            Components::Density { slot, .. } | Components::Regression { slot, .. } => slot.len(),
            Components::Survival { risk, .. } => risk.slot.len(),
        }
    }

    /// Primitives `(gamma, phi)` under weights `w`, normalized by their sum.
    pub fn reweight(&self, w: &[T]) -> Result<(StepFn<T>, Scale<T>)> {
        let n = self.n();
        if w.len() != n {
            return Err(Error::LengthMismatch(w.len(), n));
        }
        if w.iter().any(|v| !(v.is_finite() && *v >= T::zero())) {
            return Err(Error::InvalidArgument("weights must be finite and nonnegative".into()));
        }
        let total: T = w.iter().copied().sum();
        if !(total > T::zero()) {
            return Err(Error::InvalidArgument("weights sum to zero".into()));
        }
        match self {
            Components::Density { knots, slot, lo, hi } => {
                let mut mass = vec![T::zero(); knots.len()];
                for (&s, &wi) in slot.iter().zip(w) {
                    mass[s] = mass[s] + wi;
                }
                let values = cumulative(&mass, total);
                let gamma = StepFn::from_parts(knots.clone(), values, *lo, *hi, T::zero());
                Ok((gamma, Scale::Linear(PwLinear::identity(*lo, *hi)?)))
            }
            Components::Regression { knots, slot, y } => {
                let mut mass = vec![T::zero(); knots.len()];
                let mut resp = vec![T::zero(); knots.len()];
                for ((&s, &wi), &yi) in slot.iter().zip(w).zip(y) {
                    mass[s] = mass[s] + wi;
                    resp[s] = resp[s] + wi * yi;
                }
                let (lo, hi) = (knots[0], knots[knots.len() - 1]);
                let gamma = StepFn::from_parts(
                    knots.clone(),
                    cumulative(&resp, total),
                    lo,
                    hi,
                    T::zero(),
                );
                let mut phi_vals = Vec::with_capacity(knots.len());
                let mut acc = T::zero();
                for &m in &mass {
                    acc = acc + m;
                    phi_vals.push(acc / total);
                }
                let phi = StepFn::from_parts(knots.clone(), phi_vals, lo, hi, T::zero());
                Ok((gamma, Scale::Step(phi)))
            }
            Components::Survival { risk, d, r, surv, hi, hazard } => {
                let (dw, rw) = risk.weighted_counts(w);
                let scale = T::from_count(n) / total;
                let mut knots = Vec::new();
                let mut values = Vec::new();
                let mut infl = T::zero();
                for k in 0..risk.times.len() {
                    if d[k] == T::zero() {
                        continue;
                    }
                    infl = infl + (dw[k] * r[k] - rw[k] * d[k]) / (r[k] * r[k]);
                    knots.push(risk.times[k]);
                    values.push((T::one() - surv[k]) + surv[k] * (scale * infl));
                }
                let gamma = StepFn::from_parts(knots, values, T::zero(), *hi, T::zero());
                let phi = if *hazard {
                    Scale::Linear(integrated_survival(&gamma, *hi)?)
                } else {
                    Scale::Linear(PwLinear::identity(T::zero(), *hi)?)
                };
                Ok((gamma, phi))
            }
        }
    }
}

fn cumulative<T: Scalar>(mass: &[T], total: T) -> Vec<T> {
    let mut acc = T::zero();
    mass.iter()
        .map(|&m| {
            acc = acc + m;
            acc / total
        })
        .collect()
}

/// `x -> int_0^x max(1 - gamma(u), 0) du` on `[0, hi]`, exact for step `gamma`.
pub(crate) fn integrated_survival<T: Scalar>(gamma: &StepFn<T>, hi: T) -> Result<PwLinear<T>> {
    let mut xs = vec![T::zero()];
    let mut ys = vec![T::zero()];
    let mut level = (T::one() - gamma.value_before_first()).max(T::zero());
    for (&k, &v) in gamma.knots().iter().zip(gamma.values()) {
        if k >= hi {
            break;
        }
        let (x0, y0) = (xs[xs.len() - 1], ys[ys.len() - 1]);
        if k > x0 {
            xs.push(k);
            ys.push(y0 + level * (k - x0));
        }
        level = (T::one() - v).max(T::zero());
    }
    let (x0, y0) = (xs[xs.len() - 1], ys[ys.len() - 1]);
    if hi > x0 {
        xs.push(hi);
        ys.push(y0 + level * (hi - x0));
    } else {
        // Degenerate interval: keep a unit-length tail so the map stays valid.
        xs.push(x0 + T::one());
        ys.push(y0 + level);
    }
    PwLinear::new(xs, ys)
}

/// A fitted generalized Grenander-type estimator at a fixed point.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneModel<T> {
    pub(crate) kind: Kind,
    pub(crate) gamma: StepFn<T>,
    pub(crate) phi: Scale<T>,
    pub(crate) u_hat: T,
    pub(crate) x_eval: T,
    pub(crate) components: Components<T>,
}

impl<T: Scalar> MonotoneModel<T> {
    pub(crate) fn from_components(kind: Kind, x_eval: T, components: Components<T>) -> Result<Self> {
        let ones = vec![T::one(); components.n()];
        let (gamma, phi) = components.reweight(&ones)?;
        let u_hat = match (&phi, kind.is_regression()) {
            (_, true) => T::one(),
            (scale, false) => scale.top(),
        };
        Ok(MonotoneModel { kind, gamma, phi, u_hat, x_eval, components })
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    /// Estimated primitive `Gamma`.
    pub fn gamma(&self) -> &StepFn<T> {
        &self.gamma
    }

    /// Estimated time-change `Phi`.
    pub fn phi(&self) -> &Scale<T> {
        &self.phi
    }

    pub fn u_hat(&self) -> T {
        self.u_hat
    }

    pub fn x_eval(&self) -> T {
        self.x_eval
    }

    pub fn n(&self) -> usize {
        self.components.n()
    }

    /// Interval on which the centred primitive may be evaluated by the
    /// numerical-derivative estimators.
    pub fn nd_domain(&self) -> (T, T) {
        if self.kind.is_regression() {
            (T::neg_infinity(), T::infinity())
        } else {
            (T::zero(), T::infinity())
        }
    }

    /// Primitives recomputed under observation weights. Unit weights
    /// reproduce `(gamma, phi)` exactly.
    pub fn reweight(&self, w: &[T]) -> Result<(StepFn<T>, Scale<T>)> {
        self.components.reweight(w)
    }

    /// Upper limit of the bootstrap hull: `u_hat`, except for the hazard
    /// where it follows the reweighted integrated survival.
    pub fn u_hat_for(&self, phi_star: &Scale<T>) -> T {
        match self.kind {
            Kind::Hazard => phi_star.top(),
            _ => self.u_hat,
        }
    }
}
