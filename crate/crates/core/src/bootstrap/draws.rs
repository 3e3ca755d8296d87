use crate::bootstrap::BootstrapPlan;
use crate::error::{Error, Result};
use crate::estimators::MonotoneModel;
use crate::gcm::{gcm_left_slope, EvalFn, Scale};
use crate::mean_function::PerturbationPoly;
use crate::scalar::Scalar;

/// One reshaped bootstrap draw.
///
/// The objective is `Gamma* - Gamma + theta_hat * Phi + M(. - x)`, composed
/// with the reweighted scale. Subtracting `theta_hat * Phi*` first keeps the
/// step part small, which adds the constant `theta_hat` back to the slope.
pub fn reshaped_draw<T: Scalar>(
    model: &MonotoneModel<T>,
    theta_hat: T,
    pert: &PerturbationPoly<T>,
    weights: &[T],
    plan: &BootstrapPlan,
) -> Result<T> {
    let (g_star, phi_star) = model.reweight(weights)?;
    let diff = g_star.zip_with(model.gamma(), |a, b| a - b)?;
    let (step, linear) = match (&phi_star, model.phi()) {
        (Scale::Step(ps), Scale::Step(p)) => {
            let corr = p.zip_with(ps, |a, b| theta_hat * (a - b))?;
            (diff.zip_with(&corr, |a, b| a + b)?, None)
        }
        (Scale::Linear(ps), Scale::Linear(p)) => {
            let linear = if ps == p {
                None
            } else {
                Some(p.zip_with(ps, |a, b| theta_hat * (a - b))?)
            };
            (diff, linear)
        }
        _ => return Err(Error::InvalidData("scale type changed under reweighting".into())),
    };
    let h = EvalFn {
        step,
        linear,
        poly: (!pert.is_zero()).then(|| pert.clone()),
        center: model.x_eval(),
    };
    let u_star = model.u_hat_for(&phi_star);
    let slope = gcm_left_slope(&h, &phi_star, u_star, model.x_eval(), plan.grid_points)?;
    Ok(theta_hat + slope)
}

/// Estimator recomputed on the reweighted primitives.
pub fn naive_draw<T: Scalar>(
    model: &MonotoneModel<T>,
    weights: &[T],
    plan: &BootstrapPlan,
) -> Result<T> {
    let (g_star, phi_star) = model.reweight(weights)?;
    let u_star = model.u_hat_for(&phi_star);
    gcm_left_slope(
        &EvalFn::from_step(g_star),
        &phi_star,
        u_star,
        model.x_eval(),
        plan.grid_points,
    )
}
