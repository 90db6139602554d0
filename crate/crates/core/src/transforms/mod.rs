//! Integral transforms between configuration spaces on `R` and the spaces of
//! (poly)analytic functions on `C`, applied pointwise by quadrature.
//!
//! Every `apply_*` evaluates its integral with the given rule and again with
//! half the order; the difference, plus the rounding scale of the sum, is
//! returned as [`TransformResult::estimated_error`]. Linear exponential
//! factors that depend on the external point stay in the integrand and do
//! not move the nodes.

mod bargmann;
mod coherent;
mod polyanalytic;
mod standard;

use num_complex::Complex64;

use crate::error::Result;
use crate::quadrature::{
    cached_rule, integrate_log_1d, integrate_log_2d, Envelope1D, Envelope2D, Quad1D, QuadRule1D,
    QuadRule2D, Quadrature,
};
use crate::spaces::QuadExponent;

pub use bargmann::{
    apply_Bs, apply_Bs_inverse, apply_Btilde, kernel_B, kernel_Btilde, BsImage,
};
pub use coherent::{apply_Sn, apply_Sn_conjugated, i_poly_eval, kernel_S_closed, kernel_S_series, SnImage};
pub use polyanalytic::{apply_Tkn, apply_Wn, apply_Wn_inverse, apply_Wn_inverse_as_printed, WnImage};
pub use standard::{
    apply_bprime, apply_standard_Bn, apply_standard_Bn_with, check_n_independence, g_declared,
    hermite_nu, standard_image_gram, BprimeImage, HermiteConvention, NIndependence,
    StandardBnImage,
};

/// A transform value with an a-posteriori error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformResult {
    pub value: Complex64,
    /// `|v_Q - v_{Q/2}|` plus the rounding scale of the `Q` sum.
    pub estimated_error: f64,
}

fn estimate(full: Quadrature, half: Quadrature) -> TransformResult {
    TransformResult {
        value: full.value,
        estimated_error: (full.value - half.value).norm() + full.roundoff(),
    }
}

/// `int val(x) e^{log(x)} dx`; the envelope is the real `x^2` coefficient of
/// `exponent` (linear parts are not folded).
fn transform_1d<F>(exponent: &Quad1D, rule: &QuadRule1D, f: F) -> Result<TransformResult>
where
    F: Fn(f64) -> (Complex64, Complex64),
{
    let env = Envelope1D::from_exponent(exponent, false)?;
    let half = cached_rule((rule.order() / 2).max(1))?;
    Ok(estimate(integrate_log_1d(&env, rule, &f), integrate_log_1d(&env, &half, &f)))
}

/// Nodes of a 1-D rule under a fixed envelope, with an integrand factor
/// evaluated once per node. Used by image functions, whose envelope does
/// not depend on the evaluation point.
struct CachedLine {
    nodes: Vec<(f64, f64, Complex64)>,
}

impl CachedLine {
    fn new<F: crate::quadrature::GaussianFn1D>(f: &F, exponent: &Quad1D, order: usize) -> Result<Self> {
        let env = Envelope1D::from_exponent(exponent, false)?;
        let rule = cached_rule(order)?;
        let nodes = env.nodes(&rule).into_iter().map(|(x, lw)| (x, lw, f.prefactor(x))).collect();
        Ok(Self { nodes })
    }

    /// `sum_i val_i e^{log_i + lw_i}` with `(val_i, log_i) = g(x_i, f(x_i))`.
    fn sum<G: Fn(f64, Complex64) -> (Complex64, Complex64)>(&self, g: G) -> Complex64 {
        self.nodes
            .iter()
            .map(|&(x, lw, fx)| {
                let (val, log) = g(x, fx);
                val * (log + lw).exp()
            })
            .sum()
    }
}

fn transform_2d<F>(exponent: &QuadExponent, rule: &QuadRule2D, f: F) -> Result<TransformResult>
where
    F: Fn(Complex64) -> (Complex64, Complex64),
{
    let env = Envelope2D::from_exponent(exponent, false)?;
    Ok(estimate(integrate_log_2d(&env, rule, &f), integrate_log_2d(&env, &rule.halved()?, &f)))
}

fn value_2d<F>(exponent: &QuadExponent, rule: &QuadRule2D, f: F) -> Result<Complex64>
where
    F: Fn(Complex64) -> (Complex64, Complex64),
{
    let env = Envelope2D::from_exponent(exponent, false)?;
    Ok(integrate_log_2d(&env, rule, f).value)
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}
