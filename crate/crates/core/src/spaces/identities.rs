//! Two ways of writing `H^nu_{n,n}(z-w, zbar-wbar)` through derivatives of a
//! Gaussian in `(z, wbar)`.
//!
//! Both are computed symbolically in the variables `X = z`, `Y = wbar` with
//! `zbar` and `w` held at fixed values, and return `(lhs, rhs)` so the caller
//! decides how to compare.

use num_complex::Complex64;

use super::SParam;
use crate::bipoly::{complex_hermite_rodrigues, twisted_derivative, BiPoly, Var};
use crate::error::Result;

/// Sign of the `z wbar` term in the Gaussian of the derivative form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivativeSign {
    /// `e^{-nu(|z|^2 + |w|^2 + z wbar)}` inside, `e^{nu(|z|^2 + |w|^2 - z wbar)}` outside.
    Printed,
    /// `-z wbar` in both exponentials.
    Corrected,
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn sign(n: usize) -> f64 {
    if n % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `(-1)^n e^{gamma (z^2 + wbar^2) - nu z wbar} nabla_z^n conj(nabla_w)^n e^{-gamma (z^2 + wbar^2) + nu z wbar}`
/// against `H^nu_{n,n}(z - w)`, with `nabla = nabla_{nu, alpha - 1/2}`.
pub fn hnn_nabla_identity(
    n: usize,
    z: Complex64,
    w: Complex64,
    sp: &SParam,
) -> Result<(Complex64, Complex64)> {
    let (nu, g) = (sp.nu(), sp.gamma());
    // E = -g X^2 - g Y^2 + nu X Y
    let de_dx = BiPoly::from_terms([(1, 0, c(-2.0 * g)), (0, 1, c(nu))]);
    let de_dy = BiPoly::from_terms([(0, 1, c(-2.0 * g)), (1, 0, c(nu))]);
    // nabla_z multiplies by nu zbar - 2g X, conj(nabla_w) by nu w - 2g Y.
    let mult_x = BiPoly::from_terms([(0, 0, nu * z.conj()), (1, 0, c(-2.0 * g))]);
    let mult_y = BiPoly::from_terms([(0, 0, nu * w), (0, 1, c(-2.0 * g))]);
    let mut p = BiPoly::one();
    for _ in 0..n {
        p = &(&mult_y * &p) - &twisted_derivative(&p, Var::Zbar, &de_dy);
    }
    for _ in 0..n {
        p = &(&mult_x * &p) - &twisted_derivative(&p, Var::Z, &de_dx);
    }
    let lhs = sign(n) * p.eval_xy(z, w.conj());
    let rhs = complex_hermite_rodrigues(n, n, nu)?.eval(z - w);
    Ok((lhs, rhs))
}

/// `(-1)^n e^{outer} d_z^n d_wbar^n e^{inner}` against `H^nu_{n,n}(z - w)`.
pub fn hnn_derivative_identity(
    n: usize,
    z: Complex64,
    w: Complex64,
    nu: f64,
    variant: DerivativeSign,
) -> Result<(Complex64, Complex64)> {
    let rhs = complex_hermite_rodrigues(n, n, nu)?.eval(z - w);
    let (zb, y) = (z.conj(), w.conj());
    let sigma = match variant {
        DerivativeSign::Printed => 1.0,
        DerivativeSign::Corrected => -1.0,
    };
    // inner = -nu (X zbar + w Y + sigma X Y)
    let de_dx = BiPoly::from_terms([(0, 0, -nu * zb), (0, 1, c(-nu * sigma))]);
    let de_dy = BiPoly::from_terms([(0, 0, -nu * w), (1, 0, c(-nu * sigma))]);
    let mut p = BiPoly::one();
    for _ in 0..n {
        p = twisted_derivative(&p, Var::Zbar, &de_dy);
    }
    for _ in 0..n {
        p = twisted_derivative(&p, Var::Z, &de_dx);
    }
    let inner = -nu * (z * zb + w * y + sigma * z * y);
    let outer = nu * (z * zb + w * y - z * y);
    let lhs = sign(n) * p.eval_xy(z, y) * (inner + outer).exp();
    Ok((lhs, rhs))
}
