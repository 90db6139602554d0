//! The weighted space `H^{2,s}(C) = L^2(C, omega_s dlambda)`, its bases and kernels.
//!
//! For `0 < s < 1` the weight is `omega_s(z) = exp(alpha (z^2 + zbar^2) - nu |z|^2)`
//! with `alpha = (1+s^2)/(4s)` and `nu = (1-s^2)/(2s)`. In real coordinates the
//! exponent is `s x^2 - y^2 / s`: the weight grows along the real axis, and
//! only the `exp(-Re z^2)`-type decay of the basis functions makes pairings
//! integrable.

mod basis;
mod exppoly;
mod identities;
mod kernel;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub use basis::{
    fock_exppoly, phi, phi_exppoly, psi, psi_exppoly, psi_mn, psi_mn_exppoly, psi_mn_seq,
    psi_seq, psi_tilde, psi_tilde_exppoly, PSI_MN_MAX_M, PSI_MN_MAX_N,
};
pub use exppoly::{Declared, ExpPoly, GaussianFn, QuadExponent, XyForm};
pub use identities::{hnn_derivative_identity, hnn_nabla_identity, DerivativeSign};
pub use kernel::{
    fock_kernel, kernel_K, kernel_Kn, kernel_n_series, kernel_series, phi_kernel_series,
    rkhs_conjugate, KernelSection, PolyKernel, DEFAULT_SERIES_TERMS,
};

/// The deformation parameter `s` in `(0,1)` and its derived constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SParam {
    s: f64,
    alpha: f64,
    nu: f64,
}

impl SParam {
    pub fn new(s: f64) -> Result<Self> {
        if !(s > 0.0 && s < 1.0) {
            return Err(Error::InvalidParameter(format!("s must lie in (0,1), got {s}")));
        }
        Ok(Self { s, alpha: (1.0 + s * s) / (4.0 * s), nu: (1.0 - s * s) / (2.0 * s) })
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    /// `(1+s^2)/(4s)`, always above `1/2`.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `(1-s^2)/(2s)`, always positive.
    pub fn nu(&self) -> f64 {
        self.nu
    }

    /// `alpha - 1/2 = (1-s)^2/(4s)`, evaluated without cancellation.
    pub fn gamma(&self) -> f64 {
        let d = 1.0 - self.s;
        d * d / (4.0 * self.s)
    }

    /// Ratio `sqrt((1-s)/(1+s))` between consecutive `psi_m` normalizations.
    pub fn lambda(&self) -> f64 {
        ((1.0 - self.s) / (1.0 + self.s)).sqrt()
    }

    /// Exponent of `omega_s`.
    pub fn omega_exponent(&self) -> QuadExponent {
        let a = Complex64::new(self.alpha, 0.0);
        QuadExponent { zz: a, bb: a, mix: Complex64::new(-self.nu, 0.0), ..Default::default() }
    }
}

pub fn make_sparam(s: f64) -> Result<SParam> {
    SParam::new(s)
}

/// `omega_s(z) = exp(s x^2 - y^2/s)` for `z = x + iy`.
pub fn weight_omega(z: Complex64, sp: &SParam) -> f64 {
    (sp.s * z.re * z.re - z.im * z.im / sp.s).exp()
}

/// `exp(sign * alpha * z^2)`; `sign = -1` realizes `M_{-alpha}`.
pub fn m_alpha_factor(z: Complex64, sp: &SParam, sign: i8) -> Complex64 {
    (f64::from(sign.signum()) * sp.alpha * z * z).exp()
}
