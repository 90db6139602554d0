//! `W^s_n: X_s(C) -> X_{n,s}(C)`, its inverse, and the Fock-space
//! transforms `T^nu_{k,n}` it is conjugated from.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{factorial, transform_2d, value_2d, TransformResult};
use crate::bipoly::complex_hermite_rodrigues;
use crate::error::Result;
use crate::quadrature::{Envelope2D, QuadRule2D};
use crate::spaces::{GaussianFn, QuadExponent, SParam};

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// `(nu/pi) (nu^n/n!)^(1/2)`.
fn wn_const(n: usize, nu: f64) -> f64 {
    nu / PI * (nu.powi(n as i32) / factorial(n)).sqrt()
}

/// Exponent in `xi` of the `W_n` kernel: `-nu|xi|^2 + alpha xi^2 + nu xibar z - alpha z^2`.
fn wn_exponent(z: Complex64, sp: &SParam) -> QuadExponent {
    QuadExponent {
        zz: c(sp.alpha()),
        mix: c(-sp.nu()),
        b_lin: sp.nu() * z,
        c0: -sp.alpha() * z * z,
        ..Default::default()
    }
}

/// `[W_n psi](z) = (nu/pi)(nu^n/n!)^(1/2) e^{-alpha z^2}
/// int e^{-nu|xi|^2 + alpha xi^2 + nu xibar z} (zbar - xibar)^n psi(xi) dlambda(xi)`.
#[allow(non_snake_case)]
pub fn apply_Wn<P: GaussianFn>(
    psi: &P,
    n: usize,
    z: Complex64,
    sp: &SParam,
    rule: &QuadRule2D,
) -> Result<TransformResult> {
    let e = psi.exponent() + wn_exponent(z, sp);
    let k = wn_const(n, sp.nu());
    let zb = z.conj();
    transform_2d(&e, rule, |xi| (k * (zb - xi.conj()).powu(n as u32) * psi.prefactor(xi), e.eval(xi)))
}

/// `W_n^{-1} = M_{-alpha} T_{n,0} M_alpha`:
/// `(nu/pi)(nu^n/n!)^(1/2) e^{-alpha z^2} int e^{-nu|xi|^2 + alpha xi^2 + nu xibar z} (xi - z)^n psi(xi) dlambda(xi)`.
#[allow(non_snake_case)]
pub fn apply_Wn_inverse<P: GaussianFn>(
    psi: &P,
    n: usize,
    z: Complex64,
    sp: &SParam,
    rule: &QuadRule2D,
) -> Result<TransformResult> {
    let e = psi.exponent() + wn_exponent(z, sp);
    let k = wn_const(n, sp.nu());
    transform_2d(&e, rule, |xi| (k * (xi - z).powu(n as u32) * psi.prefactor(xi), e.eval(xi)))
}

/// The inverse with the multipliers in the other order,
/// `M_alpha T_{n,0} M_{-alpha}`. Its `xi`-integrand grows along the
/// imaginary axis once `s > 1/3`, in which case this returns
/// [`crate::Error::NotIntegrable`].
#[allow(non_snake_case)]
pub fn apply_Wn_inverse_as_printed<P: GaussianFn>(
    psi: &P,
    n: usize,
    z: Complex64,
    sp: &SParam,
    rule: &QuadRule2D,
) -> Result<TransformResult> {
    let e = psi.exponent()
        + QuadExponent {
            zz: c(-sp.alpha()),
            mix: c(-sp.nu()),
            b_lin: sp.nu() * z,
            c0: sp.alpha() * z * z,
            ..Default::default()
        };
    let k = wn_const(n, sp.nu());
    transform_2d(&e, rule, |xi| (k * (xi - z).powu(n as u32) * psi.prefactor(xi), e.eval(xi)))
}

/// `[T_{k,n} psi](z) = (-1)^n nu / (pi sqrt(k! n! nu^(k+n)))
/// int e^{-nu|xi|^2 + nu xibar z} H^nu_{k,n}(xi - z) psi(xi) dlambda(xi)`.
#[allow(non_snake_case)]
pub fn apply_Tkn<P: GaussianFn>(
    psi: &P,
    k: usize,
    n: usize,
    nu: f64,
    z: Complex64,
    rule: &QuadRule2D,
) -> Result<TransformResult> {
    let h = complex_hermite_rodrigues(k, n, nu)?;
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    let scale = sign * nu / (PI * (factorial(k) * factorial(n) * nu.powi((k + n) as i32)).sqrt());
    let e = psi.exponent()
        + QuadExponent { mix: c(-nu), b_lin: nu * z, ..Default::default() };
    transform_2d(&e, rule, |xi| (scale * h.eval(xi - z) * psi.prefactor(xi), e.eval(xi)))
}

/// `z -> [W_n psi](z)` with a caller-declared image exponent (`-z^2/2` for
/// `psi` in the span of the `psi_m`).
pub struct WnImage<P> {
    psi: P,
    n: usize,
    sp: SParam,
    rule: QuadRule2D,
    image_exponent: QuadExponent,
}

impl<P: GaussianFn> WnImage<P> {
    pub fn new(psi: P, n: usize, sp: &SParam, rule: QuadRule2D, image_exponent: QuadExponent) -> Result<Self> {
        Envelope2D::from_exponent(&(psi.exponent() + wn_exponent(c(0.0), sp)), false)?;
        Ok(Self { psi, n, sp: *sp, rule, image_exponent })
    }
}

impl<P: GaussianFn> GaussianFn for WnImage<P> {
    fn exponent(&self) -> QuadExponent {
        self.image_exponent
    }
    fn prefactor(&self, z: Complex64) -> Complex64 {
        let e = self.psi.exponent() + wn_exponent(z, &self.sp);
        let shift = -self.image_exponent.eval(z);
        let k = wn_const(self.n, self.sp.nu());
        let zb = z.conj();
        value_2d(&e, &self.rule, |xi| {
            (k * (zb - xi.conj()).powu(self.n as u32) * self.psi.prefactor(xi), e.eval(xi) + shift)
        })
        .unwrap_or(Complex64::new(f64::NAN, f64::NAN))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bipoly::{nabla_power, OperatorParams};
    use crate::spaces::{fock_exppoly, psi, psi_exppoly, psi_mn_exppoly, ExpPoly};

    fn pts() -> [Complex64; 3] {
        [Complex64::new(0.4, -0.3), Complex64::new(-1.0, 0.8), Complex64::new(1.2, 1.0)]
    }

    #[test]
    fn level_zero_is_identity() {
        let sp = SParam::new(0.5).unwrap();
        let rule = QuadRule2D::square(96).unwrap();
        for m in 0..4 {
            for z in pts() {
                let v = apply_Wn(&psi_exppoly(m, &sp), 0, z, &sp, &rule).unwrap().value;
                assert!((v - psi(m, z, &sp)).norm() < 1e-7);
                let v = apply_Wn_inverse(&psi_exppoly(m, &sp), 0, z, &sp, &rule).unwrap().value;
                assert!((v - psi(m, z, &sp)).norm() < 1e-7);
            }
        }
    }

    #[test]
    fn maps_psi_m_to_psi_mn_and_back() {
        let rule = QuadRule2D::square(96).unwrap();
        for s in [0.3, 0.7] {
            let sp = SParam::new(s).unwrap();
            for (m, n) in [(2, 1), (0, 2), (4, 2)] {
                for z in pts() {
                    let sym = psi_mn_exppoly(m, n, &sp);
                    let v = apply_Wn(&psi_exppoly(m, &sp), n, z, &sp, &rule).unwrap();
                    assert!((v.value - sym.eval(z)).norm() < 1e-6, "s={s} m={m} n={n}");
                    let back = apply_Wn_inverse(&sym, n, z, &sp, &rule).unwrap();
                    assert!((back.value - psi(m, z, &sp)).norm() < 1e-6, "s={s} m={m} n={n}");
                }
            }
        }
    }

    #[test]
    fn printed_inverse_diverges_for_large_s() {
        let sp = SParam::new(0.5).unwrap();
        let rule = QuadRule2D::square(16).unwrap();
        let r = apply_Wn_inverse_as_printed(&psi_mn_exppoly(1, 1, &sp), 1, Complex64::new(0.1, 0.0), &sp, &rule);
        assert!(matches!(r, Err(crate::Error::NotIntegrable(_))));
    }

    #[test]
    fn t0n_is_normalized_nabla_power() {
        let nu = 0.8;
        let rule = QuadRule2D::square(64).unwrap();
        let params = OperatorParams::new(nu, c(0.0)).unwrap();
        for (m, n) in [(0, 1), (2, 1), (3, 2)] {
            let f = fock_exppoly(m, nu);
            let expect = ExpPoly::new(nabla_power(&f.poly, &params, n), QuadExponent::zero())
                .scale(c((nu.powi(n as i32) * factorial(n)).sqrt().recip()));
            for z in pts() {
                let v = apply_Tkn(&f, 0, n, nu, z, &rule).unwrap().value;
                assert!((v - expect.eval(z)).norm() < 1e-6, "m={m} n={n}");
            }
        }
    }

    #[test]
    fn wn_is_conjugated_t0n() {
        let sp = SParam::new(0.4).unwrap();
        let rule = QuadRule2D::square(96).unwrap();
        let p = psi_exppoly(3, &sp);
        let lifted = p.m_gamma(sp.alpha());
        for z in pts() {
            let t = apply_Tkn(&lifted, 0, 2, sp.nu(), z, &rule).unwrap().value;
            let w = apply_Wn(&p, 2, z, &sp, &rule).unwrap().value;
            assert!((t * (-sp.alpha() * z * z).exp() - w).norm() < 1e-8);
        }
    }

    #[test]
    fn image_matches_symbolic() {
        let sp = SParam::new(0.5).unwrap();
        let img = WnImage::new(psi_exppoly(2, &sp), 1, &sp, QuadRule2D::square(64).unwrap(), QuadExponent::holomorphic_square(-0.5)).unwrap();
        let z = Complex64::new(0.3, 0.6);
        assert!((img.eval(z) - psi_mn_exppoly(2, 1, &sp).eval(z)).norm() < 1e-9);
    }
}
