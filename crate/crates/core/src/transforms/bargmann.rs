//! The transform `B_s: L^2(R) -> X_s(C)`, its inverse, and the variant
//! `B~_s` landing on the `phi_m` basis.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{transform_1d, transform_2d, CachedLine, TransformResult};
use crate::error::Result;
use crate::quadrature::{GaussianFn1D, Quad1D, QuadRule1D, QuadRule2D};
use crate::spaces::{GaussianFn, QuadExponent, SParam};

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn bs_const(sp: &SParam) -> f64 {
    let s = sp.s();
    ((1.0 - s * s) / (2.0 * PI * s * (s * PI).sqrt())).sqrt()
}

/// Coefficient `sqrt(1-s^2)/s` of the cross term `t z`.
fn cross(sp: &SParam) -> f64 {
    (1.0 - sp.s() * sp.s()).sqrt() / sp.s()
}

/// `B_s(t,z) = C_s exp(-t^2/(2s) - z^2/(2s) + sqrt(1-s^2)/s t z)`.
#[allow(non_snake_case)]
pub fn kernel_B(t: f64, z: Complex64, sp: &SParam) -> Complex64 {
    let s = sp.s();
    bs_const(sp) * (-(t * t) / (2.0 * s) - z * z / (2.0 * s) + cross(sp) * t * z).exp()
}

/// `B~_s(t,z) = s^(1/4) B_s(sqrt(s) t, z)`.
#[allow(non_snake_case)]
pub fn kernel_Btilde(t: f64, z: Complex64, sp: &SParam) -> Complex64 {
    sp.s().powf(0.25) * kernel_B(sp.s().sqrt() * t, z, sp)
}

/// Exponent in `t` of `f(t) B_s(sqrt(dil) t, z)`.
fn t_exponent(f: Quad1D, z: Complex64, sp: &SParam, dil: f64) -> Quad1D {
    let s = sp.s();
    f + Quad1D {
        xx: c(-dil / (2.0 * s)),
        x_lin: cross(sp) * dil.sqrt() * z,
        c0: -z * z / (2.0 * s),
    }
}

/// `[B_s f](z) = int B_s(t,z) f(t) dt`.
#[allow(non_snake_case)]
pub fn apply_Bs<F: GaussianFn1D>(
    f: &F,
    z: Complex64,
    sp: &SParam,
    rule: &QuadRule1D,
) -> Result<TransformResult> {
    let e = t_exponent(f.exponent(), z, sp, 1.0);
    let k = bs_const(sp);
    transform_1d(&e, rule, |t| (k * f.prefactor(t), e.eval(t)))
}

/// `[B~_s f](z) = int B~_s(t,z) f(t) dt`.
#[allow(non_snake_case)]
pub fn apply_Btilde<F: GaussianFn1D>(
    f: &F,
    z: Complex64,
    sp: &SParam,
    rule: &QuadRule1D,
) -> Result<TransformResult> {
    let e = t_exponent(f.exponent(), z, sp, sp.s());
    let k = sp.s().powf(0.25) * bs_const(sp);
    transform_1d(&e, rule, |t| (k * f.prefactor(t), e.eval(t)))
}

/// `[B_s^{-1} phi](t) = int phi(z) conj(B_s(t,z)) omega_s(z) dlambda(z)`.
#[allow(non_snake_case)]
pub fn apply_Bs_inverse<P: GaussianFn>(
    phi: &P,
    t: f64,
    sp: &SParam,
    rule: &QuadRule2D,
) -> Result<TransformResult> {
    let s = sp.s();
    let e = phi.exponent()
        + sp.omega_exponent()
        + QuadExponent {
            bb: c(-1.0 / (2.0 * s)),
            b_lin: c(cross(sp) * t),
            c0: c(-(t * t) / (2.0 * s)),
            ..Default::default()
        };
    let k = bs_const(sp);
    transform_2d(&e, rule, |z| (k * phi.prefactor(z), e.eval(z)))
}

/// `z -> [B_s f](z)` as a function with declared exponent `-z^2/2`, for
/// pairing images by quadrature.
///
/// The 1-D sum is taken on the real line, so far out along the imaginary
/// axis it cancels heavily; pair images with rules sized to the degree
/// rather than with wide ones.
pub struct BsImage<F> {
    f: F,
    sp: SParam,
    line: CachedLine,
}

impl<F: GaussianFn1D> BsImage<F> {
    pub fn new(f: F, sp: &SParam, order: usize) -> Result<Self> {
        let line = CachedLine::new(&f, &t_exponent(f.exponent(), c(0.0), sp, 1.0), order)?;
        Ok(Self { f, sp: *sp, line })
    }
}

impl<F: GaussianFn1D> GaussianFn for BsImage<F> {
    fn exponent(&self) -> QuadExponent {
        QuadExponent::holomorphic_square(-0.5)
    }
    fn prefactor(&self, z: Complex64) -> Complex64 {
        let e = t_exponent(self.f.exponent(), z, &self.sp, 1.0);
        let k = bs_const(&self.sp);
        let shift = 0.5 * z * z;
        self.line.sum(|t, ft| (k * ft, e.eval(t) + shift))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermite::phys_basis_f;
    use crate::quadrature::{gauss_hermite, Declared1D};
    use crate::spaces::{phi, psi, psi_exppoly};

    fn f_m(m: usize) -> Declared1D<impl Fn(f64) -> Complex64 + Sync> {
        // f_m without its Gaussian, which goes into the declared exponent.
        Declared1D::new(Quad1D::gaussian(0.5), move |t| c(phys_basis_f(m, t) * (0.5 * t * t).exp()))
    }

    #[test]
    fn kernel_at_origin_and_symmetry() {
        let sp = SParam::new(0.4).unwrap();
        assert!((kernel_B(0.0, c(0.0), &sp) - bs_const(&sp)).norm() < 1e-15);
        let (t, x) = (0.7, -1.2);
        assert!((kernel_B(t, c(x), &sp) - kernel_B(x, c(t), &sp)).norm() < 1e-15);
        let z = Complex64::new(0.3, 0.8);
        assert!((kernel_Btilde(0.0, z, &sp) - sp.s().powf(0.25) * kernel_B(0.0, z, &sp)).norm() < 1e-15);
    }

    #[test]
    fn basis_correspondence() {
        let rule = gauss_hermite(128).unwrap();
        for s in [0.3, 0.5, 0.7] {
            let sp = SParam::new(s).unwrap();
            for m in 0..=5 {
                for &z in &[Complex64::new(1.2, -1.1), Complex64::new(-0.4, 1.9), c(2.0)] {
                    let r = apply_Bs(&f_m(m), z, &sp, &rule).unwrap();
                    assert!((r.value - psi(m, z, &sp)).norm() < 1e-8, "s={s} m={m}");
                    assert!(r.estimated_error < 1e-8);
                    let r = apply_Btilde(&f_m(m), z, &sp, &rule).unwrap();
                    assert!((r.value - phi(m, z, &sp)).norm() < 1e-8, "s={s} m={m}");
                }
            }
        }
    }

    #[test]
    fn inverse_on_vacuum() {
        let sp = SParam::new(0.5).unwrap();
        let rule = QuadRule2D::square(96).unwrap();
        for t in [-2.0, -0.3, 0.0, 1.1, 2.0] {
            let r = apply_Bs_inverse(&psi_exppoly(0, &sp), t, &sp, &rule).unwrap();
            assert!((r.value - phys_basis_f(0, t)).norm() < 1e-7, "t={t} {}", r.value);
        }
    }

    #[test]
    fn image_matches_pointwise() {
        let sp = SParam::new(0.6).unwrap();
        let img = BsImage::new(f_m(3), &sp, 128).unwrap();
        let z = Complex64::new(0.9, -0.7);
        assert!((img.eval(z) - psi(3, z, &sp)).norm() < 1e-10);
    }
}
