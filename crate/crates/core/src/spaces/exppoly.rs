//! Functions of the shape `P(z, zbar) * exp(Q(z, zbar))`.

use std::ops::Add;

use num_complex::Complex64;

use crate::bipoly::{nabla_apply, twisted_derivative, BiPoly, OperatorParams, Var};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `zz z^2 + bb zbar^2 + mix z zbar + z_lin z + b_lin zbar + c0`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct QuadExponent {
    pub zz: Complex64,
    pub bb: Complex64,
    pub mix: Complex64,
    pub z_lin: Complex64,
    pub b_lin: Complex64,
    pub c0: Complex64,
}

/// The same exponent written in `(x, y) = (Re z, Im z)`:
/// `xx x^2 + xy x y + yy y^2 + x_lin x + y_lin y + c0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XyForm {
    pub xx: Complex64,
    pub xy: Complex64,
    pub yy: Complex64,
    pub x_lin: Complex64,
    pub y_lin: Complex64,
    pub c0: Complex64,
}

impl XyForm {
    pub fn eval(&self, x: f64, y: f64) -> Complex64 {
        self.xx * x * x + self.xy * x * y + self.yy * y * y + self.x_lin * x + self.y_lin * y + self.c0
    }
}

impl QuadExponent {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `c z^2`.
    pub fn holomorphic_square(c: f64) -> Self {
        Self { zz: Complex64::new(c, 0.0), ..Self::default() }
    }

    /// `-nu |z|^2`.
    pub fn gaussian(nu: f64) -> Self {
        Self { mix: Complex64::new(-nu, 0.0), ..Self::default() }
    }

    pub fn constant(c: Complex64) -> Self {
        Self { c0: c, ..Self::default() }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let zb = z.conj();
        self.zz * z * z
            + self.bb * zb * zb
            + self.mix * z * zb
            + self.z_lin * z
            + self.b_lin * zb
            + self.c0
    }

    /// The exponent of `conj(exp(Q(z, zbar)))` as a function of `z`.
    pub fn conj(&self) -> Self {
        Self {
            zz: self.bb.conj(),
            bb: self.zz.conj(),
            mix: self.mix.conj(),
            z_lin: self.b_lin.conj(),
            b_lin: self.z_lin.conj(),
            c0: self.c0.conj(),
        }
    }

    pub fn to_xy(&self) -> XyForm {
        let i = Complex64::i();
        XyForm {
            xx: self.zz + self.bb + self.mix,
            xy: 2.0 * i * (self.zz - self.bb),
            yy: self.mix - self.zz - self.bb,
            x_lin: self.z_lin + self.b_lin,
            y_lin: i * (self.z_lin - self.b_lin),
            c0: self.c0,
        }
    }

    /// `d/dz` of the exponent as a polynomial in `(z, zbar)`.
    pub fn d_dz(&self) -> BiPoly {
        BiPoly::from_terms([(1, 0, 2.0 * self.zz), (0, 1, self.mix), (0, 0, self.z_lin)])
    }

    pub fn d_dzbar(&self) -> BiPoly {
        BiPoly::from_terms([(0, 1, 2.0 * self.bb), (1, 0, self.mix), (0, 0, self.b_lin)])
    }

    /// True if the quadratic part has no dependence at all (pure linear/constant).
    pub fn is_quadratic_free(&self) -> bool {
        self.zz == ZERO && self.bb == ZERO && self.mix == ZERO
    }
}

impl Add for QuadExponent {
    type Output = QuadExponent;
    fn add(self, o: QuadExponent) -> QuadExponent {
        QuadExponent {
            zz: self.zz + o.zz,
            bb: self.bb + o.bb,
            mix: self.mix + o.mix,
            z_lin: self.z_lin + o.z_lin,
            b_lin: self.b_lin + o.b_lin,
            c0: self.c0 + o.c0,
        }
    }
}

/// Anything with a declared Gaussian-type exponent: the function equals
/// `prefactor(z) * exp(exponent(z))`.
///
/// Integrators read the envelope off [`GaussianFn::exponent`] and only ever
/// evaluate `prefactor`, so the prefactor should stay moderate where the
/// envelope has mass.
pub trait GaussianFn: Sync {
    fn exponent(&self) -> QuadExponent;
    fn prefactor(&self, z: Complex64) -> Complex64;

    fn eval(&self, z: Complex64) -> Complex64 {
        self.prefactor(z) * self.exponent().eval(z).exp()
    }
}

impl<T: GaussianFn + ?Sized> GaussianFn for &T {
    fn exponent(&self) -> QuadExponent {
        (**self).exponent()
    }
    fn prefactor(&self, z: Complex64) -> Complex64 {
        (**self).prefactor(z)
    }
}

/// A callable prefactor bundled with its declared exponent.
pub struct Declared<F> {
    exponent: QuadExponent,
    prefactor: F,
}

impl<F: Fn(Complex64) -> Complex64 + Sync> Declared<F> {
    pub fn new(exponent: QuadExponent, prefactor: F) -> Self {
        Self { exponent, prefactor }
    }
}

impl<F: Fn(Complex64) -> Complex64 + Sync> GaussianFn for Declared<F> {
    fn exponent(&self) -> QuadExponent {
        self.exponent
    }
    fn prefactor(&self, z: Complex64) -> Complex64 {
        (self.prefactor)(z)
    }
}

/// `poly(z, zbar) * exp(exponent(z, zbar))`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpPoly {
    pub poly: BiPoly,
    pub exponent: QuadExponent,
}

impl ExpPoly {
    pub fn new(poly: BiPoly, exponent: QuadExponent) -> Self {
        Self { poly, exponent }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.poly.eval(z) * self.exponent.eval(z).exp()
    }

    /// Polys multiply, exponents add.
    pub fn mul(&self, other: &ExpPoly) -> ExpPoly {
        ExpPoly::new(&self.poly * &other.poly, self.exponent + other.exponent)
    }

    pub fn conj(&self) -> ExpPoly {
        ExpPoly::new(self.poly.conj(), self.exponent.conj())
    }

    pub fn scale(&self, c: Complex64) -> ExpPoly {
        ExpPoly::new(self.poly.scale(c), self.exponent)
    }

    /// Multiply by `exp(extra)`.
    pub fn times_exp(&self, extra: QuadExponent) -> ExpPoly {
        ExpPoly::new(self.poly.clone(), self.exponent + extra)
    }

    /// `M_gamma f = exp(gamma z^2) f`.
    pub fn m_gamma(&self, gamma: f64) -> ExpPoly {
        self.times_exp(QuadExponent::holomorphic_square(gamma))
    }

    /// Sum of two functions sharing an exponent; `None` if the exponents differ.
    pub fn checked_add(&self, other: &ExpPoly) -> Option<ExpPoly> {
        (self.exponent == other.exponent)
            .then(|| ExpPoly::new(&self.poly + &other.poly, self.exponent))
    }

    /// `nabla_{nu,a}(P e^Q) = (nabla_{nu,a} P - P dQ/dz) e^Q`.
    pub fn nabla(&self, params: &OperatorParams) -> ExpPoly {
        let correction = &self.exponent.d_dz() * &self.poly;
        ExpPoly::new(&nabla_apply(&self.poly, params) - &correction, self.exponent)
    }

    /// `d/dz (P e^Q)` as an ExpPoly.
    pub fn derivative(&self, wrt: Var) -> ExpPoly {
        let log_d = match wrt {
            Var::Z => self.exponent.d_dz(),
            Var::Zbar => self.exponent.d_dzbar(),
        };
        ExpPoly::new(twisted_derivative(&self.poly, wrt, &log_d), self.exponent)
    }
}

impl GaussianFn for ExpPoly {
    fn exponent(&self) -> QuadExponent {
        self.exponent
    }
    fn prefactor(&self, z: Complex64) -> Complex64 {
        self.poly.eval(z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sample_exponent() -> QuadExponent {
        QuadExponent {
            zz: c(0.3, -0.2),
            bb: c(-0.1, 0.4),
            mix: c(-0.9, 0.05),
            z_lin: c(0.2, 0.7),
            b_lin: c(-0.6, 0.1),
            c0: c(0.25, -1.0),
        }
    }

    #[test]
    fn xy_form_agrees_with_complex_form() {
        let e = sample_exponent();
        let xy = e.to_xy();
        for &(x, y) in &[(0.3, -1.2), (1.7, 0.4), (-0.8, -0.9)] {
            assert!((xy.eval(x, y) - e.eval(c(x, y))).norm() < 1e-14);
        }
    }

    #[test]
    fn conj_exponent_is_conjugate() {
        let e = sample_exponent();
        let z = c(0.6, -1.4);
        assert!((e.conj().eval(z) - e.eval(z).conj()).norm() < 1e-14);
    }

    #[test]
    fn exppoly_products_add_exponents() {
        let a = ExpPoly::new(BiPoly::from_terms([(1, 0, c(1.0, 0.5))]), sample_exponent());
        let b = ExpPoly::new(
            BiPoly::from_terms([(0, 2, c(-0.3, 0.0)), (0, 0, c(1.0, 0.0))]),
            QuadExponent::holomorphic_square(-0.5),
        );
        let prod = a.mul(&b);
        assert_eq!(prod.exponent, a.exponent + b.exponent);
        let z = c(0.4, 0.3);
        assert!((prod.eval(z) - a.eval(z) * b.eval(z)).norm() < 1e-13);
        assert!((a.conj().eval(z) - a.eval(z).conj()).norm() < 1e-13);
    }

    #[test]
    fn m_gamma_round_trip() {
        let a = ExpPoly::new(BiPoly::z(), QuadExponent::holomorphic_square(-0.5));
        let back = a.m_gamma(0.8).m_gamma(-0.8);
        assert_eq!(back.poly, a.poly);
        assert!((back.exponent.zz - a.exponent.zz).norm() < 1e-16);
    }

    #[test]
    fn exppoly_nabla_matches_finite_differences() {
        // nabla(f) = -df/dz + (nu zbar - 2a z) f, with df/dz the Wirtinger
        // derivative 0.5 (d/dx - i d/dy) estimated by central differences.
        let f = ExpPoly::new(
            BiPoly::from_terms([(2, 1, c(0.5, -0.2)), (0, 0, c(1.0, 0.0))]),
            QuadExponent { zz: c(-0.3, 0.0), mix: c(-0.4, 0.0), ..Default::default() },
        );
        let params = OperatorParams::new(0.7, c(0.15, 0.0)).unwrap();
        let z = c(0.35, -0.6);
        let h = 1e-5;
        let fx = (f.eval(z + h) - f.eval(z - h)) / (2.0 * h);
        let fy = (f.eval(z + c(0.0, h)) - f.eval(z - c(0.0, h))) / (2.0 * h);
        let dz = 0.5 * (fx - c(0.0, 1.0) * fy);
        let expect = -dz + (0.7 * z.conj() - 0.3 * z) * f.eval(z);
        assert!((f.nabla(&params).eval(z) - expect).norm() < 1e-8);
    }

    #[test]
    fn nabla_shift_identity_under_m_gamma() {
        // nabla_{nu,a}(M_g psi) = M_g nabla_{nu,a+g} psi, checked on the symbolic level.
        let psi = ExpPoly::new(
            BiPoly::from_terms([(3, 0, c(1.0, 0.0)), (1, 1, c(0.0, 2.0))]),
            QuadExponent::holomorphic_square(-0.5),
        );
        let (nu, a, g) = (0.75, 0.1, 0.35);
        let lhs = psi.m_gamma(g).nabla(&OperatorParams::new(nu, c(a, 0.0)).unwrap());
        let rhs = psi.nabla(&OperatorParams::new(nu, c(a + g, 0.0)).unwrap()).m_gamma(g);
        assert!(lhs.poly.relative_distance(&rhs.poly) < 1e-15);
        assert!((lhs.exponent.zz - rhs.exponent.zz).norm() < 1e-15);
    }

    #[test]
    fn checked_add_requires_equal_exponents() {
        let a = ExpPoly::new(BiPoly::z(), QuadExponent::holomorphic_square(-0.5));
        let b = ExpPoly::new(BiPoly::one(), QuadExponent::holomorphic_square(-0.5));
        assert!(a.checked_add(&b).is_some());
        assert!(a.checked_add(&b.m_gamma(0.1)).is_none());
    }
}
