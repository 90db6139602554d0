//! Coherent-state transform `S^s_n: L^{2,nu}(R) -> X_{n,s}(C)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{factorial, transform_1d, CachedLine, TransformResult};
use crate::error::Result;
use crate::hermite::scaled_basis_g_seq;
use crate::quadrature::{GaussianFn1D, Quad1D, QuadRule1D};
use crate::spaces::{psi_mn_seq, GaussianFn, QuadExponent, SParam};

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// `I^{a,b}_n(z, zbar | c)` evaluated through `L = -a zbar + 2b z + c`:
/// `e^{-E} d_z^n e^E = P_n(L)` with `P_{k+1} = L P_k + 2b P_k'`.
pub fn i_poly_eval(n: usize, a: f64, b: f64, cc: Complex64, z: Complex64) -> Complex64 {
    let l = -a * z.conj() + 2.0 * b * z + cc;
    // coefficients of P_k in powers of L
    let mut p = vec![1.0f64];
    for _ in 0..n {
        let mut next = vec![0.0; p.len() + 1];
        for (j, &a_j) in p.iter().enumerate() {
            next[j + 1] += a_j;
            if j > 0 {
                next[j - 1] += 2.0 * b * j as f64 * a_j;
            }
        }
        p = next;
    }
    let val = p.iter().rev().fold(c(0.0), |acc, &a_j| acc * l + a_j);
    if n % 2 == 0 {
        val
    } else {
        -val
    }
}

/// `nu sqrt(2s) / s`, the coupling of `x` and `z`.
fn beta(sp: &SParam) -> f64 {
    sp.nu() * (2.0 * sp.s()).sqrt() / sp.s()
}

fn s_const(n: usize, sp: &SParam) -> f64 {
    let (s, nu) = (sp.s(), sp.nu());
    (nu / (PI * s)).powf(0.25)
        * ((1.0 - s * s) / (2.0 * PI * s * nu.powi(n as i32) * factorial(n))).sqrt()
}

/// Exponent of `S_n(x, z)` in `x`, with the `z`-only part as constant.
fn x_exponent(z: Complex64, sp: &SParam) -> Quad1D {
    let s = sp.s();
    Quad1D {
        xx: c(-sp.nu() * (1.0 - s) / (2.0 * s)),
        x_lin: beta(sp) * z,
        c0: -z * z / (2.0 * s),
    }
}

/// Closed form of the coherent-state kernel
/// `S_n(x,z) = C exp(-z^2/(2s) - nu(1-s)x^2/(2s) + beta x z) I^{nu,-nu/2}_n(z, zbar | beta x)`.
#[allow(non_snake_case)]
pub fn kernel_S_closed(n: usize, x: f64, z: Complex64, sp: &SParam) -> Complex64 {
    let nu = sp.nu();
    s_const(n, sp)
        * x_exponent(z, sp).eval(x).exp()
        * i_poly_eval(n, nu, -0.5 * nu, c(beta(sp) * x), z)
}

/// `sum_{m<=max_m} g^nu_m(x) psi_{m,n}(z, zbar)`.
#[allow(non_snake_case)]
pub fn kernel_S_series(n: usize, x: f64, z: Complex64, sp: &SParam, max_m: usize) -> Result<Complex64> {
    let g = scaled_basis_g_seq(max_m, x, sp.nu())?;
    Ok(g.iter().zip(psi_mn_seq(max_m, n, z, sp)).map(|(gm, p)| gm * p).sum())
}

fn sn_integrand_exponent<F: GaussianFn1D>(f: &F, z: Complex64, sp: &SParam, conjugated: bool) -> Quad1D {
    let k = if conjugated { x_exponent(z, sp).conj() } else { x_exponent(z, sp) };
    f.exponent() + k + Quad1D::gaussian(sp.nu())
}

/// `[S_n f](z) = int f(x) S_n(x,z) e^{-nu x^2} dx`.
#[allow(non_snake_case)]
pub fn apply_Sn<F: GaussianFn1D>(
    f: &F,
    n: usize,
    z: Complex64,
    sp: &SParam,
    rule: &QuadRule1D,
) -> Result<TransformResult> {
    let e = sn_integrand_exponent(f, z, sp, false);
    let (k, nu, b) = (s_const(n, sp), sp.nu(), beta(sp));
    transform_1d(&e, rule, |x| (k * f.prefactor(x) * i_poly_eval(n, nu, -0.5 * nu, c(b * x), z), e.eval(x)))
}

/// `<f, S_n(., z)>` in `L^{2,nu}(R)`, i.e. with the kernel conjugated.
#[allow(non_snake_case)]
pub fn apply_Sn_conjugated<F: GaussianFn1D>(
    f: &F,
    n: usize,
    z: Complex64,
    sp: &SParam,
    rule: &QuadRule1D,
) -> Result<TransformResult> {
    let e = sn_integrand_exponent(f, z, sp, true);
    let (k, nu, b) = (s_const(n, sp), sp.nu(), beta(sp));
    transform_1d(&e, rule, |x| {
        (k * f.prefactor(x) * i_poly_eval(n, nu, -0.5 * nu, c(b * x), z).conj(), e.eval(x))
    })
}

/// `z -> [S_n f](z)` with declared exponent `-z^2/2`.
pub struct SnImage<F> {
    f: F,
    n: usize,
    sp: SParam,
    line: CachedLine,
}

impl<F: GaussianFn1D> SnImage<F> {
    pub fn new(f: F, n: usize, sp: &SParam, order: usize) -> Result<Self> {
        let line = CachedLine::new(&f, &sn_integrand_exponent(&f, c(0.0), sp, false), order)?;
        Ok(Self { f, n, sp: *sp, line })
    }
}

impl<F: GaussianFn1D> GaussianFn for SnImage<F> {
    fn exponent(&self) -> QuadExponent {
        QuadExponent::holomorphic_square(-0.5)
    }
    fn prefactor(&self, z: Complex64) -> Complex64 {
        let sp = &self.sp;
        let e = sn_integrand_exponent(&self.f, z, sp, false);
        let (k, nu, b) = (s_const(self.n, sp), sp.nu(), beta(sp));
        let shift = 0.5 * z * z;
        self.line.sum(|x, fx| (k * fx * i_poly_eval(self.n, nu, -0.5 * nu, c(b * x), z), e.eval(x) + shift))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bipoly::i_poly;
    use crate::hermite::scaled_basis_g;
    use crate::quadrature::{gauss_hermite, Declared1D};
    use crate::spaces::psi_mn;
    use crate::transforms::kernel_B;

    #[test]
    fn i_poly_matches_symbolic() {
        let z = Complex64::new(0.6, -1.1);
        let cc = Complex64::new(0.3, 0.4);
        for n in 0..6 {
            let sym = i_poly(n, 0.9, -0.45, cc).unwrap().eval(z);
            let num = i_poly_eval(n, 0.9, -0.45, cc, z);
            assert!((sym - num).norm() < 1e-12 * (1.0 + sym.norm()), "n={n}");
        }
    }

    #[test]
    fn level_zero_is_rescaled_bargmann_kernel() {
        let sp = SParam::new(0.45).unwrap();
        let nu = sp.nu();
        for &(x, z) in &[(0.3, Complex64::new(0.5, -0.2)), (-1.2, Complex64::new(-0.4, 1.3))] {
            let expect = nu.powf(0.25) * (0.5 * nu * x * x).exp() * kernel_B(nu.sqrt() * x, z, &sp);
            assert!((kernel_S_closed(0, x, z, &sp) - expect).norm() < 1e-13);
        }
    }

    #[test]
    fn closed_form_matches_series() {
        for s in [0.3, 0.5, 0.7] {
            let sp = SParam::new(s).unwrap();
            for n in 0..=2 {
                for &x in &[-1.5, 0.0, 0.8] {
                    for &z in &[Complex64::new(1.5, 0.0), Complex64::new(-0.6, 0.9), Complex64::new(0.0, -1.5)] {
                        let a = kernel_S_closed(n, x, z, &sp);
                        let b = kernel_S_series(n, x, z, &sp, 200).unwrap();
                        assert!((a - b).norm() < 1e-9 * (1.0 + a.norm()), "s={s} n={n} x={x} z={z}");
                    }
                }
            }
        }
    }

    #[test]
    fn maps_g_m_to_psi_mn() {
        let rule = gauss_hermite(128).unwrap();
        for s in [0.3, 0.6] {
            let sp = SParam::new(s).unwrap();
            let nu = sp.nu();
            for n in 0..=2 {
                for m in 0..=5 {
                    let g = Declared1D::new(Quad1D::default(), move |x| c(scaled_basis_g(m, x, nu).unwrap()));
                    for &z in &[Complex64::new(0.7, -0.4), Complex64::new(-1.0, 1.2)] {
                        let r = apply_Sn(&g, n, z, &sp, &rule).unwrap();
                        assert!((r.value - psi_mn(m, n, z, &sp)).norm() < 1e-7, "s={s} m={m} n={n}");
                    }
                }
            }
        }
    }
}
