use std::f64::consts::PI;

use num_complex::Complex64;

use super::{psi_mn_seq, psi_seq, GaussianFn, QuadExponent, SParam};
use crate::bipoly::{complex_hermite_rodrigues, BiPoly};
use crate::error::Result;

/// Default highest index `M` in the truncated expansions `sum_{m<=M}`.
pub const DEFAULT_SERIES_TERMS: usize = 80;

const EARLY_EXIT: f64 = 1e-14;

/// `K^s(z,w) = (nu/pi) exp(-alpha (z^2 + wbar^2) + nu z wbar)`.
#[allow(non_snake_case)]
pub fn kernel_K(z: Complex64, w: Complex64, sp: &SParam) -> Complex64 {
    let wb = w.conj();
    sp.nu() / PI * (-sp.alpha() * (z * z + wb * wb) + sp.nu() * z * wb).exp()
}

/// Reproducing kernel `(nu/pi) e^{nu z wbar}` of the Fock space `F^{2,nu}(C)`.
pub fn fock_kernel(z: Complex64, w: Complex64, nu: f64) -> Complex64 {
    nu / PI * (nu * z * w.conj()).exp()
}

/// Reproducing kernel of the `n`-th polyanalytic level, with `H^nu_{n,n}` built once.
#[derive(Debug, Clone)]
pub struct PolyKernel {
    n: usize,
    sp: SParam,
    hnn: BiPoly,
    scale: f64,
}

impl PolyKernel {
    pub fn new(n: usize, sp: &SParam) -> Result<Self> {
        let nu = sp.nu();
        let nfact: f64 = (1..=n).map(|k| k as f64).product();
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        Ok(Self {
            n,
            sp: *sp,
            hnn: complex_hermite_rodrigues(n, n, nu)?,
            scale: nu / PI * sign / (nfact * nu.powi(n as i32)),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sparam(&self) -> &SParam {
        &self.sp
    }

    /// The polynomial factor `(-1)^n/(n! nu^n) (nu/pi) H^nu_{n,n}(z-w, zbar-wbar)`.
    pub fn polynomial_factor(&self, z: Complex64, w: Complex64) -> Complex64 {
        self.scale * self.hnn.eval(z - w)
    }

    pub fn eval(&self, z: Complex64, w: Complex64) -> Complex64 {
        self.polynomial_factor(z, w) * self.section_exponent(w).eval(z).exp()
    }

    /// Exponent of `z -> K_n(z, w)`: `-alpha z^2 + nu wbar z - alpha wbar^2`.
    pub fn section_exponent(&self, w: Complex64) -> QuadExponent {
        let wb = w.conj();
        QuadExponent {
            zz: Complex64::new(-self.sp.alpha(), 0.0),
            z_lin: self.sp.nu() * wb,
            c0: -self.sp.alpha() * wb * wb,
            ..Default::default()
        }
    }

    /// `z -> K_n(z, w)` as a function with declared exponent.
    pub fn section(&self, w: Complex64) -> KernelSection<'_> {
        KernelSection { kernel: self, w }
    }
}

/// `z -> K_n(z, w)` for fixed `w`.
#[derive(Debug, Clone, Copy)]
pub struct KernelSection<'a> {
    kernel: &'a PolyKernel,
    w: Complex64,
}

impl GaussianFn for KernelSection<'_> {
    fn exponent(&self) -> QuadExponent {
        self.kernel.section_exponent(self.w)
    }
    fn prefactor(&self, z: Complex64) -> Complex64 {
        self.kernel.polynomial_factor(z, self.w)
    }
}

/// `K^s_n(z,w)`; `n = 0` gives [`kernel_K`].
#[allow(non_snake_case)]
pub fn kernel_Kn(n: usize, z: Complex64, w: Complex64, sp: &SParam) -> Result<Complex64> {
    Ok(PolyKernel::new(n, sp)?.eval(z, w))
}

/// `(z, w) -> e^{psi(z)} K(z, w) e^{conj(psi(w))}`.
pub fn rkhs_conjugate<K, P>(kernel: K, psi: P) -> impl Fn(Complex64, Complex64) -> Complex64
where
    K: Fn(Complex64, Complex64) -> Complex64,
    P: Fn(Complex64) -> Complex64,
{
    move |z, w| (psi(z) + psi(w).conj()).exp() * kernel(z, w)
}

fn sum_products(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    let mut sum = Complex64::new(0.0, 0.0);
    let mut small = 0;
    for (x, y) in a.iter().zip(b) {
        let term = x * y.conj();
        sum += term;
        small = if term.norm() < EARLY_EXIT { small + 1 } else { 0 };
        if small == 2 {
            break;
        }
    }
    sum
}

/// `sum_{m<=max_m} psi_m(z) conj(psi_m(w))`.
pub fn kernel_series(z: Complex64, w: Complex64, sp: &SParam, max_m: usize) -> Complex64 {
    sum_products(&psi_seq(max_m, z, sp), &psi_seq(max_m, w, sp))
}

/// `sum_{m<=max_m} psi_{m,n}(z) conj(psi_{m,n}(w))`.
pub fn kernel_n_series(n: usize, z: Complex64, w: Complex64, sp: &SParam, max_m: usize) -> Complex64 {
    sum_products(&psi_mn_seq(max_m, n, z, sp), &psi_mn_seq(max_m, n, w, sp))
}

/// `sum_{m<=max_m} phi_m(z) conj(phi_m(w))`.
pub fn phi_kernel_series(z: Complex64, w: Complex64, sp: &SParam, max_m: usize) -> Complex64 {
    let seq = |p: Complex64| {
        let mut out = Vec::with_capacity(max_m + 1);
        let mut v = (sp.nu() / PI).sqrt() * (-sp.alpha() * p * p).exp();
        for k in 0..=max_m {
            if k > 0 {
                v *= (sp.nu() / k as f64).sqrt() * p;
            }
            out.push(v);
        }
        out
    };
    sum_products(&seq(z), &seq(w))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn grid() -> Vec<Complex64> {
        let pts = [-1.5, 0.0, 1.5];
        pts.iter().flat_map(|&x| pts.iter().map(move |&y| c(x, y))).collect()
    }

    #[test]
    fn kernel_at_origin_and_hermitian() {
        let sp = SParam::new(0.4).unwrap();
        let o = c(0.0, 0.0);
        assert!((kernel_K(o, o, &sp) - sp.nu() / PI).norm() < 1e-15);
        let (z, w) = (c(0.3, -0.8), c(-1.1, 0.4));
        assert!((kernel_K(z, w, &sp) - kernel_K(w, z, &sp).conj()).norm() < 1e-14);
    }

    #[test]
    fn series_converges_to_kernel() {
        for s in [0.5, 0.7] {
            let sp = SParam::new(s).unwrap();
            for z in grid() {
                for w in grid() {
                    let k = kernel_K(z, w, &sp);
                    let err = (kernel_series(z, w, &sp, DEFAULT_SERIES_TERMS) - k).norm();
                    assert!(err < 1e-8, "s={s} z={z} w={w} err={err}");
                    let err = (phi_kernel_series(z, w, &sp, DEFAULT_SERIES_TERMS) - k).norm();
                    assert!(err < 1e-8, "phi s={s} z={z} w={w} err={err}");
                }
            }
        }
    }

    #[test]
    fn small_s_needs_longer_series() {
        // lambda^2 = 7/13 at s = 0.3: the tail beyond m = 80 is still ~1e-7
        // on the imaginary axis at |z| = 1.5.
        let sp = SParam::new(0.3).unwrap();
        let (z, w) = (c(0.0, 1.5), c(0.0, -1.5));
        let k = kernel_K(z, w, &sp);
        assert!((kernel_series(z, w, &sp, 80) - k).norm() > 1e-8);
        assert!((kernel_series(z, w, &sp, 160) - k).norm() < 1e-11);
        let k3 = PolyKernel::new(3, &sp).unwrap();
        assert!((kernel_n_series(3, z, w, &sp, 160) - k3.eval(z, w)).norm() < 1e-10);
    }

    #[test]
    fn polyanalytic_level_zero_is_k() {
        let sp = SParam::new(0.55).unwrap();
        let (z, w) = (c(0.7, 0.2), c(-0.4, 1.0));
        assert!((kernel_Kn(0, z, w, &sp).unwrap() - kernel_K(z, w, &sp)).norm() < 1e-15);
    }

    #[test]
    fn diagonal_is_positive() {
        let sp = SParam::new(0.3).unwrap();
        for n in 0..4 {
            let k = PolyKernel::new(n, &sp).unwrap();
            for z in grid() {
                let v = k.eval(z, z);
                let expect = sp.nu() / PI
                    * (sp.nu() * z.norm_sqr() - 2.0 * sp.alpha() * (z * z).re).exp();
                assert!(v.re > 0.0 && v.im.abs() < 1e-12 * v.re);
                assert!((v.re - expect).abs() < 1e-12 * expect);
            }
        }
    }

    #[test]
    fn polyanalytic_series_converges() {
        let sp = SParam::new(0.5).unwrap();
        for n in 1..=3 {
            let k = PolyKernel::new(n, &sp).unwrap();
            for &(z, w) in &[(c(0.2, -0.3), c(1.1, 0.5)), (c(-1.5, 1.5), c(1.5, 0.0))] {
                let err = (kernel_n_series(n, z, w, &sp, DEFAULT_SERIES_TERMS) - k.eval(z, w)).norm();
                assert!(err < 1e-7, "n={n} err={err}");
            }
        }
    }

    #[test]
    fn section_matches_kernel() {
        let sp = SParam::new(0.6).unwrap();
        let k = PolyKernel::new(2, &sp).unwrap();
        let w = c(0.3, 0.9);
        let sec = k.section(w);
        let z = c(-0.5, 0.25);
        assert!((sec.eval(z) - k.eval(z, w)).norm() < 1e-14);
    }

    #[test]
    fn conjugating_fock_kernel_gives_k() {
        let sp = SParam::new(0.35).unwrap();
        let nu = sp.nu();
        let alpha = sp.alpha();
        let conj = rkhs_conjugate(move |z, w| fock_kernel(z, w, nu), move |z: Complex64| -alpha * z * z);
        let (z, w) = (c(0.6, -0.2), c(0.1, 0.75));
        assert!((conj(z, w) - kernel_K(z, w, &sp)).norm() < 1e-14);
        let ident = rkhs_conjugate(move |z, w| fock_kernel(z, w, nu), |_| c(0.0, 0.0));
        assert_eq!(ident(z, w), fock_kernel(z, w, nu));
        let back = rkhs_conjugate(conj, move |z: Complex64| alpha * z * z);
        assert!((back(z, w) - fock_kernel(z, w, nu)).norm() < 1e-13);
    }
}
