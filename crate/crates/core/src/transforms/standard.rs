//! The `n`-th standard Segal-Bargmann transform `B^nu_n: L^{2,nu}(R) -> F^{2,nu}_n(C)`
//! and its `M_{-alpha}` image `B'_{nu,n}` landing in `X_{n,s}(C)`.

use std::f64::consts::{PI, SQRT_2};
use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{factorial, transform_1d, CachedLine, TransformResult};
use crate::error::{Error, Result};
use crate::hermite::scaled_basis_g;
use crate::quadrature::{
    exactness_order, gram, gram_cross, Declared1D, GaussianFn1D, Quad1D, QuadRule1D, QuadRule2D, DEFAULT_ORDER_1D,
};
use crate::spaces::{psi_mn_exppoly, GaussianFn, QuadExponent, SParam};
use crate::verify::CheckReport;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Readings of the single-index `H^nu_n(u)` inside `B^nu_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HermiteConvention {
    /// `nu^(n/2) H_n(sqrt(nu) u)`.
    Weighted,
    /// `H_n(sqrt(nu) u)`.
    ArgScaled,
    /// `H_n(u)`.
    Plain,
}

impl HermiteConvention {
    pub const ALL: [HermiteConvention; 3] = [Self::Weighted, Self::ArgScaled, Self::Plain];

    pub fn name(&self) -> &'static str {
        match self {
            Self::Weighted => "weighted",
            Self::ArgScaled => "arg_scaled",
            Self::Plain => "plain",
        }
    }
}

/// `H^nu_n(u)` under `conv`.
pub fn hermite_nu(n: usize, u: f64, nu: f64, conv: HermiteConvention) -> f64 {
    let arg = match conv {
        HermiteConvention::Plain => u,
        _ => nu.sqrt() * u,
    };
    // H_{k+1} = 2t H_k - 2k H_{k-1}
    let (mut prev, mut h) = (0.0, 1.0);
    for k in 0..n {
        (prev, h) = (h, 2.0 * arg * h - 2.0 * k as f64 * prev);
    }
    match conv {
        HermiteConvention::Weighted => nu.powf(n as f64 / 2.0) * h,
        _ => h,
    }
}

fn bn_const(n: usize, nu: f64) -> f64 {
    (nu / PI).powf(0.75) / (2f64.powi(n as i32) * nu.powi(n as i32) * factorial(n)).sqrt()
}

/// Exponent in `x` of `phi(x) e^{-nu (x - z/sqrt 2)^2}`.
fn x_exponent(phi: Quad1D, nu: f64, z: Complex64) -> Quad1D {
    phi + Quad1D { xx: c(-nu), x_lin: SQRT_2 * nu * z, c0: -0.5 * nu * z * z }
}

/// `[B^nu_n phi](z)` with the `Weighted` reading of `H^nu_n`.
#[allow(non_snake_case)]
pub fn apply_standard_Bn<F: GaussianFn1D>(
    phi: &F,
    n: usize,
    nu: f64,
    z: Complex64,
    rule: &QuadRule1D,
) -> Result<TransformResult> {
    apply_standard_Bn_with(phi, n, nu, z, HermiteConvention::Weighted, rule)
}

/// `[B^nu_n phi](z) = (nu/pi)^(3/4) / sqrt(2^n nu^n n!)
/// int e^{-nu (x - z/sqrt 2)^2} H^nu_n((z + zbar)/sqrt 2 - x) phi(x) dx`.
#[allow(non_snake_case)]
pub fn apply_standard_Bn_with<F: GaussianFn1D>(
    phi: &F,
    n: usize,
    nu: f64,
    z: Complex64,
    conv: HermiteConvention,
    rule: &QuadRule1D,
) -> Result<TransformResult> {
    check_nu(nu)?;
    let e = x_exponent(phi.exponent(), nu, z);
    let k = bn_const(n, nu);
    let re = SQRT_2 * z.re;
    transform_1d(&e, rule, |x| (k * hermite_nu(n, re - x, nu, conv) * phi.prefactor(x), e.eval(x)))
}

/// `[B'_{nu,n} phi](z) = e^{-alpha z^2} [B^nu_n phi](z)` with `nu = nu_s`.
pub fn apply_bprime<F: GaussianFn1D>(
    phi: &F,
    n: usize,
    sp: &SParam,
    z: Complex64,
    conv: HermiteConvention,
    rule: &QuadRule1D,
) -> Result<TransformResult> {
    let nu = sp.nu();
    let e = x_exponent(phi.exponent(), nu, z) + Quad1D { c0: -sp.alpha() * z * z, ..Default::default() };
    let k = bn_const(n, nu);
    let re = SQRT_2 * z.re;
    transform_1d(&e, rule, |x| (k * hermite_nu(n, re - x, nu, conv) * phi.prefactor(x), e.eval(x)))
}

fn check_nu(nu: f64) -> Result<()> {
    if nu > 0.0 && nu.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("nu must be positive, got {nu}")))
    }
}

/// `z -> [B^nu_n f](z)` (exponent `0`) or `z -> [B'_{nu,n} f](z)` (exponent `-alpha z^2`).
pub struct StandardBnImage<F> {
    f: F,
    n: usize,
    nu: f64,
    conv: HermiteConvention,
    line: CachedLine,
    image_exponent: QuadExponent,
}

/// Alias naming the `M_{-alpha}`-shifted image.
pub type BprimeImage<F> = StandardBnImage<F>;

impl<F: GaussianFn1D> StandardBnImage<F> {
    pub fn new(f: F, n: usize, nu: f64, conv: HermiteConvention, order: usize) -> Result<Self> {
        check_nu(nu)?;
        let line = CachedLine::new(&f, &x_exponent(f.exponent(), nu, c(0.0)), order)?;
        Ok(Self { f, n, nu, conv, line, image_exponent: QuadExponent::zero() })
    }

    /// The `B'_{nu_s,n}` image.
    pub fn bprime(f: F, n: usize, sp: &SParam, conv: HermiteConvention, order: usize) -> Result<Self> {
        let mut img = Self::new(f, n, sp.nu(), conv, order)?;
        img.image_exponent = QuadExponent::holomorphic_square(-sp.alpha());
        Ok(img)
    }
}

impl<F: GaussianFn1D> GaussianFn for StandardBnImage<F> {
    fn exponent(&self) -> QuadExponent {
        self.image_exponent
    }
    fn prefactor(&self, z: Complex64) -> Complex64 {
        let e = x_exponent(self.f.exponent(), self.nu, z);
        let k = bn_const(self.n, self.nu);
        let re = SQRT_2 * z.re;
        self.line.sum(|x, fx| (k * hermite_nu(self.n, re - x, self.nu, self.conv) * fx, e.eval(x)))
    }
}

type GFn = Declared1D<Box<dyn Fn(f64) -> Complex64 + Sync>>;

/// `g^nu_m` as a declared function on `R` (pure polynomial).
pub fn g_declared(m: usize, nu: f64) -> GFn {
    Declared1D::new(
        Quad1D::default(),
        Box::new(move |x| c(scaled_basis_g(m, x, nu).unwrap_or(f64::NAN))) as Box<dyn Fn(f64) -> Complex64 + Sync>,
    )
}

/// Gram matrix in `L^{2,nu}(C)` of `{B^nu_n g^nu_m : m <= max_m}`.
pub fn standard_image_gram(
    n: usize,
    nu: f64,
    max_m: usize,
    conv: HermiteConvention,
    order_1d: usize,
) -> Result<DMatrix<Complex64>> {
    let images = (0..=max_m)
        .map(|m| StandardBnImage::new(g_declared(m, nu), n, nu, conv, order_1d))
        .collect::<Result<Vec<_>>>()?;
    let rule = QuadRule2D::square(exactness_order(2 * (max_m + n)))?;
    gram(&images, QuadExponent::gaussian(nu), &rule)
}

/// Quadrature and truncation settings of [`check_n_independence`].
#[derive(Debug, Clone)]
pub struct NIndependence {
    /// Number of `g^nu_k` spanning the trial image space.
    pub basis_size: usize,
    pub order_1d: usize,
    pub rule_2d: QuadRule2D,
    pub convention: HermiteConvention,
}

impl NIndependence {
    pub fn new(basis_size: usize, order_1d: usize, order_2d: usize, convention: HermiteConvention) -> Result<Self> {
        Ok(Self { basis_size, order_1d, rule_2d: QuadRule2D::square(order_2d)?, convention })
    }
}

impl Default for NIndependence {
    fn default() -> Self {
        Self::new(10, DEFAULT_ORDER_1D, 64, HermiteConvention::Weighted).expect("default orders are valid")
    }
}

/// Coefficients of `psi_{m,n}` in `{B'_{nu,n} g^nu_k : k < K}` and the norm of
/// what the span misses.
fn inverse_coefficients(m: usize, n: usize, sp: &SParam, b: &NIndependence) -> Result<(DVector<Complex64>, f64)> {
    let images = (0..b.basis_size)
        .map(|k| StandardBnImage::bprime(g_declared(k, sp.nu()), n, sp, b.convention, b.order_1d))
        .collect::<Result<Vec<_>>>()?;
    let w = sp.omega_exponent();
    let g = gram(&images, w, &b.rule_2d)?;
    let target = [psi_mn_exppoly(m, n, sp)];
    let rhs = gram_cross(&target, &images, w, &b.rule_2d)?;
    // psi = sum_k c_k img_k  =>  <psi, img_j> = sum_k c_k <img_k, img_j>
    let a = g.transpose();
    let bvec = DVector::from_iterator(b.basis_size, rhs.row(0).iter().copied());
    let coeffs = a
        .lu()
        .solve(&bvec)
        .ok_or_else(|| Error::Singular(format!("image Gram for n = {n}")))?;
    let captured: Complex64 = coeffs.iter().zip(bvec.iter()).map(|(c, b)| c * b.conj()).sum();
    let norm = crate::quadrature::inner_hs(&target[0], &target[0], sp, &b.rule_2d)?.re;
    Ok((coeffs, (norm - captured.re).max(0.0).sqrt()))
}

/// Compares the expansions of `[B'_{nu,n}]^{-1} psi_{m,n}` in the `g^nu_k`
/// for `n = n1` and `n = n2`. Exploratory: the report records the deviation
/// without asserting anything about it.
pub fn check_n_independence(m: usize, n1: usize, n2: usize, sp: &SParam, bundle: &NIndependence) -> CheckReport {
    let start = Instant::now();
    let base = |err: f64| {
        CheckReport::exploratory("n_independence", err, 1e-6)
            .with_param("m", m)
            .with_param("n1", n1)
            .with_param("n2", n2)
            .with_param("s", sp.s())
            .with_param("basis_size", bundle.basis_size)
            .with_param("convention", bundle.convention.name())
    };
    let result = inverse_coefficients(m, n1, sp, bundle).and_then(|a| {
        if n1 == n2 {
            Ok((a.clone(), a))
        } else {
            Ok((a, inverse_coefficients(m, n2, sp, bundle)?))
        }
    });
    let report = match result {
        Ok(((c1, r1), (c2, r2))) => {
            let dev = c1.iter().zip(c2.iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            let fmt = |c: &DVector<Complex64>| c.iter().map(|v| vec![v.re, v.im]).collect::<Vec<_>>();
            base(dev)
                .with_param("coefficients_n1", serde_json::to_value(fmt(&c1)).unwrap_or_default())
                .with_param("coefficients_n2", serde_json::to_value(fmt(&c2)).unwrap_or_default())
                .with_param("residual_n1", r1)
                .with_param("residual_n2", r2)
        }
        Err(e) => base(f64::INFINITY).with_param("error", e.to_string()),
    };
    report.with_time_ms(start.elapsed().as_secs_f64() * 1e3)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{gauss_hermite, identity_deviation};
    use crate::spaces::fock_exppoly;

    #[test]
    fn conventions_agree_at_degree_zero() {
        for conv in HermiteConvention::ALL {
            assert_eq!(hermite_nu(0, 0.7, 0.4, conv), 1.0);
        }
        assert!((hermite_nu(1, 0.5, 4.0, HermiteConvention::Weighted) - 4.0).abs() < 1e-15);
        assert!((hermite_nu(1, 0.5, 4.0, HermiteConvention::ArgScaled) - 2.0).abs() < 1e-15);
        assert!((hermite_nu(1, 0.5, 4.0, HermiteConvention::Plain) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn level_zero_maps_to_fock_monomials() {
        let nu = 0.8;
        let rule = gauss_hermite(128).unwrap();
        for m in 0..5 {
            for &z in &[Complex64::new(0.4, -0.9), Complex64::new(-1.3, 0.2)] {
                let v = apply_standard_Bn(&g_declared(m, nu), 0, nu, z, &rule).unwrap().value;
                assert!((v - fock_exppoly(m, nu).eval(z)).norm() < 1e-6, "m={m}");
            }
        }
    }

    #[test]
    fn weighted_images_are_orthonormal() {
        let g = standard_image_gram(1, 0.7, 4, HermiteConvention::Weighted, 128).unwrap();
        assert!(identity_deviation(&g) < 1e-6, "{}", identity_deviation(&g));
    }

    #[test]
    fn identical_levels_give_zero_deviation() {
        let sp = SParam::new(0.5).unwrap();
        let b = NIndependence::new(6, 64, 32, HermiteConvention::Weighted).unwrap();
        let r = check_n_independence(1, 1, 1, &sp, &b);
        assert_eq!(r.max_abs_error, 0.0);
        assert!(r.exploratory);
    }
}
