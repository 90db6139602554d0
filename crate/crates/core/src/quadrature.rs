//! Gauss-Hermite rules and the inner products of the ambient spaces.
//!
//! Integrands are handed over as a prefactor plus a declared quadratic
//! exponent. The negative-definite real part of the exponent fixes the node
//! placement; the exponent itself is only exponentiated once per node,
//! together with the logarithm of the weight, so neither `e^{alpha z^2}` nor
//! tiny weights at the outer nodes ever appear on their own.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::{DMatrix, Matrix2, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spaces::{GaussianFn, QuadExponent, SParam};

pub const MAX_ORDER: usize = 512;
/// Default order of 1-D rules for transforms.
pub const DEFAULT_ORDER_1D: usize = 128;
/// Default per-axis order of 2-D rules for tolerance-based checks.
pub const DEFAULT_ORDER_2D: usize = 96;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Per-axis order that integrates polynomial times Gaussian integrands of
/// total degree `max_degree` exactly, with margin.
pub fn exactness_order(max_degree: usize) -> usize {
    (2 * max_degree + 8).max(32)
}

/// Gauss-Hermite rule for the weight `e^{-u^2}`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadRule1D {
    order: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    /// `ln w_i + u_i^2`, finite even where `w_i` underflows.
    scaled_log_weights: Vec<f64>,
    scale: f64,
}

impl QuadRule1D {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn scaled_log_weights(&self) -> &[f64] {
        &self.scaled_log_weights
    }

    /// Axis dilation: physical nodes are `scale * u_i`.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn with_scale(mut self, scale: f64) -> Result<Self> {
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::InvalidParameter(format!("scale must be positive, got {scale}")));
        }
        self.scale = scale;
        Ok(self)
    }
}

/// Orthonormal Hermite functions `h_{Q-1}(x)`, `h_Q(x)` (weight included).
fn hermite_function_pair(q: usize, x: f64) -> (f64, f64) {
    let mut prev = 0.0;
    let mut cur = PI.powf(-0.25) * (-0.5 * x * x).exp();
    for k in 0..q {
        let next = (2.0 / (k + 1) as f64).sqrt() * x * cur - (k as f64 / (k + 1) as f64).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    (prev, cur)
}

/// Nodes and weights of the `q`-point Gauss-Hermite rule.
///
/// Nodes come from the eigenvalues of the Jacobi matrix and are polished by
/// Newton steps on the Hermite function `h_q`; weights use
/// `w = e^{-x^2} / (q h_{q-1}(x)^2)`. Beyond `q` of about 360 the outermost
/// weights underflow to zero in `weights()`, while `scaled_log_weights()`
/// stays exact.
pub fn gauss_hermite(q: usize) -> Result<QuadRule1D> {
    if q == 0 || q > MAX_ORDER {
        return Err(Error::QuadratureOrder(q));
    }
    let jacobi = DMatrix::from_fn(q, q, |i, j| {
        if i + 1 == j || j + 1 == i {
            (i.max(j) as f64 / 2.0).sqrt()
        } else {
            0.0
        }
    });
    let mut nodes: Vec<f64> = SymmetricEigen::new(jacobi).eigenvalues.iter().copied().collect();
    nodes.sort_by(f64::total_cmp);
    for x in nodes.iter_mut() {
        for _ in 0..3 {
            let (hm1, h) = hermite_function_pair(q, *x);
            let dh = (2.0 * q as f64).sqrt() * hm1 - *x * h;
            if dh == 0.0 || !dh.is_finite() {
                break;
            }
            let step = h / dh;
            *x -= step;
            if step.abs() <= 1e-16 * x.abs().max(1.0) {
                break;
            }
        }
    }
    for i in 0..q / 2 {
        let half = 0.5 * (nodes[q - 1 - i] - nodes[i]);
        nodes[i] = -half;
        nodes[q - 1 - i] = half;
    }
    if q % 2 == 1 {
        nodes[q / 2] = 0.0;
    }
    let scaled_log_weights: Vec<f64> = nodes
        .iter()
        .map(|&x| {
            let (hm1, _) = hermite_function_pair(q, x);
            -(q as f64).ln() - 2.0 * hm1.abs().ln()
        })
        .collect();
    let weights = nodes.iter().zip(&scaled_log_weights).map(|(x, l)| (l - x * x).exp()).collect();
    Ok(QuadRule1D { order: q, nodes, weights, scaled_log_weights, scale: 1.0 })
}

/// Shared, lazily built rule of order `q`.
pub fn cached_rule(q: usize) -> Result<Arc<QuadRule1D>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<QuadRule1D>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(rule) = cache.lock().expect("rule cache poisoned").get(&q) {
        return Ok(rule.clone());
    }
    let rule = Arc::new(gauss_hermite(q)?);
    cache.lock().expect("rule cache poisoned").insert(q, rule.clone());
    Ok(rule)
}

/// Tensor product of two 1-D rules.
#[derive(Debug, Clone)]
pub struct QuadRule2D {
    pub rule_x: Arc<QuadRule1D>,
    pub rule_y: Arc<QuadRule1D>,
}

impl QuadRule2D {
    pub fn new(qx: usize, qy: usize) -> Result<Self> {
        Ok(Self { rule_x: cached_rule(qx)?, rule_y: cached_rule(qy)? })
    }

    pub fn square(q: usize) -> Result<Self> {
        Self::new(q, q)
    }

    /// The rule with both orders halved (at least 1), for error estimates.
    pub fn halved(&self) -> Result<Self> {
        Self::new((self.rule_x.order / 2).max(1), (self.rule_y.order / 2).max(1))
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.rule_x.weights[i] * self.rule_y.weights[j]
    }
}

fn check_envelope(c: f64) -> Result<()> {
    if c > 0.0 && c.is_finite() {
        Ok(())
    } else {
        Err(Error::NotIntegrable(format!("envelope coefficient must be positive, got {c}")))
    }
}

/// `int f(x) e^{-c x^2} dx` with `f` given without the envelope.
pub fn integrate_r<F: Fn(f64) -> Complex64>(f: F, c: f64, rule: &QuadRule1D) -> Result<Complex64> {
    check_envelope(c)?;
    let s = rule.scale / c.sqrt();
    Ok(rule.nodes.iter().zip(&rule.weights).map(|(&u, &w)| w * f(u * s)).sum::<Complex64>() * s)
}

/// `int f(x+iy) e^{-cx x^2 - cy y^2} dx dy` with `f` given without the envelope.
pub fn integrate_c<F: Fn(Complex64) -> Complex64>(
    f: F,
    cx: f64,
    cy: f64,
    rule: &QuadRule2D,
) -> Result<Complex64> {
    check_envelope(cx)?;
    check_envelope(cy)?;
    let (sx, sy) = (rule.rule_x.scale / cx.sqrt(), rule.rule_y.scale / cy.sqrt());
    let mut sum = ZERO;
    for (&u, &wu) in rule.rule_x.nodes.iter().zip(&rule.rule_x.weights) {
        for (&v, &wv) in rule.rule_y.nodes.iter().zip(&rule.rule_y.weights) {
            sum += wu * wv * f(Complex64::new(u * sx, v * sy));
        }
    }
    Ok(sum * sx * sy)
}

/// Value of a quadrature sum together with `sum |term|`, the scale of its
/// rounding error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: Complex64,
    pub abs_sum: f64,
}

impl Quadrature {
    pub fn roundoff(&self) -> f64 {
        f64::EPSILON * self.abs_sum
    }
}

/// Affine change of variables `(x, y) = center + u a1 + v a2` that turns the
/// real quadratic part of an exponent into `-(u^2 + v^2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Envelope2D {
    center: [f64; 2],
    a1: [f64; 2],
    a2: [f64; 2],
    log_jacobian: f64,
}

impl Envelope2D {
    /// Reads the envelope off `e`. With `fold`, the real linear part is
    /// absorbed by completing the square; otherwise it stays in the integrand.
    pub fn from_exponent(e: &QuadExponent, fold: bool) -> Result<Self> {
        let xy = e.to_xy();
        let a = Matrix2::new(xy.xx.re, 0.5 * xy.xy.re, 0.5 * xy.xy.re, xy.yy.re);
        let eig = SymmetricEigen::new(a);
        let (l1, l2) = (eig.eigenvalues[0], eig.eigenvalues[1]);
        let tol = 1e-12 * (a.abs().max() + 1e-300);
        if !(l1 < -tol && l2 < -tol) {
            return Err(Error::NotIntegrable(format!(
                "real quadratic form has eigenvalues {l1:.3e}, {l2:.3e}"
            )));
        }
        let e1 = eig.eigenvectors.column(0);
        let e2 = eig.eigenvectors.column(1);
        let (s1, s2) = ((-l1).sqrt().recip(), (-l2).sqrt().recip());
        let center = if fold {
            // grad = 2 A c + r = 0
            let r = nalgebra::Vector2::new(xy.x_lin.re, xy.y_lin.re);
            let inv = a.try_inverse().ok_or_else(|| Error::Singular("envelope form".into()))?;
            let c = -0.5 * inv * r;
            [c[0], c[1]]
        } else {
            [0.0, 0.0]
        };
        Ok(Self {
            center,
            a1: [e1[0] * s1, e1[1] * s1],
            a2: [e2[0] * s2, e2[1] * s2],
            log_jacobian: (s1 * s2).ln(),
        })
    }

    pub fn point(&self, u: f64, v: f64) -> Complex64 {
        Complex64::new(
            self.center[0] + u * self.a1[0] + v * self.a2[0],
            self.center[1] + u * self.a1[1] + v * self.a2[1],
        )
    }

    /// Quadrature nodes `z` with `ln(weight * jacobian)`, both rule axes applied.
    pub fn nodes(&self, rule: &QuadRule2D) -> Vec<(Complex64, f64)> {
        let (rx, ry) = (&rule.rule_x, &rule.rule_y);
        let mut out = Vec::with_capacity(rx.order * ry.order);
        for (&u, &lu) in rx.nodes.iter().zip(&rx.scaled_log_weights) {
            for (&v, &lv) in ry.nodes.iter().zip(&ry.scaled_log_weights) {
                // ln w_u + ln w_v = lu + lv - u^2 - v^2; the -u^2 - v^2 is
                // supplied by the integrand's own exponent.
                out.push((self.point(u, v), lu + lv + self.log_jacobian));
            }
        }
        out
    }
}

/// `int f` over `C`, where `f(z) = (val, log)` means `val * e^{log}` and the
/// real quadratic part of `log` equals the envelope's.
pub fn integrate_log_2d<F>(env: &Envelope2D, rule: &QuadRule2D, f: F) -> Quadrature
where
    F: Fn(Complex64) -> (Complex64, Complex64),
{
    let mut value = ZERO;
    let mut abs_sum = 0.0;
    for (z, lw) in env.nodes(rule) {
        let (val, log) = f(z);
        let term = val * (log + lw).exp();
        value += term;
        abs_sum += term.norm();
    }
    Quadrature { value, abs_sum }
}

/// 1-D counterpart of [`Envelope2D`]: `x = center + u / sqrt(c)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Envelope1D {
    center: f64,
    scale: f64,
}

impl Envelope1D {
    /// From the exponent `xx x^2 + x_lin x + c0` (only real parts of `xx`
    /// and, with `fold`, of `x_lin` are used).
    pub fn from_exponent(e: &Quad1D, fold: bool) -> Result<Self> {
        let c = -e.xx.re;
        check_envelope(c)?;
        let center = if fold { e.x_lin.re / (2.0 * c) } else { 0.0 };
        Ok(Self { center, scale: c.sqrt().recip() })
    }
}

impl Envelope1D {
    /// Nodes `x_i` with `ln(w_i * jacobian) + u_i^2`; the `-u_i^2` comes
    /// from the integrand's own exponent.
    pub fn nodes(&self, rule: &QuadRule1D) -> Vec<(f64, f64)> {
        let s = self.scale * rule.scale;
        rule.nodes
            .iter()
            .zip(&rule.scaled_log_weights)
            .map(|(&u, &l)| (self.center + s * u, l + s.ln()))
            .collect()
    }
}

/// `int f` over `R` with `f(x) = (val, log)` meaning `val * e^{log}`.
pub fn integrate_log_1d<F>(env: &Envelope1D, rule: &QuadRule1D, f: F) -> Quadrature
where
    F: Fn(f64) -> (Complex64, Complex64),
{
    let s = env.scale * rule.scale;
    let mut value = ZERO;
    let mut abs_sum = 0.0;
    for (&u, &l) in rule.nodes.iter().zip(&rule.scaled_log_weights) {
        let x = env.center + s * u;
        let (val, log) = f(x);
        let term = val * (log + l + s.ln()).exp();
        value += term;
        abs_sum += term.norm();
    }
    Quadrature { value, abs_sum }
}

/// `xx x^2 + x_lin x + c0` on the real line.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Quad1D {
    pub xx: Complex64,
    pub x_lin: Complex64,
    pub c0: Complex64,
}

impl Quad1D {
    pub fn gaussian(c: f64) -> Self {
        Self { xx: Complex64::new(-c, 0.0), ..Self::default() }
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        self.xx * x * x + self.x_lin * x + self.c0
    }

    pub fn conj(&self) -> Self {
        Self { xx: self.xx.conj(), x_lin: self.x_lin.conj(), c0: self.c0.conj() }
    }
}

impl std::ops::Add for Quad1D {
    type Output = Quad1D;
    fn add(self, o: Quad1D) -> Quad1D {
        Quad1D { xx: self.xx + o.xx, x_lin: self.x_lin + o.x_lin, c0: self.c0 + o.c0 }
    }
}

/// A function on `R` equal to `prefactor(x) * exp(exponent(x))`.
pub trait GaussianFn1D: Sync {
    fn exponent(&self) -> Quad1D;
    fn prefactor(&self, x: f64) -> Complex64;

    fn eval(&self, x: f64) -> Complex64 {
        self.prefactor(x) * self.exponent().eval(x).exp()
    }
}

impl<T: GaussianFn1D + ?Sized> GaussianFn1D for &T {
    fn exponent(&self) -> Quad1D {
        (**self).exponent()
    }
    fn prefactor(&self, x: f64) -> Complex64 {
        (**self).prefactor(x)
    }
}

/// A callable on `R` with its declared exponent.
pub struct Declared1D<F> {
    exponent: Quad1D,
    prefactor: F,
}

impl<F: Fn(f64) -> Complex64 + Sync> Declared1D<F> {
    pub fn new(exponent: Quad1D, prefactor: F) -> Self {
        Self { exponent, prefactor }
    }
}

impl<F: Fn(f64) -> Complex64 + Sync> GaussianFn1D for Declared1D<F> {
    fn exponent(&self) -> Quad1D {
        self.exponent
    }
    fn prefactor(&self, x: f64) -> Complex64 {
        (self.prefactor)(x)
    }
}

/// `int f conj(g) e^{weight}` over `C` for functions with declared exponents.
pub fn inner_weighted<F: GaussianFn, G: GaussianFn>(
    f: &F,
    g: &G,
    weight: QuadExponent,
    rule: &QuadRule2D,
) -> Result<Complex64> {
    let e = f.exponent() + g.exponent().conj() + weight;
    let env = Envelope2D::from_exponent(&e, true)?;
    Ok(integrate_log_2d(&env, rule, |z| (f.prefactor(z) * g.prefactor(z).conj(), e.eval(z))).value)
}

/// `<f, g>` in `L^2(C, omega_s dlambda)`.
pub fn inner_hs<F: GaussianFn, G: GaussianFn>(
    f: &F,
    g: &G,
    sp: &SParam,
    rule: &QuadRule2D,
) -> Result<Complex64> {
    inner_weighted(f, g, sp.omega_exponent(), rule)
}

/// `<f, g>` in `L^2(C, e^{-nu |z|^2} dlambda)`.
pub fn inner_lnu_c<F: GaussianFn, G: GaussianFn>(
    f: &F,
    g: &G,
    nu: f64,
    rule: &QuadRule2D,
) -> Result<Complex64> {
    check_nu(nu)?;
    inner_weighted(f, g, QuadExponent::gaussian(nu), rule)
}

/// `<f, g>` in `L^2(R, e^{-nu x^2} dx)`.
pub fn inner_l2nu_r<F: GaussianFn1D, G: GaussianFn1D>(
    f: &F,
    g: &G,
    nu: f64,
    rule: &QuadRule1D,
) -> Result<Complex64> {
    check_nu(nu)?;
    let e = f.exponent() + g.exponent().conj() + Quad1D::gaussian(nu);
    let env = Envelope1D::from_exponent(&e, true)?;
    Ok(integrate_log_1d(&env, rule, |x| (f.prefactor(x) * g.prefactor(x).conj(), e.eval(x))).value)
}

fn check_nu(nu: f64) -> Result<()> {
    if nu > 0.0 && nu.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("nu must be positive, got {nu}")))
    }
}

/// `G[j][k] = <f_j, g_k>` with weight `e^{weight}`.
///
/// Functions sharing an exponent are grouped, so each block builds one
/// envelope and evaluates every prefactor once per node.
pub fn gram_cross<F: GaussianFn, G: GaussianFn>(
    fs: &[F],
    gs: &[G],
    weight: QuadExponent,
    rule: &QuadRule2D,
) -> Result<DMatrix<Complex64>> {
    let mut out = DMatrix::from_element(fs.len(), gs.len(), ZERO);
    let fgroups = group_by_exponent(fs.iter().map(|f| f.exponent()));
    let ggroups = group_by_exponent(gs.iter().map(|g| g.exponent()));
    for (fe, fidx) in &fgroups {
        for (ge, gidx) in &ggroups {
            let e = *fe + ge.conj() + weight;
            let env = Envelope2D::from_exponent(&e, true)?;
            for (z, lw) in env.nodes(rule) {
                let w = (e.eval(z) + lw).exp();
                if w == ZERO {
                    continue;
                }
                let gv: Vec<Complex64> = gidx.iter().map(|&k| gs[k].prefactor(z).conj()).collect();
                for &j in fidx {
                    let fv = fs[j].prefactor(z) * w;
                    for (&k, g) in gidx.iter().zip(&gv) {
                        out[(j, k)] += fv * g;
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Gram matrix of `fs` with weight `e^{weight}`.
pub fn gram<F: GaussianFn>(fs: &[F], weight: QuadExponent, rule: &QuadRule2D) -> Result<DMatrix<Complex64>> {
    gram_cross(fs, fs, weight, rule)
}

fn group_by_exponent<I: Iterator<Item = QuadExponent>>(exps: I) -> Vec<(QuadExponent, Vec<usize>)> {
    let mut groups: Vec<(QuadExponent, Vec<usize>)> = Vec::new();
    for (i, e) in exps.enumerate() {
        match groups.iter_mut().find(|(g, _)| *g == e) {
            Some((_, idx)) => idx.push(i),
            None => groups.push((e, vec![i])),
        }
    }
    groups
}

/// `max |G - I|` entrywise.
pub fn identity_deviation(g: &DMatrix<Complex64>) -> f64 {
    let mut worst: f64 = 0.0;
    for ((i, j), v) in g.iter().enumerate().map(|(k, v)| ((k % g.nrows(), k / g.nrows()), v)) {
        let target = if i == j { 1.0 } else { 0.0 };
        worst = worst.max((v - target).norm());
    }
    worst
}
