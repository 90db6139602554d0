//! Sparse polynomials in the pair `(z, zbar)` with complex coefficients.
//!
//! `z` and `zbar` are treated as independent indeterminates, so the Wirtinger
//! derivatives are ordinary formal partials. All polyanalytic families of the
//! crate are built here by applying first-order operators to `1`:
//!
//! - `H^nu_{m,n}`, the weighted complex Hermite polynomials, from the Gaussian
//!   Rodrigues formula `(-1)^(m+n) e^{nu|z|^2} d_zbar^m d_z^n e^{-nu|z|^2}`;
//! - `I^{a,b}_n(.|c)`, from `(-1)^n e^{-E} d_z^n e^{E}` with
//!   `E = -a|z|^2 + b z^2 + c z`;
//! - `nabla_{nu,a} = -d_z + nu zbar - 2a z` and its powers.
//!
//! A derivative against an exponential weight `e^E` acts on the polynomial part
//! as `p -> dp + (dE) p`; see [`twisted_derivative`].

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hermite::hermite_seq;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Which indeterminate an operator acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    Z,
    Zbar,
}

/// `sum c_ij z^i zbar^j`, stored sparsely. No stored coefficient is exactly zero.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct BiPoly {
    terms: BTreeMap<(u32, u32), Complex64>,
}

impl BiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(ONE)
    }

    pub fn constant(c: Complex64) -> Self {
        Self::monomial(0, 0, c)
    }

    pub fn monomial(i: u32, j: u32, c: Complex64) -> Self {
        let mut p = Self::zero();
        p.add_term(i, j, c);
        p
    }

    pub fn z() -> Self {
        Self::monomial(1, 0, ONE)
    }

    pub fn zbar() -> Self {
        Self::monomial(0, 1, ONE)
    }

    /// Holomorphic polynomial from real coefficients, entry `k` multiplying `z^k`.
    pub fn from_holomorphic(coeffs: &[f64]) -> Self {
        let mut p = Self::zero();
        for (k, &c) in coeffs.iter().enumerate() {
            p.add_term(k as u32, 0, Complex64::new(c, 0.0));
        }
        p
    }

    /// Build from `(i, j, coefficient)` triples; repeated exponents accumulate.
    pub fn from_terms<I: IntoIterator<Item = (u32, u32, Complex64)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (i, j, c) in terms {
            p.add_term(i, j, c);
        }
        p
    }

    fn add_term(&mut self, i: u32, j: u32, c: Complex64) {
        if c == ZERO {
            return;
        }
        let entry = self.terms.entry((i, j)).or_insert(ZERO);
        *entry += c;
        if *entry == ZERO {
            self.terms.remove(&(i, j));
        }
    }

    /// Terms in increasing `(i, j)` order.
    pub fn terms(&self) -> impl Iterator<Item = (u32, u32, Complex64)> + '_ {
        self.terms.iter().map(|(&(i, j), &c)| (i, j, c))
    }

    pub fn coeff(&self, i: u32, j: u32) -> Complex64 {
        self.terms.get(&(i, j)).copied().unwrap_or(ZERO)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest power of `z` present, `None` for the zero polynomial.
    pub fn degree_z(&self) -> Option<u32> {
        self.terms.keys().map(|&(i, _)| i).max()
    }

    pub fn degree_zbar(&self) -> Option<u32> {
        self.terms.keys().map(|&(_, j)| j).max()
    }

    /// Largest coefficient modulus (0 for the zero polynomial).
    pub fn max_coeff_norm(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        if c == ZERO {
            return Self::zero();
        }
        Self::from_terms(self.terms().map(|(i, j, a)| (i, j, a * c)))
    }

    /// `sum c_ij x^i y^j` with `x` and `y` independent.
    pub fn eval_xy(&self, x: Complex64, y: Complex64) -> Complex64 {
        let (dx, dy) = (self.degree_z().unwrap_or(0), self.degree_zbar().unwrap_or(0));
        let xp = powers(x, dx as usize);
        let yp = powers(y, dy as usize);
        self.terms()
            .map(|(i, j, c)| c * xp[i as usize] * yp[j as usize])
            .sum()
    }

    /// `p(z, conj(z))`.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.eval_xy(z, z.conj())
    }

    pub fn derivative(&self, wrt: Var) -> Self {
        Self::from_terms(self.terms().filter_map(|(i, j, c)| match wrt {
            Var::Z if i > 0 => Some((i - 1, j, c * i as f64)),
            Var::Zbar if j > 0 => Some((i, j - 1, c * j as f64)),
            _ => None,
        }))
    }

    /// The polynomial `q` with `q(z, zbar) = conj(p(z, zbar))`: coefficients are
    /// conjugated and the roles of `z` and `zbar` swapped.
    pub fn conj(&self) -> Self {
        Self::from_terms(self.terms().map(|(i, j, c)| (j, i, c.conj())))
    }

    /// `norm_inf(self - other) / max(norm_inf(other), tiny)`, the coefficient-wise
    /// relative distance used by the symbolic checks.
    pub fn relative_distance(&self, other: &BiPoly) -> f64 {
        let diff = (self - other).max_coeff_norm();
        diff / other.max_coeff_norm().max(f64::MIN_POSITIVE)
    }
}

fn powers(x: Complex64, n: usize) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(ONE);
    for k in 0..n {
        out.push(out[k] * x);
    }
    out
}

impl Add for &BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (i, j, c) in rhs.terms() {
            out.add_term(i, j, c);
        }
        out
    }
}

impl Sub for &BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (i, j, c) in rhs.terms() {
            out.add_term(i, j, -c);
        }
        out
    }
}

impl Mul for &BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: &BiPoly) -> BiPoly {
        let mut out = BiPoly::zero();
        for (i1, j1, c1) in self.terms() {
            for (i2, j2, c2) in rhs.terms() {
                out.add_term(i1 + i2, j1 + j2, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        self.scale(-ONE)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for BiPoly {
            type Output = BiPoly;
            fn $m(self, rhs: BiPoly) -> BiPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Which ring operation [`bp_ring_ops`] performs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RingOp {
    Add,
    Multiply,
    Scale(Complex64),
}

/// Dispatching wrapper over the ring operations; `q` is ignored for `Scale`.
pub fn bp_ring_ops(p: &BiPoly, q: &BiPoly, op: RingOp) -> BiPoly {
    match op {
        RingOp::Add => p + q,
        RingOp::Multiply => p * q,
        RingOp::Scale(c) => p.scale(c),
    }
}

pub fn bp_derivative(p: &BiPoly, wrt: Var) -> BiPoly {
    p.derivative(wrt)
}

/// `p -> d_wrt p + log_derivative * p`: the action of `d_wrt` on `p e^E` read
/// off the polynomial part, where `log_derivative = d_wrt E`.
pub fn twisted_derivative(p: &BiPoly, wrt: Var, log_derivative: &BiPoly) -> BiPoly {
    &p.derivative(wrt) + &(log_derivative * p)
}

/// Parameters of the creation operator `nabla_{nu,a} = -d_z + nu zbar - 2a z`
/// and of the `I`-polynomials' linear shift `c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatorParams {
    nu: f64,
    a: Complex64,
    c: Complex64,
}

impl OperatorParams {
    pub fn new(nu: f64, a: Complex64) -> Result<Self> {
        Self::with_shift(nu, a, ZERO)
    }

    pub fn with_shift(nu: f64, a: Complex64, c: Complex64) -> Result<Self> {
        if !(nu > 0.0) || !nu.is_finite() {
            return Err(Error::InvalidParameter(format!("nu must be positive, got {nu}")));
        }
        Ok(Self { nu, a, c })
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn a(&self) -> Complex64 {
        self.a
    }

    pub fn c(&self) -> Complex64 {
        self.c
    }

    /// The multiplier `nu zbar - 2a z` of the creation operator.
    fn multiplier(&self) -> BiPoly {
        BiPoly::from_terms([(0, 1, Complex64::new(self.nu, 0.0)), (1, 0, -2.0 * self.a)])
    }
}

/// `nabla_{nu,a} p = -d_z p + nu zbar p - 2a z p`.
pub fn nabla_apply(p: &BiPoly, params: &OperatorParams) -> BiPoly {
    &(&params.multiplier() * p) - &p.derivative(Var::Z)
}

/// `nabla_{nu,a}^n p`; `n = 0` is the identity.
pub fn nabla_power(p: &BiPoly, params: &OperatorParams, n: usize) -> BiPoly {
    let mult = params.multiplier();
    (0..n).fold(p.clone(), |acc, _| &(&mult * &acc) - &acc.derivative(Var::Z))
}

fn check_nu(nu: f64) -> Result<()> {
    if nu > 0.0 && nu.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("nu must be positive, got {nu}")))
    }
}

/// The weighted polyanalytic complex Hermite polynomial `H^nu_{m,n}(z, zbar)`.
///
/// `z`-degree is `m`, `zbar`-degree is `n`, and `H^nu_{m,0} = nu^m z^m`.
pub fn complex_hermite_rodrigues(m: usize, n: usize, nu: f64) -> Result<BiPoly> {
    check_nu(nu)?;
    let nu_c = Complex64::new(-nu, 0.0);
    // d_z e^{-nu z zbar} = -nu zbar e^{...}, d_zbar e^{...} = -nu z e^{...}.
    let dz_log = BiPoly::monomial(0, 1, nu_c);
    let dzbar_log = BiPoly::monomial(1, 0, nu_c);
    let mut p = BiPoly::one();
    for _ in 0..n {
        p = twisted_derivative(&p, Var::Z, &dz_log);
    }
    for _ in 0..m {
        p = twisted_derivative(&p, Var::Zbar, &dzbar_log);
    }
    if (m + n) % 2 == 1 {
        p = -&p;
    }
    Ok(p)
}

/// `Delta_nu p = -d_z d_zbar p + nu zbar d_zbar p`.
pub fn delta_nu_apply(p: &BiPoly, nu: f64) -> Result<BiPoly> {
    check_nu(nu)?;
    let dzbar = p.derivative(Var::Zbar);
    let second = dzbar.derivative(Var::Z);
    let first = &BiPoly::monomial(0, 1, Complex64::new(nu, 0.0)) * &dzbar;
    Ok(&first - &second)
}

/// `I^{a,b}_n(z, zbar | c) = (-1)^n e^{a|z|^2 - b z^2 - c z} d_z^n e^{-a|z|^2 + b z^2 + c z}`.
///
/// `b` is real; `a` must be positive.
pub fn i_poly(n: usize, a: f64, b: f64, c: Complex64) -> Result<BiPoly> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::InvalidParameter(format!("a must be positive, got {a}")));
    }
    if !b.is_finite() {
        return Err(Error::InvalidParameter(format!("b must be a finite real, got {b}")));
    }
    let log_d = BiPoly::from_terms([
        (0, 1, Complex64::new(-a, 0.0)),
        (1, 0, Complex64::new(2.0 * b, 0.0)),
        (0, 0, c),
    ]);
    let mut p = BiPoly::one();
    for _ in 0..n {
        p = twisted_derivative(&p, Var::Z, &log_d);
    }
    if n % 2 == 1 {
        p = -&p;
    }
    Ok(p)
}

/// `H'_n(x, y) = i^n y^(n/2) H_n(x / (2i) * y^(-1/2))`, principal branch.
pub fn hprime(n: usize, x: Complex64, y: Complex64) -> Result<Complex64> {
    if y == ZERO {
        return Err(Error::InvalidParameter("H' requires y != 0".into()));
    }
    let root = y.sqrt();
    let arg = x / (Complex64::new(0.0, 2.0) * root);
    let h = hermite_seq(n, arg).get(n);
    Ok(Complex64::i().powu(n as u32) * root.powu(n as u32) * h)
}

/// The two-index polynomials
/// `H'_{m,n}(x,y; zz,w | tau) = m! n! sum_k (-tau)^k / k! H'_{n-k}(x,y)/(n-k)! H'_{m-k}(zz,w)/(m-k)!`.
pub fn hprime_pair(
    m: usize,
    n: usize,
    x: Complex64,
    y: Complex64,
    zz: Complex64,
    w: Complex64,
    tau: Complex64,
) -> Result<Complex64> {
    if y == ZERO || w == ZERO {
        return Err(Error::InvalidParameter("H'_{m,n} requires y != 0 and w != 0".into()));
    }
    let fact = |k: usize| (1..=k).map(|v| v as f64).product::<f64>();
    let mut sum = ZERO;
    for k in 0..=m.min(n) {
        let left = hprime(n - k, x, y)? / fact(n - k);
        let right = hprime(m - k, zz, w)? / fact(m - k);
        sum += (-tau).powu(k as u32) / fact(k) * left * right;
    }
    Ok(fact(m) * fact(n) * sum)
}
