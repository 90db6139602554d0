use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spaces::{kernel_K, kernel_Kn, psi, psi_mn, weight_omega, SParam};
use crate::transforms::{kernel_B, kernel_S_closed};

/// Functions that `grid` can tabulate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridFunction {
    Psi,
    PsiMn,
    KernelK,
    KernelKn,
    WeightOmega,
    KernelB,
    KernelS,
}

impl FromStr for GridFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "psi" => Self::Psi,
            "psi_mn" => Self::PsiMn,
            "kernel_K" => Self::KernelK,
            "kernel_Kn" => Self::KernelKn,
            "weight_omega" => Self::WeightOmega,
            "kernel_B" => Self::KernelB,
            "kernel_S" => Self::KernelS,
            _ => return Err(Error::UnknownFunction(s.to_string())),
        })
    }
}

/// Corners `(x0, y0)`, `(x1, y1)` and point counts of a rectangular grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub x0: f64,
    pub y0: f64,
    pub x1: f64,
    pub y1: f64,
    pub nx: usize,
    pub ny: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { x0: -1.0, y0: -1.0, x1: 1.0, y1: 1.0, nx: 3, ny: 3 }
    }
}

impl FromStr for GridSpec {
    type Err = Error;

    /// `x0,y0,x1,y1,nx,ny`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("grid must be x0,y0,x1,y1,nx,ny, got '{s}'"));
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 6 {
            return Err(bad());
        }
        let f = |i: usize| parts[i].parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(bad);
        let n = |i: usize| parts[i].parse::<usize>().ok().filter(|&v| v > 0).ok_or_else(bad);
        Ok(Self { x0: f(0)?, y0: f(1)?, x1: f(2)?, y1: f(3)?, nx: n(4)?, ny: n(5)? })
    }
}

impl GridSpec {
    /// Points row by row, `x` varying fastest.
    pub fn points(&self) -> Vec<Complex64> {
        let axis = |a: f64, b: f64, n: usize| -> Vec<f64> {
            if n == 1 {
                vec![a]
            } else {
                (0..n)
                    .map(|i| {
                        let f = i as f64 / (n - 1) as f64;
                        a * (1.0 - f) + b * f
                    })
                    .collect()
            }
        };
        let xs = axis(self.x0, self.x1, self.nx);
        axis(self.y0, self.y1, self.ny)
            .into_iter()
            .flat_map(|y| xs.iter().map(move |&x| Complex64::new(x, y)))
            .collect()
    }
}

/// Indices and fixed arguments for the functions that need them.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct GridOptions {
    pub m: usize,
    pub n: usize,
    /// Second argument of `kernel_K` and `kernel_Kn`.
    pub w: Complex64,
    /// Real argument of `kernel_B`.
    pub t: f64,
    /// Real argument of `kernel_S`.
    pub x: f64,
}

fn evaluate(f: GridFunction, z: Complex64, sp: &SParam, o: &GridOptions) -> Result<Complex64> {
    Ok(match f {
        GridFunction::Psi => psi(o.m, z, sp),
        GridFunction::PsiMn => psi_mn(o.m, o.n, z, sp),
        GridFunction::KernelK => kernel_K(z, o.w, sp),
        GridFunction::KernelKn => kernel_Kn(o.n, z, o.w, sp)?,
        GridFunction::WeightOmega => Complex64::new(weight_omega(z, sp), 0.0),
        GridFunction::KernelB => kernel_B(o.t, z, sp),
        GridFunction::KernelS => kernel_S_closed(o.n, o.x, z, sp),
    })
}

/// CSV text `x,y,re,im,abs` with one row per grid point.
pub fn write_grid(f: GridFunction, spec: &GridSpec, sp: &SParam, opts: &GridOptions) -> Result<String> {
    let mut out = String::from("x,y,re,im,abs\n");
    for z in spec.points() {
        let v = evaluate(f, z, sp, opts)?;
        writeln!(out, "{},{},{},{},{}", z.re, z.im, v.re, v.im, v.norm()).expect("writing to a String");
    }
    Ok(out)
}

/// Writes the grid of `f` to `out` and returns the number of rows.
pub fn emit_grid(f: GridFunction, spec: &GridSpec, sp: &SParam, opts: &GridOptions, out: &Path) -> Result<usize> {
    let text = write_grid(f, spec, sp, opts)?;
    fs::write(out, text).map_err(|e| Error::Io(format!("{}: {e}", out.display())))?;
    Ok(spec.nx * spec.ny)
}
