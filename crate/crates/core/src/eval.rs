//! Fast repeated evaluation of polynomial systems and their Jacobians.

use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::freealg::{CoefPoly, Rational, Var};

/// Scalar type a compiled system can be evaluated in.
pub trait Scalar:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_rational(r: &Rational) -> Self;
    /// `None` when the value is not representable (e.g. complex in a real
    /// field).
    fn from_complex(c: Complex64) -> Option<Self>;
}

fn ratio_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_rational(r: &Rational) -> Self {
        ratio_f64(r)
    }
    fn from_complex(c: Complex64) -> Option<Self> {
        (c.im == 0.0).then_some(c.re)
    }
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_rational(r: &Rational) -> Self {
        Complex64::new(ratio_f64(r), 0.0)
    }
    fn from_complex(c: Complex64) -> Option<Self> {
        Some(c)
    }
}

/// A polynomial whose variables have been replaced by slot indices.
#[derive(Clone, Debug)]
pub struct CompiledPoly<T> {
    terms: Vec<(T, Vec<(usize, u32)>)>,
}

impl<T: Scalar> CompiledPoly<T> {
    pub fn compile(p: &CoefPoly, slot: impl Fn(Var) -> Option<usize>) -> Result<Self> {
        let mut terms = Vec::with_capacity(p.len());
        for (m, c) in p.terms() {
            let mut factors = Vec::with_capacity(m.factors().len());
            for &(v, e) in m.factors() {
                let s = slot(v).ok_or_else(|| {
                    Error::arg(alloc::format!("variable {v} is neither unknown nor fixed"))
                })?;
                factors.push((s, e));
            }
            terms.push((T::from_rational(c), factors));
        }
        Ok(CompiledPoly { terms })
    }

    pub fn eval(&self, x: &[T]) -> T {
        let mut acc = T::zero();
        for (c, factors) in &self.terms {
            let mut t = *c;
            for &(s, e) in factors {
                for _ in 0..e {
                    t = t * x[s];
                }
            }
            acc = acc + t;
        }
        acc
    }
}

/// Equations and Jacobian compiled for evaluation at the unknowns; pinned
/// variables are appended to the argument vector internally.
#[derive(Clone, Debug)]
pub struct CompiledSystem<T> {
    unknowns: usize,
    fixed: Vec<T>,
    equations: Vec<CompiledPoly<T>>,
    /// sparse rows: `(column, ∂f_i/∂x_column)`
    jacobian: Vec<Vec<(usize, CompiledPoly<T>)>>,
}

impl<T: Scalar> CompiledSystem<T> {
    pub fn new(equations: &[CoefPoly], unknowns: &[Var], fixed: &[(Var, Complex64)]) -> Result<Self> {
        let slot = |v: Var| {
            unknowns.iter().position(|&u| u == v).or_else(|| {
                fixed
                    .iter()
                    .position(|&(f, _)| f == v)
                    .map(|i| unknowns.len() + i)
            })
        };
        let fixed_values = fixed
            .iter()
            .map(|&(v, c)| {
                T::from_complex(c).ok_or_else(|| {
                    Error::arg(alloc::format!("value {c} of {v} is not representable"))
                })
            })
            .collect::<Result<Vec<T>>>()?;
        let mut compiled = Vec::with_capacity(equations.len());
        let mut jacobian = Vec::with_capacity(equations.len());
        for p in equations {
            compiled.push(CompiledPoly::compile(p, slot)?);
            let mut row = Vec::new();
            for (j, &u) in unknowns.iter().enumerate() {
                let d = p.derivative(u);
                if !d.is_zero() {
                    row.push((j, CompiledPoly::compile(&d, slot)?));
                }
            }
            jacobian.push(row);
        }
        Ok(CompiledSystem {
            unknowns: unknowns.len(),
            fixed: fixed_values,
            equations: compiled,
            jacobian,
        })
    }

    pub fn unknowns(&self) -> usize {
        self.unknowns
    }

    pub fn equations(&self) -> usize {
        self.equations.len()
    }

    fn full(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.unknowns, "wrong number of unknowns");
        let mut v = Vec::with_capacity(x.len() + self.fixed.len());
        v.extend_from_slice(x);
        v.extend_from_slice(&self.fixed);
        v
    }

    pub fn residual(&self, x: &[T]) -> Vec<T> {
        let v = self.full(x);
        self.equations.iter().map(|p| p.eval(&v)).collect()
    }

    /// Dense row-major Jacobian.
    pub fn jacobian(&self, x: &[T]) -> Vec<Vec<T>> {
        let v = self.full(x);
        self.jacobian
            .iter()
            .map(|row| {
                let mut dense = alloc::vec![T::zero(); self.unknowns];
                for (j, p) in row {
                    dense[*j] = p.eval(&v);
                }
                dense
            })
            .collect()
    }
}
