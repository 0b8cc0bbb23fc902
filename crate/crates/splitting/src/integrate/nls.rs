//! Coupled nonlinear Schrödinger system
//!
//! ```text
//! i(ψ1_t + δ ψ1_x) + ½ ψ1_xx + (|ψ1|² + e|ψ2|²) ψ1 = 0
//! i(ψ2_t − δ ψ2_x) + ½ ψ2_xx + (e|ψ1|² + |ψ2|²) ψ2 = 0
//! ```
//!
//! split into the linear part A, solved exactly in Fourier space, and the
//! nonlinear part B, a pointwise phase rotation.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use splitting_core::lyndon::{A, B};

use super::{Problem, State};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct NlsParams {
    pub delta: f64,
    pub beta: f64,
    pub v: f64,
    pub e: f64,
    pub x_min: f64,
    pub x_max: f64,
    /// Grid size, a power of two.
    pub n: usize,
}

impl Default for NlsParams {
    fn default() -> Self {
        NlsParams {
            delta: 0.5,
            beta: 1.0,
            v: 1.1,
            e: 0.8,
            x_min: -50.0,
            x_max: 70.0,
            n: 512,
        }
    }
}

impl NlsParams {
    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / self.n as f64
    }

    pub fn grid(&self) -> Vec<f64> {
        let dx = self.dx();
        (0..self.n).map(|j| self.x_min + j as f64 * dx).collect()
    }

    /// Wavenumbers in FFT output order: `2πm/L` for `m = 0..N/2-1`, then
    /// `m = -N/2..-1`.
    pub fn wavenumbers(&self) -> Vec<f64> {
        let l = self.x_max - self.x_min;
        let n = self.n as i64;
        (0..n)
            .map(|j| {
                let m = if j < n / 2 { j } else { j - n };
                2.0 * PI * m as f64 / l
            })
            .collect()
    }

    fn validate(&self) -> Result<()> {
        if !self.n.is_power_of_two() || self.n < 2 {
            return Err(Error::config(format!("grid size {} is not a power of two", self.n)));
        }
        if !(self.x_max > self.x_min) || !self.x_min.is_finite() || !self.x_max.is_finite() {
            return Err(Error::config("empty spatial domain"));
        }
        if !(self.beta > 0.0) || !(self.e > -1.0) {
            return Err(Error::config("soliton needs beta > 0 and e > -1"));
        }
        Ok(())
    }

    /// The travelling soliton pair
    ///
    /// ```text
    /// ψ1,2 = √(2β/(1+e)) sech(√(2β)(x − vt)) exp(i((v ∓ δ)x + (β − (v² − δ²)/2)t))
    /// ```
    pub fn soliton(&self, t: f64) -> NlsState {
        let amp = (2.0 * self.beta / (1.0 + self.e)).sqrt();
        let width = (2.0 * self.beta).sqrt();
        let omega = self.beta - 0.5 * (self.v * self.v - self.delta * self.delta);
        let wave = |x: f64, k: f64| {
            let env = amp / (width * (x - self.v * t)).cosh();
            Complex64::from_polar(env, k * x + omega * t)
        };
        let xs = self.grid();
        NlsState {
            psi1: xs.iter().map(|&x| wave(x, self.v - self.delta)).collect(),
            psi2: xs.iter().map(|&x| wave(x, self.v + self.delta)).collect(),
            dx: self.dx(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NlsState {
    pub psi1: Vec<Complex64>,
    pub psi2: Vec<Complex64>,
    pub dx: f64,
}

fn sq_sum(v: &[Complex64]) -> f64 {
    v.iter().map(Complex64::norm_sqr).sum()
}

impl NlsState {
    /// Grid-weighted L² norms of the two components.
    pub fn component_norms(&self) -> (f64, f64) {
        ((self.dx * sq_sum(&self.psi1)).sqrt(), (self.dx * sq_sum(&self.psi2)).sqrt())
    }
}

impl State for NlsState {
    fn lincomb(&self, a: f64, other: &Self, b: f64) -> Self {
        let comb = |x: &[Complex64], y: &[Complex64]| x.iter().zip(y).map(|(p, q)| p * a + q * b).collect();
        NlsState {
            psi1: comb(&self.psi1, &other.psi1),
            psi2: comb(&self.psi2, &other.psi2),
            dx: self.dx,
        }
    }

    /// `(Δx Σ (|ψ1|² + |ψ2|²))^½`.
    fn norm(&self) -> f64 {
        (self.dx * (sq_sum(&self.psi1) + sq_sum(&self.psi2))).sqrt()
    }

    fn is_finite(&self) -> bool {
        self.psi1.iter().chain(&self.psi2).all(|z| z.is_finite())
    }
}

/// Exact flow of `ψ_t = ∓δ ψ_x + (i/2) ψ_xx` per Fourier mode. The forward
/// transform is unnormalized, the inverse is scaled by `1/N`.
struct LinearFlow {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    k: Vec<f64>,
    delta: f64,
}

impl LinearFlow {
    fn apply(&self, t: Complex64, psi: &mut [Complex64], sign: f64) {
        self.forward.process(psi);
        let scale = 1.0 / psi.len() as f64;
        for (z, &k) in psi.iter_mut().zip(&self.k) {
            let w = sign * self.delta * k + 0.5 * k * k;
            *z *= (Complex64::new(0.0, -w) * t).exp() * scale;
        }
        self.inverse.process(psi);
    }
}

/// Problem for the soliton pair of `params`, with A the linear and B the
/// nonlinear flow.
pub fn nls_problem(params: &NlsParams) -> Result<Problem<NlsState>> {
    params.validate()?;
    let mut planner = FftPlanner::new();
    let linear = LinearFlow {
        forward: planner.plan_fft_forward(params.n),
        inverse: planner.plan_fft_inverse(params.n),
        k: params.wavenumbers(),
        delta: params.delta,
    };
    let e = params.e;
    let exact_params = params.clone();
    Ok(Problem::new(params.soliton(0.0))
        .with_flow(A, move |t: Complex64, u: &mut NlsState| {
            linear.apply(t, &mut u.psi1, 1.0);
            linear.apply(t, &mut u.psi2, -1.0);
        })
        .with_flow(B, move |t: Complex64, u: &mut NlsState| {
            for (p, q) in u.psi1.iter_mut().zip(u.psi2.iter_mut()) {
                let (m1, m2) = (p.norm_sqr(), q.norm_sqr());
                *p *= (Complex64::i() * t * (m1 + e * m2)).exp();
                *q *= (Complex64::i() * t * (e * m1 + m2)).exp();
            }
        })
        .with_exact(move |t| exact_params.soliton(t)))
}
