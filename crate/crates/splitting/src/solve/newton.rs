use num_complex::Complex64;
use splitting_core::eval::CompiledSystem;

use super::{FieldKind, SolveConfig};
use crate::dd::CDD;
use crate::linalg::min_norm_solve;

#[derive(Clone, Debug, PartialEq)]
pub enum NewtonOutcome {
    Converged(Vec<Complex64>),
    Singular,
    Diverged,
    /// The line search could not reduce the residual.
    Stalled,
    MaxIterations,
}

const ARMIJO: f64 = 1e-4;
const MIN_STEP: f64 = 1e-10;
const BLOW_UP: f64 = 1e8;

fn sq_norm(v: &[Complex64]) -> f64 {
    v.iter().map(Complex64::norm_sqr).sum()
}

fn max_abs(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn realify(x: &mut [Complex64], field: FieldKind) {
    if field == FieldKind::Real {
        for z in x {
            z.im = 0.0;
        }
    }
}

/// Damped Newton iteration with Armijo backtracking on `‖F‖²`, stopping at
/// `cfg.tol_residual`. Works for underdetermined systems too, taking
/// minimum-norm steps.
pub fn newton(sys: &CompiledSystem<Complex64>, mut x: Vec<Complex64>, cfg: &SolveConfig) -> NewtonOutcome {
    realify(&mut x, cfg.field);
    let mut f = sys.residual(&x);
    let mut phi = sq_norm(&f);
    for _ in 0..cfg.max_newton_iters {
        if !phi.is_finite() {
            return NewtonOutcome::Diverged;
        }
        if max_abs(&f) <= cfg.tol_residual {
            return NewtonOutcome::Converged(x);
        }
        let j = sys.jacobian(&x);
        let rhs: Vec<Complex64> = f.iter().map(|z| -z).collect();
        let Some(d) = min_norm_solve(&j, &rhs) else {
            return NewtonOutcome::Singular;
        };
        let mut t = 1.0;
        loop {
            let mut trial: Vec<Complex64> = x.iter().zip(&d).map(|(a, b)| a + b * t).collect();
            realify(&mut trial, cfg.field);
            let ft = sys.residual(&trial);
            let pt = sq_norm(&ft);
            if pt <= (1.0 - 2.0 * ARMIJO * t) * phi {
                x = trial;
                f = ft;
                phi = pt;
                break;
            }
            t *= 0.5;
            if t < MIN_STEP {
                return NewtonOutcome::Stalled;
            }
        }
        if x.iter().any(|z| !z.is_finite() || z.norm() > BLOW_UP) {
            return NewtonOutcome::Diverged;
        }
    }
    if max_abs(&f) <= cfg.tol_residual {
        NewtonOutcome::Converged(x)
    } else {
        NewtonOutcome::MaxIterations
    }
}

/// Refines a root with Newton steps in double-double arithmetic (minimum
/// norm steps when underdetermined) and rounds back. The returned point
/// never has a larger double-precision residual than the input.
pub fn polish(
    sys: &CompiledSystem<Complex64>,
    dd: &CompiledSystem<CDD>,
    x: Vec<Complex64>,
    field: FieldKind,
) -> Vec<Complex64> {
    let mut best_r = max_abs(&sys.residual(&x));
    let mut best = x.clone();
    let mut y: Vec<CDD> = x.iter().map(|&z| CDD::from_c64(z)).collect();
    for _ in 0..6 {
        let f = dd.residual(&y);
        let j = dd.jacobian(&y);
        let rhs: Vec<CDD> = f.iter().map(|&z| -z).collect();
        let Some(d) = min_norm_solve(&j, &rhs) else {
            break;
        };
        let step = d.iter().map(|z| z.to_c64().norm()).fold(0.0, f64::max);
        for (a, b) in y.iter_mut().zip(&d) {
            *a = *a + *b;
        }
        let mut cand: Vec<Complex64> = y.iter().map(|z| z.to_c64()).collect();
        realify(&mut cand, field);
        let r = max_abs(&sys.residual(&cand));
        if r.is_finite() && r < best_r {
            best_r = r;
            best = cand;
        }
        if !(step > 1e-30) {
            break;
        }
    }
    best
}
