//! LEM minimization under the order conditions.
//!
//! Complex unknowns are optimized through their real and imaginary parts.
//! Each restart runs an augmented-Lagrangian loop with BFGS inner solves,
//! then projects onto the constraint set with minimum-norm Newton steps and
//! polishes. Starts where the projection fails get a Nelder-Mead pass on a
//! penalty function before giving up.

use num_complex::Complex64;
use splitting_core::conditions::{lem_polynomials, Limits, Origin, PolySystem};
use splitting_core::eval::CompiledSystem;

use super::newton::{newton, polish, NewtonOutcome};
use super::{dedup_and_sort, describe, prepare, solve_square, FieldKind, SolveConfig, Solution};
use crate::error::{Error, Result};
use crate::linalg::solve;

const PENALTY_START: f64 = 10.0;
const PENALTY_GROWTH: f64 = 10.0;
const MAX_OUTER: usize = 20;
const MAX_INNER: usize = 400;
/// Minimizers from different starts agree only to about the square root of
/// the inner tolerance, so they are merged more coarsely than roots.
const MERGE_DISTANCE: f64 = 1e-6;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MinimizeCensus {
    pub restarts: usize,
    pub feasible: usize,
    pub infeasible: usize,
    /// Restarts rescued by the Nelder-Mead fallback.
    pub fallback: usize,
    pub duplicates: usize,
    pub distinct: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MinimizeReport {
    /// Smallest LEM over all restarts; a local optimum at best.
    pub best: Solution,
    /// All distinct feasible end points, sorted by LEM.
    pub candidates: Vec<Solution>,
    pub census: MinimizeCensus,
}

struct Problem<'a> {
    cons: &'a CompiledSystem<Complex64>,
    obj: CompiledSystem<Complex64>,
    n: usize,
    field: FieldKind,
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl Problem<'_> {
    fn dim(&self) -> usize {
        match self.field {
            FieldKind::Real => self.n,
            FieldKind::Complex => 2 * self.n,
        }
    }

    fn point(&self, y: &[f64]) -> Vec<Complex64> {
        match self.field {
            FieldKind::Real => y.iter().map(|&r| Complex64::new(r, 0.0)).collect(),
            FieldKind::Complex => (0..self.n).map(|k| Complex64::new(y[k], y[self.n + k])).collect(),
        }
    }

    fn view(&self, x: &[Complex64]) -> Vec<f64> {
        match self.field {
            FieldKind::Real => x.iter().map(|z| z.re).collect(),
            FieldKind::Complex => x.iter().map(|z| z.re).chain(x.iter().map(|z| z.im)).collect(),
        }
    }

    fn split(&self, v: Vec<Complex64>) -> Vec<f64> {
        match self.field {
            FieldKind::Real => v.iter().map(|z| z.re).collect(),
            FieldKind::Complex => v.iter().map(|z| z.re).chain(v.iter().map(|z| z.im)).collect(),
        }
    }

    fn constraints(&self, y: &[f64]) -> Vec<f64> {
        self.split(self.cons.residual(&self.point(y)))
    }

    /// Jacobian of [`Self::constraints`], one row per constraint. A
    /// holomorphic `F` has `∂F/∂Re x = J` and `∂F/∂Im x = iJ`.
    fn constraint_jacobian(&self, y: &[f64]) -> Vec<Vec<f64>> {
        let j = self.cons.jacobian(&self.point(y));
        match self.field {
            FieldKind::Real => j.iter().map(|r| r.iter().map(|z| z.re).collect()).collect(),
            FieldKind::Complex => {
                let re = j.iter().map(|r| {
                    r.iter().map(|z| z.re).chain(r.iter().map(|z| -z.im)).collect()
                });
                let im = j.iter().map(|r| {
                    r.iter().map(|z| z.im).chain(r.iter().map(|z| z.re)).collect()
                });
                re.chain(im).collect()
            }
        }
    }

    /// `Σ |λ_w|²` and its gradient.
    fn objective(&self, y: &[f64]) -> (f64, Vec<f64>) {
        let x = self.point(y);
        let l = self.obj.residual(&x);
        let k = self.obj.jacobian(&x);
        let value = l.iter().map(Complex64::norm_sqr).sum();
        let mut g = vec![0.0; self.dim()];
        for (lj, row) in l.iter().zip(&k) {
            for (i, kji) in row.iter().enumerate() {
                let w = lj.conj() * kji;
                g[i] += 2.0 * w.re;
                if self.field == FieldKind::Complex {
                    g[self.n + i] -= 2.0 * w.im;
                }
            }
        }
        (value, g)
    }

    fn lagrangian(&self, y: &[f64], mu: &[f64], rho: f64) -> (f64, Vec<f64>) {
        let (f, mut g) = self.objective(y);
        let c = self.constraints(y);
        let a = self.constraint_jacobian(y);
        let mut value = f;
        for (i, (ci, row)) in c.iter().zip(&a).enumerate() {
            value += -mu[i] * ci + 0.5 * rho * ci * ci;
            let w = rho * ci - mu[i];
            for (gk, ak) in g.iter_mut().zip(row) {
                *gk += w * ak;
            }
        }
        (value, g)
    }

    /// `‖∇f − Aᵀμ‖ / max(1, ‖∇f‖)` with least-squares multipliers `μ`.
    fn stationarity(&self, y: &[f64]) -> Option<f64> {
        let (_, g) = self.objective(y);
        let a = self.constraint_jacobian(y);
        let m = a.len();
        let gram: Vec<Vec<f64>> = (0..m)
            .map(|i| (0..m).map(|j| dot(&a[i], &a[j])).collect())
            .collect();
        let rhs: Vec<f64> = a.iter().map(|r| dot(r, &g)).collect();
        let mu = solve(gram, rhs)?;
        let mut r = g.clone();
        for (mi, row) in mu.iter().zip(&a) {
            for (rk, ak) in r.iter_mut().zip(row) {
                *rk -= mi * ak;
            }
        }
        Some(norm(&r) / norm(&g).max(1.0))
    }
}

/// Quasi-Newton minimization with an inverse-Hessian BFGS update and
/// Armijo backtracking.
fn bfgs(fg: impl Fn(&[f64]) -> (f64, Vec<f64>), mut y: Vec<f64>, gtol: f64) -> Vec<f64> {
    let d = y.len();
    let mut h: Vec<Vec<f64>> = (0..d)
        .map(|i| (0..d).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    let (mut f, mut g) = fg(&y);
    for _ in 0..MAX_INNER {
        if !f.is_finite() || norm(&g) <= gtol {
            break;
        }
        let mut p: Vec<f64> = h.iter().map(|row| -dot(row, &g)).collect();
        let mut slope = dot(&p, &g);
        if slope >= 0.0 {
            // lost descent: restart from steepest descent
            for (i, row) in h.iter_mut().enumerate() {
                row.iter_mut().enumerate().for_each(|(j, v)| *v = (i == j) as u8 as f64);
            }
            p = g.iter().map(|x| -x).collect();
            slope = dot(&p, &g);
        }
        let mut t = 1.0;
        let (y_new, f_new, g_new) = loop {
            let trial: Vec<f64> = y.iter().zip(&p).map(|(a, b)| a + t * b).collect();
            let (ft, gt) = fg(&trial);
            if ft.is_finite() && ft <= f + 1e-4 * t * slope {
                break (trial, ft, gt);
            }
            t *= 0.5;
            if t < 1e-12 {
                return y;
            }
        };
        let s: Vec<f64> = y_new.iter().zip(&y).map(|(a, b)| a - b).collect();
        let q: Vec<f64> = g_new.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sq = dot(&s, &q);
        if sq > 1e-14 * norm(&s) * norm(&q) {
            let hq: Vec<f64> = h.iter().map(|row| dot(row, &q)).collect();
            let qhq = dot(&q, &hq);
            let r = 1.0 / sq;
            for i in 0..d {
                for j in 0..d {
                    h[i][j] += (1.0 + qhq * r) * r * s[i] * s[j] - r * (hq[i] * s[j] + s[i] * hq[j]);
                }
            }
        }
        y = y_new;
        f = f_new;
        g = g_new;
    }
    y
}

/// Downhill simplex on `f`, used when gradient steps fail.
fn nelder_mead(f: impl Fn(&[f64]) -> f64, start: Vec<f64>, iterations: usize) -> Vec<f64> {
    let d = start.len();
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(d + 1);
    simplex.push((start.clone(), f(&start)));
    for i in 0..d {
        let mut v = start.clone();
        v[i] += if v[i].abs() > 1e-3 { 0.1 * v[i] } else { 0.05 };
        let fv = f(&v);
        simplex.push((v, fv));
    }
    let lerp = |a: &[f64], b: &[f64], t: f64| -> Vec<f64> {
        a.iter().zip(b).map(|(x, y)| x + t * (y - x)).collect()
    };
    for _ in 0..iterations {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        if (simplex[d].1 - simplex[0].1).abs() <= 1e-15 * (1.0 + simplex[0].1.abs()) {
            break;
        }
        let mut centroid = vec![0.0; d];
        for (v, _) in &simplex[..d] {
            for (c, x) in centroid.iter_mut().zip(v) {
                *c += x / d as f64;
            }
        }
        let worst = simplex[d].clone();
        let reflected = lerp(&centroid, &worst.0, -1.0);
        let fr = f(&reflected);
        if fr < simplex[0].1 {
            let expanded = lerp(&centroid, &worst.0, -2.0);
            let fe = f(&expanded);
            simplex[d] = if fe < fr { (expanded, fe) } else { (reflected, fr) };
        } else if fr < simplex[d - 1].1 {
            simplex[d] = (reflected, fr);
        } else {
            let contracted = lerp(&centroid, &worst.0, 0.5);
            let fc = f(&contracted);
            if fc < worst.1 {
                simplex[d] = (contracted, fc);
            } else {
                let best = simplex[0].0.clone();
                for entry in simplex.iter_mut().skip(1) {
                    let v = lerp(&best, &entry.0, 0.5);
                    let fv = f(&v);
                    *entry = (v, fv);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    simplex.swap_remove(0).0
}

enum Attempt {
    Feasible(Solution, bool),
    Infeasible,
}

/// Minimizes the LEM (the norm of the leading error coefficients) over all
/// coefficient sets satisfying `system`, from `cfg.restarts` random starts.
/// Square systems are handed to [`solve_square`].
pub fn minimize_lem(system: &PolySystem, cfg: &SolveConfig) -> Result<MinimizeReport> {
    cfg.validate()?;
    let unknowns = system.unknowns().len();
    if system.len() > unknowns {
        return Err(Error::config(format!(
            "{} equations in {unknowns} unknowns; minimization needs at least as many unknowns",
            system.len()
        )));
    }
    if system.is_square() {
        let report = solve_square(system, cfg)?;
        let census = MinimizeCensus {
            restarts: report.census.restarts,
            feasible: report.census.converged,
            infeasible: report.census.restarts - report.census.converged,
            fallback: 0,
            duplicates: report.census.duplicates,
            distinct: report.census.distinct,
        };
        return finish(report.solutions, census, cfg);
    }
    let Origin::Splitting(shape) = &system.origin else {
        return Err(Error::config("LEM minimization needs a splitting system"));
    };
    let prep = prepare(system, cfg)?;
    let lem_polys: Vec<_> = lem_polynomials(system.order, shape, Limits::default())?
        .into_iter()
        .map(|e| e.poly)
        .collect();
    let problem = Problem {
        cons: &prep.complex,
        obj: CompiledSystem::new(&lem_polys, &prep.unknowns, &system.fixed())?,
        n: prep.unknowns.len(),
        field: cfg.field,
    };

    let project = |x: Vec<Complex64>| match newton(&prep.complex, x, cfg) {
        NewtonOutcome::Converged(x) => Some(polish(&prep.complex, &prep.dd, x, cfg.field)),
        _ => None,
    };

    let attempts = cfg.run_restarts(|i, rng| -> Result<Attempt> {
        let x0 = cfg.sample(rng, problem.n);
        let mut y = problem.view(&x0);
        let mut mu = vec![0.0; problem.constraints(&y).len()];
        let mut rho = PENALTY_START;
        let mut previous = f64::INFINITY;
        for _ in 0..MAX_OUTER {
            y = bfgs(|v| problem.lagrangian(v, &mu, rho), y, 1e-10);
            let c = problem.constraints(&y);
            let cn = norm(&c);
            if !cn.is_finite() {
                break;
            }
            if cn <= 1e-13 {
                break;
            }
            for (m, ci) in mu.iter_mut().zip(&c) {
                *m -= rho * ci;
            }
            if cn > 0.25 * previous {
                rho *= PENALTY_GROWTH;
            }
            previous = cn;
        }
        let mut used_fallback = false;
        let mut x = y.iter().all(|v| v.is_finite()).then(|| problem.point(&y)).and_then(&project);
        if x.is_none() {
            used_fallback = true;
            let penalty = |v: &[f64]| {
                let c = problem.constraints(v);
                problem.objective(v).0 + 1e4 * dot(&c, &c)
            };
            let start = if y.iter().all(|v| v.is_finite()) { y.clone() } else { problem.view(&x0) };
            let z = nelder_mead(penalty, start, 400 * problem.dim());
            x = project(problem.point(&z));
        }
        let Some(x) = x else {
            return Ok(Attempt::Infeasible);
        };
        let mut sol = describe(system, &prep, x, i)?;
        if !(sol.residual <= cfg.tol_residual) {
            return Ok(Attempt::Infeasible);
        }
        sol.stationarity = problem.stationarity(&problem.view(&sol.values));
        Ok(Attempt::Feasible(sol, used_fallback))
    })?;

    let mut census = MinimizeCensus {
        restarts: cfg.restarts,
        ..MinimizeCensus::default()
    };
    let mut found = Vec::new();
    for a in attempts {
        match a? {
            Attempt::Feasible(sol, fallback) => {
                census.feasible += 1;
                census.fallback += fallback as usize;
                found.push(sol);
            }
            Attempt::Infeasible => census.infeasible += 1,
        }
    }
    let (candidates, removed) = dedup_and_sort(found, cfg.dedup_distance.max(MERGE_DISTANCE));
    census.duplicates = removed;
    census.distinct = candidates.len();
    finish(candidates, census, cfg)
}

fn finish(candidates: Vec<Solution>, census: MinimizeCensus, cfg: &SolveConfig) -> Result<MinimizeReport> {
    match candidates.first() {
        Some(best) => Ok(MinimizeReport {
            best: best.clone(),
            candidates,
            census,
        }),
        None => Err(Error::Infeasible(format!("infeasible after {} restarts", cfg.restarts))),
    }
}
