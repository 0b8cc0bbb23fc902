//! Numerical solution of order-condition systems.
//!
//! Square systems are solved by damped Newton iteration from random starts
//! and polished in double-double arithmetic. Underdetermined systems are
//! handled by minimizing the local error measure subject to the conditions.

mod minimize;
mod newton;

use std::cmp::Ordering;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use splitting_core::conditions::{
    self, embedded_worker_shape, order_conditions, CompositionShape, Origin, PolySystem,
    StageCoefficients,
};
use splitting_core::eval::CompiledSystem;
use splitting_core::freealg::Var;
use splitting_core::schemes::{self, SplittingScheme, ZERO_STAGE};

use crate::error::{Error, Result};

pub use minimize::{minimize_lem, MinimizeCensus, MinimizeReport};
pub use newton::{newton, polish, NewtonOutcome};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldKind {
    Real,
    Complex,
}

impl FieldKind {
    pub fn as_str(self) -> &'static str {
        match self {
            FieldKind::Real => "real",
            FieldKind::Complex => "complex",
        }
    }

    pub fn default_radius(self) -> f64 {
        match self {
            FieldKind::Real => 2.0,
            FieldKind::Complex => 1.5,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveConfig {
    pub field: FieldKind,
    pub restarts: usize,
    /// Starts are uniform in `[-r, r]` per real and imaginary part.
    pub sample_box: f64,
    pub seed: u64,
    pub tol_residual: f64,
    pub max_newton_iters: usize,
    pub dedup_distance: f64,
    /// `None`: rayon's default pool.
    pub threads: Option<usize>,
}

impl SolveConfig {
    pub fn new(field: FieldKind) -> Self {
        SolveConfig {
            field,
            restarts: 100,
            sample_box: field.default_radius(),
            seed: 0,
            tol_residual: 1e-12,
            max_newton_iters: 100,
            dedup_distance: 1e-8,
            threads: None,
        }
    }

    pub fn with_restarts(mut self, n: usize) -> Self {
        self.restarts = n;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(Error::config("at least one restart is required"));
        }
        if !(self.tol_residual > 0.0) {
            return Err(Error::config("residual tolerance must be positive"));
        }
        if !(self.sample_box > 0.0 && self.sample_box.is_finite()) {
            return Err(Error::config("sample box radius must be positive"));
        }
        if !(self.dedup_distance >= 0.0) {
            return Err(Error::config("dedup distance must be nonnegative"));
        }
        if self.threads == Some(0) {
            return Err(Error::config("thread count must be positive"));
        }
        Ok(())
    }

    /// Random generator of restart `i`: its own stream of the master seed,
    /// so results do not depend on scheduling.
    pub fn rng(&self, restart: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(restart as u64);
        rng
    }

    pub fn sample(&self, rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
        let r = self.sample_box;
        (0..n)
            .map(|_| {
                let re = rng.random_range(-r..=r);
                let im = match self.field {
                    FieldKind::Real => 0.0,
                    FieldKind::Complex => rng.random_range(-r..=r),
                };
                Complex64::new(re, im)
            })
            .collect()
    }

    /// Runs `f` for every restart, in parallel, returning results in
    /// restart order.
    pub(crate) fn run_restarts<R, F>(&self, f: F) -> Result<Vec<R>>
    where
        R: Send,
        F: Fn(usize, &mut ChaCha8Rng) -> R + Sync + Send,
    {
        let work = || {
            (0..self.restarts)
                .into_par_iter()
                .map(|i| f(i, &mut self.rng(i)))
                .collect::<Vec<R>>()
        };
        match self.threads {
            None => Ok(work()),
            Some(n) => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build()
                    .map_err(|e| Error::config(e.to_string()))?;
                Ok(pool.install(work))
            }
        }
    }
}

/// A converged root, mapped back to the full coefficient set.
#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    /// Values of the system's unknowns, in [`PolySystem::unknowns`] order.
    pub values: Vec<Complex64>,
    /// `a_1..a_s, b_1..b_s[, c_1..c_s]` for splitting systems, the full
    /// weight vector `w_1..w_m` for compositions.
    pub coefficients: Vec<(Var, Complex64)>,
    /// Largest absolute equation value, including a re-check against the
    /// unreduced conditions.
    pub residual: f64,
    pub lem: Option<f64>,
    /// Every nonzero coefficient has a positive real part.
    pub positive: bool,
    /// The complex conjugate root was found too and folded into this one.
    pub conjugate_pair: bool,
    pub restart: usize,
    /// Relative norm of the projected objective gradient (minimization only).
    pub stationarity: Option<f64>,
}

impl Solution {
    pub fn is_real(&self) -> bool {
        self.values.iter().all(|z| z.im == 0.0)
    }

    pub fn stage_coefficients(&self, system: &PolySystem) -> Option<StageCoefficients> {
        match &system.origin {
            Origin::Splitting(shape) => Some(shape.expand(|v| self.value_of(system, v))),
            Origin::Composition(_) => None,
        }
    }

    fn value_of(&self, system: &PolySystem, v: Var) -> Complex64 {
        system
            .unknowns()
            .iter()
            .position(|&u| u == v)
            .map(|i| self.values[i])
            .unwrap_or_default()
    }

    /// The scheme described by a splitting solution, or the Strang
    /// composition described by a weight solution.
    pub fn to_scheme(&self, system: &PolySystem, name: &str) -> Result<SplittingScheme> {
        let scheme = match &system.origin {
            Origin::Splitting(shape) => {
                let stages = schemes::template_stages(&shape.expand(|v| self.value_of(system, v)));
                SplittingScheme::declared(name, shape.alphabet(), stages, system.order)?
            }
            Origin::Composition(_) => {
                let w: Vec<Complex64> = self.coefficients.iter().map(|&(_, x)| x).collect();
                schemes::strang().compose(&w)?.with_name(name)
            }
        };
        Ok(scheme.with_lem(self.lem))
    }
}

/// Restart outcome counts.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Census {
    pub restarts: usize,
    pub converged: usize,
    pub singular: usize,
    pub diverged: usize,
    pub stalled: usize,
    pub max_iterations: usize,
    /// Converged but failed the re-check against the unreduced conditions.
    pub rejected: usize,
    pub duplicates: usize,
    pub distinct: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveReport {
    pub solutions: Vec<Solution>,
    pub census: Census,
}

pub(crate) struct Prepared {
    pub complex: CompiledSystem<Complex64>,
    pub dd: CompiledSystem<crate::dd::CDD>,
    pub unknowns: Vec<Var>,
}

pub(crate) fn prepare(system: &PolySystem, cfg: &SolveConfig) -> Result<Prepared> {
    let unknowns = system.unknowns();
    let fixed = system.fixed();
    if cfg.field == FieldKind::Real && fixed.iter().any(|(_, c)| c.im != 0.0) {
        return Err(Error::config("complex fixed values in a real search"));
    }
    let polys = system.polynomials();
    Ok(Prepared {
        complex: CompiledSystem::new(&polys, &unknowns, &fixed)?,
        dd: CompiledSystem::new(&polys, &unknowns, &fixed)?,
        unknowns,
    })
}

fn max_abs(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Residual, LEM and full coefficients of a point.
pub(crate) fn describe(
    system: &PolySystem,
    prep: &Prepared,
    values: Vec<Complex64>,
    restart: usize,
) -> Result<Solution> {
    let mut residual = max_abs(&prep.complex.residual(&values));
    let (coefficients, lem) = match &system.origin {
        Origin::Splitting(shape) => {
            let lookup = |v: Var| {
                prep.unknowns
                    .iter()
                    .position(|&u| u == v)
                    .map(|i| values[i])
                    .unwrap_or_default()
            };
            let coeffs = shape.expand(lookup);
            residual = residual.max(conditions::order_residual(&coeffs, system.order)?);
            let lem = conditions::lem(&coeffs, system.order).ok();
            let mut list = Vec::new();
            for letter in coeffs.alphabet.letters() {
                for (j, &c) in coeffs.coeffs[letter as usize].iter().enumerate() {
                    list.push((Var::coefficient(letter, j + 1), c));
                }
            }
            (list, lem)
        }
        Origin::Composition(shape) => {
            let w = shape.expand(&values)?;
            let list: Vec<(Var, Complex64)> = w
                .iter()
                .enumerate()
                .map(|(i, &x)| (Var::weight(i + 1), x))
                .collect();
            let lem = schemes::strang()
                .compose(&w)
                .ok()
                .and_then(|s| conditions::lem(&s.to_template(), shape.target_order()).ok());
            (list, lem)
        }
    };
    let positive = coefficients
        .iter()
        .all(|(_, c)| c.norm() <= ZERO_STAGE || c.re > 0.0);
    Ok(Solution {
        values,
        coefficients,
        residual,
        lem,
        positive,
        conjugate_pair: false,
        restart,
        stationarity: None,
    })
}

fn distance(x: &[Complex64], y: &[Complex64]) -> f64 {
    x.iter()
        .zip(y)
        .map(|(a, b)| (a - b).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Removes repeated roots (and complex conjugates of earlier roots) in
/// restart order, then sorts by LEM and coefficients. Returns the number of
/// removed entries.
pub(crate) fn dedup_and_sort(found: Vec<Solution>, dist: f64) -> (Vec<Solution>, usize) {
    let mut kept: Vec<Solution> = Vec::new();
    let mut removed = 0;
    'next: for s in found {
        let conj: Vec<Complex64> = s.values.iter().map(|z| z.conj()).collect();
        let self_conjugate = distance(&s.values, &conj) < dist;
        for k in kept.iter_mut() {
            if distance(&k.values, &s.values) < dist {
                removed += 1;
                continue 'next;
            }
            if !self_conjugate && distance(&k.values, &conj) < dist {
                k.conjugate_pair = true;
                removed += 1;
                continue 'next;
            }
        }
        kept.push(s);
    }
    kept.sort_by(compare_solutions);
    (kept, removed)
}

fn compare_solutions(a: &Solution, b: &Solution) -> Ordering {
    let lem = match (a.lem, b.lem) {
        (Some(x), Some(y)) => x.total_cmp(&y),
        (Some(_), None) => Ordering::Less,
        (None, Some(_)) => Ordering::Greater,
        (None, None) => Ordering::Equal,
    };
    lem.then_with(|| {
        for (x, y) in a.values.iter().zip(&b.values) {
            let o = x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im));
            if o != Ordering::Equal {
                return o;
            }
        }
        Ordering::Equal
    })
}

/// All isolated roots found from `cfg.restarts` random starts.
pub fn solve_square(system: &PolySystem, cfg: &SolveConfig) -> Result<SolveReport> {
    cfg.validate()?;
    if !system.is_square() {
        return Err(Error::config(format!(
            "{} equations in {} unknowns; a square system is required",
            system.len(),
            system.unknowns().len()
        )));
    }
    let prep = prepare(system, cfg)?;
    let n = prep.unknowns.len();
    let outcomes = cfg.run_restarts(|i, rng| {
        let x0 = cfg.sample(rng, n);
        let out = newton(&prep.complex, x0, cfg);
        (i, out)
    })?;
    let mut census = Census {
        restarts: cfg.restarts,
        ..Census::default()
    };
    let mut found = Vec::new();
    for (i, out) in outcomes {
        match out {
            NewtonOutcome::Converged(x) => {
                let x = polish(&prep.complex, &prep.dd, x, cfg.field);
                let sol = describe(system, &prep, x, i)?;
                if sol.residual <= cfg.tol_residual {
                    census.converged += 1;
                    found.push(sol);
                } else {
                    census.rejected += 1;
                }
            }
            NewtonOutcome::Singular => census.singular += 1,
            NewtonOutcome::Diverged => census.diverged += 1,
            NewtonOutcome::Stalled => census.stalled += 1,
            NewtonOutcome::MaxIterations => census.max_iterations += 1,
        }
    }
    let (solutions, removed) = dedup_and_sort(found, cfg.dedup_distance);
    census.duplicates = removed;
    census.distinct = solutions.len();
    Ok(SolveReport { solutions, census })
}

/// A weight vector for a symmetric Strang composition, with the recombined
/// scheme and its verification.
#[derive(Clone, Debug, PartialEq)]
pub struct CompositionSolution {
    pub weights: Vec<Complex64>,
    pub scheme: SplittingScheme,
    /// Largest order-condition residual of the recombined scheme.
    pub order_residual: f64,
}

/// Palindromic weights `ω` making `S(ω_m h) ... S(ω_1 h)` of order
/// `target_order` for Strang's `S`, each verified on the recombined scheme.
pub fn compose_weights(
    m: usize,
    target_order: usize,
    cfg: &SolveConfig,
) -> Result<Vec<CompositionSolution>> {
    let shape = CompositionShape::new(m, target_order)?;
    let system = conditions::composition_system(&shape)?;
    let report = solve_square(&system, cfg)?;
    let mut out = Vec::new();
    for sol in report.solutions {
        let weights = shape.expand(&sol.values)?;
        let scheme = schemes::strang()
            .compose(&weights)?
            .with_name(format!("Strang composition m={m} order {target_order}"));
        let order_residual = scheme.order_residual(target_order)?;
        if order_residual <= cfg.tol_residual {
            let scheme = scheme.with_order(target_order).with_computed_lem()?;
            out.push(CompositionSolution {
                weights,
                scheme,
                order_residual,
            });
        }
    }
    Ok(out)
}

/// Solutions of the worker system for one shared-prefix length.
#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddedCandidate {
    pub shared_prefix: usize,
    pub equations: usize,
    pub unknowns: usize,
    pub solutions: Vec<Solution>,
    pub system: PolySystem,
}

/// Flexible embedding: tries every shared-prefix length from the largest
/// that leaves at least as many unknowns as equations down to zero, and
/// reports each length for which a worker was found. `limit` caps the number
/// of successful lengths reported.
pub fn embedded_search(
    controller: &SplittingScheme,
    worker_stages: usize,
    worker_order: usize,
    limit: Option<usize>,
    cfg: &SolveConfig,
) -> Result<Vec<EmbeddedCandidate>> {
    if worker_order >= controller.order() {
        return Err(Error::config(format!(
            "worker order {worker_order} must be below the controller order {}",
            controller.order()
        )));
    }
    let template = controller.to_template();
    let letters = template.alphabet.size() as usize;
    let longest = (worker_stages * letters).min(template.interleaved().len());
    let mut out = Vec::new();
    for prefix in (0..=longest).rev() {
        let shape = embedded_worker_shape(&template, prefix, worker_stages)?;
        let system = order_conditions(worker_order, &shape)?;
        let (eqs, unk) = (system.len(), system.unknowns().len());
        if unk < eqs {
            continue;
        }
        let solutions = if eqs == unk {
            solve_square(&system, cfg)?.solutions
        } else {
            minimize_lem(&system, cfg)?.candidates
        };
        if solutions.is_empty() {
            continue;
        }
        out.push(EmbeddedCandidate {
            shared_prefix: prefix,
            equations: eqs,
            unknowns: unk,
            solutions,
            system,
        });
        if limit.is_some_and(|l| out.len() >= l) {
            break;
        }
    }
    Ok(out)
}
