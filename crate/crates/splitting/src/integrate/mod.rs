//! Applying schemes and pairs to evolution problems, and measuring
//! convergence orders.

mod nls;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use splitting_core::lyndon::{letter_char, Alphabet, Letter};
use splitting_core::schemes::{Controller, SchemePair, SplittingScheme};

use crate::error::{Error, Result};

pub use nls::{nls_problem, NlsParams, NlsState};

/// Exact (or sufficiently accurate) flow of one split operator. The
/// duration is complex so that complex-coefficient schemes can run.
pub trait FlowMap<S>: Send + Sync {
    fn evolve(&self, t: Complex64, state: &mut S);
}

impl<S, F> FlowMap<S> for F
where
    F: Fn(Complex64, &mut S) + Send + Sync,
{
    fn evolve(&self, t: Complex64, state: &mut S) {
        self(t, state)
    }
}

/// Vector-space operations needed for error estimates.
pub trait State: Clone + Send + Sync {
    /// `a * self + b * other`.
    fn lincomb(&self, a: f64, other: &Self, b: f64) -> Self;
    fn norm(&self) -> f64;
    fn is_finite(&self) -> bool;

    fn distance(&self, other: &Self) -> f64 {
        self.lincomb(1.0, other, -1.0).norm()
    }
}

impl State for Complex64 {
    fn lincomb(&self, a: f64, other: &Self, b: f64) -> Self {
        self * a + other * b
    }
    fn norm(&self) -> f64 {
        Complex64::norm(*self)
    }
    fn is_finite(&self) -> bool {
        Complex64::is_finite(*self)
    }
}

impl State for Vec<Complex64> {
    fn lincomb(&self, a: f64, other: &Self, b: f64) -> Self {
        self.iter().zip(other).map(|(x, y)| x * a + y * b).collect()
    }
    fn norm(&self) -> f64 {
        self.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt()
    }
    fn is_finite(&self) -> bool {
        self.iter().all(|z| z.is_finite())
    }
}

type Exact<S> = Box<dyn Fn(f64) -> S + Send + Sync>;

/// An evolution problem `u' = A(u) + B(u) [+ C(u)]` given by its split flows.
pub struct Problem<S> {
    flows: [Option<Box<dyn FlowMap<S>>>; 3],
    initial: S,
    exact: Option<Exact<S>>,
}

impl<S: State> Problem<S> {
    pub fn new(initial: S) -> Self {
        Problem {
            flows: [None, None, None],
            initial,
            exact: None,
        }
    }

    pub fn with_flow(mut self, letter: Letter, flow: impl FlowMap<S> + 'static) -> Self {
        self.flows[letter as usize] = Some(Box::new(flow));
        self
    }

    pub fn with_exact(mut self, exact: impl Fn(f64) -> S + Send + Sync + 'static) -> Self {
        self.exact = Some(Box::new(exact));
        self
    }

    pub fn initial(&self) -> &S {
        &self.initial
    }

    pub fn exact(&self, t: f64) -> Option<S> {
        self.exact.as_ref().map(|f| f(t))
    }

    pub fn has_exact(&self) -> bool {
        self.exact.is_some()
    }

    pub fn flow(&self, letter: Letter) -> Result<&dyn FlowMap<S>> {
        self.flows
            .get(letter as usize)
            .and_then(|f| f.as_deref())
            .ok_or_else(|| Error::config(format!("no flow for operator {}", letter_char(letter))))
    }

    pub fn covers(&self, alphabet: Alphabet) -> bool {
        alphabet.letters().all(|l| self.flows[l as usize].is_some())
    }
}

/// One step of size `h`: the stage flows applied in list order.
pub fn step<S: State>(sch: &SplittingScheme, prob: &Problem<S>, h: f64, u: &S) -> Result<S> {
    let mut v = u.clone();
    for st in sch.stages() {
        if st.coef == Complex64::new(0.0, 0.0) {
            continue;
        }
        prob.flow(st.op)?.evolve(st.coef * h, &mut v);
    }
    Ok(v)
}

/// Worker result, local error estimate and controller value of a pair step.
#[derive(Clone, Debug, PartialEq)]
pub struct PairStep<S> {
    pub worker: S,
    pub estimate: f64,
    /// The higher-order value implied by the pair: the controller scheme's
    /// result, the Milne-corrected worker, or the adjoint average.
    pub controller: S,
}

pub fn pair_step<S: State>(pair: &SchemePair, prob: &Problem<S>, h: f64, u: &S) -> Result<PairStep<S>> {
    let worker = step(pair.worker(), prob, h, u)?;
    match pair.controller() {
        Controller::Embedded { controller, .. } => {
            let ctrl = step(controller, prob, h, u)?;
            Ok(PairStep {
                estimate: worker.distance(&ctrl),
                worker,
                controller: ctrl,
            })
        }
        Controller::Milne { partner, gamma } => {
            let other = step(partner, prob, h, u)?;
            let diff = worker.lincomb(1.0, &other, -1.0);
            let scale = 1.0 / (1.0 - gamma.re);
            if gamma.im != 0.0 {
                return Err(Error::config("complex Milne constant in a real-state estimate"));
            }
            let err = diff.lincomb(scale, &diff, 0.0);
            Ok(PairStep {
                estimate: err.norm(),
                controller: worker.lincomb(1.0, &err, -1.0),
                worker,
            })
        }
        Controller::Adjoint => {
            let adj = step(&pair.worker().adjoint(), prob, h, u)?;
            Ok(PairStep {
                estimate: 0.5 * worker.distance(&adj),
                controller: worker.lincomb(0.5, &adj, 0.5),
                worker,
            })
        }
    }
}

/// What a convergence table measures.
#[derive(Clone, Copy, Debug)]
pub enum Method<'a> {
    Scheme(&'a SplittingScheme),
    /// The pair's worker.
    Worker(&'a SchemePair),
    /// The pair's controller value.
    Controller(&'a SchemePair),
}

impl Method<'_> {
    fn advance<S: State>(&self, prob: &Problem<S>, h: f64, u: &S) -> Result<S> {
        match self {
            Method::Scheme(s) => step(s, prob, h, u),
            Method::Worker(p) => step(p.worker(), prob, h, u),
            Method::Controller(p) => Ok(pair_step(p, prob, h, u)?.controller),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Method::Scheme(s) => s.name().to_string(),
            Method::Worker(p) => p.worker().name().to_string(),
            Method::Controller(p) => format!("{} ({} controller)", p.worker().name(), p.kind().as_str()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Error after one step from the initial state.
    Local,
    /// Error at the end time after fixed steps.
    Global,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Local => "local",
            Mode::Global => "global",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RowFlag {
    /// The state blew up; no later rows were computed.
    NonFinite,
    /// The error is at round-off level, so the order is meaningless.
    RoundOff,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Row {
    pub h: f64,
    pub err: f64,
    /// `log2(err(2h) / err(h))`.
    pub order: Option<f64>,
    pub flag: Option<RowFlag>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceTable {
    pub method: String,
    pub mode: Mode,
    pub t_end: f64,
    pub rows: Vec<Row>,
}

/// Errors below this multiple of the solution norm count as round-off.
pub const ROUND_OFF: f64 = 1e-13;

/// Errors for `levels` step sizes `h0, h0/2, ...`. In global mode `h0` is
/// rounded so that a whole number of steps reaches `t_end`.
pub fn convergence_table<S: State>(
    method: Method<'_>,
    prob: &Problem<S>,
    h0: f64,
    levels: usize,
    mode: Mode,
    t_end: f64,
) -> Result<ConvergenceTable> {
    if !(h0 > 0.0 && h0.is_finite()) {
        return Err(Error::config("initial step size must be positive"));
    }
    if levels == 0 {
        return Err(Error::config("at least one level is required"));
    }
    if !prob.has_exact() {
        return Err(Error::config("a convergence table needs the exact solution"));
    }
    let (h0, steps0) = match mode {
        Mode::Local => (h0, 1usize),
        Mode::Global => {
            if !(t_end > 0.0 && t_end.is_finite()) {
                return Err(Error::config("end time must be positive"));
            }
            let n = (t_end / h0).round().max(1.0) as usize;
            (t_end / n as f64, n)
        }
    };
    let t_ref = match mode {
        Mode::Local => None,
        Mode::Global => Some(t_end),
    };
    let measured: Vec<Result<(f64, f64)>> = (0..levels)
        .into_par_iter()
        .map(|k| {
            let h = h0 / (1u64 << k) as f64;
            let steps = match mode {
                Mode::Local => 1,
                Mode::Global => steps0 << k,
            };
            let mut u = prob.initial().clone();
            for _ in 0..steps {
                u = method.advance(prob, h, &u)?;
                if !u.is_finite() {
                    return Ok((h, f64::NAN));
                }
            }
            let exact = prob.exact(t_ref.unwrap_or(h)).expect("checked above");
            Ok((h, u.distance(&exact)))
        })
        .collect();
    let scale = prob.initial().norm().max(1.0);
    let mut rows: Vec<Row> = Vec::with_capacity(levels);
    for m in measured {
        let (h, err) = m?;
        if !err.is_finite() {
            rows.push(Row {
                h,
                err,
                order: None,
                flag: Some(RowFlag::NonFinite),
            });
            break;
        }
        let round_off = err <= ROUND_OFF * scale;
        let order = match rows.last() {
            Some(prev) if !round_off && prev.flag.is_none() && err > 0.0 => Some((prev.err / err).log2()),
            _ => None,
        };
        rows.push(Row {
            h,
            err,
            order,
            flag: round_off.then_some(RowFlag::RoundOff),
        });
    }
    Ok(ConvergenceTable {
        method: method.label(),
        mode,
        t_end: t_ref.unwrap_or(h0),
        rows,
    })
}

impl ConvergenceTable {
    /// Observed orders of consecutive unflagged rows.
    pub fn orders(&self) -> Vec<f64> {
        self.rows.iter().filter_map(|r| r.order).collect()
    }

    /// Aligned text: errors with three significant digits, orders with two
    /// decimals.
    pub fn render(&self) -> String {
        let mut out = format!("# {} ({} error", self.method, self.mode.as_str());
        if self.mode == Mode::Global {
            out += &format!(" at t = {}", self.t_end);
        }
        out += ")\n";
        out += &format!("{:>12}  {:>10}  {:>6}\n", "h", "err", "order");
        for r in &self.rows {
            let order = r.order.map_or_else(|| "-".to_string(), |o| format!("{o:.2}"));
            let flag = match r.flag {
                Some(RowFlag::NonFinite) => "  non-finite",
                Some(RowFlag::RoundOff) => "  round-off",
                None => "",
            };
            out += &format!("{:>12.6e}  {:>10.2e}  {:>6}{}\n", r.h, r.err, order, flag);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use splitting_core::lyndon::{A, B};
    use splitting_core::schemes;

    fn scalar(la: f64, lb: f64) -> Problem<Complex64> {
        Problem::new(Complex64::new(1.0, 0.0))
            .with_flow(A, move |t: Complex64, u: &mut Complex64| *u *= (t * la).exp())
            .with_flow(B, move |t: Complex64, u: &mut Complex64| *u *= (t * lb).exp())
            .with_exact(move |t| Complex64::new((t * (la + lb)).exp(), 0.0))
    }

    #[test]
    fn lie_trotter_on_scalar() {
        let p = scalar(-0.3, 0.7);
        let u = step(&schemes::lie_trotter(), &p, 0.1, p.initial()).unwrap();
        let expect = (0.07f64).exp() * (-0.03f64).exp();
        assert!((u.re - expect).abs() < 1e-15);
    }

    #[test]
    fn zero_step_is_identity() {
        let p = scalar(-0.3, 0.7);
        let u = step(&schemes::strang(), &p, 0.0, p.initial()).unwrap();
        assert_eq!(u, *p.initial());
    }

    #[test]
    fn adjoint_undoes_step() {
        let p = scalar(-0.3, 0.7);
        let s = schemes::strang();
        let v = step(&s, &p, 0.2, p.initial()).unwrap();
        let back = step(&s.adjoint(), &p, -0.2, &v).unwrap();
        assert!((back - p.initial()).norm() < 1e-15);
    }

    #[test]
    fn missing_flow() {
        let p = Problem::new(Complex64::new(1.0, 0.0))
            .with_flow(A, |_: Complex64, _: &mut Complex64| {});
        assert!(step(&schemes::strang(), &p, 0.1, p.initial()).is_err());
        assert!(!p.covers(Alphabet::AB));
    }

    #[test]
    fn commuting_flows_give_zero_estimate() {
        let p = scalar(-0.3, 0.7);
        let pair = SchemePair::milne(schemes::lie_trotter(), schemes::lie_trotter().swap_roles().unwrap()).unwrap();
        let ps = pair_step(&pair, &p, 0.1, p.initial()).unwrap();
        assert!(ps.estimate < 1e-16);
    }

    #[test]
    fn exact_flows_are_flagged_round_off() {
        let p = scalar(-0.3, 0.7);
        let t = convergence_table(Method::Scheme(&schemes::strang()), &p, 0.1, 4, Mode::Local, 0.0).unwrap();
        assert!(t.rows.iter().all(|r| r.flag == Some(RowFlag::RoundOff) && r.order.is_none()), "{t:?}");
        let text = t.render();
        assert!(text.contains("round-off"));
    }

    #[test]
    fn blow_up_stops_the_table() {
        let p = scalar(50.0, 0.0);
        let t = convergence_table(Method::Scheme(&schemes::strang()), &p, 20.0, 4, Mode::Global, 40.0).unwrap();
        assert_eq!(t.rows.len(), 1);
        assert_eq!(t.rows[0].flag, Some(RowFlag::NonFinite));
    }
}
