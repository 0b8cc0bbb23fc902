//! Splitting schemes as lists of single-operator stages, and pairs of
//! schemes used for local error estimation.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use crate::conditions::{self, StageCoefficients};
use crate::error::{Error, Result};
use crate::lyndon::{letter_char, Alphabet, Letter, A, B};

/// Tolerance of structural comparisons and consistency checks.
pub const STRUCTURE_TOLERANCE: f64 = 1e-12;
/// Stages below this magnitude are dropped by [`SplittingScheme::normalized`].
pub const ZERO_STAGE: f64 = 1e-15;
/// Highest order probed when a constructor detects the order.
pub const MAX_DETECTED_ORDER_AB: usize = 8;
pub const MAX_DETECTED_ORDER_ABC: usize = 6;

/// One exponential `exp(c h L)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Stage {
    pub op: Letter,
    pub coef: Complex64,
}

impl Stage {
    pub fn new(op: Letter, coef: Complex64) -> Self {
        Stage { op, coef }
    }

    pub fn real(op: Letter, coef: f64) -> Self {
        Stage::new(op, Complex64::new(coef, 0.0))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tag {
    Symmetric,
    Palindromic,
    Complex,
    Composition,
}

impl Tag {
    pub const ALL: [Tag; 4] = [Tag::Symmetric, Tag::Palindromic, Tag::Complex, Tag::Composition];

    pub fn as_str(self) -> &'static str {
        match self {
            Tag::Symmetric => "symmetric",
            Tag::Palindromic => "palindromic",
            Tag::Complex => "complex",
            Tag::Composition => "composition",
        }
    }

    pub fn parse(s: &str) -> Option<Tag> {
        Tag::ALL.into_iter().find(|t| t.as_str() == s)
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A multiplicative splitting scheme.
///
/// Stages are stored in the order they are applied: the first stage acts
/// first on the state. The template `(a_j, b_j)` of the order-condition code
/// corresponds to the stage list `A a_1, B b_1, A a_2, B b_2, ...`.
#[derive(Clone, Debug, PartialEq)]
pub struct SplittingScheme {
    name: String,
    alphabet: Alphabet,
    stages: Vec<Stage>,
    order: usize,
    tags: BTreeSet<Tag>,
    lem: Option<f64>,
}

impl SplittingScheme {
    /// Builds a scheme from a stage list, checks consistency and detects
    /// structural tags and the order.
    pub fn new(name: impl Into<String>, alphabet: Alphabet, stages: Vec<Stage>) -> Result<Self> {
        let mut s = Self::declared(name, alphabet, stages, 1)?;
        s.order = s.detect_order()?;
        Ok(s)
    }

    /// Like [`SplittingScheme::new`] but trusts the given order.
    pub fn declared(
        name: impl Into<String>,
        alphabet: Alphabet,
        stages: Vec<Stage>,
        order: usize,
    ) -> Result<Self> {
        if stages.is_empty() {
            return Err(Error::arg("a scheme needs at least one stage"));
        }
        if let Some(st) = stages.iter().find(|st| !alphabet.contains(st.op)) {
            return Err(Error::arg(alloc::format!(
                "operator {} outside a {}-letter alphabet",
                letter_char(st.op),
                alphabet.size()
            )));
        }
        if stages.iter().any(|st| !st.coef.re.is_finite() || !st.coef.im.is_finite()) {
            return Err(Error::arg("non-finite coefficient"));
        }
        if order == 0 {
            return Err(Error::arg("order must be positive"));
        }
        let mut s = SplittingScheme {
            name: name.into(),
            alphabet,
            stages,
            order,
            tags: BTreeSet::new(),
            lem: None,
        };
        for letter in alphabet.letters() {
            let sum: Complex64 = s
                .stages
                .iter()
                .filter(|st| st.op == letter)
                .map(|st| st.coef)
                .sum();
            let r = (sum - 1.0).norm();
            if r > STRUCTURE_TOLERANCE {
                return Err(Error::Precondition {
                    what: alloc::format!(
                        "coefficients of {} sum to {sum} instead of 1",
                        letter_char(letter)
                    ),
                    residual: r,
                });
            }
        }
        s.tags = s.structural_tags();
        Ok(s)
    }

    /// Interleaved stages `A a_1, B b_1, A a_2, ...`, zeros retained.
    pub fn from_ab(name: impl Into<String>, a: &[Complex64], b: &[Complex64]) -> Result<Self> {
        let coeffs = StageCoefficients::from_ab(a, b)?;
        Self::new(name, Alphabet::AB, template_stages(&coeffs))
    }

    pub fn from_abc(
        name: impl Into<String>,
        a: &[Complex64],
        b: &[Complex64],
        c: &[Complex64],
    ) -> Result<Self> {
        let coeffs = StageCoefficients::from_abc(a, b, c)?;
        Self::new(name, Alphabet::ABC, template_stages(&coeffs))
    }

    pub fn from_template(name: impl Into<String>, coeffs: &StageCoefficients) -> Result<Self> {
        Self::new(name, coeffs.alphabet, template_stages(coeffs))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn stages(&self) -> &[Stage] {
        &self.stages
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn with_order(mut self, order: usize) -> Self {
        self.order = order.max(1);
        self
    }

    pub fn tags(&self) -> &BTreeSet<Tag> {
        &self.tags
    }

    pub fn has_tag(&self, t: Tag) -> bool {
        self.tags.contains(&t)
    }

    pub fn with_tag(mut self, t: Tag) -> Self {
        self.tags.insert(t);
        self
    }

    pub fn lem(&self) -> Option<f64> {
        self.lem
    }

    pub fn with_lem(mut self, lem: Option<f64>) -> Self {
        self.lem = lem;
        self
    }

    /// Computes the local error measure at the declared order and stores it.
    pub fn with_computed_lem(mut self) -> Result<Self> {
        self.lem = Some(conditions::lem(&self.to_template(), self.order)?);
        Ok(self)
    }

    /// Stages whose coefficient is (numerically) zero; they cost no flow
    /// evaluation.
    pub fn zero_stages(&self) -> usize {
        self.stages.iter().filter(|s| s.coef.norm() < ZERO_STAGE).count()
    }

    /// Number of template stages `(a_j, b_j[, c_j])` after normalization.
    pub fn stage_count(&self) -> usize {
        self.to_template().stages()
    }

    /// Number of flow evaluations of the normalized stage list.
    pub fn evaluations(&self) -> usize {
        self.normalized().len()
    }

    pub fn is_complex(&self) -> bool {
        self.stages.iter().any(|s| s.coef.im != 0.0)
    }

    /// Drops stages below [`ZERO_STAGE`] and merges neighbours with the same
    /// operator.
    pub fn normalized(&self) -> Vec<Stage> {
        normalize(&self.stages)
    }

    /// `S*(h) = S(−h)^{-1}`: the stage list read backwards.
    pub fn adjoint(&self) -> SplittingScheme {
        let mut s = self.clone();
        s.stages.reverse();
        s.name = alloc::format!("{}*", self.name);
        s.lem = None;
        s.tags = s.structural_tags();
        s
    }

    /// Exchanges the roles of `A` and `B`.
    pub fn swap_roles(&self) -> Result<SplittingScheme> {
        if self.alphabet != Alphabet::AB {
            return Err(Error::Unsupported(
                "role swap is defined for two operators".into(),
            ));
        }
        let mut s = self.clone();
        for st in &mut s.stages {
            st.op = if st.op == A { B } else { A };
        }
        s.name = alloc::format!("{}~", self.name);
        s.lem = None;
        s.tags = s.structural_tags();
        Ok(s)
    }

    pub fn same_stages(&self, other: &SplittingScheme) -> bool {
        same_stage_lists(&self.normalized(), &other.normalized())
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.normalized();
        let mut r = n.clone();
        r.reverse();
        same_stage_lists(&n, &r)
    }

    pub fn is_palindromic(&self) -> bool {
        if self.alphabet != Alphabet::AB {
            return false;
        }
        let n = self.normalized();
        let swapped: Vec<Stage> = n
            .iter()
            .map(|s| Stage::new(if s.op == A { B } else { A }, s.coef))
            .collect();
        let mut reversed = n;
        reversed.reverse();
        same_stage_lists(&swapped, &reversed)
    }

    fn structural_tags(&self) -> BTreeSet<Tag> {
        let mut t: BTreeSet<Tag> = self
            .tags
            .iter()
            .copied()
            .filter(|t| *t == Tag::Composition)
            .collect();
        if self.is_symmetric() {
            t.insert(Tag::Symmetric);
        }
        if self.is_palindromic() {
            t.insert(Tag::Palindromic);
        }
        if self.is_complex() {
            t.insert(Tag::Complex);
        }
        t
    }

    /// Greedy grouping of the normalized stages into `A? B? [C?]` template
    /// stages.
    pub fn to_template(&self) -> StageCoefficients {
        let n = self.normalized();
        let k = self.alphabet.size() as usize;
        let mut coeffs: Vec<Vec<Complex64>> = alloc::vec![Vec::new(); k];
        let mut i = 0;
        while i < n.len() {
            let mut stage = alloc::vec![Complex64::new(0.0, 0.0); k];
            for letter in self.alphabet.letters() {
                if i < n.len() && n[i].op == letter {
                    stage[letter as usize] = n[i].coef;
                    i += 1;
                }
            }
            for (l, c) in stage.into_iter().enumerate() {
                coeffs[l].push(c);
            }
        }
        if coeffs[0].is_empty() {
            for c in &mut coeffs {
                c.push(Complex64::new(0.0, 0.0));
            }
        }
        StageCoefficients {
            alphabet: self.alphabet,
            coeffs,
        }
    }

    /// Largest order-condition residual up to order `p`.
    pub fn order_residual(&self, p: usize) -> Result<f64> {
        conditions::order_residual(&self.to_template(), p)
    }

    fn detect_order(&self) -> Result<usize> {
        let cap = if self.alphabet == Alphabet::AB {
            MAX_DETECTED_ORDER_AB
        } else {
            MAX_DETECTED_ORDER_ABC
        };
        let template = self.to_template();
        let mut order = 1;
        for q in 2..=cap {
            let worst = conditions::word_residuals(&template, q)?
                .iter()
                .map(|(_, r)| r.norm())
                .fold(0.0, f64::max);
            if worst > conditions::ORDER_TOLERANCE {
                break;
            }
            order = q;
        }
        Ok(order)
    }

    /// `S(ω_m h) ∘ ... ∘ S(ω_1 h)`, with neighbouring stages of the same
    /// operator merged.
    pub fn compose(&self, weights: &[Complex64]) -> Result<SplittingScheme> {
        if weights.is_empty() {
            return Err(Error::arg("at least one weight is required"));
        }
        let sum: Complex64 = weights.iter().sum();
        let r = (sum - 1.0).norm();
        if r > STRUCTURE_TOLERANCE {
            return Err(Error::Precondition {
                what: alloc::format!("composition weights sum to {sum}"),
                residual: r,
            });
        }
        let base = self.normalized();
        let mut stages = Vec::with_capacity(base.len() * weights.len());
        for &w in weights {
            stages.extend(base.iter().map(|s| Stage::new(s.op, s.coef * w)));
        }
        let stages = merge_neighbours(stages);
        let mut out = SplittingScheme::new(
            alloc::format!("{}^{}", self.name, weights.len()),
            self.alphabet,
            stages,
        )?;
        if weights.len() > 1 {
            out.tags.insert(Tag::Composition);
        }
        Ok(out)
    }

    /// Leading error coefficients at the declared order.
    pub fn lambda(&self) -> Result<Vec<Complex64>> {
        conditions::lambda_vector(&self.to_template(), self.order)
    }
}

/// Interleaved stage list `A a_1, B b_1[, C c_1], A a_2, ...` of a template.
pub fn template_stages(c: &StageCoefficients) -> Vec<Stage> {
    let mut out = Vec::with_capacity(c.stages() * c.alphabet.size() as usize);
    for j in 0..c.stages() {
        for letter in c.alphabet.letters() {
            out.push(Stage::new(letter, c.coeffs[letter as usize][j]));
        }
    }
    out
}

fn merge_neighbours(stages: Vec<Stage>) -> Vec<Stage> {
    let mut out: Vec<Stage> = Vec::with_capacity(stages.len());
    for s in stages {
        match out.last_mut() {
            Some(last) if last.op == s.op => last.coef += s.coef,
            _ => out.push(s),
        }
    }
    out
}

fn normalize(stages: &[Stage]) -> Vec<Stage> {
    let mut cur: Vec<Stage> = stages.to_vec();
    loop {
        let before = cur.len();
        cur.retain(|s| s.coef.norm() >= ZERO_STAGE);
        cur = merge_neighbours(cur);
        if cur.len() == before {
            return cur;
        }
    }
}

fn same_stage_lists(x: &[Stage], y: &[Stage]) -> bool {
    x.len() == y.len()
        && x
            .iter()
            .zip(y)
            .all(|(s, t)| s.op == t.op && (s.coef - t.coef).norm() <= STRUCTURE_TOLERANCE)
}

/// Relative tolerance of the proportionality test in [`milne_gamma`].
pub const MILNE_TOLERANCE: f64 = 1e-8;

/// The factor `γ` with `λ(s2) = γ λ(s1)` at order `p + 1`, if the leading
/// errors are proportional and `γ ≠ 1`.
pub fn milne_gamma(
    s1: &SplittingScheme,
    s2: &SplittingScheme,
    p: usize,
) -> Result<Option<Complex64>> {
    let l1 = conditions::lambda_vector(&s1.to_template(), p)?;
    let l2 = conditions::lambda_vector(&s2.to_template(), p)?;
    if l1.len() != l2.len() {
        return Err(Error::AlphabetMismatch {
            left: s1.alphabet.size(),
            right: s2.alphabet.size(),
        });
    }
    let Some(pivot) = (0..l1.len()).max_by(|&i, &j| l1[i].norm().total_cmp(&l1[j].norm())) else {
        return Ok(None);
    };
    if l1[pivot].norm() == 0.0 {
        return Ok(None);
    }
    let gamma = l2[pivot] / l1[pivot];
    let scale = libm::sqrt(l2.iter().map(Complex64::norm_sqr).sum::<f64>());
    let defect = libm::sqrt(
        l1.iter()
            .zip(&l2)
            .map(|(x, y)| (y - gamma * x).norm_sqr())
            .sum::<f64>(),
    );
    if defect > MILNE_TOLERANCE * scale {
        return Ok(None);
    }
    if (gamma - 1.0).norm() <= MILNE_TOLERANCE {
        return Ok(None);
    }
    Ok(Some(gamma))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PairKind {
    Embedded,
    Milne,
    Adjoint,
}

impl PairKind {
    pub fn as_str(self) -> &'static str {
        match self {
            PairKind::Embedded => "embedded",
            PairKind::Milne => "milne",
            PairKind::Adjoint => "adjoint",
        }
    }

    pub fn parse(s: &str) -> Option<PairKind> {
        [PairKind::Embedded, PairKind::Milne, PairKind::Adjoint]
            .into_iter()
            .find(|k| k.as_str() == s)
    }
}

/// How the error estimate of a pair is derived.
#[derive(Clone, Debug, PartialEq)]
pub enum Controller {
    /// A higher-order scheme agreeing with the worker on its first
    /// `shared_prefix` interleaved coefficients `a_1, b_1, a_2, ...`.
    Embedded {
        controller: SplittingScheme,
        shared_prefix: usize,
    },
    /// A scheme of the same order whose leading error is `γ` times the
    /// worker's.
    Milne {
        partner: SplittingScheme,
        gamma: Complex64,
    },
    /// The adjoint of an odd-order worker; `½(S + S*)` is the controller.
    Adjoint,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SchemePair {
    worker: SplittingScheme,
    controller: Controller,
}

impl SchemePair {
    pub fn embedded(
        worker: SplittingScheme,
        controller: SplittingScheme,
        shared_prefix: usize,
    ) -> Result<Self> {
        if worker.alphabet != controller.alphabet {
            return Err(Error::AlphabetMismatch {
                left: worker.alphabet.size(),
                right: controller.alphabet.size(),
            });
        }
        if controller.order <= worker.order {
            return Err(Error::arg(alloc::format!(
                "controller order {} must exceed worker order {}",
                controller.order,
                worker.order
            )));
        }
        let w = worker.to_template().interleaved();
        let c = controller.to_template().interleaved();
        if shared_prefix > w.len() || shared_prefix > c.len() {
            return Err(Error::arg("shared prefix longer than a scheme"));
        }
        let worst = w[..shared_prefix]
            .iter()
            .zip(&c[..shared_prefix])
            .map(|((_, x), (_, y))| (x - y).norm())
            .fold(0.0, f64::max);
        if worst > STRUCTURE_TOLERANCE {
            return Err(Error::Precondition {
                what: alloc::format!("worker and controller differ within the first {shared_prefix} coefficients"),
                residual: worst,
            });
        }
        Ok(SchemePair {
            worker,
            controller: Controller::Embedded {
                controller,
                shared_prefix,
            },
        })
    }

    /// Determines `γ` from the leading errors.
    pub fn milne(worker: SplittingScheme, partner: SplittingScheme) -> Result<Self> {
        if worker.order != partner.order {
            return Err(Error::arg("Milne partners must have the same order"));
        }
        let gamma = milne_gamma(&worker, &partner, worker.order)?.ok_or_else(|| {
            Error::arg("leading errors are not proportional with a factor other than 1")
        })?;
        Ok(SchemePair {
            worker,
            controller: Controller::Milne { partner, gamma },
        })
    }

    /// Uses a stated `γ` (checked against the leading errors).
    pub fn milne_with_gamma(
        worker: SplittingScheme,
        partner: SplittingScheme,
        gamma: Complex64,
    ) -> Result<Self> {
        let pair = Self::milne(worker, partner)?;
        if let Controller::Milne { gamma: g, .. } = pair.controller {
            let r = (g - gamma).norm();
            if r > MILNE_TOLERANCE * gamma.norm().max(1.0) {
                return Err(Error::Precondition {
                    what: alloc::format!("stated gamma {gamma} differs from {g}"),
                    residual: r,
                });
            }
        }
        Ok(pair)
    }

    pub fn adjoint(worker: SplittingScheme) -> Result<Self> {
        if worker.order.is_multiple_of(2) {
            return Err(Error::arg(alloc::format!(
                "adjoint pairs need an odd-order worker, got order {}",
                worker.order
            )));
        }
        Ok(SchemePair {
            worker,
            controller: Controller::Adjoint,
        })
    }

    pub fn kind(&self) -> PairKind {
        match self.controller {
            Controller::Embedded { .. } => PairKind::Embedded,
            Controller::Milne { .. } => PairKind::Milne,
            Controller::Adjoint => PairKind::Adjoint,
        }
    }

    pub fn worker(&self) -> &SplittingScheme {
        &self.worker
    }

    pub fn controller(&self) -> &Controller {
        &self.controller
    }

    /// `(p, p + 1)`.
    pub fn orders(&self) -> (usize, usize) {
        (self.worker.order, self.worker.order + 1)
    }

    pub fn gamma(&self) -> Option<Complex64> {
        match self.controller {
            Controller::Milne { gamma, .. } => Some(gamma),
            _ => None,
        }
    }

    pub fn shared_prefix(&self) -> Option<usize> {
        match self.controller {
            Controller::Embedded { shared_prefix, .. } => Some(shared_prefix),
            _ => None,
        }
    }

    /// The second scheme of the pair, if it is a stored scheme.
    pub fn partner(&self) -> Option<&SplittingScheme> {
        match &self.controller {
            Controller::Embedded { controller, .. } => Some(controller),
            Controller::Milne { partner, .. } => Some(partner),
            Controller::Adjoint => None,
        }
    }
}

/// Convenience: a real scheme in `(a, b)` form.
pub fn real_ab(name: &str, a: &[f64], b: &[f64]) -> Result<SplittingScheme> {
    let c = |v: &[f64]| v.iter().map(|&x| Complex64::new(x, 0.0)).collect::<Vec<_>>();
    SplittingScheme::from_ab(name, &c(a), &c(b))
}

pub fn lie_trotter() -> SplittingScheme {
    real_ab("Lie-Trotter", &[1.0], &[1.0]).expect("valid scheme")
}

pub fn strang() -> SplittingScheme {
    real_ab("Strang", &[0.5, 0.5], &[1.0, 0.0]).expect("valid scheme")
}

/// Strang splitting for three operators, `A/2 B/2 C B/2 A/2`.
pub fn strang_abc() -> SplittingScheme {
    let r = |x: f64| Complex64::new(x, 0.0);
    SplittingScheme::from_abc(
        "Strang ABC",
        &[r(0.5), r(0.0), r(0.5)],
        &[r(0.5), r(0.5), r(0.0)],
        &[r(1.0), r(0.0), r(0.0)],
    )
    .expect("valid scheme")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ops(s: &[Stage]) -> String {
        s.iter().map(|s| letter_char(s.op)).collect()
    }

    #[test]
    fn basic_schemes() {
        let lt = lie_trotter();
        assert_eq!(lt.order(), 1);
        assert!(lt.is_palindromic());
        let st = strang();
        assert_eq!(st.order(), 2);
        assert!(st.is_symmetric());
        assert!(!st.is_palindromic());
        assert_eq!(st.stages().len(), 4);
        assert_eq!(ops(&st.normalized()), "ABA");
        assert_eq!(strang_abc().order(), 2);
        assert!(strang_abc().is_symmetric());
        assert_eq!(strang_abc().evaluations(), 5);
    }

    #[test]
    fn degenerate_input_is_flagged() {
        let s = real_ab("deg", &[1.0, 0.0], &[0.0, 1.0]).unwrap();
        assert_eq!(s.zero_stages(), 2);
        assert_eq!(ops(&s.normalized()), "AB");
    }

    #[test]
    fn inconsistent_input_is_rejected() {
        assert!(matches!(
            real_ab("bad", &[0.5], &[1.0]),
            Err(Error::Precondition { .. })
        ));
        assert!(real_ab("bad", &[0.5, 0.5], &[1.0]).is_err());
    }

    #[test]
    fn adjoint_and_swap() {
        let lt = lie_trotter();
        let adj = lt.adjoint();
        assert_eq!(ops(adj.stages()), "BA");
        assert!(adj.adjoint().same_stages(&lt));
        assert!(lt.swap_roles().unwrap().same_stages(&adj));
        assert!(strang().adjoint().same_stages(&strang()));
        let p = real_ab("p", &[0.25, 0.75], &[0.75, 0.25]).unwrap();
        assert!(p.is_palindromic());
        assert!(p.swap_roles().unwrap().same_stages(&p.adjoint()));
        assert!(strang_abc().swap_roles().is_err());
    }

    #[test]
    fn template_of_leading_b() {
        let t = lie_trotter().adjoint().to_template();
        assert_eq!(t.coeffs[0], [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]);
        assert_eq!(t.coeffs[1], [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]);
    }

    #[test]
    fn triple_jump() {
        let w1 = 1.0 / (2.0 - libm::cbrt(2.0));
        let w = [w1, 1.0 - 2.0 * w1, w1].map(|x| Complex64::new(x, 0.0));
        let s = strang().compose(&w).unwrap();
        assert_eq!(s.stage_count(), 4);
        assert_eq!(s.order(), 4);
        assert!(s.has_tag(Tag::Composition));
        assert!(s.is_symmetric());
        let same = strang().compose(&[Complex64::new(1.0, 0.0)]).unwrap();
        assert!(same.same_stages(&strang()));
        assert!(strang().compose(&[Complex64::new(0.5, 0.0)]).is_err());
    }

    #[test]
    fn milne_lie_trotter() {
        let g = milne_gamma(&lie_trotter(), &lie_trotter().adjoint(), 1).unwrap();
        assert!((g.unwrap() + 1.0).norm() < 1e-14);
        assert_eq!(milne_gamma(&lie_trotter(), &lie_trotter(), 1).unwrap(), None);
        let pair = SchemePair::milne(lie_trotter(), lie_trotter().adjoint()).unwrap();
        assert_eq!(pair.kind(), PairKind::Milne);
        assert!(SchemePair::milne(lie_trotter(), lie_trotter()).is_err());
    }

    #[test]
    fn pair_invariants() {
        assert!(SchemePair::adjoint(strang()).is_err());
        assert!(SchemePair::adjoint(lie_trotter()).is_ok());
        let lt = lie_trotter();
        let st = strang();
        assert!(SchemePair::embedded(lt.clone(), st.clone(), 0).is_ok());
        assert!(SchemePair::embedded(lt, st, 1).is_err());
    }
}
