//! File formats: scheme and pair JSON, the plain-text system format, and
//! JSON reports.
//!
//! Floating-point numbers are written with 17 significant digits so that
//! every double survives a round trip.

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize, Serializer};
use serde_json::value::RawValue;
use splitting_core::conditions::{
    CompositionShape, Equation, Origin, PolySystem, SchemeShape, SymmetricVariant, Symmetry,
};
use splitting_core::freealg::{CoefPoly, Var};
use splitting_core::lyndon::{letter_char, letter_from_char, Alphabet, Word};
use splitting_core::schemes::{Controller, PairKind, SchemePair, SplittingScheme, Stage, Tag};

use crate::error::{Error, Result};
use crate::integrate::ConvergenceTable;
use crate::solve::{Census, FieldKind, MinimizeCensus, Solution, SolveConfig};

/// A double written with 17 significant digits; `null` when not finite.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Num(pub f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        let raw = RawValue::from_string(format!("{:.16e}", self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

#[derive(Serialize, Deserialize)]
struct ComplexOut {
    re: f64,
    im: f64,
}

#[derive(Serialize)]
struct ComplexNum {
    re: Num,
    im: Num,
}

fn cnum(z: Complex64) -> ComplexNum {
    ComplexNum {
        re: Num(z.re),
        im: Num(z.im),
    }
}

#[derive(Serialize)]
struct StageOut {
    op: String,
    re: Num,
    im: Num,
}

#[derive(Serialize)]
struct SchemeOut {
    name: String,
    alphabet: u8,
    stages: Vec<StageOut>,
    order: usize,
    tags: Vec<&'static str>,
    lem: Option<Num>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct StageIn {
    op: String,
    re: f64,
    #[serde(default)]
    im: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct SchemeIn {
    name: String,
    alphabet: u8,
    stages: Vec<StageIn>,
    order: usize,
    #[serde(default)]
    tags: Vec<String>,
    #[serde(default)]
    lem: Option<f64>,
}

fn scheme_out(s: &SplittingScheme) -> SchemeOut {
    SchemeOut {
        name: s.name().to_string(),
        alphabet: s.alphabet().size(),
        stages: s
            .stages()
            .iter()
            .map(|st| StageOut {
                op: letter_char(st.op).to_string(),
                re: Num(st.coef.re),
                im: Num(st.coef.im),
            })
            .collect(),
        order: s.order(),
        tags: s.tags().iter().map(|t| t.as_str()).collect(),
        lem: s.lem().map(Num),
    }
}

fn scheme_in(raw: SchemeIn) -> Result<SplittingScheme> {
    let alphabet = Alphabet::new(raw.alphabet)?;
    let mut stages = Vec::with_capacity(raw.stages.len());
    for st in raw.stages {
        let mut chars = st.op.chars();
        let op = match (chars.next().and_then(letter_from_char), chars.next()) {
            (Some(op), None) => op,
            _ => return Err(Error::config(format!("unknown operator {:?}", st.op))),
        };
        stages.push(Stage::new(op, Complex64::new(st.re, st.im)));
    }
    let mut s = SplittingScheme::declared(raw.name, alphabet, stages, raw.order)?;
    for t in raw.tags {
        let tag = Tag::parse(&t).ok_or_else(|| Error::config(format!("unknown tag {t:?}")))?;
        match tag {
            Tag::Composition => s = s.with_tag(tag),
            _ if !s.has_tag(tag) => {
                return Err(Error::Verification(format!("scheme is not {}", tag.as_str())))
            }
            _ => {}
        }
    }
    Ok(s.with_lem(raw.lem))
}

pub fn scheme_to_json(s: &SplittingScheme) -> Result<String> {
    to_json(&scheme_out(s))
}

pub fn scheme_from_json(text: &str) -> Result<SplittingScheme> {
    scheme_in(serde_json::from_str(text)?)
}

#[derive(Serialize)]
struct PairOut {
    kind: &'static str,
    worker: SchemeOut,
    controller: Option<SchemeOut>,
    gamma: Option<ComplexNum>,
    shared_prefix: Option<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PairIn {
    kind: String,
    worker: SchemeIn,
    #[serde(default)]
    controller: Option<SchemeIn>,
    #[serde(default)]
    gamma: Option<ComplexOut>,
    #[serde(default)]
    shared_prefix: Option<usize>,
}

pub fn pair_to_json(p: &SchemePair) -> Result<String> {
    to_json(&PairOut {
        kind: p.kind().as_str(),
        worker: scheme_out(p.worker()),
        controller: p.partner().map(scheme_out),
        gamma: p.gamma().map(cnum),
        shared_prefix: p.shared_prefix(),
    })
}

/// Reads a pair and re-checks its defining property.
pub fn pair_from_json(text: &str) -> Result<SchemePair> {
    let raw: PairIn = serde_json::from_str(text)?;
    let kind = PairKind::parse(&raw.kind).ok_or_else(|| Error::config(format!("unknown pair kind {:?}", raw.kind)))?;
    let worker = scheme_in(raw.worker)?;
    let partner = raw.controller.map(scheme_in).transpose()?;
    let need = |p: Option<SplittingScheme>| p.ok_or_else(|| Error::config("pair needs a controller scheme"));
    Ok(match kind {
        PairKind::Embedded => {
            let prefix = raw
                .shared_prefix
                .ok_or_else(|| Error::config("embedded pair needs shared_prefix"))?;
            SchemePair::embedded(worker, need(partner)?, prefix)?
        }
        PairKind::Milne => match raw.gamma {
            Some(g) => SchemePair::milne_with_gamma(worker, need(partner)?, Complex64::new(g.re, g.im))?,
            None => SchemePair::milne(worker, need(partner)?)?,
        },
        PairKind::Adjoint => {
            if partner.is_some() {
                return Err(Error::config("adjoint pairs have no stored controller"));
            }
            SchemePair::adjoint(worker)?
        }
    })
}

/// Reads either a scheme or a pair file.
pub enum SchemeFile {
    Scheme(SplittingScheme),
    Pair(SchemePair),
}

pub fn read_scheme_file(text: &str) -> Result<SchemeFile> {
    let v: serde_json::Value = serde_json::from_str(text)?;
    if v.get("kind").is_some() {
        Ok(SchemeFile::Pair(pair_from_json(text)?))
    } else {
        Ok(SchemeFile::Scheme(scheme_from_json(text)?))
    }
}

fn symmetry_name(s: Symmetry) -> &'static str {
    match s {
        Symmetry::None => "none",
        Symmetry::Symmetric(SymmetricVariant::FirstAZero) => "symmetric-first-a-zero",
        Symmetry::Symmetric(SymmetricVariant::LastBZero) => "symmetric",
        Symmetry::Palindromic => "palindromic",
    }
}

fn parse_symmetry(s: &str) -> Option<Symmetry> {
    Some(match s {
        "none" => Symmetry::None,
        "symmetric" => Symmetry::Symmetric(SymmetricVariant::LastBZero),
        "symmetric-first-a-zero" => Symmetry::Symmetric(SymmetricVariant::FirstAZero),
        "palindromic" => Symmetry::Palindromic,
        _ => return None,
    })
}

/// Text form of a system:
///
/// ```text
/// order 2
/// stages 2
/// alphabet 2
/// symmetry none
/// fixed a2 1.0000000000000000e0 0.0000000000000000e0
/// eq A : a1 + a2 - 1
/// ```
///
/// Composition systems replace the shape lines by `composition M TARGET`.
/// Lines starting with `#` are comments.
pub fn system_to_text(sys: &PolySystem) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "order {}", sys.order);
    match &sys.origin {
        Origin::Splitting(shape) => {
            let _ = writeln!(out, "stages {}", shape.stages());
            let _ = writeln!(out, "alphabet {}", shape.alphabet().size());
            let _ = writeln!(out, "symmetry {}", symmetry_name(shape.symmetry()));
            for (v, x) in shape.fixed() {
                let _ = writeln!(out, "fixed {v} {:.16e} {:.16e}", x.re, x.im);
            }
        }
        Origin::Composition(c) => {
            let _ = writeln!(out, "composition {} {}", c.stages(), c.target_order());
        }
    }
    for m in &sys.merged {
        match &m.kept {
            Some(k) => {
                let _ = writeln!(out, "# {} repeats {k}", m.dropped);
            }
            None => {
                let _ = writeln!(out, "# {} vanishes", m.dropped);
            }
        }
    }
    for e in &sys.equations {
        let _ = writeln!(out, "eq {} : {}", e.word, e.poly);
    }
    out
}

pub fn system_from_text(text: &str) -> Result<PolySystem> {
    let mut order = None;
    let mut stages = None;
    let mut alphabet = None;
    let mut symmetry = Symmetry::None;
    let mut fixed: Vec<(Var, Complex64)> = Vec::new();
    let mut composition = None;
    let mut equations = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |what: &str| Error::config(format!("line {}: {what}", n + 1));
        let (key, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        let int = |s: &str| s.parse::<usize>().map_err(|_| bad("expected an integer"));
        let float = |s: &str| s.parse::<f64>().map_err(|_| bad("expected a number"));
        match key {
            "order" => order = Some(int(rest)?),
            "stages" => stages = Some(int(rest)?),
            "alphabet" => alphabet = Some(Alphabet::new(int(rest)? as u8)?),
            "symmetry" => symmetry = parse_symmetry(rest).ok_or_else(|| bad("unknown symmetry"))?,
            "fixed" => {
                let parts: Vec<&str> = rest.split_whitespace().collect();
                let (name, re, im) = match parts.as_slice() {
                    [v, re] => (*v, float(re)?, 0.0),
                    [v, re, im] => (*v, float(re)?, float(im)?),
                    _ => return Err(bad("expected `fixed VAR RE [IM]`")),
                };
                fixed.push((Var::parse(name)?, Complex64::new(re, im)));
            }
            "composition" => {
                let parts: Vec<&str> = rest.split_whitespace().collect();
                let [m, t] = parts.as_slice() else {
                    return Err(bad("expected `composition M TARGET`"));
                };
                composition = Some(CompositionShape::new(int(m)?, int(t)?)?);
            }
            "eq" => {
                let (w, p) = rest.split_once(':').ok_or_else(|| bad("expected `eq WORD : POLY`"))?;
                equations.push(Equation {
                    word: Word::parse(w.trim())?,
                    poly: CoefPoly::parse(p.trim())?,
                });
            }
            _ => return Err(bad(&format!("unknown key {key:?}"))),
        }
    }
    let order = order.ok_or_else(|| Error::config("missing `order` line"))?;
    let origin = match composition {
        Some(c) => {
            if stages.is_some() || alphabet.is_some() || !fixed.is_empty() {
                return Err(Error::config("composition systems have no shape lines"));
            }
            Origin::Composition(c)
        }
        None => {
            let stages = stages.ok_or_else(|| Error::config("missing `stages` line"))?;
            let alphabet = alphabet.ok_or_else(|| Error::config("missing `alphabet` line"))?;
            let mut shape = SchemeShape::new(stages, alphabet, symmetry)?;
            for (v, x) in fixed {
                shape = shape.with_fixed(v, x)?;
            }
            Origin::Splitting(shape)
        }
    };
    let sys = PolySystem {
        order,
        origin,
        equations,
        merged: Vec::new(),
    };
    let known = sys.unknowns();
    let fixed: Vec<Var> = sys.fixed().iter().map(|&(v, _)| v).collect();
    for e in &sys.equations {
        if let Some(v) = e.poly.variables().into_iter().find(|v| !known.contains(v) && !fixed.contains(v)) {
            return Err(Error::config(format!("equation {} uses {v}, which is not an unknown", e.word)));
        }
    }
    Ok(sys)
}

#[derive(Serialize)]
struct ConfigOut {
    field: &'static str,
    restarts: usize,
    sample_box: Num,
    seed: u64,
    tol_residual: Num,
    max_newton_iters: usize,
    dedup_distance: Num,
}

fn config_out(cfg: &SolveConfig) -> ConfigOut {
    ConfigOut {
        field: cfg.field.as_str(),
        restarts: cfg.restarts,
        sample_box: Num(cfg.sample_box),
        seed: cfg.seed,
        tol_residual: Num(cfg.tol_residual),
        max_newton_iters: cfg.max_newton_iters,
        dedup_distance: Num(cfg.dedup_distance),
    }
}

#[derive(Serialize)]
struct CoefOut {
    var: String,
    re: Num,
    im: Num,
}

#[derive(Serialize)]
struct SolutionOut {
    coefficients: Vec<CoefOut>,
    residual: Num,
    lem: Option<Num>,
    positive: bool,
    conjugate_pair: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    stationarity: Option<Num>,
}

fn solution_out(s: &Solution) -> SolutionOut {
    SolutionOut {
        coefficients: s
            .coefficients
            .iter()
            .map(|(v, z)| CoefOut {
                var: v.to_string(),
                re: Num(z.re),
                im: Num(z.im),
            })
            .collect(),
        residual: Num(s.residual),
        lem: s.lem.map(Num),
        positive: s.positive,
        conjugate_pair: s.conjugate_pair,
        stationarity: s.stationarity.map(Num),
    }
}

#[derive(Serialize)]
struct CensusOut {
    restarts: usize,
    converged: usize,
    singular: usize,
    diverged: usize,
    stalled: usize,
    max_iterations: usize,
    rejected: usize,
    duplicates: usize,
    distinct: usize,
}

#[derive(Serialize)]
struct SystemSummary {
    order: usize,
    equations: usize,
    unknowns: Vec<String>,
}

fn summary(sys: &PolySystem) -> SystemSummary {
    SystemSummary {
        order: sys.order,
        equations: sys.len(),
        unknowns: sys.unknowns().iter().map(Var::to_string).collect(),
    }
}

/// Root-finding report: configuration, census and solutions.
pub fn solve_report_json(sys: &PolySystem, cfg: &SolveConfig, census: &Census, sols: &[Solution]) -> Result<String> {
    #[derive(Serialize)]
    struct Out {
        method: &'static str,
        system: SystemSummary,
        config: ConfigOut,
        census: CensusOut,
        solutions: Vec<SolutionOut>,
    }
    to_json(&Out {
        method: "newton",
        system: summary(sys),
        config: config_out(cfg),
        census: CensusOut {
            restarts: census.restarts,
            converged: census.converged,
            singular: census.singular,
            diverged: census.diverged,
            stalled: census.stalled,
            max_iterations: census.max_iterations,
            rejected: census.rejected,
            duplicates: census.duplicates,
            distinct: census.distinct,
        },
        solutions: sols.iter().map(solution_out).collect(),
    })
}

/// Minimization report; the first candidate is the best one found.
pub fn minimize_report_json(
    sys: &PolySystem,
    cfg: &SolveConfig,
    census: &MinimizeCensus,
    sols: &[Solution],
) -> Result<String> {
    #[derive(Serialize)]
    struct CensusM {
        restarts: usize,
        feasible: usize,
        infeasible: usize,
        fallback: usize,
        duplicates: usize,
        distinct: usize,
    }
    #[derive(Serialize)]
    struct Out {
        method: &'static str,
        system: SystemSummary,
        config: ConfigOut,
        census: CensusM,
        solutions: Vec<SolutionOut>,
    }
    to_json(&Out {
        method: "minimize-lem",
        system: summary(sys),
        config: config_out(cfg),
        census: CensusM {
            restarts: census.restarts,
            feasible: census.feasible,
            infeasible: census.infeasible,
            fallback: census.fallback,
            duplicates: census.duplicates,
            distinct: census.distinct,
        },
        solutions: sols.iter().map(solution_out).collect(),
    })
}

pub fn table_json(tables: &[ConvergenceTable]) -> Result<String> {
    #[derive(Serialize)]
    struct RowOut {
        h: Num,
        err: Num,
        order: Option<Num>,
        flag: Option<crate::integrate::RowFlag>,
    }
    #[derive(Serialize)]
    struct TableOut {
        method: String,
        mode: &'static str,
        t_end: Num,
        rows: Vec<RowOut>,
    }
    let out: Vec<TableOut> = tables
        .iter()
        .map(|t| TableOut {
            method: t.method.clone(),
            mode: t.mode.as_str(),
            t_end: Num(t.t_end),
            rows: t
                .rows
                .iter()
                .map(|r| RowOut {
                    h: Num(r.h),
                    err: Num(r.err),
                    order: r.order.map(Num),
                    flag: r.flag,
                })
                .collect(),
        })
        .collect();
    to_json(&out)
}

pub fn field_from_str(s: &str) -> Option<FieldKind> {
    match s {
        "real" => Some(FieldKind::Real),
        "complex" => Some(FieldKind::Complex),
        _ => None,
    }
}

/// Describes a pair's second scheme for text output.
pub fn controller_label(p: &SchemePair) -> String {
    match p.controller() {
        Controller::Embedded { controller, shared_prefix } => {
            format!("controller {} (order {}), {shared_prefix} shared coefficients", controller.name(), controller.order())
        }
        Controller::Milne { partner, gamma } => format!("partner {} with gamma {gamma}", partner.name()),
        Controller::Adjoint => format!("adjoint {}", p.worker().adjoint().name()),
    }
}
