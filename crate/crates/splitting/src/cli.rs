//! Command-line front end.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use splitting_core::conditions::{
    self, composition_system, CompositionShape, Limits, PolySystem, SchemeShape, SymmetricVariant,
    Symmetry, ORDER_TOLERANCE,
};
use splitting_core::freealg::Var;
use splitting_core::lyndon::{lyndon_words, Alphabet};
use splitting_core::schemes::{self, SchemePair, SplittingScheme};

use crate::error::{Error, Result};
use crate::generate::{default_workers, order_conditions};
use crate::integrate::{convergence_table, nls_problem, ConvergenceTable, Method, Mode, NlsParams};
use crate::io::{self, Num, SchemeFile};
use crate::solve::{embedded_search, minimize_lem, solve_square, FieldKind, SolveConfig};

#[derive(Parser, Debug)]
#[command(name = "splitting", version, about = "Order conditions, coefficient search and benchmarks for operator splitting schemes")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Worker threads (default: all available cores). Results do not
    /// depend on this.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Write the main output to this file instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the Lyndon words of one length.
    Lyndon {
        /// Number of operators (2 or 3).
        #[arg(long)]
        alphabet: u8,
        /// Word length.
        #[arg(long)]
        length: usize,
    },
    /// Generate the order conditions of a scheme shape.
    Conditions(ShapeArgs),
    /// Search coefficients solving a system.
    Solve(SolveArgs),
    /// Local error measure of a scheme.
    Lem {
        /// Scheme JSON file, or builtin:strang, builtin:lie-trotter, builtin:strang-abc.
        #[arg(long)]
        scheme: String,
        /// Order the scheme is assumed to have (default: its declared order).
        #[arg(long)]
        order: Option<usize>,
    },
    /// Check the order conditions of a scheme.
    Verify {
        /// Scheme JSON file, or builtin:NAME.
        #[arg(long)]
        scheme: String,
        /// Order to check (default: the declared order).
        #[arg(long)]
        order: Option<usize>,
    },
    /// Build and check a pair of schemes for error estimation.
    Pair(PairArgs),
    /// Convergence table on the coupled NLS soliton benchmark.
    BenchNls(BenchArgs),
}

#[derive(Args, Debug, Clone)]
struct ShapeArgs {
    /// Target order p.
    #[arg(long)]
    order: Option<usize>,
    /// Number of stages s.
    #[arg(long)]
    stages: Option<usize>,
    /// Number of operators (2 or 3).
    #[arg(long, default_value_t = 2)]
    alphabet: u8,
    /// Symmetric scheme (b_s = 0, a_j = a_{s+1-j}, b_j = b_{s-j}; three operators: the A B C B A pattern).
    #[arg(long, conflicts_with = "palindromic")]
    symmetric: bool,
    /// Palindromic scheme (b_j = a_{s+1-j}).
    #[arg(long)]
    palindromic: bool,
    /// Fix a coefficient: NAME=RE or NAME=RE,IM (repeatable), e.g. b3=0.
    #[arg(long = "fix", value_name = "NAME=VALUE")]
    fix: Vec<String>,
    /// Longest three-operator word to generate; guards memory.
    #[arg(long, default_value_t = 7)]
    max_abc_length: usize,
}

#[derive(Args, Debug)]
struct SolveArgs {
    /// System file in the text format written by `conditions`. Without
    /// it the system is generated from the shape flags.
    #[arg(long, conflicts_with_all = ["composition"])]
    system: Option<PathBuf>,
    #[command(flatten)]
    shape: ShapeArgs,
    /// Solve for palindromic Strang-composition weights with this many
    /// sub-steps (odd); the target order is --order.
    #[arg(long)]
    composition: Option<usize>,
    /// real or complex coefficients.
    #[arg(long, default_value = "real")]
    field: String,
    /// Random starts.
    #[arg(long, default_value_t = 100)]
    restarts: usize,
    /// Master seed; every restart draws from its own stream.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Start box radius (default 2 for real, 1.5 for complex).
    #[arg(long)]
    sample_box: Option<f64>,
    /// Residual tolerance for accepting a root.
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    /// Newton iterations per start.
    #[arg(long, default_value_t = 100)]
    max_iters: usize,
    /// Minimize the LEM over an underdetermined system.
    #[arg(long)]
    minimize_lem: bool,
    /// Write the best solution as a scheme JSON file.
    #[arg(long)]
    save_best: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Embedded,
    Milne,
    Adjoint,
}

#[derive(Args, Debug)]
struct PairArgs {
    #[arg(long, value_enum)]
    kind: KindArg,
    /// Worker scheme file. For embedded pairs it may be omitted to search
    /// for a worker sharing coefficients with the controller.
    #[arg(long)]
    worker: Option<String>,
    /// Controller (embedded) or partner (Milne) scheme file.
    #[arg(long)]
    controller: Option<String>,
    /// Number of leading coefficients a_1, b_1, a_2, ... shared by worker
    /// and controller.
    #[arg(long)]
    shared_prefix: Option<usize>,
    /// Expected Milne constant, RE or RE,IM.
    #[arg(long)]
    gamma: Option<String>,
    /// Stages of the worker to search for.
    #[arg(long)]
    worker_stages: Option<usize>,
    /// Order of the worker to search for (default: controller order - 1).
    #[arg(long)]
    worker_order: Option<usize>,
    #[arg(long, default_value_t = 100)]
    restarts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct BenchArgs {
    /// Scheme JSON file or builtin:NAME.
    #[arg(long, conflicts_with = "pair", required_unless_present = "pair")]
    scheme: Option<String>,
    /// Pair JSON file; tables for the worker and the controller value.
    #[arg(long)]
    pair: Option<String>,
    /// local: one step from t = 0; global: error at --tend.
    #[arg(long, value_enum, default_value_t = ModeArg::Local)]
    mode: ModeArg,
    /// Largest step size.
    #[arg(long, default_value_t = 0.1)]
    h0: f64,
    /// Number of step sizes, each half the previous.
    #[arg(long, default_value_t = 6)]
    levels: usize,
    /// Grid points (power of two).
    #[arg(long, default_value_t = 512)]
    grid: usize,
    /// End time of global runs.
    #[arg(long, default_value_t = 1.0)]
    tend: f64,
    #[arg(long, default_value_t = -50.0, allow_negative_numbers = true)]
    x_min: f64,
    #[arg(long, default_value_t = 70.0)]
    x_max: f64,
    /// Transport speed δ.
    #[arg(long, default_value_t = 0.5)]
    delta: f64,
    /// Soliton parameter β.
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    /// Soliton velocity v.
    #[arg(long, default_value_t = 1.1)]
    velocity: f64,
    /// Cross-phase coupling e.
    #[arg(long, default_value_t = 0.8)]
    coupling: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Local,
    Global,
}

/// Runs the command line `args` (including the program name) and returns
/// the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    let result = match cli.threads {
        Some(0) => Err(Error::config("thread count must be positive")),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::config(e.to_string()))
            .and_then(|pool| pool.install(|| dispatch(&cli))),
        None => dispatch(&cli),
    };
    match result {
        Ok(Output { text, code, notes }) => {
            for n in notes {
                let _ = writeln!(err, "{n}");
            }
            let written = match &cli.output {
                Some(path) => std::fs::write(path, &text).map_err(Error::from),
                None => out.write_all(text.as_bytes()).map_err(Error::from),
            };
            match written {
                Ok(()) => code,
                Err(e) => {
                    let _ = writeln!(err, "error: {e}");
                    1
                }
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

struct Output {
    text: String,
    code: i32,
    /// Messages for standard error.
    notes: Vec<String>,
}

impl Output {
    fn ok(text: String) -> Result<Output> {
        Ok(Output {
            text,
            code: 0,
            notes: Vec::new(),
        })
    }
}

fn dispatch(cli: &Cli) -> Result<Output> {
    let json = cli.format == Format::Json;
    match &cli.command {
        Command::Lyndon { alphabet, length } => lyndon(*alphabet, *length, json),
        Command::Conditions(shape) => conditions_cmd(shape, json),
        Command::Solve(args) => solve_cmd(args, json),
        Command::Lem { scheme, order } => lem_cmd(scheme, *order, json),
        Command::Verify { scheme, order } => verify_cmd(scheme, *order, json),
        Command::Pair(args) => pair_cmd(args, json),
        Command::BenchNls(args) => bench_cmd(args, json),
    }
}

fn alphabet(n: u8) -> Result<Alphabet> {
    Ok(Alphabet::new(n)?)
}

fn lyndon(n: u8, length: usize, json: bool) -> Result<Output> {
    let words = lyndon_words(alphabet(n)?, length)?;
    if json {
        #[derive(Serialize)]
        struct Out {
            alphabet: u8,
            length: usize,
            count: usize,
            words: Vec<String>,
        }
        let text = io::to_json(&Out {
            alphabet: n,
            length,
            count: words.len(),
            words: words.iter().map(ToString::to_string).collect(),
        })?;
        return Output::ok(text);
    }
    let mut text = String::new();
    for w in &words {
        text += &format!("{w}\n");
    }
    text += &format!("# {} words\n", words.len());
    Output::ok(text)
}

fn parse_complex(s: &str) -> Result<Complex64> {
    let bad = || Error::config(format!("cannot read {s:?} as a number or RE,IM pair"));
    let mut parts = s.split(',');
    let re = parts.next().ok_or_else(bad)?.trim().parse::<f64>().map_err(|_| bad())?;
    let im = match parts.next() {
        Some(p) => p.trim().parse::<f64>().map_err(|_| bad())?,
        None => 0.0,
    };
    if parts.next().is_some() {
        return Err(bad());
    }
    Ok(Complex64::new(re, im))
}

impl ShapeArgs {
    fn shape(&self) -> Result<SchemeShape> {
        let stages = self.stages.ok_or_else(|| Error::config("--stages is required"))?;
        let symmetry = if self.symmetric {
            Symmetry::Symmetric(SymmetricVariant::LastBZero)
        } else if self.palindromic {
            Symmetry::Palindromic
        } else {
            Symmetry::None
        };
        let mut shape = SchemeShape::new(stages, alphabet(self.alphabet)?, symmetry)?;
        for f in &self.fix {
            let (name, value) = f
                .split_once('=')
                .ok_or_else(|| Error::config(format!("--fix expects NAME=VALUE, got {f:?}")))?;
            shape = shape.with_fixed(Var::parse(name.trim())?, parse_complex(value)?)?;
        }
        Ok(shape)
    }

    fn order(&self) -> Result<usize> {
        self.order.ok_or_else(|| Error::config("--order is required"))
    }

    fn system(&self) -> Result<PolySystem> {
        let limits = Limits {
            max_abc_length: self.max_abc_length,
        };
        order_conditions(self.order()?, &self.shape()?, limits, default_workers())
    }
}

fn conditions_cmd(shape: &ShapeArgs, json: bool) -> Result<Output> {
    let sys = shape.system()?;
    if !json {
        return Output::ok(io::system_to_text(&sys));
    }
    #[derive(Serialize)]
    struct Eq {
        word: String,
        poly: String,
    }
    #[derive(Serialize)]
    struct Out {
        order: usize,
        unknowns: Vec<String>,
        counts_by_order: Vec<usize>,
        equations: Vec<Eq>,
        merged: Vec<(String, Option<String>)>,
    }
    let text = io::to_json(&Out {
        order: sys.order,
        unknowns: sys.unknowns().iter().map(ToString::to_string).collect(),
        counts_by_order: sys.counts_by_order(),
        equations: sys
            .equations
            .iter()
            .map(|e| Eq {
                word: e.word.to_string(),
                poly: e.poly.to_string(),
            })
            .collect(),
        merged: sys
            .merged
            .iter()
            .map(|m| (m.dropped.to_string(), m.kept.as_ref().map(ToString::to_string)))
            .collect(),
    })?;
    Output::ok(text)
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::config(format!("cannot read {}: {e}", path.display())))
}

fn load_scheme(source: &str) -> Result<SplittingScheme> {
    if let Some(name) = source.strip_prefix("builtin:") {
        return match name {
            "lie-trotter" => Ok(schemes::lie_trotter()),
            "strang" => Ok(schemes::strang()),
            "strang-abc" => Ok(schemes::strang_abc()),
            _ => Err(Error::config(format!("unknown builtin scheme {name:?}"))),
        };
    }
    match io::read_scheme_file(&read(Path::new(source))?)? {
        SchemeFile::Scheme(s) => Ok(s),
        SchemeFile::Pair(_) => Err(Error::config(format!("{source} holds a pair, not a scheme"))),
    }
}

fn load_pair(source: &str) -> Result<SchemePair> {
    match io::read_scheme_file(&read(Path::new(source))?)? {
        SchemeFile::Pair(p) => Ok(p),
        SchemeFile::Scheme(_) => Err(Error::config(format!("{source} holds a scheme, not a pair"))),
    }
}

fn solve_config(field: &str, restarts: usize, seed: u64) -> Result<SolveConfig> {
    let field = io::field_from_str(field)
        .ok_or_else(|| Error::config(format!("--field must be real or complex, got {field:?}")))?;
    let cfg = SolveConfig::new(field).with_restarts(restarts).with_seed(seed);
    cfg.validate()?;
    Ok(cfg)
}

fn solve_cmd(args: &SolveArgs, json: bool) -> Result<Output> {
    let mut cfg = solve_config(&args.field, args.restarts, args.seed)?;
    if let Some(r) = args.sample_box {
        cfg.sample_box = r;
    }
    cfg.tol_residual = args.tol;
    cfg.max_newton_iters = args.max_iters;
    cfg.validate()?;
    let sys = match (&args.system, args.composition) {
        (Some(path), _) => io::system_from_text(&read(path)?)?,
        (None, Some(m)) => composition_system(&CompositionShape::new(m, args.shape.order()?)?)?,
        (None, None) => args.shape.system()?,
    };
    let mut notes = vec![format!("seed {}, {} restarts", cfg.seed, cfg.restarts)];
    let (text, solutions) = if args.minimize_lem {
        let report = minimize_lem(&sys, &cfg)?;
        let text = if json {
            io::minimize_report_json(&sys, &cfg, &report.census, &report.candidates)?
        } else {
            let c = &report.census;
            let mut t = format!(
                "# {} restarts: {} feasible, {} infeasible, {} distinct\n",
                c.restarts, c.feasible, c.infeasible, c.distinct
            );
            for s in &report.candidates {
                t += &solution_line(s);
            }
            t
        };
        (text, report.candidates)
    } else {
        let report = solve_square(&sys, &cfg)?;
        let text = if json {
            io::solve_report_json(&sys, &cfg, &report.census, &report.solutions)?
        } else {
            let c = &report.census;
            let mut t = format!(
                "# {} restarts: {} converged, {} singular, {} diverged, {} stalled, {} hit the iteration limit; {} distinct\n",
                c.restarts, c.converged, c.singular, c.diverged, c.stalled, c.max_iterations, c.distinct
            );
            for s in &report.solutions {
                t += &solution_line(s);
            }
            t
        };
        (text, report.solutions)
    };
    if let (Some(path), Some(best)) = (&args.save_best, solutions.first()) {
        let scheme = best
            .to_scheme(&sys, &format!("solution {}", best.restart))?
            .with_computed_lem()?;
        std::fs::write(path, io::scheme_to_json(&scheme)?)?;
    }
    let code = if solutions.is_empty() { 2 } else { 0 };
    if code == 2 {
        notes.push(format!("no solution after {} restarts", cfg.restarts));
    }
    Ok(Output { text, code, notes })
}

fn solution_line(s: &crate::solve::Solution) -> String {
    let coeffs: Vec<String> = s
        .coefficients
        .iter()
        .map(|(v, z)| {
            if z.im == 0.0 {
                format!("{v}={:.17}", z.re)
            } else {
                format!("{v}={:.17}{:+.17}i", z.re, z.im)
            }
        })
        .collect();
    let lem = s.lem.map_or_else(|| "-".to_string(), |l| format!("{l:.6e}"));
    format!(
        "lem {lem}  residual {:.1e}{}  {}\n",
        s.residual,
        if s.positive { "  positive" } else { "" },
        coeffs.join(" ")
    )
}

fn lem_cmd(source: &str, order: Option<usize>, json: bool) -> Result<Output> {
    let sch = load_scheme(source)?;
    let p = order.unwrap_or(sch.order());
    let coeffs = sch.to_template();
    let lem = conditions::lem(&coeffs, p)?;
    let lem_kappa = conditions::lem_kappa(&coeffs, p)?;
    if json {
        #[derive(Serialize)]
        struct Out {
            scheme: String,
            order: usize,
            lem: Num,
            lem_kappa: Num,
        }
        let text = io::to_json(&Out {
            scheme: sch.name().to_string(),
            order: p,
            lem: Num(lem),
            lem_kappa: Num(lem_kappa),
        })?;
        return Output::ok(text);
    }
    Output::ok(format!("{lem:.16e}\n"))
}

fn verify_cmd(source: &str, order: Option<usize>, json: bool) -> Result<Output> {
    let sch = load_scheme(source)?;
    let p = order.unwrap_or(sch.order());
    let coeffs = sch.to_template();
    let mut rows = Vec::new();
    let mut worst: f64 = 0.0;
    for q in 1..=p {
        for (w, r) in conditions::word_residuals(&coeffs, q)? {
            worst = worst.max(r.norm());
            rows.push((w.to_string(), r));
        }
    }
    let ok = worst <= ORDER_TOLERANCE;
    let lem = if ok { conditions::lem(&coeffs, p).ok() } else { None };
    let text = if json {
        #[derive(Serialize)]
        struct Res {
            word: String,
            re: Num,
            im: Num,
        }
        #[derive(Serialize)]
        struct Out {
            scheme: String,
            order: usize,
            passed: bool,
            max_residual: Num,
            lem: Option<Num>,
            residuals: Vec<Res>,
        }
        io::to_json(&Out {
            scheme: sch.name().to_string(),
            order: p,
            passed: ok,
            max_residual: Num(worst),
            lem: lem.map(Num),
            residuals: rows
                .iter()
                .map(|(w, r)| Res {
                    word: w.clone(),
                    re: Num(r.re),
                    im: Num(r.im),
                })
                .collect(),
        })?
    } else {
        let mut t = String::new();
        for (w, r) in &rows {
            t += &format!("{w:<10} {:.3e}\n", r.norm());
        }
        t += &format!("max residual {worst:.3e}\n");
        if let Some(l) = lem {
            t += &format!("lem {l:.16e}\n");
        }
        t += if ok { "order conditions hold\n" } else { "order conditions violated\n" };
        t
    };
    Ok(Output {
        text,
        code: if ok { 0 } else { 2 },
        notes: Vec::new(),
    })
}

fn pair_cmd(args: &PairArgs, json: bool) -> Result<Output> {
    let pair = match args.kind {
        KindArg::Adjoint => {
            let w = args.worker.as_deref().ok_or_else(|| Error::config("--worker is required"))?;
            SchemePair::adjoint(load_scheme(w)?)?
        }
        KindArg::Milne => {
            let w = args.worker.as_deref().ok_or_else(|| Error::config("--worker is required"))?;
            let c = args
                .controller
                .as_deref()
                .ok_or_else(|| Error::config("--controller (the partner) is required"))?;
            let (w, c) = (load_scheme(w)?, load_scheme(c)?);
            match &args.gamma {
                Some(g) => SchemePair::milne_with_gamma(w, c, parse_complex(g)?)?,
                None => SchemePair::milne(w, c)?,
            }
        }
        KindArg::Embedded => {
            let c = args
                .controller
                .as_deref()
                .ok_or_else(|| Error::config("--controller is required"))?;
            let controller = load_scheme(c)?;
            match &args.worker {
                Some(w) => {
                    let prefix = args
                        .shared_prefix
                        .ok_or_else(|| Error::config("--shared-prefix is required with --worker"))?;
                    SchemePair::embedded(load_scheme(w)?, controller, prefix)?
                }
                None => search_worker(args, controller)?,
            }
        }
    };
    if json {
        return Output::ok(io::pair_to_json(&pair)?);
    }
    let (p, _) = pair.orders();
    Output::ok(format!(
        "{} pair: worker {} (order {p}), {}\n",
        pair.kind().as_str(),
        pair.worker().name(),
        io::controller_label(&pair)
    ))
}

fn search_worker(args: &PairArgs, controller: SplittingScheme) -> Result<SchemePair> {
    let stages = args
        .worker_stages
        .ok_or_else(|| Error::config("--worker-stages is required to search for a worker"))?;
    let order = args
        .worker_order
        .unwrap_or_else(|| controller.order().saturating_sub(1))
        .max(1);
    let cfg = SolveConfig::new(FieldKind::Real)
        .with_restarts(args.restarts)
        .with_seed(args.seed);
    let found = embedded_search(&controller, stages, order, Some(1), &cfg)?;
    let cand = found.into_iter().next().ok_or_else(|| {
        Error::Infeasible(format!("no embedded worker after {} restarts per prefix", args.restarts))
    })?;
    let best = &cand.solutions[0];
    let worker = best
        .to_scheme(&cand.system, &format!("{} worker", controller.name()))?
        .with_computed_lem()?;
    Ok(SchemePair::embedded(worker, controller, cand.shared_prefix)?)
}

fn bench_cmd(args: &BenchArgs, json: bool) -> Result<Output> {
    let params = NlsParams {
        delta: args.delta,
        beta: args.beta,
        v: args.velocity,
        e: args.coupling,
        x_min: args.x_min,
        x_max: args.x_max,
        n: args.grid,
    };
    let prob = nls_problem(&params)?;
    let mode = match args.mode {
        ModeArg::Local => Mode::Local,
        ModeArg::Global => Mode::Global,
    };
    let table = |m: Method<'_>| convergence_table(m, &prob, args.h0, args.levels, mode, args.tend);
    let tables: Vec<ConvergenceTable> = match (&args.scheme, &args.pair) {
        (Some(s), _) => {
            let sch = load_scheme(s)?;
            if sch.alphabet() != Alphabet::AB {
                return Err(Error::config("the NLS benchmark splits into two operators"));
            }
            vec![table(Method::Scheme(&sch))?]
        }
        (None, Some(p)) => {
            let pair = load_pair(p)?;
            if pair.worker().alphabet() != Alphabet::AB {
                return Err(Error::config("the NLS benchmark splits into two operators"));
            }
            vec![table(Method::Worker(&pair))?, table(Method::Controller(&pair))?]
        }
        (None, None) => return Err(Error::config("--scheme or --pair is required")),
    };
    let text = if json {
        io::table_json(&tables)?
    } else {
        tables.iter().map(ConvergenceTable::render).collect::<Vec<_>>().join("\n")
    };
    Output::ok(text)
}
