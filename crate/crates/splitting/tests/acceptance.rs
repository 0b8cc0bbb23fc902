//! End-to-end checks, one verdict line per criterion.
//!
//! A criterion with a known, analysed gap prints FAIL together with the
//! reason; the run only aborts if a check that must hold does not.

mod common;

use std::time::Instant;

use num_complex::Complex64;
use splitting::cli::run;
use splitting::core::conditions::{
    lem, m_matrix, order_conditions, taylor_derivative, SchemeShape, Symmetry, SymmetricVariant,
};
use splitting::core::freealg::{expand_commutator, poly, CoefPoly, NCPoly, Rational, Var};
use splitting::core::lyndon::{lyndon_words, standard_bracketing, Alphabet, Word};
use splitting::core::schemes::{self, SchemePair, SplittingScheme};
use splitting::integrate::{
    convergence_table, nls_problem, step, Method, Mode, NlsParams, NlsState, Problem, State,
};
use splitting::solve::{compose_weights, solve_square, FieldKind, SolveConfig};

struct Verdict {
    pass: bool,
    detail: String,
    /// Why a failing criterion cannot be met.
    gap: Option<&'static str>,
    /// Everything that must hold regardless of the gap.
    sound: bool,
}

impl Verdict {
    fn plain(pass: bool, detail: String) -> Self {
        Verdict {
            pass,
            detail,
            gap: None,
            sound: pass,
        }
    }
}

// 1

fn lyndon_tables() -> Verdict {
    let start = Instant::now();
    let two: Vec<usize> = (1..=10).map(|q| lyndon_words(Alphabet::AB, q).unwrap().len()).collect();
    let three: Vec<usize> = (1..=8).map(|q| lyndon_words(Alphabet::ABC, q).unwrap().len()).collect();
    let elapsed = start.elapsed().as_secs_f64();
    let table_two = [2, 1, 2, 3, 6, 9, 18, 30, 56, 99];
    let table_three = [3, 3, 8, 18, 48, 115, 312, 810];
    // necklace counts (1/q) Σ_{d|q} μ(d) k^{q/d}, independent of the generator
    let necklace = |k: i64, q: i64| -> usize {
        let mu = |mut n: i64| {
            let mut r = 1;
            let mut p = 2;
            while p * p <= n {
                if n % p == 0 {
                    n /= p;
                    if n % p == 0 {
                        return 0;
                    }
                    r = -r;
                }
                p += 1;
            }
            if n > 1 {
                r = -r;
            }
            r
        };
        let s: i64 = (1..=q).filter(|d| q % d == 0).map(|d| mu(d) * k.pow((q / d) as u32)).sum();
        (s / q) as usize
    };
    let exact_two: Vec<usize> = (1..=10).map(|q| necklace(2, q)).collect();
    let exact_three: Vec<usize> = (1..=8).map(|q| necklace(3, q)).collect();
    let sound = two == exact_two && three == exact_three && elapsed < 1.0;
    let pass = sound && two == table_two && three == table_three;
    let mismatches: Vec<String> = three
        .iter()
        .zip(table_three)
        .enumerate()
        .filter(|(_, (a, b))| **a != *b)
        .map(|(i, (a, b))| format!("q={} table {b} computed {a}", i + 1))
        .collect();
    Verdict {
        pass,
        detail: format!(
            "two letters {two:?}; three letters {three:?}; {elapsed:.3} s; differences from the table: {}",
            if mismatches.is_empty() { "none".into() } else { mismatches.join(", ") }
        ),
        gap: Some("115 three-letter words of length 6 are expected; the necklace formula (729-27-9+3)/6 and brute force both give 116"),
        sound,
    }
}

// 2

fn two_stage_conditions() -> Verdict {
    let shape = SchemeShape::generic(2, Alphabet::AB).unwrap();
    let p3 = order_conditions(3, &shape).unwrap().polynomials();
    let want = [
        poly("a1 + a2 - 1"),
        poly("b1 + b2 - 1"),
        poly("2*a2*b1 - 1"),
        poly("3*a2^2*b1 - 1"),
        poly("3*a2*b1^2 - 1"),
    ];
    let d2 = taylor_derivative(&shape, 2).unwrap();
    let printed = [
        ("AA", "a1^2 + 2*a1*a2 + a2^2 - 1"),
        ("AB", "2*a2*b1 - 1"),
        ("BA", "2*a1*b1 + 2*a1*b2 + 2*a2*b2 - 1"),
        ("BB", "b1^2 + 2*b1*b2 + b2^2 - 1"),
    ];
    let mut want_d2 = NCPoly::zero(Alphabet::AB);
    for (w, c) in printed {
        let term = NCPoly::monomial(Alphabet::AB, Word::parse(w).unwrap(), poly(c)).unwrap();
        want_d2 = want_d2.add(&term).unwrap();
    }
    let ok_conditions = p3 == want;
    let ok_d2 = d2 == want_d2;
    Verdict::plain(
        ok_conditions && ok_d2,
        format!("order-3 conditions match: {ok_conditions}; second derivative term-for-term: {ok_d2}"),
    )
}

// 3

fn m_matrix_golden() -> Verdict {
    let m = m_matrix(Alphabet::AB, 5).unwrap();
    let r = Rational::from_integer;
    let mut want = vec![vec![r(0); 6]; 6];
    for (i, row) in want.iter_mut().enumerate() {
        row[i] = r(1);
    }
    want[2][1] = r(-2);
    want[4][3] = r(-3);
    let nc = |terms: &[(i128, &str)]| {
        let mut p = NCPoly::zero(Alphabet::AB);
        for &(c, w) in terms {
            let m = NCPoly::monomial(Alphabet::AB, Word::parse(w).unwrap(), CoefPoly::integer(c)).unwrap();
            p = p.add(&m).unwrap();
        }
        p
    };
    let printed = [
        nc(&[(1, "AAAAB"), (-4, "AAABA"), (6, "AABAA"), (-4, "ABAAA"), (1, "BAAAA")]),
        nc(&[(1, "AAABB"), (-2, "AABAB"), (4, "ABABA"), (-1, "ABBAA"), (-1, "AABBA"), (-2, "BABAA"), (1, "BBAAA")]),
        nc(&[
            (1, "AABAB"),
            (-1, "AABBA"),
            (-3, "ABAAB"),
            (4, "ABABA"),
            (2, "BAAAB"),
            (-3, "BAABA"),
            (-1, "ABBAA"),
            (1, "BABAA"),
        ]),
        nc(&[(1, "AABBB"), (-3, "ABABB"), (3, "ABBAB"), (-2, "ABBBA"), (3, "BABBA"), (-3, "BBABA"), (1, "BBBAA")]),
        nc(&[
            (1, "ABABB"),
            (-3, "ABBAB"),
            (2, "ABBBA"),
            (-1, "BAABB"),
            (4, "BABAB"),
            (-3, "BABBA"),
            (-1, "BBAAB"),
            (1, "BBABA"),
        ]),
        nc(&[(1, "ABBBB"), (-4, "BABBB"), (6, "BBABB"), (-4, "BBBAB"), (1, "BBBBA")]),
    ];
    let words = lyndon_words(Alphabet::AB, 5).unwrap();
    let matching = words
        .iter()
        .zip(&printed)
        .filter(|(w, p)| expand_commutator(&standard_bracketing(w).unwrap(), Alphabet::AB).unwrap() == **p)
        .count();
    Verdict::plain(
        m == want && matching == 6,
        format!("6x6 matrix matches: {}; expansions matching: {matching}/6", m == want),
    )
}

// 4

fn truncated_exponential(alphabet: Alphabet, s: usize, q: usize) -> NCPoly {
    let fact = |n: usize| (1..=n as i128).product::<i128>();
    let mut prod = NCPoly::one(alphabet);
    for stage in (1..=s).rev() {
        for letter in alphabet.letters().rev() {
            let y = CoefPoly::var(Var::coefficient(letter, stage));
            let mut e = NCPoly::zero(alphabet);
            for m in 0..=q {
                let w = if m == 0 { Word::empty() } else { Word::new(vec![letter; m]).unwrap() };
                let c = y.pow(m as u32).scale(&Rational::new(1, fact(m)));
                e = e.add(&NCPoly::monomial(alphabet, w, c).unwrap()).unwrap();
            }
            prod = prod.mul(&e).unwrap().truncated(q);
        }
    }
    let mut sum = NCPoly::zero(alphabet);
    for l in alphabet.letters() {
        sum = sum.add(&NCPoly::letter(alphabet, l).unwrap()).unwrap();
    }
    let mut flow = NCPoly::one(alphabet);
    for _ in 0..q {
        flow = flow.mul(&sum).unwrap();
    }
    prod.homogeneous_part(q)
        .scale_rational(Rational::from_integer(fact(q)))
        .sub(&flow)
        .unwrap()
}

fn oracle_equivalence() -> Verdict {
    let mut checked = 0;
    let mut agree = 0;
    for alphabet in [Alphabet::AB, Alphabet::ABC] {
        for s in 1..=3 {
            let shape = SchemeShape::generic(s, alphabet).unwrap();
            for q in 1..=4 {
                checked += 1;
                if taylor_derivative(&shape, q).unwrap() == truncated_exponential(alphabet, s, q) {
                    agree += 1;
                }
            }
        }
    }
    Verdict::plain(agree == checked, format!("{agree}/{checked} (alphabet, s <= 3, q <= 4) cases identical"))
}

// 5

fn condition_counts() -> Verdict {
    let sym = |s, a| SchemeShape::new(s, a, Symmetry::Symmetric(SymmetricVariant::LastBZero)).unwrap();
    let ab = order_conditions(6, &sym(10, Alphabet::AB)).unwrap().len();
    let abc = order_conditions(6, &sym(11, Alphabet::ABC)).unwrap().len();
    let generic = order_conditions(6, &SchemeShape::generic(1, Alphabet::ABC).unwrap()).unwrap();
    let total = generic.len();
    let sound = ab == 10 && abc == 59 && total == 196;
    Verdict {
        pass: ab == 10 && abc == 59 && total == 195,
        detail: format!(
            "symmetric AB p=6: {ab}; symmetric ABC p=6: {abc}; generic ABC p=6: {total} {:?}",
            generic.counts_by_order()
        ),
        gap: Some("195 is the sum with 115 words of length 6; with the correct 116 the sum is 196"),
        sound,
    }
}

// 6

fn lem_values() -> Verdict {
    let strang = lem(&schemes::strang().to_template(), 2).unwrap();
    let lt = lem(&schemes::lie_trotter().to_template(), 1).unwrap();
    // hand substitution into 3 a2^2 b1 - 1 and 3 a2 b1^2 - 1 with a = (1/2, 1/2), b = (1, 0)
    let (a2, b1) = (0.5f64, 1.0f64);
    let hand_strang = (3.0 * a2 * a2 * b1 - 1.0).hypot(3.0 * a2 * b1 * b1 - 1.0);
    // 2 a2 b1 - 1 with a = (1, 0), b = (1, 0)
    let hand_lt = (2.0f64 * 0.0 * 1.0 - 1.0).abs();
    let ok = (strang - 5f64.sqrt() / 4.0).abs() <= 1e-12
        && (strang - hand_strang).abs() <= 1e-12
        && (lt - 1.0).abs() <= 1e-12
        && (lt - hand_lt).abs() <= 1e-12;
    Verdict::plain(ok, format!("LEM(Strang) = {strang:.15}, LEM(Lie-Trotter) = {lt:.15}"))
}

// 7

fn solver_loop(s3: &SplittingScheme, s3_residual: f64, restarts_used: usize) -> Verdict {
    let feasible = s3_residual <= 1e-12 && s3.order_residual(3).unwrap() <= 1e-12;
    let shape = SchemeShape::generic(3, Alphabet::AB)
        .unwrap()
        .with_fixed(Var::parse("b3").unwrap(), Complex64::new(0.0, 0.0))
        .unwrap();
    let sys = order_conditions(3, &shape).unwrap();
    let start = Instant::now();
    let real = solve_square(&sys, &SolveConfig::new(FieldKind::Real).with_restarts(10_000)).unwrap();
    let complex = solve_square(&sys, &SolveConfig::new(FieldKind::Complex).with_restarts(100)).unwrap();
    let positive = complex.solutions.iter().find(|s| s.positive);
    let detail = format!(
        "min-LEM s=3 p=3: residual {s3_residual:.1e}, LEM {:.8} ({restarts_used} restarts); b3=0: {} real roots in {} restarts, {} complex (positive: {}); {:.1} s",
        s3.lem().unwrap_or(f64::NAN),
        real.solutions.len(),
        real.census.restarts,
        complex.solutions.len(),
        positive.is_some(),
        start.elapsed().as_secs_f64()
    );
    Verdict::plain(feasible && real.solutions.is_empty() && positive.is_some(), detail)
}

// 8

fn composition() -> Verdict {
    let cfg = SolveConfig::new(FieldKind::Real).with_restarts(200);
    let tj = compose_weights(3, 4, &cfg).unwrap();
    // the recombined scheme against the symbolic generic conditions
    let symbolic_residual = |s: &SplittingScheme| {
        let t = s.to_template();
        let sys = order_conditions(4, &SchemeShape::generic(t.stages(), Alphabet::AB).unwrap()).unwrap();
        sys.polynomials()
            .iter()
            .map(|p| p.eval_with(|v| t.get(v), |r| Complex64::new(*r.numer() as f64 / *r.denom() as f64, 0.0)).norm())
            .fold(0.0, f64::max)
    };
    let tj_ok = tj.len() == 1 && tj[0].scheme.stage_count() == 4 && symbolic_residual(&tj[0].scheme) <= 1e-12;
    let m7 = compose_weights(7, 6, &cfg).unwrap();
    let m7_ok = !m7.is_empty() && m7.iter().all(|s| s.scheme.stage_count() == 8 && s.order_residual <= 1e-12);
    Verdict::plain(
        tj_ok && m7_ok,
        format!(
            "m=3 order 4: {} stages, residual {:.1e}; m=7 order 6: {} weight vectors with {:?} stages",
            tj.first().map_or(0, |s| s.scheme.stage_count()),
            tj.first().map_or(f64::NAN, |s| symbolic_residual(&s.scheme)),
            m7.len(),
            m7.iter().map(|s| s.scheme.stage_count()).collect::<Vec<_>>()
        ),
    )
}

// 9

fn orders(method: Method<'_>, prob: &Problem<NlsState>, mode: Mode) -> Vec<Option<f64>> {
    let t = convergence_table(method, prob, 0.1, 8, mode, 1.0).unwrap();
    t.rows.iter().map(|r| r.order).collect()
}

fn settles(orders: &[Option<f64>], target: f64) -> bool {
    let mut run = 0;
    for o in orders {
        run = match o {
            Some(x) if (x - target).abs() <= 0.2 => run + 1,
            _ => 0,
        };
        if run >= 3 {
            return true;
        }
    }
    false
}

fn show(o: &[Option<f64>]) -> String {
    o.iter()
        .map(|x| x.map_or("-".into(), |x| format!("{x:.2}")))
        .collect::<Vec<_>>()
        .join(" ")
}

fn nls_convergence(s3: &SplittingScheme, palindromic: &SplittingScheme) -> Verdict {
    let start = Instant::now();
    let prob = nls_problem(&NlsParams::default()).unwrap();
    let lt = schemes::lie_trotter();
    let st = schemes::strang();
    let mut lines = Vec::new();
    let mut check = |name: &str, m: Method<'_>, p: f64, prob: &Problem<NlsState>| {
        let local = orders(m, prob, Mode::Local);
        let global = orders(m, prob, Mode::Global);
        let ok = settles(&local, p + 1.0) && settles(&global, p);
        lines.push(format!("{name}: local [{}] global [{}]", show(&local), show(&global)));
        ok
    };
    let lt_ok = check("Lie-Trotter", Method::Scheme(&lt), 1.0, &prob);
    let st_ok = check("Strang", Method::Scheme(&st), 2.0, &prob);
    let s3_ok = check("min-LEM 3-3", Method::Scheme(s3), 3.0, &prob);
    let fine = nls_problem(&NlsParams {
        n: 1024,
        ..NlsParams::default()
    })
    .unwrap();
    let s3_fine = check("min-LEM 3-3 at N=1024", Method::Scheme(s3), 3.0, &fine);
    let pair = SchemePair::adjoint(palindromic.clone()).unwrap();
    let avg = orders(Method::Controller(&pair), &prob, Mode::Local);
    let avg_ok = avg.iter().flatten().any(|&o| o >= 3.8);
    lines.push(format!("averaged palindromic 3-3: local [{}]", show(&avg)));
    lines.push(format!("{:.1} s", start.elapsed().as_secs_f64()));
    Verdict {
        pass: lt_ok && st_ok && s3_ok && avg_ok,
        detail: lines.join("; "),
        gap: Some("on 512 points the spatial error floor is reached before three consecutive orders settle near 3; the same scheme settles on 1024 points"),
        sound: lt_ok && st_ok && avg_ok && s3_fine,
    }
}

// 10

fn structural_identities(s3: &SplittingScheme, palindromic: &SplittingScheme) -> Verdict {
    let prob = nls_problem(&NlsParams::default()).unwrap();
    let u = prob.initial();
    let h = 0.1;
    let rel = |v: &NlsState| v.distance(u) / u.norm();
    let swapped = palindromic.swap_roles().unwrap();
    let pal = rel(&step(palindromic, &prob, -h, &step(&swapped, &prob, h, u).unwrap()).unwrap());
    let adj = rel(&step(&s3.adjoint(), &prob, -h, &step(s3, &prob, h, u).unwrap()).unwrap());
    let involution = s3.adjoint().adjoint().same_stages(s3);
    let mut drift: f64 = 0.0;
    let mut v = u.clone();
    for _ in 0..10 {
        let w = step(s3, &prob, h, &v).unwrap();
        let ((a1, a2), (b1, b2)) = (v.component_norms(), w.component_norms());
        drift = drift.max((b1 / a1 - 1.0).abs()).max((b2 / a2 - 1.0).abs());
        v = w;
    }
    Verdict::plain(
        pal <= 1e-10 && adj <= 1e-10 && involution && drift <= 1e-10,
        format!("palindromic relation {pal:.1e}; adjoint undo {adj:.1e}; involution {involution}; norm drift per step {drift:.1e}"),
    )
}

// 11

fn determinism() -> Verdict {
    let call = |args: &[&str]| {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(std::iter::once("splitting").chain(args.iter().copied()), &mut out, &mut err);
        (code, out)
    };
    let solve = [
        "solve", "--order", "3", "--stages", "3", "--minimize-lem", "--restarts", "8", "--seed", "5", "--format",
        "json",
    ];
    let bench = ["bench-nls", "--scheme", "builtin:strang", "--mode", "global", "--levels", "4", "--format", "json"];
    let (c1, s1) = call(&solve);
    let (c2, s2) = call(&solve);
    let (b1c, b1) = call(&bench);
    let (b2c, b2) = call(&bench);
    Verdict::plain(
        c1 == 0 && c2 == 0 && b1c == 0 && b2c == 0 && s1 == s2 && b1 == b2,
        format!("solve {} bytes identical: {}; bench-nls {} bytes identical: {}", s1.len(), s1 == s2, b1.len(), b1 == b2),
    )
}

fn main() {
    const RESTARTS: usize = 20;
    let (s3, s3_residual) = common::minimized_order3(RESTARTS);
    let palindromic = common::palindromic_order3();
    let verdicts: Vec<(usize, Verdict)> = vec![
        (1, lyndon_tables()),
        (2, two_stage_conditions()),
        (3, m_matrix_golden()),
        (4, oracle_equivalence()),
        (5, condition_counts()),
        (6, lem_values()),
        (7, solver_loop(&s3, s3_residual, RESTARTS)),
        (8, composition()),
        (9, nls_convergence(&s3, &palindromic)),
        (10, structural_identities(&s3, &palindromic)),
        (11, determinism()),
    ];
    let mut broken = Vec::new();
    for (id, v) in &verdicts {
        let status = if v.pass { "PASS" } else { "FAIL" };
        println!("criterion {id:>2}: {status}  {}", v.detail);
        if !v.pass {
            if let Some(gap) = v.gap {
                println!("              known gap: {gap}");
            }
        }
        if !v.sound || (!v.pass && v.gap.is_none()) {
            broken.push(*id);
        }
    }
    let passed = verdicts.iter().filter(|(_, v)| v.pass).count();
    println!("{passed}/{} criteria pass", verdicts.len());
    if !broken.is_empty() {
        eprintln!("checks that must hold failed for criteria {broken:?}");
        std::process::exit(1);
    }
}
