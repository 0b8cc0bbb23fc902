mod common;

use num_complex::Complex64;
use splitting::core::schemes::{self, SchemePair};
use splitting::integrate::{
    convergence_table, nls_problem, pair_step, step, Method, Mode, NlsParams, Problem, State,
};

fn nls() -> Problem<splitting::integrate::NlsState> {
    nls_problem(&NlsParams::default()).unwrap()
}

/// Longest run of consecutive observed orders within `tol` of `target`.
fn run_near(orders: &[Option<f64>], target: f64, tol: f64) -> usize {
    let (mut best, mut cur) = (0, 0);
    for o in orders {
        cur = match o {
            Some(x) if (x - target).abs() <= tol => cur + 1,
            _ => 0,
        };
        best = best.max(cur);
    }
    best
}

fn orders(method: Method<'_>, mode: Mode, levels: usize) -> Vec<Option<f64>> {
    let t = convergence_table(method, &nls(), 0.1, levels, mode, 1.0).unwrap();
    t.rows.iter().map(|r| r.order).collect()
}

#[test]
fn strang_orders() {
    let s = schemes::strang();
    assert!(run_near(&orders(Method::Scheme(&s), Mode::Local, 5), 3.0, 0.2) >= 3);
    assert!(run_near(&orders(Method::Scheme(&s), Mode::Global, 5), 2.0, 0.2) >= 3);
}

#[test]
fn lie_trotter_global_order() {
    let s = schemes::lie_trotter();
    assert!(run_near(&orders(Method::Scheme(&s), Mode::Global, 5), 1.0, 0.2) >= 3);
}

#[test]
fn milne_average_of_lie_trotter_is_second_order() {
    let lt = schemes::lie_trotter();
    let pair = SchemePair::milne(lt.clone(), lt.swap_roles().unwrap()).unwrap();
    assert!((pair.gamma().unwrap() - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
    assert!(run_near(&orders(Method::Controller(&pair), Mode::Local, 5), 3.0, 0.2) >= 3);

    // with gamma = -1 the estimate is half the distance of the two orderings
    let prob = nls();
    let u = prob.initial();
    let ps = pair_step(&pair, &prob, 0.05, u).unwrap();
    let ab = step(&lt, &prob, 0.05, u).unwrap();
    let ba = step(&lt.swap_roles().unwrap(), &prob, 0.05, u).unwrap();
    assert!((ps.estimate - 0.5 * ab.distance(&ba)).abs() <= 1e-14 * ps.estimate.max(1.0));
}

#[test]
fn embedded_estimate_tracks_the_worker_error() {
    let pair = SchemePair::embedded(schemes::lie_trotter(), schemes::strang(), 0).unwrap();
    let prob = nls();
    let u = prob.initial();
    let mut prev: Option<f64> = None;
    let mut observed = Vec::new();
    for k in 0..5 {
        let h = 0.1 / f64::from(1 << k);
        let ps = pair_step(&pair, &prob, h, u).unwrap();
        let truth = ps.worker.distance(&prob.exact(h).unwrap());
        assert!((ps.estimate / truth - 1.0).abs() < 0.2, "h {h}: {} vs {truth}", ps.estimate);
        if let Some(p) = prev {
            observed.push((p / ps.estimate).log2());
        }
        prev = Some(ps.estimate);
    }
    assert!(observed[1..].iter().all(|o| (o - 2.0).abs() < 0.2), "{observed:?}");
}

#[test]
fn palindromic_relation_on_the_nls_state() {
    let s = common::palindromic_order3();
    assert!(s.is_palindromic());
    let swapped = s.swap_roles().unwrap();
    assert!(swapped.same_stages(&s.adjoint()));
    let prob = nls();
    let u = prob.initial();
    for h in [0.2, 0.05] {
        let there = step(&swapped, &prob, h, u).unwrap();
        let back = step(&s, &prob, -h, &there).unwrap();
        assert!(back.distance(u) / u.norm() < 1e-10);
    }
}

#[test]
fn adjoint_undoes_a_step() {
    let (s, _) = common::minimized_order3(4);
    let prob = nls();
    let u = prob.initial();
    let v = step(&s, &prob, 0.1, u).unwrap();
    let back = step(&s.adjoint(), &prob, -0.1, &v).unwrap();
    assert!(back.distance(u) / u.norm() < 1e-10);
    assert!(s.adjoint().adjoint().same_stages(&s));
}

#[test]
fn steps_conserve_each_component() {
    let (s, _) = common::minimized_order3(4);
    let prob = nls();
    let mut u = prob.initial().clone();
    let (n1, n2) = u.component_norms();
    for _ in 0..10 {
        let v = step(&s, &prob, 0.1, &u).unwrap();
        let ((m1, m2), (p1, p2)) = (v.component_norms(), u.component_norms());
        assert!((m1 / p1 - 1.0).abs() < 1e-10 && (m2 / p2 - 1.0).abs() < 1e-10);
        u = v;
    }
    let (m1, m2) = u.component_norms();
    assert!((m1 / n1 - 1.0).abs() < 1e-9 && (m2 / n2 - 1.0).abs() < 1e-9);
}

#[test]
fn averaged_palindromic_worker_gains_an_order() {
    // N = 1024 keeps the spatial error below the fifth-order local error
    let prob = nls_problem(&NlsParams {
        n: 1024,
        ..NlsParams::default()
    })
    .unwrap();
    let pair = SchemePair::adjoint(common::palindromic_order3()).unwrap();
    let t = convergence_table(Method::Controller(&pair), &prob, 0.2, 5, Mode::Local, 1.0).unwrap();
    let o: Vec<Option<f64>> = t.rows.iter().map(|r| r.order).collect();
    assert!(o.iter().flatten().last().unwrap() >= &4.8, "{o:?}");
    let w = convergence_table(Method::Worker(&pair), &prob, 0.2, 5, Mode::Local, 1.0).unwrap();
    assert!(run_near(&w.rows.iter().map(|r| r.order).collect::<Vec<_>>(), 4.0, 0.2) >= 2);
}

#[test]
fn tables_render_and_halve() {
    let s = schemes::strang();
    let t = convergence_table(Method::Scheme(&s), &nls(), 0.1, 3, Mode::Global, 1.0).unwrap();
    for w in t.rows.windows(2) {
        assert_eq!(w[0].h, 2.0 * w[1].h);
    }
    let text = t.render();
    assert!(text.lines().count() >= 4);
    assert!(text.contains("order"));
}
