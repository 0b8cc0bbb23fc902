#![allow(dead_code)]

use splitting::core::conditions::{order_conditions, PolySystem, SchemeShape, Symmetry};
use splitting::core::lyndon::Alphabet;
use splitting::core::schemes::SplittingScheme;
use splitting::solve::{minimize_lem, solve_square, FieldKind, SolveConfig};

pub fn real(restarts: usize) -> SolveConfig {
    SolveConfig::new(FieldKind::Real).with_restarts(restarts)
}

pub fn shape(s: usize, symmetry: Symmetry) -> SchemeShape {
    SchemeShape::new(s, Alphabet::AB, symmetry).unwrap()
}

pub fn system(p: usize, s: usize, symmetry: Symmetry) -> PolySystem {
    order_conditions(p, &shape(s, symmetry)).unwrap()
}

/// The three-stage palindromic third-order scheme: after the twin merge its
/// conditions form a square system.
pub fn palindromic_order3() -> SplittingScheme {
    let sys = system(3, 3, Symmetry::Palindromic);
    assert!(sys.is_square());
    let report = solve_square(&sys, &real(40)).unwrap();
    let best = report.solutions.first().expect("a real palindromic solution");
    best.to_scheme(&sys, "PP 3 A").unwrap()
}

/// Smallest-LEM three-stage third-order scheme found from `restarts` starts.
pub fn minimized_order3(restarts: usize) -> (SplittingScheme, f64) {
    let sys = system(3, 3, Symmetry::None);
    let report = minimize_lem(&sys, &real(restarts)).unwrap();
    let s = report.best.to_scheme(&sys, "min-LEM 3-3").unwrap();
    (s, report.best.residual)
}
