use std::f64::consts::PI;
use std::fs::File;
use std::path::PathBuf;

use num_complex::Complex64;
use zsnft::io::read_golden;
use zsnft::reference::{oracle_propagate, sech_analytic_ab, RefinedOracle, SechSpec};
use zsnft::Kappa;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

#[test]
fn analytic_matches_frozen_values() {
    for (amp, file) in [(0.8, "sech_b_A0.8.csv"), (4.4, "sech_b_A4.4.csv")] {
        let g = read_golden(File::open(data(file)).unwrap()).unwrap();
        assert!(g.header[0].starts_with("oracle: sech_analytic_ab"));
        assert!(g.header[0].contains(&format!("A={amp};")));
        assert_eq!(g.xi.len(), 16);
        let s = sech_analytic_ab(&SechSpec::new(amp), &g.xi).unwrap();
        for j in 0..g.xi.len() {
            assert!((s.b[j] - g.values[j]).norm() <= 1e-14 * g.values[j].norm(), "A = {amp}, xi = {}", g.xi[j]);
        }
    }
}

#[test]
fn frozen_values_agree_with_refined_oracle() {
    let g = read_golden(File::open(data("sech_b_A4.4.csv")).unwrap()).unwrap();
    let sech = SechSpec::new(4.4);
    let oracle = RefinedOracle::new(|t| sech.eval(t), Kappa::Focusing, -30.0, 30.0, 512, 16).unwrap();
    let brute = oracle.spectrum(&g.xi);
    let scale = g.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    for j in 0..g.xi.len() {
        assert!((brute.b[j] - g.values[j]).norm() < 1e-8 * scale);
    }
}

#[test]
fn value_at_origin() {
    let sech = SechSpec::new(4.4);
    let want = (4.4 * PI).sin().abs();
    let s = sech_analytic_ab(&sech, &[0.0]).unwrap();
    assert!((s.b[0].norm() - want).abs() < 1e-14);
    let (_, b) = oracle_propagate(|t| sech.eval(t), Kappa::Focusing, -30.0, 30.0, 1024, Complex64::new(0.0, 0.0), 64).unwrap();
    assert!((b.norm() - want).abs() < 1e-8);
}

#[test]
fn oracle_self_convergence() {
    // doubling the refinement cuts the self-difference by about 2⁴
    let sech = SechSpec::new(4.4);
    let zeta = Complex64::new(0.45, 0.0);
    let b = |refine| oracle_propagate(|t| sech.eval(t), Kappa::Focusing, -30.0, 30.0, 32, zeta, refine).unwrap().1;
    let (b8, b16, b32) = (b(8), b(16), b(32));
    let ratio = (b8 - b16).norm() / (b16 - b32).norm();
    assert!((12.0..20.0).contains(&ratio), "ratio {ratio}");
}
