use num_complex::Complex64;
use proptest::prelude::*;
use zsnft::scattering::principal_spectrum;
use zsnft::{
    build_grid, evaluate_spectrum, scatter_direct, scatter_fast, ContinuousSpectrum, Kappa, Method, Pipeline,
    SampledPotential,
};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn values(len: usize, amp: f64) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-amp..amp, -amp..amp).prop_map(|(re, im)| c(re, im)), len)
}

fn max_rel(a: &[Complex64], b: &[Complex64]) -> f64 {
    let scale = b.iter().map(|v| v.norm()).fold(0.0, f64::max).max(1e-300);
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max) / scale
}

fn direct_on_fast_nodes(m: Method, pot: &SampledPotential, ns: usize, t1: f64, t2: f64) -> (ContinuousSpectrum, ContinuousSpectrum) {
    let grid = build_grid(t1, t2, ns).unwrap();
    let fast = evaluate_spectrum(&scatter_fast(m, pot, &grid).unwrap(), None).unwrap();
    let zetas: Vec<Complex64> = fast.xi.iter().map(|&x| c(x, 0.0)).collect();
    (fast, scatter_direct(m, pot, &grid, &zetas).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn fast_matches_direct(v in values(65, 1.5), focusing in any::<bool>(), offset in 0usize..32) {
        let ns = 32;
        let kappa = if focusing { Kappa::Focusing } else { Kappa::Defocusing };
        // T1 = -offset h keeps both boundaries on the grid
        let h = 0.25;
        let (t1, t2) = (-(offset as f64) * h, (ns - offset) as f64 * h);
        let grid = build_grid(t1, t2, ns).unwrap();
        let pot = SampledPotential::from_values(&grid, kappa, &v).unwrap();
        for m in [Method::Erk34, Method::Irk34, Method::Scf24] {
            let (fast, direct) = direct_on_fast_nodes(m, &pot, ns, t1, t2);
            prop_assert!(max_rel(&fast.a, &direct.a) < 1e-9, "{} a", m);
            prop_assert!(max_rel(&fast.b, &direct.b) < 1e-9, "{} b", m);
        }
    }

    #[test]
    fn global_phase_covariance(v in values(33, 2.0), theta in -3.0..3.0f64) {
        let grid = build_grid(-2.0, 2.0, 16).unwrap();
        let p = Complex64::from_polar(1.0, theta);
        let rotated: Vec<Complex64> = v.iter().map(|x| x * p).collect();
        let pot = SampledPotential::from_values(&grid, Kappa::Focusing, &v).unwrap();
        let rot = SampledPotential::from_values(&grid, Kappa::Focusing, &rotated).unwrap();
        for m in Method::ALL {
            let s = principal_spectrum(m, &pot, &grid, Pipeline::preferred(m)).unwrap();
            let r = principal_spectrum(m, &rot, &grid, Pipeline::preferred(m)).unwrap();
            for j in 0..s.len() {
                prop_assert!((r.a[j] - s.a[j]).norm() < 1e-11, "{} a", m);
                prop_assert!((r.b[j] - p.conj() * s.b[j]).norm() < 1e-11, "{} b", m);
            }
        }
    }
}

#[test]
fn lossless_magnus_propagation() {
    let grid = build_grid(-8.0, 8.0, 128).unwrap();
    for (kappa, sign) in [(Kappa::Focusing, 1.0), (Kappa::Defocusing, -1.0)] {
        let pot = SampledPotential::from_fn(&grid, kappa, |t| Complex64::from_polar(2.0 / t.cosh(), 0.3 * t)).unwrap();
        for m in [Method::M12, Method::M34, Method::Cf24] {
            let s = principal_spectrum(m, &pot, &grid, Pipeline::Direct).unwrap();
            for j in 0..s.len() {
                let u = s.a[j].norm_sqr() + sign * s.b[j].norm_sqr();
                // defocusing |a| grows, so the defect is relative to |a|²
                assert!((u - 1.0).abs() < 1e-12 * s.a[j].norm_sqr(), "{m} {kappa:?}: {u}");
            }
        }
    }
}

#[test]
fn time_shift_phases() {
    // shifting signal and window by whole steps changes b by e^{-2iξτ} only
    let f = |t: f64| Complex64::new(1.3 * (-(t * t)).exp(), 0.2 * (-(t * t)).exp());
    let h = 0.125;
    let g1 = build_grid(-4.0, 4.0, 64).unwrap();
    let g2 = build_grid(-4.0 + 8.0 * h, 4.0 + 8.0 * h, 64).unwrap();
    let tau = 8.0 * h;
    let p1 = SampledPotential::from_fn(&g1, Kappa::Focusing, f).unwrap();
    let p2 = SampledPotential::from_fn(&g2, Kappa::Focusing, |t| f(t - tau)).unwrap();
    for m in Method::ALL {
        let s1 = principal_spectrum(m, &p1, &g1, Pipeline::preferred(m)).unwrap();
        let s2 = principal_spectrum(m, &p2, &g2, Pipeline::preferred(m)).unwrap();
        for j in 0..s1.len() {
            let ph = Complex64::from_polar(1.0, -2.0 * s1.xi[j] * tau);
            assert!((s2.a[j] - s1.a[j]).norm() < 1e-11, "{m}");
            assert!((s2.b[j] - ph * s1.b[j]).norm() < 1e-11, "{m}");
        }
    }
}

#[test]
fn results_are_deterministic() {
    let grid = build_grid(-5.0, 5.0, 256).unwrap();
    let pot = SampledPotential::from_fn(&grid, Kappa::Focusing, |t| c(3.0 / t.cosh(), 0.0)).unwrap();
    for m in [Method::Erk34, Method::Irk34, Method::Scf24] {
        let a = principal_spectrum(m, &pot, &grid, Pipeline::Fast).unwrap();
        let b = principal_spectrum(m, &pot, &grid, Pipeline::Fast).unwrap();
        assert_eq!(a.b, b.b);
    }
}
