use std::f64::consts::PI;

use approx::assert_relative_eq;
use jellium::limit::{
    bergman_kernel_eval, bergman_truncation, bulk_limit_kernel, bulk_max_cdf, max_modulus_cdf_outside,
    min_modulus_cdf_disk, mittag_leffler, sample_bergman_disk, sample_bergman_norms,
};
use jellium::special::{ln_gamma, upper_incomplete_gamma};
use jellium::stats::{ks_distance, replica_rng, EmpiricalCdf};
use jellium::{BergmanKernel, BergmanRegion, CoefficientLaw, Kernel, MittagLefflerFn, Orientation};
use num_complex::Complex64;

#[test]
fn bergman_kernel_values() {
    let o = Complex64::new(0.0, 0.0);
    assert_relative_eq!(bergman_kernel_eval(1.0, BergmanRegion::Inside, o, o).unwrap().re, 1.0 / PI);
    assert!(bergman_kernel_eval(1.0, BergmanRegion::Inside, Complex64::new(1.0, 0.0), o).is_err());
    assert!(bergman_kernel_eval(1.0, BergmanRegion::Outside, Complex64::new(0.5, 0.0), Complex64::new(2.0, 0.0)).is_err());
    let k = BergmanKernel::new(1.0, BergmanRegion::Inside).unwrap();
    let z = Complex64::new(0.3, 0.4);
    let w = Complex64::new(-0.6, 0.1);
    let series: Complex64 = (0..400).map(|j| (j as f64 + 1.0) / PI * (z * w.conj()).powu(j)).sum();
    assert!((k.eval(z, w) - series).norm() < 1e-10);
}

#[test]
fn exterior_kernel_is_change_of_variables() {
    let inside = BergmanKernel::new(1.0, BergmanRegion::Inside).unwrap();
    let outside = BergmanKernel::new(1.0, BergmanRegion::Outside).unwrap();
    for (z, w) in [(Complex64::new(1.5, 0.3), Complex64::new(-2.0, 1.0)), (Complex64::new(0.0, 3.0), Complex64::new(1.1, -0.2))] {
        let dz = -z.powi(-2);
        let dw = -w.powi(-2);
        let pulled = dz * inside.eval(z.inv(), w.inv()) * dw.conj();
        assert!((outside.eval(z, w) - pulled).norm() < 1e-13 * pulled.norm());
    }
}

#[test]
fn bergman_product_cdfs() {
    assert_eq!(max_modulus_cdf_outside(1.0, 1.0), 0.0);
    assert!(max_modulus_cdf_outside(1.0, 1e9) > 1.0 - 1e-15);
    // Independent oracle: logs summed to k = 60.
    let oracle: f64 = (1..=60).map(|k| (1.0 - 4f64.powi(-k)).ln()).sum::<f64>().exp();
    assert_relative_eq!(max_modulus_cdf_outside(1.0, 2.0), oracle, max_relative = 1e-14);
    assert!((oracle - 0.68854).abs() < 5e-6);

    assert_eq!(min_modulus_cdf_disk(1.0, 0.0).unwrap(), 0.0);
    assert_relative_eq!(min_modulus_cdf_disk(1.0, 0.5).unwrap(), 1.0 - oracle, max_relative = 1e-13);
    assert!(min_modulus_cdf_disk(1.0, 1.0).is_err());
    for t in [1.01, 1.3, 2.0, 7.0] {
        let a = min_modulus_cdf_disk(1.0, 1.0 / t).unwrap();
        assert!((a - (1.0 - max_modulus_cdf_outside(1.0, t))).abs() < 1e-14);
    }
}

#[test]
fn incomplete_gamma_examples() {
    for x in [0.0, 0.3, 2.0, 40.0] {
        assert_relative_eq!(upper_incomplete_gamma(1.0, x).unwrap(), (-x as f64).exp(), max_relative = 1e-12);
    }
    for s in [0.5, 3.0, 11.5] {
        assert_relative_eq!(upper_incomplete_gamma(s, 0.0).unwrap(), ln_gamma(s).exp(), max_relative = 1e-12);
    }
    assert_relative_eq!(upper_incomplete_gamma(2.0, 1.0).unwrap(), 2.0 / std::f64::consts::E, max_relative = 1e-12);
}

#[test]
fn bulk_max_limits() {
    assert!(bulk_max_cdf(2.0, 1.0, 1e6).unwrap() > 1.0 - 1e-9);
    assert!(bulk_max_cdf(2.0, 1.0, 1e-3).unwrap() < 1e-12);
    assert_eq!(bulk_max_cdf(2.0, 1.0, 0.0).unwrap(), 0.0);
    // At α = 2, λ = 1, t = 1: ∏ Q(k, 1) with Q(k, 1) = e^{-1} Σ_{j<k} 1/j!.
    let mut prod = 1.0;
    let mut partial = 0.0;
    let mut fact = 1.0;
    for k in 1..60 {
        if k > 1 {
            fact *= (k - 1) as f64;
        }
        partial += 1.0 / fact;
        prod *= (-1.0f64).exp() * partial;
    }
    assert_relative_eq!(bulk_max_cdf(2.0, 1.0, 1.0).unwrap(), prod, max_relative = 1e-12);
}

#[test]
fn bulk_kernel_examples() {
    let k = bulk_limit_kernel(2.0, 1.0, Orientation::Origin).unwrap();
    for j in 0..20 {
        assert_relative_eq!(k.coefficient(j), 1.0 / (PI * ln_gamma(j as f64 + 1.0).exp()), max_relative = 1e-12);
    }
    let o = Complex64::new(0.0, 0.0);
    assert_relative_eq!(k.eval(o, o).re, k.coefficient(0));
    for orientation in [Orientation::Origin, Orientation::Infinity] {
        let k = bulk_limit_kernel(0.8, 2.5, orientation).unwrap();
        let z = Complex64::new(0.7, -1.2);
        let w = Complex64::new(-0.4, 0.9);
        assert!((k.eval(z, w) - k.eval(w, z).conj()).norm() < 1e-14 * k.eval(z, w).norm());
        assert!(k.diagonal(z) > 0.0);
    }
}

#[test]
fn mittag_leffler_examples() {
    // σ_k = 1/√k! at α = 2, λ = 1.
    let f = MittagLefflerFn::from_coefficients(2.0, 1.0, vec![Complex64::new(1.0, 0.0); 30]).unwrap();
    for k in 0..30 {
        assert_relative_eq!(f.scale(k), (-0.5 * ln_gamma(k as f64 + 1.0)).exp(), max_relative = 1e-12);
    }
    assert_eq!(f.eval(Complex64::new(0.0, 0.0)), Complex64::new(1.0, 0.0));
    // Σ z^k/√k! at z = 0.5.
    let direct: f64 = (0..30).map(|k| 0.5f64.powi(k) * (-0.5 * ln_gamma(k as f64 + 1.0)).exp()).sum();
    assert_relative_eq!(f.eval(Complex64::new(0.5, 0.0)).re, direct, max_relative = 1e-13);
}

#[test]
fn mittag_leffler_truncation_is_stable() {
    let law = CoefficientLaw::ComplexGaussian;
    for seed in 0..4 {
        let f = mittag_leffler(1.5, 2.0, &law, &mut replica_rng(seed, 0), 2.0).unwrap();
        let more = MittagLefflerFn::with_terms(1.5, 2.0, &law, &mut replica_rng(seed, 0), f.terms() + 20).unwrap();
        assert_eq!(&more.coefficients()[..f.terms()], f.coefficients());
        let a = f.zeros_in_disk(2.0).unwrap();
        let b = more.zeros_in_disk(2.5).unwrap();
        for z in &a {
            let best = b.iter().map(|w| (w - z).norm()).fold(f64::INFINITY, f64::min);
            assert!(best < 1e-8, "seed {seed}: {z} off by {best}");
        }
    }
}

#[test]
fn bergman_norm_samples_match_min_law() {
    let draws = 100_000;
    let mins = |k_max: usize| -> Vec<f64> {
        let mut rng = replica_rng(31, 0);
        (0..draws)
            .map(|_| {
                let r = sample_bergman_norms(1.0, BergmanRegion::Inside, k_max, &mut rng).unwrap();
                assert!(r.iter().all(|&x| x < 1.0));
                r.into_iter().fold(f64::INFINITY, f64::min)
            })
            .collect()
    };
    let a = mins(200);
    let ks = ks_distance(&a, |t| if t >= 1.0 { 1.0 } else { min_modulus_cdf_disk(1.0, t).unwrap() }).unwrap();
    assert!(ks.distance < 0.01, "{ks:?}");
    let b = EmpiricalCdf::new(mins(400)).unwrap();
    let ea = EmpiricalCdf::new(a).unwrap();
    let d = ea.values().iter().chain(b.values()).map(|&t| (ea.eval(t) - b.eval(t)).abs()).fold(0.0, f64::max);
    assert!(d < 0.01, "{d}");

    let outside = sample_bergman_norms(2.0, BergmanRegion::Outside, 50, &mut replica_rng(1, 0)).unwrap();
    assert!(outside.iter().all(|&x| x > 2.0));
}

#[test]
fn bergman_disk_zero_counts() {
    let rho: f64 = 0.7;
    let k = bergman_truncation(rho).unwrap();
    let reps = 3000;
    let counts: Vec<f64> =
        (0..reps).map(|i| sample_bergman_disk(&mut replica_rng(41, i), k, rho).unwrap().len() as f64).collect();
    let mean = counts.iter().sum::<f64>() / reps as f64;
    let var = counts.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / (reps as f64 - 1.0);
    let expected = rho * rho / (1.0 - rho * rho);
    assert!((mean - expected).abs() < 3.0 * (var / reps as f64).sqrt(), "{mean} vs {expected}");
    assert_eq!(sample_bergman_disk(&mut replica_rng(41, 0), k, 0.0).unwrap().len(), 0);
    assert!(sample_bergman_disk(&mut replica_rng(41, 0), 5, rho).is_err());
}
