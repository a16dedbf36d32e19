use jellium::stats::{
    campaign_values, default_kernel_grid, extremal_campaign, kernel_sup_diff, ks_distance, replica_rng, EmpiricalCdf,
};
use jellium::{Jellium, Kernel, Model, PreparedModel, RadialMeasure, Statistic};
use num_complex::Complex64;
use rand::Rng;

fn band_hits(n: usize, reps: u64, seed: u64) -> usize {
    (0..reps)
        .filter(|&rep| {
            let mut rng = replica_rng(seed, rep);
            let x: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
            ks_distance(&x, |t| t.clamp(0.0, 1.0)).unwrap().within_band()
        })
        .count()
}

#[test]
fn dkw_band_calibration() {
    // The band has asymptotic coverage 0.9506, so a hit count out of 100 is
    // Binomial(100, 0.95): at least 90 holds with probability 0.99.
    let hits = band_hits(10_000, 100, 2026);
    assert!(hits >= 90, "{hits} of 100 within band");
    let hits = band_hits(1000, 2000, 2027);
    assert!((1880..=1920).contains(&hits), "{hits} of 2000 within band");
}

#[test]
fn ks_hand_cases() {
    // Point mass at 0.5 against its own CDF: the formula evaluates F at the
    // jump, so the first order statistic contributes F(x_(1)) - 0 = 1.
    let r = ks_distance(&[0.5, 0.5], |t| if t >= 0.5 { 1.0 } else { 0.0 }).unwrap();
    assert_eq!(r.distance, 1.0);
    assert_eq!(r.n, 2);
    let r = ks_distance(&[-10.0, -5.0], |t| t.clamp(0.0, 1.0)).unwrap();
    assert_eq!(r.distance, 1.0);
    assert!((r.band - 1.36 / 2f64.sqrt()).abs() < 1e-15);
}

struct Scaled<'a, K: Kernel>(&'a K, f64);

impl<K: Kernel> Kernel for Scaled<'_, K> {
    fn eval(&self, z: Complex64, w: Complex64) -> Complex64 {
        self.0.eval(z, w) * self.1
    }
}

#[test]
fn kernel_sup_diff_trivial_cases() {
    let k = Jellium::new(&RadialMeasure::uniform_disk(1.0).unwrap(), 10).unwrap().kernel();
    let grid = default_kernel_grid(0.7);
    assert_eq!(grid.len(), 41 * 41 + 200);
    assert_eq!(kernel_sup_diff(&k, &k, &grid).absolute, 0.0);
    let diag: Vec<(Complex64, Complex64)> = (0..50).map(|i| Complex64::new(i as f64 / 25.0, 0.0)).map(|z| (z, z)).collect();
    let d = kernel_sup_diff(&k, &Scaled(&k, 2.0), &diag);
    let max_k = diag.iter().map(|&(z, _)| k.diagonal(z)).fold(0.0, f64::max);
    assert!((d.absolute - max_k).abs() < 1e-14 * max_k);
    assert!((d.relative - 0.5).abs() < 1e-14);
}

#[test]
fn single_particle_median() {
    let model = Model::Jellium { measure: RadialMeasure::circle(1.0).unwrap(), n: 1 };
    let e = extremal_campaign(&model, Statistic::MaxMod, 20_000, 5).unwrap();
    assert_eq!(e.len(), 20_000);
    // 1 - t^{-2}/2 = 1/2 at t = 1; the sample median's standard error is
    // about 1/(2 f(1) √N) with density f(1) = 1.
    assert!((e.quantile(0.5).unwrap() - 1.0).abs() < 0.015);
}

#[test]
fn campaigns_are_deterministic_and_consistent() {
    let model = Model::Jellium { measure: RadialMeasure::fubini_study(), n: 25 };
    let prepared = PreparedModel::new(&model).unwrap();
    let a = campaign_values(&prepared, Statistic::MaxMod, 300, 11).unwrap();
    let b = campaign_values(&prepared, Statistic::MaxMod, 300, 11).unwrap();
    assert_eq!(a, b);
    let inv = campaign_values(&prepared, Statistic::InverseMax, 300, 11).unwrap();
    for (x, y) in a.iter().zip(&inv) {
        assert_eq!(1.0 / x, *y);
    }
    assert!(campaign_values(&prepared, Statistic::MaxMod, 0, 11).is_err());

    let e1 = extremal_campaign(&model, Statistic::MinMod, 100, 3).unwrap();
    let e2 = extremal_campaign(&model, Statistic::MinMod, 100, 3).unwrap();
    assert_eq!(e1, e2);
}

#[test]
fn ks_invariant_under_inversion() {
    let model = Model::Jellium { measure: RadialMeasure::circle(1.0).unwrap(), n: 10 };
    let jellium = Jellium::new(&RadialMeasure::circle(1.0).unwrap(), 10).unwrap();
    let prepared = PreparedModel::new(&model).unwrap();
    let max = campaign_values(&prepared, Statistic::MaxMod, 500, 1).unwrap();
    let inv: Vec<f64> = max.iter().map(|x| 1.0 / x).collect();
    let f = |t: f64| jellium.extremal_cdf(t, jellium::Extremal::Max);
    let a = ks_distance(&max, f).unwrap();
    // t ↦ 1/t is decreasing, so the inverse sample has CDF 1 - F(1/t).
    let b = ks_distance(&inv, |s| 1.0 - f(1.0 / s)).unwrap();
    assert!((a.distance - b.distance).abs() < 1e-12);
    assert_eq!(EmpiricalCdf::new(inv).unwrap().len(), 500);
}
