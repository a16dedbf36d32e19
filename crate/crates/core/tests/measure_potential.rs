use approx::assert_relative_eq;
use jellium::quad::{integrate, Tolerance};
use jellium::{PowerLaw, RadialMeasure, RadialPotential};

fn builtins() -> Vec<RadialMeasure> {
    vec![
        RadialMeasure::circle(1.0).unwrap(),
        RadialMeasure::circle(2.5).unwrap(),
        RadialMeasure::uniform_disk(1.0).unwrap(),
        RadialMeasure::uniform_disk(0.5).unwrap(),
        RadialMeasure::fubini_study(),
        RadialMeasure::pareto_tail(2.0, 1.0).unwrap(),
        RadialMeasure::power_origin(2.0, 1.0).unwrap(),
        RadialMeasure::power_origin(0.7, 3.0).unwrap(),
    ]
}

fn log_grid() -> Vec<f64> {
    (0..=80).map(|i| 10f64.powf(-2.0 + 4.0 * i as f64 / 80.0)).collect()
}

#[test]
fn fubini_study_mass_matches_density_quadrature() {
    let fs = RadialMeasure::fubini_study();
    for r in [0.1, 0.5, 1.0, 3.0, 20.0] {
        let quad = integrate(|s| 2.0 * s / (1.0 + s * s).powi(2), 0.0, r, Tolerance::new(1e-14, 1e-12)).unwrap();
        assert_relative_eq!(fs.mass_in_disk(r), quad.value, max_relative = 1e-10);
        assert_relative_eq!(fs.mass_in_disk(r), r * r / (1.0 + r * r), max_relative = 1e-12);
    }
}

#[test]
fn circle_excludes_its_own_radius() {
    let c = RadialMeasure::circle(1.0).unwrap();
    assert_eq!(c.mass_in_disk(0.5), 0.0);
    assert_eq!(c.mass_in_disk(1.0), 0.0);
    assert_eq!(c.mass_in_closed_disk(1.0), 1.0);
    assert_eq!(RadialMeasure::uniform_disk(1.0).unwrap().mass_in_disk(0.5), 0.25);
}

#[test]
fn inverted_uniform_disk_mass() {
    let m = RadialMeasure::uniform_disk(1.0).unwrap().invert();
    for r in [0.2, 0.9, 1.0] {
        assert_eq!(m.mass_in_disk(r), 0.0);
    }
    for r in [1.5, 2.0, 10.0] {
        assert_relative_eq!(m.mass_in_disk(r), 1.0 - r.powi(-2), max_relative = 1e-12);
    }
}

#[test]
fn inversion_moves_tail_exponent_to_origin() {
    let m = RadialMeasure::pareto_tail(1.5, 2.0).unwrap().invert();
    assert_eq!(m.origin_exponent(), Some(PowerLaw::new(1.5, 2.0)));
    assert_eq!(RadialMeasure::circle(1.0).unwrap().invert(), RadialMeasure::circle(1.0).unwrap());
}

#[test]
fn fubini_study_exponents() {
    let fs = RadialMeasure::fubini_study();
    assert_eq!(fs.origin_exponent(), Some(PowerLaw::new(2.0, 1.0)));
    assert_eq!(fs.tail_exponent(), Some(PowerLaw::new(2.0, 1.0)));
}

#[test]
fn scaling_identities() {
    let c2 = RadialMeasure::circle(1.0).unwrap().scale(2.0).unwrap();
    let direct = RadialMeasure::circle(2.0).unwrap();
    for m in builtins() {
        let same = m.scale(1.0).unwrap();
        for r in log_grid() {
            assert_eq!(same.mass_in_disk(r), m.mass_in_disk(r));
            assert_eq!(c2.mass_in_disk(r), direct.mass_in_disk(r));
        }
    }
}

#[test]
fn scaled_potential_differs_by_a_constant() {
    for m in builtins() {
        let s = 3.0;
        let v = RadialPotential::new(m.clone()).unwrap();
        let vs = RadialPotential::new(m.scale(s).unwrap()).unwrap();
        let c = vs.eval(1.0) - v.eval(1.0 / s);
        for r in log_grid() {
            assert!((vs.eval(r) - v.eval(r / s) - c).abs() < 1e-9, "{m} at r = {r}");
        }
        assert!((c + v.eval(1.0 / s)).abs() < 1e-12);
    }
}

#[test]
fn potential_table_values() {
    let circle = RadialPotential::new(RadialMeasure::circle(1.0).unwrap()).unwrap();
    let disk = RadialPotential::new(RadialMeasure::uniform_disk(1.0).unwrap()).unwrap();
    let fs = RadialPotential::new(RadialMeasure::fubini_study()).unwrap();
    for r in log_grid() {
        assert!((circle.eval(r) - r.ln().max(0.0)).abs() < 1e-12);
        let d = if r < 1.0 { (r * r - 1.0) / 2.0 } else { r.ln() };
        assert!((disk.eval(r) - d).abs() < 1e-10);
        let f = 0.5 * (1.0 + r * r).ln() - 0.5 * 2f64.ln();
        assert!((fs.eval(r) - f).abs() < 1e-10);
    }
}

#[test]
fn derivative_of_potential_is_mass() {
    for m in builtins() {
        let v = RadialPotential::new(m.clone()).unwrap();
        let kinks: Vec<f64> = m.log_breakpoints().iter().map(|u| u.exp()).collect();
        for r in log_grid() {
            let h = 1e-5;
            if kinks.iter().any(|k| (r / k - 1.0).abs() < 2.0 * h) {
                continue;
            }
            let d = r * (v.eval(r * (1.0 + h)) - v.eval(r * (1.0 - h))) / (2.0 * h * r);
            // Skip radii straddling a jump of the mass function.
            if (m.mass_in_disk(r * (1.0 + h)) - m.mass_in_disk(r * (1.0 - h))).abs() > 1e-3 {
                continue;
            }
            assert!((d - m.mass_in_disk(r)).abs() < 1e-6, "{m} at r = {r}: {d}");
        }
    }
}

#[test]
fn potential_is_positive_beyond_inner_support() {
    let m = RadialMeasure::circle(2.0).unwrap();
    let v = RadialPotential::new(m.clone()).unwrap();
    assert!(m.support_inner() >= 1.0);
    for r in [2.01, 3.0, 50.0] {
        assert!(v.eval(r) > 0.0);
    }
}

#[test]
fn potential_grows_like_log() {
    for m in [RadialMeasure::circle(1.0).unwrap(), RadialMeasure::uniform_disk(2.0).unwrap()] {
        let v = RadialPotential::new(m).unwrap();
        let gap = |r: f64| (v.eval(2.0 * r) - v.eval(r) - 2f64.ln()).abs();
        assert!(gap(1e3) < 1e-10);
        assert!(gap(1e6) <= gap(1e3) + 1e-12);
    }
}

#[test]
fn inverted_potential_identity() {
    for m in builtins() {
        let v = RadialPotential::new(m.clone()).unwrap();
        let vi = RadialPotential::new(m.invert()).unwrap();
        let diff = |r: f64| vi.eval(r) - (v.eval(1.0 / r) + r.ln());
        let c = diff(1.0);
        for r in log_grid() {
            assert!((diff(r) - c).abs() < 1e-9, "{m} at r = {r}");
        }
    }
}

#[test]
fn measure_json_round_trip() {
    for m in builtins() {
        let text = m.to_string();
        assert_eq!(RadialMeasure::parse(&text).unwrap(), m);
    }
    let table = r#"{"atoms":[{"r":0.5,"w":0.5}],"density_table":[[1.0,0.0],[2.0,1.0]]}"#;
    let m = RadialMeasure::parse(table).unwrap();
    assert_eq!(m.mass_in_disk(0.5), 0.0);
    assert_relative_eq!(m.mass_in_disk(0.6), 0.5);
    assert_relative_eq!(m.mass_in_disk(3.0), 1.0, max_relative = 1e-12);
    assert!(RadialMeasure::parse(r#"{"name":"circle","params":{"R":-1}}"#).is_err());
}
