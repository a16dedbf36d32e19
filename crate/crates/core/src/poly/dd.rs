//! Compensated (double-double) complex Horner evaluation.

use num_complex::Complex64;

#[derive(Clone, Copy, Debug, Default)]
struct Dd {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    #[inline]
    fn from(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    #[inline]
    fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let e = e + self.lo + o.lo;
        let (hi, lo) = two_sum(s, e);
        Dd { hi, lo }
    }

    #[inline]
    fn mul_f64(self, b: f64) -> Dd {
        let (p, e) = two_prod(self.hi, b);
        let e = e + self.lo * b;
        let (hi, lo) = two_sum(p, e);
        Dd { hi, lo }
    }

    #[inline]
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

/// `Σ c_k x^k` with double-double accumulation, rounded to `f64` at the end.
pub(crate) fn horner(coeffs: &[Complex64], x: Complex64) -> Complex64 {
    let mut re = Dd::default();
    let mut im = Dd::default();
    for c in coeffs.iter().rev() {
        let nre = re.mul_f64(x.re).add(im.mul_f64(x.im).neg()).add(Dd::from(c.re));
        let nim = re.mul_f64(x.im).add(im.mul_f64(x.re)).add(Dd::from(c.im));
        re = nre;
        im = nim;
    }
    Complex64::new(re.hi + re.lo, im.hi + im.lo)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cancellation_is_resolved() {
        // (x - 1)^3 expanded, evaluated just off the triple root.
        let c = [
            Complex64::new(-1.0, 0.0),
            Complex64::new(3.0, 0.0),
            Complex64::new(-3.0, 0.0),
            Complex64::new(1.0, 0.0),
        ];
        let x = Complex64::new(1.0 + 1e-6, 0.0);
        let v = horner(&c, x);
        let d = x.re - 1.0;
        assert!((v.re - d.powi(3)).abs() < 1e-27, "{}", v.re);
    }
}
