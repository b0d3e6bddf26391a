//! Complex values carrying an absolute error bound.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Approx {
    pub value: Complex64,
    /// Bound on `|value - exact|`.
    pub err: f64,
}

impl Approx {
    pub fn new(value: Complex64, err: f64) -> Self {
        Approx { value, err }
    }

    pub fn exact(value: Complex64) -> Self {
        Approx { value, err: 0.0 }
    }

    pub fn zero() -> Self {
        Self::exact(Complex64::new(0.0, 0.0))
    }

    pub fn one() -> Self {
        Self::exact(Complex64::new(1.0, 0.0))
    }

    pub fn conj(self) -> Self {
        Approx::new(self.value.conj(), self.err)
    }

    pub fn scale(self, c: Complex64) -> Self {
        Approx::new(self.value * c, self.err * c.norm())
    }

    pub fn abs(self) -> f64 {
        self.value.norm()
    }

    /// `|self - other|` together with the combined bound.
    pub fn distance(self, other: Approx) -> (f64, f64) {
        ((self.value - other.value).norm(), self.err + other.err)
    }
}

impl Add for Approx {
    type Output = Approx;
    fn add(self, o: Approx) -> Approx {
        Approx::new(self.value + o.value, self.err + o.err)
    }
}

impl Sub for Approx {
    type Output = Approx;
    fn sub(self, o: Approx) -> Approx {
        Approx::new(self.value - o.value, self.err + o.err)
    }
}

impl Neg for Approx {
    type Output = Approx;
    fn neg(self) -> Approx {
        Approx::new(-self.value, self.err)
    }
}

impl Mul for Approx {
    type Output = Approx;
    fn mul(self, o: Approx) -> Approx {
        let err = self.value.norm() * o.err + o.value.norm() * self.err + self.err * o.err;
        Approx::new(self.value * o.value, err)
    }
}

impl std::iter::Sum for Approx {
    fn sum<I: Iterator<Item = Approx>>(iter: I) -> Approx {
        iter.fold(Approx::zero(), |a, b| a + b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_bound_covers_perturbation() {
        let a = Approx::new(Complex64::new(2.0, 1.0), 0.1);
        let b = Approx::new(Complex64::new(-1.0, 3.0), 0.2);
        let p = a * b;
        let worst = (a.value + 0.1) * (b.value + Complex64::new(0.0, 0.2));
        assert!((worst - p.value).norm() <= p.err + 1e-12);
    }
}
