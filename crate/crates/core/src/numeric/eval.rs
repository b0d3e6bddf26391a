//! Evaluation of newforms on `Gamma_0(p)` anywhere in the upper half-plane.
//!
//! Near the real axis the q-expansion converges slowly, so the point is moved
//! into the `SL_2(Z)` fundamental domain first. Writing the reducing matrix
//! as `A = gamma S T^j` with `gamma` in `Gamma_0(p)` and using the Fricke
//! involution `f(-1/u) = eta p^{-k/2} u^k f(u/p)` leaves one series
//! evaluation at a point of height at least `sqrt(3) / (2p)`.

use num_complex::Complex64;

use super::approx::Approx;
use super::group::{GroupData, Mat2};
use super::qseries::QSeries;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct GlobalForm {
    pub series: QSeries,
    pub level: i64,
    /// Fricke eigenvalue for this weight.
    pub eta: i32,
}

impl GlobalForm {
    pub fn new(series: QSeries, level: i64, eta: i32) -> Self {
        GlobalForm { series, level, eta }
    }

    /// The `j`-th (1-based) newform of the group, truncated to `n` terms.
    pub fn from_group(g: &GroupData, j: usize, n: usize) -> Result<Self> {
        let nf = g.form(j)?;
        Ok(GlobalForm::new(nf.series.truncated(n)?, g.level, nf.atkin_lehner))
    }

    pub fn weight(&self) -> u32 {
        self.series.weight
    }

    pub fn product(&self, other: &GlobalForm) -> Result<GlobalForm> {
        if self.level != other.level {
            return Err(Error::InvalidArguments("forms of different levels".into()));
        }
        Ok(GlobalForm::new(
            self.series.mul(&other.series),
            self.level,
            self.eta * other.eta,
        ))
    }

    pub fn eval(&self, z: Complex64) -> Result<Approx> {
        if !(z.im > 0.0) || !z.re.is_finite() {
            return Err(Error::Domain(format!("Im z must be positive, got {z}")));
        }
        let (m, w) = reduce(z)?;
        let a = m.inv();
        let k = self.weight() as i32;
        let factor = a.j(w).powi(k);
        let p = self.level;
        let (point, scale) = if a.c % p == 0 {
            (w, factor)
        } else {
            let c = a.c.rem_euclid(p);
            let j = (a.d.rem_euclid(p) * inverse_mod(c, p)?).rem_euclid(p);
            let pf = p as f64;
            (
                (w + j as f64) / pf,
                factor * (self.eta as f64) * pf.powf(-(k as f64) / 2.0),
            )
        };
        let v = if z.im >= point.im {
            self.series.eval(z)?
        } else {
            self.series.eval(point)?.scale(scale)
        };
        Ok(Approx::new(v.value, v.err + roundoff(z, w, k, v.value.norm())))
    }

    /// `(F |_k gamma)(z) = F(gamma z) (cz + d)^{-k}`.
    pub fn slash(&self, gamma: &Mat2, z: Complex64) -> Result<Approx> {
        let v = self.eval(gamma.act(z))?;
        Ok(v.scale(gamma.j(z).powi(-(self.weight() as i32))))
    }
}

/// First-order error from representing `z` in floating point. A shift of
/// `eps |z|` moves `w = Mz` by `eps |z| Im w / Im z`, which changes `F(w)` by
/// about `2 pi Im w` times that and the automorphy factor by `k` times that.
fn roundoff(z: Complex64, w: Complex64, k: i32, size: f64) -> f64 {
    let shift = f64::EPSILON * (1.0 + z.norm()) * (w.im / z.im).max(1.0);
    (2.0 * std::f64::consts::PI * w.im + k as f64 + 4.0) * shift * size
}

/// Returns `(M, Mz)` with `M` in `SL_2(Z)` and `Mz` in the standard
/// fundamental domain.
pub fn reduce(z: Complex64) -> Result<(Mat2, Complex64)> {
    let mut m = Mat2::IDENTITY;
    let mut w = z;
    for _ in 0..10_000 {
        let n = w.re.round();
        if n != 0.0 {
            let t = Mat2::new(1, -(n as i64), 0, 1);
            m = t.mul(&m);
            w = Complex64::new(w.re - n, w.im);
        }
        if w.norm_sqr() < 1.0 - 1e-15 {
            m = Mat2::S.mul(&m);
            w = -1.0 / w;
        } else {
            return Ok((m, w));
        }
    }
    Err(Error::Precision(format!("reduction of {z} did not terminate")))
}

fn inverse_mod(a: i64, p: i64) -> Result<i64> {
    let (mut r0, mut r1) = (a.rem_euclid(p), p);
    let (mut s0, mut s1) = (1i64, 0i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 != 1 {
        return Err(Error::InvalidArguments(format!("{a} is not invertible mod {p}")));
    }
    Ok(s0.rem_euclid(p))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_lands_in_domain() {
        for z in [
            Complex64::new(0.3, 0.01),
            Complex64::new(-7.4, 0.002),
            Complex64::new(0.0, 1.0),
        ] {
            let (m, w) = reduce(z).unwrap();
            assert_eq!(m.det(), 1);
            assert!(w.re.abs() <= 0.5 + 1e-12 && w.norm() >= 1.0 - 1e-12);
            assert!((m.act(z) - w).norm() < 1e-9 * (1.0 + w.norm()));
        }
    }

    #[test]
    fn modular_inverse() {
        assert_eq!(inverse_mod(3, 11).unwrap(), 4);
        assert!(inverse_mod(0, 11).is_err());
    }
}
