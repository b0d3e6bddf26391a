//! Modular symbols `<f, gamma> = int_{z0}^{gamma z0} f` and period
//! polynomials `psi_F(gamma) = int_i^{gamma^{-1} i} F(z) (z - X)^{k-2} dz`.

use num_complex::Complex64;
use serde::Serialize;

use super::approx::Approx;
use super::eval::GlobalForm;
use super::group::{GroupData, Mat2};
use super::quad::{integrate, GaussLegendre};
use crate::error::{Error, Result};

/// Quadrature settings shared by the numeric checks.
#[derive(Clone, Debug)]
pub struct NumericConfig {
    /// Number of q-expansion coefficients.
    pub n: usize,
    /// Gauss-Legendre degree per panel.
    pub degree: usize,
    /// Target residual.
    pub tol: f64,
}

impl Default for NumericConfig {
    fn default() -> Self {
        NumericConfig {
            n: 200,
            degree: 64,
            tol: 1e-8,
        }
    }
}

impl NumericConfig {
    pub fn rule(&self) -> GaussLegendre {
        GaussLegendre::new(self.degree)
    }

    /// Tolerance handed to the adaptive integrator.
    pub fn quad_tol(&self) -> f64 {
        self.tol * 1e-3
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ModularSymbol {
    /// Quadrature from `z0 = i`.
    pub value: Approx,
    /// Quadrature from `z0 = 2i`.
    pub recheck: Approx,
}

impl ModularSymbol {
    pub fn base_point_gap(&self) -> f64 {
        self.value.distance(self.recheck).0
    }
}

/// `int_{z0}^{gamma z0} f` by quadrature along the waypoint path.
pub fn symbol_at(
    f: &GlobalForm,
    gamma: &Mat2,
    z0: Complex64,
    gl: &GaussLegendre,
    tol: f64,
) -> Result<Approx> {
    if gamma.det() != 1 {
        return Err(Error::NotInGroup(format!("{gamma} has determinant {}", gamma.det())));
    }
    let fe = |z: Complex64| f.eval(z);
    integrate(&fe, gl, z0, gamma.act(z0), tol)
}

pub fn modular_symbol(
    f: &GlobalForm,
    gamma: &Mat2,
    g: &GroupData,
    cfg: &NumericConfig,
) -> Result<ModularSymbol> {
    g.check_member(gamma)?;
    let gl = cfg.rule();
    Ok(ModularSymbol {
        value: symbol_at(f, gamma, Complex64::new(0.0, 1.0), &gl, cfg.quad_tol())?,
        recheck: symbol_at(f, gamma, Complex64::new(0.0, 2.0), &gl, cfg.quad_tol())?,
    })
}

/// The same symbol from the series primitive alone: with `c > 0` the points
/// `(-d + i)/c` and `gamma` of it, `(a + i)/c`, both have height `1/c`.
pub fn modular_symbol_series(f: &GlobalForm, gamma: &Mat2) -> Result<Approx> {
    if gamma.det() != 1 {
        return Err(Error::NotInGroup(format!("{gamma} has determinant {}", gamma.det())));
    }
    if gamma.c == 0 {
        return Ok(Approx::zero());
    }
    let m = if gamma.c < 0 { gamma.neg() } else { *gamma };
    let c = m.c as f64;
    let x = Complex64::new(-m.d as f64 / c, 1.0 / c);
    let y = Complex64::new(m.a as f64 / c, 1.0 / c);
    let prim = f.series.antiderivative_to_infinity()?;
    // int_x^y f = Phi(x) - Phi(y) with Phi(z) = int_z^{i infinity} f
    Ok(prim.eval(x)? - prim.eval(y)?)
}

/// Coefficients `c_0, ..., c_{k-2}` in the monomial basis of `X`.
#[derive(Clone, Debug, Serialize)]
pub struct PeriodPolynomial {
    pub weight: u32,
    #[serde(skip)]
    pub coeffs: Vec<Approx>,
}

impl PeriodPolynomial {
    pub fn values(&self) -> Vec<Complex64> {
        self.coeffs.iter().map(|a| a.value).collect()
    }

    pub fn err(&self) -> f64 {
        self.coeffs.iter().map(|a| a.err).fold(0.0, f64::max)
    }

    /// `(P |_{2-k} delta)(X) = (cX + d)^{k-2} P(delta X)`.
    pub fn slash(&self, delta: &Mat2) -> PeriodPolynomial {
        let n = self.coeffs.len() - 1;
        let mut out = vec![Approx::zero(); n + 1];
        let lin = |p: f64, q: f64| vec![Complex64::new(q, 0.0), Complex64::new(p, 0.0)];
        for (j, cj) in self.coeffs.iter().enumerate() {
            // (aX + b)^j (cX + d)^{n-j}
            let mut poly = vec![Complex64::new(1.0, 0.0)];
            for _ in 0..j {
                poly = poly_mul(&poly, &lin(delta.a as f64, delta.b as f64));
            }
            for _ in j..n {
                poly = poly_mul(&poly, &lin(delta.c as f64, delta.d as f64));
            }
            for (i, p) in poly.iter().enumerate() {
                out[i] = out[i] + cj.scale(*p);
            }
        }
        PeriodPolynomial {
            weight: self.weight,
            coeffs: out,
        }
    }

    pub fn sub(&self, o: &PeriodPolynomial) -> PeriodPolynomial {
        PeriodPolynomial {
            weight: self.weight,
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| *a - *b).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|a| a.abs()).fold(0.0, f64::max)
    }
}

fn poly_mul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `psi_F(gamma)` for a weight-`k` form `F`.
pub fn period_polynomial(
    f: &GlobalForm,
    gamma: &Mat2,
    g: &GroupData,
    cfg: &NumericConfig,
) -> Result<PeriodPolynomial> {
    g.check_member(gamma)?;
    let k = f.weight();
    if k < 2 || !f.series.is_cuspidal() {
        return Err(Error::InvalidArguments(format!(
            "period polynomial needs a cusp form of weight >= 2, got weight {k}"
        )));
    }
    let n = k - 2;
    let gl = cfg.rule();
    let i = Complex64::new(0.0, 1.0);
    // n is even, so -delta gives the same integrand as delta
    let d = gamma.inv();
    let d = if d.c < 0 { d.neg() } else { d };
    let end = d.act(i);
    let (u0, mid) = if d.c != 0 && 1.0 / (d.c as f64) > end.im {
        let c = d.c as f64;
        (
            Complex64::new(-d.d as f64 / c, 1.0 / c),
            Complex64::new(d.a as f64 / c, 1.0 / c),
        )
    } else {
        (i, end)
    };
    let (a, b, c, dd) = (d.a as f64, d.b as f64, d.c as f64, d.d as f64);
    let coeffs = (0..=n)
        .map(|j| {
            // coefficient of X^j in (z - X)^n is C(n, j) (-1)^j z^{n-j}
            let s = binomial(n, j) * if j % 2 == 0 { 1.0 } else { -1.0 };
            let near = |z: Complex64| Ok(f.eval(z)?.scale(z.powu(n - j) * s));
            let first = integrate(&near, &gl, i, mid, cfg.quad_tol() / 2.0)?;
            if u0 == i {
                return Ok(first);
            }
            // the rest is the image of [u0, i] under delta, where
            // F(z) (z - X)^n dz = F(u) ((au + b) - X(cu + d))^n du
            let pulled = |u: Complex64| {
                let w = (a * u + b).powu(n - j) * (c * u + dd).powu(j);
                Ok(f.eval(u)?.scale(w * s))
            };
            Ok(first + integrate(&pulled, &gl, u0, i, cfg.quad_tol() / 2.0)?)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PeriodPolynomial { weight: k, coeffs })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slash_by_identity_and_translation() {
        let p = PeriodPolynomial {
            weight: 4,
            coeffs: vec![
                Approx::exact(Complex64::new(1.0, 0.0)),
                Approx::exact(Complex64::new(2.0, 0.0)),
                Approx::exact(Complex64::new(3.0, 0.0)),
            ],
        };
        assert_eq!(p.slash(&Mat2::IDENTITY).values(), p.values());
        // P(X + 1) = 1 + 2(X+1) + 3(X+1)^2 = 6 + 8X + 3X^2
        let t = p.slash(&Mat2::T).values();
        assert_eq!(t, vec![
            Complex64::new(6.0, 0.0),
            Complex64::new(8.0, 0.0),
            Complex64::new(3.0, 0.0)
        ]);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), 6.0);
        assert_eq!(binomial(2, 0), 1.0);
    }
}
