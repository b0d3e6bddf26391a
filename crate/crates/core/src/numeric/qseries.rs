//! Truncated q-expansions `sum_{n>=0} a_n e(nz)` with a tail model
//! `|a_n| <= B n^d` for `n > N`.

use std::f64::consts::PI;
use std::path::Path;

use num_complex::Complex64;

use super::approx::Approx;
use crate::error::{Error, Result};

pub const MIN_TERMS: usize = 50;

#[derive(Clone, Debug, PartialEq)]
pub struct QSeries {
    pub weight: u32,
    pub a0: Complex64,
    /// `coeffs[n - 1] = a_n`.
    pub coeffs: Vec<Complex64>,
    pub tail_b: f64,
    pub tail_d: f64,
}

/// Header fields of a coefficient fixture.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoeffHeader {
    pub label: String,
    pub weight: u32,
    pub level: u64,
    pub n: usize,
}

impl QSeries {
    /// A weight-`k` newform: Deligne gives `|a_n| <= d(n) n^{(k-1)/2}` and
    /// `d(n) <= 2 sqrt(n)`.
    pub fn newform(weight: u32, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() < MIN_TERMS {
            return Err(Error::InvalidArguments(format!(
                "need at least {MIN_TERMS} coefficients, got {}",
                coeffs.len()
            )));
        }
        Ok(QSeries {
            weight,
            a0: Complex64::new(0.0, 0.0),
            coeffs,
            tail_b: 2.0,
            tail_d: weight as f64 / 2.0,
        })
    }

    pub fn parse_coeffs(text: &str) -> Result<(CoeffHeader, QSeries)> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty coefficient file".into()))?;
        let rest = header
            .strip_prefix("# hoforms-coeffs/1")
            .ok_or_else(|| Error::Parse(format!("unknown coefficient header `{header}`")))?;
        let mut label = None;
        let mut weight = None;
        let mut level = None;
        let mut n = None;
        for field in rest.split_whitespace() {
            let (k, v) = field
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("bad header field `{field}`")))?;
            let bad = || Error::Parse(format!("bad header value `{field}`"));
            match k {
                "label" => label = Some(v.to_string()),
                "weight" => weight = Some(v.parse().map_err(|_| bad())?),
                "level" => level = Some(v.parse().map_err(|_| bad())?),
                "N" => n = Some(v.parse().map_err(|_| bad())?),
                _ => {}
            }
        }
        let missing = |f: &str| Error::Parse(format!("header lacks `{f}`"));
        let header = CoeffHeader {
            label: label.ok_or_else(|| missing("label"))?,
            weight: weight.ok_or_else(|| missing("weight"))?,
            level: level.ok_or_else(|| missing("level"))?,
            n: n.ok_or_else(|| missing("N"))?,
        };
        let coeffs = lines
            .filter(|l| !l.trim().is_empty())
            .map(|l| {
                l.trim()
                    .parse::<i64>()
                    .map(|a| Complex64::new(a as f64, 0.0))
                    .map_err(|_| Error::Parse(format!("bad coefficient `{l}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        if coeffs.len() != header.n {
            return Err(Error::CorruptFixture(format!(
                "{}: header says N={}, file has {} coefficients",
                header.label,
                header.n,
                coeffs.len()
            )));
        }
        if coeffs.first().map(|c| c.re) != Some(1.0) {
            return Err(Error::CorruptFixture(format!(
                "{}: a_1 must be 1",
                header.label
            )));
        }
        let series = QSeries::newform(header.weight, coeffs)?;
        Ok((header, series))
    }

    pub fn load(path: &Path) -> Result<(CoeffHeader, QSeries)> {
        Self::parse_coeffs(&std::fs::read_to_string(path)?)
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn truncated(&self, n: usize) -> Result<QSeries> {
        if n < MIN_TERMS || n > self.coeffs.len() {
            return Err(Error::InvalidArguments(format!(
                "truncation {n} outside {MIN_TERMS}..={}",
                self.coeffs.len()
            )));
        }
        let mut out = self.clone();
        out.coeffs.truncate(n);
        Ok(out)
    }

    pub fn is_cuspidal(&self) -> bool {
        self.a0 == Complex64::new(0.0, 0.0)
    }

    /// `sum_{n > N} B n^d r^n` with `r = e^{-2 pi y}`.
    pub fn tail_bound(&self, y: f64) -> f64 {
        let n = self.coeffs.len() as f64;
        let r = (-2.0 * PI * y).exp();
        let ratio = ((n + 2.0) / (n + 1.0)).powf(self.tail_d) * r;
        if ratio >= 1.0 {
            return f64::INFINITY;
        }
        let first = self.tail_b * (n + 1.0).powf(self.tail_d) * r.powf(n + 1.0);
        first / (1.0 - ratio)
    }

    pub fn eval(&self, z: Complex64) -> Result<Approx> {
        if !(z.im > 0.0) {
            return Err(Error::Domain(format!("Im z must be positive, got {z}")));
        }
        let q = (Complex64::new(0.0, 2.0 * PI) * z).exp();
        let mut sum = Complex64::new(0.0, 0.0);
        let mut qn = Complex64::new(1.0, 0.0);
        let mut mag = 0.0;
        for a in &self.coeffs {
            qn *= q;
            sum += a * qn;
            mag += (a * qn).norm();
        }
        // rounding: a few ulps per term on top of the tail
        let rounding = 4.0 * f64::EPSILON * (mag + self.a0.norm()) * (self.coeffs.len() as f64).sqrt();
        Ok(Approx::new(
            sum + self.a0,
            self.tail_bound(z.im) + rounding,
        ))
    }

    /// Product of two series, truncated at the shorter length.
    pub fn mul(&self, other: &QSeries) -> QSeries {
        let n = self.coeffs.len().min(other.coeffs.len());
        let a = |i: usize| if i == 0 { self.a0 } else { self.coeffs[i - 1] };
        let b = |i: usize| if i == 0 { other.a0 } else { other.coeffs[i - 1] };
        let coeffs = (1..=n)
            .map(|m| (0..=m).map(|i| a(i) * b(m - i)).sum())
            .collect();
        QSeries {
            weight: self.weight + other.weight,
            a0: self.a0 * other.a0,
            coeffs,
            tail_b: tail_prod_b(self, other, n),
            tail_d: self.tail_d + other.tail_d + 1.0,
        }
    }

    /// `z -> int_z^{i infinity} F(w) dw`, termwise
    /// `int_z^{i infinity} e(nw) dw = i e(nz) / (2 pi n)`.
    pub fn antiderivative_to_infinity(&self) -> Result<QSeries> {
        if !self.is_cuspidal() {
            return Err(Error::DivergentIntegral(
                "series with a constant term has no primitive at infinity".into(),
            ));
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, a)| a * Complex64::new(0.0, 1.0 / (2.0 * PI * (i + 1) as f64)))
            .collect();
        Ok(QSeries {
            weight: 0,
            a0: Complex64::new(0.0, 0.0),
            coeffs,
            tail_b: self.tail_b / (2.0 * PI),
            tail_d: self.tail_d - 1.0,
        })
    }

    pub fn scaled(&self, c: Complex64) -> QSeries {
        QSeries {
            weight: self.weight,
            a0: self.a0 * c,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
            tail_b: self.tail_b * c.norm(),
            tail_d: self.tail_d,
        }
    }
}

/// `|c_m| <= B1 B2 sum_{i+j=m} i^d1 j^d2` plus the constant-term cross
/// terms. The summand is unimodal, so the sum is at most the integral
/// `Beta(d1+1, d2+1) m^{d1+d2+1}` plus the peak `m^{d1+d2}`, and `m > n`.
fn tail_prod_b(a: &QSeries, b: &QSeries, n: usize) -> f64 {
    let conv = beta_bound(a.tail_d, b.tail_d) + 1.0 / (n as f64 + 1.0);
    a.tail_b * b.tail_b * conv.min(1.0) + a.a0.norm() * b.tail_b + b.a0.norm() * a.tail_b
}

/// `Beta(x+1, y+1) = x! y! / (x+y+1)!` for integral `x, y >= 0`, else the
/// trivial bound 1.
fn beta_bound(x: f64, y: f64) -> f64 {
    if x < 0.0 || y < 0.0 || x.fract() != 0.0 || y.fract() != 0.0 {
        return 1.0;
    }
    let fact = |n: u32| (1..=n).map(f64::from).product::<f64>();
    let (x, y) = (x as u32, y as u32);
    fact(x) * fact(y) / fact(x + y + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn convolution_bound_holds() {
        assert_eq!(beta_bound(1.0, 1.0), 1.0 / 6.0);
        for (x, y) in [(1.0f64, 1.0f64), (2.0, 1.0), (0.0, 3.0)] {
            for m in 2..200u32 {
                let m = m as f64;
                let sum: f64 = (1..m as u32).map(|i| (i as f64).powf(x) * (m - i as f64).powf(y)).sum();
                assert!(sum <= beta_bound(x, y) * m.powf(x + y + 1.0) + m.powf(x + y));
            }
        }
    }

    fn single(n: usize) -> QSeries {
        let mut c = vec![Complex64::new(0.0, 0.0); n];
        c[0] = Complex64::new(1.0, 0.0);
        QSeries::newform(2, c).unwrap()
    }

    #[test]
    fn one_term_series() {
        let f = single(60);
        let v = f.eval(Complex64::new(0.0, 1.0)).unwrap();
        assert!((v.value.re - (-2.0 * PI).exp()).abs() < 1e-15);
        assert!(f.eval(Complex64::new(0.3, 0.0)).is_err());
        let big = f.eval(Complex64::new(0.0, 10.0)).unwrap();
        assert!(big.abs() <= (-20.0 * PI).exp() * 1.0001);
    }

    #[test]
    fn antiderivative_closed_form() {
        let f = single(60);
        let prim = f.antiderivative_to_infinity().unwrap();
        let z = Complex64::new(0.1, 1.0);
        let got = prim.eval(z).unwrap().value;
        let e = (Complex64::new(0.0, 2.0 * PI) * z).exp();
        let want = Complex64::new(0.0, 1.0) * e / (2.0 * PI);
        assert!((got - want).norm() < 1e-16);
    }

    #[test]
    fn header_parsing() {
        let mut text = String::from("# hoforms-coeffs/1 label=x weight=2 level=11 N=50\n");
        for i in 0..50 {
            text.push_str(&format!("{}\n", if i == 0 { 1 } else { 0 }));
        }
        let (h, s) = QSeries::parse_coeffs(&text).unwrap();
        assert_eq!((h.level, h.n, s.len()), (11, 50, 50));
        let short = text.replace("N=50", "N=51");
        assert!(matches!(
            QSeries::parse_coeffs(&short),
            Err(Error::CorruptFixture(_))
        ));
        assert!(QSeries::parse_coeffs("garbage").is_err());
    }
}
