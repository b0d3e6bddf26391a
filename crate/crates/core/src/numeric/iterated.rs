//! Iterated integrals `I_z^a(i_1, ..., i_t) = int_{z < t_1 < ... < t_t < a}
//! f_{i_1}(t_1) ... f_{i_t}(t_t)`, ordered along the path from `z` to `a`.
//!
//! Towards `infinity` they are q-series built by alternating products and
//! termwise antiderivatives. Towards the cusp `0` the Fricke involution
//! `W: z -> -1/(pz)` gives `int_z^0 f = eta int_{Wz}^{infinity} f`, and the
//! substitution runs through every level of the nesting. When `Wz` lies
//! below the fixed point `i/sqrt(p)` of `W` the path is split there first.

use num_complex::Complex64;

use super::approx::Approx;
use super::eval::GlobalForm;
use super::group::GroupData;
use super::qseries::QSeries;
use super::quad::{legendre_all, GaussLegendre};
use crate::error::{Error, Result};

pub const MAX_DEPTH: usize = 4;

/// Cusps of `Gamma_0(p)` reachable by the kernel.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CuspPoint {
    Infinity,
    Zero,
}

impl CuspPoint {
    pub fn parse(label: &str) -> Result<Self> {
        match label {
            "inf" => Ok(CuspPoint::Infinity),
            "0" => Ok(CuspPoint::Zero),
            _ => Err(Error::InvalidArguments(format!("unsupported cusp `{label}`"))),
        }
    }
}

/// A path endpoint: a point of the upper half-plane or a cusp.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Endpoint {
    Point(Complex64),
    Cusp(CuspPoint),
}

/// The weight-2 newforms of a prime-level group.
#[derive(Clone, Debug)]
pub struct Kernel {
    pub level: i64,
    pub forms: Vec<GlobalForm>,
}

impl Kernel {
    pub fn new(g: &GroupData, n: usize) -> Result<Self> {
        let forms = (1..=g.forms.len())
            .map(|j| GlobalForm::from_group(g, j, n))
            .collect::<Result<Vec<_>>>()?;
        Ok(Kernel {
            level: g.level,
            forms,
        })
    }

    pub fn form(&self, j: usize) -> Result<&GlobalForm> {
        self.forms
            .get(j.wrapping_sub(1))
            .ok_or_else(|| Error::InvalidArguments(format!("no form f{j}")))
    }

    /// `z -> I_z^{infinity}(word)` as a q-series.
    pub fn series_to_infinity(&self, word: &[usize]) -> Result<QSeries> {
        check_depth(word)?;
        let (last, rest) = word
            .split_last()
            .ok_or_else(|| Error::InvalidArguments("empty word has no series".into()))?;
        let mut g = self.form(*last)?.series.antiderivative_to_infinity()?;
        for &j in rest.iter().rev() {
            g = self.form(j)?.series.mul(&g).antiderivative_to_infinity()?;
        }
        Ok(g)
    }

    fn fricke(&self, z: Complex64) -> Complex64 {
        -1.0 / (z * self.level as f64)
    }

    fn eta_product(&self, word: &[usize]) -> Result<f64> {
        word.iter()
            .map(|&j| Ok(self.form(j)?.eta as f64))
            .product()
    }

    /// `I_z^a(word)`; the empty word gives 1.
    pub fn to_cusp(&self, word: &[usize], z: Complex64, cusp: CuspPoint) -> Result<Approx> {
        if word.is_empty() {
            return Ok(Approx::one());
        }
        if !(z.im > 0.0) {
            return Err(Error::Domain(format!("Im z must be positive, got {z}")));
        }
        match cusp {
            CuspPoint::Infinity => self.series_to_infinity(word)?.eval(z),
            CuspPoint::Zero => {
                let z0 = self.cusp_base_point();
                if self.fricke(z).im >= z0.im {
                    return self.to_zero_direct(word, z);
                }
                // Wz is lower than z0: split the path at z0
                (0..=word.len())
                    .map(|r| {
                        Ok(self.point_to_point(&word[..r], z, z0)?
                            * self.to_zero_direct(&word[r..], z0)?)
                    })
                    .sum()
            }
        }
    }

    fn to_zero_direct(&self, word: &[usize], z: Complex64) -> Result<Approx> {
        if word.is_empty() {
            return Ok(Approx::one());
        }
        let eta = self.eta_product(word)?;
        Ok(self
            .series_to_infinity(word)?
            .eval(self.fricke(z))?
            .scale(Complex64::new(eta, 0.0)))
    }

    /// Base point for paths between cusps: the fixed point of `W`.
    pub fn cusp_base_point(&self) -> Complex64 {
        Complex64::new(0.0, 1.0 / (self.level as f64).sqrt())
    }

    /// `I_x^y(word)` for arbitrary endpoints, by Chen composition through the
    /// base point. Reversing a path maps `I_y^x(w)` to
    /// `(-1)^{|w|} I_x^y(reverse w)`.
    pub fn between(&self, word: &[usize], from: Endpoint, to: Endpoint) -> Result<Approx> {
        check_depth(word)?;
        if from == to {
            return Ok(if word.is_empty() { Approx::one() } else { Approx::zero() });
        }
        let z0 = self.cusp_base_point();
        let from_base = |u: &[usize]| -> Result<Approx> {
            // I_{z0}^{to}(u)
            match to {
                Endpoint::Cusp(c) => self.to_cusp(u, z0, c),
                Endpoint::Point(p) => self.point_to_point(u, z0, p),
            }
        };
        let to_base = |u: &[usize]| -> Result<Approx> {
            // I_{from}^{z0}(u)
            match from {
                Endpoint::Point(p) => self.point_to_point(u, p, z0),
                Endpoint::Cusp(c) => {
                    let rev: Vec<usize> = u.iter().rev().copied().collect();
                    let v = self.to_cusp(&rev, z0, c)?;
                    Ok(if u.len() % 2 == 1 { -v } else { v })
                }
            }
        };
        (0..=word.len())
            .map(|r| Ok(to_base(&word[..r])? * from_base(&word[r..])?))
            .sum()
    }

    /// `I_x^y(word)` between two points, via `infinity`:
    /// `I_x^y(w) = sum_{w = uv} I_x^inf(u) (-1)^{|v|} I_y^inf(reverse v)`.
    pub fn point_to_point(&self, word: &[usize], x: Complex64, y: Complex64) -> Result<Approx> {
        check_depth(word)?;
        (0..=word.len())
            .map(|r| {
                let head = self.to_cusp(&word[..r], x, CuspPoint::Infinity)?;
                let tail_rev: Vec<usize> = word[r..].iter().rev().copied().collect();
                let tail = self.to_cusp(&tail_rev, y, CuspPoint::Infinity)?;
                let tail = if (word.len() - r) % 2 == 1 { -tail } else { tail };
                Ok(head * tail)
            })
            .sum()
    }

    /// `F^a_{i_1..i_t}(z) = f_{i_1}(z) I_z^a(i_2, ..., i_t)`.
    pub fn f_function(&self, word: &[usize], z: Complex64, cusp: CuspPoint) -> Result<Approx> {
        check_depth(word)?;
        let (first, rest) = word
            .split_first()
            .ok_or_else(|| Error::InvalidArguments("empty word".into()))?;
        Ok(self.form(*first)?.eval(z)? * self.to_cusp(rest, z, cusp)?)
    }

    /// `I_z^{infinity}(word)` by cumulative Legendre quadrature on the
    /// vertical ray above `z`; independent of the series route.
    pub fn quadrature_to_infinity(&self, word: &[usize], z: Complex64) -> Result<Approx> {
        check_depth(word)?;
        if word.is_empty() {
            return Ok(Approx::one());
        }
        let coarse = self.ray_quadrature(word, z, 0.5, 24)?;
        let fine = self.ray_quadrature(word, z, 0.25, 24)?;
        let diff = (coarse - fine).norm();
        Ok(Approx::new(fine, diff))
    }

    fn ray_quadrature(&self, word: &[usize], z: Complex64, h: f64, n: usize) -> Result<Complex64> {
        let gl = GaussLegendre::new(n);
        let top = (8.0 - z.im).max(2.0);
        let panels = (top / h).ceil() as usize;
        // Legendre values at the nodes, and the antiderivative table
        // int_{-1}^{x_j} P_m = (P_{m+1}(x_j) - P_{m-1}(x_j)) / (2m + 1).
        let p: Vec<Vec<f64>> = gl.nodes.iter().map(|&x| legendre_all(n, x)).collect();
        let q: Vec<Vec<f64>> = gl
            .nodes
            .iter()
            .zip(&p)
            .map(|(&x, pj)| {
                (0..n)
                    .map(|m| {
                        if m == 0 {
                            x + 1.0
                        } else {
                            (pj[m + 1] - pj[m - 1]) / (2 * m + 1) as f64
                        }
                    })
                    .collect()
            })
            .collect();
        let point = |panel: usize, j: usize| {
            let s = h * (panel as f64 + 0.5 * (gl.nodes[j] + 1.0));
            z + Complex64::new(0.0, s)
        };
        let i = Complex64::new(0.0, 1.0);
        // inner[panel][j]: I_{t}^{top}(suffix) at the nodes, starting from 1.
        let mut inner = vec![vec![Complex64::new(1.0, 0.0); n]; panels];
        let mut bottom = Complex64::new(1.0, 0.0);
        for &letter in word.iter().rev() {
            let f = self.form(letter)?;
            let mut next = vec![vec![Complex64::new(0.0, 0.0); n]; panels];
            let mut above = Complex64::new(0.0, 0.0);
            for panel in (0..panels).rev() {
                let g: Vec<Complex64> = (0..n)
                    .map(|j| Ok(f.eval(point(panel, j))?.value * inner[panel][j] * i))
                    .collect::<Result<_>>()?;
                let c: Vec<Complex64> = (0..n)
                    .map(|m| {
                        let s: Complex64 = (0..n).map(|j| g[j] * gl.weights[j] * p[j][m]).sum();
                        s * ((2 * m + 1) as f64 / 2.0)
                    })
                    .collect();
                let total: Complex64 = (0..n).map(|j| g[j] * gl.weights[j]).sum();
                for j in 0..n {
                    let cum: Complex64 = (0..n).map(|m| c[m] * q[j][m]).sum();
                    next[panel][j] = above + (total - cum) * (h / 2.0);
                }
                above += total * (h / 2.0);
            }
            inner = next;
            bottom = above;
        }
        Ok(bottom)
    }
}

fn check_depth(word: &[usize]) -> Result<()> {
    if word.len() > MAX_DEPTH {
        return Err(Error::DepthLimit(format!(
            "word of length {} exceeds {MAX_DEPTH}",
            word.len()
        )));
    }
    Ok(())
}
