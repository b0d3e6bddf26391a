//! Numeric checks of the path identities, the S-function relation, the
//! shuffle rule for slashes of products, and the symbol and period suites.
//!
//! Write `X_w = I_z^a(w)`, `Y_w = I_z^b(w)`, `B_w = I_b^a(w)` and treat them
//! as series in the free monoid with `X_() = Y_() = B_() = 1`. Chen's
//! relation is `X = Y B`. The S-function recursion says `S^a = (2 - conj X)^{-1}`,
//! so `S^a - S^b = S^b conj(Y) (conj(B) - 1) S^a`. The printed forms of both
//! identities carry a different sign and are reported alongside as the
//! `literal` residual.

use num_complex::Complex64;
use serde::Serialize;

use super::approx::Approx;
use super::eval::GlobalForm;
use super::group::{GroupData, Mat2};
use super::iterated::{CuspPoint, Endpoint, Kernel};
use super::quad::{integrate, GaussLegendre};
use super::symbols::{modular_symbol, modular_symbol_series, period_polynomial, NumericConfig};
use crate::error::{Error, Result};
use crate::words::enumerate_shuffles;

pub const MAX_S_DEPTH: usize = 3;

fn check_s_depth(word: &[usize]) -> Result<()> {
    if word.len() > MAX_S_DEPTH {
        return Err(Error::DepthLimit(format!(
            "word of length {} exceeds {MAX_S_DEPTH}",
            word.len()
        )));
    }
    Ok(())
}

/// `S^a_w(z) = sum_{r=1}^t conj(I_z^a(w_1..w_r)) S^a_{w_{r+1}..w_t}(z)`,
/// with `S_() = 1`.
pub fn s_function(k: &Kernel, word: &[usize], cusp: CuspPoint, z: Complex64) -> Result<Approx> {
    check_s_depth(word)?;
    if word.is_empty() {
        return Ok(Approx::one());
    }
    (1..=word.len())
        .map(|r| Ok(k.to_cusp(&word[..r], z, cusp)?.conj() * s_function(k, &word[r..], cusp, z)?))
        .sum()
}

/// The recursion unrolled: a sum over compositions of `w` into nonempty
/// blocks of the product of conjugated block integrals.
pub fn s_function_expanded(
    k: &Kernel,
    word: &[usize],
    cusp: CuspPoint,
    z: Complex64,
) -> Result<Approx> {
    check_s_depth(word)?;
    let t = word.len();
    if t == 0 {
        return Ok(Approx::one());
    }
    (0..1u32 << (t - 1))
        .map(|mask| {
            let mut start = 0;
            let mut acc = Approx::one();
            for cut in 1..=t {
                if cut == t || mask & (1 << (cut - 1)) != 0 {
                    acc = acc * k.to_cusp(&word[start..cut], z, cusp)?.conj();
                    start = cut;
                }
            }
            Ok(acc)
        })
        .sum()
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct IdentityResidual {
    /// `|LHS - RHS|` with the identity as printed.
    pub literal: f64,
    /// `|LHS - RHS|` with the sign that Chen's relation forces.
    pub corrected: f64,
    /// Propagated error bound of the evaluated terms.
    pub bound: f64,
}

/// Integrals `I_z^a`, `I_z^b`, `I_b^a` of every subword `w_i..w_j`.
struct Tables {
    x: Vec<Vec<Approx>>,
    y: Vec<Vec<Approx>>,
    b: Vec<Vec<Approx>>,
}

impl Tables {
    fn new(k: &Kernel, word: &[usize], a: CuspPoint, b: CuspPoint, z: Complex64) -> Result<Self> {
        let t = word.len();
        let table = |f: &dyn Fn(&[usize]) -> Result<Approx>| -> Result<Vec<Vec<Approx>>> {
            (0..=t)
                .map(|i| (0..=t).map(|j| if j < i { Ok(Approx::zero()) } else { f(&word[i..j]) }).collect())
                .collect()
        };
        Ok(Tables {
            x: table(&|u| k.to_cusp(u, z, a))?,
            y: table(&|u| k.to_cusp(u, z, b))?,
            b: table(&|u| k.between(u, Endpoint::Cusp(b), Endpoint::Cusp(a)))?,
        })
    }
}

/// `S` on the subword `w_i..w_t` from a table of conjugated integrals.
fn s_from(x: &[Vec<Approx>], i: usize, t: usize) -> Approx {
    if i == t {
        return Approx::one();
    }
    (i + 1..=t).map(|r| x[i][r].conj() * s_from(x, r, t)).sum()
}

pub fn check_path_lemma(
    k: &Kernel,
    word: &[usize],
    a: CuspPoint,
    b: CuspPoint,
    z: Complex64,
) -> Result<IdentityResidual> {
    check_s_depth(word)?;
    let t = word.len();
    if t == 0 {
        return Err(Error::InvalidArguments("empty word".into()));
    }
    let tb = Tables::new(k, word, a, b, z)?;
    let lhs = tb.x[0][t] - tb.y[0][t];
    let cross: Approx = (1..t).map(|r| tb.y[0][r] * tb.b[r][t]).sum();
    let literal = lhs - (tb.b[0][t] - cross);
    let corrected = lhs - (tb.b[0][t] + cross);
    Ok(IdentityResidual {
        literal: literal.abs(),
        corrected: corrected.abs(),
        bound: literal.err.max(corrected.err),
    })
}

pub fn check_sab(
    k: &Kernel,
    word: &[usize],
    a: CuspPoint,
    b: CuspPoint,
    z: Complex64,
) -> Result<IdentityResidual> {
    check_s_depth(word)?;
    let t = word.len();
    if a == b {
        return Ok(IdentityResidual {
            literal: 0.0,
            corrected: 0.0,
            bound: 0.0,
        });
    }
    let tb = Tables::new(k, word, a, b, z)?;
    let sa: Vec<Approx> = (0..=t).map(|i| s_from(&tb.x, i, t)).collect();
    // S^b on prefixes w_1..w_p
    let sb: Vec<Approx> = (0..=t).map(|p| s_from(&tb.y[..=p], 0, p)).collect();
    let lhs = sa[0] - sb[t];
    // (conj(B) - 1) S^a
    let printed: Approx = (1..=t).map(|r| tb.b[0][r].conj() * sa[r]).sum();
    // S^b conj(Y) (conj(B) - 1) S^a over w = p q v s with v nonempty
    let mut chen = Approx::zero();
    for p in 0..=t {
        for q in p..=t {
            for v in q + 1..=t {
                let y = if q == p { Approx::one() } else { tb.y[p][q].conj() };
                chen = chen + sb[p] * y * tb.b[q][v].conj() * sa[v];
            }
        }
    }
    let literal = lhs - printed;
    let corrected = lhs - chen;
    Ok(IdentityResidual {
        literal: literal.abs(),
        corrected: corrected.abs(),
        bound: literal.err.max(corrected.err),
    })
}

/// Concrete weight-2 functions of order at most 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ShuffleSpec {
    /// `f_j`, order 1.
    Cusp(usize),
    /// `f_j(z) int_i^z f_l`, order 2.
    CuspTimesPrimitive(usize, usize),
}

impl ShuffleSpec {
    pub fn order(&self) -> usize {
        match self {
            ShuffleSpec::Cusp(_) => 1,
            ShuffleSpec::CuspTimesPrimitive(..) => 2,
        }
    }

    fn eval(&self, k: &Kernel, gl: &GaussLegendre, tol: f64, z: Complex64) -> Result<Approx> {
        match *self {
            ShuffleSpec::Cusp(j) => k.form(j)?.eval(z),
            ShuffleSpec::CuspTimesPrimitive(j, l) => {
                let f = k.form(l)?;
                let fe = |w: Complex64| f.eval(w);
                let prim = integrate(&fe, gl, Complex64::new(0.0, 1.0), z, tol)?;
                Ok(k.form(j)?.eval(z)? * prim)
            }
        }
    }

    /// `(F |_2 m)(z)`.
    fn slash(&self, k: &Kernel, gl: &GaussLegendre, tol: f64, m: &Mat2, z: Complex64) -> Result<Approx> {
        Ok(self.eval(k, gl, tol, m.act(z))?.scale(m.j(z).powi(-2)))
    }
}

/// Ordered product of the matrices selected by `mask`.
fn subset_product(gammas: &[Mat2], mask: usize) -> Mat2 {
    gammas
        .iter()
        .enumerate()
        .filter(|(i, _)| mask & (1 << i) != 0)
        .fold(Mat2::IDENTITY, |acc, (_, g)| acc.mul(g))
}

/// `F | (g_1 - 1) ... (g_n - 1)` at `z`, expanded over subsets.
fn slash_chain<E>(gammas: &[Mat2], z: Complex64, eval: E) -> Result<Approx>
where
    E: Fn(&Mat2, Complex64) -> Result<Approx>,
{
    let n = gammas.len();
    (0..1usize << n)
        .map(|mask| {
            let v = eval(&subset_product(gammas, mask), z)?;
            Ok(if (n - mask.count_ones() as usize) % 2 == 1 { -v } else { v })
        })
        .sum()
}

/// Max over `zs` of `|(FG) | prod (g_i - 1) - sum_shuffles (F | prod_phi)(G | prod_psi)|`
/// for `F` of order `s`, `G` of order `t` and `s + t - 2` matrices.
pub fn check_shuffle_numeric(
    k: &Kernel,
    f: ShuffleSpec,
    g: ShuffleSpec,
    gammas: &[Mat2],
    zs: &[Complex64],
    cfg: &NumericConfig,
) -> Result<Residual> {
    let (s, t) = (f.order(), g.order());
    let n = s + t - 2;
    if gammas.len() != n {
        return Err(Error::InvalidArguments(format!(
            "orders {s} and {t} need {n} matrices, got {}",
            gammas.len()
        )));
    }
    let gl = cfg.rule();
    let tol = cfg.quad_tol();
    let shuffles = enumerate_shuffles(s as i64 - 1, n as i64 + 1)?;
    let mut worst = Residual::default();
    for &z in zs {
        let lhs = slash_chain(gammas, z, |m, z| {
            Ok(f.slash(k, &gl, tol, m, z)? * g.slash(k, &gl, tol, m, z)?)
        })?;
        let mut rhs = Approx::zero();
        for sh in &shuffles {
            let pick = |idx: &[usize]| idx.iter().map(|&i| gammas[i - 1]).collect::<Vec<_>>();
            let fv = slash_chain(&pick(&sh.phi), z, |m, z| f.slash(k, &gl, tol, m, z))?;
            let gv = slash_chain(&pick(&sh.psi), z, |m, z| g.slash(k, &gl, tol, m, z))?;
            rhs = rhs + fv * gv;
        }
        let (d, bound) = lhs.distance(rhs);
        worst.value = worst.value.max(d);
        worst.bound = worst.bound.max(bound);
    }
    Ok(worst)
}

#[derive(Clone, Copy, Debug, Default, Serialize)]
pub struct Residual {
    pub value: f64,
    pub bound: f64,
}

/// Max residuals of the modular-symbol properties.
#[derive(Clone, Copy, Debug, Default, Serialize)]
pub struct SymbolSuite {
    pub additivity: f64,
    pub inversion: f64,
    pub parabolic: f64,
    pub base_point: f64,
    pub series: f64,
    /// Generators on which the series route was usable.
    pub series_cases: usize,
    /// Largest propagated error bound among the symbols.
    pub bound: f64,
}

impl SymbolSuite {
    pub fn max(&self) -> f64 {
        [self.additivity, self.inversion, self.parabolic, self.base_point, self.series]
            .into_iter()
            .fold(0.0, f64::max)
    }
}

pub fn symbol_suite(g: &GroupData, f: &GlobalForm, cfg: &NumericConfig) -> Result<SymbolSuite> {
    let sym = |m: &Mat2| modular_symbol(f, m, g, cfg);
    let mut gens: Vec<Mat2> = g.generators.clone();
    gens.extend(g.generators.iter().map(|m| m.inv()));
    let mut out = SymbolSuite::default();
    let values = gens.iter().map(&sym).collect::<Result<Vec<_>>>()?;
    for (m, v) in gens.iter().zip(&values) {
        out.base_point = out.base_point.max(v.base_point_gap());
        // the series route only applies where its truncation error is small
        let series = modular_symbol_series(f, m)?;
        if series.err <= cfg.tol {
            out.series = out.series.max(v.value.distance(series).0);
            out.series_cases += 1;
        }
        out.bound = out.bound.max(v.value.err).max(v.recheck.err);
        out.inversion = out.inversion.max((sym(&m.inv())?.value + v.value).abs());
    }
    for (i, a) in gens.iter().enumerate() {
        for (j, b) in gens.iter().enumerate() {
            let ab = sym(&a.mul(b))?.value;
            out.bound = out.bound.max(ab.err);
            out.additivity = out.additivity.max((ab - values[i].value - values[j].value).abs());
        }
    }
    for cusp in &g.cusps {
        out.parabolic = out.parabolic.max(sym(&cusp.parabolic)?.value.abs());
    }
    out.parabolic = out.parabolic.max(sym(&Mat2::IDENTITY)?.value.abs());
    Ok(out)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct CocycleResidual {
    pub weight: u32,
    /// Max coefficient of `psi(gd) - psi(g)|d - psi(d)` over generator pairs.
    pub cocycle: f64,
    /// Weight 2 only: `|psi(g) - <f, g^{-1}>|`.
    pub symbol: Option<f64>,
    pub bound: f64,
    /// Largest coefficient among the three terms of any pair.
    pub scale: f64,
}

/// The cocycle relation for `F = f` (weight 2) or `F = f^2` (weight 4).
pub fn period_cocycle(
    g: &GroupData,
    f: &GlobalForm,
    weight: u32,
    cfg: &NumericConfig,
) -> Result<CocycleResidual> {
    let form = match weight {
        2 => f.clone(),
        4 => f.product(f)?,
        _ => {
            return Err(Error::InvalidArguments(format!(
                "period check supports weights 2 and 4, got {weight}"
            )))
        }
    };
    let psi = |m: &Mat2| period_polynomial(&form, m, g, cfg);
    let gens = &g.generators;
    let mut cocycle: f64 = 0.0;
    let mut bound: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for a in gens {
        for b in gens {
            let lhs = psi(&a.mul(b))?;
            let rhs_a = psi(a)?.slash(b);
            let rhs_b = psi(b)?;
            let diff = lhs.sub(&rhs_a).sub(&rhs_b);
            cocycle = cocycle.max(diff.max_abs());
            bound = bound.max(diff.err());
            scale = scale.max(lhs.max_abs()).max(rhs_a.max_abs()).max(rhs_b.max_abs());
        }
    }
    let symbol = if weight == 2 {
        let mut worst: f64 = 0.0;
        for m in gens {
            let p = psi(m)?;
            let s = modular_symbol(f, &m.inv(), g, cfg)?;
            worst = worst.max(p.coeffs[0].distance(s.value).0);
        }
        Some(worst)
    } else {
        None
    };
    Ok(CocycleResidual {
        weight,
        cocycle,
        symbol,
        bound,
        scale,
    })
}
