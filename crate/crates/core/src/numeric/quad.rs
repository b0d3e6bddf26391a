//! Gauss-Legendre quadrature along polygonal paths in the upper half-plane.

use num_complex::Complex64;

use super::approx::Approx;
use crate::error::{Error, Result};

/// Height of the waypoints used to join two low points.
pub const WAYPOINT_HEIGHT: f64 = 5.0;

#[derive(Clone, Debug)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Nodes on `[-1, 1]` by Newton iteration on `P_n`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 2, "need at least two nodes");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// `(P_n(x), P_n'(x))`.
pub fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    let d = nf * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// `P_0(x), ..., P_n(x)`.
pub fn legendre_all(n: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(1.0);
    if n >= 1 {
        out.push(x);
    }
    for k in 2..=n {
        let kf = k as f64;
        let v = ((2.0 * kf - 1.0) * x * out[k - 1] - (kf - 1.0) * out[k - 2]) / kf;
        out.push(v);
    }
    out
}

pub type Integrand<'a> = dyn Fn(Complex64) -> Result<Approx> + Sync + 'a;

/// Panels evaluated per adaptive integral before giving up.
pub const PANEL_BUDGET: usize = 1 << 16;

/// One Gauss-Legendre panel: the integral and `int |f| |dz|`.
fn panel(f: &Integrand, gl: &GaussLegendre, a: Complex64, b: Complex64) -> Result<(Approx, f64)> {
    let mid = (a + b) / 2.0;
    let half = (b - a) / 2.0;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    let mut mass = 0.0;
    for (x, w) in gl.nodes.iter().zip(&gl.weights) {
        let v = f(mid + half * *x)?;
        sum += v.value * *w;
        err += v.err * w;
        mass += v.value.norm() * w;
    }
    Ok((Approx::new(sum * half, err * half.norm()), mass * half.norm()))
}

/// Adaptive integral of `f(z) dz` along the segment `[a, b]`.
pub fn integrate_segment(
    f: &Integrand,
    gl: &GaussLegendre,
    a: Complex64,
    b: Complex64,
    tol: f64,
) -> Result<Approx> {
    let (whole, _) = panel(f, gl, a, b)?;
    let mut budget = PANEL_BUDGET;
    adapt(f, gl, a, b, whole, tol, 0, &mut budget)
}

/// Relative resolution of a panel sum. Near the real axis the integrand is
/// evaluated through large modular transformations, and neighbouring points
/// may reduce through different matrices; the results then differ at about
/// this level, which bisection cannot resolve.
const ROUNDOFF: f64 = 1e-12;

fn adapt(
    f: &Integrand,
    gl: &GaussLegendre,
    a: Complex64,
    b: Complex64,
    whole: Approx,
    tol: f64,
    depth: u32,
    budget: &mut usize,
) -> Result<Approx> {
    let m = (a + b) / 2.0;
    let (left, lm) = panel(f, gl, a, m)?;
    let (right, rm) = panel(f, gl, m, b)?;
    let split = left + right;
    let diff = (split.value - whole.value).norm();
    // neither roundoff in a sum of size int |f| nor the propagated error of
    // the integrand values can be resolved by further bisection
    if diff <= tol.max(ROUNDOFF * (lm + rm)).max(split.err) {
        return Ok(Approx::new(split.value, split.err + diff));
    }
    *budget = budget.saturating_sub(2);
    if depth >= 40 || *budget == 0 {
        return Err(Error::Precision(format!(
            "quadrature on [{a}, {b}] stalled at {diff:e} > {tol:e}"
        )));
    }
    let l = adapt(f, gl, a, m, left, tol / 2.0, depth + 1, budget)?;
    let r = adapt(f, gl, m, b, right, tol / 2.0, depth + 1, budget)?;
    Ok(l + r)
}

/// `a -> Re a + iH -> Re b + iH -> b`, dropping empty legs. Vertical legs
/// are cut geometrically towards the real axis.
pub fn waypoint_path(a: Complex64, b: Complex64) -> Vec<Complex64> {
    let mut pts = vec![a];
    let push = |pts: &mut Vec<Complex64>, z: Complex64| {
        if (pts.last().copied().unwrap() - z).norm() > 1e-300 {
            pts.push(z);
        }
    };
    if a.im >= WAYPOINT_HEIGHT && b.im >= WAYPOINT_HEIGHT {
        push(&mut pts, b);
        return pts;
    }
    let top_a = Complex64::new(a.re, WAYPOINT_HEIGHT.max(a.im));
    let top_b = Complex64::new(b.re, WAYPOINT_HEIGHT.max(b.im));
    for z in graded(a, top_a) {
        push(&mut pts, z);
    }
    push(&mut pts, top_b);
    let mut down = graded(b, top_b);
    down.reverse();
    for z in down.into_iter().skip(1) {
        push(&mut pts, z);
    }
    push(&mut pts, b);
    pts
}

/// Points `low, ..., high` on a vertical segment, doubling in height.
fn graded(low: Complex64, high: Complex64) -> Vec<Complex64> {
    let mut out = vec![low];
    let mut y = low.im;
    while y * 2.0 < high.im {
        y *= 2.0;
        out.push(Complex64::new(low.re, y));
    }
    out.push(high);
    out
}

pub fn integrate_path(
    f: &Integrand,
    gl: &GaussLegendre,
    points: &[Complex64],
    tol: f64,
) -> Result<Approx> {
    let legs = points.len().saturating_sub(1).max(1) as f64;
    points
        .windows(2)
        .map(|w| integrate_segment(f, gl, w[0], w[1], tol / legs))
        .sum()
}

/// `int_a^b f(z) dz` along the waypoint path.
pub fn integrate(
    f: &Integrand,
    gl: &GaussLegendre,
    a: Complex64,
    b: Complex64,
    tol: f64,
) -> Result<Approx> {
    integrate_path(f, gl, &waypoint_path(a, b), tol)
}
