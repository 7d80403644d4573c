//! Quadrature with the invariant measure, finite-difference derivatives and
//! the sector-decomposed plane functions used as an independent oracle for
//! operator identities.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex;

use crate::geometry::{measure_weight, Curvature};
use crate::representation::{RadialFunction, RadialOperator};
use crate::{LandauError, Real, Result};

/// Gauss–Legendre rule on [−1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    fn compute(n: usize) -> Self {
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let kf = k as f64;
                    let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                    p0 = p1;
                    p1 = p2;
                }
                let (p, pm) = if n == 1 { (x, 1.0) } else { (p1, p0) };
                dp = nf * (x * p - pm) / (x * x - 1.0);
                let dx = p / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    /// Cached rule with `n` nodes.
    pub fn get(n: usize) -> Arc<GaussLegendre> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GaussLegendre>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        let mut guard = cache.lock().expect("quadrature cache poisoned");
        guard.entry(n).or_insert_with(|| Arc::new(Self::compute(n))).clone()
    }

    pub fn integrate<T: Real>(&self, f: impl Fn(T) -> T, a: T, b: T) -> T {
        let half = (b - a) / T::lit(2.0);
        let mid = (a + b) / T::lit(2.0);
        self.nodes
            .iter()
            .zip(&self.weights)
            .fold(T::zero(), |acc, (&x, &w)| acc + T::lit(w) * f(mid + half * T::lit(x)))
            * half
    }
}

/// ∫_a^b f with an `n`-point Gauss–Legendre rule.
pub fn gauss_legendre_integrate<T: Real>(f: impl Fn(T) -> T, a: T, b: T, n: usize) -> T {
    GaussLegendre::get(n).integrate(f, a, b)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QuadratureDomain<T> {
    /// [0, π/√κ]; only meaningful for κ > 0.
    Compact,
    /// [0, r_max] with a caller-chosen radius.
    Truncated(T),
    /// Compact for κ > 0, otherwise a truncation radius found from the decay of the integrand.
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureScheme<T> {
    pub domain: QuadratureDomain<T>,
    pub node_count: usize,
    pub max_nodes: usize,
    /// Relative gate on the change under node doubling.
    pub tol: f64,
}

impl<T: Real> Default for QuadratureScheme<T> {
    fn default() -> Self {
        Self { domain: QuadratureDomain::Auto, node_count: 256, max_nodes: 4096, tol: 1e-10 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature<T> {
    pub value: T,
    pub nodes: usize,
    pub radius: T,
}

/// Panels [0,1], [1,2], [2,4], … clipped to `end`, so that functions
/// concentrated near the origin and slowly decaying tails are both resolved.
fn panels<T: Real>(end: T) -> Vec<(T, T)> {
    let mut out = Vec::new();
    let mut a = T::zero();
    let mut b = T::one().min(end);
    while a < end {
        out.push((a, b));
        a = b;
        b = (b * T::lit(2.0)).min(end);
    }
    out
}

fn panel_sum<T: Real>(h: &impl Fn(T) -> T, end: T, n: usize) -> T {
    let rule = GaussLegendre::get(n);
    panels(end).into_iter().fold(T::zero(), |acc, (a, b)| acc + rule.integrate(h, a, b))
}

fn gated<T: Real>(h: &impl Fn(T) -> T, end: T, scheme: &QuadratureScheme<T>) -> Result<Quadrature<T>> {
    let mut n = scheme.node_count.max(2);
    let mut coarse = panel_sum(h, end, n);
    loop {
        let fine_n = n * 2;
        if fine_n > scheme.max_nodes {
            return Err(LandauError::Convergence { coarse: coarse.as_f64(), fine: f64::NAN });
        }
        let fine = panel_sum(h, end, fine_n);
        let scale = fine.abs().max(panel_sum(&|r: T| h(r).abs(), end, fine_n));
        if (fine - coarse).abs() <= T::lit(scheme.tol) * scale {
            return Ok(Quadrature { value: fine, nodes: fine_n, radius: end });
        }
        if fine_n >= scheme.max_nodes {
            return Err(LandauError::Convergence { coarse: coarse.as_f64(), fine: fine.as_f64() });
        }
        coarse = fine;
        n = fine_n;
    }
}

/// Radius beyond which |h| stays below 1e-16 of its peak, by sampling
/// successively doubled shells.
fn envelope_radius<T: Real>(h: &impl Fn(T) -> T) -> Option<T> {
    let mut peak = T::zero();
    let mut lo = T::zero();
    let mut hi = T::one();
    while hi <= T::lit(1.0e4) {
        let mut shell = T::zero();
        for k in 1..=128 {
            let r = lo + (hi - lo) * T::from_usize(k).unwrap() / T::lit(128.0);
            let v = h(r).abs();
            if v.is_finite() {
                shell = shell.max(v);
            } else {
                return None;
            }
        }
        peak = peak.max(shell);
        if peak > T::zero() && shell < T::lit(1e-16) * peak {
            return Some(hi);
        }
        lo = hi;
        hi = hi * T::lit(2.0);
    }
    None
}

/// ∫ f·g·S(r) dr over the radial domain of `scheme`.
pub fn integrate_radial<T: Real>(
    f: impl Fn(T) -> T,
    g: impl Fn(T) -> T,
    kappa: Curvature<T>,
    scheme: &QuadratureScheme<T>,
) -> Result<Quadrature<T>> {
    let h = |r: T| f(r) * g(r) * measure_weight(kappa, r);
    let end = match scheme.domain {
        QuadratureDomain::Truncated(r) => r,
        QuadratureDomain::Compact => kappa.chart_limit().ok_or(LandauError::Curvature {
            kappa: kappa.kappa.as_f64(),
            reason: "compact domain needs κ > 0",
        })?,
        QuadratureDomain::Auto => match kappa.chart_limit() {
            Some(limit) => limit,
            None => {
                let radius = envelope_radius(&h).ok_or(LandauError::Convergence {
                    coarse: f64::NAN,
                    fine: f64::INFINITY,
                })?;
                let inner = gated(&h, radius, scheme)?;
                let outer = gated(&h, radius * T::lit(2.0), scheme)?;
                let scale = outer.value.abs().max(T::min_positive_value());
                if (outer.value - inner.value).abs() > T::lit(scheme.tol) * scale {
                    return Err(LandauError::Convergence {
                        coarse: inner.value.as_f64(),
                        fine: outer.value.as_f64(),
                    });
                }
                return Ok(outer);
            }
        },
    };
    gated(&h, end, scheme)
}

/// Default finite-difference step max(1e-4, ε^{1/3}).
pub fn fd_step<T: Real>() -> T {
    T::lit(1e-4).max(T::epsilon().cbrt())
}

/// Central first derivative with one Richardson level.
pub fn fd_derivative<T: Real>(f: &dyn Fn(T) -> T, r: T, h: T) -> T {
    let d = |h: T| (f(r + h) - f(r - h)) / (T::lit(2.0) * h);
    (T::lit(4.0) * d(h / T::lit(2.0)) - d(h)) / T::lit(3.0)
}

/// Central second derivative with one Richardson level.
pub fn fd_second<T: Real>(f: &dyn Fn(T) -> T, r: T, h: T) -> T {
    let f0 = f(r);
    let d = |h: T| (f(r + h) - T::lit(2.0) * f0 + f(r - h)) / (h * h);
    (T::lit(4.0) * d(h / T::lit(2.0)) - d(h)) / T::lit(3.0)
}

fn fd_derivative_c<T: Real>(f: &dyn Fn(T) -> Complex<T>, r: T, h: T) -> Complex<T> {
    let d = |h: T| (f(r + h) - f(r - h)) / (T::lit(2.0) * h);
    (d(h / T::lit(2.0)) * T::lit(4.0) - d(h)) / T::lit(3.0)
}

pub type RadialClosure<T> = Arc<dyn Fn(T) -> Complex<T> + Send + Sync>;

/// Function on the plane (or a chart of the surface) written as a finite
/// Fourier sum Σ_m e^{imθ} f_m(r). The θ-direction is exact and only r is
/// differentiated numerically.
#[derive(Clone)]
pub struct SectorField<T> {
    pub sectors: BTreeMap<i32, RadialClosure<T>>,
    pub step: T,
}

impl<T: Real> std::fmt::Debug for SectorField<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SectorField")
            .field("sectors", &self.sectors.keys().collect::<Vec<_>>())
            .field("step", &self.step)
            .finish()
    }
}

impl<T: Real> SectorField<T> {
    pub fn new(step: T) -> Self {
        Self { sectors: BTreeMap::new(), step }
    }

    pub fn single(m: i32, f: RadialClosure<T>, step: T) -> Self {
        let mut out = Self::new(step);
        out.sectors.insert(m, f);
        out
    }

    pub fn with_sector(mut self, m: i32, f: RadialClosure<T>) -> Self {
        self.sectors.insert(m, f);
        self
    }

    pub fn eval(&self, r: T, theta: T) -> Complex<T> {
        self.sectors.iter().fold(Complex::new(T::zero(), T::zero()), |acc, (&m, f)| {
            let phase = T::from_i32(m).unwrap() * theta;
            acc + f(r) * Complex::new(phase.cos(), phase.sin())
        })
    }

    /// Radial part of sector m, zero if absent.
    pub fn sector(&self, m: i32, r: T) -> Complex<T> {
        self.sectors.get(&m).map_or(Complex::new(T::zero(), T::zero()), |f| f(r))
    }

    fn map_sectors(&self, g: impl Fn(i32, RadialClosure<T>) -> (i32, RadialClosure<T>)) -> Self {
        Self {
            sectors: self.sectors.iter().map(|(&m, f)| g(m, f.clone())).collect(),
            step: self.step,
        }
    }

    /// ∂_r by central differences.
    pub fn d_r(&self) -> Self {
        let h = self.step;
        self.map_sectors(|m, f| {
            let d: RadialClosure<T> = Arc::new(move |r| fd_derivative_c(&*f, r, h));
            (m, d)
        })
    }

    /// ∂_θ, exact.
    pub fn d_theta(&self) -> Self {
        self.map_sectors(|m, f| {
            let im = Complex::new(T::zero(), T::from_i32(m).unwrap());
            let d: RadialClosure<T> = Arc::new(move |r| f(r) * im);
            (m, d)
        })
    }

    pub fn mul_radial(&self, g: impl Fn(T) -> Complex<T> + Send + Sync + 'static) -> Self {
        let g = Arc::new(g);
        self.map_sectors(|m, f| {
            let g = g.clone();
            let d: RadialClosure<T> = Arc::new(move |r| f(r) * g(r));
            (m, d)
        })
    }

    pub fn mul_real(&self, g: impl Fn(T) -> T + Send + Sync + 'static) -> Self {
        self.mul_radial(move |r| Complex::new(g(r), T::zero()))
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        self.mul_radial(move |_| c)
    }

    /// Multiplication by e^{ikθ}.
    pub fn shift(&self, k: i32) -> Self {
        self.map_sectors(|m, f| (m + k, f))
    }

    pub fn mul_cos(&self) -> Self {
        self.shift(1).add(&self.shift(-1)).scale(Complex::new(T::lit(0.5), T::zero()))
    }

    pub fn mul_sin(&self) -> Self {
        self.shift(1).sub(&self.shift(-1)).scale(Complex::new(T::zero(), -T::lit(0.5)))
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, T::one())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, -T::one())
    }

    fn combine(&self, other: &Self, sign: T) -> Self {
        let mut sectors = self.sectors.clone();
        for (&m, g) in &other.sectors {
            let g = g.clone();
            let merged: RadialClosure<T> = match sectors.remove(&m) {
                Some(f) => Arc::new(move |r| f(r) + g(r) * sign),
                None => Arc::new(move |r| g(r) * sign),
            };
            sectors.insert(m, merged);
        }
        Self { sectors, step: self.step }
    }
}

/// A differential expression on sector fields.
pub type PlaneOperator<T> = Arc<dyn Fn(&SectorField<T>) -> SectorField<T> + Send + Sync>;

/// a ∘ b.
pub fn plane_compose<T: Real>(a: &PlaneOperator<T>, b: &PlaneOperator<T>) -> PlaneOperator<T> {
    let (a, b) = (a.clone(), b.clone());
    Arc::new(move |f| a(&b(f)))
}

/// [a, b] = ab − ba.
pub fn plane_commutator<T: Real>(a: &PlaneOperator<T>, b: &PlaneOperator<T>) -> PlaneOperator<T> {
    let (a, b) = (a.clone(), b.clone());
    Arc::new(move |f| a(&b(f)).sub(&b(&a(f))))
}

/// Σ cᵢ opᵢ.
pub fn plane_combination<T: Real>(terms: Vec<(Complex<T>, PlaneOperator<T>)>) -> PlaneOperator<T> {
    Arc::new(move |f| {
        terms.iter().fold(SectorField::new(f.step), |acc, (c, op)| acc.add(&op(f).scale(*c)))
    })
}

/// Evaluates `op f` at a point, refusing points whose radial stencil would
/// leave the chart.
pub fn fd_apply<T: Real>(
    op: &PlaneOperator<T>,
    f: &SectorField<T>,
    point: crate::geometry::PolarCoords<T>,
    kappa: Curvature<T>,
) -> Result<Complex<T>> {
    // nested stencils reach two steps per derivative order; 10h covers second order
    let margin = T::lit(10.0) * f.step;
    let too_close = point.r < margin
        || kappa.chart_limit().is_some_and(|limit| point.r > limit - margin);
    if too_close {
        return Err(LandauError::StencilBoundary { r: point.r.as_f64() });
    }
    Ok(op(f).eval(point.r, point.theta))
}

/// Outcome of a residual evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residual<T> {
    pub value: T,
    /// Set when the function vanishes on the whole grid, in which case `value` is 0.
    pub degenerate: bool,
}

/// max over the grid of |op f − λ f| / max |f|.
pub fn residual_norm<T: Real>(
    op: &RadialOperator<T>,
    f: &RadialFunction<T>,
    eigenvalue: T,
    grid: &[T],
) -> Residual<T> {
    let image = op.apply(f);
    let mut num = T::zero();
    let mut den = T::zero();
    for &r in grid {
        let fr = f.eval(r);
        den = den.max(fr.norm());
        let lhs = image.eval(r) - fr * eigenvalue;
        num = num.max(lhs.norm());
    }
    if den == T::zero() {
        return Residual { value: T::zero(), degenerate: true };
    }
    Residual { value: num / den, degenerate: false }
}

/// Evenly spaced grid of `n` points on [a, b].
pub fn linspace<T: Real>(a: T, b: T, n: usize) -> Vec<T> {
    if n == 1 {
        return vec![a];
    }
    let step = (b - a) / T::from_usize(n - 1).unwrap();
    (0..n).map(|k| a + step * T::from_usize(k).unwrap()).collect()
}
