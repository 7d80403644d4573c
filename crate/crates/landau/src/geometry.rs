//! κ-deformed trigonometry and the surface x0² + κx1² + κx2² = 1.
//!
//! For κ > 0 the functions are the circular ones, for κ < 0 the hyperbolic
//! ones, and near κr² = 0 a short Taylor series in κr² takes over so the
//! planar limit C → 1, S → r is reached without cancellation.

use crate::{LandauError, Real, Result};

/// Below this value of |κ|r² the series branch is used.
pub const SERIES_THRESHOLD: f64 = 1e-4;

/// Curvature of the surface.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Curvature<T> {
    pub kappa: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CurvatureSign {
    Positive,
    Zero,
    Negative,
}

impl<T: Real> Curvature<T> {
    pub fn new(kappa: T) -> Self {
        Self { kappa }
    }

    pub fn sign(&self) -> CurvatureSign {
        if self.kappa > T::zero() {
            CurvatureSign::Positive
        } else if self.kappa < T::zero() {
            CurvatureSign::Negative
        } else {
            CurvatureSign::Zero
        }
    }

    /// Upper end π/√κ of the geodesic polar chart; `None` when the chart is unbounded.
    pub fn chart_limit(&self) -> Option<T> {
        (self.kappa > T::zero()).then(|| T::PI() / self.kappa.sqrt())
    }

    fn check_radius(&self, r: T) -> Result<()> {
        let bad = match self.chart_limit() {
            Some(limit) => r < T::zero() || r > limit * (T::one() + T::lit(1e-12)),
            None => r < T::zero(),
        };
        if bad {
            return Err(LandauError::ChartDomain {
                r: r.as_f64(),
                limit: self.chart_limit().map_or(f64::INFINITY, |v| v.as_f64()),
            });
        }
        Ok(())
    }
}

impl<T: Real> From<T> for Curvature<T> {
    fn from(kappa: T) -> Self {
        Self { kappa }
    }
}

/// The triple C = cos√κr, S = sin√κr/√κ and T = S/C.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KappaTrig<T> {
    pub c: T,
    pub s: T,
}

impl<T: Real> KappaTrig<T> {
    /// T = S/C, failing at the poles of the κ-tangent.
    pub fn tangent(&self, r: T) -> Result<T> {
        if self.c.abs() <= T::lit(1e-14) * (T::one() + self.s.abs()) {
            return Err(LandauError::TangentPole { r: r.as_f64() });
        }
        Ok(self.s / self.c)
    }
}

/// C, S for curvature κ at radius r.
pub fn kappa_trig<T: Real>(kappa: Curvature<T>, r: T) -> KappaTrig<T> {
    let k = kappa.kappa;
    let x = k * r * r;
    if x.abs() < T::lit(SERIES_THRESHOLD) {
        // cos and sin/√κ as series in x = κr², four terms each
        let c = T::one() - x / T::lit(2.0) + x * x / T::lit(24.0) - x * x * x / T::lit(720.0);
        let s = r
            * (T::one() - x / T::lit(6.0) + x * x / T::lit(120.0) - x * x * x / T::lit(5040.0));
        return KappaTrig { c, s };
    }
    if k > T::zero() {
        let q = k.sqrt();
        KappaTrig { c: (q * r).cos(), s: (q * r).sin() / q }
    } else {
        let q = (-k).sqrt();
        KappaTrig { c: (q * r).cosh(), s: (q * r).sinh() / q }
    }
}

/// vers_κ r = (1 − cos√κr)/κ, continuous through κ = 0 where it equals r²/2.
pub fn versine<T: Real>(kappa: Curvature<T>, r: T) -> T {
    let k = kappa.kappa;
    let x = k * r * r;
    if x.abs() < T::lit(SERIES_THRESHOLD) {
        return r
            * r
            * (T::lit(0.5) - x / T::lit(24.0) + x * x / T::lit(720.0)
                - x * x * x / T::lit(40320.0));
    }
    // half-angle form avoids the cancellation in 1 − cos
    if k > T::zero() {
        let h = (k.sqrt() * r / T::lit(2.0)).sin();
        T::lit(2.0) * h * h / k
    } else {
        let h = ((-k).sqrt() * r / T::lit(2.0)).sinh();
        T::lit(2.0) * h * h / (-k)
    }
}

/// Invariant measure density S(r) in σ = S dr ∧ dθ.
pub fn measure_weight<T: Real>(kappa: Curvature<T>, r: T) -> T {
    kappa_trig(kappa, r).s
}

/// Geodesic polar coordinates centred on the base point (1, 0, 0).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PolarCoords<T> {
    pub r: T,
    pub theta: T,
}

/// Horocyclic coordinates, defined for κ < 0.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct HorocyclicCoords<T> {
    pub a: T,
    pub b: T,
}

/// Point of the ambient space satisfying x0² + κ(x1² + x2²) = 1.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SurfacePoint<T> {
    pub x0: T,
    pub x1: T,
    pub x2: T,
}

impl<T: Real> SurfacePoint<T> {
    /// x0² + κx1² + κx2² − 1.
    pub fn constraint_defect(&self, kappa: Curvature<T>) -> T {
        self.x0 * self.x0 + kappa.kappa * (self.x1 * self.x1 + self.x2 * self.x2) - T::one()
    }

    pub fn as_array(&self) -> [T; 3] {
        [self.x0, self.x1, self.x2]
    }
}

pub fn embed_polar<T: Real>(kappa: Curvature<T>, p: PolarCoords<T>) -> Result<SurfacePoint<T>> {
    kappa.check_radius(p.r)?;
    if kappa.kappa == T::zero() {
        return Ok(SurfacePoint { x0: T::one(), x1: p.r * p.theta.cos(), x2: p.r * p.theta.sin() });
    }
    let KappaTrig { c, s } = kappa_trig(kappa, p.r);
    Ok(SurfacePoint { x0: c, x1: s * p.theta.cos(), x2: s * p.theta.sin() })
}

/// Horocyclic chart of the hyperbolic surface.
///
/// The x1 component carries −√(−κ) in front of the b² term, which is what
/// the group action produces for any κ < 0; see the decisions ledger.
pub fn embed_horocyclic<T: Real>(
    kappa: Curvature<T>,
    h: HorocyclicCoords<T>,
) -> Result<SurfacePoint<T>> {
    if kappa.kappa >= T::zero() {
        return Err(LandauError::Curvature {
            kappa: kappa.kappa.as_f64(),
            reason: "horocyclic coordinates need κ < 0",
        });
    }
    let k = (-kappa.kappa).sqrt();
    let e = (k * h.a).exp();
    let half_b2 = h.b * h.b / T::lit(2.0);
    Ok(SurfacePoint {
        x0: (k * h.a).cosh() - kappa.kappa * half_b2 * e,
        x1: (k * h.a).sinh() / k - k * half_b2 * e,
        x2: h.b * e,
    })
}

pub type Matrix3<T> = [[T; 3]; 3];

fn mat_mul<T: Real>(a: &Matrix3<T>, b: &Matrix3<T>) -> Matrix3<T> {
    let mut out = [[T::zero(); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = (0..3).fold(T::zero(), |acc, k| acc + a[i][k] * b[k][j]);
        }
    }
    out
}

fn identity<T: Real>() -> Matrix3<T> {
    let mut m = [[T::zero(); 3]; 3];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = T::one();
    }
    m
}

/// Exponential of a 3×3 matrix by scaling and squaring with a 20-term Taylor core.
pub fn expm3<T: Real>(a: &Matrix3<T>) -> Matrix3<T> {
    let norm = a
        .iter()
        .map(|row| row.iter().fold(T::zero(), |acc, v| acc + v.abs()))
        .fold(T::zero(), T::max);
    let mut squarings = 0;
    let mut scale = T::one();
    while norm * scale > T::lit(0.5) {
        scale = scale / T::lit(2.0);
        squarings += 1;
    }
    let mut scaled = *a;
    for row in scaled.iter_mut() {
        for v in row.iter_mut() {
            *v = *v * scale;
        }
    }
    let mut result = identity::<T>();
    let mut term = identity::<T>();
    for n in 1..=20 {
        term = mat_mul(&term, &scaled);
        let inv = T::one() / T::from_usize(n).unwrap();
        for row in term.iter_mut() {
            for v in row.iter_mut() {
                *v = *v * inv;
            }
        }
        for i in 0..3 {
            for j in 0..3 {
                result[i][j] = result[i][j] + term[i][j];
            }
        }
    }
    for _ in 0..squarings {
        result = mat_mul(&result, &result);
    }
    result
}

/// Real matrix −iJ01 = −κE01 + E10 of the 3×3 representation.
pub fn generator_01<T: Real>(kappa: Curvature<T>) -> Matrix3<T> {
    let mut m = [[T::zero(); 3]; 3];
    m[0][1] = -kappa.kappa;
    m[1][0] = T::one();
    m
}

/// Real matrix −iJ02 = −κE02 + E20.
pub fn generator_02<T: Real>(kappa: Curvature<T>) -> Matrix3<T> {
    let mut m = [[T::zero(); 3]; 3];
    m[0][2] = -kappa.kappa;
    m[2][0] = T::one();
    m
}

/// Real matrix −iJ12 = −E12 + E21.
pub fn generator_12<T: Real>() -> Matrix3<T> {
    let mut m = [[T::zero(); 3]; 3];
    m[1][2] = -T::one();
    m[2][1] = T::one();
    m
}

fn scaled<T: Real>(m: Matrix3<T>, t: T) -> Matrix3<T> {
    m.map(|row| row.map(|v| v * t))
}

/// e^{−iθJ12} e^{−irJ01} applied to the base point, by matrix exponentials.
pub fn orbit_point<T: Real>(kappa: Curvature<T>, r: T, theta: T) -> Result<SurfacePoint<T>> {
    kappa.check_radius(r)?;
    let boost = expm3(&scaled(generator_01(kappa), r));
    let rotation = expm3(&scaled(generator_12(), theta));
    let g = mat_mul(&rotation, &boost);
    Ok(SurfacePoint { x0: g[0][0], x1: g[1][0], x2: g[2][0] })
}

/// sin(√|κ|r/2) (or sinh) and cos(√|κ|r/2) (or cosh), the half-angle pair
/// in which the eigenfunctions factor. Returns (σ, γ, w) with w = √|κ|/2.
pub fn half_angle<T: Real>(kappa: Curvature<T>, r: T) -> (T, T, T) {
    let k = kappa.kappa;
    let w = k.abs().sqrt() / T::lit(2.0);
    if k > T::zero() {
        ((w * r).sin(), (w * r).cos(), w)
    } else {
        ((w * r).sinh(), (w * r).cosh(), w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn k(v: f64) -> Curvature<f64> {
        Curvature::new(v)
    }

    #[test]
    fn trig_planar_limit() {
        let t = kappa_trig(k(0.0), 2.0);
        assert_eq!(t.s, 2.0);
        assert_eq!(t.c, 1.0);
    }

    #[test]
    fn trig_quarter_period_and_pole() {
        let t = kappa_trig(k(1.0), PI / 2.0);
        assert!(t.c.abs() < 1e-15);
        assert_relative_eq!(t.s, 1.0, epsilon = 1e-15);
        assert!(matches!(t.tangent(PI / 2.0), Err(LandauError::TangentPole { .. })));
        assert_relative_eq!(kappa_trig(k(1.0), 0.3).tangent(0.3).unwrap(), 0.3f64.tan());
    }

    #[test]
    fn trig_hyperbolic() {
        let t = kappa_trig(k(-1.0), 1.0);
        assert_relative_eq!(t.c, 1.5430806348152437, epsilon = 1e-15);
        assert_relative_eq!(t.s, 1.1752011936438014, epsilon = 1e-15);
    }

    #[test]
    fn versine_examples() {
        assert_eq!(versine(k(0.0), 3.0), 4.5);
        assert_relative_eq!(versine(k(1.0), PI), 2.0, epsilon = 1e-15);
        assert_relative_eq!(versine(k(-1.0), 1.0), 0.5430806348152437, epsilon = 1e-15);
    }

    #[test]
    fn embed_examples() {
        let p = embed_polar(k(1.0), PolarCoords { r: PI / 2.0, theta: 0.0 }).unwrap();
        assert!(p.x0.abs() < 1e-15);
        assert_relative_eq!(p.x1, 1.0);
        assert_eq!(p.x2, 0.0);

        let p = embed_polar(k(0.0), PolarCoords { r: 2.0, theta: PI / 2.0 }).unwrap();
        assert_eq!(p.x0, 1.0);
        assert!(p.x1.abs() < 1e-15);
        assert_relative_eq!(p.x2, 2.0);

        let p = embed_polar(k(-1.0), PolarCoords { r: 1.0, theta: 0.0 }).unwrap();
        assert_relative_eq!(p.x0, 1f64.cosh());
        assert_relative_eq!(p.x1, 1f64.sinh());
        assert_eq!(p.x2, 0.0);

        assert!(embed_polar(k(1.0), PolarCoords { r: 3.5, theta: 0.0 }).is_err());
    }

    #[test]
    fn horocyclic_examples() {
        let kap = k(-1.0);
        let p = embed_horocyclic(kap, HorocyclicCoords { a: 0.0, b: 0.0 }).unwrap();
        assert_eq!(p.as_array(), [1.0, 0.0, 0.0]);
        let p = embed_horocyclic(kap, HorocyclicCoords { a: 1.0, b: 0.0 }).unwrap();
        assert_relative_eq!(p.x0, 1f64.cosh());
        assert_relative_eq!(p.x1, 1f64.sinh());
        assert_eq!(p.x2, 0.0);
        let p = embed_horocyclic(kap, HorocyclicCoords { a: 0.3, b: 0.7 }).unwrap();
        assert!((p.x0 * p.x0 - p.x1 * p.x1 - p.x2 * p.x2 - 1.0).abs() < 1e-13);
        assert!(embed_horocyclic(k(0.0), HorocyclicCoords { a: 0.0, b: 0.0 }).is_err());
    }

    #[test]
    fn horocyclic_constraint_off_unit_curvature() {
        for &kv in &[-0.25, -4.0, -9.0] {
            let p = embed_horocyclic(k(kv), HorocyclicCoords { a: 0.4, b: -0.9 }).unwrap();
            assert!(p.constraint_defect(k(kv)).abs() < 1e-12, "κ = {kv}");
        }
    }

    #[test]
    fn orbit_examples() {
        let p = orbit_point(k(1.0), 0.0, 0.7).unwrap();
        assert_eq!(p.as_array(), [1.0, 0.0, 0.0]);
        let p = orbit_point(k(1.0), PI / 2.0, PI / 2.0).unwrap();
        let q = embed_polar(k(1.0), PolarCoords { r: PI / 2.0, theta: PI / 2.0 }).unwrap();
        for (a, b) in p.as_array().iter().zip(q.as_array()) {
            assert!((a - b).abs() < 1e-12);
        }
        assert_relative_eq!(p.x2, 1.0, epsilon = 1e-12);
        let p = orbit_point(k(-1.0), 1.0, 0.0).unwrap();
        assert_relative_eq!(p.x0, 1f64.cosh(), epsilon = 1e-12);
        assert_relative_eq!(p.x1, 1f64.sinh(), epsilon = 1e-12);
    }

    #[test]
    fn measure_examples() {
        assert_eq!(measure_weight(k(0.0), 5.0), 5.0);
        assert!(measure_weight(k(1.0), PI).abs() < 1e-15);
        assert_relative_eq!(measure_weight(k(-1.0), 2.0), 3.626860407847019, epsilon = 1e-14);
    }

    #[test]
    fn series_switch_is_continuous() {
        for &kv in &[1.0, -1.0, 0.37, -2.5] {
            let r = (SERIES_THRESHOLD / f64::abs(kv)).sqrt();
            let below = kappa_trig(k(kv), r * (1.0 - 1e-12));
            let above = kappa_trig(k(kv), r * (1.0 + 1e-12));
            assert_relative_eq!(below.c, above.c, max_relative = 1e-12);
            assert_relative_eq!(below.s, above.s, max_relative = 1e-11);
            let vb = versine(k(kv), r * (1.0 - 1e-12));
            let va = versine(k(kv), r * (1.0 + 1e-12));
            assert_relative_eq!(vb, va, max_relative = 1e-11);
        }
    }

    #[test]
    fn f32_instantiation() {
        let t = kappa_trig(Curvature::new(1.0f32), 0.5f32);
        assert!((t.c - 0.5f32.cos()).abs() < 1e-6);
        assert!((versine(Curvature::new(0.0f32), 2.0f32) - 2.0).abs() < 1e-6);
    }

    #[test]
    fn curvature_sign() {
        assert_eq!(k(2.0).sign(), CurvatureSign::Positive);
        assert_eq!(k(0.0).sign(), CurvatureSign::Zero);
        assert_eq!(k(-0.1).sign(), CurvatureSign::Negative);
    }
}
