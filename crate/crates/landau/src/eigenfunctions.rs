//! Closed-form radial eigenfunctions.
//!
//! Every bound state factors as a prefactor times a polynomial. On a curved
//! surface the prefactor is σ^p γ^q in the half-angle pair of
//! [`half_angle`](crate::geometry::half_angle) and the polynomial variable is
//! x = (κ/2)·vers r; on the plane it is r^p e^{−βr²/4} with y = βr²/2.
//! [`Profile`] stores that factorization, which gives exact first and second
//! derivatives and lets the shift operator act symbolically.
//!
//! The highest-weight family is obtained from the lowest one by m → −m,
//! β → −β.

use std::sync::Arc;

use statrs::function::gamma::ln_gamma;

use crate::geometry::{half_angle, kappa_trig, versine, Curvature};
use crate::numerics::{integrate_radial, QuadratureScheme};
use crate::representation::{ModelParams, RadialFunction, Sign};
use crate::spectrum::{is_admissible, uir_coefficient_squared, Family, StateLabel};
use crate::{LandauError, Real, Result};

// ---------------------------------------------------------------------------
// Special functions

/// (a)_n = a(a+1)…(a+n−1).
pub fn pochhammer<T: Real>(a: T, n: u32) -> T {
    (0..n).fold(T::one(), |acc, i| acc * (a + T::from_u32(i).unwrap()))
}

fn is_nonpositive_integer(z: f64) -> bool {
    z <= 0.0 && z == z.floor()
}

/// (ln|Γ(z)|, sign Γ(z)), or `None` at a pole.
fn ln_gamma_signed(z: f64) -> Option<(f64, f64)> {
    if z > 0.0 {
        return Some((ln_gamma(z), 1.0));
    }
    if is_nonpositive_integer(z) {
        return None;
    }
    let s = (std::f64::consts::PI * z).sin();
    Some((std::f64::consts::PI.ln() - s.abs().ln() - ln_gamma(1.0 - z), s.signum()))
}

/// 1/Γ(z), zero at the poles of Γ.
pub fn reciprocal_gamma(z: f64) -> f64 {
    if z == z.floor() && (1.0..=171.0).contains(&z) {
        return 1.0 / factorial(z as u32 - 1);
    }
    match ln_gamma_signed(z) {
        Some((lg, sign)) => sign * (-lg).exp(),
        None => 0.0,
    }
}

/// Π Γ(num) / Π Γ(den) in log space. Poles at −n are replaced by their
/// residues (−1)^n/n!; this is the limit when every argument moves by the
/// same infinitesimal, which holds for ratios whose arguments share one
/// parameter with unit coefficient. Unbalanced pole counts are an error.
pub fn gamma_ratio(num: &[f64], den: &[f64]) -> Result<f64> {
    let mut log = 0.0;
    let mut sign = 1.0;
    let mut poles: i32 = 0;
    for (args, dir) in [(num, 1.0), (den, -1.0)] {
        for &z in args {
            let (lg, s) = match ln_gamma_signed(z) {
                Some(v) => v,
                None => {
                    poles += dir as i32;
                    let n = -z;
                    let s = if (n as i64) % 2 == 0 { 1.0 } else { -1.0 };
                    (-ln_gamma(n + 1.0), s)
                }
            };
            log += dir * lg;
            sign *= s;
        }
    }
    if poles != 0 {
        return Err(LandauError::GammaPole);
    }
    Ok(sign * log.exp())
}

/// Terminating series ₂F₁(−l, b; c; x) or ₁F₁(−l; c; x) (when `b_param` is
/// `None`), optionally divided by Γ(c).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TerminatingHypergeometric<T> {
    pub l: u32,
    pub b_param: Option<T>,
    pub c_param: T,
    pub regularized: bool,
}

impl<T: Real> TerminatingHypergeometric<T> {
    pub fn gauss(l: u32, b: T, c: T, regularized: bool) -> Self {
        Self { l, b_param: Some(b), c_param: c, regularized }
    }

    pub fn confluent(l: u32, c: T, regularized: bool) -> Self {
        Self { l, b_param: None, c_param: c, regularized }
    }

    /// The l+1 power-series coefficients.
    pub fn coefficients(&self) -> Result<Vec<T>> {
        let mut out = Vec::with_capacity(self.l as usize + 1);
        let minus_l = -T::from_u32(self.l).unwrap();
        for n in 0..=self.l {
            let mut num = pochhammer(minus_l, n) / T::lit(factorial(n));
            if let Some(b) = self.b_param {
                num = num * pochhammer(b, n);
            }
            let term = if self.regularized {
                num * T::lit(reciprocal_gamma((self.c_param + T::from_u32(n).unwrap()).as_f64()))
            } else {
                let den = pochhammer(self.c_param, n);
                if den == T::zero() {
                    if num == T::zero() {
                        out.push(T::zero());
                        continue;
                    }
                    return Err(LandauError::HypergeometricPole { c: self.c_param.as_f64() });
                }
                num / den
            };
            out.push(term);
        }
        Ok(out)
    }

    pub fn eval(&self, x: T) -> Result<T> {
        Ok(horner(&self.coefficients()?, x)[0])
    }
}

fn factorial(n: u32) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// Σ_{n=0}^{l} (−l)ₙ(b)ₙ xⁿ/(n!(c)ₙ), or with 1/Γ(c+n) when regularized.
pub fn hypergeometric_terminating<T: Real>(l: u32, b: T, c: T, x: T, regularized: bool) -> Result<T> {
    TerminatingHypergeometric::gauss(l, b, c, regularized).eval(x)
}

/// Σ_{n=0}^{l} (−l)ₙ xⁿ/(n!(c)ₙ), or with 1/Γ(c+n) when regularized.
pub fn confluent_terminating<T: Real>(l: u32, c: T, x: T, regularized: bool) -> Result<T> {
    TerminatingHypergeometric::confluent(l, c, regularized).eval(x)
}

fn binomial<T: Real>(z: T, k: u32) -> T {
    pochhammer(z - T::from_u32(k).unwrap() + T::one(), k) / T::lit(factorial(k))
}

/// Jacobi polynomial P_n^{(a,b)}(y) from the explicit binomial sum, valid for
/// any real a and b.
pub fn jacobi<T: Real>(n: u32, a: T, b: T, y: T) -> T {
    let nt = T::from_u32(n).unwrap();
    let two = T::lit(2.0);
    let (lo, hi) = ((y - T::one()) / two, (y + T::one()) / two);
    (0..=n).fold(T::zero(), |acc, s| {
        acc + binomial(nt + a, n - s) * binomial(nt + b, s) * lo.powi(s as i32) * hi.powi((n - s) as i32)
    })
}

/// Generalized Laguerre polynomial L_n^α(y) by the three-term recurrence.
pub fn laguerre<T: Real>(n: u32, alpha: T, y: T) -> T {
    let mut prev = T::one();
    if n == 0 {
        return prev;
    }
    let mut cur = T::one() + alpha - y;
    for k in 1..n {
        let kt = T::from_u32(k).unwrap();
        let next = ((T::lit(2.0) * kt + T::one() + alpha - y) * cur - (kt + alpha) * prev) / (kt + T::one());
        prev = cur;
        cur = next;
    }
    cur
}

/// [P, P', P''] at x.
fn horner<T: Real>(c: &[T], x: T) -> [T; 3] {
    let (mut p, mut d1, mut d2) = (T::zero(), T::zero(), T::zero());
    for &a in c.iter().rev() {
        d2 = d2 * x + d1 * T::lit(2.0);
        d1 = d1 * x + p;
        p = p * x + a;
    }
    [p, d1, d2]
}

// ---------------------------------------------------------------------------
// Profiles

#[derive(Debug, Clone, Copy, PartialEq)]
enum Chart<T> {
    Curved { kappa: Curvature<T> },
    Flat { beta: T },
}

/// scale · σ^p γ^q P(x) on a curved surface, scale · r^p e^{−βr²/4} P(y) on
/// the plane.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile<T> {
    chart: Chart<T>,
    pub p: T,
    pub q: T,
    pub poly: Vec<T>,
    pub scale: T,
}

fn power<T: Real>(base: T, e: T) -> T {
    if e.fract() == T::zero() {
        base.powi(e.to_i32().unwrap())
    } else {
        base.powf(e)
    }
}

/// c·base^e, and exactly zero when c is, so that vanishing prefactors never
/// meet negative powers of zero.
fn term<T: Real>(c: T, base: T, e: T) -> T {
    if c == T::zero() {
        T::zero()
    } else {
        c * power(base, e)
    }
}

fn near_zero<T: Real>(v: T) -> bool {
    v.abs() < T::lit(1e-9)
}

fn poly_derivative<T: Real>(c: &[T]) -> Vec<T> {
    c.iter().enumerate().skip(1).map(|(k, &a)| a * T::from_usize(k).unwrap()).collect()
}

/// Σ weight_i · x^{shift_i} · poly_i.
fn poly_combine<T: Real>(parts: &[(T, usize, &[T])]) -> Vec<T> {
    let len = parts.iter().map(|(_, s, c)| s + c.len()).max().unwrap_or(0);
    let mut out = vec![T::zero(); len];
    for &(w, shift, c) in parts {
        for (k, &a) in c.iter().enumerate() {
            out[k + shift] = out[k + shift] + w * a;
        }
    }
    while out.len() > 1 && *out.last().unwrap() == T::zero() {
        out.pop();
    }
    out
}

impl<T: Real> Profile<T> {
    /// Unnormalized closed form for the lowest-weight family with parameters
    /// (β, m), including the factor that the literal formula carries in front
    /// of the polynomial.
    pub fn closed_form(kappa: Curvature<T>, beta: T, l: u32, m: i64) -> Self {
        let lt = T::from_u32(l).unwrap();
        let mt = T::from_i64(m).unwrap();
        let k = m.unsigned_abs() as u32;
        let kt = T::from_u32(k).unwrap();
        let minus_l = -lt;
        if kappa.kappa == T::zero() {
            let poly: Vec<T> = if m >= 0 {
                TerminatingHypergeometric::confluent(l, mt + T::one(), true).coefficients().unwrap()
            } else {
                (0..=(l - k))
                    .map(|i| pochhammer(minus_l, i + k) / T::lit(factorial(i + k) * factorial(i)))
                    .collect()
            };
            return Self {
                chart: Chart::Flat { beta },
                p: kt,
                q: T::zero(),
                poly,
                scale: power(beta / T::lit(2.0), kt / T::lit(2.0)),
            };
        }
        let n = T::lit(2.0) * beta / kappa.kappa;
        let b = lt + T::one() + n;
        let chart = Chart::Curved { kappa };
        if m < 0 {
            let sk = if kappa.kappa > T::zero() { T::one() } else { -T::one() };
            let poly = (0..=(l - k))
                .map(|i| pochhammer(minus_l, i + k) * pochhammer(b, i + k) / T::lit(factorial(i + k) * factorial(i)))
                .collect();
            return Self { chart, p: kt, q: n - mt, poly, scale: sk.powi(k as i32) };
        }
        if kappa.kappa > T::zero() && mt > n + T::lit(1e-9) {
            // Euler's transformation removes the (1−x)^{m−N} hidden in the
            // polynomial, which the literal form would divide back out.
            let degree = (lt + n - mt).round().to_u32().unwrap();
            let poly = TerminatingHypergeometric::gauss(degree, mt + T::one() + lt, mt + T::one(), true)
                .coefficients()
                .unwrap();
            return Self { chart, p: mt, q: mt - n, poly, scale: T::one() };
        }
        let poly = TerminatingHypergeometric::gauss(l, b, mt + T::one(), true).coefficients().unwrap();
        Self { chart, p: mt, q: n - mt, poly, scale: T::one() }
    }

    /// [R, R', R''] at r.
    pub fn eval3(&self, r: T) -> [T; 3] {
        let two = T::lit(2.0);
        let one = T::one();
        let p = self.p;
        match self.chart {
            Chart::Curved { kappa } => self.eval3_curved(kappa, r),
            Chart::Flat { beta } => {
                let y = beta * r * r / two;
                let [pp, p1, p2] = horner(&self.poly, y);
                let e = (-beta * r * r / T::lit(4.0)).exp();
                let f = [power(r, p), term(p, r, p - one), term(p * (p - one), r, p - two)];
                let g = [e, -beta * r / two * e, (beta * beta * r * r / T::lit(4.0) - beta / two) * e];
                let h = [pp, p1 * beta * r, p2 * beta * beta * r * r + p1 * beta];
                let s = self.scale;
                [
                    s * f[0] * g[0] * h[0],
                    s * (f[1] * g[0] * h[0] + f[0] * g[1] * h[0] + f[0] * g[0] * h[1]),
                    s * (f[2] * g[0] * h[0]
                        + f[0] * g[2] * h[0]
                        + f[0] * g[0] * h[2]
                        + two * (f[1] * g[1] * h[0] + f[1] * g[0] * h[1] + f[0] * g[1] * h[1])),
                ]
            }
        }
    }

    /// Term by term over the monomials σ^{p+2j} γ^q. Far out on the
    /// hyperbolic plane σ^a γ^b is evaluated as tanh^a · γ^{a+b} in log form,
    /// since σ^a alone overflows long before the product does.
    fn eval3_curved(&self, kappa: Curvature<T>, r: T) -> [T; 3] {
        let two = T::lit(2.0);
        let (s, c, w) = half_angle(kappa, r);
        let sk = if kappa.kappa > T::zero() { T::one() } else { -T::one() };
        let far = kappa.kappa < T::zero() && w * r > T::lit(20.0);
        let (t, ln_c) = if far {
            let wr = w * r;
            ((wr).tanh(), wr + (-two * wr).exp().ln_1p() - two.ln())
        } else {
            (T::zero(), T::zero())
        };
        let mono = |coef: T, a: T, b: T| -> T {
            if coef == T::zero() {
                T::zero()
            } else if far {
                coef * power(t, a) * ((a + b) * ln_c).exp()
            } else {
                coef * power(s, a) * power(c, b)
            }
        };
        let b = self.q;
        let mut out = [T::zero(); 3];
        let mut sign = T::one();
        for (j, &aj) in self.poly.iter().enumerate() {
            let cj = aj * sign * self.scale;
            sign = sign * sk;
            let a = self.p + T::from_usize(2 * j).unwrap();
            out[0] = out[0] + mono(cj, a, b);
            out[1] = out[1] + mono(cj * w * a, a - T::one(), b + T::one()) - mono(cj * w * sk * b, a + T::one(), b - T::one());
            out[2] = out[2] + mono(cj * w * w * a * (a - T::one()), a - two, b + two)
                - mono(cj * w * w * sk * (two * a * b + a + b), a, b)
                + mono(cj * w * w * b * (b - T::one()), a + two, b - two);
        }
        out
    }

    pub fn value(&self, r: T) -> T {
        self.eval3(r)[0]
    }

    /// Sign of the profile just off the origin.
    pub fn leading_sign(&self) -> T {
        (self.scale * self.poly[0]).signum()
    }

    pub fn scaled(&self, c: T) -> Self {
        Self { scale: self.scale * c, ..self.clone() }
    }

    /// −R' + ((mC + βv)/S)·R for the lowest-weight family with parameters
    /// (β, m), i.e. the raising operator without its factor i. `None` when
    /// the image vanishes.
    pub fn raise(&self, beta: T, m: T) -> Option<Self> {
        let two = T::lit(2.0);
        let one = T::one();
        let dp = poly_derivative(&self.poly);
        let a = m - self.p;
        let out = match self.chart {
            Chart::Flat { beta: b } => {
                if near_zero(a) {
                    let poly = poly_combine(&[(two, 0, &self.poly), (-two, 0, &dp)]);
                    Self { p: self.p + one, poly, scale: self.scale * b / two, ..self.clone() }
                } else {
                    let poly = poly_combine(&[(a, 0, &self.poly), (two, 1, &self.poly), (-two, 1, &dp)]);
                    Self { p: self.p - one, poly, ..self.clone() }
                }
            }
            Chart::Curved { kappa } => {
                let n = two * beta / kappa.kappa;
                let sk = if kappa.kappa > T::zero() { one } else { -one };
                let w = kappa.kappa.abs().sqrt() / two;
                let bq = self.q + n - m;
                let (poly, dp_, dq, extra) = match (near_zero(a), near_zero(bq)) {
                    (false, false) => (
                        poly_combine(&[
                            (a, 0, &self.poly),
                            (bq - a, 1, &self.poly),
                            (-two, 1, &dp),
                            (two, 2, &dp),
                        ]),
                        -one,
                        -one,
                        one,
                    ),
                    (true, false) => (
                        poly_combine(&[(bq, 0, &self.poly), (-two, 0, &dp), (two, 1, &dp)]),
                        one,
                        -one,
                        sk,
                    ),
                    (false, true) => (poly_combine(&[(a, 0, &self.poly), (-two, 1, &dp)]), -one, one, one),
                    (true, true) => (poly_combine(&[(-two, 0, &dp)]), one, one, sk),
                };
                Self {
                    p: self.p + dp_,
                    q: self.q + dq,
                    poly,
                    scale: self.scale * w * extra,
                    ..self.clone()
                }
            }
        };
        if out.poly.iter().all(|&c| c == T::zero()) || out.poly.is_empty() {
            None
        } else {
            Some(out)
        }
    }

    pub fn to_radial_function(&self, m: T) -> RadialFunction<T> {
        let (a, b, c) = (Arc::new(self.clone()), Arc::new(self.clone()), Arc::new(self.clone()));
        RadialFunction::from_real(m, move |r| a.eval3(r)[0])
            .with_derivatives(move |r| b.eval3(r)[1], move |r| c.eval3(r)[2])
    }

    /// ∫ R² S dr by quadrature.
    pub fn norm_squared(&self) -> Result<T> {
        let kappa = match self.chart {
            Chart::Curved { kappa } => kappa,
            Chart::Flat { .. } => Curvature::new(T::zero()),
        };
        let f = |r: T| self.value(r);
        Ok(integrate_radial(f, f, kappa, &QuadratureScheme::default())?.value)
    }
}

// ---------------------------------------------------------------------------
// Normalized eigenfunctions

/// How a normalization constant is meant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convention {
    /// ∫ R² S dr = 1.
    RadialOnly,
    /// ∫ |Ψ|² S dr dθ = 1 with Ψ = R e^{imθ}/√(2π).
    FullSurface,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalizationConstant<T> {
    pub value: T,
    pub convention: Convention,
}

/// (m, β) of the equivalent lowest-weight state.
fn effective<T: Real>(params: &ModelParams<T>, label: &StateLabel<T>) -> (T, T) {
    match label.family {
        Family::Lowest => (label.m, params.beta),
        Family::Highest => (-label.m, -params.beta),
    }
}

fn integer_labels<T: Real>(label: &StateLabel<T>) -> Result<(u32, i64)> {
    if !label.is_standard() {
        return Err(LandauError::Inadmissible {
            l: label.l.as_f64(),
            m: label.m.as_f64(),
            reason: "closed forms need integer labels and α = 0".into(),
        });
    }
    Ok((label.l.to_u32().unwrap(), label.m.to_i64().unwrap()))
}

/// Constant multiplying the closed-form profile of [`Profile::closed_form`]
/// (hypergeometric, or confluent on the plane).
pub fn normalization_constant<T: Real>(
    params: &ModelParams<T>,
    label: &StateLabel<T>,
    convention: Convention,
) -> Result<NormalizationConstant<T>> {
    is_admissible(params, label)?;
    let (m, beta) = effective(params, label);
    let (l, m) = (label.l.as_f64(), m.as_f64());
    let kappa = params.k().as_f64();
    let beta = beta.as_f64();
    let pi = std::f64::consts::PI;
    let c2 = if kappa == 0.0 {
        beta * gamma_ratio(&[l + m + 1.0], &[l + 1.0])? / (2.0 * pi)
    } else {
        // The κ < 0 ratio is reflected to positive arguments, where the
        // curved-space Γ(l+1+N)/Γ(l−m+1+N) would sit on poles.
        let n = 2.0 * beta / kappa;
        let ratio = if kappa > 0.0 {
            gamma_ratio(&[l + 1.0 + n, l + m + 1.0], &[l + 1.0, l - m + 1.0 + n])?
        } else {
            gamma_ratio(&[m - l - n, l + m + 1.0], &[l + 1.0, -l - n])?
        };
        (kappa * (2.0 * l + 1.0 + n)).abs() * ratio / (4.0 * pi)
    };
    if c2.is_nan() || c2 <= 0.0 || !c2.is_finite() {
        return Err(LandauError::GammaPole);
    }
    let value = match convention {
        Convention::FullSurface => c2.sqrt(),
        Convention::RadialOnly => (2.0 * pi * c2).sqrt(),
    };
    Ok(NormalizationConstant { value: T::lit(value), convention })
}

/// A normalized radial eigenfunction, real and positive near the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialEigenfunction<T> {
    pub label: StateLabel<T>,
    pub profile: Profile<T>,
}

impl<T: Real> RadialEigenfunction<T> {
    pub fn value(&self, r: T) -> T {
        self.profile.eval3(r)[0]
    }

    pub fn derivative(&self, r: T) -> T {
        self.profile.eval3(r)[1]
    }

    pub fn second_derivative(&self, r: T) -> T {
        self.profile.eval3(r)[2]
    }

    /// |Ψ|² at radius r.
    pub fn density(&self, r: T) -> T {
        let v = self.value(r);
        v * v / (T::lit(2.0) * T::PI())
    }

    pub fn to_radial_function(&self) -> RadialFunction<T> {
        self.profile.to_radial_function(self.label.m)
    }
}

/// Closed-form normalized eigenfunction of an admissible state.
pub fn eigenfunction<T: Real>(params: &ModelParams<T>, label: &StateLabel<T>) -> Result<RadialEigenfunction<T>> {
    is_admissible(params, label)?;
    let (l, _) = integer_labels(label)?;
    let (m, beta) = effective(params, label);
    let profile = Profile::closed_form(params.kappa, beta, l, m.to_i64().unwrap());
    let c = normalization_constant(params, label, Convention::RadialOnly)?.value;
    let profile = profile.scaled(c * profile.leading_sign());
    Ok(RadialEigenfunction { label: *label, profile })
}

/// Normalized radial eigenfunction with analytic derivatives.
pub fn radial_eigenfunction<T: Real>(params: &ModelParams<T>, label: &StateLabel<T>) -> Result<RadialFunction<T>> {
    Ok(eigenfunction(params, label)?.to_radial_function())
}

/// The lowest-weight seed S^l γ^{2β/κ} of level l (S^l e^{−βr²/4} on the
/// plane), unnormalized and without the admissibility check, so that
/// non-normalizable seeds can be examined.
pub fn lowest_weight_seed<T: Real>(params: &ModelParams<T>, l: u32) -> RadialFunction<T> {
    let kappa = params.kappa;
    let beta = params.beta;
    let lt = T::from_u32(l).unwrap();
    RadialFunction::from_real(-lt, move |r| {
        let s = kappa_trig(kappa, r).s;
        if kappa.kappa == T::zero() {
            s.powi(l as i32) * (-beta * r * r / T::lit(4.0)).exp()
        } else {
            let (_, g, _) = half_angle(kappa, r);
            s.powi(l as i32) * g.powf(T::lit(2.0) * beta / kappa.kappa)
        }
    })
}

/// Normalization of the lowest level written as
/// N · γ^{2β/κ−m} (σ/√|κ|)^m, and N · (r/2)^m e^{−βr²/4} on the plane.
pub fn lowest_level_norm<T: Real>(params: &ModelParams<T>, m: u32) -> T {
    let (k, b) = (params.k(), params.beta.abs());
    let two = T::lit(2.0);
    let prod = (0..=m).fold(T::one(), |acc, j| acc * (two * b + k - T::from_u32(j).unwrap() * k));
    (prod / (two * T::lit(factorial(m)))).sqrt()
}

/// The lowest level in the trigonometric form above, for m ≥ 0 of the
/// lowest-weight family.
pub fn lowest_level<T: Real>(params: &ModelParams<T>, m: u32) -> RadialFunction<T> {
    let norm = lowest_level_norm(params, m);
    let kappa = params.kappa;
    let beta = params.beta;
    let mt = T::from_u32(m).unwrap();
    RadialFunction::from_real(mt, move |r| {
        if kappa.kappa == T::zero() {
            return norm * (r / T::lit(2.0)).powi(m as i32) * (-beta * r * r / T::lit(4.0)).exp();
        }
        let (s, g, w) = half_angle(kappa, r);
        let n = T::lit(2.0) * beta / kappa.kappa;
        norm * power(g, n - mt) * (s / (T::lit(2.0) * w)).powi(m as i32)
    })
}

/// vers^{m/2} (1 − (κ/2) vers)^{β/κ − m/2} times |κ/2|^{m/2}, the factor
/// multiplying the polynomial part, evaluated through the versine.
pub fn level_factor<T: Real>(params: &ModelParams<T>, m: T, r: T) -> T {
    let k = params.k();
    let two = T::lit(2.0);
    let x = k / two * versine(params.kappa, r);
    power(x.abs(), m / two) * power(T::one() - x, params.beta / k - m / two)
}

/// Level l of the family selected by the sign of β, built from its extreme
/// state by repeated application of the shift operator that moves away from
/// it, renormalizing at every step. Stops early when the next coefficient
/// vanishes at the top of a finite level.
pub fn build_level_by_raising<T: Real>(params: &ModelParams<T>, l: u32, count: usize) -> Result<Vec<RadialFunction<T>>> {
    let family = Family::for_beta(params.beta);
    let lt = T::from_u32(l).unwrap();
    let (start, step) = match family {
        Family::Lowest => (-lt, Sign::Plus),
        Family::Highest => (lt, Sign::Minus),
    };
    is_admissible(params, &StateLabel::new(family, lt, start))?;
    let beta = match family {
        Family::Lowest => params.beta,
        Family::Highest => -params.beta,
    };
    let mut profile = Profile::closed_form(params.kappa, beta, l, -(l as i64));
    let mut out = Vec::with_capacity(count);
    let mut m = start;
    for i in 0..count {
        let norm = profile.norm_squared()?.sqrt();
        profile = profile.scaled(profile.leading_sign() / norm);
        out.push(profile.to_radial_function(m));
        if i + 1 == count {
            break;
        }
        let coeff = uir_coefficient_squared(params, family, lt, m, step);
        if coeff.abs() < T::lit(1e-12) {
            break;
        }
        let m_eff = match family {
            Family::Lowest => m,
            Family::Highest => -m,
        };
        match profile.raise(beta, m_eff) {
            Some(next) => profile = next,
            None => break,
        }
        m = m + T::from_i32(step.step()).unwrap();
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Independent evaluation paths

fn curved_prefactor<T: Real>(params: &ModelParams<T>, beta: T, m: T, r: T) -> T {
    let (s, g, _) = half_angle(params.kappa, r);
    let n = T::lit(2.0) * beta / params.k();
    power(s, m) * power(g, n - m)
}

/// Radially normalized R from the regularized hypergeometric form, with
/// |x|^{m/2} = σ^m in front.
pub fn hypergeometric_path<T: Real>(params: &ModelParams<T>, label: &StateLabel<T>, r: T) -> Result<T> {
    let (l, _) = integer_labels(label)?;
    let (m, beta) = effective(params, label);
    let k = params.k();
    let n = T::lit(2.0) * beta / k;
    let c = normalization_constant(params, label, Convention::RadialOnly)?.value;
    let x = k / T::lit(2.0) * versine(params.kappa, r);
    let f = hypergeometric_terminating(l, label.l + T::one() + n, m + T::one(), x, true)?;
    Ok(c * curved_prefactor(params, beta, m, r) * f)
}

/// The same function through l!/Γ(l+m+1) · P_l^{(m, 2β/κ−m)}(cos√κ r).
pub fn jacobi_path<T: Real>(params: &ModelParams<T>, label: &StateLabel<T>, r: T) -> Result<T> {
    let (l, _) = integer_labels(label)?;
    let (m, beta) = effective(params, label);
    let n = T::lit(2.0) * beta / params.k();
    let c = normalization_constant(params, label, Convention::RadialOnly)?.value;
    let ratio = T::lit(gamma_ratio(&[label.l.as_f64() + 1.0], &[(label.l + m).as_f64() + 1.0])?);
    let y = kappa_trig(params.kappa, r).c;
    Ok(c * curved_prefactor(params, beta, m, r) * ratio * jacobi(l, m, n - m, y))
}

/// Planar R from the regularized confluent form.
pub fn confluent_path<T: Real>(params: &ModelParams<T>, label: &StateLabel<T>, r: T) -> Result<T> {
    let (l, _) = integer_labels(label)?;
    let (m, beta) = effective(params, label);
    let c = normalization_constant(params, label, Convention::RadialOnly)?.value;
    let two = T::lit(2.0);
    let pre = power(beta / two, m / two) * power(r, m) * (-beta * r * r / T::lit(4.0)).exp();
    Ok(c * pre * confluent_terminating(l, m + T::one(), beta * r * r / two, true)?)
}

/// Planar R through l!/Γ(l+m+1) · L_l^m(βr²/2).
pub fn laguerre_path<T: Real>(params: &ModelParams<T>, label: &StateLabel<T>, r: T) -> Result<T> {
    let (l, _) = integer_labels(label)?;
    let (m, beta) = effective(params, label);
    let c = normalization_constant(params, label, Convention::RadialOnly)?.value;
    let two = T::lit(2.0);
    let ratio = T::lit(gamma_ratio(&[label.l.as_f64() + 1.0], &[(label.l + m).as_f64() + 1.0])?);
    let pre = power(beta / two, m / two) * power(r, m) * (-beta * r * r / T::lit(4.0)).exp();
    Ok(c * pre * ratio * laguerre(l, m, beta * r * r / two))
}

// ---------------------------------------------------------------------------
// Flat limit

/// Distances from the planar targets at κ = 2β/n, each a sup over `grid`
/// (a single number for the constant).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContractionDeviation<T> {
    /// |c(κ)(κ/2)^{m/2} − c(0)β^{m/2}|.
    pub constant: T,
    /// vers^{m/2}(1−(κ/2)vers)^{β/κ−m/2} against r^m e^{−βr²/4}/2^{m/2}.
    pub prefactor: T,
    /// ₂F₁(−l, l+1+2β/κ; m+1; (κ/2)vers) against ₁F₁(−l; m+1; βr²/2),
    /// relative to the sup of the latter over the grid.
    pub polynomial: T,
    /// Normalized eigenfunctions.
    pub eigenfunction: T,
}

/// Deviation of the lowest-family state (l, m ≥ 0) at κ = 2β/n from its
/// planar limit.
pub fn contraction_deviation<T: Real>(beta: T, n: u32, l: u32, m: u32, grid: &[T]) -> Result<ContractionDeviation<T>> {
    let nt = T::from_u32(n).unwrap();
    let two = T::lit(2.0);
    let curved = ModelParams::new(two * beta / nt, beta)?;
    let flat = ModelParams::new(T::zero(), beta)?;
    let label = StateLabel::lowest(l as i64, m as i64);
    let mt = T::from_u32(m).unwrap();
    let k = curved.k();
    let c_k = normalization_constant(&curved, &label, Convention::FullSurface)?.value;
    let c_0 = normalization_constant(&flat, &label, Convention::FullSurface)?.value;
    let constant = (c_k * power(k / two, mt / two) - c_0 * power(beta, mt / two)).abs();
    let fk = eigenfunction(&curved, &label)?;
    let f0 = eigenfunction(&flat, &label)?;
    let mut dev = ContractionDeviation { constant, prefactor: T::zero(), polynomial: T::zero(), eigenfunction: T::zero() };
    let mut poly_scale = T::zero();
    for &r in grid {
        let v = versine(curved.kappa, r);
        let pre_k = power(v, mt / two) * power(T::one() - k / two * v, beta / k - mt / two);
        let pre_0 = power(r, mt) * (-beta * r * r / T::lit(4.0)).exp() / power(two, mt / two);
        let fk_poly = hypergeometric_terminating(l, T::from_u32(l + 1).unwrap() + two * beta / k, mt + T::one(), k / two * v, false)?;
        let f0_poly = confluent_terminating(l, mt + T::one(), beta * r * r / two, false)?;
        dev.prefactor = dev.prefactor.max((pre_k - pre_0).abs());
        dev.polynomial = dev.polynomial.max((fk_poly - f0_poly).abs());
        poly_scale = poly_scale.max(f0_poly.abs());
        dev.eigenfunction = dev.eigenfunction.max((fk.value(r) - f0.value(r)).abs());
    }
    dev.polynomial = dev.polynomial / poly_scale;
    Ok(dev)
}
