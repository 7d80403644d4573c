//! Generators of the magnetic algebra realized as differential operators,
//! their reduction to a single angular sector, the invariant gauge
//! potential and the Landau Hamiltonian.
//!
//! A wavefunction in sector m is e^{imθ}R(r). Operators that keep the
//! sector act on R alone; the raising and lowering combinations J^± move it
//! by ±1. Full two-dimensional forms built on [`SectorField`] are kept next to
//! the radial ones so the two can be checked against each other.

use std::sync::Arc;

use num_complex::Complex;
use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};

use crate::geometry::{kappa_trig, measure_weight, versine, Curvature};
use crate::numerics::{fd_derivative, fd_second, PlaneOperator, SectorField};
use crate::{LandauError, Real, Result};

/// Curvature and field strength, with 2β/κ held exactly when κ ≠ 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams<T> {
    pub kappa: Curvature<T>,
    pub beta: T,
    pub flux_ratio: Option<Ratio<i64>>,
}

/// Relative slack allowed when deciding that a floating 2β/κ is an integer.
const FLUX_TOLERANCE: f64 = 1e-9;

impl<T: Real> ModelParams<T> {
    /// Validates 2β/κ ∈ ℤ for κ ≠ 0.
    pub fn new(kappa: T, beta: T) -> Result<Self> {
        if !kappa.is_finite() || !beta.is_finite() {
            return Err(LandauError::Parameter("κ and β must be finite".into()));
        }
        if kappa == T::zero() {
            return Ok(Self { kappa: Curvature::new(kappa), beta, flux_ratio: None });
        }
        let ratio = (T::lit(2.0) * beta / kappa).as_f64();
        let nearest = ratio.round();
        if (ratio - nearest).abs() > FLUX_TOLERANCE * nearest.abs().max(1.0) {
            return Err(LandauError::FluxQuantization {
                kappa: kappa.as_f64(),
                beta: beta.as_f64(),
                ratio,
            });
        }
        Ok(Self {
            kappa: Curvature::new(kappa),
            beta,
            flux_ratio: Some(Ratio::from_integer(nearest as i64)),
        })
    }

    /// Exact construction from rationals; the quantization check has no tolerance.
    pub fn exact(kappa: Ratio<i64>, beta: Ratio<i64>) -> Result<Self> {
        let to_t = |q: Ratio<i64>| {
            T::from_f64(q.to_f64().unwrap_or(f64::NAN)).unwrap_or_else(T::nan)
        };
        if kappa.is_zero() {
            return Ok(Self { kappa: Curvature::new(T::zero()), beta: to_t(beta), flux_ratio: None });
        }
        let ratio = beta * 2 / kappa;
        if !ratio.is_integer() {
            return Err(LandauError::FluxQuantization {
                kappa: kappa.to_f64().unwrap_or(f64::NAN),
                beta: beta.to_f64().unwrap_or(f64::NAN),
                ratio: ratio.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(Self { kappa: Curvature::new(to_t(kappa)), beta: to_t(beta), flux_ratio: Some(ratio) })
    }

    /// No quantization check. Useful for probing the algebra off the lattice
    /// of allowed fields (κ → 0 continuity, non-integer flux).
    pub fn unchecked(kappa: T, beta: T) -> Self {
        let flux_ratio = (kappa != T::zero())
            .then(|| (T::lit(2.0) * beta / kappa).as_f64())
            .filter(|r| r.fract() == 0.0 && r.abs() < i64::MAX as f64)
            .map(|r| Ratio::from_integer(r as i64));
        Self { kappa: Curvature::new(kappa), beta, flux_ratio }
    }

    pub fn k(&self) -> T {
        self.kappa.kappa
    }

    /// 2β/κ as a float, `None` for κ = 0. Uses the quantized value when one
    /// was established at construction.
    pub fn flux(&self) -> Option<T> {
        if self.k() == T::zero() {
            return None;
        }
        match self.flux_ratio.and_then(|r| r.to_f64()).and_then(T::from_f64) {
            Some(n) => Some(n),
            None => Some(T::lit(2.0) * self.beta / self.k()),
        }
    }

    /// The integer 2β/κ when it is one.
    pub fn flux_integer(&self) -> Option<i64> {
        self.flux_ratio.filter(|r| r.is_integer()).map(|r| r.to_integer())
    }
}

/// Labels (λ, b) of the one-dimensional representation of the isotropy
/// subgroup from which the general realization is induced.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InductionLabels<T> {
    pub lambda: T,
    pub b: T,
}

impl<T: Real> InductionLabels<T> {
    pub fn new(lambda: T, b: T, kappa: Curvature<T>) -> Result<Self> {
        if kappa.kappa != T::zero() {
            let twice = (T::lit(2.0) * lambda).as_f64();
            if (twice - twice.round()).abs() > FLUX_TOLERANCE * twice.abs().max(1.0) {
                return Err(LandauError::InductionLabel { lambda: lambda.as_f64() });
            }
        }
        Ok(Self { lambda, b })
    }

    /// λ = b/κ = β/κ, the choice that reproduces the gauged realization.
    pub fn gauged(params: &ModelParams<T>) -> Result<Self> {
        if params.k() == T::zero() {
            return Err(LandauError::Curvature {
                kappa: 0.0,
                reason: "the induced realization needs κ ≠ 0",
            });
        }
        Self::new(params.beta / params.k(), params.beta, params.kappa)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Generator {
    J01,
    J02,
    J12,
    B,
}

impl Generator {
    pub const ALL: [Generator; 4] = [Generator::J01, Generator::J02, Generator::J12, Generator::B];
    pub const ROTATIONAL: [Generator; 3] = [Generator::J01, Generator::J02, Generator::J12];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value<T: Real>(self) -> T {
        match self {
            Sign::Plus => T::one(),
            Sign::Minus => -T::one(),
        }
    }

    pub fn step(self) -> i32 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

pub type ScalarFn<T> = Arc<dyn Fn(T) -> T + Send + Sync>;
pub type ComplexFn<T> = Arc<dyn Fn(T) -> Complex<T> + Send + Sync>;

/// Radial profile R(r) of the sector m, with optional exact derivatives.
#[derive(Clone)]
pub struct RadialFunction<T> {
    pub m: T,
    pub value: ComplexFn<T>,
    pub d1: Option<ComplexFn<T>>,
    pub d2: Option<ComplexFn<T>>,
}

impl<T: std::fmt::Debug> std::fmt::Debug for RadialFunction<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RadialFunction")
            .field("m", &self.m)
            .field("d1", &self.d1.is_some())
            .field("d2", &self.d2.is_some())
            .finish()
    }
}

fn lift_real<T: Real>(f: impl Fn(T) -> T + Send + Sync + 'static) -> ComplexFn<T> {
    Arc::new(move |r| Complex::new(f(r), T::zero()))
}

impl<T: Real> RadialFunction<T> {
    pub fn new(m: T, value: ComplexFn<T>) -> Self {
        Self { m, value, d1: None, d2: None }
    }

    pub fn from_real(m: T, value: impl Fn(T) -> T + Send + Sync + 'static) -> Self {
        Self::new(m, lift_real(value))
    }

    pub fn with_derivatives(
        mut self,
        d1: impl Fn(T) -> T + Send + Sync + 'static,
        d2: impl Fn(T) -> T + Send + Sync + 'static,
    ) -> Self {
        self.d1 = Some(lift_real(d1));
        self.d2 = Some(lift_real(d2));
        self
    }

    pub fn eval(&self, r: T) -> Complex<T> {
        (self.value)(r)
    }

    /// R'(r), exact when available, else by central differences.
    pub fn derivative(&self, r: T) -> Complex<T> {
        match &self.d1 {
            Some(d) => d(r),
            None => {
                let h = T::lit(1e-4);
                let re = fd_derivative(&|x| self.eval(x).re, r, h);
                let im = fd_derivative(&|x| self.eval(x).im, r, h);
                Complex::new(re, im)
            }
        }
    }

    /// R''(r), exact when available, else by differences of R' or R.
    pub fn second_derivative(&self, r: T) -> Complex<T> {
        if let Some(d) = &self.d2 {
            return d(r);
        }
        let h = T::lit(1e-4);
        match &self.d1 {
            Some(d) => Complex::new(
                fd_derivative(&|x| d(x).re, r, h),
                fd_derivative(&|x| d(x).im, r, h),
            ),
            None => {
                let h = T::lit(1e-3);
                Complex::new(
                    fd_second(&|x| self.eval(x).re, r, h),
                    fd_second(&|x| self.eval(x).im, r, h),
                )
            }
        }
    }

    pub fn scaled(&self, c: Complex<T>) -> Self {
        let v = self.value.clone();
        let d1 = self.d1.clone();
        let d2 = self.d2.clone();
        Self {
            m: self.m,
            value: Arc::new(move |r| v(r) * c),
            d1: d1.map(|d| -> ComplexFn<T> { Arc::new(move |r| d(r) * c) }),
            d2: d2.map(|d| -> ComplexFn<T> { Arc::new(move |r| d(r) * c) }),
        }
    }
}

/// A radial coefficient with its derivative, the latter by differences when
/// no closed form is supplied.
#[derive(Clone)]
pub struct Coefficient<T> {
    pub value: ScalarFn<T>,
    pub derivative: Option<ScalarFn<T>>,
}

impl<T: Real> Coefficient<T> {
    pub fn constant(c: T) -> Self {
        Self { value: Arc::new(move |_| c), derivative: Some(Arc::new(|_| T::zero())) }
    }

    pub fn new(
        value: impl Fn(T) -> T + Send + Sync + 'static,
        derivative: impl Fn(T) -> T + Send + Sync + 'static,
    ) -> Self {
        Self { value: Arc::new(value), derivative: Some(Arc::new(derivative)) }
    }

    pub fn numeric(value: impl Fn(T) -> T + Send + Sync + 'static) -> Self {
        Self { value: Arc::new(value), derivative: None }
    }

    pub fn eval(&self, r: T) -> T {
        (self.value)(r)
    }

    pub fn deriv(&self, r: T) -> T {
        match &self.derivative {
            Some(d) => d(r),
            None => fd_derivative(&*self.value, r, T::lit(1e-4)),
        }
    }
}

/// prefactor · (c2 R'' + c1 R' + c0 R), moving the sector by `delta_m`.
///
/// Coefficients are built for one input sector; `sector` records it when
/// they depend on m.
#[derive(Clone)]
pub struct RadialOperator<T> {
    pub delta_m: i32,
    pub sector: Option<T>,
    pub prefactor: Complex<T>,
    pub coeff2: Coefficient<T>,
    pub coeff1: Coefficient<T>,
    pub coeff0: Coefficient<T>,
    pub order: u8,
}

impl<T: std::fmt::Debug> std::fmt::Debug for RadialOperator<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RadialOperator")
            .field("delta_m", &self.delta_m)
            .field("sector", &self.sector)
            .field("prefactor", &self.prefactor)
            .field("order", &self.order)
            .finish()
    }
}

impl<T: Real> RadialOperator<T> {
    pub fn multiplication(c: T) -> Self {
        Self {
            delta_m: 0,
            sector: None,
            prefactor: Complex::new(T::one(), T::zero()),
            coeff2: Coefficient::constant(T::zero()),
            coeff1: Coefficient::constant(T::zero()),
            coeff0: Coefficient::constant(c),
            order: 0,
        }
    }

    pub fn first_order(delta_m: i32, prefactor: Complex<T>, c1: Coefficient<T>, c0: Coefficient<T>) -> Self {
        Self {
            delta_m,
            sector: None,
            prefactor,
            coeff2: Coefficient::constant(T::zero()),
            coeff1: c1,
            coeff0: c0,
            order: 1,
        }
    }

    pub fn second_order(c2: Coefficient<T>, c1: Coefficient<T>, c0: Coefficient<T>) -> Self {
        Self {
            delta_m: 0,
            sector: None,
            prefactor: Complex::new(T::one(), T::zero()),
            coeff2: c2,
            coeff1: c1,
            coeff0: c0,
            order: 2,
        }
    }

    pub fn for_sector(mut self, m: T) -> Self {
        self.sector = Some(m);
        self
    }

    /// (c2, c1, c0) at r with the prefactor applied.
    pub fn coefficients(&self, r: T) -> [Complex<T>; 3] {
        let p = self.prefactor;
        [p * self.coeff2.eval(r), p * self.coeff1.eval(r), p * self.coeff0.eval(r)]
    }

    pub fn apply_at(&self, f: &RadialFunction<T>, r: T) -> Complex<T> {
        let mut acc = f.eval(r) * self.coeff0.eval(r);
        if self.order >= 1 {
            acc = acc + f.derivative(r) * self.coeff1.eval(r);
        }
        if self.order >= 2 {
            acc = acc + f.second_derivative(r) * self.coeff2.eval(r);
        }
        acc * self.prefactor
    }

    /// Image of `f`, with an exact first derivative when the operator is at
    /// most first order.
    pub fn apply(&self, f: &RadialFunction<T>) -> RadialFunction<T> {
        let op = self.clone();
        let g = f.clone();
        let value: ComplexFn<T> = Arc::new(move |r| op.apply_at(&g, r));
        let d1: Option<ComplexFn<T>> = (self.order <= 1).then(|| {
            let op = self.clone();
            let g = f.clone();
            let d: ComplexFn<T> = Arc::new(move |r| {
                let (f0, f1) = (g.eval(r), g.derivative(r));
                let mut acc = f1 * op.coeff0.eval(r) + f0 * op.coeff0.deriv(r);
                if op.order == 1 {
                    acc = acc + g.second_derivative(r) * op.coeff1.eval(r) + f1 * op.coeff1.deriv(r);
                }
                acc * op.prefactor
            });
            d
        });
        RadialFunction { m: f.m + T::from_i32(self.delta_m).unwrap(), value, d1, d2: None }
    }

    /// self ∘ inner, for operators of order at most one each.
    pub fn compose(&self, inner: &RadialOperator<T>) -> RadialOperator<T> {
        assert!(self.order <= 1 && inner.order <= 1, "composition supports first-order factors");
        let (a, b) = (self.clone(), inner.clone());
        let (a2, b2) = (self.clone(), inner.clone());
        let (a3, b3) = (self.clone(), inner.clone());
        let c2 = Coefficient::numeric(move |r| a.coeff1.eval(r) * b.coeff1.eval(r));
        let c1 = Coefficient::numeric(move |r| {
            a2.coeff1.eval(r) * (b2.coeff1.deriv(r) + b2.coeff0.eval(r))
                + a2.coeff0.eval(r) * b2.coeff1.eval(r)
        });
        let c0 = Coefficient::numeric(move |r| {
            a3.coeff1.eval(r) * b3.coeff0.deriv(r) + a3.coeff0.eval(r) * b3.coeff0.eval(r)
        });
        RadialOperator {
            delta_m: self.delta_m + inner.delta_m,
            sector: inner.sector,
            prefactor: self.prefactor * inner.prefactor,
            coeff2: c2,
            coeff1: c1,
            coeff0: c0,
            order: self.order + inner.order,
        }
    }

    /// Absorbs a real prefactor into the coefficients.
    fn normalized(&self) -> RadialOperator<T> {
        assert!(
            self.prefactor.im == T::zero(),
            "only real prefactors can be absorbed into real coefficients"
        );
        let p = self.prefactor.re;
        let scale = |c: &Coefficient<T>| {
            let (v, d) = (c.value.clone(), c.derivative.clone());
            Coefficient {
                value: Arc::new(move |r| v(r) * p) as ScalarFn<T>,
                derivative: d.map(|d| Arc::new(move |r| d(r) * p) as ScalarFn<T>),
            }
        };
        RadialOperator {
            prefactor: Complex::new(T::one(), T::zero()),
            coeff2: scale(&self.coeff2),
            coeff1: scale(&self.coeff1),
            coeff0: scale(&self.coeff0),
            ..self.clone()
        }
    }

    /// a·self + c, for operators with a real prefactor.
    pub fn affine(&self, a: T, c: T) -> RadialOperator<T> {
        let mut out = self.normalized();
        let scale = |coeff: &Coefficient<T>, shift: T| {
            let (v, d) = (coeff.value.clone(), coeff.derivative.clone());
            Coefficient {
                value: Arc::new(move |r| v(r) * a + shift) as ScalarFn<T>,
                derivative: d.map(|d| Arc::new(move |r| d(r) * a) as ScalarFn<T>),
            }
        };
        out.coeff2 = scale(&out.coeff2, T::zero());
        out.coeff1 = scale(&out.coeff1, T::zero());
        out.coeff0 = scale(&out.coeff0, c);
        out
    }

    /// self − other, for operators with real prefactors and equal shifts.
    pub fn difference(&self, other: &RadialOperator<T>) -> RadialOperator<T> {
        assert_eq!(self.delta_m, other.delta_m, "sector shifts differ");
        let (a, b) = (self.normalized(), other.normalized());
        let sub = |x: &Coefficient<T>, y: &Coefficient<T>| {
            let (x, y) = (x.clone(), y.clone());
            let (x2, y2) = (x.clone(), y.clone());
            Coefficient {
                value: Arc::new(move |r| x.eval(r) - y.eval(r)) as ScalarFn<T>,
                derivative: Some(Arc::new(move |r| x2.deriv(r) - y2.deriv(r)) as ScalarFn<T>),
            }
        };
        RadialOperator {
            delta_m: a.delta_m,
            sector: a.sector,
            prefactor: Complex::new(T::one(), T::zero()),
            coeff2: sub(&a.coeff2, &b.coeff2),
            coeff1: sub(&a.coeff1, &b.coeff1),
            coeff0: sub(&a.coeff0, &b.coeff0),
            order: a.order.max(b.order),
        }
    }
}

/// Angular coupling g(r) entering the generators as g/S: β·vers for the
/// gauged realization, λ − (b/κ)cos√κr for the induced one. Returns (g, g').
#[derive(Debug, Clone, Copy, PartialEq)]
enum Coupling<T> {
    Gauged { beta: T },
    Induced { lambda: T, b: T },
}

impl<T: Real> Coupling<T> {
    fn eval(&self, kappa: Curvature<T>, r: T) -> (T, T) {
        match *self {
            Coupling::Gauged { beta } => (beta * versine(kappa, r), beta * measure_weight(kappa, r)),
            Coupling::Induced { lambda, b } => {
                let t = kappa_trig(kappa, r);
                (lambda - b / kappa.kappa * t.c, b * t.s)
            }
        }
    }

    fn central(&self) -> T {
        match *self {
            Coupling::Gauged { beta } => -beta,
            Coupling::Induced { b, .. } => -b,
        }
    }
}

/// (mC + g)/S and its derivative.
fn shift_potential<T: Real>(kappa: Curvature<T>, coupling: Coupling<T>, m: T, r: T) -> (T, T) {
    let t = kappa_trig(kappa, r);
    let (g, dg) = coupling.eval(kappa, r);
    let num = m * t.c + g;
    let value = num / t.s;
    let dnum = -m * kappa.kappa * t.s + dg;
    (value, (dnum * t.s - num * t.c) / (t.s * t.s))
}

fn shift_with<T: Real>(kappa: Curvature<T>, coupling: Coupling<T>, sign: Sign, m: T) -> RadialOperator<T> {
    let s: T = sign.value();
    let c0 = Coefficient::new(
        move |r| s * shift_potential(kappa, coupling, m, r).0,
        move |r| s * shift_potential(kappa, coupling, m, r).1,
    );
    RadialOperator::first_order(
        sign.step(),
        Complex::new(T::zero(), T::one()),
        Coefficient::constant(-T::one()),
        c0,
    )
    .for_sector(m)
}

/// J^± on sector m: R ↦ i(−R' ± (mC + β vers)/S · R), landing in sector m ± 1.
///
/// No 1/√2 is included, so ‖J^±Ψ‖² = 2 × (algebraic coefficient)².
pub fn shift_operator<T: Real>(params: &ModelParams<T>, sign: Sign, m: T) -> RadialOperator<T> {
    shift_with(params.kappa, Coupling::Gauged { beta: params.beta }, sign, m)
}

/// Radial reduction of one generator.
#[derive(Debug, Clone)]
pub enum LocalGenerator<T> {
    /// Acts within the sector.
    Diagonal(RadialOperator<T>),
    /// weights.0 · J⁺ + weights.1 · J⁻.
    Split { raise: RadialOperator<T>, lower: RadialOperator<T>, weights: (Complex<T>, Complex<T>) },
}

impl<T: Real> LocalGenerator<T> {
    /// Image of e^{imθ}R as a sector field.
    pub fn apply(&self, f: &RadialFunction<T>) -> Vec<(T, RadialFunction<T>)> {
        match self {
            LocalGenerator::Diagonal(op) => vec![(f.m, op.apply(f))],
            LocalGenerator::Split { raise, lower, weights } => vec![
                (f.m + T::one(), raise.apply(f).scaled(weights.0)),
                (f.m - T::one(), lower.apply(f).scaled(weights.1)),
            ],
        }
    }
}

fn generator_with<T: Real>(
    kappa: Curvature<T>,
    coupling: Coupling<T>,
    which: Generator,
    m: T,
) -> LocalGenerator<T> {
    let half = T::lit(0.5);
    let split = |weights| LocalGenerator::Split {
        raise: shift_with(kappa, coupling, Sign::Plus, m),
        lower: shift_with(kappa, coupling, Sign::Minus, m),
        weights,
    };
    match which {
        Generator::J12 => LocalGenerator::Diagonal(RadialOperator::multiplication(m).for_sector(m)),
        Generator::B => LocalGenerator::Diagonal(RadialOperator::multiplication(coupling.central())),
        Generator::J01 => split((Complex::new(half, T::zero()), Complex::new(half, T::zero()))),
        Generator::J02 => split((Complex::new(T::zero(), -half), Complex::new(T::zero(), half))),
    }
}

/// Sector-m reduction of J̄01, J̄02, J̄12 or B for the gauged realization.
pub fn local_generator<T: Real>(params: &ModelParams<T>, which: Generator, m: T) -> LocalGenerator<T> {
    generator_with(params.kappa, Coupling::Gauged { beta: params.beta }, which, m)
}

/// Sector-m reduction of the realization induced from labels (λ, b).
pub fn general_generator<T: Real>(
    labels: &InductionLabels<T>,
    kappa: Curvature<T>,
    which: Generator,
    m: T,
) -> Result<LocalGenerator<T>> {
    if kappa.kappa == T::zero() {
        return Err(LandauError::Curvature {
            kappa: 0.0,
            reason: "the induced realization has no κ → 0 limit",
        });
    }
    Ok(generator_with(kappa, Coupling::Induced { lambda: labels.lambda, b: labels.b }, which, m))
}

/// J^± of the induced realization.
pub fn general_shift_operator<T: Real>(
    labels: &InductionLabels<T>,
    kappa: Curvature<T>,
    sign: Sign,
    m: T,
) -> Result<RadialOperator<T>> {
    if kappa.kappa == T::zero() {
        return Err(LandauError::Curvature {
            kappa: 0.0,
            reason: "the induced realization has no κ → 0 limit",
        });
    }
    Ok(shift_with(kappa, Coupling::Induced { lambda: labels.lambda, b: labels.b }, sign, m))
}

/// (A_r, A_θ) = (0, β vers_κ r).
pub fn gauge_potential<T: Real>(params: &ModelParams<T>, r: T) -> (T, T) {
    (T::zero(), params.beta * versine(params.kappa, r))
}

/// B_rθ = β·S(r).
pub fn field_strength<T: Real>(params: &ModelParams<T>, r: T) -> T {
    params.beta * measure_weight(params.kappa, r)
}

/// Minimal-coupling Hamiltonian on sector m:
/// −½R'' − (C/2S)R' + (m − β vers)²/(2S²) R.
pub fn hamiltonian<T: Real>(params: &ModelParams<T>, m: T) -> RadialOperator<T> {
    let (kappa, beta) = (params.kappa, params.beta);
    let half = T::lit(0.5);
    let c1 = Coefficient::new(
        move |r| {
            let t = kappa_trig(kappa, r);
            -half * t.c / t.s
        },
        move |r| {
            let s = measure_weight(kappa, r);
            half / (s * s)
        },
    );
    let c0 = Coefficient::new(
        move |r| {
            let s = measure_weight(kappa, r);
            let q = m - beta * versine(kappa, r);
            q * q * half / (s * s)
        },
        move |r| {
            let t = kappa_trig(kappa, r);
            let q = m - beta * versine(kappa, r);
            -q * (beta * t.s * t.s + q * t.c) / (t.s * t.s * t.s)
        },
    );
    RadialOperator::second_order(Coefficient::constant(-half), c1, c0).for_sector(m)
}

/// The Hamiltonian written out from the Casimir of the generators:
/// the θ-derivative enters with coefficient i(β − β vers·C/S²).
pub fn hamiltonian_expanded<T: Real>(params: &ModelParams<T>, m: T) -> RadialOperator<T> {
    let (kappa, beta) = (params.kappa, params.beta);
    let half = T::lit(0.5);
    let c1 = Coefficient::numeric(move |r| {
        let t = kappa_trig(kappa, r);
        -half * t.c / t.s
    });
    let c0 = Coefficient::numeric(move |r| {
        let t = kappa_trig(kappa, r);
        let v = versine(kappa, r);
        let s2 = t.s * t.s;
        let theta_coeff = beta - beta * v * t.c / s2;
        half * m * m / s2 - m * theta_coeff + half * beta * beta * v * v / s2
    });
    RadialOperator::second_order(Coefficient::constant(-half), c1, c0).for_sector(m)
}

/// ½ C̄ on sector m assembled from J⁺_{m−1} J⁻_m + κ(m² − m) − 2βm + β.
pub fn hamiltonian_from_casimir<T: Real>(params: &ModelParams<T>, m: T) -> RadialOperator<T> {
    let lower = shift_operator(params, Sign::Minus, m);
    let raise = shift_operator(params, Sign::Plus, m - T::one());
    let (k, b) = (params.k(), params.beta);
    let constant = k * (m * m - m) - T::lit(2.0) * b * m + b;
    raise.compose(&lower).affine(T::lit(0.5), T::lit(0.5) * constant).for_sector(m)
}

// ---------------------------------------------------------------------------
// Two-dimensional forms used by the finite-difference oracle.

fn cplx<T: Real>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

/// J̄01, J̄02, J̄12 or B acting on a sector field, with angular coupling g.
fn plane_with<T: Real>(kappa: Curvature<T>, coupling: Coupling<T>, which: Generator) -> PlaneOperator<T> {
    let i = cplx(T::zero(), T::one());
    let cot = move |r: T| {
        let t = kappa_trig(kappa, r);
        t.c / t.s
    };
    let gs = move |r: T| coupling.eval(kappa, r).0 / measure_weight(kappa, r);
    match which {
        Generator::J01 => Arc::new(move |f: &SectorField<T>| {
            f.d_r()
                .mul_cos()
                .scale(-i)
                .add(&f.d_theta().mul_real(cot).mul_sin().scale(i))
                .sub(&f.mul_real(gs).mul_sin())
        }),
        Generator::J02 => Arc::new(move |f: &SectorField<T>| {
            f.d_r()
                .mul_sin()
                .scale(-i)
                .sub(&f.d_theta().mul_real(cot).mul_cos().scale(i))
                .add(&f.mul_real(gs).mul_cos())
        }),
        Generator::J12 => Arc::new(move |f: &SectorField<T>| f.d_theta().scale(-i)),
        Generator::B => {
            let c = coupling.central();
            Arc::new(move |f: &SectorField<T>| f.scale(cplx(c, T::zero())))
        }
    }
}

/// Generator of the gauged realization as an operator on the plane chart.
pub fn plane_generator<T: Real>(params: &ModelParams<T>, which: Generator) -> PlaneOperator<T> {
    plane_with(params.kappa, Coupling::Gauged { beta: params.beta }, which)
}

/// Generator of the induced realization with labels (λ, b).
pub fn plane_general_generator<T: Real>(
    labels: &InductionLabels<T>,
    kappa: Curvature<T>,
    which: Generator,
) -> PlaneOperator<T> {
    plane_with(kappa, Coupling::Induced { lambda: labels.lambda, b: labels.b }, which)
}

/// The flat-space generators with the explicit r, r²/2 coefficients.
pub fn plane_generator_flat<T: Real>(beta: T, which: Generator) -> PlaneOperator<T> {
    let i = cplx(T::zero(), T::one());
    let half = T::lit(0.5);
    match which {
        Generator::J01 => Arc::new(move |f: &SectorField<T>| {
            f.d_r()
                .mul_cos()
                .scale(-i)
                .add(&f.d_theta().mul_real(|r| T::one() / r).mul_sin().scale(i))
                .sub(&f.mul_real(move |r| beta * r * half).mul_sin())
        }),
        Generator::J02 => Arc::new(move |f: &SectorField<T>| {
            f.d_r()
                .mul_sin()
                .scale(-i)
                .sub(&f.d_theta().mul_real(|r| T::one() / r).mul_cos().scale(i))
                .add(&f.mul_real(move |r| beta * r * half).mul_cos())
        }),
        Generator::J12 => Arc::new(move |f: &SectorField<T>| f.d_theta().scale(-i)),
        Generator::B => Arc::new(move |f: &SectorField<T>| f.scale(cplx(-beta, T::zero()))),
    }
}

/// Horizontal lift X*_j = X_j^μ D_μ with D = −i∂ − A.
pub fn plane_lift<T: Real>(params: &ModelParams<T>, which: Generator) -> PlaneOperator<T> {
    let kappa = params.kappa;
    let beta = params.beta;
    let i = cplx(T::zero(), T::one());
    let cot = move |r: T| {
        let t = kappa_trig(kappa, r);
        t.c / t.s
    };
    let d_theta = move |f: &SectorField<T>| {
        f.d_theta().scale(-i).sub(&f.mul_real(move |r| beta * versine(kappa, r)))
    };
    match which {
        Generator::J01 => Arc::new(move |f: &SectorField<T>| {
            f.d_r().scale(-i).mul_cos().sub(&d_theta(f).mul_real(cot).mul_sin())
        }),
        Generator::J02 => Arc::new(move |f: &SectorField<T>| {
            f.d_r().scale(-i).mul_sin().add(&d_theta(f).mul_real(cot).mul_cos())
        }),
        Generator::J12 => Arc::new(move |f: &SectorField<T>| d_theta(f)),
        Generator::B => Arc::new(|f: &SectorField<T>| SectorField::new(f.step)),
    }
}

/// C̄ = J̄01² + J̄02² + κJ̄12² + 2BJ̄12.
pub fn plane_extended_casimir<T: Real>(params: &ModelParams<T>) -> PlaneOperator<T> {
    let j01 = plane_generator(params, Generator::J01);
    let j02 = plane_generator(params, Generator::J02);
    let j12 = plane_generator(params, Generator::J12);
    let (k, b) = (params.k(), -params.beta);
    Arc::new(move |f: &SectorField<T>| {
        let l12 = j12(f);
        j01(&j01(f))
            .add(&j02(&j02(f)))
            .add(&j12(&l12).scale(cplx(k, T::zero())))
            .add(&l12.scale(cplx(T::lit(2.0) * b, T::zero())))
    })
}

/// C(X*) = J*01² + J*02² + κJ*12².
pub fn plane_lifted_casimir<T: Real>(params: &ModelParams<T>) -> PlaneOperator<T> {
    let j01 = plane_lift(params, Generator::J01);
    let j02 = plane_lift(params, Generator::J02);
    let j12 = plane_lift(params, Generator::J12);
    let k = params.k();
    Arc::new(move |f: &SectorField<T>| {
        j01(&j01(f)).add(&j02(&j02(f))).add(&j12(&j12(f)).scale(cplx(k, T::zero())))
    })
}

/// Vector field components (X^r, X^θ) of J01, J02, J12 with J = −iX.
pub fn vector_field<T: Real>(kappa: Curvature<T>, which: Generator, r: T, theta: T) -> (T, T) {
    let t = kappa_trig(kappa, r);
    let cot = t.c / t.s;
    match which {
        Generator::J01 => (theta.cos(), -cot * theta.sin()),
        Generator::J02 => (theta.sin(), cot * theta.cos()),
        Generator::J12 => (T::zero(), T::one()),
        Generator::B => (T::zero(), T::zero()),
    }
}

/// W_j with J̄_j = −i(X_j + W_j); purely imaginary for the rotational generators.
pub fn compensating_function<T: Real>(params: &ModelParams<T>, which: Generator, r: T, theta: T) -> Complex<T> {
    let gs = params.beta * versine(params.kappa, r) / measure_weight(params.kappa, r);
    match which {
        Generator::J01 => cplx(T::zero(), -gs * theta.sin()),
        Generator::J02 => cplx(T::zero(), gs * theta.cos()),
        _ => cplx(T::zero(), T::zero()),
    }
}

/// Both components of X^μ∂_μA_ν + A_μ∂_νX^μ − i∂_νW for one generator at
/// (r, θ), every partial derivative taken by central differences.
pub fn gauge_invariance_residual<T: Real>(
    params: &ModelParams<T>,
    which: Generator,
    r: T,
    theta: T,
) -> [Complex<T>; 2] {
    let kappa = params.kappa;
    let h = T::lit(1e-4);
    let a = |rr: T, _th: T| gauge_potential(params, rr);
    let x = |rr: T, th: T| vector_field(kappa, which, rr, th);
    let w = |rr: T, th: T| compensating_function(params, which, rr, th);
    let d_r = |f: &dyn Fn(T, T) -> T| fd_derivative(&|s| f(s, theta), r, h);
    let d_th = |f: &dyn Fn(T, T) -> T| fd_derivative(&|s| f(r, s), theta, h);
    let (xr, xt) = x(r, theta);
    let (ar, at) = a(r, theta);
    let i = cplx(T::zero(), T::one());
    let mut out = [cplx(T::zero(), T::zero()); 2];
    for (nu, slot) in out.iter_mut().enumerate() {
        let comp = |rr: T, th: T| if nu == 0 { a(rr, th).0 } else { a(rr, th).1 };
        let transport = xr * d_r(&comp) + xt * d_th(&comp);
        let xr_fn = |rr: T, th: T| x(rr, th).0;
        let xt_fn = |rr: T, th: T| x(rr, th).1;
        let (dxr, dxt) = if nu == 0 { (d_r(&xr_fn), d_r(&xt_fn)) } else { (d_th(&xr_fn), d_th(&xt_fn)) };
        let twist = ar * dxr + at * dxt;
        let w_re = |rr: T, th: T| w(rr, th).re;
        let w_im = |rr: T, th: T| w(rr, th).im;
        let dw = if nu == 0 {
            cplx(d_r(&w_re), d_r(&w_im))
        } else {
            cplx(d_th(&w_re), d_th(&w_im))
        };
        *slot = cplx(transport + twist, T::zero()) - i * dw;
    }
    out
}

/// −i[D_r, D_θ] by differencing A_θ, to compare with `field_strength`.
pub fn curvature_from_potential<T: Real>(params: &ModelParams<T>, r: T) -> T {
    fd_derivative(&|s| gauge_potential(params, s).1, r, T::lit(1e-4))
}
