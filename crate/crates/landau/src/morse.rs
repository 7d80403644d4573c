//! Horocyclic separation of the hyperbolic Landau problem and its reduction
//! to a particle in a Morse well.
//!
//! In horocyclic coordinates (a, b) the metric is da² + e^{2ka}db² with
//! k = √−κ. After the gauge change to A = (0, β(e^{ka}−1)/k) and the
//! substitution Φ = e^{iλb}ψ(a), the a-equation is
//! −ψ'' − kψ' + V(a)ψ = Eψ with V = (β − (β+kλ)e^{−ka})²/k², and E = 2𝓔.

use num_rational::Ratio;
use num_traits::{Signed, Zero};

use crate::eigenfunctions::confluent_terminating;
use crate::representation::ModelParams;
use crate::{LandauError, Real, Result};

fn root_curvature<T: Real>(params: &ModelParams<T>) -> Result<T> {
    let kappa = params.k();
    if kappa >= T::zero() {
        return Err(LandauError::Curvature {
            kappa: kappa.as_f64(),
            reason: "horocyclic coordinates need κ < 0",
        });
    }
    Ok((-kappa).sqrt())
}

/// 2 + 2cosh(ka) + k²b²e^{ka}, which is 2(1 + x⁰).
fn denominator<T: Real>(k: T, a: T, b: T) -> T {
    let e = (k * a).exp();
    T::lit(2.0) + T::lit(2.0) * (k * a).cosh() + k * k * b * b * e
}

/// The polar-gauge potential β·vers_κ(r) dθ written in horocyclic
/// coordinates, as (V_a, V_b).
pub fn horocyclic_potential<T: Real>(params: &ModelParams<T>, a: T, b: T) -> Result<(T, T)> {
    let k = root_curvature(params)?;
    let beta = params.beta;
    let d = denominator(k, a, b);
    let e = (k * a).exp();
    let two = T::lit(2.0);
    Ok((-two * beta * b / d, beta * e * (two * (k * a).sinh() / k + k * b * b * e) / d))
}

/// The Landau-gauge potential (0, β(e^{ka} − 1)/k) in which the equation
/// separates.
pub fn separated_potential<T: Real>(params: &ModelParams<T>, a: T) -> Result<(T, T)> {
    let k = root_curvature(params)?;
    Ok((T::zero(), params.beta * (k * a).exp_m1() / k))
}

/// χ(a, b) = (β/k²)(kb − 2·arctan(kbe^{ka}/(1 + e^{ka}))). The factor
/// e^{iχ} carries the polar gauge into the separated one.
pub fn separation_phase<T: Real>(params: &ModelParams<T>, a: T, b: T) -> Result<T> {
    let k = root_curvature(params)?;
    let e = (k * a).exp();
    let t = (k * b * e / (T::one() + e)).atan();
    Ok(params.beta / (k * k) * (k * b - T::lit(2.0) * t))
}

/// ∂χ/∂b = (β/k)(e^{−ka} − e^{ka} + k²b²e^{ka})/(2 + 2cosh(ka) + k²b²e^{ka}).
pub fn separation_integrand<T: Real>(params: &ModelParams<T>, a: T, b: T) -> Result<T> {
    let k = root_curvature(params)?;
    let e = (k * a).exp();
    Ok(params.beta / k * (T::one() / e - e + k * k * b * b * e) / denominator(k, a, b))
}

/// The a-equation −ψ'' − kψ' + V(a)ψ = Eψ for separation constant λ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedOde<T> {
    pub k: T,
    pub beta: T,
    pub lambda_sep: T,
}

impl<T: Real> ReducedOde<T> {
    /// Coefficients of ψ'', ψ' in the operator whose eigenvalue is E.
    pub fn derivative_coefficients(&self) -> (T, T) {
        (-T::one(), -self.k)
    }

    /// V(a) = −(1/κ)e^{−2ka}(β(e^{ka} − 1) − kλ)².
    pub fn potential(&self, a: T) -> T {
        let k = self.k;
        let g = self.beta * (k * a).exp_m1() - k * self.lambda_sep;
        g * g * (-T::lit(2.0) * k * a).exp() / (k * k)
    }

    /// The point where the bracket β(e^{ka} − 1) − kλ vanishes, if any.
    pub fn potential_zero(&self) -> Option<T> {
        let arg = self.k * self.lambda_sep / self.beta;
        (arg > -T::one()).then(|| arg.ln_1p() / self.k)
    }

    /// −ψ'' − kψ' + Vψ − Eψ at a, given ψ and its derivatives there.
    pub fn residual(&self, a: T, psi: [T; 3], energy: T) -> T {
        -psi[2] - self.k * psi[1] + (self.potential(a) - energy) * psi[0]
    }

    /// Lowest eigenvalue E by finite differences on [a_min, a_max] with n
    /// interior points and Dirichlet ends, after removing the first-order
    /// term through ψ = e^{−ka/2}φ.
    pub fn lowest_eigenvalue(&self, a_min: T, a_max: T, n: usize) -> T {
        let h = (a_max - a_min) / T::from_usize(n + 1).unwrap();
        let shift = self.k * self.k / T::lit(4.0);
        let diag: Vec<T> = (1..=n)
            .map(|i| {
                let a = a_min + h * T::from_usize(i).unwrap();
                T::lit(2.0) / (h * h) + self.potential(a) + shift
            })
            .collect();
        let off = -T::one() / (h * h);
        lowest_tridiagonal(&diag, off)
    }
}

/// Smallest eigenvalue of the symmetric tridiagonal matrix with the given
/// diagonal and constant off-diagonal, by Sturm-count bisection.
fn lowest_tridiagonal<T: Real>(diag: &[T], off: T) -> T {
    let count_below = |x: T| {
        let mut q = T::one();
        let mut count = 0;
        for (i, &d) in diag.iter().enumerate() {
            let prev = if i == 0 { T::zero() } else { off * off / q };
            q = d - x - prev;
            if q == T::zero() {
                q = T::epsilon();
            }
            if q < T::zero() {
                count += 1;
            }
        }
        count
    };
    let radius = T::lit(2.0) * off.abs();
    let mut lo = diag.iter().fold(T::infinity(), |m, &d| m.min(d - radius));
    let mut hi = diag.iter().fold(T::neg_infinity(), |m, &d| m.max(d + radius));
    for _ in 0..200 {
        let mid = (lo + hi) / T::lit(2.0);
        if count_below(mid) >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= T::epsilon() * hi.abs().max(T::one()) {
            break;
        }
    }
    (lo + hi) / T::lit(2.0)
}

pub fn reduced_ode_coefficients<T: Real>(params: &ModelParams<T>, lambda_sep: T) -> Result<ReducedOde<T>> {
    let k = root_curvature(params)?;
    Ok(ReducedOde { k, beta: params.beta, lambda_sep })
}

/// Start of the continuous spectrum in the E-convention:
/// E = β²/|κ| − κ/4, where the shifted energy E' reaches zero.
pub fn continuum_threshold<T: Real>(params: &ModelParams<T>) -> Result<T> {
    let k = root_curvature(params)?;
    let beta = params.beta;
    Ok(beta * beta / (k * k) + k * k / T::lit(4.0))
}

/// Bookkeeping of the Morse form −φ'' + (β²/k²)(e^{−2ka} − 2e^{−ka})φ = E'φ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MorseReduction<T> {
    pub lambda_sep: T,
    /// E = 2𝓔.
    pub e: T,
    /// E' = E + β²/κ + κ/4.
    pub e_prime: T,
    /// √(−E')/k; meaningful below the threshold.
    pub s: T,
    /// ξ = xi_scale·e^{−ka}.
    pub xi_scale: T,
    /// Translation t with a = a_Morse + t.
    pub translation: T,
}

impl<T: Real> MorseReduction<T> {
    /// Requires (β + kλ)/β > 0, which holds whenever λ has the sign of β,
    /// so that the well is brought to standard position by a translation.
    pub fn new(params: &ModelParams<T>, lambda_sep: T, energy: T) -> Result<Self> {
        let k = root_curvature(params)?;
        let beta = params.beta;
        let ratio = (beta + k * lambda_sep) / beta;
        if beta == T::zero() || ratio.is_nan() || ratio <= T::zero() {
            return Err(LandauError::Parameter(
                "Morse form needs β ≠ 0 and (β + √−κ·λ)/β > 0".into(),
            ));
        }
        let e_prime = energy - beta * beta / (k * k) - k * k / T::lit(4.0);
        Ok(Self {
            lambda_sep,
            e: energy,
            e_prime,
            s: (-e_prime).max(T::zero()).sqrt() / k,
            xi_scale: T::lit(2.0) * beta.abs() / (k * k),
            translation: ratio.ln() / k,
        })
    }

    /// l = |β|/|κ| − (s + ½).
    pub fn level(&self) -> T {
        self.xi_scale / T::lit(2.0) - self.s - T::lit(0.5)
    }
}

/// One bound state of the Morse well.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MorseLevel<T> {
    pub l: u32,
    /// 𝓔 = E/2.
    pub energy: T,
    pub e: T,
    pub e_prime: T,
    pub s: T,
}

/// Bound states: 0 ≤ l < |β|/|κ| − ½, s = |β|/|κ| − l − ½ and
/// E' = −|κ|s².
pub fn morse_discrete_spectrum<T: Real>(params: &ModelParams<T>) -> Result<Vec<MorseLevel<T>>> {
    let k = root_curvature(params)?;
    let k2 = k * k;
    let depth = params.beta.abs() / k2;
    let threshold = continuum_threshold(params)?;
    let mut out = Vec::new();
    let mut l = 0u32;
    loop {
        let s = crate::spectrum::snap_half_integer(depth - T::from_u32(l).unwrap() - T::lit(0.5));
        if s <= T::zero() {
            break;
        }
        let e_prime = -k2 * s * s;
        let e = e_prime + threshold;
        out.push(MorseLevel { l, energy: e / T::lit(2.0), e, e_prime, s });
        l += 1;
    }
    Ok(out)
}

/// 𝓔_l of the Morse bound state in exact arithmetic, or `None` beyond the
/// last bound state.
pub fn morse_energy_exact(kappa: Ratio<i64>, beta: Ratio<i64>, l: i64) -> Result<Option<Ratio<i64>>> {
    if !kappa.is_negative() {
        return Err(LandauError::Curvature {
            kappa: *kappa.numer() as f64 / *kappa.denom() as f64,
            reason: "horocyclic coordinates need κ < 0",
        });
    }
    let k2 = -kappa;
    let half = Ratio::new(1, 2);
    let s = beta.abs() / k2 - Ratio::from_integer(l) - half;
    if s <= Ratio::zero() || l < 0 {
        return Ok(None);
    }
    let e = -k2 * s * s + beta * beta / k2 + k2 / Ratio::from_integer(4);
    Ok(Some(e * half))
}

/// ψ(a) = e^{−ξ/2}ξ^s M(−l, 2s+1, ξ), ξ = (2|β|/|κ|)e^{−ka}, in the
/// Morse variable, scaled to peak value one on [a_min, a_max].
pub fn morse_eigenfunction<T: Real>(
    params: &ModelParams<T>,
    l: u32,
    a_min: T,
    a_max: T,
) -> Result<impl Fn(T) -> T> {
    let k = root_curvature(params)?;
    let level = morse_discrete_spectrum(params)?
        .into_iter()
        .find(|lv| lv.l == l)
        .ok_or(LandauError::Inadmissible { l: l as f64, m: 0.0, reason: "beyond the last Morse bound state".into() })?;
    let scale = T::lit(2.0) * params.beta.abs() / (k * k);
    let s = level.s;
    let c = T::lit(2.0) * s + T::one();
    let raw = move |a: T| {
        let xi = scale * (-k * a).exp();
        let m = confluent_terminating(l, c, xi, false).unwrap_or_else(|_| T::nan());
        (-xi / T::lit(2.0) + s * xi.ln()).exp() * m
    };
    let peak = (0..=2000)
        .map(|i| raw(a_min + (a_max - a_min) * T::from_i32(i).unwrap() / T::lit(2000.0)).abs())
        .fold(T::zero(), T::max);
    Ok(move |a: T| raw(a) / peak)
}

/// max |−ψ'' + (β²/k²)(e^{−2ka} − 2e^{−ka})ψ − E'ψ| over the grid, with ψ''
/// from Richardson-extrapolated central differences at spacings h and 2h.
pub fn morse_residual<T: Real>(params: &ModelParams<T>, l: u32, grid: &[T], h: T) -> Result<T> {
    let k = root_curvature(params)?;
    let (lo, hi) = grid.iter().fold((T::infinity(), T::neg_infinity()), |(a, b), &x| (a.min(x), b.max(x)));
    let psi = morse_eigenfunction(params, l, lo, hi)?;
    let level = morse_discrete_spectrum(params)?[l as usize];
    let depth = params.beta * params.beta / (k * k);
    let two = T::lit(2.0);
    let second = |a: T, h: T| (psi(a + h) - two * psi(a) + psi(a - h)) / (h * h);
    Ok(grid
        .iter()
        .map(|&a| {
            let d2 = (T::lit(4.0) * second(a, h) - second(a, two * h)) / T::lit(3.0);
            let v = depth * ((-two * k * a).exp() - two * (-k * a).exp());
            (-d2 + (v - level.e_prime) * psi(a)).abs()
        })
        .fold(T::zero(), T::max))
}

/// Coefficients (of f'', f', f) of the confluent equation
/// ξf'' + (c − ξ)f' + lf = 0 at ξ. The Morse case has c = 2s + 1; the planar
/// radial equation has c = m + 1.
pub fn confluent_equation<T: Real>(c: T, l: T, xi: T) -> [T; 3] {
    [xi, c - xi, l]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{embed_horocyclic, HorocyclicCoords};
    use crate::numerics::{gauss_legendre_integrate, linspace};
    use crate::representation::gauge_potential;
    use crate::spectrum::{admissible_levels, energy, energy_exact, Family};
    use approx::assert_relative_eq;

    fn params(k: f64, b: f64) -> ModelParams<f64> {
        ModelParams::new(k, b).unwrap()
    }

    fn r(n: i64) -> Ratio<i64> {
        Ratio::from_integer(n)
    }

    #[test]
    fn potentials_vanish_at_the_origin() {
        let (va, vb) = horocyclic_potential(&params(-1.0, 2.0), 0.0, 0.0).unwrap();
        assert_eq!(va, 0.0);
        assert_eq!(vb, 0.0);
        let (va, vb) = horocyclic_potential(&params(-1.0, 2.0), 1.0, 0.5).unwrap();
        assert!(va.is_finite() && vb.is_finite());
        assert!(horocyclic_potential(&params(1.0, 2.0), 0.0, 0.0).is_err());
    }

    /// Pulls back β·vers(r)dθ through the embedding by differencing θ.
    fn pulled_back(p: &ModelParams<f64>, a: f64, b: f64) -> (f64, f64) {
        let point = |a: f64, b: f64| embed_horocyclic(p.kappa, HorocyclicCoords { a, b }).unwrap();
        let theta = |a: f64, b: f64| {
            let x = point(a, b);
            x.x2.atan2(x.x1)
        };
        let x = point(a, b);
        let k = (-p.k()).sqrt();
        let rad = x.x0.acosh() / k;
        let a_theta = gauge_potential(p, rad).1;
        let h = 1e-6;
        (
            a_theta * (theta(a + h, b) - theta(a - h, b)) / (2.0 * h),
            a_theta * (theta(a, b + h) - theta(a, b - h)) / (2.0 * h),
        )
    }

    #[test]
    fn potential_is_the_polar_gauge_pulled_back() {
        for k in [-1.0, -4.0, -0.25] {
            let p = params(k, 2.0);
            for (a, b) in [(0.3, 0.7), (-0.5, 1.2), (1.0, 0.5)] {
                let (va, vb) = horocyclic_potential(&p, a, b).unwrap();
                let (ea, eb) = pulled_back(&p, a, b);
                assert_relative_eq!(va, ea, epsilon = 1e-7);
                assert_relative_eq!(vb, eb, epsilon = 1e-7);
            }
        }
    }

    #[test]
    fn field_strength_is_beta_times_area() {
        let h = 1e-5;
        for k in [-1.0, -4.0] {
            let p = params(k, 2.0);
            let kk = (-k).sqrt();
            for (a, b) in [(0.3, 0.7), (-0.5, 1.2)] {
                let v = |a, b| horocyclic_potential(&p, a, b).unwrap();
                let curl = (v(a + h, b).1 - v(a - h, b).1) / (2.0 * h) - (v(a, b + h).0 - v(a, b - h).0) / (2.0 * h);
                assert_relative_eq!(curl, 2.0 * (kk * a).exp(), max_relative = 1e-7);
                let s = |a| separated_potential(&p, a).unwrap().1;
                let curl_sep = (s(a + h) - s(a - h)) / (2.0 * h);
                assert_relative_eq!(curl_sep, 2.0 * (kk * a).exp(), max_relative = 1e-7);
            }
        }
    }

    #[test]
    fn phase_is_the_gauge_function() {
        let h = 1e-6;
        for k in [-1.0, -4.0] {
            let p = params(k, 2.0);
            for (a, b) in [(0.3, 0.7), (-0.5, 1.2), (1.0, -0.4)] {
                let chi = |a, b| separation_phase(&p, a, b).unwrap();
                let (va, vb) = horocyclic_potential(&p, a, b).unwrap();
                let (sa, sb) = separated_potential(&p, a).unwrap();
                assert_relative_eq!((chi(a + h, b) - chi(a - h, b)) / (2.0 * h), va - sa, epsilon = 1e-7);
                assert_relative_eq!((chi(a, b + h) - chi(a, b - h)) / (2.0 * h), vb - sb, epsilon = 1e-7);
            }
        }
    }

    #[test]
    fn phase_examples() {
        let p = params(-1.0, 2.0);
        assert_eq!(separation_phase(&p, 0.0, 0.0).unwrap(), 0.0);
        assert_eq!(separation_phase(&params(-1.0, 0.0), 0.4, 0.9).unwrap(), 0.0);
        let quad = gauss_legendre_integrate(|b| separation_integrand(&p, 0.3, b).unwrap(), 0.0, 0.7, 64);
        assert_relative_eq!(separation_phase(&p, 0.3, 0.7).unwrap(), quad, epsilon = 1e-13);
    }

    #[test]
    fn reduced_equation() {
        let ode = reduced_ode_coefficients(&params(-1.0, 2.0), 1.0).unwrap();
        assert_relative_eq!(ode.potential(0.0), 1.0, epsilon = 1e-15);
        let a0 = ode.potential_zero().unwrap();
        assert_relative_eq!(a0, 1.5f64.ln(), epsilon = 1e-15);
        assert!(ode.potential(a0).abs() < 1e-28);
        assert_eq!(ode.derivative_coefficients(), (-1.0, -1.0));
        // Harmonic form β²(a − λ/β)² as κ → 0.
        let near = ReducedOde { k: 1e-4, beta: 2.0, lambda_sep: 0.6 };
        for a in [-1.0, 0.3, 2.0] {
            assert_relative_eq!(near.potential(a), 4.0 * (a - 0.3f64).powi(2), epsilon = 2e-3);
        }
    }

    #[test]
    fn separated_equation_from_the_gauge_form() {
        // −(∂_a² + k∂_a) + e^{−2ka}(λ − A_b)² on e^{iλb}ψ(a) reproduces V.
        let p = params(-4.0, 4.0);
        let ode = reduced_ode_coefficients(&p, 0.7).unwrap();
        for a in [-0.8, 0.1, 1.3] {
            let ab = separated_potential(&p, a).unwrap().1;
            assert_relative_eq!(ode.potential(a), (-4.0 * a).exp() * (0.7 - ab).powi(2), max_relative = 1e-12);
        }
    }

    #[test]
    fn thresholds() {
        assert_relative_eq!(continuum_threshold(&params(-1.0, 2.0)).unwrap(), 4.25);
        assert_relative_eq!(continuum_threshold(&params(-1.0, 0.0)).unwrap(), 0.25);
        assert_eq!(admissible_levels(&params(-1.0, 0.0), Family::Lowest).count(), 0);
        // Large-a limit of V plus the k²/4 from removing the first derivative.
        let p = params(-4.0, 2.0);
        let ode = reduced_ode_coefficients(&p, 0.5).unwrap();
        let asymptote = ode.potential(40.0) + 1.0;
        assert_relative_eq!(continuum_threshold(&p).unwrap(), asymptote, epsilon = 1e-12);
        assert_relative_eq!(asymptote, 2.0, epsilon = 1e-12);
    }

    #[test]
    fn discrete_spectrum() {
        let p = params(-1.0, 2.0);
        let levels = morse_discrete_spectrum(&p).unwrap();
        assert_eq!(levels.len(), 2);
        assert_relative_eq!(levels[0].energy, 1.0, epsilon = 1e-14);
        assert_relative_eq!(levels[1].energy, 2.0, epsilon = 1e-14);
        assert_relative_eq!(levels[0].e_prime, -2.25, epsilon = 1e-14);
        assert_relative_eq!(levels[0].s, 1.5);
        let red = MorseReduction::new(&p, 0.0, levels[0].e).unwrap();
        assert_relative_eq!(red.level(), 0.0, epsilon = 1e-14);
        assert!(morse_discrete_spectrum(&ModelParams::unchecked(-1.0, 0.4)).unwrap().is_empty());
        let threshold = continuum_threshold(&p).unwrap();
        assert!(levels.iter().all(|l| l.e < threshold));
    }

    #[test]
    fn matches_the_representation_spectrum_exactly() {
        for (k, b) in [(r(-1), r(2)), (r(-1), Ratio::new(7, 2)), (Ratio::new(-1, 2), r(3)), (r(-2), r(-5))] {
            let family = if b.is_negative() { Family::Highest } else { Family::Lowest };
            let n = admissible_levels(&ModelParams::<f64>::exact(k, b).unwrap(), family).count() as i64;
            for l in 0..n {
                let morse = morse_energy_exact(k, b, l).unwrap().expect("bound state");
                assert_eq!(morse, energy_exact(k, b, family, l).unwrap(), "κ={k} β={b} l={l}");
            }
            assert!(morse_energy_exact(k, b, n).unwrap().is_none());
        }
        let p = params(-1.0, 3.5);
        for lv in morse_discrete_spectrum(&p).unwrap() {
            assert_relative_eq!(lv.energy, energy(&p, Family::Lowest, lv.l as f64).unwrap(), epsilon = 1e-13);
        }
    }

    #[test]
    fn gap_closes_towards_the_cutoff() {
        let p = params(-1.0, 5.0);
        let threshold = continuum_threshold(&p).unwrap();
        let gaps: Vec<f64> = morse_discrete_spectrum(&p).unwrap().iter().map(|l| threshold - l.e).collect();
        assert!(gaps.windows(2).all(|w| w[1] < w[0]));
        assert!(gaps.last().unwrap() < &1.0);
    }

    #[test]
    fn eigenfunction_residual() {
        let grid = linspace(-5.0, 15.0, 401);
        // The deep well at κ = −0.5 sits at the roundoff floor ε/h² of the
        // second difference for h = 1e-3, so it is checked at h = 2e-3.
        for (k, b, h) in [(-1.0, 2.0, 1e-3), (-1.0, 3.5, 1e-3), (-2.0, 3.0, 1e-3), (-0.5, 3.0, 2e-3)] {
            let p = params(k, b);
            for lv in morse_discrete_spectrum(&p).unwrap() {
                let res = morse_residual(&p, lv.l, &grid, h).unwrap();
                assert!(res < 1e-8, "κ={k} β={b} l={}: {res}", lv.l);
            }
        }
    }

    #[test]
    fn kummer_equation() {
        // M(−l, 2s+1, ξ) solves the confluent equation with c = 2s + 1, the
        // planar radial equation at m = 2s.
        let p = params(-1.0, 3.5);
        for lv in morse_discrete_spectrum(&p).unwrap() {
            let c = 2.0 * lv.s + 1.0;
            let m = 2.0 * lv.s;
            assert_eq!(confluent_equation(c, lv.l as f64, 1.0), confluent_equation(m + 1.0, lv.l as f64, 1.0));
            let f = |x: f64| confluent_terminating(lv.l, c, x, false).unwrap();
            for xi in [0.5, 2.0, 6.0] {
                let h = 1e-3;
                let d1 = (f(xi + h) - f(xi - h)) / (2.0 * h);
                let d2 = (f(xi + h) - 2.0 * f(xi) + f(xi - h)) / (h * h);
                let [c2, c1, c0] = confluent_equation(c, lv.l as f64, xi);
                let scale = f(xi).abs().max(1.0);
                assert!((c2 * d2 + c1 * d1 + c0 * f(xi)).abs() < 1e-5 * scale);
            }
        }
    }

    #[test]
    fn harmonic_limit() {
        let ode = reduced_ode_coefficients(&ModelParams::unchecked(-1e-3, 2.0), 0.0).unwrap();
        let e = ode.lowest_eigenvalue(-8.0, 8.0, 4000);
        assert!((e / 2.0 - 1.0).abs() < 1e-2, "{e}");
    }

    #[test]
    fn translation_requires_matching_signs() {
        let p = params(-1.0, 2.0);
        assert!(MorseReduction::new(&p, 1.0, 2.0).is_ok());
        assert!(MorseReduction::new(&p, -3.0, 2.0).is_err());
        let red = MorseReduction::new(&p, 1.0, 2.0).unwrap();
        let ode = reduced_ode_coefficients(&p, 1.0).unwrap();
        // After the translation the well has depth β²/k² at a = 0.
        assert_relative_eq!(ode.potential(red.translation), 0.0, epsilon = 1e-14);
        assert_relative_eq!(red.xi_scale, 4.0);
    }
}
