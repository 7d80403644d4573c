//! Energies, level structure and degeneracies of the two bounded families of
//! unitary representations, plus the conversion to physical units.

use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive};

use crate::representation::{ModelParams, Sign};
use crate::{LandauError, Real, Result};

/// Lowest-weight family (β ≥ 0) or highest-weight family (β ≤ 0).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Lowest,
    Highest,
}

impl Family {
    /// The family carrying bound states for the sign of β; β = 0 uses the lowest one.
    pub fn for_beta<T: Real>(beta: T) -> Self {
        if beta < T::zero() {
            Family::Highest
        } else {
            Family::Lowest
        }
    }

    fn check<T: Real>(self, beta: T) -> Result<()> {
        let ok = match self {
            Family::Lowest => beta >= T::zero(),
            Family::Highest => beta <= T::zero(),
        };
        if ok {
            Ok(())
        } else {
            Err(LandauError::FamilySign { beta: beta.as_f64() })
        }
    }

    /// +1 for the lowest family, −1 for the highest.
    fn sign<T: Real>(self) -> T {
        match self {
            Family::Lowest => T::one(),
            Family::Highest => -T::one(),
        }
    }
}

/// One state: family, level l and magnetic number m. With twisted boundary
/// conditions m − α is an integer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateLabel<T> {
    pub family: Family,
    pub l: T,
    pub m: T,
    pub alpha: T,
}

impl<T: Real> StateLabel<T> {
    pub fn new(family: Family, l: T, m: T) -> Self {
        Self { family, l, m, alpha: T::zero() }
    }

    pub fn lowest(l: i64, m: i64) -> Self {
        Self::new(Family::Lowest, T::from_i64(l).unwrap(), T::from_i64(m).unwrap())
    }

    pub fn highest(l: i64, m: i64) -> Self {
        Self::new(Family::Highest, T::from_i64(l).unwrap(), T::from_i64(m).unwrap())
    }

    pub fn moving(family: Family, l: T, m: T, alpha: T) -> Self {
        Self { family, l, m, alpha }
    }

    /// Integer labels (standard mode).
    pub fn is_standard(&self) -> bool {
        self.alpha == T::zero() && self.l.fract() == T::zero() && self.m.fract() == T::zero()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Degeneracy {
    Finite(u64),
    CountablyInfinite,
}

/// Closed m-interval; `None` marks an unbounded end.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MRange<T> {
    pub min: Option<T>,
    pub max: Option<T>,
}

impl<T: Real> MRange<T> {
    pub fn contains(&self, m: T) -> bool {
        self.min.is_none_or(|lo| m >= lo) && self.max.is_none_or(|hi| m <= hi)
    }

    /// Integers of the range intersected with [lo, hi].
    pub fn integers_within(&self, lo: i64, hi: i64) -> Vec<i64> {
        let start = self.min.map_or(lo, |v| v.ceil().to_i64().unwrap().max(lo));
        let end = self.max.map_or(hi, |v| v.floor().to_i64().unwrap().min(hi));
        (start..=end).collect()
    }
}

/// One Landau level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumLine<T> {
    pub l: u64,
    pub energy: T,
    pub degeneracy: Degeneracy,
    pub m_range: MRange<T>,
}

/// ε_l = κl(l+1)/2 + β(l+½) for the lowest family, κl(l+1)/2 − β(l+½) for the highest.
pub fn energy<T: Real>(params: &ModelParams<T>, family: Family, l: T) -> Result<T> {
    family.check(params.beta)?;
    if l < T::zero() {
        return Err(LandauError::Parameter(format!("level index l = {l} is negative")));
    }
    Ok(energy_unchecked(params, family, l))
}

/// The same closed form without the sign and range checks, for real labels
/// of moving states and for lines off the physical lattice.
pub fn energy_unchecked<T: Real>(params: &ModelParams<T>, family: Family, l: T) -> T {
    let half = T::lit(0.5);
    params.k() * l * (l + T::one()) * half + family.sign::<T>() * params.beta * (l + half)
}

/// Exact rational energy.
pub fn energy_exact(kappa: Ratio<i64>, beta: Ratio<i64>, family: Family, l: i64) -> Result<Ratio<i64>> {
    let ok = match family {
        Family::Lowest => !beta.is_negative(),
        Family::Highest => !beta.is_positive(),
    };
    if !ok {
        return Err(LandauError::FamilySign { beta: beta.to_f64().unwrap_or(f64::NAN) });
    }
    let l = Ratio::from_integer(l);
    let half = Ratio::new(1, 2);
    let sign = if family == Family::Lowest { 1 } else { -1 };
    Ok(kappa * l * (l + 1) * half + beta * (l + half) * sign)
}

/// Iterator over the admissible levels, finite for κ < 0 and unbounded otherwise.
#[derive(Debug, Clone)]
pub struct AdmissibleLevels<T> {
    params: ModelParams<T>,
    family: Family,
    next: u64,
    end: Option<u64>,
}

impl<T: Real> AdmissibleLevels<T> {
    /// Number of levels, `None` when infinite.
    pub fn len_hint(&self) -> Option<u64> {
        self.end.map(|e| e.saturating_sub(self.next))
    }

    pub fn is_finite(&self) -> bool {
        self.end.is_some()
    }
}

impl<T: Real> Iterator for AdmissibleLevels<T> {
    type Item = SpectrumLine<T>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.end.is_some_and(|e| self.next >= e) {
            return None;
        }
        let l = self.next;
        self.next += 1;
        Some(level(&self.params, self.family, l))
    }
}

/// Strict normalizability bound l < |β|/|κ| − ½ for κ < 0.
pub fn normalizable_level_bound<T: Real>(params: &ModelParams<T>) -> Option<T> {
    (params.k() < T::zero()).then(|| snap_half_integer(params.beta.abs() / params.k().abs() - T::lit(0.5)))
}

/// Rounds x to the nearest multiple of ½ when it is within rounding error of one.
pub(crate) fn snap_half_integer<T: Real>(x: T) -> T {
    let two = T::lit(2.0);
    let near = (x * two).round() / two;
    if (x - near).abs() <= T::lit(1e-9) * (T::one() + x.abs()) {
        near
    } else {
        x
    }
}

/// The looser algebraic bound l < |β|/|κ| of the representation theory, kept as metadata.
pub fn algebraic_level_bound<T: Real>(params: &ModelParams<T>) -> Option<T> {
    (params.k() < T::zero()).then(|| params.beta.abs() / params.k().abs())
}

fn count_below<T: Real>(bound: T) -> u64 {
    if bound <= T::zero() {
        0
    } else {
        bound.ceil().to_u64().unwrap_or(0)
    }
}

/// m-range of level l.
pub fn m_range<T: Real>(params: &ModelParams<T>, family: Family, l: T) -> MRange<T> {
    let flux = params.flux();
    match (family, flux) {
        (Family::Lowest, Some(n)) if params.k() > T::zero() => MRange { min: Some(-l), max: Some(l + n) },
        (Family::Lowest, _) => MRange { min: Some(-l), max: None },
        (Family::Highest, Some(n)) if params.k() > T::zero() => MRange { min: Some(-l + n), max: Some(l) },
        (Family::Highest, _) => MRange { min: None, max: Some(l) },
    }
}

fn level<T: Real>(params: &ModelParams<T>, family: Family, l: u64) -> SpectrumLine<T> {
    let lt = T::from_u64(l).unwrap();
    let range = m_range(params, family, lt);
    let degeneracy = match (range.min, range.max) {
        (Some(lo), Some(hi)) => Degeneracy::Finite((hi - lo).round().to_u64().unwrap_or(0) + 1),
        _ => Degeneracy::CountablyInfinite,
    };
    SpectrumLine { l, energy: energy_unchecked(params, family, lt), degeneracy, m_range: range }
}

/// Levels of the given family. Empty when the sign of β does not match the
/// family or, for κ ≤ 0, when the field admits no bound states.
pub fn admissible_levels<T: Real>(params: &ModelParams<T>, family: Family) -> AdmissibleLevels<T> {
    let empty = AdmissibleLevels { params: *params, family, next: 0, end: Some(0) };
    if family.check(params.beta).is_err() {
        return empty;
    }
    let k = params.k();
    if k > T::zero() {
        if family == Family::Highest && params.beta == T::zero() {
            return empty;
        }
        return AdmissibleLevels { end: None, ..empty };
    }
    if params.beta == T::zero() {
        return empty;
    }
    if k == T::zero() {
        return AdmissibleLevels { end: None, ..empty };
    }
    let bound = normalizable_level_bound(params).unwrap();
    AdmissibleLevels { end: Some(count_below(bound)), ..empty }
}

/// Whether (l, m) lies on the lattice of the family: integer labels, l ≥ 0,
/// m in the level's range, and for κ < 0 below the normalizability bound.
pub fn is_admissible<T: Real>(params: &ModelParams<T>, label: &StateLabel<T>) -> Result<()> {
    let reject = |reason: &str| {
        Err(LandauError::Inadmissible { l: label.l.as_f64(), m: label.m.as_f64(), reason: reason.into() })
    };
    label.family.check(params.beta)?;
    if label.l < T::zero() || label.l.fract() != T::zero() {
        return reject("l must be a non-negative integer");
    }
    if (label.m - label.alpha).fract() != T::zero() {
        return reject("m − α must be an integer");
    }
    if params.k() <= T::zero() && params.beta == T::zero() {
        return reject("no bound states without a field on a non-compact surface");
    }
    if let Some(bound) = normalizable_level_bound(params) {
        if label.l >= bound {
            return reject("level above the normalizability bound");
        }
    }
    if !m_range(params, label.family, label.l).contains(label.m - label.alpha) {
        return reject("m outside the level's range");
    }
    Ok(())
}

/// Squared coefficient of J^± on |l, m⟩, without the restriction check.
pub fn uir_coefficient_squared<T: Real>(params: &ModelParams<T>, family: Family, l: T, m: T, sign: Sign) -> T {
    let (k, b) = (params.k(), params.beta);
    let two = T::lit(2.0);
    let one = T::one();
    let v = match (family, sign) {
        (Family::Lowest, Sign::Plus) => (l + m + one) * (two * b + k * (l - m)),
        (Family::Lowest, Sign::Minus) => (l + m) * (two * b + k * (l - m + one)),
        (Family::Highest, Sign::Plus) => (l - m) * (-two * b + k * (l + m + one)),
        (Family::Highest, Sign::Minus) => (l - m + one) * (-two * b + k * (l + m)),
    };
    v / two
}

/// Non-negative coefficient of J^± on |l, m⟩.
pub fn uir_coefficient<T: Real>(
    params: &ModelParams<T>,
    family: Family,
    l: T,
    m: T,
    sign: Sign,
) -> Result<T> {
    let (k, b) = (params.k(), params.beta);
    let two = T::lit(2.0);
    let restriction = match family {
        Family::Lowest => (l + m) * (two * b + k * (l - m + T::one())),
        Family::Highest => (l - m) * (-two * b + k * (l + m + T::one())),
    };
    let tiny = T::lit(1e-12) * (T::one() + (l.abs() + m.abs()) * (b.abs() + k.abs()));
    if restriction < -tiny {
        return Err(LandauError::Inadmissible {
            l: l.as_f64(),
            m: m.as_f64(),
            reason: "violates the unitarity restriction".into(),
        });
    }
    let sq = uir_coefficient_squared(params, family, l, m, sign);
    if sq < -tiny {
        return Err(LandauError::Inadmissible {
            l: l.as_f64(),
            m: m.as_f64(),
            reason: "negative squared coefficient".into(),
        });
    }
    Ok(sq.max(T::zero()).sqrt())
}

/// Number of states per unit area in level l.
pub fn state_density<T: Real>(params: &ModelParams<T>, l: T) -> T {
    let base = params.beta.abs() / (T::lit(2.0) * T::PI());
    if params.k() > T::zero() {
        base + params.k() * (T::lit(2.0) * l + T::one()) / (T::lit(4.0) * T::PI())
    } else {
        base
    }
}

/// Constants for restoring units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalUnits<T> {
    pub hbar: T,
    pub m0: T,
    pub c: T,
    /// Charge of the particle.
    pub q: T,
    /// Magnitude of the elementary charge entering the monopole condition.
    pub e_abs: T,
    /// +1 when the field points along J12, −1 otherwise.
    pub tau: i8,
    /// +1 for positive curvature, −1 for negative.
    pub eta: i8,
    pub n_monopole: i64,
}

impl<T: Real> PhysicalUnits<T> {
    /// ħ = m₀ = c = |e| = 1 with the given charge.
    pub fn natural(q: T) -> Self {
        Self { hbar: T::one(), m0: T::one(), c: T::one(), q, e_abs: T::one(), tau: 1, eta: 1, n_monopole: 1 }
    }

    fn validate(&self) -> Result<()> {
        let positive = self.hbar > T::zero() && self.m0 > T::zero() && self.c > T::zero();
        if !positive {
            return Err(LandauError::Parameter("ħ, m₀ and c must be positive".into()));
        }
        if self.tau.abs() != 1 || self.eta.abs() != 1 {
            return Err(LandauError::Parameter("τ and η must be ±1".into()));
        }
        Ok(())
    }

    /// β = τ q |B| / (ħ c).
    pub fn beta(&self, b_abs: T) -> T {
        T::from_i8(self.tau).unwrap() * self.q * b_abs / (self.hbar * self.c)
    }
}

/// E = (|q|ħ|B|/m₀c)(l + ½) + (ħ²κ/2m₀) l(l+1).
pub fn physical_spectrum<T: Real>(units: &PhysicalUnits<T>, b_abs: T, kappa: T, l: T) -> Result<T> {
    units.validate()?;
    let half = T::lit(0.5);
    Ok(units.q.abs() * units.hbar * b_abs / (units.m0 * units.c) * (l + half)
        + units.hbar * units.hbar * kappa / (T::lit(2.0) * units.m0) * l * (l + T::one()))
}

/// Monopole field strength |B| = ħ n |κ| / |e|.
pub fn dirac_field<T: Real>(units: &PhysicalUnits<T>, kappa: T) -> Result<T> {
    units.validate()?;
    if units.n_monopole <= 0 {
        return Err(LandauError::Parameter("monopole number n must be positive".into()));
    }
    if kappa == T::zero() {
        return Err(LandauError::Curvature { kappa: 0.0, reason: "no monopole on the plane" });
    }
    Ok(units.hbar * T::from_i64(units.n_monopole).unwrap() * kappa.abs() / units.e_abs)
}

/// Spectrum with the monopole field: the curvature term written through |B| and n.
pub fn monopole_spectrum<T: Real>(units: &PhysicalUnits<T>, kappa: T, l: T) -> Result<T> {
    let b = dirac_field(units, kappa)?;
    let half = T::lit(0.5);
    let n = T::from_i64(units.n_monopole).unwrap();
    let eta = T::from_i8(units.eta).unwrap();
    Ok(units.q.abs() * units.hbar * b / (units.m0 * units.c) * (l + half)
        + eta * units.hbar * units.e_abs * b / (T::lit(2.0) * units.m0 * units.c * n) * l * (l + T::one()))
}
