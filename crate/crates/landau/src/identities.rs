//! Residuals of the operator identities on random smooth test data, for the
//! verification suites. Every check returns the largest residual it saw.

use std::sync::Arc;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::numerics::{fd_apply, plane_combination, plane_commutator, PlaneOperator, RadialClosure, SectorField};
use crate::geometry::PolarCoords;
use crate::representation::{
    gauge_invariance_residual, hamiltonian, hamiltonian_expanded, hamiltonian_from_casimir, plane_extended_casimir,
    plane_generator, plane_lift, plane_lifted_casimir, Generator, ModelParams, RadialFunction,
};
use crate::Result;

/// Radial step of the finite-difference oracle.
pub const ORACLE_STEP: f64 = 1e-3;

/// exp(−1/(1 − (r/R)²)) on r < R, zero beyond.
fn bump(r: f64, radius: f64) -> f64 {
    let x = r / radius;
    if x >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - x * x)).exp()
    }
}

fn support_radius(params: &ModelParams<f64>) -> f64 {
    params.kappa.chart_limit().map_or(3.0, |limit| 0.9 * limit.min(3.0))
}

/// `count` fields Σ_{|m|≤2} c_m r^{|m|} bump(r) e^{imθ} with random complex
/// c_m and support radius.
pub fn test_fields(params: &ModelParams<f64>, count: usize, seed: u64) -> Vec<SectorField<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let top = support_radius(params);
    (0..count)
        .map(|_| {
            let radius = rng.gen_range(0.7 * top..=top);
            let mut field = SectorField::new(ORACLE_STEP);
            for m in -2i32..=2 {
                let c = Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                let k = m.abs();
                let f: RadialClosure<f64> = Arc::new(move |r| c * r.powi(k) * bump(r, radius));
                field = field.with_sector(m, f);
            }
            field
        })
        .collect()
}

/// Random chart points with r clear of the origin and of the antipode.
pub fn sample_points(params: &ModelParams<f64>, count: usize, seed: u64) -> Vec<PolarCoords<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let top = support_radius(params);
    (0..count)
        .map(|_| PolarCoords { r: rng.gen_range(0.2..0.85 * top), theta: rng.gen_range(0.0..std::f64::consts::TAU) })
        .collect()
}

fn max_residual(
    lhs: &PlaneOperator<f64>,
    rhs: &PlaneOperator<f64>,
    fields: &[SectorField<f64>],
    points: &[PolarCoords<f64>],
    params: &ModelParams<f64>,
) -> Result<f64> {
    let mut worst = 0.0f64;
    for f in fields {
        let (a, b) = (lhs(f), rhs(f));
        let diff: PlaneOperator<f64> = Arc::new(move |_: &SectorField<f64>| a.sub(&b));
        for &p in points {
            worst = worst.max(fd_apply(&diff, f, p, params.kappa)?.norm());
        }
    }
    Ok(worst)
}

fn i_times(c: f64) -> Complex<f64> {
    Complex::new(0.0, c)
}

/// One named residual.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub residual: f64,
}

/// [J̄01, J̄02] = iκJ̄12 + iB, [J̄12, J̄01] = iJ̄02, [J̄12, J̄02] = −iJ̄01,
/// [·, B] = 0 on the gauged realization.
pub fn algebra_checks(params: &ModelParams<f64>, fields: &[SectorField<f64>], points: &[PolarCoords<f64>]) -> Result<Vec<Check>> {
    let g = |w| plane_generator(params, w);
    let (j01, j02, j12, b) = (g(Generator::J01), g(Generator::J02), g(Generator::J12), g(Generator::B));
    let zero: PlaneOperator<f64> = Arc::new(|f: &SectorField<f64>| SectorField::new(f.step));
    let cases: Vec<(&str, PlaneOperator<f64>, PlaneOperator<f64>)> = vec![
        (
            "[J01,J02]",
            plane_commutator(&j01, &j02),
            plane_combination(vec![(i_times(params.k()), j12.clone()), (i_times(1.0), b.clone())]),
        ),
        ("[J12,J01]", plane_commutator(&j12, &j01), plane_combination(vec![(i_times(1.0), j02.clone())])),
        ("[J12,J02]", plane_commutator(&j12, &j02), plane_combination(vec![(i_times(-1.0), j01.clone())])),
        ("[J01,B]", plane_commutator(&j01, &b), zero.clone()),
        ("[J02,B]", plane_commutator(&j02, &b), zero.clone()),
        ("[J12,B]", plane_commutator(&j12, &b), zero),
    ];
    cases
        .into_iter()
        .map(|(name, l, r)| Ok(Check { name: name.into(), residual: max_residual(&l, &r, fields, points, params)? }))
        .collect()
}

/// [J̄_i, J*_j] = f_ij^k J*_k with the structure constants of the unextended
/// algebra.
pub fn lift_checks(params: &ModelParams<f64>, fields: &[SectorField<f64>], points: &[PolarCoords<f64>]) -> Result<Vec<Check>> {
    use Generator::*;
    let k = params.k();
    let bar = |w| plane_generator(params, w);
    let star = |w| plane_lift(params, w);
    type Combination = Vec<(Complex<f64>, PlaneOperator<f64>)>;
    let zero: Combination = vec![];
    let table: Vec<(Generator, Generator, Combination)> = vec![
        (J01, J01, zero.clone()),
        (J01, J02, vec![(i_times(k), star(J12))]),
        (J01, J12, vec![(i_times(-1.0), star(J02))]),
        (J02, J01, vec![(i_times(-k), star(J12))]),
        (J02, J02, zero.clone()),
        (J02, J12, vec![(i_times(1.0), star(J01))]),
        (J12, J01, vec![(i_times(1.0), star(J02))]),
        (J12, J02, vec![(i_times(-1.0), star(J01))]),
        (J12, J12, zero),
    ];
    table
        .into_iter()
        .map(|(a, b, rhs)| {
            let lhs = plane_commutator(&bar(a), &star(b));
            let rhs = plane_combination(rhs);
            Ok(Check { name: format!("[{a:?},{b:?}*]"), residual: max_residual(&lhs, &rhs, fields, points, params)? })
        })
        .collect()
}

/// C̄(J̄, B) = C(J*).
pub fn casimir_check(params: &ModelParams<f64>, fields: &[SectorField<f64>], points: &[PolarCoords<f64>]) -> Result<Check> {
    let residual = max_residual(&plane_extended_casimir(params), &plane_lifted_casimir(params), fields, points, params)?;
    Ok(Check { name: "C(J,B)=C(J*)".into(), residual })
}

/// Largest component of the gauge-invariance residual over the rotational
/// generators at the sample points.
pub fn gauge_check(params: &ModelParams<f64>, points: &[PolarCoords<f64>]) -> Check {
    let residual = points
        .iter()
        .flat_map(|p| Generator::ROTATIONAL.map(|w| gauge_invariance_residual(params, w, p.r, p.theta)))
        .flatten()
        .map(|c| c.norm())
        .fold(0.0, f64::max);
    Check { name: "gauge invariance".into(), residual }
}

/// Random radial test functions r^{|m|} bump(r)(1 + a r).
pub fn radial_test_functions(params: &ModelParams<f64>, m: f64, count: usize, seed: u64) -> Vec<RadialFunction<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let top = support_radius(params);
    (0..count)
        .map(|_| {
            let radius = rng.gen_range(0.7 * top..=top);
            let a = rng.gen_range(-1.0..1.0);
            let k = m.abs();
            RadialFunction::from_real(m, move |r: f64| r.powf(k) * bump(r, radius) * (1.0 + a * r))
        })
        .collect()
}

/// The three forms of the Hamiltonian (minimal coupling, expanded Casimir,
/// J⁺J⁻ + constant) applied to the same functions; worst relative
/// disagreement with the minimal-coupling form.
pub fn hamiltonian_forms_check(params: &ModelParams<f64>, m: f64, count: usize, seed: u64) -> Check {
    let forms = [hamiltonian(params, m), hamiltonian_expanded(params, m), hamiltonian_from_casimir(params, m)];
    let top = support_radius(params);
    let grid = crate::numerics::linspace(0.3, 0.85 * top, 25);
    let mut worst = 0.0f64;
    for f in radial_test_functions(params, m, count, seed) {
        let images: Vec<_> = forms.iter().map(|op| op.apply(&f)).collect();
        let scale = grid.iter().map(|&r| images[0].eval(r).norm()).fold(1e-300, f64::max);
        for &r in &grid {
            let base = images[0].eval(r);
            for other in &images[1..] {
                worst = worst.max((other.eval(r) - base).norm() / scale);
            }
        }
    }
    Check { name: format!("hamiltonian forms m={m}"), residual: worst }
}
