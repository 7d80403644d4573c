//! The verification suites behind `landau verify`. Each check reports its
//! worst residual and passes when that residual is within tolerance.

use std::f64::consts::PI;

use landau::eigenfunctions::{
    confluent_path, contraction_deviation, eigenfunction, hypergeometric_path, jacobi_path, laguerre_path,
};
use landau::identities::{
    algebra_checks, casimir_check, gauge_check, hamiltonian_forms_check, lift_checks, sample_points, test_fields, Check,
};
use landau::ladder::{
    annihilation_lines, exponents_normalizable, factorization_coeffs, factorization_operator, ladder_operator,
    spectral_flow_index, vacuum_exponents,
};
use landau::morse::{continuum_threshold, morse_discrete_spectrum, morse_energy_exact, morse_residual};
use landau::numerics::{integrate_radial, linspace, residual_norm, QuadratureScheme};
use landau::representation::{hamiltonian, RadialFunction, Sign};
use landau::spectrum::{admissible_levels, energy, energy_exact, is_admissible, Family, StateLabel};
use landau::{ModelParams64, Result as LandauResult};
use num_rational::Ratio;

use crate::output::{Cell, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    All,
    Commutators,
    Gauge,
    Residuals,
    Orthonormality,
    Ladder,
    Morse,
    Contraction,
}

impl Suite {
    pub const EACH: [Suite; 7] = [
        Suite::Commutators,
        Suite::Gauge,
        Suite::Residuals,
        Suite::Orthonormality,
        Suite::Ladder,
        Suite::Morse,
        Suite::Contraction,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Commutators => "commutators",
            Suite::Gauge => "gauge",
            Suite::Residuals => "residuals",
            Suite::Orthonormality => "orthonormality",
            Suite::Ladder => "ladder",
            Suite::Morse => "morse",
            Suite::Contraction => "contraction",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Options {
    /// Replaces every default tolerance when set.
    pub tol: Option<f64>,
    pub seed: u64,
}

impl Default for Options {
    fn default() -> Self {
        Self { tol: None, seed: 1 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckRow {
    pub suite: &'static str,
    pub check: String,
    pub params: String,
    /// `None` when the check could not be evaluated.
    pub residual: Option<f64>,
    pub tol: f64,
    pub note: String,
}

impl CheckRow {
    pub fn passed(&self) -> bool {
        self.residual.is_some_and(|r| r <= self.tol)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    pub rows: Vec<CheckRow>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(CheckRow::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRow> {
        self.rows.iter().filter(|r| !r.passed())
    }

    pub fn to_table(&self, suite: Suite, opts: &Options) -> Table {
        let mut t = Table::new("verify", &["suite", "check", "params", "residual", "tol", "pass", "note"]);
        t.meta("suite", suite.name()).meta("seed_grid", opts.seed);
        t.meta("tol_override", opts.tol.map_or("none".to_string(), |v| format!("{v:e}")));
        let failed = self.failures().count();
        t.meta("checks", self.rows.len()).meta("failed", failed);
        t.meta("result", if failed == 0 { "pass" } else { "fail" });
        for r in &self.rows {
            t.push(vec![
                r.suite.into(),
                r.check.clone().into(),
                r.params.clone().into(),
                r.residual.into(),
                r.tol.into(),
                r.passed().into(),
                if r.note.is_empty() { Cell::Empty } else { r.note.clone().into() },
            ]);
        }
        t
    }
}

struct Recorder<'a> {
    suite: &'static str,
    opts: &'a Options,
    rows: Vec<CheckRow>,
}

impl<'a> Recorder<'a> {
    fn new(suite: Suite, opts: &'a Options) -> Self {
        Self { suite: suite.name(), opts, rows: Vec::new() }
    }

    fn record(&mut self, check: impl Into<String>, params: impl Into<String>, residual: LandauResult<f64>, tol: f64) {
        let (residual, note) = match residual {
            Ok(r) if r.is_nan() => (None, "residual is NaN".to_string()),
            Ok(r) => (Some(r), String::new()),
            Err(e) => (None, e.to_string()),
        };
        self.rows.push(CheckRow {
            suite: self.suite,
            check: check.into(),
            params: params.into(),
            residual,
            tol: self.opts.tol.unwrap_or(tol),
            note,
        });
    }

    fn checks(&mut self, params: &str, checks: LandauResult<Vec<Check>>, tol: f64) {
        match checks {
            Ok(cs) => cs.into_iter().for_each(|c| self.record(c.name, params, Ok(c.residual), tol)),
            Err(e) => self.record("suite setup", params, Err(e), tol),
        }
    }
}

fn params(k: f64, b: f64) -> ModelParams64 {
    ModelParams64::new(k, b).expect("built-in parameter points are quantized")
}

fn tag(k: f64, b: f64) -> String {
    format!("kappa={k} beta={b}")
}

fn chart_end(k: f64) -> f64 {
    if k > 0.0 {
        PI / k.sqrt()
    } else {
        6.0
    }
}

fn interior_grid(k: f64, n: usize) -> Vec<f64> {
    let end = chart_end(k);
    linspace(0.05 * end, 0.95 * end, n)
}

/// Admissible labels with l ≤ l_max and |m| ≤ m_abs.
fn labels(p: &ModelParams64, family: Family, l_max: u64, m_abs: i64) -> Vec<StateLabel<f64>> {
    let mut out = Vec::new();
    for line in admissible_levels(p, family).take_while(|line| line.l <= l_max) {
        for m in line.m_range.integers_within(-m_abs, m_abs) {
            let label = StateLabel::new(family, line.l as f64, m as f64);
            if is_admissible(p, &label).is_ok() {
                out.push(label);
            }
        }
    }
    out
}

fn label_tag(s: &StateLabel<f64>) -> String {
    format!("l={} m={}", s.l, s.m)
}

/// Largest value over the labels, with the label where it occurred.
fn worst(labels: &[StateLabel<f64>], mut f: impl FnMut(&StateLabel<f64>) -> LandauResult<f64>) -> (LandauResult<f64>, String) {
    let mut best = (0.0f64, String::new());
    for s in labels {
        match f(s) {
            Ok(v) if v.is_nan() || v > best.0 => best = (v, label_tag(s)),
            Ok(_) => {}
            Err(e) => return (Err(e), label_tag(s)),
        }
        if best.0.is_nan() {
            break;
        }
    }
    (Ok(best.0), best.1)
}

// ---------------------------------------------------------------------------

type Path = fn(&ModelParams64, &StateLabel<f64>, f64) -> LandauResult<f64>;

const ORACLE_POINTS: [(f64, f64); 3] = [(1.0, 2.0), (0.0, 2.0), (-1.0, 2.0)];

fn commutators(opts: &Options) -> Vec<CheckRow> {
    let mut rec = Recorder::new(Suite::Commutators, opts);
    for (k, b) in ORACLE_POINTS {
        let p = params(k, b);
        let fields = test_fields(&p, 20, opts.seed);
        let points = sample_points(&p, 6, opts.seed.wrapping_add(1));
        let t = tag(k, b);
        rec.checks(&t, algebra_checks(&p, &fields, &points), 1e-6);
        rec.checks(&t, lift_checks(&p, &fields, &points), 1e-6);
        rec.checks(&t, casimir_check(&p, &fields, &points).map(|c| vec![c]), 1e-6);
        for m in [-1.0, 0.0, 2.0] {
            let c = hamiltonian_forms_check(&p, m, 10, opts.seed.wrapping_add(2));
            rec.record(c.name, &t, Ok(c.residual), 1e-8);
        }
    }
    rec.rows
}

fn gauge(opts: &Options) -> Vec<CheckRow> {
    let mut rec = Recorder::new(Suite::Gauge, opts);
    for (k, b) in ORACLE_POINTS {
        let p = params(k, b);
        let c = gauge_check(&p, &sample_points(&p, 100, opts.seed.wrapping_add(3)));
        rec.record(c.name, tag(k, b), Ok(c.residual), 1e-6);
    }
    rec.rows
}

/// The parameter grid of the residual suite: β = ±2 on four curvatures with
/// l ≤ 2, and the plane with l ≤ 3; |m| ≤ 6 throughout.
pub fn residual_grid() -> Vec<(f64, f64, u64)> {
    let mut out = Vec::new();
    for b in [2.0, -2.0] {
        for k in [1.0, 0.5, -0.5, -1.0] {
            out.push((k, b, 2));
        }
        out.push((0.0, b, 3));
    }
    out
}

fn residuals(opts: &Options) -> Vec<CheckRow> {
    let mut rec = Recorder::new(Suite::Residuals, opts);
    for (k, b, l_max) in residual_grid() {
        let p = params(k, b);
        let family = Family::for_beta(b);
        let ls = labels(&p, family, l_max, 6);
        let grid = interior_grid(k, 200);
        let (res, at) = worst(&ls, |s| {
            let f = eigenfunction(&p, s)?.to_radial_function();
            let e = energy(&p, family, s.l)?;
            Ok(residual_norm(&hamiltonian(&p, s.m), &f, e, &grid).value)
        });
        rec.record(format!("eigen residual over {} states (worst {at})", ls.len()), tag(k, b), res, 1e-8);
        let (res, at) = worst(&ls, |s| {
            let (first, second): (Path, Path) = if k == 0.0 {
                (confluent_path::<f64>, laguerre_path::<f64>)
            } else {
                (hypergeometric_path::<f64>, jacobi_path::<f64>)
            };
            let mut scale = 0.0f64;
            let mut diff = 0.0f64;
            for &r in &grid {
                let a = first(&p, s, r)?;
                let c = second(&p, s, r)?;
                scale = scale.max(a.abs());
                diff = diff.max((a - c).abs());
            }
            Ok(diff / scale)
        });
        let name = if k == 0.0 { "confluent vs Laguerre" } else { "hypergeometric vs Jacobi" };
        rec.record(format!("{name} (worst {at})"), tag(k, b), res, 1e-12);
    }
    rec.rows
}

/// max |G − I| for the Gram matrix of the full-surface states with the given
/// labels. Entries with m ≠ m' vanish through the angular integral; the rest
/// are radial quadratures.
pub fn gram_deviation(p: &ModelParams64, labels: &[StateLabel<f64>]) -> LandauResult<f64> {
    let fs = labels.iter().map(|s| eigenfunction(p, s)).collect::<LandauResult<Vec<_>>>()?;
    let mut dev = 0.0f64;
    for (i, a) in fs.iter().enumerate() {
        for (j, b) in fs.iter().enumerate().skip(i) {
            if labels[i].m != labels[j].m {
                continue;
            }
            let g = integrate_radial(|r| a.value(r), |r| b.value(r), p.kappa, &QuadratureScheme::default())?.value;
            let target = if i == j { 1.0 } else { 0.0 };
            dev = dev.max((g - target).abs());
        }
    }
    Ok(dev)
}

fn orthonormality(opts: &Options) -> Vec<CheckRow> {
    let mut rec = Recorder::new(Suite::Orthonormality, opts);
    for (k, b, l_max, m_abs) in [(1.0, 2.0, 1, 6), (1.0, -2.0, 1, 6), (0.0, 2.0, 2, 4), (-1.0, 3.5, 2, 4)] {
        let p = params(k, b);
        let ls = labels(&p, Family::for_beta(b), l_max, m_abs);
        rec.record(format!("Gram matrix of {} states, l <= {l_max}", ls.len()), tag(k, b), gram_deviation(&p, &ls), 1e-8);
    }
    rec.rows
}

/// max over the grid of |A⁺A⁻f + δf| and |𝓔 f| relative to max |f| for an
/// eigenfunction f; both operators must annihilate it.
pub fn factorization_residual(p: &ModelParams64, s: &StateLabel<f64>) -> LandauResult<f64> {
    let f = eigenfunction(p, s)?.to_radial_function();
    let minus = ladder_operator(p, s.l, s.m, Sign::Minus)?;
    let plus = ladder_operator(p, s.l, s.m, Sign::Plus)?;
    let delta = factorization_coeffs(p, s.l, s.m)?.delta_l;
    let fact = plus.compose(&minus).affine(1.0, delta);
    let direct = factorization_operator(p, s.l, s.m);
    let grid = interior_grid(p.k(), 60);
    let scale = grid.iter().map(|&r| f.eval(r).norm()).fold(0.0, f64::max);
    let worst = grid
        .iter()
        .map(|&r| fact.apply_at(&f, r).norm().max(direct.apply_at(&f, r).norm()))
        .fold(0.0, f64::max);
    Ok(worst / scale)
}

/// Relative spread of A⁻_l Ψ_{l,m} / Ψ_{l−1,m} over the grid; zero when the
/// lowered state is proportional to the level below.
pub fn lowering_spread(p: &ModelParams64, l: i64, m: i64) -> LandauResult<f64> {
    let family = Family::for_beta(p.beta);
    let upper = eigenfunction(p, &StateLabel::new(family, l as f64, m as f64))?.to_radial_function();
    let lower = eigenfunction(p, &StateLabel::new(family, (l - 1) as f64, m as f64))?.to_radial_function();
    let image: RadialFunction<f64> = ladder_operator(p, l as f64, m as f64, Sign::Minus)?.apply(&upper);
    let grid: Vec<f64> = interior_grid(p.k(), 60).into_iter().filter(|&r| lower.eval(r).re.abs() > 1e-6).collect();
    let ratios: Vec<f64> = grid.iter().map(|&r| image.eval(r).re / lower.eval(r).re).collect();
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    Ok(ratios.iter().map(|q| (q - mean).abs()).fold(0.0, f64::max) / mean.abs())
}

/// Disagreements between the annihilation-line tables and the regularity
/// rule applied to the kernel exponents, plus lines where δ is not zero.
pub fn table_mismatches(p: &ModelParams64) -> usize {
    let mut bad = 0;
    for (which, offset) in [(Sign::Minus, 0.0), (Sign::Plus, 1.0)] {
        for line in annihilation_lines(p, which) {
            for m in -6..=10 {
                let m = m as f64;
                let l = line.l_of_m(m) + offset;
                let by_kernel = match vacuum_exponents(p, l, m, which) {
                    Ok(Some((a, b))) => exponents_normalizable(p.kappa, a, b),
                    // Planar kernels r^{±(2l+m)}e^{∓βr²/4}, m taken with the sign of β.
                    Ok(None) => which == Sign::Minus && 2.0 * l + m * p.beta.signum() >= 0.0,
                    Err(_) => false,
                };
                if line.is_normalizable(m) != by_kernel {
                    bad += 1;
                }
                if let Ok(c) = factorization_coeffs(p, l, m) {
                    if c.delta_l != 0.0 {
                        bad += 1;
                    }
                }
            }
        }
    }
    bad
}

fn ladder(opts: &Options) -> Vec<CheckRow> {
    let mut rec = Recorder::new(Suite::Ladder, opts);
    for (k, b) in [(1.0, 2.0), (0.0, 2.0), (-1.0, 2.0), (-1.0, 3.5), (0.5, -1.5)] {
        let p = params(k, b);
        let ls = labels(&p, Family::for_beta(b), 2, 4);
        let (res, at) = worst(&ls, |s| factorization_residual(&p, s));
        rec.record(format!("factorization annihilates eigenstates (worst {at})"), tag(k, b), res, 1e-8);
    }
    for (k, b) in [(1.0, 2.0), (-1.0, 2.0), (-1.0, 3.5), (0.0, 2.0)] {
        let p = params(k, b);
        let family = Family::for_beta(b);
        let pairs: Vec<StateLabel<f64>> = labels(&p, family, 2, 4)
            .into_iter()
            .filter(|s| s.l >= 1.0 && is_admissible(&p, &StateLabel::new(family, s.l - 1.0, s.m)).is_ok())
            .collect();
        let (res, at) = worst(&pairs, |s| lowering_spread(&p, s.l as i64, s.m as i64));
        rec.record(format!("A- maps level l onto level l-1 ({} pairs, worst {at})", pairs.len()), tag(k, b), res, 1e-8);
    }
    for (k, b) in [(1.0, 2.0), (-1.0, 2.0), (0.0, 2.0), (0.0, -2.0), (0.5, 3.0), (-0.5, 3.0), (1.0, -2.0)] {
        let p = params(k, b);
        rec.record("annihilation-line tables vs kernel exponents (mismatches)", tag(k, b), Ok(table_mismatches(&p) as f64), 0.0);
    }
    for (k, b, expected) in [(1.0, 2.0, 0), (0.0, 2.0, 1), (-1.0, 2.0, 1)] {
        let index = spectral_flow_index(&params(k, b));
        rec.record(format!("spectral flow index {index}, expected {expected}"), tag(k, b), Ok((index - expected).abs() as f64), 0.0);
    }
    rec.rows
}

fn morse(opts: &Options) -> Vec<CheckRow> {
    let mut rec = Recorder::new(Suite::Morse, opts);
    let exact_cases = [((-1, 1), (2, 1)), ((-1, 1), (7, 2)), ((-1, 2), (3, 2)), ((-1, 3), (5, 6))];
    for ((kn, kd), (bn, bd)) in exact_cases {
        let (k, b) = (Ratio::new(kn, kd), Ratio::new(bn, bd));
        let t = format!("kappa={k} beta={b}");
        let mismatches = (|| -> LandauResult<f64> {
            let p = ModelParams64::exact(k, b)?;
            let levels = morse_discrete_spectrum(&p)?;
            let count = admissible_levels(&p, Family::Lowest).count();
            let mut bad = levels.len().abs_diff(count);
            for l in 0..count as i64 + 1 {
                let landau = energy_exact(k, b, Family::Lowest, l).ok().filter(|_| (l as usize) < count);
                if morse_energy_exact(k, b, l)? != landau {
                    bad += 1;
                }
            }
            Ok(bad as f64)
        })();
        rec.record("Morse levels equal Landau levels exactly (mismatches)", t, mismatches, 0.0);
    }
    let threshold = continuum_threshold(&params(-1.0, 2.0)).map(|e| (e - 4.25).abs());
    rec.record("continuum threshold 4.25", tag(-1.0, 2.0), threshold, 1e-12);
    let grid = linspace(-5.0, 15.0, 401);
    for (k, b) in [(-1.0, 2.0), (-1.0, 3.5), (-2.0, 3.0)] {
        let p = params(k, b);
        let levels = morse_discrete_spectrum(&p).map(|v| v.len()).unwrap_or(0) as u32;
        let mut worst = Ok(0.0f64);
        for l in 0..levels {
            worst = worst.and_then(|w| Ok(w.max(morse_residual(&p, l, &grid, 1e-3)?)));
        }
        rec.record(format!("Morse eigenfunction residual over {levels} levels"), tag(k, b), worst, 1e-8);
    }
    rec.rows
}

fn contraction(opts: &Options) -> Vec<CheckRow> {
    let mut rec = Recorder::new(Suite::Contraction, opts);
    let grid = linspace(0.0, 4.0, 41);
    let ns = [8, 16, 32, 64, 128, 256, 512, 1024];
    for m in 0..=4u32 {
        let devs: LandauResult<Vec<f64>> = ns.iter().map(|&n| contraction_deviation(2.0, n, 0, m, &grid).map(|d| d.eigenfunction)).collect();
        let t = format!("beta=2 l=0 m={m}");
        match devs {
            Ok(d) => {
                let increases = d.windows(2).filter(|w| w[1] >= w[0]).count();
                rec.record("deviation decreases along kappa = 2 beta/n (violations)", &t, Ok(increases as f64), 0.0);
                rec.record("deviation at n = 1024", &t, Ok(*d.last().unwrap()), 1e-2);
            }
            Err(e) => rec.record("contraction sweep", &t, Err(e), 1e-2),
        }
    }
    rec.rows
}

pub fn run_suite(suite: Suite, opts: &Options) -> Report {
    let rows = match suite {
        Suite::All => Suite::EACH.iter().flat_map(|&s| run_suite(s, opts).rows).collect(),
        Suite::Commutators => commutators(opts),
        Suite::Gauge => gauge(opts),
        Suite::Residuals => residuals(opts),
        Suite::Orthonormality => orthonormality(opts),
        Suite::Ladder => ladder(opts),
        Suite::Morse => morse(opts),
        Suite::Contraction => contraction(opts),
    };
    Report { rows }
}
