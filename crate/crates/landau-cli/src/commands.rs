//! Data-producing subcommands.

use anyhow::{bail, Result};
use landau::eigenfunctions::{contraction_deviation, eigenfunction};
use landau::ladder::{annihilation_lines, normalizable_lattice, BoundaryClass, LatticeWindow, MInterval};
use landau::morse::{continuum_threshold, morse_discrete_spectrum, MorseReduction};
use landau::numerics::linspace;
use landau::representation::Sign;
use landau::spectrum::{admissible_levels, energy_unchecked, state_density, Degeneracy, Family, StateLabel};
use landau::ModelParams64;

use crate::number::{quantized_params, Number};
use crate::output::{Cell, Table};

fn family_arg(params: &ModelParams64, family: Option<Family>) -> Family {
    family.unwrap_or_else(|| Family::for_beta(params.beta))
}

fn describe(kappa: Number, beta: Number, table: &mut Table) {
    table.meta("kappa", kappa).meta("beta", beta);
}

pub fn spectrum(kappa: Number, beta: Number, family: Option<Family>, l_max: u64) -> Result<Table> {
    let params = quantized_params(kappa, beta)?;
    let family = family_arg(&params, family);
    let mut t = Table::new("spectrum", &["l", "energy", "degeneracy", "m_min", "m_max", "state_density"]);
    describe(kappa, beta, &mut t);
    t.meta("family", format!("{family:?}").to_lowercase()).meta("l_max", l_max);
    let levels = admissible_levels(&params, family);
    if let Some(n) = levels.len_hint() {
        t.meta("levels", n);
    }
    for line in levels.take_while(|line| line.l <= l_max) {
        let degeneracy = match line.degeneracy {
            Degeneracy::Finite(n) => Cell::Int(n as i64),
            Degeneracy::CountablyInfinite => Cell::text("inf"),
        };
        t.push(vec![
            Cell::Int(line.l as i64),
            line.energy.into(),
            degeneracy,
            line.m_range.min.map(|m| m.round() as i64).into(),
            line.m_range.max.map(|m| m.round() as i64).into(),
            state_density(&params, line.l as f64).into(),
        ]);
    }
    Ok(t)
}

pub struct Sampling {
    pub r_min: f64,
    pub r_max: Option<f64>,
    pub samples: usize,
}

pub fn eigenfunction_table(kappa: Number, beta: Number, l: i64, m: i64, grid: Sampling) -> Result<Table> {
    let params = quantized_params(kappa, beta)?;
    let family = Family::for_beta(params.beta);
    let label = StateLabel::new(family, l as f64, m as f64);
    let f = eigenfunction(&params, &label)?;
    let r_max = match (grid.r_max, params.kappa.chart_limit()) {
        (Some(r), Some(limit)) if r > limit * (1.0 + 1e-12) => bail!("r_max = {r} lies beyond the antipode {limit}"),
        (Some(r), _) => r,
        (None, Some(limit)) => limit,
        (None, None) => 6.0,
    };
    if grid.samples < 2 || !(grid.r_min >= 0.0 && grid.r_min < r_max) {
        bail!("need 0 ≤ r_min < r_max and at least two samples");
    }
    let mut t = Table::new("eigenfunction", &["r", "R", "R2", "psi2", "dR_dr"]);
    describe(kappa, beta, &mut t);
    t.meta("l", l).meta("m", m).meta("family", format!("{family:?}").to_lowercase());
    t.meta("normalization", "integral of R^2 S(r) dr = 1; Psi = R e^{i m theta}/sqrt(2 pi), psi2 = |Psi|^2");
    for r in linspace(grid.r_min, r_max, grid.samples) {
        let v = f.value(r);
        t.push(vec![r.into(), v.into(), (v * v).into(), f.density(r).into(), f.derivative(r).into()]);
    }
    Ok(t)
}

fn interval(m: &MInterval<f64>) -> String {
    match *m {
        MInterval::Never => "none".into(),
        MInterval::Range { lo, hi } => {
            let lo = lo.map_or("(-inf".to_string(), |(v, inc)| format!("{}{v}", if inc { "[" } else { "(" }));
            let hi = hi.map_or("inf)".to_string(), |(v, inc)| format!("{v}{}", if inc { "]" } else { ")" }));
            format!("{lo}, {hi}")
        }
    }
}

/// "l = m - 4", "l = -m", "l = 0".
fn line_equation(slope: f64, intercept: f64) -> String {
    let m = match slope {
        0.0 => String::new(),
        1.0 => "m".into(),
        -1.0 => "-m".into(),
        s => format!("{s}*m"),
    };
    match (m.is_empty(), intercept) {
        (true, c) => format!("l = {}", c + 0.0),
        (false, 0.0) => format!("l = {m}"),
        (false, c) if c < 0.0 => format!("l = {m} - {}", -c),
        (false, c) => format!("l = {m} + {c}"),
    }
}

pub struct Window {
    pub n_min: i64,
    pub n_max: i64,
    pub l_max: f64,
}

pub fn lattice(kappa: Number, beta: Number, alpha: f64, window: Window) -> Result<Table> {
    if !(0.0..1.0).contains(&alpha) {
        bail!("alpha must lie in [0, 1), got {alpha}");
    }
    if window.n_min > window.n_max {
        bail!("empty m window");
    }
    let params = quantized_params(kappa, beta)?;
    let family = Family::for_beta(params.beta);
    let mut t = Table::new("lattice", &["m", "l", "energy", "vacuum", "line"]);
    describe(kappa, beta, &mut t);
    t.meta("alpha", alpha).meta("window", format!("m - alpha in [{}, {}], l <= {}", window.n_min, window.n_max, window.l_max));
    let minus = annihilation_lines(&params, Sign::Minus);
    for (which, lines) in [("A-", &minus), ("A+", &annihilation_lines(&params, Sign::Plus))] {
        for line in lines {
            t.meta(
                &format!("line {}", line.id.name()),
                format!("{which} kernel on {}, normalizable for m in {}", line_equation(line.slope, line.intercept), interval(&line.normalizable)),
            );
        }
    }
    let w = LatticeWindow { n_min: window.n_min, n_max: window.n_max, l_max: window.l_max };
    for s in normalizable_lattice(&params, BoundaryClass::from_alpha(alpha), w) {
        let on: Vec<&str> = minus
            .iter()
            .filter(|line| line.is_normalizable(s.m) && (line.l_of_m(s.m) - s.l).abs() < 1e-9)
            .map(|line| line.id.name())
            .collect();
        t.push(vec![
            s.m.into(),
            s.l.into(),
            energy_unchecked(&params, family, s.l).into(),
            (!on.is_empty()).into(),
            if on.is_empty() { Cell::Empty } else { Cell::text(on.join("+")) },
        ]);
    }
    Ok(t)
}

pub fn morse(kappa: Number, beta: Number, lambda_sep: f64) -> Result<Table> {
    if kappa.value >= 0.0 {
        bail!("the horocyclic reduction needs κ < 0, got κ = {kappa}");
    }
    // The hyperbolic plane is simply connected, so the field is not
    // quantized here.
    let params = quantized_params(kappa, beta).unwrap_or_else(|_| ModelParams64::unchecked(kappa.value, beta.value));
    let mut t = Table::new("morse", &["row", "l", "E", "energy", "s"]);
    describe(kappa, beta, &mut t);
    t.meta("lambda", lambda_sep);
    t.meta("flux_quantized", params.flux_ratio.is_some());
    let threshold = continuum_threshold(&params)?;
    t.meta("E", "eigenvalue of the reduced equation, twice the Landau energy");
    match MorseReduction::new(&params, lambda_sep, threshold) {
        Ok(red) => t.meta("translation", format!("{:.16e}", red.translation)),
        Err(_) => t.meta("translation", "none: (beta + k lambda)/beta <= 0, no bound states for this lambda"),
    };
    t.push(vec!["threshold".into(), Cell::Empty, threshold.into(), (threshold / 2.0).into(), Cell::Empty]);
    for level in morse_discrete_spectrum(&params)? {
        t.push(vec!["level".into(), Cell::Int(level.l as i64), level.e.into(), level.energy.into(), level.s.into()]);
    }
    Ok(t)
}

/// n = `None` stands for n → ∞, i.e. κ = 0.
pub fn contract(beta: Number, ns: &[Option<u32>], l: u32, m: u32, r_max: f64, samples: usize) -> Result<Table> {
    if beta.value <= 0.0 {
        bail!("contraction runs along κ = 2β/n with β > 0");
    }
    if ns.contains(&Some(0)) {
        bail!("n must be positive");
    }
    if samples < 2 || r_max <= 0.0 {
        bail!("need r_max > 0 and at least two samples");
    }
    let grid = linspace(0.0, r_max, samples);
    let mut t = Table::new("contract", &["n", "kappa", "deviation", "constant", "prefactor", "polynomial", "monotone"]);
    t.meta("beta", beta).meta("l", l).meta("m", m).meta("grid", format!("r in [0, {r_max}], {samples} points"));
    t.meta("deviation", "sup |Psi(kappa) - Psi(0)| of the normalized radial functions");
    let mut previous: Option<f64> = None;
    for &n in ns {
        let (kappa, d) = match n {
            Some(n) => {
                let d = contraction_deviation(beta.value, n, l, m, &grid)?;
                (2.0 * beta.value / n as f64, [d.eigenfunction, d.constant, d.prefactor, d.polynomial])
            }
            None => (0.0, [0.0; 4]),
        };
        let monotone = previous.is_none_or(|p| d[0] < p || (d[0] == 0.0 && p == 0.0));
        previous = Some(d[0]);
        t.push(vec![
            n.map_or(Cell::text("inf"), |n| Cell::Int(n as i64)),
            kappa.into(),
            d[0].into(),
            d[1].into(),
            d[2].into(),
            d[3].into(),
            monotone.into(),
        ]);
    }
    Ok(t)
}
