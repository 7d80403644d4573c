//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines are always printed.

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use landau::eigenfunctions::{
    confluent_path, contraction_deviation, eigenfunction, hypergeometric_path, jacobi_path, laguerre_path,
};
use landau::ladder::spectral_flow_index;
use landau::morse::{continuum_threshold, morse_discrete_spectrum, morse_energy_exact, morse_residual};
use landau::numerics::{linspace, residual_norm};
use landau::representation::hamiltonian;
use landau::spectrum::{
    admissible_levels, energy, energy_exact, is_admissible, m_range, state_density, Degeneracy, Family, StateLabel,
};
use landau::ModelParams64;
use landau_cli::verify::{
    factorization_residual, gram_deviation, lowering_spread, run_suite, table_mismatches, Options, Suite,
};
use num_rational::Ratio;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn params(k: f64, b: f64) -> ModelParams64 {
    ModelParams64::new(k, b).unwrap()
}

fn q(n: i64) -> Ratio<i64> {
    Ratio::from_integer(n)
}

/// Admissible lowest-family labels with l ≤ l_max and |m| ≤ m_abs.
fn labels(p: &ModelParams64, l_max: i64, m_abs: i64) -> Vec<StateLabel<f64>> {
    let mut out = Vec::new();
    for l in 0..=l_max {
        for m in m_range(p, Family::Lowest, l as f64).integers_within(-m_abs, m_abs) {
            let s = StateLabel::lowest(l, m);
            if is_admissible(p, &s).is_ok() {
                out.push(s);
            }
        }
    }
    out
}

fn grid(k: f64, n: usize) -> Vec<f64> {
    let end = if k > 0.0 { PI / k.sqrt() } else { 6.0 };
    linspace(0.05 * end, 0.95 * end, n)
}

fn spectrum_points() -> Outcome {
    let e = |k, b, l| energy_exact(q(k), q(b), Family::Lowest, l).map_err(|e| e.to_string());
    ensure(e(1, 0, 2)? == q(3), "energy(κ=1, β=0, l=2) ≠ 3")?;
    ensure(e(1, 2, 0)? == q(1), "energy(κ=1, β=2, l=0) ≠ 1")?;
    ensure(e(-1, 2, 0)? == q(1) && e(-1, 2, 1)? == q(2), "κ=−1, β=2 levels ≠ {1, 2}")?;
    let f = |k, b, l| energy(&params(k, b), Family::Lowest, l).unwrap();
    ensure(f(1.0, 0.0, 2.0) == 3.0 && f(1.0, 2.0, 0.0) == 1.0, "floating-point energies not exact")?;
    ensure(f(-1.0, 2.0, 0.0) == 1.0 && f(-1.0, 2.0, 1.0) == 2.0, "floating-point hyperbolic energies not exact")?;
    Ok("E(1,0,2)=3, E(1,2,0)=1, E(-1,2,{0,1})={1,2}".into())
}

fn degeneracy_and_density() -> Outcome {
    let p = params(1.0, 2.0);
    let dims: Vec<u64> = admissible_levels(&p, Family::Lowest)
        .take(6)
        .map(|line| match line.degeneracy {
            Degeneracy::Finite(n) => n,
            Degeneracy::CountablyInfinite => 0,
        })
        .collect();
    let expected: Vec<u64> = (0..6).map(|l| 2 * (l + 2) + 1).collect();
    ensure(dims == expected, format!("dimensions {dims:?}"))?;
    let rho = state_density(&p, 0.0);
    ensure((rho - 5.0 / (4.0 * PI)).abs() < 1e-14, format!("density {rho}"))?;
    let count = admissible_levels(&params(-1.0, 2.0), Family::Lowest).count();
    ensure(count == 2, format!("{count} hyperbolic levels"))?;
    Ok(format!("dimensions {dims:?}, density {rho:.15}, 2 hyperbolic levels"))
}

fn eigen_residuals() -> Outcome {
    let mut cases: Vec<(f64, i64)> = [1.0, 0.5, -0.5, -1.0].iter().map(|&k| (k, 2)).collect();
    cases.push((0.0, 3));
    let mut worst = 0.0f64;
    let mut states = 0;
    for (k, l_max) in cases {
        let p = params(k, 2.0);
        let g = grid(k, 200);
        for s in labels(&p, l_max, 6) {
            let f = eigenfunction(&p, &s).map_err(|e| e.to_string())?.to_radial_function();
            let e = energy(&p, Family::Lowest, s.l).unwrap();
            let r = residual_norm(&hamiltonian(&p, s.m), &f, e, &g).value;
            ensure(r < 1e-8, format!("κ={k} l={} m={}: residual {r:e}", s.l, s.m))?;
            worst = worst.max(r);
            states += 1;
        }
    }
    Ok(format!("{states} states, worst relative residual {worst:.2e}"))
}

fn orthonormality() -> Outcome {
    let p = params(1.0, 2.0);
    let ls = labels(&p, 1, 10);
    let dev = gram_deviation(&p, &ls).map_err(|e| e.to_string())?;
    ensure(ls.len() == 12, format!("{} states instead of 12", ls.len()))?;
    ensure(dev < 1e-8, format!("max |G - I| = {dev:e}"))?;
    Ok(format!("{} states, max |G - I| = {dev:.2e}", ls.len()))
}

fn commutator_suites() -> Outcome {
    let opts = Options::default();
    let mut rows = run_suite(Suite::Commutators, &opts).rows;
    rows.extend(run_suite(Suite::Gauge, &opts).rows);
    let mut worst = 0.0f64;
    for r in &rows {
        let v = r.residual.ok_or_else(|| format!("{} {}: {}", r.check, r.params, r.note))?;
        ensure(v < 1e-6, format!("{} {}: {v:e}", r.check, r.params))?;
        worst = worst.max(v);
    }
    let casimir = rows.iter().filter(|r| r.check.contains("C(J,B)")).count();
    ensure(casimir == 3, "Casimir identity missing from the suite")?;
    Ok(format!("{} identities, worst residual {worst:.2e}", rows.len()))
}

fn ladder_consistency() -> Outcome {
    let mut worst_fact = 0.0f64;
    for (k, b) in [(1.0, 2.0), (-1.0, 2.0), (0.0, 2.0)] {
        let p = params(k, b);
        for s in labels(&p, 2, 4) {
            let r = factorization_residual(&p, &s).map_err(|e| e.to_string())?;
            ensure(r < 1e-8, format!("factorization κ={k} l={} m={}: {r:e}", s.l, s.m))?;
            worst_fact = worst_fact.max(r);
        }
    }
    let mut worst_spread = 0.0f64;
    for (k, l, m) in [(1.0, 1, 0), (1.0, 2, 1), (1.0, 2, 3), (-1.0, 1, 0), (-1.0, 1, 2)] {
        let s = lowering_spread(&params(k, 2.0), l, m).map_err(|e| e.to_string())?;
        ensure(s < 1e-8, format!("A- proportionality κ={k} l={l} m={m}: {s:e}"))?;
        worst_spread = worst_spread.max(s);
    }
    for (k, b) in [(1.0, 2.0), (-1.0, 2.0), (0.0, 2.0)] {
        let n = table_mismatches(&params(k, b));
        ensure(n == 0, format!("κ={k}: {n} table mismatches"))?;
    }
    let flow: Vec<i64> = [1.0, 0.0, -1.0].iter().map(|&k| spectral_flow_index(&params(k, 2.0))).collect();
    ensure(flow == [0, 1, 1], format!("spectral flow {flow:?}"))?;
    Ok(format!("factorization {worst_fact:.2e}, proportionality {worst_spread:.2e}, tables exact, flow {flow:?}"))
}

fn dual_paths() -> Outcome {
    let mut worst = 0.0f64;
    for (k, b) in [(1.0, 2.0), (0.5, 2.0), (-0.5, 2.0), (-1.0, 2.0), (-1.0, 3.5), (0.0, 2.0)] {
        let p = params(k, b);
        let g = grid(k, 100);
        for s in labels(&p, 2, 6) {
            let mut scale = 0.0f64;
            let mut diff = 0.0f64;
            for &r in &g {
                let (a, c) = if k == 0.0 {
                    (confluent_path(&p, &s, r), laguerre_path(&p, &s, r))
                } else {
                    (hypergeometric_path(&p, &s, r), jacobi_path(&p, &s, r))
                };
                let (a, c) = (a.map_err(|e| e.to_string())?, c.map_err(|e| e.to_string())?);
                scale = scale.max(a.abs());
                diff = diff.max((a - c).abs());
            }
            let rel = diff / scale;
            ensure(rel < 1e-12, format!("κ={k} l={} m={}: {rel:e}", s.l, s.m))?;
            worst = worst.max(rel);
        }
    }
    Ok(format!("worst relative disagreement {worst:.2e}"))
}

fn contraction() -> Outcome {
    let g = linspace(0.0, 4.0, 41);
    let ns = [8, 16, 32, 64, 128, 256, 512, 1024];
    let mut last = Vec::new();
    for m in 0..=4 {
        let devs: Vec<f64> = ns
            .iter()
            .map(|&n| contraction_deviation(2.0, n, 0, m, &g).map(|d| d.eigenfunction))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        ensure(devs.windows(2).all(|w| w[1] < w[0]), format!("m={m}: not monotone {devs:?}"))?;
        let end = *devs.last().unwrap();
        ensure(end < 1e-2, format!("m={m}: deviation {end:e} at n=1024"))?;
        last.push(end);
    }
    Ok(format!("monotone for m <= 4, deviations at n=1024 up to {:.2e}", last.iter().cloned().fold(0.0, f64::max)))
}

fn morse_agreement() -> Outcome {
    let p = params(-1.0, 2.0);
    let levels = morse_discrete_spectrum(&p).map_err(|e| e.to_string())?;
    let energies: Vec<f64> = levels.iter().map(|l| l.energy).collect();
    let landau: Vec<f64> = (0..2).map(|l| energy(&p, Family::Lowest, l as f64).unwrap()).collect();
    ensure(energies == landau, format!("Morse {energies:?} vs {landau:?}"))?;
    for l in 0..3 {
        let morse = morse_energy_exact(q(-1), q(2), l).map_err(|e| e.to_string())?;
        let expected = energy_exact(q(-1), q(2), Family::Lowest, l).ok().filter(|_| l < 2);
        ensure(morse == expected, format!("exact l={l}: {morse:?} vs {expected:?}"))?;
    }
    let threshold = continuum_threshold(&p).map_err(|e| e.to_string())?;
    ensure(threshold == 4.25, format!("threshold {threshold}"))?;
    let g = linspace(-5.0, 15.0, 401);
    let mut worst = 0.0f64;
    for l in 0..levels.len() as u32 {
        worst = worst.max(morse_residual(&p, l, &g, 1e-3).map_err(|e| e.to_string())?);
    }
    ensure(worst < 1e-8, format!("Morse residual {worst:e}"))?;
    Ok(format!("levels {energies:?}, threshold {threshold}, residual {worst:.2e}"))
}

fn verify_all_binary() -> Outcome {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_landau"))
        .args(["verify", "--suite", "all"])
        .output()
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let stdout = String::from_utf8_lossy(&out.stdout);
    let failed: Vec<&str> = stdout.lines().filter(|l| l.contains(",false,")).collect();
    ensure(out.status.code() == Some(0), format!("exit {:?}; failing rows: {failed:?}", out.status.code()))?;
    ensure(elapsed < Duration::from_secs(60), format!("took {elapsed:.1?}"))?;
    let checks = stdout.lines().find(|l| l.starts_with("# checks:")).unwrap_or("# checks: ?");
    Ok(format!("exit 0 in {elapsed:.1?}, {}", checks.trim_start_matches("# ")))
}

type Criterion = (&'static str, Option<Duration>, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("spectrum point checks", None, spectrum_points),
        ("degeneracy and state density", None, degeneracy_and_density),
        ("eigen residuals", Some(Duration::from_secs(10)), eigen_residuals),
        ("orthonormality", None, orthonormality),
        ("commutator, Casimir and gauge suites", None, commutator_suites),
        ("ladder consistency", None, ladder_consistency),
        ("dual-path equality", None, dual_paths),
        ("contraction", Some(Duration::from_secs(30)), contraction),
        ("Morse agreement", None, morse_agreement),
        ("verify --suite all", Some(Duration::from_secs(60)), verify_all_binary),
    ];
    let mut failures = 0;
    for (i, (name, budget, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = match (outcome, budget) {
            (Ok(_), Some(b)) if elapsed > *b => Err(format!("took {elapsed:.1?}, budget {b:?}")),
            (o, _) => o,
        };
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{elapsed:.2?}]", i + 1),
            Err(why) => {
                failures += 1;
                println!("criterion {:>2} FAIL  {name}: {why} [{elapsed:.2?}]", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
