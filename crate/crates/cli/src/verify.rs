use std::f64::consts::TAU;

use schmidt_osc_core::oracle::{
    approximation_convergence, overlap_coefficient_numeric, rdm_spectrum_numeric, unitary_evolution_numeric,
    ConvergencePoint,
};
use schmidt_osc_core::special::MAX_QUADRATURE_ORDER;
use schmidt_osc_core::{
    coefficient, gauss_hermite, schmidt_k_closed_form, schmidt_spectrum, ComparisonReport, Evolver, GridSpec,
    InitialState, QuadratureRule,
};
use serde::Serialize;

use crate::args::{Format, OutputArgs};
use crate::output::{emit, json, number, Csv};
use crate::CliError;

const COEFFICIENT_MUS: [f64; 4] = [0.1, 0.5, 0.9, 1.0];
const SPECTRUM_MUS: [f64; 3] = [0.3, 0.7, 1.0];
const K_MUS: [f64; 3] = [0.25, 0.5, 1.0];
const DYNAMICS_MUS: [f64; 3] = [1.0, 0.5, 0.1];
const COUPLINGS: [f64; 4] = [1e-1, 1e-2, 1e-3, 1e-4];
const SPECTRUM_MAX_ORDER: u32 = 8;
const DYNAMICS_MAX_ORDER: u32 = 10;
const DYNAMICS_SAMPLES: usize = 32;
const VERIFY_MAX_ORDER: u32 = 64;

#[derive(Debug, Serialize)]
struct Family {
    name: &'static str,
    checks: usize,
    max_abs_error: f64,
    max_rel_error: f64,
    worst_case: Option<String>,
    passed: bool,
}

impl Family {
    fn from_report(name: &'static str, r: ComparisonReport) -> Self {
        Self {
            name,
            checks: r.checks,
            max_abs_error: r.max_abs_error,
            max_rel_error: r.max_rel_error,
            worst_case: r.worst_case,
            passed: r.passed,
        }
    }
}

#[derive(Debug, Serialize)]
struct ConvergenceRow {
    n: u32,
    m: u32,
    c: f64,
    mu: f64,
    deviation: f64,
}

#[derive(Debug, Serialize)]
struct VerifyReport {
    max_order: u32,
    tolerance: f64,
    passed: bool,
    families: Vec<Family>,
    convergence: Vec<ConvergenceRow>,
}

pub fn run(max_order: u32, tolerance: f64, quad_points: Option<usize>, output: &OutputArgs) -> Result<(), CliError> {
    if !(tolerance.is_finite() && tolerance > 0.0) {
        return Err(CliError::Usage(format!("--tolerance: must be finite and > 0, got {tolerance}")));
    }
    if max_order > VERIFY_MAX_ORDER {
        return Err(CliError::Usage(format!(
            "--max-order: must not exceed {VERIFY_MAX_ORDER}, got {max_order}"
        )));
    }
    let fixed_rule = match quad_points {
        Some(q) => {
            let need = max_order as usize + 8;
            if q < need || q > MAX_QUADRATURE_ORDER {
                return Err(CliError::Usage(format!(
                    "--quad-points: must lie in {need}..={MAX_QUADRATURE_ORDER}, got {q}"
                )));
            }
            Some(gauss_hermite(q).map_err(|e| CliError::Numerical(e.to_string()))?)
        }
        None => None,
    };

    let mut families = vec![
        Family::from_report("coefficients", coefficients(max_order, tolerance, fixed_rule.as_ref())),
        Family::from_report("spectra", spectra(max_order, tolerance)),
        Family::from_report("closed_form_k", closed_form_k(max_order, tolerance)),
        Family::from_report("dynamics", dynamics(max_order, tolerance)),
    ];
    let (convergence_family, convergence) = convergence(max_order);
    families.push(convergence_family);
    let report = VerifyReport {
        max_order,
        tolerance,
        passed: families.iter().all(|f| f.passed),
        families,
        convergence,
    };

    let text = match output.format.unwrap_or(Format::Json) {
        Format::Json => json(&report)?,
        Format::Csv => {
            let mut csv = Csv::new(&["family", "checks", "max_abs_error", "max_rel_error", "worst_case", "passed"]);
            for f in &report.families {
                csv.row(&[
                    f.name.to_string(),
                    f.checks.to_string(),
                    number(f.max_abs_error),
                    number(f.max_rel_error),
                    f.worst_case.clone().unwrap_or_default().replace(',', ";"),
                    f.passed.to_string(),
                ]);
            }
            csv.into_string()
        }
    };
    emit(&text, output.output.as_deref())?;
    if report.passed {
        Ok(())
    } else {
        let failed: Vec<&str> = report.families.iter().filter(|f| !f.passed).map(|f| f.name).collect();
        Err(CliError::Numerical(format!("verification failed: {}", failed.join(", "))))
    }
}

fn coefficients(max_order: u32, tolerance: f64, fixed: Option<&QuadratureRule>) -> ComparisonReport {
    let mut report = ComparisonReport::new(tolerance);
    for total in 0..=max_order {
        let owned;
        let rule = match fixed {
            Some(r) => r,
            None => match gauss_hermite(total as usize + 8) {
                Ok(r) => {
                    owned = r;
                    &owned
                }
                Err(e) => {
                    report.fail(format!("quadrature rule for n+m={total}: {e}"));
                    continue;
                }
            },
        };
        for n in 0..=total {
            let m = total - n;
            for k in 0..=total {
                let p = total - k;
                for mu in COEFFICIENT_MUS {
                    let label = || format!("n={n} m={m} k={k} p={p} mu={mu}");
                    match (coefficient(n, m, k, p, mu), overlap_coefficient_numeric(n, m, k, p, mu, rule)) {
                        (Ok(closed), Ok(numeric)) => report.record(label, numeric, closed),
                        (Err(e), _) | (_, Err(e)) => report.fail(format!("{}: {e}", label())),
                    }
                }
            }
        }
    }
    report
}

fn spectra(max_order: u32, tolerance: f64) -> ComparisonReport {
    let mut report = ComparisonReport::new(tolerance);
    let top = max_order.min(SPECTRUM_MAX_ORDER);
    let grid = GridSpec::for_quantum(top);
    for total in 0..=top {
        for n in 0..=total {
            let m = total - n;
            for mu in SPECTRUM_MUS {
                let label = |i: usize| format!("n={n} m={m} mu={mu} rank={i}");
                let closed = schmidt_spectrum(n, m, mu).map(|s| {
                    let mut l = s.lambdas;
                    l.sort_by(|a, b| b.total_cmp(a));
                    l
                });
                match (closed, rdm_spectrum_numeric(n, m, mu, &grid)) {
                    (Ok(closed), Ok(numeric)) => {
                        for (i, c) in closed.iter().enumerate() {
                            report.record(|| label(i), numeric[i], *c);
                        }
                    }
                    (Err(e), _) | (_, Err(e)) => report.fail(format!("n={n} m={m} mu={mu}: {e}")),
                }
            }
        }
    }
    report
}

fn closed_form_k(max_order: u32, tolerance: f64) -> ComparisonReport {
    let mut report = ComparisonReport::new(tolerance);
    for m in 0..=max_order {
        for mu in K_MUS {
            let label = || format!("m={m} mu={mu}");
            let purity = schmidt_spectrum(0, m, mu).map(|s| s.lambdas.iter().map(|l| l * l).sum::<f64>());
            match (schmidt_k_closed_form(m, mu), purity) {
                (Ok(k), Ok(p)) => report.record(label, 1.0 / p, k),
                (Err(e), _) | (_, Err(e)) => report.fail(format!("{}: {e}", label())),
            }
        }
    }
    report
}

fn dynamics(max_order: u32, tolerance: f64) -> ComparisonReport {
    let mut report = ComparisonReport::new(tolerance);
    let times: Vec<f64> = (0..DYNAMICS_SAMPLES)
        .map(|i| TAU * i as f64 / DYNAMICS_SAMPLES as f64)
        .collect();
    for s in 0..=max_order.min(DYNAMICS_MAX_ORDER) {
        for s1 in 0..=s {
            let s2 = s - s1;
            for mu in DYNAMICS_MUS {
                let result = InitialState::new(s1, s2).and_then(|state| {
                    let reference = unitary_evolution_numeric(state, mu, 1.0, &times)?;
                    let ev = Evolver::linear(state, mu, 1.0)?;
                    Ok((reference, ev))
                });
                match result {
                    Ok((reference, ev)) => {
                        for (t, want) in times.iter().zip(&reference) {
                            for (k, (got, w)) in ev.spectrum(*t).iter().zip(want).enumerate() {
                                report.record(|| format!("s1={s1} s2={s2} mu={mu} delta_t={t} k={k}"), *w, *got);
                            }
                        }
                    }
                    Err(e) => report.fail(format!("s1={s1} s2={s2} mu={mu}: {e}")),
                }
            }
        }
    }
    report
}

fn convergence(max_order: u32) -> (Family, Vec<ConvergenceRow>) {
    let states: Vec<(u32, u32)> = if max_order >= 2 {
        vec![(0, 2), (1, 1)]
    } else {
        vec![(0, max_order)]
    };
    let grid = GridSpec::for_quantum(max_order.min(2));
    let mut rows = Vec::new();
    let mut passed = true;
    let mut worst_case = None;
    for (n, m) in states {
        match approximation_convergence(n, m, &COUPLINGS, &grid) {
            Ok(points) => {
                if !monotone(&points) {
                    passed = false;
                    worst_case = Some(format!("n={n} m={m}: deviation not decreasing"));
                }
                rows.extend(points.into_iter().map(|p| ConvergenceRow {
                    n,
                    m,
                    c: p.c,
                    mu: p.mu,
                    deviation: p.deviation,
                }));
            }
            Err(e) => {
                passed = false;
                worst_case = Some(format!("n={n} m={m}: {e}"));
            }
        }
    }
    let max_dev = rows.iter().map(|r| r.deviation).fold(0.0, f64::max);
    let family = Family {
        name: "convergence",
        checks: rows.len(),
        max_abs_error: max_dev,
        max_rel_error: max_dev,
        worst_case,
        passed,
    };
    (family, rows)
}

/// Deviation strictly decreasing as the coupling shrinks, or already at the
/// round-off floor.
fn monotone(points: &[ConvergencePoint]) -> bool {
    const FLOOR: f64 = 1e-12;
    points
        .windows(2)
        .all(|w| w[1].deviation < w[0].deviation || w[0].deviation.max(w[1].deviation) < FLOOR)
}
