use std::f64::consts::TAU;
use std::path::Path;

use schmidt_osc_core::{
    diagonalize, schmidt_spectrum, sweep_mu, CouplerSpec, DiagonalForm, EvolutionMode, Evolver, InitialState,
};
use serde::Serialize;

use crate::args::{Cli, Command, Format, MixingArgs, OutputArgs, SystemArgs};
use crate::output::{emit, json, number, Csv};
use crate::{verify, CliError};

pub fn execute(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Diagonalize { system, output } => run_diagonalize(system, output),
        Command::Stationary { n, m, mixing, output } => run_stationary(*n, *m, mixing, output),
        Command::SweepMu {
            n,
            m,
            mu_min,
            mu_max,
            steps,
            output,
        } => run_sweep(*n, *m, *mu_min, *mu_max, *steps, output),
        Command::Evolve {
            s1,
            s2,
            mixing,
            steps,
            periods,
            exact,
            absolute_time,
            output,
        } => run_evolve(
            EvolveRequest {
                s1: *s1,
                s2: *s2,
                steps: *steps,
                periods: *periods,
                exact: *exact,
                absolute_time: *absolute_time,
            },
            mixing,
            output,
        ),
        Command::Verify {
            max_order,
            tolerance,
            quad_points,
            output,
        } => verify::run(*max_order, *tolerance, *quad_points, output),
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn read_system_json(path: &Path) -> Result<CouplerSpec, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| usage(format!("--from-json: {}: {e}", path.display())))?;
    let field = |key: &str| {
        value
            .get(key)
            .and_then(serde_json::Value::as_f64)
            .ok_or_else(|| usage(format!("--from-json: missing numeric field `{key}`")))
    };
    CouplerSpec::unit_mass(field("a")?, field("b")?, field("c")?).map_err(|e| CliError::core("--from-json", e))
}

fn resolve_system(system: &SystemArgs) -> Result<DiagonalForm, CliError> {
    let spec = if let Some(path) = &system.from_json {
        read_system_json(path)?
    } else {
        let a = system.a.ok_or_else(|| usage("--A is required"))?;
        let b = system.b.ok_or_else(|| usage("--B is required"))?;
        let c = system.c.ok_or_else(|| usage("--C is required"))?;
        CouplerSpec::new(system.m1, system.m2, a, b, c).map_err(|e| {
            let flag = match &e {
                schmidt_osc_core::Error::InvalidParameter { name, .. } => format!("--{name}"),
                _ => "--C".to_string(),
            };
            CliError::core(&flag, e)
        })?
    };
    diagonalize(spec).map_err(|e| CliError::core("--C", e))
}

/// `mu` plus the form it came from, when one was given.
fn resolve_mixing(mixing: &MixingArgs) -> Result<(f64, Option<DiagonalForm>), CliError> {
    if let Some(mu) = mixing.mu {
        if !(mu.is_finite() && mu.abs() <= 1.0) {
            return Err(usage(format!("--mu: must satisfy |mu| <= 1, got {mu}")));
        }
        return Ok((mu, None));
    }
    if !mixing.system.is_given() {
        return Err(usage("--mu or --A/--B/--C is required"));
    }
    let form = resolve_system(&mixing.system)?;
    Ok((form.mu, Some(form)))
}

#[derive(Serialize)]
struct DiagonalizeReport {
    a: f64,
    b: f64,
    c: f64,
    epsilon: Option<f64>,
    mu: f64,
    alpha: f64,
    a_prime: f64,
    b_prime: f64,
    k_param: f64,
    eta: f64,
    delta: f64,
}

fn run_diagonalize(system: &SystemArgs, output: &OutputArgs) -> Result<(), CliError> {
    let f = resolve_system(system)?;
    let report = DiagonalizeReport {
        a: f.spec.a(),
        b: f.spec.b(),
        c: f.spec.c(),
        epsilon: f.epsilon,
        mu: f.mu,
        alpha: f.alpha,
        a_prime: f.a_prime,
        b_prime: f.b_prime,
        k_param: f.k_param,
        eta: f.eta,
        delta: f.coupling_delta(),
    };
    let text = match output.format.unwrap_or(Format::Json) {
        Format::Json => json(&report)?,
        Format::Csv => {
            let mut csv = Csv::new(&[
                "a", "b", "c", "epsilon", "mu", "alpha", "a_prime", "b_prime", "k_param", "eta", "delta",
            ]);
            let r = &report;
            csv.row(&[
                number(r.a),
                number(r.b),
                number(r.c),
                r.epsilon.map(number).unwrap_or_default(),
                number(r.mu),
                number(r.alpha),
                number(r.a_prime),
                number(r.b_prime),
                number(r.k_param),
                number(r.eta),
                number(r.delta),
            ]);
            csv.into_string()
        }
    };
    emit(&text, output.output.as_deref())
}

#[derive(Serialize)]
struct StationaryReport {
    n: u32,
    m: u32,
    mu: f64,
    lambdas: Vec<f64>,
    entropy: f64,
    schmidt_k: f64,
}

fn run_stationary(n: u32, m: u32, mixing: &MixingArgs, output: &OutputArgs) -> Result<(), CliError> {
    let (mu, _) = resolve_mixing(mixing)?;
    let spectrum = schmidt_spectrum(n, m, mu).map_err(|e| CliError::core("--n/--m", e))?;
    let e = spectrum.entanglement();
    let text = match output.format.unwrap_or(Format::Json) {
        Format::Json => json(&StationaryReport {
            n,
            m,
            mu,
            entropy: e.entropy,
            schmidt_k: e.schmidt_k,
            lambdas: spectrum.lambdas,
        })?,
        Format::Csv => {
            let mut csv = Csv::new(&["k", "lambda"]);
            for (k, l) in spectrum.lambdas.iter().enumerate() {
                csv.row(&[k.to_string(), number(*l)]);
            }
            csv.into_string()
        }
    };
    emit(&text, output.output.as_deref())
}

/// `steps` evenly spaced values from `lo` to `hi` inclusive.
fn linear_grid(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    if steps == 1 {
        return vec![lo];
    }
    let span = hi - lo;
    (0..steps)
        .map(|i| if i + 1 == steps { hi } else { lo + span * i as f64 / (steps - 1) as f64 })
        .collect()
}

#[derive(Serialize)]
struct SweepReport {
    n: u32,
    m: u32,
    rows: Vec<SweepEntry>,
}

#[derive(Serialize)]
struct SweepEntry {
    mu: f64,
    entropy: f64,
    schmidt_k: f64,
}

fn run_sweep(n: u32, m: u32, mu_min: f64, mu_max: f64, steps: usize, output: &OutputArgs) -> Result<(), CliError> {
    if !(mu_min > 0.0 && mu_min <= 1.0) {
        return Err(usage(format!("--mu-min: must lie in (0, 1], got {mu_min}")));
    }
    if !(mu_max >= mu_min && mu_max <= 1.0) {
        return Err(usage(format!("--mu-max: must lie in [--mu-min, 1], got {mu_max}")));
    }
    if steps == 0 {
        return Err(usage("--steps: must be at least 1"));
    }
    let rows = sweep_mu(n, m, &linear_grid(mu_min, mu_max, steps)).map_err(|e| CliError::core("--n/--m", e))?;
    let text = match output.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut csv = Csv::new(&["mu", "entropy", "schmidt_k"]);
            for r in &rows {
                csv.row(&[number(r.mu), number(r.entropy), number(r.schmidt_k)]);
            }
            csv.into_string()
        }
        Format::Json => json(&SweepReport {
            n,
            m,
            rows: rows
                .iter()
                .map(|r| SweepEntry {
                    mu: r.mu,
                    entropy: r.entropy,
                    schmidt_k: r.schmidt_k,
                })
                .collect(),
        })?,
    };
    emit(&text, output.output.as_deref())
}

struct EvolveRequest {
    s1: u32,
    s2: u32,
    steps: usize,
    periods: f64,
    exact: bool,
    absolute_time: bool,
}

#[derive(Serialize)]
struct EvolveReport {
    s1: u32,
    s2: u32,
    mu: f64,
    mode: &'static str,
    time_axis: &'static str,
    times: Vec<f64>,
    entropies: Vec<f64>,
    spectra: Vec<Vec<f64>>,
}

fn run_evolve(req: EvolveRequest, mixing: &MixingArgs, output: &OutputArgs) -> Result<(), CliError> {
    if req.steps == 0 {
        return Err(usage("--steps: must be at least 1"));
    }
    if !(req.periods.is_finite() && req.periods > 0.0) {
        return Err(usage(format!("--periods: must be finite and > 0, got {}", req.periods)));
    }
    let state = InitialState::new(req.s1, req.s2).map_err(|e| CliError::core("--s1/--s2", e))?;
    let (mu, form) = resolve_mixing(mixing)?;

    let needs_form = |flag: &str| usage(format!("{flag}: requires --A/--B/--C or --from-json instead of --mu"));
    let delta = match &form {
        Some(f) => Some(f.coupling_delta()),
        None if req.exact => return Err(needs_form("--exact")),
        None if req.absolute_time => return Err(needs_form("--absolute-time")),
        None => None,
    };
    if (req.exact || req.absolute_time) && delta == Some(0.0) {
        let flag = if req.exact { "--exact" } else { "--absolute-time" };
        return Err(usage(format!("{flag}: an uncoupled system (C = 0) has no oscillation period")));
    }

    let span = TAU * req.periods;
    let delta_t: Vec<f64> = (0..req.steps).map(|i| span * i as f64 / req.steps as f64).collect();
    let to_time = |x: &f64| x / delta.expect("checked above").abs();
    let (mode, trace) = if req.exact {
        let form = form.as_ref().expect("checked above");
        let times: Vec<f64> = delta_t.iter().map(to_time).collect();
        let trace = Evolver::from_form(state, form, EvolutionMode::ExactGap)
            .and_then(|ev| ev.trace(&times, EvolutionMode::ExactGap));
        (EvolutionMode::ExactGap, trace)
    } else {
        let trace = Evolver::linear(state, mu, 1.0).and_then(|ev| ev.trace(&delta_t, EvolutionMode::LinearGap));
        (EvolutionMode::LinearGap, trace)
    };
    let trace = trace.map_err(|e| CliError::core("--s1/--s2", e))?;
    let (axis, times): (&'static str, Vec<f64>) = if req.absolute_time {
        ("t", delta_t.iter().map(to_time).collect())
    } else {
        ("delta_t", delta_t)
    };

    let text = match output.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut header = vec![axis.to_string(), "entropy".to_string()];
            header.extend((0..=state.total()).map(|k| format!("lambda_{k}")));
            let mut csv = Csv::new(&header);
            for ((t, s), lam) in times.iter().zip(&trace.entropies).zip(&trace.spectra) {
                let mut row = vec![number(*t), number(*s)];
                row.extend(lam.iter().map(|l| number(*l)));
                csv.row(&row);
            }
            csv.into_string()
        }
        Format::Json => json(&EvolveReport {
            s1: req.s1,
            s2: req.s2,
            mu,
            mode: mode.as_str(),
            time_axis: axis,
            times,
            entropies: trace.entropies,
            spectra: trace.spectra,
        })?,
    };
    emit(&text, output.output.as_deref())
}
