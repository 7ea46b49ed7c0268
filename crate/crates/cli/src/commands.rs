//! The four subcommands. Machine-readable output goes to `--output` or
//! standard output; the human summary goes to standard error.

use std::path::Path;

use serde::Serialize;

use wavebound::amplitude_bounds::refined_bound;
use wavebound::certify::SWEEP_COLUMNS;
use wavebound::scaling::nondimensionalize;
use wavebound::stream_flows::stream_window;
use wavebound::wave::{bifurcation_point, continue_branch, mid_window_wavelength, solve_periodic};
use wavebound::{
    certify_wave, compare_decay_rates, sweep_vorticity, BoundBranch, BoundCertificate, BranchSpec,
    Error, FluidParams, WaveField,
};

use crate::args::{Flags, Format};
use crate::{Failure, EXIT_CERTIFICATION, EXIT_SOLVER};

/// Default number of continuation steps for `solve`.
const SOLVE_STEPS: usize = 20;

fn emit(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| Failure::usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            println!("{}", text.trim_end());
            Ok(())
        }
    }
}

fn json<T: Serialize>(v: &T) -> Result<String, Failure> {
    serde_json::to_string_pretty(v).map_err(|e| Failure::usage(e.to_string()))
}

fn csv_record(header: &[&str], values: &[String]) -> String {
    format!("{}\n{}\n", header.join(","), values.join(","))
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(String::new, |v| v.to_string())
}

#[derive(Serialize)]
struct BoundsReport {
    g: f64,
    omega: f64,
    m: f64,
    s0: f64,
    sc: f64,
    q0: f64,
    qc: f64,
    d0: f64,
    epsilon: f64,
    lambda: f64,
    theorem_bound: f64,
    refined_bound: f64,
    d_tilde_1: f64,
    branch: BoundBranch,
}

const BOUNDS_COLUMNS: [&str; 13] = [
    "g",
    "omega",
    "m",
    "s0",
    "sc",
    "Q0",
    "Qc",
    "d0",
    "epsilon",
    "lambda",
    "theorem_bound",
    "refined_bound",
    "d_tilde_1",
];

pub fn bounds(flags: &Flags) -> Result<u8, Failure> {
    let p = flags.params()?;
    let w = stream_window(&p)?;
    let b = refined_bound(&p)?;
    let nd = nondimensionalize(&p, None);
    let r = BoundsReport {
        g: p.g,
        omega: p.omega,
        m: p.m,
        s0: w.s0,
        sc: w.sc,
        q0: w.q0,
        qc: w.qc,
        d0: w.d0,
        epsilon: nd.epsilon,
        lambda: nd.lambda,
        theorem_bound: b.theorem_bound,
        refined_bound: b.refined_bound,
        d_tilde_1: b.d_tilde_1,
        branch: b.branch,
    };
    let text = match flags.format() {
        Format::Json => json(&r)?,
        Format::Csv => {
            let v = [
                r.g,
                r.omega,
                r.m,
                r.s0,
                r.sc,
                r.q0,
                r.qc,
                r.d0,
                r.epsilon,
                r.lambda,
                r.theorem_bound,
                r.refined_bound,
                r.d_tilde_1,
            ];
            csv_record(&BOUNDS_COLUMNS, &v.map(|x| x.to_string()))
        }
    };
    emit(flags.output.as_deref(), &text)?;
    Ok(0)
}

pub fn solve(flags: &Flags) -> Result<u8, Failure> {
    let p = flags.params()?;
    let amplitude = flags.amplitude()?;
    let solver = flags.solver()?;
    if flags.format == Some(Format::Csv) {
        return Err(Failure::usage("waves are written as JSON only"));
    }
    let wavelength = match flags.wavelength()? {
        Some(l) => l,
        None => mid_window_wavelength(&p)?.1,
    };
    let s = bifurcation_point(&p, wavelength)?;
    let wave = if amplitude == 0.0 {
        solve_periodic(&p, wavelength, 0.0, None, &solver)?
    } else {
        let spec = BranchSpec::to(amplitude, flags.steps(SOLVE_STEPS)?);
        let branch = continue_branch(&p, wavelength, &spec, &solver)?.into_result(amplitude)?;
        eprintln!("newton iterations per step: {:?}", branch.iterations);
        branch
            .waves
            .into_iter()
            .last()
            .expect("branch holds its base wave")
    };
    eprintln!("wavelength      {wavelength}");
    eprintln!("bifurcation s*  {s}");
    eprintln!("Q               {}", wave.bernoulli());
    eprintln!("half height     {}", wave.field.half_height());
    eprintln!(
        "residual        interior {:e}, surface {:e}",
        wave.residual.interior, wave.residual.surface
    );
    emit(flags.output.as_deref(), &wave.to_json()?)?;
    Ok(0)
}

fn certificate_csv(c: &BoundCertificate) -> String {
    let v = [
        c.omega.to_string(),
        c.g.to_string(),
        c.m.to_string(),
        c.wavelength.to_string(),
        c.amplitude.to_string(),
        c.theorem_bound.to_string(),
        c.refined_bound.to_string(),
        c.q.to_string(),
        c.qc.to_string(),
        c.q0.to_string(),
        opt(c.d_minus),
        opt(c.d_plus),
        c.d0.to_string(),
        c.inf_eta.to_string(),
        c.sup_eta.to_string(),
        c.flags(),
    ];
    csv_record(&SWEEP_COLUMNS, &v)
}

pub fn certify(path: &Path, flags: &Flags) -> Result<u8, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
    let wave = WaveField::from_json(&text)
        .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    let params: FluidParams = if flags.g.is_some() || flags.omega.is_some() || flags.m.is_some() {
        flags.params()?
    } else {
        *wave.params()
    };
    let cert = certify_wave(&wave, &params)?;
    eprint!("{cert}");
    if cert.stream {
        eprintln!("stream input: the depth inequalities are vacuous");
    }
    let out = match flags.format() {
        Format::Json => cert.to_json()?,
        Format::Csv => certificate_csv(&cert),
    };
    emit(flags.output.as_deref(), &out)?;
    Ok(if cert.passed() { 0 } else { EXIT_CERTIFICATION })
}

pub fn sweep(flags: &Flags) -> Result<u8, Failure> {
    let (base, omegas) = flags.sweep_base()?;
    let spec = flags.sweep_spec()?;
    let table = sweep_vorticity(&omegas, &base, &spec)?;
    for row in &table.rows {
        let status = match (&row.error, row.all_passed) {
            (Some(e), _) => format!("error: {e}"),
            (None, true) => format!("{} waves, all certified", row.waves),
            (None, false) => format!("{} waves, CERTIFICATE FAILURE", row.waves),
        };
        eprintln!(
            "omega {:<8} amplitude {:<24} bound {:<24} {status}",
            row.omega,
            opt(row.amplitude),
            row.theorem_bound
        );
    }
    match compare_decay_rates(&table) {
        Ok(report) => {
            eprint!("{report}");
            if let Some(path) = &flags.report {
                emit(Some(path), &json(&report)?)?;
            }
        }
        Err(e @ Error::InsufficientRows { .. }) => eprintln!("no decay fit: {e}"),
        Err(e) => return Err(e.into()),
    }
    let out = match flags.format.unwrap_or(Format::Csv) {
        Format::Json => table.to_json()?,
        Format::Csv => table.to_csv()?,
    };
    emit(flags.output.as_deref(), &out)?;
    if table.succeeded().next().is_none() {
        return Err(Failure {
            code: EXIT_SOLVER,
            message: "no row of the sweep succeeded".into(),
        });
    }
    Ok(0)
}
