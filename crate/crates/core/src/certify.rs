//! Certificates for the amplitude bound and the Bernoulli window, and
//! vorticity sweeps of computed branches.

use std::fmt;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::amplitude_bounds::{refined_bound, theorem_bound};
use crate::config::{BranchSpec, SolverConfig};
use crate::error::{Error, Result};
use crate::scaling::{nondim_fluid, nondimensionalize};
use crate::stream_flows::{depth_pair_in, stream_window, FluidParams, StreamWindow};
use crate::wave::{continue_branch, mid_window_wavelength, WaveField};

/// Residual levels a wave must meet before it is certified.
pub const MAX_INTERIOR_RESIDUAL: f64 = 1e-10;
pub const MAX_SURFACE_RESIDUAL: f64 = 1e-8;
/// A check passes when its margin exceeds `-MARGIN_TOLERANCE * scale`.
pub const MARGIN_TOLERANCE: f64 = 1e-9;
/// Waves with amplitude below `STREAM_FRACTION * d0` count as laminar.
pub const STREAM_FRACTION: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    /// Not applicable: the input is a laminar stream.
    Vacuous,
}

impl Verdict {
    pub fn symbol(self) -> char {
        match self {
            Verdict::Pass => 'P',
            Verdict::Fail => 'F',
            Verdict::Vacuous => 'V',
        }
    }
}

/// One inequality: raw signed margin (positive when it holds strictly) and verdict.
///
/// The margin is absent when the quantities it compares do not exist, e.g.
/// conjugate depths for a Bernoulli constant outside the window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub margin: Option<f64>,
    pub scale: f64,
    pub verdict: Verdict,
}

impl Check {
    fn judge(margin: Option<f64>, scale: f64, vacuous: bool) -> Self {
        let verdict = if vacuous {
            Verdict::Vacuous
        } else {
            match margin {
                Some(m) if m > -MARGIN_TOLERANCE * scale => Verdict::Pass,
                _ => Verdict::Fail,
            }
        };
        Self {
            margin,
            scale,
            verdict,
        }
    }
}

/// The five inequalities, in certificate order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Checks {
    /// `2g/omega^2 - (sup eta - inf eta)`
    pub amplitude: Check,
    /// `min(Q - Qc, Q0 - Q)`
    pub bernoulli_window: Check,
    /// `inf eta - d_-(Q)`
    pub trough_above_d_minus: Check,
    /// `sup eta - d_+(Q)`
    pub crest_above_d_plus: Check,
    /// `d0 - sup eta`
    pub crest_below_d0: Check,
}

impl Checks {
    pub fn as_array(&self) -> [Check; 5] {
        [
            self.amplitude,
            self.bernoulli_window,
            self.trough_above_d_minus,
            self.crest_above_d_plus,
            self.crest_below_d0,
        ]
    }

    /// One symbol per check: `P`, `F` or `V`.
    pub fn flags(&self) -> String {
        self.as_array().iter().map(|c| c.verdict.symbol()).collect()
    }

    pub fn passed(&self) -> bool {
        self.as_array().iter().all(|c| c.verdict != Verdict::Fail)
    }
}

/// Margins of the same five inequalities in the rescaled problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NondimMargins {
    pub epsilon: f64,
    pub lambda: f64,
    pub amplitude: f64,
    pub bernoulli_window: f64,
    pub trough_above_d_minus: Option<f64>,
    pub crest_above_d_plus: Option<f64>,
    pub crest_below_d0: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCertificate {
    pub g: f64,
    pub omega: f64,
    pub m: f64,
    pub wavelength: f64,
    /// `sup eta - inf eta`
    pub amplitude: f64,
    pub theorem_bound: f64,
    pub refined_bound: f64,
    pub q: f64,
    pub qc: f64,
    pub q0: f64,
    pub d_minus: Option<f64>,
    pub d_plus: Option<f64>,
    pub d0: f64,
    pub inf_eta: f64,
    pub sup_eta: f64,
    pub stream: bool,
    pub checks: Checks,
    pub nondim: NondimMargins,
}

impl BoundCertificate {
    pub fn flags(&self) -> String {
        self.checks.flags()
    }

    pub fn passed(&self) -> bool {
        self.checks.passed()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

impl fmt::Display for BoundCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let opt = |v: Option<f64>| v.map_or_else(|| "-".to_string(), |v| format!("{v:.12e}"));
        writeln!(
            f,
            "amplitude      {:.12e}  (sup {:.12e}, inf {:.12e})",
            self.amplitude, self.sup_eta, self.inf_eta
        )?;
        writeln!(f, "theorem bound  {:.12e}", self.theorem_bound)?;
        writeln!(f, "refined bound  {:.12e}", self.refined_bound)?;
        writeln!(
            f,
            "Q              {:.12e}  in ({:.12e}, {:.12e})",
            self.q, self.qc, self.q0
        )?;
        writeln!(
            f,
            "d-(Q), d+(Q)   {}, {}",
            opt(self.d_minus),
            opt(self.d_plus)
        )?;
        writeln!(f, "d0             {:.12e}", self.d0)?;
        let names = [
            "amplitude < 2g/omega^2",
            "Qc < Q < Q0",
            "inf eta >= d-(Q)",
            "sup eta >= d+(Q)",
            "sup eta <= d0",
        ];
        for (name, c) in names.iter().zip(self.checks.as_array()) {
            writeln!(
                f,
                "{:<5} {:<24} margin {}",
                format!("{:?}", c.verdict).to_lowercase(),
                name,
                opt(c.margin)
            )?;
        }
        Ok(())
    }
}

/// Extremum of periodic samples, refined by the parabola through the
/// extremal node and its neighbours.
fn refined_extremum(eta: &[f64], max: bool) -> f64 {
    let n = eta.len();
    let sign = if max { 1.0 } else { -1.0 };
    let (i, _) = eta
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |(bi, bv), (i, &e)| {
            if sign * e > bv {
                (i, sign * e)
            } else {
                (bi, bv)
            }
        });
    let (a, b, c) = (eta[(i + n - 1) % n], eta[i], eta[(i + 1) % n]);
    let curvature = a - 2.0 * b + c;
    if sign * curvature < 0.0 {
        let shift = (c - a) * (c - a) / (8.0 * curvature);
        b - shift
    } else {
        b
    }
}

/// Evaluates all five inequalities on a converged wave.
pub fn certify_wave(wave: &WaveField, params: &FluidParams<f64>) -> Result<BoundCertificate> {
    params.validate()?;
    if wave.params() != params {
        return Err(Error::InvalidParams(
            "wave was computed for different fluid parameters".into(),
        ));
    }
    let r = wave.residual;
    if !(r.interior <= MAX_INTERIOR_RESIDUAL && r.surface <= MAX_SURFACE_RESIDUAL) {
        return Err(Error::Unconverged {
            interior: r.interior,
            surface: r.surface,
        });
    }
    if wave.eta.is_empty() || wave.eta.iter().any(|e| !(e.is_finite() && *e > 0.0)) {
        return Err(Error::InvalidParams(
            "surface profile must be positive".into(),
        ));
    }
    let window = stream_window(params)?;
    let bound = refined_bound(params)?;
    let q = wave.bernoulli();
    let sup_eta = refined_extremum(&wave.eta, true);
    let inf_eta = refined_extremum(&wave.eta, false);
    let amplitude = sup_eta - inf_eta;
    let stream = amplitude < STREAM_FRACTION * window.d0;

    let pair = depth_pair_in(q, params, &window).ok();
    let (d_minus, d_plus) = (pair.map(|p| p.d_minus), pair.map(|p| p.d_plus));
    let (dl, ql) = (window.d0, window.q0);
    let checks = Checks {
        amplitude: Check::judge(Some(theorem_bound(params) - amplitude), dl, false),
        bernoulli_window: Check::judge(Some((q - window.qc).min(window.q0 - q)), ql, stream),
        trough_above_d_minus: Check::judge(d_minus.map(|d| inf_eta - d), dl, stream),
        crest_above_d_plus: Check::judge(d_plus.map(|d| sup_eta - d), dl, stream),
        crest_below_d0: Check::judge(Some(window.d0 - sup_eta), dl, stream),
    };
    let nondim = nondim_margins(params, q, sup_eta, inf_eta)?;
    Ok(BoundCertificate {
        g: params.g,
        omega: params.omega,
        m: params.m,
        wavelength: wave.wavelength(),
        amplitude,
        theorem_bound: bound.theorem_bound,
        refined_bound: bound.refined_bound,
        q,
        qc: window.qc,
        q0: window.q0,
        d_minus,
        d_plus,
        d0: window.d0,
        inf_eta,
        sup_eta,
        stream,
        checks,
        nondim,
    })
}

/// The same margins recomputed from the rescaled parameters `(epsilon, 1, 1)`.
fn nondim_margins(
    params: &FluidParams<f64>,
    q: f64,
    sup_eta: f64,
    inf_eta: f64,
) -> Result<NondimMargins> {
    let nd = nondimensionalize(params, Some(q));
    let fluid = nondim_fluid(params);
    let w: StreamWindow<f64> = stream_window(&fluid)?;
    let qt = nd.q_tilde.expect("Bernoulli constant supplied");
    let (sup, inf) = (nd.lambda * sup_eta, nd.lambda * inf_eta);
    let pair = depth_pair_in(qt, &fluid, &w).ok();
    Ok(NondimMargins {
        epsilon: nd.epsilon,
        lambda: nd.lambda,
        amplitude: 2.0 * nd.epsilon - (sup - inf),
        bernoulli_window: (qt - w.qc).min(w.q0 - qt),
        trough_above_d_minus: pair.map(|p| inf - p.d_minus),
        crest_above_d_plus: pair.map(|p| sup - p.d_plus),
        crest_below_d0: w.d0 - sup,
    })
}

/// Settings for [`sweep_vorticity`].
///
/// Each branch is continued in equal steps towards a crest-to-trough height
/// of `max_fraction * d0`; in practice it ends earlier, at the stagnation
/// stop or where Newton fails.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub max_fraction: f64,
    /// Number of steps to `max_fraction * d0`.
    pub steps: usize,
    pub solver: SolverConfig,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            max_fraction: 0.5,
            steps: 100,
            solver: SolverConfig::default(),
        }
    }
}

impl SweepSpec {
    /// Continuation settings for a fluid with maximal depth `d0`.
    pub fn branch(&self, d0: f64) -> BranchSpec {
        BranchSpec::to(0.5 * self.max_fraction * d0, self.steps)
    }
}

/// One row of a vorticity sweep; solver-dependent fields are absent when
/// the row failed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub omega: f64,
    pub g: f64,
    pub m: f64,
    pub wavelength: Option<f64>,
    /// Largest certified `sup eta - inf eta` along the branch.
    pub amplitude: Option<f64>,
    pub theorem_bound: f64,
    pub refined_bound: f64,
    pub q: Option<f64>,
    pub qc: f64,
    pub q0: f64,
    pub d_minus: Option<f64>,
    pub d_plus: Option<f64>,
    pub d0: f64,
    pub inf_eta: Option<f64>,
    pub sup_eta: Option<f64>,
    /// Flags of the last wave on the branch.
    pub flags: Option<String>,
    /// Number of waves certified along the branch, base flow included.
    pub waves: usize,
    /// Every wave on the branch passed.
    pub all_passed: bool,
    /// Why continuation stopped short of the target.
    pub termination: Option<String>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
}

pub const SWEEP_COLUMNS: [&str; 16] = [
    "omega",
    "g",
    "m",
    "L",
    "amplitude",
    "theorem_bound",
    "refined_bound",
    "Q",
    "Qc",
    "Q0",
    "d_minus",
    "d_plus",
    "d0",
    "inf_eta",
    "sup_eta",
    "flags",
];

impl SweepTable {
    pub fn succeeded(&self) -> impl Iterator<Item = &SweepRow> {
        self.rows.iter().filter(|r| r.error.is_none())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// CSV in the column order of [`SWEEP_COLUMNS`]; failed rows carry
    /// `error` in the flags column.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(SWEEP_COLUMNS).map_err(csv_error)?;
        let num = |v: f64| v.to_string();
        let opt = |v: Option<f64>| v.map(|v| v.to_string()).unwrap_or_default();
        for r in &self.rows {
            let flags = match (&r.error, &r.flags) {
                (Some(_), _) => "error".to_string(),
                (None, f) => f.clone().unwrap_or_default(),
            };
            w.write_record([
                num(r.omega),
                num(r.g),
                num(r.m),
                opt(r.wavelength),
                opt(r.amplitude),
                num(r.theorem_bound),
                num(r.refined_bound),
                opt(r.q),
                num(r.qc),
                num(r.q0),
                opt(r.d_minus),
                opt(r.d_plus),
                num(r.d0),
                opt(r.inf_eta),
                opt(r.sup_eta),
                flags,
            ])
            .map_err(csv_error)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is UTF-8"))
    }
}

fn csv_error(e: csv::Error) -> Error {
    Error::Config(format!("csv: {e}"))
}

fn sweep_row(params: FluidParams<f64>, spec: &SweepSpec) -> Result<SweepRow> {
    let window = stream_window(&params)?;
    let bound = refined_bound(&params)?;
    let mut row = SweepRow {
        omega: params.omega,
        g: params.g,
        m: params.m,
        wavelength: None,
        amplitude: None,
        theorem_bound: bound.theorem_bound,
        refined_bound: bound.refined_bound,
        q: None,
        qc: window.qc,
        q0: window.q0,
        d_minus: None,
        d_plus: None,
        d0: window.d0,
        inf_eta: None,
        sup_eta: None,
        flags: None,
        waves: 0,
        all_passed: false,
        termination: None,
        error: None,
    };
    let mut run = || -> Result<()> {
        let (_, wavelength) = mid_window_wavelength(&params)?;
        row.wavelength = Some(wavelength);
        let branch = continue_branch(&params, wavelength, &spec.branch(window.d0), &spec.solver)?;
        let mut all = true;
        let mut best: Option<BoundCertificate> = None;
        for wave in &branch.waves {
            let cert = certify_wave(wave, &params)?;
            all &= cert.passed();
            if best.as_ref().is_none_or(|b| cert.amplitude >= b.amplitude) {
                best = Some(cert);
            }
        }
        let c = best.expect("branch holds its base wave");
        row.amplitude = Some(c.amplitude);
        row.q = Some(c.q);
        row.d_minus = c.d_minus;
        row.d_plus = c.d_plus;
        row.inf_eta = Some(c.inf_eta);
        row.sup_eta = Some(c.sup_eta);
        row.flags = Some(c.flags());
        row.waves = branch.waves.len();
        row.all_passed = all;
        row.termination = branch.termination;
        Ok(())
    };
    if let Err(e) = run() {
        row.error = Some(e.to_string());
    }
    Ok(row)
}

/// Continues one branch per vorticity and certifies every wave on it.
///
/// Rows run in parallel; a failing row records its error and the sweep goes on.
pub fn sweep_vorticity(
    omegas: &[f64],
    base: &FluidParams<f64>,
    spec: &SweepSpec,
) -> Result<SweepTable> {
    base.validate()?;
    spec.solver.validate()?;
    if omegas.is_empty() {
        return Err(Error::InvalidParams("no vorticities given".into()));
    }
    if omegas.iter().any(|w| !(w.is_finite() && *w > 0.0))
        || omegas.windows(2).any(|w| w[0] >= w[1])
    {
        return Err(Error::InvalidParams(
            "vorticities must be positive and strictly increasing".into(),
        ));
    }
    if !(spec.max_fraction > 0.0 && spec.steps > 0) {
        return Err(Error::Config(format!("invalid sweep settings {spec:?}")));
    }
    let rows = omegas
        .par_iter()
        .map(|&omega| sweep_row(FluidParams::new(base.g, omega, base.m)?, spec))
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepTable { rows })
}

/// Least-squares slope with a 95% confidence half-width.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    /// Absent for two points, where no residual variance is available.
    pub ci95: Option<f64>,
    pub points: usize,
}

fn fit_loglog(points: &[(f64, f64)]) -> Option<SlopeFit> {
    let n = points.len();
    if n < 2 {
        return None;
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|(x, y)| (x.ln(), y.ln())).collect();
    let nf = n as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / nf;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / nf;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ci95 = (n > 2).then(|| {
        let sse: f64 = logs
            .iter()
            .map(|p| (p.1 - intercept - slope * p.0).powi(2))
            .sum();
        let se = (sse / (nf - 2.0) / sxx).sqrt();
        let t = StudentsT::new(0.0, 1.0, nf - 2.0).expect("positive degrees of freedom");
        t.inverse_cdf(0.975) * se
    });
    Some(SlopeFit {
        slope,
        intercept,
        ci95,
        points: n,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayReport {
    pub rows: usize,
    pub theorem_bound: SlopeFit,
    /// `|theorem slope + 2| <= 1e-12`.
    pub theorem_slope_exact: bool,
    pub refined_bound: SlopeFit,
    /// Fit over rows that produced a positive amplitude.
    pub achieved: Option<SlopeFit>,
    /// Achieved amplitude below the theorem bound on every successful row.
    pub achieved_below_bound: bool,
    /// Refined bound below the theorem bound on every row.
    pub refined_below_theorem: bool,
}

impl fmt::Display for DecayReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let line = |f: &mut fmt::Formatter<'_>, name: &str, s: &SlopeFit| {
            let ci = s
                .ci95
                .map_or_else(String::new, |c| format!(" +/- {c:.3e} (95%)"));
            writeln!(
                f,
                "{name:<14} slope {:.12}{ci} over {} rows",
                s.slope, s.points
            )
        };
        line(f, "theorem bound", &self.theorem_bound)?;
        line(f, "refined bound", &self.refined_bound)?;
        match &self.achieved {
            Some(s) => line(f, "achieved", s)?,
            None => writeln!(f, "achieved       too few rows with a positive amplitude")?,
        }
        writeln!(
            f,
            "achieved below theorem bound on every row: {}",
            self.achieved_below_bound
        )
    }
}

/// Log-log slopes of the bound and achieved-amplitude columns against `omega`.
pub fn compare_decay_rates(table: &SweepTable) -> Result<DecayReport> {
    let n = table.rows.len();
    if n < 4 {
        return Err(Error::InsufficientRows { needed: 4, got: n });
    }
    let theorem: Vec<_> = table
        .rows
        .iter()
        .map(|r| (r.omega, r.theorem_bound))
        .collect();
    let refined: Vec<_> = table
        .rows
        .iter()
        .map(|r| (r.omega, r.refined_bound))
        .collect();
    let achieved: Vec<_> = table
        .succeeded()
        .filter_map(|r| r.amplitude.filter(|a| *a > 0.0).map(|a| (r.omega, a)))
        .collect();
    let theorem_bound = fit_loglog(&theorem).expect("at least four rows");
    Ok(DecayReport {
        rows: n,
        theorem_slope_exact: (theorem_bound.slope + 2.0).abs() <= 1e-12,
        theorem_bound,
        refined_bound: fit_loglog(&refined).expect("at least four rows"),
        achieved: fit_loglog(&achieved),
        achieved_below_bound: table
            .succeeded()
            .all(|r| r.amplitude.is_some_and(|a| a < r.theorem_bound)),
        refined_below_theorem: table.rows.iter().all(|r| r.refined_bound < r.theorem_bound),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parabola_refines_extrema() {
        let n = 16;
        let eta: Vec<f64> = (0..n)
            .map(|i| 1.0 + 0.1 * (2.0 * std::f64::consts::PI * (i as f64 + 0.3) / n as f64).cos())
            .collect();
        let sup = refined_extremum(&eta, true);
        let node = eta.iter().cloned().fold(f64::MIN, f64::max);
        assert!(sup > node && sup <= 1.1 + 1e-4);
        let inf = refined_extremum(&eta, false);
        assert!(inf < eta.iter().cloned().fold(f64::MAX, f64::min) && inf >= 0.9 - 1e-4);
    }

    #[test]
    fn loglog_fit_of_power_law() {
        let pts: Vec<_> = [0.5, 1.0, 2.0, 4.0]
            .iter()
            .map(|&w: &f64| (w, 3.0 * w.powi(-2)))
            .collect();
        let f = fit_loglog(&pts).unwrap();
        assert!((f.slope + 2.0).abs() < 1e-14);
        assert!(f.ci95.unwrap() < 1e-12);
    }

    #[test]
    fn too_few_rows() {
        let t = SweepTable { rows: vec![] };
        assert!(matches!(
            compare_decay_rates(&t),
            Err(Error::InsufficientRows { got: 0, .. })
        ));
    }
}
