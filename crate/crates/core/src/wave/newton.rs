//! Newton iteration for symmetric periodic waves.
//!
//! Unknowns are the heights on levels `1..=N` (the bottom is fixed at zero)
//! and the Bernoulli constant `Q`. Waves are kept even about `x = 0`, which
//! fixes the crest at the origin and removes the translation mode; only the
//! columns `0..=n_x/2` are unknown. The extra equation is the amplitude
//! constraint `(h(0, m) - h(L/2, m)) / 2 = a`.
//!
//! The Jacobian is block tridiagonal in `p` with dense blocks in `x`
//! (spectral coupling). Interior levels are eliminated bottom-up, leaving a
//! bordered dense system for the surface heights and `Q`.

use nalgebra::{DMatrix, DVector};

use crate::config::SolverConfig;
use crate::error::{Error, Result};
use crate::stream_flows::FluidParams;

use super::dispersion::{bifurcation_point, linear_mode};
use super::field::WaveField;
use super::grid::{stream_height, HeightField};
use super::residual::{Discretization, Evaluation};

struct EvenLayout {
    n: usize,
    half: usize,
}

impl EvenLayout {
    fn new(n: usize) -> Self {
        Self { n, half: n / 2 }
    }

    fn nh(&self) -> usize {
        self.half + 1
    }

    #[inline]
    fn fold(&self, k: usize) -> usize {
        if k <= self.half {
            k
        } else {
            self.n - k
        }
    }
}

fn symmetrize(values: &mut [f64], n_x: usize) {
    for row in values.chunks_mut(n_x) {
        for i in 1..n_x / 2 {
            let avg = 0.5 * (row[i] + row[n_x - i]);
            row[i] = avg;
            row[n_x - i] = avg;
        }
    }
}

/// Accumulates a full-width row `full` into the folded matrix row `i`.
fn fold_into(m: &mut DMatrix<f64>, i: usize, full: &[f64], layout: &EvenLayout) {
    for (k, v) in full.iter().enumerate() {
        m[(i, layout.fold(k))] += v;
    }
}

struct Blocks {
    lower: DMatrix<f64>,
    diag: DMatrix<f64>,
    upper: DMatrix<f64>,
}

fn interior_blocks(
    disc: &Discretization,
    layout: &EvenLayout,
    h: &[f64],
    hx_all: &[f64],
    j: usize,
) -> Blocks {
    let n = disc.n_x;
    let nh = layout.nh();
    let d1 = &disc.d1;
    let hx = &hx_all[j * n..(j + 1) * n];
    let hp: Vec<f64> = (0..n).map(|l| disc.hp_node(h, l, j)).collect();
    let a_j = 1.0 / (disc.dtau * disc.dp_node[j]);
    let c_j = 0.5 * a_j;
    let e_up = 1.0 / (disc.dtau * disc.dp_half[j]);
    let e_dn = 1.0 / (disc.dtau * disc.dp_half[j - 1]);

    let mut lower = DMatrix::zeros(nh, nh);
    let mut diag = DMatrix::zeros(nh, nh);
    let mut upper = DMatrix::zeros(nh, nh);
    let mut row_lo = vec![0.0; n];
    let mut row_di = vec![0.0; n];
    let mut row_up = vec![0.0; n];
    let mut tmp = vec![0.0; n];

    for i in 0..nh {
        let d1_row = &d1[i * n..(i + 1) * n];
        let half_terms = |jj: usize| {
            let hxm = 0.5 * (hx_all[jj * n + i] + hx_all[(jj + 1) * n + i]);
            let sp = disc.hp_half(h, i, jj);
            (hxm / (sp * sp), -(1.0 + hxm * hxm) / (sp * sp * sp))
        };
        let (al_up, be_up) = half_terms(j);
        let (al_dn, be_dn) = half_terms(j - 1);

        // D1[i,:] diag(1/hp) D1
        for t in tmp.iter_mut() {
            *t = 0.0;
        }
        for l in 0..n {
            let w = d1_row[l] / hp[l];
            if w != 0.0 {
                let r = &d1[l * n..(l + 1) * n];
                for (t, v) in tmp.iter_mut().zip(r) {
                    *t += w * v;
                }
            }
        }
        for k in 0..n {
            let dk = d1_row[k];
            let dbdk = hx[k] * c_j / (hp[k] * hp[k]);
            row_lo[k] = dk * dbdk + a_j * al_dn * 0.5 * dk;
            row_di[k] = tmp[k] - a_j * (al_up * 0.5 * dk - al_dn * 0.5 * dk);
            row_up[k] = -dk * dbdk - a_j * al_up * 0.5 * dk;
        }
        row_lo[i] -= a_j * be_dn * e_dn;
        row_di[i] += a_j * (be_up * e_up + be_dn * e_dn);
        row_up[i] -= a_j * be_up * e_up;

        fold_into(&mut lower, i, &row_lo, layout);
        fold_into(&mut diag, i, &row_di, layout);
        fold_into(&mut upper, i, &row_up, layout);
    }
    Blocks { lower, diag, upper }
}

fn half_vector(full: &[f64], layout: &EvenLayout) -> DVector<f64> {
    DVector::from_iterator(layout.nh(), full[..layout.nh()].iter().copied())
}

fn singular(level: usize) -> Error {
    Error::RootFinding(format!("singular Jacobian block at level {level}"))
}

/// Solves `J (dh, dQ) = -(r_interior, r_surface, r_amplitude)`.
///
/// Returns level corrections for `1..=N` (index 0 unused) and `dQ`.
fn newton_step(
    disc: &Discretization,
    layout: &EvenLayout,
    h: &[f64],
    ev: &Evaluation,
    amp_residual: f64,
) -> Result<(Vec<DVector<f64>>, f64)> {
    let n = disc.n_x;
    let nh = layout.nh();
    let top = disc.top();
    let mut xs: Vec<DMatrix<f64>> = vec![DMatrix::zeros(0, 0); top];
    let mut ys: Vec<DVector<f64>> = vec![DVector::zeros(nh); top];

    for j in 1..top {
        let blk = interior_blocks(disc, layout, h, &ev.hx, j);
        let r = half_vector(&ev.interior[j * n..(j + 1) * n], layout);
        let (m, rhs) = if j == 1 {
            (blk.diag, -r)
        } else {
            (
                blk.diag + &blk.lower * &xs[j - 1],
                -r - &blk.lower * &ys[j - 1],
            )
        };
        let lu = m.lu();
        let x = lu.solve(&(-blk.upper)).ok_or_else(|| singular(j))?;
        let y = lu.solve(&rhs).ok_or_else(|| singular(j))?;
        xs[j] = x;
        ys[j] = y;
    }

    // surface rows
    let cs = 1.0 / (2.0 * disc.dtau * disc.dp_node[top]);
    let mut g_blk = DMatrix::zeros(nh, nh);
    let mut f_diag = DVector::zeros(nh);
    let mut e_diag = DVector::zeros(nh);
    let mut row = vec![0.0; n];
    for i in 0..nh {
        let hxs = ev.hx[top * n + i];
        let hps = disc.hp_surface(h, i);
        let s_hx = hxs / (hps * hps);
        let s_hp = -(1.0 + hxs * hxs) / (hps * hps * hps);
        for (r, d) in row.iter_mut().zip(&disc.d1[i * n..(i + 1) * n]) {
            *r = s_hx * d;
        }
        row[i] += disc.g + 3.0 * cs * s_hp;
        fold_into(&mut g_blk, i, &row, layout);
        f_diag[i] = -4.0 * cs * s_hp;
        e_diag[i] = cs * s_hp;
    }
    let x1 = &xs[top - 1];
    let y1 = &ys[top - 1];
    let (x2x1, x2y1_y2) = if top >= 3 {
        (&xs[top - 2] * x1, &xs[top - 2] * y1 + &ys[top - 2])
    } else {
        (DMatrix::zeros(nh, nh), DVector::zeros(nh))
    };
    let mut k_blk = g_blk;
    for i in 0..nh {
        for c in 0..nh {
            k_blk[(i, c)] += f_diag[i] * x1[(i, c)] + e_diag[i] * x2x1[(i, c)];
        }
    }
    let s_half = half_vector(&ev.surface[..n], layout);
    let mut aug = DMatrix::zeros(nh + 1, nh + 1);
    let mut rhs = DVector::zeros(nh + 1);
    for i in 0..nh {
        for c in 0..nh {
            aug[(i, c)] = k_blk[(i, c)];
        }
        aug[(i, nh)] = -1.0;
        rhs[i] = -s_half[i] - f_diag[i] * y1[i] - e_diag[i] * x2y1_y2[i];
    }
    aug[(nh, 0)] = 0.5;
    aug[(nh, layout.half)] = -0.5;
    rhs[nh] = -amp_residual;
    let sol = aug.lu().solve(&rhs).ok_or_else(|| singular(top))?;

    let mut delta = vec![DVector::zeros(nh); top + 1];
    delta[top] = sol.rows(0, nh).into_owned();
    for j in (1..top).rev() {
        delta[j] = &xs[j] * &delta[j + 1] + &ys[j];
    }
    Ok((delta, sol[nh]))
}

/// Outcome of one Newton solve.
pub(crate) struct NewtonOutcome {
    pub wave: WaveField,
    pub iterations: usize,
}

/// Newton iteration from `guess` for the symmetric wave of half height `amplitude`.
pub(crate) fn newton_solve(
    guess: &HeightField,
    amplitude: f64,
    cfg: &SolverConfig,
) -> Result<NewtonOutcome> {
    let disc = Discretization::new(guess)?;
    let layout = EvenLayout::new(guess.n_x);
    let mut field = guess.clone();
    symmetrize(&mut field.values, field.n_x);
    let n = field.n_x;
    let top = disc.top();
    let amp_scale = field.coordinate()?.depth();

    for iter in 0..=cfg.max_newton {
        let ev = disc.evaluate(&field.values, field.bernoulli)?;
        let norms = disc.norms(&ev);
        let amp_residual = field.half_height() - amplitude;
        if !(norms.interior.is_finite() && norms.surface.is_finite()) {
            return Err(Error::NoConvergence {
                iterations: iter,
                interior: norms.interior,
                surface: norms.surface,
            });
        }
        if norms.below(cfg.tol_interior, cfg.tol_surface) && amp_residual.abs() <= 1e-12 * amp_scale
        {
            let eta = field.surface().to_vec();
            return Ok(NewtonOutcome {
                wave: WaveField {
                    field,
                    eta,
                    residual: norms,
                },
                iterations: iter,
            });
        }
        if iter == cfg.max_newton {
            return Err(Error::NoConvergence {
                iterations: iter,
                interior: norms.interior,
                surface: norms.surface,
            });
        }
        let (delta, dq) =
            newton_step(&disc, &layout, &field.values, &ev, amp_residual).map_err(|_| {
                Error::NoConvergence {
                    iterations: iter,
                    interior: norms.interior,
                    surface: norms.surface,
                }
            })?;
        for (j, dj) in delta.iter().enumerate().take(top + 1).skip(1) {
            let row = &mut field.values[j * n..(j + 1) * n];
            for i in 0..layout.nh() {
                row[i] += dj[i];
            }
            for i in 1..layout.half {
                row[n - i] = row[i];
            }
        }
        field.bernoulli += dq;
    }
    unreachable!("loop returns on its last iteration")
}

/// Laminar field at `s` plus `amplitude` times the linear mode.
pub fn cosine_guess(
    params: &FluidParams<f64>,
    s: f64,
    wavelength: f64,
    amplitude: f64,
    cfg: &SolverConfig,
) -> Result<HeightField> {
    let mut base = stream_height(params, s, wavelength, cfg.n_x, cfg.n_p)?;
    let heights: Vec<f64> = (0..base.n_p).map(|j| base.at(0, j)).collect();
    let k = base.wavenumber();
    let mode = linear_mode(params, k, s, &heights)?;
    let n = base.n_x;
    for (j, w) in mode.iter().enumerate().skip(1) {
        for i in 0..n {
            let phase = (k * base.x(i)).cos();
            base.values[j * n + i] += amplitude * w * phase;
        }
    }
    Ok(base)
}

/// Symmetric periodic wave of wavelength `L` with `(h(0,m) - h(L/2,m))/2 = amplitude`.
///
/// Without `init` the iteration starts from the laminar flow at the
/// bifurcation parameter plus a multiple of the linear mode; with
/// `amplitude = 0` that laminar flow is returned as is.
pub fn solve_periodic(
    params: &FluidParams<f64>,
    wavelength: f64,
    amplitude: f64,
    init: Option<&HeightField>,
    cfg: &SolverConfig,
) -> Result<WaveField> {
    solve_periodic_counted(params, wavelength, amplitude, init, cfg).map(|o| o.wave)
}

pub(crate) fn solve_periodic_counted(
    params: &FluidParams<f64>,
    wavelength: f64,
    amplitude: f64,
    init: Option<&HeightField>,
    cfg: &SolverConfig,
) -> Result<NewtonOutcome> {
    params.validate()?;
    cfg.validate()?;
    if !(amplitude.is_finite() && amplitude >= 0.0) {
        return Err(Error::InvalidParams(format!(
            "amplitude must be non-negative, got {amplitude}"
        )));
    }
    if !(wavelength.is_finite() && wavelength > 0.0) {
        return Err(Error::InvalidParams(format!(
            "wavelength must be positive, got {wavelength}"
        )));
    }
    let guess = match init {
        Some(f) => {
            if f.params != *params || f.wavelength != wavelength {
                return Err(Error::InvalidParams(
                    "initial field does not match the requested parameters".into(),
                ));
            }
            f.clone()
        }
        None => {
            let s = bifurcation_point(params, wavelength)?;
            if amplitude == 0.0 {
                let base = stream_height(params, s, wavelength, cfg.n_x, cfg.n_p)?;
                return Ok(NewtonOutcome {
                    wave: WaveField::from_field(base)?,
                    iterations: 0,
                });
            }
            cosine_guess(params, s, wavelength, amplitude, cfg)?
        }
    };
    newton_solve(&guess, amplitude, cfg)
}
