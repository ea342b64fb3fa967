//! Parabolic line-search optimizers and a Nelder–Mead baseline.
//!
//! Every optimizer here works on an [`Objective`] whose evaluations are
//! assumed expensive (each one is a quantum experiment), reports how many
//! evaluations it made, and never returns a point worse than the best one it
//! sampled.

use rayon::prelude::*;

use crate::error::{Error, Result};

/// A real function of `arity` parameters.
pub trait Objective: Sync {
    fn arity(&self) -> usize;
    fn eval(&self, x: &[f64]) -> Result<f64>;
}

/// Adapts a closure to [`Objective`].
pub struct FnObjective<F> {
    arity: usize,
    f: F,
}

impl<F> FnObjective<F>
where
    F: Fn(&[f64]) -> Result<f64> + Sync,
{
    pub fn new(arity: usize, f: F) -> Self {
        Self { arity, f }
    }
}

impl<F> Objective for FnObjective<F>
where
    F: Fn(&[f64]) -> Result<f64> + Sync,
{
    fn arity(&self) -> usize {
        self.arity
    }

    fn eval(&self, x: &[f64]) -> Result<f64> {
        (self.f)(x)
    }
}

/// Settings of the parabolic optimizers.
#[derive(Debug, Clone, PartialEq)]
pub struct ParabolicConfig {
    /// Half-width of the three-point stencil of the line search.
    pub delta_x_line: f64,
    /// Forward-difference step of the gradient.
    pub delta_x_grad: f64,
    /// Maximum number of parabola fits per line search (1 or 2).
    pub max_refinements: usize,
    /// A fit whose vertex lies further than this many `delta_x_line` from
    /// its center is repeated around the vertex.
    pub refine_threshold: f64,
    /// Smallest accepted second difference `g(+) + g(−) − 2g(0)`.
    pub curvature_floor: f64,
    /// A far vertex is not refined when its measured value agrees with the
    /// parabola's prediction to this tolerance (relative to `max(1, |g₀|)`):
    /// the function is then a parabola along the line and a second fit
    /// cannot move the vertex.
    pub model_tolerance: f64,
    /// Run a second gradient + line-search pass from the first result.
    pub second_pass: bool,
}

impl Default for ParabolicConfig {
    fn default() -> Self {
        Self {
            delta_x_line: 0.1,
            delta_x_grad: 1e-6,
            max_refinements: 2,
            refine_threshold: 3.0,
            curvature_floor: 1e-12,
            model_tolerance: 1e-12,
            second_pass: false,
        }
    }
}

impl ParabolicConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("delta_x_line", self.delta_x_line),
            ("delta_x_grad", self.delta_x_grad),
            ("refine_threshold", self.refine_threshold),
            ("curvature_floor", self.curvature_floor),
            ("model_tolerance", self.model_tolerance),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidConfig(format!("{name} must be positive, got {v}")));
            }
        }
        if !(1..=2).contains(&self.max_refinements) {
            return Err(Error::InvalidConfig(format!(
                "max_refinements must be 1 or 2, got {}",
                self.max_refinements
            )));
        }
        Ok(())
    }
}

/// Outcome of [`parabolic_1d`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineMinimum {
    pub x: f64,
    pub value: f64,
    pub evals: usize,
    /// Parabola fits attempted.
    pub passes: usize,
    /// The last fit found no positive curvature; `x` is the best sample.
    pub no_curvature: bool,
}

/// Vertex of the parabola through `(c − δ, g₋)`, `(c, g₀)`, `(c + δ, g₊)`.
///
/// Returns `None` when the second difference is below `floor`, i.e. the
/// three points do not bound a minimum.
pub fn parabola_vertex(center: f64, delta: f64, g_minus: f64, g_center: f64, g_plus: f64, floor: f64) -> Option<f64> {
    let curvature = g_plus + g_minus - 2.0 * g_center;
    if curvature.is_nan() || curvature < floor {
        return None;
    }
    Some(center - 0.5 * delta * (g_plus - g_minus) / curvature)
}

/// One-dimensional parabolic minimizer.
///
/// `g_center` must already be known; each fit costs two evaluations at
/// `center ± δ` plus one at the vertex, so a search costs 3 evaluations, or 6
/// when the vertex lands far from the center and the fit is repeated there.
/// The repeat is skipped when `g(x₀)` matches the fitted parabola.
pub fn parabolic_1d<G>(mut g: G, center: f64, g_center: f64, cfg: &ParabolicConfig) -> Result<LineMinimum>
where
    G: FnMut(f64) -> Result<f64>,
{
    let delta = cfg.delta_x_line;
    let mut best = (center, g_center);
    let consider = |x: f64, v: f64, best: &mut (f64, f64)| {
        if v < best.1 {
            *best = (x, v);
        }
    };
    let (mut c, mut gc) = (center, g_center);
    let mut evals = 0;
    let mut passes = 0;
    let mut no_curvature = false;
    while passes < cfg.max_refinements {
        passes += 1;
        let g_plus = g(c + delta)?;
        let g_minus = g(c - delta)?;
        evals += 2;
        consider(c + delta, g_plus, &mut best);
        consider(c - delta, g_minus, &mut best);
        let Some(x0) = parabola_vertex(c, delta, g_minus, gc, g_plus, cfg.curvature_floor) else {
            no_curvature = true;
            break;
        };
        let g0 = g(x0)?;
        evals += 1;
        consider(x0, g0, &mut best);
        let predicted = gc - (g_plus - g_minus).powi(2) / (8.0 * (g_plus + g_minus - 2.0 * gc));
        let confirmed = (g0 - predicted).abs() <= cfg.model_tolerance * gc.abs().max(1.0);
        if (x0 - c).abs() <= cfg.refine_threshold * delta || confirmed {
            break;
        }
        c = x0;
        gc = g0;
    }
    Ok(LineMinimum {
        x: best.0,
        value: best.1,
        evals,
        passes,
        no_curvature,
    })
}

/// Forward-difference gradient at `kappa`, given `f(kappa)`.
///
/// Costs exactly `n` evaluations, which are independent and run in parallel.
pub fn finite_diff_gradient<O: Objective + ?Sized>(f: &O, kappa: &[f64], f_kappa: f64, dx: f64) -> Result<Vec<f64>> {
    (0..kappa.len())
        .into_par_iter()
        .map(|i| {
            let mut x = kappa.to_vec();
            x[i] += dx;
            Ok((f.eval(&x)? - f_kappa) / dx)
        })
        .collect()
}

/// Outcome of [`parabolic_nd`].
#[derive(Debug, Clone, PartialEq)]
pub struct NdStep {
    pub x: Vec<f64>,
    pub value: f64,
    pub evals: usize,
    /// The gradient vanished; `x` is the input point.
    pub stationary: bool,
    /// Line searches that needed a second fit.
    pub refinements: usize,
}

/// Norm below which the gradient counts as zero.
pub const STATIONARY_GRADIENT: f64 = 1e-14;

/// Gradient-direction parabolic step.
///
/// Computes the gradient at `kappa` (n evaluations), then minimizes
/// `h(t) = f(κ − t ∇f/|∇f|)` with [`parabolic_1d`] around `t = 0`, where
/// `h(0) = f_kappa` is known. A single pass costs between `n + 3` and `n + 6`
/// evaluations.
pub fn parabolic_nd<O: Objective + ?Sized>(
    f: &O,
    kappa: &[f64],
    f_kappa: f64,
    cfg: &ParabolicConfig,
) -> Result<NdStep> {
    let mut step = NdStep {
        x: kappa.to_vec(),
        value: f_kappa,
        evals: 0,
        stationary: false,
        refinements: 0,
    };
    let passes = if cfg.second_pass { 2 } else { 1 };
    for _ in 0..passes {
        let grad = finite_diff_gradient(f, &step.x, step.value, cfg.delta_x_grad)?;
        step.evals += grad.len();
        let norm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
        if norm.is_nan() || norm < STATIONARY_GRADIENT {
            step.stationary = true;
            break;
        }
        let origin = step.x.clone();
        let along = |t: f64| -> Vec<f64> { origin.iter().zip(&grad).map(|(x, g)| x - t * g / norm).collect() };
        let line = parabolic_1d(|t| f.eval(&along(t)), 0.0, step.value, cfg)?;
        step.evals += line.evals;
        if line.passes > 1 {
            step.refinements += 1;
        }
        if line.value < step.value {
            step.x = along(line.x);
            step.value = line.value;
        }
    }
    Ok(step)
}

/// Settings of [`nelder_mead`].
#[derive(Debug, Clone, PartialEq)]
pub struct NelderMeadOptions {
    pub max_evals: usize,
    /// Stop once `max f − min f` over the simplex drops below this.
    pub f_tol: f64,
    /// Offset of the initial vertices along each axis.
    pub initial_step: f64,
    pub reflection: f64,
    pub expansion: f64,
    pub contraction: f64,
    pub shrink: f64,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self {
            max_evals: 1000,
            f_tol: 1e-10,
            initial_step: 0.1,
            reflection: 1.0,
            expansion: 2.0,
            contraction: 0.5,
            shrink: 0.5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NelderMeadStatus {
    Converged,
    Budget,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NelderMeadResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub evals: usize,
    pub status: NelderMeadStatus,
}

struct Budgeted<'a, O: ?Sized> {
    f: &'a O,
    evals: usize,
    max: usize,
}

impl<O: Objective + ?Sized> Budgeted<'_, O> {
    fn eval(&mut self, x: &[f64]) -> Result<Option<f64>> {
        if self.evals >= self.max {
            return Ok(None);
        }
        self.evals += 1;
        self.f.eval(x).map(Some)
    }
}

/// Downhill simplex method.
///
/// The initial simplex is `x_init` plus `x_init + step·e_i`; when `f_init`
/// is given the first vertex is not re-evaluated. Every evaluation counts
/// against `max_evals`.
pub fn nelder_mead<O: Objective + ?Sized>(
    f: &O,
    x_init: &[f64],
    f_init: Option<f64>,
    opts: &NelderMeadOptions,
) -> Result<NelderMeadResult> {
    let n = x_init.len();
    if n == 0 {
        return Err(Error::InvalidIndices {
            indices: vec![],
            reason: "Nelder-Mead needs at least one parameter".to_string(),
        });
    }
    let mut budget = Budgeted {
        f,
        evals: 0,
        max: opts.max_evals,
    };
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);

    macro_rules! finish {
        ($status:expr) => {{
            let (x, value) = simplex
                .iter()
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .cloned()
                .expect("simplex is never empty here");
            return Ok(NelderMeadResult {
                x,
                value,
                evals: budget.evals,
                status: $status,
            });
        }};
    }
    macro_rules! eval_or_stop {
        ($x:expr) => {
            match budget.eval($x)? {
                Some(v) => v,
                None => finish!(NelderMeadStatus::Budget),
            }
        };
    }

    let f0 = match f_init {
        Some(v) => v,
        None => match budget.eval(x_init)? {
            Some(v) => v,
            None => {
                return Ok(NelderMeadResult {
                    x: x_init.to_vec(),
                    value: f64::INFINITY,
                    evals: 0,
                    status: NelderMeadStatus::Budget,
                })
            }
        },
    };
    simplex.push((x_init.to_vec(), f0));
    for i in 0..n {
        let mut x = x_init.to_vec();
        x[i] += opts.initial_step;
        let v = eval_or_stop!(&x);
        simplex.push((x, v));
    }

    let lerp = |a: &[f64], b: &[f64], t: f64| -> Vec<f64> { a.iter().zip(b).map(|(a, b)| a + t * (b - a)).collect() };

    loop {
        // stable sort keeps earlier vertices first on ties
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let best = simplex[0].1;
        let worst = simplex[n].1;
        if worst - best < opts.f_tol {
            finish!(NelderMeadStatus::Converged);
        }
        let second_worst = simplex[n - 1].1;
        let mut centroid = vec![0.0; n];
        for (x, _) in &simplex[..n] {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c += xi / n as f64;
            }
        }
        let xw = simplex[n].0.clone();
        let xr = lerp(&centroid, &xw, -opts.reflection);
        let fr = eval_or_stop!(&xr);
        if fr < best {
            let xe = lerp(&centroid, &xr, opts.expansion);
            let fe = eval_or_stop!(&xe);
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < second_worst {
            simplex[n] = (xr, fr);
            continue;
        }
        let (xc, fc, accept) = if fr < worst {
            let xc = lerp(&centroid, &xr, opts.contraction);
            let fc = eval_or_stop!(&xc);
            (xc, fc, fc <= fr)
        } else {
            let xc = lerp(&centroid, &xw, opts.contraction);
            let fc = eval_or_stop!(&xc);
            (xc, fc, fc < worst)
        };
        if accept {
            simplex[n] = (xc, fc);
            continue;
        }
        let x_best = simplex[0].0.clone();
        for v in simplex.iter_mut().skip(1) {
            let x = lerp(&x_best, &v.0, opts.shrink);
            let fx = eval_or_stop!(&x);
            *v = (x, fx);
        }
    }
}
