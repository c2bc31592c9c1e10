//! Projected gradient ascent inside a box, shared by hyperparameter fitting,
//! acquisition maximisation and the synthetic ground-truth search.

/// Tuning knobs for [`ascend_box`].
#[derive(Debug, Clone)]
pub struct AscentOptions {
    pub max_iters: usize,
    pub initial_step: f64,
    pub max_backtracks: usize,
    /// Stop when the sup-norm of the (projected) gradient falls below this.
    pub grad_tol: f64,
    /// Stop after two consecutive iterations improving less than this.
    pub f_tol: f64,
}

impl Default for AscentOptions {
    fn default() -> Self {
        AscentOptions {
            max_iters: 200,
            initial_step: 0.1,
            max_backtracks: 8,
            grad_tol: 1e-7,
            f_tol: 1e-12,
        }
    }
}

pub fn clamp_to_box(x: &mut [f64], lo: &[f64], hi: &[f64]) {
    for ((v, &l), &h) in x.iter_mut().zip(lo).zip(hi) {
        *v = v.clamp(l, h);
    }
}

/// Maximise `f` from `x0`, staying inside `[lo, hi]`, using steepest ascent
/// with a backtracking line search. Returns the best point and value seen.
pub fn ascend_box<F, G>(
    x0: &[f64],
    lo: &[f64],
    hi: &[f64],
    mut f: F,
    mut grad: G,
    opts: &AscentOptions,
) -> (Vec<f64>, f64)
where
    F: FnMut(&[f64]) -> f64,
    G: FnMut(&[f64]) -> Vec<f64>,
{
    let mut x = x0.to_vec();
    clamp_to_box(&mut x, lo, hi);
    let mut fx = f(&x);
    if !fx.is_finite() {
        return (x, fx);
    }
    let mut step = opts.initial_step;
    let mut stalls = 0usize;
    for _ in 0..opts.max_iters {
        let g = grad(&x);
        // Zero out components pushing against an active bound so the
        // gradient norm reflects only feasible directions.
        let mut proj = g.clone();
        for j in 0..x.len() {
            if (x[j] >= hi[j] && proj[j] > 0.0) || (x[j] <= lo[j] && proj[j] < 0.0) {
                proj[j] = 0.0;
            }
        }
        let gnorm = proj.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if !gnorm.is_finite() || gnorm < opts.grad_tol {
            break;
        }
        let mut improved = false;
        let mut t = step / gnorm;
        for attempt in 0..opts.max_backtracks {
            let mut cand: Vec<f64> =
                x.iter().zip(&proj).map(|(xi, gi)| xi + t * gi).collect();
            clamp_to_box(&mut cand, lo, hi);
            let fc = f(&cand);
            if fc.is_finite() && fc > fx {
                let gain = fc - fx;
                x = cand;
                fx = fc;
                improved = true;
                // Widen the step when the first trial succeeds.
                if attempt == 0 {
                    step *= 1.5;
                }
                if gain < opts.f_tol * (1.0 + fx.abs()) {
                    stalls += 1;
                } else {
                    stalls = 0;
                }
                break;
            }
            t *= 0.5;
        }
        if !improved {
            step *= 0.25;
            stalls += 1;
        }
        if stalls >= 2 || step < 1e-14 {
            break;
        }
    }
    (x, fx)
}

/// Central finite-difference gradient with a boundary-aware stencil: probes
/// are clamped to the box and the divisor uses the realised spacing.
pub fn central_difference_gradient<F>(
    x: &[f64],
    lo: &[f64],
    hi: &[f64],
    h: f64,
    mut f: F,
) -> Vec<f64>
where
    F: FnMut(&[f64]) -> f64,
{
    let mut g = vec![0.0; x.len()];
    let mut probe = x.to_vec();
    for j in 0..x.len() {
        let a = (x[j] + h).min(hi[j]);
        let b = (x[j] - h).max(lo[j]);
        if a <= b {
            g[j] = 0.0;
            continue;
        }
        probe[j] = a;
        let fa = f(&probe);
        probe[j] = b;
        let fb = f(&probe);
        probe[j] = x[j];
        g[j] = (fa - fb) / (a - b);
    }
    g
}
