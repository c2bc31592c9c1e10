//! Single-output Gaussian-process regression.
//!
//! Exact inference with a scaled RBF kernel and per-dimension (ARD)
//! lengthscales. Inputs are expected in [0,1]^d; targets are standardised to
//! zero mean and unit variance internally and de-standardised on the way
//! out. Hyperparameters are fitted by multi-start gradient ascent on the log
//! marginal likelihood, with analytic gradients taken in log-parameter
//! space.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::optim::{ascend_box, AscentOptions};
use crate::sobol;

#[derive(Debug, Error)]
pub enum GpError {
    #[error("training set is empty")]
    EmptyTrainingSet,
    #[error("targets contain non-finite values")]
    NonFiniteTargets,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("covariance not positive definite after jitter escalation")]
    NotPositiveDefinite,
    #[error("invalid hyperparameters: {0}")]
    InvalidHyperparams(String),
}

pub const LENGTHSCALE_BOUNDS: (f64, f64) = (1e-3, 1e3);
pub const OUTPUT_SCALE_BOUNDS: (f64, f64) = (1e-6, 1e3);
/// Observation noise never drops below this; it doubles as the jitter floor.
pub const NOISE_FLOOR: f64 = 1e-8;
const NOISE_CEIL: f64 = 1e3;
const STD_FLOOR: f64 = 1e-12;

/// Kernel amplitude, ARD lengthscales and observation noise variance.
#[derive(Debug, Clone, PartialEq)]
pub struct GpHyperparams {
    pub lengthscales: Vec<f64>,
    pub output_scale: f64,
    pub noise_variance: f64,
}

impl GpHyperparams {
    /// Defaults for inputs living in [0,1]^d.
    pub fn default_for_dim(d: usize) -> Self {
        GpHyperparams { lengthscales: vec![0.5; d], output_scale: 1.0, noise_variance: 1e-4 }
    }

    fn validate(&self, d: usize) -> Result<(), GpError> {
        if self.lengthscales.len() != d {
            return Err(GpError::DimensionMismatch(format!(
                "{} lengthscales for {} input dims",
                self.lengthscales.len(),
                d
            )));
        }
        let ls_ok = self
            .lengthscales
            .iter()
            .all(|&l| (LENGTHSCALE_BOUNDS.0..=LENGTHSCALE_BOUNDS.1).contains(&l));
        if !ls_ok {
            return Err(GpError::InvalidHyperparams("lengthscale outside bounds".into()));
        }
        if !(OUTPUT_SCALE_BOUNDS.0..=OUTPUT_SCALE_BOUNDS.1).contains(&self.output_scale) {
            return Err(GpError::InvalidHyperparams("output scale outside bounds".into()));
        }
        if self.noise_variance < NOISE_FLOOR || !self.noise_variance.is_finite() {
            return Err(GpError::InvalidHyperparams("noise variance below floor".into()));
        }
        Ok(())
    }
}

/// Scaled RBF-ARD kernel; `kernel(x, x, hp) == hp.output_scale`.
pub fn kernel(x: &[f64], y: &[f64], hp: &GpHyperparams) -> f64 {
    debug_assert_eq!(x.len(), y.len());
    let mut r2 = 0.0;
    for ((a, b), l) in x.iter().zip(y).zip(&hp.lengthscales) {
        let d = (a - b) / l;
        r2 += d * d;
    }
    hp.output_scale * (-0.5 * r2).exp()
}

fn gram(x: &DMatrix<f64>, hp: &GpHyperparams) -> DMatrix<f64> {
    let n = x.nrows();
    let mut k = DMatrix::zeros(n, n);
    for i in 0..n {
        k[(i, i)] = hp.output_scale;
        for j in 0..i {
            let v = kernel(x.row(i).transpose().as_slice(), x.row(j).transpose().as_slice(), hp);
            k[(i, j)] = v;
            k[(j, i)] = v;
        }
    }
    k
}

/// Factorise `K + (noise + jitter) I`, escalating jitter from
/// `1e-8 * output_scale` by factors of ten up to `1e-4 * output_scale`.
fn cholesky_with_jitter(
    k: &DMatrix<f64>,
    noise: f64,
    output_scale: f64,
) -> Result<(nalgebra::Cholesky<f64, nalgebra::Dyn>, f64), GpError> {
    let mut jitter = 0.0;
    loop {
        let mut c = k.clone();
        let bump = noise + jitter;
        for i in 0..c.nrows() {
            c[(i, i)] += bump;
        }
        if let Some(chol) = nalgebra::Cholesky::new(c) {
            return Ok((chol, jitter));
        }
        jitter = if jitter == 0.0 { 1e-8 * output_scale } else { jitter * 10.0 };
        if jitter > 1e-4 * output_scale {
            return Err(GpError::NotPositiveDefinite);
        }
    }
}

struct LmlTerms {
    lml: f64,
    chol: nalgebra::Cholesky<f64, nalgebra::Dyn>,
    alpha: DVector<f64>,
    gram: DMatrix<f64>,
    jitter: f64,
}

fn lml_terms(x: &DMatrix<f64>, y_std: &DVector<f64>, hp: &GpHyperparams) -> Result<LmlTerms, GpError> {
    let n = x.nrows();
    let k = gram(x, hp);
    let (chol, jitter) = cholesky_with_jitter(&k, hp.noise_variance, hp.output_scale)?;
    let alpha = chol.solve(y_std);
    let log_det_half: f64 = (0..n).map(|i| chol.l_dirty()[(i, i)].ln()).sum();
    let lml = -0.5 * y_std.dot(&alpha)
        - log_det_half
        - 0.5 * n as f64 * (2.0 * std::f64::consts::PI).ln();
    Ok(LmlTerms { lml, chol, alpha, gram: k, jitter })
}

/// Fitted GP with cached Cholesky factorisation.
#[derive(Debug, Clone)]
pub struct GpModel {
    train_x: DMatrix<f64>,
    train_y_raw: DVector<f64>,
    y_std_targets: DVector<f64>,
    y_mean: f64,
    y_std: f64,
    hyperparams: GpHyperparams,
    /// Lower Cholesky factor of K + (noise + jitter) I.
    chol_l: DMatrix<f64>,
    alpha: DVector<f64>,
    jitter: f64,
    lml: f64,
}

impl GpModel {
    /// Fit hyperparameters by multi-start gradient ascent on the log
    /// marginal likelihood (8 starts: defaults plus 7 Sobol points in a
    /// log-space box, each capped at 200 ascent iterations).
    pub fn fit(train_x: DMatrix<f64>, train_y: DVector<f64>) -> Result<Self, GpError> {
        let (n, d) = (train_x.nrows(), train_x.ncols());
        if n == 0 {
            return Err(GpError::EmptyTrainingSet);
        }
        if train_y.len() != n {
            return Err(GpError::DimensionMismatch(format!("{} targets for {n} rows", train_y.len())));
        }
        if train_y.iter().any(|v| !v.is_finite()) {
            return Err(GpError::NonFiniteTargets);
        }
        if n == 1 {
            // Likelihood maximisation is ill-posed on one point.
            let hp = GpHyperparams {
                lengthscales: vec![0.5; d],
                output_scale: 1.0,
                noise_variance: 1e-6,
            };
            return Self::with_hyperparams(train_x, train_y, hp);
        }

        let (y_mean, y_std, y_std_targets) = standardise(&train_y);

        let lo: Vec<f64> = log_bounds_lo(d);
        let hi: Vec<f64> = log_bounds_hi(d);
        let mut starts: Vec<Vec<f64>> = vec![to_log_vec(&GpHyperparams::default_for_dim(d))];
        // Sobol starts confined to a practical sub-box of the full domain.
        let start_lo: Vec<f64> = std::iter::repeat(0.05f64.ln())
            .take(d)
            .chain([0.1f64.ln(), 1e-6f64.ln()])
            .collect();
        let start_hi: Vec<f64> = std::iter::repeat(2.0f64.ln())
            .take(d)
            .chain([10.0f64.ln(), 0.1f64.ln()])
            .collect();
        for p in sobol::sample(d + 2, 7) {
            let theta: Vec<f64> = p
                .iter()
                .zip(&start_lo)
                .zip(&start_hi)
                .map(|((u, l), h)| l + u * (h - l))
                .collect();
            starts.push(theta);
        }

        let opts = AscentOptions {
            max_iters: 200,
            initial_step: 0.5,
            max_backtracks: 8,
            grad_tol: 1e-6,
            f_tol: 1e-10,
        };
        let mut best: Option<(f64, Vec<f64>)> = None;
        for start in &starts {
            let cache = std::cell::RefCell::new(None::<(Vec<f64>, LmlTerms)>);
            let eval = |theta: &[f64]| -> f64 {
                let hp = from_log_vec(theta, d);
                match lml_terms(&train_x, &y_std_targets, &hp) {
                    Ok(t) => {
                        let lml = t.lml;
                        *cache.borrow_mut() = Some((theta.to_vec(), t));
                        lml
                    }
                    Err(_) => f64::NEG_INFINITY,
                }
            };
            let grad = |theta: &[f64]| -> Vec<f64> {
                let hp = from_log_vec(theta, d);
                let cached = {
                    let borrow = cache.borrow();
                    matches!(&*borrow, Some((t, _)) if t.as_slice() == theta)
                };
                if !cached {
                    match lml_terms(&train_x, &y_std_targets, &hp) {
                        Ok(t) => *cache.borrow_mut() = Some((theta.to_vec(), t)),
                        Err(_) => return vec![0.0; theta.len()],
                    }
                }
                let borrow = cache.borrow();
                let (_, terms) = borrow.as_ref().unwrap();
                lml_grad_from_terms(&train_x, terms, &hp)
            };
            let (theta, lml) = ascend_box(start, &lo, &hi, eval, grad, &opts);
            if lml.is_finite() && best.as_ref().map_or(true, |(b, _)| lml > *b) {
                best = Some((lml, theta));
            }
        }
        let (_, theta) = best.ok_or(GpError::NotPositiveDefinite)?;
        let hp = from_log_vec(&theta, d);
        Self::build(train_x, train_y, y_mean, y_std, y_std_targets, hp)
    }

    /// Build a model at fixed hyperparameters (no optimisation).
    pub fn with_hyperparams(
        train_x: DMatrix<f64>,
        train_y: DVector<f64>,
        hyperparams: GpHyperparams,
    ) -> Result<Self, GpError> {
        let n = train_x.nrows();
        if n == 0 {
            return Err(GpError::EmptyTrainingSet);
        }
        if train_y.len() != n {
            return Err(GpError::DimensionMismatch(format!("{} targets for {n} rows", train_y.len())));
        }
        if train_y.iter().any(|v| !v.is_finite()) {
            return Err(GpError::NonFiniteTargets);
        }
        hyperparams.validate(train_x.ncols())?;
        let (y_mean, y_std, y_std_targets) = standardise(&train_y);
        Self::build(train_x, train_y, y_mean, y_std, y_std_targets, hyperparams)
    }

    fn build(
        train_x: DMatrix<f64>,
        train_y_raw: DVector<f64>,
        y_mean: f64,
        y_std: f64,
        y_std_targets: DVector<f64>,
        hyperparams: GpHyperparams,
    ) -> Result<Self, GpError> {
        let terms = lml_terms(&train_x, &y_std_targets, &hyperparams)?;
        Ok(GpModel {
            train_x,
            train_y_raw,
            y_std_targets,
            y_mean,
            y_std,
            hyperparams,
            chol_l: terms.chol.l(),
            alpha: terms.alpha,
            jitter: terms.jitter,
            lml: terms.lml,
        })
    }

    pub fn n_train(&self) -> usize {
        self.train_x.nrows()
    }

    pub fn input_dim(&self) -> usize {
        self.train_x.ncols()
    }

    pub fn train_x(&self) -> &DMatrix<f64> {
        &self.train_x
    }

    pub fn train_y(&self) -> &DVector<f64> {
        &self.train_y_raw
    }

    pub fn hyperparams(&self) -> &GpHyperparams {
        &self.hyperparams
    }

    /// Standard deviation used to standardise the targets.
    pub fn target_std(&self) -> f64 {
        self.y_std
    }

    pub fn target_mean(&self) -> f64 {
        self.y_mean
    }

    /// Log marginal likelihood at the fitted hyperparameters.
    pub fn fitted_lml(&self) -> f64 {
        self.lml
    }

    pub fn applied_jitter(&self) -> f64 {
        self.jitter
    }

    /// Lower Cholesky factor of the regularised kernel matrix.
    pub fn chol_l(&self) -> &DMatrix<f64> {
        &self.chol_l
    }

    /// Log marginal likelihood of the model's data at hyperparameters `hp`.
    pub fn log_marginal_likelihood(&self, hp: &GpHyperparams) -> Result<f64, GpError> {
        hp.validate(self.input_dim())?;
        Ok(lml_terms(&self.train_x, &self.y_std_targets, hp)?.lml)
    }

    /// Analytic gradient of the log marginal likelihood with respect to the
    /// log hyperparameters, ordered `[log l_1 .. log l_d, log s, log noise]`.
    pub fn log_marginal_likelihood_grad(&self, hp: &GpHyperparams) -> Result<Vec<f64>, GpError> {
        hp.validate(self.input_dim())?;
        let terms = lml_terms(&self.train_x, &self.y_std_targets, hp)?;
        Ok(lml_grad_from_terms(&self.train_x, &terms, hp))
    }

    /// Predictive mean and (latent, noise-free) variance at `query` rows,
    /// de-standardised to the original target scale. Variances are clamped
    /// at zero from below.
    pub fn posterior(&self, query: &DMatrix<f64>) -> (DVector<f64>, DVector<f64>) {
        assert_eq!(query.ncols(), self.input_dim(), "query dimension mismatch");
        let (mean_s, var_s) = self.posterior_standardised(query);
        let mean = mean_s.map(|m| self.y_mean + self.y_std * m);
        let var = var_s.map(|v| v * self.y_std * self.y_std);
        (mean, var)
    }

    fn posterior_standardised(&self, query: &DMatrix<f64>) -> (DVector<f64>, DVector<f64>) {
        let (n, m) = (self.n_train(), query.nrows());
        let mut kstar = DMatrix::zeros(n, m);
        for j in 0..m {
            let q = query.row(j).transpose();
            for i in 0..n {
                kstar[(i, j)] =
                    kernel(self.train_x.row(i).transpose().as_slice(), q.as_slice(), &self.hyperparams);
            }
        }
        let mean = kstar.transpose() * &self.alpha;
        let v = self
            .chol_l
            .solve_lower_triangular(&kstar)
            .expect("triangular solve cannot fail on a Cholesky factor");
        let mut var = DVector::zeros(m);
        for j in 0..m {
            let explained: f64 = v.column(j).iter().map(|x| x * x).sum();
            var[j] = (self.hyperparams.output_scale - explained).max(0.0);
        }
        (mean, var)
    }

    /// Single-point convenience wrapper around [`GpModel::posterior`].
    pub fn posterior_one(&self, x: &[f64]) -> (f64, f64) {
        let q = DMatrix::from_row_slice(1, x.len(), x);
        let (mean, var) = self.posterior(&q);
        (mean[0], var[0])
    }

    /// Draw `s` joint samples from the posterior at the query rows. Returns
    /// an s-by-m matrix; each row is one function draw.
    pub fn sample_posterior<R: Rng + ?Sized>(
        &self,
        query: &DMatrix<f64>,
        s: usize,
        rng: &mut R,
    ) -> Result<DMatrix<f64>, GpError> {
        assert!(s >= 1, "at least one sample required");
        let m = query.nrows();
        let (mean_s, var_s) = self.posterior_standardised(query);
        if m == 1 {
            let sd = var_s[0].max(0.0).sqrt();
            let mut out = DMatrix::zeros(s, 1);
            for i in 0..s {
                let z: f64 = rng.sample(StandardNormal);
                out[(i, 0)] = self.y_mean + self.y_std * (mean_s[0] + sd * z);
            }
            return Ok(out);
        }
        // Full joint covariance at the query points.
        let n = self.n_train();
        let mut kstar = DMatrix::zeros(n, m);
        for j in 0..m {
            let q = query.row(j).transpose();
            for i in 0..n {
                kstar[(i, j)] =
                    kernel(self.train_x.row(i).transpose().as_slice(), q.as_slice(), &self.hyperparams);
            }
        }
        let v = self
            .chol_l
            .solve_lower_triangular(&kstar)
            .expect("triangular solve cannot fail on a Cholesky factor");
        let mut cov = DMatrix::zeros(m, m);
        for a in 0..m {
            for b in 0..=a {
                let prior = kernel(
                    query.row(a).transpose().as_slice(),
                    query.row(b).transpose().as_slice(),
                    &self.hyperparams,
                );
                let explained = v.column(a).dot(&v.column(b));
                let c = prior - explained;
                cov[(a, b)] = c;
                cov[(b, a)] = c;
            }
        }
        let max_diag = (0..m).map(|i| cov[(i, i)]).fold(0.0f64, f64::max);
        if max_diag <= 0.0 {
            // Degenerate posterior: every draw is the mean.
            let mut out = DMatrix::zeros(s, m);
            for i in 0..s {
                for j in 0..m {
                    out[(i, j)] = self.y_mean + self.y_std * mean_s[j];
                }
            }
            return Ok(out);
        }
        let mut jitter = 0.0;
        let l = loop {
            let mut c = cov.clone();
            for i in 0..m {
                c[(i, i)] += jitter;
            }
            match nalgebra::Cholesky::new(c) {
                Some(ch) => break ch.l(),
                None => {
                    jitter = if jitter == 0.0 { 1e-12 * max_diag } else { jitter * 10.0 };
                    if jitter > 1e-4 * max_diag {
                        return Err(GpError::NotPositiveDefinite);
                    }
                }
            }
        };
        let mut out = DMatrix::zeros(s, m);
        let mut z = DVector::zeros(m);
        for i in 0..s {
            for zj in z.iter_mut() {
                *zj = rng.sample(StandardNormal);
            }
            let draw = &l * &z;
            for j in 0..m {
                out[(i, j)] = self.y_mean + self.y_std * (mean_s[j] + draw[j]);
            }
        }
        Ok(out)
    }
}

fn standardise(y: &DVector<f64>) -> (f64, f64, DVector<f64>) {
    let n = y.len() as f64;
    let mean = y.sum() / n;
    let var = y.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    let std = var.sqrt().max(STD_FLOOR);
    let standardised = y.map(|v| (v - mean) / std);
    (mean, std, standardised)
}

fn lml_grad_from_terms(x: &DMatrix<f64>, terms: &LmlTerms, hp: &GpHyperparams) -> Vec<f64> {
    let n = x.nrows();
    let d = x.ncols();
    // W = alpha alpha' - C^{-1}; gradient wrt log theta_j is tr(W dC/dlog) / 2.
    let cinv = terms.chol.inverse();
    let mut grad = vec![0.0; d + 2];
    let mut trace_w = 0.0;
    for a in 0..n {
        for b in 0..n {
            let w = terms.alpha[a] * terms.alpha[b] - cinv[(a, b)];
            if a == b {
                trace_w += w;
            }
            let wk = w * terms.gram[(a, b)];
            grad[d] += wk; // output scale: dC/dlog s = K
            for j in 0..d {
                let diff = (x[(a, j)] - x[(b, j)]) / hp.lengthscales[j];
                grad[j] += wk * diff * diff;
            }
        }
    }
    for g in grad.iter_mut().take(d + 1) {
        *g *= 0.5;
    }
    grad[d + 1] = 0.5 * hp.noise_variance * trace_w;
    grad
}

fn to_log_vec(hp: &GpHyperparams) -> Vec<f64> {
    hp.lengthscales
        .iter()
        .map(|l| l.ln())
        .chain([hp.output_scale.ln(), hp.noise_variance.ln()])
        .collect()
}

fn from_log_vec(theta: &[f64], d: usize) -> GpHyperparams {
    GpHyperparams {
        lengthscales: theta[..d].iter().map(|t| t.exp()).collect(),
        output_scale: theta[d].exp(),
        noise_variance: theta[d + 1].exp(),
    }
}

fn log_bounds_lo(d: usize) -> Vec<f64> {
    std::iter::repeat(LENGTHSCALE_BOUNDS.0.ln())
        .take(d)
        .chain([OUTPUT_SCALE_BOUNDS.0.ln(), NOISE_FLOOR.ln()])
        .collect()
}

fn log_bounds_hi(d: usize) -> Vec<f64> {
    std::iter::repeat(LENGTHSCALE_BOUNDS.1.ln())
        .take(d)
        .chain([OUTPUT_SCALE_BOUNDS.1.ln(), NOISE_CEIL.ln()])
        .collect()
}
