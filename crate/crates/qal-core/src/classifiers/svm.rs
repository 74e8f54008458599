//! Soft-margin SVM trained by sequential minimal optimization.
//!
//! Solves the standard dual
//!   min_a  (1/2) a^T Q a - 1^T a,   Q_ij = y_i y_j k(x_i, x_j)
//!   s.t.   0 <= a_i <= C,  y^T a = 0
//! with maximal-violating-pair working-set selection, stopping when the
//! KKT gap falls below the tolerance. Training sets here are tiny (a few
//! to a few hundred points), so the full Gram matrix is kept in memory.

use crate::lattice::Feature;

/// Box constraint shared by both SVM kinds.
pub const BOX_CONSTRAINT: f64 = 1.0;
/// KKT stopping tolerance.
pub const KKT_TOLERANCE: f64 = 1e-6;
/// Gaussian kernel length scale (the committee's coarse setting).
pub const GAUSSIAN_SCALE: f64 = 5.7;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Kernel {
    Linear,
    /// `exp(-||x - y||^2 / scale^2)`.
    Gaussian {
        scale: f64,
    },
}

impl Kernel {
    pub fn eval(&self, a: Feature, b: Feature) -> f64 {
        let dx = a[0] - b[0];
        let dy = a[1] - b[1];
        match self {
            Kernel::Linear => a[0] * b[0] + a[1] * b[1],
            Kernel::Gaussian { scale } => (-(dx * dx + dy * dy) / (scale * scale)).exp(),
        }
    }
}

/// A fitted SVM in standardized feature space.
#[derive(Debug, Clone, PartialEq)]
pub struct SvmModel {
    pub kernel: Kernel,
    /// Training points (standardized) with a nonzero dual coefficient.
    pub support: Vec<Feature>,
    /// `alpha_i * y_i` for each support point.
    pub coeffs: Vec<f64>,
    pub bias: f64,
    /// Full dual solution over the training set, for diagnostics.
    pub alphas: Vec<f64>,
}

impl SvmModel {
    /// Signed margin `f(x) = sum_i alpha_i y_i k(x_i, x) + b`.
    pub fn decision_value(&self, x: Feature) -> f64 {
        let mut f = self.bias;
        for (sv, coeff) in self.support.iter().zip(&self.coeffs) {
            f += coeff * self.kernel.eval(*sv, x);
        }
        f
    }

    pub fn support_count(&self) -> usize {
        self.support.len()
    }
}

/// Trains the dual with SMO. `labels` are +/-1.
pub fn train_svm(kernel: Kernel, points: &[Feature], labels: &[f64], c: f64) -> SvmModel {
    let n = points.len();
    debug_assert_eq!(n, labels.len());
    debug_assert!(n >= 2);

    let mut gram = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            gram[i * n + j] = kernel.eval(points[i], points[j]);
        }
    }
    let q = |i: usize, j: usize| labels[i] * labels[j] * gram[i * n + j];

    let mut alpha = vec![0.0; n];
    // Gradient of the dual objective; starts at -1 with alpha = 0.
    let mut grad = vec![-1.0; n];

    let max_iterations = 200_000;
    for _ in 0..max_iterations {
        // Maximal violating pair over I_up / I_low.
        let mut i_best = usize::MAX;
        let mut g_max = f64::NEG_INFINITY;
        let mut j_best = usize::MAX;
        let mut g_min = f64::INFINITY;
        for t in 0..n {
            let in_up = (labels[t] > 0.0 && alpha[t] < c) || (labels[t] < 0.0 && alpha[t] > 0.0);
            let in_low = (labels[t] > 0.0 && alpha[t] > 0.0) || (labels[t] < 0.0 && alpha[t] < c);
            let v = -labels[t] * grad[t];
            if in_up && v > g_max {
                g_max = v;
                i_best = t;
            }
            if in_low && v < g_min {
                g_min = v;
                j_best = t;
            }
        }
        if i_best == usize::MAX || j_best == usize::MAX || g_max - g_min <= KKT_TOLERANCE {
            break;
        }
        let (i, j) = (i_best, j_best);
        let eta = (gram[i * n + i] + gram[j * n + j] - 2.0 * gram[i * n + j]).max(1e-12);

        let old_ai = alpha[i];
        let old_aj = alpha[j];
        if labels[i] != labels[j] {
            let delta = (-grad[i] - grad[j]) / eta;
            let diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if diff > 0.0 && alpha[j] < 0.0 {
                alpha[j] = 0.0;
                alpha[i] = diff;
            } else if diff <= 0.0 && alpha[i] < 0.0 {
                alpha[i] = 0.0;
                alpha[j] = -diff;
            }
            if diff > 0.0 && alpha[i] > c {
                alpha[i] = c;
                alpha[j] = c - diff;
            } else if diff <= 0.0 && alpha[j] > c {
                alpha[j] = c;
                alpha[i] = c + diff;
            }
        } else {
            let delta = (grad[i] - grad[j]) / eta;
            let sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if sum > c && alpha[i] > c {
                alpha[i] = c;
                alpha[j] = sum - c;
            } else if sum <= c && alpha[j] < 0.0 {
                alpha[j] = 0.0;
                alpha[i] = sum;
            }
            if sum > c && alpha[j] > c {
                alpha[j] = c;
                alpha[i] = sum - c;
            } else if sum <= c && alpha[i] < 0.0 {
                alpha[i] = 0.0;
                alpha[j] = sum;
            }
        }

        let dai = alpha[i] - old_ai;
        let daj = alpha[j] - old_aj;
        if dai == 0.0 && daj == 0.0 {
            break;
        }
        for (t, g) in grad.iter_mut().enumerate() {
            *g += q(t, i) * dai + q(t, j) * daj;
        }
    }

    let bias = -compute_rho(&alpha, &grad, labels, c);

    let mut support = Vec::new();
    let mut coeffs = Vec::new();
    for i in 0..n {
        if alpha[i] > 0.0 {
            support.push(points[i]);
            coeffs.push(alpha[i] * labels[i]);
        }
    }
    SvmModel {
        kernel,
        support,
        coeffs,
        bias,
        alphas: alpha,
    }
}

/// KKT offset: average of `y_t g_t` over free vectors, or the midpoint of
/// the feasible interval when every vector is at a bound.
fn compute_rho(alpha: &[f64], grad: &[f64], labels: &[f64], c: f64) -> f64 {
    let mut upper = f64::INFINITY;
    let mut lower = f64::NEG_INFINITY;
    let mut sum_free = 0.0;
    let mut n_free = 0usize;
    for t in 0..alpha.len() {
        let yg = labels[t] * grad[t];
        if alpha[t] >= c {
            if labels[t] < 0.0 {
                upper = upper.min(yg);
            } else {
                lower = lower.max(yg);
            }
        } else if alpha[t] <= 0.0 {
            if labels[t] > 0.0 {
                upper = upper.min(yg);
            } else {
                lower = lower.max(yg);
            }
        } else {
            n_free += 1;
            sum_free += yg;
        }
    }
    if n_free > 0 {
        sum_free / n_free as f64
    } else {
        (upper + lower) / 2.0
    }
}
