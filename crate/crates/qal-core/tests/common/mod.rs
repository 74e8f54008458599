//! Shared test oracles, independent of the implementation paths they
//! check: adaptive quadrature, a projected-gradient QP solver for the SVM
//! dual, and small statistics helpers.

#![allow(dead_code)] // each integration test binary uses a subset

use qal_core::lattice::Feature;
use statrs::distribution::{ChiSquared, ContinuousCDF, Normal};

/// Adaptive Simpson quadrature with tolerance-halving recursion.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(f: &dyn Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        ((b - a) / 6.0 * (fa + 4.0 * fm + fb), m, fm)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        whole: f64,
        m: f64,
        fm: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let (left, lm, flm) = simpson(f, a, fa, m, fm);
        let (right, rm, frm) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            recurse(f, a, fa, m, fm, left, lm, flm, tol / 2.0, depth - 1)
                + recurse(f, m, fm, b, fb, right, rm, frm, tol / 2.0, depth - 1)
        }
    }
    let fa = f(a);
    let fb = f(b);
    let (whole, m, fm) = simpson(f, a, fa, b, fb);
    recurse(f, a, fa, b, fb, whole, m, fm, tol, 40)
}

/// Standard normal CDF.
pub fn normal_cdf(z: f64) -> f64 {
    Normal::new(0.0, 1.0).unwrap().cdf(z)
}

/// Upper critical value of the chi-squared distribution.
pub fn chi_squared_critical(dof: usize, significance: f64) -> f64 {
    ChiSquared::new(dof as f64)
        .unwrap()
        .inverse_cdf(1.0 - significance)
}

/// Chi-squared goodness-of-fit: bins with expected counts below 5 merge
/// rightward. Returns `(statistic, dof)`.
pub fn chi_squared_gof(observed: &[f64], expected: &[f64]) -> (f64, usize) {
    assert_eq!(observed.len(), expected.len());
    let mut merged: Vec<(f64, f64)> = Vec::new();
    let mut acc_o = 0.0;
    let mut acc_e = 0.0;
    for (&o, &e) in observed.iter().zip(expected) {
        acc_o += o;
        acc_e += e;
        if acc_e >= 5.0 {
            merged.push((acc_o, acc_e));
            acc_o = 0.0;
            acc_e = 0.0;
        }
    }
    if acc_e > 0.0 {
        if let Some(last) = merged.last_mut() {
            last.0 += acc_o;
            last.1 += acc_e;
        } else {
            merged.push((acc_o, acc_e));
        }
    }
    let statistic = merged
        .iter()
        .map(|&(o, e)| (o - e).powi(2) / e)
        .sum::<f64>();
    (statistic, merged.len().saturating_sub(1))
}

/// SVM dual solved by FISTA projected gradient, independent of the SMO
/// path: min (1/2) a^T Q a - 1^T a over the box intersected with the
/// label-balance hyperplane.
pub struct QpSolution {
    pub alphas: Vec<f64>,
    pub bias: f64,
}

/// Linear-kernel Gram entry.
pub fn linear_kernel(a: Feature, b: Feature) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

/// Projection onto `{0 <= a_i <= c, sum_i y_i a_i = 0}` by bisection on
/// the hyperplane multiplier.
fn project(v: &[f64], labels: &[f64], c: f64) -> Vec<f64> {
    let balance = |lambda: f64| -> f64 {
        v.iter()
            .zip(labels)
            .map(|(&vi, &yi)| (vi - lambda * yi).clamp(0.0, c) * yi)
            .sum()
    };
    let bound = v.iter().fold(0.0f64, |m, &x| m.max(x.abs())) + c + 1.0;
    let (mut lo, mut hi) = (-bound, bound);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if balance(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let lambda = 0.5 * (lo + hi);
    v.iter()
        .zip(labels)
        .map(|(&vi, &yi)| (vi - lambda * yi).clamp(0.0, c))
        .collect()
}

/// Solves the dual by accelerated projected gradient on a dense Gram
/// matrix built with `kernel`.
pub fn solve_svm_qp(
    points: &[Feature],
    labels: &[f64],
    c: f64,
    kernel: &dyn Fn(Feature, Feature) -> f64,
) -> QpSolution {
    let n = points.len();
    let mut q = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            q[i * n + j] = labels[i] * labels[j] * kernel(points[i], points[j]);
        }
    }
    // Gershgorin bound on the top eigenvalue for the step size.
    let lipschitz = (0..n)
        .map(|i| (0..n).map(|j| q[i * n + j].abs()).sum::<f64>())
        .fold(1e-12, f64::max);
    let step = 1.0 / lipschitz;

    let grad = |a: &[f64], out: &mut Vec<f64>| {
        for i in 0..n {
            let mut g = -1.0;
            for j in 0..n {
                g += q[i * n + j] * a[j];
            }
            out[i] = g;
        }
    };

    let mut alpha = vec![0.0; n];
    let mut momentum = alpha.clone();
    let mut t = 1.0f64;
    let mut g = vec![0.0; n];
    for iteration in 0..500_000usize {
        grad(&momentum, &mut g);
        let stepped: Vec<f64> = momentum
            .iter()
            .zip(&g)
            .map(|(&m, &gi)| m - step * gi)
            .collect();
        let next = project(&stepped, labels, c);
        let t_next = 0.5 * (1.0 + (1.0 + 4.0 * t * t).sqrt());
        let beta = (t - 1.0) / t_next;
        momentum = next
            .iter()
            .zip(&alpha)
            .map(|(&xn, &xo)| xn + beta * (xn - xo))
            .collect();
        alpha = next;
        t = t_next;

        if iteration % 200 == 199 {
            // KKT gap on the feasible iterate.
            grad(&alpha, &mut g);
            let mut up = f64::NEG_INFINITY;
            let mut low = f64::INFINITY;
            for i in 0..n {
                let v = -labels[i] * g[i];
                let in_up = (labels[i] > 0.0 && alpha[i] < c - 1e-12)
                    || (labels[i] < 0.0 && alpha[i] > 1e-12);
                let in_low = (labels[i] > 0.0 && alpha[i] > 1e-12)
                    || (labels[i] < 0.0 && alpha[i] < c - 1e-12);
                if in_up {
                    up = up.max(v);
                }
                if in_low {
                    low = low.min(v);
                }
            }
            if up - low < 1e-9 {
                break;
            }
        }
    }

    grad(&alpha, &mut g);
    let mut upper = f64::INFINITY;
    let mut lower = f64::NEG_INFINITY;
    let mut sum_free = 0.0;
    let mut n_free = 0usize;
    for i in 0..n {
        let yg = labels[i] * g[i];
        if alpha[i] >= c - 1e-9 {
            if labels[i] < 0.0 {
                upper = upper.min(yg);
            } else {
                lower = lower.max(yg);
            }
        } else if alpha[i] <= 1e-9 {
            if labels[i] > 0.0 {
                upper = upper.min(yg);
            } else {
                lower = lower.max(yg);
            }
        } else {
            n_free += 1;
            sum_free += yg;
        }
    }
    let rho = if n_free > 0 {
        sum_free / n_free as f64
    } else {
        0.5 * (upper + lower)
    };

    QpSolution {
        alphas: alpha,
        bias: -rho,
    }
}

/// Oracle decision value from a QP solution.
pub fn qp_decision_value(
    solution: &QpSolution,
    points: &[Feature],
    labels: &[f64],
    kernel: &dyn Fn(Feature, Feature) -> f64,
    x: Feature,
) -> f64 {
    let mut f = solution.bias;
    for i in 0..points.len() {
        if solution.alphas[i] > 0.0 {
            f += solution.alphas[i] * labels[i] * kernel(points[i], x);
        }
    }
    f
}

/// Deterministic pseudo-random instance generator for classifier tests.
pub struct InstanceRng(u64);

impl InstanceRng {
    pub fn new(seed: u64) -> Self {
        InstanceRng(seed.wrapping_mul(2685821657736338717).wrapping_add(1))
    }

    pub fn next_u64(&mut self) -> u64 {
        // xorshift64*
        let mut x = self.0;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.0 = x;
        x.wrapping_mul(0x2545F4914F6CDD1D)
    }

    /// Uniform in [0, 1).
    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Uniform in [lo, hi).
    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit()
    }
}

/// A random ≤`max_points` binary instance; roughly half are made
/// non-separable by flipping a few labels.
pub fn random_svm_instance(rng: &mut InstanceRng, max_points: usize) -> (Vec<Feature>, Vec<f64>) {
    loop {
        let n = 4 + (rng.next_u64() as usize) % (max_points - 3);
        let angle = rng.range(0.0, std::f64::consts::TAU);
        let (wx, wy) = (angle.cos(), angle.sin());
        let offset = rng.range(-0.5, 0.5);
        let separable = rng.unit() < 0.5;
        let mut points = Vec::with_capacity(n);
        let mut labels = Vec::with_capacity(n);
        for _ in 0..n {
            let p = [rng.range(-2.0, 2.0), rng.range(-2.0, 2.0)];
            let margin = wx * p[0] + wy * p[1] - offset;
            if separable && margin.abs() < 0.15 {
                continue; // keep a real margin in separable instances
            }
            let mut y = if margin > 0.0 { 1.0 } else { -1.0 };
            if !separable && rng.unit() < 0.2 {
                y = -y;
            }
            points.push(p);
            labels.push(y);
        }
        if labels.iter().any(|&y| y > 0.0) && labels.iter().any(|&y| y < 0.0) && points.len() >= 4 {
            return (points, labels);
        }
    }
}
