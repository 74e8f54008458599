//! Two-class linear discriminant with pooled full covariance.
//!
//! Class-conditional Gaussians share one pooled covariance matrix (plus a
//! small ridge so two-point training sets stay invertible) and equal
//! priors, which makes the decision boundary affine.

use crate::lattice::Feature;

/// Ridge added to the pooled covariance diagonal.
pub const COVARIANCE_RIDGE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct DiscriminantModel {
    pub means: [Feature; 2],
    /// Pooled covariance, row-major 2x2.
    pub covariance: [f64; 4],
    /// Inverse of the pooled covariance.
    inverse: [f64; 4],
}

impl DiscriminantModel {
    /// Fits class means and the pooled covariance (divisor `N - 2`,
    /// floored at 1 so two-point sets stay defined).
    pub fn fit(points: &[Feature], labels: &[u8]) -> Self {
        let mut means = [[0.0, 0.0]; 2];
        let mut counts = [0usize; 2];
        for (p, &l) in points.iter().zip(labels) {
            let c = usize::from(l);
            means[c][0] += p[0];
            means[c][1] += p[1];
            counts[c] += 1;
        }
        for c in 0..2 {
            if counts[c] > 0 {
                means[c][0] /= counts[c] as f64;
                means[c][1] /= counts[c] as f64;
            }
        }

        let mut scatter = [0.0; 4];
        for (p, &l) in points.iter().zip(labels) {
            let m = means[usize::from(l)];
            let dx = p[0] - m[0];
            let dy = p[1] - m[1];
            scatter[0] += dx * dx;
            scatter[1] += dx * dy;
            scatter[2] += dx * dy;
            scatter[3] += dy * dy;
        }
        let divisor = (points.len().saturating_sub(2)).max(1) as f64;
        let mut covariance = scatter.map(|v| v / divisor);
        covariance[0] += COVARIANCE_RIDGE;
        covariance[3] += COVARIANCE_RIDGE;

        let det = covariance[0] * covariance[3] - covariance[1] * covariance[2];
        let inverse = [
            covariance[3] / det,
            -covariance[1] / det,
            -covariance[2] / det,
            covariance[0] / det,
        ];
        DiscriminantModel {
            means,
            covariance,
            inverse,
        }
    }

    fn mahalanobis_sq(&self, x: Feature, class: usize) -> f64 {
        let dx = x[0] - self.means[class][0];
        let dy = x[1] - self.means[class][1];
        dx * (self.inverse[0] * dx + self.inverse[1] * dy)
            + dy * (self.inverse[2] * dx + self.inverse[3] * dy)
    }

    /// Class-0 posterior under equal priors; affine log-odds in `x`.
    pub fn posterior0(&self, x: Feature) -> f64 {
        let d0 = self.mahalanobis_sq(x, 0);
        let d1 = self.mahalanobis_sq(x, 1);
        // log-odds(class 0) = (d1 - d0) / 2
        1.0 / (1.0 + (-(d1 - d0) / 2.0).exp())
    }
}
