//! Qubit-lattice synthesis and feature standardization.
//!
//! A 21x21 lattice of qubits carries a binary class in the sign of
//! `<sigma_z> = cos(alpha)`. The ground-truth field is a signed-distance
//! linear ramp around a random line through the lattice center: sites far
//! from the line saturate near +/-1, sites inside the ramp band have
//! near-zero `cos(alpha)` and are genuinely hard to label by measurement.

use crate::error::{Error, Result};
use crate::rng;
use rand::Rng;

/// Lattice side length.
pub const LATTICE_SIDE: usize = 21;
/// Total number of qubits.
pub const SITE_COUNT: usize = LATTICE_SIDE * LATTICE_SIDE;
/// Default ramp width in lattice-distance units.
pub const DEFAULT_RAMP_WIDTH: f64 = 6.0;
/// Default offset keeping `cos(alpha)` away from 0 and +/-1.
pub const DEFAULT_EPSILON: f64 = 0.02;

/// A 2-d feature vector; classifiers consume raw `(row, col)` coordinates.
pub type Feature = [f64; 2];

/// One lattice cell.
#[derive(Debug, Clone, PartialEq)]
pub struct QubitSite {
    pub row: usize,
    pub col: usize,
    /// Bloch polar angle, radians in (0, pi).
    pub alpha: f64,
    /// Ground-truth binary label; 0 iff `cos(alpha) > 0`.
    pub true_class: u8,
}

impl QubitSite {
    pub fn cos_alpha(&self) -> f64 {
        self.alpha.cos()
    }

    pub fn features(&self) -> Feature {
        [self.row as f64, self.col as f64]
    }

    /// Row-major lattice index of this site.
    pub fn id(&self) -> usize {
        self.row * LATTICE_SIDE + self.col
    }
}

/// The ground-truth separator line, `{x : normal . x = offset}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Boundary {
    /// Unit normal in (row, col) coordinates.
    pub normal: [f64; 2],
    pub offset: f64,
}

impl Boundary {
    pub fn signed_distance(&self, point: Feature) -> f64 {
        self.normal[0] * point[0] + self.normal[1] * point[1] - self.offset
    }

    /// Side of the line: the sign of the distance, with on-line points
    /// assigned to the sign of the offset (the generator's tie rule).
    pub fn side(&self, point: Feature) -> f64 {
        let d = self.signed_distance(point);
        if d != 0.0 {
            d.signum()
        } else if self.offset >= 0.0 {
            1.0
        } else {
            -1.0
        }
    }
}

/// The full synthesized lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeState {
    /// Exactly 441 sites in row-major order; `sites[row * 21 + col]`.
    pub sites: Vec<QubitSite>,
    pub boundary: Boundary,
    pub ramp_width: f64,
    pub seed: u64,
}

impl LatticeState {
    pub fn site(&self, id: usize) -> &QubitSite {
        &self.sites[id]
    }

    pub fn site_id(row: usize, col: usize) -> usize {
        row * LATTICE_SIDE + col
    }

    /// (class-0 count, class-1 count).
    pub fn class_counts(&self) -> (usize, usize) {
        let zeros = self.sites.iter().filter(|s| s.true_class == 0).count();
        (zeros, self.sites.len() - zeros)
    }
}

/// Synthesizes the 441-qubit lattice for a given seed.
///
/// `cos(alpha)` is `clamp(2 d / ramp_width)` with magnitude held inside
/// `[epsilon, 1 - epsilon]`, where `d` is the signed distance to a random
/// line through the lattice center. The sign never vanishes, so every site
/// has a well-defined class, and the classes are linearly separable by
/// construction.
pub fn generate_lattice(seed: u64, ramp_width: f64, epsilon: f64) -> Result<LatticeState> {
    if ramp_width.is_nan() || ramp_width <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "ramp_width must be positive, got {ramp_width}"
        )));
    }
    if epsilon.is_nan() || epsilon <= 0.0 || epsilon >= 0.1 {
        return Err(Error::InvalidParameter(format!(
            "epsilon must lie in (0, 0.1), got {epsilon}"
        )));
    }

    let mut rng = rng::stream(seed, &[rng::STREAM_LATTICE]);
    let theta: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let normal = [theta.cos(), theta.sin()];
    let center = (LATTICE_SIDE as f64 - 1.0) / 2.0;
    let offset = normal[0] * center + normal[1] * center;
    let boundary = Boundary { normal, offset };

    let mut sites = Vec::with_capacity(SITE_COUNT);
    for row in 0..LATTICE_SIDE {
        for col in 0..LATTICE_SIDE {
            let point = [row as f64, col as f64];
            let d = boundary.signed_distance(point);
            let ramp = 2.0 * d / ramp_width;
            let side = boundary.side(point);
            let magnitude = ramp.abs().clamp(epsilon, 1.0 - epsilon);
            let cos_alpha = side * magnitude;
            let alpha = cos_alpha.acos();
            let true_class = u8::from(cos_alpha <= 0.0);
            sites.push(QubitSite {
                row,
                col,
                alpha,
                true_class,
            });
        }
    }

    Ok(LatticeState {
        sites,
        boundary,
        ramp_width,
        seed,
    })
}

/// Per-feature mean and sample standard deviation (divisor N-1).
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureStats {
    pub mean: Feature,
    pub std: Feature,
}

impl FeatureStats {
    /// The identity transform.
    pub fn identity() -> Self {
        FeatureStats {
            mean: [0.0, 0.0],
            std: [1.0, 1.0],
        }
    }
}

fn moments(points: &[Feature]) -> (Feature, Feature) {
    let n = points.len() as f64;
    let mut mean = [0.0, 0.0];
    for p in points {
        mean[0] += p[0];
        mean[1] += p[1];
    }
    mean[0] /= n;
    mean[1] /= n;
    let mut var = [0.0, 0.0];
    for p in points {
        var[0] += (p[0] - mean[0]).powi(2);
        var[1] += (p[1] - mean[1]).powi(2);
    }
    var[0] /= n - 1.0;
    var[1] /= n - 1.0;
    (mean, var)
}

/// Fits the standardizer: mean 0, sample variance 1 on the fitting set.
pub fn fit_standardizer(points: &[Feature]) -> Result<FeatureStats> {
    if points.len() < 2 {
        return Err(Error::DegenerateStatistics(format!(
            "need at least 2 points, got {}",
            points.len()
        )));
    }
    let (mean, var) = moments(points);
    if var[0] == 0.0 || var[1] == 0.0 {
        return Err(Error::DegenerateStatistics(
            "zero-variance feature".to_string(),
        ));
    }
    Ok(FeatureStats {
        mean,
        std: [var[0].sqrt(), var[1].sqrt()],
    })
}

/// Standardizer for model training: zero-variance features pass through
/// with unit scale instead of failing, so an episode never aborts on a
/// training set that happens to be collinear in one coordinate.
pub(crate) fn fit_standardizer_lenient(points: &[Feature]) -> FeatureStats {
    if points.len() < 2 {
        return FeatureStats {
            mean: points.first().copied().unwrap_or([0.0, 0.0]),
            std: [1.0, 1.0],
        };
    }
    let (mean, var) = moments(points);
    let scale = |v: f64| if v == 0.0 { 1.0 } else { v.sqrt() };
    FeatureStats {
        mean,
        std: [scale(var[0]), scale(var[1])],
    }
}

/// `(point - mean) / std` per feature.
pub fn apply_standardizer(stats: &FeatureStats, point: &[f64]) -> Result<Feature> {
    if point.len() != 2 {
        return Err(Error::InvalidParameter(format!(
            "expected a 2-d feature vector, got {} dims",
            point.len()
        )));
    }
    Ok([
        (point[0] - stats.mean[0]) / stats.std[0],
        (point[1] - stats.mean[1]) / stats.std[1],
    ])
}
