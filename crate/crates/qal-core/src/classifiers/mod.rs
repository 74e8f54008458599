//! The four committee models: linear SVM, coarse Gaussian SVM, fine
//! decision tree, and linear discriminant.
//!
//! Every model standardizes its features internally (mean 0, sample
//! variance 1 on the training set) and exposes class prediction, a binary
//! posterior, and, for the SVM kinds, the signed decision value.

mod discriminant;
mod svm;
mod tree;

pub use discriminant::{DiscriminantModel, COVARIANCE_RIDGE};
pub use svm::{Kernel, SvmModel, BOX_CONSTRAINT, GAUSSIAN_SCALE, KKT_TOLERANCE};
pub use tree::{Node, TreeModel, MAX_SPLITS};

use crate::error::{Error, Result};
use crate::lattice::{self, Feature, FeatureStats};

/// Committee model kinds, in committee order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    LinearSvm,
    GaussianSvm,
    DecisionTree,
    LinearDiscriminant,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::LinearSvm => "linear_svm",
            ModelKind::GaussianSvm => "gaussian_svm",
            ModelKind::DecisionTree => "decision_tree",
            ModelKind::LinearDiscriminant => "linear_discriminant",
        }
    }

    /// The default four-model committee, in fixed order.
    pub const COMMITTEE: [ModelKind; 4] = [
        ModelKind::LinearSvm,
        ModelKind::GaussianSvm,
        ModelKind::DecisionTree,
        ModelKind::LinearDiscriminant,
    ];
}

/// Binary class probabilities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Posterior {
    pub p0: f64,
    pub p1: f64,
}

impl Posterior {
    pub fn new(p0: f64) -> Self {
        Posterior { p0, p1: 1.0 - p0 }
    }

    /// Probability of the most likely class.
    pub fn max(&self) -> f64 {
        self.p0.max(self.p1)
    }

    /// Probability of the runner-up class.
    pub fn min(&self) -> f64 {
        self.p0.min(self.p1)
    }

    /// Argmax class; exact ties resolve to class 0.
    pub fn argmax(&self) -> u8 {
        u8::from(self.p1 > self.p0)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum ModelParams {
    /// Single-class training set: predict that class everywhere.
    Degenerate {
        class: u8,
    },
    Svm(SvmModel),
    Tree(TreeModel),
    Discriminant(DiscriminantModel),
}

/// A fitted classifier plus the standardizer captured at training time.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainedModel {
    kind: ModelKind,
    standardizer: FeatureStats,
    params: ModelParams,
}

/// Fits one model of the given kind on `(points, labels)` pairs.
///
/// A single-class training set yields a degenerate model that predicts
/// that class with posterior 1; it is not an error.
pub fn train(kind: ModelKind, points: &[Feature], labels: &[u8]) -> Result<TrainedModel> {
    if points.is_empty() {
        return Err(Error::InvalidParameter("empty training set".to_string()));
    }
    if points.len() != labels.len() {
        return Err(Error::InvalidParameter(format!(
            "{} points but {} labels",
            points.len(),
            labels.len()
        )));
    }
    if let Some(bad) = labels.iter().find(|&&l| l > 1) {
        return Err(Error::InvalidParameter(format!(
            "labels must be 0 or 1, got {bad}"
        )));
    }

    let first = labels[0];
    if labels.iter().all(|&l| l == first) {
        return Ok(TrainedModel {
            kind,
            standardizer: lattice::fit_standardizer_lenient(points),
            params: ModelParams::Degenerate { class: first },
        });
    }

    let standardizer = lattice::fit_standardizer_lenient(points);
    let standardized: Vec<Feature> = points
        .iter()
        .map(|p| lattice::apply_standardizer(&standardizer, p).expect("2-d by construction"))
        .collect();

    let params = match kind {
        ModelKind::LinearSvm | ModelKind::GaussianSvm => {
            let kernel = if kind == ModelKind::LinearSvm {
                Kernel::Linear
            } else {
                Kernel::Gaussian {
                    scale: GAUSSIAN_SCALE,
                }
            };
            // Internal SVM labels: +1 for class 0, -1 for class 1, so a
            // positive decision value means class 0.
            let pm: Vec<f64> = labels
                .iter()
                .map(|&l| if l == 0 { 1.0 } else { -1.0 })
                .collect();
            ModelParams::Svm(svm::train_svm(kernel, &standardized, &pm, BOX_CONSTRAINT))
        }
        ModelKind::DecisionTree => ModelParams::Tree(tree::train_tree(&standardized, labels)),
        ModelKind::LinearDiscriminant => {
            ModelParams::Discriminant(DiscriminantModel::fit(&standardized, labels))
        }
    };

    Ok(TrainedModel {
        kind,
        standardizer,
        params,
    })
}

impl TrainedModel {
    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn standardizer(&self) -> &FeatureStats {
        &self.standardizer
    }

    /// Number of support vectors, for SVM kinds.
    pub fn support_count(&self) -> Option<usize> {
        match &self.params {
            ModelParams::Svm(m) => Some(m.support_count()),
            _ => None,
        }
    }

    /// Dual coefficients of the SVM solution, for diagnostics and tests.
    pub fn dual_coefficients(&self) -> Option<&[f64]> {
        match &self.params {
            ModelParams::Svm(m) => Some(&m.alphas),
            _ => None,
        }
    }

    fn standardize(&self, point: &[f64]) -> Result<Feature> {
        lattice::apply_standardizer(&self.standardizer, point)
    }

    /// Argmax-posterior class; exact posterior ties resolve to class 0.
    pub fn predict(&self, point: &[f64]) -> Result<u8> {
        Ok(self.posterior(point)?.argmax())
    }

    /// Binary posterior. SVM kinds map the decision value through a
    /// unit-scale logistic; the tree reports leaf fractions; the
    /// discriminant its equal-prior Gaussian posterior.
    pub fn posterior(&self, point: &[f64]) -> Result<Posterior> {
        let x = self.standardize(point)?;
        let p0 = match &self.params {
            ModelParams::Degenerate { class } => f64::from(1 - class),
            ModelParams::Svm(m) => logistic(m.decision_value(x)),
            ModelParams::Tree(m) => m.leaf_fractions(x).0,
            ModelParams::Discriminant(m) => m.posterior0(x),
        };
        Ok(Posterior::new(p0))
    }

    /// Signed margin of an SVM-kind model (positive means class 0). The
    /// degenerate single-class SVM reports an infinite margin.
    pub fn decision_value(&self, point: &[f64]) -> Result<f64> {
        let x = self.standardize(point)?;
        match &self.params {
            ModelParams::Svm(m) => Ok(m.decision_value(x)),
            ModelParams::Degenerate { class }
                if matches!(self.kind, ModelKind::LinearSvm | ModelKind::GaussianSvm) =>
            {
                Ok(if *class == 0 {
                    f64::INFINITY
                } else {
                    f64::NEG_INFINITY
                })
            }
            _ => Err(Error::KindMismatch(format!(
                "decision_value is defined for SVM kinds, not {}",
                self.kind.name()
            ))),
        }
    }

    /// Debug dump of the fitted parameters as `key=value` lines. Not a
    /// stability-guaranteed format.
    pub fn dump(&self) -> String {
        let mut out = format!("kind={}\n", self.kind.name());
        out += &format!(
            "standardizer.mean={},{}\nstandardizer.std={},{}\n",
            self.standardizer.mean[0],
            self.standardizer.mean[1],
            self.standardizer.std[0],
            self.standardizer.std[1]
        );
        match &self.params {
            ModelParams::Degenerate { class } => {
                out += &format!("degenerate.class={class}\n");
            }
            ModelParams::Svm(m) => {
                out += &format!(
                    "svm.bias={}\nsvm.support_count={}\n",
                    m.bias,
                    m.support_count()
                );
                for (i, (sv, c)) in m.support.iter().zip(&m.coeffs).enumerate() {
                    out += &format!("svm.sv{i}={},{},coeff={}\n", sv[0], sv[1], c);
                }
            }
            ModelParams::Tree(m) => {
                out += &format!(
                    "tree.splits={}\ntree.nodes={}\n",
                    m.split_count,
                    m.nodes.len()
                );
            }
            ModelParams::Discriminant(m) => {
                out += &format!(
                    "ld.mean0={},{}\nld.mean1={},{}\nld.cov={},{},{},{}\n",
                    m.means[0][0],
                    m.means[0][1],
                    m.means[1][0],
                    m.means[1][1],
                    m.covariance[0],
                    m.covariance[1],
                    m.covariance[2],
                    m.covariance[3]
                );
            }
        }
        out
    }
}

fn logistic(f: f64) -> f64 {
    1.0 / (1.0 + (-f).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    const HALF_SQRT2: f64 = std::f64::consts::SQRT_2 / 2.0;

    fn two_point_model() -> TrainedModel {
        train(ModelKind::LinearSvm, &[[3.0, 7.0], [9.0, 1.0]], &[0, 1]).unwrap()
    }

    #[test]
    fn two_point_svm_reproduces_the_standardized_support_vectors() {
        let model = two_point_model();
        let ModelParams::Svm(svm) = &model.params else {
            panic!("expected an SVM")
        };
        assert_eq!(svm.support.len(), 2);
        for sv in &svm.support {
            assert_abs_diff_eq!(sv[0].abs(), HALF_SQRT2, epsilon = 1e-12);
            assert_abs_diff_eq!(sv[1].abs(), HALF_SQRT2, epsilon = 1e-12);
        }
        // Canonical margin: |f| = 1 on the support vectors, 0 midway.
        assert_abs_diff_eq!(
            model.decision_value(&[3.0, 7.0]).unwrap(),
            1.0,
            epsilon = 1e-9
        );
        assert_abs_diff_eq!(
            model.decision_value(&[9.0, 1.0]).unwrap(),
            -1.0,
            epsilon = 1e-9
        );
        assert_abs_diff_eq!(
            model.decision_value(&[6.0, 4.0]).unwrap(),
            0.0,
            epsilon = 1e-9
        );
    }

    #[test]
    fn two_point_svm_predicts_its_own_labels() {
        let model = two_point_model();
        assert_eq!(model.predict(&[3.0, 7.0]).unwrap(), 0);
        assert_eq!(model.predict(&[9.0, 1.0]).unwrap(), 1);
        // Boundary tie goes to class 0.
        assert_eq!(model.predict(&[6.0, 4.0]).unwrap(), 0);
        let p = model.posterior(&[6.0, 4.0]).unwrap();
        assert_abs_diff_eq!(p.p0, 0.5, epsilon = 1e-9);
    }

    #[test]
    fn single_class_training_set_is_degenerate_not_an_error() {
        for kind in ModelKind::COMMITTEE {
            let model = train(kind, &[[1.0, 2.0], [3.0, 4.0]], &[1, 1]).unwrap();
            assert_eq!(model.predict(&[0.0, 0.0]).unwrap(), 1);
            let p = model.posterior(&[50.0, -3.0]).unwrap();
            assert_eq!((p.p0, p.p1), (0.0, 1.0));
        }
    }

    #[test]
    fn train_errors() {
        assert!(matches!(
            train(ModelKind::LinearSvm, &[], &[]),
            Err(Error::InvalidParameter(_))
        ));
        assert!(train(ModelKind::LinearSvm, &[[0.0, 0.0]], &[2]).is_err());
        assert!(train(ModelKind::LinearSvm, &[[0.0, 0.0], [1.0, 1.0]], &[0]).is_err());
    }

    #[test]
    fn decision_value_requires_an_svm_kind() {
        let pts = [[0.0, 0.0], [1.0, 0.5], [2.0, 1.7], [3.0, 2.1]];
        let labels = [0, 0, 1, 1];
        for kind in [ModelKind::DecisionTree, ModelKind::LinearDiscriminant] {
            let model = train(kind, &pts, &labels).unwrap();
            assert!(matches!(
                model.decision_value(&[1.0, 1.0]),
                Err(Error::KindMismatch(_))
            ));
        }
    }

    #[test]
    fn dimension_mismatch_is_a_parameter_error() {
        let model = two_point_model();
        assert!(matches!(
            model.predict(&[1.0]),
            Err(Error::InvalidParameter(_))
        ));
        assert!(model.posterior(&[1.0, 2.0, 3.0]).is_err());
    }

    #[test]
    fn posteriors_normalize_and_predict_is_argmax() {
        let pts = [
            [0.0, 0.0],
            [1.0, 0.3],
            [0.2, 1.1],
            [3.0, 2.9],
            [2.5, 3.3],
            [3.4, 2.2],
        ];
        let labels = [0, 0, 0, 1, 1, 1];
        for kind in ModelKind::COMMITTEE {
            let model = train(kind, &pts, &labels).unwrap();
            let mut state = 77u64;
            for _ in 0..2500 {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
                let x = ((state >> 32) & 0xffff) as f64 / 4096.0 - 4.0;
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
                let y = ((state >> 32) & 0xffff) as f64 / 4096.0 - 4.0;
                let p = model.posterior(&[x, y]).unwrap();
                assert!(p.p0 >= 0.0 && p.p1 >= 0.0);
                assert!((p.p0 + p.p1 - 1.0).abs() < 1e-12);
                assert_eq!(model.predict(&[x, y]).unwrap(), p.argmax());
            }
        }
    }

    #[test]
    fn pure_tree_leaf_posterior_is_certain() {
        let model = train(ModelKind::DecisionTree, &[[0.0, 0.0], [4.0, 4.0]], &[0, 1]).unwrap();
        let p = model.posterior(&[0.0, 0.0]).unwrap();
        assert_eq!((p.p0, p.p1), (1.0, 0.0));
    }

    #[test]
    fn discriminant_midpoint_posterior_is_half() {
        let model = train(
            ModelKind::LinearDiscriminant,
            &[[1.0, 1.0], [2.0, 2.0], [-1.0, -1.0], [-2.0, -2.0]],
            &[0, 0, 1, 1],
        )
        .unwrap();
        let p = model.posterior(&[0.0, 0.0]).unwrap();
        assert_abs_diff_eq!(p.p0, 0.5, epsilon = 1e-9);
    }

    #[test]
    fn dump_mentions_the_kind() {
        let model = two_point_model();
        assert!(model.dump().starts_with("kind=linear_svm"));
    }
}
