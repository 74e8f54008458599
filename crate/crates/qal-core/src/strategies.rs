//! Query-strategy scoring and candidate selection.
//!
//! Uncertainty sampling ranks candidates by how unsure a single linear SVM
//! is; query-by-committee ranks them by how much a four-model committee
//! disagrees. For binary posteriors the three uncertainty scores (least
//! confidence, margin, entropy) induce the same ranking, so USAMP proper
//! selects directly on the SVM's |decision value|, which is the same
//! ordering without an intervening logistic.

use crate::classifiers::{ModelKind, Posterior, TrainedModel};
use crate::error::{Error, Result};
use crate::lattice::LatticeState;
use rand::Rng;

/// CLI-stable strategy names.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Random,
    UsampLc,
    UsampMargin,
    UsampEntropy,
    QbcVe,
    QbcKl,
}

impl Strategy {
    pub const ALL: [Strategy; 6] = [
        Strategy::Random,
        Strategy::UsampLc,
        Strategy::UsampMargin,
        Strategy::UsampEntropy,
        Strategy::QbcVe,
        Strategy::QbcKl,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Random => "random",
            Strategy::UsampLc => "usamp_lc",
            Strategy::UsampMargin => "usamp_margin",
            Strategy::UsampEntropy => "usamp_entropy",
            Strategy::QbcVe => "qbc_ve",
            Strategy::QbcKl => "qbc_kl",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        Strategy::ALL
            .into_iter()
            .find(|s| s.name() == name)
            .ok_or_else(|| {
                Error::InvalidParameter(format!(
                    "unknown strategy '{name}' (expected one of random, usamp_lc, \
                     usamp_margin, usamp_entropy, qbc_ve, qbc_kl)"
                ))
            })
    }

    pub fn is_qbc(self) -> bool {
        matches!(self, Strategy::QbcVe | Strategy::QbcKl)
    }

    /// Default number of Alice-labeled starting samples.
    pub fn default_seed_oracles(self) -> usize {
        if self.is_qbc() {
            5
        } else {
            3
        }
    }
}

/// Least-confidence score `1 - max(p0, p1)`; higher is more informative.
pub fn score_least_confidence(post: &Posterior) -> f64 {
    1.0 - post.max()
}

/// Margin score `p(best) - p(runner-up)`; lower is more informative.
pub fn score_margin(post: &Posterior) -> f64 {
    post.max() - post.min()
}

/// Shannon entropy in nats with `0 log 0 = 0`; higher is more informative.
pub fn score_entropy(post: &Posterior) -> f64 {
    let term = |p: f64| if p > 0.0 { -p * p.ln() } else { 0.0 };
    term(post.max()) + term(post.min())
}

/// Vote entropy of per-class committee vote counts, in nats.
pub fn vote_entropy(votes: &[usize], committee_size: usize) -> Result<f64> {
    let total: usize = votes.iter().sum();
    if total != committee_size || committee_size == 0 {
        return Err(Error::InvalidParameter(format!(
            "votes sum to {total}, expected committee size {committee_size}"
        )));
    }
    let c = committee_size as f64;
    Ok(votes
        .iter()
        .map(|&v| {
            if v == 0 {
                0.0
            } else {
                let f = v as f64 / c;
                -f * f.ln()
            }
        })
        .sum())
}

/// Mean KL divergence of member posteriors from their consensus average.
pub fn kl_disagreement(members: &[Posterior]) -> f64 {
    if members.is_empty() {
        return 0.0;
    }
    let c = members.len() as f64;
    let consensus = Posterior::new(members.iter().map(|m| m.p0).sum::<f64>() / c);
    let kl = |p: &Posterior| {
        let term = |pi: f64, qi: f64| if pi > 0.0 { pi * (pi / qi).ln() } else { 0.0 };
        term(p.p0, consensus.p0) + term(p.p1, consensus.p1)
    };
    members.iter().map(kl).sum::<f64>() / c
}

/// The four-model committee, in fixed member order (linear SVM first).
#[derive(Debug, Clone)]
pub struct Committee {
    pub members: Vec<TrainedModel>,
}

impl Committee {
    pub fn size(&self) -> usize {
        self.members.len()
    }

    /// The linear-SVM member that anchors tie-breaks and accuracy reports.
    pub fn svm_member(&self) -> &TrainedModel {
        self.members
            .iter()
            .find(|m| m.kind() == ModelKind::LinearSvm)
            .expect("committee always contains the linear SVM")
    }
}

/// The models a strategy needs for one selection round.
#[derive(Debug, Clone)]
pub enum StrategyModels {
    /// A single linear SVM (random and USAMP strategies).
    Single(TrainedModel),
    /// The full committee (QBC strategies).
    Committee(Committee),
}

impl StrategyModels {
    /// The linear SVM used for accuracy evaluation and USAMP distances.
    pub fn svm(&self) -> &TrainedModel {
        match self {
            StrategyModels::Single(m) => m,
            StrategyModels::Committee(c) => c.svm_member(),
        }
    }
}

/// The chosen candidate together with the score field that justified it.
#[derive(Debug, Clone, PartialEq)]
pub struct QueryDecision {
    pub site_id: usize,
    /// `(site_id, score)` for every candidate, in candidate order.
    pub scores: Vec<(usize, f64)>,
    /// Candidates sharing the extremal score.
    pub tie_set: Vec<usize>,
}

/// Indices attaining the extremal score, by exact float equality.
pub fn extremal_tie_set(scores: &[f64], higher_is_better: bool) -> Vec<usize> {
    let best = if higher_is_better {
        scores.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    } else {
        scores.iter().copied().fold(f64::INFINITY, f64::min)
    };
    scores
        .iter()
        .enumerate()
        .filter(|(_, &s)| s == best)
        .map(|(i, _)| i)
        .collect()
}

/// Selects the next site to query among `candidates`.
///
/// random: uniform draw. USAMP: minimal |decision value| of the linear
/// SVM. QBC: maximal committee disagreement (vote entropy or mean KL),
/// ties broken by the minimal SVM |decision value| within the maximal
/// set. Any residual exact tie falls to the lowest site id.
pub fn select_candidate(
    strategy: Strategy,
    models: &StrategyModels,
    candidates: &[usize],
    lattice: &LatticeState,
    rng: &mut impl Rng,
) -> Result<QueryDecision> {
    if candidates.is_empty() {
        return Err(Error::EmptyCandidates);
    }
    if strategy.is_qbc() && !matches!(models, StrategyModels::Committee(_)) {
        return Err(Error::InvalidParameter(
            "QBC strategies need a committee".to_string(),
        ));
    }

    let features = |site: usize| lattice.site(site).features();

    match strategy {
        Strategy::Random => {
            let k = rng.gen_range(0..candidates.len());
            let scores: Vec<(usize, f64)> = candidates.iter().map(|&s| (s, 1.0)).collect();
            Ok(QueryDecision {
                site_id: candidates[k],
                tie_set: candidates.to_vec(),
                scores,
            })
        }
        Strategy::UsampLc | Strategy::UsampMargin | Strategy::UsampEntropy => {
            let svm = models.svm();
            // All three uncertainty scores are monotone in |f| for binary
            // posteriors; scoring |f| directly keeps ties exact.
            let raw: Vec<f64> = candidates
                .iter()
                .map(|&s| svm.decision_value(&features(s)).map(f64::abs))
                .collect::<Result<_>>()?;
            let tie_idx = extremal_tie_set(&raw, false);
            let site_id = tie_idx.iter().map(|&i| candidates[i]).min().unwrap();
            Ok(QueryDecision {
                site_id,
                tie_set: tie_idx.iter().map(|&i| candidates[i]).collect(),
                scores: candidates.iter().copied().zip(raw).collect(),
            })
        }
        Strategy::QbcVe | Strategy::QbcKl => {
            let StrategyModels::Committee(committee) = models else {
                unreachable!("checked above")
            };
            let disagreement: Vec<f64> = candidates
                .iter()
                .map(|&s| {
                    let x = features(s);
                    if strategy == Strategy::QbcVe {
                        let mut votes = [0usize; 2];
                        for member in &committee.members {
                            votes[usize::from(member.predict(&x)?)] += 1;
                        }
                        vote_entropy(&votes, committee.size())
                    } else {
                        let posts: Vec<Posterior> = committee
                            .members
                            .iter()
                            .map(|m| m.posterior(&x))
                            .collect::<Result<_>>()?;
                        Ok(kl_disagreement(&posts))
                    }
                })
                .collect::<Result<_>>()?;
            let tie_idx = extremal_tie_set(&disagreement, true);
            let svm = committee.svm_member();
            // Secondary rule: the USAMP distance of the SVM member.
            let mut best_site = usize::MAX;
            let mut best_abs = f64::INFINITY;
            for &i in &tie_idx {
                let site = candidates[i];
                let abs = svm.decision_value(&features(site))?.abs();
                if abs < best_abs || (abs == best_abs && site < best_site) {
                    best_abs = abs;
                    best_site = site;
                }
            }
            Ok(QueryDecision {
                site_id: best_site,
                tie_set: tie_idx.iter().map(|&i| candidates[i]).collect(),
                scores: candidates.iter().copied().zip(disagreement).collect(),
            })
        }
    }
}
