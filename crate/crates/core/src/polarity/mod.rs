//! Target-dependent sentiment classification of sentences toward a person,
//! and aggregation of sentence labels into an article-level score and frame
//! group.

mod lexicon;
mod sidecar;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::textproc::Span;

pub use lexicon::{Lexicon, LexiconClassifier, Negations, DEFAULT_NEGATIONS, NEGATION_SCOPE, WINDOW};
pub use sidecar::{FallbackClassifier, SidecarClassifier, DEFAULT_SIDECAR_TIMEOUT};

pub const DEFAULT_THETA: f64 = 0.25;
pub const PROBABILITY_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum PolarityError {
    #[error("target span {begin}..{end} is not valid in a sentence of {len} characters")]
    InvalidTarget { begin: usize, end: usize, len: usize },
    #[error("sidecar unavailable: {0}")]
    SidecarUnavailable(String),
    #[error("invalid probabilities {positive}/{neutral}/{negative}: {reason}")]
    InvalidProbabilities {
        positive: f64,
        neutral: f64,
        negative: f64,
        reason: String,
    },
    #[error("theta must lie strictly between 0 and 1, got {0}")]
    InvalidTheta(f64),
    #[error("failed to read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed lexicon line {line}: {reason}")]
    MalformedLexicon { line: usize, reason: String },
}

/// Sentence-level class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    Positive,
    Neutral,
    Negative,
}

impl Polarity {
    pub fn as_str(self) -> &'static str {
        match self {
            Polarity::Positive => "positive",
            Polarity::Neutral => "neutral",
            Polarity::Negative => "negative",
        }
    }

    pub fn is_polar(self) -> bool {
        self != Polarity::Neutral
    }
}

impl fmt::Display for Polarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Polarity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "positive" => Ok(Polarity::Positive),
            "neutral" => Ok(Polarity::Neutral),
            "negative" => Ok(Polarity::Negative),
            _ => Err(format!("unknown polarity `{s}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Probabilities {
    pub positive: f64,
    pub neutral: f64,
    pub negative: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolarityLabel {
    pub probabilities: Probabilities,
    pub label: Polarity,
}

impl PolarityLabel {
    /// Validates the distribution and takes its argmax. Ties prefer neutral,
    /// then positive, then negative.
    pub fn from_probabilities(p: Probabilities) -> Result<Self, PolarityError> {
        let invalid = |reason: &str| PolarityError::InvalidProbabilities {
            positive: p.positive,
            neutral: p.neutral,
            negative: p.negative,
            reason: reason.into(),
        };
        let values = [p.positive, p.neutral, p.negative];
        if values.iter().any(|v| !v.is_finite() || *v < 0.0 || *v > 1.0) {
            return Err(invalid("each probability must lie in [0, 1]"));
        }
        if (values.iter().sum::<f64>() - 1.0).abs() > PROBABILITY_TOLERANCE {
            return Err(invalid("probabilities must sum to 1"));
        }
        let label = if p.neutral >= p.positive && p.neutral >= p.negative {
            Polarity::Neutral
        } else if p.positive >= p.negative {
            Polarity::Positive
        } else {
            Polarity::Negative
        };
        Ok(PolarityLabel {
            probabilities: p,
            label,
        })
    }

    /// 0.8 on `label`, 0.1 on each other class.
    pub fn confident(label: Polarity) -> Self {
        let pick = |class: Polarity| if class == label { 0.8 } else { 0.1 };
        PolarityLabel {
            probabilities: Probabilities {
                positive: pick(Polarity::Positive),
                neutral: pick(Polarity::Neutral),
                negative: pick(Polarity::Negative),
            },
            label,
        }
    }

    /// Element-wise mean of several labels, relabelled by argmax. Used to
    /// merge the labels of multiple mentions of one person in one sentence.
    pub fn mean(labels: &[PolarityLabel]) -> Option<Self> {
        if labels.is_empty() {
            return None;
        }
        let n = labels.len() as f64;
        let sum = |f: fn(&Probabilities) -> f64| labels.iter().map(|l| f(&l.probabilities)).sum::<f64>() / n;
        let p = Probabilities {
            positive: sum(|p| p.positive),
            neutral: sum(|p| p.neutral),
            negative: sum(|p| p.negative),
        };
        Some(PolarityLabel::from_probabilities(p).expect("mean of valid distributions is valid"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassifierKind {
    Lexicon,
    Sidecar,
}

impl FromStr for ClassifierKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "lexicon" => Ok(ClassifierKind::Lexicon),
            "sidecar" => Ok(ClassifierKind::Sidecar),
            _ => Err(format!("unknown classifier `{s}` (expected lexicon or sidecar)")),
        }
    }
}

/// Descriptive metadata about the classifier that produced the labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifierInfo {
    pub name: String,
    pub kind: ClassifierKind,
    /// Macro F1 reported for the backing model, if any. Informational only.
    pub reported_f1: Option<f64>,
}

/// A TSC backend. Offsets are char offsets into `sentence`.
pub trait Classifier: Send + Sync {
    fn info(&self) -> ClassifierInfo;
    fn classify(&self, sentence: &str, target: Span) -> Result<PolarityLabel, PolarityError>;
}

pub(crate) fn check_target(sentence: &str, target: Span) -> Result<(), PolarityError> {
    let len = sentence.chars().count();
    if target.begin >= target.end || target.end > len {
        return Err(PolarityError::InvalidTarget {
            begin: target.begin,
            end: target.end,
            len,
        });
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Aggregation
// ---------------------------------------------------------------------------

/// Article-level stance toward a person.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FrameGroup {
    Positive,
    Ambivalent,
    Negative,
    None,
}

impl FrameGroup {
    pub const POLAR: [FrameGroup; 3] = [FrameGroup::Positive, FrameGroup::Ambivalent, FrameGroup::Negative];

    pub fn as_str(self) -> &'static str {
        match self {
            FrameGroup::Positive => "positive",
            FrameGroup::Ambivalent => "ambivalent",
            FrameGroup::Negative => "negative",
            FrameGroup::None => "none",
        }
    }
}

impl fmt::Display for FrameGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Sentence label counts: P, N and U.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolarityCounts {
    pub positive: usize,
    pub negative: usize,
    pub neutral: usize,
}

impl PolarityCounts {
    pub fn total(&self) -> usize {
        self.positive + self.negative + self.neutral
    }

    /// `(P − N) / max(1, P + N)`.
    pub fn score(&self) -> f64 {
        let polar = self.positive + self.negative;
        (self.positive as f64 - self.negative as f64) / polar.max(1) as f64
    }

    pub fn group(&self, theta: f64) -> FrameGroup {
        if self.total() == 0 {
            return FrameGroup::None;
        }
        let s = self.score();
        if s >= theta {
            FrameGroup::Positive
        } else if s <= -theta {
            FrameGroup::Negative
        } else {
            FrameGroup::Ambivalent
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArticlePolarity {
    pub article_id: String,
    pub person_id: String,
    pub counts: PolarityCounts,
    pub score: f64,
    pub group: FrameGroup,
}

pub fn validate_theta(theta: f64) -> Result<f64, PolarityError> {
    if theta > 0.0 && theta < 1.0 {
        Ok(theta)
    } else {
        Err(PolarityError::InvalidTheta(theta))
    }
}

/// Aggregates per-sentence labels (keyed by sentence index, so each sentence
/// counts once) into an article polarity.
pub fn aggregate(
    article_id: &str,
    person_id: &str,
    labels: &BTreeMap<usize, PolarityLabel>,
    theta: f64,
) -> ArticlePolarity {
    let mut counts = PolarityCounts::default();
    for label in labels.values() {
        match label.label {
            Polarity::Positive => counts.positive += 1,
            Polarity::Negative => counts.negative += 1,
            Polarity::Neutral => counts.neutral += 1,
        }
    }
    ArticlePolarity {
        article_id: article_id.to_string(),
        person_id: person_id.to_string(),
        counts,
        score: counts.score(),
        group: counts.group(theta),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn counts(p: usize, n: usize, u: usize) -> PolarityCounts {
        PolarityCounts {
            positive: p,
            negative: n,
            neutral: u,
        }
    }

    #[test]
    fn score_and_group() {
        assert_eq!(counts(3, 1, 2).score(), 0.5);
        assert_eq!(counts(3, 1, 2).group(DEFAULT_THETA), FrameGroup::Positive);
        assert_eq!(counts(2, 2, 0).group(DEFAULT_THETA), FrameGroup::Ambivalent);
        assert_eq!(counts(0, 0, 0).group(DEFAULT_THETA), FrameGroup::None);
        assert_eq!(counts(0, 0, 4).group(DEFAULT_THETA), FrameGroup::Ambivalent);
        assert_eq!(counts(0, 0, 4).score(), 0.0);
    }

    #[test]
    fn theta_boundary_is_inclusive() {
        // 5 vs 3: s = 0.25 exactly
        assert_eq!(counts(5, 3, 0).group(0.25), FrameGroup::Positive);
        assert_eq!(counts(3, 5, 0).group(0.25), FrameGroup::Negative);
        assert_eq!(counts(3, 1, 0).group(0.99), FrameGroup::Ambivalent);
    }

    #[test]
    fn argmax_tie_breaks() {
        let label = |p, u, n| {
            PolarityLabel::from_probabilities(Probabilities {
                positive: p,
                neutral: u,
                negative: n,
            })
            .unwrap()
            .label
        };
        assert_eq!(label(0.4, 0.4, 0.2), Polarity::Neutral);
        assert_eq!(label(0.45, 0.1, 0.45), Polarity::Positive);
        assert_eq!(label(0.2, 0.2, 0.6), Polarity::Negative);
        assert!(PolarityLabel::from_probabilities(Probabilities {
            positive: 0.5,
            neutral: 0.5,
            negative: 0.5
        })
        .is_err());
    }

    #[test]
    fn mean_of_opposing_labels_follows_tie_order() {
        let mean = PolarityLabel::mean(&[
            PolarityLabel::confident(Polarity::Positive),
            PolarityLabel::confident(Polarity::Negative),
        ])
        .unwrap();
        assert_eq!(mean.label, Polarity::Positive);
        assert!((mean.probabilities.positive - 0.45).abs() < 1e-12);
        let same = PolarityLabel::mean(&[PolarityLabel::confident(Polarity::Negative); 3]).unwrap();
        assert_eq!(same.label, Polarity::Negative);
    }

    #[test]
    fn theta_range() {
        assert!(validate_theta(0.25).is_ok());
        for bad in [0.0, 1.0, -0.1, f64::NAN] {
            assert!(validate_theta(bad).is_err());
        }
    }
}
