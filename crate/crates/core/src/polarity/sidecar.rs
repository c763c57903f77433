use std::time::Duration;

use serde::{Deserialize, Serialize};

use super::{
    check_target, Classifier, ClassifierInfo, ClassifierKind, LexiconClassifier, PolarityError, PolarityLabel,
    Probabilities,
};
use crate::textproc::Span;

pub const DEFAULT_SIDECAR_TIMEOUT: Duration = Duration::from_secs(10);

#[derive(Debug, Serialize)]
struct ClassifyRequest<'a> {
    sentence: &'a str,
    target_begin: usize,
    target_end: usize,
}

#[derive(Debug, Deserialize)]
struct ClassifyResponse {
    positive: f64,
    neutral: f64,
    negative: f64,
}

/// Client for an external TSC model server.
///
/// Sends `POST {base}/classify` with `{"sentence", "target_begin",
/// "target_end"}` (char offsets) and expects `{"positive", "neutral",
/// "negative"}` summing to one. Any transport or protocol failure is reported
/// as [`PolarityError::SidecarUnavailable`].
pub struct SidecarClassifier {
    endpoint: String,
    agent: ureq::Agent,
    name: String,
    reported_f1: Option<f64>,
}

impl SidecarClassifier {
    pub fn new(base_url: &str, timeout: Duration) -> Self {
        let agent: ureq::Agent = ureq::Agent::config_builder()
            .timeout_global(Some(timeout))
            .http_status_as_error(false)
            .build()
            .into();
        SidecarClassifier {
            endpoint: format!("{}/classify", base_url.trim_end_matches('/')),
            agent,
            name: format!("sidecar@{}", base_url.trim_end_matches('/')),
            reported_f1: None,
        }
    }

    /// Attaches descriptive model metadata recorded in snapshots.
    pub fn with_metadata(mut self, name: impl Into<String>, reported_f1: Option<f64>) -> Self {
        self.name = name.into();
        self.reported_f1 = reported_f1.filter(|f| (0.0..=1.0).contains(f));
        self
    }

    pub fn endpoint(&self) -> &str {
        &self.endpoint
    }
}

impl Classifier for SidecarClassifier {
    fn info(&self) -> ClassifierInfo {
        ClassifierInfo {
            name: self.name.clone(),
            kind: ClassifierKind::Sidecar,
            reported_f1: self.reported_f1,
        }
    }

    fn classify(&self, sentence: &str, target: Span) -> Result<PolarityLabel, PolarityError> {
        check_target(sentence, target)?;
        let unavailable = |detail: String| PolarityError::SidecarUnavailable(format!("{}: {detail}", self.endpoint));
        let body = serde_json::to_string(&ClassifyRequest {
            sentence,
            target_begin: target.begin,
            target_end: target.end,
        })
        .expect("request serializes");

        let mut response = self
            .agent
            .post(&self.endpoint)
            .header("content-type", "application/json")
            .send(body)
            .map_err(|e| unavailable(e.to_string()))?;
        let status = response.status().as_u16();
        let text = response
            .body_mut()
            .read_to_string()
            .map_err(|e| unavailable(e.to_string()))?;
        if status != 200 {
            return Err(unavailable(format!("HTTP {status}: {}", text.trim())));
        }
        let parsed: ClassifyResponse =
            serde_json::from_str(&text).map_err(|e| unavailable(format!("bad response body: {e}")))?;
        PolarityLabel::from_probabilities(Probabilities {
            positive: parsed.positive,
            neutral: parsed.neutral,
            negative: parsed.negative,
        })
        .map_err(|e| unavailable(e.to_string()))
    }
}

/// Uses `primary` and falls back to the lexicon classifier whenever the
/// primary reports the sidecar as unavailable.
pub struct FallbackClassifier<C> {
    primary: C,
    fallback: LexiconClassifier,
}

impl<C: Classifier> FallbackClassifier<C> {
    pub fn new(primary: C, fallback: LexiconClassifier) -> Self {
        FallbackClassifier { primary, fallback }
    }
}

impl<C: Classifier> Classifier for FallbackClassifier<C> {
    fn info(&self) -> ClassifierInfo {
        let primary = self.primary.info();
        ClassifierInfo {
            name: format!("{} (fallback: {})", primary.name, self.fallback.info().name),
            ..primary
        }
    }

    fn classify(&self, sentence: &str, target: Span) -> Result<PolarityLabel, PolarityError> {
        match self.primary.classify(sentence, target) {
            Err(PolarityError::SidecarUnavailable(detail)) => {
                log::warn!("falling back to lexicon classifier: {detail}");
                self.fallback.classify(sentence, target)
            }
            other => other,
        }
    }
}
