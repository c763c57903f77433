//! Persisted analysis results.
//!
//! A snapshot is a self-contained, pretty-printed JSON document holding
//! everything the view models need: the analyzed articles with their
//! sentences and mentions, the resolved persons, the MFA polarities, and the
//! event analysis of each topic. It is written once by `analyze` and never
//! modified.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::corpus::{Article, Topic};
use crate::framing::EventAnalysis;
use crate::persons::Person;
use crate::polarity::{ArticlePolarity, ClassifierInfo, FrameGroup, PolarityLabel};
use crate::textproc::{char_slice, Span};

pub const FORMAT_VERSION: u32 = 1;
pub const SNAPSHOT_FILE: &str = "snapshot.json";

#[derive(Debug, Error)]
pub enum SnapshotError {
    #[error("failed to access {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("corrupt snapshot: {0}")]
    Corrupt(String),
}

/// Hex SHA-256 of raw corpus bytes.
pub fn corpus_digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnapshotConfig {
    pub theta: f64,
    pub classifier: ClassifierInfo,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MentionRecord {
    /// Offsets into the sentence text.
    pub span: Span,
    pub surface: String,
    pub person_id: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnotatedSentence {
    pub index: usize,
    /// Offsets into the article body.
    pub span: Span,
    pub text: String,
    pub mentions: Vec<MentionRecord>,
    /// Sentence label toward the MFA; present iff the sentence mentions it.
    pub mfa_label: Option<PolarityLabel>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyzedArticle {
    pub article: Article,
    pub sentences: Vec<AnnotatedSentence>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicSnapshot {
    pub topic: Topic,
    pub analysis: EventAnalysis,
    pub persons: Vec<Person>,
    /// MFA polarity of every topic article, in topic order.
    pub polarities: Vec<ArticlePolarity>,
    pub articles: Vec<AnalyzedArticle>,
}

impl TopicSnapshot {
    pub fn article(&self, id: &str) -> Option<&AnalyzedArticle> {
        self.articles.iter().find(|a| a.article.id == id)
    }

    pub fn polarity(&self, article_id: &str) -> Option<&ArticlePolarity> {
        self.polarities.iter().find(|p| p.article_id == article_id)
    }

    pub fn group_of(&self, article_id: &str) -> FrameGroup {
        self.polarity(article_id).map_or(FrameGroup::None, |p| p.group)
    }

    pub fn mfa(&self) -> Option<&Person> {
        self.persons.iter().find(|p| p.person_id == self.analysis.mfa)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub format_version: u32,
    pub corpus_digest: String,
    /// Newest `published_at` in the corpus, so reruns are byte-identical.
    pub created_at: String,
    pub config: SnapshotConfig,
    pub topics: Vec<TopicSnapshot>,
}

impl Snapshot {
    pub fn topic(&self, id: &str) -> Option<&TopicSnapshot> {
        self.topics.iter().find(|t| t.topic.id == id)
    }

    pub fn to_json_pretty(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("snapshot serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, SnapshotError> {
        let snapshot: Snapshot =
            serde_json::from_str(text).map_err(|e| SnapshotError::Corrupt(format!("not a snapshot document: {e}")))?;
        snapshot.validate()?;
        Ok(snapshot)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<(), SnapshotError> {
        let path = path.as_ref();
        std::fs::write(path, self.to_json_pretty()).map_err(|source| SnapshotError::Io {
            path: path.display().to_string(),
            source,
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, SnapshotError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| SnapshotError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text).map_err(|e| match e {
            SnapshotError::Corrupt(reason) => SnapshotError::Corrupt(format!("{}: {reason}", path.display())),
            other => other,
        })
    }

    /// True if `bytes` are the corpus this snapshot was computed from.
    pub fn matches_corpus(&self, bytes: &[u8]) -> bool {
        self.corpus_digest == corpus_digest(bytes)
    }

    /// Checks internal consistency: versions, id references, group partition,
    /// offsets, and score ranges.
    pub fn validate(&self) -> Result<(), SnapshotError> {
        let corrupt = |msg: String| Err(SnapshotError::Corrupt(msg));
        if self.format_version != FORMAT_VERSION {
            return corrupt(format!(
                "format version {} (expected {FORMAT_VERSION})",
                self.format_version
            ));
        }
        if self.corpus_digest.len() != 64 || !self.corpus_digest.bytes().all(|b| b.is_ascii_hexdigit()) {
            return corrupt("corpus digest is not a SHA-256 hex string".into());
        }
        if !(self.config.theta > 0.0 && self.config.theta < 1.0) {
            return corrupt(format!("theta {} outside (0, 1)", self.config.theta));
        }
        let mut seen_articles = BTreeSet::new();
        for t in &self.topics {
            validate_topic(t, &mut seen_articles).map_err(|e| SnapshotError::Corrupt(format!("topic `{}`: {e}", t.topic.id)))?;
        }
        Ok(())
    }
}

fn validate_topic(t: &TopicSnapshot, seen: &mut BTreeSet<String>) -> Result<(), String> {
    let ids: Vec<&str> = t.articles.iter().map(|a| a.article.id.as_str()).collect();
    if ids.is_empty() {
        return Err("no articles".into());
    }
    if ids != t.topic.article_ids.iter().map(String::as_str).collect::<Vec<_>>() {
        return Err("article list does not match topic".into());
    }
    for id in &ids {
        if !seen.insert(id.to_string()) {
            return Err(format!("duplicate article `{id}`"));
        }
    }
    let a = &t.analysis;
    if a.topic_id != t.topic.id {
        return Err("analysis belongs to another topic".into());
    }
    if !t.persons.iter().any(|p| p.person_id == a.mfa) {
        return Err(format!("unknown MFA `{}`", a.mfa));
    }
    if !ids.contains(&a.main_article.as_str()) {
        return Err(format!("unknown main article `{}`", a.main_article));
    }

    let mut partition: BTreeMap<&str, FrameGroup> = BTreeMap::new();
    for group in FrameGroup::POLAR {
        for id in a.groups.get(group) {
            if partition.insert(id, group).is_some() {
                return Err(format!("article `{id}` in several groups"));
            }
        }
        if let Some(rep) = a.representatives.get(group) {
            if !a.groups.get(group).iter().any(|id| id == rep) {
                return Err(format!("representative `{rep}` outside its group"));
            }
        } else if !a.groups.get(group).is_empty() {
            return Err(format!("group {group} has no representative"));
        }
    }
    for id in &a.ungrouped {
        if partition.insert(id, FrameGroup::None).is_some() {
            return Err(format!("article `{id}` both grouped and ungrouped"));
        }
    }
    if partition.len() != ids.len() || ids.iter().any(|id| !partition.contains_key(id)) {
        return Err("groups do not partition the topic articles".into());
    }

    if t.polarities.len() != ids.len() {
        return Err("polarity count differs from article count".into());
    }
    for p in &t.polarities {
        if p.person_id != a.mfa {
            return Err(format!("polarity of `{}` is not toward the MFA", p.article_id));
        }
        if partition.get(p.article_id.as_str()) != Some(&p.group) {
            return Err(format!("polarity group of `{}` disagrees with analysis", p.article_id));
        }
        if !(-1.0..=1.0).contains(&p.score) {
            return Err(format!("score of `{}` outside [-1, 1]", p.article_id));
        }
    }
    for (id, r) in a.event_relevance.iter().chain(&a.group_relevance) {
        if !ids.contains(&id.as_str()) || !(0.0..=1.0).contains(r) {
            return Err(format!("bad relevance entry for `{id}`"));
        }
    }
    if a.event_relevance.len() != ids.len() {
        return Err("event relevance does not cover every article".into());
    }

    for analyzed in &t.articles {
        let body = &analyzed.article.body;
        for s in &analyzed.sentences {
            if char_slice(body, s.span) != Some(s.text.as_str()) {
                return Err(format!("sentence {} of `{}` does not match body", s.index, analyzed.article.id));
            }
            for m in &s.mentions {
                if char_slice(&s.text, m.span) != Some(m.surface.as_str()) {
                    return Err(format!("mention `{}` offsets do not match", m.surface));
                }
            }
            let mentions_mfa = s.mentions.iter().any(|m| m.person_id == a.mfa);
            if mentions_mfa != s.mfa_label.is_some() {
                return Err(format!(
                    "sentence {} of `{}`: MFA label presence disagrees with mentions",
                    s.index, analyzed.article.id
                ));
            }
        }
    }
    Ok(())
}
