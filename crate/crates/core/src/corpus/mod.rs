//! Event corpora: articles grouped into topics, loaded from line-delimited
//! JSON records.
//!
//! Every line of a corpus file is one JSON object with exactly the fields of
//! [`Article`]. `excerpt` and `url` may be omitted or `null`. Unknown fields
//! are rejected unless the corpus is loaded in lenient mode, in which case
//! they are dropped with a warning. Blank lines are ignored.

mod extract;
mod fetch;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use extract::{extract_main_text, ExtractedPage};
pub use fetch::{fetch_article, ArticleDraft, FetchError, FetchOptions, DEFAULT_MIN_BLOCK_CHARS};

/// Field names of a corpus record, in serialization order.
pub const RECORD_FIELDS: [&str; 9] = [
    "id",
    "topic_id",
    "outlet",
    "orientation",
    "title",
    "excerpt",
    "body",
    "published_at",
    "url",
];

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("failed to read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("corpus contains no records")]
    EmptyCorpus,
    #[error("malformed record on line {line}: {reason}")]
    MalformedRecord { line: usize, reason: String },
    #[error("duplicate article id `{0}`")]
    DuplicateId(String),
}

/// Self-declared political orientation of an article's outlet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Left,
    Center,
    Right,
    Unknown,
}

impl Orientation {
    pub const ALL: [Orientation; 4] = [
        Orientation::Left,
        Orientation::Center,
        Orientation::Right,
        Orientation::Unknown,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Orientation::Left => "left",
            Orientation::Center => "center",
            Orientation::Right => "right",
            Orientation::Unknown => "unknown",
        }
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Orientation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Orientation::ALL
            .into_iter()
            .find(|o| o.as_str() == s)
            .ok_or_else(|| format!("unknown orientation `{s}` (expected left, center, right or unknown)"))
    }
}

/// One news text. Text only: no images or other media.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Article {
    pub id: String,
    pub topic_id: String,
    pub outlet: String,
    pub orientation: Orientation,
    pub title: String,
    #[serde(default)]
    pub excerpt: Option<String>,
    pub body: String,
    /// ISO-8601 timestamp with offset, kept verbatim.
    pub published_at: String,
    #[serde(default)]
    pub url: Option<String>,
}

impl Article {
    fn validate(&self) -> Result<(), String> {
        if self.id.trim().is_empty() {
            return Err("`id` must not be empty".into());
        }
        if self.topic_id.trim().is_empty() {
            return Err("`topic_id` must not be empty".into());
        }
        if self.body.trim().is_empty() {
            return Err("`body` is empty after trimming whitespace".into());
        }
        chrono::DateTime::parse_from_rfc3339(&self.published_at)
            .map_err(|e| format!("`published_at` is not an ISO-8601 timestamp: {e}"))?;
        Ok(())
    }
}

/// A named event and the ordered ids of the articles reporting on it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Topic {
    pub id: String,
    pub name: String,
    pub article_ids: Vec<String>,
}

impl Topic {
    /// Display name derived from the topic id: `debt_ceiling` → `debt ceiling`.
    pub fn name_for(id: &str) -> String {
        id.replace(['_', '-'], " ")
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct LoadOptions {
    /// Drop unknown record fields with a warning instead of rejecting the record.
    pub lenient: bool,
}

/// Validated articles ordered by `(topic_id, id)`, plus the derived topics.
/// Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct Corpus {
    articles: Vec<Article>,
    topics: Vec<Topic>,
    index: BTreeMap<String, usize>,
}

impl Corpus {
    pub fn from_articles(mut articles: Vec<Article>) -> Result<Self, CorpusError> {
        if articles.is_empty() {
            return Err(CorpusError::EmptyCorpus);
        }
        articles.sort_by(|a, b| (&a.topic_id, &a.id).cmp(&(&b.topic_id, &b.id)));

        let mut index = BTreeMap::new();
        for (i, article) in articles.iter().enumerate() {
            if index.insert(article.id.clone(), i).is_some() {
                return Err(CorpusError::DuplicateId(article.id.clone()));
            }
        }

        let mut topics: Vec<Topic> = Vec::new();
        for article in &articles {
            match topics.last_mut() {
                Some(topic) if topic.id == article.topic_id => topic.article_ids.push(article.id.clone()),
                _ => topics.push(Topic {
                    id: article.topic_id.clone(),
                    name: Topic::name_for(&article.topic_id),
                    article_ids: vec![article.id.clone()],
                }),
            }
        }

        Ok(Corpus {
            articles,
            topics,
            index,
        })
    }

    pub fn articles(&self) -> &[Article] {
        &self.articles
    }

    pub fn topics(&self) -> &[Topic] {
        &self.topics
    }

    pub fn article(&self, id: &str) -> Option<&Article> {
        self.index.get(id).map(|&i| &self.articles[i])
    }

    pub fn topic(&self, id: &str) -> Option<&Topic> {
        self.topics.iter().find(|t| t.id == id)
    }

    /// Articles of a topic in corpus order.
    pub fn topic_articles<'a>(&'a self, topic: &'a Topic) -> impl Iterator<Item = &'a Article> + 'a {
        topic.article_ids.iter().filter_map(|id| self.article(id))
    }

    pub fn len(&self) -> usize {
        self.articles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.articles.is_empty()
    }

    /// Serializes back to the line-delimited record format, one article per
    /// line in corpus order.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for article in &self.articles {
            out.push_str(&serde_json::to_string(article).expect("article serializes"));
            out.push('\n');
        }
        out
    }
}

/// Reads and validates a corpus file.
pub fn load_corpus(path: impl AsRef<Path>, options: LoadOptions) -> Result<Corpus, CorpusError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| CorpusError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_corpus(&text, options)
}

/// Parses corpus records from text. Line numbers in errors are 1-based.
pub fn parse_corpus(text: &str, options: LoadOptions) -> Result<Corpus, CorpusError> {
    let known: BTreeSet<&str> = RECORD_FIELDS.into_iter().collect();
    let mut articles = Vec::new();

    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let malformed = |reason: String| CorpusError::MalformedRecord {
            line: line_no,
            reason,
        };

        let value: serde_json::Value = serde_json::from_str(line).map_err(|e| malformed(e.to_string()))?;
        let serde_json::Value::Object(mut fields) = value else {
            return Err(malformed("record is not a JSON object".into()));
        };

        let unknown: Vec<String> = fields
            .keys()
            .filter(|k| !known.contains(k.as_str()))
            .cloned()
            .collect();
        if !unknown.is_empty() {
            if !options.lenient {
                return Err(malformed(format!("unknown field(s): {}", unknown.join(", "))));
            }
            log::warn!("line {line_no}: ignoring unknown field(s): {}", unknown.join(", "));
            for key in &unknown {
                fields.remove(key);
            }
        }

        let article: Article =
            serde_json::from_value(serde_json::Value::Object(fields)).map_err(|e| malformed(e.to_string()))?;
        article.validate().map_err(malformed)?;
        articles.push(article);
    }

    Corpus::from_articles(articles)
}
