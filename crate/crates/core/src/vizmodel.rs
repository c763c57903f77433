//! Overview and article-view models: the data contract between the analysis
//! snapshot and any client that renders it.
//!
//! Every model is a pure function of a [`TopicSnapshot`] and request
//! parameters. Field names and enum spellings are part of the public JSON
//! contract.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::corpus::Orientation;
use crate::framing::rank_by;
use crate::polarity::{FrameGroup, Polarity};
use crate::snapshot::{AnalyzedArticle, TopicSnapshot};
use crate::textproc::Span;

pub const EXCERPT_MAX_CHARS: usize = 220;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum VizError {
    #[error("unknown layout `{0}` (expected plain, polsides, mfap or mfap_random)")]
    UnknownLayout(String),
    #[error("invalid value `{value}` for `{name}`")]
    InvalidParameter { name: &'static str, value: String },
    #[error("article `{article_id}` is not part of topic `{topic_id}`")]
    ArticleNotInTopic { article_id: String, topic_id: String },
}

macro_rules! string_enum {
    ($name:ident, $err:expr, { $($variant:ident => $text:literal),+ $(,)? }) => {
        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn as_str(self) -> &'static str {
                match self { $($name::$variant => $text),+ }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $name {
            type Err = VizError;

            fn from_str(s: &str) -> Result<Self, VizError> {
                match s {
                    $($text => Ok($name::$variant),)+
                    other => Err($err(other.to_string())),
                }
            }
        }
    };
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Layout {
    Plain,
    Polsides,
    Mfap,
    MfapRandom,
}

string_enum!(Layout, VizError::UnknownLayout, {
    Plain => "plain", Polsides => "polsides", Mfap => "mfap", MfapRandom => "mfap_random",
});

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HighlightMode {
    Disabled,
    Single,
    Two,
    Three,
}

string_enum!(HighlightMode, |value| VizError::InvalidParameter { name: "highlight", value }, {
    Disabled => "disabled", Single => "single", Two => "two", Three => "three",
});

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Green,
    Red,
    Gray,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TagKind {
    Polsides,
    Mfap,
}

/// Outlet orientation (`polsides`) or MFA polarity group (`mfap`) of an
/// article.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tag {
    pub kind: TagKind,
    pub value: String,
}

/// Which tag kinds are shown. Serialized as a list of `"polsides_tag"` and
/// `"mfap_tag"`; parsed from the query values `none`, `polsides`, `mfap`,
/// `both`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct TagConfig {
    pub polsides: bool,
    pub mfap: bool,
}

impl TagConfig {
    pub const NONE: TagConfig = TagConfig {
        polsides: false,
        mfap: false,
    };
    pub const BOTH: TagConfig = TagConfig {
        polsides: true,
        mfap: true,
    };
    pub const QUERY_VALUES: [&'static str; 4] = ["none", "polsides", "mfap", "both"];

    pub fn as_query(self) -> &'static str {
        match (self.polsides, self.mfap) {
            (false, false) => "none",
            (true, false) => "polsides",
            (false, true) => "mfap",
            (true, true) => "both",
        }
    }

    fn names(self) -> Vec<&'static str> {
        let mut names = Vec::new();
        if self.polsides {
            names.push("polsides_tag");
        }
        if self.mfap {
            names.push("mfap_tag");
        }
        names
    }
}

impl FromStr for TagConfig {
    type Err = VizError;

    fn from_str(s: &str) -> Result<Self, VizError> {
        match s {
            "none" => Ok(TagConfig::NONE),
            "polsides" => Ok(TagConfig {
                polsides: true,
                mfap: false,
            }),
            "mfap" => Ok(TagConfig {
                polsides: false,
                mfap: true,
            }),
            "both" => Ok(TagConfig::BOTH),
            other => Err(VizError::InvalidParameter {
                name: "tags",
                value: other.to_string(),
            }),
        }
    }
}

impl Serialize for TagConfig {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.names().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for TagConfig {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let names = Vec::<String>::deserialize(deserializer)?;
        let mut config = TagConfig::NONE;
        for name in names {
            match name.as_str() {
                "polsides_tag" => config.polsides = true,
                "mfap_tag" => config.mfap = true,
                other => return Err(serde::de::Error::custom(format!("unknown tag kind `{other}`"))),
            }
        }
        Ok(config)
    }
}

/// Per-layout column explanation templates. `{group}` expands to the column
/// label, `{polarity}` to the polarity group name and `{mfa}` to the MFA's
/// name.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExplanationTemplates {
    pub polsides: String,
    pub mfap: String,
    pub mfap_random: String,
}

impl Default for ExplanationTemplates {
    fn default() -> Self {
        let mfap = "Articles whose sentences about {mfa}, the person mentioned most often in this coverage, \
                    are mostly {polarity}."
            .to_string();
        ExplanationTemplates {
            polsides: "Articles from outlets with a {group} political orientation.".into(),
            mfap_random: mfap.clone(),
            mfap,
        }
    }
}

fn expand(template: &str, group: &str, polarity: &str, mfa: &str) -> String {
    template
        .replace("{group}", group)
        .replace("{polarity}", polarity)
        .replace("{mfa}", mfa)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Card {
    pub article_id: String,
    pub title: String,
    pub excerpt: String,
    pub tags: Vec<Tag>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Column {
    pub group_label: String,
    pub explanation_text: String,
    pub cards: Vec<Card>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeadlineRow {
    pub article_id: String,
    pub title: String,
    pub event_relevance: f64,
    pub tags: Vec<Tag>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverviewModel {
    pub layout: Layout,
    pub topic_id: String,
    pub topic_name: String,
    pub mfa_name: String,
    /// Absent for the plain layout.
    pub main: Option<Card>,
    /// Non-empty columns only, in fixed left-to-right order.
    pub groups: Vec<Column>,
    pub further: Vec<HeadlineRow>,
    pub tag_config: TagConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViewSentence {
    pub index: usize,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Highlight {
    pub sentence_index: usize,
    /// Offsets into the sentence text.
    pub span: Span,
    pub color: Color,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContextPoint {
    pub article_id: String,
    /// `(s + 1) / 2` for the article's MFA score `s`.
    pub x: f64,
    pub is_current: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArticleViewModel {
    pub article_id: String,
    pub topic_id: String,
    pub title: String,
    pub mfa_name: String,
    pub highlight_mode: HighlightMode,
    pub sentences: Vec<ViewSentence>,
    pub highlights: Vec<Highlight>,
    /// Grouped topic articles, by `x` ascending then id.
    pub context_bar: Vec<ContextPoint>,
    pub tags: Vec<Tag>,
    pub tag_config: TagConfig,
}

/// Compact JSON used for every response body, so in-process and served
/// models compare byte for byte.
pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("view model serializes")
}

/// `(s + 1) / 2`.
pub fn context_x(score: f64) -> f64 {
    (score + 1.0) / 2.0
}

/// Column index in `0..3` for `mfap_random`, drawn uniformly from a
/// generator keyed by `(seed, article_id)` so that assignment does not
/// depend on article order.
pub fn random_column(seed: u64, article_id: &str) -> usize {
    let mut hasher = Sha256::new();
    hasher.update(seed.to_le_bytes());
    hasher.update(article_id.as_bytes());
    let key: [u8; 32] = hasher.finalize().into();
    ChaCha8Rng::from_seed(key).random_range(0..3)
}

/// The provided excerpt, else the first sentence cut to at most
/// [`EXCERPT_MAX_CHARS`] characters at a word boundary.
pub fn excerpt(article: &AnalyzedArticle) -> String {
    if let Some(e) = article.article.excerpt.as_deref().map(str::trim).filter(|e| !e.is_empty()) {
        return e.to_string();
    }
    let first = article
        .sentences
        .first()
        .map_or(article.article.body.trim(), |s| s.text.as_str());
    truncate_at_word(first, EXCERPT_MAX_CHARS)
}

fn truncate_at_word(text: &str, max_chars: usize) -> String {
    if text.chars().count() <= max_chars {
        return text.to_string();
    }
    let head: String = text.chars().take(max_chars - 1).collect();
    let cut = head
        .char_indices()
        .rfind(|(_, c)| c.is_whitespace())
        .map(|(i, _)| i)
        .filter(|&i| i > 0)
        .unwrap_or(head.len());
    format!("{}…", head[..cut].trim_end())
}

fn tags_for(topic: &TopicSnapshot, article: &AnalyzedArticle, config: TagConfig) -> Vec<Tag> {
    let mut tags = Vec::new();
    if config.polsides {
        tags.push(Tag {
            kind: TagKind::Polsides,
            value: article.article.orientation.as_str().to_string(),
        });
    }
    if config.mfap {
        tags.push(Tag {
            kind: TagKind::Mfap,
            value: topic.group_of(&article.article.id).as_str().to_string(),
        });
    }
    tags
}

const POLSIDES_COLUMNS: [Orientation; 3] = [Orientation::Left, Orientation::Center, Orientation::Right];

fn mfap_label(group: FrameGroup) -> &'static str {
    match group {
        FrameGroup::Positive => "pro-mfa",
        FrameGroup::Ambivalent => "ambivalent",
        FrameGroup::Negative => "anti-mfa",
        FrameGroup::None => "none",
    }
}

pub fn build_overview(
    topic: &TopicSnapshot,
    layout: Layout,
    tag_config: TagConfig,
    seed: u64,
    templates: &ExplanationTemplates,
) -> OverviewModel {
    let analysis = &topic.analysis;
    let relevance = &analysis.event_relevance;
    let article = |id: &str| topic.article(id).expect("analysis ids refer to topic articles");
    let card = |id: &str| {
        let a = article(id);
        Card {
            article_id: id.to_string(),
            title: a.article.title.clone(),
            excerpt: excerpt(a),
            tags: tags_for(topic, a, tag_config),
        }
    };
    let all_ids = &topic.topic.article_ids;

    // (label, polarity name for templates, ordered member ids)
    let columns: Vec<(&str, &str, Vec<String>)> = match layout {
        Layout::Plain => Vec::new(),
        Layout::Polsides => POLSIDES_COLUMNS
            .iter()
            .map(|&o| {
                let members = all_ids.iter().filter(|id| article(id).article.orientation == o);
                (o.as_str(), "", rank_by(members, relevance))
            })
            .collect(),
        Layout::Mfap => FrameGroup::POLAR
            .iter()
            .map(|&g| {
                let members = analysis.groups.get(g);
                (mfap_label(g), g.as_str(), rank_by(members, &analysis.group_relevance))
            })
            .collect(),
        Layout::MfapRandom => FrameGroup::POLAR
            .iter()
            .enumerate()
            .map(|(column, &g)| {
                let members = all_ids
                    .iter()
                    .filter(|id| topic.group_of(id) != FrameGroup::None && random_column(seed, id) == column);
                (mfap_label(g), g.as_str(), rank_by(members, relevance))
            })
            .collect(),
    };
    let template = match layout {
        Layout::Plain => "",
        Layout::Polsides => &templates.polsides,
        Layout::Mfap => &templates.mfap,
        Layout::MfapRandom => &templates.mfap_random,
    };

    let main = (layout != Layout::Plain).then(|| analysis.main_article.clone());
    let groups: Vec<Column> = columns
        .iter()
        .filter(|(_, _, members)| !members.is_empty())
        .map(|(label, polarity, members)| Column {
            group_label: label.to_string(),
            explanation_text: expand(template, label, polarity, &analysis.mfa_name),
            cards: members.iter().map(|id| card(id)).collect(),
        })
        .collect();
    let placed = |id: &String| {
        main.as_ref() == Some(id) || columns.iter().any(|(_, _, members)| members.contains(id))
    };
    let further = rank_by(all_ids.iter().filter(|id| !placed(id)), relevance)
        .into_iter()
        .map(|id| {
            let a = article(&id);
            HeadlineRow {
                title: a.article.title.clone(),
                event_relevance: relevance[&id],
                tags: tags_for(topic, a, tag_config),
                article_id: id,
            }
        })
        .collect();

    OverviewModel {
        layout,
        topic_id: topic.topic.id.clone(),
        topic_name: topic.topic.name.clone(),
        mfa_name: analysis.mfa_name.clone(),
        main: main.as_deref().map(card),
        groups,
        further,
        tag_config,
    }
}

fn highlight_color(mode: HighlightMode, label: Polarity) -> Option<Color> {
    match (mode, label) {
        (HighlightMode::Disabled, _) => None,
        (HighlightMode::Single, Polarity::Neutral) => None,
        (HighlightMode::Single, _) => Some(Color::Gray),
        (_, Polarity::Positive) => Some(Color::Green),
        (_, Polarity::Negative) => Some(Color::Red),
        (HighlightMode::Two, Polarity::Neutral) => None,
        (HighlightMode::Three, Polarity::Neutral) => Some(Color::Gray),
    }
}

pub fn build_article_view(
    topic: &TopicSnapshot,
    article_id: &str,
    mode: HighlightMode,
    tag_config: TagConfig,
) -> Result<ArticleViewModel, VizError> {
    let article = topic.article(article_id).ok_or_else(|| VizError::ArticleNotInTopic {
        article_id: article_id.to_string(),
        topic_id: topic.topic.id.clone(),
    })?;
    let mfa = &topic.analysis.mfa;

    let mut highlights = Vec::new();
    for sentence in &article.sentences {
        let Some(color) = sentence.mfa_label.and_then(|l| highlight_color(mode, l.label)) else {
            continue;
        };
        for mention in sentence.mentions.iter().filter(|m| &m.person_id == mfa) {
            highlights.push(Highlight {
                sentence_index: sentence.index,
                span: mention.span,
                color,
            });
        }
    }

    let mut context_bar: Vec<ContextPoint> = topic
        .polarities
        .iter()
        .filter(|p| p.group != FrameGroup::None)
        .map(|p| ContextPoint {
            article_id: p.article_id.clone(),
            x: context_x(p.score),
            is_current: p.article_id == article_id,
        })
        .collect();
    context_bar.sort_by(|a, b| a.x.total_cmp(&b.x).then_with(|| a.article_id.cmp(&b.article_id)));

    Ok(ArticleViewModel {
        article_id: article_id.to_string(),
        topic_id: topic.topic.id.clone(),
        title: article.article.title.clone(),
        mfa_name: topic.analysis.mfa_name.clone(),
        highlight_mode: mode,
        sentences: article
            .sentences
            .iter()
            .map(|s| ViewSentence {
                index: s.index,
                text: s.text.clone(),
            })
            .collect(),
        highlights,
        context_bar,
        tags: tags_for(topic, article, tag_config),
        tag_config,
    })
}
