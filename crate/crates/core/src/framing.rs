//! Frame groups, relevance scoring, and selection of the main and
//! representative articles of an event.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::Article;
use crate::persons::Person;
use crate::polarity::{ArticlePolarity, FrameGroup};
use crate::textproc::tokenize;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FramingError {
    #[error("topic `{0}` has no articles")]
    EmptyTopic(String),
    #[error("no polarity for article `{0}`")]
    MissingPolarity(String),
    #[error("vector provider returned {got} vectors for {expected} articles")]
    VectorCount { expected: usize, got: usize },
}

/// Maps a topic's articles to dense vectors of equal dimension, in input
/// order. Implementations may ignore `articles` beyond the one being
/// embedded (pretrained embeddings) or use them as the document collection
/// (TF-IDF).
pub trait VectorProvider: Send + Sync {
    fn vectors(&self, articles: &[&Article]) -> Vec<Vec<f64>>;
}

/// Topic-local TF-IDF over lowercased tokens of title and body.
///
/// Raw term frequency times smoothed inverse document frequency
/// `ln((1 + n) / (1 + df)) + 1`, L2-normalized. Dimensions follow the sorted
/// topic vocabulary.
#[derive(Debug, Clone, Copy, Default)]
pub struct TfIdf;

impl TfIdf {
    pub fn terms(article: &Article) -> Vec<String> {
        tokenize(&article.title)
            .into_iter()
            .chain(tokenize(&article.body))
            .map(|t| t.text.to_lowercase())
            .collect()
    }
}

impl VectorProvider for TfIdf {
    fn vectors(&self, articles: &[&Article]) -> Vec<Vec<f64>> {
        let counts: Vec<BTreeMap<String, usize>> = articles
            .par_iter()
            .map(|a| {
                let mut tf = BTreeMap::new();
                for term in TfIdf::terms(a) {
                    *tf.entry(term).or_insert(0) += 1;
                }
                tf
            })
            .collect();

        let mut df: BTreeMap<&str, usize> = BTreeMap::new();
        for tf in &counts {
            for term in tf.keys() {
                *df.entry(term.as_str()).or_insert(0) += 1;
            }
        }
        let n = articles.len() as f64;
        let vocabulary: BTreeMap<&str, (usize, f64)> = df
            .iter()
            .enumerate()
            .map(|(i, (term, &d))| (*term, (i, ((1.0 + n) / (1.0 + d as f64)).ln() + 1.0)))
            .collect();

        counts
            .par_iter()
            .map(|tf| {
                let mut v = vec![0.0; vocabulary.len()];
                for (term, &count) in tf {
                    let (i, idf) = vocabulary[term.as_str()];
                    v[i] = count as f64 * idf;
                }
                normalize(&mut v);
                v
            })
            .collect()
    }
}

fn normalize(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
}

/// Cosine similarity clamped to [0, 1]. Zero vectors have similarity 0.
pub fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    (dot / (na * nb)).clamp(0.0, 1.0)
}

/// L2-normalized mean of `vectors`.
pub fn centroid<'a>(vectors: impl IntoIterator<Item = &'a [f64]>) -> Vec<f64> {
    let mut sum: Vec<f64> = Vec::new();
    let mut n = 0usize;
    for v in vectors {
        if sum.is_empty() {
            sum = vec![0.0; v.len()];
        }
        sum.iter_mut().zip(v).for_each(|(s, x)| *s += x);
        n += 1;
    }
    if n > 0 {
        sum.iter_mut().for_each(|s| *s /= n as f64);
    }
    normalize(&mut sum);
    sum
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Groups {
    pub positive: Vec<String>,
    pub ambivalent: Vec<String>,
    pub negative: Vec<String>,
}

impl Groups {
    pub fn get(&self, group: FrameGroup) -> &[String] {
        match group {
            FrameGroup::Positive => &self.positive,
            FrameGroup::Ambivalent => &self.ambivalent,
            FrameGroup::Negative => &self.negative,
            FrameGroup::None => &[],
        }
    }

    fn get_mut(&mut self, group: FrameGroup) -> Option<&mut Vec<String>> {
        match group {
            FrameGroup::Positive => Some(&mut self.positive),
            FrameGroup::Ambivalent => Some(&mut self.ambivalent),
            FrameGroup::Negative => Some(&mut self.negative),
            FrameGroup::None => None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Representatives {
    pub positive: Option<String>,
    pub ambivalent: Option<String>,
    pub negative: Option<String>,
}

impl Representatives {
    pub fn get(&self, group: FrameGroup) -> Option<&str> {
        match group {
            FrameGroup::Positive => self.positive.as_deref(),
            FrameGroup::Ambivalent => self.ambivalent.as_deref(),
            FrameGroup::Negative => self.negative.as_deref(),
            FrameGroup::None => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventAnalysis {
    pub topic_id: String,
    /// Person id of the most frequent actor.
    pub mfa: String,
    pub mfa_name: String,
    /// Article ids per polarity group, in topic order.
    pub groups: Groups,
    /// Articles that never mention the MFA.
    pub ungrouped: Vec<String>,
    pub representatives: Representatives,
    pub main_article: String,
    pub event_relevance: BTreeMap<String, f64>,
    /// Relevance to the article's own group; grouped articles only.
    pub group_relevance: BTreeMap<String, f64>,
    /// Every article except the main and representative ones, by event
    /// relevance descending (ties: smaller id).
    pub further_articles: Vec<String>,
    pub seed: u64,
}

impl EventAnalysis {
    pub fn group_of(&self, article_id: &str) -> FrameGroup {
        FrameGroup::POLAR
            .into_iter()
            .find(|&g| self.groups.get(g).iter().any(|id| id == article_id))
            .unwrap_or(FrameGroup::None)
    }
}

/// Orders ids by descending score, ties by ascending id.
pub fn rank_by<'a>(ids: impl IntoIterator<Item = &'a String>, score: &BTreeMap<String, f64>) -> Vec<String> {
    let mut ids: Vec<&String> = ids.into_iter().collect();
    ids.sort_by(|a, b| score[*b].total_cmp(&score[*a]).then_with(|| a.cmp(b)));
    ids.into_iter().cloned().collect()
}

pub fn analyze_event(
    topic_id: &str,
    articles: &[&Article],
    mfa: &Person,
    polarities: &[ArticlePolarity],
    seed: u64,
    provider: &dyn VectorProvider,
) -> Result<EventAnalysis, FramingError> {
    if articles.is_empty() {
        return Err(FramingError::EmptyTopic(topic_id.to_string()));
    }
    let vectors = provider.vectors(articles);
    if vectors.len() != articles.len() {
        return Err(FramingError::VectorCount {
            expected: articles.len(),
            got: vectors.len(),
        });
    }
    let by_id: BTreeMap<&str, &[f64]> = articles
        .iter()
        .zip(&vectors)
        .map(|(a, v)| (a.id.as_str(), v.as_slice()))
        .collect();
    let polarity_of: BTreeMap<&str, FrameGroup> =
        polarities.iter().map(|p| (p.article_id.as_str(), p.group)).collect();

    let mut groups = Groups::default();
    let mut ungrouped = Vec::new();
    for article in articles {
        let group = *polarity_of
            .get(article.id.as_str())
            .ok_or_else(|| FramingError::MissingPolarity(article.id.clone()))?;
        match groups.get_mut(group) {
            Some(list) => list.push(article.id.clone()),
            None => ungrouped.push(article.id.clone()),
        }
    }

    let event_centroid = centroid(vectors.iter().map(Vec::as_slice));
    let event_relevance: BTreeMap<String, f64> = articles
        .iter()
        .zip(&vectors)
        .map(|(a, v)| (a.id.clone(), cosine(v, &event_centroid)))
        .collect();

    let mut group_relevance = BTreeMap::new();
    let mut representatives = Representatives::default();
    for group in FrameGroup::POLAR {
        let members = groups.get(group);
        if members.is_empty() {
            continue;
        }
        let c = centroid(members.iter().map(|id| by_id[id.as_str()]));
        for id in members {
            group_relevance.insert(id.clone(), cosine(by_id[id.as_str()], &c));
        }
        let best = rank_by(members, &group_relevance).into_iter().next();
        match group {
            FrameGroup::Positive => representatives.positive = best,
            FrameGroup::Ambivalent => representatives.ambivalent = best,
            FrameGroup::Negative => representatives.negative = best,
            FrameGroup::None => unreachable!(),
        }
    }

    let ranked = rank_by(event_relevance.keys(), &event_relevance);
    let main_article = ranked[0].clone();
    let featured: BTreeSet<&str> = FrameGroup::POLAR
        .into_iter()
        .filter_map(|g| representatives.get(g))
        .chain([main_article.as_str()])
        .collect();
    let further_articles = ranked
        .iter()
        .filter(|id| !featured.contains(id.as_str()))
        .cloned()
        .collect();

    Ok(EventAnalysis {
        topic_id: topic_id.to_string(),
        mfa: mfa.person_id.clone(),
        mfa_name: mfa.canonical_name.clone(),
        groups,
        ungrouped,
        representatives,
        main_article,
        event_relevance,
        group_relevance,
        further_articles,
        seed,
    })
}
