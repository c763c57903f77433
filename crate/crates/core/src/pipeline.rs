//! End-to-end analysis: corpus → sentences and mentions → persons and MFA →
//! sentence labels and article polarity → frame groups and relevance.
//!
//! Per-article stages run on a rayon pool. Every merge is ordered by corpus
//! order, so the snapshot does not depend on the number of workers.

use std::collections::BTreeMap;

use rayon::prelude::*;
use thiserror::Error;

use crate::corpus::Corpus;
use crate::framing::{analyze_event, FramingError, VectorProvider};
use crate::persons::{compute_mfa, resolve, PersonsError};
use crate::polarity::{aggregate, validate_theta, Classifier, PolarityError, PolarityLabel};
use crate::snapshot::{
    AnalyzedArticle, AnnotatedSentence, MentionRecord, Snapshot, SnapshotConfig, TopicSnapshot, FORMAT_VERSION,
};
use crate::textproc::{detect_mentions, segment_sentences, Gazetteer, PersonMention, Sentence};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("topic `{topic}`: {source}")]
    Persons {
        topic: String,
        #[source]
        source: PersonsError,
    },
    #[error("article `{article}`: {source}")]
    Classifier {
        article: String,
        #[source]
        source: PolarityError,
    },
    #[error(transparent)]
    Framing(#[from] FramingError),
    #[error(transparent)]
    InvalidConfig(PolarityError),
    #[error("failed to start worker pool: {0}")]
    WorkerPool(String),
}

#[derive(Debug, Clone, Copy)]
pub struct PipelineConfig {
    pub theta: f64,
    pub seed: u64,
    /// Worker threads; `None` uses one per processor.
    pub jobs: Option<usize>,
}

pub struct PipelineInputs<'a> {
    pub corpus: &'a Corpus,
    /// Hex SHA-256 of the corpus file bytes.
    pub corpus_digest: String,
    pub gazetteer: &'a Gazetteer,
    pub classifier: &'a dyn Classifier,
    pub vectors: &'a dyn VectorProvider,
}

pub fn run(inputs: &PipelineInputs<'_>, config: PipelineConfig) -> Result<Snapshot, PipelineError> {
    validate_theta(config.theta).map_err(PipelineError::InvalidConfig)?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = config.jobs {
        builder = builder.num_threads(jobs.max(1));
    }
    let pool = builder.build().map_err(|e| PipelineError::WorkerPool(e.to_string()))?;
    pool.install(|| run_in_pool(inputs, config))
}

struct Preprocessed {
    sentences: Vec<Sentence>,
    mentions: Vec<PersonMention>,
}

fn run_in_pool(inputs: &PipelineInputs<'_>, config: PipelineConfig) -> Result<Snapshot, PipelineError> {
    let corpus = inputs.corpus;
    let mut topics = Vec::with_capacity(corpus.topics().len());

    for topic in corpus.topics() {
        let articles: Vec<_> = corpus.topic_articles(topic).collect();

        let pre: Vec<Preprocessed> = articles
            .par_iter()
            .map(|a| {
                let sentences = segment_sentences(&a.id, &a.body);
                let mentions = sentences
                    .iter()
                    .flat_map(|s| detect_mentions(s, inputs.gazetteer))
                    .collect();
                Preprocessed { sentences, mentions }
            })
            .collect();

        let mut mentions: Vec<PersonMention> = pre.iter().flat_map(|p| p.mentions.iter().cloned()).collect();
        let persons = resolve(&mut mentions, inputs.gazetteer);
        let mfa = compute_mfa(&persons)
            .map_err(|source| PipelineError::Persons {
                topic: topic.id.clone(),
                source,
            })?
            .clone();

        let mut by_sentence: BTreeMap<(&str, usize), Vec<&PersonMention>> = BTreeMap::new();
        for m in &mentions {
            by_sentence.entry((m.article_id.as_str(), m.sentence_index)).or_default().push(m);
        }

        let labelled: Vec<(AnalyzedArticle, BTreeMap<usize, PolarityLabel>)> = articles
            .par_iter()
            .zip(&pre)
            .map(|(article, p)| {
                let mut labels = BTreeMap::new();
                let mut sentences = Vec::with_capacity(p.sentences.len());
                for s in &p.sentences {
                    let found = by_sentence.get(&(article.id.as_str(), s.index));
                    let found = found.map(Vec::as_slice).unwrap_or_default();
                    let mut mfa_labels = Vec::new();
                    for m in found.iter().filter(|m| m.person_id.as_deref() == Some(&mfa.person_id)) {
                        let label = inputs
                            .classifier
                            .classify(&s.text, m.span)
                            .map_err(|source| PipelineError::Classifier {
                                article: article.id.clone(),
                                source,
                            })?;
                        mfa_labels.push(label);
                    }
                    let mfa_label = PolarityLabel::mean(&mfa_labels);
                    if let Some(label) = mfa_label {
                        labels.insert(s.index, label);
                    }
                    sentences.push(AnnotatedSentence {
                        index: s.index,
                        span: s.span,
                        text: s.text.clone(),
                        mentions: found
                            .iter()
                            .map(|m| MentionRecord {
                                span: m.span,
                                surface: m.surface.clone(),
                                person_id: m.person_id.clone().expect("resolved"),
                            })
                            .collect(),
                        mfa_label,
                    });
                }
                Ok((
                    AnalyzedArticle {
                        article: (*article).clone(),
                        sentences,
                    },
                    labels,
                ))
            })
            .collect::<Result<_, PipelineError>>()?;

        let polarities: Vec<_> = labelled
            .iter()
            .map(|(a, labels)| aggregate(&a.article.id, &mfa.person_id, labels, config.theta))
            .collect();
        let analysis = analyze_event(&topic.id, &articles, &mfa, &polarities, config.seed, inputs.vectors)?;

        topics.push(TopicSnapshot {
            topic: topic.clone(),
            analysis,
            persons,
            polarities,
            articles: labelled.into_iter().map(|(a, _)| a).collect(),
        });
    }

    let created_at = corpus
        .articles()
        .iter()
        .max_by_key(|a| chrono::DateTime::parse_from_rfc3339(&a.published_at).expect("validated on load"))
        .map(|a| a.published_at.clone())
        .unwrap_or_default();

    Ok(Snapshot {
        format_version: FORMAT_VERSION,
        corpus_digest: inputs.corpus_digest.clone(),
        created_at,
        config: SnapshotConfig {
            theta: config.theta,
            classifier: inputs.classifier.info(),
            seed: config.seed,
        },
        topics,
    })
}
