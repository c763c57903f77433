#![allow(dead_code)]

use std::path::PathBuf;

use newslens_core::corpus::{parse_corpus, Corpus, LoadOptions};
use newslens_core::framing::TfIdf;
use newslens_core::pipeline::{run, PipelineConfig, PipelineInputs};
use newslens_core::polarity::{Lexicon, LexiconClassifier, Negations, DEFAULT_THETA};
use newslens_core::snapshot::{corpus_digest, Snapshot};
use newslens_core::textproc::Gazetteer;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

pub fn read_fixture(name: &str) -> String {
    std::fs::read_to_string(fixture(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn load(name: &str) -> Corpus {
    parse_corpus(&read_fixture(name), LoadOptions::default()).unwrap()
}

pub fn lexicon_classifier() -> LexiconClassifier {
    LexiconClassifier::new(
        Lexicon::parse(&read_fixture("lexicon.tsv")).unwrap(),
        Negations::parse(&read_fixture("negations.txt")),
    )
}

pub fn analyze_with(corpus_file: &str, gazetteer_file: &str, theta: f64, seed: u64, jobs: usize) -> Snapshot {
    let text = read_fixture(corpus_file);
    let corpus = parse_corpus(&text, LoadOptions::default()).unwrap();
    let gazetteer = Gazetteer::parse(&read_fixture(gazetteer_file)).unwrap();
    let classifier = lexicon_classifier();
    let inputs = PipelineInputs {
        corpus: &corpus,
        corpus_digest: corpus_digest(text.as_bytes()),
        gazetteer: &gazetteer,
        classifier: &classifier,
        vectors: &TfIdf,
    };
    run(
        &inputs,
        PipelineConfig {
            theta,
            seed,
            jobs: Some(jobs),
        },
    )
    .unwrap()
}

pub fn study() -> Snapshot {
    analyze_with("study.jsonl", "study.gazetteer.tsv", DEFAULT_THETA, 0, 2)
}

pub fn mini() -> Snapshot {
    analyze_with("mini.jsonl", "mini.gazetteer.tsv", DEFAULT_THETA, 0, 2)
}

pub mod http;
pub mod synth;
