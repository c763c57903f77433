mod common;

use std::collections::{BTreeMap, HashMap};

use newslens_core::corpus::{Article, Orientation};
use newslens_core::framing::{analyze_event, TfIdf, VectorProvider};
use newslens_core::persons::Person;
use newslens_core::polarity::{ArticlePolarity, FrameGroup, PolarityCounts};
use proptest::prelude::*;

/// Hands out fixed vectors by article id.
struct Fixed(BTreeMap<String, Vec<f64>>);

impl VectorProvider for Fixed {
    fn vectors(&self, articles: &[&Article]) -> Vec<Vec<f64>> {
        articles.iter().map(|a| self.0[&a.id].clone()).collect()
    }
}

fn article(id: &str) -> Article {
    Article {
        id: id.into(),
        topic_id: "t".into(),
        outlet: "o".into(),
        orientation: Orientation::Center,
        title: id.into(),
        excerpt: None,
        body: format!("Body of {id}."),
        published_at: "2020-01-01T00:00:00Z".into(),
        url: None,
    }
}

fn polarity(id: &str, group: FrameGroup) -> ArticlePolarity {
    ArticlePolarity {
        article_id: id.into(),
        person_id: "p1".into(),
        counts: PolarityCounts::default(),
        score: 0.0,
        group,
    }
}

fn person() -> Person {
    Person {
        person_id: "p1".into(),
        canonical_name: "Jane Doe".into(),
        aliases: ["Jane Doe".to_string()].into(),
        mention_counts: BTreeMap::new(),
        total_mentions: 1,
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn unit(v: &[f64]) -> Vec<f64> {
    let n = dot(v, v).sqrt();
    v.iter().map(|x| if n > 0.0 { x / n } else { 0.0 }).collect()
}

/// Cosine of each vector with the mean of `members`, by brute force.
fn relevance(vectors: &BTreeMap<String, Vec<f64>>, members: &[String]) -> BTreeMap<String, f64> {
    let dim = vectors.values().next().unwrap().len();
    let mut mean = vec![0.0; dim];
    for id in members {
        for (m, x) in mean.iter_mut().zip(&vectors[id]) {
            *m += x / members.len() as f64;
        }
    }
    let mean = unit(&mean);
    members
        .iter()
        .map(|id| (id.clone(), dot(&unit(&vectors[id]), &mean).clamp(0.0, 1.0)))
        .collect()
}

fn argmax(scores: &BTreeMap<String, f64>) -> String {
    // BTreeMap iterates ids ascending, so the first maximum has the smaller id
    let best = scores.values().copied().fold(f64::NEG_INFINITY, f64::max);
    scores.iter().find(|(_, &s)| s == best).unwrap().0.clone()
}

#[test]
fn four_article_ordering() {
    let vectors: BTreeMap<String, Vec<f64>> = [
        ("a", vec![1.0, 0.0]),
        ("b", vec![0.0, 1.0]),
        ("c", vec![1.0, 1.0]),
        ("d", vec![2.0, 1.0]),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), unit(&v)))
    .collect();
    let articles: Vec<Article> = vectors.keys().map(|id| article(id)).collect();
    let refs: Vec<&Article> = articles.iter().collect();
    let pols: Vec<ArticlePolarity> = vectors.keys().map(|id| polarity(id, FrameGroup::Positive)).collect();
    let analysis = analyze_event("t", &refs, &person(), &pols, 0, &Fixed(vectors)).unwrap();
    // mean of the unit vectors points at about 37.5 degrees; c (45) is closest, then d (26.6)
    assert_eq!(analysis.main_article, "c");
    assert_eq!(analysis.further_articles, ["d", "a", "b"]);
    assert_eq!(analysis.representatives.positive.as_deref(), Some("c"));
}

fn scenario() -> impl Strategy<Value = (Vec<Vec<f64>>, Vec<usize>)> {
    (1usize..9).prop_flat_map(|n| {
        (
            proptest::collection::vec(proptest::collection::vec(0.0f64..1.0, 4), n),
            proptest::collection::vec(0usize..4, n),
        )
    })
}

const GROUPS: [FrameGroup; 4] = [FrameGroup::Positive, FrameGroup::Ambivalent, FrameGroup::Negative, FrameGroup::None];

fn run(vectors: &[Vec<f64>], groups: &[usize]) -> (BTreeMap<String, Vec<f64>>, newslens_core::framing::EventAnalysis) {
    let ids: Vec<String> = (0..vectors.len()).map(|i| format!("a{i}")).collect();
    let map: BTreeMap<String, Vec<f64>> = ids.iter().cloned().zip(vectors.iter().cloned()).collect();
    let articles: Vec<Article> = ids.iter().map(|id| article(id)).collect();
    let refs: Vec<&Article> = articles.iter().collect();
    let pols: Vec<ArticlePolarity> = ids.iter().zip(groups).map(|(id, &g)| polarity(id, GROUPS[g])).collect();
    let analysis = analyze_event("t", &refs, &person(), &pols, 0, &Fixed(map.clone())).unwrap();
    (map, analysis)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn relevance_matches_brute_force((vectors, groups) in scenario()) {
        let (map, analysis) = run(&vectors, &groups);
        let all: Vec<String> = map.keys().cloned().collect();
        let expected = relevance(&map, &all);
        for (id, s) in &expected {
            prop_assert!((analysis.event_relevance[id] - s).abs() < 1e-9);
        }
        let best = expected.values().copied().fold(f64::NEG_INFINITY, f64::max);
        prop_assert!((expected[&analysis.main_article] - best).abs() < 1e-9);

        for g in FrameGroup::POLAR {
            let members: Vec<String> = analysis.groups.get(g).to_vec();
            let want: Vec<String> = all.iter().zip(&groups).filter(|(_, &k)| GROUPS[k] == g).map(|(id, _)| id.clone()).collect();
            prop_assert_eq!(&members, &want);
            if members.is_empty() {
                prop_assert!(analysis.representatives.get(g).is_none());
                continue;
            }
            let rel = relevance(&map, &members);
            let rep = analysis.representatives.get(g).unwrap();
            prop_assert!((rel[rep] - rel[&argmax(&rel)]).abs() < 1e-9);
        }
        // further: everything except main and representatives, by relevance
        prop_assert!(!analysis.further_articles.contains(&analysis.main_article));
        for pair in analysis.further_articles.windows(2) {
            prop_assert!(analysis.event_relevance[&pair[0]] >= analysis.event_relevance[&pair[1]]);
        }
    }

    #[test]
    fn uniform_scaling_keeps_relevance((vectors, groups) in scenario(), factor in 0.1f64..50.0) {
        let scaled: Vec<Vec<f64>> = vectors.iter().map(|v| v.iter().map(|x| x * factor).collect()).collect();
        let (_, a) = run(&vectors, &groups);
        let (_, b) = run(&scaled, &groups);
        for (id, s) in &a.event_relevance {
            prop_assert!((b.event_relevance[id] - s).abs() < 1e-9);
        }
        for (id, s) in &a.group_relevance {
            prop_assert!((b.group_relevance[id] - s).abs() < 1e-9);
        }
    }
}

#[test]
fn repeating_an_article_body_keeps_its_tfidf_vector() {
    let mut a = article("a");
    a.title = String::new();
    a.body = "Budget talks stall again in the capital.".into();
    let mut doubled = a.clone();
    doubled.body = format!("{} {}", a.body, a.body);
    let other = Article {
        body: "Talks resume with new budget figures.".into(),
        ..article("b")
    };
    let x = TfIdf.vectors(&[&a, &other]);
    let y = TfIdf.vectors(&[&doubled, &other]);
    for (p, q) in x[0].iter().zip(&y[0]) {
        assert!((p - q).abs() < 1e-12);
    }
}

/// Independent TF-IDF: hash maps, no shared code beyond tokenization.
fn tfidf_oracle(articles: &[&Article]) -> BTreeMap<String, HashMap<String, f64>> {
    let tfs: Vec<HashMap<String, f64>> = articles
        .iter()
        .map(|a| {
            let mut tf = HashMap::new();
            for t in TfIdf::terms(a) {
                *tf.entry(t).or_insert(0.0) += 1.0;
            }
            tf
        })
        .collect();
    let n = articles.len() as f64;
    let mut df: HashMap<&str, f64> = HashMap::new();
    for tf in &tfs {
        for t in tf.keys() {
            *df.entry(t).or_insert(0.0) += 1.0;
        }
    }
    articles
        .iter()
        .zip(&tfs)
        .map(|(a, tf)| {
            let mut v: HashMap<String, f64> = tf
                .iter()
                .map(|(t, c)| (t.clone(), c * (((1.0 + n) / (1.0 + df[t.as_str()])).ln() + 1.0)))
                .collect();
            let norm = v.values().map(|x| x * x).sum::<f64>().sqrt();
            v.values_mut().for_each(|x| *x /= norm);
            (a.id.clone(), v)
        })
        .collect()
}

#[test]
fn study_main_articles_match_an_independent_tfidf() {
    let corpus = common::load("study.jsonl");
    let snapshot = common::study();
    for topic in &snapshot.topics {
        let articles: Vec<&Article> = corpus.articles().iter().filter(|a| a.topic_id == topic.topic.id).collect();
        let vectors = tfidf_oracle(&articles);
        let mut mean: HashMap<String, f64> = HashMap::new();
        for v in vectors.values() {
            for (t, x) in v {
                *mean.entry(t.clone()).or_insert(0.0) += x / articles.len() as f64;
            }
        }
        let norm = mean.values().map(|x| x * x).sum::<f64>().sqrt();
        let scores: BTreeMap<String, f64> = vectors
            .iter()
            .map(|(id, v)| (id.clone(), v.iter().map(|(t, x)| x * mean[t] / norm).sum()))
            .collect();
        assert_eq!(topic.analysis.main_article, argmax(&scores), "topic {}", topic.topic.id);
        for (id, s) in &scores {
            assert!((topic.analysis.event_relevance[id] - s).abs() < 1e-9);
        }
    }
}

#[test]
fn pipeline_is_deterministic_across_worker_counts() {
    let one = common::analyze_with("study.jsonl", "study.gazetteer.tsv", 0.25, 7, 1);
    let four = common::analyze_with("study.jsonl", "study.gazetteer.tsv", 0.25, 7, 4);
    assert_eq!(one.to_json_pretty(), four.to_json_pretty());
    assert_eq!(one.to_json_pretty(), common::analyze_with("study.jsonl", "study.gazetteer.tsv", 0.25, 7, 4).to_json_pretty());
}
