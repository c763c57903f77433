//! Seeded generators for synthetic corpora and label sets, with the
//! ground truth needed by brute-force oracles.

use std::collections::BTreeMap;

use newslens_core::polarity::{Polarity, PolarityCounts};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const NAMES: [&str; 8] = [
    "Alice Moreau",
    "Bruno Castell",
    "Clara Ingram",
    "Dmitri Okafor",
    "Elena Vasquez",
    "Felix Hartmann",
    "Greta Lindholm",
    "Hugo Tanaka",
];

pub struct SynthCorpus {
    pub jsonl: String,
    /// Full name → number of generated mentions.
    pub tally: BTreeMap<String, usize>,
}

/// At most 10 articles and 6 persons. Every person is mentioned by full
/// name at least once, and sometimes by last name only.
pub fn corpus(seed: u64) -> SynthCorpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_persons = rng.random_range(1..=6);
    let people: Vec<&str> = NAMES.choose_multiple(&mut rng, n_persons).copied().collect();
    let n_articles = rng.random_range(1..=10);

    // (article, sentence) → mentioned person indices
    let mut plan: Vec<Vec<Vec<usize>>> = Vec::new();
    for _ in 0..n_articles {
        let n_sentences = rng.random_range(1..=6);
        let mut article = Vec::new();
        for _ in 0..n_sentences {
            let k = rng.random_range(0..=2.min(people.len()));
            let chosen: Vec<usize> = (0..people.len()).collect::<Vec<_>>().choose_multiple(&mut rng, k).copied().collect();
            article.push(chosen);
        }
        plan.push(article);
    }
    if plan.iter().flatten().all(Vec::is_empty) {
        plan[0][0].push(rng.random_range(0..people.len()));
    }

    let mut full_seen = vec![false; people.len()];
    let mut tally = BTreeMap::new();
    let mut lines = Vec::new();
    for (a, sentences) in plan.iter().enumerate() {
        let mut body = Vec::new();
        for persons in sentences {
            let mut surfaces = Vec::new();
            for &p in persons {
                let use_full = !full_seen[p] || rng.random_bool(0.5);
                full_seen[p] |= use_full;
                let name = people[p];
                surfaces.push(if use_full {
                    name.to_string()
                } else {
                    name.rsplit(' ').next().unwrap().to_string()
                });
                *tally.entry(name.to_string()).or_insert(0) += 1;
            }
            body.push(match surfaces.as_slice() {
                [] => "The committee met again on schedule.".to_string(),
                [x] => format!("Reporters asked {x} about the plan."),
                [x, y] => format!("Reporters saw {x} meet {y} downtown."),
                _ => unreachable!(),
            });
        }
        let orientation = ["left", "center", "right"][rng.random_range(0..3)];
        lines.push(format!(
            r#"{{"id":"s-{:02}","topic_id":"synthetic","outlet":"Outlet {a}","orientation":"{orientation}","title":"Story {a}","body":"{}","published_at":"2021-01-01T00:00:00Z"}}"#,
            a + 1,
            body.join(" ")
        ));
    }
    SynthCorpus {
        jsonl: lines.join("\n"),
        tally,
    }
}

/// Argmax of a tally; ties go to the lexicographically smallest name.
pub fn oracle_mfa(tally: &BTreeMap<String, usize>) -> Option<String> {
    let best = tally.values().copied().max()?;
    tally.iter().find(|(_, &n)| n == best).map(|(name, _)| name.clone())
}

/// Random per-sentence labels, possibly with the same sentence listed more
/// than once (several mentions in one sentence share its label).
pub fn label_set(seed: u64) -> Vec<(usize, Polarity)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_sentences = rng.random_range(0..=12);
    let mut out = Vec::new();
    for i in 0..n_sentences {
        let label = [Polarity::Positive, Polarity::Neutral, Polarity::Negative][rng.random_range(0..3)];
        for _ in 0..rng.random_range(1..=3) {
            out.push((i, label));
        }
    }
    out
}

/// Counts computed from scratch, one per distinct sentence.
pub fn recount(labels: &[(usize, Polarity)]) -> PolarityCounts {
    let distinct: BTreeMap<usize, Polarity> = labels.iter().copied().collect();
    let mut c = PolarityCounts::default();
    for l in distinct.values() {
        match l {
            Polarity::Positive => c.positive += 1,
            Polarity::Negative => c.negative += 1,
            Polarity::Neutral => c.neutral += 1,
        }
    }
    c
}

/// Score and group straight from the stated rule.
pub fn oracle_group(c: PolarityCounts, theta: f64) -> (f64, &'static str) {
    let (p, n) = (c.positive as f64, c.negative as f64);
    let s = (p - n) / (p + n).max(1.0);
    let group = if c.positive + c.negative + c.neutral == 0 {
        "none"
    } else if s >= theta {
        "positive"
    } else if s <= -theta {
        "negative"
    } else {
        "ambivalent"
    };
    (s, group)
}
