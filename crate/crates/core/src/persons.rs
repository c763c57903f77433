//! Cross-document person resolution and the most frequent actor (MFA).
//!
//! Resolution is name-based. Each mention is first mapped to a key: its
//! gazetteer canonical name if the surface is listed, else the surface
//! itself. Multi-token keys form clusters by exact match. Single-token keys
//! are then attached, in corpus order:
//!
//! 1. to a single-token cluster with the same key, if one exists;
//! 2. to the only multi-token cluster whose last token equals the key;
//! 3. if several multi-token clusters qualify, to the one whose full-name
//!    mention most recently preceded it in the same article, else to the one
//!    with the most mentions so far (ties: smaller canonical name);
//! 4. otherwise to a new single-token cluster.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::textproc::{tokenize, Gazetteer, PersonMention};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PersonsError {
    #[error("no person with at least one mention")]
    NoPersons,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Person {
    pub person_id: String,
    /// Longest full-name surface observed for this person.
    pub canonical_name: String,
    pub aliases: BTreeSet<String>,
    pub mention_counts: BTreeMap<String, usize>,
    pub total_mentions: usize,
}

struct Cluster {
    key: String,
    multi_token: bool,
    first_seen: usize,
    members: Vec<usize>,
}

/// Resolves mentions into persons and fills `person_id` on every mention.
///
/// `mentions` may arrive in any order; they are processed by
/// `(article_id, sentence_index, span.begin)`, which matches corpus order
/// within a topic. Person ids are `p1`, `p2`, … by first appearance and are
/// unique within one call.
pub fn resolve(mentions: &mut [PersonMention], gazetteer: &Gazetteer) -> Vec<Person> {
    let mut order: Vec<usize> = (0..mentions.len()).collect();
    order.sort_by(|&a, &b| {
        let (ma, mb) = (&mentions[a], &mentions[b]);
        (&ma.article_id, ma.sentence_index, ma.span.begin).cmp(&(&mb.article_id, mb.sentence_index, mb.span.begin))
    });
    let rank: HashMap<usize, usize> = order.iter().enumerate().map(|(r, &m)| (m, r)).collect();

    let keys: Vec<String> = mentions
        .iter()
        .map(|m| gazetteer.canonical(&m.surface).unwrap_or(&m.surface).to_string())
        .collect();
    let last_tokens: Vec<Option<String>> = keys
        .iter()
        .map(|k| {
            let tokens = tokenize(k);
            (tokens.len() > 1).then(|| tokens.last().map(|t| t.text.clone())).flatten()
        })
        .collect();

    let mut clusters: Vec<Cluster> = Vec::new();
    let mut by_key: HashMap<String, usize> = HashMap::new();
    let mut assignment: Vec<Option<usize>> = vec![None; mentions.len()];

    // Full names first so that earlier short forms can still attach to them.
    for &m in &order {
        if last_tokens[m].is_none() {
            continue;
        }
        let c = *by_key.entry(keys[m].clone()).or_insert_with(|| {
            clusters.push(Cluster {
                key: keys[m].clone(),
                multi_token: true,
                first_seen: rank[&m],
                members: Vec::new(),
            });
            clusters.len() - 1
        });
        clusters[c].members.push(m);
        assignment[m] = Some(c);
    }

    let mut by_last_token: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (c, cluster) in clusters.iter().enumerate() {
        if let Some(last) = last_tokens[cluster.members[0]].as_deref() {
            by_last_token.entry(last).or_default().push(c);
        }
    }
    let by_last_token: BTreeMap<String, Vec<usize>> =
        by_last_token.into_iter().map(|(k, v)| (k.to_string(), v)).collect();

    for (pos, &m) in order.iter().enumerate() {
        if last_tokens[m].is_some() {
            continue;
        }
        let key = &keys[m];
        let target = if let Some(&c) = by_key.get(key) {
            c
        } else {
            match by_last_token.get(key).map(Vec::as_slice) {
                Some([only]) => *only,
                Some(candidates) if !candidates.is_empty() => {
                    pick_among(candidates, m, pos, &order, mentions, &assignment, &clusters, &last_tokens)
                }
                _ => {
                    clusters.push(Cluster {
                        key: key.clone(),
                        multi_token: false,
                        first_seen: rank[&m],
                        members: Vec::new(),
                    });
                    let c = clusters.len() - 1;
                    by_key.insert(key.clone(), c);
                    c
                }
            }
        };
        clusters[target].members.push(m);
        assignment[m] = Some(target);
    }

    let mut cluster_order: Vec<usize> = (0..clusters.len()).collect();
    cluster_order.sort_by_key(|&c| clusters[c].first_seen);

    let mut persons = Vec::with_capacity(clusters.len());
    for (n, &c) in cluster_order.iter().enumerate() {
        let cluster = &clusters[c];
        let person_id = format!("p{}", n + 1);
        let mut aliases = BTreeSet::new();
        let mut mention_counts: BTreeMap<String, usize> = BTreeMap::new();
        for &m in &cluster.members {
            aliases.insert(mentions[m].surface.clone());
            *mention_counts.entry(mentions[m].article_id.clone()).or_default() += 1;
            mentions[m].person_id = Some(person_id.clone());
        }
        let canonical_name = canonical_name(&aliases, &cluster.key, cluster.multi_token);
        persons.push(Person {
            person_id,
            canonical_name,
            aliases,
            mention_counts,
            total_mentions: cluster.members.len(),
        });
    }
    persons
}

#[allow(clippy::too_many_arguments)]
fn pick_among(
    candidates: &[usize],
    mention: usize,
    pos: usize,
    order: &[usize],
    mentions: &[PersonMention],
    assignment: &[Option<usize>],
    clusters: &[Cluster],
    last_tokens: &[Option<String>],
) -> usize {
    let article = &mentions[mention].article_id;
    let antecedent = order[..pos]
        .iter()
        .rev()
        .take_while(|&&p| &mentions[p].article_id == article)
        .filter(|&&p| last_tokens[p].is_some())
        .find_map(|&p| assignment[p].filter(|c| candidates.contains(c)));
    if let Some(c) = antecedent {
        return c;
    }
    *candidates
        .iter()
        .max_by(|&&a, &&b| {
            clusters[a]
                .members
                .len()
                .cmp(&clusters[b].members.len())
                .then_with(|| clusters[b].key.cmp(&clusters[a].key))
        })
        .expect("at least two candidates")
}

/// Longest surface by token count, then by length; ties go to the
/// lexicographically smaller string.
fn canonical_name(aliases: &BTreeSet<String>, key: &str, multi_token: bool) -> String {
    aliases
        .iter()
        .max_by(|a, b| {
            let weight = |s: &str| (tokenize(s).len(), s.chars().count());
            weight(a).cmp(&weight(b)).then_with(|| b.cmp(a))
        })
        .cloned()
        .unwrap_or_else(|| {
            debug_assert!(!multi_token);
            key.to_string()
        })
}

/// The person with the most mentions; ties go to the lexicographically
/// smallest canonical name.
pub fn compute_mfa(persons: &[Person]) -> Result<&Person, PersonsError> {
    persons
        .iter()
        .filter(|p| p.total_mentions > 0)
        .max_by(|a, b| {
            a.total_mentions
                .cmp(&b.total_mentions)
                .then_with(|| b.canonical_name.cmp(&a.canonical_name))
        })
        .ok_or(PersonsError::NoPersons)
}
