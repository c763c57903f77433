mod common;

use common::synth;
use newslens_core::corpus::{parse_corpus, LoadOptions};
use newslens_core::persons::{compute_mfa, resolve, Person};
use newslens_core::textproc::{detect_mentions, segment_sentences, Gazetteer, PersonMention};
use proptest::prelude::*;

fn persons_of(jsonl: &str) -> (Vec<Person>, Vec<PersonMention>) {
    let corpus = parse_corpus(jsonl, LoadOptions::default()).unwrap();
    let gazetteer = Gazetteer::new();
    let mut mentions: Vec<PersonMention> = corpus
        .articles()
        .iter()
        .flat_map(|a| segment_sentences(&a.id, &a.body))
        .flat_map(|s| detect_mentions(&s, &gazetteer))
        .collect();
    let persons = resolve(&mut mentions, &gazetteer);
    (persons, mentions)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn mfa_matches_brute_force_tally(seed in any::<u64>()) {
        let synth = synth::corpus(seed);
        let (persons, _) = persons_of(&synth.jsonl);
        let recount: std::collections::BTreeMap<String, usize> =
            persons.iter().map(|p| (p.canonical_name.clone(), p.total_mentions)).collect();
        prop_assert_eq!(&recount, &synth.tally);
        let mfa = compute_mfa(&persons).unwrap();
        prop_assert_eq!(Some(mfa.canonical_name.clone()), synth::oracle_mfa(&synth.tally));
    }

    #[test]
    fn every_mention_belongs_to_exactly_one_person(seed in any::<u64>()) {
        let synth = synth::corpus(seed);
        let (persons, mentions) = persons_of(&synth.jsonl);
        for m in &mentions {
            let id = m.person_id.as_deref().unwrap();
            let owners = persons.iter().filter(|p| p.person_id == id).count();
            prop_assert_eq!(owners, 1);
            let p = persons.iter().find(|p| p.person_id == id).unwrap();
            prop_assert!(p.aliases.contains(&m.surface));
        }
        for p in &persons {
            prop_assert_eq!(p.total_mentions, p.mention_counts.values().sum::<usize>());
            prop_assert!(p.aliases.contains(&p.canonical_name));
        }
    }

    #[test]
    fn article_order_does_not_change_the_mfa(seed in any::<u64>(), rotate in 0usize..10) {
        let synth = synth::corpus(seed);
        let mut lines: Vec<&str> = synth.jsonl.lines().collect();
        let n = lines.len();
        lines.rotate_left(rotate % n);
        lines.reverse();
        let (a, _) = persons_of(&synth.jsonl);
        let (b, _) = persons_of(&lines.join("\n"));
        prop_assert_eq!(&compute_mfa(&a).unwrap().canonical_name, &compute_mfa(&b).unwrap().canonical_name);
    }
}

#[test]
fn study_fixture_mfas() {
    let snapshot = common::study();
    let names: Vec<(&str, &str)> = snapshot
        .topics
        .iter()
        .map(|t| (t.topic.id.as_str(), t.analysis.mfa_name.as_str()))
        .collect();
    assert_eq!(
        names,
        [
            ("bushfires", "Scott Mallory"),
            ("debt_ceiling", "Daniel Harlow"),
            ("gun_control", "Ellen Whitaker")
        ]
    );
}
