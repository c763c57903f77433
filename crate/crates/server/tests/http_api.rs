use std::path::{Path, PathBuf};
use std::sync::mpsc;
use std::thread;

use newslens_core::corpus::{parse_corpus, LoadOptions};
use newslens_core::framing::TfIdf;
use newslens_core::pipeline::{run, PipelineConfig, PipelineInputs};
use newslens_core::polarity::{Lexicon, LexiconClassifier, Negations};
use newslens_core::snapshot::{corpus_digest, Snapshot};
use newslens_core::textproc::Gazetteer;
use newslens_core::vizmodel::{
    build_article_view, build_overview, to_json, ExplanationTemplates, HighlightMode, Layout, TagConfig,
};
use newslens_server::{AppState, Catalog, ServeConfig, Server};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tokio::sync::oneshot;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn analyze(corpus_file: &str, gazetteer_file: &str) -> Snapshot {
    let text = std::fs::read_to_string(fixture(corpus_file)).unwrap();
    let corpus = parse_corpus(&text, LoadOptions::default()).unwrap();
    let gazetteer = Gazetteer::load(fixture(gazetteer_file)).unwrap();
    let classifier = LexiconClassifier::new(
        Lexicon::load(fixture("lexicon.tsv")).unwrap(),
        Negations::load(fixture("negations.txt")).unwrap(),
    );
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
            theta: 0.25,
            seed: 5,
            jobs: Some(2),
        },
    )
    .unwrap()
}

struct Running {
    base: String,
    state: AppState,
    stop: Option<oneshot::Sender<()>>,
    handle: Option<thread::JoinHandle<()>>,
}

impl Drop for Running {
    fn drop(&mut self) {
        if let Some(stop) = self.stop.take() {
            let _ = stop.send(());
        }
        if let Some(h) = self.handle.take() {
            let _ = h.join();
        }
    }
}

fn start(snapshots: PathBuf) -> Running {
    let (tx, rx) = mpsc::channel();
    let (stop, stopped) = oneshot::channel::<()>();
    let handle = thread::spawn(move || {
        let runtime = tokio::runtime::Runtime::new().unwrap();
        runtime.block_on(async move {
            let server = Server::bind(ServeConfig {
                bind: "127.0.0.1:0".into(),
                snapshots,
                templates: ExplanationTemplates::default(),
            })
            .await
            .unwrap();
            tx.send((server.local_addr().unwrap(), server.state())).unwrap();
            server
                .run(async {
                    let _ = stopped.await;
                })
                .await
                .unwrap();
        });
    });
    let (addr, state) = rx.recv().unwrap();
    Running {
        base: format!("http://{addr}"),
        state,
        stop: Some(stop),
        handle: Some(handle),
    }
}

fn get(url: &str) -> (u16, String) {
    let agent: ureq::Agent = ureq::Agent::config_builder().http_status_as_error(false).build().into();
    let mut response = agent.get(url).call().unwrap();
    let status = response.status().as_u16();
    (status, response.body_mut().read_to_string().unwrap())
}

fn study_dir() -> (tempfile::TempDir, Snapshot) {
    let dir = tempfile::tempdir().unwrap();
    let snapshot = analyze("study.jsonl", "study.gazetteer.tsv");
    snapshot.write(dir.path().join("study.json")).unwrap();
    (dir, snapshot)
}

#[test]
fn health_and_topics() {
    let (dir, _) = study_dir();
    let server = start(dir.path().to_path_buf());
    assert_eq!(get(&format!("{}/health", server.base)), (200, "ok".to_string()));
    let (status, body) = get(&format!("{}/topics", server.base));
    assert_eq!(status, 200);
    let topics: serde_json::Value = serde_json::from_str(&body).unwrap();
    let ids: Vec<&str> = topics.as_array().unwrap().iter().map(|t| t["id"].as_str().unwrap()).collect();
    assert_eq!(ids, ["bushfires", "debt_ceiling", "gun_control"]);
    assert!(topics.as_array().unwrap().iter().all(|t| t["article_count"] == 10));
}

#[test]
fn bodies_match_in_process_models() {
    let (dir, snapshot) = study_dir();
    let server = start(dir.path().to_path_buf());
    let templates = ExplanationTemplates::default();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..30 {
        let topic = snapshot.topics.choose(&mut rng).unwrap();
        let layout = *Layout::ALL.choose(&mut rng).unwrap();
        let tags: TagConfig = TagConfig::QUERY_VALUES.choose(&mut rng).unwrap().parse().unwrap();
        let seed: u64 = rng.random_range(0..1000);
        let (status, body) = get(&format!(
            "{}/topics/{}/overview?layout={layout}&tags={}&seed={seed}",
            server.base,
            topic.topic.id,
            tags.as_query()
        ));
        assert_eq!(status, 200);
        assert_eq!(body, to_json(&build_overview(topic, layout, tags, seed, &templates)));

        let article = &topic.topic.article_ids.choose(&mut rng).unwrap();
        let mode = *HighlightMode::ALL.choose(&mut rng).unwrap();
        let (status, body) = get(&format!(
            "{}/articles/{article}/view?highlight={mode}&tags={}",
            server.base,
            tags.as_query()
        ));
        assert_eq!(status, 200);
        assert_eq!(body, to_json(&build_article_view(topic, article, mode, tags).unwrap()));
    }
}

#[test]
fn defaults_apply_when_parameters_are_omitted() {
    let (dir, snapshot) = study_dir();
    let server = start(dir.path().to_path_buf());
    let topic = &snapshot.topics[1];
    let (_, body) = get(&format!("{}/topics/{}/overview", server.base, topic.topic.id));
    let want = build_overview(topic, Layout::Plain, TagConfig::NONE, topic.analysis.seed, &ExplanationTemplates::default());
    assert_eq!(body, to_json(&want));
    let id = &topic.topic.article_ids[0];
    let (_, body) = get(&format!("{}/articles/{id}/view", server.base));
    assert_eq!(body, to_json(&build_article_view(topic, id, HighlightMode::Disabled, TagConfig::NONE).unwrap()));
}

#[test]
fn errors_are_json() {
    let (dir, _) = study_dir();
    let server = start(dir.path().to_path_buf());
    for (path, status, kind) in [
        ("/topics/nope/overview", 404, "not_found"),
        ("/articles/nope/view?highlight=three", 404, "not_found"),
        ("/topics/bushfires/overview?layout=grid", 400, "bad_request"),
        ("/topics/bushfires/overview?tags=all", 400, "bad_request"),
        ("/topics/bushfires/overview?seed=-1", 400, "bad_request"),
        ("/articles/bf-01/view?highlight=four", 400, "bad_request"),
        ("/nowhere", 404, "not_found"),
    ] {
        let (got, body) = get(&format!("{}{path}", server.base));
        assert_eq!(got, status, "{path}");
        let v: serde_json::Value = serde_json::from_str(&body).unwrap();
        assert_eq!(v["error"], kind, "{path}");
        assert!(v["detail"].is_string());
    }
}

#[test]
fn reload_swaps_the_catalog_and_keeps_it_on_failure() {
    let (dir, _) = study_dir();
    let server = start(dir.path().to_path_buf());
    let extra = analyze("mini.jsonl", "mini.gazetteer.tsv");
    extra.write(dir.path().join("mini.json")).unwrap();
    newslens_server::reload(&server.state, dir.path()).unwrap();
    let (_, body) = get(&format!("{}/topics", server.base));
    let topics: serde_json::Value = serde_json::from_str(&body).unwrap();
    assert_eq!(topics.as_array().unwrap().len(), 4);

    std::fs::write(dir.path().join("zz-broken.json"), "{").unwrap();
    assert!(newslens_server::reload(&server.state, dir.path()).is_err());
    assert_eq!(server.state.catalog().topics().len(), 4);
}

#[test]
fn duplicate_topics_and_empty_dirs_are_rejected() {
    let snapshot = analyze("study.jsonl", "study.gazetteer.tsv");
    assert!(Catalog::from_snapshots(vec![snapshot.clone(), snapshot]).is_err());
    let empty = tempfile::tempdir().unwrap();
    assert!(Catalog::load(empty.path()).is_err());
}
