mod common;

use std::time::Duration;

use common::http;
use newslens_core::corpus::{fetch_article, FetchError, FetchOptions};
use newslens_core::polarity::{Classifier, FallbackClassifier, Polarity, PolarityError, SidecarClassifier};
use newslens_core::Span;

fn options() -> FetchOptions {
    FetchOptions {
        timeout: Duration::from_secs(5),
        ..FetchOptions::default()
    }
}

#[test]
fn fetch_extracts_the_main_block() {
    let paragraph = "The council voted on Tuesday to extend the evacuation order for the valley. ".repeat(7);
    assert!(paragraph.len() >= 500);
    let page = format!(
        "<html><head><title>Valley Orders Extended</title></head><body><nav>Home | News</nav>\
         <article><p>{paragraph}</p></article><footer>Contact</footer></body></html>"
    );
    let base = http::serve(move |_, _| (200, page.clone()));
    let draft = fetch_article(&format!("{base}/story"), &options()).unwrap();
    assert_eq!(draft.title, "Valley Orders Extended");
    assert_eq!(draft.body, paragraph.trim());
}

#[test]
fn fetch_rejects_short_pages() {
    let base = http::serve(|_, _| (200, "<html><body><p>Too short.</p></body></html>".into()));
    assert!(matches!(
        fetch_article(&base, &options()),
        Err(FetchError::ExtractionEmpty { longest: 10, .. })
    ));
}

#[test]
fn fetch_reports_transport_and_status_failures() {
    assert!(matches!(
        fetch_article(&http::unreachable(), &options()),
        Err(FetchError::FetchFailed { status: None, .. })
    ));
    let base = http::serve(|_, _| (404, "gone".into()));
    assert!(matches!(
        fetch_article(&base, &options()),
        Err(FetchError::FetchFailed { status: Some(404), .. })
    ));
    assert!(matches!(fetch_article("ftp://example.org/x", &options()), Err(FetchError::InvalidUrl(_))));
    let offline = FetchOptions {
        allow_network: false,
        ..options()
    };
    assert!(matches!(fetch_article("http://example.org/", &offline), Err(FetchError::NetworkDisabled)));
}

/// Mirrors the sidecar stub: validates the target and echoes a positive
/// label whose mass depends on the target length.
fn stub(_: &str, body: &str) -> (u16, String) {
    let request: serde_json::Value = serde_json::from_str(body).unwrap();
    let sentence = request["sentence"].as_str().unwrap();
    let (b, e) = (request["target_begin"].as_u64().unwrap(), request["target_end"].as_u64().unwrap());
    if b >= e || e as usize > sentence.chars().count() {
        return (400, r#"{"error":"invalid target"}"#.into());
    }
    let target: String = sentence.chars().skip(b as usize).take((e - b) as usize).collect();
    if target != "José Núñez" {
        return (400, r#"{"error":"unexpected target"}"#.into());
    }
    (200, r#"{"positive":0.7,"neutral":0.2,"negative":0.1}"#.into())
}

const SENTENCE: &str = "Ayer José Núñez ganó.";

#[test]
fn sidecar_sends_char_offsets_and_reads_probabilities() {
    let base = http::serve(stub);
    let client = SidecarClassifier::new(&base, Duration::from_secs(5));
    let label = client.classify(SENTENCE, Span::new(5, 15)).unwrap();
    assert_eq!(label.label, Polarity::Positive);
    assert!((label.probabilities.positive - 0.7).abs() < 1e-12);
}

#[test]
fn sidecar_failures_are_unavailable() {
    let base = http::serve(stub);
    let client = SidecarClassifier::new(&base, Duration::from_secs(5));
    // wrong target → stub answers 400
    assert!(matches!(
        client.classify(SENTENCE, Span::new(0, 4)),
        Err(PolarityError::SidecarUnavailable(_))
    ));
    let bad_sum = http::serve(|_, _| (200, r#"{"positive":0.7,"neutral":0.7,"negative":0.1}"#.into()));
    assert!(matches!(
        SidecarClassifier::new(&bad_sum, Duration::from_secs(5)).classify(SENTENCE, Span::new(5, 15)),
        Err(PolarityError::SidecarUnavailable(_))
    ));
    let garbage = http::serve(|_, _| (200, "not json".into()));
    assert!(matches!(
        SidecarClassifier::new(&garbage, Duration::from_secs(5)).classify(SENTENCE, Span::new(5, 15)),
        Err(PolarityError::SidecarUnavailable(_))
    ));
    assert!(matches!(
        SidecarClassifier::new(&http::unreachable(), Duration::from_secs(5)).classify(SENTENCE, Span::new(5, 15)),
        Err(PolarityError::SidecarUnavailable(_))
    ));
    // invalid targets never reach the network
    assert!(matches!(
        client.classify(SENTENCE, Span::new(5, 99)),
        Err(PolarityError::InvalidTarget { .. })
    ));
}

#[test]
fn fallback_uses_the_lexicon_when_the_sidecar_is_down() {
    let lexicon = common::lexicon_classifier();
    let s = "Critics praised Jane Doe for the plan.";
    let target = Span::new(16, 24);
    let expected = lexicon.classify(s, target).unwrap();
    let down = FallbackClassifier::new(
        SidecarClassifier::new(&http::unreachable(), Duration::from_secs(2)),
        common::lexicon_classifier(),
    );
    assert_eq!(down.classify(s, target).unwrap(), expected);
}

/// Runs only when a real sidecar is reachable.
#[test]
fn live_sidecar_when_configured() {
    let Ok(url) = std::env::var("NEWSLENS_SIDECAR_URL") else {
        eprintln!("NEWSLENS_SIDECAR_URL not set, skipping");
        return;
    };
    let client = SidecarClassifier::new(&url, Duration::from_secs(10));
    let label = client.classify("Critics praised Jane Doe for the plan.", Span::new(16, 24)).unwrap();
    let p = label.probabilities;
    assert!((p.positive + p.neutral + p.negative - 1.0).abs() < 1e-6);
}
