use std::time::Duration;

use thiserror::Error;

use super::extract::extract_main_text;

pub const DEFAULT_MIN_BLOCK_CHARS: usize = 300;

#[derive(Debug, Error)]
pub enum FetchError {
    #[error("invalid URL `{0}`")]
    InvalidUrl(String),
    #[error("network access is disabled by configuration")]
    NetworkDisabled,
    #[error("fetch failed{}: {detail}", .status.map(|s| format!(" with HTTP status {s}")).unwrap_or_default())]
    FetchFailed { status: Option<u16>, detail: String },
    #[error("no text block of at least {minimum} characters (longest was {longest})")]
    ExtractionEmpty { longest: usize, minimum: usize },
}

#[derive(Debug, Clone)]
pub struct FetchOptions {
    pub allow_network: bool,
    pub min_block_chars: usize,
    pub timeout: Duration,
}

impl Default for FetchOptions {
    fn default() -> Self {
        FetchOptions {
            allow_network: true,
            min_block_chars: DEFAULT_MIN_BLOCK_CHARS,
            timeout: Duration::from_secs(20),
        }
    }
}

/// Title and body pulled from a web page. The caller supplies the remaining
/// record fields (topic, outlet, orientation, timestamp).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArticleDraft {
    pub url: String,
    pub title: String,
    pub body: String,
}

pub fn fetch_article(url: &str, options: &FetchOptions) -> Result<ArticleDraft, FetchError> {
    let uri: ureq::http::Uri = url.parse().map_err(|_| FetchError::InvalidUrl(url.to_string()))?;
    if !matches!(uri.scheme_str(), Some("http" | "https")) || uri.host().is_none() {
        return Err(FetchError::InvalidUrl(url.to_string()));
    }
    if !options.allow_network {
        return Err(FetchError::NetworkDisabled);
    }

    let agent: ureq::Agent = ureq::Agent::config_builder()
        .timeout_global(Some(options.timeout))
        .build()
        .into();
    let html = match agent.get(url).call() {
        Ok(mut response) => response
            .body_mut()
            .read_to_string()
            .map_err(|e| FetchError::FetchFailed {
                status: Some(response.status().as_u16()),
                detail: e.to_string(),
            })?,
        Err(ureq::Error::StatusCode(status)) => {
            return Err(FetchError::FetchFailed {
                status: Some(status),
                detail: "unexpected status".into(),
            })
        }
        Err(e) => {
            return Err(FetchError::FetchFailed {
                status: None,
                detail: e.to_string(),
            })
        }
    };

    let page = extract_main_text(&html);
    let longest = page.body.chars().count();
    if longest < options.min_block_chars {
        return Err(FetchError::ExtractionEmpty {
            longest,
            minimum: options.min_block_chars,
        });
    }
    Ok(ArticleDraft {
        url: url.to_string(),
        title: page.title.unwrap_or_default(),
        body: page.body,
    })
}
