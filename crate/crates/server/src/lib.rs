//! Read-only HTTP service over analysis snapshots.
//!
//! Endpoints:
//!
//! - `GET /health` → `ok`
//! - `GET /topics` → topic summaries
//! - `GET /topics/{id}/overview?layout=&tags=&seed=` → overview model
//! - `GET /articles/{id}/view?highlight=&tags=` → article view model
//!
//! Models are assembled on request from the loaded snapshots and serialized
//! with [`newslens_core::vizmodel::to_json`], so bodies match in-process
//! output byte for byte. Errors are `{"error": kind, "detail": message}`.
//! On SIGHUP the snapshot directory is reloaded and swapped in atomically;
//! a failed reload keeps the previous catalog.

use std::collections::{BTreeMap, HashMap};
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::sync::{Arc, RwLock};

use axum::extract::{Path as UrlPath, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::Router;
use newslens_core::snapshot::{Snapshot, SnapshotError, TopicSnapshot};
use newslens_core::vizmodel::{
    build_article_view, build_overview, to_json, ExplanationTemplates, HighlightMode, Layout, TagConfig,
};
use newslens_core::FrameGroup;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const DEFAULT_BIND: &str = "127.0.0.1:8080";

#[derive(Debug, Error)]
pub enum ServerError {
    #[error("failed to bind {addr}: {source}")]
    BindFailed {
        addr: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    SnapshotCorrupt(String),
    #[error("server error: {0}")]
    Io(#[from] std::io::Error),
}

impl From<SnapshotError> for ServerError {
    fn from(e: SnapshotError) -> Self {
        ServerError::SnapshotCorrupt(e.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSizes {
    pub positive: usize,
    pub ambivalent: usize,
    pub negative: usize,
    pub none: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopicSummary {
    pub id: String,
    pub name: String,
    pub article_count: usize,
    pub mfa_name: String,
    pub main_article: String,
    pub group_sizes: GroupSizes,
}

impl TopicSummary {
    pub fn of(topic: &TopicSnapshot) -> Self {
        let a = &topic.analysis;
        TopicSummary {
            id: topic.topic.id.clone(),
            name: topic.topic.name.clone(),
            article_count: topic.articles.len(),
            mfa_name: a.mfa_name.clone(),
            main_article: a.main_article.clone(),
            group_sizes: GroupSizes {
                positive: a.groups.get(FrameGroup::Positive).len(),
                ambivalent: a.groups.get(FrameGroup::Ambivalent).len(),
                negative: a.groups.get(FrameGroup::Negative).len(),
                none: a.ungrouped.len(),
            },
        }
    }
}

/// All topics of the loaded snapshots, indexed by topic and article id.
#[derive(Debug, Default)]
pub struct Catalog {
    topics: Vec<TopicSnapshot>,
    by_topic: BTreeMap<String, usize>,
    by_article: BTreeMap<String, usize>,
}

impl Catalog {
    pub fn from_snapshots(snapshots: Vec<Snapshot>) -> Result<Self, ServerError> {
        let mut catalog = Catalog::default();
        for snapshot in snapshots {
            for topic in snapshot.topics {
                let i = catalog.topics.len();
                if catalog.by_topic.insert(topic.topic.id.clone(), i).is_some() {
                    return Err(ServerError::SnapshotCorrupt(format!(
                        "topic `{}` appears in more than one snapshot",
                        topic.topic.id
                    )));
                }
                for id in &topic.topic.article_ids {
                    if catalog.by_article.insert(id.clone(), i).is_some() {
                        return Err(ServerError::SnapshotCorrupt(format!(
                            "article `{id}` appears in more than one topic"
                        )));
                    }
                }
                catalog.topics.push(topic);
            }
        }
        if catalog.topics.is_empty() {
            return Err(ServerError::SnapshotCorrupt("no topics in the loaded snapshots".into()));
        }
        Ok(catalog)
    }

    /// Loads a single snapshot file, or every `*.json` file of a directory
    /// in name order.
    pub fn load(path: impl AsRef<Path>) -> Result<Self, ServerError> {
        let path = path.as_ref();
        let files = if path.is_dir() {
            let mut files: Vec<PathBuf> = std::fs::read_dir(path)
                .map_err(|e| ServerError::SnapshotCorrupt(format!("cannot read {}: {e}", path.display())))?
                .filter_map(|entry| entry.ok().map(|e| e.path()))
                .filter(|p| p.is_file() && p.extension().is_some_and(|ext| ext == "json"))
                .collect();
            files.sort();
            if files.is_empty() {
                return Err(ServerError::SnapshotCorrupt(format!(
                    "no snapshot files in {}",
                    path.display()
                )));
            }
            files
        } else {
            vec![path.to_path_buf()]
        };
        let snapshots = files
            .iter()
            .map(Snapshot::load)
            .collect::<Result<Vec<_>, _>>()?;
        Catalog::from_snapshots(snapshots)
    }

    pub fn topics(&self) -> &[TopicSnapshot] {
        &self.topics
    }

    pub fn topic(&self, id: &str) -> Option<&TopicSnapshot> {
        self.by_topic.get(id).map(|&i| &self.topics[i])
    }

    pub fn topic_of_article(&self, article_id: &str) -> Option<&TopicSnapshot> {
        self.by_article.get(article_id).map(|&i| &self.topics[i])
    }

    pub fn summaries(&self) -> Vec<TopicSummary> {
        self.topics.iter().map(TopicSummary::of).collect()
    }
}

#[derive(Clone)]
pub struct AppState {
    catalog: Arc<RwLock<Arc<Catalog>>>,
    templates: Arc<ExplanationTemplates>,
}

impl AppState {
    pub fn new(catalog: Catalog, templates: ExplanationTemplates) -> Self {
        AppState {
            catalog: Arc::new(RwLock::new(Arc::new(catalog))),
            templates: Arc::new(templates),
        }
    }

    pub fn catalog(&self) -> Arc<Catalog> {
        Arc::clone(&self.catalog.read().expect("catalog lock poisoned"))
    }

    pub fn replace(&self, catalog: Catalog) {
        *self.catalog.write().expect("catalog lock poisoned") = Arc::new(catalog);
    }
}

struct ApiError {
    status: StatusCode,
    kind: &'static str,
    detail: String,
}

impl ApiError {
    fn not_found(detail: String) -> Self {
        ApiError {
            status: StatusCode::NOT_FOUND,
            kind: "not_found",
            detail,
        }
    }

    fn bad_request(detail: String) -> Self {
        ApiError {
            status: StatusCode::BAD_REQUEST,
            kind: "bad_request",
            detail,
        }
    }
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    error: &'a str,
    detail: &'a str,
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = to_json(&ErrorBody {
            error: self.kind,
            detail: &self.detail,
        });
        (self.status, [(header::CONTENT_TYPE, "application/json")], body).into_response()
    }
}

fn json(body: String) -> Response {
    ([(header::CONTENT_TYPE, "application/json")], body).into_response()
}

fn param<T>(query: &HashMap<String, String>, name: &str, default: T) -> Result<T, ApiError>
where
    T: std::str::FromStr,
    T::Err: std::fmt::Display,
{
    match query.get(name) {
        None => Ok(default),
        Some(raw) => raw
            .parse()
            .map_err(|e| ApiError::bad_request(format!("parameter `{name}`: {e}"))),
    }
}

async fn health() -> &'static str {
    "ok"
}

async fn topics(State(state): State<AppState>) -> Response {
    json(to_json(&state.catalog().summaries()))
}

async fn overview(
    State(state): State<AppState>,
    UrlPath(id): UrlPath<String>,
    Query(query): Query<HashMap<String, String>>,
) -> Result<Response, ApiError> {
    let catalog = state.catalog();
    let topic = catalog
        .topic(&id)
        .ok_or_else(|| ApiError::not_found(format!("unknown topic `{id}`")))?;
    let layout: Layout = param(&query, "layout", Layout::Plain)?;
    let tags: TagConfig = param(&query, "tags", TagConfig::NONE)?;
    let seed: u64 = param(&query, "seed", topic.analysis.seed)?;
    let model = build_overview(topic, layout, tags, seed, &state.templates);
    Ok(json(to_json(&model)))
}

async fn article_view(
    State(state): State<AppState>,
    UrlPath(id): UrlPath<String>,
    Query(query): Query<HashMap<String, String>>,
) -> Result<Response, ApiError> {
    let catalog = state.catalog();
    let topic = catalog
        .topic_of_article(&id)
        .ok_or_else(|| ApiError::not_found(format!("unknown article `{id}`")))?;
    let mode: HighlightMode = param(&query, "highlight", HighlightMode::Disabled)?;
    let tags: TagConfig = param(&query, "tags", TagConfig::NONE)?;
    let model = build_article_view(topic, &id, mode, tags).map_err(|e| ApiError::not_found(e.to_string()))?;
    Ok(json(to_json(&model)))
}

async fn fallback() -> ApiError {
    ApiError::not_found("no such endpoint".into())
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/health", get(health))
        .route("/topics", get(topics))
        .route("/topics/{id}/overview", get(overview))
        .route("/articles/{id}/view", get(article_view))
        .fallback(fallback)
        .with_state(state)
}

/// Reloads `path` into `state`. On failure the current catalog stays.
pub fn reload(state: &AppState, path: &Path) -> Result<(), ServerError> {
    let catalog = Catalog::load(path)?;
    state.replace(catalog);
    Ok(())
}

#[derive(Debug, Clone)]
pub struct ServeConfig {
    pub bind: String,
    pub snapshots: PathBuf,
    pub templates: ExplanationTemplates,
}

/// A bound, not yet running server.
pub struct Server {
    listener: tokio::net::TcpListener,
    state: AppState,
    snapshots: PathBuf,
}

impl Server {
    /// Loads the snapshots and binds the listener.
    pub async fn bind(config: ServeConfig) -> Result<Self, ServerError> {
        let catalog = Catalog::load(&config.snapshots)?;
        let listener = tokio::net::TcpListener::bind(&config.bind)
            .await
            .map_err(|source| ServerError::BindFailed {
                addr: config.bind.clone(),
                source,
            })?;
        Ok(Server {
            listener,
            state: AppState::new(catalog, config.templates),
            snapshots: config.snapshots,
        })
    }

    pub fn local_addr(&self) -> Result<SocketAddr, ServerError> {
        Ok(self.listener.local_addr()?)
    }

    pub fn state(&self) -> AppState {
        self.state.clone()
    }

    /// Serves until `shutdown` resolves, reloading on SIGHUP.
    pub async fn run(self, shutdown: impl std::future::Future<Output = ()> + Send + 'static) -> Result<(), ServerError> {
        spawn_reload_on_hangup(self.state.clone(), self.snapshots.clone());
        axum::serve(self.listener, router(self.state))
            .with_graceful_shutdown(shutdown)
            .await?;
        Ok(())
    }
}

#[cfg(unix)]
fn spawn_reload_on_hangup(state: AppState, snapshots: PathBuf) {
    use tokio::signal::unix::{signal, SignalKind};
    let Ok(mut hangups) = signal(SignalKind::hangup()) else {
        log::warn!("cannot listen for SIGHUP; reload disabled");
        return;
    };
    tokio::spawn(async move {
        while hangups.recv().await.is_some() {
            match reload(&state, &snapshots) {
                Ok(()) => log::info!("reloaded snapshots from {}", snapshots.display()),
                Err(e) => log::error!("reload failed, keeping previous snapshots: {e}"),
            }
        }
    });
}

#[cfg(not(unix))]
fn spawn_reload_on_hangup(_state: AppState, _snapshots: PathBuf) {}

/// Binds and serves until Ctrl-C.
pub async fn serve(config: ServeConfig) -> Result<(), ServerError> {
    let server = Server::bind(config).await?;
    log::info!("listening on http://{}", server.local_addr()?);
    server
        .run(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
