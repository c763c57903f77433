use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use newslens_core::conjoint::{self, estimate_amce, format_table, parse_baselines, ConjointError, SeMode};
use newslens_core::corpus::{fetch_article, parse_corpus, Article, FetchOptions, LoadOptions, Orientation};
use newslens_core::framing::TfIdf;
use newslens_core::pipeline::{self, PipelineConfig, PipelineInputs};
use newslens_core::polarity::{
    Classifier, FallbackClassifier, Lexicon, LexiconClassifier, Negations, SidecarClassifier, DEFAULT_SIDECAR_TIMEOUT,
    DEFAULT_THETA,
};
use newslens_core::snapshot::{corpus_digest, Snapshot, SNAPSHOT_FILE};
use newslens_core::textproc::Gazetteer;
use newslens_core::vizmodel::ExplanationTemplates;
use newslens_core::FrameGroup;
use newslens_server::{ServeConfig, DEFAULT_BIND};

const EXIT_CONFIG: u8 = 2;
const EXIT_INPUT: u8 = 3;
const EXIT_ANALYSIS: u8 = 4;
const EXIT_CLASSIFIER: u8 = 5;
const EXIT_OUTPUT: u8 = 6;
const EXIT_SERVER: u8 = 7;
const EXIT_FETCH: u8 = 8;
const EXIT_CONJOINT: u8 = 9;

const SUMMARY_FILE: &str = "summary.txt";

#[derive(Parser)]
#[command(name = "newslens", version, about = "Person-targeting polarity analysis of same-event news coverage")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a corpus and write a snapshot plus a summary.
    Analyze(AnalyzeArgs),
    /// Estimate AMCEs from conjoint responses.
    Amce(AmceArgs),
    /// Serve snapshots over HTTP.
    Serve(ServeArgs),
    /// Fetch a web page and print it as a corpus record.
    Fetch(FetchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ClassifierArg {
    Lexicon,
    Sidecar,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[arg(long)]
    corpus: PathBuf,
    /// TSV of surface<TAB>canonical name.
    #[arg(long)]
    gazetteer: Option<PathBuf>,
    /// TSV of term<TAB>value in [-1, 1]. Required for the lexicon classifier
    /// and for sidecar fallback.
    #[arg(long)]
    lexicon: Option<PathBuf>,
    /// Negation tokens, one per line. Defaults to a built-in list.
    #[arg(long)]
    negations: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_THETA)]
    theta: f64,
    #[arg(long, value_enum, default_value = "lexicon")]
    classifier: ClassifierArg,
    #[arg(long)]
    sidecar_url: Option<String>,
    /// Fall back to the lexicon classifier when the sidecar is unavailable.
    #[arg(long)]
    sidecar_fallback: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    /// Worker threads (default: one per processor).
    #[arg(long)]
    jobs: Option<usize>,
    /// Drop unknown record fields with a warning instead of failing.
    #[arg(long)]
    lenient: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum SeArg {
    Classical,
    Cluster,
}

#[derive(Args)]
struct AmceArgs {
    #[arg(long)]
    responses: PathBuf,
    /// attribute=level,… naming the baseline level of every attribute.
    #[arg(long)]
    baselines: String,
    #[arg(long, value_enum, default_value = "cluster")]
    se: SeArg,
    /// Write one CSV record per estimate here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ServeArgs {
    #[arg(long, env = "NEWSLENS_BIND", default_value = DEFAULT_BIND)]
    bind: String,
    /// Snapshot file or directory of snapshot files.
    #[arg(long, env = "NEWSLENS_SNAPSHOTS")]
    snapshots: PathBuf,
}

#[derive(Args)]
struct FetchArgs {
    #[arg(long)]
    url: String,
    #[arg(long)]
    id: String,
    #[arg(long)]
    topic: String,
    #[arg(long)]
    outlet: String,
    #[arg(long, default_value = "unknown")]
    orientation: Orientation,
    /// ISO-8601 timestamp; defaults to the current time.
    #[arg(long)]
    published_at: Option<String>,
    #[arg(long)]
    excerpt: Option<String>,
    /// Minimum length of the extracted text block, in characters.
    #[arg(long, default_value_t = newslens_core::corpus::DEFAULT_MIN_BLOCK_CHARS)]
    min_chars: usize,
    #[arg(long, default_value_t = 20)]
    timeout_secs: u64,
}

struct Failure {
    code: u8,
    message: String,
}

fn fail(code: u8, message: impl std::fmt::Display) -> Failure {
    Failure {
        code,
        message: message.to_string(),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze(args) => analyze(args),
        Command::Amce(args) => amce(args),
        Command::Serve(args) => serve(args),
        Command::Fetch(args) => fetch(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn read_bytes(path: &Path) -> Result<Vec<u8>, Failure> {
    std::fs::read(path).map_err(|e| fail(EXIT_INPUT, format!("cannot read {}: {e}", path.display())))
}

fn build_classifier(args: &AnalyzeArgs) -> Result<Box<dyn Classifier>, Failure> {
    let lexicon_classifier = || -> Result<LexiconClassifier, Failure> {
        let path = args
            .lexicon
            .as_ref()
            .ok_or_else(|| fail(EXIT_CONFIG, "--lexicon is required for the lexicon classifier"))?;
        let lexicon = Lexicon::load(path).map_err(|e| fail(EXIT_CONFIG, e))?;
        let negations = match &args.negations {
            Some(p) => Negations::load(p).map_err(|e| fail(EXIT_CONFIG, e))?,
            None => Negations::default(),
        };
        Ok(LexiconClassifier::new(lexicon, negations))
    };
    match args.classifier {
        ClassifierArg::Lexicon => Ok(Box::new(lexicon_classifier()?)),
        ClassifierArg::Sidecar => {
            let url = args
                .sidecar_url
                .as_deref()
                .ok_or_else(|| fail(EXIT_CONFIG, "--sidecar-url is required for the sidecar classifier"))?;
            let sidecar = SidecarClassifier::new(url, DEFAULT_SIDECAR_TIMEOUT);
            if args.sidecar_fallback {
                Ok(Box::new(FallbackClassifier::new(sidecar, lexicon_classifier()?)))
            } else {
                Ok(Box::new(sidecar))
            }
        }
    }
}

fn analyze(args: AnalyzeArgs) -> Result<(), Failure> {
    if !(args.theta > 0.0 && args.theta < 1.0) {
        return Err(fail(EXIT_CONFIG, format!("--theta must lie in (0, 1), got {}", args.theta)));
    }
    if args.jobs == Some(0) {
        return Err(fail(EXIT_CONFIG, "--jobs must be at least 1"));
    }
    let classifier = build_classifier(&args)?;

    let bytes = read_bytes(&args.corpus)?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| fail(EXIT_INPUT, format!("{} is not valid UTF-8", args.corpus.display())))?;
    let corpus = parse_corpus(&text, LoadOptions { lenient: args.lenient })
        .map_err(|e| fail(EXIT_INPUT, format!("{}: {e}", args.corpus.display())))?;
    let gazetteer = match &args.gazetteer {
        Some(path) => Gazetteer::load(path).map_err(|e| fail(EXIT_CONFIG, e))?,
        None => Gazetteer::new(),
    };

    let inputs = PipelineInputs {
        corpus: &corpus,
        corpus_digest: corpus_digest(&bytes),
        gazetteer: &gazetteer,
        classifier: classifier.as_ref(),
        vectors: &TfIdf,
    };
    let config = PipelineConfig {
        theta: args.theta,
        seed: args.seed,
        jobs: args.jobs,
    };
    let snapshot = pipeline::run(&inputs, config).map_err(|e| match e {
        pipeline::PipelineError::Classifier { .. } => fail(EXIT_CLASSIFIER, e),
        pipeline::PipelineError::InvalidConfig(_) => fail(EXIT_CONFIG, e),
        other => fail(EXIT_ANALYSIS, other),
    })?;
    snapshot.validate().map_err(|e| fail(EXIT_ANALYSIS, e))?;

    std::fs::create_dir_all(&args.out)
        .map_err(|e| fail(EXIT_OUTPUT, format!("cannot create {}: {e}", args.out.display())))?;
    snapshot
        .write(args.out.join(SNAPSHOT_FILE))
        .map_err(|e| fail(EXIT_OUTPUT, e))?;
    let summary = summary(&snapshot);
    let summary_path = args.out.join(SUMMARY_FILE);
    std::fs::write(&summary_path, &summary)
        .map_err(|e| fail(EXIT_OUTPUT, format!("cannot write {}: {e}", summary_path.display())))?;
    print!("{summary}");
    Ok(())
}

fn summary(snapshot: &Snapshot) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "classifier: {}  theta: {}  seed: {}",
        snapshot.config.classifier.name, snapshot.config.theta, snapshot.config.seed
    );
    for t in &snapshot.topics {
        let a = &t.analysis;
        let mentions = t.mfa().map_or(0, |p| p.total_mentions);
        let _ = writeln!(out, "\ntopic {} ({} articles)", t.topic.id, t.articles.len());
        let _ = writeln!(out, "  MFA: {} ({mentions} mentions)", a.mfa_name);
        let _ = writeln!(out, "  main article: {}", a.main_article);
        for g in FrameGroup::POLAR {
            let members = a.groups.get(g);
            let rep = a.representatives.get(g).unwrap_or("-");
            let _ = writeln!(out, "  {:<10} {:>2}  representative: {rep}", g.as_str(), members.len());
        }
        let _ = writeln!(out, "  {:<10} {:>2}", "none", a.ungrouped.len());
    }
    out
}

fn amce(args: AmceArgs) -> Result<(), Failure> {
    let baselines = parse_baselines(&args.baselines).map_err(|e| fail(EXIT_CONFIG, e))?;
    let set = conjoint::load_responses(&args.responses).map_err(|e| fail(EXIT_INPUT, e))?;
    let mode = match args.se {
        SeArg::Classical => SeMode::Classical,
        SeArg::Cluster => SeMode::Cluster,
    };
    let estimates = estimate_amce(&set, &baselines, mode).map_err(|e| match e {
        ConjointError::Io { .. } => fail(EXIT_INPUT, e),
        other => fail(EXIT_CONJOINT, other),
    })?;
    print!("{}", format_table(&estimates));
    if let Some(path) = &args.out {
        let file = std::fs::File::create(path)
            .map_err(|e| fail(EXIT_OUTPUT, format!("cannot create {}: {e}", path.display())))?;
        conjoint::write_estimates(&estimates, file).map_err(|e| fail(EXIT_OUTPUT, e))?;
    }
    Ok(())
}

fn serve(args: ServeArgs) -> Result<(), Failure> {
    let runtime = tokio::runtime::Builder::new_multi_thread()
        .enable_all()
        .build()
        .map_err(|e| fail(EXIT_SERVER, e))?;
    runtime
        .block_on(newslens_server::serve(ServeConfig {
            bind: args.bind,
            snapshots: args.snapshots,
            templates: ExplanationTemplates::default(),
        }))
        .map_err(|e| fail(EXIT_SERVER, e))
}

fn fetch(args: FetchArgs) -> Result<(), Failure> {
    let options = FetchOptions {
        allow_network: true,
        min_block_chars: args.min_chars,
        timeout: Duration::from_secs(args.timeout_secs),
    };
    let draft = fetch_article(&args.url, &options).map_err(|e| fail(EXIT_FETCH, e))?;
    let published_at = args
        .published_at
        .unwrap_or_else(|| chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true));
    let article = Article {
        id: args.id,
        topic_id: args.topic,
        outlet: args.outlet,
        orientation: args.orientation,
        title: draft.title,
        excerpt: args.excerpt,
        body: draft.body,
        published_at,
        url: Some(draft.url),
    };
    // Validate through the corpus loader so the printed record is loadable.
    let line = serde_json::to_string(&article).map_err(|e| fail(EXIT_FETCH, e))?;
    parse_corpus(&line, LoadOptions::default()).map_err(|e| fail(EXIT_FETCH, e))?;
    println!("{line}");
    Ok(())
}
