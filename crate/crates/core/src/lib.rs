//! Person-targeting polarity analysis for news coverage of a single event.
//!
//! The pipeline runs in stages, each in its own module:
//!
//! - [`corpus`] loads and validates line-delimited article records (and can
//!   draft a record from a live URL).
//! - [`textproc`] segments article bodies into sentences and detects person
//!   mentions.
//! - [`persons`] resolves mentions across a topic's articles into persons and
//!   picks the most frequent actor (MFA).
//! - [`polarity`] classifies each sentence's polarity toward a target and
//!   aggregates it to an article-level score and frame group.
//! - [`framing`] scores article relevance and selects the main and
//!   representative articles of each frame group.
//! - [`vizmodel`] assembles the overview and article-view models served to
//!   clients.
//! - [`snapshot`] is the persisted, self-contained result of an analysis run;
//!   [`pipeline`] produces it.
//! - [`conjoint`] estimates average marginal component effects from
//!   randomized-profile study responses.

pub mod conjoint;
pub mod corpus;
pub mod framing;
pub mod persons;
pub mod pipeline;
pub mod polarity;
pub mod snapshot;
pub mod textproc;
pub mod vizmodel;

pub use corpus::{Article, Corpus, Orientation, Topic};
pub use persons::Person;
pub use polarity::{ArticlePolarity, FrameGroup, Polarity, PolarityLabel};
pub use snapshot::Snapshot;
pub use textproc::{PersonMention, Sentence, Span};
