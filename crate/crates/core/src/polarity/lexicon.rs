use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use super::{check_target, Classifier, ClassifierInfo, ClassifierKind, Polarity, PolarityError, PolarityLabel};
use crate::textproc::{normalize_token, tokenize, Span};

/// Tokens considered on each side of the target.
pub const WINDOW: usize = 6;
/// A negation this many tokens or fewer before a lexicon hit flips its sign.
pub const NEGATION_SCOPE: usize = 3;

pub const DEFAULT_NEGATIONS: &[&str] = &[
    "not", "no", "never", "nobody", "none", "neither", "nor", "without", "hardly", "barely", "nothing", "cannot",
    "can't", "didn't", "doesn't", "don't", "isn't", "wasn't", "weren't", "won't", "couldn't", "shouldn't",
    "wouldn't", "aren't",
];

/// Term → value in [−1, 1]. Terms are stored normalized (lowercase, edge
/// punctuation trimmed).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Lexicon {
    entries: BTreeMap<String, f64>,
}

impl Lexicon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, term: &str, value: f64) {
        self.entries.insert(normalize_token(term), value);
    }

    pub fn get(&self, term: &str) -> Option<f64> {
        self.entries.get(&normalize_token(term)).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), *v))
    }

    /// Parses `term<TAB>value` lines. Blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self, PolarityError> {
        let mut lexicon = Lexicon::new();
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let malformed = |reason: String| PolarityError::MalformedLexicon { line: line_no, reason };
            let (term, value) = line
                .split_once('\t')
                .ok_or_else(|| malformed("expected term<TAB>value".into()))?;
            let term = normalize_token(term.trim());
            if term.is_empty() {
                return Err(malformed("empty term".into()));
            }
            let value: f64 = value
                .trim()
                .parse()
                .map_err(|e| malformed(format!("bad value `{}`: {e}", value.trim())))?;
            if !(-1.0..=1.0).contains(&value) {
                return Err(malformed(format!("value {value} outside [-1, 1]")));
            }
            if lexicon.entries.insert(term.clone(), value).is_some() {
                return Err(malformed(format!("duplicate term `{term}`")));
            }
        }
        Ok(lexicon)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, PolarityError> {
        Self::parse(&read(path.as_ref())?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Negations {
    tokens: BTreeSet<String>,
}

impl Default for Negations {
    fn default() -> Self {
        Negations::from_tokens(DEFAULT_NEGATIONS.iter().copied())
    }
}

impl Negations {
    pub fn from_tokens<'a>(tokens: impl IntoIterator<Item = &'a str>) -> Self {
        Negations {
            tokens: tokens
                .into_iter()
                .map(normalize_token)
                .filter(|t| !t.is_empty())
                .collect(),
        }
    }

    pub fn empty() -> Self {
        Negations {
            tokens: BTreeSet::new(),
        }
    }

    pub fn contains(&self, token: &str) -> bool {
        self.tokens.contains(&normalize_token(token))
    }

    /// One token per line; blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Self {
        Negations::from_tokens(
            text.lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#')),
        )
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, PolarityError> {
        Ok(Self::parse(&read(path.as_ref())?))
    }
}

fn read(path: &Path) -> Result<String, PolarityError> {
    std::fs::read_to_string(path).map_err(|source| PolarityError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Window-based lexicon scorer.
///
/// Sums the lexicon values of the tokens within [`WINDOW`] tokens of the
/// target (the target's own tokens excluded). A hit preceded by a negation
/// within [`NEGATION_SCOPE`] tokens counts with the opposite sign. The sign of
/// the sum picks the class.
#[derive(Debug, Clone)]
pub struct LexiconClassifier {
    lexicon: Lexicon,
    negations: Negations,
}

impl LexiconClassifier {
    pub fn new(lexicon: Lexicon, negations: Negations) -> Self {
        LexiconClassifier { lexicon, negations }
    }

    pub fn lexicon(&self) -> &Lexicon {
        &self.lexicon
    }

    /// Raw window score toward the target.
    pub fn score(&self, sentence: &str, target: Span) -> Result<f64, PolarityError> {
        check_target(sentence, target)?;
        let tokens = tokenize(sentence);
        let inside: Vec<usize> = tokens
            .iter()
            .enumerate()
            .filter(|(_, t)| t.span.overlaps(&target))
            .map(|(i, _)| i)
            .collect();
        let (Some(&first), Some(&last)) = (inside.first(), inside.last()) else {
            // Target covers only separators: nothing to anchor a window on.
            return Ok(0.0);
        };
        let lo = first.saturating_sub(WINDOW);
        let hi = (last + WINDOW).min(tokens.len() - 1);

        let mut score = 0.0;
        for i in (lo..first).chain(last + 1..=hi) {
            let text = &tokens[i].text;
            if self.negations.contains(text) {
                continue;
            }
            let Some(value) = self.lexicon.get(text) else { continue };
            let negated = tokens[i.saturating_sub(NEGATION_SCOPE)..i]
                .iter()
                .any(|t| self.negations.contains(&t.text));
            score += if negated { -value } else { value };
        }
        Ok(score)
    }
}

impl Classifier for LexiconClassifier {
    fn info(&self) -> ClassifierInfo {
        ClassifierInfo {
            name: format!("lexicon-window-{WINDOW}"),
            kind: ClassifierKind::Lexicon,
            reported_f1: None,
        }
    }

    fn classify(&self, sentence: &str, target: Span) -> Result<PolarityLabel, PolarityError> {
        let score = self.score(sentence, target)?;
        let label = if score > 0.0 {
            Polarity::Positive
        } else if score < 0.0 {
            Polarity::Negative
        } else {
            Polarity::Neutral
        };
        Ok(PolarityLabel::confident(label))
    }
}
