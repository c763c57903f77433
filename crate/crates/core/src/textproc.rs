//! Sentence segmentation, tokenization and person-mention detection.
//!
//! All offsets are counted in Unicode scalar values (Rust `char`s), not
//! bytes, so they agree with the sidecar protocol and with the sentence text
//! shipped in view models.

use std::collections::{BTreeMap, HashSet};
use std::path::Path;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Half-open `[begin, end)` range of char offsets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Span {
    pub begin: usize,
    pub end: usize,
}

impl Span {
    pub fn new(begin: usize, end: usize) -> Self {
        debug_assert!(begin <= end);
        Span { begin, end }
    }

    pub fn len(&self) -> usize {
        self.end - self.begin
    }

    pub fn is_empty(&self) -> bool {
        self.begin == self.end
    }

    pub fn overlaps(&self, other: &Span) -> bool {
        self.begin < other.end && other.begin < self.end
    }

    pub fn contains(&self, other: &Span) -> bool {
        self.begin <= other.begin && other.end <= self.end
    }
}

/// Returns the substring covering `span`, or `None` if it is out of bounds.
pub fn char_slice(text: &str, span: Span) -> Option<&str> {
    if span.begin > span.end {
        return None;
    }
    let mut indices = text.char_indices().map(|(i, _)| i).chain(std::iter::once(text.len()));
    let start = indices.nth(span.begin)?;
    let end = if span.is_empty() {
        start
    } else {
        indices.nth(span.len() - 1)?
    };
    Some(&text[start..end])
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sentence {
    pub article_id: String,
    pub index: usize,
    /// Offsets into the article body.
    pub span: Span,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PersonMention {
    pub article_id: String,
    pub sentence_index: usize,
    /// Offsets into the sentence text.
    pub span: Span,
    pub surface: String,
    #[serde(default)]
    pub person_id: Option<String>,
}

// ---------------------------------------------------------------------------
// Sentences
// ---------------------------------------------------------------------------

const ABBREVIATIONS: &[&str] = &[
    "Mr.", "Mrs.", "Ms.", "Dr.", "Sen.", "Rep.", "Gov.", "U.S.", "D.C.", "Prof.", "Jr.", "Sr.", "St.", "Jan.", "Feb.",
    "Mar.", "Apr.", "Jun.", "Jul.", "Aug.", "Sep.", "Sept.", "Oct.", "Nov.", "Dec.",
];

const CLOSERS: &[char] = &['"', '\'', '’', '”', ')', ']'];
const OPENERS: &[char] = &['"', '\'', '‘', '“', '('];

/// Splits `body` into sentences at `.`, `!` or `?` followed by whitespace and
/// an uppercase letter or opening quote, except after a known abbreviation or
/// a single-letter initial. Sentence spans exclude surrounding whitespace.
pub fn segment_sentences(article_id: &str, body: &str) -> Vec<Sentence> {
    let chars: Vec<char> = body.chars().collect();
    let mut bounds: Vec<Span> = Vec::new();
    let mut start = 0usize;
    let mut i = 0usize;

    while i < chars.len() {
        if !matches!(chars[i], '.' | '!' | '?') {
            i += 1;
            continue;
        }
        let punct_at = i;
        let mut end = i + 1;
        while end < chars.len() && matches!(chars[end], '.' | '!' | '?') {
            end += 1;
        }
        while end < chars.len() && CLOSERS.contains(&chars[end]) {
            end += 1;
        }
        let mut next = end;
        while next < chars.len() && chars[next].is_whitespace() {
            next += 1;
        }
        let boundary = next > end
            && next < chars.len()
            && (chars[next].is_uppercase() || OPENERS.contains(&chars[next]))
            && !(chars[punct_at] == '.' && is_abbreviation(&chars[..=punct_at]));
        if boundary {
            push_trimmed(&chars, start, end, &mut bounds);
            start = next;
        }
        i = end.max(i + 1);
    }
    push_trimmed(&chars, start, chars.len(), &mut bounds);

    bounds
        .into_iter()
        .enumerate()
        .map(|(index, span)| Sentence {
            article_id: article_id.to_string(),
            index,
            span,
            text: chars[span.begin..span.end].iter().collect(),
        })
        .collect()
}

/// `prefix` ends with the period in question.
fn is_abbreviation(prefix: &[char]) -> bool {
    let word_start = prefix
        .iter()
        .rposition(|c| c.is_whitespace() || OPENERS.contains(c))
        .map_or(0, |p| p + 1);
    let word: String = prefix[word_start..].iter().collect();
    if ABBREVIATIONS.contains(&word.as_str()) {
        return true;
    }
    let mut letters = word.chars();
    matches!((letters.next(), letters.next(), letters.next()), (Some(c), Some('.'), None) if c.is_uppercase())
}

fn push_trimmed(chars: &[char], mut begin: usize, mut end: usize, out: &mut Vec<Span>) {
    while begin < end && chars[begin].is_whitespace() {
        begin += 1;
    }
    while end > begin && chars[end - 1].is_whitespace() {
        end -= 1;
    }
    if begin < end {
        out.push(Span::new(begin, end));
    }
}

// ---------------------------------------------------------------------------
// Tokens
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub text: String,
    pub span: Span,
}

pub fn is_token_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '\'' | '’' | '-')
}

/// Maximal runs of letters, digits, apostrophes and hyphens.
pub fn tokenize(text: &str) -> Vec<Token> {
    let mut tokens = Vec::new();
    let mut current = String::new();
    let mut begin = 0;
    let mut count = 0;
    for (i, c) in text.chars().enumerate() {
        count = i + 1;
        if is_token_char(c) {
            if current.is_empty() {
                begin = i;
            }
            current.push(c);
        } else if !current.is_empty() {
            tokens.push(Token {
                text: std::mem::take(&mut current),
                span: Span::new(begin, i),
            });
        }
    }
    if !current.is_empty() {
        tokens.push(Token {
            text: current,
            span: Span::new(begin, count),
        });
    }
    tokens
}

/// Lowercased token with edge quotes and hyphens removed, for dictionary
/// lookups.
pub fn normalize_token(token: &str) -> String {
    token
        .trim_matches(|c| matches!(c, '\'' | '’' | '-'))
        .to_lowercase()
}

/// Number of chars of a trailing possessive (`'s`, `’s`, or a bare
/// apostrophe after `s`).
fn possessive_len(token: &str) -> usize {
    if token.ends_with("'s") || token.ends_with("’s") {
        2
    } else if token.len() > 2 && (token.ends_with("s'") || token.ends_with("s’")) {
        1
    } else {
        0
    }
}

// ---------------------------------------------------------------------------
// Gazetteer
// ---------------------------------------------------------------------------

#[derive(Debug, Error)]
pub enum GazetteerError {
    #[error("failed to read gazetteer {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("gazetteer line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("gazetteer line {line}: duplicate surface `{surface}`")]
    DuplicateSurface { line: usize, surface: String },
}

/// Surface form → canonical person name.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gazetteer {
    entries: BTreeMap<String, String>,
}

impl Gazetteer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, surface: impl Into<String>, canonical: impl Into<String>) -> bool {
        let surface = surface.into();
        if self.entries.contains_key(&surface) {
            return false;
        }
        self.entries.insert(surface, canonical.into());
        true
    }

    pub fn canonical(&self, surface: &str) -> Option<&str> {
        self.entries.get(surface).map(String::as_str)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn surfaces(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    /// Parses `surface<TAB>canonical_name` lines. Blank lines and lines
    /// starting with `#` are skipped.
    pub fn parse(text: &str) -> Result<Self, GazetteerError> {
        let mut gazetteer = Gazetteer::new();
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let mut cols = line.split('\t');
            let (Some(surface), Some(canonical), None) = (cols.next(), cols.next(), cols.next()) else {
                return Err(GazetteerError::Malformed {
                    line: line_no,
                    reason: "expected exactly two tab-separated columns".into(),
                });
            };
            let (surface, canonical) = (surface.trim(), canonical.trim());
            if surface.is_empty() || canonical.is_empty() {
                return Err(GazetteerError::Malformed {
                    line: line_no,
                    reason: "empty column".into(),
                });
            }
            if !gazetteer.insert(surface, canonical) {
                return Err(GazetteerError::DuplicateSurface {
                    line: line_no,
                    surface: surface.to_string(),
                });
            }
        }
        Ok(gazetteer)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, GazetteerError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| GazetteerError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }
}

// ---------------------------------------------------------------------------
// Mentions
// ---------------------------------------------------------------------------

/// Capitalized words that never form part of a person name: function words,
/// calendar words, titles and institutions. Stripped from the edges of a
/// capitalized run.
const STOP_WORDS: &[&str] = &[
    "A", "About", "Administration", "After", "Again", "All", "Also", "Although", "An", "And", "Another", "Any",
    "As", "At", "Attorney", "Because", "Before", "Both", "But", "By", "Chair", "Chairman", "Chief", "Commissioner",
    "Congress", "Congressman", "Congresswoman", "Court", "December", "Democrat", "Democratic", "Democrats",
    "Department", "Despite", "Director", "Dr", "During", "Each", "Even", "Every", "February", "Federal", "Few",
    "For", "Friday", "From", "General", "GOP", "Gov", "Government", "Governor", "He", "Her", "Here", "His", "House",
    "How", "However", "I", "If", "In", "Instead", "Into", "It", "Its", "January", "Jr", "Judge", "July", "Justice",
    "Leader", "Less", "Majority", "Many", "March", "Mayor", "Meanwhile", "Minister", "Minority", "Monday", "More",
    "Moreover", "Most", "Mr", "Mrs", "Ms", "My", "National", "No", "Nor", "Not", "November", "Now", "October", "Of",
    "Officer", "On", "One", "Only", "Or", "Other", "Others", "Our", "Over", "Party", "Premier", "President",
    "Prime", "Prof", "Rep", "Representative", "Republican", "Republicans", "Saturday", "Secretary", "Sen",
    "Senate", "Senator", "September", "Several", "She", "Sheriff", "Since", "So", "Some", "Speaker", "Sr", "St",
    "State", "Still", "Such", "Sunday", "Supreme", "That", "The", "Their", "Them", "Then", "There", "These", "They",
    "This", "Those", "Though", "Three", "Thursday", "To", "Treasury", "Tuesday", "Two", "Under", "Until", "Vice",
    "We", "Wednesday", "What", "When", "Where", "Which", "While", "White", "Who", "Whom", "Whose", "Why", "With",
    "Yes", "Yet", "You", "Your",
];

fn stop_words() -> &'static HashSet<&'static str> {
    static SET: OnceLock<HashSet<&'static str>> = OnceLock::new();
    SET.get_or_init(|| STOP_WORDS.iter().copied().collect())
}

fn is_stop_word(word: &str) -> bool {
    stop_words().contains(word)
}

/// Title-case word of at least two characters: uppercase first letter and at
/// least one lowercase letter after it. Excludes initials and acronyms.
fn is_capitalized(word: &str) -> bool {
    let mut chars = word.chars();
    let Some(first) = chars.next() else { return false };
    first.is_uppercase() && word.chars().count() >= 2 && chars.any(char::is_lowercase)
}

/// Detects person mentions in one sentence: gazetteer hits (case-sensitive,
/// whole tokens, possessive allowed) and capitalized-token runs. Overlaps are
/// resolved longest-first; the result is ordered by offset.
pub fn detect_mentions(sentence: &Sentence, gazetteer: &Gazetteer) -> Vec<PersonMention> {
    let text = &sentence.text;
    let chars: Vec<char> = text.chars().collect();
    let tokens = tokenize(text);
    let mut candidates: Vec<Span> = Vec::new();

    // (a) gazetteer hits
    for surface in gazetteer.surfaces() {
        let needle: Vec<char> = surface.chars().collect();
        if needle.is_empty() || needle.len() > chars.len() {
            continue;
        }
        for begin in 0..=chars.len() - needle.len() {
            let end = begin + needle.len();
            if chars[begin..end] != needle[..] {
                continue;
            }
            let clean_start = begin == 0 || !is_token_char(chars[begin - 1]) || !is_token_char(needle[0]);
            let clean_end = end == chars.len()
                || !is_token_char(chars[end])
                || !is_token_char(needle[needle.len() - 1])
                || tokens
                    .iter()
                    .find(|t| t.span.begin < end && end < t.span.end)
                    .is_some_and(|t| possessive_len(&t.text) == t.span.end - end);
            if clean_start && clean_end {
                candidates.push(Span::new(begin, end));
            }
        }
    }

    // (b) capitalized runs
    let mut run: Vec<usize> = Vec::new();
    let flush = |run: &mut Vec<usize>, candidates: &mut Vec<Span>| {
        if let Some(span) = capitalized_run_span(&tokens, run) {
            candidates.push(span);
        }
        run.clear();
    };
    for (ti, token) in tokens.iter().enumerate() {
        let core = core_word(&token.text);
        if !is_capitalized(core) {
            flush(&mut run, &mut candidates);
            continue;
        }
        let joined = run.last().is_some_and(|&prev| {
            let gap = &chars[tokens[prev].span.end..token.span.begin];
            gap.iter().all(|c| c.is_whitespace()) && possessive_len(&tokens[prev].text) == 0
        });
        if !joined {
            flush(&mut run, &mut candidates);
        }
        run.push(ti);
    }
    flush(&mut run, &mut candidates);

    // longest first, then leftmost
    candidates.sort_by(|a, b| b.len().cmp(&a.len()).then(a.begin.cmp(&b.begin)));
    let mut accepted: Vec<Span> = Vec::new();
    for candidate in candidates {
        if !accepted.iter().any(|s| s.overlaps(&candidate)) {
            accepted.push(candidate);
        }
    }
    accepted.sort();

    accepted
        .into_iter()
        .map(|span| PersonMention {
            article_id: sentence.article_id.clone(),
            sentence_index: sentence.index,
            span,
            surface: chars[span.begin..span.end].iter().collect(),
            person_id: None,
        })
        .collect()
}

/// Token text without edge quotes/hyphens and without a possessive suffix.
fn core_word(token: &str) -> &str {
    let token = token.trim_start_matches(['\'', '’', '-']);
    let cut = possessive_len(token);
    let token = &token[..token.len() - token.chars().rev().take(cut).map(char::len_utf8).sum::<usize>()];
    token.trim_end_matches(['\'', '’', '-'])
}

fn capitalized_run_span(tokens: &[Token], run: &[usize]) -> Option<Span> {
    let is_stop = |ti: &usize| is_stop_word(core_word(&tokens[*ti].text));
    let first = run.iter().position(|ti| !is_stop(ti))?;
    let last = run.iter().rposition(|ti| !is_stop(ti))?;
    let kept = &run[first..=last];
    if kept.len() == 1 && kept[0] == 0 {
        // sentence-initial single words only count through the gazetteer
        return None;
    }

    let head = &tokens[kept[0]];
    let tail = &tokens[*kept.last()?];
    let lead = head.text.chars().take_while(|c| matches!(c, '\'' | '’' | '-')).count();
    let tail_core = core_word(&tail.text).chars().count();
    let tail_lead = tail.text.chars().take_while(|c| matches!(c, '\'' | '’' | '-')).count();
    Some(Span::new(
        head.span.begin + lead,
        tail.span.begin + tail_lead + tail_core,
    ))
}
