//! Largest-text-block extraction from raw HTML.
//!
//! This is a tag stripper, not an HTML parser. Block-level elements each
//! collect the text that flows directly into them. A block's candidate text is
//! its own text plus the text of its direct `<p>` children, so an `<article>`
//! made of paragraphs competes as one block. The longest candidate wins.

const BLOCK_TAGS: &[&str] = &[
    "address", "article", "aside", "blockquote", "body", "dd", "div", "dl", "dt", "figcaption", "figure", "footer",
    "form", "h1", "h2", "h3", "h4", "h5", "h6", "header", "html", "li", "main", "nav", "ol", "p", "pre", "section",
    "table", "td", "th", "tr", "ul",
];

const SKIPPED_TAGS: &[&str] = &["script", "style", "noscript", "template", "svg", "head"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtractedPage {
    pub title: Option<String>,
    /// Visible text of the largest block; paragraphs separated by blank lines.
    pub body: String,
}

struct Block {
    tag: String,
    pieces: Vec<String>,
    run: String,
}

impl Block {
    fn new(tag: &str) -> Self {
        Block {
            tag: tag.to_string(),
            pieces: Vec::new(),
            run: String::new(),
        }
    }

    fn flush(&mut self) {
        let text = normalize_ws(&self.run);
        if !text.is_empty() {
            self.pieces.push(text);
        }
        self.run.clear();
    }

    fn candidate(&self) -> String {
        self.pieces.join("\n\n")
    }
}

/// Extracts the page title and the text of the largest text block.
pub fn extract_main_text(html: &str) -> ExtractedPage {
    let title = find_element_text(html, "title").or_else(|| find_element_text(html, "h1"));

    let mut stack: Vec<Block> = vec![Block::new("#root")];
    let mut best = String::new();
    let mut rest = html;

    while let Some(lt) = rest.find('<') {
        push_text(&mut stack, &rest[..lt]);
        rest = &rest[lt..];

        if let Some(after) = rest.strip_prefix("<!--") {
            rest = after.find("-->").map_or("", |end| &after[end + 3..]);
            continue;
        }
        if rest.starts_with("<!") || rest.starts_with("<?") {
            rest = rest.find('>').map_or("", |end| &rest[end + 1..]);
            continue;
        }

        let Some((tag, closing, self_closing, len)) = parse_tag(rest) else {
            // A bare '<' in text.
            push_text(&mut stack, "<");
            rest = &rest[1..];
            continue;
        };
        rest = &rest[len..];

        if !closing && SKIPPED_TAGS.contains(&tag.as_str()) {
            let close = format!("</{tag}");
            rest = find_ascii_ci(rest, &close)
                .map(|pos| {
                    let after = &rest[pos..];
                    after.find('>').map_or("", |end| &after[end + 1..])
                })
                .unwrap_or("");
            continue;
        }

        if tag == "br" {
            push_text(&mut stack, " ");
            continue;
        }
        if !BLOCK_TAGS.contains(&tag.as_str()) {
            // Inline elements are transparent; keep word boundaries intact.
            continue;
        }

        if !closing {
            if tag == "p" && stack.last().is_some_and(|b| b.tag == "p") {
                close_top(&mut stack, &mut best);
            }
            if let Some(parent) = stack.last_mut() {
                parent.flush();
            }
            if !self_closing {
                stack.push(Block::new(&tag));
            }
        } else if let Some(pos) = stack.iter().rposition(|b| b.tag == tag) {
            if pos > 0 {
                while stack.len() > pos {
                    close_top(&mut stack, &mut best);
                }
            }
        }
    }
    push_text(&mut stack, rest);
    while stack.len() > 1 {
        close_top(&mut stack, &mut best);
    }
    if let Some(root) = stack.last_mut() {
        root.flush();
        consider(&mut best, root.candidate());
    }

    ExtractedPage { title, body: best }
}

fn close_top(stack: &mut Vec<Block>, best: &mut String) {
    let Some(mut block) = stack.pop() else { return };
    block.flush();
    let candidate = block.candidate();
    if block.tag == "p" {
        if let Some(parent) = stack.last_mut() {
            parent.flush();
            if !candidate.is_empty() {
                parent.pieces.push(candidate.clone());
            }
        }
    }
    consider(best, candidate);
}

fn consider(best: &mut String, candidate: String) {
    if candidate.chars().count() > best.chars().count() {
        *best = candidate;
    }
}

fn push_text(stack: &mut [Block], raw: &str) {
    if raw.is_empty() {
        return;
    }
    if let Some(block) = stack.last_mut() {
        block.run.push_str(&decode_entities(raw));
    }
}

/// Parses a tag at the start of `s` (which begins with '<'). Returns the
/// lowercased tag name, whether it is a closing tag, whether it self-closes,
/// and its byte length.
fn parse_tag(s: &str) -> Option<(String, bool, bool, usize)> {
    let bytes = s.as_bytes();
    let mut i = 1;
    let closing = bytes.get(i) == Some(&b'/');
    if closing {
        i += 1;
    }
    let name_start = i;
    while i < bytes.len() && bytes[i].is_ascii_alphanumeric() {
        i += 1;
    }
    if i == name_start || !bytes[name_start].is_ascii_alphabetic() {
        return None;
    }
    let name = s[name_start..i].to_ascii_lowercase();

    let mut quote: Option<u8> = None;
    while i < bytes.len() {
        let b = bytes[i];
        match quote {
            Some(q) if b == q => quote = None,
            Some(_) => {}
            None if b == b'"' || b == b'\'' => quote = Some(b),
            None if b == b'>' => {
                let self_closing = i > 0 && bytes[i - 1] == b'/';
                let void = matches!(name.as_str(), "img" | "hr" | "meta" | "link" | "input" | "wbr" | "source");
                return Some((name, closing, self_closing || void, i + 1));
            }
            None => {}
        }
        i += 1;
    }
    None
}

fn find_ascii_ci(haystack: &str, needle: &str) -> Option<usize> {
    let needle = needle.as_bytes();
    haystack
        .as_bytes()
        .windows(needle.len())
        .position(|w| w.eq_ignore_ascii_case(needle))
}

fn find_element_text(html: &str, tag: &str) -> Option<String> {
    let open = find_ascii_ci(html, &format!("<{tag}"))?;
    let after_open = &html[open..];
    let start = after_open.find('>')? + 1;
    let inner = &after_open[start..];
    let end = find_ascii_ci(inner, &format!("</{tag}"))?;
    let text = strip_tags(&inner[..end]);
    let text = normalize_ws(&decode_entities(&text));
    (!text.is_empty()).then_some(text)
}

fn strip_tags(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut in_tag = false;
    for c in s.chars() {
        match c {
            '<' => in_tag = true,
            '>' if in_tag => {
                in_tag = false;
                out.push(' ');
            }
            _ if !in_tag => out.push(c),
            _ => {}
        }
    }
    out
}

fn normalize_ws(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn decode_entities(s: &str) -> String {
    if !s.contains('&') {
        return s.to_string();
    }
    let mut out = String::with_capacity(s.len());
    let mut rest = s;
    while let Some(amp) = rest.find('&') {
        out.push_str(&rest[..amp]);
        rest = &rest[amp..];
        let decoded = rest[1..].find(';').filter(|&n| n <= 10).and_then(|n| {
            let entity = &rest[1..1 + n];
            decode_entity(entity).map(|c| (c, n + 2))
        });
        match decoded {
            Some((c, len)) => {
                out.push(c);
                rest = &rest[len..];
            }
            None => {
                out.push('&');
                rest = &rest[1..];
            }
        }
    }
    out.push_str(rest);
    out
}

fn decode_entity(entity: &str) -> Option<char> {
    if let Some(num) = entity.strip_prefix('#') {
        let code = match num.strip_prefix(['x', 'X']) {
            Some(hex) => u32::from_str_radix(hex, 16).ok()?,
            None => num.parse().ok()?,
        };
        return char::from_u32(code);
    }
    Some(match entity {
        "amp" => '&',
        "lt" => '<',
        "gt" => '>',
        "quot" => '"',
        "apos" => '\'',
        "nbsp" => ' ',
        "mdash" => '—',
        "ndash" => '–',
        "lsquo" => '‘',
        "rsquo" => '’',
        "ldquo" => '“',
        "rdquo" => '”',
        "hellip" => '…',
        _ => return None,
    })
}
