//! Hyperlink normalization and the twelve-word link context window.

use std::ops::Range;

use serde::{Deserialize, Serialize};
use url::Url;

/// Maximum number of words kept in a link context.
pub const CONTEXT_WORDS: usize = 12;

/// An outgoing hyperlink resolved to an absolute target.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkRef {
    pub target_url: String,
    pub target_anchor: Option<String>,
    /// Up to twelve words surrounding the link in its source section.
    pub context: String,
    pub is_internal: bool,
}

impl LinkRef {
    /// The link as it would appear in an `href`, fragment included.
    pub fn href(&self) -> String {
        match &self.target_anchor {
            Some(anchor) => format!("{}#{}", self.target_url, anchor),
            None => self.target_url.clone(),
        }
    }
}

/// A link that was dropped during ingestion.
///
/// Serialized one object per line into the warnings log.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkWarning {
    pub href: String,
    pub base: String,
    pub reason: String,
}

/// Result of normalizing one `href`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizedLink {
    pub target_url: String,
    pub target_anchor: Option<String>,
    pub is_internal: bool,
}

/// Resolves raw `href` values against their page and classifies them as
/// internal (under the corpus root prefix) or external.
#[derive(Debug, Clone)]
pub struct LinkNormalizer {
    corpus_prefix: String,
}

impl LinkNormalizer {
    pub fn new(corpus_prefix: impl Into<String>) -> Self {
        Self {
            corpus_prefix: corpus_prefix.into(),
        }
    }

    pub fn corpus_prefix(&self) -> &str {
        &self.corpus_prefix
    }

    pub fn normalize(&self, href: &str, base_url: &str) -> Result<NormalizedLink, LinkWarning> {
        let warn = |reason: String| LinkWarning {
            href: href.to_string(),
            base: base_url.to_string(),
            reason,
        };

        let href = href.trim();
        if href.is_empty() {
            return Err(warn("empty href".to_string()));
        }
        let base = Url::parse(base_url).map_err(|e| warn(format!("invalid base url: {e}")))?;
        let mut target = base.join(href).map_err(|e| warn(format!("unparsable href: {e}")))?;

        match target.scheme() {
            "http" | "https" | "file" => {}
            other => return Err(warn(format!("unsupported scheme `{other}`"))),
        }

        let target_anchor = target.fragment().filter(|f| !f.is_empty()).map(percent_decode);
        target.set_fragment(None);
        let target_url = target.to_string();
        let is_internal = !self.corpus_prefix.is_empty() && target_url.starts_with(&self.corpus_prefix);

        Ok(NormalizedLink {
            target_url,
            target_anchor,
            is_internal,
        })
    }
}

fn percent_decode(fragment: &str) -> String {
    let bytes = fragment.as_bytes();
    let mut out = Vec::with_capacity(bytes.len());
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == b'%' && i + 2 < bytes.len() {
            let hex = std::str::from_utf8(&bytes[i + 1..i + 3]).ok();
            if let Some(v) = hex.and_then(|h| u8::from_str_radix(h, 16).ok()) {
                out.push(v);
                i += 3;
                continue;
            }
        }
        out.push(bytes[i]);
        i += 1;
    }
    String::from_utf8(out).unwrap_or_else(|_| fragment.to_string())
}

/// Whitespace-delimited words of `text` with their character ranges.
pub(crate) fn word_spans(text: &str) -> Vec<(Range<usize>, &str)> {
    let mut spans = Vec::new();
    let mut start: Option<(usize, usize)> = None;
    let mut char_pos = 0;
    for (byte_pos, ch) in text.char_indices() {
        if ch.is_whitespace() {
            if let Some((cs, bs)) = start.take() {
                spans.push((cs..char_pos, &text[bs..byte_pos]));
            }
        } else if start.is_none() {
            start = Some((char_pos, byte_pos));
        }
        char_pos += 1;
    }
    if let Some((cs, bs)) = start {
        spans.push((cs..char_pos, &text[bs..]));
    }
    spans
}

/// Builds the context of a link whose anchor text occupies `link_span`
/// (character offsets into `section_text`).
///
/// Anchor words count toward the twelve; the remaining budget is split
/// before/after the anchor, with the extra word going before when odd.
/// Each side is clipped at the section boundary without spilling over to
/// the other side.
pub fn extract_link_context(section_text: &str, link_span: Range<usize>) -> String {
    let words = word_spans(section_text);
    if words.is_empty() {
        return String::new();
    }

    let overlaps = |r: &Range<usize>| {
        if link_span.is_empty() {
            false
        } else {
            r.start < link_span.end && link_span.start < r.end
        }
    };
    let first_anchor = words.iter().position(|(r, _)| overlaps(r));
    let (anchor_start, anchor_end) = match first_anchor {
        Some(first) => {
            let last = words.iter().rposition(|(r, _)| overlaps(r)).unwrap_or(first);
            (first, last + 1)
        }
        // Empty anchor text: the insertion point sits between words.
        None => {
            let at = words
                .iter()
                .position(|(r, _)| r.start >= link_span.start)
                .unwrap_or(words.len());
            (at, at)
        }
    };

    let anchor_len = (anchor_end - anchor_start).min(CONTEXT_WORDS);
    let remaining = CONTEXT_WORDS - anchor_len;
    let want_before = remaining.div_ceil(2);
    let want_after = remaining - want_before;

    let from = anchor_start.saturating_sub(want_before);
    let to = (anchor_start + anchor_len + want_after).min(words.len());
    words[from..to].iter().map(|(_, w)| *w).collect::<Vec<_>>().join(" ")
}
