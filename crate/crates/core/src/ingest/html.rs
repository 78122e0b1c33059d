//! Anchor-aligned section extraction from documentation HTML.
//!
//! Section boundaries follow the layout Sphinx emits: a `<section id=..>`
//! (or `<div class="section" id=..>`), any element with an `id` whose first
//! element child is a heading, or a heading that carries an `id` itself.
//! Text before the first boundary lands in a synthetic `page-root` section.

use std::collections::HashSet;
use std::ops::Range;

use ego_tree::NodeRef;
use scraper::{ElementRef, Html, Node};

use super::links::{extract_link_context, LinkNormalizer, LinkRef, LinkWarning};
use super::{IngestError, Section, SourceDocument};

/// Anchor given to content that precedes the first anchored section.
pub const PAGE_ROOT_ANCHOR: &str = "page-root";

const SKIPPED: &[&str] = &[
    "head", "script", "style", "noscript", "template", "nav", "footer", "svg", "iframe", "object",
];

/// Classes Sphinx puts on navigation and footer containers.
const CHROME_CLASSES: &[&str] = &["headerlink", "sphinxsidebar", "related", "footer"];

const PARAGRAPH_BLOCKS: &[&str] = &[
    "p",
    "div",
    "section",
    "article",
    "main",
    "header",
    "footer",
    "aside",
    "h1",
    "h2",
    "h3",
    "h4",
    "h5",
    "h6",
    "ul",
    "ol",
    "dl",
    "table",
    "pre",
    "blockquote",
    "figure",
    "form",
    "hr",
];

const LINE_BLOCKS: &[&str] = &["li", "dt", "dd", "tr", "br", "figcaption", "caption", "thead", "tbody"];

/// Sections plus any links that had to be dropped.
#[derive(Debug, Clone, Default)]
pub struct ParsedDocument {
    pub sections: Vec<Section>,
    pub warnings: Vec<LinkWarning>,
}

pub fn parse_document(doc: &SourceDocument, normalizer: &LinkNormalizer) -> Result<ParsedDocument, IngestError> {
    let bytes = doc.html.strip_prefix(b"\xEF\xBB\xBF").unwrap_or(&doc.html);
    let source = std::str::from_utf8(bytes).map_err(|e| IngestError::Decode {
        url: doc.url.clone(),
        reason: e.to_string(),
    })?;
    let html = Html::parse_document(source);

    let mut walker = Walker {
        url: &doc.url,
        normalizer,
        sections: vec![Builder::new(PAGE_ROOT_ANCHOR.to_string())],
        stack: vec![0],
        pre_depth: 0,
        used_anchors: HashSet::from([PAGE_ROOT_ANCHOR.to_string()]),
        warnings: Vec::new(),
    };
    walker.walk_children(html.tree.root());

    let sections = walker
        .sections
        .into_iter()
        .filter(|b| !b.text.out.is_empty() || !b.links.is_empty())
        .map(|b| b.finish(&doc.url))
        .collect();
    Ok(ParsedDocument {
        sections,
        warnings: walker.warnings,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Break {
    None,
    Space,
    Line,
    Paragraph,
}

/// Accumulates visible text with collapsed whitespace while tracking the
/// character spans of open links.
#[derive(Debug)]
struct TextBuf {
    out: String,
    chars: usize,
    pending: Break,
    spans: Vec<(Option<usize>, Option<usize>)>,
}

impl TextBuf {
    fn new() -> Self {
        Self {
            out: String::new(),
            chars: 0,
            pending: Break::None,
            spans: Vec::new(),
        }
    }

    fn request(&mut self, brk: Break) {
        self.pending = self.pending.max(brk);
    }

    fn push_word(&mut self, word: &str) {
        if !self.out.is_empty() {
            let sep = match self.pending {
                Break::None => "",
                Break::Space => " ",
                Break::Line => "\n",
                Break::Paragraph => "\n\n",
            };
            self.out.push_str(sep);
            self.chars += sep.len();
        }
        self.pending = Break::None;
        for span in &mut self.spans {
            if span.0.is_none() && span.1.is_none() {
                span.0 = Some(self.chars);
            }
        }
        self.out.push_str(word);
        self.chars += word.chars().count();
    }

    fn push_text(&mut self, text: &str) {
        if text.starts_with(char::is_whitespace) {
            self.request(Break::Space);
        }
        let mut words = text.split_whitespace().peekable();
        while let Some(word) = words.next() {
            self.push_word(word);
            if words.peek().is_some() {
                self.request(Break::Space);
            }
        }
        if text.ends_with(char::is_whitespace) {
            self.request(Break::Space);
        }
    }

    fn push_preformatted(&mut self, text: &str) {
        for (i, line) in text.split('\n').enumerate() {
            if i > 0 {
                self.request(Break::Line);
            }
            self.push_text(line);
        }
    }

    fn open_span(&mut self) -> usize {
        self.spans.push((None, None));
        self.spans.len() - 1
    }

    fn close_span(&mut self, id: usize) -> Range<usize> {
        let end = self.chars;
        let span = &mut self.spans[id];
        let start = span.0.unwrap_or(end);
        span.0 = Some(start);
        span.1 = Some(end);
        start..end
    }
}

struct Builder {
    anchor: String,
    text: TextBuf,
    links: Vec<(super::links::NormalizedLink, Range<usize>)>,
}

impl Builder {
    fn new(anchor: String) -> Self {
        Self {
            anchor,
            text: TextBuf::new(),
            links: Vec::new(),
        }
    }

    fn finish(self, url: &str) -> Section {
        let text = self.text.out;
        let mut links = Vec::with_capacity(self.links.len());
        let mut link_spans = Vec::with_capacity(self.links.len());
        for (link, span) in self.links {
            let context = extract_link_context(&text, span.clone());
            links.push(LinkRef {
                target_url: link.target_url,
                target_anchor: link.target_anchor,
                context,
                is_internal: link.is_internal,
            });
            link_spans.push(span);
        }
        Section {
            source_url: url.to_string(),
            anchor_name: self.anchor,
            text,
            links,
            link_spans,
        }
    }
}

struct Walker<'a> {
    url: &'a str,
    normalizer: &'a LinkNormalizer,
    sections: Vec<Builder>,
    stack: Vec<usize>,
    pre_depth: usize,
    used_anchors: HashSet<String>,
    warnings: Vec<LinkWarning>,
}

enum Boundary {
    Container(String),
    Heading(String),
}

impl<'a> Walker<'a> {
    fn current(&mut self) -> &mut Builder {
        let idx = *self.stack.last().expect("section stack never empty");
        &mut self.sections[idx]
    }

    fn open_section(&mut self, anchor: &str) {
        let mut name = anchor.to_string();
        let mut n = 2;
        while !self.used_anchors.insert(name.clone()) {
            name = format!("{anchor}_{n}");
            n += 1;
        }
        self.sections.push(Builder::new(name));
        self.stack.push(self.sections.len() - 1);
    }

    fn walk_children(&mut self, node: NodeRef<'_, Node>) {
        let base = self.stack.len();
        for child in node.children() {
            if let Some(el) = ElementRef::wrap(child) {
                if let Some(Boundary::Heading(id)) = boundary(&el) {
                    self.stack.truncate(base);
                    self.open_section(&id);
                    self.walk_element_content(el);
                    continue;
                }
            }
            self.walk_node(child);
        }
        self.stack.truncate(base);
    }

    fn walk_node(&mut self, node: NodeRef<'_, Node>) {
        match node.value() {
            Node::Text(text) => {
                let pre = self.pre_depth > 0;
                let buf = &mut self.current().text;
                if pre {
                    buf.push_preformatted(text);
                } else {
                    buf.push_text(text);
                }
            }
            Node::Element(_) => {
                let el = ElementRef::wrap(node).expect("element node");
                let entry = self.stack.len();
                if let Some(Boundary::Container(id)) = boundary(&el) {
                    self.open_section(&id);
                }
                self.walk_element_content(el);
                self.stack.truncate(entry);
            }
            _ => {}
        }
    }

    fn walk_element_content(&mut self, el: ElementRef<'_>) {
        let name = el.value().name();
        if SKIPPED.contains(&name) {
            return;
        }
        if el.value().classes().any(|c| CHROME_CLASSES.contains(&c)) {
            return;
        }

        let brk = block_break(name);
        self.current().text.request(brk);
        if name == "pre" {
            self.pre_depth += 1;
        }

        let link = match (name, el.value().attr("href")) {
            ("a", Some(href)) => match self.normalizer.normalize(href, self.url) {
                Ok(link) => {
                    let section = *self.stack.last().expect("section stack never empty");
                    let span = self.sections[section].text.open_span();
                    Some((section, span, link))
                }
                Err(warning) => {
                    self.warnings.push(warning);
                    None
                }
            },
            _ => None,
        };

        self.walk_children(*el);

        if let Some((section, span, link)) = link {
            let builder = &mut self.sections[section];
            let range = builder.text.close_span(span);
            builder.links.push((link, range));
        }
        if name == "pre" {
            self.pre_depth -= 1;
        }
        self.current().text.request(brk);
    }
}

fn block_break(name: &str) -> Break {
    if PARAGRAPH_BLOCKS.contains(&name) {
        Break::Paragraph
    } else if LINE_BLOCKS.contains(&name) {
        Break::Line
    } else if matches!(name, "td" | "th") {
        Break::Space
    } else {
        Break::None
    }
}

fn is_heading(name: &str) -> bool {
    matches!(name, "h1" | "h2" | "h3" | "h4" | "h5" | "h6")
}

fn boundary(el: &ElementRef<'_>) -> Option<Boundary> {
    let value = el.value();
    let id = value.id().map(str::trim).filter(|id| !id.is_empty())?;
    let name = value.name();
    if is_heading(name) {
        return Some(Boundary::Heading(id.to_string()));
    }
    let sectioning = name == "section" || (name == "div" && value.classes().any(|c| c == "section"));
    let heading_led = el
        .children()
        .find_map(ElementRef::wrap)
        .is_some_and(|first| is_heading(first.value().name()));
    (sectioning || heading_led).then(|| Boundary::Container(id.to_string()))
}
