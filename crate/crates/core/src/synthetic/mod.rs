//! A small bundled documentation corpus with planted prerequisite links,
//! plus a matching benchmark suite. Used for demos and tests.

mod pages;

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use crate::bench::{write_suite, BenchmarkCase};
use crate::ingest::SourceDocument;

use pages::{PageDef, CASES, PAGES};

/// URL prefix the corpus is published under.
pub const BASE_URL: &str = "https://docs.tessera.example/";
/// Product name used throughout the corpus.
pub const PRODUCT: &str = "Tessera";
pub const SUITE_FILE: &str = "benchmark.jsonl";

pub fn page_paths() -> Vec<&'static str> {
    PAGES.iter().map(|p| p.path).collect()
}

pub fn source_documents() -> Vec<SourceDocument> {
    PAGES
        .iter()
        .map(|p| SourceDocument {
            url: format!("{BASE_URL}{}", p.path),
            html: render_page(p).into_bytes(),
        })
        .collect()
}

pub fn benchmark_suite() -> Vec<BenchmarkCase> {
    CASES
        .iter()
        .map(|(id, q, r)| BenchmarkCase {
            query_id: id.to_string(),
            question: q.to_string(),
            reference: r.to_string(),
        })
        .collect()
}

/// Files written by [`materialize`].
#[derive(Debug, Clone)]
pub struct Materialized {
    pub root: PathBuf,
    pub pages: Vec<PathBuf>,
    pub suite: PathBuf,
}

/// Writes every page under `dir` (keeping the relative layout) and the
/// benchmark suite as `dir/benchmark.jsonl`.
pub fn materialize(dir: &Path) -> io::Result<Materialized> {
    let mut written = Vec::with_capacity(PAGES.len());
    for page in PAGES {
        let path = dir.join(page.path);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent)?;
        }
        fs::write(&path, render_page(page))?;
        written.push(path);
    }
    let suite = dir.join(SUITE_FILE);
    write_suite(&benchmark_suite(), io::BufWriter::new(fs::File::create(&suite)?))?;
    Ok(Materialized {
        root: dir.to_path_buf(),
        pages: written,
        suite,
    })
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Expands `[label](href)` into anchors; everything else is escaped text.
fn inline(text: &str) -> String {
    let mut out = String::new();
    let mut rest = text;
    while let Some(open) = rest.find('[') {
        let after = &rest[open + 1..];
        let link = after.find("](").and_then(|mid| {
            let close = after[mid + 2..].find(')')? + mid + 2;
            Some((&after[..mid], &after[mid + 2..close], close))
        });
        match link {
            Some((label, href, close)) if !label.contains('[') => {
                out.push_str(&escape(&rest[..open]));
                out.push_str(&format!(
                    "<a class=\"reference internal\" href=\"{}\">{}</a>",
                    escape(href),
                    escape(label)
                ));
                rest = &after[close + 1..];
            }
            _ => {
                out.push_str(&escape(&rest[..=open]));
                rest = after;
            }
        }
    }
    out.push_str(&escape(rest));
    out
}

fn paragraphs(body: &str) -> String {
    body.split("\n\n")
        .map(|p| format!("<p>{}</p>\n", inline(p.trim())))
        .collect()
}

fn page_anchor(page: &PageDef) -> String {
    page.title
        .to_lowercase()
        .split(|c: char| !c.is_alphanumeric())
        .filter(|w| !w.is_empty())
        .collect::<Vec<_>>()
        .join("-")
}

fn render_page(page: &PageDef) -> String {
    let depth = page.path.matches('/').count();
    let root = "../".repeat(depth);
    let anchor = page_anchor(page);
    let mut html = format!(
        "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n<title>{title} &#8212; {PRODUCT} documentation</title>\n\
         <link rel=\"stylesheet\" href=\"{root}_static/basic.css\">\n</head>\n<body>\n\
         <nav class=\"sphinxsidebar\"><a href=\"{root}index.html\">{PRODUCT} documentation</a></nav>\n\
         <div class=\"document\"><div class=\"body\" role=\"main\">\n\
         <section id=\"{anchor}\">\n<h1>{title}<a class=\"headerlink\" href=\"#{anchor}\">¶</a></h1>\n{intro}",
        title = escape(page.title),
        intro = paragraphs(page.intro),
    );
    for (id, heading, body) in page.sections {
        html.push_str(&format!(
            "<section id=\"{id}\">\n<h2>{heading}<a class=\"headerlink\" href=\"#{id}\">¶</a></h2>\n{body}</section>\n",
            heading = escape(heading),
            body = paragraphs(body),
        ));
    }
    html.push_str("</section>\n</div></div>\n<footer>&#169; Tessera Labs</footer>\n</body>\n</html>\n");
    html
}
