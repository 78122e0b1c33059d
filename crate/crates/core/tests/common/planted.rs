//! Planted prerequisite-link fixture.
//!
//! Each case owns two pages built from its own pseudo-words. The guide page
//! has five sections that all carry the query words, so they fill a k=5
//! baseline. Only the first links to a target page, whose gold section
//! shares the link's context words and none of the query words.

use std::collections::HashSet;

use linkrag_core::ingest::SourceDocument;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const BASE: &str = "https://planted.example/docs/";

pub struct PlantedCase {
    pub question: String,
    /// Chunk id expected in the link-aware context.
    pub gold_id: String,
}

pub struct PlantedCorpus {
    pub documents: Vec<SourceDocument>,
    pub cases: Vec<PlantedCase>,
}

struct Vocab {
    rng: ChaCha8Rng,
    used: HashSet<String>,
}

impl Vocab {
    fn word(&mut self) -> String {
        loop {
            let len = self.rng.random_range(6..10);
            let w: String = (0..len)
                .map(|_| char::from(b'a' + self.rng.random_range(0..26u8)))
                .collect();
            if self.used.insert(w.clone()) {
                return w;
            }
        }
    }

    fn words(&mut self, n: usize) -> Vec<String> {
        (0..n).map(|_| self.word()).collect()
    }
}

fn section(id: &str, heading: &str, body: &str) -> String {
    format!("<section id=\"{id}\">\n<h2>{heading}</h2>\n<p>{body}</p>\n</section>\n")
}

fn page(anchor: &str, title: &str, sections: &str) -> Vec<u8> {
    format!(
        "<!DOCTYPE html>\n<html><head><title>{title}</title></head><body>\n\
         <div class=\"body\" role=\"main\">\n<section id=\"{anchor}\">\n<h1>{title}</h1>\n{sections}</section>\n\
         </div></body></html>\n"
    )
    .into_bytes()
}

pub fn planted_corpus(cases: usize, seed: u64) -> PlantedCorpus {
    let mut vocab = Vocab {
        rng: ChaCha8Rng::seed_from_u64(seed),
        used: HashSet::new(),
    };
    let mut documents = Vec::new();
    let mut out = Vec::new();

    for i in 0..cases {
        let query = vocab.words(4);
        let context = vocab.words(5);
        let q = query.join(" ");
        let target_path = format!("case{i:02}/target.html");

        let mut guide = section(
            "overview",
            &vocab.words(2).join(" "),
            &format!(
                "{q} {}. Before you start, read <a class=\"reference internal\" href=\"target.html\">{}</a> first.",
                vocab.words(3).join(" "),
                context.join(" ")
            ),
        );
        for d in 0..4 {
            guide.push_str(&section(
                &format!("decoy-{d}"),
                &vocab.words(2).join(" "),
                &format!("{q} {}.", vocab.words(4).join(" ")),
            ));
        }
        documents.push(SourceDocument {
            url: format!("{BASE}case{i:02}/guide.html"),
            html: page("guide", &vocab.words(2).join(" "), &guide),
        });

        let mut target = section("intro", &vocab.words(2).join(" "), &vocab.words(12).join(" "));
        target.push_str(&section(
            "gold",
            &vocab.words(2).join(" "),
            &format!("{} {}.", context.join(" "), vocab.words(6).join(" ")),
        ));
        target.push_str(&section(
            "appendix",
            &vocab.words(2).join(" "),
            &vocab.words(12).join(" "),
        ));
        let target_url = format!("{BASE}{target_path}");
        documents.push(SourceDocument {
            url: target_url.clone(),
            html: page("target", &vocab.words(2).join(" "), &target),
        });

        out.push(PlantedCase {
            question: format!("{q}?"),
            gold_id: format!("{target_url}:gold-0"),
        });
    }
    PlantedCorpus { documents, cases: out }
}
