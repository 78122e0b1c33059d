mod common;

use common::{golden_context, golden_path, GOLDEN_QUESTION};
use linkrag_core::llm::{PromptKind, PromptRenderer};

#[test]
fn every_kind_matches_its_golden_file() {
    let ctx = golden_context();
    let renderer = PromptRenderer::default();
    for kind in PromptKind::ALL {
        let expected = std::fs::read_to_string(golden_path(kind.as_str())).unwrap();
        let rendered = renderer.render(kind, &ctx, GOLDEN_QUESTION).unwrap();
        assert_eq!(rendered.text, expected, "{kind}");
    }
}

#[test]
fn question_and_chunks_appear_exactly_once() {
    let ctx = golden_context();
    for kind in PromptKind::ALL {
        let text = PromptRenderer::default()
            .render(kind, &ctx, GOLDEN_QUESTION)
            .unwrap()
            .text;
        assert_eq!(text.matches(GOLDEN_QUESTION).count(), 1, "{kind}");
        for chunk in ctx.final_chunks() {
            assert_eq!(text.matches(chunk.text.as_str()).count(), 1, "{kind}: {}", chunk.id);
        }
    }
}
