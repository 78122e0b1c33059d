//! Recursive character splitting with overlap.
//!
//! Every chunk is returned as a character range into the original text, so
//! chunks are always exact substrings and link offsets can be mapped onto
//! them without re-searching.

use std::collections::VecDeque;
use std::ops::Range;

/// Separator hierarchy, coarsest first.
pub const SEPARATORS: [&str; 4] = ["\n\n", "\n", ". ", " "];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TextSplitter {
    chunk_size: usize,
    overlap: usize,
}

impl TextSplitter {
    /// Returns `None` unless `chunk_size >= 1` and `overlap < chunk_size`.
    pub fn new(chunk_size: usize, overlap: usize) -> Option<Self> {
        (chunk_size >= 1 && overlap < chunk_size).then_some(Self { chunk_size, overlap })
    }

    pub fn chunk_size(&self) -> usize {
        self.chunk_size
    }

    pub fn overlap(&self) -> usize {
        self.overlap
    }

    /// Splits `text` into character ranges of at most `chunk_size` chars.
    pub fn split(&self, text: &str) -> Vec<Range<usize>> {
        let chars: Vec<char> = text.chars().collect();
        if chars.is_empty() {
            return Vec::new();
        }
        let seps: Vec<Vec<char>> = SEPARATORS.iter().map(|s| s.chars().collect()).collect();
        self.split_range(&chars, 0..chars.len(), &seps)
    }

    /// Splits into texts rather than ranges.
    pub fn split_text(&self, text: &str) -> Vec<String> {
        let chars: Vec<char> = text.chars().collect();
        self.split(text)
            .into_iter()
            .map(|r| chars[r].iter().collect())
            .collect()
    }

    fn split_range(&self, chars: &[char], range: Range<usize>, seps: &[Vec<char>]) -> Vec<Range<usize>> {
        if range.len() <= self.chunk_size {
            return vec![range];
        }
        let Some(level) = seps.iter().position(|sep| find(chars, &range, sep).is_some()) else {
            return character_windows(range.len(), self.chunk_size, self.overlap)
                .into_iter()
                .map(|r| r.start + range.start..r.end + range.start)
                .collect();
        };

        let pieces = split_keep_separator(chars, range, &seps[level]);
        let mut out = Vec::new();
        let mut pending = Vec::new();
        for piece in pieces {
            if piece.len() <= self.chunk_size {
                pending.push(piece);
            } else {
                out.extend(self.merge(std::mem::take(&mut pending)));
                out.extend(self.split_range(chars, piece, &seps[level + 1..]));
            }
        }
        out.extend(self.merge(pending));
        out
    }

    /// Packs contiguous splits into windows, carrying trailing splits of up
    /// to `overlap` chars into the next window.
    fn merge(&self, splits: Vec<Range<usize>>) -> Vec<Range<usize>> {
        let mut chunks = Vec::new();
        let mut window: VecDeque<Range<usize>> = VecDeque::new();
        let mut total = 0;
        for split in splits {
            let len = split.len();
            if total + len > self.chunk_size && !window.is_empty() {
                chunks.push(span(&window));
                while total > self.overlap || (total > 0 && total + len > self.chunk_size) {
                    let dropped = window.pop_front().expect("window total is positive");
                    total -= dropped.len();
                }
            }
            total += len;
            window.push_back(split);
        }
        if !window.is_empty() {
            chunks.push(span(&window));
        }
        chunks
    }
}

fn span(window: &VecDeque<Range<usize>>) -> Range<usize> {
    window.front().map_or(0, |r| r.start)..window.back().map_or(0, |r| r.end)
}

/// Fixed windows of `size` chars advancing by `size - overlap`.
pub fn character_windows(len: usize, size: usize, overlap: usize) -> Vec<Range<usize>> {
    assert!(size >= 1 && overlap < size, "invalid window parameters");
    let mut out = Vec::new();
    let mut start = 0;
    while start < len {
        let end = (start + size).min(len);
        out.push(start..end);
        if end == len {
            break;
        }
        start += size - overlap;
    }
    out
}

fn find(chars: &[char], range: &Range<usize>, sep: &[char]) -> Option<usize> {
    chars[range.clone()]
        .windows(sep.len())
        .position(|w| w == sep)
        .map(|p| p + range.start)
}

/// Splits after each separator occurrence; separators stay on the left piece.
fn split_keep_separator(chars: &[char], range: Range<usize>, sep: &[char]) -> Vec<Range<usize>> {
    let mut pieces = Vec::new();
    let mut start = range.start;
    let mut i = range.start;
    while i + sep.len() <= range.end {
        if chars[i..i + sep.len()] == *sep {
            let end = i + sep.len();
            pieces.push(start..end);
            start = end;
            i = end;
        } else {
            i += 1;
        }
    }
    if start < range.end {
        pieces.push(start..range.end);
    }
    pieces
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn invalid_parameters_rejected() {
        assert!(TextSplitter::new(0, 0).is_none());
        assert!(TextSplitter::new(10, 10).is_none());
        assert!(TextSplitter::new(10, 9).is_some());
    }

    #[test]
    fn short_text_is_one_chunk() {
        let s = TextSplitter::new(1000, 150).unwrap();
        let text = "a".repeat(900);
        assert_eq!(s.split(&text), vec![0..900]);
    }

    #[test]
    fn empty_text_has_no_chunks() {
        let s = TextSplitter::new(1000, 150).unwrap();
        assert!(s.split("").is_empty());
    }

    #[test]
    fn window_fallback_offsets() {
        // No separators anywhere, so the fixed window applies.
        let s = TextSplitter::new(1000, 150).unwrap();
        let text = "x".repeat(2500);
        let starts: Vec<usize> = s.split(&text).iter().map(|r| r.start).collect();
        assert_eq!(starts, vec![0, 850, 1700]);
        // Oracle: start_{i+1} = start_i + (size - overlap) until the end is covered.
        let mut oracle = vec![0usize];
        while oracle.last().unwrap() + 1000 < 2500 {
            let next = oracle.last().unwrap() + 850;
            oracle.push(next);
        }
        assert_eq!(starts, oracle);
    }

    #[test]
    fn prefers_paragraph_boundaries() {
        let s = TextSplitter::new(30, 5).unwrap();
        let text = "first paragraph here.\n\nsecond paragraph here.";
        let parts = s.split_text(text);
        assert_eq!(parts, vec!["first paragraph here.\n\n", "second paragraph here."]);
    }

    #[test]
    fn word_level_merge_carries_overlap() {
        let s = TextSplitter::new(12, 4).unwrap();
        let parts = s.split_text("aaa bbb ccc ddd eee");
        assert!(parts.iter().all(|p| p.chars().count() <= 12));
        assert_eq!(parts, vec!["aaa bbb ccc ", "ccc ddd eee"]);
    }

    fn reconstruct(text: &str, ranges: &[Range<usize>]) -> String {
        let chars: Vec<char> = text.chars().collect();
        let mut out = String::new();
        let mut covered = 0;
        for r in ranges {
            assert!(r.start <= covered, "gap before {r:?}");
            let from = covered.max(r.start);
            out.extend(&chars[from..r.end]);
            covered = covered.max(r.end);
        }
        out
    }

    proptest! {
        #[test]
        fn windows_reconstruct_exactly(text in "[a-zA-Zé0-9]{0,400}", size in 1usize..80, overlap_frac in 0.0f64..1.0) {
            let overlap = ((size as f64) * overlap_frac) as usize;
            let overlap = overlap.min(size - 1);
            let s = TextSplitter::new(size, overlap).unwrap();
            let ranges = s.split(&text);
            for w in ranges.windows(2) {
                prop_assert_eq!(w[0].end - w[1].start, overlap);
            }
            prop_assert_eq!(reconstruct(&text, &ranges), text);
        }

        #[test]
        fn recursive_chunks_cover_text_within_size(text in "[a-z .\n]{0,600}", size in 5usize..120, overlap in 0usize..40) {
            prop_assume!(overlap < size);
            let s = TextSplitter::new(size, overlap).unwrap();
            let ranges = s.split(&text);
            for r in &ranges {
                prop_assert!(r.len() <= size && !r.is_empty());
            }
            for w in ranges.windows(2) {
                prop_assert!(w[0].start < w[1].start && w[0].end < w[1].end);
            }
            prop_assert_eq!(reconstruct(&text, &ranges), text);
        }
    }
}
