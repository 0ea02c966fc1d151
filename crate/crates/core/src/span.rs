use serde::{Deserialize, Serialize};

/// Half-open range of character (not byte) offsets into a sentence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub const fn new(start: usize, end: usize) -> Self {
        Self { start, end }
    }

    pub const fn len(&self) -> usize {
        self.end.saturating_sub(self.start)
    }

    pub const fn is_empty(&self) -> bool {
        self.end <= self.start
    }

    pub const fn overlaps(&self, other: &Span) -> bool {
        self.start < other.end && other.start < self.end
    }

    pub const fn contains(&self, other: &Span) -> bool {
        self.start <= other.start && other.end <= self.end
    }

    /// Slices `text` by character offsets. Returns `None` when the span runs
    /// past the end of the text.
    pub fn slice<'a>(&self, text: &'a str) -> Option<&'a str> {
        if self.start > self.end {
            return None;
        }
        let mut start_byte = None;
        let mut end_byte = None;
        let mut count = 0;
        for (byte, _) in text.char_indices() {
            if count == self.start {
                start_byte = Some(byte);
            }
            if count == self.end {
                end_byte = Some(byte);
                break;
            }
            count += 1;
        }
        if count == self.start && start_byte.is_none() {
            start_byte = Some(text.len());
        }
        if end_byte.is_none() && count == self.end {
            end_byte = Some(text.len());
        }
        Some(&text[start_byte?..end_byte?])
    }
}

/// Half-open range of token indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TokenRange {
    pub start: usize,
    pub end: usize,
}

impl TokenRange {
    pub const fn new(start: usize, end: usize) -> Self {
        Self { start, end }
    }

    pub const fn len(&self) -> usize {
        self.end.saturating_sub(self.start)
    }

    pub const fn is_empty(&self) -> bool {
        self.end <= self.start
    }

    pub const fn contains_index(&self, idx: usize) -> bool {
        self.start <= idx && idx < self.end
    }

    pub const fn overlaps(&self, other: &TokenRange) -> bool {
        self.start < other.end && other.start < self.end
    }

    pub const fn contains(&self, other: &TokenRange) -> bool {
        self.start <= other.start && other.end <= self.end
    }
}
