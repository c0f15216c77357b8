use super::TokenizedText;

/// Deterministic whitespace + punctuation-peeling tokenizer.
///
/// The text is split on Unicode whitespace, then every leading and trailing
/// non-alphanumeric character of a chunk becomes its own single-character
/// token. Interior punctuation (hyphens, apostrophes) stays attached.
/// Lowercasing applies to the emitted token strings only; spans always
/// reference the original raw string.
pub fn tokenize(text: &str, lowercase: bool) -> TokenizedText {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let mut spans = Vec::new();
    let mut i = 0usize;
    while i < chars.len() {
        if chars[i].is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        while i < chars.len() && !chars[i].is_whitespace() {
            i += 1;
        }
        split_chunk(&chars, start, i, lowercase, &mut tokens, &mut spans);
    }
    TokenizedText {
        raw: text.to_string(),
        tokens,
        spans,
    }
}

fn peelable(c: char) -> bool {
    !c.is_alphanumeric()
}

fn split_chunk(
    chars: &[char],
    start: usize,
    end: usize,
    lowercase: bool,
    tokens: &mut Vec<String>,
    spans: &mut Vec<(usize, usize)>,
) {
    let mut lo = start;
    let mut hi = end;
    while lo < hi && peelable(chars[lo]) {
        push_token(chars, lo, lo + 1, lowercase, tokens, spans);
        lo += 1;
    }
    let mut trailing = Vec::new();
    while hi > lo && peelable(chars[hi - 1]) {
        trailing.push(hi - 1);
        hi -= 1;
    }
    if lo < hi {
        push_token(chars, lo, hi, lowercase, tokens, spans);
    }
    for s in trailing.into_iter().rev() {
        push_token(chars, s, s + 1, lowercase, tokens, spans);
    }
}

fn push_token(
    chars: &[char],
    start: usize,
    end: usize,
    lowercase: bool,
    tokens: &mut Vec<String>,
    spans: &mut Vec<(usize, usize)>,
) {
    let token: String = if lowercase {
        chars[start..end].iter().flat_map(|c| c.to_lowercase()).collect()
    } else {
        chars[start..end].iter().collect()
    };
    tokens.push(token);
    spans.push((start, end));
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn peels_trailing_punctuation() {
        let t = tokenize("Good movie!", false);
        assert_eq!(t.tokens, vec!["Good", "movie", "!"]);
        assert_eq!(t.spans, vec![(0, 4), (5, 10), (10, 11)]);
    }

    #[test]
    fn empty_text_yields_no_tokens() {
        let t = tokenize("", false);
        assert!(t.tokens.is_empty());
        assert!(t.spans.is_empty());
    }

    #[test]
    fn multiple_spaces_are_skipped() {
        let t = tokenize("a  b", false);
        assert_eq!(t.tokens, vec!["a", "b"]);
        assert_eq!(t.spans, vec![(0, 1), (3, 4)]);
    }

    #[test]
    fn lowercasing_keeps_spans_on_raw() {
        let t = tokenize("Good DAY", true);
        assert_eq!(t.tokens, vec!["good", "day"]);
        assert_eq!(t.raw_token(0), "Good");
        assert_eq!(t.raw_token(1), "DAY");
    }

    #[test]
    fn interior_punctuation_stays_attached() {
        let t = tokenize("well-known don't \"quoted\"", false);
        assert_eq!(t.tokens, vec!["well-known", "don't", "\"", "quoted", "\""]);
    }

    #[test]
    fn all_punctuation_chunk_splits_per_char() {
        let t = tokenize("...", false);
        assert_eq!(t.tokens, vec![".", ".", "."]);
        assert_eq!(t.spans, vec![(0, 1), (1, 2), (2, 3)]);
    }

    #[test]
    fn replace_tokens_rebuilds_raw_exactly() {
        let t = tokenize("Good  movie, truly!", false);
        assert_eq!(t.replace_tokens(&[]), "Good  movie, truly!");
        assert_eq!(t.replace_tokens(&[(0, "g00d")]), "g00d  movie, truly!");
        assert_eq!(
            t.replace_tokens(&[(1, "film"), (3, "really")]),
            "Good  film, really!"
        );
    }

    #[test]
    fn unicode_offsets_are_character_based() {
        let t = tokenize("héllo wörld!", false);
        assert_eq!(t.tokens, vec!["héllo", "wörld", "!"]);
        assert_eq!(t.spans, vec![(0, 5), (6, 11), (11, 12)]);
        assert_eq!(t.raw_token(1), "wörld");
    }
}
