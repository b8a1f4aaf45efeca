use std::collections::HashSet;

/// Lowercases `text`, splits on every non-alphanumeric character and drops
/// tokens shorter than two characters, all-digit tokens and stopwords.
pub fn tokenize(text: &str, stopwords: &HashSet<String>) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(str::to_lowercase)
        .filter(|t| t.chars().count() >= 2)
        .filter(|t| !t.chars().all(|c| c.is_ascii_digit()))
        .filter(|t| !stopwords.contains(t))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(words: &[&str]) -> HashSet<String> {
        words.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn lowercases_and_drops_stopwords() {
        assert_eq!(
            tokenize("The heart, the HEART!", &set(&["the"])),
            vec!["heart", "heart"]
        );
    }

    #[test]
    fn empty_text() {
        assert!(tokenize("", &set(&[])).is_empty());
    }

    #[test]
    fn digits_and_short_tokens() {
        assert_eq!(tokenize("A1 42 ab", &set(&[])), vec!["a1", "ab"]);
        assert_eq!(tokenize("x-ray: 2024's", &set(&[])), vec!["ray"]);
    }
}
