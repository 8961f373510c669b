use serde::{Deserialize, Serialize};
use unicode_normalization::UnicodeNormalization;

/// How intra-word apostrophes (elisions such as `l'arbre`) are handled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ApostrophePolicy {
    /// `l'arbre` stays a single token.
    Keep,
    /// `l'arbre` becomes `l'` and `arbre`.
    #[default]
    Split,
    /// `l'arbre` becomes `l` and `arbre`.
    Strip,
}

/// How intra-word hyphens (`arc-en-ciel`, `dit-il`) are handled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum HyphenPolicy {
    #[default]
    Keep,
    Split,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct TokenizePolicy {
    pub apostrophe: ApostrophePolicy,
    pub hyphen: HyphenPolicy,
}

impl std::str::FromStr for ApostrophePolicy {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "keep" => Ok(Self::Keep),
            "split" => Ok(Self::Split),
            "strip" => Ok(Self::Strip),
            other => Err(format!("unknown apostrophe policy `{other}` (keep|split|strip)")),
        }
    }
}

impl std::str::FromStr for HyphenPolicy {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "keep" => Ok(Self::Keep),
            "split" => Ok(Self::Split),
            other => Err(format!("unknown hyphen policy `{other}` (keep|split)")),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Tokenized {
    pub tokens: Vec<String>,
    pub sentence_lengths: Vec<usize>,
}

/// NFC + lowercase, the normalization applied to every word form.
pub fn normalize_word(word: &str) -> String {
    word.nfc().collect::<String>().to_lowercase()
}

fn is_apostrophe(c: char) -> bool {
    matches!(c, '\'' | '\u{2019}' | '\u{02BC}')
}

fn is_hyphen(c: char) -> bool {
    matches!(c, '-' | '\u{2010}' | '\u{2011}')
}

fn is_terminal(c: char) -> bool {
    matches!(c, '.' | '!' | '?')
}

struct Builder {
    out: Tokenized,
    word: String,
    sentence: usize,
}

impl Builder {
    fn flush_word(&mut self) {
        if !self.word.is_empty() {
            self.out.tokens.push(std::mem::take(&mut self.word));
            self.sentence += 1;
        }
    }

    fn end_sentence(&mut self) {
        self.flush_word();
        if self.sentence > 0 {
            self.out.sentence_lengths.push(self.sentence);
            self.sentence = 0;
        }
    }
}

/// Splits raw text into lowercase word tokens and per-sentence word counts.
///
/// Sentences end on `.`, `!` or `?`. A period between two digits is kept as
/// part of a number (`3.5`). Any other non-alphanumeric character separates
/// tokens, except apostrophes and hyphens sitting between two word characters,
/// which follow `policy`.
pub fn tokenize(text: &str, policy: TokenizePolicy) -> Tokenized {
    let chars: Vec<char> = text.nfc().flat_map(char::to_lowercase).collect();
    let mut b = Builder {
        out: Tokenized::default(),
        word: String::new(),
        sentence: 0,
    };

    for (i, &c) in chars.iter().enumerate() {
        let prev_word = !b.word.is_empty();
        let next_alnum = chars.get(i + 1).is_some_and(|n| n.is_alphanumeric());
        if c.is_alphanumeric() {
            b.word.push(c);
        } else if is_apostrophe(c) && prev_word && next_alnum {
            match policy.apostrophe {
                ApostrophePolicy::Keep => b.word.push('\''),
                ApostrophePolicy::Split => {
                    b.word.push('\'');
                    b.flush_word();
                }
                ApostrophePolicy::Strip => b.flush_word(),
            }
        } else if is_hyphen(c) && prev_word && next_alnum {
            match policy.hyphen {
                HyphenPolicy::Keep => b.word.push('-'),
                HyphenPolicy::Split => b.flush_word(),
            }
        } else if c == '.'
            && b.word.chars().last().is_some_and(|p| p.is_ascii_digit())
            && chars.get(i + 1).is_some_and(|n| n.is_ascii_digit())
        {
            b.word.push('.');
        } else if is_terminal(c) {
            b.end_sentence();
        } else {
            b.flush_word();
        }
    }
    b.end_sentence();
    b.out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn toks(text: &str) -> Tokenized {
        tokenize(text, TokenizePolicy::default())
    }

    #[test]
    fn french_two_sentences() {
        let t = toks("Le chat dort. Il rêve!");
        assert_eq!(t.tokens, vec!["le", "chat", "dort", "il", "rêve"]);
        assert_eq!(t.sentence_lengths, vec![3, 2]);
    }

    #[test]
    fn empty_input() {
        assert_eq!(toks(""), Tokenized::default());
        assert_eq!(toks(" ... !? "), Tokenized::default());
    }

    #[test]
    fn case_folding() {
        assert_eq!(toks("ABC abc").tokens, vec!["abc", "abc"]);
    }

    #[test]
    fn trailing_text_without_terminal_is_a_sentence() {
        let t = toks("un deux. trois");
        assert_eq!(t.sentence_lengths, vec![2, 1]);
    }

    #[test]
    fn elision_policies() {
        let text = "L'arbre d’Anne";
        let run = |apostrophe| {
            tokenize(
                text,
                TokenizePolicy {
                    apostrophe,
                    ..Default::default()
                },
            )
            .tokens
        };
        assert_eq!(run(ApostrophePolicy::Keep), vec!["l'arbre", "d'anne"]);
        assert_eq!(run(ApostrophePolicy::Split), vec!["l'", "arbre", "d'", "anne"]);
        assert_eq!(run(ApostrophePolicy::Strip), vec!["l", "arbre", "d", "anne"]);
    }

    #[test]
    fn hyphen_policies_and_dangling_punctuation() {
        let keep = toks("arc-en-ciel - 'quote'");
        assert_eq!(keep.tokens, vec!["arc-en-ciel", "quote"]);
        let split = tokenize(
            "arc-en-ciel",
            TokenizePolicy {
                hyphen: HyphenPolicy::Split,
                ..Default::default()
            },
        );
        assert_eq!(split.tokens, vec!["arc", "en", "ciel"]);
    }

    #[test]
    fn digits_are_tokens() {
        let t = toks("Il a 3 chats et 2.5 kilos.");
        assert_eq!(t.tokens, vec!["il", "a", "3", "chats", "et", "2.5", "kilos"]);
        assert_eq!(t.sentence_lengths, vec![7]);
    }

    #[test]
    fn nfc_normalization_merges_decomposed_accents() {
        let decomposed = "re\u{0301}ve";
        assert_eq!(toks(decomposed).tokens, vec!["rêve".replace('ê', "é")]);
        assert_eq!(toks(decomposed).tokens[0].chars().count(), 4);
    }

    proptest! {
        #[test]
        fn lowercase_and_lengths_consistent(text in "\\PC{0,80}") {
            let t = toks(&text);
            prop_assert_eq!(t.sentence_lengths.iter().sum::<usize>(), t.tokens.len());
            for tok in &t.tokens {
                prop_assert!(!tok.is_empty());
                prop_assert_eq!(tok.to_lowercase(), tok.clone());
            }
        }
    }
}
