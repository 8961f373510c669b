use std::collections::{HashMap, HashSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::tokenize::normalize_word;
use super::CorpusError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaEntry {
    pub lemma: String,
    pub pos: String,
}

impl LemmaEntry {
    /// Verb tags are recognised by a leading `V` (`V`, `VER`, `VERB`, `VER:pres`, ...).
    pub fn is_verb(&self) -> bool {
        self.pos
            .chars()
            .next()
            .is_some_and(|c| c.eq_ignore_ascii_case(&'v'))
    }
}

/// Token → (lemma, part-of-speech) table loaded from a three-column TSV.
#[derive(Debug, Clone, Default)]
pub struct LemmaMap {
    entries: HashMap<String, LemmaEntry>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum LemmaMode {
    #[default]
    None,
    VerbsOnly,
    All,
}

impl std::str::FromStr for LemmaMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "none" => Ok(Self::None),
            "verbs-only" | "verbs_only" => Ok(Self::VerbsOnly),
            "all" => Ok(Self::All),
            other => Err(format!("unknown lemma mode `{other}` (none|verbs-only|all)")),
        }
    }
}

impl LemmaMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, token: &str, lemma: &str, pos: &str) {
        self.entries.insert(
            normalize_word(token),
            LemmaEntry {
                lemma: normalize_word(lemma),
                pos: pos.to_string(),
            },
        );
    }

    pub fn get(&self, token: &str) -> Option<&LemmaEntry> {
        self.entries.get(token)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Parses `token<TAB>lemma<TAB>pos` lines. Blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self, CorpusError> {
        let mut map = Self::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').map(str::trim).collect();
            match cols.as_slice() {
                [tok, lemma, pos] if !tok.is_empty() && !lemma.is_empty() && !pos.is_empty() => {
                    map.insert(tok, lemma, pos)
                }
                _ => {
                    return Err(CorpusError::Format {
                        what: "lemma map",
                        line: i + 1,
                        message: "expected token<TAB>lemma<TAB>pos with non-empty fields".into(),
                    })
                }
            }
        }
        Ok(map)
    }

    pub fn load(path: &Path) -> Result<Self, CorpusError> {
        Self::parse(&super::read_source(path)?)
    }
}

/// Replaces mapped tokens by their lemma according to `mode`; unmapped tokens pass through.
pub fn lemmatize(tokens: &[String], map: &LemmaMap, mode: LemmaMode) -> Vec<String> {
    tokens
        .iter()
        .map(|tok| match (mode, map.get(tok)) {
            (LemmaMode::All, Some(e)) => e.lemma.clone(),
            (LemmaMode::VerbsOnly, Some(e)) if e.is_verb() => e.lemma.clone(),
            _ => tok.clone(),
        })
        .collect()
}

/// The reference list of "easy" words used by the readability score.
#[derive(Debug, Clone, Default)]
pub struct CommonWordList {
    words: HashSet<String>,
}

impl CommonWordList {
    pub fn from_words<I, S>(words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        Self {
            words: words
                .into_iter()
                .map(|w| normalize_word(w.as_ref().trim()))
                .filter(|w| !w.is_empty())
                .collect(),
        }
    }

    pub fn parse(text: &str) -> Self {
        Self::from_words(text.lines())
    }

    pub fn load(path: &Path) -> Result<Self, CorpusError> {
        Ok(Self::parse(&super::read_source(path)?))
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(word)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[&str]) -> Vec<String> {
        v.iter().map(|x| x.to_string()).collect()
    }

    fn map() -> LemmaMap {
        LemmaMap::parse("mange\tmanger\tV\nfleurs\tfleur\tN\nmangeons\tmanger\tVER:pres\n").unwrap()
    }

    #[test]
    fn verbs_only_replaces_verbs() {
        assert_eq!(lemmatize(&s(&["mange"]), &map(), LemmaMode::VerbsOnly), s(&["manger"]));
        assert_eq!(lemmatize(&s(&["mangeons"]), &map(), LemmaMode::VerbsOnly), s(&["manger"]));
    }

    #[test]
    fn verbs_only_leaves_nouns() {
        assert_eq!(lemmatize(&s(&["fleurs"]), &map(), LemmaMode::VerbsOnly), s(&["fleurs"]));
    }

    #[test]
    fn all_mode_and_unmapped() {
        let toks = s(&["fleurs", "mange", "chat"]);
        assert_eq!(lemmatize(&toks, &map(), LemmaMode::All), s(&["fleur", "manger", "chat"]));
        assert_eq!(lemmatize(&toks, &map(), LemmaMode::None), toks);
    }

    #[test]
    fn verbs_only_idempotent_when_lemmas_are_fixed_points() {
        let mut m = map();
        m.insert("manger", "manger", "V");
        let toks = s(&["mange", "fleurs", "mangeons", "x"]);
        let once = lemmatize(&toks, &m, LemmaMode::VerbsOnly);
        assert_eq!(lemmatize(&once, &m, LemmaMode::VerbsOnly), once);
    }

    #[test]
    fn malformed_lemma_line() {
        let err = LemmaMap::parse("ok\tok\tN\nbroken\tline\n").unwrap_err();
        assert!(matches!(err, CorpusError::Format { line: 2, .. }));
    }

    #[test]
    fn word_list_normalizes() {
        let list = CommonWordList::parse("Chat\n\n  maison \n");
        assert_eq!(list.len(), 2);
        assert!(list.contains("chat") && list.contains("maison"));
    }
}
