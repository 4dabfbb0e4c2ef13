//! Choosing what the agent says.
//!
//! Phrases are grouped into eight sets keyed by (agent move, player move,
//! whether the displayed emotion has positive evaluation). Within the keyed
//! set, the phrase whose mean word embedding is closest in cosine similarity to
//! the emotion label's embedding is spoken. Stop words and out-of-vocabulary
//! tokens are ignored. Ties go to the earliest phrase in the list.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;
use thiserror::Error;

use crate::game::Move;
use crate::lexicon::{EmotionLabel, Lexicon};

pub const BUNDLED_PHRASES: &str = include_str!("../data/phrases.json");
pub const BUNDLED_EMBEDDINGS: &str = include_str!("../data/embeddings.txt");
pub const BUNDLED_STOPWORDS: &str = include_str!("../data/stopwords.txt");

#[derive(Debug, Error)]
pub enum UtteranceError {
    #[error("read failed: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed phrase bank: {0}")]
    PhraseJson(#[from] serde_json::Error),
    #[error("invalid phrase key {0:?}")]
    BadKey(String),
    #[error("phrase bank is missing key {0}")]
    MissingKey(PhraseKey),
    #[error("phrase bank key {0} has no phrases")]
    EmptyKey(PhraseKey),
    #[error("embedding file line {line}: {reason}")]
    Embedding { line: usize, reason: String },
    #[error("stopword list is empty")]
    NoStopwords,
    #[error("vector dimensions differ: {0} vs {1}")]
    DimensionMismatch(usize, usize),
}

/// Selects one of the eight phrase sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PhraseKey {
    pub agent_move: Move,
    pub player_move: Move,
    pub valence_positive: bool,
}

impl PhraseKey {
    pub fn all() -> impl Iterator<Item = PhraseKey> {
        Move::ALL.into_iter().flat_map(|agent_move| {
            Move::ALL.into_iter().flat_map(move |player_move| {
                [true, false].into_iter().map(move |valence_positive| PhraseKey {
                    agent_move,
                    player_move,
                    valence_positive,
                })
            })
        })
    }
}

impl fmt::Display for PhraseKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let valence = if self.valence_positive { "pos" } else { "neg" };
        write!(f, "{}_{}_{}", self.agent_move, self.player_move, valence)
    }
}

impl FromStr for PhraseKey {
    type Err = UtteranceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || UtteranceError::BadKey(s.to_string());
        let mut parts = s.split('_');
        let (Some(agent), Some(player), Some(valence), None) =
            (parts.next(), parts.next(), parts.next(), parts.next())
        else {
            return Err(bad());
        };
        let valence_positive = match valence {
            "pos" => true,
            "neg" => false,
            _ => return Err(bad()),
        };
        Ok(PhraseKey {
            agent_move: agent.parse().map_err(|_| bad())?,
            player_move: player.parse().map_err(|_| bad())?,
            valence_positive,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhraseBank {
    sets: BTreeMap<PhraseKey, Vec<String>>,
}

impl PhraseBank {
    pub fn bundled() -> PhraseBank {
        PhraseBank::from_json_str(BUNDLED_PHRASES).expect("bundled phrase bank is valid")
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<PhraseBank, UtteranceError> {
        PhraseBank::from_json_str(&std::fs::read_to_string(path)?)
    }

    /// Parse a JSON object mapping `give2_take1_pos`-style keys to phrase lists.
    pub fn from_json_str(source: &str) -> Result<PhraseBank, UtteranceError> {
        let raw: BTreeMap<String, Vec<String>> = serde_json::from_str(source)?;
        let mut sets = BTreeMap::new();
        for (key, phrases) in raw {
            let key: PhraseKey = key.parse()?;
            if phrases.is_empty() {
                return Err(UtteranceError::EmptyKey(key));
            }
            sets.insert(key, phrases);
        }
        if let Some(missing) = PhraseKey::all().find(|k| !sets.contains_key(k)) {
            return Err(UtteranceError::MissingKey(missing));
        }
        Ok(PhraseBank { sets })
    }

    pub fn phrases(&self, key: PhraseKey) -> &[String] {
        &self.sets[&key]
    }
}

/// Word vectors of a fixed dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingTable {
    dim: usize,
    vectors: HashMap<String, Vec<f64>>,
}

impl EmbeddingTable {
    pub fn bundled() -> EmbeddingTable {
        EmbeddingTable::from_text(BUNDLED_EMBEDDINGS).expect("bundled embeddings are valid")
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<EmbeddingTable, UtteranceError> {
        EmbeddingTable::from_text(&std::fs::read_to_string(path)?)
    }

    /// Parse the `<count> <dim>` header followed by `token v1 .. vdim` lines.
    pub fn from_text(source: &str) -> Result<EmbeddingTable, UtteranceError> {
        let err = |line: usize, reason: String| UtteranceError::Embedding { line, reason };
        let mut lines = source.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or_else(|| err(1, "missing header".into()))?;
        let header: Vec<usize> = header
            .split_whitespace()
            .map(str::parse)
            .collect::<Result<_, _>>()
            .map_err(|e| err(1, format!("bad header: {e}")))?;
        let [count, dim] = header[..] else {
            return Err(err(1, "header must be \"<count> <dim>\"".into()));
        };
        if dim == 0 {
            return Err(err(1, "dimension must be positive".into()));
        }

        let mut vectors = HashMap::with_capacity(count);
        for (i, line) in lines {
            let lineno = i + 1;
            let mut fields = line.split_whitespace();
            let token = fields.next().expect("non-empty line").to_lowercase();
            let values: Vec<f64> = fields
                .map(|f| f.parse::<f64>().ok().filter(|v| v.is_finite()))
                .collect::<Option<_>>()
                .ok_or_else(|| err(lineno, format!("non-numeric or non-finite value for {token:?}")))?;
            if values.len() != dim {
                return Err(err(
                    lineno,
                    format!("{token:?} has {} components, expected {dim}", values.len()),
                ));
            }
            if vectors.insert(token.clone(), values).is_some() {
                return Err(err(lineno, format!("duplicate token {token:?}")));
            }
        }
        if vectors.len() != count {
            return Err(err(1, format!("header declares {count} tokens, found {}", vectors.len())));
        }
        Ok(EmbeddingTable { dim, vectors })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, token: &str) -> Option<&[f64]> {
        self.vectors.get(token).map(Vec::as_slice)
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StopwordSet(HashSet<String>);

impl StopwordSet {
    pub fn bundled() -> StopwordSet {
        StopwordSet::from_text(BUNDLED_STOPWORDS).expect("bundled stopwords are valid")
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<StopwordSet, UtteranceError> {
        StopwordSet::from_text(&std::fs::read_to_string(path)?)
    }

    pub fn from_text(source: &str) -> Result<StopwordSet, UtteranceError> {
        let set: HashSet<String> = source
            .lines()
            .map(|l| l.trim().to_lowercase())
            .filter(|l| !l.is_empty())
            .collect();
        if set.is_empty() {
            return Err(UtteranceError::NoStopwords);
        }
        Ok(StopwordSet(set))
    }

    pub fn contains(&self, token: &str) -> bool {
        self.0.contains(token)
    }
}

/// Whitespace split, outer punctuation stripped, lower-cased.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split_whitespace()
        .map(|w| w.trim_matches(|c: char| !c.is_alphanumeric()).to_lowercase())
        .filter(|w| !w.is_empty())
        .collect()
}

fn mean_embedding<'a, I>(tokens: I, table: &EmbeddingTable, stops: &StopwordSet) -> Option<Vec<f64>>
where
    I: IntoIterator<Item = &'a str>,
{
    let mut sum = vec![0.0; table.dim()];
    let mut n = 0usize;
    for v in tokens
        .into_iter()
        .filter(|t| !stops.contains(t))
        .filter_map(|t| table.get(t))
    {
        sum.iter_mut().zip(v).for_each(|(s, x)| *s += x);
        n += 1;
    }
    if n == 0 {
        return None;
    }
    let n = n as f64;
    sum.iter_mut().for_each(|s| *s /= n);
    Some(sum)
}

/// Mean of the in-vocabulary, non-stop-word token vectors; zero if none remain.
pub fn phrase_embedding(phrase: &str, table: &EmbeddingTable, stops: &StopwordSet) -> Vec<f64> {
    let tokens = tokenize(phrase);
    mean_embedding(tokens.iter().map(String::as_str), table, stops).unwrap_or_else(|| vec![0.0; table.dim()])
}

/// Embedding of an emotion label; hyphenated labels average their words.
pub fn label_embedding(label: EmotionLabel, table: &EmbeddingTable, stops: &StopwordSet) -> Option<Vec<f64>> {
    mean_embedding(label.words(), table, stops)
}

/// Cosine similarity; `f64::NEG_INFINITY` when either vector is zero.
pub fn cosine(u: &[f64], v: &[f64]) -> Result<f64, UtteranceError> {
    if u.len() != v.len() {
        return Err(UtteranceError::DimensionMismatch(u.len(), v.len()));
    }
    let dot: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
    let nu = u.iter().map(|a| a * a).sum::<f64>().sqrt();
    let nv = v.iter().map(|b| b * b).sum::<f64>().sqrt();
    if nu == 0.0 || nv == 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    Ok((dot / (nu * nv)).clamp(-1.0, 1.0))
}

/// Index of the phrase in `phrases` closest to `target`; earliest wins ties.
pub fn closest_phrase(target: &[f64], phrases: &[String], table: &EmbeddingTable, stops: &StopwordSet) -> usize {
    let mut best = (0, f64::NEG_INFINITY);
    for (i, phrase) in phrases.iter().enumerate() {
        let sim = cosine(target, &phrase_embedding(phrase, table, stops)).unwrap_or(f64::NEG_INFINITY);
        if sim > best.1 {
            best = (i, sim);
        }
    }
    best.0
}

/// Phrase bank, embeddings and stop words bundled together.
#[derive(Debug, Clone)]
pub struct UtteranceSelector {
    pub bank: PhraseBank,
    pub table: EmbeddingTable,
    pub stops: StopwordSet,
}

impl UtteranceSelector {
    pub fn new(bank: PhraseBank, table: EmbeddingTable, stops: StopwordSet) -> Self {
        Self { bank, table, stops }
    }

    pub fn bundled() -> Self {
        Self::new(PhraseBank::bundled(), EmbeddingTable::bundled(), StopwordSet::bundled())
    }

    pub fn select(&self, label: EmotionLabel, agent_move: Move, player_move: Move, lex: &Lexicon) -> &str {
        select_utterance(label, agent_move, player_move, lex, &self.bank, &self.table, &self.stops)
    }
}

pub fn select_utterance<'b>(
    label: EmotionLabel,
    agent_move: Move,
    player_move: Move,
    lex: &Lexicon,
    bank: &'b PhraseBank,
    table: &EmbeddingTable,
    stops: &StopwordSet,
) -> &'b str {
    let key = PhraseKey {
        agent_move,
        player_move,
        valence_positive: lex.classify_valence(label).is_positive(),
    };
    let phrases = bank.phrases(key);
    let Some(target) = label_embedding(label, table, stops) else {
        tracing::warn!(%label, %key, "emotion label has no embedding; using first phrase");
        return &phrases[0];
    };
    &phrases[closest_phrase(&target, phrases, table, stops)]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_table() -> EmbeddingTable {
        EmbeddingTable::from_text("4 3\nhope 1 0 0\ncoins 0 1 0\ntable 0 0 1\njoy 0.5 0.5 0\n").unwrap()
    }

    fn stops() -> StopwordSet {
        StopwordSet::from_text("the\na\nof\n").unwrap()
    }

    #[test]
    fn tokenizer_strips_punctuation() {
        assert_eq!(tokenize("Oh well, we're doomed!"), ["oh", "well", "we're", "doomed"]);
        assert_eq!(tokenize("  ...  "), Vec::<String>::new());
    }

    #[test]
    fn single_word_phrase_is_its_vector() {
        let t = tiny_table();
        assert_eq!(phrase_embedding("Coins.", &t, &stops()), vec![0.0, 1.0, 0.0]);
        assert_eq!(phrase_embedding("coins coins", &t, &stops()), vec![0.0, 1.0, 0.0]);
    }

    #[test]
    fn stop_only_phrase_is_zero() {
        let t = tiny_table();
        assert_eq!(phrase_embedding("the a of", &t, &stops()), vec![0.0; 3]);
        assert_eq!(phrase_embedding("unknown words", &t, &stops()), vec![0.0; 3]);
    }

    #[test]
    fn cosine_cases() {
        let v = [0.3, -1.2, 2.0];
        assert!((cosine(&v, &v).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(cosine(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), 0.0);
        assert_eq!(cosine(&v, &[0.0; 3]).unwrap(), f64::NEG_INFINITY);
        assert!(matches!(
            cosine(&[1.0], &[1.0, 2.0]),
            Err(UtteranceError::DimensionMismatch(1, 2))
        ));
    }

    #[test]
    fn closest_prefers_self_and_breaks_ties_low() {
        let t = tiny_table();
        let target = t.get("hope").unwrap().to_vec();
        let phrases = vec!["the table".to_string(), "hope of the coins".to_string(), "hope".to_string()];
        assert_eq!(closest_phrase(&target, &phrases, &t, &stops()), 2);
        let same = vec!["coins".to_string(), "coins".to_string()];
        assert_eq!(closest_phrase(&target, &same, &t, &stops()), 0);
        let none = vec!["the".to_string(), "a".to_string()];
        assert_eq!(closest_phrase(&target, &none, &t, &stops()), 0);
    }

    #[test]
    fn key_spelling() {
        for key in PhraseKey::all() {
            assert_eq!(key.to_string().parse::<PhraseKey>().unwrap(), key);
        }
        assert_eq!(PhraseKey::all().count(), 8);
        assert!("give2_take1".parse::<PhraseKey>().is_err());
        assert!("give2_take1_maybe".parse::<PhraseKey>().is_err());
    }

    #[test]
    fn bank_validation() {
        let bank = PhraseBank::bundled();
        for key in PhraseKey::all() {
            assert!(bank.phrases(key).len() >= 4, "{key}");
        }
        let mut raw: BTreeMap<String, Vec<String>> = serde_json::from_str(BUNDLED_PHRASES).unwrap();
        raw.remove("take1_take1_neg");
        let err = PhraseBank::from_json_str(&serde_json::to_string(&raw).unwrap()).unwrap_err();
        assert!(matches!(err, UtteranceError::MissingKey(_)));
        raw.insert("take1_take1_neg".into(), vec![]);
        let err = PhraseBank::from_json_str(&serde_json::to_string(&raw).unwrap()).unwrap_err();
        assert!(matches!(err, UtteranceError::EmptyKey(_)));
    }

    #[test]
    fn embedding_validation() {
        assert!(EmbeddingTable::from_text("1 2\nhope 1\n").is_err());
        assert!(EmbeddingTable::from_text("2 2\nhope 1 2\n").is_err());
        assert!(EmbeddingTable::from_text("1 2\nhope 1 inf\n").is_err());
        assert!(EmbeddingTable::from_text("2 1\nhope 1\nhope 2\n").is_err());
        assert!(StopwordSet::from_text("\n\n").is_err());
    }

    #[test]
    fn bundled_covers_every_label() {
        let sel = UtteranceSelector::bundled();
        for label in EmotionLabel::ALL {
            assert!(
                label_embedding(label, &sel.table, &sel.stops).is_some(),
                "{label}"
            );
        }
    }

    #[test]
    fn oov_label_falls_back_to_first_phrase() {
        let table = EmbeddingTable::from_text("1 2\ncoins 1 0\n").unwrap();
        let bank = PhraseBank::bundled();
        let lex = Lexicon::bundled();
        let out = select_utterance(EmotionLabel::Hope, Move::Give2, Move::Give2, &lex, &bank, &table, &stops());
        assert_eq!(
            out,
            bank.phrases("give2_give2_pos".parse().unwrap())[0]
        );
    }
}
