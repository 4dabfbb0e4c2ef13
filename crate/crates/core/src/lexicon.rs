//! The twenty OCC emotion labels and their affective ratings.
//!
//! Every label carries an Evaluation/Potency/Activity (EPA) rating, a display
//! emoji and the dictionary word its rating was taken from. The lexicon is
//! loaded from a small CSV document with the fixed header
//! `label,e,p,a,emoji,dictionary_word`; a default copy ships with the crate.
//!
//! Only the `fears-confirmed` row ("heavy hearted") is a published rating. The
//! other nineteen rows in the bundled file are placeholders chosen to respect
//! the valence sign of each emotion and must not be treated as ground truth.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Bundled lexicon document.
pub const BUNDLED_LEXICON: &str = include_str!("../data/lexicon.csv");

/// Column order of the lexicon document.
pub const LEXICON_COLUMNS: [&str; 6] = ["label", "e", "p", "a", "emoji", "dictionary_word"];

/// One of the twenty OCC emotions (love and hate excluded).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EmotionLabel {
    Joy,
    Distress,
    HappyFor,
    Pity,
    Gloating,
    Resentment,
    Hope,
    Fear,
    Satisfaction,
    FearsConfirmed,
    Relief,
    Disappointment,
    Pride,
    Shame,
    Admiration,
    Reproach,
    Gratification,
    Remorse,
    Gratitude,
    Anger,
}

impl EmotionLabel {
    pub const COUNT: usize = 20;

    pub const ALL: [EmotionLabel; Self::COUNT] = [
        EmotionLabel::Joy,
        EmotionLabel::Distress,
        EmotionLabel::HappyFor,
        EmotionLabel::Pity,
        EmotionLabel::Gloating,
        EmotionLabel::Resentment,
        EmotionLabel::Hope,
        EmotionLabel::Fear,
        EmotionLabel::Satisfaction,
        EmotionLabel::FearsConfirmed,
        EmotionLabel::Relief,
        EmotionLabel::Disappointment,
        EmotionLabel::Pride,
        EmotionLabel::Shame,
        EmotionLabel::Admiration,
        EmotionLabel::Reproach,
        EmotionLabel::Gratification,
        EmotionLabel::Remorse,
        EmotionLabel::Gratitude,
        EmotionLabel::Anger,
    ];

    /// Emotions read as the player regretting a defection.
    pub const REGRET: [EmotionLabel; 4] = [
        EmotionLabel::Remorse,
        EmotionLabel::Distress,
        EmotionLabel::Shame,
        EmotionLabel::FearsConfirmed,
    ];

    /// Canonical hyphenated lower-case spelling.
    pub fn as_str(self) -> &'static str {
        match self {
            EmotionLabel::Joy => "joy",
            EmotionLabel::Distress => "distress",
            EmotionLabel::HappyFor => "happy-for",
            EmotionLabel::Pity => "pity",
            EmotionLabel::Gloating => "gloating",
            EmotionLabel::Resentment => "resentment",
            EmotionLabel::Hope => "hope",
            EmotionLabel::Fear => "fear",
            EmotionLabel::Satisfaction => "satisfaction",
            EmotionLabel::FearsConfirmed => "fears-confirmed",
            EmotionLabel::Relief => "relief",
            EmotionLabel::Disappointment => "disappointment",
            EmotionLabel::Pride => "pride",
            EmotionLabel::Shame => "shame",
            EmotionLabel::Admiration => "admiration",
            EmotionLabel::Reproach => "reproach",
            EmotionLabel::Gratification => "gratification",
            EmotionLabel::Remorse => "remorse",
            EmotionLabel::Gratitude => "gratitude",
            EmotionLabel::Anger => "anger",
        }
    }

    /// Position in [`EmotionLabel::ALL`].
    pub fn index(self) -> usize {
        self as usize
    }

    /// Constituent words of the label (`happy-for` yields `happy`, `for`).
    pub fn words(self) -> impl Iterator<Item = &'static str> {
        self.as_str().split('-')
    }

    pub fn is_regret(self) -> bool {
        Self::REGRET.contains(&self)
    }
}

impl fmt::Display for EmotionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown emotion label: {0:?}")]
pub struct UnknownLabel(pub String);

impl FromStr for EmotionLabel {
    type Err = UnknownLabel;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        EmotionLabel::ALL
            .iter()
            .copied()
            .find(|l| l.as_str() == s)
            .ok_or_else(|| UnknownLabel(s.to_string()))
    }
}

/// Free-function form of [`EmotionLabel::is_regret`].
pub fn is_regret(label: EmotionLabel) -> bool {
    label.is_regret()
}

/// A point in Evaluation/Potency/Activity space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpaVector {
    pub e: f64,
    pub p: f64,
    pub a: f64,
}

impl EpaVector {
    pub const fn new(e: f64, p: f64, a: f64) -> Self {
        Self { e, p, a }
    }

    pub fn is_finite(&self) -> bool {
        self.e.is_finite() && self.p.is_finite() && self.a.is_finite()
    }

    pub fn distance(&self, other: &EpaVector) -> f64 {
        let de = self.e - other.e;
        let dp = self.p - other.p;
        let da = self.a - other.a;
        (de * de + dp * dp + da * da).sqrt()
    }

    pub fn midpoint(&self, other: &EpaVector) -> EpaVector {
        EpaVector::new(
            (self.e + other.e) / 2.0,
            (self.p + other.p) / 2.0,
            (self.a + other.a) / 2.0,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Valence {
    Positive,
    Negative,
}

impl Valence {
    /// Zero evaluation counts as positive.
    pub fn of_evaluation(e: f64) -> Valence {
        if e >= 0.0 {
            Valence::Positive
        } else {
            Valence::Negative
        }
    }

    pub fn is_positive(self) -> bool {
        self == Valence::Positive
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LexiconEntry {
    pub label: EmotionLabel,
    pub epa: EpaVector,
    pub emoji: String,
    pub dictionary_word: String,
}

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("lexicon read failed: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed lexicon document: {0}")]
    Csv(#[from] csv::Error),
    #[error("lexicon header must be {expected:?}, found {found:?}")]
    Header { expected: String, found: String },
    #[error("row {row}: expected 6 columns, found {found}")]
    ColumnCount { row: usize, found: usize },
    #[error("row {row}: unknown label {label:?}")]
    UnknownLabel { row: usize, label: String },
    #[error("duplicate label: {0}")]
    DuplicateLabel(EmotionLabel),
    #[error("missing label: {0}")]
    MissingLabel(EmotionLabel),
    #[error("{label}: malformed {column} value {value:?}")]
    MalformedEpa {
        label: EmotionLabel,
        column: &'static str,
        value: String,
    },
}

/// Immutable label-to-entry table covering all twenty emotions.
#[derive(Debug, Clone, PartialEq)]
pub struct Lexicon {
    entries: Vec<LexiconEntry>,
}

impl Lexicon {
    pub fn bundled() -> Lexicon {
        Lexicon::from_csv_str(BUNDLED_LEXICON).expect("bundled lexicon is valid")
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Lexicon, LexiconError> {
        let text = std::fs::read_to_string(path)?;
        Lexicon::from_csv_str(&text)
    }

    pub fn from_csv_str(source: &str) -> Result<Lexicon, LexiconError> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .flexible(true)
            .trim(csv::Trim::All)
            .from_reader(source.as_bytes());

        let header = reader.headers()?.clone();
        if header.iter().ne(LEXICON_COLUMNS.iter().copied()) {
            return Err(LexiconError::Header {
                expected: LEXICON_COLUMNS.join(","),
                found: header.iter().collect::<Vec<_>>().join(","),
            });
        }

        let mut slots: Vec<Option<LexiconEntry>> = vec![None; EmotionLabel::COUNT];
        for (i, record) in reader.records().enumerate() {
            let record = record?;
            let row = i + 2;
            if record.len() != LEXICON_COLUMNS.len() {
                return Err(LexiconError::ColumnCount {
                    row,
                    found: record.len(),
                });
            }
            let label: EmotionLabel =
                record[0].parse().map_err(|_| LexiconError::UnknownLabel {
                    row,
                    label: record[0].to_string(),
                })?;
            let component = |idx: usize, column: &'static str| -> Result<f64, LexiconError> {
                record[idx]
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| LexiconError::MalformedEpa {
                        label,
                        column,
                        value: record[idx].to_string(),
                    })
            };
            let epa = EpaVector::new(component(1, "e")?, component(2, "p")?, component(3, "a")?);
            let slot = &mut slots[label.index()];
            if slot.is_some() {
                return Err(LexiconError::DuplicateLabel(label));
            }
            *slot = Some(LexiconEntry {
                label,
                epa,
                emoji: record[4].to_string(),
                dictionary_word: record[5].to_string(),
            });
        }

        let entries = slots
            .into_iter()
            .zip(EmotionLabel::ALL)
            .map(|(slot, label)| slot.ok_or(LexiconError::MissingLabel(label)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Lexicon { entries })
    }

    pub fn entry(&self, label: EmotionLabel) -> &LexiconEntry {
        &self.entries[label.index()]
    }

    pub fn epa(&self, label: EmotionLabel) -> EpaVector {
        self.entry(label).epa
    }

    pub fn classify_valence(&self, label: EmotionLabel) -> Valence {
        Valence::of_evaluation(self.epa(label).e)
    }

    /// Entries in canonical label order.
    pub fn entries(&self) -> &[LexiconEntry] {
        &self.entries
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bundled_without(label: &str) -> String {
        BUNDLED_LEXICON
            .lines()
            .filter(|l| !l.starts_with(&format!("{label},")))
            .collect::<Vec<_>>()
            .join("\n")
    }

    #[test]
    fn bundled_has_all_twenty() {
        let lex = Lexicon::bundled();
        assert_eq!(lex.entries().len(), 20);
        for label in EmotionLabel::ALL {
            assert_eq!(lex.entry(label).label, label);
        }
    }

    #[test]
    fn fears_confirmed_is_heavy_hearted() {
        let entry = Lexicon::bundled().entry(EmotionLabel::FearsConfirmed).clone();
        assert_eq!(entry.dictionary_word, "heavy hearted");
        assert_eq!(entry.epa, EpaVector::new(-1.03, -0.55, -1.15));
    }

    #[test]
    fn missing_anger_is_reported() {
        let err = Lexicon::from_csv_str(&bundled_without("anger")).unwrap_err();
        assert_eq!(err.to_string(), "missing label: anger");
    }

    #[test]
    fn duplicate_label_is_reported() {
        let doc = format!("{BUNDLED_LEXICON}joy,1,1,1,x,glad\n");
        let err = Lexicon::from_csv_str(&doc).unwrap_err();
        assert!(matches!(err, LexiconError::DuplicateLabel(EmotionLabel::Joy)));
    }

    #[test]
    fn malformed_epa_names_entry() {
        let doc = BUNDLED_LEXICON.replace("pride,2.30", "pride,two");
        let err = Lexicon::from_csv_str(&doc).unwrap_err();
        assert_eq!(err.to_string(), "pride: malformed e value \"two\"");
        let doc = BUNDLED_LEXICON.replace("2.30,2.40,1.10", "2.30,NaN,1.10");
        assert!(matches!(
            Lexicon::from_csv_str(&doc),
            Err(LexiconError::MalformedEpa { column: "p", .. })
        ));
    }

    #[test]
    fn wrong_header_rejected() {
        let doc = BUNDLED_LEXICON.replacen("label,e,p,a", "label,p,e,a", 1);
        assert!(matches!(Lexicon::from_csv_str(&doc), Err(LexiconError::Header { .. })));
    }

    #[test]
    fn unknown_label_rejected() {
        let doc = format!("{}\nlove,3,2,1,x,loving\n", BUNDLED_LEXICON.trim_end());
        assert!(matches!(
            Lexicon::from_csv_str(&doc),
            Err(LexiconError::UnknownLabel { label, .. }) if label == "love"
        ));
    }

    #[test]
    fn valence_classification() {
        let lex = Lexicon::bundled();
        assert!(lex.epa(EmotionLabel::Joy).e > 0.0);
        assert_eq!(lex.classify_valence(EmotionLabel::Joy), Valence::Positive);
        assert_eq!(
            lex.classify_valence(EmotionLabel::FearsConfirmed),
            Valence::Negative
        );
        assert_eq!(Valence::of_evaluation(0.0), Valence::Positive);
        assert_eq!(Valence::of_evaluation(-0.0), Valence::Positive);
    }

    #[test]
    fn regret_set() {
        assert!(is_regret(EmotionLabel::Remorse));
        assert!(is_regret(EmotionLabel::FearsConfirmed));
        assert!(!is_regret(EmotionLabel::Joy));
        assert_eq!(EmotionLabel::ALL.iter().filter(|l| l.is_regret()).count(), 4);
    }

    #[test]
    fn regret_implies_negative_in_bundled_data() {
        let lex = Lexicon::bundled();
        for label in EmotionLabel::ALL.into_iter().filter(|l| l.is_regret()) {
            assert_eq!(lex.classify_valence(label), Valence::Negative, "{label}");
        }
    }

    #[test]
    fn label_spelling_round_trips() {
        for label in EmotionLabel::ALL {
            assert_eq!(label.as_str().parse::<EmotionLabel>().unwrap(), label);
            let json = serde_json::to_string(&label).unwrap();
            assert_eq!(json, format!("\"{}\"", label.as_str()));
        }
        assert!("love".parse::<EmotionLabel>().is_err());
        assert!("hate".parse::<EmotionLabel>().is_err());
    }
}
