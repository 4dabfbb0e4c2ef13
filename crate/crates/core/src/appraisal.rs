//! OCC appraisal of a revealed round.
//!
//! Each round is appraised from the agent's point of view using four facts:
//! the player's previous move, both most recent moves, and the emotion the
//! player showed. The emotion only matters through a coarse class: valence when
//! the player gave, regret when the player took. The table below lists, for
//! every reachable situation, the full set of emotions the agent can display.
//! Momentary compound emotions (gratification, gratitude, remorse, anger) sit
//! alongside their constituents; display selection draws uniformly over the set.
//! Intensity is not modelled.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::game::Move;
use crate::lexicon::{EmotionLabel, Lexicon, Valence};

/// Discriminator a table row uses for the player's shown emotion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EmotionClass {
    Any,
    Positive,
    Negative,
    Regret,
    NoRegret,
}

impl EmotionClass {
    /// Whether a row carrying `self` accepts a context of class `actual`.
    pub fn admits(self, actual: EmotionClass) -> bool {
        self == EmotionClass::Any || self == actual
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Category {
    MomentarySingle,
    MomentaryCompound,
    ProspectBased,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AppraisedEmotion {
    pub label: EmotionLabel,
    pub category: Category,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AppraisalContext {
    /// Absent in the first round.
    pub prev_player_move: Option<Move>,
    pub agent_move: Move,
    pub player_move: Move,
    pub player_emotion: EmotionLabel,
}

/// Distinct appraised emotions in table reading order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AppraisalSet {
    emotions: Vec<AppraisedEmotion>,
}

impl AppraisalSet {
    pub fn new<I: IntoIterator<Item = AppraisedEmotion>>(items: I) -> Self {
        let mut emotions: Vec<AppraisedEmotion> = Vec::new();
        for item in items {
            if !emotions.iter().any(|e| e.label == item.label) {
                emotions.push(item);
            }
        }
        Self { emotions }
    }

    pub fn emotions(&self) -> &[AppraisedEmotion] {
        &self.emotions
    }

    pub fn labels(&self) -> impl Iterator<Item = EmotionLabel> + '_ {
        self.emotions.iter().map(|e| e.label)
    }

    pub fn contains(&self, label: EmotionLabel) -> bool {
        self.emotions.iter().any(|e| e.label == label)
    }

    pub fn category_of(&self, label: EmotionLabel) -> Option<Category> {
        self.emotions.iter().find(|e| e.label == label).map(|e| e.category)
    }

    pub fn len(&self) -> usize {
        self.emotions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.emotions.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AppraisalError {
    #[error("cannot select a display emotion from an empty appraisal set")]
    EmptySet,
}

/// One row group of the appraisal table.
#[derive(Debug, Clone, Copy)]
pub struct RowGroup {
    pub prev: Move,
    pub agent: Move,
    pub player: Move,
    pub class: EmotionClass,
    pub emotions: &'static [(EmotionLabel, Category)],
}

use Category::{MomentaryCompound as C, MomentarySingle as S, ProspectBased as P};
use EmotionLabel::*;
use Move::{Give2 as G, Take1 as T};

const fn row(
    prev: Move,
    agent: Move,
    player: Move,
    class: EmotionClass,
    emotions: &'static [(EmotionLabel, Category)],
) -> RowGroup {
    RowGroup {
        prev,
        agent,
        player,
        class,
        emotions,
    }
}

/// The appraisal table: (previous player, agent, player, player class) to emotions.
#[rustfmt::skip]
pub const APPRAISAL_TABLE: [RowGroup; 12] = [
    row(G, G, G, EmotionClass::Any, &[
        (HappyFor, S), (Hope, P), (Satisfaction, P), (Joy, S), (Pride, S),
        (Gratification, C), (Admiration, S), (Gratitude, C),
    ]),
    row(T, G, G, EmotionClass::Any, &[
        (HappyFor, S), (Hope, P), (Relief, P), (Joy, S), (Pride, S),
        (Gratification, C), (Admiration, S), (Gratitude, C),
    ]),
    row(G, T, G, EmotionClass::Positive, &[
        (Pity, S), (Hope, P), (Satisfaction, P), (Joy, S), (Admiration, S),
        (Gratitude, C), (Shame, S),
    ]),
    row(T, T, G, EmotionClass::Positive, &[
        (Pity, S), (Hope, P), (Relief, P), (Joy, S), (Admiration, S),
        (Gratitude, C), (Shame, S),
    ]),
    row(G, T, G, EmotionClass::Negative, &[
        (Gloating, S), (Fear, P), (Satisfaction, P), (Pride, S), (Joy, S),
        (Gratification, C),
    ]),
    row(T, T, G, EmotionClass::Negative, &[
        (Gloating, S), (Fear, P), (Relief, P), (Pride, S), (Joy, S),
        (Gratification, C),
    ]),
    row(G, G, T, EmotionClass::NoRegret, &[
        (Resentment, S), (Fear, P), (Disappointment, P), (Distress, S),
        (Reproach, S), (Anger, C), (Pride, S),
    ]),
    row(T, G, T, EmotionClass::NoRegret, &[
        (Resentment, S), (Fear, P), (FearsConfirmed, P), (Distress, S),
        (Reproach, S), (Anger, C), (Pride, S),
    ]),
    row(G, G, T, EmotionClass::Regret, &[
        (Resentment, S), (Hope, P), (Disappointment, P), (Distress, S), (Pride, S),
    ]),
    row(T, G, T, EmotionClass::Regret, &[
        (Resentment, S), (Hope, P), (FearsConfirmed, P), (Distress, S), (Pride, S),
    ]),
    row(T, T, T, EmotionClass::Any, &[
        (Pity, S), (Fear, P), (FearsConfirmed, P), (Distress, S), (Shame, S),
        (Remorse, C), (Reproach, S), (Anger, C),
    ]),
    row(G, T, T, EmotionClass::Any, &[
        (Pity, S), (Fear, P), (Disappointment, P), (Distress, S), (Shame, S),
        (Remorse, C), (Reproach, S), (Anger, C),
    ]),
];

/// Player's emotion class as the table sees it: valence for a give, regret for a take.
pub fn classify_context(player_move: Move, player_emotion: EmotionLabel, lex: &Lexicon) -> EmotionClass {
    match player_move {
        Move::Give2 => match lex.classify_valence(player_emotion) {
            Valence::Positive => EmotionClass::Positive,
            Valence::Negative => EmotionClass::Negative,
        },
        Move::Take1 if player_emotion.is_regret() => EmotionClass::Regret,
        Move::Take1 => EmotionClass::NoRegret,
    }
}

/// Row group matching a fully specified situation, if any.
pub fn lookup_row(prev: Move, agent: Move, player: Move, class: EmotionClass) -> Option<&'static RowGroup> {
    APPRAISAL_TABLE
        .iter()
        .find(|r| r.prev == prev && r.agent == agent && r.player == player && r.class.admits(class))
}

/// Emotions appraised for a revealed round. A missing previous move reads as a give.
pub fn appraise(ctx: &AppraisalContext, lex: &Lexicon) -> AppraisalSet {
    let prev = ctx.prev_player_move.unwrap_or(Move::Give2);
    let class = classify_context(ctx.player_move, ctx.player_emotion, lex);
    let group = lookup_row(prev, ctx.agent_move, ctx.player_move, class)
        .expect("appraisal table covers every move/class combination");
    AppraisalSet::new(
        group
            .emotions
            .iter()
            .map(|&(label, category)| AppraisedEmotion { label, category }),
    )
}

/// Appraisal before any move: the agent is hopeful about the game ahead.
pub fn initial_appraisal() -> AppraisalSet {
    AppraisalSet::new([AppraisedEmotion {
        label: EmotionLabel::Hope,
        category: Category::ProspectBased,
    }])
}

/// Uniform draw over the distinct labels of `set`.
pub fn select_display<R: Rng + ?Sized>(set: &AppraisalSet, rng: &mut R) -> Result<EmotionLabel, AppraisalError> {
    if set.is_empty() {
        return Err(AppraisalError::EmptySet);
    }
    let idx = rng.random_range(0..set.len());
    Ok(set.emotions[idx].label)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SeededRng;

    fn ctx(prev: Move, agent: Move, player: Move, emotion: EmotionLabel) -> AppraisalContext {
        AppraisalContext {
            prev_player_move: Some(prev),
            agent_move: agent,
            player_move: player,
            player_emotion: emotion,
        }
    }

    #[test]
    fn classify_examples() {
        let lex = Lexicon::bundled();
        assert_eq!(
            classify_context(G, FearsConfirmed, &lex),
            EmotionClass::Negative
        );
        assert_eq!(classify_context(T, Remorse, &lex), EmotionClass::Regret);
        assert_eq!(classify_context(T, Joy, &lex), EmotionClass::NoRegret);
        assert_eq!(classify_context(G, Joy, &lex), EmotionClass::Positive);
    }

    #[test]
    fn regret_take_example() {
        let lex = Lexicon::bundled();
        let set = appraise(&ctx(T, G, T, Remorse), &lex);
        let labels: Vec<_> = set.labels().collect();
        assert_eq!(labels, vec![Resentment, Hope, FearsConfirmed, Distress, Pride]);
    }

    #[test]
    fn mutual_take_after_give_is_disappointment() {
        let lex = Lexicon::bundled();
        let set = appraise(&ctx(G, T, T, Joy), &lex);
        assert!(set.contains(Disappointment));
        assert!(!set.contains(FearsConfirmed));
    }

    #[test]
    fn missing_previous_defaults_to_give() {
        let lex = Lexicon::bundled();
        let mut c = ctx(G, G, G, Joy);
        let with_prev = appraise(&c, &lex);
        c.prev_player_move = None;
        assert_eq!(appraise(&c, &lex), with_prev);
    }

    #[test]
    fn initial_is_hope() {
        let set = initial_appraisal();
        assert_eq!(set.labels().collect::<Vec<_>>(), vec![Hope]);
        assert_eq!(set.category_of(Hope), Some(Category::ProspectBased));
        let mut rng = SeededRng::new(99);
        assert_eq!(select_display(&set, &mut rng).unwrap(), Hope);
    }

    #[test]
    fn empty_set_is_rejected() {
        let mut rng = SeededRng::new(1);
        assert_eq!(
            select_display(&AppraisalSet::new([]), &mut rng),
            Err(AppraisalError::EmptySet)
        );
    }

    #[test]
    fn set_construction_dedups() {
        let e = AppraisedEmotion {
            label: Joy,
            category: S,
        };
        assert_eq!(AppraisalSet::new([e, e]).len(), 1);
    }

    #[test]
    fn categories_are_consistent_per_label() {
        for group in &APPRAISAL_TABLE {
            for &(label, cat) in group.emotions {
                for other in &APPRAISAL_TABLE {
                    if let Some(&(_, c2)) = other.emotions.iter().find(|(l, _)| *l == label) {
                        assert_eq!(cat, c2, "{label}");
                    }
                }
            }
        }
    }
}
