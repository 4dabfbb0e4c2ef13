//! Headless play: scripted opponents, tournaments, oracle checks and log replay.
//!
//! Matches drive the same [`Session`] state machine the live service uses, so
//! a transcript produced here is what a human would have seen given the same
//! inputs and seed.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::agent::{AgentCondition, AgentDeps};
use crate::appraisal::{appraise, AppraisalContext, Category, EmotionClass};
use crate::coping::{cope, tf2t, CopingContext, CopingStrategy};
use crate::game::{GameConfig, GameState, Move, RoundRecord};
use crate::lexicon::{EmotionLabel, Lexicon};
use crate::rng::{RngState, SeededRng};
use crate::session::{LogLine, Phase, Session, SessionError};

/// Deepest exhaustive search `verify` accepts.
pub const MAX_VERIFY_DEPTH: usize = 14;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("rounds must be at least 1")]
    NoRounds,
    #[error("scripted {what} list has {len} entries, match needs {rounds}")]
    ScriptTooShort {
        what: &'static str,
        len: usize,
        rounds: u32,
    },
    #[error("invalid player spec {0:?}")]
    BadPlayer(String),
    #[error("verification depth {0} exceeds the limit of {MAX_VERIFY_DEPTH}")]
    DepthTooLarge(usize),
    #[error("log has no header line")]
    MissingHeader,
    #[error(transparent)]
    Session(#[from] SessionError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum PlayerPolicy {
    AlwaysGive,
    AlwaysTake,
    /// Give, take, give, ...
    Alternate,
    /// Copy the agent's previous move, opening with a give.
    TitForTat,
    MoveList(Vec<Move>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum EmotionPolicy {
    FixedLabel(EmotionLabel),
    /// `joy` when the player's previous payoff was at least 2 (or in round 1),
    /// `distress` otherwise.
    EchoValence,
    RandomUniform,
    EmotionList(Vec<EmotionLabel>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScriptedPlayer {
    pub policy: PlayerPolicy,
    pub emotion_policy: EmotionPolicy,
}

impl ScriptedPlayer {
    pub fn new(policy: PlayerPolicy, emotion_policy: EmotionPolicy) -> Self {
        Self {
            policy,
            emotion_policy,
        }
    }

    pub fn next_move(&self, state: &GameState) -> Move {
        let round = state.round_index as usize;
        match &self.policy {
            PlayerPolicy::AlwaysGive => Move::Give2,
            PlayerPolicy::AlwaysTake => Move::Take1,
            PlayerPolicy::Alternate if round.is_multiple_of(2) => Move::Give2,
            PlayerPolicy::Alternate => Move::Take1,
            PlayerPolicy::TitForTat => state.last_round().map_or(Move::Give2, |r| r.agent_move),
            PlayerPolicy::MoveList(moves) => moves[round],
        }
    }

    pub fn next_emotion<R: Rng + ?Sized>(&self, state: &GameState, rng: &mut R) -> EmotionLabel {
        match &self.emotion_policy {
            EmotionPolicy::FixedLabel(label) => *label,
            EmotionPolicy::EchoValence => match state.last_round() {
                Some(r) if r.player_payoff < 2 => EmotionLabel::Distress,
                _ => EmotionLabel::Joy,
            },
            EmotionPolicy::RandomUniform => EmotionLabel::ALL[rng.random_range(0..EmotionLabel::COUNT)],
            EmotionPolicy::EmotionList(labels) => labels[state.round_index as usize],
        }
    }

    fn check_length(&self, rounds: u32) -> Result<(), SimError> {
        let short = |what, len: usize| {
            if len < rounds as usize {
                Err(SimError::ScriptTooShort { what, len, rounds })
            } else {
                Ok(())
            }
        };
        if let PlayerPolicy::MoveList(m) = &self.policy {
            short("move", m.len())?;
        }
        if let EmotionPolicy::EmotionList(e) = &self.emotion_policy {
            short("emotion", e.len())?;
        }
        Ok(())
    }
}

/// `policy[:emotion]`, e.g. `always-take:anger`, `alternate:echo`,
/// `moves=give2,take1,take1:random`. The emotion defaults to `joy`.
impl FromStr for ScriptedPlayer {
    type Err = SimError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || SimError::BadPlayer(s.to_string());
        let (policy, emotion) = s.split_once(':').unwrap_or((s, "joy"));
        let policy = match policy {
            "always-give" => PlayerPolicy::AlwaysGive,
            "always-take" => PlayerPolicy::AlwaysTake,
            "alternate" => PlayerPolicy::Alternate,
            "tit-for-tat" => PlayerPolicy::TitForTat,
            other => {
                let list = other.strip_prefix("moves=").ok_or_else(bad)?;
                PlayerPolicy::MoveList(
                    list.split(',')
                        .map(|m| m.trim().parse())
                        .collect::<Result<_, _>>()
                        .map_err(|_| bad())?,
                )
            }
        };
        let emotion_policy = match emotion {
            "echo" => EmotionPolicy::EchoValence,
            "random" => EmotionPolicy::RandomUniform,
            other => match other.strip_prefix("emotions=") {
                Some(list) => EmotionPolicy::EmotionList(
                    list.split(',')
                        .map(|e| e.trim().parse())
                        .collect::<Result<_, _>>()
                        .map_err(|_| bad())?,
                ),
                None => EmotionPolicy::FixedLabel(other.parse().map_err(|_| bad())?),
            },
        };
        Ok(ScriptedPlayer::new(policy, emotion_policy))
    }
}

impl fmt::Display for ScriptedPlayer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |items: Vec<&str>| items.join(",");
        match &self.policy {
            PlayerPolicy::AlwaysGive => f.write_str("always-give")?,
            PlayerPolicy::AlwaysTake => f.write_str("always-take")?,
            PlayerPolicy::Alternate => f.write_str("alternate")?,
            PlayerPolicy::TitForTat => f.write_str("tit-for-tat")?,
            PlayerPolicy::MoveList(m) => write!(f, "moves={}", join(m.iter().map(|m| m.as_str()).collect()))?,
        }
        match &self.emotion_policy {
            EmotionPolicy::FixedLabel(l) => write!(f, ":{l}"),
            EmotionPolicy::EchoValence => f.write_str(":echo"),
            EmotionPolicy::RandomUniform => f.write_str(":random"),
            EmotionPolicy::EmotionList(e) => write!(f, ":emotions={}", join(e.iter().map(|e| e.as_str()).collect())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchTotals {
    pub player_score: u32,
    pub agent_score: u32,
    pub cooperation_count: u32,
    pub agent_cooperation_count: u32,
}

impl MatchTotals {
    pub fn from_transcript(transcript: &[RoundRecord]) -> Self {
        transcript.iter().fold(
            MatchTotals {
                player_score: 0,
                agent_score: 0,
                cooperation_count: 0,
                agent_cooperation_count: 0,
            },
            |t, r| MatchTotals {
                player_score: t.player_score + r.player_payoff,
                agent_score: t.agent_score + r.agent_payoff,
                cooperation_count: t.cooperation_count + u32::from(r.player_move.is_cooperation()),
                agent_cooperation_count: t.agent_cooperation_count + u32::from(r.agent_move.is_cooperation()),
            },
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchReport {
    pub condition: AgentCondition,
    pub player: String,
    pub seed: u64,
    pub rounds: u32,
    pub transcript: Vec<RoundRecord>,
    pub totals: MatchTotals,
}

impl MatchReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}

struct Played {
    report: MatchReport,
    rng_states: Vec<RngState>,
}

fn play_match(
    condition: AgentCondition,
    player: &ScriptedPlayer,
    rounds: u32,
    seed: u64,
    deps: &AgentDeps,
) -> Result<Played, SimError> {
    if rounds == 0 {
        return Err(SimError::NoRounds);
    }
    player.check_length(rounds)?;
    let config = GameConfig {
        rounds_played: rounds,
        rounds_announced: rounds.max(GameConfig::default().rounds_announced),
        rng_seed: seed,
        ..GameConfig::default()
    };
    let mut session = Session::new(format!("match-{seed}"), condition, config)?;
    let mut player_rng = SeededRng::with_stream(seed, 1);
    let mut rng_states = Vec::with_capacity(rounds as usize);

    while session.phase() != Phase::Finished {
        let mv = player.next_move(session.state());
        session.submit_action(mv)?;
        let emotion = player.next_emotion(session.state(), &mut player_rng);
        session.submit_emotion(emotion, deps)?;
        rng_states.push(session.rng_state());
        session.advance()?;
    }

    let transcript = session.state().history.clone();
    Ok(Played {
        report: MatchReport {
            condition,
            player: player.to_string(),
            seed,
            rounds,
            totals: MatchTotals::from_transcript(&transcript),
            transcript,
        },
        rng_states,
    })
}

/// Play one deterministic match against a scripted player.
pub fn run_match(
    condition: AgentCondition,
    player: &ScriptedPlayer,
    rounds: u32,
    seed: u64,
    deps: &AgentDeps,
) -> Result<MatchReport, SimError> {
    play_match(condition, player, rounds, seed, deps).map(|p| p.report)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TournamentRow {
    pub condition: AgentCondition,
    pub player_policy: String,
    pub repetition: u32,
    pub player_score: u32,
    pub agent_score: u32,
    pub cooperation_count: u32,
}

pub const TOURNAMENT_COLUMNS: [&str; 6] = [
    "condition",
    "player_policy",
    "repetition",
    "player_score",
    "agent_score",
    "cooperation_count",
];

/// Every condition against every player, `repetitions` times. Repetition `r`
/// uses seed `seed + r` for all pairings, so conditions see identical player
/// randomness.
pub fn tournament(
    conditions: &[AgentCondition],
    players: &[ScriptedPlayer],
    repetitions: u32,
    rounds: u32,
    seed: u64,
    deps: &AgentDeps,
) -> Result<Vec<TournamentRow>, SimError> {
    let mut rows = Vec::new();
    for &condition in conditions {
        for player in players {
            for repetition in 0..repetitions {
                let report = run_match(condition, player, rounds, seed.wrapping_add(u64::from(repetition)), deps)?;
                rows.push(TournamentRow {
                    condition,
                    player_policy: report.player.clone(),
                    repetition,
                    player_score: report.totals.player_score,
                    agent_score: report.totals.agent_score,
                    cooperation_count: report.totals.cooperation_count,
                });
            }
        }
    }
    Ok(rows)
}

pub fn write_tournament_csv<W: Write>(rows: &[TournamentRow], out: W) -> Result<(), SimError> {
    let mut writer = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    writer.write_record(TOURNAMENT_COLUMNS)?;
    for r in rows {
        writer.write_record([
            r.condition.as_str(),
            &r.player_policy,
            &r.repetition.to_string(),
            &r.player_score.to_string(),
            &r.agent_score.to_string(),
            &r.cooperation_count.to_string(),
        ])?;
    }
    writer.flush()?;
    Ok(())
}

/// A move-policy disagreement with tit-for-two-tats.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub moves: Vec<Move>,
    pub emotions: Vec<EmotionLabel>,
    /// Round (0-based) whose agent move disagreed.
    pub round: usize,
    pub expected: Move,
    pub got: Move,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let history: Vec<String> = self
            .moves
            .iter()
            .zip(&self.emotions)
            .map(|(m, e)| format!("{m}/{e}"))
            .collect();
        write!(
            f,
            "after [{}] round {}: expected {}, got {}",
            history.join(" "),
            self.round,
            self.expected,
            self.got
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Violation {
    Move(Counterexample),
    Appraisal { cell: String, detail: String },
    Coping { case: String, detail: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Move(c) => write!(f, "move oracle: {c}"),
            Violation::Appraisal { cell, detail } => write!(f, "appraisal {cell}: {detail}"),
            Violation::Coping { case, detail } => write!(f, "coping {case}: {detail}"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub depth: usize,
    /// Complete player histories of length `depth` enumerated.
    pub sequences: u64,
    /// Individual agent decisions compared against the oracle.
    pub decisions: u64,
    pub random_sequences: u64,
    pub appraisal_cells: u32,
    pub coping_cases: u32,
    pub violations: Vec<Violation>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

// Independent transcription of the appraisal table: previous player move,
// agent move, player move, player class, then label/category pairs where
// S = momentary single, C = momentary compound, P = prospect-based.
const APPRAISAL_GOLDEN: [(&str, &str, &str, &str, &str); 12] = [
    ("give2", "give2", "give2", "any", "happy-for/S hope/P satisfaction/P joy/S pride/S gratification/C admiration/S gratitude/C"),
    ("take1", "give2", "give2", "any", "happy-for/S hope/P relief/P joy/S pride/S gratification/C admiration/S gratitude/C"),
    ("give2", "take1", "give2", "positive", "pity/S hope/P satisfaction/P joy/S admiration/S gratitude/C shame/S"),
    ("take1", "take1", "give2", "positive", "pity/S hope/P relief/P joy/S admiration/S gratitude/C shame/S"),
    ("give2", "take1", "give2", "negative", "gloating/S fear/P satisfaction/P pride/S joy/S gratification/C"),
    ("take1", "take1", "give2", "negative", "gloating/S fear/P relief/P pride/S joy/S gratification/C"),
    ("give2", "give2", "take1", "no-regret", "resentment/S fear/P disappointment/P distress/S reproach/S anger/C pride/S"),
    ("take1", "give2", "take1", "no-regret", "resentment/S fear/P fears-confirmed/P distress/S reproach/S anger/C pride/S"),
    ("give2", "give2", "take1", "regret", "resentment/S hope/P disappointment/P distress/S pride/S"),
    ("take1", "give2", "take1", "regret", "resentment/S hope/P fears-confirmed/P distress/S pride/S"),
    ("take1", "take1", "take1", "any", "pity/S fear/P fears-confirmed/P distress/S shame/S remorse/C reproach/S anger/C"),
    ("give2", "take1", "take1", "any", "pity/S fear/P disappointment/P distress/S shame/S remorse/C reproach/S anger/C"),
];

// Independent transcription of the coping table: t-2, t-1, class, move, strategy.
const COPING_GOLDEN: [(&str, &str, &str, &str, CopingStrategy); 6] = [
    ("take1", "take1", "any", "take1", CopingStrategy::Acceptance),
    ("take1", "give2", "positive", "give2", CopingStrategy::Growth),
    ("take1", "give2", "negative", "give2", CopingStrategy::GrowthDenial),
    ("give2", "take1", "regret", "give2", CopingStrategy::Restraint),
    ("give2", "take1", "no-regret", "give2", CopingStrategy::Denial),
    ("give2", "give2", "any", "give2", CopingStrategy::SeekSupport),
];

fn class_name(class: EmotionClass) -> &'static str {
    match class {
        EmotionClass::Any => "any",
        EmotionClass::Positive => "positive",
        EmotionClass::Negative => "negative",
        EmotionClass::Regret => "regret",
        EmotionClass::NoRegret => "no-regret",
    }
}

fn category_code(category: Category) -> &'static str {
    match category {
        Category::MomentarySingle => "S",
        Category::MomentaryCompound => "C",
        Category::ProspectBased => "P",
    }
}

/// Classes the tables distinguish for a player move, each with a label that
/// falls into it under `lex`.
pub fn class_representatives(player_move: Move, lex: &Lexicon) -> Vec<(EmotionClass, EmotionLabel)> {
    let pick = |pred: &dyn Fn(EmotionLabel) -> bool| EmotionLabel::ALL.into_iter().find(|&l| pred(l));
    let candidates: [(EmotionClass, Option<EmotionLabel>); 2] = match player_move {
        Move::Give2 => [
            (EmotionClass::Positive, pick(&|l| lex.classify_valence(l).is_positive())),
            (EmotionClass::Negative, pick(&|l| !lex.classify_valence(l).is_positive())),
        ],
        Move::Take1 => [
            (EmotionClass::Regret, pick(&|l| l.is_regret())),
            (EmotionClass::NoRegret, pick(&|l| !l.is_regret())),
        ],
    };
    candidates
        .into_iter()
        .filter_map(|(c, l)| l.map(|l| (c, l)))
        .collect()
}

fn verify_lexicon(lex: &Lexicon, report: &mut VerificationReport) {
    for label in EmotionLabel::ALL.into_iter().filter(|l| l.is_regret()) {
        if lex.classify_valence(label).is_positive() {
            report.violations.push(Violation::Appraisal {
                cell: format!("lexicon {label}"),
                detail: "regret label has positive evaluation".into(),
            });
        }
    }
    for mv in Move::ALL {
        let found = class_representatives(mv, lex);
        if found.len() < 2 {
            report.violations.push(Violation::Appraisal {
                cell: format!("lexicon {mv}"),
                detail: format!("only {} of 2 emotion classes have a label", found.len()),
            });
        }
    }
}

fn verify_appraisal(lex: &Lexicon, report: &mut VerificationReport) {
    for prev in Move::ALL {
        for agent in Move::ALL {
            for player in Move::ALL {
                for (class, label) in class_representatives(player, lex) {
                    report.appraisal_cells += 1;
                    let cell = format!("({prev},{agent},{player},{})", class_name(class));
                    let set = appraise(
                        &AppraisalContext {
                            prev_player_move: Some(prev),
                            agent_move: agent,
                            player_move: player,
                            player_emotion: label,
                        },
                        lex,
                    );
                    let got: Vec<String> = set
                        .emotions()
                        .iter()
                        .map(|e| format!("{}/{}", e.label, category_code(e.category)))
                        .collect();
                    let golden = APPRAISAL_GOLDEN.iter().find(|(p, a, m, c, _)| {
                        *p == prev.as_str()
                            && *a == agent.as_str()
                            && *m == player.as_str()
                            && (*c == "any" || *c == class_name(class))
                    });
                    let Some((.., expected)) = golden else {
                        report.violations.push(Violation::Appraisal {
                            cell,
                            detail: "no reference row".into(),
                        });
                        continue;
                    };
                    let mut want: Vec<&str> = expected.split(' ').collect();
                    let mut have: Vec<&str> = got.iter().map(String::as_str).collect();
                    if have.is_empty() {
                        report.violations.push(Violation::Appraisal {
                            cell,
                            detail: "empty set".into(),
                        });
                        continue;
                    }
                    want.sort_unstable();
                    have.sort_unstable();
                    if want != have {
                        report.violations.push(Violation::Appraisal {
                            cell,
                            detail: format!("expected {{{}}}, got {{{}}}", want.join(" "), have.join(" ")),
                        });
                    }
                }
            }
        }
    }
}

fn verify_coping<P>(policy: &P, lex: &Lexicon, report: &mut VerificationReport)
where
    P: Fn(&CopingContext, &Lexicon) -> (Move, CopingStrategy),
{
    report.coping_cases += 1;
    let opening = policy(&CopingContext::default(), lex);
    if opening != (Move::Give2, CopingStrategy::SeekSupport) {
        report.violations.push(Violation::Coping {
            case: "opening".into(),
            detail: format!("expected (give2, seek-support), got ({}, {})", opening.0, opening.1),
        });
    }
    for (t2, t1, class, next, strategy) in COPING_GOLDEN {
        let t2: Move = t2.parse().expect("golden move");
        let t1: Move = t1.parse().expect("golden move");
        let next: Move = next.parse().expect("golden move");
        for (actual_class, label) in class_representatives(t1, lex) {
            if class != "any" && class != class_name(actual_class) {
                continue;
            }
            report.coping_cases += 1;
            let got = policy(&CopingContext::new(Some(t2), Some((t1, label))), lex);
            if got != (next, strategy) {
                report.violations.push(Violation::Coping {
                    case: format!("({t2},{t1},{label})"),
                    detail: format!("expected ({next}, {strategy}), got ({}, {})", got.0, got.1),
                });
            }
        }
    }
}

fn check_prefix<P>(policy: &P, lex: &Lexicon, moves: &[Move], emotions: &[EmotionLabel]) -> Option<Counterexample>
where
    P: Fn(&CopingContext, &Lexicon) -> (Move, CopingStrategy),
{
    let expected = tf2t(moves);
    let (got, _) = policy(&CopingContext::from_sequences(moves, emotions), lex);
    (got != expected).then(|| Counterexample {
        moves: moves.to_vec(),
        emotions: emotions.to_vec(),
        round: moves.len(),
        expected,
        got,
    })
}

const MAX_REPORTED: usize = 20;

/// Exhaustive comparison of the coping move stream with tit-for-two-tats over
/// every player history up to `depth`, where each round's emotion ranges over
/// the classes the tables distinguish for that round's move.
pub fn verify_move_equivalence<P>(policy: &P, lex: &Lexicon, depth: usize, report: &mut VerificationReport)
where
    P: Fn(&CopingContext, &Lexicon) -> (Move, CopingStrategy),
{
    let reps: Vec<(Move, Vec<(EmotionClass, EmotionLabel)>)> =
        Move::ALL.into_iter().map(|m| (m, class_representatives(m, lex))).collect();
    let mut moves = Vec::with_capacity(depth);
    let mut emotions = Vec::with_capacity(depth);

    fn walk<P>(
        policy: &P,
        lex: &Lexicon,
        depth: usize,
        reps: &[(Move, Vec<(EmotionClass, EmotionLabel)>)],
        moves: &mut Vec<Move>,
        emotions: &mut Vec<EmotionLabel>,
        report: &mut VerificationReport,
    ) where
        P: Fn(&CopingContext, &Lexicon) -> (Move, CopingStrategy),
    {
        report.decisions += 1;
        if let Some(c) = check_prefix(policy, lex, moves, emotions) {
            if report.violations.len() < MAX_REPORTED {
                report.violations.push(Violation::Move(c));
            }
        }
        if moves.len() == depth {
            report.sequences += 1;
            return;
        }
        for (mv, classes) in reps {
            for &(_, label) in classes {
                moves.push(*mv);
                emotions.push(label);
                walk(policy, lex, depth, reps, moves, emotions, report);
                moves.pop();
                emotions.pop();
            }
        }
    }

    walk(policy, lex, depth, &reps, &mut moves, &mut emotions, report);
}

/// Random histories of length `len` with emotions drawn from all labels.
pub fn verify_random_sequences<P>(
    policy: &P,
    lex: &Lexicon,
    count: u64,
    len: usize,
    seed: u64,
    report: &mut VerificationReport,
) where
    P: Fn(&CopingContext, &Lexicon) -> (Move, CopingStrategy),
{
    let mut rng = SeededRng::new(seed);
    for _ in 0..count {
        let moves: Vec<Move> = (0..len).map(|_| Move::ALL[rng.random_range(0..2)]).collect();
        let emotions: Vec<EmotionLabel> = (0..len)
            .map(|_| EmotionLabel::ALL[rng.random_range(0..EmotionLabel::COUNT)])
            .collect();
        report.random_sequences += 1;
        for k in 0..=len {
            report.decisions += 1;
            if let Some(c) = check_prefix(policy, lex, &moves[..k], &emotions[..k]) {
                if report.violations.len() < MAX_REPORTED {
                    report.violations.push(Violation::Move(c));
                }
                break;
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    pub depth: usize,
    pub random_sequences: u64,
    pub random_length: usize,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            depth: 6,
            random_sequences: 10_000,
            random_length: 25,
            seed: 0,
        }
    }
}

/// Run every oracle check against an arbitrary coping policy.
pub fn verify_with_policy<P>(policy: &P, lex: &Lexicon, opts: VerifyOptions) -> Result<VerificationReport, SimError>
where
    P: Fn(&CopingContext, &Lexicon) -> (Move, CopingStrategy),
{
    if opts.depth > MAX_VERIFY_DEPTH {
        return Err(SimError::DepthTooLarge(opts.depth));
    }
    let mut report = VerificationReport {
        depth: opts.depth,
        ..VerificationReport::default()
    };
    verify_lexicon(lex, &mut report);
    verify_appraisal(lex, &mut report);
    verify_coping(policy, lex, &mut report);
    verify_move_equivalence(policy, lex, opts.depth, &mut report);
    verify_random_sequences(policy, lex, opts.random_sequences, opts.random_length, opts.seed, &mut report);
    Ok(report)
}

/// Oracle checks for the shipped coping policy.
pub fn verify_oracles(lex: &Lexicon, opts: VerifyOptions) -> Result<VerificationReport, SimError> {
    verify_with_policy(&cope, lex, opts)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReplayReport {
    pub session_id: String,
    pub condition: AgentCondition,
    pub rounds: usize,
    pub mismatches: Vec<String>,
}

impl ReplayReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Re-run a session log through the simulator and compare every agent output
/// and random cursor with what was logged.
pub fn replay_log(lines: &[LogLine], deps: &AgentDeps) -> Result<ReplayReport, SimError> {
    let Some(LogLine::Header(header)) = lines.first() else {
        return Err(SimError::MissingHeader);
    };
    let logged: Vec<(&RoundRecord, &RngState)> = lines[1..]
        .iter()
        .filter_map(|l| match l {
            LogLine::Round { record, rng_state } => Some((record, rng_state)),
            LogLine::Header(_) => None,
        })
        .collect();
    let mut report = ReplayReport {
        session_id: header.session_id.clone(),
        condition: header.condition,
        rounds: logged.len(),
        mismatches: Vec::new(),
    };
    if logged.is_empty() {
        return Ok(report);
    }

    let player = ScriptedPlayer::new(
        PlayerPolicy::MoveList(logged.iter().map(|(r, _)| r.player_move).collect()),
        EmotionPolicy::EmotionList(logged.iter().map(|(r, _)| r.player_emotion).collect()),
    );
    let played = play_match(
        header.condition,
        &player,
        logged.len() as u32,
        header.config.rng_seed,
        deps,
    )?;

    for (i, ((want, want_rng), (got, got_rng))) in logged
        .iter()
        .zip(played.report.transcript.iter().zip(&played.rng_states))
        .enumerate()
    {
        if *want != got {
            report.mismatches.push(format!(
                "round {i}: logged {}, replayed {}",
                serde_json::to_string(want).expect("records serialize"),
                serde_json::to_string(got).expect("records serialize"),
            ));
        }
        if *want_rng != got_rng {
            report
                .mismatches
                .push(format!("round {i}: logged rng {want_rng:?}, replayed {got_rng:?}"));
        }
    }
    Ok(report)
}
