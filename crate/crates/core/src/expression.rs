//! Facial expression controls.
//!
//! The face is driven by three bipolar axes (happy/sad, surprise/anger,
//! fear/disgust). An emotion's EPA rating is placed on each axis by comparing
//! its distances to the axis endpoints: `(d_neg - d_pos) / (d_neg + d_pos)`,
//! which is +1 on the positive endpoint, -1 on the negative one and 0 on the
//! perpendicular bisector.

use serde::{Deserialize, Serialize};

use crate::lexicon::{EmotionLabel, EpaVector, Lexicon};

/// EPA ratings of the six axis endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HsfEndpoints {
    pub happy: EpaVector,
    pub sad: EpaVector,
    pub surprise: EpaVector,
    pub anger: EpaVector,
    pub fear: EpaVector,
    pub disgust: EpaVector,
}

pub const HSF_ENDPOINTS: HsfEndpoints = HsfEndpoints {
    happy: EpaVector::new(3.45, 2.91, 0.24),
    sad: EpaVector::new(-2.38, -1.34, -1.88),
    surprise: EpaVector::new(1.48, 1.32, 2.31),
    anger: EpaVector::new(-2.03, 1.07, 1.80),
    fear: EpaVector::new(-2.41, -0.76, -0.68),
    disgust: EpaVector::new(-2.57, 0.27, 0.43),
};

impl HsfEndpoints {
    /// (positive, negative) endpoint per axis, in control order.
    pub fn axes(&self) -> [(EpaVector, EpaVector); 3] {
        [
            (self.happy, self.sad),
            (self.surprise, self.anger),
            (self.fear, self.disgust),
        ]
    }
}

/// Face control values, each in [-1, 1]; positive means the first-named emotion.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct HsfControls {
    pub happy_sad: f64,
    pub surprise_anger: f64,
    pub fear_disgust: f64,
}

impl HsfControls {
    pub fn as_array(&self) -> [f64; 3] {
        [self.happy_sad, self.surprise_anger, self.fear_disgust]
    }
}

/// Position of `epa` on the axis running from `negative` (-1) to `positive` (+1).
pub fn axis_control(epa: &EpaVector, positive: &EpaVector, negative: &EpaVector) -> f64 {
    let d_pos = epa.distance(positive);
    let d_neg = epa.distance(negative);
    let total = d_pos + d_neg;
    if total == 0.0 {
        return 0.0;
    }
    ((d_neg - d_pos) / total).clamp(-1.0, 1.0)
}

pub fn epa_to_hsf(epa: &EpaVector) -> HsfControls {
    let [hs, sa, fd] = HSF_ENDPOINTS.axes().map(|(pos, neg)| axis_control(epa, &pos, &neg));
    HsfControls {
        happy_sad: hs,
        surprise_anger: sa,
        fear_disgust: fd,
    }
}

pub fn face_controls_for(label: EmotionLabel, lex: &Lexicon) -> HsfControls {
    epa_to_hsf(&lex.epa(label))
}

/// Timing of one emotional display: full strength for `hold_seconds`, then a
/// linear fade to the quiescent face over `decay_seconds`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DisplayEnvelope {
    pub hold_seconds: f64,
    pub decay_seconds: f64,
}

pub const DISPLAY_HOLD_SECONDS: f64 = 10.5;
pub const DEFAULT_DECAY_SECONDS: f64 = 4.0;

impl Default for DisplayEnvelope {
    fn default() -> Self {
        Self {
            hold_seconds: DISPLAY_HOLD_SECONDS,
            decay_seconds: DEFAULT_DECAY_SECONDS,
        }
    }
}

impl DisplayEnvelope {
    pub fn with_decay(decay_seconds: f64) -> Self {
        assert!(decay_seconds > 0.0, "decay must be positive");
        Self {
            decay_seconds,
            ..Self::default()
        }
    }
}

/// Display intensity in [0, 1] at `t` seconds after the emotion was shown.
pub fn intensity_at(t_since_display: f64, env: &DisplayEnvelope) -> f64 {
    let t = t_since_display.max(0.0);
    if t <= env.hold_seconds {
        return 1.0;
    }
    (1.0 - (t - env.hold_seconds) / env.decay_seconds).clamp(0.0, 1.0)
}
