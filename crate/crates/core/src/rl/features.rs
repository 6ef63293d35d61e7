//! State vector construction from per-face epoch observations.

use serde::{Deserialize, Serialize};

use super::reward::{retx_diff, retx_ratio};

/// Delay feature saturates at this many seconds.
pub const DELAY_CAP_S: f64 = 2.0;
/// Retransmission difference is divided by this before clipping to [0, 1].
pub const RETX_DIFF_SCALE: f64 = 64.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, PartialOrd, Ord)]
#[serde(rename_all = "snake_case")]
pub enum Feature {
    AvgDelay,
    SatisfactionRatio,
    RetxRatio,
    RetxDiff,
}

impl Feature {
    pub const ALL: [Feature; 4] = [
        Feature::AvgDelay,
        Feature::SatisfactionRatio,
        Feature::RetxRatio,
        Feature::RetxDiff,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Feature::AvgDelay => "avg_delay",
            Feature::SatisfactionRatio => "satisfaction_ratio",
            Feature::RetxRatio => "retx_ratio",
            Feature::RetxDiff => "retx_diff",
        }
    }

    pub fn parse(s: &str) -> Option<Feature> {
        Feature::ALL.into_iter().find(|f| f.as_str() == s)
    }
}

/// Enabled per-face feature flags; iteration order is fixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct FeatureSet {
    pub avg_delay: bool,
    pub satisfaction_ratio: bool,
    pub retx_ratio: bool,
    pub retx_diff: bool,
}

impl FeatureSet {
    pub fn from_features(features: &[Feature]) -> Self {
        let mut s = FeatureSet::default();
        for f in features {
            match f {
                Feature::AvgDelay => s.avg_delay = true,
                Feature::SatisfactionRatio => s.satisfaction_ratio = true,
                Feature::RetxRatio => s.retx_ratio = true,
                Feature::RetxDiff => s.retx_diff = true,
            }
        }
        s
    }

    pub fn enabled(&self) -> Vec<Feature> {
        Feature::ALL
            .into_iter()
            .filter(|f| match f {
                Feature::AvgDelay => self.avg_delay,
                Feature::SatisfactionRatio => self.satisfaction_ratio,
                Feature::RetxRatio => self.retx_ratio,
                Feature::RetxDiff => self.retx_diff,
            })
            .collect()
    }

    pub fn count(&self) -> usize {
        self.enabled().len()
    }

    pub fn dimension(&self, faces: usize) -> usize {
        faces * self.count()
    }
}

/// Raw observations of one face, as consumed by [`build_features`].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FaceObservation {
    /// Mean of the most recent data RTTs on this face, seconds (0 if none).
    pub avg_delay_s: f64,
    pub satisfaction_ratio: f64,
    /// Retransmissions this epoch whose original transmission used this face.
    pub retx_from_face: u64,
    pub is_last_choice: bool,
}

/// Epoch-wide counters shared by all face blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct EpochTotals {
    pub retransmitted: u64,
    pub new: u64,
}

pub type FeatureVector = Vec<f64>;

/// Concatenates per-face feature blocks in FIB rank order. Every component is in [0, 1].
pub fn build_features(set: &FeatureSet, faces: &[FaceObservation], totals: EpochTotals) -> FeatureVector {
    let mut out = Vec::with_capacity(set.dimension(faces.len()));
    for face in faces {
        if set.avg_delay {
            out.push(face.avg_delay_s.clamp(0.0, DELAY_CAP_S) / DELAY_CAP_S);
        }
        if set.satisfaction_ratio {
            out.push(face.satisfaction_ratio.clamp(0.0, 1.0));
        }
        if set.retx_ratio {
            out.push(retx_ratio(face.retx_from_face, totals.retransmitted).clamp(0.0, 1.0));
        }
        if set.retx_diff {
            let d = if face.is_last_choice {
                retx_diff(totals.retransmitted, totals.new)
            } else {
                0.0
            };
            out.push((d / RETX_DIFF_SCALE).clamp(0.0, 1.0));
        }
    }
    out
}
