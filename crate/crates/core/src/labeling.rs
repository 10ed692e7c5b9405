//! Per-anchor training labels for both networks and the mutual
//! example-exchange protocol.
//!
//! The proposal network's false positives (score above `fp_score` yet max-IoU
//! with every GT below `neg_iou`) become the hard-negative network's
//! positives; the hard-negative network's top-scoring GT-free anchors come
//! back as the proposal network's hard negatives. Both directions are pure
//! functions of (inputs, seed).

use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{iou, AnchorSet, BoxXYXY};
use crate::rng::sample_without_replacement;

#[derive(Debug, Error, PartialEq)]
pub enum LabelError {
    #[error("label config field {0} must lie in (0, 1)")]
    ThresholdOutOfRange(&'static str),
    #[error("anchor set is empty")]
    EmptyAnchorSet,
    #[error("scores length {got} does not match anchor count {want}")]
    ScoreLengthMismatch { got: usize, want: usize },
    #[error("false-positive index {0} out of range")]
    BadIndex(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LabelConfig {
    /// Anchors at or above this max-IoU are foreground.
    pub fg_iou: f64,
    /// Anchors strictly below this max-IoU are negative-eligible.
    pub neg_iou: f64,
    /// Score threshold of the false-positive definition.
    pub fp_score: f64,
    /// Negatives sampled per image per network.
    pub num_neg: usize,
    /// Fraction of the negative batch filled from exchanged hard negatives
    /// during co-training; the remainder stays randomly sampled easy
    /// negatives.
    pub hard_neg_fraction: f64,
}

impl Default for LabelConfig {
    fn default() -> Self {
        Self {
            fg_iou: 0.7,
            neg_iou: 0.3,
            fp_score: 0.7,
            num_neg: 128,
            hard_neg_fraction: 0.5,
        }
    }
}

impl LabelConfig {
    pub fn validate(&self) -> Result<(), LabelError> {
        for (name, v) in [
            ("fg_iou", self.fg_iou),
            ("neg_iou", self.neg_iou),
            ("fp_score", self.fp_score),
        ] {
            if !(v > 0.0 && v < 1.0) {
                return Err(LabelError::ThresholdOutOfRange(name));
            }
        }
        if !(0.0..=1.0).contains(&self.hard_neg_fraction) {
            return Err(LabelError::ThresholdOutOfRange("hard_neg_fraction"));
        }
        Ok(())
    }

    /// Hard-negative quota of the per-image negative batch.
    pub fn hard_neg_quota(&self) -> usize {
        (self.num_neg as f64 * self.hard_neg_fraction).round() as usize
    }
}

/// Role of one anchor in one image for one network.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AnchorRole {
    /// Positive anchor. `gt` is the matched ground-truth index for the
    /// proposal network and None for the hard-negative network (whose
    /// positives are false positives, not objects); `matched_iou` is the
    /// max-IoU with ground truth, or the 1.0 sentinel when `gt` is None.
    Foreground { gt: Option<usize>, matched_iou: f64 },
    /// Exchanged negative coming from the other network's proposals.
    HardNegative,
    /// Randomly sampled background anchor.
    EasyNegative,
    /// Not used by the loss.
    Ignore,
}

impl AnchorRole {
    pub fn is_foreground(&self) -> bool {
        matches!(self, AnchorRole::Foreground { .. })
    }

    pub fn is_negative(&self) -> bool {
        matches!(self, AnchorRole::HardNegative | AnchorRole::EasyNegative)
    }
}

/// Per-anchor labels aligned with an `AnchorSet`, plus the max-IoU table the
/// assignment was derived from.
#[derive(Debug, Clone)]
pub struct AnchorLabelSet {
    pub roles: Vec<AnchorRole>,
    /// Max IoU of each anchor over all GT boxes (0.0 when there are none).
    pub max_iou: Vec<f64>,
}

impl AnchorLabelSet {
    /// Role-free label set carrying only the max-IoU table; used to probe
    /// false positives against live scores before any role assignment.
    pub fn probe(anchors: &AnchorSet, gts: &[BoxXYXY]) -> Self {
        let (max_iou, _) = max_iou_table(anchors, gts);
        Self {
            roles: vec![AnchorRole::Ignore; anchors.len()],
            max_iou,
        }
    }

    pub fn len(&self) -> usize {
        self.roles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roles.is_empty()
    }

    pub fn foreground_indices(&self) -> Vec<usize> {
        self.roles
            .iter()
            .enumerate()
            .filter(|(_, r)| r.is_foreground())
            .map(|(i, _)| i)
            .collect()
    }

    pub fn negative_indices(&self) -> Vec<usize> {
        self.roles
            .iter()
            .enumerate()
            .filter(|(_, r)| r.is_negative())
            .map(|(i, _)| i)
            .collect()
    }

    pub fn count(&self, pred: impl Fn(&AnchorRole) -> bool) -> usize {
        self.roles.iter().filter(|r| pred(r)).count()
    }
}

/// One co-training step's exchanged example sets for one image.
#[derive(Debug, Clone, Default)]
pub struct ExchangeBatch {
    /// Proposal-network false positives, handed to the hard-negative network
    /// as positives (descending score order).
    pub rpn_fp_indices: Vec<usize>,
    /// Hard-negative-network proposals injected into the proposal network's
    /// negatives; never contains a foreground anchor.
    pub nrpn_hard_indices: Vec<usize>,
}

/// Max IoU over GTs and the argmax GT per anchor.
pub fn max_iou_table(anchors: &AnchorSet, gts: &[BoxXYXY]) -> (Vec<f64>, Vec<Option<usize>>) {
    let mut best = vec![0.0f64; anchors.len()];
    let mut best_gt = vec![None; anchors.len()];
    for (ai, anchor) in anchors.anchors.iter().enumerate() {
        let extent = anchor.extent();
        for (gi, gt) in gts.iter().enumerate() {
            let v = iou(&extent, gt);
            if v > best[ai] {
                best[ai] = v;
                best_gt[ai] = Some(gi);
            }
        }
    }
    (best, best_gt)
}

/// Deterministic foreground assignment: anchors at or above `fg_iou` go
/// foreground with their argmax GT, then every GT without a matched anchor
/// claims its best remaining positive-IoU anchor (ties to the lower index).
fn assign_foreground(
    anchors: &AnchorSet,
    gts: &[BoxXYXY],
    max_iou: &[f64],
    best_gt: &[Option<usize>],
    cfg: &LabelConfig,
    roles: &mut [AnchorRole],
) {
    let mut gt_matched = vec![false; gts.len()];
    for ai in 0..anchors.len() {
        if max_iou[ai] >= cfg.fg_iou {
            if let Some(gi) = best_gt[ai] {
                roles[ai] = AnchorRole::Foreground {
                    gt: Some(gi),
                    matched_iou: max_iou[ai],
                };
                gt_matched[gi] = true;
            }
        }
    }
    for (gi, gt) in gts.iter().enumerate() {
        if gt_matched[gi] {
            continue;
        }
        let mut best_ai = None;
        let mut best_v = 0.0;
        for (ai, anchor) in anchors.anchors.iter().enumerate() {
            if roles[ai].is_foreground() {
                continue;
            }
            let v = iou(&anchor.extent(), gt);
            if v > best_v {
                best_v = v;
                best_ai = Some(ai);
            }
        }
        if let Some(ai) = best_ai {
            roles[ai] = AnchorRole::Foreground {
                gt: Some(gi),
                matched_iou: best_v,
            };
            gt_matched[gi] = true;
        }
    }
}

fn easy_negative_pool(roles: &[AnchorRole], max_iou: &[f64], neg_iou: f64) -> Vec<usize> {
    (0..roles.len())
        .filter(|&i| matches!(roles[i], AnchorRole::Ignore) && max_iou[i] < neg_iou)
        .collect()
}

/// Warm-up labels for the proposal network: threshold + best-anchor-per-GT
/// foreground, `num_neg` randomly sampled easy negatives, rest ignored.
pub fn assign_rpn_base_labels(
    anchors: &AnchorSet,
    gts: &[BoxXYXY],
    cfg: &LabelConfig,
    rng: &mut ChaCha8Rng,
) -> Result<AnchorLabelSet, LabelError> {
    cfg.validate()?;
    if anchors.is_empty() {
        return Err(LabelError::EmptyAnchorSet);
    }
    let (max_iou, best_gt) = max_iou_table(anchors, gts);
    let mut roles = vec![AnchorRole::Ignore; anchors.len()];
    assign_foreground(anchors, gts, &max_iou, &best_gt, cfg, &mut roles);
    let pool = easy_negative_pool(&roles, &max_iou, cfg.neg_iou);
    for idx in sample_without_replacement(&pool, cfg.num_neg, rng) {
        roles[idx] = AnchorRole::EasyNegative;
    }
    Ok(AnchorLabelSet { roles, max_iou })
}

/// Co-training labels for the proposal network: same foreground rule, the
/// exchanged hard negatives fill part of the negative batch, and random easy
/// negatives fill the remainder. Hard indices that collide with a foreground
/// anchor are dropped, never relabeled.
pub fn assign_rpn_cotrain_labels(
    anchors: &AnchorSet,
    gts: &[BoxXYXY],
    hard_indices: &[usize],
    cfg: &LabelConfig,
    rng: &mut ChaCha8Rng,
) -> Result<(AnchorLabelSet, Vec<usize>), LabelError> {
    cfg.validate()?;
    if anchors.is_empty() {
        return Err(LabelError::EmptyAnchorSet);
    }
    let (max_iou, best_gt) = max_iou_table(anchors, gts);
    let mut roles = vec![AnchorRole::Ignore; anchors.len()];
    assign_foreground(anchors, gts, &max_iou, &best_gt, cfg, &mut roles);

    let mut used_hard = Vec::new();
    for &idx in hard_indices {
        if idx >= roles.len() {
            return Err(LabelError::BadIndex(idx));
        }
        if !roles[idx].is_foreground() {
            roles[idx] = AnchorRole::HardNegative;
            used_hard.push(idx);
        }
    }

    let remainder = cfg.num_neg.saturating_sub(used_hard.len());
    let pool = easy_negative_pool(&roles, &max_iou, cfg.neg_iou);
    for idx in sample_without_replacement(&pool, remainder, rng) {
        roles[idx] = AnchorRole::EasyNegative;
    }
    Ok((AnchorLabelSet { roles, max_iou }, used_hard))
}

/// Indices with score strictly above `fp_score` and max-IoU strictly below
/// `neg_iou`, in descending score order (ties to the lower index).
pub fn find_false_positives(
    labels: &AnchorLabelSet,
    scores: &[f64],
    cfg: &LabelConfig,
) -> Result<Vec<usize>, LabelError> {
    cfg.validate()?;
    if scores.len() != labels.len() {
        return Err(LabelError::ScoreLengthMismatch {
            got: scores.len(),
            want: labels.len(),
        });
    }
    let mut out: Vec<usize> = (0..scores.len())
        .filter(|&i| scores[i] > cfg.fp_score && labels.max_iou[i] < cfg.neg_iou)
        .collect();
    out.sort_by(|&a, &b| {
        scores[b]
            .partial_cmp(&scores[a])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    Ok(out)
}

/// Top-k anchors by hard-negative-network score whose max-IoU with every GT
/// is below `neg_iou` (the GT-exclusion rule). Descending score order, ties
/// to the lower index; returns fewer than k when fewer are eligible.
pub fn select_hard_negatives(
    nrpn_scores: &[f64],
    anchors: &AnchorSet,
    gts: &[BoxXYXY],
    k: usize,
    cfg: &LabelConfig,
) -> Result<Vec<usize>, LabelError> {
    cfg.validate()?;
    if nrpn_scores.len() != anchors.len() {
        return Err(LabelError::ScoreLengthMismatch {
            got: nrpn_scores.len(),
            want: anchors.len(),
        });
    }
    let (max_iou, _) = max_iou_table(anchors, gts);
    let mut eligible: Vec<usize> = (0..anchors.len())
        .filter(|&i| max_iou[i] < cfg.neg_iou)
        .collect();
    eligible.sort_by(|&a, &b| {
        nrpn_scores[b]
            .partial_cmp(&nrpn_scores[a])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    eligible.truncate(k);
    Ok(eligible)
}

/// Labels for the hard-negative network: the exchanged false positives are
/// its positives (1.0 sentinel IoU, no GT), its negatives are randomly
/// sampled anchors that are neither false positives nor near any GT.
pub fn build_nrpn_labels(
    fp_indices: &[usize],
    anchors: &AnchorSet,
    gts: &[BoxXYXY],
    cfg: &LabelConfig,
    rng: &mut ChaCha8Rng,
) -> Result<AnchorLabelSet, LabelError> {
    cfg.validate()?;
    if anchors.is_empty() {
        return Err(LabelError::EmptyAnchorSet);
    }
    let (max_iou, _) = max_iou_table(anchors, gts);
    let mut roles = vec![AnchorRole::Ignore; anchors.len()];
    for &idx in fp_indices {
        if idx >= roles.len() {
            return Err(LabelError::BadIndex(idx));
        }
        roles[idx] = AnchorRole::Foreground {
            gt: None,
            matched_iou: 1.0,
        };
    }
    let pool = easy_negative_pool(&roles, &max_iou, cfg.neg_iou);
    for idx in sample_without_replacement(&pool, cfg.num_neg, rng) {
        roles[idx] = AnchorRole::EasyNegative;
    }
    Ok(AnchorLabelSet { roles, max_iou })
}
