//! The training curriculum: warm up the proposal network alone on easy
//! negatives, then co-train it with the hard-negative network, exchanging
//! examples every step — false positives flow one way, hard negatives flow
//! back, recomputed fresh from the current scores with no replay buffer.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::data::SampleRecord;
use crate::geometry::{
    clip_box, decode_regression, encode_regression, nms, AnchorConfig, AnchorSet, GeometryError,
    Proposal, ProposalSet, RegressionTarget,
};
use crate::labeling::{
    assign_rpn_base_labels, assign_rpn_cotrain_labels, build_nrpn_labels, find_false_positives,
    select_hard_negatives, AnchorLabelSet, AnchorRole, LabelConfig, LabelError,
};
use crate::losses::{total_loss, ClsTerm, LossConfig, LossError};
use crate::nn::{
    flatten_scores, reg_at, scatter_reg_grads, scatter_score_grads, sgd_step, ForwardCache,
    HeadOutput, Network, NetworkConfig, NnError, Tensor,
};
use crate::rng::{derive_seed, rng_from};

pub const DEFAULT_NMS_IOU: f64 = 0.7;

// rng stream tags
const SALT_RPN_INIT: u64 = 0x7261_0001;
const SALT_NRPN_INIT: u64 = 0x7261_0002;
const SALT_STEP: u64 = 0x7261_0003;

#[derive(Debug, Error)]
pub enum TrainError {
    #[error("invalid train config: {0}")]
    Validation(String),
    #[error(transparent)]
    Nn(#[from] NnError),
    #[error(transparent)]
    Label(#[from] LabelError),
    #[error(transparent)]
    Loss(#[from] LossError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("loss diverged at epoch {epoch}, image {image_id}: {loss}")]
    Diverged {
        epoch: usize,
        image_id: String,
        loss: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainConfig {
    pub warmup_epochs: usize,
    pub total_epochs: usize,
    pub lr: f64,
    pub momentum: f64,
    pub seed: u64,
    pub use_overlap_loss: bool,
    pub use_nrpn: bool,
    pub label: LabelConfig,
    pub loss: LossConfig,
    pub anchors: AnchorConfig,
    pub backbone_channels: Vec<usize>,
    pub head_channels: usize,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            warmup_epochs: 2,
            total_epochs: 20,
            lr: 0.01,
            momentum: 0.9,
            seed: 0,
            use_overlap_loss: false,
            use_nrpn: false,
            label: LabelConfig::default(),
            loss: LossConfig::default(),
            anchors: AnchorConfig::default(),
            backbone_channels: vec![8, 16, 16],
            head_channels: 16,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<(), TrainError> {
        if self.total_epochs == 0 || self.warmup_epochs >= self.total_epochs {
            return Err(TrainError::Validation(
                "warmup_epochs must be smaller than total_epochs".into(),
            ));
        }
        if !(self.lr > 0.0 && self.lr.is_finite()) {
            return Err(TrainError::Validation("lr must be positive".into()));
        }
        if !(0.0..1.0).contains(&self.momentum) {
            return Err(TrainError::Validation("momentum must lie in [0, 1)".into()));
        }
        if self.anchors.scales.is_empty()
            || self.anchors.ratios.is_empty()
            || self.anchors.scales.iter().any(|&s| s <= 0.0)
            || self.anchors.ratios.iter().any(|&r| r <= 0.0)
        {
            return Err(TrainError::Validation(
                "anchor scales/ratios must be non-empty and positive".into(),
            ));
        }
        self.label.validate()?;
        self.loss.validate()?;
        NetworkConfig::validate(&self.network_config(true))?;
        Ok(())
    }

    /// Table row name of the ablation these flags realize.
    pub fn model_name(&self) -> &'static str {
        match (self.use_nrpn, self.use_overlap_loss) {
            (false, false) => "RPN",
            (false, true) => "RPN+OV",
            (true, false) => "RPN+nRPN",
            (true, true) => "RPN+nRPN+OV",
        }
    }

    pub fn network_config(&self, with_reg: bool) -> NetworkConfig {
        NetworkConfig {
            in_channels: 1,
            backbone_channels: self.backbone_channels.clone(),
            head_channels: self.head_channels,
            num_anchors: self.anchors.per_cell(),
            with_reg,
        }
    }

    pub fn stride(&self) -> usize {
        1 << self.backbone_channels.len()
    }
}

/// The three model rows of the comparison table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Ablation {
    RpnOnly,
    RpnNrpn,
    RpnNrpnOverlap,
}

impl Ablation {
    pub const ALL: [Ablation; 3] = [Ablation::RpnOnly, Ablation::RpnNrpn, Ablation::RpnNrpnOverlap];

    pub fn flag_name(&self) -> &'static str {
        match self {
            Ablation::RpnOnly => "rpn-only",
            Ablation::RpnNrpn => "rpn+nrpn",
            Ablation::RpnNrpnOverlap => "rpn+nrpn+overlap-loss",
        }
    }

    pub fn model_name(&self) -> &'static str {
        match self {
            Ablation::RpnOnly => "RPN",
            Ablation::RpnNrpn => "RPN+nRPN",
            Ablation::RpnNrpnOverlap => "RPN+nRPN+OV",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|a| a.flag_name() == s)
    }

    pub fn apply(&self, cfg: &mut TrainConfig) {
        match self {
            Ablation::RpnOnly => {
                cfg.use_nrpn = false;
                cfg.use_overlap_loss = false;
            }
            Ablation::RpnNrpn => {
                cfg.use_nrpn = true;
                cfg.use_overlap_loss = false;
            }
            Ablation::RpnNrpnOverlap => {
                cfg.use_nrpn = true;
                cfg.use_overlap_loss = true;
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Warmup,
    Cotrain,
}

impl Phase {
    pub fn label(&self) -> &'static str {
        match self {
            Phase::Warmup => "warmup",
            Phase::Cotrain => "cotrain",
        }
    }
}

/// One training step's record, including the audit columns that let the
/// exchange protocol be re-verified from the log alone.
#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord {
    pub epoch: usize,
    pub step: usize,
    pub image_id: String,
    pub phase: Phase,
    pub rpn_loss: f64,
    /// Absent exactly when no false positives were exchanged this step.
    pub nrpn_loss: Option<f64>,
    pub fp_count: usize,
    pub hard_neg_count: usize,
    pub fp_min_score: Option<f64>,
    pub fp_max_iou: Option<f64>,
    pub hard_max_iou: Option<f64>,
    pub hard_fg_overlap: usize,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrainLog {
    pub steps: Vec<StepRecord>,
}

pub const TRAIN_LOG_HEADER: &str =
    "epoch,step,image_id,phase,rpn_loss,nrpn_loss,fp_count,hard_neg_count,fp_min_score,fp_max_iou,hard_max_iou,hard_fg_overlap";

fn opt_f64(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl TrainLog {
    pub fn to_csv(&self, prov: &crate::Provenance) -> String {
        let mut out = String::new();
        out.push_str(&prov.comment_line());
        out.push('\n');
        out.push_str(TRAIN_LOG_HEADER);
        out.push('\n');
        for s in &self.steps {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{},{}\n",
                s.epoch,
                s.step,
                s.image_id,
                s.phase.label(),
                s.rpn_loss,
                opt_f64(s.nrpn_loss),
                s.fp_count,
                s.hard_neg_count,
                opt_f64(s.fp_min_score),
                opt_f64(s.fp_max_iou),
                opt_f64(s.hard_max_iou),
                s.hard_fg_overlap,
            ));
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self, String> {
        let mut steps = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            if line.starts_with('#') || line == TRAIN_LOG_HEADER || line.trim().is_empty() {
                continue;
            }
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 12 {
                return Err(format!("line {}: expected 12 fields, got {}", ln + 1, f.len()));
            }
            let parse_opt = |s: &str| -> Result<Option<f64>, String> {
                if s.is_empty() {
                    Ok(None)
                } else {
                    s.parse().map(Some).map_err(|e| format!("line {}: {e}", ln + 1))
                }
            };
            steps.push(StepRecord {
                epoch: f[0].parse().map_err(|e| format!("line {}: {e}", ln + 1))?,
                step: f[1].parse().map_err(|e| format!("line {}: {e}", ln + 1))?,
                image_id: f[2].to_string(),
                phase: match f[3] {
                    "warmup" => Phase::Warmup,
                    "cotrain" => Phase::Cotrain,
                    other => return Err(format!("line {}: unknown phase {other}", ln + 1)),
                },
                rpn_loss: f[4].parse().map_err(|e| format!("line {}: {e}", ln + 1))?,
                nrpn_loss: parse_opt(f[5])?,
                fp_count: f[6].parse().map_err(|e| format!("line {}: {e}", ln + 1))?,
                hard_neg_count: f[7].parse().map_err(|e| format!("line {}: {e}", ln + 1))?,
                fp_min_score: parse_opt(f[8])?,
                fp_max_iou: parse_opt(f[9])?,
                hard_max_iou: parse_opt(f[10])?,
                hard_fg_overlap: f[11].parse().map_err(|e| format!("line {}: {e}", ln + 1))?,
            });
        }
        Ok(Self { steps })
    }

    pub fn epoch_mean_rpn_loss(&self, epoch: usize) -> Option<f64> {
        let losses: Vec<f64> = self
            .steps
            .iter()
            .filter(|s| s.epoch == epoch)
            .map(|s| s.rpn_loss)
            .collect();
        if losses.is_empty() {
            None
        } else {
            Some(losses.iter().sum::<f64>() / losses.len() as f64)
        }
    }
}

/// Result of re-checking the exchange protocol over a log.
#[derive(Debug, Clone)]
pub struct ExchangeAudit {
    pub cotrain_steps: usize,
    pub steps_with_fps: usize,
    pub steps_with_hard: usize,
    pub violations: Vec<String>,
}

impl ExchangeAudit {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Verifies, from the log alone, that every exchanged example satisfied its
/// definition at extraction time: false positives had score > fp_score and
/// max-IoU < neg_iou; injected hard negatives had max-IoU < neg_iou and never
/// overlapped the foreground set.
pub fn audit_exchange_log(log: &TrainLog, label: &LabelConfig) -> ExchangeAudit {
    let mut audit = ExchangeAudit {
        cotrain_steps: 0,
        steps_with_fps: 0,
        steps_with_hard: 0,
        violations: Vec::new(),
    };
    for s in &log.steps {
        if s.phase != Phase::Cotrain {
            continue;
        }
        audit.cotrain_steps += 1;
        if s.fp_count > 0 {
            audit.steps_with_fps += 1;
            match (s.fp_min_score, s.fp_max_iou) {
                (Some(min_score), Some(max_iou)) => {
                    if min_score <= label.fp_score {
                        audit.violations.push(format!(
                            "step {}: fp_min_score {min_score} <= {}",
                            s.step, label.fp_score
                        ));
                    }
                    if max_iou >= label.neg_iou {
                        audit.violations.push(format!(
                            "step {}: fp_max_iou {max_iou} >= {}",
                            s.step, label.neg_iou
                        ));
                    }
                }
                _ => audit
                    .violations
                    .push(format!("step {}: fp stats missing", s.step)),
            }
        } else if s.nrpn_loss.is_some() {
            audit.violations.push(format!(
                "step {}: nrpn_loss present without false positives",
                s.step
            ));
        }
        if s.hard_neg_count > 0 {
            audit.steps_with_hard += 1;
            match s.hard_max_iou {
                Some(max_iou) if max_iou < label.neg_iou => {}
                Some(max_iou) => audit.violations.push(format!(
                    "step {}: hard_max_iou {max_iou} >= {}",
                    s.step, label.neg_iou
                )),
                None => audit
                    .violations
                    .push(format!("step {}: hard stats missing", s.step)),
            }
        }
        if s.hard_fg_overlap != 0 {
            audit.violations.push(format!(
                "step {}: {} hard negatives overlapped foreground",
                s.step, s.hard_fg_overlap
            ));
        }
    }
    audit
}

#[derive(Debug)]
pub struct TrainOutput {
    pub rpn: Network,
    pub nrpn: Option<Network>,
    pub log: TrainLog,
}

struct AnchorCache {
    entries: Vec<((usize, usize), AnchorSet)>,
}

impl AnchorCache {
    fn get(
        &mut self,
        fh: usize,
        fw: usize,
        stride: usize,
        cfg: &AnchorConfig,
    ) -> Result<&AnchorSet, GeometryError> {
        if let Some(pos) = self.entries.iter().position(|(k, _)| *k == (fh, fw)) {
            return Ok(&self.entries[pos].1);
        }
        let set = cfg.build(fh, fw, stride)?;
        self.entries.push(((fh, fw), set));
        Ok(&self.entries.last().unwrap().1)
    }
}

/// Builds the classification/regression loss terms from a label set and
/// back-propagates their gradients into the network's grad buffers (no
/// optimizer step). `graded_iou` selects overlap-loss IoU weighting for
/// foreground terms; false gives plain BCE via the iou = 1 reduction.
fn loss_and_backward(
    net: &mut Network,
    out: &HeadOutput,
    cache: &ForwardCache,
    anchors: &AnchorSet,
    labels: &AnchorLabelSet,
    gts: &[crate::geometry::BoxXYXY],
    graded_iou: bool,
    with_reg: bool,
    loss_cfg: &LossConfig,
) -> Result<f64, TrainError> {
    let scores = flatten_scores(&out.scores)?;
    let num_anchors = net.cfg.num_anchors;
    let (_, fh, fw) = out.scores.dims3()?;

    let mut cls_terms = Vec::new();
    let mut cls_idx = Vec::new();
    let mut reg_pairs = Vec::new();
    let mut reg_idx = Vec::new();
    for (i, role) in labels.roles.iter().enumerate() {
        match role {
            AnchorRole::Foreground { gt, matched_iou } => {
                let iou_term = if graded_iou { *matched_iou } else { 1.0 };
                cls_terms.push(ClsTerm {
                    p: scores[i],
                    is_fg: true,
                    iou: iou_term,
                });
                cls_idx.push(i);
                if with_reg {
                    if let (Some(g), Some(reg_map)) = (gt, out.reg.as_ref()) {
                        let t_pred = RegressionTarget::from_array(reg_at(reg_map, i, num_anchors)?);
                        let t_star = encode_regression(&anchors.anchors[i], &gts[*g])?;
                        reg_pairs.push((t_pred, t_star));
                        reg_idx.push(i);
                    }
                }
            }
            AnchorRole::HardNegative | AnchorRole::EasyNegative => {
                cls_terms.push(ClsTerm {
                    p: scores[i],
                    is_fg: false,
                    iou: 1.0,
                });
                cls_idx.push(i);
            }
            AnchorRole::Ignore => {}
        }
    }
    if cls_terms.is_empty() {
        return Ok(0.0);
    }

    let tl = total_loss(&cls_terms, &reg_pairs, loss_cfg)?;

    let score_grads: Vec<(usize, f64)> = cls_idx.into_iter().zip(tl.cls_grads).collect();
    let d_scores = scatter_score_grads(&score_grads, num_anchors, fh, fw);
    let d_reg = if with_reg && out.reg.is_some() {
        let reg_grads: Vec<(usize, [f64; 4])> = reg_idx.into_iter().zip(tl.reg_grads).collect();
        Some(scatter_reg_grads(&reg_grads, num_anchors, fh, fw))
    } else {
        None
    };
    net.backward(cache, &d_scores, d_reg.as_ref())?;
    Ok(tl.value)
}

fn update_network(
    net: &mut Network,
    out: &HeadOutput,
    cache: &ForwardCache,
    anchors: &AnchorSet,
    labels: &AnchorLabelSet,
    gts: &[crate::geometry::BoxXYXY],
    graded_iou: bool,
    with_reg: bool,
    cfg: &TrainConfig,
) -> Result<f64, TrainError> {
    let value = loss_and_backward(
        net, out, cache, anchors, labels, gts, graded_iou, with_reg, &cfg.loss,
    )?;
    sgd_step(net, cfg.lr, cfg.momentum);
    Ok(value)
}

/// Central-difference check of the whole differentiable path — conv backbone,
/// head, sibling score/reg convs, sigmoid, total loss — on a reduced
/// two-conv network over a 16x16 toy image, against every parameter.
pub fn end_to_end_gradcheck(
    step: f64,
    tol: f64,
    seed: u64,
) -> Result<crate::losses::GradCheckReport, TrainError> {
    use rand::Rng;

    let cfg = TrainConfig {
        anchors: AnchorConfig {
            scales: vec![6.0, 10.0],
            ratios: vec![1.0],
        },
        backbone_channels: vec![4],
        head_channels: 4,
        label: LabelConfig {
            num_neg: 12,
            ..LabelConfig::default()
        },
        ..TrainConfig::default()
    };
    let net = Network::new(cfg.network_config(true), derive_seed(seed, &[0x6763]))?;
    let mut rng = rng_from(seed, &[0x6764]);
    let image = Tensor::from_vec(
        &[1, 16, 16],
        (0..256).map(|_| rng.gen_range(0.0..1.0)).collect(),
    )
    .expect("toy image");
    let gts = vec![
        crate::geometry::BoxXYXY::new(2.0, 2.0, 9.0, 9.0),
        crate::geometry::BoxXYXY::new(8.0, 6.0, 15.0, 13.0),
    ];
    let anchors = cfg.anchors.build(8, 8, 2)?;
    let labels = assign_rpn_base_labels(&anchors, &gts, &cfg.label, &mut rng)?;

    let f = |params: &[f64]| {
        let mut n = net.clone();
        n.set_param_vec(params).expect("param arity");
        let (out, fwd) = n.forward(&image).expect("toy forward");
        n.zero_grads();
        let value = loss_and_backward(
            &mut n, &out, &fwd, &anchors, &labels, &gts, false, true, &cfg.loss,
        )
        .expect("toy loss");
        (value, n.grad_vec())
    };
    let report = crate::losses::finite_diff_check(f, &[net.param_vec()], step, tol)?;
    Ok(report)
}

/// Runs the full curriculum over the dataset. Batch size is one image;
/// everything is a deterministic function of (dataset, config).
pub fn train(samples: &[SampleRecord], cfg: &TrainConfig) -> Result<TrainOutput, TrainError> {
    cfg.validate()?;
    if samples.is_empty() {
        return Err(TrainError::Validation("dataset is empty".into()));
    }

    let mut rpn = Network::new(
        cfg.network_config(true),
        derive_seed(cfg.seed, &[SALT_RPN_INIT]),
    )?;
    let mut nrpn = if cfg.use_nrpn {
        Some(Network::new(
            cfg.network_config(false),
            derive_seed(cfg.seed, &[SALT_NRPN_INIT]),
        )?)
    } else {
        None
    };
    let stride = cfg.stride();
    let mut anchor_cache = AnchorCache { entries: Vec::new() };
    let mut log = TrainLog::default();
    let mut step = 0usize;

    for epoch in 0..cfg.total_epochs {
        for (img_idx, sample) in samples.iter().enumerate() {
            let (_, h, w) = sample.image.dims3()?;
            let anchors = anchor_cache.get(h / stride, w / stride, stride, &cfg.anchors)?;
            let mut rng = rng_from(cfg.seed, &[SALT_STEP, epoch as u64, img_idx as u64]);
            let cotrain = cfg.use_nrpn && epoch >= cfg.warmup_epochs;

            let record = if !cotrain {
                let labels = assign_rpn_base_labels(anchors, &sample.gts, &cfg.label, &mut rng)?;
                let (out, fwd) = rpn.forward(&sample.image)?;
                let rpn_loss = update_network(
                    &mut rpn,
                    &out,
                    &fwd,
                    anchors,
                    &labels,
                    &sample.gts,
                    cfg.use_overlap_loss,
                    true,
                    cfg,
                )?;
                StepRecord {
                    epoch,
                    step,
                    image_id: sample.image_id.clone(),
                    phase: Phase::Warmup,
                    rpn_loss,
                    nrpn_loss: None,
                    fp_count: 0,
                    hard_neg_count: 0,
                    fp_min_score: None,
                    fp_max_iou: None,
                    hard_max_iou: None,
                    hard_fg_overlap: 0,
                }
            } else {
                // (1) proposal-network forward: current scores
                let (rpn_out, rpn_fwd) = rpn.forward(&sample.image)?;
                let rpn_scores = flatten_scores(&rpn_out.scores)?;
                let probe = AnchorLabelSet::probe(anchors, &sample.gts);

                // (2) false positives become the other network's positives
                let fp = find_false_positives(&probe, &rpn_scores, &cfg.label)?;
                let fp_min_score = fp
                    .iter()
                    .map(|&i| rpn_scores[i])
                    .fold(None::<f64>, |m, v| Some(m.map_or(v, |m| m.min(v))));
                let fp_max_iou = fp
                    .iter()
                    .map(|&i| probe.max_iou[i])
                    .fold(None::<f64>, |m, v| Some(m.map_or(v, |m| m.max(v))));

                // (3) hard-negative network: forward always (its scores drive
                // the exchange), update only when it has positives to learn
                let nrpn_net = nrpn.as_mut().expect("cotrain requires nrpn");
                let (nrpn_out, nrpn_fwd) = nrpn_net.forward(&sample.image)?;
                let nrpn_scores = flatten_scores(&nrpn_out.scores)?;
                let nrpn_loss = if fp.is_empty() {
                    None
                } else {
                    let nrpn_labels =
                        build_nrpn_labels(&fp, anchors, &sample.gts, &cfg.label, &mut rng)?;
                    Some(update_network(
                        nrpn_net,
                        &nrpn_out,
                        &nrpn_fwd,
                        anchors,
                        &nrpn_labels,
                        &sample.gts,
                        false,
                        false,
                        cfg,
                    )?)
                };

                // (4) top nRPN proposals, GT excluded, replace easy negatives
                let hard = select_hard_negatives(
                    &nrpn_scores,
                    anchors,
                    &sample.gts,
                    cfg.label.hard_neg_quota(),
                    &cfg.label,
                )?;

                // (5) proposal-network update with the mixed negative batch
                let (labels, used_hard) =
                    assign_rpn_cotrain_labels(anchors, &sample.gts, &hard, &cfg.label, &mut rng)?;
                let rpn_loss = update_network(
                    &mut rpn,
                    &rpn_out,
                    &rpn_fwd,
                    anchors,
                    &labels,
                    &sample.gts,
                    cfg.use_overlap_loss,
                    true,
                    cfg,
                )?;

                let hard_max_iou = used_hard
                    .iter()
                    .map(|&i| labels.max_iou[i])
                    .fold(None::<f64>, |m, v| Some(m.map_or(v, |m| m.max(v))));
                let hard_fg_overlap = used_hard
                    .iter()
                    .filter(|&&i| labels.roles[i].is_foreground())
                    .count();

                StepRecord {
                    epoch,
                    step,
                    image_id: sample.image_id.clone(),
                    phase: Phase::Cotrain,
                    rpn_loss,
                    nrpn_loss,
                    fp_count: fp.len(),
                    hard_neg_count: used_hard.len(),
                    fp_min_score,
                    fp_max_iou,
                    hard_max_iou,
                    hard_fg_overlap,
                }
            };

            let worst = record
                .rpn_loss
                .abs()
                .max(record.nrpn_loss.map_or(0.0, f64::abs));
            if !worst.is_finite() {
                return Err(TrainError::Diverged {
                    epoch,
                    image_id: sample.image_id.clone(),
                    loss: worst,
                });
            }
            log.steps.push(record);
            step += 1;
        }
    }

    Ok(TrainOutput { rpn, nrpn, log })
}

/// Scores every anchor, decodes (proposal network) or takes the anchor boxes
/// (hard-negative network), clips, suppresses, and returns the top n.
pub fn propose(
    net: &Network,
    anchor_cfg: &AnchorConfig,
    image: &Tensor,
    n: usize,
    nms_iou: f64,
) -> Result<ProposalSet, TrainError> {
    let out = net.infer(image)?;
    let (_, h, w) = image.dims3()?;
    let stride = net.cfg.stride();
    let anchors = anchor_cfg.build(h / stride, w / stride, stride)?;
    let scores = flatten_scores(&out.scores)?;

    let mut proposals = Vec::with_capacity(anchors.len());
    for (i, anchor) in anchors.anchors.iter().enumerate() {
        let bbox = match out.reg.as_ref() {
            Some(reg_map) => {
                let t = RegressionTarget::from_array(reg_at(reg_map, i, net.cfg.num_anchors)?);
                decode_regression(anchor, &t)
            }
            None => anchor.extent(),
        };
        proposals.push(Proposal {
            bbox: clip_box(&bbox, w as f64, h as f64),
            score: scores[i],
        });
    }
    Ok(nms(&ProposalSet::new(proposals), nms_iou, n))
}
