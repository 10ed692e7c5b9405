//! Recall measurement: recall@IoU@k per object-size bucket, recall curves,
//! and average-recall summaries, emitted as machine-diffable CSV.

use serde::{Deserialize, Serialize};

use crate::data::SampleRecord;
use crate::geometry::{iou, BoxXYXY, ProposalSet};
use crate::Provenance;

/// Object-size partition by box area: S below 32^2, M in [32^2, 96^2),
/// L at or above 96^2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SizeBucket {
    S,
    M,
    L,
}

pub const SMALL_AREA: f64 = 32.0 * 32.0;
pub const LARGE_AREA: f64 = 96.0 * 96.0;

pub fn size_bucket(gt: &BoxXYXY) -> SizeBucket {
    let area = gt.area();
    if area < SMALL_AREA {
        SizeBucket::S
    } else if area < LARGE_AREA {
        SizeBucket::M
    } else {
        SizeBucket::L
    }
}

impl SizeBucket {
    pub fn label(&self) -> &'static str {
        match self {
            SizeBucket::S => "S",
            SizeBucket::M => "M",
            SizeBucket::L => "L",
        }
    }
}

/// How proposals match ground truth when counting recall.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatchRule {
    /// A proposal may cover several GTs (the standard proposal-recall
    /// convention).
    NonExclusive,
    /// Greedy one-to-one: each proposal, in score order, claims its
    /// highest-IoU unmatched GT.
    ExclusiveGreedy,
}

/// Per-GT hit flags for the top-k proposals at one IoU threshold.
pub fn match_recall(
    proposals: &ProposalSet,
    gts: &[BoxXYXY],
    iou_t: f64,
    k: usize,
    rule: MatchRule,
) -> (usize, Vec<bool>) {
    let top = proposals.top_k(k);
    let mut hit = vec![false; gts.len()];
    match rule {
        MatchRule::NonExclusive => {
            for (gi, gt) in gts.iter().enumerate() {
                hit[gi] = top.iter().any(|p| iou(&p.bbox, gt) >= iou_t);
            }
        }
        MatchRule::ExclusiveGreedy => {
            for p in top {
                let mut best: Option<(usize, f64)> = None;
                for (gi, gt) in gts.iter().enumerate() {
                    if hit[gi] {
                        continue;
                    }
                    let v = iou(&p.bbox, gt);
                    if v >= iou_t && best.map_or(true, |(_, bv)| v > bv) {
                        best = Some((gi, v));
                    }
                }
                if let Some((gi, _)) = best {
                    hit[gi] = true;
                }
            }
        }
    }
    let hits = hit.iter().filter(|&&h| h).count();
    (hits, hit)
}

/// One cell of the recall table.
#[derive(Debug, Clone, PartialEq)]
pub struct RecallEntry {
    pub k: usize,
    pub iou: f64,
    /// None is the "all" row.
    pub bucket: Option<SizeBucket>,
    pub hits: usize,
    pub total: usize,
    pub recall: f64,
}

#[derive(Debug, Clone)]
pub struct RecallReport {
    pub model: String,
    pub entries: Vec<RecallEntry>,
}

impl RecallReport {
    pub fn get(&self, k: usize, iou: f64, bucket: Option<SizeBucket>) -> Option<&RecallEntry> {
        self.entries
            .iter()
            .find(|e| e.k == k && e.iou == iou && e.bucket == bucket)
    }

    /// CSV with the exact header `model,k,iou,bucket,recall`.
    pub fn to_csv(&self, prov: &Provenance) -> String {
        let mut out = String::new();
        out.push_str(&prov.comment_line());
        out.push('\n');
        out.push_str("model,k,iou,bucket,recall\n");
        for e in &self.entries {
            let bucket = e.bucket.map_or("all", |b| b.label());
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                self.model, e.k, e.iou, bucket, e.recall
            ));
        }
        out
    }
}

#[derive(Debug, Clone, Copy)]
pub struct EvalOptions {
    pub ks: &'static [usize],
    pub ious: &'static [f64],
    pub rule: MatchRule,
}

pub const REPORT_KS: [usize; 3] = [50, 100, 300];
pub const REPORT_IOUS: [f64; 3] = [0.5, 0.7, 0.9];

impl Default for EvalOptions {
    fn default() -> Self {
        Self {
            ks: &REPORT_KS,
            ious: &REPORT_IOUS,
            rule: MatchRule::NonExclusive,
        }
    }
}

/// Builds the recall table by evaluating `proposer` once per image at the
/// largest k and slicing. Images with zero GT contribute nothing to any
/// denominator.
pub fn build_recall_report<F>(
    model: &str,
    proposer: F,
    samples: &[SampleRecord],
    opts: &EvalOptions,
) -> RecallReport
where
    F: Fn(&SampleRecord) -> ProposalSet,
{
    // hits[k][iou][bucket], totals[bucket]
    let nk = opts.ks.len();
    let ni = opts.ious.len();
    let mut hits = vec![vec![[0usize; 3]; ni]; nk];
    let mut totals = [0usize; 3];

    for sample in samples {
        if sample.gts.is_empty() {
            continue;
        }
        let buckets: Vec<SizeBucket> = sample.gts.iter().map(size_bucket).collect();
        for &b in &buckets {
            totals[b as usize] += 1;
        }
        let proposals = proposer(sample);
        for (ki, &k) in opts.ks.iter().enumerate() {
            for (ii, &iou_t) in opts.ious.iter().enumerate() {
                let (_, flags) = match_recall(&proposals, &sample.gts, iou_t, k, opts.rule);
                for (gi, &f) in flags.iter().enumerate() {
                    if f {
                        hits[ki][ii][buckets[gi] as usize] += 1;
                    }
                }
            }
        }
    }

    let mut entries = Vec::with_capacity(nk * ni * 4);
    for (ki, &k) in opts.ks.iter().enumerate() {
        for (ii, &iou_t) in opts.ious.iter().enumerate() {
            let cell = &hits[ki][ii];
            for bucket in [SizeBucket::S, SizeBucket::M, SizeBucket::L] {
                let (h, t) = (cell[bucket as usize], totals[bucket as usize]);
                entries.push(RecallEntry {
                    k,
                    iou: iou_t,
                    bucket: Some(bucket),
                    hits: h,
                    total: t,
                    recall: if t == 0 { 0.0 } else { h as f64 / t as f64 },
                });
            }
            let h: usize = cell.iter().sum();
            let t: usize = totals.iter().sum();
            entries.push(RecallEntry {
                k,
                iou: iou_t,
                bucket: None,
                hits: h,
                total: t,
                recall: if t == 0 { 0.0 } else { h as f64 / t as f64 },
            });
        }
    }
    RecallReport {
        model: model.to_string(),
        entries,
    }
}

/// Recall curves: recall vs proposal count at each report IoU, recall vs IoU
/// threshold at each report k, and average recall (mean over the IoU grid
/// 0.5:0.05:0.95) per k.
#[derive(Debug, Clone)]
pub struct CurveData {
    pub model: String,
    /// (iou, points (k, recall))
    pub recall_vs_k: Vec<(f64, Vec<(usize, f64)>)>,
    /// (k, points (iou, recall))
    pub recall_vs_iou: Vec<(usize, Vec<(f64, f64)>)>,
    /// (k, average recall)
    pub average_recall: Vec<(usize, f64)>,
}

pub const CURVE_K_GRID: [usize; 7] = [10, 25, 50, 100, 150, 200, 300];

pub fn ar_iou_grid() -> Vec<f64> {
    (0..10).map(|i| 0.5 + 0.05 * i as f64).collect()
}

pub fn build_curves<F>(model: &str, proposer: F, samples: &[SampleRecord]) -> CurveData
where
    F: Fn(&SampleRecord) -> ProposalSet,
{
    let iou_grid = ar_iou_grid();
    let rule = MatchRule::NonExclusive;

    // (k, iou) -> (hits, total) over all GTs
    let mut tally = std::collections::BTreeMap::<(usize, u64), (usize, usize)>::new();
    let key = |k: usize, t: f64| (k, t.to_bits());

    let propose_cache: Vec<(&SampleRecord, ProposalSet)> = samples
        .iter()
        .filter(|s| !s.gts.is_empty())
        .map(|s| (s, proposer(s)))
        .collect();

    let mut all_ks: Vec<usize> = CURVE_K_GRID.to_vec();
    all_ks.extend(REPORT_KS);
    all_ks.sort_unstable();
    all_ks.dedup();

    let mut all_ious: Vec<f64> = iou_grid.clone();
    all_ious.extend(REPORT_IOUS);
    all_ious.sort_by(f64::total_cmp);
    all_ious.dedup();

    for (sample, proposals) in &propose_cache {
        for &k in &all_ks {
            for &t in &all_ious {
                let (h, _) = match_recall(proposals, &sample.gts, t, k, rule);
                let e = tally.entry(key(k, t)).or_insert((0, 0));
                e.0 += h;
                e.1 += sample.gts.len();
            }
        }
    }
    let recall_at = |k: usize, t: f64| -> f64 {
        let (h, n) = tally[&key(k, t)];
        if n == 0 {
            0.0
        } else {
            h as f64 / n as f64
        }
    };

    let recall_vs_k = REPORT_IOUS
        .iter()
        .map(|&t| {
            (
                t,
                CURVE_K_GRID.iter().map(|&k| (k, recall_at(k, t))).collect(),
            )
        })
        .collect();
    let recall_vs_iou = REPORT_KS
        .iter()
        .map(|&k| {
            (
                k,
                iou_grid.iter().map(|&t| (t, recall_at(k, t))).collect(),
            )
        })
        .collect();
    let average_recall = REPORT_KS
        .iter()
        .map(|&k| {
            let mean = iou_grid.iter().map(|&t| recall_at(k, t)).sum::<f64>()
                / iou_grid.len() as f64;
            (k, mean)
        })
        .collect();

    CurveData {
        model: model.to_string(),
        recall_vs_k,
        recall_vs_iou,
        average_recall,
    }
}

impl CurveData {
    /// CSV with header `model,series,x,recall`.
    pub fn to_csv(&self, prov: &Provenance) -> String {
        let mut out = String::new();
        out.push_str(&prov.comment_line());
        out.push('\n');
        out.push_str("model,series,x,recall\n");
        for (iou_t, points) in &self.recall_vs_k {
            for (k, r) in points {
                out.push_str(&format!(
                    "{},recall_vs_k@iou={iou_t},{k},{r}\n",
                    self.model
                ));
            }
        }
        for (k, points) in &self.recall_vs_iou {
            for (t, r) in points {
                out.push_str(&format!("{},recall_vs_iou@k={k},{t},{r}\n", self.model));
            }
        }
        for (k, r) in &self.average_recall {
            out.push_str(&format!("{},ar,{k},{r}\n", self.model));
        }
        out
    }
}
