//! Box algebra, anchor generation, regression encoding/decoding, and NMS.
//!
//! All coordinates are continuous pixels; a box's area is `(x2-x1)*(y2-y1)`
//! with no +1 correction, applied uniformly everywhere so labeling and
//! evaluation stay self-consistent.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GeometryError {
    #[error("invalid box coordinates ({0}, {1}, {2}, {3})")]
    InvalidBox(f64, f64, f64, f64),
    #[error("ground-truth box has zero width or height")]
    DegenerateGt,
    #[error("anchor grid parameter must be positive: {0}")]
    NonPositiveParam(&'static str),
    #[error("scales and ratios must be non-empty")]
    EmptyGenerator,
}

/// Axis-aligned box with `x1 <= x2` and `y1 <= y2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoxXYXY {
    pub x1: f64,
    pub y1: f64,
    pub x2: f64,
    pub y2: f64,
}

impl BoxXYXY {
    /// Builds a box, normalizing corner order so the invariant holds.
    pub fn new(x1: f64, y1: f64, x2: f64, y2: f64) -> Self {
        Self {
            x1: x1.min(x2),
            y1: y1.min(y2),
            x2: x1.max(x2),
            y2: y1.max(y2),
        }
    }

    /// Strict constructor for validating external data: rejects reversed or
    /// non-finite coordinates instead of normalizing them.
    pub fn try_new(x1: f64, y1: f64, x2: f64, y2: f64) -> Result<Self, GeometryError> {
        let finite = x1.is_finite() && y1.is_finite() && x2.is_finite() && y2.is_finite();
        if !finite || x1 > x2 || y1 > y2 {
            return Err(GeometryError::InvalidBox(x1, y1, x2, y2));
        }
        Ok(Self { x1, y1, x2, y2 })
    }

    pub fn width(&self) -> f64 {
        self.x2 - self.x1
    }

    pub fn height(&self) -> f64 {
        self.y2 - self.y1
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    pub fn center(&self) -> (f64, f64) {
        ((self.x1 + self.x2) * 0.5, (self.y1 + self.y2) * 0.5)
    }
}

/// Intersection-over-union of two boxes. Returns 0 when the union area is 0;
/// a zero-area box always yields 0.
pub fn iou(a: &BoxXYXY, b: &BoxXYXY) -> f64 {
    let ix = (a.x2.min(b.x2) - a.x1.max(b.x1)).max(0.0);
    let iy = (a.y2.min(b.y2) - a.y1.max(b.y1)).max(0.0);
    let inter = ix * iy;
    let union = a.area() + b.area() - inter;
    if union <= 0.0 {
        return 0.0;
    }
    inter / union
}

/// Clamps a box into `[0, image_w] x [0, image_h]`.
pub fn clip_box(b: &BoxXYXY, image_w: f64, image_h: f64) -> BoxXYXY {
    BoxXYXY {
        x1: b.x1.clamp(0.0, image_w),
        y1: b.y1.clamp(0.0, image_h),
        x2: b.x2.clamp(0.0, image_w),
        y2: b.y2.clamp(0.0, image_h),
    }
}

/// A candidate box centered on a feature-map cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Anchor {
    pub center_x: f64,
    pub center_y: f64,
    pub width: f64,
    pub height: f64,
    /// Flat index of this anchor within its `AnchorSet`.
    pub grid_index: usize,
}

impl Anchor {
    pub fn extent(&self) -> BoxXYXY {
        BoxXYXY {
            x1: self.center_x - self.width * 0.5,
            y1: self.center_y - self.height * 0.5,
            x2: self.center_x + self.width * 0.5,
            y2: self.center_y + self.height * 0.5,
        }
    }
}

/// Dense anchor grid over a feature map, row-major over (y, x, scale, ratio).
#[derive(Debug, Clone)]
pub struct AnchorSet {
    pub anchors: Vec<Anchor>,
    pub feature_h: usize,
    pub feature_w: usize,
    pub stride: f64,
    pub scales: Vec<f64>,
    pub ratios: Vec<f64>,
}

impl AnchorSet {
    pub fn len(&self) -> usize {
        self.anchors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.anchors.is_empty()
    }

    /// Anchors per feature-map cell.
    pub fn per_cell(&self) -> usize {
        self.scales.len() * self.ratios.len()
    }
}

/// Generates the dense anchor grid. Anchor k for cell (i, j), scale s, ratio r
/// sits at center ((j+0.5)*stride, (i+0.5)*stride) with height s*sqrt(r) and
/// width s/sqrt(r), so area is s^2 and height/width is r.
pub fn generate_anchors(
    feature_h: usize,
    feature_w: usize,
    stride: f64,
    scales: &[f64],
    ratios: &[f64],
) -> Result<AnchorSet, GeometryError> {
    if feature_h == 0 {
        return Err(GeometryError::NonPositiveParam("feature_h"));
    }
    if feature_w == 0 {
        return Err(GeometryError::NonPositiveParam("feature_w"));
    }
    if stride <= 0.0 {
        return Err(GeometryError::NonPositiveParam("stride"));
    }
    if scales.is_empty() || ratios.is_empty() {
        return Err(GeometryError::EmptyGenerator);
    }
    if scales.iter().any(|&s| s <= 0.0) {
        return Err(GeometryError::NonPositiveParam("scales"));
    }
    if ratios.iter().any(|&r| r <= 0.0) {
        return Err(GeometryError::NonPositiveParam("ratios"));
    }

    let mut anchors = Vec::with_capacity(feature_h * feature_w * scales.len() * ratios.len());
    for i in 0..feature_h {
        for j in 0..feature_w {
            let cy = (i as f64 + 0.5) * stride;
            let cx = (j as f64 + 0.5) * stride;
            for &s in scales {
                for &r in ratios {
                    let sqrt_r = r.sqrt();
                    anchors.push(Anchor {
                        center_x: cx,
                        center_y: cy,
                        width: s / sqrt_r,
                        height: s * sqrt_r,
                        grid_index: anchors.len(),
                    });
                }
            }
        }
    }
    Ok(AnchorSet {
        anchors,
        feature_h,
        feature_w,
        stride,
        scales: scales.to_vec(),
        ratios: ratios.to_vec(),
    })
}

/// Anchor generator parameters; the grid dimensions and stride come from the
/// network the anchors are paired with.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AnchorConfig {
    pub scales: Vec<f64>,
    pub ratios: Vec<f64>,
}

impl Default for AnchorConfig {
    fn default() -> Self {
        Self {
            scales: vec![16.0, 32.0, 64.0, 96.0],
            ratios: vec![0.5, 1.0, 2.0],
        }
    }
}

impl AnchorConfig {
    pub fn per_cell(&self) -> usize {
        self.scales.len() * self.ratios.len()
    }

    pub fn build(&self, feature_h: usize, feature_w: usize, stride: usize) -> Result<AnchorSet, GeometryError> {
        generate_anchors(feature_h, feature_w, stride as f64, &self.scales, &self.ratios)
    }
}

/// Center/log-size offsets of a target box relative to an anchor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegressionTarget {
    pub tx: f64,
    pub ty: f64,
    pub tw: f64,
    pub th: f64,
}

impl RegressionTarget {
    pub const ZERO: Self = Self {
        tx: 0.0,
        ty: 0.0,
        tw: 0.0,
        th: 0.0,
    };

    pub fn as_array(&self) -> [f64; 4] {
        [self.tx, self.ty, self.tw, self.th]
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Self {
            tx: a[0],
            ty: a[1],
            tw: a[2],
            th: a[3],
        }
    }
}

/// Encodes a ground-truth box as offsets from an anchor:
/// tx = (gx-ax)/aw, ty = (gy-ay)/ah, tw = ln(gw/aw), th = ln(gh/ah).
pub fn encode_regression(anchor: &Anchor, gt: &BoxXYXY) -> Result<RegressionTarget, GeometryError> {
    let gw = gt.width();
    let gh = gt.height();
    if gw <= 0.0 || gh <= 0.0 {
        return Err(GeometryError::DegenerateGt);
    }
    let (gx, gy) = gt.center();
    Ok(RegressionTarget {
        tx: (gx - anchor.center_x) / anchor.width,
        ty: (gy - anchor.center_y) / anchor.height,
        tw: (gw / anchor.width).ln(),
        th: (gh / anchor.height).ln(),
    })
}

/// Inverse of `encode_regression`.
pub fn decode_regression(anchor: &Anchor, t: &RegressionTarget) -> BoxXYXY {
    let cx = anchor.center_x + t.tx * anchor.width;
    let cy = anchor.center_y + t.ty * anchor.height;
    let w = anchor.width * t.tw.exp();
    let h = anchor.height * t.th.exp();
    BoxXYXY::new(cx - w * 0.5, cy - h * 0.5, cx + w * 0.5, cy + h * 0.5)
}

/// A scored box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Proposal {
    pub bbox: BoxXYXY,
    pub score: f64,
}

/// Scored boxes ranked by descending objectness.
#[derive(Debug, Clone, Default)]
pub struct ProposalSet {
    pub proposals: Vec<Proposal>,
}

impl ProposalSet {
    pub fn new(proposals: Vec<Proposal>) -> Self {
        Self { proposals }
    }

    pub fn len(&self) -> usize {
        self.proposals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.proposals.is_empty()
    }

    /// The top-k slice (the set must already be score-sorted, as NMS output is).
    pub fn top_k(&self, k: usize) -> &[Proposal] {
        &self.proposals[..k.min(self.proposals.len())]
    }
}

/// Greedy non-maximum suppression.
///
/// Keeps boxes in descending score order (ties broken by lower original
/// index), dropping any remaining box whose IoU with a kept box exceeds
/// `iou_threshold`, and stops once `max_out` boxes are kept.
pub fn nms(proposals: &ProposalSet, iou_threshold: f64, max_out: usize) -> ProposalSet {
    let n = proposals.proposals.len();
    if n == 0 || max_out == 0 {
        return ProposalSet::default();
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        let sa = proposals.proposals[a].score;
        let sb = proposals.proposals[b].score;
        sb.partial_cmp(&sa)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });

    let mut suppressed = vec![false; n];
    let mut kept = Vec::new();
    for (pos, &idx) in order.iter().enumerate() {
        if suppressed[idx] {
            continue;
        }
        kept.push(proposals.proposals[idx]);
        if kept.len() == max_out {
            break;
        }
        let kept_box = proposals.proposals[idx].bbox;
        for &later in &order[pos + 1..] {
            if !suppressed[later] && iou(&kept_box, &proposals.proposals[later].bbox) > iou_threshold
            {
                suppressed[later] = true;
            }
        }
    }
    ProposalSet::new(kept)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn iou_identity() {
        let b = BoxXYXY::new(0.0, 0.0, 10.0, 10.0);
        assert_eq!(iou(&b, &b), 1.0);
    }

    #[test]
    fn iou_disjoint() {
        let a = BoxXYXY::new(0.0, 0.0, 10.0, 10.0);
        let b = BoxXYXY::new(20.0, 20.0, 30.0, 30.0);
        assert_eq!(iou(&a, &b), 0.0);
    }

    #[test]
    fn iou_partial_overlap() {
        // intersection 5x5 = 25, union 100 + 100 - 25 = 175
        let a = BoxXYXY::new(0.0, 0.0, 10.0, 10.0);
        let b = BoxXYXY::new(5.0, 5.0, 15.0, 15.0);
        assert!((iou(&a, &b) - 25.0 / 175.0).abs() < 1e-12);
    }

    #[test]
    fn iou_zero_area_box_is_zero() {
        let a = BoxXYXY::new(5.0, 5.0, 5.0, 5.0);
        let b = BoxXYXY::new(0.0, 0.0, 10.0, 10.0);
        assert_eq!(iou(&a, &b), 0.0);
        assert_eq!(iou(&a, &a), 0.0);
    }

    /// Rasterized pixel-count IoU for integer boxes; independent check of the
    /// analytic formula.
    fn raster_iou(a: &BoxXYXY, b: &BoxXYXY) -> f64 {
        let cells = |bx: &BoxXYXY| {
            let mut set = std::collections::HashSet::new();
            for y in bx.y1 as i64..bx.y2 as i64 {
                for x in bx.x1 as i64..bx.x2 as i64 {
                    set.insert((x, y));
                }
            }
            set
        };
        let ca = cells(a);
        let cb = cells(b);
        let inter = ca.intersection(&cb).count() as f64;
        let union = ca.union(&cb).count() as f64;
        if union == 0.0 {
            0.0
        } else {
            inter / union
        }
    }

    #[test]
    fn iou_matches_rasterization_on_integer_boxes() {
        let mut rng = crate::rng::rng_from(11, &[1]);
        for _ in 0..500 {
            let gen_box = |rng: &mut rand_chacha::ChaCha8Rng| {
                let x1 = rng.gen_range(0..40) as f64;
                let y1 = rng.gen_range(0..40) as f64;
                let w = rng.gen_range(1..25) as f64;
                let h = rng.gen_range(1..25) as f64;
                BoxXYXY::new(x1, y1, x1 + w, y1 + h)
            };
            let a = gen_box(&mut rng);
            let b = gen_box(&mut rng);
            assert_eq!(iou(&a, &b), raster_iou(&a, &b), "a={a:?} b={b:?}");
        }
    }

    #[test]
    fn anchors_single_cell() {
        let set = generate_anchors(1, 1, 16.0, &[32.0], &[1.0]).unwrap();
        assert_eq!(set.len(), 1);
        let a = set.anchors[0];
        assert_eq!((a.center_x, a.center_y), (8.0, 8.0));
        assert!((a.width - 32.0).abs() < 1e-12);
        assert!((a.height - 32.0).abs() < 1e-12);
    }

    #[test]
    fn anchors_count() {
        let set = generate_anchors(2, 2, 16.0, &[8.0, 16.0, 32.0], &[0.5, 1.0, 2.0]).unwrap();
        assert_eq!(set.len(), 36);
        for (k, a) in set.anchors.iter().enumerate() {
            assert_eq!(a.grid_index, k);
        }
    }

    #[test]
    fn anchors_scale_ratio_geometry() {
        let set = generate_anchors(1, 1, 16.0, &[16.0], &[2.0]).unwrap();
        let a = set.anchors[0];
        assert!(close(a.height, 16.0 * 2.0f64.sqrt(), 1e-6));
        assert!(close(a.width, 16.0 / 2.0f64.sqrt(), 1e-6));
        assert!(close(a.width * a.height, 256.0, 1e-6));
        assert!(close(a.height / a.width, 2.0, 1e-6));
    }

    #[test]
    fn anchors_reject_bad_params() {
        assert!(generate_anchors(1, 1, 0.0, &[32.0], &[1.0]).is_err());
        assert!(generate_anchors(1, 1, 16.0, &[], &[1.0]).is_err());
        assert!(generate_anchors(1, 1, 16.0, &[-1.0], &[1.0]).is_err());
        assert!(generate_anchors(1, 1, 16.0, &[32.0], &[0.0]).is_err());
        assert!(generate_anchors(0, 1, 16.0, &[32.0], &[1.0]).is_err());
    }

    #[test]
    fn anchors_deterministic_ordering() {
        let a = generate_anchors(3, 4, 8.0, &[16.0, 32.0], &[0.5, 1.0]).unwrap();
        let b = generate_anchors(3, 4, 8.0, &[16.0, 32.0], &[0.5, 1.0]).unwrap();
        assert_eq!(a.anchors, b.anchors);
        // row-major: second anchor of cell (0,0) differs only by ratio
        assert_eq!(a.anchors[0].center_x, a.anchors[1].center_x);
        // cell (0,1) starts after per_cell anchors
        assert_eq!(a.anchors[a.per_cell()].center_x, 12.0);
    }

    fn anchor_32_at_8() -> Anchor {
        Anchor {
            center_x: 8.0,
            center_y: 8.0,
            width: 32.0,
            height: 32.0,
            grid_index: 0,
        }
    }

    #[test]
    fn encode_identity_is_zero() {
        let a = anchor_32_at_8();
        let t = encode_regression(&a, &a.extent()).unwrap();
        assert_eq!(t, RegressionTarget::ZERO);
    }

    #[test]
    fn encode_double_size() {
        let a = anchor_32_at_8();
        let gt = BoxXYXY::new(8.0 - 32.0, 8.0 - 32.0, 8.0 + 32.0, 8.0 + 32.0);
        let t = encode_regression(&a, &gt).unwrap();
        assert!((t.tx).abs() < 1e-12 && (t.ty).abs() < 1e-12);
        assert!((t.tw - 2.0f64.ln()).abs() < 1e-12);
        assert!((t.th - 2.0f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn encode_rejects_degenerate_gt() {
        let a = anchor_32_at_8();
        let gt = BoxXYXY::new(1.0, 1.0, 1.0, 5.0);
        assert_eq!(encode_regression(&a, &gt), Err(GeometryError::DegenerateGt));
    }

    #[test]
    fn decode_zero_is_anchor_extent() {
        let a = anchor_32_at_8();
        assert_eq!(decode_regression(&a, &RegressionTarget::ZERO), a.extent());
    }

    #[test]
    fn decode_unit_tx_shifts_center_by_width() {
        let a = anchor_32_at_8();
        let t = RegressionTarget {
            tx: 1.0,
            ty: 0.0,
            tw: 0.0,
            th: 0.0,
        };
        let b = decode_regression(&a, &t);
        let (cx, cy) = b.center();
        assert!((cx - 40.0).abs() < 1e-12);
        assert!((cy - 8.0).abs() < 1e-12);
    }

    #[test]
    fn encode_decode_roundtrip_random() {
        let mut rng = crate::rng::rng_from(5, &[2]);
        for _ in 0..1000 {
            let anchor = Anchor {
                center_x: rng.gen_range(0.0..128.0),
                center_y: rng.gen_range(0.0..128.0),
                width: rng.gen_range(4.0..96.0),
                height: rng.gen_range(4.0..96.0),
                grid_index: 0,
            };
            let x1 = rng.gen_range(0.0..100.0);
            let y1 = rng.gen_range(0.0..100.0);
            let gt = BoxXYXY::new(x1, y1, x1 + rng.gen_range(1.0..60.0), y1 + rng.gen_range(1.0..60.0));
            let t = encode_regression(&anchor, &gt).unwrap();
            let back = decode_regression(&anchor, &t);
            for (got, want) in [
                (back.x1, gt.x1),
                (back.y1, gt.y1),
                (back.x2, gt.x2),
                (back.y2, gt.y2),
            ] {
                assert!(close(got, want, 1e-6), "{got} vs {want}");
            }
        }
    }

    #[test]
    fn clip_inside_unchanged() {
        let b = BoxXYXY::new(3.0, 4.0, 10.0, 12.0);
        assert_eq!(clip_box(&b, 128.0, 128.0), b);
    }

    #[test]
    fn clip_negative_corner() {
        let b = BoxXYXY::new(-5.0, -5.0, 10.0, 10.0);
        assert_eq!(clip_box(&b, 128.0, 128.0), BoxXYXY::new(0.0, 0.0, 10.0, 10.0));
    }

    #[test]
    fn clip_overflowing_corner() {
        let b = BoxXYXY::new(120.0, 120.0, 140.0, 140.0);
        assert_eq!(
            clip_box(&b, 128.0, 128.0),
            BoxXYXY::new(120.0, 120.0, 128.0, 128.0)
        );
    }

    #[test]
    fn nms_single_proposal() {
        let p = ProposalSet::new(vec![Proposal {
            bbox: BoxXYXY::new(0.0, 0.0, 4.0, 4.0),
            score: 0.5,
        }]);
        let out = nms(&p, 0.5, 10);
        assert_eq!(out.len(), 1);
        assert_eq!(out.proposals[0], p.proposals[0]);
    }

    #[test]
    fn nms_suppresses_duplicate() {
        let b = BoxXYXY::new(0.0, 0.0, 4.0, 4.0);
        let p = ProposalSet::new(vec![
            Proposal { bbox: b, score: 0.8 },
            Proposal { bbox: b, score: 0.9 },
        ]);
        let out = nms(&p, 0.5, 10);
        assert_eq!(out.len(), 1);
        assert_eq!(out.proposals[0].score, 0.9);
    }

    #[test]
    fn nms_empty_input() {
        assert!(nms(&ProposalSet::default(), 0.5, 10).is_empty());
    }

    /// Independent reference: re-scan the full kept list for every candidate.
    fn reference_nms(props: &[Proposal], thr: f64, max_out: usize) -> Vec<Proposal> {
        let mut order: Vec<usize> = (0..props.len()).collect();
        order.sort_by(|&a, &b| {
            props[b]
                .score
                .partial_cmp(&props[a].score)
                .unwrap()
                .then(a.cmp(&b))
        });
        let mut kept: Vec<Proposal> = Vec::new();
        for idx in order {
            if kept.len() >= max_out {
                break;
            }
            if kept.iter().all(|k| iou(&k.bbox, &props[idx].bbox) <= thr) {
                kept.push(props[idx]);
            }
        }
        kept
    }

    #[test]
    fn nms_matches_reference_on_random_instances() {
        let mut rng = crate::rng::rng_from(17, &[3]);
        for case in 0..100 {
            let props: Vec<Proposal> = (0..50)
                .map(|_| {
                    let x1 = rng.gen_range(0.0..90.0);
                    let y1 = rng.gen_range(0.0..90.0);
                    Proposal {
                        bbox: BoxXYXY::new(
                            x1,
                            y1,
                            x1 + rng.gen_range(2.0..40.0),
                            y1 + rng.gen_range(2.0..40.0),
                        ),
                        score: rng.gen_range(0.0..1.0),
                    }
                })
                .collect();
            let set = ProposalSet::new(props.clone());
            for (thr, max_out) in [(0.3, 50), (0.5, 50), (0.7, 10)] {
                let got = nms(&set, thr, max_out);
                let want = reference_nms(&props, thr, max_out);
                assert_eq!(got.proposals, want, "case {case} thr {thr}");
            }
        }
    }

    proptest! {
        #[test]
        fn prop_iou_symmetric_and_bounded(
            ax in 0.0..100.0f64, ay in 0.0..100.0f64, aw in 0.01..50.0f64, ah in 0.01..50.0f64,
            bx in 0.0..100.0f64, by in 0.0..100.0f64, bw in 0.01..50.0f64, bh in 0.01..50.0f64,
        ) {
            let a = BoxXYXY::new(ax, ay, ax + aw, ay + ah);
            let b = BoxXYXY::new(bx, by, bx + bw, by + bh);
            let ab = iou(&a, &b);
            let ba = iou(&b, &a);
            prop_assert_eq!(ab, ba);
            prop_assert!((0.0..=1.0).contains(&ab));
            prop_assert_eq!(iou(&a, &a), 1.0);
        }

        #[test]
        fn prop_nms_output_properties(
            seed in 0u64..500, thr in 0.1..0.9f64, max_out in 1usize..20,
        ) {
            let mut rng = crate::rng::rng_from(seed, &[4]);
            let props: Vec<Proposal> = (0..30)
                .map(|_| {
                    let x1 = rng.gen_range(0.0..60.0);
                    let y1 = rng.gen_range(0.0..60.0);
                    Proposal {
                        bbox: BoxXYXY::new(x1, y1, x1 + rng.gen_range(2.0..30.0), y1 + rng.gen_range(2.0..30.0)),
                        score: rng.gen_range(0.0..1.0),
                    }
                })
                .collect();
            let out = nms(&ProposalSet::new(props.clone()), thr, max_out);
            prop_assert!(out.len() <= max_out);
            // subset of input
            for kept in &out.proposals {
                prop_assert!(props.iter().any(|p| p == kept));
            }
            // no two kept boxes overlap past the threshold
            for i in 0..out.len() {
                for j in i + 1..out.len() {
                    prop_assert!(iou(&out.proposals[i].bbox, &out.proposals[j].bbox) <= thr);
                }
            }
            // sorted by descending score
            for w in out.proposals.windows(2) {
                prop_assert!(w[0].score >= w[1].score);
            }
        }
    }
}
