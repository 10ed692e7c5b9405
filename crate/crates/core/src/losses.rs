//! Classification and regression losses with analytic gradients.
//!
//! The overlap loss credits a foreground anchor's score relative to its IoU
//! with ground truth instead of relative to 1: the ratio p/iou replaces p in
//! the log term, clamped so scores at or above the anchor's IoU sit on a
//! zero-loss plateau. With iou = 1 it reduces exactly to binary cross-entropy,
//! which is how the BCE ablations are wired.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::RegressionTarget;

/// Relative-error floor: differences below this magnitude are compared
/// absolutely in gradient checks.
const REL_FLOOR: f64 = 1e-6;

#[derive(Debug, Error, PartialEq)]
pub enum LossError {
    #[error("score must lie in [0, 1], got {0}")]
    ScoreOutOfRange(f64),
    #[error("foreground iou must lie in (0, 1], got {0}")]
    IouOutOfRange(f64),
    #[error("total loss requires at least one classification term")]
    EmptyClsTerms,
    #[error("finite-difference step must lie in (1e-7, 1e-3), got {0}")]
    StepOutOfRange(f64),
    #[error("invalid loss config: {0}")]
    BadConfig(&'static str),
}

/// How a normalizer in the total loss is computed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormalizerMode {
    /// Divide by the number of terms (regression count is floored at 1).
    Count,
    /// Divide by a fixed constant.
    Constant(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LossConfig {
    /// Balance weight on the regression term (lambda).
    pub lambda_balance: f64,
    /// Log-argument clamp floor; keeps every loss value finite.
    pub eps_clamp: f64,
    /// Use the literal published negative branch (-ln p) instead of the
    /// corrected -ln(1-p). Kept for comparison; rewards confident false
    /// positives, so it is off by default.
    pub literal_negative: bool,
    pub n_cls_mode: NormalizerMode,
    pub n_reg_mode: NormalizerMode,
}

impl Default for LossConfig {
    fn default() -> Self {
        Self {
            lambda_balance: 1.0,
            eps_clamp: 1e-7,
            literal_negative: false,
            n_cls_mode: NormalizerMode::Count,
            n_reg_mode: NormalizerMode::Count,
        }
    }
}

impl LossConfig {
    pub fn validate(&self) -> Result<(), LossError> {
        if !(self.lambda_balance >= 0.0 && self.lambda_balance.is_finite()) {
            return Err(LossError::BadConfig("lambda_balance must be >= 0"));
        }
        if !(self.eps_clamp > 0.0 && self.eps_clamp < 0.5) {
            return Err(LossError::BadConfig("eps_clamp must lie in (0, 0.5)"));
        }
        Ok(())
    }
}

/// A loss value and its gradient with respect to each scalar input.
#[derive(Debug, Clone, PartialEq)]
pub struct LossValue {
    pub value: f64,
    pub grad: Vec<f64>,
}

impl LossValue {
    /// Gradient of a single-input loss.
    pub fn grad1(&self) -> f64 {
        self.grad[0]
    }
}

fn check_score(p: f64) -> Result<(), LossError> {
    if !(p.is_finite() && (0.0..=1.0).contains(&p)) {
        return Err(LossError::ScoreOutOfRange(p));
    }
    Ok(())
}

/// Overlap loss for one anchor.
///
/// Foreground (`is_fg`): value = -ln(clamp(p/iou)) with the ratio clamped to
/// [eps, 1]; scores at or above the IoU get zero loss and zero gradient.
/// Background: value = -ln(clamp(1-p)) (corrected form; see
/// `LossConfig::literal_negative`).
pub fn overlap_loss(p: f64, is_fg: bool, iou: f64, cfg: &LossConfig) -> Result<LossValue, LossError> {
    check_score(p)?;
    cfg.validate()?;
    let eps = cfg.eps_clamp;
    let (value, grad) = if is_fg {
        if !(iou.is_finite() && iou > 0.0 && iou <= 1.0) {
            return Err(LossError::IouOutOfRange(iou));
        }
        let q = p / iou;
        if q >= 1.0 {
            (0.0, 0.0)
        } else if q <= eps {
            (-eps.ln(), 0.0)
        } else {
            (-q.ln(), -1.0 / (q * iou))
        }
    } else {
        let q = if cfg.literal_negative { p } else { 1.0 - p };
        if q <= eps {
            (-eps.ln(), 0.0)
        } else {
            let dq_dp = if cfg.literal_negative { 1.0 } else { -1.0 };
            (-q.ln(), dq_dp * (-1.0 / q))
        }
    };
    Ok(LossValue {
        value,
        grad: vec![grad],
    })
}

/// Binary cross-entropy with the same clamp policy as `overlap_loss`.
pub fn bce_loss(p: f64, is_fg: bool, cfg: &LossConfig) -> Result<LossValue, LossError> {
    check_score(p)?;
    cfg.validate()?;
    let eps = cfg.eps_clamp;
    let q = if is_fg { p } else { 1.0 - p };
    let (value, grad) = if q <= eps {
        (-eps.ln(), 0.0)
    } else {
        let dq_dp = if is_fg { 1.0 } else { -1.0 };
        (-q.ln(), dq_dp * (-1.0 / q))
    };
    Ok(LossValue {
        value,
        grad: vec![grad],
    })
}

/// Smooth-L1 over the four regression components: 0.5*d^2 for |d| < 1,
/// |d| - 0.5 otherwise. Gradient is d or sign(d) per component.
pub fn smooth_l1(t: &RegressionTarget, t_star: &RegressionTarget) -> LossValue {
    let mut value = 0.0;
    let mut grad = Vec::with_capacity(4);
    for (a, b) in t.as_array().iter().zip(t_star.as_array()) {
        let d = a - b;
        if d.abs() < 1.0 {
            value += 0.5 * d * d;
            grad.push(d);
        } else {
            value += d.abs() - 0.5;
            grad.push(d.signum());
        }
    }
    LossValue { value, grad }
}

/// One classification term of the total loss.
#[derive(Debug, Clone, Copy)]
pub struct ClsTerm {
    pub p: f64,
    pub is_fg: bool,
    /// Matched IoU for foreground anchors; feed 1.0 to get plain BCE.
    pub iou: f64,
}

/// Total loss value with per-term gradients, already scaled by the
/// normalizers and lambda.
#[derive(Debug, Clone)]
pub struct TotalLossValue {
    pub value: f64,
    pub cls_grads: Vec<f64>,
    pub reg_grads: Vec<[f64; 4]>,
}

/// Total loss: (1/N_cls) * sum of overlap losses + lambda * (1/N_reg) * sum
/// of smooth-L1 terms.
pub fn total_loss(
    cls_terms: &[ClsTerm],
    reg_terms: &[(RegressionTarget, RegressionTarget)],
    cfg: &LossConfig,
) -> Result<TotalLossValue, LossError> {
    if cls_terms.is_empty() {
        return Err(LossError::EmptyClsTerms);
    }
    cfg.validate()?;
    let n_cls = match cfg.n_cls_mode {
        NormalizerMode::Count => cls_terms.len() as f64,
        NormalizerMode::Constant(c) if c > 0.0 => c,
        NormalizerMode::Constant(_) => return Err(LossError::BadConfig("n_cls constant must be > 0")),
    };
    let n_reg = match cfg.n_reg_mode {
        NormalizerMode::Count => reg_terms.len().max(1) as f64,
        NormalizerMode::Constant(c) if c > 0.0 => c,
        NormalizerMode::Constant(_) => return Err(LossError::BadConfig("n_reg constant must be > 0")),
    };

    let mut cls_sum = 0.0;
    let mut cls_grads = Vec::with_capacity(cls_terms.len());
    for term in cls_terms {
        let lv = overlap_loss(term.p, term.is_fg, term.iou, cfg)?;
        cls_sum += lv.value;
        cls_grads.push(lv.grad1() / n_cls);
    }

    let reg_weight = cfg.lambda_balance / n_reg;
    let mut reg_sum = 0.0;
    let mut reg_grads = Vec::with_capacity(reg_terms.len());
    for (t, t_star) in reg_terms {
        let lv = smooth_l1(t, t_star);
        reg_sum += lv.value;
        reg_grads.push([
            lv.grad[0] * reg_weight,
            lv.grad[1] * reg_weight,
            lv.grad[2] * reg_weight,
            lv.grad[3] * reg_weight,
        ]);
    }

    Ok(TotalLossValue {
        value: cls_sum / n_cls + cfg.lambda_balance * reg_sum / n_reg,
        cls_grads,
        reg_grads,
    })
}

/// Where a gradient check went worst.
#[derive(Debug, Clone)]
pub struct GradCheckWorst {
    pub point_index: usize,
    pub coord: usize,
    pub analytic: f64,
    pub numeric: f64,
}

#[derive(Debug, Clone)]
pub struct GradCheckReport {
    pub points_checked: usize,
    pub coords_checked: usize,
    pub max_rel_err: f64,
    pub tol: f64,
    pub worst: Option<GradCheckWorst>,
}

impl GradCheckReport {
    pub fn pass(&self) -> bool {
        self.max_rel_err < self.tol
    }
}

fn rel_err(a: f64, n: f64) -> f64 {
    (a - n).abs() / a.abs().max(n.abs()).max(REL_FLOOR)
}

/// Central-difference gradient check of `f: inputs -> (value, grad)` at the
/// given sample points.
///
/// Callers must keep points away from clamp boundaries and the smooth-L1 kink
/// by a margin of at least 10 * step, since the analytic gradient is not
/// continuous there.
pub fn finite_diff_check<F>(
    f: F,
    points: &[Vec<f64>],
    step: f64,
    tol: f64,
) -> Result<GradCheckReport, LossError>
where
    F: Fn(&[f64]) -> (f64, Vec<f64>),
{
    if !(step > 1e-7 && step < 1e-3) {
        return Err(LossError::StepOutOfRange(step));
    }
    let mut report = GradCheckReport {
        points_checked: 0,
        coords_checked: 0,
        max_rel_err: 0.0,
        tol,
        worst: None,
    };
    for (pi, point) in points.iter().enumerate() {
        let (_, analytic) = f(point);
        assert_eq!(analytic.len(), point.len(), "gradient arity mismatch");
        let mut shifted = point.clone();
        for (ci, &a) in analytic.iter().enumerate() {
            shifted[ci] = point[ci] + step;
            let f_plus = f(&shifted).0;
            shifted[ci] = point[ci] - step;
            let f_minus = f(&shifted).0;
            shifted[ci] = point[ci];
            let numeric = (f_plus - f_minus) / (2.0 * step);
            let err = rel_err(a, numeric);
            if err > report.max_rel_err {
                report.max_rel_err = err;
                report.worst = Some(GradCheckWorst {
                    point_index: pi,
                    coord: ci,
                    analytic: a,
                    numeric,
                });
            }
            report.coords_checked += 1;
        }
        report.points_checked += 1;
    }
    Ok(report)
}
