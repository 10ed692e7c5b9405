//! The proposal networks: a small strided conv backbone, a 3x3 sliding-window
//! head, and sibling 1x1 convs for objectness scores and (for the proposal
//! network only) box regression. The hard-negative network shares the
//! structure but has no regression branch and never shares weights.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::conv::{conv2d_backward, conv2d_forward};
use super::ops::{relu_backward, relu_forward, sigmoid_backward, sigmoid_forward};
use super::tensor::{NnError, Tensor};
use crate::rng::rng_from;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct NetworkConfig {
    pub in_channels: usize,
    /// One 3x3 stride-2 pad-1 conv (+ relu) per entry; total stride is
    /// 2^len(backbone_channels).
    pub backbone_channels: Vec<usize>,
    /// 3x3 stride-1 sliding-window conv (+ relu) feeding the sibling heads.
    pub head_channels: usize,
    /// Anchors per feature-map cell (scales x ratios).
    pub num_anchors: usize,
    /// Whether the regression branch exists (false for the hard-negative
    /// network, which scores anchors but never regresses boxes).
    pub with_reg: bool,
}

impl Default for NetworkConfig {
    fn default() -> Self {
        Self {
            in_channels: 1,
            backbone_channels: vec![8, 16, 16],
            head_channels: 16,
            num_anchors: 12,
            with_reg: true,
        }
    }
}

impl NetworkConfig {
    pub fn stride(&self) -> usize {
        1 << self.backbone_channels.len()
    }

    pub fn validate(&self) -> Result<(), NnError> {
        if self.in_channels == 0
            || self.head_channels == 0
            || self.num_anchors == 0
            || self.backbone_channels.is_empty()
            || self.backbone_channels.iter().any(|&c| c == 0)
        {
            return Err(NnError::Shape("network config has a zero dimension".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct ConvLayer {
    pub name: String,
    pub weights: Tensor,
    pub bias: Tensor,
    pub stride: usize,
    pub pad: usize,
    pub relu: bool,
    pub grad_w: Tensor,
    pub grad_b: Tensor,
    pub vel_w: Tensor,
    pub vel_b: Tensor,
}

impl ConvLayer {
    fn new(
        name: &str,
        in_c: usize,
        out_c: usize,
        k: usize,
        stride: usize,
        pad: usize,
        relu: bool,
        rng: &mut rand_chacha::ChaCha8Rng,
    ) -> Self {
        let fan_in = (in_c * k * k) as f64;
        let bound = (1.0 / fan_in).sqrt();
        let n = out_c * in_c * k * k;
        let data = (0..n).map(|_| rng.gen_range(-bound..bound)).collect();
        let weights = Tensor::from_vec(&[out_c, in_c, k, k], data).expect("init shape");
        Self {
            name: name.to_string(),
            grad_w: Tensor::zeros(weights.shape()),
            vel_w: Tensor::zeros(weights.shape()),
            weights,
            bias: Tensor::zeros(&[out_c]),
            grad_b: Tensor::zeros(&[out_c]),
            vel_b: Tensor::zeros(&[out_c]),
            stride,
            pad,
            relu,
        }
    }
}

/// Per-anchor network output for one image.
#[derive(Debug, Clone)]
pub struct HeadOutput {
    /// Objectness probabilities, shape (A, H, W); already through sigmoid.
    pub scores: Tensor,
    /// Regression offsets, shape (4A, H, W); None for score-only networks.
    pub reg: Option<Tensor>,
}

/// Activations saved by a forward pass for the matching backward pass.
#[derive(Debug)]
pub struct ForwardCache {
    /// Input to conv layer i (index 0 is the image); the last entry is the
    /// shared head feature map the sibling convs read.
    inputs: Vec<Tensor>,
    score_probs: Tensor,
}

#[derive(Debug, Clone)]
pub struct Network {
    pub cfg: NetworkConfig,
    backbone: Vec<ConvLayer>,
    head: ConvLayer,
    score: ConvLayer,
    reg: Option<ConvLayer>,
}

impl Network {
    /// Fresh network with fan-in-scaled uniform weights and zero biases,
    /// fully determined by (cfg, seed).
    pub fn new(cfg: NetworkConfig, seed: u64) -> Result<Self, NnError> {
        cfg.validate()?;
        let mut rng = rng_from(seed, &[0x6e65]);
        let mut backbone = Vec::new();
        let mut in_c = cfg.in_channels;
        for (i, &out_c) in cfg.backbone_channels.iter().enumerate() {
            backbone.push(ConvLayer::new(
                &format!("backbone{i}"),
                in_c,
                out_c,
                3,
                2,
                1,
                true,
                &mut rng,
            ));
            in_c = out_c;
        }
        let head = ConvLayer::new("head", in_c, cfg.head_channels, 3, 1, 1, true, &mut rng);
        let score = ConvLayer::new(
            "score",
            cfg.head_channels,
            cfg.num_anchors,
            1,
            1,
            0,
            false,
            &mut rng,
        );
        let reg = if cfg.with_reg {
            Some(ConvLayer::new(
                "reg",
                cfg.head_channels,
                4 * cfg.num_anchors,
                1,
                1,
                0,
                false,
                &mut rng,
            ))
        } else {
            None
        };
        Ok(Self {
            cfg,
            backbone,
            head,
            score,
            reg,
        })
    }

    fn check_image(&self, image: &Tensor) -> Result<(usize, usize), NnError> {
        let (c, h, w) = image.dims3()?;
        if c != self.cfg.in_channels {
            return Err(NnError::Shape(format!(
                "image has {c} channels, network expects {}",
                self.cfg.in_channels
            )));
        }
        let stride = self.cfg.stride();
        if h % stride != 0 || w % stride != 0 {
            return Err(NnError::Indivisible { h, w, stride });
        }
        Ok((h, w))
    }

    /// Forward pass keeping the activations needed for backward.
    pub fn forward(&self, image: &Tensor) -> Result<(HeadOutput, ForwardCache), NnError> {
        self.check_image(image)?;
        let mut inputs = vec![image.clone()];
        let mut x = image.clone();
        for layer in self.backbone.iter().chain([&self.head]) {
            let y = conv2d_forward(&x, &layer.weights, &layer.bias, layer.stride, layer.pad)?;
            x = if layer.relu { relu_forward(&y) } else { y };
            inputs.push(x.clone());
        }
        let feat = inputs.last().expect("head feature").clone();
        let logits = conv2d_forward(&feat, &self.score.weights, &self.score.bias, 1, 0)?;
        let probs = sigmoid_forward(&logits);
        let reg = match &self.reg {
            Some(layer) => Some(conv2d_forward(&feat, &layer.weights, &layer.bias, 1, 0)?),
            None => None,
        };
        Ok((
            HeadOutput {
                scores: probs.clone(),
                reg,
            },
            ForwardCache {
                inputs,
                score_probs: probs,
            },
        ))
    }

    /// Inference-only forward.
    pub fn infer(&self, image: &Tensor) -> Result<HeadOutput, NnError> {
        Ok(self.forward(image)?.0)
    }

    /// Accumulates parameter gradients from loss gradients w.r.t. the score
    /// probabilities and (optionally) the regression map.
    pub fn backward(
        &mut self,
        cache: &ForwardCache,
        d_scores: &Tensor,
        d_reg: Option<&Tensor>,
    ) -> Result<(), NnError> {
        let feat = cache.inputs.last().expect("head feature");

        // sigmoid then the score conv
        let d_logits = sigmoid_backward(d_scores, &cache.score_probs);
        let (mut d_feat, gw, gb) =
            conv2d_backward(&d_logits, feat, &self.score.weights, 1, 0)?;
        accumulate(&mut self.score.grad_w, &gw);
        accumulate(&mut self.score.grad_b, &gb);

        match (&mut self.reg, d_reg) {
            (Some(layer), Some(d)) => {
                let (d_feat_reg, gw, gb) = conv2d_backward(d, feat, &layer.weights, 1, 0)?;
                accumulate(&mut layer.grad_w, &gw);
                accumulate(&mut layer.grad_b, &gb);
                for (a, b) in d_feat.data_mut().iter_mut().zip(d_feat_reg.data()) {
                    *a += b;
                }
            }
            (None, Some(_)) => {
                return Err(NnError::Shape(
                    "regression gradient supplied to a score-only network".into(),
                ))
            }
            _ => {}
        }

        // head + backbone, in reverse; inputs[i] feeds conv i, whose post-relu
        // output is inputs[i+1]
        let mut d_out = d_feat;
        let layers: Vec<&mut ConvLayer> = self
            .backbone
            .iter_mut()
            .chain([&mut self.head])
            .collect();
        let n = layers.len();
        for (rev, layer) in layers.into_iter().rev().enumerate() {
            let i = n - 1 - rev;
            let d_conv = if layer.relu {
                relu_backward(&d_out, &cache.inputs[i + 1])
            } else {
                d_out.clone()
            };
            let (d_in, gw, gb) = conv2d_backward(
                &d_conv,
                &cache.inputs[i],
                &layer.weights,
                layer.stride,
                layer.pad,
            )?;
            accumulate(&mut layer.grad_w, &gw);
            accumulate(&mut layer.grad_b, &gb);
            d_out = d_in;
        }
        Ok(())
    }

    pub fn layers_mut(&mut self) -> Vec<&mut ConvLayer> {
        let mut v: Vec<&mut ConvLayer> = self.backbone.iter_mut().collect();
        v.push(&mut self.head);
        v.push(&mut self.score);
        if let Some(r) = &mut self.reg {
            v.push(r);
        }
        v
    }

    pub fn layers(&self) -> Vec<&ConvLayer> {
        let mut v: Vec<&ConvLayer> = self.backbone.iter().collect();
        v.push(&self.head);
        v.push(&self.score);
        if let Some(r) = &self.reg {
            v.push(r);
        }
        v
    }

    pub fn zero_grads(&mut self) {
        for layer in self.layers_mut() {
            layer.grad_w.fill(0.0);
            layer.grad_b.fill(0.0);
        }
    }

    /// All parameters flattened in layer order (weights then bias per layer).
    pub fn param_vec(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for layer in self.layers() {
            out.extend_from_slice(layer.weights.data());
            out.extend_from_slice(layer.bias.data());
        }
        out
    }

    /// Gradients flattened in the same order as `param_vec`.
    pub fn grad_vec(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for layer in self.layers() {
            out.extend_from_slice(layer.grad_w.data());
            out.extend_from_slice(layer.grad_b.data());
        }
        out
    }

    pub fn set_param_vec(&mut self, params: &[f64]) -> Result<(), NnError> {
        let want: usize = self
            .layers()
            .iter()
            .map(|l| l.weights.numel() + l.bias.numel())
            .sum();
        if params.len() != want {
            return Err(NnError::Shape(format!(
                "param vector has {} values, network wants {want}",
                params.len()
            )));
        }
        let mut off = 0;
        for layer in self.layers_mut() {
            let nw = layer.weights.numel();
            layer.weights.data_mut().copy_from_slice(&params[off..off + nw]);
            off += nw;
            let nb = layer.bias.numel();
            layer.bias.data_mut().copy_from_slice(&params[off..off + nb]);
            off += nb;
        }
        Ok(())
    }
}

fn accumulate(into: &mut Tensor, from: &Tensor) {
    for (a, b) in into.data_mut().iter_mut().zip(from.data()) {
        *a += b;
    }
}

/// Score map (A,H,W) -> per-anchor vector in anchor-set order (y, x, anchor).
pub fn flatten_scores(scores: &Tensor) -> Result<Vec<f64>, NnError> {
    let (a, h, w) = scores.dims3()?;
    let data = scores.data();
    let mut out = Vec::with_capacity(a * h * w);
    for y in 0..h {
        for x in 0..w {
            for ai in 0..a {
                out.push(data[(ai * h + y) * w + x]);
            }
        }
    }
    Ok(out)
}

/// Sparse per-anchor score gradients -> map layout (A,H,W).
pub fn scatter_score_grads(
    grads: &[(usize, f64)],
    num_anchors: usize,
    h: usize,
    w: usize,
) -> Tensor {
    let mut t = Tensor::zeros(&[num_anchors, h, w]);
    let data = t.data_mut();
    for &(anchor_idx, g) in grads {
        let ai = anchor_idx % num_anchors;
        let cell = anchor_idx / num_anchors;
        let (y, x) = (cell / w, cell % w);
        data[(ai * h + y) * w + x] += g;
    }
    t
}

/// Regression offsets (tx,ty,tw,th) of one anchor from a (4A,H,W) map.
pub fn reg_at(reg: &Tensor, anchor_idx: usize, num_anchors: usize) -> Result<[f64; 4], NnError> {
    let (c4, h, w) = reg.dims3()?;
    debug_assert_eq!(c4, 4 * num_anchors);
    let ai = anchor_idx % num_anchors;
    let cell = anchor_idx / num_anchors;
    let (y, x) = (cell / w, cell % w);
    let data = reg.data();
    let mut out = [0.0; 4];
    for (j, o) in out.iter_mut().enumerate() {
        *o = data[((4 * ai + j) * h + y) * w + x];
    }
    Ok(out)
}

/// Sparse per-anchor regression gradients -> map layout (4A,H,W).
pub fn scatter_reg_grads(
    grads: &[(usize, [f64; 4])],
    num_anchors: usize,
    h: usize,
    w: usize,
) -> Tensor {
    let mut t = Tensor::zeros(&[4 * num_anchors, h, w]);
    let data = t.data_mut();
    for &(anchor_idx, g) in grads {
        let ai = anchor_idx % num_anchors;
        let cell = anchor_idx / num_anchors;
        let (y, x) = (cell / w, cell % w);
        for (j, gj) in g.iter().enumerate() {
            data[((4 * ai + j) * h + y) * w + x] += gj;
        }
    }
    t
}
