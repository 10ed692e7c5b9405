//! 2-D convolution (cross-correlation) with zero padding, forward and
//! backward, in plain loops. Loop order is fixed so accumulation order — and
//! therefore the floating-point result — is identical on every run.

use super::tensor::{NnError, Tensor};

fn out_dim(input: usize, kernel: usize, stride: usize, pad: usize) -> Result<usize, NnError> {
    let padded = input + 2 * pad;
    if padded < kernel {
        return Err(NnError::Shape(format!(
            "kernel {kernel} larger than padded input {padded}"
        )));
    }
    Ok((padded - kernel) / stride + 1)
}

/// Valid output range for one kernel tap: all `o` with
/// `0 <= o*stride + k - pad < input`.
fn tap_range(input: usize, out: usize, stride: usize, pad: usize, k: usize) -> (usize, usize) {
    let s = stride as i64;
    let off = k as i64 - pad as i64;
    let lo = if off < 0 { (-off + s - 1) / s } else { 0 };
    let hi = ((input as i64 - 1 - off) / s + 1).clamp(0, out as i64);
    if lo >= hi {
        (0, 0)
    } else {
        (lo as usize, hi as usize)
    }
}

fn check_shapes(
    input: &Tensor,
    weights: &Tensor,
    bias: Option<&Tensor>,
) -> Result<(usize, usize, usize, usize, usize, usize), NnError> {
    let (c_in, h, w) = input.dims3()?;
    let (k, wc, kh, kw) = weights.dims4()?;
    if wc != c_in {
        return Err(NnError::Shape(format!(
            "weights expect {wc} input channels, input has {c_in}"
        )));
    }
    if let Some(b) = bias {
        if b.numel() != k {
            return Err(NnError::Shape(format!(
                "bias has {} elements for {k} output channels",
                b.numel()
            )));
        }
    }
    Ok((c_in, h, w, k, kh, kw))
}

/// input (C,H,W) * weights (K,C,kh,kw) + bias (K) -> (K,OH,OW).
pub fn conv2d_forward(
    input: &Tensor,
    weights: &Tensor,
    bias: &Tensor,
    stride: usize,
    pad: usize,
) -> Result<Tensor, NnError> {
    if stride == 0 {
        return Err(NnError::Shape("stride must be >= 1".into()));
    }
    let (c_in, h, w, k, kh, kw) = check_shapes(input, weights, Some(bias))?;
    let oh = out_dim(h, kh, stride, pad)?;
    let ow = out_dim(w, kw, stride, pad)?;

    let mut out = Tensor::zeros(&[k, oh, ow]);
    let in_data = input.data();
    let w_data = weights.data();
    let out_data = out.data_mut();

    for ko in 0..k {
        let out_base = ko * oh * ow;
        for c in 0..c_in {
            let in_base = c * h * w;
            let w_base = (ko * c_in + c) * kh * kw;
            for ky in 0..kh {
                let (oy_lo, oy_hi) = tap_range(h, oh, stride, pad, ky);
                for kx in 0..kw {
                    let wv = w_data[w_base + ky * kw + kx];
                    let (ox_lo, ox_hi) = tap_range(w, ow, stride, pad, kx);
                    for oy in oy_lo..oy_hi {
                        let iy = oy * stride + ky - pad;
                        let in_row = in_base + iy * w;
                        let out_row = out_base + oy * ow;
                        for ox in ox_lo..ox_hi {
                            let ix = ox * stride + kx - pad;
                            out_data[out_row + ox] += wv * in_data[in_row + ix];
                        }
                    }
                }
            }
        }
        let b = bias.data()[ko];
        for v in &mut out_data[out_base..out_base + oh * ow] {
            *v += b;
        }
    }
    Ok(out)
}

/// Gradients of a forward call: returns (grad_input, grad_weights, grad_bias).
pub fn conv2d_backward(
    grad_out: &Tensor,
    saved_input: &Tensor,
    weights: &Tensor,
    stride: usize,
    pad: usize,
) -> Result<(Tensor, Tensor, Tensor), NnError> {
    if stride == 0 {
        return Err(NnError::Shape("stride must be >= 1".into()));
    }
    let (c_in, h, w, k, kh, kw) = check_shapes(saved_input, weights, None)?;
    let (gk, oh, ow) = grad_out.dims3()?;
    if gk != k || oh != out_dim(h, kh, stride, pad)? || ow != out_dim(w, kw, stride, pad)? {
        return Err(NnError::Shape(format!(
            "grad_out shape {:?} inconsistent with forward call",
            grad_out.shape()
        )));
    }

    let mut grad_in = Tensor::zeros(&[c_in, h, w]);
    let mut grad_w = Tensor::zeros(&[k, c_in, kh, kw]);
    let mut grad_b = Tensor::zeros(&[k]);

    let in_data = saved_input.data();
    let w_data = weights.data();
    let go_data = grad_out.data();
    let gin = grad_in.data_mut();
    let gw_data = grad_w.data_mut();
    let gb_data = grad_b.data_mut();

    for ko in 0..k {
        let go_base = ko * oh * ow;
        let mut b_acc = 0.0;
        for v in &go_data[go_base..go_base + oh * ow] {
            b_acc += v;
        }
        gb_data[ko] = b_acc;

        for c in 0..c_in {
            let in_base = c * h * w;
            let w_base = (ko * c_in + c) * kh * kw;
            for ky in 0..kh {
                let (oy_lo, oy_hi) = tap_range(h, oh, stride, pad, ky);
                for kx in 0..kw {
                    let wv = w_data[w_base + ky * kw + kx];
                    let (ox_lo, ox_hi) = tap_range(w, ow, stride, pad, kx);
                    let mut w_acc = 0.0;
                    for oy in oy_lo..oy_hi {
                        let iy = oy * stride + ky - pad;
                        let in_row = in_base + iy * w;
                        let go_row = go_base + oy * ow;
                        for ox in ox_lo..ox_hi {
                            let ix = ox * stride + kx - pad;
                            let g = go_data[go_row + ox];
                            w_acc += g * in_data[in_row + ix];
                            gin[in_row + ix] += g * wv;
                        }
                    }
                    gw_data[w_base + ky * kw + kx] = w_acc;
                }
            }
        }
    }
    Ok((grad_in, grad_w, grad_b))
}
