//! Elementwise activations with their backward passes.

use super::tensor::Tensor;

pub fn relu_forward(x: &Tensor) -> Tensor {
    let mut out = x.clone();
    for v in out.data_mut() {
        if *v < 0.0 {
            *v = 0.0;
        }
    }
    out
}

/// Gradient through relu given the forward *output* (y > 0 iff x > 0).
pub fn relu_backward(grad_out: &Tensor, output: &Tensor) -> Tensor {
    let mut grad = grad_out.clone();
    for (g, &y) in grad.data_mut().iter_mut().zip(output.data()) {
        if y <= 0.0 {
            *g = 0.0;
        }
    }
    grad
}

// largest f64 strictly below 1
const ONE_BELOW: f64 = 1.0 - f64::EPSILON / 2.0;

fn sigmoid_scalar(x: f64) -> f64 {
    let p = if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    };
    // saturated inputs would round to exactly 0 or 1; keep the output strict
    p.clamp(f64::MIN_POSITIVE, ONE_BELOW)
}

pub fn sigmoid_forward(x: &Tensor) -> Tensor {
    let mut out = x.clone();
    for v in out.data_mut() {
        *v = sigmoid_scalar(*v);
    }
    out
}

/// Gradient through sigmoid given the forward output: dy * y * (1 - y).
pub fn sigmoid_backward(grad_out: &Tensor, output: &Tensor) -> Tensor {
    let mut grad = grad_out.clone();
    for (g, &y) in grad.data_mut().iter_mut().zip(output.data()) {
        *g *= y * (1.0 - y);
    }
    grad
}
