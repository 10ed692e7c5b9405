//! SGD with classical momentum: v <- momentum*v + grad; w <- w - lr*v.

use super::model::Network;

/// One buffer update; gradients are consumed (zeroed) by the caller.
pub fn sgd_update(params: &mut [f64], grads: &[f64], velocity: &mut [f64], lr: f64, momentum: f64) {
    for ((w, &g), v) in params.iter_mut().zip(grads).zip(velocity.iter_mut()) {
        *v = momentum * *v + g;
        *w -= lr * *v;
    }
}

/// Applies one SGD step to every parameter tensor of the network and zeroes
/// the gradients afterward.
pub fn sgd_step(net: &mut Network, lr: f64, momentum: f64) {
    for layer in net.layers_mut() {
        let (w, g, v) = (&mut layer.weights, &layer.grad_w, &mut layer.vel_w);
        sgd_update(w.data_mut(), g.data(), v.data_mut(), lr, momentum);
        let (b, g, v) = (&mut layer.bias, &layer.grad_b, &mut layer.vel_b);
        sgd_update(b.data_mut(), g.data(), v.data_mut(), lr, momentum);
    }
    net.zero_grads();
}
