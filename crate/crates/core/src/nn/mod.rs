//! Minimal differentiable network machinery: tensors, convolution,
//! activations, the twin proposal networks, and SGD.

pub mod checkpoint;
pub mod conv;
pub mod model;
pub mod ops;
pub mod sgd;
pub mod tensor;

pub use checkpoint::{load_checkpoint, save_checkpoint, Checkpoint};
pub use conv::{conv2d_backward, conv2d_forward};
pub use model::{
    flatten_scores, reg_at, scatter_reg_grads, scatter_score_grads, ForwardCache, HeadOutput,
    Network, NetworkConfig,
};
pub use ops::{relu_backward, relu_forward, sigmoid_backward, sigmoid_forward};
pub use sgd::{sgd_step, sgd_update};
pub use tensor::{NnError, Tensor};
