//! Golden functional model of one BPTT training step for LIF spiking networks.
//!
//! Everything here is plain, deterministic FP32 tensor math: leaky
//! integrate-and-fire dynamics with reset-by-(1-s), the surrogate-window
//! firing derivative, the spike/potential gradient recursions, and the
//! per-layer weight-gradient accumulation. The hardware-engine models and the
//! timing models elsewhere in the workspace are all checked against the
//! tensors recorded by [`golden::train_step`].

pub mod error;
pub mod golden;
pub mod lif;
pub mod network;
pub mod precision;
pub mod tensor;

pub use error::CoreError;
pub use lif::{fire, fire_derivative, LifParams};
pub use network::{LayerKind, LayerSpec, NetworkSpec};
pub use precision::Precision;
pub use tensor::{
    ActFrame, ActTensor, BitFrame, FrameShape, MaskKind, MaskTensor, RealFrame, RealTensor,
    SpikeTensor, TensorDims, Weights,
};
