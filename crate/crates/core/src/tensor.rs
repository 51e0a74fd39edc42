//! Tensor containers: bit-packed binary activations/masks and dense FP32
//! values, both over the `(sample, timestep, channel, row, col)` index space,
//! plus the per-(sample, timestep) frame types that the layer operations
//! work on.

use serde::{Deserialize, Serialize};

use crate::error::CoreError;

/// Shape of one layer slice at a fixed (sample, timestep): channels x rows x cols.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameShape {
    pub c: usize,
    pub h: usize,
    pub w: usize,
}

impl FrameShape {
    pub fn new(c: usize, h: usize, w: usize) -> Self {
        FrameShape { c, h, w }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.c * self.h * self.w
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn idx(&self, c: usize, y: usize, x: usize) -> usize {
        debug_assert!(c < self.c && y < self.h && x < self.w);
        (c * self.h + y) * self.w + x
    }
}

impl std::fmt::Display for FrameShape {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}x{}x{}", self.c, self.h, self.w)
    }
}

/// Full tensor dimensions: samples x timesteps x frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TensorDims {
    pub n: usize,
    pub t: usize,
    pub frame: FrameShape,
}

impl TensorDims {
    pub fn new(n: usize, t: usize, frame: FrameShape) -> Self {
        TensorDims { n, t, frame }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n * self.t * self.frame.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn frame_offset(&self, n: usize, t: usize) -> usize {
        debug_assert!(n < self.n && t < self.t);
        (n * self.t + t) * self.frame.len()
    }
}

const WORD_BITS: usize = 64;

#[inline]
fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD_BITS)
}

/// One channels x rows x cols slice of binary data, bit-packed LSB-first into
/// 64-bit words in row-major (c, y, x) order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitFrame {
    pub shape: FrameShape,
    words: Vec<u64>,
}

impl BitFrame {
    pub fn zeros(shape: FrameShape) -> Self {
        BitFrame {
            shape,
            words: vec![0; words_for(shape.len())],
        }
    }

    #[inline]
    pub fn get(&self, c: usize, y: usize, x: usize) -> bool {
        self.get_linear(self.shape.idx(c, y, x))
    }

    #[inline]
    pub fn get_linear(&self, i: usize) -> bool {
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, c: usize, y: usize, x: usize, v: bool) {
        self.set_linear(self.shape.idx(c, y, x), v);
    }

    #[inline]
    pub fn set_linear(&mut self, i: usize, v: bool) {
        let (w, b) = (i / WORD_BITS, i % WORD_BITS);
        if v {
            self.words[w] |= 1 << b;
        } else {
            self.words[w] &= !(1 << b);
        }
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Value of a (possibly out-of-range) coordinate; absent bits read as 0,
    /// consistent with zero padding.
    #[inline]
    pub fn get_clipped(&self, c: usize, y: isize, x: isize) -> bool {
        if y < 0 || x < 0 || y as usize >= self.shape.h || x as usize >= self.shape.w {
            false
        } else {
            self.get(c, y as usize, x as usize)
        }
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }
}

/// One channels x rows x cols slice of dense FP32 data.
#[derive(Debug, Clone, PartialEq)]
pub struct RealFrame {
    pub shape: FrameShape,
    pub data: Vec<f32>,
}

impl RealFrame {
    pub fn zeros(shape: FrameShape) -> Self {
        RealFrame {
            shape,
            data: vec![0.0; shape.len()],
        }
    }

    pub fn from_data(shape: FrameShape, data: Vec<f32>) -> Result<Self, CoreError> {
        if data.len() != shape.len() {
            return Err(CoreError::shape("RealFrame", shape.len(), data.len()));
        }
        Ok(RealFrame { shape, data })
    }

    #[inline]
    pub fn get(&self, c: usize, y: usize, x: usize) -> f32 {
        self.data[self.shape.idx(c, y, x)]
    }

    #[inline]
    pub fn set(&mut self, c: usize, y: usize, x: usize, v: f32) {
        let i = self.shape.idx(c, y, x);
        self.data[i] = v;
    }

    #[inline]
    pub fn get_clipped(&self, c: usize, y: isize, x: isize) -> f32 {
        if y < 0 || x < 0 || y as usize >= self.shape.h || x as usize >= self.shape.w {
            0.0
        } else {
            self.get(c, y as usize, x as usize)
        }
    }

    pub fn all_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }
}

/// Per-(sample, timestep) layer input: binary spikes or real values (encoding
/// layer input, pooled activations).
#[derive(Debug, Clone)]
pub enum ActFrame {
    Spikes(BitFrame),
    Real(RealFrame),
}

impl ActFrame {
    pub fn shape(&self) -> FrameShape {
        match self {
            ActFrame::Spikes(b) => b.shape,
            ActFrame::Real(r) => r.shape,
        }
    }

    pub fn is_binary(&self) -> bool {
        matches!(self, ActFrame::Spikes(_))
    }

    #[inline]
    pub fn get_clipped(&self, c: usize, y: isize, x: isize) -> f32 {
        match self {
            ActFrame::Spikes(b) => {
                if b.get_clipped(c, y, x) {
                    1.0
                } else {
                    0.0
                }
            }
            ActFrame::Real(r) => r.get_clipped(c, y, x),
        }
    }

    /// Linear-index read used by the FC path (frame flattened in (c, y, x)
    /// row-major order).
    #[inline]
    pub fn get_linear(&self, i: usize) -> f32 {
        match self {
            ActFrame::Spikes(b) => {
                if b.get_linear(i) {
                    1.0
                } else {
                    0.0
                }
            }
            ActFrame::Real(r) => r.data[i],
        }
    }
}

/// Bit-packed binary spike tensor over (n, t, c, h, w). One bit per element;
/// payload length is exactly `ceil(len / 64)` 64-bit words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpikeTensor {
    pub dims: TensorDims,
    words: Vec<u64>,
}

impl SpikeTensor {
    pub fn zeros(dims: TensorDims) -> Self {
        SpikeTensor {
            words: vec![0; words_for(dims.len())],
            dims,
        }
    }

    #[inline]
    pub fn get(&self, n: usize, t: usize, c: usize, y: usize, x: usize) -> bool {
        let i = self.dims.frame_offset(n, t) + self.dims.frame.idx(c, y, x);
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, n: usize, t: usize, c: usize, y: usize, x: usize, v: bool) {
        let i = self.dims.frame_offset(n, t) + self.dims.frame.idx(c, y, x);
        let (w, b) = (i / WORD_BITS, i % WORD_BITS);
        if v {
            self.words[w] |= 1 << b;
        } else {
            self.words[w] &= !(1 << b);
        }
    }

    pub fn frame(&self, n: usize, t: usize) -> BitFrame {
        let mut f = BitFrame::zeros(self.dims.frame);
        let base = self.dims.frame_offset(n, t);
        for i in 0..self.dims.frame.len() {
            let j = base + i;
            if (self.words[j / WORD_BITS] >> (j % WORD_BITS)) & 1 == 1 {
                f.set_linear(i, true);
            }
        }
        f
    }

    pub fn set_frame(&mut self, n: usize, t: usize, frame: &BitFrame) {
        assert_eq!(frame.shape, self.dims.frame);
        let base = self.dims.frame_offset(n, t);
        for i in 0..frame.shape.len() {
            let j = base + i;
            let (w, b) = (j / WORD_BITS, j % WORD_BITS);
            if frame.get_linear(i) {
                self.words[w] |= 1 << b;
            } else {
                self.words[w] &= !(1 << b);
            }
        }
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn word_len(&self) -> usize {
        self.words.len()
    }
}

/// Which bitmap a mask tensor carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MaskKind {
    /// Valid spike-gradient outputs: `th_l < u < th_r` at the potential the
    /// mask was derived from.
    SpikeGrad,
    /// Nonzero potential gradients.
    PotGrad,
}

/// Bit-packed mask tensor, same index space as [`SpikeTensor`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaskTensor {
    pub kind: MaskKind,
    pub bits: SpikeTensor,
}

impl MaskTensor {
    pub fn zeros(kind: MaskKind, dims: TensorDims) -> Self {
        MaskTensor {
            kind,
            bits: SpikeTensor::zeros(dims),
        }
    }

    pub fn frame(&self, n: usize, t: usize) -> BitFrame {
        self.bits.frame(n, t)
    }

    pub fn density(&self) -> f64 {
        let len = self.bits.dims.len();
        if len == 0 {
            0.0
        } else {
            self.bits.count_ones() as f64 / len as f64
        }
    }
}

/// Dense FP32 tensor over (n, t, c, h, w); used for potentials and gradients.
#[derive(Debug, Clone, PartialEq)]
pub struct RealTensor {
    pub dims: TensorDims,
    pub data: Vec<f32>,
}

impl RealTensor {
    pub fn zeros(dims: TensorDims) -> Self {
        RealTensor {
            data: vec![0.0; dims.len()],
            dims,
        }
    }

    pub fn frame(&self, n: usize, t: usize) -> RealFrame {
        let base = self.dims.frame_offset(n, t);
        RealFrame {
            shape: self.dims.frame,
            data: self.data[base..base + self.dims.frame.len()].to_vec(),
        }
    }

    pub fn set_frame(&mut self, n: usize, t: usize, frame: &RealFrame) {
        assert_eq!(frame.shape, self.dims.frame);
        let base = self.dims.frame_offset(n, t);
        self.data[base..base + frame.shape.len()].copy_from_slice(&frame.data);
    }

    pub fn all_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }
}

/// Full layer-input tensor over (n, t): binary spikes or real values.
#[derive(Debug, Clone)]
pub enum ActTensor {
    Spikes(SpikeTensor),
    Real(RealTensor),
}

impl ActTensor {
    pub fn dims(&self) -> TensorDims {
        match self {
            ActTensor::Spikes(s) => s.dims,
            ActTensor::Real(r) => r.dims,
        }
    }

    pub fn is_binary(&self) -> bool {
        matches!(self, ActTensor::Spikes(_))
    }

    pub fn frame(&self, n: usize, t: usize) -> ActFrame {
        match self {
            ActTensor::Spikes(s) => ActFrame::Spikes(s.frame(n, t)),
            ActTensor::Real(r) => ActFrame::Real(r.frame(n, t)),
        }
    }
}

/// Layer weights. Conv weights are laid out `[kh][kw][c_in][c_out]`,
/// FC weights `[input][output]`.
#[derive(Debug, Clone, PartialEq)]
pub enum Weights {
    Conv {
        k: usize,
        c_in: usize,
        c_out: usize,
        data: Vec<f32>,
    },
    Fc {
        c_in: usize,
        c_out: usize,
        data: Vec<f32>,
    },
}

impl Weights {
    pub fn conv_zeros(k: usize, c_in: usize, c_out: usize) -> Self {
        Weights::Conv {
            k,
            c_in,
            c_out,
            data: vec![0.0; k * k * c_in * c_out],
        }
    }

    pub fn fc_zeros(c_in: usize, c_out: usize) -> Self {
        Weights::Fc {
            c_in,
            c_out,
            data: vec![0.0; c_in * c_out],
        }
    }

    #[inline]
    pub fn conv_at(&self, dh: usize, dw: usize, ci: usize, co: usize) -> f32 {
        match self {
            Weights::Conv {
                k, c_in, c_out, data,
            } => data[((dh * k + dw) * c_in + ci) * c_out + co],
            Weights::Fc { .. } => panic!("conv_at on FC weights"),
        }
    }

    #[inline]
    pub fn fc_at(&self, i: usize, j: usize) -> f32 {
        match self {
            Weights::Fc { c_out, data, .. } => data[i * c_out + j],
            Weights::Conv { .. } => panic!("fc_at on conv weights"),
        }
    }

    pub fn data(&self) -> &[f32] {
        match self {
            Weights::Conv { data, .. } | Weights::Fc { data, .. } => data,
        }
    }

    pub fn data_mut(&mut self) -> &mut [f32] {
        match self {
            Weights::Conv { data, .. } | Weights::Fc { data, .. } => data,
        }
    }

    pub fn len(&self) -> usize {
        self.data().len()
    }

    pub fn is_empty(&self) -> bool {
        self.data().is_empty()
    }

    pub fn same_shape(&self, other: &Weights) -> bool {
        match (self, other) {
            (
                Weights::Conv {
                    k: k1,
                    c_in: i1,
                    c_out: o1,
                    ..
                },
                Weights::Conv {
                    k: k2,
                    c_in: i2,
                    c_out: o2,
                    ..
                },
            ) => k1 == k2 && i1 == i2 && o1 == o2,
            (
                Weights::Fc { c_in: i1, c_out: o1, .. },
                Weights::Fc { c_in: i2, c_out: o2, .. },
            ) => i1 == i2 && o1 == o2,
            _ => false,
        }
    }

    pub fn all_finite(&self) -> bool {
        self.data().iter().all(|v| v.is_finite())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn packed_word_count_matches_definition() {
        let dims = TensorDims::new(2, 3, FrameShape::new(5, 7, 7));
        let s = SpikeTensor::zeros(dims);
        assert_eq!(s.word_len(), dims.len().div_ceil(64));
    }

    #[test]
    fn bit_roundtrip_and_frames() {
        let dims = TensorDims::new(2, 2, FrameShape::new(3, 4, 5));
        let mut s = SpikeTensor::zeros(dims);
        s.set(1, 0, 2, 3, 4, true);
        s.set(0, 1, 0, 0, 0, true);
        assert!(s.get(1, 0, 2, 3, 4));
        assert!(!s.get(1, 0, 2, 3, 3));
        let f = s.frame(1, 0);
        assert!(f.get(2, 3, 4));
        assert_eq!(f.count_ones(), 1);
        let mut s2 = SpikeTensor::zeros(dims);
        s2.set_frame(1, 0, &f);
        assert!(s2.get(1, 0, 2, 3, 4));
        assert_eq!(s2.count_ones(), 1);
    }

    #[test]
    fn clipped_reads_are_zero_padding() {
        let mut f = BitFrame::zeros(FrameShape::new(1, 2, 2));
        f.set(0, 0, 0, true);
        assert!(f.get_clipped(0, 0, 0));
        assert!(!f.get_clipped(0, -1, 0));
        assert!(!f.get_clipped(0, 0, 2));
    }
}
