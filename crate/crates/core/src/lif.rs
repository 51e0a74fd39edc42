use serde::{Deserialize, Serialize};

use crate::error::CoreError;

/// Leaky integrate-and-fire neuron parameters.
///
/// `alpha` is the leakage factor of the temporal term, `th_f` the firing
/// threshold, `(th_l, th_r)` the surrogate window (exclusive on both ends),
/// and `beta` the surrogate pulse height.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LifParams {
    pub alpha: f32,
    pub th_f: f32,
    pub th_l: f32,
    pub th_r: f32,
    pub beta: f32,
}

impl Default for LifParams {
    fn default() -> Self {
        LifParams {
            alpha: 0.5,
            th_f: 0.5,
            th_l: 0.0,
            th_r: 1.0,
            beta: 1.0,
        }
    }
}

impl LifParams {
    pub fn validate(&self) -> Result<(), CoreError> {
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(CoreError::Config(format!(
                "alpha must be in (0, 1], got {}",
                self.alpha
            )));
        }
        if !(self.th_l < self.th_r) {
            return Err(CoreError::Config(format!(
                "surrogate window requires th_l < th_r, got [{}, {}]",
                self.th_l, self.th_r
            )));
        }
        if !(self.beta > 0.0) {
            return Err(CoreError::Config(format!(
                "beta must be positive, got {}",
                self.beta
            )));
        }
        for v in [self.alpha, self.th_f, self.th_l, self.th_r, self.beta] {
            if !v.is_finite() {
                return Err(CoreError::Config("non-finite LIF parameter".into()));
            }
        }
        Ok(())
    }

    /// True when `u` lies strictly inside the surrogate window, i.e. the
    /// neuron has a valid spike gradient.
    #[inline]
    pub fn in_window(&self, u: f32) -> bool {
        self.th_l < u && u < self.th_r
    }
}

/// Heaviside firing function: 1 when the potential reaches the threshold.
#[inline]
pub fn fire(u: f32, p: &LifParams) -> bool {
    u >= p.th_f
}

/// Rectangular surrogate of the firing derivative: `beta` strictly inside
/// `(th_l, th_r)`, zero elsewhere (including on both boundaries).
#[inline]
pub fn fire_derivative(u: f32, p: &LifParams) -> f32 {
    if p.in_window(u) {
        p.beta
    } else {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivative_is_beta_inside_window() {
        let p = LifParams {
            alpha: 0.5,
            th_f: 1.0,
            th_l: 0.0,
            th_r: 1.0,
            beta: 1.0,
        };
        assert_eq!(fire_derivative((p.th_l + p.th_r) / 2.0, &p), p.beta);
        assert_eq!(fire_derivative(0.5, &p), 1.0);
    }

    #[test]
    fn derivative_is_zero_on_boundaries() {
        let p = LifParams {
            alpha: 1.0,
            th_f: 1.0,
            th_l: -0.5,
            th_r: 1.5,
            beta: 2.0,
        };
        assert_eq!(fire_derivative(p.th_l, &p), 0.0);
        assert_eq!(fire_derivative(p.th_r, &p), 0.0);
        assert_eq!(fire_derivative(p.th_r + 0.1, &p), 0.0);
        assert_eq!(fire_derivative(0.0, &p), 2.0);
    }

    #[test]
    fn invalid_params_rejected() {
        let mut p = LifParams::default();
        p.alpha = 0.0;
        assert!(p.validate().is_err());
        p = LifParams::default();
        p.th_l = p.th_r;
        assert!(p.validate().is_err());
        p = LifParams::default();
        p.beta = -1.0;
        assert!(p.validate().is_err());
        assert!(LifParams::default().validate().is_ok());
    }
}
