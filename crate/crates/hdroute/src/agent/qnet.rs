//! Small fully connected Q-network: input -> hidden -> hidden -> outputs,
//! rectifier on the hidden layers, identity output. Plain SGD on the squared
//! temporal-difference error of the chosen action.

use crate::error::{Error, Result};
use rand::Rng;

#[derive(Debug, Clone)]
pub struct Layer {
    pub in_dim: usize,
    pub out_dim: usize,
    /// Row-major `out_dim x in_dim`.
    pub w: Vec<f64>,
    pub b: Vec<f64>,
}

impl Layer {
    fn new(in_dim: usize, out_dim: usize, rng: &mut impl Rng) -> Layer {
        // uniform in +-sqrt(6 / (in + out))
        let bound = (6.0 / (in_dim + out_dim) as f64).sqrt();
        let w = (0..in_dim * out_dim)
            .map(|_| rng.gen_range(-bound..bound))
            .collect();
        Layer {
            in_dim,
            out_dim,
            w,
            b: vec![0.0; out_dim],
        }
    }

    fn affine(&self, x: &[f64], out: &mut Vec<f64>) {
        out.clear();
        for o in 0..self.out_dim {
            let row = &self.w[o * self.in_dim..(o + 1) * self.in_dim];
            let mut acc = self.b[o];
            for (wi, xi) in row.iter().zip(x) {
                acc += wi * xi;
            }
            out.push(acc);
        }
    }
}

/// Gradient accumulator with the same shape as the network.
#[derive(Debug, Clone)]
pub struct Gradients {
    pub layers: Vec<(Vec<f64>, Vec<f64>)>,
}

impl Gradients {
    pub fn zeros_like(net: &QNetwork) -> Gradients {
        Gradients {
            layers: net
                .layers
                .iter()
                .map(|l| (vec![0.0; l.w.len()], vec![0.0; l.b.len()]))
                .collect(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct QNetwork {
    pub layers: Vec<Layer>,
}

impl QNetwork {
    pub fn new(input: usize, hidden: usize, outputs: usize, rng: &mut impl Rng) -> QNetwork {
        QNetwork {
            layers: vec![
                Layer::new(input, hidden, rng),
                Layer::new(hidden, hidden, rng),
                Layer::new(hidden, outputs, rng),
            ],
        }
    }

    pub fn input_dim(&self) -> usize {
        self.layers[0].in_dim
    }

    pub fn output_dim(&self) -> usize {
        self.layers[2].out_dim
    }

    /// Deterministic affine-rectifier-affine-rectifier-affine map.
    pub fn forward(&self, state: &[f64]) -> Result<Vec<f64>> {
        if state.len() != self.input_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.input_dim(),
                got: state.len(),
            });
        }
        let mut a = state.to_vec();
        let mut z = Vec::new();
        for (i, layer) in self.layers.iter().enumerate() {
            layer.affine(&a, &mut z);
            if i + 1 < self.layers.len() {
                for v in z.iter_mut() {
                    *v = v.max(0.0);
                }
            }
            std::mem::swap(&mut a, &mut z);
        }
        Ok(a)
    }

    /// Forward pass keeping pre-activations and activations for backprop.
    fn forward_trace(&self, state: &[f64]) -> Trace {
        let mut pre = Vec::with_capacity(self.layers.len());
        let mut act = Vec::with_capacity(self.layers.len() + 1);
        act.push(state.to_vec());
        for (i, layer) in self.layers.iter().enumerate() {
            let mut z = Vec::new();
            layer.affine(act.last().unwrap(), &mut z);
            pre.push(z.clone());
            if i + 1 < self.layers.len() {
                for v in z.iter_mut() {
                    *v = v.max(0.0);
                }
            }
            act.push(z);
        }
        Trace { pre, act }
    }

    /// Accumulate the gradient of `scale * (Q(state)[action] - target)^2`
    /// into `grads`, returning the unscaled squared error.
    pub fn accumulate_td_gradient(
        &self,
        state: &[f64],
        action: usize,
        target: f64,
        scale: f64,
        grads: &mut Gradients,
    ) -> f64 {
        let trace = self.forward_trace(state);
        let q = trace.act.last().unwrap();
        let err = q[action] - target;

        // output-layer error signal: d(err^2)/dq = 2 err at the chosen action
        let mut delta = vec![0.0; self.output_dim()];
        delta[action] = 2.0 * err * scale;

        for li in (0..self.layers.len()).rev() {
            let input = &trace.act[li];
            let (gw, gb) = &mut grads.layers[li];
            let layer = &self.layers[li];
            for o in 0..layer.out_dim {
                let d = delta[o];
                if d != 0.0 {
                    gb[o] += d;
                    let row = &mut gw[o * layer.in_dim..(o + 1) * layer.in_dim];
                    for (g, x) in row.iter_mut().zip(input) {
                        *g += d * x;
                    }
                }
            }
            if li > 0 {
                let mut prev = vec![0.0; layer.in_dim];
                for o in 0..layer.out_dim {
                    let d = delta[o];
                    if d != 0.0 {
                        let row = &self.layers[li].w[o * layer.in_dim..(o + 1) * layer.in_dim];
                        for (p, w) in prev.iter_mut().zip(row) {
                            *p += d * w;
                        }
                    }
                }
                // rectifier gate of the previous layer
                for (p, z) in prev.iter_mut().zip(&trace.pre[li - 1]) {
                    if *z <= 0.0 {
                        *p = 0.0;
                    }
                }
                delta = prev;
            }
        }
        err * err
    }

    /// One plain SGD step: `p -= lr * g`.
    pub fn apply_gradients(&mut self, grads: &Gradients, lr: f64) {
        for (layer, (gw, gb)) in self.layers.iter_mut().zip(&grads.layers) {
            for (w, g) in layer.w.iter_mut().zip(gw) {
                *w -= lr * g;
            }
            for (b, g) in layer.b.iter_mut().zip(gb) {
                *b -= lr * g;
            }
        }
    }
}

struct Trace {
    pre: Vec<Vec<f64>>,
    act: Vec<Vec<f64>>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_weights_give_zero_outputs() {
        let mut rng = crate::rng::stream(1, "qnet", 0);
        let mut net = QNetwork::new(3, 8, 7, &mut rng);
        for l in net.layers.iter_mut() {
            l.w.fill(0.0);
            l.b.fill(0.0);
        }
        let q = net.forward(&[0.3, 0.7, 0.1]).unwrap();
        assert!(q.iter().all(|&v| v == 0.0));
        assert_eq!(q.len(), 7);
    }

    #[test]
    fn unit_chain_passes_positive_input_through() {
        let mut rng = crate::rng::stream(1, "qnet", 0);
        let mut net = QNetwork::new(1, 1, 1, &mut rng);
        for l in net.layers.iter_mut() {
            l.w.fill(1.0);
            l.b.fill(0.0);
        }
        let q = net.forward(&[0.5]).unwrap();
        assert!((q[0] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let mut rng = crate::rng::stream(1, "qnet", 0);
        let net = QNetwork::new(2, 4, 7, &mut rng);
        assert!(net.forward(&[1.0]).is_err());
    }
}
