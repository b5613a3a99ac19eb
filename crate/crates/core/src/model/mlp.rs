use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Shape and initialization seed of a feedforward network with ReLU hidden
/// layers and a linear output layer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MlpConfig {
    pub input_dim: usize,
    pub hidden_dims: Vec<usize>,
    /// Target length times the number of findings.
    pub output_dim: usize,
    pub init_seed: u64,
}

impl MlpConfig {
    pub fn validate(&self) -> Result<()> {
        if self.input_dim == 0 || self.output_dim == 0 || self.hidden_dims.contains(&0) {
            return Err(Error::Config(format!(
                "layer widths must be positive: {} -> {:?} -> {}",
                self.input_dim, self.hidden_dims, self.output_dim
            )));
        }
        Ok(())
    }

    fn widths(&self) -> Vec<usize> {
        let mut w = Vec::with_capacity(self.hidden_dims.len() + 2);
        w.push(self.input_dim);
        w.extend_from_slice(&self.hidden_dims);
        w.push(self.output_dim);
        w
    }
}

/// One affine layer. `weights` is row-major `outputs x inputs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Layer {
    pub inputs: usize,
    pub outputs: usize,
    pub weights: Vec<f64>,
    pub bias: Vec<f64>,
}

impl Layer {
    pub fn zeros(inputs: usize, outputs: usize) -> Self {
        Self {
            inputs,
            outputs,
            weights: vec![0.0; inputs * outputs],
            bias: vec![0.0; outputs],
        }
    }

    /// `out[b] = W x[b] + bias` for every row of a batch.
    fn affine(&self, x: &[f64], batch: usize) -> Vec<f64> {
        let mut out = Vec::with_capacity(batch * self.outputs);
        for row in x.chunks_exact(self.inputs).take(batch) {
            for (w_row, b) in self.weights.chunks_exact(self.inputs).zip(&self.bias) {
                out.push(dot(w_row, row) + b);
            }
        }
        out
    }
}

/// Weights and biases of every layer, 64-bit. The same shape also carries
/// gradients and optimizer moments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub layers: Vec<Layer>,
}

impl ModelParams {
    /// Seeded initialization. Each layer draws from its own stream of the
    /// seed, so layers of equal shape are identical across networks that
    /// differ elsewhere.
    pub fn init(config: &MlpConfig) -> Result<Self> {
        config.validate()?;
        let widths = config.widths();
        let last = widths.len() - 2;
        let layers = widths
            .windows(2)
            .enumerate()
            .map(|(index, pair)| {
                let (inputs, outputs) = (pair[0], pair[1]);
                let mut rng = ChaCha8Rng::seed_from_u64(config.init_seed);
                rng.set_stream(index as u64);
                // He-uniform ahead of ReLU, fan-in uniform on the linear head
                let bound = if index == last {
                    (1.0 / inputs as f64).sqrt()
                } else {
                    (6.0 / inputs as f64).sqrt()
                };
                let weights = (0..inputs * outputs)
                    .map(|_| rng.random_range(-bound..bound))
                    .collect();
                Layer {
                    inputs,
                    outputs,
                    weights,
                    bias: vec![0.0; outputs],
                }
            })
            .collect();
        Ok(Self { layers })
    }

    pub fn zeros_like(&self) -> Self {
        Self {
            layers: self
                .layers
                .iter()
                .map(|l| Layer::zeros(l.inputs, l.outputs))
                .collect(),
        }
    }

    pub fn input_dim(&self) -> usize {
        self.layers.first().map_or(0, |l| l.inputs)
    }

    pub fn output_dim(&self) -> usize {
        self.layers.last().map_or(0, |l| l.outputs)
    }

    pub fn parameter_count(&self) -> usize {
        self.layers
            .iter()
            .map(|l| l.weights.len() + l.bias.len())
            .sum()
    }

    /// Every weight and bias vector in layer order.
    pub fn tensors(&self) -> impl Iterator<Item = &[f64]> {
        self.layers
            .iter()
            .flat_map(|l| [l.weights.as_slice(), l.bias.as_slice()])
    }

    pub fn tensors_mut(&mut self) -> impl Iterator<Item = &mut [f64]> {
        self.layers
            .iter_mut()
            .flat_map(|l| [l.weights.as_mut_slice(), l.bias.as_mut_slice()])
    }

    pub fn is_finite(&self) -> bool {
        self.tensors().flatten().all(|v| v.is_finite())
    }

    pub fn forward(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.forward_batch(x, 1)
    }

    /// Forward pass over `batch` inputs stored row-major in `x`.
    pub fn forward_batch(&self, x: &[f64], batch: usize) -> Result<Vec<f64>> {
        self.check_input(x, batch)?;
        let mut activation = x.to_vec();
        let last = self.layers.len() - 1;
        for (index, layer) in self.layers.iter().enumerate() {
            activation = layer.affine(&activation, batch);
            if index != last {
                relu(&mut activation);
            }
        }
        Ok(activation)
    }

    /// Batch-mean MSE and its gradient for `batch` rows of `x` and `targets`.
    pub fn backward(&self, x: &[f64], targets: &[f64], batch: usize) -> Result<(f64, ModelParams)> {
        self.check_input(x, batch)?;
        let out_dim = self.output_dim();
        if targets.len() != batch * out_dim {
            return Err(Error::ShapeMismatch {
                what: "target batch",
                expected: batch * out_dim,
                actual: targets.len(),
            });
        }

        // activations[l] is the input to layer l; the last entry is the output
        let last = self.layers.len() - 1;
        let mut activations = Vec::with_capacity(self.layers.len() + 1);
        activations.push(x[..batch * self.input_dim()].to_vec());
        for (index, layer) in self.layers.iter().enumerate() {
            let mut a = layer.affine(activations.last().unwrap(), batch);
            if index != last {
                relu(&mut a);
            }
            activations.push(a);
        }

        let output = activations.last().unwrap();
        let loss = mse_loss(output, targets)?;
        let scale = 2.0 / (batch * out_dim) as f64;
        let mut delta: Vec<f64> = output
            .iter()
            .zip(targets)
            .map(|(y, t)| scale * (y - t))
            .collect();

        let mut grads = self.zeros_like();
        for index in (0..self.layers.len()).rev() {
            let layer = &self.layers[index];
            let input = &activations[index];
            let grad = &mut grads.layers[index];
            for (d_row, in_row) in delta
                .chunks_exact(layer.outputs)
                .zip(input.chunks_exact(layer.inputs))
            {
                for (o, &d) in d_row.iter().enumerate() {
                    grad.bias[o] += d;
                    let g_row = &mut grad.weights[o * layer.inputs..(o + 1) * layer.inputs];
                    for (g, &a) in g_row.iter_mut().zip(in_row) {
                        *g += d * a;
                    }
                }
            }
            if index == 0 {
                break;
            }
            let mut next = vec![0.0; batch * layer.inputs];
            for (n_row, d_row) in next
                .chunks_exact_mut(layer.inputs)
                .zip(delta.chunks_exact(layer.outputs))
            {
                for (&d, w_row) in d_row.iter().zip(layer.weights.chunks_exact(layer.inputs)) {
                    for (n, &w) in n_row.iter_mut().zip(w_row) {
                        *n += d * w;
                    }
                }
            }
            // ReLU gate: input was the previous layer's post-activation output
            for (n, &a) in next.iter_mut().zip(input) {
                if a <= 0.0 {
                    *n = 0.0;
                }
            }
            delta = next;
        }
        Ok((loss, grads))
    }

    fn check_input(&self, x: &[f64], batch: usize) -> Result<()> {
        if self.layers.is_empty() {
            return Err(Error::Empty("network has no layers"));
        }
        let expected = batch * self.input_dim();
        if x.len() != expected {
            return Err(Error::ShapeMismatch {
                what: "input batch",
                expected,
                actual: x.len(),
            });
        }
        Ok(())
    }
}

/// Mean of squared differences over every entry.
pub fn mse_loss(y: &[f64], target: &[f64]) -> Result<f64> {
    if y.len() != target.len() {
        return Err(Error::ShapeMismatch {
            what: "loss operands",
            expected: target.len(),
            actual: y.len(),
        });
    }
    if y.is_empty() {
        return Err(Error::Empty("loss operands"));
    }
    let sum: f64 = y.iter().zip(target).map(|(a, b)| (a - b) * (a - b)).sum();
    Ok(sum / y.len() as f64)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn relu(v: &mut [f64]) {
    for x in v {
        if *x < 0.0 {
            *x = 0.0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(hidden: Vec<usize>, out: usize) -> MlpConfig {
        MlpConfig {
            input_dim: 3,
            hidden_dims: hidden,
            output_dim: out,
            init_seed: 11,
        }
    }

    #[test]
    fn zero_network_outputs_zero() {
        let mut p = ModelParams::init(&config(vec![4], 2)).unwrap();
        for t in p.tensors_mut() {
            t.fill(0.0);
        }
        assert_eq!(p.forward(&[1.0, -2.0, 3.0]).unwrap(), vec![0.0, 0.0]);
    }

    #[test]
    fn identity_layer() {
        let mut layer = Layer::zeros(3, 3);
        for i in 0..3 {
            layer.weights[i * 3 + i] = 1.0;
        }
        let p = ModelParams {
            layers: vec![layer],
        };
        let x = [0.25, -1.5, 4.0];
        assert_eq!(p.forward(&x).unwrap(), x.to_vec());
    }

    #[test]
    fn shape_errors() {
        let p = ModelParams::init(&config(vec![4], 2)).unwrap();
        assert!(matches!(
            p.forward(&[1.0]),
            Err(Error::ShapeMismatch { .. })
        ));
        assert!(p.backward(&[0.0; 6], &[0.0; 3], 2).is_err());
        assert!(mse_loss(&[1.0], &[1.0, 2.0]).is_err());
        assert!(ModelParams::init(&config(vec![0], 2)).is_err());
    }

    #[test]
    fn mse_examples() {
        assert_eq!(mse_loss(&[1.0, 0.0], &[0.0, 0.0]).unwrap(), 0.5);
        assert_eq!(mse_loss(&[0.3, 0.7], &[0.3, 0.7]).unwrap(), 0.0);
    }

    #[test]
    fn perfect_fit_has_zero_gradient() {
        let p = ModelParams::init(&config(vec![5, 4], 2)).unwrap();
        let x = [0.1, 0.2, 0.3, -0.4, 0.5, 0.6];
        let y = p.forward_batch(&x, 2).unwrap();
        let (loss, grads) = p.backward(&x, &y, 2).unwrap();
        assert_eq!(loss, 0.0);
        assert!(grads.tensors().flatten().all(|g| *g == 0.0));
    }

    #[test]
    fn duplicated_batch_keeps_gradient() {
        let p = ModelParams::init(&config(vec![5], 2)).unwrap();
        let x = [0.1, 0.2, 0.3, -0.4, 0.5, 0.6];
        let t = [1.0, 0.0, 0.0, 1.0];
        let (l1, g1) = p.backward(&x, &t, 2).unwrap();
        let x2: Vec<f64> = x.iter().chain(&x).copied().collect();
        let t2: Vec<f64> = t.iter().chain(&t).copied().collect();
        let (l2, g2) = p.backward(&x2, &t2, 4).unwrap();
        assert!((l1 - l2).abs() < 1e-15);
        for (a, b) in g1.tensors().flatten().zip(g2.tensors().flatten()) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn shared_layers_initialize_identically() {
        let a = ModelParams::init(&config(vec![6, 5], 5)).unwrap();
        let b = ModelParams::init(&config(vec![6, 5], 1)).unwrap();
        assert_eq!(a.layers[0], b.layers[0]);
        assert_eq!(a.layers[1], b.layers[1]);
        assert_ne!(a.layers[2], b.layers[2]);
        let c = ModelParams::init(&config(vec![6, 5], 5)).unwrap();
        assert_eq!(a, c);
    }
}
