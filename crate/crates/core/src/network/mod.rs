//! The parameter-cognizant energy network: a feed-forward scalar-output net
//! whose input gradient defines a learned Hamiltonian vector field.
//!
//! Inputs are laid out `[params..., q..., p...]`. Hidden layers use `tanh`,
//! the scalar output layer is affine. The learned field reads
//! `dq/dt = dH/dp`, `dp/dt = -dH/dq` off the exact reverse-mode input
//! gradient, so the induced dynamics conserve the network's own output by
//! construction.

mod data;
mod train;

pub use data::{build_training_set, derivative_targets, orbit_seed, training_energies, DataConfig, DerivativeTargets};
pub use train::{loss, loss_and_gradient, loss_gradient, train, ParamGrads, SampleBatch, TrainConfig, TrainResult};

use std::path::Path;

use ndarray::{Array1, Array2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::systems::{PhaseState, PhaseVelocity};

/// Feed-forward scalar-output network with `tanh` hidden layers.
#[derive(Debug, Clone, PartialEq)]
pub struct HnnModel {
    /// Layer widths, input first, scalar output last.
    pub layer_dims: Vec<usize>,
    /// Per-layer weight matrices, shape `(out, in)`.
    pub weights: Vec<Array2<f64>>,
    /// Per-layer bias vectors.
    pub biases: Vec<Array1<f64>>,
    /// Parameter vectors seen during training (metadata, may be empty).
    pub training_alphas: Vec<Vec<f64>>,
}

impl HnnModel {
    /// Layer sizes used throughout: two hidden layers of 200 neurons.
    pub fn standard_dims(n_params: usize, phase_dim: usize) -> Vec<usize> {
        vec![n_params + phase_dim, 200, 200, 1]
    }

    /// Initialize with uniform weights in `±sqrt(6 / (fan_in + fan_out))` and
    /// zero biases; identical seeds give identical models.
    pub fn init(layer_dims: &[usize], seed: u64) -> Result<Self> {
        if layer_dims.len() < 2 || layer_dims.iter().any(|&d| d == 0) || *layer_dims.last().unwrap() != 1
        {
            return Err(Error::ParamOutOfRange(format!(
                "invalid layer dims {layer_dims:?}: need >= 2 nonzero entries ending in 1"
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut weights = Vec::with_capacity(layer_dims.len() - 1);
        let mut biases = Vec::with_capacity(layer_dims.len() - 1);
        for w in layer_dims.windows(2) {
            let (fan_in, fan_out) = (w[0], w[1]);
            let limit = (6.0 / (fan_in + fan_out) as f64).sqrt();
            let mut m = Array2::zeros((fan_out, fan_in));
            for v in m.iter_mut() {
                *v = rng.random_range(-limit..limit);
            }
            weights.push(m);
            biases.push(Array1::zeros(fan_out));
        }
        Ok(Self {
            layer_dims: layer_dims.to_vec(),
            weights,
            biases,
            training_alphas: Vec::new(),
        })
    }

    /// Input width (`n_params + 2 * dof`).
    pub fn n_inputs(&self) -> usize {
        self.layer_dims[0]
    }

    /// Number of affine layers.
    pub fn n_layers(&self) -> usize {
        self.weights.len()
    }

    /// Total number of trainable scalars.
    pub fn param_count(&self) -> usize {
        self.weights.iter().map(|w| w.len()).sum::<usize>()
            + self.biases.iter().map(|b| b.len()).sum::<usize>()
    }

    fn check_input(&self, len: usize) -> Result<()> {
        if len != self.n_inputs() {
            return Err(Error::DimensionMismatch {
                expected: self.n_inputs(),
                got: len,
                context: "network input width",
            });
        }
        Ok(())
    }

    /// Scalar output (the predicted Hamiltonian) at `input`.
    pub fn forward(&self, input: &[f64]) -> Result<f64> {
        self.check_input(input.len())?;
        let last = self.n_layers() - 1;
        let mut y = input.to_vec();
        for (l, (w, b)) in self.weights.iter().zip(&self.biases).enumerate() {
            let mut z: Vec<f64> = b.to_vec();
            for (zi, row) in z.iter_mut().zip(w.rows()) {
                *zi += row.iter().zip(&y).map(|(wij, yj)| wij * yj).sum::<f64>();
            }
            if l < last {
                for zi in &mut z {
                    *zi = zi.tanh();
                }
            }
            y = z;
        }
        Ok(y[0])
    }

    /// Exact reverse-mode gradient of [`HnnModel::forward`] with respect to
    /// every input channel (parameter channels included).
    pub fn input_gradient(&self, input: &[f64]) -> Result<Vec<f64>> {
        self.check_input(input.len())?;
        let last = self.n_layers() - 1;

        // Forward, keeping hidden activations.
        let mut activations: Vec<Vec<f64>> = Vec::with_capacity(last);
        let mut y = input.to_vec();
        for (l, (w, b)) in self.weights.iter().zip(&self.biases).enumerate() {
            let mut z: Vec<f64> = b.to_vec();
            for (zi, row) in z.iter_mut().zip(w.rows()) {
                *zi += row.iter().zip(&y).map(|(wij, yj)| wij * yj).sum::<f64>();
            }
            if l < last {
                for zi in &mut z {
                    *zi = zi.tanh();
                }
                activations.push(z.clone());
            }
            y = z;
        }

        // Backward: delta = dH/dz for the current layer.
        let mut delta = vec![1.0];
        for l in (0..self.n_layers()).rev() {
            let w = &self.weights[l];
            let mut a = vec![0.0; w.ncols()];
            for (di, row) in delta.iter().zip(w.rows()) {
                for (aj, wij) in a.iter_mut().zip(row) {
                    *aj += di * wij;
                }
            }
            if l == 0 {
                return Ok(a);
            }
            let t = &activations[l - 1];
            for (ai, ti) in a.iter_mut().zip(t) {
                *ai *= 1.0 - ti * ti;
            }
            delta = a;
        }
        unreachable!("loop returns at l == 0")
    }

    /// Learned Hamiltonian vector field at `(params, state)`.
    pub fn learned_rhs(&self, params: &[f64], state: &PhaseState) -> Result<PhaseVelocity> {
        let dof = state.dof();
        self.check_input(params.len() + 2 * dof)?;
        let mut input = Vec::with_capacity(self.n_inputs());
        input.extend_from_slice(params);
        input.extend_from_slice(&state.q);
        input.extend_from_slice(&state.p);
        let g = self.input_gradient(&input)?;
        let dq = g[params.len() + dof..].to_vec();
        let dp = g[params.len()..params.len() + dof].iter().map(|v| -v).collect();
        Ok(PhaseVelocity { dq, dp })
    }

    /// Save as versioned JSON.
    pub fn save_json(&self, path: &Path) -> Result<()> {
        let file = ModelFile::from_model(self);
        let text = serde_json::to_string(&file).expect("model serialization cannot fail");
        std::fs::write(path, text)?;
        Ok(())
    }

    /// Load from the JSON produced by [`HnnModel::save_json`].
    pub fn load_json(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let file: ModelFile = serde_json::from_str(&text).map_err(|e| Error::Parse {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        file.into_model(path)
    }
}

/// On-disk model layout (format version 1).
#[derive(Debug, Serialize, Deserialize)]
struct ModelFile {
    format_version: u32,
    layer_dims: Vec<usize>,
    activation: String,
    /// Row-major weight entries, one flat vector per layer.
    weights: Vec<Vec<f64>>,
    biases: Vec<Vec<f64>>,
    training_alphas: Vec<Vec<f64>>,
}

impl ModelFile {
    fn from_model(m: &HnnModel) -> Self {
        Self {
            format_version: 1,
            layer_dims: m.layer_dims.clone(),
            activation: "tanh".to_string(),
            weights: m.weights.iter().map(|w| w.iter().copied().collect()).collect(),
            biases: m.biases.iter().map(|b| b.to_vec()).collect(),
            training_alphas: m.training_alphas.clone(),
        }
    }

    fn into_model(self, path: &Path) -> Result<HnnModel> {
        let bad = |message: String| Error::Parse {
            path: path.display().to_string(),
            message,
        };
        if self.format_version != 1 {
            return Err(bad(format!("unsupported format version {}", self.format_version)));
        }
        if self.activation != "tanh" {
            return Err(bad(format!("unsupported activation {:?}", self.activation)));
        }
        let mut weights = Vec::new();
        let mut biases = Vec::new();
        for (l, w) in self.layer_dims.windows(2).enumerate() {
            let (fan_in, fan_out) = (w[0], w[1]);
            let flat = self
                .weights
                .get(l)
                .ok_or_else(|| bad(format!("missing weights for layer {l}")))?;
            let m = Array2::from_shape_vec((fan_out, fan_in), flat.clone())
                .map_err(|e| bad(format!("layer {l} weights: {e}")))?;
            weights.push(m);
            let b = self
                .biases
                .get(l)
                .ok_or_else(|| bad(format!("missing biases for layer {l}")))?;
            if b.len() != fan_out {
                return Err(bad(format!("layer {l} biases: expected {fan_out}, got {}", b.len())));
            }
            biases.push(Array1::from_vec(b.clone()));
        }
        Ok(HnnModel {
            layer_dims: self.layer_dims,
            weights,
            biases,
            training_alphas: self.training_alphas,
        })
    }
}

/// An ensemble of independently trained models; predictions average the
/// members' derivative vectors.
#[derive(Debug, Clone)]
pub struct HnnEnsemble {
    pub members: Vec<HnnModel>,
}

impl HnnEnsemble {
    pub fn new(members: Vec<HnnModel>) -> Result<Self> {
        let first = members.first().ok_or(Error::EmptyBatch)?;
        if members.iter().any(|m| m.layer_dims != first.layer_dims) {
            return Err(Error::ParamOutOfRange(
                "ensemble members disagree on layer dims".into(),
            ));
        }
        Ok(Self { members })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn n_inputs(&self) -> usize {
        self.members[0].n_inputs()
    }

    /// Ensemble energy: mean of the members' outputs.
    pub fn forward(&self, input: &[f64]) -> Result<f64> {
        let mut sum = 0.0;
        for m in &self.members {
            sum += m.forward(input)?;
        }
        Ok(sum / self.members.len() as f64)
    }

    /// Mean of the members' derivative vectors.
    pub fn learned_rhs(&self, params: &[f64], state: &PhaseState) -> Result<PhaseVelocity> {
        let dof = state.dof();
        let mut dq = vec![0.0; dof];
        let mut dp = vec![0.0; dof];
        for m in &self.members {
            let v = m.learned_rhs(params, state)?;
            for i in 0..dof {
                dq[i] += v.dq[i];
                dp[i] += v.dp[i];
            }
        }
        let n = self.members.len() as f64;
        dq.iter_mut().for_each(|v| *v /= n);
        dp.iter_mut().for_each(|v| *v /= n);
        Ok(PhaseVelocity { dq, dp })
    }

    /// Load `member_XX.json` files in index order from a directory.
    pub fn load_dir(dir: &Path) -> Result<Self> {
        let mut paths: Vec<_> = std::fs::read_dir(dir)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| {
                p.extension().is_some_and(|x| x == "json")
                    && p.file_stem()
                        .and_then(|s| s.to_str())
                        .is_some_and(|s| s.starts_with("member_"))
            })
            .collect();
        paths.sort();
        let members: Result<Vec<_>> = paths.iter().map(|p| HnnModel::load_json(p)).collect();
        Self::new(members?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn init_is_deterministic_and_seed_sensitive() {
        let dims = [5, 16, 16, 1];
        let a = HnnModel::init(&dims, 9).unwrap();
        let b = HnnModel::init(&dims, 9).unwrap();
        assert_eq!(a, b);
        let c = HnnModel::init(&dims, 10).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn standard_architecture_parameter_count() {
        let m = HnnModel::init(&HnnModel::standard_dims(1, 4), 0).unwrap();
        assert_eq!(m.param_count(), 41_601);
    }

    #[test]
    fn forward_zero_model_and_bias_only() {
        let mut m = HnnModel::init(&[4, 8, 8, 1], 0).unwrap();
        for w in &mut m.weights {
            w.fill(0.0);
        }
        assert_eq!(m.forward(&[0.3, -0.1, 0.9, 0.0]).unwrap(), 0.0);
        m.biases[2][0] = 2.5;
        assert_eq!(m.forward(&[0.3, -0.1, 0.9, 0.0]).unwrap(), 2.5);
        assert_eq!(m.forward(&[-1.0, 1.0, 0.0, 7.0]).unwrap(), 2.5);
    }

    #[test]
    fn forward_rejects_wrong_width() {
        let m = HnnModel::init(&[4, 8, 1], 0).unwrap();
        assert!(m.forward(&[0.0; 3]).is_err());
        assert!(m.input_gradient(&[0.0; 5]).is_err());
    }

    #[test]
    fn forward_is_lipschitz_with_weight_norm_bound() {
        // |f(x + d) - f(x)| <= prod_l ||W_l||_inf * ||d||_inf for 1-Lipschitz
        // activations; the initialization keeps the product small enough that
        // 1e-9 perturbations move the output by far less than 1e-6.
        let m = HnnModel::init(&HnnModel::standard_dims(1, 4), 3).unwrap();
        let bound: f64 = m
            .weights
            .iter()
            .map(|w| {
                w.rows()
                    .into_iter()
                    .map(|r| r.iter().map(|v| v.abs()).sum::<f64>())
                    .fold(0.0, f64::max)
            })
            .product();
        let x = [0.5, 0.1, -0.2, 0.3, -0.4];
        let mut xp = x;
        for i in 0..x.len() {
            xp[i] += 1e-9;
        }
        let diff = (m.forward(&xp).unwrap() - m.forward(&x).unwrap()).abs();
        assert!(diff <= bound * 1e-9);
        assert!(bound * 1e-9 < 1e-6, "bound = {bound}");
    }

    #[test]
    fn input_gradient_zero_model_and_linear_layer() {
        let mut m = HnnModel::init(&[4, 8, 1], 0).unwrap();
        for w in &mut m.weights {
            w.fill(0.0);
        }
        assert_eq!(m.input_gradient(&[0.1, 0.2, 0.3, 0.4]).unwrap(), vec![0.0; 4]);

        // A single affine layer: gradient is the weight row, everywhere.
        let m = HnnModel::init(&[3, 1], 42).unwrap();
        let row: Vec<f64> = m.weights[0].row(0).to_vec();
        let g = m.input_gradient(&[0.7, -0.3, 0.2]).unwrap();
        assert_eq!(g, row);
    }

    #[test]
    fn input_gradient_matches_finite_differences() {
        use rand::SeedableRng;
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for trial in 0..30 {
            let m = HnnModel::init(&[5, 12, 12, 1], trial).unwrap();
            let x: Vec<f64> = (0..5).map(|_| rng.random_range(-0.8..0.8)).collect();
            let g = m.input_gradient(&x).unwrap();
            let h = 1e-5;
            for i in 0..x.len() {
                let mut xp = x.clone();
                let mut xm = x.clone();
                xp[i] += h;
                xm[i] -= h;
                let fd = (m.forward(&xp).unwrap() - m.forward(&xm).unwrap()) / (2.0 * h);
                let scale = g[i].abs().max(fd.abs()).max(1e-3);
                assert!(
                    (g[i] - fd).abs() / scale < 1e-6,
                    "trial {trial} component {i}: {} vs {fd}",
                    g[i]
                );
            }
        }
    }

    #[test]
    fn learned_rhs_sign_convention() {
        // With H = w . [alpha, q1, q2, p1, p2], dq/dt is the p-part of w and
        // dp/dt the negated q-part.
        let m = HnnModel::init(&[5, 1], 5).unwrap();
        let w: Vec<f64> = m.weights[0].row(0).to_vec();
        let s = PhaseState::new(vec![0.1, 0.2], vec![0.3, 0.4]).unwrap();
        let v = m.learned_rhs(&[0.7], &s).unwrap();
        assert_eq!(v.dq, vec![w[3], w[4]]);
        assert_eq!(v.dp, vec![-w[1], -w[2]]);
    }

    #[test]
    fn ensemble_of_identical_members_matches_single_model() {
        let m = HnnModel::init(&[5, 10, 10, 1], 2).unwrap();
        let ens = HnnEnsemble::new(vec![m.clone(), m.clone(), m.clone()]).unwrap();
        let s = PhaseState::new(vec![0.1, -0.2], vec![0.05, 0.3]).unwrap();
        let single = m.learned_rhs(&[0.4], &s).unwrap();
        let avg = ens.learned_rhs(&[0.4], &s).unwrap();
        for i in 0..2 {
            assert!((single.dq[i] - avg.dq[i]).abs() < 1e-15);
            assert!((single.dp[i] - avg.dp[i]).abs() < 1e-15);
        }
    }

    #[test]
    fn zero_model_velocity_is_zero() {
        let mut m = HnnModel::init(&[5, 8, 8, 1], 0).unwrap();
        for w in &mut m.weights {
            w.fill(0.0);
        }
        let s = PhaseState::new(vec![0.5, 0.5], vec![0.5, 0.5]).unwrap();
        let v = m.learned_rhs(&[1.0], &s).unwrap();
        assert_eq!(v.dq, vec![0.0, 0.0]);
        assert_eq!(v.dp, vec![0.0, 0.0]);
    }

    #[test]
    fn json_round_trip_is_exact() {
        let dir = std::env::temp_dir().join("hamlearn_model_rt");
        std::fs::create_dir_all(&dir).unwrap();
        let mut m = HnnModel::init(&[5, 20, 20, 1], 77).unwrap();
        m.training_alphas = vec![vec![0.2], vec![0.4]];
        let path = dir.join("member_00.json");
        m.save_json(&path).unwrap();
        let loaded = HnnModel::load_json(&path).unwrap();
        assert_eq!(m, loaded);
    }
}
