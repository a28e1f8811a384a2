//! Loss, gradients, and training for the energy network.
//!
//! The loss compares the network's input gradient against observed time
//! derivatives, so its parameter gradient needs one extra differentiation
//! pass: a forward tangent sweep along the loss-residual direction followed
//! by a reverse sweep that accumulates into the weights. All passes are
//! batched as dense matrix products.

use ndarray::linalg::general_mat_mul;
use ndarray::{s, Array1, Array2, Axis};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::network::{HnnEnsemble, HnnModel};
use crate::seeds::{derive_seed, SeedDomain};

/// Training rows: inputs `[params, q, p]` with observed time derivatives.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBatch {
    pub inputs: Array2<f64>,
    pub target_dq: Array2<f64>,
    pub target_dp: Array2<f64>,
}

impl SampleBatch {
    pub fn new(inputs: Array2<f64>, target_dq: Array2<f64>, target_dp: Array2<f64>) -> Result<Self> {
        let n = inputs.nrows();
        let dof = target_dq.ncols();
        if target_dp.ncols() != dof || dof == 0 {
            return Err(Error::DimensionMismatch {
                expected: dof,
                got: target_dp.ncols(),
                context: "SampleBatch target widths",
            });
        }
        if target_dq.nrows() != n || target_dp.nrows() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: target_dq.nrows().min(target_dp.nrows()),
                context: "SampleBatch row counts",
            });
        }
        if inputs.ncols() < 2 * dof {
            return Err(Error::DimensionMismatch {
                expected: 2 * dof,
                got: inputs.ncols(),
                context: "SampleBatch input width",
            });
        }
        Ok(Self {
            inputs,
            target_dq,
            target_dp,
        })
    }

    pub fn len(&self) -> usize {
        self.inputs.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dof(&self) -> usize {
        self.target_dq.ncols()
    }

    /// Width of the parameter channel.
    pub fn n_params(&self) -> usize {
        self.inputs.ncols() - 2 * self.dof()
    }

    /// Rows at `indices`, in order.
    pub fn select(&self, indices: &[usize]) -> SampleBatch {
        SampleBatch {
            inputs: self.inputs.select(Axis(0), indices),
            target_dq: self.target_dq.select(Axis(0), indices),
            target_dp: self.target_dp.select(Axis(0), indices),
        }
    }
}

/// Optimizer and schedule settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub epochs: usize,
    pub learning_rate: f64,
    pub batch_size: usize,
    pub adam_beta1: f64,
    pub adam_beta2: f64,
    pub adam_eps: f64,
    /// Seed for mini-batch shuffling.
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            epochs: 500,
            learning_rate: 1e-3,
            batch_size: 512,
            adam_beta1: 0.9,
            adam_beta2: 0.999,
            adam_eps: 1e-8,
            seed: 0,
        }
    }
}

/// Per-parameter gradients, shaped like the model.
#[derive(Debug, Clone)]
pub struct ParamGrads {
    pub weights: Vec<Array2<f64>>,
    pub biases: Vec<Array1<f64>>,
}

/// Trained model plus per-epoch mean loss.
#[derive(Debug, Clone)]
pub struct TrainResult {
    pub model: HnnModel,
    pub history: Vec<f64>,
}

fn check_batch(model: &HnnModel, batch: &SampleBatch) -> Result<()> {
    if batch.is_empty() {
        return Err(Error::EmptyBatch);
    }
    if batch.inputs.ncols() != model.n_inputs() {
        return Err(Error::DimensionMismatch {
            expected: model.n_inputs(),
            got: batch.inputs.ncols(),
            context: "batch input width vs model",
        });
    }
    Ok(())
}

/// Layer activations for a batch; `acts[l]` is the output of layer `l`.
struct ForwardCache {
    acts: Vec<Array2<f64>>,
}

fn forward_batch(model: &HnnModel, x: &Array2<f64>) -> ForwardCache {
    let last = model.n_layers() - 1;
    let mut acts = Vec::with_capacity(model.n_layers());
    let mut y = x.clone();
    for (l, (w, b)) in model.weights.iter().zip(&model.biases).enumerate() {
        let mut z = y.dot(&w.t());
        z += b;
        if l < last {
            z.mapv_inplace(f64::tanh);
        }
        acts.push(z.clone());
        y = z;
    }
    ForwardCache { acts }
}

/// Batched input gradient: row `b` holds `dH/d input` at sample `b`.
fn input_grad_batch(model: &HnnModel, cache: &ForwardCache) -> Array2<f64> {
    let n = cache.acts[0].nrows();
    let last = model.n_layers() - 1;
    let mut grad_y = Array2::ones((n, 1));
    for l in (0..model.n_layers()).rev() {
        if l < last {
            let t = &cache.acts[l];
            grad_y.zip_mut_with(t, |g, y| *g *= 1.0 - y * y);
        }
        grad_y = grad_y.dot(&model.weights[l]);
    }
    grad_y
}

/// Loss residual split: value, and `dLoss/d(input gradient)` rows.
fn residual_direction(
    batch: &SampleBatch,
    g: &Array2<f64>,
) -> (f64, Array2<f64>) {
    let n = batch.len() as f64;
    let np = batch.n_params();
    let dof = batch.dof();
    let g_q = g.slice(s![.., np..np + dof]);
    let g_p = g.slice(s![.., np + dof..]);
    let r_q = &g_q + &batch.target_dp;
    let r_p = &g_p - &batch.target_dq;
    let loss = (r_q.iter().map(|v| v * v).sum::<f64>() + r_p.iter().map(|v| v * v).sum::<f64>()) / n;
    let mut v = Array2::zeros(g.raw_dim());
    v.slice_mut(s![.., np..np + dof]).assign(&(&r_q * (2.0 / n)));
    v.slice_mut(s![.., np + dof..]).assign(&(&r_p * (2.0 / n)));
    (loss, v)
}

/// Mean squared violation of Hamilton's equations over the batch.
pub fn loss(model: &HnnModel, batch: &SampleBatch) -> Result<f64> {
    check_batch(model, batch)?;
    let cache = forward_batch(model, &batch.inputs);
    let g = input_grad_batch(model, &cache);
    Ok(residual_direction(batch, &g).0)
}

/// Exact gradient of [`loss`] with respect to every weight and bias.
pub fn loss_gradient(model: &HnnModel, batch: &SampleBatch) -> Result<ParamGrads> {
    Ok(loss_and_gradient(model, batch)?.1)
}

/// [`loss`] and its parameter gradient in one set of passes.
pub fn loss_and_gradient(model: &HnnModel, batch: &SampleBatch) -> Result<(f64, ParamGrads)> {
    check_batch(model, batch)?;
    let x = &batch.inputs;
    let n = batch.len();
    let nl = model.n_layers();
    let last = nl - 1;

    let cache = forward_batch(model, x);
    let g = input_grad_batch(model, &cache);
    let (loss, v) = residual_direction(batch, &g);

    // Forward tangent sweep along v: s[l] is the pre-activation tangent of
    // layer l, u[l] the post-activation tangent.
    let mut ss: Vec<Array2<f64>> = Vec::with_capacity(nl);
    let mut us: Vec<Array2<f64>> = Vec::with_capacity(nl);
    let mut u = v.clone();
    for l in 0..nl {
        let s_l = u.dot(&model.weights[l].t());
        let u_l = if l < last {
            let mut u_l = s_l.clone();
            u_l.zip_mut_with(&cache.acts[l], |s, t| *s *= 1.0 - t * t);
            u_l
        } else {
            s_l.clone()
        };
        ss.push(s_l);
        us.push(u_l.clone());
        u = u_l;
    }

    // Reverse sweep through both the primal and tangent computations,
    // accumulating parameter gradients.
    let mut w_grads: Vec<Array2<f64>> = model.weights.iter().map(|w| Array2::zeros(w.raw_dim())).collect();
    let mut b_grads: Vec<Array1<f64>> = model.biases.iter().map(|b| Array1::zeros(b.raw_dim())).collect();

    let mut ubar = Array2::ones((n, 1));
    let mut ybar = Array2::zeros((n, 1));
    for l in (0..nl).rev() {
        let (sbar, zbar) = if l == last {
            (ubar.clone(), ybar.clone())
        } else {
            let t = &cache.acts[l];
            let mut sbar = ubar.clone();
            sbar.zip_mut_with(t, |s, y| *s *= 1.0 - y * y);
            // zbar = ybar * sigma'(z) + ubar * sigma''(z) * s_l, with
            // sigma' = 1 - t^2 and sigma'' = -2 t (1 - t^2) expressed via t.
            let mut zbar = ybar.clone();
            zbar.zip_mut_with(t, |z, y| *z *= 1.0 - y * y);
            let mut second = ubar;
            second.zip_mut_with(t, |u, y| *u *= -2.0 * y * (1.0 - y * y));
            second.zip_mut_with(&ss[l], |u, s| *u *= s);
            zbar += &second;
            (sbar, zbar)
        };

        {
            let u_prev = if l == 0 { &v } else { &us[l - 1] };
            let y_prev = if l == 0 { x } else { &cache.acts[l - 1] };
            general_mat_mul(1.0, &sbar.t(), u_prev, 1.0, &mut w_grads[l]);
            general_mat_mul(1.0, &zbar.t(), y_prev, 1.0, &mut w_grads[l]);
            b_grads[l] = zbar.sum_axis(Axis(0));
        }

        if l > 0 {
            ubar = sbar.dot(&model.weights[l]);
            ybar = zbar.dot(&model.weights[l]);
        }
    }

    Ok((
        loss,
        ParamGrads {
            weights: w_grads,
            biases: b_grads,
        },
    ))
}

struct Adam {
    m_w: Vec<Array2<f64>>,
    v_w: Vec<Array2<f64>>,
    m_b: Vec<Array1<f64>>,
    v_b: Vec<Array1<f64>>,
    step: usize,
}

impl Adam {
    fn new(model: &HnnModel) -> Self {
        Self {
            m_w: model.weights.iter().map(|w| Array2::zeros(w.raw_dim())).collect(),
            v_w: model.weights.iter().map(|w| Array2::zeros(w.raw_dim())).collect(),
            m_b: model.biases.iter().map(|b| Array1::zeros(b.raw_dim())).collect(),
            v_b: model.biases.iter().map(|b| Array1::zeros(b.raw_dim())).collect(),
            step: 0,
        }
    }

    fn update(&mut self, model: &mut HnnModel, grads: &ParamGrads, cfg: &TrainConfig) {
        self.step += 1;
        let t = self.step as i32;
        let lr_t = cfg.learning_rate * (1.0 - cfg.adam_beta2.powi(t)).sqrt()
            / (1.0 - cfg.adam_beta1.powi(t));
        let (b1, b2, eps) = (cfg.adam_beta1, cfg.adam_beta2, cfg.adam_eps);
        for l in 0..model.n_layers() {
            ndarray::Zip::from(&mut model.weights[l])
                .and(&mut self.m_w[l])
                .and(&mut self.v_w[l])
                .and(&grads.weights[l])
                .for_each(|w, m, v, &g| {
                    *m = b1 * *m + (1.0 - b1) * g;
                    *v = b2 * *v + (1.0 - b2) * g * g;
                    *w -= lr_t * *m / (v.sqrt() + eps);
                });
            ndarray::Zip::from(&mut model.biases[l])
                .and(&mut self.m_b[l])
                .and(&mut self.v_b[l])
                .and(&grads.biases[l])
                .for_each(|w, m, v, &g| {
                    *m = b1 * *m + (1.0 - b1) * g;
                    *v = b2 * *v + (1.0 - b2) * g * g;
                    *w -= lr_t * *m / (v.sqrt() + eps);
                });
        }
    }
}

/// Initialize a model from `init_seed` and fit it to `data` with Adam over
/// shuffled mini-batches. `history` records the mean loss of each epoch.
pub fn train(
    layer_dims: &[usize],
    data: &SampleBatch,
    cfg: &TrainConfig,
    init_seed: u64,
) -> Result<TrainResult> {
    if data.is_empty() {
        return Err(Error::EmptyBatch);
    }
    if cfg.batch_size == 0 || cfg.learning_rate <= 0.0 {
        return Err(Error::ParamOutOfRange(format!(
            "batch_size = {}, learning_rate = {}",
            cfg.batch_size, cfg.learning_rate
        )));
    }
    let mut model = HnnModel::init(layer_dims, init_seed)?;
    check_batch(&model, data)?;

    let mut adam = Adam::new(&model);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut order: Vec<usize> = (0..data.len()).collect();
    let mut history = Vec::with_capacity(cfg.epochs);

    for epoch in 0..cfg.epochs {
        order.shuffle(&mut rng);
        let mut epoch_loss = 0.0;
        for (step, chunk) in order.chunks(cfg.batch_size).enumerate() {
            let batch = data.select(chunk);
            let (l, grads) = loss_and_gradient(&model, &batch)?;
            if !l.is_finite() {
                return Err(Error::TrainingDiverged {
                    epoch,
                    step,
                    loss: l,
                });
            }
            adam.update(&mut model, &grads, cfg);
            epoch_loss += l * chunk.len() as f64;
        }
        history.push(epoch_loss / data.len() as f64);
    }

    Ok(TrainResult { model, history })
}

/// Train one model per dataset in parallel workers; member `i` draws its
/// weight-init and shuffle seeds from `master_seed` so the ensemble is
/// reproducible regardless of scheduling.
pub fn train_ensemble(
    layer_dims: &[usize],
    datasets: &[SampleBatch],
    cfg: &TrainConfig,
    master_seed: u64,
) -> Result<(HnnEnsemble, Vec<Vec<f64>>)> {
    if datasets.is_empty() {
        return Err(Error::EmptyBatch);
    }
    let results: Result<Vec<TrainResult>> = datasets
        .par_iter()
        .enumerate()
        .map(|(i, data)| {
            let mut member_cfg = cfg.clone();
            member_cfg.seed = derive_seed(master_seed, SeedDomain::Shuffle, i as u64);
            let init_seed = derive_seed(master_seed, SeedDomain::ModelInit, i as u64);
            train(layer_dims, data, &member_cfg, init_seed)
        })
        .collect();
    let results = results?;
    let histories = results.iter().map(|r| r.history.clone()).collect();
    let ensemble = HnnEnsemble::new(results.into_iter().map(|r| r.model).collect())?;
    Ok((ensemble, histories))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems::{PhaseState, SystemSpec};
    use rand::Rng;

    fn random_batch(rng: &mut ChaCha8Rng, n: usize, n_params: usize, dof: usize) -> SampleBatch {
        let width = n_params + 2 * dof;
        let inputs = Array2::from_shape_fn((n, width), |_| rng.random_range(-0.8..0.8));
        let dq = Array2::from_shape_fn((n, dof), |_| rng.random_range(-0.8..0.8));
        let dp = Array2::from_shape_fn((n, dof), |_| rng.random_range(-0.8..0.8));
        SampleBatch::new(inputs, dq, dp).unwrap()
    }

    /// Batch whose targets come from the model's own learned field.
    fn self_consistent_batch(model: &HnnModel, rng: &mut ChaCha8Rng, n: usize, n_params: usize) -> SampleBatch {
        let dof = (model.n_inputs() - n_params) / 2;
        let mut inputs = Array2::zeros((n, model.n_inputs()));
        let mut dq = Array2::zeros((n, dof));
        let mut dp = Array2::zeros((n, dof));
        for b in 0..n {
            let row: Vec<f64> = (0..model.n_inputs()).map(|_| rng.random_range(-0.8..0.8)).collect();
            let params = &row[..n_params];
            let state = PhaseState::new(
                row[n_params..n_params + dof].to_vec(),
                row[n_params + dof..].to_vec(),
            )
            .unwrap();
            let vel = model.learned_rhs(params, &state).unwrap();
            for (j, x) in row.iter().enumerate() {
                inputs[[b, j]] = *x;
            }
            for j in 0..dof {
                dq[[b, j]] = vel.dq[j];
                dp[[b, j]] = vel.dp[j];
            }
        }
        SampleBatch::new(inputs, dq, dp).unwrap()
    }

    #[test]
    fn loss_zero_on_self_consistent_targets() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let model = HnnModel::init(&[5, 10, 10, 1], 4).unwrap();
        let batch = self_consistent_batch(&model, &mut rng, 16, 1);
        let l = loss(&model, &batch).unwrap();
        assert!(l < 1e-24, "loss = {l}");
    }

    #[test]
    fn loss_zero_model_cases() {
        let mut m = HnnModel::init(&[4, 6, 1], 0).unwrap();
        for w in &mut m.weights {
            w.fill(0.0);
        }
        // Zero targets: zero loss.
        let batch = SampleBatch::new(Array2::zeros((3, 4)), Array2::zeros((3, 1)), Array2::zeros((3, 1))).unwrap();
        assert_eq!(loss(&m, &batch).unwrap(), 0.0);

        // dof = 2 layout [q1, q2, p1, p2]; target dq = (1, 0) contributes 1.
        let batch = SampleBatch::new(
            Array2::zeros((1, 4)),
            ndarray::array![[1.0, 0.0]],
            ndarray::array![[0.0, 0.0]],
        )
        .unwrap();
        assert_eq!(loss(&m, &batch).unwrap(), 1.0);
    }

    #[test]
    fn loss_rejects_empty_batch() {
        let m = HnnModel::init(&[4, 6, 1], 0).unwrap();
        let batch = SampleBatch::new(Array2::zeros((0, 4)), Array2::zeros((0, 1)), Array2::zeros((0, 1))).unwrap();
        assert!(matches!(loss(&m, &batch), Err(Error::EmptyBatch)));
    }

    #[test]
    fn loss_gradient_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let h = 1e-5;
        for trial in 0..20u64 {
            let model = HnnModel::init(&[3, 8, 8, 1], trial).unwrap();
            let batch = random_batch(&mut rng, 5, 1, 1);
            let grads = loss_gradient(&model, &batch).unwrap();
            for l in 0..model.n_layers() {
                for idx in 0..model.weights[l].len() {
                    let (r, c) = (idx / model.weights[l].ncols(), idx % model.weights[l].ncols());
                    let mut plus = model.clone();
                    let mut minus = model.clone();
                    plus.weights[l][[r, c]] += h;
                    minus.weights[l][[r, c]] -= h;
                    let fd = (loss(&plus, &batch).unwrap() - loss(&minus, &batch).unwrap()) / (2.0 * h);
                    let a = grads.weights[l][[r, c]];
                    let scale = a.abs().max(fd.abs()).max(1e-3);
                    assert!(
                        (a - fd).abs() / scale < 1e-4,
                        "trial {trial} W[{l}][{r},{c}]: {a} vs {fd}"
                    );
                }
                for i in 0..model.biases[l].len() {
                    let mut plus = model.clone();
                    let mut minus = model.clone();
                    plus.biases[l][i] += h;
                    minus.biases[l][i] -= h;
                    let fd = (loss(&plus, &batch).unwrap() - loss(&minus, &batch).unwrap()) / (2.0 * h);
                    let a = grads.biases[l][i];
                    let scale = a.abs().max(fd.abs()).max(1e-3);
                    assert!(
                        (a - fd).abs() / scale < 1e-4,
                        "trial {trial} b[{l}][{i}]: {a} vs {fd}"
                    );
                }
            }
        }
    }

    #[test]
    fn gradient_vanishes_at_zero_loss() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let model = HnnModel::init(&[5, 12, 12, 1], 8).unwrap();
        let batch = self_consistent_batch(&model, &mut rng, 8, 1);
        let grads = loss_gradient(&model, &batch).unwrap();
        let max = grads
            .weights
            .iter()
            .flat_map(|w| w.iter())
            .chain(grads.biases.iter().flat_map(|b| b.iter()))
            .fold(0.0f64, |acc, g| acc.max(g.abs()));
        assert!(max < 1e-12, "max grad {max}");
    }

    #[test]
    fn duplicating_rows_keeps_mean_gradient() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let model = HnnModel::init(&[3, 6, 6, 1], 31).unwrap();
        let batch = random_batch(&mut rng, 4, 1, 1);
        let doubled_idx: Vec<usize> = (0..4).chain(0..4).collect();
        let doubled = batch.select(&doubled_idx);
        let g1 = loss_gradient(&model, &batch).unwrap();
        let g2 = loss_gradient(&model, &doubled).unwrap();
        for l in 0..model.n_layers() {
            let d = (&g1.weights[l] - &g2.weights[l]).iter().map(|v| v.abs()).fold(0.0, f64::max);
            assert!(d < 1e-14, "layer {l}: {d}");
        }
        assert!((loss(&model, &batch).unwrap() - loss(&model, &doubled).unwrap()).abs() < 1e-15);
    }

    /// Rows `[alpha, q, p]` with exact field targets; checks end-to-end
    /// learnability of the true dynamics at small scale.
    fn analytic_training_batch(alpha: f64, n: usize, seed: u64) -> SampleBatch {
        let spec = SystemSpec::henon_heiles(alpha).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut inputs = Array2::zeros((n, 5));
        let mut dq = Array2::zeros((n, 2));
        let mut dp = Array2::zeros((n, 2));
        for b in 0..n {
            let s = spec.sample_state_at_energy(rng.random_range(0.01..1.0 / 6.0), &mut rng).unwrap();
            let vel = spec.analytic_rhs(&s).unwrap();
            inputs[[b, 0]] = alpha;
            for j in 0..2 {
                inputs[[b, 1 + j]] = s.q[j];
                inputs[[b, 3 + j]] = s.p[j];
                dq[[b, j]] = vel.dq[j];
                dp[[b, j]] = vel.dp[j];
            }
        }
        SampleBatch::new(inputs, dq, dp).unwrap()
    }

    #[test]
    fn smoke_training_reduces_loss_tenfold() {
        let data = analytic_training_batch(0.5, 400, 2);
        let cfg = TrainConfig {
            epochs: 150,
            learning_rate: 3e-3,
            batch_size: 64,
            seed: 1,
            ..TrainConfig::default()
        };
        let result = train(&[5, 16, 16, 1], &data, &cfg, 7).unwrap();
        let first = result.history[0];
        let last = *result.history.last().unwrap();
        assert!(last < 0.1 * first, "loss {first} -> {last}");
    }

    #[test]
    fn zero_epochs_returns_initialization() {
        let data = analytic_training_batch(0.5, 32, 3);
        let cfg = TrainConfig {
            epochs: 0,
            ..TrainConfig::default()
        };
        let result = train(&[5, 8, 8, 1], &data, &cfg, 11).unwrap();
        assert_eq!(result.model, HnnModel::init(&[5, 8, 8, 1], 11).unwrap());
        assert!(result.history.is_empty());
    }

    #[test]
    fn training_is_deterministic() {
        let data = analytic_training_batch(0.4, 64, 5);
        let cfg = TrainConfig {
            epochs: 5,
            batch_size: 16,
            seed: 9,
            ..TrainConfig::default()
        };
        let a = train(&[5, 8, 8, 1], &data, &cfg, 13).unwrap();
        let b = train(&[5, 8, 8, 1], &data, &cfg, 13).unwrap();
        assert_eq!(a.model, b.model);
        assert_eq!(a.history, b.history);
    }

    #[test]
    fn ensemble_training_is_scheduling_independent() {
        let datasets: Vec<SampleBatch> = (0..3).map(|i| analytic_training_batch(0.5, 48, i)).collect();
        let cfg = TrainConfig {
            epochs: 3,
            batch_size: 16,
            ..TrainConfig::default()
        };
        let (e1, h1) = train_ensemble(&[5, 8, 8, 1], &datasets, &cfg, 99).unwrap();
        let (e2, h2) = train_ensemble(&[5, 8, 8, 1], &datasets, &cfg, 99).unwrap();
        assert_eq!(h1, h2);
        for (a, b) in e1.members.iter().zip(&e2.members) {
            assert_eq!(a, b);
        }
        // Members differ from each other (different seeds and data).
        assert_ne!(e1.members[0], e1.members[1]);
    }
}
