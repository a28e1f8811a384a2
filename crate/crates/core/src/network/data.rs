//! Training-set construction from integrated trajectories.

use ndarray::Array2;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::network::SampleBatch;
use crate::seeds::{derive_seed, SeedDomain};
use crate::systems::{integrate, SystemKind, SystemSpec, Trajectory};

/// Interior samples of a trajectory with central-difference time derivatives.
#[derive(Debug, Clone)]
pub struct DerivativeTargets {
    /// `[q, p]` rows, one per interior sample.
    pub qp: Array2<f64>,
    pub dq_dt: Array2<f64>,
    pub dp_dt: Array2<f64>,
}

/// Estimate `d(q, p)/dt` at the interior samples of `traj` by central
/// differences; the two endpoint samples are dropped.
pub fn derivative_targets(traj: &Trajectory) -> Result<DerivativeTargets> {
    let n = traj.len();
    if n < 3 {
        return Err(Error::TrajectoryTooShort { need: 3, got: n });
    }
    let dof = traj.states[0].dof();
    let rows = n - 2;
    let mut qp = Array2::zeros((rows, 2 * dof));
    let mut dq = Array2::zeros((rows, dof));
    let mut dp = Array2::zeros((rows, dof));
    let scale = 1.0 / (2.0 * traj.dt_sample);
    for i in 1..n - 1 {
        let r = i - 1;
        let (prev, here, next) = (&traj.states[i - 1], &traj.states[i], &traj.states[i + 1]);
        for j in 0..dof {
            qp[[r, j]] = here.q[j];
            qp[[r, dof + j]] = here.p[j];
            dq[[r, j]] = (next.q[j] - prev.q[j]) * scale;
            dp[[r, j]] = (next.p[j] - prev.p[j]) * scale;
        }
    }
    Ok(DerivativeTargets { qp, dq_dt: dq, dp_dt: dp })
}

/// Settings for [`build_training_set`].
#[derive(Debug, Clone)]
pub struct DataConfig {
    pub kind: SystemKind,
    /// Parameter vectors to sample trajectories at.
    pub alphas: Vec<Vec<f64>>,
    pub energies_per_alpha: usize,
    pub orbits_per_energy: usize,
    pub t_end: f64,
    pub dt_sample: f64,
    pub dt_internal: f64,
}

impl DataConfig {
    pub fn new(kind: SystemKind, alphas: Vec<Vec<f64>>) -> Self {
        Self {
            kind,
            alphas,
            energies_per_alpha: 7,
            orbits_per_energy: 1,
            t_end: 1000.0,
            dt_sample: 0.1,
            dt_internal: 0.01,
        }
    }
}

/// Energy ladder (measured above the potential minimum) used for training
/// orbits: `m` equally spaced values up to the bounded-motion cap.
pub fn training_energies(spec: &SystemSpec, m: usize) -> Vec<f64> {
    let cap = match spec.kind {
        SystemKind::Morse => 0.9,
        _ => (1.0 / 6.0).min(spec.escape_threshold_above_min() * (1.0 - 1e-9)),
    };
    (1..=m).map(|k| cap * k as f64 / m as f64).collect()
}

/// Seed for the orbit at `(member, alpha_index, energy_index, replica)`;
/// shared by the library and the experiment driver so manifests can list it.
pub fn orbit_seed(master: u64, member: u64, alpha_idx: u64, energy_idx: u64, replica: u64) -> u64 {
    let packed = (member << 48) | (alpha_idx << 32) | (energy_idx << 16) | replica;
    derive_seed(master, SeedDomain::TrainingData, packed)
}

fn check_training_params(kind: SystemKind, alpha: &[f64]) -> Result<()> {
    let ok = match kind {
        SystemKind::HenonHeiles | SystemKind::AsymmetricHenonHeiles => {
            alpha.iter().all(|a| (0.0..=1.0).contains(a))
        }
        SystemKind::Morse => alpha.iter().all(|a| *a > 0.0),
    };
    if ok {
        Ok(())
    } else {
        Err(Error::ParamOutOfRange(format!(
            "{alpha:?} is outside the training range for {kind:?}"
        )))
    }
}

/// Integrate one bounded orbit per `(alpha, energy, replica)` task and stack
/// the interior samples into `[alpha, q, p]` rows with central-difference
/// targets.
pub fn build_training_set(cfg: &DataConfig, master_seed: u64, member: u64) -> Result<SampleBatch> {
    let mut input_rows: Vec<f64> = Vec::new();
    let mut dq_rows: Vec<f64> = Vec::new();
    let mut dp_rows: Vec<f64> = Vec::new();
    let mut n_rows = 0usize;
    let mut dof = 0usize;
    let mut width = 0usize;

    for (ai, alpha) in cfg.alphas.iter().enumerate() {
        check_training_params(cfg.kind, alpha)?;
        let spec = SystemSpec::new(cfg.kind, alpha.clone())?;
        dof = spec.dof();
        width = alpha.len() + 2 * dof;
        let energies = training_energies(&spec, cfg.energies_per_alpha);
        for (ei, &energy) in energies.iter().enumerate() {
            for rep in 0..cfg.orbits_per_energy {
                let seed = orbit_seed(master_seed, member, ai as u64, ei as u64, rep as u64);
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let ic = spec.sample_state_at_energy(energy, &mut rng)?;
                let h0 = spec.total_energy(&ic)?;
                let traj = integrate(&spec.field(), &ic, cfg.dt_internal, cfg.t_end, cfg.dt_sample, h0)?;
                let targets = derivative_targets(&traj)?;
                for r in 0..targets.qp.nrows() {
                    input_rows.extend_from_slice(alpha);
                    for j in 0..2 * dof {
                        input_rows.push(targets.qp[[r, j]]);
                    }
                    for j in 0..dof {
                        dq_rows.push(targets.dq_dt[[r, j]]);
                        dp_rows.push(targets.dp_dt[[r, j]]);
                    }
                }
                n_rows += targets.qp.nrows();
            }
        }
    }

    if n_rows == 0 {
        return Err(Error::EmptyBatch);
    }
    SampleBatch::new(
        Array2::from_shape_vec((n_rows, width), input_rows).expect("row layout"),
        Array2::from_shape_vec((n_rows, dof), dq_rows).expect("row layout"),
        Array2::from_shape_vec((n_rows, dof), dp_rows).expect("row layout"),
    )
}
