//! Target Hamiltonian systems: closed-form energies and equations of motion,
//! bounded-motion thresholds, energy-shell initial-condition sampling,
//! fixed-step RK4 integration, and Poincaré sections.
//!
//! All systems use canonical coordinates `(q, p)` with `dq/dt = ∂H/∂p` and
//! `dp/dt = -∂H/∂q`. Energies passed to the sampler are measured above the
//! potential minimum, which makes the cubic-family systems (minimum 0) and the
//! Morse system (minimum -1) share one convention.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Fixed equilibrium position of the Morse potential.
pub const MORSE_X0: f64 = 1.0;

/// Which target Hamiltonian a [`SystemSpec`] describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SystemKind {
    /// Two-dof cubic oscillator with a single nonlinearity parameter `alpha`.
    HenonHeiles,
    /// Same quadratic part with independently weighted cubic terms `(alpha1, alpha2)`.
    AsymmetricHenonHeiles,
    /// One-dof Morse oscillator with stiffness parameter `a` and fixed `x0 = 1`.
    Morse,
}

impl SystemKind {
    /// Number of bifurcation parameters the kind carries.
    pub fn n_params(self) -> usize {
        match self {
            SystemKind::HenonHeiles | SystemKind::Morse => 1,
            SystemKind::AsymmetricHenonHeiles => 2,
        }
    }

    /// Degrees of freedom.
    pub fn dof(self) -> usize {
        match self {
            SystemKind::HenonHeiles | SystemKind::AsymmetricHenonHeiles => 2,
            SystemKind::Morse => 1,
        }
    }
}

/// A target Hamiltonian together with its bifurcation-parameter values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemSpec {
    pub kind: SystemKind,
    pub params: Vec<f64>,
}

/// One point of phase space: positions `q` and conjugate momenta `p`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseState {
    pub q: Vec<f64>,
    pub p: Vec<f64>,
}

/// Phase-space velocity `(dq/dt, dp/dt)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseVelocity {
    pub dq: Vec<f64>,
    pub dp: Vec<f64>,
}

impl PhaseState {
    pub fn new(q: Vec<f64>, p: Vec<f64>) -> Result<Self> {
        if q.len() != p.len() || q.is_empty() {
            return Err(Error::DimensionMismatch {
                expected: q.len(),
                got: p.len(),
                context: "PhaseState q/p lengths",
            });
        }
        Ok(Self { q, p })
    }

    pub fn dof(&self) -> usize {
        self.q.len()
    }

    /// Flat layout `[q..., p...]` used by integrators and chaos diagnostics.
    pub fn to_flat(&self) -> Vec<f64> {
        let mut x = Vec::with_capacity(2 * self.dof());
        x.extend_from_slice(&self.q);
        x.extend_from_slice(&self.p);
        x
    }

    pub fn from_flat(x: &[f64]) -> Self {
        let d = x.len() / 2;
        Self {
            q: x[..d].to_vec(),
            p: x[d..].to_vec(),
        }
    }
}

/// A time-sampled orbit with its sampling step and initial energy.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub states: Vec<PhaseState>,
    pub dt_sample: f64,
    pub t0: f64,
    /// Energy at the initial state (the conserved value for a true system).
    pub energy: f64,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Sample time of state `i`.
    pub fn time(&self, i: usize) -> f64 {
        self.t0 + i as f64 * self.dt_sample
    }

    /// Largest `|h(state) - energy|` along the trajectory.
    pub fn max_energy_drift(&self, h: impl Fn(&PhaseState) -> f64) -> f64 {
        self.states
            .iter()
            .map(|s| (h(s) - self.energy).abs())
            .fold(0.0, f64::max)
    }
}

impl SystemSpec {
    pub fn new(kind: SystemKind, params: Vec<f64>) -> Result<Self> {
        if params.len() != kind.n_params() {
            return Err(Error::DimensionMismatch {
                expected: kind.n_params(),
                got: params.len(),
                context: "SystemSpec parameter count",
            });
        }
        if params.iter().any(|a| !a.is_finite()) {
            return Err(Error::ParamOutOfRange("non-finite parameter".into()));
        }
        Ok(Self { kind, params })
    }

    pub fn henon_heiles(alpha: f64) -> Result<Self> {
        Self::new(SystemKind::HenonHeiles, vec![alpha])
    }

    pub fn asymmetric(alpha1: f64, alpha2: f64) -> Result<Self> {
        Self::new(SystemKind::AsymmetricHenonHeiles, vec![alpha1, alpha2])
    }

    pub fn morse(a: f64) -> Result<Self> {
        Self::new(SystemKind::Morse, vec![a])
    }

    pub fn dof(&self) -> usize {
        self.kind.dof()
    }

    /// Full phase-space dimension `D = 2 * dof`.
    pub fn phase_dim(&self) -> usize {
        2 * self.dof()
    }

    pub fn n_params(&self) -> usize {
        self.kind.n_params()
    }

    /// Cubic-term weights `(c1, c2)` for the cubic-family potentials.
    fn cubic_coeffs(&self) -> (f64, f64) {
        match self.kind {
            SystemKind::HenonHeiles => (self.params[0], self.params[0]),
            SystemKind::AsymmetricHenonHeiles => (self.params[0], self.params[1]),
            SystemKind::Morse => unreachable!("Morse has no cubic form"),
        }
    }

    fn check_dof(&self, got: usize, context: &'static str) -> Result<()> {
        if got != self.dof() {
            return Err(Error::DimensionMismatch {
                expected: self.dof(),
                got,
                context,
            });
        }
        Ok(())
    }

    /// Potential energy `V(q)`.
    pub fn potential(&self, q: &[f64]) -> Result<f64> {
        self.check_dof(q.len(), "potential position")?;
        Ok(self.potential_raw(q))
    }

    pub(crate) fn potential_raw(&self, q: &[f64]) -> f64 {
        match self.kind {
            SystemKind::HenonHeiles | SystemKind::AsymmetricHenonHeiles => {
                let (c1, c2) = self.cubic_coeffs();
                let (q1, q2) = (q[0], q[1]);
                0.5 * (q1 * q1 + q2 * q2) + c1 * q1 * q1 * q2 - c2 / 3.0 * q2 * q2 * q2
            }
            SystemKind::Morse => {
                let a = self.params[0];
                let u = (-a * (q[0] - MORSE_X0)).exp();
                let w = 1.0 - u;
                w * w - 1.0
            }
        }
    }

    /// `dV/dq` written into `out`.
    pub(crate) fn grad_potential_into(&self, q: &[f64], out: &mut [f64]) {
        match self.kind {
            SystemKind::HenonHeiles | SystemKind::AsymmetricHenonHeiles => {
                let (c1, c2) = self.cubic_coeffs();
                let (q1, q2) = (q[0], q[1]);
                out[0] = q1 + 2.0 * c1 * q1 * q2;
                out[1] = q2 + c1 * q1 * q1 - c2 * q2 * q2;
            }
            SystemKind::Morse => {
                let a = self.params[0];
                let u = (-a * (q[0] - MORSE_X0)).exp();
                out[0] = 2.0 * a * u * (1.0 - u);
            }
        }
    }

    /// Total energy `H(q, p)`.
    pub fn total_energy(&self, s: &PhaseState) -> Result<f64> {
        self.check_dof(s.dof(), "total_energy state")?;
        let kinetic: f64 = s.p.iter().map(|p| 0.5 * p * p).sum();
        Ok(kinetic + self.potential_raw(&s.q))
    }

    /// Exact Hamilton's equations of motion at `s`.
    pub fn analytic_rhs(&self, s: &PhaseState) -> Result<PhaseVelocity> {
        self.check_dof(s.dof(), "analytic_rhs state")?;
        let d = self.dof();
        let mut grad = vec![0.0; d];
        self.grad_potential_into(&s.q, &mut grad);
        Ok(PhaseVelocity {
            dq: s.p.clone(),
            dp: grad.iter().map(|g| -g).collect(),
        })
    }

    /// Minimum of the potential over the bounded region (0 for the cubic
    /// family, -1 for Morse).
    pub fn potential_floor(&self) -> f64 {
        match self.kind {
            SystemKind::HenonHeiles | SystemKind::AsymmetricHenonHeiles => 0.0,
            SystemKind::Morse => -1.0,
        }
    }

    /// Energy (value of `H`) above which motion can become unbounded.
    ///
    /// Closed form `1/(6 α²)` for the symmetric system (infinite at `α = 0`),
    /// the lowest numerically-located saddle of `V` for the asymmetric system,
    /// and `0` for Morse (orbits with `H < 0` stay bound in the well).
    pub fn escape_threshold(&self) -> f64 {
        match self.kind {
            SystemKind::HenonHeiles => {
                let a = self.params[0];
                if a == 0.0 {
                    f64::INFINITY
                } else {
                    1.0 / (6.0 * a * a)
                }
            }
            SystemKind::AsymmetricHenonHeiles => lowest_saddle_energy(self.params[0], self.params[1]),
            SystemKind::Morse => 0.0,
        }
    }

    /// Escape threshold measured above the potential minimum; the valid range
    /// for [`SystemSpec::sample_state_at_energy`].
    pub fn escape_threshold_above_min(&self) -> f64 {
        self.escape_threshold() - self.potential_floor()
    }

    /// Draw a random state with energy exactly `energy` above the potential
    /// minimum (`H = energy + potential_floor`).
    ///
    /// Positions are drawn uniformly over the bounded component of the
    /// accessible region; the momentum magnitude is fixed by energy balance
    /// and its direction drawn uniformly.
    pub fn sample_state_at_energy(&self, energy: f64, rng: &mut impl Rng) -> Result<PhaseState> {
        let max = self.escape_threshold_above_min();
        if !(energy > 0.0 && energy < max) {
            return Err(Error::EnergyOutOfRange { energy, max });
        }
        const MAX_ATTEMPTS: usize = 100_000;
        match self.kind {
            SystemKind::HenonHeiles | SystemKind::AsymmetricHenonHeiles => {
                // Along every ray from the origin the first crossing of
                // V = E happens at radius < sqrt(6 E) for this cubic family,
                // so the box below covers the whole bounded component.
                let r = (6.0 * energy).sqrt();
                for _ in 0..MAX_ATTEMPTS {
                    let q = [rng.random_range(-r..r), rng.random_range(-r..r)];
                    let v = self.potential_raw(&q);
                    if v >= energy || !self.segment_below(&q, energy) {
                        continue;
                    }
                    let speed = (2.0 * (energy - v)).sqrt();
                    let phi = rng.random_range(0.0..std::f64::consts::TAU);
                    let p = vec![speed * phi.cos(), speed * phi.sin()];
                    return PhaseState::new(q.to_vec(), p);
                }
                Err(Error::SamplingFailed { attempts: MAX_ATTEMPTS })
            }
            SystemKind::Morse => {
                let a = self.params[0];
                let h_target = energy + self.potential_floor();
                let s = (h_target + 1.0).sqrt();
                let x_lo = MORSE_X0 - (1.0 + s).ln() / a;
                let x_hi = MORSE_X0 - (1.0 - s).ln() / a;
                for _ in 0..MAX_ATTEMPTS {
                    let x = rng.random_range(x_lo..x_hi);
                    let v = self.potential_raw(&[x]);
                    if v >= h_target {
                        continue;
                    }
                    let speed = (2.0 * (h_target - v)).sqrt();
                    let sign = if rng.random_range(0..2u32) == 0 { 1.0 } else { -1.0 };
                    return PhaseState::new(vec![x], vec![sign * speed]);
                }
                Err(Error::SamplingFailed { attempts: MAX_ATTEMPTS })
            }
        }
    }

    /// True if `V` stays below `energy` on the whole segment from the origin
    /// to `q`, i.e. `q` belongs to the bounded component around the origin.
    ///
    /// Along the segment `V(s q) = A s² + B s³` with `A = |q|²/2` and `B` the
    /// cubic part at `q`; the maximum over `s ∈ [0, 1]` is available in closed
    /// form.
    fn segment_below(&self, q: &[f64], energy: f64) -> bool {
        let a = 0.5 * (q[0] * q[0] + q[1] * q[1]);
        let b = self.potential_raw(q) - a;
        if b >= 0.0 {
            return true; // monotone along the segment; V(q) < energy already checked
        }
        let s_star = -2.0 * a / (3.0 * b);
        if s_star >= 1.0 {
            return true;
        }
        // Interior maximum value A s*² / 3.
        a * s_star * s_star / 3.0 < energy
    }

    /// View of this system as an autonomous vector field on flat phase space.
    pub fn field(&self) -> SystemField<'_> {
        SystemField { spec: self }
    }
}

/// An autonomous vector field over flat phase-space coordinates `[q..., p...]`.
pub trait VectorField: Sync {
    /// Full phase-space dimension.
    fn dim(&self) -> usize;
    /// Write `dx/dt` at `x` into `out`.
    fn eval(&self, x: &[f64], out: &mut [f64]);
}

/// The exact vector field of a [`SystemSpec`].
#[derive(Debug, Clone, Copy)]
pub struct SystemField<'a> {
    spec: &'a SystemSpec,
}

impl VectorField for SystemField<'_> {
    fn dim(&self) -> usize {
        self.spec.phase_dim()
    }

    fn eval(&self, x: &[f64], out: &mut [f64]) {
        let d = self.spec.dof();
        out[..d].copy_from_slice(&x[d..]);
        match self.spec.kind {
            SystemKind::HenonHeiles | SystemKind::AsymmetricHenonHeiles => {
                let (c1, c2) = self.spec.cubic_coeffs();
                let (q1, q2) = (x[0], x[1]);
                out[2] = -(q1 + 2.0 * c1 * q1 * q2);
                out[3] = -(q2 + c1 * q1 * q1 - c2 * q2 * q2);
            }
            SystemKind::Morse => {
                let a = self.spec.params[0];
                let u = (-a * (x[0] - MORSE_X0)).exp();
                out[1] = -2.0 * a * u * (1.0 - u);
            }
        }
    }
}

pub(crate) struct Rk4Scratch {
    k1: Vec<f64>,
    k2: Vec<f64>,
    k3: Vec<f64>,
    k4: Vec<f64>,
    tmp: Vec<f64>,
}

impl Rk4Scratch {
    pub(crate) fn new(dim: usize) -> Self {
        Self {
            k1: vec![0.0; dim],
            k2: vec![0.0; dim],
            k3: vec![0.0; dim],
            k4: vec![0.0; dim],
            tmp: vec![0.0; dim],
        }
    }
}

/// One classic fourth-order Runge-Kutta step, in place.
pub(crate) fn rk4_step<F: VectorField + ?Sized>(
    field: &F,
    x: &mut [f64],
    dt: f64,
    s: &mut Rk4Scratch,
) {
    let n = x.len();
    field.eval(x, &mut s.k1);
    for i in 0..n {
        s.tmp[i] = x[i] + 0.5 * dt * s.k1[i];
    }
    field.eval(&s.tmp, &mut s.k2);
    for i in 0..n {
        s.tmp[i] = x[i] + 0.5 * dt * s.k2[i];
    }
    field.eval(&s.tmp, &mut s.k3);
    for i in 0..n {
        s.tmp[i] = x[i] + dt * s.k3[i];
    }
    field.eval(&s.tmp, &mut s.k4);
    for i in 0..n {
        x[i] += dt / 6.0 * (s.k1[i] + 2.0 * s.k2[i] + 2.0 * s.k3[i] + s.k4[i]);
    }
}

/// Integrate `field` from `s0` with fixed-step RK4 at `dt_internal`, keeping
/// every sample spaced `dt_sample` apart (including the initial state).
///
/// `dt_sample` must be a whole multiple of `dt_internal`. `energy` is recorded
/// on the returned trajectory; pass the field's energy at `s0`. A non-finite
/// state aborts integration and returns the finite prefix inside the error.
pub fn integrate<F: VectorField + ?Sized>(
    field: &F,
    s0: &PhaseState,
    dt_internal: f64,
    t_end: f64,
    dt_sample: f64,
    energy: f64,
) -> Result<Trajectory> {
    if !(dt_internal > 0.0 && dt_sample > 0.0 && dt_internal <= dt_sample) {
        return Err(Error::InvalidStep(format!(
            "need 0 < dt_internal <= dt_sample, got {dt_internal} and {dt_sample}"
        )));
    }
    let ratio = dt_sample / dt_internal;
    let steps_per_sample = ratio.round() as usize;
    if (ratio - steps_per_sample as f64).abs() > 1e-9 * ratio {
        return Err(Error::InvalidStep(format!(
            "dt_sample = {dt_sample} is not a whole multiple of dt_internal = {dt_internal}"
        )));
    }
    if 2 * s0.dof() != field.dim() {
        return Err(Error::DimensionMismatch {
            expected: field.dim(),
            got: 2 * s0.dof(),
            context: "integrate initial state",
        });
    }

    let n_out = (t_end / dt_sample + 1e-9).floor().max(0.0) as usize;
    let mut states = Vec::with_capacity(n_out + 1);
    states.push(s0.clone());
    let mut x = s0.to_flat();
    let mut scratch = Rk4Scratch::new(field.dim());

    for i in 1..=n_out {
        for sub in 0..steps_per_sample {
            rk4_step(field, &mut x, dt_internal, &mut scratch);
            if x.iter().any(|v| !v.is_finite()) {
                let t = ((i - 1) * steps_per_sample + sub + 1) as f64 * dt_internal;
                return Err(Error::TruncatedTrajectory {
                    t,
                    partial: Box::new(Trajectory {
                        states,
                        dt_sample,
                        t0: 0.0,
                        energy,
                    }),
                });
            }
        }
        states.push(PhaseState::from_flat(&x));
    }

    Ok(Trajectory {
        states,
        dt_sample,
        t0: 0.0,
        energy,
    })
}

/// Which way an orbit must pierce the section plane for a crossing to count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CrossingDirection {
    /// Section coordinate increasing (conjugate momentum positive).
    #[default]
    Positive,
    Negative,
    Both,
}

/// Poincaré surface of section of a two-dof trajectory.
///
/// Returns the other dof's `(q, p)` pair, linearly interpolated between the
/// bracketing samples, at each directed crossing of
/// `q[coordinate_index] = crossing_value`.
pub fn poincare_section(
    traj: &Trajectory,
    coordinate_index: usize,
    crossing_value: f64,
    direction: CrossingDirection,
) -> Result<Vec<(f64, f64)>> {
    let dof = traj.states.first().map_or(0, PhaseState::dof);
    if dof != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: dof,
            context: "poincare_section degrees of freedom",
        });
    }
    if coordinate_index >= 2 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            got: coordinate_index,
            context: "poincare_section coordinate index",
        });
    }
    let other = 1 - coordinate_index;
    let mut points = Vec::new();
    for w in traj.states.windows(2) {
        let s0 = w[0].q[coordinate_index] - crossing_value;
        let s1 = w[1].q[coordinate_index] - crossing_value;
        let upward = s0 < 0.0 && s1 >= 0.0;
        let downward = s0 > 0.0 && s1 <= 0.0;
        let counted = match direction {
            CrossingDirection::Positive => upward,
            CrossingDirection::Negative => downward,
            CrossingDirection::Both => upward || downward,
        };
        if !counted {
            continue;
        }
        let theta = s0 / (s0 - s1);
        let q = w[0].q[other] + theta * (w[1].q[other] - w[0].q[other]);
        let p = w[0].p[other] + theta * (w[1].p[other] - w[0].p[other]);
        points.push((q, p));
    }
    Ok(points)
}

/// Locate the lowest saddle energy of the asymmetric cubic potential by
/// Newton iteration on `∇V = 0` from a ring of starting points, keeping
/// critical points whose Hessian is indefinite.
fn lowest_saddle_energy(a1: f64, a2: f64) -> f64 {
    if a1 <= 0.0 && a2 <= 0.0 {
        return f64::INFINITY;
    }
    let spec = SystemSpec {
        kind: SystemKind::AsymmetricHenonHeiles,
        params: vec![a1, a2],
    };
    let scale = 1.0 / a1.max(a2).max(1e-3);
    let mut best = f64::INFINITY;
    for ir in 1..=4 {
        let radius = 0.5 * ir as f64 * scale;
        for ia in 0..24 {
            let phi = std::f64::consts::TAU * ia as f64 / 24.0;
            let mut q = [radius * phi.cos(), radius * phi.sin()];
            let mut converged = false;
            for _ in 0..80 {
                let g = [
                    q[0] + 2.0 * a1 * q[0] * q[1],
                    q[1] + a1 * q[0] * q[0] - a2 * q[1] * q[1],
                ];
                if g[0].hypot(g[1]) < 1e-13 {
                    converged = true;
                    break;
                }
                // Hessian of V.
                let (hxx, hxy, hyy) = (1.0 + 2.0 * a1 * q[1], 2.0 * a1 * q[0], 1.0 - 2.0 * a2 * q[1]);
                let det = hxx * hyy - hxy * hxy;
                if det.abs() < 1e-14 {
                    break;
                }
                q[0] -= (hyy * g[0] - hxy * g[1]) / det;
                q[1] -= (hxx * g[1] - hxy * g[0]) / det;
                if !q[0].is_finite() || !q[1].is_finite() || q[0].hypot(q[1]) > 100.0 * scale {
                    break;
                }
            }
            if !converged {
                continue;
            }
            let (hxx, hxy, hyy) = (1.0 + 2.0 * a1 * q[1], 2.0 * a1 * q[0], 1.0 - 2.0 * a2 * q[1]);
            if hxx * hyy - hxy * hxy < -1e-12 {
                let v = spec.potential_raw(&q);
                if v > 1e-12 && v < best {
                    best = v;
                }
            }
        }
    }
    best
}
