//! Multi-start fixed-point ascent for the maximal output p-norm.
//!
//! The iteration alternates two exact steps. Given a pure input `psi`, the
//! output `B = Phi(|psi><psi|)` is diagonalized and the objective
//! `|B|_p` recorded. The gradient of `tr |X|^p` at `B` is (up to the factor
//! `p`) `sign(B) |B|^(p-1)`, evaluated on the eigenbasis of `B`; pulling it
//! back through the adjoint channel gives a Hermitian `G` whose top
//! eigenvector is the pure state maximizing the linearized objective. Since
//! `rho -> tr |Phi(rho)|^p` is convex, replacing `psi` by that eigenvector
//! never decreases the objective, so the ascent is monotone and converges to
//! a fixed point; restarts from independent Haar samples guard against
//! landing on a non-global one.
//!
//! `p = inf` uses the signed projector onto the top eigenspace as the
//! "power", and `p = 1` degenerates to subgradient ascent on the trace norm
//! (only reached for maps that fail validation; valid channels short-circuit
//! to the exact value 1).

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::channels::{validate, QuantumChannel};
use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_eig, sample_unit_vector_with, schatten_norm, schatten_norm_of_values, Complex64,
    ComplexMatrix, HermitianEig, NormOrder, PureState,
};

/// Options for the multi-start ascent.
#[derive(Clone, Debug, Serialize)]
pub struct AscentOptions {
    /// Independent Haar-seeded starting points.
    pub restarts: u32,
    /// Iteration cap per restart.
    pub max_iterations: u32,
    /// Convergence threshold on the objective change.
    pub tolerance: f64,
    /// Base seed; restart `r` draws from ChaCha8 stream `r` of this seed.
    pub seed: u64,
}

impl AscentOptions {
    pub fn with_seed(seed: u64) -> Self {
        AscentOptions {
            restarts: 64,
            max_iterations: 1000,
            tolerance: 1e-12,
            seed,
        }
    }
}

impl Default for AscentOptions {
    fn default() -> Self {
        Self::with_seed(0)
    }
}

/// Result of a purity maximization.
#[derive(Clone, Debug, Serialize)]
pub struct PurityReport {
    pub channel: String,
    pub p: NormOrder,
    /// Best output norm found; recomputed from `maximizer` after the search.
    pub nu_p: f64,
    pub maximizer: PureState,
    /// Closed-form value when every factor is depolarizing.
    pub closed_form: Option<f64>,
    /// Restarts actually run (0 when the value is known exactly upfront).
    pub restarts: u32,
    /// Objective evaluations per restart.
    pub iterations: Vec<u32>,
    /// Whether the winning restart met the tolerance within the cap.
    pub converged: bool,
    pub restarts_converged: u32,
    /// Objective values along the winning restart.
    pub ascent_trace: Vec<f64>,
    /// Most negative objective step observed across restarts
    /// (monotonicity check; 0 when every step increased).
    pub min_step_delta: f64,
}

struct RestartOutcome {
    objective: f64,
    state: Vec<Complex64>,
    iterations: u32,
    converged: bool,
    trace: Vec<f64>,
    min_step_delta: f64,
}

/// Deterministic principal eigenvector: among the eigenvectors tied (within
/// a relative `1e-12` window) for the top eigenvalue, picks the one whose
/// absolute-amplitude pattern is lexicographically largest, then rotates the
/// phase so the first nonnegligible amplitude is positive real.
fn principal_direction(eig: &HermitianEig) -> Vec<Complex64> {
    let top = eig.values[0];
    let window = 1e-12 * top.abs().max(1.0);
    let mut best: Option<Vec<Complex64>> = None;
    for (k, &lam) in eig.values.iter().enumerate() {
        if top - lam > window {
            break;
        }
        let v = canonical_phase(eig.vector(k));
        best = Some(match best {
            None => v,
            Some(b) => {
                if abs_pattern_greater(&v, &b) {
                    v
                } else {
                    b
                }
            }
        });
    }
    normalized(best.expect("nonempty spectrum"))
}

fn canonical_phase(mut v: Vec<Complex64>) -> Vec<Complex64> {
    if let Some(first) = v.iter().find(|c| c.norm() > 1e-12) {
        let phase = first.conj() / first.norm();
        for c in v.iter_mut() {
            *c *= phase;
        }
    }
    v
}

fn abs_pattern_greater(a: &[Complex64], b: &[Complex64]) -> bool {
    for (x, y) in a.iter().zip(b) {
        let (nx, ny) = (x.norm(), y.norm());
        if nx != ny {
            return nx > ny;
        }
    }
    false
}

fn normalized(mut v: Vec<Complex64>) -> Vec<Complex64> {
    let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    for c in v.iter_mut() {
        *c /= norm;
    }
    v
}

/// `sign(lambda) |lambda|^(p-1)` per eigenvalue, with magnitudes scaled by
/// the largest one: the overall scale cancels wherever these weights are
/// used (eigenvector extraction or renormalization) and the scaling keeps
/// large powers finite. For `p = inf` the power collapses to a signed
/// indicator of the top-magnitude eigenspace.
pub(crate) fn gradient_weights(values: &[f64], p: NormOrder) -> Vec<f64> {
    let scale = values.iter().map(|v| v.abs()).fold(0.0, f64::max);
    if scale == 0.0 {
        return vec![0.0; values.len()];
    }
    match p {
        NormOrder::Infinity => {
            let window = 1e-12 * scale;
            values
                .iter()
                .map(|&lam| {
                    if scale - lam.abs() <= window {
                        lam.signum()
                    } else {
                        0.0
                    }
                })
                .collect()
        }
        NormOrder::Finite(pv) => values
            .iter()
            .map(|&lam| {
                if lam == 0.0 {
                    0.0
                } else {
                    lam.signum() * (lam.abs() / scale).powf(pv - 1.0)
                }
            })
            .collect(),
    }
}

fn gradient_matrix(eig: &HermitianEig, p: NormOrder) -> ComplexMatrix {
    eig.assemble_weights(&gradient_weights(&eig.values, p))
}

fn run_restart(
    channel: &QuantumChannel,
    p: NormOrder,
    opts: &AscentOptions,
    start: Vec<Complex64>,
) -> Result<RestartOutcome> {
    let mut psi = start;
    let mut prev = f64::NEG_INFINITY;
    let mut trace = Vec::new();
    let mut min_step_delta = 0.0f64;
    let mut converged = false;
    for _ in 0..opts.max_iterations {
        let rho = ComplexMatrix::outer(&psi, &psi);
        let out = channel.apply(&rho)?.hermitized();
        let eig = hermitian_eig(&out)?;
        let objective = schatten_norm_of_values(&eig.values, p);
        if !trace.is_empty() {
            min_step_delta = min_step_delta.min(objective - prev);
        }
        trace.push(objective);
        if trace.len() > 1 && (objective - prev).abs() < opts.tolerance {
            converged = true;
            break;
        }
        prev = objective;
        let grad = gradient_matrix(&eig, p);
        if grad.max_abs() == 0.0 {
            break; // objective is exactly zero; nothing to ascend
        }
        let pulled = channel.apply_adjoint(&grad)?.hermitized();
        psi = principal_direction(&hermitian_eig(&pulled)?);
    }
    Ok(RestartOutcome {
        objective: *trace.last().expect("at least one evaluation"),
        state: psi,
        iterations: trace.len() as u32,
        converged,
        trace,
        min_step_delta,
    })
}

/// Maximizes `|Phi(|psi><psi|)|_p` over pure inputs by multi-start
/// fixed-point ascent.
///
/// The reported `nu_p` is recomputed from the reported maximizer, so
/// `schatten_norm(channel.apply(maximizer.projector()), p)` reproduces it
/// exactly. For `p = 1` on a channel that passes validation the value is 1
/// for every input, so no search is run.
pub fn maximize_output_norm(
    channel: &QuantumChannel,
    p: NormOrder,
    opts: &AscentOptions,
) -> Result<PurityReport> {
    if opts.restarts == 0 {
        return Err(Error::Invalid("restarts must be at least 1".into()));
    }
    if !opts.tolerance.is_finite() || opts.tolerance <= 0.0 {
        return Err(Error::Invalid("tolerance must be positive".into()));
    }
    let dims = channel.factor_dims();
    let closed_form = channel
        .depolarizing_factors()
        .map(|factors| super::closed_form_product_nu_p(&factors, p))
        .transpose()?;

    if p.is_one() && validate(channel)?.passes {
        // trace preservation makes the trace norm of every output state 1
        let maximizer = PureState::basis_state(&dims, 0);
        return Ok(PurityReport {
            channel: channel.descriptor(),
            p,
            nu_p: 1.0,
            maximizer,
            closed_form,
            restarts: 0,
            iterations: vec![],
            converged: true,
            restarts_converged: 0,
            ascent_trace: vec![1.0],
            min_step_delta: 0.0,
        });
    }

    let d = channel.dim();
    let mut best: Option<RestartOutcome> = None;
    let mut iterations = Vec::with_capacity(opts.restarts as usize);
    let mut restarts_converged = 0u32;
    let mut min_step_delta = 0.0f64;
    for r in 0..opts.restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        rng.set_stream(r as u64);
        let start = sample_unit_vector_with(d, &mut rng);
        let outcome = run_restart(channel, p, opts, start)?;
        iterations.push(outcome.iterations);
        restarts_converged += outcome.converged as u32;
        min_step_delta = min_step_delta.min(outcome.min_step_delta);
        best = Some(match best {
            None => outcome,
            Some(b) => {
                if outcome.objective > b.objective {
                    outcome
                } else {
                    b
                }
            }
        });
    }
    let best = best.expect("at least one restart");
    let maximizer = PureState::new(normalized(best.state), dims)?;
    let nu_p = schatten_norm(&channel.apply(&maximizer.projector())?.hermitized(), p)?;
    Ok(PurityReport {
        channel: channel.descriptor(),
        p,
        nu_p,
        maximizer,
        closed_form,
        restarts: opts.restarts,
        iterations,
        converged: best.converged,
        restarts_converged,
        ascent_trace: best.trace,
        min_step_delta,
    })
}
