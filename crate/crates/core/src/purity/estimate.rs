//! Lower-bound estimator for q -> p operator norms on Hermitian inputs.
//!
//! The iteration alternates the same gradient pullback as the pure-state
//! ascent with a dual step: for a pulled-back Hermitian `G`, the maximizer
//! of `<G, A>` over the Hermitian `|A|_q` unit ball is
//! `sign(G) |G|^(q*-1)` renormalized, where `q*` is the conjugate exponent
//! (`q = 1` gives the signed projector onto the top eigenspace, recovering
//! the pure-state iteration). Every iterate is a feasible input whose ratio
//! is evaluated directly, so the running best is always a true lower bound
//! on the norm.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::ascent::{gradient_weights, AscentOptions};
use crate::channels::QuantumChannel;
use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_eig, sample_hermitian_with, schatten_norm_of_values, ComplexMatrix, HermitianEig,
    NormOrder,
};

fn conjugate_order(q: NormOrder) -> NormOrder {
    match q {
        NormOrder::Finite(1.0) => NormOrder::Infinity,
        NormOrder::Finite(v) => NormOrder::Finite(v / (v - 1.0)),
        NormOrder::Infinity => NormOrder::Finite(1.0),
    }
}

/// Maximizer of `<G, A>` over `|A|_q = 1`, assembled on the eigenbasis of
/// `G` and normalized exactly on its weight vector. Returns `None` when `G`
/// vanishes.
fn dual_step(eig: &HermitianEig, q: NormOrder) -> Option<ComplexMatrix> {
    let weights = gradient_weights(&eig.values, conjugate_order(q));
    let norm = schatten_norm_of_values(&weights, q);
    if norm == 0.0 {
        return None;
    }
    let scaled: Vec<f64> = weights.iter().map(|w| w / norm).collect();
    Some(eig.assemble_weights(&scaled))
}

/// Estimates `sup |Phi(A)|_p / |A|_q` over nonzero Hermitian `A` by
/// multi-start alternating ascent, for `1 <= q <= p`.
///
/// Returns the best directly evaluated ratio, which is therefore a lower
/// bound on the true norm (up to roundoff).
pub fn norm_q_to_p_estimate(
    channel: &QuantumChannel,
    q: NormOrder,
    p: NormOrder,
    opts: &AscentOptions,
) -> Result<f64> {
    if q.value() > p.value() {
        return Err(Error::Invalid(format!(
            "norm orders must satisfy q <= p, got q = {q} and p = {p}"
        )));
    }
    if opts.restarts == 0 {
        return Err(Error::Invalid("restarts must be at least 1".into()));
    }
    let d = channel.dim();
    let mut best = 0.0f64;
    for r in 0..opts.restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        rng.set_stream(r as u64);
        let raw = sample_hermitian_with(d, &mut rng);
        let norm0 = schatten_norm_of_values(&hermitian_eig(&raw)?.values, q);
        if norm0 == 0.0 {
            continue;
        }
        let mut a = raw.scale_re(1.0 / norm0);
        let mut prev = f64::NEG_INFINITY;
        for _ in 0..opts.max_iterations {
            let out = channel.apply(&a)?.hermitized();
            let out_eig = hermitian_eig(&out)?;
            let ratio = schatten_norm_of_values(&out_eig.values, p);
            best = best.max(ratio);
            if (ratio - prev).abs() < opts.tolerance {
                break;
            }
            prev = ratio;
            let grad = out_eig.assemble_weights(&gradient_weights(&out_eig.values, p));
            if grad.max_abs() == 0.0 {
                break;
            }
            let pulled = channel.apply_adjoint(&grad)?.hermitized();
            match dual_step(&hermitian_eig(&pulled)?, q) {
                Some(next) => a = next,
                None => break,
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::super::{closed_form_nu_p, maximize_output_norm};
    use super::*;

    fn opts() -> AscentOptions {
        AscentOptions {
            restarts: 8,
            ..AscentOptions::with_seed(3)
        }
    }

    #[test]
    fn identity_channel_has_unit_norm_at_equal_orders() {
        let ch = QuantumChannel::depolarizing(3, 0.0).unwrap();
        for q in [NormOrder::new(2.0).unwrap(), NormOrder::infinity()] {
            let est = norm_q_to_p_estimate(&ch, q, q, &opts()).unwrap();
            assert!((est - 1.0).abs() < 1e-9, "{est}");
        }
    }

    #[test]
    fn trace_to_p_estimate_matches_pure_state_value() {
        let ch = QuantumChannel::depolarizing(2, 0.5).unwrap();
        let cases = [
            (NormOrder::infinity(), 0.75),
            (NormOrder::new(2.0).unwrap(), 0.625_f64.sqrt()),
        ];
        for &(p, expect) in &cases {
            let est = norm_q_to_p_estimate(&ch, NormOrder::one(), p, &opts()).unwrap();
            assert!((est - expect).abs() < 1e-6, "p = {p}: {est} vs {expect}");
        }
    }

    #[test]
    fn trace_to_p_agrees_with_optimizer_on_products() {
        let ch = QuantumChannel::product(vec![
            QuantumChannel::depolarizing(2, 0.3).unwrap(),
            QuantumChannel::depolarizing(2, 0.6).unwrap(),
        ])
        .unwrap();
        let p = NormOrder::new(3.0).unwrap();
        let nu = maximize_output_norm(&ch, p, &opts()).unwrap().nu_p;
        let est = norm_q_to_p_estimate(&ch, NormOrder::one(), p, &opts()).unwrap();
        assert!((est - nu).abs() < 1e-6, "estimate {est} vs nu {nu}");
    }

    #[test]
    fn wider_input_ball_never_shrinks_the_norm() {
        // |A|_q <= |A|_1 for q >= 1, so the q -> p norm dominates the
        // 1 -> p norm; rank-one inputs are shared feasible points.
        let ch = QuantumChannel::depolarizing(3, 0.5).unwrap();
        let p = NormOrder::new(2.5).unwrap();
        let nu = closed_form_nu_p(3, 0.5, p).unwrap();
        let est =
            norm_q_to_p_estimate(&ch, NormOrder::new(1.5).unwrap(), p, &opts()).unwrap();
        assert!(est >= nu - 1e-9, "estimate {est} below nu {nu}");
    }

    #[test]
    fn rejects_orders_out_of_range() {
        let ch = QuantumChannel::depolarizing(2, 0.5).unwrap();
        assert!(norm_q_to_p_estimate(
            &ch,
            NormOrder::new(3.0).unwrap(),
            NormOrder::new(2.0).unwrap(),
            &opts()
        )
        .is_err());
        assert!(norm_q_to_p_estimate(
            &ch,
            NormOrder::infinity(),
            NormOrder::new(2.0).unwrap(),
            &opts()
        )
        .is_err());
    }
}
