//! Quantum channel representations and the maps built from them.
//!
//! A channel is stored either as an explicit Kraus list, as a depolarizing
//! channel `S -> (1-q) S + (q/d) tr(S) I`, or as a tensor product of factor
//! channels. Products apply factor-by-factor, so depolarizing products never
//! materialize their (large) joint Kraus list outside of test oracles.

mod choi;
mod random;
mod validate;

pub use choi::ChoiMatrix;
pub use random::sample_kraus_channel_with;
pub use validate::{validate, ValidityReport, CP_TOL, TRACE_PRESERVATION_TOL};

use crate::error::{Error, Result};
use crate::linalg::{
    embed_with_identity, partial_trace, tensor_product, Complex64, ComplexMatrix, SubsetMask,
};

/// Largest factor count accepted by the subset expansion (it sums over all
/// `2^n` subsets).
pub const EXPANSION_CAP_DEFAULT: usize = 10;

/// A completely positive trace-preserving map, in one of three forms.
///
/// Construction only checks shapes and parameter ranges; whether a Kraus list
/// actually is trace-preserving is the job of [`validate`], so that invalid
/// channels can be built on purpose as negative controls.
#[derive(Clone, Debug)]
pub enum QuantumChannel {
    Kraus {
        dim: usize,
        operators: Vec<ComplexMatrix>,
    },
    Depolarizing {
        dim: usize,
        q: f64,
    },
    Product {
        factors: Vec<QuantumChannel>,
    },
}

impl QuantumChannel {
    /// Channel from an explicit Kraus list (nonempty, equal square shapes).
    pub fn kraus(operators: Vec<ComplexMatrix>) -> Result<Self> {
        let dim = operators
            .first()
            .map(|a| a.dim())
            .ok_or_else(|| Error::Invalid("empty Kraus list".into()))?;
        if dim == 0 {
            return Err(Error::Invalid("zero-dimensional Kraus operator".into()));
        }
        for a in &operators {
            if a.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: a.dim(),
                });
            }
        }
        Ok(QuantumChannel::Kraus { dim, operators })
    }

    /// Depolarizing channel with mixing parameter `q` in `[0, 1]`.
    pub fn depolarizing(dim: usize, q: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Invalid("zero-dimensional channel".into()));
        }
        if !(0.0..=1.0).contains(&q) {
            return Err(Error::InvalidMixing { q });
        }
        Ok(QuantumChannel::Depolarizing { dim, q })
    }

    /// Tensor product of factor channels. A single factor collapses to the
    /// factor itself.
    pub fn product(mut factors: Vec<QuantumChannel>) -> Result<Self> {
        match factors.len() {
            0 => Err(Error::Invalid("empty channel product".into())),
            1 => Ok(factors.pop().unwrap()),
            _ => Ok(QuantumChannel::Product { factors }),
        }
    }

    /// Total input/output dimension.
    pub fn dim(&self) -> usize {
        match self {
            QuantumChannel::Kraus { dim, .. } | QuantumChannel::Depolarizing { dim, .. } => *dim,
            QuantumChannel::Product { factors } => factors.iter().map(|f| f.dim()).product(),
        }
    }

    /// Non-product leaf channels, left to right.
    pub fn leaves(&self) -> Vec<&QuantumChannel> {
        match self {
            QuantumChannel::Product { factors } => {
                factors.iter().flat_map(|f| f.leaves()).collect()
            }
            other => vec![other],
        }
    }

    /// Dimensions of the leaf factors.
    pub fn factor_dims(&self) -> Vec<usize> {
        self.leaves().iter().map(|f| f.dim()).collect()
    }

    /// `(dim, q)` per leaf when every leaf is depolarizing.
    pub fn depolarizing_factors(&self) -> Option<Vec<(usize, f64)>> {
        self.leaves()
            .iter()
            .map(|f| match f {
                QuantumChannel::Depolarizing { dim, q } => Some((*dim, *q)),
                _ => None,
            })
            .collect()
    }

    /// Human-readable channel descriptor used in reports.
    pub fn descriptor(&self) -> String {
        match self {
            QuantumChannel::Kraus { dim, operators } => {
                format!("kraus(d={dim}, ops={})", operators.len())
            }
            QuantumChannel::Depolarizing { dim, q } => format!("depolarizing(d={dim}, q={q})"),
            QuantumChannel::Product { factors } => {
                let parts: Vec<String> = factors.iter().map(|f| f.descriptor()).collect();
                format!("product[{}]", parts.join(" (x) "))
            }
        }
    }

    /// Applies the channel to a square matrix of matching dimension.
    ///
    /// The input does not have to be Hermitian or positive; the map is
    /// extended linearly (Choi construction and norm-ratio probes rely on
    /// this).
    pub fn apply(&self, s: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.apply_impl(s, false)
    }

    /// Applies the adjoint map (with respect to the Hilbert-Schmidt inner
    /// product); for a Kraus list this is `X -> sum A_k^* X A_k`.
    pub fn apply_adjoint(&self, s: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.apply_impl(s, true)
    }

    fn apply_impl(&self, s: &ComplexMatrix, adjoint: bool) -> Result<ComplexMatrix> {
        if s.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: s.dim(),
            });
        }
        match self {
            QuantumChannel::Kraus { operators, .. } => Ok(apply_kraus(operators, s, adjoint)),
            QuantumChannel::Depolarizing { dim, q } => Ok(apply_depolarizing(*dim, *q, s)),
            QuantumChannel::Product { .. } => {
                let dims = self.factor_dims();
                let mut out = s.clone();
                for (pos, leaf) in self.leaves().into_iter().enumerate() {
                    out = apply_leaf(leaf, &out, &dims, pos, adjoint)?;
                }
                Ok(out)
            }
        }
    }

    /// Explicit Kraus list for any form. Products expand to all tensor
    /// combinations of factor operators, which grows quickly; this is meant
    /// for small dimensions and cross-checks.
    pub fn kraus_operators(&self) -> Result<Vec<ComplexMatrix>> {
        match self {
            QuantumChannel::Kraus { operators, .. } => Ok(operators.clone()),
            QuantumChannel::Depolarizing { dim, q } => kraus_of_depolarizing(*dim, *q),
            QuantumChannel::Product { factors } => {
                let mut ops = vec![ComplexMatrix::identity(1)];
                for f in factors {
                    let fops = f.kraus_operators()?;
                    let mut next = Vec::with_capacity(ops.len() * fops.len());
                    for a in &ops {
                        for b in &fops {
                            next.push(tensor_product(a, b));
                        }
                    }
                    ops = next;
                }
                Ok(ops)
            }
        }
    }
}

fn apply_kraus(operators: &[ComplexMatrix], s: &ComplexMatrix, adjoint: bool) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(s.dim());
    for a in operators {
        let term = if adjoint {
            a.adjoint().matmul(s).matmul(a)
        } else {
            a.matmul(s).matmul(&a.adjoint())
        };
        out = out.add(&term);
    }
    out
}

fn apply_depolarizing(dim: usize, q: f64, s: &ComplexMatrix) -> ComplexMatrix {
    // Self-adjoint: (1-q) S + (q/d) tr(S) I serves as both map and adjoint.
    let id = ComplexMatrix::identity(dim);
    s.scale_re(1.0 - q)
        .add(&id.scale(s.trace() * (q / dim as f64)))
}

fn apply_leaf(
    leaf: &QuantumChannel,
    s: &ComplexMatrix,
    dims: &[usize],
    pos: usize,
    adjoint: bool,
) -> Result<ComplexMatrix> {
    match leaf {
        QuantumChannel::Depolarizing { q, .. } => {
            let here = SubsetMask::singleton(dims, pos)?;
            let averaged = conditional_expectation(s, &here)?;
            Ok(s.scale_re(1.0 - q).add(&averaged.scale_re(*q)))
        }
        QuantumChannel::Kraus { operators, .. } => {
            let elsewhere = SubsetMask::singleton(dims, pos)?.complement();
            let mut out = ComplexMatrix::zeros(s.dim());
            for a in operators {
                let lifted = embed_with_identity(a, &elsewhere)?;
                let term = if adjoint {
                    lifted.adjoint().matmul(s).matmul(&lifted)
                } else {
                    lifted.matmul(s).matmul(&lifted.adjoint())
                };
                out = out.add(&term);
            }
            Ok(out)
        }
        QuantumChannel::Product { .. } => unreachable!("leaves are not products"),
    }
}

/// Kraus operators of the depolarizing channel, built from the discrete Weyl
/// (shift and clock) unitaries: `sqrt(1 - q + q/d^2) I` together with
/// `(sqrt(q)/d) X^a Z^b` for `(a, b) != (0, 0)`. For `q = 0` the list is
/// just the identity.
pub fn kraus_of_depolarizing(dim: usize, q: f64) -> Result<Vec<ComplexMatrix>> {
    if dim == 0 {
        return Err(Error::Invalid("zero-dimensional channel".into()));
    }
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::InvalidMixing { q });
    }
    let d = dim;
    let id_weight = (1.0 - q + q / (d * d) as f64).sqrt();
    let mut ops = vec![ComplexMatrix::identity(d).scale_re(id_weight)];
    if q == 0.0 {
        return Ok(ops);
    }
    let weyl_weight = q.sqrt() / d as f64;
    let tau = 2.0 * std::f64::consts::PI / d as f64;
    for a in 0..d {
        for b in 0..d {
            if a == 0 && b == 0 {
                continue;
            }
            // X^a Z^b maps |j> to omega^(b j) |j + a mod d>.
            let mut w = ComplexMatrix::zeros(d);
            for j in 0..d {
                let phase = Complex64::from_polar(weyl_weight, tau * (b * j) as f64);
                w.set((j + a) % d, j, phase);
            }
            ops.push(w);
        }
    }
    Ok(ops)
}

/// Conditional expectation onto the factors outside `subset`: traces out the
/// factors in `subset` and re-inserts the normalized identity in their
/// place, preserving factor order.
pub fn conditional_expectation(s: &ComplexMatrix, subset: &SubsetMask) -> Result<ComplexMatrix> {
    let reduced = partial_trace(s, subset)?;
    let embedded = embed_with_identity(&reduced, subset)?;
    Ok(embedded.scale_re(1.0 / subset.sub_dim() as f64))
}

/// Product weights of the subset expansion of a depolarizing product: entry
/// `mask` holds `prod_i (q_i if i in mask else 1 - q_i)`.
pub fn expansion_coefficients(qs: &[f64]) -> Vec<f64> {
    let n = qs.len();
    let mut coeffs = Vec::with_capacity(1 << n);
    for mask in 0u32..(1 << n) {
        let mut w = 1.0;
        for (i, &q) in qs.iter().enumerate() {
            w *= if mask & (1 << i) != 0 { q } else { 1.0 - q };
        }
        coeffs.push(w);
    }
    coeffs
}

/// Applies a product of depolarizing factors through its expansion into
/// conditional expectations: `sum_L w_L E_L(s)` over all factor subsets `L`,
/// in ascending bitmask order.
pub fn expansion_apply(factors: &[QuantumChannel], s: &ComplexMatrix) -> Result<ComplexMatrix> {
    expansion_apply_with_cap(factors, s, EXPANSION_CAP_DEFAULT)
}

/// [`expansion_apply`] with an explicit factor-count cap.
pub fn expansion_apply_with_cap(
    factors: &[QuantumChannel],
    s: &ComplexMatrix,
    cap: usize,
) -> Result<ComplexMatrix> {
    let n = factors.len();
    if n == 0 {
        return Err(Error::Invalid("empty factor list".into()));
    }
    if n > cap {
        return Err(Error::ExpansionCapExceeded { n, cap });
    }
    let mut dims = Vec::with_capacity(n);
    let mut qs = Vec::with_capacity(n);
    for f in factors {
        match f {
            QuantumChannel::Depolarizing { dim, q } => {
                dims.push(*dim);
                qs.push(*q);
            }
            _ => {
                return Err(Error::Invalid(
                    "subset expansion needs depolarizing factors".into(),
                ))
            }
        }
    }
    let total: usize = dims.iter().product();
    if s.dim() != total {
        return Err(Error::DimensionMismatch {
            expected: total,
            got: s.dim(),
        });
    }
    let coeffs = expansion_coefficients(&qs);
    let mut out = ComplexMatrix::zeros(total);
    for (mask, &w) in coeffs.iter().enumerate() {
        if w == 0.0 {
            continue;
        }
        let subset = SubsetMask::new(&dims, mask as u32)?;
        out = out.add(&conditional_expectation(s, &subset)?.scale_re(w));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{hermitian_spectrum, sample_haar_state_with, sample_hermitian_with};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn hs_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> Complex64 {
        a.adjoint().matmul(b).trace()
    }

    #[test]
    fn depolarizing_output_spectrum_on_pure_inputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(51);
        for &d in &[2usize, 3, 4] {
            for &q in &[0.3, 0.7] {
                let ch = QuantumChannel::depolarizing(d, q).unwrap();
                for _ in 0..10 {
                    let psi = sample_haar_state_with(d, &mut rng);
                    let out = ch.apply(&psi.projector()).unwrap();
                    let spec = hermitian_spectrum(&out).unwrap();
                    let top = 1.0 - (d - 1) as f64 * q / d as f64;
                    assert!((spec[0] - top).abs() < 1e-10);
                    for &lam in &spec[1..] {
                        assert!((lam - q / d as f64).abs() < 1e-10);
                    }
                }
            }
        }
    }

    #[test]
    fn depolarizing_fixes_maximally_mixed() {
        let ch = QuantumChannel::depolarizing(3, 0.8).unwrap();
        let mixed = ComplexMatrix::identity(3).scale_re(1.0 / 3.0);
        let out = ch.apply(&mixed).unwrap();
        assert!(out.sub(&mixed).max_abs() < 1e-15);
    }

    #[test]
    fn kraus_list_reproduces_depolarizing() {
        let mut rng = ChaCha8Rng::seed_from_u64(52);
        for &(d, q) in &[(2usize, 0.5), (2, 0.9), (3, 0.5)] {
            let direct = QuantumChannel::depolarizing(d, q).unwrap();
            let kraus = QuantumChannel::kraus(kraus_of_depolarizing(d, q).unwrap()).unwrap();
            for _ in 0..100 {
                let g = sample_hermitian_with(d, &mut rng);
                let rho = g.matmul(&g).scale_re(1.0 / g.matmul(&g).trace().re);
                let a = direct.apply(&rho).unwrap();
                let b = kraus.apply(&rho).unwrap();
                assert!(a.sub(&b).max_abs() < 1e-12);
            }
        }
    }

    #[test]
    fn depolarizing_kraus_completeness() {
        for d in 2..=4usize {
            for &q in &[0.0, 0.3, 1.0] {
                let ops = kraus_of_depolarizing(d, q).unwrap();
                let mut sum = ComplexMatrix::zeros(d);
                for a in &ops {
                    sum = sum.add(&a.adjoint().matmul(a));
                }
                assert!(sum.sub(&ComplexMatrix::identity(d)).max_abs() < 1e-12);
            }
        }
    }

    #[test]
    fn depolarizing_kraus_counts() {
        assert_eq!(kraus_of_depolarizing(2, 0.0).unwrap().len(), 1);
        assert_eq!(kraus_of_depolarizing(2, 0.5).unwrap().len(), 4);
        assert_eq!(kraus_of_depolarizing(3, 0.5).unwrap().len(), 9);
    }

    #[test]
    fn adjoint_satisfies_inner_product_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        let channels = vec![
            QuantumChannel::depolarizing(3, 0.4).unwrap(),
            QuantumChannel::kraus(kraus_of_depolarizing(3, 0.7).unwrap()).unwrap(),
            QuantumChannel::product(vec![
                QuantumChannel::depolarizing(2, 0.3).unwrap(),
                QuantumChannel::depolarizing(3, 0.6).unwrap(),
            ])
            .unwrap(),
        ];
        for ch in channels {
            let d = ch.dim();
            for _ in 0..20 {
                let x = sample_hermitian_with(d, &mut rng);
                let s = sample_hermitian_with(d, &mut rng);
                let lhs = hs_inner(&ch.apply_adjoint(&x).unwrap(), &s);
                let rhs = hs_inner(&x, &ch.apply(&s).unwrap());
                assert!((lhs - rhs).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn product_apply_matches_tensored_kraus_list() {
        let mut rng = ChaCha8Rng::seed_from_u64(54);
        let prod = QuantumChannel::product(vec![
            QuantumChannel::depolarizing(2, 0.3).unwrap(),
            QuantumChannel::depolarizing(3, 0.7).unwrap(),
        ])
        .unwrap();
        let kraus = QuantumChannel::kraus(prod.kraus_operators().unwrap()).unwrap();
        for _ in 0..20 {
            let s = sample_hermitian_with(6, &mut rng);
            let a = prod.apply(&s).unwrap();
            let b = kraus.apply(&s).unwrap();
            assert!(a.sub(&b).max_abs() < 1e-12);
        }
    }

    #[test]
    fn product_of_kraus_leaves_matches_tensored_list() {
        let mut rng = ChaCha8Rng::seed_from_u64(55);
        let f1 = sample_kraus_channel_with(2, 3, &mut rng);
        let f2 = sample_kraus_channel_with(3, 2, &mut rng);
        let prod = QuantumChannel::product(vec![f1, f2]).unwrap();
        let kraus = QuantumChannel::kraus(prod.kraus_operators().unwrap()).unwrap();
        for _ in 0..20 {
            let s = sample_hermitian_with(6, &mut rng);
            assert!(prod.apply(&s).unwrap().sub(&kraus.apply(&s).unwrap()).max_abs() < 1e-12);
        }
    }

    #[test]
    fn conditional_expectation_limits() {
        let mut rng = ChaCha8Rng::seed_from_u64(56);
        let dims = [2usize, 3];
        let s = sample_hermitian_with(6, &mut rng);
        let none = conditional_expectation(&s, &SubsetMask::empty(&dims)).unwrap();
        assert!(none.sub(&s).max_abs() < 1e-15);
        let all = conditional_expectation(&s, &SubsetMask::full(&dims)).unwrap();
        let expect = ComplexMatrix::identity(6).scale(s.trace() * (1.0 / 6.0));
        assert!(all.sub(&expect).max_abs() < 1e-12);
    }

    #[test]
    fn conditional_expectation_on_product_state() {
        let mut rng = ChaCha8Rng::seed_from_u64(57);
        let a = sample_hermitian_with(2, &mut rng);
        let b = sample_hermitian_with(2, &mut rng);
        let s = tensor_product(&a, &b);
        let second = SubsetMask::singleton(&[2, 2], 1).unwrap();
        let out = conditional_expectation(&s, &second).unwrap();
        let expect = tensor_product(
            &a.scale(b.trace() * 0.5),
            &ComplexMatrix::identity(2),
        );
        assert!(out.sub(&expect).max_abs() < 1e-12);
    }

    #[test]
    fn conditional_expectations_project_and_commute() {
        let mut rng = ChaCha8Rng::seed_from_u64(58);
        let dims = [2usize, 2, 3];
        for _ in 0..10 {
            let s = sample_hermitian_with(12, &mut rng);
            for bits_l in 0u32..8 {
                let l = SubsetMask::new(&dims, bits_l).unwrap();
                let once = conditional_expectation(&s, &l).unwrap();
                let twice = conditional_expectation(&once, &l).unwrap();
                assert!(twice.sub(&once).max_abs() < 1e-12);
                assert!((once.trace() - s.trace()).norm() < 1e-12);
                for bits_m in 0u32..8 {
                    let m = SubsetMask::new(&dims, bits_m).unwrap();
                    let lm = conditional_expectation(&once, &m).unwrap();
                    let joint = conditional_expectation(&s, &l.union(&m)).unwrap();
                    assert!(lm.sub(&joint).max_abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn expansion_coefficients_sum_to_one() {
        let qs = [0.3, 0.7, 0.123, 0.9];
        for n in 1..=qs.len() {
            let coeffs = expansion_coefficients(&qs[..n]);
            assert_eq!(coeffs.len(), 1 << n);
            let sum: f64 = coeffs.iter().sum();
            assert!((sum - 1.0).abs() <= 1e-15);
        }
    }

    #[test]
    fn expansion_matches_product_application() {
        let mut rng = ChaCha8Rng::seed_from_u64(59);
        let factors = vec![
            QuantumChannel::depolarizing(2, 0.3).unwrap(),
            QuantumChannel::depolarizing(3, 0.7).unwrap(),
            QuantumChannel::depolarizing(2, 0.5).unwrap(),
        ];
        let prod = QuantumChannel::product(factors.clone()).unwrap();
        for _ in 0..25 {
            let s = sample_hermitian_with(12, &mut rng);
            let via_expansion = expansion_apply(&factors, &s).unwrap();
            let via_product = prod.apply(&s).unwrap();
            assert!(via_expansion.sub(&via_product).max_abs() < 1e-12);
        }
    }

    #[test]
    fn expansion_with_unit_mixing_is_full_average() {
        let mut rng = ChaCha8Rng::seed_from_u64(60);
        let factors = vec![
            QuantumChannel::depolarizing(2, 1.0).unwrap(),
            QuantumChannel::depolarizing(2, 1.0).unwrap(),
        ];
        let s = sample_hermitian_with(4, &mut rng);
        let out = expansion_apply(&factors, &s).unwrap();
        let expect = ComplexMatrix::identity(4).scale(s.trace() * 0.25);
        assert!(out.sub(&expect).max_abs() < 1e-12);
    }

    #[test]
    fn expansion_cap_is_enforced() {
        let factors: Vec<QuantumChannel> = (0..11)
            .map(|_| QuantumChannel::depolarizing(2, 0.5).unwrap())
            .collect();
        let s = ComplexMatrix::identity(1 << 11);
        assert!(matches!(
            expansion_apply(&factors, &s),
            Err(Error::ExpansionCapExceeded { n: 11, cap: 10 })
        ));
    }

    #[test]
    fn constructors_reject_bad_input() {
        assert!(QuantumChannel::kraus(vec![]).is_err());
        assert!(QuantumChannel::depolarizing(2, 1.5).is_err());
        assert!(QuantumChannel::depolarizing(2, -0.1).is_err());
        assert!(QuantumChannel::product(vec![]).is_err());
        let mixed_dims = vec![ComplexMatrix::identity(2), ComplexMatrix::identity(3)];
        assert!(QuantumChannel::kraus(mixed_dims).is_err());
    }

    #[test]
    fn unary_product_collapses() {
        let ch = QuantumChannel::product(vec![QuantumChannel::depolarizing(2, 0.5).unwrap()])
            .unwrap();
        assert!(matches!(ch, QuantumChannel::Depolarizing { .. }));
    }

    #[test]
    fn descriptors_are_stable() {
        let ch = QuantumChannel::product(vec![
            QuantumChannel::depolarizing(2, 0.3).unwrap(),
            QuantumChannel::depolarizing(3, 0.7).unwrap(),
        ])
        .unwrap();
        assert_eq!(
            ch.descriptor(),
            "product[depolarizing(d=2, q=0.3) (x) depolarizing(d=3, q=0.7)]"
        );
    }

    #[test]
    fn apply_rejects_dimension_mismatch() {
        let ch = QuantumChannel::depolarizing(2, 0.5).unwrap();
        let s = ComplexMatrix::identity(3);
        assert!(matches!(
            ch.apply(&s),
            Err(Error::DimensionMismatch { expected: 2, got: 3 })
        ));
    }

    #[test]
    fn trace_is_preserved_by_all_forms() {
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        let channels = vec![
            QuantumChannel::depolarizing(4, 0.6).unwrap(),
            QuantumChannel::kraus(kraus_of_depolarizing(2, 0.2).unwrap()).unwrap(),
            QuantumChannel::product(vec![
                QuantumChannel::depolarizing(2, 0.5).unwrap(),
                QuantumChannel::depolarizing(2, 0.1).unwrap(),
            ])
            .unwrap(),
        ];
        for ch in channels {
            for _ in 0..10 {
                let s = sample_hermitian_with(ch.dim(), &mut rng);
                let out = ch.apply(&s).unwrap();
                assert!((out.trace() - s.trace()).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn weyl_displacement_relation() {
        // sum over all d^2 Weyl conjugations averages to the trace: check via
        // the q = 1 channel, whose Kraus list is exactly the scaled Weyl set.
        let mut rng = ChaCha8Rng::seed_from_u64(62);
        for d in [2usize, 3, 5] {
            let ops = kraus_of_depolarizing(d, 1.0).unwrap();
            let s = sample_hermitian_with(d, &mut rng);
            let mut sum = ComplexMatrix::zeros(d);
            for a in &ops {
                sum = sum.add(&a.matmul(&s).matmul(&a.adjoint()));
            }
            let expect = ComplexMatrix::identity(d).scale(s.trace() * (1.0 / d as f64));
            assert!(sum.sub(&expect).max_abs() < 1e-12);
        }
    }
}
