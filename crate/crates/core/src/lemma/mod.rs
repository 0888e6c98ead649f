//! Trace estimates for products of operators that each act on only part of a
//! tensor product.
//!
//! The objects here are operators of the form `A = B (x) I`, where `B` acts on
//! a subset of the tensor factors (kept in their original positions) and the
//! identity fills the rest.  Three tools are built on that shape:
//!
//! * [`check_trace_bound`] — for operators `A_1, ..., A_m` of this form,
//!   `|Tr(A_1 ... A_m)|` is at most the dimension of the factors on which
//!   *every* operator is the identity, times the product of the trace norms of
//!   the acting parts.
//! * [`build_pair_permutation`] — the combinatorial map underlying the bound:
//!   on the set of (operator, factor) pairs where the operator acts
//!   nontrivially, send `(k, s)` to `(k', s)` with `k'` the next operator
//!   after `k` (cyclically) acting on factor `s`.  It is a factor-preserving
//!   bijection whenever no factor is shared by every identity subset.
//! * [`verify_cs_identity`] — for rank-one acting parts `|a_k><b_k|`, the
//!   trace of the product expands as a single sum over one index per
//!   (operator, factor) pair, with the bra amplitudes read through the pair
//!   permutation.  Cauchy-Schwarz on that sum gives the trace bound, so
//!   checking the expansion against the directly computed trace exercises the
//!   whole chain.

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{
    embed_with_identity, hermitian_spectrum, vec_norm, Complex64, ComplexMatrix, SubsetMask,
    UNIT_NORM_TOL,
};

mod generate;

pub use generate::{sample_bound_instance, sample_cs_instance, InstanceConfig};

/// Additive slack allowed when testing the trace bound numerically.
pub const TRACE_BOUND_TOL: f64 = 1e-10;

/// Agreement required between the multi-index expansion and the direct trace.
pub const CS_IDENTITY_TOL: f64 = 1e-10;

/// Tolerance on the amplitude-square sums checked by [`verify_cs_identity`].
pub const NORM_SUM_TOL: f64 = 1e-12;

/// Default ceiling on the multi-index space enumerated by
/// [`verify_cs_identity`].
pub const MULTIINDEX_CAP_DEFAULT: u64 = 1_000_000;

/// The acting part `B` of a factorized operator `B (x) I`.
#[derive(Clone, Debug)]
pub enum OperatorPart {
    /// An arbitrary square matrix on the acting factors.
    General(ComplexMatrix),
    /// The rank-one matrix `|ket><bra|` with unit `ket` and `bra`.
    RankOne {
        ket: Vec<Complex64>,
        bra: Vec<Complex64>,
    },
}

impl Serialize for OperatorPart {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            OperatorPart::General(matrix) => {
                let mut st = serializer.serialize_struct("OperatorPart", 2)?;
                st.serialize_field("kind", "general")?;
                st.serialize_field("matrix", matrix)?;
                st.end()
            }
            OperatorPart::RankOne { ket, bra } => {
                let pairs =
                    |v: &[Complex64]| v.iter().map(|c| [c.re, c.im]).collect::<Vec<[f64; 2]>>();
                let mut st = serializer.serialize_struct("OperatorPart", 3)?;
                st.serialize_field("kind", "rank_one")?;
                st.serialize_field("ket", &pairs(ket))?;
                st.serialize_field("bra", &pairs(bra))?;
                st.end()
            }
        }
    }
}

/// An operator on a tensor product that factors as `B (x) I`: `part` acts on
/// the factors outside `identity` (in their original positions) and the
/// identity fills `identity`.  The identity subset may be empty (the operator
/// acts on everything) or full (the operator is a scalar times the identity).
#[derive(Clone, Debug, Serialize)]
pub struct FactorizedOperator {
    identity: SubsetMask,
    part: OperatorPart,
}

impl FactorizedOperator {
    /// Wraps a square matrix acting on the factors outside `identity`.
    pub fn new_general(identity: SubsetMask, part: ComplexMatrix) -> Result<Self> {
        let expected = identity.complement().sub_dim();
        if part.dim() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                got: part.dim(),
            });
        }
        Ok(Self {
            identity,
            part: OperatorPart::General(part),
        })
    }

    /// Wraps `|ket><bra|` acting on the factors outside `identity`.  Both
    /// vectors must be unit within [`UNIT_NORM_TOL`].
    pub fn new_rank_one(
        identity: SubsetMask,
        ket: Vec<Complex64>,
        bra: Vec<Complex64>,
    ) -> Result<Self> {
        let expected = identity.complement().sub_dim();
        for v in [&ket, &bra] {
            if v.len() != expected {
                return Err(Error::DimensionMismatch {
                    expected,
                    got: v.len(),
                });
            }
            let norm = vec_norm(v);
            if (norm - 1.0).abs() > UNIT_NORM_TOL {
                return Err(Error::InvalidState {
                    reason: format!("rank-one factor vector has norm {norm}, expected 1"),
                });
            }
        }
        Ok(Self {
            identity,
            part: OperatorPart::RankOne { ket, bra },
        })
    }

    /// Per-factor dimensions of the full space.
    pub fn dims(&self) -> &[usize] {
        self.identity.dims()
    }

    /// Factors on which this operator is the identity.
    pub fn identity(&self) -> &SubsetMask {
        &self.identity
    }

    /// Factors on which this operator acts nontrivially.
    pub fn acting(&self) -> SubsetMask {
        self.identity.complement()
    }

    /// The acting part `B`.
    pub fn part(&self) -> &OperatorPart {
        &self.part
    }

    /// Whether the acting part is rank-one.
    pub fn is_rank_one(&self) -> bool {
        matches!(self.part, OperatorPart::RankOne { .. })
    }

    /// The acting part as a dense matrix.
    pub fn part_matrix(&self) -> ComplexMatrix {
        match &self.part {
            OperatorPart::General(m) => m.clone(),
            OperatorPart::RankOne { ket, bra } => ComplexMatrix::outer(ket, bra),
        }
    }

    /// The operator on the full tensor product.
    pub fn full_matrix(&self) -> Result<ComplexMatrix> {
        embed_with_identity(&self.part_matrix(), &self.identity)
    }

    /// Trace norm of the acting part `B` (not of the full operator, whose
    /// trace norm carries an extra factor of the identity dimension).
    ///
    /// Rank-one parts give the product of the vector norms.  General parts go
    /// through the Hermitian doubling `[[0, B], [B*, 0]]`, whose eigenvalues
    /// are plus and minus the singular values of `B`.
    pub fn part_trace_norm(&self) -> Result<f64> {
        match &self.part {
            OperatorPart::RankOne { ket, bra } => Ok(vec_norm(ket) * vec_norm(bra)),
            OperatorPart::General(b) => {
                let d = b.dim();
                let doubled = ComplexMatrix::from_fn(2 * d, |i, j| {
                    if i < d && j >= d {
                        b.get(i, j - d)
                    } else if i >= d && j < d {
                        b.get(j, i - d).conj()
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                });
                let values = hermitian_spectrum(&doubled)?;
                Ok(values.iter().map(|v| v.abs()).sum::<f64>() / 2.0)
            }
        }
    }
}

fn check_compatible(ops: &[FactorizedOperator]) -> Result<&[usize]> {
    let first = ops
        .first()
        .ok_or_else(|| Error::Invalid("operator list is empty".into()))?;
    let dims = first.dims();
    for (k, op) in ops.iter().enumerate().skip(1) {
        if op.dims() != dims {
            return Err(Error::Invalid(format!(
                "operator {k} acts on factors {:?}, expected {:?}",
                op.dims(),
                dims
            )));
        }
    }
    Ok(dims)
}

/// Factors on which every operator in the list is the identity.
pub fn common_identity(ops: &[FactorizedOperator]) -> Result<SubsetMask> {
    check_compatible(ops)?;
    let mut common = ops[0].identity.clone();
    for op in &ops[1..] {
        common = common.intersection(&op.identity);
    }
    Ok(common)
}

/// Trace of the ordered product `A_1 A_2 ... A_m` via dense multiplication.
pub fn trace_of_product(ops: &[FactorizedOperator]) -> Result<Complex64> {
    check_compatible(ops)?;
    let mut product = ops[0].full_matrix()?;
    for op in &ops[1..] {
        product = product.matmul(&op.full_matrix()?);
    }
    Ok(product.trace())
}

/// Outcome of one trace-bound check.
#[derive(Clone, Debug, Serialize)]
pub struct TraceBoundReport {
    /// Per-factor dimensions of the shared space.
    pub dims: Vec<usize>,
    /// Number of operators in the product.
    pub operators: usize,
    /// Trace of the ordered product.
    #[serde(serialize_with = "crate::linalg::serde_c64::serialize")]
    pub trace: Complex64,
    /// `|trace|`.
    pub lhs: f64,
    /// Trace norms of the acting parts, in product order.
    pub trace_norms: Vec<f64>,
    /// Dimension of the factors where every operator is the identity.
    pub common_dim: usize,
    /// `common_dim` times the product of `trace_norms`.
    pub rhs: f64,
    /// Whether `lhs <= rhs` up to [`TRACE_BOUND_TOL`].
    pub passes: bool,
}

/// Checks `|Tr(A_1 ... A_m)| <= d_common * prod_k ||B_k||_1` for factorized
/// operators on a shared tensor product.
pub fn check_trace_bound(ops: &[FactorizedOperator]) -> Result<TraceBoundReport> {
    let dims = check_compatible(ops)?.to_vec();
    let trace = trace_of_product(ops)?;
    let lhs = trace.norm();
    let trace_norms = ops
        .iter()
        .map(|op| op.part_trace_norm())
        .collect::<Result<Vec<f64>>>()?;
    let common_dim = common_identity(ops)?.sub_dim();
    let rhs = common_dim as f64 * trace_norms.iter().product::<f64>();
    Ok(TraceBoundReport {
        dims,
        operators: ops.len(),
        trace,
        lhs,
        trace_norms,
        common_dim,
        rhs,
        passes: lhs <= rhs + TRACE_BOUND_TOL,
    })
}

/// The pairs `(k, s)` on which operator `k` acts nontrivially on factor `s`,
/// in lexicographic order, together with the forward map sending each pair to
/// the next operator (cyclically) acting on the same factor.
#[derive(Clone, Debug, Serialize)]
pub struct PairPermutation {
    pairs: Vec<(usize, usize)>,
    image: Vec<usize>,
}

impl PairPermutation {
    /// Number of pairs.
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    /// Whether there are no pairs at all.
    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// All pairs in lexicographic order.
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// The `i`-th pair.
    pub fn pair(&self, i: usize) -> (usize, usize) {
        self.pairs[i]
    }

    /// Index of the image of the `i`-th pair.
    pub fn apply(&self, i: usize) -> usize {
        self.image[i]
    }

    /// Position of the pair `(k, s)` in the lexicographic list, if present.
    pub fn position(&self, k: usize, s: usize) -> Option<usize> {
        self.pairs.binary_search(&(k, s)).ok()
    }

    /// Whether the map hits every pair exactly once.
    pub fn is_bijection(&self) -> bool {
        let mut seen = vec![false; self.image.len()];
        for &i in &self.image {
            if i >= seen.len() || seen[i] {
                return false;
            }
            seen[i] = true;
        }
        true
    }

    /// Whether every pair maps to a pair on the same factor.
    pub fn preserves_factor(&self) -> bool {
        self.image
            .iter()
            .enumerate()
            .all(|(i, &j)| self.pairs[i].1 == self.pairs[j].1)
    }
}

/// Builds the pair permutation for the given identity subsets (one per
/// operator, all over the same factor list).
///
/// Pair `(k, s)` is present when `s` is outside `subsets[k]`; it maps to
/// `(k + l mod m, s)` for the smallest `l in 1..=m` landing on an operator
/// that also acts on `s` (with `l = m` the pair maps to itself).
pub fn build_pair_permutation(subsets: &[SubsetMask]) -> Result<PairPermutation> {
    let first = subsets
        .first()
        .ok_or_else(|| Error::Invalid("subset list is empty".into()))?;
    let dims = first.dims();
    for (k, sub) in subsets.iter().enumerate().skip(1) {
        if sub.dims() != dims {
            return Err(Error::Invalid(format!(
                "subset {k} is over factors {:?}, expected {:?}",
                sub.dims(),
                dims
            )));
        }
    }
    let m = subsets.len();
    let n = dims.len();
    let mut pairs = Vec::new();
    for (k, sub) in subsets.iter().enumerate() {
        for s in 0..n {
            if !sub.contains(s) {
                pairs.push((k, s));
            }
        }
    }
    let mut image = Vec::with_capacity(pairs.len());
    for &(k, s) in &pairs {
        let next = (1..=m)
            .map(|l| (k + l) % m)
            .find(|&k2| !subsets[k2].contains(s))
            .expect("l = m lands back on (k, s) itself");
        let target = pairs
            .binary_search(&(next, s))
            .expect("image pair is in the lexicographic list");
        image.push(target);
    }
    Ok(PairPermutation { pairs, image })
}

/// Outcome of one expansion-identity check.
#[derive(Clone, Debug, Serialize)]
pub struct CsIdentityReport {
    /// Per-factor dimensions of the shared space.
    pub dims: Vec<usize>,
    /// Number of operators in the product.
    pub operators: usize,
    /// Number of (operator, factor) pairs indexing the expansion.
    pub pairs: usize,
    /// Number of multi-indices enumerated.
    pub space: u64,
    /// Trace of the product computed by dense multiplication.
    #[serde(serialize_with = "crate::linalg::serde_c64::serialize")]
    pub direct: Complex64,
    /// The same trace computed from the multi-index expansion.
    #[serde(serialize_with = "crate::linalg::serde_c64::serialize")]
    pub expansion: Complex64,
    /// `|expansion - direct|`.
    pub deviation: f64,
    /// Cauchy-Schwarz ceiling `sqrt(alpha_norm_sq * beta_norm_sq)` on
    /// `|expansion|`.
    pub cs_bound: f64,
    /// Sum of `|alpha|^2` over the multi-index space; equals the product of
    /// the squared ket norms.
    pub alpha_norm_sq: f64,
    /// Sum of `|beta|^2` over the multi-index space; equals the product of
    /// the squared bra norms.
    pub beta_norm_sq: f64,
    /// Largest deviation of the amplitude-square sums from their closed
    /// forms.
    pub norm_residual: f64,
    /// Whether the pair permutation is a bijection.
    pub bijective: bool,
    /// Whether the pair permutation preserves factors.
    pub factor_preserving: bool,
    /// All checks together, at [`CS_IDENTITY_TOL`] / [`NORM_SUM_TOL`].
    pub passes: bool,
}

/// [`verify_cs_identity_with_cap`] at [`MULTIINDEX_CAP_DEFAULT`].
pub fn verify_cs_identity(ops: &[FactorizedOperator]) -> Result<CsIdentityReport> {
    verify_cs_identity_with_cap(ops, MULTIINDEX_CAP_DEFAULT)
}

/// Expands `Tr(A_1 ... A_m)` for rank-one acting parts `|a_k><b_k|` as a sum
/// over one index per (operator, factor) pair,
///
/// ```text
/// Tr(A_1 ... A_m) = sum_J prod_k a_k[J at k's pairs] * conj(b_k[J at the
///                   images of k's pairs])
/// ```
///
/// and checks it against the dense trace.  Requires every acting part to be
/// rank-one and no factor to be shared by all identity subsets (otherwise the
/// free index over that factor would fall outside the pair set).
pub fn verify_cs_identity_with_cap(
    ops: &[FactorizedOperator],
    cap: u64,
) -> Result<CsIdentityReport> {
    let dims = check_compatible(ops)?.to_vec();
    let mut kets: Vec<&[Complex64]> = Vec::with_capacity(ops.len());
    let mut bras: Vec<&[Complex64]> = Vec::with_capacity(ops.len());
    for (k, op) in ops.iter().enumerate() {
        match &op.part {
            OperatorPart::RankOne { ket, bra } => {
                kets.push(ket);
                bras.push(bra);
            }
            OperatorPart::General(_) => {
                return Err(Error::Invalid(format!(
                    "operator {k} is not rank-one; the expansion needs |a><b| parts"
                )))
            }
        }
    }
    let common = common_identity(ops)?;
    if !common.is_empty() {
        return Err(Error::Invalid(format!(
            "factors {:?} sit inside every identity subset; the expansion needs an empty \
             common identity",
            common.member_indices()
        )));
    }

    let subsets: Vec<SubsetMask> = ops.iter().map(|op| op.identity.clone()).collect();
    let perm = build_pair_permutation(&subsets)?;
    let bijective = perm.is_bijection();
    let factor_preserving = perm.preserves_factor();

    let mut space: u128 = 1;
    for i in 0..perm.len() {
        space *= dims[perm.pair(i).1] as u128;
    }
    if space > u128::from(cap) {
        return Err(Error::MultiIndexCapExceeded {
            required: space,
            cap,
        });
    }

    // Positions in the pair list owned by each operator; lexicographic order
    // makes each list ascend in factor, matching the row-major layout of the
    // part vectors.
    let mut slots: Vec<Vec<usize>> = vec![Vec::new(); ops.len()];
    for i in 0..perm.len() {
        slots[perm.pair(i).0].push(i);
    }

    let mut assign = vec![0usize; perm.len()];
    let mut expansion = Complex64::new(0.0, 0.0);
    let mut alpha_norm_sq = 0.0;
    let mut beta_norm_sq = 0.0;
    'enumerate: loop {
        let mut term = Complex64::new(1.0, 0.0);
        let mut alpha = Complex64::new(1.0, 0.0);
        let mut beta = Complex64::new(1.0, 0.0);
        for (k, own) in slots.iter().enumerate() {
            let mut ia = 0;
            let mut ib = 0;
            for &slot in own {
                let d = dims[perm.pair(slot).1];
                ia = ia * d + assign[slot];
                ib = ib * d + assign[perm.apply(slot)];
            }
            term *= kets[k][ia] * bras[k][ib].conj();
            alpha *= kets[k][ia];
            beta *= bras[k][ia];
        }
        expansion += term;
        alpha_norm_sq += alpha.norm_sqr();
        beta_norm_sq += beta.norm_sqr();

        let mut pos = perm.len();
        loop {
            if pos == 0 {
                break 'enumerate;
            }
            pos -= 1;
            assign[pos] += 1;
            if assign[pos] < dims[perm.pair(pos).1] {
                break;
            }
            assign[pos] = 0;
        }
    }

    let direct = trace_of_product(ops)?;
    let deviation = (expansion - direct).norm();
    let alpha_expected: f64 = kets.iter().map(|v| vec_norm(v).powi(2)).product();
    let beta_expected: f64 = bras.iter().map(|v| vec_norm(v).powi(2)).product();
    let norm_residual = (alpha_norm_sq - alpha_expected)
        .abs()
        .max((beta_norm_sq - beta_expected).abs());
    let cs_bound = (alpha_norm_sq * beta_norm_sq).sqrt();
    let passes = deviation <= CS_IDENTITY_TOL
        && expansion.norm() <= cs_bound + CS_IDENTITY_TOL
        && norm_residual <= NORM_SUM_TOL
        && bijective
        && factor_preserving;
    Ok(CsIdentityReport {
        dims,
        operators: ops.len(),
        pairs: perm.len(),
        space: space as u64,
        direct,
        expansion,
        deviation,
        cs_bound,
        alpha_norm_sq,
        beta_norm_sq,
        norm_residual,
        bijective,
        factor_preserving,
        passes,
    })
}
