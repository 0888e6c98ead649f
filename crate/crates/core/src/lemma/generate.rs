//! Seeded random instances for exercising the trace bound and the expansion
//! identity in bulk.

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{sample_unit_vector_with, ComplexMatrix, SubsetMask};

use super::FactorizedOperator;

/// Shape ranges for sampled operator lists.
#[derive(Clone, Debug)]
pub struct InstanceConfig {
    /// Upper bound (inclusive) on the number of operators per instance.
    pub max_operators: usize,
    /// Upper bound (inclusive) on the number of tensor factors.
    pub max_factors: usize,
    /// Per-factor dimensions are drawn uniformly from this list.
    pub dim_choices: Vec<usize>,
}

impl Default for InstanceConfig {
    fn default() -> Self {
        Self {
            max_operators: 4,
            max_factors: 4,
            dim_choices: vec![2, 3],
        }
    }
}

impl InstanceConfig {
    fn validate(&self) -> Result<()> {
        if self.max_operators == 0 || self.max_factors == 0 || self.dim_choices.is_empty() {
            return Err(Error::Invalid(
                "instance config needs at least one operator, one factor, and one dimension"
                    .into(),
            ));
        }
        if self.max_factors > 16 {
            return Err(Error::Invalid(format!(
                "max_factors {} is too large for dense enumeration",
                self.max_factors
            )));
        }
        if self.dim_choices.contains(&0) {
            return Err(Error::Invalid("factor dimensions must be nonzero".into()));
        }
        Ok(())
    }

    fn sample_dims<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<usize> {
        let n = rng.random_range(1..=self.max_factors);
        (0..n)
            .map(|_| self.dim_choices[rng.random_range(0..self.dim_choices.len())])
            .collect()
    }
}

fn sample_part<R: Rng + ?Sized>(
    identity: SubsetMask,
    rng: &mut R,
) -> Result<FactorizedOperator> {
    let d = identity.complement().sub_dim();
    // Mostly rank-one parts, with an occasional non-Hermitian rank-two matrix
    // so the dense trace-norm path gets exercised too.
    if rng.random::<f64>() < 0.25 {
        let u = sample_unit_vector_with(d, rng);
        let v = sample_unit_vector_with(d, rng);
        let w = sample_unit_vector_with(d, rng);
        let x = sample_unit_vector_with(d, rng);
        let part = ComplexMatrix::outer(&u, &v).add(&ComplexMatrix::outer(&w, &x).scale_re(0.5));
        FactorizedOperator::new_general(identity, part)
    } else {
        let ket = sample_unit_vector_with(d, rng);
        let bra = sample_unit_vector_with(d, rng);
        FactorizedOperator::new_rank_one(identity, ket, bra)
    }
}

/// Samples a list of factorized operators for the trace bound: identity
/// subsets are arbitrary nonempty subsets (they may overlap or even share
/// factors across all operators).
pub fn sample_bound_instance<R: Rng + ?Sized>(
    cfg: &InstanceConfig,
    rng: &mut R,
) -> Result<Vec<FactorizedOperator>> {
    cfg.validate()?;
    let dims = cfg.sample_dims(rng);
    let n = dims.len();
    let m = rng.random_range(1..=cfg.max_operators);
    (0..m)
        .map(|_| {
            let bits = rng.random_range(1..(1u32 << n));
            let identity = SubsetMask::new(&dims, bits).expect("bits drawn in range");
            sample_part(identity, rng)
        })
        .collect()
}

/// Samples a rank-one operator list suitable for the expansion identity:
/// identity subsets may be empty but never share a factor across all
/// operators, and the multi-index space stays within `cap`.
pub fn sample_cs_instance<R: Rng + ?Sized>(
    cfg: &InstanceConfig,
    rng: &mut R,
    cap: u64,
) -> Result<Vec<FactorizedOperator>> {
    cfg.validate()?;
    const MAX_ATTEMPTS: usize = 10_000;
    for _ in 0..MAX_ATTEMPTS {
        let dims = cfg.sample_dims(rng);
        let n = dims.len();
        let m = rng.random_range(1..=cfg.max_operators);
        let subsets: Vec<SubsetMask> = (0..m)
            .map(|_| {
                let bits = rng.random_range(0..(1u32 << n));
                SubsetMask::new(&dims, bits).expect("bits drawn in range")
            })
            .collect();
        let common = subsets
            .iter()
            .skip(1)
            .fold(subsets[0].clone(), |acc, s| acc.intersection(s));
        if !common.is_empty() {
            continue;
        }
        let mut space: u128 = 1;
        for sub in &subsets {
            for s in sub.complement().member_indices() {
                space *= dims[s] as u128;
            }
        }
        if space > u128::from(cap) {
            continue;
        }
        return subsets
            .into_iter()
            .map(|identity| {
                let d = identity.complement().sub_dim();
                let ket = sample_unit_vector_with(d, rng);
                let bra = sample_unit_vector_with(d, rng);
                FactorizedOperator::new_rank_one(identity, ket, bra)
            })
            .collect();
    }
    Err(Error::Invalid(format!(
        "no feasible instance found in {MAX_ATTEMPTS} attempts (multi-index cap {cap})"
    )))
}
