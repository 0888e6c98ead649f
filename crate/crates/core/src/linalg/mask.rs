//! Subsets of labelled tensor factors, stored as bit masks.

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A subset of the `n` tensor factors of a space with per-factor dimensions
/// `dims`. Factor indices are 0-based; bit `i` of `bits` marks membership.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubsetMask {
    bits: u32,
    dims: Vec<usize>,
}

impl SubsetMask {
    pub fn new(dims: &[usize], bits: u32) -> Result<Self> {
        let n = dims.len();
        if n == 0 || n > 32 {
            return Err(Error::Invalid(format!(
                "factor count {n} out of the supported range 1..=32"
            )));
        }
        if dims.contains(&0) {
            return Err(Error::Invalid("zero factor dimension".into()));
        }
        if n < 32 && bits >= (1 << n) {
            return Err(Error::Invalid(format!(
                "mask bits {bits:#b} address more than {n} factors"
            )));
        }
        Ok(SubsetMask {
            bits,
            dims: dims.to_vec(),
        })
    }

    pub fn empty(dims: &[usize]) -> Self {
        Self::new(dims, 0).expect("empty mask")
    }

    pub fn full(dims: &[usize]) -> Self {
        let n = dims.len();
        let bits = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
        Self::new(dims, bits).expect("full mask")
    }

    pub fn from_indices(dims: &[usize], members: &[usize]) -> Result<Self> {
        let mut bits = 0u32;
        for &i in members {
            if i >= dims.len() {
                return Err(Error::Invalid(format!(
                    "factor index {i} out of range for {} factors",
                    dims.len()
                )));
            }
            bits |= 1 << i;
        }
        Self::new(dims, bits)
    }

    pub fn singleton(dims: &[usize], i: usize) -> Result<Self> {
        Self::from_indices(dims, &[i])
    }

    #[inline]
    pub fn factor_count(&self) -> usize {
        self.dims.len()
    }

    #[inline]
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    #[inline]
    pub fn bits(&self) -> u32 {
        self.bits
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        i < self.dims.len() && self.bits & (1 << i) != 0
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn member_count(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn member_indices(&self) -> Vec<usize> {
        (0..self.dims.len()).filter(|&i| self.contains(i)).collect()
    }

    /// Dimensions of the member factors, in ascending factor order.
    pub fn member_dims(&self) -> Vec<usize> {
        self.member_indices().iter().map(|&i| self.dims[i]).collect()
    }

    /// Product of the member factor dimensions (1 for the empty subset).
    pub fn sub_dim(&self) -> usize {
        self.member_dims().iter().product()
    }

    /// Product of all factor dimensions.
    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    fn with_bits(&self, bits: u32) -> Self {
        SubsetMask {
            bits,
            dims: self.dims.clone(),
        }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        assert_eq!(self.dims, other.dims, "masks live on different spaces");
        self.with_bits(self.bits & other.bits)
    }

    pub fn union(&self, other: &Self) -> Self {
        assert_eq!(self.dims, other.dims, "masks live on different spaces");
        self.with_bits(self.bits | other.bits)
    }

    pub fn complement(&self) -> Self {
        let full = Self::full(&self.dims);
        self.with_bits(full.bits & !self.bits)
    }
}

impl Serialize for SubsetMask {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("SubsetMask", 2)?;
        st.serialize_field("members", &self.member_indices())?;
        st.serialize_field("dims", &self.dims)?;
        st.end()
    }
}
