//! Square complex matrices and the tensor-factor operations built on them.

use nalgebra::DMatrix;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::mask::SubsetMask;
use super::norm::NormOrder;
use super::HERMITIAN_REL_TOL;
use crate::error::{Error, Result};

pub use num_complex::Complex64;

/// Dense square matrix over `Complex<f64>`, stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        ComplexMatrix {
            dim,
            entries: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    /// Builds from a row-major entry list of length `dim * dim`.
    pub fn from_entries(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                got: entries.len(),
            });
        }
        Ok(ComplexMatrix { dim, entries })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        Self::from_fn(diag.len(), |i, j| {
            if i == j {
                Complex64::new(diag[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    /// Rank-one matrix `|ket><bra|`.
    pub fn outer(ket: &[Complex64], bra: &[Complex64]) -> Self {
        assert_eq!(ket.len(), bra.len(), "outer product needs equal lengths");
        Self::from_fn(ket.len(), |i, j| ket[i] * bra[j].conj())
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.entries[i * self.dim + j] = v;
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "add needs equal dimensions");
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        ComplexMatrix {
            dim: self.dim,
            entries,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "sub needs equal dimensions");
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a - b)
            .collect();
        ComplexMatrix {
            dim: self.dim,
            entries,
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        ComplexMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(|a| a * c).collect(),
        }
    }

    pub fn scale_re(&self, x: f64) -> Self {
        self.scale(Complex64::new(x, 0.0))
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "matmul needs equal dimensions");
        let d = self.dim;
        let mut out = Self::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let a = self.get(i, k);
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..d {
                    out.entries[i * d + j] += a * other.get(k, j);
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(j, i).conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(j, i))
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise deviation from the adjoint.
    pub fn hermitian_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for i in 0..self.dim {
            for j in i..self.dim {
                dev = dev.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        dev
    }

    /// Hermitian within [`HERMITIAN_REL_TOL`] relative to `max_abs`.
    pub fn is_hermitian(&self) -> bool {
        self.hermitian_deviation() <= HERMITIAN_REL_TOL * self.max_abs()
    }

    /// Hermitian part `(M + M^*) / 2`.
    pub fn hermitized(&self) -> Self {
        Self::from_fn(self.dim, |i, j| {
            (self.get(i, j) + self.get(j, i).conj()) * 0.5
        })
    }

    pub fn apply_to_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim, "vector length must match dimension");
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }
}

impl std::fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "ComplexMatrix(dim = {})", self.dim)?;
        for i in 0..self.dim {
            let row: Vec<String> = (0..self.dim)
                .map(|j| {
                    let c = self.get(i, j);
                    format!("{:+.4}{:+.4}i", c.re, c.im)
                })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("ComplexMatrix", 2)?;
        st.serialize_field("dim", &self.dim)?;
        let pairs: Vec<[f64; 2]> = self.entries.iter().map(|c| [c.re, c.im]).collect();
        st.serialize_field("entries", &pairs)?;
        st.end()
    }
}

/// Kronecker product; factors flatten with the left factor slowest.
pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (da, db) = (a.dim(), b.dim());
    ComplexMatrix::from_fn(da * db, |i, j| {
        a.get(i / db, j / db) * b.get(i % db, j % db)
    })
}

/// Row-major strides: `stride[s] = prod(dims[s+1..])`.
fn strides(dims: &[usize]) -> Vec<usize> {
    let mut st = vec![1usize; dims.len()];
    for s in (0..dims.len().saturating_sub(1)).rev() {
        st[s] = st[s + 1] * dims[s + 1];
    }
    st
}

/// Flat offsets of every index assignment over the factors in `members`
/// (ascending factor order, later factors fastest).
fn subset_offsets(dims: &[usize], members: &[usize]) -> Vec<usize> {
    let st = strides(dims);
    let mut offs = vec![0usize];
    for &s in members {
        let mut next = Vec::with_capacity(offs.len() * dims[s]);
        for &o in &offs {
            for x in 0..dims[s] {
                next.push(o + x * st[s]);
            }
        }
        offs = next;
    }
    offs
}

fn check_factor_dims(m: &ComplexMatrix, mask: &SubsetMask) -> Result<()> {
    if mask.total_dim() != m.dim() {
        return Err(Error::FactorMismatch {
            dim: m.dim(),
            dims: mask.dims().to_vec(),
        });
    }
    Ok(())
}

/// Partial trace over the factors in `traced`; the result lives on the
/// complementary factors in their original order.
pub fn partial_trace(m: &ComplexMatrix, traced: &SubsetMask) -> Result<ComplexMatrix> {
    check_factor_dims(m, traced)?;
    let kept = traced.complement();
    let keep_offs = subset_offsets(traced.dims(), &kept.member_indices());
    let tr_offs = subset_offsets(traced.dims(), &traced.member_indices());
    let rd = keep_offs.len();
    let mut out = ComplexMatrix::zeros(rd);
    for (ri, &oi) in keep_offs.iter().enumerate() {
        for (rj, &oj) in keep_offs.iter().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for &t in &tr_offs {
                acc += m.get(oi + t, oj + t);
            }
            out.set(ri, rj, acc);
        }
    }
    Ok(out)
}

/// Places `b` (living on the complement of `identity`) back into the full
/// space, tensored with the identity on the factors in `identity`.
pub fn embed_with_identity(b: &ComplexMatrix, identity: &SubsetMask) -> Result<ComplexMatrix> {
    let kept = identity.complement();
    if b.dim() != kept.sub_dim() {
        return Err(Error::DimensionMismatch {
            expected: kept.sub_dim(),
            got: b.dim(),
        });
    }
    let keep_offs = subset_offsets(identity.dims(), &kept.member_indices());
    let id_offs = subset_offsets(identity.dims(), &identity.member_indices());
    let mut out = ComplexMatrix::zeros(identity.total_dim());
    for (bi, &oi) in keep_offs.iter().enumerate() {
        for (bj, &oj) in keep_offs.iter().enumerate() {
            let v = b.get(bi, bj);
            if v == Complex64::new(0.0, 0.0) {
                continue;
            }
            for &t in &id_offs {
                out.set(oi + t, oj + t, v);
            }
        }
    }
    Ok(out)
}

/// Eigendecomposition of a Hermitian matrix; `values` are sorted in
/// descending order and `vectors` holds the matching orthonormal columns.
pub struct HermitianEig {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEig {
    /// Column `k` of the eigenvector matrix.
    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        (0..self.vectors.dim())
            .map(|i| self.vectors.get(i, k))
            .collect()
    }

    /// Assembles `sum_k f(lambda_k) v_k v_k^*`.
    pub fn assemble(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let weights: Vec<f64> = self.values.iter().map(|&lam| f(lam)).collect();
        self.assemble_weights(&weights)
    }

    /// Assembles `sum_k w[k] v_k v_k^*`.
    pub fn assemble_weights(&self, weights: &[f64]) -> ComplexMatrix {
        assert_eq!(weights.len(), self.values.len(), "one weight per eigenvalue");
        let d = self.vectors.dim();
        let mut out = ComplexMatrix::zeros(d);
        for (k, &w) in weights.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            for i in 0..d {
                let vi = self.vectors.get(i, k) * w;
                for j in 0..d {
                    let add = vi * self.vectors.get(j, k).conj();
                    let cur = out.get(i, j);
                    out.set(i, j, cur + add);
                }
            }
        }
        out
    }

    /// Largest residual entry of `U diag(v) U^* - m`.
    pub fn reconstruction_error(&self, m: &ComplexMatrix) -> f64 {
        self.assemble(|x| x).sub(m).max_abs()
    }
}

/// Full eigendecomposition of a Hermitian matrix.
///
/// Rejects inputs whose Hermitian deviation exceeds [`HERMITIAN_REL_TOL`];
/// accepted inputs are symmetrized before factorization so the solver sees an
/// exactly Hermitian matrix. The reconstruction `U diag(v) U^*` stays within
/// [`EIG_RECONSTRUCT_REL_TOL`] `* max |m|` of the input.
pub fn hermitian_eig(m: &ComplexMatrix) -> Result<HermitianEig> {
    let dev = m.hermitian_deviation();
    let tol = HERMITIAN_REL_TOL * m.max_abs();
    if dev > tol {
        return Err(Error::NotHermitian {
            deviation: dev,
            tolerance: tol,
        });
    }
    let h = m.hermitized();
    let d = h.dim();
    let na = DMatrix::from_fn(d, d, |i, j| h.get(i, j));
    let se = na.symmetric_eigen();
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| se.eigenvalues[b].partial_cmp(&se.eigenvalues[a]).unwrap());
    let values: Vec<f64> = order.iter().map(|&k| se.eigenvalues[k]).collect();
    let vectors = ComplexMatrix::from_fn(d, |i, j| se.eigenvectors[(i, order[j])]);
    Ok(HermitianEig { values, vectors })
}

/// Descending eigenvalues of a Hermitian matrix.
pub fn hermitian_spectrum(m: &ComplexMatrix) -> Result<Vec<f64>> {
    hermitian_eig(m).map(|e| e.values)
}

/// Schatten norm computed from a known eigenvalue list.
pub fn schatten_norm_of_values(values: &[f64], p: NormOrder) -> f64 {
    match p {
        NormOrder::Infinity => values.iter().map(|v| v.abs()).fold(0.0, f64::max),
        NormOrder::Finite(pv) => {
            if pv == 1.0 {
                values.iter().map(|v| v.abs()).sum()
            } else if let Some(k) = NormOrder::Finite(pv).as_integer() {
                let s: f64 = values.iter().map(|v| v.abs().powi(k as i32)).sum();
                s.powf(1.0 / pv)
            } else {
                let s: f64 = values.iter().map(|v| v.abs().powf(pv)).sum();
                s.powf(1.0 / pv)
            }
        }
    }
}

/// Schatten p-norm `(sum |lambda_i|^p)^(1/p)` of a Hermitian matrix
/// (`p = inf` gives the largest absolute eigenvalue).
pub fn schatten_norm(m: &ComplexMatrix, p: NormOrder) -> Result<f64> {
    Ok(schatten_norm_of_values(&hermitian_spectrum(m)?, p))
}
