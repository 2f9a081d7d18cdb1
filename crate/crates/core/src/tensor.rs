//! Dense invariant tensors over a fixed orthonormal basis.

use std::fmt;

use thiserror::Error;

use crate::scalar::{Rational, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TensorError {
    #[error("rank mismatch: {0}")]
    Rank(String),
    #[error("invalid contraction: {0}")]
    Contraction(String),
    #[error("tensor is not symmetric")]
    NotSymmetric,
    #[error("matrix is singular")]
    Singular,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tensor {
    dim: usize,
    rank: usize,
    data: Vec<Scalar>,
}

/// All multi-indices of the given rank, last index fastest.
pub fn multi_indices(dim: usize, rank: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = dim.pow(rank as u32);
    (0..total).map(move |mut flat| {
        let mut idx = vec![0; rank];
        for slot in (0..rank).rev() {
            idx[slot] = flat % dim;
            flat /= dim;
        }
        idx
    })
}

impl Tensor {
    pub fn zeros(dim: usize, rank: usize) -> Self {
        Tensor { dim, rank, data: vec![Scalar::zero(); dim.pow(rank as u32)] }
    }

    pub fn scalar(value: Scalar) -> Self {
        Tensor { dim: 0, rank: 0, data: vec![value] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut t = Tensor::zeros(dim, 2);
        for i in 0..dim {
            t.set(&[i, i], Scalar::one());
        }
        t
    }

    pub fn from_fn(dim: usize, rank: usize, mut f: impl FnMut(&[usize]) -> Scalar) -> Self {
        let data = multi_indices(dim, rank).map(|idx| f(&idx)).collect();
        Tensor { dim, rank, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn data(&self) -> &[Scalar] {
        &self.data
    }

    fn offset(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.rank);
        idx.iter().fold(0, |acc, &i| acc * self.dim + i)
    }

    pub fn get(&self, idx: &[usize]) -> &Scalar {
        &self.data[self.offset(idx)]
    }

    pub fn set(&mut self, idx: &[usize], value: Scalar) {
        let o = self.offset(idx);
        self.data[o] = value;
    }

    pub fn add_at(&mut self, idx: &[usize], value: &Scalar) {
        let o = self.offset(idx);
        self.data[o] += value;
    }

    /// The value of a rank-0 tensor.
    pub fn value(&self) -> &Scalar {
        &self.data[0]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = (Vec<usize>, &Scalar)> {
        multi_indices(self.dim, self.rank).zip(self.data.iter()).filter(|(_, s)| !s.is_zero())
    }

    fn check_same(&self, other: &Tensor) {
        assert!(
            self.dim == other.dim && self.rank == other.rank,
            "rank mismatch: ({}, {}) vs ({}, {})",
            self.dim,
            self.rank,
            other.dim,
            other.rank
        );
    }

    pub fn zip_with(&self, other: &Tensor, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> Tensor {
        self.check_same(other);
        Tensor {
            dim: self.dim,
            rank: self.rank,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn map(&self, f: impl Fn(&Scalar) -> Scalar) -> Tensor {
        Tensor { dim: self.dim, rank: self.rank, data: self.data.iter().map(f).collect() }
    }

    pub fn add(&self, other: &Tensor) -> Tensor {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Tensor) -> Tensor {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn neg(&self) -> Tensor {
        self.map(|a| -a)
    }

    pub fn scale(&self, c: &Scalar) -> Tensor {
        self.map(|a| a * c)
    }

    pub fn scale_rational(&self, r: &Rational) -> Tensor {
        self.map(|a| a.scale(r))
    }

    pub fn scale_frac(&self, n: i64, d: i64) -> Tensor {
        self.scale_rational(&crate::scalar::rat(n, d))
    }

    /// `out[i_0, …] = self[i_{perm[0]}, …]`, i.e. slot `k` of the output reads slot `perm[k]`'s index.
    pub fn permute(&self, perm: &[usize]) -> Tensor {
        assert_eq!(perm.len(), self.rank, "permutation length");
        Tensor::from_fn(self.dim, self.rank, |idx| {
            let mut src = vec![0; self.rank];
            for (k, &p) in perm.iter().enumerate() {
                src[p] = idx[k];
            }
            self.get(&src).clone()
        })
    }

    pub fn transpose(&self) -> Tensor {
        self.permute(&[1, 0])
    }

    pub fn symmetric_part(&self) -> Tensor {
        self.add(&self.transpose()).scale_frac(1, 2)
    }

    pub fn skew_part(&self) -> Tensor {
        self.sub(&self.transpose()).scale_frac(1, 2)
    }

    pub fn is_symmetric(&self) -> bool {
        self.rank == 2 && *self == self.transpose()
    }

    /// Inner product Σ self[I]·other[I] over all multi-indices.
    pub fn dot(&self, other: &Tensor) -> Scalar {
        self.check_same(other);
        self.data
            .iter()
            .zip(&other.data)
            .filter(|(a, b)| !a.is_zero() && !b.is_zero())
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn norm2(&self) -> Scalar {
        self.dot(self)
    }

    /// Metric trace over two slots in an orthonormal frame.
    pub fn contract(&self, a: usize, b: usize) -> Result<Tensor, TensorError> {
        if a == b || a >= self.rank || b >= self.rank {
            return Err(TensorError::Contraction(format!("slots ({a}, {b}) on rank {}", self.rank)));
        }
        let keep: Vec<usize> = (0..self.rank).filter(|&s| s != a && s != b).collect();
        let dim = self.dim;
        let out_rank = self.rank - 2;
        let mut out = if out_rank == 0 { Tensor::scalar(Scalar::zero()) } else { Tensor::zeros(dim, out_rank) };
        for idx in multi_indices(dim, out_rank) {
            let mut total = Scalar::zero();
            for i in 0..dim {
                let mut full = vec![0; self.rank];
                for (k, &s) in keep.iter().enumerate() {
                    full[s] = idx[k];
                }
                full[a] = i;
                full[b] = i;
                total += self.get(&full);
            }
            out.set(&idx, total);
        }
        Ok(out)
    }

    /// Matrix product of two rank-2 tensors.
    pub fn matmul(&self, other: &Tensor) -> Tensor {
        einsum("ab,bc->ac", &[self, other])
    }

    /// Inverse of a rank-2 tensor with parameter-free entries.
    pub fn inverse(&self) -> Result<Tensor, TensorError> {
        if self.rank != 2 {
            return Err(TensorError::Rank("inverse needs a matrix".into()));
        }
        let n = self.dim;
        let mut a: Vec<Vec<Scalar>> = (0..n).map(|i| (0..n).map(|j| self.get(&[i, j]).clone()).collect()).collect();
        let mut inv: Vec<Vec<Scalar>> =
            (0..n).map(|i| (0..n).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }).collect()).collect();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a[r][col].is_zero()).ok_or(TensorError::Singular)?;
            a.swap(col, pivot);
            inv.swap(col, pivot);
            let p = a[col][col].inverse().map_err(|_| TensorError::Singular)?;
            for j in 0..n {
                a[col][j] = &a[col][j] * &p;
                inv[col][j] = &inv[col][j] * &p;
            }
            for r in 0..n {
                if r != col && !a[r][col].is_zero() {
                    let f = a[r][col].clone();
                    for j in 0..n {
                        let t = &a[col][j] * &f;
                        a[r][j] -= t;
                        let t = &inv[col][j] * &f;
                        inv[r][j] -= t;
                    }
                }
            }
        }
        Ok(Tensor::from_fn(n, 2, |idx| inv[idx[0]][idx[1]].clone()))
    }
}

/// Contraction in Einstein notation over the fixed frame, e.g. `einsum("ijk,kl->ijl", &[a, b])`.
/// Letters absent from the output are summed; zero entries are skipped.
pub fn einsum(spec: &str, ops: &[&Tensor]) -> Tensor {
    try_einsum(spec, ops).unwrap_or_else(|e| panic!("{e}"))
}

pub fn try_einsum(spec: &str, ops: &[&Tensor]) -> Result<Tensor, TensorError> {
    let (lhs, out) = spec.split_once("->").ok_or_else(|| TensorError::Contraction(format!("missing '->' in {spec}")))?;
    let inputs: Vec<Vec<u8>> = lhs.split(',').map(|s| s.trim().bytes().collect()).collect();
    let out: Vec<u8> = out.trim().bytes().collect();
    if inputs.len() != ops.len() {
        return Err(TensorError::Contraction(format!("{spec}: {} operands given", ops.len())));
    }
    let dim = ops.iter().map(|t| t.dim).max().unwrap_or(0);
    for (letters, t) in inputs.iter().zip(ops) {
        if letters.len() != t.rank || (t.rank > 0 && t.dim != dim) {
            return Err(TensorError::Rank(format!("{spec}: operand of rank {} and dim {}", t.rank, t.dim)));
        }
    }
    for c in &out {
        if !inputs.iter().any(|l| l.contains(c)) {
            return Err(TensorError::Contraction(format!("{spec}: output letter '{}' unbound", *c as char)));
        }
    }
    let mut assign = [usize::MAX; 128];
    let mut result = if out.is_empty() { Tensor::scalar(Scalar::zero()) } else { Tensor::zeros(dim, out.len()) };
    let plan = Plan { inputs: &inputs, ops, out: &out, dim };
    plan.walk(0, &mut assign, None, &mut result);
    Ok(result)
}

struct Plan<'a> {
    inputs: &'a [Vec<u8>],
    ops: &'a [&'a Tensor],
    out: &'a [u8],
    dim: usize,
}

impl Plan<'_> {
    fn walk(&self, k: usize, assign: &mut [usize; 128], acc: Option<&Scalar>, result: &mut Tensor) {
        if k == self.ops.len() {
            let idx: Vec<usize> = self.out.iter().map(|&c| assign[c as usize]).collect();
            let value = acc.cloned().unwrap_or_else(Scalar::one);
            result.add_at(&idx, &value);
            return;
        }
        let letters = &self.inputs[k];
        let mut free: Vec<u8> = Vec::new();
        for &c in letters {
            if assign[c as usize] == usize::MAX && !free.contains(&c) {
                free.push(c);
            }
        }
        let op = self.ops[k];
        for choice in multi_indices(self.dim, free.len()) {
            for (c, &v) in free.iter().zip(&choice) {
                assign[*c as usize] = v;
            }
            let idx: Vec<usize> = letters.iter().map(|&c| assign[c as usize]).collect();
            let entry = op.get(&idx);
            if !entry.is_zero() {
                let next = match acc {
                    Some(a) => a * entry,
                    None => entry.clone(),
                };
                self.walk(k + 1, assign, Some(&next), result);
            }
        }
        for c in free {
            assign[c as usize] = usize::MAX;
        }
    }
}

impl Tensor {
    /// Nonzero entries as `[i,j,…]=value` with 1-based indices, using the given parameter names.
    pub fn render(&self, params: &[String]) -> String {
        let entries: Vec<String> = self
            .nonzero()
            .map(|(idx, v)| {
                let label: Vec<String> = idx.iter().map(|i| (i + 1).to_string()).collect();
                format!("[{}]={}", label.join(","), v.render(params))
            })
            .collect();
        if entries.is_empty() {
            "0".to_string()
        } else {
            entries.join(", ")
        }
    }
}

impl fmt::Display for Tensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&[]))
    }
}
