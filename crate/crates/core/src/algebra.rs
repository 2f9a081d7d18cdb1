//! Lie algebras given by structure constants, and the exterior derivative of invariant forms.

use thiserror::Error;

use crate::form::{combinations, Form};
use crate::scalar::Scalar;
use crate::tensor::{einsum, Tensor};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("index {0} out of range for dimension {1}")]
    Index(usize, usize),
    #[error("bracket [e{i},e{i}] must vanish", i = .0 + 1)]
    SelfBracket(usize),
    #[error("inconsistent brackets [e{},e{}] and [e{},e{}]", .0 + 1, .1 + 1, .1 + 1, .0 + 1)]
    Antisymmetry(usize, usize),
    #[error("Jacobi identity fails at (i,j,k,l) = ({}, {}, {}, {}): {value}", .witness[0] + 1, .witness[1] + 1, .witness[2] + 1, .witness[3] + 1)]
    Jacobi { witness: [usize; 4], value: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebra {
    dim: usize,
    params: Vec<String>,
    /// `c[i,j,k]` is the e_k-component of [e_i, e_j].
    c: Tensor,
}

impl LieAlgebra {
    /// Build from bracket entries `(i, j, [(k, c)])` meaning [e_i,e_j] = Σ c e_k (0-based).
    /// Each unordered pair may be listed once, or twice with opposite signs.
    pub fn from_brackets(
        dim: usize,
        params: Vec<String>,
        brackets: &[(usize, usize, Vec<(usize, Scalar)>)],
    ) -> Result<Self, AlgebraError> {
        let mut c = Tensor::zeros(dim, 3);
        let mut seen = vec![vec![false; dim]; dim];
        for (i, j, coeffs) in brackets {
            let (i, j) = (*i, *j);
            for &x in [i, j].iter().chain(coeffs.iter().map(|(k, _)| k)) {
                if x >= dim {
                    return Err(AlgebraError::Index(x, dim));
                }
            }
            if i == j {
                if coeffs.iter().all(|(_, v)| v.is_zero()) {
                    continue;
                }
                return Err(AlgebraError::SelfBracket(i));
            }
            let mut entry = Tensor::zeros(dim, 1);
            for (k, v) in coeffs {
                entry.add_at(&[*k], v);
            }
            if seen[i][j] || seen[j][i] {
                let existing = Tensor::from_fn(dim, 1, |k| c.get(&[i, j, k[0]]).clone());
                if existing != entry || seen[i][j] {
                    return Err(AlgebraError::Antisymmetry(i, j));
                }
                continue;
            }
            seen[i][j] = true;
            for k in 0..dim {
                let v = entry.get(&[k]);
                c.set(&[i, j, k], v.clone());
                c.set(&[j, i, k], -v);
            }
        }
        let alg = LieAlgebra { dim, params, c };
        alg.jacobi_check()?;
        Ok(alg)
    }

    /// Build from a full structure-constant tensor, checking antisymmetry and Jacobi.
    pub fn from_tensor(params: Vec<String>, c: Tensor) -> Result<Self, AlgebraError> {
        let dim = c.dim();
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    if c.get(&[i, j, k]) != &-c.get(&[j, i, k]) {
                        return Err(AlgebraError::Antisymmetry(i, j));
                    }
                }
            }
        }
        let alg = LieAlgebra { dim, params, c };
        alg.jacobi_check()?;
        Ok(alg)
    }

    pub fn abelian(dim: usize) -> Self {
        LieAlgebra { dim, params: Vec::new(), c: Tensor::zeros(dim, 3) }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    pub fn structure_constants(&self) -> &Tensor {
        &self.c
    }

    /// Σ_m (c^m_{ij}c^l_{mk} + c^m_{jk}c^l_{mi} + c^m_{ki}c^l_{mj}) = 0 for all i,j,k,l.
    pub fn jacobi_check(&self) -> Result<(), AlgebraError> {
        let a = einsum("ijm,mkl->ijkl", &[&self.c, &self.c]);
        let jac = a.add(&a.permute(&[1, 2, 0, 3])).add(&a.permute(&[2, 0, 1, 3]));
        let witness = jac.nonzero().next().map(|(idx, v)| (idx, v.render(&self.params)));
        match witness {
            None => Ok(()),
            Some((idx, value)) => Err(AlgebraError::Jacobi { witness: [idx[0], idx[1], idx[2], idx[3]], value }),
        }
    }

    /// Structure constants in the frame f_a = Σ_b P[b][a] e_b.
    pub fn change_basis(&self, p: &Tensor, p_inv: &Tensor) -> LieAlgebra {
        let c = einsum("ca,db,cdk,lk->abl", &[p, p, &self.c, p_inv]);
        LieAlgebra { dim: self.dim, params: self.params.clone(), c }
    }

    /// dα(X₀..X_p) = Σ_{i<j} (−1)^{i+j} α([X_i,X_j], X₀..X̂_i..X̂_j..X_p).
    pub fn d(&self, alpha: &Form) -> Form {
        let p = alpha.degree();
        let mut out = Form::zero(self.dim, p + 1);
        if p + 1 > self.dim {
            return out;
        }
        for k in combinations(self.dim, p + 1) {
            let mut total = Scalar::zero();
            for a in 0..=p {
                for b in a + 1..=p {
                    let rest: Vec<usize> =
                        k.iter().enumerate().filter(|(t, _)| *t != a && *t != b).map(|(_, &v)| v).collect();
                    let mut part = Scalar::zero();
                    for t in 0..self.dim {
                        let ct = self.c.get(&[k[a], k[b], t]);
                        if ct.is_zero() {
                            continue;
                        }
                        let mut idx = vec![t];
                        idx.extend(&rest);
                        let v = alpha.get(&idx);
                        if !v.is_zero() {
                            part += ct * &v;
                        }
                    }
                    if (a + b) % 2 == 1 {
                        total -= part;
                    } else {
                        total += part;
                    }
                }
            }
            out.add_term(&k, &total);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(i: usize) -> usize {
        i - 1
    }

    fn ex51() -> LieAlgebra {
        let m = Scalar::from_int(-1);
        LieAlgebra::from_brackets(
            4,
            vec![],
            &[
                (e(1), e(4), vec![(e(1), m.clone())]),
                (e(2), e(4), vec![(e(3), m.clone())]),
                (e(3), e(4), vec![(e(3), m)]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn derivative_of_coframe() {
        let l = ex51();
        assert_eq!(l.d(&Form::basis(4, &[0])), Form::basis(4, &[0, 3]));
        assert_eq!(l.d(&Form::basis(4, &[2])), Form::basis(4, &[1, 3]).add(&Form::basis(4, &[2, 3])));
        assert!(l.d(&Form::zero(4, 2)).is_zero());
    }

    #[test]
    fn jacobi_failure_has_a_witness() {
        let one = Scalar::one();
        let r = LieAlgebra::from_brackets(
            3,
            vec![],
            &[(0, 1, vec![(0, one.clone())]), (1, 2, vec![(1, one.clone())]), (2, 0, vec![(2, one)])],
        );
        assert!(matches!(r, Err(AlgebraError::Jacobi { .. })));
    }

    #[test]
    fn inconsistent_brackets_rejected() {
        let one = Scalar::one();
        let r = LieAlgebra::from_brackets(2, vec![], &[(0, 1, vec![(0, one.clone())]), (1, 0, vec![(0, one)])]);
        assert_eq!(r, Err(AlgebraError::Antisymmetry(1, 0)));
    }
}
