//! Almost Hermitian structures, their connections and intrinsic torsion.

use thiserror::Error;

use crate::algebra::LieAlgebra;
use crate::form::{Form, VolumeForm};
use crate::scalar::{Scalar, ScalarError};
use crate::tensor::{einsum, Tensor};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StructureError {
    #[error("dimension {0} is not even and positive")]
    OddDimension(usize),
    #[error("Kähler form has degree {0}, expected 2")]
    NotTwoForm(usize),
    #[error("J² = −Id fails: the Kähler form is degenerate or not compatible with the metric")]
    NotComplex,
    #[error("metric is not symmetric")]
    MetricNotSymmetric,
    #[error("metric is not positive definite with square roots in the coefficient field: {0}")]
    MetricNotOrthonormalizable(String),
    #[error("complex volume form: {0}")]
    ComplexVolume(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConnectionKind {
    LeviCivita,
    Minimal,
    Chern,
    Custom,
}

/// `gamma[i,j,k] = ⟨∇_{e_i}e_j, e_k⟩`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Connection {
    pub kind: ConnectionKind,
    pub gamma: Tensor,
}

impl Connection {
    pub fn is_metric(&self) -> bool {
        self.gamma == self.gamma.permute(&[0, 2, 1]).neg()
    }

    /// `T[i,j,k] = ⟨∇_{e_i}e_j − ∇_{e_j}e_i − [e_i,e_j], e_k⟩`.
    pub fn torsion(&self, alg: &LieAlgebra) -> Tensor {
        self.gamma.sub(&self.gamma.permute(&[1, 0, 2])).sub(alg.structure_constants())
    }

    /// `⟨(∇_{e_i}J)e_j, e_k⟩`.
    pub fn derivative_of_j(&self, j: &Tensor) -> Tensor {
        einsum("aj,iak->ijk", &[j, &self.gamma]).sub(&einsum("ijm,km->ijk", &[&self.gamma, j]))
    }

    /// `(D_{e_i}t)(e_{j_1},…) = −Σ_r t(…, D_{e_i}e_{j_r}, …)`, derivative index first.
    pub fn covariant_derivative(&self, t: &Tensor) -> Tensor {
        let dim = self.gamma.dim();
        let s = t.rank();
        Tensor::from_fn(dim, s + 1, |idx| {
            let i = idx[0];
            let mut total = Scalar::zero();
            let mut src = idx[1..].to_vec();
            for r in 0..s {
                let jr = idx[1 + r];
                for k in 0..dim {
                    let g = self.gamma.get(&[i, jr, k]);
                    if g.is_zero() {
                        continue;
                    }
                    src[r] = k;
                    let v = t.get(&src);
                    if !v.is_zero() {
                        total -= g * v;
                    }
                }
                src[r] = jr;
            }
            total
        })
    }
}

/// `ψ₊` and `ψ₋ = J₍₁₎ψ₊`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuData {
    pub psi_plus: Form,
    pub psi_minus: Form,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlmostHermitian {
    algebra: LieAlgebra,
    omega: Form,
    j: Tensor,
    n: usize,
    vol: VolumeForm,
    su: Option<SuData>,
}

/// Insert J into one slot: `out[…x…] = t(…, J e_x, …)`.
pub fn j_slot(t: &Tensor, j: &Tensor, slot: usize) -> Tensor {
    let dim = t.dim();
    Tensor::from_fn(dim, t.rank(), |idx| {
        let mut src = idx.to_vec();
        let mut total = Scalar::zero();
        for a in 0..dim {
            let jax = j.get(&[a, idx[slot]]);
            if !jax.is_zero() {
                src[slot] = a;
                total += jax * t.get(&src);
            }
        }
        total
    })
}

/// Apply J to the vector-valued last slot: `out[…,k] = Σ_m J[k,m] t[…,m]`.
pub fn j_output(t: &Tensor, j: &Tensor) -> Tensor {
    let dim = t.dim();
    Tensor::from_fn(dim, t.rank(), |idx| {
        let last = t.rank() - 1;
        let mut src = idx.to_vec();
        let mut total = Scalar::zero();
        for m in 0..dim {
            let jkm = j.get(&[idx[last], m]);
            if !jkm.is_zero() {
                src[last] = m;
                total += jkm * t.get(&src);
            }
        }
        total
    })
}

/// Exact Gram–Schmidt: returns (P, P⁻¹) with f_a = Σ_b P[b][a] e_b orthonormal for `g`.
pub fn orthonormal_frame(g: &Tensor, ext: u64) -> Result<(Tensor, Tensor), StructureError> {
    if !g.is_symmetric() {
        return Err(StructureError::MetricNotSymmetric);
    }
    let dim = g.dim();
    let ip = |u: &[Scalar], v: &[Scalar]| -> Scalar {
        let mut s = Scalar::zero();
        for a in 0..dim {
            for b in 0..dim {
                let gab = g.get(&[a, b]);
                if !gab.is_zero() && !u[a].is_zero() && !v[b].is_zero() {
                    s += &u[a] * gab * &v[b];
                }
            }
        }
        s
    };
    let mut frame: Vec<Vec<Scalar>> = Vec::new();
    for a in 0..dim {
        let mut v: Vec<Scalar> = (0..dim).map(|b| if a == b { Scalar::one() } else { Scalar::zero() }).collect();
        for f in &frame {
            let c = ip(&v, f);
            for b in 0..dim {
                v[b] -= &c * &f[b];
            }
        }
        let norm2 = ip(&v, &v);
        let bad = || StructureError::MetricNotOrthonormalizable(norm2.to_string());
        if norm2.is_zero() || !norm2.is_constant() {
            return Err(bad());
        }
        let norm = norm2.sqrt_in(ext).map_err(|_| bad())?;
        for x in v.iter_mut() {
            *x = x.div_const(&norm)?;
        }
        frame.push(v);
    }
    let p = Tensor::from_fn(dim, 2, |i| frame[i[1]][i[0]].clone());
    let p_inv = einsum("ba,bc->ac", &[&p, g]);
    Ok((p, p_inv))
}

impl AlmostHermitian {
    /// Builds the structure in an orthonormal frame; J is read off from ω(X,Y) = ⟨X,JY⟩.
    pub fn new(algebra: LieAlgebra, omega: Form, psi_plus: Option<Form>) -> Result<Self, StructureError> {
        let dim = algebra.dim();
        if dim == 0 || dim % 2 == 1 {
            return Err(StructureError::OddDimension(dim));
        }
        if omega.degree() != 2 || omega.dim() != dim {
            return Err(StructureError::NotTwoForm(omega.degree()));
        }
        let n = dim / 2;
        let j = omega.to_tensor();
        if j.matmul(&j) != Tensor::identity(dim).neg() {
            return Err(StructureError::NotComplex);
        }
        let mut power = Form::constant(dim, Scalar::one());
        for _ in 0..n {
            power = power.wedge(&omega);
        }
        let fact: i64 = (1..=n as i64).product();
        let sign = if (n * (n + 1) / 2) % 2 == 0 { 1 } else { -1 };
        let vol_form = power.scale_frac(sign, fact);
        let vol = VolumeForm::from_form(&vol_form).map_err(|_| StructureError::NotComplex)?;
        let mut s = AlmostHermitian { algebra, omega, j, n, vol, su: None };
        if let Some(psi) = psi_plus {
            s.su = Some(s.su_data(psi)?);
        }
        Ok(s)
    }

    fn su_data(&self, psi_plus: Form) -> Result<SuData, StructureError> {
        let err = |m: &str| StructureError::ComplexVolume(m.to_string());
        let n = self.n;
        if psi_plus.degree() != n || psi_plus.dim() != 2 * n {
            return Err(err("psi_plus must be an n-form"));
        }
        let psi_minus = Form::from_tensor(&psi_plus.j_first_slot(&self.j))
            .map_err(|_| err("psi_plus is not of type (n,0)+(0,n)"))?;
        if psi_plus.norm2() != Scalar::from_int(1 << (n - 1)) {
            return Err(err("normalization |psi_plus|^2 = 2^(n-1) fails"));
        }
        if !psi_plus.inner(&psi_minus).is_zero() {
            return Err(err("psi_plus and psi_minus are not orthogonal"));
        }
        let vol = self.vol.form();
        let relation = match n {
            2 => Some(("psi_plus ^ psi_plus = -2 Vol", psi_plus.wedge(&psi_plus), vol.scale_frac(-2, 1))),
            3 => Some(("psi_plus ^ psi_minus = -4 Vol", psi_plus.wedge(&psi_minus), vol.scale_frac(-4, 1))),
            _ => None,
        };
        if let Some((name, lhs, rhs)) = relation {
            if lhs != rhs {
                return Err(err(&format!("{name} fails")));
            }
        }
        Ok(SuData { psi_plus, psi_minus })
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn omega(&self) -> &Form {
        &self.omega
    }

    /// `J e_b = Σ_a j[a,b] e_a`.
    pub fn j(&self) -> &Tensor {
        &self.j
    }

    pub fn vol(&self) -> &VolumeForm {
        &self.vol
    }

    pub fn su(&self) -> Option<&SuData> {
        self.su.as_ref()
    }

    pub fn params(&self) -> &[String] {
        self.algebra.params()
    }

    pub fn d(&self, a: &Form) -> Form {
        self.algebra.d(a)
    }

    pub fn star(&self, a: &Form) -> Form {
        self.vol.star(a)
    }

    pub fn codifferential(&self, a: &Form) -> Form {
        self.vol.codifferential(a, |f| self.algebra.d(f)).expect("positive degree")
    }

    /// The 1-form Jα = −α(J·).
    pub fn j_one_form(&self, a: &Form) -> Form {
        let t = a.to_tensor();
        let jt = j_slot(&t, &self.j, 0).neg();
        Form::from_tensor(&jt).expect("1-form")
    }

    /// The 2-form α(J·,J·).
    pub fn j_two_form(&self, a: &Form) -> Form {
        a.j_all_slots(&self.j)
    }

    /// `N[i,j,k]`: e_k-component of N(e_i,e_j).
    pub fn nijenhuis(&self) -> Tensor {
        let c = self.algebra.structure_constants();
        let jx = j_slot(c, &self.j, 0);
        let jy = j_slot(c, &self.j, 1);
        let jxjy = j_slot(&jx, &self.j, 1);
        c.add(&j_output(&jx.add(&jy), &self.j)).sub(&jxjy)
    }

    /// Koszul: Γ[i,j,k] = ½(c[i,j,k] − c[j,k,i] + c[k,i,j]).
    pub fn levi_civita(&self) -> Connection {
        let c = self.algebra.structure_constants();
        let gamma = c.sub(&c.permute(&[2, 0, 1])).add(&c.permute(&[1, 2, 0])).scale_frac(1, 2);
        Connection { kind: ConnectionKind::LeviCivita, gamma }
    }

    /// ξ_X = −½J∘∇_XJ.
    pub fn intrinsic_torsion(&self, lc: &Connection) -> Tensor {
        j_output(&lc.derivative_of_j(&self.j), &self.j).scale_frac(-1, 2)
    }

    pub fn minimal_connection(&self, lc: &Connection, xi: &Tensor) -> Connection {
        Connection { kind: ConnectionKind::Minimal, gamma: lc.gamma.add(xi) }
    }

    /// Chern connection ∇ + ξʰ, with ⟨ξʰ_XY,Z⟩ = ⟨ξ_XY + ξ_YX, Z⟩ − ⟨ξ_ZX, Y⟩, and its unitarity flag.
    pub fn chern_connection(&self, lc: &Connection, xi: &Tensor) -> (Connection, bool) {
        let xih = xi.add(&xi.permute(&[1, 0, 2])).sub(&xi.permute(&[1, 2, 0]));
        let conn = Connection { kind: ConnectionKind::Chern, gamma: lc.gamma.add(&xih) };
        let unitary = conn.is_metric() && conn.derivative_of_j(&self.j).is_zero();
        (conn, unitary)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degenerate_form_rejected() {
        let alg = LieAlgebra::abelian(4);
        let r = AlmostHermitian::new(alg, Form::basis(4, &[0, 1]), None);
        assert_eq!(r, Err(StructureError::NotComplex));
    }

    #[test]
    fn flat_torus_connections_vanish() {
        let omega = Form::basis(4, &[2, 0]).add(&Form::basis(4, &[3, 1]));
        let s = AlmostHermitian::new(LieAlgebra::abelian(4), omega, None).unwrap();
        let lc = s.levi_civita();
        assert!(lc.gamma.is_zero());
        assert!(s.intrinsic_torsion(&lc).is_zero());
        assert_eq!(s.vol().form(), Form::basis(4, &[0, 1, 2, 3]));
    }

    #[test]
    fn gram_schmidt_diagonal_metric() {
        let mut g = Tensor::identity(2);
        g.set(&[1, 1], Scalar::from_int(4));
        g.set(&[0, 1], Scalar::one());
        g.set(&[1, 0], Scalar::one());
        let (p, p_inv) = orthonormal_frame(&g, 3).unwrap();
        let pgp = einsum("ba,bc,cd->ad", &[&p, &g, &p]);
        assert_eq!(pgp, Tensor::identity(2));
        assert_eq!(p.matmul(&p_inv), Tensor::identity(2));
        g.set(&[1, 1], Scalar::from_int(3));
        assert!(orthonormal_frame(&g, 0).is_err());
    }
}
