//! Frame contractions shared by the torsion-side formulas.
//!
//! Torsion-type tensors are stored as `a[x,y,z] = ⟨a_{e_x}e_y, e_z⟩`, covariant
//! derivatives as `D[w,x,y,z] = ⟨(D_{e_w}a)_{e_x}e_y, e_z⟩`, bilinear forms as `B[x,y] = B(e_x,e_y)`.

use crate::form::Form;
use crate::scalar::Scalar;
use crate::tensor::{einsum, Tensor};

/// ⟨a_X e_i, b_Y e_i⟩
pub fn xe_ye(a: &Tensor, b: &Tensor) -> Tensor {
    einsum("xik,yik->xy", &[a, b])
}

/// ⟨a_{e_i} X, b_{e_i} Y⟩
pub fn ex_ey(a: &Tensor, b: &Tensor) -> Tensor {
    einsum("ixk,iyk->xy", &[a, b])
}

/// ⟨a_X e_i, b_Y J e_i⟩
pub fn xe_yje(a: &Tensor, b: &Tensor, j: &Tensor) -> Tensor {
    einsum("xik,ci,yck->xy", &[a, j, b])
}

/// ⟨a_{e_i} X, b_{J e_i} Y⟩
pub fn ex_jey(a: &Tensor, b: &Tensor, j: &Tensor) -> Tensor {
    einsum("ixk,ci,cyk->xy", &[a, j, b])
}

/// ⟨a_{e_i} X, e_j⟩⟨b_{e_j} Y, e_i⟩
pub fn cross(a: &Tensor, b: &Tensor) -> Tensor {
    einsum("ixj,jyi->xy", &[a, b])
}

/// ⟨(D_{e_i} a)_X Y, e_i⟩
pub fn div_xy(d: &Tensor) -> Tensor {
    einsum("ixyi->xy", &[d])
}

/// ⟨(D_{e_i} a)_{e_i} X, Y⟩
pub fn div_ee(d: &Tensor) -> Tensor {
    einsum("iixy->xy", &[d])
}

/// ⟨a_v X, Y⟩
pub fn at(a: &Tensor, v: &Tensor) -> Tensor {
    einsum("t,txy->xy", &[v, a])
}

/// θ(a_X Y)
pub fn thx(a: &Tensor, theta: &Tensor) -> Tensor {
    einsum("xyk,k->xy", &[a, theta])
}

/// Σ_i a_{e_i} e_i as a vector.
pub fn trace_vec(a: &Tensor) -> Tensor {
    einsum("iik->k", &[a])
}

pub fn outer(u: &Tensor, v: &Tensor) -> Tensor {
    einsum("x,y->xy", &[u, v])
}

/// B(JX, JY)
pub fn jb(b: &Tensor, j: &Tensor) -> Tensor {
    einsum("px,ry,pr->xy", &[j, j, b])
}

/// (B∘J)(X,Y) = B(X, JY)
pub fn b_j(b: &Tensor, j: &Tensor) -> Tensor {
    einsum("xb,by->xy", &[b, j])
}

/// J-invariant part ½(B + B(J·,J·)).
pub fn p11(b: &Tensor, j: &Tensor) -> Tensor {
    b.add(&jb(b, j)).scale_frac(1, 2)
}

/// J-anti-invariant part ½(B − B(J·,J·)).
pub fn p20(b: &Tensor, j: &Tensor) -> Tensor {
    b.sub(&jb(b, j)).scale_frac(1, 2)
}

/// ℝω-part (1/n)⟨α,ω⟩ω of a skew matrix.
pub fn r_omega(a: &Tensor, omega: &Tensor, n: usize) -> Tensor {
    let ip = a.dot(omega).div_int(2 * n as i64);
    omega.scale(&ip)
}

/// Inner product of two skew matrices as 2-forms.
pub fn form_inner2(a: &Tensor, b: &Tensor) -> Scalar {
    a.dot(b).div_int(2)
}

pub fn vec_of(f: &Form) -> Tensor {
    f.to_tensor()
}

pub fn form_of(t: &Tensor) -> Form {
    Form::from_tensor(t).expect("antisymmetric tensor")
}

pub fn trace(b: &Tensor) -> Scalar {
    b.contract(0, 1).expect("matrix").value().clone()
}
