//! Curvature of invariant connections, Ricci tensors and forms, and SU(n) refinements.

use thiserror::Error;

use crate::algebra::LieAlgebra;
use crate::decomposition::{split_symmetric, split_two_form, SymmetricSplit, TwoFormSplit};
use crate::form::Form;
use crate::ops;
use crate::scalar::Scalar;
use crate::structure::{j_slot, AlmostHermitian, Connection};
use crate::tensor::{einsum, Tensor};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CurvatureError {
    #[error("Chern connection not unitary")]
    ChernNotUnitary,
    #[error("curvature symmetry fails: {0}")]
    Symmetry(String),
    #[error("SU refinement: {0}")]
    Su(String),
}

/// `R[i,j,k,l] = ⟨R_{e_i,e_j}e_k, e_l⟩` with R_{X,Y} = ∇_{[X,Y]} − [∇_X, ∇_Y].
pub fn riemann(alg: &LieAlgebra, conn: &Connection) -> Tensor {
    let c = alg.structure_constants();
    let g = &conn.gamma;
    einsum("ijt,tkl->ijkl", &[c, g])
        .sub(&einsum("jka,ial->ijkl", &[g, g]))
        .add(&einsum("ika,jal->ijkl", &[g, g]))
}

/// Checks the symmetries every curvature tensor of the given kind must have.
pub fn check_symmetries(r: &Tensor, metric: bool, levi_civita: bool) -> Result<(), CurvatureError> {
    let fail = |m: &str| Err(CurvatureError::Symmetry(m.to_string()));
    if *r != r.permute(&[1, 0, 2, 3]).neg() {
        return fail("R_{X,Y} = −R_{Y,X}");
    }
    if metric && *r != r.permute(&[0, 1, 3, 2]).neg() {
        return fail("R_{X,Y} skew");
    }
    if levi_civita {
        let bianchi = r.add(&r.permute(&[1, 2, 0, 3])).add(&r.permute(&[2, 0, 1, 3]));
        if !bianchi.is_zero() {
            return fail("first Bianchi identity");
        }
        if *r != r.permute(&[2, 3, 0, 1]) {
            return fail("pair symmetry");
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RicciPair {
    pub ric: Tensor,
    pub ric_star: Tensor,
    pub s: Scalar,
    pub s_star: Scalar,
}

/// Ric(X,Y) = ⟨R_{X,e_i}Y, e_i⟩ and Ric*(X,Y) = ⟨R_{X,e_i}JY, Je_i⟩.
pub fn ricci_pair(r: &Tensor, j: &Tensor) -> RicciPair {
    let ric = einsum("xiyi->xy", &[r]);
    let ric_star = einsum("xiab,ay,bi->xy", &[r, j, j]);
    let s = ops::trace(&ric);
    let s_star = ops::trace(&ric_star);
    RicciPair { ric, ric_star, s, s_star }
}

/// ρ_D(X,Y) = −½⟨R_D(e_i, Je_i)X, Y⟩.
pub fn rho_form(r: &Tensor, j: &Tensor) -> Tensor {
    einsum("ai,iaxy->xy", &[j, r]).scale_frac(-1, 2)
}

/// r_D(X,Y) = −½⟨R_D(X,Y)e_i, Je_i⟩.
pub fn r_form(r: &Tensor, j: &Tensor) -> Tensor {
    einsum("xyib,bi->xy", &[r, j]).scale_frac(-1, 2)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RicciForms {
    pub rho: Tensor,
    pub r: Tensor,
}

impl RicciForms {
    pub fn of(r: &Tensor, j: &Tensor) -> Self {
        RicciForms { rho: rho_form(r, j), r: r_form(r, j) }
    }

    /// ρ_D as a form; ρ is skew only for metric connections.
    pub fn rho_form(&self) -> Form {
        ops::form_of(&self.rho.skew_part())
    }

    pub fn r_form(&self) -> Form {
        ops::form_of(&self.r)
    }

    /// Ricci forms of the Chern connection, refused when it is not unitary.
    pub fn chern(r: &Tensor, j: &Tensor, unitary: bool) -> Result<Self, CurvatureError> {
        if !unitary {
            return Err(CurvatureError::ChernNotUnitary);
        }
        Ok(RicciForms::of(r, j))
    }
}

/// Curvature-trace side of the U(n)-components of the Ricci tensors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurvatureComponents {
    /// Split of the symmetric part of Ric − Ric*.
    pub ric_minus_star: SymmetricSplit,
    /// Ric*_{[[λ²,⁰]]}: the skew part of Ric*.
    pub ric_star_20: Form,
    /// Ric_{[[σ²,⁰]]}.
    pub ric_sigma: Tensor,
    /// Split of (Ric + 3Ric*)_{[λ¹,¹]}.
    pub ric_plus_3star: SymmetricSplit,
    pub s_minus_s_star: Scalar,
    pub s_plus_3s_star: Scalar,
}

pub fn curvature_components(s: &AlmostHermitian, pair: &RicciPair) -> CurvatureComponents {
    let j = s.j();
    let diff = pair.ric.sub(&pair.ric_star);
    let ric_minus_star = split_symmetric(s, &diff.symmetric_part()).expect("symmetric");
    let ric_star_20 = ops::form_of(&pair.ric_star.skew_part());
    let ric_sigma = ops::p20(&pair.ric, j);
    let plus = pair.ric.add(&pair.ric_star.scale_frac(3, 1));
    let ric_plus_3star = split_symmetric(s, &ops::p11(&plus, j).symmetric_part()).expect("symmetric");
    CurvatureComponents {
        ric_minus_star,
        ric_star_20,
        ric_sigma,
        ric_plus_3star,
        s_minus_s_star: &pair.s - &pair.s_star,
        s_plus_3s_star: &pair.s + &pair.s_star.scale(&crate::scalar::rat(3, 1)),
    }
}

/// η and η̂ from a complex volume form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuRefinement {
    pub psi_plus: Form,
    pub psi_minus: Form,
    /// *(*dψ₊∧ψ₊ + *dψ₋∧ψ₋)
    pub star_term: Form,
    pub eta: Form,
    pub eta_hat: Form,
}

fn star_term(s: &AlmostHermitian, plus: &Form, minus: &Form) -> Form {
    let a = s.star(&s.d(plus)).wedge(plus);
    let b = s.star(&s.d(minus)).wedge(minus);
    s.star(&a.add(&b))
}

/// η from the star formula: 4η − θ (n = 2) or 4(3η − θ) (n = 3); other n are not covered.
pub fn su_refinement(s: &AlmostHermitian, theta: &Form) -> Result<Option<SuRefinement>, CurvatureError> {
    let Some(su) = s.su() else { return Ok(None) };
    let st = star_term(s, &su.psi_plus, &su.psi_minus);
    let eta = match s.n() {
        2 => st.add(theta).scale_frac(1, 4),
        3 => st.scale_frac(1, 4).add(theta).scale_frac(1, 3),
        n => return Err(CurvatureError::Su(format!("no star formula for n = {n}"))),
    };
    let eta_hat = s.j_one_form(&eta);
    Ok(Some(SuRefinement {
        psi_plus: su.psi_plus.clone(),
        psi_minus: su.psi_minus.clone(),
        star_term: st,
        eta,
        eta_hat,
    }))
}

/// (J₍ᵢ₎α)(…X_i…) = −α(…JX_i…)
pub fn j_slot_form(a: &Tensor, j: &Tensor, slot: usize) -> Tensor {
    j_slot(a, j, slot).neg()
}

/// The [[λ³,⁰]] part of a 3-form.
pub fn lambda30_part(a: &Form, j: &Tensor) -> Form {
    let t = a.to_tensor();
    let jj = |x: usize, y: usize| j_slot(&j_slot(&t, j, x), j, y);
    let mixed = jj(0, 1).add(&jj(0, 2)).add(&jj(1, 2));
    ops::form_of(&t.sub(&mixed).scale_frac(1, 4))
}

/// The n = 3 apparatus in scaled form: Φ = dω_{[λ³,⁰]} = 3w₁⁺ψ₊, W = (w₁⁺)².
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Su3Scaled {
    pub phi: Form,
    pub phi_minus: Form,
    pub w: Scalar,
    pub eta: Form,
}

pub fn su3_scaled(s: &AlmostHermitian, domega: &Form, theta: &Form) -> Option<Su3Scaled> {
    if s.n() != 3 {
        return None;
    }
    let phi = lambda30_part(domega, s.j());
    if phi.is_zero() {
        return None;
    }
    let w = phi.norm2().div_int(36);
    let w_inv = w.inverse().ok()?;
    let phi_minus = ops::form_of(&j_slot_form(&phi.to_tensor(), s.j(), 0));
    let st = star_term(s, &phi, &phi_minus);
    let eta = st.scale(&w_inv).scale_frac(1, 36).add(theta).scale_frac(1, 3);
    Some(Su3Scaled { phi, phi_minus, w, eta })
}

/// Component splits used by reports.
pub fn two_form_split(s: &AlmostHermitian, a: &Tensor) -> TwoFormSplit {
    split_two_form(s, &ops::form_of(a))
}
