//! Exact residuals of the identities relating torsion, Lee form and curvature.

use crate::analysis::Analysis;
use crate::curvature::lambda30_part;
use crate::form::Form;
use crate::ops::{
    at, b_j, cross, div_ee, div_xy, ex_ey, ex_jey, outer, p11, p20, r_omega, thx, trace, trace_vec, xe_ye, xe_yje,
};
use crate::scalar::{rat, Rational, Scalar};
use crate::structure::{j_output, j_slot};
use crate::tensor::{einsum, Tensor};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Passed,
    Failed,
    Skipped(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityCheck {
    pub id: &'static str,
    pub statement: &'static str,
    pub status: Status,
    /// Every residual must vanish identically for the check to pass.
    pub residuals: Vec<Tensor>,
}

impl IdentityCheck {
    pub fn passed(&self) -> bool {
        self.status == Status::Passed
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Failed
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditReport {
    pub structure: String,
    pub checks: Vec<IdentityCheck>,
}

impl AuditReport {
    pub fn count(&self) -> (usize, usize, usize) {
        let pass = self.checks.iter().filter(|c| c.passed()).count();
        let fail = self.checks.iter().filter(|c| c.failed()).count();
        (pass, fail, self.checks.len() - pass - fail)
    }

    pub fn all_passed(&self) -> bool {
        !self.checks.iter().any(IdentityCheck::failed)
    }

    pub fn get(&self, id: &str) -> Option<&IdentityCheck> {
        self.checks.iter().find(|c| c.id == id)
    }
}

/// Stable identity ids with a plain statement of each.
pub const CATALOG: &[(&str, &str)] = &[
    ("F1", "J² = −Id, J orthogonal, ω = ⟨·,J·⟩"),
    ("F2", "Levi-Civita connection is metric and torsion-free"),
    ("F3", "ξ takes values in 𝔲(n)^⊥ and ∇J = 2Jξ"),
    ("F4", "minimal connection preserves ω and g; Chern unitary iff W₃⊕W₄; Tʰ(JX,Y) = JTʰ(X,Y) when Hermitian"),
    ("F5", "Lee form from d*ω equals the torsion-trace Lee form"),
    ("F6", "ξ₍ᵢ₎ reconstruct ξ, are orthogonal, ξ₍₂₎∘J ⊥ ξ₍₁₎, ξ₍₁₎ = ξ₍₃₎ = 0 when n = 2"),
    ("F7", "dω from ξ; N = 0 ⟺ ξ₍₁₎ = ξ₍₂₎ = 0; dω = 0 ⟺ ξ₍₁₎ = ξ₍₃₎ = ξ₍₄₎ = 0; θ = 0 ⟺ ξ₍₄₎ = 0; (dω)_W₄ = θ∧ω"),
    ("L3.1a", "Σ⟨∇ᵁ_{e_j}(ξ₍₄₎_{e_i}e_i), Je_j⟩ = 0"),
    ("L3.1b", "skew torsion identity from (d²ω)_[λ¹,¹]"),
    ("L3.1c", "skew torsion identity from (d²ω)_[[λ²,⁰]]"),
    ("E3.1", "d²ω expressed through ξ and ∇ᵁξ vanishes"),
    ("P3.4R", "(dθ)_ℝω = 0"),
    ("P3.4H", "((n−2)/2)(dθ)_[λ₀¹,¹] in terms of ξ"),
    ("P3.4S", "((n−2)/2)(dθ)_[[λ²,⁰]] in terms of ξ"),
    ("P3.6i", "W₂⊕W₄ with n > 2 has closed Lee form"),
    ("P3.6ii.a", "W₁⊕W₄ has (dθ)_[λ₀¹,¹] = 0"),
    ("P3.6ii.b", "W₁⊕W₄ with n = 3 has dθ = 0"),
    ("P3.6ii.c", "W₁⊕W₄ with ξ₍₁₎ ≠ 0 has θ = 0"),
    ("SU3", "scaled SU(3) structure equations for Φ = (dω)_[[λ³,⁰]]"),
    ("R3.3", "R = Rᵁ + (∇ᵁ_Xξ)_Y − (∇ᵁ_Yξ)_X + ξ_{ξ_XY} − ξ_{ξ_YX} − [ξ_X,ξ_Y]"),
    ("E4.1", "Ric − Ric* in terms of ∇ᵁξ and ξ"),
    ("E4.2", "(Ric − Ric*)_[λ¹,¹] in terms of ξ and θ"),
    ("L4.1", "s − s* = 2(n−1)d*θ + (n−1)²‖θ‖² + 4‖ξ₍₁₎‖² − 2‖ξ₍₂₎‖²"),
    ("E4.4", "Ric*_[[λ²,⁰]] in terms of ξ₍ᵢ₎ and dθ"),
    ("E4.5", "Ric*_[[λ²,⁰]] in terms of divergences of ξ₍ᵢ₎"),
    ("E4.5a", "Ric*_[[λ²,⁰]] from ∇ᵁξ and the trace of ξ"),
    ("SIGMA", "Ric_[[σ²,⁰]] in terms of ξ₍ᵢ₎ and ∇ᵁξ₍₂₎, ∇ᵁξ₍₄₎"),
    ("P4.3i", "ξ₍₃₎ = 0: Ric*_[[λ²,⁰]] = −div ξ₍₂₎ + ((n+1)/6)(dθ)_[[λ²,⁰]] + (n/2)ξ₍₂₎_θ"),
    ("P4.3ii.a", "Hermitian: Ric*_[[λ²,⁰]] = ((n−1)/2)(dθ)_[[λ²,⁰]]"),
    ("P4.3ii.a2", "Hermitian, n > 2: Ric*_[[λ²,⁰]] from div ξ₍₃₎ and ξ₍₃₎_θ"),
    ("P4.3ii.b", "Hermitian, n = 2: (Ric − Ric*)_[λ¹,¹] is a multiple of g"),
    ("P4.4", "ξ₍₂₎ = 0: Ric_[[σ²,⁰]] in terms of ∇θ, θ⊗θ, ξ₍₁₎ and ξ₍₃₎"),
    ("P4.6i.rhoU", "ρ of the minimal connection lies in [λ¹,¹]"),
    ("P4.6i.drU", "r of the minimal connection is closed"),
    ("P4.6ii.a", "Ric*(X,JY) = ρ_∇(X,Y)"),
    ("P4.6ii.b", "ρ_∇ = r_∇"),
    ("P4.6ii.c", "r_∇ = r_ᵁ + ⟨ξ_Xe_i, ξ_YJe_i⟩"),
    ("P4.6ii.d", "r_∇ − r_ᵁ expanded in ξ₍ᵢ₎ and θ"),
    ("P4.6iii.a", "ρ_∇[λ¹,¹] = ρ_ᵁ + ⟨ξ_{e_i}X, ξ_{Je_i}Y⟩"),
    ("P4.6iii.b", "ρ_∇[λ¹,¹] − ρ_ᵁ expanded in ξ₍ᵢ₎ and θ"),
    ("P4.8i.a", "Hermitian: r_Chern = r_ᵁ + ((n−1)/2)dJθ"),
    ("P4.8i.b", "Hermitian: r_Chern = (r_ᵁ)_[λ¹,¹] + ((n−1)/2)(dJθ)_[λ¹,¹]"),
    ("P4.8ii", "Hermitian: ρ_Chern in terms of ρ_∇, ∇ᵁξ₍₃₎ and θ"),
    ("P4.10", "½(Ric + 3Ric*)_[λ¹,¹] = ½(Ric − Ric*)_[λ¹,¹] − 2(r_∇)_[λ¹,¹](X,JY)"),
    ("C4.11", "s + 3s* = 8⟨r_ᵁ,ω⟩ + 2(n−1)d*θ + (n−3)(n−1)‖θ‖² + 8‖ξ₍₁₎‖² + 2‖ξ₍₂₎‖² − 4‖ξ₍₃₎‖²"),
    ("C4.11.s", "s = s* + 2(n−1)d*θ + (n−1)²‖θ‖² + 4‖ξ₍₁₎‖² − 2‖ξ₍₂₎‖²"),
    ("C4.11.s*", "s* = 2⟨r_ᵁ,ω⟩ − ½(n−1)‖θ‖² + ‖ξ₍₁₎‖² + ‖ξ₍₂₎‖² − ‖ξ₍₃₎‖²"),
    ("R4.7", "r_ᵁ = −n dη̂"),
];

/// Derived tensors shared by the torsion-side formulas.
struct Ctx<'a> {
    a: &'a Analysis,
    n: i64,
    j: Tensor,
    om: Tensor,
    xi: Tensor,
    x: [Tensor; 4],
    th: Tensor,
    jth: Tensor,
    dx: [Tensor; 4],
    dxi: Tensor,
    v4: Tensor,
    dv4: Tensor,
    nth: Tensor,
    dth: Tensor,
    codth: Scalar,
    nt2: Scalar,
    nrm: [Scalar; 4],
    ric: Tensor,
    rics: Tensor,
    rho: Tensor,
    r: Tensor,
    rho_u: Tensor,
    r_u: Tensor,
    hermitian: bool,
}

fn fr(n: i64, d: i64) -> Rational {
    rat(n, d)
}

fn skew(t: &Tensor) -> Tensor {
    t.sub(&t.transpose())
}

fn sym(t: &Tensor) -> Tensor {
    t.symmetric_part()
}

fn sc(s: &Scalar) -> Tensor {
    Tensor::scalar(s.clone())
}

fn flag(ok: bool) -> Tensor {
    Tensor::scalar(if ok { Scalar::zero() } else { Scalar::one() })
}

fn mat(f: &Form) -> Tensor {
    f.to_tensor()
}

impl<'a> Ctx<'a> {
    fn new(a: &'a Analysis) -> Self {
        let s = &a.structure;
        let j = s.j().clone();
        let om = s.omega().to_tensor();
        let x = a.decomposition.parts.clone();
        let th = a.theta().to_tensor();
        let jth = einsum("ab,b->a", &[&j, &th]);
        let dx = [0, 1, 2, 3].map(|i| a.minimal.covariant_derivative(&x[i]));
        let dxi = a.minimal.covariant_derivative(&a.xi);
        let v4 = trace_vec(&x[3]);
        let dv4 = einsum("a,jak->jk", &[&v4, &a.minimal.gamma]);
        let nth = a.levi_civita.covariant_derivative(&th);
        let nrm = a.decomposition.norms.clone();
        let hermitian = nrm[0].is_zero() && nrm[1].is_zero();
        Ctx {
            a,
            n: s.n() as i64,
            j,
            om,
            xi: a.xi.clone(),
            x,
            th,
            jth,
            dx,
            dxi,
            v4,
            dv4,
            nth,
            dth: mat(&a.dtheta.dtheta),
            codth: a.codiff_theta.clone(),
            nt2: a.theta_norm2.clone(),
            nrm,
            ric: a.ricci.ric.clone(),
            rics: a.ricci.ric_star.clone(),
            rho: a.forms_lc.rho.clone(),
            r: a.forms_lc.r.clone(),
            rho_u: a.forms_minimal.rho.clone(),
            r_u: a.forms_minimal.r.clone(),
            hermitian,
        }
    }

    fn id(&self) -> Tensor {
        Tensor::identity(self.j.dim())
    }

    fn p11(&self, b: &Tensor) -> Tensor {
        p11(b, &self.j)
    }

    fn p20(&self, b: &Tensor) -> Tensor {
        p20(b, &self.j)
    }

    fn jb(&self, b: &Tensor) -> Tensor {
        crate::ops::jb(b, &self.j)
    }

    fn x(&self, w: usize) -> &Tensor {
        &self.x[w - 1]
    }

    fn dx(&self, w: usize) -> &Tensor {
        &self.dx[w - 1]
    }

    fn d(&self, t: &Tensor) -> Tensor {
        let f = Form::from_tensor(t).expect("form");
        self.a.structure.d(&f).to_tensor()
    }

    fn jthetas(&self, a: &Tensor) -> Tensor {
        skew(&thx(a, &self.jth))
    }

    fn t_j_t(&self) -> Tensor {
        outer(&self.th, &self.jth).sub(&outer(&self.jth, &self.th))
    }

    fn djth(&self) -> Tensor {
        let f = Form::from_tensor(&self.jth).expect("1-form");
        mat(&self.a.structure.d(&f))
    }

    fn rs20(&self) -> Tensor {
        self.p20(&self.rics)
    }

    fn d20(&self) -> Tensor {
        self.p20(&self.dth)
    }

    fn e42_rhs(&self) -> Tensor {
        let n = self.n;
        let (x1, x2, x3) = (self.x(1), self.x(2), self.x(3));
        let jtth = self.jth.neg();
        div_xy(self.dx(3))
            .scale_frac(-2, 1)
            .sub(&self.nth.add(&self.jb(&self.nth)).scale_frac(n - 2, 2))
            .add(&self.id().scale(&(&self.codth + &self.nt2.scale(&fr(2 * n - 3, 2)))).scale_frac(1, 2))
            .add(&xe_ye(x1, x1).scale_frac(4, 1))
            .sub(&ex_ey(x2, x2).scale_frac(2, 1))
            .sub(&outer(&self.th, &self.th).add(&outer(&jtth, &jtth)).scale_frac(n - 2, 4))
            .sub(&xe_ye(x1, x2).scale_frac(2, 1))
            .add(&xe_ye(x1, x2).transpose())
            .add(&thx(x3, &self.th).scale_frac(n - 2, 1))
    }

    fn l41_rhs(&self) -> Scalar {
        let n = self.n;
        self.codth.scale(&fr(2 * (n - 1), 1))
            + self.nt2.scale(&fr((n - 1) * (n - 1), 1))
            + self.nrm[0].scale(&fr(4, 1))
            - self.nrm[1].scale(&fr(2, 1))
    }

    fn r_u_omega(&self) -> Scalar {
        crate::ops::form_inner2(&self.r_u, &self.om)
    }

    fn s_star_rhs(&self) -> Scalar {
        let n = self.n;
        self.r_u_omega().scale(&fr(2, 1)) - self.nt2.scale(&fr(n - 1, 2)) + &self.nrm[0] + &self.nrm[1] - &self.nrm[2]
    }

    fn dω_from(&self, t: &Tensor) -> Tensor {
        let a = einsum("yzk,kw->yzw", &[t, &self.j]);
        a.add(&a.permute(&[1, 2, 0])).add(&a.permute(&[2, 0, 1]))
    }
}

fn skip(reason: &str) -> Result<Vec<Tensor>, String> {
    Err(reason.to_string())
}

fn evaluate(c: &Ctx, id: &str) -> Result<Vec<Tensor>, String> {
    let n = c.n;
    let j = &c.j;
    let a = c.a;
    let s = &a.structure;
    let (x1, x2, x3, x4) = (c.x(1), c.x(2), c.x(3), c.x(4));
    let xi = &c.xi;
    let th = &c.th;
    let k1 = fr(n - 2, n - 1);
    Ok(match id {
        "F1" => {
            let dim = j.dim();
            vec![
                j.matmul(j).add(&Tensor::identity(dim)),
                j.transpose().matmul(j).sub(&Tensor::identity(dim)),
                c.om.sub(j),
            ]
        }
        "F2" => {
            let g = &a.levi_civita.gamma;
            vec![g.add(&g.permute(&[0, 2, 1])), a.levi_civita.torsion(s.algebra())]
        }
        "F3" => vec![
            xi.add(&xi.permute(&[0, 2, 1])),
            j_output(xi, j).add(&j_slot(xi, j, 1)),
            a.levi_civita.derivative_of_j(j).sub(&j_output(xi, j).scale_frac(2, 1)),
        ],
        "F4" => {
            let gu = &a.minimal.gamma;
            let mut out = vec![
                a.minimal.covariant_derivative(&c.om),
                gu.add(&gu.permute(&[0, 2, 1])),
                flag(a.chern_unitary == c.hermitian),
            ];
            if c.hermitian {
                let t = a.chern.torsion(s.algebra());
                out.push(j_slot(&t, j, 0).sub(&j_output(&t, j)));
            }
            out
        }
        "F5" => {
            let via_trace = trace_vec(xi).scale_frac(2, n - 1);
            let codiff = s.codifferential(s.omega());
            let via_codiff = s.j_one_form(&codiff).scale_frac(-1, n - 1).to_tensor();
            vec![th.sub(&via_trace), th.sub(&via_codiff)]
        }
        "F6" => {
            let total = c.x.iter().fold(Tensor::zeros(xi.dim(), 3), |acc, p| acc.add(p));
            let mut out = vec![total.sub(xi)];
            for p in 0..4 {
                for q in p + 1..4 {
                    out.push(sc(&c.x[p].dot(&c.x[q])));
                }
            }
            out.push(einsum("jik,ci,jck->", &[x1, j, x2]));
            if n == 2 {
                out.push(x1.clone());
                out.push(x3.clone());
            }
            out
        }
        "F7" => {
            let dom = mat(&a.domega);
            let mut out = vec![dom.scale_frac(1, 2).sub(&c.dω_from(xi))];
            let n_zero = a.nijenhuis.is_zero();
            out.push(flag(n_zero == (x1.is_zero() && x2.is_zero())));
            out.push(flag(a.domega.is_zero() == (x1.is_zero() && x3.is_zero() && x4.is_zero())));
            out.push(flag(th.is_zero() == x4.is_zero()));
            if c.hermitian {
                let theta_wedge_omega = a.theta().wedge(s.omega()).to_tensor();
                out.push(c.dω_from(x4).scale_frac(2, 1).sub(&theta_wedge_omega));
            }
            out
        }
        "L3.1a" => vec![einsum("jk,kj->", &[&c.dv4, j])],
        "L3.1b" => {
            let jdj = c.jb(&c.dv4);
            vec![skew(&c.dv4)
                .scale_rational(&-&k1)
                .sub(&skew(&div_xy(c.dx(3))).scale_frac(2, 1))
                .sub(&skew(&jdj).scale_rational(&k1))
                .sub(&skew(&xe_ye(x1, x2)).scale_frac(3, 1))]
        }
        "L3.1c" => vec![div_ee(c.dx(1))
            .scale_frac(3, 1)
            .sub(&div_ee(c.dx(3)))
            .add(&div_ee(c.dx(4)).scale_frac(n - 2, 1))
            .sub(&skew(&xe_ye(x3, x1)))
            .add(&skew(&xe_ye(x3, x2)).scale_frac(1, 2))
            .sub(&at(x1, &c.v4).scale_frac(n - 5, n - 1))
            .sub(&at(x2, &c.v4).scale_rational(&k1))
            .add(&at(x3, &c.v4))],
        "E3.1" => vec![e31(c)],
        "P3.4R" => vec![r_omega(&c.dth, &c.om, n as usize)],
        "P3.4H" => {
            let d11 = c.p11(&c.dth).sub(&r_omega(&c.dth, &c.om, n as usize));
            let rhs = skew(&div_xy(c.dx(3)))
                .neg()
                .add(&skew(&thx(x3, th)).scale_frac(n - 2, 2))
                .sub(&skew(&xe_ye(x1, x2)).scale_frac(3, 2));
            vec![d11.scale_frac(n - 2, 2).sub(&rhs)]
        }
        "P3.4S" => {
            let rhs = div_ee(c.dx(1))
                .scale_frac(-3, 1)
                .add(&div_ee(c.dx(3)))
                .add(&skew(&xe_ye(x3, x1)))
                .sub(&skew(&xe_ye(x3, x2)).scale_frac(1, 2))
                .add(&at(x1, th).scale_frac(3 * (n - 3), 2))
                .sub(&at(x3, th).scale_frac(n - 1, 2));
            vec![c.d20().scale_frac(n - 2, 2).sub(&rhs)]
        }
        "P3.6i" => {
            if !(c.nrm[0].is_zero() && c.nrm[2].is_zero()) {
                return skip("requires type W₂⊕W₄");
            }
            if n == 2 {
                return skip("requires n > 2");
            }
            vec![c.dth.clone()]
        }
        "P3.6ii.a" | "P3.6ii.b" | "P3.6ii.c" => {
            if !(c.nrm[1].is_zero() && c.nrm[2].is_zero()) {
                return skip("requires type W₁⊕W₄");
            }
            if n == 2 {
                return skip("requires n > 2");
            }
            match id {
                "P3.6ii.a" => vec![c.p11(&c.dth).sub(&r_omega(&c.dth, &c.om, n as usize))],
                "P3.6ii.b" if n == 3 => vec![c.dth.clone()],
                "P3.6ii.b" => return skip("requires n = 3"),
                _ if !c.nrm[0].is_zero() => vec![th.clone()],
                _ => return skip("requires ξ₍₁₎ ≠ 0"),
            }
        }
        "SU3" => {
            if n != 3 {
                return skip("requires n = 3");
            }
            if !(c.nrm[1].is_zero() && c.nrm[2].is_zero()) {
                return skip("requires type W₁⊕W₄");
            }
            let Some(su3) = &a.su3 else {
                if lambda30_part(&a.domega, j).is_zero() {
                    return skip("dω has no [[λ³,⁰]] part");
                }
                return skip("(w₁⁺)² is not a nonzero constant");
            };
            let th_f = a.theta();
            let om_f = s.omega();
            let k = su3.eta.scale_frac(-3, 1).add(th_f);
            let vol = s.vol().form();
            vec![
                mat(&a.domega.sub(&su3.phi).sub(&th_f.wedge(om_f))),
                mat(&s.d(&su3.phi).sub(&k.wedge(&su3.phi))),
                mat(&s
                    .d(&su3.phi_minus)
                    .sub(&om_f.wedge(om_f).scale(&su3.w.scale(&fr(6, 1))))
                    .sub(&k.wedge(&su3.phi_minus))),
                mat(&su3.phi.wedge(&su3.phi_minus).add(&vol.scale(&su3.w.scale(&fr(36, 1))))),
                x1.sub(&su3.phi_minus.to_tensor().scale_frac(1, 6)),
            ]
        }
        "R3.3" => {
            let rhs = a
                .riemann_minimal
                .add(&c.dxi)
                .sub(&c.dxi.permute(&[1, 0, 2, 3]))
                .add(&einsum("ijt,tkl->ijkl", &[xi, xi]))
                .sub(&einsum("jit,tkl->ijkl", &[xi, xi]))
                .sub(&einsum("jka,ial->ijkl", &[xi, xi]).sub(&einsum("ika,jal->ijkl", &[xi, xi])));
            vec![a.riemann.sub(&rhs)]
        }
        "E4.1" => {
            let rhs = div_xy(&c.dxi)
                .scale_frac(-2, 1)
                .add(&einsum("xiyi->xy", &[&c.dxi]).scale_frac(2, 1))
                .sub(&einsum("ixt,tyi->xy", &[xi, xi]).scale_frac(2, 1))
                .add(&einsum("xit,tyi->xy", &[xi, xi]).scale_frac(2, 1));
            vec![c.ric.sub(&c.rics).sub(&rhs)]
        }
        "E4.2" => vec![c.p11(&c.ric.sub(&c.rics)).sub(&c.e42_rhs())],
        "L4.1" => vec![sc(&(&a.ricci.s - &a.ricci.s_star - c.l41_rhs()))],
        "E4.4" => {
            let rhs = div_ee(c.dx(1))
                .scale_frac(2, 1)
                .sub(&div_ee(c.dx(2)))
                .add(&c.d20().scale_frac(n - 1, 2))
                .add(&skew(&xe_ye(x1, x3)))
                .sub(&at(x1, th).scale_frac(n - 3, 1))
                .sub(&skew(&xe_ye(x2, x3)).scale_frac(1, 2))
                .add(&at(x2, th).scale_frac(n, 2));
            vec![c.rs20().sub(&rhs)]
        }
        "E4.5" => {
            let rhs = div_ee(c.dx(1))
                .neg()
                .sub(&div_ee(c.dx(2)))
                .add(&div_ee(c.dx(3)))
                .add(&c.d20().scale_frac(1, 2))
                .add(&at(x1, th).scale_frac(n - 3, 2))
                .add(&at(x2, th).scale_frac(n, 2))
                .sub(&at(x3, th).scale_frac(n - 1, 2));
            vec![c.rs20().sub(&rhs)]
        }
        "E4.5a" => {
            let jv = einsum("ab,b->a", &[j, &trace_vec(xi)]);
            let rhs = einsum("ci,ax,icay->xy", &[j, j, &c.dxi]).sub(&einsum("t,ax,tay->xy", &[&jv, j, xi]));
            vec![c.rs20().sub(&rhs)]
        }
        "SIGMA" => {
            let inner = xe_ye(x1, x3)
                .scale_frac(2, 1)
                .sub(&xe_ye(x2, x3))
                .sub(&xe_ye(x2, x4))
                .sub(&cross(x3, x3).scale_frac(2, 1))
                .sub(&cross(x4, x4).scale_frac(2, 1))
                .add(&einsum("ixiy->xy", &[c.dx(2)]).scale_frac(2, 1))
                .sub(&einsum("xiiy->xy", &[c.dx(4)]).scale_frac(2, 1));
            vec![c.p20(&c.ric).sub(&c.p20(&sym(&inner)))]
        }
        "P4.3i" => {
            if !c.nrm[2].is_zero() {
                return skip("requires ξ₍₃₎ = 0");
            }
            let rhs = div_ee(c.dx(2)).neg().add(&c.d20().scale_frac(n + 1, 6)).add(&at(x2, th).scale_frac(n, 2));
            vec![c.rs20().sub(&rhs)]
        }
        "P4.3ii.a" | "P4.3ii.a2" | "P4.3ii.b" | "P4.8i.a" | "P4.8i.b" | "P4.8ii" => {
            if !c.hermitian {
                return skip("requires a Hermitian structure (ξ₍₁₎ = ξ₍₂₎ = 0)");
            }
            hermitian_check(c, id)?
        }
        "P4.4" => {
            if !c.nrm[1].is_zero() {
                return skip("requires ξ₍₂₎ = 0");
            }
            let inner = c
                .nth
                .sub(&thx(xi, th))
                .scale_frac(-(n - 1), 1)
                .sub(&outer(th, th).scale_frac(n - 1, 2))
                .add(&xe_ye(x1, x3).scale_frac(2, 1))
                .sub(&cross(x3, x3).scale_frac(2, 1));
            vec![c.p20(&c.ric).sub(&c.p20(&sym(&inner)))]
        }
        "P4.6i.rhoU" => vec![c.p20(&c.rho_u)],
        "P4.6i.drU" => vec![c.d(&c.r_u)],
        "P4.6ii.a" => vec![b_j(&c.rics, j).sub(&c.rho)],
        "P4.6ii.b" => vec![c.rho.sub(&c.r)],
        "P4.6ii.c" => vec![c.r.sub(&c.r_u).sub(&xe_yje(xi, xi, j))],
        "P4.6ii.d" => {
            let mut s1 = Tensor::zeros(j.dim(), 2);
            let mut s2 = Tensor::zeros(j.dim(), 2);
            for p in 1..=3 {
                s1 = s1.add(&xe_yje(c.x(p), c.x(p), j)).sub(&c.jthetas(c.x(p)));
                for q in p + 1..=3 {
                    s2 = s2.add(&skew(&xe_yje(c.x(p), c.x(q), j)));
                }
            }
            let rhs = c.r_u.add(&s1).add(&s2).sub(&c.om.scale(&c.nt2).scale_frac(1, 4)).sub(&c.t_j_t().scale_frac(1, 4));
            vec![c.r.sub(&rhs)]
        }
        "P4.6iii.a" => vec![c.p11(&c.rho).sub(&c.rho_u).sub(&ex_jey(xi, xi, j))],
        "P4.6iii.b" => {
            let mut t1 = Tensor::zeros(j.dim(), 2);
            let mut t2 = Tensor::zeros(j.dim(), 2);
            for p in 1..=3 {
                t1 = t1.add(&ex_jey(c.x(p), c.x(p), j));
                for q in p + 1..=3 {
                    t2 = t2.add(&skew(&ex_jey(c.x(p), c.x(q), j)));
                }
            }
            let rhs = c
                .rho_u
                .add(&t1)
                .sub(&c.om.scale(&c.nt2).scale_frac(1, 8))
                .add(&t2)
                .sub(&c.jthetas(x3).scale_frac(1, 2))
                .add(&c.t_j_t().scale_frac(n - 2, 8));
            vec![c.p11(&c.rho).sub(&rhs)]
        }
        "P4.10" => {
            let lhs = c.p11(&c.ric.add(&c.rics.scale_frac(3, 1))).scale_frac(1, 2);
            let r_lc = c.r_u.add(&xe_yje(xi, xi, j));
            let rhs = c.e42_rhs().scale_frac(1, 2).sub(&c.p11(&sym(&b_j(&r_lc, j))).scale_frac(2, 1));
            vec![lhs.sub(&rhs)]
        }
        "C4.11" => {
            let rhs = c.r_u_omega().scale(&fr(8, 1))
                + c.codth.scale(&fr(2 * (n - 1), 1))
                + c.nt2.scale(&fr((n - 3) * (n - 1), 1))
                + c.nrm[0].scale(&fr(8, 1))
                + c.nrm[1].scale(&fr(2, 1))
                - c.nrm[2].scale(&fr(4, 1));
            vec![sc(&(&a.ricci.s + a.ricci.s_star.scale(&fr(3, 1)) - rhs))]
        }
        "C4.11.s" => vec![sc(&(&a.ricci.s - (c.s_star_rhs() + c.l41_rhs())))],
        "C4.11.s*" => vec![sc(&(&a.ricci.s_star - c.s_star_rhs()))],
        "R4.7" => {
            let Some(su) = &a.su else {
                return skip(if s.su().is_some() {
                    "no star formula for this dimension"
                } else {
                    "no complex volume form supplied"
                });
            };
            vec![c.r_u.add(&mat(&s.d(&su.eta_hat)).scale_frac(n, 1))]
        }
        other => return Err(format!("unknown identity {other}")),
    })
}

fn hermitian_check(c: &Ctx, id: &str) -> Result<Vec<Tensor>, String> {
    let n = c.n;
    let j = &c.j;
    let x3 = c.x(3);
    let a = c.a;
    let forms_h = a.forms_chern.as_ref().ok_or("Chern connection not unitary")?;
    Ok(match id {
        "P4.3ii.a" => vec![c.rs20().sub(&c.d20().scale_frac(n - 1, 2))],
        "P4.3ii.a2" => {
            if n == 2 {
                return skip("requires n > 2");
            }
            let rhs = div_ee(c.dx(3)).sub(&at(x3, &c.th).scale_frac(n - 1, 2)).scale_frac(n - 1, n - 2);
            vec![c.rs20().sub(&rhs)]
        }
        "P4.3ii.b" => {
            if n != 2 {
                return skip("requires n = 2");
            }
            let b = c.p11(&c.ric.sub(&c.rics));
            let tr = trace(&c.ric.sub(&c.rics)).div_int(2 * n);
            vec![b.sub(&c.id().scale(&tr))]
        }
        "P4.8i.a" => vec![forms_h.r.sub(&c.r_u).sub(&c.djth().scale_frac(n - 1, 2))],
        "P4.8i.b" => {
            let rhs = c.p11(&c.r_u).add(&c.p11(&c.djth()).scale_frac(n - 1, 2));
            vec![forms_h.r.sub(&rhs)]
        }
        _ => {
            let rhs = c
                .p11(&c.rho)
                .sub(&einsum("ixyc,ci->xy", &[c.dx(3), j]))
                .add(&einsum("iyxc,ci->xy", &[c.dx(3), j]))
                .sub(&c.p11(&c.djth()).scale_frac(1, 2))
                .add(&c.om.scale(&c.codth).scale_frac(1, 2))
                .add(&c.om.scale(&c.nt2).scale_frac(2 * n - 1, 4))
                .add(&c.t_j_t().scale_frac(1, 4))
                .add(&c.jthetas(x3).scale_frac(n, 2))
                .sub(&ex_jey(x3, x3, j).scale_frac(2, 1))
                .add(&xe_yje(x3, x3, j));
            vec![forms_h.rho.sub(&rhs)]
        }
    })
}

/// d²ω written through ξ: Σ over the six slot pairs of ±(F_{ab}ω)(c,d).
fn e31(c: &Ctx) -> Tensor {
    let xi = &c.xi;
    let dxi = &c.dxi;
    let om = &c.om;
    let f = dxi
        .sub(&dxi.permute(&[1, 0, 2, 3]))
        .add(&einsum("abt,tpq->abpq", &[xi, xi]))
        .sub(&einsum("bat,tpq->abpq", &[xi, xi]))
        .sub(&einsum("bpt,atq->abpq", &[xi, xi]).sub(&einsum("apt,btq->abpq", &[xi, xi])));
    let fo = einsum("abcq,qd->abcd", &[&f, om]).add(&einsum("abdq,cq->abcd", &[&f, om])).neg();
    let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    Tensor::from_fn(om.dim(), 4, |x| {
        let mut v = Scalar::zero();
        for &(p, q) in &pairs {
            let rest: Vec<usize> = (0..4).filter(|t| *t != p && *t != q).collect();
            let term = fo.get(&[x[p], x[q], x[rest[0]], x[rest[1]]]);
            if (p + q) % 2 == 1 {
                v -= term;
            } else {
                v += term;
            }
        }
        v
    })
}

fn statement(id: &str) -> &'static str {
    CATALOG.iter().find(|(i, _)| *i == id).map(|(_, s)| *s).unwrap_or("")
}

fn static_id(id: &str) -> &'static str {
    CATALOG.iter().find(|(i, _)| *i == id).map(|(i, _)| *i).unwrap_or("unknown")
}

fn check_with(ctx: &Ctx, id: &str) -> IdentityCheck {
    let (status, residuals) = match evaluate(ctx, id) {
        Ok(res) => {
            let ok = res.iter().all(Tensor::is_zero);
            (if ok { Status::Passed } else { Status::Failed }, res)
        }
        Err(reason) => (Status::Skipped(reason), Vec::new()),
    };
    IdentityCheck { id: static_id(id), statement: statement(id), status, residuals }
}

/// Runs one identity by id.
pub fn run_identity(a: &Analysis, id: &str) -> IdentityCheck {
    check_with(&Ctx::new(a), id)
}

/// Runs every identity of the catalog once.
pub fn run_suite(name: &str, a: &Analysis) -> AuditReport {
    let ctx = Ctx::new(a);
    let checks = CATALOG.iter().map(|(id, _)| check_with(&ctx, id)).collect();
    AuditReport { structure: name.to_string(), checks }
}
