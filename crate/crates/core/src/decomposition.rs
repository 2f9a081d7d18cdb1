//! Gray–Hervella splitting of the intrinsic torsion, the Lee form and U(n)-splittings of 2-tensors.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::form::Form;
use crate::ops;
use crate::scalar::{Rational, Scalar};
use crate::structure::{j_output, j_slot, AlmostHermitian, Connection};
use crate::tensor::{einsum, Tensor};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecompositionError {
    #[error("Lee form routes disagree (convention error): {0} vs {1}")]
    LeeMismatch(String, String),
    #[error("torsion decomposition invariant fails: {0}")]
    Invariant(String),
    #[error("bilinear form is not symmetric")]
    NotSymmetric,
    #[error("(dθ)_ℝω ≠ 0: {0}")]
    RealOmegaPart(String),
}

/// θ by both routes: −(1/(n−1))J d*ω and (2/(n−1))Σ(ξ_{e_i}e_i)♭.
pub fn lee_form(s: &AlmostHermitian, xi: &Tensor) -> Result<Form, DecompositionError> {
    let n1 = (s.n() - 1) as i64;
    let codiff = s.codifferential(s.omega());
    let via_codifferential = s.j_one_form(&codiff).scale_frac(-1, n1);
    let via_trace = ops::form_of(&ops::trace_vec(xi).scale_frac(2, n1));
    if via_codifferential != via_trace {
        return Err(DecompositionError::LeeMismatch(
            via_codifferential.render(s.params()),
            via_trace.render(s.params()),
        ));
    }
    Ok(via_trace)
}

/// (Tξ)_X = −Jξ_{JX}.
pub fn t_operator(xi: &Tensor, j: &Tensor) -> Tensor {
    j_output(&j_slot(xi, j, 0), j).neg()
}

/// 4ξ₍₄₎_X Y = ⟨X,Y⟩θ♯ − θ(Y)X − ⟨JX,Y⟩Jθ♯ + Jθ(Y)JX.
pub fn xi4_from_theta(theta: &Tensor, j: &Tensor) -> Tensor {
    let dim = theta.dim();
    let jth = einsum("ab,b->a", &[j, theta]);
    Tensor::from_fn(dim, 3, |idx| {
        let (x, y, z) = (idx[0], idx[1], idx[2]);
        let mut v = Scalar::zero();
        if x == y {
            v += theta.get(&[z]);
        }
        if x == z {
            v -= theta.get(&[y]);
        }
        v -= j.get(&[y, x]) * jth.get(&[z]);
        v += jth.get(&[y]) * j.get(&[z, x]);
        v.div_int(4)
    })
}

fn cyclic_average(a: &Tensor) -> Tensor {
    a.add(&a.permute(&[2, 0, 1])).add(&a.permute(&[1, 2, 0])).scale_frac(1, 3)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GhClass {
    pub members: [bool; 4],
}

impl GhClass {
    pub fn from_norms(norms: &[Scalar; 4]) -> Self {
        GhClass { members: [0, 1, 2, 3].map(|i| !norms[i].is_zero()) }
    }

    pub fn contains(&self, w: usize) -> bool {
        self.members[w - 1]
    }

    pub fn summands(&self) -> String {
        let parts: Vec<String> =
            (1..=4).filter(|&w| self.contains(w)).map(|w| format!("W{}", ["₁", "₂", "₃", "₄"][w - 1])).collect();
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join("⊕")
        }
    }

    pub fn name(&self) -> Option<&'static str> {
        match self.members {
            [false, false, false, false] => Some("Kähler"),
            [true, false, false, false] => Some("nearly Kähler"),
            [false, true, false, false] => Some("almost Kähler"),
            [false, false, true, false] => Some("balanced"),
            [false, false, false, true] => Some("locally conformal Kähler"),
            [false, false, true, true] => Some("Hermitian"),
            [true, true, false, false] => Some("quasi-Kähler"),
            _ => None,
        }
    }

    pub fn label(&self) -> String {
        match self.name() {
            Some("Kähler") => "Kähler".to_string(),
            Some(name) => format!("{} {}", self.summands(), name),
            None => self.summands(),
        }
    }

    pub fn is_hermitian(&self) -> bool {
        !self.members[0] && !self.members[1]
    }
}

impl fmt::Display for GhClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionDecomposition {
    /// ξ₍₁₎ … ξ₍₄₎ at indices 0 … 3.
    pub parts: [Tensor; 4],
    pub theta: Form,
    pub norms: [Scalar; 4],
}

impl TorsionDecomposition {
    pub fn part(&self, w: usize) -> &Tensor {
        &self.parts[w - 1]
    }

    pub fn norm2(&self, w: usize) -> &Scalar {
        &self.norms[w - 1]
    }

    pub fn class(&self) -> GhClass {
        GhClass::from_norms(&self.norms)
    }
}

fn raw_split(xi: &Tensor, theta: &Tensor, j: &Tensor) -> [Tensor; 4] {
    let t = t_operator(xi, j);
    let x34 = xi.add(&t).scale_frac(1, 2);
    let x12 = xi.sub(&t).scale_frac(1, 2);
    let x4 = xi4_from_theta(theta, j);
    let x3 = x34.sub(&x4);
    let x1 = cyclic_average(&x12);
    let x2 = x12.sub(&x1);
    [x1, x2, x3, x4]
}

fn in_u_perp(a: &Tensor, j: &Tensor) -> bool {
    a == &a.permute(&[0, 2, 1]).neg() && j_output(a, j).add(&j_slot(a, j, 1)).is_zero()
}

/// Splits ξ into its four Gray–Hervella components, checking every invariant exactly.
pub fn split_torsion(
    s: &AlmostHermitian,
    xi: &Tensor,
    theta: &Form,
) -> Result<TorsionDecomposition, DecompositionError> {
    let fail = |m: &str| Err(DecompositionError::Invariant(m.to_string()));
    let j = s.j();
    let th = theta.to_tensor();
    let parts = raw_split(xi, &th, j);
    let total = parts.iter().fold(Tensor::zeros(xi.dim(), 3), |acc, p| acc.add(p));
    if &total != xi {
        return fail("components do not sum to ξ");
    }
    for a in 0..4 {
        if !in_u_perp(&parts[a], j) {
            return fail(&format!("ξ₍{}₎ is not in T*⊗𝔲(n)^⊥", a + 1));
        }
        for b in a + 1..4 {
            if !parts[a].dot(&parts[b]).is_zero() {
                return fail(&format!("ξ₍{}₎ and ξ₍{}₎ are not orthogonal", a + 1, b + 1));
            }
        }
    }
    if t_operator(&parts[3], j) != parts[3] {
        return fail("Tξ₍₄₎ ≠ ξ₍₄₎");
    }
    for (a, part) in parts.iter().enumerate() {
        let theta_a = ops::trace_vec(part).scale_frac(2, (s.n() - 1) as i64);
        let again = raw_split(part, &theta_a, j);
        for (b, piece) in again.iter().enumerate() {
            let expected = if a == b { part.clone() } else { Tensor::zeros(part.dim(), 3) };
            if piece != &expected {
                return fail(&format!("re-splitting ξ₍{}₎ is not idempotent", a + 1));
            }
        }
    }
    if s.n() == 2 && !(parts[0].is_zero() && parts[2].is_zero()) {
        return fail("ξ₍₁₎ and ξ₍₃₎ must vanish for n = 2");
    }
    let norms = [0, 1, 2, 3].map(|a| parts[a].norm2());
    Ok(TorsionDecomposition { parts, theta: theta.clone(), norms })
}

pub fn classify(dec: &TorsionDecomposition) -> GhClass {
    dec.class()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoFormSplit {
    pub r_omega: Form,
    pub lambda0_11: Form,
    pub lambda20: Form,
}

pub fn split_two_form(s: &AlmostHermitian, a: &Form) -> TwoFormSplit {
    let aj = s.j_two_form(a);
    let inv = a.add(&aj).scale_frac(1, 2);
    let anti = a.sub(&aj).scale_frac(1, 2);
    let r_omega = s.omega().scale(&a.inner(s.omega()).div_int(s.n() as i64));
    TwoFormSplit { lambda0_11: inv.sub(&r_omega), r_omega, lambda20: anti }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetricSplit {
    /// Coefficient c of the trace part c·⟨·,·⟩.
    pub trace_coefficient: Scalar,
    pub lambda0_11: Tensor,
    pub sigma20: Tensor,
}

impl SymmetricSplit {
    pub fn trace_part(&self) -> Tensor {
        Tensor::identity(self.lambda0_11.dim()).scale(&self.trace_coefficient)
    }
}

pub fn split_symmetric(s: &AlmostHermitian, b: &Tensor) -> Result<SymmetricSplit, DecompositionError> {
    if !b.is_symmetric() {
        return Err(DecompositionError::NotSymmetric);
    }
    let j = s.j();
    let c = ops::trace(b).div_int(s.dim() as i64);
    let inv = ops::p11(b, j);
    let lambda0_11 = inv.sub(&Tensor::identity(s.dim()).scale(&c));
    Ok(SymmetricSplit { trace_coefficient: c, lambda0_11, sigma20: ops::p20(b, j) })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DthetaReport {
    pub dtheta: Form,
    pub split: TwoFormSplit,
    /// Torsion-side values of the [λ₀¹,¹] and [[λ²,⁰]] components; `None` when n = 2.
    pub rhs_lambda0_11: Option<Form>,
    pub rhs_lambda20: Option<Form>,
}

impl DthetaReport {
    pub fn trivial_at_n2(&self) -> bool {
        self.rhs_lambda0_11.is_none()
    }
}

/// dθ and its three components, with the ℝω part required to vanish and, for n > 2, the
/// torsion-side evaluations of the other two components.
pub fn dtheta_report(
    s: &AlmostHermitian,
    dec: &TorsionDecomposition,
    minimal: &Connection,
) -> Result<DthetaReport, DecompositionError> {
    let dtheta = s.d(&dec.theta);
    let split = split_two_form(s, &dtheta);
    if !split.r_omega.is_zero() {
        return Err(DecompositionError::RealOmegaPart(split.r_omega.render(s.params())));
    }
    let n = s.n() as i64;
    if n == 2 {
        return Ok(DthetaReport { dtheta, split, rhs_lambda0_11: None, rhs_lambda20: None });
    }
    let th = dec.theta.to_tensor();
    let [x1, x2, x3, _] = &dec.parts;
    let d1 = minimal.covariant_derivative(x1);
    let d3 = minimal.covariant_derivative(x3);
    let skew = |t: &Tensor| t.sub(&t.transpose());
    let herm = ops::div_xy(&d3)
        .neg()
        .add(&ops::div_xy(&d3).transpose())
        .add(&skew(&ops::thx(x3, &th)).scale_frac(n - 2, 2))
        .sub(&skew(&ops::xe_ye(x1, x2)).scale_frac(3, 2));
    let anti = ops::div_ee(&d1)
        .scale_frac(-3, 1)
        .add(&ops::div_ee(&d3))
        .add(&skew(&ops::xe_ye(x3, x1)))
        .sub(&skew(&ops::xe_ye(x3, x2)).scale_frac(1, 2))
        .add(&ops::at(x1, &th).scale_frac(3 * (n - 3), 2))
        .sub(&ops::at(x3, &th).scale_frac(n - 1, 2));
    let k = Rational::new(BigInt::from(2), BigInt::from(n - 2));
    Ok(DthetaReport {
        dtheta,
        split,
        rhs_lambda0_11: Some(ops::form_of(&herm.scale_rational(&k))),
        rhs_lambda20: Some(ops::form_of(&anti.scale_rational(&k))),
    })
}

/// A parameter value at which some torsion norm vanishes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Specialization {
    pub parameter: String,
    pub value: Rational,
    pub class: GhClass,
}

/// Rational roots of the univariate norm polynomials, with the class found there.
pub fn class_specializations(dec: &TorsionDecomposition, params: &[String]) -> Vec<Specialization> {
    let mut out: Vec<Specialization> = Vec::new();
    for norm in &dec.norms {
        let vars = norm.parameters();
        if vars.len() != 1 || norm.ext() != 0 {
            continue;
        }
        let var = vars[0];
        for root in rational_roots(norm, var) {
            let mut bindings = vec![None; var + 1];
            bindings[var] = Some(root.clone());
            let evaluated: Option<Vec<Scalar>> = dec.norms.iter().map(|x| x.evaluate(&bindings).ok()).collect();
            let Some(evaluated) = evaluated else { continue };
            let class = GhClass::from_norms(&[
                evaluated[0].clone(),
                evaluated[1].clone(),
                evaluated[2].clone(),
                evaluated[3].clone(),
            ]);
            let parameter = params.get(var).cloned().unwrap_or_else(|| format!("#{var}"));
            if class != dec.class() && !out.iter().any(|s| s.parameter == parameter && s.value == root) {
                out.push(Specialization { parameter, value: root, class });
            }
        }
    }
    out.sort_by(|a, b| a.parameter.cmp(&b.parameter).then(a.value.cmp(&b.value)));
    out
}

const DIVISOR_LIMIT: u64 = 1 << 40;

fn divisors(n: &BigInt) -> Option<Vec<u64>> {
    let n = n.abs().to_u64().filter(|&v| v <= DIVISOR_LIMIT)?;
    let mut out = Vec::new();
    let mut k = 1u64;
    while k * k <= n {
        if n % k == 0 {
            out.push(k);
            out.push(n / k);
        }
        k += 1;
    }
    Some(out)
}

/// Rational roots of a univariate polynomial with rational coefficients.
pub fn rational_roots(p: &Scalar, var: usize) -> Vec<Rational> {
    let mut coeffs: Vec<Rational> = Vec::new();
    for (m, r, _) in p.terms() {
        let e = m.exponent(var) as usize;
        if coeffs.len() <= e {
            coeffs.resize(e + 1, Rational::zero());
        }
        coeffs[e] += r;
    }
    let lcm = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = coeffs.iter().map(|c| (c * Rational::from_integer(lcm.clone())).to_integer()).collect();
    let mut roots = Vec::new();
    let low = ints.iter().position(|c| !c.is_zero());
    let Some(low) = low else { return roots };
    if low > 0 {
        roots.push(Rational::zero());
    }
    let high = ints.len() - 1;
    if high == low {
        return roots;
    }
    let (Some(ps), Some(qs)) = (divisors(&ints[low]), divisors(&ints[high])) else { return roots };
    let eval = |x: &Rational| {
        let mut bindings = vec![None; var + 1];
        bindings[var] = Some(x.clone());
        p.evaluate(&bindings).map(|v| v.is_zero()).unwrap_or(false)
    };
    for num in &ps {
        for den in &qs {
            for sign in [1i64, -1] {
                let cand = Rational::new(BigInt::from(*num) * sign, BigInt::from(*den));
                if !roots.contains(&cand) && eval(&cand) {
                    roots.push(cand);
                }
            }
        }
    }
    roots.sort();
    roots
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn roots_of_simple_polynomials() {
        let q = vec!["q".to_string()];
        let p = Scalar::parse("q^2 - 1/4", &q, 0).unwrap();
        assert_eq!(rational_roots(&p, 0), vec![rat(-1, 2), rat(1, 2)]);
        let p = Scalar::parse("1 + q^2", &q, 0).unwrap();
        assert!(rational_roots(&p, 0).is_empty());
        let p = Scalar::parse("3*q^3 - 2*q^2", &q, 0).unwrap();
        assert_eq!(rational_roots(&p, 0), vec![rat(0, 1), rat(2, 3)]);
    }

    #[test]
    fn class_labels() {
        let none = GhClass { members: [false; 4] };
        assert_eq!(none.label(), "Kähler");
        let w4 = GhClass { members: [false, false, false, true] };
        assert_eq!(w4.label(), "W₄ locally conformal Kähler");
        let w34 = GhClass { members: [false, false, true, true] };
        assert_eq!(w34.label(), "W₃⊕W₄ Hermitian");
        assert!(w34.is_hermitian());
        let w14 = GhClass { members: [true, false, false, true] };
        assert_eq!(w14.label(), "W₁⊕W₄");
    }
}
