//! Invariant exterior forms stored on sorted index tuples.

use std::fmt;

use thiserror::Error;

use crate::scalar::{Rational, Scalar};
use crate::tensor::{multi_indices, Tensor};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormError {
    #[error("degree mismatch: {0} vs {1}")]
    Degree(usize, usize),
    #[error("dimension mismatch: {0} vs {1}")]
    Dimension(usize, usize),
    #[error("tensor is not antisymmetric")]
    NotAntisymmetric,
    #[error("codifferential of a 0-form")]
    ZeroDegree,
    #[error("volume coefficient must be a nonzero constant")]
    BadVolume,
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Sorted k-subsets of 0..n in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(binomial(n, k));
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

fn combo_rank(n: usize, combo: &[usize]) -> usize {
    let k = combo.len();
    let mut rank = 0;
    let mut prev = 0;
    for (i, &c) in combo.iter().enumerate() {
        for j in prev..c {
            rank += binomial(n - 1 - j, k - 1 - i);
        }
        prev = c + 1;
    }
    rank
}

/// Sorts the indices, returning the permutation sign, or `None` on a repeat.
pub fn sort_with_sign(idx: &[usize]) -> Option<(Vec<usize>, i64)> {
    let mut v = idx.to_vec();
    let mut sign = 1;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some((v, sign))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Form {
    dim: usize,
    degree: usize,
    coeffs: Vec<Scalar>,
}

impl Form {
    pub fn zero(dim: usize, degree: usize) -> Self {
        Form { dim, degree, coeffs: vec![Scalar::zero(); binomial(dim, degree)] }
    }

    pub fn constant(dim: usize, c: Scalar) -> Self {
        Form { dim, degree: 0, coeffs: vec![c] }
    }

    /// `c·e^{i_1…i_p}` for 0-based indices in any order.
    pub fn monomial(dim: usize, idx: &[usize], c: Scalar) -> Self {
        let mut f = Form::zero(dim, idx.len());
        f.add_term(idx, &c);
        f
    }

    pub fn basis(dim: usize, idx: &[usize]) -> Self {
        Form::monomial(dim, idx, Scalar::one())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    /// Coefficient on any index tuple, with antisymmetry applied.
    pub fn get(&self, idx: &[usize]) -> Scalar {
        match sort_with_sign(idx) {
            None => Scalar::zero(),
            Some((sorted, sign)) => {
                let c = &self.coeffs[combo_rank(self.dim, &sorted)];
                if sign < 0 {
                    -c
                } else {
                    c.clone()
                }
            }
        }
    }

    /// Coefficient on a sorted index tuple.
    pub fn get_sorted(&self, sorted: &[usize]) -> &Scalar {
        &self.coeffs[combo_rank(self.dim, sorted)]
    }

    pub fn add_term(&mut self, idx: &[usize], c: &Scalar) {
        assert_eq!(idx.len(), self.degree, "degree mismatch");
        if let Some((sorted, sign)) = sort_with_sign(idx) {
            let r = combo_rank(self.dim, &sorted);
            if sign < 0 {
                self.coeffs[r] -= c;
            } else {
                self.coeffs[r] += c;
            }
        }
    }

    /// Nonzero terms on sorted tuples.
    pub fn terms(&self) -> impl Iterator<Item = (Vec<usize>, &Scalar)> {
        combinations(self.dim, self.degree).into_iter().zip(self.coeffs.iter()).filter(|(_, c)| !c.is_zero())
    }

    fn check(&self, other: &Form) {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        assert_eq!(self.degree, other.degree, "degree mismatch");
    }

    pub fn add(&self, other: &Form) -> Form {
        self.check(other);
        Form {
            dim: self.dim,
            degree: self.degree,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Form) -> Form {
        self.check(other);
        Form {
            dim: self.dim,
            degree: self.degree,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn neg(&self) -> Form {
        self.scale(&Scalar::from_int(-1))
    }

    pub fn scale(&self, c: &Scalar) -> Form {
        Form { dim: self.dim, degree: self.degree, coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn scale_rational(&self, r: &Rational) -> Form {
        Form { dim: self.dim, degree: self.degree, coeffs: self.coeffs.iter().map(|a| a.scale(r)).collect() }
    }

    pub fn scale_frac(&self, n: i64, d: i64) -> Form {
        self.scale_rational(&crate::scalar::rat(n, d))
    }

    /// Determinant-convention wedge: e^i ∧ e^j = e^{ij}.
    pub fn wedge(&self, other: &Form) -> Form {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let mut out = Form::zero(self.dim, self.degree + other.degree);
        if out.coeffs.is_empty() {
            return out;
        }
        for (a, ca) in self.terms() {
            for (b, cb) in other.terms() {
                if a.iter().any(|i| b.contains(i)) {
                    continue;
                }
                let mut idx = a.clone();
                idx.extend(&b);
                out.add_term(&idx, &(ca * cb));
            }
        }
        out
    }

    /// Interior product X⌟α with X = Σ x_a e_a.
    pub fn interior(&self, x: &[Scalar]) -> Form {
        assert!(self.degree > 0, "interior product of a 0-form");
        let mut out = Form::zero(self.dim, self.degree - 1);
        for rest in combinations(self.dim, self.degree - 1) {
            let mut total = Scalar::zero();
            for (a, xa) in x.iter().enumerate() {
                if xa.is_zero() || rest.contains(&a) {
                    continue;
                }
                let mut idx = vec![a];
                idx.extend(&rest);
                total += xa * &self.get(&idx);
            }
            let r = combo_rank(self.dim, &rest);
            out.coeffs[r] = total;
        }
        out
    }

    /// ⟨α,β⟩ = Σ over sorted tuples.
    pub fn inner(&self, other: &Form) -> Scalar {
        self.check(other);
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .filter(|(a, b)| !a.is_zero() && !b.is_zero())
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn norm2(&self) -> Scalar {
        self.inner(self)
    }

    /// Fully antisymmetric tensor with `t[I] = α(e_I)`.
    pub fn to_tensor(&self) -> Tensor {
        Tensor::from_fn(self.dim, self.degree, |idx| self.get(idx))
    }

    /// Reads the sorted-tuple entries of an antisymmetric tensor; rejects other tensors.
    pub fn from_tensor(t: &Tensor) -> Result<Form, FormError> {
        let f = Form::from_tensor_unchecked(t);
        if f.to_tensor() != *t {
            return Err(FormError::NotAntisymmetric);
        }
        Ok(f)
    }

    fn from_tensor_unchecked(t: &Tensor) -> Form {
        let dim = t.dim();
        let degree = t.rank();
        let coeffs = combinations(dim, degree).iter().map(|c| t.get(c).clone()).collect();
        Form { dim, degree, coeffs }
    }

    /// Full alternation (1/p!)Σ sign(σ) t∘σ, returned as a form.
    pub fn alternate(t: &Tensor) -> Form {
        let dim = t.dim();
        let p = t.rank();
        let perms: Vec<(Vec<usize>, i64)> =
            multi_indices(p, p).filter_map(|v| sort_with_sign(&v).map(|(_, s)| (v, s))).collect();
        let fact: i64 = (1..=p as i64).product();
        let coeffs = combinations(dim, p)
            .iter()
            .map(|c| {
                let mut total = Scalar::zero();
                for (perm, sign) in &perms {
                    let idx: Vec<usize> = perm.iter().map(|&k| c[k]).collect();
                    let v = t.get(&idx);
                    if sign > &0 {
                        total += v;
                    } else {
                        total -= v;
                    }
                }
                total.div_int(fact)
            })
            .collect();
        Form { dim, degree: p, coeffs }
    }

    /// Pull back along the frame change f_a = Σ_b P[b][a] e_b.
    pub fn pull_back(&self, p: &Tensor) -> Form {
        let mut out = Form::zero(self.dim, self.degree);
        for (r, target) in combinations(self.dim, self.degree).iter().enumerate() {
            let mut total = Scalar::zero();
            for (src, c) in self.terms() {
                total += c * &minor(p, &src, target);
            }
            out.coeffs[r] = total;
        }
        out
    }

    /// `(J₍₁₎α)(X, …) = −α(JX, …)` with `J e_b = Σ_a J[a][b] e_a`.
    pub fn j_first_slot(&self, j: &Tensor) -> Tensor {
        let t = self.to_tensor();
        Tensor::from_fn(self.dim, self.degree, |idx| {
            let mut total = Scalar::zero();
            for a in 0..self.dim {
                let jab = j.get(&[a, idx[0]]);
                if !jab.is_zero() {
                    let mut src = idx.to_vec();
                    src[0] = a;
                    total -= jab * t.get(&src);
                }
            }
            total
        })
    }

    /// `α(JX, JY, …)` applied in every slot.
    pub fn j_all_slots(&self, j: &Tensor) -> Form {
        self.pull_back(j)
    }

    /// Human-readable sum such as `1/2*e^12 - e^34 + (1 + q)*e^14`.
    pub fn render(&self, params: &[String]) -> String {
        let mut out = String::new();
        for (idx, c) in self.terms() {
            let label: String = idx.iter().map(|i| index_label(*i)).collect();
            let body = c.render(params);
            let compound = body.len() > 1 && body[1..].contains([' ', '+']);
            let (negative, magnitude) = match body.strip_prefix('-') {
                Some(rest) if !compound => (true, rest.to_string()),
                _ => (false, body),
            };
            let coeff = if compound {
                format!("({magnitude})*")
            } else if magnitude == "1" {
                String::new()
            } else {
                format!("{magnitude}*")
            };
            let sep = match (out.is_empty(), negative) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            };
            out.push_str(&format!("{sep}{coeff}e^{label}"));
        }
        if out.is_empty() {
            "0".to_string()
        } else {
            out
        }
    }
}

/// Basis label for a 0-based index; multi-digit labels are bracketed.
pub fn index_label(i: usize) -> String {
    if i < 9 {
        (i + 1).to_string()
    } else {
        format!("{{{}}}", i + 1)
    }
}

/// det of the submatrix of `p` with rows `rows` and columns `cols`.
fn minor(p: &Tensor, rows: &[usize], cols: &[usize]) -> Scalar {
    let k = rows.len();
    if k == 0 {
        return Scalar::one();
    }
    let mut total = Scalar::zero();
    for perm in multi_indices(k, k) {
        let Some((_, sign)) = sort_with_sign(&perm) else { continue };
        let mut prod = Scalar::one();
        for (c, &r) in perm.iter().enumerate() {
            let v = p.get(&[rows[r], cols[c]]);
            if v.is_zero() {
                prod = Scalar::zero();
                break;
            }
            prod = &prod * v;
        }
        if !prod.is_zero() {
            if sign > 0 {
                total += prod;
            } else {
                total -= prod;
            }
        }
    }
    total
}

/// Top-degree form `v·e^{1…2n}` fixing orientation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VolumeForm {
    dim: usize,
    v: Scalar,
}

impl VolumeForm {
    pub fn new(dim: usize, v: Scalar) -> Result<Self, FormError> {
        if v.is_zero() || !v.is_constant() {
            return Err(FormError::BadVolume);
        }
        Ok(VolumeForm { dim, v })
    }

    pub fn from_form(f: &Form) -> Result<Self, FormError> {
        if f.degree() != f.dim() {
            return Err(FormError::Degree(f.degree(), f.dim()));
        }
        VolumeForm::new(f.dim(), f.coeffs[0].clone())
    }

    pub fn coefficient(&self) -> &Scalar {
        &self.v
    }

    pub fn form(&self) -> Form {
        Form::constant(self.dim, self.v.clone()).wedge(&Form::basis(self.dim, &(0..self.dim).collect::<Vec<_>>()))
    }

    /// Hodge star, defined by α ∧ *β = ⟨α,β⟩ Vol.
    pub fn star(&self, a: &Form) -> Form {
        let dim = self.dim;
        let mut out = Form::zero(dim, dim - a.degree());
        for (idx, c) in a.terms() {
            let comp: Vec<usize> = (0..dim).filter(|i| !idx.contains(i)).collect();
            let mut full = idx.clone();
            full.extend(&comp);
            let (_, sign) = sort_with_sign(&full).expect("disjoint");
            let coeff = c * &self.v;
            out.add_term(&comp, &if sign < 0 { -coeff } else { coeff });
        }
        out
    }

    /// Codifferential d* = −*d* for a given exterior derivative.
    pub fn codifferential(&self, a: &Form, d: impl Fn(&Form) -> Form) -> Result<Form, FormError> {
        if a.degree() == 0 {
            return Err(FormError::ZeroDegree);
        }
        Ok(self.star(&d(&self.star(a))).neg())
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&[]))
    }
}
