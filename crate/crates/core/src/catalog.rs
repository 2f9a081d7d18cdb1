//! Built-in structures.

use crate::algebra::{AlgebraError, LieAlgebra};
use crate::form::Form;
use crate::scalar::{Rational, Scalar};
use crate::structure::{orthonormal_frame, AlmostHermitian, StructureError};
use crate::tensor::Tensor;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpecError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error("dimension mismatch in {0}")]
    Dimension(&'static str),
}

/// A structure definition as data: brackets, metric, Kähler form and optional ψ₊ (0-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureSpec {
    pub name: String,
    pub description: String,
    pub dim: usize,
    pub params: Vec<String>,
    pub ext: u64,
    pub brackets: Vec<(usize, usize, Vec<(usize, Scalar)>)>,
    /// `None` means the basis is orthonormal.
    pub metric: Option<Tensor>,
    pub omega: Form,
    pub psi_plus: Option<Form>,
}

impl StructureSpec {
    pub fn algebra(&self) -> Result<LieAlgebra, SpecError> {
        Ok(LieAlgebra::from_brackets(self.dim, self.params.clone(), &self.brackets)?)
    }

    /// Validates and builds the structure, orthonormalizing a non-identity metric first.
    pub fn build(&self) -> Result<AlmostHermitian, SpecError> {
        let alg = self.algebra()?;
        if self.omega.dim() != self.dim {
            return Err(SpecError::Dimension("kaehler_form"));
        }
        if self.psi_plus.as_ref().is_some_and(|p| p.dim() != self.dim) {
            return Err(SpecError::Dimension("complex_volume"));
        }
        match &self.metric {
            Some(g) if *g != Tensor::identity(self.dim) => {
                if g.dim() != self.dim || g.rank() != 2 {
                    return Err(SpecError::Dimension("metric"));
                }
                let (p, p_inv) = orthonormal_frame(g, self.ext)?;
                let alg = alg.change_basis(&p, &p_inv);
                let omega = self.omega.pull_back(&p);
                let psi = self.psi_plus.as_ref().map(|f| f.pull_back(&p));
                Ok(AlmostHermitian::new(alg, omega, psi)?)
            }
            _ => Ok(AlmostHermitian::new(alg, self.omega.clone(), self.psi_plus.clone())?),
        }
    }
}

fn s(n: i64, d: i64) -> Scalar {
    Scalar::frac(n, d)
}

fn r3(n: i64, d: i64) -> Scalar {
    Scalar::surd(Rational::new(n.into(), d.into()), 3).expect("square-free")
}

/// Form from 1-based index terms.
fn form(dim: usize, terms: &[(&[usize], Scalar)]) -> Form {
    let mut f = Form::zero(dim, terms[0].0.len());
    for (idx, c) in terms {
        let idx: Vec<usize> = idx.iter().map(|i| i - 1).collect();
        f.add_term(&idx, c);
    }
    f
}

/// Bracket from 1-based indices.
fn br(i: usize, j: usize, coeffs: Vec<(usize, Scalar)>) -> (usize, usize, Vec<(usize, Scalar)>) {
    (i - 1, j - 1, coeffs.into_iter().map(|(k, c)| (k - 1, c)).collect())
}

pub fn example_5_1() -> StructureSpec {
    StructureSpec {
        name: "example-5.1".into(),
        description: "solvable algebra with [e1,e4] = -e1, [e2,e4] = [e3,e4] = -e3; locally conformal Kähler".into(),
        dim: 4,
        params: vec![],
        ext: 0,
        brackets: vec![
            br(1, 4, vec![(1, s(-1, 1))]),
            br(2, 4, vec![(3, s(-1, 1))]),
            br(3, 4, vec![(3, s(-1, 1))]),
        ],
        metric: None,
        omega: form(4, &[(&[3, 1], s(1, 1)), (&[4, 2], s(1, 1))]),
        psi_plus: Some(form(4, &[(&[1, 2], s(1, 1)), (&[3, 4], s(-1, 1))])),
    }
}

pub fn example_5_2() -> StructureSpec {
    let q = Scalar::param(0);
    StructureSpec {
        name: "example-5.2".into(),
        description: "Inoue-type solvable algebra with real parameter q; locally conformal Kähler".into(),
        dim: 4,
        params: vec!["q".into()],
        ext: 0,
        brackets: vec![
            br(2, 3, vec![(1, s(-1, 1))]),
            br(2, 4, vec![(2, s(-1, 1))]),
            br(3, 4, vec![(1, -q), (3, s(1, 1))]),
        ],
        metric: None,
        omega: form(4, &[(&[2, 1], s(1, 1)), (&[4, 3], s(1, 1))]),
        psi_plus: Some(form(4, &[(&[1, 3], s(1, 1)), (&[2, 4], s(-1, 1))])),
    }
}

pub fn example_5_4() -> StructureSpec {
    StructureSpec {
        name: "example-5.4".into(),
        description: "nilpotent algebra with [e1,e2] = -e5, [e1,e4] = [e2,e3] = -e6; Hermitian, sqrt(3) extension".into(),
        dim: 6,
        params: vec![],
        ext: 3,
        brackets: vec![
            br(1, 2, vec![(5, s(-1, 1))]),
            br(1, 4, vec![(6, s(-1, 1))]),
            br(2, 3, vec![(6, s(-1, 1))]),
        ],
        metric: None,
        omega: form(
            6,
            &[
                (&[6, 5], s(1, 1)),
                (&[3, 1], s(-1, 2)),
                (&[4, 1], r3(1, 2)),
                (&[4, 2], s(1, 2)),
                (&[3, 2], r3(1, 2)),
            ],
        ),
        psi_plus: Some(form(
            6,
            &[
                (&[1, 2, 5], s(1, 1)),
                (&[3, 4, 5], s(1, 1)),
                (&[1, 4, 6], s(-1, 2)),
                (&[2, 3, 6], s(-1, 2)),
                (&[2, 4, 6], r3(1, 2)),
                (&[1, 3, 6], r3(-1, 2)),
            ],
        )),
    }
}

pub fn flat_kaehler_torus() -> StructureSpec {
    StructureSpec {
        name: "flat-kaehler-torus".into(),
        description: "abelian algebra of dimension 4 with the standard Kähler form".into(),
        dim: 4,
        params: vec![],
        ext: 0,
        brackets: vec![],
        metric: None,
        omega: form(4, &[(&[3, 1], s(1, 1)), (&[4, 2], s(1, 1))]),
        psi_plus: Some(form(4, &[(&[1, 2], s(1, 1)), (&[3, 4], s(-1, 1))])),
    }
}

/// su(2)⊕su(2) with a bi-invariant metric; u_a = (E_a, −E_a), w_a = √3(E_a, E_a) normalized.
pub fn nearly_kaehler_s3s3() -> StructureSpec {
    let mut brackets = Vec::new();
    for (a, b, c) in [(1, 2, 3), (2, 3, 1), (3, 1, 2)] {
        brackets.push(br(a, b, vec![(c + 3, r3(1, 3))]));
        brackets.push(br(a + 3, b + 3, vec![(c + 3, r3(1, 1))]));
        brackets.push(br(a, b + 3, vec![(c, r3(1, 1))]));
        brackets.push(br(b, a + 3, vec![(c, r3(-1, 1))]));
    }
    StructureSpec {
        name: "nearly-kaehler-s3s3".into(),
        description: "su(2)+su(2) with the bi-invariant metric and the nearly Kähler structure".into(),
        dim: 6,
        params: vec![],
        ext: 3,
        brackets,
        metric: None,
        omega: form(6, &[(&[1, 4], s(1, 1)), (&[2, 5], s(1, 1)), (&[3, 6], s(1, 1))]),
        psi_plus: None,
    }
}

pub fn all() -> Vec<StructureSpec> {
    vec![example_5_1(), example_5_2(), example_5_4(), flat_kaehler_torus(), nearly_kaehler_s3s3()]
}

pub fn names() -> Vec<String> {
    all().into_iter().map(|s| s.name).collect()
}

pub fn by_name(name: &str) -> Option<StructureSpec> {
    all().into_iter().find(|s| s.name == name)
}
