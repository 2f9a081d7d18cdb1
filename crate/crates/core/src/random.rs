//! Random compatible structures from exact rational rotations.

use rand::Rng;

use crate::algebra::LieAlgebra;
use crate::form::Form;
use crate::scalar::Scalar;
use crate::structure::{AlmostHermitian, StructureError};
use crate::tensor::{einsum, Tensor};

/// A rational rotation in the (i, j)-plane built from a Pythagorean triple.
fn givens(dim: usize, i: usize, j: usize, m: i64, k: i64, flip: bool) -> Tensor {
    let h = m * m + k * k;
    let (mut c, mut s) = (Scalar::frac(m * m - k * k, h), Scalar::frac(2 * m * k, h));
    if flip {
        std::mem::swap(&mut c, &mut s);
    }
    let mut g = Tensor::identity(dim);
    g.set(&[i, i], c.clone());
    g.set(&[j, j], c);
    g.set(&[i, j], -&s);
    g.set(&[j, i], s);
    g
}

/// A random rational special orthogonal matrix, a product of `count` Givens rotations.
pub fn random_rotation(dim: usize, count: usize, rng: &mut impl Rng) -> Tensor {
    let mut q = Tensor::identity(dim);
    for _ in 0..count {
        let i = rng.random_range(0..dim);
        let mut j = rng.random_range(0..dim - 1);
        if j >= i {
            j += 1;
        }
        let m = rng.random_range(2..=4);
        let k = rng.random_range(1..m);
        let g = givens(dim, i, j, m, k, rng.random_bool(0.5));
        q = q.matmul(&g);
    }
    q
}

/// The standard structure J₀e_a = e_{a+n}.
pub fn standard_j(dim: usize) -> Tensor {
    let n = dim / 2;
    let mut j = Tensor::zeros(dim, 2);
    for a in 0..n {
        j.set(&[a + n, a], Scalar::one());
        j.set(&[a, a + n], Scalar::from_int(-1));
    }
    j
}

/// J = QJ₀Qᵀ with ψ₊ + iψ₋ = Π(f^a + i f^{a+n}) for the rotated frame f_a = Qe_a.
pub fn rotated_structure(alg: &LieAlgebra, q: &Tensor) -> Result<AlmostHermitian, StructureError> {
    let dim = alg.dim();
    let n = dim / 2;
    let j = einsum("ab,bc,dc->ad", &[q, &standard_j(dim), q]);
    let omega = Form::from_tensor(&j).expect("QJ₀Qᵀ is skew");
    let coframe = |a: usize| {
        let mut f = Form::zero(dim, 1);
        for b in 0..dim {
            f.add_term(&[b], q.get(&[b, a]));
        }
        f
    };
    let mut re = Form::constant(dim, Scalar::one());
    let mut im = Form::zero(dim, 0);
    for a in 0..n {
        let (x, y) = (coframe(a), coframe(a + n));
        let new_re = re.wedge(&x).sub(&im.wedge(&y));
        let new_im = re.wedge(&y).add(&im.wedge(&x));
        re = new_re;
        im = new_im;
    }
    AlmostHermitian::new(alg.clone(), omega, Some(re))
}

/// The same structure expressed in the orthonormal frame f_a = Qe_a.
pub fn reframed(s: &AlmostHermitian, q: &Tensor) -> Result<AlmostHermitian, StructureError> {
    let alg = s.algebra().change_basis(q, &q.transpose());
    let psi = s.su().map(|su| su.psi_plus.pull_back(q));
    AlmostHermitian::new(alg, s.omega().pull_back(q), psi)
}

pub fn random_structure(alg: &LieAlgebra, rng: &mut impl Rng) -> Result<AlmostHermitian, StructureError> {
    let q = random_rotation(alg.dim(), 3, rng);
    rotated_structure(alg, &q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rotations_are_orthogonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..5 {
            let q = random_rotation(6, 4, &mut rng);
            assert_eq!(q.matmul(&q.transpose()), Tensor::identity(6));
        }
    }

    #[test]
    fn rotated_flat_structure_is_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for dim in [4, 6, 8] {
            let s = random_structure(&LieAlgebra::abelian(dim), &mut rng).unwrap();
            assert!(s.su().is_some());
        }
    }
}
