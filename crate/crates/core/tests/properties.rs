mod common;

use common::domega_from;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hermitian_core::curvature::check_symmetries;
use hermitian_core::decomposition::{split_symmetric, split_two_form};
use hermitian_core::form::combinations;
use hermitian_core::scalar::{rat, Monomial};
use hermitian_core::structure::{j_output, j_slot, Connection, ConnectionKind};
use hermitian_core::{catalog, einsum, random, Analysis, AlmostHermitian, Form, LieAlgebra, Rational, Scalar, Tensor, VolumeForm};

fn scalar_strategy(ext: u64) -> impl Strategy<Value = Scalar> {
    let term = ((0u32..3, 0u32..3), -5i64..=5, 1i64..=4, -3i64..=3, 1i64..=3);
    prop::collection::vec(term, 0..4).prop_map(move |terms| {
        let raw = terms
            .into_iter()
            .map(|((a, b), pn, pd, qn, qd)| {
                let q = if ext == 0 { rat(0, 1) } else { rat(qn, qd) };
                (Monomial::new(vec![a, b]), rat(pn, pd), q)
            })
            .collect();
        Scalar::normalize(ext, raw).unwrap()
    })
}

fn triple() -> impl Strategy<Value = (Scalar, Scalar, Scalar)> {
    prop_oneof![Just(0u64), Just(3), Just(5)].prop_flat_map(|d| (scalar_strategy(d), scalar_strategy(d), scalar_strategy(d)))
}

fn nonzero_constant(ext: u64) -> impl Strategy<Value = Scalar> {
    (-5i64..=5, 1i64..=4, -3i64..=3, 1i64..=3)
        .prop_filter("nonzero", |(p, _, q, _)| *p != 0 || *q != 0)
        .prop_map(move |(pn, pd, qn, qd)| {
            Scalar::normalize(ext, vec![(Monomial::one(), rat(pn, pd), rat(qn, qd))]).unwrap()
        })
}

fn params() -> Vec<String> {
    vec!["p".into(), "q".into()]
}

/// A random two-step nilpotent algebra; Jacobi holds because every double bracket vanishes.
fn two_step(dim: usize, rng: &mut impl Rng) -> LieAlgebra {
    let centre = rng.random_range(1..=2);
    let mut brackets = Vec::new();
    for i in 0..dim - centre {
        for j in i + 1..dim - centre {
            if rng.random_bool(0.5) {
                let coeffs = (dim - centre..dim).map(|k| (k, Scalar::from_int(rng.random_range(-2..=2)))).collect();
                brackets.push((i, j, coeffs));
            }
        }
    }
    LieAlgebra::from_brackets(dim, vec![], &brackets).unwrap()
}

fn random_algebra(rng: &mut impl Rng) -> LieAlgebra {
    let specs = catalog::all();
    let pick = rng.random_range(0..specs.len() + 2);
    if pick < specs.len() {
        let alg = specs[pick].algebra().unwrap();
        let q = random::random_rotation(alg.dim(), 3, rng);
        alg.change_basis(&q, &q.transpose())
    } else {
        two_step(if pick == specs.len() { 4 } else { 6 }, rng)
    }
}

fn random_structure(seed: u64) -> AlmostHermitian {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let alg = random_algebra(&mut rng);
    random::random_structure(&alg, &mut rng).unwrap()
}

/// A Hermitian catalog entry in a random orthonormal frame.
fn random_hermitian(seed: u64) -> AlmostHermitian {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let names = ["example-5.1", "example-5.2", "example-5.4", "flat-kaehler-torus"];
    let base = catalog::by_name(names[rng.random_range(0..names.len())]).unwrap().build().unwrap();
    let q = random::random_rotation(base.dim(), 3, &mut rng);
    random::reframed(&base, &q).unwrap()
}

fn random_form(dim: usize, degree: usize, rng: &mut impl Rng) -> Form {
    let mut f = Form::zero(dim, degree);
    for idx in combinations(dim, degree) {
        f.add_term(&idx, &Scalar::from_int(rng.random_range(-2..=2)));
    }
    f
}

fn random_tensor(dim: usize, rank: usize, rng: &mut impl Rng) -> Tensor {
    Tensor::from_fn(dim, rank, |_| Scalar::from_int(rng.random_range(-2..=2)))
}

fn j_invariant(b: &Tensor, j: &Tensor) -> Tensor {
    j_slot(&j_slot(b, j, 0), j, 1)
}

fn sign(e: usize) -> i64 {
    if e % 2 == 0 {
        1
    } else {
        -1
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn scalar_ring_axioms((a, b, c) in triple()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &Scalar::one(), a.clone());
        prop_assert_eq!(&a + &Scalar::zero(), a.clone());
    }

    #[test]
    fn division_by_constant_undoes_multiplication(a in scalar_strategy(3), c in nonzero_constant(3)) {
        prop_assert_eq!((&a * &c).div_const(&c).unwrap(), a);
    }

    #[test]
    fn evaluation_is_a_ring_map((a, b, _) in triple(), p in (-4i64..=4, 1i64..=3), q in (-4i64..=4, 1i64..=3)) {
        let bind: Vec<Option<Rational>> = vec![Some(rat(p.0, p.1)), Some(rat(q.0, q.1))];
        let (ea, eb) = (a.evaluate(&bind).unwrap(), b.evaluate(&bind).unwrap());
        prop_assert!(ea.is_constant());
        prop_assert_eq!((&a * &b).evaluate(&bind).unwrap(), &ea * &eb);
        prop_assert_eq!((&a + &b).evaluate(&bind).unwrap(), &ea + &eb);
    }

    #[test]
    fn normalisation_is_idempotent_and_rendering_round_trips((a, _, _) in triple()) {
        let d = if a.ext() == 0 { 3 } else { a.ext() };
        let raw = a.terms().map(|(m, p, q)| (m.clone(), p.clone(), q.clone())).collect();
        prop_assert_eq!(Scalar::normalize(d, raw).unwrap(), a.clone());
        prop_assert_eq!(Scalar::parse(&a.render(&params()), &params(), d).unwrap(), a);
    }

    #[test]
    fn d_squared_vanishes(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let alg = random_algebra(&mut rng);
        for p in 0..alg.dim() {
            let f = random_form(alg.dim(), p, &mut rng);
            prop_assert!(alg.d(&alg.d(&f)).is_zero(), "degree {}", p);
        }
    }

    #[test]
    fn derivative_of_coframe_is_minus_structure_constants(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let alg = random_algebra(&mut rng);
        let c = alg.structure_constants();
        for k in 0..alg.dim() {
            let de = alg.d(&Form::basis(alg.dim(), &[k]));
            for i in 0..alg.dim() {
                for j in 0..alg.dim() {
                    prop_assert_eq!(de.get(&[i, j]), -c.get(&[i, j, k]));
                }
            }
        }
    }

    #[test]
    fn hodge_star_defining_property_and_square(seed in any::<u64>(), half in 1usize..=3, negative in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dim = 2 * half;
        let vol = VolumeForm::new(dim, Scalar::from_int(if negative { -1 } else { 1 })).unwrap();
        for p in 0..=dim {
            let a = random_form(dim, p, &mut rng);
            let b = random_form(dim, p, &mut rng);
            prop_assert_eq!(a.wedge(&vol.star(&b)), vol.form().scale(&a.inner(&b)));
            let expected = a.scale(&Scalar::from_int(sign(p * (dim - p))));
            prop_assert_eq!(vol.star(&vol.star(&a)), expected);
        }
    }

    #[test]
    fn interior_product_is_adjoint_to_wedge(seed in any::<u64>(), dim in 2usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x: Vec<Scalar> = (0..dim).map(|_| Scalar::from_int(rng.random_range(-2..=2))).collect();
        let mut flat = Form::zero(dim, 1);
        for (a, xa) in x.iter().enumerate() {
            flat.add_term(&[a], xa);
        }
        for p in 1..=dim {
            let alpha = random_form(dim, p, &mut rng);
            let beta = random_form(dim, p - 1, &mut rng);
            prop_assert_eq!(alpha.interior(&x).inner(&beta), alpha.inner(&flat.wedge(&beta)));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn structure_invariants(seed in any::<u64>()) {
        let s = random_structure(seed);
        let j = s.j();
        let id = Tensor::identity(s.dim());
        prop_assert_eq!(j.matmul(j), id.neg());
        prop_assert_eq!(j.matmul(&j.transpose()), id);
        let lc = s.levi_civita();
        let xi = s.intrinsic_torsion(&lc);
        prop_assert_eq!(&xi, &xi.permute(&[0, 2, 1]).neg());
        prop_assert!(j_output(&xi, j).add(&j_slot(&xi, j, 1)).is_zero());
        prop_assert_eq!(lc.derivative_of_j(j), j_output(&xi, j).scale_frac(2, 1));
        let minimal = s.minimal_connection(&lc, &xi);
        prop_assert!(minimal.is_metric());
        prop_assert!(minimal.covariant_derivative(&s.omega().to_tensor()).is_zero());
    }

    #[test]
    fn levi_civita_is_the_unique_metric_torsion_free_connection(seed in any::<u64>()) {
        let s = random_structure(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let lc = s.levi_civita();
        prop_assert!(lc.is_metric() && lc.torsion(s.algebra()).is_zero());
        let raw = random_tensor(s.dim(), 3, &mut rng);
        prop_assume!(!raw.is_zero());
        for delta in [raw.clone(), raw.sub(&raw.permute(&[0, 2, 1]))] {
            if delta.is_zero() {
                continue;
            }
            let other = Connection { kind: ConnectionKind::Custom, gamma: lc.gamma.add(&delta) };
            prop_assert!(!(other.is_metric() && other.torsion(s.algebra()).is_zero()));
        }
    }

    #[test]
    fn covariant_derivative_obeys_leibniz(seed in any::<u64>()) {
        let s = random_structure(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x1e1b);
        let dim = s.dim();
        let lc = s.levi_civita();
        let a = random_tensor(dim, 1, &mut rng);
        let b = random_tensor(dim, 2, &mut rng);
        let ab = einsum("a,bc->abc", &[&a, &b]);
        let (da, db) = (lc.covariant_derivative(&a), lc.covariant_derivative(&b));
        let expected = einsum("ia,bc->iabc", &[&da, &b]).add(&einsum("a,ibc->iabc", &[&a, &db]));
        prop_assert_eq!(lc.covariant_derivative(&ab), expected);
        let t = random_tensor(dim, 3, &mut rng);
        let dt = lc.covariant_derivative(&t);
        prop_assert_eq!(lc.covariant_derivative(&t.contract(0, 1).unwrap()), dt.contract(1, 2).unwrap());
        prop_assert!(db.contract(1, 2).unwrap().is_zero());
    }

    #[test]
    fn chern_torsion_is_complex_linear(seed in any::<u64>()) {
        let s = random_hermitian(seed);
        let lc = s.levi_civita();
        let xi = s.intrinsic_torsion(&lc);
        let (chern, unitary) = s.chern_connection(&lc, &xi);
        prop_assert!(unitary);
        let t = chern.torsion(s.algebra());
        prop_assert_eq!(j_slot(&t, s.j(), 0), j_output(&t, s.j()));
    }

    #[test]
    fn torsion_components_are_orthogonal_and_reconstruct(seed in any::<u64>()) {
        let a = Analysis::new(random_structure(seed)).unwrap();
        let j = a.structure.j();
        let parts = &a.decomposition.parts;
        let total = parts.iter().fold(Tensor::zeros(a.xi.dim(), 3), |acc, p| acc.add(p));
        prop_assert_eq!(&total, &a.xi);
        for x in 0..4 {
            prop_assert_eq!(&parts[x], &parts[x].permute(&[0, 2, 1]).neg());
            prop_assert!(j_output(&parts[x], j).add(&j_slot(&parts[x], j, 1)).is_zero());
            for y in x + 1..4 {
                prop_assert!(parts[x].dot(&parts[y]).is_zero());
            }
        }
        prop_assert!(parts[0].dot(&j_slot(&parts[1], j, 1)).is_zero());
        if a.n() == 2 {
            prop_assert!(parts[0].is_zero() && parts[2].is_zero());
        }
    }

    #[test]
    fn class_characterisations(seed in any::<u64>()) {
        let a = Analysis::new(random_structure(seed)).unwrap();
        let p = &a.decomposition.parts;
        prop_assert_eq!(a.nijenhuis.is_zero(), p[0].is_zero() && p[1].is_zero());
        prop_assert_eq!(a.domega.is_zero(), p[0].is_zero() && p[2].is_zero() && p[3].is_zero());
        prop_assert_eq!(a.theta().is_zero(), p[3].is_zero());
        prop_assert_eq!(domega_from(&a.xi, a.structure.j()), a.domega.to_tensor());
    }

    #[test]
    fn lee_part_of_domega_on_hermitian_structures(seed in any::<u64>()) {
        let a = Analysis::new(random_hermitian(seed)).unwrap();
        let s = &a.structure;
        prop_assert!(a.class.is_hermitian());
        let w4 = domega_from(a.decomposition.part(4), s.j());
        prop_assert_eq!(w4, a.theta().wedge(s.omega()).to_tensor());
    }

    #[test]
    fn two_form_and_symmetric_splits(seed in any::<u64>()) {
        let s = random_structure(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x2f0);
        let j = s.j();
        let n = Scalar::from_int(s.n() as i64);
        let alpha = random_form(s.dim(), 2, &mut rng);
        let sp = split_two_form(&s, &alpha);
        prop_assert_eq!(sp.r_omega.add(&sp.lambda0_11).add(&sp.lambda20), alpha.clone());
        prop_assert_eq!(sp.r_omega.scale(&n), s.omega().scale(&alpha.inner(s.omega())));
        prop_assert_eq!(s.j_two_form(&sp.lambda0_11), sp.lambda0_11.clone());
        prop_assert!(sp.lambda0_11.inner(s.omega()).is_zero());
        prop_assert_eq!(s.j_two_form(&sp.lambda20), sp.lambda20.neg());
        let raw = random_tensor(s.dim(), 2, &mut rng);
        let b = raw.add(&raw.transpose());
        let ss = split_symmetric(&s, &b).unwrap();
        prop_assert_eq!(ss.trace_part().add(&ss.lambda0_11).add(&ss.sigma20), b.clone());
        prop_assert_eq!(ss.trace_coefficient.scale(&rat(2 * s.n() as i64, 1)), hermitian_core::ops::trace(&b));
        prop_assert!(hermitian_core::ops::trace(&ss.lambda0_11).is_zero());
        prop_assert_eq!(j_invariant(&ss.lambda0_11, j), ss.lambda0_11.clone());
        prop_assert_eq!(j_invariant(&ss.sigma20, j), ss.sigma20.neg());
    }

    #[test]
    fn curvature_symmetries_and_ricci_forms(seed in any::<u64>()) {
        let a = Analysis::new(random_structure(seed)).unwrap();
        let s = &a.structure;
        let j = s.j();
        prop_assert!(check_symmetries(&a.riemann, true, true).is_ok());
        prop_assert!(check_symmetries(&a.riemann_minimal, true, false).is_ok());
        let r = &a.riemann;
        prop_assert_eq!(r, &r.permute(&[1, 0, 2, 3]).neg());
        prop_assert_eq!(r, &r.permute(&[0, 1, 3, 2]).neg());
        prop_assert_eq!(r, &r.permute(&[2, 3, 0, 1]));
        prop_assert!(r.add(&r.permute(&[1, 2, 0, 3])).add(&r.permute(&[2, 0, 1, 3])).is_zero());
        let ric = &a.ricci;
        prop_assert!(ric.ric.is_symmetric());
        prop_assert_eq!(j_invariant(&ric.ric_star, j), ric.ric_star.transpose());
        prop_assert_eq!(&hermitian_core::ops::trace(&ric.ric), &ric.s);
        prop_assert_eq!(&hermitian_core::ops::trace(&ric.ric_star), &ric.s_star);
        let chain = j_slot(&ric.ric_star, j, 1);
        prop_assert_eq!(&chain, &a.forms_lc.rho);
        prop_assert_eq!(&chain, &a.forms_lc.r);
        let rho_u = a.forms_minimal.rho_form();
        prop_assert_eq!(s.j_two_form(&rho_u), rho_u);
        prop_assert!(s.d(&a.forms_minimal.r_form()).is_zero());
    }

    #[test]
    fn chern_ricci_form_is_cohomologous_to_the_minimal_one(seed in any::<u64>()) {
        let a = Analysis::new(random_hermitian(seed)).unwrap();
        let s = &a.structure;
        let h = a.forms_chern.as_ref().expect("Hermitian structures have a unitary Chern connection");
        prop_assert!(s.d(&h.r_form()).is_zero());
        let primitive = s.j_one_form(a.theta()).scale_frac(s.n() as i64 - 1, 2);
        prop_assert_eq!(h.r_form().sub(&a.forms_minimal.r_form()), s.d(&primitive));
    }
}
