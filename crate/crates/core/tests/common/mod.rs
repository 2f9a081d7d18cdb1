//! A small matrix-based reimplementation of the curvature pipeline, used as an oracle.
#![allow(dead_code)]

use hermitian_core::{AlmostHermitian, Scalar};

pub type Mat = Vec<Vec<Scalar>>;

pub fn zeros(m: usize) -> Mat {
    vec![vec![Scalar::zero(); m]; m]
}

pub fn mul(a: &Mat, b: &Mat) -> Mat {
    let m = a.len();
    let mut out = zeros(m);
    for i in 0..m {
        for k in 0..m {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..m {
                out[i][j] += &a[i][k] * &b[k][j];
            }
        }
    }
    out
}

pub fn add(a: &Mat, b: &Mat) -> Mat {
    a.iter().zip(b).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x + y).collect()).collect()
}

pub fn sub(a: &Mat, b: &Mat) -> Mat {
    a.iter().zip(b).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x - y).collect()).collect()
}

pub fn scale(a: &Mat, c: &Scalar) -> Mat {
    a.iter().map(|r| r.iter().map(|x| x * c).collect()).collect()
}

pub fn transpose(a: &Mat) -> Mat {
    let m = a.len();
    (0..m).map(|i| (0..m).map(|j| a[j][i].clone()).collect()).collect()
}

pub fn half() -> Scalar {
    Scalar::frac(1, 2)
}

/// Connection matrices: `conn[i][k][j]` is the e_k-component of ∇_{e_i}e_j.
pub struct Oracle {
    pub m: usize,
    /// `c[i][j][k]` is the e_k-component of [e_i, e_j].
    pub c: Vec<Vec<Vec<Scalar>>>,
    pub j: Mat,
    pub lc: Vec<Mat>,
}

impl Oracle {
    pub fn new(s: &AlmostHermitian) -> Self {
        let m = s.dim();
        let t = s.algebra().structure_constants();
        let c: Vec<Vec<Vec<Scalar>>> =
            (0..m).map(|i| (0..m).map(|j| (0..m).map(|k| t.get(&[i, j, k]).clone()).collect()).collect()).collect();
        let j: Mat = (0..m).map(|a| (0..m).map(|b| s.j().get(&[a, b]).clone()).collect()).collect();
        let lc = (0..m)
            .map(|i| {
                let mut a = zeros(m);
                for jj in 0..m {
                    for k in 0..m {
                        a[k][jj] = (&c[i][jj][k] - &c[jj][k][i] + &c[k][i][jj]) * half();
                    }
                }
                a
            })
            .collect();
        Oracle { m, c, j, lc }
    }

    /// ξ_{e_i} = −½ J∘(∇_{e_i}J).
    pub fn xi(&self) -> Vec<Mat> {
        self.lc
            .iter()
            .map(|a| {
                let nj = sub(&mul(a, &self.j), &mul(&self.j, a));
                scale(&mul(&self.j, &nj), &-half())
            })
            .collect()
    }

    pub fn minimal(&self) -> Vec<Mat> {
        self.lc.iter().zip(self.xi()).map(|(a, x)| add(a, &x)).collect()
    }

    /// dω(X,Y,Z) = −ω([X,Y],Z) + ω([X,Z],Y) − ω([Y,Z],X) with ω(X,Y) = ⟨X,JY⟩.
    pub fn domega(&self, a: usize, b: usize, c: usize) -> Scalar {
        let w = |u: &Vec<Scalar>, z: usize| -> Scalar { (0..self.m).map(|k| &u[k] * &self.j[k][z]).sum() };
        -w(&self.c[a][b], c) + w(&self.c[a][c], b) - w(&self.c[b][c], a)
    }

    /// ⟨∇ʰ_XY, Z⟩ = ⟨∇_XY, Z⟩ + sign·½dω(JX, Y, Z).
    pub fn chern(&self, sign: i64) -> Vec<Mat> {
        let m = self.m;
        (0..m)
            .map(|i| {
                let mut a = self.lc[i].clone();
                for y in 0..m {
                    for z in 0..m {
                        let mut v = Scalar::zero();
                        for p in 0..m {
                            if !self.j[p][i].is_zero() {
                                v += &self.j[p][i] * &self.domega(p, y, z);
                            }
                        }
                        a[z][y] += v * Scalar::frac(sign, 2);
                    }
                }
                a
            })
            .collect()
    }

    /// R(e_i,e_j) = [∇_i,∇_j] − ∇_{[e_i,e_j]} as a matrix.
    pub fn curvature(&self, conn: &[Mat], i: usize, j: usize) -> Mat {
        let mut r = sub(&mul(&conn[i], &conn[j]), &mul(&conn[j], &conn[i]));
        for k in 0..self.m {
            if !self.c[i][j][k].is_zero() {
                r = sub(&r, &scale(&conn[k], &self.c[i][j][k]));
            }
        }
        r
    }

    /// T(e_i,e_j) = ∇_ie_j − ∇_je_i − [e_i,e_j].
    pub fn torsion(&self, conn: &[Mat], i: usize, j: usize) -> Vec<Scalar> {
        (0..self.m).map(|k| &conn[i][k][j] - &conn[j][k][i] - &self.c[i][j][k]).collect()
    }

    /// Ric(X,Y) = Σ⟨R(e_i,X)Y, e_i⟩.
    pub fn ric(&self) -> Mat {
        let m = self.m;
        let mut out = zeros(m);
        for i in 0..m {
            for x in 0..m {
                let r = self.curvature(&self.lc, i, x);
                for y in 0..m {
                    out[x][y] += &r[i][y];
                }
            }
        }
        out
    }

    /// Ric*(X,Y) = Σ⟨R(e_i,X)JY, Je_i⟩.
    pub fn ric_star(&self) -> Mat {
        let m = self.m;
        let mut out = zeros(m);
        let jt = transpose(&self.j);
        for i in 0..m {
            for x in 0..m {
                let r = mul(&jt, &mul(&self.curvature(&self.lc, i, x), &self.j));
                for y in 0..m {
                    out[x][y] += &r[i][y];
                }
            }
        }
        out
    }

    /// r(X,Y) = ½Σ⟨R(X,Y)e_i, Je_i⟩.
    pub fn r(&self, conn: &[Mat]) -> Mat {
        let m = self.m;
        let jt = transpose(&self.j);
        let mut out = zeros(m);
        for x in 0..m {
            for y in 0..m {
                let r = mul(&jt, &self.curvature(conn, x, y));
                out[x][y] = (0..m).map(|i| r[i][i].clone()).sum::<Scalar>() * half();
            }
        }
        out
    }

    /// ρ(X,Y) = ½Σ⟨R(e_i,Je_i)X, Y⟩.
    pub fn rho(&self, conn: &[Mat]) -> Mat {
        let m = self.m;
        let mut out = zeros(m);
        for i in 0..m {
            let mut r = zeros(m);
            for p in 0..m {
                if !self.j[p][i].is_zero() {
                    r = add(&r, &scale(&self.curvature(conn, i, p), &self.j[p][i]));
                }
            }
            out = add(&out, &transpose(&r));
        }
        scale(&out, &half())
    }
}

pub fn trace(a: &Mat) -> Scalar {
    (0..a.len()).map(|i| a[i][i].clone()).sum()
}

/// s = −¼Σ|[e_i,e_j]|² − ½Σ B(e_i,e_i) − |H|², with B the Killing form and ⟨H,X⟩ = tr ad_X.
pub fn milnor_scalar(o: &Oracle) -> Scalar {
    let m = o.m;
    let ad = |x: usize| -> Mat {
        let mut a = zeros(m);
        for y in 0..m {
            for k in 0..m {
                a[k][y] = o.c[x][y][k].clone();
            }
        }
        a
    };
    let mut s = Scalar::zero();
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                s -= &o.c[i][j][k] * &o.c[i][j][k] * Scalar::frac(1, 4);
            }
        }
        let a = ad(i);
        s -= trace(&mul(&a, &a)) * half();
        let h = trace(&a);
        s -= &h * &h;
    }
    s
}

pub fn from_tensor(t: &hermitian_core::Tensor) -> Mat {
    let m = t.dim();
    (0..m).map(|a| (0..m).map(|b| t.get(&[a, b]).clone()).collect()).collect()
}

/// Parses a scalar literal in the structure's ring.
pub fn lit(s: &AlmostHermitian, src: &str) -> Scalar {
    let ext = if src.contains('r') { 3 } else { 0 };
    Scalar::parse(src, s.params(), ext).expect("literal")
}

/// A form from 1-based index lists and literal coefficients.
pub fn form(s: &AlmostHermitian, terms: &[(&[usize], &str)]) -> hermitian_core::Form {
    let degree = terms.first().map_or(0, |t| t.0.len());
    let mut f = hermitian_core::Form::zero(s.dim(), degree);
    for (idx, c) in terms {
        let idx: Vec<usize> = idx.iter().map(|i| i - 1).collect();
        f.add_term(&idx, &lit(s, c));
    }
    f
}

/// A bilinear form Σ c e^a⊗e^b from 1-based pairs.
pub fn bilinear(s: &AlmostHermitian, terms: &[(usize, usize, &str)]) -> hermitian_core::Tensor {
    let mut t = hermitian_core::Tensor::zeros(s.dim(), 2);
    for (a, b, c) in terms {
        t.add_at(&[a - 1, b - 1], &lit(s, c));
    }
    t
}

/// Σ c e^a⊗e^{bc} read as ⟨ξ_{e_a}e_b, e_c⟩ = c, divided by `denominator`.
pub fn torsion_table(s: &AlmostHermitian, denominator: i64, terms: &[(usize, usize, usize, &str)]) -> hermitian_core::Tensor {
    let mut t = hermitian_core::Tensor::zeros(s.dim(), 3);
    for (a, b, c, v) in terms {
        let v = lit(s, v).div_int(denominator);
        t.add_at(&[a - 1, b - 1, c - 1], &v);
        t.add_at(&[a - 1, c - 1, b - 1], &-v);
    }
    t
}

/// Random compatible structures on every catalog algebra, plus re-framed copies of the Hermitian entries.
pub fn random_set(seed: u64, per_algebra: usize, reframed: usize) -> Vec<(String, AlmostHermitian)> {
    use hermitian_core::{catalog, random};
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for spec in catalog::all() {
        let alg = spec.algebra().expect("catalog algebra");
        for k in 0..per_algebra {
            out.push((format!("{}#{k}", spec.name), random::random_structure(&alg, &mut rng).expect("random structure")));
        }
        let base = spec.build().expect("catalog structure");
        if hermitian_core::Analysis::new(base.clone()).unwrap().class.is_hermitian() {
            for k in 0..reframed {
                let q = random::random_rotation(base.dim(), 3, &mut rng);
                out.push((format!("{}~{k}", spec.name), random::reframed(&base, &q).expect("reframed structure")));
            }
        }
    }
    out
}

/// Compares every curvature quantity of the analysis with the oracle; returns the names that differ.
pub fn oracle_mismatches(a: &hermitian_core::Analysis) -> Vec<&'static str> {
    let o = Oracle::new(&a.structure);
    let m = o.m;
    let mut bad = Vec::new();
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                if &o.lc[i][k][j] != a.levi_civita.gamma.get(&[i, j, k]) {
                    bad.push("levi-civita");
                }
            }
        }
    }
    let ric = o.ric();
    let rics = o.ric_star();
    if ric != from_tensor(&a.ricci.ric) {
        bad.push("Ric");
    }
    if rics != from_tensor(&a.ricci.ric_star) {
        bad.push("Ric*");
    }
    if milnor_scalar(&o) != a.ricci.s || trace(&ric) != a.ricci.s {
        bad.push("s");
    }
    if trace(&rics) != a.ricci.s_star {
        bad.push("s*");
    }
    if o.rho(&o.lc) != from_tensor(&a.forms_lc.rho) || o.r(&o.lc) != from_tensor(&a.forms_lc.r) {
        bad.push("Levi-Civita Ricci forms");
    }
    let u = o.minimal();
    if o.rho(&u) != from_tensor(&a.forms_minimal.rho) || o.r(&u) != from_tensor(&a.forms_minimal.r) {
        bad.push("minimal Ricci forms");
    }
    if let Some(h) = &a.forms_chern {
        let c = o.chern(1);
        let preserves = (0..m).all(|i| mul(&c[i], &o.j) == mul(&o.j, &c[i]));
        if !preserves || o.rho(&c) != from_tensor(&h.rho) || o.r(&c) != from_tensor(&h.r) {
            bad.push("Chern Ricci forms");
        }
    }
    let th = a.theta().to_tensor();
    let codiff: Scalar = (0..m).flat_map(|i| (0..m).map(move |k| (i, k))).map(|(i, k)| th.get(&[k]) * &o.lc[i][k][i]).sum();
    if codiff != a.codiff_theta {
        bad.push("d*θ");
    }
    let dom = a.domega.to_tensor();
    for x in 0..m {
        for y in 0..m {
            for z in 0..m {
                if &o.domega(x, y, z) != dom.get(&[x, y, z]) {
                    bad.push("dω");
                }
            }
        }
    }
    bad.dedup();
    bad
}

/// `½dω(Y,Z,W) = ⟨ξ_YZ,JW⟩ + ⟨ξ_WY,JZ⟩ + ⟨ξ_ZW,JY⟩`, returned as dω.
pub fn domega_from(xi: &hermitian_core::Tensor, j: &hermitian_core::Tensor) -> hermitian_core::Tensor {
    let a = hermitian_core::structure::j_slot(xi, j, 2);
    hermitian_core::Tensor::from_fn(xi.dim(), 3, |i| {
        let (y, z, w) = (i[0], i[1], i[2]);
        let sum = a.get(&[y, z, w]) + a.get(&[w, y, z]) + a.get(&[z, w, y]);
        &sum + &sum
    })
}
