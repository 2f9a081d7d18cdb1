//! Exact coefficients: polynomials in formal parameters with coefficients in ℚ(√d).

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("extension mismatch: sqrt({0}) and sqrt({1}) cannot be mixed")]
    ExtensionMismatch(u64, u64),
    #[error("extension {0} is not square-free")]
    NotSquareFree(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("non-constant divisor")]
    NonConstantDivisor,
    #[error("unbound parameters: {0}")]
    Unbound(String),
    #[error("column {col}: {msg}")]
    Parse { col: usize, msg: String },
    #[error("{0} has no square root in the coefficient field")]
    NoSquareRoot(String),
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn is_square_free(d: u64) -> bool {
    if d == 0 {
        return true;
    }
    let mut k = 2u64;
    while k * k <= d {
        if d % (k * k) == 0 {
            return false;
        }
        k += 1;
    }
    true
}

/// Exponent vector over the parameter list, trailing zeros trimmed.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn new(mut exps: Vec<u32>) -> Self {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        Monomial(exps)
    }

    pub fn var(index: usize) -> Self {
        let mut e = vec![0; index + 1];
        e[index] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn exponent(&self, index: usize) -> u32 {
        self.0.get(index).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    fn times(&self, other: &Monomial) -> Monomial {
        let (long, short) = if self.0.len() >= other.0.len() {
            (&self.0, &other.0)
        } else {
            (&other.0, &self.0)
        };
        let mut e = long.clone();
        for (a, b) in e.iter_mut().zip(short) {
            *a += b;
        }
        Monomial(e)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// `rational + surd·√d`
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Quad {
    pub rational: Rational,
    pub surd: Rational,
}

impl Quad {
    fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.surd.is_zero()
    }
}

/// An exact scalar. Equality is structural on the canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    ext: u64,
    terms: Vec<(Monomial, Quad)>,
}

fn merge_ext(a: u64, b: u64) -> Result<u64, ScalarError> {
    match (a, b) {
        (0, x) | (x, 0) => Ok(x),
        (x, y) if x == y => Ok(x),
        (x, y) => Err(ScalarError::ExtensionMismatch(x, y)),
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::default()
    }

    pub fn one() -> Self {
        Scalar::from_rational(Rational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    pub fn frac(n: i64, d: i64) -> Self {
        Scalar::from_rational(rat(n, d))
    }

    pub fn from_rational(r: Rational) -> Self {
        if r.is_zero() {
            return Scalar::zero();
        }
        Scalar {
            ext: 0,
            terms: vec![(Monomial::one(), Quad { rational: r, surd: Rational::zero() })],
        }
    }

    /// `coeff·√d`.
    pub fn surd(coeff: Rational, d: u64) -> Result<Self, ScalarError> {
        Scalar::normalize(d, vec![(Monomial::one(), Rational::zero(), coeff)])
    }

    /// The square root of the extension, `√d`.
    pub fn sqrt_ext(d: u64) -> Result<Self, ScalarError> {
        Scalar::surd(Rational::one(), d)
    }

    /// The formal parameter with the given index.
    pub fn param(index: usize) -> Self {
        Scalar {
            ext: 0,
            terms: vec![(Monomial::var(index), Quad { rational: Rational::one(), surd: Rational::zero() })],
        }
    }

    /// Canonical representative of a raw term list `(monomial, p, q)` meaning Σ (p + q√d)·monomial.
    pub fn normalize(ext: u64, raw: Vec<(Monomial, Rational, Rational)>) -> Result<Self, ScalarError> {
        if !is_square_free(ext) {
            return Err(ScalarError::NotSquareFree(ext));
        }
        let mut map: BTreeMap<Monomial, Quad> = BTreeMap::new();
        for (m, mut p, mut q) in raw {
            if ext == 0 && !q.is_zero() {
                return Err(ScalarError::NotSquareFree(0));
            }
            if ext == 1 {
                p += &q;
                q = Rational::zero();
            }
            let m = Monomial::new(m.0);
            let e = map
                .entry(m)
                .or_insert_with(|| Quad { rational: Rational::zero(), surd: Rational::zero() });
            e.rational += p;
            e.surd += q;
        }
        Ok(Scalar::from_map(if ext == 1 { 0 } else { ext }, map))
    }

    fn from_map(ext: u64, map: BTreeMap<Monomial, Quad>) -> Self {
        let terms: Vec<_> = map.into_iter().filter(|(_, q)| !q.is_zero()).collect();
        let has_surd = terms.iter().any(|(_, q)| !q.surd.is_zero());
        Scalar { ext: if has_surd { ext } else { 0 }, terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().is_some_and(|r| r.is_one())
    }

    /// The extension this value actually uses (0 when it is in ℚ[params]).
    pub fn ext(&self) -> u64 {
        self.ext
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational, &Rational)> {
        self.terms.iter().map(|(m, q)| (m, &q.rational, &q.surd))
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.as_slice() {
            [] => Some(Rational::zero()),
            [(m, q)] if m.is_one() && q.surd.is_zero() => Some(q.rational.clone()),
            _ => None,
        }
    }

    /// Parameter indices appearing with nonzero exponent.
    pub fn parameters(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (m, _) in &self.terms {
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 && !out.contains(&i) {
                    out.push(i);
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn checked_add(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        let ext = merge_ext(self.ext, other.ext)?;
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < other.terms.len() {
            let ord = match (self.terms.get(i), other.terms.get(j)) {
                (Some(a), Some(b)) => a.0.cmp(&b.0),
                (Some(_), None) => Ordering::Less,
                _ => Ordering::Greater,
            };
            match ord {
                Ordering::Less => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.terms[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let (m, a) = &self.terms[i];
                    let b = &other.terms[j].1;
                    let q = Quad { rational: &a.rational + &b.rational, surd: &a.surd + &b.surd };
                    if !q.is_zero() {
                        out.push((m.clone(), q));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        let has_surd = out.iter().any(|(_, q)| !q.surd.is_zero());
        Ok(Scalar { ext: if has_surd { ext } else { 0 }, terms: out })
    }

    pub fn checked_sub(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        let ext = merge_ext(self.ext, other.ext)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Scalar::zero());
        }
        let d = Rational::from_integer(BigInt::from(ext));
        let product = |a: &Quad, b: &Quad| {
            let mut rational = &a.rational * &b.rational;
            if !a.surd.is_zero() && !b.surd.is_zero() {
                rational += &a.surd * &b.surd * &d;
            }
            let surd = &a.rational * &b.surd + &a.surd * &b.rational;
            Quad { rational, surd }
        };
        if self.terms.len() == 1 && other.terms.len() == 1 {
            let (ma, a) = &self.terms[0];
            let (mb, b) = &other.terms[0];
            let mut map = BTreeMap::new();
            map.insert(ma.times(mb), product(a, b));
            return Ok(Scalar::from_map(ext, map));
        }
        let mut map: BTreeMap<Monomial, Quad> = BTreeMap::new();
        for (ma, a) in &self.terms {
            for (mb, b) in &other.terms {
                let p = product(a, b);
                match map.entry(ma.times(mb)) {
                    std::collections::btree_map::Entry::Vacant(v) => {
                        v.insert(p);
                    }
                    std::collections::btree_map::Entry::Occupied(mut o) => {
                        let e = o.get_mut();
                        e.rational += p.rational;
                        e.surd += p.surd;
                    }
                }
            }
        }
        Ok(Scalar::from_map(ext, map))
    }

    pub fn scale(&self, r: &Rational) -> Scalar {
        if r.is_zero() {
            return Scalar::zero();
        }
        Scalar {
            ext: self.ext,
            terms: self
                .terms
                .iter()
                .map(|(m, q)| (m.clone(), Quad { rational: &q.rational * r, surd: &q.surd * r }))
                .collect(),
        }
    }

    /// Multiplicative inverse of a nonzero parameter-free value.
    pub fn inverse(&self) -> Result<Scalar, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        if !self.is_constant() {
            return Err(ScalarError::NonConstantDivisor);
        }
        let q = &self.terms[0].1;
        let d = Rational::from_integer(BigInt::from(self.ext));
        let norm = &q.rational * &q.rational - &q.surd * &q.surd * d;
        let raw = vec![(Monomial::one(), &q.rational / &norm, -&q.surd / &norm)];
        Scalar::normalize(self.ext, raw)
    }

    pub fn div_const(&self, c: &Scalar) -> Result<Scalar, ScalarError> {
        self.checked_mul(&c.inverse()?)
    }

    pub fn div_int(&self, n: i64) -> Scalar {
        self.scale(&rat(1, n))
    }

    pub fn pow(&self, k: u32) -> Scalar {
        let mut out = Scalar::one();
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Substitute parameters by index; every parameter present must be bound.
    pub fn evaluate(&self, bindings: &[Option<Rational>]) -> Result<Scalar, ScalarError> {
        let missing: Vec<usize> = self
            .parameters()
            .into_iter()
            .filter(|&i| bindings.get(i).is_none_or(|b| b.is_none()))
            .collect();
        if !missing.is_empty() {
            let names: Vec<String> = missing.iter().map(|i| format!("#{i}")).collect();
            return Err(ScalarError::Unbound(names.join(", ")));
        }
        let mut raw = Vec::with_capacity(self.terms.len());
        for (m, q) in &self.terms {
            let mut factor = Rational::one();
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    let v = bindings[i].as_ref().expect("checked above");
                    factor *= num_traits::pow(v.clone(), e as usize);
                }
            }
            raw.push((Monomial::one(), &q.rational * &factor, &q.surd * &factor));
        }
        Scalar::normalize(self.ext, raw)
    }

    /// Named variant of [`Scalar::evaluate`].
    pub fn evaluate_named(
        &self,
        names: &[String],
        bindings: &BTreeMap<String, Rational>,
    ) -> Result<Scalar, ScalarError> {
        let missing: Vec<String> = self
            .parameters()
            .into_iter()
            .map(|i| names.get(i).cloned().unwrap_or_else(|| format!("#{i}")))
            .filter(|n| !bindings.contains_key(n))
            .collect();
        if !missing.is_empty() {
            return Err(ScalarError::Unbound(missing.join(", ")));
        }
        let by_index: Vec<Option<Rational>> = names.iter().map(|n| bindings.get(n).cloned()).collect();
        self.evaluate(&by_index)
    }

    /// Square root of a parameter-free value inside ℚ(√d).
    pub fn sqrt_in(&self, d: u64) -> Result<Scalar, ScalarError> {
        let fail = || ScalarError::NoSquareRoot(self.to_string());
        if !self.is_constant() {
            return Err(fail());
        }
        if self.is_zero() {
            return Ok(Scalar::zero());
        }
        let q = &self.terms[0].1;
        if q.surd.is_zero() {
            if let Some(r) = rational_sqrt(&q.rational) {
                return Ok(Scalar::from_rational(r));
            }
            if d > 1 {
                let dd = Rational::from_integer(BigInt::from(d));
                if let Some(r) = rational_sqrt(&(&q.rational / &dd)) {
                    return Scalar::surd(r, d);
                }
            }
            return Err(fail());
        }
        // (a + b√d)² = p + q√d  ⇒  a² = (p ± √(p² − d q²)) / 2
        let ext = self.ext;
        let dd = Rational::from_integer(BigInt::from(ext));
        let disc = &q.rational * &q.rational - &q.surd * &q.surd * &dd;
        let root = rational_sqrt(&disc).ok_or_else(fail)?;
        for sign in [1, -1] {
            let a2 = (&q.rational + &root * Rational::from_integer(BigInt::from(sign))) / rat(2, 1);
            if a2.is_positive() {
                if let Some(a) = rational_sqrt(&a2) {
                    let b = &q.surd / (&a * rat(2, 1));
                    let cand = Scalar::normalize(ext, vec![(Monomial::one(), a, b)])?;
                    if &(&cand * &cand) == self {
                        return Ok(cand);
                    }
                }
            }
        }
        Err(fail())
    }

    /// Parse the literal grammar, e.g. `"-1/2 + 1/2*r"`, `"-q"`, `"3/4*q^2"`.
    pub fn parse(src: &str, params: &[String], ext: u64) -> Result<Scalar, ScalarError> {
        Parser { src: src.as_bytes(), pos: 0, params, ext }.parse()
    }

    /// Render in the literal grammar with the given parameter names.
    pub fn render(&self, params: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (m, q) in &self.terms {
            let mut factors = Vec::new();
            for (i, &e) in m.0.iter().enumerate() {
                let name = params.get(i).cloned().unwrap_or_else(|| format!("t{i}"));
                match e {
                    0 => {}
                    1 => factors.push(name),
                    _ => factors.push(format!("{name}^{e}")),
                }
            }
            if !q.rational.is_zero() {
                parts.push(render_term(&q.rational, &factors));
            }
            if !q.surd.is_zero() {
                let mut f = vec!["r".to_string()];
                f.extend(factors.iter().cloned());
                parts.push(render_term(&q.surd, &f));
            }
        }
        parts.join(" + ")
    }
}

fn render_term(c: &Rational, factors: &[String]) -> String {
    if factors.is_empty() {
        return c.to_string();
    }
    let body = factors.join("*");
    if c.is_one() {
        body
    } else if (-c).is_one() {
        format!("-{body}")
    } else {
        format!("{c}*{body}")
    }
}

fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    params: &'a [String],
    ext: u64,
}

impl Parser<'_> {
    fn err(&self, msg: impl Into<String>) -> ScalarError {
        ScalarError::Parse { col: self.pos + 1, msg: msg.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn integer(&mut self) -> Result<BigInt, ScalarError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        text.parse::<BigInt>().map_err(|e| self.err(e.to_string()))
    }

    fn parse(mut self) -> Result<Scalar, ScalarError> {
        if !is_square_free(self.ext) {
            return Err(ScalarError::NotSquareFree(self.ext));
        }
        let mut total = Scalar::zero();
        let mut first = true;
        loop {
            let mut negative = false;
            match self.peek() {
                None if first => return Err(self.err("empty literal")),
                None => break,
                Some(b'+') if !first => self.pos += 1,
                Some(b'-') if !first => {
                    self.pos += 1;
                    negative = true;
                }
                _ if !first => return Err(self.err("expected '+' or '-'")),
                _ => {}
            }
            while let Some(c @ (b'+' | b'-')) = self.peek() {
                self.pos += 1;
                if c == b'-' {
                    negative = !negative;
                }
            }
            let mut term = self.term()?;
            if negative {
                term = -term;
            }
            total = total.checked_add(&term)?;
            first = false;
        }
        Ok(total)
    }

    fn term(&mut self) -> Result<Scalar, ScalarError> {
        let mut value = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let f = self.factor()?;
            value = value.checked_mul(&f)?;
        }
        Ok(value)
    }

    fn factor(&mut self) -> Result<Scalar, ScalarError> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                let mut d = BigInt::one();
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    d = self.integer()?;
                    if d.is_zero() {
                        return Err(self.err("zero denominator"));
                    }
                }
                Ok(Scalar::from_rational(Rational::new(n, d)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                let base = if name == "r" {
                    if self.ext == 0 {
                        self.pos = start;
                        return Err(self.err("'r' used without a square-root extension"));
                    }
                    Scalar::sqrt_ext(self.ext)?
                } else if let Some(i) = self.params.iter().position(|p| p == name) {
                    Scalar::param(i)
                } else {
                    self.pos = start;
                    return Err(self.err(format!("unknown parameter '{name}'")));
                };
                if self.peek() == Some(b'^') {
                    self.pos += 1;
                    let e = self.integer()?.to_u32().ok_or_else(|| self.err("exponent too large"))?;
                    Ok(base.pow(e))
                } else {
                    Ok(base)
                }
            }
            Some(b'(') => {
                self.pos += 1;
                let mut inner = self.term()?;
                while let Some(c @ (b'+' | b'-')) = self.peek() {
                    self.pos += 1;
                    let t = self.term()?;
                    inner = if c == b'+' { inner.checked_add(&t)? } else { inner.checked_sub(&t)? };
                }
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of literal")),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&[]))
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            ext: self.ext,
            terms: self
                .terms
                .iter()
                .map(|(m, q)| (m.clone(), Quad { rational: -&q.rational, surd: -&q.surd }))
                .collect(),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
    }
}

impl AddAssign<Scalar> for Scalar {
    fn add_assign(&mut self, rhs: Scalar) {
        *self = &*self + &rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self = &*self - rhs;
    }
}

impl SubAssign<Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: Scalar) {
        *self = &*self - &rhs;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<Rational> for Scalar {
    fn from(r: Rational) -> Self {
        Scalar::from_rational(r)
    }
}

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |a, b| a + b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Vec<String> {
        vec!["q".to_string()]
    }

    #[test]
    fn normalize_reduces_fractions() {
        let s = Scalar::normalize(0, vec![(Monomial::one(), rat(2, 4), Rational::zero())]).unwrap();
        assert_eq!(s, Scalar::frac(1, 2));
        let z = Scalar::normalize(0, vec![(Monomial::one(), rat(0, 1), Rational::zero())]).unwrap();
        assert!(z.is_zero());
        let s = Scalar::normalize(3, vec![(Monomial::var(0), rat(3, 6), rat(2, 4))]).unwrap();
        let expected = Scalar::parse("1/2*q + 1/2*r*q", &q(), 3).unwrap();
        assert_eq!(s, expected);
        assert_eq!(s.clone(), Scalar::normalize(3, s.terms().map(|(m, p, r)| (m.clone(), p.clone(), r.clone())).collect()).unwrap());
    }

    #[test]
    fn rejects_non_square_free() {
        assert_eq!(Scalar::sqrt_ext(12), Err(ScalarError::NotSquareFree(12)));
        assert!(Scalar::parse("r", &[], 8).is_err());
    }

    #[test]
    fn quadratic_products() {
        let r3 = Scalar::sqrt_ext(3).unwrap();
        let a = Scalar::parse("1/2 + 1/2*r", &[], 3).unwrap();
        assert_eq!(&a * &r3, Scalar::parse("3/2 + 1/2*r", &[], 3).unwrap());
        let h = Scalar::parse("-1/2*r", &[], 3).unwrap();
        assert_eq!(&h * &h, Scalar::frac(3, 4));
        let qq = Scalar::param(0);
        assert_eq!(&qq * &qq, Scalar::parse("q^2", &q(), 0).unwrap());
    }

    #[test]
    fn extension_mismatch_is_an_error() {
        let a = Scalar::sqrt_ext(3).unwrap();
        let b = Scalar::sqrt_ext(5).unwrap();
        assert_eq!(a.checked_mul(&b), Err(ScalarError::ExtensionMismatch(3, 5)));
        assert!(a.checked_add(&Scalar::from_int(2)).is_ok());
    }

    #[test]
    fn division_by_constants() {
        assert_eq!(Scalar::from_int(9).div_const(&Scalar::from_int(4)).unwrap(), Scalar::frac(9, 4));
        let a = Scalar::parse("1 + r", &[], 3).unwrap();
        assert_eq!(a.div_const(&Scalar::from_int(2)).unwrap(), Scalar::parse("1/2 + 1/2*r", &[], 3).unwrap());
        let inv = a.inverse().unwrap();
        assert!((&inv * &a).is_one());
        assert_eq!(Scalar::from_int(1).div_const(&Scalar::param(0)), Err(ScalarError::NonConstantDivisor));
        assert_eq!(Scalar::from_int(1).div_const(&Scalar::zero()), Err(ScalarError::DivisionByZero));
    }

    #[test]
    fn evaluation() {
        let s = Scalar::parse("-5/2 - 1/2*q^2", &q(), 0).unwrap();
        let mut b = BTreeMap::new();
        b.insert("q".to_string(), rat(1, 1));
        assert_eq!(s.evaluate_named(&q(), &b).unwrap(), Scalar::from_int(-3));
        let ss = Scalar::parse("-7/2 - 3/2*q^2", &q(), 0).unwrap();
        b.insert("q".to_string(), rat(0, 1));
        assert_eq!(ss.evaluate_named(&q(), &b).unwrap(), Scalar::frac(-7, 2));
        assert_eq!(Scalar::from_int(5).evaluate(&[]).unwrap(), Scalar::from_int(5));
        assert!(matches!(s.evaluate(&[]), Err(ScalarError::Unbound(_))));
    }

    #[test]
    fn literal_round_trip() {
        for lit in ["-1/2 + 1/2*r", "-q", "3/4*q^2", "-5/2 + -1/2*q^2", "r*q", "0", "7"] {
            let s = Scalar::parse(lit, &q(), 3).unwrap();
            assert_eq!(Scalar::parse(&s.render(&q()), &q(), 3).unwrap(), s, "{lit}");
        }
        assert_eq!(Scalar::parse("-5/2 - 1/2*q^2", &q(), 0).unwrap().render(&q()), "-5/2 + -1/2*q^2");
        assert_eq!(Scalar::parse("-(1/2)*r", &[], 3).unwrap().render(&[]), "-1/2*r");
    }

    #[test]
    fn parse_errors_carry_columns() {
        match Scalar::parse("1 + x", &q(), 0) {
            Err(ScalarError::Parse { col, .. }) => assert_eq!(col, 5),
            other => panic!("{other:?}"),
        }
        assert!(Scalar::parse("", &q(), 0).is_err());
        assert!(Scalar::parse("1/0", &q(), 0).is_err());
    }

    #[test]
    fn square_roots() {
        assert_eq!(Scalar::frac(9, 4).sqrt_in(0).unwrap(), Scalar::frac(3, 2));
        assert_eq!(Scalar::from_int(3).sqrt_in(3).unwrap(), Scalar::sqrt_ext(3).unwrap());
        let x = Scalar::parse("2 + r", &[], 3).unwrap();
        let sq = &x * &x;
        let root = sq.sqrt_in(3).unwrap();
        assert_eq!(&root * &root, sq);
        assert!(Scalar::from_int(2).sqrt_in(3).is_err());
    }
}
