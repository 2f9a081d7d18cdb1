//! The JSON structure file format (1-based indices).

use std::collections::BTreeMap;
use std::fmt;

use hermitian_core::algebra::AlgebraError;
use hermitian_core::catalog::{SpecError, StructureSpec};
use hermitian_core::{Form, Scalar, Tensor};
use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureFile {
    pub name: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub description: String,
    pub dimension: usize,
    #[serde(default)]
    pub parameters: Vec<String>,
    #[serde(default)]
    pub sqrt_extension: u64,
    #[serde(default)]
    pub brackets: Vec<Bracket>,
    #[serde(default)]
    pub metric: Metric,
    pub kaehler_form: Vec<PairTerm>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complex_volume: Option<ComplexVolume>,
}

/// `[e_i, e_j] = Σ coeffs[k] e_k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bracket {
    pub i: usize,
    pub j: usize,
    pub coeffs: BTreeMap<usize, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Metric {
    Named(String),
    Matrix(Vec<Vec<String>>),
}

impl Default for Metric {
    fn default() -> Self {
        Metric::Named("identity".to_string())
    }
}

/// `c e^{ij}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairTerm {
    pub i: usize,
    pub j: usize,
    pub c: String,
}

/// `c e^{idx}` for a form of any degree, or one entry of a tensor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Term {
    pub idx: Vec<usize>,
    pub c: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexVolume {
    pub psi_plus: Vec<Term>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for Diagnostic {}

/// Byte offsets of the list entries, for anchoring semantic errors.
#[derive(Deserialize)]
struct Anchors<'a> {
    #[serde(borrow, default)]
    brackets: Vec<&'a RawValue>,
    #[serde(borrow, default)]
    metric: Option<&'a RawValue>,
    #[serde(borrow, default)]
    kaehler_form: Vec<&'a RawValue>,
    #[serde(borrow, default)]
    complex_volume: Option<&'a RawValue>,
}

struct Locator<'a> {
    text: &'a str,
    anchors: Anchors<'a>,
}

impl Locator<'_> {
    fn at(&self, raw: Option<&RawValue>, message: String) -> Diagnostic {
        let offset = raw.map_or(0, |r| r.get().as_ptr() as usize - self.text.as_ptr() as usize);
        let before = &self.text[..offset];
        let line = before.matches('\n').count() + 1;
        let column = before.len() - before.rfind('\n').map_or(0, |p| p + 1) + 1;
        Diagnostic { line, column, message }
    }

    fn bracket(&self, b: usize, message: String) -> Diagnostic {
        self.at(self.anchors.brackets.get(b).copied(), format!("brackets[{b}]: {message}"))
    }

    fn kaehler(&self, t: usize, message: String) -> Diagnostic {
        self.at(self.anchors.kaehler_form.get(t).copied(), format!("kaehler_form[{t}]: {message}"))
    }
}

/// Parses and validates a structure file into a buildable definition.
pub fn parse_structure(text: &str) -> Result<StructureSpec, Diagnostic> {
    let file: StructureFile = serde_json::from_str(text).map_err(|e| Diagnostic {
        line: e.line(),
        column: e.column(),
        message: e.to_string().split(" at line ").next().unwrap_or_default().to_string(),
    })?;
    let anchors: Anchors = serde_json::from_str(text).map_err(|e| Diagnostic {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let loc = Locator { text, anchors };
    let spec = file.to_spec(&loc)?;
    spec.build().map_err(|e| match e {
        SpecError::Algebra(AlgebraError::Jacobi { witness, .. }) => {
            let w = &witness[..3];
            let b = file.brackets.iter().position(|x| w.contains(&(x.i - 1)) && w.contains(&(x.j - 1)));
            let msg = e.to_string();
            match b {
                Some(b) => loc.bracket(b, msg),
                None => loc.at(loc.anchors.brackets.first().copied(), msg),
            }
        }
        SpecError::Algebra(e) => loc.at(loc.anchors.brackets.first().copied(), e.to_string()),
        SpecError::Dimension("metric") => loc.at(loc.anchors.metric, e.to_string()),
        SpecError::Dimension("complex_volume") => loc.at(loc.anchors.complex_volume, e.to_string()),
        e => loc.at(loc.anchors.kaehler_form.first().copied(), e.to_string()),
    })?;
    Ok(spec)
}

impl StructureFile {
    fn to_spec(&self, loc: &Locator) -> Result<StructureSpec, Diagnostic> {
        let dim = self.dimension;
        let (params, ext) = (&self.parameters, self.sqrt_extension);
        let lit = |s: &str| Scalar::parse(s, params, ext).map_err(|e| format!("literal {s:?}: {e}"));
        let index = |i: usize| if (1..=dim).contains(&i) { Ok(i - 1) } else { Err(format!("index {i} not in 1..={dim}")) };

        let mut brackets = Vec::new();
        for (b, entry) in self.brackets.iter().enumerate() {
            let mut coeffs = Vec::new();
            for (k, c) in &entry.coeffs {
                coeffs.push((index(*k).map_err(|m| loc.bracket(b, m))?, lit(c).map_err(|m| loc.bracket(b, m))?));
            }
            let i = index(entry.i).map_err(|m| loc.bracket(b, m))?;
            let j = index(entry.j).map_err(|m| loc.bracket(b, m))?;
            brackets.push((i, j, coeffs));
        }

        let metric = match &self.metric {
            Metric::Named(name) if name == "identity" => None,
            Metric::Named(name) => return Err(loc.at(loc.anchors.metric, format!("unknown metric {name:?}"))),
            Metric::Matrix(rows) => {
                if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
                    return Err(loc.at(loc.anchors.metric, format!("metric must be a {dim}×{dim} matrix")));
                }
                let mut g = Tensor::zeros(dim, 2);
                for (a, row) in rows.iter().enumerate() {
                    for (b, c) in row.iter().enumerate() {
                        g.set(&[a, b], lit(c).map_err(|m| loc.at(loc.anchors.metric, format!("metric[{a}][{b}]: {m}")))?);
                    }
                }
                if !g.is_symmetric() {
                    return Err(loc.at(loc.anchors.metric, "metric is not symmetric".to_string()));
                }
                Some(g)
            }
        };

        let mut omega = Form::zero(dim, 2);
        for (t, term) in self.kaehler_form.iter().enumerate() {
            let i = index(term.i).map_err(|m| loc.kaehler(t, m))?;
            let j = index(term.j).map_err(|m| loc.kaehler(t, m))?;
            if i == j {
                return Err(loc.kaehler(t, format!("repeated index {}", term.i)));
            }
            omega.add_term(&[i, j], &lit(&term.c).map_err(|m| loc.kaehler(t, m))?);
        }

        let psi_plus = match &self.complex_volume {
            None => None,
            Some(cv) => {
                let at = |m: String| loc.at(loc.anchors.complex_volume, format!("complex_volume: {m}"));
                let mut psi = Form::zero(dim, dim / 2);
                for term in &cv.psi_plus {
                    if term.idx.len() != dim / 2 {
                        return Err(at(format!("term {:?} has degree {}, expected {}", term.idx, term.idx.len(), dim / 2)));
                    }
                    let idx: Vec<usize> = term.idx.iter().map(|&i| index(i)).collect::<Result<_, _>>().map_err(at)?;
                    let mut sorted = idx.clone();
                    sorted.sort_unstable();
                    sorted.dedup();
                    if sorted.len() != idx.len() {
                        return Err(at(format!("repeated index in {:?}", term.idx)));
                    }
                    psi.add_term(&idx, &lit(&term.c).map_err(at)?);
                }
                Some(psi)
            }
        };

        Ok(StructureSpec {
            name: self.name.clone(),
            description: self.description.clone(),
            dim,
            params: params.clone(),
            ext,
            brackets,
            metric,
            omega,
            psi_plus,
        })
    }

    /// The file form of a structure definition.
    pub fn from_spec(spec: &StructureSpec) -> Self {
        let params = &spec.params;
        let brackets = spec
            .brackets
            .iter()
            .map(|(i, j, coeffs)| Bracket {
                i: i + 1,
                j: j + 1,
                coeffs: coeffs.iter().map(|(k, c)| (k + 1, c.render(params))).collect(),
            })
            .collect();
        let metric = match &spec.metric {
            None => Metric::default(),
            Some(g) => Metric::Matrix(
                (0..spec.dim).map(|a| (0..spec.dim).map(|b| g.get(&[a, b]).render(params)).collect()).collect(),
            ),
        };
        let kaehler_form =
            spec.omega.terms().map(|(idx, c)| PairTerm { i: idx[0] + 1, j: idx[1] + 1, c: c.render(params) }).collect();
        let complex_volume = spec.psi_plus.as_ref().map(|p| ComplexVolume { psi_plus: form_terms(p, params) });
        StructureFile {
            name: spec.name.clone(),
            description: spec.description.clone(),
            dimension: spec.dim,
            parameters: params.clone(),
            sqrt_extension: spec.ext,
            brackets,
            metric,
            kaehler_form,
            complex_volume,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("structure files serialize")
    }
}

pub fn form_terms(f: &Form, params: &[String]) -> Vec<Term> {
    f.terms().map(|(idx, c)| Term { idx: idx.iter().map(|i| i + 1).collect(), c: c.render(params) }).collect()
}

pub fn tensor_terms(t: &Tensor, params: &[String]) -> Vec<Term> {
    t.nonzero().map(|(idx, c)| Term { idx: idx.iter().map(|i| i + 1).collect(), c: c.render(params) }).collect()
}
