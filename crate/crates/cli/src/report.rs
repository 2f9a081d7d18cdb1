//! Analysis reports: a serializable record of the computed quantities and the audit.

use hermitian_core::audit::{AuditReport, Status};
use hermitian_core::{Analysis, Form, Scalar};
use serde::{Deserialize, Serialize};

use crate::file::{form_terms, tensor_terms, Term};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub name: String,
    pub dimension: usize,
    pub parameters: Vec<String>,
    pub sqrt_extension: u64,
    pub classification: Classification,
    pub theta: Vec<Term>,
    pub theta_norm2: String,
    pub codifferential_theta: String,
    pub dtheta: DthetaComponents,
    pub torsion_norms: TorsionNorms,
    pub s: String,
    pub s_star: String,
    pub ricci: RicciComponents,
    pub ricci_forms: RicciFormsByConnection,
    pub su: Option<SuData>,
    pub audit: AuditSummary,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub class: String,
    pub summands: String,
    pub hermitian: bool,
    pub specializations: Vec<Specialization>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Specialization {
    pub parameter: String,
    pub value: String,
    pub class: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DthetaComponents {
    pub form: Vec<Term>,
    pub r_omega: Vec<Term>,
    pub lambda0_11: Vec<Term>,
    pub lambda20: Vec<Term>,
}

/// ‖ξ₍ᵢ₎‖².
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionNorms {
    pub xi1: String,
    pub xi2: String,
    pub xi3: String,
    pub xi4: String,
}

/// Ric, Ric* as tensor entries and their type components.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RicciComponents {
    pub ric: Vec<Term>,
    pub ric_star: Vec<Term>,
    pub s_minus_s_star: String,
    pub s_plus_3s_star: String,
    pub ric_minus_star_trace: String,
    pub ric_minus_star_lambda0_11: Vec<Term>,
    pub ric_minus_star_sigma20: Vec<Term>,
    pub ric_star_lambda20: Vec<Term>,
    pub ric_sigma20: Vec<Term>,
    pub ric_plus_3star_trace: String,
    pub ric_plus_3star_lambda0_11: Vec<Term>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RicciFormsByConnection {
    pub levi_civita: RicciForms,
    pub minimal: RicciForms,
    pub chern: Option<RicciForms>,
}

/// ρ and r as 2-forms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RicciForms {
    pub rho: Vec<Term>,
    pub r: Vec<Term>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuData {
    pub psi_plus: Vec<Term>,
    pub psi_minus: Vec<Term>,
    pub eta: Vec<Term>,
    pub eta_hat: Vec<Term>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditSummary {
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub failures: Vec<AuditFailure>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditFailure {
    pub id: String,
    pub statement: String,
    pub residuals: Vec<Vec<Term>>,
}

impl AuditSummary {
    pub fn of(report: &AuditReport, params: &[String]) -> Self {
        let (passed, failed, skipped) = report.count();
        let failures = report
            .checks
            .iter()
            .filter(|c| c.status == Status::Failed)
            .map(|c| AuditFailure {
                id: c.id.to_string(),
                statement: c.statement.to_string(),
                residuals: c.residuals.iter().map(|r| tensor_terms(r, params)).collect(),
            })
            .collect();
        AuditSummary { passed, failed, skipped, failures }
    }
}

impl Report {
    pub fn new(name: &str, sqrt_extension: u64, a: &Analysis, audit: &AuditReport) -> Self {
        let s = &a.structure;
        let p = s.params();
        let lit = |x: &Scalar| x.render(p);
        let form = |f: &Form| form_terms(f, p);
        let forms = |f: &hermitian_core::curvature::RicciForms| RicciForms {
            rho: form(&f.rho_form()),
            r: form(&f.r_form()),
        };
        let dec = &a.decomposition;
        let comp = &a.components;
        Report {
            name: name.to_string(),
            dimension: s.dim(),
            parameters: p.to_vec(),
            sqrt_extension,
            classification: Classification {
                class: a.class.label(),
                summands: a.class.summands(),
                hermitian: a.class.is_hermitian(),
                specializations: a
                    .specializations
                    .iter()
                    .map(|x| Specialization {
                        parameter: x.parameter.clone(),
                        value: x.value.to_string(),
                        class: x.class.label(),
                    })
                    .collect(),
            },
            theta: form(a.theta()),
            theta_norm2: lit(&a.theta_norm2),
            codifferential_theta: lit(&a.codiff_theta),
            dtheta: DthetaComponents {
                form: form(&a.dtheta.dtheta),
                r_omega: form(&a.dtheta.split.r_omega),
                lambda0_11: form(&a.dtheta.split.lambda0_11),
                lambda20: form(&a.dtheta.split.lambda20),
            },
            torsion_norms: TorsionNorms {
                xi1: lit(dec.norm2(1)),
                xi2: lit(dec.norm2(2)),
                xi3: lit(dec.norm2(3)),
                xi4: lit(dec.norm2(4)),
            },
            s: lit(&a.ricci.s),
            s_star: lit(&a.ricci.s_star),
            ricci: RicciComponents {
                ric: tensor_terms(&a.ricci.ric, p),
                ric_star: tensor_terms(&a.ricci.ric_star, p),
                s_minus_s_star: lit(&comp.s_minus_s_star),
                s_plus_3s_star: lit(&comp.s_plus_3s_star),
                ric_minus_star_trace: lit(&comp.ric_minus_star.trace_coefficient),
                ric_minus_star_lambda0_11: tensor_terms(&comp.ric_minus_star.lambda0_11, p),
                ric_minus_star_sigma20: tensor_terms(&comp.ric_minus_star.sigma20, p),
                ric_star_lambda20: form(&comp.ric_star_20),
                ric_sigma20: tensor_terms(&comp.ric_sigma, p),
                ric_plus_3star_trace: lit(&comp.ric_plus_3star.trace_coefficient),
                ric_plus_3star_lambda0_11: tensor_terms(&comp.ric_plus_3star.lambda0_11, p),
            },
            ricci_forms: RicciFormsByConnection {
                levi_civita: forms(&a.forms_lc),
                minimal: forms(&a.forms_minimal),
                chern: a.forms_chern.as_ref().map(forms),
            },
            su: a.su.as_ref().map(|su| SuData {
                psi_plus: form(&su.psi_plus),
                psi_minus: form(&su.psi_minus),
                eta: form(&su.eta),
                eta_hat: form(&su.eta_hat),
            }),
            audit: AuditSummary::of(audit, p),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    /// Plain-text rendering with forms written as `c e^ij` sums.
    pub fn to_text(&self) -> String {
        let f = |t: &[Term]| text_terms(t, false);
        let m = |t: &[Term]| text_terms(t, true);
        let mut out = Vec::new();
        let mut line = |k: &str, v: String| out.push(format!("{k} = {v}"));
        line("structure", self.name.clone());
        line("dimension", self.dimension.to_string());
        if !self.parameters.is_empty() {
            line("parameters", self.parameters.join(", "));
        }
        if self.sqrt_extension > 1 {
            line("r", format!("sqrt({})", self.sqrt_extension));
        }
        line("class", self.classification.class.clone());
        for sp in &self.classification.specializations {
            line(&format!("class at {} = {}", sp.parameter, sp.value), sp.class.clone());
        }
        line("theta", f(&self.theta));
        line("|theta|^2", self.theta_norm2.clone());
        line("d*theta", self.codifferential_theta.clone());
        line("dtheta", f(&self.dtheta.form));
        line("dtheta[R omega]", f(&self.dtheta.r_omega));
        line("dtheta[lambda0^11]", f(&self.dtheta.lambda0_11));
        line("dtheta[lambda^20]", f(&self.dtheta.lambda20));
        let n = &self.torsion_norms;
        for (i, v) in [&n.xi1, &n.xi2, &n.xi3, &n.xi4].into_iter().enumerate() {
            line(&format!("|xi{}|^2", i + 1), v.clone());
        }
        line("s", self.s.clone());
        line("s*", self.s_star.clone());
        let r = &self.ricci;
        line("Ric", m(&r.ric));
        line("Ric*", m(&r.ric_star));
        line("s - s*", r.s_minus_s_star.clone());
        line("s + 3s*", r.s_plus_3s_star.clone());
        line("(Ric - Ric*)[R]", r.ric_minus_star_trace.clone());
        line("(Ric - Ric*)[lambda0^11]", m(&r.ric_minus_star_lambda0_11));
        line("(Ric - Ric*)[sigma^20]", m(&r.ric_minus_star_sigma20));
        line("Ric*[lambda^20]", f(&r.ric_star_lambda20));
        line("Ric[sigma^20]", m(&r.ric_sigma20));
        line("(Ric + 3Ric*)[R]", r.ric_plus_3star_trace.clone());
        line("(Ric + 3Ric*)[lambda0^11]", m(&r.ric_plus_3star_lambda0_11));
        let rf = &self.ricci_forms;
        for (label, forms) in [("LC", Some(&rf.levi_civita)), ("U", Some(&rf.minimal)), ("h", rf.chern.as_ref())] {
            if let Some(x) = forms {
                line(&format!("rho_{label}"), f(&x.rho));
                line(&format!("r_{label}"), f(&x.r));
            }
        }
        if let Some(su) = &self.su {
            line("psi+", f(&su.psi_plus));
            line("psi-", f(&su.psi_minus));
            line("eta", f(&su.eta));
            line("eta^", f(&su.eta_hat));
        }
        let a = &self.audit;
        line("audit", format!("{} passed, {} failed, {} skipped", a.passed, a.failed, a.skipped));
        for fail in &a.failures {
            out.push(format!("FAILED {}: {}", fail.id, fail.statement));
            for res in &fail.residuals {
                out.push(format!("  residual {}", text_terms(res, true)));
            }
        }
        out.push(String::new());
        out.join("\n")
    }
}

/// `-(1/2)*r e^5`, or `[1,1]=...` entries for tensors.
fn text_terms(terms: &[Term], tensor: bool) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    if tensor {
        let parts: Vec<String> = terms
            .iter()
            .map(|t| {
                let idx: Vec<String> = t.idx.iter().map(usize::to_string).collect();
                format!("[{}]={}", idx.join(","), t.c)
            })
            .collect();
        return parts.join(", ");
    }
    let mut out = String::new();
    for t in terms {
        let label: String =
            t.idx.iter().map(|&i| if i < 10 { i.to_string() } else { format!("{{{i}}}") }).collect();
        let (negative, body) = text_coefficient(&t.c);
        let sep = match (out.is_empty(), negative) {
            (true, true) => "-",
            (true, false) => "",
            (false, true) => " - ",
            (false, false) => " + ",
        };
        let body = if body.is_empty() { String::new() } else { format!("{body} ") };
        out.push_str(&format!("{sep}{body}e^{label}"));
    }
    out
}

/// Sign and magnitude of a coefficient, fractions parenthesised and a unit factor dropped.
fn text_coefficient(c: &str) -> (bool, String) {
    if c.contains(' ') {
        return (false, format!("({c})"));
    }
    let (negative, rest) = match c.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, c),
    };
    let mut factors: Vec<String> = rest.split('*').map(str::to_string).collect();
    let numeric = factors[0].starts_with(|ch: char| ch.is_ascii_digit());
    if numeric {
        if factors[0] == "1" {
            factors.remove(0);
        } else if factors[0].contains('/') {
            factors[0] = format!("({})", factors[0]);
        }
    }
    (negative, factors.join("*"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coefficients_in_text_style() {
        assert_eq!(text_coefficient("-1/2*r"), (true, "(1/2)*r".to_string()));
        assert_eq!(text_coefficient("1"), (false, String::new()));
        assert_eq!(text_coefficient("2"), (false, "2".to_string()));
        assert_eq!(text_coefficient("-q"), (true, "q".to_string()));
        assert_eq!(text_coefficient("1 + q^2"), (false, "(1 + q^2)".to_string()));
    }

    #[test]
    fn forms_in_text_style() {
        let terms = vec![
            Term { idx: vec![1, 2], c: "-1".to_string() },
            Term { idx: vec![3, 4], c: "-2".to_string() },
            Term { idx: vec![5, 12], c: "1/2".to_string() },
        ];
        assert_eq!(text_terms(&terms, false), "-e^12 - 2 e^34 + (1/2) e^5{12}");
        assert_eq!(text_terms(&[], false), "0");
    }
}
