//! The full analysis pipeline for one structure.

use thiserror::Error;

use crate::curvature::{
    check_symmetries, curvature_components, ricci_pair, riemann, su3_scaled, su_refinement, CurvatureComponents,
    CurvatureError, RicciForms, RicciPair, Su3Scaled, SuRefinement,
};
use crate::decomposition::{
    class_specializations, dtheta_report, lee_form, split_torsion, DecompositionError, DthetaReport, GhClass,
    Specialization, TorsionDecomposition,
};
use crate::form::Form;
use crate::scalar::Scalar;
use crate::structure::{AlmostHermitian, Connection};
use crate::tensor::Tensor;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnalysisError {
    #[error("Levi-Civita connection is not {0}")]
    LeviCivita(&'static str),
    #[error("minimal connection does not preserve {0}")]
    Minimal(&'static str),
    #[error(transparent)]
    Decomposition(#[from] DecompositionError),
    #[error(transparent)]
    Curvature(#[from] CurvatureError),
}

#[derive(Clone, Debug)]
pub struct Analysis {
    pub structure: AlmostHermitian,
    pub levi_civita: Connection,
    pub xi: Tensor,
    pub minimal: Connection,
    pub chern: Connection,
    pub chern_unitary: bool,
    pub nijenhuis: Tensor,
    pub domega: Form,
    pub decomposition: TorsionDecomposition,
    pub class: GhClass,
    pub specializations: Vec<Specialization>,
    pub dtheta: DthetaReport,
    pub codiff_theta: Scalar,
    pub theta_norm2: Scalar,
    pub riemann: Tensor,
    pub riemann_minimal: Tensor,
    pub riemann_chern: Tensor,
    pub ricci: RicciPair,
    pub forms_lc: RicciForms,
    pub forms_minimal: RicciForms,
    pub forms_chern: Option<RicciForms>,
    pub components: CurvatureComponents,
    pub su: Option<SuRefinement>,
    pub su3: Option<Su3Scaled>,
}

impl Analysis {
    pub fn new(s: AlmostHermitian) -> Result<Self, AnalysisError> {
        let alg = s.algebra().clone();
        let lc = s.levi_civita();
        if !lc.is_metric() {
            return Err(AnalysisError::LeviCivita("metric"));
        }
        if !lc.torsion(&alg).is_zero() {
            return Err(AnalysisError::LeviCivita("torsion-free"));
        }
        let xi = s.intrinsic_torsion(&lc);
        let minimal = s.minimal_connection(&lc, &xi);
        if !minimal.is_metric() {
            return Err(AnalysisError::Minimal("the metric"));
        }
        if !minimal.covariant_derivative(&s.omega().to_tensor()).is_zero() {
            return Err(AnalysisError::Minimal("ω"));
        }
        let (chern, chern_unitary) = s.chern_connection(&lc, &xi);
        let nijenhuis = s.nijenhuis();
        let domega = s.d(s.omega());
        let theta = lee_form(&s, &xi)?;
        let decomposition = split_torsion(&s, &xi, &theta)?;
        let class = decomposition.class();
        let specializations = class_specializations(&decomposition, s.params());
        let dtheta = dtheta_report(&s, &decomposition, &minimal)?;
        let codiff_theta = s.codifferential(&theta).get(&[]);
        let theta_norm2 = theta.norm2();
        let r = riemann(&alg, &lc);
        check_symmetries(&r, true, true)?;
        let ru = riemann(&alg, &minimal);
        check_symmetries(&ru, true, false)?;
        let rh = riemann(&alg, &chern);
        check_symmetries(&rh, true, false)?;
        let j = s.j();
        let ricci = ricci_pair(&r, j);
        let forms_lc = RicciForms::of(&r, j);
        let forms_minimal = RicciForms::of(&ru, j);
        let forms_chern = RicciForms::chern(&rh, j, chern_unitary).ok();
        let components = curvature_components(&s, &ricci);
        let su = su_refinement(&s, &theta).ok().flatten();
        let su3 = su3_scaled(&s, &domega, &theta);
        Ok(Analysis {
            structure: s,
            levi_civita: lc,
            xi,
            minimal,
            chern,
            chern_unitary,
            nijenhuis,
            domega,
            decomposition,
            class,
            specializations,
            dtheta,
            codiff_theta,
            theta_norm2,
            riemann: r,
            riemann_minimal: ru,
            riemann_chern: rh,
            ricci,
            forms_lc,
            forms_minimal,
            forms_chern,
            components,
            su,
            su3,
        })
    }

    pub fn theta(&self) -> &Form {
        &self.decomposition.theta
    }

    pub fn n(&self) -> usize {
        self.structure.n()
    }
}
