//! The omni-Lie algebroid `𝔻L = DL ⊕ J¹L` in trivialization.
//!
//! Symbolic sections carry the pairing, the (optionally twisted) Dorfman
//! bracket and B-field transforms; pointwise subspaces of the
//! `2(n+1)`-dimensional fiber live in [`fiber`] and are handled with exact
//! rational linear algebra. Brackets are differential conditions, so they
//! act on sections; transversality is pointwise, so it acts on fibers.

mod fiber;

use crate::cartan::{Derivation, LForm};
use crate::expr::{Chart, ScalarExpr};
use crate::jacobi::{jacobi_defect, sharp, JacobiPair, JetSection};

pub use fiber::{
    backwards_transform, classify_transversal, graph_subspace, homogeneous_poisson_type_check,
    sharp_matrix, sharp_matrix_at, subspace_intersection, FiberSpace, HomogeneousTypeReport,
    OmniError, OmniFiberSubspace, TransversalClass, TransversalReport, TransversalSpec,
};

/// A section `(Δ, ψ)` of `DL ⊕ J¹L`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmniSection {
    pub der: Derivation,
    pub jet: JetSection,
}

impl OmniSection {
    pub fn new(der: Derivation, jet: JetSection) -> OmniSection {
        assert_eq!(der.chart(), jet.chart(), "chart mismatch");
        OmniSection { der, jet }
    }

    pub fn zero(chart: &Chart) -> OmniSection {
        OmniSection {
            der: Derivation::zero(chart),
            jet: JetSection::zero(chart),
        }
    }

    pub fn chart(&self) -> &Chart {
        self.der.chart()
    }

    pub fn is_zero(&self) -> bool {
        self.der.is_zero() && self.jet.is_zero()
    }

    pub fn add(&self, other: &OmniSection) -> OmniSection {
        OmniSection {
            der: self.der.add(&other.der),
            jet: self.jet.add(&other.jet),
        }
    }

    pub fn sub(&self, other: &OmniSection) -> OmniSection {
        OmniSection {
            der: self.der.sub(&other.der),
            jet: self.jet.sub(&other.jet),
        }
    }

    pub fn neg(&self) -> OmniSection {
        OmniSection {
            der: self.der.neg(),
            jet: self.jet.neg(),
        }
    }

    /// The graph section `(J♯ψ, ψ)` of a Jacobi pair.
    pub fn graph(jp: &JacobiPair, psi: &JetSection) -> OmniSection {
        OmniSection {
            der: sharp(jp, psi),
            jet: psi.clone(),
        }
    }
}

/// A closed twisting 3-form; closedness is checked at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistForm {
    form: LForm,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum TwistError {
    #[error("twist must be an element of degree 3, got degree {0}")]
    WrongDegree(usize),
    #[error("twist form is not d_L-closed")]
    NotClosed,
}

impl TwistForm {
    pub fn new(form: LForm) -> Result<TwistForm, TwistError> {
        if form.degree() != 3 {
            return Err(TwistError::WrongDegree(form.degree()));
        }
        if !form.d_l().is_zero() {
            return Err(TwistError::NotClosed);
        }
        Ok(TwistForm { form })
    }

    pub fn form(&self) -> &LForm {
        &self.form
    }
}

/// The symmetric pairing `⟨⟨(Δ₁,ψ₁), (Δ₂,ψ₂)⟩⟩ = ψ₁(Δ₂) + ψ₂(Δ₁)`.
pub fn pairing(a: &OmniSection, b: &OmniSection) -> ScalarExpr {
    assert_eq!(a.chart(), b.chart(), "chart mismatch");
    a.jet.apply(&b.der).add(&b.jet.apply(&a.der))
}

/// The Dorfman-type bracket
/// `[[(Δ₁,ψ₁),(Δ₂,ψ₂)]]_H = ([Δ₁,Δ₂], L_{Δ₁}ψ₂ - ι_{Δ₂}d_Lψ₁ + ι_{Δ₁}ι_{Δ₂}H)`.
pub fn dorfman(a: &OmniSection, b: &OmniSection, twist: Option<&TwistForm>) -> OmniSection {
    assert_eq!(a.chart(), b.chart(), "chart mismatch");
    let der = a.der.commutator(&b.der);
    let mut jet_lform = b
        .jet
        .as_lform()
        .lie(&a.der)
        .sub(&a.jet.as_lform().d_l().contract(&b.der));
    if let Some(h) = twist {
        jet_lform = jet_lform.add(&h.form().contract(&b.der).contract(&a.der));
    }
    OmniSection {
        der,
        jet: JetSection::from_lform(&jet_lform),
    }
}

/// The B-field shear `exp(B): (Δ, ψ) ↦ (Δ, ψ + ι_Δ B)` by a 2-form.
pub fn bfield(b: &LForm, a: &OmniSection) -> OmniSection {
    assert_eq!(b.chart(), a.chart(), "chart mismatch");
    assert_eq!(b.degree(), 2, "B-field must be a 2-form");
    OmniSection {
        der: a.der.clone(),
        jet: a.jet.add(&JetSection::from_lform(&b.contract(&a.der))),
    }
}

/// Outcome of the symbolic involutivity check of a graph subbundle.
#[derive(Debug, Clone)]
pub struct InvolutivityReport {
    /// Every bracket of spanning graph sections lay in the graph.
    pub involutive: bool,
    /// The structure-equation defect vanished.
    pub defect_zero: bool,
    /// Number of section pairs whose bracket left the graph.
    pub failures: usize,
}

impl InvolutivityReport {
    /// The two criteria agree, as the theory demands.
    pub fn consistent(&self) -> bool {
        self.involutive == self.defect_zero
    }
}

/// Checks involutivity of the graph `{(J♯ψ, ψ)}` under the untwisted
/// bracket on a spanning family of sections with coordinate-monomial
/// coefficients, and cross-checks the outcome against [`jacobi_defect`].
pub fn involutivity_check(jp: &JacobiPair) -> InvolutivityReport {
    let chart = jp.chart().clone();
    let n = chart.dim();
    // Spanning family: {1, x_1, …, x_n} × {dx_1, …, dx_n, 𝟙*}.
    let mut coeffs = vec![ScalarExpr::one(&chart)];
    for i in 0..n {
        coeffs.push(ScalarExpr::symbol(&chart, i));
    }
    let mut jets = Vec::new();
    for i in 0..n {
        jets.push(JetSection::new(
            crate::cartan::DiffForm::coordinate(&chart, i),
            ScalarExpr::zero(&chart),
        ));
    }
    jets.push(JetSection::one_star(&chart));
    let sections: Vec<OmniSection> = coeffs
        .iter()
        .flat_map(|c| jets.iter().map(|j| OmniSection::graph(jp, &j.scale(c))))
        .collect();
    let mut failures = 0;
    for (i, a) in sections.iter().enumerate() {
        for b in sections.iter().skip(i) {
            let r = dorfman(a, b, None);
            // Membership in the graph: J♯(jet part) must equal the
            // derivation part.
            let defect = sharp(jp, &r.jet).sub(&r.der);
            if !defect.is_zero() {
                failures += 1;
            }
        }
    }
    let (d3, d2) = jacobi_defect(jp);
    InvolutivityReport {
        involutive: failures == 0,
        defect_zero: d3.is_zero() && d2.is_zero(),
        failures,
    }
}
