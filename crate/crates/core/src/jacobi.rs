//! Jacobi pairs on the trivialized line bundle.
//!
//! A pair `(Λ, E)` packages the tensor `J = Λ + 𝟙∧E` acting on first jets.
//! The structure equations are checked by computing defect tensors rather
//! than booleans so a failing input can be reported with the offending
//! tensor printed.
//!
//! Bracket normalization: the degree-(2,2) instance inside the Jacobi
//! condition is `½·schouten(Λ,Λ)`, so the condition reads
//! `½[Λ,Λ] + E∧Λ = 0` together with `Lie_E Λ = 0`. With the crate's
//! Schouten sign table this is exactly the combination that vanishes iff
//! the bracket below satisfies the Jacobi identity (see
//! `docs/conventions.md`).

use crate::cartan::{lie_multivector, schouten, Derivation, DiffForm, LForm, Multivector};
use crate::expr::{rat, Chart, ScalarExpr};

/// A bivector field together with a candidate Reeb field. Construction is
/// structural; the Jacobi conditions are checked by [`jacobi_defect`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JacobiPair {
    bivector: Multivector,
    reeb: Multivector,
}

impl JacobiPair {
    pub fn new(bivector: Multivector, reeb: Multivector) -> JacobiPair {
        assert_eq!(bivector.degree(), 2, "Λ must be a bivector");
        assert_eq!(reeb.degree(), 1, "E must be a vector field");
        assert_eq!(bivector.chart(), reeb.chart(), "chart mismatch");
        JacobiPair { bivector, reeb }
    }

    pub fn zero(chart: &Chart) -> JacobiPair {
        JacobiPair {
            bivector: Multivector::zero(chart, 2),
            reeb: Multivector::zero(chart, 1),
        }
    }

    pub fn chart(&self) -> &Chart {
        self.bivector.chart()
    }

    pub fn bivector(&self) -> &Multivector {
        &self.bivector
    }

    pub fn reeb(&self) -> &Multivector {
        &self.reeb
    }

    /// `Λ♯(α) = ι_α Λ`, contraction in the first slot.
    pub fn sharp_form(&self, alpha: &DiffForm) -> Multivector {
        self.bivector.contract_form(alpha)
    }

    /// `Λ(α, β) = β(Λ♯α)`.
    pub fn bivector_pairing(&self, alpha: &DiffForm, beta: &DiffForm) -> ScalarExpr {
        beta.apply_to_vector(&self.sharp_form(alpha))
    }
}

/// A section of the first jet bundle in the trivialization:
/// `ψ = α + r·𝟙*`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JetSection {
    form: DiffForm,
    scalar: ScalarExpr,
}

impl JetSection {
    pub fn new(form: DiffForm, scalar: ScalarExpr) -> JetSection {
        assert_eq!(form.degree(), 1, "jet form part must have degree 1");
        assert_eq!(form.chart(), scalar.chart(), "chart mismatch");
        JetSection { form, scalar }
    }

    pub fn zero(chart: &Chart) -> JetSection {
        JetSection {
            form: DiffForm::zero(chart, 1),
            scalar: ScalarExpr::zero(chart),
        }
    }

    /// The canonical section `𝟙*`.
    pub fn one_star(chart: &Chart) -> JetSection {
        JetSection {
            form: DiffForm::zero(chart, 1),
            scalar: ScalarExpr::one(chart),
        }
    }

    /// First jet of a section: `j¹λ = dλ + λ𝟙*`, matching `d_L` on
    /// degree 0.
    pub fn jet_of(lambda: &ScalarExpr) -> JetSection {
        JetSection {
            form: DiffForm::d_scalar(lambda),
            scalar: lambda.clone(),
        }
    }

    pub fn chart(&self) -> &Chart {
        self.form.chart()
    }

    pub fn form(&self) -> &DiffForm {
        &self.form
    }

    pub fn scalar(&self) -> &ScalarExpr {
        &self.scalar
    }

    pub fn is_zero(&self) -> bool {
        self.form.is_zero() && self.scalar.is_zero()
    }

    pub fn add(&self, other: &JetSection) -> JetSection {
        JetSection {
            form: self.form.add(&other.form),
            scalar: self.scalar.add(&other.scalar),
        }
    }

    pub fn sub(&self, other: &JetSection) -> JetSection {
        JetSection {
            form: self.form.sub(&other.form),
            scalar: self.scalar.sub(&other.scalar),
        }
    }

    pub fn neg(&self) -> JetSection {
        JetSection {
            form: self.form.neg(),
            scalar: self.scalar.neg(),
        }
    }

    pub fn scale(&self, c: &ScalarExpr) -> JetSection {
        JetSection {
            form: self.form.scale(c),
            scalar: self.scalar.mul(c),
        }
    }

    /// View as a degree-1 element of the Der-complex.
    pub fn as_lform(&self) -> LForm {
        let jet = DiffForm::from_components(self.chart(), 0, vec![(vec![], self.scalar.clone())])
            .expect("degree 0");
        LForm::from_parts(self.form.clone(), Some(jet)).expect("degree bookkeeping")
    }

    /// Inverse of [`JetSection::as_lform`].
    pub fn from_lform(omega: &LForm) -> JetSection {
        assert_eq!(omega.degree(), 1, "jet sections are degree-1 elements");
        JetSection {
            form: omega.plain().clone(),
            scalar: omega.jet().coeff(&[]),
        }
    }

    /// Evaluation of `ψ` on a derivation: `α(X) + r·f`.
    pub fn apply(&self, delta: &Derivation) -> ScalarExpr {
        self.form
            .apply_to_vector(delta.symbol())
            .add(&self.scalar.mul(delta.scalar()))
    }
}

/// Defect tensors of the structure equations: `(½[Λ,Λ] + E∧Λ, Lie_E Λ)`.
/// The pair is Jacobi iff both vanish identically.
pub fn jacobi_defect(jp: &JacobiPair) -> (Multivector, Multivector) {
    let lam = jp.bivector();
    let half_bracket = schouten(lam, lam).scale_rat(&rat(1, 2));
    let d3 = half_bracket.add(&jp.reeb().wedge(lam));
    let d2 = lie_multivector(jp.reeb(), lam);
    (d3, d2)
}

pub fn is_jacobi(jp: &JacobiPair) -> bool {
    let (d3, d2) = jacobi_defect(jp);
    d3.is_zero() && d2.is_zero()
}

/// The sharp map `J♯(α + r𝟙*) = Λ♯(α) + rE - α(E)𝟙` as a derivation.
pub fn sharp(jp: &JacobiPair, psi: &JetSection) -> Derivation {
    assert_eq!(jp.chart(), psi.chart(), "chart mismatch");
    let symbol = jp
        .sharp_form(psi.form())
        .add(&jp.reeb().scale(psi.scalar()));
    let scalar = psi.form().apply_to_vector(jp.reeb()).neg();
    Derivation::new(symbol, scalar)
}

/// The Jacobi bracket on sections of the trivial line bundle:
/// `{λ, μ} = Λ(dλ, dμ) + λE(μ) - μE(λ)`.
pub fn jacobi_bracket(jp: &JacobiPair, lambda: &ScalarExpr, mu: &ScalarExpr) -> ScalarExpr {
    let dl = DiffForm::d_scalar(lambda);
    let dm = DiffForm::d_scalar(mu);
    let biv = jp.bivector_pairing(&dl, &dm);
    let e_mu = jp.reeb().apply_to_scalar(mu);
    let e_lam = jp.reeb().apply_to_scalar(lambda);
    biv.add(&lambda.mul(&e_mu)).sub(&mu.mul(&e_lam))
}

/// The hamiltonian derivation `{λ, -} = sharp(J, j¹λ)`.
pub fn hamiltonian_derivation(jp: &JacobiPair, lambda: &ScalarExpr) -> Derivation {
    sharp(jp, &JetSection::jet_of(lambda))
}

/// All coordinate monomials of total degree at most `max_deg`, the spanning
/// family used by the symbolic Jacobi-identity checks.
pub fn monomial_family(chart: &Chart, max_deg: u32) -> Vec<ScalarExpr> {
    let mut out = vec![ScalarExpr::one(chart)];
    let mut frontier = vec![ScalarExpr::one(chart)];
    for _ in 0..max_deg {
        let mut next = Vec::new();
        for f in &frontier {
            for i in 0..chart.dim() {
                let m = f.mul(&ScalarExpr::symbol(chart, i));
                if !out.contains(&m) {
                    out.push(m.clone());
                    next.push(m);
                }
            }
        }
        frontier = next;
    }
    out
}

/// Symbolic Jacobi identity of the bracket on the monomial spanning family:
/// returns the first failing triple, if any.
pub fn bracket_jacobiator_failure(
    jp: &JacobiPair,
    max_deg: u32,
) -> Option<(ScalarExpr, ScalarExpr, ScalarExpr)> {
    let fam = monomial_family(jp.chart(), max_deg);
    for (i, a) in fam.iter().enumerate() {
        for (j, b) in fam.iter().enumerate().skip(i + 1) {
            for c in fam.iter().skip(j + 1) {
                let s = jacobi_bracket(jp, a, &jacobi_bracket(jp, b, c))
                    .add(&jacobi_bracket(jp, b, &jacobi_bracket(jp, c, a)))
                    .add(&jacobi_bracket(jp, c, &jacobi_bracket(jp, a, b)));
                if !s.is_zero() {
                    return Some((a.clone(), b.clone(), c.clone()));
                }
            }
        }
    }
    None
}
