//! The Der-complex of the trivialized line bundle.
//!
//! In the trivialization `Ω_L^k ≅ Ω^k ⊕ 𝟙*∧Ω^{k-1}`, so an [`LForm`] is a
//! pair of ordinary forms. The differential obeys `d_L𝟙* = 0` and
//! `d_L = d_dR + 𝟙*∧`; contraction and Lie derivative follow from the
//! generator relations `α(∇_X) = α(X)`, `α(𝟙) = 0`, `𝟙*(∇_X) = 0`,
//! `𝟙*(𝟙) = 1` and the Cartan formula. Derivations of the trivial line
//! bundle are pairs `(X, f)` acting on sections by `λ ↦ X(λ) + fλ`.

use std::fmt;

use crate::expr::{Chart, ScalarExpr};

use super::multivector::{DiffForm, Multivector, TensorError};

/// A derivation of the trivialized line bundle: symbol vector field plus a
/// scalar multiple of the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    symbol: Multivector,
    scalar: ScalarExpr,
}

impl Derivation {
    pub fn new(symbol: Multivector, scalar: ScalarExpr) -> Derivation {
        assert_eq!(symbol.degree(), 1, "derivation symbol must have degree 1");
        assert_eq!(symbol.chart(), scalar.chart(), "chart mismatch");
        Derivation { symbol, scalar }
    }

    pub fn zero(chart: &Chart) -> Derivation {
        Derivation {
            symbol: Multivector::zero(chart, 1),
            scalar: ScalarExpr::zero(chart),
        }
    }

    /// The identity derivation `𝟙` (zero symbol, scalar part one).
    pub fn identity(chart: &Chart) -> Derivation {
        Derivation {
            symbol: Multivector::zero(chart, 1),
            scalar: ScalarExpr::one(chart),
        }
    }

    pub fn from_vector(symbol: Multivector) -> Derivation {
        let scalar = ScalarExpr::zero(symbol.chart());
        Derivation::new(symbol, scalar)
    }

    pub fn chart(&self) -> &Chart {
        self.symbol.chart()
    }

    pub fn symbol(&self) -> &Multivector {
        &self.symbol
    }

    pub fn scalar(&self) -> &ScalarExpr {
        &self.scalar
    }

    pub fn is_zero(&self) -> bool {
        self.symbol.is_zero() && self.scalar.is_zero()
    }

    pub fn add(&self, other: &Derivation) -> Derivation {
        Derivation {
            symbol: self.symbol.add(&other.symbol),
            scalar: self.scalar.add(&other.scalar),
        }
    }

    pub fn sub(&self, other: &Derivation) -> Derivation {
        Derivation {
            symbol: self.symbol.sub(&other.symbol),
            scalar: self.scalar.sub(&other.scalar),
        }
    }

    pub fn neg(&self) -> Derivation {
        Derivation {
            symbol: self.symbol.neg(),
            scalar: self.scalar.neg(),
        }
    }

    pub fn scale(&self, c: &ScalarExpr) -> Derivation {
        Derivation {
            symbol: self.symbol.scale(c),
            scalar: self.scalar.mul(c),
        }
    }

    /// Action on a section of the trivial line bundle: `X(λ) + fλ`.
    pub fn apply(&self, section: &ScalarExpr) -> ScalarExpr {
        self.symbol
            .apply_to_scalar(section)
            .add(&self.scalar.mul(section))
    }

    /// Commutator `[Δ, ∇] = ([X, Y], X(g) - Y(f))`, the unique bracket
    /// turning the action on sections into a Lie algebra representation.
    pub fn commutator(&self, other: &Derivation) -> Derivation {
        Derivation {
            symbol: lie_bracket_vf(&self.symbol, &other.symbol),
            scalar: self
                .symbol
                .apply_to_scalar(&other.scalar)
                .sub(&other.symbol.apply_to_scalar(&self.scalar)),
        }
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(symbol: {}; scalar: {})", self.symbol, self.scalar)
    }
}

/// Lie bracket of vector fields in coordinates:
/// `[X, Y]^k = Σ_i X^i ∂_i Y^k - Y^i ∂_i X^k`.
pub fn lie_bracket_vf(x: &Multivector, y: &Multivector) -> Multivector {
    assert_eq!(x.degree(), 1);
    assert_eq!(y.degree(), 1);
    assert_eq!(x.chart(), y.chart(), "chart mismatch");
    let chart = x.chart().clone();
    let mut comps = Vec::new();
    for k in 0..chart.dim() {
        let yk = y.coeff(&[k]);
        let xk = x.coeff(&[k]);
        let c = x.apply_to_scalar(&yk).sub(&y.apply_to_scalar(&xk));
        comps.push((vec![k], c));
    }
    Multivector::from_components(&chart, 1, comps).expect("valid components")
}

/// An element of the Der-complex: `plain + 𝟙* ∧ jet`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LForm {
    degree: usize,
    plain: DiffForm,
    jet: DiffForm,
}

impl LForm {
    /// Assemble from parts; `jet` is `None` exactly in degree 0.
    pub fn from_parts(plain: DiffForm, jet: Option<DiffForm>) -> Result<LForm, TensorError> {
        let degree = plain.degree();
        let jet = match jet {
            Some(j) => {
                if degree == 0 || j.degree() + 1 != degree {
                    return Err(TensorError::WrongDegree {
                        got: vec![j.degree()],
                        want: degree.saturating_sub(1),
                    });
                }
                if j.chart() != plain.chart() {
                    return Err(TensorError::UnknownVariable("chart mismatch".into()));
                }
                j
            }
            None => DiffForm::zero(plain.chart(), degree.saturating_sub(1)),
        };
        Ok(LForm { degree, plain, jet })
    }

    pub fn zero(chart: &Chart, degree: usize) -> LForm {
        LForm {
            degree,
            plain: DiffForm::zero(chart, degree),
            jet: DiffForm::zero(chart, degree.saturating_sub(1)),
        }
    }

    /// A section of the line bundle as a degree-0 element.
    pub fn from_scalar(f: &ScalarExpr) -> LForm {
        LForm {
            degree: 0,
            plain: DiffForm::from_components(f.chart(), 0, vec![(vec![], f.clone())])
                .expect("degree 0"),
            jet: DiffForm::zero(f.chart(), 0),
        }
    }

    /// The canonical section `𝟙*` as a degree-1 element.
    pub fn one_star(chart: &Chart) -> LForm {
        LForm {
            degree: 1,
            plain: DiffForm::zero(chart, 1),
            jet: DiffForm::from_components(chart, 0, vec![(vec![], ScalarExpr::one(chart))])
                .expect("degree 0"),
        }
    }

    /// A plain form viewed in the Der-complex.
    pub fn from_plain(plain: DiffForm) -> LForm {
        let degree = plain.degree();
        LForm {
            degree,
            jet: DiffForm::zero(plain.chart(), degree.saturating_sub(1)),
            plain,
        }
    }

    pub fn chart(&self) -> &Chart {
        self.plain.chart()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn plain(&self) -> &DiffForm {
        &self.plain
    }

    pub fn jet(&self) -> &DiffForm {
        &self.jet
    }

    pub fn is_zero(&self) -> bool {
        self.plain.is_zero() && self.jet.is_zero()
    }

    /// The degree-0 coefficient when this element is a scalar section.
    pub fn as_scalar(&self) -> ScalarExpr {
        assert_eq!(self.degree, 0);
        self.plain.coeff(&[])
    }

    pub fn add(&self, other: &LForm) -> LForm {
        assert_eq!(self.degree, other.degree, "degree mismatch");
        LForm {
            degree: self.degree,
            plain: self.plain.add(&other.plain),
            jet: self.jet.add(&other.jet),
        }
    }

    pub fn sub(&self, other: &LForm) -> LForm {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> LForm {
        LForm {
            degree: self.degree,
            plain: self.plain.neg(),
            jet: self.jet.neg(),
        }
    }

    pub fn scale(&self, c: &ScalarExpr) -> LForm {
        LForm {
            degree: self.degree,
            plain: self.plain.scale(c),
            jet: self.jet.scale(c),
        }
    }

    /// Exterior product, using `𝟙* ∧ 𝟙* = 0`:
    /// `(η₁ + 𝟙*θ₁)(η₂ + 𝟙*θ₂) = η₁∧η₂ + 𝟙*∧(θ₁∧η₂ + (-1)^{k₁} η₁∧θ₂)`.
    pub fn wedge(&self, other: &LForm) -> LForm {
        assert_eq!(self.chart(), other.chart(), "chart mismatch");
        let degree = self.degree + other.degree;
        let plain = self.plain.wedge(&other.plain);
        let mut jet = DiffForm::zero(self.chart(), degree.saturating_sub(1));
        if self.degree > 0 {
            jet = jet.add(&self.jet.wedge(&other.plain));
        }
        if other.degree > 0 {
            let cross = self.plain.wedge(&other.jet);
            jet = if self.degree % 2 == 0 {
                jet.add(&cross)
            } else {
                jet.sub(&cross)
            };
        }
        LForm { degree, plain, jet }
    }

    /// The differential of the Der-complex:
    /// `d_L(η + 𝟙*∧θ) = dη + 𝟙*∧(η - dθ)`.
    pub fn d_l(&self) -> LForm {
        let jet = if self.degree == 0 {
            self.plain.clone()
        } else {
            self.plain.sub(&self.jet.d())
        };
        LForm {
            degree: self.degree + 1,
            plain: self.plain.d(),
            jet,
        }
    }

    /// Contraction by a derivation `Δ = (X, f)`:
    /// `ι_Δ(η + 𝟙*∧θ) = ι_X η + fθ - 𝟙*∧ι_X θ`.
    ///
    /// In degree 0 the contraction is zero.
    pub fn contract(&self, delta: &Derivation) -> LForm {
        assert_eq!(self.chart(), delta.chart(), "chart mismatch");
        if self.degree == 0 {
            return LForm::zero(self.chart(), 0);
        }
        let plain = self
            .plain
            .contract_vector(delta.symbol())
            .add(&self.jet.scale(delta.scalar()));
        let jet = if self.degree >= 2 {
            self.jet.contract_vector(delta.symbol()).neg()
        } else {
            DiffForm::zero(self.chart(), 0)
        };
        LForm {
            degree: self.degree - 1,
            plain,
            jet,
        }
    }

    /// Lie derivative along a derivation, by the Cartan formula
    /// `L_Δ = ι_Δ ∘ d_L + d_L ∘ ι_Δ`.
    pub fn lie(&self, delta: &Derivation) -> LForm {
        let a = self.d_l().contract(delta);
        if self.degree == 0 {
            return a;
        }
        a.add(&self.contract(delta).d_l())
    }
}

impl fmt::Display for LForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(plain: {}; 1*∧: {})", self.plain, self.jet)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn chart() -> Chart {
        Chart::new("R2", &["q", "p"]).unwrap()
    }

    fn sc(src: &str, c: &Chart) -> ScalarExpr {
        parse(src, c).unwrap()
    }

    #[test]
    fn differential_of_a_section_is_its_first_jet() {
        let c = chart();
        let lam = sc("q*p", &c);
        let d = LForm::from_scalar(&lam).d_l();
        // d_L λ = dλ + 𝟙*∧λ.
        assert_eq!(d.plain(), &DiffForm::d_scalar(&lam));
        assert_eq!(d.jet().coeff(&[]), lam);
    }

    #[test]
    fn one_star_is_closed() {
        let c = chart();
        assert!(LForm::one_star(&c).d_l().is_zero());
    }

    #[test]
    fn differential_squares_to_zero() {
        let c = chart();
        let lam = sc("p*q", &c);
        assert!(LForm::from_scalar(&lam).d_l().d_l().is_zero());
        // Also on a mixed degree-1 element.
        let omega = LForm::from_parts(
            DiffForm::from_components(&c, 1, vec![(vec![0], sc("p^2", &c))]).unwrap(),
            Some(DiffForm::from_components(&c, 0, vec![(vec![], sc("q", &c))]).unwrap()),
        )
        .unwrap();
        assert!(omega.d_l().d_l().is_zero());
    }

    #[test]
    fn contraction_conventions() {
        let c = chart();
        // ι_{(X,0)} α = α(X) for a plain 1-form.
        let alpha = LForm::from_plain(DiffForm::coordinate(&c, 1));
        let x = Derivation::from_vector(Multivector::coordinate(&c, 1));
        assert_eq!(alpha.contract(&x).as_scalar(), ScalarExpr::one(&c));
        // ι_𝟙 𝟙* = 1.
        let one_star = LForm::one_star(&c);
        let id = Derivation::identity(&c);
        assert_eq!(one_star.contract(&id).as_scalar(), ScalarExpr::one(&c));
        // α(𝟙) = 0 and 𝟙*(∇_X) = 0.
        assert!(alpha.contract(&id).is_zero());
        assert!(one_star.contract(&x).is_zero());
    }

    #[test]
    fn double_contraction_vanishes() {
        let c = chart();
        let omega = LForm::from_parts(
            DiffForm::from_components(&c, 2, vec![(vec![0, 1], sc("q+p", &c))]).unwrap(),
            Some(DiffForm::from_components(&c, 1, vec![(vec![0], sc("p^2", &c))]).unwrap()),
        )
        .unwrap();
        let delta = Derivation::new(
            Multivector::from_components(
                &c,
                1,
                vec![(vec![0], sc("p", &c)), (vec![1], sc("q", &c))],
            )
            .unwrap(),
            sc("q*p", &c),
        );
        assert!(omega.contract(&delta).contract(&delta).is_zero());
    }

    #[test]
    fn identity_derivation_acts_as_one_on_sections() {
        let c = chart();
        let lam = sc("q^2", &c);
        let id = Derivation::identity(&c);
        assert_eq!(LForm::from_scalar(&lam).lie(&id).as_scalar(), lam);
    }

    #[test]
    fn lie_of_constant_form_along_coordinate_field() {
        let c = chart();
        let dp = LForm::from_plain(DiffForm::coordinate(&c, 1));
        let dq_field = Derivation::from_vector(Multivector::coordinate(&c, 0));
        assert!(dp.lie(&dq_field).is_zero());
    }

    #[test]
    fn one_star_wedge_squares_to_zero() {
        let c = Chart::new("R3", &["u", "q", "p"]).unwrap();
        // (𝟙*∧dq) ∧ (𝟙*∧dp) = 0.
        let a = LForm::from_parts(
            DiffForm::zero(&c, 2),
            Some(DiffForm::coordinate(&c, 1)),
        )
        .unwrap();
        let b = LForm::from_parts(
            DiffForm::zero(&c, 2),
            Some(DiffForm::coordinate(&c, 2)),
        )
        .unwrap();
        assert!(a.wedge(&b).is_zero());
    }

    #[test]
    fn lie_commutes_with_the_differential() {
        let c = chart();
        let omega = LForm::from_parts(
            DiffForm::from_components(&c, 1, vec![(vec![0], sc("q*p", &c))]).unwrap(),
            Some(DiffForm::from_components(&c, 0, vec![(vec![], sc("p^2", &c))]).unwrap()),
        )
        .unwrap();
        let delta = Derivation::new(
            Multivector::from_components(&c, 1, vec![(vec![1], sc("q", &c))]).unwrap(),
            sc("p", &c),
        );
        assert_eq!(omega.d_l().lie(&delta), omega.lie(&delta).d_l());
    }

    #[test]
    fn commutator_matches_lie_bracket() {
        let c = chart();
        // [q∂q, ∂q] = -∂q.
        let a = Multivector::from_components(&c, 1, vec![(vec![0], sc("q", &c))]).unwrap();
        let b = Multivector::coordinate(&c, 0);
        assert_eq!(lie_bracket_vf(&a, &b), b.neg());
        // Scalar part: X(g) - Y(f).
        let da = Derivation::new(a, sc("p", &c));
        let db = Derivation::new(b, sc("q", &c));
        let comm = da.commutator(&db);
        // X(g) - Y(f) = q∂q(q) - ∂q(p) = q.
        assert_eq!(comm.scalar(), &sc("q", &c));
    }
}
