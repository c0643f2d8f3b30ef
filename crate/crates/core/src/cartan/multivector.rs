//! Multivector fields and differential forms as sparse antisymmetric
//! coefficient tables.

use std::collections::BTreeMap;
use std::fmt;

use num::rational::BigRational;

use crate::expr::{Chart, ExprError, ScalarExpr};

use super::components::{IndexSet, SkewTable};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum TensorError {
    #[error("index set {0:?} is not strictly increasing")]
    NotIncreasing(Vec<usize>),
    #[error("index {0} out of range for chart of dimension {1}")]
    IndexOutOfRange(usize, usize),
    #[error("index set {got:?} has size {}, expected degree {want}", .got.len())]
    WrongDegree { got: Vec<usize>, want: usize },
    #[error("degree {0} exceeds chart dimension {1}")]
    DegreeTooLarge(usize, usize),
    #[error("unknown variable `{0}` in index set")]
    UnknownVariable(String),
}

fn validate_components(
    chart: &Chart,
    degree: usize,
    comps: &[(Vec<usize>, ScalarExpr)],
) -> Result<(), TensorError> {
    // A degree above the chart dimension admits no index sets: only the
    // zero tensor of that degree exists.
    if degree > chart.dim() && !comps.is_empty() {
        return Err(TensorError::DegreeTooLarge(degree, chart.dim()));
    }
    for (idxs, _) in comps {
        if idxs.len() != degree {
            return Err(TensorError::WrongDegree {
                got: idxs.clone(),
                want: degree,
            });
        }
        if !idxs.windows(2).all(|w| w[0] < w[1]) {
            return Err(TensorError::NotIncreasing(idxs.clone()));
        }
        if let Some(&bad) = idxs.iter().find(|&&i| i >= chart.dim()) {
            return Err(TensorError::IndexOutOfRange(bad, chart.dim()));
        }
    }
    Ok(())
}

macro_rules! skew_wrapper {
    ($name:ident, $doc:literal) => {
        #[doc = $doc]
        #[derive(Debug, Clone, PartialEq, Eq)]
        pub struct $name(pub(crate) SkewTable);

        impl $name {
            pub fn zero(chart: &Chart, degree: usize) -> $name {
                $name(SkewTable::zero(chart, degree))
            }

            /// Build from `(strictly increasing index set, coefficient)`
            /// pairs, validating shape against the chart.
            pub fn from_components(
                chart: &Chart,
                degree: usize,
                comps: Vec<(Vec<usize>, ScalarExpr)>,
            ) -> Result<$name, TensorError> {
                validate_components(chart, degree, &comps)?;
                let mut t = SkewTable::zero(chart, degree);
                for (idxs, c) in comps {
                    t.insert(idxs, c);
                }
                Ok($name(t))
            }

            pub fn chart(&self) -> &Chart {
                &self.0.chart
            }

            pub fn degree(&self) -> usize {
                self.0.degree
            }

            pub fn is_zero(&self) -> bool {
                self.0.is_zero()
            }

            pub fn add(&self, other: &$name) -> $name {
                $name(self.0.add(&other.0))
            }

            pub fn sub(&self, other: &$name) -> $name {
                $name(self.0.sub(&other.0))
            }

            pub fn neg(&self) -> $name {
                $name(self.0.neg())
            }

            pub fn scale(&self, c: &ScalarExpr) -> $name {
                $name(self.0.scale(c))
            }

            pub fn scale_rat(&self, c: &BigRational) -> $name {
                $name(self.0.scale_rat(c))
            }

            /// Exterior product within the same kind. A product whose
            /// degree exceeds the chart dimension is the zero tensor.
            pub fn wedge(&self, other: &$name) -> $name {
                $name(self.0.wedge(&other.0))
            }

            pub fn components(&self) -> impl Iterator<Item = (&IndexSet, &ScalarExpr)> {
                self.0.terms.iter()
            }

            pub fn coeff(&self, idxs: &[usize]) -> ScalarExpr {
                self.0
                    .terms
                    .get(idxs)
                    .cloned()
                    .unwrap_or_else(|| ScalarExpr::zero(self.chart()))
            }

            /// Exact pointwise evaluation of all coefficients.
            pub fn eval(
                &self,
                values: &[BigRational],
            ) -> Result<BTreeMap<IndexSet, BigRational>, ExprError> {
                self.0.eval(values)
            }

            /// Restrict coefficients to the zero locus of the given
            /// variables.
            pub fn restrict_zero(&self, idxs: &[usize]) -> Result<$name, ExprError> {
                Ok($name(self.0.restrict_zero(idxs)?))
            }

            /// Transport onto a larger chart along a symbol map.
            pub fn embed(&self, new_chart: &Chart, map: &[usize]) -> $name {
                $name(self.0.embed(new_chart, map))
            }

            pub fn depends_on(&self, sym: usize) -> bool {
                self.0.depends_on(sym)
            }

            /// Whether any stored index set contains the coordinate
            /// direction `idx`.
            pub fn has_index(&self, idx: usize) -> bool {
                self.0.has_index(idx)
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                if self.is_zero() {
                    return write!(f, "0");
                }
                let mut first = true;
                for (idxs, c) in &self.0.terms {
                    if !first {
                        write!(f, "  +  ")?;
                    }
                    first = false;
                    let names: Vec<&str> =
                        idxs.iter().map(|&i| self.chart().symbol_name(i)).collect();
                    write!(f, "[{}] {}", names.join(","), c)?;
                }
                Ok(())
            }
        }
    };
}

skew_wrapper!(
    Multivector,
    "An antisymmetric contravariant tensor field of fixed degree."
);
skew_wrapper!(
    DiffForm,
    "An antisymmetric covariant tensor field (differential form) of fixed degree."
);

impl Multivector {
    /// The coordinate vector field `∂/∂x_idx`.
    pub fn coordinate(chart: &Chart, idx: usize) -> Multivector {
        Multivector::from_components(chart, 1, vec![(vec![idx], ScalarExpr::one(chart))])
            .expect("valid coordinate field")
    }

    /// Directional derivative of a scalar along a degree-1 field.
    pub fn apply_to_scalar(&self, f: &ScalarExpr) -> ScalarExpr {
        assert_eq!(self.degree(), 1, "directional derivative needs degree 1");
        let mut acc = ScalarExpr::zero(self.chart());
        for (idxs, c) in self.components() {
            acc = acc.add(&c.mul(&f.partial(idxs[0])));
        }
        acc
    }
}

impl DiffForm {
    /// The coordinate 1-form `dx_idx`.
    pub fn coordinate(chart: &Chart, idx: usize) -> DiffForm {
        DiffForm::from_components(chart, 1, vec![(vec![idx], ScalarExpr::one(chart))])
            .expect("valid coordinate form")
    }

    /// Exterior derivative of a scalar.
    pub fn d_scalar(f: &ScalarExpr) -> DiffForm {
        let chart = f.chart().clone();
        let mut t = SkewTable::zero(&chart, 1);
        for i in 0..chart.dim() {
            t.insert(vec![i], f.partial(i));
        }
        DiffForm(t)
    }

    /// de Rham differential.
    pub fn d(&self) -> DiffForm {
        let chart = self.chart().clone();
        let mut out = SkewTable::zero(&chart, self.degree() + 1);
        for (idxs, c) in self.components() {
            for j in 0..chart.dim() {
                let dc = c.partial(j);
                if dc.is_zero() {
                    continue;
                }
                let mut merged = Vec::with_capacity(idxs.len() + 1);
                merged.push(j);
                merged.extend_from_slice(idxs);
                out.insert_unsorted(&merged, dc);
            }
        }
        DiffForm(out)
    }

    /// Pairing of a 1-form with a degree-1 multivector.
    pub fn apply_to_vector(&self, x: &Multivector) -> ScalarExpr {
        assert_eq!(self.degree(), 1, "pairing needs a 1-form");
        assert_eq!(x.degree(), 1, "pairing needs a vector field");
        let mut acc = ScalarExpr::zero(self.chart());
        for (idxs, c) in self.components() {
            acc = acc.add(&c.mul(&x.coeff(idxs)));
        }
        acc
    }

    /// Interior product by a degree-1 multivector field.
    pub fn contract_vector(&self, x: &Multivector) -> DiffForm {
        assert_eq!(x.degree(), 1);
        let mut out = SkewTable::zero(self.chart(), self.degree().saturating_sub(1));
        for (xi, xc) in x.components() {
            let part = self.0.contract_first(xi[0]).scale(xc);
            out = out.add(&part);
        }
        DiffForm(out)
    }
}

impl Multivector {
    /// Interior product by a 1-form in the first slot (`ι_α P`).
    pub fn contract_form(&self, alpha: &DiffForm) -> Multivector {
        assert_eq!(alpha.degree(), 1);
        let mut out = SkewTable::zero(self.chart(), self.degree().saturating_sub(1));
        for (ai, ac) in alpha.components() {
            let part = self.0.contract_first(ai[0]).scale(ac);
            out = out.add(&part);
        }
        Multivector(out)
    }
}
