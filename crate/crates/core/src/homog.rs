//! The dictionary between Jacobi pairs and homogeneous Poisson structures.
//!
//! A Jacobi pair `(Λ, E)` on a chart corresponds to the bivector
//! `π = (1/u)Λ + ∂u∧E` on the chart extended by a homogeneity variable `u`,
//! with homogeneity field `Z = u∂u`; conversely `E` and `Λ` are recovered
//! by contraction and multiplication by `u`. The correspondence preserves
//! the defect conditions on the nose, which is what `equivalence_check`
//! verifies tensor by tensor.

use std::fmt;

use crate::cartan::{lie_multivector, schouten, DiffForm, Multivector};
use crate::expr::{rat, Chart, ChartError, ScalarExpr};
use crate::jacobi::{jacobi_defect, JacobiPair};

#[derive(Debug, thiserror::Error)]
pub enum HomogError {
    #[error("variable collision: {0}")]
    Chart(#[from] ChartError),
    #[error("homogeneity field is not u∂/∂u for u = `{0}`")]
    WrongHomogeneity(String),
    #[error("bivector is not homogeneous: Lie_Z π + π ≠ 0")]
    NotHomogeneous,
    #[error("extracted {what} retains dependence on `{var}`")]
    ResidualDependence { what: &'static str, var: String },
}

/// A bivector with a designated homogeneity field. Structural container;
/// the conditions `[π,π] = 0` and `Lie_Z π = -π` are checked by
/// [`homogeneity_defect`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomogeneousPoisson {
    bivector: Multivector,
    homogeneity: Multivector,
}

impl HomogeneousPoisson {
    pub fn new(bivector: Multivector, homogeneity: Multivector) -> HomogeneousPoisson {
        assert_eq!(bivector.degree(), 2, "π must be a bivector");
        assert_eq!(homogeneity.degree(), 1, "Z must be a vector field");
        assert_eq!(bivector.chart(), homogeneity.chart(), "chart mismatch");
        HomogeneousPoisson {
            bivector,
            homogeneity,
        }
    }

    pub fn chart(&self) -> &Chart {
        self.bivector.chart()
    }

    pub fn bivector(&self) -> &Multivector {
        &self.bivector
    }

    pub fn homogeneity(&self) -> &Multivector {
        &self.homogeneity
    }
}

/// `π = (1/u)Λ + ∂u∧E` on the chart extended by `uvar` (appended after the
/// existing variables), with `Z = u∂u`.
pub fn homogenize(jp: &JacobiPair, uvar: &str) -> Result<HomogeneousPoisson, HomogError> {
    let chart = jp.chart();
    let ext = chart.extended(uvar)?;
    let map = chart.embedding_into(&ext).expect("extension keeps symbols");
    let lam = jp.bivector().embed(&ext, &map);
    let e = jp.reeb().embed(&ext, &map);
    let u_idx = ext.var_index(uvar).expect("just added");
    let u = ScalarExpr::symbol(&ext, u_idx);
    let inv_u = ScalarExpr::one(&ext).div(&u).expect("u is not zero");
    let du = Multivector::coordinate(&ext, u_idx);
    let pi = lam.scale(&inv_u).add(&du.wedge(&e));
    let z = du.scale(&u);
    Ok(HomogeneousPoisson::new(pi, z))
}

/// Inverse of [`homogenize`]. Requires `Z = u∂u` in the given coordinates
/// and a bivector of the homogeneous shape; the extracted `Λ` and `E` must
/// be independent of `u`.
pub fn dehomogenize(hp: &HomogeneousPoisson, uvar: &str) -> Result<JacobiPair, HomogError> {
    let chart = hp.chart().clone();
    let u_idx = chart
        .var_index(uvar)
        .ok_or_else(|| ChartError::NotFound(uvar.to_owned()))?;
    let u = ScalarExpr::symbol(&chart, u_idx);
    let expected_z = Multivector::coordinate(&chart, u_idx).scale(&u);
    if hp.homogeneity() != &expected_z {
        return Err(HomogError::WrongHomogeneity(uvar.to_owned()));
    }
    let pi = hp.bivector();
    if !lie_multivector(hp.homogeneity(), pi).add(pi).is_zero() {
        return Err(HomogError::NotHomogeneous);
    }
    // E = ι_{du} π; the contraction removes the ∂u direction by
    // construction.
    let du_form = DiffForm::coordinate(&chart, u_idx);
    let e_big = pi.contract_form(&du_form);
    // Λ = u·(π - ∂u∧E).
    let du = Multivector::coordinate(&chart, u_idx);
    let lam_big = pi.sub(&du.wedge(&e_big)).scale(&u);
    for (what, t) in [("E", &e_big), ("Λ", &lam_big)] {
        if t.depends_on(u_idx) || t.has_index(u_idx) {
            return Err(HomogError::ResidualDependence {
                what,
                var: uvar.to_owned(),
            });
        }
    }
    let (small, removed) = chart.without_var(uvar)?;
    // Safe after the dependence checks: the removed slot never occurs.
    let map: Vec<usize> = (0..chart.num_symbols())
        .map(|i| {
            if i == removed {
                0
            } else if i < removed {
                i
            } else {
                i - 1
            }
        })
        .collect();
    Ok(JacobiPair::new(
        lam_big.embed(&small, &map),
        e_big.embed(&small, &map),
    ))
}

/// Defect tensors `(½[π,π], Lie_Z π + π)`; both vanish iff `(π, Z)` is a
/// homogeneous Poisson structure.
pub fn homogeneity_defect(hp: &HomogeneousPoisson) -> (Multivector, Multivector) {
    let pi = hp.bivector();
    let d3 = schouten(pi, pi).scale_rat(&rat(1, 2));
    let d2 = lie_multivector(hp.homogeneity(), pi).add(pi);
    (d3, d2)
}

pub fn is_homogeneous_poisson(hp: &HomogeneousPoisson) -> bool {
    let (d3, d2) = homogeneity_defect(hp);
    d3.is_zero() && d2.is_zero()
}

/// Both defect systems side by side, for the report of the equivalence
/// `jacobi_defect(Λ,E) = 0  ⟺  homogeneity_defect(homogenize(Λ,E)) = 0`.
#[derive(Debug, Clone)]
pub struct EquivalenceReport {
    pub jacobi_d3: Multivector,
    pub jacobi_d2: Multivector,
    pub homog_d3: Multivector,
    pub homog_d2: Multivector,
}

impl EquivalenceReport {
    pub fn jacobi_passes(&self) -> bool {
        self.jacobi_d3.is_zero() && self.jacobi_d2.is_zero()
    }

    pub fn homog_passes(&self) -> bool {
        self.homog_d3.is_zero() && self.homog_d2.is_zero()
    }

    /// The two systems agree (both pass or both fail).
    pub fn equivalent(&self) -> bool {
        self.jacobi_passes() == self.homog_passes()
    }
}

impl fmt::Display for EquivalenceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[Λ,Λ]+E∧Λ: {}", self.jacobi_d3)?;
        writeln!(f, "Lie_E Λ:   {}", self.jacobi_d2)?;
        writeln!(f, "[π,π]:     {}", self.homog_d3)?;
        write!(f, "Lie_Z π+π: {}", self.homog_d2)
    }
}

pub fn equivalence_check(jp: &JacobiPair, uvar: &str) -> Result<EquivalenceReport, HomogError> {
    let (jd3, jd2) = jacobi_defect(jp);
    let hp = homogenize(jp, uvar)?;
    let (hd3, hd2) = homogeneity_defect(&hp);
    Ok(EquivalenceReport {
        jacobi_d3: jd3,
        jacobi_d2: jd2,
        homog_d3: hd3,
        homog_d2: hd2,
    })
}
