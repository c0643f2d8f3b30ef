//! Constructive canonical models for the splitting theorems, the
//! transversal 2-form Θ, and the Euler-like linearization test.
//!
//! The models are generators: they build the split tensors on a product
//! chart from transversal data, and the accompanying checks verify the
//! properties the splitting theorems promise (defect equivalence, Θ in
//! standard form, cocontact rank). Fiber variables are named
//! `q1..qk, p1..pk` (plus `u` for the contact model); base variables come
//! from the caller's chart and must not collide.

use num::rational::BigRational;
use num::Zero;

use crate::cartan::{DiffForm, LForm, Multivector};
use crate::expr::{Chart, ChartError, ExprError, ScalarExpr};
use crate::homog::{homogeneity_defect, HomogeneousPoisson};
use crate::jacobi::{is_jacobi, jacobi_defect, JacobiPair};
use crate::linalg::Matrix;
use crate::omni::{
    classify_transversal, sharp_matrix_at, OmniError, TransversalClass, TransversalSpec,
};

#[derive(Debug, thiserror::Error)]
pub enum SplitError {
    #[error("fiber size k must be at least 1")]
    ZeroFiber,
    #[error("fiber/base variable collision: {0}")]
    Chart(#[from] ChartError),
    #[error("no candidate reading of the canonical contact bivector passes; the bracket convention and the reading must be re-derived jointly")]
    NoCanonicalPair,
    #[error("ambiguous canonical contact bivector: readings {0:?} all pass")]
    AmbiguousCanonicalPair(Vec<String>),
    #[error("transversal is not cosymplectic at the point (classified {0})")]
    NotCosymplectic(TransversalClass),
    #[error("Θ matrix is singular at the point")]
    SingularTheta,
    #[error("vector field does not vanish on N (component ∂{0} survives restriction)")]
    DoesNotVanishOnN(String),
    #[error(transparent)]
    Omni(#[from] OmniError),
    #[error("coefficient pole on the restriction locus")]
    Pole,
}

impl From<ExprError> for SplitError {
    fn from(_: ExprError) -> Self {
        SplitError::Pole
    }
}

/// The canonical fiber data of the cosymplectic splitting:
/// `(π_can, Z_can) = (Σ ∂p_i∧∂q_i, Σ p_i ∂p_i)` on `R^{2k}(q_i, p_i)`.
pub struct CanonicalCosymplectic {
    pub pair: JacobiPair,
    pub z_can: Multivector,
}

fn cosymplectic_fiber_chart(k: usize) -> Chart {
    let mut vars: Vec<String> = (1..=k).map(|i| format!("q{i}")).collect();
    vars.extend((1..=k).map(|i| format!("p{i}")));
    Chart::new("fiber", &vars).expect("valid fiber chart")
}

pub fn canonical_cosymplectic_pair(k: usize) -> Result<CanonicalCosymplectic, SplitError> {
    if k == 0 {
        return Err(SplitError::ZeroFiber);
    }
    let chart = cosymplectic_fiber_chart(k);
    let mut lam = Multivector::zero(&chart, 2);
    let mut z = Multivector::zero(&chart, 1);
    let one = ScalarExpr::one(&chart);
    for i in 0..k {
        let (qi, pi) = (i, k + i);
        // ∂p∧∂q carries coefficient -1 on the sorted pair (q, p).
        lam = lam.add(
            &Multivector::from_components(&chart, 2, vec![(vec![qi, pi], one.neg())]).unwrap(),
        );
        let p = ScalarExpr::symbol(&chart, pi);
        z = z.add(&Multivector::from_components(&chart, 1, vec![(vec![pi], p)]).unwrap());
    }
    Ok(CanonicalCosymplectic {
        pair: JacobiPair::new(lam, Multivector::zero(&chart, 1)),
        z_can: z,
    })
}

/// The pinned canonical contact pair on `R^{2k+1}(u, q_i, p_i)`.
pub struct CanonicalContact {
    pub pair: JacobiPair,
    /// Human-readable description of the reading that passed the search.
    pub reading: String,
}

fn contact_fiber_chart(k: usize) -> Chart {
    let mut vars: Vec<String> = vec!["u".to_owned()];
    vars.extend((1..=k).map(|i| format!("q{i}")));
    vars.extend((1..=k).map(|i| format!("p{i}")));
    Chart::new("fiber", &vars).expect("valid fiber chart")
}

fn contact_candidate(chart: &Chart, k: usize, second_is_p: bool, sign: i64) -> Multivector {
    let mut lam = Multivector::zero(chart, 2);
    for i in 0..k {
        let (u, qi, pi) = (0, 1 + i, 1 + k + i);
        let p = ScalarExpr::symbol(chart, pi);
        let first = Multivector::from_components(
            chart,
            1,
            vec![(vec![u], p), (vec![qi], ScalarExpr::one(chart))],
        )
        .unwrap();
        let second = Multivector::coordinate(chart, if second_is_p { pi } else { qi });
        lam = lam.add(&first.wedge(&second));
    }
    lam.scale(&ScalarExpr::from_int(chart, sign))
}

/// Resolves the index/sign ambiguity of the canonical contact bivector by
/// brute force: among the four readings `±Σ(p_i∂u + ∂q_i)∧∂s_i` with
/// `s ∈ {q, p}`, exactly one must both satisfy the structure equations and
/// be nondegenerate at the origin (the theorem speaks of a contact point).
/// Anything else aborts loudly.
pub fn canonical_contact_pair(k: usize) -> Result<CanonicalContact, SplitError> {
    if k == 0 {
        return Err(SplitError::ZeroFiber);
    }
    let chart = contact_fiber_chart(k);
    let reeb = Multivector::coordinate(&chart, 0);
    let origin = vec![BigRational::zero(); chart.num_symbols()];
    let mut passing = Vec::new();
    for (second_is_p, sign) in [(true, 1), (true, -1), (false, 1), (false, -1)] {
        let lam = contact_candidate(&chart, k, second_is_p, sign);
        let pair = JacobiPair::new(lam, reeb.clone());
        if !is_jacobi(&pair) {
            continue;
        }
        let nondegenerate = sharp_matrix_at(&pair, &origin)
            .map(|m| !m.det().is_zero())
            .unwrap_or(false);
        if !nondegenerate {
            continue;
        }
        let s = if second_is_p { "p_i" } else { "q_i" };
        let sig = if sign > 0 { "+" } else { "-" };
        passing.push((pair, format!("{sig}(p_i ∂u + ∂q_i) ∧ ∂{s}")));
    }
    match passing.len() {
        0 => Err(SplitError::NoCanonicalPair),
        1 => {
            let (pair, reading) = passing.pop().unwrap();
            Ok(CanonicalContact { pair, reading })
        }
        _ => Err(SplitError::AmbiguousCanonicalPair(
            passing.into_iter().map(|(_, r)| r).collect(),
        )),
    }
}

/// An assembled split model: the product-chart Jacobi pair together with
/// the fiber/base bookkeeping needed for transversal checks.
pub struct AssembledModel {
    pub pair: JacobiPair,
    pub fiber_vars: Vec<String>,
    pub base_vars: Vec<String>,
}

impl AssembledModel {
    pub fn chart(&self) -> &Chart {
        self.pair.chart()
    }

    /// The base transversal `N = {fiber vars = 0}`.
    pub fn base_transversal(&self) -> TransversalSpec {
        TransversalSpec::new(self.chart(), &self.fiber_vars, None)
            .expect("fiber vars are a proper subset")
    }
}

/// Product chart `fiber × base` and the embeddings of both factors.
fn product_chart(
    fiber: &Chart,
    base: &Chart,
) -> Result<(Chart, Vec<usize>, Vec<usize>), SplitError> {
    assert_eq!(base.params().count(), 0, "base chart must not carry params");
    let mut vars: Vec<String> = fiber.vars().map(str::to_owned).collect();
    for v in base.vars() {
        vars.push(v.to_owned());
    }
    let chart = Chart::new("model", &vars)?;
    let fiber_map = fiber.embedding_into(&chart).expect("fiber embeds");
    let base_map = base.embedding_into(&chart).expect("base embeds");
    Ok((chart, fiber_map, base_map))
}

/// The cosymplectic splitting model: `(Λ, E) = (π_can + Λ_N + E_N∧Z_can, E_N)`.
pub fn assemble_cosymplectic(
    lam_n: &Multivector,
    e_n: &Multivector,
    k: usize,
) -> Result<AssembledModel, SplitError> {
    assert_eq!(lam_n.degree(), 2, "Λ_N must be a bivector");
    assert_eq!(e_n.degree(), 1, "E_N must be a vector field");
    assert_eq!(lam_n.chart(), e_n.chart(), "chart mismatch");
    let fiber = canonical_cosymplectic_pair(k)?;
    let fiber_chart = fiber.pair.chart().clone();
    let base_chart = lam_n.chart().clone();
    let (chart, fmap, bmap) = product_chart(&fiber_chart, &base_chart)?;
    let pi_can = fiber.pair.bivector().embed(&chart, &fmap);
    let z_can = fiber.z_can.embed(&chart, &fmap);
    let lam_b = lam_n.embed(&chart, &bmap);
    let e_b = e_n.embed(&chart, &bmap);
    let lam = pi_can.add(&lam_b).add(&e_b.wedge(&z_can));
    Ok(AssembledModel {
        pair: JacobiPair::new(lam, e_b),
        fiber_vars: fiber_chart.vars().map(str::to_owned).collect(),
        base_vars: base_chart.vars().map(str::to_owned).collect(),
    })
}

/// The contact splitting model: `(Λ, E) = (Λ_can + π_N + E_can∧Z_N, E_can)`.
pub fn assemble_contact(
    pi_n: &Multivector,
    z_n: &Multivector,
    k: usize,
) -> Result<AssembledModel, SplitError> {
    assert_eq!(pi_n.degree(), 2, "π_N must be a bivector");
    assert_eq!(z_n.degree(), 1, "Z_N must be a vector field");
    assert_eq!(pi_n.chart(), z_n.chart(), "chart mismatch");
    let fiber = canonical_contact_pair(k)?;
    let fiber_chart = fiber.pair.chart().clone();
    let base_chart = pi_n.chart().clone();
    let (chart, fmap, bmap) = product_chart(&fiber_chart, &base_chart)?;
    let lam_can = fiber.pair.bivector().embed(&chart, &fmap);
    let e_can = fiber.pair.reeb().embed(&chart, &fmap);
    let pi_b = pi_n.embed(&chart, &bmap);
    let z_b = z_n.embed(&chart, &bmap);
    let lam = lam_can.add(&pi_b).add(&e_can.wedge(&z_b));
    Ok(AssembledModel {
        pair: JacobiPair::new(lam, e_can),
        fiber_vars: fiber_chart.vars().map(str::to_owned).collect(),
        base_vars: base_chart.vars().map(str::to_owned).collect(),
    })
}

/// Which homogeneity normal form of the homogeneous Poisson splitting to
/// build: case I has `Z ∈ image(π♯)` and carries the extra constant field
/// `∂p_k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HomogeneousCase {
    I,
    II,
}

/// A split homogeneous Poisson model.
pub struct HomogeneousModel {
    pub structure: HomogeneousPoisson,
    pub fiber_vars: Vec<String>,
    pub base_vars: Vec<String>,
}

/// Homogeneous Poisson splitting model:
/// `π = Σ ∂p_i∧∂q_i + π_N` with `Z = Σ p_i∂p_i (+ ∂p_k in case I) + Z_N`.
pub fn assemble_homogeneous_poisson(
    pi_n: &Multivector,
    z_n: &Multivector,
    k: usize,
    case: HomogeneousCase,
) -> Result<HomogeneousModel, SplitError> {
    assert_eq!(pi_n.degree(), 2, "π_N must be a bivector");
    assert_eq!(z_n.degree(), 1, "Z_N must be a vector field");
    assert_eq!(pi_n.chart(), z_n.chart(), "chart mismatch");
    let fiber = canonical_cosymplectic_pair(k)?;
    let fiber_chart = fiber.pair.chart().clone();
    let base_chart = pi_n.chart().clone();
    let (chart, fmap, bmap) = product_chart(&fiber_chart, &base_chart)?;
    let pi = fiber
        .pair
        .bivector()
        .embed(&chart, &fmap)
        .add(&pi_n.embed(&chart, &bmap));
    let mut z = fiber
        .z_can
        .embed(&chart, &fmap)
        .add(&z_n.embed(&chart, &bmap));
    if case == HomogeneousCase::I {
        let pk = chart
            .var_index(&format!("p{k}"))
            .expect("fiber variable exists");
        z = z.add(&Multivector::coordinate(&chart, pk));
    }
    Ok(HomogeneousModel {
        structure: HomogeneousPoisson::new(pi, z),
        fiber_vars: fiber_chart.vars().map(str::to_owned).collect(),
        base_vars: base_chart.vars().map(str::to_owned).collect(),
    })
}

/// The explicit closed 2-form of the cosymplectic splitting proof:
/// `ω = Σ dq_i∧dp_i - 𝟙*∧(Σ p_i dq_i)` on the cosymplectic fiber chart.
pub fn splitting_omega(k: usize) -> Result<LForm, SplitError> {
    if k == 0 {
        return Err(SplitError::ZeroFiber);
    }
    let chart = cosymplectic_fiber_chart(k);
    let mut plain = DiffForm::zero(&chart, 2);
    let mut jet = DiffForm::zero(&chart, 1);
    for i in 0..k {
        let (qi, pi) = (i, k + i);
        plain = plain.add(
            &DiffForm::from_components(&chart, 2, vec![(vec![qi, pi], ScalarExpr::one(&chart))])
                .unwrap(),
        );
        let p = ScalarExpr::symbol(&chart, pi);
        jet = jet.sub(&DiffForm::from_components(&chart, 1, vec![(vec![qi], p)]).unwrap());
    }
    Ok(LForm::from_parts(plain, Some(jet)).expect("degree bookkeeping"))
}

/// The transversal 2-form Θ at a point of a cosymplectic transversal,
/// as the exact matrix `M[i][j] = Θ(∂_{ν_i}, ∂_{ν_j})` over the normal
/// directions in the order of the spec.
#[derive(Debug, Clone)]
pub struct ThetaForm {
    pub point: Vec<BigRational>,
    pub normal_dirs: Vec<usize>,
    pub matrix: Matrix<BigRational>,
}

impl ThetaForm {
    pub fn is_antisymmetric(&self) -> bool {
        let n = self.matrix.nrows();
        (0..n).all(|i| (0..n).all(|j| self.matrix[(i, j)] == -self.matrix[(j, i)].clone()))
    }

    pub fn is_nondegenerate(&self) -> bool {
        !self.matrix.det().is_zero()
    }
}

/// Computes Θ = `(pr_ν ∘ σ ∘ J♯ |_{Ann(DL_N)})^{-1}` at a point where the
/// transversal is cosymplectic.
pub fn theta(
    jp: &JacobiPair,
    spec: &TransversalSpec,
    point: &[BigRational],
) -> Result<ThetaForm, SplitError> {
    let report = classify_transversal(jp, spec, point)?;
    if report.class != TransversalClass::Cosymplectic {
        return Err(SplitError::NotCosymplectic(report.class));
    }
    let normals = spec.normal_dirs().to_vec();
    let m = normals.len();
    // A[μ][ν] = (pr_ν σ J♯ dx_ν)^{∂_μ} = Λ(dx_ν, dx_μ) at the point.
    let mut a = Matrix::zeros(m, m, &BigRational::zero());
    for (col, &nu) in normals.iter().enumerate() {
        for (row, &mu) in normals.iter().enumerate() {
            if nu == mu {
                continue;
            }
            let c = if nu < mu {
                jp.bivector().coeff(&[nu, mu])
            } else {
                jp.bivector().coeff(&[mu, nu]).neg()
            };
            a[(row, col)] = c.eval(point).map_err(SplitError::from)?;
        }
    }
    let inv = a.inverse().ok_or(SplitError::SingularTheta)?;
    let theta = ThetaForm {
        point: point.to_vec(),
        normal_dirs: normals,
        matrix: inv.transpose(),
    };
    // Forced by the antisymmetry of J; kept as a hard invariant.
    assert!(theta.is_antisymmetric(), "Θ must be antisymmetric");
    Ok(theta)
}

/// Result of the Euler-like linearization test.
#[derive(Debug, Clone)]
pub struct EulerReport {
    /// The normal Jacobian block restricted to `N`, as functions of the
    /// tangential variables; entries ordered by the spec's normal list.
    pub block: Vec<Vec<ScalarExpr>>,
    pub is_euler_like: bool,
}

/// Checks whether a field vanishing on `N` linearizes to the Euler vector
/// field of the normal bundle: the block `∂X^ν/∂x^μ |_N` over the normal
/// directions must be the identity matrix identically on `N`.
/// (Completeness of the flow is a global property and is not checked.)
pub fn euler_like_check(
    x: &Multivector,
    spec: &TransversalSpec,
) -> Result<EulerReport, SplitError> {
    assert_eq!(x.degree(), 1, "Euler-like test needs a vector field");
    assert_eq!(x.chart(), spec.chart(), "chart mismatch");
    let normals = spec.normal_dirs();
    // X must vanish identically on N, all components included.
    for i in 0..x.chart().dim() {
        let c = x.coeff(&[i]).restrict_zero(normals)?;
        if !c.is_zero() {
            return Err(SplitError::DoesNotVanishOnN(
                x.chart().symbol_name(i).to_owned(),
            ));
        }
    }
    let chart = x.chart().clone();
    let mut block = Vec::with_capacity(normals.len());
    let mut is_identity = true;
    for (r, &nu) in normals.iter().enumerate() {
        let comp = x.coeff(&[nu]);
        let mut row = Vec::with_capacity(normals.len());
        for (c, &mu) in normals.iter().enumerate() {
            let entry = comp.partial(mu).restrict_zero(normals)?;
            let expect = if r == c {
                ScalarExpr::one(&chart)
            } else {
                ScalarExpr::zero(&chart)
            };
            if entry != expect {
                is_identity = false;
            }
            row.push(entry);
        }
        block.push(row);
    }
    Ok(EulerReport {
        block,
        is_euler_like: is_identity,
    })
}

/// Pushforward of a vector field along an invertible polynomial/rational
/// coordinate change. `forward[a]` expresses the `a`-th new coordinate in
/// the old chart; `inverse[i]` expresses the `i`-th old coordinate in the
/// new chart.
pub fn pushforward_vector(
    x: &Multivector,
    forward: &[ScalarExpr],
    inverse: &[ScalarExpr],
) -> Result<Multivector, ExprError> {
    assert_eq!(x.degree(), 1);
    let new_chart = forward_target(x.chart(), forward, inverse);
    let mut comps = Vec::new();
    for (a, f) in forward.iter().enumerate() {
        // X'(new_a) = X(f_a) composed with the inverse map.
        let val = x.apply_to_scalar(f).compose(inverse)?;
        comps.push((vec![a], val));
    }
    Ok(Multivector::from_components(&new_chart, 1, comps).expect("valid components"))
}

/// Pushforward of a bivector field along an invertible coordinate change;
/// conventions as in [`pushforward_vector`].
pub fn pushforward_bivector(
    pi: &Multivector,
    forward: &[ScalarExpr],
    inverse: &[ScalarExpr],
) -> Result<Multivector, ExprError> {
    assert_eq!(pi.degree(), 2);
    let new_chart = forward_target(pi.chart(), forward, inverse);
    let old = pi.chart().clone();
    let mut comps = Vec::new();
    for a in 0..forward.len() {
        for b in (a + 1)..forward.len() {
            // π'(dF_a, dF_b) = Σ_{i<j} π^{ij}(∂_iF_a ∂_jF_b - ∂_jF_a ∂_iF_b).
            let mut acc = ScalarExpr::zero(&old);
            for (idxs, c) in pi.components() {
                let (i, j) = (idxs[0], idxs[1]);
                let term = forward[a]
                    .partial(i)
                    .mul(&forward[b].partial(j))
                    .sub(&forward[b].partial(i).mul(&forward[a].partial(j)));
                acc = acc.add(&c.mul(&term));
            }
            comps.push((vec![a, b], acc.compose(inverse)?));
        }
    }
    Ok(Multivector::from_components(&new_chart, 2, comps).expect("valid components"))
}

fn forward_target(old: &Chart, forward: &[ScalarExpr], inverse: &[ScalarExpr]) -> Chart {
    assert!(
        forward.iter().all(|f| f.chart() == old),
        "forward components live on the old chart"
    );
    assert_eq!(
        inverse.len(),
        old.num_symbols(),
        "inverse assigns every old symbol"
    );
    let new_chart = inverse[0].chart().clone();
    assert_eq!(
        forward.len(),
        new_chart.dim(),
        "forward assigns every new variable"
    );
    new_chart
}

/// Defect comparison used by the `split` check mode: the assembled model
/// must be Jacobi exactly when the transversal input data passes its own
/// defect test.
#[derive(Debug, Clone)]
pub struct SplitCheck {
    pub input_defect_zero: bool,
    pub model_defect_zero: bool,
}

impl SplitCheck {
    pub fn consistent(&self) -> bool {
        self.input_defect_zero == self.model_defect_zero
    }
}

pub fn check_cosymplectic(
    model: &AssembledModel,
    lam_n: &Multivector,
    e_n: &Multivector,
) -> SplitCheck {
    let (d3, d2) = jacobi_defect(&JacobiPair::new(lam_n.clone(), e_n.clone()));
    let (m3, m2) = jacobi_defect(&model.pair);
    SplitCheck {
        input_defect_zero: d3.is_zero() && d2.is_zero(),
        model_defect_zero: m3.is_zero() && m2.is_zero(),
    }
}

pub fn check_contact(model: &AssembledModel, pi_n: &Multivector, z_n: &Multivector) -> SplitCheck {
    let (d3, d2) = homogeneity_defect(&HomogeneousPoisson::new(pi_n.clone(), z_n.clone()));
    let (m3, m2) = jacobi_defect(&model.pair);
    SplitCheck {
        input_defect_zero: d3.is_zero() && d2.is_zero(),
        model_defect_zero: m3.is_zero() && m2.is_zero(),
    }
}

pub fn check_homogeneous(
    model: &HomogeneousModel,
    pi_n: &Multivector,
    z_n: &Multivector,
) -> SplitCheck {
    let (d3, d2) = homogeneity_defect(&HomogeneousPoisson::new(pi_n.clone(), z_n.clone()));
    let (m3, m2) = homogeneity_defect(&model.structure);
    SplitCheck {
        input_defect_zero: d3.is_zero() && d2.is_zero(),
        model_defect_zero: m3.is_zero() && m2.is_zero(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::lie_multivector;
    use crate::expr::{parse, rat};
    use crate::homog::{homogenize, is_homogeneous_poisson};
    use crate::jacobi::{sharp, JetSection};
    use crate::omni::graph_subspace;

    fn mv(chart: &Chart, degree: usize, comps: &[(&[usize], &str)]) -> Multivector {
        Multivector::from_components(
            chart,
            degree,
            comps
                .iter()
                .map(|(i, s)| (i.to_vec(), parse(s, chart).unwrap()))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn cosymplectic_fiber_pair() {
        let f = canonical_cosymplectic_pair(1).unwrap();
        let c = f.pair.chart().clone();
        assert_eq!(f.pair.bivector(), &mv(&c, 2, &[(&[0, 1], "-1")]));
        assert!(f.pair.reeb().is_zero());
        assert_eq!(f.z_can, mv(&c, 1, &[(&[1], "p1")]));
        assert!(is_jacobi(&f.pair));
        // Lie_{Z_can} Λ = -Λ for k ≤ 3.
        for k in 1..=3 {
            let f = canonical_cosymplectic_pair(k).unwrap();
            assert_eq!(
                lie_multivector(&f.z_can, f.pair.bivector()),
                f.pair.bivector().neg(),
                "homogeneity at k={k}"
            );
        }
    }

    #[test]
    fn contact_search_pins_unique_reading() {
        for k in [1usize, 2] {
            let pin = canonical_contact_pair(k).unwrap();
            assert!(is_jacobi(&pin.pair), "defect at k={k}");
            assert_eq!(pin.reading, "+(p_i ∂u + ∂q_i) ∧ ∂p_i", "reading at k={k}");
        }
        // The pinned k=1 bivector is (p∂u + ∂q)∧∂p.
        let pin = canonical_contact_pair(1).unwrap();
        let c = pin.pair.chart().clone();
        assert_eq!(
            pin.pair.bivector(),
            &mv(&c, 2, &[(&[0, 2], "p1"), (&[1, 2], "1")])
        );
        assert_eq!(pin.pair.reeb(), &Multivector::coordinate(&c, 0));
    }

    #[test]
    fn contact_reeb_transversality_at_origin() {
        // sharp applied to 𝟙* returns (E_can, 0) ≠ 0.
        let pin = canonical_contact_pair(1).unwrap();
        let c = pin.pair.chart().clone();
        let d = sharp(&pin.pair, &JetSection::one_star(&c));
        assert_eq!(d.symbol(), pin.pair.reeb());
        assert!(d.scalar().is_zero());
        assert!(!d.is_zero());
    }

    #[test]
    fn assemble_cosymplectic_examples() {
        let base = Chart::new("N", &["y"]).unwrap();
        // (Λ_N, E_N) = (0, 0): pure fiber model.
        let zero2 = Multivector::zero(&base, 2);
        let zero1 = Multivector::zero(&base, 1);
        let m = assemble_cosymplectic(&zero2, &zero1, 1).unwrap();
        assert!(is_jacobi(&m.pair));
        // (Λ_N, E_N) = (0, ∂y): the E_N∧Z_can correction closes the defect.
        let ey = Multivector::coordinate(&base, 0);
        let m = assemble_cosymplectic(&zero2, &ey, 1).unwrap();
        assert!(is_jacobi(&m.pair));
        let check = check_cosymplectic(&m, &zero2, &ey);
        assert!(check.consistent() && check.model_defect_zero);
        // Perturbed input with defect: Λ_N = y∂a∧∂b with E_N = ∂y has
        // Lie_E Λ = ∂a∧∂b ≠ 0.
        let base3 = Chart::new("N", &["y", "a", "b"]).unwrap();
        let bad_lam = mv(&base3, 2, &[(&[1, 2], "y")]);
        let bad_e = Multivector::coordinate(&base3, 0);
        let (d3, d2) = jacobi_defect(&JacobiPair::new(bad_lam.clone(), bad_e.clone()));
        assert!(!d3.is_zero() || !d2.is_zero());
        let m = assemble_cosymplectic(&bad_lam, &bad_e, 1).unwrap();
        let check = check_cosymplectic(&m, &bad_lam, &bad_e);
        assert!(!check.model_defect_zero && check.consistent());
    }

    #[test]
    fn assemble_contact_examples() {
        // (π_N, Z_N) = (0,0) reproduces the canonical contact pair.
        let base = Chart::new("N", &["y"]).unwrap();
        let zero2 = Multivector::zero(&base, 2);
        let zero1 = Multivector::zero(&base, 1);
        let m = assemble_contact(&zero2, &zero1, 1).unwrap();
        assert!(is_jacobi(&m.pair));
        // Homogenization of ∂a∧∂b: (π_N, Z_N) = ((1/y)∂a∧∂b, y∂y).
        let base3 = Chart::new("N", &["y", "a", "b"]).unwrap();
        let pi_n = mv(&base3, 2, &[(&[1, 2], "1/y")]);
        let z_n = mv(&base3, 1, &[(&[0], "y")]);
        let m = assemble_contact(&pi_n, &z_n, 1).unwrap();
        assert!(is_jacobi(&m.pair), "homogeneous base closes the defect");
        // Poisson but not homogeneous: (∂a∧∂b, 0) must fail.
        let pi_bad = mv(&base3, 2, &[(&[1, 2], "1")]);
        let zero = Multivector::zero(&base3, 1);
        let m = assemble_contact(&pi_bad, &zero, 1).unwrap();
        let check = check_contact(&m, &pi_bad, &zero);
        assert!(!check.model_defect_zero && check.consistent());
    }

    #[test]
    fn assemble_homogeneous_cases() {
        let base = Chart::new("N", &["y"]).unwrap();
        let zero2 = Multivector::zero(&base, 2);
        let zero1 = Multivector::zero(&base, 1);
        for case in [HomogeneousCase::I, HomogeneousCase::II] {
            let m = assemble_homogeneous_poisson(&zero2, &zero1, 1, case).unwrap();
            assert!(is_homogeneous_poisson(&m.structure), "case {case:?}");
        }
        // Case II shape at k=1: π = ∂p∧∂q (coefficient -1 on (q1,p1)),
        // Z = p∂p; case I adds ∂p1.
        let m2 = assemble_homogeneous_poisson(&zero2, &zero1, 1, HomogeneousCase::II).unwrap();
        let c = m2.structure.chart().clone();
        assert_eq!(m2.structure.bivector(), &mv(&c, 2, &[(&[0, 1], "-1")]));
        assert_eq!(m2.structure.homogeneity(), &mv(&c, 1, &[(&[1], "p1")]));
        let m1 = assemble_homogeneous_poisson(&zero2, &zero1, 1, HomogeneousCase::I).unwrap();
        assert_eq!(m1.structure.homogeneity(), &mv(&c, 1, &[(&[1], "p1 + 1")]));
    }

    #[test]
    fn splitting_omega_is_closed() {
        for k in [1usize, 2] {
            let w = splitting_omega(k).unwrap();
            assert!(w.d_l().is_zero(), "ω not closed at k={k}");
        }
    }

    #[test]
    fn theta_of_assembled_model_is_standard_symplectic() {
        let base = Chart::new("N", &["y"]).unwrap();
        let e_n = Multivector::coordinate(&base, 0);
        let m = assemble_cosymplectic(&Multivector::zero(&base, 2), &e_n, 1).unwrap();
        let spec = m.base_transversal();
        let origin = vec![BigRational::zero(); m.chart().num_symbols()];
        let th = theta(&m.pair, &spec, &origin).unwrap();
        assert!(th.is_antisymmetric() && th.is_nondegenerate());
        // Θ(∂q, ∂p) = 1 in the (q1, p1) normal ordering.
        assert_eq!(th.matrix[(0, 1)], rat(1, 1));
        assert_eq!(th.matrix[(1, 0)], rat(-1, 1));
        assert_eq!(th.matrix[(0, 0)], rat(0, 1));
    }

    #[test]
    fn theta_rejects_zero_pair() {
        let c = Chart::new("R3", &["u", "q", "p"]).unwrap();
        let spec = TransversalSpec::new(&c, &["q", "p"], None).unwrap();
        let origin = vec![BigRational::zero(); 3];
        assert!(theta(&JacobiPair::zero(&c), &spec, &origin).is_err());
    }

    #[test]
    fn euler_like_cases() {
        let c = Chart::new("R3", &["x", "y", "z"]).unwrap();
        let spec = TransversalSpec::new(&c, &["x", "y"], None).unwrap();
        // The Euler field passes.
        let euler = mv(&c, 1, &[(&[0], "x"), (&[1], "y")]);
        let rep = euler_like_check(&euler, &spec).unwrap();
        assert!(rep.is_euler_like);
        // 2·Euler fails with block 2·id.
        let rep = euler_like_check(&euler.scale(&parse("2", &c).unwrap()), &spec).unwrap();
        assert!(!rep.is_euler_like);
        assert_eq!(rep.block[0][0], parse("2", &c).unwrap());
        // Quadratic vanishing fails with zero block.
        let quad = mv(&c, 1, &[(&[0], "x^2")]);
        let rep = euler_like_check(&quad, &spec).unwrap();
        assert!(!rep.is_euler_like);
        assert!(rep.block[0][0].is_zero());
        // Non-vanishing field is rejected.
        let bad = mv(&c, 1, &[(&[2], "z + x")]);
        assert!(matches!(
            euler_like_check(&bad, &spec),
            Err(SplitError::DoesNotVanishOnN(v)) if v == "z"
        ));
        // Invariance under second-order perturbations.
        let pert = euler.add(&mv(&c, 1, &[(&[0], "x*y"), (&[2], "x^2 - y^2")]));
        let rep = euler_like_check(&pert, &spec).unwrap();
        assert!(rep.is_euler_like);
    }

    #[test]
    fn backwards_transform_recovers_transversal_graph() {
        // Cosymplectic splitting consistency: the backwards transform of the
        // assembled graph at the origin is the graph of (Λ_N, E_N).
        let base = Chart::new("N", &["y", "w"]).unwrap();
        let lam_n = mv(&base, 2, &[(&[0, 1], "1 + y")]);
        let e_n = Multivector::coordinate(&base, 0);
        let m = assemble_cosymplectic(&lam_n, &e_n, 1).unwrap();
        let spec = m.base_transversal();
        let origin_big = vec![BigRational::zero(); m.chart().num_symbols()];
        let g = graph_subspace(&m.pair, &origin_big).unwrap();
        let bw = crate::omni::backwards_transform(&g, &spec).unwrap();
        let origin_small = vec![BigRational::zero(); base.num_symbols()];
        let expect = graph_subspace(&JacobiPair::new(lam_n, e_n), &origin_small).unwrap();
        assert_eq!(bw.basis_rows(), expect.basis_rows());
    }

    #[test]
    fn homogenized_contact_matches_case_i_normal_form() {
        // The homogenization of the canonical contact pair is the case-I
        // split model after the documented rational change of coordinates
        // (q̃1, p̃1, q̃2, p̃2) = (-q, v·p, u, v-1).
        let pin = canonical_contact_pair(1).unwrap();
        let hp = homogenize(&pin.pair, "v").unwrap();
        let old = hp.chart().clone(); // (u, q1, p1, v)
        let new = Chart::new("split", &["q1", "p1", "q2", "p2"]).unwrap();
        let o = |s: &str| parse(s, &old).unwrap();
        let n = |s: &str| parse(s, &new).unwrap();
        let forward = vec![o("-q1"), o("v*p1"), o("u"), o("v - 1")];
        let inverse = vec![n("q2"), n("-q1"), n("p1/(p2 + 1)"), n("p2 + 1")];
        let pi_new = pushforward_bivector(hp.bivector(), &forward, &inverse).unwrap();
        let z_new = pushforward_vector(hp.homogeneity(), &forward, &inverse).unwrap();
        // Expected: π = ∂p1∧∂q1 + ∂p2∧∂q2, Z = p1∂p1 + p2∂p2 + ∂p2.
        assert_eq!(pi_new, mv(&new, 2, &[(&[0, 1], "-1"), (&[2, 3], "-1")]));
        assert_eq!(z_new, mv(&new, 1, &[(&[1], "p1"), (&[3], "p2 + 1")]));
    }
}
