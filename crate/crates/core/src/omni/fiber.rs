//! Pointwise fiber computations in `𝔻L`.
//!
//! Fiber conventions (documented in `docs/conventions.md` and locked by the
//! tests below): for a fiber with coordinate directions `d_1 < … < d_m`,
//! the `DL` fiber basis is `(∂_{d_1}, …, ∂_{d_m}, 𝟙)` and the `J¹L` fiber
//! basis is `(dx_{d_1}, …, dx_{d_m}, 𝟙*)`; an omni fiber vector is the
//! concatenation `[DL part | J¹L part]` of length `2(m+1)`. Subspaces are
//! stored with a canonical reduced-row-echelon basis, so equal subspaces
//! compare equal.

use num::rational::BigRational;
use num::Zero;

use crate::cartan::DiffForm;
use crate::expr::{Chart, ExprError, ScalarExpr};
use crate::jacobi::JacobiPair;
use crate::linalg::{row_space_intersection, Matrix};

#[derive(Debug, thiserror::Error)]
pub enum OmniError {
    #[error("point does not satisfy the submanifold equations (normal variable `{0}` nonzero)")]
    PointOffSubmanifold(String),
    #[error("coefficient pole at the evaluation point")]
    Pole,
    #[error("evaluation point must assign all {expected} chart symbols, got {got}")]
    BadPoint { expected: usize, got: usize },
    #[error("transversality fails: DL_N + pr_D(L) has rank {rank}, expected {expected}")]
    TransversalityFailure { rank: usize, expected: usize },
    #[error("subspace is not maximally isotropic (dimension {dim}, ambient needs {expected}; gram zero: {gram_zero})")]
    NotIsotropic {
        dim: usize,
        expected: usize,
        gram_zero: bool,
    },
    #[error("fiber vectors have wrong length {got}, expected {expected}")]
    WrongVectorLength { got: usize, expected: usize },
    #[error("normal variables must form a nonempty proper subset of the chart variables")]
    BadNormalSet,
    #[error("connection offset must be a tangential, normal-independent, closed 1-form")]
    BadConnection,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
}

impl From<ExprError> for OmniError {
    fn from(_: ExprError) -> Self {
        OmniError::Pole
    }
}

/// The coordinate directions spanning a fiber of `DL ⊕ J¹L`: all chart
/// variables for the ambient space, the tangential ones for a transversal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberSpace {
    chart: Chart,
    dirs: Vec<usize>,
}

impl FiberSpace {
    pub fn full(chart: &Chart) -> FiberSpace {
        FiberSpace {
            chart: chart.clone(),
            dirs: (0..chart.dim()).collect(),
        }
    }

    pub fn of_dirs(chart: &Chart, dirs: Vec<usize>) -> FiberSpace {
        assert!(dirs.windows(2).all(|w| w[0] < w[1]));
        assert!(dirs.iter().all(|&d| d < chart.dim()));
        FiberSpace {
            chart: chart.clone(),
            dirs,
        }
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn dirs(&self) -> &[usize] {
        &self.dirs
    }

    /// Rank of `DL` (or `J¹L`) over this fiber: directions plus one.
    pub fn half_dim(&self) -> usize {
        self.dirs.len() + 1
    }

    pub fn total_dim(&self) -> usize {
        2 * self.half_dim()
    }

    /// Symmetric pairing of two fiber vectors.
    pub fn pair(&self, x: &[BigRational], y: &[BigRational]) -> BigRational {
        let m = self.half_dim();
        let mut acc = BigRational::zero();
        for a in 0..m {
            acc += &x[a] * &y[m + a] + &x[m + a] * &y[a];
        }
        acc
    }
}

/// A linear subspace of one fiber of `𝔻L`, anchored at its base point.
#[derive(Debug, Clone, PartialEq)]
pub struct OmniFiberSubspace {
    space: FiberSpace,
    point: Vec<BigRational>,
    basis: Matrix<BigRational>,
}

impl OmniFiberSubspace {
    pub fn new(
        space: FiberSpace,
        point: Vec<BigRational>,
        vectors: Vec<Vec<BigRational>>,
    ) -> Result<OmniFiberSubspace, OmniError> {
        if point.len() != space.chart().num_symbols() {
            return Err(OmniError::BadPoint {
                expected: space.chart().num_symbols(),
                got: point.len(),
            });
        }
        let want = space.total_dim();
        for v in &vectors {
            if v.len() != want {
                return Err(OmniError::WrongVectorLength {
                    got: v.len(),
                    expected: want,
                });
            }
        }
        let basis = if vectors.is_empty() {
            Matrix::zeros(0, want, &BigRational::zero())
        } else {
            let rows = Matrix::from_rows(vectors).row_space_basis();
            if rows.is_empty() {
                Matrix::zeros(0, want, &BigRational::zero())
            } else {
                Matrix::from_rows(rows)
            }
        };
        Ok(OmniFiberSubspace {
            space,
            point,
            basis,
        })
    }

    pub fn space(&self) -> &FiberSpace {
        &self.space
    }

    pub fn point(&self) -> &[BigRational] {
        &self.point
    }

    pub fn dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn basis_rows(&self) -> Vec<Vec<BigRational>> {
        self.basis.rows_vec()
    }

    /// Gram matrix of the restricted pairing.
    pub fn gram(&self) -> Matrix<BigRational> {
        let k = self.dim();
        let mut g = Matrix::zeros(k, k, &BigRational::zero());
        for i in 0..k {
            for j in 0..k {
                g[(i, j)] = self.space.pair(self.basis.row(i), self.basis.row(j));
            }
        }
        g
    }

    pub fn is_isotropic(&self) -> bool {
        let g = self.gram();
        (0..g.nrows()).all(|i| (0..g.ncols()).all(|j| g[(i, j)].is_zero()))
    }

    pub fn is_maximally_isotropic(&self) -> bool {
        self.dim() == self.space.half_dim() && self.is_isotropic()
    }

    /// The intersection with the `DL` summand (vectors with zero jet
    /// part), as canonical `DL`-part vectors of length `half_dim`.
    pub fn intersection_with_d(&self) -> Vec<Vec<BigRational>> {
        let m = self.space.half_dim();
        let k = self.dim();
        if k == 0 {
            return Vec::new();
        }
        // Kernel of the map c ↦ jet part of Σ c_i b_i.
        let mut jmat = Matrix::zeros(m, k, &BigRational::zero());
        for j in 0..m {
            for c in 0..k {
                jmat[(j, c)] = self.basis[(c, m + j)].clone();
            }
        }
        let kernel = jmat.kernel_basis();
        let mut vecs = Vec::new();
        for coeffs in kernel {
            let mut v = vec![BigRational::zero(); m];
            for (c, co) in coeffs.iter().enumerate() {
                for a in 0..m {
                    v[a] += co * &self.basis[(c, a)];
                }
            }
            if v.iter().any(|x| !x.is_zero()) {
                vecs.push(v);
            }
        }
        if vecs.is_empty() {
            return Vec::new();
        }
        Matrix::from_rows(vecs).row_space_basis()
    }
}

/// Symbolic `(n+1)×(n+1)` matrix of `J♯` with rows over the `DL` basis
/// `(∂_1,…,∂_n,𝟙)` and columns over the `J¹L` basis `(dx_1,…,dx_n,𝟙*)`.
pub fn sharp_matrix(jp: &JacobiPair) -> Matrix<ScalarExpr> {
    let chart = jp.chart().clone();
    let n = chart.dim();
    let zero = ScalarExpr::zero(&chart);
    let mut m = Matrix::zeros(n + 1, n + 1, &zero);
    let lam_pair = |i: usize, k: usize| -> ScalarExpr {
        use std::cmp::Ordering;
        match i.cmp(&k) {
            Ordering::Less => jp.bivector().coeff(&[i, k]),
            Ordering::Greater => jp.bivector().coeff(&[k, i]).neg(),
            Ordering::Equal => zero.clone(),
        }
    };
    for i in 0..n {
        // Column dx_i: (Λ♯(dx_i), -dx_i(E)).
        for k in 0..n {
            m[(k, i)] = lam_pair(i, k);
        }
        m[(n, i)] = jp.reeb().coeff(&[i]).neg();
    }
    for k in 0..n {
        // Column 𝟙*: (E, 0).
        m[(k, n)] = jp.reeb().coeff(&[k]);
    }
    m
}

/// Exact evaluation of [`sharp_matrix`] at a point.
pub fn sharp_matrix_at(
    jp: &JacobiPair,
    point: &[BigRational],
) -> Result<Matrix<BigRational>, OmniError> {
    let sym = sharp_matrix(jp);
    let n = sym.nrows();
    if point.len() != jp.chart().num_symbols() {
        return Err(OmniError::BadPoint {
            expected: jp.chart().num_symbols(),
            got: point.len(),
        });
    }
    let mut out = Matrix::zeros(n, n, &BigRational::zero());
    for i in 0..n {
        for j in 0..n {
            out[(i, j)] = sym[(i, j)].eval(point)?;
        }
    }
    Ok(out)
}

/// The graph `{(J♯ψ, ψ)}` of a Jacobi tensor as a fiber subspace at a
/// regular point: `(n+1)`-dimensional and maximally isotropic.
pub fn graph_subspace(
    jp: &JacobiPair,
    point: &[BigRational],
) -> Result<OmniFiberSubspace, OmniError> {
    let space = FiberSpace::full(jp.chart());
    let m = space.half_dim();
    let sharp = sharp_matrix_at(jp, point)?;
    let mut vectors = Vec::with_capacity(m);
    for j in 0..m {
        let mut v = vec![BigRational::zero(); 2 * m];
        for i in 0..m {
            v[i] = sharp[(i, j)].clone();
        }
        v[m + j] = BigRational::from_integer(1.into());
        vectors.push(v);
    }
    OmniFiberSubspace::new(space, point.to_vec(), vectors)
}

/// A coordinate transversal `N = {normal vars = 0}`, optionally with flat
/// connection data `∇_Y = (Y, β(Y))` given by a closed tangential 1-form.
#[derive(Debug, Clone)]
pub struct TransversalSpec {
    chart: Chart,
    normal: Vec<usize>,
    tangential: Vec<usize>,
    offset: Option<DiffForm>,
}

impl TransversalSpec {
    pub fn new<S: AsRef<str>>(
        chart: &Chart,
        normal_vars: &[S],
        offset: Option<DiffForm>,
    ) -> Result<TransversalSpec, OmniError> {
        let mut normal = Vec::new();
        for v in normal_vars {
            let idx = chart
                .var_index(v.as_ref())
                .ok_or_else(|| OmniError::UnknownVariable(v.as_ref().to_owned()))?;
            normal.push(idx);
        }
        normal.sort_unstable();
        normal.dedup();
        if normal.is_empty() || normal.len() >= chart.dim() {
            return Err(OmniError::BadNormalSet);
        }
        let tangential: Vec<usize> = (0..chart.dim()).filter(|i| !normal.contains(i)).collect();
        if let Some(beta) = &offset {
            let ok = beta.degree() == 1
                && beta.chart() == chart
                && normal
                    .iter()
                    .all(|&nu| !beta.has_index(nu) && !beta.depends_on(nu))
                && beta.d().is_zero();
            if !ok {
                return Err(OmniError::BadConnection);
            }
        }
        Ok(TransversalSpec {
            chart: chart.clone(),
            normal,
            tangential,
            offset,
        })
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn normal_dirs(&self) -> &[usize] {
        &self.normal
    }

    pub fn tangential_dirs(&self) -> &[usize] {
        &self.tangential
    }

    pub fn fiber_space(&self) -> FiberSpace {
        FiberSpace::of_dirs(&self.chart, self.tangential.clone())
    }

    /// Verify a point lies on `N`.
    pub fn check_on_submanifold(&self, point: &[BigRational]) -> Result<(), OmniError> {
        if point.len() != self.chart.num_symbols() {
            return Err(OmniError::BadPoint {
                expected: self.chart.num_symbols(),
                got: point.len(),
            });
        }
        for &nu in &self.normal {
            if !point[nu].is_zero() {
                return Err(OmniError::PointOffSubmanifold(
                    self.chart.symbol_name(nu).to_owned(),
                ));
            }
        }
        Ok(())
    }

    /// Offset coefficients `β_t(point)` over the tangential directions.
    fn offset_at(&self, point: &[BigRational]) -> Result<Vec<BigRational>, OmniError> {
        match &self.offset {
            None => Ok(vec![BigRational::zero(); self.tangential.len()]),
            Some(beta) => self
                .tangential
                .iter()
                .map(|&t| beta.coeff(&[t]).eval(point).map_err(Into::into))
                .collect(),
        }
    }

    /// Ambient `DL`-fiber vectors of the embedded `DL_N` basis
    /// `(∇_{∂_t}, 𝟙)`.
    fn embedded_d_basis(&self, point: &[BigRational]) -> Result<Vec<Vec<BigRational>>, OmniError> {
        let n = self.chart.dim();
        let beta = self.offset_at(point)?;
        let mut rows = Vec::new();
        for (a, &t) in self.tangential.iter().enumerate() {
            let mut v = vec![BigRational::zero(); n + 1];
            v[t] = BigRational::from_integer(1.into());
            v[n] = beta[a].clone();
            rows.push(v);
        }
        let mut one = vec![BigRational::zero(); n + 1];
        one[n] = BigRational::from_integer(1.into());
        rows.push(one);
        Ok(rows)
    }
}

/// Backwards transform of a fiber subspace along the inclusion
/// `I: L_N → L`:
/// `{(Δ, (DI)*α) : Δ ∈ DL_N, (DI(Δ), α) ∈ sub}`.
pub fn backwards_transform(
    sub: &OmniFiberSubspace,
    spec: &TransversalSpec,
) -> Result<OmniFiberSubspace, OmniError> {
    assert_eq!(sub.space().chart(), spec.chart(), "chart mismatch");
    assert_eq!(
        sub.space().dirs().len(),
        spec.chart().dim(),
        "backwards transform expects an ambient-fiber subspace"
    );
    spec.check_on_submanifold(sub.point())?;
    let n = spec.chart().dim();
    let m_amb = n + 1;
    let k = sub.dim();
    let beta = spec.offset_at(sub.point())?;
    let tang = spec.tangential_dirs();
    let m_n = tang.len() + 1;
    // Admissible combinations: normal ∂-components of Σ c_i b_i vanish.
    let mut constraints = Matrix::zeros(spec.normal_dirs().len(), k.max(1), &BigRational::zero());
    for (r, &nu) in spec.normal_dirs().iter().enumerate() {
        for c in 0..k {
            constraints[(r, c)] = sub.basis_row(c)[nu].clone();
        }
    }
    let kernel = if k == 0 {
        Vec::new()
    } else {
        constraints.kernel_basis()
    };
    let mut vectors = Vec::new();
    for coeffs in kernel {
        // Ambient vector w = Σ c_i b_i.
        let mut w = vec![BigRational::zero(); 2 * m_amb];
        for (c, co) in coeffs.iter().enumerate() {
            if co.is_zero() {
                continue;
            }
            for j in 0..2 * m_amb {
                w[j] += co * &sub.basis_row(c)[j];
            }
        }
        // Δ: tangential components carried over, 𝟙-component corrected by
        // the connection offset (DI(Δ)^𝟙 = Δ^𝟙 + Σ β_t Δ^t).
        let mut out = vec![BigRational::zero(); 2 * m_n];
        for (a, &t) in tang.iter().enumerate() {
            out[a] = w[t].clone();
        }
        let mut one_comp = w[n].clone();
        for (a, _) in tang.iter().enumerate() {
            one_comp -= &beta[a] * &out[a];
        }
        out[m_n - 1] = one_comp;
        // (DI)*α: tangential covectors shifted by r·β, 𝟙*-component kept.
        let r = w[2 * m_amb - 1].clone();
        for (a, &t) in tang.iter().enumerate() {
            out[m_n + a] = &w[m_amb + t] + &r * &beta[a];
        }
        out[2 * m_n - 1] = r;
        if out.iter().any(|x| !x.is_zero()) {
            vectors.push(out);
        }
    }
    OmniFiberSubspace::new(spec.fiber_space(), sub.point().to_vec(), vectors)
}

impl OmniFiberSubspace {
    fn basis_row(&self, i: usize) -> &[BigRational] {
        self.basis.row(i)
    }
}

/// Transversal type at a point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TransversalClass {
    Cosymplectic,
    Cocontact,
    Neither,
}

impl std::fmt::Display for TransversalClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TransversalClass::Cosymplectic => write!(f, "cosymplectic"),
            TransversalClass::Cocontact => write!(f, "cocontact"),
            TransversalClass::Neither => write!(f, "neither"),
        }
    }
}

/// Classification data at one point.
#[derive(Debug, Clone)]
pub struct TransversalReport {
    pub class: TransversalClass,
    /// rank of `DL_N ∩ B_I(L_J)` at the point.
    pub intersection_rank: usize,
    /// Canonical basis of that intersection over the `DL_N` fiber basis.
    pub intersection: Vec<Vec<BigRational>>,
    /// The backwards transform of the graph at the point.
    pub backwards: OmniFiberSubspace,
}

/// Classify a transversal at a point: transversality is required, then the
/// rank of `DL_N ∩ B_I(L_J)` decides (0 = cosymplectic, 1 = cocontact).
pub fn classify_transversal(
    jp: &JacobiPair,
    spec: &TransversalSpec,
    point: &[BigRational],
) -> Result<TransversalReport, OmniError> {
    assert_eq!(jp.chart(), spec.chart(), "chart mismatch");
    spec.check_on_submanifold(point)?;
    let graph = graph_subspace(jp, point)?;
    let n = jp.chart().dim();
    // Transversality: DL_N + pr_D(graph) = DL at the point.
    let mut rows = spec.embedded_d_basis(point)?;
    for i in 0..graph.dim() {
        rows.push(graph.basis_row(i)[..n + 1].to_vec());
    }
    let rank = Matrix::from_rows(rows).rank();
    if rank != n + 1 {
        return Err(OmniError::TransversalityFailure {
            rank,
            expected: n + 1,
        });
    }
    let backwards = backwards_transform(&graph, spec)?;
    let intersection = backwards.intersection_with_d();
    let class = match intersection.len() {
        0 => TransversalClass::Cosymplectic,
        1 => TransversalClass::Cocontact,
        _ => TransversalClass::Neither,
    };
    Ok(TransversalReport {
        class,
        intersection_rank: intersection.len(),
        intersection,
        backwards,
    })
}

/// Result of the homogeneous-Poisson-type test on a maximally isotropic
/// fiber subspace.
#[derive(Debug, Clone)]
pub struct HomogeneousTypeReport {
    /// `rank(L ∩ DL) = 1`.
    pub is_homogeneous_poisson_type: bool,
    pub intersection_rank: usize,
    /// For rank one: the generator, rescaled so its `𝟙` coefficient is one
    /// whenever that coefficient is nonzero.
    pub generator: Option<Vec<BigRational>>,
}

/// Tests `rank(L ∩ DL) = 1` on a maximally isotropic subspace and returns
/// the normalized generator.
pub fn homogeneous_poisson_type_check(
    sub: &OmniFiberSubspace,
) -> Result<HomogeneousTypeReport, OmniError> {
    if !sub.is_maximally_isotropic() {
        return Err(OmniError::NotIsotropic {
            dim: sub.dim(),
            expected: sub.space().half_dim(),
            gram_zero: sub.is_isotropic(),
        });
    }
    let inter = sub.intersection_with_d();
    let rank = inter.len();
    let generator = if rank == 1 {
        let mut g = inter[0].clone();
        let m = sub.space().half_dim();
        if !g[m - 1].is_zero() {
            let inv = BigRational::from_integer(1.into()) / g[m - 1].clone();
            for c in g.iter_mut() {
                *c *= &inv;
            }
        }
        Some(g)
    } else {
        None
    };
    Ok(HomogeneousTypeReport {
        is_homogeneous_poisson_type: rank == 1,
        intersection_rank: rank,
        generator,
    })
}

/// Intersection of two subspaces of the same fiber.
pub fn subspace_intersection(
    a: &OmniFiberSubspace,
    b: &OmniFiberSubspace,
) -> Vec<Vec<BigRational>> {
    assert_eq!(a.space(), b.space(), "fiber mismatch");
    row_space_intersection(&a.basis, &b.basis)
}
