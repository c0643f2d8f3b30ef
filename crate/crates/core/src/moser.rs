//! Moser-trick machinery for deformations of Jacobi pairs.
//!
//! A deformation family is a closed 2-form `σ_t` depending polynomially on
//! a formal time parameter `t`, with `σ_0 = 0`. Time is adjoined to the
//! coefficient field as a chart parameter, so `t`-derivatives and the
//! deformed sharp map `J_t♯ = J♯∘(id + σ_t♭∘J♯)^{-1}` are exact rational
//! computations; floating point enters only for the flow probe, where the
//! statement under test is genuinely about flows.

use num::rational::BigRational;
use num::{Signed, ToPrimitive, Zero};

use crate::cartan::{Derivation, DiffForm, LForm, Multivector};
use crate::expr::{BigInt, Chart, ChartError, ExprError, Poly, ScalarExpr};
use crate::jacobi::{JacobiPair, JetSection};
use crate::linalg::Matrix;
use crate::omni::sharp_matrix;

#[derive(Debug, thiserror::Error)]
pub enum MoserError {
    #[error("deformation parameter: {0}")]
    Chart(#[from] ChartError),
    #[error("σ must be a 2-form, got degree {0}")]
    WrongDegree(usize),
    #[error("σ does not live on the base chart extended by the time parameter")]
    ChartShape,
    #[error("σ does not vanish at t = 0")]
    NotZeroAtStart,
    #[error("σ_t is not d_L-closed")]
    NotClosed,
    #[error("reconstruction identity ∂σ/∂t = -d_L α_t fails: convention inconsistency")]
    ReconstructionFailed,
    #[error("deformation matrix id + σ_t♭∘J♯ is singular at t = {t}")]
    Singular { t: BigRational },
    #[error("deformation matrix is singular as a family (identically degenerate)")]
    IdenticallySingular,
    #[error("coefficient pole at the evaluation point")]
    Pole,
    #[error("flow trajectory hit a pole or left the numerical domain at t ≈ {t}")]
    PoleOnTrajectory { t: f64 },
}

impl From<ExprError> for MoserError {
    fn from(_: ExprError) -> Self {
        MoserError::Pole
    }
}

/// Coordinates of a jet section over the fiber basis `(dx_1..dx_n, 𝟙*)`.
fn jet_coords(js: &JetSection) -> Vec<ScalarExpr> {
    let chart = js.chart().clone();
    let mut v: Vec<ScalarExpr> = (0..chart.dim()).map(|i| js.form().coeff(&[i])).collect();
    v.push(js.scalar().clone());
    v
}

/// A Jacobi pair with a time-dependent closed deformation 2-form.
pub struct DeformationFamily {
    base: JacobiPair,
    /// The base chart extended by the formal time parameter.
    chart_t: Chart,
    t_idx: usize,
    /// Base pair transported onto the extended chart.
    base_t: JacobiPair,
    sigma: LForm,
}

impl DeformationFamily {
    /// `sigma` must live on `base.chart()` extended by the parameter
    /// `t_name`; it must vanish at `t = 0` and be `d_L`-closed for all `t`.
    pub fn new(
        base: JacobiPair,
        sigma: LForm,
        t_name: &str,
    ) -> Result<DeformationFamily, MoserError> {
        if sigma.degree() != 2 {
            return Err(MoserError::WrongDegree(sigma.degree()));
        }
        let chart_t = base.chart().with_param_added(t_name)?;
        if sigma.chart() != &chart_t {
            return Err(MoserError::ChartShape);
        }
        let t_idx = chart_t.symbol_index(t_name).expect("parameter exists");
        let zero = BigRational::zero();
        let vanishes = |f: &DiffForm| {
            f.components().all(|(_, c)| {
                c.substitute(t_idx, &zero)
                    .map(|e| e.is_zero())
                    .unwrap_or(false)
            })
        };
        if !vanishes(sigma.plain()) || !vanishes(sigma.jet()) {
            return Err(MoserError::NotZeroAtStart);
        }
        if !sigma.d_l().is_zero() {
            return Err(MoserError::NotClosed);
        }
        let map = base.chart().embedding_into(&chart_t).expect("extension");
        let base_t = JacobiPair::new(
            base.bivector().embed(&chart_t, &map),
            base.reeb().embed(&chart_t, &map),
        );
        Ok(DeformationFamily {
            base,
            chart_t,
            t_idx,
            base_t,
            sigma,
        })
    }

    pub fn base(&self) -> &JacobiPair {
        &self.base
    }

    /// The base pair transported to the extended chart.
    pub fn base_extended(&self) -> &JacobiPair {
        &self.base_t
    }

    pub fn chart_t(&self) -> &Chart {
        &self.chart_t
    }

    pub fn t_index(&self) -> usize {
        self.t_idx
    }

    pub fn sigma(&self) -> &LForm {
        &self.sigma
    }

    /// Symbolic matrix of `σ_t♭: DL → J¹L`, columns over `(∂_1..∂_n, 𝟙)`,
    /// rows over `(dx_1..dx_n, 𝟙*)`: `σ♭(Δ) = ι_Δ σ_t`.
    pub fn sigma_flat_matrix(&self) -> Matrix<ScalarExpr> {
        let n = self.chart_t.dim();
        let zero = ScalarExpr::zero(&self.chart_t);
        let mut s = Matrix::zeros(n + 1, n + 1, &zero);
        for col in 0..=n {
            let delta = if col < n {
                Derivation::from_vector(Multivector::coordinate(&self.chart_t, col))
            } else {
                Derivation::identity(&self.chart_t)
            };
            let coords = jet_coords(&JetSection::from_lform(&self.sigma.contract(&delta)));
            for (row, c) in coords.into_iter().enumerate() {
                s[(row, col)] = c;
            }
        }
        s
    }

    /// Symbolic matrix of `J♯` on the extended chart.
    pub fn sharp_matrix_t(&self) -> Matrix<ScalarExpr> {
        sharp_matrix(&self.base_t)
    }

    /// Symbolic deformed sharp map `J_t♯ = J♯ ∘ (id + σ_t♭∘J♯)^{-1}` as a
    /// matrix of rational functions in the chart variables and `t`.
    pub fn deformed_sharp_symbolic(&self) -> Result<Matrix<ScalarExpr>, MoserError> {
        let m = self.sharp_matrix_t();
        let s = self.sigma_flat_matrix();
        let one = ScalarExpr::one(&self.chart_t);
        let id = Matrix::identity(m.nrows(), &one);
        let inner = id.add_mat(&s.matmul(&m));
        let inv = inner.inverse().ok_or(MoserError::IdenticallySingular)?;
        Ok(m.matmul(&inv))
    }

    /// Exact matrix of `J_{t0}♯` at a point.
    pub fn deformed_sharp(
        &self,
        t0: &BigRational,
        point: &[BigRational],
    ) -> Result<Matrix<BigRational>, MoserError> {
        let vals = self.point_with_t(point, t0);
        let m = eval_matrix(&self.sharp_matrix_t(), &vals)?;
        let s = eval_matrix(&self.sigma_flat_matrix(), &vals)?;
        let one: BigRational = num::One::one();
        let id = Matrix::identity(m.nrows(), &one);
        let inner = id.add_mat(&s.matmul(&m));
        let inv = inner
            .inverse()
            .ok_or_else(|| MoserError::Singular { t: t0.clone() })?;
        Ok(m.matmul(&inv))
    }

    /// Insert the time value into a base-chart point, producing a full
    /// symbol assignment for the extended chart.
    pub fn point_with_t(&self, point: &[BigRational], t0: &BigRational) -> Vec<BigRational> {
        assert_eq!(
            point.len(),
            self.base.chart().num_symbols(),
            "point assigns the base chart symbols"
        );
        let mut vals = point.to_vec();
        vals.insert(self.t_idx, t0.clone());
        vals
    }

    /// The Moser 1-form `α_t = -∂/∂t ι_𝟙 σ_t`, asserting the
    /// reconstruction identity `∂σ_t/∂t = -d_L α_t` (a consequence of
    /// closedness under the locked conventions; its failure would signal a
    /// convention inconsistency, hence the dedicated error).
    pub fn moser_alpha(&self) -> Result<LForm, MoserError> {
        let iota_one = self.sigma.contract(&Derivation::identity(&self.chart_t));
        let alpha = dt_lform(&iota_one, self.t_idx).neg();
        let reconstruction = dt_lform(&self.sigma, self.t_idx).add(&alpha.d_l());
        if !reconstruction.is_zero() {
            return Err(MoserError::ReconstructionFailed);
        }
        Ok(alpha)
    }

    /// The Moser derivation `Δ_t = -J_t♯(α_t)` as a symbolic derivation on
    /// the extended chart.
    pub fn moser_derivation_symbolic(&self) -> Result<Derivation, MoserError> {
        let alpha = self.moser_alpha()?;
        let jt = self.deformed_sharp_symbolic()?;
        let coords = jet_coords(&JetSection::from_lform(&alpha));
        let image = jt.mul_vec(&coords);
        let n = self.chart_t.dim();
        let mut comps = Vec::new();
        for (i, c) in image.iter().take(n).enumerate() {
            comps.push((vec![i], c.neg()));
        }
        let symbol = Multivector::from_components(&self.chart_t, 1, comps).expect("valid");
        Ok(Derivation::new(symbol, image[n].neg()))
    }

    /// The Moser derivation evaluated exactly at `(t0, point)`, as fiber
    /// coordinates over `(∂_1..∂_n, 𝟙)`.
    pub fn moser_derivation_at(
        &self,
        t0: &BigRational,
        point: &[BigRational],
    ) -> Result<Vec<BigRational>, MoserError> {
        let alpha = self.moser_alpha()?;
        let jt = self.deformed_sharp(t0, point)?;
        let vals = self.point_with_t(point, t0);
        let coords = jet_coords(&JetSection::from_lform(&alpha))
            .iter()
            .map(|c| c.eval(&vals))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(jt.mul_vec(&coords).into_iter().map(|x| -x).collect())
    }

    /// Exact singular times of the family at a point: rational roots of
    /// `det(id + σ_t♭∘J♯)` inside `[0, 1]`. Returns `None` when the
    /// determinant's integer coefficients are too large for exact root
    /// enumeration.
    pub fn singular_times(
        &self,
        point: &[BigRational],
    ) -> Result<Option<Vec<BigRational>>, MoserError> {
        let m = self.sharp_matrix_t();
        let s = self.sigma_flat_matrix();
        let one = ScalarExpr::one(&self.chart_t);
        let id = Matrix::identity(m.nrows(), &one);
        let det = id.add_mat(&s.matmul(&m)).det();
        // Substitute the point, keep t symbolic.
        let mut at_point = det;
        for (i, v) in self
            .point_with_t(point, &BigRational::zero())
            .iter()
            .enumerate()
        {
            if i == self.t_idx {
                continue;
            }
            at_point = at_point.substitute(i, v)?;
        }
        let roots = rational_roots(at_point.numerator(), self.t_idx);
        Ok(roots.map(|rs| {
            rs.into_iter()
                .filter(|r| !r.is_negative() && r <= &BigRational::from_integer(1.into()))
                .collect()
        }))
    }
}

/// Formal `t`-derivative of an `LForm`, coefficientwise.
fn dt_lform(omega: &LForm, t_idx: usize) -> LForm {
    let plain = coeffwise_partial(omega.plain(), t_idx);
    if omega.degree() == 0 {
        return LForm::from_plain(plain);
    }
    LForm::from_parts(plain, Some(coeffwise_partial(omega.jet(), t_idx))).expect("degrees kept")
}

fn coeffwise_partial(f: &DiffForm, t_idx: usize) -> DiffForm {
    let comps = f
        .components()
        .map(|(i, c)| (i.clone(), c.partial(t_idx)))
        .collect();
    DiffForm::from_components(f.chart(), f.degree(), comps).expect("same shape")
}

fn eval_matrix(
    m: &Matrix<ScalarExpr>,
    vals: &[BigRational],
) -> Result<Matrix<BigRational>, MoserError> {
    let mut out = Matrix::zeros(m.nrows(), m.ncols(), &BigRational::zero());
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            out[(i, j)] = m[(i, j)].eval(vals)?;
        }
    }
    Ok(out)
}

/// Rational roots of a polynomial in the single symbol `t_idx` (all other
/// symbols must be absent); `None` when coefficient factoring is
/// infeasible.
fn rational_roots(p: &Poly, t_idx: usize) -> Option<Vec<BigRational>> {
    if p.is_zero() {
        // Identically zero determinant: singular from the start.
        return Some(vec![BigRational::zero()]);
    }
    for i in 0..p.chart().num_symbols() {
        if i != t_idx && p.depends_on(i) {
            return None;
        }
    }
    let (prim, _) = p.primitive_integer();
    let deg = prim.degree_in(t_idx) as usize;
    let mut coeffs: Vec<BigRational> = vec![BigRational::zero(); deg + 1];
    for (m, c) in prim.terms_iter() {
        coeffs[m[t_idx] as usize] = c.clone();
    }
    let int_coeffs: Vec<BigInt> = coeffs.iter().map(|c| c.numer().clone()).collect();
    let a0 = int_coeffs.iter().find(|c| !c.is_zero())?.clone();
    let lead = int_coeffs[deg].clone();
    let limit = BigInt::from(1_000_000_000_000u64);
    if a0.abs() > limit || lead.abs() > limit {
        return None;
    }
    let trailing_order = int_coeffs.iter().position(|c| !c.is_zero()).unwrap_or(0);
    let mut roots = Vec::new();
    if trailing_order > 0 {
        roots.push(BigRational::zero());
    }
    for p_div in divisors(&a0) {
        for q_div in divisors(&lead) {
            for sign in [1i64, -1] {
                let cand = BigRational::new(&p_div * BigInt::from(sign), q_div.clone());
                if roots.contains(&cand) {
                    continue;
                }
                let mut acc = BigRational::zero();
                for c in int_coeffs.iter().rev() {
                    acc = acc * &cand + BigRational::from_integer(c.clone());
                }
                if acc.is_zero() {
                    roots.push(cand);
                }
            }
        }
    }
    roots.sort();
    Some(roots)
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut out = Vec::new();
    let mut d = BigInt::from(1);
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            out.push(d.clone());
            out.push(&n / &d);
        }
        d += 1;
    }
    out.sort();
    out.dedup();
    out
}

/// Outcome of the derivative verification: the exact symbolic identity and
/// the finite-difference cross-check.
#[derive(Debug, Clone)]
pub struct DerivativeReport {
    /// `dJ_t♯/dt = -J_t♯ ∘ (∂σ/∂t)♭ ∘ J_t♯` as rational matrices in the
    /// chart variables and `t`.
    pub exact_identity: bool,
    /// Max-entry deviation of the central finite difference from the exact
    /// derivative at `(t0, point)`.
    pub fd_deviation: BigRational,
}

/// Verifies the derivative identity of the deformed sharp map, both as an
/// exact identity of rational matrices in `t` and against a central finite
/// difference with step `h` at `(t0, point)`.
pub fn verify_moser_derivative(
    family: &DeformationFamily,
    t0: &BigRational,
    point: &[BigRational],
    h: &BigRational,
) -> Result<DerivativeReport, MoserError> {
    let jt = family.deformed_sharp_symbolic()?;
    let t_idx = family.t_index();
    // Exact: entrywise t-derivative against -J_t♯ (∂σ/∂t)♭ J_t♯.
    let mut lhs = jt.clone();
    for i in 0..lhs.nrows() {
        for j in 0..lhs.ncols() {
            lhs[(i, j)] = jt[(i, j)].partial(t_idx);
        }
    }
    let mut ds = family.sigma_flat_matrix();
    for i in 0..ds.nrows() {
        for j in 0..ds.ncols() {
            ds[(i, j)] = ds[(i, j)].partial(t_idx);
        }
    }
    let rhs = jt
        .matmul(&ds)
        .matmul(&jt)
        .scale(&ScalarExpr::from_int(family.chart_t(), -1));
    let exact_identity = lhs == rhs;
    // Finite difference against the exact derivative at the base point.
    let tp = t0 + h;
    let tm = t0 - h;
    let fp = family.deformed_sharp(&tp, point)?;
    let fm = family.deformed_sharp(&tm, point)?;
    let two_h = BigRational::from_integer(2.into()) * h;
    let vals = family.point_with_t(point, t0);
    let exact_at = eval_matrix(&lhs, &vals)?;
    let mut dev = BigRational::zero();
    for i in 0..fp.nrows() {
        for j in 0..fp.ncols() {
            let fd = (&fp[(i, j)] - &fm[(i, j)]) / &two_h;
            let d = (fd - &exact_at[(i, j)]).abs();
            if d > dev {
                dev = d;
            }
        }
    }
    Ok(DerivativeReport {
        exact_identity,
        fd_deviation: dev,
    })
}

/// One drift sample of the flow probe.
#[derive(Debug, Clone, Copy)]
pub struct DriftSample {
    pub t: f64,
    pub drift: f64,
}

/// Outcome of the numerical flow-invariance probe.
#[derive(Debug, Clone)]
pub struct FlowReport {
    /// Max-entry drift of `Φ_t^* J_t` from `J_0` over the trajectory.
    pub max_drift: f64,
    pub samples: Vec<DriftSample>,
}

/// Numerically verifies flow invariance of the deformation: under the
/// crate's contraction conventions the deformed tensor satisfies the
/// exact transport law `∂M_t/∂t = X(M_t) - DM_t - M_tDᵀ - fM_t` with
/// `(X, f)` the Moser derivation and `D` its linearization (checked
/// symbolically by the test suite), so integrating the reverse
/// trajectory `ẏ = -X` with frame transport `Ȧ = DA` and fiber factor
/// `ȧ = fa` makes `a·A·M_t(y_t)·Aᵀ` constant, equal to `J_0`.
///
/// The probe integrates with `steps` classical Runge–Kutta steps over
/// `t ∈ [0,1]` and reports the drift from `J_0` (exactly zero in theory;
/// the residual is scheme error).
pub fn flow_invariance_probe(
    family: &DeformationFamily,
    point: &[BigRational],
    steps: usize,
) -> Result<FlowReport, MoserError> {
    assert!(steps > 0, "at least one step");
    let n = family.base().chart().dim();
    let t_idx = family.t_index();
    let delta = family.moser_derivation_symbolic()?;
    let jt = family.deformed_sharp_symbolic()?;
    // Symbolic pieces for the coupled ODE: symbol components, their
    // Jacobian, and the gradient of the scalar part.
    let x_comp: Vec<ScalarExpr> = (0..n).map(|i| delta.symbol().coeff(&[i])).collect();
    let jac: Vec<Vec<ScalarExpr>> = x_comp
        .iter()
        .map(|c| (0..n).map(|j| c.partial(j)).collect())
        .collect();
    let grad_f: Vec<ScalarExpr> = (0..n).map(|j| delta.scalar().partial(j)).collect();

    let total_syms = family.chart_t().num_symbols();
    let mut vals = vec![0.0f64; total_syms];
    for (i, v) in point.iter().enumerate() {
        let idx = if i >= t_idx { i + 1 } else { i };
        vals[idx] = v.to_f64().ok_or(MoserError::Pole)?;
    }

    // Variational matrix, fiber-scaling gradient transport, and the log
    // of the fiber factor itself (J is L-valued, so its pullback carries
    // the factor a_t = exp(∫ f dt)).
    let mut v_mat = vec![vec![0.0f64; n]; n];
    for (i, row) in v_mat.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    let mut g_vec = vec![0.0f64; n];
    let mut log_a = 0.0f64;

    let j0 = {
        let mut v = vals.clone();
        v[t_idx] = 0.0;
        eval_rows_f64(&jt, &v, 0.0)?
    };

    let h = 1.0 / steps as f64;
    let mut samples = Vec::new();
    let mut max_drift = 0.0f64;
    let sample_every = (steps / 100).max(1);
    // Geometric coordinates occupy the leading symbol slots; parameters
    // (including t) come after.
    let geom: Vec<usize> = (0..n).collect();

    for step in 0..=steps {
        let t = step as f64 * h;
        vals[t_idx] = t;
        if step % sample_every == 0 || step == steps {
            let m_t = eval_rows_f64(&jt, &vals, t)?;
            // Transport frame A with Ȧ = D·A, D = [[∂X/∂x, 0],[∇fᵀ, 0]].
            let mut a = vec![vec![0.0f64; n + 1]; n + 1];
            for i in 0..n {
                a[i][..n].copy_from_slice(&v_mat[i]);
            }
            for j in 0..n {
                a[n][j] = g_vec[j];
            }
            a[n][n] = 1.0;
            let fiber_factor = log_a.exp();
            let mut drift = 0.0f64;
            for i in 0..=n {
                for j in 0..=n {
                    // a_t · (A M_t Aᵀ)_ij compared with J_0.
                    let mut acc = 0.0;
                    for k in 0..=n {
                        let mut inner = 0.0;
                        for l in 0..=n {
                            inner += m_t[k][l] * a[j][l];
                        }
                        acc += a[i][k] * inner;
                    }
                    acc *= fiber_factor;
                    let d = (acc - j0[i][j]).abs();
                    if !d.is_finite() {
                        return Err(MoserError::PoleOnTrajectory { t });
                    }
                    drift = drift.max(d);
                }
            }
            max_drift = max_drift.max(drift);
            samples.push(DriftSample { t, drift });
        }
        if step == steps {
            break;
        }
        // One classical RK4 step of the coupled system (x, V, g, log a).
        type State = (Vec<f64>, Vec<Vec<f64>>, Vec<f64>);
        let deriv = |vals: &[f64], v_mat: &[Vec<f64>]| -> Result<State, MoserError> {
            let t_here = vals[t_idx];
            // Reverse trajectory: ẏ = -X(y, t).
            let dx: Vec<f64> = x_comp.iter().map(|c| -c.eval_f64(vals)).collect();
            if dx.iter().any(|x| !x.is_finite()) {
                return Err(MoserError::PoleOnTrajectory { t: t_here });
            }
            let jmat: Vec<Vec<f64>> = jac
                .iter()
                .map(|row| row.iter().map(|c| c.eval_f64(vals)).collect())
                .collect();
            let mut dv = vec![vec![0.0f64; n]; n];
            for i in 0..n {
                for j in 0..n {
                    let mut acc = 0.0;
                    for k in 0..n {
                        acc += jmat[i][k] * v_mat[k][j];
                    }
                    dv[i][j] = acc;
                }
            }
            let gf: Vec<f64> = grad_f.iter().map(|c| c.eval_f64(vals)).collect();
            let mut dg = vec![0.0f64; n];
            for j in 0..n {
                let mut acc = 0.0;
                for k in 0..n {
                    acc += v_mat[k][j] * gf[k];
                }
                dg[j] = acc;
            }
            Ok((dx, dv, dg))
        };
        let advance = |vals: &[f64],
                       v: &[Vec<f64>],
                       g: &[f64],
                       d: &State,
                       factor: f64,
                       t_new: f64|
         -> State {
            let (dx, dv, dg) = d;
            let mut nv = vals.to_vec();
            for (a, &gi) in geom.iter().enumerate() {
                nv[gi] += factor * dx[a];
            }
            nv[t_idx] = t_new;
            let mut nmat = v.to_vec();
            for i in 0..n {
                for j in 0..n {
                    nmat[i][j] += factor * dv[i][j];
                }
            }
            let mut ng = g.to_vec();
            for j in 0..n {
                ng[j] += factor * dg[j];
            }
            (nv, nmat, ng)
        };

        let f_scalar = |vals: &[f64]| delta.scalar().eval_f64(vals);
        let k1 = deriv(&vals, &v_mat)?;
        let f1 = f_scalar(&vals);
        let (v2, m2, _) = advance(&vals, &v_mat, &g_vec, &k1, h / 2.0, t + h / 2.0);
        let k2 = deriv(&v2, &m2)?;
        let f2 = f_scalar(&v2);
        let (v3, m3, _) = advance(&vals, &v_mat, &g_vec, &k2, h / 2.0, t + h / 2.0);
        let k3 = deriv(&v3, &m3)?;
        let f3 = f_scalar(&v3);
        let (v4, m4, _) = advance(&vals, &v_mat, &g_vec, &k3, h, t + h);
        let k4 = deriv(&v4, &m4)?;
        let f4 = f_scalar(&v4);
        if ![f1, f2, f3, f4].iter().all(|x| x.is_finite()) {
            return Err(MoserError::PoleOnTrajectory { t });
        }
        log_a += h / 6.0 * (f1 + 2.0 * f2 + 2.0 * f3 + f4);
        for (a, &gi) in geom.iter().enumerate() {
            vals[gi] += h / 6.0 * (k1.0[a] + 2.0 * k2.0[a] + 2.0 * k3.0[a] + k4.0[a]);
        }
        for i in 0..n {
            for j in 0..n {
                v_mat[i][j] +=
                    h / 6.0 * (k1.1[i][j] + 2.0 * k2.1[i][j] + 2.0 * k3.1[i][j] + k4.1[i][j]);
            }
        }
        for j in 0..n {
            g_vec[j] += h / 6.0 * (k1.2[j] + 2.0 * k2.2[j] + 2.0 * k3.2[j] + k4.2[j]);
        }
    }
    Ok(FlowReport { max_drift, samples })
}

fn eval_rows_f64(
    m: &Matrix<ScalarExpr>,
    vals: &[f64],
    t: f64,
) -> Result<Vec<Vec<f64>>, MoserError> {
    let mut out = vec![vec![0.0f64; m.ncols()]; m.nrows()];
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let x = m[(i, j)].eval_f64(vals);
            if !x.is_finite() {
                return Err(MoserError::PoleOnTrajectory { t });
            }
            out[i][j] = x;
        }
    }
    Ok(out)
}
