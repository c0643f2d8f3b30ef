//! The Schouten–Nijenhuis bracket on multivector fields.
//!
//! Writing a degree-k multivector as a polynomial in odd coordinate symbols
//! `ξ_i = ∂/∂x_i`, the bracket is the canonical odd Poisson bracket
//!
//! ```text
//! [F, G] = Σ_i (-1)^{f-1} (∂F/∂ξ_i) ∧ (∂G/∂x_i)  -  (∂F/∂x_i) ∧ (∂G/∂ξ_i)
//! ```
//!
//! with left ξ-derivatives, where `f = deg F`. This sign table gives
//!
//! * `[X, Y]` = the Lie bracket of vector fields,
//! * `[X, g]` = `X(g)`,
//! * `[X, P]` = the Lie derivative of `P` along `X`,
//! * graded antisymmetry `[F,G] = -(-1)^{(f-1)(g-1)}[G,F]`,
//! * the graded Jacobi identity, and
//! * Leibniz `[F, G∧H] = [F,G]∧H + (-1)^{(f-1)g} G∧[F,H]`.
//!
//! The full table and its anchors are documented in `docs/conventions.md`.

use super::components::SkewTable;
use super::multivector::Multivector;

/// Add `t` into `acc`, tolerating degree-marker mismatches on empty tables.
fn accumulate(acc: &mut SkewTable, t: SkewTable) {
    if t.is_zero() {
        return;
    }
    debug_assert_eq!(acc.degree, t.degree);
    *acc = acc.add(&t);
}

/// Schouten–Nijenhuis bracket of two multivector fields.
pub fn schouten(p: &Multivector, q: &Multivector) -> Multivector {
    assert_eq!(p.chart(), q.chart(), "chart mismatch");
    let chart = p.chart().clone();
    let f = p.degree();
    let g = q.degree();
    let out_degree = (f + g).saturating_sub(1);
    let mut out = SkewTable::zero(&chart, out_degree);
    let sign1_neg = f % 2 == 0; // (-1)^{f-1} is -1 for even f
    for i in 0..chart.dim() {
        // (∂F/∂ξ_i) ∧ (∂G/∂x_i)
        let fa = p.0.contract_first(i);
        if !fa.is_zero() {
            let gb = q.0.coeff_partial(i);
            if !gb.is_zero() {
                let t = fa.wedge(&gb);
                accumulate(&mut out, if sign1_neg { t.neg() } else { t });
            }
        }
        // (∂F/∂x_i) ∧ (∂G/∂ξ_i)
        let fb = p.0.coeff_partial(i);
        if !fb.is_zero() {
            let ga = q.0.contract_first(i);
            if !ga.is_zero() {
                accumulate(&mut out, fb.wedge(&ga).neg());
            }
        }
    }
    Multivector(out)
}

/// Lie derivative of a multivector field along a vector field.
pub fn lie_multivector(x: &Multivector, p: &Multivector) -> Multivector {
    assert_eq!(x.degree(), 1, "Lie derivative needs a degree-1 field");
    schouten(x, p)
}
