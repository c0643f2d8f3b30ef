//! Shared randomized-tensor generators for the integration suites.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use jacobi_core::cartan::{Derivation, DiffForm, LForm, Multivector};
use jacobi_core::expr::{rat, Chart, ScalarExpr};
use jacobi_core::jacobi::JacobiPair;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random polynomial with a few terms of total degree ≤ `max_deg` and
/// small integer coefficients.
pub fn rand_poly(chart: &Chart, r: &mut ChaCha8Rng, max_terms: usize, max_deg: u32) -> ScalarExpr {
    let mut acc = ScalarExpr::zero(chart);
    let terms = r.random_range(0..=max_terms);
    for _ in 0..terms {
        let c = loop {
            let c = r.random_range(-3i64..=3);
            if c != 0 {
                break c;
            }
        };
        let mut term = ScalarExpr::constant(chart, rat(c, 1));
        let deg = r.random_range(0..=max_deg);
        for _ in 0..deg {
            let v = r.random_range(0..chart.dim());
            term = term.mul(&ScalarExpr::symbol(chart, v));
        }
        acc = acc.add(&term);
    }
    acc
}

/// Random strictly increasing index set of the given size.
fn rand_index_set(chart: &Chart, size: usize, r: &mut ChaCha8Rng) -> Vec<usize> {
    let mut all: Vec<usize> = (0..chart.dim()).collect();
    for i in (1..all.len()).rev() {
        let j = r.random_range(0..=i);
        all.swap(i, j);
    }
    let mut set: Vec<usize> = all.into_iter().take(size).collect();
    set.sort_unstable();
    set
}

pub fn rand_multivector(
    chart: &Chart,
    degree: usize,
    r: &mut ChaCha8Rng,
    max_terms: usize,
    max_coeff_deg: u32,
) -> Multivector {
    let mut comps = Vec::new();
    for _ in 0..r.random_range(1..=max_terms) {
        comps.push((
            rand_index_set(chart, degree, r),
            rand_poly(chart, r, 2, max_coeff_deg),
        ));
    }
    Multivector::from_components(chart, degree, comps).expect("valid random tensor")
}

pub fn rand_form(
    chart: &Chart,
    degree: usize,
    r: &mut ChaCha8Rng,
    max_terms: usize,
    max_coeff_deg: u32,
) -> DiffForm {
    let mut comps = Vec::new();
    for _ in 0..r.random_range(1..=max_terms) {
        comps.push((
            rand_index_set(chart, degree, r),
            rand_poly(chart, r, 2, max_coeff_deg),
        ));
    }
    DiffForm::from_components(chart, degree, comps).expect("valid random form")
}

pub fn rand_lform(chart: &Chart, degree: usize, r: &mut ChaCha8Rng) -> LForm {
    let plain = rand_form(chart, degree, r, 2, 2);
    let jet = if degree == 0 {
        None
    } else {
        Some(rand_form(chart, degree - 1, r, 2, 2))
    };
    LForm::from_parts(plain, jet).expect("valid random element")
}

pub fn rand_derivation(chart: &Chart, r: &mut ChaCha8Rng) -> Derivation {
    Derivation::new(
        rand_multivector(chart, 1, r, 2, 2),
        rand_poly(chart, r, 2, 2),
    )
}

/// The pinned canonical contact pair on `(u, q, p)` built by hand, used as
/// a known-valid fixture.
pub fn contact_pair(chart: &Chart) -> JacobiPair {
    let p = ScalarExpr::symbol(chart, 2);
    let lam = Multivector::from_components(
        chart,
        2,
        vec![(vec![0, 2], p), (vec![1, 2], ScalarExpr::one(chart))],
    )
    .unwrap();
    JacobiPair::new(lam, Multivector::coordinate(chart, 0))
}

pub fn origin(chart: &Chart) -> Vec<jacobi_core::expr::BigRational> {
    vec![num_zero(); chart.num_symbols()]
}

pub fn num_zero() -> jacobi_core::expr::BigRational {
    rat(0, 1)
}

pub fn rand_point(chart: &Chart, r: &mut ChaCha8Rng) -> Vec<jacobi_core::expr::BigRational> {
    (0..chart.num_symbols())
        .map(|_| rat(r.random_range(-6i64..=6), r.random_range(1i64..=4)))
        .collect()
}
