//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Monomials are exponent vectors over the chart's symbol list, ordered by
//! graded lexicographic order (total degree first, then lexicographic in the
//! chart's variable order). The gcd is the classical content/primitive-part
//! recursion with a primitive pseudo-remainder sequence in the main
//! variable; gcds are normalized monic so canonical forms are unique.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

use super::chart::Chart;

/// Exponent vector; length always equals `chart.num_symbols()`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Mono(pub Vec<u32>);

impl Mono {
    fn total_degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    fn one(n: usize) -> Mono {
        Mono(vec![0; n])
    }

    fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn mul(&self, other: &Mono) -> Mono {
        Mono(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Exponentwise quotient, `None` if not divisible.
    fn div(&self, other: &Mono) -> Option<Mono> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Mono)
    }
}

// Graded lexicographic: higher total degree wins, ties broken by the first
// differing exponent (earlier chart variable with the larger exponent wins).
impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.total_degree().cmp(&other.total_degree()) {
            Ordering::Equal => self.0.cmp(&other.0),
            o => o,
        }
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial in canonical sparse form: no explicit zero coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    chart: Chart,
    pub(crate) terms: BTreeMap<Mono, BigRational>,
}

impl Poly {
    pub fn zero(chart: &Chart) -> Poly {
        Poly {
            chart: chart.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(chart: &Chart, c: BigRational) -> Poly {
        let mut p = Poly::zero(chart);
        if !c.is_zero() {
            p.terms.insert(Mono::one(chart.num_symbols()), c);
        }
        p
    }

    pub fn one(chart: &Chart) -> Poly {
        Poly::constant(chart, BigRational::one())
    }

    pub fn from_int(chart: &Chart, n: i64) -> Poly {
        Poly::constant(chart, BigRational::from(BigInt::from(n)))
    }

    /// The symbol `x_idx` as a polynomial.
    pub fn symbol(chart: &Chart, idx: usize) -> Poly {
        assert!(idx < chart.num_symbols(), "symbol index out of range");
        let mut exps = vec![0u32; chart.num_symbols()];
        exps[idx] = 1;
        let mut p = Poly::zero(chart);
        p.terms.insert(Mono(exps), BigRational::one());
        p
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .map(|(m, c)| m.is_one() && c.is_one())
                .unwrap_or(false)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn insert(&mut self, m: Mono, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let s = e.get() + c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        assert_eq!(self.chart, other.chart, "chart mismatch");
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly {
            chart: self.chart.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        assert_eq!(self.chart, other.chart, "chart mismatch");
        let mut out = Poly::zero(&self.chart);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.insert(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.chart);
        }
        Poly {
            chart: self.chart.clone(),
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut out = Poly::one(&self.chart);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                out = out.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        out
    }

    /// Leading term under graded lex; `None` for the zero polynomial.
    fn leading(&self) -> Option<(&Mono, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> BigRational {
        self.leading()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(BigRational::zero)
    }

    pub fn total_degree(&self) -> u64 {
        self.terms
            .keys()
            .map(|m| m.total_degree())
            .max()
            .unwrap_or(0)
    }

    pub fn degree_in(&self, idx: usize) -> u32 {
        self.terms.keys().map(|m| m.0[idx]).max().unwrap_or(0)
    }

    pub fn depends_on(&self, idx: usize) -> bool {
        self.terms.keys().any(|m| m.0[idx] > 0)
    }

    /// Iterate `(exponent vector, coefficient)` pairs in ascending
    /// graded-lex order.
    pub fn terms_iter(&self) -> impl Iterator<Item = (&[u32], &BigRational)> {
        self.terms.iter().map(|(m, c)| (m.0.as_slice(), c))
    }

    pub fn partial(&self, idx: usize) -> Poly {
        let mut out = Poly::zero(&self.chart);
        for (m, c) in &self.terms {
            let e = m.0[idx];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[idx] = e - 1;
            out.insert(Mono(exps), c * BigRational::from(BigInt::from(e)));
        }
        out
    }

    pub fn eval(&self, values: &[BigRational]) -> BigRational {
        assert_eq!(values.len(), self.chart.num_symbols());
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    term *= &values[i];
                }
            }
            acc += term;
        }
        acc
    }

    pub fn eval_f64(&self, values: &[f64]) -> f64 {
        use num::ToPrimitive;
        let mut acc = 0.0;
        for (m, c) in &self.terms {
            let mut term = c.to_f64().unwrap_or(f64::NAN);
            for (i, &e) in m.0.iter().enumerate() {
                term *= values[i].powi(e as i32);
            }
            acc += term;
        }
        acc
    }

    /// Substitute the rational constant `value` for symbol `idx`.
    pub fn substitute(&self, idx: usize, value: &BigRational) -> Poly {
        let mut out = Poly::zero(&self.chart);
        for (m, c) in &self.terms {
            let e = m.0[idx];
            let mut exps = m.0.clone();
            exps[idx] = 0;
            let mut coeff = c.clone();
            for _ in 0..e {
                coeff *= value;
            }
            out.insert(Mono(exps), coeff);
        }
        out
    }

    /// Re-express on a new chart: symbol `i` of `self` becomes symbol
    /// `map[i]` of `new_chart`.
    pub fn embed(&self, new_chart: &Chart, map: &[usize]) -> Poly {
        assert_eq!(map.len(), self.chart.num_symbols());
        let n = new_chart.num_symbols();
        let mut out = Poly::zero(new_chart);
        for (m, c) in &self.terms {
            let mut exps = vec![0u32; n];
            for (i, &e) in m.0.iter().enumerate() {
                exps[map[i]] += e;
            }
            out.insert(Mono(exps), c.clone());
        }
        out
    }

    /// Exact division; `None` when `self` is not a multiple of `d`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        assert_eq!(self.chart, d.chart, "chart mismatch");
        assert!(!d.is_zero(), "division by the zero polynomial");
        let mut rem = self.clone();
        let mut quot = Poly::zero(&self.chart);
        let (dm, dc) = d.leading().map(|(m, c)| (m.clone(), c.clone())).unwrap();
        while !rem.is_zero() {
            let (rm, rc) = rem.leading().map(|(m, c)| (m.clone(), c.clone())).unwrap();
            let qm = rm.div(&dm)?;
            let qc = rc / &dc;
            let mut t = Poly::zero(&self.chart);
            t.terms.insert(qm, qc);
            quot = quot.add(&t);
            rem = rem.sub(&t.mul(d));
        }
        Some(quot)
    }

    /// View in the main variable `idx`: map from `idx`-degree to the
    /// coefficient polynomial (with the `idx` exponent zeroed).
    fn coeffs_in(&self, idx: usize) -> BTreeMap<u32, Poly> {
        let mut out: BTreeMap<u32, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.0[idx];
            let mut exps = m.0.clone();
            exps[idx] = 0;
            out.entry(e)
                .or_insert_with(|| Poly::zero(&self.chart))
                .insert(Mono(exps), c.clone());
        }
        out.retain(|_, p| !p.is_zero());
        out
    }

    /// Content with respect to the main variable `idx`: monic gcd of the
    /// `idx`-coefficients.
    fn content_in(&self, idx: usize) -> Poly {
        let mut g = Poly::zero(&self.chart);
        for p in self.coeffs_in(idx).values() {
            g = gcd(&g, p);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Divide by a scalar so the graded-lex leading coefficient is one.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => self.clone(),
            Some((_, c)) => {
                let inv = BigRational::one() / c;
                self.scale(&inv)
            }
        }
    }

    /// Clear rational denominators and integer content; leading coefficient
    /// made positive. Used by the expression printer.
    pub fn primitive_integer(&self) -> (Poly, BigRational) {
        if self.is_zero() {
            return (self.clone(), BigRational::one());
        }
        let mut denom_lcm = BigInt::one();
        for c in self.terms.values() {
            denom_lcm = num::integer::lcm(denom_lcm, c.denom().clone());
        }
        let mut numer_gcd = BigInt::zero();
        for c in self.terms.values() {
            let scaled = c.numer() * (&denom_lcm / c.denom());
            numer_gcd = num::integer::gcd(numer_gcd, scaled);
        }
        if numer_gcd.is_zero() {
            numer_gcd = BigInt::one();
        }
        let mut factor = BigRational::new(numer_gcd, denom_lcm);
        if self.leading_coeff().is_negative() {
            factor = -factor;
        }
        let inv = BigRational::one() / &factor;
        (self.scale(&inv), factor)
    }
}

/// First symbol index that actually occurs in `a` or `b`.
fn pick_main_var(a: &Poly, b: &Poly) -> Option<usize> {
    let n = a.chart.num_symbols();
    (0..n).find(|&i| a.depends_on(i) || b.depends_on(i))
}

/// Pseudo-remainder of `a` by `b` in the main variable `idx`
/// (up to a power of `lc_idx(b)`, which the primitive PRS discards).
fn pseudo_rem(a: &Poly, b: &Poly, idx: usize) -> Poly {
    let bc = b.coeffs_in(idx);
    let db = *bc.keys().next_back().expect("b must be nonzero");
    let lb = bc[&db].clone();
    let chart = a.chart.clone();
    let mut r = a.clone();
    loop {
        if r.is_zero() {
            return r;
        }
        let rc = r.coeffs_in(idx);
        let dr = *rc.keys().next_back().unwrap();
        if dr < db {
            return r;
        }
        let lr = rc[&dr].clone();
        // r <- lb*r - lr*x^(dr-db)*b  kills the leading idx-term.
        let shift = Poly::symbol(&chart, idx).pow(dr - db);
        r = r.mul(&lb).sub(&lr.mul(&shift).mul(b));
    }
}

/// Monic gcd of two polynomials over Q.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    assert_eq!(a.chart, b.chart, "chart mismatch");
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    // Nonzero constants are units.
    if a.is_constant() || b.is_constant() {
        return Poly::one(&a.chart);
    }
    let idx = match pick_main_var(a, b) {
        None => return Poly::one(&a.chart),
        Some(i) => i,
    };
    if !a.depends_on(idx) || !b.depends_on(idx) {
        // One side is free of the main variable: gcd divides that side's
        // content together with the other side's content.
        let ca = if a.depends_on(idx) {
            a.content_in(idx)
        } else {
            a.monic()
        };
        let cb = if b.depends_on(idx) {
            b.content_in(idx)
        } else {
            b.monic()
        };
        return gcd(&ca, &cb);
    }
    let ca = a.content_in(idx);
    let cb = b.content_in(idx);
    let mut pa = a.div_exact(&ca).expect("content divides");
    let mut pb = b.div_exact(&cb).expect("content divides");
    let c = gcd(&ca, &cb);
    // Primitive pseudo-remainder sequence in the main variable.
    if pa.degree_in(idx) < pb.degree_in(idx) {
        std::mem::swap(&mut pa, &mut pb);
    }
    while !pb.is_zero() {
        let r = pseudo_rem(&pa, &pb, idx);
        pa = pb;
        pb = if r.is_zero() {
            r
        } else if r.depends_on(idx) {
            let cr = r.content_in(idx);
            r.div_exact(&cr).expect("content divides")
        } else {
            // Degenerated to an idx-free polynomial: a nonzero one means the
            // gcd in the main variable is trivial.
            Poly::one(&a.chart)
        };
    }
    let g = if pa.depends_on(idx) {
        let cp = pa.content_in(idx);
        pa.div_exact(&cp).expect("content divides")
    } else {
        Poly::one(&a.chart)
    };
    c.mul(&g).monic()
}
