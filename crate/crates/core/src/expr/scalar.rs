//! Exact multivariate rational functions: the coefficient field for all
//! tensors.
//!
//! Canonical form: `gcd(num, den) = 1` and the denominator is monic in
//! graded-lex order. Equality of canonical forms is plain structural
//! equality, which is what makes every identity check in the crate
//! decidable.

use std::fmt;

use num::rational::BigRational;
use num::{One, Signed, Zero};

use thiserror::Error;

use super::chart::Chart;
use super::poly::{gcd, Poly};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExprError {
    #[error("division by an identically zero expression")]
    DivisionByZero,
    #[error("evaluation point lies on the zero set of a denominator")]
    Pole,
    #[error("expression depends on excluded variable `{0}`")]
    ResidualDependence(String),
    #[error("evaluation point must assign every chart symbol (missing `{0}`)")]
    MissingAssignment(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScalarExpr {
    num: Poly,
    den: Poly,
}

impl ScalarExpr {
    /// Canonicalize a fraction of polynomials. The only failure mode is an
    /// identically zero denominator.
    pub fn from_fraction(num: Poly, den: Poly) -> Result<ScalarExpr, ExprError> {
        if den.is_zero() {
            return Err(ExprError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(ScalarExpr {
                den: Poly::one(num.chart()),
                num,
            });
        }
        if den.is_one() {
            return Ok(ScalarExpr { num, den });
        }
        let g = gcd(&num, &den);
        let mut num = num.div_exact(&g).expect("gcd divides numerator");
        let mut den = den.div_exact(&g).expect("gcd divides denominator");
        let lc = den.leading_coeff();
        if !lc.is_one() {
            let inv = BigRational::one() / lc;
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        Ok(ScalarExpr { num, den })
    }

    pub fn from_poly(p: Poly) -> ScalarExpr {
        ScalarExpr {
            den: Poly::one(p.chart()),
            num: p,
        }
    }

    pub fn zero(chart: &Chart) -> ScalarExpr {
        ScalarExpr::from_poly(Poly::zero(chart))
    }

    pub fn one(chart: &Chart) -> ScalarExpr {
        ScalarExpr::from_poly(Poly::one(chart))
    }

    pub fn constant(chart: &Chart, c: BigRational) -> ScalarExpr {
        ScalarExpr::from_poly(Poly::constant(chart, c))
    }

    pub fn from_int(chart: &Chart, n: i64) -> ScalarExpr {
        ScalarExpr::from_poly(Poly::from_int(chart, n))
    }

    /// The chart symbol with the given index.
    pub fn symbol(chart: &Chart, idx: usize) -> ScalarExpr {
        ScalarExpr::from_poly(Poly::symbol(chart, idx))
    }

    /// The named chart variable or parameter.
    pub fn var(chart: &Chart, name: &str) -> Option<ScalarExpr> {
        chart.symbol_index(name).map(|i| Self::symbol(chart, i))
    }

    pub fn chart(&self) -> &Chart {
        self.num.chart()
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn add(&self, other: &ScalarExpr) -> ScalarExpr {
        assert_eq!(self.chart(), other.chart(), "chart mismatch");
        let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        let den = self.den.mul(&other.den);
        ScalarExpr::from_fraction(num, den).expect("nonzero denominators")
    }

    pub fn sub(&self, other: &ScalarExpr) -> ScalarExpr {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> ScalarExpr {
        ScalarExpr {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &ScalarExpr) -> ScalarExpr {
        assert_eq!(self.chart(), other.chart(), "chart mismatch");
        ScalarExpr::from_fraction(self.num.mul(&other.num), self.den.mul(&other.den))
            .expect("nonzero denominators")
    }

    pub fn div(&self, other: &ScalarExpr) -> Result<ScalarExpr, ExprError> {
        assert_eq!(self.chart(), other.chart(), "chart mismatch");
        if other.is_zero() {
            return Err(ExprError::DivisionByZero);
        }
        ScalarExpr::from_fraction(self.num.mul(&other.den), self.den.mul(&other.num))
    }

    pub fn scale(&self, c: &BigRational) -> ScalarExpr {
        ScalarExpr::from_fraction(self.num.scale(c), self.den.clone())
            .expect("denominator unchanged")
    }

    pub fn pow(&self, n: u32) -> ScalarExpr {
        ScalarExpr {
            num: self.num.pow(n),
            den: self.den.pow(n),
        }
    }

    /// Quotient-rule partial derivative with respect to symbol `idx`.
    pub fn partial(&self, idx: usize) -> ScalarExpr {
        let num = self
            .num
            .partial(idx)
            .mul(&self.den)
            .sub(&self.num.mul(&self.den.partial(idx)));
        let den = self.den.mul(&self.den);
        ScalarExpr::from_fraction(num, den).expect("square of nonzero denominator")
    }

    pub fn depends_on(&self, idx: usize) -> bool {
        self.num.depends_on(idx) || self.den.depends_on(idx)
    }

    /// Exact evaluation; the slice assigns every chart symbol in order.
    pub fn eval(&self, values: &[BigRational]) -> Result<BigRational, ExprError> {
        let d = self.den.eval(values);
        if d.is_zero() {
            return Err(ExprError::Pole);
        }
        Ok(self.num.eval(values) / d)
    }

    pub fn eval_f64(&self, values: &[f64]) -> f64 {
        self.num.eval_f64(values) / self.den.eval_f64(values)
    }

    /// Substitute a rational constant for one symbol; errors if the
    /// denominator vanishes identically on that locus.
    pub fn substitute(&self, idx: usize, value: &BigRational) -> Result<ScalarExpr, ExprError> {
        let den = self.den.substitute(idx, value);
        if den.is_zero() {
            return Err(ExprError::Pole);
        }
        ScalarExpr::from_fraction(self.num.substitute(idx, value), den)
    }

    /// Restrict to the locus where all the listed symbols vanish.
    pub fn restrict_zero(&self, idxs: &[usize]) -> Result<ScalarExpr, ExprError> {
        let zero = BigRational::zero();
        let mut out = self.clone();
        for &i in idxs {
            out = out.substitute(i, &zero)?;
        }
        Ok(out)
    }

    /// Transport onto a chart containing all used symbols; `map[i]` is the
    /// target index of this chart's symbol `i`.
    pub fn embed(&self, new_chart: &Chart, map: &[usize]) -> ScalarExpr {
        ScalarExpr {
            num: self.num.embed(new_chart, map),
            den: self.den.embed(new_chart, map),
        }
    }

    /// Full composition: substitute `images[i]` (an expression on another
    /// chart) for symbol `i`. Errors if a denominator collapses to zero.
    pub fn compose(&self, images: &[ScalarExpr]) -> Result<ScalarExpr, ExprError> {
        assert_eq!(images.len(), self.chart().num_symbols());
        let target = images
            .first()
            .map(|e| e.chart().clone())
            .expect("at least one symbol");
        let eval_poly = |p: &Poly| -> ScalarExpr {
            let mut acc = ScalarExpr::zero(&target);
            for (m, c) in &p.terms {
                let mut term = ScalarExpr::constant(&target, c.clone());
                for (i, &e) in m.0.iter().enumerate() {
                    if e > 0 {
                        term = term.mul(&images[i].pow(e));
                    }
                }
                acc = acc.add(&term);
            }
            acc
        };
        eval_poly(&self.num).div(&eval_poly(&self.den))
    }
}

// ---------------------------------------------------------------------------
// Canonical printing. The printer emits the same grammar the parser accepts
// and `parse(print(e)) == e` holds for every canonical expression.
// ---------------------------------------------------------------------------

fn rational_str(c: &BigRational) -> String {
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// One monomial with positive coefficient, e.g. `3*x^2*y`.
fn term_str(chart: &Chart, exps: &[u32], coeff: &BigRational) -> String {
    let mut pieces: Vec<String> = Vec::new();
    if !coeff.is_one() || exps.iter().all(|&e| e == 0) {
        pieces.push(rational_str(coeff));
    }
    for (i, &e) in exps.iter().enumerate() {
        match e {
            0 => {}
            1 => pieces.push(chart.symbol_name(i).to_owned()),
            _ => pieces.push(format!("{}^{}", chart.symbol_name(i), e)),
        }
    }
    pieces.join("*")
}

pub(crate) fn poly_str(p: &Poly) -> String {
    if p.is_zero() {
        return "0".to_owned();
    }
    let chart = p.chart().clone();
    let mut out = String::new();
    // Descending graded-lex order.
    for (i, (m, c)) in p.terms.iter().rev().enumerate() {
        let neg = c.is_negative();
        let abs = if neg { -c } else { c.clone() };
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else if neg {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        out.push_str(&term_str(&chart, &m.0, &abs));
    }
    out
}

/// True when the polynomial prints as a single product token that can stand
/// unparenthesized as a numerator.
fn single_term(p: &Poly) -> bool {
    p.num_terms() <= 1
}

/// True when the polynomial can stand unparenthesized as a denominator:
/// one monomial `x^k` in a single variable with coefficient 1.
fn bare_denominator(p: &Poly) -> bool {
    if p.num_terms() != 1 {
        return false;
    }
    let (m, c) = p.terms.iter().next().unwrap();
    c.is_one() && m.0.iter().filter(|&&e| e > 0).count() == 1
}

impl fmt::Display for ScalarExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", poly_str(&self.num));
        }
        let n = if single_term(&self.num) {
            poly_str(&self.num)
        } else {
            format!("({})", poly_str(&self.num))
        };
        let d = if bare_denominator(&self.den) {
            poly_str(&self.den)
        } else {
            format!("({})", poly_str(&self.den))
        };
        write!(f, "{}/{}", n, d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse::parse;
    use num::bigint::BigInt;

    fn chart() -> Chart {
        Chart::new("M", &["u", "q", "p"]).unwrap()
    }

    fn e(src: &str) -> ScalarExpr {
        parse(src, &chart()).unwrap()
    }

    #[test]
    fn field_inverse_cancels() {
        let c = chart();
        let u = ScalarExpr::var(&c, "u").unwrap();
        let inv = ScalarExpr::one(&c).div(&u).unwrap();
        assert!(inv.mul(&u).is_one());
    }

    #[test]
    fn add_inverse_is_zero() {
        let x = e("q^2*p - 1/u");
        assert!(x.add(&x.neg()).is_zero());
    }

    #[test]
    fn div_by_zero_expression() {
        let z = e("u - u");
        assert!(z.is_zero());
        assert_eq!(e("1").div(&z).unwrap_err(), ExprError::DivisionByZero);
    }

    #[test]
    fn partial_quotient_rule() {
        // d/du (1/u) = -1/u^2
        assert_eq!(e("1/u").partial(0), e("-1/u^2"));
        // d/dq p = 0
        assert!(e("p").partial(1).is_zero());
        // d/dp (p^2 q) = 2pq
        assert_eq!(e("p^2*q").partial(2), e("2*p*q"));
    }

    #[test]
    fn mixed_partials_commute() {
        let x = e("(u^2*q - p^3)/(u + q + 1)");
        assert_eq!(x.partial(0).partial(1), x.partial(1).partial(0));
    }

    #[test]
    fn eval_and_pole() {
        let two = BigRational::from(BigInt::from(2));
        let vals = vec![two.clone(), BigRational::zero(), BigRational::zero()];
        assert_eq!(
            e("1/u").eval(&vals).unwrap(),
            BigRational::new(1.into(), 2.into())
        );
        let at_zero = vec![BigRational::zero(); 3];
        assert_eq!(e("1/u").eval(&at_zero).unwrap_err(), ExprError::Pole);
        let vals = vec![BigRational::zero(), BigRational::from(BigInt::from(3)), two];
        assert_eq!(
            e("p^2*q").eval(&vals).unwrap(),
            BigRational::from(BigInt::from(12))
        );
    }

    #[test]
    fn canonicalization_cancels_gcd() {
        assert_eq!(e("(u^2-1)/(u-1)"), e("u+1"));
        assert!(e("p*q - q*p").is_zero());
    }

    #[test]
    fn canonicalization_idempotent() {
        let x = e("(u^2-1)/(2*u-2)");
        let y = ScalarExpr::from_fraction(x.numerator().clone(), x.denominator().clone()).unwrap();
        assert_eq!(x, y);
    }

    #[test]
    fn print_parse_roundtrip() {
        for src in [
            "1/u",
            "(u+1)/(u-1)",
            "-p^2*q + 1/2",
            "(q^2 - 2*q*p + p^2)/(u^2*q)",
            "0",
            "-1/u^2",
            "3/4",
        ] {
            let x = e(src);
            let printed = x.to_string();
            assert_eq!(
                parse(&printed, &chart()).unwrap(),
                x,
                "roundtrip of {src} via {printed}"
            );
        }
    }

    #[test]
    fn restrict_zero_detects_pole() {
        let x = e("1/(q + p)");
        assert_eq!(x.restrict_zero(&[1, 2]).unwrap_err(), ExprError::Pole);
        let y = e("(q + u)/(u + 1)");
        assert_eq!(y.restrict_zero(&[1]).unwrap(), e("u/(u+1)"));
    }
}
