//! Shared sparse storage for antisymmetric tensors.
//!
//! Components are keyed by strictly increasing index sets over the chart's
//! geometric variables; absent keys are zero and explicit zeros are never
//! stored, so structural equality is canonical equality.

use std::collections::BTreeMap;

use num::rational::BigRational;
use num::Zero;

use crate::expr::{Chart, ExprError, ScalarExpr};

/// A strictly increasing set of coordinate indices.
pub type IndexSet = Vec<usize>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct SkewTable {
    pub chart: Chart,
    pub degree: usize,
    pub terms: BTreeMap<IndexSet, ScalarExpr>,
}

/// Sign of merging two disjoint, sorted index sets into one sorted set:
/// (-1)^(number of transpositions), `None` if they overlap.
pub(crate) fn merge_sign(a: &[usize], b: &[usize]) -> Option<(IndexSet, i32)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut inversions = 0usize;
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i] == b[j] {
            return None;
        }
        if a[i] < b[j] {
            out.push(a[i]);
            i += 1;
        } else {
            // b[j] jumps over the remaining entries of a.
            inversions += a.len() - i;
            out.push(b[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    let sign = if inversions % 2 == 0 { 1 } else { -1 };
    Some((out, sign))
}

impl SkewTable {
    pub fn zero(chart: &Chart, degree: usize) -> SkewTable {
        SkewTable {
            chart: chart.clone(),
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Accumulate `coeff` on a strictly increasing index set.
    pub fn insert(&mut self, idxs: IndexSet, coeff: ScalarExpr) {
        debug_assert_eq!(idxs.len(), self.degree);
        debug_assert!(idxs.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(idxs.iter().all(|&i| i < self.chart.dim()));
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(idxs) {
            Entry::Vacant(e) => {
                e.insert(coeff);
            }
            Entry::Occupied(mut e) => {
                let s = e.get().add(&coeff);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    /// Accumulate on an arbitrary index tuple, antisymmetrizing: repeated
    /// indices are dropped, the permutation sign is absorbed into the
    /// coefficient.
    pub fn insert_unsorted(&mut self, idxs: &[usize], coeff: ScalarExpr) {
        let mut sorted: Vec<usize> = idxs.to_vec();
        // Bubble sort while tracking the permutation sign; index sets are
        // tiny so quadratic cost is irrelevant.
        let mut sign = 1i32;
        for i in 0..sorted.len() {
            for j in (i + 1..sorted.len()).rev() {
                if sorted[j] < sorted[j - 1] {
                    sorted.swap(j, j - 1);
                    sign = -sign;
                }
            }
        }
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return;
        }
        let c = if sign < 0 { coeff.neg() } else { coeff };
        self.insert(sorted, c);
    }

    pub fn add(&self, other: &SkewTable) -> SkewTable {
        assert_eq!(self.chart, other.chart, "chart mismatch");
        // Zero tensors of saturated degree (results of brackets on
        // degree-0 inputs) are compatible with any degree marker.
        if self.is_zero() && self.degree != other.degree {
            return other.clone();
        }
        if other.is_zero() && self.degree != other.degree {
            return self.clone();
        }
        assert_eq!(self.degree, other.degree, "degree mismatch");
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.insert(k.clone(), v.clone());
        }
        out
    }

    pub fn neg(&self) -> SkewTable {
        SkewTable {
            chart: self.chart.clone(),
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.clone(), v.neg()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &SkewTable) -> SkewTable {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &ScalarExpr) -> SkewTable {
        let mut out = SkewTable::zero(&self.chart, self.degree);
        for (k, v) in &self.terms {
            out.insert(k.clone(), v.mul(c));
        }
        out
    }

    pub fn scale_rat(&self, c: &BigRational) -> SkewTable {
        self.scale(&ScalarExpr::constant(&self.chart, c.clone()))
    }

    pub fn wedge(&self, other: &SkewTable) -> SkewTable {
        assert_eq!(self.chart, other.chart, "chart mismatch");
        let mut out = SkewTable::zero(&self.chart, self.degree + other.degree);
        for (ka, va) in &self.terms {
            for (kb, vb) in &other.terms {
                if let Some((merged, sign)) = merge_sign(ka, kb) {
                    let mut c = va.mul(vb);
                    if sign < 0 {
                        c = c.neg();
                    }
                    out.insert(merged, c);
                }
            }
        }
        out
    }

    /// Left interior derivative with respect to the coordinate direction
    /// `idx`: removes `idx` from each index set with the sign `(-1)^pos`.
    pub fn contract_first(&self, idx: usize) -> SkewTable {
        let mut out = SkewTable::zero(&self.chart, self.degree.saturating_sub(1));
        for (k, v) in &self.terms {
            if let Some(pos) = k.iter().position(|&i| i == idx) {
                let mut rest = k.clone();
                rest.remove(pos);
                let c = if pos % 2 == 0 { v.clone() } else { v.neg() };
                out.insert(rest, c);
            }
        }
        out
    }

    /// Coefficient-wise partial derivative in symbol `sym`.
    pub fn coeff_partial(&self, sym: usize) -> SkewTable {
        let mut out = SkewTable::zero(&self.chart, self.degree);
        for (k, v) in &self.terms {
            out.insert(k.clone(), v.partial(sym));
        }
        out
    }

    /// Exact evaluation of every coefficient at a point.
    pub fn eval(
        &self,
        values: &[BigRational],
    ) -> Result<BTreeMap<IndexSet, BigRational>, ExprError> {
        let mut out = BTreeMap::new();
        for (k, v) in &self.terms {
            let c = v.eval(values)?;
            if !c.is_zero() {
                out.insert(k.clone(), c);
            }
        }
        Ok(out)
    }

    /// Restrict coefficients to the zero locus of the listed variables.
    pub fn restrict_zero(&self, idxs: &[usize]) -> Result<SkewTable, ExprError> {
        let mut out = SkewTable::zero(&self.chart, self.degree);
        for (k, v) in &self.terms {
            out.insert(k.clone(), v.restrict_zero(idxs)?);
        }
        Ok(out)
    }

    /// Transport onto a chart containing this one; `map` sends symbol
    /// indices of `self.chart` to symbol indices of `new_chart` and must be
    /// strictly increasing on the geometric variables that occur in index
    /// sets.
    pub fn embed(&self, new_chart: &Chart, map: &[usize]) -> SkewTable {
        let mut out = SkewTable::zero(new_chart, self.degree);
        for (k, v) in &self.terms {
            let idxs: Vec<usize> = k.iter().map(|&i| map[i]).collect();
            let coeff = v.embed(new_chart, map);
            out.insert_unsorted(&idxs, coeff);
        }
        out
    }

    pub fn depends_on(&self, sym: usize) -> bool {
        self.terms.values().any(|v| v.depends_on(sym))
    }

    pub fn has_index(&self, idx: usize) -> bool {
        self.terms.keys().any(|k| k.contains(&idx))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merge_signs() {
        assert_eq!(merge_sign(&[0], &[1]), Some((vec![0, 1], 1)));
        assert_eq!(merge_sign(&[1], &[0]), Some((vec![0, 1], -1)));
        assert_eq!(merge_sign(&[0, 2], &[1]), Some((vec![0, 1, 2], -1)));
        assert_eq!(merge_sign(&[0, 1], &[1]), None);
        assert_eq!(merge_sign(&[], &[3]), Some((vec![3], 1)));
    }

    #[test]
    fn insert_unsorted_antisymmetrizes() {
        let chart = Chart::new("M", &["x", "y"]).unwrap();
        let one = ScalarExpr::one(&chart);
        let mut t = SkewTable::zero(&chart, 2);
        t.insert_unsorted(&[1, 0], one.clone());
        t.insert_unsorted(&[0, 1], one.clone());
        assert!(t.is_zero());
        let mut t = SkewTable::zero(&chart, 2);
        t.insert_unsorted(&[1, 1], one);
        assert!(t.is_zero());
    }
}
