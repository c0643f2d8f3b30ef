//! Coordinate charts: named, ordered lists of variables.
//!
//! A chart fixes the variable order for every tensor and expression built on
//! it. Besides the geometric variables (which index tensor components) a
//! chart may carry *formal parameters* — extra symbols that live in the
//! coefficient field but have no associated coordinate direction. The
//! deformation time `t` of the Moser machinery is the one client.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ChartError {
    #[error("chart needs at least one variable")]
    Empty,
    #[error("duplicate symbol `{0}` in chart")]
    Duplicate(String),
    #[error("symbol `{0}` is not a valid identifier")]
    BadIdentifier(String),
    #[error("symbol `{0}` already present in chart")]
    Collision(String),
    #[error("variable `{0}` not found in chart")]
    NotFound(String),
}

#[derive(Debug, PartialEq, Eq)]
struct ChartInner {
    name: String,
    /// Geometric variables; their order is the index order of all tensors.
    vars: Vec<String>,
    /// Formal parameters appended after the variables in the symbol table.
    params: Vec<String>,
}

/// An immutable, cheaply clonable coordinate chart.
///
/// Symbol indices are stable for the chart's lifetime: variables occupy
/// `0..dim()`, parameters `dim()..num_symbols()`.
#[derive(Clone)]
pub struct Chart(Arc<ChartInner>);

impl PartialEq for Chart {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for Chart {}

impl fmt::Debug for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Chart({}; {:?}", self.0.name, self.0.vars)?;
        if !self.0.params.is_empty() {
            write!(f, "; params {:?}", self.0.params)?;
        }
        write!(f, ")")
    }
}

fn valid_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Chart {
    pub fn new<S: AsRef<str>>(name: &str, vars: &[S]) -> Result<Chart, ChartError> {
        Self::with_params(name, vars, &[] as &[&str])
    }

    pub fn with_params<S: AsRef<str>, T: AsRef<str>>(
        name: &str,
        vars: &[S],
        params: &[T],
    ) -> Result<Chart, ChartError> {
        if vars.is_empty() {
            return Err(ChartError::Empty);
        }
        let vars: Vec<String> = vars.iter().map(|s| s.as_ref().to_owned()).collect();
        let params: Vec<String> = params.iter().map(|s| s.as_ref().to_owned()).collect();
        let mut seen = std::collections::BTreeSet::new();
        for s in vars.iter().chain(params.iter()) {
            if !valid_identifier(s) {
                return Err(ChartError::BadIdentifier(s.clone()));
            }
            if !seen.insert(s.clone()) {
                return Err(ChartError::Duplicate(s.clone()));
            }
        }
        Ok(Chart(Arc::new(ChartInner {
            name: name.to_owned(),
            vars,
            params,
        })))
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    /// Number of geometric variables (the chart dimension).
    pub fn dim(&self) -> usize {
        self.0.vars.len()
    }

    /// Total number of symbols: variables plus formal parameters.
    pub fn num_symbols(&self) -> usize {
        self.0.vars.len() + self.0.params.len()
    }

    pub fn vars(&self) -> impl Iterator<Item = &str> {
        self.0.vars.iter().map(|s| s.as_str())
    }

    pub fn params(&self) -> impl Iterator<Item = &str> {
        self.0.params.iter().map(|s| s.as_str())
    }

    pub fn symbol_name(&self, idx: usize) -> &str {
        if idx < self.0.vars.len() {
            &self.0.vars[idx]
        } else {
            &self.0.params[idx - self.0.vars.len()]
        }
    }

    /// Index of a geometric variable.
    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.0.vars.iter().position(|v| v == name)
    }

    /// Index of any symbol, variable or parameter.
    pub fn symbol_index(&self, name: &str) -> Option<usize> {
        self.var_index(name).or_else(|| {
            self.0
                .params
                .iter()
                .position(|p| p == name)
                .map(|i| i + self.0.vars.len())
        })
    }

    pub fn is_param(&self, idx: usize) -> bool {
        idx >= self.0.vars.len()
    }

    /// New chart with one more geometric variable appended after the
    /// existing ones. Existing variable indices are unchanged; parameter
    /// indices shift up by one.
    pub fn extended(&self, var: &str) -> Result<Chart, ChartError> {
        if !valid_identifier(var) {
            return Err(ChartError::BadIdentifier(var.to_owned()));
        }
        if self.symbol_index(var).is_some() {
            return Err(ChartError::Collision(var.to_owned()));
        }
        let mut vars = self.0.vars.clone();
        vars.push(var.to_owned());
        Ok(Chart(Arc::new(ChartInner {
            name: self.0.name.clone(),
            vars,
            params: self.0.params.clone(),
        })))
    }

    /// New chart with a geometric variable removed. Returns the chart and
    /// the removed variable's old index.
    pub fn without_var(&self, var: &str) -> Result<(Chart, usize), ChartError> {
        let idx = self
            .var_index(var)
            .ok_or_else(|| ChartError::NotFound(var.to_owned()))?;
        if self.0.vars.len() == 1 {
            return Err(ChartError::Empty);
        }
        let mut vars = self.0.vars.clone();
        vars.remove(idx);
        Ok((
            Chart(Arc::new(ChartInner {
                name: self.0.name.clone(),
                vars,
                params: self.0.params.clone(),
            })),
            idx,
        ))
    }

    /// New chart with a formal parameter appended. Variable indices are
    /// unchanged.
    pub fn with_param_added(&self, param: &str) -> Result<Chart, ChartError> {
        if !valid_identifier(param) {
            return Err(ChartError::BadIdentifier(param.to_owned()));
        }
        if self.symbol_index(param).is_some() {
            return Err(ChartError::Collision(param.to_owned()));
        }
        let mut params = self.0.params.clone();
        params.push(param.to_owned());
        Ok(Chart(Arc::new(ChartInner {
            name: self.0.name.clone(),
            vars: self.0.vars.clone(),
            params,
        })))
    }

    /// Map from this chart's symbol indices into `other`'s, matching by
    /// name. Fails if some symbol of `self` is missing in `other`.
    pub fn embedding_into(&self, other: &Chart) -> Result<Vec<usize>, ChartError> {
        (0..self.num_symbols())
            .map(|i| {
                let n = self.symbol_name(i);
                other
                    .symbol_index(n)
                    .ok_or_else(|| ChartError::NotFound(n.to_owned()))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_and_lookup() {
        let c = Chart::new("M", &["u", "q", "p"]).unwrap();
        assert_eq!(c.dim(), 3);
        assert_eq!(c.var_index("q"), Some(1));
        assert_eq!(c.var_index("x"), None);
        assert_eq!(c.symbol_name(2), "p");
    }

    #[test]
    fn rejects_bad_charts() {
        assert_eq!(
            Chart::new("M", &[] as &[&str]).unwrap_err(),
            ChartError::Empty
        );
        assert_eq!(
            Chart::new("M", &["x", "x"]).unwrap_err(),
            ChartError::Duplicate("x".into())
        );
        assert!(matches!(
            Chart::new("M", &["2x"]).unwrap_err(),
            ChartError::BadIdentifier(_)
        ));
    }

    #[test]
    fn extension_keeps_existing_indices() {
        let c = Chart::new("M", &["q", "p"]).unwrap();
        let e = c.extended("u").unwrap();
        assert_eq!(e.var_index("q"), Some(0));
        assert_eq!(e.var_index("u"), Some(2));
        assert!(c.extended("q").is_err());
    }

    #[test]
    fn params_follow_vars() {
        let c = Chart::new("M", &["q", "p"]).unwrap();
        let ct = c.with_param_added("t").unwrap();
        assert_eq!(ct.dim(), 2);
        assert_eq!(ct.num_symbols(), 3);
        assert_eq!(ct.symbol_index("t"), Some(2));
        assert!(ct.is_param(2));
        assert_eq!(ct.var_index("t"), None);
    }
}
