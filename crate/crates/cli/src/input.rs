//! Problem-file parsing: JSON container with expression strings inside.
//!
//! The format is documented in `docs/file-format.md`. Every tensor is a
//! list of `[index-name list, expression string]` pairs over the file's
//! chart; expression strings use the grammar of the core parser.

use std::collections::BTreeMap;
use std::str::FromStr;

use serde::Deserialize;

use jacobi_core::cartan::{DiffForm, LForm, Multivector};
use jacobi_core::expr::{parse, BigRational, Chart};
use jacobi_core::jacobi::JacobiPair;

#[derive(Debug, thiserror::Error)]
pub enum InputError {
    #[error("cannot read input file: {0}")]
    Io(#[from] std::io::Error),
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid chart: {0}")]
    Chart(#[from] jacobi_core::expr::ChartError),
    #[error("file declares no `{0}` section required by this command")]
    MissingSection(&'static str),
    #[error("tensor `{0}` is not declared in the file")]
    MissingTensor(String),
    #[error("tensor `{name}`: expected type `{expected}`, found `{found}`")]
    WrongTensorType {
        name: String,
        expected: &'static str,
        found: String,
    },
    #[error("tensor `{name}`: unknown index variable `{var}`")]
    UnknownIndex { name: String, var: String },
    #[error("tensor `{name}`: {detail}")]
    BadTensor { name: String, detail: String },
    #[error("expression `{src}` in tensor `{name}`: {detail}")]
    BadExpr {
        name: String,
        src: String,
        detail: String,
    },
    #[error("point #{index}: {detail}")]
    BadPoint { index: usize, detail: String },
    #[error("invalid rational literal `{0}`")]
    BadRational(String),
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartDef {
    pub name: String,
    pub vars: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TensorDef {
    #[serde(rename = "type")]
    pub kind: String,
    pub degree: usize,
    #[serde(default)]
    pub components: Vec<(Vec<String>, String)>,
    /// Plain part of an `lform`.
    #[serde(default)]
    pub plain: Vec<(Vec<String>, String)>,
    /// `𝟙*∧` part of an `lform`.
    #[serde(default)]
    pub jet: Vec<(Vec<String>, String)>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JacobiRef {
    pub lambda: String,
    pub e: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PoissonRef {
    pub pi: String,
    pub z: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomogenizeDef {
    pub var: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplitDef {
    pub kind: String,
    pub k: usize,
    #[serde(default)]
    pub lambda_n: Option<String>,
    #[serde(default)]
    pub e_n: Option<String>,
    #[serde(default)]
    pub pi_n: Option<String>,
    #[serde(default)]
    pub z_n: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransversalDef {
    pub normal_vars: Vec<String>,
    /// Name of an optional degree-1 form tensor with the flat connection
    /// offsets.
    #[serde(default)]
    pub offset: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeformationDef {
    pub t_var: String,
    pub sigma: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MoserDef {
    pub t0: String,
    pub h: String,
    #[serde(default)]
    pub flow: bool,
    #[serde(default)]
    pub flow_steps: Option<usize>,
}

/// The parsed JSON container; tensors are decoded lazily against the chart
/// each command needs (the deformation form, for instance, lives on the
/// chart extended by the time parameter).
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub chart: ChartDef,
    #[serde(default)]
    pub tensors: BTreeMap<String, TensorDef>,
    #[serde(default)]
    pub jacobi: Option<JacobiRef>,
    #[serde(default)]
    pub poisson: Option<PoissonRef>,
    #[serde(default)]
    pub homogenize: Option<HomogenizeDef>,
    #[serde(default)]
    pub dehomogenize: Option<HomogenizeDef>,
    #[serde(default)]
    pub split: Option<SplitDef>,
    #[serde(default)]
    pub transversal: Option<TransversalDef>,
    #[serde(default)]
    pub deformation: Option<DeformationDef>,
    #[serde(default)]
    pub moser: Option<MoserDef>,
    #[serde(default)]
    pub points: Option<Vec<BTreeMap<String, String>>>,
}

impl ProblemFile {
    pub fn load(path: &std::path::Path) -> Result<ProblemFile, InputError> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn chart(&self) -> Result<Chart, InputError> {
        Ok(Chart::new(&self.chart.name, &self.chart.vars)?)
    }

    fn tensor(&self, name: &str) -> Result<&TensorDef, InputError> {
        self.tensors
            .get(name)
            .ok_or_else(|| InputError::MissingTensor(name.to_owned()))
    }

    fn decode_components(
        name: &str,
        chart: &Chart,
        degree: usize,
        comps: &[(Vec<String>, String)],
    ) -> Result<Vec<(Vec<usize>, jacobi_core::expr::ScalarExpr)>, InputError> {
        let mut out = Vec::with_capacity(comps.len());
        for (idxs, src) in comps {
            let mut indices = Vec::with_capacity(idxs.len());
            for v in idxs {
                let i = chart.var_index(v).ok_or_else(|| InputError::UnknownIndex {
                    name: name.to_owned(),
                    var: v.clone(),
                })?;
                indices.push(i);
            }
            let expr = parse(src, chart).map_err(|e| InputError::BadExpr {
                name: name.to_owned(),
                src: src.clone(),
                detail: e.to_string(),
            })?;
            out.push((indices, expr));
        }
        let _ = degree;
        Ok(out)
    }

    /// Decode a named multivector on the given chart.
    pub fn multivector(&self, name: &str, chart: &Chart) -> Result<Multivector, InputError> {
        let def = self.tensor(name)?;
        if def.kind != "multivector" {
            return Err(InputError::WrongTensorType {
                name: name.to_owned(),
                expected: "multivector",
                found: def.kind.clone(),
            });
        }
        let comps = Self::decode_components(name, chart, def.degree, &def.components)?;
        Multivector::from_components(chart, def.degree, comps).map_err(|e| InputError::BadTensor {
            name: name.to_owned(),
            detail: e.to_string(),
        })
    }

    /// Decode a named differential form on the given chart.
    pub fn form(&self, name: &str, chart: &Chart) -> Result<DiffForm, InputError> {
        let def = self.tensor(name)?;
        if def.kind != "form" {
            return Err(InputError::WrongTensorType {
                name: name.to_owned(),
                expected: "form",
                found: def.kind.clone(),
            });
        }
        let comps = Self::decode_components(name, chart, def.degree, &def.components)?;
        DiffForm::from_components(chart, def.degree, comps).map_err(|e| InputError::BadTensor {
            name: name.to_owned(),
            detail: e.to_string(),
        })
    }

    /// Decode a named element of the Der-complex on the given chart.
    pub fn lform(&self, name: &str, chart: &Chart) -> Result<LForm, InputError> {
        let def = self.tensor(name)?;
        if def.kind != "lform" {
            return Err(InputError::WrongTensorType {
                name: name.to_owned(),
                expected: "lform",
                found: def.kind.clone(),
            });
        }
        let plain_comps = Self::decode_components(name, chart, def.degree, &def.plain)?;
        let plain = DiffForm::from_components(chart, def.degree, plain_comps).map_err(|e| {
            InputError::BadTensor {
                name: name.to_owned(),
                detail: e.to_string(),
            }
        })?;
        let jet = if def.degree == 0 {
            None
        } else {
            let jet_comps = Self::decode_components(name, chart, def.degree - 1, &def.jet)?;
            Some(
                DiffForm::from_components(chart, def.degree - 1, jet_comps).map_err(|e| {
                    InputError::BadTensor {
                        name: name.to_owned(),
                        detail: e.to_string(),
                    }
                })?,
            )
        };
        LForm::from_parts(plain, jet).map_err(|e| InputError::BadTensor {
            name: name.to_owned(),
            detail: e.to_string(),
        })
    }

    /// The Jacobi pair referenced by the `jacobi` section.
    pub fn jacobi_pair(&self, chart: &Chart) -> Result<JacobiPair, InputError> {
        let r = self
            .jacobi
            .as_ref()
            .ok_or(InputError::MissingSection("jacobi"))?;
        let lam = self.multivector(&r.lambda, chart)?;
        let e = self.multivector(&r.e, chart)?;
        if lam.degree() != 2 {
            return Err(InputError::BadTensor {
                name: r.lambda.clone(),
                detail: "Λ must have degree 2".into(),
            });
        }
        if e.degree() != 1 {
            return Err(InputError::BadTensor {
                name: r.e.clone(),
                detail: "E must have degree 1".into(),
            });
        }
        Ok(JacobiPair::new(lam, e))
    }

    /// Evaluation points, either from the file or an override list.
    pub fn point_list(
        &self,
        chart: &Chart,
        overrides: Option<&[BTreeMap<String, String>]>,
    ) -> Result<Vec<Vec<BigRational>>, InputError> {
        let raw = match overrides {
            Some(p) => p,
            None => self
                .points
                .as_deref()
                .ok_or(InputError::MissingSection("points"))?,
        };
        raw.iter()
            .enumerate()
            .map(|(index, map)| decode_point(chart, map, index))
            .collect()
    }
}

pub fn decode_point(
    chart: &Chart,
    map: &BTreeMap<String, String>,
    index: usize,
) -> Result<Vec<BigRational>, InputError> {
    let mut out = Vec::with_capacity(chart.num_symbols());
    for i in 0..chart.num_symbols() {
        let name = chart.symbol_name(i);
        let raw = map.get(name).ok_or_else(|| InputError::BadPoint {
            index,
            detail: format!("missing coordinate `{name}`"),
        })?;
        out.push(rational(raw)?);
    }
    for key in map.keys() {
        if chart.symbol_index(key).is_none() {
            return Err(InputError::BadPoint {
                index,
                detail: format!("unknown coordinate `{key}`"),
            });
        }
    }
    Ok(out)
}

pub fn rational(src: &str) -> Result<BigRational, InputError> {
    BigRational::from_str(src.trim()).map_err(|_| InputError::BadRational(src.to_owned()))
}

pub fn load_points_file(
    path: &std::path::Path,
) -> Result<Vec<BTreeMap<String, String>>, InputError> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}
