//! Subcommand implementations.
//!
//! Every command parses and validates its input (failures exit with code
//! 2), runs the verification, and produces a [`Report`] whose checks
//! decide between exit 0 (all pass) and 1 (a mathematical check failed).

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use jacobi_core::expr::{BigInt, BigRational};
use jacobi_core::homog::{dehomogenize, homogeneity_defect, homogenize, HomogeneousPoisson};
use jacobi_core::jacobi::jacobi_defect;
use jacobi_core::moser::{flow_invariance_probe, verify_moser_derivative, DeformationFamily};
use jacobi_core::omni::{
    classify_transversal, homogeneous_poisson_type_check, involutivity_check, OmniError,
    TransversalClass, TransversalSpec,
};
use jacobi_core::split::{
    assemble_contact, assemble_cosymplectic, assemble_homogeneous_poisson, check_contact,
    check_cosymplectic, check_homogeneous, theta, HomogeneousCase, SplitError,
};

use crate::emit;
use crate::input::{load_points_file, rational, InputError, ProblemFile};
use crate::report::Report;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(#[from] InputError),
    #[error("{0}")]
    Validation(String),
    #[error("cannot write output file: {0}")]
    Io(#[from] std::io::Error),
}

fn validation(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

/// Common pre-parsed inputs.
pub struct Inputs {
    pub path: PathBuf,
    pub file: ProblemFile,
    pub out: Option<PathBuf>,
    pub points_override: Option<Vec<BTreeMap<String, String>>>,
}

impl Inputs {
    pub fn load(
        input: &Path,
        out: Option<&Path>,
        points: Option<&Path>,
    ) -> Result<Inputs, CliError> {
        let file = ProblemFile::load(input)?;
        let points_override = match points {
            Some(p) => Some(load_points_file(p)?),
            None => None,
        };
        Ok(Inputs {
            path: input.to_path_buf(),
            file,
            out: out.map(Path::to_path_buf),
            points_override,
        })
    }

    fn write_out(&self, contents: &str, report: &mut Report) -> Result<(), CliError> {
        if let Some(out) = &self.out {
            std::fs::write(out, contents)?;
            report.note(format!("emitted: {}", out.display()));
        }
        Ok(())
    }
}

fn defect_detail(label: &str, t: &jacobi_core::cartan::Multivector) -> String {
    format!("{label} = {t}")
}

pub fn cmd_check_jacobi(inputs: &Inputs) -> Result<Report, CliError> {
    let mut report = Report::new("check-jacobi", &inputs.path);
    let chart = inputs.file.chart()?;
    let jp = inputs.file.jacobi_pair(&chart)?;
    let (d3, d2) = jacobi_defect(&jp);
    report.check(
        "bivector_equation",
        d3.is_zero(),
        defect_detail("[Λ,Λ]+E∧Λ", &d3),
    );
    report.check(
        "reeb_invariance",
        d2.is_zero(),
        defect_detail("Lie_E Λ", &d2),
    );
    let inv = involutivity_check(&jp);
    report.check(
        "graph_involutivity",
        inv.involutive,
        format!("bracket left the graph for {} section pairs", inv.failures),
    );
    report.check(
        "involutivity_agrees_with_defect",
        inv.consistent(),
        String::new(),
    );
    Ok(report)
}

pub fn cmd_homogenize(inputs: &Inputs) -> Result<Report, CliError> {
    let mut report = Report::new("homogenize", &inputs.path);
    let chart = inputs.file.chart()?;
    let jp = inputs.file.jacobi_pair(&chart)?;
    let section = inputs
        .file
        .homogenize
        .as_ref()
        .ok_or(InputError::MissingSection("homogenize"))?;
    let hp = homogenize(&jp, &section.var).map_err(|e| validation(e.to_string()))?;
    let (h3, h2) = homogeneity_defect(&hp);
    report.check(
        "poisson_equation",
        h3.is_zero(),
        defect_detail("[π,π]", &h3),
    );
    report.check(
        "homogeneity",
        h2.is_zero(),
        defect_detail("Lie_Z π + π", &h2),
    );
    let out = emit::poisson_file(
        hp.chart(),
        hp.bivector(),
        hp.homogeneity(),
        Some(&section.var),
    );
    inputs.write_out(&out, &mut report)?;
    Ok(report)
}

pub fn cmd_dehomogenize(inputs: &Inputs) -> Result<Report, CliError> {
    let mut report = Report::new("dehomogenize", &inputs.path);
    let chart = inputs.file.chart()?;
    let section = inputs
        .file
        .dehomogenize
        .as_ref()
        .ok_or(InputError::MissingSection("dehomogenize"))?;
    let pref = inputs
        .file
        .poisson
        .as_ref()
        .ok_or(InputError::MissingSection("poisson"))?;
    let pi = inputs.file.multivector(&pref.pi, &chart)?;
    let z = inputs.file.multivector(&pref.z, &chart)?;
    if pi.degree() != 2 || z.degree() != 1 {
        return Err(validation(
            "poisson data must be a bivector and a vector field",
        ));
    }
    let hp = HomogeneousPoisson::new(pi, z);
    match dehomogenize(&hp, &section.var) {
        Err(e) => {
            report.check("homogeneous_shape", false, e.to_string());
        }
        Ok(jp) => {
            report.check("homogeneous_shape", true, String::new());
            let (d3, d2) = jacobi_defect(&jp);
            report.check(
                "bivector_equation",
                d3.is_zero(),
                defect_detail("[Λ,Λ]+E∧Λ", &d3),
            );
            report.check(
                "reeb_invariance",
                d2.is_zero(),
                defect_detail("Lie_E Λ", &d2),
            );
            let out = emit::pair_file(jp.chart(), jp.bivector(), jp.reeb());
            inputs.write_out(&out, &mut report)?;
        }
    }
    Ok(report)
}

pub fn cmd_split(inputs: &Inputs) -> Result<Report, CliError> {
    let mut report = Report::new("split", &inputs.path);
    let chart = inputs.file.chart()?;
    let section = inputs
        .file
        .split
        .as_ref()
        .ok_or(InputError::MissingSection("split"))?;
    if section.k == 0 {
        return Err(validation("split requires k ≥ 1"));
    }
    let split_err = |e: SplitError| match e {
        SplitError::Chart(_) | SplitError::ZeroFiber => validation(e.to_string()),
        other => validation(other.to_string()),
    };
    match section.kind.as_str() {
        "cosymplectic" => {
            let ln = section
                .lambda_n
                .as_ref()
                .ok_or_else(|| validation("cosymplectic split needs `lambda_n`"))?;
            let en = section
                .e_n
                .as_ref()
                .ok_or_else(|| validation("cosymplectic split needs `e_n`"))?;
            let lam_n = inputs.file.multivector(ln, &chart)?;
            let e_n = inputs.file.multivector(en, &chart)?;
            if lam_n.degree() != 2 || e_n.degree() != 1 {
                return Err(validation("Λ_N must be a bivector and E_N a vector field"));
            }
            let model = assemble_cosymplectic(&lam_n, &e_n, section.k).map_err(split_err)?;
            let check = check_cosymplectic(&model, &lam_n, &e_n);
            let (m3, m2) = jacobi_defect(&model.pair);
            report.check(
                "transversal_input_defect",
                check.input_defect_zero,
                String::new(),
            );
            report.check(
                "model_defect",
                check.model_defect_zero,
                format!(
                    "{}\n{}",
                    defect_detail("[Λ,Λ]+E∧Λ", &m3),
                    defect_detail("Lie_E Λ", &m2)
                ),
            );
            report.check("defect_equivalence", check.consistent(), String::new());
            let out = emit::split_model_file(
                model.chart(),
                model.pair.bivector(),
                model.pair.reeb(),
                &model.fiber_vars,
            );
            inputs.write_out(&out, &mut report)?;
        }
        "contact" => {
            let pn = section
                .pi_n
                .as_ref()
                .ok_or_else(|| validation("contact split needs `pi_n`"))?;
            let zn = section
                .z_n
                .as_ref()
                .ok_or_else(|| validation("contact split needs `z_n`"))?;
            let pi_n = inputs.file.multivector(pn, &chart)?;
            let z_n = inputs.file.multivector(zn, &chart)?;
            if pi_n.degree() != 2 || z_n.degree() != 1 {
                return Err(validation("π_N must be a bivector and Z_N a vector field"));
            }
            let model = assemble_contact(&pi_n, &z_n, section.k).map_err(split_err)?;
            let check = check_contact(&model, &pi_n, &z_n);
            let (m3, m2) = jacobi_defect(&model.pair);
            report.check(
                "transversal_input_defect",
                check.input_defect_zero,
                String::new(),
            );
            report.check(
                "model_defect",
                check.model_defect_zero,
                format!(
                    "{}\n{}",
                    defect_detail("[Λ,Λ]+E∧Λ", &m3),
                    defect_detail("Lie_E Λ", &m2)
                ),
            );
            report.check("defect_equivalence", check.consistent(), String::new());
            let out = emit::split_model_file(
                model.chart(),
                model.pair.bivector(),
                model.pair.reeb(),
                &model.fiber_vars,
            );
            inputs.write_out(&out, &mut report)?;
        }
        kind @ ("homogeneous_poisson_case_i" | "homogeneous_poisson_case_ii") => {
            let case = if kind.ends_with("case_i") {
                HomogeneousCase::I
            } else {
                HomogeneousCase::II
            };
            let pn = section
                .pi_n
                .as_ref()
                .ok_or_else(|| validation("homogeneous split needs `pi_n`"))?;
            let zn = section
                .z_n
                .as_ref()
                .ok_or_else(|| validation("homogeneous split needs `z_n`"))?;
            let pi_n = inputs.file.multivector(pn, &chart)?;
            let z_n = inputs.file.multivector(zn, &chart)?;
            if pi_n.degree() != 2 || z_n.degree() != 1 {
                return Err(validation("π_N must be a bivector and Z_N a vector field"));
            }
            let model =
                assemble_homogeneous_poisson(&pi_n, &z_n, section.k, case).map_err(split_err)?;
            let check = check_homogeneous(&model, &pi_n, &z_n);
            let (m3, m2) = homogeneity_defect(&model.structure);
            report.check(
                "transversal_input_defect",
                check.input_defect_zero,
                String::new(),
            );
            report.check(
                "model_defect",
                check.model_defect_zero,
                format!(
                    "{}\n{}",
                    defect_detail("[π,π]", &m3),
                    defect_detail("Lie_Z π + π", &m2)
                ),
            );
            report.check("defect_equivalence", check.consistent(), String::new());
            let out = emit::poisson_file(
                model.structure.chart(),
                model.structure.bivector(),
                model.structure.homogeneity(),
                None,
            );
            inputs.write_out(&out, &mut report)?;
        }
        other => {
            return Err(validation(format!(
                "unknown split kind `{other}` (expected cosymplectic, contact, \
                 homogeneous_poisson_case_i or homogeneous_poisson_case_ii)"
            )))
        }
    }
    Ok(report)
}

pub fn cmd_dirac(inputs: &Inputs) -> Result<Report, CliError> {
    let mut report = Report::new("dirac", &inputs.path);
    let chart = inputs.file.chart()?;
    let jp = inputs.file.jacobi_pair(&chart)?;
    let tdef = inputs
        .file
        .transversal
        .as_ref()
        .ok_or(InputError::MissingSection("transversal"))?;
    let offset = match &tdef.offset {
        Some(name) => Some(inputs.file.form(name, &chart)?),
        None => None,
    };
    let spec = TransversalSpec::new(&chart, &tdef.normal_vars, offset)
        .map_err(|e| validation(e.to_string()))?;
    let points = inputs
        .file
        .point_list(&chart, inputs.points_override.as_deref())?;
    for (i, pt) in points.iter().enumerate() {
        let rep = classify_transversal(&jp, &spec, pt).map_err(|e| match e {
            OmniError::PointOffSubmanifold(_)
            | OmniError::BadPoint { .. }
            | OmniError::TransversalityFailure { .. }
            | OmniError::Pole => validation(format!("point #{i}: {e}")),
            other => validation(format!("point #{i}: {other}")),
        })?;
        report.note(format!(
            "point #{i}: {}, rank(DL_N ∩ B_I(L)) = {}",
            rep.class, rep.intersection_rank
        ));
        report.check(
            format!("point{i}_backwards_isotropic"),
            rep.backwards.is_maximally_isotropic(),
            format!("backwards transform dimension {}", rep.backwards.dim()),
        );
        match rep.class {
            TransversalClass::Cosymplectic => {
                let th = theta(&jp, &spec, pt).map_err(|e| validation(e.to_string()))?;
                let rows: Vec<String> = (0..th.matrix.nrows())
                    .map(|r| {
                        let row: Vec<String> = (0..th.matrix.ncols())
                            .map(|c| th.matrix[(r, c)].to_string())
                            .collect();
                        format!("[{}]", row.join(", "))
                    })
                    .collect();
                report.check(
                    format!("point{i}_theta"),
                    th.is_antisymmetric() && th.is_nondegenerate(),
                    format!("Θ = {}", rows.join(" ")),
                );
            }
            TransversalClass::Cocontact => {
                let h = homogeneous_poisson_type_check(&rep.backwards)
                    .map_err(|e| validation(e.to_string()))?;
                let gen = h
                    .generator
                    .as_ref()
                    .map(|g| {
                        let names: Vec<String> = spec
                            .tangential_dirs()
                            .iter()
                            .map(|&d| format!("∂{}", chart.symbol_name(d)))
                            .chain(std::iter::once("𝟙".to_owned()))
                            .collect();
                        let zero = BigRational::from_integer(BigInt::from(0));
                        g.iter()
                            .zip(names)
                            .filter(|(c, _)| **c != zero)
                            .map(|(c, n)| format!("{c}·{n}"))
                            .collect::<Vec<_>>()
                            .join(" + ")
                    })
                    .unwrap_or_default();
                report.check(
                    format!("point{i}_homogeneous_poisson_type"),
                    h.is_homogeneous_poisson_type,
                    format!("generator: {gen}"),
                );
            }
            TransversalClass::Neither => {
                report.check(
                    format!("point{i}_rank"),
                    false,
                    format!(
                        "intersection rank {} is neither 0 nor 1",
                        rep.intersection_rank
                    ),
                );
            }
        }
    }
    Ok(report)
}

pub struct MoserOptions {
    pub steps: Option<usize>,
    pub tol: Option<f64>,
}

pub fn cmd_moser(inputs: &Inputs, opts: &MoserOptions) -> Result<Report, CliError> {
    let mut report = Report::new("moser", &inputs.path);
    let chart = inputs.file.chart()?;
    let jp = inputs.file.jacobi_pair(&chart)?;
    let dsec = inputs
        .file
        .deformation
        .as_ref()
        .ok_or(InputError::MissingSection("deformation"))?;
    let msec = inputs
        .file
        .moser
        .as_ref()
        .ok_or(InputError::MissingSection("moser"))?;
    let chart_t = chart
        .with_param_added(&dsec.t_var)
        .map_err(|e| validation(e.to_string()))?;
    let sigma = inputs.file.lform(&dsec.sigma, &chart_t)?;
    let family =
        DeformationFamily::new(jp, sigma, &dsec.t_var).map_err(|e| validation(e.to_string()))?;
    let t0 = rational(&msec.t0)?;
    let h = rational(&msec.h)?;
    if h == BigRational::from_integer(BigInt::from(0)) {
        return Err(validation("finite-difference step h must be nonzero"));
    }
    let steps = opts.steps.or(msec.flow_steps).unwrap_or(1000);
    let tol = opts.tol.unwrap_or(1e-6);
    let run_flow = msec.flow || opts.steps.is_some();
    let points = inputs
        .file
        .point_list(&chart, inputs.points_override.as_deref())?;
    let mut csv = String::from("t,drift\n");
    let mut wrote_csv_rows = false;
    for (i, pt) in points.iter().enumerate() {
        // Exact singularity scan over [0,1].
        match family.singular_times(pt) {
            Err(e) => return Err(validation(format!("point #{i}: {e}"))),
            Ok(None) => {
                report.note(format!(
                    "point #{i}: determinant too large for exact root scan; relying on stencil checks"
                ));
            }
            Ok(Some(roots)) if !roots.is_empty() => {
                report.check(
                    format!("point{i}_regular_family"),
                    false,
                    format!(
                        "deformation matrix singular at t = {}",
                        roots
                            .iter()
                            .map(BigRational::to_string)
                            .collect::<Vec<_>>()
                            .join(", ")
                    ),
                );
                continue;
            }
            Ok(Some(_)) => {
                report.check(format!("point{i}_regular_family"), true, String::new());
            }
        }
        let half_h = &h / BigRational::from_integer(2.into());
        let r1 = verify_moser_derivative(&family, &t0, pt, &h)
            .map_err(|e| validation(format!("point #{i}: {e}")))?;
        let r2 = verify_moser_derivative(&family, &t0, pt, &half_h)
            .map_err(|e| validation(format!("point #{i}: {e}")))?;
        report.check(
            format!("point{i}_exact_derivative_identity"),
            r1.exact_identity,
            "dJ_t♯/dt = -J_t♯ ∘ (∂σ/∂t)♭ ∘ J_t♯ as rational matrices in t".to_owned(),
        );
        report.note(format!(
            "point #{i}: fd deviation {} at h = {}, {} at h/2",
            r1.fd_deviation, h, r2.fd_deviation
        ));
        if run_flow {
            let flow = flow_invariance_probe(&family, pt, steps)
                .map_err(|e| validation(format!("point #{i}: {e}")))?;
            report.check(
                format!("point{i}_flow_drift"),
                flow.max_drift < tol,
                format!(
                    "max drift {:.3e} over {} steps (tolerance {:.1e})",
                    flow.max_drift, steps, tol
                ),
            );
            if !wrote_csv_rows {
                for s in &flow.samples {
                    csv.push_str(&format!("{:.6},{:.12e}\n", s.t, s.drift));
                }
                wrote_csv_rows = true;
            }
        }
    }
    if wrote_csv_rows {
        inputs.write_out(&csv, &mut report)?;
    }
    Ok(report)
}
