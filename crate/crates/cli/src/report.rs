//! Report documents emitted by every subcommand.

use equichar_core::activations::{Counterexample, EquivarianceReport};
use equichar_core::normalize::Obstruction;
use equichar_core::tclass::{maximal_group_name, GroupAnalysis, TSource};
use equichar_core::{maximal_family, ActivationFamily, Matrix, ScalingResult, SubgroupClass};
use serde::Serialize;
use serde_json::Value;

/// Schema tag carried by every report.
pub const SCHEMA: &str = "equichar.report/v1";

/// Schema tag of basis export files.
pub const BASIS_SCHEMA: &str = "equichar.basis/v1";

/// Leading text of the warning attached to dense `T` verdicts.
pub const DENSITY_WARNING: &str = "density heuristic";

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Report {
    pub schema: &'static str,
    pub command: String,
    pub input: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classification: Option<ClassificationReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilyReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scaling: Option<ScalingReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub basis: Option<BasisSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verification: Option<VerificationReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorReport>,
    pub warnings: Vec<String>,
}

impl Report {
    pub fn new(command: &str, input: Value) -> Self {
        Report {
            schema: SCHEMA,
            command: command.to_string(),
            input,
            classification: None,
            family: None,
            scaling: None,
            basis: None,
            verification: None,
            error: None,
            warnings: Vec::new(),
        }
    }

    pub fn to_json(&self) -> String {
        crate::json::to_string(self)
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TClassReport {
    pub kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
}

impl From<SubgroupClass> for TClassReport {
    fn from(c: SubgroupClass) -> Self {
        TClassReport { kind: c.name(), b: c.base() }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ClassificationReport {
    pub monomial: bool,
    pub non_negative: bool,
    pub unit_row: bool,
    pub tclass: TClassReport,
    pub t_generators: Vec<f64>,
    pub t_source: String,
}

impl From<&GroupAnalysis> for ClassificationReport {
    fn from(a: &GroupAnalysis) -> Self {
        let c = &a.classification;
        let t_source = match a.t_source {
            TSource::MonomialGenerators => "monomial-generators".to_string(),
            TSource::Closure { order } => format!("closure(order={order})"),
            TSource::GeneratorsOnly => "generators-only".to_string(),
        };
        ClassificationReport {
            monomial: c.monomial,
            non_negative: c.non_negative,
            unit_row: c.unit_row,
            tclass: c.tclass.into(),
            t_generators: a.t_generators.values().to_vec(),
            t_source,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FamilyReport {
    pub kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    pub maximal_group: String,
}

impl FamilyReport {
    pub fn new(family: &ActivationFamily, n: usize) -> Self {
        FamilyReport { kind: family.name(), b: family.base(), maximal_group: maximal_group_name(family, n) }
    }

    pub fn from_analysis(a: &GroupAnalysis, n: usize) -> Self {
        Self::new(&maximal_family(&a.classification), n)
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ScalingReport {
    pub d: Vec<f64>,
    pub normalized_generators: Vec<Vec<Vec<f64>>>,
    pub components: Vec<Vec<usize>>,
}

impl From<&ScalingResult> for ScalingReport {
    fn from(s: &ScalingResult) -> Self {
        ScalingReport {
            d: s.d.clone(),
            normalized_generators: s.normalized_generators.iter().map(Matrix::to_rows).collect(),
            components: s.components.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BasisSummary {
    pub n: usize,
    pub k_in: usize,
    pub k_out: usize,
    pub group: String,
    pub dim_in: usize,
    pub dim_out: usize,
    pub count: usize,
    pub orbit_sizes: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub export: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CounterexampleReport {
    pub trial: usize,
    pub matrix_index: usize,
    pub x: Vec<f64>,
    pub residual: f64,
}

impl From<&Counterexample> for CounterexampleReport {
    fn from(c: &Counterexample) -> Self {
        CounterexampleReport { trial: c.trial, matrix_index: c.matrix_index, x: c.x.clone(), residual: c.residual }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct VerificationReport {
    pub activation: String,
    pub pass: bool,
    pub trials: usize,
    pub seed: u64,
    pub tol: f64,
    pub worst_residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<CounterexampleReport>,
}

impl VerificationReport {
    pub fn new(activation: String, seed: u64, tol: f64, r: &EquivarianceReport) -> Self {
        VerificationReport {
            activation,
            pass: r.pass,
            trials: r.trials,
            seed,
            tol,
            worst_residual: r.worst_residual,
            counterexample: r.counterexample.as_ref().map(Into::into),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ObstructionReport {
    pub generator: usize,
    pub from: usize,
    pub to: usize,
    pub log_weight: f64,
    pub discrepancy: f64,
    pub cycle: Vec<usize>,
}

impl From<&Obstruction> for ObstructionReport {
    fn from(o: &Obstruction) -> Self {
        ObstructionReport {
            generator: o.generator,
            from: o.from,
            to: o.to,
            log_weight: o.log_weight,
            discrepancy: o.discrepancy,
            cycle: o.cycle.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ErrorReport {
    pub kind: &'static str,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub obstruction: Option<ObstructionReport>,
}

/// Warnings implied by a classification.
pub fn classification_warnings(a: &GroupAnalysis, tol: f64, max_iter: usize) -> Vec<String> {
    let mut out = Vec::new();
    if a.classification.tclass.is_dense() {
        out.push(format!(
            "{DENSITY_WARNING}: T was declared dense because a real GCD of log|t| (tolerance {}, {max_iter} steps) \
             found no common base; float data cannot certify density",
            crate::json::fmt_g17(tol)
        ));
    }
    if a.t_source == TSource::GeneratorsOnly {
        out.push("closure incomplete or too large for subset enumeration; T was computed from the generators only".into());
    }
    out
}
