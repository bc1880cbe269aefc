use serde::{Deserialize, Serialize};

use super::spec::{OperatorSpec, OperatorSpecFile, SCHEMA_VERSION};
use crate::dilation::{
    assemble_w, badea_model, general_model, three_concave_model, AssembledDilation, DilationModel, DilationPath,
    ShiftWeights,
};
use crate::error::{Error, Result};
use crate::hermitian::{eigh, HermitianMatrix};
use crate::operator::{beta_form, classify, Classification, OperatorCorner};
use crate::qsolver::{solve_q_fixed_point, solve_q_shift_diagonal, zero_solution, QMethod, QSolution};
use crate::tolerance::Tolerances;
use crate::verifier::{
    nonisomorphism_certificate, verify_dilation, Certificate, CheckResult, VerifyOptions, DEFAULT_SEED, DEFAULT_TRIALS,
};

/// Number of weights summarized in reports.
pub const REPORTED_WEIGHTS: usize = 8;
const FIXED_POINT_MAX_ITER: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    pub version: String,
    /// Set by the command-line tool; libraries leave it empty so reports are byte-stable.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
}

impl Default for Generator {
    fn default() -> Self {
        Self {
            name: "mdilate".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            timestamp: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QSummary {
    pub method: QMethod,
    pub q0: Option<f64>,
    pub stein_residual: f64,
    pub dominance_residual: f64,
    pub iterations: usize,
    pub monotone_defect: Option<f64>,
    pub window: usize,
}

impl QSummary {
    fn of(q: &QSolution) -> Self {
        Self {
            method: q.method,
            q0: q.q0(),
            stein_residual: q.stein_residual,
            dominance_residual: q.dominance_residual,
            iterations: q.iterations,
            monotone_defect: q.monotone_defect,
            window: q.window.valid_dim,
        }
    }
}

/// `S_j` by its real diagonal when it is diagonal, otherwise by its norm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightSummary {
    pub index: usize,
    pub norm: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagonal: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSummary {
    pub path: DilationPath,
    pub m: usize,
    pub h_dim: usize,
    pub hprime_dim: usize,
    pub n_blocks: usize,
    pub window: usize,
    /// `‖A‖` (spectral).
    pub a_norm: f64,
    /// `‖B‖` (spectral).
    pub b_norm: f64,
    pub ratio_bound_c: f64,
    pub rayleigh_bound: f64,
    pub welldef_residual: f64,
    pub weights: Vec<WeightSummary>,
}

fn spectral_norm(x: &HermitianMatrix) -> Result<f64> {
    let e = eigh(x)?;
    Ok(e.values.iter().fold(0.0f64, |a, v| a.max(v.abs())))
}

fn summarize(model: &DilationModel, weights: &ShiftWeights, n_blocks: usize) -> Result<ModelSummary> {
    let ws = weights
        .weights
        .iter()
        .take(REPORTED_WEIGHTS)
        .enumerate()
        .map(|(i, s)| {
            let diagonal = (s.as_matrix().off_diagonal_max() <= 1e-12).then(|| s.real_diagonal());
            Ok(WeightSummary {
                index: i + 1,
                norm: spectral_norm(s)?,
                diagonal,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ModelSummary {
        path: model.path,
        m: model.m,
        h_dim: model.h_dim(),
        hprime_dim: model.hprime_dim(),
        n_blocks,
        window: model.window.valid_dim,
        a_norm: spectral_norm(&model.a)?,
        b_norm: spectral_norm(&model.b)?,
        ratio_bound_c: model.ratio_bound_c,
        rayleigh_bound: model.rayleigh_bound,
        welldef_residual: model.welldef_residual,
        weights: ws,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub schema_version: u32,
    pub generator: Generator,
    pub input: serde_json::Value,
    pub seed: u64,
    pub trials: usize,
    pub classification: Classification,
    pub path: DilationPath,
    pub q_solution: Option<QSummary>,
    pub model: ModelSummary,
    /// Reference 2-isometric dilation, built alongside the general one for `m = 2`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference: Option<ModelSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
    pub checks: Vec<CheckResult>,
    pub overall: bool,
}

impl ReportFile {
    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Result of classification alone.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub schema_version: u32,
    pub generator: Generator,
    pub input: serde_json::Value,
    pub classification: Classification,
    /// Path the pipeline would take, if any.
    pub admissible_path: Option<DilationPath>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

/// Everything a run produces, including the dilations themselves.
#[derive(Debug, Clone)]
pub struct PipelineRun {
    pub report: ReportFile,
    pub dilation: AssembledDilation,
    pub weights: ShiftWeights,
    pub reference: Option<AssembledDilation>,
}

fn describe(c: &Classification) -> String {
    format!(
        "expansive: {} (λ_min β_1 = {:.3e}); {}-concave: {} (λ_min(−β_{}) = {:.3e}); Δ ⪰ 0: {} (λ_min = {:.3e})",
        c.expansive.holds,
        c.expansive.residual,
        c.m,
        c.m_concave.holds,
        c.m,
        c.m_concave.residual,
        c.delta_psd.holds,
        c.delta_psd.residual
    )
}

/// Decides the construction path, honoring an explicit override.
pub fn select_path(c: &Classification, requested: Option<DilationPath>) -> Result<DilationPath> {
    let general = c.expansive.holds && c.m_concave.holds && c.delta_psd.holds;
    let three = c.m == 3 && c.m_concave.holds && c.delta_psd.holds;
    let badea = c.m == 2 && c.expansive.holds && c.m_concave.holds;
    let fail = |why: &str| Err(Error::Precondition(format!("{why}: {}", describe(c))));
    match requested {
        Some(DilationPath::GeneralM) if general => Ok(DilationPath::GeneralM),
        Some(DilationPath::GeneralM) => fail("general_m needs an expansive m-concave operator"),
        Some(DilationPath::ThreeConcave) if three => Ok(DilationPath::ThreeConcave),
        Some(DilationPath::ThreeConcave) => fail("three_concave needs m = 3, β_3 ⪯ 0 and β_2 ⪰ 0"),
        Some(DilationPath::Badea2Iso) if badea => Ok(DilationPath::Badea2Iso),
        Some(DilationPath::Badea2Iso) => fail("badea_2iso needs an expansive 2-concave operator"),
        None if general => Ok(DilationPath::GeneralM),
        None if three => Ok(DilationPath::ThreeConcave),
        None => fail("no construction path applies"),
    }
}

/// `Q` with `T*QT = Q ⪰ β_{m−1}(T)`: the minimal diagonal solution for
/// shifts, monotone fixed-point iteration for finite operators.
pub fn solve_q(spec: &OperatorSpecFile, t: &OperatorCorner, m: usize, tol: &Tolerances) -> Result<QSolution> {
    match &spec.operator {
        OperatorSpec::Shift { rule } => {
            let horizon = spec.horizon();
            // β_{m−1} on a corner large enough to be exact through the horizon.
            let big = OperatorCorner::shift(rule.clone(), horizon + m + 1)?;
            let (delta, window) = beta_form(&big, m - 1)?;
            let diag = window.restrict(&delta).real_diagonal();
            solve_q_shift_diagonal(rule, &diag, horizon, t.dim(), None, tol)
        }
        OperatorSpec::Dense { .. } => {
            let (delta, window) = beta_form(t, m - 1)?;
            if delta.max_norm() <= tol.remark {
                return Ok(zero_solution(t.dim(), window));
            }
            solve_q_fixed_point(t, &delta, tol, FIXED_POINT_MAX_ITER)
        }
    }
}

fn input_echo(spec: &OperatorSpecFile) -> serde_json::Value {
    serde_json::to_value(spec).expect("spec serializes")
}

/// Classification plus the path the pipeline would take.
pub fn classify_spec(spec: &OperatorSpecFile) -> Result<ClassificationReport> {
    let tol = spec.tolerance_set()?;
    let t = spec.corner()?;
    let classification = classify(&t, spec.m, &tol)?;
    let (admissible_path, reason) = match select_path(&classification, spec.path) {
        Ok(p) => (Some(p), None),
        Err(e) => (None, Some(e.to_string())),
    };
    Ok(ClassificationReport {
        schema_version: SCHEMA_VERSION,
        generator: Generator::default(),
        input: input_echo(spec),
        classification,
        admissible_path,
        reason,
    })
}

/// classify → solve Q → build → assemble → verify.
pub fn run_pipeline(spec: &OperatorSpecFile) -> Result<ReportFile> {
    Ok(run_pipeline_full(spec)?.report)
}

pub fn run_pipeline_full(spec: &OperatorSpecFile) -> Result<PipelineRun> {
    spec.validate()?;
    let tol = spec.tolerance_set()?;
    let opts = VerifyOptions {
        seed: spec.seed.unwrap_or(DEFAULT_SEED),
        trials: DEFAULT_TRIALS,
    };
    let m = spec.m;
    let n_blocks = spec.truncation.n_blocks;
    let weight_horizon = (n_blocks - 1).max(REPORTED_WEIGHTS);
    let t = spec.corner()?;
    let classification = classify(&t, m, &tol)?;
    let path = select_path(&classification, spec.path)?;

    let q = match path {
        DilationPath::ThreeConcave => None,
        _ => Some(solve_q(spec, &t, m, &tol)?),
    };
    let (model, weights) = match path {
        DilationPath::GeneralM => general_model(&t, m, q.clone().unwrap(), weight_horizon, &tol)?,
        DilationPath::ThreeConcave => three_concave_model(&t, weight_horizon, &tol)?,
        DilationPath::Badea2Iso => badea_model(&t, q.clone().unwrap(), weight_horizon, &tol)?,
    };
    let dilation = assemble_w(&model, &weights, n_blocks)?;
    let mut checks = verify_dilation(&dilation, opts, &tol)?.checks;
    let summary = summarize(&model, &weights, n_blocks)?;

    let mut reference = None;
    let mut reference_summary = None;
    let mut certificate = None;
    if m == 2 && path == DilationPath::GeneralM {
        let (bm, bw) = badea_model(&t, q.clone().unwrap(), weight_horizon, &tol)?;
        let wb = assemble_w(&bm, &bw, n_blocks)?;
        for mut c in verify_dilation(&wb, opts, &tol)?.checks {
            c.name = format!("reference.{}", c.name);
            checks.push(c);
        }
        let (cert, check) = nonisomorphism_certificate(&dilation, &wb, &tol)?;
        checks.push(check);
        certificate = Some(cert);
        reference_summary = Some(summarize(&bm, &bw, n_blocks)?);
        reference = Some(wb);
    }

    let overall = checks.iter().all(|c| c.passed);
    let report = ReportFile {
        schema_version: SCHEMA_VERSION,
        generator: Generator::default(),
        input: input_echo(spec),
        seed: opts.seed,
        trials: opts.trials,
        classification,
        path,
        q_solution: q.as_ref().map(QSummary::of),
        model: summary,
        reference: reference_summary,
        certificate,
        checks,
        overall,
    };
    Ok(PipelineRun {
        report,
        dilation,
        weights,
        reference,
    })
}
