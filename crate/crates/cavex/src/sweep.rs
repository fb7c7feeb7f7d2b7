//! Sweep orchestration and CSV/JSON emission.
//!
//! Rows are independent tasks evaluated in parallel and buffered in input
//! order; a failed row carries its error code without aborting the sweep.
//! CSV numbers use 17 significant digits so every double round-trips
//! bit-exactly.

use crate::configfile::DEFAULT_A_M;
use crate::forces::{force_ratio, total_force, ForceError, APEX_CUTOFF_EPS};
use crate::geometry::{validate, CavityConfig, GeometryError, WingSide};
use crate::kernel::{classical_casimir_pressure, specific_force, KernelError, PhysicalConstants, PHYSICAL_CONSTANTS};
use crate::quad::QuadError;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::io::Write;
use thiserror::Error;

/// The quantity a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweptQuantity {
    /// Position r along the wings (m): a pointwise pressure profile.
    PointR,
    /// Wing length R (m).
    WingLength,
    /// Opening angle phi (rad).
    Phi,
    /// Shift dx (m).
    Dx,
}

impl SweptQuantity {
    pub fn column_name(self) -> &'static str {
        match self {
            SweptQuantity::PointR => "r_over_R",
            SweptQuantity::WingLength => "R_m",
            SweptQuantity::Phi => "phi_rad",
            SweptQuantity::Dx => "dx_m",
        }
    }

    pub fn parse(token: &str) -> Option<Self> {
        match token {
            "r" => Some(SweptQuantity::PointR),
            "R" => Some(SweptQuantity::WingLength),
            "phi" => Some(SweptQuantity::Phi),
            "dx" => Some(SweptQuantity::Dx),
            _ => None,
        }
    }
}

/// Requested output quantities, in the fixed catalog order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum OutputKind {
    PX,
    PZ,
    FX,
    FZ,
    Ratio,
    WX,
    Torque,
}

impl OutputKind {
    pub const CATALOG_ORDER: [OutputKind; 7] = [
        OutputKind::PX,
        OutputKind::PZ,
        OutputKind::FX,
        OutputKind::FZ,
        OutputKind::Ratio,
        OutputKind::WX,
        OutputKind::Torque,
    ];

    pub fn is_pointwise(self) -> bool {
        matches!(self, OutputKind::PX | OutputKind::PZ)
    }

    /// Column labels this output expands to. Forces and pressures are
    /// emitted with explicit side labels; force outputs add the right+left
    /// total.
    pub fn columns(self) -> &'static [&'static str] {
        match self {
            OutputKind::PX => &["p_x_right", "p_x_left"],
            OutputKind::PZ => &["p_z_right", "p_z_left"],
            OutputKind::FX => &["f_x_right", "f_x_left", "f_x_total"],
            OutputKind::FZ => &["f_z_right", "f_z_left", "f_z_total"],
            OutputKind::Ratio => &["ratio"],
            OutputKind::WX => &["w_x"],
            OutputKind::Torque => &["torque_y"],
        }
    }

    pub fn parse(token: &str) -> Option<Self> {
        match token {
            "p_x" => Some(OutputKind::PX),
            "p_z" => Some(OutputKind::PZ),
            "f_x" => Some(OutputKind::FX),
            "f_z" => Some(OutputKind::FZ),
            "ratio" => Some(OutputKind::Ratio),
            "w_x" => Some(OutputKind::WX),
            "torque" => Some(OutputKind::Torque),
            _ => None,
        }
    }
}

/// A constant reference column appended after the requested outputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceColumn {
    pub name: String,
    pub value: f64,
}

/// A fully specified sweep: one varied quantity against a base scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub swept: SweptQuantity,
    /// Strictly increasing values of the swept quantity.
    pub values: Vec<f64>,
    pub base: CavityConfig<f64>,
    /// Requested outputs; normalized to catalog order, duplicates dropped.
    pub outputs: Vec<OutputKind>,
    /// For `WingLength` sweeps: couple the shift to the candidate length
    /// as dx = ratio * R.
    pub dx_over_r: Option<f64>,
    pub reference: Option<ReferenceColumn>,
}

impl SweepSpec {
    pub fn new(
        swept: SweptQuantity,
        values: Vec<f64>,
        base: CavityConfig<f64>,
        outputs: &[OutputKind],
    ) -> Self {
        let mut normalized: Vec<OutputKind> = OutputKind::CATALOG_ORDER
            .iter()
            .copied()
            .filter(|k| outputs.contains(k))
            .collect();
        normalized.dedup();
        SweepSpec {
            swept,
            values,
            base,
            outputs: normalized,
            dx_over_r: None,
            reference: None,
        }
    }

    /// Scenario configuration for one swept value.
    pub fn config_at(&self, value: f64) -> CavityConfig<f64> {
        let mut c = self.base;
        match self.swept {
            SweptQuantity::PointR => {}
            SweptQuantity::WingLength => {
                c.wing_length = value;
                if let Some(ratio) = self.dx_over_r {
                    c.dx = ratio * value;
                }
            }
            SweptQuantity::Phi => c.phi = value,
            SweptQuantity::Dx => c.dx = value,
        }
        c
    }
}

/// Echo of the scenario parameters recorded in output metadata.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub a_m: f64,
    pub r_m: f64,
    pub l_m: f64,
    pub phi_rad: f64,
    pub dx_m: f64,
}

impl From<&CavityConfig<f64>> for ConfigEcho {
    fn from(c: &CavityConfig<f64>) -> Self {
        ConfigEcho {
            a_m: c.a,
            r_m: c.wing_length,
            l_m: c.width,
            phi_rad: c.phi,
            dx_m: c.dx,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepMetadata {
    pub tool: String,
    pub version: String,
    pub constants: PhysicalConstants,
    pub base_config: ConfigEcho,
    pub swept: SweptQuantity,
    /// Apex cutoff fraction, present when the a = 0 domain truncation applies.
    pub cutoff_eps: Option<f64>,
    pub figure_tag: Option<String>,
}

/// One evaluated sweep row: cells aligned with the result columns
/// (swept value first), or an error code for failed rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub values: Vec<Option<f64>>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub metadata: SweepMetadata,
    pub columns: Vec<String>,
    pub rows: Vec<SweepRow>,
}

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("sweep has no values or no outputs")]
    EmptySweep,
    #[error("sweep values must be strictly increasing")]
    NonIncreasingValues,
    #[error("outputs {0} cannot be computed for this swept quantity")]
    IncompatibleOutputs(String),
    #[error("sweep value {value} yields an invalid configuration: {source}")]
    InvalidRow {
        value: f64,
        source: GeometryError,
    },
    #[error("every sweep row failed")]
    AllRowsFailed,
    #[error("unknown figure tag `{0}`")]
    UnknownFigureTag(String),
    #[error("failed to write output: {0}")]
    Sink(#[from] std::io::Error),
}

/// Stable machine-readable code for an in-row failure.
fn error_code(err: &ForceError) -> &'static str {
    match err {
        ForceError::Kernel(KernelError::Geometry(g)) => match g {
            GeometryError::AngleOutOfRange { .. } => "AngleOutOfRange",
            GeometryError::NonPositiveDimension(_) => "NonPositiveDimension",
            GeometryError::DegenerateTriangle => "DegenerateTriangle",
            GeometryError::NumericalDomain { .. } => "NumericalDomain",
            GeometryError::SingularSeparation { .. } => "SingularSeparation",
        },
        ForceError::Kernel(KernelError::Quadrature(_)) | ForceError::Quadrature(_) => {
            "QuadratureNonConvergence"
        }
        ForceError::Kernel(KernelError::NonPositiveSeparation) => "NonPositiveSeparation",
        ForceError::SampleFailed { .. } => "SampleFailed",
        ForceError::InvalidSampleCount => "InvalidSampleCount",
        ForceError::NotUnimodal { .. } => "NotUnimodal",
        ForceError::MaximumAtBoundary { .. } => "MaximumAtBoundary",
        ForceError::InvalidBracket => "InvalidBracket",
        ForceError::DivisionByZeroForce => "DivisionByZeroForce",
    }
}

/// Column labels of a sweep result, swept value first.
pub fn result_columns(spec: &SweepSpec) -> Vec<String> {
    let mut columns = vec![spec.swept.column_name().to_string()];
    for kind in &spec.outputs {
        for label in kind.columns() {
            columns.push((*label).to_string());
        }
    }
    if let Some(reference) = &spec.reference {
        columns.push(reference.name.clone());
    }
    columns
}

fn evaluate_row(spec: &SweepSpec, value: f64) -> Result<Vec<f64>, ForceError> {
    let config = validate(spec.config_at(value))?;
    let mut cells = Vec::new();

    if spec.swept == SweptQuantity::PointR {
        let right = specific_force(&config, value, WingSide::Right)?;
        let left = specific_force(&config, value, WingSide::Left)?;
        for kind in &spec.outputs {
            match kind {
                OutputKind::PX => cells.extend([right.p_x, left.p_x]),
                OutputKind::PZ => cells.extend([right.p_z, left.p_z]),
                _ => unreachable!("pointwise sweeps carry pointwise outputs only"),
            }
        }
    } else {
        let total = total_force(&config)?;
        let [right, left] = total.per_wing;
        for kind in &spec.outputs {
            match kind {
                OutputKind::FX => cells.extend([right.f_x, left.f_x, total.f_x_total]),
                OutputKind::FZ => cells.extend([right.f_z, left.f_z, total.f_z_total]),
                OutputKind::Ratio => cells.push(force_ratio(&config)?),
                OutputKind::WX => {
                    cells.push(total.f_x_total.abs() / config.wing_length);
                }
                OutputKind::Torque => cells.push(total.torque_y),
                OutputKind::PX | OutputKind::PZ => {
                    unreachable!("integrated sweeps carry integrated outputs only")
                }
            }
        }
    }

    if let Some(reference) = &spec.reference {
        cells.push(reference.value);
    }

    if cells.iter().any(|v| !v.is_finite()) {
        return Err(ForceError::Quadrature(QuadError::NonConvergence {
            value: f64::NAN,
            error_estimate: f64::NAN,
            panels: 0,
        }));
    }
    Ok(cells)
}

/// Runs a sweep: rows evaluated independently (possibly in parallel) and
/// returned in input order. Identical inputs give identical results at any
/// parallelism.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult, SweepError> {
    if spec.values.is_empty() || spec.outputs.is_empty() {
        return Err(SweepError::EmptySweep);
    }
    if spec.values.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(SweepError::NonIncreasingValues);
    }

    let pointwise = spec.swept == SweptQuantity::PointR;
    let incompatible: Vec<&str> = spec
        .outputs
        .iter()
        .filter(|k| k.is_pointwise() != pointwise)
        .flat_map(|k| k.columns().iter().copied())
        .collect();
    if !incompatible.is_empty() {
        return Err(SweepError::IncompatibleOutputs(incompatible.join(",")));
    }

    // pre-validate every row configuration before burning any compute
    for &value in &spec.values {
        if pointwise {
            if !(0.0..=spec.base.wing_length).contains(&value) {
                return Err(SweepError::InvalidRow {
                    value,
                    source: GeometryError::NonPositiveDimension("r"),
                });
            }
            validate(spec.base).map_err(|source| SweepError::InvalidRow { value, source })?;
        } else {
            validate(spec.config_at(value))
                .map_err(|source| SweepError::InvalidRow { value, source })?;
        }
    }

    let rows: Vec<SweepRow> = spec
        .values
        .par_iter()
        .map(|&value| {
            let swept_cell = if pointwise {
                value / spec.base.wing_length
            } else {
                value
            };
            match evaluate_row(spec, value) {
                Ok(cells) => {
                    let mut values = Vec::with_capacity(cells.len() + 1);
                    values.push(Some(swept_cell));
                    values.extend(cells.into_iter().map(Some));
                    SweepRow {
                        values,
                        error: None,
                    }
                }
                Err(err) => {
                    let n = result_columns(spec).len();
                    let mut values = vec![None; n];
                    values[0] = Some(swept_cell);
                    SweepRow {
                        values,
                        error: Some(error_code(&err).to_string()),
                    }
                }
            }
        })
        .collect();

    if rows.iter().all(|r| r.error.is_some()) {
        return Err(SweepError::AllRowsFailed);
    }

    let cutoff_eps = (spec.base.a == 0.0).then_some(APEX_CUTOFF_EPS);
    Ok(SweepResult {
        metadata: SweepMetadata {
            tool: "cavex".to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            constants: PHYSICAL_CONSTANTS,
            base_config: ConfigEcho::from(&spec.base),
            swept: spec.swept,
            cutoff_eps,
            figure_tag: None,
        },
        columns: result_columns(spec),
        rows,
    })
}

/// Formats one value with 17 significant digits (bit-exact round-trip).
pub fn format_number(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes the result as CSV (comma separator, LF lines, 17 significant
/// digits). Returns the number of bytes written.
pub fn emit_csv(result: &SweepResult, sink: &mut dyn Write) -> Result<usize, SweepError> {
    let mut text = String::new();
    text.push_str(&result.columns.join(","));
    text.push('\n');
    for row in &result.rows {
        let mut first = true;
        for cell in &row.values {
            if !first {
                text.push(',');
            }
            first = false;
            match cell {
                Some(v) => text.push_str(&format_number(*v)),
                None => text.push_str(row.error.as_deref().unwrap_or("error")),
            }
        }
        text.push('\n');
    }
    sink.write_all(text.as_bytes())?;
    Ok(text.len())
}

/// Writes the result as JSON (same content as the CSV plus metadata; struct
/// key order is stable, numbers round-trip exactly). Returns bytes written.
pub fn emit_json(result: &SweepResult, sink: &mut dyn Write) -> Result<usize, SweepError> {
    let mut bytes = serde_json::to_vec_pretty(result).map_err(std::io::Error::other)?;
    bytes.push(b'\n');
    sink.write_all(&bytes)?;
    Ok(bytes.len())
}

/// Classical reference column for pressure profiles.
pub fn classical_reference(a: f64) -> ReferenceColumn {
    let value = classical_casimir_pressure::<f64>(if a > 0.0 { a } else { DEFAULT_A_M })
        .unwrap_or(f64::NAN);
    ReferenceColumn {
        name: "p_classical".to_string(),
        value,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> CavityConfig<f64> {
        CavityConfig::new(4e-7, 4e-6, 1.0, 0.0, 0.0)
    }

    fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
        (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect()
    }

    #[test]
    fn profile_sweep_emits_side_split_columns() {
        let spec = SweepSpec::new(
            SweptQuantity::PointR,
            grid(0.0, 4e-6, 8),
            base(),
            &[OutputKind::PZ, OutputKind::PX],
        );
        let result = run_sweep(&spec).unwrap();
        assert_eq!(
            result.columns,
            vec!["r_over_R", "p_x_right", "p_x_left", "p_z_right", "p_z_left"]
        );
        assert_eq!(result.rows.len(), 8);
        assert!(result.rows.iter().all(|r| r.error.is_none()));
    }

    #[test]
    fn force_sweep_emits_per_wing_and_total_columns() {
        let spec = SweepSpec::new(
            SweptQuantity::Dx,
            vec![0.0, 2e-7, 4e-7],
            base(),
            &[OutputKind::FX],
        );
        let result = run_sweep(&spec).unwrap();
        assert_eq!(
            result.columns,
            vec!["dx_m", "f_x_right", "f_x_left", "f_x_total"]
        );
    }

    #[test]
    fn empty_inputs_are_rejected() {
        let spec = SweepSpec::new(SweptQuantity::Dx, vec![], base(), &[OutputKind::FX]);
        assert!(matches!(run_sweep(&spec), Err(SweepError::EmptySweep)));
        let spec = SweepSpec::new(SweptQuantity::Dx, vec![0.0, 1e-7], base(), &[]);
        assert!(matches!(run_sweep(&spec), Err(SweepError::EmptySweep)));
    }

    #[test]
    fn non_monotone_values_are_rejected() {
        let spec = SweepSpec::new(
            SweptQuantity::Dx,
            vec![1e-7, 1e-7],
            base(),
            &[OutputKind::FX],
        );
        assert!(matches!(
            run_sweep(&spec),
            Err(SweepError::NonIncreasingValues)
        ));
    }

    #[test]
    fn mixed_output_kinds_are_rejected() {
        let spec = SweepSpec::new(
            SweptQuantity::PointR,
            grid(0.0, 4e-6, 4),
            base(),
            &[OutputKind::PX, OutputKind::FX],
        );
        assert!(matches!(
            run_sweep(&spec),
            Err(SweepError::IncompatibleOutputs(_))
        ));
    }

    #[test]
    fn invalid_row_configurations_fail_fast() {
        let spec = SweepSpec::new(
            SweptQuantity::Phi,
            vec![0.0, 1.0, 1.6],
            base(),
            &[OutputKind::FX],
        );
        assert!(matches!(run_sweep(&spec), Err(SweepError::InvalidRow { .. })));
    }

    #[test]
    fn failing_rows_carry_their_code_without_aborting() {
        // the a = 0, phi = 0 triangle is valid but singular everywhere;
        // sweeping phi across it leaves exactly one poisoned row
        let mut config = base();
        config.a = 0.0;
        let spec = SweepSpec::new(
            SweptQuantity::Phi,
            vec![0.0, 0.2, 0.4],
            config,
            &[OutputKind::FZ],
        );
        let result = run_sweep(&spec).unwrap();
        assert_eq!(result.rows.len(), 3);
        assert_eq!(result.rows[0].error.as_deref(), Some("SingularSeparation"));
        assert!(result.rows[1].error.is_none());
        assert!(result.rows[2].error.is_none());
        assert_eq!(result.metadata.cutoff_eps, Some(APEX_CUTOFF_EPS));
    }

    #[test]
    fn all_rows_failing_is_an_error() {
        let mut config = base();
        config.a = 0.0;
        let spec = SweepSpec::new(SweptQuantity::Phi, vec![0.0], config, &[OutputKind::FZ]);
        assert!(matches!(run_sweep(&spec), Err(SweepError::AllRowsFailed)));
    }

    #[test]
    fn csv_has_header_plus_one_line_per_row() {
        let spec = SweepSpec::new(
            SweptQuantity::Dx,
            vec![0.0, 2e-7],
            base(),
            &[OutputKind::FX],
        );
        let result = run_sweep(&spec).unwrap();
        let mut buf = Vec::new();
        let bytes = emit_csv(&result, &mut buf).unwrap();
        assert_eq!(bytes, buf.len());
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(text.ends_with('\n'));
        assert!(!lines[1].ends_with(','));
        assert!(!text.contains('\r'));
    }

    #[test]
    fn csv_numbers_round_trip_bit_exactly() {
        let spec = SweepSpec::new(
            SweptQuantity::PointR,
            grid(0.0, 4e-6, 5),
            base(),
            &[OutputKind::PX, OutputKind::PZ],
        );
        let result = run_sweep(&spec).unwrap();
        let mut buf = Vec::new();
        emit_csv(&result, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        for (line, row) in text.lines().skip(1).zip(&result.rows) {
            for (cell, expected) in line.split(',').zip(&row.values) {
                let parsed: f64 = cell.parse().unwrap();
                assert_eq!(parsed.to_bits(), expected.unwrap().to_bits());
            }
        }
    }

    #[test]
    fn json_metadata_echoes_the_constants() {
        let spec = SweepSpec::new(
            SweptQuantity::Dx,
            vec![0.0, 2e-7],
            base(),
            &[OutputKind::FX],
        );
        let result = run_sweep(&spec).unwrap();
        let mut buf = Vec::new();
        emit_json(&result, &mut buf).unwrap();
        let parsed: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(
            parsed["metadata"]["constants"]["hbar"].as_f64().unwrap(),
            1.054571817e-34
        );
        assert_eq!(
            parsed["metadata"]["constants"]["c"].as_f64().unwrap(),
            299792458.0
        );
    }

    #[test]
    fn identical_specs_emit_identical_bytes() {
        let spec = SweepSpec::new(
            SweptQuantity::Dx,
            grid(0.0, 4e-7, 7),
            base(),
            &[OutputKind::FX, OutputKind::Torque],
        );
        let mut a = Vec::new();
        let mut b = Vec::new();
        emit_json(&run_sweep(&spec).unwrap(), &mut a).unwrap();
        emit_json(&run_sweep(&spec).unwrap(), &mut b).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn reference_column_is_appended_last() {
        let mut spec = SweepSpec::new(
            SweptQuantity::PointR,
            grid(0.0, 4e-6, 4),
            base(),
            &[OutputKind::PZ],
        );
        spec.reference = Some(classical_reference(4e-7));
        let result = run_sweep(&spec).unwrap();
        assert_eq!(result.columns.last().unwrap(), "p_classical");
        let reference = result.rows[0].values.last().unwrap().unwrap();
        assert!((reference - (-5.0786e-2)).abs() < 5e-6);
    }

    #[test]
    fn coupled_shift_follows_the_wing_length() {
        let mut spec = SweepSpec::new(
            SweptQuantity::WingLength,
            vec![4e-7, 8e-7],
            base(),
            &[OutputKind::FX],
        );
        spec.dx_over_r = Some(0.5);
        let c = spec.config_at(8e-7);
        assert_eq!(c.dx, 4e-7);
        assert!(run_sweep(&spec).is_ok());
    }
}
