//! Canned reproduction scenarios, one per figure tag, plus deterministic
//! file emission with manifests.
//!
//! Profile and sweep tags carry a full `SweepSpec`; the small schematic
//! panels are emitted as cavity outline files (wing endpoint coordinates).
//! Where the source figures leave parameters unstated (wing lengths behind
//! the profile plots, the angle triple of the shift-sweep figure), the
//! catalog pins representative values and the manifest metadata records
//! the exact scenario.

use crate::configfile::DEFAULT_A_M;
use crate::geometry::CavityConfig;
use crate::sweep::{
    classical_reference, emit_csv, emit_json, run_sweep, OutputKind, SweepError, SweepSpec,
    SweepResult, SweptQuantity,
};
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};

const DEG: f64 = std::f64::consts::PI / 180.0;

/// Profiles sample 512 points; length/angle/shift sweeps use 64.
pub const PROFILE_POINTS: usize = 512;
pub const SWEEP_POINTS: usize = 64;

/// What a figure tag reproduces.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum ScenarioData {
    Sweep(SweepSpec),
    /// Wing endpoint coordinates of one configuration (schematic panels).
    Outline(CavityConfig<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FigureScenario {
    pub tag: String,
    pub title: String,
    pub data: ScenarioData,
}

/// Manifest written alongside the output files of one reproduction run.
/// Paths are file names relative to the manifest location.
#[derive(Debug, Clone, PartialEq, Serialize, serde::Deserialize)]
pub struct RunManifest {
    pub scenario: String,
    pub figure_tag: String,
    pub input_hash: String,
    pub outputs: Vec<String>,
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| {
            if i + 1 == n {
                hi
            } else {
                lo + (hi - lo) * i as f64 / (n - 1) as f64
            }
        })
        .collect()
}

fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (llo, lhi) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| {
            if i + 1 == n {
                hi
            } else {
                (llo + (lhi - llo) * i as f64 / (n - 1) as f64).exp()
            }
        })
        .collect()
}

fn profile_spec(base: CavityConfig<f64>, output: OutputKind, with_reference: bool) -> ScenarioData {
    let mut spec = SweepSpec::new(
        SweptQuantity::PointR,
        linspace(0.0, base.wing_length, PROFILE_POINTS),
        base,
        &[output],
    );
    if with_reference {
        spec.reference = Some(classical_reference(base.a));
    }
    ScenarioData::Sweep(spec)
}

fn push(
    scenarios: &mut Vec<FigureScenario>,
    tag: &str,
    title: String,
    data: ScenarioData,
) {
    scenarios.push(FigureScenario {
        tag: tag.to_string(),
        title,
        data,
    });
}

/// The full reproduction catalog: fig2a-f, fig3a-l, fig4a-i, fig5a-d,
/// fig6a-h, fig7a-c, fig8a-i.
pub fn catalog() -> Vec<FigureScenario> {
    let mut scenarios = Vec::new();

    // parallel-plate profiles at three absolute shifts
    {
        let shifts = [0.0, 4e-7, 1e-6];
        let tags = [["fig2a", "fig2b"], ["fig2c", "fig2d"], ["fig2e", "fig2f"]];
        for (dx, pair) in shifts.iter().zip(tags.iter()) {
            let base = CavityConfig::new(DEFAULT_A_M, 4e-6, 1.0, 0.0, *dx);
            push(
                &mut scenarios,
                pair[0],
                format!("local expulsion p_x along parallel wings, dx = {dx:.1e} m"),
                profile_spec(base, OutputKind::PX, false),
            );
            push(
                &mut scenarios,
                pair[1],
                format!("local pressure p_z along parallel wings, dx = {dx:.1e} m"),
                profile_spec(base, OutputKind::PZ, true),
            );
        }
    }

    // parallel plates at four relative shifts dx/R: p_x, p_z, outline
    {
        let ratios = [0.05, 0.4, 1.2, 2.0];
        let tags = [
            ["fig3a", "fig3b", "fig3c"],
            ["fig3d", "fig3e", "fig3f"],
            ["fig3g", "fig3h", "fig3i"],
            ["fig3j", "fig3k", "fig3l"],
        ];
        for (ratio, triple) in ratios.iter().zip(tags.iter()) {
            let base = CavityConfig::new(DEFAULT_A_M, 4e-6, 1.0, 0.0, ratio * 4e-6);
            push(
                &mut scenarios,
                triple[0],
                format!("local expulsion p_x, parallel wings, dx/R = {ratio}"),
                profile_spec(base, OutputKind::PX, false),
            );
            push(
                &mut scenarios,
                triple[1],
                format!("local pressure p_z, parallel wings, dx/R = {ratio}"),
                profile_spec(base, OutputKind::PZ, false),
            );
            push(
                &mut scenarios,
                triple[2],
                format!("cavity outline, parallel wings, dx/R = {ratio}"),
                ScenarioData::Outline(base),
            );
        }
    }

    // opened wings (phi = 1 deg) at three relative shifts
    {
        let ratios = [0.05, 0.4, 1.2];
        let tags = [
            ["fig4a", "fig4b", "fig4c"],
            ["fig4d", "fig4e", "fig4f"],
            ["fig4g", "fig4h", "fig4i"],
        ];
        for (ratio, triple) in ratios.iter().zip(tags.iter()) {
            let base = CavityConfig::new(DEFAULT_A_M, 4e-6, 1.0, DEG, ratio * 4e-6);
            push(
                &mut scenarios,
                triple[0],
                format!("local expulsion p_x, phi = 1 deg, dx/R = {ratio}"),
                profile_spec(base, OutputKind::PX, false),
            );
            push(
                &mut scenarios,
                triple[1],
                format!("local pressure p_z, phi = 1 deg, dx/R = {ratio}"),
                profile_spec(base, OutputKind::PZ, false),
            );
            push(
                &mut scenarios,
                triple[2],
                format!("cavity outline, phi = 1 deg, dx/R = {ratio}"),
                ScenarioData::Outline(base),
            );
        }
    }

    // wing-length dependence of total force, compression, effectiveness
    // and their ratio for the nanometre-scale family
    {
        let a = 4e-10;
        let base = CavityConfig::new(a, a, 1.0, DEG, 0.0);
        let values = logspace(0.1 * a, 100.0 * a, SWEEP_POINTS);
        for (tag, output, title) in [
            ("fig5a", OutputKind::FX, "total expulsion force vs wing length"),
            ("fig5b", OutputKind::FZ, "total compression force vs wing length"),
            ("fig5c", OutputKind::WX, "expulsion effectiveness vs wing length"),
            ("fig5d", OutputKind::Ratio, "force ratio F_x/F_z vs wing length"),
        ] {
            let spec = SweepSpec::new(SweptQuantity::WingLength, values.clone(), base, &[output]);
            push(
                &mut scenarios,
                tag,
                format!("{title}, a = {a:.1e} m, phi = 1 deg"),
                ScenarioData::Sweep(spec),
            );
        }
    }

    // per-wing and total force vs wing length at coupled shifts dx/R
    {
        let a = DEFAULT_A_M;
        let ratios = [0.0, 0.05, 0.4, 1.2];
        let tags = [
            ["fig6a", "fig6b"],
            ["fig6c", "fig6d"],
            ["fig6e", "fig6f"],
            ["fig6g", "fig6h"],
        ];
        for (ratio, pair) in ratios.iter().zip(tags.iter()) {
            let base = CavityConfig::new(a, a, 1.0, DEG, 0.0);
            let mut spec = SweepSpec::new(
                SweptQuantity::WingLength,
                logspace(0.1 * a, 30.0 * a, SWEEP_POINTS),
                base,
                &[OutputKind::FX],
            );
            spec.dx_over_r = Some(*ratio);
            push(
                &mut scenarios,
                pair[0],
                format!("per-wing and total expulsion vs wing length, dx/R = {ratio}"),
                ScenarioData::Sweep(spec),
            );
            push(
                &mut scenarios,
                pair[1],
                format!("cavity outline, phi = 1 deg, dx/R = {ratio} at R = 10a"),
                ScenarioData::Outline(CavityConfig::new(a, 10.0 * a, 1.0, DEG, ratio * 10.0 * a)),
            );
        }
    }

    // shift dependence of the per-wing forces and their sum, three angles
    {
        let a = DEFAULT_A_M;
        for (tag, phi_deg) in [("fig7a", 1.0), ("fig7b", 3.0), ("fig7c", 5.0)] {
            let base = CavityConfig::new(a, a, 1.0, phi_deg * DEG, 0.0);
            let spec = SweepSpec::new(
                SweptQuantity::Dx,
                linspace(0.0, 2.0 * a, SWEEP_POINTS),
                base,
                &[OutputKind::FX],
            );
            push(
                &mut scenarios,
                tag,
                format!("per-wing and total expulsion vs shift, phi = {phi_deg} deg"),
                ScenarioData::Sweep(spec),
            );
        }
    }

    // opening-angle dependence at three relative shifts dx/a
    {
        let a = 4e-10;
        let shifts = [0.0, 0.05, 0.3];
        let tags = [
            ["fig8a", "fig8b", "fig8c"],
            ["fig8d", "fig8e", "fig8f"],
            ["fig8g", "fig8h", "fig8i"],
        ];
        for (dx_over_a, triple) in shifts.iter().zip(tags.iter()) {
            let base = CavityConfig::new(a, 5.0 * a, 1.0, 0.0, dx_over_a * a);
            let values = linspace(0.0, 10.0 * DEG, SWEEP_POINTS);
            for (tag, output, what) in [
                (triple[0], OutputKind::FX, "expulsion force"),
                (triple[1], OutputKind::FZ, "compression force"),
                (triple[2], OutputKind::Ratio, "force ratio"),
            ] {
                let spec =
                    SweepSpec::new(SweptQuantity::Phi, values.clone(), base, &[output]);
                push(
                    &mut scenarios,
                    tag,
                    format!("{what} vs opening angle, dx/a = {dx_over_a}"),
                    ScenarioData::Sweep(spec),
                );
            }
        }
    }

    scenarios
}

/// Looks a tag up in the catalog.
pub fn lookup(tag: &str) -> Result<FigureScenario, SweepError> {
    catalog()
        .into_iter()
        .find(|s| s.tag == tag)
        .ok_or_else(|| SweepError::UnknownFigureTag(tag.to_string()))
}

/// All known figure tags, in catalog order.
pub fn tags() -> Vec<String> {
    catalog().into_iter().map(|s| s.tag).collect()
}

/// Writes `bytes` to `path` via a temporary file in the same directory and
/// an atomic rename; an aborted run never leaves a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    let name = path
        .file_name()
        .ok_or_else(|| std::io::Error::other("output path has no file name"))?
        .to_string_lossy()
        .into_owned();
    let tmp = dir
        .unwrap_or_else(|| Path::new("."))
        .join(format!(".{name}.{}.tmp", std::process::id()));
    let result = std::fs::write(&tmp, bytes).and_then(|_| std::fs::rename(&tmp, path));
    if result.is_err() {
        let _ = std::fs::remove_file(&tmp);
    }
    result
}

fn outline_csv(config: &CavityConfig<f64>) -> String {
    use crate::sweep::format_number as num;
    let (sin_phi, cos_phi) = config.phi.sin_cos();
    let r = config.wing_length;
    let mut text = String::from("side,point,x_m,z_m\n");
    let rows = [
        ("right", "base", 0.0, 0.0),
        ("right", "tip", r * cos_phi, r * sin_phi),
        ("left", "base", -config.dx, -config.a),
        ("left", "tip", r * cos_phi - config.dx, -r * sin_phi - config.a),
    ];
    for (side, point, x, z) in rows {
        text.push_str(&format!("{side},{point},{},{}\n", num(x), num(z)));
    }
    text
}

#[derive(Serialize)]
struct OutlineJson<'a> {
    figure_tag: &'a str,
    config: crate::sweep::ConfigEcho,
    columns: [&'static str; 4],
    rows: Vec<(String, String, f64, f64)>,
}

fn outline_json(tag: &str, config: &CavityConfig<f64>) -> Vec<u8> {
    let (sin_phi, cos_phi) = config.phi.sin_cos();
    let r = config.wing_length;
    let body = OutlineJson {
        figure_tag: tag,
        config: crate::sweep::ConfigEcho::from(config),
        columns: ["side", "point", "x_m", "z_m"],
        rows: vec![
            ("right".into(), "base".into(), 0.0, 0.0),
            ("right".into(), "tip".into(), r * cos_phi, r * sin_phi),
            ("left".into(), "base".into(), -config.dx, -config.a),
            (
                "left".into(),
                "tip".into(),
                r * cos_phi - config.dx,
                -r * sin_phi - config.a,
            ),
        ],
    };
    let mut bytes = serde_json::to_vec_pretty(&body).expect("outline serializes");
    bytes.push(b'\n');
    bytes
}

fn input_hash(scenario: &FigureScenario) -> String {
    let canonical = serde_json::to_vec(scenario).expect("scenario serializes");
    let mut hasher = Sha256::new();
    hasher.update(&canonical);
    format!("{:x}", hasher.finalize())
}

/// Runs the canned scenario for `tag` in memory (sweeps only).
pub fn run_figure(tag: &str) -> Result<SweepResult, SweepError> {
    match lookup(tag)?.data {
        ScenarioData::Sweep(spec) => {
            let mut result = run_sweep(&spec)?;
            result.metadata.figure_tag = Some(tag.to_string());
            Ok(result)
        }
        ScenarioData::Outline(_) => Err(SweepError::UnknownFigureTag(format!(
            "{tag} is an outline panel; reproduce it to files instead"
        ))),
    }
}

/// Reproduces one figure tag into `out_dir`: `<tag>.csv`, `<tag>.json` and
/// `<tag>.manifest.json`. Returns the manifest.
pub fn reproduce(tag: &str, out_dir: &Path) -> Result<RunManifest, SweepError> {
    let scenario = lookup(tag)?;
    std::fs::create_dir_all(out_dir)?;

    let (csv_bytes, json_bytes) = match &scenario.data {
        ScenarioData::Sweep(spec) => {
            let mut result = run_sweep(spec)?;
            result.metadata.figure_tag = Some(tag.to_string());
            let mut csv = Vec::new();
            emit_csv(&result, &mut csv)?;
            let mut json = Vec::new();
            emit_json(&result, &mut json)?;
            (csv, json)
        }
        ScenarioData::Outline(config) => (
            outline_csv(config).into_bytes(),
            outline_json(tag, config),
        ),
    };

    let csv_name = format!("{tag}.csv");
    let json_name = format!("{tag}.json");
    let manifest_name = format!("{tag}.manifest.json");

    write_atomic(&out_dir.join(&csv_name), &csv_bytes)?;
    write_atomic(&out_dir.join(&json_name), &json_bytes)?;

    let manifest = RunManifest {
        scenario: scenario.title.clone(),
        figure_tag: tag.to_string(),
        input_hash: input_hash(&scenario),
        outputs: vec![csv_name, json_name],
    };
    let mut manifest_bytes = serde_json::to_vec_pretty(&manifest).map_err(std::io::Error::other)?;
    manifest_bytes.push(b'\n');
    write_atomic(&out_dir.join(manifest_name), &manifest_bytes)?;
    Ok(manifest)
}

/// Convenience: the manifest path of a tag inside `out_dir`.
pub fn manifest_path(tag: &str, out_dir: &Path) -> PathBuf {
    out_dir.join(format!("{tag}.manifest.json"))
}
