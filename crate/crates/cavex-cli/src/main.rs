//! Command line front end: scenario ingestion, sweeps, effectiveness search
//! and figure reproduction, emitting CSV/JSON data files.

use anyhow::{anyhow, bail, Context, Result};
use cavex::catalog::{self, write_atomic};
use cavex::configfile::{parse_config, DEFAULT_A_M, DEFAULT_L_M};
use cavex::forces::{find_reff, total_force};
use cavex::geometry::{validate, CavityConfig};
use cavex::sweep::{
    emit_csv, emit_json, format_number, run_sweep, OutputKind, SweepSpec, SweptQuantity,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::io::Write;
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "cavex",
    version,
    about = "Casimir expulsion forces, torques and optimal geometries for shifted nanocavities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

/// Scenario parameters shared by every subcommand. Values from `--config`
/// are overridden by explicit flags; lengths are metres, angles degrees.
#[derive(Args, Debug, Clone)]
struct ScenarioArgs {
    /// Plate separation a at the narrow end (m)
    #[arg(long = "a", value_name = "METERS")]
    a: Option<f64>,
    /// Wing length R (m)
    #[arg(long = "R", value_name = "METERS")]
    wing_length: Option<f64>,
    /// Cavity width L along y (m)
    #[arg(long = "L", value_name = "METERS")]
    width: Option<f64>,
    /// Half-opening angle of each wing (degrees)
    #[arg(long = "phi-deg", value_name = "DEGREES")]
    phi_deg: Option<f64>,
    /// Leftward shift of the left wing (m)
    #[arg(long = "dx", value_name = "METERS")]
    dx: Option<f64>,
    /// Scenario file with key=value lines (a_m, R_m, L_m, phi_deg, dx_m)
    #[arg(long = "config", value_name = "PATH")]
    config: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct OutputArgs {
    /// Output file; stdout when omitted
    #[arg(long = "out", value_name = "PATH")]
    out: Option<PathBuf>,
    /// Output format
    #[arg(long = "format", value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample the local specific forces p_x, p_z along both wings
    Profile {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Number of sample points along the wing
        #[arg(long, default_value_t = 512)]
        samples: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Integrated per-wing and total forces, torque, ratio and effectiveness
    Force {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Sweep one parameter and tabulate the requested outputs
    Sweep {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Swept quantity: r, R, phi or dx
        #[arg(long, value_name = "NAME")]
        param: String,
        /// Lower end of the sweep (m for r/R/dx, degrees for phi)
        #[arg(long)]
        from: f64,
        /// Upper end of the sweep (m for r/R/dx, degrees for phi)
        #[arg(long)]
        to: f64,
        /// Number of sweep points (default: 512 for r, 64 otherwise)
        #[arg(long)]
        points: Option<usize>,
        /// Log-spaced grid (default for R sweeps)
        #[arg(long, overrides_with = "linear")]
        log: bool,
        /// Linearly spaced grid
        #[arg(long, overrides_with = "log")]
        linear: bool,
        /// Couple the shift to the swept wing length as dx = RATIO * R
        #[arg(long = "dx-over-r", value_name = "RATIO")]
        dx_over_r: Option<f64>,
        /// Comma separated outputs: p_x,p_z,f_x,f_z,ratio,w_x,torque
        #[arg(long, value_name = "LIST")]
        outputs: Option<String>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Search the wing length maximizing the expulsion effectiveness
    FindReff {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Lower end of the search bracket (m)
        #[arg(long = "r-min")]
        r_min: f64,
        /// Upper end of the search bracket (m)
        #[arg(long = "r-max")]
        r_max: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Reproduce a catalogued figure tag into CSV + JSON + manifest files
    Reproduce {
        /// Figure tag (fig2a ... fig8i); `list` prints the catalog
        tag: String,
        /// Output directory
        #[arg(long = "out", value_name = "DIR", default_value = ".")]
        out: PathBuf,
    },
}

fn assemble_config(args: &ScenarioArgs, require_r: bool) -> Result<CavityConfig<f64>> {
    let mut a = DEFAULT_A_M;
    let mut wing_length: Option<f64> = None;
    let mut width = DEFAULT_L_M;
    let mut phi = 0.0;
    let mut dx = 0.0;

    if let Some(path) = &args.config {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config file {}", path.display()))?;
        let file = parse_config(&text)?;
        a = file.a;
        wing_length = Some(file.wing_length);
        width = file.width;
        phi = file.phi;
        dx = file.dx;
    }

    if let Some(v) = args.a {
        a = v;
    }
    if let Some(v) = args.wing_length {
        wing_length = Some(v);
    }
    if let Some(v) = args.width {
        width = v;
    }
    if let Some(v) = args.phi_deg {
        phi = v.to_radians();
    }
    if let Some(v) = args.dx {
        dx = v;
    }

    let wing_length = match (wing_length, require_r) {
        (Some(v), _) => v,
        (None, false) => f64::NAN, // caller substitutes before validation
        (None, true) => bail!("wing length is required: pass --R or a config file with R_m"),
    };
    Ok(CavityConfig::new(a, wing_length, width, phi, dx))
}

fn write_output(output: &OutputArgs, emit: impl Fn(&mut dyn Write) -> Result<()>) -> Result<()> {
    match &output.out {
        Some(path) => {
            let mut buffer: Vec<u8> = Vec::new();
            emit(&mut buffer)?;
            write_atomic(path, &buffer)
                .with_context(|| format!("cannot write {}", path.display()))?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            emit(&mut lock)?;
        }
    }
    Ok(())
}

fn emit_sweep(result: &cavex::sweep::SweepResult, output: &OutputArgs) -> Result<()> {
    write_output(output, |sink| {
        match output.format {
            Format::Csv => emit_csv(result, sink)?,
            Format::Json => emit_json(result, sink)?,
        };
        Ok(())
    })
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

#[derive(Serialize)]
struct ForceReport {
    config: cavex::sweep::ConfigEcho,
    f_x_right: f64,
    f_x_left: f64,
    f_x_total: f64,
    f_z_right: f64,
    f_z_left: f64,
    f_z_total: f64,
    torque_y: f64,
    ratio: f64,
    w_x: f64,
    quadrature_error_right: f64,
    quadrature_error_left: f64,
}

fn run() -> Result<()> {
    match Cli::parse().command {
        Command::Profile {
            scenario,
            samples,
            output,
        } => {
            let base = assemble_config(&scenario, true)?;
            validate(base)?;
            let spec = SweepSpec::new(
                SweptQuantity::PointR,
                linspace(0.0, base.wing_length, samples.max(2)),
                base,
                &[OutputKind::PX, OutputKind::PZ],
            );
            let result = run_sweep(&spec)?;
            emit_sweep(&result, &output)
        }
        Command::Force { scenario, output } => {
            let base = assemble_config(&scenario, true)?;
            let config = validate(base)?;
            let total = total_force(&config)?;
            let [right, left] = total.per_wing;
            let w_x = total.f_x_total.abs() / base.wing_length;
            let ratio = if total.f_z_total != 0.0 {
                total.f_x_total / total.f_z_total
            } else {
                f64::NAN
            };
            let report = ForceReport {
                config: (&base).into(),
                f_x_right: right.f_x,
                f_x_left: left.f_x,
                f_x_total: total.f_x_total,
                f_z_right: right.f_z,
                f_z_left: left.f_z,
                f_z_total: total.f_z_total,
                torque_y: total.torque_y,
                ratio,
                w_x,
                quadrature_error_right: right.quadrature_error,
                quadrature_error_left: left.quadrature_error,
            };
            write_output(&output, |sink| {
                match output.format {
                    Format::Json => {
                        serde_json::to_writer_pretty(&mut *sink, &report)?;
                        sink.write_all(b"\n")?;
                    }
                    Format::Csv => {
                        let names = [
                            "f_x_right",
                            "f_x_left",
                            "f_x_total",
                            "f_z_right",
                            "f_z_left",
                            "f_z_total",
                            "torque_y",
                            "ratio",
                            "w_x",
                        ];
                        let values = [
                            report.f_x_right,
                            report.f_x_left,
                            report.f_x_total,
                            report.f_z_right,
                            report.f_z_left,
                            report.f_z_total,
                            report.torque_y,
                            report.ratio,
                            report.w_x,
                        ];
                        let row: Vec<String> = values.iter().map(|v| format_number(*v)).collect();
                        writeln!(sink, "{}", names.join(","))?;
                        writeln!(sink, "{}", row.join(","))?;
                    }
                }
                Ok(())
            })
        }
        Command::Sweep {
            scenario,
            param,
            from,
            to,
            points,
            log,
            linear,
            dx_over_r,
            outputs,
            output,
        } => {
            let swept = SweptQuantity::parse(&param)
                .ok_or_else(|| anyhow!("unknown sweep parameter `{param}` (use r, R, phi, dx)"))?;
            let base = assemble_config(&scenario, swept != SweptQuantity::WingLength)?;
            let n = points.unwrap_or(match swept {
                SweptQuantity::PointR => 512,
                _ => 64,
            });
            if n < 2 {
                bail!("a sweep needs at least 2 points");
            }
            let log_spacing = if log {
                true
            } else if linear {
                false
            } else {
                swept == SweptQuantity::WingLength
            };
            // phi arrives in degrees on the CLI
            let (from, to) = match swept {
                SweptQuantity::Phi => (from.to_radians(), to.to_radians()),
                _ => (from, to),
            };
            let values = if log_spacing {
                if from <= 0.0 {
                    bail!("log spacing needs positive endpoints");
                }
                logspace(from, to, n)
            } else {
                linspace(from, to, n)
            };

            let kinds = match outputs {
                Some(list) => {
                    let mut kinds = Vec::new();
                    for token in list.split(',').map(str::trim).filter(|t| !t.is_empty()) {
                        kinds.push(
                            OutputKind::parse(token)
                                .ok_or_else(|| anyhow!("unknown output `{token}`"))?,
                        );
                    }
                    kinds
                }
                None => match swept {
                    SweptQuantity::PointR => vec![OutputKind::PX, OutputKind::PZ],
                    _ => vec![OutputKind::FX, OutputKind::FZ, OutputKind::Ratio],
                },
            };

            let base = if swept == SweptQuantity::WingLength && base.wing_length.is_nan() {
                CavityConfig {
                    wing_length: *values.last().expect("nonempty sweep"),
                    ..base
                }
            } else {
                base
            };
            let mut spec = SweepSpec::new(swept, values, base, &kinds);
            spec.dx_over_r = dx_over_r;
            let result = run_sweep(&spec)?;
            emit_sweep(&result, &output)
        }
        Command::FindReff {
            scenario,
            r_min,
            r_max,
            output,
        } => {
            let mut base = assemble_config(&scenario, false)?;
            if base.wing_length.is_nan() {
                base.wing_length = r_max;
            }
            let config = validate(base)?;
            let eff = find_reff(&config, r_min, r_max)?;
            write_output(&output, |sink| {
                match output.format {
                    Format::Json => {
                        #[derive(Serialize)]
                        struct EffReport {
                            config: cavex::sweep::ConfigEcho,
                            r_eff_m: f64,
                            w_x: f64,
                            f_x_at_reff: f64,
                        }
                        let report = EffReport {
                            config: (&base).into(),
                            r_eff_m: eff.r_eff,
                            w_x: eff.w_x,
                            f_x_at_reff: eff.f_at_reff,
                        };
                        serde_json::to_writer_pretty(&mut *sink, &report)?;
                        sink.write_all(b"\n")?;
                    }
                    Format::Csv => {
                        writeln!(sink, "r_eff_m,w_x,f_x_at_reff")?;
                        writeln!(
                            sink,
                            "{},{},{}",
                            format_number(eff.r_eff),
                            format_number(eff.w_x),
                            format_number(eff.f_at_reff)
                        )?;
                    }
                }
                Ok(())
            })
        }
        Command::Reproduce { tag, out } => {
            if tag == "list" {
                let stdout = std::io::stdout();
                let mut lock = stdout.lock();
                for t in catalog::tags() {
                    writeln!(lock, "{t}")?;
                }
                return Ok(());
            }
            let manifest = catalog::reproduce(&tag, &out)?;
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            serde_json::to_writer_pretty(&mut lock, &manifest)?;
            lock.write_all(b"\n")?;
            Ok(())
        }
    }
}

fn main() {
    if let Err(err) = run() {
        let broken_pipe = err.chain().any(|cause| {
            cause
                .downcast_ref::<std::io::Error>()
                .is_some_and(|io| io.kind() == std::io::ErrorKind::BrokenPipe)
        });
        if broken_pipe {
            return;
        }
        // single machine-readable error line on stderr
        let line = serde_json::json!({ "error": format!("{err:#}") });
        eprintln!("{line}");
        std::process::exit(1);
    }
}
