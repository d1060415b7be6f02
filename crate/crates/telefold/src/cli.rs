//! `telefold` command line.
//!
//! Usage errors exit with 2 and pipeline errors with 1. Both print a single
//! `error: <module>: <cause>` line to stderr; data files and JSON results are
//! the only things written to stdout or disk.

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::net::{IpAddr, SocketAddr};
use std::path::{Path, PathBuf};

use axum::http::HeaderValue;
use clap::{Args, Parser, Subcommand};
use telefold_core::bend::{ratio_sweep, solve_tilted_cone, BendInputs};
use telefold_core::design::{preset, DesignParams};
use telefold_core::silhouette::{deformation_metrics, measure_frames, ExtractConfig, SilhouetteError};
use telefold_core::solid::{placed_midline, section_contour};
use telefold_core::sweep::SweepError;

use crate::config::{self, ConfigError};
use crate::pgm;
use crate::pipeline::{generate, run_sweep, PipelineError};
use crate::service::{self, ServiceConfig};
use crate::stl::StlError;
use crate::tables;

#[derive(Debug, Parser)]
#[command(name = "telefold", version, about = "Telescopic soft pneumatic actuator design kernel")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate one design as binary STL plus a metrics JSON file.
    Generate(GenerateArgs),
    /// Run a one-factor sweep and write results.csv and sensitivity.csv.
    Sweep(SweepArgs),
    /// Predict bending from opposed wall arc lengths.
    Bend(BendArgs),
    /// Measure extension and bending from a directory of PGM frames.
    Silhouette(SilhouetteArgs),
    /// Start the HTTP service.
    Serve(ServeArgs),
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("source").required(true))]
struct GenerateArgs {
    /// Design JSON file.
    #[arg(long, group = "source")]
    config: Option<PathBuf>,
    /// Named preset such as BAS or THV-low.
    #[arg(long, group = "source")]
    preset: Option<String>,
    /// Output STL path.
    #[arg(long)]
    out: PathBuf,
    /// Metrics JSON path; defaults to the STL path with a .json extension.
    #[arg(long)]
    metrics: Option<PathBuf>,
    /// Frame spacing in degrees; must divide 360
    #[arg(long)]
    angular_step: Option<f64>,
    /// Vertices per resampled section
    #[arg(long)]
    contour_points: Option<usize>,
    /// Midline samples per curve segment
    #[arg(long)]
    samples_per_segment: Option<usize>,
    /// Distance-field grid spacing in mm
    #[arg(long)]
    cell_size: Option<f64>,
    /// Also write the mesh as OBJ text.
    #[arg(long)]
    obj: Option<PathBuf>,
    /// Write the first section's placed midline as CSV (s, rho, z).
    #[arg(long)]
    dump_midline: Option<PathBuf>,
    /// Write the first section's contour as CSV (x, y).
    #[arg(long)]
    dump_contour: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// Sweep spec JSON: {"baseline": <design>, "factors": [...]}.
    #[arg(long)]
    spec: PathBuf,
    /// Output directory, created if missing.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct BendArgs {
    /// Shorter wall arc length, mm.
    #[arg(long)]
    s0: f64,
    /// Longer wall arc length, mm.
    #[arg(long, required_unless_present = "ratios", conflicts_with = "ratios")]
    s1: Option<f64>,
    /// Midline radius, mm.
    #[arg(long)]
    r: f64,
    /// Rest height for the axial ratio, mm.
    #[arg(long)]
    h0: Option<f64>,
    /// Comma-separated s1/s0 ratios; writes a CSV table instead of one JSON line.
    #[arg(long, value_delimiter = ',')]
    ratios: Option<Vec<f64>>,
    /// CSV path for --ratios; stdout when omitted.
    #[arg(long, requires = "ratios")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SilhouetteArgs {
    /// Directory of P5 frames, time-ordered by file name.
    #[arg(long)]
    frames: PathBuf,
    /// Scale factor, mm per pixel.
    #[arg(long)]
    mm_per_px: f64,
    /// Deformation CSV path.
    #[arg(long)]
    out: PathBuf,
    /// Foreground is strictly brighter than this gray level.
    #[arg(long, default_value_t = ExtractConfig::default().threshold)]
    threshold: u8,
}

#[derive(Debug, Args)]
struct ServeArgs {
    #[arg(long, default_value_t = 8080)]
    port: u16,
    #[arg(long, default_value = "127.0.0.1")]
    host: IpAddr,
    /// Origin allowed by CORS; any origin when omitted.
    #[arg(long)]
    cors_origin: Option<String>,
}

#[derive(Debug)]
struct CliError {
    module: &'static str,
    message: String,
}

impl CliError {
    fn new(module: &'static str, e: impl ToString) -> Self {
        Self { module, message: e.to_string() }
    }

    fn io(path: &Path, e: impl ToString) -> Self {
        Self::new("io", format!("{}: {}", path.display(), e.to_string()))
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        let module = if matches!(e, ConfigError::Invalid { .. }) { "design_params" } else { "config" };
        Self::new(module, e)
    }
}

fn sweep_module(e: &SweepError) -> &'static str {
    match e {
        SweepError::Invalid { .. } | SweepError::Factor(_) => "design_params",
        SweepError::Bend(_) => "bend_model",
        SweepError::Solid(_) | SweepError::NotWatertight { .. } => "solid",
        _ => "sweep",
    }
}

impl From<PipelineError> for CliError {
    fn from(e: PipelineError) -> Self {
        let module = match &e {
            PipelineError::Sweep(s) => sweep_module(s),
            PipelineError::Stl(StlError::Io(_)) => "io",
            PipelineError::Stl(_) => "solid",
        };
        Self::new(module, e)
    }
}

type CliResult = Result<(), CliError>;

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path).map(BufWriter::new).map_err(|e| CliError::io(path, e))
}

fn write_file(path: &Path, bytes: &[u8]) -> CliResult {
    fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

fn csv_to_file(path: &Path, f: impl FnOnce(BufWriter<File>) -> csv::Result<()>) -> CliResult {
    f(create(path)?).map_err(|e| CliError::io(path, e))
}

fn cmd_generate(a: GenerateArgs, out: &mut dyn Write) -> CliResult {
    let mut params: DesignParams = match (&a.config, &a.preset) {
        (Some(p), _) => config::load_design(p)?,
        (_, Some(name)) => preset(name).map_err(|e| CliError::new("design_params", e))?,
        _ => unreachable!("clap requires a source"),
    };
    let r = &mut params.resolution;
    r.angular_step_deg = a.angular_step.unwrap_or(r.angular_step_deg);
    r.contour_points = a.contour_points.unwrap_or(r.contour_points);
    r.samples_per_segment = a.samples_per_segment.unwrap_or(r.samples_per_segment);
    r.cell_size = a.cell_size.or(r.cell_size);
    let design = params
        .validate()
        .map_err(|v| CliError::new("design_params", v.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; ")))?;

    let g = generate(&design)?;
    write_file(&a.out, &g.stl)?;
    let metrics = a.metrics.unwrap_or_else(|| a.out.with_extension("json"));
    write_file(&metrics, config::to_json(&g.summary).as_bytes())?;
    let mut written = vec![a.out.clone(), metrics];

    if let Some(p) = a.obj {
        let mut w = create(&p)?;
        crate::obj::write_obj(&g.mesh, &mut w).and_then(|_| w.flush()).map_err(|e| CliError::io(&p, e))?;
        written.push(p);
    }
    let res = design.resolution();
    let first = &design.sections()[0];
    if let Some(p) = a.dump_midline {
        let m = placed_midline(first, res.samples_per_segment, design.hub_radius())
            .map_err(|e| CliError::new("midline", e))?;
        csv_to_file(&p, |w| tables::write_midline(w, &m))?;
        written.push(p);
    }
    if let Some(p) = a.dump_contour {
        let c = section_contour(first, res.samples_per_segment, design.hub_radius(), res.contour_points, res.cell_size)
            .map_err(|e| CliError::new("cross_section", e))?;
        csv_to_file(&p, |w| tables::write_contour(w, &c))?;
        written.push(p);
    }
    for p in written {
        writeln!(out, "wrote {}", p.display()).map_err(|e| CliError::new("io", e))?;
    }
    Ok(())
}

fn cmd_sweep(a: SweepArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    let spec = config::load_sweep_spec(&a.spec)?;
    let outcome = run_sweep(&spec).map_err(|e| CliError::new(sweep_module(&e), e))?;
    fs::create_dir_all(&a.out).map_err(|e| CliError::io(&a.out, e))?;
    let results = a.out.join("results.csv");
    csv_to_file(&results, |w| tables::write_results(w, &outcome.rows))?;
    for r in outcome.rows.iter().filter(|r| r.error.is_some()) {
        let _ = writeln!(err, "warning: sweep: {}: {}", r.design_id, r.error.as_deref().unwrap_or_default());
    }
    let report = outcome.sensitivity.map_err(|e| CliError::new("sweep", e))?;
    let sens = a.out.join("sensitivity.csv");
    csv_to_file(&sens, |w| tables::write_sensitivity(w, &report))?;
    let _ = writeln!(out, "wrote {}\nwrote {}", results.display(), sens.display());
    Ok(())
}

fn cmd_bend(a: BendArgs, out: &mut dyn Write) -> CliResult {
    let to_cli = |e| CliError::new("bend_model", e);
    if let Some(ratios) = a.ratios {
        let rows = ratio_sweep(a.s0, a.r, a.h0, &ratios).map_err(to_cli)?;
        return match a.out {
            Some(p) => csv_to_file(&p, |w| tables::write_bend(w, &rows)),
            None => tables::write_bend(out, &rows).map_err(|e| CliError::new("io", e)),
        };
    }
    let inputs = BendInputs { s0: a.s0, s1: a.s1.expect("clap requires s1 without ratios"), r: a.r, h0: a.h0 };
    let p = solve_tilted_cone(&inputs).map_err(to_cli)?;
    let line = serde_json::to_string(&p).map_err(|e| CliError::new("io", e))?;
    writeln!(out, "{line}").map_err(|e| CliError::new("io", e))
}

fn cmd_silhouette(a: SilhouetteArgs, err: &mut dyn Write) -> CliResult {
    fn to_cli(e: impl ToString) -> CliError {
        CliError::new("silhouette_metrics", e)
    }
    let paths = pgm::frame_paths(&a.frames).map_err(to_cli)?;
    let images = paths.iter().map(|p| pgm::read_pgm(p)).collect::<Result<Vec<_>, _>>().map_err(to_cli)?;
    let names: Vec<String> =
        paths.iter().map(|p| p.file_name().unwrap_or_default().to_string_lossy().into_owned()).collect();
    let cfg = ExtractConfig::with_threshold(a.threshold);
    let frames = measure_frames(&images, &cfg).map_err(|e| match e {
        SilhouetteError::Frame { index, source } => {
            CliError::new("silhouette_metrics", format!("{}: {source}", names[index]))
        }
        e => to_cli(e),
    })?;
    let series = deformation_metrics(&frames, a.mm_per_px).map_err(to_cli)?;
    for (name, r) in names.iter().zip(&series.rows) {
        if r.tip_ambiguous {
            let _ = writeln!(
                err,
                "warning: silhouette_metrics: {name}: highest point is not unique; bend angle may be unreliable"
            );
        }
    }
    csv_to_file(&a.out, |w| tables::write_silhouette(w, &names, &series))
}

fn cmd_serve(a: ServeArgs, err: &mut dyn Write) -> CliResult {
    let allowed_origin = a
        .cors_origin
        .map(|o| HeaderValue::from_str(&o).map_err(|e| CliError::new("api_service", format!("bad --cors-origin: {e}"))))
        .transpose()?;
    let addr = SocketAddr::new(a.host, a.port);
    let rt = tokio::runtime::Runtime::new().map_err(|e| CliError::new("api_service", e))?;
    let _ = writeln!(err, "listening on http://{addr}");
    rt.block_on(service::serve(addr, ServiceConfig { allowed_origin })).map_err(|e| CliError::new("api_service", e))
}

/// Runs one invocation and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return e.exit_code();
        }
    };
    let result = match cli.command {
        Command::Generate(a) => cmd_generate(a, out),
        Command::Sweep(a) => cmd_sweep(a, out, err),
        Command::Bend(a) => cmd_bend(a, out),
        Command::Silhouette(a) => cmd_silhouette(a, err),
        Command::Serve(a) => cmd_serve(a, err),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {}: {}", e.module, e.message.replace('\n', " "));
            1
        }
    }
}
