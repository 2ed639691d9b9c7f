//! `fademark` — embed, extract, attack, and evaluate fade-blend watermarks.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use fademark::error::{AppError, EXIT_PARTIAL};
use fademark::formats::{load_image_file, save_image_file, ImageFormat};
use fademark::manifest::ExperimentManifest;
use fademark::pipeline::{self, EvaluateOptions};
use fademark::report::{table_to_csv, table_to_text, MetricsJson};
use fademark_core::attack::AttackSpec;
use fademark_core::fade::{
    collapse_planes, embed, extract, validate_params, CarrierMode, PlaneCollapse,
};
use fademark_core::geometry::{resize, Interp};
use fademark_core::metrics::{measure, SsimParams};
use fademark_core::oracle::{build_error_table, exactness_fraction};
use fademark_core::pixel::{quantize, quantized_view, RasterImage, RoundingMode};

#[derive(Parser)]
#[command(
    name = "fademark",
    version,
    about = "Invisible image watermarking by weighted fade blending",
    after_help = "Exit codes: 0 success, 1 partial batch failure, \
                  2 usage/parameter error, 3 I/O or format error."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Cover weight; the logo weight is 1 - alpha1
    #[arg(long, global = true, default_value_t = 0.99)]
    alpha1: f64,

    /// Precision of the watermarked image: exact (real-valued, reversible)
    /// or q8 (8-bit, deployable)
    #[arg(long, global = true, value_enum, default_value_t = CarrierArg::Exact)]
    carrier: CarrierArg,

    /// Seed for stochastic attacks
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Output file (embed/extract/attack/table/oracle) or directory (fadesweep)
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Resize the logo to the cover's dimensions before embedding
    #[arg(long, global = true)]
    resize_logo: bool,

    /// Skip geometric realignment before post-attack extraction
    #[arg(long, global = true)]
    no_realign: bool,

    /// Image format for outputs (and for inputs whose extension is not
    /// bmp/pgm/ppm/fwm)
    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,
}

#[derive(Subcommand)]
enum Command {
    /// Blend a logo image into a cover image
    Embed { cover: PathBuf, logo: PathBuf },
    /// Recover the logo from a watermarked image using the original cover
    Extract {
        watermarked: PathBuf,
        cover: PathBuf,
        /// Reference logo; when given, fidelity of the extraction is printed
        #[arg(long)]
        reference: Option<PathBuf>,
        /// Average all planes of a multi-plane extraction instead of taking
        /// plane 0
        #[arg(long)]
        average_planes: bool,
    },
    /// Apply a single attack to an image
    Attack {
        input: PathBuf,
        /// Attack spec, e.g. gauss:mean=0,var=0.001 | salt_pepper:density=0.02 |
        /// median:k=3 | mean:k=3 | gaussian_blur:sigma=1,k=5 | highpass |
        /// wiener:k=3 | jpeg:q=50 | rotate:deg=45,interp=bilinear |
        /// scale:factor=3,interp=nearest
        #[arg(long)]
        spec: String,
    },
    /// Run a JSON manifest of pairs and attacks; writes results.csv and
    /// results.json into the manifest's output_dir
    Evaluate { manifest: PathBuf },
    /// Fidelity matrix over covers x logos (watermarked and extracted rows)
    Table {
        #[arg(long, required = true, num_args = 1..)]
        covers: Vec<PathBuf>,
        #[arg(long, required = true, num_args = 1..)]
        logos: Vec<PathBuf>,
    },
    /// Blend one pair at the standard ratio ladder and report fidelity
    Fadesweep { cover: PathBuf, logo: PathBuf },
    /// Emit the quantized-carrier extraction error table as CSV
    Oracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CarrierArg {
    Exact,
    #[value(name = "q8")]
    Q8,
}

impl CarrierArg {
    fn mode(self) -> CarrierMode {
        match self {
            CarrierArg::Exact => CarrierMode::ExactCarrier,
            CarrierArg::Q8 => CarrierMode::Quantized8,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Bmp,
    Pgm,
    Ppm,
    Fwm,
}

impl FormatArg {
    fn format(self) -> ImageFormat {
        match self {
            FormatArg::Bmp => ImageFormat::Bmp,
            FormatArg::Pgm => ImageFormat::Pgm,
            FormatArg::Ppm => ImageFormat::Ppm,
            FormatArg::Fwm => ImageFormat::Fwm,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<u8, AppError> {
    match &cli.command {
        Command::Embed { cover, logo } => cmd_embed(&cli, cover, logo),
        Command::Extract {
            watermarked,
            cover,
            reference,
            average_planes,
        } => cmd_extract(&cli, watermarked, cover, reference.as_deref(), *average_planes),
        Command::Attack { input, spec } => cmd_attack(&cli, input, spec),
        Command::Evaluate { manifest } => cmd_evaluate(&cli, manifest),
        Command::Table { covers, logos } => cmd_table(&cli, covers, logos),
        Command::Fadesweep { cover, logo } => cmd_fadesweep(&cli, cover, logo),
        Command::Oracle => cmd_oracle(&cli),
    }
}

/// Loads an input image; the extension decides the format, `--format` is the
/// fallback for unknown extensions.
fn load_input(cli: &Cli, path: &Path) -> Result<RasterImage, AppError> {
    let forced = ImageFormat::from_path(path).or(cli.format.map(FormatArg::format));
    Ok(load_image_file(path, forced)?)
}

/// Saves an output image; `--format` wins over the extension.
fn save_output(cli: &Cli, path: &Path, img: &RasterImage) -> Result<(), AppError> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)?;
        }
    }
    Ok(save_image_file(path, img, cli.format.map(FormatArg::format))?)
}

fn require_out(cli: &Cli) -> Result<&Path, AppError> {
    cli.out
        .as_deref()
        .ok_or_else(|| AppError::Usage("--out is required for this command".into()))
}

fn require_carrier8(img: &RasterImage, role: &str) -> Result<(), AppError> {
    if !img.is_carrier8() {
        return Err(AppError::Usage(format!(
            "{role} must be an 8-bit image (bmp/pgm/ppm), not a real-valued carrier"
        )));
    }
    Ok(())
}

fn cmd_embed(cli: &Cli, cover_path: &Path, logo_path: &Path) -> Result<u8, AppError> {
    let out = require_out(cli)?;
    let params = validate_params(cli.alpha1)?;
    let cover = load_input(cli, cover_path)?;
    require_carrier8(&cover, "cover")?;
    let mut logo = load_input(cli, logo_path)?;
    require_carrier8(&logo, "logo")?;

    if cli.resize_logo && logo.dims() != cover.dims() {
        logo = quantize(
            &resize(&logo, cover.width(), cover.height(), Interp::Bilinear),
            RoundingMode::default(),
        );
    }

    let watermarked = embed(&cover, &logo, &params, cli.carrier.mode())?;
    save_output(cli, out, &watermarked)?;

    let report = measure(&cover, &quantized_view(&watermarked), &SsimParams::default())?;
    println!("{}", serde_json::to_string(&MetricsJson(report)).expect("json"));
    Ok(0)
}

fn cmd_extract(
    cli: &Cli,
    watermarked_path: &Path,
    cover_path: &Path,
    reference: Option<&Path>,
    average_planes: bool,
) -> Result<u8, AppError> {
    let out = require_out(cli)?;
    let params = validate_params(cli.alpha1)?;
    let watermarked = load_input(cli, watermarked_path)?;
    let cover = load_input(cli, cover_path)?;
    require_carrier8(&cover, "cover")?;

    let mut extracted = extract(&watermarked, &cover, &params)?;
    if average_planes && extracted.channels() > 1 {
        extracted = collapse_planes(&extracted, PlaneCollapse::Average);
    }

    if let Some(reference_path) = reference {
        let reference = load_input(cli, reference_path)?;
        let comparable = if reference.channels() == 1 && extracted.channels() == 3 {
            collapse_planes(&extracted, PlaneCollapse::First)
        } else {
            extracted.clone()
        };
        let report = measure(&reference, &comparable, &SsimParams::default())?;
        println!("{}", serde_json::to_string(&MetricsJson(report)).expect("json"));
    }

    save_output(cli, out, &extracted)?;
    Ok(0)
}

fn cmd_attack(cli: &Cli, input_path: &Path, spec: &str) -> Result<u8, AppError> {
    let out = require_out(cli)?;
    let spec: AttackSpec = spec.parse::<AttackSpec>()?.with_seed(cli.seed);
    let input = load_input(cli, input_path)?;
    let attacked = fademark_core::attack::apply_attack(&input, &spec)?;
    save_output(cli, out, &attacked)?;
    println!("applied {spec} -> {}", out.display());
    Ok(0)
}

fn cmd_evaluate(cli: &Cli, manifest_path: &Path) -> Result<u8, AppError> {
    if !manifest_path.is_file() {
        return Err(AppError::Usage(format!(
            "no such manifest: {}",
            manifest_path.display()
        )));
    }
    let text = std::fs::read_to_string(manifest_path)?;
    let mut manifest: ExperimentManifest =
        serde_json::from_str(&text).map_err(|e| AppError::Manifest {
            path: manifest_path.display().to_string(),
            message: e.to_string(),
        })?;
    manifest.validate().map_err(AppError::Usage)?;
    let base = manifest_path.parent().unwrap_or(Path::new("."));
    manifest.resolve_paths(base);

    let options = EvaluateOptions {
        realign: !cli.no_realign,
        ..EvaluateOptions::default()
    };
    let rows = pipeline::evaluate(&manifest, &options)?;
    pipeline::write_reports(&manifest.output_dir, &rows)?;

    let failed = rows.iter().filter(|r| r.error.is_some()).count();
    for row in &rows {
        let status = match &row.error {
            Some(e) => format!("error: {e}"),
            None => "ok".into(),
        };
        println!("{} x {} [{} / {}]: {status}", row.cover, row.logo, row.stage, row.attack);
    }
    println!(
        "wrote {} rows to {} ({failed} failed)",
        rows.len(),
        manifest.output_dir.display()
    );
    Ok(if failed == rows.len() { EXIT_PARTIAL } else { 0 })
}

fn cmd_table(cli: &Cli, covers: &[PathBuf], logos: &[PathBuf]) -> Result<u8, AppError> {
    for path in covers.iter().chain(logos) {
        require_carrier8(&load_input(cli, path)?, "table input")?;
    }
    let rows = pipeline::table(covers, logos, cli.alpha1, cli.carrier.mode())?;
    print!("{}", table_to_text(&rows));
    let out = cli.out.clone().unwrap_or_else(|| PathBuf::from("table.csv"));
    std::fs::write(&out, table_to_csv(&rows))?;
    println!("wrote {}", out.display());
    Ok(0)
}

fn cmd_fadesweep(cli: &Cli, cover_path: &Path, logo_path: &Path) -> Result<u8, AppError> {
    let cover = load_input(cli, cover_path)?;
    require_carrier8(&cover, "cover")?;
    let logo = load_input(cli, logo_path)?;
    require_carrier8(&logo, "logo")?;

    let out_dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("fadesweep"));
    std::fs::create_dir_all(&out_dir)?;

    let blend_format = cli
        .format
        .map(FormatArg::format)
        .or_else(|| ImageFormat::from_path(cover_path))
        .unwrap_or(ImageFormat::Pgm);
    let extension = blend_format.to_string();

    let points = pipeline::fadesweep(&cover, &logo)?;
    for point in &points {
        let pct1 = (point.alpha1 * 100.0).round() as u32;
        let name = format!("blend_{pct1}_{}.{extension}", 100 - pct1);
        let path = out_dir.join(name);
        save_image_file(&path, &point.blend, Some(blend_format))?;
        println!("wrote {} (mse {})", path.display(), point.mse);
    }
    let csv_path = out_dir.join("sweep.csv");
    std::fs::write(&csv_path, pipeline::sweep_to_csv(&points))?;
    println!("wrote {}", csv_path.display());
    Ok(0)
}

fn cmd_oracle(cli: &Cli) -> Result<u8, AppError> {
    let params = validate_params(cli.alpha1)?;
    let table = build_error_table(&params);
    let out = cli
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from("error_table.csv"));
    std::fs::write(&out, pipeline::error_table_to_csv(&table))?;
    println!("exactness_fraction {}", exactness_fraction(&table));
    println!("wrote {}", out.display());
    Ok(0)
}
