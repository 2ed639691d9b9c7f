//! Batch pipelines: evaluation runs, fidelity matrices, and ratio sweeps.
//!
//! Evaluation is fully deterministic: pairs run in manifest order, every
//! stochastic attack gets the per-cell seed
//! `master_seed ^ fnv1a64(cover_id || logo_id || attack_id)`, and reports are
//! written once, after all cells finish.

use std::path::{Path, PathBuf};

use fademark_core::attack::{apply_attack, realign};
use fademark_core::fade::{
    collapse_planes, embed, extract, validate_params, CarrierMode, FadeParams, PlaneCollapse,
};
use fademark_core::metrics::{measure, MetricsReport, SsimParams};
use fademark_core::pixel::{quantized_view, RasterImage};
use fademark_core::rng::fnv1a64;

use crate::error::AppError;
use crate::formats::load_image_file;
use crate::manifest::{image_id, ExperimentManifest};
use crate::report::{ResultRow, Stage, TableRow};

/// Seed for one batch cell; reproducible in isolation and independent of run
/// order.
pub fn cell_seed(master_seed: u64, cover_id: &str, logo_id: &str, attack_id: &str) -> u64 {
    let mut name = Vec::with_capacity(cover_id.len() + logo_id.len() + attack_id.len());
    name.extend_from_slice(cover_id.as_bytes());
    name.extend_from_slice(logo_id.as_bytes());
    name.extend_from_slice(attack_id.as_bytes());
    master_seed ^ fnv1a64(&name)
}

#[derive(Debug, Clone, Copy)]
pub struct EvaluateOptions {
    /// Undo geometric attacks before extraction (the default); disabling it
    /// exposes raw post-attack extraction.
    pub realign: bool,
    pub collapse: PlaneCollapse,
}

impl Default for EvaluateOptions {
    fn default() -> Self {
        EvaluateOptions {
            realign: true,
            collapse: PlaneCollapse::First,
        }
    }
}

struct LoadedPair {
    cover_id: String,
    logo_id: String,
    cover: RasterImage,
    logo: RasterImage,
}

/// Runs the full manifest: for every (cover, logo) pair, a watermarked
/// fidelity row, an attack-free extraction row, and one row per attack with
/// the attack applied to the stored watermarked image, realigned, and
/// extracted. Per-cell failures land in the row's error column instead of
/// aborting the batch.
pub fn evaluate(
    manifest: &ExperimentManifest,
    options: &EvaluateOptions,
) -> Result<Vec<ResultRow>, AppError> {
    manifest.validate().map_err(AppError::Usage)?;
    let params = validate_params(manifest.alpha1)?;
    let carrier = manifest.carrier.mode();
    let ssim_params = SsimParams::default();

    let mut pairs = Vec::new();
    for cover_path in &manifest.covers {
        for logo_path in &manifest.logos {
            pairs.push(LoadedPair {
                cover_id: image_id(cover_path),
                logo_id: image_id(logo_path),
                cover: load_image_file(cover_path, None)?,
                logo: load_image_file(logo_path, None)?,
            });
        }
    }

    let mut rows = Vec::new();
    for pair in &pairs {
        run_pair(pair, &params, carrier, manifest, options, &ssim_params, &mut rows);
    }
    Ok(rows)
}

fn run_pair(
    pair: &LoadedPair,
    params: &FadeParams,
    carrier: CarrierMode,
    manifest: &ExperimentManifest,
    options: &EvaluateOptions,
    ssim_params: &SsimParams,
    rows: &mut Vec<ResultRow>,
) {
    let row = |stage: Stage, attack: String, outcome: Result<MetricsReport, String>| {
        let (metrics, error) = match outcome {
            Ok(m) => (Some(m), None),
            Err(e) => (None, Some(e)),
        };
        ResultRow {
            cover: pair.cover_id.clone(),
            logo: pair.logo_id.clone(),
            stage,
            attack,
            metrics,
            error,
        }
    };

    let broadcast = pair.cover.channels() == 3 && pair.logo.channels() == 1;
    let collapse_extraction = |img: &RasterImage| {
        if broadcast {
            collapse_planes(img, options.collapse)
        } else {
            img.clone()
        }
    };

    let watermarked = match embed(&pair.cover, &pair.logo, params, carrier) {
        Ok(wm) => wm,
        Err(e) => {
            // the whole pair is unusable; keep the row shape stable
            rows.push(row(Stage::Watermarked, "none".into(), Err(e.to_string())));
            rows.push(row(Stage::Extracted, "none".into(), Err(e.to_string())));
            for attack in &manifest.attacks {
                rows.push(row(
                    Stage::ExtractedAfterAttack,
                    attack.id(),
                    Err(e.to_string()),
                ));
            }
            return;
        }
    };
    let stored_view = quantized_view(&watermarked);

    rows.push(row(
        Stage::Watermarked,
        "none".into(),
        measure(&pair.cover, &stored_view, ssim_params).map_err(|e| e.to_string()),
    ));

    let attack_free = extract(&watermarked, &pair.cover, params)
        .map_err(|e| e.to_string())
        .and_then(|ex| {
            measure(&pair.logo, &collapse_extraction(&ex), ssim_params).map_err(|e| e.to_string())
        });
    rows.push(row(Stage::Extracted, "none".into(), attack_free));

    for attack in &manifest.attacks {
        let attack_id = attack.id();
        let seed = cell_seed(manifest.master_seed, &pair.cover_id, &pair.logo_id, &attack_id);
        let seeded = attack.clone().with_seed(seed);
        // geometric attacks may run on the real-valued carrier (rotation by a
        // quarter turn stays lossless there); everything else models
        // tampering with the stored 8-bit image
        let input = if seeded.is_geometric() {
            watermarked.clone()
        } else {
            stored_view.clone()
        };
        let outcome = apply_attack(&input, &seeded)
            .and_then(|attacked| {
                if options.realign {
                    realign(&attacked, &seeded, pair.cover.dims())
                } else {
                    Ok(attacked)
                }
            })
            .map_err(|e| e.to_string())
            .and_then(|ready| extract(&ready, &pair.cover, params).map_err(|e| e.to_string()))
            .and_then(|ex| {
                measure(&pair.logo, &collapse_extraction(&ex), ssim_params)
                    .map_err(|e| e.to_string())
            });
        rows.push(row(Stage::ExtractedAfterAttack, attack_id, outcome));
    }
}

/// Writes `results.csv` and `results.json` into `output_dir`.
pub fn write_reports(output_dir: &Path, rows: &[ResultRow]) -> Result<(), AppError> {
    std::fs::create_dir_all(output_dir)?;
    std::fs::write(output_dir.join("results.csv"), crate::report::rows_to_csv(rows))?;
    std::fs::write(output_dir.join("results.json"), crate::report::rows_to_json(rows))?;
    Ok(())
}

/// Builds the fidelity matrix over covers x logos: per cover, one
/// `Cover(with Logo)` row per logo (cover vs stored watermarked image), then
/// one `Logo(from Cover)` row per logo (logo vs extraction).
pub fn table(
    covers: &[PathBuf],
    logos: &[PathBuf],
    alpha1: f64,
    carrier: CarrierMode,
) -> Result<Vec<TableRow>, AppError> {
    let params = validate_params(alpha1)?;
    let ssim_params = SsimParams::default();
    let mut rows = Vec::new();
    for cover_path in covers {
        let cover = load_image_file(cover_path, None)?;
        let cover_id = image_id(cover_path);
        let mut extractions = Vec::new();
        for logo_path in logos {
            let logo = load_image_file(logo_path, None)?;
            let logo_id = image_id(logo_path);
            let watermarked = embed(&cover, &logo, &params, carrier)?;
            let stored_view = quantized_view(&watermarked);
            rows.push(TableRow {
                label: format!("{cover_id}(with {logo_id})"),
                report: measure(&cover, &stored_view, &ssim_params)?,
            });
            let extracted = extract(&watermarked, &cover, &params)?;
            let extracted = if cover.channels() == 3 && logo.channels() == 1 {
                collapse_planes(&extracted, PlaneCollapse::First)
            } else {
                extracted
            };
            extractions.push(TableRow {
                label: format!("{logo_id}(from {cover_id})"),
                report: measure(&logo, &extracted, &ssim_params)?,
            });
        }
        rows.extend(extractions);
    }
    Ok(rows)
}

/// The fading-ratio ladder used for the blend sweep.
pub const SWEEP_ALPHAS: [f64; 8] = [0.5, 0.6, 0.75, 0.8, 0.9, 0.95, 0.97, 0.99];

#[derive(Debug, Clone)]
pub struct SweepPoint {
    pub alpha1: f64,
    pub alpha2: f64,
    /// MSE between the cover and the stored (8-bit) blend.
    pub mse: f64,
    pub blend: RasterImage,
}

/// Blends the pair at every ladder ratio. Each point carries the stored
/// 8-bit blend and its distance from the cover.
pub fn fadesweep(cover: &RasterImage, logo: &RasterImage) -> Result<Vec<SweepPoint>, AppError> {
    let mut points = Vec::with_capacity(SWEEP_ALPHAS.len());
    for alpha1 in SWEEP_ALPHAS {
        let params = validate_params(alpha1)?;
        let blend = embed(cover, logo, &params, CarrierMode::ExactCarrier)?;
        let stored = quantized_view(&blend);
        let mse = fademark_core::metrics::mse(cover, &stored)?;
        points.push(SweepPoint {
            alpha1,
            alpha2: params.alpha2(),
            mse,
            blend: stored,
        });
    }
    Ok(points)
}

/// CSV for the sweep: one line per ratio.
pub fn sweep_to_csv(points: &[SweepPoint]) -> Vec<u8> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record(["alpha1", "alpha2", "mse"])
        .expect("vec write");
    for p in points {
        writer
            .write_record([
                crate::report::fmt_metric(p.alpha1),
                crate::report::fmt_metric(p.alpha2),
                crate::report::fmt_metric(p.mse),
            ])
            .expect("vec write");
    }
    writer.into_inner().expect("vec write")
}

/// CSV for an error table: header `f,0..255`, then one row per cover value.
pub fn error_table_to_csv(table: &fademark_core::oracle::ErrorTable) -> Vec<u8> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    let mut header = Vec::with_capacity(257);
    header.push("f".to_string());
    header.extend((0..256).map(|g| g.to_string()));
    writer.write_record(&header).expect("vec write");
    for f in 0..=255u8 {
        let mut record = Vec::with_capacity(257);
        record.push(f.to_string());
        record.extend(table.row(f).iter().map(|e| e.to_string()));
        writer.write_record(&record).expect("vec write");
    }
    writer.into_inner().expect("vec write")
}
