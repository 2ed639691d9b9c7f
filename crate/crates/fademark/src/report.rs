//! Result rows and their CSV / JSON / text renderings.
//!
//! Infinite PSNR cannot be encoded as a JSON number, so it serializes as the
//! string `"inf"` in both CSV and JSON; the aligned text table renders it as
//! the infinity sign. All numeric formatting is deterministic (shortest
//! round-trip form), which is what makes byte-identical reruns possible.

use std::fmt;

use fademark_core::metrics::MetricsReport;
use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Watermarked,
    Extracted,
    ExtractedAfterAttack,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::Watermarked => "watermarked",
            Stage::Extracted => "extracted",
            Stage::ExtractedAfterAttack => "extracted_after_attack",
        })
    }
}

/// One cell of a batch run.
#[derive(Debug, Clone)]
pub struct ResultRow {
    pub cover: String,
    pub logo: String,
    pub stage: Stage,
    /// Attack id or `"none"` for the attack-free rows.
    pub attack: String,
    pub metrics: Option<MetricsReport>,
    pub error: Option<String>,
}

/// Shortest deterministic decimal form; infinities render as `inf`.
pub fn fmt_metric(value: f64) -> String {
    if value.is_infinite() {
        if value > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{value}")
    }
}

pub const CSV_HEADER: [&str; 8] = [
    "cover", "logo", "stage", "attack", "mse", "psnr_db", "ssim", "error",
];

/// Renders rows as the canonical `results.csv` byte stream.
pub fn rows_to_csv(rows: &[ResultRow]) -> Vec<u8> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(CSV_HEADER).expect("vec write");
    for row in rows {
        let (mse, psnr, ssim) = match &row.metrics {
            Some(m) => (fmt_metric(m.mse), fmt_metric(m.psnr_db), fmt_metric(m.ssim)),
            None => (String::new(), String::new(), String::new()),
        };
        writer
            .write_record([
                row.cover.as_str(),
                row.logo.as_str(),
                &row.stage.to_string(),
                row.attack.as_str(),
                &mse,
                &psnr,
                &ssim,
                row.error.as_deref().unwrap_or(""),
            ])
            .expect("vec write");
    }
    writer.into_inner().expect("vec write")
}

impl Serialize for ResultRow {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("ResultRow", 8)?;
        s.serialize_field("cover", &self.cover)?;
        s.serialize_field("logo", &self.logo)?;
        s.serialize_field("stage", &self.stage.to_string())?;
        s.serialize_field("attack", &self.attack)?;
        match &self.metrics {
            Some(m) => {
                s.serialize_field("mse", &m.mse)?;
                serialize_psnr_field(&mut s, m.psnr_db)?;
                s.serialize_field("ssim", &m.ssim)?;
            }
            None => {
                s.serialize_field("mse", &Option::<f64>::None)?;
                s.serialize_field("psnr_db", &Option::<f64>::None)?;
                s.serialize_field("ssim", &Option::<f64>::None)?;
            }
        }
        s.serialize_field("error", &self.error)?;
        s.end()
    }
}

/// A metrics report as a standalone JSON object (the `embed`/`extract`
/// commands print one per run).
pub struct MetricsJson(pub MetricsReport);

impl Serialize for MetricsJson {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("MetricsReport", 3)?;
        s.serialize_field("mse", &self.0.mse)?;
        serialize_psnr_field(&mut s, self.0.psnr_db)?;
        s.serialize_field("ssim", &self.0.ssim)?;
        s.end()
    }
}

fn serialize_psnr_field<S: SerializeStruct>(s: &mut S, psnr_db: f64) -> Result<(), S::Error> {
    if psnr_db.is_infinite() {
        s.serialize_field("psnr_db", "inf")
    } else {
        s.serialize_field("psnr_db", &psnr_db)
    }
}

/// Renders rows as the canonical `results.json` byte stream.
pub fn rows_to_json(rows: &[ResultRow]) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(rows).expect("rows serialize");
    out.push(b'\n');
    out
}

/// One line of the fidelity matrix, labeled like `Cover(with Logo)` for
/// watermarked fidelity and `Logo(from Cover)` for extraction fidelity.
#[derive(Debug, Clone)]
pub struct TableRow {
    pub label: String,
    pub report: MetricsReport,
}

/// Aligned text rendering of the fidelity matrix.
pub fn table_to_text(rows: &[TableRow]) -> String {
    let label_width = rows
        .iter()
        .map(|r| r.label.len())
        .chain(std::iter::once("image pair".len()))
        .max()
        .unwrap_or(10);
    let mut out = String::new();
    out.push_str(&format!(
        "{:<label_width$}  {:>10}  {:>10}  {:>8}\n",
        "image pair", "MSE", "PSNR", "SSIM"
    ));
    for row in rows {
        let psnr = if row.report.psnr_db.is_infinite() {
            "\u{221E}".to_string()
        } else {
            format!("{:.4}", row.report.psnr_db)
        };
        out.push_str(&format!(
            "{:<label_width$}  {:>10.4}  {:>10}  {:>8.4}\n",
            row.label, row.report.mse, psnr, row.report.ssim
        ));
    }
    out
}

/// CSV rendering of the fidelity matrix.
pub fn table_to_csv(rows: &[TableRow]) -> Vec<u8> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record(["pair", "mse", "psnr_db", "ssim"])
        .expect("vec write");
    for row in rows {
        writer
            .write_record([
                row.label.as_str(),
                &fmt_metric(row.report.mse),
                &fmt_metric(row.report.psnr_db),
                &fmt_metric(row.report.ssim),
            ])
            .expect("vec write");
    }
    writer.into_inner().expect("vec write")
}
