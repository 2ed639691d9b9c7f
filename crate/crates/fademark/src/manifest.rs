//! Batch experiment manifests.
//!
//! A manifest is a single JSON document describing one experiment: which
//! covers and logos to pair, the fading weight, the carrier, the attack list,
//! and the master seed. Relative paths resolve against the directory the
//! manifest file lives in.
//!
//! ```json
//! {
//!   "covers": ["assets/gradient.pgm"],
//!   "logos": ["assets/ring_mark.pgm"],
//!   "alpha1": 0.99,
//!   "carrier": "exact",
//!   "attacks": [
//!     { "type": "gaussian_noise", "mean": 0.0, "variance": 0.001 },
//!     { "type": "median_filter", "k": 3 },
//!     { "type": "rotate", "degrees": 45.0, "interp": "bilinear" }
//!   ],
//!   "master_seed": 1,
//!   "output_dir": "results"
//! }
//! ```
//!
//! Seeds listed on individual attacks are placeholders: the batch runner
//! replaces them with per-cell seeds derived from `master_seed` and the cell
//! name, so cells stay reproducible in isolation.

use std::path::{Path, PathBuf};

use fademark_core::attack::AttackSpec;
use fademark_core::fade::CarrierMode;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CarrierChoice {
    #[default]
    Exact,
    Q8,
}

impl CarrierChoice {
    pub fn mode(self) -> CarrierMode {
        match self {
            CarrierChoice::Exact => CarrierMode::ExactCarrier,
            CarrierChoice::Q8 => CarrierMode::Quantized8,
        }
    }
}

impl std::fmt::Display for CarrierChoice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            CarrierChoice::Exact => "exact",
            CarrierChoice::Q8 => "q8",
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentManifest {
    pub covers: Vec<PathBuf>,
    pub logos: Vec<PathBuf>,
    #[serde(default = "default_alpha1")]
    pub alpha1: f64,
    #[serde(default)]
    pub carrier: CarrierChoice,
    #[serde(default)]
    pub attacks: Vec<AttackSpec>,
    #[serde(default)]
    pub master_seed: u64,
    pub output_dir: PathBuf,
}

fn default_alpha1() -> f64 {
    0.99
}

impl ExperimentManifest {
    /// Checks the structural invariants: non-empty image lists and valid
    /// attack parameters. File existence is checked at load time.
    pub fn validate(&self) -> Result<(), String> {
        if self.covers.is_empty() {
            return Err("manifest lists no covers".into());
        }
        if self.logos.is_empty() {
            return Err("manifest lists no logos".into());
        }
        for attack in &self.attacks {
            attack.validate().map_err(|e| e.to_string())?;
        }
        Ok(())
    }

    /// Re-roots every relative path against `base` (the manifest's directory).
    pub fn resolve_paths(&mut self, base: &Path) {
        let rebase = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        self.covers.iter_mut().for_each(rebase);
        self.logos.iter_mut().for_each(rebase);
        rebase(&mut self.output_dir);
    }
}

/// A display name for an image path: the file stem, used in result rows and
/// per-cell seed derivation.
pub fn image_id(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}
