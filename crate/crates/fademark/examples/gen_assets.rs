//! Writes the bundled synthetic test images and a ready-to-run evaluation
//! manifest. Usage: `cargo run -p fademark --example gen_assets [-- DIR]`
//! (default DIR: `assets`).

use std::fs;
use std::path::PathBuf;

use fademark::formats::{save_image_file, ImageFormat};
use fademark_core::synth::{cover, logo, CoverStyle, LogoStyle};

const SIZE: usize = 256;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("assets"));
    fs::create_dir_all(&dir)?;

    let covers = [
        ("gradient", CoverStyle::Gradient),
        ("fine_texture", CoverStyle::FineTexture),
        ("blobs", CoverStyle::Blobs),
        ("diagonal_weave", CoverStyle::DiagonalWeave),
    ];
    let logos = [
        ("ring_mark", LogoStyle::RingMark),
        ("stripe_mark", LogoStyle::StripeMark),
    ];

    for (name, style) in covers {
        let path = dir.join(format!("{name}.pgm"));
        save_image_file(&path, &cover(style, SIZE, SIZE), Some(ImageFormat::Pgm))?;
        println!("wrote {}", path.display());
    }
    for (name, style) in logos {
        let path = dir.join(format!("{name}.pgm"));
        save_image_file(&path, &logo(style, SIZE, SIZE), Some(ImageFormat::Pgm))?;
        println!("wrote {}", path.display());
    }

    // the full attack gauntlet, one cell per attack
    let manifest = serde_json::json!({
        "covers": ["gradient.pgm", "fine_texture.pgm", "blobs.pgm", "diagonal_weave.pgm"],
        "logos": ["ring_mark.pgm", "stripe_mark.pgm"],
        "alpha1": 0.99,
        "carrier": "exact",
        "master_seed": 1,
        "output_dir": "results",
        "attacks": [
            { "type": "gaussian_noise", "mean": 0.0, "variance": 0.001 },
            { "type": "median_filter", "k": 3 },
            { "type": "median_filter", "k": 5 },
            { "type": "median_filter", "k": 7 },
            { "type": "salt_pepper", "density": 0.02 },
            { "type": "salt_pepper", "density": 0.2 },
            { "type": "salt_pepper", "density": 0.5 },
            { "type": "jpeg_like", "quality": 50 },
            { "type": "rotate", "degrees": 45.0, "interp": "bilinear" },
            { "type": "rotate", "degrees": 90.0, "interp": "nearest" },
            { "type": "rotate", "degrees": 180.0, "interp": "nearest" },
            { "type": "gaussian_blur", "sigma": 1.0, "k": 5 },
            { "type": "scale", "factor": 3.0, "interp": "bilinear" },
            { "type": "scale", "factor": 0.5, "interp": "bilinear" },
            { "type": "wiener_filter", "k": 3 }
        ]
    });
    let manifest_path = dir.join("manifest.json");
    fs::write(&manifest_path, serde_json::to_string_pretty(&manifest)? + "\n")?;
    println!("wrote {}", manifest_path.display());
    Ok(())
}
