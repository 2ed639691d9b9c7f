//! Cross-module checks tying the embed/extract pipeline to the exhaustive
//! quantization error table.

use fademark_core::fade::{embed, extract, validate_params, CarrierMode};
use fademark_core::metrics::mse;
use fademark_core::oracle::{build_error_table, exactness_fraction, predict_mse, JointHistogram};
use fademark_core::pixel::{quantize, PixelPlane, Precision, RasterImage, RoundingMode};
use fademark_core::rng::SequenceStream;

/// Cover row f, logo column g: one 256x256 pair visits every (f, g) in
/// [0,255]^2 exactly once.
fn all_pairs_images() -> (RasterImage, RasterImage) {
    let mut cover = Vec::with_capacity(65536);
    let mut logo = Vec::with_capacity(65536);
    for f in 0..256u32 {
        for g in 0..256u32 {
            cover.push(f as u8);
            logo.push(g as u8);
        }
    }
    (
        RasterImage::from_luma8(256, 256, &cover),
        RasterImage::from_luma8(256, 256, &logo),
    )
}

fn random_pair(w: usize, h: usize, seed: u64) -> (RasterImage, RasterImage) {
    let mut rng = SequenceStream::new(seed);
    let cover: Vec<u8> = (0..w * h).map(|_| (rng.next_u64() & 0xFF) as u8).collect();
    let logo: Vec<u8> = (0..w * h).map(|_| (rng.next_u64() & 0xFF) as u8).collect();
    (
        RasterImage::from_luma8(w, h, &cover),
        RasterImage::from_luma8(w, h, &logo),
    )
}

#[test]
fn exact_carrier_round_trip_recovers_every_value_pair() {
    let (cover, logo) = all_pairs_images();
    for a1 in [0.5, 0.75, 0.9, 0.95, 0.99] {
        let params = validate_params(a1).unwrap();
        let wm = embed(&cover, &logo, &params, CarrierMode::ExactCarrier).unwrap();
        let recovered = extract(&wm, &cover, &params).unwrap();
        assert_eq!(
            recovered.plane(0).samples(),
            logo.plane(0).samples(),
            "alpha1 {a1}"
        );
    }
}

#[test]
fn quantized_round_trip_error_matches_table_on_all_pairs() {
    let (cover, logo) = all_pairs_images();
    for a1 in [0.5, 0.75, 0.9, 0.95, 0.99] {
        let params = validate_params(a1).unwrap();
        let table = build_error_table(&params);
        let wm = embed(&cover, &logo, &params, CarrierMode::Quantized8).unwrap();
        let recovered = extract(&wm, &cover, &params).unwrap();
        for ((&f, &g), &r) in cover
            .plane(0)
            .samples()
            .iter()
            .zip(logo.plane(0).samples())
            .zip(recovered.plane(0).samples())
        {
            let expected = i32::from(table.get(f as u8, g as u8));
            assert_eq!(r as i32 - g as i32, expected, "alpha1 {a1} pair ({f}, {g})");
        }
    }
}

#[test]
fn quantized_round_trip_error_matches_table_on_random_images() {
    for a1 in [0.5, 0.75, 0.9, 0.95, 0.99] {
        let params = validate_params(a1).unwrap();
        let table = build_error_table(&params);
        for seed in 0..10u64 {
            let (cover, logo) = random_pair(128, 128, 1000 + seed);
            let wm = embed(&cover, &logo, &params, CarrierMode::Quantized8).unwrap();
            let recovered = extract(&wm, &cover, &params).unwrap();
            for ((&f, &g), &r) in cover
                .plane(0)
                .samples()
                .iter()
                .zip(logo.plane(0).samples())
                .zip(recovered.plane(0).samples())
            {
                assert_eq!(
                    r as i32 - g as i32,
                    i32::from(table.get(f as u8, g as u8))
                );
            }
        }
    }
}

#[test]
fn predicted_mse_equals_measured_mse_exactly() {
    for a1 in [0.5, 0.9, 0.99] {
        let params = validate_params(a1).unwrap();
        let table = build_error_table(&params);
        for seed in 0..5u64 {
            let (cover, logo) = random_pair(64, 64, 77 + seed);
            let hist = JointHistogram::from_pair(&cover, &logo).unwrap();
            let predicted = predict_mse(&table, &hist, hist.total()).unwrap();

            let wm = embed(&cover, &logo, &params, CarrierMode::Quantized8).unwrap();
            let recovered = extract(&wm, &cover, &params).unwrap();
            let measured = mse(&logo, &recovered).unwrap();
            assert!(
                (predicted - measured).abs() < 1e-9,
                "alpha1 {a1}: predicted {predicted} vs measured {measured}"
            );
        }
    }
}

#[test]
fn exactness_fractions_are_frozen() {
    // brute-force results pinned; the 16-bit pair space never changes
    let cases = [
        (0.5, 32896u32),
        (0.75, 16576),
        (0.9, 6743),
        (0.95, 3519),
        (0.99, 889),
    ];
    for (a1, zeros) in cases {
        let table = build_error_table(&validate_params(a1).unwrap());
        let fraction = exactness_fraction(&table);
        assert_eq!(
            fraction,
            f64::from(zeros) / 65536.0,
            "alpha1 {a1}"
        );
    }
    // and the fractions fall monotonically as the cover weight grows
    let ladder: Vec<f64> = cases
        .iter()
        .map(|(a1, _)| exactness_fraction(&build_error_table(&validate_params(*a1).unwrap())))
        .collect();
    for pair in ladder.windows(2) {
        assert!(pair[0] > pair[1]);
    }
}

#[test]
fn watermarked_fidelity_improves_along_the_ratio_ladder() {
    let ladder = [0.5, 0.6, 0.75, 0.8, 0.9, 0.95, 0.97, 0.99];
    let cover = fademark_core::synth::cover(fademark_core::synth::CoverStyle::Gradient, 96, 96);
    let logo = fademark_core::synth::logo(fademark_core::synth::LogoStyle::RingMark, 96, 96);
    let mut prev = f64::INFINITY;
    for a1 in ladder {
        let params = validate_params(a1).unwrap();
        let wm = embed(&cover, &logo, &params, CarrierMode::ExactCarrier).unwrap();
        let stored = quantize(&wm, RoundingMode::default());
        let m = mse(&cover, &stored).unwrap();
        assert!(m <= prev, "alpha1 {a1}: mse {m} rose above {prev}");
        prev = m;
    }
}

#[test]
fn extraction_with_wrong_alpha_departs_from_logo() {
    let (cover, logo) = random_pair(64, 64, 5);
    let embed_params = validate_params(0.99).unwrap();
    let wm = embed(&cover, &logo, &embed_params, CarrierMode::ExactCarrier).unwrap();

    let right = extract(&wm, &cover, &embed_params).unwrap();
    assert_eq!(mse(&logo, &right).unwrap(), 0.0);

    let wrong_params = validate_params(0.95).unwrap();
    let wrong = extract(&wm, &cover, &wrong_params).unwrap();
    assert!(mse(&logo, &wrong).unwrap() > 0.0);
}
