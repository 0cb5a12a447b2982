//! Acceptance gate: every library-level guarantee, one pass/fail line each.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines;
//! each check re-derives its expectations independently of the library code
//! it exercises.

// Negated float comparisons inside `ensure!` are deliberate: a NaN must fail
// the check, and `!(a <= b)` does exactly that where `a > b` would not.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::time::Instant;

use saccade::edges::{sobel_edges, Direction};
use saccade::saliency::{adapt_weights, extract_interest_points, fuse, uncommon_map};
use saccade::segmentation::{cooccurrence, segment, SegmentationMap};
use saccade::session::run_session;
use saccade::{
    pipeline, rgb_to_hsi, FeatureKind, FeatureMap, FusionState, Image, InterestPoint,
    PipelineParams, SegmentationParams, SessionParams, SessionState, N_FEATURES,
};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// Evaluates a check and prints exactly one PASS/FAIL line for it.
fn report(tag: &str, what: &str, run: impl FnOnce() -> Result<(), String>) {
    match run() {
        Ok(()) => println!("PASS [{tag}] {what}"),
        Err(reason) => {
            println!("FAIL [{tag}] {what}: {reason}");
            panic!("[{tag}] {what}: {reason}");
        }
    }
}

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !($cond) {
            return Err(format!($($msg)+));
        }
    };
}

fn random_image(w: u32, h: u32, seed: u64) -> Image {
    let mut rng = StdRng::seed_from_u64(seed);
    Image::from_fn(w, h, |_, _| [rng.gen(), rng.gen(), rng.gen()]).unwrap()
}

fn random_intensity(w: u32, h: u32, seed: u64) -> FeatureMap {
    let mut rng = StdRng::seed_from_u64(seed);
    let values = (0..w as usize * h as usize).map(|_| rng.gen()).collect();
    FeatureMap::new(w, h, FeatureKind::Intensity, values).unwrap()
}

#[test]
fn acceptance_01_ten_maps_in_canonical_order() {
    report(
        "01",
        "pipeline yields ten feature maps in canonical order",
        || {
            let image = random_image(64, 48, 1001);
            let state = FusionState::new(N_FEATURES).unwrap();
            let out =
                pipeline(&image, &state, &PipelineParams::default()).map_err(|e| e.to_string())?;
            ensure!(
                out.feature_maps.len() == 10,
                "{} maps instead of 10",
                out.feature_maps.len()
            );
            let want = [
                FeatureKind::Hue,
                FeatureKind::Saturation,
                FeatureKind::Intensity,
                FeatureKind::Edge0,
                FeatureKind::Edge45,
                FeatureKind::Edge90,
                FeatureKind::Edge135,
                FeatureKind::UncommonH,
                FeatureKind::UncommonS,
                FeatureKind::UncommonI,
            ];
            for (i, (map, want)) in out.feature_maps.iter().zip(want).enumerate() {
                ensure!(
                    map.kind() == want,
                    "map {i} is {:?}, wanted {want:?}",
                    map.kind()
                );
                ensure!(
                    map.width() == 64 && map.height() == 48,
                    "map {i} has the wrong dimensions"
                );
            }
            ensure!(
                out.interest.kind() == FeatureKind::Interest,
                "fused map kind is {:?}",
                out.interest.kind()
            );
            Ok(())
        },
    );
}

#[test]
fn acceptance_02_cooccurrence_matches_oracle() {
    report(
        "02",
        "co-occurrence counts match a brute-force oracle",
        || {
            let offset_sets: [&[(i32, i32)]; 2] = [&[(1, 0), (0, 1)], &[(2, -1), (0, 3), (1, 1)]];
            for seed in 0..50u64 {
                let map = random_intensity(16, 16, 2000 + seed);
                for offsets in offset_sets {
                    let q = 16usize;
                    let m = cooccurrence(&map, q, offsets).map_err(|e| e.to_string())?;
                    // Independent recount with its own quantizer.
                    let level = |v: f64| -> usize {
                        let l = (v * (q as f64 - 1.0) + 0.5).floor() as usize;
                        l.min(q - 1)
                    };
                    let mut counts = vec![0u64; q * q];
                    let mut total = 0u64;
                    for y in 0..16i32 {
                        for x in 0..16i32 {
                            for &(dx, dy) in offsets {
                                let (nx, ny) = (x + dx, y + dy);
                                if (0..16).contains(&nx) && (0..16).contains(&ny) {
                                    let a = level(map.get(x as u32, y as u32));
                                    let b = level(map.get(nx as u32, ny as u32));
                                    counts[a * q + b] += 1;
                                    counts[b * q + a] += 1;
                                    total += 2;
                                }
                            }
                        }
                    }
                    for a in 0..q {
                        for b in 0..q {
                            ensure!(
                                m.count(a, b) == counts[a * q + b],
                                "seed {seed}: count({a},{b}) = {}, oracle {}",
                                m.count(a, b),
                                counts[a * q + b]
                            );
                        }
                    }
                    ensure!(
                        m.total() == total,
                        "seed {seed}: total {} vs oracle {total}",
                        m.total()
                    );
                }
            }
            Ok(())
        },
    );
}

#[test]
fn acceptance_03_directional_edges() {
    report(
        "03",
        "directional edge maps: flat, step, and rotation behavior",
        || {
            // Flat input: zero response in every direction.
            let flat = FeatureMap::filled(12, 10, FeatureKind::Intensity, 0.37).unwrap();
            for dir in Direction::ALL {
                let e = sobel_edges(&flat, dir).map_err(|e| e.to_string())?;
                ensure!(
                    e.values().iter().all(|v| v.abs() <= 1e-12),
                    "{dir:?} responds to a flat input"
                );
            }

            // Vertical step: full response in the two columns beside the step.
            let step = FeatureMap::new(
                8,
                6,
                FeatureKind::Intensity,
                (0..48).map(|i| f64::from(u8::from(i % 8 >= 4))).collect(),
            )
            .unwrap();
            let e = sobel_edges(&step, Direction::D0).map_err(|e| e.to_string())?;
            for y in 0..6 {
                for x in 0..8 {
                    let want = if x == 3 || x == 4 { 1.0 } else { 0.0 };
                    ensure!(
                        (e.get(x, y) - want).abs() <= 1e-12,
                        "step response at ({x},{y}) is {}",
                        e.get(x, y)
                    );
                }
            }

            // Quarter-turn: rotating the image swaps the direction pairs.
            let rot90 = |map: &FeatureMap| {
                let (w, h) = (map.width(), map.height());
                let mut values = Vec::with_capacity(map.values().len());
                for y in 0..w {
                    for x in 0..h {
                        values.push(map.get(y, h - 1 - x));
                    }
                }
                FeatureMap::new(h, w, map.kind(), values).unwrap()
            };
            for seed in 0..20u64 {
                let map = random_intensity(12, 9, 3000 + seed);
                let rotated = rot90(&map);
                for (da, db) in [
                    (Direction::D0, Direction::D90),
                    (Direction::D45, Direction::D135),
                ] {
                    let lhs = sobel_edges(&rotated, da).map_err(|e| e.to_string())?;
                    let rhs = rot90(&sobel_edges(&map, db).map_err(|e| e.to_string())?);
                    for y in 1..lhs.height() - 1 {
                        for x in 1..lhs.width() - 1 {
                            ensure!(
                                (lhs.get(x, y) - rhs.get(x, y)).abs() <= 1e-12,
                                "seed {seed} {da:?}/{db:?} differ at ({x},{y})"
                            );
                        }
                    }
                }
            }
            Ok(())
        },
    );
}

#[test]
fn acceptance_04_color_decomposition() {
    report(
        "04",
        "hue/saturation/intensity worked examples and symmetry",
        || {
            let cases: [([u8; 3], [f64; 3]); 4] = [
                ([51, 102, 153], [7.0 / 12.0, 0.5, 0.4]),
                ([255, 0, 0], [0.0, 1.0, 1.0 / 3.0]),
                ([0, 0, 0], [0.0, 0.0, 0.0]),
                ([128, 128, 128], [0.0, 0.0, 128.0 / 255.0]),
            ];
            for (rgb, want) in cases {
                let image = Image::from_fn(3, 3, |_, _| rgb).unwrap();
                let (h, s, i) = rgb_to_hsi(&image);
                let got = [h.get(1, 1), s.get(1, 1), i.get(1, 1)];
                for (c, (g, w)) in got.iter().zip(want).enumerate() {
                    ensure!(
                        (g - w).abs() <= 1e-6,
                        "{rgb:?} channel {c}: got {g}, wanted {w}"
                    );
                }
            }

            // Swapping color channels must leave saturation and intensity
            // bit-identical: they depend only on the multiset {R, G, B}.
            let mut rng = StdRng::seed_from_u64(404);
            for _ in 0..200 {
                let px: [u8; 3] = [rng.gen(), rng.gen(), rng.gen()];
                let base = Image::from_fn(3, 3, |_, _| px).unwrap();
                let (_, s0, i0) = rgb_to_hsi(&base);
                for perm in [[0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
                    let shuffled =
                        Image::from_fn(3, 3, |_, _| [px[perm[0]], px[perm[1]], px[perm[2]]])
                            .unwrap();
                    let (_, s1, i1) = rgb_to_hsi(&shuffled);
                    ensure!(
                        s0.get(0, 0).to_bits() == s1.get(0, 0).to_bits()
                            && i0.get(0, 0).to_bits() == i1.get(0, 0).to_bits(),
                        "{px:?} permuted by {perm:?} changes saturation or intensity"
                    );
                }
            }
            Ok(())
        },
    );
}

#[test]
fn acceptance_05_three_band_segmentation() {
    report(
        "05",
        "noisy three-band image: three classes, 99% agreement, under 1s",
        || {
            let mut rng = StdRng::seed_from_u64(505);
            let levels: [f64; 3] = [8.0 / 63.0, 32.0 / 63.0, 56.0 / 63.0];
            let (w, h) = (256u32, 256u32);
            let values: Vec<f64> = (0..w as usize * h as usize)
                .map(|i| {
                    let band = (i % w as usize) * 3 / w as usize;
                    (levels[band] + rng.gen_range(-0.02..0.02)).clamp(0.0, 1.0)
                })
                .collect();
            let map = FeatureMap::new(w, h, FeatureKind::Intensity, values).unwrap();

            let start = Instant::now();
            let seg = segment(&map, &SegmentationParams::default()).map_err(|e| e.to_string())?;
            let elapsed = start.elapsed();

            ensure!(
                seg.class_bounds().len() == 3,
                "{} classes instead of 3",
                seg.class_bounds().len()
            );
            ensure!(
                seg.regions().len() == 3,
                "{} regions instead of 3",
                seg.regions().len()
            );
            let mut correct = 0usize;
            for y in 0..h {
                for x in 0..w {
                    let band = (x as usize * 3 / w as usize) as u32;
                    if seg.label(x, y) == band {
                        correct += 1;
                    }
                }
            }
            let frac = correct as f64 / f64::from(w * h);
            ensure!(
                frac >= 0.99,
                "only {frac:.4} of pixels agree with their band"
            );
            ensure!(elapsed.as_secs_f64() < 1.0, "segmentation took {elapsed:?}");
            Ok(())
        },
    );
}

#[test]
fn acceptance_06_rarity_scores_decrease_with_area() {
    report(
        "06",
        "rarity map scores fall strictly with region area",
        || {
            let mut rng = StdRng::seed_from_u64(606);
            for case in 0..100 {
                let n = rng.gen_range(1..8usize);
                let widths: Vec<u32> = (0..n).map(|_| rng.gen_range(1..12)).collect();
                let total: u32 = widths.iter().sum();
                let labels: Vec<u32> = (0..total * 6)
                    .map(|i| {
                        let x = i % total;
                        let mut acc = 0;
                        for (label, &w) in widths.iter().enumerate() {
                            acc += w;
                            if x < acc {
                                return label as u32;
                            }
                        }
                        unreachable!()
                    })
                    .collect();
                let seg = SegmentationMap::from_labels(total, 6, FeatureKind::Saturation, labels)
                    .unwrap();
                let map = uncommon_map(&seg);
                ensure!(map.kind() == FeatureKind::UncommonS, "wrong output kind");

                let mut sample = Vec::new();
                let mut acc = 0;
                for &w in &widths {
                    sample.push(map.get(acc, 0));
                    acc += w;
                }
                if n == 1 {
                    ensure!(
                        map.values().iter().all(|&v| v == 0.0),
                        "case {case}: single region must score zero"
                    );
                    continue;
                }
                for i in 0..n {
                    for j in 0..n {
                        let (ai, aj) = (seg.regions()[i].area, seg.regions()[j].area);
                        if ai < aj {
                            ensure!(
                                sample[i] > sample[j],
                                "case {case}: area {ai} scored {} vs area {aj} scored {}",
                                sample[i],
                                sample[j]
                            );
                        } else if ai == aj {
                            ensure!(
                                sample[i] == sample[j],
                                "case {case}: equal areas scored differently"
                            );
                        }
                    }
                }
            }
            Ok(())
        },
    );
}

#[test]
fn acceptance_07_fusion_is_convex_and_stable() {
    report(
        "07",
        "fusion stays convex and weights stay normalized",
        || {
            let random_maps = |seed: u64| -> Vec<FeatureMap> {
                let mut rng = StdRng::seed_from_u64(seed);
                FeatureKind::CANONICAL
                    .iter()
                    .map(|&kind| {
                        FeatureMap::new(10, 6, kind, (0..60).map(|_| rng.gen()).collect()).unwrap()
                    })
                    .collect()
            };

            // A thousand habituation rounds on random inputs.
            let mut state = FusionState::new(N_FEATURES).unwrap();
            for seed in 0..1000u64 {
                let maps = random_maps(7000 + seed);
                state = adapt_weights(&state, &maps).map_err(|e| e.to_string())?;
                let sum: f64 = state.weights().iter().sum();
                ensure!(
                    (sum - 1.0).abs() <= 1e-9,
                    "after {} rounds the weights sum to {sum}",
                    seed + 1
                );
                ensure!(
                    state.weights().iter().all(|&w| w > 0.0),
                    "a weight went non-positive"
                );
            }

            // Convexity under the evolved (non-uniform) weights.
            let maps = random_maps(424_242);
            let fused = fuse(&maps, &state).map_err(|e| e.to_string())?;
            for idx in 0..fused.values().len() {
                let lo = maps
                    .iter()
                    .map(|m| m.values()[idx])
                    .fold(f64::INFINITY, f64::min);
                let hi = maps
                    .iter()
                    .map(|m| m.values()[idx])
                    .fold(f64::NEG_INFINITY, f64::max);
                let v = fused.values()[idx];
                ensure!(
                    v >= lo - 1e-9 && v <= hi + 1e-9,
                    "pixel {idx}: fused {v} outside [{lo}, {hi}]"
                );
            }

            // Scaling every input by one factor must not move the argmax.
            let argmax = |map: &FeatureMap| {
                map.values()
                    .iter()
                    .enumerate()
                    .max_by(|(_, a), (_, b)| a.partial_cmp(b).unwrap())
                    .map(|(i, _)| i)
                    .unwrap()
            };
            for seed in 0..10u64 {
                let maps = random_maps(8000 + seed);
                let base = argmax(&fuse(&maps, &state).map_err(|e| e.to_string())?);
                for alpha in [0.25, 0.5, 0.75] {
                    let scaled: Vec<FeatureMap> = maps
                        .iter()
                        .map(|m| {
                            FeatureMap::new(
                                m.width(),
                                m.height(),
                                m.kind(),
                                m.values().iter().map(|v| v * alpha).collect(),
                            )
                            .unwrap()
                        })
                        .collect();
                    let got = argmax(&fuse(&scaled, &state).map_err(|e| e.to_string())?);
                    ensure!(
                        got == base,
                        "seed {seed}, alpha {alpha}: argmax moved from {base} to {got}"
                    );
                }
            }
            Ok(())
        },
    );
}

#[test]
fn acceptance_08_habituation_follows_closed_form() {
    report(
        "08",
        "habituation matches its closed form and demotes loud inputs",
        || {
            let mus: [f64; 3] = [0.15, 0.4, 0.9];
            let maps: Vec<FeatureMap> = mus
                .iter()
                .map(|&mu| FeatureMap::filled(6, 6, FeatureKind::Intensity, mu).unwrap())
                .collect();
            let mut state = FusionState::new(3).unwrap();
            for t in 1..=10i32 {
                state = adapt_weights(&state, &maps).map_err(|e| e.to_string())?;
                for (&mu, &m) in mus.iter().zip(state.mean_activation_ema()) {
                    let want = mu * (1.0 - 0.9f64.powi(t));
                    ensure!(
                        (m - want).abs() <= 1e-12,
                        "t={t}, mu={mu}: average {m}, closed form {want}"
                    );
                }
                // The louder the input, the smaller its weight.
                let w = state.weights();
                ensure!(
                    w[0] > w[1] && w[1] > w[2],
                    "t={t}: weights {w:?} not ordered against activations {mus:?}"
                );
            }
            Ok(())
        },
    );
}

#[test]
fn acceptance_09_extraction_matches_oracle() {
    report(
        "09",
        "interest-point extraction matches a rescan oracle",
        || {
            let oracle = |interest: &FeatureMap, k: usize, radius: f64| -> Vec<InterestPoint> {
                let mut suppressed = vec![false; interest.values().len()];
                let mut points: Vec<InterestPoint> = Vec::new();
                while points.len() < k {
                    let mut best: Option<(f64, u32, u32)> = None;
                    for y in 0..interest.height() {
                        for x in 0..interest.width() {
                            if suppressed[(y * interest.width() + x) as usize] {
                                continue;
                            }
                            let v = interest.get(x, y);
                            let better = match best {
                                None => true,
                                Some((bv, by, bx)) => {
                                    v > bv || (v == bv && (y < by || (y == by && x < bx)))
                                }
                            };
                            if better {
                                best = Some((v, y, x));
                            }
                        }
                    }
                    let Some((score, y, x)) = best else { break };
                    for sy in 0..interest.height() {
                        for sx in 0..interest.width() {
                            let dx = f64::from(sx) - f64::from(x);
                            let dy = f64::from(sy) - f64::from(y);
                            if dx * dx + dy * dy <= radius * radius {
                                suppressed[(sy * interest.width() + sx) as usize] = true;
                            }
                        }
                    }
                    points.push(InterestPoint {
                        x,
                        y,
                        score,
                        rank: points.len() as u32,
                    });
                }
                points
            };

            for seed in 0..50u64 {
                let mut rng = StdRng::seed_from_u64(9000 + seed);
                let values: Vec<f64> = (0..256).map(|_| rng.gen()).collect();
                let map = FeatureMap::new(16, 16, FeatureKind::Interest, values).unwrap();
                for radius in [0.0, 1.0, 3.0] {
                    let got =
                        extract_interest_points(&map, 5, radius, 0.0).map_err(|e| e.to_string())?;
                    let want = oracle(&map, 5, radius);
                    ensure!(
                        got == want,
                        "seed {seed}, radius {radius}: {got:?} vs {want:?}"
                    );
                }
            }
            Ok(())
        },
    );
}

#[test]
fn acceptance_10_session_finds_the_novel_patch() {
    report(
        "10",
        "a scanning session fixates a planted patch and never revisits",
        || {
            let (cx, cy) = (1280u32, 512u32);
            let mosaic = Image::from_fn(2048, 1024, |x, y| {
                if (cx - 24..cx + 24).contains(&x) && (cy - 24..cy + 24).contains(&y) {
                    [230, 30, 30]
                } else {
                    [128, 128, 128]
                }
            })
            .unwrap();
            let params = SessionParams {
                window: (256, 128),
                px_per_degree: 10.0,
                inhibition_radius: 50.0,
                max_steps: 10,
                pipeline: PipelineParams {
                    min_score: 0.15,
                    ..PipelineParams::default()
                },
                ..SessionParams::default()
            };
            let state = SessionState::new(mosaic, params).map_err(|e| e.to_string())?;
            let run = run_session(state).map_err(|e| e.to_string())?;

            let fixations = run.state.fixations();
            let hit = fixations.iter().find(|f| {
                let dx = f64::from(f.x) - f64::from(cx);
                let dy = f64::from(f.y) - f64::from(cy);
                (dx * dx + dy * dy).sqrt() <= 50.0
            });
            ensure!(
                hit.is_some(),
                "no fixation within 50 px of the patch in 10 steps; fixations: {fixations:?}"
            );
            for (i, a) in fixations.iter().enumerate() {
                for b in &fixations[i + 1..] {
                    let dx = f64::from(a.x) - f64::from(b.x);
                    let dy = f64::from(a.y) - f64::from(b.y);
                    ensure!(
                        (dx * dx + dy * dy).sqrt() > 50.0,
                        "fixations {a:?} and {b:?} are within the inhibition radius"
                    );
                }
            }
            Ok(())
        },
    );
}

#[test]
fn acceptance_12_runs_are_bit_identical() {
    report(
        "12",
        "pipeline and session reruns are bit-identical",
        || {
            let bits =
                |m: &FeatureMap| -> Vec<u64> { m.values().iter().map(|v| v.to_bits()).collect() };

            let image = random_image(64, 48, 1212);
            let state = FusionState::new(N_FEATURES).unwrap();
            let a =
                pipeline(&image, &state, &PipelineParams::default()).map_err(|e| e.to_string())?;
            let b =
                pipeline(&image, &state, &PipelineParams::default()).map_err(|e| e.to_string())?;
            ensure!(
                bits(&a.interest) == bits(&b.interest),
                "interest maps differ"
            );
            ensure!(a.points == b.points, "interest points differ");
            for (ma, mb) in a.feature_maps.iter().zip(&b.feature_maps) {
                ensure!(
                    bits(ma) == bits(mb),
                    "a {:?} map differs between runs",
                    ma.kind()
                );
            }
            let wa: Vec<u64> = a.state.weights().iter().map(|w| w.to_bits()).collect();
            let wb: Vec<u64> = b.state.weights().iter().map(|w| w.to_bits()).collect();
            ensure!(wa == wb, "updated weights differ");

            let mosaic = Image::from_fn(512, 256, |x, y| {
                if (300..330).contains(&x) && (100..130).contains(&y) {
                    [40, 200, 60]
                } else {
                    [128, 128, 128]
                }
            })
            .unwrap();
            let params = SessionParams {
                window: (128, 64),
                px_per_degree: 8.0,
                inhibition_radius: 30.0,
                max_steps: 6,
                pipeline: PipelineParams {
                    min_score: 0.12,
                    ..PipelineParams::default()
                },
                ..SessionParams::default()
            };
            let run_a = run_session(SessionState::new(mosaic.clone(), params.clone()).unwrap())
                .map_err(|e| e.to_string())?;
            let run_b = run_session(SessionState::new(mosaic, params).unwrap())
                .map_err(|e| e.to_string())?;
            ensure!(
                run_a.state.fixations() == run_b.state.fixations(),
                "session fixations differ"
            );
            ensure!(
                run_a.state.pose().pan.to_bits() == run_b.state.pose().pan.to_bits()
                    && run_a.state.pose().tilt.to_bits() == run_b.state.pose().tilt.to_bits(),
                "final poses differ"
            );
            for (sa, sb) in run_a.steps.iter().zip(&run_b.steps) {
                ensure!(
                    sa.crop_origin == sb.crop_origin && bits(&sa.interest) == bits(&sb.interest),
                    "step {} differs between runs",
                    sa.index
                );
            }
            Ok(())
        },
    );
}
