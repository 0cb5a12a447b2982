//! Implementations of the CLI subcommands.

use std::path::{Path, PathBuf};

use saccade::edges::{sobel_edges, Direction};
use saccade::formats::{
    parse_fusion_state, write_fusion_state, write_points, write_region_table, write_trajectory,
};
use saccade::saliency::uncommon_map;
use saccade::segmentation::segment;
use saccade::{
    pipeline, rgb_to_hsi, run_session, FeatureMap, FusionState, SessionState, N_FEATURES,
};

use crate::config::RunConfig;
use crate::error::{CliError, Result};
use crate::imgio;

/// Splits an image into its three color channels and four directional edge
/// maps, exported on the raw scale.
pub fn decompose(input: &Path, outdir: &Path) -> Result<()> {
    let image = imgio::load_image(input)?;
    let (hue, saturation, intensity) = rgb_to_hsi(&image);
    std::fs::create_dir_all(outdir)?;

    let mut maps: Vec<FeatureMap> = vec![hue, saturation, intensity];
    for dir in Direction::ALL {
        maps.push(sobel_edges(&maps[2], dir)?);
    }
    for map in &maps {
        imgio::save_map_raw(map, &outdir.join(format!("{}.png", map.kind().name())))?;
    }
    Ok(())
}

/// Segments each color channel, exporting label images and region tables.
pub fn segment_cmd(input: &Path, outdir: &Path, cfg: &RunConfig) -> Result<()> {
    let image = imgio::load_image(input)?;
    let (hue, saturation, intensity) = rgb_to_hsi(&image);
    std::fs::create_dir_all(outdir)?;

    let params = cfg.segmentation_params();
    for channel in [hue, saturation, intensity] {
        let name = channel.kind().name();
        let seg = segment(&channel, &params)?;
        imgio::save_labels(&seg, &outdir.join(format!("{name}_labels.png")))?;
        std::fs::write(
            outdir.join(format!("{name}_regions.txt")),
            write_region_table(&seg),
        )?;
    }
    Ok(())
}

/// Exports the three region-rarity maps.
pub fn uncommon(input: &Path, outdir: &Path, cfg: &RunConfig) -> Result<()> {
    let image = imgio::load_image(input)?;
    let (hue, saturation, intensity) = rgb_to_hsi(&image);
    std::fs::create_dir_all(outdir)?;

    let params = cfg.segmentation_params();
    for channel in [hue, saturation, intensity] {
        let seg = segment(&channel, &params)?;
        let rarity = uncommon_map(&seg);
        imgio::save_map_raw(
            &rarity,
            &outdir.join(format!("{}.png", rarity.kind().name())),
        )?;
    }
    Ok(())
}

/// Loads the fusion state (fresh if the file does not exist yet).
fn load_state(path: &Path) -> Result<FusionState> {
    match std::fs::read_to_string(path) {
        Ok(text) => Ok(parse_fusion_state(&text)?),
        Err(err) if err.kind() == std::io::ErrorKind::NotFound => {
            Ok(FusionState::new(N_FEATURES).expect("ten features is a valid state size"))
        }
        Err(err) => Err(err.into()),
    }
}

/// Runs the full pipeline on one frame, exporting the interest map, the
/// ranked points, and the updated fusion state.
pub fn interest(
    input: &Path,
    outdir: &Path,
    state_path: Option<&Path>,
    cfg: &RunConfig,
) -> Result<()> {
    let image = imgio::load_image(input)?;
    std::fs::create_dir_all(outdir)?;
    let state_file: PathBuf = match state_path {
        Some(p) => p.to_path_buf(),
        None => outdir.join("state.txt"),
    };

    let state = load_state(&state_file)?;
    let out = pipeline(&image, &state, &cfg.pipeline_params())?;

    imgio::save_map_normalized(&out.interest, &outdir.join("interest.png"))?;
    imgio::save_map_f64(&out.interest, &outdir.join("interest.f64"))?;
    std::fs::write(outdir.join("points.txt"), write_points(&out.points))?;
    std::fs::write(&state_file, write_fusion_state(&out.state))?;
    Ok(())
}

/// Runs a full scanning session over a mosaic, exporting the trajectory and
/// each step's interest map.
pub fn session(input: &Path, outdir: &Path, cfg: &RunConfig) -> Result<()> {
    let mosaic = imgio::load_image(input)?;
    std::fs::create_dir_all(outdir)?;

    let state = SessionState::new(mosaic, cfg.session_params())?;
    let run = run_session(state)?;

    std::fs::write(outdir.join("trajectory.txt"), write_trajectory(&run.steps))?;
    for step in &run.steps {
        imgio::save_map_normalized(
            &step.interest,
            &outdir.join(format!("step_{:03}_interest.png", step.index)),
        )?;
    }
    Ok(())
}

fn median(samples: &mut [f64]) -> f64 {
    samples.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
    let n = samples.len();
    if n % 2 == 1 {
        samples[n / 2]
    } else {
        (samples[n / 2 - 1] + samples[n / 2]) / 2.0
    }
}

/// Times the pipeline stages over repeated runs and prints median timings.
pub fn bench(input: &Path, reps: usize, cfg: &RunConfig) -> Result<()> {
    if reps == 0 {
        return Err(CliError::Config("--reps must be at least 1".into()));
    }
    let image = imgio::load_image(input)?;
    let params = cfg.pipeline_params();

    let stage_names = [
        "hsi",
        "edges",
        "segmentation",
        "uncommon",
        "fusion",
        "extraction",
    ];
    let mut stage_samples: Vec<Vec<f64>> = vec![Vec::with_capacity(reps); stage_names.len()];
    let mut total_samples: Vec<f64> = Vec::with_capacity(reps);

    for _ in 0..reps {
        let state = FusionState::new(N_FEATURES).expect("ten features is a valid state size");
        let out = pipeline(&image, &state, &params)?;
        for (samples, (_, duration)) in stage_samples.iter_mut().zip(out.timings.stages()) {
            samples.push(duration.as_secs_f64());
        }
        total_samples.push(out.timings.total.as_secs_f64());
    }

    println!(
        "frame {}x{}, {} rep{}",
        image.width(),
        image.height(),
        reps,
        if reps == 1 { "" } else { "s" }
    );
    for (name, samples) in stage_names.iter().zip(&mut stage_samples) {
        println!("{name:<13} {:>9.3} ms", median(samples) * 1e3);
    }
    let total = median(&mut total_samples);
    println!("{:<13} {:>9.3} ms", "total", total * 1e3);
    println!("throughput {:.1} frames/sec", 1.0 / total);
    println!(
        "reference: an early wearable prototype of this pipeline needed about 8 seconds \
         per frame on a 667 MHz processor"
    );
    Ok(())
}
