//! Seeded smooth image datasets built from Gaussian bumps.

use crate::error::{Error, Result};
use crate::io::Dataset;
use crate::matrix::NonnegMatrix;
use crate::rng::Rng;
use crate::transfer::ImageGrid;

/// `n` images of `height x width`, each a sum of `blobs` isotropic Gaussian
/// bumps clipped to `[0, 1]`.
///
/// Per bump the generator draws, in order: center row in `[0, height)`,
/// center column in `[0, width)`, width in `[height/8, height/3]` and
/// amplitude in `[0.2, 1]`. Images are generated in column order.
pub fn synth_smooth_dataset(height: usize, width: usize, n: usize, blobs: usize, seed: u64) -> Result<Dataset> {
    if blobs == 0 {
        return Err(Error::invalid("at least one blob per image is required"));
    }
    if n == 0 {
        return Err(Error::invalid("at least one image is required"));
    }
    let grid = ImageGrid::new(height, width)?;
    let mut rng = Rng::new(seed);
    let m = grid.len();
    let mut data = vec![0.0; m * n];
    let (min_sigma, max_sigma) = (height as f64 / 8.0, height as f64 / 3.0);
    for img in 0..n {
        let bumps: Vec<(f64, f64, f64, f64)> = (0..blobs)
            .map(|_| {
                let ci = rng.uniform_in(0.0, height as f64);
                let cj = rng.uniform_in(0.0, width as f64);
                let sigma = rng.uniform_in(min_sigma, max_sigma);
                let amp = rng.uniform_in(0.2, 1.0);
                (ci, cj, sigma, amp)
            })
            .collect();
        for j in 0..width {
            for i in 0..height {
                let value: f64 = bumps
                    .iter()
                    .map(|&(ci, cj, sigma, amp)| {
                        let d2 = (i as f64 - ci).powi(2) + (j as f64 - cj).powi(2);
                        amp * (-d2 / (2.0 * sigma * sigma)).exp()
                    })
                    .sum();
                data[grid.index(i, j) * n + img] = value.clamp(0.0, 1.0);
            }
        }
    }
    Dataset::new(
        NonnegMatrix::from_vec(m, n, data)?,
        Some(grid),
        format!("synth-{height}x{width}-n{n}-b{blobs}-s{seed}"),
    )
}
