//! Factor images, error heatmaps and dataset export as PGM.

use std::fs;
use std::path::Path;

use super::pgm::{write_pgm, PgmImage};
use super::Dataset;
use crate::error::{Error, Result};
use crate::matrix::{check_factor_dims, NonnegMatrix};
use crate::transfer::ImageGrid;

/// Reorders a column-vectorized image into a row-major raster.
pub fn devectorize(column: &[f64], grid: ImageGrid) -> Result<Vec<f64>> {
    if column.len() != grid.len() {
        return Err(Error::invalid(format!(
            "vector of length {} does not fit a {}x{} grid",
            column.len(),
            grid.height,
            grid.width
        )));
    }
    let mut raster = Vec::with_capacity(grid.len());
    for i in 0..grid.height {
        for j in 0..grid.width {
            raster.push(column[grid.index(i, j)]);
        }
    }
    Ok(raster)
}

/// Rounds raster values in `[0, 1]` to `maxval` levels; values outside are clamped.
pub fn quantize_image(raster: &[f64], grid: ImageGrid, maxval: u16) -> PgmImage {
    let scale = maxval as f64;
    PgmImage {
        width: grid.width,
        height: grid.height,
        maxval,
        pixels: raster
            .iter()
            .map(|&v| (v.clamp(0.0, 1.0) * scale).round() as u16)
            .collect(),
    }
}

/// Divides by the maximum so it maps to 1; an all-zero raster stays zero.
fn rescale_to_unit(raster: &mut [f64]) {
    let max = raster.iter().cloned().fold(0.0f64, f64::max);
    if max > 0.0 {
        raster.iter_mut().for_each(|v| *v /= max);
    }
}

/// Writes every column of `dataset` as `img_NNNN.pgm` with the given maxval.
pub fn save_dataset_pgm_dir(dataset: &Dataset, dir: &Path, maxval: u16) -> Result<()> {
    let grid = dataset
        .grid
        .ok_or_else(|| Error::Unsupported("dataset has no image grid".into()))?;
    fs::create_dir_all(dir)?;
    for j in 0..dataset.matrix.cols() {
        let raster = devectorize(&dataset.matrix.column(j), grid)?;
        write_pgm(&dir.join(format!("img_{j:04}.pgm")), &quantize_image(&raster, grid, maxval))?;
    }
    Ok(())
}

/// Writes `basis_KKK.pgm` per column of V and a tiled `mosaic.pgm` into `dir`.
///
/// Each basis image is rescaled on its own so its maximum is white. Tiles are
/// laid out in a `ceil(sqrt(r))`-column grid with one black pixel between them.
pub fn save_basis_mosaic(v: &NonnegMatrix, grid: Option<ImageGrid>, dir: &Path) -> Result<()> {
    let grid = grid.ok_or_else(|| Error::Unsupported("basis images need image grid dimensions".into()))?;
    if v.rows() != grid.len() {
        return Err(Error::invalid(format!("V has {} rows, grid has {} pixels", v.rows(), grid.len())));
    }
    fs::create_dir_all(dir)?;
    let r = v.cols();
    let tiles_x = (1..=r).find(|c| c * c >= r).unwrap_or(1);
    let tiles_y = r.div_ceil(tiles_x);
    let mosaic_w = tiles_x * grid.width + tiles_x - 1;
    let mosaic_h = tiles_y * grid.height + tiles_y - 1;
    let mut mosaic = vec![0.0; mosaic_w * mosaic_h];
    for k in 0..r {
        let mut raster = devectorize(&v.column(k), grid)?;
        rescale_to_unit(&mut raster);
        write_pgm(&dir.join(format!("basis_{k:03}.pgm")), &quantize_image(&raster, grid, 255))?;
        let (ty, tx) = (k / tiles_x, k % tiles_x);
        for i in 0..grid.height {
            let y = ty * (grid.height + 1) + i;
            let x0 = tx * (grid.width + 1);
            mosaic[y * mosaic_w + x0..y * mosaic_w + x0 + grid.width]
                .copy_from_slice(&raster[i * grid.width..(i + 1) * grid.width]);
        }
    }
    let mosaic_grid = ImageGrid::new(mosaic_h, mosaic_w)?;
    write_pgm(&dir.join("mosaic.pgm"), &quantize_image(&mosaic, mosaic_grid, 255))?;
    fs::write(
        dir.join("README.txt"),
        format!("{r} basis images of {}x{}; each rescaled so its maximum maps to 255\n", grid.height, grid.width),
    )?;
    Ok(())
}

/// Writes `|M_:j - (VW)_:j|` as a PGM, rescaled by its maximum and inverted
/// so that large errors are dark. A zero error column is all white.
pub fn save_error_heatmap(
    m: &NonnegMatrix,
    v: &NonnegMatrix,
    w: &NonnegMatrix,
    grid: Option<ImageGrid>,
    col: usize,
    path: &Path,
) -> Result<()> {
    let grid = grid.ok_or_else(|| Error::Unsupported("heatmaps need image grid dimensions".into()))?;
    check_factor_dims(m, v, w)?;
    if col >= m.cols() {
        return Err(Error::invalid(format!("column {col} out of range for {} columns", m.cols())));
    }
    if m.rows() != grid.len() {
        return Err(Error::invalid(format!("data has {} rows, grid has {} pixels", m.rows(), grid.len())));
    }
    let err: Vec<f64> = (0..m.rows())
        .map(|i| {
            let approx: f64 = v.row(i).iter().enumerate().map(|(k, &x)| x * w.get(k, col)).sum();
            (m.get(i, col) - approx).abs()
        })
        .collect();
    let mut raster = devectorize(&err, grid)?;
    rescale_to_unit(&mut raster);
    raster.iter_mut().for_each(|x| *x = 1.0 - *x);
    write_pgm(path, &quantize_image(&raster, grid, 255))
}
