//! Dataset ingestion and result files.

pub mod pgm;
mod tables;
mod images;

use std::path::Path;

use walkdir::WalkDir;

use crate::error::{Error, Result};
use crate::matrix::NonnegMatrix;
use crate::transfer::ImageGrid;

pub use images::{devectorize, quantize_image, save_basis_mosaic, save_dataset_pgm_dir, save_error_heatmap};
pub use tables::{load_csv, load_matrix_csv, load_trace_csv, save_matrix_csv, save_trace_csv};

/// Data matrix with one column per sample, plus its image grid if known.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub matrix: NonnegMatrix,
    pub grid: Option<ImageGrid>,
    pub name: String,
}

impl Dataset {
    pub fn new(matrix: NonnegMatrix, grid: Option<ImageGrid>, name: impl Into<String>) -> Result<Self> {
        if let Some(g) = grid {
            if g.len() != matrix.rows() {
                return Err(Error::InconsistentDataset(format!(
                    "grid {}x{} has {} pixels but the matrix has {} rows",
                    g.height,
                    g.width,
                    g.len(),
                    matrix.rows()
                )));
            }
        }
        Ok(Self {
            matrix,
            grid,
            name: name.into(),
        })
    }
}

/// Loads every binary PGM under `dir` (recursively) as one column.
///
/// Files are taken in byte-wise ascending path order; files without the
/// `P5` magic are ignored. Pixels are column-vectorized and divided by the
/// file's maxval, so entries lie in `[0, 1]`.
pub fn load_pgm_dir(dir: &Path) -> Result<Dataset> {
    if !dir.is_dir() {
        return Err(Error::InconsistentDataset(format!("{} is not a directory", dir.display())));
    }
    let mut columns: Vec<Vec<f64>> = Vec::new();
    let mut grid: Option<(ImageGrid, String)> = None;
    for entry in WalkDir::new(dir).sort_by_file_name() {
        let entry = entry.map_err(|e| Error::Io(e.into()))?;
        if !entry.file_type().is_file() {
            continue;
        }
        let bytes = std::fs::read(entry.path())?;
        if !pgm::has_pgm_magic(&bytes) {
            continue;
        }
        let name = entry.path().display().to_string();
        let img = pgm::parse_pgm(&bytes, &name)?;
        let g = ImageGrid::new(img.height, img.width)?;
        match &grid {
            None => grid = Some((g, name)),
            Some((first, first_name)) if *first != g => {
                return Err(Error::InconsistentDataset(format!(
                    "{name} is {}x{} but {first_name} is {}x{}",
                    g.height, g.width, first.height, first.width
                )));
            }
            Some(_) => {}
        }
        let scale = img.maxval as f64;
        let mut col = vec![0.0; g.len()];
        for i in 0..g.height {
            for j in 0..g.width {
                col[g.index(i, j)] = img.at(i, j) as f64 / scale;
            }
        }
        columns.push(col);
    }
    let Some((grid, _)) = grid else {
        return Err(Error::InconsistentDataset(format!("no P5 images found in {}", dir.display())));
    };
    let (rows, cols) = (grid.len(), columns.len());
    let mut data = vec![0.0; rows * cols];
    for (j, col) in columns.iter().enumerate() {
        for (i, &x) in col.iter().enumerate() {
            data[i * cols + j] = x;
        }
    }
    let name = dir
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| dir.display().to_string());
    log::info!("loaded {cols} images of {}x{} from {} (pixels scaled by 1/maxval)", grid.height, grid.width, dir.display());
    Dataset::new(NonnegMatrix::from_vec(rows, cols, data)?, Some(grid), name)
}

#[cfg(test)]
mod tests {
    use super::pgm::{write_pgm, PgmImage};
    use super::*;

    fn write(dir: &Path, name: &str, w: usize, h: usize, pixels: Vec<u16>) {
        write_pgm(&dir.join(name), &PgmImage { width: w, height: h, maxval: 255, pixels }).unwrap();
    }

    #[test]
    fn white_images_load_as_ones() {
        let dir = tempfile::tempdir().unwrap();
        for k in 0..3 {
            write(dir.path(), &format!("{k}.pgm"), 4, 4, vec![255; 16]);
        }
        let d = load_pgm_dir(dir.path()).unwrap();
        assert_eq!(d.matrix.shape(), (16, 3));
        assert!(d.matrix.as_slice().iter().all(|&v| v == 1.0));
        assert_eq!(d.grid, Some(ImageGrid::new(4, 4).unwrap()));
    }

    #[test]
    fn column_vectorization_order() {
        let dir = tempfile::tempdir().unwrap();
        write(dir.path(), "a.pgm", 3, 3, (0..9).collect());
        let d = load_pgm_dir(dir.path()).unwrap();
        let expected: Vec<f64> = [0., 3., 6., 1., 4., 7., 2., 5., 8.].iter().map(|v| v / 255.0).collect();
        assert_eq!(d.matrix.column(0), expected);
    }

    #[test]
    fn files_are_ordered_by_name_and_non_pgm_ignored() {
        let dir = tempfile::tempdir().unwrap();
        write(dir.path(), "b.pgm", 1, 2, vec![2, 2]);
        write(dir.path(), "a.pgm", 1, 2, vec![1, 1]);
        std::fs::write(dir.path().join("notes.txt"), "hello").unwrap();
        let d = load_pgm_dir(dir.path()).unwrap();
        assert_eq!(d.matrix.row(0), &[1.0 / 255.0, 2.0 / 255.0]);
    }

    #[test]
    fn mixed_dimensions_and_empty_dirs_fail() {
        let dir = tempfile::tempdir().unwrap();
        assert!(matches!(load_pgm_dir(dir.path()), Err(Error::InconsistentDataset(_))));
        write(dir.path(), "a.pgm", 2, 2, vec![0; 4]);
        write(dir.path(), "b.pgm", 3, 2, vec![0; 6]);
        assert!(matches!(load_pgm_dir(dir.path()), Err(Error::InconsistentDataset(_))));
    }

    #[test]
    fn malformed_file_names_itself() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("bad.pgm"), b"P5\n4 4\n255\n").unwrap();
        match load_pgm_dir(dir.path()) {
            Err(Error::Parse { file, .. }) => assert!(file.ends_with("bad.pgm")),
            other => panic!("unexpected {other:?}"),
        }
    }
}
