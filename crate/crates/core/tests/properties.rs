mod common;

use common::{brute_force_nnls, spd_instance, uniform_matrix};
use mlnmf::io::{devectorize, load_pgm_dir, save_dataset_pgm_dir, save_error_heatmap, Dataset};
use mlnmf::io::pgm::read_pgm;
use mlnmf::solvers::nnls::nnls_active_set;
use mlnmf::transfer::{build_prolongation, build_restriction, initialization_bound, prolong, restrict};
use mlnmf::{ImageGrid, NonnegMatrix, Rng};
use proptest::prelude::*;

fn grid_strategy() -> impl Strategy<Value = ImageGrid> {
    (2usize..20, 2usize..20).prop_map(|(h, w)| ImageGrid::new(h, w).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn transfers_keep_nonnegativity(grid in grid_strategy(), seed in any::<u64>(), n in 1usize..4) {
        let mut rng = Rng::new(seed);
        let m = uniform_matrix(grid.len(), n, &mut rng);
        let r = build_restriction(grid).unwrap();
        let p = build_prolongation(grid).unwrap();
        let coarse = restrict(&r, &m).unwrap();
        prop_assert!(coarse.is_nonnegative());
        prop_assert!(prolong(&p, &coarse).unwrap().is_nonnegative());
    }

    #[test]
    fn pgm_round_trip_is_quantization_only(grid in grid_strategy(), seed in any::<u64>(), wide in any::<bool>()) {
        let maxval = if wide { u16::MAX } else { 255 };
        let mut rng = Rng::new(seed);
        let m = uniform_matrix(grid.len(), 3, &mut rng);
        let dir = tempfile::tempdir().unwrap();
        save_dataset_pgm_dir(&Dataset::new(m.clone(), Some(grid), "p").unwrap(), dir.path(), maxval).unwrap();
        let back = load_pgm_dir(dir.path()).unwrap();
        prop_assert_eq!(back.grid, Some(grid));
        let tol = 1.0 / (2.0 * maxval as f64) + 1e-12;
        for (a, b) in m.as_slice().iter().zip(back.matrix.as_slice()) {
            prop_assert!((a - b).abs() <= tol);
        }
    }

    #[test]
    fn devectorize_inverts_column_order(grid in grid_strategy()) {
        let column: Vec<f64> = (0..grid.len()).map(|k| k as f64).collect();
        let raster = devectorize(&column, grid).unwrap();
        for i in 0..grid.height {
            for j in 0..grid.width {
                prop_assert_eq!(raster[i * grid.width + j], column[j * grid.height + i]);
            }
        }
    }

    #[test]
    fn prolongated_coarse_solution_obeys_bound(grid in grid_strategy(), seed in any::<u64>(), r in 1usize..4) {
        let mut rng = Rng::new(seed);
        let coarse = grid.coarsen().unwrap();
        let m = uniform_matrix(grid.len(), 4, &mut rng);
        let v = uniform_matrix(coarse.len(), r, &mut rng);
        let w = uniform_matrix(r, 4, &mut rng);
        let (lhs, rhs) = initialization_bound(
            &m,
            &build_restriction(grid).unwrap(),
            &build_prolongation(grid).unwrap(),
            &v,
            &w,
        ).unwrap();
        prop_assert!(lhs <= rhs * (1.0 + 1e-9));
    }

    #[test]
    fn warm_start_reaches_the_same_optimum(seed in any::<u64>(), r in 1usize..6) {
        let mut rng = Rng::new(seed);
        let (g, h) = spd_instance(r, &mut rng);
        let x0: Vec<f64> = (0..r).map(|_| if rng.next_uniform() < 0.5 { 0.0 } else { rng.next_uniform() }).collect();
        let warm = nnls_active_set(&g, &h, &x0).unwrap();
        let expected = brute_force_nnls(&g, &h);
        for (a, b) in warm.x.iter().zip(&expected) {
            prop_assert!((a - b).abs() <= 1e-8);
        }
    }

    #[test]
    fn heatmap_darkest_pixel_is_largest_error(seed in any::<u64>()) {
        let grid = ImageGrid::new(5, 4).unwrap();
        let mut rng = Rng::new(seed);
        let m = uniform_matrix(grid.len(), 2, &mut rng);
        let v = uniform_matrix(grid.len(), 1, &mut rng);
        let w = uniform_matrix(1, 2, &mut rng);
        let errs: Vec<f64> = (0..grid.len()).map(|i| (m.get(i, 1) - v.get(i, 0) * w.get(0, 1)).abs()).collect();
        let worst = (0..errs.len()).max_by(|&a, &b| errs[a].total_cmp(&errs[b])).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("e.pgm");
        save_error_heatmap(&m, &v, &w, Some(grid), 1, &path).unwrap();
        let img = read_pgm(&path).unwrap();
        let (i, j) = (worst % grid.height, worst / grid.height);
        prop_assert_eq!(img.at(i, j), 0);
    }
}

#[test]
fn nonnegative_matrix_rejects_negative_entries() {
    assert!(NonnegMatrix::from_vec(1, 2, vec![0.5, -1e-300]).is_err());
}
