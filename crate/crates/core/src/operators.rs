//! Discrete gradient (cells to faces) and divergence (faces to cells).

use crate::fields::{CellField, FaceField};
use crate::grid::MacGrid;

/// `(∂q)_σ = |σ|/|D_σ| (q_L - q_K)` on internal faces, zero on the boundary.
pub fn gradient(q: &[f64], grid: &MacGrid) -> FaceField {
    let mut out = FaceField::zeros(grid);
    for &f in grid.internal_faces() {
        let (k, l) = grid.internal_pair(f).expect("internal");
        out[f] = grid.face_measure(f) / grid.dual_volume(f) * (q[l] - q[k]);
    }
    out
}

/// `(div v)_K = 1/|K| Σ_σ |σ| v_{σ,K}`.
pub fn divergence(v: &[f64], grid: &MacGrid) -> CellField {
    let mut out = CellField::zeros(grid);
    for (c, slot) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (s, &f) in grid.cell_faces(c).iter().enumerate() {
            acc += grid.face_measure(f) * v[f] * MacGrid::slot_sign(s);
        }
        *slot = acc / grid.cell_volume(c);
    }
    out
}

/// `∫ q div v + ∫ ∇q · v`, which vanishes for `v` zero on external faces.
pub fn check_duality(q: &[f64], v: &[f64], grid: &MacGrid) -> f64 {
    let div = divergence(v, grid);
    let grad = gradient(q, grid);
    let cells: f64 = (0..grid.n_cells())
        .map(|c| grid.cell_volume(c) * q[c] * div[c])
        .sum();
    let faces: f64 = grid
        .internal_faces()
        .iter()
        .map(|&f| grid.dual_volume(f) * grad[f] * v[f])
        .sum();
    cells + faces
}

/// Magnitude against which [`check_duality`] residuals are compared.
pub fn duality_scale(q: &[f64], v: &[f64], grid: &MacGrid) -> f64 {
    let mut s = 0.0;
    for c in 0..grid.n_cells() {
        let flux: f64 = grid
            .cell_faces(c)
            .iter()
            .map(|&f| grid.face_measure(f) * v[f].abs())
            .sum();
        s += q[c].abs() * flux;
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn gradient_examples() {
        let g = MacGrid::uniform_1d(0.0, 2.0, 4).unwrap();
        assert!(gradient(&[3.0; 4], &g).iter().all(|&x| x == 0.0));
        let grad = gradient(&[0.0, 1.0, 3.0, 0.0], &g);
        assert_eq!(grad[2], 4.0);
        assert_eq!(grad[0], 0.0);
        assert_eq!(grad[4], 0.0);
    }

    #[test]
    fn gradient_of_linear_data_is_exact() {
        let g = MacGrid::uniform_1d(-1.0, 2.0, 12).unwrap();
        let q: Vec<f64> = (0..12).map(|c| 0.75 * g.cell_center(c)[0] + 2.0).collect();
        let grad = gradient(&q, &g);
        for &f in g.internal_faces() {
            assert!((grad[f] - 0.75).abs() < 1e-13);
        }
    }

    #[test]
    fn divergence_examples() {
        let g = MacGrid::uniform_1d(0.0, 1.0, 4).unwrap();
        let mut v = vec![2.0; 5];
        let div = divergence(&v, &g);
        assert!(div[1..3].iter().all(|&d| d == 0.0));
        v = vec![0.0, 0.0, 1.0, 0.0, 0.0];
        let div = divergence(&v, &g);
        assert_eq!(div.0, vec![0.0, 4.0, -4.0, 0.0]);

        let g2 = MacGrid::uniform_2d((0.0, 1.0), (0.0, 1.0), 4, 4).unwrap();
        let mut v2 = FaceField::zeros(&g2);
        for f in g2.faces_in(0) {
            v2[f] = 1.5;
        }
        let div2 = divergence(&v2, &g2);
        for c in 0..g2.n_cells() {
            let ci = g2.cell_index(c);
            if ci.i > 0 && ci.i < 3 {
                assert_eq!(div2[c], 0.0);
            }
        }
    }

    #[test]
    fn constant_q_gives_zero_duality_residual() {
        let g = MacGrid::uniform_2d((0.0, 1.0), (0.0, 2.0), 5, 3).unwrap();
        let mut v = FaceField((0..g.n_faces()).map(|f| (f as f64).sin()).collect());
        v.zero_boundary(&g);
        assert!(check_duality(&vec![2.0; g.n_cells()], &v, &g).abs() < 1e-14);
    }

    fn random_fields(g: &MacGrid, seed: &[f64]) -> (Vec<f64>, FaceField) {
        let q: Vec<f64> = (0..g.n_cells())
            .map(|c| seed[c % seed.len()] * (1.0 + c as f64).cos())
            .collect();
        let mut v = FaceField(
            (0..g.n_faces())
                .map(|f| seed[(f * 7) % seed.len()] * (0.3 * f as f64).sin())
                .collect(),
        );
        v.zero_boundary(g);
        (q, v)
    }

    proptest! {
        #[test]
        fn duality_1d(seed in proptest::collection::vec(-5.0f64..5.0, 16)) {
            let g = MacGrid::uniform_1d(0.0, 3.0, 16).unwrap();
            let (q, v) = random_fields(&g, &seed);
            let r = check_duality(&q, &v, &g);
            prop_assert!(r.abs() <= 1e-12 * duality_scale(&q, &v, &g).max(1.0));
        }

        #[test]
        fn duality_2d(seed in proptest::collection::vec(-5.0f64..5.0, 64)) {
            let g = MacGrid::uniform_2d((-1.0, 1.0), (-1.0, 1.0), 8, 8).unwrap();
            let (q, v) = random_fields(&g, &seed);
            let r = check_duality(&q, &v, &g);
            prop_assert!(r.abs() <= 1e-12 * duality_scale(&q, &v, &g).max(1.0));
        }
    }
}
