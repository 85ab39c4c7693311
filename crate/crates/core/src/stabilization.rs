//! Stabilisation terms `δu`, `S`, `Λ` and the stabilised gradients.

use crate::fields::{CellField, FaceField};
use crate::grid::MacGrid;
use crate::operators::{divergence, gradient};

/// `p_K = ½ g h_K² θ_K`.
pub fn pressure(h: &[f64], theta: &[f64], g: f64) -> CellField {
    CellField(h.iter().zip(theta).map(|(&h, &t)| 0.5 * g * h * h * t).collect())
}

/// `η_σ = 2 · safety / min(h_K, h_L)` on internal faces.
pub fn eta_field(h: &[f64], grid: &MacGrid, safety: f64) -> FaceField {
    let mut eta = FaceField::zeros(grid);
    for &f in grid.internal_faces() {
        let (k, l) = grid.internal_pair(f).expect("internal");
        eta[f] = 2.0 * safety / h[k].min(h[l]);
    }
    eta
}

/// `p_L - p_K + g (hθ)_σ (b_L - b_K)`, the undivided hydrostatic imbalance.
pub fn face_imbalance(p: &[f64], b: &[f64], htheta_f: f64, g: f64, k: usize, l: usize) -> f64 {
    (p[l] - p[k]) + g * htheta_f * (b[l] - b[k])
}

/// `(∂p)_σ + g (hθ)_σ (∂b)_σ` on internal faces.
pub fn balance_residual(p: &[f64], b: &[f64], htheta: &[f64], g: f64, grid: &MacGrid) -> FaceField {
    let mut x = FaceField::zeros(grid);
    for &f in grid.internal_faces() {
        let (k, l) = grid.internal_pair(f).expect("internal");
        x[f] = grid.face_measure(f) / grid.dual_volume(f) * face_imbalance(p, b, htheta[f], g, k, l);
    }
    x
}

/// `δu_σ = η_σ δt X_σ`; zero on external faces.
pub fn compute_delta_u(balance: &[f64], eta: &[f64], dt: f64, grid: &MacGrid) -> FaceField {
    let mut du = FaceField::zeros(grid);
    for &f in grid.internal_faces() {
        du[f] = eta[f] * dt * balance[f];
    }
    du
}

/// `S_K = β δt div_K((hθ)_σ u)`, using the raw velocity.
pub fn compute_s(htheta: &[f64], u: &[f64], grid: &MacGrid, beta: f64, dt: f64) -> CellField {
    let w: Vec<f64> = htheta.iter().zip(u).map(|(a, b)| a * b).collect();
    let mut s = divergence(&w, grid);
    for x in s.iter_mut() {
        *x *= beta * dt;
    }
    s
}

/// `Λ_{K,σ}` for the lower neighbour and `Λ_{L,σ}` for the upper one, per face.
#[derive(Debug, Clone, PartialEq)]
pub struct Lambda {
    pub lower: FaceField,
    pub upper: FaceField,
}

impl Lambda {
    pub fn zeros(grid: &MacGrid) -> Self {
        Self {
            lower: FaceField::zeros(grid),
            upper: FaceField::zeros(grid),
        }
    }
}

/// `Λ_{K,σ} = α h_σ δt div_K(h_σ u)`.
pub fn compute_lambda(h_sigma: &[f64], u: &[f64], grid: &MacGrid, alpha: f64, dt: f64) -> Lambda {
    let w: Vec<f64> = h_sigma.iter().zip(u).map(|(a, b)| a * b).collect();
    let div = divergence(&w, grid);
    let mut out = Lambda::zeros(grid);
    for &f in grid.internal_faces() {
        let (k, l) = grid.internal_pair(f).expect("internal");
        out.lower[f] = alpha * h_sigma[f] * dt * div[k];
        out.upper[f] = alpha * h_sigma[f] * dt * div[l];
    }
    out
}

/// All stabilisation terms of one step.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilizationFields {
    pub delta_u: FaceField,
    pub s: CellField,
    pub lambda: Lambda,
    pub eta: FaceField,
    pub alpha: f64,
    pub beta: f64,
}

/// `(∂p)*_σ` and `(∂b)*_σ`.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilizedGradients {
    pub dp: FaceField,
    pub db: FaceField,
}

pub fn stabilized_gradients(
    p: &[f64],
    b: &[f64],
    lambda: &Lambda,
    s: &[f64],
    grid: &MacGrid,
) -> StabilizedGradients {
    let mut dp = gradient(p, grid);
    let db_plain = gradient(b, grid);
    let ds = gradient(s, grid);
    let mut db = FaceField::zeros(grid);
    for &f in grid.internal_faces() {
        let (k, l) = grid.internal_pair(f).expect("internal");
        let pk = p[k] - lambda.lower[f];
        let pl = p[l] - lambda.upper[f];
        dp[f] = grid.face_measure(f) / grid.dual_volume(f) * (pl - pk);
        db[f] = db_plain[f] - ds[f];
    }
    StabilizedGradients { dp, db }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{project_cells, Quadrature};
    use crate::fluxes::{htheta_from_side, log_mean, Variant};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn gaussian(x: f64) -> f64 {
        (-(x - 0.5).powi(2) / 0.06).exp() / (2.0 * std::f64::consts::PI * 0.06).sqrt()
    }

    fn htheta_faces(h: &[f64], t: &[f64], grid: &MacGrid, variant: Variant) -> FaceField {
        let mut out = FaceField::zeros(grid);
        for &f in grid.internal_faces() {
            let (k, l) = grid.internal_pair(f).unwrap();
            out[f] = htheta_from_side(h[k], h[l], t[k], t[l], true, variant);
        }
        out
    }

    #[test]
    fn lake_at_rest_is_balanced_facewise() {
        let g = MacGrid::uniform_1d(0.0, 3.0, 200).unwrap();
        let b = project_cells(&|x: [f64; 2]| 0.1 + gaussian(x[0]), &g, Quadrature::Gauss2, "b").unwrap();
        let h = project_cells(&|x: [f64; 2]| 8.0 - 0.1 - gaussian(x[0]), &g, Quadrature::Gauss2, "h")
            .unwrap();
        let t = vec![1.0; 200];
        for variant in [Variant::Centred, Variant::Upwind] {
            let ht = htheta_faces(&h, &t, &g, variant);
            let p = pressure(&h, &t, 1.0);
            let x = balance_residual(&p, &b, &ht, 1.0, &g);
            assert!(x.max_abs() < 1e-11, "{}", x.max_abs());
        }
    }

    #[test]
    fn constant_height_balance_rests_on_log_mean() {
        let g = MacGrid::uniform_1d(0.0, 3.0, 200).unwrap();
        let bf = |x: [f64; 2]| 10.0 + x[0] * (1.0 - x[0]);
        let b = project_cells(&bf, &g, Quadrature::Midpoint, "b").unwrap();
        let t = project_cells(&|x: [f64; 2]| 0.1 * (-2.0 * bf(x)).exp(), &g, Quadrature::Midpoint, "t")
            .unwrap();
        let h = vec![1.0; 200];
        let p = pressure(&h, &t, 1.0);
        let ht = htheta_faces(&h, &t, &g, Variant::Upwind);
        let x = balance_residual(&p, &b, &ht, 1.0, &g);
        let scale = p.max() * g.face_measure(1) / g.dual_volume(1);
        assert!(x.max_abs() <= 1e-13 * scale.max(1e-300) * 1e3, "{}", x.max_abs());
        // with an arithmetic mean instead the imbalance is visible
        let mut bad = 0.0_f64;
        for &f in g.internal_faces() {
            let (k, l) = g.internal_pair(f).unwrap();
            let am = 0.5 * (t[k] + t[l]);
            bad = bad.max(face_imbalance(&p, &b, am, 1.0, k, l).abs());
        }
        assert!(bad > 1e3 * x.max_abs() * g.dual_volume(1));
    }

    #[test]
    fn log_mean_identity_holds() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..1000 {
            let a: f64 = rng.gen_range(1e-9..1e3);
            let b: f64 = a * rng.gen_range(0.5..2.0);
            let m = log_mean(a, b).unwrap();
            let r = b - a - m * (b.ln() - a.ln());
            assert!(r.abs() <= 1e-13 * a.max(b));
        }
    }

    #[test]
    fn isobaric_has_no_imbalance() {
        let g = MacGrid::uniform_1d(0.0, 3.0, 50).unwrap();
        let h = project_cells(&|x: [f64; 2]| 1.0 + 0.2 * gaussian(x[0]), &g, Quadrature::Midpoint, "h")
            .unwrap();
        let t: Vec<f64> = h.iter().map(|h| 1.0 / (h * h)).collect();
        let p = pressure(&h, &t, 1.0);
        let x = balance_residual(&p, &[1.0; 50], &htheta_faces(&h, &t, &g, Variant::Centred), 1.0, &g);
        assert!(x.max_abs() < 1e-13);
        let du = compute_delta_u(&x, &eta_field(&h, &g, 1.5), 0.1, &g);
        assert!(du.max_abs() < 1e-13);
    }

    #[test]
    fn zero_velocity_gives_zero_s_and_lambda() {
        let g = MacGrid::uniform_2d((0.0, 1.0), (0.0, 1.0), 4, 4).unwrap();
        let u = FaceField::zeros(&g);
        let hs = FaceField(vec![2.0; g.n_faces()]);
        assert!(compute_s(&hs, &u, &g, 1.0, 0.1).iter().all(|&s| s == 0.0));
        let lam = compute_lambda(&hs, &u, &g, 1.0, 0.1);
        assert!(lam.lower.iter().chain(lam.upper.iter()).all(|&x| x == 0.0));
    }

    #[test]
    fn s_telescopes_for_equal_fluxes() {
        let g = MacGrid::uniform_1d(0.0, 1.0, 3).unwrap();
        let ht = [0.0, 2.0, 1.0, 0.0];
        let u = [0.0, 0.5, 1.0, 0.0];
        let s = compute_s(&ht, &u, &g, 1.0, 0.3);
        assert_eq!(s[1], 0.0);
    }

    #[test]
    fn s_and_lambda_match_divergence() {
        let g = MacGrid::uniform_2d((0.0, 1.0), (0.0, 2.0), 5, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut u = FaceField((0..g.n_faces()).map(|_| rng.gen_range(-1.0..1.0)).collect());
        u.zero_boundary(&g);
        let hs = FaceField((0..g.n_faces()).map(|_| rng.gen_range(0.5..2.0)).collect());
        let (alpha, beta, dt) = (1.3, 0.8, 0.02);
        let s = compute_s(&hs, &u, &g, beta, dt);
        let lam = compute_lambda(&hs, &u, &g, alpha, dt);
        for c in 0..g.n_cells() {
            let mut acc = 0.0;
            for &f in g.cell_faces(c) {
                acc += g.face_measure(f) * hs[f] * u[f] * g.normal_sign(f, c);
            }
            let div = acc / g.cell_volume(c);
            assert!((s[c] - beta * dt * div).abs() < 1e-13);
            for &f in g.cell_faces(c) {
                if let Some((k, l)) = g.internal_pair(f) {
                    let stored = if k == c { lam.lower[f] } else { lam.upper[f] };
                    assert!((stored - alpha * hs[f] * dt * div).abs() < 1e-13);
                    assert!(k == c || l == c);
                }
            }
        }
        // Λ_{K,σ}/h_σ does not depend on σ
        let c = g.cell_id(2, 1);
        let ratios: Vec<f64> = g
            .cell_faces(c)
            .iter()
            .map(|&f| {
                let (k, _) = g.internal_pair(f).unwrap();
                let v = if k == c { lam.lower[f] } else { lam.upper[f] };
                v / hs[f]
            })
            .collect();
        for r in &ratios {
            assert!((r - ratios[0]).abs() < 1e-13);
        }
    }

    #[test]
    fn stabilized_gradients_reduce_to_plain() {
        let g = MacGrid::uniform_1d(0.0, 1.0, 8).unwrap();
        let p: Vec<f64> = (0..8).map(|i| (i as f64).sin()).collect();
        let b: Vec<f64> = (0..8).map(|i| (i as f64 * 0.3).cos()).collect();
        let sg = stabilized_gradients(&p, &b, &Lambda::zeros(&g), &[0.0; 8], &g);
        assert_eq!(sg.dp, gradient(&p, &g));
        assert_eq!(sg.db, gradient(&b, &g));

        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut lam = Lambda::zeros(&g);
        for &f in g.internal_faces() {
            lam.lower[f] = rng.gen_range(-1.0..1.0);
            lam.upper[f] = rng.gen_range(-1.0..1.0);
        }
        let s: Vec<f64> = (0..8).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let sg = stabilized_gradients(&p, &b, &lam, &s, &g);
        let gp = gradient(&p, &g);
        let gb = gradient(&b, &g);
        let gs = gradient(&s, &g);
        for &f in g.internal_faces() {
            let c = g.face_measure(f) / g.dual_volume(f);
            assert!((sg.dp[f] - (gp[f] - c * (lam.upper[f] - lam.lower[f]))).abs() < 1e-12);
            assert!((sg.db[f] - (gb[f] - gs[f])).abs() < 1e-12);
        }
    }
}
