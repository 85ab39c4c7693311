//! Energy budgets, identity residuals, error norms and profile utilities.

use crate::error::{Result, RipaError};
use crate::fields::{dual_average, Bathymetry, CellField, FaceField, RipaState};
use crate::grid::MacGrid;
use crate::operators::gradient;
use crate::scheme::StepRecord;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EnergyTotals {
    pub internal: f64,
    pub kinetic: f64,
    pub potential: f64,
}

impl EnergyTotals {
    pub fn total(&self) -> f64 {
        self.internal + self.kinetic + self.potential
    }
}

/// `Σ|K| ½gh²θ`, `Σ|D_σ| ½h_{D_σ}u²` over internal faces and `Σ|K| ghθb`.
pub fn energy_totals(state: &RipaState, bathymetry: &Bathymetry, grid: &MacGrid, g: f64) -> EnergyTotals {
    let mut e = EnergyTotals::default();
    for c in 0..grid.n_cells() {
        let (h, t) = (state.h[c], state.theta[c]);
        e.internal += grid.cell_volume(c) * 0.5 * g * h * h * t;
        e.potential += grid.cell_volume(c) * g * h * t * bathymetry.b[c];
    }
    for &f in grid.internal_faces() {
        let u = state.u[f];
        e.kinetic += grid.dual_volume(f) * 0.5 * dual_average(&state.h, f, grid) * u * u;
    }
    e
}

/// Residuals of the three per-cell / per-face energy identities of one step,
/// each alongside the sum of absolute values of the terms it balances.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityResiduals {
    pub internal: Vec<(f64, f64)>,
    pub kinetic: Vec<(f64, f64)>,
    pub potential: Vec<(f64, f64)>,
}

/// Largest `|r| / max(s, s_mean)`: relative to the local scale, but near-quiescent
/// entries are measured against the mean scale of the same identity.
fn max_rel(v: &[(f64, f64)]) -> f64 {
    let mean = v.iter().map(|e| e.1).sum::<f64>() / v.len().max(1) as f64;
    v.iter()
        .map(|&(r, s)| {
            let d = s.max(mean);
            if d > 0.0 {
                r.abs() / d
            } else {
                r.abs()
            }
        })
        .fold(0.0, f64::max)
}

impl IdentityResiduals {
    /// Largest `|residual| / scale` over the three identities.
    pub fn max_relative(&self) -> f64 {
        max_rel(&self.internal).max(max_rel(&self.kinetic)).max(max_rel(&self.potential))
    }

    pub fn max_relative_each(&self) -> [f64; 3] {
        [max_rel(&self.internal), max_rel(&self.kinetic), max_rel(&self.potential)]
    }
}

/// Running sum with a rounding scale: terms built from differences carry the
/// magnitude of their operands.
struct Terms(f64, f64);

impl Terms {
    fn new() -> Self {
        Terms(0.0, 0.0)
    }
    fn add(&mut self, x: f64) {
        self.0 += x;
        self.1 += x.abs();
    }
    fn add_with(&mut self, x: f64, magnitude: f64) {
        self.0 += x;
        self.1 += x.abs().max(magnitude);
    }
}

/// Operand magnitude of `(a1 - a0)(b1 - b0)`.
fn product_scale(a1: f64, a0: f64, b1: f64, b0: f64) -> f64 {
    (a1.abs() + a0.abs()) * (b1 - b0).abs() + (b1.abs() + b0.abs()) * (a1 - a0).abs()
}

/// Evaluates `lhs - rhs` of the internal, kinetic and potential energy identities.
pub fn energy_identity_residuals(
    old: &RipaState,
    new: &RipaState,
    rec: &StepRecord,
    bathymetry: &Bathymetry,
    grid: &MacGrid,
) -> IdentityResiduals {
    let g = rec.g;
    let dt = rec.dt;
    let iv = &rec.interface;
    let b = &bathymetry.b;

    let mut internal = Vec::with_capacity(grid.n_cells());
    let mut potential = Vec::with_capacity(grid.n_cells());
    for c in 0..grid.n_cells() {
        let vol = grid.cell_volume(c);
        let (h0, t0, h1, t1) = (old.h[c], old.theta[c], new.h[c], new.theta[c]);
        let (a0, a1) = (h0 * t0, h1 * t1);
        let mut ti = Terms::new();
        ti.add_with(
            vol / dt * (0.5 * g * h1 * h1 * t1 - 0.5 * g * h0 * h0 * t0),
            vol / dt * 0.5 * g * (h1 * h1 * t1 + h0 * h0 * t0),
        );
        let mut tp = Terms::new();
        tp.add_with(vol / dt * g * b[c] * (a1 - a0), vol / dt * g * b[c].abs() * (a1 + a0));
        for &f in grid.cell_faces(c) {
            if !grid.is_internal(f) {
                continue;
            }
            let vk = grid.normal_sign(f, c) * rec.v[f];
            let sm = grid.face_measure(f);
            let (hs, hts) = (iv.h[f], iv.htheta[f]);
            ti.add(0.5 * g * sm * hts * hs * vk);
            ti.add(0.5 * g * sm * vk * h0 * h0 * t0);
            ti.add_with(
                -0.5 * g * sm * (hts - a0) * (hs - h0) * vk,
                0.5 * g * sm * vk.abs() * product_scale(hts, a0, hs, h0),
            );
            tp.add(sm * g * hts * vk * b[c]);
        }
        ti.add_with(
            -0.5 * g * vol / dt * (a1 - a0) * (h1 - h0),
            0.5 * g * vol / dt * product_scale(a1, a0, h1, h0),
        );
        internal.push((ti.0, ti.1));
        potential.push((tp.0, tp.1));
    }

    let dp = gradient(&rec.pressure, grid);
    let db = gradient(b, grid);
    let ds = gradient(&rec.stab.s, grid);
    let mut kinetic = Vec::with_capacity(grid.internal_faces().len());
    for &f in grid.internal_faces() {
        let dv = grid.dual_volume(f);
        let sm = grid.face_measure(f);
        let (u0, u1, v) = (old.u[f], new.u[f], rec.v[f]);
        let (hd0, hd1) = (rec.h_dual_old[f], rec.h_dual_new[f]);
        let hts = iv.htheta[f];
        let mut t = Terms::new();
        t.add_with(
            dv / (2.0 * dt) * (hd1 * u1 * u1 - hd0 * u0 * u0),
            dv / (2.0 * dt) * (hd1 * u1 * u1 + hd0 * u0 * u0),
        );
        for (i, e) in grid.dual_edge_range(f).zip(grid.all_dual_edges()[grid.dual_edge_range(f)].iter()) {
            let fe = rec.fluxes.dual[i];
            let up = rec.fluxes.u_up[i];
            t.add(0.5 * fe * up * up);
            if fe < 0.0 {
                let across = e.neighbor.map_or(0.0, |n| old.u[n]);
                t.add_with(
                    -0.5 * fe * (across - u0).powi(2),
                    fe.abs() * (across.abs() + u0.abs()) * (across - u0).abs(),
                );
            }
        }
        t.add(dv * v * dp[f]);
        t.add(dv * g * hts * v * db[f]);
        t.add(dv * rec.stab.delta_u[f] * rec.balance[f]);
        t.add(-sm * u0 * (rec.stab.lambda.upper[f] - rec.stab.lambda.lower[f]));
        t.add(-g * dv * hts * u0 * ds[f]);
        t.add_with(
            -dv / (2.0 * dt) * hd1 * (u1 - u0).powi(2),
            dv / dt * hd1 * (u1.abs() + u0.abs()) * (u1 - u0).abs(),
        );
        kinetic.push((t.0, t.1));
    }

    IdentityResiduals {
        internal,
        kinetic,
        potential,
    }
}

/// The energy quadratics in simplified form and as sums of their original terms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadratics {
    pub a: f64,
    pub r: f64,
    pub q: f64,
    pub a_terms: f64,
    pub r_terms: f64,
    pub q_terms: f64,
    /// Magnitude of the contributions, for tolerances.
    pub scale: f64,
}

pub fn energy_quadratics(old: &RipaState, rec: &StepRecord, grid: &MacGrid) -> Quadratics {
    let g = rec.g;
    let dt = rec.dt;
    let iv = &rec.interface;
    let alpha = rec.stab.alpha;
    let beta = rec.stab.beta;
    let c_theta = old.theta.max();
    let n = grid.n_cells();
    let mut div_h = vec![0.0; n];
    let mut div_ht = vec![0.0; n];
    let mut a_k = vec![0.0; n];
    let mut b_k = vec![0.0; n];
    let mut du_sq = vec![0.0; n];
    for &f in grid.internal_faces() {
        let (k, l) = grid.internal_pair(f).expect("internal");
        let sm = grid.face_measure(f);
        let dv = grid.dual_volume(f);
        let hd = rec.h_dual_new[f];
        let (hs, hts, u) = (iv.h[f], iv.htheta[f], old.u[f]);
        div_h[k] += sm * hs * u;
        div_h[l] -= sm * hs * u;
        div_ht[k] += sm * hts * u;
        div_ht[l] -= sm * hts * u;
        let wa = sm * sm / dv * hs * hs / hd;
        let wb = sm * sm / dv * g * hts * hts / hd;
        a_k[k] += wa;
        a_k[l] += wa;
        b_k[k] += wb;
        b_k[l] += wb;
        let du = rec.stab.delta_u[f];
        du_sq[k] += sm * hs * hs * du * du;
        du_sq[l] += sm * hs * hs * du * du;
    }

    let mut out = Quadratics {
        a: 0.0,
        r: 0.0,
        q: 0.0,
        a_terms: 0.0,
        r_terms: 0.0,
        q_terms: 0.0,
        scale: 0.0,
    };
    let acc = |slot: &mut f64, x: f64, scale: &mut f64| {
        *slot += x;
        *scale += x.abs();
    };
    let mut scale = 0.0;
    for c in 0..n {
        let vol = grid.cell_volume(c);
        let dk = div_h[c] / vol;
        let dtk = div_ht[c] / vol;
        let ak = a_k[c] / vol;
        let bk = b_k[c] / vol;
        acc(&mut out.a, dt * vol * (4.0 * ak * dt * dt * alpha * alpha - alpha + 0.5 * g) * dk * dk, &mut scale);
        acc(&mut out.q, g * dt * vol * (4.0 * bk * dt * dt * beta * beta - beta + 0.5) * dtk * dtk, &mut scale);
        acc(&mut out.a_terms, 0.5 * g * dt * vol * dk * dk, &mut scale);
        acc(&mut out.q_terms, 0.5 * g * dt * vol * dtk * dtk, &mut scale);
        acc(
            &mut out.r_terms,
            dt * (1.0 + c_theta) * grid.perimeter_ratio(c) * du_sq[c],
            &mut scale,
        );
    }
    let ds = gradient(&rec.stab.s, grid);
    for &f in grid.internal_faces() {
        let (k, l) = grid.internal_pair(f).expect("internal");
        let sm = grid.face_measure(f);
        let dv = grid.dual_volume(f);
        let hd = rec.h_dual_new[f];
        let (hs, hts, u) = (iv.h[f], iv.htheta[f], old.u[f]);
        let x = rec.balance[f];
        let eta = rec.stab.eta[f];
        let inv_delta = 0.5 * (grid.perimeter_ratio(k) + grid.perimeter_ratio(l));
        let c_sigma = 2.0 * (1.0 + c_theta) * inv_delta * sm / dv * hs * hs;
        acc(&mut out.r, dt * dv * (c_sigma * dt * dt * eta * eta - eta + 2.0 / hd) * x * x, &mut scale);
        let dl = rec.stab.lambda.upper[f] - rec.stab.lambda.lower[f];
        acc(&mut out.a_terms, sm * u * dl, &mut scale);
        acc(&mut out.a_terms, dt * sm * sm / dv * 2.0 / hd * dl * dl, &mut scale);
        acc(&mut out.r_terms, -dv * rec.stab.delta_u[f] * x, &mut scale);
        acc(&mut out.r_terms, dt * dv * 2.0 / hd * x * x, &mut scale);
        acc(&mut out.q_terms, dv * g * hts * u * ds[f], &mut scale);
        acc(&mut out.q_terms, dt * dv * 2.0 / hd * (g * hts).powi(2) * ds[f] * ds[f], &mut scale);
    }
    out.scale = scale;
    out
}

/// `(g/2) Σ_K Σ_σ |σ| ((hθ)_σ - h_Kθ_K)(h_K - h_σ) v_{σ,K}`, the term the upwind
/// energy inequality adds to the energy change.
pub fn upwind_remainder(old: &RipaState, rec: &StepRecord, grid: &MacGrid) -> f64 {
    let mut acc = 0.0;
    for &f in grid.internal_faces() {
        let (k, l) = grid.internal_pair(f).expect("internal");
        let sm = grid.face_measure(f);
        let (hs, hts, v) = (rec.interface.h[f], rec.interface.htheta[f], rec.v[f]);
        for (c, sign) in [(k, 1.0), (l, -1.0)] {
            let (h, t) = (old.h[c], old.theta[c]);
            acc += sm * (hts - h * t) * (h - hs) * sign * v;
        }
    }
    0.5 * rec.g * acc
}

/// Largest residual of the dual mass balance `|D|(h'_D - h_D)/δt + Σ_ε F_ε`, measured
/// like the energy identities.
pub fn dual_mass_balance_residual(rec: &StepRecord, grid: &MacGrid) -> f64 {
    let entries: Vec<(f64, f64)> = grid
        .internal_faces()
        .iter()
        .map(|&f| {
            let dv = grid.dual_volume(f);
            let lhs = dv * (rec.h_dual_new[f] - rec.h_dual_old[f]) / rec.dt;
            let mut t = Terms::new();
            t.add_with(lhs, dv * (rec.h_dual_new[f].abs() + rec.h_dual_old[f].abs()) / rec.dt);
            for i in grid.dual_edge_range(f) {
                t.add(rec.fluxes.dual[i]);
            }
            (t.0, t.1)
        })
        .collect();
    max_rel(&entries)
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct L1Errors {
    pub h: f64,
    pub u: f64,
    pub theta: f64,
}

/// `Σ|K||q_K - q_ref|` for `h` and `θ`, `Σ|D_σ||u_σ - u_ref|` for the velocity.
pub fn l1_error(state: &RipaState, reference: &RipaState, grid: &MacGrid) -> Result<L1Errors> {
    let nc = grid.n_cells();
    let nf = grid.n_faces();
    if state.h.len() != nc
        || reference.h.len() != nc
        || state.theta.len() != nc
        || reference.theta.len() != nc
        || state.u.len() != nf
        || reference.u.len() != nf
    {
        return Err(RipaError::GridMismatch(format!(
            "expected {nc} cells and {nf} faces, got states of {} and {} cells",
            state.h.len(),
            reference.h.len()
        )));
    }
    let cells = |a: &[f64], b: &[f64]| -> f64 {
        (0..nc).map(|c| grid.cell_volume(c) * (a[c] - b[c]).abs()).sum()
    };
    let u = (0..nf)
        .map(|f| grid.dual_volume(f) * (state.u[f] - reference.u[f]).abs())
        .sum();
    Ok(L1Errors {
        h: cells(&state.h, &reference.h),
        u,
        theta: cells(&state.theta, &reference.theta),
    })
}

/// `Σ|K||a_K - b_K|` for two cell fields of equal length.
pub fn l1_cells(a: &[f64], b: &[f64], cell_volume: f64) -> Result<f64> {
    if a.len() != b.len() {
        return Err(RipaError::GridMismatch(format!("{} vs {} cells", a.len(), b.len())));
    }
    Ok(a.iter().zip(b).map(|(x, y)| cell_volume * (x - y).abs()).sum())
}

/// Componentwise differences to a steady state.
#[derive(Debug, Clone, PartialEq)]
pub struct Perturbation {
    pub h: CellField,
    pub u: FaceField,
    pub theta: CellField,
}

impl Perturbation {
    pub fn max_abs_h(&self) -> f64 {
        self.h.iter().fold(0.0, |m: f64, x| m.max(x.abs()))
    }

    pub fn max_abs_u(&self) -> f64 {
        self.u.max_abs()
    }
}

pub fn perturbation_profile(state: &RipaState, steady: &RipaState) -> Perturbation {
    let diff = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x - y).collect::<Vec<_>>();
    Perturbation {
        h: CellField(diff(&state.h, &steady.h)),
        u: FaceField(diff(&state.u, &steady.u)),
        theta: CellField(diff(&state.theta, &steady.theta)),
    }
}

/// `Σ |q_{i+1} - q_i|` along a line of values.
pub fn total_variation(q: &[f64]) -> f64 {
    q.windows(2).map(|w| (w[1] - w[0]).abs()).sum()
}

/// Cell averages of a piecewise-constant fine profile on a coarse uniform partition of
/// `[lo, hi]`, weighting each fine cell by its overlap.
pub fn restrict_average(fine: &[f64], lo: f64, hi: f64, n_coarse: usize) -> Vec<f64> {
    let nf = fine.len();
    let dxf = (hi - lo) / nf as f64;
    let dxc = (hi - lo) / n_coarse as f64;
    let mut out = vec![0.0; n_coarse];
    for (c, slot) in out.iter_mut().enumerate() {
        let (a, b) = (lo + c as f64 * dxc, lo + (c + 1) as f64 * dxc);
        let first = (((a - lo) / dxf).floor().max(0.0) as usize).min(nf - 1);
        let mut acc = 0.0;
        let mut i = first;
        while i < nf {
            let (fa, fb) = (lo + i as f64 * dxf, lo + (i + 1) as f64 * dxf);
            if fa >= b {
                break;
            }
            let overlap = fb.min(b) - fa.max(a);
            if overlap > 0.0 {
                acc += overlap * fine[i];
            }
            i += 1;
        }
        *slot = acc / dxc;
    }
    out
}

/// Values of a cell field along the horizontal line `y = y0` of a 2D grid.
///
/// When `y0` falls on a row boundary the two adjacent rows are averaged.
pub fn cross_section_x(q: &[f64], grid: &MacGrid, y0: f64) -> Vec<f64> {
    let nx = grid.nx();
    let ny = grid.ny();
    let dy = grid.spacing(1);
    let y_lo = grid.cell_box(0)[1][0];
    let s = (y0 - y_lo) / dy;
    let on_boundary = (s - s.round()).abs() < 1e-9 && s.round() >= 1.0 && (s.round() as usize) < ny;
    (0..nx)
        .map(|i| {
            if on_boundary {
                let j = s.round() as usize;
                0.5 * (q[grid.cell_id(i, j - 1)] + q[grid.cell_id(i, j)])
            } else {
                let j = (s.floor().max(0.0) as usize).min(ny - 1);
                q[grid.cell_id(i, j)]
            }
        })
        .collect()
}

/// Cell-centred velocity obtained by averaging the two faces of each direction.
pub fn cell_velocity(u: &[f64], grid: &MacGrid) -> Vec<[f64; 2]> {
    (0..grid.n_cells())
        .map(|c| {
            let faces = grid.cell_faces(c);
            let ux = 0.5 * (u[faces[0]] + u[faces[1]]);
            let uy = if grid.dim() == 2 {
                0.5 * (u[faces[2]] + u[faces[3]])
            } else {
                0.0
            };
            [ux, uy]
        })
        .collect()
}

/// Pointwise energy density `E` and flux `(E + ½gh²θ) u` per cell.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropyReport {
    pub density: Vec<f64>,
    pub flux: Vec<[f64; 2]>,
}

impl EntropyReport {
    pub fn total(&self, grid: &MacGrid) -> f64 {
        self.density
            .iter()
            .enumerate()
            .map(|(c, e)| grid.cell_volume(c) * e)
            .sum()
    }
}

pub fn entropy_report(state: &RipaState, bathymetry: &Bathymetry, grid: &MacGrid, g: f64) -> EntropyReport {
    let vel = cell_velocity(&state.u, grid);
    let mut density = Vec::with_capacity(grid.n_cells());
    let mut flux = Vec::with_capacity(grid.n_cells());
    for c in 0..grid.n_cells() {
        let (h, t) = (state.h[c], state.theta[c]);
        let [ux, uy] = vel[c];
        let p = 0.5 * g * h * h * t;
        let e = 0.5 * h * (ux * ux + uy * uy) + p + g * h * t * bathymetry.b[c];
        density.push(e);
        flux.push([(e + p) * ux, (e + p) * uy]);
    }
    EntropyReport { density, flux }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fluxes::Variant;
    use crate::scheme::{advance, SchemeConfig};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_state(g: &MacGrid, rng: &mut ChaCha8Rng) -> (RipaState, Bathymetry) {
        let mut u = FaceField((0..g.n_faces()).map(|_| rng.gen_range(-0.5..0.5)).collect());
        u.zero_boundary(g);
        let s = RipaState {
            h: CellField((0..g.n_cells()).map(|_| rng.gen_range(1.0..2.0)).collect()),
            u,
            theta: CellField((0..g.n_cells()).map(|_| rng.gen_range(0.5..1.5)).collect()),
            time: 0.0,
        };
        let b = Bathymetry::from_values(CellField((0..g.n_cells()).map(|_| rng.gen_range(0.0..0.3)).collect()));
        (s, b)
    }

    #[test]
    fn energy_totals_example() {
        let g = MacGrid::uniform_1d(0.0, 1.0, 10).unwrap();
        let s = RipaState {
            h: CellField::constant(&g, 1.0),
            u: FaceField::zeros(&g),
            theta: CellField::constant(&g, 1.0),
            time: 0.0,
        };
        let e = energy_totals(&s, &Bathymetry::flat(&g), &g, 9.81);
        assert!((e.internal - 9.81 / 2.0).abs() < 1e-14);
        assert_eq!(e.kinetic, 0.0);
        assert_eq!(e.potential, 0.0);
    }

    #[test]
    fn identities_hold_on_random_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for grid in [
            MacGrid::uniform_1d(0.0, 1.0, 32).unwrap(),
            MacGrid::uniform_2d((0.0, 1.0), (0.0, 1.0), 8, 8).unwrap(),
        ] {
            for variant in [Variant::Centred, Variant::Upwind] {
                for _ in 0..5 {
                    let (s, b) = random_state(&grid, &mut rng);
                    let cfg = SchemeConfig { variant, ..Default::default() };
                    let dt = 0.5 * crate::scheme::compute_dt(&s, &b, &grid, &cfg).dt;
                    let (new, rec) = advance(&s, &b, &grid, &cfg, dt);
                    let res = energy_identity_residuals(&s, &new, &rec, &b, &grid);
                    assert!(res.max_relative() < 1e-11, "{variant} {:?}", res.max_relative_each());
                    assert!(dual_mass_balance_residual(&rec, &grid) < 1e-12);
                }
            }
        }
    }

    #[test]
    fn quadratics_bound_their_original_terms() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let grid = MacGrid::uniform_2d((0.0, 1.0), (0.0, 1.0), 8, 8).unwrap();
        for _ in 0..5 {
            let (s, b) = random_state(&grid, &mut rng);
            let cfg = SchemeConfig { variant: Variant::Centred, ..Default::default() };
            let est = crate::scheme::compute_dt(&s, &b, &grid, &cfg);
            let (_, rec) = advance(&s, &b, &grid, &cfg, est.dt);
            let q = energy_quadratics(&s, &rec, &grid);
            let tol = 1e-12 * q.scale;
            assert!(q.a_terms <= q.a + tol);
            assert!(q.q_terms <= q.q + tol);
            assert!((q.r_terms - q.r).abs() <= tol);
            assert!(q.a <= tol && q.r <= tol && q.q <= tol, "{q:?}");
        }
    }

    #[test]
    fn hydrostatic_step_has_zero_residuals() {
        let g = MacGrid::uniform_1d(0.0, 1.0, 16).unwrap();
        let s = RipaState {
            h: CellField::constant(&g, 2.0),
            u: FaceField::zeros(&g),
            theta: CellField::constant(&g, 1.5),
            time: 0.0,
        };
        let b = Bathymetry::flat(&g);
        let (new, rec) = advance(&s, &b, &g, &SchemeConfig::default(), 0.01);
        let res = energy_identity_residuals(&s, &new, &rec, &b, &g);
        assert_eq!(res.max_relative(), 0.0);
    }

    #[test]
    fn l1_examples() {
        let g = MacGrid::uniform_1d(0.0, 1.0, 10).unwrap();
        let s = RipaState {
            h: CellField::constant(&g, 1.0),
            u: FaceField::zeros(&g),
            theta: CellField::constant(&g, 1.0),
            time: 0.0,
        };
        assert_eq!(l1_error(&s, &s, &g).unwrap(), L1Errors::default());
        let mut shifted = s.clone();
        for h in shifted.h.iter_mut() {
            *h += 0.25;
        }
        assert!((l1_error(&shifted, &s, &g).unwrap().h - 0.25).abs() < 1e-15);
        let other = MacGrid::uniform_1d(0.0, 1.0, 12).unwrap();
        let wrong = RipaState {
            h: CellField::constant(&other, 1.0),
            u: FaceField::zeros(&other),
            theta: CellField::constant(&other, 1.0),
            time: 0.0,
        };
        assert!(matches!(l1_error(&wrong, &s, &g), Err(RipaError::GridMismatch(_))));
    }

    #[test]
    fn restriction_preserves_averages() {
        let fine: Vec<f64> = (0..5000).map(|i| (i as f64 * 0.01).sin()).collect();
        for n in [100, 200, 400, 3] {
            let coarse = restrict_average(&fine, -1.0, 1.0, n);
            let total_f: f64 = fine.iter().sum::<f64>() * 2.0 / 5000.0;
            let total_c: f64 = coarse.iter().sum::<f64>() * 2.0 / n as f64;
            assert!((total_f - total_c).abs() < 1e-12);
        }
        assert_eq!(restrict_average(&[1.0, 3.0], 0.0, 1.0, 1), vec![2.0]);
    }

    #[test]
    fn cross_section_averages_rows_on_boundary() {
        let g = MacGrid::uniform_2d((-1.0, 1.0), (-1.0, 1.0), 4, 4).unwrap();
        let q: Vec<f64> = (0..16).map(|c| (c / 4) as f64).collect();
        assert_eq!(cross_section_x(&q, &g, 0.0), vec![1.5; 4]);
        assert_eq!(cross_section_x(&q, &g, 0.3), vec![2.0; 4]);
    }

    #[test]
    fn total_variation_example() {
        assert_eq!(total_variation(&[1.0, 3.0, 2.0, 2.0]), 3.0);
    }

    #[test]
    fn perturbation_of_steady_state_is_zero() {
        let g = MacGrid::uniform_1d(0.0, 1.0, 4).unwrap();
        let s = RipaState {
            h: CellField::constant(&g, 1.0),
            u: FaceField::zeros(&g),
            theta: CellField::constant(&g, 1.0),
            time: 0.0,
        };
        let p = perturbation_profile(&s, &s);
        assert_eq!(p.max_abs_h(), 0.0);
        assert_eq!(p.max_abs_u(), 0.0);
    }
}
