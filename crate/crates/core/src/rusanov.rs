//! Collocated first-order Rusanov scheme, used as a non-well-balanced baseline and
//! as a fine-grid reference generator.

use crate::error::{Result, RipaError};
use crate::fields::{Bathymetry, RipaState};
use crate::grid::MacGrid;

/// Conserved variables `(h, hu, hv, hθ)` of one cell.
pub type Cons = [f64; 4];

/// Conserved state on the cells of a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ConsState {
    pub q: Vec<Cons>,
    pub time: f64,
}

impl ConsState {
    pub fn from_primitive(h: &[f64], u: &[f64], v: &[f64], theta: &[f64]) -> Self {
        let q = (0..h.len())
            .map(|c| [h[c], h[c] * u[c], h[c] * v[c], h[c] * theta[c]])
            .collect();
        ConsState { q, time: 0.0 }
    }

    pub fn h(&self) -> Vec<f64> {
        self.q.iter().map(|q| q[0]).collect()
    }

    pub fn u(&self) -> Vec<f64> {
        self.q.iter().map(|q| q[1] / q[0]).collect()
    }

    pub fn v(&self) -> Vec<f64> {
        self.q.iter().map(|q| q[2] / q[0]).collect()
    }

    pub fn theta(&self) -> Vec<f64> {
        self.q.iter().map(|q| q[3] / q[0]).collect()
    }

    /// `Σ|K| h` and `Σ|K| hθ`.
    pub fn totals(&self, grid: &MacGrid) -> (f64, f64) {
        let vol = grid.cell_volume(0);
        self.q.iter().fold((0.0, 0.0), |(m, t), q| (m + vol * q[0], t + vol * q[3]))
    }
}

/// Turns a staggered state into cell values, averaging each velocity component over
/// the two faces of its direction.
pub fn from_staggered(state: &RipaState, grid: &MacGrid) -> ConsState {
    let vel = crate::diagnostics::cell_velocity(&state.u, grid);
    let u: Vec<f64> = vel.iter().map(|v| v[0]).collect();
    let v: Vec<f64> = vel.iter().map(|v| v[1]).collect();
    let mut s = ConsState::from_primitive(&state.h, &u, &v, &state.theta);
    s.time = state.time;
    s
}

/// Physical flux in direction `dir` (0 = x, 1 = y).
pub fn physical_flux(q: &Cons, g: f64, dir: usize) -> Cons {
    let [h, hu, hv, ht] = *q;
    let un = if dir == 0 { hu / h } else { hv / h };
    let p = 0.5 * g * h * ht;
    let mut f = [h * un, hu * un, hv * un, ht * un];
    f[1 + dir] += p;
    f
}

/// `|u·n| + sqrt(g h θ)`.
pub fn wave_speed(q: &Cons, g: f64, dir: usize) -> f64 {
    let h = q[0];
    (q[1 + dir] / h).abs() + (g * q[3]).max(0.0).sqrt()
}

/// `½(F(l) + F(r)) - ½λ(r - l)` with `λ` the larger wave speed of the two states.
pub fn rusanov_flux(left: &Cons, right: &Cons, g: f64, dir: usize) -> Cons {
    let fl = physical_flux(left, g, dir);
    let fr = physical_flux(right, g, dir);
    let lam = wave_speed(left, g, dir).max(wave_speed(right, g, dir));
    let mut out = [0.0; 4];
    for i in 0..4 {
        out[i] = 0.5 * (fl[i] + fr[i]) - 0.5 * lam * (right[i] - left[i]);
    }
    out
}

fn mirror(q: &Cons, dir: usize) -> Cons {
    let mut m = *q;
    m[1 + dir] = -m[1 + dir];
    m
}

/// Planar, or radially symmetric with the first axis as radius.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Geometry {
    Planar,
    Radial,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RusanovConfig {
    pub g: f64,
    pub cfl: f64,
    pub t_end: f64,
    pub snapshot_times: Vec<f64>,
    pub max_retries: usize,
    pub geometry: Geometry,
}

impl Default for RusanovConfig {
    fn default() -> Self {
        RusanovConfig {
            g: 1.0,
            cfl: 0.9,
            t_end: 0.0,
            snapshot_times: Vec::new(),
            max_retries: 10,
            geometry: Geometry::Planar,
        }
    }
}

impl RusanovConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.g > 0.0) {
            return Err(RipaError::Config(format!("g must be positive, got {}", self.g)));
        }
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return Err(RipaError::Config(format!("cfl must lie in (0, 1], got {}", self.cfl)));
        }
        if !(self.t_end >= 0.0) {
            return Err(RipaError::Config(format!("t_end must be non-negative, got {}", self.t_end)));
        }
        Ok(())
    }
}

/// Largest stable step `cfl / max_K Σ_d λ_d/Δx_d`.
pub fn stable_dt(state: &ConsState, grid: &MacGrid, config: &RusanovConfig) -> f64 {
    let mut rate = 0.0_f64;
    for q in &state.q {
        let mut r = 0.0;
        for d in 0..grid.dim() {
            r += wave_speed(q, config.g, d) / grid.spacing(d);
        }
        rate = rate.max(r);
    }
    if rate > 0.0 {
        config.cfl / rate
    } else {
        f64::INFINITY
    }
}

/// Forward-Euler update with wall boundaries and the centred source
/// `-g h_K θ_K (b_{K+1} - b_{K-1}) / (2Δx)`.
pub fn rusanov_step(state: &ConsState, b: &[f64], grid: &MacGrid, g: f64, dt: f64, geometry: Geometry) -> ConsState {
    let n = grid.n_cells();
    let mut rhs = vec![[0.0; 4]; n];
    let mut src = vec![[0.0; 4]; n];
    for d in 0..grid.dim() {
        let dx = grid.spacing(d);
        let (nd, no) = if d == 0 { (grid.nx(), grid.ny()) } else { (grid.ny(), grid.nx()) };
        let id = |a: usize, o: usize| if d == 0 { grid.cell_id(a, o) } else { grid.cell_id(o, a) };
        for o in 0..no {
            // faces 0..=nd along the line
            for s in 0..=nd {
                let (l, r, cl, cr) = if s == 0 {
                    let c = id(0, o);
                    (mirror(&state.q[c], d), state.q[c], None, Some(c))
                } else if s == nd {
                    let c = id(nd - 1, o);
                    (state.q[c], mirror(&state.q[c], d), Some(c), None)
                } else {
                    let (a, c) = (id(s - 1, o), id(s, o));
                    (state.q[a], state.q[c], Some(a), Some(c))
                };
                let f = rusanov_flux(&l, &r, g, d);
                let area = match geometry {
                    Geometry::Radial => grid.cell_box(id(0, o))[0][0] + s as f64 * dx,
                    Geometry::Planar => 1.0,
                };
                for i in 0..4 {
                    if let Some(c) = cl {
                        rhs[c][i] -= area * f[i] / dx;
                    }
                    if let Some(c) = cr {
                        rhs[c][i] += area * f[i] / dx;
                    }
                }
            }
            for a in 0..nd {
                let c = id(a, o);
                let bl = if a == 0 { b[c] } else { b[id(a - 1, o)] };
                let br = if a + 1 == nd { b[c] } else { b[id(a + 1, o)] };
                let q = &state.q[c];
                src[c][1 + d] -= g * q[3] * (br - bl) / (2.0 * dx);
            }
        }
    }
    let mut out = state.clone();
    for c in 0..n {
        if geometry == Geometry::Radial {
            // fluxes were weighted by the face radius; the hoop pressure restores ∂_r p
            let rc = grid.cell_center(c)[0];
            let q = &state.q[c];
            for v in rhs[c].iter_mut() {
                *v /= rc;
            }
            rhs[c][1] += 0.5 * g * q[0] * q[3] / rc;
        }
        for i in 0..4 {
            out.q[c][i] += dt * (rhs[c][i] + src[c][i]);
        }
    }
    out.time = state.time + dt;
    out
}

#[derive(Debug, Clone)]
pub struct RusanovTrajectory {
    pub snapshots: Vec<ConsState>,
    pub steps: usize,
    pub retries: usize,
    pub final_state: ConsState,
}

fn first_bad(q: &[Cons]) -> Option<(usize, &'static str, f64)> {
    q.iter().enumerate().find_map(|(c, q)| {
        if !(q[0] > 0.0 && q[0].is_finite()) {
            Some((c, "h", q[0]))
        } else if !(q[3] > 0.0 && q[3].is_finite()) {
            Some((c, "theta", q[3]))
        } else {
            None
        }
    })
}

/// Advances to `t_end`, landing exactly on every snapshot time. A step that loses
/// positivity is halved and retried.
pub fn run_rusanov(
    initial: &ConsState,
    bathymetry: &Bathymetry,
    grid: &MacGrid,
    config: &RusanovConfig,
) -> Result<RusanovTrajectory> {
    config.validate()?;
    if config.geometry == Geometry::Radial && grid.dim() != 1 {
        return Err(RipaError::Config("radial geometry needs a 1D grid".into()));
    }
    let mut times: Vec<f64> = config
        .snapshot_times
        .iter()
        .copied()
        .filter(|&t| t >= initial.time && t <= config.t_end)
        .collect();
    times.push(config.t_end);
    times.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    times.dedup();

    let mut state = initial.clone();
    let mut snapshots = Vec::new();
    let (mut steps, mut retries) = (0, 0);
    let floor = 1e-14 * config.t_end.max(f64::MIN_POSITIVE);
    for target in times {
        while state.time < target {
            let mut dt = stable_dt(&state, grid, config).min(target - state.time);
            let mut attempt = 0;
            let next = loop {
                let next = rusanov_step(&state, &bathymetry.b, grid, config.g, dt, config.geometry);
                match first_bad(&next.q) {
                    None => break next,
                    Some((cell, field, value)) => {
                        if attempt >= config.max_retries {
                            return Err(RipaError::Positivity {
                                field,
                                cell,
                                value,
                                time: state.time,
                            });
                        }
                        attempt += 1;
                        dt *= 0.5;
                        if dt <= floor {
                            return Err(RipaError::TimeStepUnderflow {
                                dt,
                                time: state.time,
                                binding: format!("{field} positivity at cell {cell}"),
                            });
                        }
                    }
                }
            };
            retries += attempt;
            state = next;
            if target - state.time <= 1e-12 * target.abs().max(1.0) {
                state.time = target;
            }
            steps += 1;
        }
        snapshots.push(state.clone());
    }
    Ok(RusanovTrajectory {
        snapshots,
        steps,
        retries,
        final_state: state,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn consistency_for_equal_states() {
        let q = [2.0, 1.0, -0.5, 3.0];
        for d in 0..2 {
            assert_eq!(rusanov_flux(&q, &q, 1.0, d), physical_flux(&q, 1.0, d));
        }
    }

    #[test]
    fn still_symmetric_states_carry_no_mass() {
        let q = [2.0, 0.0, 0.0, 3.0];
        assert_eq!(rusanov_flux(&q, &q, 9.81, 0)[0], 0.0);
    }

    #[test]
    fn dam_break_interface_oracle() {
        let l = [5.0, 0.0, 0.0, 15.0];
        let r = [1.0, 0.0, 0.0, 5.0];
        let lam = 15.0_f64.sqrt();
        let f = rusanov_flux(&l, &r, 1.0, 0);
        assert!((f[0] - (-0.5 * lam * (1.0 - 5.0))).abs() < 1e-14);
        let pl = 0.5 * 25.0 * 3.0;
        let pr = 0.5 * 1.0 * 5.0;
        assert!((f[1] - 0.5 * (pl + pr)).abs() < 1e-13);
        assert!((f[3] - (-0.5 * lam * (5.0 - 15.0))).abs() < 1e-13);
    }

    #[test]
    fn uniform_state_is_unchanged() {
        let g = MacGrid::uniform_2d((0.0, 1.0), (0.0, 1.0), 6, 5).unwrap();
        let n = g.n_cells();
        let s = ConsState::from_primitive(&vec![2.0; n], &vec![0.0; n], &vec![0.0; n], &vec![1.5; n]);
        let next = rusanov_step(&s, &vec![0.0; n], &g, 1.0, 0.01, Geometry::Planar);
        assert_eq!(next.q, s.q);
    }

    #[test]
    fn conserves_mass_and_temperature() {
        for g in [
            MacGrid::uniform_1d(-1.0, 1.0, 50).unwrap(),
            MacGrid::uniform_2d((-1.0, 1.0), (-1.0, 1.0), 12, 10).unwrap(),
        ] {
            let n = g.n_cells();
            let h: Vec<f64> = (0..n).map(|c| 1.0 + 0.5 * (c as f64).sin().abs()).collect();
            let u: Vec<f64> = (0..n).map(|c| 0.3 * (0.7 * c as f64).cos()).collect();
            let v: Vec<f64> = (0..n).map(|c| 0.2 * (0.3 * c as f64).sin()).collect();
            let t: Vec<f64> = (0..n).map(|c| 1.0 + 0.2 * (c as f64).cos()).collect();
            let s = ConsState::from_primitive(&h, &u, &v, &t);
            let cfg = RusanovConfig { t_end: 0.1, ..Default::default() };
            let out = run_rusanov(&s, &Bathymetry::flat(&g), &g, &cfg).unwrap();
            let (m0, t0) = s.totals(&g);
            let (m1, t1) = out.final_state.totals(&g);
            assert!((m1 - m0).abs() <= 1e-12 * m0);
            assert!((t1 - t0).abs() <= 1e-12 * t0);
        }
    }

    #[test]
    fn lake_at_rest_is_not_preserved() {
        let g = MacGrid::uniform_1d(0.0, 1.0, 40).unwrap();
        let n = g.n_cells();
        let b: Vec<f64> = (0..n).map(|c| 0.3 * (3.0 * g.cell_center(c)[0]).sin()).collect();
        let h: Vec<f64> = b.iter().map(|b| 2.0 - b).collect();
        let s = ConsState::from_primitive(&h, &vec![0.0; n], &vec![0.0; n], &vec![1.0; n]);
        let next = rusanov_step(&s, &b, &g, 1.0, 1e-3, Geometry::Planar);
        let moved = next.q.iter().zip(&s.q).any(|(a, b)| (a[1] - b[1]).abs() > 1e-8);
        assert!(moved);
    }

    #[test]
    fn radial_still_water_stays_still() {
        let g = MacGrid::uniform_1d(0.0, 1.0, 30).unwrap();
        let n = g.n_cells();
        let s = ConsState::from_primitive(&vec![1.5; n], &vec![0.0; n], &vec![0.0; n], &vec![2.0; n]);
        let next = rusanov_step(&s, &vec![0.0; n], &g, 1.0, 1e-3, Geometry::Radial);
        for (a, b) in next.q.iter().zip(&s.q) {
            for i in 0..4 {
                assert!((a[i] - b[i]).abs() < 1e-12, "{a:?} {b:?}");
            }
        }
    }

    #[test]
    fn radial_mass_is_conserved_with_area_weights() {
        let g = MacGrid::uniform_1d(0.0, 1.0, 40).unwrap();
        let n = g.n_cells();
        let h: Vec<f64> = (0..n).map(|c| if g.cell_center(c)[0] < 0.5 { 2.0 } else { 1.0 }).collect();
        let s = ConsState::from_primitive(&h, &vec![0.0; n], &vec![0.0; n], &vec![1.0; n]);
        let cfg = RusanovConfig { t_end: 0.1, geometry: Geometry::Radial, ..Default::default() };
        let out = run_rusanov(&s, &Bathymetry::flat(&g), &g, &cfg).unwrap();
        let mass = |s: &ConsState| -> f64 { (0..n).map(|c| g.cell_center(c)[0] * s.q[c][0]).sum() };
        assert!((mass(&out.final_state) - mass(&s)).abs() < 1e-12 * mass(&s));
    }
}
