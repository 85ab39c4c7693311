//! Explicit time integrator with adaptive, verified time steps.

use std::fmt;

use crate::diagnostics::{energy_totals, EnergyTotals};
use crate::error::{Result, RipaError};
use crate::fields::{dual_averages, Bathymetry, CellField, FaceField, RipaState};
use crate::fluxes::{htheta_from_side, lower_is_upwind, FluxSet, InterfaceValues, Variant};
use crate::grid::MacGrid;
use crate::stabilization::{
    compute_lambda, compute_s, eta_field, face_imbalance, pressure, stabilized_gradients,
    StabilizationFields, StabilizedGradients,
};

/// Fraction of `h^n_{D_σ}` used as a stand-in for the unknown `h^{n+1}_{D_σ}` when predicting `δt`.
pub const PREDICTOR_HEIGHT_FACTOR: f64 = 0.8;

#[derive(Debug, Clone, PartialEq)]
pub struct SchemeConfig {
    pub variant: Variant,
    pub g: f64,
    pub alpha: f64,
    pub beta: f64,
    pub eta_safety: f64,
    pub cfl_safety: f64,
    pub max_retries: usize,
    pub t_end: f64,
    pub fixed_dt: Option<f64>,
    pub snapshot_times: Vec<f64>,
}

impl Default for SchemeConfig {
    fn default() -> Self {
        Self {
            variant: Variant::Upwind,
            g: 1.0,
            alpha: 1.0,
            beta: 1.0,
            eta_safety: 1.5,
            cfl_safety: 0.9,
            max_retries: 10,
            t_end: 1.0,
            fixed_dt: None,
            snapshot_times: Vec::new(),
        }
    }
}

impl SchemeConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(RipaError::Config(msg));
        if !(self.g > 0.0 && self.g.is_finite()) {
            return bad(format!("g must be positive, got {}", self.g));
        }
        if !(self.alpha > 0.5 * self.g) {
            return bad(format!("alpha must exceed g/2 = {}, got {}", 0.5 * self.g, self.alpha));
        }
        if !(self.beta > 0.5) {
            return bad(format!("beta must exceed 1/2, got {}", self.beta));
        }
        if !(self.eta_safety > 1.0) {
            return bad(format!("eta_safety must exceed 1, got {}", self.eta_safety));
        }
        if !(self.cfl_safety > 0.0 && self.cfl_safety <= 1.0) {
            return bad(format!("cfl_safety must lie in (0, 1], got {}", self.cfl_safety));
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return bad(format!("t_end must be non-negative, got {}", self.t_end));
        }
        if let Some(dt) = self.fixed_dt {
            if !(dt > 0.0 && dt.is_finite()) {
                return bad(format!("fixed_dt must be positive, got {dt}"));
            }
        }
        if self.snapshot_times.iter().any(|t| !t.is_finite() || *t < 0.0) {
            return bad("snapshot times must be finite and non-negative".into());
        }
        Ok(())
    }
}

/// The restriction that determined a time step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Constraint {
    Positivity,
    Convection,
    Pressure,
    Topography,
    VelocityShift,
    Eta,
    Horizon,
    Fixed,
}

impl Constraint {
    pub fn label(self) -> &'static str {
        match self {
            Constraint::Positivity => "positivity",
            Constraint::Convection => "convection",
            Constraint::Pressure => "pressure",
            Constraint::Topography => "topography",
            Constraint::VelocityShift => "velocity-shift",
            Constraint::Eta => "eta",
            Constraint::Horizon => "horizon",
            Constraint::Fixed => "fixed",
        }
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Admissible step sizes from each restriction, with the face or cell attaining it.
#[derive(Debug, Clone, PartialEq)]
pub struct DtBounds {
    pub positivity: (f64, Option<usize>),
    pub convection: (f64, Option<usize>),
    pub pressure: (f64, Option<usize>),
    pub topography: (f64, Option<usize>),
    pub velocity_shift: (f64, Option<usize>),
    /// First face where `η_σ ≤ 2 / h^{n+1}_{D_σ}`.
    pub eta_violation: Option<usize>,
}

impl DtBounds {
    fn all(&self) -> [(Constraint, (f64, Option<usize>)); 5] {
        [
            (Constraint::Positivity, self.positivity),
            (Constraint::Convection, self.convection),
            (Constraint::Pressure, self.pressure),
            (Constraint::Topography, self.topography),
            (Constraint::VelocityShift, self.velocity_shift),
        ]
    }

    /// Smallest bound, its constraint and location.
    pub fn min(&self) -> (f64, Constraint, Option<usize>) {
        if let Some(f) = self.eta_violation {
            return (0.0, Constraint::Eta, Some(f));
        }
        let mut best = (f64::INFINITY, Constraint::Horizon, None);
        for (c, (v, at)) in self.all() {
            if v < best.0 {
                best = (v, c, at);
            }
        }
        best
    }

    /// First restriction violated by `dt`, if any.
    pub fn violated_by(&self, dt: f64) -> Option<(Constraint, f64, Option<usize>)> {
        if let Some(f) = self.eta_violation {
            return Some((Constraint::Eta, 0.0, Some(f)));
        }
        self.all()
            .into_iter()
            .find(|(_, (v, _))| dt > *v)
            .map(|(c, (v, at))| (c, v, at))
    }
}

/// Predicted time step.
#[derive(Debug, Clone, PartialEq)]
pub struct DtEstimate {
    /// `cfl_safety` times the smallest bound.
    pub dt: f64,
    pub bound: f64,
    pub binding: Constraint,
    pub location: Option<usize>,
    pub bounds: DtBounds,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepReport {
    pub step: usize,
    /// Time at the end of the step.
    pub time: f64,
    pub dt: f64,
    pub retries: usize,
    pub min_h: f64,
    pub min_theta: f64,
    pub energy: EnergyTotals,
    pub binding: Constraint,
}

/// Every intermediate quantity of one update, kept for diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord {
    pub dt: f64,
    pub g: f64,
    pub variant: Variant,
    pub pressure: CellField,
    pub interface: InterfaceValues,
    /// `(∂p)_σ + g (hθ)_σ (∂b)_σ`.
    pub balance: FaceField,
    pub v: FaceField,
    pub stab: StabilizationFields,
    pub gradients: StabilizedGradients,
    pub fluxes: FluxSet,
    pub h_dual_old: FaceField,
    pub h_dual_new: FaceField,
}

/// Donor sides of `(hθ)_σ`, the balance residual and the stabilised velocity.
///
/// For the upwind variant the donor side depends on the sign of `v`, which in
/// turn depends on `(hθ)_σ` through `δu`. The side of `u` is tried first; if
/// the resulting `v` points the other way the opposite side is tried, and kept
/// when it is self-consistent.
pub fn resolve_velocity(
    state: &RipaState,
    p: &[f64],
    b: &[f64],
    eta: &[f64],
    grid: &MacGrid,
    config: &SchemeConfig,
    dt: f64,
) -> (Vec<bool>, FaceField, FaceField) {
    let mut sides = vec![true; grid.n_faces()];
    let mut balance = FaceField::zeros(grid);
    let mut v = state.u.clone();
    for &f in grid.internal_faces() {
        let (k, l) = grid.internal_pair(f).expect("internal");
        let c = grid.face_measure(f) / grid.dual_volume(f);
        let imbalance = |lower: bool| {
            let ht = htheta_from_side(
                state.h[k],
                state.h[l],
                state.theta[k],
                state.theta[l],
                lower,
                config.variant,
            );
            c * face_imbalance(p, b, ht, config.g, k, l)
        };
        let side0 = lower_is_upwind(state.u[f]);
        let mut side = side0;
        let mut x = imbalance(side0);
        let mut vf = state.u[f] - eta[f] * dt * x;
        if config.variant == Variant::Upwind && lower_is_upwind(vf) != side0 {
            let x1 = imbalance(!side0);
            let v1 = state.u[f] - eta[f] * dt * x1;
            if lower_is_upwind(v1) != side0 {
                side = !side0;
                x = x1;
                vf = v1;
            }
        }
        sides[f] = side;
        balance[f] = x;
        v[f] = vf;
    }
    (sides, balance, v)
}

/// One update of the scheme at the given step size, without any checks.
pub fn advance(
    state: &RipaState,
    bathymetry: &Bathymetry,
    grid: &MacGrid,
    config: &SchemeConfig,
    dt: f64,
) -> (RipaState, StepRecord) {
    let g = config.g;
    let b = &bathymetry.b;
    let p = pressure(&state.h, &state.theta, g);
    let eta = eta_field(&state.h, grid, config.eta_safety);
    let (sides, balance, v) = resolve_velocity(state, &p, b, &eta, grid, config, dt);
    let iv = InterfaceValues::with_sides(state, &v, &sides, grid, config.variant);
    let mut delta_u = FaceField::zeros(grid);
    for &f in grid.internal_faces() {
        delta_u[f] = eta[f] * dt * balance[f];
    }
    let s = compute_s(&iv.htheta, &state.u, grid, config.beta, dt);
    let lambda = compute_lambda(&iv.h, &state.u, grid, config.alpha, dt);
    let gradients = stabilized_gradients(&p, b, &lambda, &s, grid);
    let fluxes = FluxSet::assemble(&iv, &v, &state.u, grid);

    let (net_mass, net_temp) = fluxes.cell_net_outflow(grid);
    let mut h = state.h.clone();
    let mut theta = state.theta.clone();
    for c in 0..grid.n_cells() {
        let r = dt / grid.cell_volume(c);
        let dm = r * net_mass[c];
        let dtemp = r * net_temp[c];
        h[c] = state.h[c] - dm;
        // θ' = (hθ - ΔG) / (h - ΔF), written as an increment of θ
        theta[c] = state.theta[c] + (state.theta[c] * dm - dtemp) / h[c];
    }

    let h_dual_old = dual_averages(&state.h, grid);
    let h_dual_new = dual_averages(&h, grid);
    let mut u = FaceField::zeros(grid);
    for &f in grid.internal_faces() {
        let mut conv = 0.0;
        for i in grid.dual_edge_range(f) {
            conv += fluxes.dual[i] * fluxes.u_up[i];
        }
        let rhs = h_dual_old[f] * state.u[f]
            - dt / grid.dual_volume(f) * conv
            - dt * (gradients.dp[f] + g * iv.htheta[f] * gradients.db[f]);
        u[f] = rhs / h_dual_new[f];
    }

    let new = RipaState {
        h,
        u,
        theta,
        time: state.time + dt,
    };
    let record = StepRecord {
        dt,
        g,
        variant: config.variant,
        pressure: p,
        interface: iv,
        balance,
        v,
        stab: StabilizationFields {
            delta_u,
            s,
            lambda,
            eta,
            alpha: config.alpha,
            beta: config.beta,
        },
        gradients,
        fluxes,
        h_dual_old,
        h_dual_new,
    };
    (new, record)
}

/// Per-face data the bounds are evaluated from.
struct BoundInputs<'a> {
    h_sigma: &'a [f64],
    htheta_sigma: &'a [f64],
    /// `|p_L - p_K + g (hθ)_σ (b_L - b_K)|`.
    imbalance: &'a [f64],
    h_dual_new: &'a [f64],
    eta: &'a [f64],
    dual: &'a [f64],
}

fn evaluate_bounds(
    state: &RipaState,
    grid: &MacGrid,
    config: &SchemeConfig,
    inp: &BoundInputs<'_>,
) -> DtBounds {
    let g = config.g;
    let c_theta = state.theta.max();
    let mut positivity = (f64::INFINITY, None);
    let mut convection = (f64::INFINITY, None);
    let mut velocity_shift = (f64::INFINITY, None);
    let mut eta_violation = None;
    let mut a = vec![0.0; grid.n_cells()];
    let mut bk = vec![0.0; grid.n_cells()];
    let keep_min = |slot: &mut (f64, Option<usize>), v: f64, at: usize| {
        if v < slot.0 {
            *slot = (v, Some(at));
        }
    };

    for &f in grid.internal_faces() {
        let (k, l) = grid.internal_pair(f).expect("internal");
        let (hk, hl) = (state.h[k], state.h[l]);
        let (tk, tl) = (state.theta[k], state.theta[l]);
        let sm = grid.face_measure(f);
        let dv = grid.dual_volume(f);
        let rk = grid.perimeter_ratio(k);
        let rl = grid.perimeter_ratio(l);
        let m = rk.max(rl);
        let hs = inp.h_sigma[f];
        let hts = inp.htheta_sigma[f];
        let hd = inp.h_dual_new[f];
        let eta = inp.eta[f];

        let mu_depth = hk.min(hl) / hs * tk.min(tl) / tk.max(tl);
        let mu_temp = (hk * tk).min(hl * tl) / hts;
        let mu = mu_depth.min(mu_temp);
        let eta_tilde = eta * sm / (dv * m);
        let speed = state.u[f].abs() + (eta_tilde * inp.imbalance[f]).sqrt();
        if speed > 0.0 {
            keep_min(&mut positivity, mu / (5.0 * m * speed), f);
        }

        let outflow: f64 = grid
            .dual_edge_range(f)
            .map(|i| (-inp.dual[i]).max(0.0))
            .sum();
        if outflow > 0.0 {
            keep_min(&mut convection, hd * dv / (4.0 * outflow), f);
        }

        let margin = eta - 2.0 / hd;
        if !(margin > 0.0) {
            eta_violation.get_or_insert(f);
        } else {
            let inv_delta = 0.5 * (rk + rl);
            let c_sigma = 2.0 * (1.0 + c_theta) * inv_delta * sm / dv * hs * hs;
            if c_sigma > 0.0 {
                keep_min(&mut velocity_shift, (margin / (eta * eta * c_sigma)).sqrt(), f);
            }
        }

        let wa = sm * sm / dv * hs * hs / hd;
        let wb = sm * sm / dv * g * hts * hts / hd;
        a[k] += wa;
        a[l] += wa;
        bk[k] += wb;
        bk[l] += wb;
    }

    let mut pressure_b = (f64::INFINITY, None);
    let mut topography = (f64::INFINITY, None);
    let alpha = config.alpha;
    let beta = config.beta;
    for c in 0..grid.n_cells() {
        let vol = grid.cell_volume(c);
        let ak = a[c] / vol;
        let bkc = bk[c] / vol;
        if ak > 0.0 {
            keep_min(&mut pressure_b, ((alpha - 0.5 * g) / (4.0 * alpha * alpha * ak)).sqrt(), c);
        }
        if bkc > 0.0 {
            keep_min(&mut topography, ((beta - 0.5) / (4.0 * beta * beta * bkc)).sqrt(), c);
        }
    }

    DtBounds {
        positivity,
        convection,
        pressure: pressure_b,
        topography,
        velocity_shift,
        eta_violation,
    }
}

/// Conservative a-priori bounds: worst case over the donor sides the upwind
/// variant may pick, and `0.8 h^n_{D_σ}` in place of `h^{n+1}_{D_σ}`.
fn predicted_bounds(
    state: &RipaState,
    bathymetry: &Bathymetry,
    grid: &MacGrid,
    config: &SchemeConfig,
    dual: &[f64],
) -> DtBounds {
    let p = pressure(&state.h, &state.theta, config.g);
    let b = &bathymetry.b;
    let eta = eta_field(&state.h, grid, config.eta_safety);
    let mut h_sigma = FaceField::zeros(grid);
    let mut htheta_sigma = FaceField::zeros(grid);
    let mut imbalance = FaceField::zeros(grid);
    for &f in grid.internal_faces() {
        let (k, l) = grid.internal_pair(f).expect("internal");
        let (hk, hl, tk, tl) = (state.h[k], state.h[l], state.theta[k], state.theta[l]);
        let (hts, imb) = match config.variant {
            Variant::Centred => {
                let ht = htheta_from_side(hk, hl, tk, tl, true, Variant::Centred);
                (ht, face_imbalance(&p, b, ht, config.g, k, l).abs())
            }
            Variant::Upwind => {
                let ht0 = htheta_from_side(hk, hl, tk, tl, true, Variant::Upwind);
                let ht1 = htheta_from_side(hk, hl, tk, tl, false, Variant::Upwind);
                let i0 = face_imbalance(&p, b, ht0, config.g, k, l).abs();
                let i1 = face_imbalance(&p, b, ht1, config.g, k, l).abs();
                (ht0.max(ht1), i0.max(i1))
            }
        };
        h_sigma[f] = match config.variant {
            Variant::Centred => 0.5 * (hk + hl),
            Variant::Upwind => hk.max(hl),
        };
        htheta_sigma[f] = hts;
        imbalance[f] = imb;
    }
    let mut h_dual_new = dual_averages(&state.h, grid);
    for x in h_dual_new.iter_mut() {
        *x *= PREDICTOR_HEIGHT_FACTOR;
    }
    evaluate_bounds(
        state,
        grid,
        config,
        &BoundInputs {
            h_sigma: &h_sigma,
            htheta_sigma: &htheta_sigma,
            imbalance: &imbalance,
            h_dual_new: &h_dual_new,
            eta: &eta,
            dual,
        },
    )
}

/// Bounds re-evaluated with the quantities an update actually used.
pub fn verified_bounds(
    old: &RipaState,
    bathymetry: &Bathymetry,
    grid: &MacGrid,
    config: &SchemeConfig,
    record: &StepRecord,
) -> DtBounds {
    let b = &bathymetry.b;
    let mut imbalance = FaceField::zeros(grid);
    for &f in grid.internal_faces() {
        let (k, l) = grid.internal_pair(f).expect("internal");
        imbalance[f] =
            face_imbalance(&record.pressure, b, record.interface.htheta[f], config.g, k, l).abs();
    }
    evaluate_bounds(
        old,
        grid,
        config,
        &BoundInputs {
            h_sigma: &record.interface.h,
            htheta_sigma: &record.interface.htheta,
            imbalance: &imbalance,
            h_dual_new: &record.h_dual_new,
            eta: &record.stab.eta,
            dual: &record.fluxes.dual,
        },
    )
}

/// Predicted admissible step for the current state.
pub fn compute_dt(
    state: &RipaState,
    bathymetry: &Bathymetry,
    grid: &MacGrid,
    config: &SchemeConfig,
) -> DtEstimate {
    // the convective bound needs the dual fluxes of the step being sized:
    // size the step without it first, then evaluate it at that candidate
    let no_dual = vec![0.0; grid.n_dual_edges()];
    let first = predicted_bounds(state, bathymetry, grid, config, &no_dual);
    let (b0, _, _) = first.min();
    let mut bounds = first;
    if b0.is_finite() && b0 > 0.0 {
        let (_, record) = advance(state, bathymetry, grid, config, config.cfl_safety * b0);
        bounds = predicted_bounds(state, bathymetry, grid, config, &record.fluxes.dual);
    }
    let (bound, binding, location) = bounds.min();
    DtEstimate {
        dt: config.cfl_safety * bound,
        bound,
        binding,
        location,
        bounds,
    }
}

fn first_non_positive(values: &[f64]) -> Option<(usize, f64)> {
    values
        .iter()
        .copied()
        .enumerate()
        .find(|(_, v)| !(*v > 0.0 && v.is_finite()))
}

/// One accepted step no longer than `max_dt`.
///
/// The predicted step is verified against the bounds re-evaluated with the
/// actual update and halved until it passes.
pub fn step(
    state: &RipaState,
    bathymetry: &Bathymetry,
    grid: &MacGrid,
    config: &SchemeConfig,
    max_dt: f64,
    step_index: usize,
) -> Result<(RipaState, StepReport, StepRecord)> {
    let estimate = compute_dt(state, bathymetry, grid, config);
    let (mut dt, mut binding) = match config.fixed_dt {
        Some(fixed) => {
            if fixed > estimate.bound {
                return Err(RipaError::FixedStepTooLarge {
                    dt: fixed,
                    bound: estimate.bound,
                    binding: estimate.binding.to_string(),
                });
            }
            (fixed, Constraint::Fixed)
        }
        None => (estimate.dt, estimate.binding),
    };
    if max_dt < dt {
        dt = max_dt;
        binding = Constraint::Horizon;
    }

    let floor = 1e-14 * config.t_end.max(f64::MIN_POSITIVE);
    let mut retries = 0;
    loop {
        if !(dt > floor) && max_dt > floor {
            return Err(RipaError::TimeStepUnderflow {
                dt,
                time: state.time,
                binding: describe_binding(binding, estimate.location),
            });
        }
        let (new, record) = advance(state, bathymetry, grid, config, dt);
        let bounds = verified_bounds(state, bathymetry, grid, config, &record);
        let violation = bounds.violated_by(dt);
        let bad_h = first_non_positive(&new.h);
        let bad_theta = first_non_positive(&new.theta);

        match violation {
            None => {
                if let Some((cell, value)) = bad_h {
                    return Err(RipaError::Positivity { field: "h", cell, value, time: new.time });
                }
                if let Some((cell, value)) = bad_theta {
                    return Err(RipaError::Positivity {
                        field: "theta",
                        cell,
                        value,
                        time: new.time,
                    });
                }
                let report = StepReport {
                    step: step_index,
                    time: new.time,
                    dt,
                    retries,
                    min_h: new.min_h(),
                    min_theta: new.min_theta(),
                    energy: energy_totals(&new, bathymetry, grid, config.g),
                    binding,
                };
                return Ok((new, report, record));
            }
            Some((constraint, bound, at)) => {
                if config.fixed_dt.is_some() {
                    return Err(RipaError::FixedStepTooLarge {
                        dt,
                        bound,
                        binding: describe_binding(constraint, at),
                    });
                }
                if retries >= config.max_retries {
                    return Err(RipaError::RetriesExhausted {
                        dt,
                        bound,
                        binding: describe_binding(constraint, at),
                        retries,
                    });
                }
                retries += 1;
                binding = constraint;
                dt *= 0.5;
            }
        }
    }
}

fn describe_binding(c: Constraint, at: Option<usize>) -> String {
    match at {
        Some(i) => format!("{c} at index {i}"),
        None => c.to_string(),
    }
}

/// Output of [`run`].
#[derive(Debug, Clone)]
pub struct Trajectory {
    /// States at the requested snapshot times (including `t_end`).
    pub snapshots: Vec<RipaState>,
    pub reports: Vec<StepReport>,
    pub final_state: RipaState,
}

/// Sorted, de-duplicated output times in `[t0, t_end]`, always ending at `t_end`.
pub fn output_times(config: &SchemeConfig, t0: f64) -> Vec<f64> {
    let mut times: Vec<f64> = config
        .snapshot_times
        .iter()
        .copied()
        .filter(|&t| t >= t0 && t <= config.t_end)
        .collect();
    times.push(config.t_end);
    times.sort_by(|a, b| a.partial_cmp(b).expect("finite times"));
    times.dedup();
    times
}

/// Advances to `t_end`, hitting every snapshot time exactly.
///
/// `on_step` sees the old state, the new state, the update's intermediates
/// and its report after every accepted step.
pub fn run_with<F>(
    initial: &RipaState,
    bathymetry: &Bathymetry,
    grid: &MacGrid,
    config: &SchemeConfig,
    mut on_step: F,
) -> Result<Trajectory>
where
    F: FnMut(&RipaState, &RipaState, &StepRecord, &StepReport) -> Result<()>,
{
    config.validate()?;
    let mut state = initial.clone();
    let mut snapshots = Vec::new();
    let mut reports = Vec::new();
    let mut n = 0;
    for target in output_times(config, initial.time) {
        while state.time < target {
            let (new, mut report, record) = step(&state, bathymetry, grid, config, target - state.time, n)?;
            let mut new = new;
            if target - new.time <= 1e-12 * target.abs().max(1.0) {
                new.time = target;
                report.time = target;
            }
            on_step(&state, &new, &record, &report)?;
            reports.push(report);
            state = new;
            n += 1;
        }
        snapshots.push(state.clone());
    }
    Ok(Trajectory {
        snapshots,
        reports,
        final_state: state,
    })
}

pub fn run(
    initial: &RipaState,
    bathymetry: &Bathymetry,
    grid: &MacGrid,
    config: &SchemeConfig,
) -> Result<Trajectory> {
    run_with(initial, bathymetry, grid, config, |_, _, _, _| Ok(()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::project_cells;
    use crate::fields::Quadrature;
    use crate::operators::gradient;

    fn dam_break(n: usize) -> (MacGrid, RipaState, Bathymetry) {
        let g = MacGrid::uniform_1d(-1.0, 1.0, n).unwrap();
        let h = project_cells(&|x: [f64; 2]| if x[0] < 0.0 { 5.0 } else { 1.0 }, &g, Quadrature::Midpoint, "h")
            .unwrap();
        let t = project_cells(&|x: [f64; 2]| if x[0] < 0.0 { 3.0 } else { 5.0 }, &g, Quadrature::Midpoint, "t")
            .unwrap();
        let state = RipaState {
            h,
            u: FaceField::zeros(&g),
            theta: t,
            time: 0.0,
        };
        let b = Bathymetry::flat(&g);
        (g, state, b)
    }

    #[test]
    fn config_validation() {
        assert!(SchemeConfig::default().validate().is_ok());
        let bad = [
            SchemeConfig { alpha: 0.5, ..Default::default() },
            SchemeConfig { beta: 0.5, ..Default::default() },
            SchemeConfig { cfl_safety: 1.5, ..Default::default() },
            SchemeConfig { cfl_safety: 0.0, ..Default::default() },
            SchemeConfig { fixed_dt: Some(-1.0), ..Default::default() },
            SchemeConfig { eta_safety: 1.0, ..Default::default() },
        ];
        for c in bad {
            assert!(matches!(c.validate(), Err(RipaError::Config(_))), "{c:?}");
        }
    }

    #[test]
    fn zero_end_time_is_identity() {
        let (g, s, b) = dam_break(20);
        let cfg = SchemeConfig { t_end: 0.0, ..Default::default() };
        let tr = run(&s, &b, &g, &cfg).unwrap();
        assert!(tr.reports.is_empty());
        assert_eq!(tr.final_state, s);
    }

    #[test]
    fn single_step_conserves_mass_and_temperature() {
        let (g, s, b) = dam_break(200);
        for variant in [Variant::Centred, Variant::Upwind] {
            let cfg = SchemeConfig { variant, t_end: 0.2, ..Default::default() };
            let (new, report, _) = step(&s, &b, &g, &cfg, 1.0, 0).unwrap();
            let mass = |st: &RipaState| st.h.iter().sum::<f64>() * g.cell_volume(0);
            let temp = |st: &RipaState| {
                st.h.iter().zip(st.theta.iter()).map(|(h, t)| h * t).sum::<f64>() * g.cell_volume(0)
            };
            assert!(((mass(&new) - mass(&s)) / mass(&s)).abs() < 1e-13);
            assert!(((temp(&new) - temp(&s)) / temp(&s)).abs() < 1e-13);
            assert!(report.dt > 0.0);
            assert!(new.min_h() > 0.0);
        }
    }

    #[test]
    fn first_step_matches_hand_assembled_update() {
        // a state at rest with an unbalanced pressure: the fluxes come from
        // v = -δu only and S = Λ = 0, so the update can be written out directly
        let (g, s, b) = dam_break(8);
        let cfg = SchemeConfig { variant: Variant::Centred, ..Default::default() };
        let dt = 1e-3;
        let (new, rec) = advance(&s, &b, &g, &cfg, dt);
        let p: Vec<f64> = (0..8).map(|c| 0.5 * s.h[c] * s.h[c] * s.theta[c]).collect();
        let dp = gradient(&p, &g);
        let mut v = [0.0; 9];
        let mut hs = [0.0; 9];
        let mut hts = [0.0; 9];
        for f in 1..8 {
            let (k, l) = (f - 1, f);
            hs[f] = 0.5 * (s.h[k] + s.h[l]);
            hts[f] = if s.h[k] == s.h[l] {
                s.h[k] * crate::fluxes::log_mean(s.theta[k], s.theta[l]).unwrap()
            } else {
                0.5 * (s.h[k] * s.theta[k] + s.h[l] * s.theta[l])
            };
            let eta = 3.0 / s.h[k].min(s.h[l]);
            v[f] = -eta * dt * dp[f];
            assert!((rec.v[f] - v[f]).abs() <= 1e-15 * v[f].abs().max(1.0));
        }
        let dx = g.spacing(0);
        let mut h_new = [0.0; 8];
        for c in 0..8 {
            let out = hs[c + 1] * v[c + 1] - hs[c] * v[c];
            h_new[c] = s.h[c] - dt / dx * out;
            assert!((new.h[c] - h_new[c]).abs() < 1e-14);
            let ht = s.h[c] * s.theta[c] - dt / dx * (hts[c + 1] * v[c + 1] - hts[c] * v[c]);
            assert!((new.theta[c] - ht / h_new[c]).abs() < 1e-13);
        }
        for f in 1..8 {
            let hd = 0.5 * (h_new[f - 1] + h_new[f]);
            // u = 0: the convective term and Λ, S vanish
            let u = -dt * dp[f] / hd;
            assert!((new.u[f] - u).abs() < 1e-13, "{} {}", new.u[f], u);
        }
        assert!(rec.stab.s.iter().all(|&x| x == 0.0));
        assert!(rec.stab.lambda.lower.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn dt_scales_with_mesh_size() {
        let dts: Vec<f64> = [100, 200, 400]
            .iter()
            .map(|&n| {
                let (g, s, b) = dam_break(n);
                compute_dt(&s, &b, &g, &SchemeConfig::default()).dt
            })
            .collect();
        for w in dts.windows(2) {
            let r = w[1] / w[0];
            assert!((0.4..=0.6).contains(&r), "{dts:?}");
        }
    }

    #[test]
    fn snapshot_times_are_hit_exactly() {
        let (g, s, b) = dam_break(50);
        let cfg = SchemeConfig {
            t_end: 0.05,
            snapshot_times: vec![0.0, 0.013, 0.05, 0.9],
            ..Default::default()
        };
        let tr = run(&s, &b, &g, &cfg).unwrap();
        let times: Vec<f64> = tr.snapshots.iter().map(|s| s.time).collect();
        assert_eq!(times, vec![0.0, 0.013, 0.05]);
        assert!(tr.reports.iter().all(|r| r.min_h > 0.0 && r.min_theta > 0.0));
    }

    #[test]
    fn fixed_step_above_bound_is_rejected() {
        let (g, s, b) = dam_break(50);
        let cfg = SchemeConfig { fixed_dt: Some(1.0), t_end: 1.0, ..Default::default() };
        let err = step(&s, &b, &g, &cfg, 1.0, 0).unwrap_err();
        assert!(matches!(err, RipaError::FixedStepTooLarge { .. }));
        assert!(err.is_solver_failure());
    }

    #[test]
    fn verified_bounds_hold_after_accepted_steps() {
        let (g, s, b) = dam_break(100);
        let cfg = SchemeConfig { t_end: 0.05, ..Default::default() };
        run_with(&s, &b, &g, &cfg, |old, _, rec, rep| {
            let bounds = verified_bounds(old, &b, &g, &cfg, rec);
            assert!(bounds.violated_by(rep.dt).is_none());
            Ok(())
        })
        .unwrap();
    }
}
