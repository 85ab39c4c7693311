//! Interface values and convective fluxes on primal and dual cells.

use std::fmt;
use std::str::FromStr;

use crate::error::{Result, RipaError};
use crate::fields::{FaceField, RipaState};
use crate::grid::MacGrid;

/// Choice of interface values for `h` and `hθ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    Centred,
    Upwind,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Centred => "centred",
            Variant::Upwind => "upwind",
        })
    }
}

impl FromStr for Variant {
    type Err = RipaError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "centred" | "centered" | "c" => Ok(Variant::Centred),
            "upwind" | "u" => Ok(Variant::Upwind),
            other => Err(RipaError::Config(format!(
                "unknown variant '{other}' (expected centred or upwind)"
            ))),
        }
    }
}

/// Relative gap below which the logarithmic mean switches to its series.
const LOG_MEAN_SERIES_GAP: f64 = 1e-4;

/// `(b - a) / (ln b - ln a)`, with `a` when the arguments coincide.
pub fn log_mean(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) {
        return Err(RipaError::NonPositiveMean(a, b));
    }
    Ok(log_mean_positive(a, b))
}

pub(crate) fn log_mean_positive(a: f64, b: f64) -> f64 {
    if a == b {
        return a;
    }
    let z = (b - a) / (b + a);
    if z.abs() < LOG_MEAN_SERIES_GAP {
        // (a+b)/2 * z / atanh(z), expanded to O(z^6)
        let z2 = z * z;
        0.5 * (a + b) / (1.0 + z2 / 3.0 + z2 * z2 / 5.0)
    } else {
        (b - a) / (b.ln() - a.ln())
    }
}

/// True when the upwind cell of a face is its lower neighbour `K`.
#[inline]
pub fn lower_is_upwind(v: f64) -> bool {
    v >= 0.0
}

/// `h_σ`.
pub fn interface_h(h_k: f64, h_l: f64, v: f64, variant: Variant) -> f64 {
    match variant {
        Variant::Centred => 0.5 * (h_k + h_l),
        Variant::Upwind => {
            if lower_is_upwind(v) {
                h_k
            } else {
                h_l
            }
        }
    }
}

/// `(hθ)_σ`.
pub fn interface_htheta(h_k: f64, h_l: f64, theta_k: f64, theta_l: f64, v: f64, variant: Variant) -> f64 {
    htheta_from_side(h_k, h_l, theta_k, theta_l, lower_is_upwind(v), variant)
}

/// `(hθ)_σ` with the donor side given explicitly (only the upwind variant looks at it).
pub fn htheta_from_side(
    h_k: f64,
    h_l: f64,
    theta_k: f64,
    theta_l: f64,
    lower: bool,
    variant: Variant,
) -> f64 {
    if h_k == h_l {
        return h_k * log_mean_positive(theta_k, theta_l);
    }
    match variant {
        Variant::Centred => 0.5 * (h_k * theta_k + h_l * theta_l),
        Variant::Upwind => {
            if theta_k == theta_l {
                0.5 * (h_k + h_l) * theta_k
            } else if lower {
                h_k * theta_k
            } else {
                h_l * theta_l
            }
        }
    }
}

/// Per-face interface values; entries on external faces are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct InterfaceValues {
    pub h: FaceField,
    pub htheta: FaceField,
    pub theta: FaceField,
}

impl InterfaceValues {
    /// Interface values driven by the sign of `v`.
    pub fn compute(state: &RipaState, v: &[f64], grid: &MacGrid, variant: Variant) -> Self {
        let sides: Vec<bool> = v.iter().map(|&x| lower_is_upwind(x)).collect();
        Self::with_sides(state, v, &sides, grid, variant)
    }

    /// As [`Self::compute`], with the donor side of `(hθ)_σ` fixed by `lower_side`.
    pub fn with_sides(
        state: &RipaState,
        v: &[f64],
        lower_side: &[bool],
        grid: &MacGrid,
        variant: Variant,
    ) -> Self {
        let mut out = Self {
            h: FaceField::zeros(grid),
            htheta: FaceField::zeros(grid),
            theta: FaceField::zeros(grid),
        };
        for &f in grid.internal_faces() {
            let (k, l) = grid.internal_pair(f).expect("internal");
            let (hk, hl) = (state.h[k], state.h[l]);
            let (tk, tl) = (state.theta[k], state.theta[l]);
            out.h[f] = interface_h(hk, hl, v[f], variant);
            out.htheta[f] = htheta_from_side(hk, hl, tk, tl, lower_side[f], variant);
            out.theta[f] = log_mean_positive(tk, tl);
        }
        out
    }
}

/// Primal and dual convective fluxes of one step.
///
/// `mass` and `temp` store the flux through each face in the positive axis
/// direction, so `F_{σ,K} = (e · ν_{σ,K}) mass[σ]`. `dual` and `u_up` are
/// indexed like [`MacGrid::all_dual_edges`].
#[derive(Debug, Clone, PartialEq)]
pub struct FluxSet {
    pub mass: FaceField,
    pub temp: FaceField,
    pub dual: Vec<f64>,
    pub u_up: Vec<f64>,
}

impl FluxSet {
    pub fn assemble(iv: &InterfaceValues, v: &[f64], u: &[f64], grid: &MacGrid) -> Self {
        let (mass, temp) = assemble_primal_fluxes(iv, v, grid);
        let dual = assemble_dual_fluxes(&mass, grid);
        let u_up = upwind_dual_velocity(u, &dual, grid);
        Self {
            mass,
            temp,
            dual,
            u_up,
        }
    }

    /// `F_{σ,K}`.
    pub fn mass_out(&self, grid: &MacGrid, face: usize, cell: usize) -> f64 {
        grid.normal_sign(face, cell) * self.mass[face]
    }

    /// `G_{σ,K}`.
    pub fn temp_out(&self, grid: &MacGrid, face: usize, cell: usize) -> f64 {
        grid.normal_sign(face, cell) * self.temp[face]
    }

    /// `Σ_σ F_{σ,K}` and `Σ_σ G_{σ,K}` for every cell.
    pub fn cell_net_outflow(&self, grid: &MacGrid) -> (Vec<f64>, Vec<f64>) {
        let mut mass = vec![0.0; grid.n_cells()];
        let mut temp = vec![0.0; grid.n_cells()];
        for c in 0..grid.n_cells() {
            for (s, &f) in grid.cell_faces(c).iter().enumerate() {
                let sign = MacGrid::slot_sign(s);
                mass[c] += sign * self.mass[f];
                temp[c] += sign * self.temp[f];
            }
        }
        (mass, temp)
    }
}

/// `|σ| h_σ v_σ` and `|σ| (hθ)_σ v_σ` in the positive axis direction; zero on external faces.
pub fn assemble_primal_fluxes(iv: &InterfaceValues, v: &[f64], grid: &MacGrid) -> (FaceField, FaceField) {
    let mut mass = FaceField::zeros(grid);
    let mut temp = FaceField::zeros(grid);
    for &f in grid.internal_faces() {
        let m = grid.face_measure(f);
        mass[f] = m * iv.h[f] * v[f];
        temp[f] = m * iv.htheta[f] * v[f];
    }
    (mass, temp)
}

/// `F_{ε,σ}` for every dual edge, counted outward of `D_σ`.
pub fn assemble_dual_fluxes(mass: &[f64], grid: &MacGrid) -> Vec<f64> {
    grid.all_dual_edges()
        .iter()
        .map(|e| e.terms.iter().map(|&(f, w)| w * mass[f]).sum())
        .collect()
}

/// `u_{ε,up}`: `u_σ` when `F_{ε,σ} ≥ 0`, else the velocity across the edge.
pub fn upwind_dual_velocity(u: &[f64], dual: &[f64], grid: &MacGrid) -> Vec<f64> {
    let mut out = vec![0.0; grid.n_dual_edges()];
    for &f in grid.internal_faces() {
        for (idx, e) in grid.dual_edge_range(f).zip(grid.dual_edges(f).expect("internal")) {
            out[idx] = if dual[idx] >= 0.0 {
                u[f]
            } else {
                e.neighbor.map_or(0.0, |n| u[n])
            };
        }
    }
    out
}
