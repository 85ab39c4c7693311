//! Discrete unknowns on the MAC grid and their projections.

use std::ops::{Deref, DerefMut};
use std::sync::Arc;

use crate::error::{Result, RipaError};
use crate::grid::MacGrid;

/// A scalar function of position; the second coordinate is ignored in 1D.
pub type ScalarFn = dyn Fn([f64; 2]) -> f64 + Send + Sync;
/// A vector function of position returning `(u_x, u_y)`.
pub type VectorFn = dyn Fn([f64; 2]) -> [f64; 2] + Send + Sync;

/// One value per primal cell.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CellField(pub Vec<f64>);

/// One value per face (all directions, in grid face order).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FaceField(pub Vec<f64>);

impl CellField {
    pub fn zeros(grid: &MacGrid) -> Self {
        Self(vec![0.0; grid.n_cells()])
    }

    pub fn constant(grid: &MacGrid, value: f64) -> Self {
        Self(vec![value; grid.n_cells()])
    }

    pub fn min(&self) -> f64 {
        self.0.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.0.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

impl FaceField {
    pub fn zeros(grid: &MacGrid) -> Self {
        Self(vec![0.0; grid.n_faces()])
    }

    /// Zeroes every external face, enforcing the no-flow wall condition.
    pub fn zero_boundary(&mut self, grid: &MacGrid) {
        for (f, v) in self.0.iter_mut().enumerate() {
            if !grid.is_internal(f) {
                *v = 0.0;
            }
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }
}

impl Deref for CellField {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl DerefMut for CellField {
    fn deref_mut(&mut self) -> &mut [f64] {
        &mut self.0
    }
}

impl Deref for FaceField {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl DerefMut for FaceField {
    fn deref_mut(&mut self) -> &mut [f64] {
        &mut self.0
    }
}

/// Water height, face velocities and potential temperature at one time level.
#[derive(Debug, Clone, PartialEq)]
pub struct RipaState {
    pub h: CellField,
    pub u: FaceField,
    pub theta: CellField,
    pub time: f64,
}

impl RipaState {
    pub fn min_h(&self) -> f64 {
        self.h.min()
    }

    pub fn min_theta(&self) -> f64 {
        self.theta.min()
    }

    /// Largest componentwise difference to another state.
    pub fn max_diff(&self, other: &RipaState) -> f64 {
        let d = |a: &[f64], b: &[f64]| {
            a.iter()
                .zip(b)
                .fold(0.0_f64, |m, (x, y)| m.max((x - y).abs()))
        };
        d(&self.h, &other.h)
            .max(d(&self.u, &other.u))
            .max(d(&self.theta, &other.theta))
    }
}

/// Bottom topography sampled on the primal cells.
#[derive(Clone)]
pub struct Bathymetry {
    pub b: CellField,
    pub source: Option<Arc<ScalarFn>>,
}

impl std::fmt::Debug for Bathymetry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Bathymetry")
            .field("b", &self.b)
            .field("analytic", &self.source.is_some())
            .finish()
    }
}

impl Bathymetry {
    pub fn flat(grid: &MacGrid) -> Self {
        Self {
            b: CellField::zeros(grid),
            source: None,
        }
    }

    pub fn from_values(b: CellField) -> Self {
        Self { b, source: None }
    }

    pub fn sample(
        func: Arc<ScalarFn>,
        grid: &MacGrid,
        quadrature: Quadrature,
    ) -> Result<Self> {
        let b = project_cells(&*func, grid, quadrature, "b")?;
        Ok(Self {
            b,
            source: Some(func),
        })
    }
}

/// Rule used for cell and dual-cell averages of analytic data.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quadrature {
    /// One point per cell; exact for per-axis linear data.
    Midpoint,
    /// Two Gauss points per axis; exact for per-axis cubics.
    Gauss2,
}

impl Quadrature {
    fn nodes(self) -> &'static [(f64, f64)] {
        // (position on [-1, 1], weight / 2)
        const MID: [(f64, f64); 1] = [(0.0, 1.0)];
        const G2: [(f64, f64); 2] = [
            (-0.577_350_269_189_625_8, 0.5),
            (0.577_350_269_189_625_8, 0.5),
        ];
        match self {
            Quadrature::Midpoint => &MID,
            Quadrature::Gauss2 => &G2,
        }
    }

    /// Mean of `f` over an axis-aligned box; the y-extent is ignored when `dim == 1`.
    pub fn box_mean<F: Fn([f64; 2]) -> f64 + ?Sized>(
        self,
        f: &F,
        bounds: [[f64; 2]; 2],
        dim: usize,
    ) -> f64 {
        let [[x0, x1], [y0, y1]] = bounds;
        let (cx, hx) = (0.5 * (x0 + x1), 0.5 * (x1 - x0));
        let (cy, hy) = (0.5 * (y0 + y1), 0.5 * (y1 - y0));
        let nodes = self.nodes();
        let mut acc = 0.0;
        for &(sx, wx) in nodes {
            if dim == 1 {
                acc += wx * f([cx + sx * hx, 0.0]);
            } else {
                for &(sy, wy) in nodes {
                    acc += wx * wy * f([cx + sx * hx, cy + sy * hy]);
                }
            }
        }
        acc
    }
}

/// Cell averages of an analytic function.
pub fn project_cells<F: Fn([f64; 2]) -> f64 + ?Sized>(
    func: &F,
    grid: &MacGrid,
    quadrature: Quadrature,
    field: &'static str,
) -> Result<CellField> {
    let mut out = CellField::zeros(grid);
    for c in 0..grid.n_cells() {
        let v = quadrature.box_mean(func, grid.cell_box(c), grid.dim());
        if !v.is_finite() {
            return Err(RipaError::NonFiniteSample { field, cell: c });
        }
        out[c] = v;
    }
    Ok(out)
}

/// Dual-cell averages of the normal component of a velocity field; zero on external faces.
pub fn project_faces<F: Fn([f64; 2]) -> [f64; 2] + ?Sized>(
    func: &F,
    grid: &MacGrid,
    quadrature: Quadrature,
) -> Result<FaceField> {
    let mut out = FaceField::zeros(grid);
    for &f in grid.internal_faces() {
        let dir = grid.face_dir(f);
        let v = quadrature.box_mean(&|x| func(x)[dir], grid.dual_box(f), grid.dim());
        if !v.is_finite() {
            return Err(RipaError::NonFiniteSample {
                field: "u",
                cell: f,
            });
        }
        out[f] = v;
    }
    Ok(out)
}

/// Initial state: cell averages of `h0` and `theta0`, dual-cell averages of `u0`.
pub fn project_initial_data(
    h0: &ScalarFn,
    u0: &VectorFn,
    theta0: &ScalarFn,
    grid: &MacGrid,
    quadrature: Quadrature,
) -> Result<RipaState> {
    Ok(RipaState {
        h: project_cells(h0, grid, quadrature, "h")?,
        u: project_faces(u0, grid, quadrature)?,
        theta: project_cells(theta0, grid, quadrature, "theta")?,
        time: 0.0,
    })
}

/// `q_{D_σ}`; a boundary face takes the value of its single neighbour.
pub fn dual_average(q: &[f64], face: usize, grid: &MacGrid) -> f64 {
    match grid.face_cells(face) {
        [Some(k), Some(l)] => {
            (grid.half_dual_volume(face, k) * q[k] + grid.half_dual_volume(face, l) * q[l])
                / grid.dual_volume(face)
        }
        [Some(c), None] | [None, Some(c)] => q[c],
        [None, None] => unreachable!("every face touches at least one cell"),
    }
}

/// Weighted two-cell mean with explicit half-dual volumes.
pub fn weighted_dual_average(q_k: f64, q_l: f64, vol_k: f64, vol_l: f64) -> f64 {
    (vol_k * q_k + vol_l * q_l) / (vol_k + vol_l)
}

/// `q_{D_σ}` on every face.
pub fn dual_averages(q: &[f64], grid: &MacGrid) -> FaceField {
    FaceField((0..grid.n_faces()).map(|f| dual_average(q, f, grid)).collect())
}
