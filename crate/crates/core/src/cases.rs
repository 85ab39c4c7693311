//! Registry of the benchmark problems.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{Result, RipaError};
use crate::fields::{project_cells, project_initial_data, Bathymetry, Quadrature, RipaState, ScalarFn, VectorFn};
use crate::fluxes::Variant;
use crate::grid::MacGrid;

/// What a run of a case is compared against.
#[derive(Clone)]
pub enum Reference {
    None,
    /// The projection of a steady state (`h`, `θ`, zero velocity).
    Steady { h: Arc<ScalarFn>, theta: Arc<ScalarFn> },
    /// The same 1D problem solved by the Rusanov scheme on a fine grid.
    FineRusanov { n_cells: usize },
    /// A radially symmetric 2D problem solved in `r ∈ [0, r_max]`, data read along `y = 0, x > 0`.
    Radial { n_cells: usize, r_max: f64 },
    /// A 2D problem independent of `y`, solved on the x-interval with data read along `y = 0`.
    Line { n_cells: usize },
}

impl Reference {
    pub fn label(&self) -> &'static str {
        match self {
            Reference::None => "none",
            Reference::Steady { .. } => "steady",
            Reference::FineRusanov { .. } => "fine-rusanov",
            Reference::Radial { .. } => "radial-rusanov",
            Reference::Line { .. } => "line-rusanov",
        }
    }
}

#[derive(Clone)]
pub struct CaseSpec {
    pub name: &'static str,
    pub description: &'static str,
    pub dim: usize,
    pub domain: [(f64, f64); 2],
    /// Default cells per axis.
    pub n_cells: usize,
    pub t_end: f64,
    pub snapshot_times: Vec<f64>,
    pub quadrature: Quadrature,
    pub default_variant: Variant,
    pub g: f64,
    pub bathymetry: Arc<ScalarFn>,
    pub h0: Arc<ScalarFn>,
    pub u0: Arc<VectorFn>,
    pub theta0: Arc<ScalarFn>,
    /// Initial depths are raised to at least this value.
    pub dry_floor: Option<f64>,
    pub reference: Reference,
}

impl std::fmt::Debug for CaseSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CaseSpec")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .field("domain", &self.domain)
            .field("n_cells", &self.n_cells)
            .field("t_end", &self.t_end)
            .field("reference", &self.reference.label())
            .finish()
    }
}

pub const DEFAULT_DRY_FLOOR: f64 = 1e-6;

impl CaseSpec {
    pub fn grid(&self, nx: Option<usize>, ny: Option<usize>) -> Result<MacGrid> {
        let nx = nx.unwrap_or(self.n_cells);
        let [x, y] = self.domain;
        match self.dim {
            1 => {
                if ny.is_some() {
                    return Err(RipaError::Config(format!("case {} is one-dimensional; --ny does not apply", self.name)));
                }
                MacGrid::uniform_1d(x.0, x.1, nx)
            }
            _ => MacGrid::uniform_2d(x, y, nx, ny.unwrap_or(nx)),
        }
    }

    pub fn bathymetry_on(&self, grid: &MacGrid) -> Result<Bathymetry> {
        Bathymetry::sample(self.bathymetry.clone(), grid, self.quadrature)
    }

    /// Projected initial state and bathymetry.
    pub fn initial(&self, grid: &MacGrid) -> Result<(RipaState, Bathymetry)> {
        let mut state = project_initial_data(&*self.h0, &*self.u0, &*self.theta0, grid, self.quadrature)?;
        if let Some(floor) = self.dry_floor {
            for h in state.h.iter_mut() {
                *h = h.max(floor);
            }
        }
        Ok((state, self.bathymetry_on(grid)?))
    }

    /// Projected steady state for cases that have one.
    pub fn steady_state(&self, grid: &MacGrid) -> Result<Option<RipaState>> {
        match &self.reference {
            Reference::Steady { h, theta } => Ok(Some(RipaState {
                h: project_cells(&**h, grid, self.quadrature, "h")?,
                u: crate::fields::FaceField::zeros(grid),
                theta: project_cells(&**theta, grid, self.quadrature, "theta")?,
                time: 0.0,
            })),
            _ => Ok(None),
        }
    }
}

fn scalar(f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Arc<ScalarFn> {
    Arc::new(move |p: [f64; 2]| f(p[0], p[1]))
}

fn at_rest() -> Arc<VectorFn> {
    Arc::new(|_| [0.0, 0.0])
}

fn gaussian_bump(x: f64) -> f64 {
    let s = 0.06;
    (-(x - 0.5).powi(2) / s).exp() / (2.0 * PI * s).sqrt()
}

fn lake_at_rest() -> CaseSpec {
    let b = |x: f64| 0.1 + gaussian_bump(x);
    let h = scalar(move |x, _| 8.0 - b(x));
    let t = scalar(|_, _| 1.0);
    CaseSpec {
        name: "lake_at_rest",
        description: "1D lake at rest over a Gaussian bump",
        dim: 1,
        domain: [(0.0, 3.0), (0.0, 0.0)],
        n_cells: 200,
        t_end: 20.0,
        snapshot_times: vec![],
        quadrature: Quadrature::Gauss2,
        default_variant: Variant::Centred,
        g: 1.0,
        bathymetry: scalar(move |x, _| b(x)),
        h0: h.clone(),
        u0: at_rest(),
        theta0: t.clone(),
        dry_floor: None,
        reference: Reference::Steady { h, theta: t },
    }
}

fn isobaric() -> CaseSpec {
    let h = scalar(|x, _| 1.0 + 0.2 * gaussian_bump(x));
    let hh = h.clone();
    let t = scalar(move |x, y| hh([x, y]).powi(-2));
    CaseSpec {
        name: "isobaric",
        description: "1D isobaric steady state over flat bottom",
        dim: 1,
        domain: [(0.0, 3.0), (0.0, 0.0)],
        n_cells: 200,
        t_end: 20.0,
        snapshot_times: vec![],
        quadrature: Quadrature::Midpoint,
        default_variant: Variant::Centred,
        g: 1.0,
        bathymetry: scalar(|_, _| 1.0),
        h0: h.clone(),
        u0: at_rest(),
        theta0: t.clone(),
        dry_floor: None,
        reference: Reference::Steady { h, theta: t },
    }
}

fn const_height() -> CaseSpec {
    let b = |x: f64| 10.0 + x * (1.0 - x);
    let h = scalar(|_, _| 1.0);
    let t = scalar(move |x, _| 0.1 * (-2.0 * b(x)).exp());
    CaseSpec {
        name: "const_height",
        description: "1D steady state with constant depth and varying temperature",
        dim: 1,
        domain: [(0.0, 3.0), (0.0, 0.0)],
        n_cells: 200,
        t_end: 20.0,
        snapshot_times: vec![],
        quadrature: Quadrature::Midpoint,
        default_variant: Variant::Centred,
        g: 1.0,
        bathymetry: scalar(move |x, _| b(x)),
        h0: h.clone(),
        u0: at_rest(),
        theta0: t.clone(),
        dry_floor: None,
        reference: Reference::Steady { h, theta: t },
    }
}

fn nonlinear_perturbation() -> CaseSpec {
    let hs = scalar(|x, _| x.exp());
    let ts = scalar(|x, _| (2.0 * x).exp());
    CaseSpec {
        name: "nonlinear_perturbation",
        description: "1D small perturbation of a nonlinear steady state",
        dim: 1,
        domain: [(-1.0, 1.0), (0.0, 0.0)],
        n_cells: 200,
        t_end: 0.4,
        snapshot_times: vec![0.2],
        quadrature: Quadrature::Midpoint,
        default_variant: Variant::Upwind,
        g: 1.0,
        bathymetry: scalar(|x, _| 6.0 - 2.0 * x.exp()),
        h0: scalar(|x, _| x.exp() + if (-0.1..=0.0).contains(&x) { 0.1 } else { 0.0 }),
        u0: at_rest(),
        theta0: ts.clone(),
        dry_floor: None,
        reference: Reference::Steady { h: hs, theta: ts },
    }
}

fn dam_flat_1d() -> CaseSpec {
    CaseSpec {
        name: "dam_flat_1d",
        description: "1D dam break over flat bottom",
        dim: 1,
        domain: [(-1.0, 1.0), (0.0, 0.0)],
        n_cells: 200,
        t_end: 0.2,
        snapshot_times: vec![],
        quadrature: Quadrature::Midpoint,
        default_variant: Variant::Upwind,
        g: 1.0,
        bathymetry: scalar(|_, _| 0.0),
        h0: scalar(|x, _| if x < 0.0 { 5.0 } else { 1.0 }),
        u0: at_rest(),
        theta0: scalar(|x, _| if x < 0.0 { 3.0 } else { 5.0 }),
        dry_floor: None,
        reference: Reference::FineRusanov { n_cells: 5000 },
    }
}

fn nonflat_bottom(x: f64) -> f64 {
    if (-0.4..=-0.2).contains(&x) {
        2.0 * ((10.0 * PI * (x + 0.3)).cos() + 1.0)
    } else if (0.2..=0.4).contains(&x) {
        0.5 * ((10.0 * PI * (x - 0.3)).cos() + 1.0)
    } else {
        0.0
    }
}

fn dam_nonflat_1d() -> CaseSpec {
    CaseSpec {
        name: "dam_nonflat_1d",
        description: "1D dam break over two bumps with a nearly dry point",
        dim: 1,
        domain: [(-1.0, 1.0), (0.0, 0.0)],
        n_cells: 200,
        t_end: 0.3,
        snapshot_times: vec![],
        quadrature: Quadrature::Midpoint,
        default_variant: Variant::Upwind,
        g: 1.0,
        bathymetry: scalar(|x, _| nonflat_bottom(x)),
        h0: scalar(|x, _| if x < 0.0 { 5.0 - nonflat_bottom(x) } else { 1.0 - nonflat_bottom(x) }),
        u0: at_rest(),
        theta0: scalar(|x, _| if x < 0.0 { 1.0 } else { 5.0 }),
        dry_floor: Some(DEFAULT_DRY_FLOOR),
        reference: Reference::FineRusanov { n_cells: 5000 },
    }
}

fn two_bumps(x: f64, y: f64) -> f64 {
    if x < 0.0 {
        0.5 * (-100.0 * ((x + 0.5).powi(2) + (y + 0.5).powi(2))).exp()
    } else {
        0.6 * (-100.0 * ((x - 0.5).powi(2) + (y - 0.5).powi(2))).exp()
    }
}

fn square() -> [(f64, f64); 2] {
    [(-1.0, 1.0), (-1.0, 1.0)]
}

fn steady_2d() -> CaseSpec {
    let inside = |x: f64, y: f64| x * x + y * y < 0.25;
    CaseSpec {
        name: "steady_2d",
        description: "2D piecewise constant state with uniform pressure over two bumps",
        dim: 2,
        domain: square(),
        n_cells: 100,
        t_end: 0.12,
        snapshot_times: vec![],
        quadrature: Quadrature::Midpoint,
        default_variant: Variant::Centred,
        g: 1.0,
        bathymetry: scalar(two_bumps),
        h0: scalar(move |x, y| if inside(x, y) { 3.0 } else { 2.0 }),
        u0: at_rest(),
        theta0: scalar(move |x, y| if inside(x, y) { 4.0 / 3.0 } else { 3.0 }),
        dry_floor: None,
        reference: Reference::None,
    }
}

fn perturbed_steady_2d() -> CaseSpec {
    CaseSpec {
        name: "perturbed_steady_2d",
        description: "2D uniform pressure state perturbed in an annulus",
        dim: 2,
        domain: square(),
        n_cells: 100,
        t_end: 0.15,
        snapshot_times: vec![],
        quadrature: Quadrature::Midpoint,
        default_variant: Variant::Upwind,
        g: 1.0,
        bathymetry: scalar(two_bumps),
        h0: scalar(|x, y| {
            let r2 = x * x + y * y;
            if r2 > 0.01 && r2 < 0.09 {
                3.1
            } else if r2 < 0.25 {
                3.0
            } else {
                2.0
            }
        }),
        u0: at_rest(),
        theta0: scalar(|x, y| if x * x + y * y < 0.25 { 4.0 / 3.0 } else { 3.0 }),
        dry_floor: None,
        reference: Reference::None,
    }
}

fn circular_dam_2d() -> CaseSpec {
    CaseSpec {
        name: "circular_dam_2d",
        description: "2D circular dam break over flat bottom",
        dim: 2,
        domain: square(),
        n_cells: 100,
        t_end: 0.15,
        snapshot_times: vec![],
        quadrature: Quadrature::Midpoint,
        default_variant: Variant::Upwind,
        g: 1.0,
        bathymetry: scalar(|_, _| 0.0),
        h0: scalar(|x, y| if x * x + y * y < 0.25 { 2.0 } else { 1.0 }),
        u0: at_rest(),
        theta0: scalar(|x, y| if x * x + y * y < 0.25 { 1.0 } else { 1.5 }),
        dry_floor: None,
        reference: Reference::Radial { n_cells: 5000, r_max: 1.5 },
    }
}

fn rect_dam_2d() -> CaseSpec {
    CaseSpec {
        name: "rect_dam_2d",
        description: "2D dam break with a central strip of deep water",
        dim: 2,
        domain: square(),
        n_cells: 200,
        t_end: 0.2,
        snapshot_times: vec![],
        quadrature: Quadrature::Midpoint,
        default_variant: Variant::Upwind,
        g: 1.0,
        bathymetry: scalar(|_, _| 0.0),
        h0: scalar(|x, _| if x.abs() <= 0.5 { 2.0 } else { 1.0 }),
        u0: at_rest(),
        theta0: scalar(|x, _| if x.abs() <= 0.5 { 1.0 } else { 1.5 }),
        dry_floor: None,
        reference: Reference::Line { n_cells: 5000 },
    }
}

pub fn registry() -> Vec<CaseSpec> {
    vec![
        lake_at_rest(),
        isobaric(),
        const_height(),
        nonlinear_perturbation(),
        dam_flat_1d(),
        dam_nonflat_1d(),
        steady_2d(),
        perturbed_steady_2d(),
        circular_dam_2d(),
        rect_dam_2d(),
    ]
}

pub fn find_case(name: &str) -> Result<CaseSpec> {
    let all = registry();
    let names: Vec<&str> = all.iter().map(|c| c.name).collect();
    all.iter()
        .find(|c| c.name == name)
        .cloned()
        .ok_or_else(|| RipaError::UnknownCase {
            name: name.to_string(),
            available: names.join(", "),
        })
}
