//! Case runner: configuration, CSV output, reference comparisons and the
//! steady-state error table.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::{Duration, Instant};

use crate::cases::{find_case, CaseSpec, Reference};
use crate::diagnostics::{
    cell_velocity, cross_section_x, energy_quadratics, energy_totals, entropy_report, l1_cells, l1_error,
    restrict_average, L1Errors,
};
use crate::error::{Result, RipaError};
use crate::fields::{Bathymetry, RipaState};
use crate::fluxes::Variant;
use crate::grid::MacGrid;
use crate::rusanov::{from_staggered, run_rusanov, ConsState, Geometry, RusanovConfig};
use crate::scheme::{run_with, SchemeConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeKind {
    /// The staggered energy-stable scheme.
    Wb,
    Rusanov,
}

impl std::fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SchemeKind::Wb => "wb",
            SchemeKind::Rusanov => "rusanov",
        })
    }
}

impl FromStr for SchemeKind {
    type Err = RipaError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "wb" => Ok(SchemeKind::Wb),
            "rusanov" => Ok(SchemeKind::Rusanov),
            other => Err(RipaError::Config(format!("unknown scheme '{other}' (expected wb or rusanov)"))),
        }
    }
}

/// Settings that may come from a config file or the command line.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunOverrides {
    pub case: Option<String>,
    pub scheme: Option<SchemeKind>,
    pub variant: Option<Variant>,
    pub nx: Option<usize>,
    pub ny: Option<usize>,
    pub t_end: Option<f64>,
    pub cfl: Option<f64>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub fixed_dt: Option<f64>,
    pub out: Option<PathBuf>,
}

impl RunOverrides {
    /// Fields of `self`, falling back to `base` where unset.
    pub fn or(self, base: RunOverrides) -> RunOverrides {
        RunOverrides {
            case: self.case.or(base.case),
            scheme: self.scheme.or(base.scheme),
            variant: self.variant.or(base.variant),
            nx: self.nx.or(base.nx),
            ny: self.ny.or(base.ny),
            t_end: self.t_end.or(base.t_end),
            cfl: self.cfl.or(base.cfl),
            alpha: self.alpha.or(base.alpha),
            beta: self.beta.or(base.beta),
            fixed_dt: self.fixed_dt.or(base.fixed_dt),
            out: self.out.or(base.out),
        }
    }
}

/// Parses `key = value` lines with optional `[section]` headers; `#` and `;` start comments.
/// Section names are ignored, keys may use `-` or `_`.
pub fn parse_config_text(text: &str) -> Result<RunOverrides> {
    let mut map = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split(['#', ';']).next().unwrap_or("").trim();
        if line.is_empty() || (line.starts_with('[') && line.ends_with(']')) {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| RipaError::Config(format!("line {}: expected key = value, got '{raw}'", n + 1)))?;
        map.insert(k.trim().to_ascii_lowercase().replace('-', "_"), v.trim().to_string());
    }
    let mut o = RunOverrides::default();
    for (k, v) in map {
        let num = |v: &str| -> Result<f64> {
            v.parse::<f64>()
                .map_err(|_| RipaError::Config(format!("{k}: '{v}' is not a number")))
        };
        let count = |v: &str| -> Result<usize> {
            v.parse::<usize>()
                .map_err(|_| RipaError::Config(format!("{k}: '{v}' is not a cell count")))
        };
        match k.as_str() {
            "case" => o.case = Some(v),
            "scheme" => o.scheme = Some(v.parse()?),
            "variant" => o.variant = Some(v.parse()?),
            "nx" => o.nx = Some(count(&v)?),
            "ny" => o.ny = Some(count(&v)?),
            "tend" | "t_end" => o.t_end = Some(num(&v)?),
            "cfl" => o.cfl = Some(num(&v)?),
            "alpha" => o.alpha = Some(num(&v)?),
            "beta" => o.beta = Some(num(&v)?),
            "fixed_dt" => o.fixed_dt = Some(num(&v)?),
            "out" => o.out = Some(PathBuf::from(v)),
            _ => return Err(RipaError::Config(format!("unknown key '{k}'"))),
        }
    }
    Ok(o)
}

pub fn load_config_file(path: &Path) -> Result<RunOverrides> {
    let text = fs::read_to_string(path)
        .map_err(|e| RipaError::Config(format!("cannot read {}: {e}", path.display())))?;
    parse_config_text(&text)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub case: String,
    pub scheme: SchemeKind,
    pub variant: Option<Variant>,
    pub nx: Option<usize>,
    pub ny: Option<usize>,
    pub t_end: Option<f64>,
    pub cfl: Option<f64>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub fixed_dt: Option<f64>,
    pub out: PathBuf,
    /// Skip computing the fine-grid reference even if the case has one.
    pub skip_reference: bool,
}

impl RunConfig {
    pub fn new(case: &str, scheme: SchemeKind, out: impl Into<PathBuf>) -> Self {
        RunConfig {
            case: case.to_string(),
            scheme,
            variant: None,
            nx: None,
            ny: None,
            t_end: None,
            cfl: None,
            alpha: None,
            beta: None,
            fixed_dt: None,
            out: out.into(),
            skip_reference: false,
        }
    }

    pub fn from_overrides(o: RunOverrides) -> Result<Self> {
        let case = o.case.ok_or_else(|| RipaError::Config("no case given".into()))?;
        let out = o.out.ok_or_else(|| RipaError::Config("no output directory given".into()))?;
        Ok(RunConfig {
            case,
            scheme: o.scheme.unwrap_or(SchemeKind::Wb),
            variant: o.variant,
            nx: o.nx,
            ny: o.ny,
            t_end: o.t_end,
            cfl: o.cfl,
            alpha: o.alpha,
            beta: o.beta,
            fixed_dt: o.fixed_dt,
            out,
            skip_reference: false,
        })
    }

    pub fn scheme_config(&self, case: &CaseSpec) -> Result<SchemeConfig> {
        let d = SchemeConfig::default();
        let cfg = SchemeConfig {
            variant: self.variant.unwrap_or(case.default_variant),
            g: case.g,
            alpha: self.alpha.unwrap_or(d.alpha),
            beta: self.beta.unwrap_or(d.beta),
            cfl_safety: self.cfl.unwrap_or(d.cfl_safety),
            t_end: self.t_end.unwrap_or(case.t_end),
            fixed_dt: self.fixed_dt,
            snapshot_times: case.snapshot_times.clone(),
            ..d
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn rusanov_config(&self, case: &CaseSpec) -> Result<RusanovConfig> {
        if self.variant.is_some() || self.alpha.is_some() || self.beta.is_some() || self.fixed_dt.is_some() {
            return Err(RipaError::Config(
                "--variant, --alpha, --beta and --fixed-dt apply to the wb scheme only".into(),
            ));
        }
        let d = RusanovConfig::default();
        let cfg = RusanovConfig {
            g: case.g,
            cfl: self.cfl.unwrap_or(d.cfl),
            t_end: self.t_end.unwrap_or(case.t_end),
            snapshot_times: case.snapshot_times.clone(),
            ..d
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Cell profiles of one snapshot, common to both schemes.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    pub time: f64,
    pub h: Vec<f64>,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub theta: Vec<f64>,
}

impl Profile {
    pub fn from_staggered(state: &RipaState, grid: &MacGrid) -> Self {
        let vel = cell_velocity(&state.u, grid);
        Profile {
            time: state.time,
            h: state.h.0.clone(),
            u: vel.iter().map(|v| v[0]).collect(),
            v: vel.iter().map(|v| v[1]).collect(),
            theta: state.theta.0.clone(),
        }
    }

    pub fn from_cons(state: &ConsState) -> Self {
        Profile {
            time: state.time,
            h: state.h(),
            u: state.u(),
            v: state.v(),
            theta: state.theta(),
        }
    }
}

fn header(case: &str, scheme: &str, grid: &MacGrid, t: f64) -> String {
    if grid.dim() == 1 {
        format!("# case={case}, scheme={scheme}, nx={}, t={t}\n", grid.nx())
    } else {
        format!("# case={case}, scheme={scheme}, nx={}, ny={}, t={t}\n", grid.nx(), grid.ny())
    }
}

/// Snapshot CSV text: `x,h,u,theta,b,h+b,p` in 1D, `x,y,h,u,v,theta,b,p` in 2D (row-major).
pub fn snapshot_csv(case: &str, scheme: &str, grid: &MacGrid, p: &Profile, b: &[f64], g: f64) -> String {
    let mut s = header(case, scheme, grid, p.time);
    if grid.dim() == 1 {
        s.push_str("x,h,u,theta,b,h+b,p\n");
        for c in 0..grid.n_cells() {
            let pr = 0.5 * g * p.h[c] * p.h[c] * p.theta[c];
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{}",
                grid.cell_center(c)[0],
                p.h[c],
                p.u[c],
                p.theta[c],
                b[c],
                p.h[c] + b[c],
                pr
            );
        }
    } else {
        s.push_str("x,y,h,u,v,theta,b,p\n");
        for c in 0..grid.n_cells() {
            let [x, y] = grid.cell_center(c);
            let pr = 0.5 * g * p.h[c] * p.h[c] * p.theta[c];
            let _ = writeln!(s, "{x},{y},{},{},{},{},{},{pr}", p.h[c], p.u[c], p.v[c], p.theta[c], b[c]);
        }
    }
    s
}

/// Reads the first numeric column named `column` from a snapshot CSV.
pub fn read_csv_column(text: &str, column: &str) -> Result<Vec<f64>> {
    let mut lines = text.lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty());
    let head = lines.next().ok_or_else(|| RipaError::Config("empty csv".into()))?;
    let idx = head
        .split(',')
        .position(|c| c.trim() == column)
        .ok_or_else(|| RipaError::Config(format!("no column '{column}'")))?;
    lines
        .map(|l| {
            l.split(',')
                .nth(idx)
                .and_then(|v| v.trim().parse::<f64>().ok())
                .ok_or_else(|| RipaError::Config(format!("bad row '{l}'")))
        })
        .collect()
}

pub fn snapshot_file_name(t: f64) -> String {
    format!("snapshot_t{t:.4}.csv")
}

/// A 1D profile of `h` compared against a reference.
#[derive(Debug, Clone, PartialEq)]
pub struct SectionComparison {
    pub x: Vec<f64>,
    pub h: Vec<f64>,
    pub h_ref: Vec<f64>,
    pub l1: f64,
}

#[derive(Debug, Clone)]
pub struct RunSummary {
    pub case: String,
    pub scheme: SchemeKind,
    pub variant: Option<Variant>,
    pub grid: String,
    pub steps: usize,
    pub retries: usize,
    pub final_time: f64,
    pub min_h: f64,
    pub min_theta: f64,
    /// L1 errors against the steady state or the fine-grid reference.
    pub errors: Option<L1Errors>,
    pub section: Option<SectionComparison>,
    pub wall_time: Duration,
    pub files: Vec<PathBuf>,
}

struct Writer {
    dir: PathBuf,
    files: Vec<PathBuf>,
}

impl Writer {
    fn new(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(Writer {
            dir: dir.to_path_buf(),
            files: Vec::new(),
        })
    }

    fn write(&mut self, name: &str, text: &str) -> Result<()> {
        let path = self.dir.join(name);
        fs::write(&path, text)?;
        self.files.push(path);
        Ok(())
    }
}

/// Solves the 1D problem behind a case's reference on its fine grid.
pub fn reference_solution(case: &CaseSpec, t_end: f64) -> Result<Option<(MacGrid, ConsState)>> {
    let cfg = RusanovConfig {
        g: case.g,
        t_end,
        ..Default::default()
    };
    match case.reference {
        Reference::FineRusanov { n_cells } => {
            let grid = case.grid(Some(n_cells), None)?;
            let (s, b) = case.initial(&grid)?;
            let out = run_rusanov(&from_staggered(&s, &grid), &b, &grid, &cfg)?;
            Ok(Some((grid, out.final_state)))
        }
        Reference::Radial { n_cells, r_max } => {
            let grid = MacGrid::uniform_1d(0.0, r_max, n_cells)?;
            let s = line_data(case, &grid);
            let cfg = RusanovConfig {
                geometry: Geometry::Radial,
                ..cfg
            };
            let out = run_rusanov(&s, &Bathymetry::flat(&grid), &grid, &cfg)?;
            Ok(Some((grid, out.final_state)))
        }
        Reference::Line { n_cells } => {
            let (x0, x1) = case.domain[0];
            let grid = MacGrid::uniform_1d(x0, x1, n_cells)?;
            let s = line_data(case, &grid);
            let out = run_rusanov(&s, &Bathymetry::flat(&grid), &grid, &cfg)?;
            Ok(Some((grid, out.final_state)))
        }
        Reference::None | Reference::Steady { .. } => Ok(None),
    }
}

/// Case data sampled at the cell centres of a 1D grid along `y = 0`.
fn line_data(case: &CaseSpec, grid: &MacGrid) -> ConsState {
    let n = grid.n_cells();
    let at = |c: usize| [grid.cell_center(c)[0], 0.0];
    let h: Vec<f64> = (0..n).map(|c| (case.h0)(at(c))).collect();
    let u: Vec<f64> = (0..n).map(|c| (case.u0)(at(c))[0]).collect();
    let t: Vec<f64> = (0..n).map(|c| (case.theta0)(at(c))).collect();
    ConsState::from_primitive(&h, &u, &vec![0.0; n], &t)
}

/// Compares a 2D solution's `y = 0` section of `h` with a 1D reference. Radial
/// references are compared on `x ≥ 0` only.
pub fn compare_section(
    case: &CaseSpec,
    grid: &MacGrid,
    h: &[f64],
    ref_grid: &MacGrid,
    reference: &ConsState,
) -> Result<SectionComparison> {
    let section = cross_section_x(h, grid, 0.0);
    let nx = grid.nx();
    let dx = grid.spacing(0);
    let x_all: Vec<f64> = (0..nx).map(|i| grid.cell_center(grid.cell_id(i, 0))[0]).collect();
    let href = reference.h();
    let (x, h, h_ref) = match case.reference {
        Reference::Radial { .. } => {
            let first = x_all.iter().position(|&x| x > 0.0).unwrap_or(nx);
            let x_hi = case.domain[0].1;
            let dr = ref_grid.spacing(0);
            let n_used = ((x_hi / dr).round() as usize).min(href.len());
            let r = restrict_average(&href[..n_used], 0.0, n_used as f64 * dr, nx - first);
            (x_all[first..].to_vec(), section[first..].to_vec(), r)
        }
        _ => {
            let (lo, hi) = case.domain[0];
            (x_all, section, restrict_average(&href, lo, hi, nx))
        }
    };
    let l1 = l1_cells(&h, &h_ref, dx)?;
    Ok(SectionComparison { x, h, h_ref, l1 })
}

/// Runs one case and writes its artifacts below `config.out`.
pub fn run_case(config: &RunConfig) -> Result<RunSummary> {
    let case = find_case(&config.case)?;
    let grid = case.grid(config.nx, config.ny)?;
    let (initial, bathymetry) = case.initial(&grid)?;
    let started = Instant::now();
    let mut w = Writer::new(&config.out)?;
    let g = case.g;
    let scheme_label;
    let (profiles, steps, retries, variant, final_wb);

    match config.scheme {
        SchemeKind::Wb => {
            let cfg = config.scheme_config(&case)?;
            scheme_label = format!("wb-{}", cfg.variant);
            let mut energy = String::from("step,t,dt,E_int,E_kin,E_pot,E_total,A,R,Q,min_h,min_theta\n");
            let mut log = String::from("step,t,dt,retries,binding,min_h,min_theta\n");
            let e0 = energy_totals(&initial, &bathymetry, &grid, g);
            let _ = writeln!(
                energy,
                "0,{},0,{},{},{},{},0,0,0,{},{}",
                initial.time,
                e0.internal,
                e0.kinetic,
                e0.potential,
                e0.total(),
                initial.min_h(),
                initial.min_theta()
            );
            let tr = run_with(&initial, &bathymetry, &grid, &cfg, |old, _new, rec, rep| {
                let q = energy_quadratics(old, rec, &grid);
                let e = rep.energy;
                let _ = writeln!(
                    energy,
                    "{},{},{},{},{},{},{},{},{},{},{},{}",
                    rep.step + 1,
                    rep.time,
                    rep.dt,
                    e.internal,
                    e.kinetic,
                    e.potential,
                    e.total(),
                    q.a,
                    q.r,
                    q.q,
                    rep.min_h,
                    rep.min_theta
                );
                let _ = writeln!(
                    log,
                    "{},{},{},{},{},{},{}",
                    rep.step + 1,
                    rep.time,
                    rep.dt,
                    rep.retries,
                    rep.binding,
                    rep.min_h,
                    rep.min_theta
                );
                Ok(())
            })?;
            w.write("energy.csv", &energy)?;
            w.write("steps.csv", &log)?;

            let mut entropy = String::from("t,x,y,E,flux_x,flux_y\n");
            for snap in &tr.snapshots {
                let rep = entropy_report(snap, &bathymetry, &grid, g);
                for c in 0..grid.n_cells() {
                    let [x, y] = grid.cell_center(c);
                    let _ = writeln!(
                        entropy,
                        "{},{x},{y},{},{},{}",
                        snap.time, rep.density[c], rep.flux[c][0], rep.flux[c][1]
                    );
                }
            }
            w.write("entropy.csv", &entropy)?;
            profiles = tr
                .snapshots
                .iter()
                .map(|s| Profile::from_staggered(s, &grid))
                .collect::<Vec<_>>();
            steps = tr.reports.len();
            retries = tr.reports.iter().map(|r| r.retries).sum();
            variant = Some(cfg.variant);
            final_wb = Some(tr.final_state);
        }
        SchemeKind::Rusanov => {
            let cfg = config.rusanov_config(&case)?;
            scheme_label = "rusanov".to_string();
            let tr = run_rusanov(&from_staggered(&initial, &grid), &bathymetry, &grid, &cfg)?;
            profiles = tr.snapshots.iter().map(Profile::from_cons).collect::<Vec<_>>();
            steps = tr.steps;
            retries = tr.retries;
            variant = None;
            final_wb = None;
        }
    }

    for p in &profiles {
        let text = snapshot_csv(case.name, &scheme_label, &grid, p, &bathymetry.b, g);
        w.write(&snapshot_file_name(p.time), &text)?;
    }
    let last = profiles.last().expect("at least the final snapshot").clone();

    let mut errors = None;
    let mut section = None;
    match &case.reference {
        Reference::Steady { .. } => {
            let steady = case.steady_state(&grid)?.expect("steady reference");
            let e = match &final_wb {
                Some(state) => l1_error(state, &steady, &grid)?,
                None => {
                    let vol = grid.cell_volume(0);
                    let zero = vec![0.0; grid.n_cells()];
                    L1Errors {
                        h: l1_cells(&last.h, &steady.h, vol)?,
                        u: l1_cells(&last.u, &zero, vol)?,
                        theta: l1_cells(&last.theta, &steady.theta, vol)?,
                    }
                }
            };
            errors = Some(e);
        }
        Reference::None => {}
        _ if config.skip_reference => {}
        Reference::FineRusanov { .. } => {
            let (rg, rs) = reference_solution(&case, last.time)?.expect("fine reference");
            let (lo, hi) = case.domain[0];
            let n = grid.nx();
            let vol = grid.cell_volume(0);
            let r = |q: Vec<f64>| restrict_average(&q, lo, hi, n);
            let e = L1Errors {
                h: l1_cells(&last.h, &r(rs.h()), vol)?,
                u: l1_cells(&last.u, &r(rs.u()), vol)?,
                theta: l1_cells(&last.theta, &r(rs.theta()), vol)?,
            };
            errors = Some(e);
            let rb = case.bathymetry_on(&rg)?;
            let text = snapshot_csv(case.name, "rusanov-reference", &rg, &Profile::from_cons(&rs), &rb.b, g);
            w.write("reference.csv", &text)?;
        }
        Reference::Radial { .. } | Reference::Line { .. } => {
            let (rg, rs) = reference_solution(&case, last.time)?.expect("line reference");
            let cmp = compare_section(&case, &grid, &last.h, &rg, &rs)?;
            let mut text = header(case.name, &scheme_label, &grid, last.time);
            text.push_str("x,h,h_ref\n");
            for i in 0..cmp.x.len() {
                let _ = writeln!(text, "{},{},{}", cmp.x[i], cmp.h[i], cmp.h_ref[i]);
            }
            w.write("section.csv", &text)?;
            section = Some(cmp);
        }
    }

    let mut summary = RunSummary {
        case: case.name.to_string(),
        scheme: config.scheme,
        variant,
        grid: grid.describe(),
        steps,
        retries,
        final_time: last.time,
        min_h: last.h.iter().copied().fold(f64::INFINITY, f64::min),
        min_theta: last.theta.iter().copied().fold(f64::INFINITY, f64::min),
        errors,
        section,
        wall_time: started.elapsed(),
        files: Vec::new(),
    };
    if let Some(e) = &summary.errors {
        let text = format!("variable,l1\nh,{}\nu,{}\ntheta,{}\n", e.h, e.u, e.theta);
        w.write("errors.csv", &text)?;
    }
    w.write("summary.txt", &format_summary(&summary))?;
    summary.files = w.files;
    Ok(summary)
}

pub fn format_summary(s: &RunSummary) -> String {
    let mut t = String::new();
    let _ = writeln!(t, "case: {}", s.case);
    match s.variant {
        Some(v) => {
            let _ = writeln!(t, "scheme: {} ({v})", s.scheme);
        }
        None => {
            let _ = writeln!(t, "scheme: {}", s.scheme);
        }
    }
    let _ = writeln!(t, "grid: {}", s.grid);
    let _ = writeln!(t, "final time: {}", s.final_time);
    let _ = writeln!(t, "steps: {} (retries {})", s.steps, s.retries);
    let _ = writeln!(t, "min h: {:e}, min theta: {:e}", s.min_h, s.min_theta);
    if let Some(e) = &s.errors {
        let _ = writeln!(t, "L1 errors: h {:.3e}, u {:.3e}, theta {:.3e}", e.h, e.u, e.theta);
    }
    if let Some(c) = &s.section {
        let _ = writeln!(t, "section L1(h) vs reference: {:.3e}", c.l1);
    }
    let _ = writeln!(t, "wall time: {:.3} s", s.wall_time.as_secs_f64());
    t
}

/// The three steady-state cases of the error table.
pub const TABLE1_CASES: [&str; 3] = ["lake_at_rest", "isobaric", "const_height"];

#[derive(Debug, Clone, PartialEq)]
pub struct Table1Row {
    pub case: String,
    pub rusanov: L1Errors,
    pub wb: L1Errors,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table1 {
    pub rows: Vec<Table1Row>,
}

/// Builds the table from `(case, scheme, errors)` results; each case needs both schemes.
pub fn assemble_table1(results: &[(String, SchemeKind, L1Errors)]) -> Result<Table1> {
    let find = |case: &str, scheme: SchemeKind| {
        results
            .iter()
            .find(|(c, s, _)| c == case && *s == scheme)
            .map(|r| r.2)
            .ok_or_else(|| RipaError::MissingRun(format!("{case} with scheme {scheme}")))
    };
    let rows = TABLE1_CASES
        .iter()
        .map(|&case| {
            Ok(Table1Row {
                case: case.to_string(),
                rusanov: find(case, SchemeKind::Rusanov)?,
                wb: find(case, SchemeKind::Wb)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Table1 { rows })
}

impl Table1 {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("case,rusanov_h,rusanov_u,rusanov_theta,wb_h,wb_u,wb_theta\n");
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{},{:e},{:e},{:e},{:e},{:e},{:e}",
                r.case, r.rusanov.h, r.rusanov.u, r.rusanov.theta, r.wb.h, r.wb.u, r.wb.theta
            );
        }
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{:<14} | {:>10} {:>10} {:>10} | {:>10} {:>10} {:>10}",
            "", "Rusanov", "", "", "centred", "", ""
        );
        let _ = writeln!(
            s,
            "{:<14} | {:>10} {:>10} {:>10} | {:>10} {:>10} {:>10}",
            "case", "h", "u", "theta", "h", "u", "theta"
        );
        let _ = writeln!(s, "{}", "-".repeat(84));
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{:<14} | {:>10.2e} {:>10.2e} {:>10.2e} | {:>10.2e} {:>10.2e} {:>10.2e}",
                r.case, r.rusanov.h, r.rusanov.u, r.rusanov.theta, r.wb.h, r.wb.u, r.wb.theta
            );
        }
        s
    }
}

/// Runs the six steady-state runs (centred variant for the staggered scheme) and
/// writes `table1.csv` and `table1.txt` to `out`, with each run's artifacts in a subdirectory.
pub fn table1(out: &Path) -> Result<Table1> {
    fs::create_dir_all(out)?;
    let mut results = Vec::new();
    for case in TABLE1_CASES {
        for scheme in [SchemeKind::Rusanov, SchemeKind::Wb] {
            let mut cfg = RunConfig::new(case, scheme, out.join(format!("{case}_{scheme}")));
            if scheme == SchemeKind::Wb {
                cfg.variant = Some(Variant::Centred);
            }
            let s = run_case(&cfg)?;
            let e = s
                .errors
                .ok_or_else(|| RipaError::MissingRun(format!("{case} with scheme {scheme} produced no errors")))?;
            results.push((case.to_string(), scheme, e));
        }
    }
    let t = assemble_table1(&results)?;
    fs::write(out.join("table1.csv"), t.to_csv())?;
    fs::write(out.join("table1.txt"), t.to_text())?;
    Ok(t)
}
