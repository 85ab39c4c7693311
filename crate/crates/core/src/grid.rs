//! Uniform staggered (MAC) meshes in one and two space dimensions.
//!
//! Scalars live on the primal cells, the `i`-th velocity component lives on
//! the faces normal to the `i`-th axis. Every face `σ` owns a dual cell
//! `D_σ` made of the halves of its neighbouring primal cells.
//!
//! Enumeration is fixed and documented so that output files are reproducible:
//!
//! * cells are row-major: `id = j * nx + i`;
//! * faces are direction-major, then row-major within a direction. The x-faces
//!   come first (`id = j * (nx + 1) + i`, `i` in `0..=nx`), followed by the
//!   y-faces (`id = nx_faces + j * nx + i`, `j` in `0..=ny`).
//!
//! For a face `σ` normal to axis `d`, the *lower* neighbour `K` is the cell on
//! the negative side and the *upper* neighbour `L` is on the positive side, so
//! `e_d · ν_{σ,K} = +1` and `e_d · ν_{σ,L} = -1`.
//!
//! A one-dimensional grid is the degenerate case `ny = 1` with unit face
//! measure, which keeps every formula dimension-generic.

use std::ops::Range;

use crate::error::{Result, RipaError};

/// A closed interval `[lo, hi]` of one coordinate axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Lattice address of a primal cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CellIndex {
    pub i: usize,
    pub j: usize,
}

/// Lattice address of a face: its normal direction and the lattice coordinates
/// within that direction's face array.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FaceIndex {
    pub dir: usize,
    pub i: usize,
    pub j: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeOrientation {
    /// Parallel to `σ`, lying at the centre of one of its neighbouring cells.
    Parallel,
    /// Orthogonal to `σ`, straddling both neighbouring cells.
    Transverse,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeHost {
    Cell(usize),
    Straddle(usize, usize),
}

/// One edge `ε` of a dual cell `D_σ`.
///
/// The dual mass flux through `ε`, counted positive outward of `D_σ`, is
/// `Σ weight * f(face)` over `terms`, where `f(face)` is the primal mass flux
/// through `face` in the positive direction of that face's axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualEdge {
    pub orientation: EdgeOrientation,
    pub host: EdgeHost,
    /// The face `σ'` whose dual cell lies across `ε`; `None` on the domain boundary.
    pub neighbor: Option<usize>,
    pub terms: [(usize, f64); 2],
}

#[derive(Debug, Clone)]
pub struct MacGrid {
    dim: usize,
    n: [usize; 2],
    lo: [f64; 2],
    spacing: [f64; 2],
    cell_volume: f64,
    face_measure: [f64; 2],
    face_offset: [usize; 3],
    face_cells: Vec<[Option<usize>; 2]>,
    cell_faces: Vec<usize>,
    dual_volume: Vec<f64>,
    dual_offsets: Vec<usize>,
    dual_edges: Vec<DualEdge>,
    internal: Vec<usize>,
}

/// Builds a uniform Cartesian MAC grid; `domain` and `n_cells` have one entry per axis.
pub fn build_uniform_grid(domain: &[Interval], n_cells: &[usize]) -> Result<MacGrid> {
    MacGrid::uniform(domain, n_cells)
}

impl MacGrid {
    pub fn uniform(domain: &[Interval], n_cells: &[usize]) -> Result<Self> {
        let dim = domain.len();
        if dim == 0 || dim > 2 {
            return Err(RipaError::InvalidGrid(format!(
                "dimension must be 1 or 2, got {dim}"
            )));
        }
        if n_cells.len() != dim {
            return Err(RipaError::InvalidGrid(format!(
                "{} cell counts given for a {dim}-dimensional domain",
                n_cells.len()
            )));
        }
        for (axis, (iv, &n)) in domain.iter().zip(n_cells).enumerate() {
            if n < 2 {
                return Err(RipaError::InvalidGrid(format!(
                    "axis {axis} needs at least 2 cells, got {n}"
                )));
            }
            if !(iv.length() > 0.0) || !iv.lo.is_finite() || !iv.hi.is_finite() {
                return Err(RipaError::InvalidGrid(format!(
                    "axis {axis} has a degenerate interval [{}, {}]",
                    iv.lo, iv.hi
                )));
            }
        }

        let nx = n_cells[0];
        let ny = if dim == 2 { n_cells[1] } else { 1 };
        let dx = domain[0].length() / nx as f64;
        let (dy, y_lo) = if dim == 2 {
            (domain[1].length() / ny as f64, domain[1].lo)
        } else {
            (1.0, 0.0)
        };

        let cell_volume = dx * dy;
        let face_measure = if dim == 2 { [dy, dx] } else { [1.0, 0.0] };
        let n_xfaces = (nx + 1) * ny;
        let n_yfaces = if dim == 2 { nx * (ny + 1) } else { 0 };
        let face_offset = [0, n_xfaces, n_xfaces + n_yfaces];
        let n_faces = face_offset[2];

        let mut grid = MacGrid {
            dim,
            n: [nx, ny],
            lo: [domain[0].lo, y_lo],
            spacing: [dx, dy],
            cell_volume,
            face_measure,
            face_offset,
            face_cells: vec![[None, None]; n_faces],
            cell_faces: vec![0; nx * ny * 2 * dim],
            dual_volume: vec![0.0; n_faces],
            dual_offsets: Vec::with_capacity(n_faces + 1),
            dual_edges: Vec::new(),
            internal: Vec::new(),
        };

        for f in 0..n_faces {
            let FaceIndex { dir, i, j } = grid.face_index(f);
            let (lower, upper) = if dir == 0 {
                (
                    (i > 0).then(|| grid.cell_id(i - 1, j)),
                    (i < nx).then(|| grid.cell_id(i, j)),
                )
            } else {
                (
                    (j > 0).then(|| grid.cell_id(i, j - 1)),
                    (j < ny).then(|| grid.cell_id(i, j)),
                )
            };
            grid.face_cells[f] = [lower, upper];
            let halves = lower.is_some() as usize + upper.is_some() as usize;
            grid.dual_volume[f] = 0.5 * cell_volume * halves as f64;
            if halves == 2 {
                grid.internal.push(f);
            }
        }

        let stride = 2 * dim;
        for j in 0..ny {
            for i in 0..nx {
                let c = grid.cell_id(i, j);
                grid.cell_faces[c * stride] = grid.face_id(FaceIndex { dir: 0, i, j });
                grid.cell_faces[c * stride + 1] = grid.face_id(FaceIndex { dir: 0, i: i + 1, j });
                if dim == 2 {
                    grid.cell_faces[c * stride + 2] = grid.face_id(FaceIndex { dir: 1, i, j });
                    grid.cell_faces[c * stride + 3] =
                        grid.face_id(FaceIndex { dir: 1, i, j: j + 1 });
                }
            }
        }

        let mut edges = Vec::new();
        for f in 0..n_faces {
            grid.dual_offsets.push(edges.len());
            if grid.is_internal(f) {
                grid.push_dual_edges(f, &mut edges);
            }
        }
        grid.dual_offsets.push(edges.len());
        grid.dual_edges = edges;
        Ok(grid)
    }

    pub fn uniform_1d(lo: f64, hi: f64, n: usize) -> Result<Self> {
        Self::uniform(&[Interval::new(lo, hi)], &[n])
    }

    pub fn uniform_2d(x: (f64, f64), y: (f64, f64), nx: usize, ny: usize) -> Result<Self> {
        Self::uniform(&[Interval::new(x.0, x.1), Interval::new(y.0, y.1)], &[nx, ny])
    }

    fn push_dual_edges(&self, f: usize, out: &mut Vec<DualEdge>) {
        let FaceIndex { dir, i, j } = self.face_index(f);
        let [k, l] = self.face_cells[f];
        let (k, l) = (k.expect("internal"), l.expect("internal"));
        let [nx, ny] = self.n;
        let xf = |i, j| self.face_id(FaceIndex { dir: 0, i, j });
        let yf = |i, j| self.face_id(FaceIndex { dir: 1, i, j });
        if dir == 0 {
            out.push(DualEdge {
                orientation: EdgeOrientation::Parallel,
                host: EdgeHost::Cell(k),
                neighbor: Some(xf(i - 1, j)),
                terms: [(xf(i - 1, j), -0.5), (f, -0.5)],
            });
            out.push(DualEdge {
                orientation: EdgeOrientation::Parallel,
                host: EdgeHost::Cell(l),
                neighbor: Some(xf(i + 1, j)),
                terms: [(f, 0.5), (xf(i + 1, j), 0.5)],
            });
            if self.dim == 2 {
                out.push(DualEdge {
                    orientation: EdgeOrientation::Transverse,
                    host: EdgeHost::Straddle(k, l),
                    neighbor: (j > 0).then(|| xf(i, j - 1)),
                    terms: [(yf(i - 1, j), -0.5), (yf(i, j), -0.5)],
                });
                out.push(DualEdge {
                    orientation: EdgeOrientation::Transverse,
                    host: EdgeHost::Straddle(k, l),
                    neighbor: (j + 1 < ny).then(|| xf(i, j + 1)),
                    terms: [(yf(i - 1, j + 1), 0.5), (yf(i, j + 1), 0.5)],
                });
            }
        } else {
            out.push(DualEdge {
                orientation: EdgeOrientation::Parallel,
                host: EdgeHost::Cell(k),
                neighbor: Some(yf(i, j - 1)),
                terms: [(yf(i, j - 1), -0.5), (f, -0.5)],
            });
            out.push(DualEdge {
                orientation: EdgeOrientation::Parallel,
                host: EdgeHost::Cell(l),
                neighbor: Some(yf(i, j + 1)),
                terms: [(f, 0.5), (yf(i, j + 1), 0.5)],
            });
            out.push(DualEdge {
                orientation: EdgeOrientation::Transverse,
                host: EdgeHost::Straddle(k, l),
                neighbor: (i > 0).then(|| yf(i - 1, j)),
                terms: [(xf(i, j - 1), -0.5), (xf(i, j), -0.5)],
            });
            out.push(DualEdge {
                orientation: EdgeOrientation::Transverse,
                host: EdgeHost::Straddle(k, l),
                neighbor: (i + 1 < nx).then(|| yf(i + 1, j)),
                terms: [(xf(i + 1, j - 1), 0.5), (xf(i + 1, j), 0.5)],
            });
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nx(&self) -> usize {
        self.n[0]
    }

    /// Number of cell rows; 1 for one-dimensional grids.
    pub fn ny(&self) -> usize {
        self.n[1]
    }

    pub fn n_cells(&self) -> usize {
        self.n[0] * self.n[1]
    }

    pub fn n_faces(&self) -> usize {
        self.face_offset[2]
    }

    pub fn spacing(&self, axis: usize) -> f64 {
        self.spacing[axis]
    }

    pub fn faces_in(&self, dir: usize) -> Range<usize> {
        self.face_offset[dir]..self.face_offset[dir + 1]
    }

    pub fn cell_id(&self, i: usize, j: usize) -> usize {
        j * self.n[0] + i
    }

    pub fn cell_index(&self, cell: usize) -> CellIndex {
        CellIndex {
            i: cell % self.n[0],
            j: cell / self.n[0],
        }
    }

    pub fn face_id(&self, f: FaceIndex) -> usize {
        if f.dir == 0 {
            f.j * (self.n[0] + 1) + f.i
        } else {
            self.face_offset[1] + f.j * self.n[0] + f.i
        }
    }

    pub fn face_index(&self, face: usize) -> FaceIndex {
        if face < self.face_offset[1] {
            let w = self.n[0] + 1;
            FaceIndex {
                dir: 0,
                i: face % w,
                j: face / w,
            }
        } else {
            let r = face - self.face_offset[1];
            FaceIndex {
                dir: 1,
                i: r % self.n[0],
                j: r / self.n[0],
            }
        }
    }

    pub fn face_dir(&self, face: usize) -> usize {
        usize::from(face >= self.face_offset[1])
    }

    /// `|K|` (all cells share it on a uniform grid).
    pub fn cell_volume(&self, _cell: usize) -> f64 {
        self.cell_volume
    }

    /// `|σ|`; unity in one dimension.
    pub fn face_measure(&self, face: usize) -> f64 {
        self.face_measure[self.face_dir(face)]
    }

    /// `|D_σ|`.
    pub fn dual_volume(&self, face: usize) -> f64 {
        self.dual_volume[face]
    }

    /// `|D_{K,σ}|`, the part of `D_σ` inside `cell`; zero when `cell` does not touch `face`.
    pub fn half_dual_volume(&self, face: usize, cell: usize) -> f64 {
        if self.face_cells[face].contains(&Some(cell)) {
            0.5 * self.cell_volume
        } else {
            0.0
        }
    }

    /// `|∂K| / |K|`.
    pub fn perimeter_ratio(&self, _cell: usize) -> f64 {
        let perimeter: f64 = (0..self.dim).map(|d| 2.0 * self.face_measure[d]).sum();
        perimeter / self.cell_volume
    }

    /// Lower and upper neighbours of a face.
    pub fn face_cells(&self, face: usize) -> [Option<usize>; 2] {
        self.face_cells[face]
    }

    /// `(K, L)` for an internal face `σ = K|L`, `K` being the lower cell.
    pub fn internal_pair(&self, face: usize) -> Option<(usize, usize)> {
        match self.face_cells[face] {
            [Some(k), Some(l)] => Some((k, l)),
            _ => None,
        }
    }

    pub fn is_internal(&self, face: usize) -> bool {
        matches!(self.face_cells[face], [Some(_), Some(_)])
    }

    pub fn internal_faces(&self) -> &[usize] {
        &self.internal
    }

    /// Faces of a cell, ordered `[x-lower, x-upper, y-lower, y-upper]`.
    pub fn cell_faces(&self, cell: usize) -> &[usize] {
        let stride = 2 * self.dim;
        &self.cell_faces[cell * stride..(cell + 1) * stride]
    }

    /// `e · ν_{σ,K}` for the face at position `slot` of [`Self::cell_faces`].
    #[inline]
    pub fn slot_sign(slot: usize) -> f64 {
        if slot % 2 == 0 {
            -1.0
        } else {
            1.0
        }
    }

    /// `e · ν_{σ,K}`: `+1` if `cell` is the lower neighbour of `face`, `-1` if upper.
    pub fn normal_sign(&self, face: usize, cell: usize) -> f64 {
        match self.face_cells[face] {
            [Some(k), _] if k == cell => 1.0,
            [_, Some(l)] if l == cell => -1.0,
            _ => 0.0,
        }
    }

    pub fn cell_center(&self, cell: usize) -> [f64; 2] {
        let CellIndex { i, j } = self.cell_index(cell);
        [
            self.lo[0] + (i as f64 + 0.5) * self.spacing[0],
            if self.dim == 2 {
                self.lo[1] + (j as f64 + 0.5) * self.spacing[1]
            } else {
                0.0
            },
        ]
    }

    /// Axis-aligned bounds `[[x0, x1], [y0, y1]]` of a primal cell (y ignored in 1D).
    pub fn cell_box(&self, cell: usize) -> [[f64; 2]; 2] {
        let [cx, cy] = self.cell_center(cell);
        let hx = 0.5 * self.spacing[0];
        let hy = 0.5 * self.spacing[1];
        [[cx - hx, cx + hx], [cy - hy, cy + hy]]
    }

    /// Axis-aligned bounds of the dual cell `D_σ`.
    pub fn dual_box(&self, face: usize) -> [[f64; 2]; 2] {
        let FaceIndex { dir, i, j } = self.face_index(face);
        let [dx, dy] = self.spacing;
        let [x0, y0] = self.lo;
        let [nx, ny] = self.n;
        if dir == 0 {
            let xf = x0 + i as f64 * dx;
            let lo = if i > 0 { xf - 0.5 * dx } else { xf };
            let hi = if i < nx { xf + 0.5 * dx } else { xf };
            let ys = if self.dim == 2 {
                [y0 + j as f64 * dy, y0 + (j + 1) as f64 * dy]
            } else {
                [-0.5, 0.5]
            };
            [[lo, hi], ys]
        } else {
            let yf = y0 + j as f64 * dy;
            let lo = if j > 0 { yf - 0.5 * dy } else { yf };
            let hi = if j < ny { yf + 0.5 * dy } else { yf };
            [[x0 + i as f64 * dx, x0 + (i + 1) as f64 * dx], [lo, hi]]
        }
    }

    pub fn face_center(&self, face: usize) -> [f64; 2] {
        let FaceIndex { dir, i, j } = self.face_index(face);
        let [dx, dy] = self.spacing;
        let [x0, y0] = self.lo;
        if dir == 0 {
            let y = if self.dim == 2 {
                y0 + (j as f64 + 0.5) * dy
            } else {
                0.0
            };
            [x0 + i as f64 * dx, y]
        } else {
            [x0 + (i as f64 + 0.5) * dx, y0 + j as f64 * dy]
        }
    }

    /// The edges of `D_σ` for an internal face.
    pub fn dual_edges(&self, face: usize) -> Result<&[DualEdge]> {
        if !self.is_internal(face) {
            return Err(RipaError::BoundaryFace(face));
        }
        Ok(&self.dual_edges[self.dual_edge_range(face)])
    }

    /// Position of the edges of `D_σ` in the flat dual-edge table (empty for boundary faces).
    pub fn dual_edge_range(&self, face: usize) -> Range<usize> {
        self.dual_offsets[face]..self.dual_offsets[face + 1]
    }

    pub fn n_dual_edges(&self) -> usize {
        self.dual_edges.len()
    }

    pub fn all_dual_edges(&self) -> &[DualEdge] {
        &self.dual_edges
    }

    pub fn domain_volume(&self) -> f64 {
        self.cell_volume * self.n_cells() as f64
    }

    /// Header line describing the grid, used in output files.
    pub fn describe(&self) -> String {
        if self.dim == 1 {
            format!("dim=1, nx={}, dx={}", self.n[0], self.spacing[0])
        } else {
            format!(
                "dim=2, nx={}, ny={}, dx={}, dy={}",
                self.n[0], self.n[1], self.spacing[0], self.spacing[1]
            )
        }
    }

    pub fn same_shape(&self, other: &MacGrid) -> bool {
        self.dim == other.dim && self.n == other.n && self.lo == other.lo && self.spacing == other.spacing
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_interval_four_cells() {
        let g = MacGrid::uniform_1d(0.0, 1.0, 4).unwrap();
        assert_eq!(g.cell_volume(0), 0.25);
        assert_eq!(g.n_faces(), 5);
        assert_eq!(g.dual_volume(2), 0.25);
        assert_eq!(g.dual_volume(0), 0.125);
        assert_eq!(g.dual_volume(4), 0.125);
        assert_eq!(g.face_measure(1), 1.0);
        assert_eq!(g.internal_faces(), &[1, 2, 3]);
    }

    #[test]
    fn unit_square_two_by_two() {
        let g = MacGrid::uniform_2d((0.0, 1.0), (0.0, 1.0), 2, 2).unwrap();
        assert_eq!(g.cell_volume(0), 0.25);
        for f in 0..g.n_faces() {
            assert_eq!(g.face_measure(f), 0.5);
        }
        assert_eq!(g.n_faces(), 12);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(MacGrid::uniform_1d(0.0, 1.0, 0).is_err());
        assert!(MacGrid::uniform_1d(0.0, 1.0, 1).is_err());
        assert!(MacGrid::uniform_1d(1.0, 1.0, 4).is_err());
        assert!(MacGrid::uniform_1d(1.0, 0.0, 4).is_err());
        assert!(MacGrid::uniform(&[], &[]).is_err());
    }

    #[test]
    fn dual_edges_1d() {
        let g = MacGrid::uniform_1d(0.0, 1.0, 4).unwrap();
        let edges = g.dual_edges(2).unwrap();
        assert_eq!(edges.len(), 2);
        assert_eq!(edges[0].host, EdgeHost::Cell(1));
        assert_eq!(edges[0].neighbor, Some(1));
        assert_eq!(edges[0].terms, [(1, -0.5), (2, -0.5)]);
        assert_eq!(edges[1].host, EdgeHost::Cell(2));
        assert_eq!(edges[1].terms, [(2, 0.5), (3, 0.5)]);
        assert!(matches!(g.dual_edges(0), Err(RipaError::BoundaryFace(0))));
    }

    #[test]
    fn dual_edges_2d_xface() {
        let g = MacGrid::uniform_2d((0.0, 1.0), (0.0, 1.0), 3, 3).unwrap();
        let f = g.face_id(FaceIndex { dir: 0, i: 1, j: 1 });
        let edges = g.dual_edges(f).unwrap();
        let parallel = edges
            .iter()
            .filter(|e| e.orientation == EdgeOrientation::Parallel)
            .count();
        assert_eq!(edges.len(), 4);
        assert_eq!(parallel, 2);
        let bottom = g.face_id(FaceIndex { dir: 0, i: 1, j: 0 });
        let edges = g.dual_edges(bottom).unwrap();
        assert!(edges.iter().any(|e| e.neighbor.is_none()));
    }

    fn check_closure_and_tiling(g: &MacGrid) {
        for c in 0..g.n_cells() {
            let mut sum = [0.0; 2];
            for (slot, &f) in g.cell_faces(c).iter().enumerate() {
                assert_eq!(g.normal_sign(f, c), MacGrid::slot_sign(slot));
                sum[g.face_dir(f)] += g.face_measure(f) * g.normal_sign(f, c);
                assert!(g.face_cells(f).contains(&Some(c)));
            }
            assert_eq!(sum, [0.0, 0.0]);
            for dir in 0..g.dim() {
                let halves: f64 = g
                    .cell_faces(c)
                    .iter()
                    .filter(|&&f| g.face_dir(f) == dir)
                    .map(|&f| g.half_dual_volume(f, c))
                    .sum();
                assert!((halves - g.cell_volume(c)).abs() < 1e-15);
            }
        }
        for dir in 0..g.dim() {
            let total: f64 = g.faces_in(dir).map(|f| g.dual_volume(f)).sum();
            assert!((total - g.domain_volume()).abs() < 1e-12 * g.domain_volume());
        }
        for f in 0..g.n_faces() {
            assert_eq!(g.face_id(g.face_index(f)), f);
            if let Some((k, l)) = g.internal_pair(f) {
                assert_eq!(g.normal_sign(f, k), -g.normal_sign(f, l));
                let sum = g.half_dual_volume(f, k) + g.half_dual_volume(f, l);
                assert_eq!(g.dual_volume(f), sum);
            } else {
                let c = g.face_cells(f).iter().flatten().next().copied().unwrap();
                assert_eq!(g.dual_volume(f), g.half_dual_volume(f, c));
            }
        }
    }

    #[test]
    fn geometric_invariants() {
        check_closure_and_tiling(&MacGrid::uniform_1d(-1.0, 2.0, 7).unwrap());
        check_closure_and_tiling(&MacGrid::uniform_2d((-1.0, 1.0), (0.0, 3.0), 5, 4).unwrap());
    }

    #[test]
    fn dual_box_matches_volume() {
        let g = MacGrid::uniform_2d((-1.0, 1.0), (0.0, 3.0), 5, 4).unwrap();
        for f in 0..g.n_faces() {
            let [[x0, x1], [y0, y1]] = g.dual_box(f);
            assert!(((x1 - x0) * (y1 - y0) - g.dual_volume(f)).abs() < 1e-14);
        }
    }
}
