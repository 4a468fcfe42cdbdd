//! Element integration and global sparse assembly of the bilinear forms:
//! CR stiffness, phase-weighted CR mass, divergence coupling, P1 operators
//! and load vectors.
//!
//! Velocity DOF numbering is blocked by component: all x-DOFs in edge order,
//! then all y-DOFs (`vdof(e, c) = c * num_edges + e`).
//!
//! Assembly is deterministic by construction: triplets carry the id of the
//! cell that produced them and finalization sums duplicates in
//! `(row, col, cell)` order, so the result is independent of the order in
//! which cells are visited (and would be of worker count, were element
//! integration parallelized).

use std::sync::Arc;

use crate::mesh::Mesh;
use crate::quadrature::{bary_to_xy, TRI_DEGREE4};
use crate::spaces::{P1Field, SpaceError};

/// Compressed-row sparse matrix with sorted, deduplicated columns per row.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    nrows: usize,
    ncols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
    symmetric: bool,
}

/// Triplet accumulator; `src` is the producing cell (or any stable source
/// id), used to fix the summation order of duplicates.
pub struct TripletBuffer {
    nrows: usize,
    ncols: usize,
    entries: Vec<(usize, usize, usize, f64)>, // (row, col, src, value)
}

impl TripletBuffer {
    pub fn new(nrows: usize, ncols: usize) -> TripletBuffer {
        TripletBuffer {
            nrows,
            ncols,
            entries: Vec::new(),
        }
    }

    pub fn push(&mut self, src: usize, row: usize, col: usize, value: f64) {
        debug_assert!(row < self.nrows && col < self.ncols);
        self.entries.push((row, col, src, value));
    }

    /// Sorts by `(row, col, src)`, sums duplicates in that order and builds
    /// the CSR form. With `symmetric`, the result is checked to satisfy
    /// `|a_ij - a_ji| <= 1e-14 * max|a|`.
    pub fn into_csr(mut self, symmetric: bool) -> SparseMatrix {
        self.entries
            .sort_unstable_by(|a, b| (a.0, a.1, a.2).cmp(&(b.0, b.1, b.2)));
        let mut row_ptr = vec![0usize; self.nrows + 1];
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        for &(row, col, _, value) in &self.entries {
            if col_idx.len() > row_ptr[row] && *col_idx.last().unwrap() == col {
                *values.last_mut().unwrap() += value;
            } else {
                col_idx.push(col);
                values.push(value);
                row_ptr[row + 1] += 1;
            }
        }
        for r in 0..self.nrows {
            row_ptr[r + 1] += row_ptr[r];
        }
        let m = SparseMatrix {
            nrows: self.nrows,
            ncols: self.ncols,
            row_ptr,
            col_idx,
            values,
            symmetric,
        };
        if symmetric {
            let max = m.max_abs();
            let defect = m.symmetry_defect();
            assert!(
                defect <= 1e-14 * max.max(f64::MIN_POSITIVE),
                "assembled matrix not symmetric: defect {defect:e}, max {max:e}"
            );
        }
        m
    }
}

impl SparseMatrix {
    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        (&self.col_idx[r.clone()], &self.values[r])
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (cols, vals) = self.row(i);
        match cols.binary_search(&j) {
            Ok(k) => vals[k],
            Err(_) => 0.0,
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn symmetry_defect(&self) -> f64 {
        let mut defect = 0.0f64;
        for i in 0..self.nrows {
            let (cols, vals) = self.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                defect = defect.max((v - self.get(j, i)).abs());
            }
        }
        defect
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.ncols);
        let mut y = vec![0.0; self.nrows];
        for i in 0..self.nrows {
            let (cols, vals) = self.row(i);
            y[i] = cols.iter().zip(vals).map(|(&j, &v)| v * x[j]).sum();
        }
        y
    }

    pub fn mul_transpose_vec(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.nrows);
        let mut y = vec![0.0; self.ncols];
        for i in 0..self.nrows {
            let (cols, vals) = self.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                y[j] += v * x[i];
            }
        }
        y
    }

    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        self.mul_vec(x).iter().zip(x).map(|(a, b)| a * b).sum()
    }

    /// `alpha * self + beta * other`, merging sparsity patterns.
    pub fn linear_combination(&self, alpha: f64, other: &SparseMatrix, beta: f64) -> SparseMatrix {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        let mut buf = TripletBuffer::new(self.nrows, self.ncols);
        for i in 0..self.nrows {
            let (cols, vals) = self.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                buf.push(0, i, j, alpha * v);
            }
            let (cols, vals) = other.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                buf.push(1, i, j, beta * v);
            }
        }
        buf.into_csr(self.symmetric && other.symmetric)
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.nrows).flat_map(move |i| {
            let (cols, vals) = self.row(i);
            cols.iter().zip(vals).map(move |(&j, &v)| (i, j, v))
        })
    }
}

/// Velocity DOF index of component `comp` on edge `e`.
pub fn vdof(e: usize, comp: usize, num_edges: usize) -> usize {
    comp * num_edges + e
}

/// Stokes-Brinkman saddle-point problem before boundary elimination:
/// `a u - b^T p = rhs_u`, `b u = 0`, with Dirichlet values prescribed on the
/// edges recorded in `dirichlet`.
#[derive(Debug, Clone)]
pub struct SaddleSystem {
    pub mesh: Arc<Mesh>,
    /// `mu * stiffness + alpha-weighted mass`, `2E x 2E`, SPD on the free
    /// subspace.
    pub a: SparseMatrix,
    /// Divergence coupling, one row per cell: `(b u)_T = int_T div u`.
    pub b: SparseMatrix,
    pub rhs_u: Vec<f64>,
    /// Prescribed value per velocity DOF, `None` when free.
    pub dirichlet: Vec<Option<f64>>,
    pub gauge: PressureGauge,
}

/// How the pressure null space is fixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PressureGauge {
    /// Pure-Dirichlet velocity boundary: pressure determined up to a
    /// constant, normalized to zero area-weighted mean.
    MeanZero,
    /// An outlet with the natural condition fixes the gauge.
    Natural,
}

/// Scalar CR stiffness expanded to both velocity components.
pub fn assemble_cr_stiffness(mesh: &Mesh) -> SparseMatrix {
    let ne = mesh.num_edges();
    let mut buf = TripletBuffer::new(2 * ne, 2 * ne);
    for t in 0..mesh.num_cells() {
        let geom = mesh.cell_geometry(t);
        let edges = mesh.cell_to_edges[t];
        for i in 0..3 {
            for j in 0..3 {
                // grad psi_i = -2 grad lambda_i.
                let k = 4.0
                    * geom.area
                    * (geom.grad_lambda[i][0] * geom.grad_lambda[j][0]
                        + geom.grad_lambda[i][1] * geom.grad_lambda[j][1]);
                for c in 0..2 {
                    buf.push(t, vdof(edges[i], c, ne), vdof(edges[j], c, ne), k);
                }
            }
        }
    }
    buf.into_csr(true)
}

/// Unweighted CR mass; the local matrix is `(|T|/3) I` per component.
pub fn assemble_cr_mass(mesh: &Mesh) -> SparseMatrix {
    let ne = mesh.num_edges();
    let mut buf = TripletBuffer::new(2 * ne, 2 * ne);
    for t in 0..mesh.num_cells() {
        let third = mesh.cell_area(t) / 3.0;
        for &e in &mesh.cell_to_edges[t] {
            for c in 0..2 {
                buf.push(t, vdof(e, c, ne), vdof(e, c, ne), third);
            }
        }
    }
    buf.into_csr(true)
}

/// CR mass weighted by `alpha(phi(x))`, integrated with the degree-4 rule
/// (exact for the quadratic-in-phi weights in use times the quadratic basis
/// product).
pub fn assemble_weighted_cr_mass(
    mesh: &Arc<Mesh>,
    phi: &P1Field,
    alpha: impl Fn(f64) -> f64,
) -> Result<SparseMatrix, SpaceError> {
    if !crate::spaces::same_mesh(mesh, &phi.mesh) {
        return Err(SpaceError::MeshMismatch);
    }
    let ne = mesh.num_edges();
    let mut buf = TripletBuffer::new(2 * ne, 2 * ne);
    for t in 0..mesh.num_cells() {
        let area = mesh.cell_area(t);
        let edges = mesh.cell_to_edges[t];
        let mut local = [[0.0f64; 3]; 3];
        for (bary, w) in TRI_DEGREE4 {
            let a = alpha(phi.value_in_cell(t, bary));
            let psi = [
                1.0 - 2.0 * bary[0],
                1.0 - 2.0 * bary[1],
                1.0 - 2.0 * bary[2],
            ];
            for i in 0..3 {
                for j in 0..3 {
                    local[i][j] += w * area * a * psi[i] * psi[j];
                }
            }
        }
        for i in 0..3 {
            for j in 0..3 {
                for c in 0..2 {
                    buf.push(t, vdof(edges[i], c, ne), vdof(edges[j], c, ne), local[i][j]);
                }
            }
        }
    }
    Ok(buf.into_csr(true))
}

/// Divergence coupling: `B[t, vdof] = int_T div psi`, exact since the
/// divergence of a per-cell linear field is constant.
pub fn assemble_divergence(mesh: &Mesh) -> SparseMatrix {
    let ne = mesh.num_edges();
    let mut buf = TripletBuffer::new(mesh.num_cells(), 2 * ne);
    for t in 0..mesh.num_cells() {
        let geom = mesh.cell_geometry(t);
        let edges = mesh.cell_to_edges[t];
        for i in 0..3 {
            for c in 0..2 {
                buf.push(
                    t,
                    t,
                    vdof(edges[i], c, ne),
                    -2.0 * geom.area * geom.grad_lambda[i][c],
                );
            }
        }
    }
    buf.into_csr(false)
}

/// P1 stiffness and consistent P1 mass.
pub fn assemble_p1_operators(mesh: &Mesh) -> (SparseMatrix, SparseMatrix) {
    let nv = mesh.num_vertices();
    let mut kbuf = TripletBuffer::new(nv, nv);
    let mut mbuf = TripletBuffer::new(nv, nv);
    for t in 0..mesh.num_cells() {
        let geom = mesh.cell_geometry(t);
        let verts = mesh.cells[t];
        for i in 0..3 {
            for j in 0..3 {
                let k = geom.area
                    * (geom.grad_lambda[i][0] * geom.grad_lambda[j][0]
                        + geom.grad_lambda[i][1] * geom.grad_lambda[j][1]);
                kbuf.push(t, verts[i], verts[j], k);
                let m = geom.area / 12.0 * if i == j { 2.0 } else { 1.0 };
                mbuf.push(t, verts[i], verts[j], m);
            }
        }
    }
    (kbuf.into_csr(true), mbuf.into_csr(true))
}

/// P1 mass weighted by `weight(cell, bary, xy)`, degree-4 rule.
pub fn assemble_p1_weighted_mass(
    mesh: &Mesh,
    weight: impl Fn(usize, [f64; 3], [f64; 2]) -> f64,
) -> SparseMatrix {
    let nv = mesh.num_vertices();
    let mut buf = TripletBuffer::new(nv, nv);
    for t in 0..mesh.num_cells() {
        let points = mesh.cell_points(t);
        let area = mesh.cell_area(t);
        let verts = mesh.cells[t];
        let mut local = [[0.0f64; 3]; 3];
        for (bary, w) in TRI_DEGREE4 {
            let wgt = weight(t, bary, bary_to_xy(&points, bary));
            for i in 0..3 {
                for j in 0..3 {
                    local[i][j] += w * area * wgt * bary[i] * bary[j];
                }
            }
        }
        for i in 0..3 {
            for j in 0..3 {
                buf.push(t, verts[i], verts[j], local[i][j]);
            }
        }
    }
    buf.into_csr(true)
}

/// CR load vector `int f . psi`, degree-4 rule.
pub fn assemble_velocity_load(mesh: &Mesh, f: impl Fn([f64; 2]) -> [f64; 2]) -> Vec<f64> {
    let ne = mesh.num_edges();
    let mut load = vec![0.0; 2 * ne];
    for t in 0..mesh.num_cells() {
        let points = mesh.cell_points(t);
        let area = mesh.cell_area(t);
        let edges = mesh.cell_to_edges[t];
        for (bary, w) in TRI_DEGREE4 {
            let val = f(bary_to_xy(&points, bary));
            for i in 0..3 {
                let psi = 1.0 - 2.0 * bary[i];
                for c in 0..2 {
                    load[vdof(edges[i], c, ne)] += w * area * psi * val[c];
                }
            }
        }
    }
    load
}

/// P1 load vector `int g lambda`, degree-4 rule; `g(cell, bary, xy)`.
pub fn assemble_p1_load(mesh: &Mesh, g: impl Fn(usize, [f64; 3], [f64; 2]) -> f64) -> Vec<f64> {
    let mut load = vec![0.0; mesh.num_vertices()];
    for t in 0..mesh.num_cells() {
        let points = mesh.cell_points(t);
        let area = mesh.cell_area(t);
        let verts = mesh.cells[t];
        for (bary, w) in TRI_DEGREE4 {
            let val = g(t, bary, bary_to_xy(&points, bary));
            for i in 0..3 {
                load[verts[i]] += w * area * val * bary[i];
            }
        }
    }
    load
}
