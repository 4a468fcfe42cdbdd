//! Discrete fields on a mesh and the transfer operators between them.
//!
//! Three spaces are in play: the nonconforming Crouzeix-Raviart space for the
//! velocity (one vector value per edge, the edge average of the field), the
//! piecewise-constant space for the pressure, and the conforming linear space
//! for the phase field. Fields hold an `Arc` to their mesh; all operations
//! here are pure functions of immutable inputs.

use std::sync::Arc;

use crate::mesh::Mesh;
use crate::quadrature::{bary_to_xy, EDGE_GAUSS4};

#[derive(Debug, thiserror::Error)]
pub enum SpaceError {
    #[error("field mesh does not match the target mesh")]
    MeshMismatch,
    #[error("target mesh is not the red refinement of the field's mesh")]
    NotAChildMesh,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormKind {
    L2,
    /// Elementwise H1 seminorm `(sum_T int_T |grad v|^2)^(1/2)`; for
    /// conforming fields this is the usual H1 seminorm.
    BrokenH1,
}

/// Checks that two fields live on the same mesh object.
pub fn same_mesh(a: &Arc<Mesh>, b: &Arc<Mesh>) -> bool {
    Arc::ptr_eq(a, b)
}

/// Crouzeix-Raviart vector field: one `[ux, uy]` per edge.
#[derive(Debug, Clone)]
pub struct CrField {
    pub mesh: Arc<Mesh>,
    pub values: Vec<[f64; 2]>,
}

/// Piecewise-constant field: one value per cell.
#[derive(Debug, Clone)]
pub struct P0Field {
    pub mesh: Arc<Mesh>,
    pub values: Vec<f64>,
}

/// Conforming linear field: one value per vertex.
#[derive(Debug, Clone)]
pub struct P1Field {
    pub mesh: Arc<Mesh>,
    pub values: Vec<f64>,
}

/// Nodal representation of an enriched (conforming quadratic) field: values
/// at the vertices and at the edge midpoints.
#[derive(Debug, Clone)]
pub struct EnrichedField {
    pub vertex_values: Vec<[f64; 2]>,
    pub edge_midpoint_values: Vec<[f64; 2]>,
}

impl CrField {
    pub fn zeros(mesh: &Arc<Mesh>) -> CrField {
        CrField {
            mesh: mesh.clone(),
            values: vec![[0.0, 0.0]; mesh.num_edges()],
        }
    }

    pub fn constant(mesh: &Arc<Mesh>, v: [f64; 2]) -> CrField {
        CrField {
            mesh: mesh.clone(),
            values: vec![v; mesh.num_edges()],
        }
    }

    /// Interpolation into the CR space: each DOF is the edge average of `v`,
    /// realizing `int_F (Pi v) = int_F v` on every edge up to the edge rule
    /// (exact through degree 7).
    pub fn interpolate(mesh: &Arc<Mesh>, v: impl Fn([f64; 2]) -> [f64; 2]) -> CrField {
        let values = (0..mesh.num_edges())
            .map(|e| {
                let mut avg = [0.0, 0.0];
                for (t, w) in EDGE_GAUSS4 {
                    let val = v(mesh.edge_point(e, t));
                    avg[0] += w * val[0];
                    avg[1] += w * val[1];
                }
                avg
            })
            .collect();
        CrField {
            mesh: mesh.clone(),
            values,
        }
    }

    /// Value of the per-cell linear polynomial at a barycentric point. The
    /// CR basis function of local edge `i` (opposite vertex `i`) is
    /// `1 - 2 lambda_i`.
    pub fn value_in_cell(&self, cell: usize, bary: [f64; 3]) -> [f64; 2] {
        let edges = self.mesh.cell_to_edges[cell];
        let mut out = [0.0, 0.0];
        for i in 0..3 {
            let psi = 1.0 - 2.0 * bary[i];
            let v = self.values[edges[i]];
            out[0] += psi * v[0];
            out[1] += psi * v[1];
        }
        out
    }

    /// Cell average of the CR polynomial (its value at the centroid).
    pub fn cell_average(&self, cell: usize) -> [f64; 2] {
        self.value_in_cell(cell, [1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0])
    }

    /// Per-cell constant gradient of one component: rows are components,
    /// columns x/y derivatives.
    pub fn gradient_in_cell(&self, cell: usize) -> [[f64; 2]; 2] {
        let geom = self.mesh.cell_geometry(cell);
        let edges = self.mesh.cell_to_edges[cell];
        let mut g = [[0.0; 2]; 2];
        for i in 0..3 {
            let v = self.values[edges[i]];
            for c in 0..2 {
                for d in 0..2 {
                    g[c][d] += -2.0 * v[c] * geom.grad_lambda[i][d];
                }
            }
        }
        g
    }

    pub fn norm(&self, kind: NormKind) -> f64 {
        let mesh = &self.mesh;
        let mut acc = 0.0;
        match kind {
            NormKind::L2 => {
                // The CR basis is elementwise L2-orthogonal with
                // int_T psi_i psi_j = (|T|/3) delta_ij.
                for t in 0..mesh.num_cells() {
                    let area = mesh.cell_area(t);
                    let edges = mesh.cell_to_edges[t];
                    let s: f64 = edges
                        .iter()
                        .map(|&e| {
                            let v = self.values[e];
                            v[0] * v[0] + v[1] * v[1]
                        })
                        .sum();
                    acc += area / 3.0 * s;
                }
            }
            NormKind::BrokenH1 => {
                for t in 0..mesh.num_cells() {
                    let g = self.gradient_in_cell(t);
                    let frob: f64 = g.iter().flatten().map(|x| x * x).sum();
                    acc += mesh.cell_area(t) * frob;
                }
            }
        }
        acc.sqrt()
    }
}

/// Conforming nodal averaging of a CR field, vertex by vertex: the mean of
/// the incident cells' polynomial values. Edge-midpoint values are the CR
/// DOFs themselves, where the field is already continuous.
pub fn enrich_cr(u: &CrField) -> EnrichedField {
    let mesh = &u.mesh;
    let mut sums = vec![[0.0f64; 2]; mesh.num_vertices()];
    let mut counts = vec![0usize; mesh.num_vertices()];
    for t in 0..mesh.num_cells() {
        let edges = mesh.cell_to_edges[t];
        let total = {
            let mut s = [0.0, 0.0];
            for &e in &edges {
                s[0] += u.values[e][0];
                s[1] += u.values[e][1];
            }
            s
        };
        for (local, &v) in mesh.cells[t].iter().enumerate() {
            // Polynomial value at vertex `local`: sum over edges minus twice
            // the opposite-edge DOF (psi_i(p_v) = 1 - 2 delta_iv).
            let opp = u.values[edges[local]];
            sums[v][0] += total[0] - 2.0 * opp[0];
            sums[v][1] += total[1] - 2.0 * opp[1];
            counts[v] += 1;
        }
    }
    let vertex_values = sums
        .iter()
        .zip(&counts)
        .map(|(s, &c)| [s[0] / c as f64, s[1] / c as f64])
        .collect();
    EnrichedField {
        vertex_values,
        edge_midpoint_values: u.values.clone(),
    }
}

impl P0Field {
    pub fn zeros(mesh: &Arc<Mesh>) -> P0Field {
        P0Field {
            mesh: mesh.clone(),
            values: vec![0.0; mesh.num_cells()],
        }
    }

    /// Area-weighted mean `(1/|Omega|) sum_T v_T |T|`.
    pub fn mean(&self) -> f64 {
        let mut m = 0.0;
        let mut area = 0.0;
        for t in 0..self.mesh.num_cells() {
            let a = self.mesh.cell_area(t);
            m += a * self.values[t];
            area += a;
        }
        m / area
    }

    pub fn norm_l2(&self) -> f64 {
        (0..self.mesh.num_cells())
            .map(|t| self.mesh.cell_area(t) * self.values[t] * self.values[t])
            .sum::<f64>()
            .sqrt()
    }
}

impl P1Field {
    pub fn constant(mesh: &Arc<Mesh>, c: f64) -> P1Field {
        P1Field {
            mesh: mesh.clone(),
            values: vec![c; mesh.num_vertices()],
        }
    }

    pub fn zeros(mesh: &Arc<Mesh>) -> P1Field {
        Self::constant(mesh, 0.0)
    }

    pub fn from_fn(mesh: &Arc<Mesh>, f: impl Fn([f64; 2]) -> f64) -> P1Field {
        P1Field {
            mesh: mesh.clone(),
            values: mesh.vertices.iter().map(|&p| f(p)).collect(),
        }
    }

    pub fn value_in_cell(&self, cell: usize, bary: [f64; 3]) -> f64 {
        let [a, b, c] = self.mesh.cells[cell];
        bary[0] * self.values[a] + bary[1] * self.values[b] + bary[2] * self.values[c]
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Integral over the domain (exact for a linear field).
    pub fn integral(&self) -> f64 {
        (0..self.mesh.num_cells())
            .map(|t| {
                let [a, b, c] = self.mesh.cells[t];
                self.mesh.cell_area(t) / 3.0
                    * (self.values[a] + self.values[b] + self.values[c])
            })
            .sum()
    }

    pub fn norm(&self, kind: NormKind) -> f64 {
        let mesh = &self.mesh;
        let mut acc = 0.0;
        match kind {
            NormKind::L2 => {
                for t in 0..mesh.num_cells() {
                    let [a, b, c] = mesh.cells[t];
                    let (fa, fb, fc) = (self.values[a], self.values[b], self.values[c]);
                    // phi' M_loc phi with M_loc = |T|/12 [[2,1,1],[1,2,1],[1,1,2]].
                    acc += mesh.cell_area(t) / 12.0
                        * (2.0 * (fa * fa + fb * fb + fc * fc)
                            + 2.0 * (fa * fb + fb * fc + fa * fc));
                }
            }
            NormKind::BrokenH1 => {
                for t in 0..mesh.num_cells() {
                    let geom = mesh.cell_geometry(t);
                    let [a, b, c] = mesh.cells[t];
                    let vals = [self.values[a], self.values[b], self.values[c]];
                    let mut g = [0.0, 0.0];
                    for i in 0..3 {
                        g[0] += vals[i] * geom.grad_lambda[i][0];
                        g[1] += vals[i] * geom.grad_lambda[i][1];
                    }
                    acc += geom.area * (g[0] * g[0] + g[1] * g[1]);
                }
            }
        }
        acc.sqrt()
    }

    /// Nodal interpolation onto the red refinement of this field's mesh:
    /// coarse values are copied, each midpoint vertex gets the mean of its
    /// parent edge's endpoint values. Exact on the coarse space, so min/max
    /// (and the `[0,1]` box) are preserved.
    pub fn prolong(&self, fine: &Arc<Mesh>) -> Result<P1Field, SpaceError> {
        let coarse = &self.mesh;
        let refinement = fine.refinement.as_ref().ok_or(SpaceError::NotAChildMesh)?;
        if refinement.coarse_vertices != coarse.num_vertices()
            || refinement.parent_edges != coarse.edges
            || fine.level != coarse.level + 1
        {
            return Err(SpaceError::NotAChildMesh);
        }
        let mut values = Vec::with_capacity(fine.num_vertices());
        values.extend_from_slice(&self.values);
        for [a, b] in &refinement.parent_edges {
            values.push(0.5 * (self.values[*a] + self.values[*b]));
        }
        Ok(P1Field {
            mesh: fine.clone(),
            values,
        })
    }
}

/// Evaluates `|u|^2` of the per-cell CR polynomial at a barycentric point.
pub fn cr_speed_squared(u: &CrField, cell: usize, bary: [f64; 3]) -> f64 {
    let v = u.value_in_cell(cell, bary);
    v[0] * v[0] + v[1] * v[1]
}

/// Physical coordinates of a barycentric point of a cell.
pub fn cell_point(mesh: &Mesh, cell: usize, bary: [f64; 3]) -> [f64; 2] {
    bary_to_xy(&mesh.cell_points(cell), bary)
}
