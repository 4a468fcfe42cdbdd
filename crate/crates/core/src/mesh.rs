//! Simplicial 2D meshes: topology construction, boundary tagging for the
//! benchmark domains, and uniform red refinement.
//!
//! Conventions:
//! - cells are counter-clockwise vertex triples with positive signed area
//! - local edge `i` of a cell is the edge opposite local vertex `i`
//!   (cell `(v0,v1,v2)` has local edge 0 = `{v1,v2}`, 1 = `{v2,v0}`, 2 = `{v0,v1}`)
//! - global edges are stored as sorted vertex pairs in lexicographic order,
//!   so degree-of-freedom numbering is reproducible across runs
//! - a mesh is immutable once built; refinement returns a new mesh

use std::collections::BTreeMap;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum MeshError {
    #[error("cell {cell} references vertex {vertex} out of range ({nvertices} vertices)")]
    VertexOutOfRange {
        cell: usize,
        vertex: usize,
        nvertices: usize,
    },
    #[error("cell {cell} is degenerate (area {area:e} below threshold)")]
    DegenerateCell { cell: usize, area: f64 },
    #[error("cell {cell} is inverted (signed area {area:e} < 0); cells must be counter-clockwise")]
    InvertedCell { cell: usize, area: f64 },
    #[error("cells {first} and {second} share the same vertex set")]
    DuplicateCell { first: usize, second: usize },
    #[error("edge ({a}, {b}) is shared by more than two cells")]
    NonManifoldEdge { a: usize, b: usize },
    #[error("vertex {vertex} is not referenced by any cell")]
    DanglingVertex { vertex: usize },
    #[error("Euler relation violated: V - E + T = {v} - {e} + {t} = {chi}, expected 1")]
    NotSimplyConnected {
        v: usize,
        e: usize,
        t: usize,
        chi: i64,
    },
    #[error(
        "case {case} with n = {n}: boundary segment endpoint {coordinate} does not lie on a \
         grid line (n must be a multiple of {required})"
    )]
    UnalignedBoundarySegment {
        case: &'static str,
        n: u32,
        coordinate: f64,
        required: u32,
    },
    #[error("subdivision count n = {n} is below the minimum of 4")]
    ResolutionTooCoarse { n: u32 },
    #[error("boundary edge ({a}, {b}) carries no tag")]
    UntaggedBoundaryEdge { a: usize, b: usize },
}

/// Velocity profile prescribed on an inlet segment.
#[derive(Debug, Clone, Copy)]
pub enum InletProfile {
    /// Constant velocity vector.
    Constant(f64, f64),
    /// `(4 y (1 - y), 0)`: parabola over a unit-height channel.
    Parabola4Y,
    /// `(-(y - 0.5)(y + 0.5), 0)`: parabola over a centered channel of height 1.
    ParabolaCentered,
    /// `(-100 (y^2 - 0.35^2)(y^2 - 0.15^2), 0)`: quartic over twin inlet bands.
    QuarticTwin,
    /// Caller-supplied profile, mainly for manufactured-solution tests.
    Custom(fn([f64; 2]) -> [f64; 2]),
}

impl PartialEq for InletProfile {
    fn eq(&self, other: &Self) -> bool {
        use InletProfile::*;
        match (self, other) {
            (Constant(a, b), Constant(c, d)) => a == c && b == d,
            (Parabola4Y, Parabola4Y)
            | (ParabolaCentered, ParabolaCentered)
            | (QuarticTwin, QuarticTwin) => true,
            (Custom(f), Custom(g)) => std::ptr::fn_addr_eq(*f, *g),
            _ => false,
        }
    }
}

impl InletProfile {
    pub fn eval(&self, p: [f64; 2]) -> [f64; 2] {
        let y = p[1];
        match self {
            InletProfile::Constant(a, b) => [*a, *b],
            InletProfile::Parabola4Y => [4.0 * y * (1.0 - y), 0.0],
            InletProfile::ParabolaCentered => [-(y - 0.5) * (y + 0.5), 0.0],
            InletProfile::QuarticTwin => {
                [-100.0 * (y * y - 0.35 * 0.35) * (y * y - 0.15 * 0.15), 0.0]
            }
            InletProfile::Custom(f) => f(p),
        }
    }
}

/// Boundary condition attached to a boundary edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryTag {
    /// Dirichlet with the given velocity profile.
    Inlet(InletProfile),
    /// Natural (zero Neumann) outflow: `(mu grad(u) - p I) . n = 0`.
    Outlet,
    /// Homogeneous Dirichlet (no-slip).
    Wall,
}

impl BoundaryTag {
    /// Dirichlet data carried by this tag, `None` for natural boundaries.
    pub fn dirichlet_profile(&self) -> Option<InletProfile> {
        match self {
            BoundaryTag::Inlet(p) => Some(*p),
            BoundaryTag::Wall => Some(InletProfile::Constant(0.0, 0.0)),
            BoundaryTag::Outlet => None,
        }
    }
}

/// The five 2D benchmark domains.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BenchmarkCase {
    PipeBend,
    LeftInflow,
    ThreeInflows,
    Rugby,
    Bypass,
}

impl BenchmarkCase {
    pub const ALL: [BenchmarkCase; 5] = [
        BenchmarkCase::PipeBend,
        BenchmarkCase::LeftInflow,
        BenchmarkCase::ThreeInflows,
        BenchmarkCase::Rugby,
        BenchmarkCase::Bypass,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            BenchmarkCase::PipeBend => "pipe_bend",
            BenchmarkCase::LeftInflow => "left_inflow",
            BenchmarkCase::ThreeInflows => "three_inflows",
            BenchmarkCase::Rugby => "rugby",
            BenchmarkCase::Bypass => "bypass",
        }
    }

    pub fn parse(name: &str) -> Option<BenchmarkCase> {
        Self::ALL.iter().copied().find(|c| c.name() == name)
    }

    /// Domain rectangle as `[[x0, y0], [x1, y1]]`.
    pub fn domain(&self) -> [[f64; 2]; 2] {
        match self {
            BenchmarkCase::PipeBend | BenchmarkCase::LeftInflow | BenchmarkCase::ThreeInflows => {
                [[0.0, 0.0], [1.0, 1.0]]
            }
            BenchmarkCase::Rugby => [[-0.5, -0.5], [1.5, 0.5]],
            BenchmarkCase::Bypass => [[0.0, -0.5], [1.5, 0.5]],
        }
    }

    /// Smallest n such that all inlet/outlet segment endpoints land on grid
    /// lines; valid resolutions are multiples of this.
    pub fn resolution_step(&self) -> u32 {
        match self {
            BenchmarkCase::PipeBend | BenchmarkCase::LeftInflow => 10,
            BenchmarkCase::ThreeInflows => 5,
            BenchmarkCase::Rugby => 1,
            // y = +-0.15 and +-0.35 sit at fractions of 1/20 of the height,
            // and the width 1.5 requires an even n.
            BenchmarkCase::Bypass => 20,
        }
    }

    /// Default subdivisions per unit length, chosen so the level-0 structured
    /// mesh is comparable in size to the corresponding unstructured mesh of
    /// the benchmark series.
    pub fn default_resolution(&self) -> u32 {
        match self {
            BenchmarkCase::PipeBend | BenchmarkCase::LeftInflow | BenchmarkCase::ThreeInflows => 30,
            BenchmarkCase::Rugby => 20,
            BenchmarkCase::Bypass => 40,
        }
    }
}

/// Provenance of a refined mesh: fine vertex `coarse_vertices + e` is the
/// midpoint of coarse edge `e` with the recorded endpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct Refinement {
    pub coarse_vertices: usize,
    pub parent_edges: Vec<[usize; 2]>,
}

/// Conforming triangulation with full edge topology.
#[derive(Debug, Clone)]
pub struct Mesh {
    pub vertices: Vec<[f64; 2]>,
    pub cells: Vec<[usize; 3]>,
    /// Sorted vertex pairs in lexicographic order.
    pub edges: Vec<[usize; 2]>,
    /// For each cell, the global edge opposite each local vertex.
    pub cell_to_edges: Vec<[usize; 3]>,
    /// One or two incident cells per edge.
    pub edge_to_cells: Vec<(usize, Option<usize>)>,
    /// `Some(tag)` exactly on boundary edges.
    pub boundary_tags: Vec<Option<BoundaryTag>>,
    /// Refinement depth, 0 for a freshly built mesh.
    pub level: u32,
    /// Set on meshes produced by [`Mesh::refine_red`].
    pub refinement: Option<Refinement>,
}

/// Per-cell geometry used by element integration.
#[derive(Debug, Clone, Copy)]
pub struct CellGeometry {
    pub points: [[f64; 2]; 3],
    pub area: f64,
    /// Gradients of the barycentric coordinates.
    pub grad_lambda: [[f64; 2]; 3],
}

pub fn cell_geometry(points: [[f64; 2]; 3]) -> CellGeometry {
    let [p0, p1, p2] = points;
    let det = (p1[0] - p0[0]) * (p2[1] - p0[1]) - (p1[1] - p0[1]) * (p2[0] - p0[0]);
    let area = 0.5 * det;
    let d = 1.0 / det;
    CellGeometry {
        points,
        area,
        grad_lambda: [
            [(p1[1] - p2[1]) * d, (p2[0] - p1[0]) * d],
            [(p2[1] - p0[1]) * d, (p0[0] - p2[0]) * d],
            [(p0[1] - p1[1]) * d, (p1[0] - p0[0]) * d],
        ],
    }
}

fn signed_area(p0: [f64; 2], p1: [f64; 2], p2: [f64; 2]) -> f64 {
    0.5 * ((p1[0] - p0[0]) * (p2[1] - p0[1]) - (p1[1] - p0[1]) * (p2[0] - p0[0]))
}

impl Mesh {
    /// Builds the full edge topology from raw vertices and cells; boundary
    /// edges are tagged `Wall` (retag with [`Mesh::with_boundary_tags`]).
    pub fn from_cells(
        vertices: Vec<[f64; 2]>,
        cells: Vec<[usize; 3]>,
    ) -> Result<Mesh, MeshError> {
        let nv = vertices.len();
        for (t, c) in cells.iter().enumerate() {
            for &v in c {
                if v >= nv {
                    return Err(MeshError::VertexOutOfRange {
                        cell: t,
                        vertex: v,
                        nvertices: nv,
                    });
                }
            }
        }

        // Domain scale for the degeneracy threshold.
        let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
        for p in &vertices {
            for d in 0..2 {
                lo[d] = lo[d].min(p[d]);
                hi[d] = hi[d].max(p[d]);
            }
        }
        let bbox_area = ((hi[0] - lo[0]) * (hi[1] - lo[1])).max(f64::MIN_POSITIVE);

        let mut seen: BTreeMap<[usize; 3], usize> = BTreeMap::new();
        for (t, &[a, b, c]) in cells.iter().enumerate() {
            let area = signed_area(vertices[a], vertices[b], vertices[c]);
            if area.abs() <= 1e-14 * bbox_area {
                return Err(MeshError::DegenerateCell { cell: t, area });
            }
            if area < 0.0 {
                return Err(MeshError::InvertedCell { cell: t, area });
            }
            let mut key = [a, b, c];
            key.sort_unstable();
            if let Some(&first) = seen.get(&key) {
                return Err(MeshError::DuplicateCell { first, second: t });
            }
            seen.insert(key, t);
        }

        // Lexicographically ordered edge list.
        let mut edge_ids: BTreeMap<[usize; 2], usize> = BTreeMap::new();
        for &[a, b, c] in &cells {
            for [u, v] in [[b, c], [c, a], [a, b]] {
                let key = if u < v { [u, v] } else { [v, u] };
                let next = edge_ids.len();
                edge_ids.entry(key).or_insert(next);
            }
        }
        let mut edges: Vec<[usize; 2]> = edge_ids.keys().copied().collect();
        edges.sort_unstable();
        for (i, e) in edges.iter().enumerate() {
            *edge_ids.get_mut(e).unwrap() = i;
        }

        let mut cell_to_edges = Vec::with_capacity(cells.len());
        let mut incidence: Vec<Vec<usize>> = vec![Vec::new(); edges.len()];
        for (t, &[a, b, c]) in cells.iter().enumerate() {
            let mut local = [0usize; 3];
            for (i, [u, v]) in [[b, c], [c, a], [a, b]].into_iter().enumerate() {
                let key = if u < v { [u, v] } else { [v, u] };
                let e = edge_ids[&key];
                local[i] = e;
                incidence[e].push(t);
            }
            cell_to_edges.push(local);
        }

        let mut edge_to_cells = Vec::with_capacity(edges.len());
        for (e, inc) in incidence.iter().enumerate() {
            match inc.as_slice() {
                [t] => edge_to_cells.push((*t, None)),
                [t, s] => edge_to_cells.push((*t, Some(*s))),
                _ => {
                    return Err(MeshError::NonManifoldEdge {
                        a: edges[e][0],
                        b: edges[e][1],
                    })
                }
            }
        }

        let mut referenced = vec![false; nv];
        for c in &cells {
            for &v in c {
                referenced[v] = true;
            }
        }
        if let Some(v) = referenced.iter().position(|r| !r) {
            return Err(MeshError::DanglingVertex { vertex: v });
        }

        let (v, e, t) = (nv, edges.len(), cells.len());
        let chi = v as i64 - e as i64 + t as i64;
        if chi != 1 {
            return Err(MeshError::NotSimplyConnected { v, e, t, chi });
        }

        let boundary_tags = edge_to_cells
            .iter()
            .map(|(_, second)| second.is_none().then_some(BoundaryTag::Wall))
            .collect();

        Ok(Mesh {
            vertices,
            cells,
            edges,
            cell_to_edges,
            edge_to_cells,
            boundary_tags,
            level: 0,
            refinement: None,
        })
    }

    /// Retags every boundary edge by its midpoint.
    pub fn with_boundary_tags(mut self, tag: impl Fn([f64; 2]) -> BoundaryTag) -> Mesh {
        for e in 0..self.edges.len() {
            if self.boundary_tags[e].is_some() {
                self.boundary_tags[e] = Some(tag(self.edge_midpoint(e)));
            }
        }
        self
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn is_boundary_edge(&self, e: usize) -> bool {
        self.edge_to_cells[e].1.is_none()
    }

    pub fn cell_points(&self, t: usize) -> [[f64; 2]; 3] {
        let [a, b, c] = self.cells[t];
        [self.vertices[a], self.vertices[b], self.vertices[c]]
    }

    pub fn cell_geometry(&self, t: usize) -> CellGeometry {
        cell_geometry(self.cell_points(t))
    }

    pub fn cell_area(&self, t: usize) -> f64 {
        let [p0, p1, p2] = self.cell_points(t);
        signed_area(p0, p1, p2)
    }

    pub fn edge_length(&self, e: usize) -> f64 {
        let [a, b] = self.edges[e];
        let (p, q) = (self.vertices[a], self.vertices[b]);
        ((q[0] - p[0]).powi(2) + (q[1] - p[1]).powi(2)).sqrt()
    }

    pub fn edge_midpoint(&self, e: usize) -> [f64; 2] {
        let [a, b] = self.edges[e];
        let (p, q) = (self.vertices[a], self.vertices[b]);
        [0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1])]
    }

    /// Point on edge `e` at parameter `t` of the segment from the lower to
    /// the higher vertex index.
    pub fn edge_point(&self, e: usize, t: f64) -> [f64; 2] {
        let [a, b] = self.edges[e];
        let (p, q) = (self.vertices[a], self.vertices[b]);
        [p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])]
    }

    pub fn domain_area(&self) -> f64 {
        (0..self.num_cells()).map(|t| self.cell_area(t)).sum()
    }

    /// Uniform red refinement: each triangle is split into four similar
    /// children through its edge midpoints. Boundary tags are inherited by
    /// the child halves of each boundary edge.
    pub fn refine_red(&self) -> Mesh {
        let nv = self.num_vertices();
        let mut vertices = self.vertices.clone();
        vertices.extend((0..self.num_edges()).map(|e| self.edge_midpoint(e)));

        let mut cells = Vec::with_capacity(4 * self.num_cells());
        for (t, &[v0, v1, v2]) in self.cells.iter().enumerate() {
            let [e0, e1, e2] = self.cell_to_edges[t];
            let (m0, m1, m2) = (nv + e0, nv + e1, nv + e2);
            cells.push([v0, m2, m1]);
            cells.push([m2, v1, m0]);
            cells.push([m1, m0, v2]);
            cells.push([m0, m1, m2]);
        }

        let mut fine = Mesh::from_cells(vertices, cells)
            .expect("red refinement of a valid mesh is valid");

        for e in 0..fine.num_edges() {
            if !fine.is_boundary_edge(e) {
                continue;
            }
            let [a, b] = fine.edges[e];
            // A boundary child edge joins one coarse vertex to the midpoint
            // of its (boundary) parent edge.
            let mid = a.max(b);
            debug_assert!(mid >= nv && a.min(b) < nv);
            let parent = mid - nv;
            fine.boundary_tags[e] = self.boundary_tags[parent];
            debug_assert!(fine.boundary_tags[e].is_some());
        }

        fine.level = self.level + 1;
        fine.refinement = Some(Refinement {
            coarse_vertices: nv,
            parent_edges: self.edges.clone(),
        });
        fine
    }

    pub fn dof_counts(&self) -> DofReport {
        DofReport::from_counts(self.num_vertices(), self.num_edges(), self.num_cells())
    }

    /// Maximum mesh size `max_T |T|^(1/2)` and minimum interior angle in
    /// degrees.
    pub fn quality(&self) -> MeshQuality {
        let mut h_max = 0.0f64;
        let mut min_angle = f64::INFINITY;
        for t in 0..self.num_cells() {
            h_max = h_max.max(self.cell_area(t).sqrt());
            let p = self.cell_points(t);
            for i in 0..3 {
                let a = p[i];
                let b = p[(i + 1) % 3];
                let c = p[(i + 2) % 3];
                let u = [b[0] - a[0], b[1] - a[1]];
                let v = [c[0] - a[0], c[1] - a[1]];
                let dot = u[0] * v[0] + u[1] * v[1];
                let cross = u[0] * v[1] - u[1] * v[0];
                min_angle = min_angle.min(cross.atan2(dot).abs());
            }
        }
        MeshQuality {
            h_max,
            min_angle_deg: min_angle.to_degrees(),
        }
    }

    pub fn h_min(&self) -> f64 {
        (0..self.num_cells())
            .map(|t| self.cell_area(t).sqrt())
            .fold(f64::INFINITY, f64::min)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeshQuality {
    pub h_max: f64,
    pub min_angle_deg: f64,
}

/// Entity and degree-of-freedom counts for one mesh, for both the CR-P0
/// pair built here and the Taylor-Hood pair used as a size baseline.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DofReport {
    pub vertices: usize,
    pub edges: usize,
    pub cells: usize,
    pub cr_velocity_dofs: usize,
    pub p0_pressure_dofs: usize,
    pub th_velocity_dofs: usize,
    pub th_pressure_dofs: usize,
}

impl DofReport {
    pub fn from_counts(vertices: usize, edges: usize, cells: usize) -> DofReport {
        DofReport {
            vertices,
            edges,
            cells,
            cr_velocity_dofs: 2 * edges,
            p0_pressure_dofs: cells,
            th_velocity_dofs: 2 * (vertices + edges),
            th_pressure_dofs: vertices,
        }
    }

    /// Counts after one red refinement: `V' = V + E`, `E' = 2E + 3T`,
    /// `T' = 4T`.
    pub fn refined(&self) -> DofReport {
        DofReport::from_counts(
            self.vertices + self.edges,
            2 * self.edges + 3 * self.cells,
            4 * self.cells,
        )
    }
}

/// Structured right-triangle mesh of one of the benchmark rectangles with
/// `n` subdivisions per unit length, boundary edges tagged per the case.
///
/// `n` must be a multiple of [`BenchmarkCase::resolution_step`] so that the
/// inlet/outlet segment endpoints land exactly on grid lines.
pub fn generate_case_mesh(case: BenchmarkCase, n: u32) -> Result<Mesh, MeshError> {
    if n < 4 {
        return Err(MeshError::ResolutionTooCoarse { n });
    }
    let step = case.resolution_step();
    if n % step != 0 {
        // Report the first misaligned segment endpoint for the message.
        let coordinate = match case {
            BenchmarkCase::PipeBend | BenchmarkCase::LeftInflow => 0.7,
            BenchmarkCase::ThreeInflows => 0.4,
            BenchmarkCase::Rugby => unreachable!("rugby accepts any n"),
            BenchmarkCase::Bypass => 0.15,
        };
        return Err(MeshError::UnalignedBoundarySegment {
            case: case.name(),
            n,
            coordinate,
            required: step,
        });
    }

    let [[x0, y0], [x1, y1]] = case.domain();
    let nx = ((x1 - x0) * n as f64).round() as usize;
    let ny = ((y1 - y0) * n as f64).round() as usize;
    let (dx, dy) = ((x1 - x0) / nx as f64, (y1 - y0) / ny as f64);

    let mut vertices = Vec::with_capacity((nx + 1) * (ny + 1));
    for j in 0..=ny {
        for i in 0..=nx {
            vertices.push([x0 + i as f64 * dx, y0 + j as f64 * dy]);
        }
    }
    let vid = |i: usize, j: usize| j * (nx + 1) + i;
    let mut cells = Vec::with_capacity(2 * nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            // Diagonal from (i, j) to (i+1, j+1); both children CCW.
            cells.push([vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)]);
            cells.push([vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)]);
        }
    }

    let mesh = Mesh::from_cells(vertices, cells)?;
    let eps = dx.min(dy) * 1e-9;
    let on = move |v: f64, target: f64| (v - target).abs() < eps;
    let within = move |v: f64, lo: f64, hi: f64| v > lo + eps && v < hi - eps;

    Ok(mesh.with_boundary_tags(move |[mx, my]| match case {
        BenchmarkCase::PipeBend => {
            if on(mx, 0.0) && within(my, 0.7, 0.9) {
                BoundaryTag::Inlet(InletProfile::Constant(1.0, 0.0))
            } else if on(my, 0.0) && within(mx, 0.7, 0.9) {
                BoundaryTag::Outlet
            } else {
                BoundaryTag::Wall
            }
        }
        BenchmarkCase::LeftInflow => {
            if on(mx, 0.0) {
                BoundaryTag::Inlet(InletProfile::Parabola4Y)
            } else if on(mx, 1.0) && within(my, 0.3, 0.7) {
                BoundaryTag::Outlet
            } else {
                BoundaryTag::Wall
            }
        }
        BenchmarkCase::ThreeInflows => {
            if on(my, 1.0) && within(mx, 0.4, 0.6) {
                BoundaryTag::Inlet(InletProfile::Constant(0.0, -1.0))
            } else if on(my, 0.0) && within(mx, 0.4, 0.6) {
                BoundaryTag::Inlet(InletProfile::Constant(0.0, 1.0))
            } else if on(mx, 0.0) && within(my, 0.4, 0.6) {
                BoundaryTag::Inlet(InletProfile::Constant(1.0, 0.0))
            } else if on(mx, 1.0) && within(my, 0.4, 0.6) {
                BoundaryTag::Outlet
            } else {
                BoundaryTag::Wall
            }
        }
        BenchmarkCase::Rugby => {
            if on(mx, -0.5) {
                BoundaryTag::Inlet(InletProfile::ParabolaCentered)
            } else if on(mx, 1.5) {
                BoundaryTag::Outlet
            } else {
                BoundaryTag::Wall
            }
        }
        BenchmarkCase::Bypass => {
            let in_band = within(my, 0.15, 0.35) || within(my, -0.35, -0.15);
            if on(mx, 0.0) && in_band {
                BoundaryTag::Inlet(InletProfile::QuarticTwin)
            } else if on(mx, 1.5) && in_band {
                BoundaryTag::Outlet
            } else {
                BoundaryTag::Wall
            }
        }
    }))
}
