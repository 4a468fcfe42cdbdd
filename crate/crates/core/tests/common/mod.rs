//! Shared helpers for the integration suites: mesh builders and
//! high-order quadrature oracles kept independent of the library's own
//! integration routines.
//!
//! Each test binary compiles its own copy, so not every helper is used
//! everywhere.
#![allow(dead_code)]

use std::sync::Arc;

use crflow::mesh::Mesh;

/// Structured right-triangle mesh of the unit square with untouched
/// (all-wall) boundary tags.
pub fn unit_square_mesh(n: usize) -> Mesh {
    let mut vertices = Vec::with_capacity((n + 1) * (n + 1));
    for j in 0..=n {
        for i in 0..=n {
            vertices.push([i as f64 / n as f64, j as f64 / n as f64]);
        }
    }
    let vid = |i: usize, j: usize| j * (n + 1) + i;
    let mut cells = Vec::with_capacity(2 * n * n);
    for j in 0..n {
        for i in 0..n {
            cells.push([vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)]);
            cells.push([vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)]);
        }
    }
    Mesh::from_cells(vertices, cells).unwrap()
}

const GAUSS10_T: [f64; 5] = [
    0.148874338981631211,
    0.433395394129247191,
    0.679409568299024406,
    0.865063366688984511,
    0.973906528517171720,
];
const GAUSS10_W: [f64; 5] = [
    0.295524224714752870,
    0.269266719309996355,
    0.219086362515982044,
    0.149451349150580593,
    0.066671344308688138,
];

/// 10-point Gauss-Legendre average over edge `e` of `mesh`.
pub fn edge_average_10pt(mesh: &Mesh, e: usize, f: impl Fn([f64; 2]) -> f64) -> f64 {
    let mut acc = 0.0;
    for i in 0..5 {
        for s in [0.5 - 0.5 * GAUSS10_T[i], 0.5 + 0.5 * GAUSS10_T[i]] {
            acc += 0.5 * GAUSS10_W[i] * f(mesh.edge_point(e, s));
        }
    }
    acc
}

/// High-order triangle quadrature via the Duffy transform of a tensor
/// 10x10 Gauss rule; used as the error-measurement oracle. The integrand
/// receives the physical point and its barycentric coordinates.
pub fn integrate_triangle(
    p: [[f64; 2]; 3],
    f: impl Fn([f64; 2], [f64; 3]) -> f64,
) -> f64 {
    let area = 0.5
        * ((p[1][0] - p[0][0]) * (p[2][1] - p[0][1])
            - (p[1][1] - p[0][1]) * (p[2][0] - p[0][0]));
    let node = |i: usize| 0.5 + 0.5 * GAUSS10_T[i / 2] * if i % 2 == 0 { -1.0 } else { 1.0 };
    let weight = |i: usize| 0.5 * GAUSS10_W[i / 2];
    let mut acc = 0.0;
    for i in 0..10 {
        let (u, wu) = (node(i), weight(i));
        for j in 0..10 {
            let (v, wv) = (node(j), weight(j));
            // Duffy: (u, v) in the unit square -> (u, v(1-u)) in the
            // reference triangle, Jacobian (1-u).
            let (l1, l2) = (u, v * (1.0 - u));
            let l0 = 1.0 - l1 - l2;
            let x = [
                l0 * p[0][0] + l1 * p[1][0] + l2 * p[2][0],
                l0 * p[0][1] + l1 * p[1][1] + l2 * p[2][1],
            ];
            acc += wu * wv * (1.0 - u) * f(x, [l0, l1, l2]);
        }
    }
    2.0 * area * acc
}

/// Least-squares slope of `ln(err)` against `ln(h)`.
pub fn loglog_slope(h: &[f64], err: &[f64]) -> f64 {
    let n = h.len() as f64;
    let xs: Vec<f64> = h.iter().map(|v| v.ln()).collect();
    let ys: Vec<f64> = err.iter().map(|v| v.ln()).collect();
    let xbar = xs.iter().sum::<f64>() / n;
    let ybar = ys.iter().sum::<f64>() / n;
    let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - xbar) * (y - ybar)).sum();
    let den: f64 = xs.iter().map(|x| (x - xbar) * (x - xbar)).sum();
    num / den
}

pub fn arc(mesh: Mesh) -> Arc<Mesh> {
    Arc::new(mesh)
}
