//! Self-checks behind `crflow verify`: fast invariant and oracle tests that
//! exercise the assembled operators, transfer operators, the semi-implicit
//! scheme and one full state solve, reporting one pass/fail line each.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::mesh::{generate_case_mesh, BenchmarkCase, DofReport, Mesh};
use crate::phasefield::{
    double_well, double_well_prime, ginzburg_landau, phase_step, project_box, update_duals,
    DualState, PhaseParams, PhaseStepper,
};
use crate::spaces::{enrich_cr, CrField, NormKind, P1Field};
use crate::stokes::{solve_state, PhysParams, RESIDUAL_CONTRACT};

pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, result: Result<String, String>) -> CheckResult {
    match result {
        Ok(detail) => CheckResult {
            name,
            passed: true,
            detail,
        },
        Err(detail) => CheckResult {
            name,
            passed: false,
            detail,
        },
    }
}

fn table_a_params() -> PhaseParams {
    crate::cli_io::preset(BenchmarkCase::PipeBend).phase
}

/// Benchmark-series DOF table: seeds `(V, T)` per case and the expected
/// CR velocity DOF column over four levels.
const DOF_TABLE: [(&str, usize, usize, [usize; 4]); 3] = [
    ("pipe_bend", 945, 1792, [5472, 21696, 86400, 344832]),
    ("rugby", 881, 1664, [5088, 20160, 80256, 320256]),
    ("bypass", 2174, 4202, [12750, 50712, 202272, 807936]),
];

fn check_dof_table() -> Result<String, String> {
    for (name, v, t, cr) in DOF_TABLE {
        let mut report = DofReport::from_counts(v, v + t - 1, t);
        for (level, expect) in cr.iter().enumerate() {
            if report.cr_velocity_dofs != *expect {
                return Err(format!(
                    "{name} level {level}: cr dofs {} != {expect}",
                    report.cr_velocity_dofs
                ));
            }
            report = report.refined();
        }
    }
    Ok("3 seed cases x 4 levels".into())
}

fn check_local_matrices() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for k in 0..50 {
        let p: [[f64; 2]; 3] = loop {
            let q: [[f64; 2]; 3] = std::array::from_fn(|_| [rng.gen(), rng.gen()]);
            let a = 0.5
                * ((q[1][0] - q[0][0]) * (q[2][1] - q[0][1])
                    - (q[1][1] - q[0][1]) * (q[2][0] - q[0][0]));
            if a > 0.05 {
                break q;
            }
            if a < -0.05 {
                break [q[0], q[2], q[1]];
            }
        };
        let mesh = Mesh::from_cells(p.to_vec(), vec![[0, 1, 2]]).map_err(|e| e.to_string())?;
        let area = mesh.cell_area(0);
        let ne = mesh.num_edges();
        let e = mesh.cell_to_edges[0];

        // Closed-form gradients of the barycentric coordinates.
        let det = 2.0 * area;
        let g = [
            [(p[1][1] - p[2][1]) / det, (p[2][0] - p[1][0]) / det],
            [(p[2][1] - p[0][1]) / det, (p[0][0] - p[2][0]) / det],
            [(p[0][1] - p[1][1]) / det, (p[1][0] - p[0][0]) / det],
        ];

        let stiff = crate::assembly::assemble_cr_stiffness(&mesh);
        let mass = crate::assembly::assemble_cr_mass(&mesh);
        let (_, p1m) = crate::assembly::assemble_p1_operators(&mesh);
        for i in 0..3 {
            for j in 0..3 {
                let expect = 4.0 * area * (g[i][0] * g[j][0] + g[i][1] * g[j][1]);
                let got = stiff.get(
                    crate::assembly::vdof(e[i], 0, ne),
                    crate::assembly::vdof(e[j], 0, ne),
                );
                if (got - expect).abs() > 1e-12 * expect.abs().max(1.0) {
                    return Err(format!("triangle {k}: CR stiffness [{i}][{j}]"));
                }
                let expect = if i == j { area / 3.0 } else { 0.0 };
                let got = mass.get(
                    crate::assembly::vdof(e[i], 0, ne),
                    crate::assembly::vdof(e[j], 0, ne),
                );
                if (got - expect).abs() > 1e-12 * area {
                    return Err(format!("triangle {k}: CR mass [{i}][{j}]"));
                }
                let expect = area / 12.0 * if i == j { 2.0 } else { 1.0 };
                if (p1m.get(i, j) - expect).abs() > 1e-12 * area {
                    return Err(format!("triangle {k}: P1 mass [{i}][{j}]"));
                }
            }
        }
    }
    Ok("50 random triangles vs closed forms".into())
}

fn check_interpolation() -> Result<String, String> {
    let mesh = Arc::new(generate_case_mesh(BenchmarkCase::PipeBend, 10).unwrap());
    let f = |p: [f64; 2]| [p[0] * p[0], p[0] * p[1]];
    let u = CrField::interpolate(&mesh, f);
    // Composite-Simpson edge averages as the independent reference.
    for e in 0..mesh.num_edges() {
        for c in 0..2 {
            let n = 64;
            let mut acc = 0.0;
            for i in 0..n {
                let (a, b) = (i as f64 / n as f64, (i + 1) as f64 / n as f64);
                let m = 0.5 * (a + b);
                acc += (b - a) / 6.0
                    * (f(mesh.edge_point(e, a))[c]
                        + 4.0 * f(mesh.edge_point(e, m))[c]
                        + f(mesh.edge_point(e, b))[c]);
            }
            if (u.values[e][c] - acc).abs() > 1e-12 {
                return Err(format!("edge {e} component {c}"));
            }
        }
    }
    Ok(format!("face averages on {} edges", mesh.num_edges()))
}

fn check_enrichment() -> Result<String, String> {
    let mesh = Arc::new(generate_case_mesh(BenchmarkCase::PipeBend, 10).unwrap());
    let lin = |p: [f64; 2]| [1.5 * p[0] - p[1], 0.25 * p[0] + 2.0 * p[1]];
    let u = CrField::interpolate(&mesh, lin);
    let en = enrich_cr(&u);
    for (v, &p) in mesh.vertices.iter().enumerate() {
        let exact = lin(p);
        if (en.vertex_values[v][0] - exact[0]).abs() > 1e-12
            || (en.vertex_values[v][1] - exact[1]).abs() > 1e-12
        {
            return Err(format!("vertex {v} not reproduced"));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let w = CrField {
        mesh: mesh.clone(),
        values: (0..mesh.num_edges()).map(|_| [rng.gen(), rng.gen()]).collect(),
    };
    let en = enrich_cr(&w);
    if en.edge_midpoint_values != w.values {
        return Err("edge midpoint values changed".into());
    }
    Ok("identity on conforming subspace, midpoints preserved".into())
}

fn check_phase_fixed_point_and_duals() -> Result<String, String> {
    let mesh = Arc::new(generate_case_mesh(BenchmarkCase::PipeBend, 10).unwrap());
    let mut params = table_a_params();
    params.gamma = 0.0;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let phi = P1Field {
        mesh: mesh.clone(),
        values: (0..mesh.num_vertices()).map(|_| rng.gen()).collect(),
    };
    let u = CrField::zeros(&mesh);
    let duals = DualState { ell: 0.0, zeta: 0.0 };
    let next = phase_step(&phi, &u, &duals, &params).map_err(|e| e.to_string())?;
    let max_dev = next
        .values
        .iter()
        .zip(&phi.values)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);
    if max_dev > 1e-12 {
        return Err(format!("fixed-point deviation {max_dev:e}"));
    }

    if double_well(0.5) != 1.0 / 64.0 || double_well_prime(0.5) != 0.0 {
        return Err("double-well values at 0.5".into());
    }
    let d = update_duals(&DualState { ell: 0.0, zeta: 100.0 }, 0.01, &table_a_params());
    if d.ell != 1.0 || (d.zeta - 110.0).abs() > 1e-12 {
        return Err(format!("dual update gave ell {} zeta {}", d.ell, d.zeta));
    }
    Ok("fixed point to 1e-12, Uzawa arithmetic exact".into())
}

fn check_energy_decay() -> Result<String, String> {
    let mesh = Arc::new(generate_case_mesh(BenchmarkCase::PipeBend, 10).unwrap());
    let params = table_a_params();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut phi = P1Field {
        mesh: mesh.clone(),
        values: (0..mesh.num_vertices()).map(|_| rng.gen()).collect(),
    };
    let stepper =
        PhaseStepper::new(&CrField::zeros(&mesh), &params).map_err(|e| e.to_string())?;
    let duals = DualState { ell: 0.0, zeta: 0.0 };
    let mut energy = ginzburg_landau(&phi, params.epsilon);
    for step in 0..30 {
        phi = project_box(&stepper.step(&phi, &duals));
        let next = ginzburg_landau(&phi, params.epsilon);
        if next > energy + 1e-12 * energy.max(1.0) {
            return Err(format!("energy rose at step {step}: {energy} -> {next}"));
        }
        energy = next;
    }
    Ok("30 pure Allen-Cahn steps non-increasing".into())
}

fn check_state_solve() -> Result<String, String> {
    let mesh = Arc::new(generate_case_mesh(BenchmarkCase::PipeBend, 10).unwrap());
    let phi = P1Field::constant(&mesh, 0.3);
    let sol = solve_state(&mesh, &phi, &PhysParams::default()).map_err(|e| e.to_string())?;
    if sol.linear_residual > RESIDUAL_CONTRACT {
        return Err(format!("residual {:e}", sol.linear_residual));
    }
    let scale = sol.u.norm(NormKind::BrokenH1) / mesh.h_min();
    if sol.max_cell_divergence > 1e-9 * scale {
        return Err(format!(
            "divergence {:e} vs allowance {:e}",
            sol.max_cell_divergence,
            1e-9 * scale
        ));
    }
    Ok(format!(
        "residual {:.1e}, max cell divergence {:.1e}",
        sol.linear_residual, sol.max_cell_divergence
    ))
}

/// Runs the whole battery; each entry prints as one pass/fail line.
pub fn run_checks() -> Vec<CheckResult> {
    vec![
        check("dof-table", check_dof_table()),
        check("local-matrices", check_local_matrices()),
        check("interpolation", check_interpolation()),
        check("enrichment", check_enrichment()),
        check("phase-scheme", check_phase_fixed_point_and_duals()),
        check("energy-decay", check_energy_decay()),
        check("state-solve", check_state_solve()),
    ]
}

#[cfg(test)]
mod tests {
    #[test]
    fn all_checks_pass() {
        for r in super::run_checks() {
            assert!(r.passed, "{}: {}", r.name, r.detail);
        }
    }
}
