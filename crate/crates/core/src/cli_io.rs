//! Benchmark presets, config-file parsing, field export (legacy VTK and
//! CSV convergence logs) and the command-line entry point.
//!
//! Config files are flat `key = value` sections:
//!
//! ```text
//! [case]
//! case = pipe_bend
//! resolution = 30
//! init = constant
//! seed = 0
//!
//! [iterations]
//! levels = 3
//! outer = 50
//! inner = 10
//!
//! [phase]
//! epsilon = 0.01
//! gamma = 0.01
//! dt = 0.0005
//! s_tilde = 0.25
//! beta = 0.3
//! kappa = 1.1
//! zeta0 = 100
//! ell0 = 0
//!
//! [physics]
//! mu = 1
//! alpha0 = 10000
//!
//! [output]
//! dir = out
//! ```
//!
//! Unknown keys are rejected; omitted keys fall back to the case preset.
//! All file output is plain ASCII with 17 significant digits, so values
//! round-trip exactly and identical inputs produce identical bytes (the
//! `seconds` column of the history log records measured wall time and is
//! the one field that varies between runs).

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand};

use crate::mesh::{BenchmarkCase, Mesh};
use crate::optimizer::{ConvergenceHistory, InitialPhi, RunConfig};
use crate::phasefield::PhaseParams;
use crate::spaces::{enrich_cr, P1Field};
use crate::stokes::StokesSolution;
use crate::Error;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("unknown section [{0}]")]
    UnknownSection(String),
    #[error("unknown key '{key}' in section [{section}]")]
    UnknownKey { section: String, key: String },
    #[error("key '{key}': cannot parse '{value}' as {expected}")]
    TypeMismatch {
        key: String,
        value: String,
        expected: &'static str,
    },
    #[error("missing required key 'case' in section [case]")]
    MissingCase,
    #[error("unknown case '{0}' (expected one of pipe_bend, left_inflow, three_inflows, rugby, bypass)")]
    UnknownCase(String),
    #[error("invalid configuration: {0}")]
    Invalid(String),
    #[error("malformed line {line}: '{text}'")]
    Malformed { line: usize, text: String },
    #[error("history is empty")]
    EmptyHistory,
}

/// Table of per-case defaults: `(N, M)`, time step, interface width,
/// regularization weight, initial penalty, volume fraction and
/// stabilization, with the shared constants `K = 3`, `alpha0 = 10^4`,
/// `kappa = 1.1`, `ell0 = 0` and `mu = 1`.
pub fn preset(case: BenchmarkCase) -> RunConfig {
    let (dt, epsilon, gamma, zeta0, beta, s_tilde) = match case {
        BenchmarkCase::PipeBend => (5e-4, 1e-2, 1e-2, 100.0, 0.3, 0.25),
        BenchmarkCase::LeftInflow => (1e-4, 1e-2, 1e-2, 100.0, 0.5, 0.25),
        BenchmarkCase::ThreeInflows => (5e-5, 1e-2, 1e-2, 100.0, 0.36, 0.25),
        BenchmarkCase::Rugby => (1e-3, 1e-3, 1e-3, 100.0, 0.925, 0.25),
        BenchmarkCase::Bypass => (5e-4, 5e-3, 1e-1, 50.0, 0.1667, 1.0),
    };
    RunConfig {
        case,
        resolution: case.default_resolution(),
        levels: 3,
        outer: 50,
        inner: 10,
        phase: PhaseParams {
            epsilon,
            gamma,
            dt,
            s_tilde,
            beta,
            kappa: 1.1,
            zeta0,
            ell0: 0.0,
            alpha0: 1e4,
            mu: 1.0,
        },
        init: InitialPhi::ConstantBeta,
        seed: 0,
        out_dir: PathBuf::from("out"),
    }
}

/// Parses a config text into a validated [`RunConfig`], filling omitted keys
/// from the preset of the named case.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let mut entries: Vec<(String, String, String)> = Vec::new();
    let mut section = String::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            section = name.trim().to_string();
            if !["case", "iterations", "phase", "physics", "output"].contains(&section.as_str()) {
                return Err(ConfigError::UnknownSection(section));
            }
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(ConfigError::Malformed {
                line: lineno + 1,
                text: line.to_string(),
            });
        };
        entries.push((
            section.clone(),
            key.trim().to_string(),
            value.trim().to_string(),
        ));
    }

    let case_name = entries
        .iter()
        .find(|(s, k, _)| s == "case" && k == "case")
        .map(|(_, _, v)| v.clone())
        .ok_or(ConfigError::MissingCase)?;
    let case = BenchmarkCase::parse(&case_name).ok_or(ConfigError::UnknownCase(case_name))?;
    let mut config = preset(case);

    fn parse_num<T: std::str::FromStr>(
        key: &str,
        value: &str,
        expected: &'static str,
    ) -> Result<T, ConfigError> {
        value.parse().map_err(|_| ConfigError::TypeMismatch {
            key: key.to_string(),
            value: value.to_string(),
            expected,
        })
    }

    for (section, key, value) in &entries {
        match (section.as_str(), key.as_str()) {
            ("case", "case") => {}
            ("case", "resolution") => config.resolution = parse_num(key, value, "integer")?,
            ("case", "init") => {
                config.init = InitialPhi::parse(value).ok_or_else(|| ConfigError::TypeMismatch {
                    key: key.clone(),
                    value: value.clone(),
                    expected: "one of constant, random, disk",
                })?
            }
            ("case", "seed") => config.seed = parse_num(key, value, "integer")?,
            ("iterations", "levels") => config.levels = parse_num(key, value, "integer")?,
            ("iterations", "outer") => config.outer = parse_num(key, value, "integer")?,
            ("iterations", "inner") => config.inner = parse_num(key, value, "integer")?,
            ("phase", "epsilon") => config.phase.epsilon = parse_num(key, value, "number")?,
            ("phase", "gamma") => config.phase.gamma = parse_num(key, value, "number")?,
            ("phase", "dt") => config.phase.dt = parse_num(key, value, "number")?,
            ("phase", "s_tilde") => config.phase.s_tilde = parse_num(key, value, "number")?,
            ("phase", "beta") => config.phase.beta = parse_num(key, value, "number")?,
            ("phase", "kappa") => config.phase.kappa = parse_num(key, value, "number")?,
            ("phase", "zeta0") => config.phase.zeta0 = parse_num(key, value, "number")?,
            ("phase", "ell0") => config.phase.ell0 = parse_num(key, value, "number")?,
            ("physics", "mu") => config.phase.mu = parse_num(key, value, "number")?,
            ("physics", "alpha0") => config.phase.alpha0 = parse_num(key, value, "number")?,
            ("output", "dir") => config.out_dir = PathBuf::from(value),
            _ => {
                return Err(ConfigError::UnknownKey {
                    section: section.clone(),
                    key: key.clone(),
                })
            }
        }
    }

    config.validate().map_err(ConfigError::Invalid)?;
    Ok(config)
}

/// Renders a config in the format accepted by [`parse_config`].
pub fn render_config(config: &RunConfig) -> String {
    let p = &config.phase;
    format!(
        "[case]\ncase = {}\nresolution = {}\ninit = {}\nseed = {}\n\n\
         [iterations]\nlevels = {}\nouter = {}\ninner = {}\n\n\
         [phase]\nepsilon = {}\ngamma = {}\ndt = {}\ns_tilde = {}\nbeta = {}\nkappa = {}\n\
         zeta0 = {}\nell0 = {}\n\n\
         [physics]\nmu = {}\nalpha0 = {}\n\n\
         [output]\ndir = {}\n",
        config.case.name(),
        config.resolution,
        config.init.name(),
        config.seed,
        config.levels,
        config.outer,
        config.inner,
        p.epsilon,
        p.gamma,
        p.dt,
        p.s_tilde,
        p.beta,
        p.kappa,
        p.zeta0,
        p.ell0,
        p.mu,
        p.alpha0,
        config.out_dir.display(),
    )
}

/// 17 significant digits: enough for exact f64 round-trips.
fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_file(path: &Path, contents: &str) -> Result<(), Error> {
    std::fs::write(path, contents).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Writes an ASCII legacy VTK unstructured-grid file with the phase field
/// (point scalars), pressure (cell scalars) and the velocity both as cell
/// averages and as the enriched nodal field.
pub fn export_vtu(
    mesh: &Arc<Mesh>,
    phi: &P1Field,
    solution: &StokesSolution,
    path: &Path,
) -> Result<(), Error> {
    let mut s = String::new();
    let nv = mesh.num_vertices();
    let nt = mesh.num_cells();
    s.push_str("# vtk DataFile Version 3.0\n");
    s.push_str("crflow fields\nASCII\nDATASET UNSTRUCTURED_GRID\n");
    let _ = writeln!(s, "POINTS {nv} double");
    for p in &mesh.vertices {
        let _ = writeln!(s, "{} {} 0", fmt17(p[0]), fmt17(p[1]));
    }
    let _ = writeln!(s, "CELLS {nt} {}", 4 * nt);
    for c in &mesh.cells {
        let _ = writeln!(s, "3 {} {} {}", c[0], c[1], c[2]);
    }
    let _ = writeln!(s, "CELL_TYPES {nt}");
    for _ in 0..nt {
        s.push_str("5\n");
    }

    let enriched = enrich_cr(&solution.u);
    let _ = writeln!(s, "POINT_DATA {nv}");
    s.push_str("SCALARS phi double 1\nLOOKUP_TABLE default\n");
    for v in &phi.values {
        let _ = writeln!(s, "{}", fmt17(*v));
    }
    s.push_str("VECTORS velocity_enriched double\n");
    for v in &enriched.vertex_values {
        let _ = writeln!(s, "{} {} 0", fmt17(v[0]), fmt17(v[1]));
    }
    let _ = writeln!(s, "CELL_DATA {nt}");
    s.push_str("SCALARS pressure double 1\nLOOKUP_TABLE default\n");
    for p in &solution.p.values {
        let _ = writeln!(s, "{}", fmt17(*p));
    }
    s.push_str("VECTORS velocity_cellavg double\n");
    for t in 0..nt {
        let v = solution.u.cell_average(t);
        let _ = writeln!(s, "{} {} 0", fmt17(v[0]), fmt17(v[1]));
    }
    write_file(path, &s)
}

/// One row per outer iteration:
/// `level,outer,total,brinkman,dissipated,ginzburg_landau,volume_gap,ell,zeta,seconds`.
pub fn write_history_csv(history: &ConvergenceHistory, path: &Path) -> Result<(), Error> {
    if history.is_empty() {
        return Err(ConfigError::EmptyHistory.into());
    }
    let mut s = String::from(
        "level,outer,total,brinkman,dissipated,ginzburg_landau,volume_gap,ell,zeta,seconds\n",
    );
    for r in history {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{},{}",
            r.level,
            r.outer,
            fmt17(r.total),
            fmt17(r.brinkman),
            fmt17(r.dissipated),
            fmt17(r.ginzburg_landau),
            fmt17(r.volume_gap),
            fmt17(r.ell),
            fmt17(r.zeta),
            fmt17(r.seconds),
        );
    }
    write_file(path, &s)
}

/// Plain-text mesh dump: one `x y` line per vertex, then one `i j k` line
/// per cell (0-based).
pub fn write_mesh_text(mesh: &Mesh, path: &Path) -> Result<(), Error> {
    let mut s = String::new();
    for p in &mesh.vertices {
        let _ = writeln!(s, "{} {}", fmt17(p[0]), fmt17(p[1]));
    }
    for c in &mesh.cells {
        let _ = writeln!(s, "{} {} {}", c[0], c[1], c[2]);
    }
    write_file(path, &s)
}

#[derive(Parser)]
#[command(
    name = "crflow",
    about = "Phase-field topology optimization of Stokes-Brinkman flow on CR-P0 elements"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the optimization for a benchmark case.
    Run {
        /// Benchmark case: pipe_bend, left_inflow, three_inflows, rugby, bypass.
        #[arg(long)]
        case: String,
        /// Optional config file; its case must match --case.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output directory (default: preset's `out`).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Seed for randomized initial phase fields.
        #[arg(long)]
        seed: Option<u64>,
        /// Number of refinements K (the run covers levels 0..=K).
        #[arg(long)]
        levels: Option<u32>,
    },
    /// Run the built-in invariant and oracle checks.
    Verify,
    /// Print the entity/DOF table of a case across refinement levels.
    MeshInfo {
        #[arg(long)]
        case: String,
        /// Number of refinements to tabulate.
        #[arg(long, default_value_t = 3)]
        levels: u32,
    },
}

/// Command-line entry point; returns the process exit code
/// (0 success, 1 validation error, 2 runtime failure).
pub fn cli_main<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match cli.command {
        Command::Run {
            case,
            config,
            out,
            seed,
            levels,
        } => {
            let Some(case) = BenchmarkCase::parse(&case) else {
                eprintln!("error: {}", ConfigError::UnknownCase(case));
                return 1;
            };
            let mut run_config = match config {
                Some(path) => {
                    let text = match std::fs::read_to_string(&path) {
                        Ok(t) => t,
                        Err(e) => {
                            eprintln!("error: cannot read {}: {e}", path.display());
                            return 1;
                        }
                    };
                    match parse_config(&text) {
                        Ok(c) if c.case == case => c,
                        Ok(c) => {
                            eprintln!(
                                "error: config case '{}' does not match --case '{}'",
                                c.case.name(),
                                case.name()
                            );
                            return 1;
                        }
                        Err(e) => {
                            eprintln!("error: {e}");
                            return 1;
                        }
                    }
                }
                None => preset(case),
            };
            if let Some(out) = out {
                run_config.out_dir = out;
            }
            if let Some(seed) = seed {
                run_config.seed = seed;
            }
            if let Some(levels) = levels {
                run_config.levels = levels;
            }
            if let Err(e) = run_config.validate() {
                eprintln!("error: {e}");
                return 1;
            }
            match crate::optimizer::run(&run_config) {
                Ok(output) => {
                    let last = output.history.last().expect("nonempty history");
                    println!(
                        "{}: levels 0..={}, final objective {:.6} (dissipated {:.6}), volume gap {:.3e}",
                        run_config.case.name(),
                        run_config.levels,
                        last.total,
                        last.dissipated,
                        last.volume_gap
                    );
                    for artifact in &output.artifacts {
                        println!("wrote {}", artifact.display());
                    }
                    0
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    2
                }
            }
        }
        Command::Verify => {
            let results = crate::verify::run_checks();
            let mut failed = 0;
            for r in &results {
                println!(
                    "{} {} ({})",
                    if r.passed { "PASS" } else { "FAIL" },
                    r.name,
                    r.detail
                );
                if !r.passed {
                    failed += 1;
                }
            }
            println!("{} of {} checks passed", results.len() - failed, results.len());
            if failed == 0 {
                0
            } else {
                2
            }
        }
        Command::MeshInfo { case, levels } => {
            let Some(case) = BenchmarkCase::parse(&case) else {
                eprintln!("error: {}", ConfigError::UnknownCase(case));
                return 1;
            };
            let mesh = match crate::mesh::generate_case_mesh(case, case.default_resolution()) {
                Ok(m) => m,
                Err(e) => {
                    eprintln!("error: {e}");
                    return 2;
                }
            };
            println!(
                "case {} on a structured mesh with n = {} subdivisions per unit length",
                case.name(),
                case.default_resolution()
            );
            println!(
                "{:>5} {:>10} {:>10} {:>10} {:>10} {:>10} {:>10}",
                "level", "vertices", "elements", "cr_u", "p0_p", "th_u", "th_p"
            );
            let mut report = mesh.dof_counts();
            for level in 0..=levels {
                println!(
                    "{:>5} {:>10} {:>10} {:>10} {:>10} {:>10} {:>10}",
                    level,
                    report.vertices,
                    report.cells,
                    report.cr_velocity_dofs,
                    report.p0_pressure_dofs,
                    report.th_velocity_dofs,
                    report.th_pressure_dofs
                );
                report = report.refined();
            }
            0
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::generate_case_mesh;
    use crate::spaces::{CrField, P0Field};

    #[test]
    fn presets_match_hyperparameter_table() {
        let c = preset(BenchmarkCase::PipeBend);
        assert_eq!((c.outer, c.inner), (50, 10));
        assert_eq!(c.phase.dt, 5e-4);
        assert_eq!(c.phase.epsilon, 1e-2);
        assert_eq!(c.phase.gamma, 1e-2);
        assert_eq!(c.phase.zeta0, 100.0);
        assert_eq!(c.phase.beta, 0.3);
        assert_eq!(c.phase.s_tilde, 0.25);
        assert_eq!(c.levels, 3);
        assert_eq!(c.phase.alpha0, 1e4);
        assert_eq!(c.phase.kappa, 1.1);
        assert_eq!(c.phase.ell0, 0.0);
        assert_eq!(c.phase.mu, 1.0);

        let c = preset(BenchmarkCase::Bypass);
        assert_eq!(c.phase.zeta0, 50.0);
        assert_eq!(c.phase.beta, 0.1667);
        assert_eq!(c.phase.s_tilde, 1.0);
        assert_eq!(c.phase.epsilon, 5e-3);
        assert_eq!(c.phase.gamma, 1e-1);

        let c = preset(BenchmarkCase::Rugby);
        assert_eq!(c.phase.dt, 1e-3);
        assert_eq!(c.phase.epsilon, 1e-3);
        assert_eq!(c.phase.gamma, 1e-3);
        assert_eq!(c.phase.beta, 0.925);

        assert_eq!(preset(BenchmarkCase::LeftInflow).phase.dt, 1e-4);
        assert_eq!(preset(BenchmarkCase::ThreeInflows).phase.dt, 5e-5);
        assert_eq!(preset(BenchmarkCase::ThreeInflows).phase.beta, 0.36);
    }

    #[test]
    fn config_round_trips_for_all_presets() {
        for case in BenchmarkCase::ALL {
            let c = preset(case);
            let parsed = parse_config(&render_config(&c)).unwrap();
            assert_eq!(parsed, c, "{}", case.name());
        }
    }

    #[test]
    fn config_errors_name_the_offender() {
        let text = "[case]\ncase = pipe_bend\n[phase]\nbeta = 1.5\n";
        let err = parse_config(text).unwrap_err();
        assert!(err.to_string().contains("beta"), "{err}");

        let text = "[case]\ncase = pipe_bend\nwhatever = 3\n";
        let err = parse_config(text).unwrap_err();
        assert!(matches!(err, ConfigError::UnknownKey { .. }));
        assert!(err.to_string().contains("whatever"));

        let text = "[case]\ncase = pipe_bend\n[phase]\ndt = fast\n";
        let err = parse_config(text).unwrap_err();
        assert!(err.to_string().contains("dt"), "{err}");

        let err = parse_config("[phase]\nepsilon = 0.01\n").unwrap_err();
        assert!(matches!(err, ConfigError::MissingCase));

        let err = parse_config("[case]\ncase = squiggle\n").unwrap_err();
        assert!(matches!(err, ConfigError::UnknownCase(_)));
    }

    #[test]
    fn vtu_round_trips_through_a_reader() {
        let mesh = Arc::new(generate_case_mesh(BenchmarkCase::PipeBend, 10).unwrap());
        let phi = P1Field::from_fn(&mesh, |p| 0.25 + 0.5 * p[0]);
        let u = CrField::interpolate(&mesh, |p| [p[1], -p[0]]);
        let mut p = P0Field::zeros(&mesh);
        for (t, v) in p.values.iter_mut().enumerate() {
            *v = t as f64 * 0.125 - 3.0;
        }
        let solution = StokesSolution {
            u: u.clone(),
            p,
            linear_residual: 0.0,
            max_cell_divergence: 0.0,
        };
        let dir = std::env::temp_dir().join(format!("crflow-vtu-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("fields.vtu");
        export_vtu(&mesh, &phi, &solution, &path).unwrap();

        let text = std::fs::read_to_string(&path).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("# vtk DataFile Version 3.0"));

        // Minimal legacy-VTK reader.
        let tokens: Vec<&str> = text.split_whitespace().collect();
        let find = |needle: &str| tokens.iter().position(|t| *t == needle).unwrap();
        let npts: usize = tokens[find("POINTS") + 1].parse().unwrap();
        assert_eq!(npts, mesh.num_vertices());
        let ncells: usize = tokens[find("CELLS") + 1].parse().unwrap();
        assert_eq!(ncells, mesh.num_cells());

        let at = find("POINTS") + 3;
        for (v, pt) in mesh.vertices.iter().enumerate() {
            let x: f64 = tokens[at + 3 * v].parse().unwrap();
            let y: f64 = tokens[at + 3 * v + 1].parse().unwrap();
            assert!((x - pt[0]).abs() < 1e-12 && (y - pt[1]).abs() < 1e-12);
        }
        let at = find("phi") + 5; // SCALARS phi double 1 LOOKUP_TABLE default
        for (v, val) in phi.values.iter().enumerate() {
            let x: f64 = tokens[at + v].parse().unwrap();
            assert!((x - val).abs() < 1e-12);
        }
        let at = find("pressure") + 5;
        for (t, val) in solution.p.values.iter().enumerate() {
            let x: f64 = tokens[at + t].parse().unwrap();
            assert!((x - val).abs() < 1e-12);
        }
        let at = find("velocity_cellavg") + 2;
        for t in 0..ncells {
            let expect = u.cell_average(t);
            let x: f64 = tokens[at + 3 * t].parse().unwrap();
            let y: f64 = tokens[at + 3 * t + 1].parse().unwrap();
            assert!((x - expect[0]).abs() < 1e-12 && (y - expect[1]).abs() < 1e-12);
        }
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn constant_phase_exports_constant_scalars() {
        let mesh = Arc::new(generate_case_mesh(BenchmarkCase::PipeBend, 10).unwrap());
        let beta = 0.3;
        let phi = P1Field::constant(&mesh, beta);
        let solution = StokesSolution {
            u: CrField::zeros(&mesh),
            p: P0Field::zeros(&mesh),
            linear_residual: 0.0,
            max_cell_divergence: 0.0,
        };
        let dir = std::env::temp_dir().join(format!("crflow-vtu-c-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("constant.vtu");
        export_vtu(&mesh, &phi, &solution, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let tokens: Vec<&str> = text.split_whitespace().collect();
        let at = tokens.iter().position(|t| *t == "phi").unwrap() + 5;
        for v in 0..mesh.num_vertices() {
            let x: f64 = tokens[at + v].parse().unwrap();
            assert_eq!(x, beta);
        }
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn history_csv_shape_and_resum() {
        use crate::optimizer::HistoryRecord;
        let rows: ConvergenceHistory = (0..6)
            .map(|i| HistoryRecord {
                level: i / 3,
                outer: i % 3 + 1,
                total: 2.0 + i as f64 + 0.5 * 0.01 * 0.01 * (i as f64 + 1.0),
                brinkman: 1.0,
                dissipated: 1.0,
                ginzburg_landau: i as f64,
                volume_gap: 0.01,
                ell: 0.0,
                zeta: i as f64 + 1.0,
                seconds: 0.125,
            })
            .collect();
        let dir = std::env::temp_dir().join(format!("crflow-csv-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("history.csv");
        write_history_csv(&rows, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "level,outer,total,brinkman,dissipated,ginzburg_landau,volume_gap,ell,zeta,seconds"
        );
        let mut n = 0;
        for line in lines {
            let f: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
            assert_eq!(f.len(), 10);
            let resum = f[3] + f[4] + f[5] + f[7] * f[6] + 0.5 * f[8] * f[6] * f[6];
            assert!((f[2] - resum).abs() < 1e-9);
            n += 1;
        }
        assert_eq!(n, 6);

        assert!(matches!(
            write_history_csv(&Vec::new(), &path),
            Err(Error::Config(ConfigError::EmptyHistory))
        ));
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn mesh_text_dump_is_parseable() {
        let mesh = generate_case_mesh(BenchmarkCase::Rugby, 4).unwrap();
        let dir = std::env::temp_dir().join(format!("crflow-dump-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("mesh.txt");
        write_mesh_text(&mesh, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let (mut nv, mut nt) = (0, 0);
        for line in text.lines() {
            match line.split_whitespace().count() {
                2 => nv += 1,
                3 => nt += 1,
                n => panic!("unexpected token count {n}"),
            }
        }
        assert_eq!(nv, mesh.num_vertices());
        assert_eq!(nt, mesh.num_cells());
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn cli_rejects_unknown_case() {
        let code = cli_main(["crflow", "run", "--case", "nonsense"]);
        assert_eq!(code, 1);
        let code = cli_main(["crflow", "mesh-info", "--case", "nonsense"]);
        assert_eq!(code, 1);
    }
}
