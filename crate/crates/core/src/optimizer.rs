//! The nested optimization loop: K+1 mesh levels, N outer iterations per
//! level (one state solve plus a dual update each), M inner phase updates
//! with box projection per outer iteration.
//!
//! The phase field is the only variable that survives refinement (it is
//! prolonged exactly); velocity and pressure are re-solved on the new mesh
//! and the duals carry over unchanged.

use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::mesh::{generate_case_mesh, BenchmarkCase, Mesh};
use crate::phasefield::{
    augmented_lagrangian, project_box, update_duals, DualState, LagrangianParts, PhaseParams,
    PhaseStepper,
};
use crate::spaces::P1Field;
use crate::stokes::{solve_state, StokesSolution};
use crate::Error;

/// Initial phase field of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialPhi {
    /// Constant at the volume fraction `beta` (feasible by construction).
    ConstantBeta,
    /// Independent uniform draws in [0, 1] per vertex from the run seed.
    UniformRandom,
    /// Indicator of a centered disk whose area is `beta |Omega|`.
    Disk,
}

impl InitialPhi {
    pub fn name(&self) -> &'static str {
        match self {
            InitialPhi::ConstantBeta => "constant",
            InitialPhi::UniformRandom => "random",
            InitialPhi::Disk => "disk",
        }
    }

    pub fn parse(s: &str) -> Option<InitialPhi> {
        [
            InitialPhi::ConstantBeta,
            InitialPhi::UniformRandom,
            InitialPhi::Disk,
        ]
        .into_iter()
        .find(|i| i.name() == s)
    }
}

/// Full description of one optimization run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub case: BenchmarkCase,
    /// Structured-mesh subdivisions per unit length at level 0.
    pub resolution: u32,
    /// Number of refinements K; the run covers levels 0..=K.
    pub levels: u32,
    /// Outer iterations N per level.
    pub outer: u32,
    /// Inner phase updates M per outer iteration.
    pub inner: u32,
    pub phase: PhaseParams,
    pub init: InitialPhi,
    pub seed: u64,
    pub out_dir: PathBuf,
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), String> {
        if self.outer < 1 {
            return Err("outer iteration count must be >= 1".into());
        }
        if self.inner < 1 {
            return Err("inner iteration count must be >= 1".into());
        }
        self.phase.validate()
    }

    pub fn initial_phi(&self, mesh: &Arc<Mesh>) -> P1Field {
        match self.init {
            InitialPhi::ConstantBeta => P1Field::constant(mesh, self.phase.beta),
            InitialPhi::UniformRandom => {
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
                P1Field {
                    mesh: mesh.clone(),
                    values: (0..mesh.num_vertices()).map(|_| rng.gen()).collect(),
                }
            }
            InitialPhi::Disk => {
                let [[x0, y0], [x1, y1]] = self.case.domain();
                let center = [0.5 * (x0 + x1), 0.5 * (y0 + y1)];
                let area = (x1 - x0) * (y1 - y0);
                let radius = (self.phase.beta * area / std::f64::consts::PI).sqrt();
                P1Field::from_fn(mesh, |p| {
                    let d = ((p[0] - center[0]).powi(2) + (p[1] - center[1]).powi(2)).sqrt();
                    if d <= radius {
                        1.0
                    } else {
                        0.0
                    }
                })
            }
        }
    }
}

/// One outer-iteration snapshot; the energy breakdown is evaluated with the
/// state of that iteration, the post-inner-loop phase field and the duals in
/// force during the iteration (before their update).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HistoryRecord {
    pub level: u32,
    pub outer: u32,
    pub total: f64,
    pub brinkman: f64,
    pub dissipated: f64,
    pub ginzburg_landau: f64,
    pub volume_gap: f64,
    pub ell: f64,
    pub zeta: f64,
    pub seconds: f64,
}

impl HistoryRecord {
    fn from_parts(level: u32, outer: u32, parts: &LagrangianParts, seconds: f64) -> Self {
        HistoryRecord {
            level,
            outer,
            total: parts.total(),
            brinkman: parts.brinkman,
            dissipated: parts.dissipated,
            ginzburg_landau: parts.ginzburg_landau,
            volume_gap: parts.volume_gap,
            ell: parts.ell,
            zeta: parts.zeta,
            seconds,
        }
    }
}

pub type ConvergenceHistory = Vec<HistoryRecord>;

/// Everything a finished run returns.
pub struct RunOutput {
    pub mesh: Arc<Mesh>,
    pub phi: P1Field,
    pub solution: StokesSolution,
    pub history: ConvergenceHistory,
    /// Files written by the run, in creation order.
    pub artifacts: Vec<PathBuf>,
}

/// N outer iterations on one mesh level. Appends one record per outer
/// iteration to `history`; on failure the records produced so far remain.
pub fn run_level(
    mesh: &Arc<Mesh>,
    mut phi: P1Field,
    mut duals: DualState,
    config: &RunConfig,
    history: &mut ConvergenceHistory,
) -> Result<(P1Field, DualState, StokesSolution), Error> {
    let phys = config.phase.phys();
    let mut last_solution = None;
    for outer in 1..=config.outer {
        let started = Instant::now();
        let solution = solve_state(mesh, &phi, &phys)?;
        let stepper = PhaseStepper::new(&solution.u, &config.phase)?;
        for _ in 0..config.inner {
            phi = project_box(&stepper.step(&phi, &duals));
        }
        let parts = augmented_lagrangian(&phi, &solution.u, &duals, &config.phase);
        duals = update_duals(&duals, parts.volume_gap, &config.phase);
        history.push(HistoryRecord::from_parts(
            mesh.level,
            outer,
            &parts,
            started.elapsed().as_secs_f64(),
        ));
        last_solution = Some(solution);
    }
    Ok((phi, duals, last_solution.expect("outer >= 1")))
}

/// The full multi-level run, including exports at each level boundary and a
/// history log at the end.
pub fn run(config: &RunConfig) -> Result<RunOutput, Error> {
    config.validate().map_err(crate::cli_io::ConfigError::Invalid)?;
    let mut mesh = Arc::new(generate_case_mesh(config.case, config.resolution)?);
    let mut phi = config.initial_phi(&mesh);
    let mut duals = DualState::initial(&config.phase);
    let mut history = Vec::with_capacity(((config.levels + 1) * config.outer) as usize);
    let mut artifacts = Vec::new();

    std::fs::create_dir_all(&config.out_dir).map_err(|source| Error::Io {
        path: config.out_dir.clone(),
        source,
    })?;

    let mut final_state = None;
    for k in 0..=config.levels {
        let (next_phi, next_duals, solution) =
            run_level(&mesh, phi, duals, config, &mut history)?;
        phi = next_phi;
        duals = next_duals;

        let vtu = config
            .out_dir
            .join(format!("{}_level{}.vtu", config.case.name(), k));
        crate::cli_io::export_vtu(&mesh, &phi, &solution, &vtu)?;
        artifacts.push(vtu);
        final_state = Some(solution);

        if k < config.levels {
            let fine = Arc::new(mesh.refine_red());
            phi = phi.prolong(&fine)?;
            mesh = fine;
        }
    }

    let csv = config.out_dir.join("history.csv");
    crate::cli_io::write_history_csv(&history, &csv)?;
    artifacts.push(csv);

    Ok(RunOutput {
        mesh,
        phi,
        solution: final_state.expect("at least one level"),
        history,
        artifacts,
    })
}

/// Energy breakdown of a state/phase pair; same evaluation path as
/// [`augmented_lagrangian`], re-exported as the reporting entry point (the
/// `dissipated` component alone is the benchmark comparison objective).
pub fn objective_report(
    phi: &P1Field,
    solution: &StokesSolution,
    duals: &DualState,
    params: &PhaseParams,
) -> LagrangianParts {
    augmented_lagrangian(phi, &solution.u, duals, params)
}
