//! Parameter-grid evaluation.

use rayon::prelude::*;

use super::config::{default_site, Axis, MeasureId, MeasureSpec, SweepConfig};
use crate::error::{Error, Result};
use crate::lindblad::SteadyState;
use crate::measures::{
    c1_measure, classical_mutual_information, l1_coherence, mutual_information, s_coh, s_phase_spin1,
};
use crate::models::ModelSpec;
use crate::ops::{boson_ops, embed, expectation, DensityMatrix};
use crate::sync::{certify, omega_d, omega_r};

/// Largest tolerated `|measure(N) − measure(N+4)|`.
pub const CONVERGENCE_TOL: f64 = 1e-6;
/// Fock levels added for the convergence check.
pub const CUTOFF_STEP: usize = 4;

/// One evaluated grid point.
#[derive(Clone, Debug, PartialEq)]
pub struct Cell {
    pub axis1: f64,
    pub axis2: f64,
    /// One value per requested measure; NaN when the cell failed.
    pub values: Vec<f64>,
    /// Steady-state residual `‖L ρ‖`; NaN when the solve failed.
    pub residual: f64,
    /// Largest measure change under `N → N+4`; `None` without oscillators
    /// or with the check disabled.
    pub truncation_delta: Option<f64>,
    pub error: Option<String>,
}

impl Cell {
    pub fn failed(&self) -> bool {
        self.error.is_some()
    }
}

/// Fully populated result grid, row-major in (axis1, axis2).
#[derive(Clone, Debug, PartialEq)]
pub struct SweepGrid {
    pub axis1: Axis,
    pub axis2: Axis,
    pub columns: Vec<String>,
    pub cells: Vec<Cell>,
}

impl SweepGrid {
    pub fn cell(&self, i: usize, j: usize) -> &Cell {
        &self.cells[i * self.axis2.count + j]
    }

    /// Values of column `k` as `[axis1 index][axis2 index]`.
    pub fn column_grid(&self, k: usize) -> Vec<Vec<f64>> {
        (0..self.axis1.count)
            .map(|i| (0..self.axis2.count).map(|j| self.cell(i, j).values[k]).collect())
            .collect()
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Cell> {
        self.cells.iter().filter(|c| c.failed())
    }

    pub fn max_truncation_delta(&self) -> Option<f64> {
        self.cells.iter().filter_map(|c| c.truncation_delta).reduce(f64::max)
    }

    /// True unless some cell moved by more than [`CONVERGENCE_TOL`] under
    /// the cutoff increase.
    pub fn passes_convergence_gate(&self) -> bool {
        self.cells.iter().all(|c| c.truncation_delta.is_none_or(|d| d <= CONVERGENCE_TOL))
    }
}

/// Evaluates one measure on a steady state of `model`.
pub fn evaluate_measure(rho: &DensityMatrix, model: &ModelSpec, spec: &MeasureSpec, seed: u64) -> Result<f64> {
    let site = || default_site(spec, model).ok_or_else(|| Error::param("site", "no applicable subsystem"));
    match spec.id {
        MeasureId::OmegaR => Ok(omega_r(rho, &spec.class_or_default())?.value),
        MeasureId::OmegaD => Ok(omega_d(rho, &spec.class_or_default())?.value),
        MeasureId::OmegaRCertificate => {
            let mut result = omega_r(rho, &spec.class_or_default())?;
            certify(rho, &mut result, spec.samples_or_default(), seed)?;
            Ok(result.certificate.expect("certify sets the certificate"))
        }
        MeasureId::SCoh => Ok(s_coh(rho)),
        MeasureId::L1Coherence => Ok(l1_coherence(rho)),
        MeasureId::MutualInformation => mutual_information(rho),
        MeasureId::ClassicalMutualInformation => classical_mutual_information(rho),
        MeasureId::C1 => c1_measure(rho, site()?),
        MeasureId::SPhase => s_phase_spin1(rho, site()?, spec.n_theta_or_default(), spec.n_phi_or_default()),
        MeasureId::MeanOccupation => mean_occupation(rho, site()?),
    }
}

/// `⟨a†a⟩` on oscillator `site`.
pub fn mean_occupation(rho: &DensityMatrix, site: usize) -> Result<f64> {
    let dims = rho.dims();
    let n = dims
        .get(site)
        .ok_or_else(|| Error::DimensionMismatch(format!("no site {site} in dims {dims:?}")))?;
    let number = embed(&boson_ops(*n)?.number, site, dims)?;
    Ok(expectation(rho, &number)?.re)
}

/// Steady state and every requested measure for one model.
pub fn evaluate_point(model: &ModelSpec, measures: &[MeasureSpec], seed: u64) -> Result<(SteadyState, Vec<f64>)> {
    let ss = model.steady_state()?;
    let values = measures
        .iter()
        .map(|m| evaluate_measure(&ss.rho, model, m, seed))
        .collect::<Result<Vec<_>>>()?;
    Ok((ss, values))
}

fn evaluate_cell(model: &ModelSpec, measures: &[MeasureSpec], seed: u64, convergence_check: bool) -> Result<Cell> {
    let (ss, values) = evaluate_point(model, measures, seed)?;
    let truncation_delta = if convergence_check && !model.boson_sites().is_empty() {
        let (_, larger) = evaluate_point(&model.with_cutoff_increment(CUTOFF_STEP), measures, seed)
            .map_err(|e| Error::Numerical(format!("convergence check at N+{CUTOFF_STEP}: {e}")))?;
        Some(values.iter().zip(&larger).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
    } else {
        None
    };
    Ok(Cell {
        axis1: f64::NAN,
        axis2: f64::NAN,
        values,
        residual: ss.residual,
        truncation_delta,
        error: None,
    })
}

fn grid_model(template: &ModelSpec, a1: &Axis, x: f64, a2: &Axis, y: f64) -> Result<ModelSpec> {
    let model = template.with_param(&a1.param, x)?.with_param(&a2.param, y)?;
    if let Some(e) = model.validate().into_iter().next() {
        return Err(e);
    }
    Ok(model)
}

/// Evaluates every grid cell. Cells run on a pool of `runtime.workers`
/// threads and land in pre-indexed slots; a cell's result depends only on
/// its coordinates and `seed + index`, so output is independent of the
/// worker count. Per-cell failures are recorded, never propagated.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepGrid> {
    let (a1, a2) = config
        .axes
        .clone()
        .ok_or_else(|| Error::param("sweep", "config has no sweep section"))?;
    if config.measures.is_empty() {
        return Err(Error::param("measures", "a sweep needs at least one measure"));
    }
    let (xs, ys) = (a1.values(), a2.values());
    let points: Vec<(usize, f64, f64)> = xs
        .iter()
        .flat_map(|&x| ys.iter().map(move |&y| (x, y)))
        .enumerate()
        .map(|(k, (x, y))| (k, x, y))
        .collect();
    let run_one = |&(k, x, y): &(usize, f64, f64)| -> Cell {
        let seed = config.runtime.seed.wrapping_add(k as u64);
        let outcome = grid_model(&config.model, &a1, x, &a2, y)
            .and_then(|model| evaluate_cell(&model, &config.measures, seed, config.runtime.convergence_check));
        let mut cell = outcome.unwrap_or_else(|e| Cell {
            axis1: x,
            axis2: y,
            values: vec![f64::NAN; config.measures.len()],
            residual: f64::NAN,
            truncation_delta: None,
            error: Some(e.to_string()),
        });
        cell.axis1 = x;
        cell.axis2 = y;
        cell
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.runtime.workers.max(1))
        .build()
        .map_err(|e| Error::Numerical(format!("cannot start worker pool: {e}")))?;
    let cells: Vec<Cell> = pool.install(|| points.par_iter().map(run_one).collect());
    Ok(SweepGrid {
        axis1: a1,
        axis2: a2,
        columns: config.measures.iter().map(MeasureSpec::column).collect(),
        cells,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sweep::config::Runtime;
    use crate::sync::LimitCycleClass;

    fn small_config(workers: usize) -> SweepConfig {
        let mut cfg = SweepConfig::for_model(ModelSpec::default_for("driven_spin1").unwrap());
        cfg.axes = Some((
            Axis {
                param: "detuning".into(),
                min: -1.0,
                max: 1.0,
                count: 3,
            },
            Axis {
                param: "drive".into(),
                min: 0.0,
                max: 0.5,
                count: 2,
            },
        ));
        cfg.measures = vec![
            MeasureSpec::new(MeasureId::OmegaR),
            MeasureSpec::new(MeasureId::OmegaD),
            MeasureSpec::new(MeasureId::OmegaRCertificate).with_class(LimitCycleClass::DiagonalCorrelated),
        ];
        cfg.runtime = Runtime {
            workers,
            convergence_check: true,
            seed: 3,
        };
        cfg
    }

    #[test]
    fn grid_is_row_major_and_complete() {
        let grid = run_sweep(&small_config(1)).unwrap();
        assert_eq!(grid.cells.len(), 6);
        assert_eq!(grid.cell(0, 1).axis1, -1.0);
        assert_eq!(grid.cell(0, 1).axis2, 0.5);
        assert_eq!(grid.cell(2, 0).axis1, 1.0);
        assert!(grid.failures().next().is_none());
        // spin-only model: no truncation check
        assert!(grid.cells.iter().all(|c| c.truncation_delta.is_none()));
        assert!(grid.cell(1, 0).values[0].abs() < 1e-12);
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let one = run_sweep(&small_config(1)).unwrap();
        let three = run_sweep(&small_config(3)).unwrap();
        assert_eq!(format!("{one:?}"), format!("{three:?}"));
    }

    #[test]
    fn single_cell_matches_direct_evaluation() {
        let mut cfg = small_config(2);
        cfg.axes = Some((
            Axis {
                param: "detuning".into(),
                min: 0.3,
                max: 0.3,
                count: 1,
            },
            Axis {
                param: "drive".into(),
                min: 0.2,
                max: 0.2,
                count: 1,
            },
        ));
        let grid = run_sweep(&cfg).unwrap();
        let model = cfg.model.with_param("detuning", 0.3).unwrap().with_param("drive", 0.2).unwrap();
        let (ss, values) = evaluate_point(&model, &cfg.measures, cfg.runtime.seed).unwrap();
        let cell = grid.cell(0, 0);
        assert_eq!(cell.values.iter().map(|v| v.to_bits()).collect::<Vec<_>>(), values.iter().map(|v| v.to_bits()).collect::<Vec<_>>());
        assert_eq!(cell.residual.to_bits(), ss.residual.to_bits());
    }

    #[test]
    fn failing_cells_are_recorded() {
        let mut cfg = small_config(1);
        cfg.axes = Some((
            Axis {
                param: "gamma_d".into(),
                min: -1.0,
                max: 1.0,
                count: 2,
            },
            Axis {
                param: "drive".into(),
                min: 0.0,
                max: 0.1,
                count: 2,
            },
        ));
        let grid = run_sweep(&cfg).unwrap();
        assert_eq!(grid.failures().count(), 2);
        assert!(grid.cell(0, 0).values.iter().all(|v| v.is_nan()));
        assert!(grid.cell(0, 0).error.as_deref().unwrap().contains("gamma_d"));
        assert!(!grid.cell(1, 1).failed());
    }

    #[test]
    fn oscillator_cells_report_truncation() {
        let mut cfg = SweepConfig::for_model(ModelSpec::default_for("driven_vdp").unwrap().with_param("cutoff", 6.0).unwrap());
        cfg.axes = Some((
            Axis {
                param: "detuning".into(),
                min: 0.0,
                max: 0.1,
                count: 2,
            },
            Axis {
                param: "drive".into(),
                min: 0.0,
                max: 0.1,
                count: 2,
            },
        ));
        cfg.measures = vec![MeasureSpec::new(MeasureId::MeanOccupation)];
        let grid = run_sweep(&cfg).unwrap();
        assert!(grid.cells.iter().all(|c| c.truncation_delta.is_some()));
        // six levels are too few for Γ_d/Γ_g = 0.5
        assert!(!grid.passes_convergence_gate());
    }
}
