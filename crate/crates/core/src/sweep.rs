//! Parameter sweeps driven by a [`RunConfig`], with CSV and manifest output.
//!
//! Sweeps are fail-soft: a point that errors is recorded in the manifest
//! and written as `NaN` in the CSV, and the remaining points still run.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::bath::BathSet;
use crate::config::{Engine, RunConfig, SweepKind};
use crate::dynamics::{DriveParams, LiouvilleProblem, Physicality};
use crate::error::{Error, Result};
use crate::model::SystemParams;
use crate::polariton::{decompose, PolaritonDecomposition, ResonanceGaps};
use crate::rates::{solve_network, NetworkSolution, RateNetwork, TransitionRates};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointStatus {
    pub index: usize,
    pub coordinates: Vec<f64>,
    pub ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(flatten)]
    pub checks: Checks,
}

/// Consistency diagnostics for one point.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct Checks {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub physicality: Option<Physicality>,
    /// `|outflow - pump| / pump` of the rate network.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flux_error: Option<f64>,
}

struct Evaluated {
    values: Vec<f64>,
    checks: Checks,
}

impl Evaluated {
    fn prefixed(mut self, mut head: Vec<f64>) -> Self {
        head.append(&mut self.values);
        self.values = head;
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub config: RunConfig,
    pub columns: Vec<String>,
    pub wall_clock_seconds: f64,
    pub worker_count: usize,
    pub n_points: usize,
    pub n_failed: usize,
    /// The configured system itself, independent of any scanned axis.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub system: Option<SystemSummary>,
    pub points: Vec<PointStatus>,
}

/// Collective couplings and polariton gaps of one system. Both collective
/// couplings are reported since the spectrum depends on each separately.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SystemSummary {
    pub collective_donor_ev: f64,
    pub collective_acceptor_ev: f64,
    pub energies_ev: [f64; 3],
    pub resonance_gaps: ResonanceGaps,
}

impl SystemSummary {
    pub fn new(d: &PolaritonDecomposition) -> Self {
        Self {
            collective_donor_ev: d.collective_donor,
            collective_acceptor_ev: d.collective_acceptor,
            energies_ev: d.energies,
            resonance_gaps: d.resonance_gaps(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepOutput {
    pub csv: String,
    pub manifest: RunManifest,
    /// Row-major values, one row per point, in CSV column order.
    pub rows: Vec<Vec<f64>>,
}

impl SweepOutput {
    pub fn failures(&self) -> usize {
        self.manifest.n_failed
    }

    /// Writes `<name>.csv` and `<name>.manifest.json` into `dir`.
    pub fn write(&self, dir: &Path) -> Result<(PathBuf, PathBuf)> {
        fs::create_dir_all(dir)?;
        let name = &self.manifest.config.sweep.name;
        let csv = dir.join(format!("{name}.csv"));
        let manifest = dir.join(format!("{name}.manifest.json"));
        fs::write(&csv, &self.csv)?;
        fs::write(&manifest, serde_json::to_string_pretty(&self.manifest)? + "\n")?;
        Ok((csv, manifest))
    }
}

fn engine_columns(engine: Engine) -> Vec<String> {
    let mut cols = Vec::new();
    if engine.uses_redfield() {
        cols.push("t_redfield".to_string());
    }
    if engine.uses_rate() {
        cols.push("t_rate".to_string());
    }
    cols
}

/// Transfer efficiencies from whichever engines are enabled, in the order
/// of [`engine_columns`].
fn efficiencies(
    problem: Option<&LiouvilleProblem>,
    decomposition: &PolaritonDecomposition,
    baths: &BathSet,
    drive: &DriveParams,
    kappa: f64,
    engine: Engine,
) -> Result<Evaluated> {
    let mut values = Vec::new();
    let mut checks = Checks::default();
    if engine.uses_redfield() {
        let problem = problem.ok_or_else(|| Error::Config("Redfield engine needs a Liouvillian".into()))?;
        let ss = problem.steady_state(baths, drive)?;
        checks.physicality = Some(ss.physicality());
        values.push(ss.transfer_efficiency.ok_or(Error::NoEmission)?);
    }
    if engine.uses_rate() {
        let net = RateNetwork::build(decomposition, baths, kappa)?;
        let sol = solve_network(&net)?;
        checks.flux_error = Some((sol.outflow - net.pump).abs() / net.pump);
        values.push(sol.transfer_efficiency);
    }
    Ok(Evaluated { values, checks })
}

fn format_row(values: &[f64]) -> String {
    values
        .iter()
        .map(|x| format!("{x:.8e}"))
        .collect::<Vec<_>>()
        .join(",")
}

struct Point {
    coordinates: Vec<f64>,
    label: String,
}

fn execute<F>(workers: usize, points: &[Point], eval: F) -> Result<Vec<Result<Evaluated>>>
where
    F: Fn(usize, &Point) -> Result<Evaluated> + Sync,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Config(format!("worker pool: {e}")))?;
    Ok(pool.install(|| {
        points
            .par_iter()
            .enumerate()
            .map(|(i, p)| eval(i, p))
            .collect()
    }))
}

fn assemble(
    config: &RunConfig,
    mut columns: Vec<String>,
    value_columns: usize,
    points: Vec<Point>,
    results: Vec<Result<Evaluated>>,
    started: Instant,
) -> SweepOutput {
    let system = config
        .system
        .build()
        .and_then(|(e, c)| decompose(&e, &c))
        .map(|d| SystemSummary::new(&d))
        .ok();
    let mut csv = columns.join(",") + "\n";
    let mut rows = Vec::with_capacity(points.len());
    let mut statuses = Vec::with_capacity(points.len());
    for (index, (point, result)) in points.into_iter().zip(results).enumerate() {
        let mut row = point.coordinates.clone();
        let mut checks = Checks::default();
        let error = match result {
            Ok(ev) => {
                row.extend(ev.values);
                checks = ev.checks;
                None
            }
            Err(e) => {
                let e = Error::SweepPoint {
                    index,
                    label: point.label,
                    source: Box::new(e),
                };
                log::warn!("{e}");
                row.extend(std::iter::repeat(f64::NAN).take(value_columns));
                Some(e.to_string())
            }
        };
        csv.push_str(&format_row(&row));
        csv.push('\n');
        rows.push(row);
        statuses.push(PointStatus {
            index,
            coordinates: point.coordinates,
            ok: error.is_none(),
            error,
            checks,
        });
    }
    let n_failed = statuses.iter().filter(|s| !s.ok).count();
    columns.shrink_to_fit();
    SweepOutput {
        csv,
        rows,
        manifest: RunManifest {
            tool: "xfer",
            version: env!("CARGO_PKG_VERSION"),
            config: config.clone(),
            columns,
            wall_clock_seconds: started.elapsed().as_secs_f64(),
            worker_count: config.sweep.worker_count,
            n_points: statuses.len(),
            n_failed,
            system,
            points: statuses,
        },
    }
}

fn problem_for(system: &SystemParams, engine: Engine) -> Result<Option<LiouvilleProblem>> {
    if !engine.uses_redfield() {
        return Ok(None);
    }
    let (ens, cav) = system.build()?;
    LiouvilleProblem::new(ens, cav).map(Some)
}

/// Runs the sweep described by `config`. Only errors that prevent the
/// sweep from starting are returned; per-point failures are recorded in
/// the output.
pub fn run_sweep(config: &RunConfig) -> Result<SweepOutput> {
    let started = Instant::now();
    let spec = &config.sweep;
    let engine = spec.engine;
    let system = &config.system;
    system.validate()?;
    let t_cols = engine_columns(engine);
    match &spec.kind {
        SweepKind::VibrationalMap { omega_vd, omega_va } => {
            let problem = problem_for(system, engine)?;
            let decomposition = match &problem {
                Some(p) => p.decomposition.clone(),
                None => {
                    let (ens, cav) = system.build()?;
                    decompose(&ens, &cav)?
                }
            };
            let drive = config.drive.resolve(&decomposition)?;
            let points: Vec<Point> = omega_vd
                .iter()
                .flat_map(|&vd| {
                    omega_va.iter().map(move |&va| Point {
                        coordinates: vec![vd, va],
                        label: format!("omega_vd={vd}, omega_va={va}"),
                    })
                })
                .collect();
            let results = execute(spec.worker_count, &points, |_, p| {
                let baths = BathSet::new(
                    config.baths.gamma_phi_ev,
                    config.baths.xi_ev,
                    p.coordinates[0],
                    p.coordinates[1],
                )?;
                efficiencies(problem.as_ref(), &decomposition, &baths, &drive, system.kappa_ev, engine)
            })?;
            let mut columns = vec!["omega_vd_ev".to_string(), "omega_va_ev".to_string()];
            columns.extend(t_cols.iter().cloned());
            Ok(assemble(
                config,
                columns,
                t_cols.len(),
                points,
                results,
                started,
            ))
        }
        SweepKind::RabiScan { grid } | SweepKind::CavityScan { grid } => {
            let rabi = matches!(spec.kind, SweepKind::RabiScan { .. });
            let axis = if rabi { "rabi_ev" } else { "omega_c_ev" };
            let points: Vec<Point> = grid
                .iter()
                .map(|&v| Point {
                    coordinates: vec![v],
                    label: format!("{axis}={v}"),
                })
                .collect();
            let results = execute(spec.worker_count, &points, |_, p| {
                let mut params = system.clone();
                if rabi {
                    params.rabi_ev = p.coordinates[0];
                } else {
                    params.omega_c_ev = p.coordinates[0];
                }
                params.validate()?;
                let problem = problem_for(&params, engine)?;
                let dec = match &problem {
                    Some(pr) => pr.decomposition.clone(),
                    None => {
                        let (ens, cav) = params.build()?;
                        decompose(&ens, &cav)?
                    }
                };
                let baths = config.baths.resolve(&dec)?;
                let drive = config.drive.resolve(&dec)?;
                let mut head: Vec<f64> = dec.energies.to_vec();
                head.extend(dec.squares().iter().flatten());
                Ok(efficiencies(problem.as_ref(), &dec, &baths, &drive, params.kappa_ev, engine)?.prefixed(head))
            })?;
            let mut columns: Vec<String> = crate::polariton::DECOMPOSITION_CSV_HEADER
                .split(',')
                .map(String::from)
                .collect();
            columns[0] = axis.to_string();
            columns.extend(t_cols.iter().cloned());
            let width = columns.len() - 1;
            Ok(assemble(config, columns, width, points, results, started))
        }
        SweepKind::SizeScan { sizes } => {
            let points: Vec<Point> = sizes
                .iter()
                .map(|&n| Point {
                    coordinates: vec![n as f64],
                    label: format!("N={n}"),
                })
                .collect();
            let results = execute(spec.worker_count, &points, |_, p| {
                let n = p.coordinates[0] as usize;
                let params = SystemParams {
                    n_donors: n,
                    n_acceptors: n,
                    ..system.clone()
                };
                if engine.uses_redfield() && 2 * n + 2 > spec.redfield_dim_cap {
                    return Err(Error::Config(format!(
                        "Redfield engine limited to dimension {}",
                        spec.redfield_dim_cap
                    )));
                }
                let problem = problem_for(&params, engine)?;
                let dec = match &problem {
                    Some(pr) => pr.decomposition.clone(),
                    None => {
                        let (ens, cav) = params.build()?;
                        decompose(&ens, &cav)?
                    }
                };
                let baths = config.baths.resolve(&dec)?;
                let drive = config.drive.resolve(&dec)?;
                let rates = TransitionRates::compute(&dec, &baths)?;
                let head: Vec<f64> = rates.as_array().iter().map(|(_, r)| *r).collect();
                Ok(efficiencies(problem.as_ref(), &dec, &baths, &drive, params.kappa_ev, engine)?.prefixed(head))
            })?;
            let mut columns = vec!["n_per_species".to_string()];
            columns.extend(TransitionRates::LABELS.iter().map(|s| s.to_string()));
            columns.extend(t_cols.iter().cloned());
            let width = columns.len() - 1;
            Ok(assemble(config, columns, width, points, results, started))
        }
        SweepKind::SinglePoint => {
            let points = vec![Point {
                coordinates: Vec::new(),
                label: "point".into(),
            }];
            let results = execute(1, &points, |_, _| {
                let report = point_report(config)?;
                let mut ev = Evaluated {
                    values: Vec::new(),
                    checks: Checks::default(),
                };
                if let Some(r) = &report.redfield {
                    ev.values.push(r.transfer_efficiency.ok_or(Error::NoEmission)?);
                    ev.checks.physicality = Some(r.physicality);
                }
                if let Some(r) = &report.rate {
                    ev.values.push(r.solution.transfer_efficiency);
                    ev.checks.flux_error = Some((r.solution.outflow - 1.0).abs());
                }
                Ok(ev)
            })?;
            Ok(assemble(config, t_cols.clone(), t_cols.len(), points, results, started))
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RedfieldReport {
    /// `[LP, MP, UP]`
    pub polariton_populations: [f64; 3],
    pub dark_donor_population: f64,
    pub dark_acceptor_population: f64,
    pub ground_population: f64,
    pub transfer_efficiency: Option<f64>,
    pub residual_norm: f64,
    pub physicality: Physicality,
}

#[derive(Debug, Clone, Serialize)]
pub struct RateReport {
    pub rates: TransitionRates,
    pub solution: NetworkSolution,
}

/// Everything computed at one parameter point.
#[derive(Debug, Clone, Serialize)]
pub struct PointReport {
    pub system: SystemParams,
    pub baths: BathSet,
    pub drive: DriveParams,
    /// `[LP, MP, UP]`
    pub energies_ev: [f64; 3],
    /// Rows `[LP, MP, UP]`, columns `[cavity, donor, acceptor]`.
    pub hopfield_squares: [[f64; 3]; 3],
    pub resonance_gaps: ResonanceGaps,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub redfield: Option<RedfieldReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rate: Option<RateReport>,
    /// `|T_redfield - T_rate|` when both engines ran.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub efficiency_difference: Option<f64>,
}

pub fn point_report(config: &RunConfig) -> Result<PointReport> {
    let engine = config.sweep.engine;
    let system = &config.system;
    system.validate()?;
    let problem = problem_for(system, engine)?;
    let dec = match &problem {
        Some(p) => p.decomposition.clone(),
        None => {
            let (ens, cav) = system.build()?;
            decompose(&ens, &cav)?
        }
    };
    let baths = config.baths.resolve(&dec)?;
    let drive = config.drive.resolve(&dec)?;
    let redfield = match &problem {
        Some(p) => {
            let ss = p.steady_state(&baths, &drive)?;
            Some(RedfieldReport {
                polariton_populations: ss.polariton_populations,
                dark_donor_population: ss.dark_donor_population,
                dark_acceptor_population: ss.dark_acceptor_population,
                ground_population: ss.ground_population,
                transfer_efficiency: ss.transfer_efficiency,
                residual_norm: ss.residual_norm,
                physicality: ss.physicality(),
            })
        }
        None => None,
    };
    let rate = if engine.uses_rate() {
        let net = RateNetwork::build(&dec, &baths, system.kappa_ev)?;
        Some(RateReport {
            rates: net.rates,
            solution: solve_network(&net)?,
        })
    } else {
        None
    };
    let efficiency_difference = match (&redfield, &rate) {
        (Some(r), Some(k)) => r
            .transfer_efficiency
            .map(|t| (t - k.solution.transfer_efficiency).abs()),
        _ => None,
    };
    Ok(PointReport {
        system: system.clone(),
        baths,
        drive,
        energies_ev: dec.energies,
        hopfield_squares: dec.squares(),
        resonance_gaps: dec.resonance_gaps(),
        redfield,
        rate,
        efficiency_difference,
    })
}
