//! Rotating-frame steady state.
//!
//! The generator maps Hermitian matrices to Hermitian matrices, so it is
//! solved as a real linear system on the `dim²` real parameters of a
//! Hermitian `ρ`: diagonal entries, then `Re ρ_ab` stored at `(a, b)` and
//! `Im ρ_ab` stored at `(b, a)` for `a < b`. The equation for the ground
//! population is replaced by `tr ρ = 1`.

use faer::linalg::solvers::Solve;
use faer::Mat;
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::Serialize;

use super::Liouvillian;
use crate::error::{Error, Result};
use crate::model::{BasisIndex, EmitterEnsemble, Species};
use crate::polariton::PolaritonDecomposition;

/// Smallest accepted ratio between the smallest and largest LU pivot.
const PIVOT_RATIO_FLOOR: f64 = 1e-13;
/// Residual tolerance relative to the generator's Frobenius norm.
const RESIDUAL_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct SteadyState {
    /// Density matrix in the site basis (lab-frame populations; coherences
    /// with the ground state are in the rotating frame).
    pub density_matrix: DMatrix<Complex64>,
    /// `P_LP, P_MP, P_UP`.
    pub polariton_populations: [f64; 3],
    pub dark_donor_population: f64,
    pub dark_acceptor_population: f64,
    pub ground_population: f64,
    /// `None` when nothing is emitted (undriven system).
    pub transfer_efficiency: Option<f64>,
    pub residual_norm: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Physicality {
    pub trace_error: f64,
    pub hermiticity_error: f64,
    pub min_eigenvalue: f64,
}

impl Physicality {
    pub fn is_physical(&self) -> bool {
        self.trace_error <= 1e-10 && self.hermiticity_error <= 1e-12 && self.min_eigenvalue >= -1e-10
    }
}

impl SteadyState {
    pub fn physicality(&self) -> Physicality {
        let rho = &self.density_matrix;
        let n = rho.nrows();
        let trace: Complex64 = (0..n).map(|i| rho[(i, i)]).sum();
        let hermiticity_error = (rho - rho.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        let min_eigenvalue = SymmetricEigen::new(rho.clone())
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        Physicality {
            trace_error: (trace - Complex64::new(1.0, 0.0)).norm(),
            hermiticity_error,
            min_eigenvalue,
        }
    }

    pub fn excited_population(&self) -> f64 {
        1.0 - self.ground_population
    }
}

#[derive(Clone, Copy)]
enum Param {
    Diag(usize),
    Re(usize, usize),
    Im(usize, usize),
}

#[inline]
fn param(k: usize, n: usize) -> Param {
    let (p, q) = (k / n, k % n);
    match p.cmp(&q) {
        std::cmp::Ordering::Equal => Param::Diag(p),
        std::cmp::Ordering::Less => Param::Re(p, q),
        std::cmp::Ordering::Greater => Param::Im(q, p),
    }
}

/// Real matrix of the generator on Hermitian parameters, with the trace
/// constraint in row 0.
fn real_system(l: &DMatrix<Complex64>, n: usize) -> Mat<f64> {
    let i = Complex64::new(0.0, 1.0);
    let dim2 = n * n;
    let mut m = Mat::<f64>::zeros(dim2, dim2);
    for j in 0..dim2 {
        // Column of L applied to the j-th Hermitian basis element.
        let column = |row: usize| -> Complex64 {
            match param(j, n) {
                Param::Diag(a) => l[(row, a * n + a)],
                Param::Re(a, b) => l[(row, a * n + b)] + l[(row, b * n + a)],
                Param::Im(a, b) => i * (l[(row, a * n + b)] - l[(row, b * n + a)]),
            }
        };
        for r in 1..dim2 {
            let v = match param(r, n) {
                Param::Diag(p) => column(p * n + p).re,
                Param::Re(p, q) => column(p * n + q).re,
                Param::Im(p, q) => column(p * n + q).im,
            };
            m[(r, j)] = v;
        }
        if let Param::Diag(_) = param(j, n) {
            m[(0, j)] = 1.0;
        }
    }
    m
}

pub fn steady_state(
    liouvillian: &Liouvillian,
    decomposition: &PolaritonDecomposition,
    ensemble: &EmitterEnsemble,
) -> Result<SteadyState> {
    let n = liouvillian.basis.dim();
    if n != ensemble.hilbert_dim() {
        return Err(Error::DimensionMismatch {
            expected: ensemble.hilbert_dim(),
            found: n,
        });
    }
    let l = liouvillian.generator.matrix();
    let system = real_system(l, n);
    let lu = system.partial_piv_lu();

    let u = lu.U();
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for k in 0..n * n {
        let p = u[(k, k)].abs();
        lo = lo.min(p);
        hi = hi.max(p);
    }
    let pivot_ratio = if hi > 0.0 { lo / hi } else { 0.0 };
    if !(pivot_ratio >= PIVOT_RATIO_FLOOR) {
        return Err(Error::RankDeficient { pivot_ratio });
    }

    let mut rhs = Mat::<f64>::zeros(n * n, 1);
    rhs[(0, 0)] = 1.0;
    let x = lu.solve(&rhs);

    let mut rho = DMatrix::<Complex64>::zeros(n, n);
    for a in 0..n {
        rho[(a, a)] = Complex64::new(x[(a * n + a, 0)], 0.0);
        for b in a + 1..n {
            let z = Complex64::new(x[(a * n + b, 0)], x[(b * n + a, 0)]);
            rho[(a, b)] = z;
            rho[(b, a)] = z.conj();
        }
    }
    if rho.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::RankDeficient { pivot_ratio });
    }

    let residual_norm = liouvillian
        .generator
        .apply(&rho)
        .iter()
        .map(|z| z.norm_sqr())
        .sum::<f64>()
        .sqrt();
    let tolerance = RESIDUAL_TOLERANCE * liouvillian.generator.norm();
    if !(residual_norm <= tolerance) {
        return Err(Error::Residual {
            residual: residual_norm,
            tolerance,
        });
    }

    let site = liouvillian.basis.to_site(&rho);
    let expectation = |v: &DVector<f64>| -> f64 {
        let vc = v.map(|x| Complex64::new(x, 0.0));
        (vc.transpose() * &site * &vc)[(0, 0)].re
    };
    let polariton_populations = [
        expectation(&decomposition.bright_vectors[0]),
        expectation(&decomposition.bright_vectors[1]),
        expectation(&decomposition.bright_vectors[2]),
    ];
    let dark = |species: Species| -> f64 {
        let local: f64 = ensemble
            .entries()
            .iter()
            .enumerate()
            .filter(|(_, e)| e.species == species)
            .map(|(i, _)| {
                let k = BasisIndex::Molecule(i).index();
                site[(k, k)].re
            })
            .sum();
        local - expectation(&ensemble.bright_state(species))
    };
    let ground_population = site[(0, 0)].re;
    let transfer = if liouvillian.drive.amplitude > 0.0 {
        transfer_efficiency(&polariton_populations, decomposition).ok()
    } else {
        None
    };

    Ok(SteadyState {
        dark_donor_population: dark(Species::Donor),
        dark_acceptor_population: dark(Species::Acceptor),
        density_matrix: site,
        polariton_populations,
        ground_population,
        transfer_efficiency: transfer,
        residual_norm,
    })
}

/// Share of the cavity emission leaving through the lower polariton:
/// `b_LC² P_L / (b_LC² P_L + b_MC² P_M + b_UC² P_U)`.
///
/// Populations are `[P_LP, P_MP, P_UP]`; round-off negatives count as zero.
pub fn transfer_efficiency(populations: &[f64; 3], decomposition: &PolaritonDecomposition) -> Result<f64> {
    let weighted: Vec<f64> = (0..3)
        .map(|k| decomposition.hopfield[k][0].powi(2) * populations[k].max(0.0))
        .collect();
    let total: f64 = weighted.iter().sum();
    if !(total > 0.0) || !total.is_finite() {
        return Err(Error::NoEmission);
    }
    Ok(weighted[0] / total)
}
