//! Open-system dynamics of the driven cavity: Bloch-Redfield relaxation from
//! the vibrational baths, Lindblad losses, coherent pumping of the cavity and
//! the rotating-frame steady state.
//!
//! Every generator built here acts on density matrices written in the
//! eigenbasis of the undriven Hamiltonian (see [`Eigenbasis`]), vectorised
//! row-major: element `(a, b)` sits at `a * dim + b`.

mod lindblad;
mod liouvillian;
mod redfield;
mod steady;

pub use lindblad::build_lindblad_generator;
pub use liouvillian::{assemble_liouvillian, coherent_generator, DriveParams, Liouvillian, LiouvilleProblem};
pub use redfield::{build_redfield_generator, RedfieldKernel, RATE_FLOOR};
pub use steady::{steady_state, transfer_efficiency, Physicality, SteadyState};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::Hamiltonian;

/// Eigen-decomposition of the single-excitation Hamiltonian.
///
/// Index 0 is always the ground state (energy 0, eigenvector `|G⟩`); the
/// remaining states are the one-excitation eigenstates in ascending order.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigenbasis {
    pub energies: Vec<f64>,
    /// Columns are eigenvectors in the site basis.
    pub vectors: DMatrix<f64>,
}

impl Eigenbasis {
    pub fn new(h: &Hamiltonian) -> Result<Self> {
        let dim = h.dim();
        if dim < 2 {
            return Err(Error::DimensionMismatch { expected: 2, found: dim });
        }
        let block = h.matrix().view((1, 1), (dim - 1, dim - 1)).into_owned();
        let eig = SymmetricEigen::try_new(block, f64::EPSILON, 0)
            .ok_or_else(|| Error::Eigensolver("single-excitation block did not converge".into()))?;
        let mut order: Vec<usize> = (0..dim - 1).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));

        let mut energies = Vec::with_capacity(dim);
        let mut vectors = DMatrix::zeros(dim, dim);
        energies.push(0.0);
        vectors[(0, 0)] = 1.0;
        for (col, &k) in order.iter().enumerate() {
            energies.push(eig.eigenvalues[k]);
            for row in 0..dim - 1 {
                vectors[(row + 1, col + 1)] = eig.eigenvectors[(row, k)];
            }
        }
        Ok(Self { energies, vectors })
    }

    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    /// `V ρ Vᵀ`
    pub fn to_site(&self, rho: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        let v = self.vectors.map(|x| Complex64::new(x, 0.0));
        &v * rho * v.transpose()
    }

    /// `Vᵀ ρ V`
    pub fn to_eigen(&self, rho: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        let v = self.vectors.map(|x| Complex64::new(x, 0.0));
        v.transpose() * rho * &v
    }
}

/// Linear map on `dim × dim` density matrices, stored as a dense
/// `dim² × dim²` matrix over row-major vectorised operators.
#[derive(Debug, Clone, PartialEq)]
pub struct Superoperator {
    dim: usize,
    matrix: DMatrix<Complex64>,
}

impl Superoperator {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            matrix: DMatrix::zeros(dim * dim, dim * dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    #[inline]
    pub(crate) fn idx(&self, a: usize, b: usize) -> usize {
        a * self.dim + b
    }

    #[inline]
    pub(crate) fn add_at(&mut self, row: (usize, usize), col: (usize, usize), value: Complex64) {
        let (r, c) = (self.idx(row.0, row.1), self.idx(col.0, col.1));
        self.matrix[(r, c)] += value;
    }

    pub fn entry(&self, row: (usize, usize), col: (usize, usize)) -> Complex64 {
        self.matrix[(self.idx(row.0, row.1), self.idx(col.0, col.1))]
    }

    pub fn apply(&self, rho: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        assert_eq!(rho.shape(), (self.dim, self.dim), "operator shape mismatch");
        let n = self.dim;
        let v = nalgebra::DVector::from_iterator(n * n, (0..n * n).map(|k| rho[(k / n, k % n)]));
        let out = &self.matrix * v;
        DMatrix::from_fn(n, n, |a, b| out[a * n + b])
    }

    pub fn add_assign(&mut self, other: &Superoperator) -> Result<()> {
        if other.dim != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        self.matrix += &other.matrix;
        Ok(())
    }

    /// Frobenius norm of the matrix representation.
    pub fn norm(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}
