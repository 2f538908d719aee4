//! Bright-subspace reduction, polariton energies and Hopfield coefficients.
//!
//! With `g_n`-weighted collective donor and acceptor states the bright sector
//! of the Hamiltonian is exactly the 3×3 arrowhead matrix
//!
//! ```text
//! | ω_C  Ω_D  Ω_A |
//! | Ω_D  ω_D   0  |
//! | Ω_A   0   ω_A |
//! ```
//!
//! and everything orthogonal to it (within each species) is dark.

use std::io::Write;

use nalgebra::{DVector, Matrix3, SymmetricEigen};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{BasisIndex, CavityConfig, EmitterEnsemble, Species, SystemParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Polariton {
    Lower,
    Middle,
    Upper,
}

impl Polariton {
    pub const ALL: [Polariton; 3] = [Polariton::Lower, Polariton::Middle, Polariton::Upper];

    pub const fn index(self) -> usize {
        self as usize
    }

    pub const fn label(self) -> &'static str {
        match self {
            Polariton::Lower => "LP",
            Polariton::Middle => "MP",
            Polariton::Upper => "UP",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Component {
    Cavity,
    Donor,
    Acceptor,
}

impl Component {
    pub const ALL: [Component; 3] = [Component::Cavity, Component::Donor, Component::Acceptor];

    pub const fn index(self) -> usize {
        self as usize
    }
}

impl From<Species> for Component {
    fn from(s: Species) -> Self {
        match s {
            Species::Donor => Component::Donor,
            Species::Acceptor => Component::Acceptor,
        }
    }
}

/// Degenerate dark manifold of one species.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DarkManifold {
    /// `N - 1` for a fully coupled species.
    pub dimension: usize,
    pub energy: f64,
    /// Number of molecules of the species.
    pub molecules: usize,
    /// `Σ w_n²`, see [`EmitterEnsemble::inverse_participation`].
    pub inverse_participation: f64,
    pub radiative_rate: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolaritonDecomposition {
    /// LP, MP, UP, strictly ascending.
    pub energies: [f64; 3],
    /// `hopfield[α][ι]` with α in (LP, MP, UP) and ι in (C, D, A).
    pub hopfield: [[f64; 3]; 3],
    pub dark_donor: DarkManifold,
    pub dark_acceptor: DarkManifold,
    pub collective_donor: f64,
    pub collective_acceptor: f64,
    /// Polariton eigenvectors in the full single-excitation basis.
    pub bright_vectors: [DVector<f64>; 3],
}

impl PolaritonDecomposition {
    pub fn energy(&self, p: Polariton) -> f64 {
        self.energies[p.index()]
    }

    pub fn amplitude(&self, p: Polariton, c: Component) -> f64 {
        self.hopfield[p.index()][c.index()]
    }

    /// Squared Hopfield coefficient.
    pub fn content(&self, p: Polariton, c: Component) -> f64 {
        self.amplitude(p, c).powi(2)
    }

    pub fn dark(&self, species: Species) -> &DarkManifold {
        match species {
            Species::Donor => &self.dark_donor,
            Species::Acceptor => &self.dark_acceptor,
        }
    }

    pub fn squares(&self) -> [[f64; 3]; 3] {
        self.hopfield.map(|row| row.map(|b| b * b))
    }

    /// The four vibrational resonance gaps that organise the transfer map:
    /// `(ω_UP - ω_D, ω_UP - ω_A, ω_UP - ω_LP, ω_MP - ω_A)`.
    pub fn resonance_gaps(&self) -> ResonanceGaps {
        let [lp, mp, up] = self.energies;
        ResonanceGaps {
            up_to_donor_dark: up - self.dark_donor.energy,
            up_to_acceptor_dark: up - self.dark_acceptor.energy,
            up_to_lp: up - lp,
            mp_to_acceptor_dark: mp - self.dark_acceptor.energy,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResonanceGaps {
    pub up_to_donor_dark: f64,
    pub up_to_acceptor_dark: f64,
    pub up_to_lp: f64,
    pub mp_to_acceptor_dark: f64,
}

pub fn reduce_to_bright(ensemble: &EmitterEnsemble, cavity: &CavityConfig) -> Result<Matrix3<f64>> {
    let omega_d = ensemble.collective_coupling(Species::Donor);
    let omega_a = ensemble.collective_coupling(Species::Acceptor);
    if omega_d == 0.0 {
        return Err(Error::ZeroCollectiveCoupling(Species::Donor));
    }
    if omega_a == 0.0 {
        return Err(Error::ZeroCollectiveCoupling(Species::Acceptor));
    }
    // Both frequencies exist once the collective couplings are non-zero.
    let wd = ensemble.frequency(Species::Donor).unwrap_or_default();
    let wa = ensemble.frequency(Species::Acceptor).unwrap_or_default();
    Ok(Matrix3::new(
        cavity.frequency,
        omega_d,
        omega_a,
        omega_d,
        wd,
        0.0,
        omega_a,
        0.0,
        wa,
    ))
}

pub fn decompose(ensemble: &EmitterEnsemble, cavity: &CavityConfig) -> Result<PolaritonDecomposition> {
    let bright = reduce_to_bright(ensemble, cavity)?;
    if bright.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("bright Hamiltonian"));
    }
    let eig = SymmetricEigen::try_new(bright, f64::EPSILON, 0)
        .ok_or_else(|| Error::Eigensolver("3x3 bright block did not converge".into()))?;

    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));

    let mut energies = [0.0; 3];
    let mut hopfield = [[0.0; 3]; 3];
    for (row, &k) in order.iter().enumerate() {
        energies[row] = eig.eigenvalues[k];
        let mut v = [
            eig.eigenvectors[(0, k)],
            eig.eigenvectors[(1, k)],
            eig.eigenvectors[(2, k)],
        ];
        let pivot = v.iter().copied().find(|x| *x != 0.0).unwrap_or(1.0);
        let flip = if v[0] != 0.0 { v[0] < 0.0 } else { pivot < 0.0 };
        if flip {
            v.iter_mut().for_each(|x| *x = -*x);
        }
        hopfield[row] = v;
    }

    let photon = {
        let mut p = DVector::zeros(ensemble.hilbert_dim());
        p[BasisIndex::Photon.index()] = 1.0;
        p
    };
    let donor_state = ensemble.bright_state(Species::Donor);
    let acceptor_state = ensemble.bright_state(Species::Acceptor);
    let bright_vectors = hopfield.map(|[c, d, a]| &photon * c + &donor_state * d + &acceptor_state * a);

    let dark = |species: Species| {
        let molecules = ensemble.count(species);
        DarkManifold {
            dimension: molecules.saturating_sub(1),
            energy: ensemble.frequency(species).unwrap_or_default(),
            molecules,
            inverse_participation: ensemble.inverse_participation(species),
            radiative_rate: ensemble.radiative_rate(species),
        }
    };

    Ok(PolaritonDecomposition {
        energies,
        hopfield,
        dark_donor: dark(Species::Donor),
        dark_acceptor: dark(Species::Acceptor),
        collective_donor: ensemble.collective_coupling(Species::Donor),
        collective_acceptor: ensemble.collective_coupling(Species::Acceptor),
        bright_vectors,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    RabiFrequency,
    CavityFrequency,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionRow {
    pub axis_value: f64,
    pub decomposition: PolaritonDecomposition,
}

/// Decomposes the system at every grid point of one axis. Points are
/// evaluated in parallel and returned in grid order.
pub fn sweep_decomposition(
    axis: SweepAxis,
    grid: &[f64],
    fixed: &SystemParams,
) -> Result<Vec<DecompositionRow>> {
    if grid.is_empty() {
        return Err(Error::invalid("grid", "must not be empty"));
    }
    if grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::invalid("grid", "must be strictly ascending"));
    }
    grid.par_iter()
        .enumerate()
        .map(|(index, &value)| {
            let mut params = fixed.clone();
            match axis {
                SweepAxis::RabiFrequency => params.rabi_ev = value,
                SweepAxis::CavityFrequency => params.omega_c_ev = value,
            }
            params
                .build()
                .and_then(|(ens, cav)| decompose(&ens, &cav))
                .map(|decomposition| DecompositionRow {
                    axis_value: value,
                    decomposition,
                })
                .map_err(|e| Error::SweepPoint {
                    index,
                    label: format!("{value}"),
                    source: Box::new(e),
                })
        })
        .collect()
}

pub const DECOMPOSITION_CSV_HEADER: &str =
    "axis_value,e_lp,e_mp,e_up,b2_lc,b2_ld,b2_la,b2_mc,b2_md,b2_ma,b2_uc,b2_ud,b2_ua";

/// Writes the sweep as CSV with 12 significant digits.
pub fn write_decomposition_csv<W: Write>(rows: &[DecompositionRow], mut out: W) -> Result<()> {
    writeln!(out, "{DECOMPOSITION_CSV_HEADER}")?;
    for row in rows {
        let d = &row.decomposition;
        let mut fields = vec![row.axis_value];
        fields.extend(d.energies);
        fields.extend(d.squares().iter().flatten());
        let line: Vec<String> = fields.iter().map(|x| format!("{x:.11e}")).collect();
        writeln!(out, "{}", line.join(","))?;
    }
    Ok(())
}
