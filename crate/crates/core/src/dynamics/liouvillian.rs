use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{build_lindblad_generator, steady_state, Eigenbasis, RedfieldKernel, SteadyState, Superoperator};
use crate::bath::BathSet;
use crate::error::{Error, Result};
use crate::model::{build_hamiltonian, BasisIndex, CavityConfig, EmitterEnsemble, Hamiltonian};
use crate::polariton::{decompose, PolaritonDecomposition};

/// Coherent laser pumping of the cavity, `Ω_P (a† e^{-iω_P t} + h.c.)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriveParams {
    pub amplitude: f64,
    pub frequency: f64,
}

impl DriveParams {
    pub const DEFAULT_AMPLITUDE: f64 = 1e-4;

    pub fn new(amplitude: f64, frequency: f64) -> Result<Self> {
        if !(amplitude >= 0.0 && amplitude.is_finite()) {
            return Err(Error::invalid("amplitude_ev", "must be non-negative"));
        }
        if !(frequency > 0.0 && frequency.is_finite()) {
            return Err(Error::invalid("omega_p_ev", "must be positive"));
        }
        Ok(Self { amplitude, frequency })
    }

    /// The single-excitation truncation needs `Ω_P ≪ κ`.
    pub fn is_weak(&self, kappa: f64) -> bool {
        self.amplitude <= kappa / 10.0
    }
}

/// `-i[H - ω_P N + Ω_P(a + a†), ·]` in the frame rotating at `ω_P`, written
/// in the eigenbasis of `H`.
pub fn coherent_generator(basis: &Eigenbasis, drive: &DriveParams) -> Superoperator {
    let n = basis.dim();
    let mut sup = Superoperator::zeros(n);
    let shifted: Vec<f64> = basis
        .energies
        .iter()
        .enumerate()
        .map(|(k, &e)| if k == 0 { e } else { e - drive.frequency })
        .collect();
    for a in 0..n {
        for b in 0..n {
            let w = shifted[a] - shifted[b];
            if w != 0.0 {
                sup.add_at((a, b), (a, b), Complex64::new(0.0, -w));
            }
        }
    }
    if drive.amplitude > 0.0 {
        // ⟨a|(|P⟩⟨G| + |G⟩⟨P|)|c⟩ in the eigenbasis.
        let photon = BasisIndex::Photon.index();
        let mut x = nalgebra::DMatrix::<f64>::zeros(n, n);
        for a in 1..n {
            let v = drive.amplitude * basis.vectors[(photon, a)];
            x[(a, 0)] = v;
            x[(0, a)] = v;
        }
        let minus_i = Complex64::new(0.0, -1.0);
        for a in 0..n {
            for c in 0..n {
                let h = x[(a, c)];
                if h == 0.0 {
                    continue;
                }
                for b in 0..n {
                    // -i H ρ and +i ρ H
                    sup.add_at((a, b), (c, b), minus_i * h);
                    sup.add_at((b, c), (b, a), -minus_i * h);
                }
            }
        }
    }
    sup
}

/// Time-independent generator of the driven, damped system in the rotating
/// frame. Bath and loss operators conserve or lower the excitation number,
/// so they carry over unchanged from the lab frame.
#[derive(Debug, Clone)]
pub struct Liouvillian {
    pub generator: Superoperator,
    pub basis: Eigenbasis,
    pub drive: DriveParams,
}

pub fn assemble_liouvillian(
    basis: &Eigenbasis,
    drive: &DriveParams,
    redfield: Superoperator,
    lindblad: &Superoperator,
) -> Result<Liouvillian> {
    if !(drive.frequency > 0.0) {
        return Err(Error::invalid("omega_p_ev", "must be positive"));
    }
    if redfield.dim() != basis.dim() {
        return Err(Error::DimensionMismatch {
            expected: basis.dim(),
            found: redfield.dim(),
        });
    }
    let mut generator = redfield;
    generator.add_assign(lindblad)?;
    generator.add_assign(&coherent_generator(basis, drive))?;
    Ok(Liouvillian {
        generator,
        basis: basis.clone(),
        drive: *drive,
    })
}

/// Everything about one physical system that does not depend on the baths
/// or the drive, cached so that sweeps over vibrational frequencies only
/// rebuild the Redfield part.
#[derive(Debug, Clone)]
pub struct LiouvilleProblem {
    pub ensemble: EmitterEnsemble,
    pub cavity: CavityConfig,
    pub hamiltonian: Hamiltonian,
    pub basis: Eigenbasis,
    pub decomposition: PolaritonDecomposition,
    kernel: RedfieldKernel,
    lindblad: Superoperator,
}

impl LiouvilleProblem {
    pub fn new(ensemble: EmitterEnsemble, cavity: CavityConfig) -> Result<Self> {
        let hamiltonian = build_hamiltonian(&ensemble, &cavity)?;
        let basis = Eigenbasis::new(&hamiltonian)?;
        let decomposition = decompose(&ensemble, &cavity)?;
        let kernel = RedfieldKernel::new(&basis, &ensemble)?;
        let lindblad = build_lindblad_generator(&ensemble, &cavity, &basis)?;
        Ok(Self {
            ensemble,
            cavity,
            hamiltonian,
            basis,
            decomposition,
            kernel,
            lindblad,
        })
    }

    pub fn liouvillian(&self, baths: &BathSet, drive: &DriveParams) -> Result<Liouvillian> {
        if !drive.is_weak(self.cavity.loss_kappa) {
            log::warn!(
                "drive amplitude {} eV exceeds kappa/10 = {} eV; single-excitation truncation is unreliable",
                drive.amplitude,
                self.cavity.loss_kappa / 10.0
            );
        }
        let redfield = self.kernel.generator(baths)?;
        assemble_liouvillian(&self.basis, drive, redfield, &self.lindblad)
    }

    pub fn steady_state(&self, baths: &BathSet, drive: &DriveParams) -> Result<SteadyState> {
        let l = self.liouvillian(baths, drive)?;
        steady_state(&l, &self.decomposition, &self.ensemble)
    }
}
