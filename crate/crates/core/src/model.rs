//! Emitters, cavity and the single-excitation Hamiltonian.
//!
//! Energies are in eV and lengths in nm throughout. The Hilbert space is
//! truncated to at most one excitation and ordered as
//! `[Ground, Photon, Molecule(0), Molecule(1), ...]`, molecules following
//! ensemble order. The molecular energy is written as `ω σ†σ` so the ground
//! state sits at zero.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Species {
    Donor,
    Acceptor,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Emitter {
    pub species: Species,
    pub position: f64,
    pub transition_frequency: f64,
    pub coupling_g: f64,
    pub radiative_rate: f64,
}

/// Ordered collection of two-level emitters. All donors share one transition
/// frequency, as do all acceptors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmitterEnsemble {
    entries: Vec<Emitter>,
}

impl EmitterEnsemble {
    pub fn new(entries: Vec<Emitter>) -> Result<Self> {
        let mut donor_freq = None;
        let mut acceptor_freq = None;
        for e in &entries {
            if !(e.transition_frequency.is_finite()
                && e.coupling_g.is_finite()
                && e.radiative_rate.is_finite()
                && e.position.is_finite())
            {
                return Err(Error::NonFinite("emitter"));
            }
            if e.coupling_g < 0.0 {
                return Err(Error::invalid("coupling_g", "must be non-negative"));
            }
            if e.radiative_rate < 0.0 {
                return Err(Error::invalid("radiative_rate", "must be non-negative"));
            }
            let slot = match e.species {
                Species::Donor => &mut donor_freq,
                Species::Acceptor => &mut acceptor_freq,
            };
            match *slot {
                None => *slot = Some(e.transition_frequency),
                Some(w) if w != e.transition_frequency => {
                    return Err(Error::invalid(
                        "transition_frequency",
                        format!("{:?} emitters must share one frequency", e.species),
                    ))
                }
                _ => {}
            }
        }
        if donor_freq.is_none() {
            return Err(Error::invalid("n_donors", "at least one donor is required"));
        }
        if !entries
            .iter()
            .any(|e| e.species == Species::Donor && e.coupling_g > 0.0)
        {
            return Err(Error::invalid("coupling_g", "at least one donor must couple to the cavity"));
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[Emitter] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn count(&self, species: Species) -> usize {
        self.entries.iter().filter(|e| e.species == species).count()
    }

    pub fn n_donors(&self) -> usize {
        self.count(Species::Donor)
    }

    pub fn n_acceptors(&self) -> usize {
        self.count(Species::Acceptor)
    }

    /// Shared transition frequency of a species, if any member exists.
    pub fn frequency(&self, species: Species) -> Option<f64> {
        self.entries
            .iter()
            .find(|e| e.species == species)
            .map(|e| e.transition_frequency)
    }

    /// Mean radiative rate of a species (zero when the species is absent).
    pub fn radiative_rate(&self, species: Species) -> f64 {
        let (sum, n) = self
            .entries
            .iter()
            .filter(|e| e.species == species)
            .fold((0.0, 0usize), |(s, n), e| (s + e.radiative_rate, n + 1));
        if n == 0 {
            0.0
        } else {
            sum / n as f64
        }
    }

    /// `sqrt(Σ g_n²)` over one species.
    pub fn collective_coupling(&self, species: Species) -> f64 {
        self.entries
            .iter()
            .filter(|e| e.species == species)
            .map(|e| e.coupling_g * e.coupling_g)
            .sum::<f64>()
            .sqrt()
    }

    /// Rabi frequency, defined over the donors.
    pub fn rabi_frequency(&self) -> f64 {
        self.collective_coupling(Species::Donor)
    }

    /// `Σ w_n²` with `w_n = g_n² / Σ g_m²` over one species. Equals `1/N` for
    /// uniform couplings; zero when the species does not couple at all.
    pub fn inverse_participation(&self, species: Species) -> f64 {
        let total = self.collective_coupling(species).powi(2);
        if total == 0.0 {
            return 0.0;
        }
        self.entries
            .iter()
            .filter(|e| e.species == species)
            .map(|e| {
                let w = e.coupling_g * e.coupling_g / total;
                w * w
            })
            .sum()
    }

    /// Dimension of the single-excitation Hilbert space, `N + 2`.
    pub fn hilbert_dim(&self) -> usize {
        self.entries.len() + 2
    }

    /// Normalised collective (bright) state of one species in the full
    /// Hilbert space, weighted by `g_n`.
    pub fn bright_state(&self, species: Species) -> DVector<f64> {
        let mut v = DVector::zeros(self.hilbert_dim());
        let norm = self.collective_coupling(species);
        if norm == 0.0 {
            return v;
        }
        for (n, e) in self.entries.iter().enumerate() {
            if e.species == species {
                v[BasisIndex::Molecule(n).index()] = e.coupling_g / norm;
            }
        }
        v
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ModeProfile {
    /// `sin(πx/L)`
    Fundamental,
    /// `sin(2πx/L)`, with a node at `L/2`.
    SecondMode,
    Uniform,
    /// Per-molecule weights, in ensemble order.
    Explicit(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CavityConfig {
    pub frequency: f64,
    pub loss_kappa: f64,
    pub mode_profile: ModeProfile,
    pub region_length: f64,
    pub wall_width: f64,
    pub wall_center: f64,
}

impl CavityConfig {
    pub fn new(
        frequency: f64,
        loss_kappa: f64,
        mode_profile: ModeProfile,
        region_length: f64,
        wall_width: f64,
    ) -> Result<Self> {
        let cavity = Self {
            frequency,
            loss_kappa,
            mode_profile,
            region_length,
            wall_width,
            wall_center: region_length / 2.0,
        };
        cavity.validate()?;
        Ok(cavity)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.frequency.is_finite() && self.loss_kappa.is_finite()) {
            return Err(Error::NonFinite("cavity"));
        }
        if self.frequency <= 0.0 {
            return Err(Error::invalid("omega_c_ev", "must be positive"));
        }
        if self.loss_kappa <= 0.0 {
            return Err(Error::invalid("kappa_ev", "must be positive"));
        }
        if !(self.region_length > 0.0) {
            return Err(Error::invalid("length_nm", "must be positive"));
        }
        if !(self.wall_width >= 0.0 && self.wall_width < self.region_length) {
            return Err(Error::invalid("wall_nm", "must lie in [0, length_nm)"));
        }
        Ok(())
    }

    /// Unnormalised profile weight for the molecule with ensemble index
    /// `index` sitting at `position`.
    fn weight(&self, position: f64, index: usize) -> Result<f64> {
        let l = self.region_length;
        Ok(match &self.mode_profile {
            ModeProfile::Fundamental => (PI * position / l).sin(),
            ModeProfile::SecondMode => {
                // The wall centre is an exact node.
                if position == self.wall_center {
                    0.0
                } else {
                    (2.0 * PI * position / l).sin()
                }
            }
            ModeProfile::Uniform => 1.0,
            ModeProfile::Explicit(w) => *w.get(index).ok_or(Error::DimensionMismatch {
                expected: index + 1,
                found: w.len(),
            })?,
        })
    }

    /// Couplings `g_n ∝ |profile(x_n)|`, scaled so that the donor collective
    /// coupling equals `target_rabi`. The sign of the mode function is
    /// absorbed into the molecular phase.
    pub fn coupling_profile(
        &self,
        positions: &[f64],
        species: &[Species],
        target_rabi: f64,
    ) -> Result<Vec<f64>> {
        if positions.len() != species.len() {
            return Err(Error::DimensionMismatch {
                expected: positions.len(),
                found: species.len(),
            });
        }
        if let ModeProfile::Explicit(w) = &self.mode_profile {
            if w.len() != positions.len() {
                return Err(Error::DimensionMismatch {
                    expected: positions.len(),
                    found: w.len(),
                });
            }
        }
        if !(target_rabi > 0.0 && target_rabi.is_finite()) {
            return Err(Error::invalid("rabi_ev", "must be positive"));
        }
        let mut raw = Vec::with_capacity(positions.len());
        for (i, &x) in positions.iter().enumerate() {
            if !(0.0..=self.region_length).contains(&x) {
                return Err(Error::PositionOutOfRange {
                    position: x,
                    length: self.region_length,
                });
            }
            let w = self.weight(x, i)?;
            if !w.is_finite() {
                return Err(Error::NonFinite("mode profile"));
            }
            raw.push(w.abs());
        }
        let donor_norm = raw
            .iter()
            .zip(species)
            .filter(|(_, s)| **s == Species::Donor)
            .map(|(w, _)| w * w)
            .sum::<f64>()
            .sqrt();
        if donor_norm == 0.0 {
            return Err(Error::DegenerateProfile);
        }
        let scale = target_rabi / donor_norm;
        Ok(raw.into_iter().map(|w| w * scale).collect())
    }
}

/// Index into the single-excitation basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasisIndex {
    Ground,
    Photon,
    Molecule(usize),
}

impl BasisIndex {
    pub const fn index(self) -> usize {
        match self {
            BasisIndex::Ground => 0,
            BasisIndex::Photon => 1,
            BasisIndex::Molecule(n) => n + 2,
        }
    }

    pub const fn from_index(i: usize) -> Self {
        match i {
            0 => BasisIndex::Ground,
            1 => BasisIndex::Photon,
            n => BasisIndex::Molecule(n - 2),
        }
    }
}

/// Real symmetric single-excitation Hamiltonian (the couplings are real, so
/// the Hermitian matrix has no imaginary part).
#[derive(Debug, Clone, PartialEq)]
pub struct Hamiltonian {
    matrix: DMatrix<f64>,
}

impl Hamiltonian {
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// All eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut vals: Vec<f64> = SymmetricEigen::new(self.matrix.clone())
            .eigenvalues
            .iter()
            .copied()
            .collect();
        vals.sort_by(f64::total_cmp);
        vals
    }
}

pub fn build_hamiltonian(ensemble: &EmitterEnsemble, cavity: &CavityConfig) -> Result<Hamiltonian> {
    if !cavity.frequency.is_finite() {
        return Err(Error::NonFinite("cavity frequency"));
    }
    let dim = ensemble.hilbert_dim();
    let mut h = DMatrix::zeros(dim, dim);
    let photon = BasisIndex::Photon.index();
    h[(photon, photon)] = cavity.frequency;
    for (n, e) in ensemble.entries().iter().enumerate() {
        if !(e.transition_frequency.is_finite() && e.coupling_g.is_finite()) {
            return Err(Error::NonFinite("emitter"));
        }
        let m = BasisIndex::Molecule(n).index();
        h[(m, m)] = e.transition_frequency;
        h[(photon, m)] = e.coupling_g;
        h[(m, photon)] = e.coupling_g;
    }
    Ok(Hamiltonian { matrix: h })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Layout {
    /// Donors left of the wall, acceptors right of it.
    Separated,
    /// Species alternate along the whole cavity.
    Intermixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProfileKind {
    Fundamental,
    Second,
    Uniform,
}

impl From<ProfileKind> for ModeProfile {
    fn from(p: ProfileKind) -> Self {
        match p {
            ProfileKind::Fundamental => ModeProfile::Fundamental,
            ProfileKind::Second => ModeProfile::SecondMode,
            ProfileKind::Uniform => ModeProfile::Uniform,
        }
    }
}

/// Flat system description, as read from the `[system]` config section.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SystemParams {
    pub n_donors: usize,
    pub n_acceptors: usize,
    pub omega_d_ev: f64,
    pub omega_a_ev: f64,
    pub omega_c_ev: f64,
    pub rabi_ev: f64,
    pub kappa_ev: f64,
    pub gamma_rad_ev: f64,
    pub layout: Layout,
    pub profile: ProfileKind,
    pub length_nm: f64,
    pub wall_nm: f64,
}

impl Default for SystemParams {
    fn default() -> Self {
        Self {
            n_donors: 16,
            n_acceptors: 16,
            omega_d_ev: 2.1,
            omega_a_ev: 1.88,
            omega_c_ev: 2.1,
            rabi_ev: 0.16,
            kappa_ev: 0.01,
            gamma_rad_ev: 1.3e-6,
            layout: Layout::Separated,
            profile: ProfileKind::Second,
            length_nm: 100.0,
            wall_nm: 10.0,
        }
    }
}

impl SystemParams {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("omega_d_ev", self.omega_d_ev),
            ("omega_a_ev", self.omega_a_ev),
            ("omega_c_ev", self.omega_c_ev),
            ("rabi_ev", self.rabi_ev),
            ("kappa_ev", self.kappa_ev),
            ("length_nm", self.length_nm),
        ];
        for (name, v) in positive {
            if !v.is_finite() {
                return Err(Error::invalid(name, "must be finite"));
            }
            if v <= 0.0 {
                return Err(Error::invalid(name, format!("must be positive, got {v}")));
            }
        }
        if !(self.gamma_rad_ev >= 0.0 && self.gamma_rad_ev.is_finite()) {
            return Err(Error::invalid("gamma_rad_ev", "must be non-negative"));
        }
        if !(self.wall_nm >= 0.0 && self.wall_nm < self.length_nm) {
            return Err(Error::invalid("wall_nm", "must lie in [0, length_nm)"));
        }
        if self.n_donors == 0 {
            return Err(Error::invalid("n_donors", "must be at least 1"));
        }
        Ok(())
    }

    /// Evenly spaced, cell-centred positions and species in ensemble order.
    pub fn positions(&self) -> (Vec<f64>, Vec<Species>) {
        let l = self.length_nm;
        let (nd, na) = (self.n_donors, self.n_acceptors);
        match self.layout {
            Layout::Separated => {
                let half = (l - self.wall_nm) / 2.0;
                let mut pos = Vec::with_capacity(nd + na);
                let mut sp = Vec::with_capacity(nd + na);
                for k in 0..nd {
                    pos.push((k as f64 + 0.5) * half / nd as f64);
                    sp.push(Species::Donor);
                }
                for k in 0..na {
                    pos.push((l + self.wall_nm) / 2.0 + (k as f64 + 0.5) * half / na as f64);
                    sp.push(Species::Acceptor);
                }
                (pos, sp)
            }
            Layout::Intermixed => {
                let total = nd + na;
                let (mut d_left, mut a_left) = (nd, na);
                let mut pos = Vec::with_capacity(total);
                let mut sp = Vec::with_capacity(total);
                for j in 0..total {
                    pos.push((j as f64 + 0.5) * l / total as f64);
                    let donor_turn = (j % 2 == 0 && d_left > 0) || a_left == 0;
                    if donor_turn {
                        d_left -= 1;
                        sp.push(Species::Donor);
                    } else {
                        a_left -= 1;
                        sp.push(Species::Acceptor);
                    }
                }
                (pos, sp)
            }
        }
    }

    pub fn cavity(&self) -> Result<CavityConfig> {
        CavityConfig::new(
            self.omega_c_ev,
            self.kappa_ev,
            self.profile.into(),
            self.length_nm,
            self.wall_nm,
        )
    }

    pub fn build(&self) -> Result<(EmitterEnsemble, CavityConfig)> {
        self.validate()?;
        let cavity = self.cavity()?;
        let (positions, species) = self.positions();
        let g = cavity.coupling_profile(&positions, &species, self.rabi_ev)?;
        let entries = positions
            .iter()
            .zip(&species)
            .zip(&g)
            .map(|((&position, &species), &coupling_g)| Emitter {
                species,
                position,
                transition_frequency: match species {
                    Species::Donor => self.omega_d_ev,
                    Species::Acceptor => self.omega_a_ev,
                },
                coupling_g,
                radiative_rate: self.gamma_rad_ev,
            })
            .collect();
        Ok((EmitterEnsemble::new(entries)?, cavity))
    }
}
