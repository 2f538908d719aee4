//! Non-secular Bloch-Redfield relaxation tensor.
//!
//! Each molecule couples to its own bath through its local excitation number
//! `A_n = |n⟩⟨n|`. In the eigenbasis of `H`, with `ω_xy = E_x - E_y`,
//!
//! ```text
//! R_abcd = ½ Σ_n A_ac A_db [S_n(ω_ca) + S_n(ω_db)]
//!        - ½ δ_bd Σ_n Σ_e A_ae A_ec S_n(ω_ce)
//!        - ½ δ_ac Σ_n Σ_e A_de A_eb S_n(ω_de)
//! ```
//!
//! Lamb shifts are dropped. `S(ω)` is the emission spectrum, so `R_aacc` is
//! the rate for `c → a` and is non-zero only when `E_c > E_a`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{Eigenbasis, Superoperator};
use crate::bath::BathSet;
use crate::error::{Error, Result};
use crate::model::{BasisIndex, EmitterEnsemble, Species};

/// Population-transfer rates in `[-RATE_FLOOR, 0)` are clamped to zero;
/// anything more negative is reported as an error.
pub const RATE_FLOOR: f64 = 1e-14;

/// Bath-independent part of the Redfield tensor: for each species the fully
/// symmetric overlap `Q_abcd = Σ_n V_na V_nb V_nc V_nd`, stored as a
/// `dim² × dim²` matrix indexed `[(a, c), (d, b)]`.
///
/// Changing the spectral densities only requires [`RedfieldKernel::generator`].
#[derive(Debug, Clone)]
pub struct RedfieldKernel {
    dim: usize,
    energies: Vec<f64>,
    overlaps: Vec<(Species, DMatrix<f64>)>,
}

impl RedfieldKernel {
    pub fn new(basis: &Eigenbasis, ensemble: &EmitterEnsemble) -> Result<Self> {
        let dim = basis.dim();
        if dim != ensemble.hilbert_dim() {
            return Err(Error::DimensionMismatch {
                expected: ensemble.hilbert_dim(),
                found: dim,
            });
        }
        let mut overlaps = Vec::new();
        for species in [Species::Donor, Species::Acceptor] {
            let sites: Vec<usize> = ensemble
                .entries()
                .iter()
                .enumerate()
                .filter(|(_, e)| e.species == species)
                .map(|(n, _)| BasisIndex::Molecule(n).index())
                .collect();
            if sites.is_empty() {
                continue;
            }
            let w = DMatrix::from_fn(sites.len(), dim * dim, |k, ac| {
                let site = sites[k];
                basis.vectors[(site, ac / dim)] * basis.vectors[(site, ac % dim)]
            });
            overlaps.push((species, w.transpose() * &w));
        }
        Ok(Self {
            dim,
            energies: basis.energies.clone(),
            overlaps,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generator(&self, baths: &BathSet) -> Result<Superoperator> {
        let n = self.dim;
        let mut sup = Superoperator::zeros(n);

        // Per-species emission spectra S[x, y] = S(E_x - E_y), and the
        // one-sided sums Y_ac = Σ_e S(ω_ce) Q_aeec.
        let mut spectra = Vec::with_capacity(self.overlaps.len());
        let mut y = DMatrix::<f64>::zeros(n, n);
        for (species, q) in &self.overlaps {
            let bath = baths.get(*species);
            let s = DMatrix::from_fn(n, n, |x, yy| bath.eval(self.energies[x] - self.energies[yy]));
            for a in 0..n {
                for c in 0..n {
                    let mut acc = 0.0;
                    for e in 0..n {
                        let se = s[(c, e)];
                        if se != 0.0 {
                            acc += se * q[(a * n + e, e * n + c)];
                        }
                    }
                    y[(a, c)] += acc;
                }
            }
            spectra.push((s, q));
        }

        for c in 0..n {
            for d in 0..n {
                let col = c * n + d;
                for a in 0..n {
                    let qcol = a * n + c;
                    for b in 0..n {
                        let mut val = 0.0;
                        for (s, q) in &spectra {
                            let qv = q[(d * n + b, qcol)];
                            if qv != 0.0 {
                                val += 0.5 * qv * (s[(c, a)] + s[(d, b)]);
                            }
                        }
                        if b == d {
                            val -= 0.5 * y[(a, c)];
                        }
                        if a == c {
                            val -= 0.5 * y[(b, d)];
                        }
                        if val != 0.0 {
                            sup.matrix[(a * n + b, col)] = Complex64::new(val, 0.0);
                        }
                    }
                }
            }
        }

        // Population-transfer rates are non-negative; clamp round-off and keep
        // the column trace-free by moving the clamped amount to the loss term.
        for c in 0..n {
            for a in 0..n {
                if a == c {
                    continue;
                }
                let (r, col) = (a * n + a, c * n + c);
                let rate = sup.matrix[(r, col)].re;
                if rate < -RATE_FLOOR {
                    return Err(Error::NegativeRate { from: c, to: a, rate });
                }
                if rate < 0.0 {
                    sup.matrix[(r, col)] = Complex64::new(0.0, 0.0);
                    sup.matrix[(col, col)] += Complex64::new(rate, 0.0);
                }
            }
        }
        Ok(sup)
    }
}

pub fn build_redfield_generator(
    basis: &Eigenbasis,
    ensemble: &EmitterEnsemble,
    baths: &BathSet,
) -> Result<Superoperator> {
    RedfieldKernel::new(basis, ensemble)?.generator(baths)
}
