//! Lindblad losses: cavity leakage and molecular radiative decay.
//!
//! Every jump operator here lowers a single excitation to the ground state,
//! so in the eigenbasis it has the form `L = |G⟩⟨u|`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{Eigenbasis, Superoperator};
use crate::error::{Error, Result};
use crate::model::{BasisIndex, CavityConfig, EmitterEnsemble};

/// Adds `Σ_k γ_k D[|0⟩⟨u_k|]` to `sup`, where
/// `D[L]ρ = LρL† - ½{L†L, ρ}` and every `u_k` is real.
fn add_lowering_dissipators(sup: &mut Superoperator, jumps: &[(f64, Vec<f64>)]) {
    let n = sup.dim();
    let mut k_total = DMatrix::<f64>::zeros(n, n);
    for (rate, u) in jumps {
        if *rate == 0.0 {
            continue;
        }
        // L ρ L† = |0⟩⟨u|ρ|u⟩⟨0|
        for c in 0..n {
            if u[c] == 0.0 {
                continue;
            }
            for d in 0..n {
                if u[d] != 0.0 {
                    sup.add_at((0, 0), (c, d), Complex64::new(rate * u[c] * u[d], 0.0));
                }
            }
        }
        for a in 0..n {
            for c in 0..n {
                k_total[(a, c)] += rate * u[a] * u[c];
            }
        }
    }
    // -½ K ρ - ½ ρ K
    for a in 0..n {
        for c in 0..n {
            let k = k_total[(a, c)];
            if k == 0.0 {
                continue;
            }
            let half = Complex64::new(-0.5 * k, 0.0);
            for b in 0..n {
                sup.add_at((a, b), (c, b), half);
                sup.add_at((b, c), (b, a), half);
            }
        }
    }
}

/// Cavity loss at rate κ on `a` and radiative decay on every `σ_n`.
pub fn build_lindblad_generator(
    ensemble: &EmitterEnsemble,
    cavity: &CavityConfig,
    basis: &Eigenbasis,
) -> Result<Superoperator> {
    let n = basis.dim();
    if n != ensemble.hilbert_dim() {
        return Err(Error::DimensionMismatch {
            expected: ensemble.hilbert_dim(),
            found: n,
        });
    }
    if !(cavity.loss_kappa >= 0.0) {
        return Err(Error::invalid("kappa_ev", "must be non-negative"));
    }
    let row = |site: usize| -> Vec<f64> { (0..n).map(|a| basis.vectors[(site, a)]).collect() };
    let mut jumps = vec![(cavity.loss_kappa, row(BasisIndex::Photon.index()))];
    for (i, e) in ensemble.entries().iter().enumerate() {
        if !(e.radiative_rate >= 0.0) {
            return Err(Error::invalid("radiative_rate", "must be non-negative"));
        }
        jumps.push((e.radiative_rate, row(BasisIndex::Molecule(i).index())));
    }
    let mut sup = Superoperator::zeros(n);
    add_lowering_dissipators(&mut sup, &jumps);
    Ok(sup)
}
