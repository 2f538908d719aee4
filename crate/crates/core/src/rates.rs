//! Secular rate theory.
//!
//! Dropping the coupling between populations and coherences turns the
//! Redfield dynamics into a kinetic network on six levels: the ground state
//! `G`, the three polaritons, and the donor (`𝒟`) and acceptor (`𝒜`) dark
//! manifolds lumped into one level each.
//!
//! The closed-form rates use the collective-basis Hopfield coefficients of
//! [`PolaritonDecomposition`] together with the inverse participation
//! `q_ι = Σ_n w_n²` (`w_n = g_n²/Ω_ι²`) of each species. For uniform
//! couplings `q_ι = 1/N_ι` and
//!
//! * polariton β → polariton α: `Σ_ι b_βι² b_αι² S_ι(ω_β - ω_α) / N_ι`
//! * one dark state of species ι → polariton α: `b_αι² S_ι(ω_ι - ω_α) / N_ι`
//! * polariton α → dark manifold ι: `(N_ι - 1)/N_ι · b_αι² S_ι(ω_α - ω_ι)`
//!
//! For non-uniform couplings `1/N_ι` becomes `q_ι`, `1/N_ι` per dark state
//! becomes `(1 - q_ι)/(N_ι - 1)` and `(N_ι - 1)/N_ι` becomes `1 - q_ι`.
//! These are exactly the secular Redfield elements, summed over (or, for a
//! dark source, averaged over) the degenerate dark manifold.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::{DMatrix, DVector};
use serde::{Serialize, Serializer};

use crate::bath::BathSet;
use crate::error::{Error, Result};
use crate::model::Species;
use crate::polariton::{Component, Polariton, PolaritonDecomposition};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Level {
    Ground,
    Lower,
    DarkAcceptor,
    Middle,
    DarkDonor,
    Upper,
}

impl Level {
    pub const EXCITED: [Level; 5] = [
        Level::Lower,
        Level::DarkAcceptor,
        Level::Middle,
        Level::DarkDonor,
        Level::Upper,
    ];

    pub const fn label(self) -> &'static str {
        match self {
            Level::Ground => "G",
            Level::Lower => "LP",
            Level::DarkAcceptor => "A_dark",
            Level::Middle => "MP",
            Level::DarkDonor => "D_dark",
            Level::Upper => "UP",
        }
    }

    fn dark(species: Species) -> Level {
        match species {
            Species::Donor => Level::DarkDonor,
            Species::Acceptor => Level::DarkAcceptor,
        }
    }
}

impl From<Polariton> for Level {
    fn from(p: Polariton) -> Self {
        match p {
            Polariton::Lower => Level::Lower,
            Polariton::Middle => Level::Middle,
            Polariton::Upper => Level::Upper,
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

fn not_downhill(from: impl fmt::Display, to: impl fmt::Display) -> Error {
    Error::NotDownhill {
        from: from.to_string(),
        to: to.to_string(),
    }
}

/// Rate for `upper → lower` between two polaritons.
pub fn rate_polariton_to_polariton(
    lower: Polariton,
    upper: Polariton,
    decomposition: &PolaritonDecomposition,
    baths: &BathSet,
) -> Result<f64> {
    let gap = decomposition.energy(upper) - decomposition.energy(lower);
    if !(gap > 0.0) {
        return Err(not_downhill(upper.label(), lower.label()));
    }
    Ok([Species::Donor, Species::Acceptor]
        .into_iter()
        .map(|s| {
            let c = Component::from(s);
            decomposition.content(upper, c)
                * decomposition.content(lower, c)
                * decomposition.dark(s).inverse_participation
                * baths.get(s).eval(gap)
        })
        .sum())
}

/// Rate from a single dark state of `dark` species down to `target`
/// (averaged over the manifold). Zero when the manifold is empty.
pub fn rate_dark_to_polariton(
    dark: Species,
    target: Polariton,
    decomposition: &PolaritonDecomposition,
    baths: &BathSet,
) -> Result<f64> {
    let manifold = decomposition.dark(dark);
    let gap = manifold.energy - decomposition.energy(target);
    if !(gap > 0.0) {
        return Err(not_downhill(Level::dark(dark), target.label()));
    }
    if manifold.dimension == 0 {
        return Ok(0.0);
    }
    let per_state = (1.0 - manifold.inverse_participation) / manifold.dimension as f64;
    Ok(per_state * decomposition.content(target, dark.into()) * baths.get(dark).eval(gap))
}

/// Total rate from `source` into the whole `dark` manifold below it.
pub fn rate_polariton_to_dark(
    source: Polariton,
    dark: Species,
    decomposition: &PolaritonDecomposition,
    baths: &BathSet,
) -> Result<f64> {
    let manifold = decomposition.dark(dark);
    let gap = decomposition.energy(source) - manifold.energy;
    if !(gap > 0.0) {
        return Err(not_downhill(source.label(), Level::dark(dark)));
    }
    if manifold.dimension == 0 {
        return Ok(0.0);
    }
    let weight = 1.0 - manifold.inverse_participation;
    Ok(weight * decomposition.content(source, dark.into()) * baths.get(dark).eval(gap))
}

/// The nine vibration-driven rates, named `to_from`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransitionRates {
    pub mp_up: f64,
    pub lp_mp: f64,
    pub lp_up: f64,
    pub mp_ddark: f64,
    pub lp_ddark: f64,
    pub lp_adark: f64,
    pub ddark_up: f64,
    pub adark_up: f64,
    pub adark_mp: f64,
}

impl TransitionRates {
    /// Requires the level ordering `LP < 𝒜 < MP < 𝒟 < UP`, which holds for
    /// any coupled system with `ω_A < ω_D`.
    pub fn compute(decomposition: &PolaritonDecomposition, baths: &BathSet) -> Result<Self> {
        use Polariton::*;
        use Species::*;
        let d = decomposition;
        Ok(Self {
            mp_up: rate_polariton_to_polariton(Middle, Upper, d, baths)?,
            lp_mp: rate_polariton_to_polariton(Lower, Middle, d, baths)?,
            lp_up: rate_polariton_to_polariton(Lower, Upper, d, baths)?,
            mp_ddark: rate_dark_to_polariton(Donor, Middle, d, baths)?,
            lp_ddark: rate_dark_to_polariton(Donor, Lower, d, baths)?,
            lp_adark: rate_dark_to_polariton(Acceptor, Lower, d, baths)?,
            ddark_up: rate_polariton_to_dark(Upper, Donor, d, baths)?,
            adark_up: rate_polariton_to_dark(Upper, Acceptor, d, baths)?,
            adark_mp: rate_polariton_to_dark(Middle, Acceptor, d, baths)?,
        })
    }

    pub const LABELS: [&'static str; 9] = [
        "mp_up", "lp_mp", "lp_up", "mp_ddark", "lp_ddark", "lp_adark", "ddark_up", "adark_up", "adark_mp",
    ];

    pub fn as_array(&self) -> [(&'static str, f64); 9] {
        [
            ("mp_up", self.mp_up),
            ("lp_mp", self.lp_mp),
            ("lp_up", self.lp_up),
            ("mp_ddark", self.mp_ddark),
            ("lp_ddark", self.lp_ddark),
            ("lp_adark", self.lp_adark),
            ("ddark_up", self.ddark_up),
            ("adark_up", self.adark_up),
            ("adark_mp", self.adark_mp),
        ]
    }
}

fn serialize_level_map<S: Serializer, V: Serialize>(
    map: &BTreeMap<Level, V>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_map(map.iter().map(|(k, v)| (k.label(), v)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Transition {
    pub from: Level,
    pub to: Level,
    pub rate: f64,
}

/// Lumped kinetic network. Dark manifolds decay with the per-state rates
/// and are fed with the total polariton → manifold rates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateNetwork {
    pub transitions: Vec<Transition>,
    /// Incoherent pump into the upper polariton.
    pub pump: f64,
    /// Total loss of each excited level to the ground state.
    #[serde(serialize_with = "serialize_level_map")]
    pub loss: BTreeMap<Level, f64>,
    /// Cavity-leakage part of each polariton's loss (`b_αC² κ`).
    #[serde(serialize_with = "serialize_level_map")]
    pub cavity_loss: BTreeMap<Level, f64>,
    pub rates: TransitionRates,
    /// Cavity contents `b_αC²` for LP, MP, UP.
    pub cavity_content: [f64; 3],
}

impl RateNetwork {
    pub fn build(decomposition: &PolaritonDecomposition, baths: &BathSet, kappa: f64) -> Result<Self> {
        Self::with_rates(decomposition, TransitionRates::compute(decomposition, baths)?, kappa)
    }

    pub fn with_rates(decomposition: &PolaritonDecomposition, rates: TransitionRates, kappa: f64) -> Result<Self> {
        if !(kappa >= 0.0) {
            return Err(Error::invalid("kappa_ev", "must be non-negative"));
        }
        let d = decomposition;
        let gamma_d = d.dark_donor.radiative_rate;
        let gamma_a = d.dark_acceptor.radiative_rate;
        let mut loss = BTreeMap::new();
        let mut cavity_loss = BTreeMap::new();
        for p in Polariton::ALL {
            let cav = d.content(p, Component::Cavity) * kappa;
            let rad = d.content(p, Component::Donor) * gamma_d + d.content(p, Component::Acceptor) * gamma_a;
            cavity_loss.insert(Level::from(p), cav);
            loss.insert(Level::from(p), cav + rad);
        }
        let has_dd = d.dark_donor.dimension > 0;
        let has_ad = d.dark_acceptor.dimension > 0;
        if has_dd {
            loss.insert(Level::DarkDonor, gamma_d);
        }
        if has_ad {
            loss.insert(Level::DarkAcceptor, gamma_a);
        }

        let mut transitions = vec![
            Transition { from: Level::Upper, to: Level::Middle, rate: rates.mp_up },
            Transition { from: Level::Upper, to: Level::Lower, rate: rates.lp_up },
            Transition { from: Level::Middle, to: Level::Lower, rate: rates.lp_mp },
        ];
        if has_dd {
            transitions.extend([
                Transition { from: Level::Upper, to: Level::DarkDonor, rate: rates.ddark_up },
                Transition { from: Level::DarkDonor, to: Level::Middle, rate: rates.mp_ddark },
                Transition { from: Level::DarkDonor, to: Level::Lower, rate: rates.lp_ddark },
            ]);
        }
        if has_ad {
            transitions.extend([
                Transition { from: Level::Upper, to: Level::DarkAcceptor, rate: rates.adark_up },
                Transition { from: Level::Middle, to: Level::DarkAcceptor, rate: rates.adark_mp },
                Transition { from: Level::DarkAcceptor, to: Level::Lower, rate: rates.lp_adark },
            ]);
        }
        if transitions.iter().any(|t| !(t.rate >= 0.0)) {
            return Err(Error::invalid("rate", "transition rates must be non-negative"));
        }
        Ok(Self {
            transitions,
            pump: 1.0,
            loss,
            cavity_loss,
            rates,
            cavity_content: [
                d.content(Polariton::Lower, Component::Cavity),
                d.content(Polariton::Middle, Component::Cavity),
                d.content(Polariton::Upper, Component::Cavity),
            ],
        })
    }

    pub fn levels(&self) -> Vec<Level> {
        Level::EXCITED
            .into_iter()
            .filter(|l| self.loss.contains_key(l))
            .collect()
    }

    pub fn rate(&self, from: Level, to: Level) -> f64 {
        self.transitions
            .iter()
            .filter(|t| t.from == from && t.to == to)
            .map(|t| t.rate)
            .sum()
    }

    pub fn total_outflow(&self, level: Level) -> f64 {
        self.loss.get(&level).copied().unwrap_or(0.0)
            + self
                .transitions
                .iter()
                .filter(|t| t.from == level)
                .map(|t| t.rate)
                .sum::<f64>()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RouteFluxes {
    /// UP → 𝒟 → MP → 𝒜 → LP
    pub red: f64,
    /// UP → 𝒜 → LP
    pub green: f64,
    /// UP → MP → LP
    pub purple: f64,
    /// UP → LP
    pub grey: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NetworkSolution {
    #[serde(serialize_with = "serialize_level_map")]
    pub populations: BTreeMap<Level, f64>,
    pub transfer_efficiency: f64,
    pub routes: RouteFluxes,
    /// Total flow into the ground state.
    pub outflow: f64,
}

impl NetworkSolution {
    pub fn population(&self, level: Level) -> f64 {
        self.populations.get(&level).copied().unwrap_or(0.0)
    }
}

pub fn solve_network(network: &RateNetwork) -> Result<NetworkSolution> {
    if !(network.pump > 0.0) {
        return Err(Error::invalid("pump", "must be positive"));
    }
    let levels = network.levels();
    let n = levels.len();
    let pos = |l: Level| levels.iter().position(|x| *x == l);
    let mut a = DMatrix::<f64>::zeros(n, n);
    for (i, &l) in levels.iter().enumerate() {
        let out = network.total_outflow(l);
        if !(out > 0.0) {
            return Err(Error::SingularNetwork(l.label().into()));
        }
        a[(i, i)] = out;
    }
    for t in &network.transitions {
        if let (Some(i), Some(j)) = (pos(t.to), pos(t.from)) {
            a[(i, j)] -= t.rate;
        }
    }
    let mut rhs = DVector::zeros(n);
    let up = pos(Level::Upper).ok_or_else(|| Error::SingularNetwork("UP".into()))?;
    rhs[up] = network.pump;
    let x = a
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::SingularNetwork("balance matrix".into()))?;

    let populations: BTreeMap<Level, f64> = levels.iter().copied().zip(x.iter().copied()).collect();
    let pop = |l: Level| populations.get(&l).copied().unwrap_or(0.0);
    let emission: Vec<f64> = [Level::Lower, Level::Middle, Level::Upper]
        .iter()
        .zip(network.cavity_content)
        .map(|(&l, c)| c * pop(l))
        .collect();
    let total: f64 = emission.iter().sum();
    if !(total > 0.0) {
        return Err(Error::NoEmission);
    }
    let outflow = levels.iter().map(|&l| network.loss[&l] * pop(l)).sum();

    let branch = |from: Level, to: Level| -> f64 {
        let out = network.total_outflow(from);
        if out > 0.0 {
            network.rate(from, to) / out
        } else {
            0.0
        }
    };
    use Level::*;
    let routes = RouteFluxes {
        red: network.pump
            * branch(Upper, DarkDonor)
            * branch(DarkDonor, Middle)
            * branch(Middle, DarkAcceptor)
            * branch(DarkAcceptor, Lower),
        green: network.pump * branch(Upper, DarkAcceptor) * branch(DarkAcceptor, Lower),
        purple: network.pump * branch(Upper, Middle) * branch(Middle, Lower),
        grey: network.pump * branch(Upper, Lower),
    };

    Ok(NetworkSolution {
        populations,
        transfer_efficiency: emission[0] / total,
        routes,
        outflow,
    })
}
