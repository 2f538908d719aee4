//! End-to-end acceptance checks. Runs without the libtest harness so that
//! every check prints one PASS/FAIL line regardless of output capture.

use std::io::Write;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use xfer::bath::BathSet;
use xfer::config::{parse_config, GridSpec, DEFAULT_MAP_GRID};
use xfer::dynamics::{build_redfield_generator, DriveParams, Eigenbasis, LiouvilleProblem, Physicality, Superoperator};
use xfer::model::{
    build_hamiltonian, CavityConfig, Emitter, EmitterEnsemble, Layout, ModeProfile, ProfileKind, Species, SystemParams,
};
use xfer::polariton::{decompose, reduce_to_bright, PolaritonDecomposition, ResonanceGaps};
use xfer::rates::{solve_network, RateNetwork, TransitionRates};
use xfer::sweep::{run_sweep, SweepOutput};

struct Outcome {
    pass: bool,
    detail: String,
}

/// Running totals for the physicality check, fed by every solve below.
#[derive(Default)]
struct Audit {
    states: usize,
    worst_trace: f64,
    worst_hermiticity: f64,
    min_eigenvalue: f64,
    networks: usize,
    worst_flux: f64,
}

impl Audit {
    fn state(&mut self, p: &Physicality) {
        self.states += 1;
        self.worst_trace = self.worst_trace.max(p.trace_error);
        self.worst_hermiticity = self.worst_hermiticity.max(p.hermiticity_error);
        self.min_eigenvalue = self.min_eigenvalue.min(p.min_eigenvalue);
    }

    fn flux(&mut self, err: f64) {
        self.networks += 1;
        self.worst_flux = self.worst_flux.max(err);
    }

    fn sweep(&mut self, out: &SweepOutput) {
        for p in &out.manifest.points {
            if let Some(ph) = &p.checks.physicality {
                self.state(ph);
            }
            if let Some(f) = p.checks.flux_error {
                self.flux(f);
            }
        }
    }
}

fn report(id: usize, name: &str, elapsed: Duration, outcome: &Outcome) {
    let mut out = std::io::stdout().lock();
    writeln!(
        out,
        "criterion {id:>2} {name}: {} ({}; {:.1} s)",
        if outcome.pass { "PASS" } else { "FAIL" },
        outcome.detail,
        elapsed.as_secs_f64()
    )
    .unwrap();
    out.flush().unwrap();
}

fn baseline() -> LiouvilleProblem {
    let (e, c) = SystemParams::default().build().unwrap();
    LiouvilleProblem::new(e, c).unwrap()
}

fn resonant_baths(d: &PolaritonDecomposition) -> BathSet {
    let g = d.resonance_gaps();
    BathSet::new(0.013, 0.01, g.up_to_donor_dark, g.mp_to_acceptor_dark).unwrap()
}

fn random_ensemble(rng: &mut ChaCha8Rng, max_total: usize) -> (EmitterEnsemble, CavityConfig) {
    let n_d = rng.gen_range(1..max_total);
    let n_a = rng.gen_range(1..=max_total - n_d);
    let omega_d = rng.gen_range(1.95..2.3);
    let omega_a = rng.gen_range(1.7..omega_d - 0.05);
    let mut entries = Vec::new();
    for (species, count, omega) in [(Species::Donor, n_d, omega_d), (Species::Acceptor, n_a, omega_a)] {
        let zeros = rng.gen_bool(0.3);
        for k in 0..count {
            // The first molecule of each species always couples.
            let g = if zeros && k > 0 && rng.gen_bool(0.25) {
                0.0
            } else {
                rng.gen_range(0.001..0.08)
            };
            entries.push(Emitter {
                species,
                position: rng.gen_range(0.0..100.0),
                transition_frequency: omega,
                coupling_g: g,
                radiative_rate: 1.3e-6,
            });
        }
    }
    let cav = CavityConfig::new(rng.gen_range(1.7..2.4), 0.01, ModeProfile::Uniform, 100.0, 10.0).unwrap();
    (EmitterEnsemble::new(entries).unwrap(), cav)
}

/// Full spectrum with the ground state and the dark manifolds removed.
fn bright_part(ens: &EmitterEnsemble, cav: &CavityConfig) -> Vec<f64> {
    let mut eig = build_hamiltonian(ens, cav).unwrap().eigenvalues();
    let ground = eig.iter().position(|e| e.abs() < 1e-12).unwrap();
    eig.remove(ground);
    for species in [Species::Donor, Species::Acceptor] {
        let omega = ens.frequency(species).unwrap();
        for _ in 1..ens.count(species) {
            let k = (0..eig.len())
                .min_by(|&a, &b| (eig[a] - omega).abs().total_cmp(&(eig[b] - omega).abs()))
                .unwrap();
            eig.remove(k);
        }
    }
    eig
}

fn criterion_1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let (ens, cav) = random_ensemble(&mut rng, 64);
        let m = reduce_to_bright(&ens, &cav).unwrap();
        let mut reduced: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
        reduced.sort_by(f64::total_cmp);
        let full = bright_part(&ens, &cav);
        assert_eq!(full.len(), 3);
        for (a, b) in reduced.iter().zip(&full) {
            worst = worst.max((a - b).abs());
        }
    }
    Outcome {
        pass: worst <= 1e-10,
        detail: format!("max |Δω| = {worst:.2e} eV over 50 systems"),
    }
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let rescale = |g: Vec<f64>| -> Vec<f64> {
        let norm = g.iter().map(|x| x * x).sum::<f64>().sqrt();
        g.iter().map(|x| x * 0.16 / norm).collect()
    };
    let build = |gd: Vec<f64>, ga: Vec<f64>| -> Vec<f64> {
        let mut entries = Vec::new();
        for (species, g, omega) in [(Species::Donor, gd, 2.1), (Species::Acceptor, ga, 1.88)] {
            for (k, g) in g.into_iter().enumerate() {
                entries.push(Emitter {
                    species,
                    position: k as f64,
                    transition_frequency: omega,
                    coupling_g: g,
                    radiative_rate: 1.3e-6,
                });
            }
        }
        let cav = CavityConfig::new(2.1, 0.01, ModeProfile::Uniform, 100.0, 10.0).unwrap();
        build_hamiltonian(&EmitterEnsemble::new(entries).unwrap(), &cav)
            .unwrap()
            .eigenvalues()
    };
    let reference = build(rescale(vec![1.0; 16]), rescale(vec![1.0; 16]));
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let gd = rescale((0..16).map(|_| rng.gen_range(0.0..1.0)).collect());
        let ga = rescale((0..16).map(|_| rng.gen_range(0.0..1.0)).collect());
        for (a, b) in build(gd, ga).iter().zip(&reference) {
            worst = worst.max((a - b).abs() / b.abs().max(1e-300));
        }
    }
    Outcome {
        pass: worst <= 1e-10,
        detail: format!("max relative deviation {worst:.2e} over 20 profiles"),
    }
}

/// Secular rates read off the Redfield generator, lumped the same way as
/// the closed-form rates: sums into a dark manifold, per-state averages
/// out of it.
fn secular_rates(
    gen: &Superoperator,
    basis: &Eigenbasis,
    d: &PolaritonDecomposition,
    ens: &EmitterEnsemble,
) -> (TransitionRates, f64) {
    let find = |e: f64| -> Vec<usize> {
        (1..basis.dim())
            .filter(|&k| (basis.energies[k] - e).abs() < 1e-9)
            .collect()
    };
    let [l, m, u] = [0, 1, 2].map(|k| {
        let idx = find(d.energies[k]);
        assert_eq!(idx.len(), 1);
        idx[0]
    });
    let dd = find(ens.frequency(Species::Donor).unwrap());
    let da = find(ens.frequency(Species::Acceptor).unwrap());
    let r = |to: usize, from: usize| gen.entry((to, to), (from, from)).re;
    let into = |set: &[usize], from: usize| set.iter().map(|&k| r(k, from)).sum::<f64>();
    let out_of = |to: usize, set: &[usize]| set.iter().map(|&k| r(to, k)).sum::<f64>() / set.len() as f64;
    // Spread of per-state rates out of each dark manifold.
    let spread = |to: usize, set: &[usize]| -> f64 {
        let mean = out_of(to, set);
        set.iter()
            .map(|&k| (r(to, k) - mean).abs() / mean.abs().max(1e-300))
            .fold(0.0, f64::max)
    };
    let rates = TransitionRates {
        mp_up: r(m, u),
        lp_mp: r(l, m),
        lp_up: r(l, u),
        mp_ddark: out_of(m, &dd),
        lp_ddark: out_of(l, &dd),
        lp_adark: out_of(l, &da),
        ddark_up: into(&dd, u),
        adark_up: into(&da, u),
        adark_mp: into(&da, m),
    };
    let uniformity = spread(m, &dd).max(spread(l, &dd)).max(spread(l, &da));
    (rates, uniformity)
}

fn criterion_3() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut worst_uniform_spread: f64 = 0.0;
    for n in [2, 4, 8, 16] {
        for profile in [ProfileKind::Uniform, ProfileKind::Second] {
            let (ens, cav) = SystemParams {
                n_donors: n,
                n_acceptors: n,
                profile,
                ..SystemParams::default()
            }
            .build()
            .unwrap();
            let d = decompose(&ens, &cav).unwrap();
            let basis = Eigenbasis::new(&build_hamiltonian(&ens, &cav).unwrap()).unwrap();
            // Resonant baths, plus broad ones so every channel is sizeable.
            for baths in [resonant_baths(&d), BathSet::new(0.013, 0.08, 0.2, 0.15).unwrap()] {
                let gen = build_redfield_generator(&basis, &ens, &baths).unwrap();
                let (numeric, spread) = secular_rates(&gen, &basis, &d, &ens);
                let analytic = TransitionRates::compute(&d, &baths).unwrap();
                for ((_, a), (_, b)) in analytic.as_array().iter().zip(numeric.as_array()) {
                    if *a != 0.0 || b != 0.0 {
                        worst = worst.max((a - b).abs() / a.abs().max(b.abs()));
                    }
                }
                if profile == ProfileKind::Uniform && n > 1 {
                    worst_uniform_spread = worst_uniform_spread.max(spread);
                }
            }
        }
    }
    Outcome {
        pass: worst <= 1e-8 && worst_uniform_spread <= 1e-8,
        detail: format!(
            "max relative deviation {worst:.2e}; per-dark-state spread (uniform) {worst_uniform_spread:.2e}"
        ),
    }
}

fn criterion_4() -> Outcome {
    let rates = |n: usize| -> TransitionRates {
        let (ens, cav) = SystemParams {
            n_donors: n,
            n_acceptors: n,
            profile: ProfileKind::Uniform,
            ..SystemParams::default()
        }
        .build()
        .unwrap();
        let d = decompose(&ens, &cav).unwrap();
        // Fixed baths: the uniform spectrum does not depend on N.
        TransitionRates::compute(&d, &BathSet::new(0.013, 0.01, 0.194, 0.130).unwrap()).unwrap()
    };
    let mut worst_inverse: f64 = 0.0;
    let mut worst_dark: f64 = 0.0;
    for n in [2, 4, 8, 16, 32, 64] {
        let (a, b) = (rates(n), rates(2 * n));
        for (x, y) in [
            (a.lp_up, b.lp_up),
            (a.lp_mp, b.lp_mp),
            (a.mp_up, b.mp_up),
            (a.mp_ddark, b.mp_ddark),
            (a.lp_ddark, b.lp_ddark),
            (a.lp_adark, b.lp_adark),
        ] {
            worst_inverse = worst_inverse.max((y / x - 0.5).abs());
        }
        let law = |k: usize| (k as f64 - 1.0) / k as f64;
        let expected = law(2 * n) / law(n);
        for (x, y) in [(a.ddark_up, b.ddark_up), (a.adark_up, b.adark_up), (a.adark_mp, b.adark_mp)] {
            worst_dark = worst_dark.max((y / x - expected).abs());
        }
    }
    // Large-N behaviour through the rate engine alone.
    let (big, small) = (rates(10_000), rates(16));
    let big_ratio = big.ddark_up / small.ddark_up;
    let big_expected = (9_999.0 / 10_000.0) / (15.0 / 16.0);
    Outcome {
        pass: worst_inverse <= 1e-6 && worst_dark <= 1e-6 && (big_ratio / big_expected - 1.0).abs() <= 1e-6,
        detail: format!(
            "1/N ratio error {worst_inverse:.2e}; (N-1)/N ratio error {worst_dark:.2e}; Γ_DU(10^4)/Γ_DU(16) = {big_ratio:.6}"
        ),
    }
}

/// Row-major T values on a `vd × va` grid (T[i][j] at (vd[i], va[j])).
struct Map {
    vd: Vec<f64>,
    va: Vec<f64>,
    t: Vec<Vec<f64>>,
}

impl Map {
    fn from_sweep(out: &SweepOutput, column: usize) -> Self {
        let mut vd: Vec<f64> = Vec::new();
        let mut va: Vec<f64> = Vec::new();
        for row in &out.rows {
            if !vd.contains(&row[0]) {
                vd.push(row[0]);
            }
            if !va.contains(&row[1]) {
                va.push(row[1]);
            }
        }
        let t = out.rows.chunks(va.len()).map(|c| c.iter().map(|r| r[column]).collect()).collect();
        Map { vd, va, t }
    }

    fn row_means(&self) -> Vec<f64> {
        self.t.iter().map(|r| r.iter().sum::<f64>() / r.len() as f64).collect()
    }

    fn column_means(&self) -> Vec<f64> {
        (0..self.va.len())
            .map(|j| self.t.iter().map(|r| r[j]).sum::<f64>() / self.t.len() as f64)
            .collect()
    }

    fn argmax(&self) -> (usize, usize) {
        let mut best = (0, 0);
        for i in 0..self.vd.len() {
            for j in 0..self.va.len() {
                if self.t[i][j] > self.t[best.0][best.1] {
                    best = (i, j);
                }
            }
        }
        best
    }
}

fn step(axis: &[f64]) -> f64 {
    axis[1] - axis[0]
}

/// Whether `profile` has a strict local maximum within one grid step of
/// `target`.
fn ridge_near(axis: &[f64], profile: &[f64], target: f64) -> bool {
    let h = step(axis) * (1.0 + 1e-9);
    (1..profile.len() - 1).any(|k| {
        (axis[k] - target).abs() <= h && profile[k] > profile[k - 1] && profile[k] > profile[k + 1]
    })
}

fn argmax(v: &[f64]) -> usize {
    (0..v.len()).max_by(|&a, &b| v[a].total_cmp(&v[b])).unwrap()
}

fn criterion_5(audit: &mut Audit) -> Outcome {
    let cfg = parse_config("[sweep]\nkind = \"vibrational_map\"\nengine = \"both\"\nworkers = 4\n").unwrap();
    let out = run_sweep(&cfg).unwrap();
    audit.sweep(&out);
    let gaps: ResonanceGaps = out.manifest.system.unwrap().resonance_gaps;
    let map = Map::from_sweep(&out, 2);
    if out.failures() > 0 || map.vd.len() != 39 || map.va.len() != 39 {
        return Outcome {
            pass: false,
            detail: format!("{} failed points", out.failures()),
        };
    }
    let (rows, cols) = (map.row_means(), map.column_means());
    let h = step(&map.vd) * (1.0 + 1e-9);
    let a = ridge_near(&map.va, &cols, gaps.up_to_acceptor_dark);
    let b = ridge_near(&map.va, &cols, gaps.up_to_lp) && ridge_near(&map.vd, &rows, gaps.up_to_lp);
    let c = (map.vd[argmax(&rows)] - gaps.up_to_donor_dark).abs() <= h;
    let (i, j) = map.argmax();
    let d = (map.vd[i] - gaps.up_to_donor_dark).abs() <= h && (map.va[j] - gaps.mp_to_acceptor_dark).abs() <= h;
    Outcome {
        pass: a && b && c && d,
        detail: format!(
            "(a) {a} (b) {b} (c) {c} (d) {d}; max T = {:.4} at ({:.3}, {:.3}) eV",
            map.t[i][j], map.vd[i], map.va[j]
        ),
    }
}

fn criterion_6(audit: &mut Audit) -> Outcome {
    let grid = GridSpec::Range {
        start: 0.03,
        stop: 0.60,
        points: 21,
    };
    let text = format!(
        "[sweep]\nkind = \"vibrational_map\"\nengine = \"both\"\nworkers = 4\ngrid_vd = {}\ngrid_va = {}\n",
        toml_grid(&grid),
        toml_grid(&grid)
    );
    let out = run_sweep(&parse_config(&text).unwrap()).unwrap();
    audit.sweep(&out);
    let worst = out
        .rows
        .iter()
        .map(|r| (r[2] - r[3]).abs())
        .fold(0.0, |a: f64, b| if b.is_nan() { f64::INFINITY } else { a.max(b) });
    Outcome {
        pass: out.failures() == 0 && out.rows.len() == 441 && worst <= 0.05,
        detail: format!("max |T_redfield - T_rate| = {worst:.4} over {} points", out.rows.len()),
    }
}

fn toml_grid(g: &GridSpec) -> String {
    match g {
        GridSpec::Range { start, stop, points } => format!("{{ start = {start}, stop = {stop}, points = {points} }}"),
        GridSpec::List(v) => format!("{v:?}"),
    }
}

fn criterion_7(audit: &mut Audit) -> Outcome {
    let full = DEFAULT_MAP_GRID.values();
    let sub: Vec<f64> = [3, 11, 19, 27, 35].iter().map(|&k| full[k]).collect();
    let separated = baseline();
    let (e, c) = SystemParams {
        layout: Layout::Intermixed,
        profile: ProfileKind::Fundamental,
        ..SystemParams::default()
    }
    .build()
    .unwrap();
    let intermixed = LiouvilleProblem::new(e, c).unwrap();
    let collective = |p: &LiouvilleProblem| (p.decomposition.collective_donor, p.decomposition.collective_acceptor);
    let (cs, ci) = (collective(&separated), collective(&intermixed));
    assert!((cs.0 - ci.0).abs() < 1e-12 && (cs.1 - ci.1).abs() < 1e-12);
    let drive = DriveParams::new(1e-4, separated.decomposition.energies[2]).unwrap();
    let (mut worst_redfield, mut worst_rate): (f64, f64) = (0.0, 0.0);
    for &vd in &sub {
        for &va in &sub {
            let baths = BathSet::new(0.013, 0.01, vd, va).unwrap();
            let mut t = [[0.0; 2]; 2];
            for (k, p) in [&separated, &intermixed].into_iter().enumerate() {
                let ss = p.steady_state(&baths, &drive).unwrap();
                audit.state(&ss.physicality());
                t[k][0] = ss.transfer_efficiency.unwrap();
                let net = RateNetwork::build(&p.decomposition, &baths, p.cavity.loss_kappa).unwrap();
                let sol = solve_network(&net).unwrap();
                audit.flux((sol.outflow - net.pump).abs() / net.pump);
                t[k][1] = sol.transfer_efficiency;
            }
            worst_redfield = worst_redfield.max((t[0][0] - t[1][0]).abs());
            worst_rate = worst_rate.max((t[0][1] - t[1][1]).abs());
        }
    }
    let q = |p: &LiouvilleProblem| p.decomposition.dark_donor.inverse_participation;
    Outcome {
        pass: worst_redfield <= 1e-6 && worst_rate <= 1e-6,
        detail: format!(
            "max |ΔT| redfield {worst_redfield:.2e}, rate {worst_rate:.2e}; participation Σw² separated {:.5} vs intermixed {:.5}",
            q(&separated),
            q(&intermixed)
        ),
    }
}

fn criterion_8(audit: &mut Audit) -> Outcome {
    let (e, c) = SystemParams {
        kappa_ev: 1e-4,
        ..SystemParams::default()
    }
    .build()
    .unwrap();
    let p = LiouvilleProblem::new(e, c).unwrap();
    let baths = resonant_baths(&p.decomposition);
    // Keep the drive within the weak-drive bound Ω_P ≤ κ/10.
    let drive = DriveParams::new(1e-5, p.decomposition.energies[2]).unwrap();
    let ss = p.steady_state(&baths, &drive).unwrap();
    audit.state(&ss.physicality());
    let t_redfield = ss.transfer_efficiency.unwrap();
    let net = RateNetwork::build(&p.decomposition, &baths, 1e-4).unwrap();
    let sol = solve_network(&net).unwrap();
    audit.flux((sol.outflow - net.pump).abs() / net.pump);
    Outcome {
        pass: t_redfield > 0.95 && sol.transfer_efficiency > 0.95,
        detail: format!("T_redfield = {t_redfield:.4}, T_rate = {:.4}", sol.transfer_efficiency),
    }
}

fn criterion_10(audit: &mut Audit) -> Outcome {
    let p = baseline();
    let baths = resonant_baths(&p.decomposition);
    let up = p.decomposition.energies[2];
    let mut ts = Vec::new();
    for amplitude in [1e-5, 2e-5, 5e-5, 1e-4, 2e-4, 5e-4, 1e-3] {
        let ss = p.steady_state(&baths, &DriveParams::new(amplitude, up).unwrap()).unwrap();
        audit.state(&ss.physicality());
        ts.push(ss.transfer_efficiency.unwrap());
    }
    let spread = ts.iter().cloned().fold(f64::MIN, f64::max) - ts.iter().cloned().fold(f64::MAX, f64::min);
    Outcome {
        pass: spread < 1e-3,
        detail: format!("T spread {spread:.2e} over Ω_P ∈ [1e-5, 1e-3] eV (T ≈ {:.4})", ts[0]),
    }
}

fn main() {
    let mut audit = Audit::default();
    let mut failed = Vec::new();
    let mut run = |id: usize, name: &str, limit: Option<f64>, f: &mut dyn FnMut(&mut Audit) -> Outcome| {
        let start = Instant::now();
        let mut outcome = f(&mut audit);
        let elapsed = start.elapsed();
        if let Some(limit) = limit {
            if elapsed.as_secs_f64() > limit {
                outcome.pass = false;
                outcome.detail += &format!("; exceeded {limit} s");
            }
        }
        report(id, name, elapsed, &outcome);
        if !outcome.pass {
            failed.push(id);
        }
    };
    run(1, "bright-reduction equivalence", Some(10.0), &mut |_| criterion_1());
    run(2, "Rabi-only dependence", Some(5.0), &mut |_| criterion_2());
    run(3, "analytic-rate oracle", Some(60.0), &mut |_| criterion_3());
    run(4, "scaling laws", Some(30.0), &mut |_| criterion_4());
    run(5, "vibrational map structure", Some(900.0), &mut criterion_5);
    run(6, "secular validity", Some(900.0), &mut criterion_6);
    run(7, "arrangement independence", Some(120.0), &mut criterion_7);
    run(8, "near-unity transfer", Some(10.0), &mut criterion_8);
    run(10, "weak-drive invariance", Some(10.0), &mut criterion_10);
    let physical = audit.worst_trace <= 1e-10 && audit.worst_hermiticity <= 1e-12 && audit.min_eigenvalue >= -1e-10;
    let nine = Outcome {
        pass: physical && audit.worst_flux <= 1e-12 && audit.states > 0 && audit.networks > 0,
        detail: format!(
            "{} states: trace err {:.1e}, hermiticity err {:.1e}, min eigenvalue {:.1e}; {} networks: flux err {:.1e}",
            audit.states, audit.worst_trace, audit.worst_hermiticity, audit.min_eigenvalue, audit.networks, audit.worst_flux
        ),
    };
    report(9, "physicality", Duration::ZERO, &nine);
    if !nine.pass {
        failed.push(9);
    }
    if !failed.is_empty() {
        failed.sort();
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
