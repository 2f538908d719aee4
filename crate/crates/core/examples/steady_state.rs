//! Driven-damped steady state of the baseline system from the full
//! Bloch-Redfield master equation.
//!
//!     cargo run --release --example steady_state [n_per_species]

use xfer::bath::BathSet;
use xfer::dynamics::{DriveParams, LiouvilleProblem};
use xfer::model::SystemParams;

fn main() -> xfer::Result<()> {
    let n = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(16);
    let params = SystemParams {
        n_donors: n,
        n_acceptors: n,
        ..SystemParams::default()
    };
    let (ensemble, cavity) = params.build()?;
    let problem = LiouvilleProblem::new(ensemble, cavity)?;
    let d = &problem.decomposition;
    let gaps = d.resonance_gaps();
    println!("dimension {}", problem.basis.dim());
    println!("ω_LP, ω_MP, ω_UP = {:.4}, {:.4}, {:.4} eV", d.energies[0], d.energies[1], d.energies[2]);
    println!(
        "gaps: UP-D {:.4}, UP-A {:.4}, UP-LP {:.4}, MP-A {:.4} eV",
        gaps.up_to_donor_dark, gaps.up_to_acceptor_dark, gaps.up_to_lp, gaps.mp_to_acceptor_dark
    );

    // Vibrational peaks on the UP→𝒟 and MP→𝒜 gaps, laser on the UP.
    let baths = BathSet::new(0.013, 0.01, gaps.up_to_donor_dark, gaps.mp_to_acceptor_dark)?;
    let drive = DriveParams::new(1e-4, d.energies[2])?;
    let ss = problem.steady_state(&baths, &drive)?;

    let [l, m, u] = ss.polariton_populations;
    println!("populations: LP {l:.3e}  MP {m:.3e}  UP {u:.3e}");
    println!(
        "dark: 𝒟 {:.3e}  𝒜 {:.3e}   ground {:.6}",
        ss.dark_donor_population, ss.dark_acceptor_population, ss.ground_population
    );
    println!("residual {:.2e}, {:?}", ss.residual_norm, ss.physicality());
    match ss.transfer_efficiency {
        Some(t) => println!("T = {t:.4}"),
        None => println!("no emission"),
    }
    Ok(())
}
