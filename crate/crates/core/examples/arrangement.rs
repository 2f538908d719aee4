//! Intermixed donors and acceptors in the fundamental mode against
//! separated ensembles in the second mode, at the same collective
//! couplings.
//!
//!     cargo run --release --example arrangement

use xfer::bath::BathSet;
use xfer::dynamics::{DriveParams, LiouvilleProblem};
use xfer::model::{Layout, ProfileKind, SystemParams};
use xfer::rates::{solve_network, RateNetwork};

fn main() -> xfer::Result<()> {
    let build = |layout, profile| -> xfer::Result<LiouvilleProblem> {
        let (e, c) = SystemParams {
            layout,
            profile,
            ..SystemParams::default()
        }
        .build()?;
        LiouvilleProblem::new(e, c)
    };
    let separated = build(Layout::Separated, ProfileKind::Second)?;
    let intermixed = build(Layout::Intermixed, ProfileKind::Fundamental)?;
    for (name, p) in [("separated", &separated), ("intermixed", &intermixed)] {
        let d = &p.decomposition;
        println!(
            "{name:>10}: Ω_D {:.4} Ω_A {:.4} eV, Σw² donors {:.4} acceptors {:.4}",
            d.collective_donor, d.collective_acceptor, d.dark_donor.inverse_participation, d.dark_acceptor.inverse_participation
        );
    }

    let drive = DriveParams::new(1e-4, separated.decomposition.energies[2])?;
    println!("\n ω_v𝒟   ω_v𝒜    T sep     T int     ΔT redfield  ΔT rate");
    for vd in [0.1, 0.194, 0.3] {
        for va in [0.13, 0.25, 0.414] {
            let baths = BathSet::new(0.013, 0.01, vd, va)?;
            let mut t = Vec::new();
            for p in [&separated, &intermixed] {
                let ss = p.steady_state(&baths, &drive)?;
                let net = RateNetwork::build(&p.decomposition, &baths, p.cavity.loss_kappa)?;
                t.push((ss.transfer_efficiency.unwrap_or(f64::NAN), solve_network(&net)?.transfer_efficiency));
            }
            println!(
                "{vd:.3}  {va:.3}   {:.5}   {:.5}   {:+.2e}    {:+.2e}",
                t[0].0,
                t[1].0,
                t[0].0 - t[1].0,
                t[0].1 - t[1].1
            );
        }
    }
    Ok(())
}
