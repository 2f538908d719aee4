//! Secular rate theory: the nine vibration-driven rates, the kinetic
//! network they define and the flux carried by each decay route.
//!
//!     cargo run --example rate_network

use xfer::bath::BathSet;
use xfer::model::SystemParams;
use xfer::polariton::decompose;
use xfer::rates::{solve_network, Level, RateNetwork};

fn main() -> xfer::Result<()> {
    let (ensemble, cavity) = SystemParams::default().build()?;
    let d = decompose(&ensemble, &cavity)?;
    let gaps = d.resonance_gaps();
    let baths = BathSet::new(0.013, 0.01, gaps.up_to_donor_dark, gaps.mp_to_acceptor_dark)?;

    for kappa in [0.01, 1e-3, 1e-4] {
        let net = RateNetwork::build(&d, &baths, kappa)?;
        let sol = solve_network(&net)?;
        println!("κ = {kappa} eV");
        for (name, rate) in net.rates.as_array() {
            println!("  Γ_{name:<9} {rate:.4e} eV");
        }
        for level in Level::EXCITED {
            println!(
                "  {:<3} population {:.4e}  loss {:.3e}  outflow {:.3e}",
                level.label(),
                sol.population(level),
                net.loss[&level],
                net.total_outflow(level)
            );
        }
        let r = sol.routes;
        println!(
            "  routes: U→𝒟→M→𝒜→L {:.3}  U→𝒜→L {:.3}  U→M→L {:.3}  U→L {:.3}",
            r.red, r.green, r.purple, r.grey
        );
        println!("  T = {:.4}\n", sol.transfer_efficiency);
    }
    Ok(())
}
