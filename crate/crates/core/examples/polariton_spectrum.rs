//! Polariton energies and Hopfield contents as the Rabi frequency and the
//! cavity frequency are varied.
//!
//!     cargo run --example polariton_spectrum

use xfer::model::SystemParams;
use xfer::polariton::{sweep_decomposition, SweepAxis};

fn table(axis: SweepAxis, label: &str, grid: &[f64]) -> xfer::Result<()> {
    let rows = sweep_decomposition(axis, grid, &SystemParams::default())?;
    println!("{label:>8}  {:>7} {:>7} {:>7}   b²(C,D,A) LP        MP                  UP", "LP", "MP", "UP");
    for row in &rows {
        let d = &row.decomposition;
        let b2 = d.squares();
        let fmt = |r: [f64; 3]| format!("{:.2} {:.2} {:.2}", r[0], r[1], r[2]);
        println!(
            "{:>8.3}  {:>7.4} {:>7.4} {:>7.4}   {}    {}    {}",
            row.axis_value,
            d.energies[0],
            d.energies[1],
            d.energies[2],
            fmt(b2[0]),
            fmt(b2[1]),
            fmt(b2[2])
        );
    }
    println!();
    Ok(())
}

fn main() -> xfer::Result<()> {
    let rabi: Vec<f64> = (1..=12).map(|k| 0.025 * k as f64).collect();
    table(SweepAxis::RabiFrequency, "Ω_R", &rabi)?;

    let omega_c: Vec<f64> = (0..=12).map(|k| 1.8 + 0.05 * k as f64).collect();
    table(SweepAxis::CavityFrequency, "ω_C", &omega_c)?;

    // Full CSV for plotting.
    let rows = sweep_decomposition(SweepAxis::CavityFrequency, &omega_c, &SystemParams::default())?;
    xfer::polariton::write_decomposition_csv(&rows, std::io::stdout().lock())?;
    Ok(())
}
