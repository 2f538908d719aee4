//! Transfer efficiency against the donor and acceptor vibrational
//! frequencies, printed as a character map with the predicted resonance
//! lines marked.
//!
//!     cargo run --release --example vibrational_map [rate|redfield|both] [points]

use xfer::config::parse_config;
use xfer::sweep::run_sweep;

const SHADES: &[u8] = b" .:-=+*#%@";

fn main() -> xfer::Result<()> {
    let engine = std::env::args().nth(1).unwrap_or_else(|| "rate".into());
    let points: usize = std::env::args().nth(2).and_then(|s| s.parse().ok()).unwrap_or(39);
    let text = format!(
        "[sweep]\nkind = \"vibrational_map\"\nengine = \"{engine}\"\n\
         grid_vd = {{ start = 0.03, stop = 0.6, points = {points} }}\n\
         grid_va = {{ start = 0.03, stop = 0.6, points = {points} }}\n"
    );
    let out = run_sweep(&parse_config(&text)?)?;
    let gaps = out.manifest.system.expect("baseline decomposes").resonance_gaps;
    let t: Vec<f64> = out.rows.iter().map(|r| r[2]).collect();
    let (lo, hi) = t.iter().fold((f64::MAX, f64::MIN), |(a, b), &x| (a.min(x), b.max(x)));

    println!("T from {lo:.3} (' ') to {hi:.3} ('@'); rows ω_v𝒟 top to bottom, columns ω_v𝒜");
    println!(
        "UP-D {:.3}  UP-A {:.3}  UP-LP {:.3}  MP-A {:.3} eV",
        gaps.up_to_donor_dark, gaps.up_to_acceptor_dark, gaps.up_to_lp, gaps.mp_to_acceptor_dark
    );
    for i in (0..points).rev() {
        let row = &out.rows[i * points..(i + 1) * points];
        let line: String = row
            .iter()
            .map(|r| {
                let x = if hi > lo { (r[2] - lo) / (hi - lo) } else { 0.0 };
                SHADES[((x * (SHADES.len() - 1) as f64).round() as usize).min(SHADES.len() - 1)] as char
            })
            .collect();
        println!("{:.3} |{line}|", row[0][0]);
    }
    if out.failures() > 0 {
        println!("{} points failed", out.failures());
    }
    Ok(())
}
