//! Library equivalent of `xfer run`: parse a TOML configuration, run the
//! sweep and write `<name>.csv` and `<name>.manifest.json`.
//!
//!     cargo run --release --example batch_run -- [config.toml] [out_dir]

use std::path::PathBuf;

use xfer::config::parse_config;
use xfer::sweep::run_sweep;

const DEFAULT: &str = r#"
[system]
n_donors = 8
n_acceptors = 8

[baths]
gamma_phi_ev = 0.013
xi_ev = 0.01

[sweep]
kind = "rabi_scan"
engine = "both"
name = "rabi_scan"
grid = { start = 0.04, stop = 0.24, points = 11 }
"#;

fn main() -> xfer::Result<()> {
    let mut args = std::env::args().skip(1);
    let text = match args.next() {
        Some(path) => std::fs::read_to_string(path)?,
        None => DEFAULT.to_string(),
    };
    let out_dir = args.next().map(PathBuf::from).unwrap_or_else(std::env::temp_dir);
    let config = parse_config(&text)?;
    let output = run_sweep(&config)?;
    let (csv, manifest) = output.write(&out_dir)?;
    print!("{}", output.csv);
    println!(
        "{} points ({} failed) in {:.2} s -> {} , {}",
        output.manifest.n_points,
        output.failures(),
        output.manifest.wall_clock_seconds,
        csv.display(),
        manifest.display()
    );
    Ok(())
}
