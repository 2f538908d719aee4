//! How the transfer rates and efficiency change with the number of
//! molecules at fixed Rabi frequency. The Redfield engine is used while
//! the Hilbert space stays small; beyond that only the rate theory runs.
//!
//!     cargo run --release --example size_scaling

use xfer::config::parse_config;
use xfer::sweep::run_sweep;

fn main() -> xfer::Result<()> {
    for (engine, grid) in [("both", "[1, 2, 4, 8, 16, 32]"), ("rate", "[64, 256, 1024, 10000]")] {
        let text = format!(
            "[system]\nprofile = \"uniform\"\n[sweep]\nkind = \"size_scan\"\nengine = \"{engine}\"\ngrid = {grid}\n"
        );
        let out = run_sweep(&parse_config(&text)?)?;
        let cols = &out.manifest.columns;
        println!("{}", cols.iter().map(|c| format!("{c:>13}")).collect::<String>());
        for row in &out.rows {
            let line: String = row
                .iter()
                .enumerate()
                .map(|(k, x)| if k == 0 { format!("{x:>13}") } else { format!("{x:>13.4e}") })
                .collect();
            println!("{line}");
        }
        println!();
    }
    Ok(())
}
