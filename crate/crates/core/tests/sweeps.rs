use xfer::config::parse_config;
use xfer::rates::Level;
use xfer::sweep::{point_report, run_sweep};

fn map(engine: &str, vd: &str, va: &str, workers: usize) -> xfer::sweep::SweepOutput {
    let text = format!(
        "[sweep]\nkind = \"vibrational_map\"\nengine = \"{engine}\"\nworkers = {workers}\ngrid_vd = {vd}\ngrid_va = {va}\n"
    );
    run_sweep(&parse_config(&text).unwrap()).unwrap()
}

#[test]
fn off_resonant_grid_stays_below_resonant_point() {
    let on = point_report(&parse_config("[sweep]\nengine = \"both\"\n").unwrap()).unwrap();
    let t_on = on.redfield.unwrap().transfer_efficiency.unwrap();
    let off = map("redfield", "[0.05, 0.3]", "[0.05, 0.3]", 1);
    assert_eq!(off.failures(), 0);
    for row in &off.rows {
        assert!(row[2] < t_on, "{row:?} vs {t_on}");
    }
}

#[test]
fn donor_line_maximum_sits_on_up_to_dark_gap() {
    let gaps = point_report(&parse_config("").unwrap()).unwrap().resonance_gaps;
    let vd: Vec<f64> = (0..15).map(|k| 0.09 + 0.015 * k as f64).collect();
    let out = map("redfield", &format!("{vd:?}"), &format!("[{}]", gaps.mp_to_acceptor_dark), 1);
    let best = out
        .rows
        .iter()
        .max_by(|a, b| a[2].total_cmp(&b[2]))
        .unwrap();
    assert!((best[0] - gaps.up_to_donor_dark).abs() <= 0.015, "{} vs {}", best[0], gaps.up_to_donor_dark);
}

#[test]
fn csv_is_independent_of_worker_count_and_duplicates_agree() {
    let a = map("both", "[0.1, 0.194, 0.194, 0.4]", "[0.13, 0.13]", 1);
    let b = map("both", "[0.1, 0.194, 0.194, 0.4]", "[0.13, 0.13]", 3);
    assert_eq!(a.csv, b.csv);
    assert_eq!(a.rows[2], a.rows[4]);
    assert_eq!(a.rows[0][2..], a.rows[1][2..]);
}

#[test]
fn every_point_gets_a_status() {
    let out = map("rate", "[0.1, 0.2, 0.3]", "[0.1, 0.2]", 2);
    assert_eq!(out.manifest.points.len(), 6);
    assert!(out.manifest.points.iter().enumerate().all(|(i, p)| p.index == i && p.ok));
    assert!(out.manifest.points.iter().all(|p| p.checks.flux_error.unwrap() < 1e-12));
}

#[test]
fn size_scan_single_molecule_has_no_dark_feeding() {
    let text = "[system]\nprofile = \"uniform\"\n[sweep]\nkind = \"size_scan\"\nengine = \"both\"\ngrid = [1, 2, 4]\n";
    let out = run_sweep(&parse_config(text).unwrap()).unwrap();
    assert_eq!(out.failures(), 0);
    let col = |name: &str| out.manifest.columns.iter().position(|c| c == name).unwrap();
    assert_eq!(out.rows[0][col("ddark_up")], 0.0);
    assert!(out.rows[1][col("ddark_up")] > 0.0);
    // N = 2 -> 4 halves the polariton-polariton rates.
    assert!((out.rows[2][col("lp_up")] / out.rows[1][col("lp_up")] - 0.5).abs() < 1e-6);
    for row in &out.rows {
        assert!((row[col("t_redfield")] - row[col("t_rate")]).abs() < 0.05);
    }

    let cfg = parse_config("[system]\nn_donors = 1\nn_acceptors = 3\n[sweep]\nengine = \"rate\"\n").unwrap();
    let report = point_report(&cfg).unwrap();
    let pops = &report.rate.unwrap().solution.populations;
    assert!(!pops.contains_key(&Level::DarkDonor));
    assert!(pops.contains_key(&Level::DarkAcceptor));
}

#[test]
fn rate_engine_handles_ten_thousand_molecules() {
    let text = "[system]\nprofile = \"uniform\"\n[sweep]\nkind = \"size_scan\"\nengine = \"rate\"\ngrid = [16, 10000]\n";
    let out = run_sweep(&parse_config(text).unwrap()).unwrap();
    assert_eq!(out.failures(), 0);
    let col = out.manifest.columns.iter().position(|c| c == "ddark_up").unwrap();
    let ratio = out.rows[1][col] / out.rows[0][col];
    // Dark feeding grows with N as (N-1)/N rather than decaying.
    assert!((ratio - (9999.0 / 10000.0) / (15.0 / 16.0)).abs() < 1e-9);
    assert!(ratio >= 1.0);
}

#[test]
fn scans_emit_decomposition_columns() {
    let text = "[sweep]\nkind = \"cavity_scan\"\nengine = \"rate\"\ngrid = [1.9, 2.0, 2.1]\n";
    let out = run_sweep(&parse_config(text).unwrap()).unwrap();
    assert_eq!(
        out.manifest.columns.join(","),
        "omega_c_ev,e_lp,e_mp,e_up,b2_lc,b2_ld,b2_la,b2_mc,b2_md,b2_ma,b2_uc,b2_ud,b2_ua,t_rate"
    );
    assert_eq!(out.rows.len(), 3);
}
