//! Link-level validation with noise and interference removed: one cell, one
//! user and a 200 dB edge SNR. Both closed forms reduce to SINR = M, so any
//! remaining gap is estimator sampling noise. A single drop scatters by
//! about 0.1 dB, hence the 200 drops.

use mrc_ee::study::validate_linklevel;
use mrc_ee::{Scheme, SystemConfig};

#[test]
fn gap_is_sampling_noise_only() {
    let cfg = SystemConfig {
        cells: 1,
        users: 1,
        antennas: 100,
        subcarriers: 64,
        taps: 8,
        edge_snr_db: 200.0,
        ..SystemConfig::default()
    };
    let report = validate_linklevel(&cfg, 200, 10_000, 14).unwrap();
    for scheme in Scheme::BOTH {
        let v = report.scheme(scheme);
        println!(
            "{scheme}: gap {:.4} dB, per-drop {:.4} dB",
            v.sinr_gap_db, v.sinr_abs_gap_db
        );
        assert!(v.sinr_gap_db <= 0.02, "{scheme}: {:.4} dB", v.sinr_gap_db);
    }
}
