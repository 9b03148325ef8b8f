//! Study outputs must not depend on the thread count.

use mrc_ee::study::{ee_surface, validate_linklevel};
use mrc_ee::{PowerModelConfig, SystemConfig};

fn pool(threads: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .unwrap()
}

#[test]
fn surface_is_bit_identical_across_thread_counts() {
    let cfg = SystemConfig::default();
    let pm = PowerModelConfig::default();
    let (ms, ks) = ([20, 60, 140], [4, 12, 22]);
    // 2100 drops crosses a batch boundary.
    let run = |t| pool(t).install(|| ee_surface(&cfg, &pm, &ms, &ks, 2100, 5).unwrap());
    let one = run(1);
    let eight = run(8);
    for (a, b) in one.grid.iter().zip(&eight.grid) {
        assert_eq!(a.ee_sc.to_bits(), b.ee_sc.to_bits());
        assert_eq!(a.ee_ofdm.to_bits(), b.ee_ofdm.to_bits());
    }
    assert_eq!(one, eight);
}

#[test]
fn validation_is_bit_identical_across_thread_counts() {
    let cfg = SystemConfig {
        antennas: 16,
        users: 4,
        subcarriers: 32,
        taps: 4,
        ..SystemConfig::default()
    };
    let run = |t| pool(t).install(|| validate_linklevel(&cfg, 6, 128, 3).unwrap());
    assert_eq!(run(1), run(8));
}
