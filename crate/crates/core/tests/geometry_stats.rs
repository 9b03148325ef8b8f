//! Statistical checks of the user-drop generator.

use mrc_ee::geometry::{pathloss, sample_annular_hexagon};
use mrc_ee::rng::substream;
use mrc_ee::SystemConfig;
use rand_distr::{Distribution, Normal};
use statrs::distribution::{ChiSquared, ContinuousCDF};

const SQRT3: f64 = 1.732_050_807_568_877_2;

fn in_region(x: f64, y: f64, r: f64, d_min: f64) -> bool {
    y.abs() <= SQRT3 / 2.0 * r
        && SQRT3 * x.abs() + y.abs() <= SQRT3 * r
        && x * x + y * y >= d_min * d_min
}

#[test]
fn positions_are_uniform_over_the_annular_hexagon() {
    let (r, d_min) = (500.0, 50.0);
    let (bins, samples, sub) = (12usize, 100_000usize, 40usize);
    let width = 2.0 * r / bins as f64;

    // Bin areas by midpoint quadrature.
    let mut area = vec![0.0; bins * bins];
    for (b, a) in area.iter_mut().enumerate() {
        let (bx, by) = ((b % bins) as f64, (b / bins) as f64);
        let mut inside = 0;
        for i in 0..sub {
            for j in 0..sub {
                let x = -r + (bx + (i as f64 + 0.5) / sub as f64) * width;
                let y = -r + (by + (j as f64 + 0.5) / sub as f64) * width;
                inside += in_region(x, y, r, d_min) as usize;
            }
        }
        *a = inside as f64;
    }
    let total: f64 = area.iter().sum();

    let mut counts = vec![0usize; bins * bins];
    let mut rng = substream(2024, &[7]);
    for _ in 0..samples {
        let p = sample_annular_hexagon(&mut rng, r, d_min);
        let bx = (((p.x + r) / width) as usize).min(bins - 1);
        let by = (((p.y + r) / width) as usize).min(bins - 1);
        counts[by * bins + bx] += 1;
    }

    // Bins with fewer than 5 expected samples are pooled.
    let (mut stat, mut cells) = (0.0, 0usize);
    let (mut pooled_obs, mut pooled_exp) = (0.0, 0.0);
    for (c, a) in counts.iter().zip(&area) {
        let expected = samples as f64 * a / total;
        if expected >= 5.0 {
            stat += (*c as f64 - expected).powi(2) / expected;
            cells += 1;
        } else {
            pooled_obs += *c as f64;
            pooled_exp += expected;
        }
    }
    if pooled_exp > 0.0 {
        stat += (pooled_obs - pooled_exp).powi(2) / pooled_exp;
        cells += 1;
    }
    let p = 1.0 - ChiSquared::new((cells - 1) as f64).unwrap().cdf(stat);
    assert!(
        p > 0.01,
        "chi-square {stat:.1} over {cells} cells, p = {p:.4}"
    );
}

#[test]
fn edge_snr_matches_calibration() {
    let cfg = SystemConfig::default();
    let shadow = Normal::new(0.0, cfg.shadowing_std_db).unwrap();
    let mut sum = 0.0;
    let mut n = 0usize;
    for drop in 0..1000u64 {
        let mut rng = substream(99, &[drop]);
        for _ in 0..cfg.cells * cfg.users {
            let beta = pathloss(cfg.cell_radius, shadow.sample(&mut rng), &cfg).unwrap();
            sum += 10.0 * (cfg.ul_power * beta / cfg.noise_power).log10();
            n += 1;
        }
    }
    let mean = sum / n as f64;
    assert!(mean.abs() <= 0.5, "mean edge SNR {mean:.3} dB");
}
