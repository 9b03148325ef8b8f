//! Hexagonal multicell layout, user drops and large-scale fading.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::config::SystemConfig;
use crate::error::{Error, Result};
use crate::rng::{substream, SimRng};

const SQRT3: f64 = 1.732_050_807_568_877_2;

/// Rejection-sampling budget per user before a drop is declared failed.
pub const MAX_REDRAWS: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn distance(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellLayout {
    pub cell_radius: f64,
    pub min_distance: f64,
    /// BS positions; index 0 is the central cell at the origin.
    pub bs_positions: Vec<Point>,
}

impl CellLayout {
    pub fn cell_count(&self) -> usize {
        self.bs_positions.len()
    }
}

/// Center cell plus, for C = 7, one ring of six neighbors at distance
/// sqrt(3) * r_cell. Hexagons are flat-topped, so neighbors sit across the
/// edges at 30 + 60k degrees.
pub fn build_layout(config: &SystemConfig) -> Result<CellLayout> {
    if !(config.min_distance > 0.0 && config.cell_radius > config.min_distance) {
        return Err(Error::Config(format!(
            "need cell_radius > min_distance > 0, got {} and {}",
            config.cell_radius, config.min_distance
        )));
    }
    let mut bs_positions = vec![Point { x: 0.0, y: 0.0 }];
    match config.cells {
        1 => {}
        7 => {
            let d = SQRT3 * config.cell_radius;
            for k in 0..6 {
                let a = std::f64::consts::PI / 6.0 + k as f64 * std::f64::consts::PI / 3.0;
                bs_positions.push(Point {
                    x: d * a.cos(),
                    y: d * a.sin(),
                });
            }
        }
        c => {
            return Err(Error::Config(format!(
                "unsupported cell count {c}: only 1 and 7 are available"
            )))
        }
    }
    Ok(CellLayout {
        cell_radius: config.cell_radius,
        min_distance: config.min_distance,
        bs_positions,
    })
}

/// Large-scale gain beta = G0 * (d / r_cell)^(-lambda) * 10^(shadow/10).
pub fn pathloss(distance: f64, shadow_db: f64, config: &SystemConfig) -> Result<f64> {
    if distance.is_nan() || distance < config.min_distance {
        return Err(Error::Domain(format!(
            "distance {distance} m is inside the {} m exclusion radius",
            config.min_distance
        )));
    }
    let g0 = config.pathloss_intercept();
    Ok(g0
        * (distance / config.cell_radius).powf(-config.pathloss_exponent)
        * 10f64.powf(shadow_db / 10.0))
}

fn inside_hexagon(dx: f64, dy: f64, r: f64) -> bool {
    dy.abs() <= SQRT3 / 2.0 * r && SQRT3 * dx.abs() + dy.abs() <= SQRT3 * r
}

/// Uniform point in the flat-topped hexagon of circumradius `r` around the
/// origin, excluding the disc of radius `d_min`.
pub fn sample_annular_hexagon<R: Rng + ?Sized>(rng: &mut R, r: f64, d_min: f64) -> Point {
    loop {
        let x = rng.random_range(-r..r);
        let y = rng.random_range(-r..r);
        if inside_hexagon(x, y, r) && x * x + y * y >= d_min * d_min {
            return Point { x, y };
        }
    }
}

/// Large-scale coefficients for one spatial drop.
///
/// `beta` is indexed `[receiving BS i][user k][user's cell j]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LargeScaleMap {
    pub cells: usize,
    pub users: usize,
    pub beta: Vec<f64>,
    /// alpha^2[i][k] = sum_c beta[i][k][c] + noise / pilot power.
    pub alpha_sq: Vec<f64>,
    /// Positions indexed `[cell j][user k]`.
    pub user_positions: Vec<Point>,
}

impl LargeScaleMap {
    /// Builds the map from raw coefficients, deriving alpha^2.
    pub fn from_beta(
        cells: usize,
        users: usize,
        beta: Vec<f64>,
        noise_over_pilot: f64,
        user_positions: Vec<Point>,
    ) -> Self {
        assert_eq!(beta.len(), cells * users * cells);
        let mut alpha_sq = vec![0.0; cells * users];
        for i in 0..cells {
            for k in 0..users {
                let base = (i * users + k) * cells;
                alpha_sq[i * users + k] =
                    beta[base..base + cells].iter().sum::<f64>() + noise_over_pilot;
            }
        }
        Self {
            cells,
            users,
            beta,
            alpha_sq,
            user_positions,
        }
    }

    #[inline]
    pub fn beta(&self, bs: usize, user: usize, cell: usize) -> f64 {
        self.beta[(bs * self.users + user) * self.cells + cell]
    }

    #[inline]
    pub fn alpha_sq(&self, bs: usize, user: usize) -> f64 {
        self.alpha_sq[bs * self.users + user]
    }

    /// Coefficients `beta[bs][user][..]` for all cells.
    pub fn beta_row(&self, bs: usize, user: usize) -> &[f64] {
        let base = (bs * self.users + user) * self.cells;
        &self.beta[base..base + self.cells]
    }

    /// Index of the BS with the strongest coefficient to user k of cell j.
    pub fn strongest_bs(&self, user: usize, cell: usize) -> usize {
        (0..self.cells)
            .max_by(|&a, &b| {
                self.beta(a, user, cell)
                    .partial_cmp(&self.beta(b, user, cell))
                    .expect("finite beta")
            })
            .expect("at least one cell")
    }
}

/// Drops K users per cell and computes all large-scale coefficients.
pub fn drop_users(layout: &CellLayout, config: &SystemConfig, seed: u64) -> Result<LargeScaleMap> {
    drop_users_with(layout, config, &mut substream(seed, &[]))
}

pub fn drop_users_with(
    layout: &CellLayout,
    config: &SystemConfig,
    rng: &mut SimRng,
) -> Result<LargeScaleMap> {
    let cells = layout.cell_count();
    let users = config.users;
    if users == 0 {
        return Err(Error::Config(
            "at least one user per cell is required".into(),
        ));
    }
    let mut beta = vec![0.0; cells * users * cells];
    let mut positions = Vec::with_capacity(cells * users);
    let mut gains = vec![0.0; cells];
    for (j, &home) in layout.bs_positions.iter().enumerate() {
        for k in 0..users {
            let mut attempts = 0;
            let pos = loop {
                attempts += 1;
                if attempts > MAX_REDRAWS {
                    return Err(Error::Drop(format!(
                        "user {k} of cell {j} never associated with its own BS after {MAX_REDRAWS} redraws"
                    )));
                }
                let off = sample_annular_hexagon(rng, layout.cell_radius, layout.min_distance);
                let pos = Point {
                    x: home.x + off.x,
                    y: home.y + off.y,
                };
                for (i, &bs) in layout.bs_positions.iter().enumerate() {
                    let z: f64 = rng.sample(StandardNormal);
                    gains[i] = pathloss(pos.distance(bs), z * config.shadowing_std_db, config)?;
                }
                let best = (0..cells)
                    .max_by(|&a, &b| gains[a].partial_cmp(&gains[b]).expect("finite gain"))
                    .expect("non-empty layout");
                if best == j {
                    break pos;
                }
            };
            for i in 0..cells {
                beta[(i * users + k) * cells + j] = gains[i];
            }
            positions.push(pos);
        }
    }
    Ok(LargeScaleMap::from_beta(
        cells,
        users,
        beta,
        config.noise_power / config.pilot_power,
        positions,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(cells: usize, r: f64) -> SystemConfig {
        SystemConfig {
            cells,
            cell_radius: r,
            min_distance: r / 10.0,
            ..SystemConfig::default()
        }
    }

    #[test]
    fn single_cell_layout() {
        let l = build_layout(&cfg(1, 500.0)).unwrap();
        assert_eq!(l.bs_positions, vec![Point { x: 0.0, y: 0.0 }]);
    }

    #[test]
    fn seven_cell_neighbor_distance() {
        for r in [500.0, 100.0] {
            let l = build_layout(&cfg(7, r)).unwrap();
            assert_eq!(l.cell_count(), 7);
            for p in &l.bs_positions[1..] {
                assert!((p.distance(Point { x: 0.0, y: 0.0 }) - SQRT3 * r).abs() < 1e-9);
            }
        }
        let l = build_layout(&cfg(7, 500.0)).unwrap();
        assert!((l.bs_positions[1].distance(Point { x: 0.0, y: 0.0 }) - 866.025).abs() < 1e-3);
    }

    #[test]
    fn unsupported_cell_count() {
        assert!(matches!(
            build_layout(&cfg(19, 500.0)),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn pathloss_anchor_points() {
        let c = SystemConfig::default();
        let g0 = c.pathloss_intercept();
        assert!((pathloss(500.0, 0.0, &c).unwrap() / g0 - 1.0).abs() < 1e-12);
        assert!((pathloss(250.0, 0.0, &c).unwrap() / g0 - 2f64.powf(3.8)).abs() < 1e-9);
        let shadowed = pathloss(300.0, 8.0, &c).unwrap() / pathloss(300.0, 0.0, &c).unwrap();
        assert!((shadowed - 10f64.powf(0.8)).abs() < 1e-12);
        assert!(matches!(pathloss(10.0, 0.0, &c), Err(Error::Domain(_))));
    }

    #[test]
    fn edge_user_has_calibrated_snr() {
        let c = SystemConfig::default();
        let snr = c.ul_power * pathloss(c.cell_radius, 0.0, &c).unwrap() / c.noise_power;
        assert!((10.0 * snr.log10()).abs() < 1e-9);
    }

    #[test]
    fn single_cell_alpha_definition() {
        let c = SystemConfig {
            cells: 1,
            users: 5,
            ..SystemConfig::default()
        };
        let layout = build_layout(&c).unwrap();
        let ls = drop_users(&layout, &c, 3).unwrap();
        for k in 0..5 {
            let expect = ls.beta(0, k, 0) + c.noise_power / c.pilot_power;
            assert_eq!(ls.alpha_sq(0, k), expect);
        }
    }

    #[test]
    fn drops_are_deterministic() {
        let c = SystemConfig {
            users: 6,
            ..SystemConfig::default()
        };
        let layout = build_layout(&c).unwrap();
        assert_eq!(
            drop_users(&layout, &c, 11).unwrap(),
            drop_users(&layout, &c, 11).unwrap()
        );
        assert_ne!(
            drop_users(&layout, &c, 11).unwrap(),
            drop_users(&layout, &c, 12).unwrap()
        );
    }

    #[test]
    fn every_user_is_served_by_its_strongest_bs() {
        let c = SystemConfig {
            users: 10,
            ..SystemConfig::default()
        };
        let layout = build_layout(&c).unwrap();
        for seed in 0..20 {
            let ls = drop_users(&layout, &c, seed).unwrap();
            for j in 0..7 {
                for k in 0..10 {
                    assert_eq!(ls.strongest_bs(k, j), j);
                    assert!(ls.beta.iter().all(|b| *b > 0.0 && b.is_finite()));
                }
            }
        }
    }

    #[test]
    fn association_invariant_under_common_scaling() {
        let c = SystemConfig {
            users: 4,
            ..SystemConfig::default()
        };
        let layout = build_layout(&c).unwrap();
        let ls = drop_users(&layout, &c, 5).unwrap();
        let scaled = LargeScaleMap::from_beta(
            7,
            4,
            ls.beta.iter().map(|b| b * 37.5).collect(),
            0.0,
            ls.user_positions.clone(),
        );
        for j in 0..7 {
            for k in 0..4 {
                assert_eq!(ls.strongest_bs(k, j), scaled.strongest_bs(k, j));
            }
        }
    }

    #[test]
    fn contamination_sum_dominates_own_term() {
        for cells in [1, 7] {
            let c = SystemConfig {
                cells,
                users: 3,
                ..SystemConfig::default()
            };
            let ls = drop_users(&build_layout(&c).unwrap(), &c, 9).unwrap();
            for i in 0..cells {
                for k in 0..3 {
                    let total: f64 = ls.beta_row(i, k).iter().sum();
                    if cells == 1 {
                        assert_eq!(total, ls.beta(i, k, i));
                    } else {
                        assert!(total > ls.beta(i, k, i));
                    }
                }
            }
        }
    }
}
