//! Patterns among the six bounding points that imply progress.

use super::state::{join, meet, Bound, LevelState};
use super::LevelOutcome;

/// Which bounding points a configuration is built from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Flavor {
    /// i-upward points; they certify a downward meet.
    Up,
    /// i-downward points; they certify an upward join.
    Down,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Config {
    /// `x` is i-(up|down)ward, `y` is j-(up|down)ward, with the crossing inequalities.
    First { flavor: Flavor, x: Bound, y: Bound, axes: (usize, usize) },
    /// Cyclic version over all three axes.
    Second { flavor: Flavor, x: Bound, y: Bound, z: Bound, axes: (usize, usize, usize) },
    /// `x` i-upward, `y` i-downward, `x_i <= y_i <= x_i + 1`.
    Third { x: Bound, y: Bound, axis: usize },
}

const CYCLES: [(usize, usize, usize); 6] = [(0, 1, 2), (1, 2, 0), (2, 0, 1), (0, 2, 1), (2, 1, 0), (1, 0, 2)];

/// Scans the bounding points for a configuration; First, then Second, then Third.
pub fn find_configuration(state: &LevelState) -> Option<Config> {
    let (up, down) = (&state.up, &state.down);
    for i in 0..3 {
        for j in (0..3).filter(|&j| j != i) {
            let (x, y) = (up[i].point, up[j].point);
            if x[i] >= y[i] && x[j] <= y[j] {
                return Some(Config::First { flavor: Flavor::Up, x: up[i], y: up[j], axes: (i, j) });
            }
            let (x, y) = (down[i].point, down[j].point);
            if x[i] <= y[i] && x[j] >= y[j] {
                return Some(Config::First { flavor: Flavor::Down, x: down[i], y: down[j], axes: (i, j) });
            }
        }
    }
    for (i, j, p) in CYCLES {
        let (x, y, z) = (up[i].point, up[j].point, up[p].point);
        if x[i] >= y[i] && y[j] >= z[j] && z[p] >= x[p] {
            return Some(Config::Second { flavor: Flavor::Up, x: up[i], y: up[j], z: up[p], axes: (i, j, p) });
        }
        let (x, y, z) = (down[i].point, down[j].point, down[p].point);
        if x[i] <= y[i] && y[j] <= z[j] && z[p] <= x[p] {
            return Some(Config::Second { flavor: Flavor::Down, x: down[i], y: down[j], z: down[p], axes: (i, j, p) });
        }
    }
    for i in 0..3 {
        let (x, y) = (up[i].point, down[i].point);
        if x[i] <= y[i] && y[i] <= x[i] + 1 {
            return Some(Config::Third { x: up[i], y: down[i], axis: i });
        }
    }
    None
}

fn resolve(flavor: Flavor, points: &[[i64; 3]]) -> LevelOutcome {
    match flavor {
        Flavor::Up => LevelOutcome::Downward(meet(points)),
        Flavor::Down => LevelOutcome::Upward(join(points)),
    }
}

/// Certificate implied by a first configuration; needs no queries. Returns
/// `None` for other configurations.
pub fn resolve_first(cfg: &Config) -> Option<LevelOutcome> {
    match cfg {
        Config::First { flavor, x, y, .. } => Some(resolve(*flavor, &[x.point, y.point])),
        _ => None,
    }
}

pub fn resolve_second(cfg: &Config) -> Option<LevelOutcome> {
    match cfg {
        Config::Second { flavor, x, y, z, .. } => Some(resolve(*flavor, &[x.point, y.point, z.point])),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::levelset::state::Box3;

    fn b(point: [i64; 3], value: [i64; 3]) -> Bound {
        Bound { point, value }
    }

    fn state(up: [Bound; 3], down: [Bound; 3]) -> LevelState {
        LevelState { bx: Box3 { lo: [1; 3], hi: [8; 3] }, k: 12, up, down }
    }

    #[test]
    fn first_configuration_among_upward_points() {
        let up1 = b([5, 2, 5], [6, 1, 5]);
        let up2 = b([3, 4, 5], [3, 5, 4]);
        let s = state(
            [up1, up2, b([2, 3, 7], [2, 2, 8])],
            [b([8, 3, 1], [7, 3, 1]), b([1, 8, 3], [1, 7, 3]), b([3, 1, 8], [3, 1, 7])],
        );
        let cfg = find_configuration(&s).unwrap();
        assert_eq!(cfg, Config::First { flavor: Flavor::Up, x: up1, y: up2, axes: (0, 1) });
        let out = resolve_first(&cfg).unwrap();
        assert_eq!(out, LevelOutcome::Downward([3, 2, 5]));
        assert!(out.point().iter().sum::<i64>() <= 12);
        assert_eq!(resolve_second(&cfg), None);
    }

    #[test]
    fn third_configuration_when_pinched() {
        // no first or second configuration among these
        let up = [b([4, 3, 5], [5, 3, 5]), b([6, 1, 5], [6, 2, 5]), b([1, 7, 4], [1, 6, 5])];
        let down = [b([5, 5, 2], [4, 5, 2]), b([1, 8, 3], [1, 7, 3]), b([8, 1, 3], [8, 1, 2])];
        let cfg = find_configuration(&state(up, down));
        assert_eq!(cfg, Some(Config::Third { x: up[0], y: down[0], axis: 0 }));
    }

    #[test]
    fn second_configuration_cycle() {
        // x = up1, y = up2, z = up3 with x_1 >= y_1, y_2 >= z_2, z_3 >= x_3, no first pairs
        let up = [b([4, 5, 3], [5, 5, 2]), b([3, 4, 5], [3, 5, 4]), b([5, 3, 4], [4, 3, 5])];
        let down = [b([8, 3, 1], [7, 3, 1]), b([1, 8, 3], [1, 7, 3]), b([3, 1, 8], [3, 1, 7])];
        let cfg = find_configuration(&state(up, down)).unwrap();
        match cfg {
            Config::Second { flavor: Flavor::Up, axes, .. } => assert_eq!(axes, (0, 1, 2)),
            other => panic!("expected second configuration, got {other:?}"),
        }
        assert_eq!(resolve_second(&cfg), Some(LevelOutcome::Downward([3, 3, 3])));
    }

    #[test]
    fn downward_flavor_resolves_to_join() {
        let x = b([2, 5, 5], [1, 5, 5]);
        let y = b([3, 4, 5], [3, 3, 5]);
        let cfg = Config::First { flavor: Flavor::Down, x, y, axes: (0, 1) };
        assert_eq!(resolve_first(&cfg), Some(LevelOutcome::Upward([3, 5, 5])));
        let z = b([4, 4, 4], [4, 4, 3]);
        let cfg = Config::Second { flavor: Flavor::Down, x, y, z, axes: (0, 1, 2) };
        assert_eq!(resolve_second(&cfg), Some(LevelOutcome::Upward([4, 5, 5])));
    }
}
