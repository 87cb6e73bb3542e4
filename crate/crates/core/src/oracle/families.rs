//! Extra seeded monotone families for 3D grids. Running-max tables
//! ([`gen_random_monotone`]) have upward or downward points almost everywhere,
//! so a level search usually ends on its first queries; these families reach
//! the later stages.

use super::instance::{gen_random_monotone, Instance};
use crate::error::{Error, Result};
use crate::lattice::Point;
use crate::rng::SplitMix64;

fn shape3(shape: &[i64]) -> Result<[i64; 3]> {
    match shape {
        &[a, b, c] => Ok([a, b, c]),
        _ => Err(Error::usage(format!("this family needs a 3D shape, got {shape:?}"))),
    }
}

/// `F_i(x) = clamp(floor((W x + c)_i / 8) + noise_i(x))` with nonnegative
/// integer weights `W` and a monotone noise term in `{-1, 0, 1}`.
pub fn gen_affine(shape: &[i64], seed: u64) -> Result<Instance> {
    let shape = shape3(shape)?;
    let mut rng = SplitMix64::new(seed);
    let w: [[i64; 3]; 3] =
        std::array::from_fn(|i| std::array::from_fn(|j| if i == j { rng.coord(11) - 1 } else { rng.coord(4) - 1 }));
    let c: [i64; 3] = std::array::from_fn(|i| rng.coord(8 * shape[i] + 1) - 1 - 4 * shape[i]);
    let noise = gen_random_monotone(&shape, seed ^ 0x5eed)?;
    Instance::tabulate(&shape, |x| {
        let x = x.to_array3();
        let nz = noise.eval(&Point::from(x)).expect("point inside the grid").to_array3();
        Point::from(std::array::from_fn::<i64, 3, _>(|i| {
            let lin = (0..3).map(|j| w[i][j] * x[j]).sum::<i64>() + c[i];
            let bump = 3 * (nz[i] - 1) / shape[i].max(2) - 1;
            (lin.div_euclid(8) + bump.clamp(-1, 1)).clamp(1, shape[i])
        }))
    })
}

/// Perturbed coordinate rotation, `F_i(x) ~ x_{i+1}` (or `x_{i+2}`), rescaled
/// to the target axis. Off the diagonal it has hardly any upward or downward
/// points.
pub fn gen_rotation(shape: &[i64], seed: u64) -> Result<Instance> {
    let shape = shape3(shape)?;
    let mut rng = SplitMix64::new(seed);
    let shift: [i64; 3] = std::array::from_fn(|_| rng.coord(3) - 2);
    let reversed = rng.coord(2) == 1;
    let noise = gen_random_monotone(&shape, seed ^ 0x0b17)?;
    let flip = rng.coord(shape[0] * shape[1] * shape[2]);
    Instance::tabulate(&shape, |x| {
        let x = x.to_array3();
        // sparse monotone bump: +1 on an upper set
        let nz = noise.eval(&Point::from(x)).expect("point inside the grid").to_array3();
        let idx = (x[0] - 1) * shape[1] * shape[2] + (x[1] - 1) * shape[2] + x[2];
        let bump = i64::from(idx >= flip && nz[0] == shape[0]);
        Point::from(std::array::from_fn::<i64, 3, _>(|i| {
            let src = if reversed { (i + 2) % 3 } else { (i + 1) % 3 };
            let v = (x[src] - 1) * (shape[i] - 1) / (shape[src] - 1).max(1) + 1;
            (v + shift[i] * i64::from(seed.is_multiple_of(3)) + bump).clamp(1, shape[i])
        }))
    })
}
