use std::collections::BTreeSet;

use crate::error::{Error, Result, Violation};
use crate::lattice::{GridBox, Point};
use crate::rng::SplitMix64;

/// Largest grid that will be materialized as a table or scanned exhaustively.
pub const MAX_TABLE_POINTS: u128 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InstanceKind {
    /// `F(x)` for every point, lexicographic order, `d` values per point.
    Table(Vec<i64>),
    /// `F(x)_i = x_i + sign(target_i - x_i)`; evaluated lazily.
    Target(Point),
}

/// A concrete function on the grid `[n_1] x ... x [n_d]`. Immutable once built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    shape: Vec<i64>,
    kind: InstanceKind,
}

fn check_shape(shape: &[i64]) -> Result<()> {
    if shape.is_empty() {
        return Err(Error::usage("shape must have at least one dimension"));
    }
    if let Some(n) = shape.iter().find(|&&n| n < 1) {
        return Err(Error::usage(format!("grid side {n} is not positive")));
    }
    Ok(())
}

fn volume(shape: &[i64]) -> u128 {
    shape.iter().map(|&n| n as u128).product()
}

fn check_capacity(shape: &[i64]) -> Result<usize> {
    let points = volume(shape);
    if points > MAX_TABLE_POINTS {
        return Err(Error::Capacity { points, limit: MAX_TABLE_POINTS });
    }
    Ok(points as usize)
}

impl Instance {
    /// `F(x)_i = x_i + sign(target_i - x_i)`: monotone, with `target` as its only fixed point.
    pub fn target(shape: &[i64], target: Point) -> Result<Self> {
        check_shape(shape)?;
        if !GridBox::full(shape).contains(&target) {
            return Err(Error::usage(format!("target {target} lies outside the grid {shape:?}")));
        }
        Ok(Instance { shape: shape.to_vec(), kind: InstanceKind::Target(target) })
    }

    /// Explicit table; values must stay inside the grid. Monotonicity is not checked.
    pub fn table(shape: &[i64], values: Vec<i64>) -> Result<Self> {
        check_shape(shape)?;
        let points = check_capacity(shape)?;
        let d = shape.len();
        if values.len() != points * d {
            return Err(Error::usage(format!(
                "table has {} values, expected {} points x {d} coordinates",
                values.len(),
                points
            )));
        }
        for (idx, chunk) in values.chunks(d).enumerate() {
            for (c, n) in chunk.iter().zip(shape) {
                if *c < 1 || c > n {
                    return Err(Error::usage(format!("table entry {idx} maps outside the grid: {chunk:?}")));
                }
            }
        }
        Ok(Instance { shape: shape.to_vec(), kind: InstanceKind::Table(values) })
    }

    /// Build a table from any function on the grid.
    pub fn tabulate(shape: &[i64], f: impl Fn(&Point) -> Point) -> Result<Self> {
        check_shape(shape)?;
        check_capacity(shape)?;
        let values = GridBox::full(shape).points().flat_map(|p| f(&p).into_coords()).collect();
        Instance::table(shape, values)
    }

    pub fn shape(&self) -> &[i64] {
        &self.shape
    }

    pub fn dim(&self) -> usize {
        self.shape.len()
    }

    pub fn kind(&self) -> &InstanceKind {
        &self.kind
    }

    pub fn grid(&self) -> GridBox {
        GridBox::full(&self.shape)
    }

    /// Lexicographic index of `x` (first coordinate slowest).
    fn index(&self, x: &Point) -> usize {
        x.coords().iter().zip(&self.shape).fold(0usize, |acc, (&c, &n)| acc * n as usize + (c - 1) as usize)
    }

    /// Evaluate `F(x)`. This bypasses query counting; solvers go through
    /// [`CountedOracle`](crate::oracle::CountedOracle).
    pub fn eval(&self, x: &Point) -> Result<Point> {
        if !self.grid().contains(x) {
            return Err(Error::usage(format!("query {x} lies outside the grid {:?}", self.shape)));
        }
        Ok(match &self.kind {
            InstanceKind::Target(t) => {
                Point::new(x.coords().iter().zip(t.coords()).map(|(a, b)| a + (b - a).signum()).collect())
            }
            InstanceKind::Table(values) => {
                let d = self.dim();
                let start = self.index(x) * d;
                Point::new(values[start..start + d].to_vec())
            }
        })
    }

    /// The same function as an explicit table (capacity-limited).
    pub fn materialize(&self) -> Result<Instance> {
        match self.kind {
            InstanceKind::Table(_) => Ok(self.clone()),
            InstanceKind::Target(_) => Instance::tabulate(&self.shape, |p| self.eval(p).expect("grid point")),
        }
    }

    fn table_values(&self) -> Result<std::borrow::Cow<'_, [i64]>> {
        Ok(match &self.kind {
            InstanceKind::Table(v) => std::borrow::Cow::Borrowed(v.as_slice()),
            InstanceKind::Target(_) => match self.materialize()?.kind {
                InstanceKind::Table(v) => std::borrow::Cow::Owned(v),
                InstanceKind::Target(_) => unreachable!(),
            },
        })
    }
}

/// Uniform random table, not monotonized: each `F(x)_i` drawn from `[1, n_i]`
/// in lexicographic point order, coordinates in index order.
pub fn gen_random_table(shape: &[i64], seed: u64) -> Result<Instance> {
    check_shape(shape)?;
    let points = check_capacity(shape)?;
    let mut rng = SplitMix64::new(seed);
    let mut values = Vec::with_capacity(points * shape.len());
    for _ in 0..points {
        for &n in shape {
            values.push(rng.coord(n));
        }
    }
    Instance::table(shape, values)
}

/// Running maximum along every axis: `F(x)_i = max { g(y)_i : y <= x }`.
pub fn monotonize(inst: &Instance) -> Result<Instance> {
    let shape = inst.shape();
    let d = shape.len();
    let mut values = inst.table_values()?.into_owned();
    let points = values.len() / d;
    // stride of axis a in point units
    let mut strides = vec![1usize; d];
    for a in (0..d.saturating_sub(1)).rev() {
        strides[a] = strides[a + 1] * shape[a + 1] as usize;
    }
    for a in 0..d {
        let n = shape[a] as usize;
        for idx in 0..points {
            if (idx / strides[a]).is_multiple_of(n) {
                continue;
            }
            let prev = idx - strides[a];
            for c in 0..d {
                values[idx * d + c] = values[idx * d + c].max(values[prev * d + c]);
            }
        }
    }
    Instance::table(shape, values)
}

/// Seeded random monotone instance: [`gen_random_table`] followed by [`monotonize`].
pub fn gen_random_monotone(shape: &[i64], seed: u64) -> Result<Instance> {
    monotonize(&gen_random_table(shape, seed)?)
}

/// Checks `F(x) <= F(x + e_i)` for every point and axis, which is equivalent to
/// full monotonicity by transitivity.
pub fn verify_monotone(inst: &Instance) -> Result<Option<Violation>> {
    check_capacity(inst.shape())?;
    let shape = inst.shape();
    for x in inst.grid().points() {
        let fx = inst.eval(&x)?;
        for a in 0..shape.len() {
            if x[a] == shape[a] {
                continue;
            }
            let y = x.with(a, x[a] + 1);
            let fy = inst.eval(&y)?;
            if !fx.coords().iter().zip(fy.coords()).all(|(u, v)| u <= v) {
                return Ok(Some(Violation { x, y, fx, fy }));
            }
        }
    }
    Ok(None)
}

/// Every `x` with `F(x) = x`.
pub fn fixed_points_bruteforce(inst: &Instance) -> Result<BTreeSet<Point>> {
    check_capacity(inst.shape())?;
    let mut fixed = BTreeSet::new();
    for x in inst.grid().points() {
        if inst.eval(&x)? == x {
            fixed.insert(x);
        }
    }
    Ok(fixed)
}
