//! Integer-grid lattice primitives.
//!
//! Grids are `[n_1] x ... x [n_d]` with 1-based coordinates, ordered
//! componentwise. Meet and join are the componentwise min and max.

use std::fmt;
use std::ops::Index;

use crate::error::{Error, Result};

/// A grid point. Coordinates are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point(Vec<i64>);

impl Point {
    pub fn new(coords: Vec<i64>) -> Self {
        Point(coords)
    }

    pub fn splat(d: usize, value: i64) -> Self {
        Point(vec![value; d])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<i64> {
        self.0
    }

    /// Sum of coordinates.
    pub fn norm1(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn with(&self, axis: usize, value: i64) -> Point {
        let mut coords = self.0.clone();
        coords[axis] = value;
        Point(coords)
    }

    /// Panics if the point is not three-dimensional.
    pub fn to_array3(&self) -> [i64; 3] {
        [self.0[0], self.0[1], self.0[2]]
    }
}

impl Index<usize> for Point {
    type Output = i64;

    fn index(&self, axis: usize) -> &i64 {
        &self.0[axis]
    }
}

impl From<Vec<i64>> for Point {
    fn from(coords: Vec<i64>) -> Self {
        Point(coords)
    }
}

impl<const D: usize> From<[i64; D]> for Point {
    fn from(coords: [i64; D]) -> Self {
        Point(coords.to_vec())
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

fn same_dim(x: &Point, y: &Point) -> Result<()> {
    if x.dim() != y.dim() {
        return Err(Error::usage(format!(
            "dimension mismatch: {} has {} coordinates, {} has {}",
            x,
            x.dim(),
            y,
            y.dim()
        )));
    }
    Ok(())
}

/// Componentwise `x <= y`.
pub fn leq(x: &Point, y: &Point) -> Result<bool> {
    same_dim(x, y)?;
    Ok(x.0.iter().zip(&y.0).all(|(a, b)| a <= b))
}

fn fold_points(points: &[Point], pick: fn(i64, i64) -> i64) -> Result<Point> {
    let (first, rest) = points
        .split_first()
        .ok_or_else(|| Error::usage("meet/join of an empty list"))?;
    let mut out = first.clone();
    for p in rest {
        same_dim(&out, p)?;
        for (o, &c) in out.0.iter_mut().zip(&p.0) {
            *o = pick(*o, c);
        }
    }
    Ok(out)
}

/// Greatest lower bound (componentwise minimum).
pub fn glb(points: &[Point]) -> Result<Point> {
    fold_points(points, i64::min)
}

/// Least upper bound (componentwise maximum).
pub fn lub(points: &[Point]) -> Result<Point> {
    fold_points(points, i64::max)
}

/// Inclusive sub-grid `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GridBox {
    pub lo: Point,
    pub hi: Point,
}

impl GridBox {
    pub fn new(lo: Point, hi: Point) -> Result<Self> {
        if !leq(&lo, &hi)? {
            return Err(Error::usage(format!("box corners out of order: {lo} is not <= {hi}")));
        }
        Ok(GridBox { lo, hi })
    }

    /// The full grid `[1, n]` for a shape `n`.
    pub fn full(shape: &[i64]) -> Self {
        GridBox { lo: Point::splat(shape.len(), 1), hi: Point::new(shape.to_vec()) }
    }

    pub fn dim(&self) -> usize {
        self.lo.dim()
    }

    /// Sum of side lengths, `sum_i (hi_i - lo_i + 1)`.
    pub fn size(&self) -> i64 {
        self.lo.0.iter().zip(&self.hi.0).map(|(l, h)| h - l + 1).sum()
    }

    pub fn volume(&self) -> u128 {
        self.lo.0.iter().zip(&self.hi.0).map(|(l, h)| (h - l + 1) as u128).product()
    }

    pub fn contains(&self, p: &Point) -> bool {
        p.dim() == self.dim()
            && p.0.iter().zip(&self.lo.0).zip(&self.hi.0).all(|((c, l), h)| l <= c && c <= h)
    }

    /// All points in lexicographic order (first coordinate slowest).
    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        let d = self.dim();
        let mut next = if self.volume() == 0 { None } else { Some(self.lo.clone()) };
        std::iter::from_fn(move || {
            let current = next.take()?;
            let mut succ = current.clone();
            let mut axis = d;
            while axis > 0 {
                axis -= 1;
                if succ.0[axis] < self.hi.0[axis] {
                    succ.0[axis] += 1;
                    next = Some(succ);
                    break;
                }
                succ.0[axis] = self.lo.0[axis];
            }
            Some(current)
        })
    }
}

impl fmt::Display for GridBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// `signs[i] = sign(F(x)_i - x_i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignVector(pub Vec<i8>);

/// Subset of axes, 0-based, stored as a bitmask.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct AxisSet(u64);

impl AxisSet {
    pub fn contains(self, axis: usize) -> bool {
        self.0 & (1 << axis) != 0
    }

    pub fn insert(&mut self, axis: usize) {
        self.0 |= 1 << axis;
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..64).filter(move |&a| self.contains(a))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct LabelSet {
    pub is_fixed: bool,
    pub is_upward: bool,
    pub is_downward: bool,
    pub i_upward: AxisSet,
    pub i_downward: AxisSet,
}

impl LabelSet {
    pub fn is_empty(&self) -> bool {
        !self.is_upward && !self.is_downward && self.i_upward.is_empty() && self.i_downward.is_empty()
    }

    /// Labels as short tags, e.g. `up1,down3`; `-` for none.
    pub fn tags(&self) -> String {
        let mut tags = Vec::new();
        if self.is_fixed {
            tags.push("fixed".to_string());
        }
        if self.is_upward {
            tags.push("up".to_string());
        }
        if self.is_downward {
            tags.push("down".to_string());
        }
        tags.extend(self.i_upward.iter().map(|a| format!("up{}", a + 1)));
        tags.extend(self.i_downward.iter().map(|a| format!("down{}", a + 1)));
        if tags.is_empty() {
            "-".to_string()
        } else {
            tags.join(",")
        }
    }
}

pub fn sign_vector(x: &[i64], fx: &[i64]) -> SignVector {
    SignVector(x.iter().zip(fx).map(|(a, b)| (b - a).signum() as i8).collect())
}

pub fn labels_from_signs(signs: &SignVector) -> LabelSet {
    let s = &signs.0;
    let is_upward = s.iter().all(|&v| v >= 0);
    let is_downward = s.iter().all(|&v| v <= 0);
    let mut labels = LabelSet {
        is_fixed: is_upward && is_downward,
        is_upward,
        is_downward,
        ..LabelSet::default()
    };
    for i in 0..s.len() {
        let others = s.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &v)| v);
        if s[i] == 1 && others.clone().all(|v| v <= 0) {
            labels.i_upward.insert(i);
        }
        if s[i] == -1 && others.clone().all(|v| v >= 0) {
            labels.i_downward.insert(i);
        }
    }
    labels
}

/// Every label that applies to `x` given `fx = F(x)`.
pub fn classify(x: &Point, fx: &Point) -> Result<(SignVector, LabelSet)> {
    same_dim(x, fx)?;
    let signs = sign_vector(&x.0, &fx.0);
    let labels = labels_from_signs(&signs);
    Ok((signs, labels))
}

/// A point `q` with `lower <= q <= upper` and `|q| = k`, filled greedily: start at
/// `lower` and raise coordinates to their upper bound in index order.
pub fn level_point(lower: &Point, upper: &Point, k: i64) -> Result<Point> {
    same_dim(lower, upper)?;
    if !leq(lower, upper)? || k < lower.norm1() || k > upper.norm1() {
        return Err(Error::Infeasible(format!("no point of norm {k} between {lower} and {upper}")));
    }
    let mut q = lower.clone();
    let mut deficit = k - lower.norm1();
    for (c, &u) in q.0.iter_mut().zip(&upper.0) {
        let raise = (u - *c).min(deficit);
        *c += raise;
        deficit -= raise;
    }
    Ok(q)
}

/// The point of `bx ∩ L_k` that maximizes coordinate `max_axis`, then minimizes
/// `min_axis`. Three-dimensional boxes only; axes are 0-based.
pub fn extreme_level_point(bx: &GridBox, k: i64, max_axis: usize, min_axis: usize) -> Result<Point> {
    if bx.dim() != 3 || max_axis >= 3 || min_axis >= 3 || max_axis == min_axis {
        return Err(Error::usage(format!(
            "extreme_level_point needs a 3D box and two distinct axes, got {} axes {max_axis},{min_axis}",
            bx.dim()
        )));
    }
    if k < bx.lo.norm1() || k > bx.hi.norm1() {
        return Err(Error::Infeasible(format!("level {k} does not meet box {bx}")));
    }
    let other = 3 - max_axis - min_axis;
    let (lo, hi) = (&bx.lo, &bx.hi);
    let p_max = hi[max_axis].min(k - lo[min_axis] - lo[other]);
    let p_min = lo[min_axis].max(k - p_max - hi[other]);
    let mut p = vec![0; 3];
    p[max_axis] = p_max;
    p[min_axis] = p_min;
    p[other] = k - p_max - p_min;
    Ok(Point(p))
}
