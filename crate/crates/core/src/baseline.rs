//! Reference solvers: recursive binary search over the last coordinate
//! (`O(log^d N)` queries) and an exhaustive scan.

use crate::error::{Error, Result};
use crate::lattice::{GridBox, Point};
use crate::oracle::{CountedOracle, Phase, MAX_TABLE_POINTS};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaselineReport {
    pub fixed_point: Point,
    pub distinct_queries: u64,
}

struct Dqy<'r, 'i> {
    oracle: &'r mut CountedOracle<'i>,
    verify: bool,
}

impl Dqy<'_, '_> {
    fn widen(&mut self, err: Error, context: &[&Point]) -> Error {
        match err {
            Error::Violation(report) => {
                let mut pts: Vec<Point> = report.queries.into_iter().map(|(p, _)| p).collect();
                pts.extend(context.iter().map(|&p| p.clone()));
                self.oracle.violation(report.step, &pts)
            }
            other => other,
        }
    }

    /// Fixed point of `y -> F(y)_{0..dims}` on `[lo, hi]`, where coordinates
    /// `dims..` are pinned (`lo == hi` there). `lo` must be upward and `hi`
    /// downward on the first `dims` coordinates.
    fn solve(&mut self, dims: usize, lo: Point, hi: Point) -> Result<Point> {
        let c = dims - 1;
        let (mut lower, mut upper) = (lo.clone(), hi.clone());
        // the queried points each bracket end was derived from
        let mut sources = vec![lo, hi];
        loop {
            let m = lower[c] + (upper[c] - lower[c]) / 2;
            let slice_lo = lower.with(c, m);
            let slice_hi = upper.with(c, m);
            let y = if c == 0 {
                slice_lo
            } else {
                match self.solve(c, slice_lo, slice_hi) {
                    Ok(y) => y,
                    Err(e) => {
                        let context: Vec<&Point> = sources.iter().chain([&lower, &upper]).collect();
                        return Err(self.widen(e, &context));
                    }
                }
            };
            self.oracle.set_phase(Phase::Outer, None);
            let fy = self.oracle.query(&y)?;
            match fy[c].cmp(&m) {
                std::cmp::Ordering::Equal => return Ok(y),
                std::cmp::Ordering::Greater => {
                    if m == upper[c] {
                        sources.extend([y, upper, lower]);
                        return Err(self.oracle.violation("dqy: point above the upper corner", &sources));
                    }
                    let next = y.with(c, m + 1);
                    self.check_corner(&next, &y, dims, true)?;
                    lower = next;
                    sources.push(y);
                }
                std::cmp::Ordering::Less => {
                    if m == lower[c] {
                        sources.extend([y, lower, upper]);
                        return Err(self.oracle.violation("dqy: point below the lower corner", &sources));
                    }
                    let next = y.with(c, m - 1);
                    self.check_corner(&next, &y, dims, false)?;
                    upper = next;
                    sources.push(y);
                }
            }
        }
    }

    /// A corner derived from `from` by monotonicity; queried only when verifying.
    fn check_corner(&mut self, corner: &Point, from: &Point, dims: usize, upward: bool) -> Result<()> {
        if !self.verify {
            return Ok(());
        }
        let f = self.oracle.query(corner)?;
        let ok = (0..dims).all(|a| if upward { f[a] >= corner[a] } else { f[a] <= corner[a] });
        if ok {
            Ok(())
        } else {
            Err(self.oracle.violation("dqy: implied corner failed", &[corner.clone(), from.clone()]))
        }
    }
}

/// Recursive binary search on `bx`, whose corners must be upward (`lo`) and
/// downward (`hi`). The answer is verified with one query.
pub fn dqy_solve(oracle: &mut CountedOracle, bx: &GridBox, verify: bool) -> Result<BaselineReport> {
    let d = bx.dim();
    if d == 0 || oracle.instance().dim() != d {
        return Err(Error::usage(format!("box of dimension {d} does not match the instance")));
    }
    let mut dqy = Dqy { oracle, verify };
    let p = dqy.solve(d, bx.lo.clone(), bx.hi.clone())?;
    oracle.set_phase(Phase::Outer, None);
    if oracle.query(&p)? != p {
        return Err(oracle.violation("dqy: answer is not a fixed point", &[p, bx.lo.clone(), bx.hi.clone()]));
    }
    Ok(BaselineReport { fixed_point: p, distinct_queries: oracle.distinct_queries() })
}

/// Lexicographically first fixed point of `bx`.
pub fn brute_solve(oracle: &mut CountedOracle, bx: &GridBox) -> Result<Point> {
    let volume = bx.volume();
    if volume > MAX_TABLE_POINTS {
        return Err(Error::Capacity { points: volume, limit: MAX_TABLE_POINTS });
    }
    oracle.set_phase(Phase::Brute, None);
    for x in bx.points() {
        if oracle.query(&x)? == x {
            return Ok(x);
        }
    }
    let mut implicated: Vec<Point> = bx.points().collect();
    implicated.push(bx.lo.clone());
    implicated.push(bx.hi.clone());
    Err(oracle.violation("no fixed point in a certified box", &implicated))
}
