//! Levelset solver for 3D Tarski instances.
//!
//! The outer loop keeps a box `[lo, hi]` whose corners are upward and
//! downward. Each round picks the middle level `k` of the box and finds either
//! an upward point in `L_{>=k}` or a downward point in `L_{<=k}`; the box then
//! shrinks to `[x, hi]` or `[lo, x]`, at least halving `|hi| - |lo|`. The
//! per-level search maintains six bounding points on `L_k` (see
//! [`LevelState`]) and narrows the region they span until one of three
//! configurations appears.

mod config;
mod search;
mod state;

pub use config::{find_configuration, resolve_first, resolve_second, Config, Flavor};
pub use search::{Searcher, Step};
pub use state::{Bound, Box3, LevelState, SearchSpaceView, P3};

use crate::baseline;
use crate::error::{Error, Result};
use crate::lattice::{GridBox, Point};
use crate::oracle::{CountedOracle, Phase};
use state::norm;

/// Result of one per-level search. `Upward` points satisfy `|x| >= k`,
/// `Downward` points `|x| <= k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LevelOutcome {
    Fixed(P3),
    Upward(P3),
    Downward(P3),
}

impl LevelOutcome {
    pub fn point(&self) -> P3 {
        match *self {
            LevelOutcome::Fixed(p) | LevelOutcome::Upward(p) | LevelOutcome::Downward(p) => p,
        }
    }
}

/// Instrumentation hooks; every method defaults to a no-op.
#[allow(unused_variables)]
pub trait Observer {
    fn level_started(&mut self, bx: &Box3, k: i64) {}
    /// After initialization and after every update of the bounding points.
    fn state_ready(&mut self, state: &LevelState) {}
    /// `after` is `None` when the query ended the level.
    fn shrink_step(&mut self, before: &LevelState, q: P3, after: Option<&LevelState>) {}
    fn small_step(&mut self, before: &LevelState, after: Option<&LevelState>) {}
    fn configuration(&mut self, state: &LevelState, cfg: &Config) {}
    /// An outcome derived without querying its point; `confirmed` is set when
    /// verification is on.
    fn certificate(&mut self, claim: &LevelOutcome, confirmed: Option<bool>) {}
    fn level_finished(&mut self, record: &LevelRecord) {}
}

pub struct NoObserver;

impl Observer for NoObserver {}

#[derive(Clone, Debug, Default)]
pub struct SolveOptions {
    /// Query every point certified only by monotonicity, turning a silent
    /// wrong answer on a non-monotone `F` into a reported violation.
    pub verify_certificates: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelRecord {
    pub bx: Box3,
    pub k: i64,
    pub queries: u64,
    pub per_phase: [u64; 6],
    pub outcome: LevelOutcome,
}

#[derive(Clone, Debug)]
pub struct SolveReport {
    pub fixed_point: Point,
    pub distinct_queries: u64,
    pub levels: Vec<LevelRecord>,
    /// Boxes visited by the outer loop, in order.
    pub boxes: Vec<Box3>,
}

/// Finds a fixed point with default options.
pub fn solve(oracle: &mut CountedOracle) -> Result<Point> {
    Ok(solve_with(oracle, &SolveOptions::default(), &mut NoObserver)?.fixed_point)
}

/// One per-level search on `bx` at level `k`.
pub fn solve_level(
    oracle: &mut CountedOracle,
    bx: Box3,
    k: i64,
    opts: &SolveOptions,
    observer: &mut dyn Observer,
) -> Result<LevelOutcome> {
    Searcher::new(oracle, bx, k, opts.verify_certificates, observer)?.run()
}

fn grid_box(bx: &Box3) -> GridBox {
    GridBox { lo: Point::from(bx.lo), hi: Point::from(bx.hi) }
}

fn phase_counts(oracle: &CountedOracle) -> [u64; 6] {
    Phase::ALL.map(|p| oracle.queries_in(p))
}

pub fn solve_with(oracle: &mut CountedOracle, opts: &SolveOptions, observer: &mut dyn Observer) -> Result<SolveReport> {
    let inst = oracle.instance();
    let d = inst.dim();
    if d < 3 {
        let report = baseline::dqy_solve(oracle, &inst.grid(), opts.verify_certificates)?;
        return Ok(SolveReport {
            fixed_point: report.fixed_point,
            distinct_queries: report.distinct_queries,
            levels: Vec::new(),
            boxes: Vec::new(),
        });
    }
    if d > 3 {
        return Err(Error::usage(format!("the levelset solver handles d <= 3, got d = {d}")));
    }
    let shape = inst.shape();
    let mut bx = Box3 { lo: [1; 3], hi: [shape[0], shape[1], shape[2]] };
    let mut levels = Vec::new();
    let mut boxes = vec![bx];
    let mut answer = None;

    while bx.size() - 3 > 6 {
        if bx.is_degenerate() {
            oracle.set_phase(Phase::Outer, None);
            answer = Some(baseline::dqy_solve(oracle, &grid_box(&bx), opts.verify_certificates)?.fixed_point);
            break;
        }
        let k = (norm(bx.lo) + norm(bx.hi) + 1).div_euclid(2);
        let (q0, ph0) = (oracle.distinct_queries(), phase_counts(oracle));
        let outcome = solve_level(oracle, bx, k, opts, observer)?;
        let ph1 = phase_counts(oracle);
        let record = LevelRecord {
            bx,
            k,
            queries: oracle.distinct_queries() - q0,
            per_phase: std::array::from_fn(|i| ph1[i] - ph0[i]),
            outcome,
        };
        observer.level_finished(&record);
        levels.push(record);
        match outcome {
            LevelOutcome::Fixed(p) => {
                answer = Some(Point::from(p));
                break;
            }
            LevelOutcome::Upward(x) => bx.lo = x,
            LevelOutcome::Downward(x) => bx.hi = x,
        }
        boxes.push(bx);
    }

    let candidate = match answer {
        Some(p) => p,
        None => baseline::brute_solve(oracle, &grid_box(&bx))?,
    };
    oracle.set_phase(Phase::Outer, None);
    if oracle.query(&candidate)? != candidate {
        let implicated = [candidate, Point::from(bx.lo), Point::from(bx.hi)];
        return Err(oracle.violation("final answer is not a fixed point", &implicated));
    }
    Ok(SolveReport { fixed_point: candidate, distinct_queries: oracle.distinct_queries(), levels, boxes })
}
