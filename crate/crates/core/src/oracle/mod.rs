//! The query boundary: counted, cached access to `F`.

mod families;
mod format;
mod instance;

use std::collections::HashMap;
use std::fmt;

pub use families::{gen_affine, gen_rotation};
pub use format::{from_text, load, save, to_text};
pub use instance::{
    fixed_points_bruteforce, gen_random_monotone, gen_random_table, monotonize, verify_monotone, Instance,
    InstanceKind, MAX_TABLE_POINTS,
};

use crate::error::{Error, Result, Violation, ViolationReport};
use crate::lattice::{classify, leq, Point};

/// Solver stage a query belongs to; used for per-phase counts and traces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Phase {
    Init,
    Shrink,
    Small,
    Third,
    Outer,
    Brute,
}

impl Phase {
    pub const ALL: [Phase; 6] = [Phase::Init, Phase::Shrink, Phase::Small, Phase::Third, Phase::Outer, Phase::Brute];

    pub fn name(self) -> &'static str {
        match self {
            Phase::Init => "init",
            Phase::Shrink => "shrink",
            Phase::Small => "small",
            Phase::Third => "third",
            Phase::Outer => "outer",
            Phase::Brute => "brute",
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One distinct evaluation of `F`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceRecord {
    pub phase: Phase,
    pub level: Option<i64>,
    pub point: Point,
    pub value: Point,
}

impl TraceRecord {
    /// `phase<TAB>k<TAB>x1,..,xd<TAB>f1,..,fd<TAB>labels`, with `-` for a missing level.
    pub fn to_line(&self) -> String {
        let csv = |p: &Point| p.coords().iter().map(i64::to_string).collect::<Vec<_>>().join(",");
        let level = self.level.map_or_else(|| "-".to_string(), |k| k.to_string());
        let labels = classify(&self.point, &self.value).map(|(_, l)| l.tags()).unwrap_or_default();
        format!("{}\t{}\t{}\t{}\t{}", self.phase, level, csv(&self.point), csv(&self.value), labels)
    }
}

/// Cached, counted access to an [`Instance`]. Single-owner; create one per run.
#[derive(Debug)]
pub struct CountedOracle<'i> {
    instance: &'i Instance,
    cache: HashMap<Point, Point>,
    phase: Phase,
    level: Option<i64>,
    per_phase: [u64; 6],
    transcript: Option<Vec<TraceRecord>>,
}

impl<'i> CountedOracle<'i> {
    pub fn new(instance: &'i Instance) -> Self {
        CountedOracle {
            instance,
            cache: HashMap::new(),
            phase: Phase::Outer,
            level: None,
            per_phase: [0; 6],
            transcript: None,
        }
    }

    /// Record every distinct query for [`transcript`](Self::transcript).
    pub fn with_trace(mut self) -> Self {
        self.transcript = Some(Vec::new());
        self
    }

    pub fn instance(&self) -> &'i Instance {
        self.instance
    }

    pub fn set_phase(&mut self, phase: Phase, level: Option<i64>) {
        self.phase = phase;
        self.level = level;
    }

    pub fn phase(&self) -> (Phase, Option<i64>) {
        (self.phase, self.level)
    }

    /// `F(x)`. Only cache misses count.
    pub fn query(&mut self, x: &Point) -> Result<Point> {
        if let Some(v) = self.cache.get(x) {
            return Ok(v.clone());
        }
        let value = self.instance.eval(x)?;
        self.cache.insert(x.clone(), value.clone());
        self.per_phase[self.phase as usize] += 1;
        if let Some(t) = &mut self.transcript {
            t.push(TraceRecord { phase: self.phase, level: self.level, point: x.clone(), value: value.clone() });
        }
        Ok(value)
    }

    pub fn query3(&mut self, x: [i64; 3]) -> Result<[i64; 3]> {
        Ok(self.query(&Point::from(x))?.to_array3())
    }

    /// Previously returned value, without querying.
    pub fn cached(&self, x: &Point) -> Option<&Point> {
        self.cache.get(x)
    }

    pub fn distinct_queries(&self) -> u64 {
        self.cache.len() as u64
    }

    pub fn queries_in(&self, phase: Phase) -> u64 {
        self.per_phase[phase as usize]
    }

    pub fn transcript(&self) -> Option<&[TraceRecord]> {
        self.transcript.as_deref()
    }

    /// Builds the error for a failed local case analysis. Every implicated point
    /// is evaluated and scanned pairwise for a monotonicity witness.
    pub fn violation(&mut self, step: impl Into<String>, implicated: &[Point]) -> Error {
        let mut points: Vec<Point> = Vec::new();
        for p in implicated {
            if !points.contains(p) && self.instance.grid().contains(p) {
                points.push(p.clone());
            }
        }
        let mut queries = Vec::with_capacity(points.len());
        for p in points {
            match self.query(&p) {
                Ok(v) => queries.push((p, v)),
                Err(e) => return e,
            }
        }
        let witness = find_witness(&queries);
        Error::Violation(Box::new(ViolationReport { step: step.into(), queries, witness }))
    }
}

/// First pair `x <= y` in `pairs` with `F(x) <= F(y)` failing.
pub fn find_witness(pairs: &[(Point, Point)]) -> Option<Violation> {
    for (x, fx) in pairs {
        for (y, fy) in pairs {
            if x != y && leq(x, y).unwrap_or(false) && !leq(fx, fy).unwrap_or(true) {
                return Some(Violation { x: x.clone(), y: y.clone(), fx: fx.clone(), fy: fy.clone() });
            }
        }
    }
    None
}
