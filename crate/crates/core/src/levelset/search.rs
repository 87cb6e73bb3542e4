//! Per-level search: find an upward point in `L_{>=k}` or a downward point in
//! `L_{<=k}` with `O(log N)` queries.

use std::ops::ControlFlow;

use super::config::{find_configuration, resolve_first, resolve_second, Config};
use super::state::{join, labels, meet, norm, others, Bound, Box3, LevelState, SearchSpaceView, P3};
use super::{LevelOutcome, Observer};
use crate::error::{Error, Result};
use crate::lattice::{level_point, GridBox, LabelSet, Point};
use crate::oracle::{CountedOracle, Phase};

pub type Step<T> = ControlFlow<LevelOutcome, T>;

fn pt(x: P3) -> Point {
    Point::from(x)
}

fn ceil_sixth(d: i64) -> i64 {
    (d + 5) / 6
}

/// Outcome carried by a queried point on `L_k`, if it is upward or downward.
fn direct(q: P3, l: &LabelSet) -> Option<LevelOutcome> {
    if l.is_fixed {
        Some(LevelOutcome::Fixed(q))
    } else if l.is_upward {
        Some(LevelOutcome::Upward(q))
    } else if l.is_downward {
        Some(LevelOutcome::Downward(q))
    } else {
        None
    }
}

/// Either the identity or the point reflection `x -> lo + hi - x` of the box.
/// Reflection turns upward into downward, meets into joins and `L_k` into
/// `L_{|lo|+|hi|-k}`, so a search written for one direction serves both.
#[derive(Clone, Copy, Debug)]
struct Frame {
    lo: P3,
    hi: P3,
    mirrored: bool,
}

impl Frame {
    fn map(&self, x: P3) -> P3 {
        if self.mirrored {
            std::array::from_fn(|a| self.lo[a] + self.hi[a] - x[a])
        } else {
            x
        }
    }

    fn level(&self, k: i64) -> i64 {
        if self.mirrored {
            norm(self.lo) + norm(self.hi) - k
        } else {
            k
        }
    }

    fn outcome(&self, o: LevelOutcome) -> LevelOutcome {
        if !self.mirrored {
            return o;
        }
        match o {
            LevelOutcome::Fixed(p) => LevelOutcome::Fixed(self.map(p)),
            LevelOutcome::Upward(p) => LevelOutcome::Downward(self.map(p)),
            LevelOutcome::Downward(p) => LevelOutcome::Upward(self.map(p)),
        }
    }
}

enum FaceKind {
    Found,
    /// `F(q)_p < q_p`: usable as the low end of the face search.
    Left,
    /// `F(q)_j < q_j`: usable as the high end.
    Right,
}

/// Runs the levelset procedure on one box and level.
pub struct Searcher<'r, 'i> {
    oracle: &'r mut CountedOracle<'i>,
    bx: Box3,
    k: i64,
    verify: bool,
    observer: &'r mut dyn Observer,
}

impl<'r, 'i> Searcher<'r, 'i> {
    /// Requires `|lo| < k < |hi|` and every side of `bx` at least 2.
    pub fn new(
        oracle: &'r mut CountedOracle<'i>,
        bx: Box3,
        k: i64,
        verify: bool,
        observer: &'r mut dyn Observer,
    ) -> Result<Self> {
        if bx.is_degenerate() || !(norm(bx.lo) < k && k < norm(bx.hi)) {
            return Err(Error::usage(format!("level {k} needs a box with all sides >= 2 strictly around it, got {bx:?}")));
        }
        Ok(Searcher { oracle, bx, k, verify, observer })
    }

    pub fn queries(&self) -> u64 {
        self.oracle.distinct_queries()
    }

    fn ask(&mut self, phase: Phase, q: P3) -> Result<Bound> {
        self.oracle.set_phase(phase, Some(self.k));
        let value = self.oracle.query3(q)?;
        Ok(Bound { point: q, value })
    }

    fn fail(&mut self, step: &str, implicated: &[P3]) -> Error {
        let mut pts: Vec<Point> = implicated.iter().map(|&x| pt(x)).collect();
        pts.push(pt(self.bx.lo));
        pts.push(pt(self.bx.hi));
        self.oracle.violation(step, &pts)
    }

    /// Accepts an outcome that was derived from `sources` by monotonicity without
    /// querying its point. With verification on, the point is queried and checked.
    fn certify(&mut self, phase: Phase, claim: LevelOutcome, sources: &[P3]) -> Result<LevelOutcome> {
        debug_assert!(match claim {
            LevelOutcome::Upward(p) => norm(p) >= self.k,
            LevelOutcome::Downward(p) => norm(p) <= self.k,
            LevelOutcome::Fixed(_) => true,
        });
        if !self.verify {
            self.observer.certificate(&claim, None);
            return Ok(claim);
        }
        let p = claim.point();
        let b = self.ask(phase, p)?;
        let l = b.labels();
        let ok = match claim {
            LevelOutcome::Upward(_) => l.is_upward,
            LevelOutcome::Downward(_) => l.is_downward,
            LevelOutcome::Fixed(_) => l.is_fixed,
        };
        self.observer.certificate(&claim, Some(ok));
        if !ok {
            let mut implicated = sources.to_vec();
            implicated.push(p);
            return Err(self.fail("implied certificate failed", &implicated));
        }
        Ok(if l.is_fixed { LevelOutcome::Fixed(p) } else { claim })
    }

    /// Query in a frame; returns the local point with its local value.
    fn ask_in(&mut self, frame: &Frame, q: P3) -> Result<Bound> {
        let world = self.ask(Phase::Init, frame.map(q))?;
        Ok(Bound { point: q, value: frame.map(world.value) })
    }

    fn face_kind(&mut self, frame: &Frame, axis: usize, b: Bound) -> Result<Step<FaceKind>> {
        let (j, p) = others(axis);
        let (q, f) = (b.point, b.value);
        let l = b.labels();
        if let Some(o) = direct(q, &l) {
            return Ok(ControlFlow::Break(frame.outcome(o)));
        }
        if l.i_downward.contains(axis) {
            return Ok(ControlFlow::Continue(FaceKind::Found));
        }
        if f[axis] > q[axis] {
            // only possible if F leaves the box
            return Err(self.fail("initialization: face point moves outward", &[frame.map(q)]));
        }
        Ok(ControlFlow::Continue(if f[p] < q[p] {
            FaceKind::Left
        } else {
            debug_assert!(f[j] < q[j]);
            FaceKind::Right
        }))
    }

    /// Finds an `axis`-downward point (in frame coordinates) whose coordinate
    /// `axis` is as large as possible on the level set.
    fn face_search(&mut self, frame: Frame, axis: usize) -> Result<Step<Bound>> {
        let (j, p) = others(axis);
        let k = frame.level(self.k);
        let bx = GridBox { lo: pt(self.bx.lo), hi: pt(self.bx.hi) };
        let mut left = crate::lattice::extreme_level_point(&bx, k, axis, j)?.to_array3();
        let mut right = crate::lattice::extreme_level_point(&bx, k, axis, p)?.to_array3();
        let face = left[axis];

        let found = |me: &mut Self, b: Bound| -> Result<Step<Bound>> {
            let world = me.oracle.query3(frame.map(b.point))?;
            Ok(ControlFlow::Continue(Bound { point: frame.map(b.point), value: world }))
        };

        let lb = self.ask_in(&frame, left)?;
        match self.face_kind(&frame, axis, lb)? {
            ControlFlow::Break(o) => return Ok(ControlFlow::Break(o)),
            ControlFlow::Continue(FaceKind::Found) => return found(self, lb),
            ControlFlow::Continue(FaceKind::Left) => {}
            ControlFlow::Continue(FaceKind::Right) => {
                return Err(self.fail("initialization: low end of face has the wrong type", &[frame.map(left)]))
            }
        }
        let rb = self.ask_in(&frame, right)?;
        match self.face_kind(&frame, axis, rb)? {
            ControlFlow::Break(o) => return Ok(ControlFlow::Break(o)),
            ControlFlow::Continue(FaceKind::Found) => return found(self, rb),
            ControlFlow::Continue(FaceKind::Right) => {}
            ControlFlow::Continue(FaceKind::Left) => {
                return Err(self.fail("initialization: high end of face has the wrong type", &[frame.map(right)]))
            }
        }

        while right[j] - left[j] > 1 {
            let mid = left[j] + (right[j] - left[j]) / 2;
            let mut q = [0; 3];
            q[axis] = face;
            q[j] = mid;
            q[p] = k - face - mid;
            let qb = self.ask_in(&frame, q)?;
            match self.face_kind(&frame, axis, qb)? {
                ControlFlow::Break(o) => return Ok(ControlFlow::Break(o)),
                ControlFlow::Continue(FaceKind::Found) => return found(self, qb),
                ControlFlow::Continue(FaceKind::Left) => left = q,
                ControlFlow::Continue(FaceKind::Right) => right = q,
            }
        }
        // F(left)_p < left_p and F(right)_j < right_j with the two adjacent: the meet is downward.
        let claim = frame.outcome(LevelOutcome::Downward(meet(&[left, right])));
        self.certify(Phase::Init, claim, &[frame.map(left), frame.map(right)]).map(ControlFlow::Break)
    }

    /// Initial `(up[axis], down[axis])`: an axis-upward point with coordinate
    /// `axis` minimal and an axis-downward point with it maximal on `box ∩ L_k`.
    pub fn init_direction(&mut self, axis: usize) -> Result<Step<(Bound, Bound)>> {
        let plain = Frame { lo: self.bx.lo, hi: self.bx.hi, mirrored: false };
        let down = match self.face_search(plain, axis)? {
            ControlFlow::Break(o) => return Ok(ControlFlow::Break(o)),
            ControlFlow::Continue(b) => b,
        };
        let up = match self.face_search(Frame { mirrored: true, ..plain }, axis)? {
            ControlFlow::Break(o) => return Ok(ControlFlow::Break(o)),
            ControlFlow::Continue(b) => b,
        };
        Ok(ControlFlow::Continue((up, down)))
    }

    pub fn initial_state(&mut self) -> Result<Step<LevelState>> {
        let mut up = [Bound { point: [0; 3], value: [0; 3] }; 3];
        let mut down = up;
        for axis in 0..3 {
            match self.init_direction(axis)? {
                ControlFlow::Break(o) => return Ok(ControlFlow::Break(o)),
                ControlFlow::Continue((u, d)) => {
                    up[axis] = u;
                    down[axis] = d;
                }
            }
        }
        Ok(ControlFlow::Continue(LevelState { bx: self.bx, k: self.k, up, down }))
    }

    pub fn search_space(&mut self, state: &LevelState) -> Result<SearchSpaceView> {
        match state.search_space() {
            Some(v) => Ok(v),
            None => Err(self.fail("remaining search space is empty", &state.points())),
        }
    }

    /// The query point used by [`shrink_once`](Self::shrink_once).
    pub fn shrink_point(&self, state: &LevelState, view: &SearchSpaceView) -> Result<P3> {
        let lower: P3 = std::array::from_fn(|a| view.ell[a] + ceil_sixth(view.dia[a]));
        let upper: P3 = std::array::from_fn(|a| view.r[a] - ceil_sixth(view.dia[a]));
        level_point(&pt(lower), &pt(upper), state.k)
            .map(|q| q.to_array3())
            .map_err(|e| Error::Internal(format!("shrink point: {e}")))
    }

    fn absorb(&mut self, state: &mut LevelState, q: Bound, step: &str) -> Result<()> {
        if state.absorb(q) == 0 {
            let mut implicated = state.points();
            implicated.push(q.point);
            return Err(self.fail(step, &implicated));
        }
        Ok(())
    }

    /// One query at a balanced point of `S`; requires all `dia > 1` and `max dia >= 6`.
    pub fn shrink_once(&mut self, mut state: LevelState) -> Result<Step<LevelState>> {
        let view = self.search_space(&state)?;
        let q = self.shrink_point(&state, &view)?;
        let b = self.ask(Phase::Shrink, q)?;
        if let Some(o) = direct(q, &b.labels()) {
            self.observer.shrink_step(&state, q, None);
            return Ok(ControlFlow::Break(o));
        }
        let before = state.clone();
        self.absorb(&mut state, b, "shrink: point without a usable label")?;
        self.observer.shrink_step(&before, q, Some(&state));
        Ok(ControlFlow::Continue(state))
    }

    /// Progress step once `S` is small; requires all `dia > 1`.
    pub fn small_case_step(&mut self, mut state: LevelState) -> Result<Step<LevelState>> {
        let before = state.clone();
        let step = self.small_case_inner(&mut state)?;
        self.observer.small_step(&before, step.is_continue().then_some(&state));
        Ok(step.map_continue(|()| state))
    }

    fn small_case_inner(&mut self, state: &mut LevelState) -> Result<Step<()>> {
        let view = self.search_space(state)?;
        let (ell, r, k) = (view.ell, view.r, state.k);
        let interior =
            state.members().into_iter().find(|x| (0..3).all(|a| x[a] != ell[a] && x[a] != r[a]));
        if let Some(q) = interior {
            let b = self.ask(Phase::Small, q)?;
            if let Some(o) = direct(q, &b.labels()) {
                return Ok(ControlFlow::Break(o));
            }
            self.absorb(state, b, "small case: interior point without a usable label")?;
            return Ok(ControlFlow::Continue(()));
        }

        let low_side = norm(ell) + 3 > k;
        let high_side = norm(r) - 3 < k;
        if low_side && norm(ell) + 3 != k + 1 || !low_side && high_side && norm(r) - 3 != k - 1 || !(low_side || high_side)
        {
            return Err(Error::Internal(format!("small case: no interior point but ell={ell:?} r={r:?} k={k}")));
        }
        // Probes one step inside the low (or high) corner, pinned at coordinate i.
        let mut probes = Vec::with_capacity(3);
        for i in 0..3 {
            let q: P3 = if low_side {
                std::array::from_fn(|a| if a == i { ell[a] } else { ell[a] + 1 })
            } else {
                std::array::from_fn(|a| if a == i { r[a] } else { r[a] - 1 })
            };
            let b = self.ask(Phase::Small, q)?;
            let l = b.labels();
            if let Some(o) = direct(q, &l) {
                return Ok(ControlFlow::Break(o));
            }
            let expected = if low_side { l.i_upward.contains(i) } else { l.i_downward.contains(i) };
            if !expected {
                let dia_before: i64 = view.dia.iter().sum();
                self.absorb(state, b, "small case: probe without a usable label")?;
                let dia_after: i64 = self.search_space(state)?.dia.iter().sum();
                if dia_after >= dia_before {
                    return Err(Error::Internal(format!("small case: probe {q:?} made no progress")));
                }
                return Ok(ControlFlow::Continue(()));
            }
            probes.push(q);
        }
        let claim = if low_side {
            LevelOutcome::Upward(join(&probes))
        } else {
            LevelOutcome::Downward(meet(&probes))
        };
        self.certify(Phase::Small, claim, &probes).map(ControlFlow::Break)
    }

    pub fn find_configuration(&mut self, state: &LevelState) -> Result<Config> {
        match find_configuration(state) {
            Some(cfg) => Ok(cfg),
            None => Err(self.fail("no configuration among the bounding points", &state.points())),
        }
    }

    pub fn resolve(&mut self, cfg: &Config) -> Result<LevelOutcome> {
        match cfg {
            Config::First { x, y, .. } => {
                let claim = resolve_first(cfg).expect("first configuration");
                self.certify(Phase::Third, claim, &[x.point, y.point])
            }
            Config::Second { x, y, z, .. } => {
                let claim = resolve_second(cfg).expect("second configuration");
                self.certify(Phase::Third, claim, &[x.point, y.point, z.point])
            }
            Config::Third { x, y, axis } => self.resolve_third(*x, *y, *axis),
        }
    }

    /// Binary search between an `axis`-upward `x` and an `axis`-downward `y`
    /// with `x_axis <= y_axis <= x_axis + 1`.
    pub fn resolve_third(&mut self, x: Bound, y: Bound, axis: usize) -> Result<LevelOutcome> {
        let i = axis;
        let (xp, yp) = (x.point, y.point);
        let pre = labels(xp, x.value).i_upward.contains(i)
            && labels(yp, y.value).i_downward.contains(i)
            && xp[i] <= yp[i]
            && yp[i] <= xp[i] + 1
            && norm(xp) == self.k
            && norm(yp) == self.k;
        if !pre {
            return Err(Error::Internal(format!("third configuration precondition fails for {xp:?}, {yp:?}")));
        }
        let (a, b) = others(i);
        let j = if yp[a] < xp[a] { a } else { b };
        let p = 3 - i - j;
        debug_assert!(yp[j] < xp[j] && xp[p] <= yp[p]);

        if x.value[j] == xp[j] {
            return self.certify(Phase::Third, LevelOutcome::Upward(join(&[xp, yp])), &[xp, yp]);
        }
        if y.value[j] == yp[j] {
            return self.certify(Phase::Third, LevelOutcome::Downward(meet(&[xp, yp])), &[xp, yp]);
        }

        let k = self.k;
        let seg = move |t: i64| -> P3 {
            let mut q = [0; 3];
            q[i] = yp[i];
            q[j] = t;
            q[p] = k - yp[i] - t;
            q
        };
        // Type (2) low end: F_i < q_i, F_j > q_j. Type (1) high end: F_i >= q_i, F_j < q_j.
        let mut left = y;
        let mut right;
        if xp[j] - 1 == yp[j] {
            return self.certify(Phase::Third, LevelOutcome::Downward(meet(&[yp, xp])), &[xp, yp]);
        }
        let q = seg(xp[j] - 1);
        let rb = self.ask(Phase::Third, q)?;
        match self.third_case(x, y, rb, i, j)? {
            ThirdCase::Done(o) => return Ok(o),
            ThirdCase::High => right = rb,
            ThirdCase::Low => {
                return self.certify(Phase::Third, LevelOutcome::Downward(meet(&[q, xp])), &[xp, q]);
            }
        }
        while right.point[j] - left.point[j] > 1 {
            let mid = left.point[j] + (right.point[j] - left.point[j]) / 2;
            let qb = self.ask(Phase::Third, seg(mid))?;
            match self.third_case(x, y, qb, i, j)? {
                ThirdCase::Done(o) => return Ok(o),
                ThirdCase::High => right = qb,
                ThirdCase::Low => left = qb,
            }
        }
        let (l, r) = (left.point, right.point);
        let claim = if right.value[p] <= r[p] {
            LevelOutcome::Downward(meet(&[l, r]))
        } else {
            LevelOutcome::Upward(join(&[l, r]))
        };
        self.certify(Phase::Third, claim, &[l, r])
    }

    fn third_case(&mut self, x: Bound, y: Bound, qb: Bound, i: usize, j: usize) -> Result<ThirdCase> {
        let (q, f) = (qb.point, qb.value);
        if let Some(o) = direct(q, &qb.labels()) {
            return Ok(ThirdCase::Done(o));
        }
        Ok(match (f[i] >= q[i], f[j].cmp(&q[j])) {
            (true, std::cmp::Ordering::Less) => ThirdCase::High,
            (false, std::cmp::Ordering::Greater) => ThirdCase::Low,
            (true, _) => ThirdCase::Done(self.certify(
                Phase::Third,
                LevelOutcome::Upward(join(&[q, y.point])),
                &[q, y.point],
            )?),
            (false, _) => ThirdCase::Done(self.certify(
                Phase::Third,
                LevelOutcome::Downward(meet(&[x.point, q])),
                &[x.point, q],
            )?),
        })
    }

    /// The whole per-level pipeline.
    pub fn run(&mut self) -> Result<LevelOutcome> {
        self.observer.level_started(&self.bx, self.k);
        let mut state = match self.initial_state()? {
            ControlFlow::Break(o) => return Ok(o),
            ControlFlow::Continue(s) => s,
        };
        self.observer.state_ready(&state);
        loop {
            let view = self.search_space(&state)?;
            let all_wide = view.dia.iter().all(|&d| d > 1);
            if !all_wide {
                break;
            }
            let step = if view.dia.iter().max().copied().unwrap_or(0) >= 6 {
                self.shrink_once(state)?
            } else {
                self.small_case_step(state)?
            };
            state = match step {
                ControlFlow::Break(o) => return Ok(o),
                ControlFlow::Continue(s) => s,
            };
            self.observer.state_ready(&state);
        }
        let cfg = self.find_configuration(&state)?;
        self.observer.configuration(&state, &cfg);
        self.resolve(&cfg)
    }
}

enum ThirdCase {
    Done(LevelOutcome),
    High,
    Low,
}
