use crate::lattice::{labels_from_signs, sign_vector, LabelSet};

pub type P3 = [i64; 3];

pub(crate) fn others(axis: usize) -> (usize, usize) {
    match axis {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    }
}

pub(crate) fn norm(x: P3) -> i64 {
    x[0] + x[1] + x[2]
}

pub(crate) fn meet(points: &[P3]) -> P3 {
    let mut out = points[0];
    for p in &points[1..] {
        for a in 0..3 {
            out[a] = out[a].min(p[a]);
        }
    }
    out
}

pub(crate) fn join(points: &[P3]) -> P3 {
    let mut out = points[0];
    for p in &points[1..] {
        for a in 0..3 {
            out[a] = out[a].max(p[a]);
        }
    }
    out
}

pub(crate) fn labels(x: P3, fx: P3) -> LabelSet {
    labels_from_signs(&sign_vector(&x, &fx))
}

/// Inclusive 3D box with certified corners: `lo` upward, `hi` downward.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Box3 {
    pub lo: P3,
    pub hi: P3,
}

impl Box3 {
    /// Sum of side lengths.
    pub fn size(&self) -> i64 {
        (0..3).map(|a| self.hi[a] - self.lo[a] + 1).sum()
    }

    pub fn contains(&self, x: P3) -> bool {
        (0..3).all(|a| self.lo[a] <= x[a] && x[a] <= self.hi[a])
    }

    pub fn is_degenerate(&self) -> bool {
        (0..3).any(|a| self.lo[a] == self.hi[a])
    }
}

/// A queried point together with its cached value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bound {
    pub point: P3,
    pub value: P3,
}

impl Bound {
    pub fn labels(&self) -> LabelSet {
        labels(self.point, self.value)
    }
}

/// The six bounding points on `L_k`: `up[i]` is i-upward, `down[i]` is i-downward.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelState {
    pub bx: Box3,
    pub k: i64,
    pub up: [Bound; 3],
    pub down: [Bound; 3],
}

/// Coordinate ranges of the remaining search space `S`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchSpaceView {
    pub ell: P3,
    pub r: P3,
    pub dia: P3,
}

impl LevelState {
    /// `ell_i = min_S x_i`, `r_i = max_S x_i`; `None` when `S` is empty.
    pub fn search_space(&self) -> Option<SearchSpaceView> {
        let (lo, hi) = (self.bx.lo, self.bx.hi);
        let a: P3 = std::array::from_fn(|i| self.up[i].point[i].max(lo[i]));
        let b: P3 = std::array::from_fn(|i| self.down[i].point[i].min(hi[i]));
        if (0..3).any(|i| a[i] > b[i]) || norm(a) > self.k || norm(b) < self.k {
            return None;
        }
        let mut view = SearchSpaceView { ell: [0; 3], r: [0; 3], dia: [0; 3] };
        for i in 0..3 {
            let (j, p) = others(i);
            view.ell[i] = a[i].max(self.k - b[j] - b[p]);
            view.r[i] = b[i].min(self.k - a[j] - a[p]);
            view.dia[i] = view.r[i] - view.ell[i];
        }
        Some(view)
    }

    /// Whether `x` lies in `S`.
    pub fn admits(&self, x: P3) -> bool {
        norm(x) == self.k
            && self.bx.contains(x)
            && (0..3).all(|i| self.up[i].point[i] <= x[i] && x[i] <= self.down[i].point[i])
    }

    /// Every point of `S`, lexicographic. Only sensible when `S` is small.
    pub fn members(&self) -> Vec<P3> {
        let Some(view) = self.search_space() else { return Vec::new() };
        let mut out = Vec::new();
        for x0 in view.ell[0]..=view.r[0] {
            for x1 in view.ell[1]..=view.r[1] {
                let x = [x0, x1, self.k - x0 - x1];
                if self.admits(x) {
                    out.push(x);
                }
            }
        }
        out
    }

    /// Checks every structural invariant; returns a description of the first failure.
    pub fn check(&self) -> Result<(), String> {
        for i in 0..3 {
            for (name, b) in [("up", &self.up[i]), ("down", &self.down[i])] {
                if norm(b.point) != self.k || !self.bx.contains(b.point) {
                    return Err(format!("{name}[{}] = {:?} is off the level set or box", i + 1, b.point));
                }
            }
            if !self.up[i].labels().i_upward.contains(i) {
                return Err(format!("up[{}] = {:?} is not {}-upward", i + 1, self.up[i].point, i + 1));
            }
            if !self.down[i].labels().i_downward.contains(i) {
                return Err(format!("down[{}] = {:?} is not {}-downward", i + 1, self.down[i].point, i + 1));
            }
            if self.up[i].point[i] > self.down[i].point[i] {
                return Err(format!("up[{0}]_{0} > down[{0}]_{0}", i + 1));
            }
        }
        if self.search_space().is_none() {
            return Err("remaining search space is empty".into());
        }
        Ok(())
    }

    /// Replaces bounding points according to every i-upward / i-downward label of
    /// `q`; returns how many were replaced.
    pub fn absorb(&mut self, q: Bound) -> usize {
        let labels = q.labels();
        let mut applied = 0;
        for i in labels.i_upward.iter() {
            self.up[i] = q;
            applied += 1;
        }
        for i in labels.i_downward.iter() {
            self.down[i] = q;
            applied += 1;
        }
        applied
    }

    pub(crate) fn points(&self) -> Vec<P3> {
        self.up.iter().chain(&self.down).map(|b| b.point).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bound(point: P3, value: P3) -> Bound {
        Bound { point, value }
    }

    fn cube(n: i64) -> Box3 {
        Box3 { lo: [1; 3], hi: [n; 3] }
    }

    // Brute-force min/max over S straight from its definition.
    fn enumerate_view(state: &LevelState) -> Option<SearchSpaceView> {
        let mut members = Vec::new();
        for x0 in state.bx.lo[0]..=state.bx.hi[0] {
            for x1 in state.bx.lo[1]..=state.bx.hi[1] {
                let x = [x0, x1, state.k - x0 - x1];
                if state.bx.contains(x) && (0..3).all(|i| state.up[i].point[i] <= x[i] && x[i] <= state.down[i].point[i]) {
                    members.push(x);
                }
            }
        }
        if members.is_empty() {
            return None;
        }
        let ell: P3 = std::array::from_fn(|i| members.iter().map(|x| x[i]).min().unwrap());
        let r: P3 = std::array::from_fn(|i| members.iter().map(|x| x[i]).max().unwrap());
        Some(SearchSpaceView { ell, r, dia: std::array::from_fn(|i| r[i] - ell[i]) })
    }

    #[test]
    fn wide_open_state_on_cube_of_eight() {
        // Only the i-th coordinate of up[i] / down[i] matters for S.
        let state = LevelState {
            bx: cube(8),
            k: 12,
            up: [bound([1, 3, 8], [2, 3, 8]), bound([8, 1, 3], [8, 2, 3]), bound([3, 8, 1], [3, 8, 2])],
            down: [bound([8, 3, 1], [7, 3, 1]), bound([1, 8, 3], [1, 7, 3]), bound([3, 1, 8], [3, 1, 7])],
        };
        let view = state.search_space().unwrap();
        assert_eq!(view.ell, [1, 1, 1]);
        assert_eq!(view.r, [8, 8, 8]);
        assert_eq!(view.dia, [7, 7, 7]);
        assert_eq!(Some(view), enumerate_view(&state));
    }

    #[test]
    fn pinched_axis_has_zero_diameter() {
        let state = LevelState {
            bx: cube(8),
            k: 12,
            up: [bound([4, 3, 5], [5, 3, 5]), bound([8, 1, 3], [8, 2, 3]), bound([3, 8, 1], [3, 8, 2])],
            down: [bound([4, 7, 1], [3, 7, 1]), bound([1, 8, 3], [1, 7, 3]), bound([3, 1, 8], [3, 1, 7])],
        };
        assert_eq!(state.search_space().unwrap().dia[0], 0);
    }

    // Exhaustive over small boxes: view formula agrees with enumeration.
    #[test]
    fn search_space_matches_enumeration() {
        let mut checked = 0;
        for n in 2..=5i64 {
            let bx = Box3 { lo: [1, 2, 1], hi: [n, n + 1, n - 1 + (n % 2)] };
            for k in norm(bx.lo)..=norm(bx.hi) {
                // Bounds: every combination of coordinate thresholds; points are placeholders,
                // only their i-th coordinate enters S.
                let range = |i: usize| bx.lo[i]..=bx.hi[i];
                for u0 in range(0) {
                    for d0 in range(0).filter(|&d| d >= u0) {
                        for u1 in range(1) {
                            for d1 in range(1).filter(|&d| d >= u1) {
                                for u2 in range(2).step_by(2) {
                                    for d2 in range(2).filter(|&d| d >= u2) {
                                        let mk = |a: usize, v: i64| {
                                            let mut p = bx.lo;
                                            p[a] = v;
                                            bound(p, p)
                                        };
                                        let state = LevelState {
                                            bx,
                                            k,
                                            up: [mk(0, u0), mk(1, u1), mk(2, u2)],
                                            down: [mk(0, d0), mk(1, d1), mk(2, d2)],
                                        };
                                        assert_eq!(state.search_space(), enumerate_view(&state), "{state:?}");
                                        checked += 1;
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        assert!(checked > 1000);
    }

    #[test]
    fn absorb_applies_every_label() {
        let mut state = LevelState {
            bx: cube(8),
            k: 12,
            up: [bound([1, 3, 8], [2, 3, 8]), bound([8, 1, 3], [8, 2, 3]), bound([3, 8, 1], [3, 8, 2])],
            down: [bound([8, 3, 1], [7, 3, 1]), bound([1, 8, 3], [1, 7, 3]), bound([3, 1, 8], [3, 1, 7])],
        };
        // 1-upward and 3-downward at once
        let q = bound([4, 4, 4], [5, 4, 3]);
        assert_eq!(state.absorb(q), 2);
        assert_eq!(state.up[0], q);
        assert_eq!(state.down[2], q);
        assert!(state.check().is_ok());
    }
}
