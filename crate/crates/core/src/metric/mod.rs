//! Light-cone and round-trip distances over a window.
//!
//! `r(X, Y)` is the least `n` such that a path of nonzero maps runs from `X`
//! to `τ^{-n} Y`. Paths use all maps, not only irreducible ones.
//!
//! Certification. In windows built from a quiver no nonzero map lowers the
//! level, so a path from `X` to level `L` never leaves the levels
//! `[level X, L]`, all of which lie in the window. The least reachable level
//! on the orbit of `Y` is therefore exact, and when none is reachable every
//! level up to the window top is excluded. Across components, or against
//! the direction of an elided arrow, no map exists anywhere and the distance
//! is infinite. Windows without that monotonicity (hand-built mocks) fall
//! back to requiring the reachable set to avoid the window's edge levels.

use std::cmp::Ordering;
use std::collections::VecDeque;

use serde::Serialize;

use crate::derived::{EngineError, ObjId, Window};


#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DistanceResult {
    Exact { value: i64 },
    /// No path exists at all; certified by component or elision structure,
    /// or by a reachable set closed inside the window.
    InfiniteInWindow,
    /// The window was too small. `upper_bound` is witnessed by a path; every
    /// value below `lower_bound` is excluded.
    Inconclusive {
        upper_bound: Option<i64>,
        lower_bound: Option<i64>,
    },
}

use DistanceResult::*;

fn min_opt(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl DistanceResult {
    pub fn exact(self) -> Option<i64> {
        match self {
            Exact { value } => Some(value),
            _ => None,
        }
    }

    pub fn is_exact(self) -> bool {
        matches!(self, Exact { .. })
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, InfiniteInWindow)
    }

    /// Known to be `≥ n` (infinity counts).
    pub fn at_least(self, n: i64) -> Option<bool> {
        match self {
            Exact { value } => Some(value >= n),
            InfiniteInWindow => Some(true),
            Inconclusive { lower_bound, upper_bound } => {
                if lower_bound.is_some_and(|l| l >= n) {
                    Some(true)
                } else if upper_bound.is_some_and(|u| u < n) {
                    Some(false)
                } else {
                    None
                }
            }
        }
    }

    fn lower(self) -> Option<i64> {
        match self {
            Exact { value } => Some(value),
            InfiniteInWindow => Some(i64::MAX),
            Inconclusive { lower_bound, .. } => lower_bound,
        }
    }

    fn upper(self) -> Option<i64> {
        match self {
            Exact { value } => Some(value),
            InfiniteInWindow => None,
            Inconclusive { upper_bound, .. } => upper_bound,
        }
    }

    /// Pointwise minimum.
    pub fn meet(self, other: DistanceResult) -> DistanceResult {
        match (self, other) {
            (InfiniteInWindow, x) | (x, InfiniteInWindow) => x,
            (Exact { value: a }, Exact { value: b }) => Exact { value: a.min(b) },
            (a, b) => {
                let upper = min_opt(a.upper(), b.upper());
                let lower = match (a.lower(), b.lower()) {
                    (Some(x), Some(y)) => Some(x.min(y)),
                    _ => None,
                };
                match (upper, lower) {
                    (Some(u), Some(l)) if u == l => Exact { value: u },
                    _ => Inconclusive {
                        upper_bound: upper,
                        lower_bound: lower,
                    },
                }
            }
        }
    }

    /// Sum, as used for round trips.
    pub fn plus(self, other: DistanceResult) -> DistanceResult {
        match (self, other) {
            (InfiniteInWindow, _) | (_, InfiniteInWindow) => InfiniteInWindow,
            (Exact { value: a }, Exact { value: b }) => Exact { value: a + b },
            (a, b) => Inconclusive {
                upper_bound: a.upper().zip(b.upper()).map(|(x, y)| x + y),
                lower_bound: a.lower().zip(b.lower()).map(|(x, y)| x + y),
            },
        }
    }

    pub fn certificate(self) -> &'static str {
        match self {
            Exact { .. } => "exact",
            InfiniteInWindow => "window-closed-infinite",
            Inconclusive { .. } => "inconclusive",
        }
    }
}

impl PartialOrd for DistanceResult {
    /// Only certified values compare.
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (Exact { value: a }, Exact { value: b }) => Some(a.cmp(b)),
            (InfiniteInWindow, InfiniteInWindow) => Some(Ordering::Equal),
            (Exact { .. }, InfiniteInWindow) => Some(Ordering::Less),
            (InfiniteInWindow, Exact { .. }) => Some(Ordering::Greater),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// Objects `Y` with `r(X, Y) = n`.
    Right,
    /// Objects `Y` with `r(Y, X) = n`.
    Left,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Sphere {
    pub center: ObjId,
    pub radius: i64,
    pub side: Side,
    pub members: Vec<ObjId>,
    /// Objects whose distance the window could not settle but might be `n`.
    pub inconclusive: Vec<ObjId>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Directing {
    Yes,
    No,
    Unknown,
}

/// Distance oracle over one window, with forward reachable sets cached.
#[derive(Debug, Clone)]
pub struct Metric<'w> {
    w: &'w Window,
    succ: Vec<Vec<ObjId>>,
    reach: Vec<Vec<bool>>,
}

impl<'w> Metric<'w> {
    pub fn new(w: &'w Window) -> Self {
        let n = w.len();
        let succ: Vec<Vec<ObjId>> = (0..n).map(|a| (0..n).filter(|&b| b != a && w.hom_edge(a, b)).collect()).collect();
        let reach = (0..n)
            .map(|s| {
                let mut seen = vec![false; n];
                seen[s] = true;
                let mut queue = VecDeque::from([s]);
                while let Some(a) = queue.pop_front() {
                    for &b in &succ[a] {
                        if !seen[b] {
                            seen[b] = true;
                            queue.push_back(b);
                        }
                    }
                }
                seen
            })
            .collect();
        Metric { w, succ, reach }
    }

    pub fn window(&self) -> &'w Window {
        self.w
    }

    fn check(&self, id: ObjId) -> Result<(), EngineError> {
        if id < self.w.len() {
            Ok(())
        } else {
            Err(EngineError::NotInWindow(format!("object #{id}")))
        }
    }

    pub fn hom_edge(&self, a: ObjId, b: ObjId) -> Result<bool, EngineError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.w.hom_edge(a, b))
    }

    /// Objects reachable from `a` by a path of nonzero maps (including `a`).
    pub fn reachable(&self, a: ObjId) -> &[bool] {
        &self.reach[a]
    }

    pub fn successors(&self, a: ObjId) -> &[ObjId] {
        &self.succ[a]
    }

    fn closed(&self, a: ObjId) -> bool {
        self.reach[a]
            .iter()
            .enumerate()
            .all(|(z, &r)| !r || (self.w.object(z).level != self.w.hi() && self.w.object(z).level != self.w.lo()))
    }

    /// `r(X, Y)`.
    pub fn lightcone(&self, x: ObjId, y: ObjId) -> Result<DistanceResult, EngineError> {
        self.check(x)?;
        self.check(y)?;
        let (ox, oy) = (self.w.object(x).orbit, self.w.object(y).orbit);
        if !self.w.same_component(ox, oy) || !self.w.forward(ox, oy) {
            return Ok(InfiniteInWindow);
        }
        let ly = self.w.object(y).level;
        let best = (self.w.lo()..=self.w.hi())
            .filter_map(|l| self.w.id(oy, l))
            .find(|&z| self.reach[x][z])
            .map(|z| self.w.object(z).level - ly);
        if self.w.is_level_monotone() {
            return Ok(match best {
                Some(value) => Exact { value },
                None => Inconclusive {
                    upper_bound: None,
                    lower_bound: Some(self.w.hi() - ly + 1),
                },
            });
        }
        Ok(match (best, self.closed(x)) {
            (Some(value), true) => Exact { value },
            (None, true) => InfiniteInWindow,
            (upper_bound, false) => Inconclusive {
                upper_bound,
                lower_bound: None,
            },
        })
    }

    /// `d(X, Y) = r(X, Y) + r(Y, X)`.
    pub fn roundtrip(&self, x: ObjId, y: ObjId) -> Result<DistanceResult, EngineError> {
        Ok(self.lightcone(x, y)?.plus(self.lightcone(y, x)?))
    }

    /// `r(T, X)`: minimum over the set; the empty set is infinitely far.
    pub fn from_set(&self, t: &[ObjId], x: ObjId) -> Result<DistanceResult, EngineError> {
        t.iter().try_fold(InfiniteInWindow, |acc, &s| Ok(acc.meet(self.lightcone(s, x)?)))
    }

    /// `r(X, T)`.
    pub fn to_set(&self, x: ObjId, t: &[ObjId]) -> Result<DistanceResult, EngineError> {
        t.iter().try_fold(InfiniteInWindow, |acc, &s| Ok(acc.meet(self.lightcone(x, s)?)))
    }

    /// `d(T, X) = r(T, X) + r(X, T)`, each infimum taken separately.
    pub fn roundtrip_set(&self, t: &[ObjId], x: ObjId) -> Result<DistanceResult, EngineError> {
        Ok(self.from_set(t, x)?.plus(self.to_set(x, t)?))
    }

    fn sided(&self, x: ObjId, y: ObjId, side: Side) -> Result<DistanceResult, EngineError> {
        match side {
            Side::Right => self.lightcone(x, y),
            Side::Left => self.lightcone(y, x),
        }
    }

    pub fn sphere(&self, x: ObjId, n: i64, side: Side) -> Result<Sphere, EngineError> {
        self.sphere_within(x, n, side, 0..self.w.len())
    }

    /// Sphere restricted to the given candidates.
    pub fn sphere_within(&self, x: ObjId, n: i64, side: Side, candidates: impl IntoIterator<Item = ObjId>) -> Result<Sphere, EngineError> {
        self.check(x)?;
        let mut members = Vec::new();
        let mut inconclusive = Vec::new();
        for y in candidates {
            match self.sided(x, y, side)? {
                Exact { value } if value == n => members.push(y),
                r @ Inconclusive { .. } if r.lower().map_or(true, |l| l <= n) && r.upper().map_or(true, |u| u >= n) => {
                    inconclusive.push(y)
                }
                _ => {}
            }
        }
        Ok(Sphere {
            center: x,
            radius: n,
            side,
            members,
            inconclusive,
        })
    }

    /// No nontrivial path from `X` back to itself.
    pub fn is_directing(&self, x: ObjId) -> Result<Directing, EngineError> {
        self.check(x)?;
        if self.w.dhom(x, x) > 1 {
            // A local endomorphism ring bigger than the field has radical maps.
            return Ok(Directing::No);
        }
        if self.succ[x].iter().any(|&s| self.reach[s][x]) {
            return Ok(Directing::No);
        }
        if self.w.is_level_monotone() {
            // A cycle would have to stay on one level, and one level is fully visible.
            return Ok(Directing::Yes);
        }
        Ok(if self.closed(x) { Directing::Yes } else { Directing::Unknown })
    }
}
