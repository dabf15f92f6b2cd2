//! Hereditary sections of a window: verification, light-cone sections,
//! hearts of the associated split t-structures, seed sets and tilts.
//!
//! Every global statement is checked at window scale and reported as a
//! [`Certificate`]; nothing here asserts a claim it has not verified.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::derived::{EngineError, ObjId, Window};
use crate::metric::{Directing, DistanceResult, Metric, Side};

mod extend;
mod symbolic;
mod tilt;

pub use extend::{check_condition_star, extend_with_marks, Extension};
pub use symbolic::{symbolic_rays, symbolic_star, RaySide, SymbolicRay, ThreadPart, ThreadSlicePolicy};
pub use tilt::{check_seed_properties, choose_seed, dualizing_check, ensure_nonthread, homs_in_q_check, tilt_construction};


#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SectionError {
    #[error("center {0} is not directing")]
    NonDirectingCenter(String),
    #[error("orbit {0} met more than once")]
    NotUniqueOnOrbit(String),
    #[error("section invalid: {0}")]
    SectionInvalid(String),
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("inconclusive at window scale: {0}")]
    InconclusiveAtWindow(String),
    #[error("object {0} is not picked by the section")]
    NotPicked(String),
    #[error("unknown orbit {0:?}")]
    UnknownOrbit(String),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Threads(#[from] Box<crate::threads::ThreadError>),
}

impl From<crate::threads::ThreadError> for SectionError {
    fn from(e: crate::threads::ThreadError) -> Self {
        SectionError::Threads(Box::new(e))
    }
}

/// At most one level per orbit of the window.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Section {
    pub picks: BTreeMap<usize, i64>,
    /// Orbits the construction could not settle at this window size.
    pub flagged: BTreeSet<usize>,
    pub policies: Vec<ThreadSlicePolicy>,
}

impl Section {
    pub fn new(picks: impl IntoIterator<Item = (usize, i64)>) -> Self {
        Section {
            picks: picks.into_iter().collect(),
            ..Default::default()
        }
    }

    /// Every orbit at level 0.
    pub fn projective(w: &Window) -> Self {
        Section::new((0..w.orbit_count()).map(|o| (o, 0)))
    }

    pub fn from_ids(w: &Window, ids: &[ObjId]) -> Result<Self, SectionError> {
        let mut picks = BTreeMap::new();
        for &id in ids {
            let o = w.object(id);
            if picks.insert(o.orbit, o.level).is_some_and(|l| l != o.level) {
                return Err(SectionError::NotUniqueOnOrbit(w.quiver().name(o.orbit).to_string()));
            }
        }
        Ok(Section {
            picks,
            ..Default::default()
        })
    }

    /// Picked objects that lie in the window.
    pub fn ids(&self, w: &Window) -> Vec<ObjId> {
        self.picks.iter().filter_map(|(&o, &l)| w.id(o, l)).collect()
    }

    pub fn contains(&self, w: &Window, id: ObjId) -> bool {
        let o = w.object(id);
        self.picks.get(&o.orbit) == Some(&o.level)
    }

    pub fn unpicked(&self, w: &Window) -> Vec<usize> {
        (0..w.orbit_count()).filter(|o| !self.picks.contains_key(o)).collect()
    }

    pub fn orbits(&self) -> BTreeSet<usize> {
        self.picks.keys().copied().collect()
    }

    /// `{"picks": {orbit: level}, "policies": [...]}`; a bare `{orbit: level}`
    /// map is accepted as well.
    pub fn from_json(w: &Window, v: &Value) -> Result<Self, SectionError> {
        let (picks_v, policies_v) = match v.get("picks") {
            Some(p) => (p, v.get("policies")),
            None => (v, None),
        };
        let obj = picks_v
            .as_object()
            .ok_or_else(|| SectionError::SectionInvalid("picks must be an object".into()))?;
        let mut picks = BTreeMap::new();
        for (name, level) in obj {
            let o = w.quiver().vertex(name).map_err(|_| SectionError::UnknownOrbit(name.clone()))?;
            let level = level
                .as_i64()
                .ok_or_else(|| SectionError::SectionInvalid(format!("level of {name} must be an integer")))?;
            picks.insert(o, level);
        }
        let policies = match policies_v {
            Some(p) => serde_json::from_value(p.clone()).map_err(|e| SectionError::SectionInvalid(e.to_string()))?,
            None => Vec::new(),
        };
        Ok(Section {
            picks,
            flagged: BTreeSet::new(),
            policies,
        })
    }

    pub fn to_json(&self, w: &Window) -> Value {
        let picks: serde_json::Map<String, Value> = self
            .picks
            .iter()
            .map(|(&o, &l)| (w.quiver().name(o).to_string(), json!(l)))
            .collect();
        let mut v = json!({ "picks": picks });
        if !self.flagged.is_empty() {
            v["flagged"] = json!(self.flagged.iter().map(|&o| w.quiver().name(o)).collect::<Vec<_>>());
        }
        if !self.policies.is_empty() {
            v["policies"] = serde_json::to_value(&self.policies).expect("policies serialise");
        }
        v
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub clause: String,
    pub objects: Vec<String>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail { violations: Vec<Violation> },
    InconclusiveAtWindow { reasons: Vec<String> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub check: String,
    #[serde(flatten)]
    pub verdict: Verdict,
    pub notes: Vec<String>,
}

impl Certificate {
    pub fn is_pass(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn is_fail(&self) -> bool {
        matches!(self.verdict, Verdict::Fail { .. })
    }

    pub fn violations(&self) -> &[Violation] {
        match &self.verdict {
            Verdict::Fail { violations } => violations,
            _ => &[],
        }
    }

    /// Combined verdict: any failure fails, then any inconclusive part.
    pub fn merge(check: &str, parts: Vec<Certificate>) -> Certificate {
        let mut b = CertBuilder::new(check);
        for p in parts {
            b.notes.extend(p.notes);
            match p.verdict {
                Verdict::Pass => {}
                Verdict::Fail { violations } => b.violations.extend(violations),
                Verdict::InconclusiveAtWindow { reasons } => b.reasons.extend(reasons),
            }
        }
        b.finish()
    }
}

pub(crate) struct CertBuilder {
    check: String,
    violations: Vec<Violation>,
    reasons: Vec<String>,
    notes: Vec<String>,
}

impl CertBuilder {
    pub(crate) fn new(check: &str) -> Self {
        CertBuilder {
            check: check.to_string(),
            violations: Vec::new(),
            reasons: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub(crate) fn fail(&mut self, clause: &str, objects: Vec<String>, detail: impl Into<String>) {
        self.violations.push(Violation {
            clause: clause.to_string(),
            objects,
            detail: detail.into(),
        });
    }

    pub(crate) fn unsure(&mut self, reason: impl Into<String>) {
        self.reasons.push(reason.into());
    }

    pub(crate) fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub(crate) fn finish(self) -> Certificate {
        let verdict = if !self.violations.is_empty() {
            Verdict::Fail {
                violations: self.violations,
            }
        } else if !self.reasons.is_empty() {
            Verdict::InconclusiveAtWindow { reasons: self.reasons }
        } else {
            Verdict::Pass
        };
        Certificate {
            check: self.check,
            verdict,
            notes: self.notes,
        }
    }
}

fn show(r: DistanceResult) -> String {
    match r {
        DistanceResult::Exact { value } => value.to_string(),
        DistanceResult::InfiniteInWindow => "∞".into(),
        DistanceResult::Inconclusive { upper_bound, lower_bound } => format!(
            "[{}, {}]",
            lower_bound.map_or("?".into(), |l| l.to_string()),
            upper_bound.map_or("?".into(), |u| u.to_string())
        ),
    }
}

/// Checks `r(X, Y) ≥ 0` on picks and τ-convexity: every object at finite
/// round-trip distance from the section has its orbit picked.
pub fn verify_section(m: &Metric, s: &Section) -> Certificate {
    let w = m.window();
    let mut b = CertBuilder::new("verify_section");
    let mut ids = Vec::new();
    for (&o, &l) in &s.picks {
        match w.id(o, l) {
            Some(id) => ids.push(id),
            None if o < w.orbit_count() => b.unsure(format!("pick {}@{l} lies outside the window", w.quiver().name(o))),
            None => b.fail("orbit", vec![format!("#{o}")], "unknown orbit"),
        }
    }
    for &x in &ids {
        for &y in &ids {
            let r = m.lightcone(x, y).expect("ids in window");
            match r.at_least(0) {
                Some(true) => {}
                Some(false) => b.fail("nonnegative", vec![w.label(x), w.label(y)], format!("r = {}", show(r))),
                None => b.unsure(format!("r({}, {}) undetermined: {}", w.label(x), w.label(y), show(r))),
            }
        }
    }
    if ids.len() == s.picks.len() {
        for o in s.unpicked(w) {
            // The round trip is τ-invariant, so one object per orbit suffices.
            let z = w.id(o, 0).expect("level 0 is in every window");
            let d = m.roundtrip_set(&ids, z).expect("ids in window");
            match d {
                DistanceResult::InfiniteInWindow => {}
                DistanceResult::Exact { .. } => b.fail(
                    "tau_convex",
                    vec![w.label(z)],
                    format!("orbit unpicked but at round-trip distance {}", show(d)),
                ),
                _ => b.unsure(format!("round trip to orbit {} undetermined", w.quiver().name(o))),
            }
        }
    }
    b.note(format!("{} picks, {} unpicked orbits", ids.len(), s.unpicked(w).len()));
    b.finish()
}

/// The right light cone `{Y : r(X, Y) = 0}` (or the left one).
pub fn light_cone_section(m: &Metric, x: ObjId, side: Side) -> Result<Section, SectionError> {
    let w = m.window();
    if m.is_directing(x)? != Directing::Yes {
        return Err(SectionError::NonDirectingCenter(w.label(x)));
    }
    let sphere = m.sphere(x, 0, side)?;
    let mut s = Section::from_ids(w, &sphere.members)?;
    for &y in &sphere.inconclusive {
        let o = w.object(y).orbit;
        if !s.picks.contains_key(&o) {
            s.flagged.insert(o);
        }
    }
    Ok(s)
}

/// Membership of `D = {X : r(X, S) ≥ 0 and r(S, X) finite}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Membership {
    In,
    Out,
    Unknown,
}

pub fn aisle_membership(m: &Metric, s: &Section) -> Vec<Membership> {
    let w = m.window();
    let ids = s.ids(w);
    (0..w.len())
        .map(|x| {
            let to = m.to_set(x, &ids).expect("in window");
            let from = m.from_set(&ids, x).expect("in window");
            match (to.at_least(0), from) {
                (Some(false), _) | (_, DistanceResult::InfiniteInWindow) => Membership::Out,
                (Some(true), DistanceResult::Exact { .. }) => Membership::In,
                _ => Membership::Unknown,
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Heart {
    pub aisle: Vec<ObjId>,
    pub heart: Vec<ObjId>,
    pub projectives: Vec<ObjId>,
    /// Objects whose membership the window cannot decide.
    pub undetermined: Vec<ObjId>,
    /// The projectives coincide with the picks lying inside the window.
    pub matches_section: bool,
}

/// Heart of the split t-structure whose aisle is `D`: objects of `D` whose
/// desuspension leaves `D`; projectives are those whose translate leaves `D`.
pub fn compute_heart(m: &Metric, s: &Section) -> Result<Heart, SectionError> {
    let cert = verify_section(m, s);
    if !cert.is_pass() {
        return Err(SectionError::SectionInvalid(format!("{:?}", cert.verdict)));
    }
    let w = m.window();
    let member = aisle_membership(m, s);
    let mut heart = Heart {
        aisle: Vec::new(),
        heart: Vec::new(),
        projectives: Vec::new(),
        undetermined: Vec::new(),
        matches_section: false,
    };
    for x in 0..w.len() {
        match member[x] {
            Membership::Out => continue,
            Membership::Unknown => {
                heart.undetermined.push(x);
                continue;
            }
            Membership::In => heart.aisle.push(x),
        }
        let below = match w.shift_of(x, -1) {
            Some(y) => member[y],
            None => Membership::Unknown,
        };
        match below {
            Membership::In => continue,
            Membership::Unknown => {
                heart.undetermined.push(x);
                continue;
            }
            Membership::Out => heart.heart.push(x),
        }
        let o = w.object(x);
        match w.id(o.orbit, o.level - 1).map(|t| member[t]) {
            Some(Membership::Out) => heart.projectives.push(x),
            Some(Membership::In) => {}
            _ => heart.undetermined.push(x),
        }
    }
    let mut picks = s.ids(w);
    picks.sort_unstable();
    heart.matches_section = heart.projectives == picks;
    Ok(heart)
}

/// `Hom(D, complement) = 0`, `D` closed under successors and under `[1]`.
pub fn verify_split_t(m: &Metric, s: &Section) -> Result<Certificate, SectionError> {
    let cert = verify_section(m, s);
    if !cert.is_pass() {
        return Err(SectionError::SectionInvalid(format!("{:?}", cert.verdict)));
    }
    verify_split_t_with(m, &aisle_membership(m, s))
}

/// The same checks against an explicitly given aisle.
pub fn verify_split_t_with(m: &Metric, member: &[Membership]) -> Result<Certificate, SectionError> {
    let w = m.window();
    let mut b = CertBuilder::new("verify_split_t");
    let inside: Vec<ObjId> = (0..w.len()).filter(|&x| member[x] == Membership::In).collect();
    let outside: Vec<ObjId> = (0..w.len()).filter(|&x| member[x] == Membership::Out).collect();
    for &x in &inside {
        for &z in &outside {
            if w.dhom(x, z) != 0 {
                b.fail("orthogonal", vec![w.label(x), w.label(z)], format!("dim Hom = {}", w.dhom(x, z)));
            }
        }
        for &y in m.successors(x) {
            if member[y] == Membership::Out {
                b.fail("successor_closed", vec![w.label(x), w.label(y)], "map leaves the aisle");
            }
        }
        if let Some(up) = w.shift_of(x, 1) {
            if member[up] == Membership::Out {
                b.fail("shift_closed", vec![w.label(x), w.label(up)], "suspension leaves the aisle");
            }
        }
    }
    let unknown = member.iter().filter(|&&x| x == Membership::Unknown).count();
    b.note(format!("{} in aisle, {} outside, {unknown} undetermined at window edge", inside.len(), outside.len()));
    Ok(b.finish())
}

/// Sphere restricted to the picks of a section.
pub fn sphere_in_section(m: &Metric, s: &Section, x: ObjId, n: i64, side: Side) -> Result<crate::metric::Sphere, SectionError> {
    Ok(m.sphere_within(x, n, side, s.ids(m.window()))?)
}
