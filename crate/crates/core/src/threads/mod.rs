//! Thread and nonthread objects of a section, r-in-between intervals,
//! rays and corays, their anchors, and marks.
//!
//! Direct neighbours are the mesh arrows between picks. Picks on orbits
//! next to an elided arrow may have neighbours in the skipped part of the
//! quiver; they are never classified either way.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::derived::{cone_decompose, extension, ext_cocycles, fingerprint, hom_space, is_indecomposable, DObj, EngineError, ObjId, Window};
use crate::metric::{DistanceResult, Metric};
use crate::sections::{symbolic_rays, RaySide, Section, SectionError, SymbolicRay};
use crate::threadquiver::{Expansion, ThreadQuiver};

#[cfg(test)]
mod tests;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ThreadError {
    #[error("object {0} is not picked by the section")]
    NotPicked(String),
    #[error("distance not certified in this window: {0}")]
    InconclusiveDistance(String),
    #[error("no anchor inside the window: {0}")]
    NoAnchorInWindow(String),
    #[error("anchor not unique: {0}")]
    AnchorNotUnique(String),
    #[error("not indecomposable: {0}")]
    NotIndecomposable(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

impl From<SectionError> for ThreadError {
    fn from(e: SectionError) -> Self {
        match e {
            SectionError::Engine(e) => ThreadError::Engine(e),
            SectionError::Threads(t) => *t,
            other => ThreadError::Invalid(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    Thread,
    Nonthread,
    /// Next to an elided arrow: neighbours may lie outside the window.
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ObjectClass {
    pub id: ObjId,
    pub kind: Classification,
    pub successors: Vec<ObjId>,
    pub predecessors: Vec<ObjId>,
}

fn picked(m: &Metric, s: &Section, x: ObjId) -> Result<(), ThreadError> {
    let w = m.window();
    if x >= w.len() {
        return Err(EngineError::NotInWindow(format!("object #{x}")).into());
    }
    if s.contains(w, x) {
        Ok(())
    } else {
        Err(ThreadError::NotPicked(w.label(x)))
    }
}

/// Direct successors (or predecessors) of `a` among the picks `among`, with
/// multiplicity. A section is convex, so its irreducible maps are the mesh
/// arrows between picks. Hand-built windows without a mesh fall back to
/// covers of the Hom preorder.
fn neighbours(w: &Window, among: &[ObjId], a: ObjId, upward: bool) -> Vec<ObjId> {
    if w.arrows().is_empty() {
        return covers(w, among, a, upward);
    }
    w.arrows()
        .iter()
        .filter_map(|&(s, t)| match upward {
            true if s == a => Some(t),
            false if t == a => Some(s),
            _ => None,
        })
        .filter(|b| among.contains(b))
        .collect()
}

/// Covers of `a` in the Hom preorder restricted to `among`.
fn covers(w: &Window, among: &[ObjId], a: ObjId, upward: bool) -> Vec<ObjId> {
    let edge = |p: ObjId, q: ObjId| if upward { w.hom_edge(p, q) } else { w.hom_edge(q, p) };
    among
        .iter()
        .copied()
        .filter(|&b| b != a && edge(a, b))
        .filter(|&b| !among.iter().any(|&c| c != a && c != b && edge(a, c) && edge(c, b)))
        .collect()
}

pub fn classify_object(m: &Metric, s: &Section, a: ObjId) -> Result<ObjectClass, ThreadError> {
    picked(m, s, a)?;
    let w = m.window();
    let ids = s.ids(w);
    let successors = neighbours(w, &ids, a, true);
    let predecessors = neighbours(w, &ids, a, false);
    let kind = if w.is_boundary_orbit(w.object(a).orbit) {
        Classification::Inconclusive
    } else if successors.len() == 1 && predecessors.len() == 1 {
        Classification::Thread
    } else {
        Classification::Nonthread
    };
    Ok(ObjectClass {
        id: a,
        kind,
        successors,
        predecessors,
    })
}

pub fn classify_all(m: &Metric, s: &Section) -> Result<Vec<ObjectClass>, ThreadError> {
    s.ids(m.window()).into_iter().map(|a| classify_object(m, s, a)).collect()
}

pub fn enumerate_nonthread(m: &Metric, s: &Section) -> Result<Vec<ObjectClass>, ThreadError> {
    Ok(classify_all(m, s)?.into_iter().filter(|c| c.kind == Classification::Nonthread).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IntervalKind {
    General,
    /// Only thread objects, `r(X, Y) > 0`.
    BrokenThread,
    /// Only thread objects, `r(X, Y) = 0`.
    UnbrokenThread,
    /// Some member could not be classified in this window.
    Undetermined,
}

impl IntervalKind {
    pub fn is_thread(self) -> bool {
        matches!(self, IntervalKind::BrokenThread | IntervalKind::UnbrokenThread)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntervalSet {
    pub x: ObjId,
    pub y: ObjId,
    pub members: Vec<ObjId>,
    pub kind: IntervalKind,
    pub distance: i64,
}

fn exact(m: &Metric, x: ObjId, y: ObjId) -> Result<Option<i64>, ThreadError> {
    Ok(m.lightcone(x, y)?.exact())
}

/// Picks `Z` with `r(X, Z) + r(Z, Y) = r(X, Y)`.
fn interval_members(m: &Metric, ids: &[ObjId], x: ObjId, y: ObjId, n: i64) -> Result<Vec<ObjId>, ThreadError> {
    let mut out = Vec::new();
    for &z in ids {
        if let (Some(a), Some(b)) = (exact(m, x, z)?, exact(m, z, y)?) {
            if a + b == n {
                out.push(z);
            }
        }
    }
    Ok(out)
}

pub fn r_in_between(m: &Metric, s: &Section, x: ObjId, y: ObjId) -> Result<IntervalSet, ThreadError> {
    picked(m, s, x)?;
    picked(m, s, y)?;
    let w = m.window();
    let n = match m.lightcone(x, y)? {
        DistanceResult::Exact { value } => value,
        r => {
            return Err(ThreadError::InconclusiveDistance(format!(
                "r({}, {}) is {}",
                w.label(x),
                w.label(y),
                r.certificate()
            )))
        }
    };
    let members = interval_members(m, &s.ids(w), x, y, n)?;
    let mut kinds = BTreeSet::new();
    for &z in &members {
        kinds.insert(classify_object(m, s, z)?.kind as u8);
    }
    let kind = if kinds.contains(&(Classification::Inconclusive as u8)) {
        IntervalKind::Undetermined
    } else if kinds.contains(&(Classification::Nonthread as u8)) {
        IntervalKind::General
    } else if n > 0 {
        IntervalKind::BrokenThread
    } else {
        IntervalKind::UnbrokenThread
    };
    Ok(IntervalSet {
        x,
        y,
        members,
        kind,
        distance: n,
    })
}

/// A path `X = X₀, …, Xₙ = Y` of picks, consecutive ones at finite one-sided
/// distance, `X_i` and `X_{i+2}` infinitely far apart both ways, and
/// interior objects nonthread. Shortest such path, if any.
pub fn nonthread_path(m: &Metric, s: &Section, x: ObjId, y: ObjId) -> Result<Option<Vec<ObjId>>, ThreadError> {
    picked(m, s, x)?;
    picked(m, s, y)?;
    if x == y {
        return Ok(Some(vec![x]));
    }
    let w = m.window();
    let ids = s.ids(w);
    let nonthread: BTreeSet<ObjId> = enumerate_nonthread(m, s)?.into_iter().map(|c| c.id).collect();
    let near = |a: ObjId, b: ObjId| -> Result<bool, ThreadError> { Ok(exact(m, a, b)?.is_some() || exact(m, b, a)?.is_some()) };
    type State = (Option<ObjId>, ObjId);
    let mut parent: BTreeMap<State, Option<State>> = BTreeMap::new();
    let start: State = (None, x);
    parent.insert(start, None);
    let mut queue = VecDeque::from([start]);
    while let Some(state @ (prev, cur)) = queue.pop_front() {
        for &next in &ids {
            if next == cur || Some(next) == prev || !near(cur, next)? {
                continue;
            }
            if next != y && !nonthread.contains(&next) {
                continue;
            }
            if let Some(p) = prev {
                if near(p, next)? {
                    continue;
                }
            }
            let ns = (Some(cur), next);
            if parent.contains_key(&ns) {
                continue;
            }
            parent.insert(ns, Some(state));
            if next == y {
                let mut path = vec![y];
                let mut at = Some(state);
                while let Some(st) = at {
                    path.push(st.1);
                    at = parent[&st];
                }
                path.reverse();
                return Ok(Some(path));
            }
            queue.push_back(ns);
        }
    }
    Ok(None)
}

/// A mark (or comark) together with where it was found.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Mark {
    #[serde(skip)]
    pub object: DObj,
    pub dims: Vec<usize>,
    pub shift: i64,
    /// Matching window object, by dimension vector and shift.
    pub window: Option<ObjId>,
    /// Vertex `z` of a thread endpoint with the mark predicted as `P_z`.
    pub symbolic: Option<String>,
    /// Whether the computed and the predicted object have equal Hom
    /// fingerprints against every explicit window object.
    pub routes_agree: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RayReport {
    pub id: String,
    pub side: RaySide,
    pub members: Vec<ObjId>,
    pub anchor: Option<ObjId>,
    pub mark: Option<Mark>,
    pub symbolic: Option<SymbolicRay>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, a: usize) -> usize {
        let p = self.0[a];
        if p == a {
            return a;
        }
        let r = self.find(p);
        self.0[a] = r;
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        self.0[ra] = rb;
    }
}

/// Rays: thread picks infinitely far to the nonthreads but at exact distance
/// from them; corays dually. Classes are joined by exact one-sided distances.
/// Symbolic reports come from the section's thread policies when a thread
/// quiver is supplied.
pub fn detect_rays(m: &Metric, s: &Section, tq: Option<&ThreadQuiver>) -> Result<Vec<RayReport>, ThreadError> {
    let w = m.window();
    let classes = classify_all(m, s)?;
    let nonthread: Vec<ObjId> = classes.iter().filter(|c| c.kind == Classification::Nonthread).map(|c| c.id).collect();
    let mut out = Vec::new();
    for side in [RaySide::Ray, RaySide::Coray] {
        let mut members = Vec::new();
        for c in classes.iter().filter(|c| c.kind == Classification::Thread) {
            let to = m.to_set(c.id, &nonthread)?;
            let from = m.from_set(&nonthread, c.id)?;
            let (away, back) = match side {
                RaySide::Ray => (to, from),
                RaySide::Coray => (from, to),
            };
            if away.is_infinite() && back.is_exact() || nonthread.is_empty() {
                members.push(c.id);
            }
        }
        let mut uf = UnionFind((0..members.len()).collect());
        for i in 0..members.len() {
            for j in 0..members.len() {
                if i != j && exact(m, members[i], members[j])?.is_some() {
                    uf.union(i, j);
                }
            }
        }
        let mut groups: BTreeMap<usize, Vec<ObjId>> = BTreeMap::new();
        for (i, &x) in members.iter().enumerate() {
            groups.entry(uf.find(i)).or_default().push(x);
        }
        for g in groups.into_values() {
            out.push(RayReport {
                id: format!("{}:{}", if side == RaySide::Ray { "ray" } else { "coray" }, w.label(g[0])),
                side,
                members: g,
                anchor: None,
                mark: None,
                symbolic: None,
            });
        }
    }
    if let Some(tq) = tq {
        for r in symbolic_rays(tq, &s.policies)? {
            out.push(RayReport {
                id: format!("{}:{}:{:?}", if r.side == RaySide::Ray { "ray" } else { "coray" }, r.thread, r.part).to_lowercase(),
                side: r.side,
                members: Vec::new(),
                anchor: None,
                mark: None,
                symbolic: Some(r),
            });
        }
    }
    Ok(out)
}

/// The unique nonthread `A` with exact `r(A, X)` for every member `X` and
/// no other nonthread in `[A, X]•` (dually for corays).
pub fn find_anchor(m: &Metric, s: &Section, ray: &RayReport) -> Result<ObjId, ThreadError> {
    let w = m.window();
    if ray.members.is_empty() {
        return Err(ThreadError::NoAnchorInWindow(format!("{} has no window members", ray.id)));
    }
    let ids = s.ids(w);
    let nonthread: Vec<ObjId> = enumerate_nonthread(m, s)?.into_iter().map(|c| c.id).collect();
    let mut found = Vec::new();
    'cand: for &a in &nonthread {
        for &x in &ray.members {
            let (p, q) = match ray.side {
                RaySide::Ray => (a, x),
                RaySide::Coray => (x, a),
            };
            let Some(n) = exact(m, p, q)? else { continue 'cand };
            let between = interval_members(m, &ids, p, q, n)?;
            if between.iter().any(|z| *z != a && nonthread.contains(z)) {
                continue 'cand;
            }
        }
        found.push(a);
    }
    match found.as_slice() {
        [a] => Ok(*a),
        [] => Err(ThreadError::NoAnchorInWindow(ray.id.clone())),
        many => Err(ThreadError::AnchorNotUnique(format!(
            "{}: {:?}",
            ray.id,
            many.iter().map(|&a| w.label(a)).collect::<Vec<_>>()
        ))),
    }
}

fn single(mut parts: Vec<DObj>, what: &str) -> Result<DObj, ThreadError> {
    match parts.len() {
        1 => Ok(parts.pop().expect("one part")),
        0 => Err(ThreadError::NotIndecomposable(format!("{what} is zero"))),
        n => Err(ThreadError::NotIndecomposable(format!("{what} has {n} summands"))),
    }
}

fn one_dimensional<T>(mut basis: Vec<T>, what: &str) -> Result<T, ThreadError> {
    if basis.len() != 1 {
        return Err(ThreadError::Invalid(format!("{what} has dimension {}, expected 1", basis.len())));
    }
    Ok(basis.pop().expect("one element"))
}

/// Cone of the nonzero map `τB → A`, both indecomposable, with
/// `Hom(τB, A)` one-dimensional.
pub fn mark_of_map(tb: &DObj, a: &DObj) -> Result<DObj, ThreadError> {
    match a.shift - tb.shift {
        0 => {
            let f = one_dimensional(hom_space(&tb.module, &a.module)?, "Hom(τB, A)")?;
            let parts = cone_decompose(&f)?.into_iter().map(|d| d.shifted(a.shift)).collect();
            single(parts, "cone")
        }
        1 => {
            // A morphism M → N[1] is an extension of M by N; its cone is the middle term shifted.
            let c = one_dimensional(ext_cocycles(&tb.module, &a.module)?, "Ext¹(τB, A)")?;
            let e = extension(&tb.module, &a.module, &c)?;
            if !is_indecomposable(&e)? {
                return Err(ThreadError::NotIndecomposable(format!("extension with dims {:?}", e.dims())));
            }
            Ok(DObj::new(e, a.shift))
        }
        d => Err(ThreadError::Invalid(format!("no map τB → A across {d} shifts"))),
    }
}

/// Cocone of the nonzero map `A → τ⁻¹B`.
pub fn comark_of_map(a: &DObj, tib: &DObj) -> Result<DObj, ThreadError> {
    match tib.shift - a.shift {
        0 => {
            let f = one_dimensional(hom_space(&a.module, &tib.module)?, "Hom(A, τ⁻¹B)")?;
            let parts = cone_decompose(&f)?.into_iter().map(|d| d.shifted(a.shift - 1)).collect();
            single(parts, "cocone")
        }
        1 => {
            let c = one_dimensional(ext_cocycles(&a.module, &tib.module)?, "Ext¹(A, τ⁻¹B)")?;
            let e = extension(&a.module, &tib.module, &c)?;
            if !is_indecomposable(&e)? {
                return Err(ThreadError::NotIndecomposable(format!("extension with dims {:?}", e.dims())));
            }
            Ok(DObj::new(e, a.shift))
        }
        d => Err(ThreadError::Invalid(format!("no map A → τ⁻¹B across {d} shifts"))),
    }
}

fn window_match(w: &Window, x: &DObj) -> Option<ObjId> {
    let dims = x.module.dim_vector();
    (0..w.len()).find(|&i| w.object(i).shift == x.shift && w.object(i).dim == dims)
}

fn explicit(w: &Window, id: ObjId) -> Result<&DObj, ThreadError> {
    w.explicit(id)
        .ok_or_else(|| EngineError::TooLarge(format!("no explicit module for {}", w.label(id))).into())
}

/// The direct successor of the anchor inside `⋃ [A, X]•` (dually, the
/// direct predecessor inside `⋃ [X, A]•`).
fn anchor_neighbour(m: &Metric, s: &Section, ray: &RayReport, a: ObjId) -> Result<ObjId, ThreadError> {
    let w = m.window();
    let ids = s.ids(w);
    let mut span = BTreeSet::new();
    for &x in &ray.members {
        let (p, q) = match ray.side {
            RaySide::Ray => (a, x),
            RaySide::Coray => (x, a),
        };
        let n = exact(m, p, q)?.ok_or_else(|| ThreadError::InconclusiveDistance(format!("{} to {}", w.label(p), w.label(q))))?;
        span.extend(interval_members(m, &ids, p, q, n)?);
    }
    let span: Vec<ObjId> = span.into_iter().collect();
    let mut nb = neighbours(w, &ids, a, ray.side == RaySide::Ray);
    nb.retain(|b| span.contains(b));
    match nb.as_slice() {
        [b] => Ok(*b),
        _ => Err(ThreadError::Invalid(format!(
            "anchor {} has {} direct neighbours towards {}",
            w.label(a),
            nb.len(),
            ray.id
        ))),
    }
}

/// Mark of a ray (comark of a coray) by the cone route. With an expansion
/// of a thread quiver, the mark is also predicted symbolically as the
/// projective at the far endpoint of the anchor's thread, and the two
/// routes are compared by Hom fingerprint.
pub fn compute_mark(
    m: &Metric,
    s: &Section,
    ray: &RayReport,
    symbolic: Option<(&ThreadQuiver, &Expansion)>,
) -> Result<Mark, ThreadError> {
    let w = m.window();
    let a = find_anchor(m, s, ray)?;
    let b = anchor_neighbour(m, s, ray, a)?;
    let (ob, oa) = (w.object(b), w.object(a));
    let object = match ray.side {
        RaySide::Ray => {
            let tb = w
                .id(ob.orbit, ob.level - 1)
                .ok_or_else(|| ThreadError::Invalid(format!("τ{} lies outside the window", w.label(b))))?;
            mark_of_map(explicit(w, tb)?, explicit(w, a)?)?
        }
        RaySide::Coray => {
            let tib = w
                .id(ob.orbit, ob.level + 1)
                .ok_or_else(|| ThreadError::Invalid(format!("τ⁻¹{} lies outside the window", w.label(b))))?;
            comark_of_map(explicit(w, a)?, explicit(w, tib)?)?
        }
    };
    let mut mark = Mark {
        dims: object.module.dims().to_vec(),
        shift: object.shift,
        window: window_match(w, &object),
        object,
        symbolic: None,
        routes_agree: None,
    };
    if let Some((tq, ex)) = symbolic {
        let anchor_name = w.quiver().name(oa.orbit).to_string();
        let neighbour = ex.element_map.get(w.quiver().name(ob.orbit));
        let thread = neighbour.and_then(|v| tq.threads.iter().find(|t| t.id == v.thread));
        if let Some(t) = thread {
            let far = match ray.side {
                RaySide::Ray if t.src == anchor_name => Some(&t.dst),
                RaySide::Coray if t.dst == anchor_name => Some(&t.src),
                _ => None,
            };
            if let Some(z) = far {
                let zo = w.quiver().vertex(z).map_err(EngineError::from)?;
                mark.symbolic = Some(z.clone());
                if let Some(zid) = w.id(zo, 0) {
                    let probes: Vec<DObj> = (0..w.len()).filter_map(|i| w.explicit(i).cloned()).collect();
                    let predicted = explicit(w, zid)?;
                    mark.routes_agree = Some(fingerprint(&mark.object, &probes)? == fingerprint(predicted, &probes)?);
                }
            }
        }
    }
    Ok(mark)
}

/// Rays with anchors and marks filled in where the window allows.
pub fn report_rays(
    m: &Metric,
    s: &Section,
    tq: Option<&ThreadQuiver>,
    expansion: Option<&Expansion>,
) -> Result<Vec<RayReport>, ThreadError> {
    let mut rays = detect_rays(m, s, tq)?;
    for r in rays.iter_mut().filter(|r| !r.members.is_empty()) {
        match find_anchor(m, s, r) {
            Ok(a) => r.anchor = Some(a),
            Err(ThreadError::NoAnchorInWindow(_)) => continue,
            Err(e) => return Err(e),
        }
        match compute_mark(m, s, r, tq.zip(expansion)) {
            Ok(mk) => r.mark = Some(mk),
            Err(ThreadError::Engine(EngineError::TooLarge(_))) | Err(ThreadError::Invalid(_)) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(rays)
}
