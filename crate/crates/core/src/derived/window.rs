//! Finite slabs of the translation quiver `ℤQ` around the projectives.
//!
//! Orbit `x` at level `n` holds `τ^{-n} P_x`. Every object carries its
//! dimension vector and shift, tracked through the Coxeter transformation.
//! Hom dimensions come from translating the source back to a projective:
//! `Hom(τ^{-a} P_x, τ^{-b} P_y) = Hom(P_x, τ^{-(b−a)} P_y)`, which is the
//! `x`-entry of the dimension vector of `τ^{-(b−a)} P_y` when that object
//! is an unshifted module and zero otherwise. Modules small enough are also
//! built explicitly, giving an independent intertwiner route.
//!
//! For quivers produced by expanding thread arrows, the elided arrows split
//! the quiver into segments. Maps are only kept from a segment to the
//! segments it reaches along arrows: the elided arrows stand for infinitely
//! many vertices, and the skipped part admits no way back.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::sync::Arc;

use num_traits::ToPrimitive;
use serde_json::{json, Value};

use super::dobj::{dhom as explicit_dhom, tau_inv_obj, tau_obj, DObj};
use super::decompose::is_indecomposable;
use super::linalg::{Mat, Q};
use super::rep::{projective_with, Paths};
use super::EngineError;
use crate::threadquiver::Quiver;

pub type ObjId = usize;

#[derive(Debug, Clone)]
pub struct WindowObject {
    pub orbit: usize,
    pub level: i64,
    pub dim: Vec<i128>,
    pub shift: i64,
    pub module: Option<DObj>,
}

#[derive(Debug, Clone, Copy)]
pub struct WindowOptions {
    pub radius: usize,
    /// Modules up to this total dimension are materialised explicitly.
    pub explicit_cap: usize,
    /// Certify each materialised module via its endomorphism ring.
    pub certify: bool,
}

impl Default for WindowOptions {
    fn default() -> Self {
        WindowOptions {
            radius: 4,
            explicit_cap: 40,
            certify: false,
        }
    }
}

impl WindowOptions {
    pub fn radius(radius: usize) -> Self {
        WindowOptions {
            radius,
            ..Default::default()
        }
    }
}

type Class = (Vec<i128>, i64);

#[derive(Debug, Clone)]
enum HomSource {
    /// `classes[o][k + span]` is the class of `τ^{-k} P_o`.
    Translation { span: i64, classes: Vec<Vec<Class>> },
    Table(Vec<Vec<u128>>),
}

#[derive(Debug, Clone)]
pub struct Window {
    quiver: Arc<Quiver>,
    lo: i64,
    hi: i64,
    objects: Vec<WindowObject>,
    hom: HomSource,
    arrows: Vec<(ObjId, ObjId)>,
    components: Vec<usize>,
    segments: Vec<usize>,
    seg_reach: Vec<Vec<bool>>,
    boundary: Vec<bool>,
    monotone: bool,
    log: Vec<String>,
}

fn to_int_matrix(m: &Mat) -> Result<Vec<Vec<i128>>, EngineError> {
    (0..m.rows())
        .map(|r| {
            (0..m.cols())
                .map(|c| {
                    let x: &Q = &m[(r, c)];
                    if !x.is_integer() {
                        return Err(EngineError::Invariant("Coxeter matrix is not integral".into()));
                    }
                    x.to_integer().to_i128().ok_or_else(|| EngineError::TooLarge("Coxeter entry".into()))
                })
                .collect()
        })
        .collect()
}

fn apply(m: &[Vec<i128>], v: &[i128]) -> Result<Vec<i128>, EngineError> {
    m.iter()
        .map(|row| {
            row.iter().zip(v).try_fold(0i128, |acc, (a, b)| {
                a.checked_mul(*b)
                    .and_then(|p| acc.checked_add(p))
                    .ok_or_else(|| EngineError::TooLarge("dimension vector overflow".into()))
            })
        })
        .collect()
}

/// Next class along an orbit: `signed` is the image of the signed class
/// under the Coxeter matrix (or its inverse). A module keeps its shift; a
/// sign flip means crossing from injectives to projectives or back.
fn next_class(image: Vec<i128>, shift: i64, step: i64) -> Result<Class, EngineError> {
    let sign = if shift.rem_euclid(2) == 0 { 1 } else { -1 };
    let d: Vec<i128> = image.iter().map(|x| x * sign).collect();
    if d.iter().all(|&x| x >= 0) && d.iter().any(|&x| x > 0) {
        Ok((d, shift))
    } else if d.iter().all(|&x| x <= 0) && d.iter().any(|&x| x < 0) {
        Ok((d.iter().map(|x| -x).collect(), shift + step))
    } else {
        Err(EngineError::Invariant(format!("class {image:?} is not a signed root")))
    }
}

impl Window {
    pub fn build(quiver: &Quiver, opts: WindowOptions) -> Result<Window, EngineError> {
        let q = Arc::new(quiver.clone());
        let counts = q.path_counts()?;
        let n = q.len();
        let r = opts.radius as i64;
        let (lo, hi) = (-r, r);
        let span = hi - lo;
        let mut log = vec![format!("window over {n} orbits, levels {lo}..={hi}")];

        // Φ(p_x) = −i_x, so Φ = −I·P⁻¹ and Φ⁻¹ = −P·I⁻¹.
        let mut pm = Mat::zeros(n, n);
        let mut im = Mat::zeros(n, n);
        for x in 0..n {
            for v in 0..n {
                pm[(v, x)] = super::linalg::q(counts[v][x] as i64);
                im[(v, x)] = super::linalg::q(counts[x][v] as i64);
            }
        }
        let minus = super::linalg::q(-1);
        let phi = to_int_matrix(&im.mul(&pm.inverse().expect("unitriangular")).scale(&minus))?;
        let phi_inv = to_int_matrix(&pm.mul(&im.inverse().expect("unitriangular")).scale(&minus))?;

        let mut classes = Vec::with_capacity(n);
        for x in 0..n {
            let p: Vec<i128> = (0..n).map(|v| counts[v][x] as i128).collect();
            let mut row = vec![(Vec::new(), 0i64); (2 * span + 1) as usize];
            row[span as usize] = (p, 0);
            for k in 1..=span {
                let (d, s) = row[(span + k - 1) as usize].clone();
                let signed: Vec<i128> = d.iter().map(|v| if s.rem_euclid(2) == 0 { *v } else { -v }).collect();
                row[(span + k) as usize] = next_class(apply(&phi_inv, &signed)?, s, 1)?;
                let (d, s) = row[(span - k + 1) as usize].clone();
                let signed: Vec<i128> = d.iter().map(|v| if s.rem_euclid(2) == 0 { *v } else { -v }).collect();
                row[(span - k) as usize] = next_class(apply(&phi, &signed)?, s, -1)?;
            }
            classes.push(row);
        }

        let mut objects = Vec::with_capacity(n * (span as usize + 1));
        for x in 0..n {
            for level in lo..=hi {
                let (dim, shift) = classes[x][(span + level) as usize].clone();
                objects.push(WindowObject {
                    orbit: x,
                    level,
                    dim,
                    shift,
                    module: None,
                });
            }
        }

        let (segments, seg_reach) = q.segment_reachability();
        let mut w = Window {
            components: q.components(),
            boundary: q.elision_adjacent(),
            quiver: Arc::clone(&q),
            lo,
            hi,
            objects,
            hom: HomSource::Translation { span, classes },
            arrows: Vec::new(),
            segments,
            seg_reach,
            monotone: true,
            log: Vec::new(),
        };
        if w.has_elisions() {
            log.push("elided arrows present: maps masked to forward segments".into());
        }
        w.materialise(opts, &mut log)?;
        w.install_mesh(&mut log)?;
        w.monotone = w.check_monotone();
        log.push(format!("level monotone: {}", w.monotone));
        w.log = log;
        Ok(w)
    }

    fn materialise(&mut self, opts: WindowOptions, log: &mut Vec<String>) -> Result<(), EngineError> {
        if opts.explicit_cap == 0 {
            return Ok(());
        }
        let q = Arc::clone(&self.quiver);
        let paths = Paths::new(&q)?;
        let mut built = 0usize;
        for x in 0..q.len() {
            let p = projective_with(&q, &paths, x)?;
            if p.total_dim() > opts.explicit_cap {
                continue;
            }
            let start = DObj::new(p, 0);
            for dir in [1i64, -1] {
                let mut current = start.clone();
                let mut level = 0i64;
                loop {
                    let id = self.id(x, level).expect("level inside window");
                    let obj = &self.objects[id];
                    let dims: Vec<i128> = current.module.dim_vector();
                    if dims != obj.dim || current.shift != obj.shift {
                        return Err(EngineError::Invariant(format!(
                            "explicit object at {}@{level} has class {:?}[{}], expected {:?}[{}]",
                            q.name(x),
                            dims,
                            current.shift,
                            obj.dim,
                            obj.shift
                        )));
                    }
                    if opts.certify && !is_indecomposable(&current.module)? {
                        return Err(EngineError::NotIndecomposable(format!("{}@{level}", q.name(x))));
                    }
                    if self.objects[id].module.is_none() {
                        self.objects[id].module = Some(current.clone());
                        built += 1;
                    }
                    let next_level = level + dir;
                    if next_level < self.lo || next_level > self.hi {
                        break;
                    }
                    let next_total: i128 = self.objects[self.id(x, next_level).expect("inside")].dim.iter().sum();
                    if next_total > opts.explicit_cap as i128 {
                        break;
                    }
                    current = if dir > 0 { tau_inv_obj(&current)? } else { tau_obj(&current)? };
                    level = next_level;
                }
            }
        }
        log.push(format!(
            "materialised {built} of {} objects explicitly (cap {})",
            self.objects.len(),
            opts.explicit_cap
        ));
        Ok(())
    }

    fn install_mesh(&mut self, log: &mut Vec<String>) -> Result<(), EngineError> {
        let mut masked = 0;
        let mut arrows = Vec::new();
        for a in self.quiver.arrows() {
            for n in self.lo..=self.hi {
                let mut candidates = vec![(self.id(a.src, n), self.id(a.dst, n))];
                if n < self.hi {
                    candidates.push((self.id(a.dst, n), self.id(a.src, n + 1)));
                }
                for (s, t) in candidates {
                    let (s, t) = (s.expect("inside"), t.expect("inside"));
                    if !self.forward(self.objects[s].orbit, self.objects[t].orbit) {
                        masked += 1;
                        continue;
                    }
                    if self.dhom(s, t) == 0 {
                        return Err(EngineError::Invariant(format!(
                            "mesh arrow {} → {} has no nonzero map",
                            self.label(s),
                            self.label(t)
                        )));
                    }
                    arrows.push((s, t));
                }
            }
        }
        // Parallel quiver arrows give parallel mesh arrows; multiplicity is kept.
        arrows.sort_unstable();
        log.push(format!("{} mesh arrows verified, {masked} masked by elision", arrows.len()));
        self.arrows = arrows;
        Ok(())
    }

    fn check_monotone(&self) -> bool {
        (0..self.len()).all(|a| {
            (0..self.len()).all(|b| self.objects[b].level >= self.objects[a].level || self.dhom(a, b) == 0)
        })
    }

    /// A window with a prescribed Hom table, for testing the metric layer
    /// on shapes no quiver produces.
    pub fn mock(orbits: &[&str], lo: i64, hi: i64, components: Vec<usize>, hom: impl Fn((usize, i64), (usize, i64)) -> u128) -> Window {
        let names: Vec<String> = orbits.iter().map(|s| s.to_string()).collect();
        let quiver = Arc::new(Quiver::from_named(names, Vec::new()).expect("distinct orbit names"));
        let mut objects = Vec::new();
        for (x, _) in orbits.iter().enumerate() {
            for level in lo..=hi {
                objects.push(WindowObject {
                    orbit: x,
                    level,
                    dim: Vec::new(),
                    shift: 0,
                    module: None,
                });
            }
        }
        let table: Vec<Vec<u128>> = objects
            .iter()
            .map(|a| objects.iter().map(|b| hom((a.orbit, a.level), (b.orbit, b.level))).collect())
            .collect();
        let k = orbits.len();
        let mut w = Window {
            quiver,
            lo,
            hi,
            objects,
            hom: HomSource::Table(table),
            arrows: Vec::new(),
            segments: components.clone(),
            seg_reach: (0..k).map(|s| (0..k).map(|t| s == t).collect()).collect(),
            components,
            boundary: vec![false; k],
            monotone: true,
            log: vec!["mock window".into()],
        };
        // Segments coincide with components, and no masking applies.
        let m = w.components.iter().copied().max().map_or(0, |m| m + 1);
        w.seg_reach = (0..m).map(|s| (0..m).map(|t| s == t).collect()).collect();
        w.monotone = w.check_monotone();
        w
    }

    pub fn quiver(&self) -> &Arc<Quiver> {
        &self.quiver
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.hi
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn orbit_count(&self) -> usize {
        self.quiver.len()
    }

    pub fn objects(&self) -> &[WindowObject] {
        &self.objects
    }

    pub fn object(&self, id: ObjId) -> &WindowObject {
        &self.objects[id]
    }

    pub fn id(&self, orbit: usize, level: i64) -> Option<ObjId> {
        if orbit >= self.orbit_count() || level < self.lo || level > self.hi {
            return None;
        }
        Some(orbit * (self.hi - self.lo + 1) as usize + (level - self.lo) as usize)
    }

    pub fn label(&self, id: ObjId) -> String {
        let o = &self.objects[id];
        format!("{}@{}", self.quiver.name(o.orbit), o.level)
    }

    /// Parses `name@level`, or a bare vertex name for level 0.
    pub fn lookup(&self, text: &str) -> Result<ObjId, EngineError> {
        let (name, level) = match text.rsplit_once('@') {
            Some((name, level)) => (
                name,
                level.parse::<i64>().map_err(|_| EngineError::NotInWindow(text.to_string()))?,
            ),
            None => (text, 0),
        };
        let orbit = self.quiver.vertex(name)?;
        self.id(orbit, level).ok_or_else(|| EngineError::NotInWindow(text.to_string()))
    }

    pub fn arrows(&self) -> &[(ObjId, ObjId)] {
        &self.arrows
    }

    pub fn log(&self) -> &[String] {
        &self.log
    }

    /// No nonzero map lowers the level.
    pub fn is_level_monotone(&self) -> bool {
        self.monotone
    }

    pub fn same_component(&self, o1: usize, o2: usize) -> bool {
        self.components[o1] == self.components[o2]
    }

    /// Maps from orbit `o1` to orbit `o2` are not masked by an elision.
    pub fn forward(&self, o1: usize, o2: usize) -> bool {
        self.seg_reach[self.segments[o1]][self.segments[o2]]
    }

    /// Orbit next to an elided arrow: its neighbourhood is not fully visible.
    pub fn is_boundary_orbit(&self, o: usize) -> bool {
        self.boundary[o]
    }

    pub fn has_elisions(&self) -> bool {
        self.boundary.iter().any(|&b| b)
    }

    /// Class of `τ^{-k} P_o`, for `|k| ≤ hi − lo`.
    fn class(&self, o: usize, k: i64) -> Option<&Class> {
        match &self.hom {
            HomSource::Translation { span, classes } if k.abs() <= *span => Some(&classes[o][(k + span) as usize]),
            _ => None,
        }
    }

    /// `dim Hom(a, b)`.
    pub fn dhom(&self, a: ObjId, b: ObjId) -> u128 {
        self.dhom_shifted(a, b, 0).expect("unshifted Hom is always available")
    }

    /// `dim Hom(a, b[k])`; `None` for mock windows with `k ≠ 0`.
    pub fn dhom_shifted(&self, a: ObjId, b: ObjId, k: i64) -> Option<u128> {
        let (x, y) = (&self.objects[a], &self.objects[b]);
        if !self.forward(x.orbit, y.orbit) {
            return Some(0);
        }
        match &self.hom {
            HomSource::Table(t) => (k == 0).then(|| t[a][b]),
            HomSource::Translation { .. } => {
                let (dim, shift) = self.class(y.orbit, y.level - x.level).expect("offset within span");
                Some(if shift + k == 0 { dim[x.orbit] as u128 } else { 0 })
            }
        }
    }

    /// `dim Hom(a, S b)` with `S = τ[1]`, via the translation route.
    pub fn dhom_to_serre(&self, a: ObjId, b: ObjId) -> Option<u128> {
        let (x, y) = (&self.objects[a], &self.objects[b]);
        if !self.forward(x.orbit, y.orbit) {
            return Some(0);
        }
        let (dim, shift) = self.class(y.orbit, y.level - 1 - x.level)?;
        Some(if shift + 1 == 0 { dim[x.orbit] as u128 } else { 0 })
    }

    pub fn hom_edge(&self, a: ObjId, b: ObjId) -> bool {
        self.dhom(a, b) > 0
    }

    pub fn explicit(&self, id: ObjId) -> Option<&DObj> {
        self.objects[id].module.as_ref()
    }

    /// Hom dimension by the intertwiner solver, when both modules exist.
    pub fn explicit_dhom(&self, a: ObjId, b: ObjId) -> Result<Option<usize>, EngineError> {
        match (self.explicit(a), self.explicit(b)) {
            (Some(x), Some(y)) => explicit_dhom(x, y).map(Some),
            _ => Ok(None),
        }
    }

    /// Window object isomorphic to `X[k]`, matched by dimension vector and
    /// shift (these determine objects of the transjective component).
    pub fn shift_of(&self, id: ObjId, k: i64) -> Option<ObjId> {
        let x = &self.objects[id];
        if x.dim.is_empty() {
            return None;
        }
        let target_shift = x.shift + k;
        self.objects
            .iter()
            .position(|o| o.dim == x.dim && o.shift == target_shift && self.components[o.orbit] == self.components[x.orbit])
    }

    pub fn to_json(&self, full: bool) -> Value {
        let objects: Vec<Value> = (0..self.len())
            .map(|id| {
                let o = &self.objects[id];
                let mut v = json!({
                    "id": self.label(id),
                    "orbit": self.quiver.name(o.orbit),
                    "level": o.level,
                    "dim": o.dim.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
                    "shift": o.shift,
                    "explicit": o.module.is_some(),
                });
                if full {
                    if let Some(m) = &o.module {
                        v["matrices"] = serde_json::to_value(m.module.mats()).expect("matrices serialise");
                    }
                }
                v
            })
            .collect();
        let arrows: Vec<Value> = self.arrows.iter().map(|&(s, t)| json!([self.label(s), self.label(t)])).collect();
        json!({
            "orbits": self.quiver.vertices(),
            "levels": [self.lo, self.hi],
            "objects": objects,
            "arrows": arrows,
            "level_monotone": self.monotone,
            "log": self.log,
        })
    }

    /// DOT drawing of the mesh, one rank per level; objects in `highlight`
    /// are filled. Output order depends only on object ids.
    pub fn to_dot(&self, highlight: &BTreeSet<ObjId>) -> String {
        use crate::threadquiver::format::quote;
        let mut out = String::from("digraph window {\n  rankdir=LR;\n");
        for level in self.lo..=self.hi {
            let _ = write!(out, "  {{ rank=same;");
            for o in 0..self.orbit_count() {
                if let Some(id) = self.id(o, level) {
                    let _ = write!(out, " {};", quote(&self.label(id)));
                }
            }
            out.push_str(" }\n");
        }
        for id in 0..self.len() {
            let style = if highlight.contains(&id) { " [style=filled, fillcolor=gray]" } else { "" };
            let _ = writeln!(out, "  {}{style};", quote(&self.label(id)));
        }
        for &(s, t) in &self.arrows {
            let _ = writeln!(out, "  {} -> {};", quote(&self.label(s)), quote(&self.label(t)));
        }
        out.push_str("}\n");
        out
    }
}
