//! Seed sets and the sections they determine.

use super::{verify_section, CertBuilder, Certificate, Section, SectionError};
use crate::derived::ObjId;
use crate::metric::{DistanceResult, Metric};
use crate::threads::{classify_object, Classification};

fn exact_or(m: &Metric, r: DistanceResult, what: impl FnOnce() -> String) -> Result<i64, SectionError> {
    let _ = m;
    match r {
        DistanceResult::Exact { value } => Ok(value),
        _ => Err(SectionError::InconclusiveAtWindow(what())),
    }
}

/// Refines candidate seeds so that later seeds are infinitely far from the
/// earlier ones and `r(T_i, T_j) ≥ max(i, j)` in both directions.
///
/// Pass one drops every candidate at finite round-trip distance from the
/// kept ones. Pass two moves each kept seed along its orbit, by the least
/// number of steps, until it is far enough from all earlier seeds.
pub fn choose_seed(m: &Metric, candidates: &[ObjId]) -> Result<Vec<ObjId>, SectionError> {
    let w = m.window();
    let mut kept: Vec<ObjId> = Vec::new();
    for &t in candidates {
        if kept.is_empty() {
            kept.push(t);
            continue;
        }
        match m.roundtrip_set(&kept, t)? {
            DistanceResult::Exact { .. } => {}
            DistanceResult::InfiniteInWindow => kept.push(t),
            r => {
                return Err(SectionError::InconclusiveAtWindow(format!(
                    "round trip from earlier seeds to {} is {r:?}",
                    w.label(t)
                )))
            }
        }
    }
    let mut out: Vec<ObjId> = Vec::with_capacity(kept.len());
    for (i, &t) in kept.iter().enumerate() {
        if i == 0 {
            out.push(t);
            continue;
        }
        let need = i as i64;
        let o = w.object(t);
        let span = w.hi() - w.lo();
        let mut chosen = None;
        'scan: for k in 0..=span {
            for level in [o.level + k, o.level - k] {
                let Some(s) = w.id(o.orbit, level) else { continue };
                let fwd = m.from_set(&out, s)?.at_least(need);
                let bwd = m.to_set(s, &out)?.at_least(need);
                if fwd == Some(true) && bwd == Some(true) {
                    chosen = Some(s);
                    break 'scan;
                }
            }
        }
        out.push(chosen.ok_or_else(|| SectionError::WindowTooSmall(format!("no shift of {} is far enough from earlier seeds", w.label(t))))?);
    }
    Ok(out)
}

/// The three seed properties: every pick within finite round-trip distance
/// of the seeds (checked on the given objects), later seeds infinitely far
/// from earlier ones, and `r(T_i, T_j) ≥ max(i, j)` for `i ≠ j`.
pub fn check_seed_properties(m: &Metric, seeds: &[ObjId], objects: &[ObjId]) -> Certificate {
    let w = m.window();
    let mut b = CertBuilder::new("seed_properties");
    for &x in objects {
        match m.roundtrip_set(seeds, x).expect("in window") {
            DistanceResult::Exact { .. } => {}
            DistanceResult::InfiniteInWindow => b.fail("finite_distance", vec![w.label(x)], "infinitely far from every seed"),
            r => b.unsure(format!("round trip to {} is {r:?}", w.label(x))),
        }
    }
    for k in 1..seeds.len() {
        for j in 0..k {
            match m.roundtrip_set(&seeds[..=j], seeds[k]).expect("in window") {
                DistanceResult::InfiniteInWindow => {}
                DistanceResult::Exact { value } => {
                    b.fail("infinite_between", vec![w.label(seeds[j]), w.label(seeds[k])], format!("d = {value}"))
                }
                r => b.unsure(format!("d(T_{j}, T_{k}) is {r:?}")),
            }
        }
    }
    for (i, &a) in seeds.iter().enumerate() {
        for (j, &c) in seeds.iter().enumerate() {
            if i == j {
                continue;
            }
            let need = i.max(j) as i64;
            match m.lightcone(a, c).expect("in window").at_least(need) {
                Some(true) => {}
                Some(false) => b.fail("separated", vec![w.label(a), w.label(c)], format!("r < {need}")),
                None => b.unsure(format!("r(T_{i}, T_{j}) undetermined")),
            }
        }
    }
    b.finish()
}

/// On each orbit at finite distance `d` from the seeds, picks the level with
/// `r(T, pick) = ⌊d/2⌋`; infinitely far orbits stay unpicked.
pub fn tilt_construction(m: &Metric, seeds: &[ObjId]) -> Result<Section, SectionError> {
    let w = m.window();
    let mut s = Section::default();
    for o in 0..w.orbit_count() {
        let levels: Vec<ObjId> = (w.lo()..=w.hi()).filter_map(|l| w.id(o, l)).collect();
        let mut d = None;
        let mut infinite = false;
        for &y in &levels {
            match m.roundtrip_set(seeds, y)? {
                DistanceResult::Exact { value } => {
                    d = Some(value);
                    break;
                }
                DistanceResult::InfiniteInWindow => {
                    infinite = true;
                    break;
                }
                _ => {}
            }
        }
        if infinite {
            continue;
        }
        let Some(d) = d else {
            s.flagged.insert(o);
            continue;
        };
        let target = d.div_euclid(2);
        // Scan rather than solve: the shift law is exercised, not assumed.
        let hits: Vec<ObjId> = levels
            .iter()
            .copied()
            .filter(|&y| m.from_set(seeds, y).expect("in window").exact() == Some(target))
            .collect();
        match hits.as_slice() {
            [y] => {
                s.picks.insert(o, w.object(*y).level);
            }
            [] => {
                return Err(SectionError::WindowTooSmall(format!(
                    "no level of orbit {} has r(T, -) = {target}",
                    w.quiver().name(o)
                )))
            }
            _ => return Err(SectionError::NotUniqueOnOrbit(w.quiver().name(o).to_string())),
        }
    }
    let cert = verify_section(m, &s);
    if cert.is_fail() {
        return Err(SectionError::SectionInvalid(format!("tilt failed verification: {:?}", cert.verdict)));
    }
    Ok(s)
}

/// For picks `A, B` with a nonzero map `A → B`:
/// `r(T,A) − 1 ≤ r(T,B) ≤ r(T,A)` and `r(A,T) ≤ r(B,T) ≤ r(A,T) + 1`.
pub fn homs_in_q_check(m: &Metric, seeds: &[ObjId], s: &Section) -> Certificate {
    let w = m.window();
    let mut b = CertBuilder::new("homs_in_q");
    let ids = s.ids(w);
    let mut pairs = 0usize;
    for &a in &ids {
        for &c in &ids {
            if a == c || !w.hom_edge(a, c) {
                continue;
            }
            pairs += 1;
            let objs = || vec![w.label(a), w.label(c)];
            let (ta, tc) = (m.from_set(seeds, a).expect("in window"), m.from_set(seeds, c).expect("in window"));
            let (at, ct) = (m.to_set(a, seeds).expect("in window"), m.to_set(c, seeds).expect("in window"));
            match (ta, tc) {
                (DistanceResult::Exact { value: x }, DistanceResult::Exact { value: y }) => {
                    if !(x - 1 <= y && y <= x) {
                        b.fail("from_seeds", objs(), format!("r(T,A) = {x}, r(T,B) = {y}"));
                    }
                }
                (DistanceResult::InfiniteInWindow, DistanceResult::InfiniteInWindow) => {}
                (x, y) => b.unsure(format!("r(T, -) on {:?}: {x:?}, {y:?}", objs())),
            }
            match (at, ct) {
                (DistanceResult::Exact { value: x }, DistanceResult::Exact { value: y }) => {
                    if !(x <= y && y <= x + 1) {
                        b.fail("to_seeds", objs(), format!("r(A,T) = {x}, r(B,T) = {y}"));
                    }
                }
                (DistanceResult::InfiniteInWindow, DistanceResult::InfiniteInWindow) => {}
                (x, y) => b.unsure(format!("r(-, T) on {:?}: {x:?}, {y:?}", objs())),
            }
        }
    }
    b.note(format!("{pairs} Hom-adjacent pick pairs"));
    b.finish()
}

/// Moves each pick `Y` up by `min(r(X, Y), 1)` levels, which leaves `X`
/// with at least two direct neighbours whenever it has any.
pub fn ensure_nonthread(m: &Metric, s: &Section, x: ObjId) -> Result<Section, SectionError> {
    let w = m.window();
    if !s.contains(w, x) {
        return Err(SectionError::NotPicked(w.label(x)));
    }
    let mut out = Section {
        policies: s.policies.clone(),
        ..Default::default()
    };
    for (&o, &l) in &s.picks {
        let y = w
            .id(o, l)
            .ok_or_else(|| SectionError::WindowTooSmall(format!("pick {}@{l}", w.quiver().name(o))))?;
        let shift = match m.lightcone(x, y)? {
            DistanceResult::InfiniteInWindow => 0,
            r => exact_or(m, r, || format!("r({}, {})", w.label(x), w.label(y)))?.min(1),
        };
        if w.id(o, l + shift).is_none() {
            return Err(SectionError::WindowTooSmall(format!("{} moved out of the window", w.label(y))));
        }
        out.picks.insert(o, l + shift);
    }
    let cert = verify_section(m, &out);
    if !cert.is_pass() {
        return Err(SectionError::SectionInvalid(format!("shifted section: {:?}", cert.verdict)));
    }
    let x_new = w.id(w.object(x).orbit, out.picks[&w.object(x).orbit]).expect("checked above");
    let c = classify_object(m, &out, x_new)?;
    if c.kind == Classification::Thread {
        return Err(SectionError::SectionInvalid(format!("{} is still a thread object", w.label(x_new))));
    }
    Ok(out)
}

/// Hom-maximal (resp. minimal) picks away from elided arrows.
fn extremal_picks(m: &Metric, ids: &[ObjId], maximal: bool) -> Vec<ObjId> {
    let w = m.window();
    ids.iter()
        .copied()
        .filter(|&a| !w.is_boundary_orbit(w.object(a).orbit))
        .filter(|&a| {
            !ids.iter()
                .any(|&c| c != a && if maximal { w.hom_edge(a, c) } else { w.hom_edge(c, a) })
        })
        .collect()
}

/// For each pick `A`, every pick `B` with `r(A, B) = 0` must map nonzero
/// into the finite set `C₁` of maximal picks, and dually every `B` with
/// `r(B, A) = 0` must receive a map from the minimal picks `C₂`.
pub fn dualizing_check(m: &Metric, s: &Section) -> Result<Certificate, SectionError> {
    let cert = verify_section(m, s);
    if !cert.is_pass() {
        return Err(SectionError::SectionInvalid(format!("{:?}", cert.verdict)));
    }
    let w = m.window();
    let ids = s.ids(w);
    let sinks = extremal_picks(m, &ids, true);
    let sources = extremal_picks(m, &ids, false);
    let mut b = CertBuilder::new("dualizing");
    for &a in &ids {
        for &c in &ids {
            let right = m.lightcone(a, c)?;
            let left = m.lightcone(c, a)?;
            if right.exact() == Some(0) && !sinks.iter().any(|&t| w.hom_edge(c, t)) {
                b.fail("finitely_presented", vec![w.label(a), w.label(c)], "no map into the maximal picks");
            }
            if left.exact() == Some(0) && !sources.iter().any(|&t| w.hom_edge(t, c)) {
                b.fail("cofinitely_presented", vec![w.label(a), w.label(c)], "no map from the minimal picks");
            }
            if !right.is_exact() && !right.is_infinite() || !left.is_exact() && !left.is_infinite() {
                b.unsure(format!("distance between {} and {} undetermined", w.label(a), w.label(c)));
            }
        }
    }
    b.note(format!(
        "C1 = {:?}, C2 = {:?}",
        sinks.iter().map(|&x| w.label(x)).collect::<Vec<_>>(),
        sources.iter().map(|&x| w.label(x)).collect::<Vec<_>>()
    ));
    Ok(b.finish())
}
