//! Extending a section by the marks of its rays and comarks of its corays,
//! and condition (*) for the resulting seed set.

use serde::Serialize;

use super::{symbolic_star, CertBuilder, Certificate, Section, SectionError};
use super::{choose_seed, tilt_construction, verify_section};
use crate::derived::ObjId;
use crate::metric::{Directing, DistanceResult, Metric};
use crate::threadquiver::{Expansion, ThreadQuiver};
use crate::threads::{enumerate_nonthread, report_rays};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Extension {
    /// Nonthreads, then marks and comarks, before refinement.
    pub candidates: Vec<ObjId>,
    pub seeds: Vec<ObjId>,
    pub section: Section,
    /// Every orbit picked by the input is picked by the output.
    pub contains_input_orbits: bool,
    /// Marks left out of the seed set, with the reason.
    pub obstructions: Vec<String>,
}

/// Nonthread picks followed by the marks and comarks found in the window.
fn seed_candidates(
    m: &Metric,
    s: &Section,
    tq: Option<&ThreadQuiver>,
    expansion: Option<&Expansion>,
) -> Result<(Vec<ObjId>, Vec<String>), SectionError> {
    let w = m.window();
    let mut out: Vec<ObjId> = enumerate_nonthread(m, s)?.into_iter().map(|c| c.id).collect();
    let mut obstructions = Vec::new();
    for r in report_rays(m, s, tq, expansion)? {
        let (Some(a), Some(mark)) = (r.anchor, r.mark.as_ref()) else {
            if !r.members.is_empty() {
                obstructions.push(format!("{}: no mark in the window", r.id));
            }
            continue;
        };
        let Some(mk) = mark.window else {
            obstructions.push(format!("{}: mark lies outside the window", r.id));
            continue;
        };
        if m.is_directing(mk)? != Directing::Yes {
            obstructions.push(format!("{}: mark {} is not directing", r.id, w.label(mk)));
            continue;
        }
        // A mark reaching the lowest translate of its anchor in view has no
        // finite lower bound at window scale.
        let low = w.lo() - w.object(a).level;
        if m.lightcone(mk, a)? == (DistanceResult::Exact { value: low }) {
            obstructions.push(format!("{}: r({}, {}) unbounded below", r.id, w.label(mk), w.label(a)));
            continue;
        }
        if !out.contains(&mk) {
            out.push(mk);
        }
    }
    Ok((out, obstructions))
}

/// Seeds from nonthreads, marks and comarks, refined and tilted into a new
/// section.
pub fn extend_with_marks(
    m: &Metric,
    s: &Section,
    tq: Option<&ThreadQuiver>,
    expansion: Option<&Expansion>,
) -> Result<Extension, SectionError> {
    let cert = verify_section(m, s);
    if !cert.is_pass() {
        return Err(SectionError::SectionInvalid(format!("{:?}", cert.verdict)));
    }
    let (candidates, obstructions) = seed_candidates(m, s, tq, expansion)?;
    let seeds = choose_seed(m, &candidates)?;
    let mut section = tilt_construction(m, &seeds)?;
    section.policies = s.policies.clone();
    let contains_input_orbits = s.orbits().is_subset(&section.orbits());
    Ok(Extension {
        candidates,
        seeds,
        section,
        contains_input_orbits,
        obstructions,
    })
}

/// Condition (*) at window scale: every pick at finite round-trip distance
/// from the seed candidates, and every symbolic ray approachable by a
/// countable sequence.
pub fn check_condition_star(
    m: &Metric,
    s: &Section,
    tq: Option<&ThreadQuiver>,
    expansion: Option<&Expansion>,
) -> Result<Certificate, SectionError> {
    let w = m.window();
    let (t, obstructions) = seed_candidates(m, s, tq, expansion)?;
    let mut b = CertBuilder::new("condition_star_window");
    for o in obstructions {
        b.note(o);
    }
    for x in s.ids(w) {
        match m.roundtrip_set(&t, x)? {
            DistanceResult::Exact { .. } => {}
            DistanceResult::InfiniteInWindow => b.fail("finite_seed_distance", vec![w.label(x)], "infinitely far from the seed candidates"),
            r => b.unsure(format!("d(T, {}) is {}", w.label(x), r.certificate())),
        }
    }
    b.note(format!("{} seed candidates", t.len()));
    let mut parts = vec![b.finish()];
    if let Some(tq) = tq {
        parts.push(symbolic_star(tq, &s.policies)?);
    }
    Ok(Certificate::merge("condition_star", parts))
}
