//! Subcommand implementations. Each produces a text rendering, a JSON value
//! and an outcome deciding the exit code.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use anyhow::Result;
use serde_json::{json, Value};
use tq_core::derived::{EngineError, ObjId, Window};
use tq_core::metric::{DistanceResult, Metric};
use tq_core::orders::OrderError;
use tq_core::sections::{
    check_condition_star, check_seed_properties, choose_seed, compute_heart, dualizing_check, extend_with_marks,
    homs_in_q_check, tilt_construction, verify_section, verify_split_t, Certificate, Section, SectionError, Verdict,
};
use tq_core::threadquiver::{
    contract_threads, expand_all, expand_thread, serialize, to_dot, zigzag_to_thread, QuiverError, StdArrow, ThreadQuiver,
};
use tq_core::threads::{classify_all, nonthread_path, r_in_between, report_rays, Classification, ThreadError};

use crate::load::{self, usage, Context, Usage};
use crate::{Cli, Command, Global, RewriteCmd, SectionCmd, ThreadsCmd};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    Failed,
    Inconclusive,
}

impl Outcome {
    fn of(cert: &Certificate) -> Outcome {
        match cert.verdict {
            Verdict::Pass => Outcome::Success,
            Verdict::Fail { .. } => Outcome::Failed,
            Verdict::InconclusiveAtWindow { .. } => Outcome::Inconclusive,
        }
    }

    /// Failure dominates inconclusiveness, which dominates success.
    fn worst(self, other: Outcome) -> Outcome {
        use Outcome::*;
        match (self, other) {
            (Failed, _) | (_, Failed) => Failed,
            (Inconclusive, _) | (_, Inconclusive) => Inconclusive,
            _ => Success,
        }
    }
}

pub struct Report {
    pub text: String,
    pub json: Value,
    pub outcome: Outcome,
}

impl Report {
    fn ok(text: String, json: Value) -> Report {
        Report {
            text,
            json,
            outcome: Outcome::Success,
        }
    }
}

/// Error kind for `--json-errors` and the exit code.
pub fn classify_error(e: &anyhow::Error, strict: bool) -> (&'static str, u8) {
    let window_scale = (if strict { 3 } else { 1 }, "inconclusive_at_window");
    for cause in e.chain() {
        if cause.downcast_ref::<Usage>().is_some() {
            return ("usage", 2);
        }
        if cause.downcast_ref::<QuiverError>().is_some() || cause.downcast_ref::<OrderError>().is_some() {
            return ("parse", 2);
        }
        if let Some(s) = cause.downcast_ref::<SectionError>() {
            match s {
                SectionError::WindowTooSmall(_) | SectionError::InconclusiveAtWindow(_) => {
                    return (window_scale.1, window_scale.0)
                }
                SectionError::UnknownOrbit(_) | SectionError::NotPicked(_) | SectionError::NotUniqueOnOrbit(_) => {
                    return ("usage", 2)
                }
                SectionError::SectionInvalid(_) | SectionError::NonDirectingCenter(_) => return ("section_invalid", 1),
                SectionError::Engine(_) | SectionError::Threads(_) => continue,
            }
        }
        if let Some(t) = cause.downcast_ref::<ThreadError>() {
            match t {
                ThreadError::InconclusiveDistance(_) | ThreadError::NoAnchorInWindow(_) => {
                    return (window_scale.1, window_scale.0)
                }
                ThreadError::NotPicked(_) => return ("usage", 2),
                ThreadError::Engine(_) => continue,
                _ => return ("threads", 1),
            }
        }
        if let Some(en) = cause.downcast_ref::<EngineError>() {
            return match en {
                EngineError::NotInWindow(_) | EngineError::UnknownVertex(_) => ("usage", 2),
                EngineError::TooLarge(_) => (window_scale.1, window_scale.0),
                EngineError::Quiver(_) => ("parse", 2),
                _ => ("engine", 2),
            };
        }
    }
    ("other", 2)
}

pub fn run(cli: &Cli) -> Result<Report> {
    let g = &cli.global;
    match &cli.command {
        Command::Parse { input } => parse_cmd(&load::thread_quiver(input)?),
        Command::Window { input } => {
            let cx = Context::load(input, g)?;
            window_cmd(&cx.window, g)
        }
        Command::Distance { input, from, to } => {
            let cx = Context::load(input, g)?;
            distance_cmd(&cx, from, to)
        }
        Command::Interval { input, x, y, section } => {
            let cx = Context::load(input, g)?;
            let s = cx.section(section.as_deref())?;
            interval_cmd(&cx, &s, x, y)
        }
        Command::Section(cmd) => section_cmd(cmd, g),
        Command::Threads(ThreadsCmd::Report { input, section }) => {
            let cx = Context::load(input, g)?;
            let s = cx.section(section.as_deref())?;
            threads_cmd(&cx, &s)
        }
        Command::Rewrite(cmd) => rewrite_cmd(cmd, g),
        Command::Export { input, section, window } => {
            if *window || section.is_some() {
                let cx = Context::load(input, g)?;
                let highlight: BTreeSet<ObjId> = match section {
                    Some(p) => cx.section(Some(p))?.ids(&cx.window).into_iter().collect(),
                    None => BTreeSet::new(),
                };
                let dot = cx.window.to_dot(&highlight);
                Ok(Report::ok(dot.clone(), json!({ "dot": dot })))
            } else {
                let tq = load::thread_quiver(input)?;
                let dot = to_dot(&tq, &BTreeSet::new());
                Ok(Report::ok(dot.clone(), json!({ "dot": dot })))
            }
        }
    }
}

fn parse_cmd(tq: &ThreadQuiver) -> Result<Report> {
    let mut text = String::new();
    let _ = writeln!(text, "vertices: {}", tq.vertices.len());
    let _ = writeln!(text, "arrows: {}", tq.arrows.len());
    let _ = writeln!(text, "threads: {}", tq.threads.len());
    let mut threads = Vec::new();
    for t in &tq.threads {
        let _ = writeln!(
            text,
            "  {}: {} -> {} label {} (cofinality {:?}, coinitiality {:?})",
            t.id,
            t.src,
            t.dst,
            t.label,
            t.label.cofinality_class(),
            t.label.coinitiality_class()
        );
        threads.push(json!({
            "id": t.id,
            "src": t.src,
            "dst": t.dst,
            "label": t.label.to_string(),
            "cofinality": t.label.cofinality_class(),
            "coinitiality": t.label.coinitiality_class(),
        }));
    }
    let slf = tq.is_strongly_locally_finite();
    let _ = writeln!(text, "strongly locally finite: {slf}");
    let json = json!({
        "vertices": tq.vertices,
        "arrows": tq.arrows,
        "threads": threads,
        "strongly_locally_finite": slf,
        "canonical": serialize(tq),
    });
    Ok(Report::ok(text, json))
}

fn window_cmd(w: &Window, g: &Global) -> Result<Report> {
    let mut text = String::new();
    let _ = writeln!(text, "levels {}..={}, {} objects, {} mesh arrows", w.lo(), w.hi(), w.len(), w.arrows().len());
    for id in 0..w.len() {
        let o = w.object(id);
        let dim: Vec<String> = o.dim.iter().map(|d| d.to_string()).collect();
        let _ = writeln!(text, "  {} dim [{}] shift {}", w.label(id), dim.join(" "), o.shift);
    }
    for &(a, b) in w.arrows() {
        let _ = writeln!(text, "  {} -> {}", w.label(a), w.label(b));
    }
    Ok(Report::ok(text, w.to_json(g.full)))
}

fn distance_json(d: DistanceResult) -> Value {
    let mut v = serde_json::to_value(d).expect("distance serialises");
    v["certificate"] = json!(d.certificate());
    v
}

fn distance_text(d: DistanceResult) -> String {
    match d {
        DistanceResult::Exact { value } => value.to_string(),
        DistanceResult::InfiniteInWindow => "infinite (closed in window)".into(),
        DistanceResult::Inconclusive { upper_bound, lower_bound } => {
            let b = |o: Option<i64>| o.map_or("?".to_string(), |v| v.to_string());
            format!("inconclusive (between {} and {})", b(lower_bound), b(upper_bound))
        }
    }
}

fn distance_cmd(cx: &Context, from: &str, to: &str) -> Result<Report> {
    let (x, y) = (cx.object(from)?, cx.object(to)?);
    let m = Metric::new(&cx.window);
    let fwd = m.lightcone(x, y)?;
    let bwd = m.lightcone(y, x)?;
    let rt = m.roundtrip(x, y)?;
    let w = &cx.window;
    let text = format!(
        "r({a}, {b}) = {}\nr({b}, {a}) = {}\nroundtrip = {}\n",
        distance_text(fwd),
        distance_text(bwd),
        distance_text(rt),
        a = w.label(x),
        b = w.label(y)
    );
    let outcome = if [fwd, bwd].iter().any(|d| matches!(d, DistanceResult::Inconclusive { .. })) {
        Outcome::Inconclusive
    } else {
        Outcome::Success
    };
    let json = json!({
        "from": w.label(x),
        "to": w.label(y),
        "r_forward": distance_json(fwd),
        "r_backward": distance_json(bwd),
        "roundtrip": distance_json(rt),
    });
    Ok(Report { text, json, outcome })
}

fn labels(w: &Window, ids: &[ObjId]) -> Vec<String> {
    ids.iter().map(|&i| w.label(i)).collect()
}

fn interval_cmd(cx: &Context, s: &Section, x: &str, y: &str) -> Result<Report> {
    let (x, y) = (cx.object(x)?, cx.object(y)?);
    let m = Metric::new(&cx.window);
    let w = &cx.window;
    let set = r_in_between(&m, s, x, y)?;
    let path = nonthread_path(&m, s, x, y)?;
    let members = labels(w, &set.members);
    let mut text = format!(
        "r({}, {}) = {}\nkind: {:?}\nmembers: {}\n",
        w.label(x),
        w.label(y),
        set.distance,
        set.kind,
        members.join(" ")
    );
    match &path {
        Some(p) => {
            let _ = writeln!(text, "path through nonthreads: {}", labels(w, p).join(" -> "));
        }
        None => text.push_str("no path through nonthreads\n"),
    }
    let outcome = if set.kind == tq_core::threads::IntervalKind::Undetermined {
        Outcome::Inconclusive
    } else {
        Outcome::Success
    };
    let json = json!({
        "x": w.label(x),
        "y": w.label(y),
        "distance": set.distance,
        "kind": set.kind,
        "members": members,
        "nonthread_path": path.map(|p| labels(w, &p)),
    });
    Ok(Report { text, json, outcome })
}

fn cert_text(c: &Certificate) -> String {
    let mut text = String::new();
    match &c.verdict {
        Verdict::Pass => {
            let _ = writeln!(text, "{}: pass", c.check);
        }
        Verdict::Fail { violations } => {
            let _ = writeln!(text, "{}: FAIL", c.check);
            for v in violations {
                let _ = writeln!(text, "  {} [{}]: {}", v.clause, v.objects.join(", "), v.detail);
            }
        }
        Verdict::InconclusiveAtWindow { reasons } => {
            let _ = writeln!(text, "{}: inconclusive at window scale", c.check);
            for r in reasons {
                let _ = writeln!(text, "  {r}");
            }
        }
    }
    for n in &c.notes {
        let _ = writeln!(text, "  note: {n}");
    }
    text
}

fn cert_json(c: &Certificate) -> Value {
    serde_json::to_value(c).expect("certificate serialises")
}

fn section_text(w: &Window, s: &Section) -> String {
    let picks: Vec<String> = s
        .picks
        .iter()
        .map(|(&o, &l)| format!("{}@{}", w.quiver().name(o), l))
        .collect();
    format!("section: {}\n", picks.join(" "))
}

fn section_cmd(cmd: &SectionCmd, g: &Global) -> Result<Report> {
    match cmd {
        SectionCmd::Verify { input, section } => {
            let cx = Context::load(input, g)?;
            let s = cx.section(Some(section))?;
            let m = Metric::new(&cx.window);
            let c = verify_section(&m, &s);
            Ok(Report {
                text: cert_text(&c),
                json: json!({ "certificate": cert_json(&c) }),
                outcome: Outcome::of(&c),
            })
        }
        SectionCmd::Tilt { input, seeds } => {
            let cx = Context::load(input, g)?;
            let w = &cx.window;
            let m = Metric::new(w);
            let given = seeds.iter().map(|t| cx.object(t)).collect::<Result<Vec<_>>>()?;
            let chosen = choose_seed(&m, &given)?;
            let props = check_seed_properties(&m, &chosen, &given);
            let s = tilt_construction(&m, &chosen)?;
            let valid = verify_section(&m, &s);
            let homs = homs_in_q_check(&m, &chosen, &s);
            let mut text = format!("seeds: {}\n", labels(w, &chosen).join(" "));
            text += &section_text(w, &s);
            for c in [&props, &valid, &homs] {
                text += &cert_text(c);
            }
            let outcome = Outcome::of(&props).worst(Outcome::of(&valid)).worst(Outcome::of(&homs));
            let json = json!({
                "seeds": labels(w, &chosen),
                "section": s.to_json(w),
                "certificates": [cert_json(&props), cert_json(&valid), cert_json(&homs)],
            });
            Ok(Report { text, json, outcome })
        }
        SectionCmd::Heart { input, section } => {
            let cx = Context::load(input, g)?;
            let w = &cx.window;
            let s = cx.section(Some(section))?;
            let m = Metric::new(w);
            let h = compute_heart(&m, &s)?;
            let split = verify_split_t(&m, &s)?;
            let mut text = format!("heart: {}\n", labels(w, &h.heart).join(" "));
            let _ = writeln!(text, "projectives: {}", labels(w, &h.projectives).join(" "));
            let _ = writeln!(text, "projectives match the section: {}", h.matches_section);
            if !h.undetermined.is_empty() {
                let _ = writeln!(text, "undetermined: {}", labels(w, &h.undetermined).join(" "));
            }
            text += &cert_text(&split);
            let json = json!({
                "aisle": labels(w, &h.aisle),
                "heart": labels(w, &h.heart),
                "projectives": labels(w, &h.projectives),
                "undetermined": labels(w, &h.undetermined),
                "matches_section": h.matches_section,
                "split_t": cert_json(&split),
            });
            Ok(Report {
                text,
                json,
                outcome: Outcome::of(&split),
            })
        }
        SectionCmd::Star { input, section } => {
            let cx = Context::load(input, g)?;
            let s = cx.section(Some(section))?;
            let m = Metric::new(&cx.window);
            let c = check_condition_star(&m, &s, Some(&cx.tq), cx.expansion.as_ref())?;
            Ok(Report {
                text: cert_text(&c),
                json: json!({ "certificate": cert_json(&c) }),
                outcome: Outcome::of(&c),
            })
        }
        SectionCmd::Extend { input, section } => {
            let cx = Context::load(input, g)?;
            let w = &cx.window;
            let s = cx.section(Some(section))?;
            let m = Metric::new(w);
            let ext = extend_with_marks(&m, &s, Some(&cx.tq), cx.expansion.as_ref())?;
            let star = check_condition_star(&m, &ext.section, Some(&cx.tq), cx.expansion.as_ref())?;
            let mut text = format!("candidates: {}\n", labels(w, &ext.candidates).join(" "));
            let _ = writeln!(text, "seeds: {}", labels(w, &ext.seeds).join(" "));
            text += &section_text(w, &ext.section);
            let _ = writeln!(text, "contains the input orbits: {}", ext.contains_input_orbits);
            for o in &ext.obstructions {
                let _ = writeln!(text, "obstruction: {o}");
            }
            text += &cert_text(&star);
            let outcome = if ext.contains_input_orbits {
                Outcome::of(&star)
            } else {
                Outcome::Failed
            };
            let json = json!({
                "candidates": labels(w, &ext.candidates),
                "seeds": labels(w, &ext.seeds),
                "section": ext.section.to_json(w),
                "contains_input_orbits": ext.contains_input_orbits,
                "obstructions": ext.obstructions,
                "condition_star": cert_json(&star),
            });
            Ok(Report { text, json, outcome })
        }
        SectionCmd::Dualizing { input, section } => {
            let cx = Context::load(input, g)?;
            let s = cx.section(Some(section))?;
            let m = Metric::new(&cx.window);
            let c = dualizing_check(&m, &s)?;
            Ok(Report {
                text: cert_text(&c),
                json: json!({ "certificate": cert_json(&c) }),
                outcome: Outcome::of(&c),
            })
        }
    }
}

fn threads_cmd(cx: &Context, s: &Section) -> Result<Report> {
    let w = &cx.window;
    let m = Metric::new(w);
    let classes = classify_all(&m, s)?;
    let rays = report_rays(&m, s, Some(&cx.tq), cx.expansion.as_ref())?;
    let mut text = String::new();
    let mut outcome = Outcome::Success;
    let mut objects = Vec::new();
    for c in &classes {
        if c.kind == Classification::Inconclusive {
            outcome = Outcome::Inconclusive;
        }
        let _ = writeln!(
            text,
            "{} {:?} succ [{}] pred [{}]",
            w.label(c.id),
            c.kind,
            labels(w, &c.successors).join(" "),
            labels(w, &c.predecessors).join(" ")
        );
        objects.push(json!({
            "id": w.label(c.id),
            "kind": c.kind,
            "successors": labels(w, &c.successors),
            "predecessors": labels(w, &c.predecessors),
        }));
    }
    let mut ray_json = Vec::new();
    for r in &rays {
        let _ = write!(text, "{} {:?}: [{}]", r.id, r.side, labels(w, &r.members).join(" "));
        if let Some(a) = r.anchor {
            let _ = write!(text, " anchor {}", w.label(a));
        }
        if let Some(mk) = &r.mark {
            let place = mk.window.map_or("outside the window".to_string(), |id| w.label(id));
            let _ = write!(text, " mark {place}");
            if let Some(z) = &mk.symbolic {
                let _ = write!(text, " predicted P_{z}");
            }
            if let Some(agree) = mk.routes_agree {
                let _ = write!(text, " routes agree: {agree}");
            }
        }
        if let Some(sym) = &r.symbolic {
            let _ = write!(text, " part {:?} approach {:?}", sym.part, sym.approach);
        }
        text.push('\n');
        let mut v = serde_json::to_value(r).expect("ray serialises");
        v["members"] = json!(labels(w, &r.members));
        v["anchor"] = json!(r.anchor.map(|a| w.label(a)));
        if let (Some(mk), Some(obj)) = (&r.mark, v.get_mut("mark")) {
            obj["window"] = json!(mk.window.map(|id| w.label(id)));
        }
        ray_json.push(v);
    }
    let json = json!({ "objects": objects, "rays": ray_json });
    Ok(Report { text, json, outcome })
}

fn rewrite_cmd(cmd: &RewriteCmd, g: &Global) -> Result<Report> {
    let out = match cmd {
        RewriteCmd::Contract { input } => {
            let tq = load::thread_quiver(input)?;
            if !tq.threads.is_empty() {
                return Err(usage("contract expects a quiver without thread arrows"));
            }
            contract_threads(&tq.underlying_quiver())?
        }
        RewriteCmd::Zigzag { input, base, tail, fresh } => {
            let tq = load::thread_quiver(input)?;
            zigzag_to_thread(&tq, base, tail, fresh.as_deref())?
        }
        RewriteCmd::Expand { input, thread } => {
            let tq = load::thread_quiver(input)?;
            let e = match thread {
                Some(t) => expand_thread(&tq, t, g.depth)?,
                None => expand_all(&tq, g.depth)?,
            };
            let q = &e.quiver;
            let arrows = q
                .arrows()
                .iter()
                .map(|a| StdArrow {
                    id: a.id.clone(),
                    src: q.name(a.src).to_string(),
                    dst: q.name(a.dst).to_string(),
                })
                .collect();
            let elided: Vec<&str> = q.arrows().iter().filter(|a| a.elided).map(|a| a.id.as_str()).collect();
            let plain = ThreadQuiver::new(q.vertices().to_vec(), arrows, Vec::new())?;
            let mut text = serialize(&plain);
            if !elided.is_empty() {
                let _ = writeln!(text, "# elided: {}", elided.join(" "));
            }
            let elements: serde_json::Map<String, Value> = e
                .element_map
                .iter()
                .map(|(k, v)| (k.clone(), json!({ "thread": v.thread, "element": v.element.to_string() })))
                .collect();
            let json = json!({ "quiver": serialize(&plain), "elided": elided, "elements": elements });
            return Ok(Report::ok(text, json));
        }
    };
    let text = serialize(&out);
    Ok(Report::ok(text.clone(), json!({ "quiver": text })))
}
