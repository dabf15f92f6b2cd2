//! Chain contraction and the zig-zag/thread rewrite.

use super::{Quiver, QuiverError, StdArrow, ThreadArrow, ThreadQuiver};
use crate::orders::{Countability, LabelFlags, LinearOrder, TriBool};

/// Contracts every maximal chain of interior vertices (exactly one incoming
/// and one outgoing arrow) to a thread arrow labelled `Fin(length)`.
pub fn contract_threads(q: &Quiver) -> Result<ThreadQuiver, QuiverError> {
    q.topological_order()?;
    let n = q.len();
    let interior: Vec<bool> = (0..n).map(|v| q.in_degree(v) == 1 && q.out_degree(v) == 1).collect();
    let out_arrow = |v: usize| q.arrows().iter().find(|a| a.src == v).expect("interior vertex has an outgoing arrow");

    let vertices = (0..n).filter(|&v| !interior[v]).map(|v| q.name(v).to_string()).collect();
    let mut arrows = Vec::new();
    let mut threads = Vec::new();
    for a in q.arrows() {
        if interior[a.src] {
            continue;
        }
        if !interior[a.dst] {
            arrows.push(StdArrow {
                id: a.id.clone(),
                src: q.name(a.src).to_string(),
                dst: q.name(a.dst).to_string(),
            });
            continue;
        }
        let mut length = 0u64;
        let mut v = a.dst;
        while interior[v] {
            length += 1;
            v = out_arrow(v).dst;
        }
        threads.push(ThreadArrow {
            id: a.id.clone(),
            src: q.name(a.src).to_string(),
            dst: q.name(v).to_string(),
            label: LinearOrder::Fin(length),
        });
    }
    ThreadQuiver::new(vertices, arrows, threads)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Dir {
    Away,
    Toward,
}

/// Replaces a zig-zag tail hanging off `base` by one thread arrow
/// `base ⤏ z`. The tail is given as its vertices in order, starting next to
/// the base. `fresh` names the new end vertex; by default it reuses the name
/// of the last tail vertex.
///
/// At finite scale the tail is a finite A_n whose light cone at the base is
/// linear, so the label is `Fin(k)` with `k` the number of tail vertices
/// minus one, counting each `Fin`-labelled tail thread as its chain. Tails
/// whose threads carry other labels get a symbolic label recording the shape.
pub fn zigzag_to_thread(tq: &ThreadQuiver, base: &str, tail: &[String], fresh: Option<&str>) -> Result<ThreadQuiver, QuiverError> {
    if tail.is_empty() {
        return Err(QuiverError::NotAZigZagTail("empty tail".into()));
    }
    if !tq.vertices.iter().any(|v| v == base) {
        return Err(QuiverError::UnknownVertex(base.to_string()));
    }
    for v in tail {
        if !tq.vertices.contains(v) {
            return Err(QuiverError::UnknownVertex(v.clone()));
        }
        if v == base {
            return Err(QuiverError::NotAZigZagTail("tail contains the base".into()));
        }
    }
    let path: Vec<&str> = std::iter::once(base).chain(tail.iter().map(String::as_str)).collect();
    let mut used_arrows = Vec::new();
    let mut used_threads = Vec::new();
    let mut finite_total: Option<u64> = Some(0);
    let mut shape = Vec::new();
    let mut first_id = None;
    for w in path.windows(2) {
        let (u, v) = (w[0], w[1]);
        let std: Vec<_> = tq
            .arrows
            .iter()
            .filter(|a| (a.src == u && a.dst == v) || (a.src == v && a.dst == u))
            .collect();
        let thr: Vec<_> = tq
            .threads
            .iter()
            .filter(|t| (t.src == u && t.dst == v) || (t.src == v && t.dst == u))
            .collect();
        if std.len() + thr.len() != 1 {
            return Err(QuiverError::NotAZigZagTail(format!("{u} and {v} must be joined by exactly one arrow")));
        }
        if let Some(a) = std.first() {
            let dir = if a.src == u { Dir::Away } else { Dir::Toward };
            shape.push(if dir == Dir::Away { ">".to_string() } else { "<".to_string() });
            finite_total = finite_total.map(|t| t + 1);
            used_arrows.push(a.id.clone());
            first_id.get_or_insert_with(|| a.id.clone());
        } else {
            let t = thr[0];
            if t.src != u {
                return Err(QuiverError::NotAZigZagTail(format!("thread {} points toward the base", t.id)));
            }
            shape.push(format!("~{}>", t.label));
            finite_total = match (&t.label, finite_total) {
                (LinearOrder::Fin(k), Some(total)) => Some(total + 1 + k),
                _ => None,
            };
            used_threads.push(t.id.clone());
            first_id.get_or_insert_with(|| t.id.clone());
        }
    }
    for v in tail {
        let deg = tq.degree(v);
        let inside = usize::from(path.first() != Some(&v.as_str())) + usize::from(path.last() != Some(&v.as_str()));
        if deg != inside {
            return Err(QuiverError::NotAZigZagTail(format!("tail vertex {v} has arrows outside the tail")));
        }
    }
    let z = fresh.unwrap_or_else(|| tail.last().expect("nonempty tail")).to_string();
    let label = match finite_total {
        Some(total) => LinearOrder::Fin(total - 1),
        None => LinearOrder::labeled(
            format!("zigzag[{}]", shape.join("")),
            LabelFlags {
                locally_discrete: TriBool::True,
                cofinality: Countability::Unknown,
                coinitiality: Countability::Unknown,
            },
        ),
    };
    let mut vertices: Vec<String> = tq.vertices.iter().filter(|v| !tail.contains(v)).cloned().collect();
    if vertices.contains(&z) {
        return Err(QuiverError::DuplicateId(z));
    }
    vertices.push(z.clone());
    let arrows = tq.arrows.iter().filter(|a| !used_arrows.contains(&a.id)).cloned().collect();
    let mut threads: Vec<ThreadArrow> = tq.threads.iter().filter(|t| !used_threads.contains(&t.id)).cloned().collect();
    threads.push(ThreadArrow {
        id: first_id.expect("nonempty tail"),
        src: base.to_string(),
        dst: z,
        label,
    });
    ThreadQuiver::new(vertices, arrows, threads)
}

/// Inverse direction: re-expands `x ⤏[Fin(m)] z` into a zig-zag tail with
/// segment lengths `shape` (alternating, first segment pointing away from
/// `x`). The lengths must add up to `m + 1`; the first arrow stays a thread
/// arrow with label `Fin(0)` and the last tail vertex keeps the name `z`.
pub fn thread_to_zigzag(tq: &ThreadQuiver, thread: &str, shape: &[usize]) -> Result<ThreadQuiver, QuiverError> {
    let t = tq.thread(thread)?.clone();
    let LinearOrder::Fin(m) = t.label else {
        return Err(QuiverError::NotAZigZagTail(format!("thread {thread} has a non-finite label")));
    };
    if shape.is_empty() || shape.contains(&0) {
        return Err(QuiverError::NotAZigZagTail("shape lengths must be positive".into()));
    }
    let total: usize = shape.iter().sum();
    if total as u64 != m + 1 {
        return Err(QuiverError::NotAZigZagTail(format!(
            "shape covers {total} vertices but the thread needs {}",
            m + 1
        )));
    }
    if tq.degree(&t.dst) != 1 {
        return Err(QuiverError::NotAZigZagTail(format!("{} has arrows besides the thread", t.dst)));
    }
    let names: Vec<String> = (1..=total)
        .map(|i| if i == total { t.dst.clone() } else { format!("{thread}.v{i}") })
        .collect();
    let mut vertices = tq.vertices.clone();
    for name in &names[..total - 1] {
        if vertices.contains(name) {
            return Err(QuiverError::DuplicateId(name.clone()));
        }
        vertices.push(name.clone());
    }
    let mut dirs = Vec::new();
    for (k, len) in shape.iter().enumerate() {
        let dir = if k % 2 == 0 { Dir::Away } else { Dir::Toward };
        dirs.extend(std::iter::repeat(dir).take(*len));
    }
    let mut arrows = tq.arrows.clone();
    let mut threads: Vec<ThreadArrow> = tq.threads.iter().filter(|x| x.id != thread).cloned().collect();
    threads.push(ThreadArrow {
        id: t.id.clone(),
        src: t.src.clone(),
        dst: names[0].clone(),
        label: LinearOrder::Fin(0),
    });
    for i in 1..total {
        let (u, v) = (&names[i - 1], &names[i]);
        let (src, dst) = if dirs[i] == Dir::Away { (u, v) } else { (v, u) };
        arrows.push(StdArrow {
            id: format!("{thread}.a{i}"),
            src: src.clone(),
            dst: dst.clone(),
        });
    }
    ThreadQuiver::new(vertices, arrows, threads)
}
