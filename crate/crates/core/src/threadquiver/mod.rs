//! Thread quivers: finite quivers whose thread arrows stand for infinite
//! chains labelled by linear orders.

mod expand;
pub(crate) mod format;
mod rewrite;

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::orders::{LinearOrder, OrderError};

pub use expand::{expand_all, expand_thread, Expansion, ExpansionVertex};
pub use format::{parse, quiver_to_dot, serialize, to_dot};
pub use rewrite::{contract_threads, thread_to_zigzag, zigzag_to_thread};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuiverError {
    #[error("line {line}, column {column}: expected {expected}")]
    Syntax { line: usize, column: usize, expected: String },
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("duplicate id {0:?}")]
    DuplicateId(String),
    #[error("quiver has an oriented cycle")]
    CyclicQuiver,
    #[error("unknown thread arrow {0:?}")]
    UnknownThread(String),
    #[error("not a zig-zag tail: {0}")]
    NotAZigZagTail(String),
    #[error("path count overflow")]
    CountOverflow,
    #[error(transparent)]
    Order(#[from] OrderError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct StdArrow {
    pub id: String,
    pub src: String,
    pub dst: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ThreadArrow {
    pub id: String,
    pub src: String,
    pub dst: String,
    pub label: LinearOrder,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct ThreadQuiver {
    pub vertices: Vec<String>,
    pub arrows: Vec<StdArrow>,
    pub threads: Vec<ThreadArrow>,
}

impl ThreadQuiver {
    /// Builds a thread quiver, checking endpoints and id uniqueness.
    pub fn new(vertices: Vec<String>, arrows: Vec<StdArrow>, threads: Vec<ThreadArrow>) -> Result<Self, QuiverError> {
        let mut seen = BTreeSet::new();
        for v in &vertices {
            if !seen.insert(v.clone()) {
                return Err(QuiverError::DuplicateId(v.clone()));
            }
        }
        let mut ids = BTreeSet::new();
        let endpoints = arrows
            .iter()
            .map(|a| (&a.id, &a.src, &a.dst))
            .chain(threads.iter().map(|t| (&t.id, &t.src, &t.dst)));
        for (id, s, d) in endpoints {
            for v in [s, d] {
                if !seen.contains(v) {
                    return Err(QuiverError::UnknownVertex(v.clone()));
                }
            }
            if !ids.insert(id.clone()) {
                return Err(QuiverError::DuplicateId(id.clone()));
            }
        }
        Ok(ThreadQuiver { vertices, arrows, threads })
    }

    pub fn thread(&self, id: &str) -> Result<&ThreadArrow, QuiverError> {
        self.threads
            .iter()
            .find(|t| t.id == id)
            .ok_or_else(|| QuiverError::UnknownThread(id.to_string()))
    }

    /// Thread arrows coarsened to plain arrows, ids preserved.
    pub fn underlying_quiver(&self) -> Quiver {
        let arrows = self
            .arrows
            .iter()
            .map(|a| (a.id.clone(), a.src.clone(), a.dst.clone(), false))
            .chain(self.threads.iter().map(|t| (t.id.clone(), t.src.clone(), t.dst.clone(), false)))
            .collect::<Vec<_>>();
        Quiver::from_named(self.vertices.clone(), arrows).expect("thread quiver is self-consistent")
    }

    /// For a finite quiver this reduces to acyclicity of the underlying quiver.
    pub fn is_strongly_locally_finite(&self) -> bool {
        self.underlying_quiver().is_acyclic()
    }

    /// Number of incident arrows (standard and thread) per vertex.
    fn degree(&self, v: &str) -> usize {
        self.arrows
            .iter()
            .map(|a| (&a.src, &a.dst))
            .chain(self.threads.iter().map(|t| (&t.src, &t.dst)))
            .map(|(s, d)| usize::from(s == v) + usize::from(d == v))
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Arrow {
    pub id: String,
    pub src: usize,
    pub dst: usize,
    /// Marks an arrow standing in for a skipped symbolic segment.
    pub elided: bool,
}

/// A finite quiver with vertices indexed `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
    #[serde(skip)]
    index: HashMap<String, usize>,
}

impl Quiver {
    pub fn from_named(vertices: Vec<String>, arrows: Vec<(String, String, String, bool)>) -> Result<Self, QuiverError> {
        let mut index = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if index.insert(v.clone(), i).is_some() {
                return Err(QuiverError::DuplicateId(v.clone()));
            }
        }
        let mut ids = BTreeSet::new();
        let mut out = Vec::with_capacity(arrows.len());
        for (id, s, d, elided) in arrows {
            let src = *index.get(&s).ok_or(QuiverError::UnknownVertex(s.clone()))?;
            let dst = *index.get(&d).ok_or(QuiverError::UnknownVertex(d.clone()))?;
            if !ids.insert(id.clone()) {
                return Err(QuiverError::DuplicateId(id));
            }
            out.push(Arrow { id, src, dst, elided });
        }
        Ok(Quiver { vertices, arrows: out, index })
    }

    /// Convenience constructor from `(src, dst)` name pairs with generated ids.
    pub fn from_edges(vertices: &[&str], edges: &[(&str, &str)]) -> Result<Self, QuiverError> {
        let arrows = edges
            .iter()
            .enumerate()
            .map(|(i, (s, d))| (format!("e{i}"), s.to_string(), d.to_string(), false))
            .collect();
        Quiver::from_named(vertices.iter().map(|s| s.to_string()).collect(), arrows)
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn name(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn vertex(&self, name: &str) -> Result<usize, QuiverError> {
        self.index.get(name).copied().ok_or_else(|| QuiverError::UnknownVertex(name.to_string()))
    }

    pub fn topological_order(&self) -> Result<Vec<usize>, QuiverError> {
        let n = self.len();
        let mut indeg = vec![0usize; n];
        for a in &self.arrows {
            indeg[a.dst] += 1;
        }
        let mut queue: VecDeque<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for a in self.arrows.iter().filter(|a| a.src == v) {
                indeg[a.dst] -= 1;
                if indeg[a.dst] == 0 {
                    queue.push_back(a.dst);
                }
            }
        }
        if order.len() == n {
            Ok(order)
        } else {
            Err(QuiverError::CyclicQuiver)
        }
    }

    pub fn is_acyclic(&self) -> bool {
        self.topological_order().is_ok()
    }

    /// `counts[x][y]` = number of paths x⇝y, trivial path included.
    pub fn path_counts(&self) -> Result<Vec<Vec<u128>>, QuiverError> {
        let order = self.topological_order()?;
        let n = self.len();
        let mut counts = vec![vec![0u128; n]; n];
        for &x in order.iter().rev() {
            counts[x][x] = 1;
            for a in self.arrows.iter().filter(|a| a.src == x) {
                for y in 0..n {
                    let add = counts[a.dst][y];
                    counts[x][y] = counts[x][y].checked_add(add).ok_or(QuiverError::CountOverflow)?;
                }
            }
        }
        Ok(counts)
    }

    pub fn path_count(&self, x: &str, y: &str) -> Result<u128, QuiverError> {
        let (x, y) = (self.vertex(x)?, self.vertex(y)?);
        Ok(self.path_counts()?[x][y])
    }

    /// Connected components of the underlying graph, as a vertex → component map.
    pub fn components(&self) -> Vec<usize> {
        self.union_classes(|_| true)
    }

    /// Components after deleting elided arrows.
    pub fn segments(&self) -> Vec<usize> {
        self.union_classes(|a| !a.elided)
    }

    fn union_classes(&self, keep: impl Fn(&Arrow) -> bool) -> Vec<usize> {
        let n = self.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut c = x;
            while p[c] != r {
                let next = p[c];
                p[c] = r;
                c = next;
            }
            r
        }
        for a in self.arrows.iter().filter(|a| keep(a)) {
            let (ra, rb) = (find(&mut parent, a.src), find(&mut parent, a.dst));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
        let mut label = BTreeMap::new();
        (0..n)
            .map(|v| {
                let r = find(&mut parent, v);
                let next = label.len();
                *label.entry(r).or_insert(next)
            })
            .collect()
    }

    /// `reach[s][t]`: segment `t` can be reached from segment `s` along
    /// arrows (reflexive).
    pub fn segment_reachability(&self) -> (Vec<usize>, Vec<Vec<bool>>) {
        let seg = self.segments();
        let k = seg.iter().copied().max().map_or(0, |m| m + 1);
        let mut reach = vec![vec![false; k]; k];
        for (s, row) in reach.iter_mut().enumerate() {
            row[s] = true;
        }
        let mut changed = true;
        while changed {
            changed = false;
            for a in &self.arrows {
                let (s, t) = (seg[a.src], seg[a.dst]);
                for u in 0..k {
                    if reach[u][s] && !reach[u][t] {
                        reach[u][t] = true;
                        changed = true;
                    }
                }
            }
        }
        (seg, reach)
    }

    /// Vertices incident to an elided arrow.
    pub fn elision_adjacent(&self) -> Vec<bool> {
        let mut out = vec![false; self.len()];
        for a in self.arrows.iter().filter(|a| a.elided) {
            out[a.src] = true;
            out[a.dst] = true;
        }
        out
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.arrows.iter().filter(|a| a.dst == v).count()
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.arrows.iter().filter(|a| a.src == v).count()
    }

    /// The opposite quiver (same ids, reversed arrows).
    pub fn opposite(&self) -> Quiver {
        Quiver {
            vertices: self.vertices.clone(),
            arrows: self
                .arrows
                .iter()
                .map(|a| Arrow {
                    id: a.id.clone(),
                    src: a.dst,
                    dst: a.src,
                    elided: a.elided,
                })
                .collect(),
            index: self.index.clone(),
        }
    }
}

#[cfg(test)]
mod tests;
