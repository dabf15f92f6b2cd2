//! Finite windows of thread arrows.
//!
//! A thread `x ⤏ y` with label `T` stands for the chain ℕ·(T×ℤ)·(−ℕ) glued
//! between `x` and `y`. Expanding it to depth `d` keeps the first `d`
//! elements of ℕ, a window of `d` elements from every concrete ℤ block and
//! the last `d` elements of −ℕ. Consecutive blocks are joined by elided
//! arrows, which stand for the skipped (infinite) segments.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{Quiver, QuiverError, ThreadQuiver};
use crate::orders::{thread_completion, LinearOrder, OrderElement};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExpansionVertex {
    pub thread: String,
    pub element: OrderElement,
}

#[derive(Debug, Clone, Serialize)]
pub struct Expansion {
    pub quiver: Quiver,
    /// Which quiver vertex realises which element of which thread completion.
    pub element_map: BTreeMap<String, ExpansionVertex>,
}

/// Address of leaf `k` (of `n`) in a right-nested concatenation.
fn leaf_address(k: usize, n: usize, inner: OrderElement) -> OrderElement {
    let mut e = if k + 1 == n { inner } else { OrderElement::l(inner) };
    for _ in 0..k {
        e = OrderElement::r(e);
    }
    e
}

/// One block of concrete elements: `(vertex-name suffix, element)`.
type Block = Vec<(String, OrderElement)>;

fn blocks_for(label: &LinearOrder, depth: usize) -> Vec<Block> {
    let completion = thread_completion(label);
    let leaves = completion.concat_leaves();
    let n = leaves.len();
    let d = depth as i64;
    let mut blocks = Vec::new();
    let mut z = 0usize;
    for (k, leaf) in leaves.iter().enumerate() {
        let block: Block = match leaf {
            LinearOrder::NatUp if k == 0 => (0..d)
                .map(|i| (format!("n{i}"), leaf_address(k, n, OrderElement::Index(i))))
                .collect(),
            LinearOrder::NatDown if k + 1 == n => (1..=d)
                .rev()
                .map(|i| (format!("m{i}"), leaf_address(k, n, OrderElement::Index(-i))))
                .collect(),
            LinearOrder::Ints => {
                let lo = -((d - 1).max(0) / 2);
                let block = (lo..lo + d)
                    .map(|i| (format!("z{z}[{i}]"), leaf_address(k, n, OrderElement::Index(i))))
                    .collect();
                z += 1;
                block
            }
            // Opaque or infinite families of ℤ blocks are elided entirely.
            _ => Vec::new(),
        };
        blocks.push(block);
    }
    blocks
}

struct Builder {
    vertices: Vec<String>,
    arrows: Vec<(String, String, String, bool)>,
    element_map: BTreeMap<String, ExpansionVertex>,
}

impl Builder {
    fn add_vertex(&mut self, name: String) -> Result<(), QuiverError> {
        if self.vertices.contains(&name) {
            return Err(QuiverError::DuplicateId(name));
        }
        self.vertices.push(name);
        Ok(())
    }

    fn expand(&mut self, tid: &str, src: &str, dst: &str, label: &LinearOrder, depth: usize) -> Result<(), QuiverError> {
        let blocks = blocks_for(label, depth);
        let mut prev = src.to_string();
        // The source belongs to the ℕ block, the target to the −ℕ block.
        let mut prev_block = Some(0usize);
        let mut arrow_no = 0usize;
        let last = blocks.len() - 1;
        for (b, block) in blocks.iter().enumerate() {
            for (suffix, element) in block {
                let name = format!("{tid}.{suffix}");
                self.add_vertex(name.clone())?;
                self.element_map.insert(
                    name.clone(),
                    ExpansionVertex {
                        thread: tid.to_string(),
                        element: element.clone(),
                    },
                );
                let elided = prev_block != Some(b);
                self.arrows.push((format!("{tid}.a{arrow_no}"), prev.clone(), name.clone(), elided));
                arrow_no += 1;
                prev = name;
                prev_block = Some(b);
            }
        }
        let elided = prev_block != Some(last);
        let id = if arrow_no == 0 { tid.to_string() } else { format!("{tid}.a{arrow_no}") };
        self.arrows.push((id, prev, dst.to_string(), elided));
        Ok(())
    }
}

fn expand_selected(tq: &ThreadQuiver, selected: &[&str], depth: usize) -> Result<Expansion, QuiverError> {
    let mut b = Builder {
        vertices: tq.vertices.clone(),
        arrows: tq.arrows.iter().map(|a| (a.id.clone(), a.src.clone(), a.dst.clone(), false)).collect(),
        element_map: BTreeMap::new(),
    };
    for t in &tq.threads {
        if selected.contains(&t.id.as_str()) {
            b.expand(&t.id, &t.src, &t.dst, &t.label, depth)?;
        } else {
            b.arrows.push((t.id.clone(), t.src.clone(), t.dst.clone(), false));
        }
    }
    let quiver = Quiver::from_named(b.vertices, b.arrows)?;
    Ok(Expansion {
        quiver,
        element_map: b.element_map,
    })
}

/// Replaces one thread arrow by a finite window of its completion; other
/// thread arrows are coarsened to plain arrows.
pub fn expand_thread(tq: &ThreadQuiver, thread: &str, depth: usize) -> Result<Expansion, QuiverError> {
    tq.thread(thread)?;
    expand_selected(tq, &[thread], depth)
}

/// Expands every thread arrow to the same depth.
pub fn expand_all(tq: &ThreadQuiver, depth: usize) -> Result<Expansion, QuiverError> {
    let ids: Vec<&str> = tq.threads.iter().map(|t| t.id.as_str()).collect();
    expand_selected(tq, &ids, depth)
}
