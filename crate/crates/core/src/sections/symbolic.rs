//! Sections over thread arrows, described symbolically.
//!
//! A thread `x ⤏ y` labelled `L` stands for the chain `ℕ · (L×ℤ) · (−ℕ)`.
//! The chain splits into three parts: the head `ℕ` (whose least element is
//! the projective at `x`), the body `L×ℤ`, and the tail `−ℕ` (whose greatest
//! element is the projective at `y`). A slice policy assigns each part a
//! τ-level, or leaves it out of the section.
//!
//! Inside a thread, nonzero maps run forward through the chain and never
//! back, so the endpoints `x` and `y` are the only nonthread objects a part
//! can be compared with: a part reaches `y` whenever the tail is picked,
//! and is reached from `x` whenever the head is picked. Ray and coray
//! classification, and the countability obstruction for seeds, follow.

use serde::{Deserialize, Serialize};

use super::{CertBuilder, Certificate, SectionError};
use crate::orders::{Countability, LinearOrder};
use crate::threadquiver::ThreadQuiver;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThreadPart {
    Head,
    Body,
    Tail,
}

impl ThreadPart {
    pub const ALL: [ThreadPart; 3] = [ThreadPart::Head, ThreadPart::Body, ThreadPart::Tail];
}

/// Levels for the three parts of one thread; `None` leaves a part out.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThreadSlicePolicy {
    pub thread: String,
    #[serde(default)]
    pub head: Option<i64>,
    #[serde(default)]
    pub body: Option<i64>,
    #[serde(default)]
    pub tail: Option<i64>,
}

impl ThreadSlicePolicy {
    /// Parts before `part` at level 0, the rest at `suffix_shift`.
    pub fn cut(thread: impl Into<String>, part: ThreadPart, suffix_shift: i64) -> Self {
        let level = |p: ThreadPart| Some(if p < part { 0 } else { suffix_shift });
        ThreadSlicePolicy {
            thread: thread.into(),
            head: level(ThreadPart::Head),
            body: level(ThreadPart::Body),
            tail: level(ThreadPart::Tail),
        }
    }

    pub fn level(&self, part: ThreadPart) -> Option<i64> {
        match part {
            ThreadPart::Head => self.head,
            ThreadPart::Body => self.body,
            ThreadPart::Tail => self.tail,
        }
    }

    pub fn picks(&self, part: ThreadPart) -> bool {
        self.level(part).is_some()
    }

    /// Some nonthread endpoint maps to the part (by a path, at any shift).
    fn reached_from_endpoint(&self, part: ThreadPart) -> bool {
        self.head.is_some() || (part == ThreadPart::Tail && self.tail.is_some())
    }

    /// The part maps to some nonthread endpoint.
    fn reaches_endpoint(&self, part: ThreadPart) -> bool {
        self.tail.is_some() || (part == ThreadPart::Head && self.head.is_some())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RaySide {
    Ray,
    Coray,
}

/// A ray or coray living in one part of a thread.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SymbolicRay {
    pub thread: String,
    pub part: ThreadPart,
    pub side: RaySide,
    /// Endpoint heading the ray (`x` for rays, `y` for corays), when picked.
    pub anchor: Option<String>,
    /// Countability of the sequences needed to approach the far end.
    pub approach: Countability,
}

fn part_order(label: &LinearOrder, part: ThreadPart) -> LinearOrder {
    match part {
        ThreadPart::Head => LinearOrder::NatUp,
        ThreadPart::Body => LinearOrder::lex(label.clone(), LinearOrder::Ints),
        ThreadPart::Tail => LinearOrder::NatDown,
    }
}

/// Rays and corays of the given policies.
pub fn symbolic_rays(tq: &ThreadQuiver, policies: &[ThreadSlicePolicy]) -> Result<Vec<SymbolicRay>, SectionError> {
    let mut out = Vec::new();
    for p in policies {
        let thread = tq.thread(&p.thread).map_err(|e| SectionError::SectionInvalid(e.to_string()))?;
        for part in ThreadPart::ALL {
            let order = part_order(&thread.label, part);
            if !p.picks(part) || order.is_empty() {
                continue;
            }
            let (from, to) = (p.reached_from_endpoint(part), p.reaches_endpoint(part));
            // A ray is reached from the nonthreads but cannot return to them.
            if !to {
                out.push(SymbolicRay {
                    thread: p.thread.clone(),
                    part,
                    side: RaySide::Ray,
                    anchor: p.head.map(|_| thread.src.clone()),
                    approach: order.cofinality_class(),
                });
            }
            if !from {
                out.push(SymbolicRay {
                    thread: p.thread.clone(),
                    part,
                    side: RaySide::Coray,
                    anchor: p.tail.map(|_| thread.dst.clone()),
                    approach: order.coinitiality_class(),
                });
            }
        }
    }
    Ok(out)
}

/// Symbolic half of condition (*): every ray must be approachable by a
/// countable sequence towards its open end, and dually for corays.
pub fn symbolic_star(tq: &ThreadQuiver, policies: &[ThreadSlicePolicy]) -> Result<Certificate, SectionError> {
    let mut b = CertBuilder::new("condition_star_symbolic");
    for r in symbolic_rays(tq, policies)? {
        let what = match r.side {
            RaySide::Ray => "cofinality",
            RaySide::Coray => "coinitiality",
        };
        let obj = vec![format!("{}:{:?}", r.thread, r.part).to_lowercase()];
        match r.approach {
            Countability::Countable => b.note(format!("{:?} on {} has countable {what}", r.side, obj[0])),
            Countability::Uncountable => b.fail("countable_seed", obj, format!("{:?} part has uncountable {what}", r.side)),
            Countability::Unknown => b.unsure(format!("{what} of {} is not known", obj[0])),
        }
    }
    Ok(b.finish())
}
