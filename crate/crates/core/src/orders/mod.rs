//! Symbolic linearly ordered sets.
//!
//! An order is an expression tree over a handful of constructors. Elements
//! are addressed by their path through that tree, so infinite orders never
//! need a global index. `Labeled` leaves are opaque: they carry flags but no
//! elements.

mod grammar;

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use grammar::parse_order;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrderError {
    #[error("address {address} is not well-typed for order {order}")]
    IllTypedAddress { address: String, order: String },
    #[error("order {0} is symbolic and exposes no elements")]
    SymbolicOrderOpaque(String),
    #[error("order expression syntax error at column {column}: expected {expected}")]
    Syntax { column: usize, expected: String },
}

/// Three-valued truth, for properties that may depend on opaque labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TriBool {
    True,
    False,
    Unknown,
}

impl TriBool {
    pub fn from_bool(b: bool) -> Self {
        if b {
            TriBool::True
        } else {
            TriBool::False
        }
    }

    pub fn and(self, other: TriBool) -> TriBool {
        match (self, other) {
            (TriBool::False, _) | (_, TriBool::False) => TriBool::False,
            (TriBool::True, TriBool::True) => TriBool::True,
            _ => TriBool::Unknown,
        }
    }

    pub fn not(self) -> TriBool {
        match self {
            TriBool::True => TriBool::False,
            TriBool::False => TriBool::True,
            TriBool::Unknown => TriBool::Unknown,
        }
    }

    pub fn is_true(self) -> bool {
        self == TriBool::True
    }
}

/// Countability of cofinal (or coinitial) subsets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Countability {
    Countable,
    Uncountable,
    Unknown,
}

impl Countability {
    fn as_str(self) -> &'static str {
        match self {
            Countability::Countable => "countable",
            Countability::Uncountable => "uncountable",
            Countability::Unknown => "unknown",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LabelFlags {
    pub locally_discrete: TriBool,
    pub cofinality: Countability,
    pub coinitiality: Countability,
}

impl Default for LabelFlags {
    fn default() -> Self {
        LabelFlags {
            locally_discrete: TriBool::True,
            cofinality: Countability::Unknown,
            coinitiality: Countability::Unknown,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LinearOrder {
    /// The chain 0 < 1 < ... < n-1.
    Fin(u64),
    /// 0 < 1 < 2 < ...
    NatUp,
    /// ... < -2 < -1
    NatDown,
    Ints,
    /// Every left element lies below every right element.
    Concat(Box<LinearOrder>, Box<LinearOrder>),
    /// Lexicographic product, outer coordinate compared first.
    LexProd(Box<LinearOrder>, Box<LinearOrder>),
    Labeled { name: String, flags: LabelFlags },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OrderElement {
    Index(i64),
    L(Box<OrderElement>),
    R(Box<OrderElement>),
    Pair(Box<OrderElement>, Box<OrderElement>),
}

impl OrderElement {
    pub fn l(e: OrderElement) -> Self {
        OrderElement::L(Box::new(e))
    }
    pub fn r(e: OrderElement) -> Self {
        OrderElement::R(Box::new(e))
    }
    pub fn pair(o: OrderElement, i: OrderElement) -> Self {
        OrderElement::Pair(Box::new(o), Box::new(i))
    }
}

impl fmt::Display for OrderElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderElement::Index(i) => write!(f, "{i}"),
            OrderElement::L(e) => write!(f, "L({e})"),
            OrderElement::R(e) => write!(f, "R({e})"),
            OrderElement::Pair(o, i) => write!(f, "({o},{i})"),
        }
    }
}

impl LinearOrder {
    pub fn concat(a: LinearOrder, b: LinearOrder) -> Self {
        LinearOrder::Concat(Box::new(a), Box::new(b))
    }

    pub fn lex(outer: LinearOrder, inner: LinearOrder) -> Self {
        LinearOrder::LexProd(Box::new(outer), Box::new(inner))
    }

    pub fn labeled(name: impl Into<String>, flags: LabelFlags) -> Self {
        LinearOrder::Labeled {
            name: name.into(),
            flags,
        }
    }

    pub fn is_empty(&self) -> bool {
        match self {
            LinearOrder::Fin(n) => *n == 0,
            LinearOrder::Concat(a, b) => a.is_empty() && b.is_empty(),
            LinearOrder::LexProd(o, i) => o.is_empty() || i.is_empty(),
            _ => false,
        }
    }

    pub fn has_labels(&self) -> bool {
        match self {
            LinearOrder::Labeled { .. } => true,
            LinearOrder::Concat(a, b) | LinearOrder::LexProd(a, b) => a.has_labels() || b.has_labels(),
            _ => false,
        }
    }

    /// Canonical form: empty factors removed, concatenations right-nested
    /// with adjacent finite chains merged, products with a finite outer
    /// factor unrolled.
    pub fn canonicalize(&self) -> LinearOrder {
        match self {
            LinearOrder::Concat(..) => {
                let mut leaves = Vec::new();
                self.collect_concat_leaves_canonical(&mut leaves);
                rebuild_concat(leaves)
            }
            LinearOrder::LexProd(o, i) => {
                let o = o.canonicalize();
                let i = i.canonicalize();
                if o.is_empty() || i.is_empty() {
                    return LinearOrder::Fin(0);
                }
                match (&o, &i) {
                    (LinearOrder::Fin(1), _) => i,
                    (_, LinearOrder::Fin(1)) => o,
                    (LinearOrder::Fin(m), LinearOrder::Fin(n)) => LinearOrder::Fin(m * n),
                    (LinearOrder::Fin(n), _) if *n <= MAX_UNROLL => {
                        let copies = (0..*n).map(|_| i.clone()).collect();
                        rebuild_concat(merge_leaves(copies))
                    }
                    (LinearOrder::Concat(a, b), _) => {
                        LinearOrder::concat(LinearOrder::lex((**a).clone(), i.clone()), LinearOrder::lex((**b).clone(), i))
                            .canonicalize()
                    }
                    _ => LinearOrder::lex(o, i),
                }
            }
            other => other.clone(),
        }
    }

    fn collect_concat_leaves_canonical(&self, out: &mut Vec<LinearOrder>) {
        match self {
            LinearOrder::Concat(a, b) => {
                a.collect_concat_leaves_canonical(out);
                b.collect_concat_leaves_canonical(out);
            }
            other => {
                let c = other.canonicalize();
                match c {
                    LinearOrder::Concat(..) => {
                        let mut inner = Vec::new();
                        c.concat_leaves_into(&mut inner);
                        for leaf in inner {
                            push_leaf(out, leaf);
                        }
                    }
                    leaf => push_leaf(out, leaf),
                }
            }
        }
    }

    fn concat_leaves_into(&self, out: &mut Vec<LinearOrder>) {
        match self {
            LinearOrder::Concat(a, b) => {
                a.concat_leaves_into(out);
                b.concat_leaves_into(out);
            }
            other => out.push(other.clone()),
        }
    }

    /// The maximal non-concatenation pieces, in order.
    pub fn concat_leaves(&self) -> Vec<LinearOrder> {
        let mut out = Vec::new();
        self.concat_leaves_into(&mut out);
        out
    }

    pub fn has_min(&self) -> TriBool {
        match self {
            LinearOrder::Fin(n) => TriBool::from_bool(*n > 0),
            LinearOrder::NatUp => TriBool::True,
            LinearOrder::NatDown | LinearOrder::Ints => TriBool::False,
            LinearOrder::Concat(a, b) => {
                if a.is_empty() {
                    b.has_min()
                } else {
                    a.has_min()
                }
            }
            LinearOrder::LexProd(o, i) => {
                if self.is_empty() {
                    TriBool::False
                } else {
                    o.has_min().and(i.has_min())
                }
            }
            LinearOrder::Labeled { flags, .. } => {
                if flags.coinitiality == Countability::Uncountable {
                    TriBool::False
                } else {
                    TriBool::Unknown
                }
            }
        }
    }

    pub fn has_max(&self) -> TriBool {
        match self {
            LinearOrder::Fin(n) => TriBool::from_bool(*n > 0),
            LinearOrder::NatDown => TriBool::True,
            LinearOrder::NatUp | LinearOrder::Ints => TriBool::False,
            LinearOrder::Concat(a, b) => {
                if b.is_empty() {
                    a.has_max()
                } else {
                    b.has_max()
                }
            }
            LinearOrder::LexProd(o, i) => {
                if self.is_empty() {
                    TriBool::False
                } else {
                    o.has_max().and(i.has_max())
                }
            }
            LinearOrder::Labeled { flags, .. } => {
                if flags.cofinality == Countability::Uncountable {
                    TriBool::False
                } else {
                    TriBool::Unknown
                }
            }
        }
    }

    /// Whether the order has at most one element.
    fn at_most_one(&self) -> TriBool {
        match self {
            LinearOrder::Fin(n) => TriBool::from_bool(*n <= 1),
            LinearOrder::Labeled { .. } => TriBool::Unknown,
            LinearOrder::Concat(a, b) => {
                if a.is_empty() {
                    b.at_most_one()
                } else if b.is_empty() {
                    a.at_most_one()
                } else {
                    TriBool::False
                }
            }
            LinearOrder::LexProd(o, i) => {
                if self.is_empty() {
                    TriBool::True
                } else {
                    o.at_most_one().and(i.at_most_one())
                }
            }
            _ => TriBool::False,
        }
    }

    /// True iff every non-maximal element has an immediate successor and
    /// every non-minimal element an immediate predecessor.
    pub fn is_locally_discrete(&self) -> TriBool {
        match self {
            LinearOrder::Fin(_) | LinearOrder::NatUp | LinearOrder::NatDown | LinearOrder::Ints => TriBool::True,
            LinearOrder::Labeled { flags, .. } => flags.locally_discrete,
            LinearOrder::Concat(a, b) => {
                if a.is_empty() {
                    return b.is_locally_discrete();
                }
                if b.is_empty() {
                    return a.is_locally_discrete();
                }
                let join = match (a.has_max(), b.has_min()) {
                    (TriBool::True, TriBool::True) | (TriBool::False, TriBool::False) => TriBool::True,
                    (TriBool::True, TriBool::False) | (TriBool::False, TriBool::True) => TriBool::False,
                    _ => TriBool::Unknown,
                };
                a.is_locally_discrete().and(b.is_locally_discrete()).and(join)
            }
            LinearOrder::LexProd(o, i) => {
                if self.is_empty() {
                    return TriBool::True;
                }
                let step = |has_edge: TriBool, has_other: TriBool| match has_edge {
                    TriBool::False => TriBool::True,
                    TriBool::Unknown => TriBool::Unknown,
                    TriBool::True => match has_other {
                        TriBool::True => o.is_locally_discrete(),
                        TriBool::False => o.at_most_one(),
                        TriBool::Unknown => TriBool::Unknown,
                    },
                };
                let up = step(i.has_max(), i.has_min());
                let down = step(i.has_min(), i.has_max());
                i.is_locally_discrete().and(up).and(down)
            }
        }
    }

    pub fn cofinality_class(&self) -> Countability {
        match self {
            LinearOrder::Labeled { flags, .. } => flags.cofinality,
            LinearOrder::Concat(a, b) => {
                if b.is_empty() {
                    a.cofinality_class()
                } else {
                    b.cofinality_class()
                }
            }
            LinearOrder::LexProd(o, i) => {
                if self.is_empty() {
                    return Countability::Countable;
                }
                product_countability(o.has_max(), o.cofinality_class(), i.cofinality_class())
            }
            _ => Countability::Countable,
        }
    }

    pub fn coinitiality_class(&self) -> Countability {
        match self {
            LinearOrder::Labeled { flags, .. } => flags.coinitiality,
            LinearOrder::Concat(a, b) => {
                if a.is_empty() {
                    b.coinitiality_class()
                } else {
                    a.coinitiality_class()
                }
            }
            LinearOrder::LexProd(o, i) => {
                if self.is_empty() {
                    return Countability::Countable;
                }
                product_countability(o.has_min(), o.coinitiality_class(), i.coinitiality_class())
            }
            _ => Countability::Countable,
        }
    }

    fn describe(&self) -> String {
        self.to_string()
    }

    fn ill_typed(&self, e: &OrderElement) -> OrderError {
        OrderError::IllTypedAddress {
            address: e.to_string(),
            order: self.describe(),
        }
    }

    /// Checks that `e` addresses an element of this order.
    pub fn validate(&self, e: &OrderElement) -> Result<(), OrderError> {
        match (self, e) {
            (LinearOrder::Labeled { .. }, _) => Err(OrderError::SymbolicOrderOpaque(self.describe())),
            (LinearOrder::Fin(n), OrderElement::Index(i)) if *i >= 0 && (*i as u64) < *n => Ok(()),
            (LinearOrder::NatUp, OrderElement::Index(i)) if *i >= 0 => Ok(()),
            (LinearOrder::NatDown, OrderElement::Index(i)) if *i <= -1 => Ok(()),
            (LinearOrder::Ints, OrderElement::Index(_)) => Ok(()),
            (LinearOrder::Concat(a, _), OrderElement::L(x)) => a.validate(x),
            (LinearOrder::Concat(_, b), OrderElement::R(x)) => b.validate(x),
            (LinearOrder::LexProd(o, i), OrderElement::Pair(x, y)) => {
                o.validate(x)?;
                i.validate(y)
            }
            _ => Err(self.ill_typed(e)),
        }
    }

    pub fn compare(&self, a: &OrderElement, b: &OrderElement) -> Result<Ordering, OrderError> {
        self.validate(a)?;
        self.validate(b)?;
        Ok(self.compare_unchecked(a, b))
    }

    fn compare_unchecked(&self, a: &OrderElement, b: &OrderElement) -> Ordering {
        match (self, a, b) {
            (_, OrderElement::Index(x), OrderElement::Index(y)) => x.cmp(y),
            (LinearOrder::Concat(l, _), OrderElement::L(x), OrderElement::L(y)) => l.compare_unchecked(x, y),
            (LinearOrder::Concat(_, r), OrderElement::R(x), OrderElement::R(y)) => r.compare_unchecked(x, y),
            (LinearOrder::Concat(..), OrderElement::L(_), OrderElement::R(_)) => Ordering::Less,
            (LinearOrder::Concat(..), OrderElement::R(_), OrderElement::L(_)) => Ordering::Greater,
            (LinearOrder::LexProd(o, i), OrderElement::Pair(x1, y1), OrderElement::Pair(x2, y2)) => {
                o.compare_unchecked(x1, x2).then_with(|| i.compare_unchecked(y1, y2))
            }
            _ => unreachable!("validated addresses"),
        }
    }

    pub fn min_element(&self) -> Result<Option<OrderElement>, OrderError> {
        match self {
            LinearOrder::Labeled { .. } => Err(OrderError::SymbolicOrderOpaque(self.describe())),
            LinearOrder::Fin(n) => Ok((*n > 0).then_some(OrderElement::Index(0))),
            LinearOrder::NatUp => Ok(Some(OrderElement::Index(0))),
            LinearOrder::NatDown | LinearOrder::Ints => Ok(None),
            LinearOrder::Concat(a, b) => {
                if a.is_empty() {
                    Ok(b.min_element()?.map(OrderElement::r))
                } else {
                    Ok(a.min_element()?.map(OrderElement::l))
                }
            }
            LinearOrder::LexProd(o, i) => {
                if self.is_empty() {
                    return Ok(None);
                }
                match (o.min_element()?, i.min_element()?) {
                    (Some(x), Some(y)) => Ok(Some(OrderElement::pair(x, y))),
                    _ => Ok(None),
                }
            }
        }
    }

    pub fn max_element(&self) -> Result<Option<OrderElement>, OrderError> {
        match self {
            LinearOrder::Labeled { .. } => Err(OrderError::SymbolicOrderOpaque(self.describe())),
            LinearOrder::Fin(n) => Ok((*n > 0).then(|| OrderElement::Index(*n as i64 - 1))),
            LinearOrder::NatDown => Ok(Some(OrderElement::Index(-1))),
            LinearOrder::NatUp | LinearOrder::Ints => Ok(None),
            LinearOrder::Concat(a, b) => {
                if b.is_empty() {
                    Ok(a.max_element()?.map(OrderElement::l))
                } else {
                    Ok(b.max_element()?.map(OrderElement::r))
                }
            }
            LinearOrder::LexProd(o, i) => {
                if self.is_empty() {
                    return Ok(None);
                }
                match (o.max_element()?, i.max_element()?) {
                    (Some(x), Some(y)) => Ok(Some(OrderElement::pair(x, y))),
                    _ => Ok(None),
                }
            }
        }
    }

    /// Immediate successor, `None` at a maximum or across a non-discrete join.
    pub fn successor(&self, e: &OrderElement) -> Result<Option<OrderElement>, OrderError> {
        self.validate(e)?;
        self.step(e, true)
    }

    /// Immediate predecessor, `None` at a minimum or across a non-discrete join.
    pub fn predecessor(&self, e: &OrderElement) -> Result<Option<OrderElement>, OrderError> {
        self.validate(e)?;
        self.step(e, false)
    }

    fn step(&self, e: &OrderElement, up: bool) -> Result<Option<OrderElement>, OrderError> {
        match (self, e) {
            (LinearOrder::Fin(n), OrderElement::Index(i)) => {
                let j = if up { i + 1 } else { i - 1 };
                Ok((j >= 0 && (j as u64) < *n).then_some(OrderElement::Index(j)))
            }
            (LinearOrder::NatUp, OrderElement::Index(i)) => {
                let j = if up { i + 1 } else { i - 1 };
                Ok((j >= 0).then_some(OrderElement::Index(j)))
            }
            (LinearOrder::NatDown, OrderElement::Index(i)) => {
                let j = if up { i + 1 } else { i - 1 };
                Ok((j <= -1).then_some(OrderElement::Index(j)))
            }
            (LinearOrder::Ints, OrderElement::Index(i)) => Ok(Some(OrderElement::Index(if up { i + 1 } else { i - 1 }))),
            (LinearOrder::Concat(a, b), OrderElement::L(x)) => {
                if let Some(s) = a.step(x, up)? {
                    return Ok(Some(OrderElement::l(s)));
                }
                if !up {
                    return Ok(None);
                }
                if a.max_element()?.as_ref() == Some(&**x) {
                    Ok(b.min_element()?.map(OrderElement::r))
                } else {
                    Ok(None)
                }
            }
            (LinearOrder::Concat(a, b), OrderElement::R(x)) => {
                if let Some(s) = b.step(x, up)? {
                    return Ok(Some(OrderElement::r(s)));
                }
                if up {
                    return Ok(None);
                }
                if b.min_element()?.as_ref() == Some(&**x) {
                    Ok(a.max_element()?.map(OrderElement::l))
                } else {
                    Ok(None)
                }
            }
            (LinearOrder::LexProd(o, i), OrderElement::Pair(x, y)) => {
                if let Some(s) = i.step(y, up)? {
                    return Ok(Some(OrderElement::pair((**x).clone(), s)));
                }
                let edge = if up { i.max_element()? } else { i.min_element()? };
                if edge.as_ref() != Some(&**y) {
                    return Ok(None);
                }
                let restart = if up { i.min_element()? } else { i.max_element()? };
                match (o.step(x, up)?, restart) {
                    (Some(nx), Some(ny)) => Ok(Some(OrderElement::pair(nx, ny))),
                    _ => Ok(None),
                }
            }
            (LinearOrder::Labeled { .. }, _) => Err(OrderError::SymbolicOrderOpaque(self.describe())),
            _ => Err(self.ill_typed(e)),
        }
    }

    /// Human-oriented rendering using the usual symbols (ℕ, ℤ, −ℕ, ·, ×).
    pub fn pretty(&self) -> String {
        match self {
            LinearOrder::Fin(n) => n.to_string(),
            LinearOrder::NatUp => "ℕ".into(),
            LinearOrder::NatDown => "(−ℕ)".into(),
            LinearOrder::Ints => "ℤ".into(),
            LinearOrder::Concat(a, b) => format!("{}·{}", a.pretty(), b.pretty()),
            LinearOrder::LexProd(o, i) => format!("({}×{})", o.pretty(), i.pretty()),
            LinearOrder::Labeled { name, .. } => name.clone(),
        }
    }
}

const MAX_UNROLL: u64 = 4096;

fn product_countability(outer_has_edge: TriBool, outer: Countability, inner: Countability) -> Countability {
    match outer_has_edge {
        TriBool::True => inner,
        TriBool::False => outer,
        TriBool::Unknown => match (outer, inner) {
            (Countability::Uncountable, _) => Countability::Uncountable,
            (Countability::Countable, Countability::Countable) => Countability::Countable,
            _ => Countability::Unknown,
        },
    }
}

fn push_leaf(out: &mut Vec<LinearOrder>, leaf: LinearOrder) {
    if leaf.is_empty() {
        return;
    }
    if let (Some(LinearOrder::Fin(m)), LinearOrder::Fin(n)) = (out.last(), &leaf) {
        let merged = m + n;
        *out.last_mut().expect("nonempty") = LinearOrder::Fin(merged);
        return;
    }
    out.push(leaf);
}

fn merge_leaves(leaves: Vec<LinearOrder>) -> Vec<LinearOrder> {
    let mut out = Vec::new();
    for leaf in leaves {
        match leaf {
            LinearOrder::Concat(..) => {
                for inner in leaf.concat_leaves() {
                    push_leaf(&mut out, inner);
                }
            }
            other => push_leaf(&mut out, other),
        }
    }
    out
}

fn rebuild_concat(mut leaves: Vec<LinearOrder>) -> LinearOrder {
    match leaves.len() {
        0 => LinearOrder::Fin(0),
        1 => leaves.pop().expect("one leaf"),
        _ => {
            let mut acc = leaves.pop().expect("nonempty");
            while let Some(prev) = leaves.pop() {
                acc = LinearOrder::concat(prev, acc);
            }
            acc
        }
    }
}

/// ℕ·(label×ℤ)·(−ℕ), canonicalized.
pub fn thread_completion(label: &LinearOrder) -> LinearOrder {
    LinearOrder::concat(
        LinearOrder::NatUp,
        LinearOrder::concat(LinearOrder::lex(label.clone(), LinearOrder::Ints), LinearOrder::NatDown),
    )
    .canonicalize()
}

impl fmt::Display for LinearOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinearOrder::Fin(0) => write!(f, "0"),
            LinearOrder::Fin(n) => write!(f, "fin({n})"),
            LinearOrder::NatUp => write!(f, "N"),
            LinearOrder::NatDown => write!(f, "-N"),
            LinearOrder::Ints => write!(f, "Z"),
            LinearOrder::Concat(a, b) => write!(f, "({a} . {b})"),
            LinearOrder::LexProd(a, b) => write!(f, "({a} * {b})"),
            LinearOrder::Labeled { name, flags } => {
                write!(f, "label({name}")?;
                if flags.cofinality != Countability::Unknown {
                    write!(f, ", cofinal={}", flags.cofinality.as_str())?;
                }
                if flags.coinitiality != Countability::Unknown {
                    write!(f, ", coinitial={}", flags.coinitiality.as_str())?;
                }
                match flags.locally_discrete {
                    TriBool::True => {}
                    TriBool::False => write!(f, ", discrete=false")?,
                    TriBool::Unknown => write!(f, ", discrete=unknown")?,
                }
                write!(f, ")")
            }
        }
    }
}

#[cfg(test)]
mod tests;
