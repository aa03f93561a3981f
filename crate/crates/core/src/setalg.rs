//! Carriers, points and the exact Boolean algebra of representable sets.
//!
//! A representable set stores, per infinite block, either an explicit finite
//! subset or the complement of one, plus membership flags for the named
//! (limit and isolated) points. The class is closed under union,
//! intersection, difference and complement, and structural equality of the
//! canonical form coincides with extensional equality.
//!
//! The induced topology is fixed once and for all: each block with a limit
//! point is the one-point compactification of a discrete countable set, each
//! block without one is discrete, and named isolated points are open
//! singletons. A representable set is clopen iff every block owning a limit
//! point either has a finite trace excluding the limit or a cofinite trace
//! including it.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SetError {
    #[error("operands live on different carriers")]
    CarrierMismatch,
    #[error("point {0} is not in the carrier")]
    UnknownPoint(String),
    #[error("block {0} is not declared by the carrier")]
    UnknownBlock(String),
    #[error("bad carrier: {0}")]
    BadCarrier(String),
    #[error("precondition failed: {0}")]
    NotSubset(String),
    #[error("operation needs a second operand")]
    MissingOperand,
}

/// One countably infinite block of a tail carrier, optionally converging to
/// a named limit point.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BlockSpec {
    pub name: String,
    pub limit: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CarrierKind {
    Finite { size: u32 },
    Tail { blocks: Vec<BlockSpec>, isolated: Vec<String> },
}

/// The underlying point set of a space.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Carrier {
    kind: CarrierKind,
}

impl Carrier {
    pub fn finite(size: u32) -> Arc<Carrier> {
        Arc::new(Carrier { kind: CarrierKind::Finite { size } })
    }

    pub fn tail(
        blocks: Vec<BlockSpec>,
        isolated: Vec<String>,
    ) -> Result<Arc<Carrier>, SetError> {
        let mut names = BTreeSet::new();
        for b in &blocks {
            if !names.insert(b.name.clone()) {
                return Err(SetError::BadCarrier(format!("duplicate name {}", b.name)));
            }
        }
        for b in &blocks {
            if let Some(l) = &b.limit {
                if !names.insert(l.clone()) {
                    return Err(SetError::BadCarrier(format!("duplicate name {l}")));
                }
            }
        }
        for i in &isolated {
            if !names.insert(i.clone()) {
                return Err(SetError::BadCarrier(format!("duplicate name {i}")));
            }
        }
        Ok(Arc::new(Carrier { kind: CarrierKind::Tail { blocks, isolated } }))
    }

    pub fn kind(&self) -> &CarrierKind {
        &self.kind
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.kind, CarrierKind::Finite { .. })
    }

    /// Point count of a finite carrier.
    pub fn size(&self) -> Option<u32> {
        match &self.kind {
            CarrierKind::Finite { size } => Some(*size),
            CarrierKind::Tail { .. } => None,
        }
    }

    pub fn blocks(&self) -> &[BlockSpec] {
        match &self.kind {
            CarrierKind::Finite { .. } => &[],
            CarrierKind::Tail { blocks, .. } => blocks,
        }
    }

    pub fn isolated(&self) -> &[String] {
        match &self.kind {
            CarrierKind::Finite { .. } => &[],
            CarrierKind::Tail { isolated, .. } => isolated,
        }
    }

    pub fn block(&self, name: &str) -> Option<&BlockSpec> {
        self.blocks().iter().find(|b| b.name == name)
    }

    /// All named points: limits first (in block order), then isolated.
    pub fn named_points(&self) -> Vec<String> {
        let mut out: Vec<String> =
            self.blocks().iter().filter_map(|b| b.limit.clone()).collect();
        out.extend(self.isolated().iter().cloned());
        out
    }

    /// Block owning the given limit point, if any.
    pub fn block_of_limit(&self, name: &str) -> Option<&BlockSpec> {
        self.blocks().iter().find(|b| b.limit.as_deref() == Some(name))
    }

    pub fn is_isolated(&self, name: &str) -> bool {
        self.isolated().iter().any(|i| i == name)
    }

    pub fn contains(&self, p: &Point) -> bool {
        match (&self.kind, p) {
            (CarrierKind::Finite { size }, Point::Idx(i)) => i < size,
            (CarrierKind::Tail { blocks, .. }, Point::Elem(b, _)) => {
                blocks.iter().any(|s| &s.name == b)
            }
            (CarrierKind::Tail { .. }, Point::Named(n)) => {
                self.block_of_limit(n).is_some() || self.is_isolated(n)
            }
            _ => false,
        }
    }

    /// The whole carrier is compact iff it is finite or every block owns a
    /// limit point.
    pub fn is_compact(&self) -> bool {
        match &self.kind {
            CarrierKind::Finite { .. } => true,
            CarrierKind::Tail { blocks, .. } => blocks.iter().all(|b| b.limit.is_some()),
        }
    }

    pub fn is_empty(&self) -> bool {
        match &self.kind {
            CarrierKind::Finite { size } => *size == 0,
            CarrierKind::Tail { blocks, isolated } => blocks.is_empty() && isolated.is_empty(),
        }
    }
}

/// A single point of a carrier: an index into a finite carrier, the n-th
/// element of a block, or a named limit/isolated point.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Point {
    Idx(u32),
    Elem(String, u64),
    Named(String),
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Idx(i) => write!(f, "{i}"),
            Point::Elem(b, n) => write!(f, "{b}({n})"),
            Point::Named(n) => write!(f, "{n}"),
        }
    }
}

/// Trace of a representable set on one block.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Trace {
    Fin(BTreeSet<u64>),
    Cof(BTreeSet<u64>),
}

impl Trace {
    pub fn empty() -> Trace {
        Trace::Fin(BTreeSet::new())
    }

    pub fn full() -> Trace {
        Trace::Cof(BTreeSet::new())
    }

    pub fn contains(&self, n: u64) -> bool {
        match self {
            Trace::Fin(s) => s.contains(&n),
            Trace::Cof(s) => !s.contains(&n),
        }
    }

    pub fn is_cofinite(&self) -> bool {
        matches!(self, Trace::Cof(_))
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, Trace::Fin(s) if s.is_empty())
    }

    /// Support indices: the explicit members of a finite trace or the
    /// exceptions of a cofinite one.
    pub fn support(&self) -> &BTreeSet<u64> {
        match self {
            Trace::Fin(s) | Trace::Cof(s) => s,
        }
    }

    fn complement(&self) -> Trace {
        match self {
            Trace::Fin(s) => Trace::Cof(s.clone()),
            Trace::Cof(s) => Trace::Fin(s.clone()),
        }
    }

    fn union(&self, other: &Trace) -> Trace {
        match (self, other) {
            (Trace::Fin(a), Trace::Fin(b)) => Trace::Fin(a.union(b).cloned().collect()),
            (Trace::Cof(a), Trace::Cof(b)) => {
                Trace::Cof(a.intersection(b).cloned().collect())
            }
            (Trace::Cof(a), Trace::Fin(b)) | (Trace::Fin(b), Trace::Cof(a)) => {
                Trace::Cof(a.iter().filter(|n| !b.contains(n)).cloned().collect())
            }
        }
    }

    fn intersection(&self, other: &Trace) -> Trace {
        self.complement().union(&other.complement()).complement()
    }

    /// Smallest index in the trace, avoiding the given set.
    fn pick(&self, avoid: &BTreeSet<u64>) -> Option<u64> {
        match self {
            Trace::Fin(s) => s.iter().find(|n| !avoid.contains(n)).copied(),
            Trace::Cof(s) => (0..).find(|n| !s.contains(n) && !avoid.contains(n)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum Repr {
    Finite(BTreeSet<u32>),
    Tail { traces: BTreeMap<String, Trace>, named: BTreeSet<String> },
}

/// A representable subset of a carrier, in canonical form: every declared
/// block has a trace entry and exception lists are duplicate-free, so
/// structural equality is extensional equality.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct RSet {
    carrier: Arc<Carrier>,
    repr: Repr,
}

/// Topological classification flags of a representable set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SetClass {
    pub finite: bool,
    pub open: bool,
    pub closed: bool,
    pub clopen: bool,
}

impl RSet {
    pub fn empty(carrier: &Arc<Carrier>) -> RSet {
        let repr = match carrier.kind() {
            CarrierKind::Finite { .. } => Repr::Finite(BTreeSet::new()),
            CarrierKind::Tail { blocks, .. } => Repr::Tail {
                traces: blocks.iter().map(|b| (b.name.clone(), Trace::empty())).collect(),
                named: BTreeSet::new(),
            },
        };
        RSet { carrier: carrier.clone(), repr }
    }

    pub fn full(carrier: &Arc<Carrier>) -> RSet {
        let repr = match carrier.kind() {
            CarrierKind::Finite { size } => Repr::Finite((0..*size).collect()),
            CarrierKind::Tail { blocks, .. } => Repr::Tail {
                traces: blocks.iter().map(|b| (b.name.clone(), Trace::full())).collect(),
                named: carrier.named_points().into_iter().collect(),
            },
        };
        RSet { carrier: carrier.clone(), repr }
    }

    pub fn from_points<I>(carrier: &Arc<Carrier>, points: I) -> Result<RSet, SetError>
    where
        I: IntoIterator<Item = Point>,
    {
        let mut s = RSet::empty(carrier);
        for p in points {
            s.insert(&p)?;
        }
        Ok(s)
    }

    pub fn singleton(carrier: &Arc<Carrier>, p: &Point) -> Result<RSet, SetError> {
        RSet::from_points(carrier, [p.clone()])
    }

    fn insert(&mut self, p: &Point) -> Result<(), SetError> {
        if !self.carrier.contains(p) {
            return Err(SetError::UnknownPoint(p.to_string()));
        }
        match (&mut self.repr, p) {
            (Repr::Finite(s), Point::Idx(i)) => {
                s.insert(*i);
            }
            (Repr::Tail { traces, .. }, Point::Elem(b, n)) => {
                match traces.get_mut(b).expect("declared block") {
                    Trace::Fin(s) => {
                        s.insert(*n);
                    }
                    Trace::Cof(s) => {
                        s.remove(n);
                    }
                }
            }
            (Repr::Tail { named, .. }, Point::Named(n)) => {
                named.insert(n.clone());
            }
            _ => unreachable!("carrier membership already checked"),
        }
        Ok(())
    }

    /// Builder for tail-carrier sets.
    pub fn build(carrier: &Arc<Carrier>) -> RSetBuilder {
        RSetBuilder { set: RSet::empty(carrier) }
    }

    pub fn carrier(&self) -> &Arc<Carrier> {
        &self.carrier
    }

    pub fn same_carrier(&self, other: &RSet) -> bool {
        self.carrier == other.carrier
    }

    pub fn contains(&self, p: &Point) -> bool {
        match (&self.repr, p) {
            (Repr::Finite(s), Point::Idx(i)) => s.contains(i),
            (Repr::Tail { traces, .. }, Point::Elem(b, n)) => {
                traces.get(b).map_or(false, |t| t.contains(*n))
            }
            (Repr::Tail { named, .. }, Point::Named(n)) => named.contains(n),
            _ => false,
        }
    }

    pub fn trace(&self, block: &str) -> Option<&Trace> {
        match &self.repr {
            Repr::Finite(_) => None,
            Repr::Tail { traces, .. } => traces.get(block),
        }
    }

    pub fn named_members(&self) -> Option<&BTreeSet<String>> {
        match &self.repr {
            Repr::Finite(_) => None,
            Repr::Tail { named, .. } => Some(named),
        }
    }

    pub fn finite_members(&self) -> Option<&BTreeSet<u32>> {
        match &self.repr {
            Repr::Finite(s) => Some(s),
            Repr::Tail { .. } => None,
        }
    }

    fn zip_traces(
        &self,
        other: &RSet,
        f: impl Fn(&Trace, &Trace) -> Trace,
        g: impl Fn(&BTreeSet<String>, &BTreeSet<String>) -> BTreeSet<String>,
        h: impl Fn(&BTreeSet<u32>, &BTreeSet<u32>) -> BTreeSet<u32>,
    ) -> RSet {
        assert!(self.same_carrier(other), "carrier mismatch");
        let repr = match (&self.repr, &other.repr) {
            (Repr::Finite(a), Repr::Finite(b)) => Repr::Finite(h(a, b)),
            (
                Repr::Tail { traces: ta, named: na },
                Repr::Tail { traces: tb, named: nb },
            ) => Repr::Tail {
                traces: ta
                    .iter()
                    .map(|(k, t)| (k.clone(), f(t, &tb[k])))
                    .collect(),
                named: g(na, nb),
            },
            _ => unreachable!("same carrier implies same shape"),
        };
        RSet { carrier: self.carrier.clone(), repr }
    }

    pub fn union(&self, other: &RSet) -> RSet {
        self.zip_traces(
            other,
            Trace::union,
            |a, b| a.union(b).cloned().collect(),
            |a, b| a.union(b).cloned().collect(),
        )
    }

    pub fn intersection(&self, other: &RSet) -> RSet {
        self.zip_traces(
            other,
            Trace::intersection,
            |a, b| a.intersection(b).cloned().collect(),
            |a, b| a.intersection(b).cloned().collect(),
        )
    }

    pub fn complement(&self) -> RSet {
        let repr = match &self.repr {
            Repr::Finite(s) => {
                let size = self.carrier.size().unwrap();
                Repr::Finite((0..size).filter(|i| !s.contains(i)).collect())
            }
            Repr::Tail { traces, named } => Repr::Tail {
                traces: traces.iter().map(|(k, t)| (k.clone(), t.complement())).collect(),
                named: self
                    .carrier
                    .named_points()
                    .into_iter()
                    .filter(|n| !named.contains(n))
                    .collect(),
            },
        };
        RSet { carrier: self.carrier.clone(), repr }
    }

    pub fn difference(&self, other: &RSet) -> RSet {
        self.intersection(&other.complement())
    }

    pub fn is_empty(&self) -> bool {
        match &self.repr {
            Repr::Finite(s) => s.is_empty(),
            Repr::Tail { traces, named } => {
                named.is_empty() && traces.values().all(Trace::is_empty)
            }
        }
    }

    pub fn is_full(&self) -> bool {
        self.complement().is_empty()
    }

    pub fn subset_of(&self, other: &RSet) -> bool {
        self.difference(other).is_empty()
    }

    /// True when the set has finitely many points.
    pub fn is_finite_set(&self) -> bool {
        match &self.repr {
            Repr::Finite(_) => true,
            Repr::Tail { traces, .. } => traces.values().all(|t| !t.is_cofinite()),
        }
    }

    /// All points of a finite set, in deterministic order.
    pub fn enumerate_finite(&self) -> Option<Vec<Point>> {
        match &self.repr {
            Repr::Finite(s) => Some(s.iter().map(|i| Point::Idx(*i)).collect()),
            Repr::Tail { traces, named } => {
                let mut out = Vec::new();
                for (b, t) in traces {
                    match t {
                        Trace::Fin(s) => {
                            out.extend(s.iter().map(|n| Point::Elem(b.clone(), *n)))
                        }
                        Trace::Cof(_) => return None,
                    }
                }
                out.extend(named.iter().map(|n| Point::Named(n.clone())));
                Some(out)
            }
        }
    }

    /// Some member, deterministically chosen; None iff empty.
    pub fn pick(&self) -> Option<Point> {
        self.pick_avoiding(&BTreeSet::new())
    }

    fn pick_avoiding(&self, avoid_named: &BTreeSet<String>) -> Option<Point> {
        match &self.repr {
            Repr::Finite(s) => s.iter().next().map(|i| Point::Idx(*i)),
            Repr::Tail { traces, named } => {
                for (b, t) in traces {
                    if let Some(n) = t.pick(&BTreeSet::new()) {
                        return Some(Point::Elem(b.clone(), n));
                    }
                }
                named
                    .iter()
                    .find(|n| !avoid_named.contains(*n))
                    .map(|n| Point::Named(n.clone()))
            }
        }
    }

    /// The single member, if the set is a singleton.
    pub fn as_singleton(&self) -> Option<Point> {
        let pts = self.enumerate_finite()?;
        if pts.len() == 1 {
            pts.into_iter().next()
        } else {
            None
        }
    }

    /// Per-block support: explicit members or cofinite exceptions.
    pub fn block_support(&self, block: &str) -> BTreeSet<u64> {
        self.trace(block).map(|t| t.support().clone()).unwrap_or_default()
    }

    // ----- topology of the induced block model -----

    /// Open: every limit point in the set sits over a cofinite trace.
    pub fn is_open(&self) -> bool {
        match &self.repr {
            Repr::Finite(_) => true,
            Repr::Tail { traces, named } => self.carrier.blocks().iter().all(|b| {
                b.limit.as_ref().map_or(true, |l| {
                    !named.contains(l) || traces[&b.name].is_cofinite()
                })
            }),
        }
    }

    /// Closed: every block with a cofinite trace contributes its limit point.
    pub fn is_closed(&self) -> bool {
        self.complement().is_open()
    }

    pub fn is_clopen(&self) -> bool {
        self.is_open() && self.is_closed()
    }

    /// Closure: adds each limit point whose block trace is cofinite.
    pub fn closure(&self) -> RSet {
        let mut out = self.clone();
        if let Repr::Tail { traces, named } = &mut out.repr {
            for b in self.carrier.blocks() {
                if let Some(l) = &b.limit {
                    if traces[&b.name].is_cofinite() {
                        named.insert(l.clone());
                    }
                }
            }
        }
        out
    }

    /// Interior: removes each limit point whose block trace is not cofinite.
    pub fn interior(&self) -> RSet {
        self.complement().closure().complement()
    }

    /// Compact subspace: finite, or closed with no cofinite trace on a block
    /// lacking a limit point.
    pub fn is_compact_subset(&self) -> bool {
        if !self.is_closed() {
            return false;
        }
        self.carrier
            .blocks()
            .iter()
            .all(|b| b.limit.is_some() || !self.trace(&b.name).unwrap().is_cofinite())
    }

    pub fn classify(&self) -> SetClass {
        SetClass {
            finite: self.is_finite_set(),
            open: self.is_open(),
            closed: self.is_closed(),
            clopen: self.is_clopen(),
        }
    }

    /// Density of `self` inside `sup` (both over the same carrier): true iff
    /// the closure of `self` covers `sup`. On failure returns a point of
    /// `sup` outside the closure.
    pub fn dense_in(&self, sup: &RSet) -> Result<Option<Point>, SetError> {
        if !self.same_carrier(sup) {
            return Err(SetError::CarrierMismatch);
        }
        if !self.subset_of(sup) {
            return Err(SetError::NotSubset("dense_in needs A ⊆ B".into()));
        }
        Ok(sup.difference(&self.closure()).pick())
    }
}

pub struct RSetBuilder {
    set: RSet,
}

impl RSetBuilder {
    pub fn block_fin<I: IntoIterator<Item = u64>>(mut self, name: &str, idxs: I) -> Self {
        self.set_trace(name, Trace::Fin(idxs.into_iter().collect()));
        self
    }

    pub fn block_cof<I: IntoIterator<Item = u64>>(mut self, name: &str, except: I) -> Self {
        self.set_trace(name, Trace::Cof(except.into_iter().collect()));
        self
    }

    fn set_trace(&mut self, name: &str, t: Trace) {
        match &mut self.set.repr {
            Repr::Tail { traces, .. } => {
                assert!(traces.contains_key(name), "unknown block {name}");
                traces.insert(name.to_string(), t);
            }
            Repr::Finite(_) => panic!("finite carrier has no blocks"),
        }
    }

    pub fn named<'a, I: IntoIterator<Item = &'a str>>(mut self, names: I) -> Self {
        match &mut self.set.repr {
            Repr::Tail { named, .. } => {
                for n in names {
                    assert!(
                        self.set.carrier.contains(&Point::Named(n.to_string())),
                        "unknown named point {n}"
                    );
                    named.insert(n.to_string());
                }
            }
            Repr::Finite(_) => panic!("finite carrier has no named points"),
        }
        self
    }

    pub fn finish(self) -> RSet {
        self.set
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoolOp {
    Union,
    Intersection,
    Difference,
    Complement,
}

/// Checked entry point for the four Boolean operations.
pub fn apply_boolean(op: BoolOp, s: &RSet, t: Option<&RSet>) -> Result<RSet, SetError> {
    let need = |t: Option<&RSet>| -> Result<(), SetError> {
        match t {
            Some(t) if !s.same_carrier(t) => Err(SetError::CarrierMismatch),
            Some(_) => Ok(()),
            None => Err(SetError::MissingOperand),
        }
    };
    match op {
        BoolOp::Union => {
            need(t)?;
            Ok(s.union(t.unwrap()))
        }
        BoolOp::Intersection => {
            need(t)?;
            Ok(s.intersection(t.unwrap()))
        }
        BoolOp::Difference => {
            need(t)?;
            Ok(s.difference(t.unwrap()))
        }
        BoolOp::Complement => Ok(s.complement()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Carrier of the one-point compactification of a discrete countable
    /// set: one block `N` with limit `inf`.
    pub fn fig2_carrier() -> Arc<Carrier> {
        Carrier::tail(
            vec![BlockSpec { name: "N".into(), limit: Some("inf".into()) }],
            vec![],
        )
        .unwrap()
    }

    fn elem(n: u64) -> Point {
        Point::Elem("N".into(), n)
    }

    #[test]
    fn union_with_empty_is_identity() {
        let c = fig2_carrier();
        let s = RSet::build(&c).block_fin("N", [0, 1]).finish();
        assert_eq!(s.union(&RSet::empty(&c)), s);
    }

    #[test]
    fn complement_of_finite_is_cofinite() {
        let c = fig2_carrier();
        let s = RSet::build(&c).block_fin("N", [0, 1]).finish();
        let comp = s.complement();
        assert_eq!(comp.trace("N"), Some(&Trace::Cof([0, 1].into())));
        assert!(comp.contains(&Point::Named("inf".into())));
    }

    #[test]
    fn intersection_of_cofinites() {
        let c = fig2_carrier();
        let a = RSet::build(&c).block_cof("N", [0]).finish();
        let b = RSet::build(&c).block_cof("N", [1]).finish();
        let i = a.intersection(&b);
        // Oracle: membership on the first few indices plus cofiniteness.
        for n in 0..=10 {
            assert_eq!(i.contains(&elem(n)), n != 0 && n != 1);
        }
        assert!(i.trace("N").unwrap().is_cofinite());
        assert_eq!(i, RSet::build(&c).block_cof("N", [0, 1]).finish());
    }

    #[test]
    fn limit_singleton_is_closed_not_open() {
        let c = fig2_carrier();
        let s = RSet::build(&c).named(["inf"]).finish();
        let cls = s.classify();
        assert!(cls.closed && !cls.open && !cls.clopen && cls.finite);
    }

    #[test]
    fn empty_set_is_clopen() {
        let c = fig2_carrier();
        assert!(RSet::empty(&c).is_clopen());
        assert!(RSet::full(&c).is_clopen());
    }

    #[test]
    fn cofinite_with_limit_is_clopen() {
        let c = fig2_carrier();
        let s = RSet::build(&c).block_cof("N", [0, 3]).named(["inf"]).finish();
        // Oracle: the one-point-compactification clopen law directly.
        assert!(s.is_open() && s.is_closed());
        let without = RSet::build(&c).block_cof("N", [0, 3]).finish();
        assert!(!without.is_closed() && without.is_open());
    }

    #[test]
    fn closure_of_block_adds_limit() {
        let c = fig2_carrier();
        let n = RSet::build(&c).block_cof("N", []).finish();
        assert_eq!(n.closure(), RSet::full(&c));
        let closed = RSet::build(&c).block_fin("N", [2]).named(["inf"]).finish();
        assert_eq!(closed.closure(), closed);
    }

    #[test]
    fn interior_strips_unsupported_limit() {
        let c = fig2_carrier();
        let s = RSet::build(&c).block_fin("N", [0, 1, 2]).named(["inf"]).finish();
        // Oracle: largest representable open subset under the clopen law.
        assert_eq!(s.interior(), RSet::build(&c).block_fin("N", [0, 1, 2]).finish());
    }

    #[test]
    fn density_in_one_point_compactification() {
        let c = fig2_carrier();
        let n = RSet::build(&c).block_cof("N", []).finish();
        let full = RSet::full(&c);
        assert_eq!(n.dense_in(&full).unwrap(), None);
        assert_eq!(full.dense_in(&full).unwrap(), None);
        let zero = RSet::build(&c).block_fin("N", [0]).finish();
        let b = RSet::build(&c).block_fin("N", [0]).named(["inf"]).finish();
        assert_eq!(zero.dense_in(&b).unwrap(), Some(Point::Named("inf".into())));
        assert!(b.dense_in(&zero).is_err());
    }

    #[test]
    fn finite_carrier_sets_are_discrete() {
        let c = Carrier::finite(4);
        let s = RSet::from_points(&c, [Point::Idx(1), Point::Idx(3)]).unwrap();
        assert!(s.is_clopen());
        assert_eq!(s.closure(), s);
        assert_eq!(s.interior(), s);
        assert!(RSet::from_points(&c, [Point::Idx(9)]).is_err());
    }

    #[test]
    fn carrier_mismatch_is_reported() {
        let c1 = Carrier::finite(2);
        let c2 = Carrier::finite(3);
        let s = RSet::empty(&c1);
        let t = RSet::empty(&c2);
        assert_eq!(
            apply_boolean(BoolOp::Union, &s, Some(&t)),
            Err(SetError::CarrierMismatch)
        );
        assert_eq!(apply_boolean(BoolOp::Union, &s, None), Err(SetError::MissingOperand));
    }

    #[test]
    fn duplicate_names_rejected() {
        let bad = Carrier::tail(
            vec![BlockSpec { name: "N".into(), limit: Some("N".into()) }],
            vec![],
        );
        assert!(bad.is_err());
        let bad2 = Carrier::tail(
            vec![BlockSpec { name: "A".into(), limit: Some("x".into()) }],
            vec!["x".into()],
        );
        assert!(bad2.is_err());
    }

    #[test]
    fn compactness_of_subsets() {
        let c = Carrier::tail(
            vec![
                BlockSpec { name: "P".into(), limit: Some("p".into()) },
                BlockSpec { name: "Q".into(), limit: None },
            ],
            vec![],
        )
        .unwrap();
        let with_limit = RSet::build(&c).block_cof("P", []).named(["p"]).finish();
        assert!(with_limit.is_compact_subset());
        let no_limit = RSet::build(&c).block_cof("P", []).finish();
        assert!(!no_limit.is_compact_subset());
        let discrete_tail = RSet::build(&c).block_cof("Q", []).finish();
        assert!(!discrete_tail.is_compact_subset());
        let fin = RSet::build(&c).block_fin("Q", [1, 2]).finish();
        assert!(fin.is_compact_subset());
    }
}
