//! Ordered-space presentations and their separation, continuity and
//! compactness classifiers.
//!
//! The topology is never stored: it is generated by the representable
//! clopens of the carrier's block model (see `setalg`). Checks on infinite
//! carriers run over canonical representatives — every support index of the
//! order rectangles and of any sets involved, every named point, plus two
//! fresh generic indices per block. The order and the clopen algebra are
//! uniform outside the finite supports, so generic representatives stand in
//! for the whole tail; this uniformity is a stated assumption of the engine,
//! not something checked per instance.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::order::{validate_order, OrderPresentation};
use crate::setalg::{Carrier, CarrierKind, Point, RSet};
use crate::Result;

/// A carrier with a validated order; the topology is induced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpacePresentation {
    carrier: Arc<Carrier>,
    order: OrderPresentation,
}

/// Verdict of the two continuity conditions: (i) every ↑x closed,
/// (ii) ↓U open for every open U.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContinuityReport {
    pub upsets_closed: Option<Point>,
    pub down_of_open_open: Option<RSet>,
}

impl ContinuityReport {
    pub fn ok(&self) -> bool {
        self.upsets_closed.is_none() && self.down_of_open_open.is_none()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpaceFlags {
    pub compact: bool,
    pub priestley_separation: bool,
    pub priestley: bool,
    pub continuously_ordered: bool,
    pub esakia: bool,
    pub order_zero_dimensional: bool,
    pub image_compact: bool,
    pub locally_esakia: bool,
}

impl SpacePresentation {
    pub fn new(carrier: &Arc<Carrier>, rects: Vec<(RSet, RSet)>) -> Result<Self> {
        let order = validate_order(carrier, rects)?;
        Ok(SpacePresentation { carrier: carrier.clone(), order })
    }

    pub fn discrete(carrier: &Arc<Carrier>) -> Self {
        SpacePresentation {
            carrier: carrier.clone(),
            order: OrderPresentation::discrete(carrier),
        }
    }

    pub fn carrier(&self) -> &Arc<Carrier> {
        &self.carrier
    }

    pub fn order(&self) -> &OrderPresentation {
        &self.order
    }

    pub fn is_finite(&self) -> bool {
        self.carrier.is_finite()
    }

    /// Every point of a finite carrier.
    pub fn points_finite(&self) -> Option<Vec<Point>> {
        self.carrier.size().map(|n| (0..n).map(Point::Idx).collect())
    }

    /// Rectangle support indices on one block.
    pub fn support_pool(&self, block: &str) -> BTreeSet<u64> {
        let mut pool = BTreeSet::new();
        for r in self.order.rectangles() {
            pool.extend(r.lower.block_support(block));
            pool.extend(r.upper.block_support(block));
        }
        pool
    }

    fn pool_with_extra(&self, block: &str, extra: &[&RSet]) -> BTreeSet<u64> {
        let mut pool = self.support_pool(block);
        for s in extra {
            pool.extend(s.block_support(block));
        }
        pool
    }

    /// Two fresh generic indices of a block, past every support involved.
    pub fn generic_indices(&self, block: &str, extra: &[&RSet]) -> (u64, u64) {
        let pool = self.pool_with_extra(block, extra);
        let next = pool.iter().next_back().map_or(0, |m| m + 1);
        (next, next + 1)
    }

    /// Canonical representatives: all points of a finite carrier; on a tail
    /// carrier the support indices (order rectangles plus `extra`), every
    /// named point, and two generics per block.
    pub fn representatives(&self, extra: &[&RSet]) -> Vec<Point> {
        match self.carrier.kind() {
            CarrierKind::Finite { size } => (0..*size).map(Point::Idx).collect(),
            CarrierKind::Tail { blocks, isolated } => {
                let mut out = Vec::new();
                for b in blocks {
                    let pool = self.pool_with_extra(&b.name, extra);
                    let (g1, g2) = self.generic_indices(&b.name, extra);
                    for i in pool {
                        out.push(Point::Elem(b.name.clone(), i));
                    }
                    out.push(Point::Elem(b.name.clone(), g1));
                    out.push(Point::Elem(b.name.clone(), g2));
                    if let Some(l) = &b.limit {
                        out.push(Point::Named(l.clone()));
                    }
                }
                out.extend(isolated.iter().map(|i| Point::Named(i.clone())));
                out
            }
        }
    }

    /// A generating family for the clopen algebra: singletons over the
    /// support pool and generics, one cofinite generator per block, and
    /// isolated-point singletons. On finite carriers: all singletons.
    pub fn clopen_generators(&self, extra: &[&RSet]) -> Vec<RSet> {
        match self.carrier.kind() {
            CarrierKind::Finite { size } => (0..*size)
                .map(|i| RSet::singleton(&self.carrier, &Point::Idx(i)).unwrap())
                .collect(),
            CarrierKind::Tail { blocks, isolated } => {
                let mut out = Vec::new();
                for b in blocks {
                    let pool = self.pool_with_extra(&b.name, extra);
                    let (g1, g2) = self.generic_indices(&b.name, extra);
                    for i in pool.iter().copied().chain([g1, g2]) {
                        out.push(
                            RSet::singleton(&self.carrier, &Point::Elem(b.name.clone(), i))
                                .unwrap(),
                        );
                    }
                    // Basic neighborhood of the tail: block minus the pool,
                    // plus the limit point when the block owns one.
                    let mut gen = RSet::build(&self.carrier)
                        .block_cof(&b.name, pool.iter().copied())
                        .finish();
                    if let Some(l) = &b.limit {
                        gen = gen
                            .union(&RSet::singleton(&self.carrier, &Point::Named(l.clone())).unwrap());
                    }
                    out.push(gen);
                }
                for i in isolated {
                    out.push(
                        RSet::singleton(&self.carrier, &Point::Named(i.clone())).unwrap(),
                    );
                }
                out
            }
        }
    }

    /// Least clopen upset containing `seed` and avoiding `avoid`, built by
    /// saturating the forced content: order upclosure, topological closure,
    /// and a generic cofinite tail for every block whose limit point got
    /// trapped over a finite trace. Everything the construction adds lies in
    /// *every* clopen upset containing `seed` (up to finitely many generic
    /// tail points), so a forced meeting with `avoid` proves that no clopen
    /// upset separates; the witness point is returned.
    pub fn greedy_clopen_upset(
        &self,
        seed: &RSet,
        avoid: &RSet,
    ) -> std::result::Result<RSet, Point> {
        assert!(seed.carrier() == &self.carrier && avoid.carrier() == &self.carrier);
        let mut u = seed.clone();
        loop {
            loop {
                let next = self.order.upclose(&u).closure();
                if next == u {
                    break;
                }
                u = next;
            }
            if let Some(w) = u.intersection(avoid).pick() {
                return Err(w);
            }
            let mut grew = false;
            for b in self.carrier.blocks() {
                let Some(l) = &b.limit else { continue };
                if !u.contains(&Point::Named(l.clone()))
                    || u.trace(&b.name).unwrap().is_cofinite()
                {
                    continue;
                }
                // The limit is in; a cofinite tail of the block is forced.
                let mut excl = self.support_pool(&b.name);
                excl.extend(seed.block_support(&b.name));
                excl.extend(avoid.block_support(&b.name));
                excl.extend(u.block_support(&b.name));
                if avoid.trace(&b.name).unwrap().is_cofinite() {
                    // Cofinite tail meets cofinite avoid-trace, whatever the
                    // finite exceptions: forced overlap.
                    let n = (0..).find(|n| !excl.contains(n)).unwrap();
                    return Err(Point::Elem(b.name.clone(), n));
                }
                let tail =
                    RSet::build(&self.carrier).block_cof(&b.name, excl).finish();
                u = u.union(&tail);
                grew = true;
            }
            if !grew {
                debug_assert!(u.is_clopen(), "greedy result must be clopen");
                debug_assert!(self.order.is_upset(&u), "greedy result must be an upset");
                return Ok(u);
            }
        }
    }

    /// Priestley separation on representative pairs: for x ≰ y there must be
    /// a clopen upset containing x and missing y.
    pub fn check_priestley_separation(&self) -> Option<(Point, Point)> {
        let reps = self.representatives(&[]);
        for x in &reps {
            for y in &reps {
                if x == y || self.order.le(x, y) {
                    continue;
                }
                let sx = RSet::singleton(&self.carrier, x).unwrap();
                let sy = RSet::singleton(&self.carrier, y).unwrap();
                if self.greedy_clopen_upset(&sx, &sy).is_err() {
                    return Some((x.clone(), y.clone()));
                }
            }
        }
        None
    }

    pub fn check_order_continuity(&self) -> ContinuityReport {
        let mut upsets_closed = None;
        for x in self.representatives(&[]) {
            if !self.order.upclose_point(&x).is_closed() {
                upsets_closed = Some(x);
                break;
            }
        }
        let mut down_of_open_open = None;
        for u in self.clopen_generators(&[]) {
            if !self.order.downclose(&u).is_open() {
                down_of_open_open = Some(u);
                break;
            }
        }
        ContinuityReport { upsets_closed, down_of_open_open }
    }

    /// ↑x compact for every representative x.
    pub fn check_image_compact(&self) -> Option<Point> {
        self.representatives(&[])
            .into_iter()
            .find(|x| !self.order.upclose_point(x).is_compact_subset())
    }

    /// The upset-difference basis condition: every clopen generator is a
    /// finite union of differences of clopen upsets. Returns a generator and
    /// a point of it that no difference can cover.
    pub fn check_upset_difference_basis(&self) -> Option<(RSet, Point)> {
        for w in self.clopen_generators(&[]) {
            if let Some(p) = self.cover_generator(&w) {
                return Some((w, p));
            }
        }
        None
    }

    /// One difference piece around a single point: U = least clopen upset at
    /// p, V = least clopen upset over U \ w that keeps p out. Both sides are
    /// forced, so failure is definitive for this point.
    fn point_piece_ok(&self, p: &Point, w: &RSet) -> bool {
        let sp = RSet::singleton(&self.carrier, p).unwrap();
        let u = self
            .greedy_clopen_upset(&sp, &RSet::empty(&self.carrier))
            .expect("empty avoid cannot fail");
        self.greedy_clopen_upset(&u.difference(w), &sp).is_ok()
    }

    fn cover_generator(&self, w: &RSet) -> Option<Point> {
        // Pointwise pieces for named members, explicit finite members, and
        // pool indices sitting inside a cofinite trace.
        let mut special: Vec<Point> = Vec::new();
        if let Some(named) = w.named_members() {
            special.extend(named.iter().map(|n| Point::Named(n.clone())));
        }
        for b in self.carrier.blocks() {
            let tr = w.trace(&b.name).unwrap();
            if tr.is_cofinite() {
                for i in self.support_pool(&b.name) {
                    if tr.contains(i) {
                        special.push(Point::Elem(b.name.clone(), i));
                    }
                }
            } else {
                special.extend(
                    tr.support().iter().map(|i| Point::Elem(b.name.clone(), *i)),
                );
            }
        }
        if self.carrier.is_finite() {
            special = w.enumerate_finite().unwrap();
        }
        for p in special {
            if !self.point_piece_ok(&p, w) {
                return Some(p);
            }
        }
        // One uniform piece per cofinite block trace, covering the generic
        // tail; a witness inside the generic seed is uniform over the tail.
        for b in self.carrier.blocks() {
            let tr = w.trace(&b.name).unwrap();
            if !tr.is_cofinite() {
                continue;
            }
            let mut excl = self.support_pool(&b.name);
            excl.extend(tr.support().iter().copied());
            let seed = RSet::build(&self.carrier).block_cof(&b.name, excl).finish();
            let u = self
                .greedy_clopen_upset(&seed, &RSet::empty(&self.carrier))
                .expect("empty avoid cannot fail");
            if let Err(p) = self.greedy_clopen_upset(&u.difference(w), &seed) {
                return Some(p);
            }
        }
        None
    }

    pub fn classify(&self) -> SpaceFlags {
        let compact = self.carrier.is_compact();
        let priestley_separation = self.check_priestley_separation().is_none();
        let continuity = self.check_order_continuity();
        let continuously_ordered = continuity.ok();
        let order_zero_dimensional =
            priestley_separation && self.check_upset_difference_basis().is_none();
        let image_compact = self.check_image_compact().is_none();
        let priestley = compact && priestley_separation;
        SpaceFlags {
            compact,
            priestley_separation,
            priestley,
            continuously_ordered,
            esakia: priestley && continuously_ordered,
            order_zero_dimensional,
            image_compact,
            locally_esakia: order_zero_dimensional && continuously_ordered && image_compact,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setalg::BlockSpec;

    pub fn fig2_y() -> SpacePresentation {
        let c = Carrier::tail(
            vec![BlockSpec { name: "N".into(), limit: Some("inf".into()) }],
            vec![],
        )
        .unwrap();
        let block = RSet::build(&c).block_cof("N", []).finish();
        let inf = RSet::build(&c).named(["inf"]).finish();
        SpacePresentation::new(&c, vec![(block, inf)]).unwrap()
    }

    pub fn fig2_x() -> SpacePresentation {
        let c = Carrier::tail(
            vec![BlockSpec { name: "N".into(), limit: None }],
            vec![],
        )
        .unwrap();
        SpacePresentation::discrete(&c)
    }

    #[test]
    fn discrete_two_chain_is_priestley() {
        let c = Carrier::finite(2);
        let lo = RSet::from_points(&c, [Point::Idx(0)]).unwrap();
        let hi = RSet::from_points(&c, [Point::Idx(1)]).unwrap();
        let x = SpacePresentation::new(&c, vec![(lo, hi)]).unwrap();
        let flags = x.classify();
        assert!(flags.priestley && flags.esakia && flags.locally_esakia);
    }

    #[test]
    fn one_point_compactification_is_esakia() {
        let y = fig2_y();
        assert_eq!(y.check_priestley_separation(), None);
        assert!(y.check_order_continuity().ok());
        let flags = y.classify();
        assert!(flags.compact && flags.priestley && flags.esakia);
        assert!(flags.order_zero_dimensional && flags.locally_esakia);
    }

    #[test]
    fn discrete_countable_space_flags() {
        let x = fig2_x();
        let flags = x.classify();
        assert!(!flags.compact);
        assert!(flags.order_zero_dimensional);
        assert!(flags.locally_esakia);
        assert!(!flags.priestley);
    }

    #[test]
    fn empty_space_is_everything() {
        let x = SpacePresentation::discrete(&Carrier::finite(0));
        let flags = x.classify();
        assert!(
            flags.compact
                && flags.priestley
                && flags.esakia
                && flags.order_zero_dimensional
                && flags.locally_esakia
        );
    }

    #[test]
    fn separation_on_limit_block_with_trivial_order() {
        // One block with a limit, reflexive order only: n ≰ l is separated
        // by the clopen singleton, l ≰ n by a cofinite clopen upset.
        let c = Carrier::tail(
            vec![BlockSpec { name: "N".into(), limit: Some("l".into()) }],
            vec![],
        )
        .unwrap();
        let x = SpacePresentation::discrete(&c);
        assert_eq!(x.check_priestley_separation(), None);
        let n0 = RSet::singleton(&c, &Point::Elem("N".into(), 0)).unwrap();
        let l = RSet::singleton(&c, &Point::Named("l".into())).unwrap();
        let u = x.greedy_clopen_upset(&n0, &l).unwrap();
        assert!(u.contains(&Point::Elem("N".into(), 0)));
        assert!(!u.contains(&Point::Named("l".into())));
        let v = x.greedy_clopen_upset(&l, &n0).unwrap();
        assert!(v.contains(&Point::Named("l".into())));
        assert!(v.trace("N").unwrap().is_cofinite());
        assert!(!v.contains(&Point::Elem("N".into(), 0)));
    }

    #[test]
    fn limit_below_clopen_block_breaks_continuity() {
        // A limit point ordered below a block whose tail is not: the
        // downclosure of the block is not open.
        let c = Carrier::tail(
            vec![
                BlockSpec { name: "P".into(), limit: Some("lp".into()) },
                BlockSpec { name: "P2".into(), limit: None },
            ],
            vec![],
        )
        .unwrap();
        let lp = RSet::build(&c).named(["lp"]).finish();
        let p2 = RSet::build(&c).block_cof("P2", []).finish();
        let x = SpacePresentation::new(&c, vec![(lp, p2.clone())]).unwrap();
        let report = x.check_order_continuity();
        assert_eq!(report.upsets_closed, None);
        let witness = report.down_of_open_open.expect("continuity must fail");
        assert!(!x.order().downclose(&witness).is_open());
        assert!(!x.order().downclose(&p2).is_open());
        // Still order-zero-dimensional: separation and the basis hold.
        let flags = x.classify();
        assert!(flags.order_zero_dimensional && !flags.continuously_ordered);
    }

    #[test]
    fn noncompact_upset_detected() {
        // One limitless block, a single point below the whole tail.
        let c = Carrier::tail(
            vec![BlockSpec { name: "N".into(), limit: None }],
            vec![],
        )
        .unwrap();
        let zero = RSet::singleton(&c, &Point::Elem("N".into(), 0)).unwrap();
        let tail = RSet::build(&c).block_cof("N", [0]).finish();
        let x = SpacePresentation::new(&c, vec![(zero, tail)]).unwrap();
        assert_eq!(x.check_image_compact(), Some(Point::Elem("N".into(), 0)));
    }

    #[test]
    fn finite_classifiers_match_brute_force() {
        // On finite carriers every subset is clopen, so separation has a
        // brute-force oracle: search all upsets.
        let c = Carrier::finite(4);
        let p = |i: u32| RSet::from_points(&c, [Point::Idx(i)]).unwrap();
        let spaces = vec![
            SpacePresentation::discrete(&c),
            SpacePresentation::new(&c, vec![(p(0), p(1)), (p(1), p(3))]).unwrap(),
            SpacePresentation::new(&c, vec![(p(0).union(&p(1)), p(2).union(&p(3)))])
                .unwrap(),
        ];
        for x in spaces {
            let mut upsets = Vec::new();
            for mask in 0u32..16 {
                let pts: Vec<Point> =
                    (0..4).filter(|i| mask >> i & 1 == 1).map(Point::Idx).collect();
                let s = RSet::from_points(&c, pts).unwrap();
                if x.order().is_upset(&s) {
                    upsets.push(s);
                }
            }
            let brute = |a: &Point, b: &Point| {
                upsets.iter().any(|u| u.contains(a) && !u.contains(b))
            };
            for a in 0..4u32 {
                for b in 0..4u32 {
                    let (pa, pb) = (Point::Idx(a), Point::Idx(b));
                    if pa == pb || x.order().le(&pa, &pb) {
                        continue;
                    }
                    assert!(brute(&pa, &pb), "finite posets always separate");
                }
            }
            assert_eq!(x.check_priestley_separation(), None);
            assert!(x.check_order_continuity().ok());
            assert_eq!(x.check_upset_difference_basis(), None);
        }
    }
}
