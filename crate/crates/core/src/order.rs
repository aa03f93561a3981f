//! Partial orders presented as finite unions of rectangles.
//!
//! A rectangle (A, B) declares a ≤ b for every a ∈ A and b ∈ B; reflexive
//! pairs are implicit and never stored. Validation closes the rectangle set
//! under composition — (A,B)∘(C,D) = (A,D) when B ∩ C ≠ ∅ — which is a
//! terminating fixpoint because composition only recombines existing sides,
//! and then rejects presentations with an antisymmetry violation.

use std::sync::Arc;

use crate::setalg::{Carrier, Point, RSet, SetError};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rect {
    pub lower: RSet,
    pub upper: RSet,
}

/// A validated order presentation: transitively closed rectangles over a
/// carrier, with decidable `leq` and representable up/down closures.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderPresentation {
    carrier: Arc<Carrier>,
    rects: Vec<Rect>,
}

/// Closes the rectangle set under composition and checks antisymmetry.
/// On success the returned presentation is the transitive fixpoint.
pub fn validate_order(
    carrier: &Arc<Carrier>,
    rects: Vec<(RSet, RSet)>,
) -> Result<OrderPresentation> {
    for (a, b) in &rects {
        if a.carrier() != carrier || b.carrier() != carrier {
            return Err(Error::Set(SetError::CarrierMismatch));
        }
    }
    let mut closed: Vec<Rect> = Vec::new();
    for (lower, upper) in rects {
        if lower.is_empty() || upper.is_empty() {
            continue;
        }
        let r = Rect { lower, upper };
        if !closed.contains(&r) {
            closed.push(r);
        }
    }
    // Transitive closure by rectangle composition.
    loop {
        let mut added = Vec::new();
        for r1 in &closed {
            for r2 in &closed {
                if !r1.upper.intersection(&r2.lower).is_empty() {
                    let comp = Rect { lower: r1.lower.clone(), upper: r2.upper.clone() };
                    if !closed.contains(&comp) && !added.contains(&comp) {
                        added.push(comp);
                    }
                }
            }
        }
        if added.is_empty() {
            break;
        }
        closed.extend(added);
    }
    // Antisymmetry: rectangles (A,B) and (C,D) with x ∈ A∩D, y ∈ B∩C, x ≠ y.
    for r1 in &closed {
        for r2 in &closed {
            let p = r1.lower.intersection(&r2.upper);
            let q = r1.upper.intersection(&r2.lower);
            if p.is_empty() || q.is_empty() {
                continue;
            }
            // Off-diagonal pair exists unless P = Q = the same singleton.
            if let (Some(x), Some(y)) = (p.as_singleton(), q.as_singleton()) {
                if x == y {
                    continue;
                }
                return Err(Error::Antisymmetry(x, y));
            }
            let x = p.pick().unwrap();
            let y = match q.difference(&RSet::singleton(carrier, &x).unwrap()).pick() {
                Some(y) => y,
                None => {
                    // Q = {x}; P has another point.
                    let x2 = p
                        .difference(&RSet::singleton(carrier, &q.pick().unwrap()).unwrap())
                        .pick()
                        .unwrap();
                    return Err(Error::Antisymmetry(x2, q.pick().unwrap()));
                }
            };
            return Err(Error::Antisymmetry(x, y));
        }
    }
    Ok(OrderPresentation { carrier: carrier.clone(), rects: closed })
}

impl OrderPresentation {
    /// The discrete order.
    pub fn discrete(carrier: &Arc<Carrier>) -> OrderPresentation {
        OrderPresentation { carrier: carrier.clone(), rects: Vec::new() }
    }

    pub fn carrier(&self) -> &Arc<Carrier> {
        &self.carrier
    }

    pub fn rectangles(&self) -> &[Rect] {
        &self.rects
    }

    /// x ≤ y: reflexivity or membership in some rectangle.
    pub fn leq(&self, x: &Point, y: &Point) -> Result<bool> {
        if !self.carrier.contains(x) {
            return Err(Error::Set(SetError::UnknownPoint(x.to_string())));
        }
        if !self.carrier.contains(y) {
            return Err(Error::Set(SetError::UnknownPoint(y.to_string())));
        }
        Ok(self.le(x, y))
    }

    pub(crate) fn le(&self, x: &Point, y: &Point) -> bool {
        x == y
            || self
                .rects
                .iter()
                .any(|r| r.lower.contains(x) && r.upper.contains(y))
    }

    /// ↑S: S together with every upper side whose lower side meets S.
    pub fn upclose(&self, s: &RSet) -> RSet {
        assert!(s.carrier() == &self.carrier, "carrier mismatch");
        let mut out = s.clone();
        for r in &self.rects {
            if !r.lower.intersection(s).is_empty() {
                out = out.union(&r.upper);
            }
        }
        out
    }

    /// ↓S: dual of `upclose`.
    pub fn downclose(&self, s: &RSet) -> RSet {
        assert!(s.carrier() == &self.carrier, "carrier mismatch");
        let mut out = s.clone();
        for r in &self.rects {
            if !r.upper.intersection(s).is_empty() {
                out = out.union(&r.lower);
            }
        }
        out
    }

    pub fn upclose_point(&self, p: &Point) -> RSet {
        self.upclose(&RSet::singleton(&self.carrier, p).expect("point in carrier"))
    }

    pub fn downclose_point(&self, p: &Point) -> RSet {
        self.downclose(&RSet::singleton(&self.carrier, p).expect("point in carrier"))
    }

    /// Implication in the complete lattice of all upsets: the largest upset
    /// G with G ∩ E ⊆ F, namely the complement of ↓(E \ F).
    pub fn up_implication(&self, e: &RSet, f: &RSet) -> RSet {
        self.downclose(&e.difference(f)).complement()
    }

    pub fn is_upset(&self, s: &RSet) -> bool {
        self.upclose(s) == *s
    }

    pub fn is_downset(&self, s: &RSet) -> bool {
        self.downclose(s) == *s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setalg::BlockSpec;

    fn fig2_y() -> (Arc<Carrier>, OrderPresentation) {
        let c = Carrier::tail(
            vec![BlockSpec { name: "N".into(), limit: Some("inf".into()) }],
            vec![],
        )
        .unwrap();
        let block = RSet::build(&c).block_cof("N", []).finish();
        let inf = RSet::build(&c).named(["inf"]).finish();
        let ord = validate_order(&c, vec![(block, inf)]).unwrap();
        (c, ord)
    }

    fn elem(n: u64) -> Point {
        Point::Elem("N".into(), n)
    }

    #[test]
    fn discrete_order_validates() {
        let c = Carrier::finite(3);
        let ord = validate_order(&c, vec![]).unwrap();
        assert!(!ord.leq(&Point::Idx(0), &Point::Idx(1)).unwrap());
        assert!(ord.leq(&Point::Idx(0), &Point::Idx(0)).unwrap());
    }

    #[test]
    fn one_point_compactification_order() {
        let (_, ord) = fig2_y();
        let inf = Point::Named("inf".into());
        assert!(ord.leq(&elem(5), &inf).unwrap());
        assert!(!ord.leq(&inf, &elem(5)).unwrap());
        assert!(ord.leq(&elem(5), &elem(5)).unwrap());
        assert!(!ord.leq(&elem(5), &elem(6)).unwrap());
    }

    #[test]
    fn antisymmetry_violation_is_caught() {
        let c = Carrier::finite(2);
        let a = RSet::from_points(&c, [Point::Idx(0)]).unwrap();
        let b = RSet::from_points(&c, [Point::Idx(1)]).unwrap();
        let err = validate_order(&c, vec![(a.clone(), b.clone()), (b, a)]).unwrap_err();
        match err {
            Error::Antisymmetry(x, y) => {
                assert_ne!(x, y);
            }
            other => panic!("expected antisymmetry, got {other:?}"),
        }
    }

    #[test]
    fn transitive_closure_is_computed() {
        let c = Carrier::finite(3);
        let p = |i: u32| RSet::from_points(&c, [Point::Idx(i)]).unwrap();
        let ord = validate_order(&c, vec![(p(0), p(1)), (p(1), p(2))]).unwrap();
        assert!(ord.leq(&Point::Idx(0), &Point::Idx(2)).unwrap());
    }

    #[test]
    fn upclose_and_downclose_in_fig2() {
        let (c, ord) = fig2_y();
        assert!(ord.upclose(&RSet::empty(&c)).is_empty());
        let five = RSet::from_points(&c, [elem(5)]).unwrap();
        assert_eq!(
            ord.upclose(&five),
            RSet::build(&c).block_fin("N", [5]).named(["inf"]).finish()
        );
        let inf = RSet::build(&c).named(["inf"]).finish();
        // Oracle: pointwise leq over small indices plus the uniform tail.
        let down = ord.downclose(&inf);
        for n in 0..=10 {
            assert!(down.contains(&elem(n)));
        }
        assert_eq!(down, RSet::full(&c));
    }

    #[test]
    fn upset_recognition_in_fig2() {
        let (c, ord) = fig2_y();
        assert!(ord.is_upset(&RSet::empty(&c)));
        assert!(ord.is_upset(&RSet::full(&c)));
        let cof = RSet::build(&c).block_cof("N", [0]).named(["inf"]).finish();
        assert!(ord.is_upset(&cof));
        assert!(ord.is_upset(&RSet::build(&c).named(["inf"]).finish()));
        assert!(!ord.is_upset(&RSet::from_points(&c, [elem(5)]).unwrap()));
    }

    #[test]
    fn finite_upclose_matches_pairwise_oracle() {
        // Brute force over all subsets of a few small validated orders.
        let c = Carrier::finite(4);
        let p = |i: u32| RSet::from_points(&c, [Point::Idx(i)]).unwrap();
        let orders = vec![
            validate_order(&c, vec![]).unwrap(),
            validate_order(&c, vec![(p(0), p(1)), (p(1), p(2))]).unwrap(),
            validate_order(&c, vec![(p(0).union(&p(1)), p(2).union(&p(3)))]).unwrap(),
        ];
        for ord in orders {
            for mask in 0u32..16 {
                let pts: Vec<Point> =
                    (0..4).filter(|i| mask >> i & 1 == 1).map(Point::Idx).collect();
                let s = RSet::from_points(&c, pts.clone()).unwrap();
                let up = ord.upclose(&s);
                for y in 0..4u32 {
                    let expect = pts.iter().any(|x| ord.le(x, &Point::Idx(y)));
                    assert_eq!(up.contains(&Point::Idx(y)), expect);
                }
                // Idempotent and extensive.
                assert_eq!(ord.upclose(&up), up);
                assert!(s.subset_of(&up));
            }
        }
    }
}
