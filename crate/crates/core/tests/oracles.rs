//! Brute-force cross-checks on finite carriers, where every subset can be
//! enumerated.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ordcomp::corpus;
use ordcomp::setalg::{Point, RSet};

#[test]
fn upclose_matches_pairwise_leq_on_all_subsets() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..30 {
        let pairs = corpus::random_poset(6, &mut rng);
        let x = corpus::poset_space(6, &pairs);
        let c = x.carrier();
        for mask in 0u32..64 {
            let pts: Vec<Point> =
                (0..6).filter(|i| mask >> i & 1 == 1).map(Point::Idx).collect();
            let s = RSet::from_points(c, pts.clone()).unwrap();
            let up = x.order().upclose(&s);
            let down = x.order().downclose(&s);
            for j in 0..6u32 {
                let q = Point::Idx(j);
                let expect_up =
                    pts.iter().any(|p| x.order().leq(p, &q).unwrap());
                let expect_down =
                    pts.iter().any(|p| x.order().leq(&q, p).unwrap());
                assert_eq!(up.contains(&q), expect_up);
                assert_eq!(down.contains(&q), expect_down);
            }
        }
    }
}

#[test]
fn finite_classifiers_match_subset_enumeration() {
    // On finite discrete posets the subset-level oracles are definitive:
    // separation always has an upset witness and every singleton is a
    // difference of upsets, so all flags must come out true.
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..20 {
        let pairs = corpus::random_poset(6, &mut rng);
        let x = corpus::poset_space(6, &pairs);
        let c = x.carrier();
        let upsets: Vec<RSet> = (0u32..64)
            .map(|mask| {
                RSet::from_points(c, (0..6).filter(|i| mask >> i & 1 == 1).map(Point::Idx))
                    .unwrap()
            })
            .filter(|s| x.order().is_upset(s))
            .collect();
        for a in 0..6u32 {
            for b in 0..6u32 {
                let (p, q) = (Point::Idx(a), Point::Idx(b));
                if p == q || x.order().leq(&p, &q).unwrap() {
                    continue;
                }
                assert!(upsets.iter().any(|u| u.contains(&p) && !u.contains(&q)));
            }
        }
        // Every subset is a union of difference pieces of upsets.
        for mask in 0u32..64 {
            let w = RSet::from_points(c, (0..6).filter(|i| mask >> i & 1 == 1).map(Point::Idx))
                .unwrap();
            let mut covered = RSet::empty(c);
            for u in &upsets {
                for v in &upsets {
                    let piece = u.difference(v);
                    if piece.subset_of(&w) {
                        covered = covered.union(&piece);
                    }
                }
            }
            assert_eq!(covered, w);
        }
        let flags = x.classify();
        assert!(flags.priestley && flags.esakia && flags.order_zero_dimensional);
        assert!(flags.locally_esakia && flags.image_compact);
    }
}
