//! Acceptance gate: one test per criterion, each printing a pass line.
//! Everything here is exact — no tolerances.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ordcomp::compactify::{check_lift_properties, esakia_lemma_check, lift, theorem_suite};
use ordcomp::corpus;
use ordcomp::dlat::FinDLat;
use ordcomp::duality::{clopup_lattice, is_p_morphism, roundtrip_lattice, roundtrip_space};
use ordcomp::rings::SweepConfig;
use ordcomp::setalg::{Point, RSet};
use ordcomp::space::SpacePresentation;
use ordcomp::Error;

fn random_space(n: u32, rng: &mut ChaCha8Rng) -> SpacePresentation {
    let pairs = corpus::random_poset(n, rng);
    corpus::poset_space(n, &pairs)
}

#[test]
fn criterion_1_finite_duality_roundtrip() {
    // Exhaustive up to isomorphism on ≤ 4 points; 200 random posets on 5.
    let mut count = 0;
    for n in 0..=4 {
        for pairs in corpus::all_posets_up_to_iso(n) {
            let x = corpus::poset_space(n, &pairs);
            roundtrip_space(&x).expect("unit map must be an order-homeomorphism");
            let d = clopup_lattice(&x).unwrap().lattice;
            roundtrip_lattice(&d).expect("counit must be a lattice isomorphism");
            count += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..200 {
        let x = random_space(5, &mut rng);
        roundtrip_space(&x).expect("unit map must be an order-homeomorphism");
        let d = clopup_lattice(&x).unwrap().lattice;
        roundtrip_lattice(&d).expect("counit must be a lattice isomorphism");
        count += 1;
    }
    println!("criterion 1 (finite duality round trip, {count} instances): PASS");
}

#[test]
fn criterion_2_prime_filter_oracle_equivalence() {
    // Fixture lattices up to 20 elements.
    let mut fixtures: Vec<FinDLat> = (1..=8).map(FinDLat::chain).collect();
    fixtures.push(FinDLat::chain(20));
    for n in 0..=4 {
        for pairs in corpus::all_posets_up_to_iso(n) {
            let x = corpus::poset_space(n, &pairs);
            fixtures.push(clopup_lattice(&x).unwrap().lattice);
        }
    }
    let mut checked = 0;
    for d in &fixtures {
        assert!(d.len() <= 20, "fixture set stays within the subset cap");
        assert_eq!(d.prime_filters_bruteforce().unwrap(), d.prime_filters());
        checked += 1;
    }
    // 500 random upset lattices of posets on ≤ 6 points. Beyond 20 elements
    // the subset oracle refuses and the principal-filter oracle takes over.
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..500 {
        let n = rng.gen_range(1..=6);
        let x = random_space(n, &mut rng);
        let d = clopup_lattice(&x).unwrap().lattice;
        if d.len() <= 20 {
            assert_eq!(d.prime_filters_bruteforce().unwrap(), d.prime_filters());
        } else {
            assert!(matches!(
                d.prime_filters_bruteforce(),
                Err(Error::EnumerationCap { .. })
            ));
            assert_eq!(d.prime_filters_principal(), d.prime_filters());
        }
        checked += 1;
    }
    println!("criterion 2 (prime-filter oracle equivalence, {checked} lattices): PASS");
}

#[test]
fn criterion_3_heyting_implication_dual_route() {
    let mut spaces = Vec::new();
    for n in 0..=4 {
        for pairs in corpus::all_posets_up_to_iso(n) {
            spaces.push(corpus::poset_space(n, &pairs));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..15 {
        spaces.push(random_space(5, &mut rng));
        spaces.push(random_space(6, &mut rng));
    }
    let mut pairs_checked = 0usize;
    for x in &spaces {
        let clopup = clopup_lattice(x).unwrap();
        for a in 0..clopup.lattice.len() {
            for b in 0..clopup.lattice.len() {
                let alg = clopup
                    .lattice
                    .heyting_implication(a, b)
                    .expect("finite upset lattices have all implications");
                let spatial =
                    x.order().up_implication(&clopup.members[a], &clopup.members[b]);
                assert_eq!(clopup.members[alg], spatial, "dual routes must agree");
                pairs_checked += 1;
            }
        }
    }
    println!("criterion 3 (implication dual-route equality, {pairs_checked} pairs): PASS");
}

#[test]
fn criterion_5_theorem_suite_agreement() {
    let instances = corpus::builtin_suite(4);
    assert_eq!(instances.len(), 1 + 1 + 3 + 19 + 219 + 5);
    let report = theorem_suite(&instances, &SweepConfig::default()).unwrap();
    for row in &report.rows {
        assert!(
            row.agree,
            "{} / {}: lhs={} rhs={}",
            row.instance, row.property, row.lhs, row.rhs
        );
    }
    assert!(report.all_agree());
    println!(
        "criterion 5 (theorem suite, {} instances, {} rows): PASS",
        instances.len(),
        report.rows.len()
    );
}

#[test]
fn criterion_6_lift_correctness() {
    let mut shapes = Vec::new();
    for n in 0..=4 {
        shapes.extend(
            corpus::all_posets_up_to_iso(n).into_iter().map(|p| corpus::poset_space(n, &p)),
        );
    }
    let mut lifts = 0usize;
    for x in &shapes {
        for z in &shapes {
            for assignment in corpus::monotone_maps(x, z) {
                let f = corpus::map_from_indices(x, z, &assignment);
                // Route agreement, extension along the unit map, continuity
                // and order preservation are all asserted inside.
                let report = lift(&f).expect("lift must exist and be consistent");
                assert!(report.unique_verified, "competitor search must run");
                let props = check_lift_properties(&f, &report).unwrap();
                assert_eq!(props.difference_witness, None);
                if is_p_morphism(&f).unwrap().holds {
                    assert_eq!(props.p_morphism_witness, Some(None));
                }
                lifts += 1;
            }
        }
    }
    println!("criterion 6 (lift correctness, {lifts} maps): PASS");
}

#[test]
fn criterion_7_esakia_lemma() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut families = 0;
    while families < 1000 {
        let n = rng.gen_range(1..=7);
        let x = random_space(n, &mut rng);
        assert!(x.classify().esakia, "finite posets are Esakia spaces");
        // A common nonempty core keeps the family down-directed.
        let core: Vec<Point> = (0..n)
            .filter(|_| rng.gen_bool(0.4))
            .map(Point::Idx)
            .collect();
        let core = if core.is_empty() { vec![Point::Idx(rng.gen_range(0..n))] } else { core };
        let core_set = RSet::from_points(x.carrier(), core.clone()).unwrap();
        let mut family = vec![core_set.clone()];
        for _ in 0..rng.gen_range(1..4usize) {
            let extra: Vec<Point> =
                (0..n).filter(|_| rng.gen_bool(0.5)).map(Point::Idx).collect();
            let sup = core_set.union(&RSet::from_points(x.carrier(), extra).unwrap());
            family.push(sup);
        }
        assert_eq!(
            esakia_lemma_check(&x, &family).unwrap(),
            None,
            "↓⋂F must equal ⋂↓F"
        );
        families += 1;
    }
    println!("criterion 7 (Esakia lemma, {families} families): PASS");
}

#[test]
fn criterion_8_four_way_p_morphism_agreement() {
    // Exhaustive over all labelled posets on ≤ 3 points.
    let mut shapes = Vec::new();
    for n in 0..=3 {
        shapes
            .extend(corpus::all_posets(n).into_iter().map(|p| corpus::poset_space(n, &p)));
    }
    let mut maps = 0usize;
    for x in &shapes {
        for z in &shapes {
            for assignment in corpus::monotone_maps(x, z) {
                let f = corpus::map_from_indices(x, z, &assignment);
                // Route disagreement comes back as an internal error.
                is_p_morphism(&f).expect("the four characterizations must agree");
                maps += 1;
            }
        }
    }
    // Plus 1000 random monotone maps on up to 6 points.
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut random_maps = 0;
    while random_maps < 1000 {
        let nx = rng.gen_range(1..=6);
        let nz = rng.gen_range(1..=6);
        let x = random_space(nx, &mut rng);
        let z = random_space(nz, &mut rng);
        let assignment: Vec<u32> = (0..nx).map(|_| rng.gen_range(0..nz)).collect();
        let monotone = (0..nx as usize).all(|i| {
            (0..nx as usize).all(|j| {
                !x.order().leq(&Point::Idx(i as u32), &Point::Idx(j as u32)).unwrap()
                    || z
                        .order()
                        .leq(&Point::Idx(assignment[i]), &Point::Idx(assignment[j]))
                        .unwrap()
            })
        });
        if !monotone {
            continue;
        }
        let f = corpus::map_from_indices(&x, &z, &assignment);
        is_p_morphism(&f).expect("the four characterizations must agree");
        random_maps += 1;
    }
    println!(
        "criterion 8 (four-way p-morphism agreement, {} exhaustive + {random_maps} random maps): PASS",
        maps
    );
}
