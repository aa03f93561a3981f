//! Instance generators: labelled poset enumeration, seeded random posets
//! and maps, and the built-in suite corpus (every finite poset on up to
//! four points with its spectrum pair, plus five presented infinite pairs).

use std::collections::BTreeMap;

use rand::Rng;

use crate::compactify::{eta0_finite, CompactificationPair, SuiteInstance};
use crate::duality::{BlockMap, BlockTarget, SpaceMap};
use crate::setalg::{BlockSpec, Carrier, Point, RSet};
use crate::space::SpacePresentation;

/// Builds a finite space from strict order pairs (i, j) meaning i < j.
/// Validation computes the transitive closure, so generators suffice.
pub fn poset_space(n: u32, pairs: &[(u32, u32)]) -> SpacePresentation {
    let c = Carrier::finite(n);
    let rects = pairs
        .iter()
        .map(|(i, j)| {
            (
                RSet::singleton(&c, &Point::Idx(*i)).unwrap(),
                RSet::singleton(&c, &Point::Idx(*j)).unwrap(),
            )
        })
        .collect();
    SpacePresentation::new(&c, rects).expect("input must be a poset")
}

/// Every labelled poset on n points, as lists of strict pairs.
pub fn all_posets(n: u32) -> Vec<Vec<(u32, u32)>> {
    let slots: Vec<(u32, u32)> =
        (0..n).flat_map(|i| (0..n).filter(move |j| *j != i).map(move |j| (i, j))).collect();
    let mut out = Vec::new();
    'mask: for mask in 0u64..(1u64 << slots.len()) {
        let mut rel = vec![vec![false; n as usize]; n as usize];
        for (k, (i, j)) in slots.iter().enumerate() {
            if mask >> k & 1 == 1 {
                rel[*i as usize][*j as usize] = true;
            }
        }
        for i in 0..n as usize {
            for j in 0..n as usize {
                if i != j && rel[i][j] && rel[j][i] {
                    continue 'mask;
                }
                if rel[i][j] {
                    for k in 0..n as usize {
                        if rel[j][k] && !rel[i][k] && i != k {
                            continue 'mask;
                        }
                        if rel[j][k] && i == k {
                            continue 'mask;
                        }
                    }
                }
            }
        }
        out.push(
            slots
                .iter()
                .enumerate()
                .filter(|(k, _)| mask >> k & 1 == 1)
                .map(|(_, p)| *p)
                .collect(),
        );
    }
    out
}

/// Representatives of the isomorphism classes, by canonical relabelling.
pub fn all_posets_up_to_iso(n: u32) -> Vec<Vec<(u32, u32)>> {
    let mut canon_seen = Vec::new();
    let mut out = Vec::new();
    for pairs in all_posets(n) {
        let canon = canonical_form(n, &pairs);
        if !canon_seen.contains(&canon) {
            canon_seen.push(canon);
            out.push(pairs);
        }
    }
    out
}

fn canonical_form(n: u32, pairs: &[(u32, u32)]) -> u64 {
    let mut best = u64::MAX;
    let mut perm: Vec<u32> = (0..n).collect();
    permute(&mut perm, 0, &mut |p| {
        let mut mask = 0u64;
        for (i, j) in pairs {
            let (a, b) = (p[*i as usize], p[*j as usize]);
            mask |= 1 << (a * n + b);
        }
        if mask < best {
            best = mask;
        }
    });
    best
}

fn permute(items: &mut Vec<u32>, k: usize, f: &mut impl FnMut(&[u32])) {
    if k == items.len() {
        f(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, f);
        items.swap(k, i);
    }
}

/// A random poset: random edges over a random linear layout, transitively
/// closed by validation.
pub fn random_poset(n: u32, rng: &mut impl Rng) -> Vec<(u32, u32)> {
    let mut layout: Vec<u32> = (0..n).collect();
    for i in (1..layout.len()).rev() {
        let j = rng.gen_range(0..=i);
        layout.swap(i, j);
    }
    let mut pairs = Vec::new();
    for i in 0..n as usize {
        for j in (i + 1)..n as usize {
            if rng.gen_bool(0.35) {
                pairs.push((layout[i], layout[j]));
            }
        }
    }
    pairs
}

/// All monotone maps between two finite spaces, as target-index vectors.
pub fn monotone_maps(x: &SpacePresentation, z: &SpacePresentation) -> Vec<Vec<u32>> {
    let nx = x.carrier().size().expect("finite source") as usize;
    let nz = z.carrier().size().expect("finite target");
    if nx == 0 {
        return vec![vec![]];
    }
    if nz == 0 {
        return vec![];
    }
    let mut out = Vec::new();
    let mut assignment = vec![0u32; nx];
    loop {
        let monotone = (0..nx).all(|i| {
            (0..nx).all(|j| {
                !x.order().le(&Point::Idx(i as u32), &Point::Idx(j as u32))
                    || z.order().le(&Point::Idx(assignment[i]), &Point::Idx(assignment[j]))
            })
        });
        if monotone {
            out.push(assignment.clone());
        }
        let mut k = 0;
        loop {
            if k == nx {
                return out;
            }
            assignment[k] += 1;
            if assignment[k] < nz {
                break;
            }
            assignment[k] = 0;
            k += 1;
        }
    }
}

pub fn map_from_indices(
    x: &SpacePresentation,
    z: &SpacePresentation,
    assignment: &[u32],
) -> SpaceMap {
    let graph: BTreeMap<Point, Point> = assignment
        .iter()
        .enumerate()
        .map(|(i, t)| (Point::Idx(i as u32), Point::Idx(*t)))
        .collect();
    SpaceMap::pointwise(x.clone(), z.clone(), graph).expect("total by construction")
}

// ----- presented infinite spaces and pairs -----

fn one_block(limit: Option<&str>) -> std::sync::Arc<Carrier> {
    Carrier::tail(
        vec![BlockSpec { name: "N".into(), limit: limit.map(String::from) }],
        vec![],
    )
    .unwrap()
}

fn two_blocks(lp: Option<&str>, lq: Option<&str>) -> std::sync::Arc<Carrier> {
    Carrier::tail(
        vec![
            BlockSpec { name: "P".into(), limit: lp.map(String::from) },
            BlockSpec { name: "Q".into(), limit: lq.map(String::from) },
        ],
        vec![],
    )
    .unwrap()
}

/// The discrete countable space with the trivial order.
pub fn discrete_countable() -> SpacePresentation {
    SpacePresentation::discrete(&one_block(None))
}

/// The one-point compactification of the discrete countable space, ordered
/// so that every point sits below the limit.
pub fn one_point_flower() -> SpacePresentation {
    let c = one_block(Some("inf"));
    let block = RSet::build(&c).block_cof("N", []).finish();
    let inf = RSet::build(&c).named(["inf"]).finish();
    SpacePresentation::new(&c, vec![(block, inf)]).unwrap()
}

fn elementwise(
    x: &SpacePresentation,
    y: &SpacePresentation,
    named: &[(&str, &str)],
) -> SpaceMap {
    let rules: BTreeMap<String, BlockMap> = x
        .carrier()
        .blocks()
        .iter()
        .map(|b| {
            (
                b.name.clone(),
                BlockMap {
                    target: BlockTarget::Elementwise { block: b.name.clone() },
                    exceptions: BTreeMap::new(),
                },
            )
        })
        .collect();
    let named = named
        .iter()
        .map(|(a, b)| (a.to_string(), Point::Named(b.to_string())))
        .collect();
    SpaceMap::block_rule(x.clone(), y.clone(), rules, named).unwrap()
}

/// Heyting but not Esakia: the discrete countable space inside its
/// one-point compactification with the flower order.
pub fn flower_pair() -> CompactificationPair {
    let x = discrete_countable();
    let y = one_point_flower();
    CompactificationPair::new(elementwise(&x, &y, &[])).unwrap()
}

/// The identity pair on the flower space.
pub fn flower_identity_pair() -> CompactificationPair {
    let y = one_point_flower();
    CompactificationPair::new(SpaceMap::identity(&y)).unwrap()
}

/// Two discrete blocks, one entirely below the other; the target adds both
/// limits and closes the order. An Esakia order-compactification in which
/// the base is not an upset (upsets of base points are not compact).
pub fn two_level_pair() -> CompactificationPair {
    let cx = two_blocks(None, None);
    let p = RSet::build(&cx).block_cof("P", []).finish();
    let q = RSet::build(&cx).block_cof("Q", []).finish();
    let x = SpacePresentation::new(&cx, vec![(p, q)]).unwrap();

    let cy = two_blocks(Some("lp"), Some("lq"));
    let pl = RSet::build(&cy).block_cof("P", []).named(["lp"]).finish();
    let ql = RSet::build(&cy).block_cof("Q", []).named(["lq"]).finish();
    let y = SpacePresentation::new(&cy, vec![(pl, ql)]).unwrap();
    CompactificationPair::new(elementwise(&x, &y, &[])).unwrap()
}

/// Like `two_level_pair` but the base keeps the upper limit, making it an
/// upset of the target: the compactification only completes the lower
/// block.
pub fn upper_level_pair() -> CompactificationPair {
    let cx = two_blocks(None, Some("lq"));
    let p = RSet::build(&cx).block_cof("P", []).finish();
    let ql = RSet::build(&cx).block_cof("Q", []).named(["lq"]).finish();
    let x = SpacePresentation::new(&cx, vec![(p, ql)]).unwrap();

    let cy = two_blocks(Some("lp"), Some("lq"));
    let pl = RSet::build(&cy).block_cof("P", []).named(["lp"]).finish();
    let ql2 = RSet::build(&cy).block_cof("Q", []).named(["lq"]).finish();
    let y = SpacePresentation::new(&cy, vec![(pl, ql2)]).unwrap();
    CompactificationPair::new(elementwise(&x, &y, &[("lq", "lq")])).unwrap()
}

/// A Priestley order-compactification that is not Heyting: two discrete
/// blocks compactified so that one limit lands strictly below a single
/// element of the other block, which kills order continuity in the target.
pub fn tangled_limit_pair() -> CompactificationPair {
    let cx = two_blocks(None, None);
    let x = SpacePresentation::discrete(&cx);

    let cy = two_blocks(Some("lp"), Some("lq"));
    let lp = RSet::build(&cy).named(["lp"]).finish();
    let q0 = RSet::build(&cy).block_fin("Q", [0]).finish();
    let y = SpacePresentation::new(&cy, vec![(lp, q0)]).unwrap();
    CompactificationPair::new(elementwise(&x, &y, &[])).unwrap()
}

/// The five presented infinite pairs of the built-in corpus.
pub fn infinite_pairs() -> Vec<SuiteInstance> {
    vec![
        SuiteInstance { label: "flower".into(), pair: flower_pair() },
        SuiteInstance { label: "flower_identity".into(), pair: flower_identity_pair() },
        SuiteInstance { label: "two_level".into(), pair: two_level_pair() },
        SuiteInstance { label: "upper_level".into(), pair: upper_level_pair() },
        SuiteInstance { label: "tangled_limit".into(), pair: tangled_limit_pair() },
    ]
}

/// The built-in corpus: every labelled poset on at most `max_n` points with
/// its spectrum pair, plus the presented infinite pairs.
pub fn builtin_suite(max_n: u32) -> Vec<SuiteInstance> {
    let mut out = Vec::new();
    for n in 0..=max_n {
        for (i, pairs) in all_posets(n).into_iter().enumerate() {
            let x = poset_space(n, &pairs);
            let pair = eta0_finite(&x).expect("finite posets compactify");
            out.push(SuiteInstance { label: format!("poset_n{n}_{i}"), pair });
        }
    }
    out.extend(infinite_pairs());
    out
}
