//! Finite Priestley duality: prime-filter spectra, clopen-upset lattices,
//! round trips, and the four p-morphism characterizations.
//!
//! Maps between spaces are given pointwise on finite carriers, or per block
//! on tail carriers — each source block either maps elementwise into a
//! target block or collapses to a constant, with finitely many exceptions —
//! so images and preimages of representable sets stay representable.

use std::collections::{BTreeMap, BTreeSet};

use crate::dlat::{FinDLat, PrimeFilter};
use crate::setalg::{Carrier, CarrierKind, Point, RSet, SetError, Trace};
use crate::space::SpacePresentation;
use crate::{Error, Result};

const UPSET_ENUM_CAP: u32 = 22;

/// Where one source block goes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BlockTarget {
    /// n-th element of the source block maps to the n-th element of the
    /// named target block.
    Elementwise { block: String },
    Constant(Point),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockMap {
    pub target: BlockTarget,
    pub exceptions: BTreeMap<u64, Point>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MapGraph {
    Pointwise(BTreeMap<Point, Point>),
    BlockRule {
        blocks: BTreeMap<String, BlockMap>,
        named: BTreeMap<String, Point>,
    },
}

/// A total map between space presentations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpaceMap {
    source: SpacePresentation,
    target: SpacePresentation,
    graph: MapGraph,
}

impl SpaceMap {
    pub fn pointwise(
        source: SpacePresentation,
        target: SpacePresentation,
        graph: BTreeMap<Point, Point>,
    ) -> Result<SpaceMap> {
        let n = source
            .carrier()
            .size()
            .ok_or_else(|| Error::Precondition("pointwise maps need a finite source".into()))?;
        for i in 0..n {
            let p = Point::Idx(i);
            let q = graph
                .get(&p)
                .ok_or_else(|| Error::Precondition(format!("map not total at {p}")))?;
            if !target.carrier().contains(q) {
                return Err(Error::Set(SetError::UnknownPoint(q.to_string())));
            }
        }
        Ok(SpaceMap { source, target, graph: MapGraph::Pointwise(graph) })
    }

    pub fn block_rule(
        source: SpacePresentation,
        target: SpacePresentation,
        blocks: BTreeMap<String, BlockMap>,
        named: BTreeMap<String, Point>,
    ) -> Result<SpaceMap> {
        for b in source.carrier().blocks() {
            let rule = blocks
                .get(&b.name)
                .ok_or_else(|| Error::Precondition(format!("no rule for block {}", b.name)))?;
            match &rule.target {
                BlockTarget::Elementwise { block } => {
                    if target.carrier().block(block).is_none() {
                        return Err(Error::Set(SetError::UnknownBlock(block.clone())));
                    }
                }
                BlockTarget::Constant(p) => {
                    if !target.carrier().contains(p) {
                        return Err(Error::Set(SetError::UnknownPoint(p.to_string())));
                    }
                }
            }
            for q in rule.exceptions.values() {
                if !target.carrier().contains(q) {
                    return Err(Error::Set(SetError::UnknownPoint(q.to_string())));
                }
            }
        }
        for n in source.carrier().named_points() {
            let q = named
                .get(&n)
                .ok_or_else(|| Error::Precondition(format!("map not total at {n}")))?;
            if !target.carrier().contains(q) {
                return Err(Error::Set(SetError::UnknownPoint(q.to_string())));
            }
        }
        Ok(SpaceMap { source, target, graph: MapGraph::BlockRule { blocks, named } })
    }

    pub fn identity(space: &SpacePresentation) -> SpaceMap {
        match space.carrier().kind() {
            CarrierKind::Finite { size } => {
                let graph = (0..*size).map(|i| (Point::Idx(i), Point::Idx(i))).collect();
                SpaceMap::pointwise(space.clone(), space.clone(), graph).unwrap()
            }
            CarrierKind::Tail { blocks, .. } => {
                let rules = blocks
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
                let named = space
                    .carrier()
                    .named_points()
                    .into_iter()
                    .map(|n| (n.clone(), Point::Named(n)))
                    .collect();
                SpaceMap::block_rule(space.clone(), space.clone(), rules, named).unwrap()
            }
        }
    }

    pub fn source(&self) -> &SpacePresentation {
        &self.source
    }

    pub fn target(&self) -> &SpacePresentation {
        &self.target
    }

    pub fn graph(&self) -> &MapGraph {
        &self.graph
    }

    pub fn apply(&self, p: &Point) -> Point {
        assert!(self.source.carrier().contains(p), "point outside the source");
        match (&self.graph, p) {
            (MapGraph::Pointwise(g), _) => g[p].clone(),
            (MapGraph::BlockRule { blocks, .. }, Point::Elem(b, n)) => {
                let rule = &blocks[b];
                if let Some(q) = rule.exceptions.get(n) {
                    return q.clone();
                }
                match &rule.target {
                    BlockTarget::Elementwise { block } => Point::Elem(block.clone(), *n),
                    BlockTarget::Constant(q) => q.clone(),
                }
            }
            (MapGraph::BlockRule { named, .. }, Point::Named(n)) => named[n].clone(),
            _ => unreachable!("graph shape matches carrier shape"),
        }
    }

    /// Forward image of a representable set.
    pub fn image(&self, s: &RSet) -> RSet {
        assert!(s.carrier() == self.source.carrier(), "carrier mismatch");
        let tc = self.target.carrier();
        match &self.graph {
            MapGraph::Pointwise(_) => {
                let pts = s.enumerate_finite().expect("finite carrier");
                RSet::from_points(tc, pts.iter().map(|p| self.apply(p))).unwrap()
            }
            MapGraph::BlockRule { blocks, .. } => {
                let mut out = RSet::empty(tc);
                for b in self.source.carrier().blocks() {
                    let tr = s.trace(&b.name).unwrap();
                    let rule = &blocks[&b.name];
                    let keys: BTreeSet<u64> = rule.exceptions.keys().copied().collect();
                    let mut extra: Vec<Point> = Vec::new();
                    for (n, q) in &rule.exceptions {
                        if tr.contains(*n) {
                            extra.push(q.clone());
                        }
                    }
                    match (&rule.target, tr) {
                        (BlockTarget::Elementwise { block }, Trace::Fin(m)) => {
                            extra.extend(
                                m.iter()
                                    .filter(|n| !keys.contains(n))
                                    .map(|n| Point::Elem(block.clone(), *n)),
                            );
                        }
                        (BlockTarget::Elementwise { block }, Trace::Cof(e)) => {
                            let exc: BTreeSet<u64> = e.union(&keys).copied().collect();
                            out =
                                out.union(&RSet::build(tc).block_cof(block, exc).finish());
                        }
                        (BlockTarget::Constant(q), tr) => {
                            let hit = match tr {
                                Trace::Fin(m) => m.iter().any(|n| !keys.contains(n)),
                                Trace::Cof(_) => true,
                            };
                            if hit {
                                extra.push(q.clone());
                            }
                        }
                    }
                    out = out.union(&RSet::from_points(tc, extra).unwrap());
                }
                if let Some(named) = s.named_members() {
                    let pts: Vec<Point> =
                        named.iter().map(|n| self.apply(&Point::Named(n.clone()))).collect();
                    out = out.union(&RSet::from_points(tc, pts).unwrap());
                }
                out
            }
        }
    }

    /// Preimage of a representable set; stays representable by the shape of
    /// the block rules.
    pub fn preimage(&self, t: &RSet) -> RSet {
        assert!(t.carrier() == self.target.carrier(), "carrier mismatch");
        let sc = self.source.carrier();
        match &self.graph {
            MapGraph::Pointwise(g) => RSet::from_points(
                sc,
                g.iter().filter(|(_, q)| t.contains(q)).map(|(p, _)| p.clone()),
            )
            .unwrap(),
            MapGraph::BlockRule { blocks, named } => {
                let mut out = RSet::empty(sc);
                for b in sc.blocks() {
                    let rule = &blocks[&b.name];
                    let keys: BTreeSet<u64> = rule.exceptions.keys().copied().collect();
                    let hit_exceptions: BTreeSet<u64> = rule
                        .exceptions
                        .iter()
                        .filter(|(_, q)| t.contains(q))
                        .map(|(n, _)| *n)
                        .collect();
                    let tr = match &rule.target {
                        BlockTarget::Elementwise { block } => match t.trace(block).unwrap() {
                            Trace::Fin(m) => {
                                let mut members: BTreeSet<u64> =
                                    m.iter().filter(|n| !keys.contains(n)).copied().collect();
                                members.extend(&hit_exceptions);
                                Trace::Fin(members)
                            }
                            Trace::Cof(e) => {
                                let mut exc: BTreeSet<u64> = e.union(&keys).copied().collect();
                                for n in &hit_exceptions {
                                    exc.remove(n);
                                }
                                Trace::Cof(exc)
                            }
                        },
                        BlockTarget::Constant(q) => {
                            if t.contains(q) {
                                let mut exc = keys.clone();
                                for n in &hit_exceptions {
                                    exc.remove(n);
                                }
                                Trace::Cof(exc)
                            } else {
                                Trace::Fin(hit_exceptions.clone())
                            }
                        }
                    };
                    let part = match tr {
                        Trace::Fin(m) => RSet::build(sc).block_fin(&b.name, m).finish(),
                        Trace::Cof(e) => RSet::build(sc).block_cof(&b.name, e).finish(),
                    };
                    out = out.union(&part);
                }
                let pts: Vec<Point> = named
                    .iter()
                    .filter(|(_, q)| t.contains(q))
                    .map(|(n, _)| Point::Named(n.clone()))
                    .collect();
                out.union(&RSet::from_points(sc, pts).unwrap())
            }
        }
    }

    /// Extra support sets that representative enumeration should see: the
    /// exception indices of the block rules.
    pub fn rep_extras(&self) -> Vec<RSet> {
        match &self.graph {
            MapGraph::Pointwise(_) => Vec::new(),
            MapGraph::BlockRule { blocks, .. } => blocks
                .iter()
                .filter(|(_, r)| !r.exceptions.is_empty())
                .map(|(b, r)| {
                    RSet::build(self.source.carrier())
                        .block_fin(b, r.exceptions.keys().copied())
                        .finish()
                })
                .collect(),
        }
    }

    pub fn source_representatives(&self) -> Vec<Point> {
        let extras = self.rep_extras();
        let refs: Vec<&RSet> = extras.iter().collect();
        self.source.representatives(&refs)
    }

    pub fn target_representatives(&self) -> Vec<Point> {
        let img = self.image(&RSet::full(self.source.carrier()));
        self.target.representatives(&[&img])
    }

    pub fn is_injective_on_representatives(&self) -> bool {
        let reps = self.source_representatives();
        let mut seen = BTreeSet::new();
        reps.iter().all(|p| seen.insert(self.apply(p)))
    }

    pub fn is_order_preserving(&self) -> bool {
        let reps = self.source_representatives();
        reps.iter().all(|x| {
            reps.iter().all(|y| {
                !self.source.order().le(x, y)
                    || self.target.order().le(&self.apply(x), &self.apply(y))
            })
        })
    }

    /// Preimages of the target's clopen generators must be clopen.
    pub fn is_continuous(&self) -> bool {
        let img = self.image(&RSet::full(self.source.carrier()));
        self.target
            .clopen_generators(&[&img])
            .iter()
            .all(|g| self.preimage(g).is_clopen())
    }
}

/// The prime-filter spectrum of a finite distributive lattice, with the
/// lattice embedding a ↦ φ(a) = {P : a ∈ P}.
#[derive(Debug, Clone)]
pub struct SpecSpace {
    pub space: SpacePresentation,
    pub filters: Vec<PrimeFilter>,
    pub phi: Vec<RSet>,
}

pub fn spec_space(d: &FinDLat) -> SpecSpace {
    let filters = d.prime_filters();
    let n = filters.len() as u32;
    let carrier = Carrier::finite(n);
    let mut rects = Vec::new();
    for (i, p) in filters.iter().enumerate() {
        for (j, q) in filters.iter().enumerate() {
            if i != j && p.is_subset(q) {
                rects.push((
                    RSet::singleton(&carrier, &Point::Idx(i as u32)).unwrap(),
                    RSet::singleton(&carrier, &Point::Idx(j as u32)).unwrap(),
                ));
            }
        }
    }
    let space =
        SpacePresentation::new(&carrier, rects).expect("filter inclusion is a partial order");
    let phi = (0..d.len())
        .map(|a| {
            RSet::from_points(
                &carrier,
                filters
                    .iter()
                    .enumerate()
                    .filter(|(_, p)| p.contains(&a))
                    .map(|(i, _)| Point::Idx(i as u32)),
            )
            .unwrap()
        })
        .collect();
    SpecSpace { space, filters, phi }
}

/// The lattice of clopen upsets of a finite space, with its members.
#[derive(Debug, Clone)]
pub struct ClopUp {
    pub lattice: FinDLat,
    pub members: Vec<RSet>,
}

impl ClopUp {
    pub fn index_of(&self, s: &RSet) -> Option<usize> {
        self.members.iter().position(|m| m == s)
    }
}

fn upset_id(s: &RSet) -> String {
    let pts = s.enumerate_finite().expect("finite member");
    let names: Vec<String> = pts.iter().map(|p| p.to_string()).collect();
    format!("{{{}}}", names.join(","))
}

/// Enumerates the clopen upsets of a finite space (all upsets, since finite
/// carriers are discrete).
pub fn clopup_lattice(x: &SpacePresentation) -> Result<ClopUp> {
    let n = x.carrier().size().ok_or(Error::InfiniteSpace)?;
    if n > UPSET_ENUM_CAP {
        return Err(Error::EnumerationCap {
            what: "upset enumeration",
            size: n as usize,
            cap: UPSET_ENUM_CAP as usize,
        });
    }
    let mut masks: Vec<u32> = Vec::new();
    for mask in 0u32..(1u32 << n) {
        let ok = (0..n).all(|i| {
            mask >> i & 1 == 0
                || (0..n)
                    .all(|j| !x.order().le(&Point::Idx(i), &Point::Idx(j)) || mask >> j & 1 == 1)
        });
        if ok {
            masks.push(mask);
        }
    }
    masks.sort_by_key(|m| (m.count_ones(), *m));
    let members: Vec<RSet> = masks
        .iter()
        .map(|mask| {
            RSet::from_points(x.carrier(), (0..n).filter(|i| mask >> i & 1 == 1).map(Point::Idx))
                .unwrap()
        })
        .collect();
    let ids = members.iter().map(upset_id).collect();
    let lattice = FinDLat::from_leq_fn(ids, |a, b| members[a].subset_of(&members[b]))
        .expect("upsets form a distributive lattice");
    Ok(ClopUp { lattice, members })
}

/// e : X → Spec(ClopUp(X)), e(x) = {U : x ∈ U}; verified to be an
/// order-homeomorphism on finite spaces.
pub fn roundtrip_space(x: &SpacePresentation) -> Result<SpaceMap> {
    let n = x.carrier().size().ok_or(Error::InfiniteSpace)?;
    let clopup = clopup_lattice(x)?;
    let spec = spec_space(&clopup.lattice);
    let mut graph = BTreeMap::new();
    for i in 0..n {
        let p = Point::Idx(i);
        let filter: PrimeFilter = (0..clopup.members.len())
            .filter(|&a| clopup.members[a].contains(&p))
            .collect();
        let idx = spec
            .filters
            .iter()
            .position(|f| *f == filter)
            .ok_or_else(|| Error::Internal(format!("e({p}) is not a prime filter")))?;
        graph.insert(p, Point::Idx(idx as u32));
    }
    let e = SpaceMap::pointwise(x.clone(), spec.space.clone(), graph)?;
    if spec.filters.len() != n as usize {
        return Err(Error::Internal("spectrum has the wrong size".into()));
    }
    let mut seen = BTreeSet::new();
    for i in 0..n {
        seen.insert(e.apply(&Point::Idx(i)));
    }
    if seen.len() != n as usize {
        return Err(Error::Internal("unit map is not injective".into()));
    }
    for i in 0..n {
        for j in 0..n {
            let (p, q) = (Point::Idx(i), Point::Idx(j));
            let fwd = x.order().le(&p, &q);
            let back = spec.space.order().le(&e.apply(&p), &e.apply(&q));
            if fwd != back {
                return Err(Error::Internal(format!(
                    "unit map is not an order-embedding at ({p},{q})"
                )));
            }
        }
    }
    Ok(e)
}

/// a ↦ φ(a) : D → ClopUp(Spec(D)); verified to be a lattice isomorphism.
pub fn roundtrip_lattice(d: &FinDLat) -> Result<Vec<usize>> {
    let spec = spec_space(d);
    let clopup = clopup_lattice(&spec.space)?;
    let mut map = Vec::with_capacity(d.len());
    for a in 0..d.len() {
        let idx = clopup
            .index_of(&spec.phi[a])
            .ok_or_else(|| Error::Internal(format!("φ({}) is not clopen-up", d.id(a))))?;
        map.push(idx);
    }
    if clopup.lattice.len() != d.len() {
        return Err(Error::Internal("dual lattice has the wrong size".into()));
    }
    let mut seen = BTreeSet::new();
    for &m in &map {
        seen.insert(m);
    }
    if seen.len() != d.len() {
        return Err(Error::Internal("φ is not injective".into()));
    }
    for a in 0..d.len() {
        for b in 0..d.len() {
            if d.le(a, b) != clopup.lattice.le(map[a], map[b]) {
                return Err(Error::Internal("φ does not reflect the order".into()));
            }
        }
    }
    Ok(map)
}

/// Verdict of the p-morphism check, with a witness pair on failure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PMorphismOutcome {
    pub holds: bool,
    pub witness: Option<(Point, Point)>,
}

/// Evaluates the four characterizations of a p-morphism on representatives
/// and requires them to agree: the zig-zag condition, images of upsets are
/// upsets, ↑f(x) ⊆ f[↑x], and f⁻¹[↓y] ⊆ ↓f⁻¹[y].
pub fn is_p_morphism(f: &SpaceMap) -> Result<PMorphismOutcome> {
    if !f.is_order_preserving() {
        return Err(Error::Precondition(
            "p-morphism check needs an order-preserving map".into(),
        ));
    }
    let src = f.source_representatives();
    let tgt = f.target_representatives();
    let sord = f.source().order();
    let tord = f.target().order();

    let zigzag = src.iter().find_map(|x| {
        let fx = f.apply(x);
        tgt.iter()
            .find(|y| {
                tord.le(&fx, y) && !src.iter().any(|x2| sord.le(x, x2) && f.apply(x2) == **y)
            })
            .map(|y| (x.clone(), y.clone()))
    });

    let image_upsets = src.iter().find_map(|x| {
        let img = f.image(&sord.upclose_point(x));
        tord.upclose(&img).difference(&img).pick().map(|y| (x.clone(), y))
    });

    let up_inclusion = src.iter().find_map(|x| {
        let img = f.image(&sord.upclose_point(x));
        tord.upclose_point(&f.apply(x)).difference(&img).pick().map(|y| (x.clone(), y))
    });

    let down_preimage = tgt.iter().find_map(|y| {
        let sy = RSet::singleton(f.target().carrier(), y).unwrap();
        let lhs = f.preimage(&tord.downclose(&sy));
        let rhs = sord.downclose(&f.preimage(&sy));
        lhs.difference(&rhs).pick().map(|x| (x, y.clone()))
    });

    let verdicts = [
        zigzag.is_none(),
        image_upsets.is_none(),
        up_inclusion.is_none(),
        down_preimage.is_none(),
    ];
    if verdicts.iter().any(|v| *v != verdicts[0]) {
        return Err(Error::Internal(format!("p-morphism routes disagree: {verdicts:?}")));
    }
    let witness = zigzag.or(image_upsets).or(up_inclusion).or(down_preimage);
    Ok(PMorphismOutcome { holds: verdicts[0], witness })
}

/// The dual lattice homomorphism of a map between finite spaces, with the
/// duality-theoretic biconditionals evaluated on both sides.
#[derive(Debug, Clone)]
pub struct DualMapReport {
    pub clopup_source: ClopUp,
    pub clopup_target: ClopUp,
    /// hom : ClopUp(target) → ClopUp(source), U ↦ f⁻¹[U].
    pub hom: Vec<usize>,
    pub p_morphism: bool,
    pub heyting_hom: bool,
    pub hom_injective: bool,
    pub map_surjective: bool,
}

/// Builds f⁻¹ : ClopUp(Y) → ClopUp(X) for a map between finite spaces and
/// asserts (f is a p-morphism) ⟺ (f⁻¹ is a Heyting homomorphism) and
/// (f⁻¹ injective) ⟺ (f surjective).
pub fn dual_of_map(f: &SpaceMap) -> Result<DualMapReport> {
    if !f.source().is_finite() || !f.target().is_finite() {
        return Err(Error::InfiniteSpace);
    }
    if !f.is_order_preserving() {
        return Err(Error::Precondition("dual map needs an order-preserving map".into()));
    }
    let clopup_source = clopup_lattice(f.source())?;
    let clopup_target = clopup_lattice(f.target())?;
    let mut hom = Vec::with_capacity(clopup_target.members.len());
    for u in &clopup_target.members {
        let pre = f.preimage(u);
        let idx = clopup_source
            .index_of(&pre)
            .ok_or_else(|| Error::Internal("preimage of an upset must be an upset".into()))?;
        hom.push(idx);
    }
    if clopup_target.lattice.check_lattice_hom(&clopup_source.lattice, &hom).is_some() {
        return Err(Error::Internal("f⁻¹ must be a lattice homomorphism".into()));
    }
    let p_morphism = is_p_morphism(f)?.holds;
    let heyting_hom =
        clopup_target.lattice.check_heyting_hom(&clopup_source.lattice, &hom).is_none();
    if p_morphism != heyting_hom {
        return Err(Error::Internal(
            "p-morphism and Heyting-homomorphism verdicts disagree".into(),
        ));
    }
    let hom_injective = {
        let mut seen = BTreeSet::new();
        hom.iter().all(|h| seen.insert(*h))
    };
    let n = f.target().carrier().size().unwrap();
    let m = f.source().carrier().size().unwrap();
    let image: BTreeSet<Point> = (0..m).map(|i| f.apply(&Point::Idx(i))).collect();
    let map_surjective = (0..n).all(|i| image.contains(&Point::Idx(i)));
    if hom_injective != map_surjective {
        return Err(Error::Internal(
            "injectivity of the dual and surjectivity of the map disagree".into(),
        ));
    }
    Ok(DualMapReport {
        clopup_source,
        clopup_target,
        hom,
        p_morphism,
        heyting_hom,
        hom_injective,
        map_surjective,
    })
}
