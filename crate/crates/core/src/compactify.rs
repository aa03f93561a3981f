//! Compactification pairs and their classification, the finite largest
//! Priestley order-compactification, compactifications from explicit bases,
//! comparison maps, the explicit lift with its two computation routes,
//! Esakia's lemma, and the theorem-verification suite.

use std::collections::BTreeMap;

use crate::dlat::PrimeFilter;
use crate::duality::{
    clopup_lattice, is_p_morphism, spec_space, ClopUp, SpaceMap, SpecSpace,
};
use crate::rings::{check_n_basis, RingImplication, SweepConfig, UpsetRing};
use crate::setalg::{Point, RSet};
use crate::space::SpacePresentation;
use crate::{Error, Result, Verdict};

/// A candidate order-compactification: spaces X, Y and a map e : X → Y.
/// Construction only checks injectivity on representatives; everything else
/// is classification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompactificationPair {
    e: SpaceMap,
}

impl CompactificationPair {
    pub fn new(e: SpaceMap) -> Result<CompactificationPair> {
        if !e.is_injective_on_representatives() {
            return Err(Error::Precondition("embedding must be injective".into()));
        }
        Ok(CompactificationPair { e })
    }

    pub fn x(&self) -> &SpacePresentation {
        self.e.source()
    }

    pub fn y(&self) -> &SpacePresentation {
        self.e.target()
    }

    pub fn e(&self) -> &SpaceMap {
        &self.e
    }
}

/// Classification flags of a pair, with witnesses where checks fail.
#[derive(Debug, Clone)]
pub struct PairClassification {
    pub order_compactification: bool,
    /// Names of the order-compactification sub-checks that failed.
    pub failures: Vec<String>,
    pub priestley: bool,
    pub heyting: bool,
    pub esakia: bool,
    /// A base point whose upset is not dense in its target upset.
    pub esakia_witness: Option<Point>,
    pub n_order: Verdict<(RSet, RSet)>,
    pub x_upset_of_y: bool,
}

/// Order-compactification sub-checks: order-embedding, topological
/// embedding, density, and the target being compact with a closed order.
fn order_compactification_failures(pair: &CompactificationPair) -> Vec<String> {
    let e = pair.e();
    let x = pair.x();
    let y = pair.y();
    let mut failures = Vec::new();

    let reps = e.source_representatives();
    'emb: for a in &reps {
        for b in &reps {
            if x.order().le(a, b) != y.order().le(&e.apply(a), &e.apply(b)) {
                failures.push(format!("order-embedding fails at ({a},{b})"));
                break 'emb;
            }
        }
    }

    if !e.is_continuous() {
        failures.push("embedding is not continuous".into());
    }

    // Relative openness: each clopen generator G of X must be the trace of
    // an open subset of Y, i.e. e[G] ⊆ int(Y \ e[X \ G]).
    let extras = e.rep_extras();
    let refs: Vec<&RSet> = extras.iter().collect();
    let full_x = RSet::full(x.carrier());
    for g in x.clopen_generators(&refs) {
        let img = e.image(&g);
        let blocked = e.image(&full_x.difference(&g));
        if !img.subset_of(&blocked.complement().interior()) {
            failures.push("image of a clopen is not relatively open".into());
            break;
        }
    }

    match e.image(&full_x).dense_in(&RSet::full(y.carrier())) {
        Ok(None) => {}
        Ok(Some(w)) => failures.push(format!("image is not dense: {w} is missed")),
        Err(err) => failures.push(format!("density check failed: {err}")),
    }

    if !y.carrier().is_compact() {
        failures.push("target is not compact".into());
    }

    // Closed order: the closure of each rectangle stays inside ≤.
    'closed: for r in y.order().rectangles() {
        let lo = r.lower.closure();
        let hi = r.upper.closure();
        let reps = y.representatives(&[&lo, &hi]);
        for p in reps.iter().filter(|p| lo.contains(p)) {
            for q in reps.iter().filter(|q| hi.contains(q)) {
                if !y.order().le(p, q) {
                    failures.push(format!("order is not closed at ({p},{q})"));
                    break 'closed;
                }
            }
        }
    }
    failures
}

/// Full classification of a pair.
pub fn classify_pair(
    pair: &CompactificationPair,
    cfg: &SweepConfig,
) -> Result<PairClassification> {
    let failures = order_compactification_failures(pair);
    let order_compactification = failures.is_empty();
    let yflags = pair.y().classify();
    let priestley = order_compactification && yflags.priestley;
    let heyting = priestley && yflags.esakia;

    let mut esakia_witness = None;
    if heyting {
        for p in pair.e().source_representatives() {
            let up_x = pair.x().order().upclose_point(&p);
            let up_y = pair.y().order().upclose_point(&pair.e().apply(&p));
            match pair.e().image(&up_x).dense_in(&up_y) {
                Ok(None) => {}
                Ok(Some(_)) => {
                    esakia_witness = Some(p);
                    break;
                }
                Err(err) => return Err(Error::Internal(format!("density precondition: {err}"))),
            }
        }
    }
    let esakia = heyting && esakia_witness.is_none();

    let n_basis = check_n_basis(pair, cfg)?;
    let n_order = if pair.y().is_finite() {
        let direct = n_order_direct_finite(pair);
        if direct.holds() != n_basis.holds() {
            return Err(Error::Internal(
                "N-basis route and direct order-closure route disagree".into(),
            ));
        }
        direct
    } else {
        n_basis
    };

    let img = pair.e().image(&RSet::full(pair.x().carrier()));
    let x_upset_of_y = pair.y().order().upclose(&img) == img;

    Ok(PairClassification {
        order_compactification,
        failures,
        priestley,
        heyting,
        esakia,
        esakia_witness,
        n_order,
        x_upset_of_y,
    })
}

/// On a finite target the closure of the embedded order is itself, so the
/// pair is an N-order-compactification iff ≤ on Y is the reflexive image
/// of ≤ on X.
fn n_order_direct_finite(pair: &CompactificationPair) -> Verdict<(RSet, RSet)> {
    let nx = pair.x().carrier().size().expect("finite target forces finite source");
    let ny = pair.y().carrier().size().unwrap();
    let xpts: Vec<Point> = (0..nx).map(Point::Idx).collect();
    for i in 0..ny {
        for j in 0..ny {
            let (p, q) = (Point::Idx(i), Point::Idx(j));
            if p == q || !pair.y().order().le(&p, &q) {
                continue;
            }
            let witnessed = xpts.iter().any(|a| {
                pair.e().apply(a) == p
                    && xpts
                        .iter()
                        .any(|b| pair.e().apply(b) == q && pair.x().order().le(a, b))
            });
            if !witnessed {
                return Verdict::Counterexample((
                    RSet::singleton(pair.y().carrier(), &p).unwrap(),
                    RSet::singleton(pair.y().carrier(), &q).unwrap(),
                ));
            }
        }
    }
    Verdict::OkExhaustive
}

/// The spectrum construction of a finite space together with the unit map,
/// keeping the intermediate data for the lift machinery.
pub struct Eta0 {
    pub pair: CompactificationPair,
    pub clopup: ClopUp,
    pub spec: SpecSpace,
}

pub fn eta0_data(x: &SpacePresentation) -> Result<Eta0> {
    let n = x.carrier().size().ok_or(Error::InfiniteSpace)?;
    let flags = x.classify();
    if !flags.order_zero_dimensional {
        return Err(Error::Precondition("space must be order-zero-dimensional".into()));
    }
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
    Ok(Eta0 { pair: CompactificationPair::new(e)?, clopup, spec })
}

/// The largest Priestley order-compactification of a finite space: the
/// spectrum of its clopen-upset lattice. For finite spaces the unit map is
/// an order-homeomorphism.
pub fn eta0_finite(x: &SpacePresentation) -> Result<CompactificationPair> {
    Ok(eta0_data(x)?.pair)
}

/// The compactification attached to an explicit Priestley basis: the
/// spectrum of the basis with e(x) = {members containing x}.
pub fn compactify_from_basis(
    x: &SpacePresentation,
    ring: &UpsetRing,
) -> Result<CompactificationPair> {
    let members = ring
        .explicit_members()
        .ok_or_else(|| Error::Precondition("basis must be an explicit ring".into()))?
        .to_vec();
    if ring.base_space() != x {
        return Err(Error::Precondition("ring must live on the given space".into()));
    }
    if let Some(w) = ring.check_ring() {
        return Err(Error::Precondition(format!("not a ring of upsets: {w:?}")));
    }
    if let Some((a, b)) = ring.check_priestley_ring() {
        return Err(Error::Precondition(format!(
            "not a Priestley ring: {a} ≰ {b} is not separated"
        )));
    }
    if let Some((_, p)) = ring.check_priestley_basis()? {
        return Err(Error::Precondition(format!(
            "not a Priestley basis: no difference piece covers {p}"
        )));
    }
    let n = x.carrier().size().ok_or(Error::InfiniteSpace)?;
    let ids: Vec<String> = (0..members.len()).map(|i| format!("m{i}")).collect();
    let lattice = crate::dlat::FinDLat::from_leq_fn(ids, |a, b| {
        members[a].subset_of(&members[b])
    })
    .map_err(|v| Error::Precondition(format!("basis is not a lattice: {v}")))?;
    let spec = spec_space(&lattice);
    let mut graph = BTreeMap::new();
    for i in 0..n {
        let p = Point::Idx(i);
        let filter: PrimeFilter =
            (0..members.len()).filter(|&a| members[a].contains(&p)).collect();
        let idx = spec
            .filters
            .iter()
            .position(|f| *f == filter)
            .ok_or_else(|| Error::Internal(format!("e({p}) is not a prime filter")))?;
        graph.insert(p, Point::Idx(idx as u32));
    }
    let e = SpaceMap::pointwise(x.clone(), spec.space.clone(), graph)?;
    CompactificationPair::new(e)
}

/// Searches for a continuous order-preserving f : Y₂ → Y₁ with f∘e₂ = e₁.
/// The map is forced on the image of e₂, which covers a finite target of a
/// dense embedding. When both pairs are Esakia order-compactifications the
/// connecting map is additionally checked to be a p-morphism.
pub fn compare_compactifications(
    p1: &CompactificationPair,
    p2: &CompactificationPair,
    cfg: &SweepConfig,
) -> Result<Option<SpaceMap>> {
    if p1.x() != p2.x() {
        return Err(Error::Precondition("pairs must compactify the same space".into()));
    }
    let (y1, y2) = (p1.y(), p2.y());
    let n2 = y2.carrier().size().ok_or(Error::InfiniteSpace)?;
    y1.carrier().size().ok_or(Error::InfiniteSpace)?;
    let nx = p1.x().carrier().size().ok_or(Error::InfiniteSpace)?;
    let mut graph: BTreeMap<Point, Point> = BTreeMap::new();
    for i in 0..n2 {
        let y = Point::Idx(i);
        let Some(x) = (0..nx).map(Point::Idx).find(|x| p2.e().apply(x) == y) else {
            // e₂ not surjective: its image is not dense in a finite space.
            return Ok(None);
        };
        graph.insert(y, p1.e().apply(&x));
    }
    let f = SpaceMap::pointwise(y2.clone(), y1.clone(), graph)?;
    for i in 0..nx {
        let x = Point::Idx(i);
        if f.apply(&p2.e().apply(&x)) != p1.e().apply(&x) {
            return Err(Error::Internal("forced connecting map misses e₁".into()));
        }
    }
    if !f.is_order_preserving() || !f.is_continuous() {
        return Ok(None);
    }
    let c1 = classify_pair(p1, cfg)?;
    let c2 = classify_pair(p2, cfg)?;
    if c1.esakia && c2.esakia && !is_p_morphism(&f)?.holds {
        return Err(Error::Internal(
            "connecting map between Esakia order-compactifications must be a p-morphism"
                .into(),
        ));
    }
    Ok(Some(f))
}

/// The lift of a map into a Priestley target along the unit embedding,
/// computed by two independent routes.
pub struct LiftReport {
    pub eta: Eta0,
    pub lift: SpaceMap,
    pub unique_verified: bool,
}

/// Route A evaluates the intersection formula
/// ⋂{↑cl f[U] : U ∈ x} ∩ ⋂{↓cl f[X\V] : V ∉ x} at each prime filter;
/// Route B reads the point off the dual of f⁻¹ : ClopUp(Z) → ClopUp(X).
/// Both must produce the same singleton.
pub fn lift(f: &SpaceMap) -> Result<LiftReport> {
    let x = f.source();
    let z = f.target();
    let nx = x.carrier().size().ok_or(Error::InfiniteSpace)?;
    let nz = z.carrier().size().ok_or(Error::InfiniteSpace)?;
    if !z.classify().priestley {
        return Err(Error::Precondition("lift target must be Priestley".into()));
    }
    if !f.is_order_preserving() || !f.is_continuous() {
        return Err(Error::Precondition("lift needs a continuous order-preserving map".into()));
    }
    let eta = eta0_data(x)?;
    let clopup_z = clopup_lattice(z)?;
    let full_x = RSet::full(x.carrier());
    let ny = eta.spec.filters.len();

    let mut graph = BTreeMap::new();
    for (i, filter) in eta.spec.filters.iter().enumerate() {
        // Route A.
        let mut val = RSet::full(z.carrier());
        for (a, u) in eta.clopup.members.iter().enumerate() {
            if filter.contains(&a) {
                val = val.intersection(&z.order().upclose(&f.image(u).closure()));
            } else {
                val = val.intersection(
                    &z.order().downclose(&f.image(&full_x.difference(u)).closure()),
                );
            }
        }
        let route_a = val
            .as_singleton()
            .ok_or_else(|| Error::Internal("lift formula must meet in a singleton".into()))?;
        // Route B.
        let mut route_b = None;
        for zi in 0..nz {
            let zp = Point::Idx(zi);
            if clopup_members_match(f, &clopup_z, &eta, filter, &zp)? {
                if route_b.replace(zp).is_some() {
                    return Err(Error::Internal("dual route hits two points".into()));
                }
            }
        }
        let route_b =
            route_b.ok_or_else(|| Error::Internal("dual route hits no point".into()))?;
        if route_a != route_b {
            return Err(Error::Internal(format!(
                "lift routes disagree at filter {i}: {route_a} vs {route_b}"
            )));
        }
        graph.insert(Point::Idx(i as u32), route_a);
    }
    let lift = SpaceMap::pointwise(eta.spec.space.clone(), z.clone(), graph)?;

    for i in 0..nx {
        let p = Point::Idx(i);
        if lift.apply(&eta.pair.e().apply(&p)) != f.apply(&p) {
            return Err(Error::Internal("lift does not extend the map".into()));
        }
    }
    if !lift.is_order_preserving() || !lift.is_continuous() {
        return Err(Error::Internal("lift must be continuous and order-preserving".into()));
    }

    // Uniqueness by exhaustive competitor search.
    let mut unique_verified = false;
    if (nz as u64).checked_pow(ny as u32).map_or(false, |c| c <= 1 << 20) {
        unique_verified = true;
        let mut assignment = vec![0u32; ny];
        loop {
            let g: BTreeMap<Point, Point> = (0..ny)
                .map(|i| (Point::Idx(i as u32), Point::Idx(assignment[i])))
                .collect();
            let extends = (0..nx).all(|i| {
                let p = Point::Idx(i);
                g[&eta.pair.e().apply(&p)] == f.apply(&p)
            });
            if extends {
                let cand = SpaceMap::pointwise(eta.spec.space.clone(), z.clone(), g)?;
                if cand.is_order_preserving() && cand.is_continuous() && cand != lift {
                    return Err(Error::Internal("lift is not unique".into()));
                }
            }
            // Increment in base nz.
            let mut k = 0;
            loop {
                if k == ny {
                    break;
                }
                assignment[k] += 1;
                if assignment[k] < nz {
                    break;
                }
                assignment[k] = 0;
                k += 1;
            }
            if k == ny || ny == 0 {
                break;
            }
        }
    }
    Ok(LiftReport { eta, lift, unique_verified })
}

/// Route-B point test: z matches the filter iff for every clopen upset W of
/// the target, z ∈ W exactly when f⁻¹[W] belongs to the filter.
fn clopup_members_match(
    f: &SpaceMap,
    clopup_z: &ClopUp,
    eta: &Eta0,
    filter: &PrimeFilter,
    z: &Point,
) -> Result<bool> {
    for w in &clopup_z.members {
        let pre = f.preimage(w);
        let a = eta
            .clopup
            .index_of(&pre)
            .ok_or_else(|| Error::Internal("preimage of an upset must be an upset".into()))?;
        if w.contains(z) != filter.contains(&a) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Both halves of the lift characterization: the difference biconditional
/// at every prime filter, and the p-morphism identity when the lifted map
/// is itself a p-morphism.
pub struct LiftProps {
    /// Witness (filter index, U index, V index) where the biconditional
    /// x ∈ (η₀f)⁻¹[U\V] ⟺ f⁻¹[U] ∈ x ∧ f⁻¹[V] ∉ x fails.
    pub difference_witness: Option<(usize, usize, usize)>,
    /// None when f is not a p-morphism (identity not required); otherwise
    /// the witness point y with (η₀f)⁻¹[↓y] ≠ ↓(η₀f)⁻¹[y].
    pub p_morphism_witness: Option<Option<Point>>,
}

pub fn check_lift_properties(f: &SpaceMap, report: &LiftReport) -> Result<LiftProps> {
    let clopup_z = clopup_lattice(f.target())?;
    let eta = &report.eta;
    let mut difference_witness = None;
    'outer: for (i, filter) in eta.spec.filters.iter().enumerate() {
        let p = Point::Idx(i as u32);
        for (ui, u) in clopup_z.members.iter().enumerate() {
            for (vi, v) in clopup_z.members.iter().enumerate() {
                let lhs = {
                    let fp = report.lift.apply(&p);
                    u.contains(&fp) && !v.contains(&fp)
                };
                let pre_u = eta
                    .clopup
                    .index_of(&f.preimage(u))
                    .ok_or_else(|| Error::Internal("preimage must be clopen-up".into()))?;
                let pre_v = eta
                    .clopup
                    .index_of(&f.preimage(v))
                    .ok_or_else(|| Error::Internal("preimage must be clopen-up".into()))?;
                let rhs = filter.contains(&pre_u) && !filter.contains(&pre_v);
                if lhs != rhs {
                    difference_witness = Some((i, ui, vi));
                    break 'outer;
                }
            }
        }
    }
    let p_morphism_witness = if is_p_morphism(f)?.holds {
        let nz = f.target().carrier().size().unwrap();
        let mut witness = None;
        for zi in 0..nz {
            let y = Point::Idx(zi);
            let sy = RSet::singleton(f.target().carrier(), &y).unwrap();
            let lhs = report.lift.preimage(&f.target().order().downclose(&sy));
            let rhs = eta.spec.space.order().downclose(&report.lift.preimage(&sy));
            if lhs != rhs {
                witness = Some(y);
                break;
            }
        }
        Some(witness)
    } else {
        None
    };
    Ok(LiftProps { difference_witness, p_morphism_witness })
}

/// ↓⋂F = ⋂↓F for a down-directed family of nonempty closed sets.
pub fn esakia_lemma_check(
    x: &SpacePresentation,
    family: &[RSet],
) -> Result<Option<Point>> {
    if family.is_empty() {
        return Err(Error::Precondition("family must be nonempty".into()));
    }
    if !x.classify().esakia {
        return Err(Error::Precondition("space must be an Esakia space".into()));
    }
    for f in family {
        if f.carrier() != x.carrier() {
            return Err(Error::Set(crate::setalg::SetError::CarrierMismatch));
        }
        if f.is_empty() {
            return Err(Error::Precondition("family members must be nonempty".into()));
        }
        if !f.is_closed() {
            return Err(Error::Precondition("family members must be closed".into()));
        }
    }
    for a in family {
        for b in family {
            let meet = a.intersection(b);
            if !family.iter().any(|c| c.subset_of(&meet)) {
                return Err(Error::Precondition(
                    "family must be down-directed: two members have no member below their intersection"
                        .into(),
                ));
            }
        }
    }
    let mut inter = family[0].clone();
    for f in &family[1..] {
        inter = inter.intersection(f);
    }
    let lhs = x.order().downclose(&inter);
    let mut rhs = RSet::full(x.carrier());
    for f in family {
        rhs = rhs.intersection(&x.order().downclose(f));
    }
    Ok(rhs.difference(&lhs).pick())
}

/// One labelled pair for the theorem suite.
#[derive(Debug, Clone)]
pub struct SuiteInstance {
    pub label: String,
    pub pair: CompactificationPair,
}

#[derive(Debug, Clone)]
pub struct SuiteRow {
    pub instance: String,
    pub property: &'static str,
    pub lhs: String,
    pub rhs: String,
    pub agree: bool,
}

#[derive(Debug, Clone, Default)]
pub struct SuiteReport {
    pub rows: Vec<SuiteRow>,
}

impl SuiteReport {
    pub fn all_agree(&self) -> bool {
        self.rows.iter().all(|r| r.agree)
    }
}

/// Evaluates both sides of every implemented biconditional independently,
/// instance by instance. Disagreement means an engine bug, not a refuted
/// theorem.
pub fn theorem_suite(instances: &[SuiteInstance], cfg: &SweepConfig) -> Result<SuiteReport> {
    let mut report = SuiteReport::default();
    let row = |report: &mut SuiteReport,
                   instance: &str,
                   property: &'static str,
                   lhs: String,
                   rhs: String,
                   agree: bool| {
        report.rows.push(SuiteRow {
            instance: instance.to_string(),
            property,
            lhs,
            rhs,
            agree,
        });
    };
    for inst in instances {
        let pair = &inst.pair;
        let cls = classify_pair(pair, cfg)?;
        let xflags = pair.x().classify();
        let ring = UpsetRing::pullback(pair.clone());

        if cls.priestley {
            let heyting_ring = ring.check_heyting_ring(cfg)?;
            row(
                &mut report,
                &inst.label,
                "heyting_iff_heyting_ring",
                cls.heyting.to_string(),
                format!("{}", heyting_ring.holds()),
                cls.heyting == heyting_ring.holds(),
            );
            let esakia_ring = ring.check_esakia_ring(cfg)?;
            row(
                &mut report,
                &inst.label,
                "esakia_iff_esakia_ring",
                cls.esakia.to_string(),
                format!("{}", esakia_ring.holds()),
                cls.esakia == esakia_ring.holds(),
            );
        }

        row(
            &mut report,
            &inst.label,
            "esakia_implies_n_order",
            cls.esakia.to_string(),
            format!("{}", cls.n_order.holds()),
            !cls.esakia || cls.n_order.holds(),
        );

        if pair.x().is_finite() {
            let clopup = clopup_lattice(pair.x())?;
            let full = UpsetRing::explicit(pair.x().clone(), clopup.members)?;
            let esakia_basis = full.check_esakia_ring(cfg)?;
            row(
                &mut report,
                &inst.label,
                "continuity_iff_esakia_basis",
                xflags.continuously_ordered.to_string(),
                format!("{}", esakia_basis.holds()),
                xflags.continuously_ordered == esakia_basis.holds(),
            );
        }

        if cls.heyting {
            let rhs = xflags.image_compact && cls.esakia;
            row(
                &mut report,
                &inst.label,
                "upset_iff_image_compact_and_esakia",
                cls.x_upset_of_y.to_string(),
                rhs.to_string(),
                cls.x_upset_of_y == rhs,
            );
        }

        if pair.y().is_finite() && cls.priestley {
            let basis = check_n_basis(pair, cfg)?;
            let direct = n_order_direct_finite(pair);
            row(
                &mut report,
                &inst.label,
                "n_basis_iff_n_order",
                format!("{}", basis.holds()),
                format!("{}", direct.holds()),
                basis.holds() == direct.holds(),
            );
        }

        if cls.heyting {
            let (ok, tested) = implication_dual_route(pair, &ring, cfg)?;
            row(
                &mut report,
                &inst.label,
                "implication_dual_route",
                format!("{tested} pairs"),
                if ok { "agree".into() } else { "disagree".into() },
                ok,
            );
        }

        if xflags.locally_esakia && cls.esakia {
            let p = is_p_morphism(pair.e())?;
            row(
                &mut report,
                &inst.label,
                "unit_embedding_is_p_morphism",
                "true".into(),
                p.holds.to_string(),
                p.holds,
            );
        }
    }
    Ok(report)
}

/// Cross-checks the ring implication against an independent route: the
/// algebraic relative pseudocomplement of the dual lattice on finite
/// targets, and bounded residuation against the swept members otherwise.
fn implication_dual_route(
    pair: &CompactificationPair,
    ring: &UpsetRing,
    cfg: &SweepConfig,
) -> Result<(bool, usize)> {
    let members = ring.sweep_members(cfg, &[]);
    let mut tested = 0usize;
    if pair.y().is_finite() {
        let clopup_y = clopup_lattice(pair.y())?;
        for e_set in &members {
            for f_set in &members {
                let RingImplication::Member(g) =
                    ring.heyting_implication_in_ring(e_set, f_set, cfg)?
                else {
                    return Ok((false, tested));
                };
                let ue = ring.pullback_upper(e_set).expect("member");
                let uf = ring.pullback_upper(f_set).expect("member");
                let (ai, bi) = (
                    clopup_y.index_of(&ue).expect("clopen upset"),
                    clopup_y.index_of(&uf).expect("clopen upset"),
                );
                let alg = clopup_y
                    .lattice
                    .heyting_implication(ai, bi)
                    .expect("finite upset lattices are Heyting");
                tested += 1;
                if ring.pullback_upper(&g) != Some(clopup_y.members[alg].clone()) {
                    return Ok((false, tested));
                }
            }
        }
    } else {
        for e_set in &members {
            for f_set in &members {
                let RingImplication::Member(g) =
                    ring.heyting_implication_in_ring(e_set, f_set, cfg)?
                else {
                    return Ok((false, tested));
                };
                tested += 1;
                for c in &members {
                    if c.subset_of(&g) != c.intersection(e_set).subset_of(f_set) {
                        return Ok((false, tested));
                    }
                }
            }
        }
    }
    Ok((true, tested))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::rings::RingWitness;

    fn cfg() -> SweepConfig {
        SweepConfig { samples: 60, ..SweepConfig::default() }
    }

    #[test]
    fn identity_pair_on_finite_priestley_space_has_all_flags() {
        let x = corpus::poset_space(3, &[(0, 1), (0, 2)]);
        let pair = CompactificationPair::new(SpaceMap::identity(&x)).unwrap();
        let cls = classify_pair(&pair, &cfg()).unwrap();
        assert!(cls.order_compactification, "{:?}", cls.failures);
        assert!(cls.priestley && cls.heyting && cls.esakia);
        assert!(cls.n_order.holds());
        assert!(cls.x_upset_of_y);
    }

    #[test]
    fn flower_pair_matches_the_classical_values() {
        let pair = corpus::flower_pair();
        let cls = classify_pair(&pair, &cfg()).unwrap();
        assert!(cls.order_compactification, "{:?}", cls.failures);
        assert!(cls.priestley);
        assert!(cls.heyting);
        assert!(!cls.esakia);
        assert!(cls.esakia_witness.is_some());
        assert!(!cls.x_upset_of_y);

        // Not an N-order-compactification, with the classical witness pair:
        // the singleton {0} against the cofinite set missing 0.
        let Verdict::Counterexample((w, v)) = &cls.n_order else {
            panic!("expected an N-order counterexample")
        };
        let c = pair.x().carrier();
        assert_eq!(*w, RSet::build(c).block_fin("N", [0]).finish());
        assert_eq!(*v, RSet::build(c).block_cof("N", [0]).finish());
    }

    #[test]
    fn flower_ring_implications_match_the_classical_values() {
        let pair = corpus::flower_pair();
        let ring = UpsetRing::pullback(pair.clone());
        let c = pair.x().carrier();
        let e_set = RSet::build(c).block_cof("N", [0]).finish();
        let f_set = RSet::empty(c);
        // Inside the pullback ring the implication collapses to the empty
        // set; inside the full powerset of upsets it is the singleton {0}.
        let got = ring.heyting_implication_in_ring(&e_set, &f_set, &cfg()).unwrap();
        assert_eq!(got, RingImplication::Member(RSet::empty(c)));
        assert_eq!(
            pair.x().order().up_implication(&e_set, &f_set),
            RSet::build(c).block_fin("N", [0]).finish()
        );

        // The Esakia-ring check reports exactly this pair first.
        let verdict = ring.check_esakia_ring(&cfg()).unwrap();
        assert_eq!(verdict, Verdict::Counterexample((e_set, f_set)));
        // But the ring is a Heyting ring (the target is an Esakia space).
        assert!(ring.check_heyting_ring(&cfg()).unwrap().holds());
        // And a Priestley basis: differences of cofinite sets realize all
        // finite sets.
        assert_eq!(ring.check_ring(), None);
        assert_eq!(ring.check_priestley_ring(), None);
        assert_eq!(ring.check_priestley_basis().unwrap(), None);
    }

    #[test]
    fn flower_identity_pair_is_esakia_and_n_order() {
        let pair = corpus::flower_identity_pair();
        let cls = classify_pair(&pair, &cfg()).unwrap();
        assert!(cls.order_compactification, "{:?}", cls.failures);
        assert!(cls.esakia && cls.n_order.holds() && cls.x_upset_of_y);
    }

    #[test]
    fn two_level_pair_is_esakia_but_not_an_upset() {
        let pair = corpus::two_level_pair();
        let cls = classify_pair(&pair, &cfg()).unwrap();
        assert!(cls.order_compactification, "{:?}", cls.failures);
        assert!(cls.esakia, "witness: {:?}", cls.esakia_witness);
        assert!(cls.n_order.holds());
        assert!(!cls.x_upset_of_y);
        // The base is not image-compact: upsets of lower-block points are
        // infinite and discrete.
        assert!(pair.x().check_image_compact().is_some());
    }

    #[test]
    fn upper_level_pair_is_esakia_with_upset_base() {
        let pair = corpus::upper_level_pair();
        let cls = classify_pair(&pair, &cfg()).unwrap();
        assert!(cls.order_compactification, "{:?}", cls.failures);
        assert!(cls.esakia, "witness: {:?}", cls.esakia_witness);
        assert!(cls.n_order.holds());
        assert!(cls.x_upset_of_y);
        assert_eq!(pair.x().check_image_compact(), None);
        assert!(pair.x().classify().locally_esakia);
    }

    #[test]
    fn tangled_limit_pair_is_priestley_but_not_heyting() {
        let pair = corpus::tangled_limit_pair();
        let cls = classify_pair(&pair, &cfg()).unwrap();
        assert!(cls.order_compactification, "{:?}", cls.failures);
        assert!(cls.priestley);
        assert!(!cls.heyting);
        assert!(!pair.y().classify().esakia);
        // The pullback ring has a pair with no greatest implication.
        let ring = UpsetRing::pullback(pair.clone());
        assert!(!ring.check_heyting_ring(&cfg()).unwrap().holds());
    }

    #[test]
    fn eta0_is_an_order_homeomorphism_on_finite_spaces() {
        for pairs in corpus::all_posets(3) {
            let x = corpus::poset_space(3, &pairs);
            let pair = eta0_finite(&x).unwrap();
            let cls = classify_pair(&pair, &cfg()).unwrap();
            assert!(cls.esakia && cls.n_order.holds() && cls.x_upset_of_y);
            assert_eq!(pair.y().carrier().size(), Some(3));
        }
    }

    #[test]
    fn eta0_of_the_empty_space() {
        let x = SpacePresentation::discrete(&crate::setalg::Carrier::finite(0));
        let pair = eta0_finite(&x).unwrap();
        assert_eq!(pair.y().carrier().size(), Some(0));
        let cls = classify_pair(&pair, &cfg()).unwrap();
        assert!(cls.order_compactification && cls.esakia && cls.x_upset_of_y);
    }

    #[test]
    fn basis_compactification_reproduces_the_spectrum() {
        let x = corpus::poset_space(2, &[]);
        let members = clopup_lattice(&x).unwrap().members;
        let ring = UpsetRing::explicit(x.clone(), members).unwrap();
        let pair = compactify_from_basis(&x, &ring).unwrap();
        let eta = eta0_finite(&x).unwrap();
        // Both are spectra of the same lattice: same target size, and the
        // connecting maps exist in both directions.
        assert_eq!(pair.y().carrier().size(), eta.y().carrier().size());
        assert!(compare_compactifications(&pair, &eta, &cfg()).unwrap().is_some());
        assert!(compare_compactifications(&eta, &pair, &cfg()).unwrap().is_some());
    }

    #[test]
    fn dropping_an_upset_is_not_a_basis() {
        // On a finite poset every separating subring is the whole upset
        // lattice, so a proper subring is rejected with a witness.
        let x = corpus::poset_space(3, &[(0, 1), (1, 2), (0, 2)]);
        let all = clopup_lattice(&x).unwrap().members;
        let members: Vec<RSet> =
            all.iter().filter(|m| m.as_singleton() != Some(Point::Idx(2))).cloned().collect();
        let ring = UpsetRing::explicit(x.clone(), members).unwrap();
        assert!(matches!(
            ring.check_ring(),
            Some(RingWitness::IntersectionEscapes(..)) | Some(RingWitness::UnionEscapes(..))
        ) || ring.check_priestley_ring().is_some());
        assert!(compactify_from_basis(&x, &ring).is_err());
    }

    #[test]
    fn comparing_pairs_over_different_bases_fails() {
        let x1 = corpus::poset_space(2, &[]);
        let x2 = corpus::poset_space(3, &[]);
        let p1 = eta0_finite(&x1).unwrap();
        let p2 = eta0_finite(&x2).unwrap();
        assert!(compare_compactifications(&p1, &p2, &cfg()).is_err());
    }

    #[test]
    fn lift_of_identity_and_collapse() {
        let x = corpus::poset_space(3, &[(0, 1), (0, 2)]);
        let id = SpaceMap::identity(&x);
        let report = lift(&id).unwrap();
        assert!(report.unique_verified);
        let props = check_lift_properties(&id, &report).unwrap();
        assert_eq!(props.difference_witness, None);
        assert_eq!(props.p_morphism_witness, Some(None));

        let one = corpus::poset_space(1, &[]);
        let collapse = corpus::map_from_indices(&corpus::poset_space(2, &[]), &one, &[0, 0]);
        let report = lift(&collapse).unwrap();
        assert_eq!(report.lift.apply(&Point::Idx(0)), Point::Idx(0));
        assert_eq!(report.lift.apply(&Point::Idx(1)), Point::Idx(0));
    }

    #[test]
    fn lift_of_chain_surjection_agrees_with_transport() {
        // 3-chain onto 2-chain, 0,1 ↦ 0 and 2 ↦ 1.
        let x = corpus::poset_space(3, &[(0, 1), (1, 2), (0, 2)]);
        let z = corpus::poset_space(2, &[(0, 1)]);
        let f = corpus::map_from_indices(&x, &z, &[0, 0, 1]);
        let report = lift(&f).unwrap();
        for i in 0..3u32 {
            let p = Point::Idx(i);
            assert_eq!(report.lift.apply(&report.eta.pair.e().apply(&p)), f.apply(&p));
        }
        let props = check_lift_properties(&f, &report).unwrap();
        assert_eq!(props.difference_witness, None);
        assert_eq!(props.p_morphism_witness, Some(None));
    }

    #[test]
    fn lift_properties_hold_for_non_p_morphisms_too() {
        let x = corpus::poset_space(2, &[]);
        let z = corpus::poset_space(2, &[(0, 1)]);
        let f = corpus::map_from_indices(&x, &z, &[0, 1]);
        assert!(!is_p_morphism(&f).unwrap().holds);
        let report = lift(&f).unwrap();
        let props = check_lift_properties(&f, &report).unwrap();
        assert_eq!(props.difference_witness, None);
        assert_eq!(props.p_morphism_witness, None, "identity is skipped");
    }

    #[test]
    fn esakia_lemma_on_small_families() {
        let x = corpus::poset_space(3, &[(0, 1), (1, 2), (0, 2)]);
        let c = x.carrier();
        let top = RSet::from_points(c, [Point::Idx(2)]).unwrap();
        let up1 = RSet::from_points(c, [Point::Idx(1), Point::Idx(2)]).unwrap();
        // Singleton family and a chain family.
        assert_eq!(esakia_lemma_check(&x, &[up1.clone()]).unwrap(), None);
        assert_eq!(esakia_lemma_check(&x, &[up1.clone(), top.clone()]).unwrap(), None);
        // Preconditions: empty member, not down-directed.
        assert!(esakia_lemma_check(&x, &[RSet::empty(c)]).is_err());
        let a = RSet::from_points(c, [Point::Idx(0)]).unwrap();
        assert!(esakia_lemma_check(&x, &[a, top]).is_err());
    }

    #[test]
    fn suite_rows_agree_on_small_corpus() {
        let mut instances = Vec::new();
        for (i, pairs) in corpus::all_posets(3).into_iter().enumerate() {
            let x = corpus::poset_space(3, &pairs);
            instances.push(SuiteInstance {
                label: format!("n3_{i}"),
                pair: eta0_finite(&x).unwrap(),
            });
        }
        instances.extend(corpus::infinite_pairs());
        let report = theorem_suite(&instances, &cfg()).unwrap();
        for r in &report.rows {
            assert!(
                r.agree,
                "{}: {} lhs={} rhs={}",
                r.instance, r.property, r.lhs, r.rhs
            );
        }
    }
}
