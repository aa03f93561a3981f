//! Rings of upsets over a base space and the classification ladder:
//! ring → Priestley ring → Priestley basis → Heyting ring → Esakia ring →
//! N-basis.
//!
//! A ring is given explicitly (a finite member list) or as the pullback of
//! the clopen upsets of a compactification target. Pullback rings can be
//! infinite; their membership test is still exact — the clopen upset of the
//! target behind a member is the closure of its image, unique by density —
//! while the pair-quantified checks run a deterministic small-support sweep
//! plus seeded random sampling and report bounded verdicts. The implication
//! of a pullback ring is computed exactly through the target space whenever
//! the largest clopen upset under the spatial bound exists; the no-greatest
//! case is certified by a generic-extension argument or falls back to a
//! bounded verdict.

use std::collections::BTreeSet;

use rand::seq::IteratorRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::compactify::CompactificationPair;

const FINITE_CLOPEN_CAP: u32 = 16;
use crate::setalg::{Point, RSet};
use crate::space::SpacePresentation;
use crate::{Error, Result, Verdict};

/// Bounds for the pair-quantified sweeps on pullback rings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepConfig {
    pub support_bound: usize,
    pub samples: usize,
    pub seed: u64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig { support_bound: 3, samples: 500, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RingWitness {
    MissingEmpty,
    MissingFull,
    NotUpset(RSet),
    UnionEscapes(RSet, RSet),
    IntersectionEscapes(RSet, RSet),
}

#[derive(Debug, Clone)]
pub enum RingPresentation {
    Explicit(Vec<RSet>),
    Pullback(Box<CompactificationPair>),
}

/// A ring of upsets of a base space.
#[derive(Debug, Clone)]
pub struct UpsetRing {
    space: SpacePresentation,
    pres: RingPresentation,
}

/// Result of the greatest-member search for G ∩ E ⊆ F inside a ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RingImplication {
    /// The greatest member, exactly.
    Member(RSet),
    /// Provably no greatest member exists.
    Absent { reason: String },
    /// Sweep only: the best member seen, with how many candidates were
    /// tested; no completeness claim.
    BestBounded { best: Option<RSet>, tested: usize },
}

impl UpsetRing {
    pub fn explicit(space: SpacePresentation, members: Vec<RSet>) -> Result<UpsetRing> {
        for m in &members {
            if m.carrier() != space.carrier() {
                return Err(Error::Set(crate::setalg::SetError::CarrierMismatch));
            }
        }
        Ok(UpsetRing { space, pres: RingPresentation::Explicit(members) })
    }

    pub fn pullback(pair: CompactificationPair) -> UpsetRing {
        UpsetRing {
            space: pair.x().clone(),
            pres: RingPresentation::Pullback(Box::new(pair)),
        }
    }

    pub fn base_space(&self) -> &SpacePresentation {
        &self.space
    }

    pub fn presentation(&self) -> &RingPresentation {
        &self.pres
    }

    pub fn explicit_members(&self) -> Option<&[RSet]> {
        match &self.pres {
            RingPresentation::Explicit(m) => Some(m),
            RingPresentation::Pullback(_) => None,
        }
    }

    /// For a member S of a pullback ring, the unique clopen upset U of the
    /// target with e⁻¹(U) = S: the closure of the image of S. Returns None
    /// when S is not a member.
    pub fn pullback_upper(&self, s: &RSet) -> Option<RSet> {
        let RingPresentation::Pullback(pair) = &self.pres else { return None };
        let u = pair.e().image(s).closure();
        if u.is_clopen() && pair.y().order().is_upset(&u) && pair.e().preimage(&u) == *s {
            Some(u)
        } else {
            None
        }
    }

    /// Exact membership test.
    pub fn contains(&self, s: &RSet) -> bool {
        match &self.pres {
            RingPresentation::Explicit(m) => m.contains(s),
            RingPresentation::Pullback(_) => self.pullback_upper(s).is_some(),
        }
    }

    /// Closure of the member list under the ring operations; pullback rings
    /// are rings by construction.
    pub fn check_ring(&self) -> Option<RingWitness> {
        let RingPresentation::Explicit(members) = &self.pres else { return None };
        let carrier = self.space.carrier();
        if !members.contains(&RSet::empty(carrier)) {
            return Some(RingWitness::MissingEmpty);
        }
        if !members.contains(&RSet::full(carrier)) {
            return Some(RingWitness::MissingFull);
        }
        for m in members {
            if !self.space.order().is_upset(m) {
                return Some(RingWitness::NotUpset(m.clone()));
            }
        }
        for a in members {
            for b in members {
                if !members.contains(&a.union(b)) {
                    return Some(RingWitness::UnionEscapes(a.clone(), b.clone()));
                }
                if !members.contains(&a.intersection(b)) {
                    return Some(RingWitness::IntersectionEscapes(a.clone(), b.clone()));
                }
            }
        }
        None
    }

    /// Separation: x ≰ y needs a member containing x and missing y.
    pub fn check_priestley_ring(&self) -> Option<(Point, Point)> {
        let reps = self.rep_points();
        for x in &reps {
            for y in &reps {
                if x == y || self.space.order().le(x, y) {
                    continue;
                }
                let separated = match &self.pres {
                    RingPresentation::Explicit(members) => {
                        members.iter().any(|a| a.contains(x) && !a.contains(y))
                    }
                    RingPresentation::Pullback(pair) => {
                        let ex = RSet::singleton(pair.y().carrier(), &pair.e().apply(x))
                            .unwrap();
                        let ey = RSet::singleton(pair.y().carrier(), &pair.e().apply(y))
                            .unwrap();
                        pair.y().greedy_clopen_upset(&ex, &ey).is_ok()
                    }
                };
                if !separated {
                    return Some((x.clone(), y.clone()));
                }
            }
        }
        None
    }

    fn rep_points(&self) -> Vec<Point> {
        match &self.pres {
            RingPresentation::Explicit(members) => {
                let refs: Vec<&RSet> = members.iter().collect();
                self.space.representatives(&refs)
            }
            RingPresentation::Pullback(pair) => pair.e().source_representatives(),
        }
    }

    /// The differences of members must form a basis: every clopen generator
    /// of the base space is covered by pieces A \ B lying inside it.
    pub fn check_priestley_basis(&self) -> Result<Option<(RSet, Point)>> {
        match &self.pres {
            RingPresentation::Explicit(members) => {
                let refs: Vec<&RSet> = members.iter().collect();
                for w in self.space.clopen_generators(&refs) {
                    let mut covered = RSet::empty(self.space.carrier());
                    for a in members {
                        for b in members {
                            let piece = a.difference(b);
                            if piece.subset_of(&w) {
                                covered = covered.union(&piece);
                            }
                        }
                    }
                    if let Some(p) = w.difference(&covered).pick() {
                        return Ok(Some((w, p)));
                    }
                }
                Ok(None)
            }
            RingPresentation::Pullback(pair) => {
                let extras = pair.e().rep_extras();
                let refs: Vec<&RSet> = extras.iter().collect();
                for w in self.space.clopen_generators(&refs) {
                    if let Some(p) = self.cover_generator_pullback(pair, &w) {
                        return Ok(Some((w, p)));
                    }
                }
                Ok(None)
            }
        }
    }

    /// One piece e⁻¹(U) \ e⁻¹(V) around a seed inside the generator `w`:
    /// U is the least clopen upset of the target over the image of the
    /// seed, V the least clopen upset over U minus the image of w, kept
    /// disjoint from the image of the seed. Both sides are forced.
    fn pullback_piece_ok(&self, pair: &CompactificationPair, seed: &RSet, w: &RSet) -> bool {
        let y = pair.y();
        let e = pair.e();
        let img_seed = e.image(seed);
        let Ok(u) = y.greedy_clopen_upset(&img_seed, &RSet::empty(y.carrier())) else {
            return false;
        };
        let outside = e.image(&e.preimage(&u).difference(w));
        y.greedy_clopen_upset(&outside, &img_seed).is_ok()
    }

    fn cover_generator_pullback(
        &self,
        pair: &CompactificationPair,
        w: &RSet,
    ) -> Option<Point> {
        let mut special: Vec<Point> = Vec::new();
        if let Some(named) = w.named_members() {
            special.extend(named.iter().map(|n| Point::Named(n.clone())));
        }
        for b in self.space.carrier().blocks() {
            let tr = w.trace(&b.name).unwrap();
            if tr.is_cofinite() {
                for i in self.space.support_pool(&b.name) {
                    if tr.contains(i) {
                        special.push(Point::Elem(b.name.clone(), i));
                    }
                }
            } else {
                special.extend(tr.support().iter().map(|i| Point::Elem(b.name.clone(), *i)));
            }
        }
        if self.space.carrier().is_finite() {
            special = w.enumerate_finite().unwrap();
        }
        for p in special {
            let seed = RSet::singleton(self.space.carrier(), &p).unwrap();
            if !self.pullback_piece_ok(pair, &seed, w) {
                return Some(p);
            }
        }
        for b in self.space.carrier().blocks() {
            let tr = w.trace(&b.name).unwrap();
            if !tr.is_cofinite() {
                continue;
            }
            let mut excl = self.space.support_pool(&b.name);
            excl.extend(tr.support().iter().copied());
            let seed = RSet::build(self.space.carrier()).block_cof(&b.name, excl).finish();
            if !self.pullback_piece_ok(pair, &seed, w) {
                return Some(seed.pick().expect("cofinite seed is nonempty"));
            }
        }
        None
    }

    /// Greatest member G with G ∩ E ⊆ F.
    pub fn heyting_implication_in_ring(
        &self,
        e_set: &RSet,
        f_set: &RSet,
        cfg: &SweepConfig,
    ) -> Result<RingImplication> {
        if !self.contains(e_set) || !self.contains(f_set) {
            return Err(Error::Precondition("implication arguments must be members".into()));
        }
        match &self.pres {
            RingPresentation::Explicit(members) => {
                let mut g = RSet::empty(self.space.carrier());
                for c in members {
                    if c.intersection(e_set).subset_of(f_set) {
                        g = g.union(c);
                    }
                }
                if members.contains(&g) && g.intersection(e_set).subset_of(f_set) {
                    Ok(RingImplication::Member(g))
                } else {
                    Ok(RingImplication::Absent {
                        reason: "union of the candidates escapes the ring".into(),
                    })
                }
            }
            RingPresentation::Pullback(pair) => {
                let pair = pair.clone();
                self.pullback_implication(&pair, e_set, f_set, cfg)
            }
        }
    }

    fn pullback_implication(
        &self,
        pair: &CompactificationPair,
        e_set: &RSet,
        f_set: &RSet,
        cfg: &SweepConfig,
    ) -> Result<RingImplication> {
        let y = pair.y();
        let u_e = self.pullback_upper(e_set).ok_or_else(|| {
            Error::Precondition("implication arguments must be members".into())
        })?;
        let u_f = self.pullback_upper(f_set).ok_or_else(|| {
            Error::Precondition("implication arguments must be members".into())
        })?;
        // Largest upset T of the target with T ∩ U_E ⊆ U_F; any member under
        // the bound pulls back from a clopen upset below T, so the answer is
        // the largest clopen upset inside T, when that exists.
        let t = y.order().up_implication(&u_e, &u_f);
        let mut k = t.clone();
        loop {
            k = y.order().downclose(&k.complement()).complement();
            let mut removed = false;
            let mut cut_block: Option<String> = None;
            for b in y.carrier().blocks() {
                let Some(l) = &b.limit else { continue };
                let has_l = k.contains(&Point::Named(l.clone()));
                let cof = k.trace(&b.name).unwrap().is_cofinite();
                if has_l && !cof {
                    let sl = RSet::singleton(y.carrier(), &Point::Named(l.clone())).unwrap();
                    k = k.difference(&sl);
                    removed = true;
                } else if !has_l && cof {
                    cut_block = Some(b.name.clone());
                }
            }
            if removed {
                continue;
            }
            let Some(block) = cut_block else { break };
            // The trace must drop from cofinite to finite: if one more
            // generic point can always be absorbed (its forced clopen-upset
            // closure stays under T), no candidate is greatest.
            let mut excl = y.support_pool(&block);
            excl.extend(k.block_support(&block));
            excl.extend(t.block_support(&block));
            let g = (0..).find(|n| !excl.contains(n)).unwrap();
            let sg = RSet::singleton(y.carrier(), &Point::Elem(block.clone(), g)).unwrap();
            if y.greedy_clopen_upset(&sg, &t.complement()).is_ok() {
                return Ok(RingImplication::Absent {
                    reason: format!(
                        "candidates extend along block {block} without a greatest"
                    ),
                });
            }
            return Ok(self.sweep_best_implication(e_set, f_set, cfg));
        }
        debug_assert!(k.is_clopen() && y.order().is_upset(&k));
        let g = pair.e().preimage(&k);
        if !g.intersection(e_set).subset_of(f_set) {
            return Err(Error::Internal("implication candidate violates its bound".into()));
        }
        Ok(RingImplication::Member(g))
    }

    fn sweep_best_implication(
        &self,
        e_set: &RSet,
        f_set: &RSet,
        cfg: &SweepConfig,
    ) -> RingImplication {
        let members = self.sweep_members(cfg, &[e_set, f_set]);
        let tested = members.len();
        let mut best: Option<RSet> = None;
        for c in &members {
            if c.intersection(e_set).subset_of(f_set) {
                best = Some(match best {
                    Some(b) => b.union(c),
                    None => c.clone(),
                });
            }
        }
        // The union of finitely many members stays in the ring; report it
        // only if it still satisfies the bound and the membership test.
        let best = best.filter(|b| self.contains(b) && b.intersection(e_set).subset_of(f_set));
        RingImplication::BestBounded { best, tested }
    }

    /// Members used by the pair-quantified sweeps. Explicit rings: the list.
    /// Pullback rings: pullbacks of the small-support clopen upsets of the
    /// target plus seeded random samples.
    pub fn sweep_members(&self, cfg: &SweepConfig, extras: &[&RSet]) -> Vec<RSet> {
        match &self.pres {
            RingPresentation::Explicit(m) => m.clone(),
            RingPresentation::Pullback(pair) => {
                let imgs: Vec<RSet> = extras.iter().map(|s| pair.e().image(s)).collect();
                let refs: Vec<&RSet> = imgs.iter().collect();
                let uppers = enumerate_clopens(pair.y(), cfg, true, &refs);
                let mut out: Vec<RSet> = Vec::new();
                for u in uppers {
                    let s = pair.e().preimage(&u);
                    if self.contains(&s) && !out.contains(&s) {
                        out.push(s);
                    }
                }
                out.sort();
                out
            }
        }
    }

    /// Existence of the implication for swept member pairs.
    pub fn check_heyting_ring(&self, cfg: &SweepConfig) -> Result<Verdict<(RSet, RSet)>> {
        let members = self.sweep_members(cfg, &[]);
        for e_set in &members {
            for f_set in &members {
                match self.heyting_implication_in_ring(e_set, f_set, cfg)? {
                    RingImplication::Member(_) => {}
                    RingImplication::Absent { .. } => {
                        return Ok(Verdict::Counterexample((e_set.clone(), f_set.clone())));
                    }
                    RingImplication::BestBounded { .. } => {}
                }
            }
        }
        Ok(self.ok_verdict(members.len() * members.len()))
    }

    /// Membership of the ambient-upset implication for swept member pairs:
    /// the ring must contain X \ ↓(E \ F).
    pub fn check_esakia_ring(&self, cfg: &SweepConfig) -> Result<Verdict<(RSet, RSet)>> {
        let members = self.sweep_members(cfg, &[]);
        for e_set in &members {
            for f_set in &members {
                let g = self.space.order().up_implication(e_set, f_set);
                if !self.contains(&g) {
                    return Ok(Verdict::Counterexample((e_set.clone(), f_set.clone())));
                }
            }
        }
        Ok(self.ok_verdict(members.len() * members.len()))
    }

    fn ok_verdict<W>(&self, tested: usize) -> Verdict<W> {
        match &self.pres {
            RingPresentation::Explicit(_) => Verdict::OkExhaustive,
            RingPresentation::Pullback(pair)
                if pair.y().carrier().size().is_some_and(|n| n <= FINITE_CLOPEN_CAP) =>
            {
                Verdict::OkExhaustive
            }
            RingPresentation::Pullback(_) => Verdict::OkBounded { tested },
        }
    }
}

/// The N-basis condition for a Priestley order-compactification: whenever
/// two pulled-back clopens W, V satisfy ↑W ∩ ↓V = ∅ in the base space, some
/// ring member contains W and misses V. The member search is exact (forced
/// clopen-upset construction on the target); the pair quantification is
/// exhaustive for finite targets and swept otherwise.
pub fn check_n_basis(
    pair: &CompactificationPair,
    cfg: &SweepConfig,
) -> Result<Verdict<(RSet, RSet)>> {
    let y = pair.y();
    let e = pair.e();
    let x = pair.x();
    let clopens = enumerate_clopens(y, cfg, false, &[]);
    let mut pulled: Vec<RSet> = Vec::new();
    for c in &clopens {
        let s = e.preimage(c);
        if !pulled.contains(&s) {
            pulled.push(s);
        }
    }
    pulled.sort();
    let mut tested = 0usize;
    for w in &pulled {
        for v in &pulled {
            if !x.order().upclose(w).intersection(&x.order().downclose(v)).is_empty() {
                continue;
            }
            tested += 1;
            if y.greedy_clopen_upset(&e.image(w), &e.image(v)).is_err() {
                return Ok(Verdict::Counterexample((w.clone(), v.clone())));
            }
        }
    }
    if y.carrier().size().is_some_and(|n| n <= FINITE_CLOPEN_CAP) {
        Ok(Verdict::OkExhaustive)
    } else {
        Ok(Verdict::OkBounded { tested })
    }
}

/// Small-support clopen enumeration on a space: a deterministic part over
/// the support pools plus seeded random samples. With `upsets_only` the
/// result is filtered to clopen upsets. Finite carriers enumerate every
/// subset.
pub fn enumerate_clopens(
    space: &SpacePresentation,
    cfg: &SweepConfig,
    upsets_only: bool,
    extras: &[&RSet],
) -> Vec<RSet> {
    let mut out: Vec<RSet> = Vec::new();
    let push = |s: RSet, out: &mut Vec<RSet>| {
        let ok = s.is_clopen() && (!upsets_only || space.order().is_upset(&s));
        if ok && !out.contains(&s) {
            out.push(s);
        }
    };
    if let Some(n) = space.carrier().size() {
        if n <= FINITE_CLOPEN_CAP {
            for mask in 0u32..(1 << n) {
                let s = RSet::from_points(
                    space.carrier(),
                    (0..n).filter(|i| mask >> i & 1 == 1).map(Point::Idx),
                )
                .unwrap();
                push(s, &mut out);
            }
        } else {
            // Too many subsets: seeded samples only.
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            for _ in 0..cfg.samples {
                let pts = (0..n).filter(|_| rng.gen_bool(0.5)).map(Point::Idx);
                push(RSet::from_points(space.carrier(), pts).unwrap(), &mut out);
            }
        }
        return out;
    }

    let blocks = space.carrier().blocks().to_vec();
    let named = space.carrier().named_points();
    let pools: Vec<Vec<u64>> = blocks
        .iter()
        .map(|b| {
            let mut pool = space.support_pool(&b.name);
            for s in extras {
                pool.extend(s.block_support(&b.name));
            }
            pool.extend(0..3);
            pool.into_iter().collect()
        })
        .collect();

    // Deterministic sweep: per block a finite or cofinite trace with support
    // drawn from the pool, total support within the bound.
    let mut traces_per_block: Vec<Vec<(bool, BTreeSet<u64>)>> = Vec::new();
    for pool in &pools {
        let mut options = Vec::new();
        for s in subsets_up_to(pool, cfg.support_bound) {
            options.push((false, s.clone()));
            options.push((true, s));
        }
        traces_per_block.push(options);
    }
    let named_subsets = subsets_up_to(&named, named.len());
    let mut stack: Vec<(usize, RSet, usize)> = vec![(0, RSet::empty(space.carrier()), 0)];
    while let Some((i, acc, used)) = stack.pop() {
        if i == blocks.len() {
            for ns in &named_subsets {
                let mut s = acc.clone();
                if !ns.is_empty() {
                    let names: Vec<&str> = ns.iter().map(|n| n.as_str()).collect();
                    s = s.union(&RSet::build(space.carrier()).named(names).finish());
                }
                push(s, &mut out);
            }
            continue;
        }
        for (cof, supp) in &traces_per_block[i] {
            if used + supp.len() > cfg.support_bound {
                continue;
            }
            let b = RSet::build(space.carrier());
            let part = if *cof {
                b.block_cof(&blocks[i].name, supp.iter().copied()).finish()
            } else {
                b.block_fin(&blocks[i].name, supp.iter().copied()).finish()
            };
            stack.push((i + 1, acc.union(&part), used + supp.len()));
        }
    }

    // Seeded random samples over a wider index range.
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let hi = pools.iter().flatten().max().copied().unwrap_or(0) + 8;
    for _ in 0..cfg.samples {
        let mut s = RSet::empty(space.carrier());
        for b in &blocks {
            let k = rng.gen_range(0..=cfg.support_bound);
            let supp: BTreeSet<u64> =
                (0..=hi).choose_multiple(&mut rng, k).into_iter().collect();
            let builder = RSet::build(space.carrier());
            let part = if rng.gen_bool(0.5) {
                builder.block_cof(&b.name, supp).finish()
            } else {
                builder.block_fin(&b.name, supp).finish()
            };
            s = s.union(&part);
        }
        for n in &named {
            if rng.gen_bool(0.5) {
                s = s.union(&RSet::build(space.carrier()).named([n.as_str()]).finish());
            }
        }
        push(s, &mut out);
    }
    out
}

fn subsets_up_to<T: Clone + Ord>(items: &[T], bound: usize) -> Vec<BTreeSet<T>> {
    let mut out: Vec<BTreeSet<T>> = vec![BTreeSet::new()];
    for item in items {
        let mut grown = Vec::new();
        for s in &out {
            if s.len() < bound {
                let mut t = s.clone();
                t.insert(item.clone());
                grown.push(t);
            }
        }
        out.extend(grown);
    }
    out.sort();
    out.dedup();
    out
}
