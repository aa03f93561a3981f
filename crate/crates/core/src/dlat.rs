//! Finite bounded distributive lattices: validation, prime filters,
//! join-irreducibles, Heyting implication and homomorphism checks.
//!
//! Elements carry opaque string ids; all tables are dense. Instances stay
//! small, so clarity wins over compression.

use std::collections::BTreeSet;

use crate::{Error, Result};

/// Witness of a failed lattice axiom, naming the axiom and the elements.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DlatViolation {
    #[error("duplicate element id {0}")]
    DuplicateId(String),
    #[error("a bounded lattice needs at least one element")]
    Empty,
    #[error("≤ is not reflexive at {0}")]
    NotReflexive(String),
    #[error("≤ is not antisymmetric at {0}, {1}")]
    NotAntisymmetric(String, String),
    #[error("≤ is not transitive at {0} ≤ {1} ≤ {2}")]
    NotTransitive(String, String, String),
    #[error("no meet for {0}, {1}")]
    NoMeet(String, String),
    #[error("no join for {0}, {1}")]
    NoJoin(String, String),
    #[error("no bottom element")]
    NoBottom,
    #[error("no top element")]
    NoTop,
    #[error("distributivity fails at {0}, {1}, {2}")]
    NotDistributive(String, String, String),
}

/// A validated finite bounded distributive lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinDLat {
    ids: Vec<String>,
    leq: Vec<bool>,
    meet: Vec<usize>,
    join: Vec<usize>,
    bottom: usize,
    top: usize,
}

/// A prime filter, as the set of element indices it contains.
pub type PrimeFilter = BTreeSet<usize>;

const BRUTE_FORCE_CAP: usize = 20;

/// Validates the axioms and derives the meet/join tables.
pub fn validate_dlat(
    ids: Vec<String>,
    leq_pairs: &BTreeSet<(usize, usize)>,
) -> std::result::Result<FinDLat, DlatViolation> {
    let n = ids.len();
    if n == 0 {
        return Err(DlatViolation::Empty);
    }
    {
        let mut seen = BTreeSet::new();
        for id in &ids {
            if !seen.insert(id) {
                return Err(DlatViolation::DuplicateId(id.clone()));
            }
        }
    }
    let mut leq = vec![false; n * n];
    for &(a, b) in leq_pairs {
        assert!(a < n && b < n, "leq pair out of range");
        leq[a * n + b] = true;
    }
    let le = |leq: &[bool], a: usize, b: usize| leq[a * n + b];
    for a in 0..n {
        if !le(&leq, a, a) {
            return Err(DlatViolation::NotReflexive(ids[a].clone()));
        }
    }
    for a in 0..n {
        for b in 0..n {
            if a != b && le(&leq, a, b) && le(&leq, b, a) {
                return Err(DlatViolation::NotAntisymmetric(ids[a].clone(), ids[b].clone()));
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            if !le(&leq, a, b) {
                continue;
            }
            for c in 0..n {
                if le(&leq, b, c) && !le(&leq, a, c) {
                    return Err(DlatViolation::NotTransitive(
                        ids[a].clone(),
                        ids[b].clone(),
                        ids[c].clone(),
                    ));
                }
            }
        }
    }
    let mut meet = vec![0usize; n * n];
    let mut join = vec![0usize; n * n];
    for a in 0..n {
        for b in 0..n {
            let lower: Vec<usize> =
                (0..n).filter(|&c| le(&leq, c, a) && le(&leq, c, b)).collect();
            let m = lower
                .iter()
                .copied()
                .find(|&m| lower.iter().all(|&c| le(&leq, c, m)));
            match m {
                Some(m) => meet[a * n + b] = m,
                None => return Err(DlatViolation::NoMeet(ids[a].clone(), ids[b].clone())),
            }
            let upper: Vec<usize> =
                (0..n).filter(|&c| le(&leq, a, c) && le(&leq, b, c)).collect();
            let j = upper
                .iter()
                .copied()
                .find(|&j| upper.iter().all(|&c| le(&leq, j, c)));
            match j {
                Some(j) => join[a * n + b] = j,
                None => return Err(DlatViolation::NoJoin(ids[a].clone(), ids[b].clone())),
            }
        }
    }
    let bottom = (0..n)
        .find(|&z| (0..n).all(|a| le(&leq, z, a)))
        .ok_or(DlatViolation::NoBottom)?;
    let top = (0..n)
        .find(|&t| (0..n).all(|a| le(&leq, a, t)))
        .ok_or(DlatViolation::NoTop)?;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let lhs = meet[a * n + join[b * n + c]];
                let rhs = join[meet[a * n + b] * n + meet[a * n + c]];
                if lhs != rhs {
                    return Err(DlatViolation::NotDistributive(
                        ids[a].clone(),
                        ids[b].clone(),
                        ids[c].clone(),
                    ));
                }
            }
        }
    }
    Ok(FinDLat { ids, leq, meet, join, bottom, top })
}

impl FinDLat {
    /// Builds and validates a lattice from a predicate a ≤ b on indices.
    pub fn from_leq_fn(
        ids: Vec<String>,
        le: impl Fn(usize, usize) -> bool,
    ) -> std::result::Result<FinDLat, DlatViolation> {
        let n = ids.len();
        let mut pairs = BTreeSet::new();
        for a in 0..n {
            for b in 0..n {
                if le(a, b) {
                    pairs.insert((a, b));
                }
            }
        }
        validate_dlat(ids, &pairs)
    }

    /// The n-element chain 0 < 1 < ... < n-1.
    pub fn chain(n: usize) -> FinDLat {
        FinDLat::from_leq_fn((0..n).map(|i| format!("c{i}")).collect(), |a, b| a <= b)
            .expect("chains are distributive")
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, a: usize) -> &str {
        &self.ids[a]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.ids.iter().position(|x| x == id)
    }

    pub fn le(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.len() + b]
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.len() + b]
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.len() + b]
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn upset_of(&self, a: usize) -> PrimeFilter {
        (0..self.len()).filter(|&b| self.le(a, b)).collect()
    }

    fn is_prime_filter(&self, s: &PrimeFilter) -> bool {
        let n = self.len();
        if s.is_empty() || s.len() == n {
            return false;
        }
        for &a in s {
            for b in 0..n {
                if self.le(a, b) && !s.contains(&b) {
                    return false;
                }
            }
            for &b in s {
                if !s.contains(&self.meet(a, b)) {
                    return false;
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                if s.contains(&self.join(a, b)) && !s.contains(&a) && !s.contains(&b) {
                    return false;
                }
            }
        }
        true
    }

    /// Brute force: every subset, filtered by the prime-filter invariants.
    /// Errors above 2^20 subsets.
    pub fn prime_filters_bruteforce(&self) -> Result<Vec<PrimeFilter>> {
        let n = self.len();
        if n > BRUTE_FORCE_CAP {
            return Err(Error::EnumerationCap {
                what: "subset enumeration",
                size: n,
                cap: BRUTE_FORCE_CAP,
            });
        }
        // Per-element upsets as masks prune non-upsets cheaply.
        let up_masks: Vec<u32> = (0..n)
            .map(|a| (0..n).filter(|&b| self.le(a, b)).fold(0u32, |m, b| m | 1 << b))
            .collect();
        let mut out = Vec::new();
        for mask in 1u32..(1 << n) {
            let mut upclosed = true;
            for a in 0..n {
                if mask >> a & 1 == 1 && up_masks[a] & !mask != 0 {
                    upclosed = false;
                    break;
                }
            }
            if !upclosed {
                continue;
            }
            let s: PrimeFilter = (0..n).filter(|&a| mask >> a & 1 == 1).collect();
            if self.is_prime_filter(&s) {
                out.push(s);
            }
        }
        out.sort();
        Ok(out)
    }

    /// Independent mid-size oracle: in a finite lattice every filter is
    /// principal (it contains the meet of its members), so it suffices to
    /// test ↑a for each element against the prime-filter invariants.
    pub fn prime_filters_principal(&self) -> Vec<PrimeFilter> {
        let mut out: Vec<PrimeFilter> = (0..self.len())
            .map(|a| self.upset_of(a))
            .filter(|s| self.is_prime_filter(s))
            .collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn join_irreducibles(&self) -> Vec<usize> {
        let n = self.len();
        (0..n)
            .filter(|&j| {
                j != self.bottom
                    && (0..n).all(|a| {
                        (0..n).all(|b| self.join(a, b) != j || a == j || b == j)
                    })
            })
            .collect()
    }

    /// Fast path: the prime filters are exactly the principal upsets of the
    /// join-irreducible elements.
    pub fn prime_filters(&self) -> Vec<PrimeFilter> {
        let mut out: Vec<PrimeFilter> =
            self.join_irreducibles().into_iter().map(|j| self.upset_of(j)).collect();
        out.sort();
        out
    }

    /// Relative pseudocomplement: the greatest c with c ∧ a ≤ b, when the
    /// set of candidates has a greatest member.
    pub fn heyting_implication(&self, a: usize, b: usize) -> Option<usize> {
        let candidates: Vec<usize> =
            (0..self.len()).filter(|&c| self.le(self.meet(c, a), b)).collect();
        let sup = candidates.iter().fold(self.bottom, |acc, &c| self.join(acc, c));
        if candidates.contains(&sup) && self.le(self.meet(sup, a), b) {
            Some(sup)
        } else {
            None
        }
    }

    pub fn is_heyting(&self) -> bool {
        (0..self.len())
            .all(|a| (0..self.len()).all(|b| self.heyting_implication(a, b).is_some()))
    }

    /// Lattice homomorphism check for `map : self -> other` given pointwise.
    /// Returns the failing operation and pair, if any.
    pub fn check_lattice_hom(&self, other: &FinDLat, map: &[usize]) -> Option<HomViolation> {
        assert_eq!(map.len(), self.len(), "map must be total");
        if map[self.bottom] != other.bottom {
            return Some(HomViolation::Bottom);
        }
        if map[self.top] != other.top {
            return Some(HomViolation::Top);
        }
        for a in 0..self.len() {
            for b in 0..self.len() {
                if map[self.meet(a, b)] != other.meet(map[a], map[b]) {
                    return Some(HomViolation::Meet(a, b));
                }
                if map[self.join(a, b)] != other.join(map[a], map[b]) {
                    return Some(HomViolation::Join(a, b));
                }
            }
        }
        None
    }

    /// Heyting homomorphism: a lattice homomorphism that also preserves the
    /// implication. Both lattices must actually have implications.
    pub fn check_heyting_hom(&self, other: &FinDLat, map: &[usize]) -> Option<HomViolation> {
        if let Some(v) = self.check_lattice_hom(other, map) {
            return Some(v);
        }
        for a in 0..self.len() {
            for b in 0..self.len() {
                let here = self.heyting_implication(a, b);
                let there = other.heyting_implication(map[a], map[b]);
                match (here, there) {
                    (Some(h), Some(t)) if map[h] == t => {}
                    _ => return Some(HomViolation::Implication(a, b)),
                }
            }
        }
        None
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HomViolation {
    Bottom,
    Top,
    Meet(usize, usize),
    Join(usize, usize),
    Implication(usize, usize),
}
