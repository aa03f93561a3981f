//! Exact computation engine for ordered topological spaces, distributive
//! lattices and their order-compactifications.
//!
//! The engine works over two kinds of carriers: finite point sets and "tail
//! carriers" (finitely many countably infinite blocks, each optionally owning
//! one limit point, plus finitely many isolated points). Every subset it
//! manipulates is representable — a finite or cofinite trace per block — so
//! Boolean algebra, order closures and the topological operators are all
//! exact, and the classical counterexamples built from one-point
//! compactifications of discrete countable sets can be checked symbolically.

pub mod compactify;
pub mod corpus;
pub mod dlat;
pub mod doc;
pub mod duality;
pub mod order;
pub mod render;
pub mod rings;
pub mod setalg;
pub mod space;

pub use compactify::CompactificationPair;
pub use dlat::FinDLat;
pub use duality::SpaceMap;
pub use order::OrderPresentation;
pub use rings::UpsetRing;
pub use setalg::{Carrier, Point, RSet};
pub use space::SpacePresentation;

/// Outcome of a check that may have run exhaustively, within a bounded
/// sweep, or found a counterexample. Bounded verdicts say how many
/// candidates were tested; they never claim completeness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict<W> {
    OkExhaustive,
    OkBounded { tested: usize },
    Counterexample(W),
}

impl<W> Verdict<W> {
    pub fn holds(&self) -> bool {
        !matches!(self, Verdict::Counterexample(_))
    }

    pub fn counterexample(&self) -> Option<&W> {
        match self {
            Verdict::Counterexample(w) => Some(w),
            _ => None,
        }
    }

    pub fn map<V>(self, f: impl FnOnce(W) -> V) -> Verdict<V> {
        match self {
            Verdict::OkExhaustive => Verdict::OkExhaustive,
            Verdict::OkBounded { tested } => Verdict::OkBounded { tested },
            Verdict::Counterexample(w) => Verdict::Counterexample(f(w)),
        }
    }
}

/// Errors shared across the engine. Witness-style outcomes (a failed
/// separation, a lattice axiom violation, ...) are ordinary return values of
/// the individual checks, not errors.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Set(#[from] setalg::SetError),
    #[error("order violates antisymmetry: {0} and {1} are distinct but comparable both ways")]
    Antisymmetry(Point, Point),
    #[error("enumeration too large: {what} has {size} elements (cap {cap})")]
    EnumerationCap { what: &'static str, size: usize, cap: usize },
    #[error("operation requires a finite space")]
    InfiniteSpace,
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("internal routes disagree (engine bug): {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
