//! Independent cross-checks for the ring engine and the closed-form inputs.
//!
//! Nothing here shares code paths with [`crate::ring`]'s rewriting:
//!
//! * [`segre`] integrates monomials by pushing hyperplane-class powers
//!   forward through each projective bundle (Segre classes of the bundle).
//! * [`dense`] multiplies one generator at a time on a dense coefficient
//!   array, applying a relation only at the moment an exponent reaches it.
//! * [`tangency`] counts tangent members of random pencils and nets of
//!   plane curves with resultants and Wronskians.

pub mod dense;
pub mod segre;
pub mod tangency;

use crate::spaces::SpaceKind;

/// Role of a generator in the oracle's own description of a space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Role {
    /// Hyperplane class of the base P3.
    Base,
    /// Hyperplane class of a projective bundle of the given rank with Chern
    /// classes `c1 a, c2 a^2, c3 a^3`.
    Bundle { rank: u32, chern: [i64; 3] },
    /// Hyperplane class of a marked point's P3.
    Point,
}

/// `(name, role)` for each generator of the space, in ring order.
pub(crate) fn layout(kind: SpaceKind) -> Vec<(String, Role)> {
    let lines = Role::Bundle { rank: 3, chern: [1, 1, 1] };
    let conics = Role::Bundle { rank: 6, chern: [4, 10, 20] };
    let cubics = Role::Bundle { rank: 10, chern: [10, 55, 220] };
    let mut out = vec![("a".to_string(), Role::Base), ("l1".to_string(), lines)];
    match kind {
        SpaceKind::Cubic { .. } => out.push(("l3".into(), cubics)),
        SpaceKind::Conic { .. } => out.push(("l2".into(), conics)),
        SpaceKind::ThreeLines { .. } => {
            out.push(("l1p".into(), lines));
            out.push(("l1pp".into(), lines));
        }
    }
    out.extend((1..=kind.m()).map(|i| (format!("B{i}"), Role::Point)));
    out.extend((1..=kind.n()).map(|j| (format!("H{j}"), Role::Point)));
    out
}
