//! Counts of degree-d plane curves with one node, one node on a fixed line,
//! or one cusp, through the appropriate number of generic points.
//!
//! Each invariant is a [`PlanarInvariant`] strategy registered by name. The
//! singular kinds recurse on the degree: moving point conditions onto a
//! fixed line degenerates the curve into the line plus a curve of degree
//! d-1, and the count splits into "all d line points" configurations plus a
//! smoothing correction. The tangency kinds are supplied as closed forms
//! (see [`crate::oracle::tangency`] for the independent checks).

use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::registry::Registry;

/// Largest supported degree.
pub const MAX_DEGREE: u32 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum InvariantKind {
    A1,
    A1L,
    A2,
    T1,
    T1Pt,
    T2,
    Smooth,
}

impl InvariantKind {
    pub const ALL: [InvariantKind; 7] = [
        InvariantKind::A1,
        InvariantKind::A1L,
        InvariantKind::A2,
        InvariantKind::T1,
        InvariantKind::T1Pt,
        InvariantKind::T2,
        InvariantKind::Smooth,
    ];

    pub fn name(self) -> &'static str {
        match self {
            InvariantKind::A1 => "a1",
            InvariantKind::A1L => "a1l",
            InvariantKind::A2 => "a2",
            InvariantKind::T1 => "t1",
            InvariantKind::T1Pt => "t1pt",
            InvariantKind::T2 => "t2",
            InvariantKind::Smooth => "smooth",
        }
    }

    fn index(self) -> usize {
        self as usize
    }

    /// Kinds that admit the line-point degeneration.
    pub fn is_singular(self) -> bool {
        matches!(self, InvariantKind::A1 | InvariantKind::A1L | InvariantKind::A2)
    }
}

impl fmt::Display for InvariantKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for InvariantKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        InvariantKind::ALL
            .into_iter()
            .find(|k| k.name() == lower)
            .ok_or_else(|| Error::domain(format!("unknown invariant `{s}`")))
    }
}

/// `delta(d) = d(d+3)/2`, the dimension of the space of plane curves of degree d.
pub fn delta(d: u32) -> Result<u64> {
    if d < 1 {
        return Err(Error::domain("degree must be at least 1"));
    }
    let d = d as u64;
    Ok(d * (d + 3) / 2)
}

/// All invariant values at one degree, indexed by kind.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Row([u64; 7]);

impl Row {
    pub fn get(&self, kind: InvariantKind) -> u64 {
        self.0[kind.index()]
    }
}

/// Split of N_d into the configuration with all d line points on the line
/// and the smoothing correction gained when one of them moves off it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Degeneration {
    pub all_on_line: u64,
    pub smoothing: u64,
}

pub trait PlanarInvariant: Send + Sync {
    fn kind(&self) -> InvariantKind;

    /// Values fixed directly rather than by the recursion.
    fn base(&self, _d: u32) -> Option<u64> {
        None
    }

    /// The degeneration split at degree `d` from the degree-(d-1) row.
    fn degeneration(&self, _d: u32, _prev: &Row) -> Option<Degeneration> {
        None
    }

    /// N_d from the degree-(d-1) row.
    fn step(&self, d: u32, prev: &Row) -> u64 {
        let deg = self.degeneration(d, prev).expect("singular kinds define a degeneration");
        deg.all_on_line + deg.smoothing
    }
}

struct Node;

impl PlanarInvariant for Node {
    fn kind(&self) -> InvariantKind {
        InvariantKind::A1
    }

    fn base(&self, d: u32) -> Option<u64> {
        (d == 1).then_some(0)
    }

    fn degeneration(&self, d: u32, prev: &Row) -> Option<Degeneration> {
        use InvariantKind::*;
        let d = d as u64;
        Some(Degeneration {
            all_on_line: prev.get(A1) + d * prev.get(Smooth) + 2 * prev.get(T1),
            smoothing: (d - 1) * prev.get(Smooth),
        })
    }
}

struct NodeOnLine;

impl PlanarInvariant for NodeOnLine {
    fn kind(&self) -> InvariantKind {
        InvariantKind::A1L
    }

    fn base(&self, d: u32) -> Option<u64> {
        match d {
            1 => Some(0),
            2 => Some(3),
            _ => None,
        }
    }

    fn degeneration(&self, _d: u32, prev: &Row) -> Option<Degeneration> {
        use InvariantKind::*;
        Some(Degeneration {
            all_on_line: prev.get(A1L) + 2 * prev.get(T1Pt),
            smoothing: prev.get(Smooth),
        })
    }
}

struct Cusp;

impl PlanarInvariant for Cusp {
    fn kind(&self) -> InvariantKind {
        InvariantKind::A2
    }

    fn base(&self, d: u32) -> Option<u64> {
        (d <= 2).then_some(0)
    }

    fn degeneration(&self, d: u32, prev: &Row) -> Option<Degeneration> {
        use InvariantKind::*;
        let d = d as u64;
        Some(Degeneration {
            all_on_line: prev.get(A2) + 3 * prev.get(A1L) + 3 * d * prev.get(T1Pt) + 2 * prev.get(T2),
            smoothing: 3 * prev.get(T1),
        })
    }
}

/// A count given in closed form.
struct ClosedForm {
    kind: InvariantKind,
    f: fn(u64) -> u64,
}

impl PlanarInvariant for ClosedForm {
    fn kind(&self) -> InvariantKind {
        self.kind
    }

    fn base(&self, d: u32) -> Option<u64> {
        Some((self.f)(d as u64))
    }

    fn step(&self, d: u32, _prev: &Row) -> u64 {
        (self.f)(d as u64)
    }
}

/// The built-in strategies, one per kind.
pub fn default_registry() -> Registry<dyn PlanarInvariant> {
    let mut r: Registry<dyn PlanarInvariant> = Registry::new("invariant");
    let closed = |kind, f| Arc::new(ClosedForm { kind, f }) as Arc<dyn PlanarInvariant>;
    let entries: Vec<Arc<dyn PlanarInvariant>> = vec![
        Arc::new(Node),
        Arc::new(NodeOnLine),
        Arc::new(Cusp),
        closed(InvariantKind::T1, |d| 2 * (d - 1)),
        closed(InvariantKind::T1Pt, |_| 1),
        closed(InvariantKind::T2, |d| 3 * d.saturating_sub(2)),
        closed(InvariantKind::Smooth, |_| 1),
    ];
    for e in entries {
        r.register(e.kind().name(), e).expect("built-in names are distinct");
    }
    r
}

/// Every kind tabulated for degrees `1..=MAX_DEGREE`.
#[derive(Debug)]
pub struct PlanarTable {
    rows: Vec<Row>,
    registry: Registry<dyn PlanarInvariant>,
}

impl PlanarTable {
    pub fn build(registry: Registry<dyn PlanarInvariant>) -> Result<Self> {
        let strategies = InvariantKind::ALL.map(|k| registry.get(k.name()));
        let strategies = strategies.into_iter().collect::<Result<Vec<_>>>()?;
        // rows[0] is a placeholder so that rows[d] is degree d.
        let mut rows = vec![Row::default()];
        for d in 1..=MAX_DEGREE {
            let prev = rows[d as usize - 1];
            let mut row = Row::default();
            for s in &strategies {
                let v = match s.base(d) {
                    Some(v) => v,
                    None if d == 1 => return Err(Error::domain(format!("no degree-1 value for {}", s.kind()))),
                    None => s.step(d, &prev),
                };
                row.0[s.kind().index()] = v;
            }
            rows.push(row);
        }
        Ok(PlanarTable { rows, registry })
    }

    fn check_degree(d: u32) -> Result<()> {
        if !(1..=MAX_DEGREE).contains(&d) {
            return Err(Error::domain(format!("degree {d} outside 1..={MAX_DEGREE}")));
        }
        Ok(())
    }

    pub fn count(&self, kind: InvariantKind, d: u32) -> Result<u64> {
        Self::check_degree(d)?;
        Ok(self.rows[d as usize].get(kind))
    }

    pub fn degeneration(&self, kind: InvariantKind, d: u32) -> Result<Degeneration> {
        if d < 3 {
            return Err(Error::domain("the line-point degeneration needs d >= 3"));
        }
        Self::check_degree(d)?;
        self.registry
            .get(kind.name())?
            .degeneration(d, &self.rows[d as usize - 1])
            .ok_or_else(|| Error::domain(format!("{kind} has no line-point degeneration")))
    }

    /// N_d(kind, k): the count with `k` of the point conditions on a fixed line.
    pub fn count_with_line_points(&self, kind: InvariantKind, d: u32, k: u32) -> Result<u64> {
        if !kind.is_singular() {
            return Err(Error::domain(format!("{kind} has no line-point variant")));
        }
        if k > d {
            return Err(Error::domain(format!("k = {k} exceeds d = {d}")));
        }
        let n = self.count(kind, d)?;
        if k < d {
            return Ok(n);
        }
        let deg = self.degeneration(kind, d)?;
        n.checked_sub(deg.smoothing)
            .ok_or_else(|| Error::Consistency(format!("negative N_{d}({kind}, {d})")))
    }
}

fn shared() -> &'static PlanarTable {
    static TABLE: OnceLock<PlanarTable> = OnceLock::new();
    TABLE.get_or_init(|| PlanarTable::build(default_registry()).expect("built-in registry is complete"))
}

/// N_d(kind).
pub fn count(kind: InvariantKind, d: u32) -> Result<u64> {
    shared().count(kind, d)
}

/// N_d(kind, k).
pub fn count_with_line_points(kind: InvariantKind, d: u32, k: u32) -> Result<u64> {
    shared().count_with_line_points(kind, d, k)
}

/// The degeneration split of N_d(kind) for d >= 3.
pub fn degeneration(kind: InvariantKind, d: u32) -> Result<Degeneration> {
    shared().degeneration(kind, d)
}

/// A `(kind, d, k)` query.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CountQuery {
    pub kind: InvariantKind,
    pub d: u32,
    pub k: Option<u32>,
}

impl CountQuery {
    pub fn new(kind: InvariantKind, d: u32, k: Option<u32>) -> Result<Self> {
        if d < 1 {
            return Err(Error::domain("degree must be at least 1"));
        }
        if k.is_some_and(|k| k > d) {
            return Err(Error::domain("k must not exceed d"));
        }
        Ok(CountQuery { kind, d, k })
    }

    pub fn evaluate(&self) -> Result<u64> {
        match self.k {
            None => count(self.kind, self.d),
            Some(k) => count_with_line_points(self.kind, self.d, k),
        }
    }
}
