//! Characteristic numbers of nodal planar cubics in P3.
//!
//! The unknowns `phi` are pairings of the nodal-cubic class (with three
//! marked points on the cubic and a fourth at the node) against monomials
//! `l1^m l3^j a^l H1^n1 H2^n2 H3^n3 H4^3`. Pairing the family identity for
//! "the fourth point lies on the cubic" with every test class `mu` gives a
//! linear system whose right-hand sides come from the degenerate line-plus-
//! conic classes in [`crate::conics`]. Solving it and dividing out the
//! ordering of the three marked points yields N(r, s): the number of nodal
//! planar cubics meeting r general lines and s general points.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::conics::{ConicEvaluator, TIndex, MU_DEGREE};
use crate::error::{Error, Result};
use crate::registry::Registry;
use crate::ring::{format_rational, rat, Monomial, Rational, RingElement, RingSpec};
use crate::spaces::{self, SpaceKind};

/// Upper bounds (inclusive) of the normal-form exponents.
const MAX_M: u32 = 2;
const MAX_J: u32 = 9;
const MAX_L: u32 = 3;
const MAX_N: u32 = 3;

/// The sum `m + r + 2s` must reach this for N(r, s) to be defined.
const CONSTRAINT_DEGREE: u32 = 11;

/// `phi(m, n1, n2, n3, n4, l)`: the pairing against
/// `l1^m l3^(16 - m - sum n - l) H^n a^l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PhiIndex {
    pub m: u32,
    pub n: [u32; 4],
    pub l: u32,
}

impl PhiIndex {
    pub fn new(m: u32, n: [u32; 4], l: u32) -> Self {
        PhiIndex { m, n, l }
    }

    pub fn lambda3_exponent(&self) -> Option<u32> {
        (MU_DEGREE + 3).checked_sub(self.m + self.n.iter().sum::<u32>() + self.l)
    }

    /// Whether phi vanishes for degree reasons alone.
    pub fn is_trivially_zero(&self) -> bool {
        self.n[3] != 3 || self.n.iter().any(|&e| e > MAX_N) || self.lambda3_exponent().is_none()
    }
}

/// A normal-form monomial `l1^m l3^j a^l H1^n1 H2^n2 H3^n3` (with `H4^3`
/// implicit): one unknown of the system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PhiKey {
    pub m: u32,
    pub j: u32,
    pub l: u32,
    pub n: [u32; 3],
}

impl PhiKey {
    /// All unknowns, in a fixed order.
    pub fn all() -> Vec<PhiKey> {
        let mut out = Vec::new();
        for m in 0..=MAX_M {
            for l in 0..=MAX_L {
                for n in grid3() {
                    let used = m + l + n.iter().sum::<u32>();
                    if let Some(j) = MU_DEGREE.checked_sub(used).filter(|&j| j <= MAX_J) {
                        out.push(PhiKey { m, j, l, n });
                    }
                }
            }
        }
        out
    }

    pub fn index(&self) -> PhiIndex {
        PhiIndex { m: self.m, n: [self.n[0], self.n[1], self.n[2], 3], l: self.l }
    }

    fn canonical(&self) -> PhiKey {
        let mut n = self.n;
        n.sort_unstable();
        PhiKey { n, ..*self }
    }
}

fn grid3() -> impl Iterator<Item = [u32; 3]> {
    (0..=MAX_N).flat_map(|a| (0..=MAX_N).flat_map(move |b| (0..=MAX_N).map(move |c| [a, b, c])))
}

/// `sum lhs[k] * phi(k) = rhs`, generated from the test class `mu`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearEquation {
    pub mu: TIndex,
    pub lhs: BTreeMap<PhiKey, Rational>,
    pub rhs: Rational,
}

/// Solved values of every unknown.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiTable {
    values: BTreeMap<PhiKey, Rational>,
}

impl PhiTable {
    pub fn get(&self, key: &PhiKey) -> Option<&Rational> {
        self.values.get(key)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PhiKey, &Rational)> {
        self.values.iter()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    fn combine(&self, combo: &BTreeMap<PhiKey, Rational>) -> Result<Rational> {
        let mut total = Rational::zero();
        for (k, c) in combo {
            let v = self.values.get(k).ok_or_else(|| Error::Solver(format!("no value for {k:?}")))?;
            total += c * v;
        }
        Ok(total)
    }
}

/// The ring data, conic-side evaluator and generated equations.
pub struct PhiSystem {
    /// Cubic family with four free points.
    ring: RingSpec,
    /// The `a, l1, l3` subring, for rewriting test classes.
    base: RingSpec,
    conics: ConicEvaluator,
    extension: RwLock<HashMap<(u32, u32, u32), RingElement>>,
}

impl std::fmt::Debug for PhiSystem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PhiSystem").field("ring", &self.ring.name()).finish()
    }
}

impl PhiSystem {
    pub fn new() -> Result<Self> {
        Ok(PhiSystem {
            ring: spaces::build_ring(SpaceKind::Cubic { m: 0, n: 4 })?,
            base: spaces::build_ring(SpaceKind::Cubic { m: 0, n: 0 })?,
            conics: ConicEvaluator::new()?,
            extension: RwLock::new(HashMap::new()),
        })
    }

    pub fn conics(&self) -> &ConicEvaluator {
        &self.conics
    }

    /// Every test class `mu` with a non-negative `l3` exponent, in a fixed order.
    pub fn mu_grid() -> Vec<TIndex> {
        let mut out = Vec::new();
        for m in 0..=MAX_M {
            for l in 0..=MAX_L {
                for n4 in 1..=MAX_N {
                    for [n1, n2, n3] in grid3() {
                        let idx = TIndex::new(m, [n1, n2, n3, n4], l);
                        if idx.lambda3_exponent().is_some() {
                            out.push(idx);
                        }
                    }
                }
            }
        }
        out
    }

    /// `l1^m l3^j a^l` rewritten into normal form.
    fn normal_form(&self, m: u32, j: u32, l: u32) -> Result<RingElement> {
        if let Some(e) = self.extension.read().unwrap_or_else(|p| p.into_inner()).get(&(m, j, l)) {
            return Ok(e.clone());
        }
        let mono = self.base.monomial(&[("l1", m), ("l3", j), ("a", l)])?;
        let e = self.base.normalize(&mono.into())?;
        self.extension.write().unwrap_or_else(|p| p.into_inner()).insert((m, j, l), e.clone());
        Ok(e)
    }

    /// phi at an arbitrary monomial as a combination of unknowns.
    pub fn linear_extension(&self, m: u32, j: u32, l: u32, n: [u32; 3]) -> Result<BTreeMap<PhiKey, Rational>> {
        let mut out = BTreeMap::new();
        if m + j + l + n.iter().sum::<u32>() != MU_DEGREE || n.iter().any(|&e| e > MAX_N) {
            return Ok(out);
        }
        let (a, l1, l3) = (self.base.gen_id("a")?, self.base.gen_id("l1")?, self.base.gen_id("l3")?);
        for (mono, c) in self.normal_form(m, j, l)?.terms() {
            let key = PhiKey { m: mono.exponent(l1), j: mono.exponent(l3), l: mono.exponent(a), n };
            out.insert(key, c.clone());
        }
        Ok(out)
    }

    /// phi at a full index, from the solved unknowns.
    pub fn phi(&self, table: &PhiTable, idx: PhiIndex) -> Result<Rational> {
        if idx.is_trivially_zero() {
            return Ok(Rational::zero());
        }
        let j = idx.lambda3_exponent().expect("checked above");
        table.combine(&self.linear_extension(idx.m, j, idx.l, [idx.n[0], idx.n[1], idx.n[2]])?)
    }

    /// The equation obtained by pairing the identity with `mu`.
    pub fn equation(&self, mu: TIndex) -> Result<Option<LinearEquation>> {
        let Some(j) = mu.lambda3_exponent() else {
            return Ok(None);
        };
        let r = &self.ring;
        let h4 = r.gen_id("H4")?;
        let mut incidence = r.product(&[
            spaces::plane_incidence(r, "H4")?,
            spaces::line_incidence(r, "H4")?,
            spaces::curve_incidence(r, 3, "H4")?,
        ])?;
        for i in 1..=3 {
            incidence -= &spaces::diagonal(r, &format!("H{i}"), "H4")?;
        }
        let mono = r.monomial(&[
            ("l1", mu.m),
            ("l3", j),
            ("a", mu.l),
            ("H1", mu.n[0]),
            ("H2", mu.n[1]),
            ("H3", mu.n[2]),
            ("H4", mu.n[3]),
        ])?;
        let product = r.multiply(&incidence, &mono.into())?;
        let ids = ["l1", "l3", "a", "H1", "H2", "H3"].map(|g| r.gen_id(g)).into_iter().collect::<Result<Vec<_>>>()?;
        let mut lhs = BTreeMap::new();
        for (t, c) in product.terms() {
            // Only H4^3 survives: phi vanishes unless the node point carries H4^3.
            if t.exponent(h4) != 3 {
                continue;
            }
            let e: Vec<u32> = ids.iter().map(|&g| t.exponent(g)).collect();
            let key = PhiKey { m: e[0], j: e[1], l: e[2], n: [e[3], e[4], e[5]] };
            debug_assert_eq!(key.m + key.j + key.l + key.n.iter().sum::<u32>(), MU_DEGREE);
            lhs.insert(key, c.clone());
        }
        let rhs = self.conics.eval_t(mu)?;
        if lhs.is_empty() {
            if rhs.is_zero() {
                return Ok(None);
            }
            return Err(Error::Solver(format!("equation for {mu:?} has no unknowns but rhs {}", format_rational(&rhs))));
        }
        Ok(Some(LinearEquation { mu, lhs, rhs }))
    }

    pub fn generate_equations(&self) -> Result<Vec<LinearEquation>> {
        let mut out = Vec::new();
        for mu in Self::mu_grid() {
            if let Some(eq) = self.equation(mu)? {
                out.push(eq);
            }
        }
        Ok(out)
    }

    /// `T(m, n, n4, l)` with `T = 0` for a negative `l3` exponent.
    fn t(&self, m: u32, n: [u32; 3], n4: u32, l: u32) -> Result<Rational> {
        self.conics.eval_t(TIndex::new(m, [n[0], n[1], n[2], n4], l))
    }

    /// Right-hand side of the three-term recursion at `(m, n, l)`:
    /// `T(.., 1, ..) - 3 T(.., 2, ..) + 9 T(.., 3, ..)`.
    pub fn recursion_rhs(&self, m: u32, n: [u32; 3], l: u32) -> Result<Rational> {
        Ok(self.t(m, n, 1, l)? - self.t(m, n, 2, l)? * rat(3) + self.t(m, n, 3, l)? * rat(9))
    }

    /// Residuals of the recursion
    /// `phi(n) - sum phi(n+e_i) + 3 sum phi(n+2e_i) - 9 sum phi(n+3e_i) = rhs`
    /// over every full index, evaluated with `table`. Returns the indices
    /// where it fails.
    pub fn recursion_residuals(&self, table: &PhiTable) -> Result<Vec<(PhiIndex, Rational)>> {
        let mut bad = Vec::new();
        for m in 0..=MAX_M {
            for l in 0..=MAX_L {
                for n in grid3() {
                    let idx = PhiIndex::new(m, [n[0], n[1], n[2], 3], l);
                    if idx.lambda3_exponent().is_none() {
                        continue;
                    }
                    let mut lhs = self.phi(table, idx)?;
                    for (step, coeff) in [(1, -1), (2, 3), (3, -9)] {
                        for i in 0..3 {
                            let mut shifted = idx;
                            shifted.n[i] += step;
                            lhs += self.phi(table, shifted)? * rat(coeff);
                        }
                    }
                    let residual = lhs - self.recursion_rhs(m, n, l)?;
                    if !residual.is_zero() {
                        bad.push((idx, residual));
                    }
                }
            }
        }
        Ok(bad)
    }
}

pub trait PhiSolver: Send + Sync {
    fn solve(&self, system: &PhiSystem) -> Result<PhiTable>;
}

/// Exact Gauss-Jordan elimination over the full generated system.
pub struct Elimination;

impl PhiSolver for Elimination {
    fn solve(&self, system: &PhiSystem) -> Result<PhiTable> {
        let keys = PhiKey::all();
        let column: HashMap<PhiKey, usize> = keys.iter().enumerate().map(|(i, k)| (*k, i)).collect();
        let rows = system
            .generate_equations()?
            .into_iter()
            .map(|eq| {
                let row = eq.lhs.iter().map(|(k, c)| (column[k], c.clone())).collect();
                (row, eq.rhs)
            })
            .collect();
        let solution = solve_sparse(keys.len(), rows)?;
        Ok(PhiTable { values: keys.into_iter().zip(solution).collect() })
    }
}

type SparseRow = BTreeMap<usize, Rational>;

/// Solves a square-or-overdetermined sparse system exactly; fails unless the
/// solution exists and is unique.
fn solve_sparse(columns: usize, rows: Vec<(SparseRow, Rational)>) -> Result<Vec<Rational>> {
    // pivots[c] holds a row whose first column is c, scaled so that entry is 1.
    let mut pivots: Vec<Option<(SparseRow, Rational)>> = vec![None; columns];
    for (mut row, mut rhs) in rows {
        let mut cursor = 0;
        while let Some((&col, _)) = row.range(cursor..).next() {
            cursor = col + 1;
            let Some((prow, prhs)) = &pivots[col] else { continue };
            let factor = row.remove(&col).expect("present");
            for (&c, v) in prow.range(col + 1..) {
                let entry = row.entry(c).or_insert_with(Rational::zero);
                *entry -= &factor * v;
                if entry.is_zero() {
                    row.remove(&c);
                }
            }
            rhs -= &factor * prhs;
        }
        let Some((&lead, lead_val)) = row.iter().next() else {
            if !rhs.is_zero() {
                return Err(Error::Solver(format!("inconsistent system (residual {})", format_rational(&rhs))));
            }
            continue;
        };
        // After the sweep no remaining column has a pivot.
        let inv = lead_val.recip();
        for v in row.values_mut() {
            *v *= &inv;
        }
        rhs *= &inv;
        pivots[lead] = Some((row, rhs));
    }
    let missing = pivots.iter().filter(|p| p.is_none()).count();
    if missing > 0 {
        return Err(Error::Solver(format!("underdetermined system ({missing} free unknowns)")));
    }
    let mut solution = vec![Rational::zero(); columns];
    for c in (0..columns).rev() {
        let (row, rhs) = pivots[c].as_ref().expect("all pivots present");
        let mut v = rhs.clone();
        for (&k, coeff) in row.range(c + 1..) {
            v -= coeff * &solution[k];
        }
        solution[c] = v;
    }
    Ok(solution)
}

/// Back-substitution along the three-term recursion, starting from
/// `n = (3, 3, 3)` and descending in `n1 + n2 + n3`.
pub struct Descent;

impl PhiSolver for Descent {
    fn solve(&self, system: &PhiSystem) -> Result<PhiTable> {
        let mut values: HashMap<(u32, [u32; 3], u32), Rational> = HashMap::new();
        let lookup = |values: &HashMap<(u32, [u32; 3], u32), Rational>, m: u32, n: [u32; 3], l: u32| {
            let idx = PhiIndex::new(m, [n[0], n[1], n[2], 3], l);
            if idx.is_trivially_zero() {
                return Rational::zero();
            }
            let mut sorted = n;
            sorted.sort_unstable();
            values[&(m, sorted, l)].clone()
        };
        for m in 0..=MAX_M {
            for l in 0..=MAX_L {
                for total in (0..=3 * MAX_N).rev() {
                    for n in grid3().filter(|n| n.iter().sum::<u32>() == total && n.is_sorted()) {
                        if PhiIndex::new(m, [n[0], n[1], n[2], 3], l).is_trivially_zero() {
                            continue;
                        }
                        let mut v = system.recursion_rhs(m, n, l)?;
                        for (step, coeff) in [(1, 1), (2, -3), (3, 9)] {
                            for i in 0..3 {
                                let mut s = n;
                                s[i] += step;
                                v += lookup(&values, m, s, l) * rat(coeff);
                            }
                        }
                        values.insert((m, n, l), v);
                    }
                }
            }
        }
        let mut table = BTreeMap::new();
        for key in PhiKey::all() {
            let c = key.canonical();
            table.insert(key, values[&(c.m, c.n, c.l)].clone());
        }
        let table = PhiTable { values: table };
        // Indices with a large l3 exponent are not unknowns; their descent
        // values must match the rewritten combination of unknowns.
        for ((m, n, l), v) in &values {
            let idx = PhiIndex::new(*m, [n[0], n[1], n[2], 3], *l);
            if idx.lambda3_exponent().is_some_and(|j| j > MAX_J) && system.phi(&table, idx)? != *v {
                return Err(Error::Solver(format!("descent disagrees with the rewritten value at {idx:?}")));
            }
        }
        Ok(table)
    }
}

/// The built-in solvers: `descent` and `elimination`.
pub fn solver_registry() -> Registry<dyn PhiSolver> {
    let mut r: Registry<dyn PhiSolver> = Registry::new("solver");
    r.register("descent", Arc::new(Descent)).unwrap();
    r.register("elimination", Arc::new(Elimination)).unwrap();
    r
}

/// A solved system, ready to produce characteristic numbers.
#[derive(Debug)]
pub struct CubicCounts {
    system: PhiSystem,
    table: PhiTable,
}

impl CubicCounts {
    pub fn solve_with(solver: &str) -> Result<Self> {
        let system = PhiSystem::new()?;
        let table = solver_registry().get(solver)?.solve(&system)?;
        Ok(CubicCounts { system, table })
    }

    pub fn system(&self) -> &PhiSystem {
        &self.system
    }

    pub fn table(&self) -> &PhiTable {
        &self.table
    }

    pub fn phi(&self, idx: PhiIndex) -> Result<Rational> {
        self.system.phi(&self.table, idx)
    }

    /// The pairing of the nodal-cubic class (points unordered) with
    /// `l1^m l3^j a^l`.
    pub fn chain_a1f(&self, m: u32, j: u32, l: u32) -> Result<Rational> {
        if m + j + l != MU_DEGREE {
            return Ok(Rational::zero());
        }
        let phi = self.table.combine(&self.system.linear_extension(m, j, l, [0, 0, 0])?)?;
        let correction = self.system.conics.eval_r3_paired(m, j, l)?;
        Ok((phi + correction) / rat(6))
    }

    /// The class `(l3 + 3a)^r (l3 a)^s (l1 + a)^2` in normal form.
    fn constraint_class(&self, r: u32, s: u32) -> Result<RingElement> {
        let base = &self.system.base;
        let c = spaces::p3_constraint_classes(base)?;
        let lines = base.pow(&c.cubic_meets_line, r)?;
        let points = base.pow(&c.cubic_meets_point, s)?;
        let plane = base.pow(&c.line_meets_line, 2)?;
        base.product(&[lines, points, plane])
    }

    /// N(r, s): nodal planar cubics in P3 meeting r general lines and s general points.
    pub fn characteristic_number(&self, r: u32, s: u32) -> Result<BigInt> {
        if r + 2 * s != CONSTRAINT_DEGREE {
            return Ok(BigInt::zero());
        }
        let base = &self.system.base;
        let (a, l1, l3) = (base.gen_id("a")?, base.gen_id("l1")?, base.gen_id("l3")?);
        let mut total = Rational::zero();
        for (mono, c) in self.constraint_class(r, s)?.terms() {
            total += c * self.chain_a1f(mono.exponent(l1), mono.exponent(l3), mono.exponent(a))?;
        }
        if !total.is_integer() || total.is_negative() {
            return Err(Error::Consistency(format!("N({r},{s}) = {} is not a non-negative integer", format_rational(&total))));
        }
        Ok(total.to_integer())
    }
}

/// Solved once per process with the descent solver.
pub fn shared() -> Result<&'static CubicCounts> {
    static COUNTS: OnceLock<std::result::Result<CubicCounts, Error>> = OnceLock::new();
    COUNTS.get_or_init(|| CubicCounts::solve_with("descent")).as_ref().map_err(Clone::clone)
}

/// N(r, s) from the shared solution.
pub fn characteristic_number(r: u32, s: u32) -> Result<BigInt> {
    shared()?.characteristic_number(r, s)
}

/// N(r, s) as a machine integer.
pub fn characteristic_number_u64(r: u32, s: u32) -> Result<u64> {
    characteristic_number(r, s)?
        .to_u64()
        .ok_or_else(|| Error::Consistency(format!("N({r},{s}) does not fit in 64 bits")))
}

/// A monomial in the cubic-family ring for `phi` at a full index.
pub fn phi_monomial(ring: &RingSpec, idx: PhiIndex) -> Result<Option<Monomial>> {
    let Some(j) = idx.lambda3_exponent() else { return Ok(None) };
    let mut pairs = vec![("l1", idx.m), ("l3", j), ("a", idx.l)];
    let names = ["H1", "H2", "H3", "H4"];
    pairs.extend(names.iter().zip(idx.n).map(|(n, e)| (*n, e)));
    ring.monomial(&pairs).map(Some)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_count() {
        let keys = PhiKey::all();
        assert_eq!(keys.len(), 712);
        assert!(keys.iter().all(|k| k.m + k.j + k.l + k.n.iter().sum::<u32>() == MU_DEGREE));
    }

    #[test]
    fn trivial_zeros() {
        assert!(PhiIndex::new(0, [1, 1, 1, 2], 0).is_trivially_zero());
        assert!(PhiIndex::new(0, [4, 0, 0, 3], 0).is_trivially_zero());
        assert!(PhiIndex::new(2, [3, 3, 3, 3], 3).is_trivially_zero());
        assert!(!PhiIndex::new(2, [3, 3, 2, 3], 3).is_trivially_zero());
    }

    #[test]
    fn sparse_solver_edge_cases() {
        let row = |pairs: &[(usize, i64)]| pairs.iter().map(|&(c, v)| (c, rat(v))).collect::<SparseRow>();
        let ok = solve_sparse(2, vec![(row(&[(0, 1), (1, 1)]), rat(3)), (row(&[(0, 1), (1, -1)]), rat(1))]).unwrap();
        assert_eq!(ok, vec![rat(2), rat(1)]);
        let over = vec![
            (row(&[(0, 1), (1, 1)]), rat(3)),
            (row(&[(0, 1), (1, -1)]), rat(1)),
            (row(&[(0, 2)]), rat(4)),
        ];
        assert_eq!(solve_sparse(2, over).unwrap(), vec![rat(2), rat(1)]);
        let bad = vec![(row(&[(0, 1)]), rat(1)), (row(&[(0, 2)]), rat(3)), (row(&[(1, 1)]), rat(0))];
        assert!(matches!(solve_sparse(2, bad), Err(Error::Solver(_))));
        let under = vec![(row(&[(0, 1), (1, 1)]), rat(1))];
        assert!(matches!(solve_sparse(2, under), Err(Error::Solver(_))));
    }

    #[test]
    fn linear_extension_rewrites_large_powers() {
        let sys = PhiSystem::new().unwrap();
        let direct = sys.linear_extension(0, 9, 3, [1, 0, 0]).unwrap();
        assert_eq!(direct.len(), 1);
        // l3^10 = -10 l3^9 a - 55 l3^8 a^2 - 220 l3^7 a^3
        let big = sys.linear_extension(0, 10, 2, [1, 0, 0]).unwrap();
        assert_eq!(big.get(&PhiKey { m: 0, j: 9, l: 3, n: [1, 0, 0] }), Some(&rat(-10)));
        assert_eq!(big.len(), 1);
        assert!(sys.linear_extension(0, 9, 3, [4, 0, 0]).unwrap().is_empty());
    }

    #[test]
    fn unknown_solver_name() {
        assert!(CubicCounts::solve_with("gradient").is_err());
    }
}
