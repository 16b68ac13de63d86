//! Tangency counts for random linear systems of plane curves.
//!
//! * Pencils `f0 + t f1` restricted to a line: members tangent to the line
//!   are the roots of the discriminant in `t`.
//! * Nets `f0 + s f1 + t f2` restricted to a line: members with a triple
//!   root on the line correspond to roots of the Wronskian of the three
//!   restrictions.
//! * Nets with a prescribed point of tangency: two linear conditions on the
//!   net's projective parameters.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ring::{rat, Rational};

/// Random coefficients are drawn from `-COEFF_RANGE..=COEFF_RANGE`; a wide
/// range makes accidental coincidences (repeated roots) unlikely.
const COEFF_RANGE: i64 = 1_000_000;

/// Dense univariate polynomial, lowest degree first, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly(Vec<Rational>);

impl Poly {
    pub fn new(mut c: Vec<Rational>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        Poly(c)
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Poly::new(c.iter().map(|&v| rat(v)).collect())
    }

    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, with the zero polynomial at `None`.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.0.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        Poly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.scale(&rat(-1)))
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        Poly::new(self.0.iter().map(|v| v * c).collect())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(self.0.iter().enumerate().skip(1).map(|(i, v)| v * rat(i as i64)).collect())
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.0.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }

    /// Quotient and remainder.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by zero polynomial");
        let lead = d.0[dd].clone();
        let mut rem = self.0.clone();
        let mut quot = vec![Rational::zero(); self.0.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let k = rem.len() - 1 - dd;
            let q = rem.last().unwrap() / &lead;
            for (i, c) in d.0.iter().enumerate() {
                rem[k + i] -= &q * c;
            }
            quot[k] = q;
            rem.pop();
            while rem.last().is_some_and(Zero::is_zero) {
                rem.pop();
            }
        }
        (Poly::new(quot), Poly::new(rem))
    }

    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a
    }

    /// Number of distinct complex roots.
    pub fn distinct_roots(&self) -> usize {
        let d = self.degree().unwrap_or(0);
        let g = self.gcd(&self.derivative());
        d - g.degree().unwrap_or(0)
    }

    /// The polynomial of degree `< points.len()` through the given values.
    pub fn interpolate(points: &[(Rational, Rational)]) -> Poly {
        let mut out = Poly::zero();
        for (i, (xi, yi)) in points.iter().enumerate() {
            let mut basis = Poly::from_ints(&[1]);
            let mut denom = Rational::one();
            for (j, (xj, _)) in points.iter().enumerate() {
                if i != j {
                    basis = basis.mul(&Poly::new(vec![-xj.clone(), Rational::one()]));
                    denom *= xi - xj;
                }
            }
            out = out.add(&basis.scale(&(yi / denom)));
        }
        out
    }
}

/// Determinant by fraction-exact Gaussian elimination.
pub fn determinant(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Rational::zero();
        };
        if p != col {
            m.swap(p, col);
            det = -det;
        }
        let pivot_row = m[col].clone();
        let pivot = &pivot_row[col];
        det *= pivot;
        for row in m.iter_mut().skip(col + 1) {
            let f = &row[col] / pivot;
            if f.is_zero() {
                continue;
            }
            for (x, p) in row.iter_mut().zip(&pivot_row).skip(col) {
                *x -= &f * p;
            }
        }
    }
    det
}

/// Rank over the rationals.
pub fn rank(mut m: Vec<Vec<Rational>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(p, r);
        let pivot_row = m[r].clone();
        for row in m.iter_mut().skip(r + 1) {
            let f = &row[c] / &pivot_row[c];
            for (x, p) in row.iter_mut().zip(&pivot_row).skip(c) {
                *x -= &f * p;
            }
        }
        r += 1;
    }
    r
}

/// Sylvester resultant of two univariate polynomials.
pub fn resultant(f: &Poly, g: &Poly) -> Rational {
    let (Some(m), Some(n)) = (f.degree(), g.degree()) else {
        return Rational::zero();
    };
    sylvester(f, m, g, n)
}

/// Sylvester determinant for `f`, `g` viewed with formal degrees `m`, `n`
/// (leading coefficients may vanish).
pub fn sylvester(f: &Poly, m: usize, g: &Poly, n: usize) -> Rational {
    let size = m + n;
    if size == 0 {
        return Rational::one();
    }
    let mut rows = Vec::with_capacity(size);
    for i in 0..n {
        let mut row = vec![Rational::zero(); size];
        for k in 0..=m {
            row[i + k] = f.coeff(m - k);
        }
        rows.push(row);
    }
    for i in 0..m {
        let mut row = vec![Rational::zero(); size];
        for k in 0..=n {
            row[i + k] = g.coeff(n - k);
        }
        rows.push(row);
    }
    determinant(rows)
}

/// A plane curve of degree d, as coefficients of `x^i y^j z^(d-i-j)`.
#[derive(Debug, Clone)]
pub struct PlaneCurve {
    degree: u32,
    coeffs: Vec<((u32, u32), Rational)>,
}

impl PlaneCurve {
    pub fn random(degree: u32, rng: &mut impl Rng) -> Self {
        let mut coeffs = Vec::new();
        for i in 0..=degree {
            for j in 0..=degree - i {
                coeffs.push(((i, j), rat(rng.gen_range(-COEFF_RANGE..=COEFF_RANGE))));
            }
        }
        PlaneCurve { degree, coeffs }
    }

    /// Restriction to the line `y = 0`, in the affine coordinate `x` (`z = 1`).
    pub fn restrict_to_line(&self) -> Poly {
        let mut c = vec![Rational::zero(); self.degree as usize + 1];
        for ((i, j), v) in &self.coeffs {
            if *j == 0 {
                c[*i as usize] += v;
            }
        }
        Poly::new(c)
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Members of a random pencil of degree-d curves tangent to a fixed line.
pub fn pencil_tangent_count(d: u32, seed: u64) -> usize {
    let mut r = rng(seed);
    let g0 = PlaneCurve::random(d, &mut r).restrict_to_line();
    let g1 = PlaneCurve::random(d, &mut r).restrict_to_line();
    // disc(t) = Res(g_t, g_t') / lead(g_t); the resultant has degree <= 2d - 1 in t.
    let samples: Vec<(Rational, Rational)> = (0..=2 * d as i64)
        .map(|t| {
            let t = rat(t);
            let g = g0.add(&g1.scale(&t));
            (t, sylvester(&g, d as usize, &g.derivative(), d as usize - 1))
        })
        .collect();
    let res = Poly::interpolate(&samples);
    let lead = Poly::new(vec![g0.coeff(d as usize), g1.coeff(d as usize)]);
    let (disc, rem) = res.div_rem(&lead);
    assert!(rem.is_zero(), "leading coefficient must divide the resultant");
    disc.distinct_roots()
}

/// Members of a random net of degree-d curves with a triple point of contact
/// with a fixed line.
pub fn net_triple_contact_count(d: u32, seed: u64) -> usize {
    let mut r = rng(seed);
    let g: Vec<Poly> = (0..3).map(|_| PlaneCurve::random(d, &mut r).restrict_to_line()).collect();
    let rows: Vec<Vec<Poly>> = g.iter().map(|p| vec![p.clone(), p.derivative(), p.derivative().derivative()]).collect();
    // W = det [[g_i, g_i', g_i'']], expanded along the first row.
    let minor = |r1: usize, r2: usize, c1: usize, c2: usize| {
        rows[r1][c1].mul(&rows[r2][c2]).sub(&rows[r1][c2].mul(&rows[r2][c1]))
    };
    let w = rows[0][0]
        .mul(&minor(1, 2, 1, 2))
        .sub(&rows[0][1].mul(&minor(1, 2, 0, 2)))
        .add(&rows[0][2].mul(&minor(1, 2, 0, 1)));
    if w.degree() != Some(3 * (d as usize).saturating_sub(2)) {
        return 0;
    }
    w.distinct_roots()
}

/// Of `trials` random nets of degree-d curves, how many have exactly one
/// member tangent to the line `y = 0` at the origin.
pub fn point_tangency_unique(d: u32, trials: usize, seed: u64) -> usize {
    let mut r = rng(seed);
    (0..trials)
        .filter(|_| {
            let net: Vec<Poly> = (0..3).map(|_| PlaneCurve::random(d, &mut r).restrict_to_line()).collect();
            let origin = Rational::zero();
            let m = vec![
                net.iter().map(|g| g.eval(&origin)).collect(),
                net.iter().map(|g| g.derivative().eval(&origin)).collect(),
            ];
            rank(m) == 2
        })
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_basics() {
        let p = Poly::from_ints(&[-1, 0, 1]);
        let q = Poly::from_ints(&[1, 1]);
        assert_eq!(p.div_rem(&q), (Poly::from_ints(&[-1, 1]), Poly::zero()));
        assert_eq!(p.gcd(&q).degree(), Some(1));
        assert_eq!(Poly::from_ints(&[1, 2, 1]).distinct_roots(), 1);
        assert_eq!(p.distinct_roots(), 2);
        let pts = [(rat(0), rat(1)), (rat(1), rat(0)), (rat(2), rat(1))];
        assert_eq!(Poly::interpolate(&pts), Poly::from_ints(&[1, -2, 1]));
    }

    #[test]
    fn resultant_detects_common_roots() {
        let f = Poly::from_ints(&[-1, 0, 1]);
        assert!(resultant(&f, &Poly::from_ints(&[1, 1])).is_zero());
        // Res(x^2 - 1, x - 2) = (2 - 1)(2 + 1)
        assert_eq!(resultant(&f, &Poly::from_ints(&[-2, 1])), rat(3));
    }

    #[test]
    fn determinants_and_ranks() {
        let m = vec![vec![rat(0), rat(2)], vec![rat(3), rat(4)]];
        assert_eq!(determinant(m.clone()), rat(-6));
        assert_eq!(rank(m), 2);
        assert_eq!(rank(vec![vec![rat(1), rat(2), rat(3)], vec![rat(2), rat(4), rat(6)]]), 1);
    }

    #[test]
    fn tangency_counts() {
        for d in 2..=4 {
            assert_eq!(pencil_tangent_count(d, 7 + d as u64), 2 * (d as usize - 1), "d={d}");
        }
        for d in 3..=4 {
            assert_eq!(net_triple_contact_count(d, 11 + d as u64), 3 * (d as usize - 2), "d={d}");
        }
        assert_eq!(point_tangency_unique(3, 100, 5), 100);
    }
}
