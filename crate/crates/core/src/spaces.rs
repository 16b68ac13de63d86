//! The parameter spaces of planar curves in P3 and their standard classes.
//!
//! A planar curve of degree d in P3 is a plane (a point of the dual P3,
//! class `a`) together with a curve in that plane, i.e. a point of the
//! projectivization of `Sym^d` of the tautological rank-3 bundle. Marked
//! points live in further copies of P3 with hyperplane classes `B_i`
//! (points carried by the singularity) and `H_j` (free marked points).

use std::fmt;

use crate::error::{Error, Result};
use crate::ring::{rat, GenId, Monomial, Rational, RingElement, RingSpec};

/// Chern data `(c1, c2, c3)` of the bundle whose projectivization carries
/// the given curve degree; the hyperplane class `x` of a rank-`r` bundle
/// satisfies `x^r + c1 x^(r-1) a + c2 x^(r-2) a^2 + c3 x^(r-3) a^3 = 0`.
const LINE_BUNDLE: (u32, [i64; 3]) = (3, [1, 1, 1]);
const CONIC_BUNDLE: (u32, [i64; 3]) = (6, [4, 10, 20]);
const CUBIC_BUNDLE: (u32, [i64; 3]) = (10, [10, 55, 220]);

/// Which parameter space: `m` singular points (`B`) and `n` free points (`H`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpaceKind {
    /// Planar cubics.
    Cubic { m: u32, n: u32 },
    /// A line and a conic in a common plane.
    Conic { m: u32, n: u32 },
    /// Three lines in a common plane.
    ThreeLines { m: u32, n: u32 },
}

impl SpaceKind {
    pub fn from_name(name: &str, m: u32, n: u32) -> Result<Self> {
        let kind = match name {
            "cubic" => SpaceKind::Cubic { m, n },
            "conic" => SpaceKind::Conic { m, n },
            "three-lines" => SpaceKind::ThreeLines { m, n },
            other => return Err(Error::domain(format!("unknown space `{other}` (cubic, conic, three-lines)"))),
        };
        kind.validate()?;
        Ok(kind)
    }

    pub fn m(self) -> u32 {
        match self {
            SpaceKind::Cubic { m, .. } | SpaceKind::Conic { m, .. } | SpaceKind::ThreeLines { m, .. } => m,
        }
    }

    pub fn n(self) -> u32 {
        match self {
            SpaceKind::Cubic { n, .. } | SpaceKind::Conic { n, .. } | SpaceKind::ThreeLines { n, .. } => n,
        }
    }

    pub fn validate(self) -> Result<()> {
        if self.m() > 1 || self.n() > 4 {
            return Err(Error::domain(format!("unsupported space shape {self} (need m <= 1, n <= 4)")));
        }
        Ok(())
    }

    /// The curve-class generators with their bundle data.
    fn curve_generators(self) -> Vec<(&'static str, (u32, [i64; 3]))> {
        match self {
            SpaceKind::Cubic { .. } => vec![("l1", LINE_BUNDLE), ("l3", CUBIC_BUNDLE)],
            SpaceKind::Conic { .. } => vec![("l1", LINE_BUNDLE), ("l2", CONIC_BUNDLE)],
            SpaceKind::ThreeLines { .. } => {
                vec![("l1", LINE_BUNDLE), ("l1p", LINE_BUNDLE), ("l1pp", LINE_BUNDLE)]
            }
        }
    }

    pub fn dimension(self) -> u32 {
        let fibers: u32 = self.curve_generators().iter().map(|(_, (rank, _))| rank - 1).sum();
        3 + fibers + 3 * (self.m() + self.n())
    }
}

impl fmt::Display for SpaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            SpaceKind::Cubic { .. } => "cubic",
            SpaceKind::Conic { .. } => "conic",
            SpaceKind::ThreeLines { .. } => "three-lines",
        };
        write!(f, "{name}({},{})", self.m(), self.n())
    }
}

fn bundle_relation(x: GenId, a: GenId, (rank, c): (u32, [i64; 3])) -> RingElement {
    RingElement::from_terms(
        c.iter()
            .enumerate()
            .map(|(k, &ck)| (Monomial::from_exponents([(x, rank - 1 - k as u32), (a, k as u32 + 1)]), rat(-ck))),
    )
}

/// Builds the cohomology ring of the space.
///
/// Generators come in the order `a`, curve classes, `B1..Bm`, `H1..Hn`.
pub fn build_ring(kind: SpaceKind) -> Result<RingSpec> {
    kind.validate()?;
    let mut b = RingSpec::builder(&kind.to_string());
    let a = b.generator("a")?;
    b.nilpotent(a, 4)?;
    let mut fundamental = vec![(a, 3)];
    for (name, data) in kind.curve_generators() {
        let x = b.generator(name)?;
        b.rule(x, data.0, bundle_relation(x, a, data))?;
        fundamental.push((x, data.0 - 1));
    }
    let points = (1..=kind.m()).map(|i| format!("B{i}")).chain((1..=kind.n()).map(|j| format!("H{j}")));
    for name in points {
        let p = b.generator(&name)?;
        b.nilpotent(p, 4)?;
        fundamental.push((p, 3));
    }
    b.build(Monomial::from_exponents(fundamental))
}

fn is_point_class(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some('B' | 'H')) && !chars.as_str().is_empty() && chars.all(|c| c.is_ascii_digit())
}

fn point_class(ring: &RingSpec, pt: &str) -> Result<RingElement> {
    if !is_point_class(pt) {
        return Err(Error::domain(format!("`{pt}` is not a marked-point class")));
    }
    ring.var(pt)
}

/// Class of "the marked point lies on the plane": `a + X`.
pub fn plane_incidence(ring: &RingSpec, pt: &str) -> Result<RingElement> {
    Ok(ring.var("a")? + point_class(ring, pt)?)
}

/// Class of "the marked point lies on the line": `l1 + X`.
pub fn line_incidence(ring: &RingSpec, pt: &str) -> Result<RingElement> {
    curve_incidence(ring, 1, pt)
}

/// Class of "the marked point lies on the degree-`d` curve": `l_d + d X`.
pub fn curve_incidence(ring: &RingSpec, d: u32, pt: &str) -> Result<RingElement> {
    let curve = match d {
        1 => "l1",
        2 => "l2",
        3 => "l3",
        _ => return Err(Error::domain(format!("no curve class of degree {d}"))),
    };
    Ok(ring.var(curve)? + point_class(ring, pt)?.scale(&rat(d as i64)))
}

/// Diagonal class of two marked points: `X^3 + X^2 Y + X Y^2 + Y^3`.
pub fn diagonal(ring: &RingSpec, x: &str, y: &str) -> Result<RingElement> {
    if x == y {
        return Err(Error::domain(format!("diagonal of `{x}` with itself")));
    }
    point_class(ring, x)?;
    point_class(ring, y)?;
    let (xi, yi) = (ring.gen_id(x)?, ring.gen_id(y)?);
    Ok(RingElement::from_terms(
        (0..=3).map(|k| (Monomial::from_exponents([(xi, 3 - k), (yi, k)]), Rational::from_integer(1.into()))),
    ))
}

/// Point and line conditions on a planar cubic in P3.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct P3Constraints {
    pub line_meets_line: RingElement,
    pub line_meets_point: RingElement,
    pub cubic_meets_line: RingElement,
    pub cubic_meets_point: RingElement,
}

pub fn p3_constraint_classes(ring: &RingSpec) -> Result<P3Constraints> {
    let (a, l1, l3) = (ring.var("a")?, ring.var("l1")?, ring.var("l3")?);
    Ok(P3Constraints {
        line_meets_line: l1.clone() + a.clone(),
        line_meets_point: ring.multiply(&l1, &a)?,
        cubic_meets_line: ring.linear(&[(1, "l3"), (3, "a")])?,
        cubic_meets_point: ring.multiply(&l3, &a)?,
    })
}

/// Class of the locus where every marked point lies on the plane.
pub fn family_cycle(ring: &RingSpec) -> Result<RingElement> {
    let factors = ring
        .generators()
        .iter()
        .filter(|g| is_point_class(g.name()))
        .map(|g| plane_incidence(ring, g.name()))
        .collect::<Result<Vec<_>>>()?;
    ring.product(&factors)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimensions_and_fundamentals() {
        let r = build_ring(SpaceKind::Cubic { m: 1, n: 4 }).unwrap();
        assert_eq!(r.dimension(), 29);
        assert_eq!(r.format_monomial(r.fundamental()), "a^3*l1^2*l3^9*B1^3*H1^3*H2^3*H3^3*H4^3");
        assert_eq!(build_ring(SpaceKind::Conic { m: 1, n: 3 }).unwrap().dimension(), 22);
        assert_eq!(build_ring(SpaceKind::ThreeLines { m: 1, n: 4 }).unwrap().dimension(), 24);
        for kind in [SpaceKind::Cubic { m: 0, n: 2 }, SpaceKind::Conic { m: 1, n: 0 }] {
            assert_eq!(build_ring(kind).unwrap().dimension(), kind.dimension());
        }
    }

    #[test]
    fn shapes_are_bounded() {
        assert!(build_ring(SpaceKind::Cubic { m: 2, n: 0 }).is_err());
        assert!(build_ring(SpaceKind::Conic { m: 0, n: 5 }).is_err());
        assert!(SpaceKind::from_name("quartic", 0, 0).is_err());
    }

    #[test]
    fn incidence_classes() {
        let r = build_ring(SpaceKind::Cubic { m: 1, n: 4 }).unwrap();
        assert_eq!(r.format_element(&plane_incidence(&r, "H1").unwrap()), "H1 + a");
        assert_eq!(r.format_element(&plane_incidence(&r, "B1").unwrap()), "B1 + a");
        assert_eq!(r.format_element(&curve_incidence(&r, 3, "H4").unwrap()), "3*H4 + l3");
        assert_eq!(r.format_element(&line_incidence(&r, "H2").unwrap()), "H2 + l1");
        assert!(plane_incidence(&r, "l1").is_err());
        assert!(curve_incidence(&r, 4, "H1").is_err());
        assert!(curve_incidence(&r, 2, "H1").is_err(), "no conic class in the cubic ring");
        let c = build_ring(SpaceKind::Conic { m: 1, n: 4 }).unwrap();
        assert_eq!(c.format_element(&curve_incidence(&c, 2, "B1").unwrap()), "2*B1 + l2");
    }

    #[test]
    fn diagonals() {
        let r = build_ring(SpaceKind::Conic { m: 1, n: 4 }).unwrap();
        assert_eq!(r.format_element(&diagonal(&r, "H1", "B1").unwrap()), "H1^3 + B1^3 + B1^2*H1 + B1*H1^2");
        assert_eq!(diagonal(&r, "H3", "H4").unwrap(), diagonal(&r, "H4", "H3").unwrap());
        assert!(diagonal(&r, "H1", "H1").is_err());
    }

    #[test]
    fn constraint_classes() {
        let r = build_ring(SpaceKind::Cubic { m: 0, n: 0 }).unwrap();
        let c = p3_constraint_classes(&r).unwrap();
        assert_eq!(r.format_element(&c.cubic_meets_line), "l3 + 3*a");
        assert_eq!(r.format_element(&c.cubic_meets_point), "a*l3");
        assert_eq!(r.format_element(&c.line_meets_line), "l1 + a");
        assert_eq!(r.format_element(&c.line_meets_point), "a*l1");
        let conic = build_ring(SpaceKind::Conic { m: 0, n: 0 }).unwrap();
        assert!(p3_constraint_classes(&conic).is_err());
    }

    #[test]
    fn top_degree_integrals() {
        for kind in [
            SpaceKind::Cubic { m: 1, n: 4 },
            SpaceKind::Conic { m: 1, n: 4 },
            SpaceKind::ThreeLines { m: 1, n: 4 },
            SpaceKind::Conic { m: 0, n: 1 },
        ] {
            let r = build_ring(kind).unwrap();
            for m in r.normal_monomials(r.dimension()) {
                let expected = if &m == r.fundamental() { 1 } else { 0 };
                assert_eq!(r.integrate(&m.clone().into()), rat(expected), "{kind} {}", r.format_monomial(&m));
            }
        }
    }
}
