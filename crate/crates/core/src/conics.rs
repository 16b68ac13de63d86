//! Degenerate cubics: a line plus a conic, or three lines, in a common plane.
//!
//! When the node of a planar cubic is forced onto a marked point, the family
//! picks up boundary components made of reducible cubics. Their classes live
//! in the conic-family and three-lines-family rings; pairing them with a
//! test class `mu` from the cubic family requires rewriting the cubic's
//! hyperplane class `l3` as the sum of the components' classes first.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::registry::Registry;
use crate::ring::{rat, Monomial, PreparedClass, Rational, RingElement, RingSpec};
use crate::spaces::{self, SpaceKind};

/// Total degree of the test class `mu` paired against the four-point classes.
pub const MU_DEGREE: u32 = 13;

/// Chern data of the tangency bundle on the conic family with one marked point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TangencyBundleData {
    pub c1_w: RingElement,
    pub c2_w: RingElement,
    pub c1_l: RingElement,
    pub euler_tangency: RingElement,
}

impl TangencyBundleData {
    pub fn new(ring: &RingSpec) -> Result<Self> {
        let c1_w = ring.linear(&[(3, "B1"), (-1, "a")])?;
        let a = ring.var("a")?;
        let b = ring.var("B1")?;
        let c2_w = ring.multiply(&a, &a)? - ring.multiply(&a, &b)?.scale(&rat(2)) + ring.multiply(&b, &b)?.scale(&rat(3));
        // The line bundle is W modulo the tangent direction of the line.
        let c1_l = c1_w.clone() - spaces::line_incidence(ring, "B1")?;
        let euler_tangency = spaces::curve_incidence(ring, 2, "B1")? - c1_l.clone();
        Ok(TangencyBundleData { c1_w, c2_w, c1_l, euler_tangency })
    }
}

/// Exponents of `mu = l1^m l3^(13 - sum) H1^n1 .. H4^n4 a^l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TIndex {
    pub m: u32,
    pub n: [u32; 4],
    pub l: u32,
}

impl TIndex {
    pub fn new(m: u32, n: [u32; 4], l: u32) -> Self {
        TIndex { m, n, l }
    }

    /// The `l3` exponent, or `None` if negative.
    pub fn lambda3_exponent(&self) -> Option<u32> {
        MU_DEGREE.checked_sub(self.m + self.n.iter().sum::<u32>() + self.l)
    }

    /// Same index with `n1 <= n2 <= n3`.
    pub fn canonical(&self) -> Self {
        let mut n = self.n;
        n[..3].sort_unstable();
        TIndex { n, ..*self }
    }
}

/// A boundary class together with the space it lives in.
pub trait DegenerateClass: Send + Sync {
    fn space(&self) -> SpaceKind;

    /// Generators whose sum is the pullback of `l3`.
    fn lambda3_parts(&self) -> &'static [&'static str];

    fn build(&self, ring: &RingSpec) -> Result<RingElement>;
}

fn node_on_conic(ring: &RingSpec) -> Result<Vec<RingElement>> {
    Ok(vec![
        spaces::plane_incidence(ring, "B1")?,
        spaces::line_incidence(ring, "B1")?,
        spaces::curve_incidence(ring, 2, "B1")?,
    ])
}

fn on_line_and_plane(ring: &RingSpec, points: impl IntoIterator<Item = u32>) -> Result<Vec<RingElement>> {
    let mut out = Vec::new();
    for j in points {
        let h = format!("H{j}");
        out.push(spaces::plane_incidence(ring, &h)?);
        out.push(spaces::line_incidence(ring, &h)?);
    }
    Ok(out)
}

const CONIC_PARTS: &[&str] = &["l1", "l2"];
const LINES_PARTS: &[&str] = &["l1", "l1p", "l1pp"];

/// Node at the line-conic intersection, three free points on the line.
struct R3;

impl DegenerateClass for R3 {
    fn space(&self) -> SpaceKind {
        SpaceKind::Conic { m: 1, n: 3 }
    }

    fn lambda3_parts(&self) -> &'static [&'static str] {
        CONIC_PARTS
    }

    fn build(&self, ring: &RingSpec) -> Result<RingElement> {
        let mut f = node_on_conic(ring)?;
        f.extend(on_line_and_plane(ring, 1..=3)?);
        ring.product(&f)
    }
}

/// Node at the line-conic intersection and equal to the i-th marked point;
/// the other three points on the line.
struct R4 {
    i: u32,
}

impl DegenerateClass for R4 {
    fn space(&self) -> SpaceKind {
        SpaceKind::Conic { m: 1, n: 4 }
    }

    fn lambda3_parts(&self) -> &'static [&'static str] {
        CONIC_PARTS
    }

    fn build(&self, ring: &RingSpec) -> Result<RingElement> {
        let mut f = node_on_conic(ring)?;
        f.push(spaces::diagonal(ring, &format!("H{}", self.i), "B1")?);
        f.extend(on_line_and_plane(ring, (1..=4).filter(|&j| j != self.i))?);
        ring.product(&f)
    }
}

/// Three lines, the node at the meeting point of the second and third; the
/// four marked points on the first. Halved for the swap of the two lines.
struct RA1F;

impl DegenerateClass for RA1F {
    fn space(&self) -> SpaceKind {
        SpaceKind::ThreeLines { m: 1, n: 4 }
    }

    fn lambda3_parts(&self) -> &'static [&'static str] {
        LINES_PARTS
    }

    fn build(&self, ring: &RingSpec) -> Result<RingElement> {
        let mut f = vec![
            spaces::plane_incidence(ring, "B1")?,
            ring.linear(&[(1, "l1p"), (1, "B1")])?,
            ring.linear(&[(1, "l1pp"), (1, "B1")])?,
            RingElement::constant(Rational::new(1.into(), 2.into())),
        ];
        f.extend(on_line_and_plane(ring, 1..=4)?);
        ring.product(&f)
    }
}

/// Line tangent to the conic at the node point, four points on the line.
struct RT1;

impl DegenerateClass for RT1 {
    fn space(&self) -> SpaceKind {
        SpaceKind::Conic { m: 1, n: 4 }
    }

    fn lambda3_parts(&self) -> &'static [&'static str] {
        CONIC_PARTS
    }

    fn build(&self, ring: &RingSpec) -> Result<RingElement> {
        let mut f = node_on_conic(ring)?;
        f.push(TangencyBundleData::new(ring)?.euler_tangency);
        f.extend(on_line_and_plane(ring, 1..=4)?);
        ring.product(&f)
    }
}

/// The built-in classes: `r3`, `r4:1`..`r4:3`, `ra1f`, `rt1`.
pub fn default_registry() -> Registry<dyn DegenerateClass> {
    let mut r: Registry<dyn DegenerateClass> = Registry::new("class");
    r.register("r3", Arc::new(R3)).unwrap();
    for i in 1..=3 {
        r.register(&format!("r4:{i}"), Arc::new(R4 { i })).unwrap();
    }
    r.register("ra1f", Arc::new(RA1F)).unwrap();
    r.register("rt1", Arc::new(RT1)).unwrap();
    r
}

struct LoadedClass {
    ring: Arc<RingSpec>,
    element: RingElement,
    prepared: PreparedClass,
    parts: &'static [&'static str],
}

/// Evaluates pairings of the boundary classes with cubic-family classes.
pub struct ConicEvaluator {
    /// Source ring for `mu`: cubic classes and free points.
    source: RingSpec,
    classes: HashMap<String, LoadedClass>,
    substituted: RwLock<HashMap<(SpaceKind, u32, u32, u32), RingElement>>,
    t_memo: RwLock<HashMap<TIndex, Rational>>,
}

impl std::fmt::Debug for ConicEvaluator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut names: Vec<_> = self.classes.keys().collect();
        names.sort();
        f.debug_struct("ConicEvaluator").field("classes", &names).finish()
    }
}

impl ConicEvaluator {
    pub fn new() -> Result<Self> {
        Self::with_registry(&default_registry())
    }

    pub fn with_registry(registry: &Registry<dyn DegenerateClass>) -> Result<Self> {
        let mut rings: HashMap<SpaceKind, Arc<RingSpec>> = HashMap::new();
        let mut classes = HashMap::new();
        for (name, class) in registry.iter() {
            let space = class.space();
            let ring = match rings.get(&space) {
                Some(r) => Arc::clone(r),
                None => {
                    let r = Arc::new(spaces::build_ring(space)?);
                    rings.insert(space, Arc::clone(&r));
                    r
                }
            };
            let element = class.build(&ring)?;
            let prepared = ring.prepare(&element)?;
            classes.insert(name.to_string(), LoadedClass { ring, element, prepared, parts: class.lambda3_parts() });
        }
        Ok(ConicEvaluator {
            source: spaces::build_ring(SpaceKind::Cubic { m: 0, n: 4 })?,
            classes,
            substituted: RwLock::new(HashMap::new()),
            t_memo: RwLock::new(HashMap::new()),
        })
    }

    fn loaded(&self, name: &str) -> Result<&LoadedClass> {
        self.classes.get(name).ok_or_else(|| Error::domain(format!("unknown class `{name}`")))
    }

    /// The class `name` in normal form, with its ring.
    pub fn class(&self, name: &str) -> Result<(&RingSpec, &RingElement)> {
        let c = self.loaded(name)?;
        Ok((&c.ring, &c.element))
    }

    /// `l1^m l3^j a^l` pulled back to the class's space.
    fn pulled_back(&self, c: &LoadedClass, space: SpaceKind, m: u32, j: u32, l: u32) -> Result<RingElement> {
        let key = (space, m, j, l);
        if let Some(e) = self.substituted.read().unwrap_or_else(|p| p.into_inner()).get(&key) {
            return Ok(e.clone());
        }
        let mu = self.source.monomial(&[("l1", m), ("l3", j), ("a", l)])?;
        let e = self.pull_back_element(c, &mu.into())?;
        self.substituted.write().unwrap_or_else(|p| p.into_inner()).insert(key, e.clone());
        Ok(e)
    }

    fn pull_back_element(&self, c: &LoadedClass, mu: &RingElement) -> Result<RingElement> {
        let parts: Vec<(i64, &str)> = c.parts.iter().map(|&p| (1, p)).collect();
        let replacement = c.ring.linear(&parts)?;
        self.source.substitute(mu, "l3", &replacement, &c.ring)
    }

    /// `integral(class * mu)` for `mu = l1^m l3^j a^l * prod H_i^(n_i)`.
    fn pair_split(&self, name: &str, m: u32, j: u32, l: u32, n: &[u32]) -> Result<Rational> {
        let c = self.loaded(name)?;
        let space = self.classes[name].ring.name().to_string();
        let kind = spaces_kind_of(&space)?;
        let base = self.pulled_back(c, kind, m, j, l)?;
        let points = n
            .iter()
            .enumerate()
            .map(|(i, &e)| c.ring.gen_id(&format!("H{}", i + 1)).map(|g| (g, e)))
            .collect::<Result<Vec<_>>>()?;
        let mu = base.mul_raw(&Monomial::from_exponents(points).into());
        c.ring.pair(&c.prepared, &mu)
    }

    /// `integral(class * mu)` where `mu` is a monomial written either in the
    /// class's own ring or in cubic-family classes (`l3`, `H1..H4`, ...).
    pub fn pair_monomial(&self, name: &str, mu: &str) -> Result<Rational> {
        let c = self.loaded(name)?;
        let element = match c.ring.parse_monomial(mu) {
            Ok(m) => c.ring.normalize(&m.into())?,
            Err(_) => self.pull_back_element(c, &self.source.parse_monomial(mu)?.into())?,
        };
        c.ring.pair(&c.prepared, &element)
    }

    /// The right-hand side `T` of the phi recursion.
    pub fn eval_t(&self, idx: TIndex) -> Result<Rational> {
        if idx.lambda3_exponent().is_none() {
            return Ok(Rational::zero());
        }
        let key = idx.canonical();
        if let Some(v) = self.t_memo.read().unwrap_or_else(|p| p.into_inner()).get(&key) {
            return Ok(v.clone());
        }
        let total = self.eval_t_uncached(key)?;
        self.t_memo.write().unwrap_or_else(|p| p.into_inner()).insert(key, total.clone());
        Ok(total)
    }

    /// [`Self::eval_t`] without the memo or reordering of the marked points.
    pub fn eval_t_uncached(&self, idx: TIndex) -> Result<Rational> {
        let Some(j) = idx.lambda3_exponent() else {
            return Ok(Rational::zero());
        };
        let (m, l, n) = (idx.m, idx.l, &idx.n[..]);
        let mut total = Rational::zero();
        for i in 1..=3 {
            total += self.pair_split(&format!("r4:{i}"), m, j, l, n)?;
        }
        total += self.pair_split("ra1f", m, j, l, n)?;
        total += self.pair_split("rt1", m, j, l, n)? * rat(2);
        Ok(total)
    }

    /// `integral(R3 * l1^m l3^j a^l)` over the three-point conic family.
    pub fn eval_r3_paired(&self, m: u32, j: u32, l: u32) -> Result<Rational> {
        if m + j + l != MU_DEGREE {
            return Ok(Rational::zero());
        }
        self.pair_split("r3", m, j, l, &[])
    }
}

fn spaces_kind_of(ring_name: &str) -> Result<SpaceKind> {
    let (name, rest) = ring_name.split_once('(').ok_or_else(|| Error::domain("malformed ring name"))?;
    let (m, n) = rest.trim_end_matches(')').split_once(',').ok_or_else(|| Error::domain("malformed ring name"))?;
    let parse = |s: &str| s.parse::<u32>().map_err(|_| Error::domain("malformed ring name"));
    SpaceKind::from_name(name, parse(m)?, parse(n)?)
}
