//! Graded commutative quotient rings generated by divisor classes.
//!
//! Every generator has degree one. Each generator `X` carries exactly one
//! rewrite rule `X^p -> r`, where `r` is homogeneous of degree `p` and has
//! `X`-exponent below `p` in every term. A rule with `r = 0` is a plain
//! nilpotency relation. Reduction to normal form applies these rules until
//! no exponent reaches its rule's power; integration reads off the
//! coefficient of the ring's fundamental monomial.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::RwLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;
pub type GenId = u16;

/// Shorthand for an integral rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Formats a rational as `p` or `p/q`.
pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// A degree-one generator of a [`RingSpec`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Generator {
    id: GenId,
    name: String,
}

impl Generator {
    pub fn id(&self) -> GenId {
        self.id
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn degree(&self) -> u32 {
        1
    }
}

/// A monomial in the generators of some ring, stored as sorted
/// `(generator, exponent)` pairs with no zero exponents.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<(GenId, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(id: GenId) -> Self {
        Monomial(vec![(id, 1)])
    }

    pub fn power(id: GenId, exp: u32) -> Self {
        if exp == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(id, exp)])
        }
    }

    /// Builds a monomial from arbitrary `(generator, exponent)` pairs; repeated
    /// generators are multiplied together.
    pub fn from_exponents<I: IntoIterator<Item = (GenId, u32)>>(pairs: I) -> Self {
        let mut acc: BTreeMap<GenId, u32> = BTreeMap::new();
        for (g, e) in pairs {
            *acc.entry(g).or_insert(0) += e;
        }
        Monomial(acc.into_iter().filter(|&(_, e)| e > 0).collect())
    }

    pub fn exponent(&self, id: GenId) -> u32 {
        match self.0.binary_search_by_key(&id, |&(g, _)| g) {
            Ok(i) => self.0[i].1,
            Err(_) => 0,
        }
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (GenId, u32)> + '_ {
        self.0.iter().copied()
    }

    pub fn with_exponent(&self, id: GenId, exp: u32) -> Monomial {
        let mut v: Vec<(GenId, u32)> = self.0.iter().copied().filter(|&(g, _)| g != id).collect();
        if exp > 0 {
            let pos = v.partition_point(|&(g, _)| g < id);
            v.insert(pos, (id, exp));
        }
        Monomial(v)
    }

    /// Splits into the part whose generators satisfy `pred` and the rest.
    pub fn split(&self, pred: impl Fn(GenId) -> bool) -> (Monomial, Monomial) {
        let (yes, no): (Vec<_>, Vec<_>) = self.0.iter().partition(|&&(g, _)| pred(g));
        (Monomial(yes), Monomial(no))
    }

    fn max_id(&self) -> Option<GenId> {
        self.0.last().map(|&(g, _)| g)
    }
}

impl Mul for &Monomial {
    type Output = Monomial;

    fn mul(self, rhs: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &rhs.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }
}

/// A sparse rational linear combination of monomials.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RingElement {
    terms: BTreeMap<Monomial, Rational>,
}

impl RingElement {
    pub fn zero() -> Self {
        RingElement::default()
    }

    pub fn one() -> Self {
        RingElement::term(Monomial::one(), Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        RingElement::term(Monomial::one(), c)
    }

    pub fn term(m: Monomial, c: Rational) -> Self {
        let mut e = RingElement::zero();
        e.add_term(m, c);
        e
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(terms: I) -> Self {
        let mut e = RingElement::zero();
        for (m, c) in terms {
            e.add_term(m, c);
        }
        e
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> std::collections::btree_map::Iter<'_, Monomial, Rational> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Monomial, Rational)> {
        self.terms.into_iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, c: &Rational) -> RingElement {
        if c.is_zero() {
            return RingElement::zero();
        }
        RingElement { terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }

    /// Set of total degrees occurring among the terms.
    pub fn degrees(&self) -> BTreeSet<u32> {
        self.terms.keys().map(Monomial::degree).collect()
    }

    /// True if every term has total degree `d` (the zero element qualifies).
    pub fn is_homogeneous_of(&self, d: u32) -> bool {
        self.terms.keys().all(|m| m.degree() == d)
    }

    /// Product in the free polynomial ring, without applying any relation.
    pub fn mul_raw(&self, other: &RingElement) -> RingElement {
        let mut out = RingElement::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1 * m2, c1 * c2);
            }
        }
        out
    }

    fn max_generator(&self) -> Option<GenId> {
        self.terms.keys().filter_map(Monomial::max_id).max()
    }
}

impl From<Monomial> for RingElement {
    fn from(m: Monomial) -> Self {
        RingElement::term(m, Rational::one())
    }
}

impl AddAssign<&RingElement> for RingElement {
    fn add_assign(&mut self, rhs: &RingElement) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&RingElement> for RingElement {
    fn sub_assign(&mut self, rhs: &RingElement) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c);
        }
    }
}

impl Add for RingElement {
    type Output = RingElement;

    fn add(mut self, rhs: RingElement) -> RingElement {
        self += &rhs;
        self
    }
}

impl Sub for RingElement {
    type Output = RingElement;

    fn sub(mut self, rhs: RingElement) -> RingElement {
        self -= &rhs;
        self
    }
}

impl Neg for RingElement {
    type Output = RingElement;

    fn neg(self) -> RingElement {
        RingElement { terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect() }
    }
}

/// `generator^power -> replacement`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewriteRule {
    pub generator: Generator,
    pub power: u32,
    pub replacement: RingElement,
}

impl RewriteRule {
    pub fn is_nilpotency(&self) -> bool {
        self.replacement.is_zero()
    }
}

/// Incrementally assembles a [`RingSpec`].
#[derive(Debug, Default)]
pub struct RingSpecBuilder {
    name: String,
    generators: Vec<Generator>,
    rules: BTreeMap<GenId, (u32, RingElement)>,
}

impl RingSpecBuilder {
    /// Registers a generator and returns its id. Ids follow registration order.
    pub fn generator(&mut self, name: &str) -> Result<GenId> {
        if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(Error::parse(name, "generator names are alphanumeric"));
        }
        if self.generators.iter().any(|g| g.name == name) {
            return Err(Error::DuplicateGenerator(name.to_string()));
        }
        let id = GenId::try_from(self.generators.len())
            .map_err(|_| Error::domain("too many generators"))?;
        self.generators.push(Generator { id, name: name.to_string() });
        Ok(id)
    }

    /// `X^power = 0`.
    pub fn nilpotent(&mut self, id: GenId, power: u32) -> Result<&mut Self> {
        self.rule(id, power, RingElement::zero())
    }

    pub fn rule(&mut self, id: GenId, power: u32, replacement: RingElement) -> Result<&mut Self> {
        let gen = self
            .generators
            .get(id as usize)
            .ok_or_else(|| Error::UnknownGenerator(format!("#{id}")))?
            .clone();
        let invalid = |reason: &str| Error::InvalidRule { generator: gen.name.clone(), reason: reason.into() };
        if power == 0 {
            return Err(invalid("power must be positive"));
        }
        if self.rules.contains_key(&id) {
            return Err(invalid("generator already has a rule"));
        }
        if !replacement.is_homogeneous_of(power) {
            return Err(invalid("replacement is not homogeneous of the rule's degree"));
        }
        if replacement.terms().any(|(m, _)| m.exponent(id) >= power) {
            return Err(invalid("replacement does not lower the generator's exponent"));
        }
        if replacement.max_generator().is_some_and(|g| g as usize >= self.generators.len()) {
            return Err(invalid("replacement uses an unregistered generator"));
        }
        self.rules.insert(id, (power, replacement));
        Ok(self)
    }

    pub fn build(self, fundamental: Monomial) -> Result<RingSpec> {
        let n = self.generators.len();
        let mut rule_of = vec![None; n];
        let mut rules = Vec::with_capacity(self.rules.len());
        for (id, (power, replacement)) in self.rules {
            rule_of[id as usize] = Some(rules.len());
            rules.push(RewriteRule { generator: self.generators[id as usize].clone(), power, replacement });
        }
        if let Some(g) = self.generators.iter().find(|g| rule_of[g.id as usize].is_none()) {
            return Err(Error::InvalidRule { generator: g.name.clone(), reason: "no relation given".into() });
        }
        // A generator is "free" when its relation is plain nilpotency and it
        // never appears in another relation; integrals then factor through it.
        let mut appears = vec![false; n];
        for r in &rules {
            for (m, _) in r.replacement.terms() {
                for (g, _) in m.iter() {
                    appears[g as usize] = true;
                }
            }
        }
        let free = (0..n).map(|i| rules[rule_of[i].unwrap()].is_nilpotency() && !appears[i]).collect();
        let spec = RingSpec {
            name: self.name,
            by_name: self.generators.iter().map(|g| (g.name.clone(), g.id)).collect(),
            generators: self.generators,
            dimension: fundamental.degree(),
            rules,
            rule_of,
            free,
            fundamental,
            integrals: RwLock::new(HashMap::new()),
        };
        spec.check_monomial(&spec.fundamental)?;
        if !spec.is_normal(&spec.fundamental) {
            return Err(Error::domain("fundamental monomial is not in normal form"));
        }
        Ok(spec)
    }
}

/// A graded quotient ring: generators, one relation per generator, and the
/// fundamental monomial whose coefficient defines integration.
#[derive(Debug)]
pub struct RingSpec {
    name: String,
    generators: Vec<Generator>,
    by_name: HashMap<String, GenId>,
    rules: Vec<RewriteRule>,
    rule_of: Vec<Option<usize>>,
    free: Vec<bool>,
    dimension: u32,
    fundamental: Monomial,
    integrals: RwLock<HashMap<Monomial, Rational>>,
}

impl Clone for RingSpec {
    fn clone(&self) -> Self {
        RingSpec {
            name: self.name.clone(),
            generators: self.generators.clone(),
            by_name: self.by_name.clone(),
            rules: self.rules.clone(),
            rule_of: self.rule_of.clone(),
            free: self.free.clone(),
            dimension: self.dimension,
            fundamental: self.fundamental.clone(),
            integrals: RwLock::new(HashMap::new()),
        }
    }
}

impl RingSpec {
    pub fn builder(name: &str) -> RingSpecBuilder {
        RingSpecBuilder { name: name.to_string(), ..Default::default() }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn rules(&self) -> &[RewriteRule] {
        &self.rules
    }

    pub fn rule_for(&self, id: GenId) -> Option<&RewriteRule> {
        self.rule_of.get(id as usize).copied().flatten().map(|i| &self.rules[i])
    }

    pub fn dimension(&self) -> u32 {
        self.dimension
    }

    pub fn fundamental(&self) -> &Monomial {
        &self.fundamental
    }

    pub fn generator(&self, name: &str) -> Result<Generator> {
        self.gen_id(name).map(|id| self.generators[id as usize].clone())
    }

    pub fn gen_id(&self, name: &str) -> Result<GenId> {
        self.by_name.get(name).copied().ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    pub fn has_generator(&self, name: &str) -> bool {
        self.by_name.contains_key(name)
    }

    /// The degree-one element for the generator `name`.
    pub fn var(&self, name: &str) -> Result<RingElement> {
        Ok(Monomial::var(self.gen_id(name)?).into())
    }

    /// `sum c_i * g_i` over `(c_i, name_i)` pairs.
    pub fn linear(&self, terms: &[(i64, &str)]) -> Result<RingElement> {
        let mut out = RingElement::zero();
        for &(c, name) in terms {
            out.add_term(Monomial::var(self.gen_id(name)?), rat(c));
        }
        Ok(out)
    }

    /// Monomial from `(name, exponent)` pairs.
    pub fn monomial(&self, pairs: &[(&str, u32)]) -> Result<Monomial> {
        let ids = pairs
            .iter()
            .map(|&(name, e)| self.gen_id(name).map(|id| (id, e)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Monomial::from_exponents(ids))
    }

    /// Parses `a^3*l1^2*l3^9` (whitespace ignored, `1` for the unit).
    pub fn parse_monomial(&self, text: &str) -> Result<Monomial> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() || compact == "1" {
            return Ok(Monomial::one());
        }
        let mut pairs = Vec::new();
        for factor in compact.split('*') {
            let (name, exp) = match factor.split_once('^') {
                Some((n, e)) => {
                    let e = e.parse::<u32>().map_err(|_| Error::parse(text, format!("bad exponent `{e}`")))?;
                    (n, e)
                }
                None => (factor, 1),
            };
            if name.is_empty() {
                return Err(Error::parse(text, "empty factor"));
            }
            pairs.push((self.gen_id(name)?, exp));
        }
        Ok(Monomial::from_exponents(pairs))
    }

    pub fn format_monomial(&self, m: &Monomial) -> String {
        if m.is_one() {
            return "1".to_string();
        }
        m.iter()
            .map(|(g, e)| {
                let name = &self.generators[g as usize].name;
                if e == 1 {
                    name.clone()
                } else {
                    format!("{name}^{e}")
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }

    pub fn format_element(&self, e: &RingElement) -> String {
        if e.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in e.terms().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if m.is_one() {
                out.push_str(&format_rational(&abs));
            } else if abs.is_one() {
                out.push_str(&self.format_monomial(m));
            } else {
                let _ = write!(out, "{}*{}", format_rational(&abs), self.format_monomial(m));
            }
        }
        out
    }

    fn check_monomial(&self, m: &Monomial) -> Result<()> {
        match m.max_id() {
            Some(g) if g as usize >= self.generators.len() => {
                Err(Error::UnknownGenerator(format!("#{g} (ring `{}`)", self.name)))
            }
            _ => Ok(()),
        }
    }

    fn check_element(&self, e: &RingElement) -> Result<()> {
        e.terms().try_for_each(|(m, _)| self.check_monomial(m))
    }

    /// True if no relation applies to `m`.
    pub fn is_normal(&self, m: &Monomial) -> bool {
        m.iter().all(|(g, e)| self.rule_for(g).is_none_or(|r| e < r.power))
    }

    /// Whether `m` is killed outright by a nilpotency relation.
    fn is_killed(&self, m: &Monomial) -> bool {
        m.iter().any(|(g, e)| self.rule_for(g).is_some_and(|r| r.is_nilpotency() && e >= r.power))
    }

    /// The rule to fire on `m`: the non-nilpotent generator with the highest
    /// exponent at or above its power (lowest id on ties).
    fn rule_to_fire(&self, m: &Monomial) -> Option<&RewriteRule> {
        let mut best: Option<(&RewriteRule, u32)> = None;
        for (g, e) in m.iter() {
            if let Some(r) = self.rule_for(g) {
                if !r.is_nilpotency() && e >= r.power && best.is_none_or(|(_, be)| e > be) {
                    best = Some((r, e));
                }
            }
        }
        best.map(|(r, _)| r)
    }

    /// Reduces `e` modulo the relations.
    pub fn normalize(&self, e: &RingElement) -> Result<RingElement> {
        self.check_element(e)?;
        Ok(self.normalize_unchecked(e.clone()))
    }

    fn normalize_unchecked(&self, e: RingElement) -> RingElement {
        let mut pending: BTreeMap<Monomial, Rational> = e.terms;
        let mut out = RingElement::zero();
        while let Some((m, c)) = pending.pop_last() {
            if c.is_zero() || self.is_killed(&m) {
                continue;
            }
            let Some(rule) = self.rule_to_fire(&m) else {
                out.add_term(m, c);
                continue;
            };
            let g = rule.generator.id;
            let base = m.with_exponent(g, m.exponent(g) - rule.power);
            for (rm, rc) in rule.replacement.terms() {
                let next = &base * rm;
                debug_assert_eq!(next.degree(), m.degree(), "rewrite changed the degree");
                let v = &c * rc;
                match pending.entry(next) {
                    std::collections::btree_map::Entry::Vacant(slot) => {
                        slot.insert(v);
                    }
                    std::collections::btree_map::Entry::Occupied(mut slot) => {
                        *slot.get_mut() += v;
                    }
                }
            }
        }
        out
    }

    /// Normalized product.
    pub fn multiply(&self, e1: &RingElement, e2: &RingElement) -> Result<RingElement> {
        self.check_element(e1)?;
        self.check_element(e2)?;
        Ok(self.normalize_unchecked(e1.mul_raw(e2)))
    }

    /// Normalized product of all factors.
    pub fn product<'a, I: IntoIterator<Item = &'a RingElement>>(&self, factors: I) -> Result<RingElement> {
        let mut acc = RingElement::one();
        for f in factors {
            acc = self.multiply(&acc, f)?;
        }
        Ok(acc)
    }

    pub fn pow(&self, e: &RingElement, k: u32) -> Result<RingElement> {
        self.check_element(e)?;
        let mut acc = RingElement::one();
        for _ in 0..k {
            acc = self.normalize_unchecked(acc.mul_raw(e));
        }
        Ok(acc)
    }

    /// Coefficient of the fundamental monomial in the normal form of `e`.
    /// Terms of the wrong degree contribute nothing.
    pub fn integrate(&self, e: &RingElement) -> Rational {
        let mut total = Rational::zero();
        for (m, c) in e.terms() {
            let v = self.integrate_monomial(m);
            if !v.is_zero() {
                total += c * v;
            }
        }
        total
    }

    pub fn integrate_monomial(&self, m: &Monomial) -> Rational {
        if m.degree() != self.dimension || self.check_monomial(m).is_err() || self.is_killed(m) {
            return Rational::zero();
        }
        let (free_part, bound_part) = m.split(|g| self.free[g as usize]);
        let (fund_free, _) = self.fundamental.split(|g| self.free[g as usize]);
        if free_part != fund_free {
            return Rational::zero();
        }
        if let Some(v) = self.integrals.read().unwrap_or_else(|p| p.into_inner()).get(&bound_part) {
            return v.clone();
        }
        let v = self.normalize_unchecked(RingElement::from(m.clone())).coefficient(&self.fundamental);
        self.integrals.write().unwrap_or_else(|p| p.into_inner()).insert(bound_part, v.clone());
        v
    }

    /// Replaces the source-ring generator `g` by `replacement` (an element
    /// of `target`) and normalizes in `target`. Every other generator of `e`
    /// is carried over by name.
    pub fn substitute(
        &self,
        e: &RingElement,
        g: &str,
        replacement: &RingElement,
        target: &RingSpec,
    ) -> Result<RingElement> {
        self.check_element(e)?;
        target.check_element(replacement)?;
        let gid = self.gen_id(g)?;
        if !replacement.is_homogeneous_of(1) {
            return Err(Error::domain(format!("replacement for `{g}` is not a degree-one class")));
        }
        if let Ok(tid) = target.gen_id(g) {
            if replacement.terms().any(|(m, _)| m.exponent(tid) > 0) {
                return Err(Error::domain(format!("replacement for `{g}` contains `{g}`")));
            }
        }
        let mut id_map = vec![None; self.generators.len()];
        for gen in &self.generators {
            if gen.id != gid {
                id_map[gen.id as usize] = target.by_name.get(&gen.name).copied();
            }
        }
        let mut powers: Vec<RingElement> = vec![RingElement::one()];
        let mut out = RingElement::zero();
        for (m, c) in e.terms() {
            let mut rest = Vec::new();
            let mut k = 0;
            for (id, exp) in m.iter() {
                if id == gid {
                    k = exp;
                } else {
                    let tid = id_map[id as usize]
                        .ok_or_else(|| Error::UnknownGenerator(self.generators[id as usize].name.clone()))?;
                    rest.push((tid, exp));
                }
            }
            while powers.len() <= k as usize {
                let next = powers.last().unwrap().mul_raw(replacement);
                powers.push(next);
            }
            let rest = RingElement::term(Monomial::from_exponents(rest), c.clone());
            out += &rest.mul_raw(&powers[k as usize]);
        }
        Ok(target.normalize_unchecked(out))
    }

    /// All normal-form monomials of total degree `degree`.
    pub fn normal_monomials(&self, degree: u32) -> Vec<Monomial> {
        let bounds: Vec<u32> = self.generators.iter().map(|g| self.rule_for(g.id).unwrap().power - 1).collect();
        let mut out = Vec::new();
        let mut exps = vec![0u32; bounds.len()];
        fn rec(i: usize, left: u32, bounds: &[u32], exps: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            if i == bounds.len() {
                if left == 0 {
                    out.push(Monomial::from_exponents(exps.iter().enumerate().map(|(g, &e)| (g as GenId, e))));
                }
                return;
            }
            let rest_cap: u32 = bounds[i + 1..].iter().sum();
            for e in 0..=bounds[i].min(left) {
                if left - e > rest_cap {
                    continue;
                }
                exps[i] = e;
                rec(i + 1, left - e, bounds, exps, out);
            }
            exps[i] = 0;
        }
        rec(0, degree, &bounds, &mut exps, &mut out);
        out
    }

    /// Groups the terms of `class` by their free-generator part so that
    /// repeated pairings against it only touch complementary terms.
    pub fn prepare(&self, class: &RingElement) -> Result<PreparedClass> {
        self.check_element(class)?;
        let normal = self.normalize_unchecked(class.clone());
        let mut groups: HashMap<Monomial, Vec<(Monomial, Rational)>> = HashMap::new();
        for (m, c) in normal.into_terms() {
            let (free_part, _) = m.split(|g| self.free[g as usize]);
            groups.entry(free_part).or_default().push((m, c));
        }
        Ok(PreparedClass { ring: self.name.clone(), groups })
    }

    /// `integrate(class * other)` for a prepared class.
    pub fn pair(&self, class: &PreparedClass, other: &RingElement) -> Result<Rational> {
        if class.ring != self.name {
            return Err(Error::domain(format!("class prepared in `{}` paired in `{}`", class.ring, self.name)));
        }
        self.check_element(other)?;
        let mut total = Rational::zero();
        for (m, c) in other.terms() {
            let (free_part, _) = m.split(|g| self.free[g as usize]);
            let Some(need) = self.free_complement(&free_part) else { continue };
            let Some(group) = class.groups.get(&need) else { continue };
            for (t, tc) in group {
                let v = self.integrate_monomial(&(t * m));
                if !v.is_zero() {
                    total += c * tc * v;
                }
            }
        }
        Ok(total)
    }

    fn free_complement(&self, free_part: &Monomial) -> Option<Monomial> {
        let mut pairs = Vec::new();
        for (g, e) in self.fundamental.iter().filter(|&(g, _)| self.free[g as usize]) {
            let have = free_part.exponent(g);
            pairs.push((g, e.checked_sub(have)?));
        }
        if free_part.iter().any(|(g, _)| self.fundamental.exponent(g) == 0) {
            return None;
        }
        Some(Monomial::from_exponents(pairs))
    }
}

/// A class whose terms are indexed for fast repeated pairing.
#[derive(Debug, Clone)]
pub struct PreparedClass {
    ring: String,
    groups: HashMap<Monomial, Vec<(Monomial, Rational)>>,
}
