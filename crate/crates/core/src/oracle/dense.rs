//! A dense truncated-polynomial evaluator.
//!
//! Elements are stored as one dense coefficient array over the exponents of
//! `a` and the bundle classes (each kept below its relation degree) per
//! combination of marked-point exponents. Multiplying by a generator shifts
//! the array; when a bundle class reaches its rank `r` the single relation
//! `x^r = -c1 x^(r-1) a - c2 x^(r-2) a^2 - c3 x^(r-3) a^3` is applied on the
//! spot, and anything reaching `a^4` or a point class to the fourth power
//! is dropped. Normal form is therefore maintained after every step.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::{layout, Role};
use crate::error::{Error, Result};
use crate::ring::{rat, Rational};
use crate::spaces::SpaceKind;

const POINT_BOUND: u32 = 4;
const BASE_BOUND: u32 = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseElement {
    /// Point exponents -> dense array over (a, bundle classes).
    parts: BTreeMap<Vec<u32>, Vec<Rational>>,
}

#[derive(Debug, Clone)]
pub struct DenseSpace {
    names: Vec<String>,
    roles: Vec<Role>,
    /// For each generator: its slot in the dense part or in the point key.
    slot: Vec<usize>,
    bounds: Vec<u32>,
    strides: Vec<usize>,
    size: usize,
    points: usize,
}

impl DenseSpace {
    pub fn new(kind: SpaceKind) -> Self {
        let gens = layout(kind);
        let (mut bounds, mut slot, mut points) = (Vec::new(), Vec::new(), 0);
        for (_, role) in &gens {
            match role {
                Role::Base => {
                    slot.push(bounds.len());
                    bounds.push(BASE_BOUND);
                }
                Role::Bundle { rank, .. } => {
                    slot.push(bounds.len());
                    bounds.push(*rank);
                }
                Role::Point => {
                    slot.push(points);
                    points += 1;
                }
            }
        }
        let mut strides = vec![1usize; bounds.len()];
        for i in 1..bounds.len() {
            strides[i] = strides[i - 1] * bounds[i - 1] as usize;
        }
        let size = strides.last().copied().unwrap_or(1) * bounds.last().copied().unwrap_or(1) as usize;
        DenseSpace {
            names: gens.iter().map(|(n, _)| n.clone()).collect(),
            roles: gens.iter().map(|(_, r)| *r).collect(),
            slot,
            bounds,
            strides,
            size,
            points,
        }
    }

    fn id(&self, name: &str) -> Result<usize> {
        self.names.iter().position(|n| n == name).ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    fn base_slot(&self) -> usize {
        self.slot[self.roles.iter().position(|r| *r == Role::Base).expect("every space has a base class")]
    }

    fn exponent_at(&self, index: usize, slot: usize) -> u32 {
        ((index / self.strides[slot]) % self.bounds[slot] as usize) as u32
    }

    pub fn zero(&self) -> DenseElement {
        DenseElement { parts: BTreeMap::new() }
    }

    pub fn one(&self) -> DenseElement {
        let mut arr = vec![Rational::zero(); self.size];
        arr[0] = rat(1);
        DenseElement { parts: BTreeMap::from([(vec![0; self.points], arr)]) }
    }

    pub fn scale(&self, e: &DenseElement, c: &Rational) -> DenseElement {
        let parts = e.parts.iter().map(|(k, arr)| (k.clone(), arr.iter().map(|v| v * c).collect())).collect();
        DenseElement { parts }
    }

    pub fn add(&self, x: &DenseElement, y: &DenseElement) -> DenseElement {
        let mut out = x.clone();
        for (k, arr) in &y.parts {
            let slot = out.parts.entry(k.clone()).or_insert_with(|| vec![Rational::zero(); self.size]);
            for (s, v) in slot.iter_mut().zip(arr) {
                *s += v;
            }
        }
        out
    }

    pub fn mul_generator(&self, e: &DenseElement, name: &str) -> Result<DenseElement> {
        let g = self.id(name)?;
        let slot = self.slot[g];
        let mut out: BTreeMap<Vec<u32>, Vec<Rational>> = BTreeMap::new();
        match self.roles[g] {
            Role::Point => {
                for (k, arr) in &e.parts {
                    if k[slot] + 1 >= POINT_BOUND {
                        continue;
                    }
                    let mut key = k.clone();
                    key[slot] += 1;
                    out.insert(key, arr.clone());
                }
            }
            Role::Base => {
                for (k, arr) in &e.parts {
                    let mut next = vec![Rational::zero(); self.size];
                    for (i, v) in arr.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                        if self.exponent_at(i, slot) + 1 < BASE_BOUND {
                            next[i + self.strides[slot]] += v;
                        }
                    }
                    out.insert(k.clone(), next);
                }
            }
            Role::Bundle { rank, chern } => {
                let base = self.base_slot();
                for (k, arr) in &e.parts {
                    let mut next = vec![Rational::zero(); self.size];
                    for (i, v) in arr.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                        let x = self.exponent_at(i, slot);
                        if x + 1 < rank {
                            next[i + self.strides[slot]] += v;
                            continue;
                        }
                        let a = self.exponent_at(i, base);
                        let stripped = i - x as usize * self.strides[slot] - a as usize * self.strides[base];
                        for (step, &c) in chern.iter().enumerate() {
                            let kk = step as u32 + 1;
                            if a + kk >= BASE_BOUND {
                                continue;
                            }
                            let j = stripped
                                + (rank - kk) as usize * self.strides[slot]
                                + (a + kk) as usize * self.strides[base];
                            next[j] -= v * rat(c);
                        }
                    }
                    out.insert(k.clone(), next);
                }
            }
        }
        Ok(DenseElement { parts: out })
    }

    pub fn mul_monomial(&self, e: &DenseElement, exponents: &[(&str, u32)]) -> Result<DenseElement> {
        let mut acc = e.clone();
        for &(name, k) in exponents {
            for _ in 0..k {
                acc = self.mul_generator(&acc, name)?;
            }
        }
        Ok(acc)
    }

    /// Multiplies by `sum c_i * m_i` for monomials `m_i`.
    pub fn mul_polynomial(&self, e: &DenseElement, terms: &[(i64, &[(&str, u32)])]) -> Result<DenseElement> {
        let mut acc = self.zero();
        for &(c, mono) in terms {
            let t = self.mul_monomial(e, mono)?;
            acc = self.add(&acc, &self.scale(&t, &rat(c)));
        }
        Ok(acc)
    }

    /// Multiplies by the linear form `sum c_i * g_i`.
    pub fn mul_linear(&self, e: &DenseElement, terms: &[(i64, &str)]) -> Result<DenseElement> {
        let mut acc = self.zero();
        for &(c, g) in terms {
            acc = self.add(&acc, &self.scale(&self.mul_generator(e, g)?, &rat(c)));
        }
        Ok(acc)
    }

    /// Coefficient of the top monomial.
    pub fn integral(&self, e: &DenseElement) -> Rational {
        let top = vec![POINT_BOUND - 1; self.points];
        e.parts.get(&top).map(|arr| arr[self.size - 1].clone()).unwrap_or_else(Rational::zero)
    }

    pub fn integrate_monomial(&self, exponents: &[(&str, u32)]) -> Result<Rational> {
        Ok(self.integral(&self.mul_monomial(&self.one(), exponents)?))
    }

    /// Nonzero terms as `(name, exponent)` lists in generator order.
    pub fn terms(&self, e: &DenseElement) -> BTreeMap<Vec<(String, u32)>, Rational> {
        let mut out = BTreeMap::new();
        for (k, arr) in &e.parts {
            for (i, v) in arr.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                let mono = self
                    .names
                    .iter()
                    .enumerate()
                    .map(|(g, n)| {
                        let exp = match self.roles[g] {
                            Role::Point => k[self.slot[g]],
                            _ => self.exponent_at(i, self.slot[g]),
                        };
                        (n.clone(), exp)
                    })
                    .filter(|&(_, exp)| exp > 0)
                    .collect();
                out.insert(mono, v.clone());
            }
        }
        out
    }
}
