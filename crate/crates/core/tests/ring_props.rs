use std::sync::OnceLock;

use curvecount::oracle::dense::DenseSpace;
use curvecount::spaces::{self, SpaceKind};
use curvecount::{rat, Monomial, RingElement, RingSpec};
use num_traits::Zero;
use proptest::prelude::*;

const KINDS: [SpaceKind; 4] = [
    SpaceKind::Cubic { m: 1, n: 4 },
    SpaceKind::Conic { m: 1, n: 4 },
    SpaceKind::ThreeLines { m: 1, n: 4 },
    SpaceKind::Cubic { m: 0, n: 2 },
];

fn ring(i: usize) -> &'static RingSpec {
    static RINGS: OnceLock<Vec<RingSpec>> = OnceLock::new();
    &RINGS.get_or_init(|| KINDS.iter().map(|&k| spaces::build_ring(k).unwrap()).collect())[i]
}

/// Raw (unnormalized) elements: up to four terms with small exponents.
fn element(ring: &'static RingSpec, max_exp: u32) -> impl Strategy<Value = RingElement> {
    let n = ring.generators().len();
    prop::collection::vec((prop::collection::vec(0..=max_exp, n), -6i64..=6), 1..=4).prop_map(move |terms| {
        RingElement::from_terms(terms.into_iter().map(|(exps, c)| {
            (Monomial::from_exponents(exps.into_iter().enumerate().map(|(g, e)| (g as u16, e))), rat(c))
        }))
    })
}

fn ring_and_element(max_exp: u32) -> impl Strategy<Value = (usize, RingElement)> {
    (0..KINDS.len()).prop_flat_map(move |i| (Just(i), element(ring(i), max_exp)))
}

fn ring_and_elements(max_exp: u32, k: usize) -> impl Strategy<Value = (usize, Vec<RingElement>)> {
    (0..KINDS.len()).prop_flat_map(move |i| (Just(i), prop::collection::vec(element(ring(i), max_exp), k)))
}

/// A top-degree monomial that usually survives the nilpotency relations:
/// point classes mostly at their top power, other generators drawn up to one
/// step past their relation, the last curve class absorbing the degree.
fn top_monomial(ring: &'static RingSpec) -> impl Strategy<Value = Monomial> {
    let gens = ring.generators();
    let point = |g: usize| matches!(gens[g].name().as_bytes()[0], b'B' | b'H');
    let last = (0..gens.len()).rfind(|&g| !point(g) && gens[g].name() != "a").unwrap();
    let per_gen: Vec<BoxedStrategy<u32>> = (0..gens.len())
        .map(|g| {
            let power = ring.rule_for(g as u16).unwrap().power;
            if point(g) {
                prop_oneof![19 => Just(3u32), 1 => 0..=2u32].boxed()
            } else if gens[g].name() == "a" {
                (0..power).boxed()
            } else {
                (0..=power).boxed()
            }
        })
        .collect();
    per_gen.prop_filter_map("degree out of range", move |mut exps| {
        exps[last] = 0;
        let rest: u32 = exps.iter().sum();
        exps[last] = ring.dimension().checked_sub(rest)?;
        Some(Monomial::from_exponents(exps.into_iter().enumerate().map(|(g, e)| (g as u16, e))))
    })
}

fn names(ring: &RingSpec, m: &Monomial) -> Vec<(String, u32)> {
    m.iter().map(|(g, e)| (ring.generators()[g as usize].name().to_string(), e)).collect()
}

fn dense(i: usize) -> &'static DenseSpace {
    static DENSE: OnceLock<Vec<DenseSpace>> = OnceLock::new();
    &DENSE.get_or_init(|| KINDS.iter().map(|&k| DenseSpace::new(k)).collect())[i]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn normalize_is_idempotent((i, e) in ring_and_element(12)) {
        let r = ring(i);
        let once = r.normalize(&e).unwrap();
        prop_assert!(once.terms().all(|(m, _)| r.is_normal(m)));
        prop_assert_eq!(r.normalize(&once).unwrap(), once);
    }

    #[test]
    fn integral_ignores_normalization((i, e) in ring_and_element(12)) {
        let r = ring(i);
        prop_assert_eq!(r.integrate(&e), r.integrate(&r.normalize(&e).unwrap()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn multiply_commutes((i, es) in ring_and_elements(3, 2)) {
        let r = ring(i);
        prop_assert_eq!(r.multiply(&es[0], &es[1]).unwrap(), r.multiply(&es[1], &es[0]).unwrap());
    }

    #[test]
    fn multiply_associates((i, es) in ring_and_elements(3, 3)) {
        let r = ring(i);
        let left = r.multiply(&r.multiply(&es[0], &es[1]).unwrap(), &es[2]).unwrap();
        let right = r.multiply(&es[0], &r.multiply(&es[1], &es[2]).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn integrate_is_linear((i, es) in ring_and_elements(8, 2), c1 in -9i64..=9, c2 in -9i64..=9) {
        let r = ring(i);
        let combo = es[0].scale(&rat(c1)) + es[1].scale(&rat(c2));
        prop_assert_eq!(r.integrate(&combo), r.integrate(&es[0]) * rat(c1) + r.integrate(&es[1]) * rat(c2));
    }

    #[test]
    fn diagonal_is_symmetric(i in 0..KINDS.len(), x in 1..=4u32, y in 1..=4u32) {
        prop_assume!(x != y);
        let r = ring(i);
        let n = KINDS[i].n();
        prop_assume!(x <= n && y <= n);
        let (hx, hy) = (format!("H{x}"), format!("H{y}"));
        let d = spaces::diagonal(r, &hx, &hy).unwrap();
        prop_assert_eq!(r.normalize(&d).unwrap(), r.normalize(&spaces::diagonal(r, &hy, &hx).unwrap()).unwrap());
        // The diagonal is annihilated by the difference of the two classes.
        let diff = r.linear(&[(1, &hx), (-1, &hy)]).unwrap();
        prop_assert!(r.multiply(&d, &diff).unwrap().is_zero());
    }

    #[test]
    fn integrals_match_dense_oracle((i, m) in (0..KINDS.len()).prop_flat_map(|i| (Just(i), top_monomial(ring(i))))) {
        let r = ring(i);
        let n = names(r, &m);
        let refs: Vec<(&str, u32)> = n.iter().map(|(s, e)| (s.as_str(), *e)).collect();
        prop_assert_eq!(r.integrate(&m.into()), dense(i).integrate_monomial(&refs).unwrap());
    }
}

#[test]
fn worked_examples_against_dense_oracle() {
    let r = ring(0);
    let d = dense(0);
    // l1^4 vanishes after one rewrite and truncation.
    let l1_4 = r.normalize(&r.monomial(&[("l1", 4)]).unwrap().into()).unwrap();
    assert!(l1_4.is_zero());
    let complement = [("l3", 9), ("a", 3), ("B1", 3), ("H1", 3), ("H2", 3), ("H3", 3), ("H4", 3)];
    let mut refs = complement.to_vec();
    refs.push(("l1", 4));
    assert!(d.integrate_monomial(&refs).unwrap().is_zero());

    // (l1 + a)^2 l1^2 against every complementary monomial in l3, B, H.
    let la = r.linear(&[(1, "l1"), (1, "a")]).unwrap();
    let e = r.multiply(&r.pow(&la, 2).unwrap(), &r.monomial(&[("l1", 2)]).unwrap().into()).unwrap();
    let mut nonzero = 0;
    for j in 7..=9u32 {
        let mu = r.monomial(&[("l3", j), ("a", 10 - j), ("B1", 3), ("H1", 3), ("H2", 3), ("H3", 3), ("H4", 3)]).unwrap();
        let engine = r.integrate(&r.multiply(&e, &mu.clone().into()).unwrap());
        let base = d.mul_linear(&d.one(), &[(1, "l1"), (1, "a")]).unwrap();
        let base = d.mul_linear(&base, &[(1, "l1"), (1, "a")]).unwrap();
        let n = names(r, &mu);
        let mut refs: Vec<(&str, u32)> = n.iter().map(|(s, e)| (s.as_str(), *e)).collect();
        refs.push(("l1", 2));
        let oracle = d.integral(&d.mul_monomial(&base, &refs).unwrap());
        assert_eq!(engine, oracle, "j={j}");
        nonzero += usize::from(!engine.is_zero());
    }
    assert!(nonzero > 0);
}

#[test]
fn substitution_into_conic_ring_matches_dense_oracle() {
    let cubic = ring(0);
    let conic = ring(1);
    let d = dense(1);
    let sum = conic.linear(&[(1, "l1"), (1, "l2")]).unwrap();
    let source = cubic.monomial(&[("l3", 6), ("a", 3)]).unwrap();
    let pulled = cubic.substitute(&source.into(), "l3", &sum, conic).unwrap();
    // Pair with top-degree complements supported on l1, l2, B, H.
    let mut checked = 0;
    for p in 0..=2u32 {
        for q in 0..=5u32 {
            let Some(b) = 4u32.checked_sub(p + q).filter(|&b| b <= 3) else { continue };
            let comp = conic.monomial(&[("l1", p), ("l2", q), ("B1", b), ("H1", 3), ("H2", 3), ("H3", 3), ("H4", 3)]).unwrap();
            assert_eq!(comp.degree() + 9, conic.dimension());
            let engine = conic.integrate(&conic.multiply(&pulled, &comp.clone().into()).unwrap());
            let mut e = d.one();
            for _ in 0..6 {
                e = d.mul_linear(&e, &[(1, "l1"), (1, "l2")]).unwrap();
            }
            let n = names(conic, &comp);
            let mut refs: Vec<(&str, u32)> = n.iter().map(|(s, e)| (s.as_str(), *e)).collect();
            refs.push(("a", 3));
            assert_eq!(engine, d.integral(&d.mul_monomial(&e, &refs).unwrap()), "l1^{p} l2^{q} B1^{b}");
            checked += usize::from(!engine.is_zero());
        }
    }
    assert!(checked > 0);
}
