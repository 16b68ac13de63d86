//! Boundary-class pairings recomputed on the dense oracle, where every class
//! is rebuilt from its incidence factors rather than taken from the engine.

use curvecount::conics::{ConicEvaluator, TIndex};
use curvecount::fbcubic::{self, PhiIndex};
use curvecount::oracle::dense::{DenseElement, DenseSpace};
use curvecount::spaces::SpaceKind;
use curvecount::{rat, Rational};

fn evaluator() -> &'static ConicEvaluator {
    static E: std::sync::OnceLock<ConicEvaluator> = std::sync::OnceLock::new();
    E.get_or_init(|| ConicEvaluator::new().unwrap())
}

fn linear(space: &DenseSpace, e: DenseElement, terms: &[(i64, &str)]) -> DenseElement {
    space.mul_linear(&e, terms).unwrap()
}

/// Point on plane and line for every `H` in `points`.
fn on_line_and_plane(space: &DenseSpace, mut e: DenseElement, points: &[u32]) -> DenseElement {
    for j in points {
        let h = format!("H{j}");
        e = linear(space, e, &[(1, "a"), (1, &h)]);
        e = linear(space, e, &[(1, "l1"), (1, &h)]);
    }
    e
}

fn node_on_conic(space: &DenseSpace) -> DenseElement {
    let e = linear(space, space.one(), &[(1, "a"), (1, "B1")]);
    let e = linear(space, e, &[(1, "l1"), (1, "B1")]);
    linear(space, e, &[(1, "l2"), (2, "B1")])
}

/// `l1^m (sum of parts)^j a^l H^n` times `e`, integrated.
fn pair(space: &DenseSpace, mut e: DenseElement, parts: &[&str], idx: TIndex, j: u32) -> Rational {
    let sum: Vec<(i64, &str)> = parts.iter().map(|p| (1, *p)).collect();
    for _ in 0..j {
        e = space.mul_linear(&e, &sum).unwrap();
    }
    let names: Vec<String> = (1..=4).map(|i| format!("H{i}")).collect();
    let mut mono = vec![("l1", idx.m), ("a", idx.l)];
    mono.extend(names.iter().map(String::as_str).zip(idx.n));
    space.integral(&space.mul_monomial(&e, &mono).unwrap())
}

fn dense_t(idx: TIndex) -> Rational {
    let Some(j) = idx.lambda3_exponent() else { return rat(0) };
    let conic = DenseSpace::new(SpaceKind::Conic { m: 1, n: 4 });
    let lines = DenseSpace::new(SpaceKind::ThreeLines { m: 1, n: 4 });
    let mut total = rat(0);
    for i in 1..=3u32 {
        let h = format!("H{i}");
        let diag: Vec<(i64, Vec<(&str, u32)>)> = (0..=3).map(|k| (1, vec![(h.as_str(), 3 - k), ("B1", k)])).collect();
        let diag: Vec<(i64, &[(&str, u32)])> = diag.iter().map(|(c, m)| (*c, m.as_slice())).collect();
        let e = conic.mul_polynomial(&node_on_conic(&conic), &diag).unwrap();
        let others: Vec<u32> = (1..=4).filter(|&k| k != i).collect();
        total += pair(&conic, on_line_and_plane(&conic, e, &others), &["l1", "l2"], idx, j);
    }
    // Tangency: the conic's tangent at the node is the line, Euler class l1 + l2 + a.
    let e = linear(&conic, node_on_conic(&conic), &[(1, "l1"), (1, "l2"), (1, "a")]);
    total += pair(&conic, on_line_and_plane(&conic, e, &[1, 2, 3, 4]), &["l1", "l2"], idx, j) * rat(2);
    let e = linear(&lines, lines.one(), &[(1, "a"), (1, "B1")]);
    let e = linear(&lines, e, &[(1, "l1p"), (1, "B1")]);
    let e = linear(&lines, e, &[(1, "l1pp"), (1, "B1")]);
    let half = Rational::new(1.into(), 2.into());
    total += pair(&lines, on_line_and_plane(&lines, e, &[1, 2, 3, 4]), &["l1", "l1p", "l1pp"], idx, j) * half;
    total
}

#[test]
fn t_matches_dense_rebuild() {
    let samples = [
        TIndex::new(0, [3, 3, 3, 1], 0),
        TIndex::new(0, [0, 3, 3, 1], 0),
        TIndex::new(0, [1, 2, 3, 1], 0),
        TIndex::new(0, [3, 1, 2, 1], 0),
        TIndex::new(0, [3, 3, 3, 2], 1),
        TIndex::new(1, [2, 3, 1, 3], 2),
        TIndex::new(2, [0, 0, 0, 3], 3),
        TIndex::new(2, [1, 2, 3, 1], 0),
        TIndex::new(0, [0, 0, 0, 1], 3),
    ];
    let mut nonzero = 0;
    for idx in samples {
        let v = dense_t(idx);
        assert_eq!(evaluator().eval_t(idx).unwrap(), v, "{idx:?}");
        nonzero += usize::from(v != rat(0));
    }
    assert!(nonzero >= 3);
}

#[test]
fn frozen_t_value() {
    assert_eq!(evaluator().eval_t(TIndex::new(0, [1, 1, 1, 1], 0)).unwrap(), rat(-2376));
    assert_eq!(evaluator().eval_t(TIndex::new(0, [3, 3, 3, 1], 0)).unwrap(), rat(0));
}

#[test]
fn r3_pairing_matches_dense_rebuild() {
    let conic = DenseSpace::new(SpaceKind::Conic { m: 1, n: 3 });
    for (m, j, l) in [(2, 8, 3), (0, 10, 3), (1, 9, 3), (2, 9, 2)] {
        let e = on_line_and_plane(&conic, node_on_conic(&conic), &[1, 2, 3]);
        let sum = [(1, "l1"), (1, "l2")];
        let mut e = e;
        for _ in 0..j {
            e = conic.mul_linear(&e, &sum).unwrap();
        }
        let want = conic.integral(&conic.mul_monomial(&e, &[("l1", m), ("a", l)]).unwrap());
        assert_eq!(evaluator().eval_r3_paired(m, j, l).unwrap(), want, "({m},{j},{l})");
    }
}

#[test]
fn phi_with_all_points_saturated() {
    // With every H at its top power the recursion collapses to the T terms.
    let counts = fbcubic::shared().unwrap();
    for l in 0..=3 {
        let t = |k: u32| evaluator().eval_t(TIndex::new(0, [3, 3, 3, k], l)).unwrap();
        let want = t(1) - t(2) * rat(3) + t(3) * rat(9);
        assert_eq!(counts.phi(PhiIndex::new(0, [3, 3, 3, 3], l)).unwrap(), want, "l={l}");
    }
}

#[test]
fn phi_and_chain_regressions() {
    let counts = fbcubic::shared().unwrap();
    assert_eq!(counts.phi(PhiIndex::new(2, [0, 0, 0, 3], 3)).unwrap(), rat(72));
    assert_eq!(counts.chain_a1f(2, 8, 3).unwrap(), rat(12));
}
