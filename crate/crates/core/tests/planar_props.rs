use curvecount::planar::{self, CountQuery, InvariantKind, MAX_DEGREE};
use proptest::prelude::*;

const SINGULAR: [InvariantKind; 3] = [InvariantKind::A1, InvariantKind::A1L, InvariantKind::A2];

fn closed_form(kind: InvariantKind, d: u64) -> u64 {
    match kind {
        InvariantKind::A1 => 3 * (d - 1) * (d - 1),
        InvariantKind::A1L => 3 * (d - 1),
        InvariantKind::A2 => 12 * (d - 1) * (d - 2),
        InvariantKind::T1 => 2 * (d - 1),
        InvariantKind::T1Pt | InvariantKind::Smooth => 1,
        InvariantKind::T2 => 3 * d.saturating_sub(2),
    }
}

proptest! {
    #[test]
    fn recursion_reproduces_closed_forms(k in 0..InvariantKind::ALL.len(), d in 2..=MAX_DEGREE) {
        let kind = InvariantKind::ALL[k];
        prop_assert_eq!(planar::count(kind, d).unwrap(), closed_form(kind, d as u64));
    }

    #[test]
    fn degeneration_splits_the_count(k in 0..SINGULAR.len(), d in 3..=MAX_DEGREE) {
        let kind = SINGULAR[k];
        let deg = planar::degeneration(kind, d).unwrap();
        prop_assert_eq!(deg.all_on_line + deg.smoothing, planar::count(kind, d).unwrap());
    }

    #[test]
    fn line_points_only_matter_when_all_on_line(k in 0..SINGULAR.len(), d in 3..=MAX_DEGREE, pts in 0..64u32) {
        let kind = SINGULAR[k];
        let pts = pts % (d + 1);
        let n = planar::count(kind, d).unwrap();
        let v = CountQuery::new(kind, d, Some(pts)).unwrap().evaluate().unwrap();
        if pts < d {
            prop_assert_eq!(v, n);
        } else {
            prop_assert_eq!(v, n - planar::degeneration(kind, d).unwrap().smoothing);
        }
    }

    #[test]
    fn kind_names_round_trip(k in 0..InvariantKind::ALL.len()) {
        let kind = InvariantKind::ALL[k];
        prop_assert_eq!(kind.name().parse::<InvariantKind>().unwrap(), kind);
    }
}

#[test]
fn degrees_out_of_range_are_rejected() {
    for kind in InvariantKind::ALL {
        assert!(planar::count(kind, 0).is_err());
        assert!(planar::count(kind, MAX_DEGREE + 1).is_err());
    }
    assert!(CountQuery::new(InvariantKind::A1, 3, Some(4)).is_err());
}
