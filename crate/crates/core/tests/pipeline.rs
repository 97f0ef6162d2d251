use amoeba_core::amoeba::{max_fiber_count, membership, sample_in_points, LogPoint, Window};
use amoeba_core::forge::{known_harnack, known_names, stored_entries, verdict_hash};
use amoeba_core::poly::parse_polynomial;
use amoeba_core::real_locus::{harnack_verdict, Verdict};
use amoeba_core::report::{maximality_report, Consistency, Profile};

#[test]
fn product_fiber_contains_a_circle() {
    let f = parse_polynomial("(1+x)*(1+y)").unwrap();
    // z1 = -1 lies on the fiber over (0, 3)
    assert!(membership(&f, LogPoint::new(0.0, 3.0)).unwrap().is_in());
    let c = max_fiber_count(&f, &[LogPoint::new(0.0, 3.0)], 256).unwrap();
    assert_eq!(c.max_count, usize::MAX);
}

#[test]
fn non_harnack_square_is_consistent() {
    // oracle: 500 sampled fibers never exceed two points; the only large fiber sits over a
    // single point where the curve is invariant under z -> 2/z
    let f = parse_polynomial("2+x+y+x*y").unwrap();
    let pts = sample_in_points(&f, Window::square(4.0), 500, 1e-3, 5);
    let c = max_fiber_count(&f, &pts, 1024).unwrap();
    assert_eq!(c.max_count, 2);
    assert!(matches!(harnack_verdict(&f).unwrap().verdict, Verdict::NotHarnack(_)));
    let r = maximality_report(&f, Profile::Fast).unwrap();
    assert_eq!(r.consistency, Consistency::ConsistentNonMaximal);
    assert!(r.area.ratio.unwrap() < 0.5);
}

#[test]
fn stored_entries_still_verify() {
    assert_eq!(known_names(), ["line", "square1", "d2", "d3"]);
    for e in stored_entries() {
        let f = known_harnack(&e.name).unwrap();
        let v = harnack_verdict(&f).unwrap();
        assert_eq!(v.verdict, e.verdict, "{}", e.name);
        assert_eq!(v.components, e.components, "{}", e.name);
        assert_eq!(verdict_hash(&v), e.report_hash, "{}", e.name);
    }
}
