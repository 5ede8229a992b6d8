use proptest::prelude::*;

use frobpoly::arith::{FieldDesc, FqPolynomial, DEFAULT_BUDGET};
use frobpoly::harness::emit::{polygons_csv, report_from_json, report_json};
use frobpoly::harness::{gnp_estimate, sample_smooth, verify_suite, Shape, Suite};
use frobpoly::polygon::{hodge_polygon, Polygon};
use frobpoly::util::rat;

proptest! {
    #[test]
    fn polygon_json_round_trip(segs in prop::collection::vec((-20i64..20, 1i64..9, 1u64..5), 0..6)) {
        let poly = Polygon::from_slopes(segs.into_iter().map(|(a, b, m)| (rat(a, b), m)));
        let text = serde_json::to_string(&poly).unwrap();
        let back: Polygon = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(&back, &poly);
        prop_assert_eq!(serde_json::to_string(&back).unwrap(), text);
    }

    #[test]
    fn polynomial_text_round_trip(seed in any::<u64>(), pick in 0usize..4) {
        let (n, d, p, a) = [(1u64, 3u64, 5u64, 1usize), (2, 3, 7, 1), (2, 4, 3, 2), (3, 2, 5, 1)][pick];
        let field = if a == 1 { FieldDesc::prime(p) } else { FieldDesc::build(p, a).unwrap() };
        let f = sample_smooth(n, d, &field, seed, Shape::Generic).unwrap();
        let back: FqPolynomial = f.to_string().parse().unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn csv_has_a_row_per_abscissa(n in 1u64..3, d in 2u64..6) {
        let hp = hodge_polygon(n, d).unwrap();
        let csv = polygons_csv(&[("HP".into(), hp.clone())]);
        prop_assert_eq!(csv.lines().count() as u64, hp.length() + 2);
        let last = csv.lines().last().unwrap().to_string();
        let end = hp.endpoint().1;
        prop_assert_eq!(last, format!("{},{}/{}", hp.length(), end.numer(), end.denom()));
    }
}

#[test]
fn report_json_round_trip_and_reproducible() {
    let (_, r) = gnp_estimate(2, 3, 7, 1, 8, 42, DEFAULT_BUDGET).unwrap();
    let text = report_json(&r).unwrap();
    assert!(text.starts_with("{\n  \"schema\": \"1\""));
    let back = report_from_json(&text).unwrap();
    assert_eq!(back, r);
    assert_eq!(report_json(&back).unwrap(), text);
    let (_, again) = gnp_estimate(2, 3, 7, 1, 8, 42, DEFAULT_BUDGET).unwrap();
    assert_eq!(report_json(&again).unwrap(), text);
}

#[test]
fn suite_reports_are_reproducible() {
    let mut params = Suite::Congruence.default_params();
    params.cases.truncate(2);
    params.samples = 6;
    let a = report_json(&verify_suite(Suite::Congruence, &params).unwrap()).unwrap();
    let b = report_json(&verify_suite(Suite::Congruence, &params).unwrap()).unwrap();
    assert_eq!(a, b);
    assert!(report_from_json(&a.replace("\"schema\": \"1\"", "\"schema\": \"2\"")).is_err());
}
