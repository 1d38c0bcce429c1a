//! A record re-evaluated from nothing but its recorded inputs reproduces
//! the same value, bound and certificate.

use codebounds::bounds::{reevaluate, BoundEngine, Method, Mode};
use codebounds::cw::CwProvider;

#[test]
fn records_reproduce_from_their_inputs() {
    let engine = BoundEngine::new(CwProvider::with_default_table(), Mode::Permissive);
    let cases: [(Method, u32, u32, Option<u32>); 10] = [
        (Method::Sphere, 23, 7, None),
        (Method::Johnson, 16, 3, None),
        (Method::ImprovedJohnson, 16, 5, None),
        (Method::LpImprovedJohnson, 14, 3, None),
        (Method::Residue9, 21, 3, None),
        (Method::LargeTwo, 22, 3, None),
        (Method::LargeTwoEven, 20, 3, None),
        (Method::LargeThree, 21, 3, None),
        (Method::JohnsonScheme, 19, 6, Some(7)),
        (Method::Centering, 25, 10, Some(9)),
    ];
    for (m, n, d, w) in cases {
        let rec = engine.compute(m, n, d, w).unwrap();
        let again = reevaluate(&rec).unwrap();
        let what = format!("{m} ({n},{d},{w:?})");
        assert_eq!(again.exact_value, rec.exact_value, "{what}");
        assert_eq!(again.bound, rec.bound, "{what}");
        assert_eq!(again.certificate, rec.certificate, "{what}");
        // the pinned provider relabels every source, so compare keys and values
        let kv = |r: &codebounds::bounds::BoundRecord| {
            r.inputs.iter().map(|i| (i.key, i.value, i.formula)).collect::<Vec<_>>()
        };
        assert_eq!(kv(&again), kv(&rec), "{what}");
    }
}

#[test]
fn missing_inputs_are_reported() {
    let engine = BoundEngine::new(CwProvider::with_default_table(), Mode::Permissive);
    let mut rec = engine.compute(Method::Johnson, 16, 3, None).unwrap();
    rec.inputs.clear();
    assert!(reevaluate(&rec).is_err());
}
