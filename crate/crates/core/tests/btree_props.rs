use eiscurve_core::btree::{
    reducibility_index_check, reduction_at, stable_set, Geometry, Mat2, MatrixRep, ReductionClass,
};
use num_traits::Zero;
use proptest::prelude::*;

fn check_segment_classification(rep: &MatrixRep, cap: u32) {
    let s = stable_set(rep, cap).unwrap();
    let Geometry::Segment { endpoints, .. } = &s.geometry else {
        return;
    };
    if s.unbounded {
        return;
    }
    let reductions: Vec<_> = s.vertices.iter().map(|v| reduction_at(v, rep).unwrap()).collect();
    if !reductions.iter().all(|r| r.characters.is_none() || r.has_distinct_characters()) {
        return;
    }
    for (v, r) in s.vertices.iter().zip(&reductions) {
        let is_end = v == &endpoints.0 || v == &endpoints.1;
        if is_end && s.vertices.len() > 1 {
            assert!(
                matches!(r.class, ReductionClass::ReducibleIndecomposable | ReductionClass::Irreducible),
                "endpoint {v} is {:?}",
                r.class
            );
        } else if !is_end {
            assert_eq!(r.class, ReductionClass::Split, "interior vertex {v}");
        }
    }
}

fn worked_rep() -> MatrixRep {
    MatrixRep::new(3, vec![Mat2::from_ints([[1, 1], [0, 1]]), Mat2::from_ints([[1, 0], [3, 1]])], None).unwrap()
}

#[test]
fn worked_example_length_matches_index() {
    let rep = worked_rep();
    let Geometry::Segment { length, .. } = stable_set(&rep, 6).unwrap().geometry else {
        panic!("not a segment");
    };
    let largest = (1..=4)
        .take_while(|&n| reducibility_index_check(&rep, &[1, 1], &[1, 1], n, 6).unwrap())
        .last()
        .unwrap_or(0);
    assert_eq!(length, largest as usize);
}

#[test]
fn longer_segment_with_distinct_characters() {
    // diag(1, 2) pins the stable set to the diagonal apartment; the unipotents cut it to length 3
    let rep = MatrixRep::new(
        3,
        vec![
            Mat2::from_ints([[1, 0], [0, 2]]),
            Mat2::from_ints([[1, 1], [0, 1]]),
            Mat2::from_ints([[1, 0], [27, 1]]),
        ],
        None,
    )
    .unwrap();
    let s = stable_set(&rep, 8).unwrap();
    assert!(matches!(s.geometry, Geometry::Segment { length: 3, .. }), "{:?}", s.geometry);
    let interior = reduction_at(&s.vertices[1], &rep).unwrap();
    assert_eq!(interior.class, ReductionClass::Split);
    assert!(interior.has_distinct_characters());
    check_segment_classification(&rep, 8);
    let (psi1, psi2) = ([1, 1, 1], [2, 1, 1]);
    assert!(reducibility_index_check(&rep, &psi1, &psi2, 3, 5).unwrap());
    assert!(!reducibility_index_check(&rep, &psi1, &psi2, 4, 5).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn segment_endpoints_are_non_split(
        entries in prop::collection::vec(
            (prop::sample::select(vec![1i64, 2, 4, 5, 7, 8]), -9i64..10, -9i64..10, prop::sample::select(vec![1i64, 2, 4, 5, 7, 8])),
            1..3,
        ),
        k in 1u32..3,
    ) {
        let p = 3i64;
        let pk = p.pow(k);
        let gens: Vec<Mat2> = entries
            .into_iter()
            .map(|(a, b, c, d)| Mat2::from_ints([[a, b], [c * pk, d]]))
            .filter(|m| !m.det().is_zero())
            .collect();
        prop_assume!(!gens.is_empty());
        let rep = MatrixRep::new(3, gens, None).unwrap();
        check_segment_classification(&rep, 5);
    }
}
