mod common;

use common::example;
use matfree::arrangement::{Arrangement, Hyperplane};
use matfree::exactfield::{FieldSpec, Scalar};
use matfree::freeness::{
    check_inductively_free, covers_by_union, exponents_from_block_sizes, find_mat_partition, find_matstar_partition,
    mat_step_check, verify_certificate, verify_inductive_chain, verify_mat_partition, verify_matstar_partition,
    Condition, CoverMethod, Exponents, FailureDetail, OrderedPartition, Variant,
};
use matfree::Error;

fn gf(q: u64) -> FieldSpec {
    FieldSpec::gf(q).unwrap()
}

fn example_partition() -> OrderedPartition {
    OrderedPartition::new(vec![vec![0, 1, 2], vec![3, 4], vec![5]])
}

fn pts(v: &[[u32; 3]]) -> Vec<Vec<Scalar>> {
    v.iter()
        .map(|p| p.iter().map(|&c| Scalar::Finite(c)).collect())
        .collect()
}

#[test]
fn dual_partition_examples() {
    assert_eq!(exponents_from_block_sizes(3, &[3, 2, 1]).unwrap().values(), &[1, 2, 3]);
    assert_eq!(exponents_from_block_sizes(3, &[3]).unwrap().values(), &[1, 1, 1]);
    assert_eq!(
        exponents_from_block_sizes(4, &[3, 2, 1]).unwrap().values(),
        &[0, 1, 2, 3]
    );
    assert!(matches!(
        exponents_from_block_sizes(2, &[3]),
        Err(Error::BlockTooLarge { .. })
    ));
}

#[test]
fn cover_examples() {
    for (q, covered) in [(2, true), (4, false)] {
        let f = gf(q);
        let x = Hyperplane::from_ints(&f, &[0, 0, 1]).unwrap().subspace(&f);
        let hs: Vec<Hyperplane> = [[1, 0, 0], [0, 1, 0], [1, 1, 0]]
            .iter()
            .map(|c| Hyperplane::from_ints(&f, c).unwrap())
            .collect();
        assert_eq!(covers_by_union(&x, &hs, CoverMethod::Enumerate).unwrap(), covered);
        assert_eq!(covers_by_union(&x, &hs, CoverMethod::Charpoly).unwrap(), covered);
        assert!(!covers_by_union(&x, &[], CoverMethod::Enumerate).unwrap());
    }
}

#[test]
fn mat_step_examples() {
    let f4 = gf(4);
    let b = example(&f4);
    let r = mat_step_check(
        &Arrangement::empty(&f4, 3),
        &Exponents::zeros(3),
        &b.hyperplanes()[..3],
        Variant::Mat,
    )
    .unwrap();
    assert!(r.ok);
    assert_eq!(r.exponents.unwrap().values(), &[1, 1, 1]);

    let a = example(&gf(2));
    let prev = a.subarrangement(&[0, 1, 2, 3, 4]).unwrap();
    let r = mat_step_check(&prev, &Exponents::new(vec![1, 2, 2]), &[a.get(5).clone()], Variant::Mat).unwrap();
    assert!(!r.ok);
    assert_eq!(r.failure.unwrap().condition, Condition::Avoidance);

    let f2 = gf(2);
    let dependent = vec![
        Hyperplane::from_ints(&f2, &[1, 0, 0]).unwrap(),
        Hyperplane::from_ints(&f2, &[1, 0, 0]).unwrap(),
    ];
    assert!(matches!(
        mat_step_check(
            &Arrangement::empty(&f2, 3),
            &Exponents::zeros(3),
            &dependent,
            Variant::Mat
        ),
        Err(Error::DuplicateHyperplane { .. })
    ));
    let q = FieldSpec::rational();
    let three = vec![
        Hyperplane::from_ints(&q, &[1, 0, 0]).unwrap(),
        Hyperplane::from_ints(&q, &[0, 1, 0]).unwrap(),
        Hyperplane::from_ints(&q, &[1, 1, 0]).unwrap(),
    ];
    let r = mat_step_check(&Arrangement::empty(&q, 3), &Exponents::zeros(3), &three, Variant::Mat).unwrap();
    assert_eq!(r.failure.unwrap().condition, Condition::Rank);
}

#[test]
fn step_restriction_count_failure() {
    // Two hyperplanes added while the top exponent occurs once.
    let f3 = gf(3);
    let prev = Arrangement::from_int_rows(&f3, 3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 0]]).unwrap();
    let exp = check_inductively_free(&prev).unwrap().exponents().unwrap().clone();
    assert_eq!(exp.values(), &[1, 1, 2]);
    let added = vec![
        Hyperplane::from_ints(&f3, &[1, 0, 1]).unwrap(),
        Hyperplane::from_ints(&f3, &[0, 1, 1]).unwrap(),
    ];
    let r = mat_step_check(&prev, &exp, &added, Variant::MatStar).unwrap();
    let failure = r.failure.unwrap();
    assert_eq!(failure.condition, Condition::RestrictionCount);
    assert_eq!(
        failure.detail,
        FailureDetail::RestrictionCount {
            hyperplane: 0,
            expected: 2,
            found: 3
        }
    );
}

#[test]
fn example_partition_on_b_and_a() {
    let b = example(&gf(4));
    let v = verify_mat_partition(&b, &example_partition(), Variant::Mat).unwrap();
    let cert = v.certificate().unwrap();
    assert_eq!(cert.exponents.values(), &[1, 2, 3]);
    assert!(verify_certificate(&b, cert).unwrap().valid);

    let a = example(&gf(2));
    let v = verify_mat_partition(&a, &example_partition(), Variant::Mat).unwrap();
    let f = v.failure().unwrap();
    assert_eq!(f.step, 2);
    assert_eq!(f.block, vec![5]);
    assert_eq!(f.condition, Condition::Avoidance);
    let FailureDetail::Covered { points } = &f.detail else {
        panic!("expected covered points, got {:?}", f.detail);
    };
    let listed: Vec<Vec<Scalar>> = points.iter().map(|p| p.point.clone()).collect();
    assert_eq!(listed, pts(&[[0, 0, 0], [1, 0, 0], [0, 1, 1], [1, 1, 1]]));
    for p in points {
        assert!(a.get(p.hyperplane).contains_point(a.field(), &p.point));
        assert!(p.hyperplane < 5);
    }

    assert!(verify_matstar_partition(&a, &example_partition()).unwrap().is_valid());
}

#[test]
fn search_examples() {
    let a = example(&gf(2));
    let r = find_mat_partition(&a, Variant::Mat).unwrap();
    assert!(r.refutation().unwrap().explored_states > 0);
    assert_eq!(find_mat_partition(&a, Variant::Mat).unwrap(), r);

    let b = example(&gf(4));
    let c = find_mat_partition(&b, Variant::Mat).unwrap();
    assert_eq!(c.certificate().unwrap().block_sizes(), vec![3, 2, 1]);
    assert!(find_matstar_partition(&a).unwrap().is_certificate());

    for v in [Variant::Mat, Variant::MatStar] {
        let empty = find_mat_partition(&Arrangement::empty(&gf(3), 3), v).unwrap();
        assert_eq!(empty.certificate().unwrap().exponents.values(), &[0, 0, 0]);
    }
}

#[test]
fn search_guard() {
    let f5 = gf(5);
    let mut rows: Vec<Vec<i64>> = Vec::new();
    for a in 0..5 {
        for b in 0..5 {
            rows.push(vec![1, a, b]);
        }
    }
    let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
    let big = Arrangement::from_int_rows(&f5, 3, &refs).unwrap();
    assert_eq!(big.len(), 25);
    if std::env::var("MATFREE_GUARD_OVERRIDE").is_err() {
        assert!(matches!(
            find_mat_partition(&big, Variant::Mat),
            Err(Error::GuardExceeded { .. })
        ));
        assert!(matches!(check_inductively_free(&big), Err(Error::GuardExceeded { .. })));
    }
}

#[test]
fn inductive_examples() {
    let empty = check_inductively_free(&Arrangement::empty(&gf(2), 3)).unwrap();
    assert_eq!(empty.exponents().unwrap().values(), &[0, 0, 0]);
    for q in [2, 4] {
        let a = example(&gf(q));
        assert_eq!(
            check_inductively_free(&a).unwrap().exponents().unwrap().values(),
            &[1, 2, 3]
        );
        let chain = verify_inductive_chain(&a, &[0, 1, 2, 3, 4, 5]).unwrap();
        assert!(chain.ok);
        let sizes: Vec<Vec<usize>> = chain
            .steps
            .iter()
            .map(|s| s.exponents_after.clone().unwrap().into())
            .collect();
        assert_eq!(
            sizes,
            vec![
                vec![0, 0, 1],
                vec![0, 1, 1],
                vec![1, 1, 1],
                vec![1, 1, 2],
                vec![1, 2, 2],
                vec![1, 2, 3]
            ]
        );
    }
}

#[test]
fn non_free_is_refuted_everywhere() {
    // Four generic planes in 3-space: χ = (t-1)(t^2-3t+3) does not factor.
    let q = FieldSpec::rational();
    let a = Arrangement::from_int_rows(&q, 3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 1]]).unwrap();
    assert!(find_mat_partition(&a, Variant::Mat).unwrap().is_refutation());
    assert!(find_mat_partition(&a, Variant::MatStar).unwrap().is_refutation());
    assert!(!check_inductively_free(&a).unwrap().is_free());
}
