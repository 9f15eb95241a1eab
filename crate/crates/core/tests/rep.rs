use num_traits::Zero;

use etale::exactmat::{self, int_vec, Mat, Scalar};
use etale::families;
use etale::liealg::LieAlgebra;
use etale::rep::{Representation, Verdict};

fn product(parts: &[LieAlgebra]) -> LieAlgebra {
    LieAlgebra::product(parts).unwrap()
}

/// Stacked identity `[I_b; 0]` of shape `a × b`, flattened by rows.
fn stacked(a: usize, b: usize) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(); a * b];
    for i in 0..b {
        v[i * b + i] = exactmat::int(1);
    }
    v
}

#[test]
fn sp1_and_sl2_act_through_the_same_operators() {
    let sp = Representation::standard(&LieAlgebra::sp(1).unwrap());
    let sl = Representation::standard(&LieAlgebra::sl(2).unwrap());
    let flat = |r: &Representation| -> Vec<Vec<Scalar>> { r.operators().iter().map(|op| op.to_dense().into_data()).collect() };
    let (a, b) = (flat(&sp), flat(&sl));
    let both: Vec<Vec<Scalar>> = a.iter().chain(&b).cloned().collect();
    let rank = |vs: &[Vec<Scalar>]| exactmat::rank(&Mat::from_columns(4, vs).unwrap());
    assert_eq!(rank(&a), 3);
    assert_eq!(rank(&b), 3);
    assert_eq!(rank(&both), 3);
    assert!(sp.is_homomorphism());
}

#[test]
fn sp2_gl3_stabilizer_is_three_dimensional() {
    let alg = product(&[LieAlgebra::sp(2).unwrap(), LieAlgebra::gl(3).unwrap()]);
    let rep = Representation::direct_sum(&[
        Representation::factor_standard(&alg, 0).unwrap(),
        Representation::factor_standard(&alg, 0)
            .unwrap()
            .tensor(&Representation::factor_standard(&alg, 1).unwrap())
            .unwrap(),
    ])
    .unwrap();
    let mut x = int_vec(&[0, 0, 0, 1]);
    x.extend(stacked(4, 3));
    let kernel = rep.stabilizer_algebra(&x).unwrap();
    assert_eq!(kernel.len(), 3);
    let beta = rep.beta_matrix(&x).unwrap();
    assert!(kernel.iter().all(|v| exactmat::is_zero_vec(&beta.mul_vec(v).unwrap())));
}

#[test]
fn so3_gl2_stabilizer_is_one_dimensional() {
    let alg = product(&[LieAlgebra::so(3).unwrap(), LieAlgebra::gl(2).unwrap()]);
    let rep = Representation::factor_standard(&alg, 0)
        .unwrap()
        .tensor(&Representation::factor_standard(&alg, 1).unwrap())
        .unwrap();
    assert_eq!(rep.stabilizer_algebra(&stacked(3, 2)).unwrap().len(), 1);
}

#[test]
fn sp1_gl1_chain_at_canonical_point() {
    let f = families::sp_chain(1).unwrap();
    let beta = f.representation.beta_matrix(&f.canonical_point).unwrap();
    assert_eq!(beta.shape(), (4, 4));
    assert!(!exactmat::det(&beta).unwrap().is_zero());
    assert!(f.representation.stabilizer_algebra(&f.canonical_point).unwrap().is_empty());
}

#[test]
fn random_so_chain_points_are_mostly_generic() {
    let f = families::so_chain(3).unwrap();
    let nonzero = (1..=10)
        .filter(|&seed| {
            let beta = f.representation.beta_matrix(&f.representation.random_point(10, seed)).unwrap();
            !exactmat::det(&beta).unwrap().is_zero()
        })
        .count();
    assert!(nonzero >= 9, "only {nonzero} of 10 draws generic");
}

#[test]
fn restriction_exhausts_etale_chains() {
    for f in [families::sp_chain(2).unwrap(), families::so_chain(4).unwrap(), families::sp_chain(1).unwrap()] {
        let outcome = f.representation.etale_by_reduction(&f.canonical_point).unwrap();
        assert!(outcome.etale);
        assert_eq!(outcome.steps.last().unwrap().stabilizer_dim, 0);
    }
}

#[test]
fn restricted_operators_remain_homomorphic() {
    let f = families::so_chain(4).unwrap();
    let first = &f.representation.summands()[0];
    let r = f
        .representation
        .restrict_to_stabilizer(0, &f.canonical_point[first.range()])
        .unwrap();
    assert!(r.block_prehomogeneous());
    assert!(r.rep.is_homomorphism());
    assert_eq!(r.rep.dim_v(), f.representation.dim_v() - first.dim);
}

#[test]
fn reduction_detects_non_prehomogeneous_sums() {
    let sl2 = Representation::standard(&LieAlgebra::sl(2).unwrap());
    let rep = Representation::direct_sum(&[sl2.clone(), sl2]).unwrap();
    let x = int_vec(&[1, 0, 0, 1]);
    assert!(!rep.etale_by_reduction(&x).unwrap().etale);
    assert_eq!(rep.is_etale_at(&x).unwrap().verdict, Verdict::NotPrehomogeneousAtPoint);
}

#[test]
fn report_serializes_exactly() {
    let rep = Representation::standard(&LieAlgebra::gl(1).unwrap());
    let report = rep.is_etale_at(&[exactmat::ratio(3, 4)]).unwrap();
    let json = serde_json::to_value(&report).unwrap();
    assert_eq!(json["point"][0], "3/4");
    assert_eq!(json["verdict"], "etale");
    assert_eq!(json["det_nonzero"], true);
    for key in [
        "description",
        "dim_g",
        "dim_v",
        "point",
        "rank_beta",
        "det_nonzero",
        "verdict",
        "stabilizer_dim",
        "stabilizer_basis",
        "citations",
    ] {
        assert!(json.get(key).is_some(), "missing {key}");
    }
}
