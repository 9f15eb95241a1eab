use num_traits::{One, Zero};
use proptest::prelude::*;

use etale::exactmat::{self, int, Mat, Scalar};
use etale::liealg::{FactorKind, LieAlgebra};
use etale::rep::Representation;

fn config() -> ProptestConfig {
    ProptestConfig::with_cases(100)
}

fn small_matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = Mat> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(|(r, c)| {
        // Plenty of zeros so that rank deficiency actually shows up.
        prop::collection::vec(prop_oneof![3 => Just(0i64), 2 => -3i64..=3], r * c)
            .prop_map(move |v| Mat::from_vec(r, c, v.into_iter().map(int).collect()).unwrap())
    })
}

fn square_pair() -> impl Strategy<Value = (Mat, Mat)> {
    (1usize..=4).prop_flat_map(|n| {
        let entries = || prop::collection::vec(-3i64..=3, n * n);
        (entries(), entries()).prop_map(move |(a, b)| {
            let m = |v: Vec<i64>| Mat::from_vec(n, n, v.into_iter().map(int).collect()).unwrap();
            (m(a), m(b))
        })
    })
}

/// Rank by plain Gauss-Jordan choosing the *last* usable row as pivot.
fn oracle_rank(m: &Mat) -> usize {
    let mut rows: Vec<Vec<Scalar>> = (0..m.rows()).map(|r| m.row(r).to_vec()).collect();
    let mut rank = 0;
    for c in 0..m.cols() {
        let Some(p) = (rank..rows.len()).rev().find(|&r| !rows[r][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank][c].clone();
        for r in 0..rows.len() {
            if r != rank && !rows[r][c].is_zero() {
                let f = &rows[r][c] / &pivot;
                for k in 0..m.cols() {
                    let sub = &f * &rows[rank][k];
                    rows[r][k] -= sub;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn kind_and_size() -> impl Strategy<Value = (FactorKind, usize)> {
    prop_oneof![
        (1usize..=6).prop_map(|n| (FactorKind::Gl, n)),
        (2usize..=6).prop_map(|n| (FactorKind::Sl, n)),
        (2usize..=6).prop_map(|n| (FactorKind::So, n)),
        (1usize..=3).prop_map(|n| (FactorKind::Sp, n)),
    ]
}

fn small_kind_and_size() -> impl Strategy<Value = (FactorKind, usize)> {
    prop_oneof![
        (1usize..=3).prop_map(|n| (FactorKind::Gl, n)),
        (2usize..=3).prop_map(|n| (FactorKind::Sl, n)),
        (2usize..=4).prop_map(|n| (FactorKind::So, n)),
        Just((FactorKind::Sp, 1)),
        Just((FactorKind::Sp, 2)),
    ]
}

/// Every representation constructor, applied to a two-factor algebra.
fn constructed_rep() -> impl Strategy<Value = (usize, Representation)> {
    (small_kind_and_size(), small_kind_and_size(), 0usize..8).prop_map(|((k1, n1), (k2, n2), which)| {
        let a = LieAlgebra::classical(k1, n1).unwrap();
        let b = LieAlgebra::classical(k2, n2).unwrap();
        let alg = LieAlgebra::product(&[a.clone(), b.clone()]).unwrap();
        let f0 = Representation::factor_standard(&alg, 0).unwrap();
        let f1 = Representation::factor_standard(&alg, 1).unwrap();
        let rep = match which {
            0 => Representation::standard(&alg),
            1 => f1.clone(),
            2 => Representation::trivial(&alg, 2),
            3 => f0.dual(),
            4 => f0.tensor(&f1.dual()).unwrap(),
            5 => Representation::direct_sum(&[f0, f1]).unwrap(),
            6 => Representation::standard(&a).external_tensor(&Representation::standard(&b)).unwrap(),
            _ => {
                let chain = LieAlgebra::product(&[
                    LieAlgebra::classical(k1, n1).unwrap(),
                    LieAlgebra::gl(1).unwrap(),
                ]);
                match chain.and_then(|c| Representation::chain(&c)) {
                    Ok(r) => r,
                    Err(_) => Representation::standard(&alg),
                }
            }
        };
        (which, rep)
    })
}

/// Modules with at least one gl factor, so strictly upper-triangular
/// directions exist.
fn gl_module(index: usize) -> Representation {
    let spec: Vec<LieAlgebra> = match index % 4 {
        0 => vec![LieAlgebra::so(3).unwrap(), LieAlgebra::gl(2).unwrap(), LieAlgebra::gl(1).unwrap()],
        1 => vec![LieAlgebra::sp(1).unwrap(), LieAlgebra::gl(1).unwrap()],
        2 => vec![LieAlgebra::gl(3).unwrap(), LieAlgebra::gl(2).unwrap(), LieAlgebra::gl(1).unwrap()],
        _ => vec![LieAlgebra::sl(4).unwrap(), LieAlgebra::gl(3).unwrap(), LieAlgebra::gl(2).unwrap(), LieAlgebra::gl(1).unwrap()],
    };
    Representation::chain(&LieAlgebra::product(&spec).unwrap()).unwrap()
}

/// Coordinates of a random strictly upper-triangular element of the gl
/// factors; gl bases are row-major matrix units.
fn nilpotent_direction(rep: &Representation, coeffs: &[i64]) -> Vec<Scalar> {
    let alg = rep.algebra();
    let mut v = vec![Scalar::zero(); alg.dim()];
    let mut next = coeffs.iter().cycle();
    for f in alg.factors().iter().filter(|f| f.kind == FactorKind::Gl) {
        let n = f.size();
        for i in 0..n {
            for j in i + 1..n {
                v[f.basis.start + i * n + j] = int(*next.next().unwrap());
            }
        }
    }
    v
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn rank_plus_nullity_is_cols(m in small_matrix(5, 6)) {
        let e = exactmat::eliminate(&m);
        prop_assert_eq!(e.rank + e.kernel.len(), m.cols());
        prop_assert_eq!(e.rank, oracle_rank(&m));
        for v in &e.kernel {
            prop_assert!(exactmat::is_zero_vec(&m.mul_vec(v).unwrap()));
        }
    }

    #[test]
    fn rank_of_transpose(m in small_matrix(5, 5)) {
        prop_assert_eq!(exactmat::rank(&m), exactmat::rank(&m.transpose()));
    }

    #[test]
    fn determinant_is_multiplicative((a, b) in square_pair()) {
        let ab = a.matmul(&b).unwrap();
        let (da, db, dab) = (exactmat::det(&a).unwrap(), exactmat::det(&b).unwrap(), exactmat::det(&ab).unwrap());
        prop_assert_eq!(dab, da.clone() * db);
        prop_assert_eq!(da.is_zero(), exactmat::rank(&a) < a.rows());
    }

    #[test]
    fn classical_algebras_satisfy_axioms((kind, n) in kind_and_size()) {
        let alg = LieAlgebra::classical(kind, n).unwrap();
        prop_assert!(alg.verify_lie_axioms());
    }

    #[test]
    fn constructors_are_homomorphisms((which, rep) in constructed_rep()) {
        prop_assert!(rep.is_homomorphism(), "constructor {} on {}", which, rep.algebra().describe());
    }

    #[test]
    fn stabilizer_kernels_are_sound((_, rep) in constructed_rep(), seed in any::<u64>(), bound in 1u64..=3) {
        let x = rep.random_point(bound, seed);
        let beta = rep.beta_matrix(&x).unwrap();
        let kernel = rep.stabilizer_algebra(&x).unwrap();
        prop_assert_eq!(exactmat::rank(&beta) + kernel.len(), rep.dim_g());
        for v in &kernel {
            prop_assert!(exactmat::is_zero_vec(&beta.mul_vec(v).unwrap()));
        }
        // Closure under the bracket: [X, Y] must again be killed by β.
        let alg = rep.algebra();
        let elements: Vec<Mat> = kernel.iter().map(|v| alg.element(v).unwrap()).collect();
        for (i, x1) in elements.iter().enumerate() {
            for y1 in &elements[i + 1..] {
                let coords = alg.coordinates(&alg.bracket(x1, y1).unwrap()).unwrap();
                prop_assert!(exactmat::is_zero_vec(&beta.mul_vec(&coords).unwrap()));
            }
        }
    }

    #[test]
    fn unipotent_translates_keep_rank(
        index in 0usize..4,
        seed in any::<u64>(),
        directions in prop::collection::vec(prop::collection::vec(-2i64..=2, 1..6), 3),
    ) {
        let rep = gl_module(index);
        let x = rep.random_point(4, seed);
        let r0 = exactmat::rank(&rep.beta_matrix(&x).unwrap());
        for d in &directions {
            let n = nilpotent_direction(&rep, d);
            let y = rep.unipotent_translate(&x, &n).unwrap();
            prop_assert_eq!(exactmat::rank(&rep.beta_matrix(&y).unwrap()), r0);
        }
    }
}

#[test]
fn oracle_rank_sanity() {
    assert_eq!(oracle_rank(&Mat::from_rows(&[[1, 2], [2, 4]])), 1);
    assert_eq!(oracle_rank(&Mat::identity(3)), 3);
    assert!(Scalar::one() > Scalar::zero());
}
