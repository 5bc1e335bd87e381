//! Cross-checks against brute-force oracles that share no code with the library.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use walkrank_core::linalg::is_prime;
use walkrank_core::quotient::{canonical_partition, divisor_matrix};
use walkrank_core::*;

fn cofactor_det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = BigInt::zero();
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<BigInt>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, x)| x.clone()).collect())
            .collect();
        let term = &m[0][j] * cofactor_det(&minor);
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut with: Vec<Vec<usize>> = subsets(n - 1, k - 1);
    for s in &mut with {
        s.push(n - 1);
    }
    with.extend(subsets(n - 1, k));
    with
}

/// Invariant factors from determinantal divisors: `D_k` is the gcd of all
/// `k x k` minors and `d_k = D_k / D_{k-1}`.
fn snf_by_minors(m: &IntMatrix) -> Vec<BigInt> {
    let rows = m.to_rows();
    let mut factors = Vec::new();
    let mut prev = BigInt::from(1);
    for k in 1..=m.rows().min(m.cols()) {
        let mut g = BigInt::zero();
        for rs in subsets(m.rows(), k) {
            for cs in subsets(m.cols(), k) {
                let sub: Vec<Vec<BigInt>> = rs
                    .iter()
                    .map(|&i| cs.iter().map(|&j| rows[i][j].clone()).collect())
                    .collect();
                g = g.gcd(&cofactor_det(&sub));
            }
        }
        if g.is_zero() {
            break;
        }
        factors.push(&g / &prev);
        prev = g;
    }
    factors
}

fn small_matrix(max_dim: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(move |(r, c)| {
        proptest::collection::vec(proptest::collection::vec(-bound..=bound, c), r)
            .prop_map(|rows| IntMatrix::from_i64_rows(&rows).unwrap())
    })
}

/// Low-rank matrices (product of two thin factors), where rank bugs show up.
fn low_rank_matrix() -> impl Strategy<Value = IntMatrix> {
    (1usize..=6, 1usize..=6, 1usize..=3).prop_flat_map(|(r, c, k)| {
        (
            proptest::collection::vec(proptest::collection::vec(-4i64..=4, k), r),
            proptest::collection::vec(proptest::collection::vec(-4i64..=4, c), k),
        )
            .prop_map(|(a, b)| {
                IntMatrix::from_i64_rows(&a)
                    .unwrap()
                    .mul(&IntMatrix::from_i64_rows(&b).unwrap())
                    .unwrap()
            })
    })
}

#[test]
fn snf_of_diagonal_pair_matches_minors() {
    let m = IntMatrix::from_i64_rows(&[vec![4, 0], vec![0, 6]]).unwrap();
    let oracle = snf_by_minors(&m);
    assert_eq!(oracle, vec![BigInt::from(2), BigInt::from(12)]);
    assert_eq!(smith_normal_form(&m).invariant_factors, oracle);
}

#[test]
fn small_extended_dynkin_snf_matches_minors() {
    // n = 4 is 5x5 and n = 5 is 6x6; both are cheap for the minor oracle
    for (n, want) in [(4usize, vec![1, 3]), (5, vec![1, 2])] {
        let w = walk_matrix_square(&make_extended_dynkin(n).unwrap().adjacency_matrix()).unwrap();
        let oracle = snf_by_minors(&w);
        let want: Vec<BigInt> = want.into_iter().map(BigInt::from).collect();
        assert_eq!(oracle, want);
        assert_eq!(smith_normal_form(&w).invariant_factors, oracle);
    }
}

#[test]
fn divisor_walk_determinant_n5() {
    let g = make_extended_dynkin(5).unwrap();
    let b = divisor_matrix(&g, &canonical_partition(5).unwrap()).unwrap();
    let wb = walk_matrix_square(&b).unwrap();
    let oracle = cofactor_det(&wb.to_rows());
    // rank floor(5/2) = 2 < 4, so the 4x4 determinant vanishes
    assert_eq!(oracle, BigInt::zero());
    assert_eq!(det_exact(&wb).unwrap(), oracle);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn snf_agrees_with_determinantal_divisors(m in small_matrix(4, 9)) {
        prop_assert_eq!(smith_normal_form(&m).invariant_factors, snf_by_minors(&m));
    }

    #[test]
    fn snf_agrees_with_minors_on_low_rank(m in low_rank_matrix()) {
        prop_assume!(m.rows() <= 5 && m.cols() <= 5);
        prop_assert_eq!(smith_normal_form(&m).invariant_factors, snf_by_minors(&m));
    }

    #[test]
    fn determinant_matches_cofactor_expansion(k in 1usize..=6, seed in proptest::collection::vec(-20i64..=20, 36)) {
        let rows: Vec<Vec<i64>> = (0..k).map(|i| seed[i * k..(i + 1) * k].to_vec()).collect();
        let m = IntMatrix::from_i64_rows(&rows).unwrap();
        let det = det_exact(&m).unwrap();
        prop_assert_eq!(&det, &cofactor_det(&m.to_rows()));
        prop_assert_eq!(det.is_zero(), rank_fraction_free(&m) < k);
        if !det.is_zero() {
            let prod: BigInt = smith_normal_form(&m).invariant_factors.iter().product();
            prop_assert_eq!(prod, det.abs());
        }
    }

    #[test]
    fn rank_routes_agree(m in low_rank_matrix(), p in prop::sample::select(vec![2u64, 3, 5, 7, 65_537, 1_000_000_007])) {
        let r = rank_fraction_free(&m);
        prop_assert_eq!(r, rank_via_snf(&m));
        prop_assert!(rank_modular(&m, p).unwrap() <= r);
    }

    #[test]
    fn snf_is_invariant_under_unimodular_mixing(m in small_matrix(5, 9), i in 0usize..5, j in 0usize..5, q in -3i64..=3) {
        // add q times one row to another, then swap two columns
        let mut rows = m.to_rows();
        let (i, j) = (i % m.rows(), j % m.rows());
        if i != j {
            let src = rows[j].clone();
            for (x, y) in rows[i].iter_mut().zip(src) {
                *x += BigInt::from(q) * y;
            }
        }
        let last = m.cols() - 1;
        for row in &mut rows {
            row.swap(0, last);
        }
        let mixed = IntMatrix::from_rows(rows).unwrap();
        prop_assert!(integrally_equivalent(&m, &mixed).unwrap());
    }

    #[test]
    fn smith_form_of_smith_form_is_itself(m in small_matrix(6, 9)) {
        let s = smith_normal_form(&m);
        prop_assert_eq!(smith_normal_form(&s.to_matrix()), s);
    }

    #[test]
    fn matrix_text_round_trip(m in small_matrix(6, 1_000_000)) {
        prop_assert_eq!(m.to_string().parse::<IntMatrix>().unwrap(), m);
    }

    #[test]
    fn edge_list_round_trip(order in 2usize..12, pairs in proptest::collection::vec((1usize..12, 1usize..12), 0..20)) {
        let edges: Vec<_> = pairs.into_iter().filter(|&(u, v)| u != v && u <= order && v <= order).collect();
        let g = Graph::from_edge_list(order, &edges).unwrap();
        prop_assert_eq!(g.to_edge_list_string().parse::<Graph>().unwrap(), g.clone());
        let a = g.adjacency_matrix();
        prop_assert_eq!(a.transpose(), a);
    }

    #[test]
    fn cosine_sum_matches_direct_sum(a in 0.05f64..3.0, b in -3.0f64..3.0, x in 0.05f64..2.0, n in 1u64..60) {
        prop_assume!((0.5 * a * x).sin().abs() > 1e-3);
        let direct: f64 = (1..=n).map(|k| ((a * k as f64 + b) * x).cos()).sum();
        prop_assert!((cosine_sum(a, b, x, n).unwrap() - direct).abs() < 1e-10);
    }
}

#[test]
fn prime_test_agrees_with_trial_division() {
    let trial = |n: u64| n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0);
    for n in 0..20_000u64 {
        assert_eq!(is_prime(n), trial(n), "n = {n}");
    }
}

#[test]
fn spectral_determinant_matches_exact_on_random_symmetric() {
    use rand::{Rng, SeedableRng};
    use num_traits::ToPrimitive;

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let mut nonzero_cases = 0;
    for _ in 0..200 {
        let k = rng.gen_range(2..=5);
        let mut rows = vec![vec![0i64; k]; k];
        for i in 0..k {
            for j in i..k {
                let x = rng.gen_range(-3..=3);
                rows[i][j] = x;
                rows[j][i] = x;
            }
        }
        let m = IntMatrix::from_i64_rows(&rows).unwrap();
        let exact = det_exact(&walk_matrix_square(&m).unwrap()).unwrap().to_f64().unwrap();
        let mf = m.to_f64_rows();
        let eig = symmetric_eigen(&mf).unwrap();
        let distinct = eig.values.windows(2).all(|w| w[1] - w[0] > 1e-3);
        if !distinct {
            continue;
        }
        // symmetric, so eigenpairs of M are eigenpairs of M^T
        let pairs: Vec<(f64, Vec<f64>)> = eig.values.iter().copied().zip(eig.vectors).collect();
        let spectral = det_walk_spectral(&mf, &pairs).unwrap();
        assert!(
            (spectral - exact).abs() <= 1e-6 * exact.abs().max(1.0),
            "{rows:?}: spectral {spectral} vs exact {exact}"
        );
        if exact != 0.0 {
            nonzero_cases += 1;
        }
    }
    assert!(nonzero_cases > 50, "only {nonzero_cases} nondegenerate cases");
}
