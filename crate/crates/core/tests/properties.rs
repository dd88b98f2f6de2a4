use fourfold_core::brauer::solve_pairing;
use fourfold_core::lattice::Lattice;
use fourfold_core::linalg::{
    det_exact, invert_rational, kernel_of_functional, ldl_decompose, leading_principal_minors, maximal_minors_gcd,
    IntMatrix, IntVector, RatMatrix,
};
use fourfold_core::overlattice::candidate_indices;
use fourfold_core::report::Int;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn small_matrix(n: usize) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec(-3i64..=3, n * n).prop_map(move |v| {
        IntMatrix::new(n, n, v.into_iter().map(BigInt::from).collect()).unwrap()
    })
}

/// `MᵀM + I`, always positive definite.
fn pd_gram(n: usize) -> impl Strategy<Value = IntMatrix> {
    small_matrix(n).prop_map(move |m| {
        let mut g = m.transpose().mul(&m).unwrap();
        for i in 0..n {
            let d = g.get(i, i) + 1;
            g.set(i, i, d);
        }
        g
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fincke_pohst_matches_bruteforce(g in pd_gram(3), bound in 1u64..=6) {
        let l = Lattice::new(g).unwrap();
        prop_assert_eq!(l.short_vectors(bound).unwrap(), l.short_vectors_bruteforce(bound).unwrap());
    }

    #[test]
    fn short_vectors_are_canonical_and_bounded(g in pd_gram(3), bound in 1u64..=6) {
        let l = Lattice::new(g).unwrap();
        let vs = l.short_vectors(bound).unwrap();
        for w in vs.windows(2) {
            prop_assert!(w[0] < w[1]);
        }
        for v in &vs {
            prop_assert!(v.is_canonical());
            let q = l.norm(v).unwrap();
            prop_assert!(q > BigInt::zero() && q <= BigInt::from(bound));
        }
    }

    #[test]
    fn ldl_diagonal_product_is_det(g in pd_gram(3)) {
        let ldl = ldl_decompose(&g).unwrap();
        let prod = ldl.diag.iter().fold(BigRational::one(), |a, d| a * d);
        prop_assert_eq!(prod, BigRational::from_integer(det_exact(&g).unwrap()));
    }

    #[test]
    fn last_minor_is_det(g in pd_gram(4)) {
        let minors = leading_principal_minors(&g).unwrap();
        prop_assert_eq!(minors.last().unwrap(), &det_exact(&g).unwrap());
        prop_assert!(minors.iter().all(|m| *m > BigInt::zero()));
    }

    #[test]
    fn inverse_times_matrix_is_identity(m in small_matrix(3)) {
        match invert_rational(&m) {
            Ok(inv) => prop_assert_eq!(inv.mul(&m.to_rational()).unwrap(), RatMatrix::identity(3)),
            Err(_) => prop_assert!(det_exact(&m).unwrap().is_zero()),
        }
    }

    #[test]
    fn kernel_is_saturated_and_orthogonal(v in prop::collection::vec(-20i64..=20, 2..=5)) {
        let f = IntVector::from_i64s(&v);
        match kernel_of_functional(&f) {
            Ok(basis) => {
                prop_assert_eq!(basis.len(), v.len() - 1);
                for b in &basis {
                    prop_assert!(b.dot(&f).unwrap().is_zero());
                }
                prop_assert_eq!(maximal_minors_gcd(&basis).unwrap(), BigInt::one());
            }
            Err(_) => prop_assert!(f.is_zero()),
        }
    }

    #[test]
    fn pairing_solver_is_exact(form in prop::collection::vec(-30i64..=30, 3), k in -6i64..=6) {
        let form = IntVector::from_i64s(&form);
        let k = BigInt::from(k);
        let g = form.coords().iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        let solvable = !g.is_zero() && k.is_multiple_of(&g);
        match solve_pairing(&form, &k) {
            Some(w) => {
                prop_assert!(solvable);
                prop_assert_eq!(w.dot(&form).unwrap(), k);
            }
            None => prop_assert!(!solvable),
        }
    }

    #[test]
    fn candidate_indices_are_exactly_square_divisors(d in 1i64..5000) {
        let got = candidate_indices(&BigInt::from(d));
        let want: Vec<u64> = (2..=d as u64).filter(|n| n * n <= d as u64 && (d as u64) % (n * n) == 0).collect();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn int_json_round_trip(digits in "-?[1-9][0-9]{0,40}") {
        let v = Int(digits.parse().unwrap());
        let s = serde_json::to_string(&v).unwrap();
        let back: Int = serde_json::from_str(&s).unwrap();
        prop_assert_eq!(&back, &v);
        prop_assert_eq!(serde_json::to_string(&back).unwrap(), s);
    }
}
