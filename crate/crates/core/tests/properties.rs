use nilcoh::basis::{GeneratorId, GradedBasis, MultiIndex};
use nilcoh::cochain::{lambda_map, rho_map, BasisCochain, Cochain, Rational};
use nilcoh::linalg::{self, SparseMatrix, SparseVec, MERSENNE_31};
use proptest::prelude::*;

fn generator(r: u16, s: u16) -> impl Strategy<Value = GeneratorId> {
    (0..(r + s)).prop_map(move |k| if k < r { GeneratorId::even(k + 1) } else { GeneratorId::odd(k - r + 1) })
}

fn word(r: u16, s: u16, max_len: usize) -> impl Strategy<Value = MultiIndex> {
    prop::collection::vec(generator(r, s), 0..=max_len).prop_map(MultiIndex::new)
}

fn small_matrix(max: usize) -> impl Strategy<Value = SparseMatrix> {
    (1..=max, 1..=max).prop_flat_map(|(rows, cols)| {
        prop::collection::vec(-2i64..=2, rows * cols).prop_map(move |vals| {
            let columns = (0..cols)
                .map(|j| {
                    (0..rows)
                        .filter_map(|i| {
                            let v = vals[j * rows + i];
                            (v != 0).then(|| (i, Rational::from_integer(v.into())))
                        })
                        .collect()
                })
                .collect();
            SparseMatrix::from_columns(rows, columns).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn parity_of_concatenation_is_xor(a in word(2, 2, 6), b in word(2, 2, 6)) {
        prop_assert_eq!(a.concat(&b).parity(), a.parity() ^ b.parity());
    }

    #[test]
    fn rank_unrank_inverse(n in 0usize..7, seed in any::<u64>()) {
        let basis = GradedBasis::new(2, 1).unwrap();
        let words = basis.word_count(n).unwrap() as usize;
        let k = (seed as usize) % words;
        let w = basis.unrank(n, k).unwrap();
        prop_assert_eq!(w.len(), n);
        prop_assert_eq!(basis.rank_of(&w).unwrap(), k);
    }

    #[test]
    fn lambda_rho_shift_degree_and_parity(i in word(1, 2, 4), j in word(1, 2, 3), t in generator(1, 2)) {
        let phi = Cochain::basis(BasisCochain::new(i.clone(), t));
        let l = lambda_map(&j, &phi);
        let r = rho_map(&j, &phi);
        for c in [&l, &r] {
            prop_assert_eq!(c.degree(), i.len() + j.len());
            prop_assert_eq!(c.parity(), phi.parity() ^ j.parity());
            prop_assert_eq!(c.len(), 1);
        }
        let sign = if i.parity() & j.parity() == 1 { -1 } else { 1 };
        let expected = BasisCochain::new(i.concat(&j), t);
        prop_assert_eq!(r.coefficient(&expected), Rational::from_integer(sign.into()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn rank_is_transpose_invariant(m in small_matrix(50)) {
        prop_assert_eq!(linalg::rank(&m).rank, linalg::rank(&m.transpose()).rank);
    }

    #[test]
    fn rational_rank_matches_modular_rank(m in small_matrix(50)) {
        prop_assert_eq!(Some(linalg::rank(&m).rank), linalg::rank_mod_p(&m, MERSENNE_31));
    }

    #[test]
    fn kernel_vectors_are_killed(m in small_matrix(30)) {
        let kernel = linalg::kernel_basis(&m);
        prop_assert_eq!(kernel.len(), m.ncols() - linalg::rank(&m).rank);
        for v in &kernel {
            prop_assert!(m.mul_vec(v).unwrap().is_empty());
        }
        let k = SparseMatrix::from_columns(m.ncols(), kernel.clone()).unwrap();
        prop_assert_eq!(linalg::rank(&k).rank, kernel.len());
    }

    #[test]
    fn span_witness_reproduces_target(m in small_matrix(20), coeffs in prop::collection::vec(-3i64..=3, 20)) {
        let x: SparseVec = (0..m.ncols())
            .filter(|&j| coeffs[j] != 0)
            .map(|j| (j, Rational::new(coeffs[j].into(), 2.into())))
            .collect();
        let v = m.mul_vec(&x).unwrap();
        let w = linalg::in_span(&m, &v).unwrap().expect("in span by construction");
        prop_assert_eq!(m.mul_vec(&w).unwrap(), v);
    }
}
