mod common;

use netsync::numerics::{
    abscissa_by_bisection, char_poly, is_hurwitz, lyapunov_residual, poly_roots, solve_lyapunov,
    spectral_abscissa, sym_eigen, sym_eigenvalues, Matrix,
};
use proptest::prelude::*;

fn square(max_n: usize, scale: f64) -> impl Strategy<Value = Matrix> {
    (1..=max_n).prop_flat_map(move |n| {
        proptest::collection::vec(-scale..scale, n * n)
            .prop_map(move |data| Matrix::new(n, n, data).unwrap())
    })
}

fn symmetric(max_n: usize) -> impl Strategy<Value = Matrix> {
    square(max_n, 5.0).prop_map(|m| m.symmetrized())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn eigenvalue_sum_is_trace(m in symmetric(10)) {
        let sum: f64 = sym_eigenvalues(&m).unwrap().iter().sum();
        prop_assert!((sum - m.trace()).abs() <= 1e-8 * m.frobenius_norm().max(1.0));
    }

    #[test]
    fn eigenvectors_reconstruct_the_matrix(m in symmetric(8)) {
        let e = sym_eigen(&m).unwrap();
        let diff = (&e.reconstruct() - &m).frobenius_norm();
        prop_assert!(diff <= 1e-9 * m.frobenius_norm().max(1.0));
        prop_assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn routh_agrees_with_abscissa_sign(m in square(8, 1.0), shift in -2.0f64..0.5) {
        let m = m.shifted(shift);
        let a = spectral_abscissa(&m).unwrap();
        prop_assume!(a.abs() >= 1e-7);
        prop_assert_eq!(is_hurwitz(&m, 0.0), a < 0.0);
    }

    #[test]
    fn bisection_abscissa_matches_roots(m in square(6, 1.0)) {
        let a = spectral_abscissa(&m).unwrap();
        let b = abscissa_by_bisection(&m, 1e-10);
        prop_assert!((a - b).abs() <= 1e-6 * (1.0 + a.abs()), "{} vs {}", a, b);
    }

    #[test]
    fn lyapunov_solution_is_spd_with_small_residual(m in square(6, 1.0), margin in 0.05f64..1.0) {
        let a = m.shifted(-(spectral_abscissa(&m).unwrap() + margin));
        let n = a.rows();
        let q = &Matrix::identity(n) + &Matrix::outer(&vec![1.0; n], &vec![1.0; n]);
        let p = solve_lyapunov(&a, &q).unwrap();
        let bound = 1e-9 * (2.0 * a.frobenius_norm() * p.frobenius_norm() + q.frobenius_norm());
        prop_assert!(lyapunov_residual(&a, &p, &q) <= bound);
        prop_assert!(p.is_symmetric(1e-12));
        prop_assert!(sym_eigenvalues(&p).unwrap()[0] > 0.0);
    }

    #[test]
    fn char_poly_roots_match_jacobi(m in symmetric(8)) {
        let mut roots: Vec<f64> = poly_roots(&char_poly(&m).unwrap()).unwrap().iter().map(|z| z.re).collect();
        roots.sort_by(f64::total_cmp);
        let jacobi = sym_eigenvalues(&m).unwrap();
        for (r, j) in roots.iter().zip(&jacobi) {
            prop_assert!((r - j).abs() <= 1e-6 * (1.0 + j.abs()), "{:?} vs {:?}", roots, jacobi);
        }
    }
}

#[test]
fn hurwitz_is_strict() {
    // purely imaginary pair on the axis
    assert!(!is_hurwitz(
        &Matrix::from_rows(&[[0.0, 1.0], [-1.0, 0.0]]),
        0.0
    ));
    assert!(!is_hurwitz(&Matrix::zeros(2, 2), 0.0));
    assert!(is_hurwitz(&Matrix::identity(3).scale(-1e-6), 0.0));
}
