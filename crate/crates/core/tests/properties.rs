//! Structural properties of perspectives, matrix functions and the
//! quadrature right-hand sides, over seeded random inputs.

use opmono_core::identities::{
    check_log_difference, rhs_perspective_difference, rhs_transpose_perspective_difference,
};
use opmono_core::loewner::{
    eval_matrix_integral, eval_matrix_spectral, make_discrete, make_log_normalized, make_power,
};
use opmono_core::perspective::{
    geometric_mean, perspective, relative_residual, transpose_identity_check, Weight,
};
use opmono_core::random::{gaussian_matrix, random_ordered_pair, random_spd, rng_from_seed};
use opmono_core::spd::{loewner_leq, SYMMETRY_TOL};
use opmono_core::{LoewnerFunction, Matrix, QuadraturePlan, SpdMatrix, SymMatrix};
use proptest::prelude::*;

fn functions() -> Vec<LoewnerFunction> {
    vec![
        make_power(0.25).unwrap(),
        make_power(0.5).unwrap(),
        make_power(0.75).unwrap(),
        make_discrete(1.0, 2.0, &[(0.5, 1.0), (3.0, 0.7)]).unwrap(),
        make_log_normalized(),
    ]
}

fn congruence_by(s: &Matrix, m: &Matrix) -> Matrix {
    s.matmul(m).matmul(&s.transpose())
}

fn spd(m: Matrix) -> SpdMatrix {
    SpdMatrix::from_sym(SymMatrix::symmetrize(&m)).unwrap()
}

fn rel(a: &Matrix, b: &Matrix) -> f64 {
    (a - b).frobenius_norm() / b.frobenius_norm().max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// `P_f(SBSᵀ, SASᵀ) = S P_f(B, A) Sᵀ`.
    #[test]
    fn perspective_is_congruence_covariant(seed in any::<u64>(), dim in 1usize..5, which in 0usize..5) {
        let f = &functions()[which];
        let a = random_spd(dim, 50.0, seed);
        let b = random_spd(dim, 50.0, seed.wrapping_add(1));
        let mut rng = rng_from_seed(seed.wrapping_add(2));
        let s = gaussian_matrix(dim, &mut rng).shifted(3.0);
        let sa = spd(congruence_by(&s, a.as_matrix()));
        let sb = spd(congruence_by(&s, b.as_matrix()));
        let lhs = perspective(f, sb.as_sym(), &sa).unwrap();
        let rhs = congruence_by(&s, perspective(f, b.as_sym(), &a).unwrap().as_matrix());
        prop_assert!(rel(lhs.as_matrix(), &rhs) < 1e-9);
    }

    /// `P_f(A, A) = f(1) A` and `P_f(cB, cA) = c P_f(B, A)`.
    #[test]
    fn perspective_diagonal_and_homogeneity(seed in any::<u64>(), dim in 1usize..5, which in 0usize..5, c in 0.1f64..10.0) {
        let f = &functions()[which];
        let a = random_spd(dim, 100.0, seed);
        let b = random_spd(dim, 100.0, seed ^ 7);
        let f1 = eval_matrix_spectral(f, &SymMatrix::identity(1)).unwrap().as_matrix()[(0, 0)];
        let same = perspective(f, a.as_sym(), &a).unwrap();
        prop_assert!(rel(same.as_matrix(), &a.as_matrix().scale(f1)) < 1e-12);
        let scaled = perspective(f, &b.as_sym().scale(c), &a.scale(c).unwrap()).unwrap();
        let base = perspective(f, b.as_sym(), &a).unwrap().scale(c);
        prop_assert!(rel(scaled.as_matrix(), base.as_matrix()) < 1e-11);
    }

    /// Commuting inputs reduce to the scalar perspective `a f(b/a)`.
    #[test]
    fn commuting_inputs_are_scalar(diag_a in prop::collection::vec(0.05f64..20.0, 1..5), seed in any::<u64>(), which in 0usize..5) {
        let f = &functions()[which];
        let dim = diag_a.len();
        let mut rng = rng_from_seed(seed);
        let diag_b: Vec<f64> = (0..dim).map(|_| 0.05 + 20.0 * rand_unit(&mut rng)).collect();
        let a = SpdMatrix::from_diag(&diag_a).unwrap();
        let b = SymMatrix::from_diag(&diag_b);
        let p = perspective(f, &b, &a).unwrap();
        for i in 0..dim {
            let expect = diag_a[i] * f.eval_scalar(diag_b[i] / diag_a[i]).unwrap();
            prop_assert!((p.as_matrix()[(i, i)] - expect).abs() <= 1e-12 * expect.abs().max(1.0));
        }
    }

    /// `P_f̃(A, B) = P_f(B, A)`.
    #[test]
    fn transpose_swaps_arguments(seed in any::<u64>(), dim in 1usize..6, which in 0usize..5) {
        let f = &functions()[which];
        let a = random_spd(dim, 1e3, seed);
        let b = random_spd(dim, 1e3, seed ^ 0xff);
        prop_assert!(transpose_identity_check(f, &a, &b).unwrap() < 1e-10);
    }

    /// Operator monotonicity: `X ≤ Y ⇒ f(X) ≤ f(Y)`.
    #[test]
    fn matrix_function_is_monotone(seed in any::<u64>(), dim in 1usize..5, which in 0usize..5) {
        let f = &functions()[which];
        let (x, y) = random_ordered_pair(dim, seed);
        let fx = eval_matrix_spectral(f, x.as_sym()).unwrap();
        let fy = eval_matrix_spectral(f, y.as_sym()).unwrap();
        prop_assert!(loewner_leq(&fx, &fy, 1e-10).unwrap().ordered);
    }

    /// `A ♯_½ B = B ♯_½ A`.
    #[test]
    fn midpoint_geometric_mean_is_symmetric(seed in any::<u64>(), dim in 1usize..5) {
        let a = random_spd(dim, 100.0, seed);
        let b = random_spd(dim, 100.0, seed.rotate_left(7));
        let nu = Weight::new(0.5).unwrap();
        let ab = geometric_mean(&a, &b, nu).unwrap();
        let ba = geometric_mean(&b, &a, nu).unwrap();
        prop_assert!(relative_residual(ab.as_sym(), ba.as_sym()) < 1e-11);
    }
}

fn rand_unit<R: rand::Rng>(rng: &mut R) -> f64 {
    rng.random()
}

#[test]
fn spectral_and_integral_matrix_functions_agree() {
    let plan = QuadraturePlan::default();
    for f in functions() {
        for (dim, seed) in [(1, 3u64), (3, 5), (6, 9)] {
            let u = random_spd(dim, 1e3, seed);
            let spectral = eval_matrix_spectral(&f, u.as_sym()).unwrap();
            let integral = eval_matrix_integral(&f, &u, &plan).unwrap();
            assert!(integral.converged);
            let r = relative_residual(&spectral, &integral.value);
            assert!(r < 1e-8, "{f:?} dim {dim}: {r:e}");
        }
    }
}

#[test]
fn perspective_difference_is_antisymmetric() {
    let plan = QuadraturePlan::default();
    let f = make_power(0.5).unwrap();
    let a = random_spd(3, 30.0, 11);
    let b = random_spd(3, 30.0, 12);
    let p = random_spd(3, 30.0, 13);
    let ab = rhs_perspective_difference(&f, &a, &b, &p, &plan).unwrap().value;
    let ba = rhs_perspective_difference(&f, &b, &a, &p, &plan).unwrap().value;
    assert!(relative_residual(&ab, &ba.scale(-1.0)) < 1e-10);
    let cd = rhs_transpose_perspective_difference(&f, &a, &b, &p, &plan).unwrap().value;
    let dc = rhs_transpose_perspective_difference(&f, &b, &a, &p, &plan).unwrap().value;
    assert!(relative_residual(&cd, &dc.scale(-1.0)) < 1e-10);
}

#[test]
fn quadrature_outputs_are_symmetric() {
    let plan = QuadraturePlan::default();
    let f = make_power(0.25).unwrap();
    let a = random_spd(4, 1e3, 21);
    let b = random_spd(4, 1e3, 22);
    let p = random_spd(4, 1e3, 23);
    let rhs = rhs_perspective_difference(&f, &a, &b, &p, &plan).unwrap().value;
    assert!(rhs.as_matrix().relative_asymmetry() <= SYMMETRY_TOL);
}

#[test]
fn log_difference_on_commuting_inputs() {
    let u = SpdMatrix::from_diag(&[0.5, 2.0, 9.0]).unwrap();
    let v = SpdMatrix::from_diag(&[4.0, 0.25, 9.0]).unwrap();
    let check = check_log_difference(&u, &v, &QuadraturePlan::default()).unwrap();
    assert!(check.residual < 1e-10, "{:e}", check.residual);
}
