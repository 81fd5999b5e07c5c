//! Seeded random test ensembles.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::matrix::Matrix;
use crate::spd::{SpdMatrix, SymMatrix};

/// Condition number of the lower operand produced by [`random_ordered_pair`].
pub const ORDERED_PAIR_CONDITION: f64 = 100.0;

/// Gap added to the upper operand of [`random_ordered_pair`].
pub const ORDERED_PAIR_GAP: f64 = 1e-6;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_matrix<R: Rng>(dim: usize, rng: &mut R) -> Matrix {
    let data = (0..dim * dim).map(|_| rng.sample(StandardNormal)).collect();
    Matrix::from_row_major(dim, data)
}

/// Orthogonal factor of a Gaussian matrix, by modified Gram–Schmidt with
/// one reorthogonalization pass.
pub fn random_orthogonal<R: Rng>(dim: usize, rng: &mut R) -> Matrix {
    let g = gaussian_matrix(dim, rng);
    let mut cols: Vec<Vec<f64>> = (0..dim).map(|j| g.column(j)).collect();
    for j in 0..dim {
        for _pass in 0..2 {
            for k in 0..j {
                let proj: f64 = cols[j].iter().zip(&cols[k]).map(|(a, b)| a * b).sum();
                let (head, tail) = cols.split_at_mut(j);
                for (x, q) in tail[0].iter_mut().zip(&head[k]) {
                    *x -= proj * q;
                }
            }
        }
        let norm = libm::sqrt(cols[j].iter().map(|x| x * x).sum());
        for x in cols[j].iter_mut() {
            *x /= norm;
        }
    }
    let mut q = Matrix::zeros(dim);
    for (j, c) in cols.iter().enumerate() {
        q.set_column(j, c);
    }
    q
}

/// Random SPD matrix with log-uniform spectrum spanning
/// `[1/√κ, √κ]` in a random orthonormal basis. For `dim ≥ 2` both ends of
/// the range are attained, so the condition number is `κ`.
///
/// Panics if `dim == 0` or `condition_target < 1`.
pub fn random_spd(dim: usize, condition_target: f64, seed: u64) -> SpdMatrix {
    assert!(dim >= 1, "dimension must be positive");
    assert!(condition_target >= 1.0, "condition target must be ≥ 1");
    let mut rng = rng_from_seed(seed);
    let half_log = 0.5 * libm::log(condition_target);
    let mut eigs: Vec<f64> = (0..dim)
        .map(|_| {
            let u: f64 = rng.random();
            libm::exp((2.0 * u - 1.0) * half_log)
        })
        .collect();
    if dim >= 2 {
        eigs[0] = libm::exp(-half_log);
        eigs[1] = libm::exp(half_log);
    }
    if eigs.iter().all(|&e| e == eigs[0]) {
        return SpdMatrix::from_diag(&eigs).expect("positive diagonal");
    }
    let q = random_orthogonal(dim, &mut rng);
    let mut scaled = q.clone();
    for j in 0..dim {
        for i in 0..dim {
            scaled[(i, j)] *= eigs[j];
        }
    }
    let m = scaled.matmul(&q.transpose());
    SpdMatrix::from_sym(SymMatrix::symmetrize(&m)).expect("well-conditioned by construction")
}

/// `(X, Y)` with `Y = X + GᵀG + εI ≥ X > 0`.
pub fn random_ordered_pair(dim: usize, seed: u64) -> (SpdMatrix, SpdMatrix) {
    let x = random_spd(dim, ORDERED_PAIR_CONDITION, seed);
    let mut rng = rng_from_seed(seed ^ 0x9e37_79b9_7f4a_7c15);
    let g = gaussian_matrix(dim, &mut rng).scale(1.0 / libm::sqrt(dim as f64));
    let gap = g.tr_matmul(&g).shifted(ORDERED_PAIR_GAP);
    let y = SymMatrix::symmetrize(&(x.as_matrix() + &gap));
    let y = SpdMatrix::from_sym(y).expect("sum of SPD matrices");
    (x, y)
}
