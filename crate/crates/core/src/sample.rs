//! Seeded generators for commuting tuples.
//!
//! Used by the test suites and benchmarks; also handy for experiments.
//! Everything is deterministic in the seed.

use crate::dirac::CommutingTuple;
use crate::mat::{self, c, CMatrix, C64};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Dense matrix with entries uniform in the unit square `[-1,1]²` of C.
pub fn random_matrix(n: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    CMatrix::from_fn(n, n, |_, _| c(rng.random::<f64>() * 2.0 - 1.0, rng.random::<f64>() * 2.0 - 1.0))
}

pub fn random_vector(d: usize, rng: &mut ChaCha8Rng) -> Vec<C64> {
    (0..d).map(|_| c(rng.random::<f64>() * 2.0 - 1.0, rng.random::<f64>() * 2.0 - 1.0)).collect()
}

/// Haar-ish random unitary: Q factor of a random complex matrix.
pub fn random_unitary(n: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    random_matrix(n, rng).qr().q()
}

/// Commuting tuple of quadratic polynomials in one random matrix,
/// normalised to unit max-entry norm. Commutators vanish up to rounding.
pub fn random_commuting_tuple(d: usize, n: usize, rng: &mut ChaCha8Rng) -> CommutingTuple {
    let mut a = random_matrix(n, rng);
    let scale = mat::max_abs(&a).max(1e-12);
    a /= c(scale, 0.0);
    let a2 = &a * &a;
    let id = mat::identity(n);
    let matrices: Vec<CMatrix> = (0..d)
        .map(|_| {
            let coeffs = random_vector(3, rng);
            &id * coeffs[0] + &a * coeffs[1] + &a2 * coeffs[2]
        })
        .collect();
    CommutingTuple::new(matrices).expect("polynomials in one matrix commute")
}

/// Simultaneously diagonalizable tuple `T_k = Q D_k Q^*` with a shared
/// random unitary. Returns the tuple together with its joint eigenvalue
/// d-vectors (one per basis index of the diagonal).
pub fn random_diagonalizable_tuple(
    d: usize,
    n: usize,
    rng: &mut ChaCha8Rng,
) -> (CommutingTuple, Vec<Vec<C64>>) {
    let q = random_unitary(n, rng);
    let diags: Vec<Vec<C64>> = (0..d).map(|_| random_vector(n, rng)).collect();
    let matrices: Vec<CMatrix> = diags
        .iter()
        .map(|diag| {
            let dm = CMatrix::from_fn(n, n, |i, j| if i == j { diag[i] } else { c(0.0, 0.0) });
            &q * dm * q.adjoint()
        })
        .collect();
    let joint: Vec<Vec<C64>> = (0..n).map(|i| (0..d).map(|k| diags[k][i]).collect()).collect();
    (CommutingTuple::new(matrices).expect("conjugated diagonals commute"), joint)
}

/// Tuple of diagonal matrices given by their diagonals.
pub fn diagonal_tuple(diags: &[Vec<C64>]) -> CommutingTuple {
    let n = diags[0].len();
    let matrices: Vec<CMatrix> = diags
        .iter()
        .map(|diag| CMatrix::from_fn(n, n, |i, j| if i == j { diag[i] } else { c(0.0, 0.0) }))
        .collect();
    CommutingTuple::new(matrices).expect("diagonal matrices commute")
}

/// Single Jordan block `J_n(λ)`.
pub fn jordan_block(n: usize, lambda: C64) -> CMatrix {
    CMatrix::from_fn(n, n, |i, j| {
        if i == j {
            lambda
        } else if j == i + 1 {
            c(1.0, 0.0)
        } else {
            c(0.0, 0.0)
        }
    })
}
