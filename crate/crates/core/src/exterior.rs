//! The standard irreducible CAR representation on `ΛC^d`.
//!
//! Basis vectors of the exterior algebra are labelled by subsets
//! `S ⊆ {1..d}`, stored as bitmasks and ordered by their integer value, so
//! `e_∅` has index 0 and `e_{1..d}` has index `2^d − 1`. The creation
//! operator `c_k` acts by wedge insertion,
//! `c_k e_S = (−1)^{#{j ∈ S : j < k}} e_{S ∪ {k}}` for `k ∉ S`, and kills
//! `e_S` otherwise. All frame matrices have exact `0/±1` entries; the CAR
//! relations hold exactly and are validated rather than trusted (see
//! [`CliffordFrame::car_residuals`]).

use crate::mat::{self, c, CMatrix, C64};
use thiserror::Error;

/// Hard cap on the ambient dimension: beyond this, the `2^d`-dimensional
/// dense matrices stop being desk-scale.
pub const MAX_DIMENSION: usize = 16;

#[derive(Debug, Error, PartialEq)]
pub enum ExteriorError {
    #[error("dimension d = {0} out of range (need 1 ≤ d ≤ {MAX_DIMENSION})")]
    DimensionOutOfRange(usize),
    #[error("mode index k = {k} out of range for d = {d} (modes are 1-based)")]
    ModeOutOfRange { k: usize, d: usize },
    #[error("bitmask {bits:#x} does not fit in d = {d} modes")]
    BitsOutOfRange { bits: u32, d: usize },
    #[error("vector has {got} entries, expected {expected}")]
    LengthMismatch { got: usize, expected: usize },
    #[error("|λ| = {0} is not 1 within 1e-12")]
    NonUnitModulus(f64),
}

/// A subset `S ⊆ {1..d}` labelling the exterior-algebra basis vector `e_S`.
///
/// Bit `k−1` of `bits` is set iff mode `k ∈ S` (modes are 1-based). The
/// basis index of `e_S` in `ΛC^d` is the integer value of `bits`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MultiIndex {
    bits: u32,
    d: usize,
}

impl MultiIndex {
    pub fn new(bits: u32, d: usize) -> Result<Self, ExteriorError> {
        if d < 1 || d > MAX_DIMENSION {
            return Err(ExteriorError::DimensionOutOfRange(d));
        }
        if (bits as u64) >= (1u64 << d) {
            return Err(ExteriorError::BitsOutOfRange { bits, d });
        }
        Ok(Self { bits, d })
    }

    pub fn empty(d: usize) -> Result<Self, ExteriorError> {
        Self::new(0, d)
    }

    pub fn full(d: usize) -> Result<Self, ExteriorError> {
        if d < 1 || d > MAX_DIMENSION {
            return Err(ExteriorError::DimensionOutOfRange(d));
        }
        Self::new(((1u64 << d) - 1) as u32, d)
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn ambient_dimension(&self) -> usize {
        self.d
    }

    /// Basis position of `e_S` in the integer ordering.
    pub fn index(&self) -> usize {
        self.bits as usize
    }

    /// Form degree `|S|`.
    pub fn degree(&self) -> usize {
        self.bits.count_ones() as usize
    }

    /// Whether mode `k` (1-based) belongs to `S`.
    pub fn contains(&self, k: usize) -> bool {
        k >= 1 && k <= self.d && (self.bits >> (k - 1)) & 1 == 1
    }

    pub fn insert(&self, k: usize) -> Result<Self, ExteriorError> {
        self.check_mode(k)?;
        Ok(Self { bits: self.bits | (1 << (k - 1)), d: self.d })
    }

    pub fn remove(&self, k: usize) -> Result<Self, ExteriorError> {
        self.check_mode(k)?;
        Ok(Self { bits: self.bits & !(1 << (k - 1)), d: self.d })
    }

    /// Modes of `S` in ascending order (1-based).
    pub fn modes(&self) -> Vec<usize> {
        (1..=self.d).filter(|&k| self.contains(k)).collect()
    }

    fn check_mode(&self, k: usize) -> Result<(), ExteriorError> {
        if k < 1 || k > self.d {
            return Err(ExteriorError::ModeOutOfRange { k, d: self.d });
        }
        Ok(())
    }
}

/// Sign picked up when `e_k` is wedged in front of `e_S` and sorted into
/// place: `(−1)^{#{j ∈ S : j < k}}`.
pub fn creation_sign(k: usize, s: MultiIndex) -> Result<i32, ExteriorError> {
    if k < 1 || k > s.ambient_dimension() {
        return Err(ExteriorError::ModeOutOfRange { k, d: s.ambient_dimension() });
    }
    let below = s.bits() & ((1u32 << (k - 1)) - 1);
    Ok(if below.count_ones() % 2 == 0 { 1 } else { -1 })
}

/// The `2^d`-dimensional CAR/Clifford frame: creation matrices `c_1..c_d`,
/// the number operator `N = Σ c_k c_k^*`, the parity `Γ(−1) = (−1)^N`, and
/// the even/odd projections of the induced Z₂-grading.
#[derive(Clone, Debug)]
pub struct CliffordFrame {
    d: usize,
    creation: Vec<CMatrix>,
    number_op: CMatrix,
    parity: CMatrix,
    even_proj: CMatrix,
    odd_proj: CMatrix,
}

impl CliffordFrame {
    /// Builds the standard irreducible frame on `ΛC^d`.
    pub fn build(d: usize) -> Result<Self, ExteriorError> {
        if d < 1 || d > MAX_DIMENSION {
            return Err(ExteriorError::DimensionOutOfRange(d));
        }
        let dim = 1usize << d;
        let mut creation = Vec::with_capacity(d);
        for k in 1..=d {
            let mut ck = mat::zeros(dim, dim);
            for bits in 0..dim as u32 {
                let s = MultiIndex::new(bits, d)?;
                if !s.contains(k) {
                    let sign = creation_sign(k, s)? as f64;
                    ck[(s.insert(k)?.index(), s.index())] = c(sign, 0.0);
                }
            }
            creation.push(ck);
        }
        let number_op = CMatrix::from_fn(dim, dim, |i, j| {
            if i == j {
                c((i as u32).count_ones() as f64, 0.0)
            } else {
                c(0.0, 0.0)
            }
        });
        let (parity, even_proj, odd_proj) = gradings_from_number_op(&number_op);
        Ok(Self { d, creation, number_op, parity, even_proj, odd_proj })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Dimension `2^d` of the carrier space.
    pub fn dim(&self) -> usize {
        1usize << self.d
    }

    /// Creation matrix `c_k`, `k` 1-based.
    pub fn creation(&self, k: usize) -> Result<&CMatrix, ExteriorError> {
        if k < 1 || k > self.d {
            return Err(ExteriorError::ModeOutOfRange { k, d: self.d });
        }
        Ok(&self.creation[k - 1])
    }

    pub fn creations(&self) -> &[CMatrix] {
        &self.creation
    }

    /// Annihilation matrix `c_k^*`.
    pub fn annihilation(&self, k: usize) -> Result<CMatrix, ExteriorError> {
        Ok(self.creation(k)?.adjoint())
    }

    pub fn number_op(&self) -> &CMatrix {
        &self.number_op
    }

    pub fn parity(&self) -> &CMatrix {
        &self.parity
    }

    pub fn even_proj(&self) -> &CMatrix {
        &self.even_proj
    }

    pub fn odd_proj(&self) -> &CMatrix {
        &self.odd_proj
    }

    /// Spectral projection of the number operator at eigenvalue `m`.
    pub fn degree_projection(&self, m: usize) -> CMatrix {
        let dim = self.dim();
        CMatrix::from_fn(dim, dim, |i, j| {
            if i == j && self.degree_at(i) == m as i64 {
                c(1.0, 0.0)
            } else {
                c(0.0, 0.0)
            }
        })
    }

    fn degree_at(&self, i: usize) -> i64 {
        self.number_op[(i, i)].re.round() as i64
    }

    /// Self-adjoint Clifford element `R(z) = C(z) + C(z)^*` for the
    /// complex-linear `C(z) = Σ_k z_k c_k`. Satisfies `R(z)² = ‖z‖²·1`.
    pub fn clifford_r(&self, z: &[C64]) -> Result<CMatrix, ExteriorError> {
        let cz = self.creation_of(z)?;
        Ok(&cz + cz.adjoint())
    }

    /// `C(z) = Σ_k z_k c_k`.
    pub fn creation_of(&self, z: &[C64]) -> Result<CMatrix, ExteriorError> {
        if z.len() != self.d {
            return Err(ExteriorError::LengthMismatch { got: z.len(), expected: self.d });
        }
        let dim = self.dim();
        let mut out = mat::zeros(dim, dim);
        for (k, zk) in z.iter().enumerate() {
            out += &self.creation[k] * *zk;
        }
        Ok(out)
    }

    /// Recovers the complex-linear part `C(z) = ½(R(z) − iR(iz))` from two
    /// evaluations of the real-linear map `R`.
    pub fn complexify(&self, z: &[C64]) -> Result<CMatrix, ExteriorError> {
        let r_z = self.clifford_r(z)?;
        let iz: Vec<C64> = z.iter().map(|w| C64::i() * w).collect();
        let r_iz = self.clifford_r(&iz)?;
        Ok((r_z - r_iz * C64::i()) * c(0.5, 0.0))
    }

    /// Gauge unitary `Γ(λ) = λ^N` for unit-modulus `λ`. Satisfies
    /// `Γ(λ) c_k Γ(λ)^* = λ c_k`.
    pub fn gauge_unitary(&self, lambda: C64) -> Result<CMatrix, ExteriorError> {
        if (lambda.norm() - 1.0).abs() > 1e-12 {
            return Err(ExteriorError::NonUnitModulus(lambda.norm()));
        }
        let dim = self.dim();
        Ok(CMatrix::from_fn(dim, dim, |i, j| {
            if i == j {
                lambda.powi(self.degree_at(i) as i32)
            } else {
                c(0.0, 0.0)
            }
        }))
    }

    /// Worst CAR defect over all mode pairs:
    /// `max_{j,k} ‖c_k c_j + c_j c_k‖, ‖c_k^* c_j + c_j c_k^* − δ_jk·1‖`
    /// in the max-entry norm. Zero, exactly, for frames built here.
    pub fn car_residuals(&self) -> f64 {
        let dim = self.dim();
        let id = mat::identity(dim);
        let mut worst = 0.0f64;
        for k in 0..self.d {
            for j in 0..self.d {
                let ck = &self.creation[k];
                let cj = &self.creation[j];
                let anti = ck * cj + cj * ck;
                worst = worst.max(mat::max_abs(&anti));
                let mut mixed = ck.adjoint() * cj + cj * ck.adjoint();
                if j == k {
                    mixed -= &id;
                }
                worst = worst.max(mat::max_abs(&mixed));
            }
        }
        worst
    }

    /// Unitary `U` with `U c_k U^* = c_k^*` for every `k`, fixed by the
    /// phase convention `U e_∅ = e_{1..d}` (coefficient +1). Columns are
    /// `U e_S = c_{i1}^* ⋯ c_{im}^* e_{1..d}` for `S = {i1 < … < im}`, so
    /// `U` is a signed permutation mapping `e_S` to `± e_{S^c}`.
    pub fn hodge_intertwiner(&self) -> CMatrix {
        let dim = self.dim();
        let mut u = mat::zeros(dim, dim);
        for bits in 0..dim as u32 {
            let s = MultiIndex { bits, d: self.d };
            let mut v = CMatrix::zeros(dim, 1);
            v[(dim - 1, 0)] = c(1.0, 0.0);
            // apply c_{im}^* first, then down to c_{i1}^*
            for k in s.modes().into_iter().rev() {
                v = self.creation[k - 1].adjoint() * v;
            }
            for i in 0..dim {
                u[(i, bits as usize)] = v[(i, 0)];
            }
        }
        u
    }
}

fn gradings_from_number_op(number_op: &CMatrix) -> (CMatrix, CMatrix, CMatrix) {
    let dim = number_op.nrows();
    let parity = CMatrix::from_fn(dim, dim, |i, j| {
        if i == j {
            let n = number_op[(i, i)].re.round() as i64;
            c(if n % 2 == 0 { 1.0 } else { -1.0 }, 0.0)
        } else {
            c(0.0, 0.0)
        }
    });
    let even = CMatrix::from_fn(dim, dim, |i, j| {
        if i == j && number_op[(i, i)].re.round() as i64 % 2 == 0 {
            c(1.0, 0.0)
        } else {
            c(0.0, 0.0)
        }
    });
    let odd = CMatrix::from_fn(dim, dim, |i, j| {
        if i == j && number_op[(i, i)].re.round() as i64 % 2 != 0 {
            c(1.0, 0.0)
        } else {
            c(0.0, 0.0)
        }
    });
    (parity, even, odd)
}

/// Frame whose creation operators are the annihilators of `frame`: the
/// CAR frame underlying the homological (tilde) Dirac pair. Its number
/// operator is `d·1 − N` and its gradings are recomputed accordingly.
pub(crate) fn dual_frame(frame: &CliffordFrame) -> CliffordFrame {
    let dim = frame.dim();
    let creation: Vec<CMatrix> = frame.creations().iter().map(|m| m.adjoint()).collect();
    let number_op = CMatrix::from_fn(dim, dim, |i, j| {
        if i == j {
            c(frame.d() as f64, 0.0) - frame.number_op()[(i, i)]
        } else {
            c(0.0, 0.0)
        }
    });
    let (parity, even_proj, odd_proj) = gradings_from_number_op(&number_op);
    CliffordFrame { d: frame.d(), creation, number_op, parity, even_proj, odd_proj }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat::{identity, max_abs, max_abs_diff};
    use proptest::prelude::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Independent sign oracle: count inversions of the concatenated list
    /// (k, sorted modes of S) needed to sort it.
    fn wedge_sign_by_sorting(k: usize, modes: &[usize]) -> i32 {
        let mut seq: Vec<usize> = Vec::with_capacity(modes.len() + 1);
        seq.push(k);
        seq.extend_from_slice(modes);
        let mut inversions = 0;
        for i in 0..seq.len() {
            for j in (i + 1)..seq.len() {
                if seq[i] > seq[j] {
                    inversions += 1;
                }
            }
        }
        if inversions % 2 == 0 {
            1
        } else {
            -1
        }
    }

    #[test]
    fn creation_sign_examples() {
        let d = 3;
        let empty = MultiIndex::empty(d).unwrap();
        assert_eq!(creation_sign(1, empty).unwrap(), 1);
        let s1 = MultiIndex::new(0b001, d).unwrap(); // {1}
        assert_eq!(creation_sign(2, s1).unwrap(), -1);
        // brute force: e_3 ∧ e_1 ∧ e_2 sorted has 2 inversions
        let s12 = MultiIndex::new(0b011, d).unwrap(); // {1,2}
        let expected = wedge_sign_by_sorting(3, &s12.modes());
        assert_eq!(expected, 1);
        assert_eq!(creation_sign(3, s12).unwrap(), expected);
    }

    #[test]
    fn creation_sign_matches_sorting_oracle_everywhere() {
        for d in 1..=5usize {
            for bits in 0..(1u32 << d) {
                let s = MultiIndex::new(bits, d).unwrap();
                for k in 1..=d {
                    assert_eq!(
                        creation_sign(k, s).unwrap(),
                        wedge_sign_by_sorting(k, &s.modes()),
                        "d={d} k={k} S={:?}",
                        s.modes()
                    );
                }
            }
        }
    }

    #[test]
    fn creation_sign_rejects_out_of_range_mode() {
        let s = MultiIndex::empty(2).unwrap();
        assert!(creation_sign(0, s).is_err());
        assert!(creation_sign(3, s).is_err());
    }

    #[test]
    fn multi_index_invariants() {
        assert!(MultiIndex::new(4, 2).is_err());
        assert!(MultiIndex::new(0, 0).is_err());
        assert!(MultiIndex::new(0, 17).is_err());
        let full = MultiIndex::full(3).unwrap();
        assert_eq!(full.index(), 7);
        assert_eq!(full.degree(), 3);
        assert_eq!(MultiIndex::empty(3).unwrap().index(), 0);
    }

    #[test]
    fn frame_d1_generator() {
        let f = CliffordFrame::build(1).unwrap();
        let c1 = f.creation(1).unwrap();
        let expected = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(max_abs_diff(c1, &expected), 0.0);
    }

    #[test]
    fn frame_d2_number_and_parity() {
        let f = CliffordFrame::build(2).unwrap();
        let n_diag: Vec<f64> = (0..4).map(|i| f.number_op()[(i, i)].re).collect();
        assert_eq!(n_diag, vec![0.0, 1.0, 1.0, 2.0]);
        let g_diag: Vec<f64> = (0..4).map(|i| f.parity()[(i, i)].re).collect();
        assert_eq!(g_diag, vec![1.0, -1.0, -1.0, 1.0]);
        let diff = f.even_proj() + f.odd_proj() - identity(4);
        assert_eq!(max_abs(&diff), 0.0);
        let diff = f.even_proj() - f.odd_proj() - f.parity();
        assert_eq!(max_abs(&diff), 0.0);
    }

    #[test]
    fn frame_rejects_bad_dimension() {
        assert!(CliffordFrame::build(0).is_err());
        assert!(CliffordFrame::build(17).is_err());
    }

    #[test]
    fn car_residuals_vanish_exactly_up_to_d8() {
        for d in 1..=8 {
            let f = CliffordFrame::build(d).unwrap();
            assert_eq!(f.car_residuals(), 0.0, "d = {d}");
        }
    }

    #[test]
    fn car_residual_of_scaled_generator() {
        let mut f = CliffordFrame::build(2).unwrap();
        f.creation[0] *= c(2.0, 0.0);
        // 4·c1^*c1 + 4·c1c1^* − 1 = 3·1 dominates
        assert_eq!(f.car_residuals(), 3.0);
    }

    #[test]
    fn number_op_multiplicities_are_binomial() {
        for d in 1..=6usize {
            let f = CliffordFrame::build(d).unwrap();
            let mut counts = vec![0usize; d + 1];
            for i in 0..f.dim() {
                counts[f.number_op()[(i, i)].re.round() as usize] += 1;
            }
            for (k, &cnt) in counts.iter().enumerate() {
                let binom = (0..k).fold(1usize, |acc, i| acc * (d - i) / (i + 1));
                assert_eq!(cnt, binom, "d={d} k={k}");
            }
        }
    }

    #[test]
    fn clifford_r_d1() {
        let f = CliffordFrame::build(1).unwrap();
        let r = f.clifford_r(&[c(1.0, 0.0)]).unwrap();
        let expected = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(max_abs_diff(&r, &expected), 0.0);
        assert_eq!(max_abs_diff(&(&r * &r), &identity(2)), 0.0);
    }

    #[test]
    fn clifford_r_linearity_and_square() {
        let f = CliffordFrame::build(2).unwrap();
        let zero = f.clifford_r(&[c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert_eq!(max_abs(&zero), 0.0);
        let r = f.clifford_r(&[c(0.0, 1.0), c(0.0, 0.0)]).unwrap();
        let sq = &r * &r;
        assert!(max_abs_diff(&sq, &identity(4)) < 1e-15);
    }

    #[test]
    fn clifford_r_rejects_length_mismatch() {
        let f = CliffordFrame::build(2).unwrap();
        assert!(f.clifford_r(&[c(1.0, 0.0)]).is_err());
    }

    #[test]
    fn complexify_recovers_creation() {
        let f1 = CliffordFrame::build(1).unwrap();
        let c1 = f1.complexify(&[c(1.0, 0.0)]).unwrap();
        assert!(max_abs_diff(&c1, f1.creation(1).unwrap()) < 1e-15);

        let f2 = CliffordFrame::build(2).unwrap();
        let c2 = f2.complexify(&[c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!(max_abs_diff(&c2, f2.creation(2).unwrap()) < 1e-15);

        // complex-linearity: C(iz) = i C(z)
        let z = [c(0.3, -0.7), c(-1.1, 0.2)];
        let iz: Vec<C64> = z.iter().map(|w| C64::i() * w).collect();
        let lhs = f2.complexify(&iz).unwrap();
        let rhs = f2.complexify(&z).unwrap() * C64::i();
        assert!(max_abs_diff(&lhs, &rhs) < 1e-15);
    }

    #[test]
    fn gauge_unitary_examples() {
        let f = CliffordFrame::build(2).unwrap();
        let id = f.gauge_unitary(c(1.0, 0.0)).unwrap();
        assert_eq!(max_abs_diff(&id, &identity(4)), 0.0);
        let minus = f.gauge_unitary(c(-1.0, 0.0)).unwrap();
        assert_eq!(max_abs_diff(&minus, f.parity()), 0.0);
        let gi = f.gauge_unitary(C64::i()).unwrap();
        let lhs = &gi * f.creation(1).unwrap() * gi.adjoint();
        let rhs = f.creation(1).unwrap() * C64::i();
        assert!(max_abs_diff(&lhs, &rhs) < 1e-15);
        assert!(f.gauge_unitary(c(0.5, 0.0)).is_err());
    }

    #[test]
    fn hodge_intertwiner_d1_and_unitarity() {
        let f = CliffordFrame::build(1).unwrap();
        let u = f.hodge_intertwiner();
        let expected = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(max_abs_diff(&u, &expected), 0.0);
        for d in 1..=5 {
            let f = CliffordFrame::build(d).unwrap();
            let u = f.hodge_intertwiner();
            assert_eq!(max_abs_diff(&(&u * u.adjoint()), &identity(f.dim())), 0.0, "d={d}");
            // phase convention: U e_∅ = e_{1..d} with coefficient +1
            assert_eq!(u[(f.dim() - 1, 0)], c(1.0, 0.0));
        }
    }

    #[test]
    fn hodge_intertwiner_swaps_creation_and_annihilation() {
        for d in 1..=5 {
            let f = CliffordFrame::build(d).unwrap();
            let u = f.hodge_intertwiner();
            for k in 1..=d {
                let lhs = &u * f.creation(k).unwrap() * u.adjoint();
                let rhs = f.annihilation(k).unwrap();
                assert_eq!(max_abs_diff(&lhs, &rhs), 0.0, "d={d} k={k}");
            }
        }
    }

    #[test]
    fn dual_frame_satisfies_car_with_complementary_number_op() {
        let f = CliffordFrame::build(3).unwrap();
        let g = dual_frame(&f);
        assert_eq!(g.car_residuals(), 0.0);
        for i in 0..f.dim() {
            assert_eq!(g.number_op()[(i, i)].re + f.number_op()[(i, i)].re, 3.0);
        }
    }

    fn random_z(d: usize, rng: &mut ChaCha8Rng) -> Vec<C64> {
        (0..d).map(|_| c(rng.random::<f64>() * 2.0 - 1.0, rng.random::<f64>() * 2.0 - 1.0)).collect()
    }

    #[test]
    fn clifford_square_law_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(crate::DEFAULT_SEED);
        for d in 1..=4usize {
            let f = CliffordFrame::build(d).unwrap();
            for _ in 0..25 {
                let z = random_z(d, &mut rng);
                let norm_sq: f64 = z.iter().map(|w| w.norm_sqr()).sum();
                let r = f.clifford_r(&z).unwrap();
                let defect = &r * &r - identity(f.dim()) * c(norm_sq, 0.0);
                assert!(max_abs(&defect) < 1e-12);
            }
        }
    }

    #[test]
    fn gauge_covariance_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(crate::DEFAULT_SEED + 1);
        for d in 1..=4usize {
            let f = CliffordFrame::build(d).unwrap();
            for _ in 0..25 {
                let t = rng.random::<f64>() * std::f64::consts::TAU;
                let lambda = c(t.cos(), t.sin());
                let z = random_z(d, &mut rng);
                let lz: Vec<C64> = z.iter().map(|w| lambda * w).collect();
                let g = f.gauge_unitary(lambda).unwrap();
                let lhs = &g * f.clifford_r(&z).unwrap() * g.adjoint();
                let rhs = f.clifford_r(&lz).unwrap();
                assert!(max_abs_diff(&lhs, &rhs) < 1e-12);
            }
        }
    }

    proptest! {
        #[test]
        fn prop_r_squared_is_norm_squared(
            d in 1usize..=4,
            re in proptest::collection::vec(-1.0f64..1.0, 4),
            im in proptest::collection::vec(-1.0f64..1.0, 4),
        ) {
            let f = CliffordFrame::build(d).unwrap();
            let z: Vec<C64> = (0..d).map(|k| c(re[k], im[k])).collect();
            let norm_sq: f64 = z.iter().map(|w| w.norm_sqr()).sum();
            let r = f.clifford_r(&z).unwrap();
            let defect = &r * &r - identity(f.dim()) * c(norm_sq, 0.0);
            prop_assert!(max_abs(&defect) < 1e-12);
        }

        #[test]
        fn prop_creation_sign_flips_on_smaller_inserts(
            d in 2usize..=6,
            raw_bits in 0u32..64,
            raw_k in 0usize..6,
        ) {
            let k = 1 + raw_k % d;
            let bits = raw_bits & (((1u64 << d) - 1) as u32) & !(1 << (k - 1));
            let s = MultiIndex::new(bits, d).unwrap();
            // inserting a mode j < k into S flips the sign of c_k's action
            for j in 1..k {
                if !s.contains(j) {
                    let s2 = s.insert(j).unwrap();
                    prop_assert_eq!(
                        creation_sign(k, s).unwrap(),
                        -creation_sign(k, s2).unwrap()
                    );
                }
            }
        }
    }
}
