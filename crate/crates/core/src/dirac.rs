//! Dirac operators of commuting tuples.
//!
//! For a commuting tuple `T̄ = (T_1,…,T_d)` on `H = C^n`, the coboundary
//! `B = Σ T_k ⊗ c_k` on `H ⊗ ΛC^d` squares to zero and the Dirac operator
//! is `D = B + B^*`. The pair `(D, R)` satisfies three axioms:
//!
//! - (D1) `Γ(−1) D Γ(−1)^* = −D` (D is odd for the Z₂-grading),
//! - (D2) `Γ(λ) D² Γ(λ)^* = D²` for unit `λ` (gauge-invariant Laplacian),
//! - (D3) `R(z)D + DR(z)` commutes with the Clifford algebra.
//!
//! Conversely, every pair satisfying the axioms in standard tensor position
//! comes from a commuting tuple, recovered here by [`DiracPair::reconstruct_tuple`]
//! via `c_k^* D + D c_k^* = T_k ⊗ 1`, and its coboundary can be read off the
//! gauge spectral projections as `B = Σ_n E_{n+1} D E_n`
//! ([`DiracPair::extract_coboundary`]).

use crate::exterior::{dual_frame, CliffordFrame, ExteriorError};
use crate::mat::{self, c, kron, max_abs, max_abs_diff, CMatrix, C64};
use thiserror::Error;

/// Default relative commutativity tolerance for tuple validation.
pub const DEFAULT_COMM_TOL: f64 = 1e-10;
/// Default relative factor for the axiom tolerance `tol·(1 + ‖D‖_max)`.
pub const DEFAULT_AXIOM_TOL_REL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum DiracError {
    #[error(transparent)]
    Exterior(#[from] ExteriorError),
    #[error("tuple is empty")]
    EmptyTuple,
    #[error("matrix {index} is {rows}×{cols}, expected square matrices of one common size")]
    ShapeMismatch { index: usize, rows: usize, cols: usize },
    #[error("non-finite entry in matrix {0}")]
    NonFinite(usize),
    #[error("commutator ‖[T_{i},T_{j}]‖ = {defect:.3e} exceeds {bound:.3e}; tuple is not numerically commuting")]
    NotCommuting { i: usize, j: usize, defect: f64, bound: f64 },
    #[error("λ has {got} entries, expected {expected}")]
    LambdaLength { got: usize, expected: usize },
    #[error("Dirac matrix is {rows}×{cols}, expected {expected}×{expected} for d = {d}, n = {n}")]
    DiracShape { rows: usize, cols: usize, expected: usize, d: usize, n: usize },
    #[error("‖D − D^*‖ = {defect:.3e} exceeds sa_tol = {tol:.3e}")]
    NotSelfAdjoint { defect: f64, tol: f64 },
    #[error("Dirac axioms fail: {report}")]
    AxiomFailure { report: AxiomReport },
    #[error("not a Dirac operator in standard position: anticommutator block {k} deviates from tensor form X⊗1 by {residual:.3e} (tol {tol:.3e})")]
    NotTensorForm { k: usize, residual: f64, tol: f64 },
    #[error("reconstructed tuple reassembles to D only within {defect:.3e} (tol {tol:.3e})")]
    RoundTripDefect { defect: f64, tol: f64 },
}

/// A commuting `d`-tuple of `n×n` matrices with its validation tolerance.
///
/// Construction checks `‖T_iT_j − T_jT_i‖_max ≤ comm_tol·(1 + max_k ‖T_k‖_max)²`
/// for all pairs.
#[derive(Clone, Debug)]
pub struct CommutingTuple {
    d: usize,
    n: usize,
    matrices: Vec<CMatrix>,
    comm_tol: f64,
}

impl CommutingTuple {
    pub fn new(matrices: Vec<CMatrix>) -> Result<Self, DiracError> {
        Self::with_tolerance(matrices, DEFAULT_COMM_TOL)
    }

    pub fn with_tolerance(matrices: Vec<CMatrix>, comm_tol: f64) -> Result<Self, DiracError> {
        if matrices.is_empty() {
            return Err(DiracError::EmptyTuple);
        }
        let d = matrices.len();
        if d > crate::exterior::MAX_DIMENSION {
            return Err(ExteriorError::DimensionOutOfRange(d).into());
        }
        let n = matrices[0].nrows();
        for (index, m) in matrices.iter().enumerate() {
            if m.nrows() != n || m.ncols() != n {
                return Err(DiracError::ShapeMismatch { index, rows: m.nrows(), cols: m.ncols() });
            }
            if !mat::all_finite(m) {
                return Err(DiracError::NonFinite(index));
            }
        }
        let tuple = Self { d, n, matrices, comm_tol };
        let bound = comm_tol * tuple.commutator_scale();
        for i in 0..d {
            for j in (i + 1)..d {
                let defect = max_abs(&(&tuple.matrices[i] * &tuple.matrices[j]
                    - &tuple.matrices[j] * &tuple.matrices[i]));
                if defect > bound {
                    return Err(DiracError::NotCommuting { i: i + 1, j: j + 1, defect, bound });
                }
            }
        }
        Ok(tuple)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn comm_tol(&self) -> f64 {
        self.comm_tol
    }

    pub fn matrices(&self) -> &[CMatrix] {
        &self.matrices
    }

    /// `T_k`, 1-based.
    pub fn matrix(&self, k: usize) -> &CMatrix {
        &self.matrices[k - 1]
    }

    /// `max_k ‖T_k‖_max`.
    pub fn max_entry_norm(&self) -> f64 {
        self.matrices.iter().map(max_abs).fold(0.0, f64::max)
    }

    /// Scale `(1 + max_k ‖T_k‖_max)²` that commutator defects are measured
    /// against.
    pub fn commutator_scale(&self) -> f64 {
        let m = self.max_entry_norm();
        (1.0 + m) * (1.0 + m)
    }

    /// Worst pairwise commutator in the max-entry norm.
    pub fn commutator_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.d {
            for j in (i + 1)..self.d {
                worst = worst.max(max_abs(
                    &(&self.matrices[i] * &self.matrices[j] - &self.matrices[j] * &self.matrices[i]),
                ));
            }
        }
        worst
    }

    /// Translated tuple `(T_1 − λ_1·1, …, T_d − λ_d·1)`.
    pub fn translated(&self, lambda: &[C64]) -> Result<CommutingTuple, DiracError> {
        if lambda.len() != self.d {
            return Err(DiracError::LambdaLength { got: lambda.len(), expected: self.d });
        }
        let id = mat::identity(self.n);
        let matrices: Vec<CMatrix> =
            self.matrices.iter().zip(lambda).map(|(t, l)| t - &id * *l).collect();
        CommutingTuple::with_tolerance(matrices, self.comm_tol)
    }

    /// Koszul coboundary `B = Σ_k T_k ⊗ c_k` on `H ⊗ ΛC^d`. Squares to
    /// zero (within rounding) and raises form degree by one.
    pub fn coboundary(&self) -> CMatrix {
        let frame = CliffordFrame::build(self.d).expect("d validated at construction");
        self.boundary_with(&frame, false)
    }

    /// Homological boundary `B̃ = Σ_k T_k ⊗ c_k^*`; lowers form degree.
    pub fn homology_boundary(&self) -> CMatrix {
        let frame = CliffordFrame::build(self.d).expect("d validated at construction");
        self.boundary_with(&frame, true)
    }

    fn boundary_with(&self, frame: &CliffordFrame, adjoint_side: bool) -> CMatrix {
        let dim = self.n * frame.dim();
        let mut b = mat::zeros(dim, dim);
        for k in 1..=self.d {
            let ck = if adjoint_side {
                frame.creation(k).expect("mode in range").adjoint()
            } else {
                frame.creation(k).expect("mode in range").clone()
            };
            b += kron(&self.matrices[k - 1], &ck);
        }
        b
    }

    /// Assembles the Dirac pair `D = B + B^*` with its ambient frame and
    /// gauge spectral projections.
    pub fn assemble_dirac(&self) -> DiracPair {
        let frame = CliffordFrame::build(self.d).expect("d validated at construction");
        let b = self.boundary_with(&frame, false);
        let dirac = &b + b.adjoint();
        DiracPair::from_frame(self.d, self.n, dirac, frame)
    }
}

/// Residuals of the Dirac axioms, in the max-entry norm.
#[derive(Clone, Debug)]
pub struct AxiomReport {
    /// `‖D − D^*‖`.
    pub self_adjointness: f64,
    /// `‖Γ(−1)DΓ(−1)^* + D‖`.
    pub d1: f64,
    /// `max_λ ‖Γ(λ)D²Γ(λ)^* − D²‖` over the fixed probe set.
    pub d2: f64,
    /// Worst commutator of `R(e_k)D + DR(e_k)` against the generators
    /// `1⊗c_j`, `1⊗c_j^*` of the Clifford algebra.
    pub d3: f64,
    /// Threshold the residuals are compared against.
    pub tol: f64,
}

impl AxiomReport {
    pub fn passes(&self) -> bool {
        self.self_adjointness < self.tol && self.d1 < self.tol && self.d2 < self.tol && self.d3 < self.tol
    }

    pub fn worst(&self) -> f64 {
        self.self_adjointness.max(self.d1).max(self.d2).max(self.d3)
    }
}

impl std::fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "sa = {:.3e}, D1 = {:.3e}, D2 = {:.3e}, D3 = {:.3e} (tol {:.3e})",
            self.self_adjointness, self.d1, self.d2, self.d3, self.tol
        )
    }
}

/// Result of reconstructing a tuple from an abstract Dirac pair.
#[derive(Clone, Debug)]
pub struct Reconstruction {
    pub tuple: CommutingTuple,
    /// Worst deviation of `c_k^* D + D c_k^*` from exact tensor form `X⊗1`.
    pub off_pattern: f64,
    /// `‖D − assemble(recovered).D‖`.
    pub assembly_defect: f64,
}

/// A self-adjoint operator on `H ⊗ ΛC^d` in standard tensor position,
/// together with the ambient Clifford frame (acting as `1 ⊗ c_k`) and the
/// spectral projections `E_0..E_d` of the gauge group.
#[derive(Clone, Debug)]
pub struct DiracPair {
    d: usize,
    n: usize,
    dirac: CMatrix,
    frame: CliffordFrame,
    gauge_projections: Vec<CMatrix>,
    sa_tol: f64,
    axiom_tol: f64,
}

impl DiracPair {
    fn from_frame(d: usize, n: usize, dirac: CMatrix, frame: CliffordFrame) -> Self {
        let scale = 1.0 + max_abs(&dirac);
        let gauge_projections =
            (0..=d).map(|m| kron(&mat::identity(n), &frame.degree_projection(m))).collect();
        Self {
            d,
            n,
            dirac,
            frame,
            gauge_projections,
            sa_tol: DEFAULT_AXIOM_TOL_REL * scale,
            axiom_tol: DEFAULT_AXIOM_TOL_REL * scale,
        }
    }

    /// Builds a pair from a raw self-adjoint matrix of size `n·2^d`,
    /// assuming the standard tensor position. This is the ingestion path
    /// for externally supplied Dirac operators.
    pub fn from_matrix(d: usize, n: usize, dirac: CMatrix, sa_tol: Option<f64>) -> Result<Self, DiracError> {
        let frame = CliffordFrame::build(d)?;
        let expected = n * frame.dim();
        if dirac.nrows() != expected || dirac.ncols() != expected {
            return Err(DiracError::DiracShape {
                rows: dirac.nrows(),
                cols: dirac.ncols(),
                expected,
                d,
                n,
            });
        }
        let scale = 1.0 + max_abs(&dirac);
        let sa_tol = sa_tol.unwrap_or(DEFAULT_AXIOM_TOL_REL * scale);
        let defect = max_abs(&(&dirac - dirac.adjoint()));
        if defect > sa_tol {
            return Err(DiracError::NotSelfAdjoint { defect, tol: sa_tol });
        }
        let mut pair = Self::from_frame(d, n, dirac, frame);
        pair.sa_tol = sa_tol;
        Ok(pair)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dirac(&self) -> &CMatrix {
        &self.dirac
    }

    pub fn frame(&self) -> &CliffordFrame {
        &self.frame
    }

    /// Gauge spectral projection `E_m = 1 ⊗ (projection of N at m)`.
    pub fn gauge_projection(&self, m: usize) -> &CMatrix {
        &self.gauge_projections[m]
    }

    pub fn gauge_projections(&self) -> &[CMatrix] {
        &self.gauge_projections
    }

    pub fn sa_tol(&self) -> f64 {
        self.sa_tol
    }

    pub fn axiom_tol(&self) -> f64 {
        self.axiom_tol
    }

    pub fn with_axiom_tol(mut self, tol: f64) -> Self {
        self.axiom_tol = tol;
        self
    }

    /// `1 ⊗ M` on `H ⊗ ΛC^d` for a frame-sized matrix `M`.
    fn lift(&self, m: &CMatrix) -> CMatrix {
        kron(&mat::identity(self.n), m)
    }

    /// `D − 1⊗R(λ)`: the Dirac operator of the translated tuple
    /// `(T_k − λ_k·1)`, entry for entry.
    pub fn translated(&self, lambda: &[C64]) -> Result<CMatrix, DiracError> {
        if lambda.len() != self.d {
            return Err(DiracError::LambdaLength { got: lambda.len(), expected: self.d });
        }
        let r = self.frame.clifford_r(lambda)?;
        Ok(&self.dirac - self.lift(&r))
    }

    /// Residuals of self-adjointness and the axioms (D1)–(D3).
    ///
    /// (D2) is probed on the fixed set `{i, e^{iπ/3}, e^{i·1}}`: the map
    /// `λ ↦ Γ(λ)D²Γ(λ)^*` has a finite Fourier expansion in `λ`, so these
    /// three values (one of infinite order) detect every non-invariant
    /// component. (D3) is tested against the generating set
    /// `{1⊗c_j, 1⊗c_j^*}` of the Clifford algebra.
    pub fn axiom_check(&self) -> AxiomReport {
        let d_mat = &self.dirac;
        let self_adjointness = max_abs(&(d_mat - d_mat.adjoint()));

        let parity = self.lift(self.frame.parity());
        let d1 = max_abs(&(&parity * d_mat * parity.adjoint() + d_mat));

        let d_sq = d_mat * d_mat;
        let probes = [
            C64::i(),
            C64::new(0.5, 0.5 * 3.0f64.sqrt()), // e^{iπ/3}
            C64::new(1.0f64.cos(), 1.0f64.sin()), // e^{i·1}
        ];
        let mut d2 = 0.0f64;
        for lambda in probes {
            let g = self.lift(&self.frame.gauge_unitary(lambda).expect("unit modulus"));
            d2 = d2.max(max_abs(&(&g * &d_sq * g.adjoint() - &d_sq)));
        }

        let mut d3 = 0.0f64;
        for k in 1..=self.d {
            let mut ek = vec![c(0.0, 0.0); self.d];
            ek[k - 1] = c(1.0, 0.0);
            let rk = self.lift(&self.frame.clifford_r(&ek).expect("length d"));
            let anti = &rk * d_mat + d_mat * &rk;
            for j in 1..=self.d {
                let cj = self.lift(self.frame.creation(j).expect("mode in range"));
                d3 = d3.max(max_abs(&(&anti * &cj - &cj * &anti)));
                let cj_star = cj.adjoint();
                d3 = d3.max(max_abs(&(&anti * &cj_star - &cj_star * &anti)));
            }
        }

        AxiomReport { self_adjointness, d1, d2, d3, tol: self.axiom_tol }
    }

    /// Recovers the commuting tuple of a pair in standard position via
    /// `c_k^* D + D c_k^* = T_k ⊗ 1`, averaging the `2^d` diagonal blocks
    /// and reporting how far the anticommutators deviate from tensor form.
    pub fn reconstruct_tuple(&self) -> Result<Reconstruction, DiracError> {
        let report = self.axiom_check();
        if !report.passes() {
            return Err(DiracError::AxiomFailure { report });
        }
        let dim_l = self.frame.dim();
        let mut matrices = Vec::with_capacity(self.d);
        let mut off_pattern = 0.0f64;
        for k in 1..=self.d {
            let ck_star = self.lift(&self.frame.annihilation(k)?);
            let a = &ck_star * &self.dirac + &self.dirac * &ck_star;
            // average the Λ-diagonal of each n×n block
            let x = CMatrix::from_fn(self.n, self.n, |i, j| {
                let mut acc = c(0.0, 0.0);
                for s in 0..dim_l {
                    acc += a[(i * dim_l + s, j * dim_l + s)];
                }
                acc / c(dim_l as f64, 0.0)
            });
            let residual = max_abs(&(&a - kron(&x, &mat::identity(dim_l))));
            if residual > self.axiom_tol {
                return Err(DiracError::NotTensorForm { k, residual, tol: self.axiom_tol });
            }
            off_pattern = off_pattern.max(residual);
            matrices.push(x);
        }
        let tuple = CommutingTuple::new(matrices)?;
        let assembly_defect = max_abs_diff(tuple.assemble_dirac().dirac(), &self.dirac);
        let tol = 1e-10 * (1.0 + max_abs(&self.dirac));
        if assembly_defect > tol {
            return Err(DiracError::RoundTripDefect { defect: assembly_defect, tol });
        }
        Ok(Reconstruction { tuple, off_pattern, assembly_defect })
    }

    /// Degree-raising part `B = Σ_n E_{n+1} D E_n` of the pair. For
    /// assembled pairs this equals the coboundary of the tuple exactly.
    pub fn extract_coboundary(&self) -> Result<CMatrix, DiracError> {
        let report = self.axiom_check();
        if !report.passes() {
            return Err(DiracError::AxiomFailure { report });
        }
        let dim = self.dirac.nrows();
        let mut b = mat::zeros(dim, dim);
        for m in 0..self.d {
            b += self.gauge_projection(m + 1) * &self.dirac * self.gauge_projection(m);
        }
        Ok(b)
    }

    /// Transports the pair to its homological form: `D̃ = W D W^*` with
    /// `W = 1 ⊗ U`, `U` the Hodge intertwiner. The returned pair carries
    /// the dual frame (creations `c_k^*`, number operator `d·1 − N`), so
    /// its gauge projections satisfy `Ẽ_n = E_{d−n}` exactly.
    pub fn duality_transport(&self) -> DualityTransport {
        let u = self.frame.hodge_intertwiner();
        let w = self.lift(&u);
        let dirac = &w * &self.dirac * w.adjoint();
        let frame = dual_frame(&self.frame);
        let gauge_projections: Vec<CMatrix> =
            (0..=self.d).map(|m| self.lift(&frame.degree_projection(m))).collect();
        let pair = DiracPair {
            d: self.d,
            n: self.n,
            dirac,
            frame,
            gauge_projections,
            sa_tol: self.sa_tol,
            axiom_tol: self.axiom_tol,
        };
        DualityTransport { pair, intertwiner: w }
    }
}

/// Output of [`DiracPair::duality_transport`].
#[derive(Clone, Debug)]
pub struct DualityTransport {
    /// The homological (tilde) pair.
    pub pair: DiracPair,
    /// `W = 1 ⊗ U` implementing the isomorphism.
    pub intertwiner: CMatrix,
}
