//! Graded modules over `C[z_1,…,z_d]` and the curvature-as-index identity.
//!
//! A graded tuple is stored degreewise: finite-dimensional components
//! `H_0,…,H_N` and degree-raising blocks `T_k^{(j)}: H_j → H_{j+1}`. The
//! Koszul coboundary preserves total degree, so its cohomology splits into
//! small per-(form-degree, polynomial-degree) problems; summing the even
//! and odd Betti totals over trusted degrees gives
//! `index = dim ker D_+ − dim ker D_+^*`, and the curvature invariant of a
//! graded pure finite-rank d-contraction is `K = (−1)^d · index`.
//!
//! The module also builds the two families everything is exercised on:
//! free modules (monomial multiplication blocks, optionally with the
//! symmetric Fock weights that make them the d-shift) and quotients of
//! `(r+1)·H²` by the graph `{(f, φ_1 f, …, φ_r f)}` of a homogeneous
//! multiplier tuple.

use crate::exterior::CliffordFrame;
use crate::mat::{self, c, max_abs, CMatrix, C64};
use crate::spectral::{nullity_info, numerical_kernel, rank, DEFAULT_RANK_TOL};
use rayon::prelude::*;
use std::collections::HashMap;
use thiserror::Error;

/// Consecutive all-zero trusted degrees required before a Betti table is
/// considered stabilized.
pub const STABILIZATION_WINDOW: usize = 3;
/// Per-degree component size guard.
pub const MAX_COMPONENT_DIM: usize = 100_000;

#[derive(Debug, Error)]
pub enum GradedError {
    #[error("need at least two graded components (got {0})")]
    TooFewComponents(usize),
    #[error("expected {expected} block families (one per variable), got {got}")]
    BlockFamilyCount { got: usize, expected: usize },
    #[error("block T_{k}^({j}) is {rows}×{cols}, expected {erows}×{ecols}")]
    BlockShape { k: usize, j: usize, rows: usize, cols: usize, erows: usize, ecols: usize },
    #[error("non-finite entry in block T_{k}^({j})")]
    NonFinite { k: usize, j: usize },
    #[error("blocks T_{k}, T_{l} fail to commute at degree {j}: defect {defect:.3e} > {bound:.3e}")]
    NotCommutingBlocks { k: usize, l: usize, j: usize, defect: f64, bound: f64 },
    #[error("gram data has {got} matrices, expected {expected}")]
    GramCount { got: usize, expected: usize },
    #[error("gram matrix at degree {0} is not Hermitian positive-definite")]
    GramNotPositive(usize),
    #[error("component dimension {dim} at degree {degree} exceeds the desk-scale guard {MAX_COMPONENT_DIM}")]
    DimsOverflow { degree: usize, dim: usize },
    #[error("rank must be ≥ 1")]
    InvalidRank,
    #[error("polynomial term {term} has {got} exponents, expected {expected}")]
    ExponentLength { term: usize, got: usize, expected: usize },
    #[error("multiplier {0} is not a nonzero homogeneous polynomial; the graded engine only covers the graded case")]
    NonHomogeneous(usize),
    #[error("multiplier {0} has degree 0; multiplier degrees must be ≥ 1")]
    MultiplierDegreeZero(usize),
    #[error("the multipliers {{1, φ_1, …, φ_r}} are linearly dependent; the defect rank would drop below r+1")]
    DependentMultipliers,
    #[error("max degree N = {got} too small, need N ≥ {need} (max multiplier degree + 3)")]
    MaxDegreeTooSmall { got: usize, need: usize },
    #[error("degree {degree} touches the truncation boundary; only degrees ≤ {max_allowed} are usable")]
    TruncationBoundary { degree: usize, max_allowed: usize },
    #[error("complement at degree {degree} has dimension {got}, expected {expected}; rank tolerance too loose for this input")]
    ComplementDimension { degree: usize, got: usize, expected: usize },
    #[error("expected {expected} inclusion matrices, got {got}")]
    InclusionCount { got: usize, expected: usize },
    #[error("inclusion at degree {j} is {rows}×{cols}, expected {erows} rows")]
    InclusionShape { j: usize, rows: usize, cols: usize, erows: usize },
    #[error("inclusion at degree {0} is rank deficient")]
    InclusionRankDeficient(usize),
    #[error("inclusion image is not a submodule: T_{k} at degree {j} leaves the image by {residual:.3e}")]
    NotASubmodule { k: usize, j: usize, residual: f64 },
    #[error("index cross-check failed: expected χ = {expected}, index computation gave {got} (stabilized: {stabilized})")]
    CrossCheckFailed { expected: i64, got: i64, stabilized: bool },
}

// ---------------------------------------------------------------------------
// monomial bookkeeping
// ---------------------------------------------------------------------------

/// Number of degree-`degree` monomials in `d` variables.
pub fn monomial_count(d: usize, degree: usize) -> usize {
    // C(degree + d − 1, d − 1)
    let mut acc: u128 = 1;
    for i in 0..(d - 1) {
        acc = acc * (degree + d - 1 - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

/// Degree-`degree` monomials in `d` variables as exponent vectors, ordered
/// with the leading exponent descending (so e.g. `z₁², z₁z₂, z₂²`).
pub fn monomials(d: usize, degree: usize) -> Vec<Vec<usize>> {
    fn rec(
        d: usize,
        pos: usize,
        remaining: usize,
        current: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if pos == d - 1 {
            current[pos] = remaining;
            out.push(current.clone());
            return;
        }
        for e in (0..=remaining).rev() {
            current[pos] = e;
            rec(d, pos + 1, remaining - e, current, out);
        }
    }
    let mut out = Vec::with_capacity(monomial_count(d, degree));
    let mut current = vec![0usize; d];
    rec(d, 0, degree, &mut current, &mut out);
    out
}

fn monomial_positions(d: usize, degree: usize) -> HashMap<Vec<usize>, usize> {
    monomials(d, degree).into_iter().enumerate().map(|(i, m)| (m, i)).collect()
}

/// Multiplication by `z_k` from degree-`degree` monomials to
/// degree-`degree+1` monomials, as a 0/1 matrix in the canonical bases.
fn multiplication_map(d: usize, degree: usize, k: usize) -> CMatrix {
    let source = monomials(d, degree);
    let target = monomial_positions(d, degree + 1);
    let mut m = mat::zeros(monomial_count(d, degree + 1), source.len());
    for (col, alpha) in source.iter().enumerate() {
        let mut beta = alpha.clone();
        beta[k - 1] += 1;
        m[(target[&beta], col)] = c(1.0, 0.0);
    }
    m
}

/// Diagonal Gram matrix of the symmetric Fock weights on degree-`j`
/// monomials: `⟨z^α, z^α⟩ = α!/|α|!`.
pub fn fock_gram(d: usize, j: usize) -> CMatrix {
    let monos = monomials(d, j);
    let fact = |m: usize| -> f64 { (1..=m).map(|v| v as f64).product::<f64>().max(1.0) };
    let total = fact(j);
    CMatrix::from_fn(monos.len(), monos.len(), |r, col| {
        if r == col {
            let alpha_fact: f64 = monos[r].iter().map(|&e| fact(e)).product();
            c(alpha_fact / total, 0.0)
        } else {
            c(0.0, 0.0)
        }
    })
}

// ---------------------------------------------------------------------------
// polynomials
// ---------------------------------------------------------------------------

/// Sparse polynomial in `d` variables: a list of (coefficient, exponent
/// vector) terms. Zero-coefficient terms are dropped and duplicate
/// exponents merged at construction.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    d: usize,
    terms: Vec<(C64, Vec<usize>)>,
}

impl Polynomial {
    pub fn new(d: usize, terms: Vec<(C64, Vec<usize>)>) -> Result<Self, GradedError> {
        let mut merged: Vec<(C64, Vec<usize>)> = Vec::new();
        for (i, (coeff, exps)) in terms.into_iter().enumerate() {
            if exps.len() != d {
                return Err(GradedError::ExponentLength { term: i, got: exps.len(), expected: d });
            }
            if let Some(slot) = merged.iter_mut().find(|(_, e)| *e == exps) {
                slot.0 += coeff;
            } else {
                merged.push((coeff, exps));
            }
        }
        merged.retain(|(coeff, _)| coeff.norm() > 0.0);
        Ok(Self { d, terms: merged })
    }

    /// The single monomial `coeff · z^exps`.
    pub fn monomial(d: usize, coeff: C64, exps: Vec<usize>) -> Result<Self, GradedError> {
        Self::new(d, vec![(coeff, exps)])
    }

    /// The coordinate `z_k` (1-based).
    pub fn variable(d: usize, k: usize) -> Result<Self, GradedError> {
        let mut exps = vec![0usize; d];
        exps[k - 1] = 1;
        Self::monomial(d, c(1.0, 0.0), exps)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn terms(&self) -> &[(C64, Vec<usize>)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The common degree of all terms, when the polynomial is nonzero and
    /// homogeneous.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let first = self.terms.first()?;
        let deg: usize = first.1.iter().sum();
        for (_, exps) in &self.terms {
            if exps.iter().sum::<usize>() != deg {
                return None;
            }
        }
        Some(deg)
    }

    /// Coefficient vector in the canonical degree-`n` monomial basis.
    fn coefficient_vector(&self, n: usize) -> Option<CMatrix> {
        let positions = monomial_positions(self.d, n);
        let mut v = mat::zeros(monomial_count(self.d, n), 1);
        for (coeff, exps) in &self.terms {
            let pos = positions.get(exps)?;
            v[(*pos, 0)] += *coeff;
        }
        Some(v)
    }
}

// ---------------------------------------------------------------------------
// the graded spec
// ---------------------------------------------------------------------------

/// A degree-indexed family of finite-dimensional components with
/// degree-raising blocks, modeling a graded module over `C[z_1,…,z_d]`.
///
/// `blocks[k-1][j]` is `T_k^{(j)}: H_j → H_{j+1}`. Blockwise commutativity
/// `T_k^{(j+1)} T_l^{(j)} = T_l^{(j+1)} T_k^{(j)}` is validated at
/// construction. Optional per-degree Gram matrices fix the inner products
/// (identity when absent); optional degree shifts record the twisted
/// grading a builder used.
#[derive(Clone, Debug)]
pub struct GradedTupleSpec {
    d: usize,
    component_dims: Vec<usize>,
    blocks: Vec<Vec<CMatrix>>,
    gram: Option<Vec<CMatrix>>,
    degree_shifts: Vec<usize>,
    comm_tol: f64,
}

impl GradedTupleSpec {
    pub fn new(
        d: usize,
        component_dims: Vec<usize>,
        blocks: Vec<Vec<CMatrix>>,
    ) -> Result<Self, GradedError> {
        Self::with_tolerance(d, component_dims, blocks, crate::dirac::DEFAULT_COMM_TOL)
    }

    pub fn with_tolerance(
        d: usize,
        component_dims: Vec<usize>,
        blocks: Vec<Vec<CMatrix>>,
        comm_tol: f64,
    ) -> Result<Self, GradedError> {
        if component_dims.len() < 2 {
            return Err(GradedError::TooFewComponents(component_dims.len()));
        }
        for (degree, &dim) in component_dims.iter().enumerate() {
            if dim > MAX_COMPONENT_DIM {
                return Err(GradedError::DimsOverflow { degree, dim });
            }
        }
        if blocks.len() != d {
            return Err(GradedError::BlockFamilyCount { got: blocks.len(), expected: d });
        }
        let n_deg = component_dims.len() - 1;
        for (kk, family) in blocks.iter().enumerate() {
            if family.len() != n_deg {
                return Err(GradedError::BlockFamilyCount { got: family.len(), expected: n_deg });
            }
            for (j, b) in family.iter().enumerate() {
                if b.nrows() != component_dims[j + 1] || b.ncols() != component_dims[j] {
                    return Err(GradedError::BlockShape {
                        k: kk + 1,
                        j,
                        rows: b.nrows(),
                        cols: b.ncols(),
                        erows: component_dims[j + 1],
                        ecols: component_dims[j],
                    });
                }
                if !mat::all_finite(b) {
                    return Err(GradedError::NonFinite { k: kk + 1, j });
                }
            }
        }
        let spec =
            Self { d, component_dims, blocks, gram: None, degree_shifts: Vec::new(), comm_tol };
        let norm = spec.max_block_norm();
        let bound = comm_tol * (1.0 + norm) * (1.0 + norm);
        for k in 0..d {
            for l in (k + 1)..d {
                for j in 0..n_deg.saturating_sub(1) {
                    let lhs = &spec.blocks[k][j + 1] * &spec.blocks[l][j];
                    let rhs = &spec.blocks[l][j + 1] * &spec.blocks[k][j];
                    let defect = max_abs(&(lhs - rhs));
                    if defect > bound {
                        return Err(GradedError::NotCommutingBlocks {
                            k: k + 1,
                            l: l + 1,
                            j,
                            defect,
                            bound,
                        });
                    }
                }
            }
        }
        Ok(spec)
    }

    /// Attaches per-degree Gram matrices (Hermitian positive-definite).
    pub fn with_gram(mut self, gram: Vec<CMatrix>) -> Result<Self, GradedError> {
        if gram.len() != self.component_dims.len() {
            return Err(GradedError::GramCount {
                got: gram.len(),
                expected: self.component_dims.len(),
            });
        }
        for (j, g) in gram.iter().enumerate() {
            let m = self.component_dims[j];
            if g.nrows() != m || g.ncols() != m {
                return Err(GradedError::GramNotPositive(j));
            }
            if m > 0 {
                if max_abs(&(g - g.adjoint())) > 1e-12 * (1.0 + max_abs(g)) {
                    return Err(GradedError::GramNotPositive(j));
                }
                if nalgebra::Cholesky::new(g.clone()).is_none() {
                    return Err(GradedError::GramNotPositive(j));
                }
            }
        }
        self.gram = Some(gram);
        Ok(self)
    }

    fn with_shifts(mut self, shifts: Vec<usize>) -> Self {
        self.degree_shifts = shifts;
        self
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Largest stored degree `N`.
    pub fn max_degree(&self) -> usize {
        self.component_dims.len() - 1
    }

    pub fn component_dims(&self) -> &[usize] {
        &self.component_dims
    }

    /// `T_k^{(j)}`, `k` 1-based.
    pub fn block(&self, k: usize, j: usize) -> &CMatrix {
        &self.blocks[k - 1][j]
    }

    pub fn gram(&self) -> Option<&[CMatrix]> {
        self.gram.as_deref()
    }

    pub fn gram_at(&self, j: usize) -> CMatrix {
        match &self.gram {
            Some(g) => g[j].clone(),
            None => mat::identity(self.component_dims[j]),
        }
    }

    /// Degree shifts of the direct summands a builder used (empty when the
    /// grading is untwisted).
    pub fn degree_shifts(&self) -> &[usize] {
        &self.degree_shifts
    }

    pub fn comm_tol(&self) -> f64 {
        self.comm_tol
    }

    pub fn max_block_norm(&self) -> f64 {
        self.blocks.iter().flatten().map(max_abs).fold(0.0, f64::max)
    }
}

// ---------------------------------------------------------------------------
// Betti tables and the stabilized index
// ---------------------------------------------------------------------------

/// Per-(form-degree, polynomial-degree) cohomology dimensions.
///
/// Entries at the top stored degree are reported but excluded from totals:
/// the coboundary raises total degree by one, so only they can be
/// corrupted by truncation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BettiTable {
    d: usize,
    /// `values[k][j]`, `k ≤ d`, `j ≤ N`.
    values: Vec<Vec<usize>>,
    trusted_max_degree: usize,
    stabilized: bool,
}

impl BettiTable {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn beta(&self, k: usize, j: usize) -> usize {
        self.values[k][j]
    }

    pub fn max_degree(&self) -> usize {
        self.values[0].len() - 1
    }

    pub fn trusted_max_degree(&self) -> usize {
        self.trusted_max_degree
    }

    pub fn stabilized(&self) -> bool {
        self.stabilized
    }

    /// Nonzero trusted entries `(k, j, β_{k,j})` ordered by `(k, j)`.
    pub fn nonzero_entries(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for k in 0..=self.d {
            for j in 0..=self.trusted_max_degree {
                let v = self.values[k][j];
                if v > 0 {
                    out.push((k, j, v));
                }
            }
        }
        out
    }

    /// Trusted total for one form degree.
    pub fn form_degree_total(&self, k: usize) -> usize {
        self.values[k][..=self.trusted_max_degree].iter().sum()
    }

    /// `Σ_k (−1)^k Σ_j β_{k,j}` over trusted degrees.
    pub fn alternating_total(&self) -> i64 {
        (0..=self.d)
            .map(|k| {
                let total = self.form_degree_total(k) as i64;
                if k % 2 == 0 {
                    total
                } else {
                    -total
                }
            })
            .sum()
    }

    /// JSON rendering:
    /// `{"d":…, "trusted_max_degree":…, "beta":[[k,j,value],…], "stabilized":…}`
    /// with nonzero trusted entries listed in `(k, j)` order.
    pub fn to_json(&self) -> serde_json::Value {
        let beta: Vec<serde_json::Value> = self
            .nonzero_entries()
            .into_iter()
            .map(|(k, j, v)| serde_json::json!([k, j, v]))
            .collect();
        serde_json::json!({
            "d": self.d,
            "trusted_max_degree": self.trusted_max_degree,
            "beta": beta,
            "stabilized": self.stabilized,
        })
    }
}

/// Stabilized-index report: the even/odd alternating Betti total over
/// trusted degrees, flagged untrusted when the trailing window is not
/// identically zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexReport {
    pub index: i64,
    pub stabilized: bool,
    /// Degrees inspected by the stabilization window.
    pub window_degrees: Vec<usize>,
    /// Nonzero `(k, j, β)` entries found inside the window.
    pub window_nonzero: Vec<(usize, usize, usize)>,
}

fn creation_degree_blocks(frame: &CliffordFrame) -> Vec<Vec<CMatrix>> {
    // blocks[m][k] = c_{m+1} restricted Λ^k → Λ^{k+1}
    let d = frame.d();
    let degree_idx: Vec<Vec<usize>> = (0..=d).map(|k| mat::form_degree_indices(1, d, k)).collect();
    (0..d)
        .map(|m| {
            (0..d)
                .map(|k| {
                    mat::submatrix(
                        frame.creation(m + 1).expect("mode in range"),
                        &degree_idx[k + 1],
                        &degree_idx[k],
                    )
                })
                .collect()
        })
        .collect()
}

/// The `(H_j ⊗ Λ^k) → (H_{j+1} ⊗ Λ^{k+1})` block of the Koszul coboundary.
fn koszul_block(spec: &GradedTupleSpec, cblocks: &[Vec<CMatrix>], k: usize, j: usize) -> CMatrix {
    let d = spec.d();
    let rows = spec.component_dims()[j + 1] * cblocks[0][k].nrows();
    let cols = spec.component_dims()[j] * cblocks[0][k].ncols();
    let mut b = mat::zeros(rows, cols);
    for m in 0..d {
        b += mat::kron(spec.block(m + 1, j), &cblocks[m][k]);
    }
    b
}

/// Per-degree Koszul cohomology of a graded spec:
/// `β_{k,j} = dim ker B_{k,j} − rank B_{k−1,j−1}`.
pub fn graded_koszul_betti(spec: &GradedTupleSpec) -> Result<BettiTable, GradedError> {
    graded_koszul_betti_with(spec, DEFAULT_RANK_TOL)
}

pub fn graded_koszul_betti_with(
    spec: &GradedTupleSpec,
    rank_tol: f64,
) -> Result<BettiTable, GradedError> {
    let d = spec.d();
    let n_max = spec.max_degree();
    let frame = CliffordFrame::build(d).expect("graded d within frame cap");
    let cblocks = creation_degree_blocks(&frame);
    let binom: Vec<usize> = (0..=d).map(|k| mat::form_degree_indices(1, d, k).len()).collect();

    // nullities of every outgoing block; blocks out of the top stored
    // degree or the top form degree are zero maps
    let jobs: Vec<(usize, usize)> = (0..=d).flat_map(|k| (0..=n_max).map(move |j| (k, j))).collect();
    let nullities: Vec<usize> = jobs
        .par_iter()
        .map(|&(k, j)| {
            let cols = spec.component_dims()[j] * binom[k];
            if k == d || j == n_max {
                cols
            } else {
                let block = koszul_block(spec, &cblocks, k, j);
                nullity_info(&block, rank_tol).0
            }
        })
        .collect();
    let nullity_at = |k: usize, j: usize| nullities[k * (n_max + 1) + j];

    let mut values = vec![vec![0usize; n_max + 1]; d + 1];
    for k in 0..=d {
        for j in 0..=n_max {
            let kernel = nullity_at(k, j);
            let incoming = if k == 0 || j == 0 {
                0
            } else {
                let cols = spec.component_dims()[j - 1] * binom[k - 1];
                cols - nullity_at(k - 1, j - 1)
            };
            values[k][j] = kernel - incoming;
        }
    }

    let trusted_max_degree = n_max - 1;
    let stabilized = is_stabilized(&values, d, trusted_max_degree);
    Ok(BettiTable { d, values, trusted_max_degree, stabilized })
}

fn is_stabilized(values: &[Vec<usize>], d: usize, trusted_max: usize) -> bool {
    if trusted_max + 1 < STABILIZATION_WINDOW {
        return false;
    }
    let window_start = trusted_max + 1 - STABILIZATION_WINDOW;
    (0..=d).all(|k| (window_start..=trusted_max).all(|j| values[k][j] == 0))
}

/// The stabilized index `Σ_{k even} Σ_j β_{k,j} − Σ_{k odd} Σ_j β_{k,j}`
/// over trusted degrees. Equals `dim ker D_+ − dim ker D_+^*` once the
/// table has stabilized; the curvature invariant is `(−1)^d` times it.
pub fn stabilized_index(spec: &GradedTupleSpec) -> Result<IndexReport, GradedError> {
    stabilized_index_with(spec, DEFAULT_RANK_TOL)
}

pub fn stabilized_index_with(
    spec: &GradedTupleSpec,
    rank_tol: f64,
) -> Result<IndexReport, GradedError> {
    let table = graded_koszul_betti_with(spec, rank_tol)?;
    Ok(index_report_from(&table))
}

pub fn index_report_from(table: &BettiTable) -> IndexReport {
    let trusted_max = table.trusted_max_degree();
    let window_degrees: Vec<usize> = if trusted_max + 1 >= STABILIZATION_WINDOW {
        ((trusted_max + 1 - STABILIZATION_WINDOW)..=trusted_max).collect()
    } else {
        (0..=trusted_max).collect()
    };
    let mut window_nonzero = Vec::new();
    for k in 0..=table.d() {
        for &j in &window_degrees {
            let v = table.beta(k, j);
            if v > 0 {
                window_nonzero.push((k, j, v));
            }
        }
    }
    IndexReport {
        index: table.alternating_total(),
        stabilized: table.stabilized(),
        window_degrees,
        window_nonzero,
    }
}

/// Harmonic-space dimensions per (form degree, trusted polynomial degree):
/// kernel of the stacked outgoing block and Gram-adjoint incoming block.
/// Finite-dimensional Hodge theory makes these equal to `β_{k,j}` for any
/// positive-definite Gram choice.
pub fn graded_harmonic_dims(spec: &GradedTupleSpec) -> Result<Vec<Vec<usize>>, GradedError> {
    graded_harmonic_dims_with(spec, DEFAULT_RANK_TOL)
}

pub fn graded_harmonic_dims_with(
    spec: &GradedTupleSpec,
    rank_tol: f64,
) -> Result<Vec<Vec<usize>>, GradedError> {
    let d = spec.d();
    let n_max = spec.max_degree();
    let frame = CliffordFrame::build(d).expect("graded d within frame cap");
    let cblocks = creation_degree_blocks(&frame);
    let binom: Vec<usize> = (0..=d).map(|k| mat::form_degree_indices(1, d, k).len()).collect();

    let gram_inv = |j: usize| -> CMatrix {
        let g = spec.gram_at(j);
        if g.nrows() == 0 {
            return g;
        }
        nalgebra::Cholesky::new(g).expect("validated PD").inverse()
    };

    let mut out = vec![vec![0usize; n_max]; d + 1];
    for k in 0..=d {
        for j in 0..n_max {
            let cols = spec.component_dims()[j] * binom[k];
            let outgoing = if k == d {
                mat::zeros(0, cols)
            } else {
                koszul_block(spec, &cblocks, k, j)
            };
            let incoming_adj = if k == 0 || j == 0 {
                mat::zeros(0, cols)
            } else {
                let b_in = koszul_block(spec, &cblocks, k - 1, j - 1);
                // adjoint w.r.t. G_{j-1}⊗1 and G_j⊗1
                let g_src_inv = mat::kron(&gram_inv(j - 1), &mat::identity(binom[k - 1]));
                let g_dst = mat::kron(&spec.gram_at(j), &mat::identity(binom[k]));
                g_src_inv * b_in.adjoint() * g_dst
            };
            let stacked = mat::vstack(&outgoing, &incoming_adj);
            out[k][j] = nullity_info(&stacked, rank_tol).0;
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// builders: free modules and d-shift multiplier quotients
// ---------------------------------------------------------------------------

/// Inner-product choice for the builders: plain coefficient ℓ² or the
/// symmetric Fock weights of `H²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GramKind {
    Identity,
    Fock,
}

/// Free module of the given rank: monomial components with multiplication
/// blocks, untwisted grading, identity Gram.
pub fn free_module_spec(
    d: usize,
    rank: usize,
    n_max: usize,
) -> Result<GradedTupleSpec, GradedError> {
    if rank == 0 {
        return Err(GradedError::InvalidRank);
    }
    free_module_spec_shifted(d, &vec![0; rank], n_max)
}

/// Free module with the chosen Gram data; `Fock` makes it the truncated
/// d-shift of that multiplicity.
pub fn free_module_spec_with(
    d: usize,
    rank: usize,
    n_max: usize,
    gram: GramKind,
) -> Result<GradedTupleSpec, GradedError> {
    let spec = free_module_spec(d, rank, n_max)?;
    match gram {
        GramKind::Identity => Ok(spec),
        GramKind::Fock => {
            let shifts = spec.degree_shifts().to_vec();
            let grams = summand_grams(d, &shifts, n_max, GramKind::Fock);
            spec.with_gram(grams)
        }
    }
}

/// Free module `⊕_s A(shift_s)` with one summand per entry of `shifts`;
/// summand `s` contributes the monomials of degree `j − offset + shift_s`
/// at stored degree `j`, where `offset = max shift` re-indexes the lowest
/// occupied degree to 0.
pub fn free_module_spec_shifted(
    d: usize,
    shifts: &[usize],
    n_max: usize,
) -> Result<GradedTupleSpec, GradedError> {
    if shifts.is_empty() {
        return Err(GradedError::InvalidRank);
    }
    if d < 1 || n_max < 1 {
        return Err(GradedError::TooFewComponents(n_max + 1));
    }
    let offset = *shifts.iter().max().unwrap();
    let summand_degree =
        |t: usize, s: usize| -> Option<usize> { (t + shifts[s]).checked_sub(offset) };
    let mut component_dims = Vec::with_capacity(n_max + 1);
    for t in 0..=n_max {
        let dim: usize = (0..shifts.len())
            .filter_map(|s| summand_degree(t, s))
            .map(|q| monomial_count(d, q))
            .sum();
        if dim > MAX_COMPONENT_DIM {
            return Err(GradedError::DimsOverflow { degree: t, dim });
        }
        component_dims.push(dim);
    }
    let mut blocks: Vec<Vec<CMatrix>> = Vec::with_capacity(d);
    for k in 1..=d {
        let mut family = Vec::with_capacity(n_max);
        for t in 0..n_max {
            let parts: Vec<CMatrix> = (0..shifts.len())
                .map(|s| match summand_degree(t, s) {
                    Some(q) => multiplication_map(d, q, k),
                    None => {
                        // summand absent at t; it may enter at t+1 with its constants
                        let rows = summand_degree(t + 1, s).map_or(0, |q| monomial_count(d, q));
                        mat::zeros(rows, 0)
                    }
                })
                .collect();
            family.push(block_diag(&parts));
        }
        blocks.push(family);
    }
    Ok(GradedTupleSpec::new(d, component_dims, blocks)?.with_shifts(shifts.to_vec()))
}

fn block_diag(parts: &[CMatrix]) -> CMatrix {
    let rows: usize = parts.iter().map(CMatrix::nrows).sum();
    let cols: usize = parts.iter().map(CMatrix::ncols).sum();
    let mut out = mat::zeros(rows, cols);
    let (mut r0, mut c0) = (0, 0);
    for p in parts {
        if p.nrows() > 0 && p.ncols() > 0 {
            out.view_mut((r0, c0), p.shape()).copy_from(p);
        }
        r0 += p.nrows();
        c0 += p.ncols();
    }
    out
}

fn summand_grams(d: usize, shifts: &[usize], n_max: usize, kind: GramKind) -> Vec<CMatrix> {
    let offset = shifts.iter().copied().max().unwrap_or(0);
    (0..=n_max)
        .map(|t| {
            let parts: Vec<CMatrix> = (0..shifts.len())
                .filter_map(|s| (t + shifts[s]).checked_sub(offset))
                .map(|q| match kind {
                    GramKind::Identity => mat::identity(monomial_count(d, q)),
                    GramKind::Fock => fock_gram(d, q),
                })
                .collect();
            block_diag(&parts)
        })
        .collect()
}

/// Orthonormalizes the columns of `basis` against the inner product `gram`
/// via Cholesky of the small Gram matrix.
fn gram_orthonormalize(basis: &CMatrix, gram: &CMatrix) -> CMatrix {
    if basis.ncols() == 0 {
        return basis.clone();
    }
    let w = basis.adjoint() * gram * basis;
    let chol = nalgebra::Cholesky::new(w).expect("basis has full column rank");
    let y = chol
        .l()
        .solve_lower_triangular(&basis.adjoint())
        .expect("triangular factor is invertible");
    y.adjoint()
}

/// Quotient of `(r+1)·H²` by the graph `M = {(f, φ_1 f, …, φ_r f)}` of a
/// homogeneous multiplier tuple, as a graded spec in Fock-orthonormal
/// bases. Summand `k` carries degree shift `n_k = deg φ_k` so the
/// generator `(1, φ_1, …, φ_r)` is homogeneous; stored degrees are
/// re-indexed so the lowest, `−max n_k`, becomes 0.
pub fn dshift_quotient_spec(
    d: usize,
    r: usize,
    phis: &[Polynomial],
    n_max: usize,
) -> Result<GradedTupleSpec, GradedError> {
    dshift_quotient_spec_with(d, r, phis, n_max, GramKind::Fock)
}

pub fn dshift_quotient_spec_with(
    d: usize,
    r: usize,
    phis: &[Polynomial],
    n_max: usize,
    gram_kind: GramKind,
) -> Result<GradedTupleSpec, GradedError> {
    if r == 0 || phis.len() != r {
        return Err(GradedError::InvalidRank);
    }
    let mut degrees = Vec::with_capacity(r);
    for (i, phi) in phis.iter().enumerate() {
        if phi.d() != d {
            return Err(GradedError::NonHomogeneous(i + 1));
        }
        if phi.is_zero() {
            // the zero polynomial makes {1, φ_1, …} dependent
            return Err(GradedError::DependentMultipliers);
        }
        let Some(deg) = phi.homogeneous_degree() else {
            return Err(GradedError::NonHomogeneous(i + 1));
        };
        if deg == 0 {
            return Err(GradedError::MultiplierDegreeZero(i + 1));
        }
        degrees.push(deg);
    }
    let max_deg = *degrees.iter().max().unwrap();
    if n_max < max_deg + 3 {
        return Err(GradedError::MaxDegreeTooSmall { got: n_max, need: max_deg + 3 });
    }
    // linear independence of {1, φ_1, …, φ_r}: the constant never mixes
    // with degrees ≥ 1, so check each equal-degree group
    for deg in degrees.iter().copied().collect::<std::collections::BTreeSet<_>>() {
        let group: Vec<&Polynomial> =
            phis.iter().filter(|p| p.homogeneous_degree() == Some(deg)).collect();
        let mut coeffs = mat::zeros(monomial_count(d, deg), group.len());
        for (col, p) in group.iter().enumerate() {
            let v = p.coefficient_vector(deg).expect("homogeneous by the check above");
            coeffs.view_mut((0, col), (v.nrows(), 1)).copy_from(&v);
        }
        if rank(&coeffs, DEFAULT_RANK_TOL) < group.len() {
            return Err(GradedError::DependentMultipliers);
        }
    }

    let shifts: Vec<usize> = std::iter::once(0).chain(degrees.iter().copied()).collect();
    let offset = max_deg;
    let summand_degree =
        |t: usize, s: usize| -> Option<usize> { (t + shifts[s]).checked_sub(offset) };
    let grams = summand_grams(d, &shifts, n_max, gram_kind);

    // orthonormal bases of the per-degree complements H_t = E_t ⊖ M_t
    let mut bases: Vec<CMatrix> = Vec::with_capacity(n_max + 1);
    for t in 0..=n_max {
        let dims: Vec<usize> =
            (0..=r).map(|s| summand_degree(t, s).map_or(0, |q| monomial_count(d, q))).collect();
        let e_dim: usize = dims.iter().sum();
        let row_offsets: Vec<usize> = dims
            .iter()
            .scan(0usize, |acc, &v| {
                let cur = *acc;
                *acc += v;
                Some(cur)
            })
            .collect();
        // M_t: one column per degree-q monomial times the generator
        let graph = match t.checked_sub(offset) {
            Some(q) => {
                let source = monomials(d, q);
                let pos_q = monomial_positions(d, q);
                let mut v = mat::zeros(e_dim, source.len());
                for (col, alpha) in source.iter().enumerate() {
                    v[(row_offsets[0] + pos_q[alpha], col)] = c(1.0, 0.0);
                    for (s, phi) in phis.iter().enumerate() {
                        let positions = monomial_positions(d, q + degrees[s]);
                        for (coeff, exps) in phi.terms() {
                            let beta: Vec<usize> =
                                exps.iter().zip(alpha).map(|(e, a)| e + a).collect();
                            v[(row_offsets[s + 1] + positions[&beta], col)] += *coeff;
                        }
                    }
                }
                v
            }
            None => mat::zeros(e_dim, 0),
        };
        let expected = e_dim - graph.ncols();
        // v ⊥_G M_t ⟺ (M_t^* G) v = 0
        let kernel = numerical_kernel(&(graph.adjoint() * &grams[t]), DEFAULT_RANK_TOL);
        if kernel.dimension != expected {
            return Err(GradedError::ComplementDimension {
                degree: t,
                got: kernel.dimension,
                expected,
            });
        }
        bases.push(gram_orthonormalize(&kernel.basis, &grams[t]));
    }

    // compressed multiplications T_k = Q_{t+1}^* G_{t+1} S_k Q_t
    let mut blocks: Vec<Vec<CMatrix>> = Vec::with_capacity(d);
    for k in 1..=d {
        let mut family = Vec::with_capacity(n_max);
        for t in 0..n_max {
            let parts: Vec<CMatrix> = (0..=r)
                .map(|s| match summand_degree(t, s) {
                    Some(q) => multiplication_map(d, q, k),
                    None => {
                        let rows = summand_degree(t + 1, s).map_or(0, |q| monomial_count(d, q));
                        mat::zeros(rows, 0)
                    }
                })
                .collect();
            let s_k = block_diag(&parts);
            family.push(bases[t + 1].adjoint() * &grams[t + 1] * s_k * &bases[t]);
        }
        blocks.push(family);
    }
    let component_dims: Vec<usize> = bases.iter().map(CMatrix::ncols).collect();
    Ok(GradedTupleSpec::new(d, component_dims, blocks)?.with_shifts(shifts))
}

// ---------------------------------------------------------------------------
// defect rank
// ---------------------------------------------------------------------------

/// Numerical rank of `1 − Σ_k T_k T_k^*` restricted to the selected stored
/// degrees, adjoints taken against the spec's Gram data. Degrees touching
/// the truncation boundary (the last two) are rejected.
pub fn defect_rank(spec: &GradedTupleSpec, degrees_to_use: &[usize]) -> Result<usize, GradedError> {
    defect_rank_with(spec, degrees_to_use, DEFAULT_RANK_TOL)
}

pub fn defect_rank_with(
    spec: &GradedTupleSpec,
    degrees_to_use: &[usize],
    rank_tol: f64,
) -> Result<usize, GradedError> {
    let n_max = spec.max_degree();
    let max_allowed = n_max.saturating_sub(2);
    for &t in degrees_to_use {
        if t > max_allowed {
            return Err(GradedError::TruncationBoundary { degree: t, max_allowed });
        }
    }
    let mut parts = Vec::with_capacity(degrees_to_use.len());
    for &t in degrees_to_use {
        let m = spec.component_dims()[t];
        if m == 0 {
            continue;
        }
        let g_t = spec.gram_at(t);
        let chol_t = nalgebra::Cholesky::new(g_t.clone()).expect("validated PD");
        let mut delta = mat::identity(m);
        if t > 0 && spec.component_dims()[t - 1] > 0 {
            let g_prev_inv =
                nalgebra::Cholesky::new(spec.gram_at(t - 1)).expect("validated PD").inverse();
            for k in 1..=spec.d() {
                let b = spec.block(k, t - 1);
                delta -= b * &g_prev_inv * b.adjoint() * &g_t;
            }
        }
        // conjugate to an orthonormal basis: L^* Δ L^{-*} is Hermitian
        let l = chol_t.l();
        let solved = l.solve_lower_triangular(&delta.adjoint()).expect("triangular");
        parts.push(l.adjoint() * solved.adjoint());
    }
    if parts.is_empty() {
        return Ok(0);
    }
    let stacked = block_diag(&parts);
    Ok(rank(&stacked, rank_tol))
}

// ---------------------------------------------------------------------------
// Euler characteristic of the example family
// ---------------------------------------------------------------------------

/// Classification of the multiplier family for
/// [`euler_characteristic_example`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MultiplierKind {
    /// Every `φ_k` homogeneous: `χ = r`.
    Homogeneous,
    /// The graph contains no nonzero element with polynomial components:
    /// `χ = r + 1`.
    NoPolynomialElement,
}

/// Euler characteristic of the multiplier-quotient family.
///
/// For the homogeneous case the value `r` is cross-validated against
/// `(−1)^d · stabilized_index` on a canonical representative
/// (`φ_k = z_1^k`), using `e(M) = (−1)^d χ(M)` and the index identity. The
/// no-polynomial-element case is an analytic classification with no finite
/// computation attached; it returns `r + 1` directly.
pub fn euler_characteristic_example(
    d: usize,
    r: usize,
    kind: MultiplierKind,
) -> Result<i64, GradedError> {
    match kind {
        MultiplierKind::NoPolynomialElement => {
            if r == 0 {
                return Err(GradedError::InvalidRank);
            }
            Ok(r as i64 + 1)
        }
        MultiplierKind::Homogeneous => {
            let sign = if d % 2 == 0 { 1 } else { -1 };
            if r == 0 {
                let spec = free_module_spec(d, 1, d + 4)?;
                let report = stabilized_index(&spec)?;
                let chi = sign * report.index;
                if !report.stabilized || chi != 1 {
                    return Err(GradedError::CrossCheckFailed {
                        expected: 1,
                        got: chi,
                        stabilized: report.stabilized,
                    });
                }
                return Ok(1);
            }
            let phis: Vec<Polynomial> = (1..=r)
                .map(|k| {
                    let mut exps = vec![0usize; d];
                    exps[0] = k;
                    Polynomial::monomial(d, c(1.0, 0.0), exps).expect("well-formed monomial")
                })
                .collect();
            let spec = dshift_quotient_spec(d, r, &phis, r + 4)?;
            let report = stabilized_index(&spec)?;
            let chi = sign * report.index;
            if !report.stabilized || chi != r as i64 {
                return Err(GradedError::CrossCheckFailed {
                    expected: r as i64,
                    got: chi,
                    stabilized: report.stabilized,
                });
            }
            Ok(r as i64)
        }
    }
}

// ---------------------------------------------------------------------------
// Euler-number additivity on short exact sequences
// ---------------------------------------------------------------------------

/// Outcome of the additivity check `e(ambient) = e(sub) + e(quotient)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdditivityReport {
    pub e_ambient: i64,
    pub e_sub: i64,
    pub e_quotient: i64,
    pub additive: bool,
    /// False when some of the three tables failed to stabilize; the check
    /// is then inconclusive rather than failed.
    pub conclusive: bool,
}

/// Checks Euler-number additivity for a graded submodule presented by
/// per-degree inclusion matrices into an ambient spec. The submodule
/// blocks are recovered by solving through the inclusions; the quotient is
/// compressed onto the per-degree Gram-orthogonal complements.
pub fn euler_additivity_check(
    ambient: &GradedTupleSpec,
    inclusions: &[CMatrix],
) -> Result<AdditivityReport, GradedError> {
    let n_max = ambient.max_degree();
    if inclusions.len() != n_max + 1 {
        return Err(GradedError::InclusionCount { got: inclusions.len(), expected: n_max + 1 });
    }
    for (j, inc) in inclusions.iter().enumerate() {
        if inc.nrows() != ambient.component_dims()[j] {
            return Err(GradedError::InclusionShape {
                j,
                rows: inc.nrows(),
                cols: inc.ncols(),
                erows: ambient.component_dims()[j],
            });
        }
        if inc.ncols() > 0 && rank(inc, DEFAULT_RANK_TOL) < inc.ncols() {
            return Err(GradedError::InclusionRankDeficient(j));
        }
    }

    // submodule blocks X solving inc_{j+1} X = T_k^{(j)} inc_j
    let mut sub_blocks: Vec<Vec<CMatrix>> = Vec::with_capacity(ambient.d());
    for k in 1..=ambient.d() {
        let mut family = Vec::with_capacity(n_max);
        for j in 0..n_max {
            let rhs = ambient.block(k, j) * &inclusions[j];
            let target = &inclusions[j + 1];
            let x = if target.ncols() == 0 || rhs.ncols() == 0 {
                mat::zeros(target.ncols(), rhs.ncols())
            } else {
                let svd = target.clone().svd(true, true);
                let eps = DEFAULT_RANK_TOL
                    * svd.singular_values.iter().copied().fold(0.0f64, f64::max)
                    * target.nrows().max(target.ncols()) as f64;
                svd.solve(&rhs, eps).map_err(|_| GradedError::InclusionRankDeficient(j + 1))?
            };
            let residual =
                if rhs.ncols() == 0 { 0.0 } else { max_abs(&(target * &x - &rhs)) };
            if residual > 1e-8 * (1.0 + max_abs(&rhs)) {
                return Err(GradedError::NotASubmodule { k, j, residual });
            }
            family.push(x);
        }
        sub_blocks.push(family);
    }
    let sub_dims: Vec<usize> = inclusions.iter().map(CMatrix::ncols).collect();
    let sub_spec = GradedTupleSpec::new(ambient.d(), sub_dims, sub_blocks)?;

    // quotient: compress onto Gram-orthogonal complements of the images
    let mut q_bases: Vec<CMatrix> = Vec::with_capacity(n_max + 1);
    for (j, inc) in inclusions.iter().enumerate() {
        let g = ambient.gram_at(j);
        let kernel = numerical_kernel(&(inc.adjoint() * &g), DEFAULT_RANK_TOL);
        let expected = ambient.component_dims()[j] - inc.ncols();
        if kernel.dimension != expected {
            return Err(GradedError::ComplementDimension {
                degree: j,
                got: kernel.dimension,
                expected,
            });
        }
        q_bases.push(gram_orthonormalize(&kernel.basis, &g));
    }
    let mut q_blocks: Vec<Vec<CMatrix>> = Vec::with_capacity(ambient.d());
    for k in 1..=ambient.d() {
        let mut family = Vec::with_capacity(n_max);
        for j in 0..n_max {
            let g_next = ambient.gram_at(j + 1);
            family.push(q_bases[j + 1].adjoint() * g_next * ambient.block(k, j) * &q_bases[j]);
        }
        q_blocks.push(family);
    }
    let q_dims: Vec<usize> = q_bases.iter().map(CMatrix::ncols).collect();
    let q_spec = GradedTupleSpec::new(ambient.d(), q_dims, q_blocks)?;

    let amb_report = stabilized_index(ambient)?;
    let sub_report = stabilized_index(&sub_spec)?;
    let q_report = stabilized_index(&q_spec)?;
    let conclusive = amb_report.stabilized && sub_report.stabilized && q_report.stabilized;
    Ok(AdditivityReport {
        e_ambient: amb_report.index,
        e_sub: sub_report.index,
        e_quotient: q_report.index,
        additive: amb_report.index == sub_report.index + q_report.index,
        conclusive,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn phi_z1(d: usize) -> Polynomial {
        Polynomial::variable(d, 1).unwrap()
    }

    #[test]
    fn monomial_enumeration_and_counts() {
        assert_eq!(monomials(2, 2), vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(monomial_count(2, 5), 6);
        assert_eq!(monomial_count(3, 3), 10);
        assert_eq!(monomial_count(1, 9), 1);
    }

    #[test]
    fn fock_gram_values() {
        let g1 = fock_gram(2, 1);
        assert_eq!(g1[(0, 0)], c(1.0, 0.0));
        assert_eq!(g1[(1, 1)], c(1.0, 0.0));
        let g2 = fock_gram(2, 2);
        assert_eq!(g2[(0, 0)], c(1.0, 0.0)); // z1^2
        assert_eq!(g2[(1, 1)], c(0.5, 0.0)); // z1 z2
        assert_eq!(g2[(2, 2)], c(1.0, 0.0)); // z2^2
        for j in 0..5 {
            let g = fock_gram(1, j);
            assert_eq!(g[(0, 0)], c(1.0, 0.0));
        }
    }

    #[test]
    fn free_module_dims() {
        let s = free_module_spec(2, 1, 6).unwrap();
        assert_eq!(&s.component_dims()[..4], &[1, 2, 3, 4]);
        let s = free_module_spec(3, 1, 3).unwrap();
        assert_eq!(s.component_dims(), &[1, 3, 6, 10]);
        let s = free_module_spec(1, 2, 4).unwrap();
        assert_eq!(s.component_dims(), &[2, 2, 2, 2, 2]);
        assert!(free_module_spec(2, 0, 6).is_err());
    }

    #[test]
    fn free_module_betti_concentrates_in_top_degree() {
        let spec = free_module_spec(2, 1, 6).unwrap();
        let table = graded_koszul_betti(&spec).unwrap();
        assert!(table.stabilized());
        assert_eq!(table.trusted_max_degree(), 5);
        assert_eq!(table.beta(2, 0), 1);
        assert_eq!(table.nonzero_entries(), vec![(2, 0, 1)]);
        assert_eq!(table.alternating_total(), 1);

        let spec3 = free_module_spec(2, 3, 6).unwrap();
        let table3 = graded_koszul_betti(&spec3).unwrap();
        assert_eq!(table3.nonzero_entries(), vec![(2, 0, 3)]);
        assert_eq!(table3.alternating_total(), 3);
    }

    #[test]
    fn zero_module_has_empty_table() {
        let spec = GradedTupleSpec::new(
            2,
            vec![0, 0, 0, 0, 0],
            vec![vec![mat::zeros(0, 0); 4], vec![mat::zeros(0, 0); 4]],
        )
        .unwrap();
        let table = graded_koszul_betti(&spec).unwrap();
        assert!(table.nonzero_entries().is_empty());
        let report = stabilized_index(&spec).unwrap();
        assert_eq!(report.index, 0);
        assert!(report.stabilized);
        assert_eq!(defect_rank(&spec, &[0, 1, 2]).unwrap(), 0);
    }

    #[test]
    fn free_module_law_over_small_ranks() {
        for d in 1..=3usize {
            for rank in 1..=3usize {
                let spec = free_module_spec(d, rank, 6).unwrap();
                let report = stabilized_index(&spec).unwrap();
                assert!(report.stabilized, "d={d} rank={rank}");
                let sign = if d % 2 == 0 { 1 } else { -1 };
                assert_eq!(report.index, sign * rank as i64, "d={d} rank={rank}");
            }
        }
    }

    #[test]
    fn betti_json_schema() {
        let spec = free_module_spec(2, 1, 4).unwrap();
        let table = graded_koszul_betti(&spec).unwrap();
        let json = table.to_json();
        assert_eq!(json["d"], 2);
        assert_eq!(json["trusted_max_degree"], 3);
        assert_eq!(json["beta"][0][0], 2);
        assert_eq!(json["beta"][0][1], 0);
        assert_eq!(json["beta"][0][2], 1);
        assert_eq!(json["stabilized"], true);
    }

    #[test]
    fn quotient_by_z1_matches_shifted_free_module() {
        // (f, g) ↦ g − z₁f identifies 2·H²/{(f, z₁f)} with A(1)
        let spec = dshift_quotient_spec(2, 1, &[phi_z1(2)], 8).unwrap();
        // offset = 1: stored degree t holds math degree t − 1
        for t in 0..=8usize {
            assert_eq!(spec.component_dims()[t], monomial_count(2, t), "t={t}");
        }
        let table = graded_koszul_betti(&spec).unwrap();
        assert!(table.stabilized());
        assert_eq!(table.nonzero_entries(), vec![(2, 0, 1)]);
        let report = stabilized_index(&spec).unwrap();
        assert_eq!(report.index, 1);
    }

    #[test]
    fn quotient_d1_by_z() {
        let spec = dshift_quotient_spec(1, 1, &[phi_z1(1)], 6).unwrap();
        let report = stabilized_index(&spec).unwrap();
        assert!(report.stabilized);
        // e = (−1)^1 · χ = −1 for the rank-1 case in one variable
        assert_eq!(report.index, -1);
    }

    #[test]
    fn quotient_rejects_degenerate_multipliers() {
        // zero multiplier: {1, 0} dependent
        let zero = Polynomial::new(2, vec![]).unwrap();
        assert!(matches!(
            dshift_quotient_spec(2, 1, &[zero], 8),
            Err(GradedError::DependentMultipliers)
        ));
        // non-homogeneous: z1 + 1
        let mixed =
            Polynomial::new(2, vec![(c(1.0, 0.0), vec![1, 0]), (c(1.0, 0.0), vec![0, 0])]).unwrap();
        assert!(matches!(
            dshift_quotient_spec(2, 1, &[mixed], 8),
            Err(GradedError::NonHomogeneous(1))
        ));
        // equal-degree dependent pair (z1, 2·z1)
        let p1 = phi_z1(2);
        let p2 = Polynomial::monomial(2, c(2.0, 0.0), vec![1, 0]).unwrap();
        assert!(matches!(
            dshift_quotient_spec(2, 2, &[p1, p2], 8),
            Err(GradedError::DependentMultipliers)
        ));
        // N too small
        assert!(matches!(
            dshift_quotient_spec(2, 1, &[phi_z1(2)], 3),
            Err(GradedError::MaxDegreeTooSmall { .. })
        ));
    }

    #[test]
    fn quotient_index_equals_r() {
        // r = 2 with degrees (1, 2)
        let p1 = phi_z1(2);
        let p2 = Polynomial::monomial(2, c(1.0, 0.0), vec![0, 2]).unwrap();
        let spec = dshift_quotient_spec(2, 2, &[p1, p2], 8).unwrap();
        let report = stabilized_index(&spec).unwrap();
        assert!(report.stabilized);
        assert_eq!(report.index, 2);
    }

    #[test]
    fn defect_rank_of_quotient_is_r_plus_one() {
        let spec = dshift_quotient_spec(2, 1, &[phi_z1(2)], 8).unwrap();
        let degrees: Vec<usize> = (0..=spec.max_degree() - 2).collect();
        assert_eq!(defect_rank(&spec, &degrees).unwrap(), 2);
        assert!(matches!(
            defect_rank(&spec, &[spec.max_degree()]),
            Err(GradedError::TruncationBoundary { .. })
        ));
    }

    #[test]
    fn defect_rank_of_free_d_shift_is_one() {
        let spec = free_module_spec_with(2, 1, 8, GramKind::Fock).unwrap();
        let degrees: Vec<usize> = (0..=6).collect();
        assert_eq!(defect_rank(&spec, &degrees).unwrap(), 1);
    }

    #[test]
    fn gram_invariance_of_betti_tables() {
        // free fixture: identity vs Fock gram on the same blocks
        let id_spec = free_module_spec(2, 2, 6).unwrap();
        let fock_spec = free_module_spec_with(2, 2, 6, GramKind::Fock).unwrap();
        let t1 = graded_koszul_betti(&id_spec).unwrap();
        let t2 = graded_koszul_betti(&fock_spec).unwrap();
        assert_eq!(t1, t2);

        // quotient fixture: two different compressions of the same module
        let q_fock = dshift_quotient_spec_with(2, 1, &[phi_z1(2)], 8, GramKind::Fock).unwrap();
        let q_id = dshift_quotient_spec_with(2, 1, &[phi_z1(2)], 8, GramKind::Identity).unwrap();
        let t3 = graded_koszul_betti(&q_fock).unwrap();
        let t4 = graded_koszul_betti(&q_id).unwrap();
        assert_eq!(t3, t4);
    }

    #[test]
    fn harmonic_dims_match_betti_under_both_grams() {
        for gram in [GramKind::Identity, GramKind::Fock] {
            let spec = free_module_spec_with(2, 1, 5, gram).unwrap();
            let table = graded_koszul_betti(&spec).unwrap();
            let harm = graded_harmonic_dims(&spec).unwrap();
            for k in 0..=2usize {
                for j in 0..=table.trusted_max_degree() {
                    assert_eq!(harm[k][j], table.beta(k, j), "gram={gram:?} k={k} j={j}");
                }
            }
        }
    }

    #[test]
    fn euler_characteristic_cases() {
        assert_eq!(euler_characteristic_example(2, 1, MultiplierKind::Homogeneous).unwrap(), 1);
        assert_eq!(euler_characteristic_example(2, 2, MultiplierKind::Homogeneous).unwrap(), 2);
        assert_eq!(
            euler_characteristic_example(2, 2, MultiplierKind::NoPolynomialElement).unwrap(),
            3
        );
        assert_eq!(euler_characteristic_example(2, 0, MultiplierKind::Homogeneous).unwrap(), 1);
        assert_eq!(euler_characteristic_example(3, 1, MultiplierKind::Homogeneous).unwrap(), 1);
    }

    fn additivity_fixture() -> (GradedTupleSpec, Vec<CMatrix>) {
        // ambient A ⊕ A(1) over d = 2; sub generated by (1, z₁)
        let d = 2;
        let n_max = 7;
        let ambient = free_module_spec_shifted(d, &[0, 1], n_max).unwrap();
        let offset = 1usize;
        let mut inclusions = Vec::with_capacity(n_max + 1);
        for t in 0..=n_max {
            let amb_dim = ambient.component_dims()[t];
            match t.checked_sub(offset) {
                Some(q) => {
                    let source = monomials(d, q);
                    let pos_q = monomial_positions(d, q);
                    let pos_q1 = monomial_positions(d, q + 1);
                    let mut inc = mat::zeros(amb_dim, source.len());
                    for (col, alpha) in source.iter().enumerate() {
                        inc[(pos_q[alpha], col)] = c(1.0, 0.0);
                        let mut beta = alpha.clone();
                        beta[0] += 1;
                        inc[(monomial_count(d, q) + pos_q1[&beta], col)] = c(1.0, 0.0);
                    }
                    inclusions.push(inc);
                }
                None => inclusions.push(mat::zeros(amb_dim, 0)),
            }
        }
        (ambient, inclusions)
    }

    #[test]
    fn additivity_on_free_rank_two_fixture() {
        let (ambient, inclusions) = additivity_fixture();
        let report = euler_additivity_check(&ambient, &inclusions).unwrap();
        assert!(report.conclusive);
        assert_eq!(report.e_ambient, 2);
        assert_eq!(report.e_sub, 1);
        assert_eq!(report.e_quotient, 1);
        assert!(report.additive);
    }

    #[test]
    fn additivity_trivial_cases() {
        let ambient = free_module_spec(2, 1, 5).unwrap();
        // sub = 0
        let empties: Vec<CMatrix> =
            ambient.component_dims().iter().map(|&m| mat::zeros(m, 0)).collect();
        let report = euler_additivity_check(&ambient, &empties).unwrap();
        assert_eq!(report.e_sub, 0);
        assert_eq!(report.e_quotient, report.e_ambient);
        assert!(report.additive);
        // sub = ambient
        let fulls: Vec<CMatrix> =
            ambient.component_dims().iter().map(|&m| mat::identity(m)).collect();
        let report = euler_additivity_check(&ambient, &fulls).unwrap();
        assert_eq!(report.e_quotient, 0);
        assert_eq!(report.e_sub, report.e_ambient);
        assert!(report.additive);
    }

    #[test]
    fn additivity_rejects_non_submodule() {
        let ambient = free_module_spec(2, 2, 5).unwrap();
        // span of (1, 0) in degree 0 only: not closed under multiplication
        let mut inclusions: Vec<CMatrix> =
            ambient.component_dims().iter().map(|&m| mat::zeros(m, 0)).collect();
        let mut inc0 = mat::zeros(ambient.component_dims()[0], 1);
        inc0[(0, 0)] = c(1.0, 0.0);
        inclusions[0] = inc0;
        assert!(matches!(
            euler_additivity_check(&ambient, &inclusions),
            Err(GradedError::NotASubmodule { .. })
        ));
    }
}
