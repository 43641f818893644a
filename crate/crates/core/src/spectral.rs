//! Taylor invertibility and spectrum, Betti/Euler/Fredholm data, and the
//! linear-equation solver with tautological-perturbation analysis.
//!
//! The arbiter for every spectral question is the Dirac operator: a tuple
//! is Taylor-invertible iff `D` is invertible, and `λ` lies in the Taylor
//! spectrum iff `D − R(λ)` is singular. Candidates come from simultaneous
//! triangularization of a generic linear combination; singularity of
//! `D − R(λ)` then verifies each one.

use crate::dirac::{CommutingTuple, DiracPair, DiracError};
use crate::mat::{self, c, form_degree_indices, max_abs, parity_indices, submatrix, CMatrix, CVector, C64};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

/// Default relative rank tolerance: a singular value counts as zero when
/// it is at most `rank_tol · σ_max · max(rows, cols)`.
pub const DEFAULT_RANK_TOL: f64 = 1e-9;
/// Relative factor of the candidate-deduplication tolerance
/// `cluster_tol = 1e-7·(1 + max_k ‖T_k‖_max)`.
pub const CLUSTER_TOL_REL: f64 = 1e-7;
/// Grid-size guard for [`clifford_scan`].
pub const MAX_SCAN_POINTS: usize = 10_000_000;

#[derive(Debug, Error)]
pub enum SpectralError {
    #[error(transparent)]
    Dirac(#[from] DiracError),
    #[error("tuple not numerically commuting: triangularization defect {defect:.3e} exceeds {bound:.3e} after {attempts} attempts")]
    TriangularizationDefect { defect: f64, bound: f64, attempts: usize },
    #[error("Schur decomposition did not converge")]
    SchurFailure,
    #[error("scan grid needs {expected} axes (2d), got {got}")]
    GridAxes { got: usize, expected: usize },
    #[error("scan grid has {0} points, exceeding the guard of {MAX_SCAN_POINTS}")]
    GridTooLarge(usize),
    #[error("full grids are limited to d ≤ 2; supply an explicit point list for d = {0}")]
    GridDimension(usize),
    #[error("scan point {index} has {got} entries, expected {expected}")]
    PointLength { index: usize, got: usize, expected: usize },
    #[error("right-hand side has {got} entries, expected {expected}")]
    RhsLength { got: usize, expected: usize },
}

/// Options shared by the candidate/spectrum operations.
#[derive(Clone, Debug)]
pub struct SpectralConfig {
    pub rank_tol: f64,
    pub seed: u64,
    /// Fresh generic combinations to try when triangularization fails.
    pub max_retries: usize,
    /// Whether [`taylor_spectrum`] appends the coarse-grid cross-check.
    pub grid_cross_check: bool,
}

impl Default for SpectralConfig {
    fn default() -> Self {
        Self {
            rank_tol: DEFAULT_RANK_TOL,
            seed: crate::DEFAULT_SEED,
            max_retries: 3,
            grid_cross_check: true,
        }
    }
}

/// Kernel of a matrix at a relative rank tolerance.
#[derive(Clone, Debug)]
pub struct KernelInfo {
    pub dimension: usize,
    /// Orthonormal kernel basis, one column per dimension.
    pub basis: CMatrix,
    /// All singular values, descending.
    pub singular_values: Vec<f64>,
    /// Absolute threshold `rank_tol · σ_max · max(rows, cols)` used.
    pub threshold: f64,
}

impl KernelInfo {
    /// True when some singular value sits within a factor 10 of the
    /// threshold, i.e. the rank decision is fragile.
    pub fn rank_marginal(&self) -> bool {
        self.singular_values
            .iter()
            .any(|&s| s > self.threshold / 10.0 && s < self.threshold * 10.0)
    }
}

/// Kernel dimension and orthonormal basis via SVD.
///
/// The kernel counts singular values `≤ rank_tol · σ_max · max(rows, cols)`;
/// when `σ_max = 0` the kernel is everything.
pub fn numerical_kernel(m: &CMatrix, rank_tol: f64) -> KernelInfo {
    let (rows, cols) = m.shape();
    if cols == 0 {
        return KernelInfo {
            dimension: 0,
            basis: mat::zeros(0, 0),
            singular_values: vec![],
            threshold: 0.0,
        };
    }
    if rows == 0 {
        return KernelInfo {
            dimension: cols,
            basis: mat::identity(cols),
            singular_values: vec![],
            threshold: 0.0,
        };
    }
    // pad with zero rows so the thin SVD still exposes a full right basis
    let work = if rows < cols {
        let mut padded = mat::zeros(cols, cols);
        padded.view_mut((0, 0), (rows, cols)).copy_from(m);
        padded
    } else {
        m.clone()
    };
    let svd = work.svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let mut sigma: Vec<f64> = svd.singular_values.iter().copied().collect();
    sigma.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let sigma_max = sigma.first().copied().unwrap_or(0.0);
    let threshold = rank_tol * sigma_max * rows.max(cols) as f64;
    let rank = svd.singular_values.iter().filter(|&&s| s > threshold).count();
    let dimension = cols - rank;
    // rows of v_t whose singular value is below threshold span the kernel
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[a].partial_cmp(&svd.singular_values[b]).unwrap());
    let mut basis = mat::zeros(cols, dimension);
    for (col, &i) in order.iter().take(dimension).enumerate() {
        for r in 0..cols {
            basis[(r, col)] = v_t[(i, r)].conj();
        }
    }
    KernelInfo { dimension, basis, singular_values: sigma, threshold }
}

/// Kernel dimension only (skips the basis).
pub(crate) fn nullity_info(m: &CMatrix, rank_tol: f64) -> (usize, Vec<f64>, f64) {
    let (rows, cols) = m.shape();
    if cols == 0 || rows == 0 {
        return (cols, vec![], 0.0);
    }
    let sv = m.clone().singular_values();
    let mut sigma: Vec<f64> = sv.iter().copied().collect();
    sigma.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let sigma_max = sigma.first().copied().unwrap_or(0.0);
    let threshold = rank_tol * sigma_max * rows.max(cols) as f64;
    let rank = sigma.iter().filter(|&&s| s > threshold).count();
    (cols - rank, sigma, threshold)
}

pub(crate) fn nullity(m: &CMatrix, rank_tol: f64) -> usize {
    nullity_info(m, rank_tol).0
}

pub(crate) fn rank(m: &CMatrix, rank_tol: f64) -> usize {
    m.ncols() - nullity(m, rank_tol)
}

fn smallest_singular_value(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().singular_values().iter().copied().fold(f64::INFINITY, f64::min)
}

/// Taylor invertibility test: the tuple is invertible iff its Dirac
/// operator is. Returns the verdict together with the smallest eigenvalue
/// of `D²`; the verdict is true iff that eigenvalue exceeds
/// `(rank_tol · (1 + ‖D‖_max))²`.
pub fn is_taylor_invertible(tuple: &CommutingTuple, rank_tol: f64) -> (bool, f64) {
    let pair = tuple.assemble_dirac();
    let sigma_min = smallest_singular_value(pair.dirac());
    let scale = 1.0 + max_abs(pair.dirac());
    let lambda_min = sigma_min * sigma_min;
    (lambda_min > (rank_tol * scale) * (rank_tol * scale), lambda_min)
}

fn cluster_tol(tuple: &CommutingTuple) -> f64 {
    CLUSTER_TOL_REL * (1.0 + tuple.max_entry_norm())
}

fn dedup_candidates(points: Vec<Vec<C64>>, tol: f64) -> Vec<Vec<C64>> {
    let mut out: Vec<Vec<C64>> = Vec::new();
    'next: for p in points {
        for q in &out {
            let dist_sq: f64 = p.iter().zip(q).map(|(a, b)| (a - b).norm_sqr()).sum();
            if dist_sq.sqrt() <= tol {
                continue 'next;
            }
        }
        out.push(p);
    }
    out
}

/// Joint eigenvalue candidates by simultaneous triangularization.
///
/// A seeded generic combination `Σ γ_k T_k` is Schur-triangularized; every
/// `T_k` is conjugated by the same unitary and must come out upper
/// triangular within `10 · comm_tol · (1 + max‖T_k‖)²`. The matched
/// diagonal d-vectors, deduplicated at the cluster tolerance, are returned.
/// Fails over to a fresh combination up to `max_retries` times.
pub fn joint_eigenvalue_candidates(
    tuple: &CommutingTuple,
    config: &SpectralConfig,
) -> Result<Vec<Vec<C64>>, SpectralError> {
    let n = tuple.n();
    let d = tuple.d();
    let bound = 10.0 * tuple.comm_tol() * tuple.commutator_scale();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut last_defect = f64::INFINITY;
    for _attempt in 0..=config.max_retries {
        let gamma: Vec<C64> = (0..d)
            .map(|_| c(rng.random::<f64>() * 2.0 - 1.0, rng.random::<f64>() * 2.0 - 1.0))
            .collect();
        let mut combo = mat::zeros(n, n);
        for k in 0..d {
            combo += tuple.matrices()[k].clone() * gamma[k];
        }
        let Some(schur) = combo.try_schur(1e-14, 10_000) else {
            continue;
        };
        let (q, _t) = schur.unpack();
        let rotated: Vec<CMatrix> =
            tuple.matrices().iter().map(|t| q.adjoint() * t * &q).collect();
        let mut defect = 0.0f64;
        for m in &rotated {
            for i in 0..n {
                for j in 0..i {
                    defect = defect.max(m[(i, j)].norm());
                }
            }
        }
        if defect <= bound {
            let points: Vec<Vec<C64>> =
                (0..n).map(|i| rotated.iter().map(|m| m[(i, i)]).collect()).collect();
            return Ok(dedup_candidates(points, cluster_tol(tuple)));
        }
        last_defect = last_defect.min(defect);
    }
    Err(SpectralError::TriangularizationDefect {
        defect: last_defect,
        bound,
        attempts: config.max_retries + 1,
    })
}

/// The Taylor spectrum report: candidates, the subset verified singular,
/// and the smallest singular value of `D − R(λ)` at each candidate.
#[derive(Clone, Debug)]
pub struct SpectrumReport {
    pub candidates: Vec<Vec<C64>>,
    /// Candidates verified to lie in the Taylor spectrum.
    pub verified: Vec<Vec<C64>>,
    /// `σ_min(D − R(λ))`, parallel to `candidates`.
    pub min_singular: Vec<f64>,
    /// Per-candidate verification thresholds `rank_tol·(1 + ‖D − R(λ)‖_max)`.
    pub thresholds: Vec<f64>,
    /// The relative rank tolerance used.
    pub tol: f64,
    /// Global minimum of `σ_min(D − R(λ))` over a coarse bounding-box grid,
    /// recorded as a completeness cross-check.
    pub grid_min_singular: Option<f64>,
}

/// Taylor spectrum via candidates-then-verify.
pub fn taylor_spectrum(tuple: &CommutingTuple) -> Result<SpectrumReport, SpectralError> {
    taylor_spectrum_with(tuple, &SpectralConfig::default())
}

pub fn taylor_spectrum_with(
    tuple: &CommutingTuple,
    config: &SpectralConfig,
) -> Result<SpectrumReport, SpectralError> {
    let candidates = joint_eigenvalue_candidates(tuple, config)?;
    let pair = tuple.assemble_dirac();
    let mut verified = Vec::new();
    let mut min_singular = Vec::with_capacity(candidates.len());
    let mut thresholds = Vec::with_capacity(candidates.len());
    for lambda in &candidates {
        let shifted = pair.translated(lambda)?;
        let sigma = smallest_singular_value(&shifted);
        let threshold = config.rank_tol * (1.0 + max_abs(&shifted));
        if sigma <= threshold {
            verified.push(lambda.clone());
        }
        min_singular.push(sigma);
        thresholds.push(threshold);
    }
    let grid_min_singular = if config.grid_cross_check {
        bounding_grid_minimum(&pair, &candidates)
    } else {
        None
    };
    Ok(SpectrumReport {
        candidates,
        verified,
        min_singular,
        thresholds,
        tol: config.rank_tol,
        grid_min_singular,
    })
}

/// Minimum of `σ_min(D − R(λ))` over a coarse grid (3 points per real
/// axis) spanning the candidate bounding box padded by 0.5.
fn bounding_grid_minimum(pair: &DiracPair, candidates: &[Vec<C64>]) -> Option<f64> {
    if candidates.is_empty() {
        return None;
    }
    let d = pair.d();
    let axes = 2 * d;
    let points_total = 3usize.checked_pow(axes as u32)?;
    if points_total > 20_000 {
        return None;
    }
    let mut lo = vec![f64::INFINITY; axes];
    let mut hi = vec![f64::NEG_INFINITY; axes];
    for cand in candidates {
        for k in 0..d {
            lo[2 * k] = lo[2 * k].min(cand[k].re);
            hi[2 * k] = hi[2 * k].max(cand[k].re);
            lo[2 * k + 1] = lo[2 * k + 1].min(cand[k].im);
            hi[2 * k + 1] = hi[2 * k + 1].max(cand[k].im);
        }
    }
    let coords: Vec<Vec<f64>> = (0..axes)
        .map(|a| vec![lo[a] - 0.5, 0.5 * (lo[a] + hi[a]), hi[a] + 0.5])
        .collect();
    let minimum = (0..points_total)
        .into_par_iter()
        .map(|mut idx| {
            let mut lambda = vec![c(0.0, 0.0); d];
            for k in 0..d {
                let re = coords[2 * k][idx % 3];
                idx /= 3;
                let im = coords[2 * k + 1][idx % 3];
                idx /= 3;
                lambda[k] = c(re, im);
            }
            let shifted = pair.translated(&lambda).expect("length d");
            smallest_singular_value(&shifted)
        })
        .reduce(|| f64::INFINITY, f64::min);
    Some(minimum)
}

/// One grid axis of a Clifford-spectrum scan: `steps` points evenly spaced
/// over `[min, max]` (endpoints included; a single step sits at `min`).
#[derive(Clone, Copy, Debug)]
pub struct GridAxis {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl GridAxis {
    fn points(&self) -> Vec<f64> {
        match self.steps {
            0 => vec![],
            1 => vec![self.min],
            s => (0..s)
                .map(|i| self.min + (self.max - self.min) * i as f64 / (s - 1) as f64)
                .collect(),
        }
    }
}

/// Point source for [`clifford_scan`]: a full real 2d-box grid (d ≤ 2) or
/// an explicit λ list (any d).
#[derive(Clone, Debug)]
pub enum ScanPoints {
    Grid(Vec<GridAxis>),
    List(Vec<Vec<C64>>),
}

#[derive(Clone, Debug)]
pub struct ScanRow {
    pub lambda: Vec<C64>,
    pub sigma_min: f64,
}

/// Scan output: `σ_min(D − R(λ))` per point, plus the eigenvalues of `D`
/// for comparison with the ordinary spectrum.
#[derive(Clone, Debug)]
pub struct ScanTable {
    pub d: usize,
    pub rows: Vec<ScanRow>,
    pub dirac_eigenvalues: Vec<f64>,
}

impl ScanTable {
    /// Tab-separated rendering: one row
    /// `re(λ₁) im(λ₁) … re(λ_d) im(λ_d) sigma_min` per point, `#`-prefixed
    /// header lines, LF line endings, 15 significant digits.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        out.push('#');
        for k in 1..=self.d {
            out.push_str(&format!(" re(lambda_{k})\tim(lambda_{k})\t"));
        }
        out.push_str("sigma_min\n");
        out.push_str("# eigenvalues(D):");
        for e in &self.dirac_eigenvalues {
            out.push_str(&format!(" {:.14e}", e));
        }
        out.push('\n');
        for row in &self.rows {
            let mut fields: Vec<String> = Vec::with_capacity(2 * self.d + 1);
            for z in &row.lambda {
                fields.push(format!("{:.14e}", z.re));
                fields.push(format!("{:.14e}", z.im));
            }
            fields.push(format!("{:.14e}", row.sigma_min));
            out.push_str(&fields.join("\t"));
            out.push('\n');
        }
        out
    }
}

/// Tabulates `σ_min(D − R(λ))` over the requested points; rows come back
/// in grid (odometer) order regardless of the parallel schedule.
pub fn clifford_scan(pair: &DiracPair, points: &ScanPoints) -> Result<ScanTable, SpectralError> {
    let d = pair.d();
    let lambdas: Vec<Vec<C64>> = match points {
        ScanPoints::Grid(axes) => {
            if d > 2 {
                return Err(SpectralError::GridDimension(d));
            }
            if axes.len() != 2 * d {
                return Err(SpectralError::GridAxes { got: axes.len(), expected: 2 * d });
            }
            let axis_points: Vec<Vec<f64>> = axes.iter().map(GridAxis::points).collect();
            let total: usize = axis_points.iter().map(Vec::len).product();
            if total > MAX_SCAN_POINTS {
                return Err(SpectralError::GridTooLarge(total));
            }
            let mut lambdas = Vec::with_capacity(total);
            if total > 0 {
                let mut idx = vec![0usize; 2 * d];
                loop {
                    let lambda: Vec<C64> = (0..d)
                        .map(|k| c(axis_points[2 * k][idx[2 * k]], axis_points[2 * k + 1][idx[2 * k + 1]]))
                        .collect();
                    lambdas.push(lambda);
                    // odometer: last axis fastest
                    let mut a = 2 * d;
                    loop {
                        if a == 0 {
                            break;
                        }
                        a -= 1;
                        idx[a] += 1;
                        if idx[a] < axis_points[a].len() {
                            break;
                        }
                        idx[a] = 0;
                        if a == 0 {
                            break;
                        }
                    }
                    if idx.iter().all(|&i| i == 0) {
                        break;
                    }
                }
            }
            lambdas
        }
        ScanPoints::List(list) => {
            for (index, p) in list.iter().enumerate() {
                if p.len() != d {
                    return Err(SpectralError::PointLength { index, got: p.len(), expected: d });
                }
            }
            list.clone()
        }
    };
    let rows: Vec<ScanRow> = lambdas
        .into_par_iter()
        .map(|lambda| {
            let shifted = pair.translated(&lambda).expect("validated length");
            let sigma_min = smallest_singular_value(&shifted);
            ScanRow { lambda, sigma_min }
        })
        .collect();
    let eig = nalgebra::SymmetricEigen::new(pair.dirac().clone());
    let mut dirac_eigenvalues: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    dirac_eigenvalues.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(ScanTable { d, rows, dirac_eigenvalues })
}

/// Koszul cohomology dimensions `β_k` of a tuple, with the harmonic-space
/// dimensions `dim(ker D ∩ Λ^k-degree)` they must match.
#[derive(Clone, Debug)]
pub struct BettiVector {
    pub beta: Vec<usize>,
    pub harmonic: Vec<usize>,
    /// False when some rank decision had a singular value within a factor
    /// 10 of its threshold.
    pub rank_stable: bool,
}

impl BettiVector {
    pub fn euler_number(&self) -> i64 {
        self.beta
            .iter()
            .enumerate()
            .map(|(k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) })
            .sum()
    }
}

/// Betti numbers `β_k = dim ker B_k − rank B_{k−1}` of the Koszul complex,
/// cross-computed as harmonic dimensions per form degree.
pub fn betti_numbers(tuple: &CommutingTuple) -> BettiVector {
    betti_numbers_with(tuple, DEFAULT_RANK_TOL)
}

pub fn betti_numbers_with(tuple: &CommutingTuple, rank_tol: f64) -> BettiVector {
    let d = tuple.d();
    let n = tuple.n();
    let b = tuple.coboundary();
    let pair = tuple.assemble_dirac();
    let degrees: Vec<Vec<usize>> = (0..=d).map(|k| form_degree_indices(n, d, k)).collect();
    let mut rank_stable = true;
    let mut marginal = |sigma: &[f64], threshold: f64| {
        if sigma.iter().any(|&s| s > threshold / 10.0 && s < threshold * 10.0) {
            rank_stable = false;
        }
    };

    // kernel dims of each degree block of B
    let mut ker_dims = Vec::with_capacity(d + 1);
    let mut rank_dims = Vec::with_capacity(d + 1);
    for k in 0..=d {
        if k == d {
            // B vanishes on top-degree forms
            ker_dims.push(degrees[d].len());
            rank_dims.push(0);
            continue;
        }
        let block = submatrix(&b, &degrees[k + 1], &degrees[k]);
        let (nullity, sigma, threshold) = nullity_info(&block, rank_tol);
        marginal(&sigma, threshold);
        ker_dims.push(nullity);
        rank_dims.push(degrees[k].len() - nullity);
    }

    let mut beta = Vec::with_capacity(d + 1);
    for k in 0..=d {
        let incoming = if k == 0 { 0 } else { rank_dims[k - 1] };
        beta.push(ker_dims[k] - incoming);
    }

    let mut harmonic = Vec::with_capacity(d + 1);
    let all_rows: Vec<usize> = (0..n * (1 << d)).collect();
    for k in 0..=d {
        let restricted = submatrix(pair.dirac(), &all_rows, &degrees[k]);
        let (nullity, sigma, threshold) = nullity_info(&restricted, rank_tol);
        marginal(&sigma, threshold);
        harmonic.push(nullity);
    }

    BettiVector { beta, harmonic, rank_stable }
}

/// Alternating sum `Σ (−1)^k β_k`; zero for every finite-dimensional tuple.
pub fn euler_number(tuple: &CommutingTuple) -> i64 {
    betti_numbers(tuple).euler_number()
}

/// Kernel dimensions of `D_+` (the even-to-odd block of `D`) and its
/// adjoint, and their difference.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FredholmReport {
    pub dim_ker_plus: usize,
    pub dim_ker_minus: usize,
    pub index: i64,
}

pub fn fredholm_report(tuple: &CommutingTuple) -> FredholmReport {
    fredholm_report_with(tuple, DEFAULT_RANK_TOL)
}

pub fn fredholm_report_with(tuple: &CommutingTuple, rank_tol: f64) -> FredholmReport {
    let pair = tuple.assemble_dirac();
    let even = parity_indices(tuple.n(), tuple.d(), 0);
    let odd = parity_indices(tuple.n(), tuple.d(), 1);
    let d_plus = submatrix(pair.dirac(), &odd, &even);
    let dim_ker_plus = nullity(&d_plus, rank_tol);
    let dim_ker_minus = nullity(&d_plus.adjoint(), rank_tol);
    FredholmReport {
        dim_ker_plus,
        dim_ker_minus,
        index: dim_ker_plus as i64 - dim_ker_minus as i64,
    }
}

/// Solution report for `T_1 x_1 + … + T_d x_d = y`.
#[derive(Clone, Debug)]
pub struct LinearSolution {
    pub solvable: bool,
    /// Minimal-norm solution, one vector in `H` per `k`; meaningful when
    /// `solvable`.
    pub components: Vec<CVector>,
    /// Least-squares residual `‖Σ T_k x_k − y‖₂`.
    pub residual: f64,
    /// Dimension of the tautological perturbation space `B·Ω₂`.
    pub perturbation_dim: usize,
    /// `dim ker(B restricted to 1-forms)`.
    pub kernel_dim: usize,
    /// Exactness at Ω₁: solutions are unique modulo tautological
    /// perturbations iff `kernel_dim == perturbation_dim`.
    pub unique_mod_tautological: bool,
}

/// Solves `Σ T_k x_k = y` in the least-squares sense on the 1-form block
/// of the homological boundary, reporting minimal-norm solution and the
/// tautological-perturbation dimension.
pub fn solve_linear(tuple: &CommutingTuple, y: &CVector) -> Result<LinearSolution, SpectralError> {
    solve_linear_with(tuple, y, DEFAULT_RANK_TOL)
}

pub fn solve_linear_with(
    tuple: &CommutingTuple,
    y: &CVector,
    rank_tol: f64,
) -> Result<LinearSolution, SpectralError> {
    let n = tuple.n();
    let d = tuple.d();
    if y.len() != n {
        return Err(SpectralError::RhsLength { got: y.len(), expected: n });
    }
    let bt = tuple.homology_boundary();
    let deg0 = form_degree_indices(n, d, 0);
    let deg1 = form_degree_indices(n, d, 1);
    let deg2 = form_degree_indices(n, d, 2);
    let b1 = submatrix(&bt, &deg0, &deg1);
    let b2 = submatrix(&bt, &deg1, &deg2);

    let svd = b1.clone().svd(true, true);
    let sigma_max = svd.singular_values.iter().copied().fold(0.0f64, f64::max);
    let eps = rank_tol * sigma_max * b1.nrows().max(b1.ncols()) as f64;
    let x_flat: CVector = svd
        .solve(y, eps)
        .map(|x| x.column(0).into_owned())
        .unwrap_or_else(|_| CVector::zeros(b1.ncols()));
    let residual = (&b1 * &x_flat - y).norm();
    let scale = 1.0 + tuple.max_entry_norm();
    let solvable = residual <= rank_tol * scale * y.norm();

    // unpack Ω₁ = H ⊗ Λ¹, H-major: entry (i·d + k) is component k of x_i
    let components: Vec<CVector> =
        (0..d).map(|k| CVector::from_fn(n, |i, _| x_flat[i * d + k])).collect();

    let perturbation_dim = rank(&b2, rank_tol);
    let kernel_dim = nullity(&b1, rank_tol);
    Ok(LinearSolution {
        solvable,
        components,
        residual,
        perturbation_dim,
        kernel_dim,
        unique_mod_tautological: kernel_dim == perturbation_dim,
    })
}
