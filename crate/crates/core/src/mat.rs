//! Dense complex matrix carrier and small helpers shared by all modules.
//!
//! All operators in this crate are dense `Complex<f64>` matrices. The
//! carrier is [`nalgebra::DMatrix`]; this module fixes the conventions the
//! rest of the crate relies on (max-entry norms, the Kronecker ordering,
//! form-degree index bookkeeping on `H ⊗ ΛC^d`).

use nalgebra::{DMatrix, DVector};

pub type C64 = num_complex::Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Shorthand complex constructor.
#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Max-entry norm `max_{ij} |m_ij|`, the residual norm used throughout.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Max-entry distance between two matrices of equal shape.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch in max_abs_diff");
    max_abs(&(a - b))
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

pub fn zeros(rows: usize, cols: usize) -> CMatrix {
    CMatrix::zeros(rows, cols)
}

/// Kronecker product with the crate-wide tensor convention: the first
/// factor is the major (outer) index. `kron(T, c)` realises `T ⊗ c` on
/// `H ⊗ ΛC^d` with basis ordered H-index major, Λ-index minor.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn all_finite(m: &CMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Indices of the basis vectors `h_i ⊗ e_S` of `C^n ⊗ ΛC^d` whose form
/// degree `|S|` equals `degree`, in increasing index order.
pub fn form_degree_indices(n: usize, d: usize, degree: usize) -> Vec<usize> {
    let dim = 1usize << d;
    let mut out = Vec::new();
    for i in 0..n {
        for s in 0..dim {
            if (s as u32).count_ones() as usize == degree {
                out.push(i * dim + s);
            }
        }
    }
    out
}

/// Indices of even (`parity = 0`) or odd (`parity = 1`) form degree.
pub fn parity_indices(n: usize, d: usize, parity: u32) -> Vec<usize> {
    let dim = 1usize << d;
    let mut out = Vec::new();
    for i in 0..n {
        for s in 0..dim {
            if (s as u32).count_ones() % 2 == parity {
                out.push(i * dim + s);
            }
        }
    }
    out
}

/// Submatrix on the given row and column index sets.
pub fn submatrix(m: &CMatrix, rows: &[usize], cols: &[usize]) -> CMatrix {
    CMatrix::from_fn(rows.len(), cols.len(), |i, j| m[(rows[i], cols[j])])
}

/// Stacks two matrices with equal column counts vertically.
pub fn vstack(top: &CMatrix, bottom: &CMatrix) -> CMatrix {
    assert_eq!(top.ncols(), bottom.ncols(), "column mismatch in vstack");
    let mut out = zeros(top.nrows() + bottom.nrows(), top.ncols());
    if top.nrows() > 0 {
        out.view_mut((0, 0), top.shape()).copy_from(top);
    }
    if bottom.nrows() > 0 {
        out.view_mut((top.nrows(), 0), bottom.shape()).copy_from(bottom);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kron_is_major_minor() {
        let a = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0), c(4.0, 0.0)]);
        let b = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        let k = kron(&a, &b);
        // (i,r),(j,s) entry is a[i,j] * b[r,s]; block (0,1) of size 2 is 2*b
        assert_eq!(k[(0, 3)], c(2.0, 0.0));
        assert_eq!(k[(2, 1)], c(3.0, 0.0));
        assert_eq!(k[(1, 0)], c(0.0, 0.0));
    }

    #[test]
    fn degree_indices_count_binomially() {
        // n=2, d=3: degree-1 indices should number 2 * C(3,1) = 6
        let idx = form_degree_indices(2, 3, 1);
        assert_eq!(idx.len(), 6);
        assert_eq!(idx, vec![1, 2, 4, 9, 10, 12]);
    }

    #[test]
    fn parity_split_covers_everything() {
        let even = parity_indices(3, 2, 0);
        let odd = parity_indices(3, 2, 1);
        assert_eq!(even.len() + odd.len(), 3 * 4);
        assert_eq!(even.len(), odd.len());
    }
}
