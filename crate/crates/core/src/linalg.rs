//! Small dense linear-algebra helpers: Pauli matrices, Kronecker products and
//! sorted spectra of real-symmetric / complex-Hermitian matrices.

use nalgebra::{DMatrix, Matrix2, Matrix3, Matrix4, Vector3};

use crate::{Error, Result, C64};

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

/// Pauli matrix σ_i for `i ∈ {1, 2, 3}` (X, Y, Z).
pub fn pauli(i: usize) -> Result<Matrix2<C64>> {
    match i {
        1 => Ok(Matrix2::new(ZERO, ONE, ONE, ZERO)),
        2 => Ok(Matrix2::new(ZERO, -I, I, ZERO)),
        3 => Ok(Matrix2::new(ONE, ZERO, ZERO, -ONE)),
        _ => Err(Error::PauliIndex(i)),
    }
}

/// The three Pauli matrices in order.
pub fn paulis() -> [Matrix2<C64>; 3] {
    [
        Matrix2::new(ZERO, ONE, ONE, ZERO),
        Matrix2::new(ZERO, -I, I, ZERO),
        Matrix2::new(ONE, ZERO, ZERO, -ONE),
    ]
}

pub fn kron2(a: &Matrix2<C64>, b: &Matrix2<C64>) -> Matrix4<C64> {
    Matrix4::from_fn(|r, c| a[(r / 2, c / 2)] * b[(r % 2, c % 2)])
}

pub fn kron(a: &DMatrix<C64>, b: &DMatrix<C64>) -> DMatrix<C64> {
    a.kronecker(b)
}

/// Largest absolute entry.
pub fn max_abs<R, C, S>(m: &nalgebra::Matrix<C64, R, C, S>) -> f64
where
    R: nalgebra::Dim,
    C: nalgebra::Dim,
    S: nalgebra::RawStorage<C64, R, C>,
{
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Descending sort with ties kept in original index order.
fn sort_desc(values: &mut [(usize, f64)]) {
    values.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
}

/// Eigen-decomposition of a real symmetric 3×3 matrix, eigenvalues descending.
/// Column `k` of the returned matrix is the eigenvector of eigenvalue `k`.
pub fn sym3_eigen(m: &Matrix3<f64>) -> (Vector3<f64>, Matrix3<f64>) {
    let eig = m.symmetric_eigen();
    let mut idx: Vec<(usize, f64)> = eig.eigenvalues.iter().copied().enumerate().collect();
    sort_desc(&mut idx);
    let values = Vector3::from_fn(|k, _| idx[k].1);
    let vectors = Matrix3::from_fn(|r, c| eig.eigenvectors[(r, idx[c].0)]);
    (values, vectors)
}

/// Eigenvalues of a real symmetric 3×3 matrix, descending.
pub fn sym3_eigenvalues(m: &Matrix3<f64>) -> [f64; 3] {
    let (v, _) = sym3_eigen(m);
    [v[0], v[1], v[2]]
}

/// Eigenvalues of a Hermitian 4×4 matrix, descending. The input is
/// symmetrized first so tiny anti-Hermitian noise does not leak in.
pub fn herm4_eigenvalues(m: &Matrix4<C64>) -> [f64; 4] {
    let h = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let eig = h.symmetric_eigen();
    let mut idx: Vec<(usize, f64)> = eig.eigenvalues.iter().copied().enumerate().collect();
    sort_desc(&mut idx);
    [idx[0].1, idx[1].1, idx[2].1, idx[3].1]
}

/// Eigenvalues of a Hermitian matrix of any size, descending.
pub fn herm_eigenvalues(m: &DMatrix<C64>) -> Vec<f64> {
    let h = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let eig = h.symmetric_eigen();
    let mut idx: Vec<(usize, f64)> = eig.eigenvalues.iter().copied().enumerate().collect();
    sort_desc(&mut idx);
    idx.into_iter().map(|(_, v)| v).collect()
}

/// Eigen-decomposition of a real symmetric matrix of any size, eigenvalues
/// descending, eigenvectors as columns.
pub fn sym_eigen(m: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let h = (m + m.transpose()) * 0.5;
    let eig = h.symmetric_eigen();
    let mut idx: Vec<(usize, f64)> = eig.eigenvalues.iter().copied().enumerate().collect();
    sort_desc(&mut idx);
    let n = m.nrows();
    let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, idx[c].0)]);
    (idx.into_iter().map(|(_, v)| v).collect(), vectors)
}

/// Rotation by `angle` in the coordinate plane `(a, b)`.
pub fn givens3(a: usize, b: usize, angle: f64) -> Matrix3<f64> {
    let mut g = Matrix3::identity();
    let (s, c) = angle.sin_cos();
    g[(a, a)] = c;
    g[(b, b)] = c;
    g[(a, b)] = -s;
    g[(b, a)] = s;
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pauli_z_is_diag() {
        let z = pauli(3).unwrap();
        assert_eq!(z, Matrix2::new(ONE, ZERO, ZERO, -ONE));
    }

    #[test]
    fn paulis_are_traceless_involutions() {
        for i in 1..=3 {
            let s = pauli(i).unwrap();
            assert!((s * s - Matrix2::identity()).iter().all(|z| z.norm() < 1e-15));
            assert!(s.trace().norm() < 1e-15);
        }
    }

    #[test]
    fn pauli_index_out_of_range() {
        assert!(matches!(pauli(0), Err(Error::PauliIndex(0))));
        assert!(matches!(pauli(4), Err(Error::PauliIndex(4))));
    }

    #[test]
    fn sym3_sorted_with_residual() {
        let m = Matrix3::new(2.0, 1.0, 0.0, 1.0, 3.0, 0.5, 0.0, 0.5, -1.0);
        let (vals, vecs) = sym3_eigen(&m);
        assert!(vals[0] >= vals[1] && vals[1] >= vals[2]);
        for k in 0..3 {
            let v = vecs.column(k);
            assert!((m * v - v * vals[k]).norm() < 1e-10);
        }
    }

    #[test]
    fn ties_keep_index_order() {
        let (vals, vecs) = sym3_eigen(&Matrix3::identity());
        assert_eq!(vals, Vector3::new(1.0, 1.0, 1.0));
        assert!((vecs.determinant().abs() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn kron_matches_fixed_size() {
        let x = pauli(1).unwrap();
        let z = pauli(3).unwrap();
        let fixed = kron2(&x, &z);
        let dynamic = kron(
            &DMatrix::from_iterator(2, 2, x.iter().copied()),
            &DMatrix::from_iterator(2, 2, z.iter().copied()),
        );
        for r in 0..4 {
            for c in 0..4 {
                assert_eq!(fixed[(r, c)], dynamic[(r, c)]);
            }
        }
    }
}
