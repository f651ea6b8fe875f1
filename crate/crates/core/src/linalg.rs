//! Small fixed-size complex linear algebra for two-qubit states.

use nalgebra::{Complex, Matrix2, Matrix4, SymmetricEigen};

pub type C64 = Complex<f64>;
pub type Mat2 = Matrix2<C64>;
pub type Mat4 = Matrix4<C64>;

pub(crate) const fn c(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

/// Pauli matrix `sigma_i`, with index 0 the identity.
pub fn pauli(i: usize) -> Mat2 {
    let (o, l, j) = (c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0));
    match i {
        0 => Mat2::new(l, o, o, l),
        1 => Mat2::new(o, l, l, o),
        2 => Mat2::new(o, -j, j, o),
        3 => Mat2::new(l, o, o, -l),
        _ => panic!("Pauli index {i} out of range"),
    }
}

pub fn kron(a: &Mat2, b: &Mat2) -> Mat4 {
    Mat4::from_fn(|r, col| a[(r / 2, col / 2)] * b[(r % 2, col % 2)])
}

/// `sigma_i (x) sigma_j`.
pub fn pauli2(i: usize, j: usize) -> Mat4 {
    kron(&pauli(i), &pauli(j))
}

/// Real part of `Tr(a b)` without forming the product.
pub fn trace_product_re(a: &Mat4, b: &Mat4) -> f64 {
    let mut acc = 0.0;
    for i in 0..4 {
        for k in 0..4 {
            acc += (a[(i, k)] * b[(k, i)]).re;
        }
    }
    acc
}

/// Eigenvalues of a Hermitian 4x4 matrix in descending order.
pub fn hermitian_eigenvalues(m: &Mat4) -> [f64; 4] {
    let eig = SymmetricEigen::new(*m);
    let mut v = [
        eig.eigenvalues[0],
        eig.eigenvalues[1],
        eig.eigenvalues[2],
        eig.eigenvalues[3],
    ];
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

/// Eigenvalues of a Hermitian 2x2 matrix, larger first.
pub fn hermitian_eigenvalues2(m: &Mat2) -> [f64; 2] {
    let a = m[(0, 0)].re;
    let d = m[(1, 1)].re;
    let mean = 0.5 * (a + d);
    let half_gap = (0.25 * (a - d) * (a - d) + m[(0, 1)].norm_sqr()).sqrt();
    [mean + half_gap, mean - half_gap]
}

/// Principal square root of a positive semidefinite Hermitian matrix.
pub fn psd_sqrt(m: &Mat4) -> Mat4 {
    let eig = SymmetricEigen::new(*m);
    let roots = eig.eigenvalues.map(|l| c(l.max(0.0).sqrt(), 0.0));
    let v = eig.eigenvectors;
    v * Mat4::from_diagonal(&roots) * v.adjoint()
}

pub fn max_abs_diff(a: &Mat4, b: &Mat4) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}
