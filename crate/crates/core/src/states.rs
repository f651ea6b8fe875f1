//! Two-qubit X states with maximally mixed marginals.
//!
//! An X state is fixed by its correlation vector `c = (c1, c2, c3)`,
//! `rho = (1 + sum_i c_i sigma_i (x) sigma_i) / 4`. This module builds the
//! matrix, its closed-form spectrum, local Pauli rotations, and seeded
//! samplers for the physical region (a tetrahedron inside the cube).

use std::fmt;
use std::str::FromStr;

use nalgebra::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::{csv_line, fmt_g17};
use crate::linalg::{self, c, hermitian_eigenvalues, Mat2, Mat4};

/// Eigenvalues above this (negative) floor count as physical.
pub const PHYSICAL_TOL: f64 = 1e-12;

/// Samples drawn from one RNG stream before the next stream takes over.
pub const CHUNK_SIZE: usize = 1024;

/// Distinct RNG stream ids so that independent draws from the same seed
/// never overlap.
pub mod stream {
    pub const STATES: u64 = 0;
    pub const Q_VALUES: u64 = 1;
    pub const PF_FAMILY: u64 = 2;
}

/// The correlation vector `c` of an X state, each component in `[-1, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CVector([f64; 3]);

impl CVector {
    pub fn new(c1: f64, c2: f64, c3: f64) -> Result<Self> {
        for (index, value) in [c1, c2, c3].into_iter().enumerate() {
            if !(-1.0..=1.0).contains(&value) {
                return Err(Error::ComponentOutOfRange {
                    index: index + 1,
                    value,
                });
            }
        }
        Ok(Self([c1, c2, c3]))
    }

    pub const fn zero() -> Self {
        Self([0.0; 3])
    }

    pub fn from_array(c: [f64; 3]) -> Result<Self> {
        Self::new(c[0], c[1], c[2])
    }

    pub fn c1(&self) -> f64 {
        self.0[0]
    }

    pub fn c2(&self) -> f64 {
        self.0[1]
    }

    pub fn c3(&self) -> f64 {
        self.0[2]
    }

    pub fn as_array(&self) -> [f64; 3] {
        self.0
    }

    /// Largest deviation between two vectors, componentwise.
    pub fn max_abs_diff(&self, other: &CVector) -> f64 {
        (0..3)
            .map(|i| (self.0[i] - other.0[i]).abs())
            .fold(0.0, f64::max)
    }

    pub(crate) fn to_csv_cells(self) -> [String; 3] {
        self.0.map(fmt_g17)
    }
}

impl fmt::Display for CVector {
    /// CSV triple `c1,c2,c3` with 17 significant digits.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&csv_line(self.to_csv_cells()))
    }
}

impl FromStr for CVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parse_err = || Error::Parse {
            what: "c-vector (expected c1,c2,c3)",
            input: s.to_owned(),
        };
        let parts: Vec<f64> = s
            .split(',')
            .map(|p| p.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| parse_err())?;
        match parts.as_slice() {
            &[c1, c2, c3] => Self::new(c1, c2, c3),
            _ => Err(parse_err()),
        }
    }
}

/// Spectrum of an X state in descending order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spectrum4(pub [f64; 4]);

impl Spectrum4 {
    pub fn values(&self) -> [f64; 4] {
        self.0
    }

    pub fn min(&self) -> f64 {
        self.0[3]
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }
}

/// A general two-qubit density matrix: Hermitian, unit trace, positive.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix4(Mat4);

impl DensityMatrix4 {
    pub const HERMITIAN_TOL: f64 = 1e-12;
    pub const TRACE_TOL: f64 = 1e-12;
    pub const EIGEN_TOL: f64 = 1e-10;

    /// Validates and wraps a 4x4 matrix.
    pub fn new(m: Mat4) -> Result<Self> {
        let asym = linalg::max_abs_diff(&m, &m.adjoint());
        if asym.is_nan() || asym > Self::HERMITIAN_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "not Hermitian (max |rho - rho^dagger| = {asym:e})"
            )));
        }
        let trace = m.trace();
        if !((trace.re - 1.0).abs() <= Self::TRACE_TOL && trace.im.abs() <= Self::TRACE_TOL) {
            return Err(Error::InvalidDensityMatrix(format!(
                "trace {trace} differs from 1"
            )));
        }
        let min_eig = hermitian_eigenvalues(&m)[3];
        if min_eig < -Self::EIGEN_TOL {
            return Err(Error::NonPhysical {
                eigenvalue: min_eig,
            });
        }
        Ok(Self(m))
    }

    pub fn matrix(&self) -> &Mat4 {
        &self.0
    }

    pub fn into_matrix(self) -> Mat4 {
        self.0
    }

    /// Eigenvalues from the generic Hermitian eigensolver, descending.
    pub fn eigenvalues(&self) -> [f64; 4] {
        hermitian_eigenvalues(&self.0)
    }

    /// `Re Tr(rho * op)`.
    pub fn expectation(&self, op: &Mat4) -> f64 {
        linalg::trace_product_re(&self.0, op)
    }

    /// `c_i = Tr(rho sigma_i (x) sigma_i)`. Exact for X states; for other
    /// states it is only the diagonal of the correlation matrix.
    pub fn correlation_vector(&self) -> [f64; 3] {
        [1, 2, 3].map(|i| self.expectation(&linalg::pauli2(i, i)))
    }

    /// Conjugates by `a (x) b`.
    pub fn conjugate_local(&self, a: &Mat2, b: &Mat2) -> Mat4 {
        let u = linalg::kron(a, b);
        u * self.0 * u.adjoint()
    }
}

impl fmt::Display for DensityMatrix4 {
    /// 16 comma-separated `re+imi` entries, row-major.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells = (0..4)
            .flat_map(|r| (0..4).map(move |col| (r, col)))
            .map(|(r, col)| {
                let z = self.0[(r, col)];
                let sign = if z.im < 0.0 { '-' } else { '+' };
                format!("{}{}{}i", fmt_g17(z.re), sign, fmt_g17(z.im.abs()))
            });
        f.write_str(&csv_line(cells))
    }
}

/// The X-state matrix for `c`: diagonal `(1 +- c3)/4`, anti-diagonal
/// `(c1 -+ c2)/4`.
pub fn density_matrix(cv: &CVector) -> DensityMatrix4 {
    let [c1, c2, c3] = cv.0;
    let d_plus = c((1.0 + c3) / 4.0, 0.0);
    let d_minus = c((1.0 - c3) / 4.0, 0.0);
    let outer = c((c1 - c2) / 4.0, 0.0);
    let inner = c((c1 + c2) / 4.0, 0.0);
    let z = c(0.0, 0.0);
    #[rustfmt::skip]
    let m = Mat4::new(
        d_plus, z,       z,       outer,
        z,      d_minus, inner,   z,
        z,      inner,   d_minus, z,
        outer,  z,       z,       d_plus,
    );
    DensityMatrix4(m)
}

/// Closed-form eigenvalues `(1 + c3 +- (c1 - c2))/4`, `(1 - c3 +- (c1 + c2))/4`.
pub fn spectrum(cv: &CVector) -> Spectrum4 {
    let [c1, c2, c3] = cv.0;
    let mut v = [
        (1.0 + c3 + (c1 - c2)) / 4.0,
        (1.0 + c3 - (c1 - c2)) / 4.0,
        (1.0 - c3 + (c1 + c2)) / 4.0,
        (1.0 - c3 - (c1 + c2)) / 4.0,
    ];
    v.sort_by(|a, b| b.total_cmp(a));
    Spectrum4(v)
}

pub fn is_physical(cv: &CVector) -> bool {
    spectrum(cv).min() >= -PHYSICAL_TOL
}

/// Errors with the offending eigenvalue when `cv` is not a state.
pub fn ensure_physical(cv: &CVector) -> Result<()> {
    let min = spectrum(cv).min();
    if min >= -PHYSICAL_TOL {
        Ok(())
    } else {
        Err(Error::NonPhysical { eigenvalue: min })
    }
}

/// Effect of `exp(i pi sigma_k / 2) (x) 1` on `c`: flips the two
/// components other than `k`.
pub fn local_rotation(cv: &CVector, k: u8) -> Result<CVector> {
    let [c1, c2, c3] = cv.0;
    let out = match k {
        1 => [c1, -c2, -c3],
        2 => [-c1, c2, -c3],
        3 => [-c1, -c2, c3],
        _ => return Err(Error::InvalidAxis(k)),
    };
    Ok(CVector(out))
}

/// `exp(i pi sigma_k / 2) = cos(pi/2) 1 + i sin(pi/2) sigma_k`.
pub fn rotation_unitary(k: u8) -> Result<Mat2> {
    if !(1..=3).contains(&k) {
        return Err(Error::InvalidAxis(k));
    }
    let half = std::f64::consts::FRAC_PI_2;
    Ok(linalg::pauli(0) * c(half.cos(), 0.0) + linalg::pauli(k as usize) * c(0.0, half.sin()))
}

/// `(U_k (x) 1) rho (U_k^dagger (x) 1)` on the full matrix.
pub fn local_rotation_matrix(rho: &DensityMatrix4, k: u8) -> Result<DensityMatrix4> {
    let u = rotation_unitary(k)?;
    DensityMatrix4::new(rho.conjugate_local(&u, &linalg::pauli(0)))
}

/// RNG for one chunk of a seeded sweep: seeded with `seed + chunk`, with a
/// separate stream per purpose.
pub fn chunk_rng(seed: u64, chunk: u64, purpose: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(chunk));
    rng.set_stream(purpose);
    rng
}

/// Uniform draw on the cube, rejected until physical.
pub fn sample_physical<R: Rng + ?Sized>(rng: &mut R) -> CVector {
    loop {
        let cv = CVector([
            rng.random_range(-1.0..=1.0),
            rng.random_range(-1.0..=1.0),
            rng.random_range(-1.0..=1.0),
        ]);
        if is_physical(&cv) {
            return cv;
        }
    }
}

/// Number of chunks covering `n` samples.
pub fn chunk_count(n: usize) -> usize {
    n.div_ceil(CHUNK_SIZE)
}

/// Samples in chunk `chunk` of an `n`-sample sweep.
pub fn chunk_len(n: usize, chunk: usize) -> usize {
    CHUNK_SIZE.min(n - chunk * CHUNK_SIZE)
}

/// `n` physical c-vectors by rejection sampling, identical for identical
/// `(n, seed)`. Chunk `k` of 1024 samples draws from `chunk_rng(seed, k, 0)`.
pub fn sample_states(n: usize, seed: u64) -> Result<Vec<CVector>> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "sample count must be at least 1".into(),
        ));
    }
    let mut out = Vec::with_capacity(n);
    for chunk in 0..chunk_count(n) {
        let mut rng = chunk_rng(seed, chunk as u64, stream::STATES);
        out.extend((0..chunk_len(n, chunk)).map(|_| sample_physical(&mut rng)));
    }
    Ok(out)
}

/// Haar-random single-qubit unitary.
pub fn random_unitary2<R: Rng + ?Sized>(rng: &mut R) -> Mat2 {
    // Uniform unit quaternion via normalized Gaussian 4-vector.
    let mut q = [0.0f64; 4];
    loop {
        for x in q.iter_mut() {
            *x = gaussian(rng);
        }
        let norm = q.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-8 {
            q.iter_mut().for_each(|x| *x /= norm);
            break;
        }
    }
    let [a, b, cc, d] = q;
    Mat2::new(c(a, b), c(cc, d), c(-cc, d), c(a, -b))
}

/// Random full-rank two-qubit state `G G^dagger / Tr` from a complex
/// Ginibre matrix `G`. Not an X state in general.
pub fn random_density_matrix<R: Rng + ?Sized>(rng: &mut R) -> DensityMatrix4 {
    let g = Mat4::from_fn(|_, _| Complex::new(gaussian(rng), gaussian(rng)));
    let mut m = g * g.adjoint();
    let tr = m.trace().re;
    m /= c(tr, 0.0);
    m = (m + m.adjoint()) * c(0.5, 0.0);
    DensityMatrix4::new(m).expect("Ginibre construction is a valid state")
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    // Box-Muller; one value per call is plenty here.
    let u1: f64 = 1.0 - rng.random::<f64>();
    let u2: f64 = rng.random::<f64>();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}
