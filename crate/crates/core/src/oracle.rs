//! Brute-force evaluation of the correlation measures from their
//! definitions, on arbitrary two-qubit density matrices.
//!
//! Nothing here uses the X-state closed forms: discord is minimized over
//! projective measurements on B, concurrence goes through the spin-flipped
//! state, CHSH through the correlation matrix (with a direct search over
//! measurement settings as a second route), and the steering functionals
//! through Pauli expectation values and joint outcome distributions.

use std::f64::consts::{LN_2, PI, TAU};

use nalgebra::{Matrix3, SymmetricEigen, Vector2, Vector3};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, c, hermitian_eigenvalues, hermitian_eigenvalues2, Mat2, Mat4, C64};
use crate::measures::{QParameter, Q_LIMIT_TOL};
use crate::optim::nelder_mead;
use crate::states::{chunk_rng, DensityMatrix4};

/// Points per axis of the coarse (theta, phi) grid for discord.
pub const DISCORD_GRID: usize = 64;
/// Random restarts for the direct CHSH search.
pub const CHSH_RESTARTS: usize = 32;
/// Eigenvalues of `rho rho~` down to this are treated as round-off zeros.
pub const SPIN_FLIP_NEG_TOL: f64 = 1e-10;

/// An orthogonal pair of rank-one projectors on qubit B, along the Bloch
/// direction `(theta, phi)` and its antipode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProjectivePair {
    pub theta: f64,
    pub phi: f64,
}

impl ProjectivePair {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&theta) {
            return Err(Error::Domain {
                name: "theta",
                value: theta,
                domain: "[0, pi]",
            });
        }
        if !(0.0..TAU).contains(&phi) {
            return Err(Error::Domain {
                name: "phi",
                value: phi,
                domain: "[0, 2 pi)",
            });
        }
        Ok(Self { theta, phi })
    }

    /// Folds arbitrary angles onto the canonical ranges.
    fn canonical(theta: f64, phi: f64) -> Self {
        let mut theta = theta.rem_euclid(TAU);
        let mut phi = phi;
        if theta > PI {
            theta = TAU - theta;
            phi += PI;
        }
        Self {
            theta,
            phi: phi.rem_euclid(TAU),
        }
    }

    fn kets(theta: f64, phi: f64) -> [Vector2<C64>; 2] {
        let (s, co) = (0.5 * theta).sin_cos();
        let phase = C64::from_polar(1.0, phi);
        [
            Vector2::new(c(co, 0.0), phase * s),
            Vector2::new(-phase.conj() * s, c(co, 0.0)),
        ]
    }

    pub fn projectors(&self) -> [Mat2; 2] {
        Self::kets(self.theta, self.phi).map(|v| v * v.adjoint())
    }
}

/// Measurement directions for CHSH: Alice `a`, `a'`, Bob `b`, `b'`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChshSettings {
    pub a: [f64; 3],
    pub a_prime: [f64; 3],
    pub b: [f64; 3],
    pub b_prime: [f64; 3],
}

impl ChshSettings {
    /// `|Tr(rho B)|` with `B = a.s (x) (b + b').s + a'.s (x) (b - b').s`.
    pub fn value(&self, rho: &DensityMatrix4) -> f64 {
        let plus = add(self.b, self.b_prime, 1.0);
        let minus = add(self.b, self.b_prime, -1.0);
        let op = linalg::kron(&spin(self.a), &spin(plus))
            + linalg::kron(&spin(self.a_prime), &spin(minus));
        rho.expectation(&op).abs()
    }

    pub fn max_norm_error(&self) -> f64 {
        [self.a, self.a_prime, self.b, self.b_prime]
            .iter()
            .map(|v| (Vector3::from(*v).norm() - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

fn add(u: [f64; 3], v: [f64; 3], sign: f64) -> [f64; 3] {
    [u[0] + sign * v[0], u[1] + sign * v[1], u[2] + sign * v[2]]
}

/// `n . sigma` for any (not necessarily unit) vector.
fn spin(n: [f64; 3]) -> Mat2 {
    (1..=3).fold(Mat2::zeros(), |acc, i| {
        acc + linalg::pauli(i) * c(n[i - 1], 0.0)
    })
}

fn unit(theta: f64, phi: f64) -> [f64; 3] {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    [st * cp, st * sp, ct]
}

/// Tsallis entropy in nats, von Neumann at `q = 1`.
fn tsallis(eigs: &[f64], q: QParameter) -> f64 {
    let qv = q.value();
    if (qv - 1.0).abs() < Q_LIMIT_TOL {
        -eigs
            .iter()
            .filter(|&&l| l > 0.0)
            .map(|&l| l * l.ln())
            .sum::<f64>()
    } else {
        let tr: f64 = eigs.iter().map(|&l| l.max(0.0).powf(qv)).sum();
        (1.0 - tr) / (qv - 1.0)
    }
}

/// Unnormalized conditional states `<v|_B rho |v>_B` on A for the two kets.
fn conditional_blocks(rho: &Mat4, kets: &[Vector2<C64>; 2]) -> [Mat2; 2] {
    kets.map(|v| {
        Mat2::from_fn(|a, a2| {
            let mut acc = c(0.0, 0.0);
            for beta in 0..2 {
                for beta2 in 0..2 {
                    acc += v[beta].conj() * rho[(2 * a + beta, 2 * a2 + beta2)] * v[beta2];
                }
            }
            acc
        })
    })
}

/// Post-measurement entropy `S_q(Pi_B[rho])` in nats.
fn measured_entropy(rho: &Mat4, theta: f64, phi: f64, q: QParameter) -> f64 {
    let blocks = conditional_blocks(rho, &ProjectivePair::kets(theta, phi));
    let [a, b] = hermitian_eigenvalues2(&blocks[0]);
    let [d, e] = hermitian_eigenvalues2(&blocks[1]);
    tsallis(&[a, b, d, e], q)
}

/// q-discord in bits with its minimizing measurement.
pub fn q_discord_oracle_with_measurement(
    rho: &DensityMatrix4,
    q: QParameter,
) -> Result<(f64, ProjectivePair)> {
    let m = rho.matrix();
    let s_rho = tsallis(&rho.eigenvalues(), q);
    let objective = |theta: f64, phi: f64| measured_entropy(m, theta, phi, q);

    let mut grid = Vec::with_capacity(DISCORD_GRID * DISCORD_GRID);
    for i in 0..DISCORD_GRID {
        let theta = PI * i as f64 / (DISCORD_GRID - 1) as f64;
        for j in 0..DISCORD_GRID {
            let phi = TAU * j as f64 / DISCORD_GRID as f64;
            grid.push((objective(theta, phi), theta, phi));
        }
    }
    grid.sort_by(|a, b| a.0.total_cmp(&b.0));

    let step = PI / (DISCORD_GRID - 1) as f64;
    let mut best = (f64::INFINITY, 0.0, 0.0);
    for &(_, theta, phi) in grid.iter().take(3) {
        let min = nelder_mead(|p| objective(p[0], p[1]), &[theta, phi], step, 1e-9, 2000);
        if min.value < best.0 {
            best = (min.value, min.x[0], min.x[1]);
        }
    }
    if !best.0.is_finite() {
        return Err(Error::Numerical("discord objective is not finite".into()));
    }
    let value = ((best.0 - s_rho) / LN_2).max(0.0);
    Ok((value, ProjectivePair::canonical(best.1, best.2)))
}

/// `min_{Pi_B} [S_q(Pi_B[rho]) - S_q(rho)] / ln 2` over projective
/// measurements on B: a 64x64 Bloch-angle grid refined by Nelder-Mead.
pub fn q_discord_oracle(rho: &DensityMatrix4, q: QParameter) -> Result<f64> {
    q_discord_oracle_with_measurement(rho, q).map(|(v, _)| v)
}

/// Wootters concurrence `max{0, sqrt(l1) - sqrt(l2) - sqrt(l3) - sqrt(l4)}`
/// with `l_i` the eigenvalues of `rho rho~`, `rho~ = (Y (x) Y) rho* (Y (x) Y)`.
///
/// The spectrum of `rho rho~` is read off the Hermitian matrix
/// `sqrt(rho) rho~ sqrt(rho)`, which is similar to it.
pub fn concurrence_oracle(rho: &DensityMatrix4) -> Result<f64> {
    let m = rho.matrix();
    let yy = linalg::pauli2(2, 2);
    let flipped = yy * m.conjugate() * yy;
    let root = linalg::psd_sqrt(m);
    let mut r = root * flipped * root;
    r = (r + r.adjoint()) * c(0.5, 0.0);
    let eigs = hermitian_eigenvalues(&r);
    let mut roots = [0.0; 4];
    for (slot, &l) in roots.iter_mut().zip(&eigs) {
        if l < -SPIN_FLIP_NEG_TOL {
            return Err(Error::Numerical(format!(
                "rho rho~ has eigenvalue {l:e} below -{SPIN_FLIP_NEG_TOL:e}"
            )));
        }
        *slot = l.max(0.0).sqrt();
    }
    Ok((roots[0] - roots[1] - roots[2] - roots[3]).max(0.0))
}

/// `T_ij = Tr(rho sigma_i (x) sigma_j)`.
pub fn correlation_matrix(rho: &DensityMatrix4) -> Matrix3<f64> {
    Matrix3::from_fn(|i, j| rho.expectation(&linalg::pauli2(i + 1, j + 1)))
}

/// Maximal CHSH value `2 sqrt(t1 + t2)`, `t1, t2` the two largest
/// eigenvalues of `T^T T`.
pub fn chsh_max_oracle(rho: &DensityMatrix4) -> Result<f64> {
    let t = correlation_matrix(rho);
    let mut eigs: Vec<f64> = SymmetricEigen::new(t.transpose() * t)
        .eigenvalues
        .iter()
        .copied()
        .collect();
    eigs.sort_by(|a, b| b.total_cmp(a));
    let sum = eigs[0] + eigs[1];
    if !sum.is_finite() {
        return Err(Error::Numerical("non-finite correlation matrix".into()));
    }
    Ok(2.0 * sum.max(0.0).sqrt())
}

/// Bell nonlocality from a CHSH maximum.
pub fn nonlocality_from_chsh(b_max: f64) -> f64 {
    (b_max * b_max / 4.0 - 1.0).max(0.0).sqrt()
}

/// Direct maximization of `|Tr(rho B_CHSH)|` over measurement settings.
///
/// For fixed Bob directions the best Alice directions are the normalized
/// vectors `x_i = Tr(rho sigma_i (x) (b + b').sigma)` and likewise with
/// `b - b'`, giving `|x| + |y|`; the four Bob angles are searched with
/// Nelder-Mead from `restarts` random starts.
pub fn chsh_direct_search(rho: &DensityMatrix4, restarts: usize, seed: u64) -> (f64, ChshSettings) {
    let alice_vectors = |p: &[f64]| -> ([f64; 3], [f64; 3], [f64; 3], [f64; 3]) {
        let b = unit(p[0], p[1]);
        let b2 = unit(p[2], p[3]);
        let plus = spin(add(b, b2, 1.0));
        let minus = spin(add(b, b2, -1.0));
        let x = [1, 2, 3].map(|i| rho.expectation(&linalg::kron(&linalg::pauli(i), &plus)));
        let y = [1, 2, 3].map(|i| rho.expectation(&linalg::kron(&linalg::pauli(i), &minus)));
        (x, y, b, b2)
    };
    let norm = |v: [f64; 3]| Vector3::from(v).norm();
    let objective = |p: &[f64]| {
        let (x, y, _, _) = alice_vectors(p);
        -(norm(x) + norm(y))
    };

    let mut rng = chunk_rng(seed, 0, 0x0c45);
    let mut best: Option<(f64, Vec<f64>)> = None;
    for _ in 0..restarts.max(1) {
        let start: Vec<f64> = (0..4)
            .map(|i| {
                if i % 2 == 0 {
                    rng.random_range(0.0..PI)
                } else {
                    rng.random_range(0.0..TAU)
                }
            })
            .collect();
        let min = nelder_mead(objective, &start, 0.4, 1e-10, 4000);
        if best.as_ref().is_none_or(|(v, _)| min.value < *v) {
            best = Some((min.value, min.x));
        }
    }
    let (_, p) = best.expect("at least one restart");
    let (x, y, b, b_prime) = alice_vectors(&p);
    let direction = |v: [f64; 3]| {
        let n = norm(v);
        if n > 0.0 {
            v.map(|e| e / n)
        } else {
            [0.0, 0.0, 1.0]
        }
    };
    let settings = ChshSettings {
        a: direction(x),
        a_prime: direction(y),
        b,
        b_prime,
    };
    (settings.value(rho), settings)
}

fn check_subset(alpha: &[usize]) -> Result<()> {
    let mut seen = [false; 4];
    let ok = matches!(alpha.len(), 2 | 3)
        && alpha.iter().all(|&i| {
            let fresh = (1..=3).contains(&i) && !seen[i];
            if fresh {
                seen[i] = true;
            }
            fresh
        });
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidSubset(alpha.to_vec()))
    }
}

/// `F^alpha = |sum_{i in alpha} Tr(rho sigma_i (x) sigma_i)|`.
pub fn steering_f_oracle(rho: &DensityMatrix4, alpha: &[usize]) -> Result<f64> {
    check_subset(alpha)?;
    Ok(alpha
        .iter()
        .map(|&i| rho.expectation(&linalg::pauli2(i, i)))
        .sum::<f64>()
        .abs())
}

fn shannon_bits(ps: &[f64]) -> f64 {
    -ps.iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| p * p.log2())
        .sum::<f64>()
}

/// `H(sigma_i^B | sigma_i^A)` in bits from the joint outcome distribution.
pub fn conditional_entropy(rho: &DensityMatrix4, i: usize) -> f64 {
    let s = linalg::pauli(i);
    let id = linalg::pauli(0);
    let half = c(0.5, 0.0);
    let proj = [(id + s) * half, (id - s) * half];
    let mut joint = [0.0; 4];
    for ea in 0..2 {
        for eb in 0..2 {
            joint[2 * ea + eb] = rho
                .expectation(&linalg::kron(&proj[ea], &proj[eb]))
                .max(0.0);
        }
    }
    let alice = [joint[0] + joint[1], joint[2] + joint[3]];
    shannon_bits(&joint) - shannon_bits(&alice)
}

/// `G^alpha = sum_{i in alpha} H(sigma_i^B | sigma_i^A)`.
pub fn steering_g_oracle(rho: &DensityMatrix4, alpha: &[usize]) -> Result<f64> {
    check_subset(alpha)?;
    Ok(alpha.iter().map(|&i| conditional_entropy(rho, i)).sum())
}
