//! Local decoherence channels applied identically to both qubits: Kraus
//! sets, their generic action on a 4x4 state, the closed-form map on `c`
//! for X states, and the exponential time schedule.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, c, Mat2, Mat4};
use crate::states::{CVector, DensityMatrix4};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChannelKind {
    /// Bit flip.
    Bf,
    /// Bit-phase flip.
    Bpf,
    /// Phase flip.
    Pf,
    /// Depolarizing.
    Dp,
    /// Generalized amplitude damping at infinite temperature.
    Gad,
}

impl ChannelKind {
    pub const ALL: [ChannelKind; 5] = [
        ChannelKind::Bf,
        ChannelKind::Bpf,
        ChannelKind::Pf,
        ChannelKind::Dp,
        ChannelKind::Gad,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ChannelKind::Bf => "bf",
            ChannelKind::Bpf => "bpf",
            ChannelKind::Pf => "pf",
            ChannelKind::Dp => "dp",
            ChannelKind::Gad => "gad",
        }
    }
}

impl fmt::Display for ChannelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ChannelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ChannelKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Parse {
                what: "channel (expected bf|bpf|pf|dp|gad)",
                input: s.to_owned(),
            })
    }
}

/// A channel kind with its decoherence parameter (`p`, or `gamma` for GAD).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelSpec {
    kind: ChannelKind,
    parameter: f64,
}

impl ChannelSpec {
    pub fn new(kind: ChannelKind, parameter: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&parameter) {
            return Err(Error::Domain {
                name: "channel parameter",
                value: parameter,
                domain: "[0, 1]",
            });
        }
        Ok(Self { kind, parameter })
    }

    /// The channel at dimensionless time `t` under [`decoherence_schedule`].
    pub fn at_time(kind: ChannelKind, t: f64) -> Result<Self> {
        Self::new(kind, decoherence_schedule(t)?)
    }

    pub fn kind(&self) -> ChannelKind {
        self.kind
    }

    pub fn parameter(&self) -> f64 {
        self.parameter
    }
}

/// Single-qubit Kraus operators.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausSet(pub Vec<Mat2>);

impl KrausSet {
    pub fn operators(&self) -> &[Mat2] {
        &self.0
    }

    /// `max |sum_i E_i^dagger E_i - 1|` entrywise.
    pub fn completeness_error(&self) -> f64 {
        let sum = self
            .0
            .iter()
            .fold(Mat2::zeros(), |acc, e| acc + e.adjoint() * e);
        (sum - Mat2::identity())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}

pub fn kraus_set(spec: &ChannelSpec) -> KrausSet {
    let p = spec.parameter;
    let scaled = |w: f64, i: usize| linalg::pauli(i) * c(w.sqrt(), 0.0);
    let ops = match spec.kind {
        ChannelKind::Bf => vec![scaled(1.0 - p / 2.0, 0), scaled(p / 2.0, 1)],
        ChannelKind::Bpf => vec![scaled(1.0 - p / 2.0, 0), scaled(p / 2.0, 2)],
        ChannelKind::Pf => vec![scaled(1.0 - p / 2.0, 0), scaled(p / 2.0, 3)],
        ChannelKind::Dp => vec![
            scaled(1.0 - 3.0 * p / 4.0, 0),
            scaled(p / 4.0, 1),
            scaled(p / 4.0, 2),
            scaled(p / 4.0, 3),
        ],
        ChannelKind::Gad => {
            let k = std::f64::consts::FRAC_1_SQRT_2;
            let damp = (1.0 - p).sqrt();
            let jump = p.sqrt();
            let m = |a: f64, b: f64, cc: f64, d: f64| {
                Mat2::new(c(k * a, 0.0), c(k * b, 0.0), c(k * cc, 0.0), c(k * d, 0.0))
            };
            vec![
                m(1.0, 0.0, 0.0, damp),
                m(0.0, jump, 0.0, 0.0),
                m(damp, 0.0, 0.0, 1.0),
                m(0.0, 0.0, jump, 0.0),
            ]
        }
    };
    KrausSet(ops)
}

/// Applies any Kraus set to both qubits:
/// `sum_ij (E_i (x) E_j) rho (E_i (x) E_j)^dagger`.
pub fn apply_kraus(rho: &DensityMatrix4, kraus: &KrausSet) -> Result<DensityMatrix4> {
    let m = rho.matrix();
    let mut out = Mat4::zeros();
    for ei in kraus.operators() {
        for ej in kraus.operators() {
            let k = linalg::kron(ei, ej);
            out += k * m * k.adjoint();
        }
    }
    out = (out + out.adjoint()) * c(0.5, 0.0);
    DensityMatrix4::new(out)
}

pub fn apply_channel_matrix(rho: &DensityMatrix4, spec: &ChannelSpec) -> Result<DensityMatrix4> {
    apply_kraus(rho, &kraus_set(spec))
}

/// Closed-form image of an X state's `c` under the channel on both qubits.
pub fn evolve_c(cv: &CVector, spec: &ChannelSpec) -> CVector {
    let [c1, c2, c3] = cv.as_array();
    let keep = 1.0 - spec.parameter;
    let sq = keep * keep;
    let out = match spec.kind {
        ChannelKind::Bf => [c1, c2 * sq, c3 * sq],
        ChannelKind::Bpf => [c1 * sq, c2, c3 * sq],
        ChannelKind::Pf => [c1 * sq, c2 * sq, c3],
        ChannelKind::Dp => [c1 * sq, c2 * sq, c3 * sq],
        ChannelKind::Gad => [c1 * keep, c2 * keep, c3 * sq],
    };
    CVector::from_array(out).expect("contractions keep |c_i| <= 1")
}

/// `p(t) = gamma(t) = 1 - exp(-t/2)` with relaxation rate 1.
pub fn decoherence_schedule(t: f64) -> Result<f64> {
    if t.is_nan() || t < 0.0 {
        return Err(Error::Domain {
            name: "t",
            value: t,
            domain: "t >= 0",
        });
    }
    Ok(-(-0.5 * t).exp_m1())
}

/// Inverse of [`decoherence_schedule`]; `p = 1` maps to infinity.
pub fn schedule_time(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain {
            name: "p",
            value: p,
            domain: "[0, 1]",
        });
    }
    Ok(-2.0 * (-p).ln_1p())
}
