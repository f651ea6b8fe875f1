//! Sudden-death times: when a measure first reaches exactly zero along a
//! channel trajectory. Closed forms for the phase-flip family `(u, u, v)`,
//! a generic grid-then-bisect root finder, and the ordering check between
//! the death times of the hierarchy.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use rand::Rng;
use serde::{Serialize, Serializer};

use crate::channels::{evolve_c, ChannelKind, ChannelSpec};
use crate::error::{Error, Result};
use crate::format::fmt_g17;
use crate::measures::{h, inv_binary_entropy, Measure, QParameter};
use crate::roots::bisect;
use crate::states::{ensure_physical, CVector};

/// Upper end of the time scan.
pub const T_MAX: f64 = 50.0;
/// Points in the scan, including `t = 0`.
pub const GRID_POINTS: usize = 512;
/// First nonzero scan point; the rest are geometric up to [`T_MAX`].
pub const T_FIRST: f64 = 1e-3;
pub const TIME_TOL: f64 = 1e-9;
pub const CHRONOLOGY_SLACK: f64 = 1e-8;

/// When a measure first vanishes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DeathTime {
    /// Already zero at `t = 0`.
    BornDead,
    At(f64),
    /// Positive over the whole scan; it only vanishes asymptotically.
    Never,
}

impl DeathTime {
    /// `BornDead` as 0, `Never` as infinity.
    pub fn as_f64(self) -> f64 {
        match self {
            DeathTime::BornDead => 0.0,
            DeathTime::At(t) => t,
            DeathTime::Never => f64::INFINITY,
        }
    }

    pub fn is_born_dead(self) -> bool {
        self == DeathTime::BornDead
    }

    pub fn is_finite_positive(self) -> bool {
        matches!(self, DeathTime::At(_))
    }

    /// `self >= other - slack`, with `Never` above every time.
    pub fn not_before(self, other: DeathTime, slack: f64) -> bool {
        match (self, other) {
            (DeathTime::Never, _) => true,
            (_, DeathTime::Never) => false,
            _ => self.as_f64() >= other.as_f64() - slack,
        }
    }

    /// How far `self` falls short of `other`; 0 when ordered.
    pub fn shortfall(self, other: DeathTime) -> f64 {
        match (self, other) {
            (DeathTime::Never, _) => 0.0,
            (_, DeathTime::Never) => f64::INFINITY,
            _ => (other.as_f64() - self.as_f64()).max(0.0),
        }
    }

    /// Distance between two times; `Never` only matches `Never`.
    pub fn distance(self, other: DeathTime) -> f64 {
        match (self, other) {
            (DeathTime::Never, DeathTime::Never) => 0.0,
            (DeathTime::Never, _) | (_, DeathTime::Never) => f64::INFINITY,
            _ => (self.as_f64() - other.as_f64()).abs(),
        }
    }

    /// CSV cell: `never`, `0` for born dead, otherwise 17 digits.
    pub fn csv_cell(self) -> String {
        match self {
            DeathTime::Never => "never".to_owned(),
            other => fmt_g17(other.as_f64()),
        }
    }
}

impl fmt::Display for DeathTime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.csv_cell())
    }
}

impl Serialize for DeathTime {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            DeathTime::Never => s.serialize_str("never"),
            other => s.serialize_f64(other.as_f64()),
        }
    }
}

/// Death times of every measure along one trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SuddenDeathRecord {
    pub t_dq: DeathTime,
    pub t_e: DeathTime,
    pub t_n: DeathTime,
    pub t_s2e: DeathTime,
    pub t_s3e: DeathTime,
    pub t_s2v: DeathTime,
    pub t_s3v: DeathTime,
}

impl SuddenDeathRecord {
    pub fn get(&self, m: Measure) -> DeathTime {
        match m {
            Measure::Dq => self.t_dq,
            Measure::E => self.t_e,
            Measure::N => self.t_n,
            Measure::S2e => self.t_s2e,
            Measure::S3e => self.t_s3e,
            Measure::S2v => self.t_s2v,
            Measure::S3v => self.t_s3v,
        }
    }
}

/// Initial state `c = (u, u, v)` for the phase-flip closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PfFamilyState {
    u: f64,
    v: f64,
}

impl PfFamilyState {
    pub fn new(u: f64, v: f64) -> Result<Self> {
        if !(v > -1.0 && v < 1.0) {
            return Err(Error::Domain {
                name: "v",
                value: v,
                domain: "(-1, 1)",
            });
        }
        if u.is_nan() || u.abs() > (1.0 - v) / 2.0 {
            return Err(Error::Domain {
                name: "u",
                value: u,
                domain: "[(v - 1)/2, (1 - v)/2]",
            });
        }
        Ok(Self { u, v })
    }

    /// `v` uniform on `(-1, 1)`, then `u` uniform on its allowed interval.
    pub fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let v: f64 = rng.random_range(-1.0..1.0);
            if v == -1.0 {
                continue;
            }
            let half = (1.0 - v) / 2.0;
            let u = rng.random_range(-half..=half);
            return Self { u, v };
        }
    }

    pub fn u(&self) -> f64 {
        self.u
    }

    pub fn v(&self) -> f64 {
        self.v
    }

    pub fn c(&self) -> CVector {
        CVector::from_array([self.u, self.u, self.v]).expect("family parameters lie in [-1, 1]")
    }
}

fn scan_times() -> Vec<f64> {
    let ratio = (T_MAX / T_FIRST).ln() / (GRID_POINTS - 2) as f64;
    let mut ts = Vec::with_capacity(GRID_POINTS);
    ts.push(0.0);
    ts.extend((0..GRID_POINTS - 1).map(|i| T_FIRST * (ratio * i as f64).exp()));
    ts[GRID_POINTS - 1] = T_MAX;
    ts
}

/// Value of `measure` at time `t` on the channel trajectory from `c`.
pub fn measure_at(
    c: &CVector,
    kind: ChannelKind,
    measure: Measure,
    q: QParameter,
    t: f64,
) -> Result<f64> {
    let evolved = evolve_c(c, &ChannelSpec::at_time(kind, t)?);
    measure.evaluate(&evolved, q)
}

/// First time `measure` is exactly zero on the trajectory from `c`.
///
/// Scans `t = 0` plus a geometric grid up to [`T_MAX`], then bisects the
/// first alive-to-dead interval to [`TIME_TOL`]. The returned time is the
/// dead end of the final bracket.
pub fn sudden_death_time(
    c: &CVector,
    kind: ChannelKind,
    measure: Measure,
    q: QParameter,
) -> Result<DeathTime> {
    ensure_physical(c)?;
    let alive = |t: f64| -> bool {
        measure_at(c, kind, measure, q, t)
            .map(|m| m > 0.0)
            .unwrap_or(false)
    };
    if !alive(0.0) {
        return Ok(DeathTime::BornDead);
    }
    let ts = scan_times();
    for w in ts.windows(2) {
        if !alive(w[1]) {
            let (_, hi) = bisect(alive, w[0], w[1], TIME_TOL);
            return Ok(DeathTime::At(hi));
        }
    }
    Ok(DeathTime::Never)
}

pub fn death_record(c: &CVector, kind: ChannelKind, q: QParameter) -> Result<SuddenDeathRecord> {
    let t = |m| sudden_death_time(c, kind, m, q);
    Ok(SuddenDeathRecord {
        t_dq: t(Measure::Dq)?,
        t_e: t(Measure::E)?,
        t_n: t(Measure::N)?,
        t_s2e: t(Measure::S2e)?,
        t_s3e: t(Measure::S3e)?,
        t_s2v: t(Measure::S2v)?,
        t_s3v: t(Measure::S3v)?,
    })
}

fn log_ratio(u: f64, threshold: f64) -> DeathTime {
    let ratio = u.abs() / threshold;
    if ratio > 1.0 {
        DeathTime::At(ratio.ln())
    } else {
        DeathTime::BornDead
    }
}

/// Closed-form phase-flip death times of the `(u, u, v)` family.
/// Variance steering has no closed form here and is rejected.
pub fn sudden_death_closed_pf(s: &PfFamilyState, measure: Measure) -> Result<DeathTime> {
    let (u, v) = (s.u, s.v);
    let t = match measure {
        Measure::Dq if u == 0.0 => DeathTime::BornDead,
        Measure::Dq => DeathTime::Never,
        Measure::E => log_ratio(u, (1.0 + v) / 2.0),
        Measure::N => log_ratio(u, FRAC_1_SQRT_2.min(((1.0 - v) * (1.0 + v)).sqrt())),
        Measure::S2e => log_ratio(u, inv_binary_entropy(0.5f64.max(1.0 - h(v)))?),
        Measure::S3e => log_ratio(u, inv_binary_entropy(1.0 - h(v) / 2.0)?),
        Measure::S2v | Measure::S3v => {
            return Err(Error::Unsupported(format!(
                "the phase-flip death time of {measure}"
            )))
        }
    };
    Ok(t)
}

/// One ordering requirement between two death times: `later >= earlier`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ChronologyLink {
    DqAfterE,
    EAfterN,
    NAfterS2e,
    S3eAfterS2e,
    EAfterS3e,
}

impl ChronologyLink {
    pub const ALL: [ChronologyLink; 5] = [
        ChronologyLink::DqAfterE,
        ChronologyLink::EAfterN,
        ChronologyLink::NAfterS2e,
        ChronologyLink::S3eAfterS2e,
        ChronologyLink::EAfterS3e,
    ];

    /// `(later, earlier)`.
    pub fn measures(self) -> (Measure, Measure) {
        match self {
            ChronologyLink::DqAfterE => (Measure::Dq, Measure::E),
            ChronologyLink::EAfterN => (Measure::E, Measure::N),
            ChronologyLink::NAfterS2e => (Measure::N, Measure::S2e),
            ChronologyLink::S3eAfterS2e => (Measure::S3e, Measure::S2e),
            ChronologyLink::EAfterS3e => (Measure::E, Measure::S3e),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ChronologyLink::DqAfterE => "tDq_ge_tE",
            ChronologyLink::EAfterN => "tE_ge_tN",
            ChronologyLink::NAfterS2e => "tN_ge_tS2e",
            ChronologyLink::S3eAfterS2e => "tS3e_ge_tS2e",
            ChronologyLink::EAfterS3e => "tE_ge_tS3e",
        }
    }

    pub fn holds(self, r: &SuddenDeathRecord) -> bool {
        let (later, earlier) = self.measures();
        r.get(later).not_before(r.get(earlier), CHRONOLOGY_SLACK)
    }

    pub fn shortfall(self, r: &SuddenDeathRecord) -> f64 {
        let (later, earlier) = self.measures();
        r.get(later).shortfall(r.get(earlier))
    }
}

impl fmt::Display for ChronologyLink {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChronologyReport {
    pub record: SuddenDeathRecord,
    pub violations: Vec<ChronologyLink>,
}

impl ChronologyReport {
    pub fn from_record(record: SuddenDeathRecord) -> Self {
        let violations = ChronologyLink::ALL
            .into_iter()
            .filter(|l| !l.holds(&record))
            .collect();
        Self { record, violations }
    }

    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn chronology_check(c: &CVector, kind: ChannelKind, q: QParameter) -> Result<ChronologyReport> {
    Ok(ChronologyReport::from_record(death_record(c, kind, q)?))
}
