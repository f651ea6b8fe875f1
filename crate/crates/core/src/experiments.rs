//! Seeded Monte-Carlo sweeps: the hierarchy audit, the local-rotation
//! invariance scan, the boundary curves, and the sudden-death sweep, each
//! with its CSV datasets and a JSON-serializable report.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::channels::ChannelKind;
use crate::dynamics::{
    death_record, sudden_death_closed_pf, ChronologyLink, DeathTime, PfFamilyState,
    SuddenDeathRecord,
};
use crate::error::{Error, Result};
use crate::format::{csv_line, fmt_g17};
use crate::measures::{
    all_measures, f_q, h, inv_binary_entropy, inv_f_q, Measure, MeasureRecord, QParameter,
};
use crate::states::{
    chunk_count, chunk_len, chunk_rng, ensure_physical, local_rotation, sample_states, stream,
    CVector,
};

pub const HIERARCHY_SLACK: f64 = 1e-10;
pub const INVARIANCE_TOL: f64 = 1e-12;
pub const CURVE_TOL: f64 = 1e-12;
pub const CLOSED_FORM_TOL: f64 = 1e-6;
/// Range of `q` when it is drawn per sample.
pub const Q_RANGE: (f64, f64) = (1.0, 4.0);

/// How `q` is chosen for each sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QMode {
    Fixed(QParameter),
    /// Uniform on [`Q_RANGE`], one draw per sample.
    Uniform,
}

impl fmt::Display for QMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QMode::Fixed(q) => f.write_str(&fmt_g17(q.value())),
            QMode::Uniform => write!(f, "uniform[{},{}]", Q_RANGE.0, Q_RANGE.1),
        }
    }
}

impl FromStr for QMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random" | "uniform" => Ok(QMode::Uniform),
            _ => {
                let v: f64 = s.parse().map_err(|_| Error::Parse {
                    what: "q (expected a positive number or `random`)",
                    input: s.to_owned(),
                })?;
                Ok(QMode::Fixed(QParameter::new(v)?))
            }
        }
    }
}

impl QMode {
    /// One `q` per sample, chunked like [`sample_states`].
    pub fn values(self, n: usize, seed: u64) -> Vec<QParameter> {
        match self {
            QMode::Fixed(q) => vec![q; n],
            QMode::Uniform => (0..chunk_count(n))
                .flat_map(|chunk| {
                    let mut rng = chunk_rng(seed, chunk as u64, stream::Q_VALUES);
                    (0..chunk_len(n, chunk))
                        .map(|_| {
                            QParameter::new(rng.random_range(Q_RANGE.0..=Q_RANGE.1))
                                .expect("q >= 1")
                        })
                        .collect::<Vec<_>>()
                })
                .collect(),
        }
    }
}

fn check_count(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "sample count must be at least 1".into(),
        ));
    }
    Ok(())
}

/// Count and largest size of the failures of one check.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
struct Tally {
    count: u64,
    max: f64,
}

impl Tally {
    fn record(&mut self, excess: f64, slack: f64) {
        if excess > slack {
            self.count += 1;
        }
        self.max = self.max.max(excess);
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.count += other.count;
        self.max = self.max.max(other.max);
        self
    }
}

type Tallies = BTreeMap<&'static str, Tally>;

fn merge_tallies(mut a: Tallies, b: Tallies) -> Tallies {
    for (k, t) in b {
        let entry = a.entry(k).or_default();
        *entry = entry.merge(t);
    }
    a
}

/// Summary of one sweep. `max_violation` holds the largest excess over the
/// check's bound, 0 when every sample satisfies it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub sweep: &'static str,
    pub n: usize,
    pub seed: u64,
    pub q_mode: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub channel: Option<ChannelKind>,
    pub violations: BTreeMap<String, u64>,
    pub max_violation: BTreeMap<String, f64>,
    pub elapsed_s: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<InvarianceWitness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub non_invariant: Option<BTreeMap<String, DeviationSummary>>,
}

impl SweepReport {
    fn new(
        sweep: &'static str,
        n: usize,
        seed: u64,
        q_mode: QMode,
        tallies: Tallies,
        start: Instant,
    ) -> Self {
        Self {
            sweep,
            n,
            seed,
            q_mode: q_mode.to_string(),
            channel: None,
            violations: tallies
                .iter()
                .map(|(k, t)| (k.to_string(), t.count))
                .collect(),
            max_violation: tallies
                .iter()
                .map(|(k, t)| (k.to_string(), t.max))
                .collect(),
            elapsed_s: Some(start.elapsed().as_secs_f64()),
            witness: None,
            non_invariant: None,
        }
    }

    pub fn total_violations(&self) -> u64 {
        self.violations.values().sum()
    }

    pub fn passed(&self) -> bool {
        self.total_violations() == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report fields serialize")
    }
}

// ---------------------------------------------------------------- hierarchy

/// One inequality of the hierarchy audit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HierarchyCheck {
    /// `sqrt(2^q ln2 D_q / q) >= E`.
    TaylorDqGeE,
    /// `D_q >= f_q(E)`.
    DqGeFqE,
    /// `D_q >= f_4(E)`, applied when `q` lies in `[1, 4]`.
    DqGeF4E,
    EGeN,
    NGeS2e,
    S3eGeS2e,
    EGeS3e,
    /// `f_q^{-1}(D_q) >= E`.
    InvFqDqGeE,
    /// `N >= h^{-1}(1 - S2e)` when `S2e > 0`.
    NGeInvHS2e,
    /// `h^{-1}(1 - S3e) <= E` when `S3e > 0`.
    InvHS3eLeE,
}

impl HierarchyCheck {
    pub const ALL: [HierarchyCheck; 10] = [
        HierarchyCheck::TaylorDqGeE,
        HierarchyCheck::DqGeFqE,
        HierarchyCheck::DqGeF4E,
        HierarchyCheck::EGeN,
        HierarchyCheck::NGeS2e,
        HierarchyCheck::S3eGeS2e,
        HierarchyCheck::EGeS3e,
        HierarchyCheck::InvFqDqGeE,
        HierarchyCheck::NGeInvHS2e,
        HierarchyCheck::InvHS3eLeE,
    ];

    pub fn name(self) -> &'static str {
        match self {
            HierarchyCheck::TaylorDqGeE => "taylor_dq_ge_e",
            HierarchyCheck::DqGeFqE => "dq_ge_fq_e",
            HierarchyCheck::DqGeF4E => "dq_ge_f4_e",
            HierarchyCheck::EGeN => "e_ge_n",
            HierarchyCheck::NGeS2e => "n_ge_s2e",
            HierarchyCheck::S3eGeS2e => "s3e_ge_s2e",
            HierarchyCheck::EGeS3e => "e_ge_s3e",
            HierarchyCheck::InvFqDqGeE => "inv_fq_dq_ge_e",
            HierarchyCheck::NGeInvHS2e => "n_ge_inv_h_s2e",
            HierarchyCheck::InvHS3eLeE => "inv_h_s3e_le_e",
        }
    }

    /// Amount by which the required-smaller side exceeds the larger one.
    pub fn excess(self, r: &MeasureRecord) -> Result<f64> {
        let q = QParameter::new(r.q)?;
        Ok(match self {
            HierarchyCheck::TaylorDqGeE => {
                r.e - (2f64.powf(r.q) * std::f64::consts::LN_2 * r.d_q / r.q).sqrt()
            }
            HierarchyCheck::DqGeFqE => f_q(r.e, q)? - r.d_q,
            HierarchyCheck::DqGeF4E if (Q_RANGE.0..=Q_RANGE.1).contains(&r.q) => {
                f_q(r.e, QParameter::new(4.0)?)? - r.d_q
            }
            HierarchyCheck::DqGeF4E => 0.0,
            HierarchyCheck::EGeN => r.n_bell - r.e,
            HierarchyCheck::NGeS2e => r.s2e - r.n_bell,
            HierarchyCheck::S3eGeS2e => r.s2e - r.s3e,
            HierarchyCheck::EGeS3e => r.s3e - r.e,
            HierarchyCheck::InvFqDqGeE => r.e - inv_f_q(r.d_q.min(f_q(1.0, q)?), q)?,
            HierarchyCheck::NGeInvHS2e if r.s2e > 0.0 => {
                inv_binary_entropy(1.0 - r.s2e)? - r.n_bell
            }
            HierarchyCheck::InvHS3eLeE if r.s3e > 0.0 => inv_binary_entropy(1.0 - r.s3e)? - r.e,
            HierarchyCheck::NGeInvHS2e | HierarchyCheck::InvHS3eLeE => 0.0,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HierarchyPoint {
    pub c: CVector,
    pub record: MeasureRecord,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HierarchySweep {
    pub report: SweepReport,
    pub points: Vec<HierarchyPoint>,
}

pub fn hierarchy_sweep(n: usize, seed: u64, q_mode: QMode) -> Result<HierarchySweep> {
    check_count(n)?;
    let start = Instant::now();
    let states = sample_states(n, seed)?;
    let qs = q_mode.values(n, seed);
    let points = states
        .par_iter()
        .zip(qs.par_iter())
        .map(|(c, &q)| {
            Ok(HierarchyPoint {
                c: *c,
                record: all_measures(c, q)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let tallies = points
        .par_iter()
        .map(|p| {
            let mut t = Tallies::new();
            for check in HierarchyCheck::ALL {
                t.entry(check.name())
                    .or_default()
                    .record(check.excess(&p.record)?, HIERARCHY_SLACK);
            }
            Ok(t)
        })
        .try_reduce(Tallies::new, |a, b| Ok(merge_tallies(a, b)))?;
    Ok(HierarchySweep {
        report: SweepReport::new("hierarchy", n, seed, q_mode, tallies, start),
        points,
    })
}

/// `(file, y measure, x measure)` for the six scatter panels.
pub const HIERARCHY_PANELS: [(&str, Measure, Measure); 6] = [
    ("fig1a.csv", Measure::Dq, Measure::E),
    ("fig1b.csv", Measure::E, Measure::N),
    ("fig1c.csv", Measure::N, Measure::S2e),
    ("fig1d.csv", Measure::S3e, Measure::S2e),
    ("fig1e.csv", Measure::E, Measure::S3e),
    ("fig1f.csv", Measure::N, Measure::S3e),
];

fn write_file(path: &Path, header: &str, rows: impl Iterator<Item = String>) -> Result<PathBuf> {
    let io_err = |e: std::io::Error| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    };
    let mut out = std::io::BufWriter::new(fs::File::create(path).map_err(io_err)?);
    writeln!(out, "{header}").map_err(io_err)?;
    for row in rows {
        writeln!(out, "{row}").map_err(io_err)?;
    }
    out.flush().map_err(io_err)?;
    Ok(path.to_path_buf())
}

fn checked_cells(c: &CVector) -> Result<[String; 3]> {
    ensure_physical(c)?;
    Ok(c.as_array().map(fmt_g17))
}

/// Writes `fig1a.csv` .. `fig1f.csv` into `dir`.
pub fn write_hierarchy_datasets(dir: &Path, points: &[HierarchyPoint]) -> Result<Vec<PathBuf>> {
    let cells = points
        .iter()
        .map(|p| checked_cells(&p.c))
        .collect::<Result<Vec<_>>>()?;
    HIERARCHY_PANELS
        .iter()
        .map(|&(file, y, x)| {
            let header = format!("c1,c2,c3,q,{},{}", y.name(), x.name());
            let rows = points.iter().zip(&cells).map(|(p, c)| {
                csv_line(
                    c.iter()
                        .cloned()
                        .chain([p.record.q, p.record.get(y), p.record.get(x)].map(fmt_g17)),
                )
            });
            write_file(&dir.join(file), &header, rows)
        })
        .collect()
}

// ---------------------------------------------------------------- curves

/// Boundary families of the scatter panels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveFamily {
    /// `c = (u, u, -1)`.
    LowerA,
    /// `c = (-u, -u, -u)`.
    Werner,
}

impl CurveFamily {
    pub fn c(self, u: f64) -> Result<CVector> {
        match self {
            CurveFamily::LowerA => CVector::new(u, u, -1.0),
            CurveFamily::Werner => CVector::new(-u, -u, -u),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CurveFamily::LowerA => "lower",
            CurveFamily::Werner => "werner",
        }
    }

    /// Expected `(measure, value)` pairs at `u`.
    fn expected(self, u: f64, q: QParameter) -> Result<Vec<(Measure, f64)>> {
        Ok(match self {
            CurveFamily::LowerA => vec![
                (Measure::E, u),
                (Measure::N, u),
                (Measure::S2e, 1.0 - h(u)),
                (Measure::S3e, 1.0 - h(u)),
                (Measure::Dq, f_q(u, q)?),
            ],
            CurveFamily::Werner => vec![
                (Measure::E, ((3.0 * u - 1.0) / 2.0).max(0.0)),
                (Measure::N, (2.0 * u * u - 1.0).max(0.0).sqrt()),
                (Measure::S3e, (1.0 - 1.5 * h(u)).max(0.0)),
            ],
        })
    }
}

impl FromStr for CurveFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lower" => Ok(CurveFamily::LowerA),
            "werner" => Ok(CurveFamily::Werner),
            _ => Err(Error::Parse {
                what: "curve family (expected lower|werner)",
                input: s.to_owned(),
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurvePoint {
    pub u: f64,
    pub c: CVector,
    pub record: MeasureRecord,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundCurves {
    pub family: CurveFamily,
    pub points: Vec<CurvePoint>,
    /// Largest gap between each tabulated measure and its expected form.
    pub max_deviation: BTreeMap<&'static str, f64>,
}

impl BoundCurves {
    pub const CSV_HEADER: &'static str = "u,c1,c2,c3,q,Dq,E,S2v,S3v,S2e,S3e,N";

    pub fn passed(&self) -> bool {
        self.max_deviation.values().all(|&d| d <= CURVE_TOL)
    }

    pub fn csv(&self) -> String {
        let mut s = String::from(Self::CSV_HEADER);
        s.push('\n');
        for p in &self.points {
            s.push_str(&fmt_g17(p.u));
            s.push(',');
            s.push_str(&p.record.csv_row(&p.c));
            s.push('\n');
        }
        s
    }
}

/// Tabulates `family` at `resolution` evenly spaced `u` in `[0, 1]`.
pub fn bound_curves(family: CurveFamily, resolution: usize, q: QParameter) -> Result<BoundCurves> {
    if resolution < 2 {
        return Err(Error::InvalidArgument(
            "resolution must be at least 2".into(),
        ));
    }
    let mut points = Vec::with_capacity(resolution);
    let mut max_deviation = BTreeMap::new();
    for i in 0..resolution {
        let u = i as f64 / (resolution - 1) as f64;
        let c = family.c(u)?;
        let record = all_measures(&c, q)?;
        for (m, want) in family.expected(u, q)? {
            let d = max_deviation.entry(m.name()).or_insert(0.0f64);
            *d = d.max((record.get(m) - want).abs());
        }
        points.push(CurvePoint { u, c, record });
    }
    Ok(BoundCurves {
        family,
        points,
        max_deviation,
    })
}

// ---------------------------------------------------------------- invariance

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvariancePoint {
    pub c: CVector,
    pub k: u8,
    pub rotated: CVector,
    pub before: MeasureRecord,
    pub after: MeasureRecord,
}

/// A state whose three-setting variance steering switches on or off under
/// a local rotation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InvarianceWitness {
    pub c: [f64; 3],
    pub k: u8,
    pub rotated: [f64; 3],
    pub s3v_before: f64,
    pub s3v_after: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct DeviationSummary {
    pub max: f64,
    pub mean: f64,
    /// Pairs whose deviation exceeds the invariance tolerance.
    pub changed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvarianceScan {
    pub report: SweepReport,
    pub points: Vec<InvariancePoint>,
}

/// Name of the check that both `S3v(c)` and `S3v(c')` are positive.
pub const S3V_EXCLUSIVITY: &str = "s3v_both_positive";
/// Name of the check that some sample switches `S3v` on or off.
pub const S3V_WITNESS: &str = "s3v_witness_missing";

pub fn invariance_scan(n: usize, seed: u64, q_mode: QMode) -> Result<InvarianceScan> {
    check_count(n)?;
    let start = Instant::now();
    let states = sample_states(n, seed)?;
    let qs = q_mode.values(n, seed);
    let points = states
        .par_iter()
        .zip(qs.par_iter())
        .map(|(c, &q)| {
            let before = all_measures(c, q)?;
            (1..=3u8)
                .map(|k| {
                    let rotated = local_rotation(c, k)?;
                    Ok(InvariancePoint {
                        c: *c,
                        k,
                        rotated,
                        before,
                        after: all_measures(&rotated, q)?,
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect::<Vec<_>>();

    let mut tallies = Tallies::new();
    let mut variance: BTreeMap<String, DeviationSummary> = BTreeMap::new();
    for p in &points {
        for m in Measure::INVARIANT {
            let dev = (p.after.get(m) - p.before.get(m)).abs();
            tallies
                .entry(m.name())
                .or_default()
                .record(dev, INVARIANCE_TOL);
        }
        for m in [Measure::S2v, Measure::S3v] {
            let dev = (p.after.get(m) - p.before.get(m)).abs();
            let s = variance.entry(m.name().to_owned()).or_default();
            s.max = s.max.max(dev);
            s.mean += dev;
            if dev > INVARIANCE_TOL {
                s.changed += 1;
            }
        }
        let both = p.before.s3v.min(p.after.s3v);
        tallies
            .entry(S3V_EXCLUSIVITY)
            .or_default()
            .record(both, 0.0);
    }
    for s in variance.values_mut() {
        s.mean /= points.len() as f64;
    }
    let witness = points
        .iter()
        .find(|p| (p.before.s3v > 0.0) != (p.after.s3v > 0.0))
        .map(|p| InvarianceWitness {
            c: p.c.as_array(),
            k: p.k,
            rotated: p.rotated.as_array(),
            s3v_before: p.before.s3v,
            s3v_after: p.after.s3v,
        });
    let missing = tallies.entry(S3V_WITNESS).or_default();
    if witness.is_none() {
        missing.record(1.0, 0.0);
    }

    let mut report = SweepReport::new("invariance", n, seed, q_mode, tallies, start);
    report.witness = witness;
    report.non_invariant = Some(variance);
    Ok(InvarianceScan { report, points })
}

/// Writes `fig2a.csv` (invariant measures), `fig2b.csv` (S2v) and
/// `fig2c.csv` (S3v), one row per state and rotation axis.
pub fn write_invariance_datasets(dir: &Path, points: &[InvariancePoint]) -> Result<Vec<PathBuf>> {
    let prefix = points
        .iter()
        .map(|p| {
            ensure_physical(&p.rotated)?;
            let mut cells = checked_cells(&p.c)?.to_vec();
            cells.push(p.k.to_string());
            Ok(cells)
        })
        .collect::<Result<Vec<_>>>()?;
    let panels: [(&str, &[Measure]); 3] = [
        ("fig2a.csv", &Measure::INVARIANT),
        ("fig2b.csv", &[Measure::S2v]),
        ("fig2c.csv", &[Measure::S3v]),
    ];
    panels
        .iter()
        .map(|&(file, measures)| {
            let mut header = String::from("c1,c2,c3,k,q");
            for m in measures {
                header.push_str(&format!(",{m},{m}_rot"));
            }
            let rows = points.iter().zip(&prefix).map(|(p, pre)| {
                let values = measures
                    .iter()
                    .flat_map(|&m| [p.before.get(m), p.after.get(m)])
                    .map(fmt_g17);
                csv_line(
                    pre.iter()
                        .cloned()
                        .chain([fmt_g17(p.before.q)])
                        .chain(values),
                )
            });
            write_file(&dir.join(file), &header, rows)
        })
        .collect()
}

// ---------------------------------------------------------------- sudden death

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuddenDeathRow {
    pub state: PfFamilyState,
    pub q: QParameter,
    pub record: SuddenDeathRecord,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuddenDeathSweep {
    pub channel: ChannelKind,
    pub report: SweepReport,
    pub rows: Vec<SuddenDeathRow>,
}

/// Name of the check comparing phase-flip closed forms with the root finder.
pub const CLOSED_FORM_AGREEMENT: &str = "closed_form_agreement";

/// `n` family states `(u, u, v)`, chunked like [`sample_states`].
pub fn sample_pf_family(n: usize, seed: u64) -> Result<Vec<PfFamilyState>> {
    check_count(n)?;
    Ok((0..chunk_count(n))
        .flat_map(|chunk| {
            let mut rng = chunk_rng(seed, chunk as u64, stream::PF_FAMILY);
            (0..chunk_len(n, chunk))
                .map(|_| PfFamilyState::sample(&mut rng))
                .collect::<Vec<_>>()
        })
        .collect())
}

pub fn sudden_death_sweep(
    n: usize,
    seed: u64,
    channel: ChannelKind,
    q_mode: QMode,
) -> Result<SuddenDeathSweep> {
    let start = Instant::now();
    let states = sample_pf_family(n, seed)?;
    let qs = q_mode.values(n, seed);
    let computed = states
        .par_iter()
        .zip(qs.par_iter())
        .map(|(s, &q)| {
            let record = death_record(&s.c(), channel, q)?;
            let mut t = Tallies::new();
            for link in ChronologyLink::ALL {
                let short = if link.holds(&record) {
                    0.0
                } else {
                    link.shortfall(&record)
                };
                t.entry(link.name()).or_default().record(short, 0.0);
            }
            if channel == ChannelKind::Pf {
                let tally = t.entry(CLOSED_FORM_AGREEMENT).or_default();
                for m in Measure::INVARIANT {
                    let gap = sudden_death_closed_pf(s, m)?.distance(record.get(m));
                    tally.record(gap, CLOSED_FORM_TOL);
                }
            }
            let pass = ChronologyLink::ALL.iter().all(|l| l.holds(&record));
            Ok((
                SuddenDeathRow {
                    state: *s,
                    q,
                    record,
                    pass,
                },
                t,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let tallies = computed
        .iter()
        .fold(Tallies::new(), |a, (_, t)| merge_tallies(a, t.clone()));
    let mut report = SweepReport::new("sudden-death", n, seed, q_mode, tallies, start);
    report.channel = Some(channel);
    Ok(SuddenDeathSweep {
        channel,
        report,
        rows: computed.into_iter().map(|(r, _)| r).collect(),
    })
}

pub const SUDDEN_DEATH_HEADER: &str = "c1,c2,c3,channel,q,tDq,tE,tN,tS2e,tS3e,tS2v,tS3v,pass,\
born_dead_Dq,born_dead_E,born_dead_N,born_dead_S2e,born_dead_S3e,born_dead_S2v,born_dead_S3v";

const DEATH_COLUMNS: [Measure; 7] = [
    Measure::Dq,
    Measure::E,
    Measure::N,
    Measure::S2e,
    Measure::S3e,
    Measure::S2v,
    Measure::S3v,
];

/// Writes `fig3.csv` into `dir`.
pub fn write_sudden_death_dataset(dir: &Path, sweep: &SuddenDeathSweep) -> Result<PathBuf> {
    let rows = sweep
        .rows
        .iter()
        .map(|r| {
            let mut cells = checked_cells(&r.state.c())?.to_vec();
            cells.push(sweep.channel.to_string());
            cells.push(fmt_g17(r.q.value()));
            cells.extend(DEATH_COLUMNS.iter().map(|&m| r.record.get(m).csv_cell()));
            cells.push(r.pass.to_string());
            cells.extend(
                DEATH_COLUMNS
                    .iter()
                    .map(|&m| u8::from(r.record.get(m) == DeathTime::BornDead).to_string()),
            );
            Ok(csv_line(cells))
        })
        .collect::<Result<Vec<_>>>()?;
    write_file(&dir.join("fig3.csv"), SUDDEN_DEATH_HEADER, rows.into_iter())
}
