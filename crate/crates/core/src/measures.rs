//! Closed-form correlation measures for X states: q-discord, concurrence,
//! variance and entropic steering, and Bell nonlocality, plus the binary
//! entropy `h` and the discord bound `f_q` with their inverses.
//!
//! Every measure is clamped at zero so that "the measure vanished" is an
//! exact predicate (`value == 0.0`).

use std::f64::consts::{LN_2, SQRT_2};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::{csv_line, fmt_g17};
use crate::roots::bisect;
use crate::states::{ensure_physical, CVector};

/// Below this distance from 1 the von Neumann limit is used for `q`.
pub const Q_LIMIT_TOL: f64 = 1e-9;

/// Tsallis index `q > 0`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct QParameter(f64);

impl QParameter {
    pub const ONE: QParameter = QParameter(1.0);

    pub fn new(q: f64) -> Result<Self> {
        if q.is_finite() && q > 0.0 {
            Ok(Self(q))
        } else {
            Err(Error::Domain {
                name: "q",
                value: q,
                domain: "q > 0",
            })
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    fn is_von_neumann(self) -> bool {
        (self.0 - 1.0).abs() < Q_LIMIT_TOL
    }
}

impl fmt::Display for QParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&fmt_g17(self.0))
    }
}

/// Number of Pauli settings in a steering test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Settings {
    Two,
    Three,
}

impl TryFrom<usize> for Settings {
    type Error = Error;

    fn try_from(n: usize) -> Result<Self> {
        match n {
            2 => Ok(Settings::Two),
            3 => Ok(Settings::Three),
            _ => Err(Error::InvalidSettings(n)),
        }
    }
}

/// All measures for one state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasureRecord {
    pub d_q: f64,
    pub q: f64,
    pub e: f64,
    pub s2v: f64,
    pub s3v: f64,
    pub s2e: f64,
    pub s3e: f64,
    pub n_bell: f64,
}

impl MeasureRecord {
    pub const CSV_HEADER: &'static str = "c1,c2,c3,q,Dq,E,S2v,S3v,S2e,S3e,N";

    /// Row matching [`MeasureRecord::CSV_HEADER`].
    pub fn csv_row(&self, c: &CVector) -> String {
        let [c1, c2, c3] = c.to_csv_cells();
        let rest = [
            self.q,
            self.d_q,
            self.e,
            self.s2v,
            self.s3v,
            self.s2e,
            self.s3e,
            self.n_bell,
        ]
        .map(fmt_g17);
        csv_line([c1, c2, c3].into_iter().chain(rest))
    }

    pub fn get(&self, m: Measure) -> f64 {
        match m {
            Measure::Dq => self.d_q,
            Measure::E => self.e,
            Measure::N => self.n_bell,
            Measure::S2e => self.s2e,
            Measure::S3e => self.s3e,
            Measure::S2v => self.s2v,
            Measure::S3v => self.s3v,
        }
    }
}

/// Identifies one measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Measure {
    Dq,
    E,
    N,
    S2e,
    S3e,
    S2v,
    S3v,
}

impl Measure {
    pub const ALL: [Measure; 7] = [
        Measure::Dq,
        Measure::E,
        Measure::N,
        Measure::S2e,
        Measure::S3e,
        Measure::S2v,
        Measure::S3v,
    ];

    /// Measures invariant under local unitaries, which also obey the hierarchy.
    pub const INVARIANT: [Measure; 5] = [
        Measure::Dq,
        Measure::E,
        Measure::N,
        Measure::S2e,
        Measure::S3e,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Measure::Dq => "Dq",
            Measure::E => "E",
            Measure::N => "N",
            Measure::S2e => "S2e",
            Measure::S3e => "S3e",
            Measure::S2v => "S2v",
            Measure::S3v => "S3v",
        }
    }

    /// Evaluates just this measure.
    pub fn evaluate(self, c: &CVector, q: QParameter) -> Result<f64> {
        match self {
            Measure::Dq => q_discord(c, q),
            Measure::E => concurrence(c),
            Measure::N => bell_nonlocality(c),
            Measure::S2e => steering_entropic(c, Settings::Two),
            Measure::S3e => steering_entropic(c, Settings::Three),
            Measure::S2v => steering_variance(c, Settings::Two),
            Measure::S3v => steering_variance(c, Settings::Three),
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Measure::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parse {
                what: "measure",
                input: s.to_owned(),
            })
    }
}

/// `h(x)` without the domain check; `|x|` is clamped to 1.
pub(crate) fn h(x: f64) -> f64 {
    let x = x.abs().min(1.0);
    let p = 0.5 * (1.0 + x);
    let m = 0.5 * (1.0 - x);
    let term = |t: f64| if t > 0.0 { -t * t.log2() } else { 0.0 };
    term(p) + term(m)
}

/// Shannon entropy (bits) of a bit with bias `(1 + x)/2`.
pub fn binary_entropy(x: f64) -> Result<f64> {
    if !(-1.0..=1.0).contains(&x) {
        return Err(Error::Domain {
            name: "x",
            value: x,
            domain: "[-1, 1]",
        });
    }
    Ok(h(x))
}

/// The `x` in `[0, 1]` with `h(x) = y`.
pub fn inv_binary_entropy(y: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&y) {
        return Err(Error::Domain {
            name: "y",
            value: y,
            domain: "[0, 1]",
        });
    }
    if y == 1.0 {
        return Ok(0.0);
    }
    if y == 0.0 {
        return Ok(1.0);
    }
    // h decreases on [0, 1]; `h(x) > y` holds left of the root.
    let (lo, hi) = bisect(|x| h(x) > y, 0.0, 1.0, 0.0);
    Ok(closer(lo, hi, |x| (h(x) - y).abs()))
}

fn closer(a: f64, b: f64, err: impl Fn(f64) -> f64) -> f64 {
    if err(a) <= err(b) {
        a
    } else {
        b
    }
}

/// `[(1 + r)^q + (1 - r)^q - 2] / (q - 1)` for `|r| <= 1`, with the
/// `q -> 1` limit `(1 + r) ln(1 + r) + (1 - r) ln(1 - r)`.
///
/// Written as `(1 +- r) expm1((q - 1) ln(1 +- r)) / (q - 1)` so nothing
/// cancels near `q = 1`, and as a binomial series for small `|r|` so the
/// result keeps full relative precision as `r -> 0`.
pub(crate) fn second_difference(r: f64, q: QParameter) -> f64 {
    let r = r.clamp(-1.0, 1.0);
    let qv = q.value();
    if r.abs() <= 0.01 && qv <= 20.0 {
        // 2 sum_k C(q, 2k)/(q - 1) r^(2k), coefficient recurrence in k.
        let r2 = r * r;
        let mut coef = 0.5 * qv;
        let mut power = r2;
        let mut sum = 0.0;
        for k in 1..60 {
            let term = coef * power;
            sum += term;
            if term.abs() <= 1e-18 * sum.abs() {
                break;
            }
            let k2 = 2.0 * k as f64;
            coef *= (qv - k2) * (qv - k2 - 1.0) / ((k2 + 1.0) * (k2 + 2.0));
            power *= r2;
        }
        return 2.0 * sum;
    }
    let branch = |base: f64| -> f64 {
        if base <= 0.0 {
            return 0.0;
        }
        let log = base.ln();
        if q.is_von_neumann() {
            base * log
        } else {
            base * ((qv - 1.0) * log).exp_m1() / (qv - 1.0)
        }
    };
    branch(1.0 + r) + branch(1.0 - r)
}

/// `f_q(x) = ((1 - x)^q + (1 + x)^q - 2) / (2^q (q - 1) ln 2)`; equals
/// `1 - h(x)` at `q = 1`.
pub fn f_q(x: f64, q: QParameter) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain {
            name: "x",
            value: x,
            domain: "[0, 1]",
        });
    }
    Ok(second_difference(x, q) / (2f64.powf(q.value()) * LN_2))
}

/// The `x` in `[0, 1]` with `f_q(x) = y`.
pub fn inv_f_q(y: f64, q: QParameter) -> Result<f64> {
    let top = f_q(1.0, q)?;
    if !(0.0..=top).contains(&y) {
        return Err(Error::Domain {
            name: "y",
            value: y,
            domain: "[0, f_q(1)]",
        });
    }
    if y == 0.0 {
        return Ok(0.0);
    }
    if y == top {
        return Ok(1.0);
    }
    let f = |x: f64| second_difference(x, q) / (2f64.powf(q.value()) * LN_2);
    let (lo, hi) = bisect(|x| f(x) < y, 0.0, 1.0, 0.0);
    Ok(closer(lo, hi, |x| (f(x) - y).abs()))
}

/// Tsallis q-discord in bits, minimized over projective measurements on B.
///
/// The optimal measurement is along the axis of `c_m = max |c_i|`; the
/// value is `[sum_i lambda_i^q - ((1 + c_m)^q + (1 - c_m)^q) / 2^(2q-1)] /
/// ((q - 1) ln 2)`. The eigenvalues pair up around the post-measurement
/// eigenvalues `a, b = (1 +- c_m)/4` as `a +- d1`, `b +- d2`, so the sum is
/// evaluated as two second differences of `t -> t^q`.
pub fn q_discord(c: &CVector, q: QParameter) -> Result<f64> {
    ensure_physical(c)?;
    let comps = c.as_array();
    let m = (0..3)
        .reduce(|best, i| {
            if comps[i].abs() > comps[best].abs() {
                i
            } else {
                best
            }
        })
        .expect("three components");
    let (j, k) = match m {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    };
    let cm = comps[m];
    let a = (1.0 + cm) / 4.0;
    let b = (1.0 - cm) / 4.0;
    let d1 = (comps[j] - comps[k]) / 4.0;
    let d2 = (comps[j] + comps[k]) / 4.0;
    let term = |center: f64, offset: f64| {
        if center <= 0.0 {
            0.0
        } else {
            center.powf(q.value()) * second_difference(offset / center, q)
        }
    };
    let value = (term(a, d1) + term(b, d2)) / LN_2;
    Ok(value.max(0.0))
}

/// Wootters concurrence.
pub fn concurrence(c: &CVector) -> Result<f64> {
    ensure_physical(c)?;
    let [c1, c2, c3] = c.as_array();
    let first = ((c1 - c2).abs() - (1.0 - c3).abs()) / 2.0;
    let second = ((c1 + c2).abs() - (1.0 + c3).abs()) / 2.0;
    Ok(first.max(second).max(0.0))
}

/// Normalized violation of the variance steering inequality
/// `|sum_{i in alpha} c_i| <= sqrt(n)`, maximized over index sets.
pub fn steering_variance(c: &CVector, n: Settings) -> Result<f64> {
    ensure_physical(c)?;
    let [c1, c2, c3] = c.as_array();
    let value = match n {
        Settings::Two => {
            let best = [(c1 + c2).abs(), (c2 + c3).abs(), (c1 + c3).abs()]
                .into_iter()
                .fold(0.0, f64::max);
            (best - SQRT_2) / (2.0 - SQRT_2)
        }
        Settings::Three => {
            let s3 = 3f64.sqrt();
            ((c1 + c2 + c3).abs() - s3) / (3.0 - s3)
        }
    };
    Ok(value.max(0.0))
}

/// Normalized violation of the entropic steering inequality
/// `sum_{i in alpha} h(c_i) >= n - 1`.
pub fn steering_entropic(c: &CVector, n: Settings) -> Result<f64> {
    ensure_physical(c)?;
    let [c1, c2, c3] = c.as_array();
    let value = match n {
        Settings::Two => {
            // h is even and decreasing in |x|: the best pair is the two largest |c_i|.
            let mut mags = [c1.abs(), c2.abs(), c3.abs()];
            mags.sort_by(|a, b| b.total_cmp(a));
            1.0 - h(mags[0]) - h(mags[1])
        }
        Settings::Three => 1.0 - (h(c1) + h(c2) + h(c3)) / 2.0,
    };
    Ok(value.max(0.0))
}

/// Bell nonlocality `sqrt(max{0, B_max^2/4 - 1})`, with `B_max^2/4` the sum
/// of the two largest `c_i^2`.
pub fn bell_nonlocality(c: &CVector) -> Result<f64> {
    ensure_physical(c)?;
    let mut mags = c.as_array().map(f64::abs);
    mags.sort_by(|a, b| b.total_cmp(a));
    // m1^2 - (1 - m0^2), factored so that c = (u, u, -1) keeps full precision.
    let excess = mags[1] * mags[1] - (1.0 - mags[0]) * (1.0 + mags[0]);
    Ok(excess.max(0.0).sqrt())
}

/// Every measure in one record.
pub fn all_measures(c: &CVector, q: QParameter) -> Result<MeasureRecord> {
    Ok(MeasureRecord {
        d_q: q_discord(c, q)?,
        q: q.value(),
        e: concurrence(c)?,
        s2v: steering_variance(c, Settings::Two)?,
        s3v: steering_variance(c, Settings::Three)?,
        s2e: steering_entropic(c, Settings::Two)?,
        s3e: steering_entropic(c, Settings::Three)?,
        n_bell: bell_nonlocality(c)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{is_physical, local_rotation, sample_states, spectrum};
    use proptest::prelude::*;

    fn cv(c1: f64, c2: f64, c3: f64) -> CVector {
        CVector::new(c1, c2, c3).unwrap()
    }

    fn q(v: f64) -> QParameter {
        QParameter::new(v).unwrap()
    }

    fn physical() -> impl Strategy<Value = CVector> {
        (-1.0..=1.0f64, -1.0..=1.0f64, -1.0..=1.0f64)
            .prop_map(|(a, b, c3)| cv(a, b, c3))
            .prop_filter("physical", is_physical)
    }

    /// The printed Table form, evaluated literally.
    fn q_discord_printed(c: &CVector, qp: QParameter) -> f64 {
        let qv = qp.value();
        let lambdas = spectrum(c).values().map(|l| l.max(0.0));
        let cm = c.as_array().iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if qp.is_von_neumann() {
            let xlnx = |x: f64| if x > 0.0 { x * x.ln() } else { 0.0 };
            let mu_p = (1.0 + cm) / 4.0;
            let mu_m = (1.0 - cm) / 4.0;
            (lambdas.iter().map(|&l| xlnx(l)).sum::<f64>() - 2.0 * xlnx(mu_p) - 2.0 * xlnx(mu_m))
                / LN_2
        } else {
            let tr_rho = lambdas.iter().map(|l| l.powf(qv)).sum::<f64>();
            let tr_pi = ((1.0 + cm).powf(qv) + (1.0 - cm).powf(qv)) / 2f64.powf(2.0 * qv - 1.0);
            (tr_rho - tr_pi) / ((qv - 1.0) * LN_2)
        }
    }

    #[test]
    fn binary_entropy_examples() {
        assert_eq!(binary_entropy(0.0).unwrap(), 1.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(-1.0).unwrap(), 0.0);
        assert!((binary_entropy(0.5).unwrap() - 0.8112781244591328).abs() < 1e-15);
        assert_eq!(binary_entropy(0.3).unwrap(), binary_entropy(-0.3).unwrap());
        assert!(binary_entropy(1.0 + 1e-9).is_err());
    }

    #[test]
    fn inverse_binary_entropy_examples() {
        assert_eq!(inv_binary_entropy(1.0).unwrap(), 0.0);
        assert_eq!(inv_binary_entropy(0.0).unwrap(), 1.0);
        let werner = inv_binary_entropy(2.0 / 3.0).unwrap();
        assert!((werner - 0.6521).abs() < 5e-4, "{werner}");
        assert!((inv_binary_entropy(h(0.3)).unwrap() - 0.3).abs() < 1e-10);
        assert!(inv_binary_entropy(-0.1).is_err());
        assert!(inv_binary_entropy(1.1).is_err());
        for i in 1..100 {
            let y = i as f64 / 100.0;
            let x = inv_binary_entropy(y).unwrap();
            assert!((h(x) - y).abs() <= 1e-12);
        }
    }

    #[test]
    fn f_q_examples() {
        for qv in [0.5, 1.0, 2.0, 3.7] {
            assert_eq!(f_q(0.0, q(qv)).unwrap(), 0.0);
        }
        assert!((f_q(1.0, QParameter::ONE).unwrap() - 1.0).abs() < 1e-15);
        for x in [0.1, 0.5, 0.9, 1.0] {
            assert!((f_q(x, QParameter::ONE).unwrap() - (1.0 - h(x))).abs() < 1e-15);
        }
        // q = 2 is x^2 / (2 ln 2) exactly.
        assert!((f_q(0.6, q(2.0)).unwrap() - 0.36 / (2.0 * LN_2)).abs() < 1e-15);
        assert!(f_q(1.5, q(2.0)).is_err());
    }

    #[test]
    fn f_q_taylor_bound() {
        // f_q(x) >= q x^2 / (2^q ln 2) holds for q in [1, 2] and [3, 4].
        let bound = |x: f64, qv: f64| qv * x * x / (2f64.powf(qv) * LN_2);
        for qi in 0..=40 {
            let qv = 1.0 + 3.0 * qi as f64 / 40.0;
            if qv > 2.0 && qv < 3.0 {
                continue;
            }
            for xi in 0..=50 {
                let x = xi as f64 / 50.0;
                assert!(
                    f_q(x, q(qv)).unwrap() >= bound(x, qv) - 1e-14,
                    "q={qv} x={x}"
                );
            }
        }
        // Between 2 and 3 every higher binomial coefficient is negative and
        // the bound fails; x = 1, q = 2.5 is the cleanest witness.
        assert!(f_q(1.0, q(2.5)).unwrap() < bound(1.0, 2.5) - 0.01);
    }

    #[test]
    fn inverse_f_q_examples() {
        for qv in [1.0, 2.0, 3.0] {
            assert_eq!(inv_f_q(0.0, q(qv)).unwrap(), 0.0);
            let y = f_q(0.7, q(qv)).unwrap();
            assert!((inv_f_q(y, q(qv)).unwrap() - 0.7).abs() < 1e-10);
        }
        for u in [0.2, 0.55, 0.95] {
            assert!((inv_f_q(1.0 - h(u), QParameter::ONE).unwrap() - u).abs() < 1e-10);
        }
        let top = f_q(1.0, q(2.0)).unwrap();
        assert!(inv_f_q(top * 1.01, q(2.0)).is_err());
    }

    #[test]
    fn second_difference_is_continuous_across_branches() {
        for qv in [0.3, 0.999_999_999_5, 1.0, 1.000_001, 2.0, 3.5, 19.0] {
            let qp = q(qv);
            let below = second_difference(0.01, qp);
            let above = second_difference(0.010_000_000_001, qp);
            assert!(((above - below) / below).abs() < 1e-8, "q={qv}");
        }
        // Integer q: series and closed form coincide exactly.
        assert!((second_difference(0.005, q(2.0)) - 2.0 * 0.005f64.powi(2)).abs() < 1e-20);
    }

    #[test]
    fn q_discord_examples() {
        for qv in [0.5, 1.0, 2.0, 4.0] {
            assert_eq!(q_discord(&CVector::zero(), q(qv)).unwrap(), 0.0);
        }
        let bell = cv(1.0, 1.0, -1.0);
        assert!((q_discord(&bell, QParameter::ONE).unwrap() - 1.0).abs() < 1e-15);
        assert!((q_discord(&bell, q(2.0)).unwrap() - 1.0 / (2.0 * LN_2)).abs() < 1e-15);
        for u in [0.25, 0.5, 0.75] {
            for qv in [1.0, 2.0, 4.0] {
                let d = q_discord(&cv(u, u, -1.0), q(qv)).unwrap();
                assert!((d - f_q(u, q(qv)).unwrap()).abs() < 1e-14, "u={u} q={qv}");
            }
        }
        assert!(matches!(
            q_discord(&cv(1.0, 1.0, 1.0), QParameter::ONE),
            Err(Error::NonPhysical { .. })
        ));
    }

    #[test]
    fn q_discord_matches_printed_form() {
        for c0 in sample_states(2000, 17).unwrap() {
            for qv in [0.5, 1.0, 1.5, 2.0, 3.0, 4.0] {
                let ours = q_discord(&c0, q(qv)).unwrap();
                let printed = q_discord_printed(&c0, q(qv));
                assert!(
                    (ours - printed).abs() < 1e-12,
                    "c={c0} q={qv}: {ours} vs {printed}"
                );
            }
        }
    }

    #[test]
    fn q_discord_ties_do_not_matter() {
        // |c1| = |c3| = c_m: either maximizer gives the same value.
        for (c0, swapped) in [
            (cv(0.5, 0.1, -0.5), cv(-0.5, 0.1, 0.5)),
            (cv(0.5, -0.5, 0.2), cv(-0.5, 0.5, 0.2)),
        ] {
            for qv in [1.0, 2.0, 3.3] {
                let a = q_discord(&c0, q(qv)).unwrap();
                let b = q_discord(&swapped, q(qv)).unwrap();
                assert!((a - b).abs() < 1e-15);
                assert!((a - q_discord_printed(&c0, q(qv))).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn q_discord_stays_positive_for_tiny_correlations() {
        // The printed form cancels to zero here; the regrouped form does not.
        let c0 = cv(1e-12, 1e-12, 0.3);
        for qv in [1.0, 2.0, 3.0] {
            assert!(q_discord(&c0, q(qv)).unwrap() > 0.0);
        }
    }

    #[test]
    fn concurrence_examples() {
        assert_eq!(concurrence(&CVector::zero()).unwrap(), 0.0);
        assert!((concurrence(&cv(-0.8, -0.8, -0.8)).unwrap() - 0.7).abs() < 1e-15);
        assert!((concurrence(&cv(0.4, 0.4, -1.0)).unwrap() - 0.4).abs() < 1e-15);
        assert!(concurrence(&cv(1.0, 1.0, 1.0)).is_err());
    }

    #[test]
    fn variance_steering_examples() {
        let bell = cv(1.0, 1.0, -1.0);
        assert!((steering_variance(&bell, Settings::Two).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(steering_variance(&bell, Settings::Three).unwrap(), 0.0);
        let singlet = cv(-1.0, -1.0, -1.0);
        assert!((steering_variance(&singlet, Settings::Three).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(Settings::try_from(4), Err(Error::InvalidSettings(4)));
        assert_eq!(Settings::try_from(1), Err(Error::InvalidSettings(1)));
    }

    #[test]
    fn entropic_steering_examples() {
        for u in [0.3, 0.6, 0.9] {
            let c0 = cv(u, u, -1.0);
            let want = 1.0 - h(u);
            assert!((steering_entropic(&c0, Settings::Two).unwrap() - want).abs() < 1e-15);
            assert!((steering_entropic(&c0, Settings::Three).unwrap() - want).abs() < 1e-15);
        }
        assert_eq!(
            steering_entropic(&CVector::zero(), Settings::Two).unwrap(),
            0.0
        );
        assert_eq!(
            steering_entropic(&CVector::zero(), Settings::Three).unwrap(),
            0.0
        );
        let w = steering_entropic(&cv(-0.8, -0.8, -0.8), Settings::Three).unwrap();
        assert!((w - (1.0 - 1.5 * h(0.8))).abs() < 1e-15);
    }

    #[test]
    fn bell_examples() {
        assert_eq!(bell_nonlocality(&CVector::zero()).unwrap(), 0.0);
        let w = bell_nonlocality(&cv(-0.8, -0.8, -0.8)).unwrap();
        assert!((w - 0.28f64.sqrt()).abs() < 1e-15);
        assert!((w - 0.529150).abs() < 1e-6);
        assert!((bell_nonlocality(&cv(0.4, 0.4, -1.0)).unwrap() - 0.4).abs() < 1e-15);
    }

    #[test]
    fn all_measures_examples() {
        let zero = all_measures(&CVector::zero(), QParameter::ONE).unwrap();
        assert_eq!(
            [
                zero.d_q,
                zero.e,
                zero.s2v,
                zero.s3v,
                zero.s2e,
                zero.s3e,
                zero.n_bell
            ],
            [0.0; 7]
        );
        let bell = all_measures(&cv(1.0, 1.0, -1.0), QParameter::ONE).unwrap();
        let got = [
            bell.d_q,
            bell.e,
            bell.s2v,
            bell.s3v,
            bell.s2e,
            bell.s3e,
            bell.n_bell,
        ];
        let want = [1.0, 1.0, 1.0, 0.0, 1.0, 1.0, 1.0];
        for (g, w) in got.iter().zip(want) {
            assert!((g - w).abs() < 1e-15, "{got:?}");
        }
        let w = all_measures(&cv(-0.8, -0.8, -0.8), QParameter::ONE).unwrap();
        assert!((w.e - 0.7).abs() < 1e-15);
        assert!((w.n_bell - 0.28f64.sqrt()).abs() < 1e-15);
        assert!((w.s3e - (1.0 - 1.5 * h(0.8))).abs() < 1e-15);
    }

    #[test]
    fn csv_row_layout() {
        let c0 = cv(1.0, 1.0, -1.0);
        let rec = all_measures(&c0, QParameter::ONE).unwrap();
        let row = rec.csv_row(&c0);
        assert_eq!(
            row.split(',').count(),
            MeasureRecord::CSV_HEADER.split(',').count()
        );
        assert!(row.starts_with("1,1,-1,1,1,1,1,0,"), "{row}");
    }

    #[test]
    fn measure_names_round_trip() {
        for m in Measure::ALL {
            assert_eq!(m.name().parse::<Measure>().unwrap(), m);
        }
        assert!("X".parse::<Measure>().is_err());
    }

    #[test]
    fn continuity_across_q_one() {
        for c0 in sample_states(100, 23).unwrap() {
            let at_one = q_discord(&c0, QParameter::ONE).unwrap();
            for qv in [1.0 - 1e-6, 1.0 + 1e-6] {
                let near = q_discord(&c0, q(qv)).unwrap();
                assert!((near - at_one).abs() <= 1e-4);
            }
        }
    }

    proptest! {
        #[test]
        fn ranges(c0 in physical()) {
            let r = all_measures(&c0, QParameter::ONE).unwrap();
            for v in [r.e, r.s2v, r.s3v, r.s2e, r.s3e, r.n_bell] {
                prop_assert!((0.0..=1.0 + 1e-12).contains(&v));
            }
            prop_assert!(r.d_q >= 0.0 && r.d_q.is_finite());
        }

        #[test]
        fn exact_hierarchy(c0 in physical(), qv in 1.0..=4.0f64) {
            let qp = q(qv);
            let r = all_measures(&c0, qp).unwrap();
            prop_assert!(inv_f_q(r.d_q.min(f_q(1.0, qp).unwrap()), qp).unwrap() >= r.e - 1e-10);
            prop_assert!(r.e >= r.n_bell - 1e-12);
            if r.s2e > 0.0 {
                prop_assert!(r.n_bell >= inv_binary_entropy((1.0 - r.s2e).min(1.0)).unwrap() - 1e-10);
            }
            prop_assert!(r.s2e <= r.s3e + 1e-12);
            if r.s3e > 0.0 {
                prop_assert!(inv_binary_entropy(1.0 - r.s3e).unwrap() <= r.e + 1e-10);
            }
            prop_assert!(r.d_q >= f_q(r.e, qp).unwrap() - 1e-10);
        }

        #[test]
        fn simple_hierarchy_outside_the_taylor_gap(
            c0 in physical(),
            qv in prop_oneof![1.0..=2.0f64, 3.0..=4.0f64],
        ) {
            let r = all_measures(&c0, q(qv)).unwrap();
            let taylor = (2f64.powf(qv) * LN_2 * r.d_q / qv).sqrt();
            prop_assert!(taylor >= r.e - 1e-10);
            prop_assert!(r.e >= r.n_bell - 1e-10);
            prop_assert!(r.n_bell >= r.s2e - 1e-10);
            prop_assert!(r.s2e <= r.s3e + 1e-10);
            prop_assert!(r.s3e <= r.e + 1e-10);
        }

        #[test]
        fn local_rotation_invariance(c0 in physical(), k in 1u8..=3, qv in 0.5..=4.0f64) {
            let rotated = local_rotation(&c0, k).unwrap();
            for m in Measure::INVARIANT {
                let a = m.evaluate(&c0, q(qv)).unwrap();
                let b = m.evaluate(&rotated, q(qv)).unwrap();
                prop_assert!((a - b).abs() <= 1e-12, "{} {} vs {}", m, a, b);
            }
        }

        #[test]
        fn bell_two_forms_agree(c0 in physical()) {
            let mut sq = c0.as_array().map(|x| x * x);
            sq.sort_by(|a, b| b.total_cmp(a));
            let alt = (sq[0] + sq[1] - 1.0).max(0.0).sqrt();
            prop_assert!((bell_nonlocality(&c0).unwrap() - alt).abs() <= 1e-14);
        }

        #[test]
        fn entropic_two_matches_three_pair_max(c0 in physical()) {
            let [c1, c2, c3] = c0.as_array();
            let explicit = [h(c1) + h(c2), h(c1) + h(c3), h(c2) + h(c3)]
                .into_iter()
                .map(|g| 1.0 - g)
                .fold(0.0, f64::max);
            prop_assert!((steering_entropic(&c0, Settings::Two).unwrap() - explicit).abs() <= 1e-15);
        }

        #[test]
        fn lower_family_identities(u in 0.0..=1.0f64) {
            let c0 = cv(u, u, -1.0);
            let r = all_measures(&c0, QParameter::ONE).unwrap();
            prop_assert!((r.e - u).abs() <= 1e-15);
            prop_assert!((r.n_bell - u).abs() <= 1e-15);
            prop_assert!((r.s2e - (1.0 - h(u))).abs() <= 1e-15);
            prop_assert!((r.s3e - (1.0 - h(u))).abs() <= 1e-15);
        }
    }
}
