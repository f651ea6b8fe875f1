//! Acceptance suite. Runs every criterion at its pinned tolerance and
//! runtime bound, prints one PASS/FAIL line per criterion, and exits
//! nonzero if any criterion fails.

use std::f64::consts::{FRAC_1_SQRT_2, LN_2};
use std::fs;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use xcorr_core::channels::{apply_channel_matrix, evolve_c, kraus_set, ChannelKind, ChannelSpec};
use xcorr_core::dynamics::{
    sudden_death_closed_pf, sudden_death_time, ChronologyLink, DeathTime, PfFamilyState,
};
use xcorr_core::experiments::{hierarchy_sweep, invariance_scan, sudden_death_sweep, QMode};
use xcorr_core::linalg::max_abs_diff;
use xcorr_core::measures::{
    all_measures, bell_nonlocality, concurrence, inv_binary_entropy, q_discord, steering_entropic,
    steering_variance, Measure, QParameter, Settings,
};
use xcorr_core::oracle::{
    chsh_max_oracle, concurrence_oracle, nonlocality_from_chsh, q_discord_oracle,
    steering_f_oracle, steering_g_oracle,
};
use xcorr_core::states::{density_matrix, local_rotation, sample_states};
use xcorr_core::CVector;

// Criterion 1
const LOWER_TOL: f64 = 1e-12;
const LOWER_Q: [f64; 3] = [1.0, 2.0, 4.0];
const LOWER_BUDGET: Duration = Duration::from_secs(1);
// Criterion 2
const THRESHOLD_TOL: f64 = 1e-6;
const S3E_THRESHOLD_PRINTED: f64 = 0.6521;
const S3E_THRESHOLD_PRINTED_TOL: f64 = 5e-4;
const WERNER_BUDGET: Duration = Duration::from_secs(1);
// Criterion 3
const HIERARCHY_N: usize = 100_000;
const HIERARCHY_SEED: u64 = 42;
const HIERARCHY_SLACK: f64 = 1e-10;
const HIERARCHY_BUDGET: Duration = Duration::from_secs(60);
// Criterion 4
const ORACLE_N: usize = 1_000;
const ORACLE_SEED: u64 = 2718;
const ORACLE_TOL: f64 = 1e-10;
const DISCORD_ORACLE_TOL: f64 = 1e-6;
const DISCORD_ORACLE_Q: [f64; 3] = [1.0, 2.0, 3.0];
const ORACLE_BUDGET: Duration = Duration::from_secs(300);
// Criterion 5
const INVARIANCE_N: usize = 100_000;
const INVARIANCE_SEED: u64 = 5;
const INVARIANCE_TOL: f64 = 1e-12;
const INVARIANCE_BUDGET: Duration = Duration::from_secs(60);
// Criterion 6
const CHANNEL_N: usize = 1_000;
const CHANNEL_SEED: u64 = 6;
const CHANNEL_PARAMETERS: usize = 10;
const CHANNEL_TOL: f64 = 1e-12;
const CHANNEL_BUDGET: Duration = Duration::from_secs(30);
// Criterion 7
const DEATH_N: usize = 10_000;
const DEATH_SEED: u64 = 7;
const DEATH_CLOSED_TOL: f64 = 1e-6;
const DEATH_SPOT_TOL: f64 = 1e-9;
const DEATH_BUDGET: Duration = Duration::from_secs(120);
// Criterion 8
const DETERMINISM_N: &str = "1000";
const DETERMINISM_SEED: &str = "1";
const DETERMINISM_WORKERS: [&str; 2] = ["1", "4"];

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Self {
            passed,
            detail: detail.into(),
        }
    }
}

fn q(v: f64) -> QParameter {
    QParameter::new(v).unwrap()
}

/// Shannon entropy in bits of the bit with bias `(1 + x)/2`.
fn h_ref(x: f64) -> f64 {
    let term = |p: f64| if p > 0.0 { -p * p.log2() } else { 0.0 };
    term((1.0 + x) / 2.0) + term((1.0 - x) / 2.0)
}

/// `[(1+x)^q + (1-x)^q - 2] / ((q-1) 2^q ln 2)`, with the `q = 1` limit.
fn f_ref(x: f64, qv: f64) -> f64 {
    let xlnx = |y: f64| if y > 0.0 { y * y.ln() } else { 0.0 };
    if qv == 1.0 {
        (xlnx(1.0 + x) + xlnx(1.0 - x)) / (2.0 * LN_2)
    } else {
        ((1.0 + x).powf(qv) + (1.0 - x).powf(qv) - 2.0) / ((qv - 1.0) * 2f64.powf(qv) * LN_2)
    }
}

/// Largest `u` in `[lo, hi]` where `dead(u)` still holds, to `tol`.
fn crossing(mut lo: f64, mut hi: f64, tol: f64, dead: impl Fn(f64) -> bool) -> f64 {
    assert!(dead(lo) && !dead(hi));
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if dead(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn lower_bound_family() -> Outcome {
    let mut worst: f64 = 0.0;
    for i in 1..=10 {
        let u = i as f64 / 10.0;
        let c = CVector::new(u, u, -1.0).unwrap();
        for &qv in &LOWER_Q {
            let r = all_measures(&c, q(qv)).unwrap();
            let s = 1.0 - h_ref(u);
            for gap in [
                r.e - u,
                r.n_bell - u,
                r.s2e - s,
                r.s3e - s,
                r.d_q - f_ref(u, qv),
            ] {
                worst = worst.max(gap.abs());
            }
        }
    }
    Outcome::new(
        worst <= LOWER_TOL,
        format!("max deviation {worst:.3e} (tol {LOWER_TOL:.0e})"),
    )
}

fn werner_thresholds() -> Outcome {
    let werner = |u: f64| CVector::new(-u, -u, -u).unwrap();
    let dead = |m: Measure| move |u: f64| m.evaluate(&werner(u), QParameter::ONE).unwrap() == 0.0;
    let t_e = crossing(0.0, 1.0, THRESHOLD_TOL, dead(Measure::E));
    let t_n = crossing(0.0, 1.0, THRESHOLD_TOL, dead(Measure::N));
    let t_s = crossing(0.0, 1.0, THRESHOLD_TOL, dead(Measure::S3e));
    let inv = inv_binary_entropy(2.0 / 3.0).unwrap();
    let ok = (t_e - 1.0 / 3.0).abs() <= THRESHOLD_TOL
        && (t_n - FRAC_1_SQRT_2).abs() <= THRESHOLD_TOL
        && (t_s - inv).abs() <= THRESHOLD_TOL
        && (h_ref(inv) - 2.0 / 3.0).abs() <= 1e-12
        && (t_s - S3E_THRESHOLD_PRINTED).abs() <= S3E_THRESHOLD_PRINTED_TOL;
    Outcome::new(
        ok,
        format!(
            "E at {t_e:.7}, N at {t_n:.7}, S3e at {t_s:.7} (inverse entropy of 2/3 = {inv:.7})"
        ),
    )
}

fn hierarchy_audit() -> Outcome {
    let sweep = hierarchy_sweep(HIERARCHY_N, HIERARCHY_SEED, QMode::Uniform).unwrap();
    let names = [
        "sqrt(2^q ln2 Dq/q)>=E",
        "E>=N",
        "N>=S2e",
        "S3e>=S2e",
        "E>=S3e",
        "Dq>=f_q(E)",
    ];
    let mut counts = [0usize; 6];
    let mut worst = [0f64; 6];
    let mut taylor_q = (f64::INFINITY, f64::NEG_INFINITY);
    for p in &sweep.points {
        let r = &p.record;
        let taylor = (2f64.powf(r.q) * LN_2 * r.d_q / r.q).sqrt();
        let excess = [
            r.e - taylor,
            r.n_bell - r.e,
            r.s2e - r.n_bell,
            r.s2e - r.s3e,
            r.s3e - r.e,
            f_ref(r.e, r.q) - r.d_q,
        ];
        for (k, x) in excess.into_iter().enumerate() {
            if x > HIERARCHY_SLACK {
                counts[k] += 1;
                if k == 0 {
                    taylor_q = (taylor_q.0.min(r.q), taylor_q.1.max(r.q));
                }
            }
            worst[k] = worst[k].max(x);
        }
    }
    let detail = names
        .iter()
        .zip(counts.iter().zip(&worst))
        .map(|(n, (c, w))| format!("{n}: {c} (max {w:.2e})"))
        .collect::<Vec<_>>()
        .join(", ");
    let q_note = if counts[0] > 0 {
        format!(
            "; first link fails only for q in [{:.3}, {:.3}]",
            taylor_q.0, taylor_q.1
        )
    } else {
        String::new()
    };
    Outcome::new(
        counts.iter().all(|&c| c == 0),
        format!("violations of {HIERARCHY_N} states: {detail}{q_note}"),
    )
}

fn oracle_equivalence() -> Outcome {
    let pairs: [&[usize]; 3] = [&[1, 2], &[1, 3], &[2, 3]];
    let (r2, r3) = (2f64.sqrt(), 3f64.sqrt());
    let mut worst_closed: f64 = 0.0;
    let mut worst_discord: f64 = 0.0;
    for c in sample_states(ORACLE_N, ORACLE_SEED).unwrap() {
        let rho = density_matrix(&c);
        let f2 = pairs
            .iter()
            .map(|a| steering_f_oracle(&rho, a).unwrap())
            .fold(0.0, f64::max);
        let f3 = steering_f_oracle(&rho, &[1, 2, 3]).unwrap();
        let g2 = pairs
            .iter()
            .map(|a| steering_g_oracle(&rho, a).unwrap())
            .fold(f64::INFINITY, f64::min);
        let g3 = steering_g_oracle(&rho, &[1, 2, 3]).unwrap();
        let gaps = [
            concurrence(&c).unwrap() - concurrence_oracle(&rho).unwrap(),
            bell_nonlocality(&c).unwrap() - nonlocality_from_chsh(chsh_max_oracle(&rho).unwrap()),
            steering_variance(&c, Settings::Two).unwrap() - ((f2 - r2) / (2.0 - r2)).max(0.0),
            steering_variance(&c, Settings::Three).unwrap() - ((f3 - r3) / (3.0 - r3)).max(0.0),
            steering_entropic(&c, Settings::Two).unwrap() - (1.0 - g2).max(0.0),
            steering_entropic(&c, Settings::Three).unwrap() - (1.0 - g3 / 2.0).max(0.0),
        ];
        worst_closed = gaps.iter().fold(worst_closed, |w, g| w.max(g.abs()));
        for &qv in &DISCORD_ORACLE_Q {
            let gap = q_discord(&c, q(qv)).unwrap() - q_discord_oracle(&rho, q(qv)).unwrap();
            worst_discord = worst_discord.max(gap.abs());
        }
    }
    Outcome::new(
        worst_closed <= ORACLE_TOL && worst_discord <= DISCORD_ORACLE_TOL,
        format!(
            "E/N/F/G max gap {worst_closed:.3e} (tol {ORACLE_TOL:.0e}), Dq max gap {worst_discord:.3e} (tol {DISCORD_ORACLE_TOL:.0e})"
        ),
    )
}

fn local_unitary_invariance() -> Outcome {
    let scan = invariance_scan(INVARIANCE_N, INVARIANCE_SEED, QMode::Uniform).unwrap();
    let mut worst: f64 = 0.0;
    for p in &scan.points {
        for m in Measure::INVARIANT {
            worst = worst.max((p.after.get(m) - p.before.get(m)).abs());
        }
    }
    let c = CVector::new(1.0, 1.0, -1.0).unwrap();
    let before = steering_variance(&c, Settings::Three).unwrap();
    let after = steering_variance(&local_rotation(&c, 3).unwrap(), Settings::Three).unwrap();
    Outcome::new(
        worst <= INVARIANCE_TOL && before == 0.0 && after == 1.0,
        format!(
            "{} rotated pairs, max deviation {worst:.3e} (tol {INVARIANCE_TOL:.0e}); witness S3v {before} -> {after}",
            scan.points.len()
        ),
    )
}

fn channel_consistency() -> Outcome {
    let states = sample_states(CHANNEL_N, CHANNEL_SEED).unwrap();
    let (mut rule_gap, mut trace_gap, mut completeness): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for kind in ChannelKind::ALL {
        for j in 0..CHANNEL_PARAMETERS {
            let spec = ChannelSpec::new(kind, j as f64 / (CHANNEL_PARAMETERS - 1) as f64).unwrap();
            completeness = completeness.max(kraus_set(&spec).completeness_error());
            for c in &states {
                let out = apply_channel_matrix(&density_matrix(c), &spec).unwrap();
                let rule = density_matrix(&evolve_c(c, &spec));
                rule_gap = rule_gap.max(max_abs_diff(out.matrix(), rule.matrix()));
                trace_gap = trace_gap.max((out.matrix().trace().re - 1.0).abs());
            }
        }
    }
    Outcome::new(
        rule_gap <= CHANNEL_TOL && trace_gap <= CHANNEL_TOL && completeness <= CHANNEL_TOL,
        format!("matrix vs c-rule {rule_gap:.3e}, trace {trace_gap:.3e}, completeness {completeness:.3e} (tol {CHANNEL_TOL:.0e})"),
    )
}

fn sudden_death_chronology() -> Outcome {
    let sweep = sudden_death_sweep(DEATH_N, DEATH_SEED, ChannelKind::Pf, QMode::Uniform).unwrap();
    let mut worst_closed: f64 = 0.0;
    let mut violations = 0usize;
    for row in &sweep.rows {
        for m in Measure::INVARIANT {
            let closed = sudden_death_closed_pf(&row.state, m).unwrap();
            worst_closed = worst_closed.max(closed.distance(row.record.get(m)));
        }
        violations += ChronologyLink::ALL
            .iter()
            .filter(|l| !l.holds(&row.record))
            .count();
    }
    let spot_state = PfFamilyState::new(0.5, -0.2).unwrap();
    let spot = sudden_death_time(
        &spot_state.c(),
        ChannelKind::Pf,
        Measure::E,
        QParameter::ONE,
    )
    .unwrap();
    let spot_gap = match spot {
        DeathTime::At(t) => (t - 1.25f64.ln()).abs(),
        _ => f64::INFINITY,
    };
    Outcome::new(
        worst_closed <= DEATH_CLOSED_TOL && violations == 0 && spot_gap <= DEATH_SPOT_TOL,
        format!(
            "closed vs root finder {worst_closed:.3e} (tol {DEATH_CLOSED_TOL:.0e}), {violations} ordering violations, t_E(0.5,-0.2) gap {spot_gap:.3e}"
        ),
    )
}

fn run_sweep(dir: &Path, workers: &str) -> Vec<(String, Vec<u8>)> {
    let out = Command::new(env!("CARGO_BIN_EXE_xcorr"))
        .args([
            "sweep",
            "hierarchy",
            "--n",
            DETERMINISM_N,
            "--seed",
            DETERMINISM_SEED,
            "--no-timing",
        ])
        .args(["--workers", workers, "--out"])
        .arg(dir)
        .output()
        .expect("xcorr runs");
    let mut files: Vec<(String, Vec<u8>)> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().to_string_lossy().into_owned(),
                fs::read(e.path()).unwrap(),
            )
        })
        .collect();
    files.sort();
    files.push(("<stdout>".into(), out.stdout));
    files
}

fn determinism() -> Outcome {
    let tmp = tempfile::tempdir().unwrap();
    let runs: Vec<_> = [
        DETERMINISM_WORKERS[0],
        DETERMINISM_WORKERS[0],
        DETERMINISM_WORKERS[1],
    ]
    .iter()
    .enumerate()
    .map(|(i, w)| {
        let dir = tmp.path().join(format!("run{i}"));
        fs::create_dir(&dir).unwrap();
        run_sweep(&dir, w)
    })
    .collect();
    let same = runs[0] == runs[1] && runs[0] == runs[2];
    Outcome::new(
        same && runs[0].len() == 8,
        format!(
            "{} outputs compared across 3 runs (workers {} and {}): {}",
            runs[0].len(),
            DETERMINISM_WORKERS[0],
            DETERMINISM_WORKERS[1],
            if same { "byte-identical" } else { "differ" }
        ),
    )
}

type Criterion = (u8, &'static str, Option<Duration>, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 8] = [
        (
            1,
            "lower-bound family",
            Some(LOWER_BUDGET),
            lower_bound_family,
        ),
        (
            2,
            "Werner thresholds",
            Some(WERNER_BUDGET),
            werner_thresholds,
        ),
        (
            3,
            "hierarchy audit",
            Some(HIERARCHY_BUDGET),
            hierarchy_audit,
        ),
        (
            4,
            "oracle equivalence",
            Some(ORACLE_BUDGET),
            oracle_equivalence,
        ),
        (
            5,
            "local-unitary invariance",
            Some(INVARIANCE_BUDGET),
            local_unitary_invariance,
        ),
        (
            6,
            "channel consistency",
            Some(CHANNEL_BUDGET),
            channel_consistency,
        ),
        (
            7,
            "sudden-death chronology",
            Some(DEATH_BUDGET),
            sudden_death_chronology,
        ),
        (8, "determinism", None, determinism),
    ];
    let mut failed = 0;
    for (id, name, budget, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let in_time = budget.is_none_or(|b| elapsed <= b);
        let passed = outcome.passed && in_time;
        if !passed {
            failed += 1;
        }
        let limit = budget.map_or(String::new(), |b| format!(" / {}s", b.as_secs()));
        println!(
            "criterion {id} {}: {name}: {} [{:.2}s{limit}]",
            if passed { "PASS" } else { "FAIL" },
            outcome.detail,
            elapsed.as_secs_f64()
        );
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
