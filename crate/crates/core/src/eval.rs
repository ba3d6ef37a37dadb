//! FRR / FAR evaluation: enroll a template, verify a channel output, count.

use std::fmt;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::channel::{ChannelKind, ChannelModel, ChannelSimulator};
use crate::error::{Error, Result};
use crate::fraction::Fraction;
use crate::minsum::{ProductCode, DEFAULT_MAX_ITERATIONS};
use crate::sketch::{default_rotations, enroll_with, verify, EnrollOptions, Template};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvalConfig {
    pub rotations: Vec<i64>,
    pub max_iterations: usize,
    pub interleave: bool,
    pub seed: u64,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            rotations: default_rotations(),
            max_iterations: DEFAULT_MAX_ITERATIONS,
            interleave: true,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrialRecord {
    pub trial: usize,
    pub kind: ChannelKind,
    pub accepted: bool,
    pub rotation: Option<i64>,
    pub iterations: usize,
    pub status: &'static str,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvalReport {
    pub frr: Fraction,
    pub far: Fraction,
    pub trials_matching: usize,
    pub trials_non_matching: usize,
    /// Matching trials first, each kind in trial order.
    pub records: Vec<TrialRecord>,
}

pub const CSV_HEADER: &str = "trial,kind,accepted,rotation,iterations,status";

impl EvalReport {
    fn from_records(mut records: Vec<TrialRecord>) -> Self {
        records.sort_by_key(|r| (r.kind != ChannelKind::Matching, r.trial));
        let count = |kind| records.iter().filter(|r| r.kind == kind).count();
        let accepted = |kind| records.iter().filter(|r| r.kind == kind && r.accepted).count();
        let tm = count(ChannelKind::Matching);
        let tn = count(ChannelKind::NonMatching);
        let ratio = |num: usize, den: usize| {
            if den == 0 {
                Fraction::zero()
            } else {
                Fraction::new(num as u64, den as u64)
            }
        };
        EvalReport {
            frr: ratio(tm - accepted(ChannelKind::Matching), tm),
            far: ratio(accepted(ChannelKind::NonMatching), tn),
            trials_matching: tm,
            trials_non_matching: tn,
            records,
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.records {
            let rotation = r.rotation.map(|x| x.to_string()).unwrap_or_default();
            writeln!(
                out,
                "{},{},{},{},{},{}",
                r.trial,
                r.kind.as_str(),
                r.accepted,
                rotation,
                r.iterations,
                r.status
            )
            .expect("write to String");
        }
        out
    }
}

impl fmt::Display for EvalReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "frr={} ({}%) over {} matching trials",
            self.frr,
            self.frr.percent_2dp(),
            self.trials_matching
        )?;
        write!(
            f,
            "far={} ({}%) over {} non-matching trials",
            self.far,
            self.far.percent_2dp(),
            self.trials_non_matching
        )
    }
}

/// Enrolls `reference` and verifies `probe` against it.
pub fn run_trial(
    pc: &ProductCode,
    cfg: &EvalConfig,
    trial: usize,
    kind: ChannelKind,
    reference: &Template,
    probe: &Template,
    enroll_seed: u64,
) -> Result<TrialRecord> {
    let opts = EnrollOptions {
        interleave: cfg.interleave,
        ..EnrollOptions::default()
    };
    let sketch = enroll_with(reference, pc, enroll_seed, &opts)?;
    let out = verify(&sketch, probe, pc, &cfg.rotations, cfg.max_iterations)?;
    let reported = out
        .reported()
        .copied()
        .ok_or_else(|| Error::InvalidParameter("empty rotation set".into()))?;
    Ok(TrialRecord {
        trial,
        kind,
        accepted: out.accepted,
        rotation: out.best_rotation,
        iterations: reported.iterations,
        status: reported.label(),
    })
}

/// Trials on a synthetic channel: a fresh uniform template per trial is
/// enrolled, and its channel output is the probe.
///
/// Trial `i` draws its reference template and enrollment seed from stream
/// `i` of a generator keyed by `cfg.seed` and the channel kind, and its
/// channel noise from stream `i` of the model's seed.
pub fn evaluate_channel(
    pc: &ProductCode,
    cfg: &EvalConfig,
    model: &ChannelModel,
    trials: usize,
) -> Result<Vec<TrialRecord>> {
    model.validate(pc.length())?;
    let salt = match model.kind {
        ChannelKind::Matching => 0x6d61_7463_6869_6e67,
        ChannelKind::NonMatching => 0x6e6f_6e6d_6174_6368,
    };
    (0..trials)
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ salt);
            rng.set_stream(i as u64);
            let reference = Template::random(pc.length(), &mut rng)?;
            let enroll_seed: u64 = rng.gen();
            let probe = ChannelSimulator::for_trial(*model, i as u64).sample_pair(&reference)?;
            run_trial(pc, cfg, i, model.kind, &reference, &probe, enroll_seed)
        })
        .collect()
}

/// Trials on given `(reference, probe)` pairs.
pub fn evaluate_pairs(
    pc: &ProductCode,
    cfg: &EvalConfig,
    kind: ChannelKind,
    pairs: &[(Template, Template)],
) -> Result<Vec<TrialRecord>> {
    pairs
        .iter()
        .enumerate()
        .map(|(i, (reference, probe))| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(i as u64 * 2 + (kind == ChannelKind::NonMatching) as u64);
            run_trial(pc, cfg, i, kind, reference, probe, rng.gen())
        })
        .collect()
}

/// Combines matching and non-matching runs into one report.
pub fn report(matching: Vec<TrialRecord>, non_matching: Vec<TrialRecord>) -> EvalReport {
    let mut all = matching;
    all.extend(non_matching);
    EvalReport::from_records(all)
}

/// Synthetic FRR and FAR in one call.
pub fn evaluate(
    pc: &ProductCode,
    cfg: &EvalConfig,
    matching: &ChannelModel,
    trials_matching: usize,
    non_matching: &ChannelModel,
    trials_non_matching: usize,
) -> Result<EvalReport> {
    Ok(report(
        evaluate_channel(pc, cfg, matching, trials_matching)?,
        evaluate_channel(pc, cfg, non_matching, trials_non_matching)?,
    ))
}
