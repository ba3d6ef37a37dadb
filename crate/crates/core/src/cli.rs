//! The `fsk` command line.
//!
//! Exit codes: 0 success or accept, 1 reject, 2 bad input.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bits::{BitVector, TernaryVector};
use crate::capacity::{best_theoretical_frr, CapacityQuery, SampleSet};
use crate::channel::{
    empirical_distribution, read_templates, write_templates_binary, write_templates_hex, ChannelKind, ChannelModel,
    ChannelSimulator,
};
use crate::error::{Error, Result};
use crate::eval::{evaluate_channel, evaluate_pairs, report, EvalConfig};
use crate::minsum::{min_sum_decode, ProductCode, DEFAULT_MAX_ITERATIONS};
use crate::sketch::{enroll_with, verify, EnrollOptions, Sketch, Template};

pub const EXIT_OK: i32 = 0;
pub const EXIT_REJECT: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "fsk", version, about = "Iris fuzzy sketches with Reed-Muller product codes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Encode a message with the product code.
    Encode(EncodeArgs),
    /// Min-sum decode a received word (0, 1, ? for erasures).
    Decode(DecodeArgs),
    /// Create or perturb template files.
    #[command(subcommand)]
    Template(TemplateCommand),
    /// Enroll a template or verify a probe against a sketch.
    #[command(subcommand)]
    Sketch(SketchCommand),
    /// Write an error/erasure sample file from a synthetic channel.
    Simulate(SimulateArgs),
    /// Best theoretical FRR per code dimension for a sample file.
    Capacity(CapacityArgs),
    /// Measure FRR and FAR with enroll + verify trials.
    Evaluate(EvaluateArgs),
}

/// `m1,m2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CodeParams(pub u32, pub u32);

impl FromStr for CodeParams {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (a, b) = s.split_once(',').ok_or("expected m1,m2")?;
        let m1 = a.trim().parse().map_err(|_| format!("bad m1 {a:?}"))?;
        let m2 = b.trim().parse().map_err(|_| format!("bad m2 {b:?}"))?;
        Ok(CodeParams(m1, m2))
    }
}

/// `min:step:max`, inclusive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RotationRange(pub Vec<i64>);

impl FromStr for RotationRange {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let nums: Vec<i64> = parts
            .iter()
            .map(|p| p.trim().parse::<i64>().map_err(|_| format!("bad rotation bound {p:?}")))
            .collect::<std::result::Result<_, _>>()?;
        let (lo, step, hi) = match nums[..] {
            [x] => (x, 1, x),
            [lo, step, hi] => (lo, step, hi),
            _ => return Err("expected min:step:max".into()),
        };
        if step <= 0 || lo > hi {
            return Err("rotation range needs min <= max and a positive step".into());
        }
        Ok(RotationRange((lo..=hi).step_by(step as usize).collect()))
    }
}

/// `a:b` inclusive, or a single value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Range(pub usize, pub usize);

impl FromStr for Range {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parse = |x: &str| x.trim().parse::<usize>().map_err(|_| format!("bad count {x:?}"));
        match s.split_once(':') {
            Some((a, b)) => Ok(Range(parse(a)?, parse(b)?)),
            None => {
                let v = parse(s)?;
                Ok(Range(v, v))
            }
        }
    }
}

/// `count:length`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BurstSpec(pub usize, pub usize);

impl FromStr for BurstSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (a, b) = s.split_once(':').ok_or("expected count:length")?;
        let parse = |x: &str| x.trim().parse::<usize>().map_err(|_| format!("bad number {x:?}"));
        Ok(BurstSpec(parse(a)?, parse(b)?))
    }
}

/// `k1,k2,...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimList(pub Vec<u64>);

impl FromStr for DimList {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        s.split(',')
            .map(|x| x.trim().parse::<u64>().map_err(|_| format!("bad dimension {x:?}")))
            .collect::<std::result::Result<Vec<_>, _>>()
            .map(DimList)
    }
}

#[derive(Args, Debug, Clone)]
pub struct CodeOpts {
    /// Reed-Muller orders of the row and column codes.
    #[arg(long, default_value = "6,5")]
    pub code: CodeParams,
}

impl CodeOpts {
    fn product_code(&self) -> Result<ProductCode> {
        ProductCode::new(self.code.0, self.code.1)
    }
}

#[derive(Args, Debug, Clone)]
pub struct SeedOpt {
    /// Seed for every random choice; falls back to $FSK_SEED, then 0.
    #[arg(long, env = "FSK_SEED", default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug, Clone)]
pub struct DecodeOpts {
    /// Iteration budget (one iteration = row pass + column pass).
    #[arg(long, default_value_t = DEFAULT_MAX_ITERATIONS)]
    pub iters: usize,
    /// Rotation shifts as min:step:max.
    #[arg(long, default_value = "-8:2:8", allow_hyphen_values = true)]
    pub rotations: RotationRange,
}

#[derive(Args, Debug, Clone)]
pub struct ChannelOpts {
    /// Independent bit flip probability on the matching channel.
    #[arg(long, default_value_t = 0.10)]
    pub p: f64,
    /// Flip exactly this many bits instead of using --p.
    #[arg(long)]
    pub errors: Option<usize>,
    /// Number of newly unreliable bits, a:b (uniform) or a single count.
    #[arg(long, default_value = "0:0")]
    pub erasures: Range,
    /// Burst errors as count:length.
    #[arg(long)]
    pub bursts: Option<BurstSpec>,
}

impl ChannelOpts {
    fn model(&self, kind: ChannelKind, seed: u64) -> ChannelModel {
        let erasures = (self.erasures.0, self.erasures.1);
        let mut m = match (kind, self.errors) {
            (ChannelKind::NonMatching, _) => ChannelModel::non_matching(erasures, seed),
            (ChannelKind::Matching, Some(e)) => ChannelModel::fixed_errors(e, erasures, seed),
            (ChannelKind::Matching, None) => ChannelModel::matching(self.p, erasures, seed),
        };
        if let Some(BurstSpec(count, length)) = self.bursts {
            m = m.with_burst(count, length);
        }
        m
    }
}

#[derive(Args, Debug)]
pub struct EncodeArgs {
    #[command(flatten)]
    pub code: CodeOpts,
    /// Message bits, k2 rows of k1 bits, row-major.
    #[arg(long)]
    pub message: String,
}

#[derive(Args, Debug)]
pub struct DecodeArgs {
    #[command(flatten)]
    pub code: CodeOpts,
    /// Received word of 0, 1 and ? (erasure), row-major.
    #[arg(long)]
    pub received: String,
    #[arg(long, default_value_t = DEFAULT_MAX_ITERATIONS)]
    pub iters: usize,
}

#[derive(Subcommand, Debug)]
pub enum TemplateCommand {
    /// Uniformly random template with a full mask.
    Random {
        #[arg(long, default_value_t = 2048)]
        length: usize,
        #[arg(long)]
        out: PathBuf,
        /// Write hex text instead of binary records.
        #[arg(long)]
        hex: bool,
        #[command(flatten)]
        seed: SeedOpt,
    },
    /// Pass each template of a file through a synthetic channel.
    Perturb {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = Kind::Matching)]
        kind: Kind,
        #[command(flatten)]
        channel: ChannelOpts,
        #[arg(long)]
        hex: bool,
        #[command(flatten)]
        seed: SeedOpt,
    },
}

#[derive(Subcommand, Debug)]
pub enum SketchCommand {
    /// Write a sketch for the first template of a file.
    Enroll {
        #[arg(long)]
        template: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        code: CodeOpts,
        /// Use the identity interleaver.
        #[arg(long)]
        no_interleave: bool,
        #[command(flatten)]
        seed: SeedOpt,
    },
    /// Check the first template of a file against a sketch.
    Verify {
        #[arg(long)]
        sketch: PathBuf,
        #[arg(long)]
        probe: PathBuf,
        #[command(flatten)]
        decode: DecodeOpts,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Matching,
    NonMatching,
}

impl From<Kind> for ChannelKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Matching => ChannelKind::Matching,
            Kind::NonMatching => ChannelKind::NonMatching,
        }
    }
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[arg(long, value_enum, default_value_t = Kind::Matching)]
    pub kind: Kind,
    #[command(flatten)]
    pub channel: ChannelOpts,
    /// Template length in bits.
    #[arg(long, default_value_t = 2048)]
    pub length: usize,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub seed: SeedOpt,
}

#[derive(Args, Debug)]
pub struct CapacityArgs {
    /// Sample file: `N=<int>` then `w_n,w_e` lines.
    #[arg(long)]
    pub samples: PathBuf,
    /// Code dimensions to evaluate.
    #[arg(long, default_value = "42,64,80,128")]
    pub dims: DimList,
    /// Write the table here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct EvaluateArgs {
    #[command(flatten)]
    pub code: CodeOpts,
    #[command(flatten)]
    pub decode: DecodeOpts,
    #[command(flatten)]
    pub channel: ChannelOpts,
    /// Trials per channel unless overridden below.
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long)]
    pub trials_matching: Option<usize>,
    #[arg(long)]
    pub trials_non_matching: Option<usize>,
    /// Template file of (reference, probe) pairs replacing the synthetic matching run.
    #[arg(long)]
    pub matching_pairs: Option<PathBuf>,
    /// Template file of (reference, probe) pairs replacing the synthetic non-matching run.
    #[arg(long)]
    pub non_matching_pairs: Option<PathBuf>,
    #[arg(long)]
    pub no_interleave: bool,
    /// Per-trial CSV output.
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub seed: SeedOpt,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let rendered = e.render().to_string();
            if code == EXIT_OK {
                let _ = write!(out, "{rendered}");
            } else {
                let _ = write!(err, "{rendered}");
            }
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INPUT
        }
    }
}

fn io_err(e: std::io::Error) -> Error {
    Error::Io(e.to_string())
}

fn read_file(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn first_template(path: &Path) -> Result<Template> {
    read_templates(&read_file(path)?)?
        .into_iter()
        .next()
        .ok_or_else(|| Error::Format(format!("{}: no template", path.display())))
}

fn template_pairs(path: &Path) -> Result<Vec<(Template, Template)>> {
    let ts = read_templates(&read_file(path)?)?;
    if ts.len() % 2 != 0 {
        return Err(Error::Format(format!(
            "{}: pair files need an even number of templates, found {}",
            path.display(),
            ts.len()
        )));
    }
    Ok(ts.chunks_exact(2).map(|p| (p[0].clone(), p[1].clone())).collect())
}

fn write_templates(path: &Path, ts: &[Template], hex: bool) -> Result<()> {
    if hex {
        write_file(path, write_templates_hex(ts)?.as_bytes())
    } else {
        write_file(path, &write_templates_binary(ts))
    }
}

fn execute(cmd: Command, out: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Encode(a) => {
            let pc = a.code.product_code()?;
            let word = pc.encode(&BitVector::parse(&a.message)?)?;
            writeln!(out, "{word}").map_err(io_err)?;
            Ok(EXIT_OK)
        }
        Command::Decode(a) => {
            let pc = a.code.product_code()?;
            let r = min_sum_decode(&TernaryVector::parse(&a.received)?, &pc, a.iters)?;
            writeln!(out, "status={} iterations={}", r.status.as_str(), r.iterations_used).map_err(io_err)?;
            writeln!(out, "{}", r.word).map_err(io_err)?;
            Ok(EXIT_OK)
        }
        Command::Template(t) => cmd_template(t),
        Command::Sketch(s) => cmd_sketch(s, out),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Capacity(a) => cmd_capacity(a, out),
        Command::Evaluate(a) => cmd_evaluate(a, out),
    }
}

fn cmd_template(cmd: TemplateCommand) -> Result<i32> {
    match cmd {
        TemplateCommand::Random { length, out, hex, seed } => {
            if length == 0 {
                return Err(Error::InvalidParameter("length must be positive".into()));
            }
            let t = Template::random(length, &mut ChaCha8Rng::seed_from_u64(seed.seed))?;
            write_templates(&out, &[t], hex)?;
        }
        TemplateCommand::Perturb {
            input,
            out,
            kind,
            channel,
            hex,
            seed,
        } => {
            let ts = read_templates(&read_file(&input)?)?;
            let model = channel.model(kind.into(), seed.seed);
            let noisy = ts
                .iter()
                .enumerate()
                .map(|(i, t)| ChannelSimulator::for_trial(model, i as u64).sample_pair(t))
                .collect::<Result<Vec<_>>>()?;
            write_templates(&out, &noisy, hex)?;
        }
    }
    Ok(EXIT_OK)
}

pub fn cmd_sketch(cmd: SketchCommand, out: &mut dyn Write) -> Result<i32> {
    match cmd {
        SketchCommand::Enroll {
            template,
            out: path,
            code,
            no_interleave,
            seed,
        } => {
            let pc = code.product_code()?;
            let t = first_template(&template)?;
            let opts = EnrollOptions {
                interleave: !no_interleave,
                ..EnrollOptions::default()
            };
            let sketch = enroll_with(&t, &pc, seed.seed, &opts)?;
            write_file(&path, &sketch.to_bytes())?;
            Ok(EXIT_OK)
        }
        SketchCommand::Verify { sketch, probe, decode } => {
            let sketch = Sketch::from_bytes(&read_file(&sketch)?)?;
            let (m1, m2) = sketch.code_params;
            let pc = ProductCode::new(m1, m2)?;
            let probe = first_template(&probe)?;
            let outcome = verify(&sketch, &probe, &pc, &decode.rotations.0, decode.iters)?;
            let reported = outcome.reported();
            if outcome.accepted {
                let a = reported.expect("accepted outcome has an attempt");
                writeln!(out, "accepted rotation={} iterations={}", a.rotation, a.iterations).map_err(io_err)?;
                Ok(EXIT_OK)
            } else {
                writeln!(out, "rejected attempts={}", outcome.attempts.len()).map_err(io_err)?;
                Ok(EXIT_REJECT)
            }
        }
    }
}

pub fn cmd_simulate(a: SimulateArgs) -> Result<i32> {
    if a.length == 0 {
        return Err(Error::InvalidParameter("length must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed.seed);
    let base = Template::random(a.length, &mut rng)?;
    let model = a.channel.model(a.kind.into(), a.seed.seed.wrapping_add(1));
    let samples = empirical_distribution(&model, &base, a.trials)?;
    let set = SampleSet {
        n: a.length as u64,
        samples,
    };
    write_file(&a.out, set.to_text().as_bytes())?;
    Ok(EXIT_OK)
}

pub fn cmd_capacity(a: CapacityArgs, out: &mut dyn Write) -> Result<i32> {
    let text = String::from_utf8(read_file(&a.samples)?)
        .map_err(|_| Error::Format(format!("{}: not UTF-8", a.samples.display())))?;
    let set = SampleSet::parse(&text)?;
    let mut table = String::from("dimension,best_frr_percent\n");
    for &k in &a.dims.0 {
        let q = CapacityQuery::new(set.n, k)?;
        let frr = best_theoretical_frr(&set.samples, &q)?;
        table.push_str(&format!("{k},{}\n", frr.percent_2dp()));
    }
    match &a.out {
        Some(path) => write_file(path, table.as_bytes())?,
        None => out.write_all(table.as_bytes()).map_err(io_err)?,
    }
    Ok(EXIT_OK)
}

pub fn cmd_evaluate(a: EvaluateArgs, out: &mut dyn Write) -> Result<i32> {
    let pc = a.code.product_code()?;
    let cfg = EvalConfig {
        rotations: a.decode.rotations.0.clone(),
        max_iterations: a.decode.iters,
        interleave: !a.no_interleave,
        seed: a.seed.seed,
    };
    let tm = a.trials_matching.unwrap_or(a.trials);
    let tn = a.trials_non_matching.unwrap_or(a.trials);
    let matching = match &a.matching_pairs {
        Some(path) => evaluate_pairs(&pc, &cfg, ChannelKind::Matching, &template_pairs(path)?)?,
        None => {
            let model = a.channel.model(ChannelKind::Matching, a.seed.seed.wrapping_add(1));
            evaluate_channel(&pc, &cfg, &model, tm)?
        }
    };
    let non_matching = match &a.non_matching_pairs {
        Some(path) => evaluate_pairs(&pc, &cfg, ChannelKind::NonMatching, &template_pairs(path)?)?,
        None => {
            let model = a.channel.model(ChannelKind::NonMatching, a.seed.seed.wrapping_add(2));
            evaluate_channel(&pc, &cfg, &model, tn)?
        }
    };
    let rep = report(matching, non_matching);
    write_file(&a.out, rep.to_csv().as_bytes())?;
    writeln!(out, "{rep}").map_err(io_err)?;
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_value_syntaxes() {
        assert_eq!("6,5".parse::<CodeParams>().unwrap(), CodeParams(6, 5));
        assert_eq!(
            "-8:2:8".parse::<RotationRange>().unwrap().0,
            vec![-8, -6, -4, -2, 0, 2, 4, 6, 8]
        );
        assert_eq!("0".parse::<RotationRange>().unwrap().0, vec![0]);
        assert!("1:0:4".parse::<RotationRange>().is_err());
        assert!("4:1:1".parse::<RotationRange>().is_err());
        assert_eq!("512:1977".parse::<Range>().unwrap(), Range(512, 1977));
        assert_eq!("300".parse::<Range>().unwrap(), Range(300, 300));
        assert_eq!("4:128".parse::<BurstSpec>().unwrap(), BurstSpec(4, 128));
        assert_eq!("42,64".parse::<DimList>().unwrap().0, vec![42, 64]);
    }

    #[test]
    fn encode_and_decode_commands() {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            ["fsk", "encode", "--code", "2,2", "--message", "100000000"],
            &mut out,
            &mut err,
        );
        assert_eq!(code, EXIT_OK, "{}", String::from_utf8_lossy(&err));
        assert_eq!(String::from_utf8(out).unwrap(), "1111111111111111\n");

        let mut out = Vec::new();
        let code = run(
            ["fsk", "decode", "--code", "2,2", "--received", "0100000000000000"],
            &mut out,
            &mut err,
        );
        assert_eq!(code, EXIT_OK);
        let text = String::from_utf8(out).unwrap();
        assert!(text.starts_with("status=codeword"));
        assert!(text.ends_with("0000000000000000\n"));
    }

    #[test]
    fn usage_errors_exit_2() {
        let mut out = Vec::new();
        let mut err = Vec::new();
        assert_eq!(
            run(["fsk", "encode", "--code", "9,5", "--message", "1"], &mut out, &mut err),
            EXIT_INPUT
        );
        assert_eq!(run(["fsk", "nonsense"], &mut out, &mut err), EXIT_INPUT);
        assert_eq!(run(["fsk", "--help"], &mut out, &mut err), EXIT_OK);
    }
}
