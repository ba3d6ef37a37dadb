//! Synthetic matching / non-matching channels and template files.

use rand::seq::index::sample as sample_indices;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bits::BitVector;
use crate::capacity::ChannelSample;
use crate::error::{Error, Result};
use crate::sketch::Template;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ChannelKind {
    /// Two captures of the same eye.
    Matching,
    /// Captures of different eyes.
    NonMatching,
}

impl ChannelKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ChannelKind::Matching => "matching",
            ChannelKind::NonMatching => "non_matching",
        }
    }
}

/// Contiguous runs of flipped bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Burst {
    pub count: usize,
    pub length: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChannelModel {
    pub kind: ChannelKind,
    /// Independent flip probability per bit.
    pub error_rate: f64,
    /// Flip exactly this many distinct, uniformly chosen bits instead of
    /// flipping each bit with `error_rate`.
    pub fixed_errors: Option<usize>,
    /// Inclusive range for the number of bits newly marked unreliable.
    pub erasures: (usize, usize),
    pub burst: Option<Burst>,
    pub seed: u64,
}

impl ChannelModel {
    pub fn matching(error_rate: f64, erasures: (usize, usize), seed: u64) -> Self {
        ChannelModel {
            kind: ChannelKind::Matching,
            error_rate,
            fixed_errors: None,
            erasures,
            burst: None,
            seed,
        }
    }

    /// Matching channel with exactly `count` flipped bits.
    pub fn fixed_errors(count: usize, erasures: (usize, usize), seed: u64) -> Self {
        ChannelModel {
            fixed_errors: Some(count),
            ..Self::matching(0.0, erasures, seed)
        }
    }

    /// Independent fair flips, standing in for a template of another eye.
    pub fn non_matching(erasures: (usize, usize), seed: u64) -> Self {
        ChannelModel {
            kind: ChannelKind::NonMatching,
            error_rate: 0.5,
            fixed_errors: None,
            erasures,
            burst: None,
            seed,
        }
    }

    pub fn with_burst(mut self, count: usize, length: usize) -> Self {
        self.burst = Some(Burst { count, length });
        self
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if !(0.0..=1.0).contains(&self.error_rate) {
            return Err(Error::InvalidParameter(format!(
                "error rate {} outside [0, 1]",
                self.error_rate
            )));
        }
        let (lo, hi) = self.erasures;
        if lo > hi || hi > n {
            return Err(Error::InvalidParameter(format!(
                "erasure range [{lo}, {hi}] invalid for length {n}"
            )));
        }
        if self.fixed_errors.is_some_and(|e| e > n) {
            return Err(Error::InvalidParameter(format!("cannot flip more than {n} bits")));
        }
        if let Some(b) = self.burst {
            if b.length > n {
                return Err(Error::InvalidParameter(format!(
                    "burst length {} exceeds template length {n}",
                    b.length
                )));
            }
        }
        Ok(())
    }
}

/// A seeded stream of channel outputs.
pub struct ChannelSimulator {
    model: ChannelModel,
    rng: ChaCha8Rng,
}

impl ChannelSimulator {
    pub fn new(model: ChannelModel) -> Self {
        ChannelSimulator {
            rng: ChaCha8Rng::seed_from_u64(model.seed),
            model,
        }
    }

    /// An independent stream for trial `index`, reproducible regardless of
    /// the order trials are run in.
    pub fn for_trial(model: ChannelModel, index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(model.seed);
        rng.set_stream(index);
        ChannelSimulator { model, rng }
    }

    pub fn model(&self) -> &ChannelModel {
        &self.model
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// A noisy copy of `base`: independent flips, then bursts at uniform
    /// cyclic offsets, then a uniformly chosen set of newly erased bits.
    pub fn sample_pair(&mut self, base: &Template) -> Result<Template> {
        let n = base.len();
        self.model.validate(n)?;
        let mut code = base.code().clone();
        match self.model.fixed_errors {
            Some(count) => {
                for i in sample_indices(&mut self.rng, n, count) {
                    code.flip(i);
                }
            }
            None => {
                let p = self.model.error_rate;
                for i in 0..n {
                    if self.rng.gen_bool(p) {
                        code.flip(i);
                    }
                }
            }
        }
        if let Some(b) = self.model.burst {
            for _ in 0..b.count {
                let start = self.rng.gen_range(0..n);
                for k in 0..b.length {
                    code.flip((start + k) % n);
                }
            }
        }
        let (lo, hi) = self.model.erasures;
        let count = self.rng.gen_range(lo..=hi);
        let mut mask = base.mask().clone();
        for i in sample_indices(&mut self.rng, n, count) {
            mask.set(i, false);
        }
        Template::new(code, mask)
    }
}

/// One channel output from a fresh stream seeded by the model.
pub fn sample_pair(model: &ChannelModel, base: &Template) -> Result<Template> {
    ChannelSimulator::new(*model).sample_pair(base)
}

/// Errors on jointly reliable bits and erasures of one pair.
pub fn compare(base: &Template, probe: &Template) -> Result<ChannelSample> {
    let joint = base.mask().and(probe.mask())?;
    let w_n = base.code().xor(probe.code())?.and(&joint)?.count_ones();
    let n = base.len();
    ChannelSample::new(w_n as u64, (n - joint.count_ones()) as u64, n as u64)
}

/// `trials` consecutive samples from one stream.
pub fn empirical_distribution(model: &ChannelModel, base: &Template, trials: usize) -> Result<Vec<ChannelSample>> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let mut sim = ChannelSimulator::new(*model);
    (0..trials).map(|_| compare(base, &sim.sample_pair(base)?)).collect()
}

/// Parses a template file, binary or hex text.
///
/// Binary records are a 4-byte big-endian bit count `N`, then `N/8` code
/// bytes and `N/8` mask bytes, bits MSB-first. Text files hold one
/// `code_hex,mask_hex` line per template.
pub fn read_templates(bytes: &[u8]) -> Result<Vec<Template>> {
    match bytes.first() {
        None => Err(Error::Format("template file is empty".into())),
        Some(b) if b.is_ascii_hexdigit() => {
            let text = std::str::from_utf8(bytes).map_err(|_| Error::Format("template text is not UTF-8".into()))?;
            parse_hex_templates(text)
        }
        Some(_) => parse_binary_templates(bytes),
    }
}

fn parse_binary_templates(mut bytes: &[u8]) -> Result<Vec<Template>> {
    let mut out = Vec::new();
    while !bytes.is_empty() {
        if bytes.len() < 4 {
            return Err(Error::Format("truncated template record header".into()));
        }
        let n = u32::from_be_bytes(bytes[..4].try_into().expect("4 bytes")) as usize;
        if n == 0 {
            return Err(Error::Format("template record with N = 0".into()));
        }
        let nb = n.div_ceil(8);
        let body = &bytes[4..];
        if body.len() < 2 * nb {
            return Err(Error::Format(format!(
                "template record {} truncated: need {} bytes, have {}",
                out.len(),
                2 * nb,
                body.len()
            )));
        }
        let code = BitVector::from_bytes_msb(&body[..nb], n)?;
        let mask = BitVector::from_bytes_msb(&body[nb..2 * nb], n)?;
        out.push(Template::new(code, mask)?);
        bytes = &body[2 * nb..];
    }
    Ok(out)
}

fn parse_hex_templates(text: &str) -> Result<Vec<Template>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let bad = |what: &str| Error::Format(format!("line {}: {what}", i + 1));
        let (c, m) = line.split_once(',').ok_or_else(|| bad("expected code_hex,mask_hex"))?;
        let code = hex::decode(c.trim()).map_err(|_| bad("invalid code hex"))?;
        let mask = hex::decode(m.trim()).map_err(|_| bad("invalid mask hex"))?;
        if code.len() != mask.len() || code.is_empty() {
            return Err(bad("code and mask must be non-empty and of equal length"));
        }
        let n = code.len() * 8;
        out.push(Template::new(
            BitVector::from_bytes_msb(&code, n)?,
            BitVector::from_bytes_msb(&mask, n)?,
        )?);
    }
    if out.is_empty() {
        return Err(Error::Format("no templates in file".into()));
    }
    Ok(out)
}

pub fn write_templates_binary(templates: &[Template]) -> Vec<u8> {
    let mut out = Vec::new();
    for t in templates {
        out.extend_from_slice(&(t.len() as u32).to_be_bytes());
        out.extend_from_slice(&t.code().to_bytes_msb());
        out.extend_from_slice(&t.mask().to_bytes_msb());
    }
    out
}

/// Hex text form; template lengths must be multiples of 8.
pub fn write_templates_hex(templates: &[Template]) -> Result<String> {
    let mut out = String::new();
    for t in templates {
        if t.len() % 8 != 0 {
            return Err(Error::InvalidParameter(format!(
                "hex template format needs a multiple of 8 bits, got {}",
                t.len()
            )));
        }
        out.push_str(&hex::encode(t.code().to_bytes_msb()));
        out.push(',');
        out.push_str(&hex::encode(t.mask().to_bytes_msb()));
        out.push('\n');
    }
    Ok(out)
}
