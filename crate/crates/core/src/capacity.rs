//! Capacity limits for fuzzy sketches on an error-and-erasure channel.
//!
//! A received word with `w_e` erasures leaves a punctured code of length
//! `N - w_e` and rate `R' = k / (N - w_e)`. Above the error fraction
//! `θ = h⁻¹(1 - R')` no code of that size decodes reliably, so the share of
//! matching pairs beyond `θ` lower-bounds the false reject rate of any
//! sketch built on a code of dimension `k`.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::fraction::Fraction;

/// Bisection steps for [`entropy_inverse`].
pub const BISECTION_STEPS: usize = 64;

/// Binary entropy in bits, with `h(0) = h(1) = 0`.
pub fn binary_entropy(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::InvalidParameter(format!("entropy argument {x} outside [0, 1]")));
    }
    if x == 0.0 || x == 1.0 {
        return Ok(0.0);
    }
    Ok(-x * x.log2() - (1.0 - x) * (1.0 - x).log2())
}

/// The `x` in `[0, 1/2]` with `h(x) = y`, by bisection.
pub fn entropy_inverse(y: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&y) {
        return Err(Error::InvalidParameter(format!("entropy value {y} outside [0, 1]")));
    }
    if y == 0.0 {
        return Ok(0.0);
    }
    if y == 1.0 {
        return Ok(0.5);
    }
    let (mut lo, mut hi) = (0.0f64, 0.5f64);
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if binary_entropy(mid)? < y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// A code of length `n` and dimension `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CapacityQuery {
    pub n: u64,
    pub k: u64,
}

impl CapacityQuery {
    pub fn new(n: u64, k: u64) -> Result<Self> {
        if k == 0 || k > n {
            return Err(Error::InvalidParameter(format!(
                "need 0 < k <= N, got k = {k}, N = {n}"
            )));
        }
        Ok(CapacityQuery { n, k })
    }
}

/// One comparison: `w_n` errors and `w_e` erasures out of `n` positions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ChannelSample {
    pub w_n: u64,
    pub w_e: u64,
    pub n: u64,
}

impl ChannelSample {
    pub fn new(w_n: u64, w_e: u64, n: u64) -> Result<Self> {
        if w_e > n || w_n > n - w_e {
            return Err(Error::InvalidParameter(format!(
                "inconsistent sample: w_n = {w_n}, w_e = {w_e}, N = {n}"
            )));
        }
        Ok(ChannelSample { w_n, w_e, n })
    }

    /// Errors per non-erased position, `None` when everything is erased.
    pub fn error_fraction(&self) -> Option<f64> {
        let m = self.n - self.w_e;
        (m > 0).then(|| self.w_n as f64 / m as f64)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Theta {
    pub value: f64,
    /// `k > N - w_e`: the punctured rate exceeds 1 and `value` is 0.
    pub rate_saturated: bool,
}

/// `θ = h⁻¹(1 - k / (N - w_e))`.
pub fn theta(q: &CapacityQuery, w_e: u64) -> Result<Theta> {
    if w_e >= q.n {
        return Err(Error::InvalidParameter(format!(
            "w_e = {w_e} leaves no unerased position out of N = {}",
            q.n
        )));
    }
    let m = q.n - w_e;
    if q.k > m {
        return Ok(Theta {
            value: 0.0,
            rate_saturated: true,
        });
    }
    let rate = q.k as f64 / m as f64;
    Ok(Theta {
        value: entropy_inverse(1.0 - rate)?,
        rate_saturated: false,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Decodability {
    /// The error fraction is at most θ.
    Decodable,
    /// The error fraction exceeds θ.
    Undecodable,
    /// Fewer unerased positions than message bits.
    RateSaturated,
    /// Every position is erased.
    AllErased,
}

impl Decodability {
    pub fn is_decodable(self) -> bool {
        self == Decodability::Decodable
    }
}

/// Whether an optimal code with ML decoding could recover this sample.
pub fn is_decodable_in_principle(s: &ChannelSample, q: &CapacityQuery) -> Result<Decodability> {
    if s.n != q.n {
        return Err(Error::InvalidParameter(format!(
            "sample length {} differs from code length {}",
            s.n, q.n
        )));
    }
    if s.w_e == s.n {
        return Ok(Decodability::AllErased);
    }
    let t = theta(q, s.w_e)?;
    if t.rate_saturated {
        return Ok(Decodability::RateSaturated);
    }
    let ratio = s.w_n as f64 / (s.n - s.w_e) as f64;
    Ok(if ratio <= t.value {
        Decodability::Decodable
    } else {
        Decodability::Undecodable
    })
}

/// Share of samples no code of dimension `k` could decode.
pub fn best_theoretical_frr(samples: &[ChannelSample], q: &CapacityQuery) -> Result<Fraction> {
    if samples.is_empty() {
        return Err(Error::InvalidParameter("empty sample list".into()));
    }
    let mut failures = 0u64;
    for s in samples {
        if !is_decodable_in_principle(s, q)?.is_decodable() {
            failures += 1;
        }
    }
    Ok(Fraction::new(failures, samples.len() as u64))
}

/// Number of words within Hamming distance `radius` of a point of `{0,1}^m`.
///
/// Exact for `m <= 100`.
pub fn hamming_sphere_volume(m: u32, radius: u32) -> u128 {
    assert!(m <= 100, "sphere volume overflows u128 for m = {m}");
    let mut binom: u128 = 1;
    let mut total: u128 = 0;
    for i in 0..=radius.min(m) {
        total += binom;
        binom = binom * (m - i) as u128 / (i + 1) as u128;
    }
    total
}

/// A list of samples sharing one length `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleSet {
    pub n: u64,
    pub samples: Vec<ChannelSample>,
}

impl SampleSet {
    /// Parses `N=<int>` followed by one `w_n,w_e` line per sample.
    /// Blank lines are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::Format("sample file is empty".into()))?;
        let n: u64 = header
            .strip_prefix("N=")
            .and_then(|v| v.trim().parse().ok())
            .ok_or_else(|| Error::Format(format!("expected header N=<int>, got {header:?}")))?;
        let mut samples = Vec::new();
        for (lineno, line) in lines {
            let bad = || Error::Format(format!("line {lineno}: expected w_n,w_e, got {line:?}"));
            let (a, b) = line.split_once(',').ok_or_else(bad)?;
            let w_n: u64 = a.trim().parse().map_err(|_| bad())?;
            let w_e: u64 = b.trim().parse().map_err(|_| bad())?;
            samples.push(ChannelSample::new(w_n, w_e, n).map_err(|e| Error::Format(format!("line {lineno}: {e}")))?);
        }
        Ok(SampleSet { n, samples })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("N={}\n", self.n);
        for s in &self.samples {
            writeln!(out, "{},{}", s.w_n, s.w_e).expect("write to String");
        }
        out
    }
}
