//! Fuzzy sketch enrollment and verification.
//!
//! Enrollment hides a template `b` behind a random product codeword `c`:
//! the stored word is `z = c ^ π(b)`, where `π` is a seeded interleaver that
//! moves template bits into code coordinates. Verification with a probe `b'`
//! decodes `z ^ π(b') = c ^ π(b ^ b')` with the min-sum decoder and accepts
//! if the result hashes to the stored digest of `c`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest as _, Sha256};

use crate::bits::{BitVector, TernaryVector};
use crate::codes::{rotation_priority, DEFAULT_EXHAUSTIVE_BOUND};
use crate::error::{Error, Result};
use crate::minsum::{min_sum_decode, DecodeStatus, ProductCode};

/// An iris code and its reliability mask (1 = reliable).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Template {
    code: BitVector,
    mask: BitVector,
}

impl Template {
    pub fn new(code: BitVector, mask: BitVector) -> Result<Self> {
        if code.len() != mask.len() {
            return Err(Error::LengthMismatch {
                expected: code.len(),
                actual: mask.len(),
            });
        }
        if code.is_empty() {
            return Err(Error::InvalidParameter("empty template".into()));
        }
        Ok(Template { code, mask })
    }

    /// A template whose bits are all reliable.
    pub fn unmasked(code: BitVector) -> Result<Self> {
        let mask = BitVector::ones(code.len());
        Self::new(code, mask)
    }

    /// Uniformly random code bits with a full mask.
    pub fn random(len: usize, rng: &mut impl Rng) -> Result<Self> {
        let bits: Vec<bool> = (0..len).map(|_| rng.gen()).collect();
        Self::unmasked(BitVector::from_bools(&bits))
    }

    pub fn code(&self) -> &BitVector {
        &self.code
    }

    pub fn mask(&self) -> &BitVector {
        &self.mask
    }

    pub fn len(&self) -> usize {
        self.code.len()
    }

    pub fn is_empty(&self) -> bool {
        self.code.is_empty()
    }

    pub fn erasure_count(&self) -> usize {
        self.mask.count_zeros()
    }

    /// Rejects templates with more than `max` unreliable bits.
    pub fn check_erasures(&self, max: usize) -> Result<()> {
        let e = self.erasure_count();
        if e > max {
            return Err(Error::InvalidParameter(format!(
                "template has {e} unreliable bits, limit is {max}"
            )));
        }
        Ok(())
    }

    /// Code and mask rotated cyclically by the same shift.
    pub fn rotated(&self, shift: i64) -> Template {
        Template {
            code: self.code.rotated(shift),
            mask: self.mask.rotated(shift),
        }
    }
}

/// A permutation from template positions to code coordinates.
///
/// For a nonzero seed the permutation is a Fisher-Yates shuffle of the
/// identity driven by `ChaCha8Rng::seed_from_u64(seed)`: for `i` from `n-1`
/// down to `1`, swap entries `i` and `gen_range(0..=i)`. Seed 0 is reserved
/// for the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interleaver {
    seed: u64,
    forward: Vec<u32>,
}

impl Interleaver {
    pub fn from_seed(seed: u64, len: usize) -> Self {
        let mut forward: Vec<u32> = (0..len as u32).collect();
        if seed != 0 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for i in (1..len).rev() {
                let j = rng.gen_range(0..=i);
                forward.swap(i, j);
            }
        }
        Interleaver { seed, forward }
    }

    pub fn identity(len: usize) -> Self {
        Self::from_seed(0, len)
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    /// Code coordinate receiving template position `t`.
    pub fn map(&self, t: usize) -> usize {
        self.forward[t] as usize
    }

    pub fn inverse(&self) -> Vec<usize> {
        let mut inv = vec![0; self.forward.len()];
        for (t, &c) in self.forward.iter().enumerate() {
            inv[c as usize] = t;
        }
        inv
    }

    /// Moves template-space bits into code coordinates.
    pub fn permute(&self, v: &BitVector) -> BitVector {
        assert_eq!(v.len(), self.len(), "interleaver length");
        let mut out = BitVector::zeros(v.len());
        for t in v.iter_ones() {
            out.set(self.map(t), true);
        }
        out
    }

    /// Moves code-coordinate bits back to template positions.
    pub fn unpermute(&self, v: &BitVector) -> BitVector {
        assert_eq!(v.len(), self.len(), "interleaver length");
        let inv = self.inverse();
        let mut out = BitVector::zeros(v.len());
        for c in v.iter_ones() {
            out.set(inv[c], true);
        }
        out
    }
}

/// Hash used to recognise the enrolled codeword.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum DigestAlgorithm {
    #[default]
    Sha256,
}

impl DigestAlgorithm {
    pub fn from_id(id: u8) -> Result<Self> {
        match id {
            1 => Ok(DigestAlgorithm::Sha256),
            other => Err(Error::UnknownDigest(other)),
        }
    }

    pub fn id(self) -> u8 {
        match self {
            DigestAlgorithm::Sha256 => 1,
        }
    }

    pub fn output_len(self) -> usize {
        match self {
            DigestAlgorithm::Sha256 => 32,
        }
    }

    /// Hashes the MSB-first byte packing of `word`.
    pub fn digest(self, word: &BitVector) -> Vec<u8> {
        match self {
            DigestAlgorithm::Sha256 => Sha256::digest(word.to_bytes_msb()).to_vec(),
        }
    }
}

/// Digest of `word` under the algorithm with the given id.
pub fn digest(word: &BitVector, algorithm_id: u8) -> Result<Vec<u8>> {
    Ok(DigestAlgorithm::from_id(algorithm_id)?.digest(word))
}

pub const SKETCH_MAGIC: &[u8; 4] = b"FSKT";
pub const SKETCH_VERSION: u8 = 1;
const HEADER_LEN: usize = 4 + 1 + 1 + 1 + 1 + 8;

/// The stored enrollment record.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sketch {
    pub z: BitVector,
    pub enrollment_mask: BitVector,
    pub interleaver_seed: u64,
    pub code_params: (u32, u32),
    pub check_digest: Vec<u8>,
    pub digest_algorithm: DigestAlgorithm,
}

impl Sketch {
    pub fn len(&self) -> usize {
        self.z.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z.is_empty()
    }

    /// Header `FSKT`, version, digest id, m1, m2, big-endian interleaver
    /// seed; then `z`, the enrollment mask (both MSB-first) and the digest.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(HEADER_LEN + 2 * self.z.len().div_ceil(8) + self.check_digest.len());
        out.extend_from_slice(SKETCH_MAGIC);
        out.push(SKETCH_VERSION);
        out.push(self.digest_algorithm.id());
        out.push(self.code_params.0 as u8);
        out.push(self.code_params.1 as u8);
        out.extend_from_slice(&self.interleaver_seed.to_be_bytes());
        out.extend_from_slice(&self.z.to_bytes_msb());
        out.extend_from_slice(&self.enrollment_mask.to_bytes_msb());
        out.extend_from_slice(&self.check_digest);
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < HEADER_LEN {
            return Err(Error::Format("sketch shorter than its header".into()));
        }
        if &bytes[..4] != SKETCH_MAGIC {
            return Err(Error::Format("bad sketch magic".into()));
        }
        if bytes[4] != SKETCH_VERSION {
            return Err(Error::Format(format!("unsupported sketch version {}", bytes[4])));
        }
        let algo = DigestAlgorithm::from_id(bytes[5])?;
        let (m1, m2) = (bytes[6] as u32, bytes[7] as u32);
        for m in [m1, m2] {
            if m == 0 || m > DEFAULT_EXHAUSTIVE_BOUND {
                return Err(Error::Format(format!("invalid code parameter m = {m}")));
            }
        }
        let seed = u64::from_be_bytes(bytes[8..16].try_into().expect("8 bytes"));
        let n = 1usize << (m1 + m2);
        let nb = n.div_ceil(8);
        let expected = HEADER_LEN + 2 * nb + algo.output_len();
        if bytes.len() != expected {
            return Err(Error::Format(format!(
                "sketch is {} bytes, expected {expected}",
                bytes.len()
            )));
        }
        let body = &bytes[HEADER_LEN..];
        Ok(Sketch {
            z: BitVector::from_bytes_msb(&body[..nb], n)?,
            enrollment_mask: BitVector::from_bytes_msb(&body[nb..2 * nb], n)?,
            interleaver_seed: seed,
            code_params: (m1, m2),
            check_digest: body[2 * nb..].to_vec(),
            digest_algorithm: algo,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnrollOptions {
    /// Use a random interleaver; otherwise the identity (seed 0).
    pub interleave: bool,
    pub digest: DigestAlgorithm,
}

impl Default for EnrollOptions {
    fn default() -> Self {
        EnrollOptions {
            interleave: true,
            digest: DigestAlgorithm::Sha256,
        }
    }
}

pub fn enroll(template: &Template, pc: &ProductCode, randomness_seed: u64) -> Result<Sketch> {
    enroll_with(template, pc, randomness_seed, &EnrollOptions::default())
}

/// Draws the message bits and then the interleaver seed from
/// `ChaCha8Rng::seed_from_u64(randomness_seed)`.
pub fn enroll_with(
    template: &Template,
    pc: &ProductCode,
    randomness_seed: u64,
    opts: &EnrollOptions,
) -> Result<Sketch> {
    if template.len() != pc.length() {
        return Err(Error::LengthMismatch {
            expected: pc.length(),
            actual: template.len(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(randomness_seed);
    let message: Vec<bool> = (0..pc.dimension()).map(|_| rng.gen()).collect();
    let c = pc.encode(&BitVector::from_bools(&message))?;
    let interleaver_seed = if opts.interleave {
        loop {
            let s: u64 = rng.gen();
            if s != 0 {
                break s;
            }
        }
    } else {
        0
    };
    let pi = Interleaver::from_seed(interleaver_seed, pc.length());
    let z = c.xor(&pi.permute(template.code()))?;
    Ok(Sketch {
        z,
        enrollment_mask: template.mask().clone(),
        interleaver_seed,
        code_params: pc.params(),
        check_digest: opts.digest.digest(&c),
        digest_algorithm: opts.digest,
    })
}

/// `-8, -6, ..., 8`.
pub fn default_rotations() -> Vec<i64> {
    (-8..=8).step_by(2).collect()
}

/// Outcome of decoding at one rotation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Attempt {
    pub rotation: i64,
    pub status: DecodeStatus,
    pub iterations: usize,
    /// The decoder reached a codeword whose digest matches the sketch.
    pub digest_match: bool,
}

impl Attempt {
    /// `codeword`, `wrong_codeword`, `undecided` or `max_iterations`.
    pub fn label(&self) -> &'static str {
        match (self.status, self.digest_match) {
            (DecodeStatus::Codeword, true) => "codeword",
            (DecodeStatus::Codeword, false) => "wrong_codeword",
            (s, _) => s.as_str(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyOutcome {
    pub accepted: bool,
    pub best_rotation: Option<i64>,
    /// Attempts in the order tried; the last one is the accepting attempt on success.
    pub attempts: Vec<Attempt>,
}

impl VerifyOutcome {
    /// The attempt to report: the accepting one, or the first one tried.
    pub fn reported(&self) -> Option<&Attempt> {
        if self.accepted {
            self.attempts.last()
        } else {
            self.attempts.first()
        }
    }
}

/// Tries each rotation, smallest magnitude first and negative before
/// positive, and accepts on the first one whose decoded codeword matches
/// the stored digest.
///
/// At rotation `r` the probe code and mask are rotated by `r`; a coordinate
/// is erased when its template position is unreliable in the enrollment
/// mask or in the rotated probe mask.
pub fn verify(
    sketch: &Sketch,
    probe: &Template,
    pc: &ProductCode,
    rotations: &[i64],
    max_iterations: usize,
) -> Result<VerifyOutcome> {
    if probe.len() != pc.length() {
        return Err(Error::LengthMismatch {
            expected: pc.length(),
            actual: probe.len(),
        });
    }
    if sketch.len() != pc.length() || sketch.code_params != pc.params() {
        return Err(Error::InvalidParameter(format!(
            "sketch was made for RM(1,{})xRM(1,{}), decoder uses RM(1,{})xRM(1,{})",
            sketch.code_params.0,
            sketch.code_params.1,
            pc.params().0,
            pc.params().1
        )));
    }
    let mut order = rotations.to_vec();
    order.sort_by(|a, b| rotation_priority(*a, *b));
    order.dedup();

    let pi = Interleaver::from_seed(sketch.interleaver_seed, pc.length());
    let mut attempts = Vec::with_capacity(order.len());
    for r in order {
        let rotated = probe.rotated(r);
        let received = sketch.z.xor(&pi.permute(rotated.code()))?;
        let reliable = sketch.enrollment_mask.and(rotated.mask())?;
        let erased = pi.permute(&reliable.not());
        let word = TernaryVector::with_erasures(&received, &erased)?;
        let result = min_sum_decode(&word, pc, max_iterations)?;
        let digest_match = result
            .codeword()
            .is_some_and(|c| sketch.digest_algorithm.digest(&c) == sketch.check_digest);
        attempts.push(Attempt {
            rotation: r,
            status: result.status,
            iterations: result.iterations_used,
            digest_match,
        });
        if digest_match {
            return Ok(VerifyOutcome {
                accepted: true,
                best_rotation: Some(r),
                attempts,
            });
        }
    }
    Ok(VerifyOutcome {
        accepted: false,
        best_rotation: None,
        attempts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;

    fn iris_code() -> ProductCode {
        ProductCode::new(6, 5).unwrap()
    }

    fn random_template(seed: u64, len: usize) -> Template {
        Template::random(len, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap()
    }

    #[test]
    fn template_validation() {
        assert!(Template::new(BitVector::zeros(8), BitVector::zeros(7)).is_err());
        let t = Template::new(BitVector::zeros(8), BitVector::parse("11110000").unwrap()).unwrap();
        assert_eq!(t.erasure_count(), 4);
        assert!(t.check_erasures(4).is_ok());
        assert!(t.check_erasures(3).is_err());
    }

    #[test]
    fn interleaver_is_a_bijection() {
        let pi = Interleaver::from_seed(42, 2048);
        let mut seen = vec![false; 2048];
        for t in 0..2048 {
            assert!(!seen[pi.map(t)]);
            seen[pi.map(t)] = true;
        }
        let v = random_template(1, 2048).code().clone();
        assert_eq!(pi.unpermute(&pi.permute(&v)), v);
        assert_eq!(pi.permute(&pi.unpermute(&v)), v);
        assert_ne!(pi.permute(&v), v);
        assert_eq!(Interleaver::identity(2048).permute(&v), v);
        assert_eq!(Interleaver::from_seed(42, 2048), pi);
    }

    #[test]
    fn interleaver_spreads_bursts() {
        let n = 2048;
        let row = 64;
        let burst = 512;
        let max_row_errors = |pi: &Interleaver, start: usize| {
            let mut per_row = vec![0usize; n / row];
            for t in start..start + burst {
                per_row[pi.map(t % n) / row] += 1;
            }
            per_row.into_iter().max().unwrap()
        };
        let identity = Interleaver::identity(n);
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let mut wins = 0;
        for seed in 1..=1000u64 {
            let start = rng.gen_range(0..n);
            let pi = Interleaver::from_seed(seed, n);
            if max_row_errors(&pi, start) < max_row_errors(&identity, start) {
                wins += 1;
            }
        }
        assert!(wins >= 990, "random interleaver won only {wins}/1000");
    }

    #[test]
    fn digest_properties() {
        let c = iris_code().encode(&BitVector::from_bools(&[true; 42])).unwrap();
        assert_eq!(digest(&c, 1).unwrap(), digest(&c, 1).unwrap());
        assert_eq!(digest(&c, 1).unwrap().len(), DigestAlgorithm::Sha256.output_len());
        assert_eq!(digest(&c, 9), Err(Error::UnknownDigest(9)));
        let base = digest(&c, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..1000 {
            let mut e = c.clone();
            e.flip(rng.gen_range(0..c.len()));
            assert_ne!(digest(&e, 1).unwrap(), base);
        }
    }

    #[test]
    fn sketch_hides_a_codeword() {
        let pc = iris_code();
        let t = random_template(2, 2048);
        for seed in 0..20 {
            let s = enroll(&t, &pc, seed).unwrap();
            let pi = Interleaver::from_seed(s.interleaver_seed, 2048);
            let c = s.z.xor(&pi.permute(t.code())).unwrap();
            assert!(pc.is_codeword(&c));
            assert_eq!(DigestAlgorithm::Sha256.digest(&c), s.check_digest);
            assert_ne!(s.interleaver_seed, 0);
        }
    }

    #[test]
    fn enroll_is_deterministic_and_seed_sensitive() {
        let pc = iris_code();
        let t = random_template(3, 2048);
        assert_eq!(enroll(&t, &pc, 5).unwrap(), enroll(&t, &pc, 5).unwrap());
        let zs: std::collections::HashSet<_> = (0..200).map(|s| enroll(&t, &pc, s).unwrap().z).collect();
        assert_eq!(zs.len(), 200);
    }

    #[test]
    fn enroll_rejects_wrong_length() {
        let pc = iris_code();
        assert!(matches!(
            enroll(&random_template(1, 1024), &pc, 0),
            Err(Error::LengthMismatch {
                expected: 2048,
                actual: 1024
            })
        ));
    }

    #[test]
    fn identity_interleaver_option() {
        let pc = iris_code();
        let t = random_template(6, 2048);
        let opts = EnrollOptions {
            interleave: false,
            ..EnrollOptions::default()
        };
        let s = enroll_with(&t, &pc, 1, &opts).unwrap();
        assert_eq!(s.interleaver_seed, 0);
        assert!(pc.is_codeword(&s.z.xor(t.code()).unwrap()));
        assert!(verify(&s, &t, &pc, &[0], 20).unwrap().accepted);
    }

    #[test]
    fn z_bits_are_unbiased() {
        // Bit frequencies of z over many enrollments of one template.
        let pc = iris_code();
        let t = random_template(8, 2048);
        let trials = 400;
        let mut ones = vec![0u32; 2048];
        for seed in 0..trials {
            for i in enroll(&t, &pc, seed).unwrap().z.iter_ones() {
                ones[i] += 1;
            }
        }
        let mean: f64 = ones.iter().map(|&o| o as f64 / trials as f64).sum::<f64>() / 2048.0;
        assert!((mean - 0.5).abs() < 0.01, "mean {mean}");
        // 6 sigma per bit for 400 fair trials.
        assert!(ones.iter().all(|&o| (o as f64 - 200.0).abs() < 60.0));
    }

    #[test]
    fn verify_same_template_accepts_at_zero() {
        let pc = iris_code();
        let t = random_template(10, 2048);
        let s = enroll(&t, &pc, 77).unwrap();
        let out = verify(&s, &t, &pc, &default_rotations(), 20).unwrap();
        assert!(out.accepted);
        assert_eq!(out.best_rotation, Some(0));
        assert_eq!(out.attempts.len(), 1);
        assert_eq!(out.reported().unwrap().label(), "codeword");
    }

    #[test]
    fn verify_tolerates_errors_below_half_distance() {
        let pc = iris_code();
        let t = random_template(11, 2048);
        let s = enroll(&t, &pc, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let mut code = t.code().clone();
        let mut flipped = std::collections::HashSet::new();
        while flipped.len() < 255 {
            flipped.insert(rng.gen_range(0..2048));
        }
        for &i in &flipped {
            code.flip(i);
        }
        let probe = Template::unmasked(code).unwrap();
        let out = verify(&s, &probe, &pc, &[0], 20).unwrap();
        assert!(out.accepted);
        assert!(out.attempts[0].iterations <= 2);
    }

    #[test]
    fn verify_finds_rotated_probe() {
        let pc = iris_code();
        let t = random_template(13, 2048);
        let s = enroll(&t, &pc, 2).unwrap();
        let probe = t.rotated(4);
        let out = verify(&s, &probe, &pc, &default_rotations(), 20).unwrap();
        assert!(out.accepted);
        assert_eq!(out.best_rotation, Some(-4));
        let order: Vec<i64> = out.attempts.iter().map(|a| a.rotation).collect();
        assert_eq!(order, vec![0, -2, 2, -4]);
    }

    #[test]
    fn verify_rejects_unrelated_template() {
        let pc = iris_code();
        let s = enroll(&random_template(14, 2048), &pc, 3).unwrap();
        let out = verify(&s, &random_template(15, 2048), &pc, &default_rotations(), 20).unwrap();
        assert!(!out.accepted);
        assert_eq!(out.best_rotation, None);
        assert_eq!(out.attempts.len(), 9);
    }

    #[test]
    fn verify_uses_masks_as_erasures() {
        let pc = iris_code();
        let t = random_template(16, 2048);
        let s = enroll(&t, &pc, 4).unwrap();
        // Garble 900 bits but mark them unreliable in the probe.
        let mut code = t.code().clone();
        let mut mask = BitVector::ones(2048);
        for i in 0..900 {
            code.flip(i * 2);
            mask.set(i * 2, false);
        }
        let probe = Template::new(code.clone(), mask).unwrap();
        assert!(verify(&s, &probe, &pc, &[0], 20).unwrap().accepted);
        let unmasked = Template::unmasked(code).unwrap();
        assert!(!verify(&s, &unmasked, &pc, &[0], 20).unwrap().accepted);
    }

    #[test]
    fn sketch_format_layout() {
        let pc = ProductCode::new(2, 1).unwrap();
        let t = Template::new(
            BitVector::parse("10110010").unwrap(),
            BitVector::parse("11111110").unwrap(),
        )
        .unwrap();
        let s = enroll(&t, &pc, 9).unwrap();
        let bytes = s.to_bytes();
        assert_eq!(&bytes[..4], b"FSKT");
        assert_eq!(bytes[4..8], [1, 1, 2, 1]);
        assert_eq!(bytes[8..16], s.interleaver_seed.to_be_bytes());
        assert_eq!(bytes[16], s.z.to_bytes_msb()[0]);
        assert_eq!(bytes[17], 0b1111_1110);
        assert_eq!(&bytes[18..], &s.check_digest[..]);
        assert_eq!(bytes.len(), 16 + 2 + 32);
    }

    #[test]
    fn sketch_parse_errors() {
        let pc = iris_code();
        let bytes = enroll(&random_template(1, 2048), &pc, 1).unwrap().to_bytes();
        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(matches!(Sketch::from_bytes(&bad), Err(Error::Format(_))));
        let mut bad = bytes.clone();
        bad[4] = 2;
        assert!(Sketch::from_bytes(&bad).is_err());
        let mut bad = bytes.clone();
        bad[5] = 7;
        assert_eq!(Sketch::from_bytes(&bad), Err(Error::UnknownDigest(7)));
        let mut bad = bytes.clone();
        bad[6] = 9;
        assert!(Sketch::from_bytes(&bad).is_err());
        assert!(Sketch::from_bytes(&bytes[..bytes.len() - 1]).is_err());
        assert!(Sketch::from_bytes(&bytes[..10]).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn sketch_bytes_round_trip(tseed in any::<u64>(), eseed in any::<u64>(), m1 in 1u32..=4, m2 in 1u32..=4) {
            let pc = ProductCode::new(m1, m2).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(tseed);
            let code = BitVector::from_bools(&(0..pc.length()).map(|_| rng.gen()).collect::<Vec<_>>());
            let mask = BitVector::from_bools(&(0..pc.length()).map(|_| rng.gen_bool(0.8)).collect::<Vec<_>>());
            let s = enroll(&Template::new(code, mask).unwrap(), &pc, eseed).unwrap();
            prop_assert_eq!(Sketch::from_bytes(&s.to_bytes()).unwrap(), s);
        }

        #[test]
        fn enroll_verify_round_trip(tseed in any::<u64>(), eseed in any::<u64>()) {
            let pc = ProductCode::new(4, 3).unwrap();
            let t = random_template(tseed, pc.length());
            let s = enroll(&t, &pc, eseed).unwrap();
            let out = verify(&s, &t, &pc, &default_rotations(), 20).unwrap();
            prop_assert!(out.accepted);
            prop_assert_eq!(out.best_rotation, Some(0));
        }
    }
}
