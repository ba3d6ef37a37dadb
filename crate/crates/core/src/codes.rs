//! First-order Reed-Muller codes, masked Hamming matching of iris codes, and
//! an exhaustive maximum-likelihood decoder used as a reference.

use std::cmp::Ordering;

use crate::bits::{BitVector, TernaryVector};
use crate::error::{Error, Result};
use crate::fraction::Fraction;

/// Largest `m` for which the codeword table is built (2^(m+1) = 512 words).
pub const DEFAULT_EXHAUSTIVE_BOUND: u32 = 8;

/// RM(1,m), a `[2^m, m+1, 2^(m-1)]` binary code, with its full codeword table.
///
/// Coordinate `p` is the evaluation point `(x_1, ..., x_m)` whose bits are
/// those of `p`, with `x_1` the least significant. Messages are
/// `(a_0, a_1, ..., a_m)`; codeword `p` is `a_0 ^ a_1 x_1 ^ ... ^ a_m x_m`.
/// The table is stored in message-index order, where the index of a message
/// is `sum a_i 2^i`.
#[derive(Clone, Debug)]
pub struct ReedMullerCode {
    m: u32,
    codewords: Vec<BitVector>,
}

impl ReedMullerCode {
    pub fn new(m: u32) -> Result<Self> {
        Self::with_bound(m, DEFAULT_EXHAUSTIVE_BOUND)
    }

    pub fn with_bound(m: u32, bound: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParameter("RM(1,m) needs m >= 1".into()));
        }
        if m > bound {
            return Err(Error::ExhaustiveBound { m, max: bound });
        }
        let codewords = (0..1usize << (m + 1)).map(|idx| encode_index(m, idx)).collect();
        Ok(ReedMullerCode { m, codewords })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn length(&self) -> usize {
        1 << self.m
    }

    pub fn dimension(&self) -> usize {
        self.m as usize + 1
    }

    pub fn min_distance(&self) -> usize {
        1 << (self.m - 1)
    }

    /// All `2^(m+1)` codewords in message-index order.
    pub fn codewords(&self) -> &[BitVector] {
        &self.codewords
    }

    pub fn encode(&self, message: &BitVector) -> Result<BitVector> {
        if message.len() != self.dimension() {
            return Err(Error::LengthMismatch {
                expected: self.dimension(),
                actual: message.len(),
            });
        }
        let idx = message.iter_ones().fold(0usize, |acc, i| acc | (1 << i));
        Ok(self.codewords[idx].clone())
    }

    /// The message index of `word` if it is a codeword.
    pub fn message_index(&self, word: &BitVector) -> Option<usize> {
        if word.len() != self.length() {
            return None;
        }
        let idx = self.index_from_bits(|p| word.get(p));
        (self.codewords[idx] == *word).then_some(idx)
    }

    /// Reads the candidate message off the coordinates `0` and `2^(i-1)`.
    pub(crate) fn index_from_bits(&self, bit: impl Fn(usize) -> bool) -> usize {
        let a0 = bit(0);
        let mut idx = a0 as usize;
        for i in 1..=self.m {
            if bit(1 << (i - 1)) != a0 {
                idx |= 1 << i;
            }
        }
        idx
    }
}

/// Evaluates the affine function with message index `idx` at every point.
fn encode_index(m: u32, idx: usize) -> BitVector {
    let n = 1usize << m;
    let a0 = idx & 1 == 1;
    let linear = idx >> 1;
    let mut word = BitVector::zeros(n);
    for p in 0..n {
        let v = a0 ^ ((p & linear).count_ones() & 1 == 1);
        if v {
            word.set(p, true);
        }
    }
    word
}

pub fn rm_encode(code: &ReedMullerCode, message: &BitVector) -> Result<BitVector> {
    code.encode(message)
}

/// Codeword table of RM(1,m), refusing sizes above `bound`.
pub fn enumerate_codewords(m: u32, bound: u32) -> Result<Vec<BitVector>> {
    Ok(ReedMullerCode::with_bound(m, bound)?.codewords)
}

/// `|(i1 ^ i2) & m1 & m2| / |m1 & m2|`, with mask bit 1 meaning reliable.
pub fn masked_relative_distance(i1: &BitVector, i2: &BitVector, m1: &BitVector, m2: &BitVector) -> Result<Fraction> {
    let joint = m1.and(m2)?;
    let total = joint.count_ones();
    if total == 0 {
        return Err(Error::NoOverlap);
    }
    let diff = i1.xor(i2)?.and(&joint)?.count_ones();
    Ok(Fraction::new(diff as u64, total as u64))
}

/// Orders shifts by magnitude, negative before positive on equal magnitude.
pub fn rotation_priority(a: i64, b: i64) -> Ordering {
    a.unsigned_abs().cmp(&b.unsigned_abs()).then_with(|| a.cmp(&b))
}

/// Lowest masked distance over cyclic rotations of `(i2, m2)`.
///
/// Returns the minimum and the shift attaining it; ties go to the smallest
/// magnitude, then to the negative shift. Rotations whose joint mask is
/// empty are skipped; if all are, the result is [`Error::NoOverlap`].
pub fn rotated_best_distance(
    i1: &BitVector,
    m1: &BitVector,
    i2: &BitVector,
    m2: &BitVector,
    rotations: &[i64],
) -> Result<(Fraction, i64)> {
    if rotations.is_empty() {
        return Err(Error::InvalidParameter("empty rotation set".into()));
    }
    let mut best: Option<(Fraction, i64)> = None;
    for &r in rotations {
        let d = match masked_relative_distance(i1, &i2.rotated(r), m1, &m2.rotated(r)) {
            Ok(d) => d,
            Err(Error::NoOverlap) => continue,
            Err(e) => return Err(e),
        };
        let better = match best {
            None => true,
            Some((bd, br)) => d < bd || (d == bd && rotation_priority(r, br) == Ordering::Less),
        };
        if better {
            best = Some((d, r));
        }
    }
    best.ok_or(Error::NoOverlap)
}

/// Nearest codeword to `received` on its non-erased positions, by exhaustive
/// search. The flag is set when two or more codewords attain the minimum;
/// the first such codeword in table order is returned.
pub fn ml_decode_oracle(table: &[BitVector], received: &TernaryVector) -> Result<(BitVector, bool)> {
    let first = table
        .first()
        .ok_or_else(|| Error::InvalidParameter("empty codeword table".into()))?;
    if first.len() != received.len() {
        return Err(Error::LengthMismatch {
            expected: first.len(),
            actual: received.len(),
        });
    }
    let mut best = usize::MAX;
    let mut best_idx = 0;
    let mut ties = 0;
    for (idx, c) in table.iter().enumerate() {
        let d = received.distance_unerased(c)?;
        match d.cmp(&best) {
            Ordering::Less => {
                best = d;
                best_idx = idx;
                ties = 1;
            }
            Ordering::Equal => ties += 1,
            Ordering::Greater => {}
        }
    }
    Ok((table[best_idx].clone(), ties > 1))
}
