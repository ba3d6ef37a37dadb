//! Packed bit vectors and ternary (0/1/erased) words.

use std::fmt;

use crate::error::{Error, Result};

const WORD: usize = 64;

/// Fixed-length binary vector, packed 64 bits per word.
///
/// Bits beyond `len` in the last word are always zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    words: Vec<u64>,
    len: usize,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        BitVector {
            words: vec![0; len.div_ceil(WORD)],
            len,
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = BitVector {
            words: vec![u64::MAX; len.div_ceil(WORD)],
            len,
        };
        v.clear_tail();
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// Parses a string of `0`/`1` characters. Whitespace and `_` are ignored.
    pub fn parse(s: &str) -> Result<Self> {
        let mut bits = Vec::with_capacity(s.len());
        for ch in s.chars() {
            match ch {
                '0' => bits.push(false),
                '1' => bits.push(true),
                c if c.is_whitespace() || c == '_' => {}
                c => return Err(Error::Format(format!("unexpected character {c:?} in bit string"))),
            }
        }
        Ok(Self::from_bools(&bits))
    }

    /// Reads `len` bits from `bytes`; bit 0 is the most significant bit of byte 0.
    pub fn from_bytes_msb(bytes: &[u8], len: usize) -> Result<Self> {
        let needed = len.div_ceil(8);
        if bytes.len() != needed {
            return Err(Error::LengthMismatch {
                expected: needed,
                actual: bytes.len(),
            });
        }
        let mut v = Self::zeros(len);
        for i in 0..len {
            if bytes[i / 8] & (0x80 >> (i % 8)) != 0 {
                v.set(i, true);
            }
        }
        Ok(v)
    }

    /// Packs the bits MSB-first; trailing pad bits of the last byte are zero.
    pub fn to_bytes_msb(&self) -> Vec<u8> {
        let mut out = vec![0u8; self.len.div_ceil(8)];
        for i in self.iter_ones() {
            out[i / 8] |= 0x80 >> (i % 8);
        }
        out
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn count_zeros(&self) -> usize {
        self.len - self.count_ones()
    }

    fn check_len(&self, other: &BitVector) -> Result<()> {
        if self.len != other.len {
            return Err(Error::LengthMismatch {
                expected: self.len,
                actual: other.len,
            });
        }
        Ok(())
    }

    pub fn xor(&self, other: &BitVector) -> Result<BitVector> {
        self.check_len(other)?;
        Ok(self.zip_words(other, |a, b| a ^ b))
    }

    pub fn and(&self, other: &BitVector) -> Result<BitVector> {
        self.check_len(other)?;
        Ok(self.zip_words(other, |a, b| a & b))
    }

    pub fn or(&self, other: &BitVector) -> Result<BitVector> {
        self.check_len(other)?;
        Ok(self.zip_words(other, |a, b| a | b))
    }

    pub fn not(&self) -> BitVector {
        let mut v = BitVector {
            words: self.words.iter().map(|w| !w).collect(),
            len: self.len,
        };
        v.clear_tail();
        v
    }

    pub fn hamming_distance(&self, other: &BitVector) -> Result<usize> {
        self.check_len(other)?;
        Ok(self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum())
    }

    /// Cyclic rotation: bit `i` of the result is bit `(i - shift) mod len` of `self`.
    ///
    /// A positive shift moves content towards higher indices.
    pub fn rotated(&self, shift: i64) -> BitVector {
        if self.len == 0 {
            return self.clone();
        }
        let n = self.len as i64;
        let s = shift.rem_euclid(n) as usize;
        if s == 0 {
            return self.clone();
        }
        let mut out = BitVector::zeros(self.len);
        for i in self.iter_ones() {
            out.set((i + s) % self.len, true);
        }
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Indices of set bits in increasing order.
    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let tz = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * WORD + tz)
                }
            })
        })
    }

    fn zip_words(&self, other: &BitVector, f: impl Fn(u64, u64) -> u64) -> BitVector {
        BitVector {
            words: self.words.iter().zip(&other.words).map(|(&a, &b)| f(a, b)).collect(),
            len: self.len,
        }
    }

    fn clear_tail(&mut self) {
        let rem = self.len % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// A received symbol: a known bit or an erasure at a known location.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Trit {
    Zero,
    One,
    Erased,
}

impl Trit {
    pub fn from_bit(b: bool) -> Self {
        if b {
            Trit::One
        } else {
            Trit::Zero
        }
    }

    pub fn bit(self) -> Option<bool> {
        match self {
            Trit::Zero => Some(false),
            Trit::One => Some(true),
            Trit::Erased => None,
        }
    }

    pub fn is_erased(self) -> bool {
        self == Trit::Erased
    }
}

/// Word over {0, 1, erased}. Also used for hard decisions, where an erased
/// symbol means "undecided".
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TernaryVector {
    symbols: Vec<Trit>,
}

impl TernaryVector {
    pub fn from_trits(symbols: Vec<Trit>) -> Self {
        TernaryVector { symbols }
    }

    pub fn from_bits(bits: &BitVector) -> Self {
        TernaryVector {
            symbols: bits.iter().map(Trit::from_bit).collect(),
        }
    }

    /// Bits with every position set in `erased` replaced by an erasure.
    pub fn with_erasures(bits: &BitVector, erased: &BitVector) -> Result<Self> {
        if bits.len() != erased.len() {
            return Err(Error::LengthMismatch {
                expected: bits.len(),
                actual: erased.len(),
            });
        }
        let mut v = Self::from_bits(bits);
        for i in erased.iter_ones() {
            v.symbols[i] = Trit::Erased;
        }
        Ok(v)
    }

    /// Parses `0`, `1` and `?`/`x`/`*` (erasure). Whitespace and `_` are ignored.
    pub fn parse(s: &str) -> Result<Self> {
        let mut symbols = Vec::with_capacity(s.len());
        for ch in s.chars() {
            match ch {
                '0' => symbols.push(Trit::Zero),
                '1' => symbols.push(Trit::One),
                '?' | 'x' | 'X' | '*' => symbols.push(Trit::Erased),
                c if c.is_whitespace() || c == '_' => {}
                c => return Err(Error::Format(format!("unexpected character {c:?} in ternary string"))),
            }
        }
        Ok(TernaryVector { symbols })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn get(&self, i: usize) -> Trit {
        self.symbols[i]
    }

    pub fn set(&mut self, i: usize, t: Trit) {
        self.symbols[i] = t;
    }

    pub fn symbols(&self) -> &[Trit] {
        &self.symbols
    }

    pub fn erasure_count(&self) -> usize {
        self.symbols.iter().filter(|t| t.is_erased()).count()
    }

    /// The bit vector, if no position is erased.
    pub fn to_bits(&self) -> Option<BitVector> {
        let mut v = BitVector::zeros(self.len());
        for (i, t) in self.symbols.iter().enumerate() {
            if t.bit()? {
                v.set(i, true);
            }
        }
        Some(v)
    }

    /// Hamming distance to `word` counted on non-erased positions only.
    pub fn distance_unerased(&self, word: &BitVector) -> Result<usize> {
        if self.len() != word.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                actual: word.len(),
            });
        }
        Ok(self
            .symbols
            .iter()
            .enumerate()
            .filter(|(i, t)| matches!(t.bit(), Some(b) if b != word.get(*i)))
            .count())
    }
}

impl fmt::Debug for TernaryVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TernaryVector({self})")
    }
}

impl fmt::Display for TernaryVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in &self.symbols {
            f.write_str(match t {
                Trit::Zero => "0",
                Trit::One => "1",
                Trit::Erased => "?",
            })?;
        }
        Ok(())
    }
}
