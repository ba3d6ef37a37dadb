//! Product codes of two Reed-Muller codes and their two-dimensional
//! iterative min-sum decoder.
//!
//! A word of the product code is an `N2 x N1` matrix stored row-major:
//! coordinate `(i, j)` sits at index `i * N1 + j`. Rows belong to the row
//! code `C1` (length `N1`), columns to the column code `C2` (length `N2`).

use crate::bits::{BitVector, TernaryVector, Trit};
use crate::codes::ReedMullerCode;
use crate::error::{Error, Result};

/// Iteration budget used when none is given.
pub const DEFAULT_MAX_ITERATIONS: usize = 20;

/// Cost of putting a symbol on a coordinate. Costs saturate at `u32::MAX`.
pub type Cost = u32;

#[derive(Clone, Debug)]
pub struct ProductCode {
    row: ReedMullerCode,
    col: ReedMullerCode,
}

impl ProductCode {
    /// RM(1,`m1`) on the rows and RM(1,`m2`) on the columns.
    pub fn new(m1: u32, m2: u32) -> Result<Self> {
        Ok(ProductCode {
            row: ReedMullerCode::new(m1)?,
            col: ReedMullerCode::new(m2)?,
        })
    }

    pub fn from_codes(row: ReedMullerCode, col: ReedMullerCode) -> Self {
        ProductCode { row, col }
    }

    pub fn row_code(&self) -> &ReedMullerCode {
        &self.row
    }

    pub fn col_code(&self) -> &ReedMullerCode {
        &self.col
    }

    /// `(m1, m2)`.
    pub fn params(&self) -> (u32, u32) {
        (self.row.m(), self.col.m())
    }

    /// Number of rows, `N2`.
    pub fn rows(&self) -> usize {
        self.col.length()
    }

    /// Number of columns, `N1`.
    pub fn cols(&self) -> usize {
        self.row.length()
    }

    pub fn length(&self) -> usize {
        self.rows() * self.cols()
    }

    pub fn dimension(&self) -> usize {
        self.row.dimension() * self.col.dimension()
    }

    pub fn min_distance(&self) -> usize {
        self.row.min_distance() * self.col.min_distance()
    }

    /// The code with rows and columns exchanged.
    pub fn transposed(&self) -> ProductCode {
        ProductCode {
            row: self.col.clone(),
            col: self.row.clone(),
        }
    }

    /// Encodes a `k2 x k1` row-major message: rows with `C1`, then columns with `C2`.
    pub fn encode(&self, message: &BitVector) -> Result<BitVector> {
        if message.len() != self.dimension() {
            return Err(Error::LengthMismatch {
                expected: self.dimension(),
                actual: message.len(),
            });
        }
        let (k1, k2) = (self.row.dimension(), self.col.dimension());
        let n1 = self.cols();
        let row_words: Vec<&BitVector> = (0..k2)
            .map(|r| {
                let idx = (0..k1).fold(0usize, |acc, s| acc | ((message.get(r * k1 + s) as usize) << s));
                &self.row.codewords()[idx]
            })
            .collect();
        let mut out = BitVector::zeros(self.length());
        for j in 0..n1 {
            let idx = row_words
                .iter()
                .enumerate()
                .fold(0usize, |acc, (r, w)| acc | ((w.get(j) as usize) << r));
            for i in self.col.codewords()[idx].iter_ones() {
                out.set(i * n1 + j, true);
            }
        }
        Ok(out)
    }

    /// True iff every row is in `C1` and every column is in `C2`.
    pub fn is_codeword(&self, word: &BitVector) -> bool {
        if word.len() != self.length() {
            return false;
        }
        let (n1, n2) = (self.cols(), self.rows());
        let rows_ok = (0..n2).all(|i| {
            let idx = self.row.index_from_bits(|p| word.get(i * n1 + p));
            let cw = &self.row.codewords()[idx];
            (0..n1).all(|j| cw.get(j) == word.get(i * n1 + j))
        });
        rows_ok
            && (0..n1).all(|j| {
                let idx = self.col.index_from_bits(|p| word.get(p * n1 + j));
                let cw = &self.col.codewords()[idx];
                (0..n2).all(|i| cw.get(i) == word.get(i * n1 + j))
            })
    }
}

pub fn product_encode(pc: &ProductCode, message: &BitVector) -> Result<BitVector> {
    pc.encode(message)
}

/// Per-coordinate cost pairs `[cost(0), cost(1)]` over the `N2 x N1` grid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CostTable {
    rows: usize,
    cols: usize,
    costs: Vec<[Cost; 2]>,
}

impl CostTable {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CostTable {
            rows,
            cols,
            costs: vec![[0, 0]; rows * cols],
        }
    }

    /// Builds a table from row-major pairs.
    pub fn from_pairs(rows: usize, cols: usize, costs: Vec<[Cost; 2]>) -> Result<Self> {
        if costs.len() != rows * cols {
            return Err(Error::LengthMismatch {
                expected: rows * cols,
                actual: costs.len(),
            });
        }
        Ok(CostTable { rows, cols, costs })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> [Cost; 2] {
        self.costs[i * self.cols + j]
    }

    pub fn pairs(&self) -> &[[Cost; 2]] {
        &self.costs
    }

    pub fn transpose(&self) -> CostTable {
        let mut costs = Vec::with_capacity(self.costs.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                costs.push(self.get(i, j));
            }
        }
        CostTable {
            rows: self.cols,
            cols: self.rows,
            costs,
        }
    }

    /// True when `min(cost(0), cost(1)) = 0` at every coordinate.
    pub fn is_normalized(&self) -> bool {
        self.costs.iter().all(|c| c[0].min(c[1]) == 0)
    }
}

/// Initial costs: a received bit `s` costs 0 for `s` and 1 for `1 - s`;
/// an erasure costs 0 for both.
pub fn init_costs(received: &TernaryVector, pc: &ProductCode) -> Result<CostTable> {
    if received.len() != pc.length() {
        return Err(Error::LengthMismatch {
            expected: pc.length(),
            actual: received.len(),
        });
    }
    let costs = received
        .symbols()
        .iter()
        .map(|t| match t {
            Trit::Zero => [0, 1],
            Trit::One => [1, 0],
            Trit::Erased => [0, 0],
        })
        .collect();
    Ok(CostTable {
        rows: pc.rows(),
        cols: pc.cols(),
        costs,
    })
}

/// One pass over every row: each output pair is the least total cost of a
/// `C1` codeword on that row carrying the given symbol, normalized so the
/// smaller of the two is zero.
pub fn row_iteration(costs: &CostTable, pc: &ProductCode) -> CostTable {
    assert_eq!((costs.rows, costs.cols), (pc.rows(), pc.cols()), "cost table shape");
    let n1 = pc.cols();
    let mut line = LineDecoder::new(pc.row_code().m());
    let mut out = Vec::with_capacity(costs.costs.len());
    for row in costs.costs.chunks_exact(n1) {
        line.run(row);
        out.extend_from_slice(line.output());
    }
    CostTable {
        rows: costs.rows,
        cols: costs.cols,
        costs: out,
    }
}

/// The column counterpart of [`row_iteration`], using `C2`.
pub fn column_iteration(costs: &CostTable, pc: &ProductCode) -> CostTable {
    assert_eq!((costs.rows, costs.cols), (pc.rows(), pc.cols()), "cost table shape");
    let (n1, n2) = (pc.cols(), pc.rows());
    let mut line = LineDecoder::new(pc.col_code().m());
    let mut column = vec![[0; 2]; n2];
    let mut out = costs.clone();
    for j in 0..n1 {
        for (i, c) in column.iter_mut().enumerate() {
            *c = costs.costs[i * n1 + j];
        }
        line.run(&column);
        for (i, c) in line.output().iter().enumerate() {
            out.costs[i * n1 + j] = *c;
        }
    }
    out
}

/// Strictly cheaper symbol per coordinate; equal costs leave it undecided.
pub fn hard_decision(costs: &CostTable) -> TernaryVector {
    TernaryVector::from_trits(
        costs
            .costs
            .iter()
            .map(|c| match c[0].cmp(&c[1]) {
                std::cmp::Ordering::Less => Trit::Zero,
                std::cmp::Ordering::Greater => Trit::One,
                std::cmp::Ordering::Equal => Trit::Erased,
            })
            .collect(),
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DecodeStatus {
    /// The hard decision is a product codeword.
    Codeword,
    /// The budget ran out and some symbols are still undecided.
    Undecided,
    /// The budget ran out with every symbol decided, but not on a codeword.
    MaxIterations,
}

impl DecodeStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            DecodeStatus::Codeword => "codeword",
            DecodeStatus::Undecided => "undecided",
            DecodeStatus::MaxIterations => "max_iterations",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodeResult {
    pub status: DecodeStatus,
    pub word: TernaryVector,
    /// Row+column iterations started; 0 when the received word was already a codeword.
    pub iterations_used: usize,
}

impl DecodeResult {
    /// The decoded codeword when the status is [`DecodeStatus::Codeword`].
    pub fn codeword(&self) -> Option<BitVector> {
        match self.status {
            DecodeStatus::Codeword => self.word.to_bits(),
            _ => None,
        }
    }
}

/// When the decoder looks for a codeword.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum CodewordCheck {
    /// After every row pass and every column pass.
    #[default]
    HalfPass,
    /// Only after the column pass that completes an iteration.
    FullPass,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DecodeOptions {
    pub max_iterations: usize,
    pub check: CodewordCheck,
}

impl Default for DecodeOptions {
    fn default() -> Self {
        DecodeOptions {
            max_iterations: DEFAULT_MAX_ITERATIONS,
            check: CodewordCheck::HalfPass,
        }
    }
}

/// Alternates row and column passes, starting with rows, for at most
/// `max_iterations` iterations or until the hard decision is a codeword.
pub fn min_sum_decode(received: &TernaryVector, pc: &ProductCode, max_iterations: usize) -> Result<DecodeResult> {
    min_sum_decode_with(
        received,
        pc,
        &DecodeOptions {
            max_iterations,
            ..DecodeOptions::default()
        },
    )
}

pub fn min_sum_decode_with(received: &TernaryVector, pc: &ProductCode, opts: &DecodeOptions) -> Result<DecodeResult> {
    if opts.max_iterations == 0 {
        return Err(Error::InvalidParameter("max_iterations must be at least 1".into()));
    }
    let mut costs = init_costs(received, pc)?;
    let finished = |word: &TernaryVector| word.to_bits().is_some_and(|w| pc.is_codeword(&w));

    let mut word = received.clone();
    if finished(&word) {
        return Ok(DecodeResult {
            status: DecodeStatus::Codeword,
            word,
            iterations_used: 0,
        });
    }
    for it in 1..=opts.max_iterations {
        costs = row_iteration(&costs, pc);
        if opts.check == CodewordCheck::HalfPass {
            word = hard_decision(&costs);
            if finished(&word) {
                return Ok(DecodeResult {
                    status: DecodeStatus::Codeword,
                    word,
                    iterations_used: it,
                });
            }
        }
        costs = column_iteration(&costs, pc);
        word = hard_decision(&costs);
        if finished(&word) {
            return Ok(DecodeResult {
                status: DecodeStatus::Codeword,
                word,
                iterations_used: it,
            });
        }
    }
    let status = if word.erasure_count() > 0 {
        DecodeStatus::Undecided
    } else {
        DecodeStatus::MaxIterations
    };
    Ok(DecodeResult {
        status,
        word,
        iterations_used: opts.max_iterations,
    })
}

/// Min-sum over one line (a row or a column) for RM(1,m).
///
/// Computes, for every position `p` and symbol `x`, the least total cost of
/// a codeword with `x` at `p`, over all `2^(m+1)` codewords. The codeword
/// costs are accumulated on the recursive split of RM(1,r) into two halves
/// whose messages differ only in the constant term; the per-position minima
/// are then pushed back down the same split. The result is identical to
/// [`line_min_sum_exhaustive`].
struct LineDecoder {
    m: u32,
    /// `levels[r]` holds, for every block of `2^r` positions, the cost of
    /// each of the `2^(r+1)` RM(1,r) codewords restricted to that block.
    levels: Vec<Vec<u64>>,
    /// Best completion cost of the rest of the line, per block codeword.
    ext: Vec<Vec<u64>>,
    out: Vec<[Cost; 2]>,
}

impl LineDecoder {
    fn new(m: u32) -> Self {
        let n = 1usize << m;
        LineDecoder {
            m,
            levels: (0..=m).map(|_| vec![0u64; 2 * n]).collect(),
            ext: (0..=m).map(|_| vec![0u64; 2 * n]).collect(),
            out: vec![[0; 2]; n],
        }
    }

    fn output(&self) -> &[[Cost; 2]] {
        &self.out
    }

    fn run(&mut self, input: &[[Cost; 2]]) {
        let m = self.m as usize;
        let n = 1usize << m;
        debug_assert_eq!(input.len(), n);

        // Level 0: block p, codeword index = the bit placed at p.
        for (p, c) in input.iter().enumerate() {
            self.levels[0][2 * p] = c[0] as u64;
            self.levels[0][2 * p + 1] = c[1] as u64;
        }
        // A level-r block b spans children 2b (left) and 2b+1 (right) of level r-1.
        // Codeword (L, a_r) of the block costs left[L] + right[L ^ a_r].
        for r in 1..=m {
            let half = 1usize << r; // codewords per child block
            let (lower, upper) = self.levels.split_at_mut(r);
            let child = &lower[r - 1];
            let parent = &mut upper[0];
            for b in 0..n >> r {
                let left = &child[(2 * b) * half..(2 * b + 1) * half];
                let right = &child[(2 * b + 1) * half..(2 * b + 2) * half];
                let dst = &mut parent[b * 2 * half..(b + 1) * 2 * half];
                for l in 0..half {
                    dst[l] = left[l] + right[l];
                    dst[l | half] = left[l] + right[l ^ 1];
                }
            }
        }

        // Push down: ext of a child codeword is the best cost of completing it
        // with the sibling block and everything outside the parent.
        self.ext[m][..2 * n].iter_mut().for_each(|e| *e = 0);
        for r in (1..=m).rev() {
            let half = 1usize << r;
            let (lower, upper) = self.ext.split_at_mut(r);
            let parent_ext = &upper[0];
            let child_ext = &mut lower[r - 1];
            let child = &self.levels[r - 1];
            for b in 0..n >> r {
                let left = &child[(2 * b) * half..(2 * b + 1) * half];
                let right = &child[(2 * b + 1) * half..(2 * b + 2) * half];
                let pe = &parent_ext[b * 2 * half..(b + 1) * 2 * half];
                for l in 0..half {
                    // parent codeword (l, 0): right child uses l; (l, 1): right uses l ^ 1.
                    let via0 = right[l] + pe[l];
                    let via1 = right[l ^ 1] + pe[l | half];
                    child_ext[(2 * b) * half + l] = via0.min(via1);
                }
                for q in 0..half {
                    // right codeword q comes from parent (q, 0) or (q ^ 1, 1).
                    let via0 = left[q] + pe[q];
                    let via1 = left[q ^ 1] + pe[(q ^ 1) | half];
                    child_ext[(2 * b + 1) * half + q] = via0.min(via1);
                }
            }
        }

        let leaf = &self.levels[0];
        let ext = &self.ext[0];
        for p in 0..n {
            let c0 = leaf[2 * p] + ext[2 * p];
            let c1 = leaf[2 * p + 1] + ext[2 * p + 1];
            self.out[p] = normalize(c0, c1);
        }
    }
}

fn normalize(c0: u64, c1: u64) -> [Cost; 2] {
    let low = c0.min(c1);
    let clamp = |v: u64| (v - low).min(Cost::MAX as u64) as Cost;
    [clamp(c0), clamp(c1)]
}

/// Reference min-sum over one line by direct enumeration of the codeword table.
pub fn line_min_sum_exhaustive(table: &[BitVector], input: &[[Cost; 2]]) -> Vec<[Cost; 2]> {
    let mut best = vec![[u64::MAX; 2]; input.len()];
    for c in table {
        let total: u64 = input.iter().enumerate().map(|(p, k)| k[c.get(p) as usize] as u64).sum();
        for (p, b) in best.iter_mut().enumerate() {
            let x = c.get(p) as usize;
            b[x] = b[x].min(total);
        }
    }
    best.into_iter().map(|b| normalize(b[0], b[1])).collect()
}
