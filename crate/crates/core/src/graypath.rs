//! Binary-reflected gray codes and their block expansion.
//!
//! The expanded path over `N` gray-code bits with block size `r` replaces each
//! gray bit by `r` copies and walks between consecutive words one bit at a
//! time, giving `M = r·(2^N − 1) + 1` points. Nothing is materialized: points
//! are produced from their index and ranked back in `O(N·r)`.
//!
//! Every block of every expanded point has the shape `0^s 1^(r−s)`. Rising
//! transitions grow ones from the right end of the block; falling transitions
//! clear ones from the left end. Block `b` corresponds to character `b` of the
//! gray word, i.e. bit `N − 1 − b` of its integer form.

use crate::bits::BitString;
use crate::error::{Error, Result};

/// Largest supported gray word length.
pub const MAX_WORD_BITS: u32 = 63;
/// Largest supported block size (a block is read as one `u64`).
pub const MAX_BLOCK: usize = 64;

#[inline]
pub fn gray_code(m: u64) -> u64 {
    m ^ (m >> 1)
}

#[inline]
pub fn gray_decode(g: u64) -> u64 {
    let mut b = g;
    let mut shift = 1;
    while shift < 64 {
        b ^= b >> shift;
        shift <<= 1;
    }
    b
}

fn check_word_bits(n_bits: u32) -> Result<()> {
    if n_bits > MAX_WORD_BITS {
        return Err(Error::Domain(format!(
            "gray words longer than {MAX_WORD_BITS} bits are not supported (got {n_bits})"
        )));
    }
    Ok(())
}

/// The `m`-th (0-based) word of the binary-reflected gray code on `n_bits` bits,
/// most significant bit first.
pub fn gray_word(m: u64, n_bits: u32) -> Result<BitString> {
    check_word_bits(n_bits)?;
    if m >> n_bits != 0 {
        return Err(Error::Domain(format!(
            "gray index {m} out of range for {n_bits}-bit words"
        )));
    }
    let g = gray_code(m);
    let n = n_bits as usize;
    let mut w = BitString::zeros(n);
    for b in 0..n {
        w.set(b, (g >> (n - 1 - b)) & 1 == 1);
    }
    Ok(w)
}

/// Inverse of [`gray_word`]: the position of `w` in the gray sequence.
pub fn gray_rank(w: &BitString) -> u64 {
    let n = w.len();
    assert!(n as u32 <= MAX_WORD_BITS, "gray word too long");
    let mut g = 0u64;
    for b in 0..n {
        if w.get(b) {
            g |= 1 << (n - 1 - b);
        }
    }
    gray_decode(g)
}

/// Integer position of the bit flipped between gray words `q` and `q + 1`.
#[inline]
fn transition_bit(q: u64) -> u32 {
    (q + 1).trailing_zeros()
}

/// Where an index sits on the expanded path.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Position {
    /// Base gray word index.
    word: u64,
    /// Gray code of `word`.
    code: u64,
    /// Number of bits already flipped toward `word + 1`, in `0..r`.
    progress: usize,
    /// Block index being flipped when `progress > 0`.
    block: usize,
    rising: bool,
}

/// The expanded gray-code path for `N` word bits and block size `r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExpandedPath {
    word_bits: u32,
    block: usize,
}

impl ExpandedPath {
    pub fn new(word_bits: u32, block: usize) -> Result<Self> {
        check_word_bits(word_bits)?;
        if word_bits == 0 {
            return Err(Error::Domain("gray words need at least one bit".into()));
        }
        if block == 0 || block > MAX_BLOCK {
            return Err(Error::Domain(format!(
                "block size must be in 1..={MAX_BLOCK} (got {block})"
            )));
        }
        Ok(Self { word_bits, block })
    }

    pub fn word_bits(&self) -> u32 {
        self.word_bits
    }

    pub fn block(&self) -> usize {
        self.block
    }

    /// Bit length of an expanded point, `N·r`.
    pub fn point_len(&self) -> usize {
        self.word_bits as usize * self.block
    }

    /// Number of points `M = r·(2^N − 1) + 1`.
    pub fn len(&self) -> u128 {
        self.block as u128 * ((1u128 << self.word_bits) - 1) + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn check_index(&self, j: u128) -> Result<()> {
        if j == 0 || j > self.len() {
            return Err(Error::Domain(format!(
                "expanded index {j} out of range 1..={}",
                self.len()
            )));
        }
        Ok(())
    }

    fn position(&self, j: u128) -> Position {
        let r = self.block as u128;
        let word = ((j - 1) / r) as u64;
        let progress = ((j - 1) % r) as usize;
        let code = gray_code(word);
        if progress == 0 {
            return Position {
                word,
                code,
                progress,
                block: 0,
                rising: false,
            };
        }
        let bit = transition_bit(word);
        Position {
            word,
            code,
            progress,
            block: self.word_bits as usize - 1 - bit as usize,
            rising: (code >> bit) & 1 == 0,
        }
    }

    /// Number of ones in block `b` of point `pos`.
    #[inline]
    fn block_ones_at(&self, pos: &Position, b: usize) -> usize {
        let r = self.block;
        if pos.progress > 0 && b == pos.block {
            return if pos.rising {
                pos.progress
            } else {
                r - pos.progress
            };
        }
        let bit = self.word_bits as usize - 1 - b;
        if (pos.code >> bit) & 1 == 1 {
            r
        } else {
            0
        }
    }

    /// Ones in block `b` of the `j`-th point.
    pub fn block_ones(&self, j: u128, b: usize) -> Result<usize> {
        self.check_index(j)?;
        if b >= self.word_bits as usize {
            return Err(Error::Domain(format!("block {b} out of range")));
        }
        Ok(self.block_ones_at(&self.position(j), b))
    }

    /// The `j`-th (1-based) point of the expanded path.
    pub fn point(&self, j: u128) -> Result<BitString> {
        let mut out = BitString::zeros(self.point_len());
        self.write_point(j, &mut out, 0)?;
        Ok(out)
    }

    /// Writes the `j`-th point into `out` starting at bit `offset`.
    pub fn write_point(&self, j: u128, out: &mut BitString, offset: usize) -> Result<()> {
        self.check_index(j)?;
        if offset + self.point_len() > out.len() {
            return Err(Error::Domain("output buffer too short".into()));
        }
        let pos = self.position(j);
        let r = self.block;
        let full = if r == 64 { u64::MAX } else { (1u64 << r) - 1 };
        for b in 0..self.word_bits as usize {
            let ones = self.block_ones_at(&pos, b);
            // ones occupy the right end of the block, i.e. the high bits
            let v = if ones == 0 {
                0
            } else {
                (full >> (r - ones)) << (r - ones)
            };
            out.put_run(offset + b * r, r, v);
        }
        Ok(())
    }

    /// Index of `p` on the path, or `None` if `p` is not a path point.
    pub fn rank(&self, p: &BitString) -> Option<u128> {
        if p.len() != self.point_len() {
            return None;
        }
        self.rank_at(p, 0)
    }

    /// Like [`rank`](Self::rank) for the `N·r` bits of `p` starting at `offset`.
    pub fn rank_at(&self, p: &BitString, offset: usize) -> Option<u128> {
        debug_assert!(offset + self.point_len() <= p.len());
        let r = self.block;
        let n_bits = self.word_bits as usize;
        let full = if r == 64 { u64::MAX } else { (1u64 << r) - 1 };
        let mut code = 0u64;
        let mut mixed: Option<(usize, usize)> = None;
        for b in 0..n_bits {
            let v = p.get_run(offset + b * r, r);
            if v == 0 {
                continue;
            }
            if v == full {
                code |= 1 << (n_bits - 1 - b);
                continue;
            }
            let zeros = v.trailing_zeros() as usize;
            if v != (full >> zeros) << zeros || mixed.is_some() {
                return None;
            }
            mixed = Some((b, r - zeros));
        }
        let r128 = r as u128;
        let Some((b, ones)) = mixed else {
            return Some(gray_decode(code) as u128 * r128 + 1);
        };
        let bit = 1u64 << (n_bits - 1 - b);
        let low = gray_decode(code);
        let high = gray_decode(code | bit);
        if high == low + 1 {
            // rising from `low`, `ones` bits flipped so far
            Some(low as u128 * r128 + ones as u128 + 1)
        } else if low == high + 1 {
            // falling from `high`, `r - ones` bits cleared so far
            Some(high as u128 * r128 + (r - ones) as u128 + 1)
        } else {
            None
        }
    }

    /// Hamming distance between the `j1`-th and `j2`-th points, computed from
    /// block occupancy without building either point.
    pub fn hamming(&self, j1: u128, j2: u128) -> Result<usize> {
        self.check_index(j1)?;
        self.check_index(j2)?;
        let d = j1.abs_diff(j2);
        // Within one block length the two points lie in the same or adjacent
        // transitions, which always flip distinct blocks.
        if d <= self.block as u128 {
            return Ok(d as usize);
        }
        let p1 = self.position(j1);
        let p2 = self.position(j2);
        Ok((0..self.word_bits as usize)
            .map(|b| {
                self.block_ones_at(&p1, b)
                    .abs_diff(self.block_ones_at(&p2, b))
            })
            .sum())
    }
}
