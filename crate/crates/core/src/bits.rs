//! Fixed-length bit strings.
//!
//! Position 0 is the left-most character in the textual form, so
//! `"1100"` has bits 0 and 1 set. Bits are packed little-endian into `u64`
//! words: position `i` lives in word `i / 64` at bit `i % 64`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString {
    len: usize,
    words: Vec<u64>,
}

#[inline]
fn words_for(len: usize) -> usize {
    len.div_ceil(64)
}

#[inline]
fn low_mask(len: usize) -> u64 {
    if len >= 64 {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

impl BitString {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut s = Self::zeros(len);
        s.set_run(0, len, true);
        s
    }

    /// `1^ones 0^(len - ones)`.
    pub fn prefix_ones(len: usize, ones: usize) -> Self {
        assert!(ones <= len);
        let mut s = Self::zeros(len);
        s.set_run(0, ones, true);
        s
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut s = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                s.set(i, true);
            }
        }
        s
    }

    /// Builds a string whose position `i` is bit `i` of `value` (LSB first).
    pub fn from_u64_lsb(len: usize, value: u64) -> Self {
        assert!(len <= 64);
        let mut s = Self::zeros(len);
        if len > 0 {
            s.words[0] = value & low_mask(len);
        }
        s
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let bit = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= bit;
        } else {
            self.words[i / 64] &= !bit;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    /// Reads `len ≤ 64` bits starting at `start`; position `start` becomes bit 0.
    #[inline]
    pub fn get_run(&self, start: usize, len: usize) -> u64 {
        debug_assert!(len <= 64 && start + len <= self.len);
        if len == 0 {
            return 0;
        }
        let w = start / 64;
        let off = start % 64;
        let mut v = self.words[w] >> off;
        if off != 0 && off + len > 64 {
            v |= self.words[w + 1] << (64 - off);
        }
        v & low_mask(len)
    }

    /// Writes the low `len ≤ 64` bits of `value` at `start`.
    #[inline]
    pub fn put_run(&mut self, start: usize, len: usize, value: u64) {
        debug_assert!(len <= 64 && start + len <= self.len);
        if len == 0 {
            return;
        }
        let mask = low_mask(len);
        let value = value & mask;
        let w = start / 64;
        let off = start % 64;
        self.words[w] = (self.words[w] & !(mask << off)) | (value << off);
        if off != 0 && off + len > 64 {
            let spill = off + len - 64;
            let hi_mask = low_mask(spill);
            self.words[w + 1] = (self.words[w + 1] & !hi_mask) | (value >> (64 - off));
        }
    }

    pub fn set_run(&mut self, start: usize, len: usize, value: bool) {
        let mut pos = start;
        let end = start + len;
        while pos < end {
            let chunk = (end - pos).min(64);
            self.put_run(pos, chunk, if value { u64::MAX } else { 0 });
            pos += chunk;
        }
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn count_zeros(&self) -> usize {
        self.len - self.count_ones()
    }

    /// Number of leading (left-most) one bits.
    pub fn leading_ones(&self) -> usize {
        let mut total = 0;
        for (wi, &w) in self.words.iter().enumerate() {
            let ones = w.trailing_ones() as usize;
            let avail = (self.len - wi * 64).min(64);
            if ones < avail {
                return total + ones;
            }
            total += avail;
        }
        total
    }

    pub fn hamming(&self, other: &Self) -> usize {
        assert_eq!(self.len, other.len, "hamming distance of unequal lengths");
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum()
    }

    pub fn xor_assign(&mut self, other: &Self) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// `self` followed by `tail`.
    pub fn concat(&self, tail: &Self) -> Self {
        let mut out = Self::zeros(self.len + tail.len);
        for i in (0..self.len).step_by(64) {
            let l = (self.len - i).min(64);
            out.put_run(i, l, self.get_run(i, l));
        }
        for i in (0..tail.len).step_by(64) {
            let l = (tail.len - i).min(64);
            out.put_run(self.len + i, l, tail.get_run(i, l));
        }
        out
    }

    pub fn slice(&self, start: usize, len: usize) -> Self {
        assert!(start + len <= self.len);
        let mut out = Self::zeros(len);
        for i in (0..len).step_by(64) {
            let l = (len - i).min(64);
            out.put_run(i, l, self.get_run(start + i, l));
        }
        out
    }

    /// Hex form: position 0 is the most significant bit of the first digit;
    /// the final digit is zero-padded on the right.
    pub fn to_hex(&self) -> String {
        let mut out = String::with_capacity(self.len.div_ceil(4));
        for start in (0..self.len).step_by(4) {
            let mut nibble = 0u32;
            for off in 0..4 {
                nibble <<= 1;
                if start + off < self.len && self.get(start + off) {
                    nibble |= 1;
                }
            }
            out.push(char::from_digit(nibble, 16).unwrap());
        }
        out
    }

    pub fn from_hex(hex: &str, len: usize) -> Result<Self> {
        if hex.len() != len.div_ceil(4) {
            return Err(Error::Parse(format!(
                "hex string has {} digits, expected {} for {len} bits",
                hex.len(),
                len.div_ceil(4)
            )));
        }
        let mut s = Self::zeros(len);
        for (d, ch) in hex.chars().enumerate() {
            let nibble = ch
                .to_digit(16)
                .ok_or_else(|| Error::Parse(format!("invalid hex digit {ch:?}")))?;
            for off in 0..4 {
                let pos = d * 4 + off;
                let bit = (nibble >> (3 - off)) & 1 == 1;
                if pos < len {
                    s.set(pos, bit);
                } else if bit {
                    return Err(Error::Parse("non-zero hex padding".into()));
                }
            }
        }
        Ok(s)
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }
}

impl FromStr for BitString {
    type Err = Error;

    /// Parses `0`/`1` characters; ASCII whitespace and `_` are ignored.
    fn from_str(s: &str) -> Result<Self> {
        let mut bits = Vec::with_capacity(s.len());
        for ch in s.chars() {
            match ch {
                '0' => bits.push(false),
                '1' => bits.push(true),
                c if c.is_ascii_whitespace() || c == '_' => {}
                c => return Err(Error::Parse(format!("invalid bit character {c:?}"))),
            }
        }
        Ok(Self::from_bools(&bits))
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}
