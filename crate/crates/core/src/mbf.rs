//! Monotone Boolean functions stored as fixed-width bit vectors.
//!
//! Position `i` of the vector holds the function value at the input whose
//! variable `j` (1-based) is bit `j - 1` of `i`. For two variables the four
//! positions are therefore `g(00) g(10) g(01) g(11)`, read left to right in
//! the text rendering. When an [`Mbf`] is read as an integer, position 0 is
//! the least significant bit.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Largest supported number of variables.
pub const MAX_VARS: usize = 8;

/// Storage words; 4 x 64 = 256 bits covers `MAX_VARS`.
pub const WORDS: usize = 4;

/// Largest number of variables whose truth table fits in a single `u64`.
pub const WORD_VARS: usize = 6;

/// Single-word primitives for `n <= 6`, used by the hot loops.
pub mod word {
    /// Positions whose index has bit `k` clear, for `k < 6`.
    const VAR_CLEAR: [u64; 6] = [
        0x5555_5555_5555_5555,
        0x3333_3333_3333_3333,
        0x0f0f_0f0f_0f0f_0f0f,
        0x00ff_00ff_00ff_00ff,
        0x0000_ffff_0000_ffff,
        0x0000_0000_ffff_ffff,
    ];

    #[inline]
    pub const fn width(n: usize) -> usize {
        1 << n
    }

    /// Mask of the `2^n` live bits.
    #[inline]
    pub const fn mask(n: usize) -> u64 {
        if n >= 6 {
            u64::MAX
        } else {
            (1u64 << (1 << n)) - 1
        }
    }

    #[inline]
    pub const fn leq(x: u64, y: u64) -> bool {
        x & !y == 0
    }

    /// Reverse the `2^n` live bits and complement them.
    #[inline]
    pub const fn dual(n: usize, x: u64) -> u64 {
        !(x.reverse_bits() >> (64 - (1 << n))) & mask(n)
    }

    #[inline]
    pub const fn weight(x: u64) -> u32 {
        x.count_ones()
    }

    /// Covering-pair monotonicity check on a single word.
    #[inline]
    pub fn is_monotone(n: usize, x: u64) -> bool {
        debug_assert!(n <= 6);
        if x & !mask(n) != 0 {
            return false;
        }
        (0..n).all(|k| ((x & VAR_CLEAR[k]) << (1 << k)) & !x == 0)
    }

    /// Inner-word covering check for variable `k < 6` on any word.
    #[inline]
    pub(crate) fn covers_ok(k: usize, x: u64) -> bool {
        ((x & VAR_CLEAR[k]) << (1 << k)) & !x == 0
    }
}

#[inline]
const fn words_used(n: usize) -> usize {
    if n <= WORD_VARS {
        1
    } else {
        1 << (n - WORD_VARS)
    }
}

fn check_n(n: usize) -> Result<()> {
    if n > MAX_VARS {
        Err(Error::WidthOverflow { n, max: MAX_VARS })
    } else {
        Ok(())
    }
}

/// Covering-pair monotonicity check on a raw vector of `2^n` bits.
///
/// Only pairs `(i, i | 2^k)` are compared; transitivity covers the rest.
/// Bits beyond position `2^n - 1` make the vector invalid.
pub fn is_monotone(n: usize, bits: &[u64; WORDS]) -> bool {
    if n > MAX_VARS {
        return false;
    }
    let used = words_used(n);
    if n < WORD_VARS && bits[0] & !word::mask(n) != 0 {
        return false;
    }
    if bits[used..].iter().any(|&w| w != 0) {
        return false;
    }
    let inner = n.min(WORD_VARS);
    for w in &bits[..used] {
        if !(0..inner).all(|k| word::covers_ok(k, *w)) {
            return false;
        }
    }
    for k in WORD_VARS..n {
        let step = 1 << (k - WORD_VARS);
        for j in (0..used).filter(|j| j & step == 0) {
            if bits[j] & !bits[j | step] != 0 {
                return false;
            }
        }
    }
    true
}

/// A monotone Boolean function of `n` variables.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Mbf {
    n: u8,
    bits: [u64; WORDS],
}

impl Mbf {
    /// The constant-false function.
    pub fn bottom(n: usize) -> Result<Self> {
        check_n(n)?;
        Ok(Self {
            n: n as u8,
            bits: [0; WORDS],
        })
    }

    /// The constant-true function.
    pub fn top(n: usize) -> Result<Self> {
        check_n(n)?;
        let mut bits = [0; WORDS];
        for w in bits.iter_mut().take(words_used(n)) {
            *w = word::mask(n);
        }
        Ok(Self { n: n as u8, bits })
    }

    /// Validates width and monotonicity.
    pub fn new(n: usize, bits: [u64; WORDS]) -> Result<Self> {
        check_n(n)?;
        let used = words_used(n);
        if (n < WORD_VARS && bits[0] & !word::mask(n) != 0) || bits[used..].iter().any(|&w| w != 0)
        {
            return Err(Error::StrayBits { n });
        }
        if !is_monotone(n, &bits) {
            return Err(Error::NotMonotone { n });
        }
        Ok(Self { n: n as u8, bits })
    }

    /// Builds a function of at most six variables from its truth-table word.
    pub fn from_word(n: usize, bits: u64) -> Result<Self> {
        if n > WORD_VARS {
            return Err(Error::WidthOverflow { n, max: WORD_VARS });
        }
        Self::new(n, [bits, 0, 0, 0])
    }

    /// Skips validation. Callers guarantee `n <= 6` and a monotone word.
    #[inline]
    pub(crate) fn from_word_unchecked(n: usize, bits: u64) -> Self {
        debug_assert!(n <= WORD_VARS && word::is_monotone(n, bits));
        Self {
            n: n as u8,
            bits: [bits, 0, 0, 0],
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n as usize
    }

    #[inline]
    pub fn bits(&self) -> &[u64; WORDS] {
        &self.bits
    }

    /// The low storage word; the whole truth table when `n <= 6`.
    #[inline]
    pub fn word(&self) -> u64 {
        self.bits[0]
    }

    #[inline]
    pub fn width(&self) -> usize {
        1 << self.n
    }

    /// Function value at input position `i`.
    pub fn bit(&self, i: usize) -> bool {
        assert!(i < self.width(), "position {i} out of range");
        self.bits[i / 64] >> (i % 64) & 1 == 1
    }

    fn same_width(&self, other: &Self) -> Result<()> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(Error::WidthMismatch {
                left: self.n(),
                right: other.n(),
            })
        }
    }

    /// Pointwise order: `self(x) <= other(x)` for every input.
    pub fn leq(&self, other: &Self) -> Result<bool> {
        self.same_width(other)?;
        Ok(self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0))
    }

    /// Reverse the bit string and negate every bit.
    pub fn dual(&self) -> Self {
        let n = self.n();
        let mut bits = [0; WORDS];
        if n <= WORD_VARS {
            bits[0] = word::dual(n, self.bits[0]);
        } else {
            let used = words_used(n);
            for (i, w) in bits.iter_mut().take(used).enumerate() {
                *w = !self.bits[used - 1 - i].reverse_bits();
            }
        }
        Self { n: self.n, bits }
    }

    pub fn join(&self, other: &Self) -> Result<Self> {
        self.same_width(other)?;
        let mut bits = self.bits;
        for (a, b) in bits.iter_mut().zip(&other.bits) {
            *a |= b;
        }
        Ok(Self { n: self.n, bits })
    }

    pub fn meet(&self, other: &Self) -> Result<Self> {
        self.same_width(other)?;
        let mut bits = self.bits;
        for (a, b) in bits.iter_mut().zip(&other.bits) {
            *a &= b;
        }
        Ok(Self { n: self.n, bits })
    }

    /// Hamming weight of the truth table.
    pub fn weight(&self) -> u32 {
        self.bits.iter().map(|w| w.count_ones()).sum()
    }

    pub fn is_self_dual(&self) -> bool {
        *self == self.dual()
    }

    /// `2^n` characters, position 0 leftmost.
    pub fn to_bit_string(&self) -> String {
        (0..self.width())
            .map(|i| if self.bit(i) { '1' } else { '0' })
            .collect()
    }

    /// Parses the `'0'/'1'` rendering; `n` is inferred from the length.
    pub fn parse_bits(s: &str) -> Result<Self> {
        let len = s.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(parse_err(format!(
                "bit string length {len} is not a power of two"
            )));
        }
        let n = len.trailing_zeros() as usize;
        check_n(n)?;
        let mut bits = [0u64; WORDS];
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => bits[i / 64] |= 1 << (i % 64),
                _ => return Err(parse_err(format!("unexpected character {c:?}"))),
            }
        }
        Self::new(n, bits)
    }

    /// Number of hex digits in the compact rendering for `n` variables.
    pub fn hex_digits(n: usize) -> usize {
        (1usize << n).div_ceil(4)
    }

    /// Compact rendering: the integer value in hex, zero-padded to
    /// `ceil(2^n / 4)` digits. Position 0 is the low bit of the last digit.
    pub fn to_hex(&self) -> String {
        let n = self.n();
        if n <= WORD_VARS {
            format!("{:0width$x}", self.bits[0], width = Self::hex_digits(n))
        } else {
            self.bits[..words_used(n)]
                .iter()
                .rev()
                .map(|w| format!("{w:016x}"))
                .collect()
        }
    }

    pub fn from_hex(n: usize, s: &str) -> Result<Self> {
        check_n(n)?;
        let digits = Self::hex_digits(n);
        if s.len() != digits {
            return Err(parse_err(format!(
                "expected {digits} hex digits for n={n}, found {}",
                s.len()
            )));
        }
        if !s.bytes().all(|b| b.is_ascii_hexdigit()) {
            return Err(parse_err(format!("invalid hex {s:?}")));
        }
        let mut bits = [0u64; WORDS];
        let bytes = s.as_bytes();
        for (i, chunk) in bytes.rchunks(16).enumerate() {
            let text = std::str::from_utf8(chunk).expect("ascii");
            bits[i] = u64::from_str_radix(text, 16).map_err(|e| parse_err(e.to_string()))?;
        }
        Self::new(n, bits)
    }
}

fn parse_err(msg: String) -> Error {
    Error::Parse { line: 0, msg }
}

impl Ord for Mbf {
    /// Variable count first, then the integer interpretation.
    fn cmp(&self, other: &Self) -> Ordering {
        self.n
            .cmp(&other.n)
            .then_with(|| self.bits.iter().rev().cmp(other.bits.iter().rev()))
    }
}

impl PartialOrd for Mbf {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Mbf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bit_string())
    }
}

impl fmt::Debug for Mbf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mbf(n={}, {})", self.n, self.to_bit_string())
    }
}
