//! Fixed-width bit strings, most significant bit first.
//!
//! Register labels, oracle arguments, and function values are all short
//! bit strings. Ordering is lexicographic on the printed form, which for
//! equal widths coincides with the numeric order used to index amplitude
//! vectors.

use std::fmt;

use crate::SimError;

/// A bit string of fixed width, stored as an integer with the first
/// character of the printed form as the most significant bit.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BitString {
    width: usize,
    value: usize,
}

impl BitString {
    pub const MAX_WIDTH: usize = 32;

    pub fn new(width: usize, value: usize) -> Result<Self, SimError> {
        if width == 0 || width > Self::MAX_WIDTH {
            return Err(SimError::InvalidArgument(format!(
                "bit width {width} out of range 1..={}",
                Self::MAX_WIDTH
            )));
        }
        if value >> width != 0 {
            return Err(SimError::InvalidArgument(format!(
                "value {value} does not fit in {width} bits"
            )));
        }
        Ok(Self { width, value })
    }

    pub fn parse(s: &str) -> Result<Self, SimError> {
        if s.is_empty() || s.len() > Self::MAX_WIDTH {
            return Err(SimError::InvalidArgument(format!(
                "bit string {s:?} has invalid length"
            )));
        }
        let mut value = 0usize;
        for c in s.chars() {
            value <<= 1;
            match c {
                '0' => {}
                '1' => value |= 1,
                _ => {
                    return Err(SimError::InvalidArgument(format!(
                        "bit string {s:?} contains {c:?}"
                    )))
                }
            }
        }
        Ok(Self { width: s.len(), value })
    }

    pub fn zero(width: usize) -> Self {
        Self::new(width, 0).expect("valid width")
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn value(&self) -> usize {
        self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    /// Bit at position `i`, counting from the most significant (leftmost).
    pub fn bit(&self, i: usize) -> usize {
        assert!(i < self.width, "bit index {i} out of width {}", self.width);
        (self.value >> (self.width - 1 - i)) & 1
    }

    pub fn xor(&self, other: &Self) -> Self {
        assert_eq!(self.width, other.width, "xor of mismatched widths");
        Self { width: self.width, value: self.value ^ other.value }
    }

    /// Modulo-2 inner product: parity of the bitwise AND.
    pub fn dot(&self, other: &Self) -> usize {
        assert_eq!(self.width, other.width, "dot of mismatched widths");
        (self.value & other.value).count_ones() as usize & 1
    }

    /// All bit strings of the given width in ascending order.
    pub fn all(width: usize) -> impl Iterator<Item = BitString> {
        assert!((1..=Self::MAX_WIDTH).contains(&width));
        (0..1usize << width).map(move |value| BitString { width, value })
    }

    /// Concatenation, e.g. the 8-bit label of a permutation table built
    /// from its four 2-bit values.
    pub fn concat(parts: &[BitString]) -> Result<Self, SimError> {
        let width: usize = parts.iter().map(|p| p.width).sum();
        let mut value = 0usize;
        for p in parts {
            value = (value << p.width) | p.value;
        }
        Self::new(width, value)
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.width {
            write!(f, "{}", self.bit(i))?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
