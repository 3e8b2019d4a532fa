use crate::error::{ProtocolError, Result};

/// Number of bits needed to write any value in `0..=max`.
pub fn bit_width(max: u64) -> u32 {
    64 - max.leading_zeros()
}

/// An owned message payload. Its length is what the transcript counts.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct BitString {
    bits: Vec<bool>,
}

impl BitString {
    pub fn new() -> Self {
        BitString::default()
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn push_bit(&mut self, b: bool) {
        self.bits.push(b);
    }

    /// Append `value` in exactly `width` bits, most significant first.
    pub fn push_uint(&mut self, value: u64, width: u32) {
        debug_assert!(
            width == 64 || value >> width == 0,
            "{value} does not fit in {width} bits"
        );
        for i in (0..width).rev() {
            self.bits.push((value >> i) & 1 == 1);
        }
    }

    pub fn extend_bits(&mut self, bits: impl IntoIterator<Item = bool>) {
        self.bits.extend(bits);
    }

    pub fn reader(&self) -> BitReader<'_> {
        BitReader {
            bits: &self.bits,
            pos: 0,
        }
    }

    pub fn as_bits(&self) -> &[bool] {
        &self.bits
    }
}

impl FromIterator<bool> for BitString {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        BitString {
            bits: iter.into_iter().collect(),
        }
    }
}

/// Sequential decoder over a [`BitString`].
#[derive(Debug)]
pub struct BitReader<'a> {
    bits: &'a [bool],
    pos: usize,
}

impl BitReader<'_> {
    pub fn read_bit(&mut self) -> Result<bool> {
        let b = *self
            .bits
            .get(self.pos)
            .ok_or_else(|| ProtocolError::malformed("message ended early"))?;
        self.pos += 1;
        Ok(b)
    }

    pub fn read_uint(&mut self, width: u32) -> Result<u64> {
        let mut v = 0u64;
        for _ in 0..width {
            v = (v << 1) | self.read_bit()? as u64;
        }
        Ok(v)
    }

    pub fn remaining(&self) -> usize {
        self.bits.len() - self.pos
    }

    /// Fail unless the whole message was consumed.
    pub fn finish(&self) -> Result<()> {
        if self.remaining() == 0 {
            Ok(())
        } else {
            Err(ProtocolError::malformed(format!("{} unread bits", self.remaining())))
        }
    }
}
