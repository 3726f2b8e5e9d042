//! Bit sequences stored as `u8` values in {0, 1} and their text forms.

use crate::error::{Error, Result};

/// Renders bits as ASCII `'0'`/`'1'`, first bit first.
pub fn to_ascii(bits: &[u8]) -> String {
    bits.iter()
        .map(|&b| if b == 0 { '0' } else { '1' })
        .collect()
}

/// Parses ASCII `'0'`/`'1'`; whitespace (including newlines) is skipped.
pub fn from_ascii(text: &str) -> Result<Vec<u8>> {
    text.chars()
        .filter(|c| !c.is_whitespace())
        .enumerate()
        .map(|(i, c)| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            other => Err(Error::Decode(format!("character {other:?} at bit {i}"))),
        })
        .collect()
}

/// Expands raw bytes, most significant bit first.
pub fn from_bytes(bytes: &[u8]) -> Vec<u8> {
    bytes
        .iter()
        .flat_map(|&byte| (0..8).rev().map(move |k| (byte >> k) & 1))
        .collect()
}

pub fn ones(bits: &[u8]) -> usize {
    bits.iter().filter(|&&b| b != 0).count()
}

/// Serde adapter for `Vec<u8>` bit sequences written as a `"0101"` string.
pub(crate) mod ascii_serde {
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(bits: &[u8], s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::to_ascii(bits))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<u8>, D::Error> {
        let text = String::deserialize(d)?;
        super::from_ascii(&text).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ascii_skips_newlines() {
        assert_eq!(from_ascii("01\n1 0\r\n").unwrap(), vec![0, 1, 1, 0]);
        assert!(from_ascii("012").is_err());
        assert_eq!(to_ascii(&[1, 0, 1]), "101");
    }

    #[test]
    fn bytes_msb_first() {
        assert_eq!(
            from_bytes(&[0b1000_0001, 0x0f]),
            vec![1, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 1, 1, 1]
        );
    }
}
