//! Short inline symbol names.
//!
//! State and alphabet symbols are referred to by name in file formats and
//! diagrams. Names are stored inline (no heap) so that states built from them
//! stay cheap to clone, compare, and hash in the probability engines.

use core::fmt;

/// Maximum byte length of a symbol name.
pub const MAX_NAME_LEN: usize = 23;

/// A short UTF-8 symbol name stored inline.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Name {
    len: u8,
    bytes: [u8; MAX_NAME_LEN],
}

impl Name {
    /// Creates a name from a string of at most [`MAX_NAME_LEN`] bytes.
    pub fn new(s: &str) -> Option<Name> {
        if s.is_empty() || s.len() > MAX_NAME_LEN {
            return None;
        }
        let mut bytes = [0u8; MAX_NAME_LEN];
        bytes[..s.len()].copy_from_slice(s.as_bytes());
        Some(Name {
            len: s.len() as u8,
            bytes,
        })
    }

    /// Single-character name.
    pub fn from_char(c: char) -> Name {
        let mut buf = [0u8; 4];
        Name::new(c.encode_utf8(&mut buf)).expect("char fits")
    }

    pub fn as_str(&self) -> &str {
        core::str::from_utf8(&self.bytes[..self.len as usize]).expect("names are valid UTF-8")
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}
