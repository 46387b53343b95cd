//! Coin tapes from the command line: explicit rows or a seeded expansion.
//!
//! Seeded tapes are for demos only — the exact oracles never sample. The
//! expansion is a fixed splitmix64 stream (documented in the README), so a
//! seed always yields the same tape.

use paca_core::automaton::RandomTape;

use crate::error::CliError;

/// Parses rows like `0101;1100`.
pub fn parse_tape(text: &str) -> Result<RandomTape, CliError> {
    let mut rows = Vec::new();
    for row_text in text.split(';') {
        let mut row = Vec::new();
        for c in row_text.chars() {
            match c.to_digit(10) {
                Some(d) if d < 16 => row.push(d as u8),
                _ => return Err(CliError::Format(format!("bad coin digit {c:?}"))),
            }
        }
        rows.push(row);
    }
    RandomTape::new(rows).map_err(|e| CliError::Format(e.to_string()))
}

pub struct SeedStream(u64);

impl SeedStream {
    pub fn new(seed: u64) -> SeedStream {
        SeedStream(seed)
    }

    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// One coin bit per call, taken from the top bit of the stream.
    pub fn bit(&mut self) -> u8 {
        (self.next() >> 63) as u8
    }
}

/// Expands a seed into a `rows × width` coin matrix, row by row.
pub fn seeded_tape(seed: u64, rows: usize, width: usize) -> RandomTape {
    let mut stream = SeedStream::new(seed);
    RandomTape::new(
        (0..rows.max(1))
            .map(|_| (0..width).map(|_| stream.bit()).collect())
            .collect(),
    )
    .expect("nonempty tape")
}
