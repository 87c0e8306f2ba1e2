use std::fmt;

use super::Letter;
use crate::error::{Error, Result};

/// An ultimately periodic ω-word `prefix · cycle^ω` over a bit-tuple alphabet.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lasso {
    pub width: usize,
    pub prefix: Vec<Letter>,
    pub cycle: Vec<Letter>,
}

impl Lasso {
    pub fn new(width: usize, prefix: Vec<Letter>, cycle: Vec<Letter>) -> Result<Self> {
        if cycle.is_empty() {
            return Err(Error::malformed("lasso", "cycle must be nonempty"));
        }
        let bound = 1u64 << width;
        if let Some(&bad) = prefix
            .iter()
            .chain(cycle.iter())
            .find(|&&l| u64::from(l) >= bound)
        {
            return Err(Error::malformed(
                "lasso",
                format!("letter {bad} does not fit in {width} tracks"),
            ));
        }
        Ok(Lasso {
            width,
            prefix,
            cycle,
        })
    }

    /// A single-track lasso from bit words.
    pub fn from_bits(prefix: &[bool], cycle: &[bool]) -> Result<Self> {
        Lasso::new(
            1,
            prefix.iter().map(|&b| b as Letter).collect(),
            cycle.iter().map(|&b| b as Letter).collect(),
        )
    }

    /// The unique word of width 0.
    pub fn empty_word() -> Self {
        Lasso {
            width: 0,
            prefix: Vec::new(),
            cycle: vec![0],
        }
    }

    pub fn letter_at(&self, n: usize) -> Letter {
        if n < self.prefix.len() {
            self.prefix[n]
        } else {
            self.cycle[(n - self.prefix.len()) % self.cycle.len()]
        }
    }

    pub fn bit_at(&self, track: usize, n: usize) -> bool {
        self.letter_at(n) >> track & 1 == 1
    }

    /// Length of prefix plus one cycle; positions beyond repeat with the cycle.
    pub fn span(&self) -> usize {
        self.prefix.len() + self.cycle.len()
    }

    /// Stack several lassos into one word; the tracks of `parts[0]` come first.
    pub fn zip(parts: &[&Lasso]) -> Lasso {
        let width = parts.iter().map(|p| p.width).sum();
        let pre = parts.iter().map(|p| p.prefix.len()).max().unwrap_or(0);
        let per = parts.iter().fold(1, |acc, p| lcm(acc, p.cycle.len()));
        let letter = |n: usize| {
            let mut shift = 0;
            let mut l = 0;
            for p in parts {
                l |= p.letter_at(n) << shift;
                shift += p.width;
            }
            l
        };
        Lasso {
            width,
            prefix: (0..pre).map(letter).collect(),
            cycle: (pre..pre + per).map(letter).collect(),
        }
    }

    /// Single-track projection.
    pub fn track(&self, track: usize) -> Lasso {
        let bit = |l: &Letter| l >> track & 1;
        Lasso {
            width: 1,
            prefix: self.prefix.iter().map(bit).collect(),
            cycle: self.cycle.iter().map(bit).collect(),
        }
    }

    /// Same word with the prefix extended by `k` cycle letters.
    pub fn unrolled(&self, k: usize) -> Lasso {
        let mut prefix = self.prefix.clone();
        prefix.extend((0..k).map(|i| self.cycle[i % self.cycle.len()]));
        let shift = k % self.cycle.len();
        let mut cycle = self.cycle[shift..].to_vec();
        cycle.extend_from_slice(&self.cycle[..shift]);
        Lasso {
            width: self.width,
            prefix,
            cycle,
        }
    }

    /// The word with bit `track` of position `n` inverted; every other
    /// position is unchanged.
    pub fn with_flipped_bit(&self, track: usize, n: usize) -> Lasso {
        let mut w = self.unrolled((n + 1).saturating_sub(self.prefix.len()));
        w.prefix[n] ^= 1 << track;
        w
    }

    /// Same word with the cycle repeated `k` times.
    pub fn pumped(&self, k: usize) -> Lasso {
        Lasso {
            width: self.width,
            prefix: self.prefix.clone(),
            cycle: self.cycle.repeat(k.max(1)),
        }
    }

    /// Shortest representation: minimal cycle, then minimal prefix.
    pub fn normalized(&self) -> Lasso {
        let n = self.cycle.len();
        let period = (1..=n)
            .filter(|d| n.is_multiple_of(*d))
            .find(|&d| (0..n).all(|i| self.cycle[i] == self.cycle[i % d]))
            .unwrap_or(n);
        let mut prefix = self.prefix.clone();
        let mut cycle = self.cycle[..period].to_vec();
        while let Some(&last) = prefix.last() {
            if last != *cycle.last().unwrap() {
                break;
            }
            prefix.pop();
            cycle.rotate_right(1);
        }
        Lasso {
            width: self.width,
            prefix,
            cycle,
        }
    }

    /// Whether two lassos denote the same ω-word.
    pub fn same_word(&self, other: &Lasso) -> bool {
        self.width == other.width && self.normalized() == other.normalized()
    }
}

pub(crate) fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

fn write_letter(f: &mut fmt::Formatter<'_>, width: usize, l: Letter) -> fmt::Result {
    if width == 1 {
        return write!(f, "{}", l & 1);
    }
    write!(f, "[")?;
    for t in 0..width {
        write!(f, "{}", l >> t & 1)?;
    }
    write!(f, "]")
}

/// Prints `prefix;cycle`. Single-track letters print as bits, wider letters as
/// bracketed bit tuples with track 0 first.
impl fmt::Display for Lasso {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &l in &self.prefix {
            write_letter(f, self.width, l)?;
        }
        write!(f, ";")?;
        for &l in &self.cycle {
            write_letter(f, self.width, l)?;
        }
        Ok(())
    }
}
