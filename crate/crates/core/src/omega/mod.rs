//! ω-automata over bit-tuple alphabets: letters are `u32` whose bit `i` is the
//! value of track `i`.

pub mod bitset;
mod determinize;
mod dpa;
pub mod io;
mod lasso;
mod merge;
mod nba;
mod safra;

pub use determinize::{determinize, determinize_with, has_cheap_determinization};
pub use dpa::Dpa;
pub use lasso::Lasso;
pub use nba::Nba;

use crate::error::{Error, Result};

pub type Letter = u32;

/// Hard upper bound on alphabet width; explicit tables have `2^width` columns.
pub const MAX_WIDTH: usize = 12;

/// Default bound on the number of states produced by determinization.
pub const DEFAULT_STATE_CAP: usize = 100_000;

#[inline]
pub(crate) fn letters(width: usize) -> usize {
    1 << width
}

pub(crate) fn check_width(width: usize) -> Result<()> {
    if width > MAX_WIDTH {
        return Err(Error::WidthLimit {
            width,
            limit: MAX_WIDTH,
        });
    }
    Ok(())
}

/// Read a narrow letter out of a wide one: bit `i` of the result is bit
/// `positions[i]` of `l`.
#[inline]
pub(crate) fn remap_letter(l: Letter, positions: &[usize]) -> Letter {
    positions
        .iter()
        .enumerate()
        .fold(0, |acc, (i, &t)| acc | (l >> t & 1) << i)
}

/// Render a letter as a bit string, track 0 first; width 0 prints `-`.
pub fn letter_bits(width: usize, l: Letter) -> String {
    if width == 0 {
        return "-".into();
    }
    (0..width)
        .map(|t| if l >> t & 1 == 1 { '1' } else { '0' })
        .collect()
}

pub fn parse_letter_bits(width: usize, s: &str) -> Option<Letter> {
    if width == 0 {
        return (s == "-").then_some(0);
    }
    if s.len() != width {
        return None;
    }
    s.chars().enumerate().try_fold(0, |acc, (i, c)| match c {
        '0' => Some(acc),
        '1' => Some(acc | 1 << i),
        _ => None,
    })
}
