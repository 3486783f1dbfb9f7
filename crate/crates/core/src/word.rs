//! Words over the generators `a, b, c, d` and their Klein-four normal form.
//!
//! `a` is an involution, and `{1, b, c, d}` is a Klein four-group. A reduced
//! word therefore alternates single `a`'s with single letters from `{b, c, d}`.

use alloc::vec::Vec;
use core::fmt;

use crate::error::{GrigError, Result};

/// Upper bound on the number of letters a parsed word may expand to.
pub const MAX_EXPANDED_LETTERS: usize = 1 << 22;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[repr(u8)]
pub enum Letter {
    A = 0,
    B = 1,
    C = 2,
    D = 3,
}

impl Letter {
    pub const ALL: [Letter; 4] = [Letter::A, Letter::B, Letter::C, Letter::D];

    pub fn from_char(ch: char) -> Option<Letter> {
        match ch {
            'a' => Some(Letter::A),
            'b' => Some(Letter::B),
            'c' => Some(Letter::C),
            'd' => Some(Letter::D),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::A => 'a',
            Letter::B => 'b',
            Letter::C => 'c',
            Letter::D => 'd',
        }
    }

    fn is_klein(self) -> bool {
        self != Letter::A
    }

    /// Product inside `{1,b,c,d}`; `None` is the identity.
    fn klein_product(self, other: Letter) -> Option<Letter> {
        debug_assert!(self.is_klein() && other.is_klein());
        if self == other {
            None
        } else {
            // b, c, d are 1, 2, 3: the third letter is the xor of the other two.
            Some(match (self as u8) ^ (other as u8) {
                1 => Letter::B,
                2 => Letter::C,
                _ => Letter::D,
            })
        }
    }
}

/// A word in Klein-four reduced form.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct GenWord {
    letters: Vec<Letter>,
}

impl GenWord {
    pub fn identity() -> GenWord {
        GenWord { letters: Vec::new() }
    }

    pub fn from_letter(letter: Letter) -> GenWord {
        GenWord { letters: alloc::vec![letter] }
    }

    /// Reduce an arbitrary letter sequence.
    pub fn reduce<I: IntoIterator<Item = Letter>>(raw: I) -> GenWord {
        let mut out: Vec<Letter> = Vec::new();
        for letter in raw {
            push_reduced(&mut out, letter);
        }
        GenWord { letters: out }
    }

    /// Reduce a string of letters `a`-`d` (no power syntax).
    pub fn reduce_str(raw: &str) -> Result<GenWord> {
        let mut letters = Vec::with_capacity(raw.len());
        for (position, found) in raw.chars().enumerate() {
            match Letter::from_char(found) {
                Some(l) => letters.push(l),
                None => return Err(GrigError::InvalidLetter { position, found }),
            }
        }
        Ok(GenWord::reduce(letters))
    }

    /// Parse the word syntax: letters, parenthesised groups and `^n` powers,
    /// e.g. `"(ab)^16"` or `"b(ad(ac)^2)^3"`. Whitespace is ignored and the
    /// empty string is the identity.
    pub fn parse(text: &str) -> Result<GenWord> {
        let chars: Vec<char> = text.chars().collect();
        let mut parser = Parser { chars: &chars, pos: 0 };
        let letters = parser.sequence(0)?;
        parser.skip_ws();
        if parser.pos != chars.len() {
            return Err(GrigError::Syntax { position: parser.pos, message: "unmatched ')'" });
        }
        Ok(GenWord::reduce(letters))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Number of `a`'s; its parity is the level-1 permutation.
    pub fn a_count(&self) -> usize {
        self.letters.iter().filter(|&&l| l == Letter::A).count()
    }

    pub fn concat(&self, other: &GenWord) -> GenWord {
        let mut out = self.letters.clone();
        for &l in &other.letters {
            push_reduced(&mut out, l);
        }
        GenWord { letters: out }
    }

    /// All generators are involutions, so the inverse is the reversal.
    pub fn reversed(&self) -> GenWord {
        let mut letters = self.letters.clone();
        letters.reverse();
        GenWord { letters }
    }
}

fn push_reduced(out: &mut Vec<Letter>, letter: Letter) {
    match out.last().copied() {
        Some(Letter::A) if letter == Letter::A => {
            out.pop();
        }
        Some(top) if top.is_klein() && letter.is_klein() => {
            out.pop();
            if let Some(merged) = top.klein_product(letter) {
                out.push(merged);
            }
        }
        _ => out.push(letter),
    }
}

impl fmt::Display for GenWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            fmt::Write::write_char(f, l.as_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for GenWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

struct Parser<'a> {
    chars: &'a [char],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn sequence(&mut self, nesting: usize) -> Result<Vec<Letter>> {
        let mut out = Vec::new();
        loop {
            self.skip_ws();
            let Some(&ch) = self.chars.get(self.pos) else {
                if nesting > 0 {
                    return Err(GrigError::Syntax { position: self.pos, message: "unclosed '('" });
                }
                return Ok(out);
            };
            let atom = match ch {
                '(' => {
                    self.pos += 1;
                    let inner = self.sequence(nesting + 1)?;
                    // sequence() stops on ')'
                    self.pos += 1;
                    inner
                }
                ')' => return Ok(out),
                '^' => return Err(GrigError::Syntax { position: self.pos, message: "'^' without a base" }),
                _ => match Letter::from_char(ch) {
                    Some(l) => {
                        self.pos += 1;
                        alloc::vec![l]
                    }
                    None => return Err(GrigError::InvalidLetter { position: self.pos, found: ch }),
                },
            };
            let power = self.exponent()?;
            let total = out.len().saturating_add(atom.len().saturating_mul(power));
            if total > MAX_EXPANDED_LETTERS {
                return Err(GrigError::WordTooLong { letters: total, limit: MAX_EXPANDED_LETTERS });
            }
            for _ in 0..power {
                out.extend_from_slice(&atom);
            }
        }
    }

    fn exponent(&mut self) -> Result<usize> {
        self.skip_ws();
        if self.chars.get(self.pos) != Some(&'^') {
            return Ok(1);
        }
        self.pos += 1;
        self.skip_ws();
        let start = self.pos;
        let mut value: usize = 0;
        while let Some(d) = self.chars.get(self.pos).and_then(|c| c.to_digit(10)) {
            value = value
                .checked_mul(10)
                .and_then(|v| v.checked_add(d as usize))
                .ok_or(GrigError::Syntax { position: self.pos, message: "exponent overflow" })?;
            self.pos += 1;
        }
        if self.pos == start {
            return Err(GrigError::Syntax { position: start, message: "expected exponent digits" });
        }
        Ok(value)
    }
}
