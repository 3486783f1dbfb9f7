//! Elements of the Grigorchuk group as automorphisms of the binary tree.
//!
//! Convention: automorphisms act on the left and `gh` means "apply `h`, then
//! `g`". Every element decomposes as `g(i w) = s(i) g|_i(w)` with `s` the
//! level-1 permutation, and sections compose as
//! `(gh)|_i = g|_{s_h(i)} h|_i`. The generators unfold as
//! `a = (1, 1)·swap`, `b = (a, c)`, `c = (a, d)`, `d = (1, b)`.

use alloc::vec::Vec;
use core::fmt;

use crate::error::{GrigError, Result};
use crate::word::{GenWord, Letter};

/// Exponent cap for [`GrigElement::order`]: orders above `2^24` are reported
/// as an error.
pub const ORDER_EXPONENT_CAP: u32 = 24;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct GrigElement {
    word: GenWord,
}

/// First-level decomposition `g(i w) = s(i) g|_i(w)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectionTriple {
    pub left: GrigElement,
    pub right: GrigElement,
    /// `true` when the element swaps the two level-1 vertices.
    pub twist: bool,
}

impl SectionTriple {
    pub fn section(&self, bit: u8) -> &GrigElement {
        if bit == 0 {
            &self.left
        } else {
            &self.right
        }
    }
}

/// Section of a single generator at a level-1 vertex, `None` for the identity.
fn generator_section(letter: Letter, bit: u8) -> Option<Letter> {
    match (letter, bit) {
        (Letter::A, _) => None,
        (Letter::B, 0) | (Letter::C, 0) => Some(Letter::A),
        (Letter::B, _) => Some(Letter::C),
        (Letter::C, _) => Some(Letter::D),
        (Letter::D, 0) => None,
        (Letter::D, _) => Some(Letter::B),
    }
}

impl GrigElement {
    pub fn identity() -> GrigElement {
        GrigElement { word: GenWord::identity() }
    }

    pub fn generator(letter: Letter) -> GrigElement {
        GrigElement { word: GenWord::from_letter(letter) }
    }

    pub fn a() -> GrigElement {
        Self::generator(Letter::A)
    }
    pub fn b() -> GrigElement {
        Self::generator(Letter::B)
    }
    pub fn c() -> GrigElement {
        Self::generator(Letter::C)
    }
    pub fn d() -> GrigElement {
        Self::generator(Letter::D)
    }

    pub fn from_word(word: GenWord) -> GrigElement {
        GrigElement { word }
    }

    /// Parse the word syntax of [`GenWord::parse`].
    pub fn parse(text: &str) -> Result<GrigElement> {
        GenWord::parse(text).map(GrigElement::from_word)
    }

    pub fn word(&self) -> &GenWord {
        &self.word
    }

    pub fn letters(&self) -> &[Letter] {
        self.word.letters()
    }

    /// Length of the reduced word. This is an upper bound for the word-metric
    /// norm and equals it for words of length at most 2.
    pub fn length(&self) -> usize {
        self.word.len()
    }

    pub fn is_identity_word(&self) -> bool {
        self.word.is_empty()
    }

    pub fn multiply(&self, other: &GrigElement) -> GrigElement {
        GrigElement { word: self.word.concat(&other.word) }
    }

    pub fn invert(&self) -> GrigElement {
        GrigElement { word: self.word.reversed() }
    }

    /// `x⁻¹ g x`.
    pub fn conjugate_by(&self, x: &GrigElement) -> GrigElement {
        x.invert().multiply(self).multiply(x)
    }

    pub fn pow(&self, exponent: u64) -> GrigElement {
        let mut acc = GrigElement::identity();
        let mut base = self.clone();
        let mut e = exponent;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.multiply(&base);
            }
            base = base.multiply(&base);
            e >>= 1;
        }
        acc
    }

    /// Level-1 permutation: `true` iff the element swaps `0` and `1`.
    pub fn twist(&self) -> bool {
        self.word.a_count() % 2 == 1
    }

    pub fn in_stab1(&self) -> bool {
        !self.twist()
    }

    fn section_at(&self, bit: u8) -> GrigElement {
        let mut pos = bit;
        let mut reversed = Vec::with_capacity(self.word.len() / 2 + 1);
        for &letter in self.letters().iter().rev() {
            if letter == Letter::A {
                pos ^= 1;
            } else if let Some(s) = generator_section(letter, pos) {
                reversed.push(s);
            }
        }
        GrigElement { word: GenWord::reduce(reversed.into_iter().rev()) }
    }

    pub fn first_level(&self) -> SectionTriple {
        SectionTriple { left: self.section_at(0), right: self.section_at(1), twist: self.twist() }
    }

    /// Section `g|_v` along a vertex given as bits (0/1).
    pub fn section(&self, vertex: &[u8]) -> GrigElement {
        let mut cur = self.clone();
        for &bit in vertex {
            cur = cur.section_at(bit);
        }
        cur
    }

    /// Image of a vertex (bits 0/1), computed through the section recursion.
    pub fn act(&self, vertex: &[u8]) -> Vec<u8> {
        let mut out = Vec::with_capacity(vertex.len());
        let mut cur = self.clone();
        for &bit in vertex {
            if cur.is_identity_word() {
                out.push(bit);
                continue;
            }
            out.push(bit ^ cur.twist() as u8);
            cur = cur.section_at(bit);
        }
        out
    }

    /// Word problem: does the element act trivially on the whole tree?
    pub fn is_trivial(&self) -> bool {
        if self.length() <= 1 {
            return self.is_identity_word();
        }
        if self.twist() {
            return false;
        }
        // Sections of an untwisted reduced word of length >= 3 are strictly shorter.
        self.section_at(0).is_trivial() && self.section_at(1).is_trivial()
    }

    pub fn equals(&self, other: &GrigElement) -> bool {
        self.word == other.word || self.multiply(&other.invert()).is_trivial()
    }

    /// Membership in the level stabilizer `Stab(n)`.
    pub fn in_stab(&self, n: usize) -> bool {
        if n == 0 || self.is_identity_word() {
            return true;
        }
        if self.twist() {
            return false;
        }
        self.section_at(0).in_stab(n - 1) && self.section_at(1).in_stab(n - 1)
    }

    /// Order of the element (always a power of two).
    ///
    /// A twisted element squares to `(g₁g₀, g₀g₁)`, whose coordinates are
    /// conjugate; an untwisted one has the larger order of its two sections.
    pub fn order(&self) -> Result<u64> {
        let exponent = self.order_exponent(0)?;
        Ok(1u64 << exponent)
    }

    fn order_exponent(&self, spent: u32) -> Result<u32> {
        if spent > ORDER_EXPONENT_CAP {
            return Err(GrigError::OrderCap { limit: ORDER_EXPONENT_CAP });
        }
        match self.length() {
            0 => return Ok(0),
            1 => return Ok(1),
            _ => {}
        }
        let exponent = if self.twist() {
            let s = self.first_level();
            1 + s.left.multiply(&s.right).order_exponent(spent + 1)?
        } else {
            let s = self.first_level();
            let left = s.left.order_exponent(spent)?;
            let right = s.right.order_exponent(spent)?;
            left.max(right)
        };
        if exponent > ORDER_EXPONENT_CAP {
            return Err(GrigError::OrderCap { limit: ORDER_EXPONENT_CAP });
        }
        Ok(exponent)
    }
}

impl fmt::Display for GrigElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.word, f)
    }
}

impl fmt::Debug for GrigElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(&self.word, f)
    }
}

/// Apply one generator to a vertex (bits 0/1) in place, straight from its
/// recursive definition.
pub fn apply_letter(letter: Letter, vertex: &mut [u8]) {
    let mut state = Some(letter);
    for bit in vertex.iter_mut() {
        state = match (state, *bit) {
            (None, _) => return,
            (Some(Letter::A), _) => {
                *bit ^= 1;
                return;
            }
            (Some(l), b) => generator_section(l, b),
        };
    }
}

/// Image of a vertex under a word, applying letters right to left.
pub fn act_letterwise(g: &GrigElement, vertex: &[u8]) -> Vec<u8> {
    let mut out = vertex.to_vec();
    for &letter in g.letters().iter().rev() {
        apply_letter(letter, &mut out);
    }
    out
}

/// Parse a vertex string such as `"0110"` into bits.
pub fn parse_vertex(text: &str) -> Result<Vec<u8>> {
    text.chars()
        .enumerate()
        .map(|(position, found)| match found {
            '0' => Ok(0),
            '1' => Ok(1),
            _ => Err(GrigError::InvalidVertex { position, found }),
        })
        .collect()
}
