#![allow(dead_code)]

use grig_core::{GenWord, GrigElement, Letter};
use proptest::prelude::*;
use rand::Rng;

pub fn el(word: &str) -> GrigElement {
    GrigElement::parse(word).unwrap()
}

pub fn random_element(rng: &mut impl Rng, max_len: usize) -> GrigElement {
    let len = rng.gen_range(0..=max_len);
    GrigElement::from_word(GenWord::reduce((0..len).map(|_| Letter::ALL[rng.gen_range(0..4)])))
}

/// Reduced words from up to `max_len` random letters.
pub fn element(max_len: usize) -> impl Strategy<Value = GrigElement> {
    prop::collection::vec(0..4usize, 0..=max_len)
        .prop_map(|codes| GrigElement::from_word(GenWord::reduce(codes.into_iter().map(|c| Letter::ALL[c]))))
}

pub fn vertex(max_len: usize) -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(0..2u8, 0..=max_len)
}
