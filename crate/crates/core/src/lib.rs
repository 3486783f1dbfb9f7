#![no_std]
extern crate alloc;

pub mod coset;
pub mod element;
pub mod engine;
pub mod error;
pub mod guard;
pub mod quotient;
pub mod word;
pub mod wreath;

pub use coset::{coset_of, km_coset_of, KCoset, KMask, KmCoset};
pub use element::{GrigElement, SectionTriple};
pub use engine::{Conjugacy, ConjugacyEngine, QSet};
pub use error::{GrigError, Result};
pub use guard::Guards;
pub use quotient::{project, FiniteQuotient, LevelPermutation};
pub use word::{GenWord, Letter};
pub use wreath::{FiniteGroup, WreathElement, WreathProduct};
