//! The sixteen cosets `z₀ … z₁₅` of the normal subgroup
//! `K = ⟨(ab)², (bada)², (abad)²⟩`, the lifting map, and coset descriptors
//! for the tower `K₀ = K`, `K_{m+1} = Ψ⁻¹(K_m × K_m)`.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::element::GrigElement;
use crate::error::{GrigError, Result};
use crate::guard::Guards;
use crate::quotient::{FiniteQuotient, IndexSet, LevelPermutation};
use crate::word::Letter;

/// A right coset `K z_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct KCoset(u8);

/// Representative words of `z₀ … z₁₅`.
pub const REPRESENTATIVES: [&str; 16] =
    ["", "d", "da", "dad", "adad", "ada", "ad", "a", "b", "c", "ca", "cad", "badad", "bada", "bad", "ab"];

/// Right multiplication `z_i · x` for `x ∈ {a, b, d}`.
pub const SCHREIER: [[u8; 3]; 16] = [
    [7, 8, 1],
    [2, 9, 0],
    [1, 10, 3],
    [4, 11, 2],
    [3, 12, 5],
    [6, 13, 4],
    [5, 14, 7],
    [0, 15, 6],
    [15, 0, 9],
    [10, 1, 8],
    [9, 2, 11],
    [12, 3, 10],
    [11, 4, 13],
    [14, 5, 12],
    [13, 6, 15],
    [8, 7, 14],
];

/// Cayley table of `Γ/K`: `KMUL[i][j]` is the coset of `z_i z_j`.
pub const KMUL: [[u8; 16]; 16] = [
    [0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15],
    [1, 0, 7, 6, 5, 4, 3, 2, 9, 8, 15, 14, 13, 12, 11, 10],
    [2, 3, 4, 5, 6, 7, 0, 1, 10, 11, 12, 13, 14, 15, 8, 9],
    [3, 2, 1, 0, 7, 6, 5, 4, 11, 10, 9, 8, 15, 14, 13, 12],
    [4, 5, 6, 7, 0, 1, 2, 3, 12, 13, 14, 15, 8, 9, 10, 11],
    [5, 4, 3, 2, 1, 0, 7, 6, 13, 12, 11, 10, 9, 8, 15, 14],
    [6, 7, 0, 1, 2, 3, 4, 5, 14, 15, 8, 9, 10, 11, 12, 13],
    [7, 6, 5, 4, 3, 2, 1, 0, 15, 14, 13, 12, 11, 10, 9, 8],
    [8, 9, 10, 11, 12, 13, 14, 15, 0, 1, 2, 3, 4, 5, 6, 7],
    [9, 8, 15, 14, 13, 12, 11, 10, 1, 0, 7, 6, 5, 4, 3, 2],
    [10, 11, 12, 13, 14, 15, 8, 9, 2, 3, 4, 5, 6, 7, 0, 1],
    [11, 10, 9, 8, 15, 14, 13, 12, 3, 2, 1, 0, 7, 6, 5, 4],
    [12, 13, 14, 15, 8, 9, 10, 11, 4, 5, 6, 7, 0, 1, 2, 3],
    [13, 12, 11, 10, 9, 8, 15, 14, 5, 4, 3, 2, 1, 0, 7, 6],
    [14, 15, 8, 9, 10, 11, 12, 13, 6, 7, 0, 1, 2, 3, 4, 5],
    [15, 14, 13, 12, 11, 10, 9, 8, 7, 6, 5, 4, 3, 2, 1, 0],
];

/// The lifting map as `((j, k), i)`: an element of `Stab(1)` with sections in
/// `z_j` and `z_k` lies in `z_i`. Pairs not listed have no lift.
pub const LIFT_ENTRIES: [((u8, u8), u8); 32] = [
    ((0, 0), 0),
    ((0, 8), 1),
    ((1, 7), 13),
    ((1, 15), 12),
    ((2, 6), 4),
    ((2, 14), 5),
    ((3, 5), 9),
    ((3, 13), 8),
    ((8, 0), 5),
    ((8, 8), 4),
    ((9, 7), 8),
    ((9, 15), 9),
    ((10, 6), 1),
    ((10, 14), 0),
    ((11, 5), 12),
    ((11, 13), 13),
    ((4, 4), 0),
    ((4, 12), 1),
    ((5, 3), 13),
    ((5, 11), 12),
    ((6, 2), 4),
    ((6, 10), 5),
    ((7, 1), 9),
    ((7, 9), 8),
    ((12, 4), 5),
    ((12, 12), 4),
    ((13, 3), 8),
    ((13, 11), 9),
    ((14, 2), 1),
    ((14, 10), 0),
    ((15, 1), 12),
    ((15, 9), 13),
];

const NO_LIFT: u8 = u8::MAX;

/// `LIFT[j][k]`, or `NO_LIFT`.
pub type LiftTable = [[u8; 16]; 16];

pub const fn lift_table_from(entries: &[((u8, u8), u8)]) -> LiftTable {
    let mut table = [[NO_LIFT; 16]; 16];
    let mut i = 0;
    while i < entries.len() {
        let ((j, k), v) = entries[i];
        table[j as usize][k as usize] = v;
        i += 1;
    }
    table
}

pub const LIFT: LiftTable = lift_table_from(&LIFT_ENTRIES);

const KINV: [u8; 16] = {
    let mut inv = [0u8; 16];
    let mut i = 0;
    while i < 16 {
        let mut j = 0;
        while j < 16 {
            if KMUL[i][j] == 0 {
                inv[i] = j as u8;
            }
            j += 1;
        }
        i += 1;
    }
    inv
};

impl KCoset {
    pub const IDENTITY: KCoset = KCoset(0);
    /// `Ka`.
    pub const A: KCoset = KCoset(7);

    pub fn new(index: u8) -> Result<KCoset> {
        if index < 16 {
            Ok(KCoset(index))
        } else {
            Err(GrigError::InvalidArgument(alloc::format!("coset index {index} out of range")))
        }
    }

    pub fn index(self) -> u8 {
        self.0
    }

    pub fn all() -> impl Iterator<Item = KCoset> {
        (0..16).map(KCoset)
    }

    pub fn representative(self) -> GrigElement {
        GrigElement::parse(REPRESENTATIVES[self.0 as usize]).expect("representative words parse")
    }

    pub fn mul(self, other: KCoset) -> KCoset {
        KCoset(KMUL[self.0 as usize][other.0 as usize])
    }

    pub fn inv(self) -> KCoset {
        KCoset(KINV[self.0 as usize])
    }

    /// The coset is contained in `Stab(1)`.
    pub fn fixes_level_one(self) -> bool {
        matches!(self.0, 0 | 1 | 4 | 5 | 8 | 9 | 12 | 13)
    }
}

impl fmt::Display for KCoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "z{}", self.0)
    }
}

/// Walk the Schreier graph from `z₀` along the word (`c` is read as `bd`).
pub fn coset_of(g: &GrigElement) -> KCoset {
    let mut state = 0u8;
    for &letter in g.letters() {
        let row = &SCHREIER[state as usize];
        state = match letter {
            Letter::A => row[0],
            Letter::B => row[1],
            Letter::D => row[2],
            Letter::C => SCHREIER[row[1] as usize][2],
        };
    }
    KCoset(state)
}

pub fn lift(j: KCoset, k: KCoset) -> Option<KCoset> {
    lift_in(&LIFT, j, k)
}

pub fn lift_in(table: &LiftTable, j: KCoset, k: KCoset) -> Option<KCoset> {
    match table[j.0 as usize][k.0 as usize] {
        NO_LIFT => None,
        i => Some(KCoset(i)),
    }
}

/// A set of cosets of `K` as a 16-bit mask.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct KMask(pub u16);

impl KMask {
    pub const EMPTY: KMask = KMask(0);
    pub const FULL: KMask = KMask(u16::MAX);

    pub fn from_cosets<I: IntoIterator<Item = KCoset>>(cosets: I) -> KMask {
        KMask(cosets.into_iter().fold(0, |m, c| m | 1 << c.0))
    }

    pub fn contains(self, c: KCoset) -> bool {
        self.0 & (1 << c.0) != 0
    }

    pub fn insert(&mut self, c: KCoset) {
        self.0 |= 1 << c.0;
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub fn iter(self) -> impl Iterator<Item = KCoset> {
        (0..16u8).filter(move |i| self.0 & (1 << i) != 0).map(KCoset)
    }

    /// `{ x z : x ∈ self }`.
    pub fn mul_right(self, z: KCoset) -> KMask {
        KMask::from_cosets(self.iter().map(|x| x.mul(z)))
    }

    pub fn is_subset(self, other: KMask) -> bool {
        self.0 & !other.0 == 0
    }
}

impl fmt::Debug for KMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|c| c.0)).finish()
    }
}

/// Coset identification inside `Γ/Stab(3)`, independent of the embedded
/// tables: `K` is closed up from its generators and each class is named by
/// the representative word it contains.
pub struct KOracle {
    quotient: FiniteQuotient,
    kernel: IndexSet,
    coset: Vec<KCoset>,
}

impl KOracle {
    pub fn new() -> KOracle {
        let quotient = FiniteQuotient::enumerate(3, &Guards::default()).expect("depth 3 is always allowed");
        let seeds: Vec<u32> = ["(ab)^2", "(bada)^2", "(abad)^2"]
            .iter()
            .map(|w| quotient.index_of_element(&GrigElement::parse(w).expect("valid word")))
            .collect();
        let kernel = quotient.subgroup_closure(&seeds);
        let labels = quotient.coset_labels(&kernel);
        let mut name = alloc::vec![u8::MAX; labels.count() as usize];
        for (i, word) in REPRESENTATIVES.iter().enumerate() {
            let x = quotient.index_of_element(&GrigElement::parse(word).expect("valid word"));
            name[labels.label(x) as usize] = i as u8;
        }
        let coset = (0..quotient.len() as u32).map(|x| KCoset(name[labels.label(x) as usize])).collect();
        KOracle { quotient, kernel, coset }
    }

    pub fn quotient(&self) -> &FiniteQuotient {
        &self.quotient
    }

    /// `K/Stab(3)` as element indices of the depth-3 quotient.
    pub fn kernel(&self) -> &IndexSet {
        &self.kernel
    }

    pub fn coset_of_index(&self, x: u32) -> KCoset {
        self.coset[x as usize]
    }

    /// Coset of a permutation of depth at least 3.
    pub fn coset_of_permutation(&self, p: &LevelPermutation) -> KCoset {
        let x = self.quotient.index_of(p.restrict(3).images()).expect("restriction lies in the quotient");
        self.coset[x as usize]
    }
}

impl Default for KOracle {
    fn default() -> Self {
        KOracle::new()
    }
}

/// Outcome of checking a lifting table against a quotient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftReport {
    pub depth: u8,
    /// Defined entries of the table.
    pub entries: usize,
    /// Defined entries realized by some element.
    pub witnessed: usize,
    /// Triples `(j, k, i)` observed in the quotient that disagree with the table.
    pub contradictions: Vec<(u8, u8, u8)>,
    /// Table entries `(j, k, i)` never realized.
    pub unwitnessed: Vec<(u8, u8, u8)>,
}

impl LiftReport {
    pub fn passed(&self) -> bool {
        self.contradictions.is_empty() && (self.depth < 4 || self.unwitnessed.is_empty())
    }

    pub fn summary(&self) -> String {
        alloc::format!("{}/{} entries verified", self.witnessed, self.entries)
    }
}

/// Check `table` against every element of `Stab(1)` in `quotient`.
///
/// At depth 4 or more the cosets of sections are identified on permutations
/// via `oracle`; at depth 3 the shortest words of the quotient elements are
/// used instead, so only some entries are witnessed.
pub fn verify_lift_table(quotient: &FiniteQuotient, oracle: &KOracle, table: &LiftTable) -> LiftReport {
    let depth = quotient.depth();
    let mut seen = [[NO_LIFT; 16]; 16];
    let mut contradictions = BTreeSet::new();
    for x in 0..quotient.len() as u32 {
        let (j, k, i) = if depth >= 4 {
            let p = quotient.get(x);
            let (left, right, twist) = p.sections();
            if twist {
                continue;
            }
            (oracle.coset_of_permutation(&left), oracle.coset_of_permutation(&right), oracle.coset_of_permutation(&p))
        } else {
            let w = quotient.word_of(x);
            if w.twist() {
                continue;
            }
            let s = w.first_level();
            (coset_of(&s.left), coset_of(&s.right), coset_of(&w))
        };
        seen[j.0 as usize][k.0 as usize] = i.0;
        if table[j.0 as usize][k.0 as usize] != i.0 {
            contradictions.insert((j.0, k.0, i.0));
        }
    }
    let mut entries = 0;
    let mut witnessed = 0;
    let mut unwitnessed = Vec::new();
    for j in 0..16 {
        for k in 0..16 {
            let i = table[j][k];
            if i == NO_LIFT {
                continue;
            }
            entries += 1;
            if seen[j][k] == i {
                witnessed += 1;
            } else {
                unwitnessed.push((j as u8, k as u8, i));
            }
        }
    }
    LiftReport { depth, entries, witnessed, contradictions: contradictions.into_iter().collect(), unwitnessed }
}

/// A coset of `K_m`.
///
/// Level 0 is a coset of `K`. At level `m ≥ 1` a coset `gK_m` is recorded as
/// the level-1 twist of `g` together with the `K_{m-1}`-cosets of the two
/// sections of `g·a^twist ∈ Stab(1)`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum KmCoset {
    Base(KCoset),
    Node { twist: bool, children: Box<(KmCoset, KmCoset)> },
}

impl KmCoset {
    pub fn node(twist: bool, left: KmCoset, right: KmCoset) -> KmCoset {
        KmCoset::Node { twist, children: Box::new((left, right)) }
    }

    pub fn identity(level: u8) -> KmCoset {
        if level == 0 {
            KmCoset::Base(KCoset::IDENTITY)
        } else {
            KmCoset::node(false, KmCoset::identity(level - 1), KmCoset::identity(level - 1))
        }
    }

    pub fn level(&self) -> u8 {
        match self {
            KmCoset::Base(_) => 0,
            KmCoset::Node { children, .. } => 1 + children.0.level(),
        }
    }

    /// The `K`-coset containing this `K_m`-coset.
    pub fn base(&self) -> Option<KCoset> {
        match self {
            KmCoset::Base(c) => Some(*c),
            KmCoset::Node { twist, children } => {
                let lifted = lift(children.0.base()?, children.1.base()?)?;
                Some(if *twist { lifted.mul(KCoset::A) } else { lifted })
            }
        }
    }

    /// Every node has realizable children and both subtrees have equal depth.
    pub fn is_realizable(&self) -> bool {
        match self {
            KmCoset::Base(_) => true,
            KmCoset::Node { children, .. } => {
                children.0.level() == children.1.level()
                    && children.0.is_realizable()
                    && children.1.is_realizable()
                    && self.base().is_some()
            }
        }
    }

    pub fn mul(&self, other: &KmCoset) -> Result<KmCoset> {
        match (self, other) {
            (KmCoset::Base(x), KmCoset::Base(y)) => Ok(KmCoset::Base(x.mul(*y))),
            (KmCoset::Node { twist: tg, children: g }, KmCoset::Node { twist: th, children: h }) => {
                let (h_first, h_second) = if *tg { (&h.1, &h.0) } else { (&h.0, &h.1) };
                Ok(KmCoset::node(tg ^ th, g.0.mul(h_first)?, g.1.mul(h_second)?))
            }
            _ => Err(GrigError::LevelMismatch { left: self.level(), right: other.level() }),
        }
    }

    pub fn inv(&self) -> KmCoset {
        match self {
            KmCoset::Base(x) => KmCoset::Base(x.inv()),
            KmCoset::Node { twist, children } => {
                let (l, r) = (children.0.inv(), children.1.inv());
                if *twist {
                    KmCoset::node(true, r, l)
                } else {
                    KmCoset::node(false, l, r)
                }
            }
        }
    }

    /// All realizable descriptors of the given level.
    pub fn all(level: u8) -> Vec<KmCoset> {
        if level == 0 {
            return KCoset::all().map(KmCoset::Base).collect();
        }
        let below = KmCoset::all(level - 1);
        let mut by_base: [Vec<&KmCoset>; 16] = Default::default();
        for d in &below {
            by_base[d.base().expect("realizable").0 as usize].push(d);
        }
        let mut out = Vec::new();
        for twist in [false, true] {
            for &((j, k), _) in LIFT_ENTRIES.iter() {
                for l in &by_base[j as usize] {
                    for r in &by_base[k as usize] {
                        out.push(KmCoset::node(twist, (*l).clone(), (*r).clone()));
                    }
                }
            }
        }
        out.sort();
        out
    }
}

impl fmt::Display for KmCoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KmCoset::Base(c) => write!(f, "{c}"),
            KmCoset::Node { twist, children } => {
                write!(f, "{}({}, {})", if *twist { "a" } else { "" }, children.0, children.1)
            }
        }
    }
}

impl fmt::Debug for KmCoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// The `K_m`-coset of `g`.
pub fn km_coset_of(g: &GrigElement, level: u8, guards: &Guards) -> Result<KmCoset> {
    guards.check_level(level)?;
    Ok(km_coset_unchecked(g, level))
}

pub(crate) fn km_coset_unchecked(g: &GrigElement, level: u8) -> KmCoset {
    if level == 0 {
        return KmCoset::Base(coset_of(g));
    }
    let s = g.first_level();
    // g·a has sections (g|_1, g|_0)
    let (left, right) = if s.twist { (&s.right, &s.left) } else { (&s.left, &s.right) };
    KmCoset::node(s.twist, km_coset_unchecked(left, level - 1), km_coset_unchecked(right, level - 1))
}

/// The `K_m`-coset of a permutation of depth at least `m + 3`.
pub fn km_coset_of_permutation(p: &LevelPermutation, level: u8, oracle: &KOracle) -> KmCoset {
    if level == 0 {
        return KmCoset::Base(oracle.coset_of_permutation(p));
    }
    let (left, right, twist) = p.sections();
    let (left, right) = if twist { (right, left) } else { (left, right) };
    KmCoset::node(
        twist,
        km_coset_of_permutation(&left, level - 1, oracle),
        km_coset_of_permutation(&right, level - 1, oracle),
    )
}

/// Render the Schreier graph of `K` as a DOT digraph.
pub fn schreier_dot() -> String {
    let mut out = String::from("digraph schreier {\n");
    for (i, word) in REPRESENTATIVES.iter().enumerate() {
        let label = if word.is_empty() { "K" } else { word };
        out.push_str(&alloc::format!("  z{i} [label=\"z{i}\\n{label}\"];\n"));
    }
    for (i, row) in SCHREIER.iter().enumerate() {
        for (gen, &j) in ['a', 'b', 'd'].iter().zip(row) {
            // every generator is an involution, so draw each edge once
            if i <= j as usize {
                out.push_str(&alloc::format!("  z{i} -> z{j} [label=\"{gen}\", dir=none];\n"));
            }
        }
    }
    out.push_str("}\n");
    out
}
