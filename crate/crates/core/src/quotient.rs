//! The congruence quotients `Γ/Stab(n)` as permutation groups on the `2^n`
//! level-`n` vertices, and the brute-force oracles built on them.
//!
//! Vertex `v₁v₂…vₙ` has index `Σ vᵢ 2^(n-i)`, so the length-`k` prefix of a
//! vertex is `index >> (n - k)`.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use hashbrown::HashSet;

use crate::element::{apply_letter, GrigElement};
use crate::error::{GrigError, Result};
use crate::guard::Guards;
use crate::word::{GenWord, Letter};

/// The image of an element in `Γ/Stab(n)`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LevelPermutation {
    depth: u8,
    images: Vec<u8>,
}

impl LevelPermutation {
    pub fn identity(depth: u8) -> LevelPermutation {
        LevelPermutation { depth, images: (0..1usize << depth).map(|v| v as u8).collect() }
    }

    /// Wrap an image array, checking that it is a permutation induced by a
    /// tree automorphism.
    pub fn from_images(depth: u8, images: Vec<u8>) -> Result<LevelPermutation> {
        let degree = 1usize << depth;
        if images.len() != degree {
            return Err(GrigError::InvalidArgument("image array has the wrong length".into()));
        }
        let mut seen = alloc::vec![false; degree];
        for &im in &images {
            if (im as usize) >= degree || seen[im as usize] {
                return Err(GrigError::InvalidArgument("not a permutation".into()));
            }
            seen[im as usize] = true;
        }
        let perm = LevelPermutation { depth, images };
        for k in 0..depth {
            let shift = depth - k;
            for v in 0..degree {
                let u = v & !((1usize << shift) - 1);
                if perm.images[v] >> shift != perm.images[u] >> shift {
                    return Err(GrigError::InvalidArgument("not prefix-compatible".into()));
                }
            }
        }
        Ok(perm)
    }

    pub fn depth(&self) -> u8 {
        self.depth
    }

    pub fn images(&self) -> &[u8] {
        &self.images
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &LevelPermutation) -> LevelPermutation {
        debug_assert_eq!(self.depth, other.depth);
        LevelPermutation { depth: self.depth, images: other.images.iter().map(|&v| self.images[v as usize]).collect() }
    }

    pub fn inverse(&self) -> LevelPermutation {
        let mut images = alloc::vec![0u8; self.images.len()];
        for (v, &im) in self.images.iter().enumerate() {
            images[im as usize] = v as u8;
        }
        LevelPermutation { depth: self.depth, images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(v, &im)| v == im as usize)
    }

    /// The induced permutation of level `k ≤ depth`.
    pub fn restrict(&self, k: u8) -> LevelPermutation {
        assert!(k <= self.depth);
        let shift = self.depth - k;
        let images = (0..1usize << k).map(|u| self.images[u << shift] >> shift).collect();
        LevelPermutation { depth: k, images }
    }

    /// First-level decomposition `(g|_0, g|_1, twist)` at depth `n - 1`.
    pub fn sections(&self) -> (LevelPermutation, LevelPermutation, bool) {
        assert!(self.depth >= 1);
        let half = 1u8 << (self.depth - 1);
        let twist = self.images[0] >= half;
        let part = |range: core::ops::Range<usize>| LevelPermutation {
            depth: self.depth - 1,
            images: self.images[range].iter().map(|&v| v & (half - 1)).collect(),
        };
        (part(0..half as usize), part(half as usize..2 * half as usize), twist)
    }

    /// Vertex-by-vertex swap bits (the portrait), packed breadth first.
    pub fn portrait_key(&self) -> u64 {
        portrait_key(self.depth, &self.images)
    }
}

impl fmt::Debug for LevelPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L{}{:?}", self.depth, self.images)
    }
}

fn portrait_key(depth: u8, images: &[u8]) -> u64 {
    let mut key = 0u64;
    let mut bit = 0u32;
    for k in 0..depth {
        let below = depth - k - 1;
        for u in 0..1usize << k {
            let leaf = u << (below + 1);
            let swapped = (images[leaf] >> below) & 1;
            key |= (swapped as u64) << bit;
            bit += 1;
        }
    }
    key
}

/// The permutation of level `depth` induced by one generator.
pub fn generator_permutation(letter: Letter, depth: u8) -> LevelPermutation {
    let n = depth as usize;
    let mut bits = alloc::vec![0u8; n];
    let images = (0..1usize << n)
        .map(|v| {
            for (i, b) in bits.iter_mut().enumerate() {
                *b = ((v >> (n - 1 - i)) & 1) as u8;
            }
            apply_letter(letter, &mut bits);
            bits.iter().fold(0u8, |acc, &b| (acc << 1) | b)
        })
        .collect();
    LevelPermutation { depth, images }
}

/// Image of `g` in `Γ/Stab(n)`, composing generator permutations letter by letter.
pub fn project(g: &GrigElement, depth: u8) -> LevelPermutation {
    let gens: [LevelPermutation; 4] = Letter::ALL.map(|l| generator_permutation(l, depth));
    let mut acc = LevelPermutation::identity(depth);
    for &letter in g.letters() {
        acc = acc.compose(&gens[letter as usize]);
    }
    acc
}

/// A set of element indices of a [`FiniteQuotient`].
#[derive(Clone, PartialEq, Eq)]
pub struct IndexSet {
    bits: Vec<u64>,
    len: usize,
}

impl IndexSet {
    pub fn new(universe: usize) -> IndexSet {
        IndexSet { bits: alloc::vec![0; universe.div_ceil(64)], len: 0 }
    }

    pub fn insert(&mut self, i: u32) -> bool {
        let (w, b) = ((i / 64) as usize, i % 64);
        let fresh = self.bits[w] & (1 << b) == 0;
        if fresh {
            self.bits[w] |= 1 << b;
            self.len += 1;
        }
        fresh
    }

    pub fn contains(&self, i: u32) -> bool {
        self.bits.get((i / 64) as usize).is_some_and(|w| w & (1 << (i % 64)) != 0)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.bits
            .iter()
            .enumerate()
            .flat_map(|(w, &word)| (0..64).filter(move |b| word & (1 << b) != 0).map(move |b| (w * 64 + b) as u32))
    }

    pub fn is_subset(&self, other: &IndexSet) -> bool {
        self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }
}

impl fmt::Debug for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Partition of a quotient into the cosets `xN` of a normal subgroup.
#[derive(Debug, Clone)]
pub struct CosetLabels {
    labels: Vec<u32>,
    count: u32,
}

impl CosetLabels {
    pub fn label(&self, element: u32) -> u32 {
        self.labels[element as usize]
    }

    pub fn count(&self) -> u32 {
        self.count
    }
}

/// `Γ/Stab(n)`, enumerated breadth first from the generator images.
///
/// Elements are numbered by BFS layer and, within a layer, by their image
/// arrays in lexicographic order; index 0 is the identity.
pub struct FiniteQuotient {
    depth: u8,
    degree: usize,
    data: Vec<u8>,
    layer_starts: Vec<u32>,
    parent: Vec<u32>,
    via: Vec<Letter>,
    lookup: Vec<(u64, u32)>,
}

impl FiniteQuotient {
    pub fn enumerate(depth: u8, guards: &Guards) -> Result<FiniteQuotient> {
        guards.check_depth(depth)?;
        if depth == 0 {
            return Err(GrigError::DepthTooSmall { requested: 0, minimum: 1 });
        }
        let degree = 1usize << depth;
        let gens: [LevelPermutation; 4] = Letter::ALL.map(|l| generator_permutation(l, depth));

        let identity = LevelPermutation::identity(depth);
        let mut data = identity.images.clone();
        let mut parent = alloc::vec![0u32];
        let mut via = alloc::vec![Letter::A];
        let mut layer_starts = alloc::vec![0u32];
        let mut seen: HashSet<u64> = HashSet::new();
        seen.insert(identity.portrait_key());

        let mut layer = 0u32..1u32;
        let mut scratch = alloc::vec![0u8; degree];
        while !layer.is_empty() {
            let mut fresh: Vec<u8> = Vec::new();
            let mut meta: Vec<(u32, Letter)> = Vec::new();
            for idx in layer.clone() {
                let base = idx as usize * degree;
                for (gen, &letter) in gens.iter().zip(&Letter::ALL) {
                    for (out, &v) in scratch.iter_mut().zip(&gen.images) {
                        *out = data[base + v as usize];
                    }
                    if seen.insert(portrait_key(depth, &scratch)) {
                        fresh.extend_from_slice(&scratch);
                        meta.push((idx, letter));
                    }
                }
            }
            let mut order: Vec<usize> = (0..meta.len()).collect();
            order.sort_unstable_by(|&x, &y| {
                fresh[x * degree..(x + 1) * degree].cmp(&fresh[y * degree..(y + 1) * degree])
            });
            let start = parent.len() as u32;
            layer_starts.push(start);
            for i in order {
                data.extend_from_slice(&fresh[i * degree..(i + 1) * degree]);
                parent.push(meta[i].0);
                via.push(meta[i].1);
            }
            layer = start..parent.len() as u32;
        }
        layer_starts.pop();
        drop(seen);

        let mut lookup: Vec<(u64, u32)> =
            (0..parent.len()).map(|i| (portrait_key(depth, &data[i * degree..(i + 1) * degree]), i as u32)).collect();
        lookup.sort_unstable();
        Ok(FiniteQuotient { depth, degree, data, layer_starts, parent, via, lookup })
    }

    pub fn depth(&self) -> u8 {
        self.depth
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    /// Number of BFS layers, i.e. one more than the diameter of the Cayley graph.
    pub fn layers(&self) -> usize {
        self.layer_starts.len()
    }

    pub fn images(&self, i: u32) -> &[u8] {
        let i = i as usize;
        &self.data[i * self.degree..(i + 1) * self.degree]
    }

    pub fn get(&self, i: u32) -> LevelPermutation {
        LevelPermutation { depth: self.depth, images: self.images(i).to_vec() }
    }

    pub fn index_of(&self, images: &[u8]) -> Option<u32> {
        let key = portrait_key(self.depth, images);
        self.lookup.binary_search_by_key(&key, |&(k, _)| k).ok().map(|pos| self.lookup[pos].1)
    }

    pub fn index_of_element(&self, g: &GrigElement) -> u32 {
        self.index_of(&project(g, self.depth).images).expect("projection of an element lies in the quotient")
    }

    /// A shortest word for the element (its BFS path).
    pub fn word_of(&self, i: u32) -> GrigElement {
        let mut letters = Vec::new();
        let mut cur = i;
        while cur != 0 {
            letters.push(self.via[cur as usize]);
            cur = self.parent[cur as usize];
        }
        letters.reverse();
        GrigElement::from_word(GenWord::reduce(letters))
    }

    pub fn compose(&self, x: u32, y: u32) -> u32 {
        let (px, py) = (self.images(x), self.images(y));
        let composed: Vec<u8> = py.iter().map(|&v| px[v as usize]).collect();
        self.index_of(&composed).expect("quotient is closed")
    }

    pub fn inverse(&self, x: u32) -> u32 {
        let inv = self.get(x).inverse();
        self.index_of(&inv.images).expect("quotient is closed")
    }

    /// The subgroup generated by `seeds`.
    pub fn subgroup_closure(&self, seeds: &[u32]) -> IndexSet {
        let mut set = IndexSet::new(self.len());
        set.insert(0);
        let mut queue = alloc::vec![0u32];
        let mut head = 0;
        let mut buf = alloc::vec![0u8; self.degree];
        while head < queue.len() {
            let x = queue[head];
            head += 1;
            for &s in seeds {
                let (px, ps) = (self.images(x), self.images(s));
                for (out, &v) in buf.iter_mut().zip(ps) {
                    *out = px[v as usize];
                }
                let y = self.index_of(&buf).expect("quotient is closed");
                if set.insert(y) {
                    queue.push(y);
                }
            }
        }
        set
    }

    /// Label every element by its coset `xN`; labels are numbered in order of
    /// the smallest element of each coset.
    pub fn coset_labels(&self, subgroup: &IndexSet) -> CosetLabels {
        let mut labels = alloc::vec![u32::MAX; self.len()];
        let members: Vec<u32> = subgroup.iter().collect();
        let mut count = 0;
        let mut buf = alloc::vec![0u8; self.degree];
        for x in 0..self.len() as u32 {
            if labels[x as usize] != u32::MAX {
                continue;
            }
            for &n in &members {
                let (px, pn) = (self.images(x), self.images(n));
                for (out, &v) in buf.iter_mut().zip(pn) {
                    *out = px[v as usize];
                }
                let y = self.index_of(&buf).expect("quotient is closed");
                labels[y as usize] = count;
            }
            count += 1;
        }
        CosetLabels { labels, count }
    }

    /// Elements `x` with `x⁻¹ g x ≡ h (mod Stab(n))`.
    pub fn conjugators<'a>(&'a self, g: &GrigElement, h: &GrigElement) -> impl Iterator<Item = u32> + 'a {
        let pg = project(g, self.depth);
        let ph = project(h, self.depth);
        (0..self.len() as u32).filter(move |&x| {
            let px = self.images(x);
            // g x = x h, pointwise
            ph.images.iter().zip(px).all(|(&hv, &xv)| pg.images[xv as usize] == px[hv as usize])
        })
    }

    /// `{ xN : x⁻¹ g x ≡ h (mod Stab(n)) }` for the coset partition `labels`.
    pub fn brute_q(&self, g: &GrigElement, h: &GrigElement, labels: &CosetLabels) -> BTreeSet<u32> {
        self.conjugators(g, h).map(|x| labels.label(x)).collect()
    }

    /// As [`FiniteQuotient::brute_q`] with an arbitrary labelling of elements.
    pub fn brute_q_by<L: Ord>(
        &self,
        g: &GrigElement,
        h: &GrigElement,
        mut label: impl FnMut(u32, &[u8]) -> L,
    ) -> BTreeSet<L> {
        self.conjugators(g, h).map(|x| label(x, self.images(x))).collect()
    }

    /// Are `g` and `h` conjugate in `Γ/Stab(n)`?
    pub fn brute_conjugate(&self, g: &GrigElement, h: &GrigElement) -> bool {
        self.conjugators(g, h).next().is_some()
    }
}

impl fmt::Debug for FiniteQuotient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteQuotient").field("depth", &self.depth).field("order", &self.len()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> GrigElement {
        GrigElement::parse(s).unwrap()
    }

    #[test]
    fn projections() {
        assert!(project(&g(""), 3).is_identity());
        assert_eq!(project(&g("a"), 1).images(), &[1, 0]);
        assert!(project(&g("d"), 2).is_identity());
        assert!(!project(&g("d"), 3).is_identity());
        assert_eq!(project(&g("a"), 2).images(), &[2, 3, 0, 1]);
    }

    #[test]
    fn small_orders() {
        let guards = Guards::default();
        assert_eq!(FiniteQuotient::enumerate(1, &guards).unwrap().len(), 2);
        assert_eq!(FiniteQuotient::enumerate(2, &guards).unwrap().len(), 8);
        assert_eq!(FiniteQuotient::enumerate(3, &guards).unwrap().len(), 128);
    }

    #[test]
    fn guard_rejects_deep_quotients() {
        let guards = Guards { max_depth: 3, ..Guards::default() };
        assert!(matches!(FiniteQuotient::enumerate(4, &guards), Err(GrigError::DepthGuard { .. })));
    }

    #[test]
    fn closure_edge_cases() {
        let q = FiniteQuotient::enumerate(3, &Guards::default()).unwrap();
        assert_eq!(q.subgroup_closure(&[0]).len(), 1);
        let gens: Vec<u32> = ["a", "b", "c", "d"].iter().map(|w| q.index_of_element(&g(w))).collect();
        assert_eq!(q.subgroup_closure(&gens).len(), 128);
    }

    #[test]
    fn words_reproduce_elements() {
        let q = FiniteQuotient::enumerate(3, &Guards::default()).unwrap();
        for i in 0..q.len() as u32 {
            assert_eq!(project(&q.word_of(i), 3).images(), q.images(i));
        }
        assert_eq!(q.images(0), LevelPermutation::identity(3).images());
    }

    #[test]
    fn from_images_validates() {
        assert!(LevelPermutation::from_images(2, alloc::vec![2, 3, 0, 1]).is_ok());
        assert!(LevelPermutation::from_images(2, alloc::vec![1, 2, 3, 0]).is_err());
        assert!(LevelPermutation::from_images(2, alloc::vec![0, 0, 1, 2]).is_err());
    }
}
