//! Conjugacy decision in `Γ` and in finite-index subgroups.
//!
//! `Q^N(g, h)` is the set of cosets `xN` with `x⁻¹gx = h`, and `Q^N_n(g, h)`
//! the same set with the equation read modulo `Stab(n)`. For `N = K_m` and
//! `n ≥ m + 3` the finite version is computed by splitting `g`, `h` and `x`
//! into sections; at `m = 0, n = 3` it is read from the 128-element quotient.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::num::NonZeroUsize;

use lru::LruCache;

use crate::coset::{coset_of, km_coset_unchecked, lift, KCoset, KMask, KOracle, KmCoset};
use crate::element::GrigElement;
use crate::error::{GrigError, Result};
use crate::guard::Guards;

pub const DEFAULT_MEMO_CAPACITY: usize = 1 << 16;

/// Largest splitting tree that will be materialized.
pub const MAX_TREE_NODES: usize = 1 << 20;

/// A set of `K_m`-cosets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QSet {
    Base(KMask),
    Tower { level: u8, members: BTreeSet<KmCoset> },
}

impl QSet {
    pub fn level(&self) -> u8 {
        match self {
            QSet::Base(_) => 0,
            QSet::Tower { level, .. } => *level,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            QSet::Base(m) => m.len() as usize,
            QSet::Tower { members, .. } => members.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, coset: &KmCoset) -> bool {
        match (self, coset) {
            (QSet::Base(m), KmCoset::Base(c)) => m.contains(*c),
            (QSet::Tower { members, .. }, _) => members.contains(coset),
            _ => false,
        }
    }

    pub fn members(&self) -> Vec<KmCoset> {
        match self {
            QSet::Base(m) => m.iter().map(KmCoset::Base).collect(),
            QSet::Tower { members, .. } => members.iter().cloned().collect(),
        }
    }

    /// Members rendered as `z3` or `a(z0, z8)`.
    pub fn names(&self) -> Vec<String> {
        self.members().iter().map(|c| alloc::format!("{c}")).collect()
    }
}

/// Result of a conjugacy decision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Conjugacy {
    pub conjugate: bool,
    pub witnesses: QSet,
    pub depth_used: u8,
}

/// Depth at which `Q^K_n(g, h)` is guaranteed to equal `Q^K(g, h)`.
pub fn exact_depth(g: &GrigElement, h: &GrigElement) -> u8 {
    let r = g.length().max(h.length()).max(1);
    match r {
        1 => 6,
        2 => 10,
        _ => general_bound(r, 0),
    }
}

/// `4⌈log₂(2(r + m))⌉ + 10 + m`.
fn general_bound(r: usize, m: u8) -> u8 {
    let x = 2 * (r + m as usize);
    let ceil_log = usize::BITS - (x - 1).leading_zeros();
    (4 * ceil_log + 10 + m as u32) as u8
}

/// Depth at which `Q^{K_m}_n(g, h)` is guaranteed to equal `Q^{K_m}(g, h)`.
pub fn exact_depth_km(g: &GrigElement, h: &GrigElement, level: u8) -> u8 {
    if level == 0 {
        return exact_depth(g, h);
    }
    general_bound(g.length().max(h.length()).max(1), level)
}

/// `Q^K_3` for every pair of elements of `Γ/Stab(3)`.
struct BaseTable {
    oracle: KOracle,
    masks: Vec<KMask>,
}

impl BaseTable {
    fn new() -> BaseTable {
        let oracle = KOracle::new();
        let q = oracle.quotient();
        let size = q.len();
        let mut masks = alloc::vec![KMask::EMPTY; size * size];
        for x in 0..size as u32 {
            let coset = oracle.coset_of_index(x);
            let x_inv = q.inverse(x);
            for g in 0..size as u32 {
                let h = q.compose(x_inv, q.compose(g, x));
                masks[g as usize * size + h as usize].insert(coset);
            }
        }
        BaseTable { oracle, masks }
    }

    fn get(&self, g: &GrigElement, h: &GrigElement) -> KMask {
        let q = self.oracle.quotient();
        let (i, j) = (q.index_of_element(g), q.index_of_element(h));
        self.masks[i as usize * q.len() + j as usize]
    }
}

type Pair = (GrigElement, GrigElement);

/// The decision engine. It carries memo tables, so methods take `&mut self`;
/// use one engine per worker.
pub struct ConjugacyEngine {
    guards: Guards,
    base: BaseTable,
    memo: LruCache<(Pair, u8), KMask>,
    memo_km: LruCache<(Pair, u8, u8), Arc<BTreeSet<KmCoset>>>,
}

impl ConjugacyEngine {
    pub fn new(guards: Guards) -> ConjugacyEngine {
        ConjugacyEngine::with_capacity(guards, DEFAULT_MEMO_CAPACITY)
    }

    pub fn with_capacity(guards: Guards, capacity: usize) -> ConjugacyEngine {
        let cap = NonZeroUsize::new(capacity.max(1)).expect("nonzero");
        ConjugacyEngine { guards, base: BaseTable::new(), memo: LruCache::new(cap), memo_km: LruCache::new(cap) }
    }

    pub fn guards(&self) -> &Guards {
        &self.guards
    }

    pub fn oracle(&self) -> &KOracle {
        &self.base.oracle
    }

    /// `Q^K_n(g, h)` for `n ≥ 3`.
    pub fn q_fin(&mut self, g: &GrigElement, h: &GrigElement, n: u8) -> Result<KMask> {
        if n < 3 {
            return Err(GrigError::DepthTooSmall { requested: n, minimum: 3 });
        }
        Ok(self.q_fin_inner(g, h, n))
    }

    fn q_fin_inner(&mut self, g: &GrigElement, h: &GrigElement, n: u8) -> KMask {
        if n == 3 {
            return self.base.get(g, h);
        }
        if g.twist() != h.twist() {
            return KMask::EMPTY;
        }
        let key = ((g.clone(), h.clone()), n);
        if let Some(&hit) = self.memo.get(&key) {
            return hit;
        }
        let sg = g.first_level();
        let sh = h.first_level();
        let mut out = KMask::EMPTY;
        if !sg.twist {
            let straight = self.lift_product(&sg.left, &sh.left, &sg.right, &sh.right, n - 1);
            let crossed = self.lift_product(&sg.left, &sh.right, &sg.right, &sh.left, n - 1);
            out.0 = straight.0 | crossed.mul_right(KCoset::A).0;
        } else {
            let (g0, g1, h0, h1) = (&sg.left, &sg.right, &sh.left, &sh.right);
            let h0_inv = coset_of(h0).inv();
            let (cg0, cg1) = (coset_of(g0), coset_of(g1));
            let first = self.q_fin_inner(&g1.multiply(g0), &h1.multiply(h0), n - 1);
            for x0 in first.iter() {
                if let Some(x) = lift(x0, cg0.mul(x0).mul(h0_inv)) {
                    out.insert(x);
                }
            }
            let second = self.q_fin_inner(&g0.multiply(g1), &h1.multiply(h0), n - 1);
            for y1 in second.iter() {
                if let Some(y) = lift(cg1.mul(y1).mul(h0_inv), y1) {
                    out.insert(y.mul(KCoset::A));
                }
            }
        }
        self.memo.put(key, out);
        out
    }

    /// `Lift(Q(g0, h0) × Q(g1, h1))`.
    fn lift_product(&mut self, g0: &GrigElement, h0: &GrigElement, g1: &GrigElement, h1: &GrigElement, n: u8) -> KMask {
        let left = self.q_fin_inner(g0, h0, n);
        if left.is_empty() {
            return KMask::EMPTY;
        }
        let right = self.q_fin_inner(g1, h1, n);
        let mut out = KMask::EMPTY;
        for j in left.iter() {
            for k in right.iter() {
                if let Some(i) = lift(j, k) {
                    out.insert(i);
                }
            }
        }
        out
    }

    /// `Q^K(g, h)` together with the depth used.
    pub fn q_exact(&mut self, g: &GrigElement, h: &GrigElement) -> (KMask, u8) {
        let n = exact_depth(g, h);
        (self.q_fin_inner(g, h, n), n)
    }

    pub fn is_conjugate(&mut self, g: &GrigElement, h: &GrigElement) -> Conjugacy {
        let (mask, depth_used) = self.q_exact(g, h);
        Conjugacy { conjugate: !mask.is_empty(), witnesses: QSet::Base(mask), depth_used }
    }

    /// `Q^{K_m}_n(g, h)` for `n ≥ m + 3`.
    pub fn q_fin_km(&mut self, g: &GrigElement, h: &GrigElement, level: u8, n: u8) -> Result<QSet> {
        self.guards.check_level(level)?;
        if n < level + 3 {
            return Err(GrigError::DepthTooSmall { requested: n, minimum: level + 3 });
        }
        if level == 0 {
            return Ok(QSet::Base(self.q_fin_inner(g, h, n)));
        }
        let members = self.q_km_inner(g, h, level, n);
        Ok(QSet::Tower { level, members: (*members).clone() })
    }

    fn q_km_inner(&mut self, g: &GrigElement, h: &GrigElement, level: u8, n: u8) -> Arc<BTreeSet<KmCoset>> {
        if level == 0 {
            let mask = self.q_fin_inner(g, h, n);
            return Arc::new(mask.iter().map(KmCoset::Base).collect());
        }
        if g.twist() != h.twist() {
            return Arc::new(BTreeSet::new());
        }
        let key = ((g.clone(), h.clone()), level, n);
        if let Some(hit) = self.memo_km.get(&key) {
            return hit.clone();
        }
        let sg = g.first_level();
        let sh = h.first_level();
        let (g0, g1, h0, h1) = (&sg.left, &sg.right, &sh.left, &sh.right);
        let below = level - 1;
        let mut out = BTreeSet::new();
        let mut push = |twist: bool, left: KmCoset, right: KmCoset| {
            let node = KmCoset::node(twist, left, right);
            if node.base().is_some() {
                out.insert(node);
            }
        };
        if !sg.twist {
            for (twist, (a0, b0), (a1, b1)) in [(false, (g0, h0), (g1, h1)), (true, (g0, h1), (g1, h0))] {
                let left = self.q_km_inner(a0, b0, below, n - 1);
                if left.is_empty() {
                    continue;
                }
                let right = self.q_km_inner(a1, b1, below, n - 1);
                for l in left.iter() {
                    for r in right.iter() {
                        push(twist, l.clone(), r.clone());
                    }
                }
            }
        } else {
            let h0_inv = km_coset_unchecked(h0, below).inv();
            let cg0 = km_coset_unchecked(g0, below);
            let cg1 = km_coset_unchecked(g1, below);
            let first = self.q_km_inner(&g1.multiply(g0), &h1.multiply(h0), below, n - 1);
            for x0 in first.iter() {
                let x1 = cg0.mul(x0).and_then(|y| y.mul(&h0_inv)).expect("same level");
                push(false, x0.clone(), x1);
            }
            let second = self.q_km_inner(&g0.multiply(g1), &h1.multiply(h0), below, n - 1);
            for y1 in second.iter() {
                let y0 = cg1.mul(y1).and_then(|y| y.mul(&h0_inv)).expect("same level");
                push(true, y0, y1.clone());
            }
        }
        let out = Arc::new(out);
        self.memo_km.put(key, out.clone());
        out
    }

    /// `Q^{K_m}(g, h)` together with the depth used.
    pub fn q_exact_km(&mut self, g: &GrigElement, h: &GrigElement, level: u8) -> Result<(QSet, u8)> {
        let n = exact_depth_km(g, h, level);
        Ok((self.q_fin_km(g, h, level, n)?, n))
    }

    /// Conjugacy inside the subgroup `H` generated by `generators`, assuming
    /// `K_m ≤ H` (not checked) and `g, h ∈ H`.
    pub fn is_conjugate_in_subgroup(
        &mut self,
        g: &GrigElement,
        h: &GrigElement,
        generators: &[GrigElement],
        level: u8,
    ) -> Result<Conjugacy> {
        let (q, depth_used) = self.q_exact_km(g, h, level)?;
        let image = subgroup_image(generators, level, &self.guards)?;
        let witnesses = match q {
            QSet::Base(mask) => {
                QSet::Base(KMask::from_cosets(mask.iter().filter(|c| image.contains(&KmCoset::Base(*c)))))
            }
            QSet::Tower { level, members } => {
                QSet::Tower { level, members: members.into_iter().filter(|c| image.contains(c)).collect() }
            }
        };
        Ok(Conjugacy { conjugate: !witnesses.is_empty(), witnesses, depth_used })
    }

    /// Smallest `n` from which `Q^K_n(g, h)` is constant up to `n_max`.
    pub fn stabilization_depth(&mut self, g: &GrigElement, h: &GrigElement, n_max: u8) -> Result<Stabilization> {
        if n_max < 4 {
            return Err(GrigError::DepthTooSmall { requested: n_max, minimum: 4 });
        }
        let sets: Vec<(u8, KMask)> = (3..=n_max).map(|n| (n, self.q_fin_inner(g, h, n))).collect();
        let last = sets.last().expect("nonempty").1;
        let depth = sets.iter().rev().take_while(|(_, m)| *m == last).last().expect("nonempty").0;
        let bound = exact_depth(g, h);
        Ok(Stabilization { depth, bound, within_bound: depth <= bound, sets })
    }

    pub fn build_splitting_tree(&self, g: &GrigElement, h: &GrigElement, m: u8) -> Result<SplitNode> {
        if m < 3 {
            return Err(GrigError::DepthTooSmall { requested: m, minimum: 3 });
        }
        let mut budget = MAX_TREE_NODES;
        SplitNode::build(g.clone(), h.clone(), m, &mut budget)
    }

    /// Recompute `Q^K_n` along a splitting tree, using only its labels and the
    /// depth-3 table at the leaves.
    pub fn evaluate_tree(&self, node: &SplitNode) -> KMask {
        match node.kind {
            SplitKind::Base => self.base.get(&node.g, &node.h),
            SplitKind::Mismatch => KMask::EMPTY,
            SplitKind::Fixing => {
                let q: Vec<KMask> = node.children.iter().map(|c| self.evaluate_tree(c)).collect();
                let lifted = |l: KMask, r: KMask| {
                    KMask::from_cosets(l.iter().flat_map(|j| r.iter().filter_map(move |k| lift(j, k))))
                };
                KMask(lifted(q[0], q[1]).0 | lifted(q[2], q[3]).mul_right(KCoset::A).0)
            }
            SplitKind::Twisted => {
                let sg = node.g.first_level();
                let sh = node.h.first_level();
                let h0_inv = coset_of(&sh.left).inv();
                let (cg0, cg1) = (coset_of(&sg.left), coset_of(&sg.right));
                let mut out = KMask::EMPTY;
                for x0 in self.evaluate_tree(&node.children[0]).iter() {
                    if let Some(x) = lift(x0, cg0.mul(x0).mul(h0_inv)) {
                        out.insert(x);
                    }
                }
                for y1 in self.evaluate_tree(&node.children[1]).iter() {
                    if let Some(y) = lift(cg1.mul(y1).mul(h0_inv), y1) {
                        out.insert(y.mul(KCoset::A));
                    }
                }
                out
            }
        }
    }
}

/// Image of `⟨generators⟩` in `Γ/K_m`.
pub fn subgroup_image(generators: &[GrigElement], level: u8, guards: &Guards) -> Result<BTreeSet<KmCoset>> {
    guards.check_level(level)?;
    let gens: Vec<KmCoset> = generators.iter().map(|g| km_coset_unchecked(g, level)).collect();
    let mut seen = BTreeSet::new();
    let identity = KmCoset::identity(level);
    seen.insert(identity.clone());
    let mut queue = alloc::vec![identity];
    while let Some(x) = queue.pop() {
        for s in &gens {
            let y = x.mul(s)?;
            if seen.insert(y.clone()) {
                queue.push(y);
            }
        }
    }
    Ok(seen)
}

/// Empirical stabilization of `Q^K_n(g, h)` in `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stabilization {
    pub depth: u8,
    /// The depth guaranteed to give `Q^K(g, h)`.
    pub bound: u8,
    pub within_bound: bool,
    pub sets: Vec<(u8, KMask)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitKind {
    /// `n = 3`: read from the quotient table.
    Base,
    /// `g` and `h` lie in different cosets of `Stab(1)`.
    Mismatch,
    /// `g, h ∈ Stab(1)`: children `(g₀,h₀), (g₁,h₁), (g₀,h₁), (g₁,h₀)`.
    Fixing,
    /// `g, h ∉ Stab(1)`: children `(g₁g₀, h₁h₀), (g₀g₁, h₁h₀)`.
    Twisted,
}

/// A node `(n; g, h)` of a splitting tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitNode {
    pub depth: u8,
    pub g: GrigElement,
    pub h: GrigElement,
    pub kind: SplitKind,
    pub children: Vec<SplitNode>,
}

impl SplitNode {
    fn build(g: GrigElement, h: GrigElement, n: u8, budget: &mut usize) -> Result<SplitNode> {
        if *budget == 0 {
            return Err(GrigError::TreeTooLarge { limit: MAX_TREE_NODES });
        }
        *budget -= 1;
        let (kind, pairs) = if n == 3 {
            (SplitKind::Base, Vec::new())
        } else if g.twist() != h.twist() {
            (SplitKind::Mismatch, Vec::new())
        } else {
            let sg = g.first_level();
            let sh = h.first_level();
            if !sg.twist {
                let pairs = alloc::vec![
                    (sg.left.clone(), sh.left.clone()),
                    (sg.right.clone(), sh.right.clone()),
                    (sg.left, sh.right),
                    (sg.right, sh.left),
                ];
                (SplitKind::Fixing, pairs)
            } else {
                let h10 = sh.right.multiply(&sh.left);
                let pairs =
                    alloc::vec![(sg.right.multiply(&sg.left), h10.clone()), (sg.left.multiply(&sg.right), h10),];
                (SplitKind::Twisted, pairs)
            }
        };
        let children =
            pairs.into_iter().map(|(x, y)| SplitNode::build(x, y, n - 1, budget)).collect::<Result<Vec<_>>>()?;
        Ok(SplitNode { depth: n, g, h, kind, children })
    }

    pub fn height(&self) -> usize {
        self.children.iter().map(|c| c.height() + 1).max().unwrap_or(0)
    }

    pub fn node_count(&self) -> usize {
        1 + self.children.iter().map(SplitNode::node_count).sum::<usize>()
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph splitting_tree {\n  node [shape=box];\n");
        let mut next = 0usize;
        self.write_dot(&mut out, &mut next);
        out.push_str("}\n");
        out
    }

    fn write_dot(&self, out: &mut String, next: &mut usize) -> usize {
        let id = *next;
        *next += 1;
        let word = |w: &GrigElement| if w.is_identity_word() { String::from("1") } else { alloc::format!("{w}") };
        out.push_str(&alloc::format!("  n{id} [label=\"({}; {}, {})\"];\n", self.depth, word(&self.g), word(&self.h)));
        for child in &self.children {
            let cid = child.write_dot(out, next);
            out.push_str(&alloc::format!("  n{id} -> n{cid};\n"));
        }
        id
    }
}
