//! Finite wreath products `A ≀ B = A^B ⋊ B` and centralizer computations.
//!
//! An element is a pair `(f, b)` with `f: B → A`. `B` acts on functions by
//! left translation, `(b·f)(x) = f(bx)`, and products are
//!
//! ```text
//! (f, b)(g, c) = (x ↦ f(x) g(bx), c b)
//! ```
//!
//! Since `b·(c·g) = (cb)·g` the acting parts multiply in reverse; with this
//! law Meldrum's centralizer conditions hold exactly as written.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{GrigError, Result};
use crate::guard::Guards;

/// A finite group given by its Cayley table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    table: Vec<usize>,
    order: usize,
    identity: usize,
    inverse: Vec<usize>,
    names: Vec<String>,
    abelian: bool,
}

impl FiniteGroup {
    /// Validate a Cayley table (`table[i][j]` is the index of `i·j`).
    pub fn from_table(table: Vec<Vec<usize>>, names: Option<Vec<String>>) -> Result<FiniteGroup> {
        let order = table.len();
        if order == 0 {
            return Err(GrigError::InvalidTable("empty table".into()));
        }
        if table.iter().any(|row| row.len() != order) {
            return Err(GrigError::InvalidTable("table is not square".into()));
        }
        if table.iter().flatten().any(|&x| x >= order) {
            return Err(GrigError::InvalidTable("entry out of range".into()));
        }
        let flat: Vec<usize> = table.into_iter().flatten().collect();
        let at = |i: usize, j: usize| flat[i * order + j];
        let identity = (0..order)
            .find(|&e| (0..order).all(|x| at(e, x) == x && at(x, e) == x))
            .ok_or_else(|| GrigError::InvalidTable("no identity element".into()))?;
        let mut inverse = Vec::with_capacity(order);
        for x in 0..order {
            let inv = (0..order)
                .find(|&y| at(x, y) == identity && at(y, x) == identity)
                .ok_or_else(|| GrigError::InvalidTable(alloc::format!("element {x} has no inverse")))?;
            inverse.push(inv);
        }
        for x in 0..order {
            for y in 0..order {
                for z in 0..order {
                    if at(at(x, y), z) != at(x, at(y, z)) {
                        return Err(GrigError::InvalidTable(alloc::format!("({x}·{y})·{z} ≠ {x}·({y}·{z})")));
                    }
                }
            }
        }
        let names = match names {
            Some(n) if n.len() == order => n,
            Some(_) => return Err(GrigError::InvalidTable("wrong number of names".into())),
            None => (0..order).map(|i| i.to_string()).collect(),
        };
        let abelian = (0..order).all(|x| (0..x).all(|y| at(x, y) == at(y, x)));
        Ok(FiniteGroup { table: flat, order, identity, inverse, names, abelian })
    }

    pub fn cyclic(n: usize) -> FiniteGroup {
        let table = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        let names = (0..n).map(|i| alloc::format!("r{i}")).collect();
        FiniteGroup::from_table(table, Some(names)).expect("cyclic table is valid")
    }

    /// The dihedral group of order `2n`; index `i + n·j` is `r^i s^j`.
    pub fn dihedral(n: usize) -> FiniteGroup {
        let table = (0..2 * n)
            .map(|x| {
                let (i, j) = (x % n, x / n);
                (0..2 * n)
                    .map(|y| {
                        let (k, l) = (y % n, y / n);
                        let rot = if j == 0 { (i + k) % n } else { (i + n - k) % n };
                        rot + n * ((j + l) % 2)
                    })
                    .collect()
            })
            .collect();
        let names =
            (0..2 * n).map(|x| if x < n { alloc::format!("r{x}") } else { alloc::format!("r{}s", x - n) }).collect();
        FiniteGroup::from_table(table, Some(names)).expect("dihedral table is valid")
    }

    /// The symmetric group on `n ≤ 4` points, permutations in lexicographic order.
    pub fn symmetric(n: usize) -> Result<FiniteGroup> {
        if n == 0 || n > 4 {
            return Err(GrigError::InvalidArgument(alloc::format!(
                "symmetric groups are built for 1 ≤ n ≤ 4, got {n}"
            )));
        }
        let mut perms: Vec<Vec<usize>> = Vec::new();
        permutations(&mut (0..n).collect(), 0, &mut perms);
        perms.sort();
        let index = |p: &[usize]| perms.iter().position(|q| q == p).expect("closed");
        let table = perms
            .iter()
            .map(|s| perms.iter().map(|t| index(&t.iter().map(|&i| s[i]).collect::<Vec<_>>())).collect())
            .collect();
        let names = perms.iter().map(|p| p.iter().map(|i| char::from(b'1' + *i as u8)).collect()).collect();
        FiniteGroup::from_table(table, Some(names))
    }

    /// Named constructors: `C<n>`, `D<n>` (order `2n`), `S<n>`.
    pub fn by_name(name: &str) -> Result<FiniteGroup> {
        let bad = || GrigError::InvalidArgument(alloc::format!("unknown group {name:?}"));
        let (kind, n) = name.split_at(1.min(name.len()));
        let n: usize = n.parse().map_err(|_| bad())?;
        match kind {
            "C" if (1..=24).contains(&n) => Ok(FiniteGroup::cyclic(n)),
            "D" if (1..=12).contains(&n) => Ok(FiniteGroup::dihedral(n)),
            "S" => FiniteGroup::symmetric(n),
            _ => Err(bad()),
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn is_abelian(&self) -> bool {
        self.abelian
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.order).map(<[usize]>::to_vec).collect()
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x * self.order + y]
    }

    pub fn inv(&self, x: usize) -> usize {
        self.inverse[x]
    }

    pub fn pow(&self, x: usize, k: usize) -> usize {
        (0..k).fold(self.identity, |acc, _| self.mul(acc, x))
    }

    pub fn element_order(&self, x: usize) -> usize {
        let mut y = x;
        let mut k = 1;
        while y != self.identity {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    /// `⟨x⟩` in the order `1, x, x², …`.
    pub fn cyclic_subgroup(&self, x: usize) -> Vec<usize> {
        let mut out = alloc::vec![self.identity];
        let mut y = x;
        while y != self.identity {
            out.push(y);
            y = self.mul(y, x);
        }
        out
    }

    pub fn are_conjugate(&self, u: usize, v: usize) -> bool {
        (0..self.order).any(|y| self.mul(self.mul(self.inv(y), u), y) == v)
    }

    pub fn commutes(&self, x: usize, y: usize) -> bool {
        self.mul(x, y) == self.mul(y, x)
    }

    /// Does the order divide a power of `p`?
    pub fn is_p_group(&self, p: usize) -> bool {
        is_power_of(self.order, p)
    }

    /// The subgroup generated by `seeds`, as a membership vector.
    pub fn closure(&self, seeds: &[usize]) -> Vec<bool> {
        let mut member = alloc::vec![false; self.order];
        member[self.identity] = true;
        let mut queue = alloc::vec![self.identity];
        while let Some(x) = queue.pop() {
            for &s in seeds {
                let y = self.mul(x, s);
                if !member[y] {
                    member[y] = true;
                    queue.push(y);
                }
            }
        }
        member
    }

    pub fn is_normal_subgroup(&self, member: &[bool]) -> bool {
        if member.len() != self.order || !member[self.identity] {
            return false;
        }
        let elems: Vec<usize> = (0..self.order).filter(|&x| member[x]).collect();
        let closed = elems.iter().all(|&x| elems.iter().all(|&y| member[self.mul(x, y)]));
        closed && (0..self.order).all(|g| elems.iter().all(|&x| member[self.mul(self.mul(self.inv(g), x), g)]))
    }

    /// Every normal subgroup, as sorted element lists.
    pub fn normal_subgroups(&self) -> Vec<Vec<usize>> {
        let mut found: BTreeSet<Vec<bool>> = BTreeSet::new();
        let mut frontier = alloc::vec![self.closure(&[])];
        found.insert(frontier[0].clone());
        while let Some(sub) = frontier.pop() {
            let gens: Vec<usize> = (0..self.order).filter(|&x| sub[x]).collect();
            for g in 0..self.order {
                if sub[g] {
                    continue;
                }
                let mut seeds = gens.clone();
                seeds.push(g);
                let bigger = self.closure(&seeds);
                if found.insert(bigger.clone()) {
                    frontier.push(bigger);
                }
            }
        }
        found
            .into_iter()
            .filter(|m| self.is_normal_subgroup(m))
            .map(|m| (0..self.order).filter(|&x| m[x]).collect())
            .collect()
    }

    /// `G/N` with cosets numbered by their smallest element, plus the coset of
    /// every element.
    pub fn quotient(&self, normal: &[usize]) -> Result<(FiniteGroup, Vec<usize>)> {
        let mut member = alloc::vec![false; self.order];
        for &x in normal {
            if x >= self.order {
                return Err(GrigError::InvalidArgument(alloc::format!("element {x} out of range")));
            }
            member[x] = true;
        }
        if !self.is_normal_subgroup(&member) {
            return Err(GrigError::NotNormal);
        }
        let mut label = alloc::vec![usize::MAX; self.order];
        let mut reps = Vec::new();
        for x in 0..self.order {
            if label[x] == usize::MAX {
                for &n in normal {
                    label[self.mul(x, n)] = reps.len();
                }
                reps.push(x);
            }
        }
        let table = reps.iter().map(|&x| reps.iter().map(|&y| label[self.mul(x, y)]).collect()).collect();
        let names = reps.iter().map(|&x| alloc::format!("{}N", self.names[x])).collect();
        Ok((FiniteGroup::from_table(table, Some(names))?, label))
    }
}

fn permutations(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == items.len() {
        out.push(items.clone());
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permutations(items, k + 1, out);
        items.swap(k, i);
    }
}

fn is_power_of(mut n: usize, p: usize) -> bool {
    if p < 2 {
        return n == 1;
    }
    while n.is_multiple_of(p) {
        n /= p;
    }
    n == 1
}

/// An element `(f, b)` of `A ≀ B`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WreathElement {
    pub f: Vec<usize>,
    pub b: usize,
}

impl WreathElement {
    pub fn support(&self, a: &FiniteGroup) -> Vec<usize> {
        (0..self.f.len()).filter(|&x| self.f[x] != a.identity()).collect()
    }
}

/// `A ≀ B` for finite `A` and `B`.
#[derive(Debug, Clone)]
pub struct WreathProduct {
    a: FiniteGroup,
    b: FiniteGroup,
    order: usize,
}

impl WreathProduct {
    pub fn new(a: FiniteGroup, b: FiniteGroup, guards: &Guards) -> Result<WreathProduct> {
        let order = (a.order() as u128).checked_pow(b.order() as u32).map(|p| p * b.order() as u128);
        let order = order.unwrap_or(u128::MAX);
        guards.check_wreath_order(order)?;
        Ok(WreathProduct { a, b, order: order as usize })
    }

    pub fn base(&self) -> &FiniteGroup {
        &self.a
    }

    pub fn top(&self) -> &FiniteGroup {
        &self.b
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> WreathElement {
        WreathElement { f: alloc::vec![self.a.identity(); self.b.order()], b: self.b.identity() }
    }

    pub fn index(&self, w: &WreathElement) -> usize {
        let f = w.f.iter().rev().fold(0usize, |acc, &v| acc * self.a.order() + v);
        f * self.b.order() + w.b
    }

    pub fn element(&self, index: usize) -> WreathElement {
        let b = index % self.b.order();
        let mut rest = index / self.b.order();
        let f = (0..self.b.order())
            .map(|_| {
                let v = rest % self.a.order();
                rest /= self.a.order();
                v
            })
            .collect();
        WreathElement { f, b }
    }

    pub fn elements(&self) -> impl Iterator<Item = WreathElement> + '_ {
        (0..self.order).map(|i| self.element(i))
    }

    pub fn validate(&self, w: &WreathElement) -> Result<()> {
        if w.f.len() != self.b.order() || w.b >= self.b.order() || w.f.iter().any(|&v| v >= self.a.order()) {
            return Err(GrigError::InvalidArgument("malformed wreath element".into()));
        }
        Ok(())
    }

    pub fn mul(&self, x: &WreathElement, y: &WreathElement) -> WreathElement {
        let f = (0..self.b.order()).map(|p| self.a.mul(x.f[p], y.f[self.b.mul(x.b, p)])).collect();
        WreathElement { f, b: self.b.mul(y.b, x.b) }
    }

    pub fn inv(&self, x: &WreathElement) -> WreathElement {
        let b_inv = self.b.inv(x.b);
        let f = (0..self.b.order()).map(|p| self.a.inv(x.f[self.b.mul(b_inv, p)])).collect();
        WreathElement { f, b: b_inv }
    }

    /// The base element `δ_{x,v}`: value `v` at `x`, identity elsewhere.
    pub fn delta(&self, x: usize, v: usize) -> WreathElement {
        let mut w = self.identity();
        w.f[x] = v;
        w
    }

    pub fn commute(&self, x: &WreathElement, y: &WreathElement) -> bool {
        self.mul(x, y) == self.mul(y, x)
    }

    /// `C_G(w)` by testing every element.
    pub fn centralizer_brute(&self, w: &WreathElement) -> BTreeSet<usize> {
        (0..self.order).filter(|&i| self.commute(&self.element(i), w)).collect()
    }

    /// `h̄(d, x) = h(x) h(dx) ⋯ h(d^{n-1}x)` with `n = ord(d)`.
    pub fn fbar(&self, h: &[usize], d: usize, x: usize) -> usize {
        let mut acc = self.a.identity();
        let mut point = x;
        for _ in 0..self.b.element_order(d) {
            acc = self.a.mul(acc, h[point]);
            point = self.b.mul(d, point);
        }
        acc
    }

    /// Does `(g, c)` satisfy Meldrum's four conditions for `(f, b)`?
    pub fn meldrum_conditions(&self, w: &WreathElement, candidate: &WreathElement) -> bool {
        let (f, b) = (&w.f, w.b);
        let (g, c) = (&candidate.f, candidate.b);
        if !self.b.commutes(c, b) {
            return false;
        }
        let fbar: Vec<usize> = (0..self.b.order()).map(|x| self.fbar(f, b, x)).collect();
        (0..self.b.order()).all(|x| {
            let cx = self.b.mul(c, x);
            let bx = self.b.mul(b, x);
            self.a.are_conjugate(fbar[cx], fbar[x])
                && fbar[cx] == self.a.mul(self.a.mul(self.a.inv(g[x]), fbar[x]), g[x])
                && g[bx] == self.a.mul(self.a.mul(self.a.inv(f[x]), g[x]), f[cx])
        })
    }

    pub fn centralizer_meldrum(&self, w: &WreathElement) -> BTreeSet<usize> {
        (0..self.order).filter(|&i| self.meldrum_conditions(w, &self.element(i))).collect()
    }

    /// Are the points of `supp(f)` in distinct right cosets `⟨b⟩x`?
    pub fn is_reduced(&self, w: &WreathElement) -> bool {
        let mut seen = BTreeSet::new();
        w.support(&self.a).into_iter().all(|s| seen.insert(self.right_coset(w.b, s)))
    }

    /// `⟨b⟩x` as a sorted list.
    pub fn right_coset(&self, b: usize, x: usize) -> Vec<usize> {
        let mut coset: Vec<usize> = self.b.cyclic_subgroup(b).into_iter().map(|y| self.b.mul(y, x)).collect();
        coset.sort_unstable();
        coset
    }

    /// `C_B(f, b) = C⁺_B(f, b) ∩ C_B(b)`.
    pub fn cbfb(&self, w: &WreathElement) -> Result<Vec<usize>> {
        self.require_abelian()?;
        let level_sets = self.level_sets(w);
        let b_sub = self.b.cyclic_subgroup(w.b);
        let cosets_of = |set: &[usize], c: usize| -> BTreeSet<usize> {
            set.iter()
                .flat_map(|&s| b_sub.iter().map(move |&y| (y, s)))
                .map(|(y, s)| self.b.mul(y, self.b.mul(c, s)))
                .collect()
        };
        Ok((0..self.b.order())
            .filter(|&c| self.b.commutes(c, w.b))
            .filter(|&c| level_sets.iter().all(|(_, set)| cosets_of(set, c) == cosets_of(set, self.b.identity())))
            .collect())
    }

    /// Nonempty level sets `f⁻¹(a)`, `a ≠ 1`.
    fn level_sets(&self, w: &WreathElement) -> Vec<(usize, Vec<usize>)> {
        let mut values: Vec<usize> = w.support(&self.a).into_iter().map(|s| w.f[s]).collect();
        values.sort_unstable();
        values.dedup();
        values.into_iter().map(|v| (v, (0..w.f.len()).filter(|&x| w.f[x] == v).collect())).collect()
    }

    /// Membership in the simplified criteria for a reduced `(f, b)`.
    pub fn centralizer_abelian(&self, w: &WreathElement) -> Result<BTreeSet<usize>> {
        self.require_abelian()?;
        if !self.is_reduced(w) {
            return Err(GrigError::NotReduced);
        }
        let cbfb = self.cbfb(w)?;
        let mut out = BTreeSet::new();
        for i in 0..self.order {
            let cand = self.element(i);
            if cbfb.binary_search(&cand.b).is_ok() && self.solves_simplified(w, &cand.f, cand.b) {
                out.insert(i);
            }
        }
        Ok(out)
    }

    /// `g(bx) = g(x) f(x)⁻¹ f(cx)` for every `x`.
    fn solves_simplified(&self, w: &WreathElement, g: &[usize], c: usize) -> bool {
        (0..self.b.order()).all(|x| {
            let rhs = self.a.mul(self.a.mul(g[x], self.a.inv(w.f[x])), w.f[self.b.mul(c, x)]);
            g[self.b.mul(w.b, x)] == rhs
        })
    }

    /// An `A^B`-conjugate `(g, 1)⁻¹ w (g, 1)` of `w` that is reduced, with the conjugator.
    pub fn reduce_element(&self, w: &WreathElement) -> Result<(WreathElement, WreathElement)> {
        self.require_abelian()?;
        let mut g = alloc::vec![self.a.identity(); self.b.order()];
        let mut done = alloc::vec![false; self.b.order()];
        for x0 in 0..self.b.order() {
            if done[x0] {
                continue;
            }
            // walk x0, b x0, b² x0, …; g(b^{k+1}x0) = g(b^k x0) f(b^k x0)⁻¹ for k ≥ 1
            let mut point = self.b.mul(w.b, x0);
            let mut value = self.a.identity();
            done[x0] = true;
            while point != x0 {
                done[point] = true;
                g[point] = value;
                value = self.a.mul(value, self.a.inv(w.f[point]));
                point = self.b.mul(w.b, point);
            }
            g[x0] = value;
        }
        let conj = WreathElement { f: g, b: self.b.identity() };
        let reduced = self.mul(&self.mul(&self.inv(&conj), w), &conj);
        Ok((reduced, conj))
    }

    /// Structure of `C_G(fb)` for a reduced `fb` with abelian `A`.
    pub fn check_centralizer_structure(&self, w: &WreathElement) -> Result<CentralizerReport> {
        self.centralizer_structure_with(w, None)
    }

    /// As [`WreathProduct::check_centralizer_structure`], optionally replacing
    /// the exponent `[B:⟨b⟩]` of the predicted order.
    pub fn centralizer_structure_with(&self, w: &WreathElement, exponent: Option<u32>) -> Result<CentralizerReport> {
        self.require_abelian()?;
        if !self.is_reduced(w) {
            return Err(GrigError::NotReduced);
        }
        let brute = self.centralizer_brute(w);
        let predicted = self.centralizer_abelian(w)?;
        let cbfb = self.cbfb(w)?;
        let b_order = self.b.element_order(w.b);
        let cosets = self.b.order() / b_order;
        let exponent = exponent.unwrap_or(cosets as u32);
        let predicted_order = (self.a.order() as u128).pow(exponent) * cbfb.len() as u128;

        let support = w.support(&self.a);
        let support_cosets: Vec<Vec<usize>> = support.iter().map(|&s| self.right_coset(w.b, s)).collect();
        let mut image = BTreeSet::new();
        let mut kernel = Vec::new();
        for &c in &cbfb {
            let perm: Vec<usize> = support
                .iter()
                .map(|&s| {
                    let target = self.right_coset(w.b, self.b.mul(c, s));
                    support_cosets.iter().position(|k| *k == target).expect("C_B(f,b) permutes the support cosets")
                })
                .collect();
            if perm.iter().enumerate().all(|(i, &j)| i == j) {
                kernel.push(c);
            }
            image.insert(perm);
        }
        let mut generated: Vec<usize> = self.b.cyclic_subgroup(w.b);
        generated.sort_unstable();
        let kernel_is_cyclic_part = support.is_empty() || kernel == generated;

        let level_sets = self.level_sets(w);
        let sigma = level_sets.iter().map(|(_, s)| factorial(s.len())).product::<u128>();

        let mut factorization_ok = true;
        for &c in &cbfb {
            match self.particular_solution(w, c) {
                Some(gp) => {
                    let cand = WreathElement { f: gp, b: c };
                    factorization_ok &= brute.contains(&self.index(&cand));
                }
                None => factorization_ok = false,
            }
        }
        Ok(CentralizerReport {
            element: w.clone(),
            brute_order: brute.len(),
            matches: brute == predicted,
            b_order,
            cosets,
            cbfb_order: cbfb.len(),
            action_kernel: kernel.len(),
            action_image: image.len(),
            kernel_is_cyclic_part,
            sigma_order: sigma,
            predicted_order,
            order_identity_holds: predicted_order == brute.len() as u128,
            factorization_ok,
        })
    }

    /// The `g'` of the decomposition `g = h g'`: the solution of
    /// `g(bx) = g(x) f(x)⁻¹ f(cx)` that is trivial on the first point of every
    /// `⟨b⟩`-orbit.
    pub fn particular_solution(&self, w: &WreathElement, c: usize) -> Option<Vec<usize>> {
        let mut g = alloc::vec![usize::MAX; self.b.order()];
        for x0 in 0..self.b.order() {
            if g[x0] != usize::MAX {
                continue;
            }
            g[x0] = self.a.identity();
            let mut x = x0;
            loop {
                let next = self.b.mul(w.b, x);
                let value = self.a.mul(self.a.mul(g[x], self.a.inv(w.f[x])), w.f[self.b.mul(c, x)]);
                if next == x0 {
                    if value != g[x0] {
                        return None;
                    }
                    break;
                }
                g[next] = value;
                x = next;
            }
        }
        Some(g)
    }

    /// The projection `A ≀ B → A ≀ (B/N)` summing `f` over `N`-cosets.
    pub fn project_abelian(&self, normal: &[usize], guards: &Guards) -> Result<ProjectionReport> {
        self.require_abelian()?;
        let (quotient, label) = self.b.quotient(normal)?;
        let target = WreathProduct::new(self.a.clone(), quotient.clone(), guards)?;
        let project = |w: &WreathElement| {
            let mut f = alloc::vec![self.a.identity(); quotient.order()];
            for (x, &v) in w.f.iter().enumerate() {
                f[label[x]] = self.a.mul(f[label[x]], v);
            }
            WreathElement { f, b: label[w.b] }
        };
        let images: Vec<usize> = self.elements().map(|w| target.index(&project(&w))).collect();
        let mut homomorphism = true;
        'outer: for i in 0..self.order {
            let x = self.element(i);
            for j in 0..self.order {
                let y = self.element(j);
                let lhs = images[self.index(&self.mul(&x, &y))];
                let rhs = target.index(&target.mul(&target.element(images[i]), &target.element(images[j])));
                if lhs != rhs {
                    homomorphism = false;
                    break 'outer;
                }
            }
        }
        let identity = target.index(&target.identity());
        let kernel: BTreeSet<usize> = (0..self.order).filter(|&i| images[i] == identity).collect();
        let in_n: Vec<bool> = (0..self.b.order()).map(|x| label[x] == label[self.b.identity()]).collect();
        let predicted: BTreeSet<usize> = (0..self.order)
            .filter(|&i| {
                let w = self.element(i);
                in_n[w.b]
                    && (0..quotient.order()).all(|k| {
                        let total = (0..self.b.order())
                            .filter(|&x| label[x] == k)
                            .fold(self.a.identity(), |acc, x| self.a.mul(acc, w.f[x]));
                        total == self.a.identity()
                    })
            })
            .collect();
        let k_n_order = (self.a.order() as u128).pow((self.b.order() - quotient.order()) as u32);
        Ok(ProjectionReport {
            homomorphism,
            kernel_order: kernel.len(),
            predicted_kernel_order: k_n_order * normal.len() as u128,
            kernel_matches: kernel == predicted,
        })
    }

    /// The normal closure of `seeds` in `A ≀ B`, as element indices.
    pub fn normal_closure(&self, seeds: &[WreathElement]) -> BTreeSet<usize> {
        let gens: Vec<WreathElement> = (0..self.order)
            .map(|i| self.element(i))
            .flat_map(|g| seeds.iter().map(move |s| (g.clone(), s)))
            .map(|(g, s)| self.mul(&self.mul(&self.inv(&g), s), &g))
            .collect();
        let mut member = BTreeSet::new();
        let id = self.identity();
        member.insert(self.index(&id));
        let mut queue = alloc::vec![id];
        while let Some(x) = queue.pop() {
            for s in &gens {
                let y = self.mul(&x, s);
                if member.insert(self.index(&y)) {
                    queue.push(y);
                }
            }
        }
        member
    }

    /// The largest normal `K_A ◁ A` with `(K_A)^B ≤ K` (and `A/K_A` a
    /// `p`-group when `p` is given). `K` must be a normal subgroup of `A ≀ B`.
    pub fn factor_through_base(&self, k: &BTreeSet<usize>, p: Option<usize>) -> Option<Vec<usize>> {
        self.a
            .normal_subgroups()
            .into_iter()
            .filter(|sub| p.is_none_or(|p| is_power_of(self.a.order() / sub.len(), p)))
            .filter(|sub| sub.iter().all(|&v| (0..self.b.order()).all(|x| k.contains(&self.index(&self.delta(x, v))))))
            .max_by_key(Vec::len)
    }

    fn require_abelian(&self) -> Result<()> {
        if self.a.is_abelian() {
            Ok(())
        } else {
            Err(GrigError::NotAbelian)
        }
    }
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// Structure of a centralizer `C_G(fb)` with abelian base.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CentralizerReport {
    pub element: WreathElement,
    pub brute_order: usize,
    /// Simplified criteria agree with brute force.
    pub matches: bool,
    pub b_order: usize,
    /// `[B : ⟨b⟩]`.
    pub cosets: usize,
    pub cbfb_order: usize,
    /// Elements of `C_B(f, b)` acting trivially on the support cosets.
    pub action_kernel: usize,
    /// Permutations of the support cosets realized by `C_B(f, b)`.
    pub action_image: usize,
    /// The action kernel is exactly `⟨b⟩` (vacuous when `f = 1`).
    pub kernel_is_cyclic_part: bool,
    /// Permutations of `supp(f)` preserving every level set.
    pub sigma_order: u128,
    pub predicted_order: u128,
    pub order_identity_holds: bool,
    /// Every `c ∈ C_B(f, b)` admits a `g'` with `g'c ∈ C_G(fb)`.
    pub factorization_ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectionReport {
    pub homomorphism: bool,
    pub kernel_order: usize,
    /// `|K_N| · |N|`.
    pub predicted_kernel_order: u128,
    pub kernel_matches: bool,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn wp(a: FiniteGroup, b: FiniteGroup) -> WreathProduct {
        WreathProduct::new(a, b, &Guards::default()).unwrap()
    }

    #[test]
    fn constructors() {
        assert_eq!(FiniteGroup::cyclic(5).order(), 5);
        let d4 = FiniteGroup::dihedral(4);
        assert_eq!(d4.order(), 8);
        assert!(!d4.is_abelian());
        let s3 = FiniteGroup::symmetric(3).unwrap();
        assert_eq!(s3.order(), 6);
        assert!(!s3.is_abelian());
        assert_eq!(FiniteGroup::symmetric(4).unwrap().normal_subgroups().len(), 4);
        assert!(FiniteGroup::symmetric(5).is_err());
        assert_eq!(FiniteGroup::by_name("D3").unwrap().order(), 6);
    }

    #[test]
    fn table_validation() {
        assert!(FiniteGroup::from_table(alloc::vec![alloc::vec![0, 1], alloc::vec![1, 1]], None).is_err());
        assert!(FiniteGroup::from_table(alloc::vec![alloc::vec![0, 2], alloc::vec![1, 0]], None).is_err());
        assert!(FiniteGroup::from_table(alloc::vec![alloc::vec![1, 0], alloc::vec![0, 1]], None).is_ok());
    }

    #[test]
    fn fbar_examples() {
        let g = wp(FiniteGroup::cyclic(4), FiniteGroup::cyclic(2));
        assert_eq!(g.fbar(&[1, 3], 1, 0), 0);
        assert_eq!(g.fbar(&[1, 3], 0, 1), 3);
        assert_eq!(g.fbar(&[0, 0], 1, 0), 0);
    }

    #[test]
    fn guard() {
        let err = WreathProduct::new(FiniteGroup::cyclic(4), FiniteGroup::cyclic(12), &Guards::default());
        assert!(matches!(err, Err(GrigError::WreathTooLarge { .. })));
    }
}
