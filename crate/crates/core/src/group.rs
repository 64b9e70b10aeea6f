//! Finite groups given by permutation generators.
//!
//! Every group is enumerated in full: elements are indexed `0..order` with the
//! identity at index 0, and products are read from a Cayley table. Subgroups
//! are bitsets over element indices.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, OnceLock};

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::util::{factorize, is_prime_power};

/// Largest group order accepted by the enumerator.
pub const MAX_ORDER: usize = 2000;
/// Default cap on the number of subgroups enumerated for one group.
pub const DEFAULT_MAX_SUBGROUPS: usize = 5000;
/// Environment variable overriding [`DEFAULT_MAX_SUBGROUPS`].
pub const SUBGROUP_LIMIT_ENV: &str = "BRAUER_MAX_SUBGROUPS";

static NEXT_GROUP_ID: AtomicU64 = AtomicU64::new(1);

fn fresh_id() -> u64 {
    NEXT_GROUP_ID.fetch_add(1, Ordering::Relaxed)
}

pub fn max_subgroups() -> usize {
    std::env::var(SUBGROUP_LIMIT_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_SUBGROUPS)
}

/// A bijection of `{0..n-1}`. Products compose left to right: `a.then(b)`
/// applies `a` first.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation { images: (0..degree as u32).collect() }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::InvalidPermutation(format!("{images:?} is not a bijection")));
            }
            seen[i] = true;
        }
        Ok(Permutation { images: images.into_iter().map(|i| i as u32).collect() })
    }

    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<usize> = (0..degree).collect();
        let mut used = vec![false; degree];
        for cycle in cycles {
            for (k, &a) in cycle.iter().enumerate() {
                if a >= degree {
                    return Err(Error::InvalidPermutation(format!("point {a} outside degree {degree}")));
                }
                if used[a] {
                    return Err(Error::InvalidPermutation(format!("point {a} repeated")));
                }
                used[a] = true;
                images[a] = cycle[(k + 1) % cycle.len()];
            }
        }
        Permutation::from_images(images)
    }

    /// Parses disjoint-cycle notation such as `(0 1 2)(3 4)`; `()` is the identity.
    pub fn parse_cycles(degree: usize, text: &str) -> Result<Self> {
        let mut cycles = Vec::new();
        let mut rest = text.trim();
        while !rest.is_empty() {
            let inner = rest
                .strip_prefix('(')
                .ok_or_else(|| Error::Parse(format!("expected '(' in {text:?}")))?;
            let close = inner
                .find(')')
                .ok_or_else(|| Error::Parse(format!("unclosed cycle in {text:?}")))?;
            let body = &inner[..close];
            let cycle: Vec<usize> = body
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .map(|s| s.parse::<usize>().map_err(|_| Error::Parse(format!("bad point {s:?}"))))
                .collect::<Result<_>>()?;
            if !cycle.is_empty() {
                cycles.push(cycle);
            }
            rest = inner[close + 1..].trim_start();
        }
        Permutation::from_cycles(degree, &cycles)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn image(&self, point: usize) -> usize {
        self.images[point] as usize
    }

    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&i| i as usize).collect()
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation { images: self.images.iter().map(|&i| other.images[i as usize]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j as usize] = i as u32;
        }
        Permutation { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.image(start) == start {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut next = self.image(start);
            while next != start {
                seen[next] = true;
                cycle.push(next);
                next = self.image(next);
            }
            out.push(cycle);
        }
        out
    }

    /// Places `self` on the points `offset..offset+degree` of a larger set.
    pub fn shifted(&self, offset: usize, total: usize) -> Permutation {
        let mut images: Vec<u32> = (0..total as u32).collect();
        for (i, &j) in self.images.iter().enumerate() {
            images[offset + i] = offset as u32 + j;
        }
        Permutation { images }
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            let body: Vec<String> = c.iter().map(|p| p.to_string()).collect();
            write!(f, "({})", body.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A subgroup of a [`PermGroup`], identified by its element set.
#[derive(Clone)]
pub struct Subgroup {
    group: u64,
    bits: FixedBitSet,
    order: usize,
    gens: Vec<usize>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.group == other.group && self.bits == other.bits
    }
}

impl Eq for Subgroup {}

impl std::hash::Hash for Subgroup {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.group.hash(state);
        self.bits.hash(state);
    }
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subgroup(order {}, gens {:?})", self.order, self.gens)
    }
}

impl Subgroup {
    pub fn group_id(&self) -> u64 {
        self.group
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn bits(&self) -> &FixedBitSet {
        &self.bits
    }

    pub fn generators(&self) -> &[usize] {
        &self.gens
    }

    pub fn contains(&self, element: usize) -> bool {
        self.bits.contains(element)
    }

    pub fn elements(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    pub fn element_vec(&self) -> Vec<usize> {
        self.bits.ones().collect()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.group == other.group && self.bits.is_subset(&other.bits)
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }
}

struct Lattice {
    list: Vec<Subgroup>,
    index: HashMap<FixedBitSet, usize>,
}

/// A finite permutation group together with its full multiplication table.
pub struct PermGroup {
    id: u64,
    degree: usize,
    generators: Vec<Permutation>,
    gen_index: Vec<usize>,
    elements: Vec<Permutation>,
    index: HashMap<Permutation, usize>,
    table: Vec<u32>,
    inverse: Vec<u32>,
    orders: Vec<u32>,
    lattice: OnceLock<Lattice>,
}

impl fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PermGroup(order {}, degree {}, gens {:?})", self.order(), self.degree, self.generators)
    }
}

impl PermGroup {
    /// Enumerates the group generated by `gens` on `degree` points.
    pub fn from_generators(degree: usize, gens: Vec<Permutation>) -> Result<PermGroup> {
        for g in &gens {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch { expected: degree, found: g.degree() });
            }
        }
        let id_perm = Permutation::identity(degree);
        let mut elements = vec![id_perm.clone()];
        let mut index: HashMap<Permutation, usize> = HashMap::new();
        index.insert(id_perm, 0);
        // parent[b] * gens[via[b]] = b
        let mut parent = vec![usize::MAX];
        let mut via = vec![usize::MAX];
        let mut rmul: Vec<Vec<u32>> = Vec::new();
        let mut k = 0;
        while k < elements.len() {
            let mut row = Vec::with_capacity(gens.len());
            for (s, g) in gens.iter().enumerate() {
                let prod = elements[k].then(g);
                let idx = match index.get(&prod) {
                    Some(&i) => i,
                    None => {
                        let i = elements.len();
                        if i >= MAX_ORDER {
                            return Err(Error::Resource(format!(
                                "group order exceeds the bound {MAX_ORDER}"
                            )));
                        }
                        index.insert(prod.clone(), i);
                        elements.push(prod);
                        parent.push(k);
                        via.push(s);
                        i
                    }
                };
                row.push(idx as u32);
            }
            rmul.push(row);
            k += 1;
        }
        let n = elements.len();
        let mut table = vec![0u32; n * n];
        for a in 0..n {
            let row = &mut table[a * n..(a + 1) * n];
            row[0] = a as u32;
            for b in 1..n {
                row[b] = rmul[row[parent[b]] as usize][via[b]];
            }
        }
        let gen_index = gens.iter().map(|g| index[g]).collect();
        Ok(PermGroup::assemble(degree, gens, gen_index, elements, index, table))
    }

    fn assemble(
        degree: usize,
        generators: Vec<Permutation>,
        gen_index: Vec<usize>,
        elements: Vec<Permutation>,
        index: HashMap<Permutation, usize>,
        table: Vec<u32>,
    ) -> PermGroup {
        let n = elements.len();
        let mut inverse = vec![0u32; n];
        for a in 0..n {
            let row = &table[a * n..(a + 1) * n];
            inverse[a] = row.iter().position(|&x| x == 0).expect("group table has an identity") as u32;
        }
        let mut orders = vec![0u32; n];
        for a in 0..n {
            let mut x = a;
            let mut k = 1u32;
            while x != 0 {
                x = table[x * n + a] as usize;
                k += 1;
            }
            orders[a] = k;
        }
        PermGroup {
            id: fresh_id(),
            degree,
            generators,
            gen_index,
            elements,
            index,
            table,
            inverse,
            orders,
            lattice: OnceLock::new(),
        }
    }

    /// Parses the group text format: `degree n` followed by one generator per line.
    pub fn parse_text(text: &str) -> Result<PermGroup> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let head = lines.next().ok_or_else(|| Error::Parse("empty group file".into()))?;
        let degree: usize = head
            .strip_prefix("degree")
            .map(str::trim)
            .and_then(|d| d.parse().ok())
            .ok_or_else(|| Error::Parse(format!("expected `degree n`, found {head:?}")))?;
        let gens = lines.map(|l| Permutation::parse_cycles(degree, l)).collect::<Result<Vec<_>>>()?;
        PermGroup::from_generators(degree, gens)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("degree {}\n", self.degree);
        for g in &self.generators {
            s.push_str(&g.to_string());
            s.push('\n');
        }
        s
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    /// Element indices of the generators.
    pub fn generator_indices(&self) -> &[usize] {
        &self.gen_index
    }

    pub fn element(&self, i: usize) -> &Permutation {
        &self.elements[i]
    }

    pub fn index_of(&self, p: &Permutation) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn contains_perm(&self, p: &Permutation) -> bool {
        self.index.contains_key(p)
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order() + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a] as usize
    }

    pub fn pow(&self, a: usize, k: usize) -> usize {
        let mut r = 0;
        for _ in 0..k % self.element_order(a) {
            r = self.mul(r, a);
        }
        r
    }

    /// `x a x^-1`.
    #[inline]
    pub fn conj(&self, x: usize, a: usize) -> usize {
        self.mul(self.mul(x, a), self.inv(x))
    }

    pub fn commutator(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))
    }

    pub fn element_order(&self, a: usize) -> usize {
        self.orders[a] as usize
    }

    pub fn exponent(&self) -> usize {
        self.orders.iter().fold(1usize, |acc, &o| num_integer::lcm(acc, o as usize))
    }

    pub fn is_abelian(&self) -> bool {
        let g = &self.gen_index;
        g.iter().all(|&a| g.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn is_cyclic(&self) -> bool {
        self.orders.iter().any(|&o| o as usize == self.order())
    }

    /// The prime `p` if the order is a nontrivial power of `p`.
    pub fn p_group_prime(&self) -> Option<u64> {
        is_prime_power(self.order() as u64).map(|(p, _)| p)
    }

    // ---- subgroups --------------------------------------------------------

    fn make_subgroup(&self, bits: FixedBitSet, gens: Vec<usize>) -> Subgroup {
        let order = bits.count_ones(..);
        Subgroup { group: self.id, bits, order, gens }
    }

    pub fn whole(&self) -> Subgroup {
        let mut bits = FixedBitSet::with_capacity(self.order());
        bits.insert_range(..);
        self.make_subgroup(bits, self.gen_index.clone())
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        let mut bits = FixedBitSet::with_capacity(self.order());
        bits.insert(0);
        self.make_subgroup(bits, Vec::new())
    }

    pub fn check(&self, h: &Subgroup) -> Result<()> {
        if h.group == self.id {
            Ok(())
        } else {
            Err(Error::AmbientMismatch)
        }
    }

    /// Closure of `start` (a subgroup's element set) under right multiplication by `gens`.
    fn close(&self, mut bits: FixedBitSet, gens: &[usize]) -> FixedBitSet {
        let mut queue: Vec<usize> = bits.ones().collect();
        let mut k = 0;
        while k < queue.len() {
            let e = queue[k];
            for &s in gens {
                let f = self.mul(e, s);
                if !bits.contains(f) {
                    bits.insert(f);
                    queue.push(f);
                }
            }
            k += 1;
        }
        bits
    }

    /// The subgroup generated by the given elements.
    pub fn generate(&self, gens: &[usize]) -> Subgroup {
        let mut bits = FixedBitSet::with_capacity(self.order());
        bits.insert(0);
        let gens: Vec<usize> = gens.iter().copied().filter(|&g| g != 0).collect();
        let bits = self.close(bits, &gens);
        self.make_subgroup(bits, gens)
    }

    pub fn cyclic_subgroup(&self, a: usize) -> Subgroup {
        let mut bits = FixedBitSet::with_capacity(self.order());
        let mut x = 0;
        loop {
            bits.insert(x);
            x = self.mul(x, a);
            if x == 0 {
                break;
            }
        }
        let gens = if a == 0 { vec![] } else { vec![a] };
        self.make_subgroup(bits, gens)
    }

    /// `<H, K>`.
    pub fn join(&self, h: &Subgroup, k: &Subgroup) -> Subgroup {
        if k.bits.is_subset(&h.bits) {
            return h.clone();
        }
        if h.bits.is_subset(&k.bits) {
            return k.clone();
        }
        let mut gens = h.gens.clone();
        gens.extend(k.gens.iter().copied().filter(|g| !h.contains(*g)));
        let bits = self.close(h.bits.clone(), &gens);
        self.make_subgroup(bits, gens)
    }

    /// Builds a subgroup handle from an element set already known to be a subgroup.
    pub fn subgroup_from_bits(&self, bits: FixedBitSet) -> Subgroup {
        let order = bits.count_ones(..);
        let mut cur = FixedBitSet::with_capacity(self.order());
        cur.insert(0);
        let mut gens = Vec::new();
        let mut cur_order = 1;
        // Prefer elements of large order to keep generating sets short.
        let mut candidates: Vec<usize> = bits.ones().collect();
        candidates.sort_by_key(|&a| std::cmp::Reverse(self.element_order(a)));
        for a in candidates {
            if cur_order == order {
                break;
            }
            if !cur.contains(a) {
                gens.push(a);
                cur = self.close(cur, &gens);
                cur_order = cur.count_ones(..);
            }
        }
        debug_assert_eq!(cur, bits);
        self.make_subgroup(bits, gens)
    }

    /// Validates that `elements` form a subgroup and returns its handle.
    pub fn subgroup_from_elements(&self, elements: &[usize]) -> Result<Subgroup> {
        let mut bits = FixedBitSet::with_capacity(self.order());
        for &e in elements {
            if e >= self.order() {
                return Err(Error::NotSubgroup(format!("element index {e} out of range")));
            }
            bits.insert(e);
        }
        let h = self.generate(elements);
        if h.bits != bits {
            return Err(Error::NotSubgroup("element set is not closed".into()));
        }
        Ok(h)
    }

    pub fn subgroup_from_perms(&self, perms: &[Permutation]) -> Result<Subgroup> {
        let idx = perms
            .iter()
            .map(|p| self.index_of(p).ok_or_else(|| Error::NotSubgroup(format!("{p} is not in the group"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.generate(&idx))
    }

    pub fn intersection(&self, h: &Subgroup, k: &Subgroup) -> Subgroup {
        let mut bits = h.bits.clone();
        bits.intersect_with(&k.bits);
        if bits == h.bits {
            return h.clone();
        }
        if bits == k.bits {
            return k.clone();
        }
        self.subgroup_from_bits(bits)
    }

    /// The set product `HK`, which is a subgroup when either factor normalizes the other.
    pub fn product_if_subgroup(&self, h: &Subgroup, k: &Subgroup) -> Option<Subgroup> {
        let j = self.join(h, k);
        let inter = h.bits.intersection(&k.bits).count();
        (j.order * inter == h.order * k.order).then_some(j)
    }

    pub fn conjugate(&self, h: &Subgroup, x: usize) -> Subgroup {
        let mut bits = FixedBitSet::with_capacity(self.order());
        for a in h.elements() {
            bits.insert(self.conj(x, a));
        }
        let gens = h.gens.iter().map(|&a| self.conj(x, a)).collect();
        self.make_subgroup(bits, gens)
    }

    pub fn normalizes(&self, x: usize, h: &Subgroup) -> bool {
        h.gens.iter().all(|&a| h.contains(self.conj(x, a)))
    }

    /// Whether `h` is normal in `k` (both subgroups of this group).
    pub fn is_normal_in(&self, h: &Subgroup, k: &Subgroup) -> bool {
        h.is_subgroup_of(k) && k.gens.iter().all(|&x| self.normalizes(x, h))
    }

    pub fn is_normal(&self, h: &Subgroup) -> bool {
        self.gen_index.iter().all(|&x| self.normalizes(x, h))
    }

    /// `N_K(H)` for `H, K` subgroups of this group.
    pub fn normalizer_in(&self, k: &Subgroup, h: &Subgroup) -> Subgroup {
        let mut bits = FixedBitSet::with_capacity(self.order());
        for x in k.elements() {
            if self.normalizes(x, h) {
                bits.insert(x);
            }
        }
        self.subgroup_from_bits(bits)
    }

    pub fn normalizer(&self, h: &Subgroup) -> Result<Subgroup> {
        self.check(h)?;
        Ok(self.normalizer_in(&self.whole(), h))
    }

    /// `C_K(H)`.
    pub fn centralizer_in(&self, k: &Subgroup, h: &Subgroup) -> Subgroup {
        let mut bits = FixedBitSet::with_capacity(self.order());
        for x in k.elements() {
            if h.gens.iter().all(|&a| self.mul(x, a) == self.mul(a, x)) {
                bits.insert(x);
            }
        }
        self.subgroup_from_bits(bits)
    }

    pub fn centre_of(&self, k: &Subgroup) -> Subgroup {
        self.centralizer_in(k, k)
    }

    pub fn centre(&self) -> Subgroup {
        self.centre_of(&self.whole())
    }

    /// Smallest subgroup of `k` containing `elements` and normal in `k`.
    pub fn normal_closure_in(&self, k: &Subgroup, elements: &[usize]) -> Subgroup {
        let mut h = self.generate(elements);
        loop {
            let extra: Vec<usize> = k
                .gens
                .iter()
                .flat_map(|&x| h.gens.iter().map(move |&a| (x, a)))
                .map(|(x, a)| self.conj(x, a))
                .filter(|c| !h.contains(*c))
                .collect();
            if extra.is_empty() {
                return h;
            }
            let mut gens = h.gens.clone();
            gens.extend(extra);
            let bits = self.close(h.bits.clone(), &gens);
            h = self.make_subgroup(bits, gens);
        }
    }

    pub fn derived_subgroup_of(&self, k: &Subgroup) -> Subgroup {
        let g = &k.gens;
        let comms: Vec<usize> =
            g.iter().flat_map(|&a| g.iter().map(move |&b| (a, b))).map(|(a, b)| self.commutator(a, b)).collect();
        self.normal_closure_in(k, &comms)
    }

    pub fn derived_subgroup(&self) -> Subgroup {
        self.derived_subgroup_of(&self.whole())
    }

    fn lattice(&self) -> Result<&Lattice> {
        if let Some(l) = self.lattice.get() {
            return Ok(l);
        }
        let list = self.enumerate_subgroups_bounded(max_subgroups())?;
        let _ = self.lattice.set(Lattice::new(list));
        Ok(self.lattice.get().expect("lattice just set"))
    }

    /// Installs a precomputed subgroup list (used for subgroups and quotients of an enumerated group).
    fn seed_lattice(&self, list: Vec<Subgroup>) {
        let _ = self.lattice.set(Lattice::new(list));
    }

    /// Enumerates all subgroups without caching, failing once more than `limit` are found.
    pub fn enumerate_subgroups_bounded(&self, limit: usize) -> Result<Vec<Subgroup>> {
        let mut index: HashMap<FixedBitSet, usize> = HashMap::new();
        let mut list: Vec<Subgroup> = Vec::new();
        let mut cyclic: Vec<usize> = Vec::new();
        for a in 0..self.order() {
            let c = self.cyclic_subgroup(a);
            if !index.contains_key(&c.bits) {
                index.insert(c.bits.clone(), list.len());
                cyclic.push(list.len());
                list.push(c);
            }
        }
        let mut k = 0;
        while k < list.len() {
            for ci in 0..cyclic.len() {
                let c = &list[cyclic[ci]];
                let a = c.gens.first().copied().unwrap_or(0);
                if list[k].contains(a) {
                    continue;
                }
                let mut gens = list[k].gens.clone();
                gens.push(a);
                let bits = self.close(list[k].bits.clone(), &gens);
                if !index.contains_key(&bits) {
                    if list.len() >= limit {
                        return Err(Error::Resource(format!(
                            "more than {limit} subgroups (raise {SUBGROUP_LIMIT_ENV} to continue)"
                        )));
                    }
                    index.insert(bits.clone(), list.len());
                    let s = self.make_subgroup(bits, gens);
                    list.push(s);
                }
            }
            k += 1;
        }
        Ok(list)
    }

    /// Every subgroup, each exactly once.
    pub fn all_subgroups(&self) -> Result<&[Subgroup]> {
        Ok(&self.lattice()?.list)
    }

    /// Position of `h` in [`PermGroup::all_subgroups`].
    pub fn subgroup_position(&self, h: &Subgroup) -> Result<usize> {
        self.check(h)?;
        self.lattice()?
            .index
            .get(&h.bits)
            .copied()
            .ok_or_else(|| Error::Internal("subgroup missing from lattice".into()))
    }

    pub fn normal_subgroups(&self) -> Result<Vec<Subgroup>> {
        let mut out: Vec<Subgroup> =
            self.all_subgroups()?.iter().filter(|h| self.is_normal(h)).cloned().collect();
        out.sort_by(|a, b| a.order.cmp(&b.order).then_with(|| a.element_vec().cmp(&b.element_vec())));
        Ok(out)
    }

    /// Subgroups of `k` that are normal in `k`.
    pub fn normal_subgroups_of(&self, k: &Subgroup) -> Result<Vec<Subgroup>> {
        Ok(self
            .all_subgroups()?
            .iter()
            .filter(|h| h.is_subgroup_of(k) && self.is_normal_in(h, k))
            .cloned()
            .collect())
    }

    /// Maximal proper subgroups of `k`.
    pub fn maximal_subgroups_of(&self, k: &Subgroup) -> Result<Vec<Subgroup>> {
        let proper: Vec<&Subgroup> =
            self.all_subgroups()?.iter().filter(|h| h.is_subgroup_of(k) && h.order < k.order).collect();
        Ok(proper
            .iter()
            .filter(|h| {
                !proper.iter().any(|m| m.order > h.order && m.order % h.order == 0 && h.bits.is_subset(&m.bits))
            })
            .map(|h| (*h).clone())
            .collect())
    }

    pub fn frattini_of(&self, k: &Subgroup) -> Result<Subgroup> {
        let maxes = self.maximal_subgroups_of(k)?;
        let mut bits = k.bits.clone();
        for m in &maxes {
            bits.intersect_with(&m.bits);
        }
        Ok(self.subgroup_from_bits(bits))
    }

    pub fn frattini_subgroup(&self) -> Result<Subgroup> {
        self.frattini_of(&self.whole())
    }

    /// Minimal nontrivial normal subgroups.
    pub fn minimal_normal_subgroups(&self) -> Result<Vec<Subgroup>> {
        let normals: Vec<Subgroup> = self.normal_subgroups()?.into_iter().filter(|n| n.order > 1).collect();
        Ok(normals
            .iter()
            .filter(|n| !normals.iter().any(|m| m.order < n.order && m.bits.is_subset(&n.bits)))
            .cloned()
            .collect())
    }

    /// A Sylow `p`-subgroup of `k` (the first in lattice order).
    pub fn sylow_of(&self, k: &Subgroup, p: u64) -> Result<Subgroup> {
        let mut target = 1usize;
        let mut m = k.order;
        while m % p as usize == 0 {
            m /= p as usize;
            target *= p as usize;
        }
        self.all_subgroups()?
            .iter()
            .find(|h| h.order == target && h.is_subgroup_of(k))
            .cloned()
            .ok_or_else(|| Error::Internal("no Sylow subgroup found".into()))
    }

    /// Elements of `k` whose order is prime to `p`.
    pub fn p_prime_elements(&self, k: &Subgroup, p: u64) -> FixedBitSet {
        let mut bits = FixedBitSet::with_capacity(self.order());
        for a in k.elements() {
            if self.element_order(a) as u64 % p != 0 {
                bits.insert(a);
            }
        }
        bits
    }

    /// Whether `k` is cyclic.
    pub fn subgroup_is_cyclic(&self, k: &Subgroup) -> bool {
        k.elements().any(|a| self.element_order(a) == k.order)
    }

    pub fn subgroup_is_abelian(&self, k: &Subgroup) -> bool {
        let g = &k.gens;
        g.iter().all(|&a| g.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    /// For a `p`-quasi-elementary subgroup `k = C ⋊ P`, returns `C`.
    pub fn quasi_elementary_core(&self, k: &Subgroup, p: u64) -> Option<Subgroup> {
        let bits = self.p_prime_elements(k, p);
        let n = bits.count_ones(..);
        if k.order % n != 0 || is_prime_power(k.order as u64 / n as u64).map_or(k.order != n, |(q, _)| q != p) {
            return None;
        }
        let c = bits.ones().find(|&a| self.element_order(a) == n)?;
        Some(self.cyclic_subgroup(c))
    }

    pub fn is_p_quasi_elementary(&self, k: &Subgroup, p: u64) -> bool {
        self.quasi_elementary_core(k, p).is_some()
    }

    /// Primes `p` for which `k` is `p`-quasi-elementary (restricted to divisors of `|k|`).
    pub fn quasi_elementary_primes(&self, k: &Subgroup) -> Vec<u64> {
        factorize(k.order as u64).into_iter().map(|(p, _)| p).filter(|&p| self.is_p_quasi_elementary(k, p)).collect()
    }

    pub fn is_quasi_elementary(&self, k: &Subgroup) -> bool {
        k.order == 1 || !self.quasi_elementary_primes(k).is_empty()
    }

    // ---- derived groups ---------------------------------------------------

    /// `k` as a group in its own right, with the embedding back into `self`.
    pub fn subgroup_group(&self, k: &Subgroup) -> Result<(Arc<PermGroup>, Embedding)> {
        self.check(k)?;
        let map: Vec<usize> = k.element_vec();
        let n = map.len();
        let mut back = vec![u32::MAX; self.order()];
        for (i, &a) in map.iter().enumerate() {
            back[a] = i as u32;
        }
        let mut table = vec![0u32; n * n];
        for i in 0..n {
            for j in 0..n {
                table[i * n + j] = back[self.mul(map[i], map[j])];
            }
        }
        let elements: Vec<Permutation> = map.iter().map(|&a| self.elements[a].clone()).collect();
        let index = elements.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let gen_index: Vec<usize> = k.gens.iter().map(|&a| back[a] as usize).collect();
        let gens = k.gens.iter().map(|&a| self.elements[a].clone()).collect();
        let sub = PermGroup::assemble(self.degree, gens, gen_index, elements, index, table);
        if let Some(l) = self.lattice.get() {
            let list = l
                .list
                .iter()
                .filter(|h| h.bits.is_subset(&k.bits))
                .map(|h| {
                    let mut bits = FixedBitSet::with_capacity(n);
                    for a in h.elements() {
                        bits.insert(back[a] as usize);
                    }
                    Subgroup { group: sub.id, bits, order: h.order, gens: h.gens.iter().map(|&a| back[a] as usize).collect() }
                })
                .collect();
            sub.seed_lattice(list);
        }
        let sub = Arc::new(sub);
        let emb = Embedding { sub: sub.clone(), ambient: self.id, map, back, image: k.clone() };
        Ok((sub, emb))
    }

    /// `G/N` realised by the action on left cosets of `N`.
    pub fn quotient(&self, n: &Subgroup) -> Result<(Arc<PermGroup>, Epimorphism)> {
        self.check(n)?;
        if !self.is_normal(n) {
            return Err(Error::NotNormal);
        }
        let size = self.order();
        let mut coset = vec![u32::MAX; size];
        let mut reps = Vec::new();
        for g in 0..size {
            if coset[g] != u32::MAX {
                continue;
            }
            let c = reps.len() as u32;
            reps.push(g);
            for a in n.elements() {
                coset[self.mul(g, a)] = c;
            }
        }
        let m = reps.len();
        let mut table = vec![0u32; m * m];
        for i in 0..m {
            for j in 0..m {
                table[i * m + j] = coset[self.mul(reps[i], reps[j])];
            }
        }
        // N is normal, so left and right cosets agree; coset i acts by right
        // multiplication, which composes left to right like `then`.
        let elements: Vec<Permutation> = (0..m)
            .map(|i| Permutation { images: (0..m).map(|x| table[x * m + i]).collect() })
            .collect();
        let index = elements.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let gen_index: Vec<usize> = self.gen_index.iter().map(|&g| coset[g] as usize).collect();
        let gens = gen_index.iter().map(|&i| elements[i].clone()).collect();
        let q = PermGroup::assemble(m, gens, gen_index.clone(), elements, index, table);
        if let Some(l) = self.lattice.get() {
            let list = l
                .list
                .iter()
                .filter(|h| n.bits.is_subset(&h.bits))
                .map(|h| {
                    let mut bits = FixedBitSet::with_capacity(m);
                    for a in h.elements() {
                        bits.insert(coset[a] as usize);
                    }
                    let mut gens: Vec<usize> = h.gens.iter().map(|&a| coset[a] as usize).filter(|&c| c != 0).collect();
                    gens.dedup();
                    Subgroup { group: q.id, order: h.order / n.order, bits, gens }
                })
                .collect();
            q.seed_lattice(list);
        }
        let q = Arc::new(q);
        let epi = Epimorphism {
            source: self.id,
            target: q.clone(),
            map: coset,
            gen_images: gen_index,
            kernel: n.clone(),
        };
        Ok((q, epi))
    }
}

impl Lattice {
    fn new(list: Vec<Subgroup>) -> Lattice {
        let index = list.iter().enumerate().map(|(i, h)| (h.bits.clone(), i)).collect();
        Lattice { list, index }
    }
}

/// Inclusion of a subgroup, viewed as its own group, into the ambient group.
#[derive(Clone)]
pub struct Embedding {
    sub: Arc<PermGroup>,
    ambient: u64,
    map: Vec<usize>,
    back: Vec<u32>,
    image: Subgroup,
}

impl Embedding {
    pub fn subgroup_group(&self) -> &Arc<PermGroup> {
        &self.sub
    }

    pub fn image(&self) -> &Subgroup {
        &self.image
    }

    pub fn ambient_id(&self) -> u64 {
        self.ambient
    }

    pub fn element_to_ambient(&self, a: usize) -> usize {
        self.map[a]
    }

    pub fn element_from_ambient(&self, a: usize) -> Option<usize> {
        let b = self.back[a];
        (b != u32::MAX).then_some(b as usize)
    }

    pub fn to_ambient(&self, h: &Subgroup) -> Result<Subgroup> {
        self.sub.check(h)?;
        let mut bits = FixedBitSet::with_capacity(self.back.len());
        for a in h.elements() {
            bits.insert(self.map[a]);
        }
        Ok(Subgroup {
            group: self.ambient,
            bits,
            order: h.order,
            gens: h.gens.iter().map(|&a| self.map[a]).collect(),
        })
    }

    pub fn from_ambient(&self, h: &Subgroup) -> Result<Subgroup> {
        if h.group != self.ambient {
            return Err(Error::AmbientMismatch);
        }
        if !h.is_subgroup_of(&self.image) {
            return Err(Error::NotSubgroup("subgroup not contained in the embedded image".into()));
        }
        let mut bits = FixedBitSet::with_capacity(self.sub.order());
        for a in h.elements() {
            bits.insert(self.back[a] as usize);
        }
        Ok(Subgroup {
            group: self.sub.id,
            bits,
            order: h.order,
            gens: h.gens.iter().map(|&a| self.back[a] as usize).collect(),
        })
    }
}

/// A surjection `G -> G/N` given by an element map.
#[derive(Clone)]
pub struct Epimorphism {
    source: u64,
    target: Arc<PermGroup>,
    map: Vec<u32>,
    gen_images: Vec<usize>,
    kernel: Subgroup,
}

impl Epimorphism {
    pub fn source_id(&self) -> u64 {
        self.source
    }

    pub fn target(&self) -> &Arc<PermGroup> {
        &self.target
    }

    pub fn kernel(&self) -> &Subgroup {
        &self.kernel
    }

    /// Images of the source generators, as target element indices.
    pub fn generator_images(&self) -> &[usize] {
        &self.gen_images
    }

    pub fn apply(&self, g: usize) -> usize {
        self.map[g] as usize
    }

    pub fn image(&self, h: &Subgroup) -> Result<Subgroup> {
        if h.group != self.source {
            return Err(Error::AmbientMismatch);
        }
        let mut bits = FixedBitSet::with_capacity(self.target.order());
        for a in h.elements() {
            bits.insert(self.map[a] as usize);
        }
        let gens: Vec<usize> = h.gens.iter().map(|&a| self.map[a] as usize).filter(|&x| x != 0).collect();
        let order = bits.count_ones(..);
        Ok(Subgroup { group: self.target.id, bits, order, gens })
    }

    /// Full preimage of a subgroup of the target.
    pub fn preimage(&self, source: &PermGroup, q: &Subgroup) -> Result<Subgroup> {
        source.check(&self.kernel)?;
        self.target.check(q)?;
        let mut bits = FixedBitSet::with_capacity(source.order());
        for (g, &c) in self.map.iter().enumerate() {
            if q.contains(c as usize) {
                bits.insert(g);
            }
        }
        let mut gens = self.kernel.gens.clone();
        for &c in &q.gens {
            let g = self.map.iter().position(|&x| x as usize == c).expect("epimorphism is surjective");
            gens.push(g);
        }
        let order = bits.count_ones(..);
        Ok(Subgroup { group: source.id, bits, order, gens })
    }
}

/// `C ⋊ P` where generator `k` of `P` acts on `C` by the automorphism sending
/// `C`'s generator `j` to element `action[k][j]` of `C`.
pub fn semidirect_product(c: &PermGroup, p: &PermGroup, action: &[Vec<usize>]) -> Result<PermGroup> {
    if !c.is_abelian() {
        return Err(Error::Shape("the normal factor must be abelian".into()));
    }
    if action.len() != p.generators().len() {
        return Err(Error::BadAction(format!(
            "{} automorphisms given for {} generators",
            action.len(),
            p.generators().len()
        )));
    }
    let nc = c.order();
    let mut autos = Vec::with_capacity(action.len());
    for imgs in action {
        if imgs.len() != c.generator_indices().len() {
            return Err(Error::BadAction("wrong number of generator images".into()));
        }
        autos.push(extend_to_automorphism(c, imgs)?);
    }
    let degree = nc + p.degree();
    let mut gens = Vec::new();
    for &g in c.generator_indices() {
        let mut images: Vec<usize> = (0..degree).collect();
        for x in 0..nc {
            images[x] = c.mul(x, g);
        }
        gens.push(Permutation::from_images(images)?);
    }
    for (k, pg) in p.generators().iter().enumerate() {
        let mut images: Vec<usize> = (0..degree).collect();
        for x in 0..nc {
            images[x] = autos[k][x];
        }
        for i in 0..p.degree() {
            images[nc + i] = nc + pg.image(i);
        }
        gens.push(Permutation::from_images(images)?);
    }
    let g = PermGroup::from_generators(degree, gens)?;
    if g.order() != nc * p.order() {
        return Err(Error::BadAction(format!(
            "generated order {} differs from |C||P| = {}",
            g.order(),
            nc * p.order()
        )));
    }
    Ok(g)
}

fn extend_to_automorphism(c: &PermGroup, gen_images: &[usize]) -> Result<Vec<usize>> {
    let n = c.order();
    let gens = c.generator_indices();
    let mut map = vec![usize::MAX; n];
    map[0] = 0;
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        for (s, &g) in gens.iter().enumerate() {
            let y = c.mul(x, g);
            let img = c.mul(map[x], gen_images[s]);
            if map[y] == usize::MAX {
                map[y] = img;
                queue.push_back(y);
            } else if map[y] != img {
                return Err(Error::BadAction("generator images do not define a homomorphism".into()));
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            if map[c.mul(a, b)] != c.mul(map[a], map[b]) {
                return Err(Error::BadAction("generator images do not define a homomorphism".into()));
            }
        }
    }
    let mut seen = vec![false; n];
    for &m in &map {
        if seen[m] {
            return Err(Error::BadAction("map on C is not bijective".into()));
        }
        seen[m] = true;
    }
    Ok(map)
}

/// Direct product on disjoint point sets.
pub fn direct_product(a: &PermGroup, b: &PermGroup) -> Result<PermGroup> {
    let degree = a.degree() + b.degree();
    let mut gens: Vec<Permutation> = a.generators().iter().map(|g| g.shifted(0, degree)).collect();
    gens.extend(b.generators().iter().map(|g| g.shifted(a.degree(), degree)));
    PermGroup::from_generators(degree, gens)
}
