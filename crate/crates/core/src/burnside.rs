//! The Burnside ring of a finite group.
//!
//! Elements are integer combinations of transitive G-sets `[G/H]`, indexed by
//! conjugacy classes of subgroups. Classes are sorted by subgroup order, so the
//! table of marks is lower triangular and multiplication can be done on marks.

use std::fmt;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::group::{Embedding, Epimorphism, PermGroup, Permutation, Subgroup};

/// One conjugacy class of subgroups.
#[derive(Clone, Debug)]
pub struct SubgroupClass {
    rep: Subgroup,
    members: Vec<usize>,
    order: usize,
    cyclic: bool,
    normal: bool,
}

impl SubgroupClass {
    /// The canonical representative: the conjugate with the smallest sorted element list.
    pub fn rep(&self) -> &Subgroup {
        &self.rep
    }

    /// Positions of all conjugates in [`PermGroup::all_subgroups`].
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn size(&self) -> usize {
        self.members.len()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn is_cyclic(&self) -> bool {
        self.cyclic
    }

    pub fn is_normal(&self) -> bool {
        self.normal
    }
}

/// Conjugacy classes of subgroups of a group together with the table of marks.
pub struct SubgroupClassTable {
    group: Arc<PermGroup>,
    classes: Vec<SubgroupClass>,
    class_of: Vec<usize>,
    cyclic: Vec<usize>,
    // marks[h * n + l] = number of fixed points of class l on G/H
    marks: Vec<u32>,
}

impl fmt::Debug for SubgroupClassTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SubgroupClassTable(order {}, {} classes)", self.group.order(), self.classes.len())
    }
}

impl SubgroupClassTable {
    pub fn new(group: Arc<PermGroup>) -> Result<Arc<SubgroupClassTable>> {
        let subs = group.all_subgroups()?;
        let mut class_of = vec![usize::MAX; subs.len()];
        let gens = group.generator_indices().to_vec();
        let mut raw: Vec<SubgroupClass> = Vec::new();
        for start in 0..subs.len() {
            if class_of[start] != usize::MAX {
                continue;
            }
            let c = raw.len();
            class_of[start] = c;
            let mut members = vec![start];
            let mut k = 0;
            while k < members.len() {
                let h = &subs[members[k]];
                for &x in &gens {
                    let pos = group.subgroup_position(&group.conjugate(h, x))?;
                    if class_of[pos] == usize::MAX {
                        class_of[pos] = c;
                        members.push(pos);
                    }
                }
                k += 1;
            }
            let rep_pos = *members
                .iter()
                .min_by(|&&a, &&b| subs[a].element_vec().cmp(&subs[b].element_vec()))
                .expect("class is nonempty");
            let rep = subs[rep_pos].clone();
            members.sort_unstable();
            raw.push(SubgroupClass {
                order: rep.order(),
                cyclic: group.subgroup_is_cyclic(&rep),
                normal: members.len() == 1,
                rep,
                members,
            });
        }
        let mut perm: Vec<usize> = (0..raw.len()).collect();
        let keys: Vec<Vec<usize>> = raw.iter().map(|c| c.rep.element_vec()).collect();
        perm.sort_by(|&a, &b| raw[a].order.cmp(&raw[b].order).then_with(|| keys[a].cmp(&keys[b])));
        let mut new_index = vec![0; raw.len()];
        for (new, &old) in perm.iter().enumerate() {
            new_index[old] = new;
        }
        let mut slots: Vec<Option<SubgroupClass>> = raw.into_iter().map(Some).collect();
        let classes: Vec<SubgroupClass> = perm.iter().map(|&old| slots[old].take().expect("each class moved once")).collect();
        for c in class_of.iter_mut() {
            *c = new_index[*c];
        }
        let cyclic = (0..classes.len()).filter(|&i| classes[i].cyclic).collect();
        let mut table = SubgroupClassTable { group, classes, class_of, cyclic, marks: Vec::new() };
        table.marks = table.compute_marks();
        Ok(Arc::new(table))
    }

    /// mark(L, H) = (|G| / (|cl(L)| |H|)) * #{conjugates of L inside H}.
    fn compute_marks(&self) -> Vec<u32> {
        let n = self.classes.len();
        let subs = self.group.all_subgroups().expect("lattice already computed");
        let g = self.group.order();
        let mut marks = vec![0u32; n * n];
        for (h, hc) in self.classes.iter().enumerate() {
            for (l, lc) in self.classes.iter().enumerate().take(h + 1) {
                if hc.order % lc.order != 0 {
                    continue;
                }
                let inside = lc.members.iter().filter(|&&m| subs[m].bits().is_subset(hc.rep.bits())).count();
                marks[h * n + l] = (g * inside / (lc.members.len() * hc.order)) as u32;
            }
        }
        marks
    }

    pub fn group(&self) -> &Arc<PermGroup> {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn classes(&self) -> &[SubgroupClass] {
        &self.classes
    }

    pub fn class(&self, i: usize) -> &SubgroupClass {
        &self.classes[i]
    }

    pub fn rep(&self, i: usize) -> &Subgroup {
        &self.classes[i].rep
    }

    /// Index of the class of the whole group.
    pub fn top(&self) -> usize {
        self.classes.len() - 1
    }

    pub fn class_of(&self, h: &Subgroup) -> Result<usize> {
        Ok(self.class_of[self.group.subgroup_position(h)?])
    }

    pub fn class_of_position(&self, pos: usize) -> usize {
        self.class_of[pos]
    }

    pub fn cyclic_class_indices(&self) -> &[usize] {
        &self.cyclic
    }

    pub fn non_cyclic_count(&self) -> usize {
        self.classes.len() - self.cyclic.len()
    }

    /// Number of points of `G/H_h` fixed by `H_l`.
    pub fn mark(&self, l: usize, h: usize) -> u32 {
        self.marks[h * self.classes.len() + l]
    }

    pub fn mark_of(&self, l: &Subgroup, h: &Subgroup) -> Result<u32> {
        Ok(self.mark(self.class_of(l)?, self.class_of(h)?))
    }

    pub fn normalizer_order(&self, i: usize) -> usize {
        self.group.order() / self.classes[i].members.len()
    }

    /// The full table of marks with rows indexed by G-sets and columns by subgroups.
    pub fn marks_matrix(&self) -> Vec<Vec<u32>> {
        let n = self.classes.len();
        (0..n).map(|h| self.marks[h * n..(h + 1) * n].to_vec()).collect()
    }

    /// Rows are classes `H` (the G-set `G/H`), columns the cyclic classes.
    pub fn cyclic_marks_matrix(&self) -> Vec<Vec<BigInt>> {
        (0..self.len()).map(|h| self.cyclic.iter().map(|&c| BigInt::from(self.mark(c, h))).collect()).collect()
    }

    fn same(&self, other: &SubgroupClassTable) -> bool {
        self.group.id() == other.group.id()
    }

    /// Short label for class `i`, such as `H3[4]` for class 3 when it has order 4.
    pub fn label(&self, i: usize) -> String {
        format!("H{}[{}]", i, self.classes[i].order)
    }
}

/// Table for a subgroup viewed as a group in its own right.
pub fn subgroup_table(table: &SubgroupClassTable, h: &Subgroup) -> Result<(Arc<SubgroupClassTable>, Embedding)> {
    let (sub, emb) = table.group.subgroup_group(h)?;
    Ok((SubgroupClassTable::new(sub)?, emb))
}

/// Table for the quotient by a normal subgroup.
pub fn quotient_table(table: &SubgroupClassTable, n: &Subgroup) -> Result<(Arc<SubgroupClassTable>, Epimorphism)> {
    let (q, epi) = table.group.quotient(n)?;
    Ok((SubgroupClassTable::new(q)?, epi))
}

/// An element `Σ n_H [G/H]` of the Burnside ring.
#[derive(Clone)]
pub struct BurnsideElement {
    table: Arc<SubgroupClassTable>,
    coeffs: Vec<BigInt>,
}

impl PartialEq for BurnsideElement {
    fn eq(&self, other: &Self) -> bool {
        self.table.same(&other.table) && self.coeffs == other.coeffs
    }
}

impl Eq for BurnsideElement {}

impl BurnsideElement {
    pub fn zero(table: &Arc<SubgroupClassTable>) -> Self {
        BurnsideElement { table: table.clone(), coeffs: vec![BigInt::zero(); table.len()] }
    }

    /// The transitive G-set of class `i`.
    pub fn basis(table: &Arc<SubgroupClassTable>, i: usize) -> Self {
        let mut e = Self::zero(table);
        e.coeffs[i] = BigInt::one();
        e
    }

    pub fn from_coeffs(table: &Arc<SubgroupClassTable>, coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.len() != table.len() {
            return Err(Error::Param(format!("expected {} coefficients, got {}", table.len(), coeffs.len())));
        }
        Ok(BurnsideElement { table: table.clone(), coeffs })
    }

    pub fn from_i64(table: &Arc<SubgroupClassTable>, coeffs: &[i64]) -> Result<Self> {
        Self::from_coeffs(table, coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Sums `coeff * [G/H]` over the given subgroups.
    pub fn from_subgroups(table: &Arc<SubgroupClassTable>, terms: &[(i64, &Subgroup)]) -> Result<Self> {
        let mut e = Self::zero(table);
        for &(c, h) in terms {
            let i = table.class_of(h)?;
            e.coeffs[i] += c;
        }
        Ok(e)
    }

    pub fn table(&self) -> &Arc<SubgroupClassTable> {
        &self.table
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &BigInt {
        &self.coeffs[i]
    }

    pub fn add_term(&mut self, i: usize, c: &BigInt) {
        self.coeffs[i] += c;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Class indices with a nonzero coefficient.
    pub fn support(&self) -> Vec<usize> {
        (0..self.coeffs.len()).filter(|&i| !self.coeffs[i].is_zero()).collect()
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.table.same(&other.table) {
            Ok(())
        } else {
            Err(Error::TableMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(BurnsideElement { table: self.table.clone(), coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&BigInt::from(-1)))
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        BurnsideElement { table: self.table.clone(), coeffs: self.coeffs.iter().map(|a| a * k).collect() }
    }

    pub fn neg(&self) -> Self {
        self.scale(&BigInt::from(-1))
    }

    /// Marks at every class: entry `L` is the number of `L`-fixed points.
    pub fn full_marks(&self) -> Vec<BigInt> {
        (0..self.table.len()).map(|l| self.mark_at(l)).collect()
    }

    pub fn mark_at(&self, l: usize) -> BigInt {
        let mut s = BigInt::zero();
        for (h, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                s += c * self.table.mark(l, h);
            }
        }
        s
    }

    /// Marks at the cyclic classes, which determine the rational permutation character.
    pub fn cyclic_marks(&self) -> Vec<BigInt> {
        self.table.cyclic.iter().map(|&l| self.mark_at(l)).collect()
    }

    /// Whether the permutation representation `Σ n_H Q[G/H]` vanishes.
    pub fn is_relation(&self) -> bool {
        self.table.cyclic.iter().all(|&l| self.mark_at(l).is_zero())
    }

    /// The element whose marks are `marks`, or an error if it is not integral.
    pub fn from_marks(table: &Arc<SubgroupClassTable>, marks: &[BigInt]) -> Result<Self> {
        let n = table.len();
        let mut coeffs = vec![BigInt::zero(); n];
        for l in (0..n).rev() {
            let mut r = marks[l].clone();
            for (h, c) in coeffs.iter().enumerate().skip(l + 1) {
                if !c.is_zero() {
                    r -= c * table.mark(l, h);
                }
            }
            let d = BigInt::from(table.mark(l, l));
            let (q, rem) = r.div_rem(&d);
            if !rem.is_zero() {
                return Err(Error::Internal(format!("non-integral coefficient at class {l}")));
            }
            coeffs[l] = q;
        }
        Ok(BurnsideElement { table: table.clone(), coeffs })
    }

    /// Ring product `[X][Y] = [X × Y]`.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let a = self.full_marks();
        let b = other.full_marks();
        let prod: Vec<BigInt> = a.iter().zip(&b).map(|(x, y)| x * y).collect();
        Self::from_marks(&self.table, &prod)
    }

    /// Induction from a subgroup: each class is re-read as a class of the ambient group.
    pub fn induct(&self, emb: &Embedding, target: &Arc<SubgroupClassTable>) -> Result<Self> {
        if self.table.group.id() != emb.subgroup_group().id() || target.group.id() != emb.ambient_id() {
            return Err(Error::TableMismatch);
        }
        let mut out = Self::zero(target);
        for i in self.support() {
            let up = emb.to_ambient(self.table.rep(i))?;
            let j = target.class_of(&up)?;
            out.coeffs[j] += &self.coeffs[i];
        }
        Ok(out)
    }

    /// Restriction to a subgroup by the Mackey formula, computed as `H`-orbits on cosets.
    pub fn restrict(&self, emb: &Embedding, target: &Arc<SubgroupClassTable>) -> Result<Self> {
        if self.table.group.id() != emb.ambient_id() || target.group.id() != emb.subgroup_group().id() {
            return Err(Error::TableMismatch);
        }
        let g = &self.table.group;
        let h = emb.image();
        let hgens = h.generators().to_vec();
        let mut out = Self::zero(target);
        for i in self.support() {
            let k = self.table.rep(i);
            // coset[x] identifies the left coset xK
            let mut coset = vec![u32::MAX; g.order()];
            let mut reps = Vec::new();
            for x in 0..g.order() {
                if coset[x] != u32::MAX {
                    continue;
                }
                let c = reps.len() as u32;
                reps.push(x);
                for a in k.elements() {
                    coset[g.mul(x, a)] = c;
                }
            }
            let mut seen = vec![false; reps.len()];
            for start in 0..reps.len() {
                if seen[start] {
                    continue;
                }
                seen[start] = true;
                let mut queue = vec![start];
                let mut q = 0;
                while q < queue.len() {
                    let x = reps[queue[q]];
                    for &s in &hgens {
                        let c = coset[g.mul(s, x)] as usize;
                        if !seen[c] {
                            seen[c] = true;
                            queue.push(c);
                        }
                    }
                    q += 1;
                }
                let x = reps[start];
                let mut bits = FixedBitSet::with_capacity(g.order());
                for a in h.elements() {
                    if coset[g.mul(a, x)] as usize == start {
                        bits.insert(a);
                    }
                }
                let stab = emb.from_ambient(&g.subgroup_from_bits(bits))?;
                let j = target.class_of(&stab)?;
                out.coeffs[j] += &self.coeffs[i];
            }
        }
        Ok(out)
    }

    /// Inflation along `G -> G/N`: each class is replaced by its preimage.
    pub fn inflate(&self, epi: &Epimorphism, target: &Arc<SubgroupClassTable>) -> Result<Self> {
        if self.table.group.id() != epi.target().id() || target.group.id() != epi.source_id() {
            return Err(Error::TableMismatch);
        }
        let mut out = Self::zero(target);
        for i in self.support() {
            let pre = epi.preimage(&target.group, self.table.rep(i))?;
            let j = target.class_of(&pre)?;
            out.coeffs[j] += &self.coeffs[i];
        }
        Ok(out)
    }

    /// Deflation to `G/N`: each `H` becomes `NH/N`.
    pub fn deflate(&self, epi: &Epimorphism, target: &Arc<SubgroupClassTable>) -> Result<Self> {
        if self.table.group.id() != epi.source_id() || target.group.id() != epi.target().id() {
            return Err(Error::TableMismatch);
        }
        let mut out = Self::zero(target);
        for i in self.support() {
            let img = epi.image(self.table.rep(i))?;
            let j = target.class_of(&img)?;
            out.coeffs[j] += &self.coeffs[i];
        }
        Ok(out)
    }

    /// Relation JSON. Integers are decimal strings.
    pub fn to_json(&self, group_label: &str) -> Value {
        let terms: Vec<Value> = self
            .support()
            .into_iter()
            .map(|i| {
                let gens: Vec<String> =
                    self.table.rep(i).generators().iter().map(|&a| self.table.group.element(a).to_string()).collect();
                json!({
                    "class": i.to_string(),
                    "order": self.table.class(i).order.to_string(),
                    "coeff": self.coeffs[i].to_string(),
                    "generators": gens,
                })
            })
            .collect();
        json!({ "group": group_label, "terms": terms })
    }

    /// Parses relation JSON. A term names its subgroup by `class` index or by a
    /// `generators` list in cycle notation; when both are present the generators win.
    pub fn from_json(table: &Arc<SubgroupClassTable>, value: &Value) -> Result<Self> {
        let terms = value
            .get("terms")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("missing \"terms\" array".into()))?;
        let mut out = Self::zero(table);
        for t in terms {
            let coeff = json_integer(t.get("coeff").ok_or_else(|| Error::Parse("term without \"coeff\"".into()))?)?;
            let class = if let Some(gens) = t.get("generators").and_then(Value::as_array) {
                let degree = table.group.degree();
                let perms = gens
                    .iter()
                    .map(|g| {
                        let s = g.as_str().ok_or_else(|| Error::Parse("generator must be a string".into()))?;
                        Permutation::parse_cycles(degree, s)
                    })
                    .collect::<Result<Vec<_>>>()?;
                table.class_of(&table.group.subgroup_from_perms(&perms)?)?
            } else {
                let c = json_integer(t.get("class").ok_or_else(|| Error::Parse("term without subgroup".into()))?)?;
                let c: usize = (&c).try_into().map_err(|_| Error::Parse(format!("bad class index {c}")))?;
                if c >= table.len() {
                    return Err(Error::Parse(format!("class index {c} out of range")));
                }
                c
            };
            if let Some(o) = t.get("order") {
                let o = json_integer(o)?;
                if o != BigInt::from(table.class(class).order) {
                    return Err(Error::Parse(format!("class {class} has order {}, not {o}", table.class(class).order)));
                }
            }
            out.coeffs[class] += coeff;
        }
        Ok(out)
    }
}

/// Accepts a JSON integer or a decimal string.
pub fn json_integer(v: &Value) -> Result<BigInt> {
    match v {
        Value::String(s) => s.trim().parse().map_err(|_| Error::Parse(format!("not an integer: {s:?}"))),
        Value::Number(n) => n.to_string().parse().map_err(|_| Error::Parse(format!("not an integer: {n}"))),
        _ => Err(Error::Parse(format!("not an integer: {v}"))),
    }
}

impl fmt::Display for BurnsideElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let support = self.support();
        if support.is_empty() {
            return write!(f, "0");
        }
        for (k, i) in support.into_iter().enumerate() {
            let c = &self.coeffs[i];
            let sign = if c.is_negative() { "-" } else if k > 0 { "+" } else { "" };
            let sep = if k > 0 { " " } else { "" };
            let space = if k > 0 { " " } else { "" };
            let mag = c.abs();
            if mag.is_one() {
                write!(f, "{sep}{sign}{space}{}", self.table.label(i))?;
            } else {
                write!(f, "{sep}{sign}{space}{mag}{}", self.table.label(i))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for BurnsideElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
