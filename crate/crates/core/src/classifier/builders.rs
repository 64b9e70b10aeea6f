//! Explicit relations for each family of groups with primitive relations.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;

use super::qe::{gamma_graph, is_dihedral_2group, is_heisenberg, k_is_admissible, qe_decomposition, signatures, QEDecomposition};
use crate::burnside::{quotient_table, subgroup_table, BurnsideElement, SubgroupClassTable};
use crate::error::{Error, Result};
use crate::group::{PermGroup, Subgroup};
use crate::util::{factorize, is_prime_power, mobius};

fn add(theta: &mut BurnsideElement, c: impl Into<BigInt>, h: &Subgroup) -> Result<()> {
    let i = theta.table().class_of(h)?;
    theta.add_term(i, &c.into());
    Ok(())
}

fn checked(theta: BurnsideElement) -> Result<BurnsideElement> {
    if theta.is_relation() {
        Ok(theta)
    } else {
        Err(Error::Internal(format!("builder produced a non-relation: {theta}")))
    }
}

fn shape(msg: impl Into<String>) -> Error {
    Error::Shape(msg.into())
}

/// `1 − Σ C + p·G` for `G = C_p × C_p`, summing over the `p + 1` subgroups of order `p`.
pub fn cpcp(table: &Arc<SubgroupClassTable>) -> Result<BurnsideElement> {
    let g = table.group();
    let (p, k) = is_prime_power(g.order() as u64).ok_or_else(|| shape("not a p-group"))?;
    if k != 2 || g.is_cyclic() {
        return Err(shape("expected C_p x C_p"));
    }
    let mut theta = BurnsideElement::zero(table);
    add(&mut theta, 1, &g.trivial_subgroup())?;
    add(&mut theta, p, &g.whole())?;
    for i in 0..table.len() {
        if table.class(i).order() as u64 == p {
            theta.add_term(i, &BigInt::from(-1));
        }
    }
    checked(theta)
}

/// A normal subgroup `C` of prime order `l` with a complement `Q` acting faithfully.
pub fn find_cyclic_extension(g: &PermGroup) -> Result<Option<(Subgroup, Subgroup)>> {
    let n = g.order();
    let mut primes: Vec<u64> = factorize(n as u64).into_iter().filter(|&(_, e)| e == 1).map(|(l, _)| l).collect();
    primes.reverse();
    let whole = g.whole();
    for l in primes {
        let Some(c) = g.normal_subgroups()?.into_iter().find(|x| x.order() as u64 == l) else {
            continue;
        };
        if g.centralizer_in(&whole, &c) != c {
            continue;
        }
        let m = n / l as usize;
        if let Some(q) = (0..n).find(|&a| g.element_order(a) == m) {
            return Ok(Some((c, g.cyclic_subgroup(q))));
        }
    }
    Ok(None)
}

fn cyclic_extension(g: &PermGroup) -> Result<(Subgroup, Subgroup)> {
    find_cyclic_extension(g)?.ok_or_else(|| shape("expected C_l x| Q with Q acting faithfully"))
}

/// `[Q:H]·G − [Q:H]·Q + H − C·H` for `G = C_l ⋊ Q` and `H ∩ C = 1`.
pub fn theorem_b1(table: &Arc<SubgroupClassTable>, h: &Subgroup) -> Result<BurnsideElement> {
    let g = table.group();
    g.check(h)?;
    let (c, q) = cyclic_extension(g)?;
    if !g.intersection(h, &c).is_trivial() {
        return Err(Error::Param("H must meet C trivially".into()));
    }
    let index = (q.order() / h.order()) as i64;
    let mut theta = BurnsideElement::zero(table);
    add(&mut theta, index, &g.whole())?;
    add(&mut theta, -index, &q)?;
    add(&mut theta, 1, h)?;
    add(&mut theta, -1, &g.join(&c, h))?;
    checked(theta)
}

/// `H̃ − [H:H̃]·H − G̃ + [H:H̃]·G` for `G = C_l ⋊ H`, with `H̃ ≤ H` of the given order
/// and `G̃ = C_l ⋊ H̃`.
pub fn cyclic_semidirect(table: &Arc<SubgroupClassTable>, sub_order: usize) -> Result<BurnsideElement> {
    let g = table.group();
    let (_, h) = cyclic_extension(g)?;
    if sub_order == 0 || h.order() % sub_order != 0 || sub_order == h.order() {
        return Err(Error::Param(format!("{sub_order} is not a proper divisor of |H| = {}", h.order())));
    }
    let gen = h.generators()[0];
    let tilde = g.cyclic_subgroup(g.pow(gen, h.order() / sub_order));
    theorem_b1(table, &tilde)
}

/// The case `|H| = p^k`: `H̃` has index `p`.
pub fn g20_prime_power(table: &Arc<SubgroupClassTable>) -> Result<BurnsideElement> {
    let (_, h) = cyclic_extension(table.group())?;
    let (p, _) = is_prime_power(h.order() as u64).ok_or_else(|| shape("|H| is not a prime power"))?;
    cyclic_semidirect(table, h.order() / p as usize)
}

/// `G − H + α(C_n − C_l⋊C_n) + β(C_m − C_l⋊C_m)` for `|H| = mn`, `gcd(m, n) = 1`,
/// `αm + βn = 1` with `0 ≤ α < n`. By default `m` is the part of `|H|` at its smallest prime.
pub fn g20_composite(table: &Arc<SubgroupClassTable>, m: Option<u64>) -> Result<BurnsideElement> {
    let g = table.group();
    let (c, h) = cyclic_extension(g)?;
    let order = h.order() as u64;
    let m = match m {
        Some(m) => m,
        None => {
            let (p, e) = *factorize(order).first().ok_or_else(|| shape("H is trivial"))?;
            p.pow(e)
        }
    };
    let n = order / m.max(1);
    if m <= 1 || n <= 1 || m * n != order || m.gcd(&n) != 1 {
        return Err(Error::Param(format!("m = {m} does not split |H| = {order} into coprime factors")));
    }
    let alpha = BigInt::from(m).extended_gcd(&BigInt::from(n)).x.mod_floor(&BigInt::from(n));
    let beta = (BigInt::from(1) - &alpha * m) / n;
    let gen = h.generators()[0];
    let cn = g.cyclic_subgroup(g.pow(gen, m as usize));
    let cm = g.cyclic_subgroup(g.pow(gen, n as usize));
    let mut theta = BurnsideElement::zero(table);
    add(&mut theta, 1, &g.whole())?;
    add(&mut theta, -1, &h)?;
    add(&mut theta, alpha.clone(), &cn)?;
    add(&mut theta, -alpha, &g.join(&c, &cn))?;
    add(&mut theta, beta.clone(), &cm)?;
    add(&mut theta, -beta, &g.join(&c, &cm))?;
    checked(theta)
}

/// `H − H' + Z·H' − Z·H` for a dihedral 2-group, with `H, H'` non-conjugate
/// non-central subgroups of order 2.
pub fn dihedral(table: &Arc<SubgroupClassTable>) -> Result<BurnsideElement> {
    let g = table.group();
    if !is_dihedral_2group(g) {
        return Err(shape("expected a dihedral 2-group of order at least 8"));
    }
    let n = g.order();
    let r = (0..n).find(|&a| g.element_order(a) == n / 2).expect("dihedral group has a rotation of index 2");
    let rot = g.cyclic_subgroup(r);
    let r_inv = g.inv(r);
    let s = (0..n)
        .find(|&s| !rot.contains(s) && g.element_order(s) == 2 && g.conj(s, r) == r_inv)
        .expect("dihedral group has a reflection");
    let h = g.cyclic_subgroup(s);
    let h2 = g.cyclic_subgroup(g.mul(r, s));
    let z = g.centre();
    let mut theta = BurnsideElement::zero(table);
    add(&mut theta, 1, &h)?;
    add(&mut theta, -1, &h2)?;
    add(&mut theta, 1, &g.join(&z, &h2))?;
    add(&mut theta, -1, &g.join(&z, &h))?;
    checked(theta)
}

struct HeisenbergFrame {
    p: u64,
    x: usize,
    y: usize,
    z: usize,
}

fn heisenberg_frame(g: &PermGroup) -> Result<HeisenbergFrame> {
    let p = is_heisenberg(g).ok_or_else(|| shape("expected a Heisenberg group of order p^3, p odd"))?;
    let centre = g.centre();
    let z = centre.generators().first().copied().ok_or_else(|| Error::Internal("trivial centre".into()))?;
    let y = (0..g.order()).find(|&a| !centre.contains(a)).expect("non-abelian");
    let yz = g.join(&g.cyclic_subgroup(y), &centre);
    let x = (0..g.order()).find(|&a| !yz.contains(a)).expect("|<y, z>| = p^2");
    Ok(HeisenbergFrame { p, x, y, z })
}

/// `⟨y⟩ − ⟨xy^j⟩ − ⟨y,z⟩ + ⟨xy^j,z⟩` for the Heisenberg group `⟨x, y⟩` with centre `⟨z⟩`.
pub fn heisenberg(table: &Arc<SubgroupClassTable>, j: u64) -> Result<BurnsideElement> {
    let g = table.group();
    let f = heisenberg_frame(g)?;
    if j == 0 || j > f.p {
        return Err(Error::Param(format!("j must lie in 1..={}", f.p)));
    }
    let xyj = g.mul(f.x, g.pow(f.y, j as usize));
    let z = g.cyclic_subgroup(f.z);
    let y = g.cyclic_subgroup(f.y);
    let w = g.cyclic_subgroup(xyj);
    let mut theta = BurnsideElement::zero(table);
    add(&mut theta, 1, &y)?;
    add(&mut theta, -1, &w)?;
    add(&mut theta, -1, &g.join(&y, &z))?;
    add(&mut theta, 1, &g.join(&w, &z))?;
    checked(theta)
}

pub fn heisenberg_family(table: &Arc<SubgroupClassTable>) -> Result<Vec<BurnsideElement>> {
    let p = heisenberg_frame(table.group())?.p;
    (1..=p).map(|j| heisenberg(table, j)).collect()
}

/// The relation of the subquotient `L/N` (of type `C_p × C_p`, dihedral or
/// Heisenberg), inflated to `L` and induced to `G`.
pub fn pgroup_bouc(table: &Arc<SubgroupClassTable>, l: &Subgroup, n: &Subgroup) -> Result<BurnsideElement> {
    let g = table.group();
    g.check(l)?;
    g.check(n)?;
    if !n.is_subgroup_of(l) || !g.is_normal_in(n, l) {
        return Err(Error::NotNormal);
    }
    let (lt, emb) = subgroup_table(table, l)?;
    let (qt, epi) = quotient_table(&lt, &emb.from_ambient(n)?)?;
    let q = qt.group();
    let base = if is_dihedral_2group(q) {
        dihedral(&qt)?
    } else if is_heisenberg(q).is_some() {
        heisenberg(&qt, 1)?
    } else if !q.is_cyclic() && is_prime_power(q.order() as u64).is_some_and(|(_, k)| k == 2) {
        cpcp(&qt)?
    } else {
        return Err(shape("L/N is not C_p x C_p, dihedral or Heisenberg"));
    };
    checked(base.inflate(&epi, &lt)?.induct(&emb, table)?)
}

fn is_elementary_abelian(g: &PermGroup, w: &Subgroup) -> Option<(u64, u32)> {
    let (l, d) = is_prime_power(w.order() as u64)?;
    (g.subgroup_is_abelian(w) && w.elements().all(|a| a == 0 || g.element_order(a) as u64 == l)).then_some((l, d))
}

/// A normal elementary abelian `W` of rank at least 2 with a complement acting faithfully.
pub fn find_serre_shape(g: &PermGroup) -> Result<Option<(Subgroup, Subgroup)>> {
    let whole = g.whole();
    for w in g.normal_subgroups()? {
        let Some((_, d)) = is_elementary_abelian(g, &w) else {
            continue;
        };
        if d < 2 || g.centralizer_in(&whole, &w) != w {
            continue;
        }
        let index = g.order() / w.order();
        let complement = g.all_subgroups()?.iter().find(|h| h.order() == index && g.intersection(h, &w).is_trivial());
        if let Some(h) = complement {
            return Ok(Some((w, h.clone())));
        }
    }
    Ok(None)
}

/// `G − H + Σ_U (H_U·U − H_U·W)` for `G = W ⋊ H`, with `U` running over
/// `H`-orbit representatives of hyperplanes of `W` and `H_U = N_H(U)`.
pub fn serre(table: &Arc<SubgroupClassTable>) -> Result<BurnsideElement> {
    let g = table.group();
    let (w, h) = find_serre_shape(g)?.ok_or_else(|| shape("expected W x| H with W elementary abelian of rank >= 2"))?;
    let (l, _) = is_elementary_abelian(g, &w).expect("checked by find_serre_shape");
    let hyperplanes: Vec<&Subgroup> =
        g.all_subgroups()?.iter().filter(|u| u.order() as u64 * l == w.order() as u64 && u.is_subgroup_of(&w)).collect();
    let mut seen = vec![false; hyperplanes.len()];
    let mut theta = BurnsideElement::zero(table);
    add(&mut theta, 1, &g.whole())?;
    add(&mut theta, -1, &h)?;
    for i in 0..hyperplanes.len() {
        if seen[i] {
            continue;
        }
        let u = hyperplanes[i];
        for x in h.elements() {
            let v = g.conjugate(u, x);
            if let Some(k) = hyperplanes.iter().position(|&y| *y == v) {
                seen[k] = true;
            }
        }
        let hu = g.normalizer_in(&h, u);
        add(&mut theta, 1, &g.join(&hu, u))?;
        add(&mut theta, -1, &g.join(&hu, &w))?;
    }
    checked(theta)
}

/// Orbits of hyperplanes used by [`serre`]; the count of `U` in the sum.
pub fn serre_orbit_count(g: &PermGroup) -> Result<Option<(u64, u32, usize)>> {
    let Some((w, h)) = find_serre_shape(g)? else {
        return Ok(None);
    };
    let (l, d) = is_elementary_abelian(g, &w).expect("checked by find_serre_shape");
    let hyperplanes: Vec<&Subgroup> =
        g.all_subgroups()?.iter().filter(|u| u.order() as u64 * l == w.order() as u64 && u.is_subgroup_of(&w)).collect();
    let mut orbit = vec![usize::MAX; hyperplanes.len()];
    let mut count = 0;
    for i in 0..hyperplanes.len() {
        if orbit[i] != usize::MAX {
            continue;
        }
        for x in h.elements() {
            let v = g.conjugate(hyperplanes[i], x);
            if let Some(k) = hyperplanes.iter().position(|&y| *y == v) {
                orbit[k] = count;
            }
        }
        count += 1;
    }
    Ok(Some((l, d, count)))
}

/// The relation for a soluble group with a faithful irreducible-type action:
/// the cyclic semidirect forms when the normal subgroup has prime order,
/// otherwise the elementary abelian form.
pub fn soluble_case3_relation(table: &Arc<SubgroupClassTable>) -> Result<Option<BurnsideElement>> {
    let g = table.group();
    if let Some((_, h)) = find_cyclic_extension(g)? {
        if h.is_trivial() {
            return Ok(None);
        }
        return Ok(Some(if is_prime_power(h.order() as u64).is_some() {
            g20_prime_power(table)?
        } else {
            g20_composite(table, None)?
        }));
    }
    if find_serre_shape(g)?.is_some() {
        return Ok(Some(serre(table)?));
    }
    Ok(None)
}

fn decomposition(g: &PermGroup) -> Result<QEDecomposition> {
    let dec = qe_decomposition(g)?
        .filter(|_| !g.is_cyclic())
        .ok_or_else(|| shape("expected a non-cyclic quasi-elementary group"))?;
    if !dec.squarefree {
        return Err(shape("|C| is not squarefree"));
    }
    if !dec.k.is_trivial() && !k_is_admissible(g, &dec)? {
        return Err(shape("K is neither D8 nor of normal p-rank one"));
    }
    Ok(dec)
}

/// `Σ_i n_i Σ_{U ≤ Ĉ} μ(|U|) H_i·U` for subgroups `H_i` meeting `Ĉ` trivially
/// with `Σ n_i / |H_i| = 0`.
pub fn mod_c(table: &Arc<SubgroupClassTable>, terms: &[(i64, Subgroup)]) -> Result<BurnsideElement> {
    let g = table.group();
    let dec = decomposition(g)?;
    mod_c_with(table, &dec, terms)
}

/// The Möbius sum of [`mod_c`] without the condition `Σ n_i / |H_i| = 0`; the
/// result is a relation exactly when that condition holds.
pub fn mod_c_sum(table: &Arc<SubgroupClassTable>, terms: &[(i64, Subgroup)]) -> Result<BurnsideElement> {
    let dec = decomposition(table.group())?;
    mobius_sum(table, &dec, terms)
}

fn mobius_sum(table: &Arc<SubgroupClassTable>, dec: &QEDecomposition, terms: &[(i64, Subgroup)]) -> Result<BurnsideElement> {
    let g = table.group();
    for (_, h) in terms {
        g.check(h)?;
        if !g.intersection(h, &dec.chat).is_trivial() {
            return Err(Error::Param("every H_i must meet C-hat trivially".into()));
        }
    }
    let order = dec.chat.order();
    let gen = dec.chat.elements().find(|&a| g.element_order(a) == order).expect("C-hat is cyclic");
    let mut theta = BurnsideElement::zero(table);
    for e in divisors(order as u64) {
        let mu = mobius(e);
        if mu == 0 {
            continue;
        }
        let u = g.cyclic_subgroup(g.pow(gen, order / e as usize));
        for (n, h) in terms {
            add(&mut theta, mu * n, &g.join(h, &u))?;
        }
    }
    Ok(theta)
}

fn mod_c_with(table: &Arc<SubgroupClassTable>, dec: &QEDecomposition, terms: &[(i64, Subgroup)]) -> Result<BurnsideElement> {
    let total: BigRational =
        terms.iter().map(|(n, h)| BigRational::new(BigInt::from(*n), BigInt::from(h.order()))).sum();
    if !total.is_zero() {
        return Err(Error::Param(format!("sum of n_i/|H_i| is {total}, not 0")));
    }
    checked(mobius_sum(table, dec, terms)?)
}

fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

/// `Σ_{U ≤ C} μ(|U|)(M·U − M'·U)` where `M ⊇ K_j` for all `j` and `M'` contains none.
pub fn case4a(table: &Arc<SubgroupClassTable>) -> Result<BurnsideElement> {
    let g = table.group();
    let dec = decomposition(g)?;
    if !dec.k.is_trivial() || dec.t() < 2 {
        return Err(shape("expected K = 1 and at least two primes in |C|"));
    }
    let sigs = signatures(g, &dec)?;
    let m = sigs.iter().find(|(_, s)| s.iter().all(|&b| b)).ok_or_else(|| shape("no M containing every K_j"))?;
    let m2 = sigs.iter().find(|(_, s)| s.iter().all(|&b| !b)).ok_or_else(|| shape("no M' avoiding every K_j"))?;
    mod_c_with(table, &dec, &[(1, m.0.clone()), (-1, m2.0.clone())])
}

/// Index-`p` subgroups `H_1, …, H_{p-1}` of `P` avoiding `K`, meeting `K_1` in distinct lines.
fn case4b_subgroups(g: &PermGroup, dec: &QEDecomposition) -> Result<Vec<Subgroup>> {
    let p = dec.p;
    if dec.k.order() as u64 != p {
        return Err(shape("expected |K| = p"));
    }
    let phi = g.frattini_of(&dec.p_sub)?;
    let k1 = &dec.kj[0];
    let mut lines: Vec<Subgroup> = Vec::new();
    let mut chosen = Vec::new();
    for m in g.maximal_subgroups_of(&dec.p_sub)? {
        if dec.k.is_subgroup_of(&m) {
            continue;
        }
        let line = g.join(&g.intersection(&m, k1), &phi);
        if !lines.contains(&line) {
            lines.push(line);
            chosen.push(m);
        }
    }
    if chosen.len() + 1 < p as usize {
        return Err(shape("P is not K x H with a two-dimensional Frattini image of K_1"));
    }
    chosen.truncate(p as usize - 1);
    Ok(chosen)
}

/// `Θ_i = Σ_{U ≤ C·K} μ(|U|)(H_1·U − H_i·U)` for `1 < i < p`.
pub fn case4b_family(table: &Arc<SubgroupClassTable>) -> Result<Vec<BurnsideElement>> {
    let g = table.group();
    let dec = decomposition(g)?;
    let hs = case4b_subgroups(g, &dec)?;
    hs.iter().skip(1).map(|hi| mod_c_with(table, &dec, &[(1, hs[0].clone()), (-1, hi.clone())])).collect()
}

pub fn case4b(table: &Arc<SubgroupClassTable>, i: usize) -> Result<BurnsideElement> {
    let family = case4b_family(table)?;
    let n = family.len();
    family.into_iter().nth(i.wrapping_sub(2)).ok_or_else(|| Error::Param(format!("i must lie in 2..={}", n + 1)))
}

/// `Σ_{C̃ ≤ Ĉ} μ(|C̃|)(C̃·H − C̃·H')` for `H, H'` in different components of the graph.
pub fn case4c(table: &Arc<SubgroupClassTable>, h: &Subgroup, h2: &Subgroup) -> Result<BurnsideElement> {
    let g = table.group();
    let dec = decomposition(g)?;
    let graph = gamma_graph(g, &dec)?;
    let comp = |x: &Subgroup| graph.vertices.iter().position(|v| v == x).map(|i| graph.component[i]);
    match (comp(h), comp(h2)) {
        (Some(a), Some(b)) if a != b => mod_c_with(table, &dec, &[(1, h.clone()), (-1, h2.clone())]),
        (Some(_), Some(_)) => Err(Error::Param("H and H' lie in the same component".into())),
        _ => Err(Error::Param("H and H' must be vertices of the graph".into())),
    }
}

/// One relation per component after the first, pairing its representative with the first.
pub fn case4c_family(table: &Arc<SubgroupClassTable>) -> Result<Vec<BurnsideElement>> {
    let g = table.group();
    let dec = decomposition(g)?;
    let graph = gamma_graph(g, &dec)?;
    let reps = graph.representatives();
    let h1 = graph.vertices[reps[0]].clone();
    reps.iter()
        .skip(1)
        .map(|&i| mod_c_with(table, &dec, &[(1, h1.clone()), (-1, graph.vertices[i].clone())]))
        .collect()
}

/// `Σ_{U ≤ Ĉ} μ(|U|)(U·H − U·H')` for `|H| = |H'|`, both meeting `Ĉ` trivially.
pub fn theorem_b3(table: &Arc<SubgroupClassTable>, h: &Subgroup, h2: &Subgroup) -> Result<BurnsideElement> {
    if h.order() != h2.order() {
        return Err(Error::Param("H and H' must have equal order".into()));
    }
    mod_c(table, &[(1, h.clone()), (-1, h2.clone())])
}

/// `theorem_b2` is the elementary abelian form.
pub fn theorem_b2(table: &Arc<SubgroupClassTable>) -> Result<BurnsideElement> {
    serre(table)
}
