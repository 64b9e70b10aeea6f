//! Structure of a quasi-elementary group `G = C ⋊ P`.

use crate::error::{Error, Result};
use crate::group::{PermGroup, Subgroup};
use crate::util::{factorize, is_squarefree};

/// The data `C, P, K, K_j, K̃_j, C_K, Ĉ, Z_p` of a `p`-quasi-elementary group.
#[derive(Clone, Debug)]
pub struct QEDecomposition {
    pub p: u64,
    /// Normal cyclic subgroup of order prime to `p`.
    pub c: Subgroup,
    /// A Sylow `p`-subgroup (a complement to `C`).
    pub p_sub: Subgroup,
    /// The primes `l_1 < … < l_t` dividing `|C|`.
    pub primes: Vec<u64>,
    /// Sylow `l_j`-subgroup of `C`, one per prime.
    pub c_parts: Vec<Subgroup>,
    /// Whether `|C|` is squarefree.
    pub squarefree: bool,
    /// Kernel of `P -> Aut C`.
    pub k: Subgroup,
    /// The order-`p` subgroup of `Z(K)`, when `K` is nontrivial.
    pub zp: Option<Subgroup>,
    /// `K` if cyclic, else a cyclic index-`p` subgroup of `K` normal in `G`.
    pub c_k: Option<Subgroup>,
    /// `C · C_K`.
    pub chat: Subgroup,
    /// `K_j = ∩_{i≠j} ker(P -> Aut C_{l_i})`.
    pub kj: Vec<Subgroup>,
    /// `K̃_j = K_j ∩ ker(P -> Aut C_K)`.
    pub ktilde: Vec<Subgroup>,
}

impl QEDecomposition {
    pub fn t(&self) -> usize {
        self.primes.len()
    }

    pub fn k_is_trivial(&self) -> bool {
        self.k.is_trivial()
    }
}

/// Decomposes `G` if it is quasi-elementary and nontrivial. For cyclic groups
/// the smallest prime divisor is used.
pub fn qe_decomposition(g: &PermGroup) -> Result<Option<QEDecomposition>> {
    if g.order() == 1 {
        return Ok(None);
    }
    let whole = g.whole();
    let Some(&p) = g.quasi_elementary_primes(&whole).first() else {
        return Ok(None);
    };
    let c = g.quasi_elementary_core(&whole, p).ok_or_else(|| Error::Internal("quasi-elementary core vanished".into()))?;
    let p_sub = g.sylow_of(&whole, p)?;
    let gen = c.generators().first().copied().unwrap_or(0);
    let factors = factorize(c.order() as u64);
    let primes: Vec<u64> = factors.iter().map(|&(l, _)| l).collect();
    let c_parts: Vec<Subgroup> = factors
        .iter()
        .map(|&(l, e)| {
            let part = (l as usize).pow(e);
            g.cyclic_subgroup(g.pow(gen, c.order() / part))
        })
        .collect();
    let k = g.centralizer_in(&p_sub, &c);
    let (zp, c_k) = if k.is_trivial() {
        (None, None)
    } else {
        let zk = g.centre_of(&k);
        let z = zk.elements().find(|&a| g.element_order(a) as u64 == p).expect("a p-group has central elements of order p");
        let zp = g.cyclic_subgroup(z);
        let c_k = if g.subgroup_is_cyclic(&k) {
            Some(k.clone())
        } else {
            g.all_subgroups()?
                .iter()
                .find(|h| {
                    h.order() * p as usize == k.order()
                        && h.is_subgroup_of(&k)
                        && g.subgroup_is_cyclic(h)
                        && g.is_normal(h)
                })
                .cloned()
        };
        (Some(zp), c_k)
    };
    let chat = match &c_k {
        Some(ck) => g.join(&c, ck),
        None => c.clone(),
    };
    let kernels: Vec<Subgroup> = c_parts.iter().map(|cl| g.centralizer_in(&p_sub, cl)).collect();
    let kj: Vec<Subgroup> = (0..primes.len())
        .map(|j| {
            (0..primes.len()).filter(|&i| i != j).fold(p_sub.clone(), |acc, i| g.intersection(&acc, &kernels[i]))
        })
        .collect();
    let ck_kernel = match &c_k {
        Some(ck) => g.centralizer_in(&p_sub, ck),
        None => p_sub.clone(),
    };
    let ktilde = kj.iter().map(|x| g.intersection(x, &ck_kernel)).collect();
    Ok(Some(QEDecomposition {
        p,
        squarefree: is_squarefree(c.order() as u64),
        c,
        p_sub,
        primes,
        c_parts,
        k,
        zp,
        c_k,
        chat,
        kj,
        ktilde,
    }))
}

/// For each index-`p` subgroup `M` of `P`, the vector `[K_j ⊆ M]`.
pub fn signatures(g: &PermGroup, dec: &QEDecomposition) -> Result<Vec<(Subgroup, Vec<bool>)>> {
    Ok(g.maximal_subgroups_of(&dec.p_sub)?
        .into_iter()
        .map(|m| {
            let bits = dec.kj.iter().map(|kj| kj.is_subgroup_of(&m)).collect();
            (m, bits)
        })
        .collect())
}

/// Which condition produced an edge of the graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeReason {
    ProperJoin,
    SameIntersection,
    DihedralOrHeisenberg,
}

impl EdgeReason {
    pub fn as_str(self) -> &'static str {
        match self {
            EdgeReason::ProperJoin => "proper-join",
            EdgeReason::SameIntersection => "same-intersection",
            EdgeReason::DihedralOrHeisenberg => "dihedral-or-heisenberg",
        }
    }
}

/// Graph on the largest subgroups of `P` avoiding `Z_p`.
#[derive(Clone, Debug)]
pub struct GammaGraph {
    pub vertices: Vec<Subgroup>,
    pub edges: Vec<(usize, usize, EdgeReason)>,
    /// Component index of each vertex, numbered in order of first appearance.
    pub component: Vec<usize>,
    pub components: usize,
}

impl GammaGraph {
    /// One vertex per component, the first in vertex order.
    pub fn representatives(&self) -> Vec<usize> {
        (0..self.components).map(|c| self.component.iter().position(|&x| x == c).expect("component is nonempty")).collect()
    }
}

pub fn gamma_graph(g: &PermGroup, dec: &QEDecomposition) -> Result<GammaGraph> {
    let zp = dec.zp.as_ref().ok_or_else(|| Error::Shape("the graph needs a nontrivial kernel K".into()))?;
    let z = zp.generators()[0];
    let candidates: Vec<&Subgroup> =
        g.all_subgroups()?.iter().filter(|h| h.is_subgroup_of(&dec.p_sub) && !h.contains(z)).collect();
    let top = candidates.iter().map(|h| h.order()).max().unwrap_or(1);
    let vertices: Vec<Subgroup> = candidates.into_iter().filter(|h| h.order() == top).cloned().collect();
    let n = vertices.len();
    let mut edges = Vec::new();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for a in 0..n {
        for b in a + 1..n {
            if let Some(reason) = edge_reason(g, dec, &vertices[a], &vertices[b])? {
                edges.push((a, b, reason));
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra != rb {
                    parent[ra.max(rb)] = ra.min(rb);
                }
            }
        }
    }
    let mut component = vec![usize::MAX; n];
    let mut label = Vec::new();
    for v in 0..n {
        let r = find(&mut parent, v);
        let c = match label.iter().position(|&x| x == r) {
            Some(c) => c,
            None => {
                label.push(r);
                label.len() - 1
            }
        };
        component[v] = c;
    }
    Ok(GammaGraph { vertices, edges, component, components: label.len() })
}

fn edge_reason(g: &PermGroup, dec: &QEDecomposition, h: &Subgroup, h2: &Subgroup) -> Result<Option<EdgeReason>> {
    let joined = g.join(h, h2);
    if joined != dec.p_sub {
        return Ok(Some(EdgeReason::ProperJoin));
    }
    if dec.t() > 1 && dec.ktilde.iter().any(|kt| g.intersection(h, kt) == g.intersection(h2, kt)) {
        return Ok(Some(EdgeReason::SameIntersection));
    }
    let d = g.intersection(h, h2);
    let p = dec.p as usize;
    if h.order() == p * d.order() && h2.order() == p * d.order() && g.is_normal_in(&d, &joined) {
        let (jg, emb) = g.subgroup_group(&joined)?;
        let (q, _) = jg.quotient(&emb.from_ambient(&d)?)?;
        if is_dihedral_2group(&q) || is_heisenberg(&q).is_some() {
            return Ok(Some(EdgeReason::DihedralOrHeisenberg));
        }
    }
    Ok(None)
}

/// `K ≅ D8`, or `K` has no normal subgroup `C_p × C_p`.
pub fn k_is_admissible(g: &PermGroup, dec: &QEDecomposition) -> Result<bool> {
    let k = &dec.k;
    if k.order() == 8 {
        let (kg, _) = g.subgroup_group(k)?;
        if is_dihedral_2group(&kg) {
            return Ok(true);
        }
    }
    let p2 = (dec.p * dec.p) as usize;
    Ok(!g
        .all_subgroups()?
        .iter()
        .any(|h| h.order() == p2 && h.is_subgroup_of(k) && !g.subgroup_is_cyclic(h) && g.is_normal_in(h, k)))
}

/// Dihedral of order `2^n ≥ 8`.
pub fn is_dihedral_2group(q: &PermGroup) -> bool {
    let n = q.order();
    if n < 8 || !n.is_power_of_two() {
        return false;
    }
    let Some(r) = (0..n).find(|&a| q.element_order(a) == n / 2) else {
        return false;
    };
    let rot = q.cyclic_subgroup(r);
    let r_inv = q.inv(r);
    (0..n).any(|s| !rot.contains(s) && q.element_order(s) == 2 && q.conj(s, r) == r_inv)
}

/// `Some(p)` for the Heisenberg group of order `p^3`, `p` odd.
pub fn is_heisenberg(q: &PermGroup) -> Option<u64> {
    let (p, k) = crate::util::is_prime_power(q.order() as u64)?;
    (k == 3 && p > 2 && !q.is_abelian() && q.exponent() as u64 == p).then_some(p)
}
