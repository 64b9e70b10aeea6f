//! Exact integer matrices: Hermite and Smith normal forms, kernels, lattice
//! membership and quotient invariants.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            write!(f, "[{}]", row.join(","))?;
        }
        write!(f, "]")
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows; every row must have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<Vec<BigInt>>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix");
            data.extend(r);
        }
        IntMatrix { rows: n, cols, data }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        IntMatrix::from_rows(cols, rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vec(&self, i: usize) -> Vec<BigInt> {
        self.row(i).to_vec()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row_vec(i)).collect()
    }

    pub fn is_zero_row(&self, i: usize) -> bool {
        self.row(i).iter().all(Zero::is_zero)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    /// Row vector times matrix.
    pub fn left_apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.rows, "dimension mismatch");
        let mut out = vec![BigInt::zero(); self.cols];
        for (i, a) in v.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                let b = self.get(i, j);
                if !b.is_zero() {
                    *o += a * b;
                }
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] -= q * row[src], touching columns `from..`.
    fn sub_row(&mut self, dst: usize, src: usize, q: &BigInt, from: usize) {
        if q.is_zero() {
            return;
        }
        for j in from..self.cols {
            let s = &self.data[src * self.cols + j];
            if !s.is_zero() {
                let t = q * s;
                self.data[dst * self.cols + j] -= t;
            }
        }
    }

    fn sub_col(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let s = &self.data[i * self.cols + src];
            if !s.is_zero() {
                let t = q * s;
                self.data[i * self.cols + dst] -= t;
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let x = std::mem::take(&mut self.data[i * self.cols + j]);
            self.data[i * self.cols + j] = -x;
        }
    }

    /// Determinant by fraction-free elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if m.get(k, k).is_zero() {
                match (k + 1..n).find(|&i| !m.get(i, k).is_zero()) {
                    Some(i) => {
                        m.swap_rows(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (m.get(i, j) * m.get(k, k) - m.get(i, k) * m.get(k, j)) / &prev;
                    m.set(i, j, v);
                }
            }
            prev = m.get(k, k).clone();
        }
        sign * m.get(n - 1, n - 1)
    }
}

/// Row-style Hermite normal form: returns `(H, U)` with `U·M = H` and `U` unimodular.
///
/// Pivots are positive and entries above a pivot lie in `[0, pivot)`.
pub fn hnf(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut h = m.clone();
    let mut u = IntMatrix::identity(m.rows);
    hnf_in_place(&mut h, Some(&mut u));
    (h, u)
}

/// Hermite normal form without the transform.
pub fn hnf_only(m: &IntMatrix) -> IntMatrix {
    let mut h = m.clone();
    hnf_in_place(&mut h, None);
    h
}

/// Returns the pivot columns.
fn hnf_in_place(h: &mut IntMatrix, mut u: Option<&mut IntMatrix>) -> Vec<usize> {
    let rows = h.rows;
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..h.cols {
        if r == rows {
            break;
        }
        let mut found = false;
        loop {
            let piv = (r..rows)
                .filter(|&i| !h.get(i, col).is_zero())
                .min_by(|&a, &b| h.get(a, col).abs().cmp(&h.get(b, col).abs()));
            let Some(piv) = piv else { break };
            found = true;
            h.swap_rows(r, piv);
            if let Some(u) = u.as_deref_mut() {
                u.swap_rows(r, piv);
            }
            let mut clean = true;
            for i in r + 1..rows {
                if h.get(i, col).is_zero() {
                    continue;
                }
                let q = h.get(i, col).div_floor(h.get(r, col));
                h.sub_row(i, r, &q, col);
                if let Some(u) = u.as_deref_mut() {
                    u.sub_row(i, r, &q, 0);
                }
                if !h.get(i, col).is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if !found {
            continue;
        }
        if h.get(r, col).is_negative() {
            h.negate_row(r);
            if let Some(u) = u.as_deref_mut() {
                u.negate_row(r);
            }
        }
        for i in 0..r {
            let q = h.get(i, col).div_floor(h.get(r, col));
            if !q.is_zero() {
                h.sub_row(i, r, &q, col);
                if let Some(u) = u.as_deref_mut() {
                    u.sub_row(i, r, &q, 0);
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    pivots
}

/// Finitely generated abelian group `Z^free_rank ⊕ Z/d_1 ⊕ … ⊕ Z/d_k` with `d_1 | d_2 | …`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AbelianInvariants {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl AbelianInvariants {
    pub fn trivial() -> Self {
        AbelianInvariants { free_rank: 0, torsion: Vec::new() }
    }

    pub fn free(rank: usize) -> Self {
        AbelianInvariants { free_rank: rank, torsion: Vec::new() }
    }

    /// `(Z/p)^k`.
    pub fn elementary(p: u64, k: usize) -> Self {
        AbelianInvariants { free_rank: 0, torsion: vec![BigInt::from(p); k] }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Checks `d_i > 1` and the divisibility chain.
    pub fn is_canonical(&self) -> bool {
        self.torsion.iter().all(|d| d > &BigInt::one())
            && self.torsion.windows(2).all(|w| (&w[1] % &w[0]).is_zero())
    }
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        let mut i = 0;
        while i < self.torsion.len() {
            let d = &self.torsion[i];
            let k = self.torsion[i..].iter().take_while(|x| *x == d).count();
            parts.push(if k == 1 { format!("Z/{d}") } else { format!("(Z/{d})^{k}") });
            i += k;
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// Smith normal form `U·M·V = D`.
#[derive(Clone, Debug)]
pub struct Snf {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
    /// Diagonal entries `d_1 | d_2 | … | d_rank`, all positive.
    pub diagonal: Vec<BigInt>,
    pub rank: usize,
}

impl Snf {
    /// Invariants of `Z^cols / rowspan(M)`.
    pub fn cokernel(&self) -> AbelianInvariants {
        AbelianInvariants {
            free_rank: self.d.cols - self.rank,
            torsion: self.diagonal.iter().filter(|d| !d.is_one()).cloned().collect(),
        }
    }

    /// Image of `x ∈ Z^cols` in the cokernel: torsion coordinates (reduced mod
    /// each `d_i > 1`) followed by free coordinates.
    pub fn cokernel_coordinates(&self, x: &[BigInt]) -> Vec<BigInt> {
        let y = self.v.left_apply(x);
        let mut out = Vec::new();
        for (i, d) in self.diagonal.iter().enumerate() {
            if !d.is_one() {
                out.push(y[i].mod_floor(d));
            }
        }
        out.extend(y[self.rank..].iter().cloned());
        out
    }
}

pub fn snf(m: &IntMatrix) -> Snf {
    let rows = m.rows;
    let cols = m.cols;
    let mut d = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let mut rank = 0;
    for t in 0..rows.min(cols) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    let x = d.get(i, j);
                    if !x.is_zero() && best.map_or(true, |(bi, bj)| x.abs() < d.get(bi, bj).abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else { break };
            d.swap_rows(t, bi);
            u.swap_rows(t, bi);
            d.swap_cols(t, bj);
            v.swap_cols(t, bj);
            let mut clean = true;
            for i in t + 1..rows {
                if d.get(i, t).is_zero() {
                    continue;
                }
                let q = d.get(i, t).div_floor(d.get(t, t));
                d.sub_row(i, t, &q, 0);
                u.sub_row(i, t, &q, 0);
                clean &= d.get(i, t).is_zero();
            }
            for j in t + 1..cols {
                if d.get(t, j).is_zero() {
                    continue;
                }
                let q = d.get(t, j).div_floor(d.get(t, t));
                d.sub_col(j, t, &q);
                v.sub_col(j, t, &q);
                clean &= d.get(t, j).is_zero();
            }
            if !clean {
                continue;
            }
            let pivot = d.get(t, t).clone();
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !(d.get(i, j) % &pivot).is_zero()));
            match bad {
                Some(i) => {
                    let minus_one = BigInt::from(-1);
                    d.sub_row(t, i, &minus_one, 0);
                    u.sub_row(t, i, &minus_one, 0);
                }
                None => break,
            }
        }
        if d.get(t, t).is_zero() {
            break;
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
        rank = t + 1;
    }
    let diagonal = (0..rank).map(|i| d.get(i, i).clone()).collect();
    Snf { d, u, v, diagonal, rank }
}

/// A lattice in `Z^n` spanned by the rows of a matrix.
#[derive(Clone, Debug)]
pub struct LatticeBasis {
    generators: IntMatrix,
    hnf: IntMatrix,
    transform: IntMatrix,
    pivots: Vec<usize>,
}

impl LatticeBasis {
    pub fn new(generators: IntMatrix) -> Self {
        let mut h = generators.clone();
        let mut u = IntMatrix::identity(generators.rows);
        let pivots = hnf_in_place(&mut h, Some(&mut u));
        LatticeBasis { generators, hnf: h, transform: u, pivots }
    }

    pub fn from_rows(dim: usize, rows: Vec<Vec<BigInt>>) -> Self {
        LatticeBasis::new(IntMatrix::from_rows(dim, rows))
    }

    pub fn empty(dim: usize) -> Self {
        LatticeBasis::new(IntMatrix::zeros(0, dim))
    }

    /// Builds the lattice directly from its HNF basis, skipping the transform.
    pub fn from_generators_reduced(generators: &IntMatrix) -> Self {
        let mut h = generators.clone();
        let pivots = hnf_in_place(&mut h, None);
        let rank = pivots.len();
        let basis = IntMatrix::from_rows(h.cols, (0..rank).map(|i| h.row_vec(i)).collect());
        LatticeBasis::new(basis)
    }

    pub fn ambient_dim(&self) -> usize {
        self.generators.cols
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// The rows this lattice was built from.
    pub fn generators(&self) -> &IntMatrix {
        &self.generators
    }

    /// The nonzero HNF rows: a canonical basis.
    pub fn basis_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rank()).map(|i| self.hnf.row_vec(i)).collect()
    }

    pub fn basis_matrix(&self) -> IntMatrix {
        IntMatrix::from_rows(self.ambient_dim(), self.basis_rows())
    }

    /// Coefficients of `v` in terms of the HNF basis rows, if `v` is in the lattice.
    pub fn coordinates_in_hnf(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(v.len(), self.ambient_dim(), "dimension mismatch");
        let mut rest = v.to_vec();
        let mut y = Vec::with_capacity(self.rank());
        for (i, &col) in self.pivots.iter().enumerate() {
            if rest[..col].iter().any(|x| !x.is_zero()) {
                return None;
            }
            let p = self.hnf.get(i, col);
            let (q, r) = rest[col].div_rem(p);
            if !r.is_zero() {
                return None;
            }
            if !q.is_zero() {
                for (j, x) in rest.iter_mut().enumerate().skip(col) {
                    let h = self.hnf.get(i, j);
                    if !h.is_zero() {
                        *x -= &q * h;
                    }
                }
            }
            y.push(q);
        }
        rest.iter().all(Zero::is_zero).then_some(y)
    }

    /// Integer coefficients of `v` in terms of the generating rows, if `v` lies in the span.
    pub fn membership(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        let y = self.coordinates_in_hnf(v)?;
        let mut full = y;
        full.resize(self.generators.rows, BigInt::zero());
        Some(self.transform.left_apply(&full))
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.coordinates_in_hnf(v).is_some()
    }
}

/// Saturated basis of the left kernel `{x : x·M = 0}`, HNF-reduced.
pub fn integer_kernel(m: &IntMatrix) -> LatticeBasis {
    let (h, u) = hnf(m);
    let rows: Vec<Vec<BigInt>> = (0..m.rows).filter(|&i| h.is_zero_row(i)).map(|i| u.row_vec(i)).collect();
    let k = IntMatrix::from_rows(m.rows, rows);
    LatticeBasis::from_generators_reduced(&k)
}

/// Invariants of `span(ambient) / span(sub)`.
pub fn quotient_invariants(ambient: &LatticeBasis, sub: &LatticeBasis) -> Result<AbelianInvariants> {
    Ok(snf(&relative_coordinates(ambient, sub)?).cokernel())
}

/// Rows of `sub`'s basis written in `ambient`'s HNF basis.
pub fn relative_coordinates(ambient: &LatticeBasis, sub: &LatticeBasis) -> Result<IntMatrix> {
    if ambient.ambient_dim() != sub.ambient_dim() {
        return Err(Error::Lattice("ambient dimensions differ".into()));
    }
    let rows = sub
        .basis_rows()
        .iter()
        .map(|r| {
            ambient
                .coordinates_in_hnf(r)
                .ok_or_else(|| Error::Lattice("sublattice is not contained in the ambient lattice".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(IntMatrix::from_rows(ambient.rank(), rows))
}

pub fn to_big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}
