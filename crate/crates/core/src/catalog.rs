//! Named groups and the catalog grammar.
//!
//! ```text
//! spec    := 'sd:' cyclics ':' spec ':' action
//!          | 'wr:' spec ':' 'C' n
//!          | factor ('x' factor)*
//! factor  := '(' spec ')' | atom
//! atom    := C<n> | D<2n> | Q<2^k> | SD<2^k> | Heis<p> | A<n> | S<n>
//!          | SL(2,3) | GL(2,3) | F20 | F21
//! action  := per P-generator images separated by ';', each a ','-list with
//!            one entry per cyclic factor: an exponent k (e_j -> e_j^k) or a
//!            vector [a_1 .. a_m] (e_j -> e_1^a_1 .. e_m^a_m)
//! ```
//!
//! Generators are listed factor by factor, so `C4xC2` has generators
//! `a` (order 4) then `b` (order 2), and `D<2n>` has the rotation then a reflection.

use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::group::{direct_product, semidirect_product, PermGroup, Permutation};

pub fn cyclic(n: usize) -> Result<PermGroup> {
    if n == 0 {
        return Err(Error::Parse("C0 is not a group".into()));
    }
    if n == 1 {
        return PermGroup::from_generators(1, vec![]);
    }
    let images: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
    PermGroup::from_generators(n, vec![Permutation::from_images(images)?])
}

/// Dihedral group of order `order`.
pub fn dihedral(order: usize) -> Result<PermGroup> {
    if order == 0 || order % 2 != 0 {
        return Err(Error::Parse(format!("D{order}: dihedral order must be even")));
    }
    let n = order / 2;
    match n {
        1 => cyclic(2),
        2 => direct_product(&cyclic(2)?, &cyclic(2)?),
        _ => {
            let r = Permutation::from_images((0..n).map(|i| (i + 1) % n).collect())?;
            let s = Permutation::from_images((0..n).map(|i| (n - i) % n).collect())?;
            PermGroup::from_generators(n, vec![r, s])
        }
    }
}

/// `<x, y | x^n, y^2 = x^e, y x y^-1 = x^r>` in its regular representation.
pub fn metacyclic(n: usize, r: usize, e: usize) -> Result<PermGroup> {
    let point = |i: usize, j: usize| i % n + n * j;
    let rj = |j: usize| if j == 0 { 1 } else { r };
    let mut x = vec![0; 2 * n];
    let mut y = vec![0; 2 * n];
    for j in 0..2 {
        for i in 0..n {
            x[point(i, j)] = point(i + rj(j), j);
            y[point(i, j)] = if j == 0 { point(i, 1) } else { point(i + e, 0) };
        }
    }
    let g = PermGroup::from_generators(2 * n, vec![Permutation::from_images(x)?, Permutation::from_images(y)?])?;
    if g.order() != 2 * n {
        return Err(Error::Shape(format!("metacyclic data ({n},{r},{e}) is inconsistent")));
    }
    Ok(g)
}

fn two_power(order: usize, min: usize, name: &str) -> Result<usize> {
    if order < min || !order.is_power_of_two() {
        return Err(Error::Parse(format!("{name}{order}: order must be a power of 2 at least {min}")));
    }
    Ok(order)
}

/// Generalized quaternion group of order `order`.
pub fn quaternion(order: usize) -> Result<PermGroup> {
    let n = two_power(order, 8, "Q")? / 2;
    metacyclic(n, n - 1, n / 2)
}

/// Semidihedral group of order `order`.
pub fn semidihedral(order: usize) -> Result<PermGroup> {
    let n = two_power(order, 16, "SD")? / 2;
    metacyclic(n, n / 2 - 1, 0)
}

/// Heisenberg group of order `p^3` on triples `(a, b, c)` with
/// `(a,b,c)(a',b',c') = (a+a', b+b', c+c'+ab')`, generated by `x = (1,0,0)`, `y = (0,1,0)`.
pub fn heisenberg(p: usize) -> Result<PermGroup> {
    if !crate::util::is_prime(p as u64) {
        return Err(Error::Parse(format!("Heis{p}: p must be prime")));
    }
    let pt = |a: usize, b: usize, c: usize| a % p + p * (b % p) + p * p * (c % p);
    let n = p * p * p;
    let mut x = vec![0; n];
    let mut y = vec![0; n];
    for a in 0..p {
        for b in 0..p {
            for c in 0..p {
                x[pt(a, b, c)] = pt(a + 1, b, c);
                y[pt(a, b, c)] = pt(a, b + 1, c + a);
            }
        }
    }
    PermGroup::from_generators(n, vec![Permutation::from_images(x)?, Permutation::from_images(y)?])
}

pub fn symmetric(n: usize) -> Result<PermGroup> {
    if n <= 1 {
        return cyclic(1);
    }
    let cycle = Permutation::from_images((0..n).map(|i| (i + 1) % n).collect())?;
    let swap = Permutation::from_cycles(n, &[vec![0, 1]])?;
    if n == 2 {
        return PermGroup::from_generators(2, vec![swap]);
    }
    PermGroup::from_generators(n, vec![cycle, swap])
}

pub fn alternating(n: usize) -> Result<PermGroup> {
    if n <= 2 {
        return cyclic(1);
    }
    let gens = (2..n).map(|i| Permutation::from_cycles(n, &[vec![0, 1, i]])).collect::<Result<Vec<_>>>()?;
    PermGroup::from_generators(n, gens)
}

/// Matrix group over `F_3` acting on the 8 nonzero row vectors.
fn f3_matrix_group(mats: &[[[usize; 2]; 2]]) -> Result<PermGroup> {
    let vectors: Vec<(usize, usize)> = (0..9).map(|k| (k % 3, k / 3)).filter(|&v| v != (0, 0)).collect();
    let pos = |v: (usize, usize)| vectors.iter().position(|&w| w == v).expect("nonzero vector");
    let gens = mats
        .iter()
        .map(|m| {
            let images = vectors
                .iter()
                .map(|&(a, b)| pos(((a * m[0][0] + b * m[1][0]) % 3, (a * m[0][1] + b * m[1][1]) % 3)))
                .collect();
            Permutation::from_images(images)
        })
        .collect::<Result<Vec<_>>>()?;
    PermGroup::from_generators(8, gens)
}

pub fn sl23() -> Result<PermGroup> {
    f3_matrix_group(&[[[1, 1], [0, 1]], [[1, 0], [1, 1]]])
}

pub fn gl23() -> Result<PermGroup> {
    f3_matrix_group(&[[[1, 1], [0, 1]], [[1, 0], [1, 1]], [[2, 0], [0, 1]]])
}

/// `A ≀ C_n` in the imprimitive action on `n` blocks.
pub fn wreath(a: &PermGroup, n: usize) -> Result<PermGroup> {
    let d = a.degree();
    let total = d * n;
    let mut gens: Vec<Permutation> = a.generators().iter().map(|g| g.shifted(0, total)).collect();
    if n > 1 {
        gens.push(Permutation::from_images((0..total).map(|i| (i + d) % total).collect())?);
    }
    PermGroup::from_generators(total, gens)
}

/// `C_{n_1} x … x C_{n_m} ⋊ P` where `action[k][j]` gives the image of `e_j`
/// under generator `k` of `P` as exponents of `e_1 … e_m`.
pub fn semidirect_cyclic(moduli: &[usize], p: &PermGroup, action: &[Vec<Vec<i64>>]) -> Result<PermGroup> {
    let mut c = cyclic(1)?;
    for &m in moduli {
        if m < 2 {
            return Err(Error::Parse("cyclic factors of the normal subgroup must be nontrivial".into()));
        }
        c = direct_product(&c, &cyclic(m)?)?;
    }
    let cg = c.generator_indices().to_vec();
    let word = |exps: &[i64]| -> usize {
        exps.iter().zip(&cg).fold(0, |acc, (&e, &g)| {
            let o = c.element_order(g) as i64;
            c.mul(acc, c.pow(g, e.rem_euclid(o) as usize))
        })
    };
    let images: Vec<Vec<usize>> = action.iter().map(|per| per.iter().map(|v| word(v)).collect()).collect();
    semidirect_product(&c, p, &images)
}

/// Parses a catalog name into a permutation group.
pub fn parse_group_spec(text: &str) -> Result<PermGroup> {
    // Whitespace is insignificant except as a separator inside `[..]` vectors.
    let mut s = String::new();
    let mut depth = 0;
    for ch in text.trim().chars() {
        match ch {
            '[' => depth += 1,
            ']' => depth -= 1,
            c if c.is_whitespace() && depth == 0 => continue,
            _ => {}
        }
        s.push(ch);
    }
    if s.is_empty() {
        return Err(Error::Parse("empty group spec".into()));
    }
    parse_spec(&s)
}

fn split_top(s: &str, sep: char) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            c if c == sep && depth == 0 => {
                parts.push(&s[start..i]);
                start = i + ch.len_utf8();
            }
            _ => {}
        }
    }
    parts.push(&s[start..]);
    parts
}

fn parse_spec(s: &str) -> Result<PermGroup> {
    if let Some(rest) = s.strip_prefix("sd:") {
        let parts = split_top(rest, ':');
        if parts.len() != 3 {
            return Err(Error::Parse(format!("sd needs three ':'-separated parts, got {s:?}")));
        }
        let moduli = split_top(parts[0], 'x')
            .into_iter()
            .map(|f| f.strip_prefix('C').and_then(|n| n.parse::<usize>().ok()))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::Parse(format!("normal factor must be a product of C<n>: {:?}", parts[0])))?;
        let p = parse_spec(parts[1])?;
        let action = parse_action(parts[2], moduli.len())?;
        return semidirect_cyclic(&moduli, &p, &action);
    }
    if let Some(rest) = s.strip_prefix("wr:") {
        let parts = split_top(rest, ':');
        let n = match parts.as_slice() {
            [_, c] => c.strip_prefix('C').and_then(|n| n.parse::<usize>().ok()),
            _ => None,
        }
        .ok_or_else(|| Error::Parse(format!("expected wr:<spec>:C<n>, got {s:?}")))?;
        return wreath(&parse_spec(parts[0])?, n);
    }
    let factors = split_top(s, 'x');
    let mut g: Option<PermGroup> = None;
    for f in factors {
        let h = parse_factor(f)?;
        g = Some(match g {
            None => h,
            Some(prev) => direct_product(&prev, &h)?,
        });
    }
    g.ok_or_else(|| Error::Parse("empty product".into()))
}

fn parse_action(s: &str, factors: usize) -> Result<Vec<Vec<Vec<i64>>>> {
    split_top(s, ';')
        .into_iter()
        .map(|per_gen| {
            let entries = split_top(per_gen, ',');
            if entries.len() != factors {
                return Err(Error::Parse(format!(
                    "action {per_gen:?} has {} entries for {factors} factors",
                    entries.len()
                )));
            }
            entries
                .into_iter()
                .enumerate()
                .map(|(j, e)| {
                    if let Some(body) = e.strip_prefix('[').and_then(|b| b.strip_suffix(']')) {
                        let v = body
                            .split(|c: char| c.is_whitespace() || c == '|')
                            .filter(|t| !t.is_empty())
                            .map(|t| t.parse::<i64>().map_err(|_| Error::Parse(format!("bad exponent {t:?}"))))
                            .collect::<Result<Vec<_>>>()?;
                        if v.len() != factors {
                            return Err(Error::Parse(format!("vector {e:?} needs {factors} entries")));
                        }
                        Ok(v)
                    } else {
                        let k = e.parse::<i64>().map_err(|_| Error::Parse(format!("bad exponent {e:?}")))?;
                        let mut v = vec![0; factors];
                        v[j] = k;
                        Ok(v)
                    }
                })
                .collect()
        })
        .collect()
}

fn number(s: &str, name: &str) -> Result<usize> {
    s.parse().map_err(|_| Error::Parse(format!("bad number in {name}{s}")))
}

fn parse_factor(f: &str) -> Result<PermGroup> {
    if let Some(inner) = f.strip_prefix('(').and_then(|x| x.strip_suffix(')')) {
        return parse_spec(inner);
    }
    match f {
        "SL(2,3)" => return sl23(),
        "GL(2,3)" => return gl23(),
        "F20" => return parse_spec("sd:C5:C4:2"),
        "F21" => return parse_spec("sd:C7:C3:2"),
        _ => {}
    }
    if let Some(n) = f.strip_prefix("Heis") {
        return heisenberg(number(n, "Heis")?);
    }
    if let Some(n) = f.strip_prefix("SD") {
        return semidihedral(number(n, "SD")?);
    }
    if let Some(n) = f.strip_prefix('Q') {
        return quaternion(number(n, "Q")?);
    }
    if let Some(n) = f.strip_prefix('D') {
        return dihedral(number(n, "D")?);
    }
    if let Some(n) = f.strip_prefix('C') {
        return cyclic(number(n, "C")?);
    }
    if let Some(n) = f.strip_prefix('A') {
        return alternating(number(n, "A")?);
    }
    if let Some(n) = f.strip_prefix('S') {
        return symmetric(number(n, "S")?);
    }
    Err(Error::Parse(format!("unknown group {f:?}")))
}

/// A group given by catalog name or by a file in the group text format.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupSpec {
    Name(String),
    File(PathBuf),
}

impl GroupSpec {
    /// Treats arguments naming an existing file as files, everything else as catalog names.
    pub fn from_arg(arg: &str) -> GroupSpec {
        let path = Path::new(arg);
        if path.is_file() {
            GroupSpec::File(path.to_path_buf())
        } else {
            GroupSpec::Name(arg.to_string())
        }
    }

    pub fn load(&self) -> Result<PermGroup> {
        match self {
            GroupSpec::Name(n) => parse_group_spec(n),
            GroupSpec::File(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| Error::Parse(format!("{}: {e}", p.display())))?;
                PermGroup::parse_text(&text)
            }
        }
    }

    pub fn label(&self) -> String {
        match self {
            GroupSpec::Name(n) => n.clone(),
            GroupSpec::File(p) => p.display().to_string(),
        }
    }
}
