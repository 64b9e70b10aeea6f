//! Small number-theoretic helpers.

/// Prime factorization by trial division, primes ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n) == [(n, 1)]
}

/// `Some((p, k))` when `n = p^k` with `k >= 1`.
pub fn is_prime_power(n: u64) -> Option<(u64, u32)> {
    match factorize(n).as_slice() {
        [(p, k)] => Some((*p, *k)),
        _ => None,
    }
}

pub fn is_squarefree(n: u64) -> bool {
    factorize(n).iter().all(|&(_, e)| e == 1)
}

/// The Möbius function.
pub fn mobius(n: u64) -> i64 {
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Largest power of `p` dividing `n`.
pub fn p_part(mut n: u64, p: u64) -> u64 {
    let mut r = 1;
    while n % p == 0 {
        n /= p;
        r *= p;
    }
    r
}

pub fn valuation(mut n: u64, p: u64) -> u32 {
    let mut v = 0;
    while n > 0 && n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    (2..=n).filter(|&k| is_prime(k)).collect()
}
