//! Word-size modular arithmetic: products through `u128`, primality,
//! square roots and truncated polynomial products mod p.

use rand::Rng;

#[inline]
pub fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
pub fn addmod(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    if s >= p as u128 {
        (s - p as u128) as u64
    } else {
        s as u64
    }
}

#[inline]
pub fn submod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        p - (b - a)
    }
}

#[inline]
pub fn negmod(a: u64, p: u64) -> u64 {
    if a == 0 {
        0
    } else {
        p - a
    }
}

pub fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

/// Inverse by extended Euclid; `None` when `gcd(a, p) != 1`.
pub fn invmod(a: u64, p: u64) -> Option<u64> {
    let (mut r0, mut r1) = (p as i128, (a % p) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 != 1 {
        return None;
    }
    Some(s0.rem_euclid(p as i128) as u64)
}

/// Reduce a signed integer into `[0, p)`.
#[inline]
pub fn from_i64(a: i64, p: u64) -> u64 {
    (a as i128).rem_euclid(p as i128) as u64
}

/// Symmetric representative in `(-p/2, p/2]`.
#[inline]
pub fn to_signed(a: u64, p: u64) -> i64 {
    if a > p / 2 {
        -((p - a) as i64)
    } else {
        a as i64
    }
}

/// Deterministic Miller-Rabin for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for sp in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % sp == 0 {
            return n == sp;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Largest prime strictly below `n`.
pub fn prev_prime(n: u64) -> u64 {
    let mut c = n - 1;
    while !is_prime(c) {
        c -= 1;
    }
    c
}

/// `count` distinct primes descending from just below `start`.
pub fn primes_below(start: u64, count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut c = start;
    while out.len() < count {
        c = prev_prime(c);
        out.push(c);
    }
    out
}

/// Legendre symbol for odd prime p, as -1, 0 or 1.
pub fn legendre(a: u64, p: u64) -> i32 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    if powmod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Tonelli-Shanks; `None` for non-residues.
pub fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if p == 2 {
        return Some(a);
    }
    if legendre(a, p) != 1 {
        return None;
    }
    let mut q = p - 1;
    let mut s = 0;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while legendre(z, p) != -1 {
        z += 1;
    }
    let mut m = s;
    let mut c = powmod(z, q, p);
    let mut t = powmod(a, q, p);
    let mut r = powmod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mulmod(tt, tt, p);
            i += 1;
        }
        let b = powmod(c, 1u64 << (m - i - 1), p);
        m = i;
        c = mulmod(b, b, p);
        t = mulmod(t, c, p);
        r = mulmod(r, b, p);
    }
    Some(r)
}

/// Smallest quadratic non-residue.
pub fn non_residue(p: u64) -> u64 {
    (2..p).find(|&c| legendre(c, p) == -1).expect("odd prime has non-residues")
}

const KARATSUBA_CUTOFF: usize = 48;

/// Low `n` coefficients of `a * b` mod p.
pub fn mul_trunc(a: &[u64], b: &[u64], n: usize, p: u64) -> Vec<u64> {
    let a = &a[..a.len().min(n)];
    let b = &b[..b.len().min(n)];
    if a.is_empty() || b.is_empty() {
        return vec![0; n];
    }
    let mut full = mul_full(a, b, p);
    full.resize(n, 0);
    full.truncate(n);
    full
}

/// Full product mod p, Karatsuba above a small cutoff.
pub fn mul_full(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    if a.len().min(b.len()) <= KARATSUBA_CUTOFF {
        return schoolbook(a, b, p);
    }
    let m = a.len().max(b.len()) / 2;
    let (a0, a1) = a.split_at(m.min(a.len()));
    let (b0, b1) = b.split_at(m.min(b.len()));
    let z0 = mul_full(a0, b0, p);
    let z2 = mul_full(a1, b1, p);
    let sa = add_slices(a0, a1, p);
    let sb = add_slices(b0, b1, p);
    let z1 = mul_full(&sa, &sb, p);
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &v) in z0.iter().enumerate() {
        out[i] = addmod(out[i], v, p);
    }
    for (i, &v) in z2.iter().enumerate() {
        out[i + 2 * m] = addmod(out[i + 2 * m], v, p);
    }
    for (i, &v) in z1.iter().enumerate() {
        let mut mid = v;
        if i < z0.len() {
            mid = submod(mid, z0[i], p);
        }
        if i < z2.len() {
            mid = submod(mid, z2[i], p);
        }
        if mid != 0 {
            out[i + m] = addmod(out[i + m], mid, p);
        }
    }
    out
}

fn add_slices(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| addmod(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0), p))
        .collect()
}

fn schoolbook(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len() + b.len() - 1;
    let mut acc = vec![0u128; n];
    // products are < 2^126 for p < 2^63, so fold after every addition
    let pp = p as u128;
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            let s = acc[i + j] + (x as u128) * (y as u128);
            acc[i + j] = if s >= pp * pp { s % pp } else { s };
        }
    }
    acc.into_iter().map(|v| (v % pp) as u64).collect()
}

/// Uniform element of `[0, p)`.
pub fn random_mod<R: Rng + ?Sized>(rng: &mut R, p: u64) -> u64 {
    rng.gen_range(0..p)
}

/// Outcome of Gaussian elimination on an overdetermined system mod p.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinearSolution {
    Unique(Vec<u64>),
    /// rank below the number of unknowns
    Deficient(usize),
    Inconsistent,
}

/// Row-reduce `rows` in place and return the pivot columns.
pub fn row_reduce(rows: &mut [Vec<u64>], ncols: usize, p: u64) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(k) = (r..rows.len()).find(|&k| rows[k][c] != 0) else {
            continue;
        };
        rows.swap(r, k);
        let inv = invmod(rows[r][c], p).unwrap();
        for x in rows[r].iter_mut() {
            *x = mulmod(*x, inv, p);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c] == 0 {
                continue;
            }
            let f = row[c];
            for (x, &y) in row.iter_mut().zip(pivot_row.iter()).skip(c) {
                *x = submod(*x, mulmod(f, y, p), p);
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    pivots
}

pub fn rank_mod(rows: &[Vec<u64>], ncols: usize, p: u64) -> usize {
    let mut m = rows.to_vec();
    row_reduce(&mut m, ncols, p).len()
}

/// Solve `M x = rhs` with at least as many equations as unknowns.
pub fn solve_mod(rows: &[Vec<u64>], rhs: &[u64], p: u64) -> LinearSolution {
    let n = rows.first().map_or(0, |r| r.len());
    let mut m: Vec<Vec<u64>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, &b)| {
            let mut v = r.clone();
            v.push(b % p);
            v
        })
        .collect();
    let pivots = row_reduce(&mut m, n + 1, p);
    if pivots.contains(&n) {
        return LinearSolution::Inconsistent;
    }
    if pivots.len() < n {
        return LinearSolution::Deficient(pivots.len());
    }
    LinearSolution::Unique((0..n).map(|i| m[i][n]).collect())
}
