//! Coset representatives of Gamma_0(N) in SL2(Z) and their reduction to
//! upper-triangular form.

use crate::Error;
use num_integer::Integer;

/// `psi(N) = N prod_{p | N} (1 + 1/p)`.
pub fn psi(n: u64) -> u64 {
    assert!(n >= 1);
    let mut r = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            r = r / p * (p + 1);
            while m % p == 0 {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        r = r / m * (m + 1);
    }
    r
}

/// Integer 2x2 matrix `[a, b; c, d]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CosetMatrix {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl CosetMatrix {
    pub const fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        CosetMatrix { a, b, c, d }
    }

    pub fn det(&self) -> i64 {
        self.a * self.d - self.b * self.c
    }

    pub fn mul(&self, o: &CosetMatrix) -> CosetMatrix {
        CosetMatrix {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    /// `[N, 0; 0, 1] * self`.
    pub fn scaled(&self, n: i64) -> CosetMatrix {
        CosetMatrix::new(n * self.a, n * self.b, self.c, self.d)
    }
}

/// Reduced triple `(A, B, D)`: `AD = N`, `0 <= B < D`, `gcd(A, B, D) = 1`.
pub type Reduced = (u64, u64, u64);

/// Reduce `M` (of determinant N) to `[A, B; 0, D]`; also returns the
/// unimodular `U` with `U M = [A, B; 0, D]`.
pub fn reduce_matrix_with_transform(m: &CosetMatrix, n: u64) -> Result<(Reduced, CosetMatrix), Error> {
    if m.det() != n as i64 {
        return Err(Error::Input(format!("determinant {} is not {}", m.det(), n)));
    }
    let eg = m.a.extended_gcd(&m.c);
    let (g, u, v) = if eg.gcd < 0 { (-eg.gcd, -eg.x, -eg.y) } else { (eg.gcd, eg.x, eg.y) };
    let big_a = g;
    let big_d = n as i64 / big_a;
    let b0 = u * m.b + v * m.d;
    let big_b = b0.rem_euclid(big_d);
    let k = (b0 - big_b) / big_d;
    // [u, v; -c/g, a/g] sends M to [A, b0; 0, D]; then subtract k rows
    let u1 = CosetMatrix::new(u, v, -m.c / g, m.a / g);
    let shift = CosetMatrix::new(1, -k, 0, 1);
    let t = shift.mul(&u1);
    let r = t.mul(m);
    debug_assert_eq!((r.a, r.b, r.c, r.d), (big_a, big_b, 0, big_d));
    Ok(((big_a as u64, big_b as u64, big_d as u64), t))
}

pub fn reduce_matrix(m: &CosetMatrix, n: u64) -> Result<Reduced, Error> {
    Ok(reduce_matrix_with_transform(m, n)?.0)
}

/// All reduced triples for level N, ordered by D then B.
pub fn reduced_triples(n: u64) -> Vec<Reduced> {
    let mut out = Vec::new();
    for d in 1..=n {
        if n % d != 0 {
            continue;
        }
        let a = n / d;
        for b in 0..d {
            if a.gcd(&b).gcd(&d) == 1 {
                out.push((a, b, d));
            }
        }
    }
    out
}

/// `psi(N)` matrices of SL2(Z), one per coset. For prime N these are
/// `[1, 0; c, 1]` and `[0, -1; 1, N]`; otherwise each reduced triple is
/// lifted by a small search.
pub fn coset_representatives(n: u64) -> Vec<CosetMatrix> {
    assert!(n >= 2);
    if crate::arith::is_prime(n) {
        let mut v: Vec<CosetMatrix> = (0..n as i64).map(|c| CosetMatrix::new(1, 0, c, 1)).collect();
        v.push(CosetMatrix::new(0, -1, 1, n as i64));
        return v;
    }
    reduced_triples(n).into_iter().map(|t| lift_triple(t, n)).collect()
}

// [N a, N b; c, d] = V [A, B; 0, D] with V = [x, y; z, w] in SL2(Z)
fn lift_triple((a, b, d): Reduced, n: u64) -> CosetMatrix {
    let (a, b, d, n) = (a as i64, b as i64, d as i64, n as i64);
    let bound = n + 1;
    for x in 0..=bound {
        for y in -bound..=bound {
            if (x * a) % n != 0 || (x * b + y * d) % n != 0 {
                continue;
            }
            let eg = x.extended_gcd(&y);
            if eg.gcd.abs() != 1 {
                continue;
            }
            let (w, z) = (eg.x * eg.gcd, -eg.y * eg.gcd);
            return CosetMatrix::new(x * a / n, (x * b + y * d) / n, z * a, z * b + w * d);
        }
    }
    unreachable!("every reduced triple lifts to SL2(Z)")
}
