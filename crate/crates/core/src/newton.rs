//! Newton's identities between power sums and the coefficients of a
//! monic polynomial, over any algebra that divides by small integers.

use crate::ring::Algebra;
use crate::Error;

/// Given `p_1..p_n`, return `c_1..c_n` with
/// `X^n + c_1 X^{n-1} + ... + c_n` having those power sums.
pub fn newton_to_coefficients<A: Algebra>(alg: &A, p: &[A::T]) -> Result<Vec<A::T>, Error> {
    let n = p.len();
    let mut c: Vec<A::T> = Vec::with_capacity(n);
    for k in 1..=n {
        // k c_k = -(p_k + sum_{i<k} c_{k-i} p_i)
        let mut s = p[k - 1].clone();
        for i in 1..k {
            s = alg.add(&s, &alg.mul(&c[k - i - 1], &p[i - 1]));
        }
        let ck = alg.div_small(&alg.neg(&s), k as u64).ok_or(Error::NotInvertible(k as u64))?;
        c.push(ck);
    }
    Ok(c)
}

/// Inverse direction: `c_1..c_n` to `p_1..p_n`.
pub fn coefficients_to_newton<A: Algebra>(alg: &A, c: &[A::T], k_scale: impl Fn(&A::T, u64) -> A::T) -> Vec<A::T> {
    let n = c.len();
    let mut p: Vec<A::T> = Vec::with_capacity(n);
    for k in 1..=n {
        let mut s = k_scale(&c[k - 1], k as u64);
        for i in 1..k {
            s = alg.add(&s, &alg.mul(&c[k - i - 1], &p[i - 1]));
        }
        p.push(alg.neg(&s));
    }
    p
}
