//! Coefficient rings. A ring value is a small context object (the
//! modulus, or nothing) that knows how to combine its elements; series,
//! form polynomials and Newton's identities are written against it.

use crate::arith;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt::Debug;

/// Commutative algebra with exact division by small positive integers
/// where the division is possible.
pub trait Algebra {
    type T: Clone + Debug + PartialEq + Send + Sync;
    fn zero(&self) -> Self::T;
    fn add(&self, a: &Self::T, b: &Self::T) -> Self::T;
    fn sub(&self, a: &Self::T, b: &Self::T) -> Self::T;
    fn neg(&self, a: &Self::T) -> Self::T;
    fn mul(&self, a: &Self::T, b: &Self::T) -> Self::T;
    /// `a / k`, or `None` when k is not invertible or the quotient is not exact.
    fn div_small(&self, a: &Self::T, k: u64) -> Option<Self::T>;
    fn is_zero(&self, a: &Self::T) -> bool;
}

pub trait Ring: Algebra + Clone + Debug + Send + Sync {
    fn one(&self) -> Self::T;
    fn from_i64(&self, v: i64) -> Self::T;
    fn from_bigint(&self, v: &BigInt) -> Self::T;
    fn inv(&self, a: &Self::T) -> Option<Self::T>;
    fn mul_i64(&self, a: &Self::T, k: i64) -> Self::T {
        self.mul(a, &self.from_i64(k))
    }
    fn pow(&self, a: &Self::T, mut e: u64) -> Self::T {
        let mut r = self.one();
        let mut b = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(&r, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        r
    }
    /// Low `n` coefficients of a product of coefficient vectors.
    fn mul_trunc(&self, a: &[Self::T], b: &[Self::T], n: usize) -> Vec<Self::T> {
        let mut out = vec![self.zero(); n];
        for (i, x) in a.iter().enumerate().take(n) {
            if self.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate().take(n - i) {
                out[i + j] = self.add(&out[i + j], &self.mul(x, y));
            }
        }
        out
    }
    /// Exact rational view of an element, when the ring has one.
    fn to_rational(&self, a: &Self::T) -> Option<BigRational>;
    /// Integer representative: the value itself, or the residue in `[0, p)`.
    fn to_bigint(&self, a: &Self::T) -> Option<BigInt>;
    fn modulus(&self) -> Option<u64> {
        None
    }
    fn name(&self) -> String;
}

/// The integers, with exact division only.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Integers;

/// The rationals.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

/// Integers modulo a word-size prime, `p < 2^63`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    pub p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Self {
        assert!(p >= 2 && p < (1u64 << 63), "modulus out of range");
        PrimeField { p }
    }
    pub fn reduce(&self, v: &BigInt) -> u64 {
        let p = BigInt::from(self.p);
        v.mod_floor(&p).to_u64().unwrap()
    }
    pub fn reduce_rational(&self, v: &BigRational) -> Option<u64> {
        let d = self.reduce(v.denom());
        let di = arith::invmod(d, self.p)?;
        Some(arith::mulmod(self.reduce(v.numer()), di, self.p))
    }
}

impl Algebra for Integers {
    type T = BigInt;
    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a - b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn div_small(&self, a: &BigInt, k: u64) -> Option<BigInt> {
        if k == 0 {
            return None;
        }
        let (q, r) = a.div_rem(&BigInt::from(k));
        r.is_zero().then_some(q)
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
}

impl Ring for Integers {
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn from_i64(&self, v: i64) -> BigInt {
        BigInt::from(v)
    }
    fn from_bigint(&self, v: &BigInt) -> BigInt {
        v.clone()
    }
    fn inv(&self, a: &BigInt) -> Option<BigInt> {
        (a.abs().is_one()).then(|| a.clone())
    }
    fn to_rational(&self, a: &BigInt) -> Option<BigRational> {
        Some(BigRational::from_integer(a.clone()))
    }
    fn to_bigint(&self, a: &BigInt) -> Option<BigInt> {
        Some(a.clone())
    }
    fn name(&self) -> String {
        "ZZ".into()
    }
}

impl Algebra for Rationals {
    type T = BigRational;
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn div_small(&self, a: &BigRational, k: u64) -> Option<BigRational> {
        (k != 0).then(|| a / BigRational::from_integer(BigInt::from(k)))
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
}

impl Ring for Rationals {
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_bigint(&self, v: &BigInt) -> BigRational {
        BigRational::from_integer(v.clone())
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        (!a.is_zero()).then(|| a.recip())
    }
    fn to_rational(&self, a: &BigRational) -> Option<BigRational> {
        Some(a.clone())
    }
    fn to_bigint(&self, a: &BigRational) -> Option<BigInt> {
        a.is_integer().then(|| a.to_integer())
    }
    fn name(&self) -> String {
        "QQ".into()
    }
}

impl Algebra for PrimeField {
    type T = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        arith::addmod(*a, *b, self.p)
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        arith::submod(*a, *b, self.p)
    }
    fn neg(&self, a: &u64) -> u64 {
        arith::negmod(*a, self.p)
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        arith::mulmod(*a, *b, self.p)
    }
    fn div_small(&self, a: &u64, k: u64) -> Option<u64> {
        let ki = arith::invmod(k % self.p, self.p)?;
        Some(arith::mulmod(*a, ki, self.p))
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
}

impl Ring for PrimeField {
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn from_i64(&self, v: i64) -> u64 {
        arith::from_i64(v, self.p)
    }
    fn from_bigint(&self, v: &BigInt) -> u64 {
        self.reduce(v)
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        arith::invmod(*a, self.p)
    }
    fn mul_trunc(&self, a: &[u64], b: &[u64], n: usize) -> Vec<u64> {
        arith::mul_trunc(a, b, n, self.p)
    }
    fn to_rational(&self, _a: &u64) -> Option<BigRational> {
        None
    }
    fn to_bigint(&self, a: &u64) -> Option<BigInt> {
        Some(BigInt::from(*a))
    }
    fn modulus(&self) -> Option<u64> {
        Some(self.p)
    }
    fn name(&self) -> String {
        format!("GF({})", self.p)
    }
}
