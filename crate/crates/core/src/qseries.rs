//! Truncated q-expansions over an exact ring, and the classical series
//! E2, E4, E6, Delta, j and the multiplier series used for U.

use crate::ring::Ring;
use crate::Error;

/// `q^v0 * (c_0 + c_1 q + ...)` known modulo `q^order`, where
/// `order = v0 + coeffs.len()`.
#[derive(Clone, Debug, PartialEq)]
pub struct QSeries<R: Ring> {
    pub ring: R,
    pub v0: i32,
    pub coeffs: Vec<R::T>,
}

impl<R: Ring> QSeries<R> {
    pub fn new(ring: R, coeffs: Vec<R::T>) -> Self {
        QSeries { ring, v0: 0, coeffs }
    }

    pub fn zero(ring: R, order: usize) -> Self {
        let z = ring.zero();
        QSeries { ring, v0: 0, coeffs: vec![z; order] }
    }

    pub fn one(ring: R, order: usize) -> Self {
        let mut s = Self::zero(ring, order);
        if order > 0 {
            s.coeffs[0] = s.ring.one();
        }
        s
    }

    pub fn from_i64s(ring: R, v: &[i64]) -> Self {
        let coeffs = v.iter().map(|&x| ring.from_i64(x)).collect();
        QSeries { ring, v0: 0, coeffs }
    }

    /// Exponent of the first unknown coefficient.
    pub fn order(&self) -> i64 {
        self.v0 as i64 + self.coeffs.len() as i64
    }

    /// Coefficient of `q^e` (zero below `v0`); panics past the order.
    pub fn coeff(&self, e: i64) -> R::T {
        assert!(e < self.order(), "coefficient beyond truncation order");
        if e < self.v0 as i64 {
            self.ring.zero()
        } else {
            self.coeffs[(e - self.v0 as i64) as usize].clone()
        }
    }

    pub fn truncate(&self, order: usize) -> Self {
        assert_eq!(self.v0, 0);
        let mut s = self.clone();
        s.coeffs.truncate(order);
        s
    }

    fn align(&self, other: &Self) -> (i32, usize) {
        let v = self.v0.min(other.v0);
        let o = self.order().min(other.order());
        (v, (o - v as i64).max(0) as usize)
    }

    pub fn add(&self, other: &Self) -> Self {
        let (v, n) = self.align(other);
        let coeffs = (0..n)
            .map(|i| {
                let e = v as i64 + i as i64;
                self.ring.add(&self.coeff(e), &other.coeff(e))
            })
            .collect();
        QSeries { ring: self.ring.clone(), v0: v, coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map(|r, x| r.neg(x))
    }

    pub fn scale(&self, c: &R::T) -> Self {
        self.map(|r, x| r.mul(x, c))
    }

    pub fn scale_i64(&self, c: i64) -> Self {
        let c = self.ring.from_i64(c);
        self.scale(&c)
    }

    fn map(&self, f: impl Fn(&R, &R::T) -> R::T) -> Self {
        QSeries {
            ring: self.ring.clone(),
            v0: self.v0,
            coeffs: self.coeffs.iter().map(|x| f(&self.ring, x)).collect(),
        }
    }

    /// Exact division of every coefficient by a small integer.
    pub fn div_small(&self, k: u64) -> Result<Self, Error> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|x| self.ring.div_small(x, k))
            .collect::<Option<Vec<_>>>()
            .ok_or(Error::NotInvertible(k))?;
        Ok(QSeries { ring: self.ring.clone(), v0: self.v0, coeffs })
    }

    /// Product; the result is known to the smaller of the two accuracies.
    pub fn mul(&self, other: &Self) -> Self {
        let v = self.v0 + other.v0;
        let o = (self.order() + other.v0 as i64).min(other.order() + self.v0 as i64);
        let n = (o - v as i64).max(0) as usize;
        let coeffs = self.ring.mul_trunc(&self.coeffs, &other.coeffs, n);
        QSeries { ring: self.ring.clone(), v0: v, coeffs }
    }

    pub fn square(&self) -> Self {
        self.mul(self)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut r = Self::one(self.ring.clone(), self.coeffs.len());
        r.v0 = 0;
        let mut b = self.clone();
        let mut e = e;
        let mut first = true;
        while e > 0 {
            if e & 1 == 1 {
                r = if first { b.clone() } else { r.mul(&b) };
                first = false;
            }
            e >>= 1;
            if e > 0 {
                b = b.square();
            }
        }
        r
    }

    /// Inverse of a series whose leading coefficient is a unit.
    pub fn inverse(&self) -> Result<Self, Error> {
        let n = self.coeffs.len();
        let r = &self.ring;
        let c0 = r.inv(&self.coeffs[0]).ok_or(Error::Degenerate("series has no inverse".into()))?;
        let mut out = vec![r.zero(); n];
        out[0] = c0.clone();
        for k in 1..n {
            let mut s = r.zero();
            for i in 1..=k {
                s = r.add(&s, &r.mul(&self.coeffs[i], &out[k - i]));
            }
            out[k] = r.neg(&r.mul(&s, &c0));
        }
        Ok(QSeries { ring: r.clone(), v0: -self.v0, coeffs: out })
    }

    /// `f(q) -> f(q^k)`.
    pub fn expand(&self, k: usize) -> Self {
        assert_eq!(self.v0, 0);
        let n = self.coeffs.len() * k;
        let mut coeffs = vec![self.ring.zero(); n.max(1)];
        coeffs.truncate(n);
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * k] = c.clone();
        }
        QSeries { ring: self.ring.clone(), v0: 0, coeffs }
    }

    /// The operator `q d/dq`.
    pub fn q_derivative(&self) -> Self {
        let r = &self.ring;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| r.mul_i64(c, self.v0 as i64 + i as i64))
            .collect();
        QSeries { ring: r.clone(), v0: self.v0, coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| self.ring.is_zero(c))
    }
}

/// `D * sum_n a_{Dn} q^{An}`, known to order `floor(order * A / D)`.
pub fn decimate<R: Ring>(f: &QSeries<R>, d: usize, a: usize) -> QSeries<R> {
    assert_eq!(f.v0, 0, "decimation needs a power series");
    let r = &f.ring;
    let order = f.coeffs.len() * a / d;
    let mut coeffs = vec![r.zero(); order];
    let dd = r.from_i64(d as i64);
    let mut n = 0;
    while a * n < order && d * n < f.coeffs.len() {
        coeffs[a * n] = r.mul(&f.coeffs[d * n], &dd);
        n += 1;
    }
    QSeries { ring: r.clone(), v0: 0, coeffs }
}

fn divisor_power_sums<R: Ring>(ring: &R, power: u32, order: usize, skip_multiples_of: usize) -> Vec<R::T> {
    let mut s = vec![ring.zero(); order];
    for d in 1..order {
        if skip_multiples_of > 1 && d % skip_multiples_of == 0 {
            continue;
        }
        let dp = ring.pow(&ring.from_i64(d as i64), power as u64);
        let mut m = d;
        while m < order {
            s[m] = ring.add(&s[m], &dp);
            m += d;
        }
    }
    s
}

/// `E_{2k}` for k = 1, 2, 3.
pub fn eisenstein_series<R: Ring>(k: u32, order: usize, ring: R) -> QSeries<R> {
    let c = match k {
        1 => -24,
        2 => 240,
        3 => -504,
        _ => panic!("only E2, E4, E6 are provided"),
    };
    let sig = divisor_power_sums(&ring, 2 * k - 1, order, 0);
    let mut coeffs: Vec<R::T> = sig.iter().map(|x| ring.mul_i64(x, c)).collect();
    if order > 0 {
        coeffs[0] = ring.one();
    }
    QSeries { ring, v0: 0, coeffs }
}

/// `prod (1 - q^n)` through Euler's pentagonal series.
pub fn euler_product<R: Ring>(order: usize, ring: R) -> QSeries<R> {
    let mut coeffs = vec![ring.zero(); order];
    if order > 0 {
        coeffs[0] = ring.one();
    }
    let mut n: i64 = 1;
    loop {
        let e1 = (n * (3 * n - 1) / 2) as usize;
        if e1 >= order {
            break;
        }
        let s = if n % 2 == 0 { 1 } else { -1 };
        coeffs[e1] = ring.from_i64(s);
        let e2 = (n * (3 * n + 1) / 2) as usize;
        if e2 < order {
            coeffs[e2] = ring.from_i64(s);
        }
        n += 1;
    }
    QSeries { ring, v0: 0, coeffs }
}

/// Delta = q prod (1 - q^n)^24, as a power series of the given order.
pub fn delta_series<R: Ring>(order: usize, ring: R) -> QSeries<R> {
    if order == 0 {
        return QSeries::zero(ring, 0);
    }
    let e = euler_product(order - 1, ring.clone()).pow(24);
    let mut coeffs = vec![ring.zero()];
    coeffs.extend(e.coeffs);
    QSeries { ring, v0: 0, coeffs }
}

/// Delta through `(E4^3 - E6^2) / 1728`; needs exact division by 1728.
pub fn delta_from_eisenstein<R: Ring>(order: usize, ring: R) -> Result<QSeries<R>, Error> {
    let e4 = eisenstein_series(2, order, ring.clone());
    let e6 = eisenstein_series(3, order, ring);
    e4.square().mul(&e4).sub(&e6.square()).div_small(1728)
}

/// `j = E4^3 / Delta = 1/q + 744 + ...`, known to order `order - 1`.
pub fn j_series<R: Ring>(order: usize, ring: R) -> Result<QSeries<R>, Error> {
    let e4 = eisenstein_series(2, order + 1, ring.clone());
    let mut d = delta_series(order + 1, ring);
    d.coeffs.remove(0);
    d.v0 = 1;
    Ok(e4.square().mul(&e4).mul(&d.inverse()?))
}

/// `-l F_l(q) = l(l-1) + 24 l sum delta'_1(n) q^n`, the divisor sums
/// restricted to divisors prime to l.
pub fn fell_series<R: Ring>(ell: u64, order: usize, ring: R) -> QSeries<R> {
    let sig = divisor_power_sums(&ring, 1, order, ell as usize);
    let mut coeffs: Vec<R::T> = sig.iter().map(|x| ring.mul_i64(x, 24 * ell as i64)).collect();
    if order > 0 {
        coeffs[0] = ring.from_i64((ell * (ell - 1)) as i64);
    }
    QSeries { ring, v0: 0, coeffs }
}

/// `F_l(q) = E2(q) - l E2(q^l) = (1 - l) - 24 sum delta'_1(n) q^n`.
pub fn multiplier_series<R: Ring>(ell: u64, order: usize, ring: R) -> QSeries<R> {
    let sig = divisor_power_sums(&ring, 1, order, ell as usize);
    let mut coeffs: Vec<R::T> = sig.iter().map(|x| ring.mul_i64(x, -24)).collect();
    if order > 0 {
        coeffs[0] = ring.from_i64(1 - ell as i64);
    }
    QSeries { ring, v0: 0, coeffs }
}
