//! U, V, W and the numerators modulo small primes from the crater of an
//! isogeny volcano: CM curves with `j` a root of the class polynomial
//! `H_D`, their `l + 1` isogenies by Vélu's formulas, and interpolation of
//! the power sums of the isogeny data at the crater curves.

use crate::arith::{self, addmod, invmod, mulmod, negmod, powmod, submod, LinearSolution};
use crate::crt::CrtAccumulator;
use crate::formbasis::{j_max, weight_exponents, point_rows};
use crate::fricke_series::{numerator_support, numerator_weight, polynomial_from_forms};
use crate::poly::{Family, Form, Mono};
use crate::ring::PrimeField;
use crate::{Error, TriPoly};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

/// Class polynomial `H_D` with integer coefficients, leading first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassPoly {
    pub disc: i64,
    pub h: usize,
    pub coeffs: Vec<BigInt>,
}

const HD71: &str = include_str!("../data/hd71.txt");
const HD439: &str = include_str!("../data/hd439.txt");

impl ClassPoly {
    /// Text format: a line `D h`, then `h + 1` integers, constant term last.
    pub fn parse(text: &str) -> Result<ClassPoly, Error> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let head = lines.next().ok_or_else(|| Error::Input("empty class polynomial file".into()))?;
        let mut it = head.split_whitespace();
        let bad = |what: &str| Error::Input(format!("class polynomial header: bad {what}"));
        let disc: i64 = it.next().ok_or_else(|| bad("D"))?.parse().map_err(|_| bad("D"))?;
        let h: usize = it.next().ok_or_else(|| bad("h"))?.parse().map_err(|_| bad("h"))?;
        let coeffs: Vec<BigInt> = lines
            .map(|l| l.parse::<BigInt>().map_err(|_| Error::Input(format!("bad coefficient {l}"))))
            .collect::<Result<_, _>>()?;
        if disc >= 0 {
            return Err(Error::Input(format!("discriminant {disc} is not negative")));
        }
        if coeffs.len() != h + 1 {
            return Err(Error::Input(format!("expected {} coefficients, found {}", h + 1, coeffs.len())));
        }
        if coeffs[0] != BigInt::from(1) {
            return Err(Error::Input("class polynomial must be monic".into()));
        }
        Ok(ClassPoly { disc, h, coeffs })
    }

    pub fn load(path: &Path) -> Result<ClassPoly, Error> {
        ClassPoly::parse(&std::fs::read_to_string(path)?)
    }

    /// Shipped polynomials for D = -71 and D = -439.
    pub fn builtin(disc: i64) -> Option<ClassPoly> {
        match disc {
            -71 => ClassPoly::parse(HD71).ok(),
            -439 => ClassPoly::parse(HD439).ok(),
            _ => None,
        }
    }

    /// First shipped polynomial usable for level `ell`.
    pub fn builtin_for(ell: u64) -> Result<ClassPoly, Error> {
        [-71, -439]
            .into_iter()
            .filter_map(ClassPoly::builtin)
            .find(|c| suitable(ell, c.disc, c.h))
            .ok_or_else(|| Error::Input(format!("no shipped class polynomial fits l = {ell}; pass one")))
    }

    /// Coefficients mod p, constant term first.
    pub fn reduce(&self, p: u64) -> Vec<u64> {
        let f = PrimeField::new(p);
        self.coeffs.iter().rev().map(|c| f.reduce(c)).collect()
    }
}

/// `(D / l) = 1`, `l` odd prime, and `h >= l + 2`.
pub fn suitable(ell: u64, disc: i64, h: usize) -> bool {
    ell > 2 && arith::is_prime(ell) && arith::legendre(arith::from_i64(disc, ell), ell) == 1 && h as u64 >= ell + 2
}

// ---- polynomials over F_p, constant term first ----

fn trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn poly_divmod(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let inv = invmod(b[db], p).unwrap();
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![0u64; r.len() - db];
    for i in (0..q.len()).rev() {
        let c = mulmod(r[i + db], inv, p);
        q[i] = c;
        if c != 0 {
            for (j, &bj) in b.iter().enumerate() {
                r[i + j] = submod(r[i + j], mulmod(c, bj, p), p);
            }
        }
    }
    r.truncate(db);
    trim(&mut r);
    (q, r)
}

fn poly_mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    poly_divmod(&arith::mul_full(a, b, p), m, p).1
}

fn poly_powmod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut r = vec![1u64];
    let mut b = poly_divmod(base, m, p).1;
    while e > 0 {
        if e & 1 == 1 {
            r = poly_mulmod(&r, &b, m, p);
        }
        b = poly_mulmod(&b, &b, m, p);
        e >>= 1;
    }
    r
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = poly_divmod(&a, &b, p).1;
        a = b;
        b = r;
    }
    if let Some(&lead) = a.last() {
        let inv = invmod(lead, p).unwrap();
        for x in a.iter_mut() {
            *x = mulmod(*x, inv, p);
        }
    }
    a
}

fn split_roots<R: Rng>(g: &[u64], p: u64, rng: &mut R, out: &mut Vec<u64>) {
    let d = g.len() - 1;
    if d == 0 {
        return;
    }
    if d == 1 {
        out.push(mulmod(negmod(g[0], p), invmod(g[1], p).unwrap(), p));
        return;
    }
    loop {
        let delta = rng.gen_range(0..p);
        let mut h = poly_powmod(&[delta, 1], (p - 1) / 2, g, p);
        if h.is_empty() {
            h.push(0);
        }
        h[0] = submod(h[0], 1, p);
        let f = poly_gcd(g, &h, p);
        if f.len() > 1 && f.len() < g.len() {
            let (q, _) = poly_divmod(g, &f, p);
            split_roots(&f, p, rng, out);
            split_roots(&q, p, rng, out);
            return;
        }
    }
}

/// Distinct roots in F_p of a polynomial (constant term first), sorted.
pub fn roots_mod_p(f: &[u64], p: u64, seed: u64) -> Vec<u64> {
    let mut f = f.to_vec();
    trim(&mut f);
    if f.len() <= 1 {
        return Vec::new();
    }
    if p == 2 {
        return (0..2).filter(|&x| eval_poly(&f, x, p) == 0).collect();
    }
    let xp = poly_powmod(&[0, 1], p, &f, p);
    let mut xpx = xp;
    xpx.resize(xpx.len().max(2), 0);
    xpx[1] = submod(xpx[1], 1, p);
    let g = poly_gcd(&f, &xpx, p);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ p);
    let mut out = Vec::new();
    split_roots(&g, p, &mut rng, &mut out);
    out.sort_unstable();
    out
}

fn eval_poly(f: &[u64], x: u64, p: u64) -> u64 {
    f.iter().rev().fold(0, |acc, &c| addmod(mulmod(acc, x, p), c, p))
}

// ---- prime selection ----

/// A prime with `4p = t^2 - l^2 v^2 D`, `t = 2 mod l`, and
/// `m = p + 1 - t` divisible by exactly `l^2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VolcanoParams {
    pub ell: u64,
    pub disc: i64,
    pub p: u64,
    pub t: i64,
    pub v: u64,
    pub m: u64,
}

fn val(mut m: u64, ell: u64) -> u32 {
    let mut v = 0;
    while m > 0 && m % ell == 0 {
        m /= ell;
        v += 1;
    }
    v
}

/// Checks the conditions for `p` directly; `None` when `p` does not qualify.
pub fn volcano_params(ell: u64, disc: i64, p: u64) -> Option<VolcanoParams> {
    if disc >= 0 || !arith::is_prime(p) || !arith::is_prime(ell) || ell == 2 || p % ell != 1 || p <= ell + 1 || p <= 3 {
        return None;
    }
    let e = ell as u128 * ell as u128 * disc.unsigned_abs() as u128;
    let four_p = 4 * p as u128;
    let mut v = 1u128;
    while e * v * v < four_p {
        let rest = four_p - e * v * v;
        let t = (rest as f64).sqrt() as u128;
        for t in t.saturating_sub(2)..=t + 2 {
            if t * t == rest && v as u64 % ell != 0 {
                return normalize(ell, disc, p, t as i64, v as u64);
            }
        }
        v += 1;
    }
    None
}

fn normalize(ell: u64, disc: i64, p: u64, t: i64, v: u64) -> Option<VolcanoParams> {
    let l = ell as i64;
    let t = if t.rem_euclid(l) == 2 {
        t
    } else if (-t).rem_euclid(l) == 2 {
        -t
    } else {
        return None;
    };
    let m = (p as i128 + 1 - t as i128) as u64;
    (val(m, ell) == 2).then_some(VolcanoParams { ell, disc, p, t, v, m })
}

fn candidates(ell: u64, disc: i64, lo: u64, hi: u64) -> Vec<VolcanoParams> {
    let mut out = BTreeMap::new();
    let e = ell as u128 * ell as u128 * disc.unsigned_abs() as u128;
    let (lo4, hi4) = (4 * lo as u128, 4 * hi as u128);
    let isqrt = |x: u128| {
        let mut s = (x as f64).sqrt() as u128;
        while s * s > x {
            s -= 1;
        }
        while (s + 1) * (s + 1) <= x {
            s += 1;
        }
        s
    };
    let mut v = 1u128;
    while e * v * v <= hi4 {
        if v as u64 % ell != 0 {
            let base = e * v * v;
            let tmin = if lo4 > base { isqrt(lo4 - base - 1) + 1 } else { 0 };
            let tmax = isqrt(hi4 - base);
            for t in tmin..=tmax {
                let r = t as u64 % ell;
                if r != 2 && r != ell - 2 {
                    continue;
                }
                let s = t * t + base;
                if s % 4 != 0 {
                    continue;
                }
                let p = (s / 4) as u64;
                if p < lo || p > hi || p % ell != 1 || p <= ell + 1 || !arith::is_prime(p) {
                    continue;
                }
                if let Some(vp) = normalize(ell, disc, p, t as i64, v as u64) {
                    out.entry(p).or_insert(vp);
                }
            }
        }
        v += 1;
    }
    out.into_values().collect()
}

/// Smallest qualifying prime in `[lo, hi]`.
pub fn find_volcano_prime(ell: u64, disc: i64, lo: u64, hi: u64) -> Result<VolcanoParams, Error> {
    if disc >= 0 || disc % ell as i64 == 0 {
        return Err(Error::Input(format!("discriminant {disc} unusable for l = {ell}")));
    }
    candidates(ell, disc, lo, hi)
        .into_iter()
        .next()
        .ok_or_else(|| Error::Input(format!("no volcano prime for l = {ell}, D = {disc} in [{lo}, {hi}]")))
}

/// Qualifying primes descending from `below`.
pub fn volcano_primes(ell: u64, disc: i64, below: u64, count: usize, skip: &BTreeSet<u64>) -> Vec<VolcanoParams> {
    let mut out = Vec::new();
    let window = (below / 64).max(1 << 12);
    let mut hi = below;
    while out.len() < count && hi > 1000 {
        let lo = hi.saturating_sub(window).max(1000);
        let mut c = candidates(ell, disc, lo, hi);
        c.reverse();
        out.extend(c.into_iter().filter(|v| !skip.contains(&v.p)).take(count - out.len()));
        hi = lo - 1;
    }
    out
}

// ---- curves ----

/// `y^2 = x^3 + a x + b` over F_p.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Curve {
    pub a: u64,
    pub b: u64,
    pub p: u64,
}

pub type Point = Option<(u64, u64)>;

impl Curve {
    pub fn new(a: u64, b: u64, p: u64) -> Result<Curve, Error> {
        let c = Curve { a: a % p, b: b % p, p };
        if c.disc() == 0 {
            return Err(Error::Degenerate(format!("singular curve [{a}, {b}] mod {p}")));
        }
        Ok(c)
    }

    fn disc(&self) -> u64 {
        let p = self.p;
        let a3 = mulmod(mulmod(self.a, self.a, p), self.a, p);
        addmod(mulmod(4, a3, p), mulmod(27, mulmod(self.b, self.b, p), p), p)
    }

    pub fn j(&self) -> u64 {
        let p = self.p;
        let a3 = mulmod(mulmod(self.a, self.a, p), self.a, p);
        mulmod(mulmod(1728 % p, mulmod(4, a3, p), p), invmod(self.disc(), p).unwrap(), p)
    }

    pub fn rhs(&self, x: u64) -> u64 {
        let p = self.p;
        addmod(addmod(mulmod(mulmod(x, x, p), x, p), mulmod(self.a, x, p), p), self.b, p)
    }

    pub fn contains(&self, pt: &Point) -> bool {
        match pt {
            None => true,
            Some((x, y)) => mulmod(*y, *y, self.p) == self.rhs(*x),
        }
    }

    pub fn neg(&self, pt: &Point) -> Point {
        pt.map(|(x, y)| (x, negmod(y, self.p)))
    }

    pub fn add(&self, p1: &Point, p2: &Point) -> Point {
        let p = self.p;
        let (Some((x1, y1)), Some((x2, y2))) = (p1, p2) else {
            return p1.or(*p2);
        };
        let lam = if x1 == x2 {
            if addmod(*y1, *y2, p) == 0 {
                return None;
            }
            let num = addmod(mulmod(3, mulmod(*x1, *x1, p), p), self.a, p);
            mulmod(num, invmod(mulmod(2, *y1, p), p).unwrap(), p)
        } else {
            mulmod(submod(*y2, *y1, p), invmod(submod(*x2, *x1, p), p).unwrap(), p)
        };
        let x3 = submod(submod(mulmod(lam, lam, p), *x1, p), *x2, p);
        let y3 = submod(mulmod(lam, submod(*x1, x3, p), p), *y1, p);
        Some((x3, y3))
    }

    pub fn mul(&self, k: u64, pt: &Point) -> Point {
        let mut r = None;
        let mut b = *pt;
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                r = self.add(&r, &b);
            }
            b = self.add(&b, &b);
            k >>= 1;
        }
        r
    }

    pub fn random_point<R: Rng>(&self, rng: &mut R) -> Point {
        loop {
            let x = rng.gen_range(0..self.p);
            if let Some(y) = arith::sqrt_mod(self.rhs(x), self.p) {
                let y = if rng.gen::<bool>() { y } else { negmod(y, self.p) };
                return Some((x, y));
            }
        }
    }

    /// `(E4, E6, Delta)` with `A = -3 E4`, `B = -2 E6`.
    pub fn forms(&self) -> (u64, u64, u64) {
        forms_of(self.a, self.b, self.p)
    }
}

fn forms_of(a: u64, b: u64, p: u64) -> (u64, u64, u64) {
    let e4 = mulmod(negmod(a, p), invmod(3, p).unwrap(), p);
    let e6 = mulmod(negmod(b, p), invmod(2, p).unwrap(), p);
    let d = mulmod(submod(mulmod(mulmod(e4, e4, p), e4, p), mulmod(e6, e6, p), p), invmod(1728 % p, p).unwrap(), p);
    (e4, e6, d)
}

/// The curve `(3k, 2k)`, `k = j / (1728 - j)`, which has invariant j.
pub fn curve_from_j(j: u64, p: u64) -> Result<Curve, Error> {
    let j = j % p;
    if j == 0 || j == 1728 % p {
        return Err(Error::Input(format!("j = {j} has extra automorphisms")));
    }
    let k = mulmod(j, invmod(submod(1728 % p, j, p), p).unwrap(), p);
    Curve::new(mulmod(3, k, p), mulmod(2, k, p), p)
}

/// Curve with invariant j and `m` points: the standard model or its
/// quadratic twist, told apart by random points killed by `m` but not by
/// the twist order.
pub fn curve_with_cardinality<R: Rng>(j: u64, m: u64, p: u64, rng: &mut R) -> Result<Curve, Error> {
    let c = curve_from_j(j, p)?;
    let m_twist = 2 * (p + 1) - m;
    let nr = arith::non_residue(p);
    let nr2 = mulmod(nr, nr, p);
    let tw = Curve::new(mulmod(c.a, nr2, p), mulmod(c.b, mulmod(nr2, nr, p), p), p)?;
    for cand in [c, tw] {
        let mut decisive = false;
        let mut ok = true;
        for s in 0..64 {
            let pt = cand.random_point(rng);
            if cand.mul(m, &pt).is_some() {
                ok = false;
                break;
            }
            if cand.mul(m_twist, &pt).is_some() {
                decisive = true;
            }
            if s >= 7 && decisive {
                break;
            }
        }
        if ok && decisive {
            return Ok(cand);
        }
    }
    Err(Error::Degenerate(format!("no curve with j = {j} has {m} points mod {p}")))
}

/// A point of exact order `l`: `[m / l^v] P` multiplied by `l` until `[l] R = O`.
pub fn random_l_torsion_point<R: Rng>(c: &Curve, m: u64, ell: u64, rng: &mut R) -> Result<(u64, u64), Error> {
    if m % ell != 0 {
        return Err(Error::Input(format!("{ell} does not divide {m}")));
    }
    let v = val(m, ell);
    let cof = m / ell.pow(v);
    for _ in 0..256 {
        let mut r = c.mul(cof, &c.random_point(rng));
        if r.is_none() {
            continue;
        }
        loop {
            let n = c.mul(ell, &r);
            if n.is_none() {
                break;
            }
            r = n;
        }
        if let Some(q) = r {
            return Ok(q);
        }
    }
    Err(Error::Degenerate("no point of order l found".into()))
}

/// Kernel data of one l-isogeny.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsogenyRecord {
    /// abscissas of `[j] Q`, `j = 1..(l-1)/2`, sorted
    pub kernel_x: Vec<u64>,
    /// power sums of the abscissas, exponents 0..3
    pub kappa: [u64; 4],
    pub a_star: u64,
    pub b_star: u64,
    pub j_star: u64,
    pub crater: bool,
}

impl IsogenyRecord {
    /// Root of `U_l` attached to this isogeny: the abscissa sum.
    pub fn root(&self) -> u64 {
        self.kappa[1]
    }
}

/// Vélu's formulas for the subgroup generated by `q`.
pub fn velu_isogenous_curve(c: &Curve, q: (u64, u64), ell: u64) -> Result<IsogenyRecord, Error> {
    let p = c.p;
    let pt = Some(q);
    if c.mul(ell, &pt).is_some() {
        return Err(Error::Input("kernel generator does not have order l".into()));
    }
    let half = (ell - 1) / 2;
    let mut xs = Vec::with_capacity(half as usize);
    let mut r = pt;
    for _ in 0..half {
        let (x, _) = r.ok_or_else(|| Error::Input("kernel generator does not have order l".into()))?;
        xs.push(x);
        r = c.add(&r, &pt);
    }
    let mut kappa = [0u64; 4];
    for &x in &xs {
        let mut xp = 1;
        for k in kappa.iter_mut() {
            *k = addmod(*k, xp, p);
            xp = mulmod(xp, x, p);
        }
    }
    let (a, b) = (c.a, c.b);
    let t = addmod(mulmod(6, kappa[2], p), mulmod(mulmod(2, a, p), kappa[0], p), p);
    let w = addmod(
        addmod(mulmod(10, kappa[3], p), mulmod(mulmod(6, a, p), kappa[1], p), p),
        mulmod(mulmod(4, b, p), kappa[0], p),
        p,
    );
    let a_star = submod(a, mulmod(5, t, p), p);
    let b_star = submod(b, mulmod(7, w, p), p);
    let cs = Curve::new(a_star, b_star, p)?;
    xs.sort_unstable();
    Ok(IsogenyRecord { kernel_x: xs, kappa, a_star, b_star, j_star: cs.j(), crater: false })
}

/// Image of a point under the normalized Vélu isogeny with kernel abscissas `xs`.
pub fn velu_image(c: &Curve, xs: &[u64], pt: &Point) -> Point {
    let p = c.p;
    let (xp, yp) = (*pt)?;
    let mut x = xp;
    let mut s = 0u64;
    for &xq in xs {
        let d = submod(xp, xq, p);
        let di = invmod(d, p)?;
        let g = addmod(mulmod(3, mulmod(xq, xq, p), p), c.a, p);
        let v = mulmod(2, g, p);
        let u = mulmod(4, c.rhs(xq), p);
        let di2 = mulmod(di, di, p);
        x = addmod(x, addmod(mulmod(v, di, p), mulmod(u, di2, p), p), p);
        s = addmod(s, addmod(mulmod(v, di2, p), mulmod(mulmod(2, u, p), mulmod(di2, di, p), p), p), p);
    }
    Some((x, mulmod(yp, submod(1, s, p), p)))
}

/// A crater curve and its `l + 1` isogenies, sorted by root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VolcanoSite {
    pub curve: Curve,
    pub j: u64,
    pub isogenies: Vec<IsogenyRecord>,
}

impl VolcanoSite {
    pub fn forms(&self) -> (u64, u64, u64) {
        self.curve.forms()
    }

    pub fn crater_count(&self) -> usize {
        self.isogenies.iter().filter(|r| r.crater).count()
    }
}

/// All `l + 1` subgroups of order l of a curve with `E[l]` rational.
pub fn site_from_curve<R: Rng>(c: Curve, m: u64, ell: u64, crater_js: &BTreeSet<u64>, rng: &mut R) -> Result<VolcanoSite, Error> {
    let q1 = random_l_torsion_point(&c, m, ell, rng)?;
    let first = velu_isogenous_curve(&c, q1, ell)?;
    let mut q2 = None;
    for _ in 0..32 * ell {
        let q = random_l_torsion_point(&c, m, ell, rng)?;
        if !first.kernel_x.contains(&q.0) {
            q2 = Some(q);
            break;
        }
    }
    let q2 = q2.ok_or_else(|| Error::Degenerate("l-torsion is not all rational".into()))?;
    let mut recs = vec![first];
    let mut gen = Some(q2);
    for _ in 0..ell {
        let g = gen.ok_or_else(|| Error::Degenerate("torsion basis is dependent".into()))?;
        recs.push(velu_isogenous_curve(&c, g, ell)?);
        gen = c.add(&gen, &Some(q1));
    }
    let keys: BTreeSet<&Vec<u64>> = recs.iter().map(|r| &r.kernel_x).collect();
    if keys.len() != ell as usize + 1 {
        return Err(Error::Degenerate("kernel subgroups are not distinct".into()));
    }
    for r in recs.iter_mut() {
        r.crater = crater_js.contains(&r.j_star);
    }
    recs.sort_by(|x, y| (x.root(), &x.kernel_x).cmp(&(y.root(), &y.kernel_x)));
    Ok(VolcanoSite { curve: c, j: c.j(), isogenies: recs })
}

/// Roots of `H_D` mod p; fails unless it splits into distinct linear factors.
pub fn crater_js(cp: &ClassPoly, p: u64, seed: u64) -> Result<Vec<u64>, Error> {
    let roots = roots_mod_p(&cp.reduce(p), p, seed);
    if roots.len() != cp.h {
        return Err(Error::Input(format!("H_D has {} roots mod {p}, expected {}", roots.len(), cp.h)));
    }
    Ok(roots)
}

/// One site per root of `H_D`, each with two crater neighbours.
pub fn partial_volcano(params: &VolcanoParams, cp: &ClassPoly, seed: u64) -> Result<Vec<VolcanoSite>, Error> {
    if params.disc != cp.disc {
        return Err(Error::Input("class polynomial and parameters disagree on D".into()));
    }
    let p = params.p;
    let js = crater_js(cp, p, seed)?;
    if js.iter().any(|&j| j == 0 || j == 1728 % p) {
        return Err(Error::Degenerate(format!("crater contains j = 0 or 1728 mod {p}")));
    }
    let set: BTreeSet<u64> = js.iter().copied().collect();
    js.par_iter()
        .enumerate()
        .map(|(i, &j)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ p.rotate_left(17) ^ (i as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
            let c = curve_with_cardinality(j, params.m, p, &mut rng)?;
            let site = site_from_curve(c, params.m, params.ell, &set, &mut rng)?;
            if site.crater_count() != 2 {
                return Err(Error::Degenerate(format!("site j = {j} has {} crater neighbours mod {p}", site.crater_count())));
            }
            Ok(site)
        })
        .collect()
}

/// Roots of U, V or W at one site: abscissa sums, `A*` or `B*`.
pub fn site_roots(site: &VolcanoSite, family: Family) -> Result<Vec<u64>, Error> {
    site.isogenies
        .iter()
        .map(|r| match family {
            Family::U => Ok(r.root()),
            Family::V => Ok(r.a_star),
            Family::W => Ok(r.b_star),
            _ => Err(Error::Input(format!("family {} has no roots at a site", family.as_str()))),
        })
        .collect()
}

/// `sigma_1..sigma_{l+1}` at one site.
pub fn site_power_sums(site: &VolcanoSite, family: Family) -> Result<Vec<u64>, Error> {
    let p = site.curve.p;
    let roots = site_roots(site, family)?;
    let mut pw = vec![1u64; roots.len()];
    let mut out = Vec::with_capacity(roots.len());
    for _ in 0..roots.len() {
        let mut s = 0;
        for (x, r) in pw.iter_mut().zip(&roots) {
            *x = mulmod(*x, *r, p);
            s = addmod(s, *x, p);
        }
        out.push(s);
    }
    Ok(out)
}

/// Each `sigma_t` as a form mod p, by solving over the sites.
pub fn sigma_forms_mod(sites: &[VolcanoSite], ell: u64, family: Family, p: u64) -> Result<Vec<Form<u64>>, Error> {
    let w = family.x_weight();
    let f = PrimeField::new(p);
    let sums: Vec<Vec<u64>> = sites.iter().map(|s| site_power_sums(s, family)).collect::<Result<_, _>>()?;
    let mut forms = Vec::with_capacity(ell as usize + 1);
    for t in 1..=ell as u32 + 1 {
        let wt = w * t;
        let mut form = Form::new();
        if wt == 2 {
            if sums.iter().any(|s| s[0] != 0) {
                return Err(Error::Numerical(format!("sigma_1 does not vanish mod {p}")));
            }
            forms.push(form);
            continue;
        }
        let rows: Vec<Vec<u64>> = sites
            .iter()
            .map(|s| {
                let (e4, e6, d) = s.forms();
                point_rows(&f, 1, wt, &e4, &e6, &d)
            })
            .collect();
        let rhs: Vec<u64> = sums.iter().map(|s| s[t as usize - 1]).collect();
        if rows.len() < j_max(wt) as usize + 1 {
            return Err(Error::Input(format!("{} sites cannot determine weight {wt}", rows.len())));
        }
        match arith::solve_mod(&rows, &rhs, p) {
            LinearSolution::Unique(sol) => {
                for ((i6, i4, i12), c) in weight_exponents(wt / 2)?.into_iter().zip(sol) {
                    if c != 0 {
                        form.insert([i4, i6, i12], c);
                    }
                }
            }
            LinearSolution::Deficient(r) => {
                return Err(Error::Degenerate(format!("weight {wt} system has rank {r} mod {p}")));
            }
            LinearSolution::Inconsistent => {
                return Err(Error::Numerical(format!("weight {wt} system is inconsistent mod {p}")));
            }
        }
        forms.push(form);
    }
    Ok(forms)
}

/// U, V or W mod p from the sites.
pub fn compute_poly_mod(sites: &[VolcanoSite], ell: u64, family: Family, p: u64) -> Result<TriPoly, Error> {
    let forms = sigma_forms_mod(sites, ell, family, p)?;
    polynomial_from_forms(&PrimeField::new(p), &forms, family, ell, family.x_weight())
}

fn mono_value(m: &Mono, x: u64, e4: u64, e6: u64, d: u64, p: u64) -> u64 {
    let mut v = powmod(x, m[0] as u64, p);
    v = mulmod(v, powmod(e4, m[1] as u64, p), p);
    v = mulmod(v, powmod(e6, m[2] as u64, p), p);
    mulmod(v, powmod(d, m[3] as u64, p), p)
}

/// `dU/dX` at a point, mod p.
pub fn u_prime_mod(u: &TriPoly, x: u64, e4: u64, e6: u64, d: u64, p: u64) -> u64 {
    let f = PrimeField::new(p);
    let mut s = 0;
    for (m, c) in &u.terms {
        if m[0] == 0 {
            continue;
        }
        let dm = [m[0] - 1, m[1], m[2], m[3]];
        let c = mulmod(f.reduce(c), m[0] as u64 % p, p);
        s = addmod(s, mulmod(c, mono_value(&dm, x, e4, e6, d, p), p), p);
    }
    s
}

/// Linear system for a numerator. Dual rows evaluate at the codomain and
/// `X = -l kappa_1` with right side `l^4 A U'` (or `l^6 B U'`); primal rows
/// evaluate at the domain and `X = kappa_1` with right side `A* U'` (`B* U'`).
pub fn numerator_system(sites: &[VolcanoSite], ell: u64, u: &TriPoly, which: Family, p: u64, dual: bool) -> Result<(Vec<Vec<u64>>, Vec<u64>), Error> {
    let support = numerator_support(ell, which)?;
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    let l = ell % p;
    for s in sites {
        for r in &s.isogenies {
            let (x, (e4, e6, d), scale) = if dual {
                let k = if which == Family::A { mulmod(powmod(l, 4, p), s.curve.a, p) } else { mulmod(powmod(l, 6, p), s.curve.b, p) };
                (negmod(mulmod(l, r.root(), p), p), forms_of(r.a_star, r.b_star, p), k)
            } else {
                (r.root(), s.forms(), if which == Family::A { r.a_star } else { r.b_star })
            };
            rows.push(support.iter().map(|m| mono_value(m, x, e4, e6, d, p)).collect());
            rhs.push(mulmod(scale, u_prime_mod(u, x, e4, e6, d, p), p));
        }
    }
    Ok((rows, rhs))
}

/// Rank of the numerator system and its number of unknowns.
pub fn numerator_rank(sites: &[VolcanoSite], ell: u64, u: &TriPoly, which: Family, p: u64, dual: bool) -> Result<(usize, usize), Error> {
    let (rows, _) = numerator_system(sites, ell, u, which, p, dual)?;
    let n = numerator_support(ell, which)?.len();
    Ok((arith::rank_mod(&rows, n, p), n))
}

/// Numerator `A_l` or `B_l` mod p from the dual system.
pub fn compute_numerators_mod(sites: &[VolcanoSite], ell: u64, u: &TriPoly, which: Family, p: u64) -> Result<TriPoly, Error> {
    let support = numerator_support(ell, which)?;
    let (rows, rhs) = numerator_system(sites, ell, u, which, p, true)?;
    match arith::solve_mod(&rows, &rhs, p) {
        LinearSolution::Unique(sol) => {
            let mut t = TriPoly::new(which, ell, 2, numerator_weight(ell, which)?);
            t.modulus = Some(p);
            for (m, v) in support.iter().zip(sol) {
                t.add_term(*m, BigInt::from(v));
            }
            Ok(t)
        }
        LinearSolution::Deficient(r) => Err(Error::Degenerate(format!("dual numerator system has rank {r} < {} mod {p}", support.len()))),
        LinearSolution::Inconsistent => Err(Error::Numerical(format!("dual numerator system is inconsistent mod {p}"))),
    }
}

/// Any family mod one volcano prime.
pub fn compute_family_mod(params: &VolcanoParams, cp: &ClassPoly, family: Family, seed: u64) -> Result<TriPoly, Error> {
    let sites = partial_volcano(params, cp, seed)?;
    match family {
        Family::U | Family::V | Family::W => compute_poly_mod(&sites, params.ell, family, params.p),
        Family::A | Family::B => {
            let u = compute_poly_mod(&sites, params.ell, Family::U, params.p)?;
            compute_numerators_mod(&sites, params.ell, &u, family, params.p)
        }
        Family::Phi => Err(Error::Input("Phi has no volcano method".into())),
    }
}

fn residues(t: &TriPoly) -> BTreeMap<Mono, u64> {
    t.terms.iter().map(|(m, c)| (*m, u64::try_from(c).unwrap())).collect()
}

fn shape(ell: u64, family: Family) -> Result<TriPoly, Error> {
    Ok(match family {
        Family::A | Family::B => TriPoly::new(family, ell, 2, numerator_weight(ell, family)?),
        _ => TriPoly::new(family, ell, family.x_weight(), family.x_weight() * (ell as u32 + 1)),
    })
}

/// CRT of polynomials known modulo distinct primes, into the symmetric range.
pub fn crt_assemble(ell: u64, family: Family, parts: &[TriPoly]) -> Result<TriPoly, Error> {
    let mut acc = CrtAccumulator::<Mono>::new();
    let mut support: Option<BTreeSet<Mono>> = None;
    for t in parts {
        let p = t.modulus.ok_or_else(|| Error::Input("CRT input is not reduced".into()))?;
        let s: BTreeSet<Mono> = t.terms.keys().copied().collect();
        if let Some(prev) = &support {
            if !s.is_subset(prev) && !prev.is_subset(&s) {
                return Err(Error::Degenerate(format!("monomial support mod {p} disagrees with earlier primes")));
            }
        }
        support = Some(support.map_or(s.clone(), |x| x.union(&s).copied().collect()));
        acc.add(p, &residues(t))?;
    }
    let mut out = shape(ell, family)?;
    out.terms = acc.lift();
    Ok(out)
}

/// Result of a multi-prime volcano run.
#[derive(Clone, Debug)]
pub struct VolcanoRun {
    pub poly: TriPoly,
    pub primes: Vec<u64>,
    pub disc: i64,
}

/// Start of the descending search for CRT primes.
pub const VOLCANO_PRIME_START: u64 = 1 << 31;

/// Exact polynomial from volcano primes descending from `below`, adding
/// primes until one more agrees with the lift.
pub fn compute_volcano_exact(ell: u64, family: Family, cp: &ClassPoly, below: u64, seed: u64) -> Result<VolcanoRun, Error> {
    if !suitable(ell, cp.disc, cp.h) {
        return Err(Error::Input(format!("D = {} (h = {}) is unusable for l = {ell}", cp.disc, cp.h)));
    }
    let l = ell as f64;
    let nats = match family {
        Family::A | Family::B => 3.0 * (l + 1.0) * l.ln() + 30.0,
        _ => 2.0 * family.x_weight() as f64 * (l + 1.0) * l.ln() + 2.0 * l.ln(),
    };
    let per = (below as f64).ln() - 0.5;
    let initial = ((nats + std::f64::consts::LN_2) / per).ceil() as usize + 1;
    let mut acc = CrtAccumulator::<Mono>::new();
    let mut tried = BTreeSet::new();
    let mut batch = initial + 1;
    let mut next_below = below;
    loop {
        let params = volcano_primes(ell, cp.disc, next_below, batch, &tried);
        if params.is_empty() {
            return Err(Error::Input("ran out of volcano primes".into()));
        }
        next_below = params.last().unwrap().p - 1;
        let results: Vec<(u64, Result<TriPoly, Error>)> =
            params.par_iter().map(|vp| (vp.p, compute_family_mod(vp, cp, family, seed))).collect();
        for (p, r) in results {
            tried.insert(p);
            let t = match r {
                Ok(t) => t,
                Err(Error::Degenerate(_)) => continue,
                Err(e) => return Err(e),
            };
            let res = residues(&t);
            if acc.primes.len() >= initial && acc.agrees_with(p, &res) {
                let mut poly = shape(ell, family)?;
                poly.terms = acc.lift();
                let mut primes = acc.primes.clone();
                primes.push(p);
                return Ok(VolcanoRun { poly, primes, disc: cp.disc });
            }
            acc.add(p, &res)?;
        }
        if tried.len() > 64 * initial.max(4) {
            return Err(Error::Numerical("volcano lift did not stabilise".into()));
        }
        batch = (initial / 4).max(2);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fricke_series::{compute_fricke_integers, compute_numerator_mod};

    const P: u64 = 1811;

    fn neighbour_table() -> Vec<((u64, u64), Vec<(u64, u64, u64)>)> {
        vec![
            ((1582, 902), vec![(594, 422, 226), (1543, 911, 1542), (937, 1244, 1283), (1333, 561, 1691), (879, 342, 1212), (757, 1578, 1290)]),
            ((1662, 405), vec![(1770, 433, 529), (1439, 1411, 1536), (259, 355, 1810), (382, 1793, 1733), (1472, 543, 433), (413, 1603, 1203)]),
            ((1451, 1331), vec![(1096, 1433, 743), (1371, 1367, 98), (1105, 1195, 207), (1657, 1699, 787), (811, 812, 1769), (779, 1311, 18)]),
            ((1013, 747), vec![(1691, 473, 1705), (509, 342, 1245), (1642, 417, 1406), (127, 765, 1519), (905, 1464, 145), (1277, 254, 1224)]),
            ((224, 753), vec![(1485, 892, 1566), (823, 1106, 908), (397, 1451, 1729), (131, 673, 450), (654, 1798, 1353), (1805, 1025, 1238)]),
            ((1128, 1504), vec![(1275, 1672, 1176), (1409, 761, 1362), (907, 1757, 309), (824, 1267, 781), (578, 1320, 1208), (1168, 1207, 597)]),
        ]
    }

    fn reference_sites() -> Vec<VolcanoSite> {
        let cp = ClassPoly::builtin(-71).unwrap();
        let js: BTreeSet<u64> = crater_js(&cp, P, 1).unwrap().into_iter().collect();
        let curves = [(1582, 902), (1662, 405), (1451, 1331), (1013, 747), (224, 753), (1128, 1504), (91, 725)];
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        curves.iter().map(|&(a, b)| site_from_curve(Curve::new(a, b, P).unwrap(), 1800, 5, &js, &mut rng).unwrap()).collect()
    }

    #[test]
    fn class_polynomial_roots() {
        let cp = ClassPoly::builtin(-71).unwrap();
        assert_eq!(cp.h, 7);
        assert_eq!(crater_js(&cp, P, 3).unwrap(), vec![313, 1073, 1288, 1312, 1402, 1767, 1808]);
        let cp = ClassPoly::builtin(-439).unwrap();
        assert_eq!(cp.h, 15);
        assert!(ClassPoly::parse("-71 1\n1\n").is_err());
        assert!(ClassPoly::parse("5 0\n1\n").is_err());
    }

    #[test]
    fn root_finding() {
        let p = 10007;
        // (x - 3)(x - 5)(x - 9999)(x^2 + 1), and x^2 + 1 is irreducible mod 10007
        let mut f = vec![1u64];
        for r in [3u64, 5, 9999] {
            f = arith::mul_full(&f, &[negmod(r, p), 1], p);
        }
        f = arith::mul_full(&f, &[1, 0, 1], p);
        assert_eq!(roots_mod_p(&f, p, 9), vec![3, 5, 9999]);
    }

    #[test]
    fn prime_selection() {
        let vp = find_volcano_prime(5, -71, 1800, 1900).unwrap();
        assert_eq!((vp.p, vp.t, vp.v, vp.m), (1811, 12, 2, 1800));
        assert_eq!(volcano_params(5, -71, 1811), Some(vp));
        assert_eq!(volcano_params(5, -71, 1009), None);
        assert!(suitable(5, -71, 7));
        assert!(!suitable(7, -71, 7));
        for ell in [7, 11, 13] {
            assert!(suitable(ell, -439, 15));
            let ps = volcano_primes(ell, -439, 1 << 24, 4, &BTreeSet::new());
            assert_eq!(ps.len(), 4);
            for vp in ps {
                let four_p = 4 * vp.p as i128;
                assert_eq!(four_p, (vp.t as i128).pow(2) + 439 * (ell as i128 * vp.v as i128).pow(2));
                assert_eq!(vp.m % (ell * ell), 0);
                assert_ne!(vp.m % (ell * ell * ell), 0);
            }
        }
    }

    #[test]
    fn curve_construction() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let c = curve_with_cardinality(313, 1800, P, &mut rng).unwrap();
        assert_eq!(c.j(), 313);
        let expected = Curve::new(1582, 902, P).unwrap();
        let iso = (1..P).any(|u| {
            mulmod(powmod(u, 4, P), c.a, P) == expected.a && mulmod(powmod(u, 6, P), c.b, P) == expected.b
        });
        assert!(iso);
        assert!(curve_from_j(0, P).is_err());
        assert!(curve_from_j(1728, P).is_err());
        for j in [5u64, 100, 1808] {
            assert_eq!(curve_from_j(j, P).unwrap().j(), j);
        }
    }

    #[test]
    fn torsion_points() {
        let c = Curve::new(1582, 902, P).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut seen = BTreeSet::new();
        for _ in 0..200 {
            let q = random_l_torsion_point(&c, 1800, 5, &mut rng).unwrap();
            assert!(c.mul(5, &Some(q)).is_none());
            seen.insert(velu_isogenous_curve(&c, q, 5).unwrap().kernel_x);
        }
        assert_eq!(seen.len(), 6);
        assert!(random_l_torsion_point(&c, 1801, 5, &mut rng).is_err());
    }

    #[test]
    fn table_one_neighbours() {
        let sites = reference_sites();
        for (site, (curve, expect)) in sites.iter().zip(neighbour_table()) {
            assert_eq!((site.curve.a, site.curve.b), curve);
            let mut got: Vec<(u64, u64, u64)> = site.isogenies.iter().map(|r| (r.a_star, r.b_star, r.root())).collect();
            let mut expect = expect;
            got.sort();
            expect.sort();
            assert_eq!(got, expect);
            assert_eq!(site.crater_count(), 2);
            assert!(site.isogenies.iter().all(|r| r.kappa[0] == 2));
        }
        assert_eq!(site_power_sums(&sites[0], Family::U).unwrap(), vec![0, 105, 1680, 1379, 756, 772]);
        assert_eq!(site_power_sums(&sites[6], Family::U).unwrap(), vec![0, 1793, 1523, 589, 1233, 134]);
    }

    #[test]
    fn sigma_forms_at_1811() {
        let sites = reference_sites();
        let forms = sigma_forms_mod(&sites, 5, Family::U, P).unwrap();
        let f = |v: &[([u32; 3], u64)]| v.iter().copied().collect::<Form<u64>>();
        assert_eq!(forms[1], f(&[([1, 0, 0], 120)]));
        assert_eq!(forms[2], f(&[([0, 1, 0], 960)]));
        assert_eq!(forms[3], f(&[([2, 0, 0], 1025)]));
        assert_eq!(forms[4], f(&[([1, 1, 0], 235)]));
        assert_eq!(forms[5], f(&[([3, 0, 0], 648), ([0, 0, 1], 523)]));
    }

    #[test]
    fn sites_follow_u() {
        let cp = ClassPoly::builtin(-71).unwrap();
        let vp = volcano_params(5, -71, P).unwrap();
        let sites = partial_volcano(&vp, &cp, 7).unwrap();
        assert_eq!(sites.len(), 7);
        let u = compute_fricke_integers(5, Family::U).unwrap();
        let f = PrimeField::new(P);
        for s in &sites {
            let (e4, e6, d) = s.forms();
            for r in &s.isogenies {
                assert_eq!(u.eval(&f, &r.root(), &e4, &e6, &d), 0);
            }
            assert_eq!(s.crater_count(), 2);
            assert_eq!(s.isogenies.len() - s.crater_count(), 4);
        }
        let again = partial_volcano(&vp, &cp, 7).unwrap();
        assert_eq!(sites, again);
        let other: Vec<Vec<Vec<u64>>> = partial_volcano(&vp, &cp, 8).unwrap().iter().map(|s| s.isogenies.iter().map(|r| vec![r.root(), r.j_star]).collect()).collect();
        let mut a: Vec<Vec<u64>> = sites.iter().flat_map(|s| s.isogenies.iter().map(|r| vec![s.j, r.j_star])).collect();
        let mut b: Vec<Vec<u64>> = partial_volcano(&vp, &cp, 8).unwrap().iter().flat_map(|s| s.isogenies.iter().map(|r| vec![s.j, r.j_star])).collect();
        a.sort();
        b.sort();
        assert_eq!(a, b);
        assert_eq!(other.len(), 7);
    }

    #[test]
    fn velu_maps_points() {
        let sites = reference_sites();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for s in &sites {
            let c = s.curve;
            let (a, b) = (c.a, c.b);
            for r in &s.isogenies {
                let k = r.kappa;
                let lhs_a = submod(a, r.a_star, P);
                let rhs_a = mulmod(5, addmod(mulmod(6, k[2], P), mulmod(mulmod(2, a, P), k[0], P), P), P);
                assert_eq!(lhs_a, rhs_a);
                let rhs_b = mulmod(7, addmod(addmod(mulmod(10, k[3], P), mulmod(mulmod(6, a, P), k[1], P), P), mulmod(mulmod(4, b, P), k[0], P), P), P);
                assert_eq!(submod(b, r.b_star, P), rhs_b);
                let image = Curve::new(r.a_star, r.b_star, P).unwrap();
                for _ in 0..4 {
                    let pt = c.random_point(&mut rng);
                    if pt.map_or(false, |(x, _)| r.kernel_x.contains(&x)) {
                        continue;
                    }
                    assert!(image.contains(&velu_image(&c, &r.kernel_x, &pt)));
                }
            }
        }
    }

    #[test]
    fn u5_v5_w5_mod_1811() {
        let cp = ClassPoly::builtin(-71).unwrap();
        let vp = volcano_params(5, -71, P).unwrap();
        let sites = partial_volcano(&vp, &cp, 1).unwrap();
        for fam in [Family::U, Family::V, Family::W] {
            let got = compute_poly_mod(&sites, 5, fam, P).unwrap();
            assert_eq!(got.canonical(), compute_fricke_integers(5, fam).unwrap().reduce_mod(P).canonical(), "{fam:?}");
        }
        let u = compute_poly_mod(&sites, 5, Family::U, P).unwrap();
        for which in [Family::A, Family::B] {
            let got = compute_numerators_mod(&sites, 5, &u, which, P).unwrap();
            let series = compute_numerator_mod(5, &u, which, P).unwrap();
            assert_eq!(got.canonical(), series.canonical());
            for m in got.terms.keys() {
                assert_eq!(2 * m[0] + 4 * m[1] + 6 * m[2] + 12 * m[3], numerator_weight(5, which).unwrap());
            }
        }
    }

    #[test]
    fn crt_with_two_primes() {
        let cp = ClassPoly::builtin(-71).unwrap();
        let vp1 = volcano_params(5, -71, P).unwrap();
        let vp2 = find_volcano_prime(5, -71, 1 << 40, (1 << 40) + (1 << 26)).unwrap();
        let parts = [compute_family_mod(&vp1, &cp, Family::U, 1).unwrap(), compute_family_mod(&vp2, &cp, Family::U, 1).unwrap()];
        let u = crt_assemble(5, Family::U, &parts).unwrap();
        assert_eq!(u.canonical(), compute_fricke_integers(5, Family::U).unwrap().canonical());
    }

    #[test]
    fn exact_driver() {
        let cp = ClassPoly::builtin_for(5).unwrap();
        let run = compute_volcano_exact(5, Family::U, &cp, VOLCANO_PRIME_START, 3).unwrap();
        assert_eq!(run.poly.canonical(), compute_fricke_integers(5, Family::U).unwrap().canonical());
        assert!(run.primes.len() >= 2);
    }

    #[test]
    fn eleven_primal_system_is_deficient() {
        let cp = ClassPoly::builtin_for(11).unwrap();
        let vp = volcano_primes(11, cp.disc, VOLCANO_PRIME_START, 1, &BTreeSet::new()).remove(0);
        let sites = partial_volcano(&vp, &cp, 1).unwrap();
        let u = compute_poly_mod(&sites, 11, Family::U, vp.p).unwrap();
        for which in [Family::A, Family::B] {
            let n = numerator_support(11, which).unwrap().len();
            let (primal, _) = numerator_system(&sites[..2], 11, &u, which, vp.p, false).unwrap();
            let (dual, _) = numerator_system(&sites[..2], 11, &u, which, vp.p, true).unwrap();
            assert!(arith::rank_mod(&primal, n, vp.p) < n);
            assert_eq!(arith::rank_mod(&dual, n, vp.p), n);
        }
        assert_eq!(numerator_support(11, Family::A).unwrap().len(), 20);
    }
}
