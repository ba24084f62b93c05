//! Weight-homogeneous polynomials in X and (E4, E6, Delta), or in X and
//! (A, B), with exact coefficients.

use crate::ring::{Algebra, PrimeField, Rationals, Ring};
use crate::Error;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// Which polynomial a [`TriPoly`] holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    U,
    V,
    W,
    /// numerator giving A*
    A,
    /// numerator giving B*
    B,
    /// characteristic polynomial of a form f(N tau)
    Phi,
}

impl Family {
    pub fn as_str(&self) -> &'static str {
        match self {
            Family::U => "U",
            Family::V => "V",
            Family::W => "W",
            Family::A => "A",
            Family::B => "B",
            Family::Phi => "Phi",
        }
    }

    pub fn parse(s: &str) -> Result<Family, Error> {
        match s {
            "U" | "u" => Ok(Family::U),
            "V" | "v" => Ok(Family::V),
            "W" | "w" => Ok(Family::W),
            "A" | "a" => Ok(Family::A),
            "B" | "b" => Ok(Family::B),
            "Phi" | "phi" => Ok(Family::Phi),
            _ => Err(Error::Input(format!("unknown family {s}"))),
        }
    }

    /// Weight of X for U, V, W.
    pub fn x_weight(&self) -> u32 {
        match self {
            Family::V => 4,
            Family::W => 6,
            _ => 2,
        }
    }
}

/// Exponents `(r, i4, i6, i12)` of `X^r E4^i4 E6^i6 Delta^i12`.
pub type Mono = [u32; 4];

/// Polynomial in `X, E4, E6, Delta` with integer coefficients, or with
/// residues in `[0, p)` when `modulus` is set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriPoly {
    pub family: Family,
    pub ell: u64,
    /// weight of X
    pub weight_x: u32,
    /// common weight of every monomial
    pub total_weight: u32,
    pub modulus: Option<u64>,
    pub terms: BTreeMap<Mono, BigInt>,
}

/// Exponents `(r, iA, iB)`.
pub type AbMono = [u32; 3];

/// Polynomial in `X, A, B` with rational coefficients (integers for l > 3).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ABPoly {
    pub family: Family,
    pub ell: u64,
    pub weight_x: u32,
    pub total_weight: u32,
    pub modulus: Option<u64>,
    pub terms: BTreeMap<AbMono, BigRational>,
}

pub fn mono_weight(m: &Mono, weight_x: u32) -> u32 {
    weight_x * m[0] + 4 * m[1] + 6 * m[2] + 12 * m[3]
}

impl TriPoly {
    pub fn new(family: Family, ell: u64, weight_x: u32, total_weight: u32) -> Self {
        TriPoly { family, ell, weight_x, total_weight, modulus: None, terms: BTreeMap::new() }
    }

    pub fn add_term(&mut self, m: Mono, c: BigInt) {
        let e = self.terms.entry(m).or_insert_with(BigInt::zero);
        *e += c;
        if let Some(p) = self.modulus {
            *e = e.mod_floor(&BigInt::from(p));
        }
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn coeff(&self, m: &Mono) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn degree_x(&self) -> u32 {
        self.terms.keys().map(|m| m[0]).max().unwrap_or(0)
    }

    /// Rewrite `E6^2 = E4^3 - 1728 Delta` until every `i6` is 0 or 1.
    pub fn canonical(&self) -> TriPoly {
        let mut out = TriPoly { terms: BTreeMap::new(), ..self.clone() };
        let mut stack: Vec<(Mono, BigInt)> = self.terms.iter().map(|(m, c)| (*m, c.clone())).collect();
        while let Some((m, c)) = stack.pop() {
            if m[2] >= 2 {
                stack.push(([m[0], m[1] + 3, m[2] - 2, m[3]], c.clone()));
                stack.push(([m[0], m[1], m[2] - 2, m[3] + 1], c * -1728));
            } else {
                out.add_term(m, c);
            }
        }
        out
    }

    /// Monomials whose weight differs from `total_weight`.
    pub fn homogeneity_defects(&self) -> Vec<Mono> {
        self.terms.keys().filter(|m| mono_weight(m, self.weight_x) != self.total_weight).copied().collect()
    }

    pub fn reduce_mod(&self, p: u64) -> TriPoly {
        let mut out = TriPoly { terms: BTreeMap::new(), modulus: Some(p), ..self.clone() };
        for (m, c) in &self.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    /// Coefficient of `X^r` as a map `(i4, i6, i12) -> c`.
    pub fn x_coeff(&self, r: u32) -> BTreeMap<[u32; 3], BigInt> {
        self.terms
            .iter()
            .filter(|(m, _)| m[0] == r)
            .map(|(m, c)| ([m[1], m[2], m[3]], c.clone()))
            .collect()
    }

    /// Evaluate at `(X, E4, E6, Delta)` in a ring.
    pub fn eval<R: Ring>(&self, ring: &R, x: &R::T, e4: &R::T, e6: &R::T, d: &R::T) -> R::T {
        let mut s = ring.zero();
        for (m, c) in &self.terms {
            let t = ring.mul(&ring.from_bigint(c), &ring.pow(x, m[0] as u64));
            let t = ring.mul(&t, &ring.pow(e4, m[1] as u64));
            let t = ring.mul(&t, &ring.pow(e6, m[2] as u64));
            let t = ring.mul(&t, &ring.pow(d, m[3] as u64));
            s = ring.add(&s, &t);
        }
        s
    }

    /// Substitute `Delta = (E4^3 - E6^2) / 1728`, giving a polynomial in
    /// `(X, E4, E6)` over a ring where 1728 is invertible.
    pub fn substitute_delta<R: Ring>(&self, ring: &R) -> Result<Poly3<R::T>, Error> {
        let d = poly3_delta(ring)?;
        let mut out: Poly3<R::T> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut t: Poly3<R::T> = BTreeMap::new();
            t.insert([m[0], m[1], m[2]], ring.from_bigint(c));
            for _ in 0..m[3] {
                t = poly3_mul(ring, &t, &d);
            }
            poly3_add_into(ring, &mut out, &t);
        }
        Ok(out)
    }

    pub fn to_ab_form(&self) -> Result<ABPoly, Error> {
        let q = Rationals;
        let third = BigRational::new(BigInt::from(-1), BigInt::from(3));
        let half = BigRational::new(BigInt::from(-1), BigInt::from(2));
        let mut dpoly: BTreeMap<[u32; 2], BigRational> = BTreeMap::new();
        let den = BigInt::from(-186624);
        dpoly.insert([3, 0], BigRational::new(BigInt::from(4), den.clone()));
        dpoly.insert([0, 2], BigRational::new(BigInt::from(27), den));
        let mut powers: Vec<BTreeMap<[u32; 2], BigRational>> = vec![[([0, 0], BigRational::one())].into_iter().collect()];
        let mut out = ABPoly {
            family: self.family,
            ell: self.ell,
            weight_x: self.weight_x,
            total_weight: self.total_weight,
            modulus: None,
            terms: BTreeMap::new(),
        };
        for (m, c) in &self.terms {
            while powers.len() <= m[3] as usize {
                let last = powers.last().unwrap();
                let mut next = BTreeMap::new();
                for (a, x) in last {
                    for (b, y) in &dpoly {
                        let k = [a[0] + b[0], a[1] + b[1]];
                        let e = next.entry(k).or_insert_with(BigRational::zero);
                        *e = q.add(e, &q.mul(x, y));
                    }
                }
                powers.push(next);
            }
            let base = BigRational::from_integer(c.clone())
                * pow_rat(&third, m[1])
                * pow_rat(&half, m[2]);
            for (k, v) in &powers[m[3] as usize] {
                let key = [m[0], m[1] + k[0], m[2] + k[1]];
                let e = out.terms.entry(key).or_insert_with(BigRational::zero);
                *e += &base * v;
            }
        }
        out.terms.retain(|_, v| !v.is_zero());
        if let Some(p) = self.modulus {
            return out.reduce_mod(p);
        }
        Ok(out)
    }
}

fn pow_rat(x: &BigRational, e: u32) -> BigRational {
    let mut r = BigRational::one();
    for _ in 0..e {
        r *= x;
    }
    r
}

impl ABPoly {
    pub fn coeff(&self, m: &AbMono) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    pub fn reduce_mod(&self, p: u64) -> Result<ABPoly, Error> {
        let f = PrimeField::new(p);
        let mut out = ABPoly { terms: BTreeMap::new(), modulus: Some(p), ..self.clone() };
        for (m, c) in &self.terms {
            let r = f.reduce_rational(c).ok_or(Error::NotInvertible(p))?;
            if r != 0 {
                out.terms.insert(*m, BigRational::from_integer(BigInt::from(r)));
            }
        }
        Ok(out)
    }

    /// Back to `(X, E4, E6, Delta)` through `A = -3 E4`, `B = -2 E6`.
    pub fn from_ab_form(&self) -> Result<TriPoly, Error> {
        let mut raw: BTreeMap<Mono, BigRational> = BTreeMap::new();
        for (m, c) in &self.terms {
            let s = BigRational::from_integer(BigInt::from(-3)).pow(m[1] as i32)
                * BigRational::from_integer(BigInt::from(-2)).pow(m[2] as i32);
            *raw.entry([m[0], m[1], m[2], 0]).or_insert_with(BigRational::zero) += c * s;
        }
        let mut t = TriPoly::new(self.family, self.ell, self.weight_x, self.total_weight);
        let mut den = BigInt::one();
        for c in raw.values() {
            den = den.lcm(c.denom());
        }
        if !den.is_one() {
            return Err(Error::NonIntegral(format!("denominator {den}")));
        }
        for (m, c) in raw {
            t.add_term(m, c.to_integer());
        }
        let mut t = t.canonical();
        if let Some(p) = self.modulus {
            t = t.reduce_mod(p);
        }
        Ok(t)
    }

    /// Natural log of the largest coefficient size, a numerator or
    /// denominator, whichever is larger.
    pub fn log_height(&self) -> Result<f64, Error> {
        let mut best: f64 = f64::NEG_INFINITY;
        for c in self.terms.values() {
            let n = bigint_ln(&c.numer().abs());
            let d = bigint_ln(c.denom());
            best = best.max(n.max(d));
        }
        if best == f64::NEG_INFINITY {
            return Err(Error::Degenerate("zero polynomial has no height".into()));
        }
        Ok(best)
    }

    /// `H / ((l + 1) ln l)` for the (X, A, B) form.
    pub fn relative_height(&self) -> Result<f64, Error> {
        let l = self.ell as f64;
        Ok(self.log_height()? / ((l + 1.0) * l.ln()))
    }
}

/// Natural log of a positive integer of any size.
pub fn bigint_ln(n: &BigInt) -> f64 {
    if n.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = n.bits();
    if bits < 1000 {
        return n.to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    let top: BigInt = n >> shift;
    top.to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

/// Polynomial in three variables `(X, E4, E6)`, sparse.
pub type Poly3<T> = BTreeMap<[u32; 3], T>;

fn poly3_delta<R: Ring>(ring: &R) -> Result<Poly3<R::T>, Error> {
    let inv = ring.div_small(&ring.one(), 1728).ok_or(Error::NotInvertible(1728))?;
    let mut d = BTreeMap::new();
    d.insert([0, 3, 0], inv.clone());
    d.insert([0, 0, 2], ring.neg(&inv));
    Ok(d)
}

pub fn poly3_add_into<R: Ring>(ring: &R, acc: &mut Poly3<R::T>, p: &Poly3<R::T>) {
    for (k, v) in p {
        let e = acc.entry(*k).or_insert_with(|| ring.zero());
        *e = ring.add(e, v);
    }
    acc.retain(|_, v| !ring.is_zero(v));
}

pub fn poly3_mul<R: Ring>(ring: &R, a: &Poly3<R::T>, b: &Poly3<R::T>) -> Poly3<R::T> {
    let mut out: Poly3<R::T> = BTreeMap::new();
    for (ka, va) in a {
        for (kb, vb) in b {
            let k = [ka[0] + kb[0], ka[1] + kb[1], ka[2] + kb[2]];
            let e = out.entry(k).or_insert_with(|| ring.zero());
            *e = ring.add(e, &ring.mul(va, vb));
        }
    }
    out.retain(|_, v| !ring.is_zero(v));
    out
}

/// Partial derivative with respect to variable `var` (0 = X, 1 = E4, 2 = E6).
pub fn poly3_derivative<R: Ring>(ring: &R, p: &Poly3<R::T>, var: usize) -> Poly3<R::T> {
    let mut out = BTreeMap::new();
    for (k, v) in p {
        if k[var] == 0 {
            continue;
        }
        let mut nk = *k;
        nk[var] -= 1;
        let c = ring.mul_i64(v, k[var] as i64);
        if !ring.is_zero(&c) {
            out.insert(nk, c);
        }
    }
    out
}

pub fn poly3_eval<R: Ring>(ring: &R, p: &Poly3<R::T>, x: &[R::T; 3]) -> R::T {
    let mut s = ring.zero();
    for (k, v) in p {
        let mut t = v.clone();
        for i in 0..3 {
            if k[i] > 0 {
                t = ring.mul(&t, &ring.pow(&x[i], k[i] as u64));
            }
        }
        s = ring.add(&s, &t);
    }
    s
}

/// Polynomials in `(E4, E6, Delta)` kept canonical (`i6 <= 1`), as an
/// algebra for Newton's identities over a coefficient ring.
#[derive(Clone, Debug)]
pub struct FormAlgebra<R: Ring> {
    pub ring: R,
}

pub type Form<T> = BTreeMap<[u32; 3], T>;

impl<R: Ring> FormAlgebra<R> {
    pub fn monomial(&self, k: [u32; 3], c: R::T) -> Form<R::T> {
        let mut f = BTreeMap::new();
        if !self.ring.is_zero(&c) {
            f.insert(k, c);
        }
        f
    }

    fn push(&self, out: &mut Form<R::T>, k: [u32; 3], c: R::T) {
        let r = &self.ring;
        if k[1] >= 2 {
            self.push(out, [k[0] + 3, k[1] - 2, k[2]], c.clone());
            self.push(out, [k[0], k[1] - 2, k[2] + 1], r.mul_i64(&c, -1728));
            return;
        }
        let e = out.entry(k).or_insert_with(|| r.zero());
        *e = r.add(e, &c);
    }
}

impl<R: Ring> Algebra for FormAlgebra<R> {
    type T = Form<R::T>;
    fn zero(&self) -> Self::T {
        BTreeMap::new()
    }
    fn add(&self, a: &Self::T, b: &Self::T) -> Self::T {
        let mut out = a.clone();
        poly3_add_into(&self.ring, &mut out, b);
        out
    }
    fn sub(&self, a: &Self::T, b: &Self::T) -> Self::T {
        self.add(a, &self.neg(b))
    }
    fn neg(&self, a: &Self::T) -> Self::T {
        a.iter().map(|(k, v)| (*k, self.ring.neg(v))).collect()
    }
    fn mul(&self, a: &Self::T, b: &Self::T) -> Self::T {
        let mut out = BTreeMap::new();
        for (ka, va) in a {
            for (kb, vb) in b {
                let k = [ka[0] + kb[0], ka[1] + kb[1], ka[2] + kb[2]];
                self.push(&mut out, k, self.ring.mul(va, vb));
            }
        }
        out.retain(|_, v| !self.ring.is_zero(v));
        out
    }
    fn div_small(&self, a: &Self::T, k: u64) -> Option<Self::T> {
        a.iter().map(|(m, v)| self.ring.div_small(v, k).map(|x| (*m, x))).collect()
    }
    fn is_zero(&self, a: &Self::T) -> bool {
        a.values().all(|v| self.ring.is_zero(v))
    }
}

/// JSON shape of a polynomial file.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PolyFile {
    pub family: String,
    pub ell: u64,
    pub vars: String,
    pub monomials: Vec<(Vec<u32>, String)>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub modulus: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub meta: Option<serde_json::Value>,
}

impl TriPoly {
    pub fn to_file(&self) -> PolyFile {
        PolyFile {
            family: self.family.as_str().into(),
            ell: self.ell,
            vars: "E4E6D".into(),
            monomials: self.terms.iter().map(|(m, c)| (m.to_vec(), c.to_string())).collect(),
            modulus: self.modulus,
            meta: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("serializable")
    }

    pub fn from_file(f: &PolyFile) -> Result<TriPoly, Error> {
        if f.vars != "E4E6D" {
            return Err(Error::Input(format!("expected E4E6D variables, got {}", f.vars)));
        }
        let family = Family::parse(&f.family)?;
        let mut t = TriPoly::new(family, f.ell, family.x_weight(), 0);
        t.modulus = f.modulus;
        for (m, c) in &f.monomials {
            if m.len() != 4 {
                return Err(Error::Input("monomial needs four exponents".into()));
            }
            let c: BigInt = c.parse().map_err(|_| Error::Input(format!("bad coefficient {c}")))?;
            t.add_term([m[0], m[1], m[2], m[3]], c);
        }
        let top = t.terms.keys().map(|m| mono_weight(m, t.weight_x)).max().unwrap_or(0);
        t.total_weight = top;
        Ok(t)
    }

    pub fn from_json(s: &str) -> Result<TriPoly, Error> {
        let f: PolyFile = serde_json::from_str(s).map_err(|e| Error::Input(e.to_string()))?;
        Self::from_file(&f)
    }
}

impl ABPoly {
    pub fn to_file(&self) -> PolyFile {
        PolyFile {
            family: self.family.as_str().into(),
            ell: self.ell,
            vars: "AB".into(),
            monomials: self.terms.iter().map(|(m, c)| (m.to_vec(), c.to_string())).collect(),
            modulus: self.modulus,
            meta: None,
        }
    }
}

fn write_term(f: &mut fmt::Formatter<'_>, first: bool, c: &str, vars: &[(&str, u32)]) -> fmt::Result {
    let (neg, mag) = match c.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, c),
    };
    if first {
        if neg {
            write!(f, "-")?;
        }
    } else {
        write!(f, " {} ", if neg { '-' } else { '+' })?;
    }
    let factors: Vec<String> = vars
        .iter()
        .filter(|(_, e)| *e > 0)
        .map(|(v, e)| if *e == 1 { v.to_string() } else { format!("{v}^{e}") })
        .collect();
    if factors.is_empty() {
        write!(f, "{mag}")
    } else if mag == "1" {
        write!(f, "{}", factors.join("*"))
    } else {
        write!(f, "{mag}*{}", factors.join("*"))
    }
}

/// Descending X-degree, then powers of Delta ascending.
impl fmt::Display for TriPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut keys: Vec<&Mono> = self.terms.keys().collect();
        keys.sort_by(|a, b| b[0].cmp(&a[0]).then(a[3].cmp(&b[3])).then(b[1].cmp(&a[1])).then(a[2].cmp(&b[2])));
        if keys.is_empty() {
            return write!(f, "0");
        }
        for (i, m) in keys.iter().enumerate() {
            let c = self.terms[*m].to_string();
            write_term(f, i == 0, &c, &[("E4", m[1]), ("E6", m[2]), ("D", m[3]), ("X", m[0])])?;
        }
        Ok(())
    }
}

impl fmt::Display for ABPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut keys: Vec<&AbMono> = self.terms.keys().collect();
        keys.sort_by(|a, b| b[0].cmp(&a[0]).then(b[1].cmp(&a[1])));
        if keys.is_empty() {
            return write!(f, "0");
        }
        for (i, m) in keys.iter().enumerate() {
            let c = self.terms[*m].to_string();
            write_term(f, i == 0, &c, &[("X", m[0]), ("A", m[1]), ("B", m[2])])?;
        }
        Ok(())
    }
}

/// Parse a display string such as `X^6 - 60*E4*X^4 + 552960*D` back into a
/// polynomial; the inverse of the `Display` output.
pub fn parse_tri(s: &str, family: Family, ell: u64) -> Result<TriPoly, Error> {
    let mut t = TriPoly::new(family, ell, family.x_weight(), 0);
    for (coef, vars) in split_terms(s)? {
        let mut m = [0u32; 4];
        for (v, e) in vars {
            let idx = match v.as_str() {
                "X" => 0,
                "E4" => 1,
                "E6" => 2,
                "D" => 3,
                _ => return Err(Error::Input(format!("unknown variable {v}"))),
            };
            m[idx] += e;
        }
        t.add_term(m, coef);
    }
    t.total_weight = t.terms.keys().map(|m| mono_weight(m, t.weight_x)).max().unwrap_or(0);
    Ok(t)
}

/// Same as [`parse_tri`] for `(X, A, B)`; coefficients may be fractions.
pub fn parse_ab(s: &str, family: Family, ell: u64) -> Result<ABPoly, Error> {
    let mut out = ABPoly {
        family,
        ell,
        weight_x: family.x_weight(),
        total_weight: 0,
        modulus: None,
        terms: BTreeMap::new(),
    };
    for (coef, vars) in split_terms_rational(s)? {
        let mut m = [0u32; 3];
        for (v, e) in vars {
            let idx = match v.as_str() {
                "X" => 0,
                "A" => 1,
                "B" => 2,
                _ => return Err(Error::Input(format!("unknown variable {v}"))),
            };
            m[idx] += e;
        }
        *out.terms.entry(m).or_insert_with(BigRational::zero) += coef;
    }
    out.terms.retain(|_, v| !v.is_zero());
    out.total_weight = out.terms.keys().map(|m| out.weight_x * m[0] + 4 * m[1] + 6 * m[2]).max().unwrap_or(0);
    Ok(out)
}

type RawTerm<C> = (C, Vec<(String, u32)>);

fn split_terms(s: &str) -> Result<Vec<RawTerm<BigInt>>, Error> {
    split_terms_rational(s)?
        .into_iter()
        .map(|(c, v)| {
            if c.is_integer() {
                Ok((c.to_integer(), v))
            } else {
                Err(Error::NonIntegral(c.to_string()))
            }
        })
        .collect()
}

fn split_terms_rational(s: &str) -> Result<Vec<RawTerm<BigRational>>, Error> {
    let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let mut terms = Vec::new();
    let mut cur = String::new();
    for (i, ch) in cleaned.chars().enumerate() {
        if (ch == '+' || ch == '-') && i > 0 && !cur.ends_with('^') {
            terms.push(std::mem::take(&mut cur));
        }
        cur.push(ch);
    }
    if !cur.is_empty() {
        terms.push(cur);
    }
    let mut out = Vec::new();
    for term in terms {
        let (neg, body) = match term.strip_prefix('-') {
            Some(b) => (true, b.to_string()),
            None => (false, term.trim_start_matches('+').to_string()),
        };
        let mut coef = BigRational::one();
        let mut vars = Vec::new();
        for factor in body.split('*') {
            if factor.is_empty() {
                continue;
            }
            if factor.chars().next().unwrap().is_ascii_digit() {
                let v = if let Some((n, d)) = factor.split_once('/') {
                    let n: BigInt = n.parse().map_err(|_| Error::Input(format!("bad number {factor}")))?;
                    let d: BigInt = d.parse().map_err(|_| Error::Input(format!("bad number {factor}")))?;
                    BigRational::new(n, d)
                } else {
                    let n: BigInt = factor.parse().map_err(|_| Error::Input(format!("bad number {factor}")))?;
                    BigRational::from_integer(n)
                };
                coef *= v;
            } else {
                let (v, e) = match factor.split_once('^') {
                    Some((v, e)) => (v.to_string(), e.parse::<u32>().map_err(|_| Error::Input(format!("bad exponent {factor}")))?),
                    None => (factor.to_string(), 1),
                };
                vars.push((v, e));
            }
        }
        if neg {
            coef = -coef;
        }
        out.push((coef, vars));
    }
    Ok(out)
}
