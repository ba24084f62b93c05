//! U, V, W and the form polynomials of `f(N tau)` from exact q-expansions:
//! power sums of the conjugates by decimation, expression in the E4/E6/Delta
//! basis, Newton's identities. The numerators giving the isogenous curve
//! come from a linear system on q-coefficients.

use crate::arith::{self, LinearSolution};
use crate::cosets::psi;
use crate::crt::{primes_for_height, reconstruct_stable};
use crate::formbasis::{build_basis, express_form, weight_exponents};
use crate::newton::newton_to_coefficients;
use crate::poly::{Family, Form, FormAlgebra, Mono, TriPoly};
use crate::qseries::{decimate, delta_series, eisenstein_series, multiplier_series, QSeries};
use crate::ring::{Integers, PrimeField, Ring};
use crate::Error;
use num_bigint::BigInt;
use std::collections::BTreeMap;

/// Extra q-coefficients beyond the weight bound.
pub const DEFAULT_ORDER_GUARD: usize = 4;

/// `ceil(w * degree / 12) + guard`.
pub fn working_order(weight: u32, degree: u64, guard: usize) -> usize {
    (weight as u64 * degree).div_ceil(12) as usize + guard
}

/// Power sums `sigma_1..sigma_n` of the conjugates of a form, each a
/// q-series with coefficients in the ring.
#[derive(Clone, Debug)]
pub struct PowerSumSet<R: Ring> {
    pub ell: u64,
    /// weight of one conjugate
    pub weight: u32,
    pub sums: Vec<QSeries<R>>,
}

/// Series of the root of `U_l` attached to `tau -> l tau`, and the series
/// whose conjugates give the other `l` roots. For odd l these are
/// `-(l/2) F_l(q)` and `F_l(q)/2`; for l = 2, `-2 F_2(q)` and `F_2(q)`.
pub fn u_root_series<R: Ring>(ell: u64, order: usize, ring: R) -> Result<(QSeries<R>, QSeries<R>), Error> {
    let m = multiplier_series(ell, order, ring);
    let half = if ell == 2 { m } else { m.div_small(2)? };
    let dist = half.scale_i64(-(ell as i64));
    Ok((dist, half))
}

pub fn power_sums_u<R: Ring>(ell: u64, order: usize, ring: R) -> Result<PowerSumSet<R>, Error> {
    if !arith::is_prime(ell) {
        return Err(Error::Input(format!("{ell} is not prime")));
    }
    let big = ell as usize * order;
    let (dist, conj) = u_root_series(ell, big, ring.clone())?;
    let dist = dist.truncate(order);
    let mut dp = QSeries::one(ring.clone(), order);
    let mut cp = QSeries::one(ring, big);
    let mut sums = Vec::with_capacity(ell as usize + 1);
    for _ in 0..=ell {
        dp = dp.mul(&dist);
        cp = cp.mul(&conj);
        sums.push(dp.add(&decimate(&cp, ell as usize, 1)));
    }
    Ok(PowerSumSet { ell, weight: 2, sums })
}

fn mobius(mut n: u64) -> i64 {
    let mut r = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            r = -r;
        }
        p += 1;
    }
    if n > 1 {
        r = -r;
    }
    r
}

fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

/// Power sums of the `psi(N)` conjugates `D^-w f((A tau + B)/D)`, scaled by
/// `N^w`, grouped by divisor `D` with `A = N/D`. `f` must be known to order
/// `N * order`.
pub fn power_sums_fn<R: Ring>(f: &QSeries<R>, weight: u32, n: u64, order: usize) -> Result<PowerSumSet<R>, Error> {
    let ring = f.ring.clone();
    let big = n as usize * order;
    if f.coeffs.len() < big {
        return Err(Error::Order(format!("f known to order {}, need {big}", f.coeffs.len())));
    }
    let f = f.truncate(big);
    let mut ft = QSeries::one(ring.clone(), big);
    let mut sums = Vec::new();
    for t in 1..=psi(n) {
        ft = ft.mul(&f);
        let mut s = QSeries::zero(ring.clone(), order);
        for d in divisors(n) {
            let a = n / d;
            let scale = ring.pow(&ring.from_i64(a as i64), weight as u64 * t);
            for g in divisors(num_integer::gcd(a, d)) {
                let mu = mobius(g);
                if mu == 0 {
                    continue;
                }
                let part = decimate(&ft, (d / g) as usize, (a / g) as usize).truncate(order);
                s = s.add(&part.scale(&ring.mul_i64(&scale, mu)));
            }
        }
        sums.push(s);
    }
    Ok(PowerSumSet { ell: n, weight, sums })
}

/// Power sums for U, V (roots `-3 E4` scaled) or W (roots `-2 E6` scaled).
pub fn power_sums_family<R: Ring>(ell: u64, family: Family, order: usize, ring: R) -> Result<PowerSumSet<R>, Error> {
    let (k, c) = match family {
        Family::U => return power_sums_u(ell, order, ring),
        Family::V => (2, -3),
        Family::W => (3, -2),
        _ => return Err(Error::Input(format!("family {} has no power sums", family.as_str()))),
    };
    if !arith::is_prime(ell) {
        return Err(Error::Input(format!("{ell} is not prime")));
    }
    let e = eisenstein_series(k, ell as usize * order, ring.clone());
    let mut set = power_sums_fn(&e, 2 * k, ell, order)?;
    let mut ct = ring.one();
    for s in set.sums.iter_mut() {
        ct = ring.mul_i64(&ct, c);
        *s = s.scale(&ct);
    }
    Ok(set)
}

/// A weight-`w` form as a polynomial in (E4, E6, Delta), keys `[i4, i6, i12]`.
pub fn express_weight<R: Ring>(f: &QSeries<R>, w: u32, e4: &QSeries<R>, e6: &QSeries<R>, d: &QSeries<R>) -> Result<Form<R::T>, Error> {
    let ring = &f.ring;
    let mut out = Form::new();
    match w {
        0 => {
            let c = f.coeff(0);
            if f.sub(&QSeries::one(ring.clone(), f.coeffs.len()).scale(&c)).is_zero() {
                if !ring.is_zero(&c) {
                    out.insert([0, 0, 0], c);
                }
                return Ok(out);
            }
        }
        2 => {
            if f.is_zero() {
                return Ok(out);
            }
        }
        _ if w % 2 == 0 => {
            let basis = build_basis(w, e4, e6, d)?;
            let coeffs = express_form(f, &basis)?;
            for ((i6, i4, i12), c) in weight_exponents(w / 2)?.into_iter().zip(coeffs) {
                if !ring.is_zero(&c) {
                    out.insert([i4, i6, i12], c);
                }
            }
            return Ok(out);
        }
        _ => {}
    }
    Err(Error::Numerical(format!("series is not a form of weight {w}")))
}

/// Monic polynomial `X^n + c_1 X^{n-1} + ...` from its power sums.
pub fn polynomial_from_power_sums<R: Ring>(set: &PowerSumSet<R>, family: Family) -> Result<TriPoly, Error> {
    let ring = set.sums[0].ring.clone();
    let order = set.sums.iter().map(|s| s.coeffs.len()).min().unwrap();
    let e4 = eisenstein_series(2, order, ring.clone());
    let e6 = eisenstein_series(3, order, ring.clone());
    let d = delta_series(order, ring.clone());
    let mut forms = Vec::with_capacity(set.sums.len());
    for (t, s) in set.sums.iter().enumerate() {
        forms.push(express_weight(s, set.weight * (t as u32 + 1), &e4, &e6, &d)?);
    }
    polynomial_from_forms(&ring, &forms, family, set.ell, set.weight)
}

/// Monic polynomial from its power sums given as forms in (E4, E6, Delta).
pub fn polynomial_from_forms<R: Ring>(ring: &R, forms: &[Form<R::T>], family: Family, ell: u64, weight: u32) -> Result<TriPoly, Error> {
    let alg = FormAlgebra { ring: ring.clone() };
    let coeffs = newton_to_coefficients(&alg, forms)?;
    let n = coeffs.len() as u32;
    let mut p = TriPoly::new(family, ell, weight, weight * n);
    p.modulus = ring.modulus();
    p.add_term([n, 0, 0, 0], BigInt::from(1));
    for (k, c) in coeffs.iter().enumerate() {
        for (m, v) in c {
            let v = ring.to_bigint(v).ok_or_else(|| Error::NonIntegral(format!("coefficient of X^{}", n - 1 - k as u32)))?;
            p.add_term([n - 1 - k as u32, m[0], m[1], m[2]], v);
        }
    }
    Ok(p)
}

/// U, V or W over one ring (the integers, or a prime field).
pub fn compute_fricke_polynomial<R: Ring>(ell: u64, family: Family, ring: R, guard: usize) -> Result<TriPoly, Error> {
    let order = working_order(family.x_weight(), ell + 1, guard);
    let set = power_sums_family(ell, family, order, ring)?;
    polynomial_from_power_sums(&set, family)
}

fn residues(p: &TriPoly) -> BTreeMap<Mono, u64> {
    p.terms.iter().map(|(m, c)| (*m, u64::try_from(c).unwrap())).collect()
}

fn from_reconstruction(mut shape: TriPoly, values: BTreeMap<Mono, BigInt>) -> TriPoly {
    shape.modulus = None;
    shape.terms = values;
    shape
}

fn word_prime_ok(ell: u64) -> impl Fn(u64) -> bool {
    move |p| p > 1728 && p > ell + 1
}

/// Exact U, V or W: runs modulo word primes in parallel and lifts by CRT,
/// adding primes until the lift is stable.
pub fn compute_fricke_exact(ell: u64, family: Family, guard: usize) -> Result<TriPoly, Error> {
    let l = ell as f64;
    let nats = 2.0 * family.x_weight() as f64 * (l + 1.0) * l.ln() + 2.0 * l.ln();
    let rec = reconstruct_stable(primes_for_height(nats), word_prime_ok(ell), |p| {
        compute_fricke_polynomial(ell, family, PrimeField::new(p), guard).map(|t| residues(&t))
    })?;
    let shape = TriPoly::new(family, ell, family.x_weight(), family.x_weight() * (ell as u32 + 1));
    Ok(from_reconstruction(shape, rec.values))
}

/// Which level-one form `f` is in `Phi[f(N tau)]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormTag {
    E4,
    E6,
    Delta,
}

impl FormTag {
    pub fn weight(&self) -> u32 {
        match self {
            FormTag::E4 => 4,
            FormTag::E6 => 6,
            FormTag::Delta => 12,
        }
    }

    pub fn parse(s: &str) -> Result<FormTag, Error> {
        match s {
            "E4" | "e4" => Ok(FormTag::E4),
            "E6" | "e6" => Ok(FormTag::E6),
            "D" | "Delta" | "delta" => Ok(FormTag::Delta),
            _ => Err(Error::Input(format!("unknown form {s}"))),
        }
    }

    pub fn series<R: Ring>(&self, order: usize, ring: R) -> QSeries<R> {
        match self {
            FormTag::E4 => eisenstein_series(2, order, ring),
            FormTag::E6 => eisenstein_series(3, order, ring),
            FormTag::Delta => delta_series(order, ring),
        }
    }
}

/// Characteristic polynomial of `N^w f(N tau)` over `Gamma_0(N)`, degree
/// `psi(N)`, over one ring.
pub fn compute_phi_general<R: Ring>(n: u64, tag: FormTag, ring: R, guard: usize) -> Result<TriPoly, Error> {
    if n < 2 {
        return Err(Error::Input("level must be at least 2".into()));
    }
    let w = tag.weight();
    let order = working_order(w, psi(n), guard);
    let f = tag.series(n as usize * order, ring);
    let set = power_sums_fn(&f, w, n, order)?;
    polynomial_from_power_sums(&set, Family::Phi)
}

pub fn compute_phi_exact(n: u64, tag: FormTag, guard: usize) -> Result<TriPoly, Error> {
    let w = tag.weight() as f64;
    let nn = n as f64;
    let nats = 2.0 * w * psi(n) as f64 * nn.ln() + 40.0;
    let rec = reconstruct_stable(primes_for_height(nats), word_prime_ok(n), |p| {
        compute_phi_general(n, tag, PrimeField::new(p), guard).map(|t| residues(&t))
    })?;
    let shape = TriPoly::new(Family::Phi, n, tag.weight(), tag.weight() * psi(n) as u32);
    Ok(from_reconstruction(shape, rec.values))
}

/// Which numerator: `A` gives `A* U'`, `B` gives `B* U'` at a root of U.
pub fn numerator_weight(ell: u64, which: Family) -> Result<u32, Error> {
    match which {
        Family::A => Ok(2 * ell as u32 + 4),
        Family::B => Ok(2 * ell as u32 + 6),
        _ => Err(Error::Input(format!("{} is not a numerator", which.as_str()))),
    }
}

/// Unknown monomials `X^r E4^i4 E6^i6 Delta^i12` of a numerator, r <= l.
pub fn numerator_support(ell: u64, which: Family) -> Result<Vec<Mono>, Error> {
    let total = numerator_weight(ell, which)?;
    let mut out = Vec::new();
    for r in 0..=ell as u32 {
        let w = total - 2 * r;
        if w < 4 {
            continue;
        }
        for (i6, i4, i12) in weight_exponents(w / 2)? {
            out.push([r, i4, i6, i12]);
        }
    }
    Ok(out)
}

struct FormPowers<R: Ring> {
    e4: Vec<QSeries<R>>,
    e6: QSeries<R>,
    d: Vec<QSeries<R>>,
}

impl<R: Ring> FormPowers<R> {
    fn new(order: usize, ring: R) -> Self {
        let one = QSeries::one(ring.clone(), order);
        FormPowers {
            e4: vec![one.clone(), eisenstein_series(2, order, ring.clone())],
            e6: eisenstein_series(3, order, ring.clone()),
            d: vec![one, delta_series(order, ring)],
        }
    }

    fn monomial(&mut self, i4: u32, i6: u32, i12: u32) -> QSeries<R> {
        while self.e4.len() <= i4 as usize {
            let x = self.e4.last().unwrap().mul(&self.e4[1]);
            self.e4.push(x);
        }
        while self.d.len() <= i12 as usize {
            let x = self.d.last().unwrap().mul(&self.d[1]);
            self.d.push(x);
        }
        let mut s = self.e4[i4 as usize].mul(&self.d[i12 as usize]);
        for _ in 0..i6 {
            s = s.mul(&self.e6);
        }
        s
    }
}

/// One numerator modulo p from the q-expansion identity
/// `N(X(q), E4, E6, Delta) = c(q) U'(X(q))` at the root `X(q) = -(l/2) F_l(q)`,
/// with `c = -3 l^4 E4(q^l)` for A and `-2 l^6 E6(q^l)` for B.
pub fn compute_numerator_mod(ell: u64, u: &TriPoly, which: Family, p: u64) -> Result<TriPoly, Error> {
    let ring = PrimeField::new(p);
    let support = numerator_support(ell, which)?;
    let n = support.len();
    let mut order = n + 8;
    loop {
        let (x, _) = u_root_series(ell, order, ring)?;
        let mut powers = FormPowers::new(order, ring);
        let mut xp = vec![QSeries::one(ring, order)];
        for _ in 0..=ell {
            let nx = xp.last().unwrap().mul(&x);
            xp.push(nx);
        }
        let (k, c, e) = if which == Family::A { (2, -3i64, 4) } else { (3, -2i64, 6) };
        let lift = eisenstein_series(k, order.div_ceil(ell as usize) + 1, ring)
            .expand(ell as usize)
            .truncate(order)
            .scale(&ring.mul_i64(&ring.pow(&ring.from_i64(ell as i64), e), c));
        let mut du = QSeries::zero(ring, order);
        for (m, cf) in &u.terms {
            if m[0] == 0 {
                continue;
            }
            let coef = ring.mul_i64(&ring.from_bigint(cf), m[0] as i64);
            du = du.add(&xp[m[0] as usize - 1].mul(&powers.monomial(m[1], m[2], m[3])).scale(&coef));
        }
        let rhs = lift.mul(&du);
        let columns: Vec<QSeries<PrimeField>> = support.iter().map(|m| xp[m[0] as usize].mul(&powers.monomial(m[1], m[2], m[3]))).collect();
        let rows: Vec<Vec<u64>> = (0..order).map(|i| columns.iter().map(|c| c.coeffs[i]).collect()).collect();
        match arith::solve_mod(&rows, &rhs.coeffs, p) {
            LinearSolution::Unique(sol) => {
                let mut t = TriPoly::new(which, ell, 2, numerator_weight(ell, which)?);
                t.modulus = Some(p);
                for (m, v) in support.iter().zip(sol) {
                    t.add_term(*m, BigInt::from(v));
                }
                return Ok(t);
            }
            LinearSolution::Inconsistent => {
                return Err(Error::Numerical(format!("numerator system for l = {ell} is inconsistent mod {p}")));
            }
            LinearSolution::Deficient(r) => {
                if order > 8 * n + 64 {
                    return Err(Error::Degenerate(format!("numerator system has rank {r} < {n} at order {order}")));
                }
                order *= 2;
            }
        }
    }
}

/// Exact numerators `(A_l, B_l)` by CRT over word primes.
pub fn compute_numerators_series(ell: u64, u: &TriPoly) -> Result<(TriPoly, TriPoly), Error> {
    if u.family != Family::U || u.ell != ell || u.modulus.is_some() {
        return Err(Error::Input("expected the exact U polynomial of the same level".into()));
    }
    let l = ell as f64;
    let mut out = Vec::new();
    for which in [Family::A, Family::B] {
        let nats = 3.0 * (l + 1.0) * l.ln() + 30.0;
        let rec = reconstruct_stable(primes_for_height(nats), word_prime_ok(ell), |p| {
            compute_numerator_mod(ell, &u.reduce_mod(p), which, p).map(|t| residues(&t))
        })?;
        let shape = TriPoly::new(which, ell, 2, numerator_weight(ell, which)?);
        out.push(from_reconstruction(shape, rec.values));
    }
    let b = out.pop().unwrap();
    let a = out.pop().unwrap();
    Ok((a, b))
}

/// U, V or W over the integers directly (small l).
pub fn compute_fricke_integers(ell: u64, family: Family) -> Result<TriPoly, Error> {
    compute_fricke_polynomial(ell, family, Integers, DEFAULT_ORDER_GUARD)
}
